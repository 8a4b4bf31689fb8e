//! Personal-data sources: string literals and identifiers matched against
//! category rules.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::OnceLock;

use fancy_regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::frontend::ir::{Expr, IRFunction, IRModule, LiteralKind, Span, StmtKind};
use crate::method::MethodRef;

const DEFAULT_RULES: &str = include_str!("../data/default_rules.json");

/// The human-name identifier rule, applied after snake_case normalisation.
pub const NAME_RULE: &str = r"(?i)(?:^|_|\b)(?:first|given|full|last|sur(?!geon))[_]?name";

#[derive(Debug, Clone)]
pub struct PdCategory {
    pub name: String,
    pub is_pii: bool,
    pub reconstructed: bool,
    pub identifier_patterns: Vec<Regex>,
    pub literal_patterns: Vec<Regex>,
}

impl PdCategory {
    pub fn matches_identifier(&self, normalized: &str) -> bool {
        self.identifier_patterns.iter().any(|r| r.is_match(normalized).unwrap_or(false))
    }

    pub fn matches_literal(&self, text: &str) -> bool {
        self.literal_patterns.iter().any(|r| r.is_match(text).unwrap_or(false))
    }
}

#[derive(Debug, Clone)]
pub struct RuleSet {
    pub categories: Vec<PdCategory>,
    /// Callee names that clear taint. Parsed and kept, never applied.
    pub sanitizers: Vec<String>,
    pub warnings: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRules {
    #[serde(default)]
    version: Option<String>,
    #[serde(default)]
    comment: Option<String>,
    #[serde(default)]
    sanitizers: Vec<String>,
    categories: Vec<RawCategory>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    name: String,
    pii: bool,
    #[serde(default)]
    reconstructed: bool,
    #[serde(default)]
    identifier_patterns: Vec<String>,
    #[serde(default)]
    literal_patterns: Vec<String>,
}

impl RuleSet {
    pub fn default_rules() -> RuleSet {
        Self::from_json_str(DEFAULT_RULES, "default_rules.json").expect("embedded rules are valid")
    }

    pub fn from_json_str(text: &str, file: &str) -> Result<RuleSet, Error> {
        let raw: RawRules = serde_json::from_str(text).map_err(|e| Error::SchemaError {
            file: file.to_string(),
            line: e.line(),
            reason: e.to_string(),
        })?;
        let _ = (raw.version, raw.comment);
        let schema = |reason: String| Error::SchemaError { file: file.to_string(), line: 1, reason };
        let mut seen = BTreeSet::new();
        let mut categories = Vec::new();
        for c in raw.categories {
            if !seen.insert(c.name.clone()) {
                return Err(schema(format!("duplicate category `{}`", c.name)));
            }
            if c.identifier_patterns.is_empty() && c.literal_patterns.is_empty() {
                return Err(schema(format!("category `{}` has no patterns", c.name)));
            }
            let compile = |p: &String| {
                Regex::new(p).map_err(|e| Error::BadRegex {
                    category: c.name.clone(),
                    pattern: p.clone(),
                    reason: e.to_string(),
                })
            };
            categories.push(PdCategory {
                identifier_patterns: c.identifier_patterns.iter().map(compile).collect::<Result<_, _>>()?,
                literal_patterns: c.literal_patterns.iter().map(compile).collect::<Result<_, _>>()?,
                name: c.name,
                is_pii: c.pii,
                reconstructed: c.reconstructed,
            });
        }
        let mut warnings = Vec::new();
        if categories.len() != 10 {
            warnings.push(format!("{file}: {} personal-data categories configured (default is 10)", categories.len()));
        }
        Ok(RuleSet { categories, sanitizers: raw.sanitizers, warnings })
    }

    pub fn category(&self, name: &str) -> Option<&PdCategory> {
        self.categories.iter().find(|c| c.name == name)
    }
}

pub fn load_rules(path: &Path) -> Result<RuleSet, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::UnreadableFile {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    RuleSet::from_json_str(&text, &path.display().to_string())
}

/// `firstName` → `first_name`, `XMLHttpRequest` → `xml_http_request`.
pub fn to_snake_case(ident: &str) -> String {
    let chars: Vec<char> = ident.chars().collect();
    let mut out = String::with_capacity(ident.len() + 4);
    for (i, &c) in chars.iter().enumerate() {
        if c.is_uppercase() && i > 0 {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || prev.is_ascii_digit() || (prev.is_uppercase() && next_lower) {
                out.push('_');
            }
        }
        out.extend(c.to_lowercase());
    }
    out
}

/// Whether an identifier names a human name component.
pub fn name_rule_reference(identifier: &str) -> bool {
    static RULE: OnceLock<Regex> = OnceLock::new();
    let rule = RULE.get_or_init(|| Regex::new(NAME_RULE).expect("name rule compiles"));
    rule.is_match(&to_snake_case(identifier)).unwrap_or(false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SourceKind {
    LiteralText,
    VariableIdentifier,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PersonalDataSource {
    pub category: String,
    pub pii: bool,
    pub kind: SourceKind,
    pub file: String,
    pub span: Span,
    pub line: usize,
    /// The identifier, or the literal text without quotes.
    pub symbol: String,
    pub function: MethodRef,
}

/// Literal text without its quotes or template backticks.
pub fn literal_content(text: &str) -> &str {
    let t = text.trim();
    for q in ['"', '\'', '`'] {
        if t.len() >= 2 && t.starts_with(q) && t.ends_with(q) {
            return &t[1..t.len() - 1];
        }
    }
    t
}

/// Zero-argument `getX()` accessors count as reading `X`.
pub fn getter_property(name: &str) -> Option<&str> {
    let rest = name.strip_prefix("get")?;
    rest.starts_with(|c: char| c.is_ascii_uppercase() || c == '_').then_some(rest)
}

/// Identifier occurrences in one function, in source order.
pub fn identifier_surfaces(f: &IRFunction) -> Vec<(String, Span)> {
    let mut out: Vec<(String, Span)> = f
        .params
        .iter()
        .zip(&f.param_spans)
        .filter(|(p, _)| !p.starts_with('<'))
        .map(|(p, s)| (p.clone(), *s))
        .collect();
    for stmt in &f.body {
        match &stmt.kind {
            StmtKind::VarDecl { lhs, lhs_span, rhs } => {
                if !lhs.starts_with('<') {
                    out.push((lhs.clone(), *lhs_span));
                }
                if let Some(e) = rhs {
                    expr_surfaces(e, &mut out);
                }
            }
            StmtKind::Assign { lhs, rhs } => {
                expr_surfaces(lhs, &mut out);
                expr_surfaces(rhs, &mut out);
            }
            StmtKind::CallStmt(e) => expr_surfaces(e, &mut out),
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    expr_surfaces(e, &mut out);
                }
            }
        }
    }
    out
}

fn expr_surfaces(e: &Expr, out: &mut Vec<(String, Span)>) {
    match e {
        Expr::Ident { name, span } => {
            if !name.starts_with('<') && name != "this" {
                out.push((name.clone(), *span));
            }
        }
        Expr::Literal { .. } => {}
        Expr::Member { base, field, span } => {
            expr_surfaces(base, out);
            if field != "[]" && field != "<init>" {
                out.push((field.clone(), *span));
            }
        }
        Expr::Call(c) => {
            match c.callee.as_ref() {
                // the callee name is not data, except for zero-argument getters
                Expr::Member { base, field, span } => {
                    expr_surfaces(base, out);
                    if c.args.is_empty() && getter_property(field).is_some() {
                        out.push((field.clone(), *span));
                    }
                }
                Expr::Ident { name, span } => {
                    if c.args.is_empty() && getter_property(name).is_some() {
                        out.push((name.clone(), *span));
                    }
                }
                other => expr_surfaces(other, out),
            }
            for a in &c.args {
                expr_surfaces(a, out);
            }
        }
        Expr::Compound { parts, .. } => {
            for p in parts {
                expr_surfaces(p, out);
            }
        }
    }
}

/// String and template literals in one function, in source order.
pub fn literal_surfaces(f: &IRFunction) -> Vec<(String, Span)> {
    let mut out = Vec::new();
    for stmt in &f.body {
        for e in stmt.exprs() {
            e.walk(&mut |x| {
                if let Expr::Literal { text, kind: LiteralKind::String | LiteralKind::Template, span } = x {
                    out.push((literal_content(text).to_string(), *span));
                }
            });
        }
    }
    out.sort_by_key(|(_, s)| *s);
    out
}

/// Match rule surfaces against one module. One source per (symbol,
/// function, category), located at its first occurrence.
pub fn detect_sources(module: &IRModule, rules: &RuleSet) -> Vec<PersonalDataSource> {
    let lines = LineStarts::new(&module.file.text);
    let mut out = Vec::new();
    for f in &module.functions {
        let mut seen: BTreeSet<(SourceKind, String, usize)> = BTreeSet::new();
        let mut push = |kind: SourceKind, symbol: &str, span: Span, ci: usize, out: &mut Vec<PersonalDataSource>| {
            if seen.insert((kind, symbol.to_string(), ci)) {
                let c = &rules.categories[ci];
                out.push(PersonalDataSource {
                    category: c.name.clone(),
                    pii: c.is_pii,
                    kind,
                    file: module.path().to_string(),
                    span,
                    line: lines.line(span.start),
                    symbol: symbol.to_string(),
                    function: f.id.clone(),
                });
            }
        };
        for (name, span) in identifier_surfaces(f) {
            let norm = to_snake_case(&name);
            for (ci, c) in rules.categories.iter().enumerate() {
                if c.matches_identifier(&norm) {
                    push(SourceKind::VariableIdentifier, &name, span, ci, &mut out);
                }
            }
        }
        for (text, span) in literal_surfaces(f) {
            for (ci, c) in rules.categories.iter().enumerate() {
                if c.matches_literal(&text) {
                    push(SourceKind::LiteralText, &text, span, ci, &mut out);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        (a.span, &a.category, a.kind, &a.function).cmp(&(b.span, &b.category, b.kind, &b.function))
    });
    out
}

pub(crate) struct LineStarts(Vec<usize>);

impl LineStarts {
    pub(crate) fn new(text: &str) -> Self {
        let mut v = vec![0];
        v.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineStarts(v)
    }

    pub(crate) fn line(&self, offset: usize) -> usize {
        self.0.partition_point(|&s| s <= offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::ir::{Language, SourceFile};
    use crate::frontend::parse_file;

    fn sources(src: &str) -> Vec<PersonalDataSource> {
        let m = parse_file(SourceFile::new("a.js", Language::JsLike, src));
        detect_sources(&m, &RuleSet::default_rules())
    }

    #[test]
    fn default_rules_shape() {
        let r = RuleSet::default_rules();
        assert_eq!(r.categories.len(), 10);
        assert!(r.warnings.is_empty());
        let pii: Vec<_> = r.categories.iter().filter(|c| c.is_pii).map(|c| c.name.as_str()).collect();
        assert_eq!(pii, vec!["Account", "Contact", "PersonalID", "NationalID"]);
        assert!(r.sanitizers.is_empty());
    }

    #[test]
    fn name_rule() {
        for yes in ["firstName", "first_name", "given_name", "fullName", "lastName", "surname", "FIRST_NAME"] {
            assert!(name_rule_reference(yes), "{yes}");
        }
        for no in ["surgeonName", "surgeonname", "nickname", "rename", "filename"] {
            assert!(!name_rule_reference(no), "{no}");
        }
    }

    #[test]
    fn snake_case() {
        assert_eq!(to_snake_case("firstName"), "first_name");
        assert_eq!(to_snake_case("userID"), "user_id");
        assert_eq!(to_snake_case("XMLHttpRequest"), "xml_http_request");
        assert_eq!(to_snake_case("SSN"), "ssn");
    }

    #[test]
    fn identifiers_and_literals() {
        let s = sources("function f(firstName) { let x = \"555-01-2345\"; let surgeonList = []; send(firstName); }");
        let got: Vec<_> = s.iter().map(|s| (s.symbol.as_str(), s.category.as_str(), s.kind)).collect();
        assert_eq!(
            got,
            vec![
                ("firstName", "PersonalID", SourceKind::VariableIdentifier),
                ("555-01-2345", "NationalID", SourceKind::LiteralText),
            ]
        );
        assert_eq!(s[0].line, 1);
    }

    #[test]
    fn members_getters_and_imports() {
        let s = sources("import { email } from './x';\nfunction f(u) { log(u.phoneNumber); log(u.getEmail()); u.setEmail(1); }");
        let got: Vec<_> = s.iter().map(|s| s.symbol.as_str()).collect();
        assert_eq!(got, vec!["phoneNumber", "getEmail"]);
    }

    #[test]
    fn bad_regex_and_small_rule_files() {
        let bad = r#"{"categories":[{"name":"X","pii":false,"identifier_patterns":["(?i)("]}]}"#;
        assert!(matches!(RuleSet::from_json_str(bad, "r.json"), Err(Error::BadRegex { .. })));
        let nine: Vec<String> = (0..9)
            .map(|i| format!(r#"{{"name":"C{i}","pii":false,"identifier_patterns":["c{i}"]}}"#))
            .collect();
        let r = RuleSet::from_json_str(&format!(r#"{{"categories":[{}]}}"#, nine.join(",")), "r.json").unwrap();
        assert_eq!(r.categories.len(), 9);
        assert_eq!(r.warnings.len(), 1);
    }
}
