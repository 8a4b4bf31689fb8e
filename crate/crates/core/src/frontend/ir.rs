//! Language-neutral intermediate representation produced by both frontends.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::method::MethodRef;

/// Half-open byte range into a source file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn contains(&self, other: &Span) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn to(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Language {
    JsLike,
    JavaLike,
}

impl Language {
    pub fn from_path(path: &str) -> Option<Language> {
        let ext = path.rsplit_once('.').map(|(_, e)| e)?;
        match ext {
            "js" | "jsx" | "ts" | "tsx" | "mjs" | "cjs" => Some(Language::JsLike),
            "java" => Some(Language::JavaLike),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceFile {
    /// Relative, forward-slash separated.
    pub path: String,
    pub language: Language,
    pub text: String,
}

impl SourceFile {
    pub fn new(path: impl Into<String>, language: Language, text: impl Into<String>) -> Self {
        SourceFile {
            path: path.into().replace('\\', "/"),
            language,
            text: text.into(),
        }
    }

    /// Decode raw bytes, replacing invalid UTF-8 with U+FFFD.
    pub fn from_bytes(path: impl Into<String>, language: Language, bytes: &[u8]) -> Self {
        Self::new(path, language, String::from_utf8_lossy(bytes).into_owned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImportedSymbol {
    /// Name exported by the target (`default` for default imports).
    pub name: String,
    pub alias: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImportDecl {
    pub target: String,
    pub symbols: Vec<ImportedSymbol>,
    /// Namespace, star, or side-effect import.
    pub wildcard: bool,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LiteralKind {
    String,
    Number,
    Template,
    Regex,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallExpr {
    pub callee: Box<Expr>,
    pub args: Vec<Expr>,
    pub span: Span,
}

impl CallExpr {
    /// Dotted rendering of the callee when it is a plain identifier/member chain,
    /// e.g. `logger.info` or `this.repo.save`.
    pub fn callee_path(&self) -> Option<String> {
        self.callee.dotted()
    }

    /// The receiver expression of a member call.
    pub fn receiver(&self) -> Option<&Expr> {
        match self.callee.as_ref() {
            Expr::Member { base, .. } => Some(base),
            _ => None,
        }
    }

    /// Final name segment of the callee.
    pub fn method_name(&self) -> Option<&str> {
        match self.callee.as_ref() {
            Expr::Ident { name, .. } => Some(name),
            Expr::Member { field, .. } => Some(field),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Ident { name: String, span: Span },
    Literal { text: String, kind: LiteralKind, span: Span },
    /// Left-nested: `a.b.c` is `Member(Member(a, b), c)`. Index access uses `[]`.
    Member { base: Box<Expr>, field: String, span: Span },
    Call(CallExpr),
    /// Operator applications, ternaries, array/object literals and template
    /// interpolation: only the operands matter for data flow.
    Compound { parts: Vec<Expr>, span: Span },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Ident { span, .. }
            | Expr::Literal { span, .. }
            | Expr::Member { span, .. }
            | Expr::Compound { span, .. } => *span,
            Expr::Call(c) => c.span,
        }
    }

    pub fn ident(name: impl Into<String>, span: Span) -> Expr {
        Expr::Ident { name: name.into(), span }
    }

    pub fn dotted(&self) -> Option<String> {
        match self {
            Expr::Ident { name, .. } => Some(name.clone()),
            Expr::Member { base, field, .. } => base.dotted().map(|b| format!("{b}.{field}")),
            _ => None,
        }
    }

    /// Variable at the root of a member chain (`a` for `a.b.c`).
    pub fn root_var(&self) -> Option<&str> {
        match self {
            Expr::Ident { name, .. } => Some(name),
            Expr::Member { base, .. } => base.root_var(),
            _ => None,
        }
    }

    /// Visit every sub-expression, children before parents.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        match self {
            Expr::Ident { .. } | Expr::Literal { .. } => {}
            Expr::Member { base, .. } => base.walk(f),
            Expr::Call(c) => {
                c.callee.walk(f);
                for a in &c.args {
                    a.walk(f);
                }
            }
            Expr::Compound { parts, .. } => {
                for p in parts {
                    p.walk(f);
                }
            }
        }
        f(self);
    }

    pub fn collect_calls(&self, out: &mut Vec<CallExpr>) {
        self.walk(&mut |e| {
            if let Expr::Call(c) = e {
                out.push(c.clone());
            }
        });
    }

    pub fn contains_call(&self) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= matches!(e, Expr::Call(_)));
        found
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    VarDecl { lhs: String, lhs_span: Span, rhs: Option<Expr> },
    Assign { lhs: Expr, rhs: Expr },
    CallStmt(Expr),
    Return(Option<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub kind: StmtKind,
    pub span: Span,
    /// Every call expression nested anywhere in the statement, innermost first.
    pub calls: Vec<CallExpr>,
}

impl Statement {
    pub fn new(kind: StmtKind, span: Span) -> Self {
        let mut calls = Vec::new();
        for e in Self::exprs_of(&kind) {
            e.collect_calls(&mut calls);
        }
        Statement { kind, span, calls }
    }

    fn exprs_of(kind: &StmtKind) -> Vec<&Expr> {
        match kind {
            StmtKind::VarDecl { rhs, .. } => rhs.iter().collect(),
            StmtKind::Assign { lhs, rhs } => vec![lhs, rhs],
            StmtKind::CallStmt(e) => vec![e],
            StmtKind::Return(e) => e.iter().collect(),
        }
    }

    pub fn exprs(&self) -> Vec<&Expr> {
        Self::exprs_of(&self.kind)
    }

    /// Variable defined by this statement, if any.
    pub fn defined_var(&self) -> Option<&str> {
        match &self.kind {
            StmtKind::VarDecl { lhs, .. } => Some(lhs),
            StmtKind::Assign { lhs, .. } => lhs.root_var(),
            _ => None,
        }
    }

    /// Right-hand side, call expression or returned value.
    pub fn value(&self) -> Option<&Expr> {
        match &self.kind {
            StmtKind::VarDecl { rhs, .. } => rhs.as_ref(),
            StmtKind::Assign { rhs, .. } => Some(rhs),
            StmtKind::CallStmt(e) => Some(e),
            StmtKind::Return(e) => e.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IRFunction {
    pub id: MethodRef,
    /// Name local to the module, e.g. `save` or `UserService.save`.
    pub name: String,
    pub class: Option<String>,
    pub params: Vec<String>,
    pub param_spans: Vec<Span>,
    pub body: Vec<Statement>,
    /// Declared types of parameters and locals (Java), or the class of a
    /// `new X()` initializer (both languages). Base names only.
    pub local_types: BTreeMap<String, String>,
    pub span: Span,
    pub is_exported: bool,
}

/// A statement the parser could not handle, rendered as
/// `path:line:col: skip: <reason>`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Diagnostic {
    pub path: String,
    pub line: usize,
    pub col: usize,
    pub reason: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: skip: {}", self.path, self.line, self.col, self.reason)
    }
}

#[derive(Debug, Clone)]
pub struct IRModule {
    pub file: Arc<SourceFile>,
    pub module_name: String,
    pub imports: Vec<ImportDecl>,
    pub functions: Vec<IRFunction>,
    /// Local name of the `export default` function, JS only.
    pub default_export: Option<String>,
    /// `Class.field` → declared type name.
    pub field_types: BTreeMap<String, String>,
    pub diagnostics: Vec<Diagnostic>,
}

impl IRModule {
    pub fn function(&self, name: &str) -> Option<&IRFunction> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn path(&self) -> &str {
        &self.file.path
    }

    pub fn language(&self) -> Language {
        self.file.language
    }
}
