//! JavaScript/TypeScript-like declarations: imports, exports, classes,
//! `const`/`let`/`var` and function declarations.

use super::ir::*;
use super::parser::{PResult, Parser};
use super::lexer::TokenKind;

const CLASS_MODIFIERS: &[&str] = &[
    "static", "public", "private", "protected", "readonly", "abstract", "override", "declare",
    "async", "accessor",
];

impl Parser<'_> {
    pub(crate) fn parse_js_module(&mut self) {
        while !self.eof() {
            self.guarded(|p| p.js_top_item());
        }
    }

    fn js_top_item(&mut self) -> PResult<()> {
        if self.at("import") && !self.at_n(1, "(") && !self.at_n(1, ".") {
            return self.js_import();
        }
        if self.at("export") {
            return self.js_export();
        }
        if self.at("@") {
            self.skip_annotation();
            return Ok(());
        }
        if (self.at("abstract") || self.at("declare")) && self.at_n(1, "class") {
            self.bump();
            return self.js_class_decl(false, false);
        }
        if (self.at("namespace") || self.at("module"))
            && self.peek_at(1).is_some_and(|n| n.is_ident() && !n.newline_before)
        {
            return self.err("namespace declaration");
        }
        if (self.at("const") || self.at("let") || self.at("var")) && self.peek_at(1).is_some_and(|n| n.is_ident() || n.is("{") || n.is("[")) {
            if self.at("const") && self.at_n(1, "enum") {
                return self.skip_ts_declaration_after_const();
            }
            return self.js_var_decl(true);
        }
        self.statement()
    }

    fn skip_ts_declaration_after_const(&mut self) -> PResult<()> {
        self.bump();
        self.skip_ts_declaration()
    }

    fn string_lit(&mut self) -> PResult<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Str => {
                let t = self.bump().expect("string");
                Ok(unquote(&t.text))
            }
            _ => self.unexpected(),
        }
    }

    fn js_import(&mut self) -> PResult<()> {
        let start = self.here();
        self.bump();
        if self.at("type") && !self.at_n(1, "from") && !self.at_n(1, ",") {
            // type-only import: nothing to record
            while !self.eof() && !self.at(";") && !self.on_new_line_after_string() {
                self.bump();
            }
            self.eat(";");
            return Ok(());
        }
        let mut symbols = Vec::new();
        let mut wildcard = false;
        if self.peek().is_some_and(|t| t.kind == TokenKind::Str) {
            let target = self.string_lit()?;
            self.end_statement()?;
            self.imports.push(ImportDecl { target, symbols, wildcard: true, span: self.span_from(start) });
            return Ok(());
        }
        if self.at_ident() && !self.at("from") || (self.at("from") && self.at_n(1, ",")) {
            let (alias, _) = self.ident()?;
            if self.eat("=") {
                // TS `import x = require("m")`
                self.expect("require")?;
                self.expect("(")?;
                let target = self.string_lit()?;
                self.expect(")")?;
                self.end_statement()?;
                self.imports.push(ImportDecl {
                    target,
                    symbols: vec![ImportedSymbol { name: "*".into(), alias }],
                    wildcard: true,
                    span: self.span_from(start),
                });
                return Ok(());
            }
            symbols.push(ImportedSymbol { name: "default".into(), alias });
            self.eat(",");
        }
        if self.eat("*") {
            self.expect("as")?;
            let (alias, _) = self.ident()?;
            symbols.push(ImportedSymbol { name: "*".into(), alias });
            wildcard = true;
        } else if self.at("{") {
            self.bump();
            while !self.at("}") {
                self.eat("type");
                let name = match self.peek() {
                    Some(t) if t.is_ident() => self.bump().expect("name").text,
                    Some(t) if t.kind == TokenKind::Str => self.string_lit()?,
                    _ => return self.unexpected(),
                };
                let alias = if self.eat("as") { self.ident()?.0 } else { name.clone() };
                symbols.push(ImportedSymbol { name, alias });
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("}")?;
        }
        self.expect("from")?;
        let target = self.string_lit()?;
        if self.at("assert") || self.at("with") {
            self.bump();
            self.skip_group()?;
        }
        self.end_statement()?;
        if symbols.is_empty() {
            wildcard = true;
        }
        self.imports.push(ImportDecl { target, symbols, wildcard, span: self.span_from(start) });
        Ok(())
    }

    fn on_new_line_after_string(&self) -> bool {
        self.pos > 0
            && self.toks.get(self.pos - 1).is_some_and(|t| t.kind == TokenKind::Str)
            && self.on_new_line()
    }

    fn span_from(&self, start: usize) -> Span {
        Span::new(start, self.prev_end().max(start))
    }

    fn js_export(&mut self) -> PResult<()> {
        let start = self.here();
        self.bump();
        let default = self.eat("default");
        if self.at("=") {
            // TS `export = x`
            self.bump();
            let e = self.expr()?;
            self.push_effect(e);
            return self.end_statement();
        }
        if self.at("*") {
            self.bump();
            if self.eat("as") {
                self.ident()?;
            }
            self.expect("from")?;
            let target = self.string_lit()?;
            self.end_statement()?;
            self.imports.push(ImportDecl { target, symbols: vec![], wildcard: true, span: self.span_from(start) });
            return Ok(());
        }
        if !default && self.at("{") {
            self.bump();
            let mut names = Vec::new();
            while !self.at("}") {
                self.eat("type");
                let (name, _) = self.ident()?;
                let alias = if self.eat("as") { self.ident()?.0 } else { name.clone() };
                names.push((name, alias));
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("}")?;
            if self.eat("from") {
                let target = self.string_lit()?;
                let symbols = names
                    .into_iter()
                    .map(|(name, alias)| ImportedSymbol { name, alias })
                    .collect();
                self.imports.push(ImportDecl { target, symbols, wildcard: false, span: self.span_from(start) });
            } else {
                for (name, alias) in names {
                    self.mark_exported(&name);
                    if alias == "default" {
                        self.default_export = Some(name);
                    }
                }
            }
            return self.end_statement();
        }
        if self.at("function") || (self.at("async") && self.at_n(1, "function")) {
            return self.js_function_decl(true, default);
        }
        if self.at("class") || (self.at("abstract") && self.at_n(1, "class")) {
            self.eat("abstract");
            return self.js_class_decl(true, default);
        }
        if self.at("@") {
            self.skip_annotation();
            return Ok(());
        }
        if !default && (self.at("const") || self.at("let") || self.at("var")) {
            let before = self.functions.len();
            self.js_var_decl(true)?;
            for f in &mut self.functions[before..] {
                f.is_exported = true;
            }
            return Ok(());
        }
        if !default && (self.at("interface") || self.at("type") || self.at("enum") || self.at("declare")) {
            return self.skip_ts_declaration();
        }
        if default {
            let before = self.functions.len();
            if let Some(f) = self.try_function_value(Some("default"))? {
                if let Some(name) = f.root_var() {
                    self.default_export = Some(name.to_string());
                }
                for func in &mut self.functions[before..] {
                    if Some(&func.name) == self.default_export.as_ref() {
                        func.is_exported = true;
                    }
                }
                return self.end_statement();
            }
            let e = self.expr()?;
            if let Expr::Ident { name, .. } = &e {
                self.default_export = Some(name.clone());
                self.mark_exported(&name.clone());
            } else {
                self.push_effect(e);
            }
            return self.end_statement();
        }
        self.unexpected()
    }

    fn mark_exported(&mut self, name: &str) {
        for f in &mut self.functions {
            if f.name == name || f.class.as_deref() == Some(name) {
                f.is_exported = true;
            }
        }
    }

    pub(crate) fn js_function_decl(&mut self, exported: bool, default: bool) -> PResult<()> {
        let start = self.here();
        self.eat("async");
        self.expect("function")?;
        if self.at("*") {
            return self.err("generator function");
        }
        let name = if self.at_ident() {
            self.ident()?.0
        } else if default {
            "default".to_string()
        } else {
            return self.unexpected();
        };
        let local = self.scoped_name(&name);
        let created = self.function_rest(&local, start, exported)?;
        if default {
            self.default_export = Some(created);
        }
        Ok(())
    }

    pub(crate) fn js_class_decl(&mut self, exported: bool, default: bool) -> PResult<()> {
        self.expect("class")?;
        let name = if self.at_ident() && !self.at("extends") && !self.at("implements") {
            self.ident()?.0
        } else if default {
            "default".to_string()
        } else {
            return self.unexpected();
        };
        if self.at("<") {
            self.skip_angle()?;
        }
        if self.eat("extends") {
            let e = self.ternary()?;
            self.push_effect(e);
            if self.at("<") {
                self.skip_angle()?;
            }
        }
        if self.eat("implements") {
            self.skip_type()?;
            while self.eat(",") {
                self.skip_type()?;
            }
        }
        let class = self.scoped_name(&name);
        if default {
            self.default_export = Some(class.clone());
        }
        self.expect("{")?;
        self.class_stack.push(class.clone());
        let saved_fns = std::mem::take(&mut self.fn_stack);
        while !self.eof() && !self.at("}") {
            let class = class.clone();
            self.guarded(|p| p.js_class_member(&class, exported));
        }
        self.fn_stack = saved_fns;
        self.class_stack.pop();
        self.expect("}")?;
        Ok(())
    }

    fn js_class_member(&mut self, class: &str, exported: bool) -> PResult<()> {
        if self.eat(";") {
            return Ok(());
        }
        while self.at("@") {
            self.skip_annotation();
        }
        let start = self.here();
        let mut is_private = false;
        loop {
            let modifier = self.peek().is_some_and(|t| CLASS_MODIFIERS.contains(&t.text.as_str()) || t.is("get") || t.is("set"));
            let next_is_name = self
                .peek_at(1)
                .is_some_and(|n| n.is_ident() || n.is("#") || n.is("[") || n.kind == TokenKind::Str || n.is("*"));
            if modifier && next_is_name {
                if self.at("private") {
                    is_private = true;
                }
                self.bump();
            } else {
                break;
            }
        }
        if self.at("*") {
            return self.err("generator method");
        }
        if self.at("static") && self.at_n(1, "{") {
            self.bump();
            self.fn_stack.clear();
            return self.block();
        }
        if self.at("#") {
            is_private = true;
            self.bump();
        }
        let name = match self.peek() {
            Some(t) if t.is_ident() || t.kind == TokenKind::Str => self.bump().expect("name").text,
            Some(t) if t.is("[") => return self.err("computed member name"),
            _ => return self.unexpected(),
        };
        let name = if name == "constructor" { "<init>".to_string() } else { unquote(&name) };
        self.eat("?");
        self.eat("!");
        let local = format!("{class}.{name}");
        if self.at("(") || self.at("<") {
            self.function_rest(&local, start, exported && !is_private)?;
            return Ok(());
        }
        if self.eat(":") {
            self.skip_type()?;
        }
        if self.eat("=") {
            if let Some(_f) = self.try_function_value(Some(&local))? {
                if exported && !is_private {
                    if let Some(last) = self.functions.last_mut() {
                        last.is_exported = true;
                    }
                }
                return self.end_statement();
            }
            let e = self.expr()?;
            let span = Span::new(start, self.prev_end());
            let lhs = Expr::Member {
                base: Box::new(Expr::ident("this", Span::new(start, start))),
                field: name,
                span,
            };
            self.push_stmt(StmtKind::Assign { lhs, rhs: e }, span);
        }
        self.end_statement()
    }

    /// `const`/`let`/`var` declaration including the statement terminator.
    pub(crate) fn js_var_decl(&mut self, top_level: bool) -> PResult<()> {
        self.js_declarators(top_level)?;
        self.end_statement()
    }

    pub(crate) fn js_var_decl_no_end(&mut self) -> PResult<()> {
        self.js_declarators(false)
    }

    fn js_declarators(&mut self, top_level: bool) -> PResult<()> {
        let _ = top_level;
        self.bump();
        loop {
            let start = self.here();
            if self.at("{") || self.at("[") {
                let targets = self.binding_pattern()?;
                if self.eat(":") {
                    self.skip_type()?;
                }
                self.expect("=")?;
                let rhs = self.expr()?;
                let span = Span::new(start, self.prev_end());
                if let Some(target) = require_target(&rhs) {
                    let symbols = targets
                        .into_iter()
                        .map(|(field, local, _)| ImportedSymbol {
                            name: if field.is_empty() { "*".into() } else { field },
                            alias: local,
                        })
                        .collect();
                    self.imports.push(ImportDecl { target, symbols, wildcard: false, span });
                } else {
                    self.push_destructured(targets, rhs, span);
                }
            } else {
                let (name, nspan) = self.ident()?;
                self.eat("!");
                if self.eat(":") {
                    self.skip_type()?;
                }
                if self.eat("=") {
                    if self.try_function_value(Some(&name))?.is_some() {
                        // `const f = () => ...` defines `f`
                    } else {
                        let rhs = self.expr()?;
                        let span = Span::new(start, self.prev_end());
                        if let Some(target) = require_target(&rhs) {
                            self.imports.push(ImportDecl {
                                target,
                                symbols: vec![ImportedSymbol { name: "*".into(), alias: name }],
                                wildcard: true,
                                span,
                            });
                        } else {
                            self.push_stmt(StmtKind::VarDecl { lhs: name, lhs_span: nspan, rhs: Some(rhs) }, span);
                        }
                    }
                } else {
                    self.push_stmt(StmtKind::VarDecl { lhs: name, lhs_span: nspan, rhs: None }, nspan);
                }
            }
            if !self.eat(",") {
                break;
            }
        }
        Ok(())
    }
}

/// `require("m")` or `require("m").x` → `m`.
fn require_target(e: &Expr) -> Option<String> {
    match e {
        Expr::Call(c) => {
            let is_require = matches!(c.callee.as_ref(), Expr::Ident { name, .. } if name == "require");
            match (is_require, c.args.as_slice()) {
                (true, [Expr::Literal { text, kind: LiteralKind::String, .. }]) => Some(unquote(text)),
                _ => None,
            }
        }
        _ => None,
    }
}

pub(crate) fn unquote(s: &str) -> String {
    let b = s.as_bytes();
    if b.len() >= 2 && (b[0] == b'"' || b[0] == b'\'' || b[0] == b'`') && b[b.len() - 1] == b[0] {
        s[1..s.len() - 1].to_string()
    } else {
        s.to_string()
    }
}
