//! Java-like declarations: package, imports, classes/interfaces/enums/records,
//! fields, methods and local variable declarations.

use super::ir::*;
use super::lexer::TokenKind;
use super::parser::{PResult, Parser};

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "static", "final", "abstract", "native", "synchronized",
    "transient", "volatile", "strictfp", "default", "sealed", "non",
];

const NOT_A_TYPE: &[&str] = &[
    "return", "new", "throw", "this", "super", "if", "else", "for", "while", "do", "switch",
    "case", "default", "break", "continue", "try", "catch", "finally", "yield", "true", "false",
    "null", "instanceof", "assert", "synchronized",
];

impl Parser<'_> {
    pub(crate) fn parse_java_module(&mut self) {
        while !self.eof() {
            self.guarded(|p| p.java_top_item());
        }
    }

    fn java_top_item(&mut self) -> PResult<()> {
        if self.at("package") {
            self.bump();
            let (name, _) = self.dotted_name()?;
            self.module_name = name;
            return self.expect(";").map(|_| ());
        }
        if self.at("import") {
            return self.java_import();
        }
        if self.eat(";") {
            return Ok(());
        }
        self.java_type_decl()
    }

    fn dotted_name(&mut self) -> PResult<(String, bool)> {
        let (mut name, _) = self.ident()?;
        let mut wildcard = false;
        while self.eat(".") {
            if self.eat("*") {
                wildcard = true;
                break;
            }
            name.push('.');
            name.push_str(&self.ident()?.0);
        }
        Ok((name, wildcard))
    }

    fn java_import(&mut self) -> PResult<()> {
        let start = self.here();
        self.bump();
        self.eat("static");
        let (target, wildcard) = self.dotted_name()?;
        self.expect(";")?;
        let span = Span::new(start, self.prev_end());
        let symbols = if wildcard {
            Vec::new()
        } else {
            let last = target.rsplit('.').next().unwrap_or(&target).to_string();
            vec![ImportedSymbol { name: last.clone(), alias: last }]
        };
        self.imports.push(ImportDecl { target, symbols, wildcard, span });
        Ok(())
    }

    /// Skip modifiers and annotations; returns whether `private` was present.
    fn java_modifiers(&mut self) -> bool {
        let mut private = false;
        loop {
            if self.at("@") && !self.at_n(1, "interface") {
                self.skip_annotation();
                continue;
            }
            match self.peek() {
                Some(t) if t.is_ident() && MODIFIERS.contains(&t.text.as_str()) => {
                    // `non-sealed`
                    if t.text == "non" && !self.at_n(1, "-") {
                        break;
                    }
                    if t.text == "default" && (self.at_n(1, ":") || self.at_n(1, "->")) {
                        break;
                    }
                    private |= t.text == "private";
                    self.bump();
                }
                Some(t) if t.is("-") && self.pos > 0 && self.toks[self.pos - 1].is("non") => {
                    self.bump();
                }
                _ => break,
            }
        }
        private
    }

    /// Class, interface, enum, record or annotation type declaration.
    pub(crate) fn java_type_decl(&mut self) -> PResult<()> {
        let private = self.java_modifiers();
        self.java_type_decl_rest(private)
    }

    fn java_type_decl_rest(&mut self, private: bool) -> PResult<()> {
        let kind = match self.peek() {
            Some(t) if t.is("@") && self.at_n(1, "interface") => {
                self.bump();
                self.bump();
                self.ident()?;
                return self.skip_group();
            }
            Some(t) if t.is_ident() && matches!(t.text.as_str(), "class" | "interface" | "enum" | "record") => {
                self.bump().expect("keyword").text
            }
            _ => return self.unexpected(),
        };
        let (name, _) = self.ident()?;
        if self.at("<") {
            self.skip_angle()?;
        }
        if kind == "record" {
            self.params()?;
        }
        for kw in ["extends", "implements", "permits"] {
            if self.eat(kw) {
                self.skip_type()?;
                while self.eat(",") {
                    self.skip_type()?;
                }
            }
        }
        let class = match self.class_stack.last() {
            Some(outer) => format!("{outer}.{name}"),
            None => name.clone(),
        };
        self.expect("{")?;
        self.class_stack.push(class.clone());
        let saved_fns = std::mem::take(&mut self.fn_stack);
        if kind == "enum" {
            self.skip_enum_constants();
        }
        let exported = !private;
        while !self.eof() && !self.at("}") {
            let class = class.clone();
            let simple = name.clone();
            self.guarded(|p| p.java_member(&class, &simple, exported));
        }
        self.fn_stack = saved_fns;
        self.class_stack.pop();
        self.expect("}")?;
        Ok(())
    }

    fn skip_enum_constants(&mut self) {
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Punct {
                match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" => depth = depth.saturating_sub(1),
                    "}" => {
                        if depth == 0 {
                            return;
                        }
                        depth -= 1;
                    }
                    ";" if depth == 0 => {
                        self.bump();
                        return;
                    }
                    _ => {}
                }
            }
            self.bump();
        }
    }

    fn java_member(&mut self, class: &str, simple: &str, exported: bool) -> PResult<()> {
        if self.eat(";") {
            return Ok(());
        }
        let start = self.here();
        let private = self.java_modifiers();
        if self.at("{") {
            // instance or static initializer block
            return self.block();
        }
        if self.peek().is_some_and(|t| matches!(t.text.as_str(), "class" | "interface" | "enum" | "record"))
            && self.peek_at(1).is_some_and(|n| n.is_ident())
            || (self.at("@") && self.at_n(1, "interface"))
        {
            return self.java_type_decl_rest(private);
        }
        if self.at("<") {
            self.skip_angle()?;
        }
        // constructor: `Name(`
        if self.at(simple) && self.at_n(1, "(") {
            self.bump();
            let local = format!("{class}.<init>");
            return self.java_method_rest(&local, start, exported && !private);
        }
        let ty = self.skip_type_named()?;
        let (name, nspan) = self.ident()?;
        if self.at("(") {
            let local = format!("{class}.{name}");
            return self.java_method_rest(&local, start, exported && !private);
        }
        // field declarators
        let mut current = Some((name, nspan));
        while let Some((fname, fspan)) = current.take() {
            self.field_types.insert(format!("{class}.{fname}"), ty.clone());
            while self.at("[") {
                self.skip_group()?;
            }
            if self.eat("=") {
                let rhs = self.java_initializer()?;
                let span = Span::new(fspan.start, self.prev_end());
                let lhs = Expr::Member {
                    base: Box::new(Expr::ident("this", Span::new(fspan.start, fspan.start))),
                    field: fname,
                    span: fspan,
                };
                self.push_stmt(StmtKind::Assign { lhs, rhs }, span);
            }
            if self.eat(",") {
                current = Some(self.ident()?);
            }
        }
        self.expect(";")?;
        Ok(())
    }

    fn java_method_rest(&mut self, local: &str, start: usize, exported: bool) -> PResult<()> {
        let params = self.params()?;
        while self.at("[") {
            self.skip_group()?;
        }
        if self.eat("throws") {
            self.skip_type()?;
            while self.eat(",") {
                self.skip_type()?;
            }
        }
        if self.eat("default") {
            // annotation element default
            let _ = self.expr()?;
            self.expect(";")?;
            return Ok(());
        }
        if self.eat(";") {
            return Ok(());
        }
        self.build_function(local, params, start, exported, |p| p.block())?;
        Ok(())
    }

    fn java_initializer(&mut self) -> PResult<Expr> {
        if self.at("{") {
            let start = self.here();
            self.bump();
            let mut parts = Vec::new();
            while !self.at("}") {
                parts.push(self.java_initializer()?);
                if !self.eat(",") {
                    break;
                }
            }
            self.expect("}")?;
            return Ok(Expr::Compound { parts, span: Span::new(start, self.prev_end()) });
        }
        self.expr()
    }

    pub(crate) fn declare_type(&mut self, var: &str, ty: &str) {
        if let Some(f) = self.frames.last_mut() {
            f.types.insert(var.to_string(), ty.to_string());
        }
    }

    /// Does a local variable declaration (`Type name =`, `Type name;`) start here?
    pub(crate) fn java_local_decl_ahead(&mut self) -> bool {
        let save = self.pos;
        while self.at("final") || self.at("@") {
            if self.at("@") {
                // annotations on locals are only skipped once the decl is confirmed
                self.bump();
                let _ = self.ident();
                while self.eat(".") {
                    let _ = self.ident();
                }
                if self.at("(") && self.skip_group().is_err() {
                    self.pos = save;
                    return false;
                }
            } else {
                self.bump();
            }
        }
        let first_ok = self
            .peek()
            .is_some_and(|t| t.is_ident() && !NOT_A_TYPE.contains(&t.text.as_str()));
        let ok = first_ok
            && self.skip_type().is_ok()
            && self.at_ident()
            && self
                .peek_at(1)
                .is_some_and(|n| matches!(n.text.as_str(), "=" | ";" | "," | ":" | "[" ) && n.kind == TokenKind::Punct);
        self.pos = save;
        ok
    }

    pub(crate) fn java_foreach_ahead(&mut self) -> bool {
        let save = self.pos;
        self.eat("final");
        let ok = self.skip_type().is_ok() && self.at_ident() && self.at_n(1, ":");
        self.pos = save;
        ok
    }

    /// Local declaration; `end` consumes the trailing `;`.
    pub(crate) fn java_local_decl(&mut self, end: bool) -> PResult<()> {
        while self.at("final") || self.at("@") {
            if self.at("@") {
                self.skip_annotation();
            } else {
                self.bump();
            }
        }
        let ty = self.skip_type_named()?;
        loop {
            let (name, nspan) = self.ident()?;
            if ty != "var" {
                self.declare_type(&name, &ty);
            }
            while self.at("[") {
                self.skip_group()?;
            }
            if self.eat("=") {
                let rhs = self.java_initializer()?;
                let span = Span::new(nspan.start, self.prev_end());
                self.push_stmt(StmtKind::VarDecl { lhs: name, lhs_span: nspan, rhs: Some(rhs) }, span);
            } else {
                self.push_stmt(StmtKind::VarDecl { lhs: name, lhs_span: nspan, rhs: None }, nspan);
            }
            if !self.eat(",") {
                break;
            }
        }
        if end {
            self.expect(";")?;
        }
        Ok(())
    }
}
