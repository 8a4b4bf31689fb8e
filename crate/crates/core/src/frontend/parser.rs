//! Recursive-descent parser for the supported statement/expression subset.
//!
//! Declarations are handled in `js.rs` and `java.rs`; this file owns the
//! shared machinery: token cursor, function frames, statement-level error
//! recovery, statements and expressions.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use super::ir::*;
use super::lexer::{tokenize, LineIndex, Token, TokenKind};
use crate::method::MethodRef;

const MAX_DEPTH: usize = 160;

#[derive(Debug)]
pub(crate) struct PErr {
    pub at: usize,
    pub reason: String,
}

pub(crate) type PResult<T> = Result<T, PErr>;

#[derive(Default)]
pub(crate) struct Frame {
    pub body: Vec<Statement>,
    /// Declared (or `new`-initialised) types of locals and parameters.
    pub types: BTreeMap<String, String>,
}

pub(crate) struct Snapshot {
    functions: usize,
    body: usize,
    imports: usize,
    names: usize,
}

#[derive(Debug, Clone)]
pub(crate) struct Param {
    pub name: String,
    pub span: Span,
    /// Destructured fields `(field, local, span)` unpacked at function entry.
    pub pattern: Vec<(String, String, Span)>,
    pub ty: Option<String>,
}

pub(crate) struct Parser<'a> {
    pub file: &'a Arc<SourceFile>,
    pub java: bool,
    pub toks: Vec<Token>,
    pub pos: usize,
    pub lines: LineIndex,
    pub module_name: String,
    pub imports: Vec<ImportDecl>,
    pub functions: Vec<IRFunction>,
    pub frames: Vec<Frame>,
    pub diagnostics: Vec<Diagnostic>,
    pub class_stack: Vec<String>,
    /// Enclosing named functions, used to qualify nested declarations.
    pub fn_stack: Vec<String>,
    pub default_export: Option<String>,
    /// `Class.field` → declared type.
    pub field_types: BTreeMap<String, String>,
    pub depth: usize,
    pub used_names: Vec<String>,
    used_set: HashSet<String>,
    prev_end: usize,
}

fn is_assign_op(t: &Token) -> bool {
    t.kind == TokenKind::Punct
        && matches!(
            t.text.as_str(),
            "=" | "+=" | "-=" | "*=" | "/=" | "%=" | "&=" | "|=" | "^=" | "**=" | "<<=" | ">>="
                | ">>>=" | "&&=" | "||=" | "??="
        )
}

const BINARY_OPS: &[&str] = &[
    "+", "-", "*", "/", "%", "**", "==", "!=", "===", "!==", "<", ">", "<=", ">=", "&&", "||",
    "??", "&", "|", "^", "<<",
];

const RESERVED: &[&str] = &[
    "return", "new", "throw", "this", "super", "if", "else", "for", "while", "do", "switch",
    "case", "default", "break", "continue", "try", "catch", "finally", "class", "function",
    "import", "export", "yield", "await", "typeof", "void", "delete", "instanceof", "in", "of",
    "synchronized", "assert", "package", "goto", "const", "let", "var", "true", "false", "null",
];

impl<'a> Parser<'a> {
    pub fn new(file: &'a Arc<SourceFile>, module_name: String) -> Self {
        let java = file.language == Language::JavaLike;
        Parser {
            file,
            java,
            toks: tokenize(&file.text, 0, java),
            pos: 0,
            lines: LineIndex::new(&file.text),
            module_name,
            imports: Vec::new(),
            functions: Vec::new(),
            frames: vec![Frame::default()],
            diagnostics: Vec::new(),
            class_stack: Vec::new(),
            fn_stack: Vec::new(),
            default_export: None,
            field_types: BTreeMap::new(),
            depth: 0,
            used_names: Vec::new(),
            used_set: HashSet::new(),
            prev_end: 0,
        }
    }

    // ---- cursor ---------------------------------------------------------

    pub fn eof(&self) -> bool {
        self.pos >= self.toks.len()
    }

    pub fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    pub fn peek_at(&self, n: usize) -> Option<&Token> {
        self.toks.get(self.pos + n)
    }

    pub fn at(&self, p: &str) -> bool {
        self.peek().is_some_and(|t| t.is(p))
    }

    pub fn at_n(&self, n: usize, p: &str) -> bool {
        self.peek_at(n).is_some_and(|t| t.is(p))
    }

    pub fn at_ident(&self) -> bool {
        self.peek().is_some_and(|t| t.is_ident())
    }

    pub fn bump(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if let Some(t) = &t {
            self.prev_end = t.span.end;
            self.pos += 1;
        }
        t
    }

    pub fn eat(&mut self, p: &str) -> bool {
        if self.at(p) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn here(&self) -> usize {
        self.peek().map(|t| t.span.start).unwrap_or(self.file.text.len())
    }

    pub fn prev_end(&self) -> usize {
        self.prev_end
    }

    pub fn err<T>(&self, reason: impl Into<String>) -> PResult<T> {
        Err(PErr {
            at: self.here(),
            reason: reason.into(),
        })
    }

    pub fn unexpected<T>(&self) -> PResult<T> {
        match self.peek() {
            Some(t) => self.err(format!("unexpected token `{}`", truncate(&t.text))),
            None => self.err("unexpected end of file"),
        }
    }

    pub fn expect(&mut self, p: &str) -> PResult<Token> {
        if self.at(p) {
            Ok(self.bump().expect("token present"))
        } else {
            match self.peek() {
                Some(t) => self.err(format!("expected `{p}`, found `{}`", truncate(&t.text))),
                None => self.err(format!("expected `{p}`, found end of file")),
            }
        }
    }

    pub fn ident(&mut self) -> PResult<(String, Span)> {
        match self.peek() {
            Some(t) if t.is_ident() => {
                let t = self.bump().expect("token present");
                Ok((t.text, t.span))
            }
            _ => self.unexpected(),
        }
    }

    pub fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            self.depth -= 1;
            return self.err("nesting too deep");
        }
        Ok(())
    }

    pub fn leave(&mut self) {
        self.depth -= 1;
    }

    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        self.lines.line_col(offset)
    }

    // ---- frames, functions, recovery ------------------------------------

    pub fn push_stmt(&mut self, kind: StmtKind, span: Span) {
        match &kind {
            StmtKind::VarDecl { lhs, rhs: Some(rhs), .. } => {
                if let Some(ty) = constructed_type(rhs) {
                    let frame = self.frames.last_mut().expect("module frame");
                    frame.types.entry(lhs.clone()).or_insert(ty);
                }
            }
            StmtKind::Assign { lhs: Expr::Member { base, field, .. }, rhs } => {
                let on_this = matches!(base.as_ref(), Expr::Ident { name, .. } if name == "this");
                if let (true, Some(ty), Some(class)) = (on_this, constructed_type(rhs), self.class_stack.last()) {
                    self.field_types.entry(format!("{class}.{field}")).or_insert(ty);
                }
            }
            _ => {}
        }
        let stmt = Statement::new(kind, span);
        self.frames.last_mut().expect("module frame").body.push(stmt);
    }

    /// Emit an expression evaluated for effect. Pure expressions are dropped.
    pub fn push_effect(&mut self, e: Expr) {
        if e.contains_call() {
            let span = e.span();
            self.push_stmt(StmtKind::CallStmt(e), span);
        }
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            functions: self.functions.len(),
            body: self.frames.last().map(|f| f.body.len()).unwrap_or(0),
            imports: self.imports.len(),
            names: self.used_names.len(),
        }
    }

    pub fn rollback(&mut self, s: &Snapshot) {
        self.functions.truncate(s.functions);
        if let Some(f) = self.frames.last_mut() {
            f.body.truncate(s.body);
        }
        self.imports.truncate(s.imports);
        for name in self.used_names.drain(s.names..) {
            self.used_set.remove(&name);
        }
    }

    pub fn diag(&mut self, offset: usize, reason: impl Into<String>) {
        let (line, col) = self.line_col(offset);
        self.diagnostics.push(Diagnostic {
            path: self.file.path.clone(),
            line,
            col,
            reason: reason.into(),
        });
    }

    /// Run `f` as one recoverable unit: on failure everything it produced is
    /// discarded, a diagnostic is recorded and the cursor skips the statement.
    pub fn guarded(&mut self, f: impl FnOnce(&mut Self) -> PResult<()>) {
        let start = self.pos;
        let start_depth = self.depth;
        let snap = self.snapshot();
        let frames = self.frames.len();
        let classes = self.class_stack.len();
        let fns = self.fn_stack.len();
        if let Err(e) = f(self) {
            self.frames.truncate(frames);
            self.class_stack.truncate(classes);
            self.fn_stack.truncate(fns);
            self.depth = start_depth;
            self.rollback(&snap);
            let offset = self.toks.get(start).map(|t| t.span.start).unwrap_or(e.at);
            self.diag(offset, e.reason);
            self.pos = start;
            self.recover();
        }
        if self.pos == start && !self.eof() {
            self.bump();
        }
    }

    /// Skip to the end of the current statement.
    fn recover(&mut self) {
        let mut depth = 0usize;
        let mut consumed = false;
        while let Some(t) = self.peek() {
            if depth == 0 && consumed && !self.java && t.newline_before && !self.continues_line() {
                break;
            }
            let text = t.text.clone();
            let punct = t.kind == TokenKind::Punct;
            if punct && matches!(text.as_str(), "(" | "[" | "{") {
                depth += 1;
            } else if punct && matches!(text.as_str(), ")" | "]" | "}") {
                if depth == 0 {
                    break;
                }
                depth -= 1;
                if depth == 0 && text == "}" {
                    self.bump();
                    if self.eat(";") {
                        break;
                    }
                    match self.peek() {
                        None => break,
                        Some(n) if n.newline_before => break,
                        Some(n) if n.is("}") => break,
                        _ => {}
                    }
                    consumed = true;
                    continue;
                }
            } else if punct && depth == 0 && text == ";" {
                self.bump();
                break;
            }
            self.bump();
            consumed = true;
        }
    }

    fn continues_line(&self) -> bool {
        let prev = match self.pos.checked_sub(1).and_then(|i| self.toks.get(i)) {
            Some(p) => p,
            None => return false,
        };
        let next = self.peek();
        let cont_prev = prev.kind == TokenKind::Punct
            && matches!(
                prev.text.as_str(),
                "," | "." | "(" | "[" | "{" | "=" | "+" | "-" | "*" | "/" | "&&" | "||" | "?"
                    | ":" | "=>" | "?." | "??" | "|" | "&"
            );
        let cont_next = next.is_some_and(|n| {
            n.kind == TokenKind::Punct && matches!(n.text.as_str(), "." | "?." | ")" | "]")
        });
        cont_prev || cont_next
    }

    pub fn unique_name(&mut self, base: &str) -> String {
        let mut name = base.to_string();
        let mut n = 2;
        while self.used_set.contains(&name) {
            name = format!("{base}#{n}");
            n += 1;
        }
        self.used_set.insert(name.clone());
        self.used_names.push(name.clone());
        name
    }

    pub fn anon_name(&self, offset: usize) -> String {
        let (l, c) = self.line_col(offset);
        format!("<anon@{l}:{c}>")
    }

    /// Qualify a nested declaration by its enclosing class or function.
    pub fn scoped_name(&self, name: &str) -> String {
        if let Some(f) = self.fn_stack.last() {
            format!("{f}.{name}")
        } else if let Some(c) = self.class_stack.last() {
            format!("{c}.{name}")
        } else {
            name.to_string()
        }
    }

    /// Parse a function body with `body` and register the function.
    pub fn build_function(
        &mut self,
        local_name: &str,
        params: Vec<Param>,
        start: usize,
        exported: bool,
        body: impl FnOnce(&mut Self) -> PResult<()>,
    ) -> PResult<String> {
        let name = self.unique_name(local_name);
        let mut frame = Frame::default();
        for p in &params {
            if let Some(ty) = &p.ty {
                frame.types.insert(p.name.clone(), ty.clone());
            }
        }
        self.frames.push(frame);
        self.fn_stack.push(name.clone());
        let mut names = Vec::new();
        let mut spans = Vec::new();
        let mut seen = HashSet::new();
        for (i, p) in params.iter().enumerate() {
            let mut pname = p.name.clone();
            if !p.pattern.is_empty() {
                pname = format!("<param{i}>");
            }
            let mut n = 2;
            let base = pname.clone();
            while !seen.insert(pname.clone()) {
                pname = format!("{base}#{n}");
                n += 1;
            }
            for (field, local, span) in &p.pattern {
                let rhs = Expr::Member {
                    base: Box::new(Expr::ident(pname.clone(), p.span)),
                    field: field.clone(),
                    span: *span,
                };
                self.push_stmt(
                    StmtKind::VarDecl {
                        lhs: local.clone(),
                        lhs_span: *span,
                        rhs: Some(rhs),
                    },
                    *span,
                );
            }
            names.push(pname);
            spans.push(p.span);
        }
        let result = body(self);
        self.fn_stack.pop();
        let frame = self.frames.pop().unwrap_or_default();
        result?;
        let span = Span::new(start, self.prev_end.max(start));
        let class = self.class_stack.last().cloned();
        let id = MethodRef::defined(&self.module_name, &name, &self.file.path, span);
        self.functions.push(IRFunction {
            id,
            name: name.clone(),
            class,
            params: names,
            param_spans: spans,
            body: frame.body,
            local_types: frame.types,
            span,
            is_exported: exported,
        });
        Ok(name)
    }

    // ---- blocks and statements ------------------------------------------

    pub fn block(&mut self) -> PResult<()> {
        self.expect("{")?;
        self.statements_until_close();
        self.expect("}")?;
        Ok(())
    }

    pub fn statements_until_close(&mut self) {
        while !self.eof() && !self.at("}") {
            self.guarded(|p| p.statement());
        }
    }

    pub fn statement(&mut self) -> PResult<()> {
        self.enter()?;
        let r = self.statement_inner();
        self.leave();
        r
    }

    fn statement_inner(&mut self) -> PResult<()> {
        let t = match self.peek() {
            Some(t) => t.clone(),
            None => return self.unexpected(),
        };
        if t.kind == TokenKind::Punct {
            match t.text.as_str() {
                "{" => return self.block(),
                ";" => {
                    self.bump();
                    return Ok(());
                }
                "@" => {
                    self.skip_annotation();
                    return self.statement();
                }
                _ => {}
            }
        }
        if t.is_ident() {
            match t.text.as_str() {
                "var" | "let" | "const" if !self.java && self.peek_at(1).is_some_and(|n| {
                    n.is_ident() || n.is("{") || n.is("[")
                }) =>
                {
                    return self.js_var_decl(false);
                }
                "function" if !self.java => {
                    return self.js_function_decl(false, false);
                }
                "async" if !self.java && self.at_n(1, "function") => {
                    return self.js_function_decl(false, false);
                }
                "class" => {
                    return if self.java {
                        self.java_type_decl()
                    } else {
                        self.js_class_decl(false, false)
                    };
                }
                "return" => {
                    self.bump();
                    let start = t.span.start;
                    if self.at(";") || self.at("}") || self.eof() || self.on_new_line() {
                        self.end_statement()?;
                        self.push_stmt(StmtKind::Return(None), Span::new(start, self.prev_end));
                        return Ok(());
                    }
                    let e = self.expr()?;
                    self.end_statement()?;
                    self.push_stmt(StmtKind::Return(Some(e)), Span::new(start, self.prev_end));
                    return Ok(());
                }
                "if" => {
                    self.bump();
                    let c = self.paren_expr()?;
                    self.push_effect(c);
                    self.statement()?;
                    if self.eat("else") {
                        self.statement()?;
                    }
                    return Ok(());
                }
                "while" => {
                    self.bump();
                    let c = self.paren_expr()?;
                    self.push_effect(c);
                    return self.statement();
                }
                "do" => {
                    self.bump();
                    self.statement()?;
                    self.expect("while")?;
                    let c = self.paren_expr()?;
                    self.push_effect(c);
                    self.eat(";");
                    return Ok(());
                }
                "for" => return self.for_statement(),
                "try" => return self.try_statement(),
                "switch" => return self.switch_statement(),
                "throw" => {
                    self.bump();
                    let e = self.expr()?;
                    self.push_effect(e);
                    return self.end_statement();
                }
                "break" | "continue" => {
                    self.bump();
                    if self.at_ident() && !self.on_new_line() {
                        self.bump();
                    }
                    return self.end_statement();
                }
                "yield" if !self.java => return self.err("generator `yield`"),
                "with" if !self.java && self.at_n(1, "(") => return self.err("`with` statement"),
                "debugger" if !self.java => {
                    self.bump();
                    return self.end_statement();
                }
                "synchronized" if self.java && self.at_n(1, "(") => {
                    self.bump();
                    let c = self.paren_expr()?;
                    self.push_effect(c);
                    return self.block();
                }
                "assert" if self.java => {
                    self.bump();
                    let e = self.expr()?;
                    self.push_effect(e);
                    if self.eat(":") {
                        let m = self.expr()?;
                        self.push_effect(m);
                    }
                    return self.end_statement();
                }
                "interface" | "enum" | "record"
                    if self.java && self.peek_at(1).is_some_and(|n| n.is_ident()) =>
                {
                    return self.java_type_decl();
                }
                "interface" | "type" | "enum" | "declare" if !self.java && self.ts_type_only_ahead() => {
                    return self.skip_ts_declaration();
                }
                _ => {}
            }
            if self.at_n(1, ":") && !RESERVED.contains(&t.text.as_str()) && !self.java_switch_arrow() {
                return self.err("labeled statement");
            }
            if self.java && self.java_local_decl_ahead() {
                return self.java_local_decl(true);
            }
        }
        self.expression_statement()
    }

    fn java_switch_arrow(&self) -> bool {
        false
    }

    pub fn on_new_line(&self) -> bool {
        !self.java && self.peek().is_some_and(|t| t.newline_before)
    }

    pub fn end_statement(&mut self) -> PResult<()> {
        if self.eat(";") || self.at("}") || self.eof() {
            return Ok(());
        }
        if !self.java && self.on_new_line() {
            return Ok(());
        }
        match self.peek() {
            Some(t) => self.err(format!("expected end of statement, found `{}`", truncate(&t.text))),
            None => Ok(()),
        }
    }

    fn expression_statement(&mut self) -> PResult<()> {
        let start = self.here();
        let lhs = self.ternary()?;
        if self.peek().is_some_and(is_assign_op) {
            self.bump();
            let rhs = self.expr()?;
            self.end_statement()?;
            let span = Span::new(start, self.prev_end);
            self.push_assign(lhs, rhs, span);
            return Ok(());
        }
        self.end_statement()?;
        self.push_effect(lhs);
        Ok(())
    }

    fn push_assign(&mut self, lhs: Expr, rhs: Expr, span: Span) {
        match lhs {
            Expr::Ident { .. } | Expr::Member { .. } => {
                self.push_stmt(StmtKind::Assign { lhs, rhs }, span);
            }
            Expr::Compound { parts, .. } => {
                // destructuring assignment: every target receives the whole value
                for p in parts {
                    if p.root_var().is_some() {
                        self.push_stmt(StmtKind::Assign { lhs: p, rhs: rhs.clone() }, span);
                    }
                }
            }
            other => {
                self.push_effect(other);
                self.push_effect(rhs);
            }
        }
    }

    pub fn paren_expr(&mut self) -> PResult<Expr> {
        self.expect("(")?;
        let e = self.expr()?;
        self.expect(")")?;
        Ok(e)
    }

    fn for_statement(&mut self) -> PResult<()> {
        let start = self.here();
        self.bump();
        self.eat("await");
        self.expect("(")?;
        // for (const x of xs) / for (Type x : xs)
        if self.java {
            if self.java_foreach_ahead() {
                self.eat("final");
                let ty = self.skip_type_named()?;
                let (name, nspan) = self.ident()?;
                if ty != "var" {
                    self.declare_type(&name, &ty);
                }
                self.expect(":")?;
                let e = self.expr()?;
                self.expect(")")?;
                self.push_stmt(
                    StmtKind::VarDecl { lhs: name, lhs_span: nspan, rhs: Some(e) },
                    Span::new(start, self.prev_end),
                );
                return self.statement();
            }
        } else if let Some(()) = self.js_for_in_of(start)? {
            return self.statement();
        }
        // classic three-clause loop
        if !self.at(";") {
            if self.java && self.java_local_decl_ahead() {
                self.java_local_decl(false)?;
            } else if !self.java && (self.at("let") || self.at("var") || self.at("const")) {
                self.js_var_decl_no_end()?;
            } else {
                let s = self.here();
                let e = self.expr()?;
                if self.peek().is_some_and(is_assign_op) {
                    self.bump();
                    let rhs = self.expr()?;
                    self.push_assign(e, rhs, Span::new(s, self.prev_end));
                } else {
                    self.push_effect(e);
                }
            }
        }
        self.expect(";")?;
        if !self.at(";") {
            let c = self.expr()?;
            self.push_effect(c);
        }
        self.expect(";")?;
        while !self.at(")") {
            let s = self.here();
            let e = self.expr()?;
            if self.peek().is_some_and(is_assign_op) {
                self.bump();
                let rhs = self.expr()?;
                self.push_assign(e, rhs, Span::new(s, self.prev_end));
            } else {
                self.push_effect(e);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        self.statement()
    }

    fn js_for_in_of(&mut self, start: usize) -> PResult<Option<()>> {
        let save = self.pos;
        let has_kw = self.at("let") || self.at("const") || self.at("var");
        if has_kw {
            self.bump();
        }
        let targets: Vec<(String, String, Span)> = if self.at("{") || self.at("[") {
            match self.binding_pattern() {
                Ok(t) => t,
                Err(_) => {
                    self.pos = save;
                    return Ok(None);
                }
            }
        } else if self.at_ident() {
            let (n, s) = self.ident()?;
            vec![(String::new(), n, s)]
        } else {
            self.pos = save;
            return Ok(None);
        };
        if !(self.at("of") || self.at("in")) {
            self.pos = save;
            return Ok(None);
        }
        self.bump();
        let e = self.expr()?;
        self.expect(")")?;
        let span = Span::new(start, self.prev_end);
        self.push_destructured(targets, e, span);
        Ok(Some(()))
    }

    /// Bind each `(field, local)` target to `value.field`, or to `value` itself
    /// when the field is empty.
    pub fn push_destructured(&mut self, targets: Vec<(String, String, Span)>, value: Expr, span: Span) {
        if targets.len() == 1 && targets[0].0.is_empty() {
            let (_, local, lspan) = targets.into_iter().next().expect("one target");
            self.push_stmt(StmtKind::VarDecl { lhs: local, lhs_span: lspan, rhs: Some(value) }, span);
            return;
        }
        let tmp = format!("<tmp@{}>", span.start);
        let tmp_span = Span::new(span.start, value.span().end.max(span.start));
        self.push_stmt(
            StmtKind::VarDecl { lhs: tmp.clone(), lhs_span: tmp_span, rhs: Some(value) },
            tmp_span,
        );
        for (field, local, lspan) in targets {
            let base = Expr::ident(tmp.clone(), lspan);
            let rhs = if field.is_empty() {
                base
            } else {
                Expr::Member { base: Box::new(base), field, span: lspan }
            };
            let stmt_span = Span::new(lspan.start.max(tmp_span.end), span.end.max(lspan.end));
            self.push_stmt(StmtKind::VarDecl { lhs: local, lhs_span: lspan, rhs: Some(rhs) }, stmt_span);
        }
    }

    fn try_statement(&mut self) -> PResult<()> {
        self.bump();
        if self.java && self.at("(") {
            // try-with-resources
            self.bump();
            while !self.at(")") {
                if self.java_local_decl_ahead() {
                    self.java_local_decl(false)?;
                } else {
                    let e = self.expr()?;
                    self.push_effect(e);
                }
                if !self.eat(";") {
                    break;
                }
            }
            self.expect(")")?;
        }
        self.block()?;
        while self.eat("catch") {
            if self.eat("(") {
                self.skip_balanced_until(")")?;
                self.expect(")")?;
            }
            self.block()?;
        }
        if self.eat("finally") {
            self.block()?;
        }
        Ok(())
    }

    fn switch_statement(&mut self) -> PResult<()> {
        self.bump();
        let c = self.paren_expr()?;
        self.push_effect(c);
        self.expect("{")?;
        while !self.eof() && !self.at("}") {
            if self.eat("case") {
                let e = self.expr()?;
                self.push_effect(e);
                while self.eat(",") {
                    let e = self.expr()?;
                    self.push_effect(e);
                }
                if !self.eat(":") {
                    self.expect("->")?;
                }
                continue;
            }
            if self.eat("default") {
                if !self.eat(":") {
                    self.expect("->")?;
                }
                continue;
            }
            self.guarded(|p| p.statement());
        }
        self.expect("}")?;
        Ok(())
    }

    /// Skip tokens up to (not including) an unmatched `close`.
    pub fn skip_balanced_until(&mut self, close: &str) -> PResult<()> {
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Punct {
                match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => {
                        if depth == 0 {
                            if t.text == close {
                                return Ok(());
                            }
                            return self.unexpected();
                        }
                        depth -= 1;
                    }
                    _ => {}
                }
            }
            self.bump();
        }
        self.err(format!("unterminated, expected `{close}`"))
    }

    /// Skip a bracketed group starting at the current opening token.
    pub fn skip_group(&mut self) -> PResult<()> {
        let close = match self.peek().map(|t| t.text.as_str()) {
            Some("(") => ")",
            Some("[") => "]",
            Some("{") => "}",
            _ => return self.unexpected(),
        };
        self.bump();
        self.skip_balanced_until(close)?;
        self.bump();
        Ok(())
    }

    /// Skip `@Name(...)` recording a diagnostic.
    pub fn skip_annotation(&mut self) {
        let start = self.here();
        self.bump();
        let mut name = String::new();
        while let Some(t) = self.peek() {
            if t.is_ident() {
                name.push_str(&t.text);
                self.bump();
                if self.at(".") {
                    name.push('.');
                    self.bump();
                    continue;
                }
            }
            break;
        }
        if self.at("(") && self.skip_group().is_err() {
            self.pos = self.toks.len();
        }
        let what = if self.java { "annotation" } else { "decorator" };
        self.diag(start, format!("{what} `@{name}`"));
    }

    // ---- expressions ----------------------------------------------------

    pub fn expr(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.assign_expr();
        self.leave();
        r
    }

    fn assign_expr(&mut self) -> PResult<Expr> {
        if let Some(f) = self.try_function_value(None)? {
            return Ok(f);
        }
        let lhs = self.ternary()?;
        if self.peek().is_some_and(is_assign_op) {
            self.bump();
            let rhs = self.expr()?;
            let span = lhs.span().to(rhs.span());
            return Ok(Expr::Compound { parts: vec![lhs, rhs], span });
        }
        Ok(lhs)
    }

    pub fn ternary(&mut self) -> PResult<Expr> {
        let c = self.binary()?;
        if self.at("?") {
            self.bump();
            let a = self.expr()?;
            self.expect(":")?;
            let b = self.expr()?;
            let span = c.span().to(b.span());
            return Ok(Expr::Compound { parts: vec![c, a, b], span });
        }
        Ok(c)
    }

    fn at_binary_op(&self) -> bool {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Punct => BINARY_OPS.contains(&t.text.as_str()),
            Some(t) if t.is_ident() => {
                matches!(t.text.as_str(), "instanceof")
                    || (!self.java && matches!(t.text.as_str(), "in" | "as" | "satisfies"))
            }
            _ => false,
        }
    }

    fn binary(&mut self) -> PResult<Expr> {
        let first = self.unary()?;
        let mut parts = vec![first];
        while self.at_binary_op() {
            let op = self.bump().expect("operator");
            if op.is(">") {
                // `>>` and `>>>` arrive as adjacent `>` tokens
                while self.peek().is_some_and(|t| t.is(">") && t.span.start == op.span.end) {
                    self.bump();
                }
            }
            match op.text.as_str() {
                "as" | "satisfies" => {
                    if !self.eat("const") {
                        self.skip_type()?;
                    }
                    continue;
                }
                "instanceof" => {
                    self.skip_type()?;
                    if self.java && self.at_ident() && !self.at_binary_op() {
                        self.bump();
                    }
                    continue;
                }
                _ => {}
            }
            parts.push(self.unary()?);
        }
        if parts.len() == 1 {
            return Ok(parts.pop().expect("one part"));
        }
        let span = parts[0].span().to(parts[parts.len() - 1].span());
        Ok(Expr::Compound { parts, span })
    }

    fn unary(&mut self) -> PResult<Expr> {
        self.enter()?;
        let r = self.unary_inner();
        self.leave();
        r
    }

    fn unary_inner(&mut self) -> PResult<Expr> {
        let t = match self.peek() {
            Some(t) => t.clone(),
            None => return self.unexpected(),
        };
        let prefix = match t.kind {
            TokenKind::Punct => matches!(t.text.as_str(), "!" | "-" | "+" | "~" | "++" | "--"),
            TokenKind::Ident => {
                matches!(t.text.as_str(), "typeof" | "void" | "delete" | "await")
                    && !self.java
                    && !self.at_n(1, ")")
                    && !self.at_n(1, ";")
            }
            _ => false,
        };
        if prefix {
            self.bump();
            return self.unary();
        }
        if !self.java && t.is("yield") {
            return self.err("generator `yield`");
        }
        if self.java && t.is("(") && self.java_cast_ahead() {
            self.bump();
            self.skip_type()?;
            self.expect(")")?;
            return self.unary();
        }
        if !self.java && t.is("<") {
            return self.err("JSX or type assertion");
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        while let Some(t) = self.peek().cloned() {
            match (t.kind.clone(), t.text.as_str()) {
                (TokenKind::Punct, "." | "?.") => {
                    self.bump();
                    if self.at("(") {
                        e = self.call_args(e)?;
                        continue;
                    }
                    if self.at("[") {
                        e = self.index(e)?;
                        continue;
                    }
                    if self.at("#") {
                        self.bump();
                    }
                    if self.java && self.at("<") {
                        self.skip_angle()?;
                    }
                    let (field, fspan) = self.ident()?;
                    let span = e.span().to(fspan);
                    e = Expr::Member { base: Box::new(e), field, span };
                }
                (TokenKind::Punct, "[") => e = self.index(e)?,
                (TokenKind::Punct, "(") => e = self.call_args(e)?,
                (TokenKind::Punct, "::") if self.java => {
                    self.bump();
                    let (field, fspan) = if self.at("new") {
                        let t = self.bump().expect("new");
                        ("<init>".to_string(), t.span)
                    } else {
                        self.ident()?
                    };
                    let span = e.span().to(fspan);
                    e = Expr::Member { base: Box::new(e), field, span };
                }
                (TokenKind::Punct, "++" | "--") if !t.newline_before => {
                    self.bump();
                }
                (TokenKind::Punct, "!") if !self.java => {
                    // TypeScript non-null assertion
                    let next_ok = self.peek_at(1).is_none_or(|n| {
                        n.kind == TokenKind::Punct
                            && matches!(n.text.as_str(), "." | ")" | ";" | "," | "]" | "[" | "(" | "}" | "?.")
                    });
                    if !next_ok {
                        break;
                    }
                    self.bump();
                }
                (TokenKind::Template { .. }, _) if !self.java => {
                    let arg = self.primary()?;
                    let span = e.span().to(arg.span());
                    e = Expr::Call(CallExpr { callee: Box::new(e), args: vec![arg], span });
                }
                _ => break,
            }
        }
        Ok(e)
    }

    fn index(&mut self, base: Expr) -> PResult<Expr> {
        self.expect("[")?;
        let idx = self.expr()?;
        let close = self.expect("]")?;
        let span = base.span().to(close.span);
        let member = Expr::Member { base: Box::new(base), field: "[]".into(), span };
        if idx.contains_call() {
            return Ok(Expr::Compound { parts: vec![member, idx], span });
        }
        Ok(member)
    }

    pub fn call_args(&mut self, callee: Expr) -> PResult<Expr> {
        let args = self.arg_list()?;
        let span = Span::new(callee.span().start, self.prev_end);
        Ok(Expr::Call(CallExpr { callee: Box::new(callee), args, span }))
    }

    fn arg_list(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        while !self.at(")") {
            self.eat("...");
            args.push(self.expr()?);
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = match self.peek() {
            Some(t) => t.clone(),
            None => return self.unexpected(),
        };
        match &t.kind {
            TokenKind::Number => {
                self.bump();
                return Ok(Expr::Literal { text: t.text, kind: LiteralKind::Number, span: t.span });
            }
            TokenKind::Str => {
                self.bump();
                return Ok(Expr::Literal { text: t.text, kind: LiteralKind::String, span: t.span });
            }
            TokenKind::Char => {
                self.bump();
                return Ok(Expr::Literal { text: t.text, kind: LiteralKind::Other, span: t.span });
            }
            TokenKind::Regex => {
                self.bump();
                return Ok(Expr::Literal { text: t.text, kind: LiteralKind::Regex, span: t.span });
            }
            TokenKind::Template { holes } => {
                self.bump();
                return self.template(t.text.clone(), holes.clone(), t.span);
            }
            TokenKind::Punct | TokenKind::Ident => {}
        }
        if t.kind == TokenKind::Punct {
            return match t.text.as_str() {
                "(" => {
                    if let Some(f) = self.try_function_value(None)? {
                        return Ok(f);
                    }
                    self.bump();
                    let mut parts = vec![self.expr()?];
                    while self.eat(",") {
                        parts.push(self.expr()?);
                    }
                    self.expect(")")?;
                    if parts.len() == 1 {
                        Ok(parts.pop().expect("one"))
                    } else {
                        Ok(Expr::Compound { parts, span: Span::new(t.span.start, self.prev_end) })
                    }
                }
                "[" => {
                    self.bump();
                    let mut parts = Vec::new();
                    while !self.at("]") {
                        if self.eat(",") {
                            continue;
                        }
                        self.eat("...");
                        parts.push(self.expr()?);
                        if !self.eat(",") {
                            break;
                        }
                    }
                    self.expect("]")?;
                    Ok(Expr::Compound { parts, span: Span::new(t.span.start, self.prev_end) })
                }
                "{" => self.object_literal(),
                "#" if !self.java => {
                    self.bump();
                    let (n, s) = self.ident()?;
                    Ok(Expr::ident(n, t.span.to(s)))
                }
                "@" => self.err("annotation in expression"),
                _ => self.unexpected(),
            };
        }
        // identifiers and keywords
        match t.text.as_str() {
            "new" => return self.new_expr(),
            "function" | "async" if !self.java => {
                if let Some(f) = self.try_function_value(None)? {
                    return Ok(f);
                }
            }
            "class" => return self.err("class expression"),
            "switch" if self.java => return self.err("switch expression"),
            "true" | "false" | "null" | "undefined" => {
                self.bump();
                return Ok(Expr::Literal { text: t.text, kind: LiteralKind::Other, span: t.span });
            }
            _ => {}
        }
        if RESERVED.contains(&t.text.as_str())
            && !matches!(t.text.as_str(), "this" | "super" | "import" | "of" | "default")
        {
            return self.unexpected();
        }
        if let Some(f) = self.try_function_value(None)? {
            return Ok(f);
        }
        self.bump();
        Ok(Expr::ident(t.text, t.span))
    }

    fn template(&mut self, text: String, holes: Vec<Span>, span: Span) -> PResult<Expr> {
        let lit = Expr::Literal { text, kind: LiteralKind::Template, span };
        if holes.is_empty() {
            return Ok(lit);
        }
        let mut parts = vec![lit];
        for hole in holes {
            let src = &self.file.text[hole.start..hole.end];
            let toks = tokenize(src, hole.start, self.java);
            if toks.is_empty() {
                continue;
            }
            let saved_toks = std::mem::replace(&mut self.toks, toks);
            let saved_pos = std::mem::replace(&mut self.pos, 0);
            let saved_end = self.prev_end;
            let r = self.expr().and_then(|e| {
                if self.eof() {
                    Ok(e)
                } else {
                    self.unexpected()
                }
            });
            self.toks = saved_toks;
            self.pos = saved_pos;
            self.prev_end = saved_end;
            parts.push(r?);
        }
        Ok(Expr::Compound { parts, span })
    }

    fn object_literal(&mut self) -> PResult<Expr> {
        let start = self.here();
        self.expect("{")?;
        let mut parts = Vec::new();
        while !self.at("}") {
            if self.eat("...") {
                parts.push(self.expr()?);
            } else {
                let key_start = self.here();
                while (self.at("get") || self.at("set") || self.at("async") || self.at("static"))
                    && self.peek_at(1).is_some_and(|n| n.is_ident() || n.kind == TokenKind::Str)
                {
                    self.bump();
                }
                if self.at("*") {
                    return self.err("generator method");
                }
                let key = match self.peek() {
                    Some(t) if t.is_ident() || matches!(t.kind, TokenKind::Str | TokenKind::Number) => {
                        let t = self.bump().expect("key");
                        Some(t)
                    }
                    Some(t) if t.is("[") => {
                        self.bump();
                        let k = self.expr()?;
                        self.expect("]")?;
                        self.push_effect(k);
                        None
                    }
                    _ => return self.unexpected(),
                };
                if self.at("(") {
                    let name = self.anon_name(key_start);
                    let f = self.function_rest(&name, key_start, false)?;
                    parts.push(Expr::ident(f, Span::new(key_start, self.prev_end)));
                } else if self.eat(":") {
                    parts.push(self.expr()?);
                } else if let Some(k) = key {
                    if self.eat("=") {
                        // shorthand with default, only valid in patterns
                        let _ = self.expr()?;
                    }
                    if k.is_ident() {
                        parts.push(Expr::ident(k.text, k.span));
                    }
                }
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect("}")?;
        Ok(Expr::Compound { parts, span: Span::new(start, self.prev_end) })
    }

    fn new_expr(&mut self) -> PResult<Expr> {
        let start = self.here();
        self.bump();
        if self.eat(".") {
            let (_, s) = self.ident()?;
            return Ok(Expr::ident("new.target", Span::new(start, s.end)));
        }
        let (first, fspan) = self.ident()?;
        let mut ty = Expr::ident(first, fspan);
        while self.at(".") && self.peek_at(1).is_some_and(|t| t.is_ident()) {
            self.bump();
            let (f, s) = self.ident()?;
            let span = ty.span().to(s);
            ty = Expr::Member { base: Box::new(ty), field: f, span };
        }
        if self.at("<") {
            self.skip_angle()?;
        }
        if self.java && self.at("[") {
            while self.at("[") {
                self.skip_group()?;
            }
            if self.at("{") {
                return self.object_literal();
            }
            return Ok(Expr::Literal {
                text: "new[]".into(),
                kind: LiteralKind::Other,
                span: Span::new(start, self.prev_end),
            });
        }
        let args = if self.at("(") { self.arg_list()? } else { Vec::new() };
        if self.java && self.at("{") {
            return self.err("anonymous class body");
        }
        let span = Span::new(start, self.prev_end);
        let callee = Expr::Member { base: Box::new(ty), field: "<init>".into(), span };
        Ok(Expr::Call(CallExpr { callee: Box::new(callee), args, span }))
    }

    // ---- function values -------------------------------------------------

    /// Parse an arrow function, function expression or Java lambda at the
    /// cursor. Returns an identifier naming the synthesized function, or
    /// `None` (cursor unchanged) when no function value starts here.
    pub fn try_function_value(&mut self, name: Option<&str>) -> PResult<Option<Expr>> {
        let start = self.here();
        if self.java {
            if !self.java_lambda_ahead() {
                return Ok(None);
            }
            let params = if self.at("(") { self.params()? } else {
                let (n, s) = self.ident()?;
                vec![Param { name: n, span: s, pattern: vec![], ty: None }]
            };
            self.expect("->")?;
            let fname = name.map(str::to_string).unwrap_or_else(|| self.anon_name(start));
            let local = self.scoped_name(&fname);
            let created = self.build_function(&local, params, start, false, |p| p.arrow_body())?;
            return Ok(Some(Expr::ident(created, Span::new(start, self.prev_end))));
        }
        let is_async = self.at("async")
            && self.peek_at(1).is_some_and(|n| !n.newline_before && (n.is("function") || n.is("(") || n.is_ident()));
        let off = usize::from(is_async);
        if self.at_n(off, "function") {
            if is_async {
                self.bump();
            }
            self.bump();
            if self.at("*") {
                return self.err("generator function");
            }
            let own = if self.at_ident() { Some(self.ident()?.0) } else { None };
            let fname = name
                .map(str::to_string)
                .or(own)
                .unwrap_or_else(|| self.anon_name(start));
            let local = if name.is_some() { self.scoped_name(&fname) } else { self.scoped_name(&self.anon_name(start)) };
            let created = self.function_rest(&local, start, false)?;
            return Ok(Some(Expr::ident(created, Span::new(start, self.prev_end))));
        }
        if !self.js_arrow_ahead(off) {
            return Ok(None);
        }
        if is_async {
            self.bump();
        }
        let params = if self.at("(") {
            let p = self.params()?;
            if self.eat(":") {
                self.skip_type()?;
            }
            p
        } else {
            let (n, s) = self.ident()?;
            vec![Param { name: n, span: s, pattern: vec![], ty: None }]
        };
        self.expect("=>")?;
        let fname = name.map(str::to_string).unwrap_or_else(|| self.anon_name(start));
        let local = self.scoped_name(&fname);
        let created = self.build_function(&local, params, start, false, |p| p.arrow_body())?;
        Ok(Some(Expr::ident(created, Span::new(start, self.prev_end))))
    }

    fn arrow_body(&mut self) -> PResult<()> {
        if self.at("{") {
            return self.block();
        }
        let start = self.here();
        let e = self.expr()?;
        self.push_stmt(StmtKind::Return(Some(e)), Span::new(start, self.prev_end));
        Ok(())
    }

    /// Parameter list and block body; registers the function under `local_name`.
    pub fn function_rest(&mut self, local_name: &str, start: usize, exported: bool) -> PResult<String> {
        if self.at("<") {
            self.skip_angle()?;
        }
        let params = self.params()?;
        if !self.java && self.eat(":") {
            self.skip_type()?;
        }
        self.build_function(local_name, params, start, exported, |p| p.block())
    }

    pub fn params(&mut self) -> PResult<Vec<Param>> {
        self.expect("(")?;
        let mut out = Vec::new();
        while !self.at(")") {
            if self.java {
                while self.at("final") || self.at("@") {
                    if self.at("@") {
                        self.skip_annotation();
                    } else {
                        self.bump();
                    }
                }
                // lambda params may omit types: `(a, b) ->`
                let typed = self.peek_at(1).is_some_and(|n| !n.is(",") && !n.is(")"));
                let mut ty = None;
                if typed {
                    ty = Some(self.skip_type_named()?);
                    self.eat("...");
                }
                let (n, s) = self.ident()?;
                while self.at("[") {
                    self.skip_group()?;
                }
                out.push(Param { name: n, span: s, pattern: vec![], ty });
            } else {
                while self.at("@") {
                    self.skip_annotation();
                }
                while matches!(
                    self.peek().map(|t| t.text.as_str()),
                    Some("public" | "private" | "protected" | "readonly" | "override")
                ) && self.peek_at(1).is_some_and(|n| n.is_ident() || n.is("{") || n.is("["))
                {
                    self.bump();
                }
                self.eat("...");
                let p = if self.at("{") || self.at("[") {
                    let s0 = self.here();
                    let pattern = self.binding_pattern()?;
                    Param { name: String::new(), span: Span::new(s0, self.prev_end), pattern, ty: None }
                } else {
                    let (n, s) = self.ident()?;
                    Param { name: n, span: s, pattern: vec![], ty: None }
                };
                self.eat("?");
                if self.eat(":") {
                    self.skip_type()?;
                }
                if self.eat("=") {
                    let _ = self.expr()?;
                }
                out.push(p);
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(")")?;
        Ok(out)
    }

    /// `{a, b: c, ...rest}` or `[x, y]` binding pattern, flattened to
    /// `(field, local, span)` triples. Nested patterns bind the outer field.
    pub fn binding_pattern(&mut self) -> PResult<Vec<(String, String, Span)>> {
        self.enter()?;
        let r = self.binding_pattern_inner();
        self.leave();
        r
    }

    fn binding_pattern_inner(&mut self) -> PResult<Vec<(String, String, Span)>> {
        let object = self.at("{");
        let close = if object { "}" } else { "]" };
        self.bump();
        let mut out = Vec::new();
        while !self.at(close) {
            if self.eat(",") {
                continue;
            }
            let rest = self.eat("...");
            if object && !rest {
                let (key, kspan) = match self.peek() {
                    Some(t) if t.is_ident() || t.kind == TokenKind::Str => {
                        let t = self.bump().expect("key");
                        (t.text, t.span)
                    }
                    _ => return self.unexpected(),
                };
                if self.eat(":") {
                    if self.at("{") || self.at("[") {
                        for (_, local, s) in self.binding_pattern()? {
                            out.push((key.clone(), local, s));
                        }
                    } else {
                        let (local, lspan) = self.ident()?;
                        out.push((key, local, lspan));
                    }
                } else {
                    out.push((key.clone(), key, kspan));
                }
            } else if self.at("{") || self.at("[") {
                for (_, local, s) in self.binding_pattern()? {
                    out.push(("[]".into(), local, s));
                }
            } else {
                let (local, lspan) = self.ident()?;
                let field = if rest || object { String::new() } else { "[]".into() };
                out.push((field, local, lspan));
            }
            if self.eat("=") {
                let _ = self.expr()?;
            }
            if !self.eat(",") {
                break;
            }
        }
        self.expect(close)?;
        Ok(out)
    }

    // ---- lookahead helpers ----------------------------------------------

    /// Index of the token matching the opener at `from`.
    pub fn matching(&self, from: usize) -> Option<usize> {
        let mut depth = 0usize;
        for (i, t) in self.toks.iter().enumerate().skip(from) {
            if t.kind != TokenKind::Punct {
                continue;
            }
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => {
                    depth = depth.checked_sub(1)?;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn js_arrow_ahead(&mut self, off: usize) -> bool {
        let i = self.pos + off;
        match self.toks.get(i) {
            Some(t) if t.is_ident() && !RESERVED.contains(&t.text.as_str()) => {
                self.toks.get(i + 1).is_some_and(|n| n.is("=>"))
            }
            Some(t) if t.is("(") => {
                let Some(close) = self.matching(i) else { return false };
                match self.toks.get(close + 1) {
                    Some(n) if n.is("=>") => true,
                    Some(n) if n.is(":") => {
                        let save = self.pos;
                        self.pos = close + 2;
                        let ok = self.skip_type().is_ok() && self.at("=>");
                        self.pos = save;
                        ok
                    }
                    _ => false,
                }
            }
            _ => false,
        }
    }

    fn java_lambda_ahead(&self) -> bool {
        match self.peek() {
            Some(t) if t.is_ident() => self.at_n(1, "->"),
            Some(t) if t.is("(") => self
                .matching(self.pos)
                .and_then(|c| self.toks.get(c + 1))
                .is_some_and(|n| n.is("->")),
            _ => false,
        }
    }

    /// `(Type) operand` in Java.
    fn java_cast_ahead(&mut self) -> bool {
        let save = self.pos;
        self.pos += 1;
        let first_ok = self
            .peek()
            .is_some_and(|t| t.is_ident() && !RESERVED.contains(&t.text.as_str()));
        let ok = first_ok && self.skip_type().is_ok() && self.at(")");
        let result = ok && {
            let next = self.peek_at(1);
            next.is_some_and(|n| match n.kind {
                TokenKind::Ident => !matches!(n.text.as_str(), "instanceof"),
                TokenKind::Punct => matches!(n.text.as_str(), "(" | "!" | "~"),
                _ => true,
            })
        };
        self.pos = save;
        result
    }

    // ---- types ------------------------------------------------------------

    /// Skip a type and return its dotted base name without type arguments.
    pub fn skip_type_named(&mut self) -> PResult<String> {
        let start = self.pos;
        self.skip_type()?;
        let mut name = String::new();
        for t in &self.toks[start..self.pos] {
            if t.is_ident() || t.is(".") {
                name.push_str(&t.text);
            } else {
                break;
            }
        }
        Ok(name)
    }

    pub fn skip_type(&mut self) -> PResult<()> {
        self.enter()?;
        let r = self.skip_type_inner();
        self.leave();
        r
    }

    fn skip_type_inner(&mut self) -> PResult<()> {
        self.eat("|");
        self.eat("&");
        loop {
            self.skip_type_primary()?;
            if !self.java && (self.at("|") || self.at("&")) {
                self.bump();
                continue;
            }
            if self.java && self.at("&") && self.peek_at(1).is_some_and(|n| n.is_ident()) {
                self.bump();
                continue;
            }
            if !self.java && self.at("extends") {
                // conditional type
                self.bump();
                self.skip_type()?;
                self.expect("?")?;
                self.skip_type()?;
                self.expect(":")?;
                continue;
            }
            return Ok(());
        }
    }

    fn skip_type_primary(&mut self) -> PResult<()> {
        while !self.java
            && self.peek().is_some_and(|t| {
                matches!(t.text.as_str(), "readonly" | "keyof" | "typeof" | "unique" | "infer" | "asserts")
            })
            && self.peek_at(1).is_some_and(|n| n.is_ident() || n.is("(") || n.is("[") || n.is("{"))
        {
            self.bump();
        }
        let t = match self.peek() {
            Some(t) => t.clone(),
            None => return self.unexpected(),
        };
        match (&t.kind, t.text.as_str()) {
            (TokenKind::Punct, "(") => {
                self.skip_group()?;
                if self.eat("=>") {
                    self.skip_type()?;
                }
            }
            (TokenKind::Punct, "{" | "[") => self.skip_group()?,
            (TokenKind::Str | TokenKind::Number | TokenKind::Template { .. }, _) => {
                self.bump();
            }
            (TokenKind::Punct, "-") => {
                self.bump();
                self.bump();
            }
            (TokenKind::Punct, "?") if self.java => {
                self.bump();
                if self.eat("extends") || self.eat("super") {
                    self.skip_type()?;
                }
            }
            (TokenKind::Ident, "new") if !self.java => {
                self.bump();
                self.skip_group()?;
                self.expect("=>")?;
                self.skip_type()?;
            }
            (TokenKind::Ident, _) => {
                self.bump();
                while self.at(".") && self.peek_at(1).is_some_and(|n| n.is_ident()) {
                    self.bump();
                    self.bump();
                }
                if self.java {
                    while self.at("@") {
                        self.skip_annotation();
                    }
                }
            }
            (TokenKind::Punct, "@") if self.java => {
                self.skip_annotation();
                return self.skip_type_primary();
            }
            _ => return self.unexpected(),
        }
        if self.at("<") {
            self.skip_angle()?;
        }
        while self.at("[") && self.at_n(1, "]") {
            self.bump();
            self.bump();
        }
        if !self.java && self.at("[") {
            // indexed access type `T["k"]`
            self.skip_group()?;
        }
        Ok(())
    }

    /// Skip a `<...>` type argument list, treating `>>` as two closers.
    pub fn skip_angle(&mut self) -> PResult<()> {
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            match t.text.as_str() {
                "<" => depth += 1,
                ">" => {
                    depth = depth.saturating_sub(1);
                    if depth == 0 {
                        self.bump();
                        return Ok(());
                    }
                }
                ">=" | ">>=" if t.kind == TokenKind::Punct => return self.unexpected(),
                ";" | "{" | "}" if t.kind == TokenKind::Punct && !self.in_angle_object(depth) => {
                    return self.unexpected();
                }
                "(" | "[" | "{" if t.kind == TokenKind::Punct => {
                    self.skip_group()?;
                    continue;
                }
                _ => {}
            }
            self.bump();
        }
        self.unexpected()
    }

    fn in_angle_object(&self, _depth: usize) -> bool {
        false
    }

    /// `interface X`, `type X =`, `enum X`, `declare ...` in TypeScript.
    fn ts_type_only_ahead(&self) -> bool {
        let t = match self.peek() {
            Some(t) => t,
            None => return false,
        };
        let next_ident = self.peek_at(1).is_some_and(|n| n.is_ident() && !n.newline_before);
        match t.text.as_str() {
            "interface" | "enum" | "declare" => next_ident,
            "type" => next_ident && (self.at_n(2, "=") || self.at_n(2, "<")),
            _ => false,
        }
    }

    pub fn skip_ts_declaration(&mut self) -> PResult<()> {
        let kw = self.bump().expect("keyword");
        if kw.text == "type" {
            self.bump();
            if self.at("<") {
                self.skip_angle()?;
            }
            self.expect("=")?;
            self.skip_type()?;
            return self.end_statement();
        }
        // interface/enum/declare: skip up to and including the body
        while let Some(t) = self.peek() {
            if t.is("{") {
                self.skip_group()?;
                self.eat(";");
                return Ok(());
            }
            if t.is(";") {
                self.bump();
                return Ok(());
            }
            if t.is("}") {
                return Ok(());
            }
            self.bump();
        }
        Ok(())
    }
}

/// `X` for `new X(...)`.
fn constructed_type(e: &Expr) -> Option<String> {
    match e {
        Expr::Call(c) => match c.callee.as_ref() {
            Expr::Member { base, field, .. } if field == "<init>" => base.dotted(),
            _ => None,
        },
        _ => None,
    }
}

pub(crate) fn truncate(s: &str) -> String {
    if s.chars().count() <= 24 {
        s.to_string()
    } else {
        let mut out: String = s.chars().take(24).collect();
        out.push('…');
        out
    }
}
