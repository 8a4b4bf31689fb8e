//! Random JS programs, a def-use reachability oracle for them, and a
//! hop-by-hop witness checker.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;

use privacy_lens::frontend::ir::{Language, SourceFile};
use privacy_lens::pipeline::{analyze_files, Analysis, Inputs, ScanConfig};
use privacy_lens::sources::SourceKind;
use privacy_lens::taint::{HopKind, TaintFlow};

pub const SOURCE_NAMES: &[&str] = &["email", "ssn", "latitude", "password", "userName", "phoneNumber", "firstName"];
pub const PLAIN_NAMES: &[&str] = &["a", "b", "c", "item", "count", "tmp"];
pub const SOURCE_LITERALS: &[&str] = &["alice@example.com", "123-45-6789"];
pub const PLAIN_LITERALS: &[&str] = &["ok", "hello world"];
pub const SINKS: &[&str] = &["console.log", "fetch"];
/// An unresolvable helper: its result carries the taint of its arguments.
pub const OPAQUE: &str = "combine";

#[derive(Debug, Clone)]
pub enum GExpr {
    Var(String),
    Num(u32),
    Str(String),
    Bin(Box<GExpr>, Box<GExpr>),
    Call(String, Vec<GExpr>),
}

#[derive(Debug, Clone)]
pub enum GStmt {
    Let(String, GExpr),
    Assign(String, GExpr),
    Sink(&'static str, Vec<GExpr>),
    Call(String, Vec<GExpr>),
    Return(GExpr),
}

#[derive(Debug, Clone)]
pub struct GFunc {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<GStmt>,
}

#[derive(Debug, Clone)]
pub struct GFile {
    pub module: String,
    pub funcs: Vec<GFunc>,
}

impl GFile {
    pub fn path(&self) -> String {
        format!("{}.js", self.module)
    }
}

pub fn is_source_name(n: &str) -> bool {
    SOURCE_NAMES.contains(&n)
}

/// What one rendered statement line reads, calls and defines.
#[derive(Debug, Clone, Default)]
pub struct LineInfo {
    pub reads: BTreeSet<String>,
    pub literals: BTreeSet<String>,
    pub calls: BTreeSet<String>,
    pub defines: Option<String>,
    pub is_return: bool,
}

pub struct Program {
    pub files: Vec<GFile>,
    pub texts: Vec<(String, String)>,
    /// (function qualified name, line) → statement facts.
    pub lines: BTreeMap<(String, usize), LineInfo>,
    /// function name → (qualified name, params)
    pub funcs: BTreeMap<String, (String, Vec<String>)>,
}

fn render_expr(e: &GExpr, out: &mut String, info: &mut LineInfo) {
    match e {
        GExpr::Var(v) => {
            info.reads.insert(v.clone());
            out.push_str(v);
        }
        GExpr::Num(n) => out.push_str(&n.to_string()),
        GExpr::Str(s) => {
            info.literals.insert(s.clone());
            out.push('"');
            out.push_str(s);
            out.push('"');
        }
        GExpr::Bin(l, r) => {
            render_expr(l, out, info);
            out.push_str(" + ");
            render_expr(r, out, info);
        }
        GExpr::Call(name, args) => {
            info.calls.insert(name.clone());
            render_call(name, args, out, info);
        }
    }
}

fn render_call(name: &str, args: &[GExpr], out: &mut String, info: &mut LineInfo) {
    out.push_str(name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        render_expr(a, out, info);
    }
    out.push(')');
}

pub fn render(files: Vec<GFile>) -> Program {
    let mut funcs = BTreeMap::new();
    for f in &files {
        for g in &f.funcs {
            funcs.insert(g.name.clone(), (format!("{}::{}", f.module, g.name), g.params.clone()));
        }
    }
    let mut texts = Vec::new();
    let mut lines = BTreeMap::new();
    for file in &files {
        let mut text = String::new();
        let mut line = 1;
        for other in &files {
            if other.module != file.module {
                let names: Vec<&str> = other.funcs.iter().map(|g| g.name.as_str()).collect();
                let rel = other.module.rsplit('/').next().unwrap();
                text.push_str(&format!("import {{ {} }} from \"./{rel}.js\";\n", names.join(", ")));
                line += 1;
            }
        }
        for g in &file.funcs {
            text.push_str(&format!("export function {}({}) {{\n", g.name, g.params.join(", ")));
            line += 1;
            let qn = format!("{}::{}", file.module, g.name);
            for s in &g.body {
                let mut info = LineInfo::default();
                let mut out = String::from("  ");
                match s {
                    GStmt::Let(v, e) => {
                        out.push_str(&format!("let {v} = "));
                        render_expr(e, &mut out, &mut info);
                        info.defines = Some(v.clone());
                    }
                    GStmt::Assign(v, e) => {
                        out.push_str(&format!("{v} = "));
                        render_expr(e, &mut out, &mut info);
                        info.defines = Some(v.clone());
                    }
                    GStmt::Sink(name, args) => {
                        info.calls.insert(name.to_string());
                        render_call(name, args, &mut out, &mut info);
                    }
                    GStmt::Call(name, args) => {
                        info.calls.insert(name.clone());
                        render_call(name, args, &mut out, &mut info);
                    }
                    GStmt::Return(e) => {
                        out.push_str("return ");
                        render_expr(e, &mut out, &mut info);
                        info.is_return = true;
                    }
                }
                out.push_str(";\n");
                text.push_str(&out);
                lines.insert((qn.clone(), line), info);
                line += 1;
            }
            text.push_str("}\n\n");
            line += 2;
        }
        texts.push((file.path(), text));
    }
    Program { files, texts, lines, funcs }
}

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    callable: Vec<(String, usize)>,
    literals: bool,
}

impl<R: Rng> Gen<'_, R> {
    fn expr(&mut self, vars: &[String], depth: u32) -> GExpr {
        let roll = self.rng.gen_range(0..10);
        match roll {
            0 => GExpr::Num(self.rng.gen_range(0..100)),
            1 if self.literals => {
                let pool = if self.rng.gen_bool(0.5) { SOURCE_LITERALS } else { PLAIN_LITERALS };
                GExpr::Str(pool.choose(self.rng).unwrap().to_string())
            }
            2 | 3 if depth > 0 => GExpr::Bin(Box::new(self.expr(vars, depth - 1)), Box::new(self.expr(vars, depth - 1))),
            4 if depth > 0 => {
                let n = self.rng.gen_range(1..=2);
                GExpr::Call(OPAQUE.into(), (0..n).map(|_| self.expr(vars, depth - 1)).collect())
            }
            5 | 6 if depth > 0 && !self.callable.is_empty() => {
                let (name, arity) = self.callable.choose(self.rng).unwrap().clone();
                GExpr::Call(name, (0..arity).map(|_| self.expr(vars, depth - 1)).collect())
            }
            _ if !vars.is_empty() => GExpr::Var(vars.choose(self.rng).unwrap().clone()),
            _ => GExpr::Num(1),
        }
    }

    fn body(&mut self, params: &[String], max_len: usize, allow_return: bool) -> Vec<GStmt> {
        let mut vars: Vec<String> = params.to_vec();
        let mut body = Vec::new();
        let len = self.rng.gen_range(1..=max_len);
        let mut fresh = 0;
        for i in 0..len {
            if allow_return && i + 1 == len && self.rng.gen_bool(0.6) {
                body.push(GStmt::Return(self.expr(&vars, 2)));
                break;
            }
            match self.rng.gen_range(0..10) {
                0..=3 => {
                    let unused: Vec<&&str> = SOURCE_NAMES.iter().filter(|n| !vars.iter().any(|v| v == **n)).collect();
                    let name = if self.rng.gen_bool(0.25) && !unused.is_empty() {
                        unused.choose(self.rng).unwrap().to_string()
                    } else {
                        fresh += 1;
                        format!("v{fresh}")
                    };
                    let e = self.expr(&vars, 2);
                    vars.push(name.clone());
                    body.push(GStmt::Let(name, e));
                }
                4 | 5 if !vars.is_empty() => {
                    let v = vars.choose(self.rng).unwrap().clone();
                    body.push(GStmt::Assign(v, self.expr(&vars, 2)));
                }
                6..=8 => {
                    let n = self.rng.gen_range(1..=3);
                    let args = (0..n).map(|_| self.expr(&vars, 1)).collect();
                    body.push(GStmt::Sink(SINKS.choose(self.rng).unwrap(), args));
                }
                _ if !self.callable.is_empty() => {
                    let (name, arity) = self.callable.choose(self.rng).unwrap().clone();
                    body.push(GStmt::Call(name, (0..arity).map(|_| self.expr(&vars, 1)).collect()));
                }
                _ => {
                    let args = vec![self.expr(&vars, 1)];
                    body.push(GStmt::Sink(SINKS.choose(self.rng).unwrap(), args));
                }
            }
        }
        body
    }
}

fn params<R: Rng>(rng: &mut R, n: usize) -> Vec<String> {
    let mut pool: Vec<&str> = SOURCE_NAMES.iter().chain(PLAIN_NAMES).copied().collect();
    pool.shuffle(rng);
    pool[..n].iter().map(|s| s.to_string()).collect()
}

/// One function, up to `max_len` statements, no calls between scanned
/// functions.
pub fn straight_line<R: Rng>(rng: &mut R, max_len: usize) -> Program {
    let n = rng.gen_range(1..=4);
    let ps = params(rng, n);
    let mut g = Gen { rng, callable: vec![], literals: true };
    let body = g.body(&ps, max_len, false);
    render(vec![GFile { module: "src/main".into(), funcs: vec![GFunc { name: "run".into(), params: ps, body }] }])
}

/// Two to four files of mutually calling functions.
pub fn multi_function<R: Rng>(rng: &mut R) -> Program {
    let nfiles = rng.gen_range(2..=4);
    let mut shapes = Vec::new();
    for fi in 0..nfiles {
        for gi in 0..rng.gen_range(1..=3) {
            let arity = rng.gen_range(1..=3);
            shapes.push((fi, format!("f{fi}_{gi}"), params(rng, arity)));
        }
    }
    let callable: Vec<(String, usize)> = shapes.iter().map(|(_, n, p)| (n.clone(), p.len())).collect();
    let mut gen = Gen { rng, callable, literals: true };
    let mut files: Vec<GFile> =
        (0..nfiles).map(|i| GFile { module: format!("src/m{i}"), funcs: vec![] }).collect();
    for (fi, name, ps) in shapes {
        let body = gen.body(&ps, 8, true);
        files[fi].funcs.push(GFunc { name, params: ps, body });
    }
    render(files)
}

pub type Src = (String, String);
pub type FlowKey = (Src, String, usize);

/// Exhaustive def-use reachability: context-insensitive parameter and
/// return summaries iterated to a fixed point, weak updates in statement
/// order.
pub fn oracle(p: &Program) -> BTreeSet<FlowKey> {
    let mut params: BTreeMap<String, Vec<BTreeSet<Src>>> =
        p.funcs.values().map(|(qn, ps)| (qn.clone(), vec![BTreeSet::new(); ps.len()])).collect();
    let mut ret: BTreeMap<String, BTreeSet<Src>> = BTreeMap::new();
    let mut flows = BTreeSet::new();
    loop {
        let mut changed = false;
        for file in &p.files {
            for g in &file.funcs {
                let qn = format!("{}::{}", file.module, g.name);
                let mut cx = OracleCx { p, qn: qn.clone(), params: &mut params, ret: &mut ret, changed: false };
                let mut env: BTreeMap<String, BTreeSet<Src>> = BTreeMap::new();
                for (i, name) in g.params.iter().enumerate() {
                    let mut t = cx.params[&qn][i].clone();
                    t.extend(cx.own(name));
                    env.insert(name.clone(), t);
                }
                for (line, s) in (first_line(p, &qn)..).zip(&g.body) {
                    match s {
                        GStmt::Let(v, e) | GStmt::Assign(v, e) => {
                            let mut t = cx.eval(e, &env);
                            t.extend(cx.own(v));
                            env.entry(v.clone()).or_default().extend(t);
                        }
                        GStmt::Sink(_, args) => {
                            for a in args {
                                for src in cx.eval(a, &env) {
                                    flows.insert((src, qn.clone(), line));
                                }
                            }
                        }
                        GStmt::Call(name, args) => {
                            cx.eval(&GExpr::Call(name.clone(), args.clone()), &env);
                        }
                        GStmt::Return(e) => {
                            let t = cx.eval(e, &env);
                            let r = cx.ret.entry(qn.clone()).or_default();
                            let before = r.len();
                            r.extend(t);
                            cx.changed |= r.len() != before;
                        }
                    }
                }
                changed |= cx.changed;
            }
        }
        if !changed {
            return flows;
        }
    }
}

fn first_line(p: &Program, qn: &str) -> usize {
    p.lines.keys().filter(|(q, _)| q == qn).map(|(_, l)| *l).min().unwrap_or(0)
}

struct OracleCx<'a> {
    p: &'a Program,
    qn: String,
    params: &'a mut BTreeMap<String, Vec<BTreeSet<Src>>>,
    ret: &'a mut BTreeMap<String, BTreeSet<Src>>,
    changed: bool,
}

impl OracleCx<'_> {
    fn own(&self, name: &str) -> Option<Src> {
        is_source_name(name).then(|| (self.qn.clone(), name.to_string()))
    }

    fn eval(&mut self, e: &GExpr, env: &BTreeMap<String, BTreeSet<Src>>) -> BTreeSet<Src> {
        match e {
            GExpr::Var(v) => {
                let mut t = env.get(v).cloned().unwrap_or_default();
                t.extend(self.own(v));
                t
            }
            GExpr::Num(_) => BTreeSet::new(),
            GExpr::Str(s) => {
                if SOURCE_LITERALS.contains(&s.as_str()) {
                    [(self.qn.clone(), s.clone())].into()
                } else {
                    BTreeSet::new()
                }
            }
            GExpr::Bin(l, r) => {
                let mut t = self.eval(l, env);
                t.extend(self.eval(r, env));
                t
            }
            GExpr::Call(name, args) => {
                let ts: Vec<BTreeSet<Src>> = args.iter().map(|a| self.eval(a, env)).collect();
                if name == OPAQUE {
                    return ts.into_iter().flatten().collect();
                }
                let target = self.p.funcs[name].0.clone();
                for (i, t) in ts.into_iter().enumerate() {
                    let slot = &mut self.params.get_mut(&target).unwrap()[i];
                    let before = slot.len();
                    slot.extend(t);
                    self.changed |= slot.len() != before;
                }
                self.ret.get(&target).cloned().unwrap_or_default()
            }
        }
    }
}

pub fn analyse(p: &Program) -> Analysis {
    static INPUTS: OnceLock<Inputs> = OnceLock::new();
    let config = ScanConfig::new(".");
    let inputs = INPUTS.get_or_init(|| Inputs::load(&config).unwrap());
    let files = p.texts.iter().map(|(path, text)| SourceFile::new(path.clone(), Language::JsLike, text.clone())).collect();
    analyze_files(&config, inputs, files).unwrap()
}

pub fn line_of(text: &str, offset: usize) -> usize {
    text[..offset].matches('\n').count() + 1
}

pub fn engine_flows(p: &Program, a: &Analysis) -> BTreeSet<FlowKey> {
    a.taint
        .flows
        .iter()
        .map(|f| {
            let s = &a.sources[f.source];
            let file = f.caller.file.as_deref().unwrap();
            let text = &p.texts.iter().find(|(path, _)| path == file).unwrap().1;
            ((s.function.qualified_name.clone(), s.symbol.clone()), f.caller.qualified_name.clone(), line_of(text, f.site.start))
        })
        .collect()
}

/// Checks that every hop of a witness is justified by the program text.
pub fn verify_witness(p: &Program, a: &Analysis, f: &TaintFlow) -> Result<(), String> {
    let info = |h: &privacy_lens::taint::Hop| {
        p.lines
            .get(&(h.function.qualified_name.clone(), h.line))
            .ok_or_else(|| format!("hop {}:{} is not a statement", h.function.qualified_name, h.line))
    };
    let name_of = |qn: &str| qn.rsplit("::").next().unwrap().to_string();
    let path = &f.path;
    let first = path.first().ok_or("empty path")?;
    let src = &a.sources[f.source];
    if first.function != src.function || first.kind != HopKind::Use {
        return Err(format!("first hop {:?} does not start at the source", first));
    }
    match src.kind {
        SourceKind::VariableIdentifier => {
            if first.var != src.symbol || !info(first)?.reads.contains(&first.var) {
                return Err(format!("first hop reads {} instead of {}", first.var, src.symbol));
            }
        }
        SourceKind::LiteralText => {
            if !first.var.starts_with('"') || !info(first)?.literals.contains(&src.symbol) {
                return Err(format!("first hop {} is not the literal {}", first.var, src.symbol));
            }
        }
    }
    for w in path.windows(2) {
        let (x, y) = (&w[0], &w[1]);
        let (ix, iy) = (info(x)?, info(y)?);
        match y.kind {
            HopKind::CallResult => {
                let callee = y.var.trim_end_matches("()");
                if name_of(&x.function.qualified_name) != callee || !ix.is_return || !iy.calls.contains(callee) {
                    return Err(format!("bad return hop {} → {}", x.var, y.var));
                }
            }
            HopKind::Use => {
                if !iy.reads.contains(&y.var) {
                    return Err(format!("hop {}:{} does not read {}", y.function.qualified_name, y.line, y.var));
                }
                let local = x.function == y.function && x.line < y.line && ix.defines.as_deref() == Some(y.var.as_str());
                let callee = name_of(&y.function.qualified_name);
                let param = p.funcs[&callee].1.contains(&y.var) && ix.calls.contains(&callee);
                if !local && !param {
                    return Err(format!("hop {}:{} → {}:{} {} unjustified", x.function.qualified_name, x.line, y.function.qualified_name, y.line, y.var));
                }
            }
        }
    }
    let last = path.last().unwrap();
    let file = f.caller.file.as_deref().unwrap();
    let text = &p.texts.iter().find(|(path, _)| path == file).unwrap().1;
    if last.function != f.caller || last.line != line_of(text, f.site.start) {
        return Err("last hop is not at the sink".into());
    }
    if !info(last)?.calls.contains(&f.callee.qualified_name) {
        return Err(format!("sink line does not call {}", f.callee.qualified_name));
    }
    Ok(())
}
