//! Flows of personal data from sources into privacy-relevant call sites.
//!
//! Field-insensitive and context-insensitive. Each function body is one
//! ordered pass with weak updates; the inter-procedural part moves argument
//! taint into parameters and return taint back to call sites until nothing
//! changes.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::closure::{classify_method, MethodClass, PrivacySets};
use crate::frontend::ir::{Expr, IRFunction, IRModule, LiteralKind, Span, Statement, StmtKind};
use crate::graphs::import::{dependency_order, ImportGraph};
use crate::graphs::CallGraph;
use crate::method::MethodRef;
use crate::sources::{getter_property, literal_content, LineStarts, PersonalDataSource, SourceKind};

/// One step of a witness path: `var` is read at the statement (or parameter)
/// spanning `span` inside `function`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hop {
    pub function: MethodRef,
    pub file: String,
    pub span: Span,
    pub line: usize,
    pub var: String,
    pub kind: HopKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HopKind {
    /// A variable, field or literal read inside a statement.
    Use,
    /// The value returned by a call into a scanned function.
    CallResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaintFlow {
    /// Index into the source list the analysis ran with.
    pub source: usize,
    pub caller: MethodRef,
    pub site: Span,
    pub callee: MethodRef,
    pub path: Vec<Hop>,
    pub crosses_files: bool,
    pub pii: bool,
}

/// Source ids reaching each variable at the end of a function.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TaintState {
    pub tainted: BTreeMap<(String, String), BTreeSet<usize>>,
}

#[derive(Debug, Clone, Default)]
pub struct TaintResult {
    pub flows: Vec<TaintFlow>,
    pub state: TaintState,
    /// Function passes run before the fixed point.
    pub passes: usize,
}

struct Link {
    func: usize,
    span: Span,
    var: String,
    kind: HopKind,
    prev: Option<Rc<Link>>,
}

type Taint = BTreeMap<usize, Rc<Link>>;

/// Per-variable taint inside one pass: the chain leading to the definition,
/// `None` when the variable itself is the source.
type VarTaint = BTreeMap<usize, Option<Rc<Link>>>;

struct Func<'a> {
    module: &'a IRModule,
    f: &'a IRFunction,
    lines: Rc<LineStarts>,
    ident_src: HashMap<&'a str, Vec<usize>>,
    lit_src: HashMap<&'a str, Vec<usize>>,
}

struct Engine<'a> {
    funcs: Vec<Func<'a>>,
    index: HashMap<&'a str, usize>,
    cg: &'a CallGraph,
    sets: &'a PrivacySets,
    sources: &'a [PersonalDataSource],
    params: Vec<Vec<Taint>>,
    ret: Vec<Taint>,
    callers: Vec<BTreeSet<usize>>,
    flows: BTreeMap<(usize, usize, Span), (MethodRef, Rc<Link>)>,
    /// Scheduling priority: callers before callees, SCC members together.
    rank: Vec<usize>,
    dirty: BTreeSet<(usize, usize)>,
}

/// Position of each function in a callers-first order of the call graph's
/// condensation, so parameter taint is mostly complete before a callee runs.
fn callers_first(funcs: &[Func], callers: &[BTreeSet<usize>]) -> Vec<usize> {
    let name = |i: usize| funcs[i].f.id.qualified_name.as_str();
    let mut g = ImportGraph::from_edges(
        callers.iter().enumerate().flat_map(|(b, cs)| cs.iter().map(move |&a| (name(a), name(b)))),
    );
    g.nodes.extend((0..funcs.len()).map(|i| name(i).to_string()));
    let order = dependency_order(&g);
    let pos: HashMap<&str, usize> =
        order.iter().rev().enumerate().flat_map(|(r, c)| c.iter().map(move |s| (s.as_str(), r))).collect();
    (0..funcs.len()).map(|i| pos[name(i)]).collect()
}

/// Run the whole-program analysis. `modules` may come in any order.
pub fn propagate_inter(
    cg: &CallGraph,
    modules: &[IRModule],
    sources: &[PersonalDataSource],
    sets: &PrivacySets,
) -> TaintResult {
    let mut mods: Vec<&IRModule> = modules.iter().collect();
    mods.sort_by(|a, b| a.path().cmp(b.path()));
    let mut engine = Engine::new(&mods, cg, sets, sources);
    engine.run_all()
}

/// Analyse a single function in isolation: every call is a black box and
/// nothing is a sink.
pub fn propagate_intra(module: &IRModule, f: &IRFunction, sources: &[PersonalDataSource]) -> TaintState {
    let cg = CallGraph::default();
    let sets = PrivacySets::default();
    let single = IRModule { functions: vec![f.clone()], ..module.clone() };
    let mods = [&single];
    let mut engine = Engine::new(&mods, &cg, &sets, sources);
    let mut state = TaintState::default();
    let (vars, _, _) = engine.pass(0);
    for (v, t) in vars {
        state.tainted.insert((f.id.qualified_name.clone(), v), t.keys().copied().collect());
    }
    state
}

/// Application methods that are the caller of at least one flow.
pub fn collect_am(flows: &[TaintFlow], sets: &PrivacySets) -> BTreeSet<MethodRef> {
    flows
        .iter()
        .filter(|f| classify_method(sets, &f.caller) == MethodClass::Application)
        .map(|f| f.caller.clone())
        .collect()
}

impl<'a> Engine<'a> {
    fn new(
        mods: &[&'a IRModule],
        cg: &'a CallGraph,
        sets: &'a PrivacySets,
        sources: &'a [PersonalDataSource],
    ) -> Self {
        let mut funcs = Vec::new();
        let mut index = HashMap::new();
        for m in mods {
            let lines = Rc::new(LineStarts::new(&m.file.text));
            for f in &m.functions {
                index.insert(f.id.qualified_name.as_str(), funcs.len());
                funcs.push(Func {
                    module: m,
                    f,
                    lines: lines.clone(),
                    ident_src: HashMap::new(),
                    lit_src: HashMap::new(),
                });
            }
        }
        for (i, s) in sources.iter().enumerate() {
            if let Some(&fi) = index.get(s.function.qualified_name.as_str()) {
                let table = match s.kind {
                    SourceKind::VariableIdentifier => &mut funcs[fi].ident_src,
                    SourceKind::LiteralText => &mut funcs[fi].lit_src,
                };
                table.entry(s.symbol.as_str()).or_default().push(i);
            }
        }
        let mut callers = vec![BTreeSet::new(); funcs.len()];
        for e in cg.resolved_edges() {
            if let (Some(&a), Some(&b)) = (index.get(e.caller.qualified_name.as_str()), index.get(e.callee.qualified_name.as_str())) {
                callers[b].insert(a);
            }
        }
        let rank = callers_first(&funcs, &callers);
        let params = funcs.iter().map(|f| vec![Taint::new(); f.f.params.len()]).collect();
        let ret = vec![Taint::new(); funcs.len()];
        let dirty = (0..funcs.len()).map(|fi| (rank[fi], fi)).collect();
        Engine { funcs, index, cg, sets, sources, params, ret, callers, rank, flows: BTreeMap::new(), dirty }
    }

    fn run_all(&mut self) -> TaintResult {
        let mut passes = 0;
        let mut state = TaintState::default();
        while let Some((_, fi)) = self.dirty.pop_first() {
            passes += 1;
            let (vars, touched, ret_changed) = self.pass(fi);
            self.dirty.extend(touched.into_iter().map(|g| (self.rank[g], g)));
            if ret_changed {
                let callers: Vec<(usize, usize)> = self.callers[fi].iter().map(|&c| (self.rank[c], c)).collect();
                self.dirty.extend(callers);
            }
            let qn = &self.funcs[fi].f.id.qualified_name;
            for (v, t) in vars {
                state.tainted.insert((qn.clone(), v), t.keys().copied().collect());
            }
        }
        let mut flows: Vec<TaintFlow> = self
            .flows
            .iter()
            .map(|(&(src, caller, site), (callee, link))| self.flow(src, caller, site, callee.clone(), link))
            .collect();
        flows.sort_by(|a, b| {
            (a.caller.file.as_deref(), a.site, a.source).cmp(&(b.caller.file.as_deref(), b.site, b.source))
        });
        TaintResult { flows, state, passes }
    }

    fn flow(&self, src: usize, caller: usize, site: Span, callee: MethodRef, link: &Rc<Link>) -> TaintFlow {
        let mut path = Vec::new();
        let mut cur = Some(link.clone());
        while let Some(l) = cur {
            let func = &self.funcs[l.func];
            path.push(Hop {
                function: func.f.id.clone(),
                file: func.module.path().to_string(),
                span: l.span,
                line: func.lines.line(l.span.start),
                var: l.var.clone(),
                kind: l.kind,
            });
            cur = l.prev.clone();
        }
        path.reverse();
        let source = &self.sources[src];
        let sink_file = self.funcs[caller].module.path();
        let crosses_files = source.file != sink_file || path.iter().any(|h| h.file != sink_file);
        TaintFlow {
            source: src,
            caller: self.funcs[caller].f.id.clone(),
            site,
            callee,
            path,
            crosses_files,
            pii: source.pii,
        }
    }

    /// One ordered pass over a function body. Returns the final variable
    /// taint, callees whose parameter taint grew, and whether the return
    /// taint grew.
    fn pass(&mut self, fi: usize) -> (BTreeMap<String, VarTaint>, BTreeSet<usize>, bool) {
        let f = self.funcs[fi].f;
        let mut vars: BTreeMap<String, VarTaint> = BTreeMap::new();
        for (i, p) in f.params.iter().enumerate() {
            let entry = vars.entry(p.clone()).or_default();
            for &src in self.funcs[fi].ident_src.get(p.as_str()).into_iter().flatten() {
                entry.entry(src).or_insert(None);
            }
            for (&src, link) in &self.params[fi][i] {
                entry.entry(src).or_insert_with(|| Some(link.clone()));
            }
        }
        let mut cx = Pass { fi, vars, touched: BTreeSet::new(), ret_changed: false };
        for stmt in &f.body {
            self.statement(&mut cx, stmt);
        }
        (cx.vars, cx.touched, cx.ret_changed)
    }

    fn statement(&mut self, cx: &mut Pass, stmt: &Statement) {
        let s = stmt.span;
        match &stmt.kind {
            StmtKind::VarDecl { lhs, rhs, .. } => {
                let t = rhs.as_ref().map(|e| self.eval(cx, e, s)).unwrap_or_default();
                self.define(cx, lhs, &t, &[lhs.as_str()]);
            }
            StmtKind::Assign { lhs, rhs } => {
                let t = self.eval(cx, rhs, s);
                self.eval_lhs_calls(cx, lhs, s);
                if let Some(root) = lhs.root_var() {
                    let mut names = vec![root];
                    collect_fields(lhs, &mut names);
                    let root = root.to_string();
                    self.define(cx, &root, &t, &names);
                }
            }
            StmtKind::CallStmt(e) => {
                self.eval(cx, e, s);
            }
            StmtKind::Return(e) => {
                if let Some(e) = e {
                    let t = self.eval(cx, e, s);
                    let ret = &mut self.ret[cx.fi];
                    for (src, link) in t {
                        if let std::collections::btree_map::Entry::Vacant(v) = ret.entry(src) {
                            v.insert(link);
                            cx.ret_changed = true;
                        }
                    }
                }
            }
        }
    }

    /// Weak update of `var`, plus sources named by the assignment target.
    fn define(&self, cx: &mut Pass, var: &str, t: &Taint, names: &[&str]) {
        if var.starts_with('<') && !var.starts_with("<param") && !var.starts_with("<tmp") {
            return;
        }
        let entry = cx.vars.entry(var.to_string()).or_default();
        for name in names {
            for &src in self.funcs[cx.fi].ident_src.get(name).into_iter().flatten() {
                entry.entry(src).or_insert(None);
            }
        }
        for (&src, link) in t {
            entry.entry(src).or_insert_with(|| Some(link.clone()));
        }
    }

    fn eval_lhs_calls(&mut self, cx: &mut Pass, lhs: &Expr, s: Span) {
        match lhs {
            Expr::Member { base, .. } => self.eval_lhs_calls(cx, base, s),
            Expr::Ident { .. } => {}
            other => {
                self.eval(cx, other, s);
            }
        }
    }

    fn use_link(&self, cx: &Pass, var: &str, s: Span, out: &mut Taint) {
        let fi = cx.fi;
        for &src in self.funcs[fi].ident_src.get(var).into_iter().flatten() {
            out.entry(src).or_insert_with(|| link(fi, s, var, HopKind::Use, None));
        }
        if let Some(t) = cx.vars.get(var) {
            for (&src, prev) in t {
                out.entry(src).or_insert_with(|| link(fi, s, var, HopKind::Use, prev.clone()));
            }
        }
    }

    fn eval(&mut self, cx: &mut Pass, e: &Expr, s: Span) -> Taint {
        let mut out = Taint::new();
        match e {
            Expr::Ident { name, .. } => self.use_link(cx, name, s, &mut out),
            Expr::Literal { text, kind: LiteralKind::String | LiteralKind::Template, .. } => {
                let content = literal_content(text);
                for &src in self.funcs[cx.fi].lit_src.get(content).into_iter().flatten() {
                    out.entry(src).or_insert_with(|| link(cx.fi, s, &display_literal(content), HopKind::Use, None));
                }
            }
            Expr::Literal { .. } => {}
            Expr::Member { base, field, .. } => {
                let shown = e.dotted().unwrap_or_else(|| format!("<expr>.{field}"));
                for &src in self.funcs[cx.fi].ident_src.get(field.as_str()).into_iter().flatten() {
                    out.entry(src).or_insert_with(|| link(cx.fi, s, &shown, HopKind::Use, None));
                }
                for (src, l) in self.eval(cx, base, s) {
                    out.entry(src).or_insert(l);
                }
            }
            Expr::Compound { parts, .. } => {
                for p in parts {
                    for (src, l) in self.eval(cx, p, s) {
                        out.entry(src).or_insert(l);
                    }
                }
            }
            Expr::Call(c) => {
                let (recv, getter) = match c.callee.as_ref() {
                    Expr::Member { base, field, .. } => (self.eval(cx, base, s), field.as_str()),
                    Expr::Ident { name, .. } => (Taint::new(), name.as_str()),
                    other => (self.eval(cx, other, s), ""),
                };
                let args: Vec<Taint> = c.args.iter().map(|a| self.eval(cx, a, s)).collect();
                let caller = &self.funcs[cx.fi].f.id;
                let edge = self.cg.edge_at(caller, c.span).filter(|e| e.resolution.is_resolved());
                let target = edge.and_then(|e| self.index.get(e.callee.qualified_name.as_str()).copied());

                if let Some(edge) = edge {
                    if self.sets.is_privacy_relevant(&edge.callee) {
                        for t in std::iter::once(&recv).chain(&args) {
                            for (&src, l) in t {
                                self.flows
                                    .entry((src, cx.fi, c.span))
                                    .or_insert_with(|| (edge.callee.clone(), l.clone()));
                            }
                        }
                    }
                }

                if c.args.is_empty() && getter_property(getter).is_some() {
                    let shown = c.callee_path().unwrap_or_else(|| getter.to_string());
                    for &src in self.funcs[cx.fi].ident_src.get(getter).into_iter().flatten() {
                        out.entry(src).or_insert_with(|| link(cx.fi, s, &format!("{shown}()"), HopKind::Use, None));
                    }
                }
                match target {
                    Some(g) => {
                        for (i, t) in args.iter().enumerate() {
                            if i >= self.params[g].len() {
                                break;
                            }
                            let slot = &mut self.params[g][i];
                            for (&src, l) in t {
                                if let std::collections::btree_map::Entry::Vacant(v) = slot.entry(src) {
                                    v.insert(l.clone());
                                    cx.touched.insert(g);
                                }
                            }
                        }
                        let shown = format!("{}()", c.callee_path().unwrap_or_else(|| "<call>".into()));
                        for (&src, l) in &self.ret[g] {
                            out.entry(src)
                                .or_insert_with(|| link(cx.fi, s, &shown, HopKind::CallResult, Some(l.clone())));
                        }
                    }
                    None => {
                        for t in std::iter::once(recv).chain(args) {
                            for (src, l) in t {
                                out.entry(src).or_insert(l);
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

struct Pass {
    fi: usize,
    vars: BTreeMap<String, VarTaint>,
    touched: BTreeSet<usize>,
    ret_changed: bool,
}

fn link(func: usize, span: Span, var: &str, kind: HopKind, prev: Option<Rc<Link>>) -> Rc<Link> {
    Rc::new(Link { func, span, var: var.to_string(), kind, prev })
}

fn display_literal(content: &str) -> String {
    let short: String = content.chars().take(32).collect();
    if short.len() < content.len() {
        format!("\"{short}…\"")
    } else {
        format!("\"{short}\"")
    }
}

fn collect_fields<'e>(e: &'e Expr, out: &mut Vec<&'e str>) {
    if let Expr::Member { base, field, .. } = e {
        out.push(field);
        collect_fields(base, out);
    }
}
