use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::cmp::Reverse;

use crate::frontend::ir::{IRModule, ImportDecl, Language};

/// Module-level dependency graph built from import statements. Nodes are
/// scanned module names plus external library/package names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ImportGraph {
    pub nodes: BTreeSet<String>,
    pub edges: BTreeSet<(String, String)>,
}

/// Where an import statement points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ImportTarget {
    /// A scanned module, by module name.
    Module(String),
    /// Anything else: npm package root or Java package.
    External(String),
}

impl ImportTarget {
    pub fn name(&self) -> &str {
        match self {
            ImportTarget::Module(n) | ImportTarget::External(n) => n,
        }
    }
}

/// Resolves import targets against the set of scanned modules.
pub struct ModuleIndex {
    /// JS module names (path without extension).
    js: BTreeSet<String>,
    /// Java packages.
    java: BTreeSet<String>,
}

impl ModuleIndex {
    pub fn new(modules: &[IRModule]) -> Self {
        let mut js = BTreeSet::new();
        let mut java = BTreeSet::new();
        for m in modules {
            match m.language() {
                Language::JsLike => js.insert(m.module_name.clone()),
                Language::JavaLike => java.insert(m.module_name.clone()),
            };
        }
        ModuleIndex { js, java }
    }

    pub fn resolve(&self, importer: &IRModule, decl: &ImportDecl) -> ImportTarget {
        match importer.language() {
            Language::JsLike => self.resolve_js(importer.path(), &decl.target),
            Language::JavaLike => self.resolve_java(&decl.target, decl.wildcard),
        }
    }

    fn resolve_js(&self, importer_path: &str, target: &str) -> ImportTarget {
        if target.starts_with("./") || target.starts_with("../") || target.starts_with('/') {
            let dir = importer_path.rsplit_once('/').map(|(d, _)| d).unwrap_or("");
            let joined = normalize(&format!("{dir}/{target}"));
            let stem = strip_js_ext(&joined);
            for cand in [stem.to_string(), format!("{stem}/index")] {
                if self.js.contains(&cand) {
                    return ImportTarget::Module(cand);
                }
            }
            return ImportTarget::External(stem.to_string());
        }
        ImportTarget::External(package_root(target).to_string())
    }

    fn resolve_java(&self, target: &str, wildcard: bool) -> ImportTarget {
        let pkg = if wildcard { target.to_string() } else { java_package_of(target) };
        if self.java.contains(&pkg) {
            ImportTarget::Module(pkg)
        } else {
            ImportTarget::External(pkg)
        }
    }
}

/// Package part of a single-type or static import: everything before the
/// first capitalised segment.
pub fn java_package_of(target: &str) -> String {
    let segs: Vec<&str> = target.split('.').collect();
    let cut = segs
        .iter()
        .position(|s| s.starts_with(|c: char| c.is_ascii_uppercase()))
        .unwrap_or(segs.len().saturating_sub(1));
    segs[..cut].join(".")
}

/// `lodash/fp` → `lodash`, `@scope/pkg/x` → `@scope/pkg`, `fs/promises` kept
/// for node built-ins that are addressed by subpath.
pub fn package_root(target: &str) -> &str {
    let target = target.strip_prefix("node:").unwrap_or(target);
    if target == "fs/promises" {
        return target;
    }
    let mut idx = target.match_indices('/').map(|(i, _)| i);
    let end = if target.starts_with('@') {
        idx.nth(1)
    } else {
        idx.next()
    };
    match end {
        Some(i) => &target[..i],
        None => target,
    }
}

fn strip_js_ext(path: &str) -> &str {
    for ext in [".js", ".jsx", ".ts", ".tsx", ".mjs", ".cjs"] {
        if let Some(s) = path.strip_suffix(ext) {
            return s;
        }
    }
    path
}

fn normalize(path: &str) -> String {
    let mut out: Vec<&str> = Vec::new();
    for seg in path.split('/') {
        match seg {
            "" | "." => {}
            ".." => {
                out.pop();
            }
            s => out.push(s),
        }
    }
    out.join("/")
}

pub fn build_import_graph(modules: &[IRModule]) -> ImportGraph {
    let index = ModuleIndex::new(modules);
    let mut g = ImportGraph::default();
    for m in modules {
        g.nodes.insert(m.module_name.clone());
        for decl in &m.imports {
            let target = index.resolve(m, decl);
            let name = target.name().to_string();
            g.nodes.insert(name.clone());
            if name != m.module_name {
                g.edges.insert((m.module_name.clone(), name));
            }
        }
    }
    g
}

impl ImportGraph {
    pub fn from_edges<'a>(edges: impl IntoIterator<Item = (&'a str, &'a str)>) -> Self {
        let mut g = ImportGraph::default();
        for (a, b) in edges {
            g.nodes.insert(a.to_string());
            g.nodes.insert(b.to_string());
            if a != b {
                g.edges.insert((a.to_string(), b.to_string()));
            }
        }
        g
    }

    /// Strongly connected components (Tarjan, iterative), each sorted.
    pub fn sccs(&self) -> Vec<Vec<String>> {
        let names: Vec<&String> = self.nodes.iter().collect();
        let id: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let n = names.len();
        let mut adj = vec![Vec::new(); n];
        for (a, b) in &self.edges {
            if let (Some(&x), Some(&y)) = (id.get(a.as_str()), id.get(b.as_str())) {
                adj[x].push(y);
            }
        }
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut next = 0usize;
        let mut out = Vec::new();
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = next;
            low[root] = next;
            next += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut i)) = call.last_mut() {
                if *i < adj[v].len() {
                    let w = adj[v][*i];
                    *i += 1;
                    if index[w] == usize::MAX {
                        index[w] = next;
                        low[w] = next;
                        next += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("scc stack");
                            on_stack[w] = false;
                            comp.push(names[w].clone());
                            if w == v {
                                break;
                            }
                        }
                        comp.sort();
                        out.push(comp);
                    }
                }
            }
        }
        out
    }
}

/// SCC groups with dependencies before dependents. Among groups whose
/// dependencies are all emitted, the lexicographically smallest goes first.
pub fn dependency_order(g: &ImportGraph) -> Vec<Vec<String>> {
    let comps = g.sccs();
    let mut group_of: HashMap<&str, usize> = HashMap::new();
    for (i, c) in comps.iter().enumerate() {
        for n in c {
            group_of.insert(n.as_str(), i);
        }
    }
    // deps[i] = groups that group i imports
    let mut deps: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); comps.len()];
    let mut dependents: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); comps.len()];
    for (a, b) in &g.edges {
        let (x, y) = (group_of[a.as_str()], group_of[b.as_str()]);
        if x != y {
            deps[x].insert(y);
            dependents[y].insert(x);
        }
    }
    let mut remaining: Vec<usize> = deps.iter().map(BTreeSet::len).collect();
    let mut ready: BinaryHeap<Reverse<(&Vec<String>, usize)>> = BinaryHeap::new();
    for (i, c) in comps.iter().enumerate() {
        if remaining[i] == 0 {
            ready.push(Reverse((c, i)));
        }
    }
    let mut out = Vec::with_capacity(comps.len());
    while let Some(Reverse((_, i))) = ready.pop() {
        out.push(comps[i].clone());
        for &d in &dependents[i] {
            remaining[d] -= 1;
            if remaining[d] == 0 {
                ready.push(Reverse((&comps[d], d)));
            }
        }
    }
    out
}

/// Groups of more than one module, i.e. import cycles.
pub fn cycles(order: &[Vec<String>]) -> Vec<&Vec<String>> {
    order.iter().filter(|g| g.len() > 1).collect()
}

/// Position of each node's group in `order`.
pub fn group_positions(order: &[Vec<String>]) -> BTreeMap<&str, usize> {
    let mut pos = BTreeMap::new();
    for (i, g) in order.iter().enumerate() {
        for n in g {
            pos.insert(n.as_str(), i);
        }
    }
    pos
}
