use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use super::import::{package_root, ImportTarget, ModuleIndex};
use crate::catalog::{CatalogEntry, LibraryList, Origin, PrivacyCatalog};
use crate::frontend::ir::{CallExpr, IRFunction, IRModule, ImportDecl, Language, Span};
use crate::method::MethodRef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Resolution {
    Exact,
    ImportResolved,
    SuffixHeuristic,
    Unresolved,
}

impl Resolution {
    pub fn is_resolved(self) -> bool {
        self != Resolution::Unresolved
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Resolution::Exact => "Exact",
            Resolution::ImportResolved => "ImportResolved",
            Resolution::SuffixHeuristic => "SuffixHeuristic",
            Resolution::Unresolved => "Unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CallEdge {
    pub caller: MethodRef,
    pub site: Span,
    pub callee: MethodRef,
    pub resolution: Resolution,
    /// Callee as written, e.g. `this.repo.save`.
    pub text: String,
}

#[derive(Debug, Clone, Default)]
pub struct CallGraph {
    /// Scanned functions plus library methods reached by resolved edges.
    pub nodes: BTreeSet<MethodRef>,
    /// Sorted by (caller, site, callee).
    pub edges: Vec<CallEdge>,
    /// Catalog entry index of every node matching a catalog pattern, keyed
    /// by qualified name.
    pub catalog_hits: BTreeMap<String, usize>,
    site_index: HashMap<(String, Span), usize>,
}

impl CallGraph {
    pub fn new(nodes: BTreeSet<MethodRef>, edges: Vec<CallEdge>, catalog_hits: BTreeMap<String, usize>) -> CallGraph {
        let mut edges = edges;
        edges.sort_by(|a, b| {
            (&a.caller, a.site, &a.callee).cmp(&(&b.caller, b.site, &b.callee))
        });
        edges.dedup_by(|a, b| a.caller == b.caller && a.site == b.site && a.callee == b.callee);
        let site_index = edges
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.caller.qualified_name.clone(), e.site), i))
            .collect();
        CallGraph { nodes, edges, catalog_hits, site_index }
    }

    /// The edge recorded for the call at `site` inside `caller`.
    pub fn edge_at(&self, caller: &MethodRef, site: Span) -> Option<&CallEdge> {
        self.site_index
            .get(&(caller.qualified_name.clone(), site))
            .map(|&i| &self.edges[i])
    }

    pub fn resolved_edges(&self) -> impl Iterator<Item = &CallEdge> {
        self.edges.iter().filter(|e| e.resolution.is_resolved())
    }

    pub fn unresolved_count(&self) -> usize {
        self.edges.len() - self.resolved_edges().count()
    }

    /// Resolved successors of each node.
    pub fn successors(&self) -> BTreeMap<&MethodRef, BTreeSet<&MethodRef>> {
        let mut out: BTreeMap<&MethodRef, BTreeSet<&MethodRef>> = BTreeMap::new();
        for e in self.resolved_edges() {
            out.entry(&e.caller).or_default().insert(&e.callee);
        }
        out
    }

    pub fn catalog_entry<'c>(&self, catalog: &'c PrivacyCatalog, m: &MethodRef) -> Option<&'c CatalogEntry> {
        self.catalog_hits.get(&m.qualified_name).map(|&i| &catalog.entries[i])
    }
}

/// Per-module lookup tables shared by all call sites.
struct Scope<'a> {
    defs: HashMap<&'a str, BTreeMap<&'a str, &'a IRFunction>>,
    default_exports: HashMap<&'a str, &'a str>,
    index: ModuleIndex,
    catalog: &'a PrivacyCatalog,
    libraries: &'a LibraryList,
}

struct Hit {
    callee: MethodRef,
    resolution: Resolution,
    entry: Option<usize>,
}

pub fn build_call_graph(modules: &[IRModule], catalog: &PrivacyCatalog, libraries: &LibraryList) -> CallGraph {
    let mut order: Vec<&IRModule> = modules.iter().collect();
    order.sort_by(|a, b| a.path().cmp(b.path()));

    let mut defs: HashMap<&str, BTreeMap<&str, &IRFunction>> = HashMap::new();
    let mut default_exports = HashMap::new();
    for m in &order {
        let table = defs.entry(m.module_name.as_str()).or_default();
        for f in &m.functions {
            table.entry(f.name.as_str()).or_insert(f);
        }
        if let Some(d) = &m.default_export {
            default_exports.entry(m.module_name.as_str()).or_insert(d.as_str());
        }
    }
    let scope = Scope { defs, default_exports, index: ModuleIndex::new(modules), catalog, libraries };

    let mut nodes = BTreeSet::new();
    let mut hits = BTreeMap::new();
    let mut edges = Vec::new();
    for m in &order {
        for f in &m.functions {
            nodes.insert(f.id.clone());
            if let Some(i) = catalog.match_name(&f.id.dotted_name()) {
                if catalog.entries[i].applies_to(m.language()) {
                    hits.insert(f.id.qualified_name.clone(), i);
                }
            }
        }
    }
    for m in &order {
        for f in &m.functions {
            for stmt in &f.body {
                for call in &stmt.calls {
                    let text = callee_text(call);
                    let hit = scope.resolve(m, f, call).unwrap_or_else(|| Hit {
                        callee: MethodRef::external(format!("?::{text}"), ""),
                        resolution: Resolution::Unresolved,
                        entry: None,
                    });
                    if hit.resolution.is_resolved() {
                        nodes.insert(hit.callee.clone());
                    }
                    if let Some(i) = hit.entry {
                        hits.insert(hit.callee.qualified_name.clone(), i);
                    }
                    edges.push(CallEdge {
                        caller: f.id.clone(),
                        site: call.span,
                        callee: hit.callee,
                        resolution: hit.resolution,
                        text,
                    });
                }
            }
        }
    }
    CallGraph::new(nodes, edges, hits)
}

fn callee_text(call: &CallExpr) -> String {
    call.callee_path()
        .or_else(|| call.method_name().map(|m| format!("<expr>.{m}")))
        .unwrap_or_else(|| "<expr>".to_string())
}

impl<'a> Scope<'a> {
    fn resolve(&self, m: &IRModule, f: &IRFunction, call: &CallExpr) -> Option<Hit> {
        let path = call.callee_path()?;
        let written: Vec<String> = path.split('.').map(str::to_string).collect();
        let segs = self.substitute_receiver(m, f, written.clone())?;
        self.exact(m, f, &segs)
            .or_else(|| self.via_imports(m, &segs))
            .or_else(|| self.by_suffix(m, &segs))
            .or_else(|| if segs != written { self.by_suffix(m, &written) } else { None })
    }

    /// Rewrites `this.f.m`, `v.m` and (Java) `field.m` to `Type.m` when the
    /// variable or field has a declared or constructed type.
    fn substitute_receiver(&self, m: &IRModule, f: &IRFunction, segs: Vec<String>) -> Option<Vec<String>> {
        let class = f.class.as_deref();
        let field_type = |name: &str| class.and_then(|c| m.field_types.get(&format!("{c}.{name}")));
        let first = segs.first()?.as_str();
        if first == "this" || first == "super" {
            if segs.len() == 1 {
                return None;
            }
            if segs.len() >= 3 {
                if let Some(t) = field_type(&segs[1]) {
                    return Some(splice(t, &segs[2..]));
                }
            }
            return Some(segs[1..].to_vec());
        }
        if segs.len() >= 2 {
            if let Some(t) = f.local_types.get(first) {
                return Some(splice(t, &segs[1..]));
            }
            if m.language() == Language::JavaLike && !f.params.iter().any(|p| p == first) {
                if let Some(t) = field_type(first) {
                    return Some(splice(t, &segs[1..]));
                }
            }
        }
        Some(segs)
    }

    fn exact(&self, m: &IRModule, f: &IRFunction, segs: &[String]) -> Option<Hit> {
        let defs = self.defs.get(m.module_name.as_str())?;
        let local = segs.join(".");
        let mut cands = Vec::new();
        if segs.len() == 1 {
            let mut scope = f.name.as_str();
            loop {
                cands.push(format!("{scope}.{local}"));
                match scope.rsplit_once('.') {
                    Some((outer, _)) => scope = outer,
                    None => break,
                }
            }
        } else if let Some(c) = &f.class {
            cands.push(format!("{c}.{local}"));
        }
        cands.push(local.clone());
        let found = cands.iter().find_map(|c| defs.get(c.as_str()).copied()).or_else(|| {
            // Java: an inherited or sibling method called without receiver.
            if segs.len() != 1 || m.language() != Language::JavaLike {
                return None;
            }
            let mut it = defs.values().filter(|g| !g.name.starts_with('<') && last_segment(&g.name) == local);
            match (it.next(), it.next()) {
                (Some(g), None) => Some(*g),
                _ => None,
            }
        })?;
        Some(Hit { callee: found.id.clone(), resolution: Resolution::Exact, entry: None })
    }

    fn via_imports(&self, m: &IRModule, segs: &[String]) -> Option<Hit> {
        let head = segs[0].as_str();
        let rest = &segs[1..];
        for decl in &m.imports {
            let target = self.index.resolve(m, decl);
            if decl.wildcard && m.language() == Language::JavaLike {
                let full = format!("{}.{}", decl.target, segs.join("."));
                if let Some(h) = self.lookup(m, &target, &full, Some(&segs.join("."))) {
                    return Some(h);
                }
                continue;
            }
            for sym in decl.symbols.iter().filter(|s| s.alias == head) {
                let hit = match m.language() {
                    Language::JavaLike => {
                        let full = splice(&decl.target, rest).join(".");
                        self.lookup(m, &target, &full, None)
                    }
                    Language::JsLike => self.js_import(m, decl, &target, &sym.name, rest),
                };
                if hit.is_some() {
                    return hit;
                }
            }
        }
        None
    }

    fn js_import(&self, m: &IRModule, decl: &ImportDecl, target: &ImportTarget, name: &str, rest: &[String]) -> Option<Hit> {
        match target {
            ImportTarget::Module(tm) => {
                let defs = self.defs.get(tm.as_str())?;
                let cands: Vec<String> = match name {
                    "*" if rest.is_empty() => vec![],
                    "*" => vec![rest.join(".")],
                    "default" => {
                        let d = self.default_exports.get(tm.as_str())?;
                        if rest.is_empty() {
                            vec![d.to_string(), format!("{d}.<init>")]
                        } else {
                            vec![splice(d, rest).join(".")]
                        }
                    }
                    n => vec![splice(n, rest).join(".")],
                };
                let g = cands.iter().find_map(|c| defs.get(c.as_str()))?;
                Some(Hit { callee: g.id.clone(), resolution: Resolution::ImportResolved, entry: None })
            }
            ImportTarget::External(_) => {
                let base = decl.target.strip_prefix("node:").unwrap_or(&decl.target);
                let base = match name {
                    "*" | "default" => base.to_string(),
                    n => format!("{base}.{n}"),
                };
                let full = splice(&base, rest).join(".");
                self.catalog_hit(m, &full, Resolution::ImportResolved)
            }
        }
    }

    /// Java lookup of a fully qualified name in a scanned package or the
    /// catalog. `local` overrides the name used inside the package.
    fn lookup(&self, m: &IRModule, target: &ImportTarget, full: &str, local: Option<&str>) -> Option<Hit> {
        if let ImportTarget::Module(pkg) = target {
            let local = match local {
                Some(l) => l,
                None => full.strip_prefix(pkg.as_str())?.strip_prefix('.')?,
            };
            let g = self.defs.get(pkg.as_str())?.get(local)?;
            return Some(Hit { callee: g.id.clone(), resolution: Resolution::ImportResolved, entry: None });
        }
        self.catalog_hit(m, full, Resolution::ImportResolved)
    }

    fn catalog_hit(&self, m: &IRModule, name: &str, resolution: Resolution) -> Option<Hit> {
        let i = self.catalog.match_name(name)?;
        let e = &self.catalog.entries[i];
        if !e.applies_to(m.language()) {
            return None;
        }
        Some(Hit { callee: MethodRef::external(name, &e.library), resolution, entry: Some(i) })
    }

    /// Name-only matching: built-in globals and `java.lang`, fully qualified
    /// calls, then a unique `Receiver.method` match backed by an import.
    fn by_suffix(&self, m: &IRModule, segs: &[String]) -> Option<Hit> {
        let joined = segs.join(".");
        let lang = m.language();
        let mut direct = vec![joined.clone()];
        if lang == Language::JavaLike {
            direct.insert(0, format!("java.lang.{joined}"));
        }
        for name in &direct {
            if let Some(h) = self.catalog_hit(m, name, Resolution::SuffixHeuristic) {
                let e = &self.catalog.entries[h.entry.unwrap_or_default()];
                if self.corroborated(m, e, segs.last().map(String::as_str).unwrap_or("")) {
                    return Some(h);
                }
            }
        }
        if lang == Language::JavaLike {
            if let Some(h) = self.scanned_fqn(segs) {
                return Some(h);
            }
        }
        if segs.len() < 2 {
            return None;
        }
        let method = segs[segs.len() - 1].as_str();
        let recv = segs[segs.len() - 2].to_ascii_lowercase();
        let found: BTreeSet<usize> = self
            .catalog
            .method_candidates(method)
            .iter()
            .copied()
            .filter(|&i| {
                let e = &self.catalog.entries[i];
                e.applies_to(lang)
                    && e.pattern.class_segment().is_some_and(|c| receiver_fits(&recv, c))
                    && self.corroborated(m, e, method)
            })
            .collect();
        if found.len() != 1 {
            return None;
        }
        let i = *found.iter().next()?;
        let e = &self.catalog.entries[i];
        Some(Hit {
            callee: MethodRef::external(e.pattern.as_str(), &e.library),
            resolution: Resolution::SuffixHeuristic,
            entry: Some(i),
        })
    }

    /// `com.acme.Util.mask(x)` written out in full against a scanned package.
    fn scanned_fqn(&self, segs: &[String]) -> Option<Hit> {
        for cut in (1..segs.len()).rev() {
            let pkg = segs[..cut].join(".");
            if let Some(g) = self.defs.get(pkg.as_str()).and_then(|d| d.get(segs[cut..].join(".").as_str())) {
                return Some(Hit { callee: g.id.clone(), resolution: Resolution::SuffixHeuristic, entry: None });
            }
        }
        None
    }

    /// Language globals (`java.lang`, `console`, `fetch`, ...) are always
    /// available; anything else needs an import of its package or library in
    /// the calling module.
    fn corroborated(&self, m: &IRModule, e: &CatalogEntry, method: &str) -> bool {
        let java = m.language() == Language::JavaLike;
        let fixed = e.pattern.as_str().trim_start_matches("*.").trim_end_matches(".*");
        if e.origin == Origin::Native {
            let global = if java {
                fixed.starts_with("java.lang.")
            } else {
                JS_GLOBALS.contains(&fixed.split('.').next().unwrap_or(fixed))
            };
            if global {
                return true;
            }
        }
        m.imports.iter().any(|d| {
            let target = d.target.strip_prefix("node:").unwrap_or(&d.target);
            if self.libraries.for_import(target, java).is_some_and(|l| l.name == e.library) {
                return true;
            }
            if java {
                let owner = fixed.rsplit_once('.').map(|(o, _)| o).unwrap_or(fixed);
                e.pattern.matches(&format!("{target}.{method}"))
                    || owner.starts_with(&format!("{target}."))
                    || owner == target
            } else {
                fixed.split('.').next() == Some(package_root(target))
            }
        })
    }
}

const JS_GLOBALS: &[&str] = &[
    "console", "process", "JSON", "Buffer", "fetch", "localStorage", "sessionStorage", "indexedDB",
    "XMLHttpRequest", "WebSocket", "navigator", "window", "document",
];

fn splice(head: &str, rest: &[String]) -> Vec<String> {
    let mut v: Vec<String> = head.split('.').map(str::to_string).collect();
    v.extend(rest.iter().cloned());
    v
}

fn last_segment(name: &str) -> &str {
    name.rsplit('.').next().unwrap_or(name)
}

/// `logger` fits `Logger`, `log` fits `Logger`, `userRepo` does not fit
/// `Session`.
fn receiver_fits(recv_lower: &str, class: &str) -> bool {
    let c = class.to_ascii_lowercase();
    recv_lower == c || (recv_lower.len() >= 3 && (c.starts_with(recv_lower) || recv_lower.ends_with(&c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::ir::SourceFile;
    use crate::frontend::parse_file;

    fn js(path: &str, src: &str) -> IRModule {
        parse_file(SourceFile::new(path, Language::JsLike, src))
    }

    fn java(path: &str, src: &str) -> IRModule {
        parse_file(SourceFile::new(path, Language::JavaLike, src))
    }

    fn graph(mods: &[IRModule]) -> CallGraph {
        build_call_graph(mods, &PrivacyCatalog::default_catalog(), &LibraryList::default_list())
    }

    fn edges(g: &CallGraph) -> Vec<String> {
        g.edges
            .iter()
            .map(|e| format!("{} -> {} [{}]", e.caller.qualified_name, e.callee.qualified_name, e.resolution.as_str()))
            .collect()
    }

    #[test]
    fn import_resolved_scanned_function() {
        let g = graph(&[
            js("app/main.js", "import {h} from './lib';\nfunction f() { h(); }\n"),
            js("app/lib.js", "export function h() {}\n"),
        ]);
        assert_eq!(edges(&g), vec!["app/main::f -> app/lib::h [ImportResolved]"]);
    }

    #[test]
    fn suffix_heuristic_needs_import() {
        let src = "import org.slf4j.LoggerFactory;\nclass A { void run(String x) { var logger = make(); logger.info(x); } }\n";
        let g = graph(&[java("src/A.java", src)]);
        let e = g.edges.iter().find(|e| e.text == "logger.info").unwrap();
        assert_eq!(e.resolution, Resolution::SuffixHeuristic);
        assert_eq!(e.callee.qualified_name, "org.slf4j.Logger.info");

        let bare = "class A { void run(String x) { var logger = make(); logger.info(x); } }\n";
        let g = graph(&[java("src/A.java", bare)]);
        let e = g.edges.iter().find(|e| e.text == "logger.info").unwrap();
        assert_eq!(e.resolution, Resolution::Unresolved);
    }

    #[test]
    fn unresolved_kept_but_not_a_node() {
        let g = graph(&[js("a.js", "function f() { foo.bar(); }\n")]);
        assert_eq!(edges(&g), vec!["a::f -> ?::foo.bar [Unresolved]"]);
        assert!(!g.nodes.iter().any(|n| n.qualified_name.starts_with('?')));
        assert_eq!(g.unresolved_count(), 1);
    }

    #[test]
    fn exact_and_typed_receivers() {
        let src = "package com.acme;\nimport org.slf4j.Logger;\nimport java.io.FileWriter;\n\
            class Svc {\n  private Logger log;\n  void a(String s) { b(s); this.b(s); log.info(s); }\n\
            void b(String s) { FileWriter w = new FileWriter(s); w.write(s); System.out.println(s); }\n}\n";
        let g = graph(&[java("src/com/acme/Svc.java", src)]);
        assert_eq!(
            edges(&g),
            vec![
                "com.acme::Svc.a -> com.acme::Svc.b [Exact]",
                "com.acme::Svc.a -> com.acme::Svc.b [Exact]",
                "com.acme::Svc.a -> org.slf4j.Logger.info [ImportResolved]",
                "com.acme::Svc.b -> java.io.FileWriter.<init> [ImportResolved]",
                "com.acme::Svc.b -> java.io.FileWriter.write [ImportResolved]",
                "com.acme::Svc.b -> java.lang.System.out.println [SuffixHeuristic]",
            ]
        );
    }

    #[test]
    fn js_module_forms() {
        let main = "import axios from 'axios';\nimport * as fs from 'fs';\nconst winston = require('winston');\n\
            import Store from './store';\n\
            const logger = winston.createLogger({});\n\
            function f(x) { axios.post('/u', x); fs.writeFile('p', x); logger.info(x); new Store().put(x); console.log(x); }\n";
        let store = "export default class Store { put(v) {} }\n";
        let g = graph(&[js("src/main.js", main), js("src/store.js", store)]);
        let f: Vec<_> = edges(&g).into_iter().filter(|e| e.starts_with("src/main::f ")).collect();
        assert_eq!(
            f,
            vec![
                "src/main::f -> axios.post [ImportResolved]",
                "src/main::f -> fs.writeFile [ImportResolved]",
                "src/main::f -> winston.Logger.info [SuffixHeuristic]",
                "src/main::f -> ?::Store.<init> [Unresolved]",
                "src/main::f -> ?::<expr>.put [Unresolved]",
                "src/main::f -> console.log [SuffixHeuristic]",
            ]
        );
        assert_eq!(g.catalog_hits.len(), 5);
    }

    #[test]
    fn nested_functions_resolve_to_innermost() {
        let g = graph(&[js("a.js", "function outer() { function g() {} g(); }\nfunction g() {}\n")]);
        assert_eq!(edges(&g), vec!["a::outer -> a::outer.g [Exact]"]);
    }
}
