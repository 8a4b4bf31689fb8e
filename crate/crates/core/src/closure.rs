//! The API set: methods that reach a Native catalog entry through resolved
//! calls, with the processing labels they inherit along the way.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::catalog::{LibraryList, Origin, PrivacyCatalog, ProcessingLabel};
use crate::graphs::import::group_positions;
use crate::graphs::CallGraph;
use crate::method::MethodRef;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PrivacySets {
    /// Methods with at least one call site resolving into a Native entry.
    pub native_hits: BTreeSet<MethodRef>,
    pub api_set: BTreeSet<MethodRef>,
    pub labels_of: BTreeMap<MethodRef, BTreeSet<ProcessingLabel>>,
    /// Nodes matching a Native catalog entry.
    pub natives: BTreeSet<MethodRef>,
    /// Nodes defined in a configured library, including catalog API entries.
    pub library_methods: BTreeSet<MethodRef>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MethodClass {
    NativeEntry,
    ApiPrivacyRelevant,
    Application,
}

impl PrivacySets {
    pub fn labels(&self, m: &MethodRef) -> BTreeSet<ProcessingLabel> {
        self.labels_of.get(m).cloned().unwrap_or_default()
    }

    /// Callees whose call sites count as privacy-relevant invocations.
    pub fn is_privacy_relevant(&self, m: &MethodRef) -> bool {
        matches!(classify_method(self, m), MethodClass::NativeEntry | MethodClass::ApiPrivacyRelevant)
    }
}

pub fn classify_method(sets: &PrivacySets, m: &MethodRef) -> MethodClass {
    if sets.natives.contains(m) {
        MethodClass::NativeEntry
    } else if sets.api_set.contains(m) && sets.library_methods.contains(m) {
        MethodClass::ApiPrivacyRelevant
    } else {
        MethodClass::Application
    }
}

/// Least fixed point of `labels(m) = direct(m) ∪ ⋃ labels(successor)` over
/// resolved edges. Groups of `order` are finalised one after another; a
/// closing sweep over all nodes catches calls that run against the import
/// order (same-package calls, fully qualified names).
pub fn compute_api_set(
    cg: &CallGraph,
    catalog: &PrivacyCatalog,
    libraries: &LibraryList,
    order: &[Vec<String>],
) -> PrivacySets {
    let nodes: Vec<&MethodRef> = cg.nodes.iter().collect();
    let id: HashMap<&MethodRef, usize> = nodes.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let n = nodes.len();
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut pred: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for e in cg.resolved_edges() {
        if let (Some(&a), Some(&b)) = (id.get(&e.caller), id.get(&e.callee)) {
            succ[a].insert(b);
            pred[b].insert(a);
        }
    }

    let mut sets = PrivacySets::default();
    let mut labels: Vec<BTreeSet<ProcessingLabel>> = vec![BTreeSet::new(); n];
    let mut sink = vec![false; n];
    for (i, m) in nodes.iter().enumerate() {
        if let Some(e) = cg.catalog_entry(catalog, m) {
            labels[i] = e.labels.clone();
            sink[i] = true;
            match e.origin {
                Origin::Native => {
                    sets.natives.insert((*m).clone());
                }
                Origin::Api => {
                    sets.library_methods.insert((*m).clone());
                }
            }
        }
        if !m.is_external() {
            let java = m.file.as_deref().is_some_and(|f| f.ends_with(".java"));
            if libraries.owner_of(&m.module, m.file.as_deref().unwrap_or(""), java).is_some() {
                sets.library_methods.insert((*m).clone());
            }
        }
    }

    let pos = group_positions(order);
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, m) in nodes.iter().enumerate() {
        let g = pos.get(m.module.as_str()).copied().unwrap_or(0);
        groups.entry(g).or_default().push(i);
    }
    let mut reaches = sink.clone();
    let relax = |i: usize, labels: &mut [BTreeSet<ProcessingLabel>], reaches: &mut [bool]| -> bool {
        let mut changed = false;
        for &s in &succ[i] {
            if reaches[s] && !reaches[i] {
                reaches[i] = true;
                changed = true;
            }
            let add: Vec<ProcessingLabel> = labels[s].difference(&labels[i]).copied().collect();
            if !add.is_empty() {
                labels[i].extend(add);
                changed = true;
            }
        }
        changed
    };
    let mut group_of = vec![0usize; n];
    for (&g, members) in &groups {
        for &i in members {
            group_of[i] = g;
        }
    }
    for (&g, members) in &groups {
        let mut work: Vec<usize> = members.clone();
        while let Some(i) = work.pop() {
            if relax(i, &mut labels, &mut reaches) {
                work.extend(pred[i].iter().copied().filter(|&p| group_of[p] == g));
            }
        }
    }
    let mut work: Vec<usize> = (0..n).collect();
    while let Some(i) = work.pop() {
        if relax(i, &mut labels, &mut reaches) {
            work.extend(pred[i].iter().copied());
        }
    }

    for (i, m) in nodes.iter().enumerate() {
        if !labels[i].is_empty() {
            sets.labels_of.insert((*m).clone(), labels[i].clone());
        }
        if reaches[i] && !sets.natives.contains(*m) {
            sets.api_set.insert((*m).clone());
        }
    }
    for e in cg.resolved_edges() {
        if sets.natives.contains(&e.callee) {
            sets.native_hits.insert(e.caller.clone());
        }
    }
    sets
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{CatalogEntry, NativeDomain, Pattern};
    use crate::frontend::ir::Span;
    use crate::graphs::{CallEdge, Resolution};

    pub(crate) fn native(name: &str, label: ProcessingLabel) -> CatalogEntry {
        let domain = match label {
            ProcessingLabel::LM | ProcessingLabel::DPT => NativeDomain::IO,
            ProcessingLabel::NC => NativeDomain::Network,
            ProcessingLabel::DSMD => NativeDomain::Database,
            _ => NativeDomain::Security,
        };
        CatalogEntry {
            pattern: Pattern::parse(name).unwrap(),
            library: "std".into(),
            language: None,
            origin: Origin::Native,
            domain: Some(domain),
            labels: [label].into(),
        }
    }

    fn app(name: &str) -> MethodRef {
        MethodRef::defined("app", name, "app.js", Span::new(0, 1))
    }

    fn graph(edges: &[(&str, &str)], natives: &[(&str, ProcessingLabel)]) -> (CallGraph, PrivacyCatalog) {
        let catalog = PrivacyCatalog::from_entries("t", natives.iter().map(|(n, l)| native(n, *l)).collect());
        let m = |s: &str| {
            if natives.iter().any(|(n, _)| *n == s) { MethodRef::external(s, "std") } else { app(s) }
        };
        let mut nodes = BTreeSet::new();
        let mut es = Vec::new();
        for (k, (a, b)) in edges.iter().enumerate() {
            nodes.insert(m(a));
            nodes.insert(m(b));
            es.push(CallEdge {
                caller: m(a),
                site: Span::new(k, k + 1),
                callee: m(b),
                resolution: Resolution::Exact,
                text: b.to_string(),
            });
        }
        let hits = natives
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.to_string(), i))
            .collect();
        (CallGraph::new(nodes, es, hits), catalog)
    }

    fn run(edges: &[(&str, &str)], natives: &[(&str, ProcessingLabel)]) -> PrivacySets {
        let (cg, cat) = graph(edges, natives);
        compute_api_set(&cg, &cat, &LibraryList::default(), &[vec!["app".into()]])
    }

    #[test]
    fn direct_invocation() {
        let s = run(&[("m", "n")], &[("n", ProcessingLabel::LM)]);
        assert!(s.api_set.contains(&app("m")));
        assert_eq!(s.labels(&app("m")), [ProcessingLabel::LM].into());
        assert_eq!(classify_method(&s, &MethodRef::external("n", "std")), MethodClass::NativeEntry);
        assert_eq!(classify_method(&s, &app("m")), MethodClass::Application);
        assert!(s.native_hits.contains(&app("m")));
    }

    #[test]
    fn labels_union_along_paths() {
        let s = run(
            &[("a", "b"), ("b", "c"), ("b", "d")],
            &[("c", ProcessingLabel::NC), ("d", ProcessingLabel::DEC)],
        );
        let both: BTreeSet<_> = [ProcessingLabel::NC, ProcessingLabel::DEC].into();
        assert_eq!(s.labels(&app("a")), both);
        assert_eq!(s.labels(&app("b")), both);
        assert!(!s.native_hits.contains(&app("a")));
    }

    #[test]
    fn cycles_terminate_and_unrelated_methods_stay_out() {
        let s = run(&[("a", "b"), ("b", "a"), ("b", "n"), ("x", "y")], &[("n", ProcessingLabel::LM)]);
        assert!(s.api_set.contains(&app("a")) && s.api_set.contains(&app("b")));
        assert!(!s.api_set.contains(&app("x")));
        assert!(s.api_set.iter().all(|m| !s.natives.contains(m)));
    }

    #[test]
    fn library_methods_classify_as_api() {
        let cat = PrivacyCatalog::from_entries("t", vec![native("java.io.File.delete", ProcessingLabel::DSMD)]);
        let lib = MethodRef::defined("org.slf4j", "Logger.info", "org/slf4j/Logger.java", Span::new(0, 1));
        let native = MethodRef::external("java.io.File.delete", "java.*");
        let cg = CallGraph::new(
            [lib.clone(), native.clone()].into(),
            vec![CallEdge { caller: lib.clone(), site: Span::new(0, 1), callee: native, resolution: Resolution::ImportResolved, text: String::new() }],
            [("java.io.File.delete".to_string(), 0)].into(),
        );
        let s = compute_api_set(&cg, &cat, &LibraryList::default_list(), &[]);
        assert_eq!(classify_method(&s, &lib), MethodClass::ApiPrivacyRelevant);
    }
}
