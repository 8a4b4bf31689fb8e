//! Usage-based rankings and the AM/Total proportion.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::catalog::ProcessingLabel;
use crate::closure::PrivacySets;
use crate::error::Error;
use crate::method::MethodRef;
use crate::taint::TaintFlow;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodStats {
    pub method: MethodRef,
    /// Distinct (caller, call site) pairs carrying at least one flow.
    pub occurrence: usize,
    /// Those sites where a PII flow arrives.
    pub pii_occurrence: usize,
    pub pii_frequency: f64,
    pub labels: BTreeSet<ProcessingLabel>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryStats {
    pub label: ProcessingLabel,
    pub occurrence: usize,
    pub pii_occurrence: usize,
    /// Share of member methods with at least one PII flow.
    pub pii_frequency: f64,
    pub methods: usize,
    /// Percentage of all category occurrences, one decimal.
    pub share: f64,
    pub gdpr_refs: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProportionResult {
    pub am_count: usize,
    pub total_methods: usize,
    pub pii_am_count: usize,
    pub percent: Percent,
    pub pii_percent: Percent,
}

/// A percentage held in tenths so that one-decimal rounding is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Percent {
    pub tenths: u64,
}

impl Percent {
    /// `100 * num / den` rounded half-up to one decimal.
    pub fn of(num: u64, den: u64) -> Percent {
        assert!(den > 0, "percentage of zero total");
        Percent { tenths: (2000 * num + den) / (2 * den) }
    }

    pub fn value(self) -> f64 {
        self.tenths as f64 / 10.0
    }
}

impl std::fmt::Display for Percent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}.{}", self.tenths / 10, self.tenths % 10)
    }
}

impl Serialize for Percent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

pub fn proportion(am_count: usize, total: usize, pii_am: usize) -> Result<ProportionResult, Error> {
    if total == 0 {
        return Err(Error::ZeroTotal);
    }
    if am_count > total || pii_am > am_count {
        return Err(Error::Invariant(format!(
            "proportion inputs out of range: am={am_count} pii_am={pii_am} total={total}"
        )));
    }
    Ok(ProportionResult {
        am_count,
        total_methods: total,
        pii_am_count: pii_am,
        percent: Percent::of(am_count as u64, total as u64),
        pii_percent: Percent::of(pii_am as u64, total as u64),
    })
}

/// Mean of per-application proportions, rounded half-up to one decimal.
pub fn corpus_average(results: &[ProportionResult]) -> Option<Percent> {
    if results.is_empty() {
        return None;
    }
    let mean = results.iter().map(|r| r.am_count as f64 / r.total_methods as f64).sum::<f64>() / results.len() as f64;
    // the epsilon keeps exact halves such as 0.15 from landing just below
    Some(Percent { tenths: (mean * 1000.0 + 0.5 + 1e-9).floor() as u64 })
}

pub fn method_stats(flows: &[TaintFlow], sets: &PrivacySets) -> Vec<MethodStats> {
    // callee → (caller, site) → any PII flow at that site
    let mut sites: BTreeMap<&MethodRef, BTreeMap<(&str, crate::frontend::ir::Span), bool>> = BTreeMap::new();
    for f in flows {
        let pii = sites
            .entry(&f.callee)
            .or_default()
            .entry((f.caller.qualified_name.as_str(), f.site))
            .or_insert(false);
        *pii |= f.pii;
    }
    let stats = sites
        .into_iter()
        .map(|(m, s)| {
            let occurrence = s.len();
            let pii_occurrence = s.values().filter(|&&p| p).count();
            MethodStats {
                method: m.clone(),
                occurrence,
                pii_occurrence,
                pii_frequency: pii_occurrence as f64 / occurrence as f64,
                labels: sets.labels(m),
            }
        })
        .collect();
    rank(stats)
}

/// Occurrence descending, then PII occurrence descending, then name.
pub fn rank(mut stats: Vec<MethodStats>) -> Vec<MethodStats> {
    stats.sort_by(compare_methods);
    stats
}

pub fn compare_methods(a: &MethodStats, b: &MethodStats) -> Ordering {
    b.occurrence
        .cmp(&a.occurrence)
        .then(b.pii_occurrence.cmp(&a.pii_occurrence))
        .then_with(|| a.method.qualified_name.cmp(&b.method.qualified_name))
}

/// Each method contributes its full counts to every one of its labels.
pub fn category_stats(
    stats: &[MethodStats],
    labels_of: &BTreeMap<MethodRef, BTreeSet<ProcessingLabel>>,
) -> Vec<CategoryStats> {
    let mut acc: BTreeMap<ProcessingLabel, (usize, usize, usize, usize)> = BTreeMap::new();
    for s in stats {
        for &l in labels_of.get(&s.method).into_iter().flatten() {
            let e = acc.entry(l).or_default();
            e.0 += s.occurrence;
            e.1 += s.pii_occurrence;
            e.2 += 1;
            e.3 += usize::from(s.pii_occurrence > 0);
        }
    }
    let total: usize = acc.values().map(|v| v.0).sum();
    let cats = acc
        .into_iter()
        .map(|(label, (occurrence, pii_occurrence, methods, pii_methods))| CategoryStats {
            label,
            occurrence,
            pii_occurrence,
            pii_frequency: pii_methods as f64 / methods as f64,
            methods,
            share: Percent::of(occurrence as u64, total.max(1) as u64).value(),
            gdpr_refs: label.gdpr_refs().iter().map(|s| s.to_string()).collect(),
        })
        .collect();
    rank_categories(cats)
}

pub fn rank_categories(mut cats: Vec<CategoryStats>) -> Vec<CategoryStats> {
    cats.sort_by(|a, b| {
        b.occurrence
            .cmp(&a.occurrence)
            .then(b.pii_occurrence.cmp(&a.pii_occurrence))
            .then_with(|| a.label.code().cmp(b.label.code()))
    });
    cats
}

/// Ordering by PII occurrence alone, for the PII column of a breakdown.
pub fn rank_categories_by_pii(mut cats: Vec<CategoryStats>) -> Vec<CategoryStats> {
    cats.sort_by(|a, b| {
        b.pii_occurrence
            .cmp(&a.pii_occurrence)
            .then(b.occurrence.cmp(&a.occurrence))
            .then_with(|| a.label.code().cmp(b.label.code()))
    });
    cats
}

/// Package of a privacy-relevant method: the segments before the first
/// capitalised one (`org.slf4j` for `org.slf4j.Logger.info`), or all but the
/// method name.
pub fn package_of(m: &MethodRef) -> String {
    if !m.is_external() {
        return m.module.replace('/', ".");
    }
    let name = m.qualified_name.as_str();
    let segs: Vec<&str> = name.split('.').collect();
    if segs.len() == 1 {
        return name.to_string();
    }
    let cut = segs
        .iter()
        .position(|s| s.starts_with(|c: char| c.is_ascii_uppercase()))
        .unwrap_or(segs.len() - 1)
        .max(1);
    segs[..cut].join(".")
}

/// Occurrence summed per package, largest first.
pub fn top_packages(stats: &[MethodStats]) -> Vec<(String, usize)> {
    let mut acc: BTreeMap<String, usize> = BTreeMap::new();
    for s in stats {
        *acc.entry(package_of(&s.method)).or_default() += s.occurrence;
    }
    let mut v: Vec<_> = acc.into_iter().collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stat(name: &str, occurrence: usize, pii: usize) -> MethodStats {
        MethodStats {
            method: MethodRef::external(name, "x"),
            occurrence,
            pii_occurrence: pii,
            pii_frequency: pii as f64 / occurrence as f64,
            labels: BTreeSet::new(),
        }
    }

    #[test]
    fn proportion_rounding() {
        assert_eq!(proportion(531, 18332, 0).unwrap().percent.to_string(), "2.9");
        assert_eq!(proportion(376, 10448, 0).unwrap().percent.to_string(), "3.6");
        assert_eq!(proportion(0, 1000, 0).unwrap().percent.to_string(), "0.0");
        assert_eq!(Percent::of(1, 2000).to_string(), "0.1");
        assert_eq!(Percent::of(1, 2001).to_string(), "0.0");
        assert!(matches!(proportion(0, 0, 0), Err(Error::ZeroTotal)));
        assert!(matches!(proportion(2, 1, 0), Err(Error::Invariant(_))));
        assert_eq!(serde_json::to_string(&Percent::of(531, 18332)).unwrap(), "2.9");
    }

    #[test]
    fn rank_tie_breaks() {
        let r = rank(vec![stat("a", 5, 1), stat("b", 9, 0), stat("c", 9, 2)]);
        let got: Vec<_> = r.iter().map(|s| (s.occurrence, s.pii_occurrence)).collect();
        assert_eq!(got, vec![(9, 2), (9, 0), (5, 1)]);
        assert_eq!(rank(vec![stat("a", 1, 0)]).len(), 1);
    }

    #[test]
    fn multi_label_methods_count_fully() {
        let s = vec![stat("m", 4, 1)];
        let labels = [(s[0].method.clone(), [ProcessingLabel::NC, ProcessingLabel::DEC].into())].into();
        let c = category_stats(&s, &labels);
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|c| c.occurrence == 4 && c.pii_frequency == 1.0));
        assert_eq!(c[0].label, ProcessingLabel::DEC);
    }

    #[test]
    fn packages() {
        assert_eq!(package_of(&MethodRef::external("org.slf4j.Logger.info", "slf4j")), "org.slf4j");
        assert_eq!(package_of(&MethodRef::external("axios.post", "Axios")), "axios");
        assert_eq!(package_of(&MethodRef::external("fetch", "web")), "fetch");
        assert_eq!(package_of(&MethodRef::external("winston.Logger.info", "Winston")), "winston");
    }

    #[test]
    fn corpus_average_rounds_mean() {
        let a = proportion(1, 10, 0).unwrap();
        let b = proportion(2, 10, 0).unwrap();
        assert_eq!(corpus_average(&[a, b]).unwrap().to_string(), "15.0");
        assert!(corpus_average(&[]).is_none());
    }
}
