//! Scan report assembly, JSON serialization and Markdown rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::ProcessingLabel;
use crate::closure::PrivacySets;
use crate::error::{Error, Result};
use crate::frontend::ir::IRModule;
use crate::graphs::import::cycles;
use crate::graphs::CallGraph;
use crate::metrics::{self, CategoryStats, MethodStats, ProportionResult};
use crate::pipeline::{Inputs, ScanConfig};
use crate::sources::{LineStarts, PersonalDataSource, SourceKind};
use crate::taint::{collect_am, TaintResult};

pub const TOOL_NAME: &str = "privacy-lens";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub tool: ToolInfo,
    pub config: ConfigEcho,
    pub totals: Totals,
    pub proportion: Option<ProportionResult>,
    pub proportion_error: Option<String>,
    pub method_ranking: Vec<MethodStats>,
    pub category_ranking: Vec<CategoryStats>,
    pub top_packages: Vec<PackageCount>,
    pub am_methods: Vec<String>,
    pub findings: Vec<Finding>,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub root: String,
    pub language: String,
    pub catalog: String,
    pub catalog_version: String,
    pub rules: String,
    pub libraries: String,
    pub exclude: Vec<String>,
    pub exclude_tests: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Totals {
    pub files: usize,
    pub functions: usize,
    pub skipped_statements: usize,
    pub call_sites: usize,
    pub unresolved_calls: usize,
    pub sources: usize,
    pub pii_sources: usize,
    pub flows: usize,
    pub pii_flows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PackageCount {
    pub package: String,
    pub occurrence: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelRef {
    pub label: ProcessingLabel,
    pub title: String,
    pub gdpr_refs: Vec<String>,
}

impl LabelRef {
    fn new(label: ProcessingLabel) -> LabelRef {
        LabelRef {
            label,
            title: label.title().to_string(),
            gdpr_refs: label.gdpr_refs().iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SourceSummary {
    pub category: String,
    pub symbol: String,
    pub kind: SourceKind,
    pub file: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathStep {
    pub file: String,
    pub line: usize,
    pub function: String,
    pub var: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub id: String,
    pub file: String,
    pub line: usize,
    pub caller: String,
    pub callee: String,
    pub labels: Vec<LabelRef>,
    pub source: SourceSummary,
    pub pii: bool,
    pub crosses_files: bool,
    pub path: Vec<PathStep>,
}

impl ScanReport {
    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn finding(&self, id: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.id.eq_ignore_ascii_case(id))
    }
}

#[allow(clippy::too_many_arguments)]
pub fn build_report(
    config: &ScanConfig,
    inputs: &Inputs,
    modules: &[IRModule],
    order: &[Vec<String>],
    cg: &CallGraph,
    sets: &PrivacySets,
    sources: &[PersonalDataSource],
    taint: &TaintResult,
) -> Result<ScanReport> {
    let flows = &taint.flows;
    let path_str = |p: &Option<std::path::PathBuf>| p.as_ref().map_or("default".to_string(), |p| p.display().to_string());
    let config_echo = ConfigEcho {
        root: config.root.display().to_string(),
        language: config.language_name().to_string(),
        catalog: path_str(&config.catalog),
        catalog_version: inputs.catalog.version.clone(),
        rules: path_str(&config.rules),
        libraries: path_str(&config.libraries),
        exclude: config.exclude.clone(),
        exclude_tests: config.exclude_tests,
    };

    let totals = Totals {
        files: modules.len(),
        functions: modules.iter().map(|m| m.functions.len()).sum(),
        skipped_statements: modules.iter().map(|m| m.diagnostics.len()).sum(),
        call_sites: cg.edges.len(),
        unresolved_calls: cg.unresolved_count(),
        sources: sources.len(),
        pii_sources: sources.iter().filter(|s| s.pii).count(),
        flows: flows.len(),
        pii_flows: flows.iter().filter(|f| f.pii).count(),
    };

    let am = collect_am(flows, sets);
    let pii_am = collect_am(&flows.iter().filter(|f| f.pii).cloned().collect::<Vec<_>>(), sets);
    let (proportion, proportion_error) = match metrics::proportion(am.len(), totals.functions, pii_am.len()) {
        Ok(p) => (Some(p), None),
        Err(Error::ZeroTotal) => (None, Some(Error::ZeroTotal.to_string())),
        Err(e) => return Err(e),
    };

    let method_ranking = metrics::method_stats(flows, sets);
    let category_ranking = metrics::category_stats(&method_ranking, &sets.labels_of);
    let top_packages = metrics::top_packages(&method_ranking)
        .into_iter()
        .map(|(package, occurrence)| PackageCount { package, occurrence })
        .collect();

    let line_starts: BTreeMap<&str, LineStarts> =
        modules.iter().map(|m| (m.path(), LineStarts::new(&m.file.text))).collect();
    let mut findings: Vec<Finding> = flows
        .iter()
        .map(|f| {
            let file = f.caller.file.clone().unwrap_or_default();
            let line = line_starts.get(file.as_str()).map_or(0, |ls| ls.line(f.site.start));
            let src = &sources[f.source];
            Finding {
                id: String::new(),
                file,
                line,
                caller: f.caller.qualified_name.clone(),
                callee: f.callee.qualified_name.clone(),
                labels: sets.labels(&f.callee).into_iter().map(LabelRef::new).collect(),
                source: SourceSummary {
                    category: src.category.clone(),
                    symbol: src.symbol.clone(),
                    kind: src.kind,
                    file: src.file.clone(),
                    line: src.line,
                },
                pii: f.pii,
                crosses_files: f.crosses_files,
                path: f
                    .path
                    .iter()
                    .map(|h| PathStep {
                        file: h.file.clone(),
                        line: h.line,
                        function: h.function.qualified_name.clone(),
                        var: h.var.clone(),
                    })
                    .collect(),
            }
        })
        .collect();
    // flows arrive sorted by (caller file, site, source); keep that order
    for (i, f) in findings.iter_mut().enumerate() {
        f.id = format!("F{}", i + 1);
    }
    if findings.iter().any(|f| f.labels.iter().any(|l| l.gdpr_refs.is_empty())) {
        return Err(Error::Invariant("finding label without GDPR reference".into()));
    }

    let mut diagnostics: Vec<String> = modules.iter().flat_map(|m| m.diagnostics.iter().map(|d| d.to_string())).collect();
    for c in cycles(order) {
        diagnostics.push(format!("import cycle: {}", c.join(" ↔ ")));
    }
    diagnostics.extend(inputs.rules.warnings.iter().cloned());

    Ok(ScanReport {
        tool: ToolInfo { name: TOOL_NAME.to_string(), version: env!("CARGO_PKG_VERSION").to_string() },
        config: config_echo,
        totals,
        proportion,
        proportion_error,
        method_ranking,
        category_ranking,
        top_packages,
        am_methods: am.into_iter().map(|m| m.qualified_name).collect(),
        findings,
        diagnostics,
    })
}

fn labels_cell(labels: impl IntoIterator<Item = ProcessingLabel>) -> String {
    let v: Vec<&str> = labels.into_iter().map(|l| l.code()).collect();
    if v.is_empty() {
        "-".into()
    } else {
        v.join(", ")
    }
}

fn escape_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

pub fn render_markdown(r: &ScanReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "# Privacy Review Report\n");
    let _ = writeln!(w, "Scanned `{}` with {} {}.\n", r.config.root, r.tool.name, r.tool.version);

    let _ = writeln!(w, "## Summary\n");
    match &r.proportion {
        Some(p) => {
            let _ = writeln!(
                w,
                "- Privacy-relevant application methods: {} of {} ({}%)",
                p.am_count, p.total_methods, p.percent
            );
            let _ = writeln!(w, "- With PII flows: {} of {} ({}%)", p.pii_am_count, p.total_methods, p.pii_percent);
        }
        None => {
            let _ = writeln!(w, "- Proportion unavailable: {}", r.proportion_error.as_deref().unwrap_or("unknown"));
        }
    }
    let t = &r.totals;
    let _ = writeln!(w, "- Files: {}, functions: {}", t.files, t.functions);
    let _ = writeln!(w, "- Personal-data sources: {} ({} PII)", t.sources, t.pii_sources);
    let _ = writeln!(w, "- Findings: {} ({} PII)\n", t.flows, t.pii_flows);

    let _ = writeln!(w, "## Category Breakdown\n");
    if r.category_ranking.is_empty() {
        let _ = writeln!(w, "_No categorized activity._\n");
    } else {
        let _ = writeln!(w, "| Category | Occurrence | Share | PII occurrence | Methods | GDPR |");
        let _ = writeln!(w, "|---|---:|---:|---:|---:|---|");
        for c in &r.category_ranking {
            let _ = writeln!(
                w,
                "| {} ({}) | {} | {:.1}% | {} | {} | {} |",
                c.label.code(),
                c.label.title(),
                c.occurrence,
                c.share,
                c.pii_occurrence,
                c.methods,
                c.gdpr_refs.join(", ")
            );
        }
        let _ = writeln!(w);
    }

    let _ = writeln!(w, "## Top Privacy-relevant Methods\n");
    if r.method_ranking.is_empty() {
        let _ = writeln!(w, "_No privacy-relevant methods received personal data._\n");
    } else {
        let _ = writeln!(w, "| # | Method | Occurrence | PII occurrence | PII frequency | Labels |");
        let _ = writeln!(w, "|---:|---|---:|---:|---:|---|");
        for (i, m) in r.method_ranking.iter().enumerate() {
            let _ = writeln!(
                w,
                "| {} | `{}` | {} | {} | {:.2} | {} |",
                i + 1,
                escape_cell(&m.method.qualified_name),
                m.occurrence,
                m.pii_occurrence,
                m.pii_frequency,
                labels_cell(m.labels.iter().copied())
            );
        }
        let _ = writeln!(w);
        let _ = writeln!(w, "| Package | Occurrence |");
        let _ = writeln!(w, "|---|---:|");
        for p in &r.top_packages {
            let _ = writeln!(w, "| `{}` | {} |", escape_cell(&p.package), p.occurrence);
        }
        let _ = writeln!(w);
    }

    let _ = writeln!(w, "## Findings\n");
    if r.findings.is_empty() {
        let _ = writeln!(w, "_No findings._\n");
    }
    for f in &r.findings {
        let _ = writeln!(
            w,
            "### {} `{}:{}` {} → `{}`{}\n",
            f.id,
            f.file,
            f.line,
            f.caller,
            f.callee,
            if f.pii { " (PII)" } else { "" }
        );
        let labels: Vec<String> =
            f.labels.iter().map(|l| format!("{} ({})", l.label.code(), l.gdpr_refs.join(", "))).collect();
        let _ = writeln!(w, "- Labels: {}", if labels.is_empty() { "-".into() } else { labels.join("; ") });
        let _ = writeln!(
            w,
            "- Source: {} `{}` at {}:{}",
            f.source.category, f.source.symbol, f.source.file, f.source.line
        );
        let _ = writeln!(w, "- Path: {}\n", witness_line(f));
    }

    let _ = writeln!(w, "## Analysis Gaps\n");
    let _ = writeln!(w, "- Skipped statements: {}", t.skipped_statements);
    let _ = writeln!(w, "- Unresolved calls: {} of {}", t.unresolved_calls, t.call_sites);
    if r.diagnostics.is_empty() {
        let _ = writeln!(w, "- Diagnostics: none");
    } else {
        let _ = writeln!(w, "- Diagnostics:");
        for d in &r.diagnostics {
            let _ = writeln!(w, "  - {d}");
        }
    }
    out
}

fn witness_line(f: &Finding) -> String {
    let mut parts: Vec<String> = f.path.iter().map(|s| format!("`{}:{}` {}", s.file, s.line, s.var)).collect();
    parts.push(format!("`{}:{}` {}", f.file, f.line, f.callee));
    parts.join(" → ")
}

/// Step-by-step explanation of one finding.
pub fn explain(r: &ScanReport, id: &str) -> Option<String> {
    let f = r.finding(id)?;
    let mut out = String::new();
    let _ = writeln!(out, "{}: {} flows into {} at {}:{}", f.id, f.source.symbol, f.callee, f.file, f.line);
    let _ = writeln!(
        out,
        "  source  {} ({}{}) at {}:{}",
        f.source.symbol,
        f.source.category,
        if f.pii { ", PII" } else { "" },
        f.source.file,
        f.source.line
    );
    for (i, s) in f.path.iter().enumerate() {
        let _ = writeln!(out, "  {:>2}. {}:{} in {}: {}", i + 1, s.file, s.line, s.function, s.var);
    }
    let _ = writeln!(out, "  sink    {} called from {}", f.callee, f.caller);
    for l in &f.labels {
        let _ = writeln!(out, "  label   {} {} [{}]", l.label.code(), l.title, l.gdpr_refs.join(", "));
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Percent;

    fn empty() -> ScanReport {
        ScanReport {
            tool: ToolInfo { name: TOOL_NAME.into(), version: "0".into() },
            config: ConfigEcho {
                root: ".".into(),
                language: "auto".into(),
                catalog: "default".into(),
                catalog_version: "1".into(),
                rules: "default".into(),
                libraries: "default".into(),
                exclude: vec![],
                exclude_tests: false,
            },
            totals: Totals::default(),
            proportion: None,
            proportion_error: Some("no methods".into()),
            method_ranking: vec![],
            category_ranking: vec![],
            top_packages: vec![],
            am_methods: vec![],
            findings: vec![],
            diagnostics: vec![],
        }
    }

    fn cat(label: ProcessingLabel, occurrence: usize) -> CategoryStats {
        CategoryStats {
            label,
            occurrence,
            pii_occurrence: 0,
            pii_frequency: 0.0,
            methods: 1,
            share: Percent::of(occurrence as u64, 100).value(),
            gdpr_refs: label.gdpr_refs().iter().map(|s| s.to_string()).collect(),
        }
    }

    #[test]
    fn empty_report_keeps_all_sections() {
        let md = render_markdown(&empty());
        for h in ["## Summary", "## Category Breakdown", "## Top Privacy-relevant Methods", "## Findings", "## Analysis Gaps"] {
            assert!(md.contains(h), "missing {h}");
        }
        assert!(md.contains("no methods"));
        assert!(md.contains("_No findings._"));
    }

    #[test]
    fn breakdown_rows_follow_ranking() {
        let mut r = empty();
        r.category_ranking = metrics::rank_categories(vec![
            cat(ProcessingLabel::NC, 15),
            cat(ProcessingLabel::DPT, 26),
            cat(ProcessingLabel::IAM, 17),
        ]);
        let md = render_markdown(&r);
        let pos = |s: &str| md.find(s).unwrap();
        assert!(pos("| DPT (") < pos("| IAM (") && pos("| IAM (") < pos("| NC ("));
        assert!(md.contains("| 26.0% |"));
        assert!(md.contains("Art. 44"));
    }

    #[test]
    fn explain_unknown_id() {
        assert!(explain(&empty(), "F1").is_none());
    }
}
