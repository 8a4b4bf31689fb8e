//! End-to-end scan: discover → parse → graphs → closure → sources → taint →
//! metrics → report.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::catalog::{LibraryList, PrivacyCatalog};
use crate::closure::{compute_api_set, PrivacySets};
use crate::error::{Error, Result};
use crate::frontend::ir::{IRModule, Language, SourceFile};
use crate::frontend::{discover_files, parse_file, DiscoverOptions, LanguageFilter};
use crate::graphs::{build_call_graph, build_import_graph, dependency_order, CallGraph, ImportGraph};
use crate::report::{build_report, ScanReport};
use crate::sources::{detect_sources, load_rules, PersonalDataSource, RuleSet};
use crate::taint::{propagate_inter, TaintResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
    Both,
}

#[derive(Debug, Clone, Default)]
pub struct ScanConfig {
    pub root: PathBuf,
    pub language: LanguageFilter,
    pub catalog: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub libraries: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
    pub exclude: Vec<String>,
    pub emit_graphs: Option<PathBuf>,
    pub explain: Option<String>,
    pub exclude_tests: bool,
}

impl ScanConfig {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        ScanConfig { root: root.into(), ..Default::default() }
    }

    /// Checks every path before any work starts.
    pub fn validate(&self) -> Result<()> {
        if !self.root.is_dir() {
            return Err(Error::RootNotFound(self.root.display().to_string()));
        }
        for p in [&self.catalog, &self.rules, &self.libraries].into_iter().flatten() {
            if !p.is_file() {
                return Err(Error::UnreadableFile { path: p.display().to_string(), reason: "no such file".into() });
            }
        }
        if let Some(out) = &self.output {
            if out.exists() && !out.is_dir() {
                return Err(Error::Config(format!("output path {} is not a directory", out.display())));
            }
        }
        Ok(())
    }

    pub fn language_name(&self) -> &'static str {
        match self.language {
            LanguageFilter::Auto => "auto",
            LanguageFilter::Only(Language::JsLike) => "js",
            LanguageFilter::Only(Language::JavaLike) => "java",
        }
    }
}

/// Catalog, rules and library list in effect for a scan.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub catalog: PrivacyCatalog,
    pub rules: RuleSet,
    pub libraries: LibraryList,
}

impl Inputs {
    pub fn load(config: &ScanConfig) -> Result<Inputs> {
        let catalog = match &config.catalog {
            Some(p) => PrivacyCatalog::load(p)?,
            None => PrivacyCatalog::default_catalog(),
        };
        let rules = match &config.rules {
            Some(p) => load_rules(p)?,
            None => RuleSet::default_rules(),
        };
        let libraries = match &config.libraries {
            Some(p) => LibraryList::load(p)?,
            None => LibraryList::default_list(),
        };
        catalog.check_libraries(&libraries)?;
        Ok(Inputs { catalog, rules, libraries })
    }
}

/// Everything computed during a scan, for callers that need more than the
/// report (graph export, explanations).
pub struct Analysis {
    pub modules: Vec<IRModule>,
    pub import_graph: ImportGraph,
    pub order: Vec<Vec<String>>,
    pub call_graph: CallGraph,
    pub sets: PrivacySets,
    pub sources: Vec<PersonalDataSource>,
    pub taint: TaintResult,
    pub report: ScanReport,
}

pub fn run_scan(config: &ScanConfig) -> Result<ScanReport> {
    Ok(analyze(config)?.report)
}

pub fn analyze(config: &ScanConfig) -> Result<Analysis> {
    config.validate().map_err(|e| e.in_stage("config"))?;
    let inputs = Inputs::load(config).map_err(|e| e.in_stage("config"))?;
    let files = discover(config).map_err(|e| e.in_stage("discover"))?;
    analyze_files(config, &inputs, files)
}

pub fn discover(config: &ScanConfig) -> Result<Vec<SourceFile>> {
    let opts = DiscoverOptions {
        language: config.language,
        exclude: config.exclude.clone(),
        exclude_tests: config.exclude_tests,
    };
    discover_files(&config.root, &opts)
}

/// Runs the analysis over already discovered files, in any order.
pub fn analyze_files(config: &ScanConfig, inputs: &Inputs, files: Vec<SourceFile>) -> Result<Analysis> {
    let mut modules: Vec<IRModule> = files.into_par_iter().map(parse_file).collect();
    modules.sort_by(|a, b| a.path().cmp(b.path()));

    let import_graph = build_import_graph(&modules);
    let order = dependency_order(&import_graph);
    let call_graph = build_call_graph(&modules, &inputs.catalog, &inputs.libraries);
    let sets = compute_api_set(&call_graph, &inputs.catalog, &inputs.libraries, &order);
    check_sets(&sets).map_err(|e| e.in_stage("closure"))?;

    let sources: Vec<PersonalDataSource> = modules
        .par_iter()
        .map(|m| detect_sources(m, &inputs.rules))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let taint = propagate_inter(&call_graph, &modules, &sources, &sets);
    check_flows(&taint, &sources).map_err(|e| e.in_stage("taint"))?;

    let report = build_report(config, inputs, &modules, &order, &call_graph, &sets, &sources, &taint)
        .map_err(|e| e.in_stage("metrics"))?;
    Ok(Analysis { modules, import_graph, order, call_graph, sets, sources, taint, report })
}

fn check_sets(sets: &PrivacySets) -> Result<()> {
    if let Some(m) = sets.api_set.iter().find(|m| sets.natives.contains(*m)) {
        return Err(Error::Invariant(format!("{} is both native and in the API set", m.qualified_name)));
    }
    if let Some(m) = sets.api_set.iter().find(|m| sets.labels(m).is_empty()) {
        return Err(Error::Invariant(format!("{} is in the API set without labels", m.qualified_name)));
    }
    Ok(())
}

fn check_flows(taint: &TaintResult, sources: &[PersonalDataSource]) -> Result<()> {
    for f in &taint.flows {
        if f.path.is_empty() {
            return Err(Error::Invariant(format!("flow into {} has an empty path", f.callee.qualified_name)));
        }
        if f.pii != sources[f.source].pii {
            return Err(Error::Invariant("flow PII flag differs from its source".into()));
        }
    }
    Ok(())
}

/// Writes `report.json` and/or `report.md` into `dir`.
pub fn write_outputs(report: &ScanReport, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let mut written = Vec::new();
    if matches!(format, OutputFormat::Json | OutputFormat::Both) {
        let p = dir.join("report.json");
        std::fs::write(&p, report.to_json()).map_err(|e| io_err(&p, e))?;
        written.push(p);
    }
    if matches!(format, OutputFormat::Markdown | OutputFormat::Both) {
        let p = dir.join("report.md");
        std::fs::write(&p, crate::report::render_markdown(report)).map_err(|e| io_err(&p, e))?;
        written.push(p);
    }
    Ok(written)
}

/// Writes `imports.dot` and `calls.dot` into `dir`.
pub fn write_graphs(analysis: &Analysis, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let imports = dir.join("imports.dot");
    std::fs::write(&imports, crate::graphs::import_graph_dot(&analysis.import_graph)).map_err(|e| io_err(&imports, e))?;
    let calls = dir.join("calls.dot");
    std::fs::write(&calls, crate::graphs::call_graph_dot(&analysis.call_graph)).map_err(|e| io_err(&calls, e))?;
    Ok(())
}

fn io_err(p: &Path, e: std::io::Error) -> Error {
    Error::UnreadableFile { path: p.display().to_string(), reason: e.to_string() }
}
