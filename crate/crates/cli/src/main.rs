use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use privacy_lens::frontend::ir::Language;
use privacy_lens::frontend::LanguageFilter;
use privacy_lens::metrics::{corpus_average, proportion};
use privacy_lens::pipeline::{analyze, write_graphs, write_outputs, OutputFormat, ScanConfig};
use privacy_lens::report::explain;
use privacy_lens::Error;

#[derive(Parser)]
#[command(name = "privacy-lens", version, about = "Find privacy-relevant methods and personal-data flows in JS/TS and Java code")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scan a source tree and write report.json / report.md.
    Scan(ScanArgs),
    /// Average the proportions of several report.json files.
    Merge {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
    },
}

#[derive(clap::Args)]
struct ScanArgs {
    root: PathBuf,
    #[arg(long = "lang", value_enum, default_value_t = Lang::Auto)]
    lang: Lang,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    rules: Option<PathBuf>,
    #[arg(long)]
    libraries: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Both)]
    format: Format,
    /// Directory for report files.
    #[arg(long, default_value = ".")]
    output: PathBuf,
    /// Also write imports.dot and calls.dot into this directory.
    #[arg(long = "emit-graphs", value_name = "DIR")]
    emit_graphs: Option<PathBuf>,
    #[arg(long = "exclude", value_name = "GLOB")]
    exclude: Vec<String>,
    #[arg(long = "exclude-tests")]
    exclude_tests: bool,
    /// Print the witness path of one finding, e.g. F3.
    #[arg(long, value_name = "ID")]
    explain: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lang {
    Js,
    Java,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
    Both,
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Style {
        let color = std::env::var_os("PRIVACY_LENS_NO_COLOR").is_none() && std::io::stderr().is_terminal();
        Style { color }
    }

    fn paint(&self, code: &str, s: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{s}\x1b[0m")
        } else {
            s.to_string()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    let result = match cli.command {
        Command::Scan(args) => scan(args, &style),
        Command::Merge { reports } => merge(&reports),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{} {e}", style.paint("1;31", "error:"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn scan(args: ScanArgs, style: &Style) -> Result<(), Error> {
    let config = ScanConfig {
        root: args.root,
        language: match args.lang {
            Lang::Auto => LanguageFilter::Auto,
            Lang::Js => LanguageFilter::Only(Language::JsLike),
            Lang::Java => LanguageFilter::Only(Language::JavaLike),
        },
        catalog: args.catalog,
        rules: args.rules,
        libraries: args.libraries,
        output: Some(args.output.clone()),
        format: match args.format {
            Format::Json => OutputFormat::Json,
            Format::Md => OutputFormat::Markdown,
            Format::Both => OutputFormat::Both,
        },
        exclude: args.exclude,
        emit_graphs: args.emit_graphs,
        explain: args.explain,
        exclude_tests: args.exclude_tests,
    };
    let analysis = analyze(&config)?;
    let report = &analysis.report;
    let written = write_outputs(report, &args.output, config.format).map_err(|e| e.in_stage("report"))?;
    if let Some(dir) = &config.emit_graphs {
        write_graphs(&analysis, dir).map_err(|e| e.in_stage("report"))?;
    }

    let t = &report.totals;
    let share = match &report.proportion {
        Some(p) => format!("{} of {} methods ({}%)", p.am_count, p.total_methods, p.percent),
        None => report.proportion_error.clone().unwrap_or_default(),
    };
    let findings = format!("{} findings ({} PII)", t.flows, t.pii_flows);
    let findings = if t.flows > 0 { style.paint("33", &findings) } else { style.paint("32", &findings) };
    eprintln!("scanned {} files, {} functions: {share}; {findings}", t.files, t.functions);
    for p in written {
        eprintln!("wrote {}", p.display());
    }

    if let Some(id) = &config.explain {
        match explain(report, id) {
            Some(text) => print!("{text}"),
            None => return Err(Error::Config(format!("no finding with id {id}"))),
        }
    }
    Ok(())
}

fn merge(paths: &[PathBuf]) -> Result<(), Error> {
    let mut results = Vec::new();
    for path in paths {
        let read_err = |reason: String| Error::UnreadableFile { path: path.display().to_string(), reason };
        let text = std::fs::read_to_string(path).map_err(|e| read_err(e.to_string()))?;
        let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| read_err(e.to_string()))?;
        let p = &v["proportion"];
        if p.is_null() {
            eprintln!("skipping {}: no proportion", path.display());
            continue;
        }
        let field = |k: &str| p[k].as_u64().map(|n| n as usize).ok_or_else(|| read_err(format!("missing proportion.{k}")));
        let r = proportion(field("am_count")?, field("total_methods")?, field("pii_am_count")?)?;
        println!("{}\t{}%", path.display(), r.percent);
        results.push(r);
    }
    match corpus_average(&results) {
        Some(avg) => println!("average\t{avg}% over {} reports", results.len()),
        None => return Err(Error::ZeroTotal),
    }
    Ok(())
}
