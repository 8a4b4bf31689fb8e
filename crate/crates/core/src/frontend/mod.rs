//! Source discovery and parsing into the common IR.

pub mod ir;
pub mod lexer;

mod java;
mod js;
mod parser;

use std::path::Path;
use std::sync::Arc;

use globset::{Glob, GlobSet, GlobSetBuilder};
use walkdir::WalkDir;

use crate::error::Error;
use ir::*;
use parser::Parser;

/// Parse one file. Never fails: unsupported statements are skipped and
/// reported through `IRModule::diagnostics`.
pub fn parse_file(file: SourceFile) -> IRModule {
    let file = Arc::new(file);
    let module_name = default_module_name(&file);
    let mut p = Parser::new(&file, module_name);
    match file.language {
        Language::JsLike => p.parse_js_module(),
        Language::JavaLike => p.parse_java_module(),
    }
    // module-level statements become a synthetic function
    let top = std::mem::take(&mut p.frames[0].body);
    if !top.is_empty() {
        let local = match file.language {
            Language::JsLike => "<module>".to_string(),
            Language::JavaLike => format!("<module:{}>", file_stem(&file.path)),
        };
        let name = p.unique_name(&local);
        let span = Span::new(0, file.text.len());
        p.functions.push(IRFunction {
            id: crate::method::MethodRef::defined(&p.module_name, &name, &file.path, span),
            name,
            class: None,
            params: Vec::new(),
            param_spans: Vec::new(),
            body: top,
            local_types: std::mem::take(&mut p.frames[0].types),
            span,
            is_exported: false,
        });
    }
    let mut functions = std::mem::take(&mut p.functions);
    // a `package` line may appear after the first functions were registered
    for f in &mut functions {
        if f.id.module != p.module_name {
            f.id = crate::method::MethodRef::defined(&p.module_name, &f.name, &file.path, f.span);
        }
    }
    functions.sort_by(|a, b| a.span.start.cmp(&b.span.start).then(a.name.cmp(&b.name)));
    IRModule {
        file: file.clone(),
        module_name: p.module_name.clone(),
        imports: std::mem::take(&mut p.imports),
        functions,
        default_export: p.default_export.take(),
        field_types: std::mem::take(&mut p.field_types),
        diagnostics: std::mem::take(&mut p.diagnostics),
    }
}

fn file_stem(path: &str) -> &str {
    let name = path.rsplit('/').next().unwrap_or(path);
    name.split_once('.').map(|(s, _)| s).unwrap_or(name)
}

/// Path without extension for JS; directory as a dotted package for Java
/// until a `package` declaration says otherwise.
fn default_module_name(file: &SourceFile) -> String {
    match file.language {
        Language::JsLike => match file.path.rsplit_once('.') {
            Some((stem, _)) if !stem.is_empty() => stem.to_string(),
            _ => file.path.clone(),
        },
        Language::JavaLike => match file.path.rsplit_once('/') {
            Some((dir, _)) => dir.replace('/', "."),
            None => String::new(),
        },
    }
}

/// Which languages a scan picks up.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LanguageFilter {
    #[default]
    Auto,
    Only(Language),
}

#[derive(Debug, Clone, Default)]
pub struct DiscoverOptions {
    pub language: LanguageFilter,
    /// Extra glob patterns matched against the relative path.
    pub exclude: Vec<String>,
    pub exclude_tests: bool,
}

const DEFAULT_EXCLUDED_DIRS: &[&str] = &["node_modules", "target", "build", "dist", ".git"];
const TEST_DIRS: &[&str] = &["test", "tests", "__tests__", "spec", "__mocks__"];

/// List source files under `root`, sorted by relative path.
pub fn discover_files(root: &Path, opts: &DiscoverOptions) -> Result<Vec<SourceFile>, Error> {
    if !root.is_dir() {
        return Err(Error::RootNotFound(root.display().to_string()));
    }
    let excludes = build_globset(&opts.exclude)?;
    let mut out = Vec::new();
    let walker = WalkDir::new(root).sort_by_file_name().into_iter().filter_entry(|e| {
        if e.depth() == 0 || !e.file_type().is_dir() {
            return true;
        }
        let name = e.file_name().to_string_lossy();
        if DEFAULT_EXCLUDED_DIRS.contains(&name.as_ref()) {
            return false;
        }
        !(opts.exclude_tests && TEST_DIRS.contains(&name.as_ref()))
    });
    for entry in walker {
        let entry = entry.map_err(|e| Error::UnreadableFile {
            path: e.path().map(|p| p.display().to_string()).unwrap_or_default(),
            reason: e.to_string(),
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .to_string_lossy()
            .replace('\\', "/");
        let Some(lang) = Language::from_path(&rel) else { continue };
        if let LanguageFilter::Only(l) = opts.language {
            if l != lang {
                continue;
            }
        }
        if rel.ends_with(".d.ts") || excludes.is_match(&rel) {
            continue;
        }
        if opts.exclude_tests && is_test_file(&rel) {
            continue;
        }
        let bytes = std::fs::read(entry.path()).map_err(|e| Error::UnreadableFile {
            path: rel.clone(),
            reason: e.to_string(),
        })?;
        out.push(SourceFile::from_bytes(rel, lang, &bytes));
    }
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

fn is_test_file(rel: &str) -> bool {
    let name = rel.rsplit('/').next().unwrap_or(rel);
    let stem = name.split_once('.').map(|(s, _)| s).unwrap_or(name);
    name.contains(".test.") || name.contains(".spec.") || (stem.ends_with("Test") && name.ends_with(".java"))
}

fn build_globset(patterns: &[String]) -> Result<GlobSet, Error> {
    let mut b = GlobSetBuilder::new();
    for p in patterns {
        let glob = Glob::new(p).map_err(|e| Error::Config(format!("bad exclude glob `{p}`: {e}")))?;
        b.add(glob);
        // a bare directory pattern also excludes everything below it
        if !p.contains('*') {
            let sub = format!("{}/**", p.trim_end_matches('/'));
            b.add(Glob::new(&sub).map_err(|e| Error::Config(e.to_string()))?);
        }
    }
    b.build().map_err(|e| Error::Config(e.to_string()))
}
