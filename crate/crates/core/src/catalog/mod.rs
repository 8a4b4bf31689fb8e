//! Privacy-relevant method catalog: processing labels, native domains,
//! catalog entries and method matching.

mod libraries;
mod pattern;

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::frontend::ir::Language;
use crate::method::MethodRef;

pub use libraries::{Library, LibraryList};
pub use pattern::Pattern;

const DEFAULT_CATALOG: &str = include_str!("../../data/default_catalog.json");

/// The six processing labels used to categorise privacy-relevant methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProcessingLabel {
    IAM,
    DEC,
    DSMD,
    DPT,
    NC,
    LM,
}

impl ProcessingLabel {
    pub const ALL: [ProcessingLabel; 6] = [
        ProcessingLabel::IAM,
        ProcessingLabel::DEC,
        ProcessingLabel::DSMD,
        ProcessingLabel::DPT,
        ProcessingLabel::NC,
        ProcessingLabel::LM,
    ];

    pub fn code(self) -> &'static str {
        match self {
            ProcessingLabel::IAM => "IAM",
            ProcessingLabel::DEC => "DEC",
            ProcessingLabel::DSMD => "DSMD",
            ProcessingLabel::DPT => "DPT",
            ProcessingLabel::NC => "NC",
            ProcessingLabel::LM => "LM",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            ProcessingLabel::IAM => "Identity and Access Management",
            ProcessingLabel::DEC => "Data Encryption and Cryptography",
            ProcessingLabel::DSMD => "Data Storage, Management, and Deletion",
            ProcessingLabel::DPT => "Data Processing and Transformation",
            ProcessingLabel::NC => "Network Communication",
            ProcessingLabel::LM => "Logging and Monitoring",
        }
    }

    /// GDPR articles each label aligns with.
    pub fn gdpr_refs(self) -> &'static [&'static str] {
        match self {
            ProcessingLabel::IAM => &["Art. 32"],
            ProcessingLabel::DEC => &["Art. 32"],
            ProcessingLabel::DSMD => &["Art. 5(1)(e)"],
            ProcessingLabel::DPT => &["Art. 30"],
            ProcessingLabel::NC => &["Art. 44"],
            ProcessingLabel::LM => &["Art. 5(1)(c)", "Art. 5(1)(e)"],
        }
    }
}

impl fmt::Display for ProcessingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ProcessingLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProcessingLabel::ALL
            .into_iter()
            .find(|l| l.code().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown label `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NativeDomain {
    IO,
    Database,
    Network,
    Security,
}

impl NativeDomain {
    /// Labels a native entry of this domain may carry.
    pub fn allowed_labels(self) -> &'static [ProcessingLabel] {
        use ProcessingLabel::*;
        match self {
            NativeDomain::IO => &[DPT, LM, DSMD],
            NativeDomain::Security => &[IAM, DEC],
            NativeDomain::Database => &[DSMD, DPT],
            NativeDomain::Network => &[NC],
        }
    }
}

impl FromStr for NativeDomain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "io" | "i/o" => Ok(NativeDomain::IO),
            "database" => Ok(NativeDomain::Database),
            "network" => Ok(NativeDomain::Network),
            "security" => Ok(NativeDomain::Security),
            _ => Err(format!("unknown domain `{s}`")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    Native,
    Api,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub pattern: Pattern,
    pub library: String,
    /// Subject language; `None` applies to both.
    pub language: Option<Language>,
    pub origin: Origin,
    pub domain: Option<NativeDomain>,
    pub labels: BTreeSet<ProcessingLabel>,
}

impl CatalogEntry {
    pub fn applies_to(&self, lang: Language) -> bool {
        self.language.is_none_or(|l| l == lang)
    }
}

#[derive(Debug, Clone)]
pub struct PrivacyCatalog {
    pub version: String,
    pub entries: Vec<CatalogEntry>,
    exact: HashMap<String, usize>,
    wildcard: Vec<usize>,
    by_suffix: HashMap<String, Vec<usize>>,
    by_method: HashMap<String, Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    version: String,
    entries: Vec<RawEntry>,
    #[serde(default, rename = "comment")]
    _comment: Option<serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    pattern: String,
    library: String,
    #[serde(default)]
    language: Option<String>,
    origin: Origin,
    #[serde(default)]
    domain: Option<String>,
    labels: Vec<String>,
}

impl PrivacyCatalog {
    /// The catalog compiled into the binary.
    pub fn default_catalog() -> PrivacyCatalog {
        Self::from_json_str(DEFAULT_CATALOG, "default_catalog.json").expect("embedded catalog is valid")
    }

    pub fn load(path: &Path) -> Result<PrivacyCatalog, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::UnreadableFile {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn from_json_str(text: &str, file: &str) -> Result<PrivacyCatalog, Error> {
        let raw: RawCatalog = serde_json::from_str(text).map_err(|e| Error::SchemaError {
            file: file.to_string(),
            line: e.line(),
            reason: e.to_string(),
        })?;
        let schema_err = |pattern: &str, reason: String| Error::SchemaError {
            file: file.to_string(),
            line: line_of(text, pattern),
            reason,
        };
        let mut entries = Vec::with_capacity(raw.entries.len());
        let mut seen = BTreeSet::new();
        for e in raw.entries {
            let pattern = Pattern::parse(&e.pattern).map_err(|r| schema_err(&e.pattern, r))?;
            if !seen.insert(e.pattern.clone()) {
                return Err(Error::DuplicateEntry(e.pattern));
            }
            if e.labels.is_empty() {
                return Err(schema_err(&e.pattern, format!("entry `{}` has no labels", e.pattern)));
            }
            let mut labels = BTreeSet::new();
            for l in &e.labels {
                labels.insert(l.parse::<ProcessingLabel>().map_err(|r| schema_err(&e.pattern, r))?);
            }
            let language = match e.language.as_deref() {
                None => None,
                Some("java") => Some(Language::JavaLike),
                Some("js") => Some(Language::JsLike),
                Some(other) => {
                    return Err(schema_err(&e.pattern, format!("unknown language `{other}`")));
                }
            };
            let domain = match &e.domain {
                Some(d) => Some(d.parse::<NativeDomain>().map_err(|r| schema_err(&e.pattern, r))?),
                None => None,
            };
            match (e.origin, domain) {
                (Origin::Native, None) => {
                    return Err(schema_err(&e.pattern, format!("native entry `{}` needs a domain", e.pattern)));
                }
                (Origin::Native, Some(d)) => {
                    if let Some(bad) = labels.iter().find(|l| !d.allowed_labels().contains(l)) {
                        return Err(schema_err(
                            &e.pattern,
                            format!("label {bad} is not allowed for domain {d:?} in `{}`", e.pattern),
                        ));
                    }
                }
                (Origin::Api, Some(_)) => {
                    return Err(schema_err(&e.pattern, format!("api entry `{}` must not have a domain", e.pattern)));
                }
                (Origin::Api, None) => {}
            }
            entries.push(CatalogEntry { pattern, library: e.library, language, origin: e.origin, domain, labels });
        }
        Ok(Self::from_entries(raw.version, entries))
    }

    pub fn from_entries(version: impl Into<String>, entries: Vec<CatalogEntry>) -> PrivacyCatalog {
        let mut exact = HashMap::new();
        let mut wildcard = Vec::new();
        let mut by_suffix: HashMap<String, Vec<usize>> = HashMap::new();
        let mut by_method: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            if e.pattern.is_exact() {
                exact.insert(e.pattern.as_str().to_string(), i);
            } else {
                wildcard.push(i);
            }
            if let Some(s) = e.pattern.last_two() {
                by_suffix.entry(s.to_ascii_lowercase()).or_default().push(i);
                let method = s.rsplit('.').next().unwrap_or(s);
                by_method.entry(method.to_string()).or_default().push(i);
            }
        }
        PrivacyCatalog { version: version.into(), entries, exact, wildcard, by_suffix, by_method }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Most specific entry matching a dotted method name.
    pub fn match_name(&self, name: &str) -> Option<usize> {
        if let Some(&i) = self.exact.get(name) {
            return Some(i);
        }
        self.wildcard
            .iter()
            .copied()
            .filter(|&i| self.entries[i].pattern.matches(name))
            .max_by(|&a, &b| {
                let (pa, pb) = (&self.entries[a].pattern, &self.entries[b].pattern);
                pa.specificity()
                    .cmp(&pb.specificity())
                    .then_with(|| pb.as_str().cmp(pa.as_str()))
            })
    }

    pub fn match_method(&self, method: &MethodRef) -> Option<&CatalogEntry> {
        self.match_name(&method.dotted_name()).map(|i| &self.entries[i])
    }

    /// Entries whose last two segments equal `suffix` (case-insensitive).
    pub fn suffix_candidates(&self, suffix: &str) -> &[usize] {
        self.by_suffix
            .get(&suffix.to_ascii_lowercase())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Entries whose final segment is `method` (case-sensitive).
    pub fn method_candidates(&self, method: &str) -> &[usize] {
        self.by_method.get(method).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Api entries must name a library from the configured list.
    pub fn check_libraries(&self, libs: &LibraryList) -> Result<(), Error> {
        for e in &self.entries {
            if e.origin == Origin::Api && libs.get(&e.library).is_none() {
                return Err(Error::Config(format!(
                    "catalog entry `{}` names library `{}` which is not in the library list",
                    e.pattern.as_str(),
                    e.library
                )));
            }
        }
        Ok(())
    }
}

/// Free-function form of [`PrivacyCatalog::match_method`].
pub fn match_method<'c>(catalog: &'c PrivacyCatalog, method: &MethodRef) -> Option<&'c CatalogEntry> {
    catalog.match_method(method)
}

pub fn load_catalog(path: &Path) -> Result<PrivacyCatalog, Error> {
    PrivacyCatalog::load(path)
}

fn line_of(text: &str, needle: &str) -> usize {
    let quoted = format!("\"{needle}\"");
    match text.find(&quoted) {
        Some(off) => text[..off].matches('\n').count() + 1,
        None => 1,
    }
}
