use std::path::Path;

use serde::Deserialize;

use super::ProcessingLabel;
use crate::error::Error;

const DEFAULT_LIBRARIES: &str = include_str!("../../data/libraries.json");

/// A configured library whose methods can be API privacy-relevant.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Library {
    pub name: String,
    /// `java` or `js`.
    pub language: String,
    pub category: ProcessingLabel,
    /// Java package prefixes or npm package names identifying the library's
    /// own source when it is part of a scan.
    #[serde(default)]
    pub packages: Vec<String>,
    /// Not part of the surveyed list; added so catalog entries for
    /// frequently seen libraries have a home.
    #[serde(default)]
    pub supplementary: bool,
}

#[derive(Debug, Clone, Default)]
pub struct LibraryList {
    pub libraries: Vec<Library>,
}

impl LibraryList {
    pub fn default_list() -> LibraryList {
        Self::from_json_str(DEFAULT_LIBRARIES, "libraries.json").expect("embedded library list is valid")
    }

    pub fn load(path: &Path) -> Result<LibraryList, Error> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::UnreadableFile {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        Self::from_json_str(&text, &path.display().to_string())
    }

    pub fn from_json_str(text: &str, file: &str) -> Result<LibraryList, Error> {
        let libraries: Vec<Library> = serde_json::from_str(text).map_err(|e| Error::SchemaError {
            file: file.to_string(),
            line: e.line(),
            reason: e.to_string(),
        })?;
        for l in &libraries {
            if l.language != "java" && l.language != "js" {
                return Err(Error::SchemaError {
                    file: file.to_string(),
                    line: 1,
                    reason: format!("library `{}` has unknown language `{}`", l.name, l.language),
                });
            }
        }
        Ok(LibraryList { libraries })
    }

    pub fn get(&self, name: &str) -> Option<&Library> {
        self.libraries.iter().find(|l| l.name == name)
    }

    /// The configured library a scanned module belongs to, if any. Java
    /// modules match by package prefix; JS modules when a directory of the
    /// path equals the npm package name. The longest matching package wins.
    pub fn owner_of(&self, module_name: &str, path: &str, java: bool) -> Option<&Library> {
        let dir = path.rsplit_once('/').map(|(d, _)| d).unwrap_or("");
        let padded = format!("/{dir}/");
        self.best(java, |p| {
            if java {
                module_name == p || module_name.starts_with(&format!("{p}."))
            } else {
                padded.contains(&format!("/{p}/"))
            }
        })
    }

    /// Library whose packages cover an import target, e.g. `org.slf4j.Logger`
    /// or `axios`.
    pub fn for_import(&self, target: &str, java: bool) -> Option<&Library> {
        self.best(java, |p| {
            target == p
                || (java && target.starts_with(&format!("{p}.")))
                || (!java && target.starts_with(&format!("{p}/")))
        })
    }

    fn best(&self, java: bool, hit: impl Fn(&str) -> bool) -> Option<&Library> {
        let mut best: Option<(&Library, usize)> = None;
        for l in &self.libraries {
            if (l.language == "java") != java {
                continue;
            }
            for p in &l.packages {
                if hit(p) && best.is_none_or(|(_, len)| p.len() > len) {
                    best = Some((l, p.len()));
                }
            }
        }
        best.map(|(l, _)| l)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_list_mirrors_the_survey_table() {
        let l = LibraryList::default_list();
        let core: Vec<_> = l.libraries.iter().filter(|x| !x.supplementary).collect();
        // five per label and language, 30 rows per language
        assert_eq!(core.len(), 60);
        for lang in ["java", "js"] {
            assert_eq!(core.iter().filter(|x| x.language == lang).count(), 30);
            for label in ProcessingLabel::ALL {
                let n = core.iter().filter(|x| x.language == lang && x.category == label).count();
                assert_eq!(n, 5, "{lang} {label}");
            }
        }
    }

    #[test]
    fn ownership() {
        let l = LibraryList::default_list();
        assert_eq!(l.owner_of("org.slf4j.helpers", "x/Y.java", true).unwrap().name, "slf4j");
        assert!(l.owner_of("org.slf4jx", "x/Y.java", true).is_none());
        assert_eq!(l.owner_of("vendor/axios/lib/core", "vendor/axios/lib/core.js", false).unwrap().name, "Axios");
        assert_eq!(l.for_import("org.slf4j.Logger", true).unwrap().name, "slf4j");
        assert_eq!(l.for_import("axios", false).unwrap().name, "Axios");
        assert_eq!(l.for_import("org.apache.http.client.HttpClient", true).unwrap().name, "HttpClient");
        assert_eq!(l.for_import("org.apache.http.HttpEntity", true).unwrap().name, "Apache HttpComponents");
    }
}
