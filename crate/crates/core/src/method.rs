use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use crate::frontend::ir::Span;

/// Globally qualified identity of a function or method.
///
/// Scanned definitions are named `module::Local.name`; library methods use the
/// dotted name from the catalog (`org.slf4j.Logger.info`) and carry no span.
/// Equality, hashing and ordering look at `qualified_name` only.
#[derive(Debug, Clone, Serialize)]
pub struct MethodRef {
    pub qualified_name: String,
    pub module: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub display_span: Option<Span>,
}

impl MethodRef {
    pub fn defined(module: &str, local_name: &str, file: &str, span: Span) -> Self {
        MethodRef {
            qualified_name: format!("{module}::{local_name}"),
            module: module.to_string(),
            file: Some(file.to_string()),
            display_span: Some(span),
        }
    }

    pub fn external(qualified_name: impl Into<String>, library: impl Into<String>) -> Self {
        MethodRef {
            qualified_name: qualified_name.into(),
            module: library.into(),
            file: None,
            display_span: None,
        }
    }

    pub fn is_external(&self) -> bool {
        self.display_span.is_none()
    }

    /// The dotted name used for catalog lookups: `pkg.Class.method` for
    /// `pkg::Class.method`, unchanged for external methods.
    pub fn dotted_name(&self) -> String {
        match self.qualified_name.split_once("::") {
            Some((module, local)) => {
                let module = module.replace('/', ".");
                format!("{module}.{local}")
            }
            None => self.qualified_name.clone(),
        }
    }

    /// Everything before the last dotted segment (the "class" for Java-style names).
    pub fn owner(&self) -> String {
        let dotted = self.dotted_name();
        match dotted.rsplit_once('.') {
            Some((owner, _)) => owner.to_string(),
            None => dotted,
        }
    }
}

impl PartialEq for MethodRef {
    fn eq(&self, other: &Self) -> bool {
        self.qualified_name == other.qualified_name
    }
}

impl Eq for MethodRef {}

impl Hash for MethodRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.qualified_name.hash(state);
    }
}

impl PartialOrd for MethodRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MethodRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.qualified_name.cmp(&other.qualified_name)
    }
}

impl fmt::Display for MethodRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.qualified_name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_names() {
        let m = MethodRef::defined("com.acme", "UserService.save", "A.java", Span::new(0, 1));
        assert_eq!(m.qualified_name, "com.acme::UserService.save");
        assert_eq!(m.dotted_name(), "com.acme.UserService.save");
        assert_eq!(m.owner(), "com.acme.UserService");
        let js = MethodRef::defined("src/lib", "h", "src/lib.js", Span::new(0, 1));
        assert_eq!(js.dotted_name(), "src.lib.h");
        let ext = MethodRef::external("org.slf4j.Logger.info", "slf4j");
        assert!(ext.is_external());
        assert_eq!(ext.owner(), "org.slf4j.Logger");
    }
}
