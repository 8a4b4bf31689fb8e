use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("root directory not found: {0}")]
    RootNotFound(String),
    #[error("cannot read {path}: {reason}")]
    UnreadableFile { path: String, reason: String },
    #[error("{file}:{line}: schema error: {reason}")]
    SchemaError { file: String, line: usize, reason: String },
    #[error("duplicate catalog entry: {0}")]
    DuplicateEntry(String),
    #[error("bad regex in category {category}: `{pattern}`: {reason}")]
    BadRegex { category: String, pattern: String, reason: String },
    #[error("no methods")]
    ZeroTotal,
    #[error("configuration error: {0}")]
    Config(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }

    /// The innermost error, skipping stage wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit code: 2 for configuration and I/O problems, 3 for
    /// internal invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Invariant(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_class() {
        let config = [
            Error::RootNotFound("x".into()),
            Error::UnreadableFile { path: "x".into(), reason: "gone".into() },
            Error::SchemaError { file: "c.json".into(), line: 3, reason: "bad".into() },
            Error::DuplicateEntry("a.b".into()),
            Error::BadRegex { category: "C".into(), pattern: "(".into(), reason: "open".into() },
            Error::ZeroTotal,
            Error::Config("x".into()),
        ];
        for e in config {
            assert_eq!(e.in_stage("discover").exit_code(), 2);
        }
        let e = Error::Invariant("x".into()).in_stage("taint").in_stage("scan");
        assert_eq!(e.exit_code(), 3);
        assert_eq!(e.to_string(), "scan: taint: internal invariant violated: x");
    }
}
