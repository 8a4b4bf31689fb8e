use std::fmt;

/// A qualified-name pattern: an exact dotted name, `*.suffix.segments`
/// (one or more leading segments) or `prefix.segments.*` (one or more
/// trailing segments).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pattern {
    text: String,
    kind: Kind,
    /// Non-wildcard part without the joining dot.
    fixed: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Exact,
    Leading,
    Trailing,
}

impl Pattern {
    pub fn parse(text: &str) -> Result<Pattern, String> {
        let bad = |why: &str| Err(format!("invalid pattern `{text}`: {why}"));
        if text.is_empty() {
            return bad("empty");
        }
        let stars = text.matches('*').count();
        if stars > 1 {
            return bad("more than one wildcard");
        }
        let (kind, fixed) = if let Some(rest) = text.strip_prefix("*.") {
            (Kind::Leading, rest)
        } else if let Some(rest) = text.strip_suffix(".*") {
            (Kind::Trailing, rest)
        } else if stars == 1 {
            return bad("wildcard must be a whole leading or trailing segment");
        } else {
            (Kind::Exact, text)
        };
        if fixed.split('.').any(|s| s.is_empty() || s.chars().any(char::is_whitespace)) {
            return bad("empty or malformed segment");
        }
        Ok(Pattern { text: text.to_string(), kind, fixed: fixed.to_string() })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn is_exact(&self) -> bool {
        self.kind == Kind::Exact
    }

    pub fn is_trailing_wildcard(&self) -> bool {
        self.kind == Kind::Trailing
    }

    /// Number of non-wildcard segments; exact patterns rank above wildcards
    /// with the same count.
    pub fn specificity(&self) -> (usize, bool) {
        (self.fixed.split('.').count(), self.is_exact())
    }

    pub fn matches(&self, name: &str) -> bool {
        match self.kind {
            Kind::Exact => name == self.fixed,
            Kind::Leading => {
                name.len() > self.fixed.len() + 1
                    && name.ends_with(&self.fixed)
                    && name.as_bytes()[name.len() - self.fixed.len() - 1] == b'.'
            }
            Kind::Trailing => {
                name.len() > self.fixed.len() + 1
                    && name.starts_with(&self.fixed)
                    && name.as_bytes()[self.fixed.len()] == b'.'
            }
        }
    }

    /// `Class.method` for patterns ending in concrete segments; the whole
    /// fixed part for one-segment names like `fetch`.
    pub fn last_two(&self) -> Option<&str> {
        if self.kind == Kind::Trailing {
            return None;
        }
        let f = self.fixed.as_str();
        match f.rmatch_indices('.').nth(1) {
            Some((i, _)) => Some(&f[i + 1..]),
            None => Some(f),
        }
    }

    /// The class-like segment before the method name, if any.
    pub fn class_segment(&self) -> Option<&str> {
        let two = self.last_two()?;
        two.split_once('.').map(|(c, _)| c)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
