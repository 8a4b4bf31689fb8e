//! Tokenizer shared by the JavaScript-like and Java-like frontends.
//!
//! The lexer is total: every byte sequence produces a token stream. Bytes it
//! does not understand become single-character punctuation tokens and are left
//! for the parser to reject at statement granularity.

use super::ir::Span;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Number,
    /// Quoted string; `text` holds the unescaped-ish body without quotes.
    Str,
    /// Backtick template; interpolations are kept as byte ranges into the source.
    Template { holes: Vec<Span> },
    Regex,
    /// Java character literal.
    Char,
    Punct,
}

#[derive(Debug, Clone)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
    pub newline_before: bool,
}

impl Token {
    pub fn is(&self, p: &str) -> bool {
        matches!(self.kind, TokenKind::Punct | TokenKind::Ident) && self.text == p
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }
}

const PUNCTS: &[&str] = &[
    ">>>=", "...", "===", "!==", "**=", "<<=", ">>=", "&&=", "||=", "??=", "=>", "==", "!=", "<=",
    ">=", "&&", "||", "??", "?.", "++", "--", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "**",
    "::", "->", "<<",
];

pub struct Lexer<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    base: usize,
    java: bool,
    tokens: Vec<Token>,
    newline: bool,
}

/// Tokenize `src`. Spans are offset by `base` so that template holes can be
/// re-lexed in place.
pub fn tokenize(src: &str, base: usize, java: bool) -> Vec<Token> {
    let mut lx = Lexer {
        src,
        bytes: src.as_bytes(),
        pos: 0,
        base,
        java,
        tokens: Vec::new(),
        newline: false,
    };
    lx.run();
    lx.tokens
}

fn is_ident_start(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c == '_' || c == '$' || c.is_alphanumeric()
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn byte_at(&self, i: usize) -> Option<u8> {
        self.bytes.get(i).copied()
    }

    fn push(&mut self, kind: TokenKind, text: String, start: usize) {
        let span = Span::new(self.base + start, self.base + self.pos);
        self.tokens.push(Token {
            kind,
            text,
            span,
            newline_before: self.newline,
        });
        self.newline = false;
    }

    fn run(&mut self) {
        while self.pos < self.bytes.len() {
            let c = match self.peek_char() {
                Some(c) => c,
                None => break,
            };
            if c == '\n' {
                self.newline = true;
                self.pos += 1;
                continue;
            }
            if c.is_whitespace() {
                self.pos += c.len_utf8();
                continue;
            }
            if c == '/' && self.byte_at(self.pos + 1) == Some(b'/') {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
                continue;
            }
            if c == '/' && self.byte_at(self.pos + 1) == Some(b'*') {
                let end = self.src[self.pos + 2..]
                    .find("*/")
                    .map(|i| self.pos + 2 + i + 2)
                    .unwrap_or(self.bytes.len());
                if self.src[self.pos..end].contains('\n') {
                    self.newline = true;
                }
                self.pos = end;
                continue;
            }
            let start = self.pos;
            if is_ident_start(c) {
                while let Some(ch) = self.peek_char() {
                    if !is_ident_continue(ch) {
                        break;
                    }
                    self.pos += ch.len_utf8();
                }
                let text = self.src[start..self.pos].to_string();
                self.push(TokenKind::Ident, text, start);
                continue;
            }
            if c.is_ascii_digit()
                || (c == '.' && self.byte_at(self.pos + 1).is_some_and(|b| b.is_ascii_digit()))
            {
                self.number();
                let text = self.src[start..self.pos].to_string();
                self.push(TokenKind::Number, text, start);
                continue;
            }
            match c {
                '"' => self.string(b'"', start),
                '\'' if self.java => self.char_lit(start),
                '\'' => self.string(b'\'', start),
                '`' if !self.java => self.template(start),
                '/' if !self.java && self.regex_allowed() => self.regex(start),
                _ => self.punct(start),
            }
        }
    }

    fn number(&mut self) {
        let b = self.bytes;
        if b[self.pos] == b'0'
            && matches!(self.byte_at(self.pos + 1), Some(b'x' | b'X' | b'b' | b'B' | b'o' | b'O'))
        {
            self.pos += 2;
        }
        while self.pos < b.len() {
            let ch = b[self.pos];
            let part = ch.is_ascii_alphanumeric()
                || ch == b'_'
                || (ch == b'.' && self.byte_at(self.pos + 1).is_some_and(|n| n.is_ascii_digit()))
                || ((ch == b'+' || ch == b'-') && matches!(b[self.pos - 1], b'e' | b'E'));
            if !part {
                break;
            }
            self.pos += 1;
        }
    }

    fn string(&mut self, quote: u8, start: usize) {
        self.pos += 1;
        let mut body = String::new();
        while self.pos < self.bytes.len() {
            let ch = self.bytes[self.pos];
            if ch == quote {
                self.pos += 1;
                break;
            }
            if ch == b'\n' {
                // unterminated
                break;
            }
            if ch == b'\\' && self.pos + 1 < self.bytes.len() {
                let next = self.peek_char_at(self.pos + 1);
                body.push(match next {
                    'n' => '\n',
                    't' => '\t',
                    other => other,
                });
                self.pos += 1 + next.len_utf8();
                continue;
            }
            let c = self.peek_char_at(self.pos);
            body.push(c);
            self.pos += c.len_utf8();
        }
        self.push(TokenKind::Str, body, start);
    }

    fn peek_char_at(&self, i: usize) -> char {
        self.src[i..].chars().next().unwrap_or('\0')
    }

    fn char_lit(&mut self, start: usize) {
        self.pos += 1;
        while self.pos < self.bytes.len() {
            let ch = self.bytes[self.pos];
            if ch == b'\\' {
                self.pos = (self.pos + 2).min(self.bytes.len());
                continue;
            }
            if ch == b'\n' {
                break;
            }
            self.pos += 1;
            if ch == b'\'' {
                break;
            }
        }
        while !self.src.is_char_boundary(self.pos) {
            self.pos += 1;
        }
        let text = self.src[start..self.pos].to_string();
        self.push(TokenKind::Char, text, start);
    }

    fn template(&mut self, start: usize) {
        self.pos += 1;
        let mut body = String::new();
        let mut holes = Vec::new();
        while self.pos < self.bytes.len() {
            let ch = self.bytes[self.pos];
            if ch == b'`' {
                self.pos += 1;
                break;
            }
            if ch == b'\\' && self.pos + 1 < self.bytes.len() {
                let next = self.peek_char_at(self.pos + 1);
                body.push(next);
                self.pos += 1 + next.len_utf8();
                continue;
            }
            if ch == b'$' && self.byte_at(self.pos + 1) == Some(b'{') {
                let hole_start = self.pos + 2;
                let mut depth = 1usize;
                let mut i = hole_start;
                while i < self.bytes.len() {
                    match self.bytes[i] {
                        b'{' => depth += 1,
                        b'}' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    i += 1;
                }
                holes.push(Span::new(self.base + hole_start, self.base + i));
                body.push_str("${}");
                self.pos = (i + 1).min(self.bytes.len());
                continue;
            }
            if ch == b'\n' {
                self.newline = true;
            }
            let c = self.peek_char_at(self.pos);
            body.push(c);
            self.pos += c.len_utf8();
        }
        self.push(TokenKind::Template { holes }, body, start);
    }

    /// A slash starts a regex literal when the previous token cannot end an
    /// expression.
    fn regex_allowed(&self) -> bool {
        match self.tokens.last() {
            None => true,
            Some(t) => match t.kind {
                TokenKind::Ident => matches!(
                    t.text.as_str(),
                    "return" | "typeof" | "case" | "do" | "else" | "in" | "of" | "new" | "delete"
                        | "void" | "throw" | "await" | "yield"
                ),
                TokenKind::Punct => !matches!(t.text.as_str(), ")" | "]" | "}" | "++" | "--"),
                _ => false,
            },
        }
    }

    fn regex(&mut self, start: usize) {
        self.pos += 1;
        let mut in_class = false;
        while self.pos < self.bytes.len() {
            let ch = self.bytes[self.pos];
            match ch {
                b'\\' => {
                    self.pos += 2;
                    continue;
                }
                b'\n' => break,
                b'[' => in_class = true,
                b']' => in_class = false,
                b'/' if !in_class => {
                    self.pos += 1;
                    break;
                }
                _ => {}
            }
            self.pos += 1;
        }
        self.pos = self.pos.min(self.bytes.len());
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        while !self.src.is_char_boundary(self.pos) {
            self.pos += 1;
        }
        let text = self.src[start..self.pos].to_string();
        self.push(TokenKind::Regex, text, start);
    }

    fn punct(&mut self, start: usize) {
        let rest = &self.src[self.pos..];
        for p in PUNCTS {
            if rest.starts_with(p) {
                self.pos += p.len();
                self.push(TokenKind::Punct, (*p).to_string(), start);
                return;
            }
        }
        let c = rest.chars().next().unwrap_or('\0');
        self.pos += c.len_utf8().max(1);
        self.push(TokenKind::Punct, c.to_string(), start);
    }
}

/// Maps byte offsets to 1-based line and column numbers.
#[derive(Debug, Clone)]
pub struct LineIndex {
    starts: Vec<usize>,
}

impl LineIndex {
    pub fn new(text: &str) -> Self {
        let mut starts = vec![0];
        starts.extend(text.match_indices('\n').map(|(i, _)| i + 1));
        LineIndex { starts }
    }

    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        let line = match self.starts.binary_search(&offset) {
            Ok(i) => i,
            Err(i) => i - 1,
        };
        (line + 1, offset - self.starts[line] + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<String> {
        tokenize(src, 0, false).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn operators_and_comments() {
        assert_eq!(
            texts("a === b // hi\n /* x */ c => d?.e"),
            vec!["a", "===", "b", "c", "=>", "d", "?.", "e"]
        );
    }

    #[test]
    fn regex_versus_division() {
        let toks = tokenize("x = a / b; y = /ab+c/gi.test(s)", 0, false);
        assert!(toks.iter().any(|t| t.kind == TokenKind::Regex && t.text == "/ab+c/gi"));
        assert!(toks.iter().any(|t| t.text == "/" && t.kind == TokenKind::Punct));
    }

    #[test]
    fn template_holes_are_recorded() {
        let src = "`hi ${user.email}!`";
        let toks = tokenize(src, 0, false);
        assert_eq!(toks.len(), 1);
        match &toks[0].kind {
            TokenKind::Template { holes } => {
                assert_eq!(&src[holes[0].start..holes[0].end], "user.email");
            }
            k => panic!("unexpected {k:?}"),
        }
    }

    #[test]
    fn line_index() {
        let idx = LineIndex::new("ab\ncd\n");
        assert_eq!(idx.line_col(0), (1, 1));
        assert_eq!(idx.line_col(4), (2, 2));
        assert_eq!(idx.line_col(6), (3, 1));
    }

    #[test]
    fn unterminated_input_is_total() {
        for src in ["\"abc", "`abc ${", "/* x", "'\\", "0x", "/[/"] {
            let _ = tokenize(src, 0, false);
            let _ = tokenize(src, 0, true);
        }
    }
}
