//! Shared plumbing for the line-oriented, version-tagged file formats.

use thiserror::Error;

/// A malformed file: wrong header, wrong token counts, unparsable numbers
/// or trailing content.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub message: String,
}

/// Failure reading one of the text formats: either the text is malformed,
/// or it parses but describes an invalid object (a loop edge, a non-Latin
/// group table, a non-prime modulus, ...).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReadError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    TooLarge(String),
}

impl ReadError {
    pub(crate) fn invalid(e: impl std::fmt::Display) -> Self {
        ReadError::Invalid(e.to_string())
    }
}

/// Kinds of files recognised by their first line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FileKind {
    Graph,
    Algebra,
    Group,
    Monomial,
    PermGroup,
}

impl FileKind {
    pub fn header(self) -> &'static str {
        match self {
            FileKind::Graph => "graph v1",
            FileKind::Algebra => "evolalg v1",
            FileKind::Group => "group v1",
            FileKind::Monomial => "monomial v1",
            FileKind::PermGroup => "permgroup v1",
        }
    }

    pub fn detect(text: &str) -> Option<FileKind> {
        let first = text.lines().next()?;
        [FileKind::Graph, FileKind::Algebra, FileKind::Group, FileKind::Monomial, FileKind::PermGroup]
            .into_iter()
            .find(|k| k.header() == first)
    }
}

pub(crate) struct Lines<'a> {
    lines: Vec<&'a str>,
    pos: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let mut lines: Vec<&str> = text.split('\n').collect();
        // A single terminating newline is expected, not required.
        if lines.last() == Some(&"") {
            lines.pop();
        }
        Lines { lines, pos: 0 }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError { line: self.pos.max(1), message: message.into() }
    }

    pub(crate) fn next_line(&mut self) -> Result<&'a str, SyntaxError> {
        let line = *self
            .lines
            .get(self.pos)
            .ok_or_else(|| SyntaxError { line: self.pos + 1, message: "unexpected end of file".into() })?;
        self.pos += 1;
        Ok(line)
    }

    pub(crate) fn expect_header(&mut self, kind: FileKind) -> Result<(), SyntaxError> {
        let line = self.next_line()?;
        if line != kind.header() {
            return Err(self.error(format!("expected header `{}`", kind.header())));
        }
        Ok(())
    }

    pub(crate) fn tokens(&mut self) -> Result<Vec<&'a str>, SyntaxError> {
        Ok(self.next_line()?.split_whitespace().collect())
    }

    /// Next line parsed as exactly `count` unsigned integers.
    pub(crate) fn usizes(&mut self, count: usize) -> Result<Vec<usize>, SyntaxError> {
        let toks = self.tokens()?;
        if toks.len() != count {
            return Err(self.error(format!("expected {count} integers, found {}", toks.len())));
        }
        toks.iter()
            .map(|t| parse_usize(t).ok_or_else(|| self.error(format!("`{t}` is not a non-negative integer"))))
            .collect()
    }

    pub(crate) fn finish(&self) -> Result<(), SyntaxError> {
        if self.pos < self.lines.len() {
            return Err(SyntaxError { line: self.pos + 1, message: "trailing content".into() });
        }
        Ok(())
    }
}

pub(crate) fn parse_usize(token: &str) -> Option<usize> {
    if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    token.parse().ok()
}

pub(crate) fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
