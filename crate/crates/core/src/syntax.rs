//! Small character cursor shared by the text grammars (groups, subsets, linear
//! systems, quantum systems, polynomials).

use std::fmt;

use thiserror::Error;

/// A syntax error annotated with a 1-based line and column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub offset: usize,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

pub struct Cursor<'a> {
    text: &'a str,
    pos: Position,
}

impl<'a> Cursor<'a> {
    pub fn new(text: &'a str) -> Self {
        Self::at(text, 1, 1)
    }

    /// A cursor whose reported positions start at the given line and column.
    pub fn at(text: &'a str, line: usize, column: usize) -> Self {
        Cursor {
            text,
            pos: Position {
                offset: 0,
                line,
                column,
            },
        }
    }

    pub fn position(&self) -> Position {
        self.pos
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos.offset..]
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos.offset += c.len_utf8();
        if c == '\n' {
            self.pos.line += 1;
            self.pos.column = 1;
        } else {
            self.pos.column += 1;
        }
        Some(c)
    }

    pub fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.bump();
        }
    }

    /// Skips whitespace, then consumes `c` if it is next.
    pub fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    /// Skips whitespace and returns the next character without consuming it.
    pub fn peek_token(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek()
    }

    pub fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }

    pub fn expect_end(&mut self) -> Result<(), SyntaxError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    /// Unsigned decimal literal (after skipping whitespace).
    pub fn uint(&mut self) -> Result<u64, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let digits: String = self
            .rest()
            .chars()
            .take_while(char::is_ascii_digit)
            .collect();
        if digits.is_empty() {
            return Err(self.unexpected("an integer"));
        }
        for _ in 0..digits.len() {
            self.bump();
        }
        digits
            .parse()
            .map_err(|_| error_at(start, format!("integer literal `{digits}` is too large")))
    }

    /// Decimal digits as a string, for arbitrary-precision literals.
    pub fn digits(&mut self) -> Result<String, SyntaxError> {
        self.skip_ws();
        let digits: String = self
            .rest()
            .chars()
            .take_while(char::is_ascii_digit)
            .collect();
        if digits.is_empty() {
            return Err(self.unexpected("an integer"));
        }
        for _ in 0..digits.len() {
            self.bump();
        }
        Ok(digits)
    }

    /// Optionally signed decimal literal.
    pub fn int(&mut self) -> Result<i64, SyntaxError> {
        let negative = self.eat('-');
        if !negative {
            self.eat('+');
        }
        let start = self.pos;
        let value = self.uint()?;
        let value = i64::try_from(value)
            .map_err(|_| error_at(start, "integer literal is too large".to_string()))?;
        Ok(if negative { -value } else { value })
    }

    /// A run of ASCII letters (after skipping whitespace); may be empty.
    pub fn word(&mut self) -> String {
        self.skip_ws();
        let word: String = self
            .rest()
            .chars()
            .take_while(char::is_ascii_alphabetic)
            .collect();
        for _ in 0..word.len() {
            self.bump();
        }
        word
    }

    pub fn error(&self, message: impl Into<String>) -> SyntaxError {
        error_at(self.pos, message.into())
    }

    pub fn unexpected(&self, expected: &str) -> SyntaxError {
        match self.peek() {
            Some(c) => self.error(format!("expected {expected}, found `{c}`")),
            None => self.error(format!("expected {expected}, found end of input")),
        }
    }
}

pub fn error_at(pos: Position, message: String) -> SyntaxError {
    SyntaxError {
        line: pos.line,
        column: pos.column,
        message,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_track_lines() {
        let mut c = Cursor::new("ab\n  cd");
        assert_eq!(c.word(), "ab");
        assert_eq!(c.word(), "cd");
        assert_eq!(c.position().line, 2);
        assert_eq!(c.position().column, 5);
    }

    #[test]
    fn error_reports_location() {
        let mut c = Cursor::new("12 x");
        assert_eq!(c.uint().unwrap(), 12);
        let err = c.expect(',').unwrap_err();
        assert_eq!((err.line, err.column), (1, 4));
    }
}
