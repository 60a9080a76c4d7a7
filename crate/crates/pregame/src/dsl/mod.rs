//! The textual string-diagram language.
//!
//! A `.pregame` file declares finite sets, total functions as tables,
//! players with a rationality mode, and games wired from them with `;`
//! (left-to-right sequencing) and `||` (side-by-side tensor). `g ; h` feeds
//! `g` into `h`, matching the top-to-bottom reading of the diagrams.
//!
//! The pipeline is [`tokenize`] → [`parse`] → [`typecheck`] → [`elaborate`];
//! [`check`] runs the first three. Every error carries a span into the
//! source.

pub mod ast;
mod elaborate;
mod parser;
mod render;
mod token;
mod typecheck;

pub use elaborate::elaborate;
pub use parser::{parse, parse_tokens};
pub use render::render_dot;
pub use token::{eof_span, tokenize, Span, Token, TokenKind};
pub use typecheck::{
    typecheck, CheckedPlayer, CheckedProgram, PlayerRule, TypedExpr, TypedNode,
};

use std::fmt;

use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DslErrorKind {
    Lex,
    Parse,
    UnknownName,
    DuplicateDecl,
    InterfaceMismatch,
    /// A name exists but cannot be used in this position.
    InvalidReference,
    /// A table or literal is malformed: wrong arity, unknown element,
    /// duplicate or missing entry.
    BadLiteral,
    /// An error raised while building the underlying game.
    Semantic,
}

/// A diagnostic with a position in the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DslError {
    pub kind: DslErrorKind,
    pub span: Span,
    pub message: String,
    /// For parse errors, the tokens that would have been accepted.
    pub expected: Vec<String>,
}

impl DslError {
    pub fn new(kind: DslErrorKind, span: Span, message: String) -> Self {
        DslError {
            kind,
            span,
            message,
            expected: Vec::new(),
        }
    }

    pub fn with_expected(mut self, expected: Vec<String>) -> Self {
        self.expected = expected;
        self
    }

    pub fn semantic(span: Span, err: Error) -> Self {
        DslError::new(DslErrorKind::Semantic, span, err.to_string())
    }
}

impl fmt::Display for DslError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for DslError {}

/// Tokenize, parse and typecheck a source file.
pub fn check(source: &str) -> Result<CheckedProgram, DslError> {
    typecheck(&parse(source)?)
}
