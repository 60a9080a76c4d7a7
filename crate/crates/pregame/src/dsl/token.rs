//! Source spans, tokens, and the tokenizer.

use std::fmt;

use super::{DslError, DslErrorKind};

/// Byte range plus the 1-based line and column of its start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(start: usize, end: usize, line: u32, col: u32) -> Self {
        Span {
            start,
            end,
            line,
            col,
        }
    }

    /// The smallest span covering both.
    pub fn to(self, other: Span) -> Span {
        Span {
            start: self.start.min(other.start),
            end: self.end.max(other.end),
            line: self.line,
            col: self.col,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Keyword,
    Ident,
    Number,
    Symbol,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub span: Span,
}

const KEYWORDS: &[&str] = &[
    "set",
    "fun",
    "player",
    "game",
    "feedback",
    "argmax",
    "maxq",
    "selection",
    "quantifier",
    "tau",
    "copy",
    "delete",
    "id",
    "swap",
];

/// Span pointing just past the end of the source.
pub fn eof_span(source: &str) -> Span {
    let mut line = 1u32;
    let mut col = 1u32;
    for c in source.chars() {
        if c == '\n' {
            line += 1;
            col = 1;
        } else {
            col += 1;
        }
    }
    Span::new(source.len(), source.len(), line, col)
}

/// Splits a source into tokens. `--` starts a comment running to the end of
/// the line; whitespace only separates.
pub fn tokenize(source: &str) -> Result<Vec<Token>, DslError> {
    let mut tokens = Vec::new();
    let chars: Vec<(usize, char)> = source.char_indices().collect();
    let mut i = 0usize;
    let mut line = 1u32;
    let mut col = 1u32;

    let advance = |c: char, line: &mut u32, col: &mut u32| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };

    while i < chars.len() {
        let (pos, c) = chars[i];
        let tok_line = line;
        let tok_col = col;

        if c.is_whitespace() {
            advance(c, &mut line, &mut col);
            i += 1;
            continue;
        }

        // Comments: `--` to end of line.
        if c == '-' && i + 1 < chars.len() && chars[i + 1].1 == '-' {
            while i < chars.len() && chars[i].1 != '\n' {
                advance(chars[i].1, &mut line, &mut col);
                i += 1;
            }
            continue;
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let start = pos;
            let mut end = pos + c.len_utf8();
            while i + 1 < chars.len() {
                let (p, d) = chars[i + 1];
                if d.is_ascii_alphanumeric() || d == '_' {
                    advance(chars[i].1, &mut line, &mut col);
                    i += 1;
                    end = p + d.len_utf8();
                } else {
                    break;
                }
            }
            advance(chars[i].1, &mut line, &mut col);
            i += 1;
            let text = &source[start..end];
            let kind = if KEYWORDS.contains(&text) {
                TokenKind::Keyword
            } else {
                TokenKind::Ident
            };
            tokens.push(Token {
                kind,
                text: text.to_string(),
                span: Span::new(start, end, tok_line, tok_col),
            });
            continue;
        }

        // Numbers: optionally signed integers, or exact fractions `p/q`.
        let starts_number = c.is_ascii_digit()
            || (c == '-' && i + 1 < chars.len() && chars[i + 1].1.is_ascii_digit());
        if starts_number {
            let start = pos;
            let mut end = pos + c.len_utf8();
            let mut seen_slash = false;
            while i + 1 < chars.len() {
                let (p, d) = chars[i + 1];
                let take = d.is_ascii_digit()
                    || (d == '/'
                        && !seen_slash
                        && i + 2 < chars.len()
                        && chars[i + 2].1.is_ascii_digit());
                if take {
                    if d == '/' {
                        seen_slash = true;
                    }
                    advance(chars[i].1, &mut line, &mut col);
                    i += 1;
                    end = p + d.len_utf8();
                } else {
                    break;
                }
            }
            advance(chars[i].1, &mut line, &mut col);
            i += 1;
            tokens.push(Token {
                kind: TokenKind::Number,
                text: source[start..end].to_string(),
                span: Span::new(start, end, tok_line, tok_col),
            });
            continue;
        }

        // Multi-character symbols first.
        let two = if i + 1 < chars.len() {
            Some(chars[i + 1].1)
        } else {
            None
        };
        let symbol: Option<&str> = match (c, two) {
            ('|', Some('|')) => Some("||"),
            ('^', Some('*')) => Some("^*"),
            ('-', Some('>')) => Some("->"),
            ('=', _) => Some("="),
            ('{', _) => Some("{"),
            ('}', _) => Some("}"),
            (',', _) => Some(","),
            (';', _) => Some(";"),
            ('(', _) => Some("("),
            (')', _) => Some(")"),
            ('[', _) => Some("["),
            (']', _) => Some("]"),
            ('*', _) => Some("*"),
            (':', _) => Some(":"),
            _ => None,
        };
        match symbol {
            Some(sym) => {
                let end = pos + sym.len();
                for _ in 0..sym.chars().count() {
                    advance(chars[i].1, &mut line, &mut col);
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Symbol,
                    text: sym.to_string(),
                    span: Span::new(pos, end, tok_line, tok_col),
                });
            }
            None => {
                return Err(DslError::new(
                    DslErrorKind::Lex,
                    Span::new(pos, pos + c.len_utf8(), tok_line, tok_col),
                    format!("illegal character `{c}`"),
                ));
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_declaration_token_kinds() {
        let toks = tokenize("set X = {C, D}").unwrap();
        let kinds: Vec<TokenKind> = toks.iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            [
                TokenKind::Keyword,
                TokenKind::Ident,
                TokenKind::Symbol,
                TokenKind::Symbol,
                TokenKind::Ident,
                TokenKind::Symbol,
                TokenKind::Ident,
                TokenKind::Symbol,
            ]
        );
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["set", "X", "=", "{", "C", ",", "D", "}"]);
    }

    #[test]
    fn empty_source_has_no_tokens() {
        assert!(tokenize("").unwrap().is_empty());
    }

    #[test]
    fn game_declaration_spans() {
        let src = "game g = P1 || P2";
        let toks = tokenize(src).unwrap();
        assert_eq!(toks.len(), 6);
        for t in &toks {
            assert_eq!(&src[t.span.start..t.span.end], t.text);
        }
        assert_eq!(toks[4].text, "||");
        assert_eq!(toks[4].span.col, 13);
        assert_eq!(toks[5].span.col, 16);
    }

    #[test]
    fn comments_and_negative_numbers() {
        let toks = tokenize("-- note\nset U = {-1, 1/2}").unwrap();
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["set", "U", "=", "{", "-1", ",", "1/2", "}"]);
        assert_eq!(toks[0].span.line, 2);
        assert_eq!(toks[4].kind, TokenKind::Number);
        assert_eq!(toks[6].kind, TokenKind::Number);
    }

    #[test]
    fn arrow_and_dual_symbols() {
        let toks = tokenize("q^* -> x").unwrap();
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["q", "^*", "->", "x"]);
    }

    #[test]
    fn illegal_character_is_a_lex_error() {
        let err = tokenize("set X = {a %}").unwrap_err();
        assert_eq!(err.kind, DslErrorKind::Lex);
        assert_eq!(err.span.col, 12);
    }

    #[test]
    fn stray_minus_is_a_lex_error() {
        assert!(tokenize("a - b").is_err());
    }
}
