//! Recursive-descent parser.
//!
//! Grammar, with `;` binding looser than `||` and both left-associative:
//!
//! ```text
//! program := decl*
//! decl    := "set" ID "=" "{" elem ("," elem)* "}"
//!          | "fun" ID ":" type "->" type "=" "{" row ((",")? row)* "}"
//!          | "player" ID ":" type "->" type "feedback" type mode
//!          | "game" ID "=" expr
//! mode    := "argmax" NUMBER? | "maxq" NUMBER?
//!          | "selection" "{" entry ((",")? entry)* "}"
//!          | "quantifier" "{" entry ((",")? entry)* "}"
//! entry   := "{" row ((",")? row)* "}" "->" "{" (tuple ("," tuple)*)? "}"
//! row     := tuple "->" tuple
//! tuple   := elem | "(" elem ("," elem)* ")"
//! elem    := ID | NUMBER
//! type    := "1" | ID ("*" ID)*
//! expr    := texpr (";" texpr)*
//! texpr   := atom ("||" atom)*
//! atom    := ID "^*"? | "tau" "[" type "]"
//!          | "copy" "[" type "]" "^*"? | "delete" "[" type "]" "^*"?
//!          | "id" "[" type ("," type)? "]" "^*"?
//!          | "swap" "[" type "," type "]" | "(" expr ")"
//! ```

use super::ast::*;
use super::token::{eof_span, tokenize, Span, Token, TokenKind};
use super::{DslError, DslErrorKind};

/// Tokenizes and parses a whole source file.
pub fn parse(source: &str) -> Result<Program, DslError> {
    let tokens = tokenize(source)?;
    parse_tokens(&tokens, eof_span(source))
}

/// Parses a token stream; `eof` is reported as the location of unexpected
/// end of input.
pub fn parse_tokens(tokens: &[Token], eof: Span) -> Result<Program, DslError> {
    let mut p = Parser {
        tokens,
        pos: 0,
        eof,
    };
    let mut decls = Vec::new();
    while !p.at_end() {
        decls.push(p.decl()?);
    }
    Ok(Program { decls })
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
    eof: Span,
}

impl<'a> Parser<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn span_here(&self) -> Span {
        self.peek().map(|t| t.span).unwrap_or(self.eof)
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            Some(t) => format!("`{}`", t.text),
            None => "end of input".to_string(),
        }
    }

    fn error(&self, expected: &[&str]) -> DslError {
        let list = expected
            .iter()
            .map(|e| format!("`{e}`"))
            .collect::<Vec<_>>()
            .join(", ");
        DslError::new(
            DslErrorKind::Parse,
            self.span_here(),
            format!("expected one of {list}, found {}", self.describe_here()),
        )
        .with_expected(expected.iter().map(|s| s.to_string()).collect())
    }

    fn bump(&mut self) -> &Token {
        let t = &self.tokens[self.pos];
        self.pos += 1;
        t
    }

    fn at_symbol(&self, sym: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Symbol && t.text == sym)
    }

    fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(t) if t.kind == TokenKind::Keyword && t.text == kw)
    }

    fn eat_symbol(&mut self, sym: &str) -> Result<Span, DslError> {
        if self.at_symbol(sym) {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[sym]))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> Result<Span, DslError> {
        if self.at_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.error(&[kw]))
        }
    }

    fn eat_ident(&mut self) -> Result<(String, Span), DslError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                let t = self.bump();
                Ok((t.text.clone(), t.span))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    /// An element label: an identifier or a number literal.
    fn eat_element(&mut self) -> Result<(String, Span), DslError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Ident || t.kind == TokenKind::Number => {
                let t = self.bump();
                Ok((t.text.clone(), t.span))
            }
            _ => Err(self.error(&["identifier", "number"])),
        }
    }

    fn decl(&mut self) -> Result<Decl, DslError> {
        if self.at_keyword("set") {
            return self.set_decl();
        }
        if self.at_keyword("fun") {
            return self.fun_decl();
        }
        if self.at_keyword("player") {
            return self.player_decl();
        }
        if self.at_keyword("game") {
            return self.game_decl();
        }
        Err(self.error(&["set", "fun", "player", "game"]))
    }

    fn set_decl(&mut self) -> Result<Decl, DslError> {
        let start = self.eat_keyword("set")?;
        let (name, _) = self.eat_ident()?;
        self.eat_symbol("=")?;
        self.eat_symbol("{")?;
        let mut elements = vec![self.eat_element()?];
        while self.at_symbol(",") {
            self.bump();
            elements.push(self.eat_element()?);
        }
        let end = self.eat_symbol("}")?;
        Ok(Decl::Set(SetDecl {
            name,
            elements,
            span: start.to(end),
        }))
    }

    fn type_expr(&mut self) -> Result<TypeExpr, DslError> {
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Number && t.text == "1" {
                let span = self.bump().span;
                return Ok(TypeExpr {
                    names: Vec::new(),
                    span,
                });
            }
        }
        let (first, first_span) = match self.peek() {
            Some(t) if t.kind == TokenKind::Ident => {
                let t = self.bump();
                (t.text.clone(), t.span)
            }
            _ => return Err(self.error(&["set name", "1"])),
        };
        let mut names = vec![(first, first_span)];
        let mut span = first_span;
        while self.at_symbol("*") {
            self.bump();
            let (n, s) = self.eat_ident()?;
            span = span.to(s);
            names.push((n, s));
        }
        Ok(TypeExpr { names, span })
    }

    fn tuple_lit(&mut self) -> Result<TupleLit, DslError> {
        if self.at_symbol("(") {
            let start = self.bump().span;
            let mut items = vec![self.eat_element()?];
            while self.at_symbol(",") {
                self.bump();
                items.push(self.eat_element()?);
            }
            let end = self.eat_symbol(")")?;
            Ok(TupleLit {
                items,
                span: start.to(end),
            })
        } else {
            let (label, span) = self.eat_element()?;
            Ok(TupleLit {
                items: vec![(label, span)],
                span,
            })
        }
    }

    /// `tuple -> tuple` rows inside braces; commas between rows optional.
    fn map_rows(&mut self) -> Result<Vec<(TupleLit, TupleLit)>, DslError> {
        self.eat_symbol("{")?;
        let mut rows = Vec::new();
        loop {
            let from = self.tuple_lit()?;
            self.eat_symbol("->")?;
            let to = self.tuple_lit()?;
            rows.push((from, to));
            if self.at_symbol(",") {
                self.bump();
                continue;
            }
            if self.at_symbol("}") {
                break;
            }
            // A new row may also start without a separating comma.
            if matches!(self.peek(), Some(t) if t.kind == TokenKind::Ident
                || t.kind == TokenKind::Number
                || (t.kind == TokenKind::Symbol && t.text == "("))
            {
                continue;
            }
            return Err(self.error(&[",", "}"]));
        }
        self.eat_symbol("}")?;
        Ok(rows)
    }

    fn fun_decl(&mut self) -> Result<Decl, DslError> {
        let start = self.eat_keyword("fun")?;
        let (name, _) = self.eat_ident()?;
        self.eat_symbol(":")?;
        let dom = self.type_expr()?;
        self.eat_symbol("->")?;
        let cod = self.type_expr()?;
        self.eat_symbol("=")?;
        let entries = self.map_rows()?;
        let span = start.to(entries.last().map(|(_, t)| t.span).unwrap_or(start));
        Ok(Decl::Fun(FunDecl {
            name,
            dom,
            cod,
            entries,
            span,
        }))
    }

    fn literal_entries(&mut self) -> Result<Vec<LiteralEntry>, DslError> {
        self.eat_symbol("{")?;
        let mut entries = Vec::new();
        loop {
            let start = self.span_here();
            let table = self.map_rows()?;
            self.eat_symbol("->")?;
            let open = self.eat_symbol("{")?;
            let mut chosen = Vec::new();
            if !self.at_symbol("}") {
                chosen.push(self.tuple_lit()?);
                while self.at_symbol(",") {
                    self.bump();
                    chosen.push(self.tuple_lit()?);
                }
            }
            let close = self.eat_symbol("}")?;
            entries.push(LiteralEntry {
                table,
                chosen,
                span: start.to(open.to(close)),
            });
            if self.at_symbol(",") {
                self.bump();
                continue;
            }
            if self.at_symbol("{") {
                continue;
            }
            break;
        }
        self.eat_symbol("}")?;
        Ok(entries)
    }

    fn coord(&mut self) -> Option<(usize, Span)> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Number => {
                if let Ok(n) = t.text.parse::<usize>() {
                    let span = t.span;
                    self.bump();
                    return Some((n, span));
                }
                None
            }
            _ => None,
        }
    }

    fn player_decl(&mut self) -> Result<Decl, DslError> {
        let start = self.eat_keyword("player")?;
        let (name, _) = self.eat_ident()?;
        self.eat_symbol(":")?;
        let dom = self.type_expr()?;
        self.eat_symbol("->")?;
        let cod = self.type_expr()?;
        self.eat_keyword("feedback")?;
        let feedback = self.type_expr()?;
        let mode = if self.at_keyword("argmax") {
            self.bump();
            PlayerMode::Argmax { coord: self.coord() }
        } else if self.at_keyword("maxq") {
            self.bump();
            PlayerMode::MaxQuantifier { coord: self.coord() }
        } else if self.at_keyword("selection") {
            self.bump();
            PlayerMode::Selection(self.literal_entries()?)
        } else if self.at_keyword("quantifier") {
            self.bump();
            PlayerMode::Quantifier(self.literal_entries()?)
        } else {
            return Err(self.error(&["argmax", "maxq", "selection", "quantifier"]));
        };
        let span = start.to(feedback.span);
        Ok(Decl::Player(PlayerDecl {
            name,
            dom,
            cod,
            feedback,
            mode,
            span,
        }))
    }

    fn game_decl(&mut self) -> Result<Decl, DslError> {
        let start = self.eat_keyword("game")?;
        let (name, _) = self.eat_ident()?;
        self.eat_symbol("=")?;
        let body = self.expr()?;
        let span = start.to(body.span());
        Ok(Decl::Game(GameDecl { name, body, span }))
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.texpr()?;
        while self.at_symbol(";") {
            self.bump();
            let rhs = self.texpr()?;
            let span = acc.span().to(rhs.span());
            acc = Expr::Compose {
                first: Box::new(acc),
                then: Box::new(rhs),
                span,
            };
        }
        Ok(acc)
    }

    fn texpr(&mut self) -> Result<Expr, DslError> {
        let mut acc = self.atom()?;
        while self.at_symbol("||") {
            self.bump();
            let rhs = self.atom()?;
            let span = acc.span().to(rhs.span());
            acc = Expr::Tensor {
                left: Box::new(acc),
                right: Box::new(rhs),
                span,
            };
        }
        Ok(acc)
    }

    fn bracketed_type(&mut self) -> Result<(TypeExpr, Span), DslError> {
        self.eat_symbol("[")?;
        let ty = self.type_expr()?;
        let close = self.eat_symbol("]")?;
        Ok((ty, close))
    }

    fn eat_dual_marker(&mut self) -> bool {
        if self.at_symbol("^*") {
            self.bump();
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<Expr, DslError> {
        if self.at_symbol("(") {
            self.bump();
            let inner = self.expr()?;
            self.eat_symbol(")")?;
            return Ok(inner);
        }
        if self.at_keyword("tau") {
            let start = self.bump().span;
            let (ty, close) = self.bracketed_type()?;
            return Ok(Expr::Tau {
                ty,
                span: start.to(close),
            });
        }
        if self.at_keyword("copy") {
            let start = self.bump().span;
            let (ty, close) = self.bracketed_type()?;
            let mut span = start.to(close);
            let dual = self.eat_dual_marker();
            if dual {
                span = span.to(close);
            }
            return Ok(Expr::Copy { ty, dual, span });
        }
        if self.at_keyword("delete") {
            let start = self.bump().span;
            let (ty, close) = self.bracketed_type()?;
            let dual = self.eat_dual_marker();
            return Ok(Expr::Delete {
                ty,
                dual,
                span: start.to(close),
            });
        }
        if self.at_keyword("id") {
            let start = self.bump().span;
            self.eat_symbol("[")?;
            let cov = self.type_expr()?;
            let contra = if self.at_symbol(",") {
                self.bump();
                Some(self.type_expr()?)
            } else {
                None
            };
            let close = self.eat_symbol("]")?;
            let dual = self.eat_dual_marker();
            if dual && contra.is_some() {
                return Err(DslError::new(
                    DslErrorKind::Parse,
                    start.to(close),
                    "the dual marker applies only to id with a single type".to_string(),
                ));
            }
            return Ok(Expr::Id {
                cov,
                contra,
                dual,
                span: start.to(close),
            });
        }
        if self.at_keyword("swap") {
            let start = self.bump().span;
            self.eat_symbol("[")?;
            let left = self.type_expr()?;
            self.eat_symbol(",")?;
            let right = self.type_expr()?;
            let close = self.eat_symbol("]")?;
            return Ok(Expr::Swap {
                left,
                right,
                span: start.to(close),
            });
        }
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Ident {
                let t = self.bump();
                let name = t.text.clone();
                let span = t.span;
                if self.at_symbol("^*") {
                    let dual_span = self.bump().span;
                    return Ok(Expr::DualRef {
                        name,
                        span: span.to(dual_span),
                    });
                }
                return Ok(Expr::Ref { name, span });
            }
        }
        Err(self.error(&[
            "name", "tau", "copy", "delete", "id", "swap", "(",
        ]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_three_stage_pipeline() {
        let src = "game pd = (P1 || P2) ; (q || copy_R^*) ; tau[R*R]";
        let prog = parse(&format!(
            "set R = {{r}}\nfun copy_R : R -> R*R = {{ r -> (r,r) }}\n{src}"
        ))
        .unwrap();
        let game = match prog.decls.last().unwrap() {
            Decl::Game(g) => g,
            other => panic!("expected a game, got {other:?}"),
        };
        // Left-associated: ((P1||P2) ; (q||copy_R^*)) ; tau[R*R]
        match &game.body {
            Expr::Compose { first, then, .. } => {
                assert!(matches!(**then, Expr::Tau { .. }));
                match &**first {
                    Expr::Compose { first, then, .. } => {
                        assert!(matches!(**first, Expr::Tensor { .. }));
                        assert!(matches!(**then, Expr::Tensor { .. }));
                    }
                    other => panic!("expected nested compose, got {other:?}"),
                }
            }
            other => panic!("expected compose chain, got {other:?}"),
        }
    }

    #[test]
    fn chains_are_left_nested() {
        let prog = parse("game g = a ; b ; c").unwrap();
        let game = match &prog.decls[0] {
            Decl::Game(g) => g,
            _ => unreachable!(),
        };
        match &game.body {
            Expr::Compose { first, then, .. } => {
                assert!(matches!(**then, Expr::Ref { ref name, .. } if name == "c"));
                assert!(matches!(**first, Expr::Compose { .. }));
            }
            _ => panic!("expected compose"),
        }
    }

    #[test]
    fn unbalanced_paren_errors_at_end_of_input() {
        let src = "game g = (a ; b";
        let err = parse(src).unwrap_err();
        assert_eq!(err.kind, DslErrorKind::Parse);
        assert_eq!(err.span.start, src.len());
        assert!(err.expected.contains(&")".to_string()));
    }

    #[test]
    fn tensor_binds_tighter_than_compose() {
        let prog = parse("game g = a || b ; c").unwrap();
        let game = match &prog.decls[0] {
            Decl::Game(g) => g,
            _ => unreachable!(),
        };
        match &game.body {
            Expr::Compose { first, .. } => {
                assert!(matches!(**first, Expr::Tensor { .. }));
            }
            _ => panic!("`;` should be the outermost operator"),
        }
    }

    #[test]
    fn roundtrip_through_printer_is_stable() {
        let src = "set X = {a, b}\nfun f : X -> X = { a -> b, b -> a }\nplayer P : 1 -> X feedback X argmax\ngame g = P ; (f || id[X]^*) ; tau[X]\n";
        let once = parse(src).unwrap().to_string();
        let twice = parse(&once).unwrap().to_string();
        assert_eq!(once, twice);
    }

    #[test]
    fn player_modes_parse() {
        let src = "set Y = {a, b}\nset R = {0, 1}\nplayer P : 1 -> Y feedback R selection {\n  {a -> 0, b -> 0} -> {a, b},\n  {a -> 0, b -> 1} -> {b},\n  {a -> 1, b -> 0} -> {a},\n  {a -> 1, b -> 1} -> {}\n}";
        let prog = parse(src).unwrap();
        match &prog.decls[2] {
            Decl::Player(p) => match &p.mode {
                PlayerMode::Selection(entries) => {
                    assert_eq!(entries.len(), 4);
                    assert!(entries[3].chosen.is_empty());
                }
                other => panic!("expected selection mode, got {other:?}"),
            },
            _ => panic!("expected player"),
        }
    }
}
