//! Syntax tree for the surface language, with a canonical printer.

use std::fmt;

use super::token::Span;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub decls: Vec<Decl>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Set(SetDecl),
    Fun(FunDecl),
    Player(PlayerDecl),
    Game(GameDecl),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetDecl {
    pub name: String,
    pub elements: Vec<(String, Span)>,
    pub span: Span,
}

/// A flat product of declared set names; empty means the unit type `1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeExpr {
    pub names: Vec<(String, Span)>,
    pub span: Span,
}

/// A tuple of element labels, e.g. `(C,D)` or a bare `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleLit {
    pub items: Vec<(String, Span)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunDecl {
    pub name: String,
    pub dom: TypeExpr,
    pub cod: TypeExpr,
    pub entries: Vec<(TupleLit, TupleLit)>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayerDecl {
    pub name: String,
    pub dom: TypeExpr,
    pub cod: TypeExpr,
    pub feedback: TypeExpr,
    pub mode: PlayerMode,
    pub span: Span,
}

/// How a player judges contexts. The coordinate on `argmax`/`maxq` is
/// 1-based and selects which feedback port the player maximizes; it may be
/// omitted when the feedback is a single port.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlayerMode {
    Argmax { coord: Option<(usize, Span)> },
    MaxQuantifier { coord: Option<(usize, Span)> },
    Selection(Vec<LiteralEntry>),
    Quantifier(Vec<LiteralEntry>),
}

/// One row of a selection or quantifier literal: a full continuation table
/// mapped to the subset it selects.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralEntry {
    pub table: Vec<(TupleLit, TupleLit)>,
    pub chosen: Vec<TupleLit>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameDecl {
    pub name: String,
    pub body: Expr,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// A declared player, computation, or game.
    Ref { name: String, span: Span },
    /// The backward lift `f^*` of a declared computation.
    DualRef { name: String, span: Span },
    Tau { ty: TypeExpr, span: Span },
    Copy { ty: TypeExpr, dual: bool, span: Span },
    Delete { ty: TypeExpr, dual: bool, span: Span },
    Id { cov: TypeExpr, contra: Option<TypeExpr>, dual: bool, span: Span },
    Swap { left: TypeExpr, right: TypeExpr, span: Span },
    /// Diagrammatic order: `first ; then` runs `first` into `then`.
    Compose { first: Box<Expr>, then: Box<Expr>, span: Span },
    Tensor { left: Box<Expr>, right: Box<Expr>, span: Span },
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Ref { span, .. }
            | Expr::DualRef { span, .. }
            | Expr::Tau { span, .. }
            | Expr::Copy { span, .. }
            | Expr::Delete { span, .. }
            | Expr::Id { span, .. }
            | Expr::Swap { span, .. }
            | Expr::Compose { span, .. }
            | Expr::Tensor { span, .. } => *span,
        }
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.names.is_empty() {
            write!(f, "1")
        } else {
            let names: Vec<&str> = self.names.iter().map(|(n, _)| n.as_str()).collect();
            write!(f, "{}", names.join("*"))
        }
    }
}

impl fmt::Display for TupleLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.items.len() == 1 {
            write!(f, "{}", self.items[0].0)
        } else {
            let items: Vec<&str> = self.items.iter().map(|(n, _)| n.as_str()).collect();
            write!(f, "({})", items.join(","))
        }
    }
}

// Printing preserves the tree: chains flatten only along the associativity
// the parser already applies, so print-then-parse is the identity on ASTs
// up to spans.

fn print_compose_level(e: &Expr, out: &mut String) {
    match e {
        Expr::Compose { first, then, .. } => {
            print_compose_level(first, out);
            out.push_str(" ; ");
            print_tensor_level(then, out);
        }
        _ => print_tensor_level(e, out),
    }
}

fn print_tensor_level(e: &Expr, out: &mut String) {
    match e {
        Expr::Tensor { left, right, .. } => {
            print_tensor_level(left, out);
            out.push_str(" || ");
            print_atom_level(right, out);
        }
        Expr::Compose { .. } => {
            out.push('(');
            print_compose_level(e, out);
            out.push(')');
        }
        _ => print_atom_level(e, out),
    }
}

fn print_atom_level(e: &Expr, out: &mut String) {
    match e {
        Expr::Ref { name, .. } => out.push_str(name),
        Expr::DualRef { name, .. } => {
            out.push_str(name);
            out.push_str("^*");
        }
        Expr::Tau { ty, .. } => {
            out.push_str(&format!("tau[{ty}]"));
        }
        Expr::Copy { ty, dual, .. } => {
            out.push_str(&format!("copy[{ty}]"));
            if *dual {
                out.push_str("^*");
            }
        }
        Expr::Delete { ty, dual, .. } => {
            out.push_str(&format!("delete[{ty}]"));
            if *dual {
                out.push_str("^*");
            }
        }
        Expr::Id {
            cov, contra, dual, ..
        } => {
            match contra {
                Some(contra) => out.push_str(&format!("id[{cov},{contra}]")),
                None => out.push_str(&format!("id[{cov}]")),
            }
            if *dual {
                out.push_str("^*");
            }
        }
        Expr::Swap { left, right, .. } => {
            out.push_str(&format!("swap[{left},{right}]"));
        }
        Expr::Compose { .. } | Expr::Tensor { .. } => {
            out.push('(');
            print_compose_level(e, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        print_compose_level(self, &mut s);
        write!(f, "{s}")
    }
}

fn print_map_entries(entries: &[(TupleLit, TupleLit)], indent: &str, out: &mut String) {
    for (i, (from, to)) in entries.iter().enumerate() {
        out.push_str(indent);
        out.push_str(&format!("{from} -> {to}"));
        if i + 1 < entries.len() {
            out.push(',');
        }
        out.push('\n');
    }
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Set(s) => {
                let elems: Vec<&str> = s.elements.iter().map(|(e, _)| e.as_str()).collect();
                write!(f, "set {} = {{{}}}", s.name, elems.join(", "))
            }
            Decl::Fun(d) => {
                let mut body = String::new();
                print_map_entries(&d.entries, "  ", &mut body);
                write!(
                    f,
                    "fun {} : {} -> {} = {{\n{}}}",
                    d.name, d.dom, d.cod, body
                )
            }
            Decl::Player(p) => {
                write!(
                    f,
                    "player {} : {} -> {} feedback {} ",
                    p.name, p.dom, p.cod, p.feedback
                )?;
                match &p.mode {
                    PlayerMode::Argmax { coord } => match coord {
                        Some((c, _)) => write!(f, "argmax {c}"),
                        None => write!(f, "argmax"),
                    },
                    PlayerMode::MaxQuantifier { coord } => match coord {
                        Some((c, _)) => write!(f, "maxq {c}"),
                        None => write!(f, "maxq"),
                    },
                    PlayerMode::Selection(entries) | PlayerMode::Quantifier(entries) => {
                        let kw = if matches!(p.mode, PlayerMode::Selection(_)) {
                            "selection"
                        } else {
                            "quantifier"
                        };
                        writeln!(f, "{kw} {{")?;
                        for (i, entry) in entries.iter().enumerate() {
                            let rows: Vec<String> = entry
                                .table
                                .iter()
                                .map(|(a, b)| format!("{a} -> {b}"))
                                .collect();
                            let chosen: Vec<String> =
                                entry.chosen.iter().map(|t| t.to_string()).collect();
                            write!(
                                f,
                                "  {{{}}} -> {{{}}}",
                                rows.join(", "),
                                chosen.join(", ")
                            )?;
                            if i + 1 < entries.len() {
                                write!(f, ",")?;
                            }
                            writeln!(f)?;
                        }
                        write!(f, "}}")
                    }
                }
            }
            Decl::Game(g) => write!(f, "game {} = {}", g.name, g.body),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
