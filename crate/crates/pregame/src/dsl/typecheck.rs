//! Name resolution and interface checking.
//!
//! Declarations are processed in file order; a name must be declared before
//! it is referenced. Every game body is annotated with the domain and
//! codomain interface of each node.

use std::collections::BTreeMap;

use crate::agents::parse_rational;
use crate::core::Interface;
use crate::finite::{count_functions, FinFun, FinSet, FunctionIter, Ports, Tuple};

use super::ast::*;
use super::token::Span;
use super::{DslError, DslErrorKind};

/// Literal selection and quantifier tables would need one row per
/// continuation; beyond this many rows they are not writable anyway.
const LITERAL_TABLE_CAP: u128 = 10_000;

#[derive(Clone, Debug)]
pub struct CheckedProgram {
    pub sets: BTreeMap<String, FinSet>,
    pub funs: BTreeMap<String, FinFun>,
    pub players: BTreeMap<String, CheckedPlayer>,
    /// Game declarations in file order.
    pub games: Vec<(String, TypedExpr)>,
}

impl CheckedProgram {
    pub fn game(&self, name: &str) -> Option<&TypedExpr> {
        self.games
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
    }
}

#[derive(Clone, Debug)]
pub struct CheckedPlayer {
    pub observes: Ports,
    pub chooses: Ports,
    pub feedback: Ports,
    pub rule: PlayerRule,
}

#[derive(Clone, Debug)]
pub enum PlayerRule {
    /// Maximize the given 0-based feedback coordinate; the chosen move must
    /// attain the maximum.
    Argmax { coord: usize },
    /// Maximize the given coordinate; the reached outcome must attain the
    /// maximum.
    MaxQuantifier { coord: usize },
    /// Explicit selection table indexed by continuation rank.
    Selection { table: Vec<Vec<Tuple>> },
    /// Explicit quantifier table indexed by continuation rank.
    Quantifier { table: Vec<Vec<Tuple>> },
}

/// A game expression annotated with interfaces at every node.
#[derive(Clone, Debug)]
pub struct TypedExpr {
    pub node: TypedNode,
    pub domain: Interface,
    pub codomain: Interface,
    pub span: Span,
}

#[derive(Clone, Debug)]
pub enum TypedNode {
    Player(String),
    Fun(String),
    DualFun(String),
    GameRef(String),
    Tau(Ports),
    Copy(Ports),
    CopyDual(Ports),
    Delete(Ports),
    DeleteDual(Ports),
    /// Identity on the node's (equal) domain and codomain.
    Id,
    Swap(Ports, Ports),
    Compose(Box<TypedExpr>, Box<TypedExpr>),
    Tensor(Box<TypedExpr>, Box<TypedExpr>),
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum NameKind {
    Set,
    Fun,
    Player,
    Game,
}

impl NameKind {
    fn describe(self) -> &'static str {
        match self {
            NameKind::Set => "a set",
            NameKind::Fun => "a computation",
            NameKind::Player => "a player",
            NameKind::Game => "a game",
        }
    }
}

struct Checker {
    sets: BTreeMap<String, FinSet>,
    funs: BTreeMap<String, FinFun>,
    players: BTreeMap<String, CheckedPlayer>,
    games: Vec<(String, TypedExpr)>,
    names: BTreeMap<String, NameKind>,
}

/// Checks a parsed program, producing resolved tables and typed game
/// bodies.
pub fn typecheck(program: &Program) -> Result<CheckedProgram, DslError> {
    let mut c = Checker {
        sets: BTreeMap::new(),
        funs: BTreeMap::new(),
        players: BTreeMap::new(),
        games: Vec::new(),
        names: BTreeMap::new(),
    };
    for decl in &program.decls {
        match decl {
            Decl::Set(d) => c.set_decl(d)?,
            Decl::Fun(d) => c.fun_decl(d)?,
            Decl::Player(d) => c.player_decl(d)?,
            Decl::Game(d) => c.game_decl(d)?,
        }
    }
    Ok(CheckedProgram {
        sets: c.sets,
        funs: c.funs,
        players: c.players,
        games: c.games,
    })
}

impl Checker {
    fn declare(&mut self, name: &str, kind: NameKind, span: Span) -> Result<(), DslError> {
        if self.names.contains_key(name) {
            return Err(DslError::new(
                DslErrorKind::DuplicateDecl,
                span,
                format!("`{name}` is already declared"),
            ));
        }
        self.names.insert(name.to_string(), kind);
        Ok(())
    }

    fn set_decl(&mut self, d: &SetDecl) -> Result<(), DslError> {
        self.declare(&d.name, NameKind::Set, d.span)?;
        for (i, (label, span)) in d.elements.iter().enumerate() {
            if d.elements[..i].iter().any(|(prev, _)| prev == label) {
                return Err(DslError::new(
                    DslErrorKind::BadLiteral,
                    *span,
                    format!("duplicate element `{label}` in set `{}`", d.name),
                ));
            }
        }
        let set = FinSet::new(d.name.clone(), d.elements.iter().map(|(l, _)| l.clone()))
            .expect("duplicates were just rejected");
        self.sets.insert(d.name.clone(), set);
        Ok(())
    }

    fn resolve_type(&self, ty: &TypeExpr) -> Result<Ports, DslError> {
        let mut sets = Vec::with_capacity(ty.names.len());
        for (name, span) in &ty.names {
            match self.sets.get(name) {
                Some(s) => sets.push(s.clone()),
                None => {
                    let msg = match self.names.get(name) {
                        Some(kind) => {
                            format!("`{name}` is {}, not a set", kind.describe())
                        }
                        None => format!("unknown set `{name}`"),
                    };
                    return Err(DslError::new(DslErrorKind::UnknownName, *span, msg));
                }
            }
        }
        Ok(Ports::new(sets))
    }

    fn resolve_tuple(&self, ports: &Ports, lit: &TupleLit) -> Result<Tuple, DslError> {
        if lit.items.len() != ports.len() {
            return Err(DslError::new(
                DslErrorKind::BadLiteral,
                lit.span,
                format!(
                    "expected {} components over {}, found {}",
                    ports.len(),
                    ports.product_label(),
                    lit.items.len()
                ),
            ));
        }
        let mut components = Vec::with_capacity(lit.items.len());
        for ((label, span), set) in lit.items.iter().zip(ports.sets()) {
            match set.index_of(label) {
                Some(i) => components.push(i),
                None => {
                    return Err(DslError::new(
                        DslErrorKind::BadLiteral,
                        *span,
                        format!("element `{label}` is not in set `{}`", set.name()),
                    ));
                }
            }
        }
        Ok(Tuple::new(components))
    }

    /// Builds a total function from literal rows, rejecting duplicates and
    /// gaps.
    fn build_table(
        &self,
        dom: &Ports,
        cod: &Ports,
        rows: &[(TupleLit, TupleLit)],
        whole: Span,
    ) -> Result<FinFun, DslError> {
        let size = dom.tuple_count();
        if size > LITERAL_TABLE_CAP {
            return Err(DslError::new(
                DslErrorKind::BadLiteral,
                whole,
                format!("a total table over {} needs {size} rows", dom.product_label()),
            ));
        }
        let mut slots: Vec<Option<Tuple>> = vec![None; size as usize];
        for (from, to) in rows {
            let x = self.resolve_tuple(dom, from)?;
            let y = self.resolve_tuple(cod, to)?;
            let slot = &mut slots[dom.rank(&x)];
            if slot.is_some() {
                return Err(DslError::new(
                    DslErrorKind::BadLiteral,
                    from.span,
                    format!("duplicate entry for {}", dom.tuple_label(&x)),
                ));
            }
            *slot = Some(y);
        }
        if let Some(missing) = slots.iter().position(|s| s.is_none()) {
            return Err(DslError::new(
                DslErrorKind::BadLiteral,
                whole,
                format!(
                    "table is not total: missing an entry for {}",
                    dom.tuple_label(&dom.unrank(missing))
                ),
            ));
        }
        let table = slots.into_iter().map(|s| s.unwrap()).collect();
        Ok(FinFun::new(dom.clone(), cod.clone(), table)
            .expect("totality and membership were just checked"))
    }

    fn fun_decl(&mut self, d: &FunDecl) -> Result<(), DslError> {
        self.declare(&d.name, NameKind::Fun, d.span)?;
        let dom = self.resolve_type(&d.dom)?;
        let cod = self.resolve_type(&d.cod)?;
        let f = self.build_table(&dom, &cod, &d.entries, d.span)?;
        self.funs.insert(d.name.clone(), f);
        Ok(())
    }

    fn numeric_coord(
        &self,
        feedback: &Ports,
        coord: &Option<(usize, Span)>,
        feedback_span: Span,
        mode: &str,
    ) -> Result<usize, DslError> {
        if feedback.is_empty() {
            return Err(DslError::new(
                DslErrorKind::BadLiteral,
                feedback_span,
                format!("{mode} needs a numeric feedback port"),
            ));
        }
        let coord = match coord {
            Some((c, span)) => {
                if *c == 0 || *c > feedback.len() {
                    return Err(DslError::new(
                        DslErrorKind::BadLiteral,
                        *span,
                        format!(
                            "coordinate {c} is out of range 1..={}",
                            feedback.len()
                        ),
                    ));
                }
                *c - 1
            }
            None => {
                if feedback.len() == 1 {
                    0
                } else {
                    return Err(DslError::new(
                        DslErrorKind::BadLiteral,
                        feedback_span,
                        format!(
                            "{mode} needs a coordinate (1-based) when the feedback has {} ports",
                            feedback.len()
                        ),
                    ));
                }
            }
        };
        let set = &feedback.sets()[coord];
        for e in set.elements() {
            if parse_rational(e).is_err() {
                return Err(DslError::new(
                    DslErrorKind::BadLiteral,
                    feedback_span,
                    format!(
                        "{mode} needs rational payoffs, but `{}` contains `{e}`",
                        set.name()
                    ),
                ));
            }
        }
        Ok(coord)
    }

    /// Resolves literal entries into a table indexed by continuation rank,
    /// requiring exactly one row per continuation.
    fn literal_table(
        &self,
        chooses: &Ports,
        feedback: &Ports,
        entries: &[LiteralEntry],
        result_ports: &Ports,
        whole: Span,
    ) -> Result<Vec<Vec<Tuple>>, DslError> {
        let count = count_functions(chooses, feedback);
        if count > LITERAL_TABLE_CAP {
            return Err(DslError::new(
                DslErrorKind::BadLiteral,
                whole,
                format!("a literal table would need {count} continuation entries"),
            ));
        }
        let mut slots: Vec<Option<Vec<Tuple>>> = vec![None; count as usize];
        for entry in entries {
            let k = self.build_table(chooses, feedback, &entry.table, entry.span)?;
            let rank = k.function_rank() as usize;
            if slots[rank].is_some() {
                return Err(DslError::new(
                    DslErrorKind::BadLiteral,
                    entry.span,
                    "duplicate entry for this continuation".to_string(),
                ));
            }
            let chosen = entry
                .chosen
                .iter()
                .map(|t| self.resolve_tuple(result_ports, t))
                .collect::<Result<Vec<_>, _>>()?;
            slots[rank] = Some(chosen);
        }
        if let Some(missing) = slots.iter().position(|s| s.is_none()) {
            let witness = FunctionIter::new(chooses.clone(), feedback.clone())
                .nth(missing)
                .expect("missing index is within the continuation count");
            return Err(DslError::new(
                DslErrorKind::BadLiteral,
                whole,
                format!(
                    "literal is not total: missing the continuation {{{}}}",
                    witness.mapping_label()
                ),
            ));
        }
        Ok(slots.into_iter().map(|s| s.unwrap()).collect())
    }

    fn player_decl(&mut self, d: &PlayerDecl) -> Result<(), DslError> {
        self.declare(&d.name, NameKind::Player, d.span)?;
        let observes = self.resolve_type(&d.dom)?;
        let chooses = self.resolve_type(&d.cod)?;
        let feedback = self.resolve_type(&d.feedback)?;
        if chooses.tuple_count() == 0 {
            return Err(DslError::new(
                DslErrorKind::BadLiteral,
                d.cod.span,
                "a player cannot choose from an empty type".to_string(),
            ));
        }
        let rule = match &d.mode {
            PlayerMode::Argmax { coord } => PlayerRule::Argmax {
                coord: self.numeric_coord(&feedback, coord, d.feedback.span, "argmax")?,
            },
            PlayerMode::MaxQuantifier { coord } => PlayerRule::MaxQuantifier {
                coord: self.numeric_coord(&feedback, coord, d.feedback.span, "maxq")?,
            },
            PlayerMode::Selection(entries) => PlayerRule::Selection {
                table: self.literal_table(&chooses, &feedback, entries, &chooses, d.span)?,
            },
            PlayerMode::Quantifier(entries) => PlayerRule::Quantifier {
                table: self.literal_table(&chooses, &feedback, entries, &feedback, d.span)?,
            },
        };
        self.players.insert(
            d.name.clone(),
            CheckedPlayer {
                observes,
                chooses,
                feedback,
                rule,
            },
        );
        Ok(())
    }

    fn game_decl(&mut self, d: &GameDecl) -> Result<(), DslError> {
        self.declare(&d.name, NameKind::Game, d.span)?;
        let body = self.expr(&d.body)?;
        self.games.push((d.name.clone(), body));
        Ok(())
    }

    fn expr(&self, e: &Expr) -> Result<TypedExpr, DslError> {
        match e {
            Expr::Ref { name, span } => self.reference(name, *span),
            Expr::DualRef { name, span } => match self.names.get(name) {
                Some(NameKind::Fun) => {
                    let f = &self.funs[name];
                    Ok(TypedExpr {
                        node: TypedNode::DualFun(name.clone()),
                        domain: Interface::new(Ports::empty(), f.cod().clone()),
                        codomain: Interface::new(Ports::empty(), f.dom().clone()),
                        span: *span,
                    })
                }
                Some(kind) => Err(DslError::new(
                    DslErrorKind::InvalidReference,
                    *span,
                    format!(
                        "only computations have duals; `{name}` is {}",
                        kind.describe()
                    ),
                )),
                None => Err(DslError::new(
                    DslErrorKind::UnknownName,
                    *span,
                    format!("unknown name `{name}`"),
                )),
            },
            Expr::Tau { ty, span } => {
                let p = self.resolve_type(ty)?;
                Ok(TypedExpr {
                    node: TypedNode::Tau(p.clone()),
                    domain: Interface::new(p.clone(), p),
                    codomain: Interface::unit(),
                    span: *span,
                })
            }
            Expr::Copy { ty, dual, span } => {
                let p = self.resolve_type(ty)?;
                let doubled = p.concat(&p);
                let (node, domain, codomain) = if *dual {
                    (
                        TypedNode::CopyDual(p.clone()),
                        Interface::new(Ports::empty(), doubled),
                        Interface::new(Ports::empty(), p),
                    )
                } else {
                    (
                        TypedNode::Copy(p.clone()),
                        Interface::new(p, Ports::empty()),
                        Interface::new(doubled, Ports::empty()),
                    )
                };
                Ok(TypedExpr {
                    node,
                    domain,
                    codomain,
                    span: *span,
                })
            }
            Expr::Delete { ty, dual, span } => {
                let p = self.resolve_type(ty)?;
                let (node, domain, codomain) = if *dual {
                    (
                        TypedNode::DeleteDual(p.clone()),
                        Interface::unit(),
                        Interface::new(Ports::empty(), p),
                    )
                } else {
                    (
                        TypedNode::Delete(p.clone()),
                        Interface::new(p, Ports::empty()),
                        Interface::unit(),
                    )
                };
                Ok(TypedExpr {
                    node,
                    domain,
                    codomain,
                    span: *span,
                })
            }
            Expr::Id {
                cov,
                contra,
                dual,
                span,
            } => {
                let cov_ports = self.resolve_type(cov)?;
                let contra_ports = match contra {
                    Some(c) => self.resolve_type(c)?,
                    None => Ports::empty(),
                };
                let i = if *dual {
                    Interface::new(Ports::empty(), cov_ports)
                } else {
                    Interface::new(cov_ports, contra_ports)
                };
                Ok(TypedExpr {
                    node: TypedNode::Id,
                    domain: i.clone(),
                    codomain: i,
                    span: *span,
                })
            }
            Expr::Swap { left, right, span } => {
                let a = self.resolve_type(left)?;
                let b = self.resolve_type(right)?;
                Ok(TypedExpr {
                    node: TypedNode::Swap(a.clone(), b.clone()),
                    domain: Interface::new(a.concat(&b), Ports::empty()),
                    codomain: Interface::new(b.concat(&a), Ports::empty()),
                    span: *span,
                })
            }
            Expr::Compose { first, then, span } => {
                let f = self.expr(first)?;
                let t = self.expr(then)?;
                if f.codomain != t.domain {
                    return Err(DslError::new(
                        DslErrorKind::InterfaceMismatch,
                        then.span(),
                        format!(
                            "interface mismatch: left side yields {}, right side expects {}",
                            f.codomain, t.domain
                        ),
                    ));
                }
                Ok(TypedExpr {
                    domain: f.domain.clone(),
                    codomain: t.codomain.clone(),
                    node: TypedNode::Compose(Box::new(f), Box::new(t)),
                    span: *span,
                })
            }
            Expr::Tensor { left, right, span } => {
                let l = self.expr(left)?;
                let r = self.expr(right)?;
                Ok(TypedExpr {
                    domain: l.domain.tensor(&r.domain),
                    codomain: l.codomain.tensor(&r.codomain),
                    node: TypedNode::Tensor(Box::new(l), Box::new(r)),
                    span: *span,
                })
            }
        }
    }

    fn reference(&self, name: &str, span: Span) -> Result<TypedExpr, DslError> {
        match self.names.get(name) {
            Some(NameKind::Player) => {
                let p = &self.players[name];
                Ok(TypedExpr {
                    node: TypedNode::Player(name.to_string()),
                    domain: Interface::new(p.observes.clone(), Ports::empty()),
                    codomain: Interface::new(p.chooses.clone(), p.feedback.clone()),
                    span,
                })
            }
            Some(NameKind::Fun) => {
                let f = &self.funs[name];
                Ok(TypedExpr {
                    node: TypedNode::Fun(name.to_string()),
                    domain: Interface::new(f.dom().clone(), Ports::empty()),
                    codomain: Interface::new(f.cod().clone(), Ports::empty()),
                    span,
                })
            }
            Some(NameKind::Game) => {
                let body = self
                    .games
                    .iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, e)| e)
                    .expect("declared games are recorded");
                Ok(TypedExpr {
                    node: TypedNode::GameRef(name.to_string()),
                    domain: body.domain.clone(),
                    codomain: body.codomain.clone(),
                    span,
                })
            }
            Some(NameKind::Set) => Err(DslError::new(
                DslErrorKind::InvalidReference,
                span,
                format!("`{name}` is a set, not a game expression"),
            )),
            None => Err(DslError::new(
                DslErrorKind::UnknownName,
                span,
                format!("unknown name `{name}`"),
            )),
        }
    }
}
