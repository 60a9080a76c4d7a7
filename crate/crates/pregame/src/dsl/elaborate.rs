//! Lowering typed game expressions to pregames.

use crate::agents::{
    argmax_selection_on, decision_from_quantifier_capped, decision_from_selection_capped,
    max_quantifier_on, Quantifier, SelectionFunction,
};
use crate::core::{
    cocomputation, compose, computation, identity, swap_cov, teleological_unit, tensor, Caps,
    Pregame,
};
use crate::finite::{copy_fun, delete_fun};

use super::typecheck::{CheckedPlayer, CheckedProgram, PlayerRule, TypedExpr, TypedNode};
use super::{DslError, Span};

/// Builds the pregame denoted by a declared game. Leaves map to atomic
/// pregames, `;` to composition, `||` to the tensor; any error raised while
/// building carries the span of the leaf it came from.
pub fn elaborate(
    program: &CheckedProgram,
    game: &str,
    caps: &Caps,
) -> Result<Pregame, DslError> {
    let body = program.game(game).ok_or_else(|| {
        DslError::new(
            super::DslErrorKind::UnknownName,
            Span::new(0, 0, 1, 1),
            format!("no game named `{game}`"),
        )
    })?;
    expr(program, body, caps)
}

fn expr(program: &CheckedProgram, e: &TypedExpr, caps: &Caps) -> Result<Pregame, DslError> {
    let built = match &e.node {
        TypedNode::Player(name) => player(&program.players[name], caps, e.span)?,
        TypedNode::Fun(name) => computation(&program.funs[name]),
        TypedNode::DualFun(name) => cocomputation(&program.funs[name]),
        TypedNode::GameRef(name) => {
            let body = program.game(name).expect("game references are checked");
            expr(program, body, caps)?
        }
        TypedNode::Tau(p) => teleological_unit(p.clone()),
        TypedNode::Copy(p) => computation(&copy_fun(p)),
        TypedNode::CopyDual(p) => cocomputation(&copy_fun(p)),
        TypedNode::Delete(p) => computation(&delete_fun(p)),
        TypedNode::DeleteDual(p) => cocomputation(&delete_fun(p)),
        TypedNode::Id => identity(&e.domain),
        TypedNode::Swap(a, b) => swap_cov(a, b),
        TypedNode::Compose(first, then) => {
            let f = expr(program, first, caps)?;
            let t = expr(program, then, caps)?;
            compose(&t, &f).map_err(|err| DslError::semantic(e.span, err))?
        }
        TypedNode::Tensor(left, right) => {
            let l = expr(program, left, caps)?;
            let r = expr(program, right, caps)?;
            tensor(&l, &r)
        }
    };
    debug_assert_eq!(built.domain(), &e.domain);
    debug_assert_eq!(built.codomain(), &e.codomain);
    Ok(built)
}

fn player(p: &CheckedPlayer, caps: &Caps, span: Span) -> Result<Pregame, DslError> {
    let wrap = |err| DslError::semantic(span, err);
    match &p.rule {
        PlayerRule::Argmax { coord } => {
            let sel = argmax_selection_on(p.chooses.clone(), p.feedback.clone(), *coord)
                .map_err(wrap)?;
            decision_from_selection_capped(
                p.observes.clone(),
                p.chooses.clone(),
                p.feedback.clone(),
                caps.functions,
                &sel,
            )
            .map_err(wrap)
        }
        PlayerRule::MaxQuantifier { coord } => {
            let qf = max_quantifier_on(p.chooses.clone(), p.feedback.clone(), *coord)
                .map_err(wrap)?;
            decision_from_quantifier_capped(
                p.observes.clone(),
                p.chooses.clone(),
                p.feedback.clone(),
                caps.functions,
                &qf,
            )
            .map_err(wrap)
        }
        PlayerRule::Selection { table } => {
            let sel = SelectionFunction::from_table(
                p.chooses.clone(),
                p.feedback.clone(),
                table.clone(),
            )
            .map_err(wrap)?;
            decision_from_selection_capped(
                p.observes.clone(),
                p.chooses.clone(),
                p.feedback.clone(),
                caps.functions,
                &sel,
            )
            .map_err(wrap)
        }
        PlayerRule::Quantifier { table } => {
            let qf = Quantifier::from_table(
                p.chooses.clone(),
                p.feedback.clone(),
                table.clone(),
            )
            .map_err(wrap)?;
            decision_from_quantifier_capped(
                p.observes.clone(),
                p.chooses.clone(),
                p.feedback.clone(),
                caps.functions,
                &qf,
            )
            .map_err(wrap)
        }
    }
}
