//! Rationality builders and independent oracles.
//!
//! Selection functions pick good *choices* for each continuation; quantifiers
//! pick good *attainable outcomes*. Both are multivalued and are kept
//! multivalued end to end: ties are semantically meaningful and there is no
//! tie-breaking anywhere. Payoff labels are exact rationals, never floats.
//!
//! The brute-force Nash deviation check and the optimal-profile enumeration
//! for sequential games live here as well; they are deliberately independent
//! of the game combinators so they can serve as oracles for them.

use std::sync::Arc;

use num::rational::Ratio;

use crate::core::{decision_capped, Pregame};
use crate::error::Error;
use crate::finite::{
    count_functions, enumerate_functions, enumerate_tuples, FinFun, FinSet, Ports, Tuple,
    DEFAULT_FUNCTION_CAP,
};

/// Parses an element label as an exact rational: an optionally signed
/// integer, or `numerator/denominator`.
pub fn parse_rational(label: &str) -> Result<Ratio<i64>, Error> {
    label
        .parse::<Ratio<i64>>()
        .map_err(|_| Error::NonNumericOutcome(label.to_string()))
}

fn parse_port_values(set: &FinSet) -> Result<Vec<Ratio<i64>>, Error> {
    set.elements().iter().map(|e| parse_rational(e)).collect()
}

/// A multivalued selection function `(choice → outcome) → P(choice)`.
#[derive(Clone)]
pub struct SelectionFunction {
    choice: Ports,
    outcome: Ports,
    select: Arc<dyn Fn(&FinFun) -> Vec<Tuple> + Send + Sync>,
}

impl SelectionFunction {
    pub fn new(
        choice: Ports,
        outcome: Ports,
        select: impl Fn(&FinFun) -> Vec<Tuple> + Send + Sync + 'static,
    ) -> Self {
        SelectionFunction {
            choice,
            outcome,
            select: Arc::new(select),
        }
    }

    /// A selection given by an explicit table: entry `i` is the value on
    /// the continuation of rank `i` in function enumeration order.
    pub fn from_table(
        choice: Ports,
        outcome: Ports,
        table: Vec<Vec<Tuple>>,
    ) -> Result<Self, Error> {
        let expected = count_functions(&choice, &outcome);
        if table.len() as u128 != expected {
            return Err(Error::InterfaceMismatch {
                expected: format!("{expected} continuation entries"),
                found: format!("{} continuation entries", table.len()),
            });
        }
        let table = Arc::new(table);
        let choice_check = choice.clone();
        Ok(SelectionFunction::new(choice, outcome, move |k| {
            let picked = table[k.function_rank() as usize].clone();
            debug_assert!(picked.iter().all(|t| choice_check.admits(t)));
            picked
        }))
    }

    pub fn choice(&self) -> &Ports {
        &self.choice
    }

    pub fn outcome(&self) -> &Ports {
        &self.outcome
    }

    /// The chosen subset for a continuation, in enumeration order.
    pub fn select(&self, k: &FinFun) -> Vec<Tuple> {
        debug_assert!(k.dom() == &self.choice && k.cod() == &self.outcome);
        (self.select)(k)
    }
}

/// A multivalued quantifier `(choice → outcome) → P(outcome)`.
#[derive(Clone)]
pub struct Quantifier {
    choice: Ports,
    outcome: Ports,
    quantify: Arc<dyn Fn(&FinFun) -> Vec<Tuple> + Send + Sync>,
}

impl Quantifier {
    pub fn new(
        choice: Ports,
        outcome: Ports,
        quantify: impl Fn(&FinFun) -> Vec<Tuple> + Send + Sync + 'static,
    ) -> Self {
        Quantifier {
            choice,
            outcome,
            quantify: Arc::new(quantify),
        }
    }

    /// A quantifier given by an explicit table indexed by continuation rank.
    pub fn from_table(
        choice: Ports,
        outcome: Ports,
        table: Vec<Vec<Tuple>>,
    ) -> Result<Self, Error> {
        let expected = count_functions(&choice, &outcome);
        if table.len() as u128 != expected {
            return Err(Error::InterfaceMismatch {
                expected: format!("{expected} continuation entries"),
                found: format!("{} continuation entries", table.len()),
            });
        }
        let table = Arc::new(table);
        Ok(Quantifier::new(choice, outcome, move |k| {
            table[k.function_rank() as usize].clone()
        }))
    }

    pub fn choice(&self) -> &Ports {
        &self.choice
    }

    pub fn outcome(&self) -> &Ports {
        &self.outcome
    }

    /// The good outcomes for a continuation, in enumeration order.
    pub fn quantify(&self, k: &FinFun) -> Vec<Tuple> {
        debug_assert!(k.dom() == &self.choice && k.cod() == &self.outcome);
        (self.quantify)(k)
    }
}

/// The classical maximizing selection on a single numeric outcome port:
/// all choices attaining the maximum are retained.
pub fn argmax_selection(choice: Ports, outcome: &FinSet) -> Result<SelectionFunction, Error> {
    argmax_selection_on(choice, Ports::single(outcome.clone()), 0)
}

/// Maximizing selection reading one numeric coordinate of a wider outcome
/// bundle, e.g. a player maximizing their own payoff out of a per-player
/// payoff tuple.
pub fn argmax_selection_on(
    choice: Ports,
    outcome: Ports,
    coord: usize,
) -> Result<SelectionFunction, Error> {
    if choice.tuple_count() == 0 {
        return Err(Error::EmptyChoiceSet);
    }
    let values = parse_port_values(&outcome.sets()[coord])?;
    let choices = enumerate_tuples(&choice);
    Ok(SelectionFunction::new(choice, outcome, move |k| {
        let vals: Vec<&Ratio<i64>> = choices
            .iter()
            .map(|y| &values[k.apply(y).components()[coord]])
            .collect();
        let best = vals.iter().max().expect("choice set is nonempty");
        choices
            .iter()
            .zip(&vals)
            .filter(|(_, v)| *v == best)
            .map(|(y, _)| y.clone())
            .collect()
    }))
}

/// The maximum quantifier on one numeric coordinate: the good outcomes are
/// exactly the tuples whose coordinate equals the best attainable value.
pub fn max_quantifier_on(
    choice: Ports,
    outcome: Ports,
    coord: usize,
) -> Result<Quantifier, Error> {
    if choice.tuple_count() == 0 {
        return Err(Error::EmptyChoiceSet);
    }
    let values = parse_port_values(&outcome.sets()[coord])?;
    let choices = enumerate_tuples(&choice);
    let outcomes = enumerate_tuples(&outcome);
    Ok(Quantifier::new(choice, outcome, move |k| {
        let best = choices
            .iter()
            .map(|y| &values[k.apply(y).components()[coord]])
            .max()
            .expect("choice set is nonempty");
        outcomes
            .iter()
            .filter(|r| &values[r.components()[coord]] == best)
            .cloned()
            .collect()
    }))
}

/// A decision whose profile is rational when its chosen move lies in the
/// selection of the continuation.
pub fn decision_from_selection(
    x: Ports,
    y: Ports,
    r: Ports,
    sel: &SelectionFunction,
) -> Result<Pregame, Error> {
    decision_from_selection_capped(x, y, r, DEFAULT_FUNCTION_CAP, sel)
}

/// [`decision_from_selection`] with an explicit strategy-space cap.
pub fn decision_from_selection_capped(
    x: Ports,
    y: Ports,
    r: Ports,
    cap: u64,
    sel: &SelectionFunction,
) -> Result<Pregame, Error> {
    check_agent_shape(&y, &r, sel.choice(), sel.outcome())?;
    let sel = sel.clone();
    decision_capped(x, y, r, cap, move |strategy, x, k| {
        let chosen = strategy.apply(x);
        sel.select(k).iter().any(|t| t == chosen)
    })
}

/// A decision whose profile is rational when the outcome reached by its
/// chosen move lies in the quantifier of the continuation.
pub fn decision_from_quantifier(
    x: Ports,
    y: Ports,
    r: Ports,
    qf: &Quantifier,
) -> Result<Pregame, Error> {
    decision_from_quantifier_capped(x, y, r, DEFAULT_FUNCTION_CAP, qf)
}

/// [`decision_from_quantifier`] with an explicit strategy-space cap.
pub fn decision_from_quantifier_capped(
    x: Ports,
    y: Ports,
    r: Ports,
    cap: u64,
    qf: &Quantifier,
) -> Result<Pregame, Error> {
    check_agent_shape(&y, &r, qf.choice(), qf.outcome())?;
    let qf = qf.clone();
    decision_capped(x, y, r, cap, move |strategy, x, k| {
        let reached = k.apply(strategy.apply(x));
        qf.quantify(k).iter().any(|t| t == reached)
    })
}

fn check_agent_shape(
    y: &Ports,
    r: &Ports,
    choice: &Ports,
    outcome: &Ports,
) -> Result<(), Error> {
    if choice != y || outcome != r {
        return Err(Error::InterfaceMismatch {
            expected: format!("({} → {})", y.product_label(), r.product_label()),
            found: format!("({} → {})", choice.product_label(), outcome.product_label()),
        });
    }
    Ok(())
}

/// A normal-form game: one move bundle per player and a payoff function
/// from joint moves to one numeric payoff port per player.
#[derive(Clone, Debug)]
pub struct UtilityTable {
    moves: Vec<Ports>,
    payoff: FinFun,
    values: Vec<Vec<Ratio<i64>>>,
}

impl UtilityTable {
    pub fn new(moves: Vec<Ports>, payoff: FinFun) -> Result<Self, Error> {
        let joint = moves
            .iter()
            .fold(Ports::empty(), |acc, m| acc.concat(m));
        if &joint != payoff.dom() || payoff.cod().len() != moves.len() {
            return Err(Error::InterfaceMismatch {
                expected: format!(
                    "payoff {} → one port per player",
                    joint.product_label()
                ),
                found: format!(
                    "payoff {} → {}",
                    payoff.dom().product_label(),
                    payoff.cod().product_label()
                ),
            });
        }
        let values = payoff
            .cod()
            .sets()
            .iter()
            .map(parse_port_values)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(UtilityTable {
            moves,
            payoff,
            values,
        })
    }

    pub fn moves(&self) -> &[Ports] {
        &self.moves
    }

    pub fn payoff(&self) -> &FinFun {
        &self.payoff
    }

    pub fn player_count(&self) -> usize {
        self.moves.len()
    }

    /// Player `p`'s exact payoff at a joint move tuple.
    pub fn utility(&self, joint: &Tuple, player: usize) -> Ratio<i64> {
        self.values[player][self.payoff.apply(joint).components()[player]]
    }
}

/// Brute-force pure Nash enumeration: a joint profile survives when no
/// player can strictly improve their own payoff by a unilateral deviation.
pub fn nash_oracle(u: &UtilityTable) -> Vec<Tuple> {
    let joint_ports = u.payoff.dom().clone();
    let offsets: Vec<usize> = u
        .moves
        .iter()
        .scan(0usize, |acc, m| {
            let start = *acc;
            *acc += m.len();
            Some(start)
        })
        .collect();
    enumerate_tuples(&joint_ports)
        .into_iter()
        .filter(|joint| {
            u.moves.iter().enumerate().all(|(p, mports)| {
                let current = u.utility(joint, p);
                enumerate_tuples(mports).iter().all(|dev| {
                    let mut changed = joint.components().to_vec();
                    changed[offsets[p]..offsets[p] + mports.len()]
                        .copy_from_slice(dev.components());
                    u.utility(&Tuple::new(changed), p) <= current
                })
            })
        })
        .collect()
}

/// Exhaustively enumerates the optimal profiles of a two-stage game: a
/// first move together with a contingent strategy such that the reached
/// outcome is good for the leader over the induced play, and the outcome at
/// *every* history is good for the follower against the rules there.
pub fn optimal_profiles(
    x: &Ports,
    y: &Ports,
    phi: &Quantifier,
    psi: &Quantifier,
    q: &FinFun,
    cap: u64,
) -> Result<Vec<(Tuple, FinFun)>, Error> {
    let outcome = q.cod().clone();
    if q.dom() != &x.concat(y) || phi.choice() != x || psi.choice() != y {
        return Err(Error::InterfaceMismatch {
            expected: format!("q : {}×{} → outcomes", x.product_label(), y.product_label()),
            found: format!(
                "q : {} → {}",
                q.dom().product_label(),
                q.cod().product_label()
            ),
        });
    }
    let first_moves = enumerate_tuples(x);
    let contingent = enumerate_functions(x, y, cap)?;

    // Whether the follower condition holds at every history, and the
    // induced leader continuation, per contingent strategy.
    let mut follower_ok = Vec::with_capacity(contingent.len());
    let mut induced = Vec::with_capacity(contingent.len());
    for s2 in &contingent {
        let k_leader = FinFun::from_fn(x.clone(), outcome.clone(), |xx| {
            q.apply(&xx.concat(s2.apply(xx))).clone()
        });
        let ok = first_moves.iter().all(|xx| {
            let k_here = FinFun::from_fn(y.clone(), outcome.clone(), |yy| {
                q.apply(&xx.concat(yy)).clone()
            });
            let reached = q.apply(&xx.concat(s2.apply(xx)));
            psi.quantify(&k_here).iter().any(|t| t == reached)
        });
        follower_ok.push(ok);
        induced.push(k_leader);
    }

    let mut result = Vec::new();
    for s1 in &first_moves {
        for (i, s2) in contingent.iter().enumerate() {
            if !follower_ok[i] {
                continue;
            }
            let reached = induced[i].apply(s1);
            if phi.quantify(&induced[i]).iter().any(|t| t == reached) {
                result.push((s1.clone(), s2.clone()));
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{extensionally_equal, Caps};

    fn set(name: &str, elems: &[&str]) -> FinSet {
        FinSet::new(name, elems.iter().copied()).unwrap()
    }

    fn numeric(name: &str, values: &[&str]) -> FinSet {
        set(name, values)
    }

    #[test]
    fn rational_labels_parse_exactly() {
        assert_eq!(parse_rational("3").unwrap(), Ratio::new(3, 1));
        assert_eq!(parse_rational("-1/2").unwrap(), Ratio::new(-1, 2));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("2.5").is_err());
    }

    #[test]
    fn argmax_on_constant_continuation_selects_everything() {
        let y = Ports::single(set("Y", &["a", "b", "c"]));
        let r = numeric("R", &["0", "1"]);
        let sel = argmax_selection(y.clone(), &r).unwrap();
        let constant = FinFun::from_fn(y.clone(), Ports::single(r), |_| Tuple::new(vec![1]));
        assert_eq!(sel.select(&constant), enumerate_tuples(&y));
    }

    #[test]
    fn argmax_unique_maximizer() {
        let y = Ports::single(set("Y", &["a", "b"]));
        let r = numeric("R", &["0", "1"]);
        let sel = argmax_selection(y.clone(), &r).unwrap();
        // a↦0, b↦1
        let k = FinFun::from_fn(y.clone(), Ports::single(r), |t| t.clone());
        let picked = sel.select(&k);
        assert_eq!(picked.len(), 1);
        assert_eq!(y.tuple_label(&picked[0]), "b");
    }

    #[test]
    fn argmax_requires_numeric_outcomes_and_nonempty_choices() {
        let y = Ports::single(set("Y", &["a"]));
        assert!(matches!(
            argmax_selection(y, &set("R", &["high", "low"])),
            Err(Error::NonNumericOutcome(_))
        ));
        let none = Ports::single(set("E", &[]));
        assert!(matches!(
            argmax_selection(none, &numeric("R", &["0"])),
            Err(Error::EmptyChoiceSet)
        ));
    }

    #[test]
    fn argmax_keeps_all_ties() {
        let y = Ports::single(set("Y", &["a", "b", "c"]));
        let r = numeric("R", &["0", "1"]);
        let sel = argmax_selection(y.clone(), &r).unwrap();
        // a↦1, b↦0, c↦1: both maximizers kept, in enumeration order.
        let k = FinFun::new(
            y.clone(),
            Ports::single(r),
            vec![
                Tuple::new(vec![1]),
                Tuple::new(vec![0]),
                Tuple::new(vec![1]),
            ],
        )
        .unwrap();
        let labels: Vec<String> =
            sel.select(&k).iter().map(|t| y.tuple_label(t)).collect();
        assert_eq!(labels, ["a", "c"]);
    }

    #[test]
    fn best_response_in_a_dilemma_column() {
        // Row player against a fixed opponent: cooperating yields 2,
        // defecting yields 3, so the best response is to defect.
        let y = Ports::single(set("M", &["C", "D"]));
        let r = numeric("U", &["0", "1", "2", "3"]);
        let sel = argmax_selection(y.clone(), &r).unwrap();
        let k = FinFun::new(
            y.clone(),
            Ports::single(r),
            vec![Tuple::new(vec![2]), Tuple::new(vec![3])],
        )
        .unwrap();
        let picked = sel.select(&k);
        assert_eq!(picked.len(), 1);
        assert_eq!(y.tuple_label(&picked[0]), "D");
    }

    #[test]
    fn singleton_choice_is_always_rational_under_argmax() {
        let y = Ports::single(set("Y", &["only"]));
        let r = numeric("R", &["0", "1"]);
        let sel = argmax_selection(y.clone(), &r).unwrap();
        let d = decision_from_selection(Ports::empty(), y.clone(), Ports::single(r.clone()), &sel)
            .unwrap();
        for k in enumerate_functions(&y, &Ports::single(r), 100).unwrap() {
            assert!(d.rational(&Tuple::new(vec![0]), &Tuple::unit(), &k));
        }
    }

    #[test]
    fn argmax_decision_always_has_a_rational_profile() {
        let x = Ports::single(set("X", &["h1", "h2"]));
        let y = Ports::single(set("Y", &["a", "b", "c"]));
        let r = numeric("R", &["0", "1", "2"]);
        let sel = argmax_selection(y.clone(), &r).unwrap();
        let d =
            decision_from_selection(x.clone(), y.clone(), Ports::single(r.clone()), &sel).unwrap();
        for x_val in enumerate_tuples(&x) {
            for k in enumerate_functions(&y, &Ports::single(r.clone()), 10000).unwrap() {
                let found = d
                    .strategy_profiles()
                    .iter()
                    .any(|sigma| d.rational(sigma, &x_val, &k));
                assert!(found, "a maximizer always exists on a finite set");
            }
        }
    }

    #[test]
    fn selection_and_quantifier_decisions_agree_for_argmax_and_max() {
        // The max quantifier is the image of the argmax selection, and
        // argmax is the preimage of max, so the two rationality relations
        // coincide; checked exhaustively on small shapes.
        for ny in 1..=3usize {
            for nr in 1..=3usize {
                let y = Ports::single(
                    FinSet::new("Y", (0..ny).map(|i| format!("y{i}"))).unwrap(),
                );
                let r_set =
                    FinSet::new("R", (0..nr).map(|i| format!("{i}"))).unwrap();
                let r = Ports::single(r_set);
                let sel = argmax_selection_on(y.clone(), r.clone(), 0).unwrap();
                let qf = max_quantifier_on(y.clone(), r.clone(), 0).unwrap();
                let d_sel =
                    decision_from_selection(Ports::empty(), y.clone(), r.clone(), &sel).unwrap();
                let d_qf =
                    decision_from_quantifier(Ports::empty(), y.clone(), r.clone(), &qf).unwrap();
                assert!(
                    extensionally_equal(&d_sel, &d_qf, &Caps::default()).unwrap(),
                    "argmax/max disagree at |Y|={ny}, |R|={nr}"
                );
            }
        }
    }

    #[test]
    fn quantifier_accepting_everything_makes_every_profile_rational() {
        let y = Ports::single(set("Y", &["a", "b"]));
        let r = Ports::single(numeric("R", &["0", "1"]));
        let all = Quantifier::new(y.clone(), r.clone(), {
            let r = r.clone();
            move |_| enumerate_tuples(&r)
        });
        let d = decision_from_quantifier(Ports::empty(), y.clone(), r.clone(), &all).unwrap();
        for sigma in d.strategy_profiles() {
            for k in enumerate_functions(&y, &r, 100).unwrap() {
                assert!(d.rational(&sigma, &Tuple::unit(), &k));
            }
        }
    }

    fn dilemma_table() -> UtilityTable {
        let m = Ports::single(set("M", &["C", "D"]));
        let u1 = numeric("U1", &["0", "1", "2", "3"]);
        let u2 = numeric("U2", &["0", "1", "2", "3"]);
        let cod = Ports::new(vec![u1, u2]);
        // (C,C)→(2,2), (C,D)→(0,3), (D,C)→(3,0), (D,D)→(1,1)
        let payoff = FinFun::new(
            m.concat(&m),
            cod,
            vec![
                Tuple::new(vec![2, 2]),
                Tuple::new(vec![0, 3]),
                Tuple::new(vec![3, 0]),
                Tuple::new(vec![1, 1]),
            ],
        )
        .unwrap();
        UtilityTable::new(vec![m.clone(), m], payoff).unwrap()
    }

    #[test]
    fn nash_oracle_on_a_one_by_one_game() {
        let m = Ports::single(set("M", &["only"]));
        let payoff = FinFun::new(
            m.clone(),
            Ports::single(numeric("U", &["5"])),
            vec![Tuple::new(vec![0])],
        )
        .unwrap();
        let u = UtilityTable::new(vec![m], payoff).unwrap();
        assert_eq!(nash_oracle(&u), vec![Tuple::new(vec![0])]);
    }

    #[test]
    fn nash_oracle_finds_mutual_defection() {
        let u = dilemma_table();
        let eq = nash_oracle(&u);
        assert_eq!(eq.len(), 1);
        assert_eq!(u.payoff().dom().tuple_label(&eq[0]), "(D,D)");
    }

    #[test]
    fn nash_oracle_finds_both_coordination_points() {
        let m = Ports::single(set("S", &["A", "B"]));
        let u1 = numeric("U1", &["0", "1", "2"]);
        let u2 = numeric("U2", &["0", "1", "2"]);
        let payoff = FinFun::new(
            m.concat(&m),
            Ports::new(vec![u1, u2]),
            vec![
                Tuple::new(vec![2, 2]),
                Tuple::new(vec![0, 0]),
                Tuple::new(vec![0, 0]),
                Tuple::new(vec![1, 1]),
            ],
        )
        .unwrap();
        let u = UtilityTable::new(vec![m.clone(), m], payoff).unwrap();
        let labels: Vec<String> = nash_oracle(&u)
            .iter()
            .map(|t| u.payoff().dom().tuple_label(t))
            .collect();
        assert_eq!(labels, ["(A,A)", "(B,B)"]);
    }

    #[test]
    fn optimal_profiles_on_a_one_by_one_game() {
        let x = Ports::single(set("X", &["x"]));
        let y = Ports::single(set("Y", &["y"]));
        let r = Ports::single(numeric("R", &["1"]));
        let q = FinFun::from_fn(x.concat(&y), r.clone(), |_| Tuple::new(vec![0]));
        let phi = max_quantifier_on(x.clone(), r.clone(), 0).unwrap();
        let psi = max_quantifier_on(y.clone(), r.clone(), 0).unwrap();
        let opt = optimal_profiles(&x, &y, &phi, &psi, &q, 1000).unwrap();
        assert_eq!(opt.len(), 1);
    }
}
