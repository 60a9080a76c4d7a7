//! Equilibrium enumeration for closed games and extensional equality.

use crate::error::Error;
use crate::finite::{count_functions, delete_fun, enumerate_tuples, FunctionIter, Tuple};

use super::{Caps, Pregame};

/// All equilibria of a closed pregame, in profile enumeration order.
///
/// A closed game has no covariant input and no contravariant output, so it
/// faces exactly one context: the empty history and the unique continuation
/// into the unit. Its equilibria are the profiles rational there.
pub fn equilibria(game: &Pregame, caps: &Caps) -> Result<Vec<Tuple>, Error> {
    if !game.is_closed() {
        return Err(Error::NotClosed(describe_open_ports(game)));
    }
    let profiles = game.strategy_ports();
    let count = profiles.tuple_count();
    if count > caps.profiles as u128 {
        return Err(Error::DomainTooLarge {
            what: "strategy profiles".to_string(),
            count,
            cap: caps.profiles,
        });
    }
    let unique_k = delete_fun(game.codomain().cov());
    let unit = Tuple::unit();
    Ok(enumerate_tuples(&profiles)
        .into_iter()
        .filter(|sigma| game.rational(sigma, &unit, &unique_k))
        .collect())
}

fn describe_open_ports(game: &Pregame) -> String {
    let mut parts = Vec::new();
    if !game.domain().cov().is_empty() {
        parts.push(format!(
            "domain has covariant {}",
            name_ports(game.domain().cov().sets())
        ));
    }
    if !game.codomain().contra().is_empty() {
        parts.push(format!(
            "codomain has contravariant {}",
            name_ports(game.codomain().contra().sets())
        ));
    }
    parts.join("; ")
}

fn name_ports(sets: &[crate::finite::FinSet]) -> String {
    let names: Vec<&str> = sets.iter().map(|s| s.name()).collect();
    if names.len() == 1 {
        format!("port {}", names[0])
    } else {
        format!("ports {}", names.join(", "))
    }
}

/// Size of the grid extensional equality must sweep for a pregame: the
/// larger of the rationality grid `|Σ|·|X|·|R^Y|` and the coplay grid
/// `|Σ|·|X|·|R|`.
pub fn extensional_cost(g: &Pregame) -> u128 {
    let n_profiles = g.strategy_ports().tuple_count();
    let n_hist = g.domain().cov().tuple_count();
    let n_outcomes = g.codomain().contra().tuple_count();
    let n_conts = count_functions(g.codomain().cov(), g.codomain().contra());
    let rational_grid = n_profiles.saturating_mul(n_hist).saturating_mul(n_conts);
    let coplay_grid = n_profiles.saturating_mul(n_hist).saturating_mul(n_outcomes);
    rational_grid.max(coplay_grid)
}

/// Decides equality of two pregames by exhaustive agreement: interfaces,
/// flattened profile enumerations (element labels, set names ignored), and
/// play, coplay and rationality on every profile, history, outcome and
/// continuation.
pub fn extensionally_equal(g: &Pregame, h: &Pregame, caps: &Caps) -> Result<bool, Error> {
    if g.domain() != h.domain() || g.codomain() != h.codomain() {
        return Ok(false);
    }
    if g.strategy_components().len() != h.strategy_components().len() {
        return Ok(false);
    }
    for (a, b) in g.strategy_components().iter().zip(h.strategy_components()) {
        if a.elements() != b.elements() {
            return Ok(false);
        }
    }

    let profiles = g.strategy_ports();
    let worst = extensional_cost(g);
    if worst > caps.contexts as u128 {
        return Err(Error::DomainTooLarge {
            what: "extensional equality contexts".to_string(),
            count: worst,
            cap: caps.contexts,
        });
    }

    let histories = enumerate_tuples(g.domain().cov());
    let outcomes = enumerate_tuples(g.codomain().contra());
    for sigma in enumerate_tuples(&profiles) {
        for x in &histories {
            if g.play(&sigma, x) != h.play(&sigma, x) {
                return Ok(false);
            }
            for r in &outcomes {
                if g.coplay(&sigma, x, r) != h.coplay(&sigma, x, r) {
                    return Ok(false);
                }
            }
            let conts = FunctionIter::new(
                g.codomain().cov().clone(),
                g.codomain().contra().clone(),
            );
            for k in conts {
                if g.rational(&sigma, x, &k) != h.rational(&sigma, x, &k) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{compose, decision, identity, tensor, teleological_unit, Interface};
    use crate::finite::{FinSet, Ports};

    fn set(name: &str, elems: &[&str]) -> FinSet {
        FinSet::new(name, elems.iter().copied()).unwrap()
    }

    #[test]
    fn equilibria_requires_closed_games() {
        let open = identity(&Interface::new(
            Ports::single(set("X", &["x"])),
            Ports::empty(),
        ));
        match equilibria(&open, &Caps::default()) {
            Err(Error::NotClosed(msg)) => {
                assert_eq!(msg, "domain has covariant port X");
            }
            other => panic!("expected NotClosed, got {other:?}"),
        }

        let tau = teleological_unit(Ports::single(set("R", &["r"])));
        let open_contra = tensor(&identity(&Interface::unit()), &compose_open(&tau));
        match equilibria(&open_contra, &Caps::default()) {
            Err(Error::NotClosed(msg)) => {
                assert_eq!(msg, "codomain has contravariant port R");
            }
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    // A game 1 → 1 ⊗ R*: the dual of the terminal map on R.
    fn compose_open(_tau: &Pregame) -> Pregame {
        let r = Ports::single(set("R", &["r"]));
        crate::core::cocomputation(&crate::finite::delete_fun(&r))
    }

    #[test]
    fn trivially_rational_closed_game_has_all_profiles_as_equilibria() {
        let moves = Ports::single(set("M", &["a", "b", "c"]));
        let d = decision(Ports::empty(), moves, Ports::empty(), |_, _, _| true).unwrap();
        let eq = equilibria(&d, &Caps::default()).unwrap();
        assert_eq!(eq, d.strategy_profiles());
    }

    #[test]
    fn equilibria_respects_profile_cap() {
        let moves = Ports::single(set("M", &["a", "b", "c"]));
        let d = decision(Ports::empty(), moves, Ports::empty(), |_, _, _| true).unwrap();
        let caps = Caps {
            profiles: 2,
            ..Caps::default()
        };
        assert!(matches!(
            equilibria(&d, &caps),
            Err(Error::DomainTooLarge { .. })
        ));
    }

    #[test]
    fn extensional_equality_is_reflexive() {
        let moves = Ports::single(set("M", &["a", "b"]));
        let r = Ports::single(set("R", &["0", "1"]));
        let d = decision(Ports::empty(), moves, r, |s, _, k| {
            k.apply(s.apply(&crate::finite::Tuple::unit())).components()[0] == 0
        })
        .unwrap();
        assert!(extensionally_equal(&d, &d, &Caps::default()).unwrap());
    }

    #[test]
    fn extensional_equality_distinguishes_rationality() {
        let moves = Ports::single(set("M", &["a", "b"]));
        let always = decision(Ports::empty(), moves.clone(), Ports::empty(), |_, _, _| true)
            .unwrap();
        let never = decision(Ports::empty(), moves, Ports::empty(), |_, _, _| false).unwrap();
        assert!(!extensionally_equal(&always, &never, &Caps::default()).unwrap());
    }

    #[test]
    fn extensional_equality_reports_oversized_grids() {
        let big = Ports::new(vec![
            set("A", &["a", "b", "c"]),
            set("B", &["x", "y", "z"]),
        ]);
        // Nine choices with nine outcome tuples: the continuation space is
        // 9^9, far past the cap below.
        let d = decision(Ports::empty(), big.clone(), big, |_, _, _| true).unwrap();
        let caps = Caps {
            contexts: 10,
            ..Caps::default()
        };
        let err = extensionally_equal(&d, &d, &caps).unwrap_err();
        assert!(matches!(err, Error::DomainTooLarge { .. }));
    }

    #[test]
    fn associativity_of_compose_on_a_sample_triple() {
        let a = Ports::single(set("A", &["a", "b"]));
        let b = Ports::single(set("B", &["0", "1"]));
        let r = Ports::single(set("R", &["r0", "r1"]));
        let g = decision(Ports::empty(), a.clone(), Ports::empty(), |_, _, _| true).unwrap();
        let h = decision(a, b.clone(), Ports::empty(), |s, x, _| {
            s.apply(x).components()[0] == 0
        })
        .unwrap();
        let i = decision(b, r.clone(), r, |s, x, k| {
            k.apply(s.apply(x)).components()[0] == 1
        })
        .unwrap();
        let left = compose(&compose(&i, &h).unwrap(), &g).unwrap();
        let right = compose(&i, &compose(&h, &g).unwrap()).unwrap();
        assert!(extensionally_equal(&left, &right, &Caps::default()).unwrap());
    }
}
