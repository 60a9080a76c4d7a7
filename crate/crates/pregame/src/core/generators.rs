//! The atomic pregames: identities, decisions, computations in both
//! variances, the teleological unit, and port permutations.

use std::sync::Arc;

use crate::error::Error;
use crate::finite::{
    self, enumerate_functions, invert_permutation, validate_permutation, FinFun, FinSet, Ports,
    Tuple,
};

use super::{Interface, Pregame};

/// The identity pregame on an interface: one trivial profile, play and
/// coplay pass values through unchanged, and every context is rational.
pub fn identity(i: &Interface) -> Pregame {
    Pregame {
        domain: i.clone(),
        codomain: i.clone(),
        strategy: Vec::new(),
        play: Arc::new(|_, x| x.clone()),
        coplay: Arc::new(|_, _, r| r.clone()),
        rational: Arc::new(|_, _, _| true),
    }
}

/// An agent: observes `x` over the domain ports, picks a choice over `y`,
/// and judges profiles against contexts whose continuations land in `r`.
///
/// The strategy set is the full function space `x → y`, so the profile
/// component is a set of function labels. `rational_spec` receives the
/// strategy as the function it denotes.
pub fn decision(
    x: Ports,
    y: Ports,
    r: Ports,
    rational_spec: impl Fn(&FinFun, &Tuple, &FinFun) -> bool + Send + Sync + 'static,
) -> Result<Pregame, Error> {
    decision_capped(x, y, r, finite::DEFAULT_FUNCTION_CAP, rational_spec)
}

/// [`decision`] with an explicit cap on the strategy-space size.
pub fn decision_capped(
    x: Ports,
    y: Ports,
    r: Ports,
    cap: u64,
    rational_spec: impl Fn(&FinFun, &Tuple, &FinFun) -> bool + Send + Sync + 'static,
) -> Result<Pregame, Error> {
    if y.tuple_count() == 0 {
        return Err(Error::EmptyChoiceSet);
    }
    let strategies = Arc::new(enumerate_functions(&x, &y, cap)?);
    let component = FinSet::new(
        format!("strategies({}→{})", x.product_label(), y.product_label()),
        strategies.iter().map(|f| f.mapping_label()),
    )?;
    let play_strategies = Arc::clone(&strategies);
    let spec = Arc::new(rational_spec);
    Ok(Pregame {
        domain: Interface::new(x, Ports::empty()),
        codomain: Interface::new(y, r),
        strategy: vec![component],
        play: Arc::new(move |sigma, x| {
            play_strategies[sigma.components()[0]].apply(x).clone()
        }),
        coplay: Arc::new(|_, _, _| Tuple::unit()),
        rational: Arc::new(move |sigma, x, k| {
            spec(&strategies[sigma.components()[0]], x, k)
        }),
    })
}

/// A function lifted onto a forward wire: no strategies, play applies the
/// function, every context is rational.
pub fn computation(f: &FinFun) -> Pregame {
    let f = f.clone();
    Pregame {
        domain: Interface::new(f.dom().clone(), Ports::empty()),
        codomain: Interface::new(f.cod().clone(), Ports::empty()),
        strategy: Vec::new(),
        play: Arc::new(move |_, x| f.apply(x).clone()),
        coplay: Arc::new(|_, _, _| Tuple::unit()),
        rational: Arc::new(|_, _, _| true),
    }
}

/// A function lifted onto a backward wire: coplay applies the function to
/// the incoming outcome.
pub fn cocomputation(f: &FinFun) -> Pregame {
    let domain = Interface::new(Ports::empty(), f.cod().clone());
    let codomain = Interface::new(Ports::empty(), f.dom().clone());
    let f = f.clone();
    Pregame {
        domain,
        codomain,
        strategy: Vec::new(),
        play: Arc::new(|_, _| Tuple::unit()),
        coplay: Arc::new(move |_, _, r| f.apply(r).clone()),
        rational: Arc::new(|_, _, _| true),
    }
}

/// The feedback cup on `x`: consumes a forward value and reemits it on the
/// backward wire of the same shape.
pub fn teleological_unit(x: Ports) -> Pregame {
    Pregame {
        domain: Interface::new(x.clone(), x),
        codomain: Interface::unit(),
        strategy: Vec::new(),
        play: Arc::new(|_, _| Tuple::unit()),
        coplay: Arc::new(|_, x, _| x.clone()),
        rational: Arc::new(|_, _, _| true),
    }
}

/// A wire permutation. Covariant output port `j` carries covariant input
/// port `cov_perm[j]`; the contravariant side is permuted the same way, so
/// coplay applies the inverse of `contra_perm`.
pub fn structural(
    i: &Interface,
    cov_perm: &[usize],
    contra_perm: &[usize],
) -> Result<Pregame, Error> {
    validate_permutation(cov_perm, i.cov().len())?;
    validate_permutation(contra_perm, i.contra().len())?;
    let cov_out = Ports::new(
        cov_perm
            .iter()
            .map(|&p| i.cov().sets()[p].clone())
            .collect(),
    );
    let contra_out = Ports::new(
        contra_perm
            .iter()
            .map(|&p| i.contra().sets()[p].clone())
            .collect(),
    );
    let cov_perm = cov_perm.to_vec();
    let contra_inv = invert_permutation(contra_perm);
    Ok(Pregame {
        domain: i.clone(),
        codomain: Interface::new(cov_out, contra_out),
        strategy: Vec::new(),
        play: Arc::new(move |_, x| {
            Tuple::new(cov_perm.iter().map(|&p| x.components()[p]).collect())
        }),
        coplay: Arc::new(move |_, _, r| {
            Tuple::new(contra_inv.iter().map(|&p| r.components()[p]).collect())
        }),
        rational: Arc::new(|_, _, _| true),
    })
}

/// The symmetry on covariant bundles: `a ++ b → b ++ a` with no
/// contravariant ports.
pub fn swap_cov(a: &Ports, b: &Ports) -> Pregame {
    let dom = Interface::new(a.concat(b), Ports::empty());
    let perm: Vec<usize> = (a.len()..a.len() + b.len()).chain(0..a.len()).collect();
    structural(&dom, &perm, &[]).expect("block swap is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{compose, equilibria, extensionally_equal, Caps};
    use crate::finite::{copy_fun, enumerate_tuples};

    fn set(name: &str, elems: &[&str]) -> FinSet {
        FinSet::new(name, elems.iter().copied()).unwrap()
    }

    #[test]
    fn identity_on_unit_has_one_trivially_rational_profile() {
        let id = identity(&Interface::unit());
        let profiles = id.strategy_profiles();
        assert_eq!(profiles, vec![Tuple::unit()]);
        assert_eq!(
            equilibria(&id, &Caps::default()).unwrap(),
            vec![Tuple::unit()]
        );
    }

    #[test]
    fn identity_play_and_coplay_pass_through() {
        let ab = Ports::single(set("A", &["a", "b"]));
        let bits = Ports::single(set("B", &["0", "1"]));
        let id_cov = identity(&Interface::new(ab.clone(), Ports::empty()));
        for x in enumerate_tuples(&ab) {
            assert_eq!(id_cov.play(&Tuple::unit(), &x), x);
        }
        let id_contra = identity(&Interface::new(Ports::empty(), bits.clone()));
        for r in enumerate_tuples(&bits) {
            assert_eq!(id_contra.coplay(&Tuple::unit(), &Tuple::unit(), &r), r);
        }
    }

    #[test]
    fn decision_strategy_counts() {
        let moves = Ports::single(set("M", &["C", "D"]));
        let util = Ports::single(set("U", &["u0", "u1", "u2", "u3"]));
        let d = decision(Ports::empty(), moves.clone(), util, |_, _, _| true).unwrap();
        assert_eq!(d.strategy_profiles().len(), 2);

        let hist = Ports::single(set("H", &["h1", "h2"]));
        let d2 = decision(hist, moves, Ports::empty(), |_, _, _| true).unwrap();
        assert_eq!(d2.strategy_profiles().len(), 4);
    }

    #[test]
    fn decision_rejects_empty_choice_set() {
        let empty = Ports::single(set("E", &[]));
        let err = decision(Ports::empty(), empty, Ports::empty(), |_, _, _| true).unwrap_err();
        assert_eq!(err, Error::EmptyChoiceSet);
    }

    #[test]
    fn decision_respects_strategy_cap() {
        let big = Ports::new(vec![
            set("A", &["a", "b", "c"]),
            set("B", &["x", "y", "z"]),
        ]);
        let err =
            decision_capped(big.clone(), big, Ports::empty(), 10, |_, _, _| true).unwrap_err();
        assert!(matches!(err, Error::DomainTooLarge { .. }));
    }

    #[test]
    fn decision_play_applies_the_strategy() {
        let hist = Ports::single(set("H", &["h1", "h2"]));
        let moves = Ports::single(set("M", &["a", "b"]));
        let d = decision(hist.clone(), moves.clone(), Ports::empty(), |_, _, _| true).unwrap();
        let strategies = enumerate_functions(&hist, &moves, 100).unwrap();
        for (i, s) in strategies.iter().enumerate() {
            for x in enumerate_tuples(&hist) {
                assert_eq!(&d.play(&Tuple::new(vec![i]), &x), s.apply(&x));
            }
        }
    }

    #[test]
    fn computation_of_identity_is_identity() {
        let ab = Ports::single(set("A", &["a", "b"]));
        let c = computation(&FinFun::identity(&ab));
        let id = identity(&Interface::new(ab, Ports::empty()));
        assert!(extensionally_equal(&c, &id, &Caps::default()).unwrap());
    }

    #[test]
    fn cocomputation_coplays_the_function() {
        let ab = Ports::single(set("A", &["a", "b"]));
        let bits = Ports::single(set("B", &["0", "1"]));
        let f = FinFun::from_fn(ab.clone(), bits.clone(), |t| t.clone());
        let co = cocomputation(&f);
        assert_eq!(co.domain(), &Interface::new(Ports::empty(), bits));
        assert_eq!(co.codomain(), &Interface::new(Ports::empty(), ab.clone()));
        for x in enumerate_tuples(&ab) {
            assert_eq!(&co.coplay(&Tuple::unit(), &Tuple::unit(), &x), f.apply(&x));
        }
    }

    #[test]
    fn teleological_unit_reflects_forward_values() {
        let ab = Ports::single(set("A", &["a", "b"]));
        let tau = teleological_unit(ab.clone());
        for x in enumerate_tuples(&ab) {
            assert_eq!(tau.coplay(&Tuple::unit(), &x, &Tuple::unit()), x);
        }
    }

    #[test]
    fn teleological_unit_on_unit_is_identity() {
        let tau = teleological_unit(Ports::empty());
        let id = identity(&Interface::unit());
        assert!(extensionally_equal(&tau, &id, &Caps::default()).unwrap());
    }

    #[test]
    fn cup_after_copy_dual_duplicates_the_outcome() {
        // The composite (q ⊗ copy*) then cup coplays every (x,y) to the
        // pair (q(x,y), q(x,y)).
        let moves = Ports::single(set("M", &["a", "b"]));
        let out = Ports::single(set("R", &["0", "1", "2"]));
        let dom = moves.concat(&moves);
        let q = FinFun::from_fn(dom.clone(), out.clone(), |t| {
            Tuple::new(vec![(t.components()[0] + t.components()[1]) % 3])
        });
        let stage = crate::core::tensor(&computation(&q), &cocomputation(&copy_fun(&out)));
        let cupped = compose(&teleological_unit(out.clone()), &stage).unwrap();
        for xy in enumerate_tuples(&dom) {
            let r = cupped.coplay(&Tuple::unit(), &xy, &Tuple::unit());
            let qv = q.apply(&xy).components()[0];
            assert_eq!(r, Tuple::new(vec![qv, qv]));
        }
    }

    #[test]
    fn structural_identity_perms_are_identity() {
        let i = Interface::new(
            Ports::single(set("A", &["a", "b"])),
            Ports::single(set("B", &["0", "1"])),
        );
        let s = structural(&i, &[0], &[0]).unwrap();
        let id = identity(&i);
        assert!(extensionally_equal(&s, &id, &Caps::default()).unwrap());
    }

    #[test]
    fn swap_is_an_involution() {
        let a = Ports::single(set("A", &["a", "b"]));
        let b = Ports::single(set("B", &["0", "1", "2"]));
        let s1 = swap_cov(&a, &b);
        let s2 = swap_cov(&b, &a);
        let round = compose(&s2, &s1).unwrap();
        let id = identity(&Interface::new(a.concat(&b), Ports::empty()));
        assert!(extensionally_equal(&round, &id, &Caps::default()).unwrap());
    }

    #[test]
    fn structural_rejects_bad_perms() {
        let i = Interface::new(Ports::single(set("A", &["a", "b"])), Ports::empty());
        assert!(matches!(
            structural(&i, &[0, 1], &[]),
            Err(Error::LengthMismatch { .. })
        ));
    }
}
