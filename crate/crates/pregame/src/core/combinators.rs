//! Sequential and parallel composition of pregames.

use std::sync::Arc;

use crate::error::Error;
use crate::finite::FinFun;

use super::Pregame;

/// Sequential composition `after ∘ first`.
///
/// Strategy components concatenate with `first`'s components leading. The
/// inner game is judged against the continuation extended backwards through
/// the outer game: a profile `(σ1, σ2)` is rational for `(x, k)` when `σ1`
/// is rational for `(x, k')` and `σ2` is rational for `(play σ1 x, k)`,
/// where `k' y = coplay_after σ2 (y, k (play_after σ2 y))`.
pub fn compose(after: &Pregame, first: &Pregame) -> Result<Pregame, Error> {
    if first.codomain != after.domain {
        return Err(Error::InterfaceMismatch {
            expected: first.codomain.to_string(),
            found: after.domain.to_string(),
        });
    }
    let split = first.strategy.len();
    let mut strategy = first.strategy.clone();
    strategy.extend(after.strategy.iter().cloned());

    let (g, h) = (first.clone(), after.clone());
    let play = {
        let (g, h) = (g.clone(), h.clone());
        move |sigma: &crate::finite::Tuple, x: &crate::finite::Tuple| {
            let (s1, s2) = sigma.split_at(split);
            h.play(&s2, &g.play(&s1, x))
        }
    };
    let coplay = {
        let (g, h) = (g.clone(), h.clone());
        move |sigma: &crate::finite::Tuple, x: &crate::finite::Tuple, r: &crate::finite::Tuple| {
            let (s1, s2) = sigma.split_at(split);
            let y = g.play(&s1, x);
            g.coplay(&s1, x, &h.coplay(&s2, &y, r))
        }
    };
    let rational = {
        let (g, h) = (g.clone(), h.clone());
        move |sigma: &crate::finite::Tuple, x: &crate::finite::Tuple, k: &FinFun| {
            let (s1, s2) = sigma.split_at(split);
            let extended = FinFun::from_fn(
                h.domain.cov().clone(),
                h.domain.contra().clone(),
                |y| h.coplay(&s2, y, k.apply(&h.play(&s2, y))),
            );
            g.rational(&s1, x, &extended) && h.rational(&s2, &g.play(&s1, x), k)
        }
    };
    Ok(Pregame {
        domain: first.domain.clone(),
        codomain: after.codomain.clone(),
        strategy,
        play: Arc::new(play),
        coplay: Arc::new(coplay),
        rational: Arc::new(rational),
    })
}

/// Parallel composition: interfaces concatenate componentwise, play and
/// coplay act blockwise, and each side is judged against the continuation
/// with the other side's play output held fixed and its own outcome block
/// projected out.
pub fn tensor(left: &Pregame, right: &Pregame) -> Pregame {
    let split = left.strategy.len();
    let cov_split = left.domain.cov().len();
    let contra_split = left.codomain.contra().len();
    let mut strategy = left.strategy.clone();
    strategy.extend(right.strategy.iter().cloned());

    let domain = left.domain.tensor(&right.domain);
    let codomain = left.codomain.tensor(&right.codomain);

    let (g, h) = (left.clone(), right.clone());
    let play = {
        let (g, h) = (g.clone(), h.clone());
        move |sigma: &crate::finite::Tuple, x: &crate::finite::Tuple| {
            let (s1, s2) = sigma.split_at(split);
            let (x1, x2) = x.split_at(cov_split);
            g.play(&s1, &x1).concat(&h.play(&s2, &x2))
        }
    };
    let coplay = {
        let (g, h) = (g.clone(), h.clone());
        move |sigma: &crate::finite::Tuple, x: &crate::finite::Tuple, r: &crate::finite::Tuple| {
            let (s1, s2) = sigma.split_at(split);
            let (x1, x2) = x.split_at(cov_split);
            let (r1, r2) = r.split_at(contra_split);
            g.coplay(&s1, &x1, &r1).concat(&h.coplay(&s2, &x2, &r2))
        }
    };
    let rational = {
        let (g, h) = (g.clone(), h.clone());
        move |sigma: &crate::finite::Tuple, x: &crate::finite::Tuple, k: &FinFun| {
            let (s1, s2) = sigma.split_at(split);
            let (x1, x2) = x.split_at(cov_split);
            let y2 = h.play(&s2, &x2);
            let k1 = FinFun::from_fn(
                g.codomain.cov().clone(),
                g.codomain.contra().clone(),
                |y1| k.apply(&y1.concat(&y2)).split_at(contra_split).0,
            );
            if !g.rational(&s1, &x1, &k1) {
                return false;
            }
            let y1 = g.play(&s1, &x1);
            let k2 = FinFun::from_fn(
                h.codomain.cov().clone(),
                h.codomain.contra().clone(),
                |y2| k.apply(&y1.concat(y2)).split_at(contra_split).1,
            );
            h.rational(&s2, &x2, &k2)
        }
    };
    Pregame {
        domain,
        codomain,
        strategy,
        play: Arc::new(play),
        coplay: Arc::new(coplay),
        rational: Arc::new(rational),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{
        computation, extensionally_equal, identity, teleological_unit, Caps, Interface,
    };
    use crate::finite::{compose_fun, enumerate_functions, FinSet, Ports, Tuple};

    fn set(name: &str, elems: &[&str]) -> FinSet {
        FinSet::new(name, elems.iter().copied()).unwrap()
    }

    #[test]
    fn compose_rejects_mismatched_interfaces() {
        let a = Ports::single(set("A", &["a", "b"]));
        let b = Ports::single(set("B", &["0"]));
        let g = identity(&Interface::new(a, Ports::empty()));
        let h = identity(&Interface::new(b, Ports::empty()));
        match compose(&h, &g) {
            Err(Error::InterfaceMismatch { expected, found }) => {
                assert_eq!(expected, "A ⊗ 1*");
                assert_eq!(found, "B ⊗ 1*");
            }
            other => panic!("expected interface mismatch, got {other:?}"),
        }
    }

    #[test]
    fn identity_laws_extensionally() {
        let a = Ports::single(set("A", &["a", "b"]));
        let r = Ports::single(set("R", &["0", "1"]));
        let g = crate::core::decision(Ports::empty(), a.clone(), r.clone(), |s, _, k| {
            k.apply(s.apply(&Tuple::unit())).components()[0] == 1
        })
        .unwrap();
        let caps = Caps::default();
        let left = compose(&identity(g.codomain()), &g).unwrap();
        let right = compose(&g, &identity(g.domain())).unwrap();
        assert!(extensionally_equal(&left, &g, &caps).unwrap());
        assert!(extensionally_equal(&right, &g, &caps).unwrap());
    }

    #[test]
    fn composing_computations_composes_functions() {
        let a = Ports::single(set("A", &["a", "b"]));
        let b = Ports::single(set("B", &["0", "1", "2"]));
        let caps = Caps::default();
        for f in enumerate_functions(&a, &b, 100).unwrap() {
            for g in enumerate_functions(&b, &a, 10000).unwrap() {
                let piped = compose(&computation(&g), &computation(&f)).unwrap();
                let direct = computation(&compose_fun(&g, &f).unwrap());
                assert!(extensionally_equal(&piped, &direct, &caps).unwrap());
            }
        }
    }

    #[test]
    fn tensor_of_computations_is_componentwise() {
        let a = Ports::single(set("A", &["a", "b"]));
        let b = Ports::single(set("B", &["0", "1"]));
        let f = FinFun::from_fn(a.clone(), a.clone(), |t| {
            Tuple::new(vec![1 - t.components()[0]])
        });
        let g = FinFun::identity(&b);
        let t = tensor(&computation(&f), &computation(&g));
        let product = FinFun::from_fn(a.concat(&b), a.concat(&b), |t| {
            Tuple::new(vec![1 - t.components()[0], t.components()[1]])
        });
        assert!(
            extensionally_equal(&t, &computation(&product), &Caps::default()).unwrap()
        );
    }

    #[test]
    fn tensor_of_identities_is_identity_of_tensor() {
        let i = Interface::new(
            Ports::single(set("A", &["a", "b"])),
            Ports::single(set("R", &["0"])),
        );
        let j = Interface::new(Ports::empty(), Ports::single(set("S", &["s", "t"])));
        let t = tensor(&identity(&i), &identity(&j));
        let id = identity(&i.tensor(&j));
        assert!(extensionally_equal(&t, &id, &Caps::default()).unwrap());
    }

    #[test]
    fn teleological_naturality_for_a_sample_function() {
        // For a function f, feeding f's output into a cup equals feeding the
        // input into a cup whose backward wire applies f.
        let x = Ports::single(set("X", &["a", "b", "c"]));
        let y = Ports::single(set("Y", &["0", "1"]));
        let f = FinFun::from_fn(x.clone(), y.clone(), |t| {
            Tuple::new(vec![t.components()[0] % 2])
        });
        let lhs = compose(
            &teleological_unit(y.clone()),
            &tensor(&computation(&f), &crate::core::cocomputation(&FinFun::identity(&y))),
        )
        .unwrap();
        let rhs = compose(
            &teleological_unit(x.clone()),
            &tensor(&computation(&FinFun::identity(&x)), &crate::core::cocomputation(&f)),
        )
        .unwrap();
        assert!(extensionally_equal(&lhs, &rhs, &Caps::default()).unwrap());
    }
}
