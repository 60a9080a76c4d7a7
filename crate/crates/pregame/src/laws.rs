//! Randomized and exhaustive checks of the algebraic laws the combinators
//! satisfy: identity and associativity for sequencing, interchange and
//! symmetry for the tensor, and naturality of the feedback cup.
//!
//! Random games are drawn from seeded recipes over a mix of decisions with
//! random rationality tables, computations over random function tables, the
//! feedback cup, wire permutations, and both combinators to depth 3, with
//! interface sizes kept small enough that extensional equality stays inside
//! its enumeration budget. Identical seeds give identical reports.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::core::{
    cocomputation, compose, computation, decision_capped, extensional_cost, extensionally_equal,
    identity, structural, swap_cov, teleological_unit, tensor, Caps, Interface, Pregame,
};
use crate::finite::{count_functions, enumerate_functions, FinFun, FinSet, Ports};

/// Result of one law suite.
#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: u32,
    pub failed: u32,
    pub counterexample: Option<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> Self {
        SuiteOutcome {
            name,
            passed: 0,
            failed: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// Runs the five randomized suites with one seed.
pub fn run_all(seed: u64, iters: u32, caps: &Caps) -> Vec<SuiteOutcome> {
    vec![
        identity_suite(seed, iters, caps),
        associativity_suite(seed, iters, caps),
        interchange_suite(seed, iters, caps),
        symmetry_suite(seed, iters, caps),
        teleological_suite(seed, iters, caps),
    ]
}

// Per-suite salts keep the streams independent of each other while staying
// reproducible from the one user-facing seed.
const SALT_IDENTITY: u64 = 0x1;
const SALT_ASSOC: u64 = 0x2;
const SALT_INTERCHANGE: u64 = 0x3;
const SALT_SYMMETRY: u64 = 0x4;
const SALT_TELEOLOGICAL: u64 = 0x5;

fn suite_rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ salt)
}

/// Composing with the identity on either side changes nothing.
pub fn identity_suite(seed: u64, iters: u32, caps: &Caps) -> SuiteOutcome {
    let mut rng = suite_rng(seed, SALT_IDENTITY);
    let mut out = SuiteOutcome::new("identity");
    let mut gen = Gen::new(&mut rng, budget(caps));
    for _ in 0..iters {
        let recipe = gen.pregame();
        let g = recipe.build();
        let left = compose(&identity(g.codomain()), &g).expect("interfaces match");
        let right = compose(&g, &identity(g.domain())).expect("interfaces match");
        let ok = matches!(extensionally_equal(&left, &g, caps), Ok(true))
            && matches!(extensionally_equal(&right, &g, caps), Ok(true));
        out.record(ok, || format!("identity law failed for {recipe}"));
    }
    out
}

/// Both bracketings of a three-stage pipeline agree.
pub fn associativity_suite(seed: u64, iters: u32, caps: &Caps) -> SuiteOutcome {
    let mut rng = suite_rng(seed, SALT_ASSOC);
    let mut out = SuiteOutcome::new("associativity");
    let mut gen = Gen::new(&mut rng, budget(caps));
    for _ in 0..iters {
        let (a, b, c) = gen.composable_triple();
        let (ga, gb, gc) = (a.build(), b.build(), c.build());
        let left = compose(&compose(&gc, &gb).unwrap(), &ga).unwrap();
        let right = compose(&gc, &compose(&gb, &ga).unwrap()).unwrap();
        let ok = matches!(extensionally_equal(&left, &right, caps), Ok(true));
        out.record(ok, || {
            format!("associativity failed for {a}\n  then {b}\n  then {c}")
        });
    }
    out
}

/// Tensoring two pipelines equals piping two tensors.
pub fn interchange_suite(seed: u64, iters: u32, caps: &Caps) -> SuiteOutcome {
    let mut rng = suite_rng(seed, SALT_INTERCHANGE);
    let mut out = SuiteOutcome::new("interchange");
    let mut gen = Gen::new(&mut rng, budget(caps) / 4);
    for _ in 0..iters {
        let (a, a2) = gen.composable_pair();
        let (b, b2) = gen.composable_pair();
        let (ga, ga2, gb, gb2) = (a.build(), a2.build(), b.build(), b2.build());
        let lhs = tensor(
            &compose(&ga2, &ga).unwrap(),
            &compose(&gb2, &gb).unwrap(),
        );
        if extensional_cost(&lhs) > budget(caps) {
            // Tensoring multiplies the grids; skip oversized draws rather
            // than biasing the per-side generator any smaller.
            out.record(true, String::new);
            continue;
        }
        let rhs = compose(&tensor(&ga2, &gb2), &tensor(&ga, &gb)).unwrap();
        let ok = matches!(extensionally_equal(&lhs, &rhs, caps), Ok(true));
        out.record(ok, || {
            format!("interchange failed for {a} ; {a2} beside {b} ; {b2}")
        });
    }
    out
}

/// The wire swap is self-inverse and commutes with computations.
pub fn symmetry_suite(seed: u64, iters: u32, caps: &Caps) -> SuiteOutcome {
    let mut rng = suite_rng(seed, SALT_SYMMETRY);
    let mut out = SuiteOutcome::new("symmetry");
    let mut gen = Gen::new(&mut rng, budget(caps));
    for _ in 0..iters {
        let f = gen.fun();
        let g = gen.fun();
        let ok = swap_checks(&f, &g, caps);
        out.record(ok, || {
            format!(
                "symmetry failed for f: {} and g: {}",
                describe_fun(&f),
                describe_fun(&g)
            )
        });
    }
    out
}

/// Feeding a computed value into a cup equals cupping the input and
/// computing on the backward wire.
pub fn teleological_suite(seed: u64, iters: u32, caps: &Caps) -> SuiteOutcome {
    let mut rng = suite_rng(seed, SALT_TELEOLOGICAL);
    let mut out = SuiteOutcome::new("teleological");
    let mut gen = Gen::new(&mut rng, budget(caps));
    for _ in 0..iters {
        let f = gen.fun();
        let ok = cup_naturality_holds(&f, caps);
        out.record(ok, || format!("cup naturality failed for {}", describe_fun(&f)));
    }
    out
}

/// Cup naturality over every function between three-element sets, plus all
/// functions from two to three and from three to two elements.
pub fn exhaustive_teleological(caps: &Caps) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("teleological-exhaustive");
    for (nx, ny) in [(3usize, 3usize), (2, 3), (3, 2)] {
        let x = canonical_ports("X", nx);
        let y = canonical_ports("Y", ny);
        for f in enumerate_functions(&x, &y, 10_000).unwrap() {
            let ok = cup_naturality_holds(&f, caps);
            out.record(ok, || format!("cup naturality failed for {}", describe_fun(&f)));
        }
    }
    out
}

/// Swap involution and naturality over every pair of functions between sets
/// of at most `max_elems` elements.
pub fn exhaustive_swap_naturality(max_elems: usize, caps: &Caps) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("symmetry-exhaustive");
    for na in 1..=max_elems {
        for nb in 1..=max_elems {
            for nc in 1..=max_elems {
                for nd in 1..=max_elems {
                    let a = canonical_ports("A", na);
                    let b = canonical_ports("B", nb);
                    let c = canonical_ports("C", nc);
                    let d = canonical_ports("D", nd);
                    for f in enumerate_functions(&a, &b, 10_000).unwrap() {
                        for g in enumerate_functions(&c, &d, 10_000).unwrap() {
                            let ok = swap_checks(&f, &g, caps);
                            out.record(ok, || {
                                format!(
                                    "symmetry failed for f: {} and g: {}",
                                    describe_fun(&f),
                                    describe_fun(&g)
                                )
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

fn cup_naturality_holds(f: &FinFun, caps: &Caps) -> bool {
    let x = f.dom().clone();
    let y = f.cod().clone();
    let lhs = compose(
        &teleological_unit(y.clone()),
        &tensor(&computation(f), &cocomputation(&FinFun::identity(&y))),
    )
    .expect("interfaces match");
    let rhs = compose(
        &teleological_unit(x.clone()),
        &tensor(&computation(&FinFun::identity(&x)), &cocomputation(f)),
    )
    .expect("interfaces match");
    matches!(extensionally_equal(&lhs, &rhs, caps), Ok(true))
}

fn swap_checks(f: &FinFun, g: &FinFun, caps: &Caps) -> bool {
    let (a, b) = (f.dom().clone(), f.cod().clone());
    let (c, d) = (g.dom().clone(), g.cod().clone());
    // Naturality: swapping after acting componentwise equals acting
    // componentwise (in swapped order) after swapping.
    let lhs = compose(&swap_cov(&b, &d), &tensor(&computation(f), &computation(g)))
        .expect("interfaces match");
    let rhs = compose(&tensor(&computation(g), &computation(f)), &swap_cov(&a, &c))
        .expect("interfaces match");
    if !matches!(extensionally_equal(&lhs, &rhs, caps), Ok(true)) {
        return false;
    }
    // Involution: swapping twice is the identity.
    let round = compose(&swap_cov(&c, &a), &swap_cov(&a, &c)).expect("interfaces match");
    let id = identity(&Interface::new(a.concat(&c), Ports::empty()));
    matches!(extensionally_equal(&round, &id, caps), Ok(true))
}

fn canonical_ports(name: &str, n: usize) -> Ports {
    Ports::single(FinSet::new(name, (0..n).map(|i| format!("e{i}"))).unwrap())
}

fn describe_fun(f: &FinFun) -> String {
    format!(
        "{} → {} {{{}}}",
        f.dom().product_label(),
        f.cod().product_label(),
        f.mapping_label()
    )
}

fn budget(caps: &Caps) -> u128 {
    (caps.contexts as u128).min(20_000)
}

/// A reproducible construction plan for a random pregame; kept around so a
/// failing law can print what it was checked on.
#[derive(Clone, Debug)]
enum Recipe {
    Identity(Interface),
    Structural {
        dom: Interface,
        cov: Vec<usize>,
        contra: Vec<usize>,
    },
    Tau(Ports),
    Computation(FinFun),
    Cocomputation(FinFun),
    Decision {
        x: Ports,
        y: Ports,
        r: Ports,
        table: Vec<bool>,
    },
    Compose(Box<Recipe>, Box<Recipe>),
    Tensor(Box<Recipe>, Box<Recipe>),
}

impl Recipe {
    fn codomain(&self) -> Interface {
        match self {
            Recipe::Identity(i) => i.clone(),
            Recipe::Structural { dom, cov, contra } => {
                let cov_ports = Ports::new(
                    cov.iter().map(|&p| dom.cov().sets()[p].clone()).collect(),
                );
                let contra_ports = Ports::new(
                    contra
                        .iter()
                        .map(|&p| dom.contra().sets()[p].clone())
                        .collect(),
                );
                Interface::new(cov_ports, contra_ports)
            }
            Recipe::Tau(_) => Interface::unit(),
            Recipe::Computation(f) => Interface::new(f.cod().clone(), Ports::empty()),
            Recipe::Cocomputation(f) => Interface::new(Ports::empty(), f.dom().clone()),
            Recipe::Decision { y, r, .. } => Interface::new(y.clone(), r.clone()),
            Recipe::Compose(_, then) => then.codomain(),
            Recipe::Tensor(l, r) => l.codomain().tensor(&r.codomain()),
        }
    }

    fn build(&self) -> Pregame {
        match self {
            Recipe::Identity(i) => identity(i),
            Recipe::Structural { dom, cov, contra } => {
                structural(dom, cov, contra).expect("generated permutations are valid")
            }
            Recipe::Tau(p) => teleological_unit(p.clone()),
            Recipe::Computation(f) => computation(f),
            Recipe::Cocomputation(f) => cocomputation(f),
            Recipe::Decision { x, y, r, table } => {
                let nx = x.tuple_count() as usize;
                let nk = count_functions(y, r) as usize;
                let (xc, table) = (x.clone(), table.clone());
                decision_capped(x.clone(), y.clone(), r.clone(), 10_000, move |s, xv, k| {
                    let idx = (s.function_rank() as usize * nx + xc.rank(xv)) * nk
                        + k.function_rank() as usize;
                    table[idx]
                })
                .expect("generated decisions fit the cap")
            }
            Recipe::Compose(first, then) => {
                compose(&then.build(), &first.build()).expect("generated chain composes")
            }
            Recipe::Tensor(l, r) => tensor(&l.build(), &r.build()),
        }
    }
}

impl std::fmt::Display for Recipe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Recipe::Identity(i) => write!(f, "id[{i}]"),
            Recipe::Structural { dom, cov, contra } => {
                write!(f, "perm[{dom}; cov={cov:?}, contra={contra:?}]")
            }
            Recipe::Tau(p) => write!(f, "cup[{}]", p.product_label()),
            Recipe::Computation(g) => write!(f, "fun({})", describe_fun(g)),
            Recipe::Cocomputation(g) => write!(f, "cofun({})", describe_fun(g)),
            Recipe::Decision { x, y, r, table } => {
                let bits: String = table.iter().map(|&b| if b { '1' } else { '0' }).collect();
                write!(
                    f,
                    "decision({} → {} fb {}, table={bits})",
                    x.product_label(),
                    y.product_label(),
                    r.product_label()
                )
            }
            Recipe::Compose(a, b) => write!(f, "({a} ; {b})"),
            Recipe::Tensor(a, b) => write!(f, "({a} || {b})"),
        }
    }
}

struct Gen<'r> {
    rng: &'r mut ChaCha8Rng,
    budget: u128,
    fresh: u32,
}

impl<'r> Gen<'r> {
    fn new(rng: &'r mut ChaCha8Rng, budget: u128) -> Self {
        Gen {
            rng,
            budget,
            fresh: 0,
        }
    }

    fn set(&mut self) -> FinSet {
        let size = self.rng.gen_range(1..=3usize);
        let id = self.fresh;
        self.fresh += 1;
        FinSet::new(format!("S{id}"), (0..size).map(|i| format!("e{i}"))).unwrap()
    }

    fn ports(&mut self) -> Ports {
        let n = match self.rng.gen_range(0..10u32) {
            0..=1 => 0,
            2..=7 => 1,
            _ => 2,
        };
        Ports::new((0..n).map(|_| self.set()).collect())
    }

    fn small_ports(&mut self) -> Ports {
        if self.rng.gen_bool(0.3) {
            Ports::empty()
        } else {
            Ports::single(self.set())
        }
    }

    fn interface(&mut self) -> Interface {
        Interface::new(self.ports(), self.ports())
    }

    fn fun_between(&mut self, dom: &Ports, cod: &Ports) -> FinFun {
        let n = cod.tuple_count() as usize;
        let table = (0..dom.tuple_count() as usize)
            .map(|_| cod.unrank(self.rng.gen_range(0..n)))
            .collect();
        FinFun::new(dom.clone(), cod.clone(), table).expect("table is total by construction")
    }

    fn fun(&mut self) -> FinFun {
        let dom = self.ports();
        let cod = self.ports();
        self.fun_between(&dom, &cod)
    }

    fn permutation(&mut self, len: usize) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..len).collect();
        for i in (1..len).rev() {
            let j = self.rng.gen_range(0..=i);
            perm.swap(i, j);
        }
        perm
    }

    /// A random pregame with a free domain, within the cost budget.
    fn pregame(&mut self) -> Recipe {
        for _ in 0..60 {
            let dom = self.interface();
            let depth = self.rng.gen_range(0..=2u32);
            let r = self.with_domain(&dom, depth);
            if extensional_cost(&r.build()) <= self.budget {
                return r;
            }
        }
        Recipe::Identity(Interface::unit())
    }

    /// Two recipes where the second consumes the first's codomain.
    fn composable_pair(&mut self) -> (Recipe, Recipe) {
        for _ in 0..60 {
            let dom = self.interface();
            let depth = self.rng.gen_range(0..=1u32);
            let a = self.with_domain(&dom, depth);
            let b = self.with_domain(&a.codomain(), depth);
            let chained = compose(&b.build(), &a.build()).expect("chain composes");
            if extensional_cost(&chained) <= self.budget {
                return (a, b);
            }
        }
        (
            Recipe::Identity(Interface::unit()),
            Recipe::Identity(Interface::unit()),
        )
    }

    fn composable_triple(&mut self) -> (Recipe, Recipe, Recipe) {
        for _ in 0..60 {
            let dom = self.interface();
            let depth = self.rng.gen_range(0..=1u32);
            let a = self.with_domain(&dom, depth);
            let b = self.with_domain(&a.codomain(), depth);
            let c = self.with_domain(&b.codomain(), depth);
            let chained = compose(
                &c.build(),
                &compose(&b.build(), &a.build()).expect("chain composes"),
            )
            .expect("chain composes");
            if extensional_cost(&chained) <= self.budget {
                return (a, b, c);
            }
        }
        let unit = Recipe::Identity(Interface::unit());
        (unit.clone(), unit.clone(), unit)
    }

    /// A random recipe with the given domain.
    fn with_domain(&mut self, dom: &Interface, depth: u32) -> Recipe {
        #[derive(Clone, Copy)]
        enum Move {
            Identity,
            Structural,
            Tau,
            Computation,
            Decision,
            Cocomputation,
            Compose,
            Tensor,
        }
        let mut moves = vec![Move::Identity, Move::Structural];
        if dom.cov() == dom.contra() {
            moves.push(Move::Tau);
        }
        if dom.contra().is_empty() {
            moves.push(Move::Computation);
            if dom.cov().tuple_count() <= 3 {
                moves.push(Move::Decision);
                moves.push(Move::Decision);
            }
        }
        if dom.cov().is_empty() {
            moves.push(Move::Cocomputation);
        }
        if depth > 0 {
            moves.push(Move::Compose);
            moves.push(Move::Compose);
            if dom.cov().len() + dom.contra().len() > 0 {
                moves.push(Move::Tensor);
            }
        }
        match moves[self.rng.gen_range(0..moves.len())] {
            Move::Identity => Recipe::Identity(dom.clone()),
            Move::Structural => Recipe::Structural {
                dom: dom.clone(),
                cov: self.permutation(dom.cov().len()),
                contra: self.permutation(dom.contra().len()),
            },
            Move::Tau => Recipe::Tau(dom.cov().clone()),
            Move::Computation => {
                let cod = self.ports();
                Recipe::Computation(self.fun_between(dom.cov(), &cod))
            }
            Move::Cocomputation => {
                let src = self.small_ports();
                Recipe::Cocomputation(self.fun_between(&src, dom.contra()))
            }
            Move::Decision => {
                let y = Ports::single(self.set());
                let r = self.small_ports();
                let n_strategies = count_functions(dom.cov(), &y) as usize;
                let nx = dom.cov().tuple_count() as usize;
                let nk = count_functions(&y, &r) as usize;
                let table = (0..n_strategies * nx * nk)
                    .map(|_| self.rng.gen_bool(0.5))
                    .collect();
                Recipe::Decision {
                    x: dom.cov().clone(),
                    y,
                    r,
                    table,
                }
            }
            Move::Compose => {
                let first = self.with_domain(dom, depth - 1);
                let then = self.with_domain(&first.codomain(), depth - 1);
                Recipe::Compose(Box::new(first), Box::new(then))
            }
            Move::Tensor => {
                let cov_split = self.rng.gen_range(0..=dom.cov().len());
                let contra_split = self.rng.gen_range(0..=dom.contra().len());
                let left = Interface::new(
                    Ports::new(dom.cov().sets()[..cov_split].to_vec()),
                    Ports::new(dom.contra().sets()[..contra_split].to_vec()),
                );
                let right = Interface::new(
                    Ports::new(dom.cov().sets()[cov_split..].to_vec()),
                    Ports::new(dom.contra().sets()[contra_split..].to_vec()),
                );
                Recipe::Tensor(
                    Box::new(self.with_domain(&left, depth - 1)),
                    Box::new(self.with_domain(&right, depth - 1)),
                )
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_on_a_small_run() {
        let caps = Caps::default();
        for outcome in run_all(11, 12, &caps) {
            assert!(
                outcome.all_passed(),
                "{} failed: {:?}",
                outcome.name,
                outcome.counterexample
            );
        }
    }

    #[test]
    fn same_seed_reproduces_the_same_outcome() {
        let caps = Caps::default();
        let a = identity_suite(3, 6, &caps);
        let b = identity_suite(3, 6, &caps);
        assert_eq!(a.passed, b.passed);
        assert_eq!(a.failed, b.failed);
    }

    #[test]
    fn exhaustive_cup_naturality_has_no_failures() {
        let out = exhaustive_teleological(&Caps::default());
        assert_eq!(out.passed, 27 + 9 + 8);
        assert_eq!(out.failed, 0);
    }
}
