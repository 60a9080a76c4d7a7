//! The category of pregames: interfaces as objects, pregames as morphisms.
//!
//! A pregame from `X ⊗ S*` to `Y ⊗ R*` owns a set of strategy profiles, a
//! forward `play` function `Σ → (X → Y)`, a backward `coplay` function
//! `Σ → (X × R → S)`, and a rationality relation between profiles and
//! contexts `(x, k : Y → R)`. Strategy profiles are kept as *flattened*
//! lists of atomic components so that both bracketings of a composition
//! chain enumerate profiles identically.

mod analysis;
mod combinators;
mod generators;

pub use analysis::{equilibria, extensional_cost, extensionally_equal};
pub use combinators::{compose, tensor};
pub use generators::{
    cocomputation, computation, decision, decision_capped, identity, structural, swap_cov,
    teleological_unit,
};

use std::fmt;
use std::sync::Arc;

use crate::finite::{enumerate_tuples, FinFun, FinSet, Ports, Tuple};

/// Enumeration budgets for the exhaustive parts of the engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Cap on `|cod|^|dom|` when enumerating function spaces (decision
    /// strategy sets, continuation spaces).
    pub functions: u64,
    /// Cap on `|Σ|` when enumerating equilibria.
    pub profiles: u64,
    /// Cap on `|Σ|·|X|·|R^Y|` when deciding extensional equality.
    pub contexts: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            functions: 1_000_000,
            profiles: 100_000,
            contexts: 1_000_000,
        }
    }
}

impl Caps {
    /// One cap for everything, e.g. from an environment override.
    pub fn uniform(cap: u64) -> Self {
        Caps {
            functions: cap,
            profiles: cap,
            contexts: cap,
        }
    }
}

/// An object of the category: a covariant and a contravariant bundle of
/// ports, conventionally written `X ⊗ S*`. Port lists with unit components
/// are kept erased, so the monoidal unit is literally `Interface::unit()`
/// and associators and unitors are identities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interface {
    cov: Ports,
    contra: Ports,
}

impl Interface {
    pub fn new(cov: Ports, contra: Ports) -> Self {
        Interface { cov, contra }
    }

    /// The monoidal unit `1 ⊗ 1*`.
    pub fn unit() -> Self {
        Interface::default()
    }

    pub fn cov(&self) -> &Ports {
        &self.cov
    }

    pub fn contra(&self) -> &Ports {
        &self.contra
    }

    pub fn is_unit(&self) -> bool {
        self.cov.is_empty() && self.contra.is_empty()
    }

    /// Componentwise concatenation.
    pub fn tensor(&self, other: &Interface) -> Interface {
        Interface {
            cov: self.cov.concat(&other.cov),
            contra: self.contra.concat(&other.contra),
        }
    }
}

impl fmt::Display for Interface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = if self.cov.is_empty() {
            vec!["1".to_string()]
        } else {
            self.cov.sets().iter().map(|s| s.name().to_string()).collect()
        };
        if self.contra.is_empty() {
            parts.push("1*".to_string());
        } else {
            parts.extend(self.contra.sets().iter().map(|s| format!("{}*", s.name())));
        }
        write!(f, "{}", parts.join(" ⊗ "))
    }
}

/// The environment a pregame faces: a history over its domain's covariant
/// ports and a continuation from its codomain's covariant ports to its
/// codomain's contravariant ports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    pub history: Tuple,
    pub continuation: FinFun,
}

impl Context {
    pub fn new(history: Tuple, continuation: FinFun) -> Self {
        Context {
            history,
            continuation,
        }
    }

    /// True when this context has the right shape for `game`.
    pub fn fits(&self, game: &Pregame) -> bool {
        game.domain().cov().admits(&self.history)
            && self.continuation.dom() == game.codomain().cov()
            && self.continuation.cod() == game.codomain().contra()
    }
}

pub(crate) type PlayFn = Arc<dyn Fn(&Tuple, &Tuple) -> Tuple + Send + Sync>;
pub(crate) type CoplayFn = Arc<dyn Fn(&Tuple, &Tuple, &Tuple) -> Tuple + Send + Sync>;
pub(crate) type RationalFn = Arc<dyn Fn(&Tuple, &Tuple, &FinFun) -> bool + Send + Sync>;

/// A morphism of the category. Cheap to clone; all behavior is shared.
#[derive(Clone)]
pub struct Pregame {
    pub(crate) domain: Interface,
    pub(crate) codomain: Interface,
    pub(crate) strategy: Vec<FinSet>,
    pub(crate) play: PlayFn,
    pub(crate) coplay: CoplayFn,
    pub(crate) rational: RationalFn,
}

impl Pregame {
    pub fn domain(&self) -> &Interface {
        &self.domain
    }

    pub fn codomain(&self) -> &Interface {
        &self.codomain
    }

    /// The flattened strategy components whose product is the profile set.
    pub fn strategy_components(&self) -> &[FinSet] {
        &self.strategy
    }

    /// The strategy components as a port list, for enumeration and labels.
    pub fn strategy_ports(&self) -> Ports {
        Ports::new(self.strategy.clone())
    }

    /// All strategy profiles in enumeration order.
    pub fn strategy_profiles(&self) -> Vec<Tuple> {
        enumerate_tuples(&self.strategy_ports())
    }

    /// Component labels of a profile, for presentation.
    pub fn profile_labels(&self, sigma: &Tuple) -> Vec<String> {
        sigma
            .components()
            .iter()
            .zip(&self.strategy)
            .map(|(&c, s)| s.elements()[c].clone())
            .collect()
    }

    /// Forward behavior at a profile.
    pub fn play(&self, sigma: &Tuple, x: &Tuple) -> Tuple {
        debug_assert!(self.strategy_ports().admits(sigma));
        debug_assert!(self.domain.cov().admits(x));
        (self.play)(sigma, x)
    }

    /// Backward outcome propagation at a profile.
    pub fn coplay(&self, sigma: &Tuple, x: &Tuple, r: &Tuple) -> Tuple {
        debug_assert!(self.codomain.contra().admits(r));
        (self.coplay)(sigma, x, r)
    }

    /// Whether the profile is deviation-free in the context `(x, k)`.
    pub fn rational(&self, sigma: &Tuple, x: &Tuple, k: &FinFun) -> bool {
        debug_assert!(k.dom() == self.codomain.cov() && k.cod() == self.codomain.contra());
        (self.rational)(sigma, x, k)
    }

    /// [`Pregame::rational`] taking a packaged context.
    pub fn rational_in(&self, sigma: &Tuple, ctx: &Context) -> bool {
        debug_assert!(ctx.fits(self));
        self.rational(sigma, &ctx.history, &ctx.continuation)
    }

    /// True when the outer interface is trivial on both open sides, so the
    /// rationality relation is a unary predicate on profiles.
    pub fn is_closed(&self) -> bool {
        self.domain.cov().is_empty() && self.codomain.contra().is_empty()
    }
}

impl fmt::Debug for Pregame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Pregame")
            .field("domain", &self.domain.to_string())
            .field("codomain", &self.codomain.to_string())
            .field(
                "strategy",
                &self
                    .strategy
                    .iter()
                    .map(|s| format!("{}[{}]", s.name(), s.len()))
                    .collect::<Vec<_>>(),
            )
            .finish_non_exhaustive()
    }
}
