//! Named finite sets, tuple values over port lists, and total functions as
//! dense tables.
//!
//! A *port list* is an ordered list of finite sets; its tuples are indexed
//! lexicographically (leftmost port most significant) so that every tuple
//! has a dense rank. Functions store one output tuple per input rank, which
//! makes application, composition and exhaustive enumeration cheap and
//! deterministic. The empty port list is the unit: it has exactly one tuple,
//! written `•`.

use std::fmt;

use crate::error::Error;

/// Default cap on exhaustive function enumeration.
pub const DEFAULT_FUNCTION_CAP: u64 = 1_000_000;

/// A named finite set with a fixed element order.
///
/// Identity is by name *and* element list: two sets with the same shape but
/// different names are distinct, which keeps diagnostics readable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinSet {
    name: String,
    elements: Vec<String>,
}

impl FinSet {
    /// Builds a set, rejecting duplicate element labels. Empty sets are
    /// permitted here; constructors that cannot tolerate them check again.
    pub fn new<N, I, E>(name: N, elements: I) -> Result<Self, Error>
    where
        N: Into<String>,
        I: IntoIterator<Item = E>,
        E: Into<String>,
    {
        let name = name.into();
        let elements: Vec<String> = elements.into_iter().map(Into::into).collect();
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].iter().any(|prev| prev == e) {
                return Err(Error::DuplicateElement {
                    set: name,
                    element: e.clone(),
                });
            }
        }
        Ok(FinSet { name, elements })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// A value over a port list: one element index per port. The empty tuple is
/// the unique value `•` of the empty port list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tuple(Vec<usize>);

impl Tuple {
    pub fn new(components: Vec<usize>) -> Self {
        Tuple(components)
    }

    /// The unique value of the empty port list.
    pub fn unit() -> Self {
        Tuple(Vec::new())
    }

    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Tuple) -> Tuple {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Tuple(v)
    }

    pub fn split_at(&self, mid: usize) -> (Tuple, Tuple) {
        let (a, b) = self.0.split_at(mid);
        (Tuple(a.to_vec()), Tuple(b.to_vec()))
    }
}

/// An ordered list of finite sets; the shape of a bundle of wires.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ports(Vec<FinSet>);

impl Ports {
    pub fn new(sets: Vec<FinSet>) -> Self {
        Ports(sets)
    }

    /// The empty port list, i.e. the unit object.
    pub fn empty() -> Self {
        Ports(Vec::new())
    }

    pub fn single(set: FinSet) -> Self {
        Ports(vec![set])
    }

    pub fn sets(&self) -> &[FinSet] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of tuples, i.e. the product of the port sizes. The empty
    /// product is 1.
    pub fn tuple_count(&self) -> u128 {
        self.0.iter().map(|s| s.len() as u128).product()
    }

    pub fn concat(&self, other: &Ports) -> Ports {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Ports(v)
    }

    /// True when `t` has one valid component index per port.
    pub fn admits(&self, t: &Tuple) -> bool {
        t.len() == self.len()
            && t.components()
                .iter()
                .zip(&self.0)
                .all(|(&c, s)| c < s.len())
    }

    /// Dense rank of a tuple in lexicographic order (leftmost port most
    /// significant).
    pub fn rank(&self, t: &Tuple) -> usize {
        debug_assert!(self.admits(t));
        let mut r = 0usize;
        for (&c, s) in t.components().iter().zip(&self.0) {
            r = r * s.len() + c;
        }
        r
    }

    /// Inverse of [`Ports::rank`].
    pub fn unrank(&self, mut r: usize) -> Tuple {
        let mut out = vec![0usize; self.len()];
        for (slot, s) in out.iter_mut().zip(&self.0).rev() {
            *slot = r % s.len();
            r /= s.len();
        }
        Tuple(out)
    }

    /// Renders a tuple using the element labels: `•` for the empty tuple,
    /// the bare label for a single port, `(a,b)` otherwise.
    pub fn tuple_label(&self, t: &Tuple) -> String {
        debug_assert!(self.admits(t));
        match t.len() {
            0 => "•".to_string(),
            1 => self.0[0].elements()[t.components()[0]].clone(),
            _ => {
                let parts: Vec<&str> = t
                    .components()
                    .iter()
                    .zip(&self.0)
                    .map(|(&c, s)| s.elements()[c].as_str())
                    .collect();
                format!("({})", parts.join(","))
            }
        }
    }

    /// Set names joined as a product, `1` when empty.
    pub fn product_label(&self) -> String {
        if self.0.is_empty() {
            "1".to_string()
        } else {
            self.0
                .iter()
                .map(|s| s.name().to_string())
                .collect::<Vec<_>>()
                .join("×")
        }
    }
}

/// All tuples of a port list in lexicographic order. The empty port list
/// yields exactly `[•]`; a port list containing an empty set yields nothing.
pub fn enumerate_tuples(ports: &Ports) -> Vec<Tuple> {
    let n = ports.tuple_count();
    (0..n as usize).map(|r| ports.unrank(r)).collect()
}

/// A total function between port lists, stored as a dense table indexed by
/// the rank of the input tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinFun {
    dom: Ports,
    cod: Ports,
    table: Vec<Tuple>,
}

impl FinFun {
    /// Builds a function from an explicit table, `table[rank(x)] = f(x)`.
    pub fn new(dom: Ports, cod: Ports, table: Vec<Tuple>) -> Result<Self, Error> {
        if table.len() as u128 != dom.tuple_count() {
            return Err(Error::InterfaceMismatch {
                expected: format!("{} table entries", dom.tuple_count()),
                found: format!("{} table entries", table.len()),
            });
        }
        if let Some(bad) = table.iter().find(|t| !cod.admits(t)) {
            return Err(Error::InterfaceMismatch {
                expected: format!("value over {}", cod.product_label()),
                found: format!("tuple of arity {}", bad.len()),
            });
        }
        Ok(FinFun { dom, cod, table })
    }

    /// Materializes a function from a closure. The closure must return valid
    /// tuples over `cod`; this is checked in debug builds only.
    pub fn from_fn(dom: Ports, cod: Ports, f: impl Fn(&Tuple) -> Tuple) -> Self {
        let table: Vec<Tuple> = enumerate_tuples(&dom).iter().map(|x| f(x)).collect();
        debug_assert!(table.iter().all(|t| cod.admits(t)));
        FinFun { dom, cod, table }
    }

    pub fn identity(ports: &Ports) -> Self {
        FinFun::from_fn(ports.clone(), ports.clone(), |x| x.clone())
    }

    pub fn dom(&self) -> &Ports {
        &self.dom
    }

    pub fn cod(&self) -> &Ports {
        &self.cod
    }

    pub fn table(&self) -> &[Tuple] {
        &self.table
    }

    pub fn apply(&self, x: &Tuple) -> &Tuple {
        &self.table[self.dom.rank(x)]
    }

    /// Rank of this function within [`enumerate_functions`] order.
    pub fn function_rank(&self) -> u128 {
        let base = self.cod.tuple_count();
        let mut r = 0u128;
        for t in &self.table {
            r = r * base + self.cod.rank(t) as u128;
        }
        r
    }

    /// Compact rendering of the mapping. A function from the one-tuple
    /// domain collapses to the label of its image, so strategies of a
    /// first mover print as the move itself.
    pub fn mapping_label(&self) -> String {
        if self.table.len() == 1 {
            self.cod.tuple_label(&self.table[0])
        } else {
            enumerate_tuples(&self.dom)
                .iter()
                .zip(&self.table)
                .map(|(x, y)| {
                    format!("{}↦{}", self.dom.tuple_label(x), self.cod.tuple_label(y))
                })
                .collect::<Vec<_>>()
                .join(",")
        }
    }
}

/// Composition `g ∘ f`: requires `cod(f) = dom(g)`.
pub fn compose_fun(g: &FinFun, f: &FinFun) -> Result<FinFun, Error> {
    if f.cod != g.dom {
        return Err(Error::InterfaceMismatch {
            expected: f.cod.product_label(),
            found: g.dom.product_label(),
        });
    }
    Ok(FinFun {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        table: f.table.iter().map(|y| g.apply(y).clone()).collect(),
    })
}

/// All total functions `dom → cod` in lexicographic order of their tables
/// (the image of the first domain tuple varies slowest).
pub fn enumerate_functions(dom: &Ports, cod: &Ports, cap: u64) -> Result<Vec<FinFun>, Error> {
    let count = count_functions(dom, cod);
    if count > cap as u128 {
        return Err(Error::DomainTooLarge {
            what: format!(
                "enumerating functions {} → {}",
                dom.product_label(),
                cod.product_label()
            ),
            count,
            cap,
        });
    }
    Ok(FunctionIter::new(dom.clone(), cod.clone()).collect())
}

/// `|cod tuples| ^ |dom tuples|`; 0 when no such function exists (nonempty
/// domain, empty codomain), 1 when the domain is empty.
pub fn count_functions(dom: &Ports, cod: &Ports) -> u128 {
    let nd = dom.tuple_count();
    let nc = cod.tuple_count();
    if nd == 0 {
        return 1;
    }
    if nc == 0 {
        return 0;
    }
    let mut count: u128 = 1;
    for _ in 0..nd {
        count = count.saturating_mul(nc);
    }
    count
}

/// Lazy version of [`enumerate_functions`], used where materializing every
/// function at once would be wasteful.
pub struct FunctionIter {
    dom: Ports,
    cod: Ports,
    digits: Vec<usize>,
    base: usize,
    done: bool,
}

impl FunctionIter {
    pub fn new(dom: Ports, cod: Ports) -> Self {
        let nd = dom.tuple_count() as usize;
        let base = cod.tuple_count() as usize;
        let done = base == 0 && nd > 0;
        FunctionIter {
            dom,
            cod,
            digits: vec![0; nd],
            base,
            done,
        }
    }
}

impl Iterator for FunctionIter {
    type Item = FinFun;

    fn next(&mut self) -> Option<FinFun> {
        if self.done {
            return None;
        }
        let table: Vec<Tuple> = self.digits.iter().map(|&d| self.cod.unrank(d)).collect();
        // Increment with the first digit most significant, matching table
        // lexicographic order.
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.base {
                break;
            }
            self.digits[i] = 0;
        }
        Some(FinFun {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            table,
        })
    }
}

/// The diagonal `X → X ++ X`.
pub fn copy_fun(ports: &Ports) -> FinFun {
    FinFun::from_fn(ports.clone(), ports.concat(ports), |x| x.concat(x))
}

/// The terminal map `X → 1`.
pub fn delete_fun(ports: &Ports) -> FinFun {
    FinFun::from_fn(ports.clone(), Ports::empty(), |_| Tuple::unit())
}

/// Projection picking the given port positions, in the given order.
pub fn project_fun(ports: &Ports, indices: &[usize]) -> FinFun {
    let cod = Ports::new(indices.iter().map(|&i| ports.sets()[i].clone()).collect());
    let idx = indices.to_vec();
    FinFun::from_fn(ports.clone(), cod, move |x| {
        Tuple::new(idx.iter().map(|&i| x.components()[i]).collect())
    })
}

/// Reorders ports by a permutation: output port `j` is input port `perm[j]`.
pub fn permute_fun(ports: &Ports, perm: &[usize]) -> Result<FinFun, Error> {
    validate_permutation(perm, ports.len())?;
    Ok(project_fun(ports, perm))
}

/// Block transposition `a ++ b → b ++ a`.
pub fn swap_fun(a: &Ports, b: &Ports) -> FinFun {
    let dom = a.concat(b);
    let perm: Vec<usize> = (a.len()..a.len() + b.len()).chain(0..a.len()).collect();
    project_fun(&dom, &perm)
}

/// Checks that `perm` is a permutation of `0..len`.
pub fn validate_permutation(perm: &[usize], len: usize) -> Result<(), Error> {
    if perm.len() != len {
        return Err(Error::LengthMismatch {
            perm: perm.len(),
            ports: len,
        });
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || seen[p] {
            return Err(Error::LengthMismatch {
                perm: perm.len(),
                ports: len,
            });
        }
        seen[p] = true;
    }
    Ok(())
}

/// Inverse of a permutation.
pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (j, &p) in perm.iter().enumerate() {
        inv[p] = j;
    }
    inv
}
