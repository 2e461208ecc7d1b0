//! Finite partial orders read as T0 Alexandrov spaces.
//!
//! Open sets are the upper sets of the order and closed sets are the lower
//! sets, so `p ⪯ q` means `p` lies in the closure of `{q}`. Points are opaque
//! string identifiers kept in lexicographic order; every output that lists
//! points is sorted the same way.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A set of points, always iterated in lexicographic order.
pub type Subset = BTreeSet<String>;

/// Default limit on the number of points for exhaustive subset enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 16;

/// A finite partial order, stored reflexively and transitively closed.
#[derive(Clone, PartialEq, Eq)]
pub struct Order {
    elements: Vec<String>,
    index: BTreeMap<String, usize>,
    // row-major, leq[p * n + q] == p ⪯ q
    leq: Vec<bool>,
}

impl fmt::Debug for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Order")
            .field("elements", &self.elements)
            .field("relations", &self.relations())
            .finish()
    }
}

impl Order {
    /// Builds the reflexive-transitive closure of `relations` on `elements`.
    pub fn new<E, S, R, A, B>(elements: E, relations: R) -> Result<Self>
    where
        E: IntoIterator<Item = S>,
        S: Into<String>,
        R: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let names: Subset = elements.into_iter().map(Into::into).collect();
        let elements: Vec<String> = names.into_iter().collect();
        let index = index_of(&elements);
        let n = elements.len();
        let mut leq = vec![false; n * n];
        for (a, b) in relations {
            let i = lookup(&index, a.as_ref())?;
            let j = lookup(&index, b.as_ref())?;
            leq[i * n + j] = true;
        }
        Self::from_matrix(elements, leq)
    }

    /// `elements` must be sorted and duplicate-free.
    pub(crate) fn from_matrix(elements: Vec<String>, mut leq: Vec<bool>) -> Result<Self> {
        let n = elements.len();
        debug_assert_eq!(leq.len(), n * n);
        for i in 0..n {
            leq[i * n + i] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if !leq[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::Cycle(elements[i].clone(), elements[j].clone()));
                }
            }
        }
        let index = index_of(&elements);
        Ok(Self {
            elements,
            index,
            leq,
        })
    }

    /// First pair `(i, k)` with `i ⪯ j ⪯ k` but not `i ⪯ k` in a raw relation
    /// matrix (diagonal assumed present).
    pub(crate) fn first_nontransitive_pair(n: usize, leq: &[bool]) -> Option<(usize, usize)> {
        let rel = |i: usize, j: usize| i == j || leq[i * n + j];
        for i in 0..n {
            for k in 0..n {
                if rel(i, k) {
                    continue;
                }
                if (0..n).any(|j| rel(i, j) && rel(j, k)) {
                    return Some((i, k));
                }
            }
        }
        None
    }

    /// The discrete order on `elements`.
    pub fn discrete<E, S>(elements: E) -> Self
    where
        E: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(elements, std::iter::empty::<(&str, &str)>()).expect("no relations")
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_set(&self) -> Subset {
        self.elements.iter().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &str) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &str) -> Result<usize> {
        lookup(&self.index, p)
    }

    #[inline]
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.elements.len() + j]
    }

    pub fn leq(&self, p: &str, q: &str) -> Result<bool> {
        Ok(self.leq_idx(self.position(p)?, self.position(q)?))
    }

    pub(crate) fn matrix(&self) -> &[bool] {
        &self.leq
    }

    /// All pairs `p ⪯ q` with `p ≠ q`, sorted.
    pub fn relations(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq_idx(i, j) {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    /// Number of non-reflexive pairs.
    pub fn relation_count(&self) -> usize {
        self.leq.iter().filter(|&&b| b).count() - self.len()
    }

    /// True iff every relation of `self` is a relation of `other`.
    /// Both orders must live on the same element set.
    pub fn is_subrelation_of(&self, other: &Order) -> Result<bool> {
        if self.elements != other.elements {
            return Err(Error::ElementMismatch);
        }
        Ok(self.leq.iter().zip(&other.leq).all(|(a, b)| !a || *b))
    }

    /// Covering pairs of the order (its transitive reduction), sorted.
    pub fn hasse_edges(&self) -> Vec<(String, String)> {
        let n = self.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.leq_idx(i, j) {
                    continue;
                }
                let covered = (0..n).all(|k| k == i || k == j || !(self.leq_idx(i, k) && self.leq_idx(k, j)));
                if covered {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    /// Smallest open (upper) set containing `p`.
    pub fn spcl(&self, p: &str) -> Result<Subset> {
        let i = self.position(p)?;
        Ok((0..self.len())
            .filter(|&j| self.leq_idx(i, j))
            .map(|j| self.elements[j].clone())
            .collect())
    }

    /// Closure of `{p}`, the principal lower set.
    pub fn gncl(&self, p: &str) -> Result<Subset> {
        let i = self.position(p)?;
        Ok((0..self.len())
            .filter(|&j| self.leq_idx(j, i))
            .map(|j| self.elements[j].clone())
            .collect())
    }

    pub(crate) fn indices(&self, s: &Subset) -> Result<Vec<usize>> {
        s.iter().map(|p| self.position(p)).collect()
    }

    pub(crate) fn membership(&self, s: &Subset) -> Result<Vec<bool>> {
        let mut member = vec![false; self.len()];
        for i in self.indices(s)? {
            member[i] = true;
        }
        Ok(member)
    }

    pub fn is_upper_set(&self, s: &Subset) -> Result<bool> {
        let member = self.membership(s)?;
        Ok(self.is_upper_mask(&member))
    }

    pub fn is_lower_set(&self, s: &Subset) -> Result<bool> {
        let member = self.membership(s)?;
        Ok(self.is_lower_mask(&member))
    }

    pub(crate) fn is_upper_mask(&self, member: &[bool]) -> bool {
        let n = self.len();
        (0..n).all(|i| !member[i] || (0..n).all(|j| !self.leq_idx(i, j) || member[j]))
    }

    pub(crate) fn is_lower_mask(&self, member: &[bool]) -> bool {
        let n = self.len();
        (0..n).all(|i| !member[i] || (0..n).all(|j| !self.leq_idx(j, i) || member[j]))
    }

    /// The complement of `s` in the element set.
    pub fn complement(&self, s: &Subset) -> Subset {
        self.elements
            .iter()
            .filter(|p| !s.contains(*p))
            .cloned()
            .collect()
    }

    /// Restriction of the order to `s`.
    pub fn subspace(&self, s: &Subset) -> Result<Order> {
        let idx = self.indices(s)?;
        let m = idx.len();
        let mut leq = vec![false; m * m];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                leq[a * m + b] = self.leq_idx(i, j);
            }
        }
        let elements: Vec<String> = idx.iter().map(|&i| self.elements[i].clone()).collect();
        Ok(Order {
            index: index_of(&elements),
            elements,
            leq,
        })
    }

    /// True iff no two distinct points are comparable.
    pub fn is_discrete(&self) -> bool {
        self.relation_count() == 0
    }

    pub fn maximal_elements(&self) -> Subset {
        let n = self.len();
        (0..n)
            .filter(|&i| (0..n).all(|j| j == i || !self.leq_idx(i, j)))
            .map(|i| self.elements[i].clone())
            .collect()
    }

    pub fn minimal_elements(&self) -> Subset {
        let n = self.len();
        (0..n)
            .filter(|&i| (0..n).all(|j| j == i || !self.leq_idx(j, i)))
            .map(|i| self.elements[i].clone())
            .collect()
    }

    /// Number of edges in a longest chain ending at each point.
    pub fn depth_below(&self) -> BTreeMap<String, usize> {
        let n = self.len();
        let mut depth = vec![0usize; n];
        for i in self.linear_extension() {
            depth[i] = (0..n)
                .filter(|&j| j != i && self.leq_idx(j, i))
                .map(|j| depth[j] + 1)
                .max()
                .unwrap_or(0);
        }
        self.elements.iter().cloned().zip(depth).collect()
    }

    /// Indices sorted so that every point comes after everything below it.
    fn linear_extension(&self) -> Vec<usize> {
        let n = self.len();
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by_key(|&i| (0..n).filter(|&j| self.leq_idx(j, i)).count());
        idx
    }

    /// Edges in a longest chain; `-1` for the empty order.
    pub fn longest_chain(&self) -> i64 {
        self.depth_below()
            .values()
            .map(|&d| d as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Cantor–Bendixson filtration: repeatedly adjoin the isolated points of
    /// the remaining subspace. Isolated points of a finite Alexandrov space
    /// are the maximal elements.
    pub fn cb_filtration(&self) -> CbFiltration {
        let n = self.len();
        let mut taken = vec![false; n];
        let mut layers = Vec::new();
        let mut current = Subset::new();
        while current.len() < n {
            let isolated: Vec<usize> = (0..n)
                .filter(|&i| !taken[i])
                .filter(|&i| (0..n).all(|j| j == i || taken[j] || !self.leq_idx(i, j)))
                .collect();
            for &i in &isolated {
                taken[i] = true;
                current.insert(self.elements[i].clone());
            }
            layers.push(current.clone());
        }
        let rank = layers.len() as i64 - 1;
        CbFiltration { layers, rank }
    }

    /// All lower sets as membership masks, by exhaustive subset enumeration.
    pub(crate) fn lower_set_masks(&self, bound: usize) -> Result<Vec<u64>> {
        let n = self.len();
        if n > bound || n >= 64 {
            return Err(Error::SizeExceeded { size: n, bound });
        }
        // below[i]: mask of points strictly below i
        let below: Vec<u64> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && self.leq_idx(j, i))
                    .fold(0u64, |m, j| m | (1 << j))
            })
            .collect();
        Ok((0..(1u64 << n))
            .filter(|&mask| (0..n).all(|i| mask & (1 << i) == 0 || below[i] & !mask == 0))
            .collect())
    }

    pub(crate) fn mask_to_subset(&self, mask: u64) -> Subset {
        (0..self.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| self.elements[i].clone())
            .collect()
    }

    /// Every closed (lower) set, sorted lexicographically by sorted element list.
    pub fn enumerate_closed_sets(&self, bound: usize) -> Result<Vec<Subset>> {
        let mut out: Vec<Subset> = self
            .lower_set_masks(bound)?
            .into_iter()
            .map(|m| self.mask_to_subset(m))
            .collect();
        out.sort();
        Ok(out)
    }

    /// T0, soberness and the finiteness chain conditions.
    ///
    /// Irreducible closed sets are found by enumeration when the order fits
    /// in `bound` points; otherwise the principal lower sets are used, which
    /// is where every irreducible closed set of a finite poset lies.
    pub fn check_axioms(&self, bound: usize) -> AxiomReport {
        let n = self.len();
        let mut failures = Vec::new();

        let t0 = (0..n).all(|i| (0..n).all(|j| i == j || !(self.leq_idx(i, j) && self.leq_idx(j, i))));
        if !t0 {
            failures.push("antisymmetry".to_string());
        }

        let mut irreducible = Vec::new();
        let enumerated = match self.lower_set_masks(bound) {
            Ok(masks) => {
                for &l in masks.iter().filter(|&&m| m != 0) {
                    // maximal proper closed subsets of l
                    let proper: Vec<u64> = masks.iter().copied().filter(|&m| m & !l == 0 && m != l).collect();
                    let maximal: Vec<u64> = proper
                        .iter()
                        .copied()
                        .filter(|&m| !proper.iter().any(|&o| o != m && m & !o == 0))
                        .collect();
                    let reducible = maximal
                        .iter()
                        .enumerate()
                        .any(|(a, &x)| maximal[a + 1..].iter().any(|&y| x | y == l));
                    if !reducible {
                        irreducible.push(self.mask_to_subset(l));
                    }
                }
                true
            }
            Err(_) => {
                for p in &self.elements {
                    irreducible.push(self.gncl(p).expect("own element"));
                }
                false
            }
        };
        irreducible.sort();

        let mut generic_points = BTreeSet::new();
        let mut sober = true;
        for l in &irreducible {
            let sub = self.subspace(l).expect("subset of elements");
            let max = sub.maximal_elements();
            if max.len() != 1 {
                sober = false;
                failures.push(format!("irreducible closed set {l:?} has maximal elements {max:?}"));
            } else if !generic_points.insert(max.into_iter().next().unwrap()) {
                sober = false;
                failures.push(format!("generic point of {l:?} is not unique"));
            }
        }

        AxiomReport {
            t0,
            sober,
            artinian_noetherian: true,
            irreducible_closed_sets: irreducible,
            enumerated,
            failures,
        }
    }
}

fn index_of(elements: &[String]) -> BTreeMap<String, usize> {
    elements
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect()
}

fn lookup(index: &BTreeMap<String, usize>, p: &str) -> Result<usize> {
    index
        .get(p)
        .copied()
        .ok_or_else(|| Error::UnknownElement(p.to_string()))
}

/// `X₀ ⊂ X₁ ⊂ … ⊂ X_rank = X`; the empty space has no layers and rank `-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CbFiltration {
    pub layers: Vec<Subset>,
    pub rank: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub t0: bool,
    pub sober: bool,
    /// Always true for finite orders.
    pub artinian_noetherian: bool,
    pub irreducible_closed_sets: Vec<Subset>,
    /// False when the order exceeded the enumeration bound.
    pub enumerated: bool,
    pub failures: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.t0 && self.sober && self.artinian_noetherian
    }
}

/// Builds a [`Subset`] from string-like items.
pub fn subset<I, S>(items: I) -> Subset
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    items.into_iter().map(Into::into).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Order {
        Order::new(["o", "p", "m"], [("o", "p"), ("p", "m")]).unwrap()
    }

    fn diamond() -> Order {
        Order::new(["o", "a", "b", "m"], [("o", "a"), ("o", "b"), ("a", "m"), ("b", "m")]).unwrap()
    }

    #[test]
    fn build_two_chain_and_singleton() {
        let c = Order::new(["o", "m"], [("o", "m")]).unwrap();
        assert!(c.leq("o", "m").unwrap());
        assert!(!c.leq("m", "o").unwrap());
        let s = Order::new(["a"], std::iter::empty::<(&str, &str)>()).unwrap();
        assert!(s.leq("a", "a").unwrap());
        assert_eq!(s.relation_count(), 0);
    }

    #[test]
    fn build_rejects_cycle() {
        let err = Order::new(["a", "b"], [("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(err, Error::Cycle("a".into(), "b".into()));
        let err = Order::new(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")]).unwrap_err();
        assert!(matches!(err, Error::Cycle(..)));
    }

    #[test]
    fn build_rejects_unknown() {
        let err = Order::new(["a"], [("a", "z")]).unwrap_err();
        assert_eq!(err, Error::UnknownElement("z".into()));
    }

    #[test]
    fn closure_is_transitive() {
        let c = chain3();
        assert!(c.leq("o", "m").unwrap());
        assert_eq!(c.relation_count(), 3);
        assert_eq!(c.hasse_edges(), vec![("o".into(), "p".into()), ("p".into(), "m".into())]);
    }

    #[test]
    fn spcl_gncl() {
        let c = chain3();
        assert_eq!(c.spcl("o").unwrap(), subset(["o", "p", "m"]));
        assert_eq!(c.gncl("m").unwrap(), subset(["o", "p", "m"]));
        assert_eq!(diamond().gncl("a").unwrap(), subset(["o", "a"]));
        assert_eq!(c.spcl("x"), Err(Error::UnknownElement("x".into())));
    }

    #[test]
    fn diamond_gncl_matches_enumeration() {
        // closure of {a} = intersection of all closed sets containing a
        let d = diamond();
        let closed = d.enumerate_closed_sets(16).unwrap();
        let mut acc = d.element_set();
        for c in closed.iter().filter(|c| c.contains("a")) {
            acc = acc.intersection(c).cloned().collect();
        }
        assert_eq!(acc, d.gncl("a").unwrap());
    }

    #[test]
    fn upper_lower_sets() {
        let c = Order::new(["o", "m"], [("o", "m")]).unwrap();
        assert!(c.is_upper_set(&subset(["m"])).unwrap());
        assert!(!c.is_lower_set(&subset(["m"])).unwrap());
        assert!(c.is_upper_set(&Subset::new()).unwrap());
        assert!(c.is_lower_set(&Subset::new()).unwrap());
        let d = diamond();
        assert!(d.is_upper_set(&subset(["a", "m"])).unwrap());
        assert!(c.is_upper_set(&subset(["q"])).is_err());
    }

    #[test]
    fn subspace_orders() {
        let c = chain3();
        let s = c.subspace(&subset(["o", "m"])).unwrap();
        assert_eq!(s, Order::new(["o", "m"], [("o", "m")]).unwrap());
        assert_eq!(c.subspace(&c.element_set()).unwrap(), c);
        assert!(diamond().subspace(&subset(["a", "b"])).unwrap().is_discrete());
    }

    #[test]
    fn cb_filtration_examples() {
        let cb = chain3().cb_filtration();
        assert_eq!(cb.rank, 2);
        assert_eq!(
            cb.layers,
            vec![subset(["m"]), subset(["m", "p"]), subset(["m", "o", "p"])]
        );
        let anti = Order::discrete(["a", "b", "c"]);
        let cb = anti.cb_filtration();
        assert_eq!(cb.rank, 0);
        assert_eq!(cb.layers, vec![subset(["a", "b", "c"])]);
        let empty = Order::discrete(Vec::<String>::new());
        let cb = empty.cb_filtration();
        assert_eq!(cb.rank, -1);
        assert!(cb.layers.is_empty());
    }

    #[test]
    fn axioms_on_chain_and_diamond() {
        let c = Order::new(["o", "m"], [("o", "m")]).unwrap();
        let r = c.check_axioms(16);
        assert!(r.passed());
        assert_eq!(r.irreducible_closed_sets, vec![subset(["m", "o"]), subset(["o"])]);
        let r = diamond().check_axioms(16);
        assert!(r.passed());
        assert!(r.irreducible_closed_sets.contains(&subset(["o", "a", "b", "m"])));
        assert_eq!(r.irreducible_closed_sets.len(), 4);
        // fallback path above the bound
        let r = diamond().check_axioms(2);
        assert!(r.passed());
        assert!(!r.enumerated);
        assert_eq!(r.irreducible_closed_sets.len(), 4);
    }

    #[test]
    fn closed_set_enumeration() {
        let c = Order::new(["o", "m"], [("o", "m")]).unwrap();
        assert_eq!(
            c.enumerate_closed_sets(16).unwrap(),
            vec![Subset::new(), subset(["m", "o"]), subset(["o"])]
        );
        assert_eq!(Order::discrete(["a", "b"]).enumerate_closed_sets(16).unwrap().len(), 4);
        let d = diamond().enumerate_closed_sets(16).unwrap();
        let expected: BTreeSet<Subset> = [
            subset(Vec::<String>::new()),
            subset(["o"]),
            subset(["o", "a"]),
            subset(["o", "b"]),
            subset(["o", "a", "b"]),
            subset(["o", "a", "b", "m"]),
        ]
        .into_iter()
        .collect();
        assert_eq!(d.into_iter().collect::<BTreeSet<_>>(), expected);
        let big = Order::discrete((0..17).map(|i| format!("x{i}")));
        assert_eq!(
            big.enumerate_closed_sets(DEFAULT_ENUMERATION_BOUND),
            Err(Error::SizeExceeded { size: 17, bound: 16 })
        );
    }

    #[test]
    fn longest_chain_values() {
        assert_eq!(chain3().longest_chain(), 2);
        assert_eq!(diamond().longest_chain(), 2);
        assert_eq!(Order::discrete(["a"]).longest_chain(), 0);
        assert_eq!(Order::discrete(Vec::<String>::new()).longest_chain(), -1);
    }
}
