//! Closure orders of mutated hearts.
//!
//! The standard heart carries the inclusion order. A filtration of length `n`
//! is reached by `n` right mutations; step `i` mutates at the closed set
//! `E = V_{i-1}^c`. Step 1 is computed exactly by the one-step recipe. Later
//! steps are exact when `E` is discrete or the step is certified perfect, and
//! otherwise produce a [`BoundedOrder`] sandwiching the unknown answer.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::SpFiltration;
use crate::poset::{Order, Subset};
use crate::spectrum::{PrimePoset, UndeterminedPolicy, Verdict};

/// A closure order `⪯` on the primes together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureOrder {
    pub order: Order,
    pub provenance: String,
}

impl ClosureOrder {
    pub fn new(order: Order, provenance: impl Into<String>) -> Self {
        Self {
            order,
            provenance: provenance.into(),
        }
    }
}

/// Relations guaranteed present (`lower`) and possibly present (`upper`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedOrder {
    pub lower: ClosureOrder,
    pub upper: ClosureOrder,
}

impl BoundedOrder {
    pub fn exact(order: ClosureOrder) -> Self {
        Self {
            lower: order.clone(),
            upper: order,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lower.order == self.upper.order
    }

    /// The order itself when the bounds coincide.
    pub fn exact_order(&self) -> Option<&ClosureOrder> {
        self.is_exact().then_some(&self.lower)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MutationRule {
    OneStep,
    Discrete,
    Perfect,
    Bounded,
}

/// Why a step's torsion pair is known to be perfect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerfectCertificate {
    /// The mutation class is discrete in the current order.
    Discreteness,
    /// Declared by a step annotation.
    Annotation,
    /// Two-dimensional local model tilted twice at the closed point.
    VanishingPattern,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutationStep {
    /// Step number `i`, from 1.
    pub index: usize,
    /// Support `V_{i-1}` of the torsion class.
    pub support: Subset,
    /// The closed set `E = V_{i-1}^c` the mutation happens at.
    pub mutation_class: Subset,
    pub rule: MutationRule,
    pub perfect: Option<PerfectCertificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepAnnotation {
    pub i: usize,
    pub perfect: bool,
}

/// Per-step perfectness declarations, as read from JSON.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepAnnotations {
    #[serde(default)]
    pub steps: Vec<StepAnnotation>,
}

impl StepAnnotations {
    fn declares_perfect(&self, i: usize) -> bool {
        self.steps.iter().any(|s| s.i == i && s.perfect)
    }
}

/// The full mutation chain from the standard heart to a filtration's heart.
#[derive(Debug, Clone)]
pub struct Chain {
    pub initial: BoundedOrder,
    pub steps: Vec<(MutationStep, BoundedOrder)>,
    pub truncated_slice: bool,
}

impl Chain {
    pub fn final_order(&self) -> &BoundedOrder {
        self.steps.last().map_or(&self.initial, |(_, o)| o)
    }

    /// Order before step `k` (1-based).
    pub fn before(&self, k: usize) -> &BoundedOrder {
        if k <= 1 {
            &self.initial
        } else {
            &self.steps[k - 2].1
        }
    }

    pub fn is_exact(&self) -> bool {
        self.steps.iter().all(|(_, o)| o.is_exact())
    }

    /// The bijection Θ of step `k`, as the identity on primes annotated with
    /// closures before and after.
    pub fn theta(&self, k: usize) -> ThetaMap {
        theta_map(&self.steps[k - 1].0, self.before(k), &self.steps[k - 1].1)
    }
}

fn names(s: &Subset) -> Vec<String> {
    s.iter().cloned().collect()
}

pub fn standard_order(poset: &PrimePoset) -> ClosureOrder {
    ClosureOrder::new(poset.order().clone(), "standard")
}

/// Closure order of the heart of `Spec ⊋ V0 ⊋ ∅`.
///
/// Pairs inside `V0` or inside its complement keep inclusion. A cross pair
/// `p ∉ V0 ∋ q` with `p ⊆ q` is related iff `V0 ∩ [p, q]` has non-coherent
/// complement in `[p, q]`.
pub fn onestep_order(
    poset: &PrimePoset,
    v0: &Subset,
    policy: UndeterminedPolicy,
) -> Result<ClosureOrder> {
    let base = poset.order();
    if !base.is_upper_set(v0)? {
        return Err(Error::NotUpperSet(names(v0)));
    }
    if v0.is_empty() || v0.len() == base.len() {
        return Ok(ClosureOrder::new(base.clone(), "standard (shift)"));
    }
    let n = base.len();
    let inside = base.membership(v0)?;
    let els = base.elements();
    let mut leq = base.matrix().to_vec();
    for i in 0..n {
        for j in 0..n {
            if i == j || !base.leq_idx(i, j) || inside[i] || !inside[j] {
                continue;
            }
            let verdict = poset.coherent_complement(&els[i], &els[j], v0)?.verdict;
            leq[i * n + j] = match (verdict, policy) {
                (Verdict::NotCoherent, _) => true,
                (Verdict::Coherent, _) => false,
                (Verdict::Undetermined, UndeterminedPolicy::Error) => {
                    return Err(Error::UndeterminedCoherence(els[i].clone(), els[j].clone()))
                }
                (Verdict::Undetermined, UndeterminedPolicy::AssumeCoherent) => false,
                (Verdict::Undetermined, UndeterminedPolicy::AssumeNoncoherent) => true,
            };
        }
    }
    if let Some((i, k)) = Order::first_nontransitive_pair(n, &leq) {
        return Err(Error::NonTransitiveRecipe(els[i].clone(), els[k].clone()));
    }
    let order = Order::from_matrix(els.to_vec(), leq)?;
    Ok(ClosureOrder::new(
        order,
        format!("one-step at V0={:?}", names(v0)),
    ))
}

fn closed_mask(order: &Order, e: &Subset) -> Result<Vec<bool>> {
    let member = order.membership(e)?;
    if !order.is_lower_mask(&member) {
        return Err(Error::NotClosed(names(e)));
    }
    Ok(member)
}

/// Keeps `p ⪯ q` only when `p ∉ E` (or `p = q`).
fn isolate(order: &Order, member: &[bool]) -> Order {
    let n = order.len();
    let mut leq = order.matrix().to_vec();
    for i in (0..n).filter(|&i| member[i]) {
        for j in (0..n).filter(|&j| j != i) {
            leq[i * n + j] = false;
        }
    }
    Order::from_matrix(order.elements().to_vec(), leq).expect("sub-relation of a partial order")
}

/// Keeps `p ⪯ q` only when `p` and `q` lie on the same side of `E`.
fn split(order: &Order, member: &[bool]) -> Order {
    let n = order.len();
    let mut leq = order.matrix().to_vec();
    for i in 0..n {
        for j in 0..n {
            if member[i] != member[j] {
                leq[i * n + j] = false;
            }
        }
    }
    Order::from_matrix(order.elements().to_vec(), leq).expect("sub-relation of a partial order")
}

/// Drops cross relations `p ∈ E ⪯ q ∉ E` whose source is in `pruned`.
fn prune(order: &Order, member: &[bool], pruned: &[bool]) -> Result<Order> {
    let n = order.len();
    let mut leq = order.matrix().to_vec();
    for i in (0..n).filter(|&i| member[i] && pruned[i]) {
        for j in (0..n).filter(|&j| !member[j]) {
            leq[i * n + j] = false;
        }
    }
    let els = order.elements();
    if let Some((i, k)) = Order::first_nontransitive_pair(n, &leq) {
        return Err(Error::InconsistentPruning(els[i].clone(), els[k].clone()));
    }
    Order::from_matrix(els.to_vec(), leq)
}

/// Mutation at a closed discrete `E`: every point of `E` becomes isolated
/// and clopen. Closed sets afterwards are the `U` with `U ∪ E` closed before.
pub fn mutate_discrete(order: &ClosureOrder, e: &Subset) -> Result<ClosureOrder> {
    let member = closed_mask(&order.order, e)?;
    if !order.order.subspace(e)?.is_discrete() {
        return Err(Error::NotDiscrete(names(e)));
    }
    Ok(ClosureOrder::new(
        isolate(&order.order, &member),
        format!("{}; discrete at E={:?}", order.provenance, names(e)),
    ))
}

/// Perfect mutation at a closed `E`: every relation between `E` and its
/// complement is removed, so `E` becomes clopen.
pub fn mutate_perfect(order: &ClosureOrder, e: &Subset) -> Result<ClosureOrder> {
    let member = closed_mask(&order.order, e)?;
    Ok(ClosureOrder::new(
        split(&order.order, &member),
        format!("{}; perfect at E={:?}", order.provenance, names(e)),
    ))
}

/// Mutation at a closed `E` with no further information.
///
/// Both parts keep their subspace orders and no relation is created, so the
/// result lies between "no cross relations" and "all previous cross
/// relations except those leaving a point of `pruned`".
pub fn mutate_general(order: &ClosureOrder, e: &Subset, pruned: &Subset) -> Result<BoundedOrder> {
    let member = closed_mask(&order.order, e)?;
    let pruned_mask = order.order.membership(pruned)?;
    let lower = split(&order.order, &member);
    let upper = prune(&order.order, &member, &pruned_mask)?;
    let tag = format!("{}; general at E={:?}", order.provenance, names(e));
    Ok(BoundedOrder {
        lower: ClosureOrder::new(lower, format!("{tag} (lower)")),
        upper: ClosureOrder::new(upper, format!("{tag} (upper)")),
    })
}

/// Points forced ⪯-maximal after step `i`: the ⊆-maximal points of each
/// difference `V_{k-1} ∖ V_k` with `k < i`, and the maximal points of `V_{i-1}`.
pub fn forced_maximal(poset: &PrimePoset, filt: &SpFiltration, i: usize) -> Result<Subset> {
    let base = poset.order();
    let truncated = filt.truncate(i);
    let mut out = Subset::new();
    for diff in truncated.differences(poset) {
        out.extend(base.subspace(&diff)?.maximal_elements());
    }
    Ok(out)
}

fn vanishing_pattern(poset: &PrimePoset, support: &Subset) -> bool {
    let base = poset.order();
    let max = base.maximal_elements();
    base.longest_chain() <= 2 && max.len() == 1 && *support == max
}

fn map_bounds(pre: &BoundedOrder, suffix: &str, f: impl Fn(&Order) -> Order) -> BoundedOrder {
    BoundedOrder {
        lower: ClosureOrder::new(f(&pre.lower.order), format!("{}; {suffix}", pre.lower.provenance)),
        upper: ClosureOrder::new(f(&pre.upper.order), format!("{}; {suffix}", pre.upper.provenance)),
    }
}

/// Runs the mutation chain for `filt`.
///
/// Truncated-slice filtrations are handled as a chain of discrete mutations.
/// Otherwise step 1 uses the one-step recipe and each later step is
/// discrete, perfect (annotated or the built-in vanishing pattern), or
/// bounded.
pub fn chain_order(
    poset: &PrimePoset,
    filt: &SpFiltration,
    annotations: &StepAnnotations,
    policy: UndeterminedPolicy,
) -> Result<Chain> {
    let n = filt.len();
    if let Some(bad) = annotations.steps.iter().find(|s| s.i == 0 || s.i > n) {
        return Err(Error::StepOutOfRange(bad.i, n));
    }
    let truncated_slice = filt.classify(poset).truncated_slice;
    let initial = BoundedOrder::exact(standard_order(poset));
    let base = poset.order();
    let mut steps: Vec<(MutationStep, BoundedOrder)> = Vec::with_capacity(n);

    for i in 1..=n {
        let support = filt.levels()[i - 1].clone();
        let e = base.complement(&support);
        let pre = steps.last().map_or(&initial, |(_, o)| o);
        let member = closed_mask(&pre.upper.order, &e)?;
        let e_label = format!("E={:?}", names(&e));

        let (rule, perfect, post) = if truncated_slice {
            if !pre.upper.order.subspace(&e)?.is_discrete() {
                return Err(Error::NotDiscrete(names(&e)));
            }
            let post = map_bounds(pre, &format!("discrete at {e_label}"), |o| isolate(o, &member));
            (MutationRule::Discrete, Some(PerfectCertificate::Discreteness), post)
        } else if i == 1 {
            let post = BoundedOrder::exact(onestep_order(poset, &support, policy)?);
            (MutationRule::OneStep, None, post)
        } else if pre.upper.order.subspace(&e)?.is_discrete() {
            let post = map_bounds(pre, &format!("discrete at {e_label}"), |o| isolate(o, &member));
            (MutationRule::Discrete, Some(PerfectCertificate::Discreteness), post)
        } else if annotations.declares_perfect(i) || vanishing_pattern(poset, &support) {
            let cert = if annotations.declares_perfect(i) {
                PerfectCertificate::Annotation
            } else {
                PerfectCertificate::VanishingPattern
            };
            let post = map_bounds(pre, &format!("perfect at {e_label}"), |o| split(o, &member));
            (MutationRule::Perfect, Some(cert), post)
        } else {
            let pruned = forced_maximal(poset, filt, i)?;
            let pruned_mask = base.membership(&pruned)?;
            let lower = split(&pre.lower.order, &member);
            let upper = prune(&pre.upper.order, &member, &pruned_mask)?;
            let post = BoundedOrder {
                lower: ClosureOrder::new(lower, format!("{}; general at {e_label} (lower)", pre.lower.provenance)),
                upper: ClosureOrder::new(upper, format!("{}; general at {e_label} (upper)", pre.upper.provenance)),
            };
            (MutationRule::Bounded, None, post)
        };

        steps.push((
            MutationStep {
                index: i,
                support,
                mutation_class: e,
                rule,
                perfect,
            },
            post,
        ));
    }

    Ok(Chain {
        initial,
        steps,
        truncated_slice,
    })
}

/// Closure of a point in the lower and upper bound of an order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Neighborhood {
    pub lower: Vec<String>,
    pub upper: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaEntry {
    pub point: String,
    pub image: String,
    pub closure_before: Neighborhood,
    pub closure_after: Neighborhood,
}

/// Θ for one step. Under the identification of both spectra with the
/// primes it is the identity; the entries record what changes around it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ThetaMap {
    pub step: usize,
    pub entries: Vec<ThetaEntry>,
}

impl ThetaMap {
    pub fn as_map(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|e| (e.point.clone(), e.image.clone()))
            .collect()
    }
}

pub fn theta_map(step: &MutationStep, pre: &BoundedOrder, post: &BoundedOrder) -> ThetaMap {
    let hood = |o: &BoundedOrder, p: &str| Neighborhood {
        lower: names(&o.lower.order.gncl(p).expect("same elements")),
        upper: names(&o.upper.order.gncl(p).expect("same elements")),
    };
    ThetaMap {
        step: step.index,
        entries: pre
            .lower
            .order
            .elements()
            .iter()
            .map(|p| ThetaEntry {
                point: p.clone(),
                image: p.clone(),
                closure_before: hood(pre, p),
                closure_after: hood(post, p),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::subset;
    use crate::spectrum::preset;

    fn pairs(list: &[(&str, &str)]) -> Vec<(String, String)> {
        let mut v: Vec<_> = list.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        v.sort();
        v
    }

    fn h1_loc2() -> ClosureOrder {
        onestep_order(&preset("LOC2").unwrap(), &subset(["m"]), UndeterminedPolicy::Error).unwrap()
    }

    #[test]
    fn standard_orders() {
        let dvr = preset("DVR1").unwrap();
        assert_eq!(standard_order(&dvr).order.relations(), pairs(&[("o", "m")]));
    }

    #[test]
    fn onestep_loc2() {
        let h1 = h1_loc2();
        let mut expected = vec![("o", "m")];
        for p in ["p1", "p2", "p3", "p4", "p5"] {
            expected.push(("o", p));
        }
        assert_eq!(h1.order.relations(), pairs(&expected));
    }

    #[test]
    fn onestep_loc3() {
        let loc3 = preset("LOC3").unwrap();
        let v0 = subset(["r1", "r2", "r3", "m"]);
        let o = onestep_order(&loc3, &v0, UndeterminedPolicy::Error).unwrap().order;
        for x in ["q1", "q2", "q3", "r1", "r2", "r3", "m"] {
            assert!(o.leq("o", x).unwrap());
        }
        for r in ["r1", "r2", "r3"] {
            assert!(o.leq(r, "m").unwrap());
            for q in ["q1", "q2", "q3"] {
                assert!(!o.leq(q, r).unwrap());
            }
        }
        for q in ["q1", "q2", "q3"] {
            assert!(!o.leq(q, "m").unwrap());
        }
    }

    #[test]
    fn onestep_nagata_and_poly() {
        let v0 = subset(["a", "m"]);
        let nagata = onestep_order(&preset("NAGATA2").unwrap(), &v0, UndeterminedPolicy::Error).unwrap();
        assert_eq!(nagata.order.relations(), pairs(&[("o", "b"), ("a", "m"), ("o", "m")]));
        let poly = onestep_order(&preset("POLY2").unwrap(), &v0, UndeterminedPolicy::Error).unwrap();
        assert_eq!(poly.order.relations(), pairs(&[("o", "b"), ("a", "m")]));
    }

    #[test]
    fn onestep_policies_and_degenerate() {
        let loc2 = preset("LOC2").unwrap();
        let v0 = subset(["p1", "m"]);
        assert_eq!(
            onestep_order(&loc2, &v0, UndeterminedPolicy::Error),
            Err(Error::UndeterminedCoherence("o".into(), "m".into()))
        );
        let co = onestep_order(&loc2, &v0, UndeterminedPolicy::AssumeCoherent).unwrap();
        assert!(!co.order.leq("o", "m").unwrap());
        let nc = onestep_order(&loc2, &v0, UndeterminedPolicy::AssumeNoncoherent).unwrap();
        assert!(nc.order.leq("o", "m").unwrap());
        let shift = onestep_order(&loc2, &Subset::new(), UndeterminedPolicy::Error).unwrap();
        assert_eq!(shift.order, *loc2.order());
        assert_eq!(shift.provenance, "standard (shift)");
    }

    #[test]
    fn discrete_mutation() {
        let h1 = h1_loc2();
        let e = subset(["o", "p1", "p2", "p3", "p4", "p5"]);
        assert_eq!(mutate_discrete(&h1, &e), Err(Error::NotDiscrete(names(&e))));
        assert!(matches!(mutate_discrete(&h1, &subset(["m"])), Err(Error::NotClosed(_))));

        let small = ClosureOrder::new(Order::new(["o", "a", "x"], [("o", "a")]).unwrap(), "t");
        let out = mutate_discrete(&small, &subset(["o"])).unwrap();
        assert!(out.order.is_discrete());

        let anti = ClosureOrder::new(Order::discrete(["a", "b", "c"]), "t");
        assert_eq!(mutate_discrete(&anti, &subset(["a", "c"])).unwrap().order, anti.order);
    }

    #[test]
    fn perfect_mutation() {
        let h1 = h1_loc2();
        let e = subset(["o", "p1", "p2", "p3", "p4", "p5"]);
        let out = mutate_perfect(&h1, &e).unwrap();
        assert!(!out.order.leq("o", "m").unwrap());
        assert!(out.order.leq("o", "p3").unwrap());
        assert_eq!(out.order.relation_count(), 5);
        assert_eq!(mutate_perfect(&h1, &Subset::new()).unwrap().order, h1.order);
        assert_eq!(mutate_perfect(&h1, &h1.order.element_set()).unwrap().order, h1.order);
    }

    #[test]
    fn general_mutation_bounds() {
        let h1 = h1_loc2();
        let e = subset(["o", "p1", "p2", "p3", "p4", "p5"]);
        let b = mutate_general(&h1, &e, &Subset::new()).unwrap();
        assert!(!b.is_exact());
        assert!(!b.lower.order.leq("o", "m").unwrap());
        assert!(b.upper.order.leq("o", "m").unwrap());
        let pruned = mutate_general(&h1, &e, &subset(["o"])).unwrap();
        assert!(pruned.is_exact());
        assert!(mutate_general(&h1, &Subset::new(), &Subset::new()).unwrap().is_exact());
        let anti = ClosureOrder::new(Order::discrete(["a", "b"]), "t");
        assert!(mutate_general(&anti, &subset(["a"]), &Subset::new()).unwrap().is_exact());
    }

    #[test]
    fn inconsistent_pruning_is_rejected() {
        // x ⪯ y inside E, y ⪯ z across; pruning x alone drops x ⪯ z but keeps the path
        let o = ClosureOrder::new(Order::new(["x", "y", "z"], [("x", "y"), ("y", "z")]).unwrap(), "t");
        let err = mutate_general(&o, &subset(["x", "y"]), &subset(["x"])).unwrap_err();
        assert_eq!(err, Error::InconsistentPruning("x".into(), "z".into()));
    }

    #[test]
    fn chain_loc2_two_steps() {
        let loc2 = preset("LOC2").unwrap();
        let filt = SpFiltration::validate(&loc2, &[subset(["m"]), subset(["m"])]).unwrap();
        let chain = chain_order(&loc2, &filt, &StepAnnotations::default(), UndeterminedPolicy::Error).unwrap();
        assert_eq!(chain.steps.len(), 2);
        assert_eq!(chain.steps[0].0.rule, MutationRule::OneStep);
        assert_eq!(chain.steps[1].0.rule, MutationRule::Perfect);
        assert_eq!(chain.steps[1].0.perfect, Some(PerfectCertificate::VanishingPattern));
        let last = chain.final_order().exact_order().unwrap();
        assert_eq!(last.order.gncl("m").unwrap(), subset(["m"]));
        assert_eq!(last.order.relation_count(), 5);

        let theta = chain.theta(2);
        let m = theta.entries.iter().find(|e| e.point == "m").unwrap();
        assert_eq!(m.closure_before.lower, vec!["m".to_string(), "o".to_string()]);
        assert_eq!(m.closure_after.lower, vec!["m".to_string()]);
        assert!(theta.as_map().iter().all(|(p, q)| p == q));
    }

    #[test]
    fn chain_truncated_slice_and_dvr() {
        let loc3 = preset("LOC3").unwrap();
        let filt = SpFiltration::height_filtration(&loc3);
        let chain = chain_order(&loc3, &filt, &StepAnnotations::default(), UndeterminedPolicy::Error).unwrap();
        assert!(chain.truncated_slice);
        assert!(chain.is_exact());
        assert!(chain.steps.iter().all(|(s, _)| s.rule == MutationRule::Discrete));
        assert!(chain.final_order().lower.order.is_discrete());

        let dvr = preset("DVR1").unwrap();
        let filt = SpFiltration::validate(&dvr, &[subset(["m"])]).unwrap();
        let chain = chain_order(&dvr, &filt, &StepAnnotations::default(), UndeterminedPolicy::Error).unwrap();
        assert!(chain.final_order().exact_order().unwrap().order.is_discrete());
    }

    #[test]
    fn chain_bounded_and_annotated() {
        // LOC3 tilted three times at the closed point: step 2 is neither
        // discrete nor covered by the vanishing pattern (dimension three)
        let loc3 = preset("LOC3").unwrap();
        let m = subset(["m"]);
        let filt = SpFiltration::validate(&loc3, &[m.clone(), m.clone()]).unwrap();
        let chain = chain_order(&loc3, &filt, &StepAnnotations::default(), UndeterminedPolicy::Error).unwrap();
        assert_eq!(chain.steps[1].0.rule, MutationRule::Bounded);
        let b = chain.final_order();
        assert!(b.lower.order.is_subrelation_of(&b.upper.order).unwrap());

        let ann = StepAnnotations { steps: vec![StepAnnotation { i: 2, perfect: true }] };
        let chain = chain_order(&loc3, &filt, &ann, UndeterminedPolicy::Error).unwrap();
        assert_eq!(chain.steps[1].0.rule, MutationRule::Perfect);
        assert_eq!(chain.steps[1].0.perfect, Some(PerfectCertificate::Annotation));
        assert!(chain.is_exact());

        let bad = StepAnnotations { steps: vec![StepAnnotation { i: 5, perfect: true }] };
        assert_eq!(
            chain_order(&loc3, &filt, &bad, UndeterminedPolicy::Error).unwrap_err(),
            Error::StepOutOfRange(5, 2)
        );
    }

    #[test]
    fn forced_maximal_points() {
        let loc3 = preset("LOC3").unwrap();
        let m = subset(["m"]);
        let filt = SpFiltration::validate(&loc3, &[m.clone(), m.clone()]).unwrap();
        // after step 2: maximal of V₋₁∖V₀ (the r's), of V₀∖V₁ (empty), of V₁ (m)
        assert_eq!(forced_maximal(&loc3, &filt, 2).unwrap(), subset(["r1", "r2", "r3", "m"]));
    }
}
