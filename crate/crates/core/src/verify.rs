//! Brute-force oracles and the property suite.
//!
//! The oracles enumerate subsets as bit masks and read relations through
//! [`Order::leq_idx`] only. They share no rewrite code with the mutation
//! engine.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::filtration::SpFiltration;
use crate::mutation::{chain_order, mutate_general, BoundedOrder, MutationRule, StepAnnotations};
use crate::mutation::forced_maximal;
use crate::poset::{Order, Subset, DEFAULT_ENUMERATION_BOUND};
use crate::spectrum::{PrimePoset, UndeterminedPolicy};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    /// Mutation step the check refers to; `None` for whole-chain checks.
    pub step: Option<usize>,
    pub passed: bool,
    pub counterexample: Option<String>,
}

impl PropertyReport {
    fn pass(property: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            step: None,
            passed: true,
            counterexample: None,
        }
    }

    fn fail(property: impl Into<String>, counterexample: impl Into<String>) -> Self {
        Self {
            property: property.into(),
            step: None,
            passed: false,
            counterexample: Some(counterexample.into()),
        }
    }

    fn from_outcome(property: impl Into<String>, outcome: Option<String>) -> Self {
        match outcome {
            None => Self::pass(property),
            Some(c) => Self::fail(property, c),
        }
    }

    fn at(mut self, step: usize) -> Self {
        self.step = Some(step);
        self
    }

    fn named(mut self, property: impl Into<String>) -> Self {
        self.property = property.into();
        self
    }
}

fn same_elements(a: &Order, b: &Order) -> Result<()> {
    if a.elements() == b.elements() {
        Ok(())
    } else {
        Err(Error::ElementMismatch)
    }
}

fn first_extra_pair(small: &Order, big: &Order) -> Option<(String, String)> {
    let n = small.len();
    let els = small.elements();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| small.leq_idx(i, j) && !big.leq_idx(i, j))
        .map(|(i, j)| (els[i].clone(), els[j].clone()))
}

/// Passes iff every relation of `post` holds in `pre`.
pub fn check_refinement(pre: &Order, post: &Order) -> Result<PropertyReport> {
    same_elements(pre, post)?;
    Ok(PropertyReport::from_outcome(
        "refinement",
        first_extra_pair(post, pre).map(|(p, q)| format!("{p} ⪯ {q} after but not before")),
    ))
}

fn is_lower(order: &Order, mask: u64) -> bool {
    let n = order.len();
    (0..n).all(|j| mask >> j & 1 == 0 || (0..n).all(|i| !order.leq_idx(i, j) || mask >> i & 1 == 1))
}

fn mask_of(order: &Order, s: &Subset) -> Result<u64> {
    let mut m = 0u64;
    for p in s {
        let i = order
            .elements()
            .iter()
            .position(|x| x == p)
            .ok_or_else(|| Error::UnknownElement(p.clone()))?;
        m |= 1 << i;
    }
    Ok(m)
}

fn mask_names(order: &Order, mask: u64) -> Vec<&str> {
    (0..order.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| order.elements()[i].as_str())
        .collect()
}

/// Passes iff `E` is closed in both orders and both orders agree on `E` and
/// on its complement.
pub fn check_piecewise(pre: &Order, post: &Order, e: &Subset) -> Result<PropertyReport> {
    same_elements(pre, post)?;
    let em = mask_of(pre, e)?;
    let name = "piecewise";
    if !is_lower(pre, em) {
        return Ok(PropertyReport::fail(name, format!("E={e:?} not closed before")));
    }
    if !is_lower(post, em) {
        return Ok(PropertyReport::fail(name, format!("E={e:?} not closed after")));
    }
    let n = pre.len();
    let els = pre.elements();
    for i in 0..n {
        for j in 0..n {
            let same_side = (em >> i & 1) == (em >> j & 1);
            if same_side && pre.leq_idx(i, j) != post.leq_idx(i, j) {
                return Ok(PropertyReport::fail(
                    name,
                    format!("relation ({}, {}) changes inside a part", els[i], els[j]),
                ));
            }
        }
    }
    Ok(PropertyReport::pass(name))
}

fn guard(order: &Order, bound: usize) -> Result<()> {
    let bound = bound.min(20);
    if order.len() > bound {
        return Err(Error::SizeExceeded {
            size: order.len(),
            bound,
        });
    }
    Ok(())
}

fn closed_family(order: &Order) -> BTreeSet<u64> {
    (0..1u64 << order.len()).filter(|&m| is_lower(order, m)).collect()
}

fn compare_families(
    name: &str,
    order: &Order,
    actual: &BTreeSet<u64>,
    expected: &BTreeSet<u64>,
) -> PropertyReport {
    match actual.symmetric_difference(expected).next() {
        None => PropertyReport::pass(name),
        Some(&u) => {
            let side = if actual.contains(&u) { "closed after, not predicted" } else { "predicted, not closed after" };
            PropertyReport::fail(name, format!("U={:?} {side}", mask_names(order, u)))
        }
    }
}

/// Closed sets after a discrete mutation are the `U` with `U ∪ E` closed before.
pub fn brute_force_discrete_law(pre: &Order, e: &Subset, post: &Order, bound: usize) -> Result<PropertyReport> {
    same_elements(pre, post)?;
    guard(pre, bound)?;
    let em = mask_of(pre, e)?;
    let expected = (0..1u64 << pre.len()).filter(|&u| is_lower(pre, u | em)).collect();
    Ok(compare_families("discrete law", pre, &closed_family(post), &expected))
}

/// Closed sets after a perfect mutation are the `(V₁ ∩ E) ⊔ (V₂ ∩ Eᶜ)` with
/// `V₁, V₂` closed before.
pub fn brute_force_perfect_law(pre: &Order, e: &Subset, post: &Order, bound: usize) -> Result<PropertyReport> {
    same_elements(pre, post)?;
    guard(pre, bound)?;
    let em = mask_of(pre, e)?;
    let before = closed_family(pre);
    let inside: BTreeSet<u64> = before.iter().map(|v| v & em).collect();
    let outside: BTreeSet<u64> = before.iter().map(|v| v & !em).collect();
    let expected = inside
        .iter()
        .flat_map(|a| outside.iter().map(move |b| a | b))
        .collect();
    Ok(compare_families("perfect law", pre, &closed_family(post), &expected))
}

/// Every relation of `order` is an inclusion of `base`.
pub fn check_refines_inclusion(base: &Order, order: &Order) -> Result<PropertyReport> {
    same_elements(base, order)?;
    Ok(PropertyReport::from_outcome(
        "refines inclusion",
        first_extra_pair(order, base).map(|(p, q)| format!("{p} ⪯ {q} but {p} ⊄ {q}")),
    ))
}

/// Longest chain and maximal-element strata by direct recursion.
fn up_depths(order: &Order) -> Vec<usize> {
    let n = order.len();
    let mut depth = vec![usize::MAX; n];
    fn visit(order: &Order, i: usize, depth: &mut Vec<usize>) -> usize {
        if depth[i] != usize::MAX {
            return depth[i];
        }
        let mut best = 0;
        for j in 0..order.len() {
            if j != i && order.leq_idx(i, j) {
                best = best.max(visit(order, j, depth) + 1);
            }
        }
        depth[i] = best;
        best
    }
    for i in 0..n {
        visit(order, i, &mut depth);
    }
    depth
}

/// Rank equals the longest chain and layer `k` equals the points of up-depth
/// at most `k`.
pub fn check_cb(order: &Order) -> PropertyReport {
    let depth = up_depths(order);
    let longest = depth.iter().max().map_or(-1, |&d| d as i64);
    let cb = order.cb_filtration();
    if cb.rank != longest {
        return PropertyReport::fail("cb correspondence", format!("rank {} but longest chain {longest}", cb.rank));
    }
    for (k, layer) in cb.layers.iter().enumerate() {
        let expected: Subset = order
            .elements()
            .iter()
            .zip(&depth)
            .filter(|(_, &d)| d <= k)
            .map(|(p, _)| p.clone())
            .collect();
        if *layer != expected {
            return PropertyReport::fail("cb correspondence", format!("layer {k} is {layer:?}, expected {expected:?}"));
        }
    }
    PropertyReport::pass("cb correspondence")
}

fn check_axioms(order: &Order, bound: usize) -> PropertyReport {
    let report = order.check_axioms(bound);
    PropertyReport::from_outcome(
        "T0 and sober",
        (!report.passed()).then(|| report.failures.join("; ")),
    )
}

fn check_levels_open(order: &Order, filt: &SpFiltration) -> PropertyReport {
    let bad = filt.levels().iter().enumerate().find(|(_, v)| {
        let m = order.membership(v).expect("levels use poset elements");
        !order.is_upper_mask(&m)
    });
    PropertyReport::from_outcome("levels open", bad.map(|(i, v)| format!("V{i}={v:?} not open")))
}

fn check_differences(poset: &PrimePoset, order: &Order, filt: &SpFiltration) -> Result<PropertyReport> {
    for (k, diff) in filt.differences(poset).iter().enumerate() {
        if order.subspace(diff)? != poset.order().subspace(diff)? {
            return Ok(PropertyReport::fail(
                "difference restriction",
                format!("difference {k} {diff:?} does not carry inclusion"),
            ));
        }
    }
    Ok(PropertyReport::pass("difference restriction"))
}

fn check_maximal_difference(poset: &PrimePoset, order: &Order, filt: &SpFiltration) -> Result<PropertyReport> {
    let diffs = filt.differences(poset);
    let proper = &diffs[..diffs.len() - 1];
    let depth = up_depths(order);
    for diff in proper {
        for p in poset.order().subspace(diff)?.maximal_elements() {
            if depth[order.position(&p)?] != 0 {
                return Ok(PropertyReport::fail("maximal difference", format!("{p} is not ⪯-maximal")));
            }
        }
    }
    Ok(PropertyReport::pass("maximal difference"))
}

fn check_sandwich(lower: &Order, exact: &Order, upper: &Order) -> PropertyReport {
    let outcome = first_extra_pair(lower, exact)
        .map(|(p, q)| format!("lower has {p} ⪯ {q}, exact does not"))
        .or_else(|| first_extra_pair(exact, upper).map(|(p, q)| format!("exact has {p} ⪯ {q}, upper does not")));
    PropertyReport::from_outcome("sandwich", outcome)
}

/// Properties of every exact order produced after `k` steps.
fn exact_order_checks(
    poset: &PrimePoset,
    order: &Order,
    truncated: &SpFiltration,
    bound: usize,
) -> Result<Vec<PropertyReport>> {
    Ok(vec![
        check_refines_inclusion(poset.order(), order)?,
        check_axioms(order, bound),
        check_levels_open(order, truncated),
        check_differences(poset, order, truncated)?,
        check_maximal_difference(poset, order, truncated)?,
        check_cb(order),
    ])
}

/// Runs the chain for `filt` and every applicable check. Reports are sorted
/// by step, then by property name.
pub fn run_suite(
    poset: &PrimePoset,
    filt: &SpFiltration,
    annotations: &StepAnnotations,
    policy: UndeterminedPolicy,
) -> Result<Vec<PropertyReport>> {
    run_suite_with_bound(poset, filt, annotations, policy, DEFAULT_ENUMERATION_BOUND)
}

pub fn run_suite_with_bound(
    poset: &PrimePoset,
    filt: &SpFiltration,
    annotations: &StepAnnotations,
    policy: UndeterminedPolicy,
    bound: usize,
) -> Result<Vec<PropertyReport>> {
    let chain = chain_order(poset, filt, annotations, policy)?;
    let brute = poset.order().len() <= bound.min(20);
    let mut reports = Vec::new();

    for (k, (step, post)) in chain.steps.iter().enumerate().map(|(k, s)| (k + 1, s)) {
        let pre = chain.before(k);
        let e = &step.mutation_class;
        let pairs = [("lower", &pre.lower.order, &post.lower.order), ("upper", &pre.upper.order, &post.upper.order)];
        for (side, a, b) in pairs {
            reports.push(check_refinement(a, b)?.named(format!("refinement ({side})")).at(k));
            reports.push(check_piecewise(a, b, e)?.named(format!("piecewise ({side})")).at(k));
            if brute {
                match step.rule {
                    MutationRule::Discrete => reports.push(
                        brute_force_discrete_law(a, e, b, bound)?.named(format!("discrete law ({side})")).at(k),
                    ),
                    MutationRule::Perfect => reports.push(
                        brute_force_perfect_law(a, e, b, bound)?.named(format!("perfect law ({side})")).at(k),
                    ),
                    _ => {}
                }
            }
        }
        reports.push(
            PropertyReport::from_outcome(
                "bounds ordered",
                first_extra_pair(&post.lower.order, &post.upper.order)
                    .map(|(p, q)| format!("lower has {p} ⪯ {q}, upper does not")),
            )
            .at(k),
        );

        let truncated = filt.truncate(k);
        if let Some(exact) = post.exact_order() {
            for r in exact_order_checks(poset, &exact.order, &truncated, bound)? {
                reports.push(r.at(k));
            }
            if let (Some(pre_exact), true) = (pre.exact_order(), k > 1) {
                let pruned = forced_maximal(poset, filt, k)?;
                let general: BoundedOrder = mutate_general(pre_exact, e, &pruned)?;
                reports.push(check_sandwich(&general.lower.order, &exact.order, &general.upper.order).at(k));
            }
        } else {
            for (side, o) in [("lower", &post.lower.order), ("upper", &post.upper.order)] {
                reports.push(check_refines_inclusion(poset.order(), o)?.named(format!("refines inclusion ({side})")).at(k));
                reports.push(check_axioms(o, bound).named(format!("T0 and sober ({side})")).at(k));
            }
        }
    }

    reports.sort_by(|a, b| (a.step, &a.property).cmp(&(b.step, &b.property)));
    Ok(reports)
}

/// Human-readable report listing, one line per property.
pub fn format_reports(reports: &[PropertyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let step = r.step.map_or_else(|| "chain".to_string(), |s| format!("step {s}"));
        let status = if r.passed { "pass" } else { "FAIL" };
        out.push_str(&format!("{status}  {step}: {}", r.property));
        if let Some(c) = &r.counterexample {
            out.push_str(&format!("  [{c}]"));
        }
        out.push('\n');
    }
    out
}
