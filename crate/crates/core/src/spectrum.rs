//! Finite models of prime spectra.
//!
//! A [`PrimePoset`] is the inclusion order on a finite set of named primes,
//! together with heights and a table of coherence facts that the poset alone
//! cannot decide. Intervals `[p, q]` model the spectrum of `(R/p)_q`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{Order, Subset};

/// Key of a coherence annotation: the interval `[p, q]` and the
/// specialization-closed part `w` of it, sorted by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AnnotationKey {
    pub p: String,
    pub q: String,
    pub w: Vec<String>,
}

impl AnnotationKey {
    pub fn new(p: impl Into<String>, q: impl Into<String>, w: &Subset) -> Self {
        Self {
            p: p.into(),
            q: q.into(),
            w: w.iter().cloned().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Coherent,
    NotCoherent,
    Undetermined,
}

/// Which rule of the coherence oracle produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoherenceRule {
    /// `W` is empty or the whole interval.
    Trivial,
    /// The interval has dimension at most one; every subset is coherent.
    DimensionAtMostOne,
    /// `W` is everything but the bottom prime; the complement is the generic point.
    GenericPoint,
    /// A minimal element of `W` has height at least two in the interval.
    HeightObstruction,
    Annotation,
    NoRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoherenceVerdict {
    pub verdict: Verdict,
    pub rule: CoherenceRule,
}

/// How an [`Verdict::Undetermined`] coherence query is escalated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UndeterminedPolicy {
    #[default]
    Error,
    AssumeCoherent,
    AssumeNoncoherent,
}

impl std::str::FromStr for UndeterminedPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "error" => Ok(Self::Error),
            "assume-coherent" => Ok(Self::AssumeCoherent),
            "assume-noncoherent" => Ok(Self::AssumeNoncoherent),
            other => Err(Error::Schema(format!("unknown policy `{other}`"))),
        }
    }
}

/// The JSON input document for a prime poset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeDocument {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heights: Option<BTreeMap<String, u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coherence: Vec<CoherenceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoherenceEntry {
    pub p: String,
    pub q: String,
    #[serde(rename = "W")]
    pub w: Vec<String>,
    pub coherent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePoset {
    base: Order,
    heights: BTreeMap<String, u32>,
    coherence: BTreeMap<AnnotationKey, bool>,
}

impl PrimePoset {
    /// Builds a poset with heights inferred as the longest chain below.
    pub fn new(base: Order) -> Self {
        let heights = base
            .depth_below()
            .into_iter()
            .map(|(p, d)| (p, d as u32))
            .collect();
        Self {
            base,
            heights,
            coherence: BTreeMap::new(),
        }
    }

    pub fn with_heights(base: Order, heights: BTreeMap<String, u32>) -> Result<Self> {
        for p in heights.keys() {
            if !base.contains(p) {
                return Err(Error::UnknownElement(p.clone()));
            }
        }
        for p in base.elements() {
            if !heights.contains_key(p) {
                return Err(Error::Height(format!("no height for `{p}`")));
            }
        }
        for (p, q) in base.hasse_edges() {
            if heights[&q] < heights[&p] + 1 {
                return Err(Error::Height(format!(
                    "cover `{p}` ⋖ `{q}` needs height({q}) > height({p})"
                )));
            }
        }
        Ok(Self {
            base,
            heights,
            coherence: BTreeMap::new(),
        })
    }

    /// Records that the complement of `w` in `[p, q]` is (or is not) coherent.
    pub fn annotate(&mut self, p: &str, q: &str, w: &Subset, coherent: bool) -> Result<()> {
        let key = AnnotationKey::new(p, q, w);
        let bad = || Error::AnnotationKey {
            p: p.to_string(),
            q: q.to_string(),
            w: key.w.clone(),
        };
        if !self.base.leq(p, q)? {
            return Err(bad());
        }
        let span = self.interval_set(p, q)?;
        if !w.is_subset(&span) {
            return Err(bad());
        }
        let sub = self.base.subspace(&span)?;
        if !sub.is_upper_set(w)? {
            return Err(bad());
        }
        self.coherence.insert(key, coherent);
        Ok(())
    }

    pub fn from_document(doc: &PrimeDocument) -> Result<Self> {
        let mut seen = Subset::new();
        for e in &doc.elements {
            if !seen.insert(e.clone()) {
                return Err(Error::Schema(format!("duplicate element `{e}`")));
            }
        }
        let base = Order::new(doc.elements.iter().cloned(), doc.covers.iter().cloned())?;
        let mut poset = match &doc.heights {
            Some(h) => Self::with_heights(base, h.clone())?,
            None => Self::new(base),
        };
        for entry in &doc.coherence {
            let w: Subset = entry.w.iter().cloned().collect();
            poset.annotate(&entry.p, &entry.q, &w, entry.coherent)?;
        }
        Ok(poset)
    }

    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: PrimeDocument =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_document(&self) -> PrimeDocument {
        PrimeDocument {
            elements: self.base.elements().to_vec(),
            covers: self.base.hasse_edges(),
            heights: Some(self.heights.clone()),
            coherence: self
                .coherence
                .iter()
                .map(|(k, &c)| CoherenceEntry {
                    p: k.p.clone(),
                    q: k.q.clone(),
                    w: k.w.clone(),
                    coherent: c,
                })
                .collect(),
        }
    }

    pub fn order(&self) -> &Order {
        &self.base
    }

    pub fn elements(&self) -> &[String] {
        self.base.elements()
    }

    pub fn heights(&self) -> &BTreeMap<String, u32> {
        &self.heights
    }

    pub fn height(&self, p: &str) -> Result<u32> {
        self.heights
            .get(p)
            .copied()
            .ok_or_else(|| Error::UnknownElement(p.to_string()))
    }

    pub fn annotations(&self) -> &BTreeMap<AnnotationKey, bool> {
        &self.coherence
    }

    fn interval_set(&self, p: &str, q: &str) -> Result<Subset> {
        let up = self.base.spcl(p)?;
        let down = self.base.gncl(q)?;
        Ok(up.intersection(&down).cloned().collect())
    }

    /// The sub-poset `{r : p ⊆ r ⊆ q}`, modelling `Spec((R/p)_q)`.
    ///
    /// Heights are the longest chain from `p` inside the interval.
    /// Annotations on nested intervals are carried along.
    pub fn interval(&self, p: &str, q: &str) -> Result<PrimePoset> {
        if !self.base.leq(p, q)? {
            return Err(Error::NotComparable(p.to_string(), q.to_string()));
        }
        let span = self.interval_set(p, q)?;
        let base = self.base.subspace(&span)?;
        let heights = base
            .depth_below()
            .into_iter()
            .map(|(r, d)| (r, d as u32))
            .collect();
        let coherence = self
            .coherence
            .iter()
            .filter(|(k, _)| span.contains(&k.p) && span.contains(&k.q))
            .map(|(k, &c)| (k.clone(), c))
            .collect();
        Ok(PrimePoset {
            base,
            heights,
            coherence,
        })
    }

    /// Decides whether the complement of `V0 ∩ [p, q]` is coherent in `[p, q]`.
    ///
    /// Rules, first match wins: trivial `W`; interval of dimension ≤ 1;
    /// `W` = interval minus `p`; a minimal element of `W` of interval height
    /// ≥ 2 (not coherent); a recorded annotation; otherwise undetermined.
    pub fn coherent_complement(&self, p: &str, q: &str, v0: &Subset) -> Result<CoherenceVerdict> {
        if !self.base.is_upper_set(v0)? {
            return Err(Error::NotUpperSet(v0.iter().cloned().collect()));
        }
        let iv = self.interval(p, q)?;
        let span = iv.base.element_set();
        let w: Subset = span.intersection(v0).cloned().collect();
        let verdict = |verdict, rule| Ok(CoherenceVerdict { verdict, rule });

        if w.is_empty() || w == span {
            return verdict(Verdict::Coherent, CoherenceRule::Trivial);
        }
        if iv.base.longest_chain() <= 1 {
            return verdict(Verdict::Coherent, CoherenceRule::DimensionAtMostOne);
        }
        if w.len() + 1 == span.len() && !w.contains(p) {
            return verdict(Verdict::Coherent, CoherenceRule::GenericPoint);
        }
        let minimal = iv.base.subspace(&w)?.minimal_elements();
        if minimal.iter().any(|r| iv.heights[r] >= 2) {
            return verdict(Verdict::NotCoherent, CoherenceRule::HeightObstruction);
        }
        match self.coherence.get(&AnnotationKey::new(p, q, &w)) {
            Some(true) => verdict(Verdict::Coherent, CoherenceRule::Annotation),
            Some(false) => verdict(Verdict::NotCoherent, CoherenceRule::Annotation),
            None => verdict(Verdict::Undetermined, CoherenceRule::NoRule),
        }
    }
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 6] = ["DVR1", "LOC2", "LOC2M", "LOC3", "POLY2", "NAGATA2"];

/// Built-in models of the example rings.
///
/// * `DVR1`: a discrete valuation ring, `o ⊂ m`.
/// * `LOC2`: a two-dimensional local domain, `o ⊂ p1..p5 ⊂ m`.
/// * `LOC2M`: a two-dimensional local ring with three minimal primes
///   `r-1, r0, r1`, height-one primes `q-2, q-1, q1, q2` and maximal `m`.
/// * `LOC3`: a three-dimensional local domain, `o ⊂ q1..q3 ⊂ r1..r3 ⊂ m`.
/// * `POLY2`, `NAGATA2`: the diamond `o ⊂ a, b ⊂ m`, where the complement of
///   `V(a)` is coherent, respectively not coherent.
pub fn preset(name: &str) -> Result<PrimePoset> {
    let build = |elements: &[&str], covers: &[(&str, &str)]| {
        Order::new(elements.iter().copied(), covers.iter().copied()).map(PrimePoset::new)
    };
    match name {
        "DVR1" => build(&["o", "m"], &[("o", "m")]),
        "LOC2" => {
            let ps = ["p1", "p2", "p3", "p4", "p5"];
            let mut covers = Vec::new();
            for p in ps {
                covers.push(("o", p));
                covers.push((p, "m"));
            }
            let mut elements = vec!["o", "m"];
            elements.extend(ps);
            build(&elements, &covers)
        }
        "LOC2M" => build(
            &["r-1", "r0", "r1", "q-2", "q-1", "q1", "q2", "m"],
            &[
                ("r-1", "q-2"),
                ("r0", "q-2"),
                ("r-1", "q-1"),
                ("r0", "q-1"),
                ("r0", "q1"),
                ("r1", "q1"),
                ("r0", "q2"),
                ("r1", "q2"),
                ("q-2", "m"),
                ("q-1", "m"),
                ("q1", "m"),
                ("q2", "m"),
            ],
        ),
        "LOC3" => build(
            &["o", "q1", "q2", "q3", "r1", "r2", "r3", "m"],
            &[
                ("o", "q1"),
                ("o", "q2"),
                ("o", "q3"),
                ("q1", "r1"),
                ("q2", "r1"),
                ("q2", "r2"),
                ("q3", "r2"),
                ("q1", "r3"),
                ("q3", "r3"),
                ("r1", "m"),
                ("r2", "m"),
                ("r3", "m"),
            ],
        ),
        "POLY2" | "NAGATA2" => {
            let mut poset = build(
                &["o", "a", "b", "m"],
                &[("o", "a"), ("o", "b"), ("a", "m"), ("b", "m")],
            )?;
            let w: Subset = ["a", "m"].iter().map(|s| s.to_string()).collect();
            poset.annotate("o", "m", &w, name == "POLY2")?;
            Ok(poset)
        }
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::subset;

    #[test]
    fn load_two_chain_infers_heights() {
        let p = PrimePoset::from_json(r#"{"elements":["o","m"],"covers":[["o","m"]]}"#).unwrap();
        assert_eq!(p.height("o").unwrap(), 0);
        assert_eq!(p.height("m").unwrap(), 1);
    }

    #[test]
    fn load_rejects_cycle_and_bad_schema() {
        let err = PrimePoset::from_json(r#"{"elements":["a","b"],"covers":[["a","b"],["b","a"]]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Cycle(..)));
        assert!(matches!(
            PrimePoset::from_json(r#"{"elements":"a"}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            PrimePoset::from_json(r#"{"elements":["a"],"extra":1}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            PrimePoset::from_json(r#"{"elements":["a","a"]}"#),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn load_checks_heights_and_annotations() {
        let bad_height = r#"{"elements":["o","m"],"covers":[["o","m"]],"heights":{"o":1,"m":1}}"#;
        assert!(matches!(PrimePoset::from_json(bad_height), Err(Error::Height(_))));
        // non-catenary style heights are fine as long as covers go up
        let ok = r#"{"elements":["o","m"],"covers":[["o","m"]],"heights":{"o":1,"m":3}}"#;
        assert_eq!(PrimePoset::from_json(ok).unwrap().height("m").unwrap(), 3);
        let bad_key = r#"{"elements":["o","a","m"],"covers":[["o","a"],["a","m"]],
            "coherence":[{"p":"o","q":"m","W":["a"],"coherent":true}]}"#;
        assert!(matches!(PrimePoset::from_json(bad_key), Err(Error::AnnotationKey { .. })));
        let not_interval = r#"{"elements":["o","a","m"],"covers":[["o","a"],["a","m"]],
            "coherence":[{"p":"m","q":"o","W":[],"coherent":true}]}"#;
        assert!(matches!(PrimePoset::from_json(not_interval), Err(Error::AnnotationKey { .. })));
    }

    #[test]
    fn loc2_document_round_trip() {
        let loc2 = preset("LOC2").unwrap();
        assert_eq!(loc2.elements().len(), 7);
        let heights: Vec<u32> = loc2.heights().values().copied().collect();
        assert_eq!(heights.iter().filter(|&&h| h == 1).count(), 5);
        assert_eq!(loc2.height("o").unwrap(), 0);
        assert_eq!(loc2.height("m").unwrap(), 2);
        let json = serde_json::to_string(&loc2.to_document()).unwrap();
        assert_eq!(PrimePoset::from_json(&json).unwrap(), loc2);
    }

    #[test]
    fn intervals() {
        let loc2 = preset("LOC2").unwrap();
        assert_eq!(loc2.interval("o", "m").unwrap().order(), loc2.order());
        let iv = loc2.interval("p1", "m").unwrap();
        assert_eq!(iv.elements(), &["m".to_string(), "p1".to_string()]);
        assert_eq!(iv.height("p1").unwrap(), 0);
        assert_eq!(iv.height("m").unwrap(), 1);
        assert!(matches!(loc2.interval("p1", "p2"), Err(Error::NotComparable(..))));

        let loc3 = preset("LOC3").unwrap();
        let iv = loc3.interval("o", "r1").unwrap();
        assert_eq!(iv.order().element_set(), subset(["o", "q1", "q2", "r1"]));
        assert_eq!(iv.height("o").unwrap(), 0);
        assert_eq!(iv.height("q1").unwrap(), 1);
        assert_eq!(iv.height("r1").unwrap(), 2);
        let single = loc3.interval("q2", "q2").unwrap();
        assert_eq!(single.elements().len(), 1);
    }

    #[test]
    fn coherence_rules() {
        let loc2 = preset("LOC2").unwrap();
        let v0 = subset(["m"]);
        let v = loc2.coherent_complement("o", "m", &v0).unwrap();
        assert_eq!(v.verdict, Verdict::NotCoherent);
        assert_eq!(v.rule, CoherenceRule::HeightObstruction);
        let v = loc2.coherent_complement("p1", "m", &v0).unwrap();
        assert_eq!(v.verdict, Verdict::Coherent);
        assert_eq!(v.rule, CoherenceRule::DimensionAtMostOne);

        let w = subset(["a", "m"]);
        let nagata = preset("NAGATA2").unwrap();
        let v = nagata.coherent_complement("o", "m", &w).unwrap();
        assert_eq!((v.verdict, v.rule), (Verdict::NotCoherent, CoherenceRule::Annotation));
        let poly = preset("POLY2").unwrap();
        let v = poly.coherent_complement("o", "m", &w).unwrap();
        assert_eq!((v.verdict, v.rule), (Verdict::Coherent, CoherenceRule::Annotation));

        // generic-point rule: every nonzero prime of [q1, m] lies in V0
        let loc3 = preset("LOC3").unwrap();
        let v0 = subset(["r1", "r2", "r3", "m"]);
        let v = loc3.coherent_complement("q1", "m", &v0).unwrap();
        assert_eq!((v.verdict, v.rule), (Verdict::Coherent, CoherenceRule::GenericPoint));

        // LOC2 with V0 = V(p1): a genuinely ring-dependent query
        let v = loc2.coherent_complement("o", "m", &subset(["p1", "m"])).unwrap();
        assert_eq!(v.verdict, Verdict::Undetermined);
        assert!(matches!(
            loc2.coherent_complement("o", "m", &subset(["o"])),
            Err(Error::NotUpperSet(_))
        ));
    }

    #[test]
    fn trivial_rule_on_empty_and_full() {
        for name in PRESET_NAMES {
            let poset = preset(name).unwrap();
            let all = poset.order().element_set();
            for (p, q) in poset.order().relations() {
                for v0 in [Subset::new(), all.clone()] {
                    let v = poset.coherent_complement(&p, &q, &v0).unwrap();
                    assert_eq!(v.verdict, Verdict::Coherent);
                    assert_eq!(v.rule, CoherenceRule::Trivial);
                }
            }
        }
    }

    #[test]
    fn presets_shapes() {
        let dvr = preset("DVR1").unwrap();
        assert_eq!(dvr.elements().len(), 2);
        assert_eq!(dvr.order().hasse_edges().len(), 1);
        let loc3 = preset("LOC3").unwrap();
        assert_eq!(loc3.elements().len(), 8);
        assert_eq!(loc3.heights().values().max(), Some(&3));
        assert_eq!(loc3.heights().values().min(), Some(&0));
        let loc2m = preset("LOC2M").unwrap();
        assert_eq!(loc2m.elements().len(), 8);
        assert_eq!(loc2m.order().minimal_elements().len(), 3);
        assert!(matches!(preset("Z"), Err(Error::UnknownPreset(_))));
        assert_eq!("assume-noncoherent".parse::<UndeterminedPolicy>().unwrap(), UndeterminedPolicy::AssumeNoncoherent);
    }
}
