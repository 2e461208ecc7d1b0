//! Intermediate sp-filtrations `Spec = V₋₁ ⊋ V₀ ⊇ … ⊇ V_{n-1} ⊋ V_n = ∅`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::Subset;
use crate::spectrum::PrimePoset;

/// A normalized sp-filtration: every level is a nonempty proper upper set
/// of the inclusion order, and levels descend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpFiltration {
    levels: Vec<Subset>,
}

/// `f(p) = max { i : p ∈ V_i }`, with `V₋₁` the whole spectrum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LevelFunction(pub BTreeMap<String, i64>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationWarning {
    /// Input level `index` equalled the whole spectrum or was empty.
    StrippedTrivialLevel { index: usize },
}

impl std::fmt::Display for FiltrationWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::StrippedTrivialLevel { index } => {
                write!(f, "level {index} is trivial (empty or full) and was stripped")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub intermediate: bool,
    pub slice: bool,
    pub truncated_slice: bool,
}

/// Filtration as it appears in JSON input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum FiltrationDocument {
    Levels { levels: Vec<Vec<String>> },
    Function { f: BTreeMap<String, i64> },
}

impl SpFiltration {
    /// The empty filtration of the standard heart.
    pub fn standard() -> Self {
        Self { levels: Vec::new() }
    }

    pub fn validate(poset: &PrimePoset, levels: &[Subset]) -> Result<Self> {
        Self::validate_with_warnings(poset, levels).map(|(f, _)| f)
    }

    /// Checks each level is specialization-closed and the chain descends,
    /// then strips leading full and trailing empty levels.
    pub fn validate_with_warnings(
        poset: &PrimePoset,
        levels: &[Subset],
    ) -> Result<(Self, Vec<FiltrationWarning>)> {
        let order = poset.order();
        for (i, level) in levels.iter().enumerate() {
            if !order.is_upper_set(level)? {
                return Err(Error::NotSpecializationClosed(i));
            }
            if i > 0 && !level.is_subset(&levels[i - 1]) {
                return Err(Error::NotDescending(i));
            }
        }
        let n = order.len();
        let mut warnings = Vec::new();
        let mut kept = Vec::new();
        for (i, level) in levels.iter().enumerate() {
            if level.is_empty() || level.len() == n {
                log::warn!("filtration level {i} is trivial; stripped");
                warnings.push(FiltrationWarning::StrippedTrivialLevel { index: i });
            } else {
                kept.push(level.clone());
            }
        }
        Ok((Self { levels: kept }, warnings))
    }

    pub fn levels(&self) -> &[Subset] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// `V_i` for `-1 ≤ i`, with `V₋₁` everything and `V_i = ∅` past the end.
    pub fn level(&self, poset: &PrimePoset, i: i64) -> Subset {
        if i < 0 {
            poset.order().element_set()
        } else {
            self.levels.get(i as usize).cloned().unwrap_or_default()
        }
    }

    /// Differences `V_{i-1} ∖ V_i` for `i = 0..=n`; the last one is `V_{n-1}`.
    /// Repeated levels give empty differences.
    pub fn differences(&self, poset: &PrimePoset) -> Vec<Subset> {
        let n = self.levels.len() as i64;
        (0..=n)
            .map(|i| {
                let above = self.level(poset, i);
                self.level(poset, i - 1)
                    .difference(&above)
                    .cloned()
                    .collect()
            })
            .collect()
    }

    /// The first `k` levels.
    pub fn truncate(&self, k: usize) -> Self {
        Self {
            levels: self.levels.iter().take(k).cloned().collect(),
        }
    }

    pub fn to_level_function(&self, poset: &PrimePoset) -> LevelFunction {
        LevelFunction(
            poset
                .elements()
                .iter()
                .map(|p| {
                    let top = self
                        .levels
                        .iter()
                        .rposition(|v| v.contains(p))
                        .map_or(-1, |i| i as i64);
                    (p.clone(), top)
                })
                .collect(),
        )
    }

    /// `V_i = { p : f(p) ≥ i }`, shifted so that `V₋₁` is everything.
    pub fn from_level_function(poset: &PrimePoset, f: &LevelFunction) -> Result<Self> {
        for p in f.0.keys() {
            if !poset.order().contains(p) {
                return Err(Error::UnknownElement(p.clone()));
            }
        }
        for p in poset.elements() {
            if !f.0.contains_key(p) {
                return Err(Error::MissingLevel(p.clone()));
            }
        }
        for (p, q) in poset.order().relations() {
            if f.0[&p] > f.0[&q] {
                return Err(Error::NotMonotone(p, q));
            }
        }
        let (Some(lo), Some(hi)) = (f.0.values().min(), f.0.values().max()) else {
            return Ok(Self::standard());
        };
        let levels = ((lo + 1)..=*hi)
            .map(|i| {
                f.0.iter()
                    .filter(|(_, &v)| v >= i)
                    .map(|(p, _)| p.clone())
                    .collect()
            })
            .collect();
        Ok(Self { levels })
    }

    pub fn from_document(poset: &PrimePoset, doc: &FiltrationDocument) -> Result<Self> {
        match doc {
            FiltrationDocument::Levels { levels } => {
                let sets: Vec<Subset> = levels
                    .iter()
                    .map(|l| l.iter().cloned().collect())
                    .collect();
                Self::validate(poset, &sets)
            }
            FiltrationDocument::Function { f } => {
                Self::from_level_function(poset, &LevelFunction(f.clone()))
            }
        }
    }

    /// Slice: every difference, including `V_{n-1}`, is an antichain of primes.
    /// Truncated-slice: the same, except possibly `V_{n-1}`.
    pub fn classify(&self, poset: &PrimePoset) -> Classification {
        let order = poset.order();
        let antichain = |s: &Subset| order.subspace(s).expect("levels are validated").is_discrete();
        let n = self.levels.len() as i64;
        let truncated_slice = (0..n).all(|i| {
            let d: Subset = self
                .level(poset, i - 1)
                .difference(&self.level(poset, i))
                .cloned()
                .collect();
            antichain(&d)
        });
        let slice = truncated_slice && antichain(&self.level(poset, n - 1));
        Classification {
            intermediate: true,
            slice,
            truncated_slice,
        }
    }

    /// `V_n = { p : height(p) > n }`.
    pub fn height_filtration(poset: &PrimePoset) -> Self {
        let f = poset
            .heights()
            .iter()
            .map(|(p, &h)| (p.clone(), h as i64 - 1))
            .collect();
        Self::from_level_function(poset, &LevelFunction(f)).expect("heights are monotone")
    }

    /// `V_n = { p : d(p) > n }` for a codimension function `d`.
    pub fn codim_filtration(poset: &PrimePoset, d: &BTreeMap<String, i64>) -> Result<Self> {
        let order = poset.order();
        let mut covers = order.hasse_edges();
        covers.sort_by_key(|(p, q)| (poset.heights().get(p).copied(), p.clone(), q.clone()));
        for (p, q) in covers {
            match (d.get(&p), d.get(&q)) {
                (Some(&dp), Some(&dq)) if dq == dp + 1 => {}
                (Some(_), Some(_)) => return Err(Error::NotCodimensionFunction(p, q)),
                (None, _) => return Err(Error::MissingLevel(p)),
                (_, None) => return Err(Error::MissingLevel(q)),
            }
        }
        let f = d.iter().map(|(p, &v)| (p.clone(), v - 1)).collect();
        Self::from_level_function(poset, &LevelFunction(f))
    }
}
