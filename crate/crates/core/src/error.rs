use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),

    /// The transitive closure of the generating relations contains `p ⪯ q ⪯ p`.
    #[error("relation cycle between `{0}` and `{1}` violates antisymmetry")]
    Cycle(String, String),

    #[error("{size} elements exceeds the enumeration bound of {bound}")]
    SizeExceeded { size: usize, bound: usize },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("invalid height data: {0}")]
    Height(String),

    #[error("coherence annotation ({p}, {q}, {w:?}) is not an upper set of an interval")]
    AnnotationKey { p: String, q: String, w: Vec<String> },

    #[error("`{0}` is not contained in `{1}`")]
    NotComparable(String, String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("subset {0:?} is not specialization-closed")]
    NotUpperSet(Vec<String>),

    #[error("filtration level {0} is not specialization-closed")]
    NotSpecializationClosed(usize),

    #[error("filtration level {0} is not contained in the previous level")]
    NotDescending(usize),

    #[error("level function is missing a value for `{0}`")]
    MissingLevel(String),

    #[error("level function decreases along `{0}` ⊆ `{1}`")]
    NotMonotone(String, String),

    #[error("cover `{0}` ⋖ `{1}` violates the codimension axiom")]
    NotCodimensionFunction(String, String),

    #[error("mutation class {0:?} is not closed")]
    NotClosed(Vec<String>),

    #[error("mutation class {0:?} is not discrete")]
    NotDiscrete(Vec<String>),

    #[error("coherence of the complement is undetermined on the interval [`{0}`, `{1}`]")]
    UndeterminedCoherence(String, String),

    /// The one-step recipe produced a relation that is not transitively closed.
    #[error("one-step relation is not transitive: `{0}` ⪯ `{1}` is forced by closure")]
    NonTransitiveRecipe(String, String),

    #[error("pruning set leaves a non-transitive upper bound at `{0}` ⪯ `{1}`")]
    InconsistentPruning(String, String),

    #[error("step annotation refers to step {0}, outside 1..={1}")]
    StepOutOfRange(usize, usize),

    #[error("orders are defined on different element sets")]
    ElementMismatch,
}
