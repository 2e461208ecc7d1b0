//! Closure orders on Gabriel spectra of hearts attached to sp-filtrations of
//! finite prime posets.

pub mod error;
pub mod filtration;
pub mod mutation;
pub mod poset;
pub mod render;
pub mod spectrum;
pub mod verify;

pub use error::{Error, Result};
pub use filtration::{Classification, FiltrationDocument, FiltrationWarning, LevelFunction, SpFiltration};
pub use mutation::{
    chain_order, forced_maximal, mutate_discrete, mutate_general, mutate_perfect, onestep_order, standard_order,
    BoundedOrder, Chain, ClosureOrder, MutationRule, MutationStep, PerfectCertificate,
    StepAnnotation, StepAnnotations, ThetaMap,
};
pub use poset::{subset, AxiomReport, CbFiltration, Order, Subset, DEFAULT_ENUMERATION_BOUND};
pub use spectrum::{
    preset, AnnotationKey, CoherenceRule, CoherenceVerdict, PrimeDocument, PrimePoset,
    UndeterminedPolicy, Verdict, PRESET_NAMES,
};
pub use verify::{
    brute_force_discrete_law, brute_force_perfect_law, check_piecewise, check_refinement,
    format_reports, run_suite, PropertyReport,
};
