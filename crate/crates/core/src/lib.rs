//! Numerical core for three families of Schrödinger-cat signatures:
//!
//! - [`signatures`]: variance-product inequalities over binned number
//!   measurements and the NOON coherence moment, with classical-mixture
//!   negative controls.
//! - [`ghz`]: exact multi-qubit GHZ simulation, Svetlichny operator
//!   expectations, and a deterministic-strategy solver for the hybrid
//!   local-hidden-variable bound.
//! - [`mlr`]: continuous-variable CHSH tests on the pair coherent state,
//!   both in the ideal homodyne limit and through an amplified
//!   number-difference measurement, including the three-region modified
//!   inequality for finite outcome separation.
//!
//! Everything is built on [`fock`], a truncated bosonic Hilbert-space layer
//! (states, ladder operators, beam splitters, oscillator eigenfunctions and
//! their half-line overlap integrals).
//!
//! All types are immutable after construction and all operations are pure
//! functions; concurrent reads are safe and results are bit-identical for
//! identical inputs within one process.

pub mod error;
pub mod fock;
pub mod ghz;
pub mod mlr;
pub mod signatures;

pub(crate) mod math;

pub use error::{Error, Result};
pub use fock::{
    beam_splitter_5050, expectation, FockVector, HalfLineOverlaps, HermiteBasisCache, ModeOperator,
};
pub use ghz::{
    bipartition_inference_check, hybrid_bound, make_ghz, svetlichny_report, svetlichny_value,
    QubitRegisterState, SiteSetting, SvetlichnyReport,
};
pub use mlr::{
    amplified_joint_distribution, chsh_e, joint_quadrature_pdf, modified_chsh, optimize_chsh,
    pair_coherent, region_probabilities, sign_correlator, BellReport, ChshAngles,
    JointOutcomeDistribution, MeasurementSetting, PovmCache, Region, RegionBinning, RegionTable,
    SchmidtDiagonalState, Site,
};
pub use signatures::{
    binned_conditional_stats, mixture_expectation, noon_moment, noon_moment_mixture,
    type_one_statistic, type_one_statistic_mixture, BinRule, BinStats, BinnedStats, MixtureSpec,
    TypeIReport,
};
