//! Data-driven reconstruction of finite discrete-time dynamical systems.
//!
//! The pipeline runs from a measured system, through the subshift of its
//! observation sequences and the word sets of that subshift, back to a
//! reconstructed system:
//!
//! ```text
//! ObservedSystem --generate_subshift--> SubshiftPresentation --word_functor--> TimeSeriesData --reconstruct--> ReconResult
//! ```
//!
//! Alongside it sit the morphisms of each stage (semiconjugacies, sliding block
//! codes, timeseries-data morphisms with a jump), colimits of diagrams of
//! systems, and [`consistency_check`], which confirms that fully observed
//! systems are recovered up to conjugacy.

pub mod colimit;
pub mod conjugacy;
pub mod dynsys;
pub mod error;
pub mod io;
pub mod observe;
pub mod random;
pub mod recon;
pub mod sbc;
pub mod shift;
pub mod symbol;
pub mod tsd;

pub use colimit::{Colimit, DiagramArrow, DynDiagram};
pub use conjugacy::find_conjugacy;
pub use dynsys::{DynMorphism, FiniteDynSys};
pub use error::{Error, Result};
pub use observe::{Measurement, ObsMorphism, ObservedSystem};
pub use recon::{
    consistency_check, flatten_delay_word, induced_recon_morphism, jump_reduction, jump_reduction_source, reconstruct,
    semiconjugacy_from_tsd_morphism, ConsistencyReport, EmptyReason, Induced, ReconResult,
};
pub use sbc::{compose_sbc, SlidingBlockCode};
pub use shift::{Edge, SubshiftPresentation};
pub use symbol::{StateId, Symbol, VertexId, Word};
pub use tsd::{
    compose_tsd_morphisms, data_functor, tsd_from_sequence, tsd_inclusion, word_functor, Axiom, TimeSeriesData,
    TsdMorphism, Violation,
};
