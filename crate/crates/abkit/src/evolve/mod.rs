//! Partial-wave evolution: angular modes × per-mode Hankel × transverse Fourier.

pub mod radial;
pub mod checkpoint;
pub mod data;
pub mod experiment;
pub mod field;
pub mod grid;
pub mod nls;
pub mod observables;
pub mod oracle;

pub use field::{ModeField, PartialWave, Space};
pub use grid::GridSpec;
pub use oracle::{kernel_bump_check, BumpReadout};
pub use observables::{observables, virial_terms, MorawetzWeight, Observables, VirialTerms};
pub use nls::{morawetz_diagnostics, nls_evolve, MorawetzSeries, NlsParams, Sample, Trajectory};
pub use data::RegularGaussian;
pub use experiment::NlsExperiment;
pub use checkpoint::Checkpoint;
