//! Space-time norms and the verification scans built on the evolution engine.

pub mod admissible;
pub mod decay;
pub mod norms;
pub mod reduction;
pub mod sobolev;
pub mod strichartz;

pub use admissible::{admissible_pair_check, canonical_pairs, AdmissibleCheck, AdmissiblePair, Exponent, Family};
pub use decay::{decay_series, potential_decay_scan, DecaySeries};
pub use norms::{lr_norm, simpson, spacetime_norm};
pub use reduction::{reduction_deviation, reduction_identity_check};
pub use sobolev::{bump_family, bump_grid, sobolev_equiv_ratio, square_function_ratio, OffAxisBump};
pub use strichartz::{gaussian_family, strichartz_scan, StrichartzOptions, StrichartzScan};
