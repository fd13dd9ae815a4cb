//! Special functions and quadrature engines.

mod bessel;
mod gamma;
mod hankel;
mod quad;

pub use bessel::{
    bessel_i, bessel_i_integral, bessel_j, bessel_j_integral, hankel_asymptotic, iv, iv_scaled, j_regime, jv, weber_closed_form, weber_integral, JRegime,
};
pub use gamma::{gamma_fn, ln_gamma};
pub use hankel::{hankel_transform, Direction, HankelPlan, RadialGrid};
pub use quad::{adaptive, gauss_legendre, quad_semi_infinite, Domain, QuadResult, QuadValue, QuadratureRule};
