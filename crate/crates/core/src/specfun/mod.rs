//! Special functions of complex parameters and the quadrature primitives behind them.

mod bessel;
mod gamma;
mod hyp2f1;
pub mod quadrature;

pub use bessel::{
    admissibility_margin, bessel_k, bessel_k_scaled, weber_schafheitlin_gamma_product,
    weber_schafheitlin_quadrature, weber_schafheitlin_rhs,
};
pub use gamma::{beta, distance_to_pole, gamma, ln_gamma, rgamma, POLE_TOLERANCE};
pub use hyp2f1::{hyp2f1, MAX_TERMS, SERIES_RADIUS};
pub(crate) use bessel::{small_argument_tail, SMALL_ARGUMENT_LOG};
pub(crate) use hyp2f1::hyp2f1_unit_interval;
pub use quadrature::{
    integrate, integrate_oscillatory, integrate_panels, DecayEnvelope, IntegrationDomain,
    QuadratureSpec,
};

pub use num_complex::Complex64;
