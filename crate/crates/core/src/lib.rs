//! Exact construction of Fedosov star products on a Darboux chart.
//!
//! Coefficients are Gaussian rationals, functions are polynomials in the chart
//! coordinates, and every series is truncated at an explicit ħ-order, so all
//! identities are checked by exact equality.

pub mod analysis;
pub mod error;
pub mod fedosov;
pub mod gen;
pub mod geometry;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod symplectic;
pub mod tensor;
pub mod weyl;

pub use analysis::{
    curvature_identities, beta_form, bivector_probe, cal_r, compare, first_order_shift, gamma_form, predicted_onediff, probe_series, CalR,
    ComparisonReport, IdentityCheck, OrderComparison,
};
pub use error::{Error, Result};
pub use fedosov::{binomial_series, coeff_sequences, flat_section, solve_r, star, CoeffTable, FedosovSolver, Perturbation, StarProduct, StarResult, WeylCurvatureSpec};
pub use geometry::{Curvature4, Geometry};
pub use poly::{parse_poly, CoordPoly, Exponents, MAX_DIM};
pub use scalar::Scalar;
pub use series::{HSeries, SeriesCoeff};
pub use symplectic::SymplecticForm;
pub use tensor::{formal_poisson, schouten, series_inverse, series_product_check, series_schouten, Tensor2, Tensor3, TensorSeries, Variance};
pub use weyl::{WeylForm, WeylKey};
