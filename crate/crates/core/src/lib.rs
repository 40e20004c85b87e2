//! Classical and progressive-order WENO-2r interpolation at cell midpoints.
//!
//! The numerical core is generic over the scalar type. Interpolation
//! identities are checked in exact rational arithmetic through [`Field`];
//! indicators and nonlinear weights need a float ([`Real`]). The aliases at
//! the crate root fix the scalar to `f64`.

pub mod error;
pub mod grid;
pub mod harness;
pub mod interp;
pub mod lagrange;
pub mod quadrature;
pub mod scalar;
pub mod smoothness;
pub mod weights;

pub use error::{Result, WenoError};
pub use harness::{
    estimated_order, locate_singular_interval, render_report, run_refinement, run_refinement_fn,
    test_function, time_method, RefinementReport, ReportFormat, SingularInterval, TestFunctionSpec,
};
pub use interp::{interpolate_all_midpoints, midpoint_value, Interpolator, Method};
pub use lagrange::{aitken_combine, full_stencil_value, substencil_value};
pub use scalar::{Field, Real};
pub use smoothness::{IndicatorKind, Side};
pub use weights::{DyadicCoefficient, Pairing};

pub type UniformGrid = grid::UniformGrid<f64>;
pub type PointValues = grid::PointValues<f64>;
pub type Stencil = lagrange::Stencil<f64>;
pub type IndicatorSet = smoothness::IndicatorSet<f64>;
pub type UndividedDifferences = smoothness::UndividedDifferences<f64>;
pub type WenoParams = weights::WenoParams<f64>;
pub type WeightVector = weights::WeightVector<f64>;
pub type WeightTreeTrace = weights::WeightTreeTrace<f64>;
pub type MethodSpec = interp::MethodSpec<f64>;
pub type MidpointSample = interp::MidpointSample<f64>;
pub type MidpointEvaluation = interp::MidpointEvaluation<f64>;
pub type GaussLegendre = quadrature::GaussLegendre<f64>;
