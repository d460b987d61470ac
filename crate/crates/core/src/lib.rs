//! Rigidity orders of bar-and-joint frameworks.
//!
//! The crate decides rigidity order with the linear flex ladder when the
//! first-order flex space is one-dimensional, falls back on a fourth
//! derivative energy test otherwise, and cross-checks the result by
//! probing how fast stiff-bar energies grow near the configuration.

pub mod corpus;
pub mod critical;
pub mod energy;
pub mod error;
pub mod framework;
pub mod growth;
pub mod jet;
pub mod ladder;
pub mod linalg;
pub mod poly;
pub mod rigidity;
pub mod sphere;
pub mod trajectory;

pub use error::{Result, RigidityError};
pub use framework::{
    affine_span_dimension, auto_pin, measure, pin, AutoPinned, Edge, Framework, FrameworkFile,
    Isometry, MeasureKind, MeasurementVector, PinnedFramework, DEFAULT_RANK_TOL,
};
pub use critical::{
    family_preimage, fourth_derivative_test, order2k_family_test, second_order_rigidity_test, AnalyticTarget,
    Classification, CritReport, SecondOrderKind, SpherePoint,
};
pub use energy::{
    classify_flex, classify_flex_lengths, energy_along_trajectory, energy_value_grad_hess, faa_di_bruno_term,
    kernel_of_hessian_equals_k, EdgeTerm, EnergyFamily, EnergySpec, FlexClass,
};
pub use growth::{fit_growth_order, min_energy_on_sphere, GrowthFit};
pub use jet::Jet;
pub use ladder::{
    flex_rhs, rigidity_order, solve_ladder, solve_ladder_from, LevelResidual, Method, OrderReport, Verdict,
    DEFAULT_LADDER_TOL, DEFAULT_MAX_K,
};
pub use poly::{Monomial, Polynomial};
pub use trajectory::PolyTrajectory;
pub use rigidity::{
    decompose, first_order_rigid, kernel_decomposition, rigidity_matrix, KernelDecomposition,
    RigidityMatrix,
};
