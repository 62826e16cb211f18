//! Exact-computation laboratory for Lee-Yang zeros of ferromagnetic
//! Blume-Capel and annealed dilute Ising models on arbitrary coupling graphs.
//!
//! The pipeline: build a model ([`models`], [`modelspec`]), construct its
//! fugacity polynomial exactly by one of four independent engines
//! ([`engines`]), locate the complex zeros and classify them against the unit
//! circle ([`zeros`]), and compare the observed verdict with the sufficient
//! bounds derived from the coupling structure ([`structure`], [`theorem`]).
//!
//! The interesting regime is θ > 1, where the single-spin measure alone does
//! not have the Lee-Yang property and a strong enough ferromagnetic
//! interaction restores it.

pub mod engines;
pub mod error;
pub mod expsum;
pub mod fugacity;
pub mod models;
pub mod modelspec;
mod numerics;
pub mod structure;
pub mod theorem;
pub mod zeros;

pub use engines::{
    brute_force_partition, chain_transfer_partition, hierarchical_partition,
    hierarchical_partition_permuted, operator_partition, BlockMagnetizationTable, ModelInstance,
    DEFAULT_STATE_CAP,
};
pub use error::{Error, Result};
pub use expsum::{ExpSum, Term, DEFAULT_TERM_CAP};
pub use fugacity::{max_relative_coeff_error, FugacityPolynomial};
pub use models::{
    theta_from_delta, Atom, CouplingMatrix, HierarchySpec, MeasureLabel, SpinMeasure,
};
pub use modelspec::{CouplingSpec, MeasureSpec, ModelSpec};
pub use structure::{
    bottleneck_matching, pair_partition_condition_ii, verify_condition_ii, JointPartition,
    MatchingReport,
};
pub use theorem::{
    beta_min_for_dilution, bound_condition_i, bound_condition_ii, corollary_bounds, epsilon_pm,
    omega_pm, psi_factored, sharpness_scan, verify_lee_yang, verify_with_polynomial, BoundReport,
    CorollaryBounds, Prediction, SharpnessScan, TheoremBranch, TheoremVerification, TwoSpinKernel,
};
pub use zeros::{
    classify, find_zeros, find_zeros_with, newton_residual, zero_trajectory, LeeYangVerdict,
    Precision, RootFindOptions, TrajectoryPoint, ZeroSet, DEFAULT_CIRCLE_TOL,
};
