//! Inner and outer bounds on the macroscopic strains of planar single-slip
//! polycrystals.
//!
//! The crate is organized bottom-up:
//!
//! - [`mat2`]: 2×2 algebra and the shear-frame parametrization of SL(2);
//! - [`slip`]: the strain sets `M_s` and `N_s`;
//! - [`taylor`]: Taylor bounds, their reduction and triviality;
//! - [`compat`]: rank-one compatibility across an interface and laminates;
//! - [`polycrystal`]: grain geometry and boundary (outer) bounds;
//! - [`random`]: random textures and the Monte Carlo triviality estimate;
//! - [`shear_square`]: the exact nine-cell piecewise-affine construction.

pub mod compat;
pub mod error;
pub mod mat2;
pub mod polycrystal;
pub mod random;
pub mod scalar;
pub mod shear_square;
pub mod slip;
pub mod taylor;

pub use compat::{
    find_connection, laminate_split, nu_compatible, LaminateSplit, RankOneConnection,
};
pub use error::{Error, Result};
pub use mat2::{decompose, Mat2, ShearFrame, Vec2, DEFAULT_TOL};
pub use polycrystal::{
    analyze_boundary, equal_perp_full, outer_bound_full_member, outer_bound_perp, BoundaryAnalysis,
    BoundaryCurve, Grain, OuterBound, Polycrystal,
};
pub use random::{estimate_trivial_probability, find_kl, trivial_probability, McConfig, McResult};
pub use scalar::{Scalar, Sqrt3};
pub use shear_square::{build, conclusion, verify, PwAffineMap, ShearSquareBuild};
pub use slip::{energy, in_m, in_n, psi, SlipSystem};
pub use taylor::{
    gamma_bounds, in_lambda, is_trivial, normalize, reduce, taylor_m_member, taylor_member,
    taylor_member_raw, AngleSet, BoundKind, TaylorBound,
};
