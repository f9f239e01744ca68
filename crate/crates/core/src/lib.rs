//! Critical determinants, critical lattices, and optimal lattice packings
//! of planar balls |x|^p + |y|^p ≤ 1 and their dyadic dilates.
//!
//! The crate is organized around a handful of closed-form quantities — the
//! corner parameter σ_p, the branch parameter τ_p, the two candidate
//! determinants Δ⁽⁰⁾ and Δ⁽¹⁾ — and the lattices that attain them. On top
//! of those sit packing constructions and verification, shell solving on
//! the unit curve, exact integer-point counts, and quadrature of the arc
//! length.
//!
//! Everything numeric is generic over the scalar type through [`Scalar`]
//! (implemented for `f64` and `f32`); `f64` aliases for the common types
//! are exported at the crate root. `f32` works but needs tolerances far
//! looser than the defaults.

pub mod critical;
pub mod error;
pub mod lattice;
pub mod numerics;
pub mod packing;
pub mod rng;
pub mod scalar;
pub mod shells;

pub use crate::critical::{
    critical_determinant, critical_lattice, davis_constant, delta0, delta1, delta_moduli,
    kappa_constants, moduli_sweep, scaled_critical_determinant, shell_points, sigma_p,
    tau_of_sigma, tau_p, BranchTag, CriticalReport, ModuliSweep,
};
pub use crate::error::{Error, Result};
pub use crate::lattice::{
    classify, enumerate_nonzero_points, enumerate_nonzero_points_with_cap, is_admissible,
    pnorm_power, Admissibility, Ball, BallClass, Lattice2, Point2, ENUM_CAP_DEFAULT,
};
pub use crate::numerics::{find_root, integrate, log_gamma, Tolerance};
pub use crate::packing::{
    ball_volume, central_density, circumscribed_hexagon_area, inscribed_hexagon_area,
    lattice_hexagon_area, packing_density, packing_lattice, packing_report,
    sample_admissible_lattices, verify_packing, PackingCheck, PackingReport,
};
pub use crate::rng::SplitMix64;
pub use crate::scalar::Scalar;
pub use crate::shells::{
    arc_length, area_by_quadrature, count_integer_points, genus_even_curve, jarnik_bound,
    solve_shell, theta_coefficients, Shell, THETA_CAP_DEFAULT,
};

/// `f64` instantiations of the generic types.
pub type Point2f = Point2<f64>;
pub type Lattice2f = Lattice2<f64>;
pub type Ballf = Ball<f64>;
pub type Tolerancef = Tolerance<f64>;
pub type Admissibilityf = Admissibility<f64>;
pub type CriticalReportf = CriticalReport<f64>;
pub type ModuliSweepf = ModuliSweep<f64>;
pub type PackingReportf = PackingReport<f64>;
pub type PackingCheckf = PackingCheck<f64>;
pub type Shellf = Shell<f64>;
