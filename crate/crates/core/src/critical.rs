//! Branch constants of the two-parameter lattice family for the planar
//! p-ball, the branch-selected critical determinant, explicit critical
//! bases, and the sweep of the moduli function over σ.
//!
//! The family has two distinguished branches: Branch0 pins σ = σ_p and runs
//! through (1, 0); Branch1 pins σ = 1 and runs through (−2^{−1/p}, 2^{−1/p}).
//! The critical determinant is the smaller of the two branch determinants,
//! with the exchange happening at p = 2 and again at p₀ ≈ 2.5725.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::lattice::{
    check_exponent, check_finite_exponent, classify, BallClass, Lattice2, Point2,
};
use crate::numerics::{find_root, log_gamma, Tolerance};
use crate::scalar::Scalar;

/// Which branch of the family a determinant or basis comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BranchTag {
    /// σ = σ_p; basis {(1, 0), (−1/2, σ_p/2)}.
    Branch0,
    /// σ = 1; basis {(A, τ_p·A), (−2^{−1/p}, 2^{−1/p})} with A = (1+τ_p^p)^{−1/p}.
    Branch1,
}

/// Everything the reporting layer needs to know about one exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalReport<R: Scalar> {
    pub p: R,
    pub sigma_p: R,
    pub tau_p: R,
    pub delta0: R,
    pub delta1: R,
    /// Branch-selected critical determinant, min(delta0, delta1).
    pub delta: R,
    pub branch: BranchTag,
    pub class: BallClass,
    /// Δ(D_p)^{−p/2}.
    pub kappa_optimal: R,
    /// Γ(1 + 2/p)^{1/2} / Γ(1 + 1/p).
    pub kappa_sufficient: R,
}

/// σ_p = (2^p − 1)^{1/p}, evaluated as 2·(1 − 2^{−p})^{1/p} so large p does
/// not overflow 2^p.
pub fn sigma_p<R: Scalar>(p: R) -> Result<R> {
    check_finite_exponent(p)?;
    let two = R::of(2.0);
    Ok(two * ((-((-p * two.ln()).exp())).ln_1p() / p).exp())
}

/// The unique root τ_p of 2(1 − τ)^p = 1 + τ^p in [0, 1).
///
/// g(τ) = 2(1−τ)^p − 1 − τ^p has g(0) = 1 > 0 and g(1⁻) < 0, so the bracket
/// always holds.
pub fn tau_p<R: Scalar>(p: R) -> Result<R> {
    check_finite_exponent(p)?;
    let one = R::one();
    let two = R::of(2.0);
    let g = move |t: R| two * (one - t).powf(p) - one - t.powf(p);
    find_root(g, R::zero(), R::of(0.999_999_999), &Tolerance::default())
}

/// Determinant of the σ = σ_p branch: σ_p / 2.
pub fn delta0<R: Scalar>(p: R) -> Result<R> {
    Ok(sigma_p(p)? * R::of(0.5))
}

/// Determinant of the σ = 1 branch: 4^{−1/p}·(1 + τ_p)/(1 − τ_p).
pub fn delta1<R: Scalar>(p: R) -> Result<R> {
    let t = tau_p(p)?;
    Ok(delta1_from_tau(p, t))
}

fn delta1_from_tau<R: Scalar>(p: R, t: R) -> R {
    let four_pow = (-(R::of(4.0).ln()) / p).exp();
    four_pow * (R::one() + t) / (R::one() - t)
}

/// (1 + t^p)^{−1/p} in log space; exact 1 at t = 0.
fn inv_p_root_one_plus_pow<R: Scalar>(t: R, p: R) -> R {
    (-(t.powf(p)).ln_1p() / p).exp()
}

static DAVIS_P0: OnceLock<f64> = OnceLock::new();

/// The exponent p₀ where the two branch determinants exchange the minimum:
/// the root of delta1 − delta0 on [2.5, 2.7]. Computed once (always in f64)
/// and cached; safe under concurrent first access.
pub fn davis_constant<R: Scalar>() -> Result<R> {
    if let Some(&v) = DAVIS_P0.get() {
        return Ok(R::of(v));
    }
    let h = |p: f64| -> f64 {
        // Both branch determinants are finite and smooth on [2.5, 2.7].
        let d1 = delta1::<f64>(p).expect("delta1 finite on [2.5, 2.7]");
        let d0 = delta0::<f64>(p).expect("delta0 finite on [2.5, 2.7]");
        d1 - d0
    };
    let p0 = find_root(h, 2.5, 2.7, &Tolerance::<f64>::default())?;
    let _ = DAVIS_P0.set(p0);
    Ok(R::of(p0))
}

fn select_branch<R: Scalar>(p: R, p0: R) -> BranchTag {
    // Branch1 on [1, 2] and [p0, ∞); Branch0 on (2, p0]. At the crossings the
    // two determinants agree, so the tag is presentational: p = 2 reports the
    // closure of the first Branch1 interval, p = p0 the closure of Branch0.
    if p <= R::of(2.0) {
        BranchTag::Branch1
    } else if p <= p0 {
        BranchTag::Branch0
    } else {
        BranchTag::Branch1
    }
}

fn kappa_from_delta<R: Scalar>(p: R, delta: R) -> Result<(R, R)> {
    let half = R::of(0.5);
    let one = R::one();
    let k_suff =
        (half * log_gamma(one + R::of(2.0) / p)? - log_gamma(one + one / p)?).exp();
    let k_opt = (-(half * p) * delta.ln()).exp();
    Ok((k_opt, k_suff))
}

/// Branch constants, the selected critical determinant Δ(D_p), and the two
/// density-threshold constants, for any p in [1, ∞].
///
/// At p = ∞ every field takes its limit value (σ → 2, τ → 0, all
/// determinants → 1, both κ → 1).
pub fn critical_determinant<R: Scalar>(p: R) -> Result<CriticalReport<R>> {
    check_exponent(p)?;
    let p0 = davis_constant::<R>()?;
    let class = classify(p, p0)?;
    let one = R::one();
    if p.is_infinite() {
        return Ok(CriticalReport {
            p,
            sigma_p: R::of(2.0),
            tau_p: R::zero(),
            delta0: one,
            delta1: one,
            delta: one,
            branch: BranchTag::Branch1,
            class,
            kappa_optimal: one,
            kappa_sufficient: one,
        });
    }
    let s = sigma_p(p)?;
    let t = tau_p(p)?;
    let d0 = s * R::of(0.5);
    let d1 = delta1_from_tau(p, t);
    let branch = select_branch(p, p0);
    // On each branch interval the selected formula is the smaller of the
    // two; taking the min outright keeps the crossings p ∈ {2, p0} free of
    // the root-finder residual carried by delta1.
    let delta = d0.min(d1);
    let (k_opt, k_suff) = kappa_from_delta(p, delta)?;
    Ok(CriticalReport {
        p,
        sigma_p: s,
        tau_p: t,
        delta0: d0,
        delta1: d1,
        delta,
        branch,
        class,
        kappa_optimal: k_opt,
        kappa_sufficient: k_suff,
    })
}

/// (kappa_optimal, kappa_sufficient) for finite p >= 1.
///
/// kappa_optimal >= kappa_sufficient is observed numerically but not
/// asserted anywhere in this crate.
pub fn kappa_constants<R: Scalar>(p: R) -> Result<(R, R)> {
    check_finite_exponent(p)?;
    let p0 = davis_constant::<R>()?;
    let delta = match select_branch(p, p0) {
        BranchTag::Branch0 => delta0(p)?,
        BranchTag::Branch1 => delta1(p)?,
    };
    kappa_from_delta(p, delta)
}

/// Explicit critical basis of the requested branch.
///
/// Both basis vectors and their sum lie on the unit curve; the basis
/// determinant equals the branch determinant. At p = ∞ the limit bases
/// (σ → 2, τ → 0) are returned: {(1, 0), (−1/2, 1)} and {(1, 0), (−1, 1)},
/// both of determinant 1.
pub fn critical_lattice<R: Scalar>(p: R, branch: BranchTag) -> Result<Lattice2<R>> {
    check_exponent(p)?;
    if p.is_infinite() {
        let one = R::one();
        let b2 = match branch {
            BranchTag::Branch0 => Point2::new(R::of(-0.5), one),
            BranchTag::Branch1 => Point2::new(-one, one),
        };
        return Ok(Lattice2::new(Point2::new(one, R::zero()), b2));
    }
    match branch {
        BranchTag::Branch0 => {
            let s = sigma_p(p)?;
            let half = R::of(0.5);
            Ok(Lattice2::new(
                Point2::new(R::one(), R::zero()),
                Point2::new(-half, s * half),
            ))
        }
        BranchTag::Branch1 => {
            let t = tau_p(p)?;
            let a = inv_p_root_one_plus_pow(t, p);
            let b = (-(R::of(2.0).ln()) / p).exp();
            Ok(Lattice2::new(Point2::new(a, t * a), Point2::new(-b, b)))
        }
    }
}

/// The three pairs of boundary points ±b1, ±(b1+b2), ±b2 of a critical
/// lattice, in counterclockwise order when det(b1, b2) > 0.
pub fn shell_points<R: Scalar>(lat: &Lattice2<R>) -> [Point2<R>; 6] {
    let s = lat.b1 + lat.b2;
    [lat.b1, s, lat.b2, -lat.b1, -s, -lat.b2]
}

/// The τ that pairs with a given σ in the two-parameter family: the unique
/// τ ∈ [0, τ_p] putting the third pair λ1 + λ2 = (A − B, τA + σB) on the
/// unit curve, where A = (1+τ^p)^{−1/p} and B = (1+σ^p)^{−1/p}.
pub fn tau_of_sigma<R: Scalar>(p: R, sigma: R) -> Result<R> {
    check_finite_exponent(p)?;
    if p == R::one() {
        return Err(Error::DomainError(
            "tau_of_sigma needs p > 1 (the family degenerates at p = 1)".to_string(),
        ));
    }
    let s_p = sigma_p(p)?;
    if !(sigma >= R::one()) || sigma > s_p + R::of(1e-12) {
        return Err(Error::DomainError(format!(
            "sigma must lie in [1, sigma_p ~= {:?}], got {:?}",
            s_p, sigma
        )));
    }
    let t_p = tau_p(p)?;
    let b = inv_p_root_one_plus_pow(sigma, p);
    let one = R::one();
    let f = move |t: R| {
        let a = inv_p_root_one_plus_pow(t, p);
        (a - b).abs().powf(p) + (t * a + sigma * b).powf(p) - one
    };
    find_root(f, R::zero(), t_p + R::of(1e-9), &Tolerance::default())
}

/// Determinant of the admissible lattice at (τ(σ), σ):
/// (τ + σ)(1+τ^p)^{−1/p}(1+σ^p)^{−1/p}.
pub fn delta_moduli<R: Scalar>(p: R, sigma: R) -> Result<R> {
    let t = tau_of_sigma(p, sigma)?;
    let a = inv_p_root_one_plus_pow(t, p);
    let b = inv_p_root_one_plus_pow(sigma, p);
    Ok((t + sigma) * a * b)
}

/// Result of sampling the moduli determinant over a uniform σ-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuliSweep<R: Scalar> {
    /// Grid point attaining the minimum.
    pub sigma_star: R,
    /// Minimum sampled determinant.
    pub delta_min: R,
    /// All (σ, Δ(p, σ)) samples in grid order.
    pub profile: Vec<(R, R)>,
}

/// Samples delta_moduli on `grid_size` uniform points over [1, σ_p].
///
/// The observed minimizer always sits within one grid step of an endpoint;
/// the interior never dips below min(delta0, delta1).
pub fn moduli_sweep<R: Scalar>(p: R, grid_size: usize) -> Result<ModuliSweep<R>> {
    if grid_size < 2 {
        return Err(Error::DomainError(format!(
            "grid_size must be at least 2, got {grid_size}"
        )));
    }
    let s_p = sigma_p(p)?;
    let one = R::one();
    let mut profile = Vec::with_capacity(grid_size);
    let mut best_idx = 0usize;
    let mut best = R::infinity();
    for i in 0..grid_size {
        let sigma = if i + 1 == grid_size {
            s_p
        } else {
            let frac = R::of(i as f64 / (grid_size - 1) as f64);
            one + (s_p - one) * frac
        };
        let d = delta_moduli(p, sigma)?;
        if d < best {
            best = d;
            best_idx = i;
        }
        profile.push((sigma, d));
    }
    Ok(ModuliSweep {
        sigma_star: profile[best_idx].0,
        delta_min: best,
        profile,
    })
}

/// Critical determinant of the scaled ball 2^m·D_p, i.e. 4^m·Δ(D_p).
pub fn scaled_critical_determinant<R: Scalar>(p: R, m: u32) -> Result<R> {
    let delta = critical_determinant(p)?.delta;
    Ok(R::of(4.0).powi(m as i32) * delta)
}
