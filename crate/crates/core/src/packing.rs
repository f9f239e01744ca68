//! Optimal lattice packings of the scaled balls 2^m·D_p: packing lattices,
//! packing and central densities, overlap verification, ball volumes, and
//! the extremal inscribed/circumscribed hexagons.

use crate::critical::{
    critical_determinant, critical_lattice, davis_constant, scaled_critical_determinant,
    shell_points, sigma_p, tau_p, BranchTag,
};
use crate::error::{Error, Result};
use crate::lattice::{
    check_exponent, check_finite_exponent, classify, is_admissible, Ball, BallClass, Lattice2,
    Point2,
};
use crate::numerics::{log_gamma, Tolerance};
use crate::rng::SplitMix64;
use crate::scalar::Scalar;

/// Outcome of a packing verification; `witness` is a lattice vector that
/// violates the non-overlap condition when `ok` is false.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingCheck<R: Scalar> {
    pub ok: bool,
    pub witness: Option<Point2<R>>,
}

/// Full description of the optimal lattice packing of 2^m·D_p.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PackingReport<R: Scalar> {
    pub p: R,
    pub m: u32,
    /// Area of 2^m·D_p.
    pub volume: R,
    pub packing_lattice: Lattice2<R>,
    pub density: R,
    pub central_density: R,
    /// Result of running verify_packing on the reported lattice.
    pub verified: bool,
    pub hexagon_inscribed_area: R,
    pub hexagon_circumscribed_area: R,
}

/// Area of 2^m·D_p: 4^m·4·Γ(1 + 1/p)²/Γ(1 + 2/p), and 4^m·4 at p = ∞.
pub fn ball_volume<R: Scalar>(p: R, m: u32) -> Result<R> {
    check_exponent(p)?;
    let four = R::of(4.0);
    let four_m = four.powi(m as i32);
    if p.is_infinite() {
        return Ok(four_m * four);
    }
    let one = R::one();
    let v = four * (R::of(2.0) * log_gamma(one + one / p)? - log_gamma(one + R::of(2.0) / p)?).exp();
    Ok(four_m * v)
}

// The packing basis uses the σ-branch on the whole closed interval
// [2, p0] — at p = 2 both branches span critical lattices, and the σ-branch
// gives the conventional hexagonal basis {(2, 0), (−1, √3)}.
fn packing_branch<R: Scalar>(p: R, p0: R) -> BranchTag {
    if p >= R::of(2.0) && p <= p0 {
        BranchTag::Branch0
    } else {
        BranchTag::Branch1
    }
}

/// The optimal packing lattice of 2^m·D_p: the critical lattice scaled by
/// 2^{m+1}, with the explicit limit bases at p = 1 and p = ∞.
///
/// Its determinant is 4^{m+1}·Δ(D_p) and every nonzero vector stays outside
/// the open ball 2^{m+1}·D_p, so translates of 2^m·D_p do not overlap.
pub fn packing_lattice<R: Scalar>(p: R, m: u32) -> Result<Lattice2<R>> {
    check_exponent(p)?;
    let scale = R::of(2.0).powi(m as i32 + 1);
    let half = R::of(0.5);
    let one = R::one();
    let zero = R::zero();
    if p.is_infinite() {
        return Ok(Lattice2::new(Point2::new(one, one), Point2::new(zero, one)).scale(scale));
    }
    if p == one {
        return Ok(Lattice2::new(Point2::new(half, half), Point2::new(zero, one)).scale(scale));
    }
    let p0 = davis_constant::<R>()?;
    Ok(critical_lattice(p, packing_branch(p, p0))?.scale(scale))
}

/// Density of the optimal packing of 2^m·D_p; independent of m.
pub fn packing_density<R: Scalar>(p: R, m: u32) -> Result<R> {
    Ok(ball_volume(p, m)? / scaled_critical_determinant(p, m + 1)?)
}

/// Central density 1/Δ(2·D_p): 1/(2σ_p) in the Davis range, otherwise
/// 4^{1/p−1}(1 − τ_p)/(1 + τ_p).
pub fn central_density<R: Scalar>(p: R) -> Result<R> {
    check_finite_exponent(p)?;
    let p0 = davis_constant::<R>()?;
    let one = R::one();
    Ok(match classify(p, p0)? {
        BallClass::Davis => (R::of(2.0) * sigma_p(p)?).recip(),
        _ => {
            let t = tau_p(p)?;
            ((one / p - one) * R::of(4.0).ln()).exp() * (one - t) / (one + t)
        }
    })
}

/// Whether `lat` packs 2^m·D_p without overlap, i.e. is admissible for the
/// doubled ball 2^{m+1}·D_p.
pub fn verify_packing<R: Scalar>(
    lat: &Lattice2<R>,
    p: R,
    m: u32,
    tol: &Tolerance<R>,
) -> Result<PackingCheck<R>> {
    let ball = Ball::new(p, m + 1)?;
    let adm = is_admissible(lat, &ball, tol)?;
    Ok(PackingCheck {
        ok: adm.admissible,
        witness: adm.witness,
    })
}

fn shoelace<R: Scalar>(pts: &[Point2<R>]) -> R {
    let mut acc = R::zero();
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        acc = acc + (a.x * b.y - b.x * a.y);
    }
    acc.abs() * R::of(0.5)
}

/// Shoelace area of the hexagon ±b1, ±(b1+b2), ±b2 of an arbitrary basis;
/// equals 3·|det(b1, b2)| identically.
pub fn lattice_hexagon_area<R: Scalar>(lat: &Lattice2<R>) -> R {
    shoelace(&shell_points(lat))
}

/// Area of the hexagon with vertices at the six shell points of the
/// critical lattice of 2^m·D_p; equals 3·Δ(2^m·D_p).
///
/// Defined for p = 1 as well (vertices need no tangents); only p = ∞ has no
/// finite critical basis to build on.
pub fn inscribed_hexagon_area<R: Scalar>(p: R, m: u32) -> Result<R> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Err(Error::NotSmooth { p: f64::INFINITY });
    }
    let branch = critical_determinant(p)?.branch;
    let lat = critical_lattice(p, branch)?.scale(R::of(2.0).powi(m as i32));
    Ok(lattice_hexagon_area(&lat))
}

// sgn(x)·|x|^{p−1}, the components of the boundary normal of the unit curve.
fn signed_pow<R: Scalar>(x: R, p: R) -> R {
    let a = x.abs().powf(p - R::one());
    if x < R::zero() {
        -a
    } else {
        a
    }
}

/// Area of the hexagon bounded by the six tangent lines of 2^m·D_p at its
/// critical shell points. Agrees with the extremal value 4·Δ(2^m·D_p) to
/// high accuracy; callers compare and report the deviation rather than
/// assume equality.
pub fn circumscribed_hexagon_area<R: Scalar>(p: R, m: u32) -> Result<R> {
    check_exponent(p)?;
    if p == R::one() || p.is_infinite() {
        return Err(Error::NotSmooth { p: p.as_f64() });
    }
    let branch = critical_determinant(p)?.branch;
    let lat = critical_lattice(p, branch)?;
    let pts = shell_points(&lat);
    // Tangent line at a boundary point q is n·X = 1 with n = ∇(|x|^p+|y|^p)
    // rescaled; intersecting adjacent tangents gives the hexagon vertices.
    let normals: Vec<Point2<R>> = pts
        .iter()
        .map(|q| Point2::new(signed_pow(q.x, p), signed_pow(q.y, p)))
        .collect();
    let mut verts = Vec::with_capacity(6);
    for i in 0..6 {
        let n1 = normals[i];
        let n2 = normals[(i + 1) % 6];
        let det = n1.x * n2.y - n1.y * n2.x;
        if det.abs() <= R::of(1e-12) {
            return Err(Error::TangentDegenerate {
                det: det.abs().as_f64(),
            });
        }
        verts.push(Point2::new((n2.y - n1.y) / det, (n1.x - n2.x) / det));
    }
    Ok(shoelace(&verts) * R::of(4.0).powi(m as i32))
}

fn rotate<R: Scalar>(v: Point2<R>, angle: R) -> Point2<R> {
    let (s, c) = angle.sin_cos();
    Point2::new(v.x * c - v.y * s, v.x * s + v.y * c)
}

/// `count` random lattices admissible for 2^{m+1}·D_p, for corroborating
/// that no sampled packing beats the critical determinant.
///
/// Each attempt perturbs the packing basis: independent rotations in
/// (−0.15, 0.15) rad and scale factors in [0.97, 1.25), drawn in the order
/// angle1, scale1, angle2, scale2; inadmissible candidates are rejected.
/// Deterministic for a fixed seed.
pub fn sample_admissible_lattices<R: Scalar>(
    p: R,
    m: u32,
    count: usize,
    seed: u64,
    tol: &Tolerance<R>,
) -> Result<Vec<Lattice2<R>>> {
    let base = packing_lattice(p, m)?;
    let ball = Ball::new(p, m + 1)?;
    let mut rng = SplitMix64::new(seed);
    let mut out = Vec::with_capacity(count);
    let max_attempts = (count as u64).saturating_mul(400).max(400);
    let mut attempts = 0u64;
    while out.len() < count {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::NoConvergence {
                what: "sample_admissible_lattices",
                residual: out.len() as f64,
            });
        }
        let a1 = R::of(rng.uniform(-0.15, 0.15));
        let s1 = R::of(rng.uniform(0.97, 1.25));
        let a2 = R::of(rng.uniform(-0.15, 0.15));
        let s2 = R::of(rng.uniform(0.97, 1.25));
        let cand = Lattice2::new(rotate(base.b1, a1) * s1, rotate(base.b2, a2) * s2);
        if is_admissible(&cand, &ball, tol)?.admissible {
            out.push(cand);
        }
    }
    Ok(out)
}

/// Assembles the full packing report for 2^m·D_p.
///
/// At the corner exponents p ∈ {1, ∞} the extremal hexagons degenerate (a
/// vertex pair merges and the minimal "hexagon" is the ball itself); the
/// hexagon fields then carry the exact degenerate areas 3·Δ and 4·Δ instead
/// of propagating NotSmooth.
pub fn packing_report<R: Scalar>(p: R, m: u32, tol: &Tolerance<R>) -> Result<PackingReport<R>> {
    check_exponent(p)?;
    let volume = ball_volume(p, m)?;
    let lat = packing_lattice(p, m)?;
    let density = packing_density(p, m)?;
    let central_density = if p.is_infinite() {
        // Limit of 1/Δ(2·D_p) = 1/(4·Δ(D_∞)).
        R::of(0.25)
    } else {
        central_density(p)?
    };
    let verified = verify_packing(&lat, p, m, tol)?.ok;
    let scaled = scaled_critical_determinant(p, m)?;
    let hexagon_inscribed_area = match inscribed_hexagon_area(p, m) {
        Ok(v) => v,
        Err(Error::NotSmooth { .. }) => R::of(3.0) * scaled,
        Err(e) => return Err(e),
    };
    let hexagon_circumscribed_area = match circumscribed_hexagon_area(p, m) {
        Ok(v) => v,
        Err(Error::NotSmooth { .. }) => R::of(4.0) * scaled,
        Err(e) => return Err(e),
    };
    Ok(PackingReport {
        p,
        m,
        volume,
        packing_lattice: lat,
        density,
        central_density,
        verified,
        hexagon_inscribed_area,
        hexagon_circumscribed_area,
    })
}
