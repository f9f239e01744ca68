//! Planar lattices, p-norm evaluation, bounded lattice-point enumeration,
//! and admissibility of lattices for L^p balls.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::scalar::Scalar;

/// Point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2<R: Scalar> {
    pub x: R,
    pub y: R,
}

impl<R: Scalar> Point2<R> {
    pub fn new(x: R, y: R) -> Self {
        Self { x, y }
    }

    /// Largest coordinate distance to `other` (the metric used for merging
    /// nearly identical solutions).
    pub fn max_coord_dist(self, other: Self) -> R {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

impl<R: Scalar> Add for Point2<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<R: Scalar> Sub for Point2<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<R: Scalar> Neg for Point2<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<R: Scalar> Mul<R> for Point2<R> {
    type Output = Self;
    fn mul(self, s: R) -> Self {
        Self::new(self.x * s, self.y * s)
    }
}

/// Planar lattice given by an ordered basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice2<R: Scalar> {
    pub b1: Point2<R>,
    pub b2: Point2<R>,
}

impl<R: Scalar> Lattice2<R> {
    pub fn new(b1: Point2<R>, b2: Point2<R>) -> Self {
        Self { b1, b2 }
    }

    /// Signed determinant of the basis matrix with rows `b1`, `b2`.
    pub fn signed_det(&self) -> R {
        self.b1.x * self.b2.y - self.b1.y * self.b2.x
    }

    /// Covolume |det(b1, b2)|; fails when the basis is degenerate to the
    /// default absolute tolerance.
    pub fn det(&self) -> Result<R> {
        let d = self.signed_det().abs();
        let min = Tolerance::<R>::default().abs_tol;
        if d <= min {
            return Err(Error::Degenerate {
                det: d.as_f64(),
                min: min.as_f64(),
            });
        }
        Ok(d)
    }

    /// The lattice point a·b1 + c·b2.
    pub fn point(&self, a: i64, c: i64) -> Point2<R> {
        self.b1 * R::of(a as f64) + self.b2 * R::of(c as f64)
    }

    /// Both basis vectors scaled by `s`.
    pub fn scale(&self, s: R) -> Self {
        Self::new(self.b1 * s, self.b2 * s)
    }
}

/// The ball 2^m·D_p = { (x, y) : |x|^p + |y|^p <= 2^{mp} }, with max-norm
/// semantics at p = ∞. The scale 2^m is a power of two so that coordinate
/// divisions by the radius stay exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball<R: Scalar> {
    p: R,
    m: u32,
    radius: R,
}

impl<R: Scalar> Ball<R> {
    /// Requires p >= 1 (p = ∞ allowed; it means the max-norm ball).
    pub fn new(p: R, m: u32) -> Result<Self> {
        check_exponent(p)?;
        Ok(Self {
            p,
            m,
            radius: R::of(2.0).powi(m as i32),
        })
    }

    pub fn p(&self) -> R {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// 2^m, half the side of the bounding box.
    pub fn radius(&self) -> R {
        self.radius
    }
}

/// Exponent ranges that behave differently for critical lattices.
///
/// The tags partition [1, ∞]: p = 1, 1 < p < 2, 2 <= p < p0, p0 <= p < ∞,
/// and p = ∞, where p0 ≈ 2.5725 is the exponent at which the two candidate
/// branches exchange the minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BallClass {
    LimitMinkowski,
    Minkowski,
    Davis,
    ChebyshevCohn,
    LimitChebyshev,
}

impl fmt::Display for BallClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BallClass::LimitMinkowski => "limit_minkowski",
            BallClass::Minkowski => "minkowski",
            BallClass::Davis => "davis",
            BallClass::ChebyshevCohn => "chebyshev_cohn",
            BallClass::LimitChebyshev => "limit_chebyshev",
        };
        f.write_str(s)
    }
}

/// Outcome of an admissibility test. When inadmissible, `witness` is a
/// nonzero lattice point strictly inside the ball, sign-normalized into the
/// half-plane x > 0 (or x = 0, y > 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility<R: Scalar> {
    pub admissible: bool,
    pub witness: Option<Point2<R>>,
}

pub(crate) fn check_exponent<R: Scalar>(p: R) -> Result<()> {
    if p.is_nan() || !(p >= R::one()) {
        return Err(Error::DomainError(format!(
            "exponent must satisfy p >= 1, got {:?}",
            p
        )));
    }
    Ok(())
}

pub(crate) fn check_finite_exponent<R: Scalar>(p: R) -> Result<()> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Err(Error::DomainError(
            "exponent must be finite here, got inf".to_string(),
        ));
    }
    Ok(())
}

/// |x|^p + |y|^p for finite p; max(|x|, |y|) for p = ∞.
///
/// With the max-norm convention the unit ball is always `{ value <= 1 }`,
/// so callers compare against r rather than r^p at p = ∞.
pub fn pnorm_power<R: Scalar>(pt: Point2<R>, p: R) -> Result<R> {
    check_exponent(p)?;
    Ok(pnorm_power_raw(pt, p))
}

pub(crate) fn pnorm_power_raw<R: Scalar>(pt: Point2<R>, p: R) -> R {
    if p.is_infinite() {
        pt.x.abs().max(pt.y.abs())
    } else if p == R::one() {
        pt.x.abs() + pt.y.abs()
    } else {
        pt.x.abs().powf(p) + pt.y.abs().powf(p)
    }
}

/// Cap on the number of coefficient pairs an enumeration may visit.
pub const ENUM_CAP_DEFAULT: u64 = 10_000_000;

/// All nonzero lattice points with |x| <= halfwidth and |y| <= halfwidth,
/// in lexicographic coefficient order. See [`enumerate_nonzero_points_with_cap`].
pub fn enumerate_nonzero_points<R: Scalar>(
    lat: &Lattice2<R>,
    box_halfwidth: R,
) -> Result<Vec<Point2<R>>> {
    enumerate_nonzero_points_with_cap(lat, box_halfwidth, ENUM_CAP_DEFAULT)
}

/// Same as [`enumerate_nonzero_points`] with an explicit visit cap.
///
/// Coefficient bounds come from mapping the four box corners through the
/// inverse basis and padding the integer hull by one, which is complete for
/// any basis skew.
pub fn enumerate_nonzero_points_with_cap<R: Scalar>(
    lat: &Lattice2<R>,
    box_halfwidth: R,
    cap: u64,
) -> Result<Vec<Point2<R>>> {
    if !box_halfwidth.is_finite() || !(box_halfwidth > R::zero()) {
        return Err(Error::DomainError(format!(
            "box_halfwidth must be positive and finite, got {:?}",
            box_halfwidth
        )));
    }
    lat.det()?;
    let det = lat.signed_det();

    let hw = box_halfwidth;
    let mut a_lo = f64::INFINITY;
    let mut a_hi = f64::NEG_INFINITY;
    let mut c_lo = f64::INFINITY;
    let mut c_hi = f64::NEG_INFINITY;
    for &sx in &[-R::one(), R::one()] {
        for &sy in &[-R::one(), R::one()] {
            let x = sx * hw;
            let y = sy * hw;
            let a = ((x * lat.b2.y - y * lat.b2.x) / det).as_f64();
            let c = ((lat.b1.x * y - lat.b1.y * x) / det).as_f64();
            a_lo = a_lo.min(a);
            a_hi = a_hi.max(a);
            c_lo = c_lo.min(c);
            c_hi = c_hi.max(c);
        }
    }
    let a_min = a_lo.floor() - 1.0;
    let a_max = a_hi.ceil() + 1.0;
    let c_min = c_lo.floor() - 1.0;
    let c_max = c_hi.ceil() + 1.0;
    let needed = (a_max - a_min + 1.0) * (c_max - c_min + 1.0);
    if !needed.is_finite() || needed > cap as f64 {
        return Err(Error::BudgetExceeded {
            needed: if needed.is_finite() {
                needed as u64
            } else {
                u64::MAX
            },
            cap,
        });
    }

    let (a_min, a_max) = (a_min as i64, a_max as i64);
    let (c_min, c_max) = (c_min as i64, c_max as i64);
    let mut out = Vec::new();
    for a in a_min..=a_max {
        for c in c_min..=c_max {
            if a == 0 && c == 0 {
                continue;
            }
            let pt = lat.point(a, c);
            if pt.x.abs() <= hw && pt.y.abs() <= hw {
                out.push(pt);
            }
        }
    }
    Ok(out)
}

/// Whether `lat` is admissible for `ball`: no nonzero lattice point lies
/// strictly inside. Points on the boundary (within `tol.abs_tol`) count as
/// admissible contact — critical lattices keep three pairs of points there.
pub fn is_admissible<R: Scalar>(
    lat: &Lattice2<R>,
    ball: &Ball<R>,
    tol: &Tolerance<R>,
) -> Result<Admissibility<R>> {
    let r = ball.radius();
    let pts = enumerate_nonzero_points(lat, r)?;
    let threshold = R::one() - tol.abs_tol;
    for pt in pts {
        let unit = Point2::new(pt.x / r, pt.y / r);
        if pnorm_power_raw(unit, ball.p()) < threshold {
            return Ok(Admissibility {
                admissible: false,
                witness: Some(normalize_sign(pt)),
            });
        }
    }
    Ok(Admissibility {
        admissible: true,
        witness: None,
    })
}

fn normalize_sign<R: Scalar>(pt: Point2<R>) -> Point2<R> {
    let zero = R::zero();
    let q = if pt.x < zero || (pt.x == zero && pt.y < zero) {
        -pt
    } else {
        pt
    };
    // Flush -0.0 to +0.0 so witnesses print cleanly.
    Point2::new(q.x + zero, q.y + zero)
}

/// The [`BallClass`] of exponent `p`, given the branch-crossing exponent
/// `p0` (see `critical::davis_constant`).
pub fn classify<R: Scalar>(p: R, p0: R) -> Result<BallClass> {
    check_exponent(p)?;
    if !(p0 > R::of(2.57) && p0 < R::of(2.58)) {
        return Err(Error::DomainError(format!(
            "p0 must lie in (2.57, 2.58), got {:?}",
            p0
        )));
    }
    Ok(if p.is_infinite() {
        BallClass::LimitChebyshev
    } else if p == R::one() {
        BallClass::LimitMinkowski
    } else if p < R::of(2.0) {
        BallClass::Minkowski
    } else if p < p0 {
        BallClass::Davis
    } else {
        BallClass::ChebyshevCohn
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const P0: f64 = 2.5724951543302011;

    fn unit_square() -> Lattice2<f64> {
        Lattice2::new(Point2::new(1.0, 0.0), Point2::new(0.0, 1.0))
    }

    fn hex_lattice() -> Lattice2<f64> {
        Lattice2::new(
            Point2::new(1.0, 0.0),
            Point2::new(0.5, 3.0_f64.sqrt() / 2.0),
        )
    }

    #[test]
    fn pnorm_on_axis_point() {
        let v = pnorm_power(Point2::new(1.0, 0.0), 3.0).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn pnorm_on_diagonal_boundary_point() {
        let c = 2.0_f64.powf(-0.5);
        let v = pnorm_power(Point2::new(-c, c), 2.0).unwrap();
        assert!((v - 1.0).abs() <= 1e-15, "v = {v}");
    }

    #[test]
    fn pnorm_on_hexagonal_basis_point() {
        let v = pnorm_power(Point2::new(0.5, 3.0_f64.sqrt() / 2.0), 2.0).unwrap();
        assert!((v - 1.0).abs() <= 1e-15, "v = {v}");
    }

    #[test]
    fn pnorm_max_norm_at_infinite_exponent() {
        let v = pnorm_power(Point2::new(-0.3, 0.8), f64::INFINITY).unwrap();
        assert_eq!(v, 0.8);
    }

    #[test]
    fn pnorm_rejects_small_exponent() {
        let err = pnorm_power(Point2::new(1.0, 0.0), 0.5).unwrap_err();
        assert!(matches!(err, Error::DomainError(_)));
    }

    #[test]
    fn det_of_square_and_half_and_hex() {
        assert_eq!(unit_square().det().unwrap(), 1.0);
        let halved = Lattice2::new(Point2::new(0.5, 0.5), Point2::new(0.0, 1.0));
        assert_eq!(halved.det().unwrap(), 0.5);
        let d = hex_lattice().det().unwrap();
        assert!((d - 3.0_f64.sqrt() / 2.0).abs() <= 1e-15);
    }

    #[test]
    fn det_rejects_degenerate_basis() {
        let lat = Lattice2::new(Point2::new(1.0, 2.0), Point2::new(2.0, 4.0));
        assert!(matches!(lat.det().unwrap_err(), Error::Degenerate { .. }));
    }

    #[test]
    fn det_scaling_covariance() {
        for s in [0.5, 2.0, 3.0] {
            let lat = hex_lattice();
            let want = s * s * lat.det().unwrap();
            let got = lat.scale(s).det().unwrap();
            assert!((got - want).abs() <= 1e-12 * want, "s = {s}");
        }
    }

    #[test]
    fn enumerate_unit_square_counts() {
        // Integer points in the closed box of halfwidth 1.5 are the eight
        // with coordinates in {-1, 0, 1}; halfwidth 2 admits the full 5x5
        // block minus the origin.
        assert_eq!(
            enumerate_nonzero_points(&unit_square(), 1.5).unwrap().len(),
            8
        );
        assert_eq!(
            enumerate_nonzero_points(&unit_square(), 2.0).unwrap().len(),
            24
        );
        assert_eq!(
            enumerate_nonzero_points(&unit_square(), 1.0).unwrap().len(),
            8
        );
        assert_eq!(
            enumerate_nonzero_points(&unit_square(), 0.99).unwrap().len(),
            0
        );
        assert_eq!(
            enumerate_nonzero_points(&unit_square(), 0.5).unwrap().len(),
            0
        );
    }

    #[test]
    fn enumerate_skew_basis() {
        let lat = Lattice2::new(Point2::new(0.5_f64, 0.5), Point2::new(0.0, 1.0));
        let pts = enumerate_nonzero_points(&lat, 0.6).unwrap();
        assert_eq!(pts.len(), 4);
        for want in [(0.5, 0.5), (-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5)] {
            assert!(
                pts.iter()
                    .any(|q| (q.x - want.0).abs() <= 1e-15 && (q.y - want.1).abs() <= 1e-15),
                "missing {want:?}"
            );
        }
    }

    #[test]
    fn enumerate_is_centrally_symmetric() {
        let pts = enumerate_nonzero_points(&hex_lattice(), 2.3).unwrap();
        assert!(!pts.is_empty());
        for pt in &pts {
            assert!(
                pts.iter().any(|q| q.max_coord_dist(-*pt) <= 1e-12),
                "missing mirror of {pt:?}"
            );
        }
    }

    #[test]
    fn enumerate_respects_cap() {
        let err = enumerate_nonzero_points(&unit_square(), 5000.0).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }), "{err:?}");
        let err =
            enumerate_nonzero_points_with_cap(&unit_square(), 3.0, 10).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }), "{err:?}");
    }

    #[test]
    fn enumerate_rejects_bad_halfwidth() {
        for hw in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            let err = enumerate_nonzero_points(&unit_square(), hw).unwrap_err();
            assert!(matches!(err, Error::DomainError(_)), "hw = {hw}");
        }
    }

    #[test]
    fn admissible_hexagonal_for_disc() {
        let tol = Tolerance::default();
        let ball = Ball::new(2.0, 0).unwrap();
        let res = is_admissible(&hex_lattice(), &ball, &tol).unwrap();
        assert!(res.admissible);
        assert!(res.witness.is_none());
    }

    #[test]
    fn shrunk_hexagonal_yields_witness() {
        let tol = Tolerance::default();
        let ball = Ball::new(2.0, 0).unwrap();
        let res = is_admissible(&hex_lattice().scale(0.99), &ball, &tol).unwrap();
        assert!(!res.admissible);
        let w = res.witness.unwrap();
        assert!((w.x - 0.99).abs() <= 1e-15 && w.y.abs() <= 1e-15, "w = {w:?}");
    }

    #[test]
    fn doubled_square_admissible_for_diamond() {
        let tol = Tolerance::default();
        let ball = Ball::new(1.0, 0).unwrap();
        let res = is_admissible(&unit_square().scale(2.0), &ball, &tol).unwrap();
        assert!(res.admissible);
    }

    #[test]
    fn admissibility_scaling_covariance() {
        let tol = Tolerance::default();
        for m in [0_u32, 1, 2] {
            let ball = Ball::new(2.0, m).unwrap();
            let scaled = hex_lattice().scale(2.0_f64.powi(m as i32));
            assert!(is_admissible(&scaled, &ball, &tol).unwrap().admissible);
        }
    }

    #[test]
    fn classify_partition() {
        assert_eq!(classify(1.0, P0).unwrap(), BallClass::LimitMinkowski);
        assert_eq!(classify(1.5, P0).unwrap(), BallClass::Minkowski);
        assert_eq!(classify(2.0, P0).unwrap(), BallClass::Davis);
        assert_eq!(classify(2.5724, P0).unwrap(), BallClass::Davis);
        assert_eq!(classify(P0, P0).unwrap(), BallClass::ChebyshevCohn);
        assert_eq!(classify(3.0, P0).unwrap(), BallClass::ChebyshevCohn);
        assert_eq!(
            classify(f64::INFINITY, P0).unwrap(),
            BallClass::LimitChebyshev
        );
    }

    #[test]
    fn classify_validates_arguments() {
        assert!(classify(0.5, P0).is_err());
        assert!(classify(2.0, 2.5).is_err());
        assert!(classify(f64::NAN, P0).is_err());
    }

    #[test]
    fn ball_rejects_bad_exponent() {
        assert!(Ball::new(0.99_f64, 0).is_err());
        assert!(Ball::new(f64::NAN, 0).is_err());
        assert!(Ball::new(1.0_f64, 3).unwrap().radius() == 8.0);
    }
}
