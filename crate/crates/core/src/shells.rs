//! Shell solving on the unit p-curve, theta coefficients of the hexagonal
//! quadratic form, exact integer-point counts on dilated curves, arc
//! length, and the related counting bounds.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::lattice::{check_exponent, check_finite_exponent, pnorm_power_raw, Point2};
use crate::numerics::{find_root, integrate, Tolerance};
use crate::scalar::Scalar;

/// A six-point shell: ±P and the four curve points whose parallelogram with
/// P has area `lattice_det`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shell<R: Scalar> {
    pub points: [Point2<R>; 6],
    pub p: R,
    pub lattice_det: R,
}

const SCAN_GRID: usize = 2048;

// Roots of g over [-1, 1]: sign changes on a fixed grid, polished by the
// bracketed root-finder. Exact grid zeros are taken as-is; duplicates are
// merged by the caller.
fn scan_line_roots<R: Scalar>(g: &impl Fn(R) -> R, tol: &Tolerance<R>) -> Result<Vec<R>> {
    let mut roots = Vec::new();
    let mut prev_x = R::of(-1.0);
    let mut prev_g = g(prev_x);
    for i in 1..=SCAN_GRID {
        let x = R::of(-1.0 + 2.0 * i as f64 / SCAN_GRID as f64);
        let gx = g(x);
        if prev_g == R::zero() {
            roots.push(prev_x);
        } else if (prev_g > R::zero()) != (gx > R::zero()) {
            roots.push(find_root(g, prev_x, x, tol)?);
        }
        prev_x = x;
        prev_g = gx;
    }
    if prev_g == R::zero() {
        roots.push(prev_x);
    }
    Ok(roots)
}

/// The six curve points forming a shell with `point`: ±point itself plus
/// the four solutions of |P_x·v − P_y·u| = d on the unit curve.
///
/// For each sign of the linear constraint the line is substituted into the
/// curve equation and the resulting one-variable residual solved over
/// [−1, 1]; the substitution solves for whichever coordinate has the larger
/// companion coefficient, keeping the parametrization well conditioned.
/// Exactly six points must emerge — any other count signals a `d` that is
/// not the shell determinant of `point`'s lattice.
pub fn solve_shell<R: Scalar>(
    p: R,
    point: Point2<R>,
    d: R,
    tol: &Tolerance<R>,
) -> Result<Shell<R>> {
    check_finite_exponent(p)?;
    if p == R::one() {
        return Err(Error::DomainError(
            "solve_shell needs p > 1 (line-curve intersections degenerate on the diamond)"
                .to_string(),
        ));
    }
    if !d.is_finite() || !(d > R::zero()) {
        return Err(Error::DomainError(format!(
            "shell determinant must be positive, got {:?}",
            d
        )));
    }
    let one = R::one();
    let on_curve = pnorm_power_raw(point, p);
    if (on_curve - one).abs() > R::of(1e-9) {
        return Err(Error::DomainError(format!(
            "P must lie on the unit curve: |P|_p^p = {:?}",
            on_curve
        )));
    }

    let merge = R::of(1e-8);
    let mut sols: Vec<Point2<R>> = Vec::new();
    let push_unique = |sols: &mut Vec<Point2<R>>, q: Point2<R>| {
        if !sols.iter().any(|r| r.max_coord_dist(q) <= merge) {
            sols.push(q);
        }
    };
    for &s in &[d, -d] {
        if point.y.abs() >= point.x.abs() {
            let g = move |v: R| {
                let u = (point.x * v - s) / point.y;
                u.abs().powf(p) + v.abs().powf(p) - one
            };
            for v in scan_line_roots(&g, tol)? {
                let u = (point.x * v - s) / point.y;
                push_unique(&mut sols, Point2::new(u, v));
            }
        } else {
            let g = move |u: R| {
                let v = (s + point.y * u) / point.x;
                u.abs().powf(p) + v.abs().powf(p) - one
            };
            for u in scan_line_roots(&g, tol)? {
                let v = (s + point.y * u) / point.x;
                push_unique(&mut sols, Point2::new(u, v));
            }
        }
    }
    sols.push(point);
    sols.push(-point);
    if sols.len() != 6 {
        return Err(Error::InconsistentInput(format!(
            "shell of P = {:?} with d = {:?} has {} points, expected 6 \
             (d is not this lattice's determinant?)",
            point,
            d,
            sols.len()
        )));
    }
    sols.sort_by(|a, b| {
        let ta = a.y.atan2(a.x);
        let tb = b.y.atan2(b.x);
        ta.partial_cmp(&tb).expect("angles are finite")
    });
    let points = [sols[0], sols[1], sols[2], sols[3], sols[4], sols[5]];
    Ok(Shell {
        points,
        p,
        lattice_det: d,
    })
}

/// Cap on how many theta coefficients one call may tabulate.
pub const THETA_CAP_DEFAULT: u64 = 1_000_000;

/// Coefficients N_0 … N_max of the theta series of x² − xy + y²:
/// N_m = #{(x, y) ∈ ℤ² : x² − xy + y² = m}, with N_0 = 1.
///
/// Exact integer enumeration: the form equals (x − y/2)² + (3/4)y², so both
/// |x| and |y| are bounded by √(4m/3).
pub fn theta_coefficients(max_m: usize) -> Result<Vec<u64>> {
    if max_m as u64 > THETA_CAP_DEFAULT {
        return Err(Error::BudgetExceeded {
            needed: max_m as u64,
            cap: THETA_CAP_DEFAULT,
        });
    }
    let mut counts = vec![0u64; max_m + 1];
    counts[0] = 1;
    let b = (4.0 * max_m as f64 / 3.0).sqrt() as i64 + 2;
    for x in -b..=b {
        for y in -b..=b {
            if x == 0 && y == 0 {
                continue;
            }
            let v = x * x - x * y + y * y;
            if v as usize <= max_m {
                counts[v as usize] += 1;
            }
        }
    }
    Ok(counts)
}

// Largest y in [0, hi] with y^p <= r would need the ordering trick; instead
// we only ever ask "is r a perfect p-th power", answered by binary search.
fn pth_root_exact_u128(r: u128, p: u32, hi: u64) -> Option<u64> {
    let (mut lo, mut hi) = (0u64, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if (mid as u128).pow(p) < r {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if (lo as u128).pow(p) == r {
        Some(lo)
    } else {
        None
    }
}

fn pth_root_exact_big(r: &BigUint, p: u32, hi: u64) -> Option<u64> {
    let (mut lo, mut hi) = (0u64, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if BigUint::from(mid).pow(p) < *r {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    if BigUint::from(lo).pow(p) == *r {
        Some(lo)
    } else {
        None
    }
}

fn point_multiplicity(x: u64, y: u64) -> u64 {
    if x == 0 || y == 0 {
        2
    } else {
        4
    }
}

fn count_range_u128(p: u32, n: u64, target: u128, xs: std::ops::Range<u64>) -> u64 {
    let mut total = 0u64;
    for x in xs {
        let r = target - (x as u128).pow(p);
        if let Some(y) = pth_root_exact_u128(r, p, n) {
            total += point_multiplicity(x, y);
        }
    }
    total
}

fn count_range_big(p: u32, n: u64, target: &BigUint, xs: std::ops::Range<u64>) -> u64 {
    let mut total = 0u64;
    for x in xs {
        let r = target - BigUint::from(x).pow(p);
        if let Some(y) = pth_root_exact_big(&r, p, n) {
            total += point_multiplicity(x, y);
        }
    }
    total
}

fn parallel_count(n: u64, count: impl Fn(std::ops::Range<u64>) -> u64 + Sync) -> u64 {
    let threads = std::thread::available_parallelism()
        .map(|v| v.get())
        .unwrap_or(1)
        .min(8) as u64;
    let len = n + 1;
    if threads <= 1 || len < 4096 {
        return count(0..len);
    }
    let chunk = len.div_ceil(threads);
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for t in 0..threads {
            let lo = t * chunk;
            let hi = ((t + 1) * chunk).min(len);
            if lo >= hi {
                break;
            }
            let count = &count;
            handles.push(scope.spawn(move || count(lo..hi)));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("count worker panicked"))
            .sum()
    })
}

/// #{(x, y) ∈ ℤ² : x^p + y^p = N^p} for even p, by exact integer
/// arithmetic (u128 fast path, 512-bit wide path otherwise).
///
/// Runs in O(N log N) integer operations, partitioned across threads.
pub fn count_integer_points(p: u32, n: u64) -> Result<u64> {
    if p == 0 || p % 2 != 0 {
        return Err(Error::DomainError(format!(
            "exponent must be a positive even integer, got {p}"
        )));
    }
    if n == 0 {
        return Err(Error::DomainError("N must be at least 1".to_string()));
    }
    // Quick width screen before materializing N^p.
    let bits_estimate = p as f64 * (n as f64).log2();
    if bits_estimate > 514.0 {
        return Err(Error::Overflow(format!(
            "N^p needs about {bits_estimate:.0} bits; the supported width is 512"
        )));
    }
    let target = BigUint::from(n).pow(p);
    if target > BigUint::from(1u8) << 512 {
        return Err(Error::Overflow(format!(
            "N^p has {} bits; the supported width is 512",
            target.bits()
        )));
    }
    if target.bits() <= 127 {
        let t: u128 = (&target).try_into().expect("fits by bit count");
        Ok(parallel_count(n, move |xs| count_range_u128(p, n, t, xs)))
    } else {
        Ok(parallel_count(n, |xs| count_range_big(p, n, &target, xs)))
    }
}

/// True perimeter of the unit p-curve.
///
/// By the eightfold symmetry it is 8·∫₀^c √(1 + (dy/dx)²) dx with
/// c = 2^{−1/p} the fold point x = y; on that range |dy/dx| ≤ 1, so the
/// integrand is bounded and the quadrature never meets the vertical-tangent
/// endpoint of the unfolded parametrization.
pub fn arc_length<R: Scalar>(p: R, tol: &Tolerance<R>) -> Result<R> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(R::of(8.0));
    }
    let one = R::one();
    let c = (-(R::of(2.0).ln()) / p).exp();
    let integrand = move |x: R| {
        let slope = x.powf(p - one) * (one - x.powf(p)).powf(one / p - one);
        (one + slope * slope).sqrt()
    };
    Ok(R::of(8.0) * integrate(integrand, R::zero(), c, tol)?)
}

/// 4·∫₀¹ (1 − y^p)^{1/p} dy, evaluated by quadrature. The integral equals
/// the area of D_p, and is reported next to the perimeter so the two
/// quantities can be compared directly.
pub fn area_by_quadrature<R: Scalar>(p: R, tol: &Tolerance<R>) -> Result<R> {
    check_exponent(p)?;
    if p.is_infinite() {
        return Ok(R::of(4.0));
    }
    let one = R::one();
    let c = (-(R::of(2.0).ln()) / p).exp();
    // Folded at x = y to dodge the unbounded derivative at x = 1:
    // area = 8·∫₀^c (1 − x^p)^{1/p} dx − 4c².
    let f = move |x: R| (one - x.powf(p)).powf(one / p);
    let folded = integrate(f, R::zero(), c, tol)?;
    Ok(R::of(8.0) * folded - R::of(4.0) * c * c)
}

/// Leading term 3·(4π)^{−1/3}·ℓ^{2/3} of the integer-point bound for a
/// strictly convex arc of length ℓ (the lower-order term is unquantified).
pub fn jarnik_bound<R: Scalar>(ell: R) -> Result<R> {
    if !ell.is_finite() || !(ell > R::zero()) {
        return Err(Error::DomainError(format!(
            "arc length must be positive, got {:?}",
            ell
        )));
    }
    let third = R::one() / R::of(3.0);
    let four_pi = R::of(4.0) * R::PI();
    Ok(R::of(3.0) * four_pi.powf(-third) * ell.powf(R::of(2.0) * third))
}

/// Genus of a smooth plane curve of degree 2d: (2d − 1)(d − 1).
pub fn genus_even_curve(d: u64) -> Result<u64> {
    if d == 0 {
        return Err(Error::DomainError("degree parameter must be >= 1".to_string()));
    }
    (2 * d - 1)
        .checked_mul(d - 1)
        .ok_or_else(|| Error::Overflow("genus exceeds u64".to_string()))
}
