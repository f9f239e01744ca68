//! `minkpack` — reports, sweeps, verification runs, and SVG diagrams for
//! optimal lattice packings of the planar balls |x|^p + |y|^p ≤ 2^{mp}.
//!
//! Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 convergence failure. `MINKPACK_ABS_TOL` overrides the default
//! absolute tolerance everywhere a tolerance is consulted.

mod output;

use clap::{Parser, Subcommand};
use minkpack::{
    arc_length, area_by_quadrature, count_integer_points, critical_determinant, critical_lattice,
    davis_constant, delta0, delta1, is_admissible, moduli_sweep, packing_lattice, packing_report,
    sample_admissible_lattices, scaled_critical_determinant, sigma_p, solve_shell,
    theta_coefficients, verify_packing, Ball, BranchTag, Error, Lattice2f, Point2, Tolerancef,
};
use output::{csv_cell, format_real, to_json, Json};

#[derive(Parser)]
#[command(
    name = "minkpack",
    about = "Critical determinants and optimal lattice packings of planar p-balls",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// JSON report of every derived quantity at one (p, m)
    Report {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
    /// Tabulate report columns over a uniform p-grid (CSV or JSON)
    Sweep {
        #[arg(long, value_parser = parse_p)]
        p_from: f64,
        #[arg(long, value_parser = parse_p)]
        p_to: f64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        steps: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value = "p,class,branch,delta,density")]
        columns: String,
        #[arg(long, default_value = "csv", value_parser = ["csv", "json"])]
        format: String,
    },
    /// Re-run the admissibility, packing, moduli, and sampling checks
    Verify {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Deterministic SVG diagram of the packing
    Svg {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        copies: u32,
        #[arg(long, default_value_t = 640, value_parser = clap::value_parser!(u32).range(64..))]
        width: u32,
    },
    /// Print the branch-crossing exponent p0
    P0,
    /// Theta-series coefficients N_0 … N_max of x² − xy + y²
    Theta {
        #[arg(long)]
        max: usize,
    },
    /// Exact count of integer points on |x|^p + |y|^p = N^p
    Count {
        #[arg(long)]
        p: u32,
        #[arg(long = "N")]
        n: u64,
    },
    /// The six shell points of one branch's critical lattice
    Shell {
        #[arg(long, value_parser = parse_p)]
        p: f64,
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
        branch: u8,
    },
}

fn parse_p(s: &str) -> Result<f64, String> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v.is_nan() {
        return Err("p must not be NaN".to_string());
    }
    Ok(v)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::TangentDegenerate { .. } => 3,
        _ => 2,
    }
}

fn tolerance_from_env() -> Result<Tolerancef, String> {
    let tol = Tolerancef::default();
    match std::env::var("MINKPACK_ABS_TOL") {
        Ok(raw) => {
            let v: f64 = raw
                .parse()
                .map_err(|_| format!("MINKPACK_ABS_TOL is not a number: {raw}"))?;
            if !v.is_finite() || v <= 0.0 {
                return Err(format!("MINKPACK_ABS_TOL must be a positive real, got {raw}"));
            }
            Ok(tol.with_abs_tol(v))
        }
        Err(_) => Ok(tol),
    }
}

fn main() {
    let cli = Cli::parse();
    let tol = match tolerance_from_env() {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    };
    let code = match run(cli.cmd, &tol) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn run(cmd: Cmd, tol: &Tolerancef) -> minkpack::Result<i32> {
    match cmd {
        Cmd::Report { p, m } => {
            let row = ReportRow::build(p, m, tol)?;
            print!("{}", to_json(&Json::Obj(row.fields())));
            Ok(0)
        }
        Cmd::Sweep {
            p_from,
            p_to,
            steps,
            m,
            columns,
            format,
        } => cmd_sweep(p_from, p_to, steps, m, &columns, &format, tol),
        Cmd::Verify { p, m, samples, seed } => cmd_verify(p, m, samples, seed, tol),
        Cmd::Svg { p, m, copies, width } => {
            print!("{}", render_svg(p, m, copies, width)?);
            Ok(0)
        }
        Cmd::P0 => {
            let p0: f64 = davis_constant()?;
            print!("{}", to_json(&Json::Obj(vec![("p0", Json::Num(p0))])));
            Ok(0)
        }
        Cmd::Theta { max } => {
            let counts = theta_coefficients(max)?;
            let arr = counts.iter().map(|&n| Json::Int(n as i64)).collect();
            print!(
                "{}",
                to_json(&Json::Obj(vec![
                    ("max_m", Json::Int(max as i64)),
                    ("coefficients", Json::Arr(arr)),
                ]))
            );
            Ok(0)
        }
        Cmd::Count { p, n } => {
            let count = count_integer_points(p, n)?;
            print!(
                "{}",
                to_json(&Json::Obj(vec![
                    ("p", Json::Int(p as i64)),
                    ("N", Json::Int(n as i64)),
                    ("count", Json::Int(count as i64)),
                ]))
            );
            Ok(0)
        }
        Cmd::Shell { p, branch } => {
            let tag = if branch == 0 { BranchTag::Branch0 } else { BranchTag::Branch1 };
            let d = match tag {
                BranchTag::Branch0 => delta0(p)?,
                BranchTag::Branch1 => delta1(p)?,
            };
            let lat = critical_lattice(p, tag)?;
            let shell = solve_shell(p, lat.b1, d, tol)?;
            let pts = shell
                .points
                .iter()
                .map(|q| Json::Arr(vec![Json::Num(q.x), Json::Num(q.y)]))
                .collect();
            print!(
                "{}",
                to_json(&Json::Obj(vec![
                    ("p", Json::Num(p)),
                    ("branch", Json::Int(branch as i64)),
                    ("d", Json::Num(d)),
                    ("points", Json::Arr(pts)),
                ]))
            );
            Ok(0)
        }
    }
}

fn branch_index(tag: BranchTag) -> i64 {
    match tag {
        BranchTag::Branch0 => 0,
        BranchTag::Branch1 => 1,
    }
}

struct ReportRow {
    p: f64,
    m: u32,
    class: String,
    branch: i64,
    sigma_p: f64,
    tau_p: f64,
    delta0: f64,
    delta1: f64,
    delta: f64,
    scaled_delta: f64,
    volume: f64,
    density: f64,
    central_density: f64,
    kappa_optimal: f64,
    kappa_sufficient: f64,
    hexagon_inscribed: f64,
    hexagon_circumscribed: f64,
    perimeter: f64,
    paper_integral: f64,
    verified: bool,
}

impl ReportRow {
    fn build(p: f64, m: u32, tol: &Tolerancef) -> minkpack::Result<Self> {
        let crit = critical_determinant(p)?;
        let pack = packing_report(p, m, tol)?;
        Ok(ReportRow {
            p,
            m,
            class: crit.class.to_string(),
            branch: branch_index(crit.branch),
            sigma_p: crit.sigma_p,
            tau_p: crit.tau_p,
            delta0: crit.delta0,
            delta1: crit.delta1,
            delta: crit.delta,
            scaled_delta: scaled_critical_determinant(p, m)?,
            volume: pack.volume,
            density: pack.density,
            central_density: pack.central_density,
            kappa_optimal: crit.kappa_optimal,
            kappa_sufficient: crit.kappa_sufficient,
            hexagon_inscribed: pack.hexagon_inscribed_area,
            hexagon_circumscribed: pack.hexagon_circumscribed_area,
            perimeter: arc_length(p, tol)?,
            paper_integral: area_by_quadrature(p, tol)?,
            verified: pack.verified,
        })
    }

    fn fields(&self) -> Vec<(&'static str, Json)> {
        vec![
            ("p", Json::Num(self.p)),
            ("m", Json::Int(self.m as i64)),
            ("class", Json::Str(self.class.clone())),
            ("branch", Json::Int(self.branch)),
            ("sigma_p", Json::Num(self.sigma_p)),
            ("tau_p", Json::Num(self.tau_p)),
            ("delta0", Json::Num(self.delta0)),
            ("delta1", Json::Num(self.delta1)),
            ("delta", Json::Num(self.delta)),
            ("scaled_delta", Json::Num(self.scaled_delta)),
            ("volume", Json::Num(self.volume)),
            ("density", Json::Num(self.density)),
            ("central_density", Json::Num(self.central_density)),
            ("kappa_optimal", Json::Num(self.kappa_optimal)),
            ("kappa_sufficient", Json::Num(self.kappa_sufficient)),
            ("hexagon_inscribed", Json::Num(self.hexagon_inscribed)),
            ("hexagon_circumscribed", Json::Num(self.hexagon_circumscribed)),
            ("perimeter", Json::Num(self.perimeter)),
            ("paper_integral", Json::Num(self.paper_integral)),
            ("verified", Json::Bool(self.verified)),
        ]
    }
}

fn cmd_sweep(
    p_from: f64,
    p_to: f64,
    steps: u32,
    m: u32,
    columns: &str,
    format: &str,
    tol: &Tolerancef,
) -> minkpack::Result<i32> {
    if !p_from.is_finite() || !p_to.is_finite() {
        return Err(Error::DomainError(
            "sweep endpoints must be finite (use `report --p inf` for the limit)".to_string(),
        ));
    }
    if p_from < 1.0 || p_to < p_from {
        return Err(Error::DomainError(format!(
            "need 1 <= p_from <= p_to, got {p_from}..{p_to}"
        )));
    }
    let cols: Vec<&str> = columns.split(',').map(|c| c.trim()).collect();
    if cols.is_empty() || cols.iter().any(|c| c.is_empty()) {
        return Err(Error::InconsistentInput("empty column list".to_string()));
    }
    let sample = ReportRow::build(p_from, m, tol)?;
    let known: Vec<&str> = sample.fields().iter().map(|(k, _)| *k).collect();
    for c in &cols {
        if !known.contains(c) {
            return Err(Error::InconsistentInput(format!(
                "unknown column {c:?}; available: {}",
                known.join(",")
            )));
        }
    }

    let mut rows = Vec::with_capacity(steps as usize + 1);
    for i in 0..=steps {
        let t = i as f64 / steps as f64;
        let p = p_from + t * (p_to - p_from);
        let row = ReportRow::build(p, m, tol)?;
        let fields = row.fields();
        let picked: Vec<(&'static str, Json)> = cols
            .iter()
            .map(|c| {
                let (k, v) = fields.iter().find(|(k, _)| k == c).expect("validated");
                (*k, v.clone())
            })
            .collect();
        rows.push(picked);
    }

    let mut out = String::new();
    if format == "json" {
        out.push_str("[\n");
        for (i, row) in rows.iter().enumerate() {
            let mut line = String::new();
            line.push('{');
            for (j, (k, v)) in row.iter().enumerate() {
                if j > 0 {
                    line.push(',');
                }
                line.push('"');
                line.push_str(k);
                line.push_str("\": ");
                match v {
                    Json::Num(x) if !x.is_finite() => line.push_str(&format!("\"{}\"", format_real(*x))),
                    other => line.push_str(&csv_json_scalar(other)),
                }
            }
            line.push('}');
            out.push_str(&line);
            if i + 1 < rows.len() {
                out.push(',');
            }
            out.push('\n');
        }
        out.push_str("]\n");
    } else {
        out.push_str(&cols.join(","));
        out.push('\n');
        for row in &rows {
            let cells: Vec<String> = row.iter().map(|(_, v)| csv_cell(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
    }
    print!("{out}");
    Ok(0)
}

fn csv_json_scalar(v: &Json) -> String {
    match v {
        Json::Num(x) => format_real(*x),
        Json::Int(i) => i.to_string(),
        Json::Str(s) => format!("\"{s}\""),
        Json::Bool(b) => if *b { "true" } else { "false" }.to_string(),
        _ => unreachable!("report fields are scalars"),
    }
}

fn point_json(q: Point2<f64>) -> Json {
    Json::Arr(vec![Json::Num(q.x), Json::Num(q.y)])
}

fn cmd_verify(p: f64, m: u32, samples: usize, seed: u64, tol: &Tolerancef) -> minkpack::Result<i32> {
    let crit = critical_determinant(p)?;
    let scale = 2.0_f64.powi(m as i32);
    let lat = critical_lattice(p, crit.branch)?.scale(scale);
    let ball = Ball::new(p, m)?;

    let adm = is_admissible(&lat, &ball, tol)?;
    let check_a = adm.admissible;

    let shrunk = is_admissible(&lat.scale(0.999), &ball, tol)?;
    let check_b = !shrunk.admissible && shrunk.witness.is_some();

    let packing = verify_packing(&packing_lattice(p, m)?, p, m, tol)?;
    let check_c = packing.ok;

    // Moduli sweep needs 1 < p < ∞; elsewhere the parameter interval is a
    // point and the check is reported as skipped.
    const GRID: usize = 200;
    let moduli = if p > 1.0 && p.is_finite() {
        let sweep = moduli_sweep(p, GRID)?;
        let d0 = delta0(p)?;
        let d1 = delta1(p)?;
        let floor = d0.min(d1);
        let sp = sigma_p(p)?;
        let step = (sp - 1.0) / (GRID as f64 - 1.0);
        // The minimum sits at σ = 1 on the delta1 branch and at σ = σ_p on
        // the delta0 branch; at the crossings both endpoints attain it, so
        // any endpoint whose value matches the floor qualifies.
        let predicted = match crit.branch {
            BranchTag::Branch0 => sp,
            BranchTag::Branch1 => 1.0,
        };
        let near = |target: f64, ok: bool| ok && (sweep.sigma_star - target).abs() <= step + 1e-12;
        // At p = 2 the family is a circle's rotation orbit and the profile
        // is constant; the argmin is then rounding noise and any grid point
        // is a legitimate minimizer.
        let spread = sweep
            .profile
            .iter()
            .map(|&(_, d)| d)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                (lo.min(d), hi.max(d))
            });
        let flat = spread.1 - spread.0 <= 1e-9;
        let endpoint_ok =
            flat || near(1.0, d1 <= floor + 1e-9) || near(sp, d0 <= floor + 1e-9);
        let pass = (sweep.delta_min - floor).abs() <= 1e-6 && endpoint_ok;
        Some((pass, sweep.sigma_star, sweep.delta_min, predicted))
    } else {
        None
    };
    let check_d = moduli.map(|(pass, ..)| pass);

    let lats = sample_admissible_lattices(p, 0, samples, seed, tol)?;
    let floor = scaled_critical_determinant(p, 1)? - 1e-9;
    let mut min_det = f64::INFINITY;
    for l in &lats {
        min_det = min_det.min(l.det()?);
    }
    let check_e = lats.len() == samples && min_det >= floor;

    let all_pass = check_a && check_b && check_c && check_d.unwrap_or(true) && check_e;

    let moduli_json = match moduli {
        Some((pass, sigma_star, delta_min, predicted)) => Json::Obj(vec![
            ("pass", Json::Bool(pass)),
            ("sigma_star", Json::Num(sigma_star)),
            ("delta_min", Json::Num(delta_min)),
            ("predicted_sigma", Json::Num(predicted)),
        ]),
        None => Json::Obj(vec![("skipped", Json::Bool(true))]),
    };
    let doc = Json::Obj(vec![
        ("p", Json::Num(p)),
        ("m", Json::Int(m as i64)),
        ("samples", Json::Int(samples as i64)),
        ("seed", Json::Int(seed as i64)),
        (
            "critical_admissible",
            Json::Obj(vec![("pass", Json::Bool(check_a))]),
        ),
        (
            "shrunk_inadmissible",
            Json::Obj(vec![
                ("pass", Json::Bool(check_b)),
                (
                    "witness",
                    shrunk.witness.map(point_json).unwrap_or(Json::Null),
                ),
            ]),
        ),
        (
            "packing_no_overlap",
            Json::Obj(vec![("pass", Json::Bool(check_c))]),
        ),
        ("moduli_endpoint_min", moduli_json),
        (
            "sampled_minimality",
            Json::Obj(vec![
                ("pass", Json::Bool(check_e)),
                ("count", Json::Int(lats.len() as i64)),
                ("min_det", Json::Num(min_det)),
                ("floor", Json::Num(floor)),
            ]),
        ),
        ("all_pass", Json::Bool(all_pass)),
    ]);
    print!("{}", to_json(&doc));
    Ok(if all_pass { 0 } else { 1 })
}

/// Boundary polyline of 2^m·D_p: 256 superellipse samples for smooth p,
/// the exact 4-gon for p ∈ {1, ∞}.
fn ball_outline(p: f64, r: f64) -> Vec<(f64, f64)> {
    if p == 1.0 {
        return vec![(r, 0.0), (0.0, r), (-r, 0.0), (0.0, -r)];
    }
    if p.is_infinite() {
        return vec![(r, r), (-r, r), (-r, -r), (r, -r)];
    }
    const SAMPLES: usize = 256;
    (0..SAMPLES)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / SAMPLES as f64;
            let (s, c) = t.sin_cos();
            let x = c.signum() * c.abs().powf(2.0 / p) * r;
            let y = s.signum() * s.abs().powf(2.0 / p) * r;
            (x, y)
        })
        .collect()
}

fn render_svg(p: f64, m: u32, copies: u32, width_px: u32) -> minkpack::Result<String> {
    let lat: Lattice2f = packing_lattice(p, m)?;
    let r = 2.0_f64.powi(m as i32);
    let outline = ball_outline(p, r);

    let mut centers = Vec::new();
    for a in 0..copies as i64 {
        for c in 0..copies as i64 {
            centers.push(lat.point(a, c));
        }
    }
    // SVG y grows downward; flip into plot coordinates once.
    let flip = |q: (f64, f64)| (q.0, -q.1);
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for &ctr in &centers {
        for &(ox, oy) in &outline {
            let (x, y) = flip((ctr.x + ox, ctr.y + oy));
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    let span = (max_x - min_x).max(max_y - min_y);
    let margin = 0.05 * span;
    let (vx, vy) = (min_x - margin, min_y - margin);
    let (vw, vh) = (max_x - min_x + 2.0 * margin, max_y - min_y + 2.0 * margin);
    let height_px = (width_px as f64 * vh / vw).round() as u32;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width_px}\" height=\"{height_px}\" \
         viewBox=\"{:.6} {:.6} {:.6} {:.6}\">\n",
        vx, vy, vw, vh
    ));
    svg.push_str(&format!(
        "<g fill=\"none\" stroke=\"#20506a\" stroke-width=\"{:.6}\">\n",
        0.02 * r
    ));
    for &ctr in &centers {
        svg.push_str("<path d=\"");
        for (i, &(ox, oy)) in outline.iter().enumerate() {
            let (x, y) = flip((ctr.x + ox, ctr.y + oy));
            svg.push_str(if i == 0 { "M" } else { " L" });
            svg.push_str(&format!("{:.6} {:.6}", x, y));
        }
        svg.push_str(" Z\"/>\n");
    }
    svg.push_str("</g>\n");
    svg.push_str("<g fill=\"#122b3c\">\n");
    for &ctr in &centers {
        let (x, y) = flip((ctr.x, ctr.y));
        svg.push_str(&format!(
            "<circle cx=\"{:.6}\" cy=\"{:.6}\" r=\"{:.6}\"/>\n",
            x,
            y,
            0.05 * r
        ));
    }
    svg.push_str("</g>\n</svg>\n");
    Ok(svg)
}
