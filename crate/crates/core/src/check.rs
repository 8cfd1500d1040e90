//! Self-check suite: every closed form in [`crate::distributions`] is compared
//! with the brute-force engines of [`crate::oracle`] over a parameter grid.
//!
//! The closed forms are reached through [`ClosedForms`], a table of function
//! pointers, so that a deliberately corrupted entry can be injected to confirm
//! the suite notices.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::distributions::{
    beta_binomial_log_pmf, brb_log_pmf, tbb_log_pmf, tbb_mean, tbb_variance, tilted_beta_mean,
    tilted_beta_pdf, tilted_beta_variance, tilted_moment, tilted_pdf, tilted_variance, BetaMeanDisp,
    TiltedBetaBinomialParams, TiltedBetaParams, TiltedParams, MU_T_MAX, MU_T_MIN,
};
use crate::oracle::{
    integrate_unit_interval, mixed_binomial_pmf_by_quadrature, pmf_moment_by_summation,
    tilted_beta_density, UnitPoint,
};

pub const NORMALIZATION_TOL: f64 = 1e-10;
pub const MOMENT_TOL: f64 = 1e-9;
pub const REDUCTION_TOL: f64 = 1e-13;
pub const PMF_QUADRATURE_TOL: f64 = 1e-9;
const QUAD_TOL: f64 = 1e-12;

/// Mixture parameters `(μ_t, μ_b, φ, θ)`.
pub type MixPoint = (f64, f64, f64, f64);

/// The closed forms under test.
#[derive(Clone, Copy)]
pub struct ClosedForms {
    /// `(y, μ_t)`
    pub tilted_pdf: fn(f64, f64) -> f64,
    /// `(n, μ_t)`
    pub tilted_moment: fn(u32, f64) -> f64,
    pub tilted_variance: fn(f64) -> f64,
    /// `(y, μ_t, μ_b, φ, θ)`
    pub tilted_beta_pdf: fn(f64, f64, f64, f64, f64) -> f64,
    pub tilted_beta_mean: fn(f64, f64, f64, f64) -> f64,
    pub tilted_beta_variance: fn(f64, f64, f64, f64) -> f64,
    /// `(y, m, μ_b, φ)`
    pub bb_log_pmf: fn(u32, u32, f64, f64) -> f64,
    /// `(y, m, μ_t, μ_b, φ, θ)`
    pub tbb_log_pmf: fn(u32, u32, f64, f64, f64, f64) -> f64,
    /// `(y, m, μ_b, φ, θ)`
    pub brb_log_pmf: fn(u32, u32, f64, f64, f64) -> f64,
    /// `(m, μ_t, μ_b, φ, θ)`
    pub tbb_mean: fn(u32, f64, f64, f64, f64) -> f64,
    pub tbb_variance: fn(u32, f64, f64, f64, f64) -> f64,
}

fn mix(mu_t: f64, mu_b: f64, phi: f64, theta: f64) -> Option<TiltedBetaParams> {
    TiltedBetaParams::from_values(mu_t, mu_b, phi, theta).ok()
}

fn tbb(m: u32, mu_t: f64, mu_b: f64, phi: f64, theta: f64) -> Option<TiltedBetaBinomialParams> {
    TiltedBetaBinomialParams::from_values(mu_t, mu_b, phi, theta, m).ok()
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            tilted_pdf: |y, t| TiltedParams::new(t).and_then(|p| tilted_pdf(y, &p)).unwrap_or(f64::NAN),
            tilted_moment: |n, t| TiltedParams::new(t).and_then(|p| tilted_moment(n, &p)).unwrap_or(f64::NAN),
            tilted_variance: |t| TiltedParams::new(t).map(|p| tilted_variance(&p)).unwrap_or(f64::NAN),
            tilted_beta_pdf: |y, t, b, f, w| {
                mix(t, b, f, w).and_then(|p| tilted_beta_pdf(y, &p).ok()).unwrap_or(f64::NAN)
            },
            tilted_beta_mean: |t, b, f, w| mix(t, b, f, w).map_or(f64::NAN, |p| tilted_beta_mean(&p)),
            tilted_beta_variance: |t, b, f, w| mix(t, b, f, w).map_or(f64::NAN, |p| tilted_beta_variance(&p)),
            bb_log_pmf: |y, m, b, f| {
                BetaMeanDisp::new(b, f).and_then(|p| beta_binomial_log_pmf(y, m, &p)).unwrap_or(f64::NAN)
            },
            tbb_log_pmf: |y, m, t, b, f, w| {
                tbb(m, t, b, f, w).and_then(|p| tbb_log_pmf(y, &p).ok()).unwrap_or(f64::NAN)
            },
            brb_log_pmf: |y, m, b, f, w| {
                BetaMeanDisp::new(b, f).and_then(|p| brb_log_pmf(y, m, &p, w)).unwrap_or(f64::NAN)
            },
            tbb_mean: |m, t, b, f, w| tbb(m, t, b, f, w).map_or(f64::NAN, |p| tbb_mean(&p)),
            tbb_variance: |m, t, b, f, w| tbb(m, t, b, f, w).map_or(f64::NAN, |p| tbb_variance(&p)),
        }
    }
}

/// Parameter grid for the suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckGrid {
    pub mu_t: Vec<f64>,
    pub mu_b: Vec<f64>,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub trials: Vec<u32>,
    /// Points at which every pmf cell is compared with numerical compounding.
    pub pmf_points: Vec<(u32, MixPoint)>,
}

impl Default for CheckGrid {
    fn default() -> Self {
        Self {
            mu_t: vec![MU_T_MIN, 0.45, 0.6, MU_T_MAX],
            mu_b: vec![0.2, 0.5, 0.85],
            phi: vec![0.5, 3.0, 40.0],
            theta: vec![0.0, 0.35, 1.0],
            trials: vec![1, 7, 30],
            pmf_points: vec![
                (8, (0.55, 0.35, 2.5, 0.4)),
                (10, (0.4, 0.6, 5.0, 0.3)),
                (5, (MU_T_MIN, 0.2, 0.8, 0.7)),
                (12, (MU_T_MAX, 0.75, 20.0, 0.15)),
                (4, (0.5, 0.5, 1.0, 1.0)),
            ],
        }
    }
}

impl CheckGrid {
    /// Every `(μ_t, μ_b, φ, θ)` combination.
    pub fn mixture_points(&self) -> Vec<MixPoint> {
        let mut out = Vec::new();
        for &t in &self.mu_t {
            for &b in &self.mu_b {
                for &f in &self.phi {
                    for &w in &self.theta {
                        out.push((t, b, f, w));
                    }
                }
            }
        }
        out
    }
}

/// Result of one family of checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub tolerance: f64,
    pub cases: usize,
    /// Largest absolute discrepancy seen (infinite if a case errored).
    pub worst: f64,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: &str, tolerance: f64) -> Self {
        Self { name: name.into(), tolerance, cases: 0, worst: 0.0, failures: Vec::new() }
    }

    fn record(&mut self, label: impl FnOnce() -> String, got: f64, want: f64) {
        self.cases += 1;
        let err = (got - want).abs();
        let err = if err.is_nan() { f64::INFINITY } else { err };
        self.worst = self.worst.max(err);
        if !(err <= self.tolerance) {
            self.failures.push(format!("{}: got {got}, expected {want}", label()));
        }
    }

    fn error(&mut self, label: String, message: impl std::fmt::Display) {
        self.cases += 1;
        self.worst = f64::INFINITY;
        self.failures.push(format!("{label}: {message}"));
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.cases > 0
    }
}

/// Outcome of the whole suite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub grid_points: usize,
    pub outcomes: Vec<CheckOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn outcome(&self, name: &str) -> Option<&CheckOutcome> {
        self.outcomes.iter().find(|o| o.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "parameter grid: {} (mu_t, mu_b, phi, theta) combinations", self.grid_points);
        for o in &self.outcomes {
            let _ = writeln!(
                s,
                "{} {:<34} cases {:>5}  worst {:.3e}  tol {:.0e}",
                if o.passed() { "PASS" } else { "FAIL" },
                o.name,
                o.cases,
                o.worst,
                o.tolerance
            );
            for f in o.failures.iter().take(5) {
                let _ = writeln!(s, "     {f}");
            }
            if o.failures.len() > 5 {
                let _ = writeln!(s, "     ... {} more", o.failures.len() - 5);
            }
        }
        let _ = writeln!(s, "{}", if self.passed() { "all checks passed" } else { "some checks FAILED" });
        s
    }
}

fn quad<F: Fn(UnitPoint) -> f64>(f: F) -> Result<f64, crate::Error> {
    integrate_unit_interval(f, QUAD_TOL).map(|r| r.value)
}

/// Closed-form tilted beta pdf evaluated so that points near 1 keep full
/// precision: for `y > ½` it uses `f(y | μ_t, μ_b) = f(1 − y | 1 − μ_t, 1 − μ_b)`.
fn pdf_at(cf: &ClosedForms, pt: UnitPoint, (t, b, f, w): MixPoint) -> f64 {
    if pt.y <= 0.5 {
        (cf.tilted_beta_pdf)(pt.y, t, b, f, w)
    } else {
        (cf.tilted_beta_pdf)(pt.ybar, 1.0 - t, 1.0 - b, f, w)
    }
}

fn point_label(m: Option<u32>, (t, b, f, w): MixPoint) -> String {
    match m {
        Some(m) => format!("m={m} mu_t={t:.4} mu_b={b} phi={f} theta={w}"),
        None => format!("mu_t={t:.4} mu_b={b} phi={f} theta={w}"),
    }
}

fn check_tilted(cf: &ClosedForms, grid: &CheckGrid) -> Vec<CheckOutcome> {
    let mut norm = CheckOutcome::new("tilted normalization", NORMALIZATION_TOL);
    let mut moments = CheckOutcome::new("tilted moments", MOMENT_TOL);
    for &t in &grid.mu_t {
        let pdf = |pt: UnitPoint| {
            if pt.y <= 0.5 {
                (cf.tilted_pdf)(pt.y, t)
            } else {
                (cf.tilted_pdf)(pt.ybar, 1.0 - t)
            }
        };
        let label = || format!("mu_t={t:.4}");
        match quad(pdf) {
            Ok(v) => norm.record(label, v, 1.0),
            Err(e) => norm.error(label(), e),
        }
        for n in 1..=4u32 {
            match quad(|pt| pt.y.powi(n as i32) * pdf(pt)) {
                Ok(v) => moments.record(|| format!("mu_t={t:.4} E[Y^{n}]"), (cf.tilted_moment)(n, t), v),
                Err(e) => moments.error(label(), e),
            }
        }
        let m1 = quad(|pt| pt.y * pdf(pt));
        let m2 = quad(|pt| pt.y * pt.y * pdf(pt));
        match (m1, m2) {
            (Ok(a), Ok(b)) => moments.record(|| format!("mu_t={t:.4} variance"), (cf.tilted_variance)(t), b - a * a),
            (Err(e), _) | (_, Err(e)) => moments.error(label(), e),
        }
    }
    vec![norm, moments]
}

fn check_tilted_beta(cf: &ClosedForms, points: &[MixPoint]) -> Vec<CheckOutcome> {
    let mut norm = CheckOutcome::new("tilted beta normalization", NORMALIZATION_TOL);
    let mut moments = CheckOutcome::new("tilted beta mean and variance", MOMENT_TOL);
    let mut indep = CheckOutcome::new("tilted beta pdf vs independent", MOMENT_TOL);
    for &p in points {
        let (t, b, f, w) = p;
        let label = || point_label(None, p);
        let m0 = quad(|pt| pdf_at(cf, pt, p));
        let m1 = quad(|pt| pt.y * pdf_at(cf, pt, p));
        let m2 = quad(|pt| pt.y * pt.y * pdf_at(cf, pt, p));
        match (m0, m1, m2) {
            (Ok(a), Ok(b1), Ok(b2)) => {
                norm.record(label, a, 1.0);
                moments.record(|| format!("{} mean", label()), (cf.tilted_beta_mean)(t, b, f, w), b1);
                moments.record(|| format!("{} variance", label()), (cf.tilted_beta_variance)(t, b, f, w), b2 - b1 * b1);
            }
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => norm.error(label(), e),
        }
        for y in [0.05, 0.3, 0.5, 0.7, 0.95] {
            let pt = UnitPoint { y, ybar: 1.0 - y };
            let want = tilted_beta_density(pt, t, b, f, w);
            let got = pdf_at(cf, pt, p);
            indep.record(|| format!("{} y={y}", label()), got / want, 1.0);
        }
    }
    vec![norm, moments, indep]
}

fn check_counts(cf: &ClosedForms, grid: &CheckGrid, points: &[MixPoint]) -> Vec<CheckOutcome> {
    let mut bb_norm = CheckOutcome::new("beta-binomial normalization", NORMALIZATION_TOL);
    let mut tbb_norm = CheckOutcome::new("TBB normalization", NORMALIZATION_TOL);
    let mut brb_norm = CheckOutcome::new("BRB normalization", NORMALIZATION_TOL);
    let mut moments = CheckOutcome::new("TBB mean and variance", MOMENT_TOL);
    let mut reductions = CheckOutcome::new("reductions TBB/BRB/BB", REDUCTION_TOL);
    for &m in &grid.trials {
        for &b in &grid.mu_b {
            for &f in &grid.phi {
                let s = pmf_moment_by_summation(|y| (cf.bb_log_pmf)(y, m, b, f), m, 1);
                let label = || format!("m={m} mu_b={b} phi={f}");
                match s {
                    Ok(s) => bb_norm.record(label, s.mass, 1.0),
                    Err(e) => bb_norm.error(label(), e),
                }
                for &w in &grid.theta {
                    let s = pmf_moment_by_summation(|y| (cf.brb_log_pmf)(y, m, b, f, w), m, 1);
                    let label = || format!("m={m} mu_b={b} phi={f} theta={w}");
                    match s {
                        Ok(s) => brb_norm.record(label, s.mass, 1.0),
                        Err(e) => brb_norm.error(label(), e),
                    }
                }
                for y in 0..=m {
                    let bb = (cf.bb_log_pmf)(y, m, b, f).exp();
                    for &t in &grid.mu_t {
                        let tbb0 = (cf.tbb_log_pmf)(y, m, t, b, f, 0.0).exp();
                        reductions.record(|| format!("TBB(theta=0) vs BB y={y} m={m} mu_t={t:.4} mu_b={b} phi={f}"), tbb0, bb);
                    }
                    let brb0 = (cf.brb_log_pmf)(y, m, b, f, 0.0).exp();
                    reductions.record(|| format!("BRB(theta=0) vs BB y={y} m={m} mu_b={b} phi={f}"), brb0, bb);
                    for &w in &grid.theta {
                        let tbb_half = (cf.tbb_log_pmf)(y, m, 0.5, b, f, w).exp();
                        let brb = (cf.brb_log_pmf)(y, m, b, f, w).exp();
                        reductions.record(|| format!("TBB(mu_t=1/2) vs BRB y={y} m={m} mu_b={b} phi={f} theta={w}"), tbb_half, brb);
                    }
                }
            }
        }
        for &p in points {
            let (t, b, f, w) = p;
            let label = || point_label(Some(m), p);
            let lp = |y| (cf.tbb_log_pmf)(y, m, t, b, f, w);
            match (pmf_moment_by_summation(lp, m, 1), pmf_moment_by_summation(lp, m, 2)) {
                (Ok(s1), Ok(s2)) => {
                    tbb_norm.record(label, s1.mass, 1.0);
                    moments.record(|| format!("{} mean", label()), (cf.tbb_mean)(m, t, b, f, w), s1.value);
                    moments.record(
                        || format!("{} variance", label()),
                        (cf.tbb_variance)(m, t, b, f, w),
                        s2.value - s1.value * s1.value,
                    );
                }
                (Err(e), _) | (_, Err(e)) => tbb_norm.error(label(), e),
            }
        }
    }
    vec![bb_norm, tbb_norm, brb_norm, moments, reductions]
}

fn check_pmf_quadrature(cf: &ClosedForms, grid: &CheckGrid) -> CheckOutcome {
    let mut out = CheckOutcome::new("TBB pmf vs numerical compounding", PMF_QUADRATURE_TOL);
    for &(m, p) in &grid.pmf_points {
        let (t, b, f, w) = p;
        for y in 0..=m {
            let label = || format!("y={y} {}", point_label(Some(m), p));
            match mixed_binomial_pmf_by_quadrature(y, m, |pt| tilted_beta_density(pt, t, b, f, w), QUAD_TOL) {
                Ok(r) => out.record(label, (cf.tbb_log_pmf)(y, m, t, b, f, w).exp(), r.value),
                Err(e) => out.error(label(), e),
            }
        }
    }
    out
}

/// Run every check with the given closed forms over the given grid.
pub fn run_checks_with(cf: &ClosedForms, grid: &CheckGrid) -> CheckReport {
    let points = grid.mixture_points();
    let mut outcomes = check_tilted(cf, grid);
    outcomes.extend(check_tilted_beta(cf, &points));
    outcomes.extend(check_counts(cf, grid, &points));
    outcomes.push(check_pmf_quadrature(cf, grid));
    CheckReport { grid_points: points.len(), outcomes }
}

/// Run the suite against the library's closed forms on the default grid.
pub fn run_checks() -> CheckReport {
    run_checks_with(&ClosedForms::default(), &CheckGrid::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> CheckGrid {
        CheckGrid {
            mu_t: vec![0.4, 0.6],
            mu_b: vec![0.3],
            phi: vec![2.0],
            theta: vec![0.0, 0.5],
            trials: vec![6],
            pmf_points: vec![(6, (0.55, 0.35, 2.5, 0.4))],
        }
    }

    #[test]
    fn library_passes_small_grid() {
        let r = run_checks_with(&ClosedForms::default(), &small_grid());
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn default_grid_is_large_enough() {
        assert!(CheckGrid::default().mixture_points().len() >= 36);
    }

    #[test]
    fn corrupted_variance_is_detected() {
        // Mixture variance with the sign of the between-component term flipped.
        let cf = ClosedForms {
            tbb_variance: |m, t, b, f, w| {
                let p = TiltedBetaBinomialParams::from_values(t, b, f, w, m).unwrap();
                let mf = f64::from(m);
                tbb_variance(&p) - 2.0 * mf * (mf - 1.0) * w * (1.0 - w) * (t - b) * (t - b)
            },
            ..ClosedForms::default()
        };
        let r = run_checks_with(&cf, &small_grid());
        assert!(!r.passed());
        assert!(!r.outcome("TBB mean and variance").unwrap().passed());
    }
}
