//! Self-checks of the Fock-space algebra, run by `ghostsim verify`.

use std::f64::consts::TAU;
use std::fmt;

use ghostsim::fock::{
    coherent_overlap_closed, displace, ghost_norms, m_inner, supplementary_residual, LadderOperators, LadderReport,
    MMetric, DEFAULT_TRUNCATION,
};
use ghostsim::linalg::SquareMatrix;
use ghostsim::{Complex64, Fock};

/// Tolerance of the exact-arithmetic algebra checks.
pub const ALGEBRA_TOL: f64 = 1e-12;
pub const OVERLAP_TOL: f64 = 1e-10;
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Sample size and radius of the coherent amplitudes.
pub const SAMPLES: usize = 200;
pub const MAX_AMPLITUDE: f64 = 2.0;
const GHOST_LEVELS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub fock_n: usize,
    /// Replaces every nonzero tolerance.
    pub tol: Option<f64>,
    /// Flips the sign of `aᵀ` before checking; used to confirm that the
    /// checks can fail.
    pub flip_ghost_sign: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { fock_n: DEFAULT_TRUNCATION, tol: None, flip_ghost_sign: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub tolerance: f64,
    pub deviation: Option<f64>,
    /// Why the check could not run.
    pub refusal: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.refusal.is_none() && self.deviation.is_some_and(|d| d <= self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub truncation: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Low-discrepancy amplitudes with `|λ| ≤ MAX_AMPLITUDE`, fixed across runs.
pub fn sample_amplitudes(count: usize, offset: usize) -> Vec<Complex64> {
    let (g1, g2) = (0.754_877_666_246_692_7, 0.569_840_290_998_053_2);
    (1..=count)
        .map(|i| {
            let j = (i + offset) as f64;
            let r = MAX_AMPLITUDE * (j * g1).fract().sqrt();
            Complex64::from_polar(r, TAU * (j * g2).fract())
        })
        .collect()
}

fn mat_vec(m: &SquareMatrix<f64>, v: &[f64]) -> Vec<f64> {
    m.rows().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `(naive, metric)` norms of `(aᵀ)ⁿ|0⟩` built from the operator matrices.
fn matrix_ghost_norm(ops: &LadderOperators<f64>, n: usize) -> (f64, f64) {
    let dim = ops.lowering.dim();
    let mut v = vec![0.0; dim];
    v[0] = 1.0;
    for _ in 0..n {
        v = mat_vec(&ops.ghost_raising, &v);
    }
    let mut mv = mat_vec(&ops.metric, &v);
    for _ in 0..n {
        v = mat_vec(&ops.lowering, &v);
        mv = mat_vec(&ops.lowering, &mv);
    }
    (v[0], mv[0])
}

fn ghost_norm_deviation(ops: &LadderOperators<f64>, truncation: usize) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for n in 0..GHOST_LEVELS.min(truncation) {
        let (naive, metric) = matrix_ghost_norm(ops, n);
        let lib = ghost_norms::<f64>(n, truncation).map_err(|e| e.to_string())?;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        if naive.signum() != sign || metric <= 0.0 {
            return Ok(f64::INFINITY);
        }
        let f = factorial(n);
        worst = worst
            .max((naive - sign * f).abs() / f)
            .max((metric - f).abs() / f)
            .max((lib.naive - naive).abs() / f)
            .max((lib.metric - metric).abs() / f);
    }
    Ok(worst)
}

fn coherent_states(amps: &[Complex64], truncation: usize) -> Result<Vec<Fock>, String> {
    amps.iter().map(|&l| displace(l, truncation).map_err(|e| e.to_string())).collect()
}

fn overlap_deviation(truncation: usize) -> Result<f64, String> {
    let (a, b) = (sample_amplitudes(SAMPLES, 0), sample_amplitudes(SAMPLES, SAMPLES));
    let (sa, sb) = (coherent_states(&a, truncation)?, coherent_states(&b, truncation)?);
    let mut worst = 0.0f64;
    for i in 0..SAMPLES {
        let brute = sa[i].inner(&sb[i]).map_err(|e| e.to_string())?;
        worst = worst.max((brute - coherent_overlap_closed(a[i], b[i])).norm());
    }
    Ok(worst)
}

/// `⟨λ|M|μ⟩ = ⟨λ|-μ⟩`.
fn metric_overlap_deviation(truncation: usize) -> Result<f64, String> {
    let (a, b) = (sample_amplitudes(SAMPLES, 2 * SAMPLES), sample_amplitudes(SAMPLES, 3 * SAMPLES));
    let (sa, sb) = (coherent_states(&a, truncation)?, coherent_states(&b, truncation)?);
    let metric = MMetric::new(truncation);
    let mut worst = 0.0f64;
    for i in 0..SAMPLES {
        let m = m_inner(&sa[i], &sb[i], &metric).map_err(|e| e.to_string())?;
        worst = worst.max((m - coherent_overlap_closed(a[i], -b[i])).norm());
    }
    Ok(worst)
}

fn residual_deviation(truncation: usize) -> Result<f64, String> {
    let amps = sample_amplitudes(SAMPLES, 4 * SAMPLES);
    let states = coherent_states(&amps, truncation)?;
    amps.iter()
        .zip(&states)
        .map(|(&l, s)| supplementary_residual(l, s).map_err(|e| e.to_string()))
        .try_fold(0.0f64, |m, r| r.map(|r| m.max(r)))
}

fn check(name: &'static str, tolerance: f64, r: Result<f64, String>) -> Check {
    match r {
        Ok(d) => Check { name, tolerance, deviation: Some(d), refusal: None },
        Err(e) => Check { name, tolerance, deviation: None, refusal: Some(e) },
    }
}

pub const LADDER: &str = "ladder [a, aT] = -1 below the top level";
pub const PARITY: &str = "ladder M a+ M = -a+";
pub const METRIC_SQUARE: &str = "metric M^2 = 1";
pub const METRIC_SYMMETRY: &str = "metric M = M^T";
pub const GHOST_NORMS: &str = "ghost norms (-1)^n n! naive, n! with M";
pub const METRIC_OVERLAP: &str = "metric overlap <l|M|m> = <l|-m>";
pub const OVERLAP: &str = "coherent overlap closed form vs Fock sum";
pub const RESIDUAL: &str = "supplementary residual |(a - l)|l>|";

pub fn verify(options: &VerifyOptions) -> VerifyReport {
    let n = options.fock_n;
    let tol = |default: f64| options.tol.unwrap_or(default);
    let mut checks = Vec::new();
    if n < 4 {
        let why = format!("truncation N = {n} refused: the ladder algebra needs at least 4 levels");
        for name in [LADDER, PARITY, METRIC_SQUARE, METRIC_SYMMETRY, GHOST_NORMS] {
            checks.push(check(name, tol(ALGEBRA_TOL), Err(why.clone())));
        }
    } else {
        let mut ops = LadderOperators::<f64>::new(n);
        if options.flip_ghost_sign {
            ops.ghost_raising = ops.ghost_raising.scaled(-1.0);
        }
        let report = LadderReport::from_operators(&ops);
        checks.push(check(LADDER, tol(ALGEBRA_TOL), Ok(report.commutator_deviation)));
        checks.push(check(PARITY, tol(ALGEBRA_TOL), Ok(report.parity_conjugation_deviation)));
        checks.push(check(METRIC_SQUARE, 0.0, Ok(report.metric_square_deviation)));
        checks.push(check(METRIC_SYMMETRY, 0.0, Ok(report.metric_symmetry_deviation)));
        checks.push(check(GHOST_NORMS, tol(ALGEBRA_TOL), ghost_norm_deviation(&ops, n)));
    }
    checks.push(check(METRIC_OVERLAP, tol(OVERLAP_TOL), metric_overlap_deviation(n)));
    checks.push(check(OVERLAP, tol(OVERLAP_TOL), overlap_deviation(n)));
    checks.push(check(RESIDUAL, tol(RESIDUAL_TOL), residual_deviation(n)));
    VerifyReport { truncation: n, checks }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Fock truncation N = {}", self.truncation)?;
        for c in &self.checks {
            let status = if c.passed() { "ok  " } else { "FAIL" };
            match (&c.refusal, c.deviation) {
                (Some(why), _) => writeln!(f, "{status} {:<44} {why}", c.name)?,
                (None, Some(d)) => writeln!(f, "{status} {:<44} deviation {d:.3e}  tol {:.1e}", c.name, c.tolerance)?,
                (None, None) => unreachable!(),
            }
        }
        write!(f, "{}", if self.passed() { "all checks passed" } else { "some checks failed" })
    }
}
