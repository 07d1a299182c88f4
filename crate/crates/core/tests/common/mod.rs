//! Reference quadratures kept independent of the library's own rules.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};

/// Gauss-Legendre rule by Golub-Welsch (eigenvalues of the Jacobi matrix).
pub fn golub_welsch(n: usize) -> Vec<(f64, f64)> {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        let b = i as f64 / ((4 * i * i - 1) as f64).sqrt();
        j[(i, i - 1)] = b;
        j[(i - 1, i)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut rule: Vec<(f64, f64)> =
        (0..n).map(|i| (eig.eigenvalues[i], 2.0 * eig.eigenvectors[(0, i)].powi(2))).collect();
    rule.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    rule
}

/// `∫ f dΩ` over the unit sphere: Gauss-Legendre in `cos θ` times the
/// trapezoid rule (spectral for periodic integrands) in `φ`.
pub fn sphere_integral(f: impl Fn(f64, f64) -> f64, n_theta: usize, n_phi: usize) -> f64 {
    let rule = golub_welsch(n_theta);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut total = 0.0;
    for &(x, w) in &rule {
        let theta = x.acos();
        let mut ring = 0.0;
        for j in 0..n_phi {
            ring += f(theta, (j as f64 + 0.5) * dphi);
        }
        total += w * ring * dphi;
    }
    total
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1)
        + simpson_step(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature to absolute tolerance `tol`.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fb, fm) = (f(a), f(b), f(m));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 48)
}

/// `∫_{k_min}^{k_max} f(k) dk`, integrated in `ln k` on many panels.
pub fn log_integral(f: impl Fn(f64) -> f64, k_min: f64, k_max: f64, panels: usize, tol: f64) -> f64 {
    let (a, b) = (k_min.ln(), k_max.ln());
    let h = (b - a) / panels as f64;
    let g = |u: f64| {
        let k = u.exp();
        f(k) * k
    };
    (0..panels).map(|p| adaptive_simpson(&g, a + h * p as f64, a + h * (p + 1) as f64, tol / panels as f64)).sum()
}

/// `∫_{k_min}^{k_max} dk/k (1 - sin(kd)/(kd))` written out directly.
pub fn pair_log_integral(d: f64, k_min: f64, k_max: f64) -> f64 {
    let panels = (((k_max / k_min).ln() * 8.0) as usize).max(16) + (k_max * d / 2.0) as usize;
    log_integral(
        |k| {
            let x = k * d;
            let s = if x < 1e-3 { x * x / 6.0 - x.powi(4) / 120.0 } else { 1.0 - x.sin() / x };
            s / k
        },
        k_min,
        k_max,
        panels,
        1e-13,
    )
}
