//! Single-mode scalar-photon Fock space, truncated to `N` levels.
//!
//! The scalar mode is represented on an ordinary oscillator space with
//! standard ladder operators `a`, `a†` (`[a, a†] = 1`). The ghost creation
//! operator is the similarity transform `aᵀ = M a† M` with the parity
//! `M = (-1)^{a†a}`, so that `[a, aᵀ] = -1`. The indefinite Gupta-Bleuler
//! product is `⟨⟨ψ|φ⟩⟩ = ⟨ψ|M|φ⟩`.
//!
//! Oscillator quantities here use `hbar = 1` and unit mass.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;
use crate::scalar::Real;

/// Default truncation.
pub const DEFAULT_TRUNCATION: usize = 64;
/// Largest probability mass a truncation may discard.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// State of one scalar mode in the number basis `|0⟩ .. |N-1⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> FockVector<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::domain(format!("truncation must be at least 2, got {}", coeffs.len())));
        }
        if coeffs.iter().any(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::domain("Fock coefficients must be finite"));
        }
        Ok(Self { coeffs })
    }

    /// Number state `|n⟩` in a space of `truncation` levels.
    pub fn number_state(n: usize, truncation: usize) -> Result<Self> {
        if n >= truncation {
            return Err(Error::domain(format!("|{n}⟩ does not fit in {truncation} levels")));
        }
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); truncation];
        coeffs[n] = Complex::new(T::one(), T::zero());
        Self::new(coeffs)
    }

    pub fn vacuum(truncation: usize) -> Result<Self> {
        Self::number_state(0, truncation)
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Standard (positive-definite) inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        same_dim(self.truncation(), other.truncation())?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    pub fn mean_photons(&self) -> T {
        self.coeffs.iter().enumerate().fold(T::zero(), |acc, (n, c)| acc + T::from_count(n) * c.norm_sqr())
    }

    /// `a|ψ⟩` (the top level is lost).
    pub fn lowered(&self) -> Self {
        let n = self.truncation();
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for k in 1..n {
            out[k - 1] = self.coeffs[k] * T::from_count(k).sqrt();
        }
        Self { coeffs: out }
    }

    /// `a†|ψ⟩` (amplitude pushed past the top level is dropped).
    pub fn raised(&self) -> Self {
        let n = self.truncation();
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for (k, slot) in out.iter_mut().enumerate().skip(1) {
            *slot = self.coeffs[k - 1] * T::from_count(k).sqrt();
        }
        Self { coeffs: out }
    }

    /// `M|ψ⟩ = (-1)^{a†a}|ψ⟩`.
    pub fn parity(&self) -> Self {
        Self { coeffs: self.coeffs.iter().enumerate().map(|(n, &c)| if n % 2 == 1 { -c } else { c }).collect() }
    }

    /// `aᵀ|ψ⟩ = M a† M |ψ⟩`.
    pub fn ghost_raised(&self) -> Self {
        self.parity().raised().parity()
    }
}

fn same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// Parity metric `M = diag(+1, -1, +1, ...)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MMetric {
    truncation: usize,
}

impl MMetric {
    pub fn new(truncation: usize) -> Self {
        Self { truncation }
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn sign(&self, n: usize) -> i8 {
        if n.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn matrix<T: Real>(&self) -> SquareMatrix<T> {
        SquareMatrix::from_fn(self.truncation, |i, j| {
            if i != j {
                T::zero()
            } else if i % 2 == 0 {
                T::one()
            } else {
                -T::one()
            }
        })
    }
}

/// Gupta-Bleuler product `⟨ψ|M|φ⟩`.
pub fn m_inner<T: Real>(psi: &FockVector<T>, phi: &FockVector<T>, metric: &MMetric) -> Result<Complex<T>> {
    same_dim(psi.truncation(), phi.truncation())?;
    same_dim(psi.truncation(), metric.truncation())?;
    psi.inner(&phi.parity())
}

/// Tail probability `Σ_{n >= N} |⟨n|λ⟩|²` for every `N`, up to the point
/// where the remaining mass is negligible.
fn poisson_suffix_sums<T: Real>(mean: T) -> Vec<T> {
    // ln p_n = -x + n ln x - ln n!
    let mut logs = Vec::new();
    let mut lp = -mean;
    let ln_mean = if mean > T::zero() { mean.ln() } else { T::neg_infinity() };
    let floor = T::lit(-120.0);
    let mut n = 0usize;
    loop {
        logs.push(lp);
        n += 1;
        lp = lp + ln_mean - T::from_count(n).ln();
        if T::from_count(n) > mean && lp < floor {
            break;
        }
    }
    let mut suffix = vec![T::zero(); logs.len() + 1];
    for i in (0..logs.len()).rev() {
        suffix[i] = suffix[i + 1] + logs[i].exp();
    }
    suffix
}

/// Discarded probability of the coherent state `|λ⟩` truncated to `truncation` levels.
pub fn truncation_tail<T: Real>(lambda: Complex<T>, truncation: usize) -> T {
    let suffix = poisson_suffix_sums(lambda.norm_sqr());
    suffix.get(truncation).copied().unwrap_or(T::zero())
}

/// Smallest truncation holding `|λ⟩` with tail mass below [`TAIL_TOLERANCE`].
pub fn required_truncation<T: Real>(lambda: Complex<T>) -> usize {
    let suffix = poisson_suffix_sums(lambda.norm_sqr());
    let tol = T::lit(TAIL_TOLERANCE);
    suffix.iter().position(|&s| s < tol).unwrap_or(suffix.len()).max(2)
}

/// Coherent state `|λ⟩ = e^{-|λ|²/2} Σ λⁿ/√n! |n⟩`, refusing truncations
/// that would discard more than [`TAIL_TOLERANCE`] of its norm.
pub fn displace<T: Real>(lambda: Complex<T>, truncation: usize) -> Result<FockVector<T>> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::domain("coherent amplitude must be finite"));
    }
    let tail = truncation_tail(lambda, truncation);
    if truncation < 2 || tail >= T::lit(TAIL_TOLERANCE) {
        return Err(Error::Truncation {
            given: truncation,
            required: required_truncation(lambda),
            tail: tail.to_f64_lossy(),
        });
    }
    let mut coeffs = Vec::with_capacity(truncation);
    let mut c = Complex::new((-lambda.norm_sqr() / T::lit(2.0)).exp(), T::zero());
    coeffs.push(c);
    for n in 1..truncation {
        c = c * lambda / T::from_count(n).sqrt();
        coeffs.push(c);
    }
    FockVector::new(coeffs)
}

/// `⟨λa|λb⟩ = exp(-|λa|²/2 - |λb|²/2 + conj(λa) λb)`, phase included.
pub fn coherent_overlap_closed<T: Real>(lambda_a: Complex<T>, lambda_b: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    (lambda_a.conj() * lambda_b - (lambda_a.norm_sqr() + lambda_b.norm_sqr()) * half).exp()
}

/// `‖(a - λ)ψ‖ / ‖ψ‖`: how far `ψ` is from satisfying the scalar-mode
/// constraint with the longitudinal mode in vacuum.
pub fn supplementary_residual<T: Real>(lambda: Complex<T>, psi: &FockVector<T>) -> Result<T> {
    let norm = psi.norm_sqr();
    if norm == T::zero() {
        return Err(Error::ZeroNorm);
    }
    let lowered = psi.lowered();
    let r = lowered.coeffs.iter().zip(&psi.coeffs).fold(T::zero(), |acc, (a, p)| acc + (*a - *p * lambda).norm_sqr());
    Ok((r / norm).sqrt())
}

/// Ladder operator matrices on a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderOperators<T> {
    pub lowering: SquareMatrix<T>,
    pub raising: SquareMatrix<T>,
    pub ghost_raising: SquareMatrix<T>,
    pub metric: SquareMatrix<T>,
}

impl<T: Real> LadderOperators<T> {
    /// `a`, `a†`, `M` and `aᵀ = M a† M`.
    pub fn new(truncation: usize) -> Self {
        let lowering =
            SquareMatrix::from_fn(truncation, |i, j| if j == i + 1 { T::from_count(j).sqrt() } else { T::zero() });
        let raising = lowering.transpose();
        let metric = MMetric::new(truncation).matrix();
        let ghost_raising = metric.matmul(&raising).matmul(&metric);
        Self { lowering, raising, ghost_raising, metric }
    }
}

/// Deviations of the truncated ladder algebra from the ghost relations.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderReport<T> {
    pub truncation: usize,
    /// `max |[a, aᵀ] + 1|` over rows `0..N-1` (top level excluded).
    pub commutator_deviation: T,
    /// `max |[a, aᵀ] + 1|` on the top row, a truncation artifact.
    pub top_row_deviation: T,
    /// `max |M a† M + a†|`.
    pub parity_conjugation_deviation: T,
    /// `max |M² - 1|`.
    pub metric_square_deviation: T,
    /// `max |M - Mᵀ|`.
    pub metric_symmetry_deviation: T,
}

impl<T: Real> LadderReport<T> {
    /// Checks arbitrary operator matrices against the ghost relations.
    pub fn from_operators(ops: &LadderOperators<T>) -> Self {
        let n = ops.lowering.dim();
        let id = SquareMatrix::<T>::identity(n);
        let a = &ops.lowering;
        let at = &ops.ghost_raising;
        // [a, aᵀ] + 1
        let defect = a.matmul(at).sub(&at.matmul(a)).sub(&id.scaled(-T::one()));
        let mut body = T::zero();
        let mut top = T::zero();
        for (i, row) in defect.rows().enumerate() {
            let worst = row.iter().fold(T::zero(), |m, x| m.max(x.abs()));
            if i + 1 == n {
                top = worst;
            } else {
                body = body.max(worst);
            }
        }
        let m = &ops.metric;
        let conj = m.matmul(&ops.raising).matmul(m);
        let parity = SquareMatrix::from_fn(n, |i, j| conj[(i, j)] + ops.raising[(i, j)]).max_abs();
        Self {
            truncation: n,
            commutator_deviation: body,
            top_row_deviation: top,
            parity_conjugation_deviation: parity,
            metric_square_deviation: m.matmul(m).sub(&id).max_abs(),
            metric_symmetry_deviation: m.sub(&m.transpose()).max_abs(),
        }
    }

    pub fn passes(&self, tol: T) -> bool {
        self.commutator_deviation <= tol
            && self.parity_conjugation_deviation <= tol
            && self.metric_square_deviation == T::zero()
            && self.metric_symmetry_deviation == T::zero()
    }
}

/// Builds `a`, `aᵀ = M a† M` on `truncation` levels and measures how well
/// `[a, aᵀ] = -1` and `M a† M = -a†` hold.
pub fn scalar_ladder_check<T: Real>(truncation: usize) -> Result<LadderReport<T>> {
    if truncation < 4 {
        return Err(Error::domain(format!("ladder check needs at least 4 levels, got {truncation}")));
    }
    Ok(LadderReport::from_operators(&LadderOperators::new(truncation)))
}

/// Norms of `(aᵀ)ⁿ|0⟩`, evaluated algebraically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhostNorms<T> {
    pub excitations: usize,
    /// `⟨0|aⁿ (aᵀ)ⁿ|0⟩`, the norm with `aᵀ` taken as the adjoint of `a`;
    /// equals `(-1)ⁿ n!`.
    pub naive: T,
    /// `⟨0|aⁿ M (aᵀ)ⁿ|0⟩`, the same pairing with the metric inserted;
    /// equals `n!`.
    pub metric: T,
}

/// [`GhostNorms`] of `(aᵀ)ⁿ|0⟩` for `n < truncation`.
pub fn ghost_norms<T: Real>(excitations: usize, truncation: usize) -> Result<GhostNorms<T>> {
    if excitations >= truncation {
        return Err(Error::domain(format!("{excitations} excitations do not fit in {truncation} levels")));
    }
    let mut state = FockVector::<T>::vacuum(truncation)?;
    for _ in 0..excitations {
        state = state.ghost_raised();
    }
    let project = |mut v: FockVector<T>| {
        for _ in 0..excitations {
            v = v.lowered();
        }
        v.coeffs[0].re
    };
    Ok(GhostNorms { excitations, naive: project(state.clone()), metric: project(state.parity()) })
}

/// `(aᵀ)ⁿ|0⟩`.
pub fn ghost_number_state<T: Real>(excitations: usize, truncation: usize) -> Result<FockVector<T>> {
    let mut state = FockVector::<T>::number_state(0, truncation)?;
    if excitations >= truncation {
        return Err(Error::domain(format!("{excitations} excitations do not fit in {truncation} levels")));
    }
    for _ in 0..excitations {
        state = state.ghost_raised();
    }
    Ok(state)
}

/// Ground state of a scalar mode driven by a static source.
#[derive(Debug, Clone, PartialEq)]
pub struct DrivenGroundState<T> {
    /// Coherent amplitude `-drive / omega`.
    pub lambda: Complex<T>,
    pub state: FockVector<T>,
    /// `⟨x⟩` with `x = (a + a†)/sqrt(2 omega)`.
    pub position_shift: T,
}

/// Displaced ground state of a mode of frequency `omega` under a linear
/// drive of strength `drive`: a coherent state with `λ = -drive/omega`.
pub fn driven_ground_state<T: Real>(omega: T, drive: T, truncation: usize) -> Result<DrivenGroundState<T>> {
    if !(omega > T::zero() && omega.is_finite()) {
        return Err(Error::domain(format!("frequency must be positive, got {omega}")));
    }
    let lambda = Complex::new(-drive / omega, T::zero());
    let state = displace(lambda, truncation)?;
    let x_psi = {
        let mut low = state.lowered();
        for (l, r) in low.coeffs.iter_mut().zip(state.raised().coeffs) {
            *l = (*l + r) / (T::lit(2.0) * omega).sqrt();
        }
        low
    };
    let position_shift = state.inner(&x_psi)?.re / state.norm_sqr();
    Ok(DrivenGroundState { lambda, state, position_shift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type C = Complex<f64>;

    #[test]
    fn displace_vacuum() {
        let v = displace(C::new(0.0, 0.0), 8).unwrap();
        assert_eq!(v.coeffs()[0], C::new(1.0, 0.0));
        assert!(v.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn displace_coefficient_ratio() {
        let lam = C::new(0.7, -1.1);
        let v = displace(lam, 64).unwrap();
        assert_relative_eq!((v.coeffs()[1] / v.coeffs()[0]).norm(), lam.norm(), max_relative = 1e-14);
        assert_relative_eq!(v.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn displace_refuses_short_truncation() {
        match displace(C::new(2.0, 0.0), 8) {
            Err(Error::Truncation { given, required, tail }) => {
                assert_eq!(given, 8);
                assert!(required > 8 && tail > 1e-12);
                // the estimate is sufficient
                assert!(displace(C::new(2.0, 0.0), required).is_ok());
                assert!(displace(C::new(2.0, 0.0), required - 1).is_err());
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
        assert!(matches!(displace(C::new(0.0, 0.0), 1), Err(Error::Truncation { .. })));
    }

    #[test]
    fn overlap_examples() {
        let a = C::new(0.3, 0.4);
        assert_relative_eq!(coherent_overlap_closed(a, a).re, 1.0, epsilon = 1e-15);
        assert!(coherent_overlap_closed(a, a).im.abs() < 1e-15);
        let o = coherent_overlap_closed(C::new(0.0, 0.0), C::new(1.0, 0.0));
        assert_relative_eq!(o.re, (-0.5f64).exp(), max_relative = 1e-15);
        let (x, y) = (C::new(0.5, -1.0), C::new(-0.2, 0.9));
        assert_relative_eq!(
            coherent_overlap_closed(x, y).norm(),
            (-0.5 * (x - y).norm_sqr()).exp(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn m_inner_examples() {
        let m = MMetric::new(6);
        let vac = FockVector::<f64>::vacuum(6).unwrap();
        assert_eq!(m_inner(&vac, &vac, &m).unwrap(), C::new(1.0, 0.0));
        let one = FockVector::<f64>::number_state(1, 6).unwrap();
        assert_eq!(m_inner(&one, &one, &m).unwrap(), C::new(-1.0, 0.0));
        let short = FockVector::<f64>::vacuum(4).unwrap();
        assert!(matches!(m_inner(&vac, &short, &m), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn metric_squares_to_identity() {
        let m: SquareMatrix<f64> = MMetric::new(9).matrix();
        assert_eq!(m.matmul(&m), SquareMatrix::identity(9));
    }

    #[test]
    fn ladder_check_at_sixteen_levels() {
        let r = scalar_ladder_check::<f64>(16).unwrap();
        assert!(r.commutator_deviation < 1e-14, "{r:?}");
        assert!(r.top_row_deviation > 1.0);
        assert_eq!(r.parity_conjugation_deviation, 0.0);
        assert_eq!(r.metric_square_deviation, 0.0);
        assert!(r.passes(1e-14));
        assert!(scalar_ladder_check::<f64>(3).is_err());
    }

    #[test]
    fn ladder_check_catches_wrong_adjoint_sign() {
        let mut ops = LadderOperators::<f64>::new(16);
        ops.ghost_raising = ops.ghost_raising.scaled(-1.0);
        let r = LadderReport::from_operators(&ops);
        assert!(!r.passes(1e-14));
        assert!(r.commutator_deviation > 1.0);
    }

    #[test]
    fn ghost_norm_signs() {
        let mut fact = 1.0;
        for n in 0..10 {
            if n > 0 {
                fact *= n as f64;
            }
            let g = ghost_norms::<f64>(n, 12).unwrap();
            assert_eq!(g.naive.signum(), if n % 2 == 1 { -1.0 } else { 1.0 });
            assert!(g.metric > 0.0);
            assert_relative_eq!(g.metric, fact, max_relative = 1e-12);
            assert_relative_eq!(g.naive.abs(), fact, max_relative = 1e-12);
        }
        assert!(ghost_norms::<f64>(5, 5).is_err());
    }

    #[test]
    fn ghost_raising_is_minus_raising() {
        let psi = displace(C::new(0.4, 0.2), 16).unwrap();
        for (g, r) in psi.ghost_raised().coeffs().iter().zip(psi.raised().coeffs()) {
            assert_eq!(*g, -*r);
        }
    }

    #[test]
    fn residual_examples() {
        let vac = FockVector::<f64>::vacuum(8).unwrap();
        assert_relative_eq!(supplementary_residual(C::new(1.0, 0.0), &vac).unwrap(), 1.0, epsilon = 1e-15);
        let lam = C::new(1.2, -0.5);
        let psi = displace(lam, 64).unwrap();
        assert!(supplementary_residual(lam, &psi).unwrap() < 1e-8);
        let other = C::new(-0.3, 0.4);
        assert_relative_eq!(supplementary_residual(other, &psi).unwrap(), (lam - other).norm(), max_relative = 1e-8);
        let zero = FockVector::new(vec![C::new(0.0, 0.0); 4]).unwrap();
        assert_eq!(supplementary_residual(lam, &zero), Err(Error::ZeroNorm));
    }

    #[test]
    fn driven_ground_state_examples() {
        let d = driven_ground_state(2.0, 0.0, 16).unwrap();
        assert_eq!(d.lambda, C::new(0.0, 0.0));
        assert_eq!(d.state, FockVector::vacuum(16).unwrap());

        // drive ∝ omega^(-1/2)
        let at = |w: f64| driven_ground_state(w, 0.8 / w.sqrt(), 64).unwrap();
        let (a, b) = (at(1.0), at(2.0));
        assert_relative_eq!((b.lambda / a.lambda).norm(), 2f64.powf(-1.5), max_relative = 1e-14);
        assert_relative_eq!(b.position_shift / a.position_shift, 0.25, max_relative = 1e-10);
        assert!(supplementary_residual(a.lambda, &a.state).unwrap() < 1e-8);
        assert!(driven_ground_state(0.0, 1.0, 16).is_err());
    }

    #[test]
    fn fock_vector_validation() {
        assert!(FockVector::<f64>::new(vec![C::new(1.0, 0.0)]).is_err());
        assert!(FockVector::<f64>::new(vec![C::new(f64::NAN, 0.0), C::new(0.0, 0.0)]).is_err());
        assert!(FockVector::<f64>::number_state(4, 4).is_err());
    }
}
