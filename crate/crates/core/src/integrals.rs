//! Cutoff-regularized radial integrals: total scalar-photon number of a
//! superposed charge, the resulting visibility, and the charge and mass
//! decoherence scalings.

use crate::error::{Error, Result};
use crate::physics::{amplitude_scale, PhysicsContext, Position3, WaveVector};
use crate::quadrature::{CutoffPair, RadialModeGrid};
use crate::scalar::Real;

/// `sin(x)/x`, with `sinc(0) = 1`.
pub fn sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(1e-4) {
        let x2 = x * x;
        T::one() - x2 / T::lit(6.0) + x2 * x2 / T::lit(120.0)
    } else {
        x.sin() / x
    }
}

/// `1 - sinc(x)` without cancellation for small `x`.
pub fn one_minus_sinc<T: Real>(x: T) -> T {
    if x.abs() < T::lit(0.5) {
        // sum_{n>=1} (-1)^(n+1) x^(2n) / (2n+1)!
        let x2 = x * x;
        let mut term = x2 / T::lit(6.0);
        let mut sum = term;
        for n in 2..=9usize {
            let m = T::from_count(2 * n);
            term = -term * x2 / (m * (m + T::one()));
            sum = sum + term;
        }
        sum
    } else {
        T::one() - x.sin() / x
    }
}

/// Two candidate locations `r_a`, `r_b` of a superposed charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparationGeometry<T> {
    pub r_a: Position3<T>,
    pub r_b: Position3<T>,
}

impl<T: Real> SeparationGeometry<T> {
    pub fn new(r_a: Position3<T>, r_b: Position3<T>) -> Result<Self> {
        if !(r_a.is_finite() && r_b.is_finite()) {
            return Err(Error::config("geometry positions must be finite"));
        }
        Ok(Self { r_a, r_b })
    }

    /// Locations `±delta_r/2` on the x axis.
    pub fn along_x(delta_r: T) -> Result<Self> {
        if !(delta_r >= T::zero()) {
            return Err(Error::domain(format!("delta_r must be nonnegative, got {delta_r}")));
        }
        let h = delta_r / T::lit(2.0);
        Self::new(Position3::new(-h, T::zero(), T::zero()), Position3::new(h, T::zero(), T::zero()))
    }

    /// `|r_a - r_b|` in `r0`.
    pub fn delta_r(&self) -> T {
        self.r_a.distance(&self.r_b)
    }
}

fn check_k<T: Real>(k: T) -> Result<()> {
    if k > T::zero() && k.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("wavenumber must be positive and finite, got {k}")))
    }
}

/// `|lambda_a(k) - lambda_b(k)|^2` for one charge `q` localized at `r_a`
/// versus `r_b`: `2 g^2 / (hbar omega)^2 (1 - cos(k.(r_a - r_b)))`.
pub fn per_mode_distance2<T: Real>(
    kvec: &WaveVector<T>,
    geom: &SeparationGeometry<T>,
    q: T,
    ctx: &PhysicsContext<T>,
) -> Result<T> {
    let k = kvec.magnitude();
    check_k(k)?;
    let amp = amplitude_scale(k, ctx) * q;
    let half = kvec.phase_at(&(geom.r_a - geom.r_b)) / T::lit(2.0);
    // 1 - cos(t) = 2 sin^2(t/2)
    let s = half.sin();
    Ok(T::lit(4.0) * amp * amp * s * s)
}

/// Solid-angle integral of [`per_mode_distance2`] at fixed `k`, per unit
/// reduced wavenumber: `4 pi k^2 (2 g^2/(hbar omega)^2) (1 - sinc(k delta_r))`.
pub fn angular_reduced_integrand<T: Real>(k: T, delta_r: T, q: T, ctx: &PhysicsContext<T>) -> Result<T> {
    check_k(k)?;
    if !(delta_r >= T::zero()) {
        return Err(Error::domain(format!("delta_r must be nonnegative, got {delta_r}")));
    }
    Ok(shell_weight(k, ctx) * q * q * one_minus_sinc(k * delta_r))
}

/// `4 pi k^2 * 2 g_e^2/(hbar omega)^2 / r0^3`: the solid-angle measure
/// times the unit-charge pair amplitude, in reduced `k`.
pub(crate) fn shell_weight<T: Real>(k: T, ctx: &PhysicsContext<T>) -> T {
    let a = amplitude_scale(k, ctx);
    T::lit(8.0) * T::PI() * k * k * a * a / ctx.r0.powi(3)
}

/// Scalar photons distinguishing the two branches of a charge `q` (in `e`)
/// superposed across `geom`: `∫ angular_reduced_integrand dk` over the grid.
pub fn total_photon_number<T: Real>(
    geom: &SeparationGeometry<T>,
    q: T,
    cutoffs: &CutoffPair<T>,
    grid: &RadialModeGrid<T>,
    ctx: &PhysicsContext<T>,
) -> Result<T> {
    grid.ensure_covers(cutoffs)?;
    let dr = geom.delta_r();
    if dr == T::zero() || q == T::zero() {
        return Ok(T::zero());
    }
    let mut total = T::zero();
    for node in grid.nodes() {
        total = total + node.weight * angular_reduced_integrand(node.k, dr, q, ctx)?;
    }
    Ok(total)
}

/// Large-cutoff slope `dn / d ln(k_max delta_r) = q^2 / (2 pi^2 eps0 hbar c)`,
/// i.e. `(2 alpha / pi) (q/e)^2`.
pub fn log_slope<T: Real>(q: T, ctx: &PhysicsContext<T>) -> T {
    let qi = ctx.charge(q);
    qi * qi / (T::lit(2.0) * T::PI() * T::PI() * ctx.eps0 * ctx.hbar * ctx.c)
}

/// Modulus `exp(-n/2)` of the overlap between the two field states.
pub fn visibility<T: Real>(n: T) -> Result<T> {
    if !(n >= T::zero()) {
        return Err(Error::domain(format!("photon number must be nonnegative, got {n}")));
    }
    Ok((-n / T::lit(2.0)).exp())
}

/// `1 - exp(-(Q/Q_P)^2)` for a charge `Q` given in `e`.
pub fn charge_decoherence_scaling<T: Real>(charge: T, ctx: &PhysicsContext<T>) -> Result<T> {
    if !(charge >= T::zero()) {
        return Err(Error::domain(format!("charge must be nonnegative, got {charge}")));
    }
    let r = ctx.charge(charge) / ctx.planck_charge;
    Ok(-(-(r * r)).exp_m1())
}

/// `1 - exp(-(m/m_P)^2)` for a mass given in `hbar/(c r0)`.
pub fn mass_decoherence_scaling<T: Real>(mass: T, ctx: &PhysicsContext<T>) -> Result<T> {
    if !(mass >= T::zero()) {
        return Err(Error::domain(format!("mass must be nonnegative, got {mass}")));
    }
    let r = ctx.mass(mass) / ctx.planck_mass;
    Ok(-(-(r * r)).exp_m1())
}
