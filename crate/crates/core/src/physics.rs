//! Physical constants, unit conventions, point-charge geometry and the
//! per-mode coupling of static charges to the scalar potential.
//!
//! Internally every quantity is carried in a unit system fixed by
//! [`PhysicsContext`]. Public arguments use reduced units: lengths in `r0`,
//! wavenumbers in `1/r0`, charges in units of the elementary charge and
//! masses in units of `hbar / (c r0)` (the electron mass for the default
//! `r0`, the reduced Compton wavelength).

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Fine-structure constant (CODATA 2018).
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
/// Planck mass divided by the electron mass.
pub const PLANCK_TO_ELECTRON_MASS: f64 = 2.176_434e-8 / 9.109_383_701_5e-31;

/// Base unit choices from which the remaining constants are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem<T> {
    pub alpha: T,
    pub hbar: T,
    pub c: T,
    pub eps0: T,
    /// Reference length in internal units.
    pub r0: T,
    /// Planck mass in internal units; derived from `r0` when `None`.
    pub planck_mass: Option<T>,
}

impl<T: Real> Default for UnitSystem<T> {
    fn default() -> Self {
        Self {
            alpha: T::lit(FINE_STRUCTURE),
            hbar: T::one(),
            c: T::one(),
            eps0: T::one(),
            r0: T::one(),
            planck_mass: None,
        }
    }
}

/// Unit system plus the physical constants derived from it.
///
/// `e_charge` and `planck_charge` are derived so that
/// `(e_charge / planck_charge)^2 == alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsContext<T> {
    pub alpha: T,
    pub hbar: T,
    pub c: T,
    pub eps0: T,
    pub e_charge: T,
    pub planck_charge: T,
    pub planck_mass: T,
    pub r0: T,
}

impl<T: Real> PhysicsContext<T> {
    /// `hbar = c = eps0 = 1`, lengths in the electron Compton wavelength.
    pub fn natural() -> Self {
        Self::from_units(UnitSystem::default()).expect("default units are valid")
    }

    pub fn from_units(units: UnitSystem<T>) -> Result<Self> {
        let mut named =
            vec![("alpha", units.alpha), ("hbar", units.hbar), ("c", units.c), ("eps0", units.eps0), ("r0", units.r0)];
        named.extend(units.planck_mass.map(|m| ("planck_mass", m)));
        for (name, value) in named {
            if !(value.is_finite() && value > T::zero()) {
                return Err(Error::config(format!("{name} must be finite and positive, got {value}")));
            }
        }
        let four_pi = T::lit(4.0) * T::PI();
        let planck_charge = (four_pi * units.eps0 * units.hbar * units.c).sqrt();
        let e_charge = planck_charge * units.alpha.sqrt();
        let electron_mass = units.hbar / (units.c * units.r0);
        let planck_mass = units.planck_mass.unwrap_or_else(|| T::lit(PLANCK_TO_ELECTRON_MASS) * electron_mass);
        Ok(Self {
            alpha: units.alpha,
            hbar: units.hbar,
            c: units.c,
            eps0: units.eps0,
            e_charge,
            planck_charge,
            planck_mass,
            r0: units.r0,
        })
    }

    /// Charge in internal units from a multiple of `e`.
    pub fn charge(&self, q_in_e: T) -> T {
        q_in_e * self.e_charge
    }

    /// Mass in internal units from a multiple of `hbar / (c r0)`.
    pub fn mass(&self, m_reduced: T) -> T {
        m_reduced * self.hbar / (self.c * self.r0)
    }

    /// Angular frequency of a mode with wavenumber `k` (in `1/r0`).
    pub fn omega(&self, k: T) -> T {
        self.c * k / self.r0
    }
}

impl<T: Real> Default for PhysicsContext<T> {
    fn default() -> Self {
        Self::natural()
    }
}

/// Point in space, components in units of `r0`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> Position3<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn dot(&self, other: &Self) -> T {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn distance(&self, other: &Self) -> T {
        (*self - *other).norm()
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl<T: Real> Add for Position3<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl<T: Real> Sub for Position3<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl<T: Real> Neg for Position3<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Real> Mul<T> for Position3<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

/// Wave vector of a field mode, components in units of `1/r0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVector<T> {
    pub kx: T,
    pub ky: T,
    pub kz: T,
}

impl<T: Real> WaveVector<T> {
    pub fn new(kx: T, ky: T, kz: T) -> Self {
        Self { kx, ky, kz }
    }

    /// `k` along the unit direction given by polar angle `theta` and azimuth `phi`.
    pub fn from_spherical(k: T, theta: T, phi: T) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(k * st * cp, k * st * sp, k * ct)
    }

    pub fn magnitude(&self) -> T {
        (self.kx * self.kx + self.ky * self.ky + self.kz * self.kz).sqrt()
    }

    /// Phase `k . r` (dimensionless).
    pub fn phase_at(&self, r: &Position3<T>) -> T {
        self.kx * r.x + self.ky * r.y + self.kz * r.z
    }

    pub fn reversed(&self) -> Self {
        Self::new(-self.kx, -self.ky, -self.kz)
    }

    fn checked_magnitude(&self) -> Result<T> {
        let k = self.magnitude();
        if k > T::zero() && k.is_finite() {
            Ok(k)
        } else {
            Err(Error::domain(format!("wave vector magnitude must be positive and finite, got {k}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointCharge<T> {
    pub position: Position3<T>,
    /// Charge in units of `e`.
    pub q: T,
}

/// A labelled set of static point charges.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeConfiguration<T> {
    label: String,
    charges: Vec<PointCharge<T>>,
}

impl<T: Real> ChargeConfiguration<T> {
    pub fn new(label: impl Into<String>, charges: Vec<PointCharge<T>>) -> Result<Self> {
        if charges.is_empty() {
            return Err(Error::config("charge configuration needs at least one charge"));
        }
        for (i, c) in charges.iter().enumerate() {
            if !c.position.is_finite() {
                return Err(Error::config(format!("charge {i} has a non-finite position")));
            }
            if !(c.q.is_finite() && c.q.abs() > T::zero()) {
                return Err(Error::config(format!("charge {i} must be finite and nonzero, got {}", c.q)));
            }
        }
        Ok(Self { label: label.into(), charges })
    }

    pub fn single(position: Position3<T>, q: T) -> Result<Self> {
        Self::new("single", vec![PointCharge { position, q }])
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn charges(&self) -> &[PointCharge<T>] {
        &self.charges
    }

    pub fn translated(&self, shift: Position3<T>) -> Self {
        Self {
            label: self.label.clone(),
            charges: self.charges.iter().map(|c| PointCharge { position: c.position + shift, q: c.q }).collect(),
        }
    }

    /// Coherent amplitude `lambda(k)` of the constrained scalar-mode state.
    pub fn amplitude(&self, kvec: &WaveVector<T>, ctx: &PhysicsContext<T>) -> Result<Complex<T>> {
        eta_eigenvalue(kvec, self, ctx)
    }
}

/// Coupling `g(k) = q c sqrt(hbar / (2 eps0 omega (2 pi)^3))` of a charge
/// `q` (in `e`) to the scalar mode with wavenumber `k` (in `1/r0`).
pub fn coupling_g<T: Real>(k: T, q: T, ctx: &PhysicsContext<T>) -> Result<T> {
    if !(k > T::zero() && k.is_finite()) {
        return Err(Error::domain(format!("wavenumber must be positive and finite, got {k}")));
    }
    Ok(unit_coupling(k, ctx) * ctx.charge(q))
}

/// `g(k)` per unit internal charge; caller guarantees `k > 0`.
fn unit_coupling<T: Real>(k: T, ctx: &PhysicsContext<T>) -> T {
    let two_pi_cubed = (T::lit(2.0) * T::PI()).powi(3);
    let omega = ctx.omega(k);
    ctx.c * (ctx.hbar / (T::lit(2.0) * ctx.eps0 * omega * two_pi_cubed)).sqrt()
}

/// `g(k) / (hbar omega)` for a unit elementary charge, the magnitude of the
/// single-charge coherent amplitude.
pub(crate) fn amplitude_scale<T: Real>(k: T, ctx: &PhysicsContext<T>) -> T {
    unit_coupling(k, ctx) * ctx.e_charge / (ctx.hbar * ctx.omega(k))
}

/// Sum over charges of `g(k)/(hbar omega) exp(-i k.r)`. Charges may be zero.
pub(crate) fn amplitude_of<T: Real>(
    kvec: &WaveVector<T>,
    charges: impl IntoIterator<Item = (Position3<T>, T)>,
    ctx: &PhysicsContext<T>,
) -> Result<Complex<T>> {
    let k = kvec.checked_magnitude()?;
    let scale = amplitude_scale(k, ctx);
    Ok(charges.into_iter().fold(Complex::new(T::zero(), T::zero()), |acc, (r, q)| {
        acc + Complex::from_polar(scale * q, -kvec.phase_at(&r))
    }))
}

/// Eigenvalue of the `eta` operator on the charge-sector state of `cfg`:
/// the coherent amplitude the constraint imposes on scalar mode `kvec`.
pub fn eta_eigenvalue<T: Real>(
    kvec: &WaveVector<T>,
    cfg: &ChargeConfiguration<T>,
    ctx: &PhysicsContext<T>,
) -> Result<Complex<T>> {
    amplitude_of(kvec, cfg.charges.iter().map(|c| (c.position, c.q)), ctx)
}

/// Mean scalar-photon number `|lambda(k)|^2` of mode `kvec`.
pub fn mode_mean_photons<T: Real>(
    kvec: &WaveVector<T>,
    cfg: &ChargeConfiguration<T>,
    ctx: &PhysicsContext<T>,
) -> Result<T> {
    Ok(eta_eigenvalue(kvec, cfg, ctx)?.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ctx() -> PhysicsContext<f64> {
        PhysicsContext::natural()
    }

    #[test]
    fn natural_units_constants() {
        let c = ctx();
        assert_eq!((c.hbar, c.c, c.eps0, c.r0), (1.0, 1.0, 1.0, 1.0));
        assert_relative_eq!(1.0 / c.alpha, 137.035_999, epsilon = 1e-5);
        let ratio = (c.e_charge / c.planck_charge).powi(2);
        assert!(((ratio - c.alpha) / c.alpha).abs() < 1e-12);
        assert_relative_eq!(c.planck_mass, 2.389e22, max_relative = 1e-3);
    }

    #[test]
    fn planck_charge_relation_survives_unit_overrides() {
        let units = UnitSystem {
            hbar: 1.054_571_817e-34,
            c: 2.997_924_58e8,
            eps0: 8.854_187_812_8e-12,
            r0: 3.861_592_67e-13,
            ..UnitSystem::default()
        };
        let c: PhysicsContext<f64> = PhysicsContext::from_units(units).unwrap();
        let ratio = (c.e_charge / c.planck_charge).powi(2);
        assert!(((ratio - c.alpha) / c.alpha).abs() < 1e-12);
        // SI elementary charge comes out of the derived constants
        assert_relative_eq!(c.e_charge, 1.602_176_634e-19, max_relative = 1e-8);
    }

    #[test]
    fn rejects_nonpositive_constants() {
        let units = UnitSystem { c: 0.0, ..UnitSystem::default() };
        assert!(PhysicsContext::<f64>::from_units(units).is_err());
        let units = UnitSystem { planck_mass: Some(-1.0), ..UnitSystem::default() };
        assert!(PhysicsContext::<f64>::from_units(units).is_err());
    }

    #[test]
    fn coupling_examples() {
        let c = ctx();
        assert_eq!(coupling_g(3.0, 0.0, &c).unwrap(), 0.0);
        let ratio = coupling_g(4.0, 1.0, &c).unwrap() / coupling_g(1.0, 1.0, &c).unwrap();
        assert_relative_eq!(ratio, 0.5, epsilon = 1e-15);
        // by hand: sqrt(4 pi alpha) * sqrt(1 / (2 * 8 pi^3)) = sqrt(alpha / (4 pi^2))
        let by_hand = (c.alpha / (4.0 * std::f64::consts::PI.powi(2))).sqrt();
        assert_relative_eq!(coupling_g(1.0, 1.0, &c).unwrap(), by_hand, max_relative = 1e-14);
        assert!(coupling_g(0.0, 1.0, &c).is_err());
        assert!(coupling_g(-1.0, 1.0, &c).is_err());
    }

    #[test]
    fn single_charge_at_origin_is_real_positive() {
        let c = ctx();
        let cfg = ChargeConfiguration::single(Position3::origin(), 2.0).unwrap();
        let k = WaveVector::new(0.3, -0.2, 0.7);
        let lam = eta_eigenvalue(&k, &cfg, &c).unwrap();
        let expect = 2.0 * coupling_g(k.magnitude(), 1.0, &c).unwrap() / (c.hbar * c.omega(k.magnitude()));
        assert_relative_eq!(lam.re, expect, max_relative = 1e-14);
        assert_eq!(lam.im, 0.0);
    }

    #[test]
    fn two_charge_interference() {
        let c = ctx();
        let r = Position3::new(0.0, 0.0, 1.0);
        let single = ChargeConfiguration::single(Position3::origin(), 1.0).unwrap();
        let pair = ChargeConfiguration::new(
            "pair",
            vec![PointCharge { position: r, q: 1.0 }, PointCharge { position: -r, q: 1.0 }],
        )
        .unwrap();
        // k.r = 0: amplitudes add
        let k = WaveVector::new(1.0, 0.0, 0.0);
        let ratio = eta_eigenvalue(&k, &pair, &c).unwrap().norm() / eta_eigenvalue(&k, &single, &c).unwrap().norm();
        assert_relative_eq!(ratio, 2.0, epsilon = 1e-14);
        // k.r = pi/2: exp(-i pi/2) + exp(i pi/2) = 0
        let k = WaveVector::new(0.0, 0.0, std::f64::consts::FRAC_PI_2);
        assert!(
            eta_eigenvalue(&k, &pair, &c).unwrap().norm() < 1e-15 * eta_eigenvalue(&k, &single, &c).unwrap().norm()
        );
    }

    #[test]
    fn amplitude_and_photon_scaling() {
        let c = ctx();
        let cfg = ChargeConfiguration::single(Position3::new(0.1, 0.2, 0.3), 1.0).unwrap();
        let dir = WaveVector::new(0.6, 0.0, 0.8);
        let at = |k: f64| WaveVector::new(dir.kx * k, dir.ky * k, dir.kz * k);
        let l1 = eta_eigenvalue(&at(1.0), &cfg, &c).unwrap().norm();
        let l2 = eta_eigenvalue(&at(2.0), &cfg, &c).unwrap().norm();
        assert_relative_eq!(l2 / l1, 2f64.powf(-1.5), max_relative = 1e-13);
        let n1 = mode_mean_photons(&at(1.0), &cfg, &c).unwrap();
        let n2 = mode_mean_photons(&at(2.0), &cfg, &c).unwrap();
        assert_relative_eq!(n2 / n1, 0.125, max_relative = 1e-13);
    }

    #[test]
    fn configuration_validation() {
        assert!(ChargeConfiguration::<f64>::new("x", vec![]).is_err());
        assert!(ChargeConfiguration::single(Position3::origin(), 0.0).is_err());
        assert!(ChargeConfiguration::single(Position3::new(f64::NAN, 0.0, 0.0), 1.0).is_err());
    }

    #[test]
    fn zero_wave_vector_is_rejected() {
        let cfg = ChargeConfiguration::single(Position3::origin(), 1.0).unwrap();
        assert!(eta_eigenvalue(&WaveVector::new(0.0, 0.0, 0.0), &cfg, &ctx()).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let c = PhysicsContext::<f32>::natural();
        let g = coupling_g(1.0f32, 1.0, &c).unwrap();
        assert!((g as f64 - coupling_g(1.0, 1.0, &ctx()).unwrap()).abs() < 1e-6);
    }
}
