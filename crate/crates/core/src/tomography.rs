//! Open-loop tomography of two charges, each superposed across a left and
//! a right region.
//!
//! Each of the four charge configurations drags its own coherent state of
//! the scalar modes along. Tracing the field out leaves a 4×4 charge
//! density matrix whose off-diagonal elements are the Coulomb phases times
//! the overlaps of those field states; the exchange observable `C_RL`
//! reads the one-left-one-right coherence off that matrix.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::integrals::{one_minus_sinc, shell_weight};
use crate::linalg::{hermitian_eigenvalues, SquareMatrix};
use crate::physics::{PhysicsContext, Position3};
use crate::quadrature::{CutoffPair, RadialModeGrid};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Which side each charge occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConfigurationIndex {
    ArBr,
    AlBl,
    ArBl,
    AlBr,
}

impl ConfigurationIndex {
    pub const ALL: [ConfigurationIndex; 4] =
        [ConfigurationIndex::ArBr, ConfigurationIndex::AlBl, ConfigurationIndex::ArBl, ConfigurationIndex::AlBr];

    /// Configurations with exactly one charge on each side.
    pub const ONE_LEFT_ONE_RIGHT: [ConfigurationIndex; 2] = [ConfigurationIndex::ArBl, ConfigurationIndex::AlBr];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn sides(self) -> (Side, Side) {
        match self {
            ConfigurationIndex::ArBr => (Side::Right, Side::Right),
            ConfigurationIndex::AlBl => (Side::Left, Side::Left),
            ConfigurationIndex::ArBl => (Side::Right, Side::Left),
            ConfigurationIndex::AlBr => (Side::Left, Side::Right),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ConfigurationIndex::ArBr => "AR,BR",
            ConfigurationIndex::AlBl => "AL,BL",
            ConfigurationIndex::ArBl => "AR,BL",
            ConfigurationIndex::AlBr => "AL,BR",
        }
    }
}

/// Plane `normal . r = offset`; the left region is `normal . r < offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionPlane<T> {
    pub normal: Position3<T>,
    pub offset: T,
}

impl<T: Real> PartitionPlane<T> {
    pub fn side_of(&self, r: &Position3<T>) -> Option<Side> {
        let s = self.normal.dot(r) - self.offset;
        if s < T::zero() {
            Some(Side::Left)
        } else if s > T::zero() {
            Some(Side::Right)
        } else {
            None
        }
    }
}

impl<T: Real> Default for PartitionPlane<T> {
    fn default() -> Self {
        Self { normal: Position3::new(T::one(), T::zero(), T::zero()), offset: T::zero() }
    }
}

/// Probe `A` and reference `B`, each superposed across left and right.
///
/// Positions in `r0`, charges in `e`, interaction time in `r0 / c`.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyScenario<T> {
    pub r_al: Position3<T>,
    pub r_ar: Position3<T>,
    pub r_bl: Position3<T>,
    pub r_br: Position3<T>,
    pub q_a: T,
    pub q_b: T,
    pub cutoffs: CutoffPair<T>,
    pub grid: RadialModeGrid<T>,
    pub interaction_time: T,
    pub partition: PartitionPlane<T>,
    pub ctx: PhysicsContext<T>,
}

impl<T: Real> TomographyScenario<T> {
    /// Charge `A` at height `+height/2` and `B` at `-height/2`, each with
    /// arms at `x = ±arm/2`, default partition plane `x = 0`.
    pub fn symmetric(arm: T, height: T, q_a: T, q_b: T, interaction_time: T, grid: RadialModeGrid<T>) -> Result<Self> {
        let (x, y) = (arm / T::lit(2.0), height / T::lit(2.0));
        let scn = Self {
            r_al: Position3::new(-x, y, T::zero()),
            r_ar: Position3::new(x, y, T::zero()),
            r_bl: Position3::new(-x, -y, T::zero()),
            r_br: Position3::new(x, -y, T::zero()),
            q_a,
            q_b,
            cutoffs: grid.cutoffs(),
            grid,
            interaction_time,
            partition: PartitionPlane::default(),
            ctx: PhysicsContext::natural(),
        };
        scn.validate()?;
        Ok(scn)
    }

    pub fn position(&self, charge_a: bool, side: Side) -> Position3<T> {
        match (charge_a, side) {
            (true, Side::Left) => self.r_al,
            (true, Side::Right) => self.r_ar,
            (false, Side::Left) => self.r_bl,
            (false, Side::Right) => self.r_br,
        }
    }

    /// Positions of `A` and `B` in configuration `c`.
    pub fn positions(&self, c: ConfigurationIndex) -> (Position3<T>, Position3<T>) {
        let (a, b) = c.sides();
        (self.position(true, a), self.position(false, b))
    }

    /// Both paths of each charge rejoined at one point (closed loop).
    pub fn is_rejoined(&self) -> bool {
        self.r_al == self.r_ar && self.r_bl == self.r_br
    }

    /// `|r_AL - r_AR|`.
    pub fn probe_arm(&self) -> T {
        self.r_al.distance(&self.r_ar)
    }

    /// Scales each charge's left/right arm about its own midpoint.
    pub fn with_arm_scale(&self, scale: T) -> Result<Self> {
        let half = T::lit(0.5);
        let stretch = |l: Position3<T>, r: Position3<T>| {
            let mid = (l + r) * half;
            (mid + (l - mid) * scale, mid + (r - mid) * scale)
        };
        let mut out = self.clone();
        (out.r_al, out.r_ar) = stretch(self.r_al, self.r_ar);
        (out.r_bl, out.r_br) = stretch(self.r_bl, self.r_br);
        out.validate()?;
        Ok(out)
    }

    pub fn with_cutoffs(&self, cutoffs: CutoffPair<T>) -> Result<Self> {
        let mut out = self.clone();
        out.grid = RadialModeGrid::log_uniform(cutoffs, self.grid.len(), self.grid.scheme())?;
        out.cutoffs = cutoffs;
        out.validate()?;
        Ok(out)
    }

    /// Rigid motion `r -> R r + t` of all four positions (and the partition).
    pub fn transformed(&self, rotation: [[T; 3]; 3], shift: Position3<T>) -> Self {
        let rot = |r: Position3<T>| {
            Position3::new(
                rotation[0][0] * r.x + rotation[0][1] * r.y + rotation[0][2] * r.z,
                rotation[1][0] * r.x + rotation[1][1] * r.y + rotation[1][2] * r.z,
                rotation[2][0] * r.x + rotation[2][1] * r.y + rotation[2][2] * r.z,
            )
        };
        let normal = rot(self.partition.normal);
        let mut out = self.clone();
        out.r_al = rot(self.r_al) + shift;
        out.r_ar = rot(self.r_ar) + shift;
        out.r_bl = rot(self.r_bl) + shift;
        out.r_br = rot(self.r_br) + shift;
        out.partition = PartitionPlane { normal, offset: self.partition.offset + normal.dot(&shift) };
        out
    }

    /// Checks the scenario invariants. A fully rejoined geometry (both
    /// charges' paths closed) is accepted as the closed-loop limit.
    pub fn validate(&self) -> Result<()> {
        let all = [self.r_al, self.r_ar, self.r_bl, self.r_br];
        if all.iter().any(|r| !r.is_finite()) {
            return Err(Error::config("scenario positions must be finite"));
        }
        if !(self.q_a.is_finite() && self.q_b.is_finite()) {
            return Err(Error::config("scenario charges must be finite"));
        }
        if !(self.interaction_time >= T::zero() && self.interaction_time.is_finite()) {
            return Err(Error::config("interaction time must be finite and nonnegative"));
        }
        self.grid.ensure_covers(&self.cutoffs)?;
        if self.is_rejoined() {
            if self.r_al == self.r_bl {
                return Err(Error::config("charges A and B cannot coincide"));
            }
            return Ok(());
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if all[i] == all[j] {
                    return Err(Error::config("the four scenario positions must be distinct"));
                }
            }
        }
        let sides = [Side::Left, Side::Right, Side::Left, Side::Right];
        for (r, want) in all.iter().zip(sides) {
            if self.partition.side_of(r) != Some(want) {
                return Err(Error::config(format!(
                    "position {r:?} is not strictly on the {want:?} side of the partition"
                )));
            }
        }
        Ok(())
    }
}

/// Coulomb phase `-q_i q_j T / (4 pi eps0 hbar |r_i - r_j|)` accumulated
/// by a pair of static charges over the interaction time.
pub fn coulomb_phase<T: Real>(
    r_i: &Position3<T>,
    r_j: &Position3<T>,
    q_i: T,
    q_j: T,
    interaction_time: T,
    ctx: &PhysicsContext<T>,
) -> Result<T> {
    let d = r_i.distance(r_j);
    if d == T::zero() {
        return Err(Error::domain("Coulomb phase of coincident charges"));
    }
    if !(interaction_time >= T::zero()) {
        return Err(Error::domain(format!("interaction time must be nonnegative, got {interaction_time}")));
    }
    let energy = ctx.charge(q_i) * ctx.charge(q_j) / (T::lit(4.0) * T::PI() * ctx.eps0 * d * ctx.r0);
    let time = interaction_time * ctx.r0 / ctx.c;
    Ok(-energy * time / ctx.hbar)
}

fn configuration_phase<T: Real>(scn: &TomographyScenario<T>, c: ConfigurationIndex) -> Result<T> {
    let (ra, rb) = scn.positions(c);
    coulomb_phase(&ra, &rb, scn.q_a, scn.q_b, scn.interaction_time, &scn.ctx)
}

/// Overlaps `⟨λ_c|λ_c'⟩` of the field states of the four configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldGram<T> {
    matrix: SquareMatrix<Complex<T>>,
    distances: SquareMatrix<T>,
}

impl<T: Real> FieldGram<T> {
    pub fn get(&self, c: ConfigurationIndex, d: ConfigurationIndex) -> Complex<T> {
        self.matrix[(c.index(), d.index())]
    }

    /// `∫ |λ_c - λ_c'|² d³k`.
    pub fn distance2(&self, c: ConfigurationIndex, d: ConfigurationIndex) -> T {
        self.distances[(c.index(), d.index())]
    }

    pub fn matrix(&self) -> &SquareMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn min_eigenvalue(&self) -> T {
        hermitian_eigenvalues(&self.matrix)[0]
    }
}

/// Signed point charges whose amplitude sum is `λ_c - λ_c'`.
fn difference_sources<T: Real>(
    scn: &TomographyScenario<T>,
    c: ConfigurationIndex,
    d: ConfigurationIndex,
) -> [(Position3<T>, T); 4] {
    let (ca, cb) = scn.positions(c);
    let (da, db) = scn.positions(d);
    [(ca, scn.q_a), (cb, scn.q_b), (da, -scn.q_a), (db, -scn.q_b)]
}

/// Pairwise terms `(separation, -w_j w_l)` of the angular average of
/// `|Σ_j w_j e^{-i k.r_j}|²`, valid because the weights sum to zero.
fn pair_terms<T: Real>(sources: &[(Position3<T>, T)]) -> Result<Vec<(T, T)>> {
    let net = sources.iter().fold(T::zero(), |acc, s| acc + s.1);
    let scale = sources.iter().fold(T::zero(), |acc, s| acc + s.1.abs());
    // the divergent self terms cancel only for a neutral difference
    if net.abs() > T::lit(1e-12) * scale {
        return Err(Error::domain(format!("self-energy does not cancel: net charge difference {net}")));
    }
    let mut terms = Vec::new();
    for j in 0..sources.len() {
        for l in (j + 1)..sources.len() {
            let d = sources[j].0.distance(&sources[l].0);
            let coef = -sources[j].1 * sources[l].1;
            if d > T::zero() && coef != T::zero() {
                terms.push((d, coef));
            }
        }
    }
    Ok(terms)
}

/// Gram matrix of the four constrained field states.
///
/// Per mode `log⟨λ_c|λ_c'⟩ = -½|λ_c - λ_c'|² + i Im(conj(λ_c) λ_c')`. The
/// imaginary part is odd under `k -> -k` and integrates to zero over each
/// spherical shell, so the multi-mode overlap is `exp(-½ D²)` with
/// `D² = ∫ |λ_c - λ_c'|² d³k` reduced to pairwise `1 - sinc` terms.
pub fn field_gram<T: Real>(scn: &TomographyScenario<T>) -> Result<FieldGram<T>> {
    scn.validate()?;
    let mut distances = SquareMatrix::from_fn(4, |_, _| T::zero());
    for c in ConfigurationIndex::ALL {
        for d in ConfigurationIndex::ALL {
            if c.index() >= d.index() {
                continue;
            }
            let terms = pair_terms(&difference_sources(scn, c, d))?;
            let d2 = if terms.is_empty() {
                T::zero()
            } else {
                scn.grid.integrate(|k| {
                    let s = terms.iter().fold(T::zero(), |acc, &(sep, w)| acc + w * one_minus_sinc(k * sep));
                    shell_weight(k, &scn.ctx) * s
                })
            };
            distances[(c.index(), d.index())] = d2;
            distances[(d.index(), c.index())] = d2;
        }
    }
    let half = T::lit(0.5);
    let matrix = distances.map(|d2| Complex::new((-half * d2).exp(), T::zero()));
    Ok(FieldGram { matrix, distances })
}

/// Reduced charge state after tracing out the field.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeDensityMatrix<T> {
    matrix: SquareMatrix<Complex<T>>,
}

impl<T: Real> ChargeDensityMatrix<T> {
    pub fn get(&self, c: ConfigurationIndex, d: ConfigurationIndex) -> Complex<T> {
        self.matrix[(c.index(), d.index())]
    }

    pub fn matrix(&self) -> &SquareMatrix<Complex<T>> {
        &self.matrix
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        hermitian_eigenvalues(&self.matrix)
    }

    pub fn purity(&self) -> T {
        let mut p = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                p = p + (self.matrix[(i, j)] * self.matrix[(j, i)]).re;
            }
        }
        p
    }

    /// Hermitian, unit trace and positive semidefinite within `tol`.
    pub fn is_physical(&self, tol: T) -> bool {
        self.matrix.hermiticity_defect() <= tol
            && (self.trace() - T::one()).abs() <= tol
            && self.matrix.trace().im.abs() <= tol
            && self.eigenvalues()[0] >= -tol
    }
}

/// `ρ[c][c'] = ¼ exp(i(φ_c - φ_c')) ⟨λ_c'|λ_c⟩` for the equal-weight
/// superposition of the four configurations.
pub fn build_state_and_reduce<T: Real>(scn: &TomographyScenario<T>) -> Result<ChargeDensityMatrix<T>> {
    let gram = field_gram(scn)?;
    reduce_with_gram(scn, &gram)
}

fn reduce_with_gram<T: Real>(scn: &TomographyScenario<T>, gram: &FieldGram<T>) -> Result<ChargeDensityMatrix<T>> {
    let mut phases = [T::zero(); 4];
    for c in ConfigurationIndex::ALL {
        phases[c.index()] = configuration_phase(scn, c)?;
    }
    let quarter = T::lit(0.25);
    let matrix =
        SquareMatrix::from_fn(4, |i, j| Complex::from_polar(quarter, phases[i] - phases[j]) * gram.matrix[(j, i)]);
    Ok(ChargeDensityMatrix { matrix })
}

/// `⟨C_RL⟩` conditioned on one charge left and one right.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeExpectation<T> {
    /// `2 Re ρ[AR,BL][AL,BR] / w`, in `[-1, 1]`.
    pub conditional: T,
    /// `w = ρ[AR,BL][AR,BL] + ρ[AL,BR][AL,BR]`.
    pub subspace_weight: T,
}

/// Expectation of the exchange observable `C_RL`, which swaps `|AR,BL⟩`
/// and `|AL,BR⟩` and annihilates the other two configurations.
pub fn expect_c_rl<T: Real>(rho: &ChargeDensityMatrix<T>) -> Result<ExchangeExpectation<T>> {
    use ConfigurationIndex::{AlBr, ArBl};
    let w = rho.get(ArBl, ArBl).re + rho.get(AlBr, AlBr).re;
    if !(w > T::zero()) {
        return Err(Error::UndefinedConditional);
    }
    let coherence = rho.get(ArBl, AlBr).re + rho.get(AlBr, ArBl).re;
    Ok(ExchangeExpectation { conditional: coherence / w, subspace_weight: w })
}

/// `|⟨λ_AR,BL|λ_AL,BR⟩|`, the visibility the open-loop protocol extracts.
pub fn probe_visibility<T: Real>(scn: &TomographyScenario<T>) -> Result<T> {
    Ok(field_gram(scn)?.get(ConfigurationIndex::ArBl, ConfigurationIndex::AlBr).norm())
}

/// Off-diagonal element of the one-left-one-right block, split into the
/// field-overlap modulus/argument and the Coulomb phase difference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport<T> {
    pub modulus: T,
    pub argument: T,
    /// `φ_{AR,BL} - φ_{AL,BR}`.
    pub relative_coulomb_phase: T,
    /// The two one-left-one-right configurations have different charge
    /// separations, so the element carries a nonzero Coulomb phase.
    pub asymmetric: bool,
}

pub fn probe_report<T: Real>(scn: &TomographyScenario<T>) -> Result<ProbeReport<T>> {
    probe_from_gram(scn, &field_gram(scn)?)
}

fn probe_from_gram<T: Real>(scn: &TomographyScenario<T>, gram: &FieldGram<T>) -> Result<ProbeReport<T>> {
    use ConfigurationIndex::{AlBr, ArBl};
    let g = gram.get(ArBl, AlBr);
    let d1 = scn.r_ar.distance(&scn.r_bl);
    let d2 = scn.r_al.distance(&scn.r_br);
    Ok(ProbeReport {
        modulus: g.norm(),
        argument: g.arg(),
        relative_coulomb_phase: configuration_phase(scn, ArBl)? - configuration_phase(scn, AlBr)?,
        asymmetric: (d1 - d2).abs() > T::lit(1e-12) * d1.max(d2),
    })
}

/// Von Neumann entropy (bits) of a two-branch state whose branches carry
/// field states with overlap modulus `overlap`.
pub fn entropy_from_overlap<T: Real>(overlap: T) -> T {
    let v = overlap.abs().min(T::one());
    let half = T::lit(0.5);
    [half * (T::one() + v), half * (T::one() - v)]
        .iter()
        .filter(|&&p| p > T::zero())
        .fold(T::zero(), |acc, &p| acc - p * p.log2())
}

/// Entanglement (bits) between the field and probe `A` superposed across
/// `r_AL`, `r_AR` while the reference stays at `r_BR`.
pub fn probe_entanglement_entropy<T: Real>(scn: &TomographyScenario<T>) -> Result<T> {
    let g = field_gram(scn)?;
    Ok(entropy_from_overlap(g.get(ConfigurationIndex::ArBr, ConfigurationIndex::AlBr).norm()))
}

/// Everything the open-loop protocol reports for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyOutcome<T> {
    pub gram: FieldGram<T>,
    pub density: ChargeDensityMatrix<T>,
    pub exchange: ExchangeExpectation<T>,
    pub probe: ProbeReport<T>,
    pub entropy_bits: T,
}

/// Evaluates the full protocol with a single Gram computation.
pub fn evaluate<T: Real>(scn: &TomographyScenario<T>) -> Result<TomographyOutcome<T>> {
    let gram = field_gram(scn)?;
    let density = reduce_with_gram(scn, &gram)?;
    let exchange = expect_c_rl(&density)?;
    let probe = probe_from_gram(scn, &gram)?;
    let entropy_bits = entropy_from_overlap(gram.get(ConfigurationIndex::ArBr, ConfigurationIndex::AlBr).norm());
    Ok(TomographyOutcome { gram, density, exchange, probe, entropy_bits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use ConfigurationIndex::*;

    fn grid() -> RadialModeGrid<f64> {
        RadialModeGrid::log_uniform(CutoffPair::new(1e-4, 1.0).unwrap(), 512, Default::default()).unwrap()
    }

    fn scenario(q: f64) -> TomographyScenario<f64> {
        TomographyScenario::symmetric(40.0, 20.0, q, q, 5.0, grid()).unwrap()
    }

    #[test]
    fn configuration_enumeration() {
        assert_eq!(ConfigurationIndex::ALL.len(), 4);
        for c in ConfigurationIndex::ONE_LEFT_ONE_RIGHT {
            let (a, b) = c.sides();
            assert_ne!(a, b);
        }
        assert_eq!(ArBl.label(), "AR,BL");
    }

    #[test]
    fn coulomb_phase_examples() {
        let ctx = PhysicsContext::natural();
        let (o, x) = (Position3::origin(), Position3::new(1.0, 0.0, 0.0));
        assert_eq!(coulomb_phase(&o, &x, 1.0, 1.0, 0.0, &ctx).unwrap(), 0.0);
        let p1 = coulomb_phase(&o, &x, 1.0, 1.0, 1.0, &ctx).unwrap();
        assert_relative_eq!(p1, -ctx.alpha, max_relative = 1e-14);
        let p2 = coulomb_phase(&o, &(x * 2.0), 1.0, 1.0, 1.0, &ctx).unwrap();
        assert_relative_eq!(p2 / p1, 0.5, max_relative = 1e-14);
        assert!(coulomb_phase(&o, &o, 1.0, 1.0, 1.0, &ctx).is_err());
        assert!(coulomb_phase(&o, &x, 1.0, 1.0, -1.0, &ctx).is_err());
    }

    #[test]
    fn uncoupled_gram_is_all_ones() {
        let g = field_gram(&scenario(0.0)).unwrap();
        for c in ConfigurationIndex::ALL {
            for d in ConfigurationIndex::ALL {
                assert_eq!(g.get(c, d), Complex::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn rejoined_geometry_is_fully_coherent() {
        let mut s = scenario(3.0);
        s.r_al = s.r_ar;
        s.r_bl = s.r_br;
        s.validate().unwrap();
        let g = field_gram(&s).unwrap();
        assert!(ConfigurationIndex::ALL
            .iter()
            .all(|&c| ConfigurationIndex::ALL.iter().all(|&d| g.get(c, d) == Complex::new(1.0, 0.0))));
        assert_eq!(probe_visibility(&s).unwrap(), 1.0);
    }

    #[test]
    fn scenario_validation() {
        let mut s = scenario(1.0);
        s.r_al = s.r_bl;
        assert!(s.validate().is_err());
        let mut s = scenario(1.0);
        s.r_al = Position3::new(5.0, 10.0, 0.0);
        assert!(s.validate().is_err(), "AL on the right side");
        let mut s = scenario(1.0);
        s.interaction_time = -1.0;
        assert!(s.validate().is_err());
        let mut s = scenario(1.0);
        s.cutoffs = CutoffPair::new(1e-3, 1.0).unwrap();
        assert!(s.validate().is_err());
    }

    #[test]
    fn gram_invariants() {
        let g = field_gram(&scenario(5.0)).unwrap();
        assert!(g.matrix().hermiticity_defect() == 0.0);
        for c in ConfigurationIndex::ALL {
            assert_eq!(g.get(c, c), Complex::new(1.0, 0.0));
            for d in ConfigurationIndex::ALL {
                assert!(g.get(c, d).norm() <= 1.0);
            }
        }
        assert!(g.min_eigenvalue() > -1e-12);
    }

    #[test]
    fn uncoupled_state_is_pure_uniform_superposition() {
        let rho = build_state_and_reduce(&TomographyScenario { interaction_time: 0.0, ..scenario(0.0) }).unwrap();
        assert_relative_eq!(rho.purity(), 1.0, epsilon = 1e-14);
        let ev = rho.eigenvalues();
        assert_relative_eq!(ev[3], 1.0, epsilon = 1e-12);
        let e = expect_c_rl(&rho).unwrap();
        assert_relative_eq!(e.conditional, 1.0, epsilon = 1e-14);
        assert_relative_eq!(e.subspace_weight, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn strongly_decohered_state_is_diagonal() {
        let s = TomographyScenario::symmetric(400.0, 200.0, 137.0, 137.0, 0.0, grid()).unwrap();
        let rho = build_state_and_reduce(&s).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.25 } else { 0.0 };
                assert!((rho.matrix()[(i, j)] - Complex::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn exchange_expectation_tracks_visibility_and_phase() {
        // asymmetric B arms produce a relative Coulomb phase
        let mut s = scenario(2.0);
        s.r_bl = Position3::new(-35.0, -10.0, 0.0);
        s.interaction_time = 400.0;
        let out = evaluate(&s).unwrap();
        assert!(out.probe.asymmetric);
        let want = out.probe.modulus * out.probe.relative_coulomb_phase.cos();
        assert_relative_eq!(out.exchange.conditional, want, epsilon = 1e-12);
        assert!(out.exchange.conditional.abs() <= probe_visibility(&s).unwrap() + 1e-15);
        assert!(out.density.is_physical(1e-12));
    }

    #[test]
    fn zero_weight_subspace_is_undefined() {
        let rho = ChargeDensityMatrix {
            matrix: SquareMatrix::from_fn(4, |i, j| Complex::new(if i == j && i < 2 { 0.5 } else { 0.0 }, 0.0)),
        };
        assert_eq!(expect_c_rl(&rho), Err(Error::UndefinedConditional));
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_from_overlap(1.0), 0.0);
        assert_relative_eq!(entropy_from_overlap(0.0), 1.0, epsilon = 1e-15);
        let v = (-0.5f64).exp();
        let (p, q) = ((1.0 + v) / 2.0, (1.0 - v) / 2.0);
        assert_relative_eq!(entropy_from_overlap(v), -p * p.log2() - q * q.log2(), max_relative = 1e-14);
    }

    #[test]
    fn self_energy_cancellation_is_enforced() {
        let o = Position3::origin();
        assert!(pair_terms(&[(o, 1.0), (Position3::new(1.0, 0.0, 0.0), -0.5)]).is_err());
        assert!(pair_terms(&[(o, 1.0), (Position3::new(1.0, 0.0, 0.0), -1.0)]).is_ok());
    }

    #[test]
    fn arm_scaling_preserves_midpoints() {
        let s = scenario(1.0).with_arm_scale(2.0).unwrap();
        assert_relative_eq!(s.probe_arm(), 80.0, epsilon = 1e-12);
        assert_relative_eq!(s.r_bl.distance(&s.r_br), 80.0, epsilon = 1e-12);
        assert!(scenario(1.0).with_arm_scale(0.0).unwrap().is_rejoined());
        assert!(scenario(1.0).with_arm_scale(-1.0).is_err());
    }
}
