//! Charge thresholds beyond which a superposition is locally undetectable.

use std::fmt;
use std::path::Path;

use ghostsim::config::{parse_geometry, parse_units, ConfigFile, GeometrySpec};
use ghostsim::integrals::{total_photon_number, visibility};
use ghostsim::Context;
use serde::Serialize;

use crate::{as_config, read_config, Result};

/// The charge the text quotes, in units of `e`.
pub const NOMINAL_CHARGE: f64 = 137.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub delta_r: f64,
    pub ln_delta_r: f64,
    pub k_min: f64,
    pub k_max: f64,
    pub q: f64,
    pub n_q: f64,
    pub n_e: f64,
    pub n_nominal: f64,
    pub visibility_nominal: f64,
    /// `Q*` with `n(Q*) = 1`; `None` when no charge decoheres (unbounded).
    pub q_unit_photon: Option<f64>,
    /// `Q*` with visibility `1/2`, i.e. `n(Q*) = 2 ln 2`.
    pub q_half_visibility: Option<f64>,
    pub nominal_charge: f64,
    pub inverse_alpha: f64,
    /// `e/sqrt(α)`, the charge at which `α (Q/e)²` reaches one.
    pub inverse_sqrt_alpha: f64,
}

/// `n` is exactly quadratic in `Q`, so both thresholds follow from `n(e)`.
pub fn report_threshold(spec: &GeometrySpec<f64>, ctx: &Context) -> Result<ThresholdReport> {
    let cut = spec.cutoffs();
    let n_of = |q: f64| total_photon_number(&spec.geometry, q, &cut, &spec.grid, ctx);
    let n_e = n_of(1.0)?;
    let n_nominal = n_of(NOMINAL_CHARGE)?;
    let bounded = spec.q != 0.0 && n_e > 0.0;
    let delta_r = spec.geometry.delta_r();
    Ok(ThresholdReport {
        delta_r,
        ln_delta_r: delta_r.ln(),
        k_min: cut.k_min(),
        k_max: cut.k_max(),
        q: spec.q,
        n_q: n_of(spec.q)?,
        n_e,
        n_nominal,
        visibility_nominal: visibility(n_nominal)?,
        q_unit_photon: bounded.then(|| (1.0 / n_e).sqrt()),
        q_half_visibility: bounded.then(|| (2.0 * std::f64::consts::LN_2 / n_e).sqrt()),
        nominal_charge: NOMINAL_CHARGE,
        inverse_alpha: 1.0 / ctx.alpha,
        inverse_sqrt_alpha: ctx.alpha.sqrt().recip(),
    })
}

pub fn load(path: &Path) -> Result<(GeometrySpec<f64>, Context)> {
    from_config(&read_config(path)?)
}

pub fn from_config(cfg: &ConfigFile) -> Result<(GeometrySpec<f64>, Context)> {
    as_config(cfg.expect_sections(&["units", "geometry"]))?;
    let ctx = as_config(parse_units(cfg.section("units")))?;
    let spec = as_config(cfg.require("geometry").and_then(parse_geometry))?;
    Ok((spec, ctx))
}

impl fmt::Display for ThresholdReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let charge = |q: Option<f64>| q.map_or("unbounded".to_string(), |q| format!("{q:.6} e"));
        writeln!(f, "delta_r                     {:.6e} r0", self.delta_r)?;
        writeln!(f, "ln(delta_r/r0)              {:.6}", self.ln_delta_r)?;
        writeln!(f, "cutoffs                     [{:.3e}, {:.3e}] / r0", self.k_min, self.k_max)?;
        writeln!(f, "n(q = {:.3} e)              {:.6e}", self.q, self.n_q)?;
        writeln!(f, "n(e)                        {:.6e}  (alpha = {:.6e})", self.n_e, 1.0 / self.inverse_alpha)?;
        writeln!(f, "n({} e)                    {:.6e}", self.nominal_charge, self.n_nominal)?;
        writeln!(f, "visibility({} e)           {:.6e}", self.nominal_charge, self.visibility_nominal)?;
        writeln!(f, "Q* at n = 1                 {}", charge(self.q_unit_photon))?;
        writeln!(f, "Q* at visibility = 1/2      {}", charge(self.q_half_visibility))?;
        writeln!(f, "candidate e/alpha           {:.6} e", self.inverse_alpha)?;
        write!(f, "candidate e/sqrt(alpha)     {:.6} e", self.inverse_sqrt_alpha)
    }
}
