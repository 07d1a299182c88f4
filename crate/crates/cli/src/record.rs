use ghostsim::integrals::{charge_decoherence_scaling, mass_decoherence_scaling, total_photon_number, visibility};
use ghostsim::tomography::{entropy_from_overlap, evaluate, ConfigurationIndex};
use serde::Serialize;

use crate::{Fixed, Result, Setup};

/// One evaluated point. Optional fields only exist for two-charge scenarios.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    /// Value of the swept parameter (equal to one of the columns below).
    pub axis_value: f64,
    /// Separation of the superposed branches (the probe's arm for scenarios).
    pub delta_r: f64,
    /// Superposed charge (the probe `A` for scenarios).
    pub q: f64,
    pub q_b: Option<f64>,
    pub k_min: f64,
    pub k_max: f64,
    pub mass: f64,
    pub n: f64,
    pub visibility: f64,
    pub charge_scaling: f64,
    pub mass_scaling: f64,
    pub entropy_bits: f64,
    pub c_rl: Option<f64>,
    pub subspace_weight: Option<f64>,
    pub coulomb_phase: Option<f64>,
}

impl ResultRecord {
    pub const FIELDS: [&'static str; 15] = [
        "axis_value",
        "delta_r",
        "q",
        "q_b",
        "k_min",
        "k_max",
        "mass",
        "n",
        "visibility",
        "charge_scaling",
        "mass_scaling",
        "entropy_bits",
        "c_rl",
        "subspace_weight",
        "coulomb_phase",
    ];

    pub fn values(&self) -> [Option<f64>; 15] {
        [
            Some(self.axis_value),
            Some(self.delta_r),
            Some(self.q),
            self.q_b,
            Some(self.k_min),
            Some(self.k_max),
            Some(self.mass),
            Some(self.n),
            Some(self.visibility),
            Some(self.charge_scaling),
            Some(self.mass_scaling),
            Some(self.entropy_bits),
            self.c_rl,
            self.subspace_weight,
            self.coulomb_phase,
        ]
    }

    /// CSV fields with 17 significant digits; absent values are empty.
    pub fn csv_fields(&self) -> Vec<String> {
        self.values().iter().map(|v| v.map(|x| format!("{x:.16e}")).unwrap_or_default()).collect()
    }

    pub fn evaluate(setup: &Setup, mass: f64, axis_value: f64) -> Result<Self> {
        let ctx = &setup.ctx;
        let mass_scaling = mass_decoherence_scaling(mass, ctx)?;
        match &setup.fixed {
            Fixed::Geometry(g) => {
                let cut = g.cutoffs();
                let n = total_photon_number(&g.geometry, g.q, &cut, &g.grid, ctx)?;
                let v = visibility(n)?;
                Ok(Self {
                    axis_value,
                    delta_r: g.geometry.delta_r(),
                    q: g.q,
                    q_b: None,
                    k_min: cut.k_min(),
                    k_max: cut.k_max(),
                    mass,
                    n,
                    visibility: v,
                    charge_scaling: charge_decoherence_scaling(g.q.abs(), ctx)?,
                    mass_scaling,
                    entropy_bits: entropy_from_overlap(v),
                    c_rl: None,
                    subspace_weight: None,
                    coulomb_phase: None,
                })
            }
            Fixed::Scenario(s) => {
                use ConfigurationIndex::{AlBr, ArBl};
                let out = evaluate(s)?;
                let n = out.gram.distance2(ArBl, AlBr);
                Ok(Self {
                    axis_value,
                    delta_r: s.probe_arm(),
                    q: s.q_a,
                    q_b: Some(s.q_b),
                    k_min: s.cutoffs.k_min(),
                    k_max: s.cutoffs.k_max(),
                    mass,
                    n,
                    visibility: visibility(n)?,
                    charge_scaling: charge_decoherence_scaling(s.q_a.abs(), ctx)?,
                    mass_scaling,
                    entropy_bits: out.entropy_bits,
                    c_rl: Some(out.exchange.conditional),
                    subspace_weight: Some(out.exchange.subspace_weight),
                    coulomb_phase: Some(out.probe.relative_coulomb_phase),
                })
            }
        }
    }
}
