use ghostsim::physics::{
    coupling_g, eta_eigenvalue, mode_mean_photons, ChargeConfiguration, PhysicsContext, PointCharge, Position3,
    WaveVector,
};
use num_complex::Complex64;
use proptest::prelude::*;

fn pos() -> impl Strategy<Value = Position3<f64>> {
    (-20.0f64..20.0, -20.0f64..20.0, -20.0f64..20.0).prop_map(|(x, y, z)| Position3::new(x, y, z))
}

fn kvec() -> impl Strategy<Value = WaveVector<f64>> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0)
        .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-6)
        .prop_map(|(x, y, z)| WaveVector::new(x, y, z))
}

fn charges() -> impl Strategy<Value = ChargeConfiguration<f64>> {
    prop::collection::vec((pos(), prop_oneof![-5.0f64..-0.1, 0.1f64..5.0]), 1..5).prop_map(|v| {
        ChargeConfiguration::new("random", v.into_iter().map(|(position, q)| PointCharge { position, q }).collect())
            .unwrap()
    })
}

proptest! {
    #[test]
    fn amplitude_is_conjugated_by_reversing_k(k in kvec(), cfg in charges()) {
        let ctx = PhysicsContext::natural();
        let a = eta_eigenvalue(&k, &cfg, &ctx).unwrap();
        let b = eta_eigenvalue(&k.reversed(), &cfg, &ctx).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-14 * a.norm().max(1e-300));
    }

    #[test]
    fn photons_are_translation_invariant(k in kvec(), cfg in charges(), shift in pos()) {
        let ctx = PhysicsContext::natural();
        let n0 = mode_mean_photons(&k, &cfg, &ctx).unwrap();
        let n1 = mode_mean_photons(&k, &cfg.translated(shift), &ctx).unwrap();
        // cancellation between charges can make n0 tiny; compare on the scale of the largest term
        let scale = cfg.charges().iter().map(|c| c.q.abs()).sum::<f64>() * coupling_g(k.magnitude(), 1.0, &ctx).unwrap() / ctx.omega(k.magnitude());
        prop_assert!((n0 - n1).abs() <= 1e-12 * scale * scale);
    }

    #[test]
    fn photons_match_brute_force_sum(k in kvec(), cfg in charges()) {
        let ctx = PhysicsContext::natural();
        let kk = k.magnitude();
        let mut sum = Complex64::new(0.0, 0.0);
        for c in cfg.charges() {
            let g = coupling_g(kk, c.q, &ctx).unwrap();
            let phase = k.kx * c.position.x + k.ky * c.position.y + k.kz * c.position.z;
            sum += Complex64::new(phase.cos(), -phase.sin()) * (g / (ctx.hbar * ctx.c * kk));
        }
        let n = mode_mean_photons(&k, &cfg, &ctx).unwrap();
        prop_assert!((n - sum.norm_sqr()).abs() <= 1e-12 * sum.norm_sqr().max(1e-300) + 1e-20);
    }
}

#[test]
fn coupling_ratio_scales_as_q2_over_k3_over_ten_decades() {
    let ctx: PhysicsContext<f64> = PhysicsContext::natural();
    let reference = coupling_g(1.0, 1.0, &ctx).unwrap().powi(2) / ctx.omega(1.0).powi(2);
    for i in 0..=50 {
        let k = 10f64.powf(-5.0 + 0.2 * i as f64);
        for &q in &[0.5, 1.0, 3.0, 137.0] {
            let g = coupling_g(k, q, &ctx).unwrap();
            let got = g * g / (ctx.hbar * ctx.omega(k)).powi(2);
            let want = reference * q * q / k.powi(3);
            assert!(((got - want) / want).abs() < 1e-12, "k={k} q={q}");
        }
    }
}
