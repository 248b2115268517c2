use std::f64::consts::PI;

use num_complex::Complex;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dmabf::channel::{effective_channel, sample_paths, steering_vector, waveguide_response};
use dmabf::optimizer::{embed_w, mrt_beamformer, optimize, select_strips, snr, strip_gains};
use dmabf::weights::{b_of_g, effective_strip_channel, g_of_b, lorentzian_of_phase};
use dmabf::{ChannelF64, DmaWeightsF64, SystemConfig, SystemConfigF64};

fn cplx() -> impl Strategy<Value = Complex<f64>> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(re, im)| Complex::new(re, im))
}

fn cvec(len: usize) -> impl Strategy<Value = Vec<Complex<f64>>> {
    prop::collection::vec(cplx(), len)
}

fn geometry() -> impl Strategy<Value = SystemConfigF64> {
    (1usize..6, 1usize..8, 0.05..1.0f64, 0.05..1.0f64, 0.0..5.0f64, 0.0..2000.0f64).prop_map(
        |(n, m, de, ds, beta, alpha)| {
            let base = SystemConfig::<f64>::default();
            let lambda = base.wavelength();
            SystemConfig {
                n_strips: n,
                m_elements: m,
                n_rf: 1,
                d_e: de * lambda,
                d_s: ds * lambda,
                wg_attenuation: beta,
                wg_wavenumber: alpha,
                ..base
            }
        },
    )
}

proptest! {
    #[test]
    fn steering_entries_have_unit_modulus(cfg in geometry(), theta in 0.0..PI) {
        let a = steering_vector(theta, &cfg).unwrap();
        prop_assert_eq!(a.entries.len(), cfg.n_elements());
        for (u, e) in a.entries.iter().enumerate() {
            prop_assert!((e.norm() - 1.0).abs() < 1e-12);
            let (n, m) = (u / cfg.m_elements, u % cfg.m_elements);
            let omega = m as f64 * cfg.d_e * theta.sin() + n as f64 * cfg.d_s * theta.cos();
            prop_assert!((a.spatial_freqs[u] - omega).abs() <= 1e-15 * (1.0 + omega.abs()));
        }
    }

    #[test]
    fn waveguide_magnitude_and_phase_steps(cfg in geometry()) {
        let f = waveguide_response(&cfg);
        for (u, fu) in f.iter().enumerate() {
            let m = u % cfg.m_elements;
            let expect = (-cfg.wg_attenuation * (m + 1) as f64 * cfg.d_e).exp();
            prop_assert!((fu.norm() - expect).abs() <= 1e-14 * expect);
            if m > 0 {
                let step = (fu / f[u - 1]).arg();
                let want = Complex::from_polar(1.0, -cfg.wg_wavenumber * cfg.d_e).arg();
                let diff = Complex::from_polar(1.0, step - want).arg().abs();
                prop_assert!(diff < 1e-9);
            }
        }
    }

    #[test]
    fn effective_channel_is_linear(h1 in cvec(6), h2 in cvec(6), f in cvec(6), a in cplx(), b in cplx()) {
        let mix: Vec<_> = h1.iter().zip(&h2).map(|(x, y)| a * x + b * y).collect();
        let lhs = effective_channel(&mix, &f).unwrap();
        let e1 = effective_channel(&h1, &f).unwrap();
        let e2 = effective_channel(&h2, &f).unwrap();
        for k in 0..6 {
            prop_assert!((lhs[k] - (a * e1[k] + b * e2[k])).norm() < 1e-12 * (1.0 + lhs[k].norm()));
        }
    }

    #[test]
    fn affine_map_round_trip(phi in -10.0..10.0f64) {
        let g = lorentzian_of_phase(phi);
        prop_assert!(((g - Complex::new(0.0, 0.5)).norm() - 0.5).abs() < 1e-12);
        let b = b_of_g(g).unwrap();
        prop_assert!((b.norm() - 1.0).abs() < 1e-12);
        prop_assert!((g_of_b(b).unwrap() - g).norm() < 1e-12);
    }

    #[test]
    fn strip_channel_linearity(h in cvec(4), h2 in cvec(4), g in cvec(4), g2 in cvec(4), a in cplx()) {
        let base = effective_strip_channel(&h, &g).unwrap();
        let scaled_h: Vec<_> = h.iter().map(|x| a * x).collect();
        let conj_lin = effective_strip_channel(&scaled_h, &g).unwrap();
        prop_assert!((conj_lin - a.conj() * base).norm() < 1e-10 * (1.0 + conj_lin.norm()));
        let scaled_g: Vec<_> = g.iter().map(|x| a * x).collect();
        let lin = effective_strip_channel(&h, &scaled_g).unwrap();
        prop_assert!((lin - a * base).norm() < 1e-10 * (1.0 + lin.norm()));
        let sum_h: Vec<_> = h.iter().zip(&h2).map(|(x, y)| x + y).collect();
        let sum_g: Vec<_> = g.iter().zip(&g2).map(|(x, y)| x + y).collect();
        let add_h = effective_strip_channel(&sum_h, &g).unwrap()
            - effective_strip_channel(&h2, &g).unwrap();
        prop_assert!((add_h - base).norm() < 1e-10 * (1.0 + base.norm()));
        let add_g = effective_strip_channel(&h, &sum_g).unwrap()
            - effective_strip_channel(&h, &g2).unwrap();
        prop_assert!((add_g - base).norm() < 1e-10 * (1.0 + base.norm()));
    }

    #[test]
    fn global_channel_phase_changes_nothing(seed in any::<u64>(), psi in 0.0..(2.0 * PI)) {
        let cfg = SystemConfig::<f64> { n_strips: 5, m_elements: 4, n_rf: 2, ..SystemConfig::default() };
        let h = ChannelF64::new(sample_paths(&cfg, &mut ChaCha8Rng::seed_from_u64(seed)), &cfg);
        let rot = Complex::from_polar(1.0, psi);
        let rotated = ChannelF64::from_effective(h.effective.iter().map(|x| x * rot).collect(), 4).unwrap();
        let (a, _) = optimize(&h, &cfg, &mut ChaCha8Rng::seed_from_u64(seed ^ 1)).unwrap();
        let (b, _) = optimize(&rotated, &cfg, &mut ChaCha8Rng::seed_from_u64(seed ^ 1)).unwrap();
        prop_assert_eq!(&a.active_set, &b.active_set);
        prop_assert!((a.snr - b.snr).abs() <= 1e-9 * a.snr);
    }

    #[test]
    fn selection_is_subset_optimal(
        n in 1usize..=6,
        m in 1usize..=3,
        k in 1usize..=6,
        h in cvec(18),
        phases in prop::collection::vec(0.0..(2.0 * PI), 18),
    ) {
        let n_rf = k.min(n);
        let h = ChannelF64::from_effective(h[..n * m].to_vec(), m).unwrap();
        let w = DmaWeightsF64::from_phases(phases[..n * m].to_vec(), n, m).unwrap();
        let gains = strip_gains(&h, &w).unwrap();
        prop_assume!(gains.iter().any(|&g| g > 0.0));
        let active = select_strips(&gains, n_rf).unwrap();
        let picked: f64 = active.iter().map(|&i| gains[i]).sum();
        // best subset of size n_rf by enumeration
        let mut best = 0.0f64;
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == n_rf {
                best = best.max((0..n).filter(|i| mask & (1 << i) != 0).map(|i| gains[i]).sum());
            }
        }
        prop_assert!((picked - best).abs() <= 1e-10 * best.max(1e-300));
        if picked > 0.0 {
            let wb = mrt_beamformer(&h, &w, &active, 2.0).unwrap();
            let full = embed_w(&wb, &active, n).unwrap();
            let s = snr(&h, &w, &full, 0.5).unwrap();
            prop_assert!((s - 2.0 * picked / 0.5).abs() <= 1e-10 * s);
        }
    }
}

#[test]
fn single_precision_pipeline_is_feasible() {
    let cfg = SystemConfig::<f32>::default();
    let paths = sample_paths(&SystemConfig::<f64>::default(), &mut ChaCha8Rng::seed_from_u64(3)).cast::<f32>();
    let h = dmabf::ChannelF32::new(paths, &cfg);
    let (sol, trace) = optimize(&h, &cfg, &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    let p: f32 = sol.w.iter().map(|x| x.norm_sqr()).sum();
    assert!((p - cfg.tx_power).abs() <= 1e-5 * cfg.tx_power);
    assert!(sol.w.iter().filter(|x| x.norm() > 0.0).count() <= cfg.n_rf);
    assert!(sol.weights.max_manifold_error() < 1e-5);
    assert!(trace.is_non_decreasing(0.0));

    let h64 = ChannelF64::new(
        sample_paths(&SystemConfig::<f64>::default(), &mut ChaCha8Rng::seed_from_u64(3)),
        &SystemConfig::default(),
    );
    let (sol64, _) = optimize(&h64, &SystemConfig::default(), &mut ChaCha8Rng::seed_from_u64(4)).unwrap();
    // Same seed, same draws: the two precisions should agree closely.
    assert!((sol.spectral_efficiency as f64 - sol64.spectral_efficiency).abs() < 0.05);
}
