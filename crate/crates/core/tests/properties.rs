//! Property tests for the structural invariants of the rail model.

use num_complex::Complex64;
use proptest::prelude::*;

use railnoise_core::{
    beam, dispersion, fit_visibility, modal_amplitudes, omega0, phase_time_domain,
    phase_transfer_full, smooth_envelope, visibility_curve, BeamSpec, FrequencyResponse,
    InterferometerSpec, NoiseSpectrum, SupportSpec, VisibilityFit, VisibilityPoint,
};

const PI: f64 = std::f64::consts::PI;

fn arb_beam() -> impl Strategy<Value = BeamSpec> {
    // bending resonance 50 Hz .. 5 kHz, rail half length 0.2 .. 2 m
    (
        10.0_f64..1000.0, // omega0 / (2 pi) scale via f0
        1.0_f64..100.0,   // mass per length
        0.2_f64..2.0,     // half length
        0.2_f64..1.0,     // grating span as a fraction of L
    )
        .prop_map(|(f0, mpl, l, frac)| {
            BeamSpec::from_bending_resonance(2.0 * PI * f0 * 5.0, mpl, l, frac * l).unwrap()
        })
}

fn arb_complex() -> impl Strategy<Value = Complex64> {
    (-2.0_f64..2.0, -2.0_f64..2.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #[test]
    fn dispersion_scales_as_sqrt_omega(
        beam in arb_beam(),
        omega in 1.0_f64..1.0e5,
        factor in 1.01_f64..100.0,
    ) {
        let base = dispersion(omega, &beam);
        let scaled = dispersion(factor * omega, &beam);
        prop_assert!((scaled / base - factor.sqrt()).abs() < 1e-12 * factor.sqrt());
    }

    #[test]
    fn omega0_scales_as_inverse_length_squared(beam in arb_beam(), factor in 1.01_f64..5.0) {
        let longer = BeamSpec {
            half_length: beam.half_length * factor,
            grating_half_span: beam.grating_half_span,
            ..beam
        };
        let ratio = omega0(&beam) / omega0(&longer);
        prop_assert!((ratio - factor * factor).abs() < 1e-12 * factor * factor);
    }

    #[test]
    fn boundary_solve_is_linear(
        (beam, omega_frac) in arb_beam().prop_flat_map(|b| {
            (Just(b), 0.05_f64..0.95)
        }),
        xp1 in arb_complex(), xm1 in arb_complex(),
        xp2 in arb_complex(), xm2 in arb_complex(),
        alpha in -3.0_f64..3.0,
    ) {
        let support = SupportSpec::from_resonance(
            omega0(&beam) * 0.05, 16.0, &beam).unwrap();
        // stay between dc and well past the first bending resonance
        let omega = omega0(&beam) * (0.02 + 2.0 * omega_frac);
        let resp = FrequencyResponse::new(omega, &beam, &support).unwrap();
        let lhs = resp.amplitudes(xp1 + alpha * xp2, xm1 + alpha * xm2);
        let r1 = resp.amplitudes(xp1, xm1);
        let r2 = resp.amplitudes(xp2, xm2);
        let scale = r1.a.norm() + r2.a.norm() + r1.b.norm() + r2.b.norm() + 1e-300;
        prop_assert!((lhs.a - (r1.a + alpha * r2.a)).norm() <= 1e-12 * (1.0 + alpha.abs()) * scale);
        prop_assert!((lhs.b - (r1.b + alpha * r2.b)).norm() <= 1e-12 * (1.0 + alpha.abs()) * scale);
    }

    #[test]
    fn parity_channels_sum_to_general_response(
        beam in arb_beam(),
        xp in arb_complex(),
        xm in arb_complex(),
        omega_frac in 0.05_f64..0.95,
    ) {
        let support = SupportSpec::from_resonance(omega0(&beam) * 0.03, 8.0, &beam).unwrap();
        let omega = omega0(&beam) * (0.02 + 2.0 * omega_frac);
        let resp = FrequencyResponse::new(omega, &beam, &support).unwrap();
        let sym = (xp + xm) / 2.0;
        let anti = (xp - xm) / 2.0;
        let full = resp.amplitudes(xp, xm);
        let s = resp.amplitudes(sym, sym);
        let a = resp.amplitudes(anti, -anti);
        let scale = full.a.norm() + full.b.norm() + 1e-300;
        prop_assert!(((s.a + a.a) - full.a).norm() <= 1e-12 * scale);
        prop_assert!(((s.b + a.b) - full.b).norm() <= 1e-12 * scale);
        // pure-parity drives leave the other channel empty
        prop_assert_eq!(s.a, Complex64::new(0.0, 0.0));
        prop_assert_eq!(a.b, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn boundary_residuals_stay_tiny(
        beam in arb_beam(),
        xp in arb_complex(),
        xm in arb_complex(),
        fosc_frac in 0.01_f64..0.2,
        q in 2.0_f64..200.0,
        omega_frac in 0.02_f64..2.0,
    ) {
        let support = SupportSpec::from_resonance(
            omega0(&beam) * fosc_frac, q, &beam).unwrap();
        let omega = omega0(&beam) * omega_frac;
        let amps = modal_amplitudes(omega, xp, xm, &beam, &support).unwrap();
        // torque-free ends by construction: curvature terms cancel exactly
        let u = amps.wavenumber * amps.half_length;
        let curv_plus = -amps.a * u.sin() - amps.b * u.cos()
            + amps.c * u.sinh() + amps.d * u.cosh();
        let scale = amps.a.norm() + amps.b.norm() + amps.c.norm() + amps.d.norm();
        prop_assert!(curv_plus.norm() <= 1e-12 * scale);
    }

    #[test]
    fn transfer_decomposition_is_exact(
        beam in arb_beam(),
        xp in arb_complex(),
        xm in arb_complex(),
        omega_frac in 0.02_f64..2.0,
        order in 1u32..6,
    ) {
        let support = SupportSpec::from_resonance(omega0(&beam) * 0.05, 16.0, &beam).unwrap();
        let ifm = InterferometerSpec::new(1.87e7, order, 5.7e-4).unwrap();
        let omega = omega0(&beam) * omega_frac;
        let amps = modal_amplitudes(omega, xp, xm, &beam, &support).unwrap();
        let t = phase_transfer_full(omega, &amps, &beam, &ifm);
        prop_assert_eq!(t.total, t.bending + t.sagnac + t.acceleration);
    }

    #[test]
    fn sampled_phase_scales_exactly_with_order(
        x1 in -1.0e-6_f64..1.0e-6,
        x2 in -1.0e-6_f64..1.0e-6,
        x3 in -1.0e-6_f64..1.0e-6,
        order in 2u32..8,
    ) {
        let base = InterferometerSpec::new(1.87e7, 1, 5.7e-4).unwrap();
        let scaled = InterferometerSpec::new(1.87e7, order, 5.7e-4).unwrap();
        prop_assert_eq!(
            phase_time_domain(x1, x2, x3, &scaled),
            order as f64 * phase_time_domain(x1, x2, x3, &base)
        );
    }

    #[test]
    fn envelope_dominates_any_input(
        values in prop::collection::vec(0.0_f64..1.0, 4..40),
        window in 0.05_f64..2.0,
    ) {
        let samples: Vec<(f64, f64)> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| (2.0_f64.powf(i as f64 / 4.0), v * 1e-12))
            .collect();
        let spectrum = NoiseSpectrum::new(samples, "prop").unwrap();
        let smoothed = smooth_envelope(&spectrum, window);
        for (&(_, raw), &(_, out)) in spectrum.samples().iter().zip(smoothed.samples()) {
            prop_assert!(out >= raw);
        }
    }

    #[test]
    fn fit_round_trips_generated_curves(
        v_max in 0.05_f64..1.0,
        phi1_sq in 0.0_f64..1.2,
        extra in 0u32..4,
    ) {
        let truth = VisibilityFit::new(v_max, phi1_sq).unwrap();
        let orders: Vec<u32> = (1..=(3 + extra)).collect();
        let curve = visibility_curve(&truth, &orders);
        // skip orders whose visibility underflows toward the noise floor
        let points: Vec<_> = orders
            .iter()
            .zip(&curve)
            .filter(|(_, &v)| v > 1e-12)
            .map(|(&p, &v)| VisibilityPoint::new(p, v, None).unwrap())
            .collect();
        prop_assume!(points.len() >= 2);
        let fit = fit_visibility(&points).unwrap();
        prop_assert!((fit.v_max - v_max).abs() <= 1e-10 * v_max);
        prop_assert!((fit.phi1_sq - phi1_sq).abs() <= 1e-10 * phi1_sq.max(1e-3));
    }

    #[test]
    fn bending_mode_count_is_stable(n in 1usize..30) {
        let beam = BeamSpec::new(7.0e10, 2700.0, 1e-2, 2e-5, 0.7, 0.6).unwrap();
        let res = beam::bending_resonances(&beam, n).unwrap();
        prop_assert_eq!(res.len(), n);
        prop_assert!(res.windows(2).all(|w| w[0] < w[1]));
    }
}
