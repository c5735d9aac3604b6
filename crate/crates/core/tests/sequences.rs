mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::*;
use proptest::prelude::*;
use pulseforge::quantum::{z_total, Matrix3};
use pulseforge::sequences::{
    bb1_phase, bb1_sequence, corpse_areas, corpse_sequence, segment_propagator, sequential_gate,
    sequential_segments, Channel, PulseSegment, PulseSequence,
};
use pulseforge::{gate_fidelity, ErrorKind, ErrorModel, Unitary};

fn fid(seq: &PulseSequence, err: ErrorModel) -> f64 {
    gate_fidelity(&seq.propagator(err).unwrap(), &sequential_gate())
}

#[test]
fn sequential_segments_reproduce_the_gate() {
    let seq = sequential_segments();
    assert_eq!(seq.segments.len(), 2);
    assert!((seq.duration() - 1.5 * PI).abs() < 1e-15);
    let u = seq.propagator(ErrorModel::Ideal).unwrap();
    assert!(u.matrix().max_abs_diff(&usq_entries()) < 1e-10);
    let u0 = seq.propagator(ErrorModel::PulseLength(0.0)).unwrap();
    assert!(u0.matrix().max_abs_diff(&usq_entries()) < 1e-10);

    let reversed = PulseSequence::new("reversed", seq.segments.iter().rev().cloned().collect());
    let r = reversed.propagator(ErrorModel::Ideal).unwrap();
    assert!(r.matrix().max_abs_diff(&usq_entries()) > 0.1);
}

#[test]
fn pulse_length_error_stretches_both_rotations() {
    for &e in &[-0.9, -0.35, 0.0, 0.2, 0.61, 1.0] {
        let u = sequential_segments().propagator(ErrorModel::PulseLength(e)).unwrap();
        let oracle = block_rotation(&sy23(), FRAC_PI_2 * (1.0 + e))
            * block_rotation(&sy20(), PI / 4.0 * (1.0 + e));
        assert!(u.matrix().max_abs_diff(&oracle) < 1e-10, "ε = {e}");
    }
}

#[test]
fn off_resonance_matches_printed_exponents() {
    let z = z_total();
    for &e in &[-1.0, -0.4, 0.1, 0.3, 0.77] {
        // exp(−(π/6)iεẐ + (π/4)iσ_y^20), then exp(−(π/3)iεẐ + (π/2)iσ_y^23).
        let gm = z.scale_real(-PI / 6.0 * e) + sy20().scale_real(PI / 4.0);
        let gr = z.scale_real(-PI / 3.0 * e) + sy23().scale_real(PI / 2.0);
        let um = expm_taylor(&gm.scale_real(-1.0), 1.0);
        let ur = expm_taylor(&gr.scale_real(-1.0), 1.0);
        let u = sequential_segments().propagator(ErrorModel::OffResonance(e)).unwrap();
        assert!(u.matrix().max_abs_diff(&(ur * um)) < 1e-10, "ε = {e}");
    }
}

#[test]
fn segment_propagator_examples() {
    let um = segment_propagator(&PulseSegment::mw(FRAC_PI_2, FRAC_PI_2), ErrorModel::Ideal).unwrap();
    assert!(um.matrix().max_abs_diff(&block_rotation(&sy20(), PI / 4.0)) < 1e-12);
    assert!(segment_propagator(&PulseSegment::mw(1.0, 0.0), ErrorModel::PulseLength(1.2)).is_err());
    assert!(segment_propagator(&PulseSegment::rf(1.0, 0.0), ErrorModel::OffResonance(-1.01)).is_err());
    assert!(PulseSegment::new(Channel::Rf, -0.1, 0.0).is_err());
}

#[test]
fn composites_collapse_to_target_without_error() {
    for seq in [bb1_sequence(), corpse_sequence()] {
        for err in [ErrorModel::Ideal, ErrorModel::PulseLength(0.0), ErrorModel::OffResonance(0.0)] {
            let u = seq.propagator(err).unwrap();
            assert!(u.matrix().max_abs_diff(&usq_entries()) < 1e-10, "{}", seq.label);
        }
    }
}

#[test]
fn bb1_layout_and_duration() {
    let seq = bb1_sequence();
    assert_eq!(seq.segments.len(), 10);
    let areas: Vec<f64> = seq.segments.iter().map(|s| s.area / PI).collect();
    let expected = [0.25, 1.0, 2.0, 1.0, 0.25, 0.5, 1.0, 2.0, 1.0, 0.5];
    for (a, b) in areas.iter().zip(expected) {
        assert!((a - b).abs() < 1e-15);
    }
    assert!(seq.segments[..5].iter().all(|s| s.channel == Channel::Mw));
    assert!(seq.segments[5..].iter().all(|s| s.channel == Channel::Rf));
    assert!((seq.duration() - 9.5 * PI).abs() < 1e-12);

    // Printed two-decimal phases, in units of π.
    let printed = [0.5, 1.04, 2.12, 1.04, 0.5, 0.5, 1.08, 2.24, 1.08, 0.5];
    for (s, p) in seq.segments.iter().zip(printed) {
        assert!((s.phase / PI - p).abs() < 0.005, "{} vs {p}", s.phase / PI);
    }
    let phi = |theta: f64| (-theta / (4.0 * PI)).acos();
    assert!((bb1_phase(FRAC_PI_2) - phi(FRAC_PI_2)).abs() < 1e-15);
    assert!((bb1_phase(PI) - phi(PI)).abs() < 1e-15);
}

#[test]
fn corpse_layout_and_duration() {
    let seq = corpse_sequence();
    assert_eq!(seq.segments.len(), 6);
    let k = |theta: f64| ((theta / 2.0).sin() / 2.0).asin();
    for (theta, areas) in [(FRAC_PI_2, corpse_areas(FRAC_PI_2)), (PI, corpse_areas(PI))] {
        let kap = k(theta);
        let oracle = [theta / 2.0 - kap, 2.0 * PI - 2.0 * kap, 2.0 * PI + theta / 2.0 - kap];
        for (a, b) in areas.iter().zip(oracle) {
            assert!((a - b).abs() < 1e-14);
        }
    }
    let mw = corpse_areas(FRAC_PI_2).map(|a| a / PI);
    for (a, p) in mw.iter().zip([0.14, 1.77, 2.14]) {
        assert!((a - p).abs() < 0.006, "{a} vs {p}");
    }
    let rf = corpse_areas(PI).map(|a| a / PI);
    for (a, p) in rf.iter().zip([1.0 / 3.0, 5.0 / 3.0, 7.0 / 3.0]) {
        assert!((a - p).abs() < 1e-14);
    }
    let ratio = seq.duration() / sequential_segments().duration();
    assert!((ratio - 5.59).abs() <= 0.01, "{ratio}");
    let phases: Vec<f64> = seq.segments.iter().map(|s| s.phase).collect();
    for (p, q) in phases.iter().zip([FRAC_PI_2, -FRAC_PI_2, FRAC_PI_2].repeat(2)) {
        assert!((p - q).abs() < 1e-15);
    }
}

#[test]
fn bb1_beats_sequential_under_pulse_length_error() {
    let e = ErrorModel::PulseLength(0.3);
    assert!(fid(&bb1_sequence(), e) > fid(&sequential_segments(), e));
    assert!(fid(&bb1_sequence(), ErrorModel::PulseLength(-0.5)) >= 0.9);
}

#[test]
fn corpse_fails_to_correct_detuning() {
    let e = ErrorModel::OffResonance(0.3);
    assert!(fid(&corpse_sequence(), e) < fid(&sequential_segments(), e));
}

#[test]
fn bb1_infidelity_is_sixth_order() {
    let xs: Vec<f64> = (0..10).map(|i| 0.01 * 10f64.powf(i as f64 / 9.0)).collect();
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|&e| (e.ln(), (1.0 - fid(&bb1_sequence(), ErrorModel::PulseLength(e))).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!(slope >= 5.5, "slope {slope}");
}

#[test]
fn segment_table_export() {
    let table = sequential_segments().segment_table_csv();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "idx,channel,tau_over_pi,theta_over_pi");
    assert_eq!(lines[1], "0,MW,0.500000000,0.500000000");
    assert_eq!(lines[2], "1,RF,1.00000000,0.500000000");
}

fn all_sequences() -> Vec<PulseSequence> {
    vec![sequential_segments(), bb1_sequence(), corpse_sequence()]
}

proptest! {
    #[test]
    fn propagators_unitary_for_all_errors(e in -1.0f64..=1.0, which in 0usize..3, ore in any::<bool>()) {
        let kind = if ore { ErrorKind::OffResonance } else { ErrorKind::PulseLength };
        let seq = &all_sequences()[which];
        let u = seq.propagator(kind.model(e)).unwrap();
        prop_assert!(u.matrix().unitarity_defect() <= 1e-10);
        let f = gate_fidelity(&u, &sequential_gate());
        prop_assert!((0.0..=1.0).contains(&f));
    }

    #[test]
    fn pulse_length_fidelity_is_even(e in 0.0f64..=1.0) {
        for seq in [sequential_segments(), bb1_sequence()] {
            let a = fid(&seq, ErrorModel::PulseLength(e));
            let b = fid(&seq, ErrorModel::PulseLength(-e));
            prop_assert!((a - b).abs() <= 1e-9, "{} at {}: {} vs {}", seq.label, e, a, b);
        }
    }

    #[test]
    fn errors_act_identically_on_every_segment(e in -1.0f64..=1.0, which in 0usize..3, ore in any::<bool>()) {
        let err = if ore { ErrorModel::OffResonance(e) } else { ErrorModel::PulseLength(e) };
        let seq = &all_sequences()[which];
        let whole = seq.propagator(err).unwrap();
        let mut acc = Matrix3::identity();
        for s in &seq.segments {
            acc = *segment_propagator(s, err).unwrap().matrix() * acc;
        }
        prop_assert!(whole.matrix().max_abs_diff(&acc) < 1e-13);
        let rebuilt = Unitary::new(acc).unwrap();
        prop_assert!((gate_fidelity(&rebuilt, &whole) - 1.0).abs() < 1e-12);
    }
}
