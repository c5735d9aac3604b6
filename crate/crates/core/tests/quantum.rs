mod common;

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use common::*;
use proptest::prelude::*;
use pulseforge::quantum::{
    compose, effective_hamiltonian, eigh, expm_unitary, sigma_x, sigma_y, sigma_z, Drive,
    Matrix3, StateVector3,
};
use pulseforge::sequences::sequential_gate;
use pulseforge::{gate_fidelity, Unitary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Hamiltonian written entry by entry.
fn hamiltonian_entries(d: f64, um: f64, tm: f64, ur: f64, tr: f64) -> Matrix3 {
    let e = |u: f64, th: f64| c(u * th.cos(), u * th.sin());
    let mut m = Matrix3::zeros();
    m.0[0][0] = c(2.0 * d / 3.0, 0.0);
    m.0[0][1] = e(um, -tm);
    m.0[1][0] = e(um, tm);
    m.0[1][1] = c(-4.0 * d / 3.0, 0.0);
    m.0[1][2] = e(ur, tr);
    m.0[2][1] = e(ur, -tr);
    m.0[2][2] = c(2.0 * d / 3.0, 0.0);
    m.scale_real(-0.5)
}

/// Same Hamiltonian assembled from transition operators.
fn hamiltonian_operators(d: f64, um: f64, tm: f64, ur: f64, tr: f64) -> Matrix3 {
    let z = sigma_z(2, 0).unwrap() + sigma_z(2, 3).unwrap();
    let mw = sigma_x(2, 0).unwrap().scale_real(tm.cos()) + sigma_y(2, 0).unwrap().scale_real(tm.sin());
    let rf = sigma_x(2, 3).unwrap().scale_real(tr.cos()) + sigma_y(2, 3).unwrap().scale_real(tr.sin());
    z.scale_real(d / 3.0) - mw.scale_real(um / 2.0) - rf.scale_real(ur / 2.0)
}

#[test]
fn matrix_and_operator_hamiltonians_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..100 {
        let d = rng.gen_range(-1.0..1.0);
        let um = rng.gen_range(0.0..2.0);
        let ur = rng.gen_range(0.0..2.0);
        let tm = rng.gen_range(-PI..PI);
        let tr = rng.gen_range(-PI..PI);
        let h = effective_hamiltonian(d, Drive::new(um, tm), Drive::new(ur, tr)).unwrap();
        assert!(h.max_abs_diff(&hamiltonian_entries(d, um, tm, ur, tr)) <= 1e-12);
        assert!(h.max_abs_diff(&hamiltonian_operators(d, um, tm, ur, tr)) <= 1e-12);
        assert!(h.is_hermitian(1e-15));
    }
}

#[test]
fn resonant_mw_drive_is_minus_half_sigma_x() {
    let h = effective_hamiltonian(0.0, Drive::new(1.0, 0.0), Drive::off()).unwrap();
    assert!(h.max_abs_diff(&sigma_x(2, 0).unwrap().scale_real(-0.5)) < 1e-15);
}

#[test]
fn sigma_y_matrices() {
    let i = c(0.0, 1.0);
    let mut y23 = Matrix3::zeros();
    y23.0[1][2] = i;
    y23.0[2][1] = -i;
    assert_eq!(sigma_y(2, 3).unwrap(), y23);
    let mut y20 = Matrix3::zeros();
    y20.0[0][1] = -i;
    y20.0[1][0] = i;
    assert_eq!(sigma_y(2, 0).unwrap(), y20);
    let z = sigma_z(2, 0).unwrap() + sigma_z(2, 3).unwrap();
    assert_eq!(z, Matrix3::from_real([[-1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, -1.0]]));
}

#[test]
fn rotations_about_y_on_mw_block() {
    let h = sy20().scale_real(-0.5);
    let s = FRAC_1_SQRT_2;
    let quarter = expm_unitary(&h, PI / 2.0).unwrap();
    let expected = Matrix3::from_real([[s, s, 0.0], [-s, s, 0.0], [0.0, 0.0, 1.0]]);
    assert!(quarter.matrix().max_abs_diff(&expected) < 1e-12);
    let half = expm_unitary(&h, PI).unwrap();
    let expected = Matrix3::from_real([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
    assert!(half.matrix().max_abs_diff(&expected) < 1e-12);
}

#[test]
fn exponential_matches_taylor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(81);
    for _ in 0..200 {
        let h = random_hermitian(&mut rng, 3.0);
        let t = rng.gen_range(-4.0..4.0);
        let u = expm_unitary(&h, t).unwrap();
        assert!(u.matrix().max_abs_diff(&expm_taylor(&h, t)) < 1e-10);
    }
}

#[test]
fn exponential_of_zero_is_identity() {
    let u = expm_unitary(&Matrix3::zeros(), 17.0).unwrap();
    assert_eq!(u, Unitary::identity());
}

#[test]
fn non_hermitian_generator_rejected() {
    let mut m = Matrix3::zeros();
    m.0[0][1] = c(1.0, 0.0);
    assert!(expm_unitary(&m, 1.0).is_err());
    assert!(eigh(&m).is_err());
}

#[test]
fn composition_order_and_inverses() {
    let um = Unitary::new(block_rotation(&sy20(), PI / 4.0)).unwrap();
    let ur = Unitary::new(block_rotation(&sy23(), PI / 2.0)).unwrap();
    let both = compose([&um, &ur]).unwrap();
    assert!(both.matrix().max_abs_diff((ur * um).matrix()) < 1e-15);
    assert!(both.matrix().max_abs_diff(&usq_entries()) < 1e-12);
    assert!(compose(std::iter::empty::<&Unitary>()).is_err());
    assert_eq!(compose([&Unitary::identity(), &Unitary::identity()]).unwrap(), Unitary::identity());

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let seq: Vec<Unitary> = (0..6).map(|_| random_unitary(&mut rng)).collect();
    let mut all = seq.clone();
    all.extend(seq.iter().rev().map(Unitary::adjoint));
    let id = compose(&all).unwrap();
    assert!(id.matrix().max_abs_diff(&Matrix3::identity()) < 1e-10);
}

#[test]
fn target_gate_entries_and_bell_state() {
    let u = sequential_gate();
    assert!(u.matrix().max_abs_diff(&usq_entries()) <= 1e-12);
    assert!(u.matrix().unitarity_defect() <= 1e-12);
    let psi = u.apply(&StateVector3::basis(0).unwrap());
    let bell = StateVector3([c(FRAC_1_SQRT_2, 0.0), c(0.0, 0.0), c(-FRAC_1_SQRT_2, 0.0)]);
    assert!(psi.max_abs_diff(&bell) <= 1e-12);
}

#[test]
fn fidelity_of_pulse_length_error_at_point_two() {
    // Both rotation angles stretched by 1.2.
    let u = block_rotation(&sy23(), 0.6 * PI) * block_rotation(&sy20(), 0.3 * PI);
    let f = gate_fidelity(&Unitary::new(u).unwrap(), &sequential_gate());
    assert!((f - 0.9795).abs() <= 5e-4, "{f}");
    let series = 1.0 - 5.0 * PI * PI / 96.0 * 0.04 + PI.powi(4) / 4608.0 * 0.0016;
    assert!((f - series).abs() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn propagators_are_unitary(seed in any::<u64>(), t in -20.0f64..20.0, scale in 0.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, scale);
        let u = expm_unitary(&h, t).unwrap();
        prop_assert!(u.matrix().unitarity_defect() <= 1e-10);
    }

    #[test]
    fn eigendecomposition_round_trip(seed in any::<u64>(), scale in 1e-3f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, scale);
        let e = eigh(&h).unwrap();
        prop_assert!(e.reconstruct().max_abs_diff(&h) <= 1e-11 * scale.max(1.0));
        prop_assert!(e.values[0] <= e.values[1] && e.values[1] <= e.values[2]);
    }

    #[test]
    fn group_property(seed in any::<u64>(), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hermitian(&mut rng, 2.0);
        let a = expm_unitary(&h, t1).unwrap() * expm_unitary(&h, t2).unwrap();
        let b = expm_unitary(&h, t1 + t2).unwrap();
        prop_assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-10);
    }

    #[test]
    fn fidelity_bounds_and_symmetries(seed in any::<u64>(), phi in -10.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_unitary(&mut rng);
        let b = random_unitary(&mut rng);
        let w = random_unitary(&mut rng);
        let f = gate_fidelity(&a, &b);
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!((gate_fidelity(&a, &a) - 1.0).abs() < 1e-12);
        prop_assert!((gate_fidelity(&a.with_global_phase(phi), &a) - 1.0).abs() < 1e-12);
        prop_assert!((gate_fidelity(&(a * w), &(b * w)) - f).abs() < 1e-12);
    }
}
