use std::f64::consts::FRAC_PI_2;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use entangle_net::double_jc::double_jc_reduced;
use entangle_net::entanglement::{concurrence, concurrence_auto};
use entangle_net::hilbert::{check_density, max_abs_diff};
use entangle_net::oracle::{double_jc_reduced_brute, NetworkOracle, PairPrep};
use entangle_net::sweep::{tau_grid, SweepSpec};
use entangle_net::tavis::{rho_pair_cross, rho_pair_cross_from_v, rho_pair_same, rho_pair_same_from_v};
use entangle_net::{Family, ModelParams, PreparedState};

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::Phi), Just(Family::Psi)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_densities_are_states(f in family(), alpha in 0.0..FRAC_PI_2, tau in 0.0..25.0f64, n in 0usize..=2) {
        let state = PreparedState::new(f, alpha, n).unwrap();
        let params = ModelParams::tavis(n);
        for rho in [rho_pair_same(&state, &params, tau), rho_pair_cross(&state, &params, tau)] {
            prop_assert!(check_density(&rho, 1e-12, 1e-12, 1e-12).is_ok());
            let c = concurrence_auto(&rho).unwrap();
            prop_assert!((0.0..=1.0).contains(&c));
        }
    }

    #[test]
    fn closed_forms_agree_with_contractions(f in family(), alpha in 0.0..FRAC_PI_2, tau in 0.0..25.0f64, n in 0usize..=2, ratio in 0.0..3.0f64) {
        let state = PreparedState::new(f, alpha, n).unwrap();
        let params = ModelParams::tavis(n).with_omega_ratio(ratio);
        prop_assert!(max_abs_diff(&rho_pair_same(&state, &params, tau), &rho_pair_same_from_v(&state, &params, tau)) < 1e-13);
        prop_assert!(max_abs_diff(&rho_pair_cross(&state, &params, tau), &rho_pair_cross_from_v(&state, &params, tau)) < 1e-13);
    }

    #[test]
    fn double_jc_matches_exponential(f in family(), alpha in 0.0..FRAC_PI_2, tau in 0.0..25.0f64, n in 0usize..=3, ratio in 0.0..3.0f64) {
        let state = PreparedState::new(f, alpha, n).unwrap();
        let params = ModelParams::double_jc(n).with_omega_ratio(ratio);
        let closed = double_jc_reduced(&state, &params, tau);
        let brute = double_jc_reduced_brute(&state, &params, tau).unwrap();
        prop_assert!(max_abs_diff(&closed, &brute) < 1e-9);
    }

    #[test]
    fn general_and_x_concurrence_agree(f in family(), alpha in 0.0..FRAC_PI_2, tau in 0.0..25.0f64, n in 0usize..=2) {
        let state = PreparedState::new(f, alpha, n).unwrap();
        let rho = rho_pair_cross(&state, &ModelParams::tavis(n), tau);
        prop_assert!((concurrence(&rho).unwrap() - concurrence_auto(&rho).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn excitation_number_is_conserved() {
    for n in 0..=2 {
        let oracle = NetworkOracle::new(&ModelParams::tavis(n).with_omega_ratio(0.7)).unwrap();
        let state = PreparedState::from_degrees(Family::Phi, 35.0, n).unwrap();
        let start = oracle.evolve_symmetric(&state, 0.0).unwrap().excitations;
        for tau in [0.4, 3.3, 11.0, 19.9] {
            let later = oracle.evolve_symmetric(&state, tau).unwrap().excitations;
            assert_abs_diff_eq!(later, start, epsilon = 1e-10);
        }
    }
}

#[test]
fn mirror_pairs_match() {
    let oracle = NetworkOracle::new(&ModelParams::tavis(1)).unwrap();
    let state = PreparedState::from_degrees(Family::Psi, 50.0, 1).unwrap();
    for tau in [0.7, 4.2] {
        let p = oracle.evolve_symmetric(&state, tau).unwrap();
        assert!(max_abs_diff(&p.same_a, &p.same_b) < 1e-12);
        assert!(max_abs_diff(&p.cross, &p.cross_mirror) < 1e-12);
    }
}

#[test]
fn mixed_preparations_run_through_the_oracle() {
    let oracle = NetworkOracle::new(&ModelParams::tavis(0)).unwrap();
    let a = PairPrep { family: Family::Phi, alpha: 0.6 };
    let b = PairPrep { family: Family::Psi, alpha: 1.1 };
    let p = oracle.evolve(a, b, 0, 2.5).unwrap();
    for rho in [&p.same_a, &p.same_b, &p.cross, &p.cross_mirror] {
        assert!(check_density(rho, 1e-12, 1e-12, 1e-12).is_ok());
    }
}

#[test]
fn concurrences_do_not_depend_on_omega() {
    for f in [Family::Phi, Family::Psi] {
        let state = PreparedState::from_degrees(f, 40.0, 1).unwrap();
        for tau in [0.9, 7.7] {
            let at = |ratio: f64| {
                let p = ModelParams::tavis(1).with_omega_ratio(ratio);
                (
                    concurrence_auto(&rho_pair_same(&state, &p, tau)).unwrap(),
                    concurrence_auto(&rho_pair_cross(&state, &p, tau)).unwrap(),
                )
            };
            let base = at(0.0);
            for ratio in [1.0, 10.0] {
                let other = at(ratio);
                assert_abs_diff_eq!(other.0, base.0, epsilon = 1e-12);
                assert_abs_diff_eq!(other.1, base.1, epsilon = 1e-12);
            }
        }
    }
}

#[test]
fn psi_curves_stay_distinct() {
    let params = ModelParams::tavis(0);
    let a = PreparedState::from_degrees(Family::Psi, 30.0, 0).unwrap();
    let b = PreparedState::from_degrees(Family::Psi, 40.0, 0).unwrap();
    let gap = tau_grid(20.0, 401)
        .unwrap()
        .into_iter()
        .map(|t| {
            (concurrence_auto(&rho_pair_same(&a, &params, t)).unwrap()
                - concurrence_auto(&rho_pair_same(&b, &params, t)).unwrap())
            .abs()
        })
        .fold(0.0, f64::max);
    assert!(gap > 1e-3, "{gap}");
}

#[test]
fn minimum_is_stable_under_grid_refinement() {
    let coarse = SweepSpec::tavis(Family::Phi, 0);
    let fine = SweepSpec { tau_steps: 8001, ..coarse.clone() };
    for deg in [40.0, 65.5, 80.0] {
        let alpha = f64::to_radians(deg);
        let a = coarse.e_min(alpha).unwrap().e_min;
        let b = fine.e_min(alpha).unwrap().e_min;
        assert_abs_diff_eq!(a, b, epsilon = 1e-9);
    }
}
