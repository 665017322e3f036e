use num_complex::Complex;
use phase_ovm::dilation::pi_tau_beta;
use phase_ovm::fock::{coherent_state, rotate_by_number_phase, Ket, Operator};
use phase_ovm::phasespace::uniform_thetas;
use phase_ovm::q_povm::{coherent_q_phase_closed, q_phase_distribution, rho_q_matrix};
use phase_ovm::quadrature::QuadratureSpec;
use phase_ovm::spectrum::hermitian_spectrum;
use phase_ovm::wigner_ovm::{rho_w_matrix, wigner_phase_distribution};
use proptest::prelude::*;

fn random_ket(dim: usize) -> impl Strategy<Value = Ket<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim).prop_filter_map("nonzero", |v| {
        let k = Ket::from_amps(v.into_iter().map(|(a, b)| Complex::new(a, b)).collect());
        (k.norm_sqr() > 1e-3).then(|| k.normalized())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn q_distribution_is_a_probability(ket in random_ket(12)) {
        let thetas = uniform_thetas::<f64>(90);
        let d = q_phase_distribution(&ket.projector(), &thetas).unwrap();
        prop_assert!(d.min() >= -1e-12);
        prop_assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wigner_distribution_integrates_to_one(ket in random_ket(12)) {
        let thetas = uniform_thetas::<f64>(90);
        let d = wigner_phase_distribution(&ket.projector(), &thetas).unwrap();
        prop_assert!((d.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_operators_are_hermitian_and_covariant(theta in 0.0f64..6.3, shift in 0.0f64..6.3) {
        let w = rho_w_matrix(theta, 20).matrix;
        let q = rho_q_matrix(theta, 20).matrix;
        prop_assert!(w.hermiticity_defect(None) < 1e-14);
        prop_assert!(q.hermiticity_defect(None) < 1e-14);
        let w2 = rho_w_matrix(theta + shift, 20).matrix;
        prop_assert!(rotate_by_number_phase(&w, shift).distance(&w2) < 1e-12);
    }

    #[test]
    fn q_phase_of_rotated_coherent_state_shifts(r in 0.0f64..2.5, phi in 0.0f64..6.3, theta in 0.0f64..6.3) {
        let alpha = Complex::from_polar(r, phi);
        let a = coherent_q_phase_closed(alpha, theta);
        let b = coherent_q_phase_closed(Complex::new(r, 0.0), theta - phi);
        prop_assert!((a - b).abs() < 1e-13);
        prop_assert!(a >= 0.0);
        let rho = coherent_state(alpha, 40).state.projector();
        let d = q_phase_distribution(&rho, &[theta]).unwrap();
        prop_assert!((d.values[0] - a).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn dilation_elements_are_positive(tau in 0.0f64..0.5, bre in -2.0f64..2.0, bim in -2.0f64..2.0, theta in 0.0f64..6.3) {
        let dim = 12;
        let r = pi_tau_beta(theta, tau, Complex::new(bre, bim), dim, &QuadratureSpec::coherent(dim)).unwrap();
        prop_assert!(r.matrix.hermiticity_defect(None) <= 1e-10);
        let sym = Operator::from_entries((r.matrix.entries() + &r.matrix.adjoint().entries().view()).mapv(|c| c * 0.5));
        prop_assert!(hermitian_spectrum(&sym).unwrap().min() >= -1e-10);
    }
}
