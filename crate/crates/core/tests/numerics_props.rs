use nalgebra::{DMatrix, DVector};
use phasecert::constructions::gaussian_random;
use phasecert::ensemble::{
    intensity_map, lift_rank_one, super_analysis_operator, Field, HermitianCoords, MeasurementEnsemble, Signal,
};
use phasecert::numerics::{null_space_of, rank_of, spans_space, ToleranceConfig};
use phasecert::Complex64;
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

/// Small integer matrices hit rank deficiency often.
fn int_matrix(max_dim: usize) -> impl Strategy<Value = DMatrix<f64>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        prop::collection::vec(-2i32..=2, r * c)
            .prop_map(move |v| DMatrix::from_iterator(r, c, v.into_iter().map(f64::from)))
    })
}

fn complex_signal(m: usize) -> impl Strategy<Value = Signal> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), m)
        .prop_map(|v| Signal::complex(&v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect::<Vec<_>>()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rank_is_permutation_and_transpose_invariant(a in int_matrix(5), seed in any::<u64>()) {
        let r = rank_of(&a, &tol()).unwrap().rank;
        prop_assert_eq!(rank_of(&a.transpose(), &tol()).unwrap().rank, r);
        let mut order: Vec<usize> = (0..a.ncols()).collect();
        order.rotate_left((seed as usize) % a.ncols());
        order.reverse();
        prop_assert_eq!(rank_of(&a.select_columns(&order), &tol()).unwrap().rank, r);
    }

    #[test]
    fn rank_plus_nullity_is_column_count(a in int_matrix(5)) {
        let r = rank_of(&a, &tol()).unwrap().rank;
        let null = null_space_of(&a, &tol()).unwrap();
        prop_assert_eq!(r + null.dimension, a.ncols());
        for v in &null.basis_vectors {
            prop_assert!((&a * v).norm() <= 1e-9 * (1.0 + a.norm()));
            prop_assert!((v.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn spanning_is_monotone(a in int_matrix(4), extra in prop::collection::vec(-2i32..=2, 4)) {
        let cols: Vec<DVector<f64>> = a.column_iter().map(|c| c.into_owned()).collect();
        if spans_space(&cols, a.nrows(), &tol()).unwrap() {
            let mut more = cols.clone();
            more.push(DVector::from_iterator(a.nrows(), extra.iter().take(a.nrows()).map(|&x| f64::from(x))));
            prop_assert!(spans_space(&more, a.nrows(), &tol()).unwrap());
        }
    }

    #[test]
    fn intensities_ignore_global_phase(x in complex_signal(3), theta in 0.0f64..6.3, seed in any::<u64>()) {
        let phi = gaussian_random(Field::Complex, 3, 7, seed);
        let a = intensity_map(&phi, &x).unwrap();
        let b = intensity_map(&phi, &x.scaled(Complex64::from_polar(1.0, theta)).unwrap()).unwrap();
        prop_assert!((&a - &b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn hilbert_schmidt_isometry(entries in prop::collection::vec(-3.0f64..3.0, 9), other in prop::collection::vec(-3.0f64..3.0, 9)) {
        let h = HermitianCoords::new(3, DVector::from_vec(entries)).unwrap();
        let k = HermitianCoords::new(3, DVector::from_vec(other)).unwrap();
        let hm = h.to_matrix();
        let km = k.to_matrix();
        // ⟨H, K⟩_HS = tr(HK*) = tr(HK) for self-adjoint K
        let hs = (&hm * km.adjoint()).trace();
        prop_assert!(hs.im.abs() < 1e-10);
        prop_assert!((hs.re - h.coords().dot(k.coords())).abs() < 1e-10 * (1.0 + hs.re.abs()));
        prop_assert!((HermitianCoords::from_matrix(&hm).unwrap().coords() - h.coords()).norm() < 1e-12);
    }
}

#[test]
fn lifting_identity_over_fifty_draws() {
    for seed in 0..50u64 {
        let phi = gaussian_random(Field::Complex, 3, 8, seed);
        let xs = gaussian_random(Field::Complex, 3, 1, 1000 + seed);
        let x = Signal::new(Field::Complex, xs.column(0)).unwrap();
        let direct = intensity_map(&phi, &x).unwrap();
        let lifted = super_analysis_operator(&phi).apply(&lift_rank_one(&x).unwrap()).unwrap();
        assert!(
            (&direct - &lifted).norm() <= 1e-9 * direct.norm(),
            "seed {seed}: {direct} vs {lifted}"
        );
    }
}

#[test]
fn difference_of_colliding_lifts_is_null() {
    let phi = MeasurementEnsemble::from_real_columns(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]])
        .unwrap()
        .to_complex();
    let i = Complex64::i();
    let one = Complex64::new(1.0, 0.0);
    let x = Signal::complex(&[one, i]).unwrap();
    let y = Signal::complex(&[one, -i]).unwrap();
    let a = super_analysis_operator(&phi);
    let diff = HermitianCoords::new(2, lift_rank_one(&x).unwrap().coords() - lift_rank_one(&y).unwrap().coords()).unwrap();
    assert!(a.apply(&diff).unwrap().norm() < 1e-14);
    assert!(diff.norm() > 1.0);
}
