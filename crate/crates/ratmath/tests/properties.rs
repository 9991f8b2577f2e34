use ldlc_ratmath::rational::rat;
use ldlc_ratmath::{
    check_hnf_properties, det_multimodular, hnf, int_determinant, integer_coordinates,
    is_lll_reduced, lll_reduce, rat_determinant, rat_inverse, IntMatrix, Rational, RationalMatrix,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn int_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec(-9i64..=9, n * n).prop_map(move |v| {
        let rows: Vec<&[i64]> = v.chunks(n).collect();
        RationalMatrix::from_i64_rows(&rows).unwrap()
    })
}

fn rat_matrix(n: usize) -> impl Strategy<Value = RationalMatrix> {
    proptest::collection::vec((-9i64..=9, 1i64..=4), n * n).prop_map(move |v| {
        let data = v.into_iter().map(|(p, q)| rat(p, q)).collect();
        RationalMatrix::new(n, n, data).unwrap()
    })
}

/// Random unimodular matrix as a product of elementary row operations.
fn random_unimodular(n: usize, seed: u64) -> RationalMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = RationalMatrix::identity(n);
    for _ in 0..3 * n {
        let i = rng.random_range(0..n);
        let j = rng.random_range(0..n);
        if i == j {
            v.swap_rows(i, (i + 1) % n);
            continue;
        }
        let k = Rational::from_integer(BigInt::from(rng.random_range(-3i64..=3)));
        for c in 0..n {
            let add = &v[(j, c)] * &k;
            v[(i, c)] += add;
        }
    }
    v
}

fn nonsingular(m: &RationalMatrix) -> bool {
    !rat_determinant(m).unwrap().is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hnf_laws_on_integer_matrices(n in 1usize..=8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = loop {
            let data = (0..n * n).map(|_| rat(rng.random_range(-9..=9), 1)).collect();
            let m = RationalMatrix::new(n, n, data).unwrap();
            if nonsingular(&m) {
                break m;
            }
        };
        let r = hnf(&m).unwrap();
        prop_assert!(r.transform.is_integral());
        prop_assert_eq!(rat_determinant(&r.transform).unwrap().abs(), Rational::one());
        prop_assert_eq!(r.transform.mul(&m).unwrap(), r.hnf.clone());
        prop_assert!(check_hnf_properties(&r.hnf).is_ok());
        let v = random_unimodular(n, seed ^ 0x5eed);
        prop_assert_eq!(hnf(&v.mul(&m).unwrap()).unwrap().hnf, r.hnf);
    }

    #[test]
    fn hnf_laws_on_rational_matrices(m in (1usize..=6).prop_flat_map(rat_matrix), seed in any::<u64>()) {
        prop_assume!(nonsingular(&m));
        let r = hnf(&m).unwrap();
        prop_assert!(r.transform.is_integral());
        prop_assert_eq!(rat_determinant(&r.transform).unwrap().abs(), Rational::one());
        prop_assert_eq!(r.transform.mul(&m).unwrap(), r.hnf.clone());
        prop_assert!(check_hnf_properties(&r.hnf).is_ok());
        let v = random_unimodular(m.rows(), seed);
        prop_assert_eq!(hnf(&v.mul(&m).unwrap()).unwrap().hnf, r.hnf);
    }

    #[test]
    fn inverse_is_an_involution(m in (1usize..=6).prop_flat_map(rat_matrix)) {
        prop_assume!(nonsingular(&m));
        prop_assert_eq!(rat_inverse(&rat_inverse(&m).unwrap()).unwrap(), m);
    }

    #[test]
    fn determinant_is_multiplicative(pair in (1usize..=6).prop_flat_map(|n| (rat_matrix(n), rat_matrix(n)))) {
        let (a, b) = pair;
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(
            rat_determinant(&ab).unwrap(),
            rat_determinant(&a).unwrap() * rat_determinant(&b).unwrap()
        );
    }

    #[test]
    fn multimodular_agrees_with_bareiss(m in (1usize..=8).prop_flat_map(int_matrix)) {
        let im: IntMatrix = m.to_integer().unwrap();
        prop_assert_eq!(det_multimodular(&im).unwrap(), int_determinant(&im).unwrap());
    }

    #[test]
    fn lll_preserves_the_lattice(m in (2usize..=6).prop_flat_map(int_matrix)) {
        prop_assume!(nonsingular(&m));
        let delta = rat(3, 4);
        let r = lll_reduce(&m, &delta).unwrap();
        prop_assert!(is_lll_reduced(&r, &delta).unwrap());
        for i in 0..m.rows() {
            prop_assert!(integer_coordinates(r.row(i), &m).unwrap().is_some());
            prop_assert!(integer_coordinates(m.row(i), &r).unwrap().is_some());
        }
    }
}
