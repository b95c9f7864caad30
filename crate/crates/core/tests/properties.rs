//! Property tests over randomly drawn algebras, matrices and modules.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use koszulkit::algebra::tensor_cdga;
use koszulkit::mc::{enumerate_mc, is_mc, twist_algebra, EnumerationOptions};
use koszulkit::random::{random_algebra, random_element, random_rank_one_module, random_trivial_module, RandomAlgebraOptions};
use koszulkit::twisted::hom_complex_to;
use koszulkit::weq::{test_modules, TestFamily};
use koszulkit::{Execution, Field, Matrix};

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u64, 3, 5, 7]).prop_map(|p| Field::prime(p).unwrap())
}

fn matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<i64>)> {
    (prop::sample::select(vec![2u64, 3, 5, 101]), 1usize..6, 1usize..6)
        .prop_flat_map(|(p, r, c)| (Just(p), Just(r), Just(c), prop::collection::vec(-3i64..=3, r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prime_field_matches_integer_arithmetic(p in prop::sample::select(vec![2u64, 3, 5, 7, 65_521]), a in -1000i64..1000, b in -1000i64..1000) {
        let f = Field::prime(p).unwrap();
        let (x, y) = (f.from_i64(a), f.from_i64(b));
        let m = p as i64;
        prop_assert_eq!((&x * &y).residue().unwrap() as i64, (a * b).rem_euclid(m));
        prop_assert_eq!((&x + &y).residue().unwrap() as i64, (a + b).rem_euclid(m));
        if a.rem_euclid(m) != 0 {
            prop_assert!((&x * &x.inv()).is_one());
        }
    }

    #[test]
    fn rank_plus_nullity((p, r, c, data) in matrix()) {
        let f = Field::prime(p).unwrap();
        let rows: Vec<&[i64]> = data.chunks(c).collect();
        let m = Matrix::from_i64(f, &rows);
        prop_assert_eq!(m.rows(), r);
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), c);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn random_algebras_and_their_tensor_products_certify(seed in any::<u64>(), f in field()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(&mut rng, f, &RandomAlgebraOptions::default()).unwrap();
        let b = random_algebra(&mut rng, f, &RandomAlgebraOptions { max_dim: 2, ..Default::default() }).unwrap();
        prop_assert!(a.check_axioms().is_ok());
        let t = tensor_cdga(&a, &b).unwrap();
        prop_assert_eq!(t.dim(), a.dim() * b.dim());
        prop_assert!(t.check_axioms().is_ok());
    }

    #[test]
    fn twisting_back_is_the_identity(seed in any::<u64>(), f in field()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(&mut rng, f, &RandomAlgebraOptions::default()).unwrap();
        let b = random_element(&mut rng, &a, 1);
        let minus_b: Vec<_> = b.iter().map(|c| -c.clone()).collect();
        let back = twist_algebra(&twist_algebra(&a, &b).unwrap(), &minus_b).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn enumeration_is_mc_and_independent_of_execution(seed in any::<u64>(), f in prop::sample::select(vec![2u64, 3]).prop_map(|p| Field::prime(p).unwrap())) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_algebra(&mut rng, f, &RandomAlgebraOptions::default()).unwrap();
        let seq = EnumerationOptions { execution: Execution::Sequential, ..Default::default() };
        let par = EnumerationOptions { execution: Execution::Parallel, ..Default::default() };
        let xs = enumerate_mc(&a, &seq).unwrap();
        prop_assert_eq!(&xs, &enumerate_mc(&a, &par).unwrap());
        for x in &xs {
            prop_assert!(is_mc(&a, &x.coords).unwrap().is_ok());
        }
    }

    #[test]
    fn hom_complexes_square_to_zero(seed in any::<u64>()) {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let opts = RandomAlgebraOptions { curved: false, augmented: true, max_dim: 3 };
        let a = random_algebra(&mut rng, f, &opts).unwrap();
        let m = if seed % 2 == 0 {
            random_rank_one_module(&mut rng, &a).unwrap()
        } else {
            random_trivial_module(&mut rng, &a, 2).unwrap()
        };
        for t in test_modules(&a, &TestFamily::new(1), &EnumerationOptions::default()).unwrap() {
            let hom = hom_complex_to(&t, &m).unwrap();
            prop_assert!(hom.certificate.is_ok());
            prop_assert!(hom.diff.mul(&hom.diff).unwrap().is_zero());
        }
    }
}
