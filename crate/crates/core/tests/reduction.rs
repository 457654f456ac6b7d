mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unimod::reduction::{brute_force_minima, shortest_vectors, successive_minima, SearchOptions};
use unimod::{QForm, Scalar};

use common::{random_definite_gram, random_unimodular};

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn gram(seed: u64, n: usize) -> QForm {
    random_definite_gram(&mut ChaCha8Rng::seed_from_u64(seed), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn matches_brute_force(seed in any::<u64>(), n in 1usize..=4) {
        let g = gram(seed, n);
        let fast = successive_minima(&g, n, &opts()).unwrap();
        let slow = brute_force_minima(&g, 6, n).unwrap();
        prop_assert_eq!(fast.minima_squared, slow.minima_squared);
    }

    #[test]
    fn invariant_under_basis_change(seed in any::<u64>(), n in 2usize..=6, len in 1usize..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_definite_gram(&mut rng, n);
        let u = random_unimodular(&mut rng, n, len);
        let h = g.congruent(&u).unwrap();
        let a = successive_minima(&g, n, &opts()).unwrap();
        let b = successive_minima(&h, n, &opts()).unwrap();
        prop_assert_eq!(a.minima_squared, b.minima_squared);
    }

    #[test]
    fn scales_with_the_form(seed in any::<u64>(), n in 1usize..=5, p in 1i64..9, q in 1i64..9) {
        let g = gram(seed, n);
        let c = Scalar::ratio(p, q);
        let a = successive_minima(&g, n, &opts()).unwrap();
        let b = successive_minima(&g.scaled(&c).unwrap(), n, &opts()).unwrap();
        let scaled: Vec<Scalar> = a.minima_squared.iter().map(|m| m.clone() * c.clone()).collect();
        prop_assert_eq!(scaled, b.minima_squared);
        prop_assert_eq!(a.witnesses, b.witnesses);
    }

    #[test]
    fn minima_are_attained_and_sorted(seed in any::<u64>(), n in 1usize..=6) {
        let g = gram(seed, n);
        let r = successive_minima(&g, n, &opts()).unwrap();
        for (m, w) in r.minima_squared.iter().zip(&r.witnesses) {
            prop_assert_eq!(&g.evaluate_int(w).unwrap(), m);
        }
        prop_assert!(r.minima_squared.windows(2).all(|p| p[0] <= p[1]));
    }

    #[test]
    fn workers_do_not_change_results(seed in any::<u64>(), n in 2usize..=7) {
        let g = gram(seed, n);
        let serial = successive_minima(&g, n, &opts()).unwrap();
        let parallel = successive_minima(&g, n, &SearchOptions { workers: 4, ..opts() }).unwrap();
        prop_assert_eq!(&serial.minima_squared, &parallel.minima_squared);
        prop_assert_eq!(&serial.witnesses, &parallel.witnesses);
        let bound = serial.minima_squared.last().unwrap().clone();
        prop_assert_eq!(
            shortest_vectors(&g, &bound, &opts()).unwrap(),
            shortest_vectors(&g, &bound, &SearchOptions { workers: 4, ..opts() }).unwrap()
        );
    }
}

#[test]
fn short_vector_lists_are_canonical() {
    let g = gram(7, 5);
    let bound = Scalar::int(40);
    let list = shortest_vectors(&g, &bound, &opts()).unwrap();
    for s in &list {
        let lead = s.vector.iter().find(|c| c.sign() != num_bigint::Sign::NoSign).unwrap();
        assert_eq!(lead.sign(), num_bigint::Sign::Plus);
        assert!(s.norm <= bound);
    }
    assert!(list.windows(2).all(|p| p[0].norm <= p[1].norm));
}
