mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unimod::catalog::Catalog;
use unimod::forms::{sign_reverse_int, standard_form};
use unimod::isometry::{is_isometric, random_automorphism, IsometryOutcome};
use unimod::reduction::{shortest_vectors, SearchOptions};
use unimod::{QForm, Scalar};

use common::{e8_witness, random_definite_gram, random_unimodular};

fn opts() -> SearchOptions {
    SearchOptions::default()
}

fn decided(out: &IsometryOutcome) -> Option<bool> {
    match out {
        IsometryOutcome::Isometric(w) => {
            assert!(w.verify());
            Some(true)
        }
        IsometryOutcome::NotIsometric { .. } => Some(false),
        IsometryOutcome::Inconclusive { .. } => None,
    }
}

#[test]
fn symmetric_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..20 {
        let n = 2 + case % 4;
        let a = random_definite_gram(&mut rng, n);
        let b = if case % 2 == 0 {
            a.congruent(&random_unimodular(&mut rng, n, 8)).unwrap()
        } else {
            random_definite_gram(&mut rng, n)
        };
        let ab = decided(&is_isometric(&a, &b, &opts()).unwrap());
        let ba = decided(&is_isometric(&b, &a, &opts()).unwrap());
        assert_eq!(ab, ba, "case {case}");
        if case % 2 == 0 {
            assert_eq!(ab, Some(true), "case {case}");
        }
    }
}

#[test]
fn congruent_copies_of_e8_are_recognised() {
    let e8 = Catalog::open_default().unwrap().form("e8").unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..3 {
        let copy = e8.congruent(&random_unimodular(&mut rng, 8, 20)).unwrap();
        assert_eq!(decided(&is_isometric(&e8, &copy, &opts()).unwrap()), Some(true));
    }
    let odd = standard_form(8, 0).unwrap();
    assert_eq!(decided(&is_isometric(&e8, &odd, &opts()).unwrap()), Some(false));
}

/// `SR(q, v)` is carried to `SR(q, Mv)` by any automorphism `M`, so the
/// forms are congruent and their short-vector value lists agree.
#[test]
fn sign_reversal_values_are_orbit_invariant() {
    let q = standard_form(8, 1).unwrap();
    let v = e8_witness();
    let bound = Scalar::int(4);
    let norms = |f: &QForm| -> Vec<Scalar> {
        shortest_vectors(f, &bound, &opts()).unwrap().into_iter().map(|s| s.norm).collect()
    };
    let base = sign_reverse_int(&q, &v).unwrap();
    let expected = norms(&base);
    for seed in 0..5 {
        let m = random_automorphism(8, seed, 1 + seed as usize).unwrap();
        assert!(m.verify());
        let moved = sign_reverse_int(&q, &m.apply(&v)).unwrap();
        assert_eq!(moved.congruent(&m.matrix).unwrap(), base, "seed {seed}");
        assert_eq!(norms(&moved), expected, "seed {seed}");
    }
}
