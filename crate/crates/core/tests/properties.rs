//! Cross-module properties on randomized inputs. Proptest cases draw seeds
//! rather than raw matrices so every failure reproduces from one integer.

use proptest::prelude::*;

use softpair::homotopy;
use softpair::matrix::{self, CMatrix};
use softpair::pairs::{self, SoftPair};
use softpair::reduction;
use softpair::rng;
use softpair::universal;

fn seeded_pair(seed: u64) -> (SoftPair, pairs::PairMeta) {
    let n = 2 + (seed as usize % 6);
    let k = seed as usize % (n + 1);
    pairs::random_valid_pair(n, k, seed).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstructs(seed in 0u64..10_000) {
        let mut stream = rng::rng_from_seed(seed);
        let g = rng::random_gaussian(5, &mut stream);
        let h = g.add(&g.dagger()).scale(0.5);
        let sys = matrix::eig_hermitian(&h).unwrap();
        let back = sys.reassemble(|t| t);
        prop_assert!(back.sub(&h).max_abs() < 1e-12);
        for w in sys.eigenvalues.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn op_norm_of_direct_sum_is_max(s in 0u64..10_000, t in 0u64..10_000) {
        let mut sa = rng::rng_from_seed(s);
        let mut sb = rng::rng_from_seed(t.wrapping_add(1));
        let ga = rng::random_gaussian(3, &mut sa);
        let gb = rng::random_gaussian(4, &mut sb);
        let ha = ga.add(&ga.dagger()).scale(0.5);
        let hb = gb.add(&gb.dagger()).scale(0.5);
        let na = matrix::op_norm(&ha).unwrap();
        let nb = matrix::op_norm(&hb).unwrap();
        let ns = matrix::op_norm(&ha.direct_sum(&hb)).unwrap();
        prop_assert!((ns - na.max(nb)).abs() < 1e-10);
    }

    #[test]
    fn relations_hold_on_seeded_pairs(seed in 0u64..100_000) {
        let (pair, _) = seeded_pair(seed);
        let rep = pairs::check_relations(&pair, 1e-10).unwrap();
        prop_assert!(rep.pass, "r1 {:.3e} r2 {:.3e}", rep.r1, rep.r2);
    }

    #[test]
    fn spectra_always_match(seed in 0u64..100_000) {
        let (pair, _) = seeded_pair(seed);
        let rep = pairs::compare_spectra(&pair, 1e-8).unwrap();
        prop_assert!(rep.pass, "worst gap {:.3e}", rep.worst_gap);
        prop_assert_eq!(rep.interior_a.len(), rep.matching.len());
    }

    #[test]
    fn class_is_additive(s in 0u64..10_000, t in 0u64..10_000) {
        let (p, mp) = seeded_pair(s);
        let (q, mq) = seeded_pair(t.wrapping_add(7));
        let sum = pairs::direct_sum(&p, &q);
        let class = reduction::class_of_pair(&sum, 1e-8).unwrap();
        prop_assert_eq!(class, mp.class + mq.class);
    }

    #[test]
    fn class_survives_conjugation_and_reparam(seed in 0u64..10_000) {
        let (pair, meta) = seeded_pair(seed);
        let u = rng::random_unitary(pair.dim(), seed.wrapping_mul(13) + 1);
        let conj = SoftPair {
            a: pair.a.conjugate_by(&u),
            b: pair.b.conjugate_by(&u),
        };
        prop_assert_eq!(reduction::class_of_pair(&conj, 1e-8).unwrap(), meta.class);
        let rep = pairs::reparametrize(&pair, |x| x * x).unwrap();
        prop_assert_eq!(reduction::class_of_pair(&rep, 1e-8).unwrap(), meta.class);
    }

    #[test]
    fn reduction_reconstructs(seed in 0u64..10_000) {
        let (pair, meta) = seeded_pair(seed);
        let red = reduction::reduce_to_projections(&pair, 1e-6).unwrap();
        prop_assert_eq!(red.k, meta.k);
        let (da, db) = red.reconstruction_deviations(&pair).unwrap();
        prop_assert!(da < 1e-8 && db < 1e-8, "deviations {da:.3e} / {db:.3e}");
    }

    #[test]
    fn flip_path_certifies(seed in 0u64..10_000) {
        let (pair, _) = seeded_pair(seed);
        let path = homotopy::rotation_flip_path(&pair, 21).unwrap();
        let rep = homotopy::verify_path(&path, 1e-9).unwrap();
        prop_assert!(rep.pass);
        prop_assert!(rep.classes.iter().all(|&c| c == Some(0)));
    }

    #[test]
    fn pq_are_projections_with_the_same_class(seed in 0u64..10_000) {
        let (pair, meta) = seeded_pair(seed);
        let pq = universal::build_pq(&pair).unwrap();
        prop_assert!(pq.defect_p < 1e-8 && pq.defect_q < 1e-8);
        let lifted = SoftPair::new(pq.p, pq.q).unwrap();
        prop_assert_eq!(reduction::class_of_pair(&lifted, 1e-8).unwrap(), meta.class);
    }
}

#[test]
fn trace_class_matches_reduction_on_a_fixed_sweep() {
    for seed in 0..200u64 {
        let (pair, meta) = seeded_pair(seed);
        let class = reduction::class_of_pair(&pair, 1e-8).unwrap();
        let red = reduction::reduce_to_projections(&pair, 1e-6).unwrap();
        assert_eq!(class, meta.class);
        assert_eq!(class, red.rank_p as i64 - red.rank_q as i64);
        assert!((pair.trace_diff() - class as f64).abs() < 1e-10);
    }
}

#[test]
fn equal_entries_make_residuals_vanish() {
    for seed in 0..50u64 {
        let mut stream = rng::rng_from_seed(seed);
        let g = rng::random_gaussian(4, &mut stream);
        let h = g.add(&g.dagger()).scale(0.5);
        let a = matrix::apply_function(&h, |t| 1.0 / (1.0 + (-t).exp())).unwrap();
        let pair = SoftPair::new(a.clone(), a).unwrap();
        let rep = pairs::check_relations(&pair, 1e-12).unwrap();
        assert!(rep.pass);
        assert_eq!(reduction::class_of_pair(&pair, 1e-8).unwrap(), 0);
    }
}

#[test]
fn zero_and_identity_edge_cases() {
    let z = CMatrix::zeros(3);
    let i = CMatrix::identity(3);
    let pair = SoftPair::new(i.clone(), z.clone()).unwrap();
    let rep = pairs::check_relations(&pair, 1e-12).unwrap();
    assert!(rep.pass);
    assert_eq!(reduction::class_of_pair(&pair, 1e-8).unwrap(), 3);
    let pair = SoftPair::new(z.clone(), z).unwrap();
    assert_eq!(reduction::class_of_pair(&pair, 1e-8).unwrap(), 0);
}
