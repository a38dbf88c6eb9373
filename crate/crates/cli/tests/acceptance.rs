//! Acceptance suite: each test exercises one acceptance criterion end to end
//! and prints a single pass/fail line (visible with `--nocapture`).

use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use softpair::homotopy::{self, PairPath};
use softpair::matrix::{self, CMatrix};
use softpair::pairs::{self, PairMeta, SoftPair};
use softpair::reduction;
use softpair::rng;
use softpair::universal;
use softpair::funcalg::{self, SpaceGrid};

fn report(id: u32, title: &str, pass: bool) {
    println!(
        "criterion {id} ({title}): {}",
        if pass { "pass" } else { "FAIL" }
    );
    assert!(pass, "criterion {id} ({title}) failed");
}

/// 1000 seeded pairs covering n ≤ 8 and every k ≤ n.
fn corpus() -> Vec<(SoftPair, PairMeta)> {
    (0..1000u64)
        .map(|seed| {
            let n = 1 + (seed as usize % 8);
            let k = (seed as usize / 8) % (n + 1);
            pairs::random_valid_pair(n, k, seed).expect("corpus generation")
        })
        .collect()
}

#[test]
fn criterion_1_relation_soundness() {
    let start = Instant::now();
    let mut pass = true;
    for (pair, _) in &corpus() {
        let rep = pairs::check_relations(pair, 1e-10).unwrap();
        pass &= rep.pass && rep.r1 <= 1e-10 && rep.r2 <= 1e-10;
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 5.0;
    report(1, "relation soundness, 1000 pairs < 5 s", pass);
}

#[test]
fn criterion_2_derived_identities() {
    let start = Instant::now();
    let mut pass = true;
    for (pair, _) in &corpus() {
        let rep = pairs::check_derived_identities(pair, 1e-10).unwrap();
        pass &= rep.worst() <= 1e-8;
        pass &= rep.g_direct_dev <= 1e-8 && rep.square_dev <= 1e-8;
        // √(t−t²) is not covered by the polynomial identities above. Its
        // unbounded slope at 0 and 1 turns eigenvalue noise ε into √ε, so
        // snap the spectrum at the endpoints first.
        let sqrt_g = |t: f64| {
            let t = if t.abs() <= 1e-9 {
                0.0
            } else if (t - 1.0).abs() <= 1e-9 {
                1.0
            } else {
                t
            };
            (t - t * t).max(0.0).sqrt()
        };
        let fa = matrix::apply_function_on(&pair.a, sqrt_g, (0.0, 1.0), 1e-8).unwrap();
        let fb = matrix::apply_function_on(&pair.b, sqrt_g, (0.0, 1.0), 1e-8).unwrap();
        pass &= matrix::op_norm(&fa.sub(&fb)).unwrap() <= 1e-8;
        pass &= matrix::op_norm(&fa.mul(&pair.diff())).unwrap() <= 1e-8;
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 10.0;
    report(2, "derived identities for t−t², t(t−t²), √(t−t²) < 10 s", pass);
}

#[test]
fn criterion_3_integer_class() {
    let mut pass = true;
    for (pair, meta) in &corpus() {
        let class = reduction::class_of_pair(pair, 1e-8).unwrap();
        pass &= (pair.trace_diff() - class as f64).abs() <= 1e-8;
        let red = reduction::reduce_to_projections(pair, 1e-6).unwrap();
        pass &= class == red.rank_p as i64 - red.rank_q as i64;
        pass &= class == meta.class;
        for conj_seed in 0..10u64 {
            let u = rng::random_unitary(pair.dim(), meta.seed.wrapping_mul(31) + conj_seed);
            let conj = SoftPair {
                a: pair.a.conjugate_by(&u),
                b: pair.b.conjugate_by(&u),
            };
            pass &= reduction::class_of_pair(&conj, 1e-8).unwrap() == class;
        }
    }
    report(3, "integer class equals trace and rank difference, conjugation-invariant", pass);
}

#[test]
fn criterion_4_flip_certification() {
    let start = Instant::now();
    let mut pass = true;
    for seed in 0..100u64 {
        let n = 1 + (seed as usize % 4);
        let k = seed as usize % (n + 1);
        let (pair, _) = pairs::random_valid_pair(n, k, 10_000 + seed).unwrap();
        let path = homotopy::rotation_flip_path(&pair, 101).unwrap();
        let rep = homotopy::verify_path(&path, 1e-9).unwrap();
        pass &= rep.pass && rep.worst_r1 <= 1e-9 && rep.worst_r2 <= 1e-9;
        pass &= rep.classes.iter().all(|&c| c == Some(0));
        let ba = pair.b.direct_sum(&pair.a);
        let ab = pair.a.direct_sum(&pair.b);
        pass &= path.pairs[0].b.sub(&ba).max_abs() <= 1e-12;
        pass &= path.pairs[100].b.sub(&ab).max_abs() <= 1e-12;
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 30.0;
    report(4, "flip homotopy certifies with class 0 < 30 s", pass);
}

#[test]
fn criterion_5_reparametrization() {
    let mut pass = true;
    let functions: [fn(f64) -> f64; 2] = [|t| t * t, |t| 3.0 * t * t - 2.0 * t * t * t];
    for (pair, meta) in &corpus() {
        for f in functions {
            let fa = matrix::apply_function_on(&pair.a, f, (0.0, 1.0), 1e-8).unwrap();
            let fb = matrix::apply_function_on(&pair.b, f, (0.0, 1.0), 1e-8).unwrap();
            pass &= matrix::op_norm(&fa.sub(&fb).sub(&pair.diff())).unwrap() <= 1e-8;
        }
        // Path certification on a subsample keeps the suite fast.
        if meta.seed % 10 == 0 {
            for f in functions {
                let path = homotopy::reparam_path(pair, f, 11).unwrap();
                let rep = homotopy::verify_path(&path, 1e-8).unwrap();
                pass &= rep.pass && rep.classes.iter().all(|&c| c == Some(meta.class));
            }
        }
    }
    report(5, "reparametrizations certify and f(a)−f(b) = a−b", pass);
}

#[test]
fn criterion_6_universal_model() {
    let mut pass = true;
    let grid = universal::uniform_grid(201).unwrap();
    let ga = universal::generator_a(&grid).unwrap();
    let gb = universal::generator_b(&grid).unwrap();
    pass &= universal::check_membership(&ga, 1e-14).pass;
    pass &= universal::check_membership(&gb, 1e-14).pass;
    pass &= universal::generator_pair_worst_residual(&grid).unwrap() <= 1e-14;

    for (pair, meta) in &corpus() {
        let pq = universal::build_pq(pair).unwrap();
        pass &= pq.defect_p <= 1e-8 && pq.defect_q <= 1e-8;
        if meta.seed % 10 == 0 {
            let path = universal::scaling_homotopy_pq(pair, 11).unwrap();
            let rep = homotopy::verify_path(&path, 1e-8).unwrap();
            pass &= rep.pass;
            let last = path.pairs.last().unwrap();
            pass &= last.a.sub(&pq.p).max_abs() <= 1e-12;
            let zero_a = CMatrix::zeros(pair.dim()).direct_sum(&pair.a);
            pass &= path.pairs[0].a.sub(&zero_a).max_abs() <= 1e-12;
        }
    }

    for seed in 0..200u64 {
        let mut stream = rng::rng_from_seed(30_000 + seed);
        let n = 2 + (seed as usize % 6);
        let rank_p = rng::uniform_usize(0, n, &mut stream);
        let rank_q = rng::uniform_usize(0, n, &mut stream);
        let u = rng::random_unitary_from(n, &mut stream);
        let v = rng::random_unitary_from(n, &mut stream);
        let p = rng::seeded_diag_projection(n, rank_p, &mut stream).conjugate_by(&u);
        let q = rng::seeded_diag_projection(n, rank_q, &mut stream).conjugate_by(&v);
        let pair = universal::iota(&p, &q, 1e-10).unwrap();
        pass &= universal::kappa(&pair).unwrap() == rank_p as i64 - rank_q as i64;
    }
    report(6, "universal model: membership, P²=P, scaling endpoints, κ∘ι", pass);
}

#[test]
fn criterion_7_topological_demo() {
    let start = Instant::now();
    let mut pass = true;
    for (lat, lon) in [(32, 64), (64, 128)] {
        let grid = SpaceGrid::sphere(lat, lon).unwrap();
        let bott = funcalg::bott_projection(&grid).unwrap();
        pass &= funcalg::chern_number(&bott).unwrap() == 1;
        if (lat, lon) == (32, 64) {
            pass &= funcalg::chern_number(&bott.complement()).unwrap() == -1;
            let constant = funcalg::MatrixField::constant(&grid, &CMatrix::from_diag(&[1.0, 0.0]));
            pass &= funcalg::chern_number(&constant).unwrap() == 0;
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    pass &= elapsed < 20.0;
    report(7, "Chern numbers 1 / 0 / −1, mesh-independent < 20 s", pass);
}

#[test]
fn criterion_8_negative_controls() {
    let mut pass = true;
    let bad = SoftPair::new(
        CMatrix::from_diag(&[0.5, 1.0]),
        CMatrix::from_diag(&[0.6, 0.0]),
    )
    .unwrap();
    let rep = pairs::check_relations(&bad, 1e-8).unwrap();
    pass &= !rep.pass;
    pass &= (rep.r1 - 0.025).abs() <= 1e-12;

    // Naive contraction of the inequivalent projection pair: at the midpoint
    // (diag(0.5,0), diag(0,0.5)) the first relation fails with r1 = 0.125.
    let a0 = CMatrix::from_diag(&[1.0, 0.0]);
    let b0 = CMatrix::from_diag(&[0.0, 1.0]);
    let params: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
    let pairs_vec: Vec<SoftPair> = params
        .iter()
        .map(|&t| SoftPair {
            a: a0.scale(t),
            b: b0.scale(t),
        })
        .collect();
    let path = PairPath {
        params,
        pairs: pairs_vec,
        worst_r1: 0.0,
        worst_r2: 0.0,
        step_bound: 0.0,
        angle_scale: 1.0,
    };
    let rep = homotopy::verify_path(&path, 1e-9).unwrap();
    pass &= !rep.pass && rep.failing_index.is_some();
    let mid = pairs::check_relations(&path.pairs[5], 1e-9).unwrap();
    pass &= !mid.pass && (mid.r1 - 0.125).abs() <= 1e-12;
    report(8, "negative controls rejected with the expected residuals", pass);
}

fn run_cli(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_softpair"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_9_determinism() {
    let mut pass = true;
    let commands: Vec<Vec<&str>> = vec![
        vec!["gen", "6", "3", "17", "--out", "p.pair"],
        vec!["verify", "p.pair", "--format", "tabular"],
        vec!["class", "p.pair"],
        vec!["reduce", "p.pair", "--out", "red"],
        vec!["homotopy", "flip", "p.pair", "--steps", "21", "--out", "flip.trace"],
        vec!["homotopy", "pq-scale", "p.pair", "--steps", "11", "--out", "pq.trace"],
        vec!["demo", "universal"],
        vec!["demo", "bott", "--grid", "16x32"],
        vec!["demo", "clutch", "--grid", "12x24"],
    ];
    let mut snapshots: Vec<Vec<(String, Vec<u8>)>> = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let mut stdouts = Vec::new();
        for args in &commands {
            let out = run_cli(args, dir.path());
            pass &= out.status.success();
            stdouts.push((format!("stdout:{}", args.join(" ")), out.stdout));
        }
        let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir.path())
            .unwrap()
            .flatten()
            .filter(|e| e.path().is_file())
            .map(|e| {
                (
                    e.file_name().to_string_lossy().into_owned(),
                    std::fs::read(e.path()).unwrap(),
                )
            })
            .collect();
        files.sort();
        files.extend(stdouts);
        snapshots.push(files);
    }
    pass &= snapshots[0] == snapshots[1];
    pass &= snapshots[0].iter().filter(|(n, _)| !n.starts_with("stdout:")).count() >= 10;
    report(9, "bit-identical re-runs of every command", pass);
}
