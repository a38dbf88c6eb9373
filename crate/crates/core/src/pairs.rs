//! Soft projection pairs: positive contractions (a, b) with
//! (a−a²)(a−b) = 0 and (b−b²)(a−b) = 0, the verifier for those relations,
//! the derived functional-calculus identities, spectra comparison, direct
//! sums, reparametrization, and a seeded generator of exactly-valid pairs.

use crate::error::{Error, Result};
use crate::matrix::{self, apply_function, op_norm, positivity_margin, CMatrix};
use crate::rng;

/// A candidate pair (a, b) of Hermitian matrices. Validity against the
/// relations is a checked property, not a type invariant, so that the
/// verifier itself can be exercised on failures.
#[derive(Debug, Clone)]
pub struct SoftPair {
    pub a: CMatrix,
    pub b: CMatrix,
}

/// Generator bookkeeping attached to pair files.
#[derive(Debug, Clone, PartialEq)]
pub struct PairMeta {
    pub seed: u64,
    pub k: usize,
    pub class: i64,
}

impl SoftPair {
    pub fn new(a: CMatrix, b: CMatrix) -> Result<Self> {
        if a.dim() != b.dim() {
            return Err(Error::ShapeError(format!(
                "a is {}×{0} but b is {1}×{1}",
                a.dim(),
                b.dim()
            )));
        }
        Ok(SoftPair { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn diff(&self) -> CMatrix {
        self.a.sub(&self.b)
    }

    /// Real part of trace(a − b); integer-valued on valid pairs.
    pub fn trace_diff(&self) -> f64 {
        self.diff().trace().re
    }
}

/// Residuals for each relation plus the verdict.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub norm_a: f64,
    pub norm_b: f64,
    pub positivity_a: f64,
    pub positivity_b: f64,
    /// ‖(a−a²)(a−b)‖
    pub r1: f64,
    /// ‖(b−b²)(a−b)‖
    pub r2: f64,
    pub pass: bool,
    pub tol: f64,
}

/// Verifies the relations at the given tolerance.
pub fn check_relations(p: &SoftPair, tol: f64) -> Result<RelationReport> {
    let a = &p.a;
    let b = &p.b;
    if a.dim() != b.dim() {
        return Err(Error::ShapeError("pair dimensions differ".into()));
    }
    let diff = p.diff();
    let ga = a.sub(&a.mul(a));
    let gb = b.sub(&b.mul(b));
    let norm_a = op_norm(a)?;
    let norm_b = op_norm(b)?;
    let positivity_a = positivity_margin(a)?;
    let positivity_b = positivity_margin(b)?;
    let r1 = op_norm(&ga.mul(&diff))?;
    let r2 = op_norm(&gb.mul(&diff))?;
    let pass = norm_a <= 1.0 + tol
        && norm_b <= 1.0 + tol
        && positivity_a >= -tol
        && positivity_b >= -tol
        && r1 <= tol
        && r2 <= tol;
    Ok(RelationReport {
        norm_a,
        norm_b,
        positivity_a,
        positivity_b,
        r1,
        r2,
        pass,
        tol,
    })
}

/// Deviations in the identities that follow from the relations: the spectral
/// squares agree, a−a² = b−b², and f(a)=f(b), f(a)(a−b)=0 for the generators
/// g(t)=t−t² and h(t)=t·g(t) of the functions vanishing at 0 and 1.
#[derive(Debug, Clone)]
pub struct DerivedReport {
    /// ‖(a−a²)² − (b−b²)²‖
    pub square_dev: f64,
    /// ‖(a−a²) − (b−b²)‖
    pub g_direct_dev: f64,
    /// ‖g(a) − g(b)‖ via functional calculus
    pub g_calc_dev: f64,
    /// ‖h(a) − h(b)‖
    pub h_calc_dev: f64,
    /// ‖g(a)(a−b)‖
    pub g_annihilation: f64,
    /// ‖h(a)(a−b)‖
    pub h_annihilation: f64,
    pub pass: bool,
    pub tol: f64,
}

impl DerivedReport {
    pub fn worst(&self) -> f64 {
        [
            self.square_dev,
            self.g_direct_dev,
            self.g_calc_dev,
            self.h_calc_dev,
            self.g_annihilation,
            self.h_annihilation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Checks the derived identities at derived-tol = 100·tol. Each derivation
/// multiplies at most three bounded factors, so the cushion avoids false
/// negatives without hiding real violations.
pub fn check_derived_identities(p: &SoftPair, tol: f64) -> Result<DerivedReport> {
    let rel = check_relations(p, tol)?;
    if !rel.pass {
        return Err(Error::RelationViolation(format!(
            "precondition: relations fail at tol {tol} (r1={:.3e}, r2={:.3e})",
            rel.r1, rel.r2
        )));
    }
    let derived_tol = 100.0 * tol;
    let a = &p.a;
    let b = &p.b;
    let diff = p.diff();
    let ga = a.sub(&a.mul(a));
    let gb = b.sub(&b.mul(b));
    let square_dev = op_norm(&ga.mul(&ga).sub(&gb.mul(&gb)))?;
    let g_direct_dev = op_norm(&ga.sub(&gb))?;
    let g = |t: f64| t - t * t;
    let h = |t: f64| t * (t - t * t);
    let ga_c = apply_function(a, g)?;
    let gb_c = apply_function(b, g)?;
    let ha_c = apply_function(a, h)?;
    let hb_c = apply_function(b, h)?;
    let g_calc_dev = op_norm(&ga_c.sub(&gb_c))?;
    let h_calc_dev = op_norm(&ha_c.sub(&hb_c))?;
    let g_annihilation = op_norm(&ga_c.mul(&diff))?;
    let h_annihilation = op_norm(&ha_c.mul(&diff))?;
    let report = DerivedReport {
        square_dev,
        g_direct_dev,
        g_calc_dev,
        h_calc_dev,
        g_annihilation,
        h_annihilation,
        pass: false,
        tol: derived_tol,
    };
    let pass = report.worst() <= derived_tol;
    Ok(DerivedReport { pass, ..report })
}

/// Comparison of the interior spectra (eigenvalues away from 0 and 1),
/// which must coincide as multisets for valid pairs.
#[derive(Debug, Clone)]
pub struct SpectraReport {
    pub interior_a: Vec<f64>,
    pub interior_b: Vec<f64>,
    /// Pairs of indices into (interior_a, interior_b).
    pub matching: Vec<(usize, usize)>,
    pub worst_gap: f64,
    pub pass: bool,
}

/// Compares eigenvalues of a and b lying in [delta, 1−delta]; they must
/// match as multisets within 10·delta. Greedy nearest-neighbor pairing after
/// sorting is adequate since interior eigenvalues coincide exactly in theory.
pub fn compare_spectra(p: &SoftPair, delta: f64) -> Result<SpectraReport> {
    let rel = check_relations(p, delta.max(matrix::DEFAULT_ATOL))?;
    if !rel.pass {
        return Err(Error::RelationViolation(
            "compare_spectra requires a valid pair".into(),
        ));
    }
    let interior = |m: &CMatrix| -> Result<Vec<f64>> {
        let sys = matrix::eig_hermitian(m)?;
        Ok(sys
            .eigenvalues
            .into_iter()
            .filter(|&l| l >= delta && l <= 1.0 - delta)
            .collect())
    };
    let interior_a = interior(&p.a)?;
    let interior_b = interior(&p.b)?;
    if interior_a.len() != interior_b.len() {
        return Err(Error::NoMatching(format!(
            "interior spectra have sizes {} and {}",
            interior_a.len(),
            interior_b.len()
        )));
    }
    // Both lists ascend; pair positionally and record the worst gap.
    let mut matching = Vec::with_capacity(interior_a.len());
    let mut worst_gap = 0.0_f64;
    for i in 0..interior_a.len() {
        matching.push((i, i));
        worst_gap = worst_gap.max((interior_a[i] - interior_b[i]).abs());
    }
    let pass = worst_gap <= 10.0 * delta;
    if !pass {
        return Err(Error::NoMatching(format!(
            "worst eigenvalue gap {worst_gap:.3e} exceeds {:.3e}",
            10.0 * delta
        )));
    }
    Ok(SpectraReport {
        interior_a,
        interior_b,
        matching,
        worst_gap,
        pass,
    })
}

/// Block-diagonal sum (a⊕c, b⊕d); validity is preserved exactly.
pub fn direct_sum(p: &SoftPair, q: &SoftPair) -> SoftPair {
    SoftPair {
        a: p.a.direct_sum(&q.a),
        b: p.b.direct_sum(&q.b),
    }
}

/// Validates that f maps [0,1] into [0,1] with f(0)=0, f(1)=1, sampling at
/// 1024 points. Functional calculus only ever evaluates f at eigenvalues,
/// so sampling is for validation only.
pub fn validate_reparam_function(f: &impl Fn(f64) -> f64) -> Result<()> {
    if f(0.0).abs() > 1e-12 || (f(1.0) - 1.0).abs() > 1e-12 {
        return Err(Error::DomainError(
            "reparametrization must fix 0 and 1".into(),
        ));
    }
    for i in 0..=1024 {
        let t = i as f64 / 1024.0;
        let v = f(t);
        if !(-1e-12..=1.0 + 1e-12).contains(&v) {
            return Err(Error::DomainError(format!(
                "f({t}) = {v} leaves [0,1]"
            )));
        }
    }
    Ok(())
}

/// Applies f with f(0)=0, f(1)=1 to both entries; the result again satisfies
/// the relations and f(a)−f(b) = a−b.
pub fn reparametrize(p: &SoftPair, f: impl Fn(f64) -> f64) -> Result<SoftPair> {
    validate_reparam_function(&f)?;
    let a = matrix::apply_function_on(&p.a, &f, (0.0, 1.0), 1e-8)?;
    let b = matrix::apply_function_on(&p.b, &f, (0.0, 1.0), 1e-8)?;
    Ok(SoftPair { a, b })
}

/// Generates an exactly-valid pair in the canonical form
/// (U(c⊕p)U*, U(c⊕q)U*): c a k×k Hermitian with eigenvalues in (0.05, 0.95),
/// p, q diagonal 0/1 projections of size n−k, U a seeded unitary.
/// Deterministic in (n, k, seed); the metadata records rank p − rank q.
pub fn random_valid_pair(n: usize, k: usize, seed: u64) -> Result<(SoftPair, PairMeta)> {
    if k > n {
        return Err(Error::ShapeError(format!("k = {k} exceeds n = {n}")));
    }
    let mut stream = rng::rng_from_seed(seed);
    let m = n - k;

    // Common part: seeded eigenvalues strictly inside (0.05, 0.95),
    // conjugated by a seeded k×k unitary.
    let core = if k > 0 {
        let eigs: Vec<f64> = (0..k)
            .map(|_| rng::uniform_in(0.05, 0.95, &mut stream))
            .collect();
        let v = rng::random_unitary_from(k, &mut stream);
        CMatrix::from_diag(&eigs).conjugate_by(&v.dagger()).hermitize()
    } else {
        CMatrix::zeros(0)
    };

    let (proj_p, proj_q, rank_p, rank_q) = if m > 0 {
        let rank_p = rng::uniform_usize(0, m, &mut stream);
        let rank_q = rng::uniform_usize(0, m, &mut stream);
        let p = rng::seeded_diag_projection(m, rank_p, &mut stream);
        let q = rng::seeded_diag_projection(m, rank_q, &mut stream);
        (p, q, rank_p, rank_q)
    } else {
        (CMatrix::zeros(0), CMatrix::zeros(0), 0, 0)
    };

    let u = rng::random_unitary_from(n, &mut stream);
    let a = core.direct_sum(&proj_p).conjugate_by(&u.dagger()).hermitize();
    let b = core.direct_sum(&proj_q).conjugate_by(&u.dagger()).hermitize();
    Ok((
        SoftPair { a, b },
        PairMeta {
            seed,
            k,
            class: rank_p as i64 - rank_q as i64,
        },
    ))
}
