//! Splitting a valid pair over ℂ into a common part with spectrum inside
//! (0,1) and a pair of projections, and the integer class tr(a−b).

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix};
use crate::pairs::{check_relations, SoftPair};

/// Default separation between the interior spectrum and {0, 1}. Eigenvalues
/// inside the dead zones (0, tol) and (1−tol, 1) are rounded toward {0, 1};
/// the relations force exact coincidence in theory, so the dead zone only
/// absorbs numerical noise.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Adapted-basis decomposition a = U(c⊕p)U*, b = U(c⊕q)U*.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Columns: basis adapted to L ⊕ L⊥ (interior eigenvectors first).
    pub frame: CMatrix,
    /// Dimension of L, the span of interior eigenvectors.
    pub k: usize,
    /// Common k×k Hermitian part with spectrum in (0, 1).
    pub c: CMatrix,
    /// Projection parts of size n−k.
    pub p: CMatrix,
    pub q: CMatrix,
    pub rank_p: usize,
    pub rank_q: usize,
    /// rank p − rank q.
    pub class: i64,
}

/// Splits a valid pair into common part and projections: L is the span of
/// a's eigenvectors with interior eigenvalues; b must agree with a on L,
/// and the compressions to L⊥ round to projections.
pub fn reduce_to_projections(pair: &SoftPair, cluster_tol: f64) -> Result<Reduction> {
    let rel = check_relations(pair, 100.0 * matrix::DEFAULT_ATOL)?;
    if !rel.pass {
        return Err(Error::RelationViolation(format!(
            "reduce_to_projections needs a valid pair (r1={:.3e}, r2={:.3e})",
            rel.r1, rel.r2
        )));
    }
    let n = pair.dim();
    let sys = matrix::eig_hermitian(&pair.a)?;

    // Interior eigenvectors first, boundary after; ascending order kept
    // within each group.
    let interior: Vec<usize> = (0..n)
        .filter(|&i| sys.eigenvalues[i] > cluster_tol && sys.eigenvalues[i] < 1.0 - cluster_tol)
        .collect();
    let boundary: Vec<usize> = (0..n)
        .filter(|&i| !(sys.eigenvalues[i] > cluster_tol && sys.eigenvalues[i] < 1.0 - cluster_tol))
        .collect();
    let k = interior.len();
    let mut frame = CMatrix::zeros(n);
    for (newj, &oldj) in interior.iter().chain(boundary.iter()).enumerate() {
        for i in 0..n {
            frame[(i, newj)] = sys.frame[(i, oldj)];
        }
    }

    let interior_vals: Vec<f64> = interior.iter().map(|&i| sys.eigenvalues[i]).collect();
    let c = CMatrix::from_diag(&interior_vals);

    let b_adapted = pair.b.conjugate_by(&frame).hermitize();

    // L must be invariant for b with b|_L = a|_L: in the adapted basis the
    // first k columns of b must equal diag(interior eigenvalues of a).
    let mut invariance_dev = 0.0_f64;
    for i in 0..n {
        for j in 0..k {
            let expected = if i == j {
                num_complex::Complex64::new(interior_vals[j], 0.0)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            };
            invariance_dev = invariance_dev.max((b_adapted[(i, j)] - expected).norm());
        }
    }
    if invariance_dev > 1e-8 {
        return Err(Error::NotReducible(format!(
            "b does not agree with a on the interior subspace (deviation {invariance_dev:.3e})"
        )));
    }

    // Projection parts: round eigenvalues of the L⊥ compressions to {0,1}.
    let m = n - k;
    let round_to_projection = |comp: &CMatrix| -> Result<(CMatrix, usize)> {
        if m == 0 {
            return Ok((CMatrix::zeros(0), 0));
        }
        let csys = matrix::eig_hermitian(comp)?;
        let mut rank = 0usize;
        let mut rounded = Vec::with_capacity(m);
        for &lam in &csys.eigenvalues {
            let r = if lam >= 0.5 { 1.0 } else { 0.0 };
            if (lam - r).abs() > 10.0 * cluster_tol {
                return Err(Error::NotReducible(format!(
                    "eigenvalue {lam} of a corner compression is not near 0 or 1"
                )));
            }
            if r == 1.0 {
                rank += 1;
            }
            rounded.push(r);
        }
        let proj = CMatrix::from_diag(&rounded)
            .conjugate_by(&csys.frame.dagger())
            .hermitize();
        let defect = proj.sub(&proj.mul(&proj));
        if matrix::op_norm(&defect)? > 10.0 * cluster_tol {
            return Err(Error::NotReducible("rounded corner is not a projection".into()));
        }
        Ok((proj, rank))
    };

    let a_corner = pair.a.conjugate_by(&frame).hermitize().block(k..n, k..n);
    let b_corner = b_adapted.block(k..n, k..n);
    let (p, rank_p) = round_to_projection(&a_corner)?;
    let (q, rank_q) = round_to_projection(&b_corner)?;

    Ok(Reduction {
        frame,
        k,
        c,
        p,
        q,
        rank_p,
        rank_q,
        class: rank_p as i64 - rank_q as i64,
    })
}

impl Reduction {
    /// ‖frame*·a·frame − (c⊕p)‖ and the same for b — the invariant the
    /// decomposition promises.
    pub fn reconstruction_deviations(&self, pair: &SoftPair) -> Result<(f64, f64)> {
        let model_a = self.c.direct_sum(&self.p);
        let model_b = self.c.direct_sum(&self.q);
        let dev_a = matrix::op_norm(&pair.a.conjugate_by(&self.frame).sub(&model_a))?;
        let dev_b = matrix::op_norm(&pair.b.conjugate_by(&self.frame).sub(&model_b))?;
        Ok((dev_a, dev_b))
    }
}

/// The integer class tr(a−b): O(n) trace as the production path, with the
/// reduction as a cross-check in tests.
pub fn class_of_pair(pair: &SoftPair, tol: f64) -> Result<i64> {
    let rel = check_relations(pair, tol.max(matrix::DEFAULT_ATOL))?;
    if !rel.pass {
        return Err(Error::RelationViolation(format!(
            "class is only defined for valid pairs (r1={:.3e}, r2={:.3e})",
            rel.r1, rel.r2
        )));
    }
    let tau = pair.trace_diff();
    let rounded = tau.round();
    if (tau - rounded).abs() > tol {
        return Err(Error::NotNearInteger { value: tau });
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairs::{direct_sum, random_valid_pair, reparametrize};
    use crate::rng;

    #[test]
    fn reduce_block_diagonal() {
        let pair = SoftPair {
            a: CMatrix::from_diag(&[0.5, 1.0]),
            b: CMatrix::from_diag(&[0.5, 0.0]),
        };
        let red = reduce_to_projections(&pair, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(red.k, 1);
        assert_eq!(red.class, 1);
        assert!((red.c[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((red.p[(0, 0)].re - 1.0).abs() < 1e-12);
        assert!(red.q[(0, 0)].norm() < 1e-12);
        let (da, db) = red.reconstruction_deviations(&pair).unwrap();
        assert!(da < 1e-8 && db < 1e-8);
    }

    #[test]
    fn reduce_equal_pair_interior_spectrum() {
        let u = rng::random_unitary(3, 8);
        let a = CMatrix::from_diag(&[0.2, 0.5, 0.8]).conjugate_by(&u).hermitize();
        let pair = SoftPair { a: a.clone(), b: a };
        let red = reduce_to_projections(&pair, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(red.k, 3);
        assert_eq!(red.p.dim(), 0);
        assert_eq!(red.class, 0);
    }

    #[test]
    fn reduce_recovers_generator_class() {
        let (pair, meta) = random_valid_pair(6, 3, 11).unwrap();
        let red = reduce_to_projections(&pair, DEFAULT_CLUSTER_TOL).unwrap();
        assert_eq!(red.k, 3);
        assert_eq!(red.class, meta.class);
        let (da, db) = red.reconstruction_deviations(&pair).unwrap();
        assert!(da < 1e-8 && db < 1e-8, "da={da:.3e} db={db:.3e}");
    }

    #[test]
    fn class_of_projection_pair() {
        let pair = SoftPair {
            a: CMatrix::identity(2),
            b: CMatrix::zeros(2),
        };
        assert_eq!(class_of_pair(&pair, 1e-8).unwrap(), 2);
    }

    #[test]
    fn class_of_equal_pair() {
        let u = rng::random_unitary(4, 2);
        let a = CMatrix::from_diag(&[0.1, 0.4, 0.6, 1.0]).conjugate_by(&u).hermitize();
        let pair = SoftPair { a: a.clone(), b: a };
        assert_eq!(class_of_pair(&pair, 1e-8).unwrap(), 0);
    }

    #[test]
    fn flip_sum_has_class_zero() {
        let (pair, _) = random_valid_pair(4, 2, 19).unwrap();
        let flipped = SoftPair {
            a: pair.b.clone(),
            b: pair.a.clone(),
        };
        let sum = direct_sum(&pair, &flipped);
        assert_eq!(class_of_pair(&sum, 1e-8).unwrap(), 0);
    }

    #[test]
    fn class_additive_under_direct_sum() {
        let (p, mp) = random_valid_pair(4, 1, 3).unwrap();
        let (q, mq) = random_valid_pair(3, 1, 4).unwrap();
        let s = direct_sum(&p, &q);
        assert_eq!(class_of_pair(&s, 1e-8).unwrap(), mp.class + mq.class);
    }

    #[test]
    fn class_invariant_under_reparametrization() {
        let (p, meta) = random_valid_pair(5, 2, 6).unwrap();
        for f in [|t: f64| t * t, |t: f64| 3.0 * t * t - 2.0 * t * t * t] {
            let q = reparametrize(&p, f).unwrap();
            assert_eq!(class_of_pair(&q, 1e-8).unwrap(), meta.class);
        }
    }

    #[test]
    fn class_invariant_under_conjugation() {
        let (p, meta) = random_valid_pair(5, 2, 6).unwrap();
        let u = rng::random_unitary(5, 77);
        let conj = SoftPair {
            a: p.a.conjugate_by(&u).hermitize(),
            b: p.b.conjugate_by(&u).hermitize(),
        };
        assert_eq!(class_of_pair(&conj, 1e-8).unwrap(), meta.class);
    }

    #[test]
    fn class_rejects_invalid_pair() {
        let pair = SoftPair {
            a: CMatrix::from_diag(&[0.5, 1.0]),
            b: CMatrix::from_diag(&[0.6, 0.0]),
        };
        assert!(matches!(
            class_of_pair(&pair, 1e-8),
            Err(Error::RelationViolation(_))
        ));
    }
}
