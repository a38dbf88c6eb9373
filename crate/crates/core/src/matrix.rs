//! Dense complex Hermitian linear algebra: norms, positivity,
//! eigendecomposition and continuous functional calculus.
//!
//! Matrices are desk-scale (n ≤ 64); everything is O(n³) with a cyclic
//! Jacobi eigensolver and no pivot randomness, so results are
//! reproducible byte-for-byte.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default absolute tolerance for comparisons against zero.
pub const DEFAULT_ATOL: f64 = 1e-10;
/// Default relative tolerance for reconstruction-style checks.
pub const DEFAULT_RTOL: f64 = 1e-9;
/// Eigenvalues closer than this are treated as one spectral cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

const HERMITIAN_RTOL: f64 = 1e-12;

/// Dense n×n complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds from a flat row-major slice of length n².
    pub fn from_flat(n: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::ShapeError(format!(
                "expected {} entries for a {n}×{n} matrix, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(CMatrix {
            n,
            data: entries.to_vec(),
        })
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = CMatrix::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Builds from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = CMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> CMatrix {
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix { n: self.n, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix { n: self.n, data }
    }

    pub fn scale(&self, s: f64) -> CMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        CMatrix { n: self.n, data }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch in mul");
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Deviation from self-adjointness, ‖M − M*‖_F.
    pub fn hermitian_deviation(&self) -> f64 {
        self.sub(&self.dagger()).frobenius()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= HERMITIAN_RTOL * self.frobenius().max(1.0)
    }

    fn require_hermitian(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::InvalidInput("non-finite entries".into()));
        }
        let dev = self.hermitian_deviation();
        if dev > HERMITIAN_RTOL * self.frobenius().max(1.0) {
            return Err(Error::NotHermitian { deviation: dev });
        }
        Ok(())
    }

    /// (M + M*)/2 — removes rounding-level asymmetry before Jacobi sweeps.
    pub fn hermitize(&self) -> CMatrix {
        self.add(&self.dagger()).scale(0.5)
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &CMatrix) -> CMatrix {
        let n = self.n + other.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..self.n {
            for j in 0..self.n {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                out[(self.n + i, self.n + j)] = other[(i, j)];
            }
        }
        out
    }

    /// Assembles a 2×2 block matrix from four n×n blocks.
    pub fn from_blocks(b11: &CMatrix, b12: &CMatrix, b21: &CMatrix, b22: &CMatrix) -> CMatrix {
        let n = b11.n;
        assert!(b12.n == n && b21.n == n && b22.n == n, "block size mismatch");
        let mut out = CMatrix::zeros(2 * n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = b11[(i, j)];
                out[(i, n + j)] = b12[(i, j)];
                out[(n + i, j)] = b21[(i, j)];
                out[(n + i, n + j)] = b22[(i, j)];
            }
        }
        out
    }

    /// Extracts the sub-block with the given row and column index ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> CMatrix {
        assert_eq!(rows.len(), cols.len(), "only square blocks supported");
        let k = rows.len();
        let mut out = CMatrix::zeros(k);
        for (bi, i) in rows.clone().enumerate() {
            for (bj, j) in cols.clone().enumerate() {
                out[(bi, bj)] = self[(i, j)];
            }
        }
        out
    }

    /// U* M U for unitary U.
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        u.dagger().mul(self).mul(u)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and a
/// unitary frame whose columns are the eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub frame: CMatrix,
}

impl EigenSystem {
    /// frame · diag(f(λ)) · frame*.
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.frame.clone();
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let v = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= v;
            }
        }
        scaled.mul(&self.frame.dagger()).hermitize()
    }
}

/// Spectral norm (largest singular value). For Hermitian input this is the
/// largest |eigenvalue|.
pub fn op_norm(m: &CMatrix) -> Result<f64> {
    if !m.is_finite() {
        return Err(Error::InvalidInput("non-finite entries".into()));
    }
    if m.dim() == 0 {
        return Ok(0.0);
    }
    // Singular values via the Hermitian PSD matrix M*M.
    let gram = m.dagger().mul(m).hermitize();
    let (vals, _) = jacobi_eigen(&gram);
    let top = vals.iter().cloned().fold(0.0_f64, f64::max);
    Ok(top.max(0.0).sqrt())
}

/// Minimum eigenvalue of a Hermitian matrix; ≥ −tol means positive.
pub fn positivity_margin(m: &CMatrix) -> Result<f64> {
    m.require_hermitian()?;
    if m.dim() == 0 {
        return Ok(0.0);
    }
    let sys = eig_hermitian(m)?;
    Ok(sys.eigenvalues[0])
}

/// Cyclic Jacobi eigendecomposition for Hermitian matrices.
///
/// Deterministic: fixed sweep order, ascending eigenvalue sort with stable
/// tie-break, and each eigenvector's first nonzero component made real
/// positive.
pub fn eig_hermitian(m: &CMatrix) -> Result<EigenSystem> {
    m.require_hermitian()?;
    let a = m.hermitize();
    let n = a.dim();
    let (mut vals, mut frame) = jacobi_eigen(&a);

    // Ascending sort, stable on the original index.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap().then(i.cmp(&j)));
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let mut sorted_frame = CMatrix::zeros(n);
    for (newj, &oldj) in order.iter().enumerate() {
        for i in 0..n {
            sorted_frame[(i, newj)] = frame[(i, oldj)];
        }
    }
    vals = sorted_vals;
    frame = sorted_frame;

    // Phase convention: first component of each column with magnitude above
    // threshold made real positive. Columns are unit vectors, so some
    // component is ≥ 1/√n and the threshold always triggers.
    for j in 0..n {
        let mut phase = Complex64::new(1.0, 0.0);
        for i in 0..n {
            let z = frame[(i, j)];
            if z.norm() > 1e-8 {
                phase = z.conj() / z.norm();
                break;
            }
        }
        for i in 0..n {
            frame[(i, j)] *= phase;
        }
    }

    Ok(EigenSystem {
        eigenvalues: vals,
        frame,
    })
}

/// One full cyclic Jacobi run; returns unsorted eigenvalues and eigenvectors.
fn jacobi_eigen(a: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.dim();
    let mut a = a.clone();
    let mut v = CMatrix::identity(n);
    if n <= 1 {
        let vals = (0..n).map(|i| a[(i, i)].re).collect();
        return (vals, v);
    }

    let scale = a.frobenius().max(1.0);
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut off = 0.0_f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off += 2.0 * a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let gn = g.norm();
                if gn <= 1e-300 {
                    continue;
                }
                let phase = g / gn;
                let alpha = a[(p, p)].re;
                let beta = a[(q, q)].re;
                let tau = (alpha - beta) / (2.0 * gn);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se_pos = phase * s; // s·e^{iφ}
                let se_neg = phase.conj() * s; // s·e^{−iφ}

                // Column update: B = A·R with R[p][p]=R[q][q]=c,
                // R[p][q]=−s·e^{iφ}, R[q][p]=s·e^{−iφ}.
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * c + akq * se_neg;
                    a[(k, q)] = -akp * se_pos + akq * c;
                }
                // Row update: A' = R*·B.
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * c + aqk * se_pos;
                    a[(q, k)] = -apk * se_neg + aqk * c;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * se_neg;
                    v[(k, q)] = -vkp * se_pos + vkq * c;
                }
            }
        }
    }

    let vals = (0..n).map(|i| a[(i, i)].re).collect();
    (vals, v)
}

/// Functional calculus: f(M) = frame·diag(f(λ))·frame* for Hermitian M.
pub fn apply_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let sys = eig_hermitian(m)?;
    Ok(sys.reassemble(f))
}

/// Functional calculus with an explicit closed domain check on the spectrum.
pub fn apply_function_on(
    m: &CMatrix,
    f: impl Fn(f64) -> f64,
    domain: (f64, f64),
    slack: f64,
) -> Result<CMatrix> {
    let sys = eig_hermitian(m)?;
    for &lam in &sys.eigenvalues {
        if lam < domain.0 - slack || lam > domain.1 + slack {
            return Err(Error::DomainError(format!(
                "eigenvalue {lam} outside [{}, {}]",
                domain.0, domain.1
            )));
        }
    }
    Ok(sys.reassemble(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn op_norm_identity() {
        assert!((op_norm(&CMatrix::identity(2)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn op_norm_diagonal() {
        let m = CMatrix::from_diag(&[0.5, -0.25]);
        assert!((op_norm(&m).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn op_norm_nilpotent() {
        // [[0,2],[0,0]] has singular values {2, 0}: M*M = diag(0,4).
        let m = CMatrix::from_real_rows(&[&[0.0, 2.0], &[0.0, 0.0]]);
        assert!((op_norm(&m).unwrap() - 2.0).abs() < 1e-10);
    }

    #[test]
    fn op_norm_rejects_nan() {
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = c(f64::NAN, 0.0);
        assert!(matches!(op_norm(&m), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn eig_diagonal() {
        let m = CMatrix::from_diag(&[0.3, 0.7]);
        let sys = eig_hermitian(&m).unwrap();
        assert!((sys.eigenvalues[0] - 0.3).abs() < 1e-12);
        assert!((sys.eigenvalues[1] - 0.7).abs() < 1e-12);
        assert!(sys.frame.sub(&CMatrix::identity(2)).frobenius() < 1e-10);
    }

    #[test]
    fn eig_offdiagonal() {
        // Characteristic polynomial λ²−1 by hand.
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let sys = eig_hermitian(&m).unwrap();
        assert!((sys.eigenvalues[0] + 1.0).abs() < 1e-12);
        assert!((sys.eigenvalues[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eig_recovers_seeded_conjugation() {
        // The construction U·diag(0.2,0.9)·U* is its own oracle.
        let u = crate::rng::random_unitary(2, 42);
        let d = CMatrix::from_diag(&[0.2, 0.9]);
        let m = d.conjugate_by(&u.dagger()).hermitize();
        let sys = eig_hermitian(&m).unwrap();
        assert!((sys.eigenvalues[0] - 0.2).abs() < 1e-10);
        assert!((sys.eigenvalues[1] - 0.9).abs() < 1e-10);
        // Frame unitarity and reconstruction.
        let uu = sys.frame.dagger().mul(&sys.frame);
        assert!(uu.sub(&CMatrix::identity(2)).frobenius() < 1e-10);
        let rec = sys.reassemble(|t| t);
        assert!(rec.sub(&m).frobenius() < 1e-9);
    }

    #[test]
    fn eig_complex_entries() {
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = c(1.0, 0.0);
        m[(0, 1)] = c(0.0, -1.0);
        m[(1, 0)] = c(0.0, 1.0);
        m[(1, 1)] = c(1.0, 0.0);
        // Pauli-y shifted: eigenvalues 0 and 2.
        let sys = eig_hermitian(&m).unwrap();
        assert!((sys.eigenvalues[0] - 0.0).abs() < 1e-12);
        assert!((sys.eigenvalues[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn eig_deterministic() {
        let u = crate::rng::random_unitary(5, 3);
        let d = CMatrix::from_diag(&[0.1, 0.2, 0.5, 0.5, 0.8]);
        let m = d.conjugate_by(&u).hermitize();
        let s1 = eig_hermitian(&m).unwrap();
        let s2 = eig_hermitian(&m).unwrap();
        assert_eq!(s1.eigenvalues, s2.eigenvalues);
        assert_eq!(s1.frame.entries(), s2.frame.entries());
    }

    #[test]
    fn apply_identity_function() {
        let u = crate::rng::random_unitary(3, 9);
        let m = CMatrix::from_diag(&[0.2, 0.4, 0.9]).conjugate_by(&u).hermitize();
        let fm = apply_function(&m, |t| t).unwrap();
        assert!(fm.sub(&m).frobenius() < 1e-10);
    }

    #[test]
    fn apply_g_vanishes_on_projection() {
        let p = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let g = apply_function(&p, |t| t - t * t).unwrap();
        assert!(g.frobenius() < 1e-10);
    }

    #[test]
    fn apply_sqrt_g() {
        // f(t)=√(t−t²) on diag(0.5, 1) → diag(0.5, 0).
        let m = CMatrix::from_diag(&[0.5, 1.0]);
        let fm = apply_function(&m, |t| (t - t * t).max(0.0).sqrt()).unwrap();
        assert!(fm.sub(&CMatrix::from_diag(&[0.5, 0.0])).frobenius() < 1e-10);
    }

    #[test]
    fn apply_function_square_is_mul() {
        let u = crate::rng::random_unitary(4, 17);
        let m = CMatrix::from_diag(&[0.1, 0.3, 0.6, 0.95]).conjugate_by(&u).hermitize();
        let sq = apply_function(&m, |t| t * t).unwrap();
        assert!(sq.sub(&m.mul(&m)).frobenius() < 1e-9);
    }

    #[test]
    fn apply_function_domain_check() {
        let m = CMatrix::from_diag(&[0.5, 1.5]);
        let r = apply_function_on(&m, |t| t, (0.0, 1.0), 1e-9);
        assert!(matches!(r, Err(Error::DomainError(_))));
    }

    #[test]
    fn positivity_margins() {
        assert!((positivity_margin(&CMatrix::from_diag(&[0.0, 1.0])).unwrap()).abs() < 1e-12);
        assert!(
            (positivity_margin(&CMatrix::from_diag(&[-0.1, 1.0])).unwrap() + 0.1).abs() < 1e-12
        );
        let p = CMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        assert!(positivity_margin(&p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn direct_sum_norm() {
        let m = CMatrix::from_diag(&[0.5]);
        let n = CMatrix::from_diag(&[0.8]);
        let s = m.direct_sum(&n);
        assert!((op_norm(&s).unwrap() - 0.8).abs() < 1e-10);
    }
}
