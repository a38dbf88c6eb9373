//! A sampled model of the universal algebra for the relations: M₂-valued
//! functions on [−1,1] vanishing at −1, diagonal at 1, and confined to the
//! upper-left corner on [−1,0]; its two canonical generators; the
//! projections P, Q built from a pair; the scaling homotopy connecting
//! (P, Q) to (0⊕a, 0⊕b); and the integer correspondence κ / ι.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::homotopy::PairPath;
use crate::matrix::{self, apply_function, op_norm, CMatrix};
use crate::pairs::{check_relations, SoftPair};
use crate::reduction::class_of_pair;

/// Default sample grid: 201 uniform points on [−1, 1]; −1, 0 and 1 are
/// exact samples (the three constraint points).
pub const DEFAULT_GRID_POINTS: usize = 201;

/// A sampled M₂-valued function on [−1, 1].
#[derive(Debug, Clone)]
pub struct DElement {
    pub grid: Vec<f64>,
    pub values: Vec<CMatrix>,
}

/// Builds the default uniform grid. Point count must be odd so that 0 is an
/// exact sample.
pub fn uniform_grid(points: usize) -> Result<Vec<f64>> {
    validate_point_count(points)?;
    let m = points - 1;
    Ok((0..points)
        .map(|i| -1.0 + 2.0 * i as f64 / m as f64)
        .collect())
}

fn validate_point_count(points: usize) -> Result<()> {
    if points < 3 || points % 2 == 0 {
        return Err(Error::BadGrid(format!(
            "need an odd point count ≥ 3 so that −1, 0, 1 are samples (got {points})"
        )));
    }
    Ok(())
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 3 {
        return Err(Error::BadGrid("grid needs at least 3 points".into()));
    }
    if !grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::BadGrid("grid must be strictly ascending".into()));
    }
    let has = |x: f64| grid.iter().any(|&t| (t - x).abs() < 1e-14);
    if !(has(-1.0) && has(0.0) && has(1.0)) {
        return Err(Error::BadGrid("grid must contain −1, 0 and 1 exactly".into()));
    }
    if grid[0] < -1.0 || *grid.last().unwrap() > 1.0 {
        return Err(Error::BadGrid("grid must lie in [−1, 1]".into()));
    }
    Ok(())
}

impl DElement {
    pub fn from_fn(grid: &[f64], f: impl Fn(f64) -> CMatrix) -> Result<DElement> {
        validate_grid(grid)?;
        let values = grid.iter().map(|&t| f(t)).collect();
        Ok(DElement {
            grid: grid.to_vec(),
            values,
        })
    }

    /// Pointwise product, sampled.
    pub fn mul(&self, other: &DElement) -> DElement {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| x.mul(y))
            .collect();
        DElement {
            grid: self.grid.clone(),
            values,
        }
    }
}

/// First generator: cos²(π t/2) in the corner for t ≤ 0, the constant
/// projection diag(1, 0) for t ≥ 0.
pub fn generator_a(grid: &[f64]) -> Result<DElement> {
    DElement::from_fn(grid, |t| {
        let mut m = CMatrix::zeros(2);
        if t <= 0.0 {
            let c = (std::f64::consts::FRAC_PI_2 * t).cos();
            m[(0, 0)] = Complex64::new(c * c, 0.0);
        } else {
            m[(0, 0)] = Complex64::new(1.0, 0.0);
        }
        m
    })
}

/// Second generator: equal to the first for t ≤ 0, rotating from diag(1,0)
/// at t = 0 to diag(0,1) at t = 1.
pub fn generator_b(grid: &[f64]) -> Result<DElement> {
    DElement::from_fn(grid, |t| {
        let mut m = CMatrix::zeros(2);
        let c = (std::f64::consts::FRAC_PI_2 * t).cos();
        if t <= 0.0 {
            m[(0, 0)] = Complex64::new(c * c, 0.0);
        } else {
            let s = (std::f64::consts::FRAC_PI_2 * t).sin();
            m[(0, 0)] = Complex64::new(c * c, 0.0);
            m[(0, 1)] = Complex64::new(c * s, 0.0);
            m[(1, 0)] = Complex64::new(c * s, 0.0);
            m[(1, 1)] = Complex64::new(s * s, 0.0);
        }
        m
    })
}

/// Boundary/corner residuals of the membership constraints.
#[derive(Debug, Clone)]
pub struct MembershipReport {
    /// ‖value(−1)‖
    pub endpoint_zero: f64,
    /// Off-diagonal magnitude at 1.
    pub endpoint_diagonal: f64,
    /// Worst magnitude outside the upper-left corner over t ≤ 0.
    pub corner_confinement: f64,
    pub pass: bool,
    pub tol: f64,
}

/// Verifies value(−1) = 0, value(1) diagonal, and corner confinement on
/// t ≤ 0.
pub fn check_membership(e: &DElement, tol: f64) -> MembershipReport {
    let mut endpoint_zero = 0.0_f64;
    let mut endpoint_diagonal = 0.0_f64;
    let mut corner_confinement = 0.0_f64;
    for (&t, v) in e.grid.iter().zip(&e.values) {
        if (t + 1.0).abs() < 1e-14 {
            endpoint_zero = v.max_abs();
        }
        if (t - 1.0).abs() < 1e-14 {
            endpoint_diagonal = v[(0, 1)].norm().max(v[(1, 0)].norm());
        }
        if t <= 0.0 {
            let outside = v[(0, 1)].norm().max(v[(1, 0)].norm()).max(v[(1, 1)].norm());
            corner_confinement = corner_confinement.max(outside);
        }
    }
    let pass = endpoint_zero <= tol && endpoint_diagonal <= tol && corner_confinement <= tol;
    MembershipReport {
        endpoint_zero,
        endpoint_diagonal,
        corner_confinement,
        pass,
        tol,
    }
}

/// Worst relation residual of the generator pair over the grid.
pub fn generator_pair_worst_residual(grid: &[f64]) -> Result<f64> {
    let ga = generator_a(grid)?;
    let gb = generator_b(grid)?;
    let mut worst = 0.0_f64;
    for (a, b) in ga.values.iter().zip(&gb.values) {
        let rep = check_relations(
            &SoftPair {
                a: a.clone(),
                b: b.clone(),
            },
            matrix::DEFAULT_ATOL,
        )?;
        worst = worst.max(rep.r1.max(rep.r2));
    }
    Ok(worst)
}

/// The projections built from a pair via f(t) = √(t−t²):
/// P = [[1−b, f(a)], [f(a), a]], Q = [[1−b, f(a)], [f(a), b]].
#[derive(Debug, Clone)]
pub struct PQPair {
    pub p: CMatrix,
    pub q: CMatrix,
    /// Size of the source pair (P, Q are 2n×2n).
    pub n: usize,
    /// ‖P²−P‖ and ‖Q²−Q‖.
    pub defect_p: f64,
    pub defect_q: f64,
}

fn offdiag_sqrt(a: &CMatrix) -> Result<CMatrix> {
    // √(t−t²) has unbounded slope at 0 and 1, so eigenvalue rounding noise
    // ε would blow up to √ε. Snap eigenvalues within 1e−9 of {0,1} before
    // taking the root; genuine interior spectrum is unaffected.
    apply_function(a, |t| {
        let t = if t.abs() < 1e-9 {
            0.0
        } else if (t - 1.0).abs() < 1e-9 {
            1.0
        } else {
            t
        };
        (t - t * t).max(0.0).sqrt()
    })
}

pub fn build_pq(pair: &SoftPair) -> Result<PQPair> {
    build_pq_with_tol(pair, matrix::DEFAULT_ATOL)
}

pub fn build_pq_with_tol(pair: &SoftPair, tol: f64) -> Result<PQPair> {
    let rel = check_relations(pair, tol)?;
    if !rel.pass {
        return Err(Error::RelationViolation(format!(
            "build_pq needs a valid pair (r1={:.3e}, r2={:.3e})",
            rel.r1, rel.r2
        )));
    }
    let n = pair.dim();
    let fa = offdiag_sqrt(&pair.a)?;
    let one_minus_b = CMatrix::identity(n).sub(&pair.b);
    let p = CMatrix::from_blocks(&one_minus_b, &fa, &fa, &pair.a);
    let q = CMatrix::from_blocks(&one_minus_b, &fa, &fa, &pair.b);
    let defect_p = op_norm(&p.mul(&p).sub(&p))?;
    let defect_q = op_norm(&q.mul(&q).sub(&q))?;
    let allowed = 100.0 * tol;
    if defect_p > allowed || defect_q > allowed {
        return Err(Error::ProjectionDefect {
            defect: defect_p.max(defect_q),
        });
    }
    Ok(PQPair {
        p,
        q,
        n,
        defect_p,
        defect_q,
    })
}

impl PQPair {
    /// P − Q lives in the lower-right n×n block and equals a − b there.
    pub fn difference_block_deviation(&self, pair: &SoftPair) -> f64 {
        let d = self.p.sub(&self.q);
        let n = self.n;
        let mut outside = 0.0_f64;
        for i in 0..2 * n {
            for j in 0..2 * n {
                if i < n || j < n {
                    outside = outside.max(d[(i, j)].norm());
                }
            }
        }
        let corner = d.block(n..2 * n, n..2 * n);
        outside.max(corner.sub(&pair.diff()).max_abs())
    }
}

/// The scaling homotopy P_s = C_s P C_s, Q_s = C_s Q C_s with
/// C_s = diag(s·1, 1): connects (0⊕a, 0⊕b) at s = 0 to (P, Q) at s = 1.
pub fn scaling_homotopy_pq(pair: &SoftPair, steps: usize) -> Result<PairPath> {
    let pq = build_pq(pair)?;
    let n = pq.n;
    let steps = steps.max(2);
    let params: Vec<f64> = (0..steps)
        .map(|i| i as f64 / (steps - 1) as f64)
        .collect();
    let compress = |m: &CMatrix, s: f64| -> CMatrix {
        let mut out = m.clone();
        for i in 0..2 * n {
            for j in 0..2 * n {
                let mut w = 1.0;
                if i < n {
                    w *= s;
                }
                if j < n {
                    w *= s;
                }
                out[(i, j)] = m[(i, j)] * w;
            }
        }
        out
    };
    let mut pairs = Vec::with_capacity(steps);
    let mut worst_r1 = 0.0_f64;
    let mut worst_r2 = 0.0_f64;
    for &s in &params {
        let sample = SoftPair {
            a: compress(&pq.p, s),
            b: compress(&pq.q, s),
        };
        let rep = check_relations(&sample, matrix::DEFAULT_ATOL)?;
        worst_r1 = worst_r1.max(rep.r1);
        worst_r2 = worst_r2.max(rep.r2);
        pairs.push(sample);
    }
    let mut step_bound = 0.0_f64;
    for w in pairs.windows(2) {
        let da = op_norm(&w[1].a.sub(&w[0].a))?;
        let db = op_norm(&w[1].b.sub(&w[0].b))?;
        step_bound = step_bound.max(da.max(db));
    }
    Ok(PairPath {
        params,
        pairs,
        worst_r1,
        worst_r2,
        step_bound,
        angle_scale: 1.0,
    })
}

/// The integer invariant of a pair through the projections P, Q — equals
/// tr(a−b) rounded.
pub fn kappa(pair: &SoftPair) -> Result<i64> {
    let pq = build_pq(pair)?;
    class_of_pair(
        &SoftPair {
            a: pq.p,
            b: pq.q,
        },
        1e-8,
    )
}

/// Regards a pair of projections as a soft pair.
pub fn iota(p: &CMatrix, q: &CMatrix, tol: f64) -> Result<SoftPair> {
    for m in [p, q] {
        if !m.is_hermitian() {
            return Err(Error::NotHermitian {
                deviation: m.hermitian_deviation(),
            });
        }
        let defect = op_norm(&m.mul(m).sub(m))?;
        if defect > tol {
            return Err(Error::NotAProjection { defect });
        }
    }
    SoftPair::new(p.clone(), q.clone())
}
