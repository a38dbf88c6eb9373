//! Explicit homotopy constructors — linear scaling, the rotation flip, and
//! convex reparametrization — plus a path certifier that re-checks the
//! relations at every sample and tracks class drift.

use crate::error::{Error, Result};
use crate::matrix::{self, CMatrix};
use crate::pairs::{check_relations, validate_reparam_function, SoftPair};

/// A sampled homotopy t ↦ (a_t, b_t). Parameters are normalized to [0,1]
/// regardless of the natural domain; `angle_scale` records the map back to
/// the natural parameter (π/2 for the rotation path, 1 otherwise).
#[derive(Debug, Clone)]
pub struct PairPath {
    pub params: Vec<f64>,
    pub pairs: Vec<SoftPair>,
    pub worst_r1: f64,
    pub worst_r2: f64,
    /// Max consecutive-sample distance max(‖a_{i+1}−a_i‖, ‖b_{i+1}−b_i‖) —
    /// a continuity witness, reported rather than asserted.
    pub step_bound: f64,
    pub angle_scale: f64,
}

/// Per-sample certification result.
#[derive(Debug, Clone)]
pub struct PathReport {
    pub pass: bool,
    pub worst_r1: f64,
    pub worst_r2: f64,
    /// Lexicographically smallest failing sample, if any.
    pub failing_index: Option<usize>,
    /// Integer class at each sample (None where the class is undefined).
    pub classes: Vec<Option<i64>>,
    pub class_constant: bool,
    pub step_bound: f64,
    pub tol: f64,
}

fn uniform_params(steps: usize) -> Vec<f64> {
    let steps = steps.max(2);
    (0..steps)
        .map(|i| i as f64 / (steps - 1) as f64)
        .collect()
}

fn assemble(
    params: Vec<f64>,
    pairs: Vec<SoftPair>,
    angle_scale: f64,
    tol: f64,
) -> Result<PairPath> {
    let mut worst_r1 = 0.0_f64;
    let mut worst_r2 = 0.0_f64;
    for p in &pairs {
        let rep = check_relations(p, tol)?;
        worst_r1 = worst_r1.max(rep.r1);
        worst_r2 = worst_r2.max(rep.r2);
    }
    let mut step_bound = 0.0_f64;
    for w in pairs.windows(2) {
        let da = matrix::op_norm(&w[1].a.sub(&w[0].a))?;
        let db = matrix::op_norm(&w[1].b.sub(&w[0].b))?;
        step_bound = step_bound.max(da.max(db));
    }
    Ok(PairPath {
        params,
        pairs,
        worst_r1,
        worst_r2,
        step_bound,
        angle_scale,
    })
}

/// Path (t·a, t·a) from (0,0) to (a,a). Equal entries force both residuals
/// to vanish identically.
pub fn linear_scaling_path(a: &CMatrix, steps: usize) -> Result<PairPath> {
    if !a.is_finite() {
        return Err(Error::InvalidInput("non-finite entries".into()));
    }
    let margin = matrix::positivity_margin(a)?;
    let norm = matrix::op_norm(a)?;
    if margin < -matrix::DEFAULT_ATOL || norm > 1.0 + matrix::DEFAULT_ATOL {
        return Err(Error::InvalidInput(format!(
            "need 0 ≤ a ≤ 1 (min eigenvalue {margin:.3e}, norm {norm})"
        )));
    }
    let params = uniform_params(steps);
    let pairs = params
        .iter()
        .map(|&t| {
            let at = a.scale(t);
            SoftPair {
                a: at.clone(),
                b: at,
            }
        })
        .collect();
    assemble(params, pairs, 1.0, matrix::DEFAULT_ATOL)
}

/// Second entry of the flip path at rotation angle θ:
/// B_θ = U_θ*(b⊕a)U_θ with the block rotation U_θ.
pub fn flip_second_entry(p: &SoftPair, theta: f64) -> CMatrix {
    let n = p.dim();
    let (s, c) = theta.sin_cos();
    let b = &p.b;
    let a = &p.a;
    // Block form: [[b c² + a s², (a−b)cs], [(a−b)cs, b s² + a c²]].
    let diff = a.sub(b);
    let b11 = b.scale(c * c).add(&a.scale(s * s));
    let b22 = b.scale(s * s).add(&a.scale(c * c));
    let b12 = diff.scale(c * s);
    let mut out = CMatrix::zeros(2 * n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = b11[(i, j)];
            out[(i, n + j)] = b12[(i, j)];
            out[(n + i, j)] = b12[(i, j)];
            out[(n + i, n + j)] = b22[(i, j)];
        }
    }
    out
}

/// The flip homotopy: first entry fixed at a⊕b, second entry rotating from
/// b⊕a (angle 0) to a⊕b (angle π/2). Witnesses [(a,b)] + [(b,a)] = 0.
pub fn rotation_flip_path(p: &SoftPair, steps: usize) -> Result<PairPath> {
    let rel = check_relations(p, 100.0 * matrix::DEFAULT_ATOL)?;
    if !rel.pass {
        return Err(Error::RelationViolation(format!(
            "flip path needs a valid pair (r1={:.3e}, r2={:.3e})",
            rel.r1, rel.r2
        )));
    }
    let params = uniform_params(steps);
    let first = p.a.direct_sum(&p.b);
    let pairs = params
        .iter()
        .map(|&u| {
            let theta = u * std::f64::consts::FRAC_PI_2;
            SoftPair {
                a: first.clone(),
                b: flip_second_entry(p, theta),
            }
        })
        .collect();
    assemble(params, pairs, std::f64::consts::FRAC_PI_2, matrix::DEFAULT_ATOL)
}

/// Convex path (f_u(a), f_u(b)) with f_u = (1−u)·id + u·f, from (a,b) to
/// (f(a), f(b)).
pub fn reparam_path(p: &SoftPair, f: impl Fn(f64) -> f64, steps: usize) -> Result<PairPath> {
    validate_reparam_function(&f)?;
    let params = uniform_params(steps);
    let mut pairs = Vec::with_capacity(params.len());
    for &u in &params {
        let fu = |t: f64| (1.0 - u) * t + u * f(t);
        let a = matrix::apply_function_on(&p.a, fu, (0.0, 1.0), 1e-8)?;
        let b = matrix::apply_function_on(&p.b, fu, (0.0, 1.0), 1e-8)?;
        pairs.push(SoftPair { a, b });
    }
    assemble(params, pairs, 1.0, matrix::DEFAULT_ATOL)
}

/// Re-checks every sample at the given tolerance. Samples may be evaluated
/// in any order; aggregation is deterministic (max over residuals, smallest
/// failing index, ordered class list).
pub fn verify_path(path: &PairPath, tol: f64) -> Result<PathReport> {
    let mut worst_r1 = 0.0_f64;
    let mut worst_r2 = 0.0_f64;
    let mut failing_index = None;
    let mut classes = Vec::with_capacity(path.pairs.len());
    for (i, pair) in path.pairs.iter().enumerate() {
        let rep = check_relations(pair, tol)?;
        worst_r1 = worst_r1.max(rep.r1);
        worst_r2 = worst_r2.max(rep.r2);
        if !rep.pass && failing_index.is_none() {
            failing_index = Some(i);
        }
        let class = if rep.pass {
            let tau = pair.trace_diff();
            if (tau - tau.round()).abs() <= 100.0 * tol {
                Some(tau.round() as i64)
            } else {
                None
            }
        } else {
            None
        };
        classes.push(class);
    }
    let class_constant = match classes.first() {
        Some(first) => first.is_some() && classes.iter().all(|c| c == first),
        None => true,
    };
    let mut step_bound = 0.0_f64;
    for w in path.pairs.windows(2) {
        let da = matrix::op_norm(&w[1].a.sub(&w[0].a))?;
        let db = matrix::op_norm(&w[1].b.sub(&w[0].b))?;
        step_bound = step_bound.max(da.max(db));
    }
    Ok(PathReport {
        pass: failing_index.is_none() && class_constant,
        worst_r1,
        worst_r2,
        failing_index,
        classes,
        class_constant,
        step_bound,
        tol,
    })
}
