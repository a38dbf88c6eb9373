//! Matrix-valued functions over sampled compact spaces: pointwise relation
//! checking, the unitalization cutoff construction, clutching of projection
//! fields along a common boundary, the Bott projection on a sphere mesh,
//! and discrete Chern numbers that see K-theory data the trace cannot.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{self, op_norm, positivity_margin, CMatrix};
use crate::pairs::{check_relations, SoftPair};

/// Default gluing tolerance, separate from the relation tolerance.
pub const DEFAULT_GLUING_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Interval,
    Circle,
    Sphere,
}

impl std::fmt::Display for GridKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridKind::Interval => write!(f, "interval"),
            GridKind::Circle => write!(f, "circle"),
            GridKind::Sphere => write!(f, "sphere"),
        }
    }
}

/// A sampled compact space: point coordinates, adjacency edges, oriented
/// quadrilateral plaquettes (sphere only), and named index regions.
#[derive(Debug, Clone)]
pub struct SpaceGrid {
    pub kind: GridKind,
    pub points: Vec<[f64; 3]>,
    pub edges: Vec<(usize, usize)>,
    /// Ordered 4-cycles of point indices; empty unless the space is closed
    /// and 2-dimensional.
    pub plaquettes: Vec<[usize; 4]>,
    pub regions: BTreeMap<String, Vec<usize>>,
    /// Resolution parameters: (points, 0) for interval/circle,
    /// (latitude bands, longitude steps) for the sphere.
    pub shape: (usize, usize),
}

impl SpaceGrid {
    /// Uniform sampling of [lo, hi].
    pub fn interval(points: usize, lo: f64, hi: f64) -> Result<SpaceGrid> {
        if points < 3 || hi <= lo {
            return Err(Error::BadGrid("interval needs ≥ 3 points and lo < hi".into()));
        }
        let pts: Vec<[f64; 3]> = (0..points)
            .map(|i| {
                let t = lo + (hi - lo) * i as f64 / (points - 1) as f64;
                [t, 0.0, 0.0]
            })
            .collect();
        let edges = (0..points - 1).map(|i| (i, i + 1)).collect();
        Ok(SpaceGrid {
            kind: GridKind::Interval,
            points: pts,
            edges,
            plaquettes: Vec::new(),
            regions: BTreeMap::new(),
            shape: (points, 0),
        })
    }

    /// Uniform sampling of the unit circle, cyclically ordered.
    pub fn circle(points: usize) -> Result<SpaceGrid> {
        if points < 3 {
            return Err(Error::BadGrid("circle needs ≥ 3 points".into()));
        }
        let pts: Vec<[f64; 3]> = (0..points)
            .map(|i| {
                let phi = 2.0 * std::f64::consts::PI * i as f64 / points as f64;
                [phi.cos(), phi.sin(), 0.0]
            })
            .collect();
        let edges = (0..points).map(|i| (i, (i + 1) % points)).collect();
        Ok(SpaceGrid {
            kind: GridKind::Circle,
            points: pts,
            edges,
            plaquettes: Vec::new(),
            regions: BTreeMap::new(),
            shape: (points, 0),
        })
    }

    /// Latitude–longitude quadrilateral mesh of the unit sphere with the
    /// polar caps as degenerate quads (one repeated corner). With an even
    /// number of latitude bands the equator is an exact sample row; the
    /// regions "north" (z ≥ 0), "south" (z ≤ 0) and "equator" (z = 0) are
    /// prepopulated.
    pub fn sphere(n_lat: usize, n_lon: usize) -> Result<SpaceGrid> {
        if n_lat < 2 || n_lon < 3 {
            return Err(Error::BadGrid("sphere needs ≥ 2 bands and ≥ 3 longitudes".into()));
        }
        let mut pts: Vec<[f64; 3]> = Vec::new();
        pts.push([0.0, 0.0, 1.0]); // north pole, index 0
        for i in 1..n_lat {
            let theta = std::f64::consts::PI * i as f64 / n_lat as f64;
            for j in 0..n_lon {
                let phi = 2.0 * std::f64::consts::PI * j as f64 / n_lon as f64;
                pts.push([
                    theta.sin() * phi.cos(),
                    theta.sin() * phi.sin(),
                    theta.cos(),
                ]);
            }
        }
        let south = pts.len();
        pts.push([0.0, 0.0, -1.0]);
        let row = |i: usize, j: usize| 1 + (i - 1) * n_lon + (j % n_lon);

        // Corner order is the outward orientation: θ decreasing then φ
        // increasing, same handedness on every quad.
        let mut plaquettes: Vec<[usize; 4]> = Vec::new();
        // North cap: degenerate quads with the pole repeated.
        for j in 0..n_lon {
            plaquettes.push([0, row(1, j), row(1, j + 1), 0]);
        }
        // Interior bands.
        for i in 1..n_lat - 1 {
            for j in 0..n_lon {
                plaquettes.push([row(i, j), row(i + 1, j), row(i + 1, j + 1), row(i, j + 1)]);
            }
        }
        // South cap.
        for j in 0..n_lon {
            plaquettes.push([row(n_lat - 1, j), south, south, row(n_lat - 1, j + 1)]);
        }

        let mut edges: Vec<(usize, usize)> = Vec::new();
        for j in 0..n_lon {
            edges.push((0, row(1, j)));
            edges.push((row(n_lat - 1, j), south));
        }
        for i in 1..n_lat {
            for j in 0..n_lon {
                edges.push((row(i, j), row(i, j + 1)));
                if i < n_lat - 1 {
                    edges.push((row(i, j), row(i + 1, j)));
                }
            }
        }

        let mut regions = BTreeMap::new();
        let idx = |pred: &dyn Fn(&[f64; 3]) -> bool| -> Vec<usize> {
            pts.iter().enumerate().filter(|(_, p)| pred(p)).map(|(i, _)| i).collect()
        };
        regions.insert("north".to_string(), idx(&|p| p[2] >= -1e-12));
        regions.insert("south".to_string(), idx(&|p| p[2] <= 1e-12));
        regions.insert("equator".to_string(), idx(&|p| p[2].abs() <= 1e-12));

        Ok(SpaceGrid {
            kind: GridKind::Sphere,
            points: pts,
            edges,
            plaquettes,
            regions,
            shape: (n_lat, n_lon),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn region(&self, name: &str) -> Result<&[usize]> {
        self.regions
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::BadGrid(format!("unknown region '{name}'")))
    }

    /// Connected components over the adjacency edges; returns a component
    /// id per point.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        let mut comp = vec![usize::MAX; n];
        let mut next = 0usize;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            comp[start] = next;
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    fn same_layout(&self, other: &SpaceGrid) -> bool {
        self.kind == other.kind && self.shape == other.shape && self.len() == other.len()
    }
}

/// A matrix-valued function on a grid: one n×n Hermitian matrix per point.
#[derive(Debug, Clone)]
pub struct MatrixField {
    pub grid: SpaceGrid,
    pub values: Vec<CMatrix>,
}

impl MatrixField {
    pub fn from_fn(grid: &SpaceGrid, f: impl Fn(&[f64; 3]) -> CMatrix) -> MatrixField {
        let values = grid.points.iter().map(f).collect();
        MatrixField {
            grid: grid.clone(),
            values,
        }
    }

    pub fn constant(grid: &SpaceGrid, m: &CMatrix) -> MatrixField {
        MatrixField {
            grid: grid.clone(),
            values: vec![m.clone(); grid.len()],
        }
    }

    pub fn dim(&self) -> usize {
        self.values.first().map(|m| m.dim()).unwrap_or(0)
    }

    /// Max adjacent-point distance ‖v_i − v_j‖ — the continuity witness.
    pub fn continuity_witness(&self) -> Result<f64> {
        let mut worst = 0.0_f64;
        for &(i, j) in &self.grid.edges {
            worst = worst.max(op_norm(&self.values[i].sub(&self.values[j]))?);
        }
        Ok(worst)
    }

    /// Pointwise block-diagonal sum on matching grids.
    pub fn direct_sum(&self, other: &MatrixField) -> Result<MatrixField> {
        if !self.grid.same_layout(&other.grid) {
            return Err(Error::ShapeError("grids differ".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.direct_sum(b))
            .collect();
        Ok(MatrixField {
            grid: self.grid.clone(),
            values,
        })
    }

    /// Pointwise complement I − v (for projection fields).
    pub fn complement(&self) -> MatrixField {
        let values = self
            .values
            .iter()
            .map(|v| CMatrix::identity(v.dim()).sub(v))
            .collect();
        MatrixField {
            grid: self.grid.clone(),
            values,
        }
    }
}

/// A pair of matrix fields on the same grid, checked pointwise against the
/// relations.
#[derive(Debug, Clone)]
pub struct FieldPair {
    pub a: MatrixField,
    pub b: MatrixField,
}

impl FieldPair {
    pub fn new(a: MatrixField, b: MatrixField) -> Result<FieldPair> {
        if !a.grid.same_layout(&b.grid) {
            return Err(Error::ShapeError("field grids differ".into()));
        }
        Ok(FieldPair { a, b })
    }

    pub fn pair_at(&self, i: usize) -> SoftPair {
        SoftPair {
            a: self.a.values[i].clone(),
            b: self.b.values[i].clone(),
        }
    }
}

/// Worst pointwise residuals with a per-region breakdown.
#[derive(Debug, Clone)]
pub struct FieldReport {
    pub worst_r1: f64,
    pub worst_r2: f64,
    pub worst_norm: f64,
    pub worst_negativity: f64,
    pub per_point: Vec<(f64, f64)>,
    pub per_region: BTreeMap<String, (f64, f64)>,
    pub pass: bool,
    pub tol: f64,
}

/// Pointwise relation check over the whole grid.
pub fn check_relations_field(fp: &FieldPair, tol: f64) -> Result<FieldReport> {
    if !fp.a.grid.same_layout(&fp.b.grid) {
        return Err(Error::ShapeError("field grids differ".into()));
    }
    let n_points = fp.a.grid.len();
    let mut per_point = Vec::with_capacity(n_points);
    let mut worst_r1 = 0.0_f64;
    let mut worst_r2 = 0.0_f64;
    let mut worst_norm = 0.0_f64;
    let mut worst_negativity = 0.0_f64;
    let mut pass = true;
    for i in 0..n_points {
        let rep = check_relations(&fp.pair_at(i), tol)?;
        per_point.push((rep.r1, rep.r2));
        worst_r1 = worst_r1.max(rep.r1);
        worst_r2 = worst_r2.max(rep.r2);
        worst_norm = worst_norm.max(rep.norm_a.max(rep.norm_b));
        worst_negativity = worst_negativity.min(rep.positivity_a.min(rep.positivity_b));
        pass &= rep.pass;
    }
    let mut per_region = BTreeMap::new();
    for (name, indices) in &fp.a.grid.regions {
        let mut r1 = 0.0_f64;
        let mut r2 = 0.0_f64;
        for &i in indices {
            r1 = r1.max(per_point[i].0);
            r2 = r2.max(per_point[i].1);
        }
        per_region.insert(name.clone(), (r1, r2));
    }
    Ok(FieldReport {
        worst_r1,
        worst_r2,
        worst_norm,
        worst_negativity,
        per_point,
        per_region,
        pass,
        tol,
    })
}

/// The unitalization cutoff: a = h·p0 + alpha, b = h·p0 + beta, where h is a
/// scalar field vanishing at the basepoint and alpha, beta vanish wherever
/// h < 1, with p0 + alpha and p0 + beta pointwise projections. The result
/// vanishes at the basepoint and satisfies the relations everywhere.
pub fn cutoff_pair(
    p0: &CMatrix,
    alpha: &MatrixField,
    beta: &MatrixField,
    h: &[f64],
    basepoint: usize,
) -> Result<FieldPair> {
    let grid = &alpha.grid;
    if h.len() != grid.len() || basepoint >= grid.len() {
        return Err(Error::ShapeError("h / basepoint does not match the grid".into()));
    }
    if !grid.same_layout(&beta.grid) {
        return Err(Error::ShapeError("alpha and beta grids differ".into()));
    }
    if h.iter().any(|&x| !(-1e-12..=1.0 + 1e-12).contains(&x)) {
        return Err(Error::InvalidInput("need 0 ≤ h ≤ 1".into()));
    }
    if h[basepoint].abs() > 1e-12 {
        return Err(Error::SupportMismatch(format!(
            "h({basepoint}) = {} must vanish at the basepoint",
            h[basepoint]
        )));
    }
    let proj_defect = |m: &CMatrix| -> Result<f64> { op_norm(&m.mul(m).sub(m)) };
    for i in 0..grid.len() {
        let av = &alpha.values[i];
        let bv = &beta.values[i];
        if h[i] < 1.0 - 1e-12 && (av.max_abs() > 1e-12 || bv.max_abs() > 1e-12) {
            return Err(Error::SupportMismatch(format!(
                "alpha/beta must vanish where h < 1 (point {i}, h = {})",
                h[i]
            )));
        }
        let dp = proj_defect(&p0.add(av))?;
        let dq = proj_defect(&p0.add(bv))?;
        if dp > 1e-8 || dq > 1e-8 {
            return Err(Error::NotAProjection { defect: dp.max(dq) });
        }
    }
    let build = |bump: &MatrixField| -> MatrixField {
        let values = (0..grid.len())
            .map(|i| p0.scale(h[i]).add(&bump.values[i]))
            .collect();
        MatrixField {
            grid: grid.clone(),
            values,
        }
    };
    FieldPair::new(build(alpha), build(beta))
}

/// Glues projection fields p, q on region Y with a positive contraction s
/// on region Z along K = Y ∩ Z: a = p on Y, s on Z; b = q on Y, s on Z.
/// The fields are given on the full grid but only read on their regions.
pub fn clutch(
    grid: &SpaceGrid,
    region_y: &str,
    region_z: &str,
    p: &MatrixField,
    q: &MatrixField,
    s: &MatrixField,
    tol: f64,
) -> Result<FieldPair> {
    let y = grid.region(region_y)?.to_vec();
    let z = grid.region(region_z)?.to_vec();
    let mut in_y = vec![false; grid.len()];
    let mut in_z = vec![false; grid.len()];
    for &i in &y {
        in_y[i] = true;
    }
    for &i in &z {
        in_z[i] = true;
    }
    if (0..grid.len()).any(|i| !in_y[i] && !in_z[i]) {
        return Err(Error::BadGrid("regions Y and Z must cover the grid".into()));
    }
    let k: Vec<usize> = (0..grid.len()).filter(|&i| in_y[i] && in_z[i]).collect();
    if k.is_empty() {
        return Err(Error::BadGrid("Y ∩ Z must be nonempty".into()));
    }

    let mut worst = 0.0_f64;
    for &i in &y {
        for field in [p, q] {
            let v = &field.values[i];
            let defect = op_norm(&v.mul(v).sub(v))?;
            if defect > 1e-8 {
                return Err(Error::NotAProjection { defect });
            }
        }
    }
    for &i in &z {
        let v = &s.values[i];
        let margin = positivity_margin(v)?;
        let norm = op_norm(v)?;
        if margin < -1e-10 || norm > 1.0 + 1e-10 {
            return Err(Error::InvalidInput(format!(
                "s must satisfy 0 ≤ s ≤ 1 (point {i}: margin {margin:.3e}, norm {norm})"
            )));
        }
    }
    for &i in &k {
        let dpq = op_norm(&p.values[i].sub(&q.values[i]))?;
        let dps = op_norm(&p.values[i].sub(&s.values[i]))?;
        worst = worst.max(dpq.max(dps));
    }
    if worst > tol {
        return Err(Error::GluingMismatch { worst });
    }

    let assemble = |on_y: &MatrixField| -> MatrixField {
        let values = (0..grid.len())
            .map(|i| {
                if in_y[i] {
                    on_y.values[i].clone()
                } else {
                    s.values[i].clone()
                }
            })
            .collect();
        MatrixField {
            grid: grid.clone(),
            values,
        }
    };
    FieldPair::new(assemble(p), assemble(q))
}

/// The rank-1 projection field ½·[[1+z, x−iy], [x+iy, 1−z]] at each unit
/// point of a sphere grid.
pub fn bott_projection(grid: &SpaceGrid) -> Result<MatrixField> {
    if grid.kind != GridKind::Sphere {
        return Err(Error::BadGrid("bott_projection needs a sphere grid".into()));
    }
    Ok(MatrixField::from_fn(grid, |p| {
        let [x, y, z] = *p;
        let mut m = CMatrix::zeros(2);
        m[(0, 0)] = Complex64::new(0.5 * (1.0 + z), 0.0);
        m[(0, 1)] = Complex64::new(0.5 * x, -0.5 * y);
        m[(1, 0)] = Complex64::new(0.5 * x, 0.5 * y);
        m[(1, 1)] = Complex64::new(0.5 * (1.0 - z), 0.0);
        m
    }))
}

fn det_small(m: &CMatrix) -> Complex64 {
    // LU with partial pivoting; r is tiny (the projection rank).
    let n = m.dim();
    let mut a = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[(r, col)].norm() > a[(piv, col)].norm() {
                piv = r;
            }
        }
        if a[(piv, col)].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if piv != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            det = -det;
        }
        det *= a[(col, col)];
        for r in col + 1..n {
            let factor = a[(r, col)] / a[(col, col)];
            for j in col..n {
                let v = a[(col, j)];
                a[(r, j)] -= factor * v;
            }
        }
    }
    det
}

/// Orthonormal frame spanning the range of a rank-r projection,
/// deterministic via the eigensolver's phase convention.
fn range_frame(p: &CMatrix, rank: usize) -> Result<CMatrix> {
    let sys = matrix::eig_hermitian(p)?;
    let n = p.dim();
    let cols: Vec<usize> = (0..n).filter(|&i| sys.eigenvalues[i] > 0.5).collect();
    if cols.len() != rank {
        return Err(Error::NotAProjection {
            defect: cols.len() as f64 - rank as f64,
        });
    }
    // n×rank frame stored as a square matrix padded with zero columns would
    // waste work; keep a dedicated thin representation.
    let mut frame = vec![Complex64::new(0.0, 0.0); n * rank];
    for (fj, &j) in cols.iter().enumerate() {
        for i in 0..n {
            frame[i * rank + fj] = sys.frame[(i, j)];
        }
    }
    // Pack into a rank×rank-compatible carrier: we only ever need F1ᴴF2,
    // so return the thin frame as an n×rank "matrix" via CMatrix of size n
    // with explicit column count tracked by the caller. To keep CMatrix
    // square, store as n×n with zero padding.
    let mut out = CMatrix::zeros(n.max(rank));
    for i in 0..n {
        for j in 0..rank {
            out[(i, j)] = frame[i * rank + j];
        }
    }
    Ok(out)
}

fn overlap(f1: &CMatrix, f2: &CMatrix, n: usize, rank: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rank);
    for i in 0..rank {
        for j in 0..rank {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += f1[(k, i)].conj() * f2[(k, j)];
            }
            m[(i, j)] = acc;
        }
    }
    m
}

/// Discrete Chern number of a constant-rank projection field: per oriented
/// plaquette, the phase of det of the cyclic frame-overlap product, wrapped
/// to (−π, π]; the integer is the wrapped phases summed over plaquettes in
/// index order, divided by 2π.
pub fn chern_number(field: &MatrixField) -> Result<i64> {
    let grid = &field.grid;
    if grid.plaquettes.is_empty() {
        return Err(Error::BadGrid("chern_number needs a plaquette mesh".into()));
    }
    let n = field.dim();
    // Rank from the trace at the first point, enforced everywhere.
    let tr0 = field.values[0].trace().re;
    let rank = tr0.round();
    if (tr0 - rank).abs() > 1e-6 || rank < 0.5 {
        return Err(Error::NotAProjection { defect: tr0 - rank });
    }
    let rank = rank as usize;
    for v in &field.values {
        if (v.trace().re - rank as f64).abs() > 1e-6 {
            return Err(Error::NotAProjection {
                defect: v.trace().re - rank as f64,
            });
        }
        let defect = op_norm(&v.mul(v).sub(v))?;
        if defect > 1e-6 {
            return Err(Error::NotAProjection { defect });
        }
    }

    let frames: Vec<CMatrix> = field
        .values
        .iter()
        .map(|v| range_frame(v, rank))
        .collect::<Result<_>>()?;

    let mut total = 0.0_f64;
    for (pi, &[c1, c2, c3, c4]) in grid.plaquettes.iter().enumerate() {
        let m12 = overlap(&frames[c1], &frames[c2], n, rank);
        let m23 = overlap(&frames[c2], &frames[c3], n, rank);
        let m34 = overlap(&frames[c3], &frames[c4], n, rank);
        let m41 = overlap(&frames[c4], &frames[c1], n, rank);
        let prod = m12.mul(&m23).mul(&m34).mul(&m41);
        let det = det_small(&prod);
        if det.norm() < 1e-6 {
            return Err(Error::RankDrop {
                plaquette: pi,
                det: det.norm(),
            });
        }
        total += det.arg();
    }
    let c = total / (2.0 * std::f64::consts::PI);
    let rounded = c.round();
    if (c - rounded).abs() > 0.05 {
        return Err(Error::NotNearInteger { value: c });
    }
    Ok(rounded as i64)
}

/// Pointwise integer classes of a valid field pair, constant per connected
/// component.
#[derive(Debug, Clone)]
pub struct ClassReport {
    /// Class per connected component, indexed by component id.
    pub per_component: Vec<i64>,
    /// Component id per point.
    pub components: Vec<usize>,
    /// Worst distance of a pointwise trace from its integer.
    pub worst_deviation: f64,
}

/// tr(a−b) at each point must round to the same integer per connected
/// component of the grid.
pub fn pointwise_class(fp: &FieldPair, tol: f64) -> Result<ClassReport> {
    let rep = check_relations_field(fp, tol.max(matrix::DEFAULT_ATOL))?;
    if !rep.pass {
        return Err(Error::RelationViolation(format!(
            "pointwise_class needs a valid field pair (worst r1 {:.3e}, r2 {:.3e})",
            rep.worst_r1, rep.worst_r2
        )));
    }
    let comps = fp.a.grid.components();
    let n_comp = comps.iter().copied().max().map(|m| m + 1).unwrap_or(0);
    let mut per_component: Vec<Option<i64>> = vec![None; n_comp];
    let mut worst_deviation = 0.0_f64;
    for i in 0..fp.a.grid.len() {
        let tau = (fp.a.values[i].trace() - fp.b.values[i].trace()).re;
        let rounded = tau.round();
        worst_deviation = worst_deviation.max((tau - rounded).abs());
        if (tau - rounded).abs() > tol.max(1e-8) {
            return Err(Error::NotNearInteger { value: tau });
        }
        let class = rounded as i64;
        match per_component[comps[i]] {
            None => per_component[comps[i]] = Some(class),
            Some(existing) if existing != class => {
                return Err(Error::NotLocallyConstant(format!(
                    "component {} carries classes {existing} and {class}; \
                     refine the discretization",
                    comps[i]
                )));
            }
            _ => {}
        }
    }
    Ok(ClassReport {
        per_component: per_component.into_iter().map(|c| c.unwrap()).collect(),
        components: comps,
        worst_deviation,
    })
}
