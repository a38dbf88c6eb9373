//! Text file formats for matrices, pairs, sampled algebra elements, matrix
//! fields, path traces and residual tables.
//!
//! All formats are whitespace-tokenized with `#` comment lines. Numbers are
//! written with 17 significant digits, so write → read → write is
//! bit-stable.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::funcalg::{GridKind, MatrixField, SpaceGrid};
use crate::homotopy::{PairPath, PathReport};
use crate::matrix::CMatrix;
use crate::pairs::{PairMeta, SoftPair};
use crate::universal::DElement;

fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

struct Tokens<'a> {
    toks: Vec<&'a str>,
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn new(text: &'a str) -> Tokens<'a> {
        let toks = text
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .flat_map(|l| l.split_whitespace())
            .collect();
        Tokens { toks, pos: 0 }
    }

    fn peek(&self) -> Option<&'a str> {
        self.toks.get(self.pos).copied()
    }

    fn next(&mut self) -> Result<&'a str> {
        let t = self
            .toks
            .get(self.pos)
            .copied()
            .ok_or_else(|| Error::Parse("unexpected end of file".into()))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, word: &str) -> Result<()> {
        let t = self.next()?;
        if t != word {
            return Err(Error::Parse(format!("expected '{word}', found '{t}'")));
        }
        Ok(())
    }

    fn usize(&mut self) -> Result<usize> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| Error::Parse(format!("expected integer, found '{t}'")))
    }

    fn u64(&mut self) -> Result<u64> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| Error::Parse(format!("expected integer, found '{t}'")))
    }

    fn i64(&mut self) -> Result<i64> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| Error::Parse(format!("expected integer, found '{t}'")))
    }

    fn f64(&mut self) -> Result<f64> {
        let t = self.next()?;
        t.parse()
            .map_err(|_| Error::Parse(format!("expected number, found '{t}'")))
    }
}

fn write_matrix_body(out: &mut String, m: &CMatrix) {
    let n = m.dim();
    writeln!(out, "n {n}").unwrap();
    for i in 0..n {
        let mut line = String::new();
        for j in 0..n {
            let z = m[(i, j)];
            if j > 0 {
                line.push(' ');
            }
            write!(line, "{} {}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
        }
        writeln!(out, "{line}").unwrap();
    }
}

fn read_matrix_body(t: &mut Tokens) -> Result<CMatrix> {
    t.expect("n")?;
    let n = t.usize()?;
    let mut entries = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        let re = t.f64()?;
        let im = t.f64()?;
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Parse("non-finite matrix entry".into()));
        }
        entries.push(Complex64::new(re, im));
    }
    CMatrix::from_flat(n, &entries)
}

pub fn matrix_to_string(m: &CMatrix) -> String {
    let mut out = String::from("# matrix v1\n");
    write_matrix_body(&mut out, m);
    out
}

pub fn matrix_from_str(text: &str) -> Result<CMatrix> {
    read_matrix_body(&mut Tokens::new(text))
}

pub fn pair_to_string(pair: &SoftPair, meta: Option<&PairMeta>) -> String {
    let mut out = String::from("# pair v1\n");
    if let Some(m) = meta {
        writeln!(out, "meta seed {} k {} class {}", m.seed, m.k, m.class).unwrap();
    }
    out.push_str("a\n");
    write_matrix_body(&mut out, &pair.a);
    out.push_str("b\n");
    write_matrix_body(&mut out, &pair.b);
    out
}

pub fn pair_from_str(text: &str) -> Result<(SoftPair, Option<PairMeta>)> {
    let mut t = Tokens::new(text);
    let meta = if t.peek() == Some("meta") {
        t.next()?;
        t.expect("seed")?;
        let seed = t.u64()?;
        t.expect("k")?;
        let k = t.usize()?;
        t.expect("class")?;
        let class = t.i64()?;
        Some(PairMeta { seed, k, class })
    } else {
        None
    };
    t.expect("a")?;
    let a = read_matrix_body(&mut t)?;
    t.expect("b")?;
    let b = read_matrix_body(&mut t)?;
    Ok((SoftPair::new(a, b)?, meta))
}

pub fn delement_to_string(e: &DElement) -> String {
    let mut out = String::from("# delement v1\n");
    writeln!(out, "points {}", e.grid.len()).unwrap();
    out.push_str("grid\n");
    for &t in &e.grid {
        writeln!(out, "{}", fmt_f64(t)).unwrap();
    }
    out.push_str("values\n");
    for v in &e.values {
        let mut line = String::new();
        for i in 0..2 {
            for j in 0..2 {
                if !line.is_empty() {
                    line.push(' ');
                }
                let z = v[(i, j)];
                write!(line, "{} {}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
            }
        }
        writeln!(out, "{line}").unwrap();
    }
    out
}

pub fn delement_from_str(text: &str) -> Result<DElement> {
    let mut t = Tokens::new(text);
    t.expect("points")?;
    let m = t.usize()?;
    t.expect("grid")?;
    let mut grid = Vec::with_capacity(m);
    for _ in 0..m {
        grid.push(t.f64()?);
    }
    t.expect("values")?;
    let mut values = Vec::with_capacity(m);
    for _ in 0..m {
        let mut v = CMatrix::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                let re = t.f64()?;
                let im = t.f64()?;
                v[(i, j)] = Complex64::new(re, im);
            }
        }
        values.push(v);
    }
    Ok(DElement { grid, values })
}

pub fn field_to_string(f: &MatrixField) -> String {
    let g = &f.grid;
    let mut out = String::from("# field v1\n");
    writeln!(out, "kind {}", g.kind).unwrap();
    match g.kind {
        GridKind::Interval => {
            writeln!(out, "shape {}", g.shape.0).unwrap();
            writeln!(
                out,
                "range {} {}",
                fmt_f64(g.points[0][0]),
                fmt_f64(g.points[g.points.len() - 1][0])
            )
            .unwrap();
        }
        GridKind::Circle => writeln!(out, "shape {}", g.shape.0).unwrap(),
        GridKind::Sphere => writeln!(out, "shape {} {}", g.shape.0, g.shape.1).unwrap(),
    }
    writeln!(out, "dim {}", f.dim()).unwrap();
    out.push_str("values\n");
    for v in &f.values {
        let n = v.dim();
        let mut line = String::new();
        for i in 0..n {
            for j in 0..n {
                if !line.is_empty() {
                    line.push(' ');
                }
                let z = v[(i, j)];
                write!(line, "{} {}", fmt_f64(z.re), fmt_f64(z.im)).unwrap();
            }
        }
        writeln!(out, "{line}").unwrap();
    }
    out
}

pub fn field_from_str(text: &str) -> Result<MatrixField> {
    let mut t = Tokens::new(text);
    t.expect("kind")?;
    let kind = t.next()?;
    let grid = match kind {
        "interval" => {
            t.expect("shape")?;
            let points = t.usize()?;
            t.expect("range")?;
            let lo = t.f64()?;
            let hi = t.f64()?;
            SpaceGrid::interval(points, lo, hi)?
        }
        "circle" => {
            t.expect("shape")?;
            SpaceGrid::circle(t.usize()?)?
        }
        "sphere" => {
            t.expect("shape")?;
            let lat = t.usize()?;
            let lon = t.usize()?;
            SpaceGrid::sphere(lat, lon)?
        }
        other => return Err(Error::Parse(format!("unknown grid kind '{other}'"))),
    };
    t.expect("dim")?;
    let n = t.usize()?;
    t.expect("values")?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        let mut v = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let re = t.f64()?;
                let im = t.f64()?;
                v[(i, j)] = Complex64::new(re, im);
            }
        }
        values.push(v);
    }
    Ok(MatrixField { grid, values })
}

/// Tabular trace of a certified path: one row per sample with the
/// normalized parameter, both residuals, the integer class and the distance
/// to the previous sample.
pub fn path_trace_to_string(path: &PairPath, report: &PathReport) -> Result<String> {
    let mut out = String::from("# t r1 r2 class step\n");
    let mut prev: Option<&SoftPair> = None;
    for (i, (t, pair)) in path.params.iter().zip(&path.pairs).enumerate() {
        let rep = crate::pairs::check_relations(pair, report.tol)?;
        let step = match prev {
            Some(p) => crate::matrix::op_norm(&pair.a.sub(&p.a))?
                .max(crate::matrix::op_norm(&pair.b.sub(&p.b))?),
            None => 0.0,
        };
        let class = match report.classes.get(i).copied().flatten() {
            Some(c) => c.to_string(),
            None => "nan".to_string(),
        };
        writeln!(
            out,
            "{} {} {} {} {}",
            fmt_f64(*t),
            fmt_f64(rep.r1),
            fmt_f64(rep.r2),
            class,
            fmt_f64(step)
        )
        .unwrap();
        prev = Some(pair);
    }
    Ok(out)
}

/// CSV of pointwise residuals and trace differences for plotting.
pub fn field_residuals_csv(
    fp: &crate::funcalg::FieldPair,
    per_point: &[(f64, f64)],
) -> String {
    let mut out = String::from("index,x,y,z,r1,r2,trace_diff\n");
    for (i, p) in fp.a.grid.points.iter().enumerate() {
        let tau = (fp.a.values[i].trace() - fp.b.values[i].trace()).re;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            i,
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2]),
            fmt_f64(per_point[i].0),
            fmt_f64(per_point[i].1),
            fmt_f64(tau)
        )
        .unwrap();
    }
    out
}

pub fn read_to_string(path: &Path) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

pub fn write_string(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content)?;
    Ok(())
}
