//! Decision-boundary geometry and dense expectation grids.
//!
//! The single-qubit separation boundary is the hyperplane `h^z = 0`; the
//! entangled model's boundaries are quadrics in the (bias-augmented) input.
//! Residual functions here vanish exactly on those sets and are used to
//! cross-check the exported grids.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{EntangledPerceptron, Model, QubitPerceptron};

/// `E[y | x] = 2 p(+1 | x) - 1` sampled on a uniform 2-D grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationGrid {
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
    /// `values[r][c]` is the expectation at `(x0[c], x1[r])`.
    pub values: Vec<Vec<f64>>,
}

fn axis(range: (f64, f64), resolution: usize) -> Vec<f64> {
    let (lo, hi) = range;
    let step = (hi - lo) / (resolution - 1) as f64;
    (0..resolution).map(|i| lo + step * i as f64).collect()
}

/// Evaluates `f` at every node of a `resolution x resolution` grid.
pub fn eval_grid(
    x0_range: (f64, f64),
    x1_range: (f64, f64),
    resolution: usize,
    f: impl Fn(&[f64]) -> Result<f64>,
) -> Result<ExpectationGrid> {
    if resolution < 2 {
        return Err(Error::Precondition(format!(
            "grid resolution must be at least 2, got {resolution}"
        )));
    }
    let x0 = axis(x0_range, resolution);
    let x1 = axis(x1_range, resolution);
    let values = x1
        .iter()
        .map(|&b| x0.iter().map(|&a| f(&[a, b])).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(ExpectationGrid { x0, x1, values })
}

pub fn expectation_grid(
    model: &dyn Model,
    x0_range: (f64, f64),
    x1_range: (f64, f64),
    resolution: usize,
) -> Result<ExpectationGrid> {
    if model.input_dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: model.input_dim(),
        });
    }
    eval_grid(x0_range, x1_range, resolution, |x| {
        Ok(2.0 * model.predict(x)? - 1.0)
    })
}

/// Grid CSV: the header row holds the `x0` coordinates, the first column
/// the `x1` coordinates. Every number has 9 significant digits.
pub fn write_grid_csv<W: Write>(mut writer: W, grid: &ExpectationGrid) -> Result<()> {
    write!(writer, "x1\\x0")?;
    for a in &grid.x0 {
        write!(writer, ",{a:.8e}")?;
    }
    writeln!(writer)?;
    for (b, row) in grid.x1.iter().zip(&grid.values) {
        write!(writer, "{b:.8e}")?;
        for v in row {
            write!(writer, ",{v:.8e}")?;
        }
        writeln!(writer)?;
    }
    Ok(())
}

/// Offset of an equal-probability curve, `p(+1 | x) = (1 + epsilon) / 2`,
/// with the coefficient its boundary equation uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySpec {
    pub epsilon_prob: f64,
    pub delta: f64,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::Domain(format!("epsilon {epsilon} outside [0, 1)")))
    }
}

impl BoundarySpec {
    /// Asymptotic slope of the single-qubit curves, `h^z = ±delta h^x`
    /// for large `h`, with `delta = epsilon / sqrt(1 - epsilon^2)`.
    pub fn qubit(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            epsilon_prob: epsilon,
            delta: epsilon / (1.0 - epsilon * epsilon).sqrt(),
        })
    }

    /// `delta = (1 + epsilon) / (1 - epsilon)` for the entangled quadrics.
    pub fn entangled(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self {
            epsilon_prob: epsilon,
            delta: (1.0 + epsilon) / (1.0 - epsilon),
        })
    }
}

/// `h^z(x)`; zero exactly on the `p = 1/2` boundary.
pub fn qubit_separation_residual(model: &QubitPerceptron, x: &[f64]) -> Result<f64> {
    Ok(model.field(x)?.hz)
}

/// Largest `|w^y|` for which the `h^y -> 0` curve equation applies.
pub const WY_FIXED_POINT_TOL: f64 = 1e-3;

/// `(h^z)^2 tanh^2 h - ((h^x)^2 + (h^z)^2) epsilon^2`, zero on the
/// `p(+1|x) = (1 + epsilon)/2` curve of a model at its `w^y = 0` fixed point.
pub fn qubit_equal_prob_residual(model: &QubitPerceptron, x: &[f64], epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let wy_norm = model.wy().iter().map(|w| w * w).sum::<f64>().sqrt();
    if wy_norm >= WY_FIXED_POINT_TOL {
        return Err(Error::Precondition(format!(
            "|w^y| = {wy_norm:e} is not below {WY_FIXED_POINT_TOL:e}"
        )));
    }
    let f = model.field(x)?;
    let t = f.norm().tanh();
    Ok(f.hz * f.hz * t * t - (f.hx * f.hx + f.hz * f.hz) * epsilon * epsilon)
}

/// `(|h00|^2 + |h10|^2) - delta (|h01|^2 + |h11|^2)`; its sign is the sign
/// of `p(+1|x) - (1 + epsilon)/2`.
pub fn entangled_quadric_residual(
    model: &EntangledPerceptron,
    x: &[f64],
    epsilon: f64,
) -> Result<f64> {
    let spec = BoundarySpec::entangled(epsilon)?;
    let h = model.amplitudes(x)?;
    let up = h[0][0].norm_sqr() + h[1][0].norm_sqr();
    let down = h[0][1].norm_sqr() + h[1][1].norm_sqr();
    if !(up + down > 0.0) {
        return Err(Error::DegenerateState(x.to_vec()));
    }
    Ok(up - spec.delta * down)
}

/// Dense symmetric matrix.
pub type SymMatrix = Vec<Vec<f64>>;

/// Symmetrised coefficient matrix of `(w_a . x)(w_b . x)`:
/// `B[mu][nu] = (w_a^mu w_b^nu + w_a^nu w_b^mu) / 2`. In two dimensions the
/// entries are `B[0][0] = w^00`, `B[0][1] = B[1][0] = w^sym`, `B[1][1] = w^11`.
pub fn symmetric_product_form(w_a: &[f64], w_b: &[f64]) -> SymMatrix {
    let n = w_a.len();
    (0..n)
        .map(|m| {
            (0..n)
                .map(|v| 0.5 * (w_a[m] * w_b[v] + w_a[v] * w_b[m]))
                .collect()
        })
        .collect()
}

/// `x~^T B x~` where `x~` is `x` augmented with a trailing 1 when `bias`.
pub fn eval_quadratic(form: &SymMatrix, x: &[f64], bias: bool) -> f64 {
    let n = form.len();
    let xt = |i: usize| if i < x.len() { x[i] } else { 1.0 };
    debug_assert_eq!(n, x.len() + usize::from(bias));
    let mut acc = 0.0;
    for (m, row) in form.iter().enumerate() {
        for (v, b) in row.iter().enumerate() {
            acc += b * xt(m) * xt(v);
        }
    }
    acc
}

/// Real symmetric form whose quadratic value is
/// [`entangled_quadric_residual`]. Each `|w . x|^2` contributes
/// `Re(conj(w^mu) w^nu)`.
pub fn entangled_quadric_form(model: &EntangledPerceptron, epsilon: f64) -> Result<SymMatrix> {
    let spec = BoundarySpec::entangled(epsilon)?;
    let n = model.weights(0, 0).len();
    let mut form = vec![vec![0.0; n]; n];
    let blocks = [
        ((0, 0), 1.0),
        ((1, 0), 1.0),
        ((0, 1), -spec.delta),
        ((1, 1), -spec.delta),
    ];
    for ((i, j), sign) in blocks {
        let w = model.weights(i, j);
        for m in 0..n {
            for v in 0..n {
                form[m][v] += sign * (w[m].conj() * w[v]).re;
            }
        }
    }
    Ok(form)
}

/// A pair of horizontally or vertically adjacent nodes `(row, col)`.
pub type GridEdge = ((usize, usize), (usize, usize));

/// Grid edges across which `values` changes sign (zero counts as positive).
pub fn sign_change_edges(values: &[Vec<f64>]) -> Vec<GridEdge> {
    let pos = |v: f64| v >= 0.0;
    let mut out = Vec::new();
    for r in 0..values.len() {
        for c in 0..values[r].len() {
            if c + 1 < values[r].len() && pos(values[r][c]) != pos(values[r][c + 1]) {
                out.push(((r, c), (r, c + 1)));
            }
            if r + 1 < values.len() && pos(values[r][c]) != pos(values[r + 1][c]) {
                out.push(((r, c), (r + 1, c)));
            }
        }
    }
    out
}

/// Whether every sign change of `a` has a sign change of `b` within one grid
/// cell, and vice versa.
pub fn crossings_within_one_cell(a: &[Vec<f64>], b: &[Vec<f64>]) -> bool {
    let ea = sign_change_edges(a);
    let eb = sign_change_edges(b);
    let near = |e: &GridEdge, f: &GridEdge| {
        let d = |p: (usize, usize), q: (usize, usize)| p.0.abs_diff(q.0).max(p.1.abs_diff(q.1));
        d(e.0, f.0)
            .min(d(e.0, f.1))
            .min(d(e.1, f.0))
            .min(d(e.1, f.1))
            <= 1
    };
    let covered = |from: &[GridEdge], to: &[GridEdge]| {
        let set: std::collections::HashSet<&GridEdge> = to.iter().collect();
        from.iter()
            .all(|e| set.contains(e) || to.iter().any(|f| near(e, f)))
    };
    covered(&ea, &eb) && covered(&eb, &ea)
}
