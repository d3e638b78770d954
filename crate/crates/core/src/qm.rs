//! Single-qubit density-matrix primitives.
//!
//! A qubit state is written in Bloch form `rho = I/2 + (m . sigma)/2` with
//! `m = (h / |h|) tanh |h|` for a real field `h`. Everything here is a small
//! closed-form 2x2 computation; there is no general linear algebra.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Below this field norm `tanh(h)/h` is evaluated by its Taylor series.
pub const SMALL_FIELD: f64 = 1e-4;

/// Default eigenvalue floor used before taking matrix logarithms.
pub const DEFAULT_EIGEN_FLOOR: f64 = 1e-12;

/// Negative eigenvalues down to this value are treated as round-off.
pub const PSD_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// 2x2 Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Herm2 {
    entries: [[Complex64; 2]; 2],
}

impl Herm2 {
    /// Builds `[[a, off], [conj(off), d]]`, which is Hermitian by construction.
    pub fn new(a: f64, d: f64, off: Complex64) -> Self {
        Self {
            entries: [
                [Complex64::new(a, 0.0), off],
                [off.conj(), Complex64::new(d, 0.0)],
            ],
        }
    }

    /// Validates raw entries against the Hermitian invariants.
    pub fn from_entries(entries: [[Complex64; 2]; 2], tol: f64) -> Result<Self> {
        let [[a, b], [c, d]] = entries;
        if a.im.abs() > tol || d.im.abs() > tol {
            return Err(Error::NotHermitian(format!(
                "diagonal has imaginary part ({:e}, {:e})",
                a.im, d.im
            )));
        }
        if (c - b.conj()).norm() > tol {
            return Err(Error::NotHermitian(format!(
                "off-diagonal pair {b} / {c} is not conjugate"
            )));
        }
        Ok(Self::new(a.re, d.re, (b + c.conj()) * 0.5))
    }

    pub fn identity() -> Self {
        Self::new(1.0, 1.0, ZERO)
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0, ZERO)
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Self::new(a, d, ZERO)
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn trace(&self) -> f64 {
        self.entries[0][0].re + self.entries[1][1].re
    }

    pub fn det(&self) -> f64 {
        self.entries[0][0].re * self.entries[1][1].re - self.entries[0][1].norm_sqr()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(
            self.entries[0][0].re * s,
            self.entries[1][1].re * s,
            self.entries[0][1] * s,
        )
    }

    pub fn add(&self, other: &Herm2) -> Self {
        Self::new(
            self.entries[0][0].re + other.entries[0][0].re,
            self.entries[1][1].re + other.entries[1][1].re,
            self.entries[0][1] + other.entries[0][1],
        )
    }

    /// Plain matrix product; the result is generally not Hermitian.
    pub fn matmul(&self, other: &Herm2) -> [[Complex64; 2]; 2] {
        let a = &self.entries;
        let b = &other.entries;
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    /// `Tr(self * other)`, real for a pair of Hermitian matrices.
    pub fn trace_product(&self, other: &Herm2) -> f64 {
        let a = &self.entries;
        let b = &other.entries;
        a[0][0].re * b[0][0].re + a[1][1].re * b[1][1].re + 2.0 * (a[0][1] * b[1][0]).re
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &Herm2) -> f64 {
        let mut worst = 0.0_f64;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }
}

/// The standard Pauli matrix for `axis`.
pub fn pauli(axis: Axis) -> Herm2 {
    match axis {
        Axis::X => Herm2::new(0.0, 0.0, ONE),
        Axis::Y => Herm2::new(0.0, 0.0, -I),
        Axis::Z => Herm2::diag(1.0, -1.0),
    }
}

/// Real field `(hx, hy, hz)` driving a qubit; the inverse temperature is
/// absorbed into the components.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldVector {
    pub hx: f64,
    pub hy: f64,
    pub hz: f64,
    norm: f64,
}

impl FieldVector {
    pub fn new(hx: f64, hy: f64, hz: f64) -> Self {
        Self {
            hx,
            hy,
            hz,
            norm: (hx * hx + hy * hy + hz * hz).sqrt(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.hx,
            Axis::Y => self.hy,
            Axis::Z => self.hz,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.hx.is_finite() && self.hy.is_finite() && self.hz.is_finite()
    }
}

/// `tanh(h) / h`, finite and exact to double precision at `h = 0`.
pub fn tanh_over_h(h: f64) -> f64 {
    if h < SMALL_FIELD {
        let h2 = h * h;
        1.0 - h2 / 3.0 + 2.0 * h2 * h2 / 15.0
    } else {
        h.tanh() / h
    }
}

/// `ln(2 cosh h)` without overflow for large `h`.
pub fn ln_two_cosh(h: f64) -> f64 {
    let a = h.abs();
    a + (-2.0 * a).exp().ln_1p()
}

/// Qubit state in Bloch form together with the field that generated it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub mx: f64,
    pub my: f64,
    pub mz: f64,
    pub source_field: FieldVector,
}

impl BlochState {
    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.mx,
            Axis::Y => self.my,
            Axis::Z => self.mz,
        }
    }

    pub fn bloch_norm(&self) -> f64 {
        (self.mx * self.mx + self.my * self.my + self.mz * self.mz).sqrt()
    }

    /// `I/2 + (m . sigma)/2`.
    pub fn matrix(&self) -> Herm2 {
        Herm2::new(
            0.5 * (1.0 + self.mz),
            0.5 * (1.0 - self.mz),
            Complex64::new(0.5 * self.mx, -0.5 * self.my),
        )
    }

    /// `(1 + |m|)/2, (1 - |m|)/2`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let r = self.bloch_norm();
        [0.5 * (1.0 + r), 0.5 * (1.0 - r)]
    }
}

/// Maps a field to its thermal qubit state, `m^k = (h^k / h) tanh h`.
pub fn bloch_from_field(field: FieldVector) -> Result<BlochState> {
    if !field.is_finite() {
        return Err(Error::InvalidField(format!(
            "non-finite component in ({}, {}, {})",
            field.hx, field.hy, field.hz
        )));
    }
    let t = tanh_over_h(field.norm());
    Ok(BlochState {
        mx: field.hx * t,
        my: field.hy * t,
        mz: field.hz * t,
        source_field: field,
    })
}

/// Eigendecomposition of a [`Herm2`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigh2 {
    /// Descending.
    pub values: [f64; 2],
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: [[Complex64; 2]; 2],
}

impl Eigh2 {
    /// `V diag(f(lambda)) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Herm2 {
        let mut a = 0.0;
        let mut d = 0.0;
        let mut off = ZERO;
        for k in 0..2 {
            let l = f(self.values[k]);
            let v = self.vectors[k];
            a += l * v[0].norm_sqr();
            d += l * v[1].norm_sqr();
            off += v[0] * v[1].conj() * l;
        }
        Herm2::new(a, d, off)
    }

    pub fn reconstruct(&self) -> Herm2 {
        self.reconstruct_with(|l| l)
    }
}

/// Closed-form eigendecomposition with eigenvalues in descending order.
pub fn herm2_eigh(m: &Herm2) -> Eigh2 {
    let a = m.entries[0][0].re;
    let d = m.entries[1][1].re;
    let c = m.entries[0][1];
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let radius = half_gap.hypot(c.norm());
    let scale = a.abs().max(d.abs()).max(c.norm());
    if c.norm() <= f64::EPSILON * scale {
        let (values, first) = if a >= d {
            ([a, d], [ONE, ZERO])
        } else {
            ([d, a], [ZERO, ONE])
        };
        return Eigh2 {
            values,
            vectors: [first, [-first[1].conj(), first[0].conj()]],
        };
    }
    let values = [mean + radius, mean - radius];
    let first = if a >= d {
        // (lambda+ - d, conj(c)) with lambda+ - d >= radius > 0
        let v = [Complex64::new(values[0] - d, 0.0), c.conj()];
        normalize(v)
    } else {
        // (c, lambda+ - a) with lambda+ - a >= radius > 0
        let v = [c, Complex64::new(values[0] - a, 0.0)];
        normalize(v)
    };
    let second = [-first[1].conj(), first[0].conj()];
    Eigh2 {
        values,
        vectors: [first, second],
    }
}

fn normalize(v: [Complex64; 2]) -> [Complex64; 2] {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

/// Matrix logarithm of a PSD Hermitian matrix with eigenvalues clamped
/// below at `eigen_floor`.
pub fn herm2_log(m: &Herm2, eigen_floor: f64) -> Result<Herm2> {
    if !(eigen_floor > 0.0) {
        return Err(Error::InvalidFloor(eigen_floor));
    }
    let eig = herm2_eigh(m);
    if eig.values[1] < -PSD_TOLERANCE {
        return Err(Error::NotPsd(eig.values[1]));
    }
    Ok(eig.reconstruct_with(|l| l.max(eigen_floor).ln()))
}
