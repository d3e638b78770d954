use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::data::{data_density, rng_from_seed, AggregatedDataset, PatternStats};
use crate::error::{Error, Result};
use crate::qm::{herm2_eigh, herm2_log, Herm2, DEFAULT_EIGEN_FLOOR};

use super::{
    check_data, check_input, check_params, finite_difference_grad, LossGrad, Model, ModelKind,
    ModelSnapshot,
};

/// Standard deviation of the real and imaginary parts at initialisation.
pub const DEFAULT_INIT_SCALE: f64 = 0.1;

/// Central-difference step for the default gradient.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// How [`EntangledPerceptron::loss_grad`] differentiates the loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientMethod {
    FiniteDifference {
        step: f64,
    },
    /// Eigendecomposition plus divided differences of the matrix log.
    Analytic,
}

impl Default for GradientMethod {
    fn default() -> Self {
        GradientMethod::FiniteDifference {
            step: DEFAULT_FD_STEP,
        }
    }
}

/// Two-qubit pure state `|phi> ~ sum_ij h^{ij} |i>|j>` with complex linear
/// amplitudes `h^{ij} = w^{ij} . x`; the classifier reads the reduced state
/// of the second qubit.
///
/// Weight blocks are ordered `00, 01, 10, 11`; the flat parameter vector
/// stores each block as interleaved `re, im` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledPerceptron {
    dim: usize,
    bias: bool,
    w: [Vec<Complex64>; 4],
    eigen_floor: f64,
    gradient: GradientMethod,
}

impl EntangledPerceptron {
    pub fn from_weights(
        dim: usize,
        bias: bool,
        w: [Vec<Complex64>; 4],
        eigen_floor: f64,
    ) -> Result<Self> {
        let n = dim + usize::from(bias);
        for block in &w {
            if block.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: block.len(),
                });
            }
        }
        if !(eigen_floor > 0.0) {
            return Err(Error::InvalidFloor(eigen_floor));
        }
        if w.iter().flatten().all(|c| *c == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidConfig(
                "all-zero entangled weights give a vanishing state".into(),
            ));
        }
        Ok(Self {
            dim,
            bias,
            w,
            eigen_floor,
            gradient: GradientMethod::default(),
        })
    }

    /// Real and imaginary parts drawn i.i.d. from `N(0, scale^2)`.
    pub fn random(dim: usize, bias: bool, scale: f64, seed: u64) -> Result<Self> {
        let n = dim + usize::from(bias);
        let mut rng = rng_from_seed(seed);
        let mut draw = || -> Vec<Complex64> {
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex64::new(scale * re, scale * im)
                })
                .collect()
        };
        let w = [draw(), draw(), draw(), draw()];
        Self::from_weights(dim, bias, w, DEFAULT_EIGEN_FLOOR)
    }

    pub fn with_gradient(mut self, gradient: GradientMethod) -> Self {
        self.gradient = gradient;
        self
    }

    pub fn with_eigen_floor(mut self, eigen_floor: f64) -> Result<Self> {
        if !(eigen_floor > 0.0) {
            return Err(Error::InvalidFloor(eigen_floor));
        }
        self.eigen_floor = eigen_floor;
        Ok(self)
    }

    pub fn gradient_method(&self) -> GradientMethod {
        self.gradient
    }

    pub fn eigen_floor(&self) -> f64 {
        self.eigen_floor
    }

    /// Weight block `w^{ij}`.
    pub fn weights(&self, i: usize, j: usize) -> &[Complex64] {
        &self.w[2 * i + j]
    }

    /// Same model with every weight multiplied by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for v in out.w.iter_mut().flatten() {
            *v *= c;
        }
        out
    }

    fn amplitudes_unchecked(&self, x: &[f64]) -> [[Complex64; 2]; 2] {
        let field = |w: &[Complex64]| -> Complex64 {
            let mut acc: Complex64 = w.iter().zip(x).map(|(a, &b)| a * b).sum();
            if self.bias {
                acc += w[x.len()];
            }
            acc
        };
        [
            [field(&self.w[0]), field(&self.w[1])],
            [field(&self.w[2]), field(&self.w[3])],
        ]
    }

    /// Amplitudes `h[i][j] = w^{ij} . x`.
    pub fn amplitudes(&self, x: &[f64]) -> Result<[[Complex64; 2]; 2]> {
        check_input(self.dim, x)?;
        Ok(self.amplitudes_unchecked(x))
    }

    /// Reduced density matrix of the second qubit,
    /// `rho[j][j'] = (1/N) sum_i conj(h^{ij}) h^{ij'}`.
    pub fn rho(&self, x: &[f64]) -> Result<Herm2> {
        let h = self.amplitudes(x)?;
        reduced_density(&h).ok_or_else(|| Error::DegenerateState(x.to_vec()))
    }

    fn pattern_loss(&self, e: &PatternStats) -> Result<f64> {
        let h = self.amplitudes_unchecked(&e.input);
        let rho = reduced_density(&h).ok_or_else(|| Error::DegenerateState(e.input.clone()))?;
        let eta = data_density(e.label_mean())?.matrix();
        Ok(-eta.trace_product(&herm2_log(&rho, self.eigen_floor)?))
    }

    fn analytic_loss_grad(&self, data: &AggregatedDataset) -> Result<LossGrad> {
        let n = self.dim + usize::from(self.bias);
        let mut loss = 0.0;
        let mut grad = vec![0.0; 8 * n];
        for e in data.entries() {
            let h = self.amplitudes_unchecked(&e.input);
            let rho = reduced_density(&h).ok_or_else(|| Error::DegenerateState(e.input.clone()))?;
            let norm: f64 = h.iter().flatten().map(|c| c.norm_sqr()).sum();
            let eta = data_density(e.label_mean())?.matrix();
            let (value, g) = log_likelihood_gradient(&rho, &eta, self.eigen_floor)?;
            loss -= e.weight * value;

            // dTr(G drho) = (2/N) Re Tr(K dH) with K = (G - Tr(G rho) I) H^dagger
            let shift = g.trace_product(&rho);
            let g_shift = g.add(&Herm2::identity().scale(-shift));
            let ge = g_shift.entries();
            let mut k = [[Complex64::new(0.0, 0.0); 2]; 2];
            for (jr, row) in k.iter_mut().enumerate() {
                for (ic, cell) in row.iter_mut().enumerate() {
                    *cell = ge[jr][0] * h[ic][0].conj() + ge[jr][1] * h[ic][1].conj();
                }
            }
            for i in 0..2 {
                for j in 0..2 {
                    let kji = k[j][i] * (-2.0 * e.weight / norm);
                    let block = &mut grad[(2 * i + j) * 2 * n..(2 * i + j + 1) * 2 * n];
                    for mu in 0..n {
                        let xm = if mu < self.dim { e.input[mu] } else { 1.0 };
                        block[2 * mu] += kji.re * xm;
                        block[2 * mu + 1] -= kji.im * xm;
                    }
                }
            }
        }
        Ok(LossGrad { loss, grad })
    }
}

fn reduced_density(h: &[[Complex64; 2]; 2]) -> Option<Herm2> {
    let norm: f64 = h.iter().flatten().map(|c| c.norm_sqr()).sum();
    if !(norm > 0.0) || !norm.is_finite() {
        return None;
    }
    let r00 = (h[0][0].norm_sqr() + h[1][0].norm_sqr()) / norm;
    let r11 = (h[0][1].norm_sqr() + h[1][1].norm_sqr()) / norm;
    let r01 = (h[0][0].conj() * h[0][1] + h[1][0].conj() * h[1][1]) / norm;
    Some(Herm2::new(r00, r11, r01))
}

/// `Tr(eta ln rho)` and its gradient `G` with respect to `rho`, so that
/// `d Tr(eta ln rho) = Tr(G d rho)`. Uses the divided differences of the
/// floored logarithm in the eigenbasis of `rho`.
fn log_likelihood_gradient(rho: &Herm2, eta: &Herm2, floor: f64) -> Result<(f64, Herm2)> {
    let eig = herm2_eigh(rho);
    if eig.values[1] < -crate::qm::PSD_TOLERANCE {
        return Err(Error::NotPsd(eig.values[1]));
    }
    let lam = eig.values;
    let clamp = |l: f64| l.max(floor);
    let log = |l: f64| clamp(l).ln();
    let slope = |l: f64| if l > floor { 1.0 / l } else { 0.0 };
    let divided = |a: f64, b: f64| -> f64 {
        if a > floor && b > floor {
            let gap = a - b;
            if gap.abs() <= 1e-12 * a.max(b) {
                2.0 / (a + b)
            } else {
                (gap / b).ln_1p() / gap
            }
        } else if a == b {
            slope(a)
        } else {
            (log(a) - log(b)) / (a - b)
        }
    };
    let f = [
        [slope(lam[0]), divided(lam[0], lam[1])],
        [divided(lam[1], lam[0]), slope(lam[1])],
    ];
    // eta in the eigenbasis: eta~[a][b] = v_a^dagger eta v_b
    let et = eta.entries();
    let v = eig.vectors;
    let mut eta_t = [[Complex64::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..2 {
                for c in 0..2 {
                    acc += v[a][r].conj() * et[r][c] * v[b][c];
                }
            }
            eta_t[a][b] = acc;
        }
    }
    let value = eta_t[0][0].re * log(lam[0]) + eta_t[1][1].re * log(lam[1]);
    // G = V (F o eta~) V^dagger
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, row) in g.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for a in 0..2 {
                for b in 0..2 {
                    acc += v[a][r] * eta_t[a][b] * f[a][b] * v[b][c].conj();
                }
            }
            *cell = acc;
        }
    }
    Ok((value, Herm2::from_entries(g, 1e-9)?))
}

impl Model for EntangledPerceptron {
    fn kind(&self) -> ModelKind {
        ModelKind::Entangled
    }

    fn input_dim(&self) -> usize {
        self.dim
    }

    fn bias_enabled(&self) -> bool {
        self.bias
    }

    fn num_params(&self) -> usize {
        8 * self.w[0].len()
    }

    fn params(&self) -> Vec<f64> {
        self.w.iter().flatten().flat_map(|c| [c.re, c.im]).collect()
    }

    fn set_params(&mut self, params: &[f64]) -> Result<()> {
        check_params(self.num_params(), params)?;
        for (c, pair) in self.w.iter_mut().flatten().zip(params.chunks_exact(2)) {
            *c = Complex64::new(pair[0], pair[1]);
        }
        Ok(())
    }

    fn loss(&self, data: &AggregatedDataset) -> Result<f64> {
        check_data(self.dim, data)?;
        let mut loss = 0.0;
        for e in data.entries() {
            loss += e.weight * self.pattern_loss(e)?;
        }
        Ok(loss)
    }

    fn loss_grad(&self, data: &AggregatedDataset) -> Result<LossGrad> {
        check_data(self.dim, data)?;
        match self.gradient {
            GradientMethod::FiniteDifference { step } => {
                let loss = self.loss(data)?;
                let grad = finite_difference_grad(self, data, step)?;
                Ok(LossGrad { loss, grad })
            }
            GradientMethod::Analytic => self.analytic_loss_grad(data),
        }
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(self.rho(x)?.get(0, 0).re)
    }

    fn snapshot(&self) -> ModelSnapshot {
        let pairs = |v: &[Complex64]| v.iter().map(|c| [c.re, c.im]).collect();
        ModelSnapshot::Entangled {
            dim: self.dim,
            bias: self.bias,
            eigen_floor: self.eigen_floor,
            w00: pairs(&self.w[0]),
            w01: pairs(&self.w[1]),
            w10: pairs(&self.w[2]),
            w11: pairs(&self.w[3]),
        }
    }

    fn clone_box(&self) -> Box<dyn Model> {
        Box::new(self.clone())
    }
}
