use crate::data::{data_density, AggregatedDataset};
use crate::error::Result;
use crate::qm::{bloch_from_field, herm2_log, ln_two_cosh, tanh_over_h, BlochState, FieldVector};

use super::{
    axpy_input, check_data, check_input, check_params, linear_field, LossGrad, Model, ModelKind,
    ModelSnapshot,
};

/// Single-qubit perceptron: three linear fields `h^k = w^k . x` drive the
/// thermal state `rho_x`, and `p(y | x) = (1 + y m^z) / 2`.
///
/// Parameters are laid out as `[w^x, w^y, w^z]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitPerceptron {
    dim: usize,
    bias: bool,
    wx: Vec<f64>,
    wy: Vec<f64>,
    wz: Vec<f64>,
}

impl QubitPerceptron {
    pub fn zeros(dim: usize, bias: bool) -> Self {
        let n = dim + usize::from(bias);
        Self {
            dim,
            bias,
            wx: vec![0.0; n],
            wy: vec![0.0; n],
            wz: vec![0.0; n],
        }
    }

    pub fn from_weights(dim: usize, bias: bool, [wx, wy, wz]: [Vec<f64>; 3]) -> Result<Self> {
        let n = dim + usize::from(bias);
        check_params(n, &wx)?;
        check_params(n, &wy)?;
        check_params(n, &wz)?;
        Ok(Self {
            dim,
            bias,
            wx,
            wy,
            wz,
        })
    }

    pub fn wx(&self) -> &[f64] {
        &self.wx
    }

    pub fn wy(&self) -> &[f64] {
        &self.wy
    }

    pub fn wz(&self) -> &[f64] {
        &self.wz
    }

    fn field_unchecked(&self, x: &[f64]) -> FieldVector {
        FieldVector::new(
            linear_field(&self.wx, x, self.bias),
            linear_field(&self.wy, x, self.bias),
            linear_field(&self.wz, x, self.bias),
        )
    }

    pub fn field(&self, x: &[f64]) -> Result<FieldVector> {
        check_input(self.dim, x)?;
        Ok(self.field_unchecked(x))
    }

    pub fn state(&self, x: &[f64]) -> Result<BlochState> {
        bloch_from_field(self.field(x)?)
    }

    /// The likelihood evaluated literally as `-sum_x q(x) Tr(eta_x ln rho_x)`
    /// through the data density matrix and a matrix logarithm. Independent of
    /// the closed form used by [`Model::loss`].
    pub fn trace_oracle_loss(&self, data: &AggregatedDataset, eigen_floor: f64) -> Result<f64> {
        check_data(self.dim, data)?;
        let mut loss = 0.0;
        for e in data.entries() {
            let eta = data_density(e.label_mean())?.matrix();
            let rho = bloch_from_field(self.field_unchecked(&e.input))?.matrix();
            let log_rho = herm2_log(&rho, eigen_floor)?;
            loss -= e.weight * eta.trace_product(&log_rho);
        }
        Ok(loss)
    }
}

fn pattern_loss(field: &FieldVector, b: f64) -> f64 {
    -(field.hx * (1.0 - b * b).sqrt() + field.hz * b - ln_two_cosh(field.norm()))
}

impl Model for QubitPerceptron {
    fn kind(&self) -> ModelKind {
        ModelKind::Qubit
    }

    fn input_dim(&self) -> usize {
        self.dim
    }

    fn bias_enabled(&self) -> bool {
        self.bias
    }

    fn num_params(&self) -> usize {
        3 * self.wx.len()
    }

    fn params(&self) -> Vec<f64> {
        [self.wx.as_slice(), &self.wy, &self.wz].concat()
    }

    fn set_params(&mut self, params: &[f64]) -> Result<()> {
        check_params(self.num_params(), params)?;
        let n = self.wx.len();
        self.wx.copy_from_slice(&params[..n]);
        self.wy.copy_from_slice(&params[n..2 * n]);
        self.wz.copy_from_slice(&params[2 * n..]);
        Ok(())
    }

    fn loss(&self, data: &AggregatedDataset) -> Result<f64> {
        check_data(self.dim, data)?;
        Ok(data
            .entries()
            .iter()
            .map(|e| e.weight * pattern_loss(&self.field_unchecked(&e.input), e.label_mean()))
            .sum())
    }

    fn loss_grad(&self, data: &AggregatedDataset) -> Result<LossGrad> {
        check_data(self.dim, data)?;
        let n = self.wx.len();
        let mut loss = 0.0;
        let mut grad = vec![0.0; 3 * n];
        let (gx, rest) = grad.split_at_mut(n);
        let (gy, gz) = rest.split_at_mut(n);
        for e in data.entries() {
            let f = self.field_unchecked(&e.input);
            let b = e.label_mean();
            let t = tanh_over_h(f.norm());
            loss += e.weight * pattern_loss(&f, b);
            axpy_input(
                gx,
                -e.weight * ((1.0 - b * b).sqrt() - f.hx * t),
                &e.input,
                self.bias,
            );
            axpy_input(gy, e.weight * f.hy * t, &e.input, self.bias);
            axpy_input(gz, -e.weight * (b - f.hz * t), &e.input, self.bias);
        }
        Ok(LossGrad { loss, grad })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(0.5 * (1.0 + self.state(x)?.mz))
    }

    fn snapshot(&self) -> ModelSnapshot {
        ModelSnapshot::Qubit {
            dim: self.dim,
            bias: self.bias,
            wx: self.wx.clone(),
            wy: self.wy.clone(),
            wz: self.wz.clone(),
        }
    }

    fn clone_box(&self) -> Box<dyn Model> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{aggregate, gen_noisy_2d, gen_xor, Sample, NOISY_2D_FLIP_PATTERNS};
    use crate::qm::DEFAULT_EIGEN_FLOOR;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn zero_weights() {
        let data = aggregate(&gen_noisy_2d(40, 0.3, &NOISY_2D_FLIP_PATTERNS, 1).unwrap()).unwrap();
        let m = QubitPerceptron::zeros(2, true);
        let lg = m.loss_grad(&data).unwrap();
        assert_abs_diff_eq!(lg.loss, LN_2, epsilon = 1e-15);

        let mut gx = [0.0; 3];
        let mut gz = [0.0; 3];
        for e in data.entries() {
            let b = e.label_mean();
            let xb = [e.input[0], e.input[1], 1.0];
            for k in 0..3 {
                gx[k] -= e.weight * (1.0 - b * b).sqrt() * xb[k];
                gz[k] -= e.weight * b * xb[k];
            }
        }
        for k in 0..3 {
            assert_abs_diff_eq!(lg.grad[k], gx[k], epsilon = 1e-15);
            assert_eq!(lg.grad[3 + k], 0.0);
            assert_abs_diff_eq!(lg.grad[6 + k], gz[k], epsilon = 1e-15);
        }
        assert_abs_diff_eq!(
            m.trace_oracle_loss(&data, DEFAULT_EIGEN_FLOOR).unwrap(),
            LN_2,
            epsilon = 1e-14
        );
    }

    #[test]
    fn noiseless_data_has_no_flip_drive() {
        let data = aggregate(&gen_xor(5).unwrap()).unwrap();
        let m = QubitPerceptron::zeros(2, true);
        let lg = m.loss_grad(&data).unwrap();
        assert!(lg.grad[..3].iter().all(|g| *g == 0.0));
    }

    #[test]
    fn balanced_labels_pure_x_field() {
        let data = aggregate(&[
            Sample::new(vec![1], 1).unwrap(),
            Sample::new(vec![1], -1).unwrap(),
        ])
        .unwrap();
        let hx = 0.8;
        let m = QubitPerceptron::from_weights(1, false, [vec![hx], vec![0.0], vec![0.0]]).unwrap();
        let expect = -(hx - (2.0 * hx.cosh()).ln());
        assert_abs_diff_eq!(m.loss(&data).unwrap(), expect, epsilon = 1e-15);
        assert_abs_diff_eq!(
            m.trace_oracle_loss(&data, DEFAULT_EIGEN_FLOOR).unwrap(),
            expect,
            epsilon = 1e-12
        );
    }

    #[test]
    fn predict_examples() {
        let m = QubitPerceptron::zeros(2, true);
        assert_eq!(m.predict(&[1.0, -1.0]).unwrap(), 0.5);

        let m = QubitPerceptron::from_weights(
            2,
            true,
            [vec![0.0; 3], vec![0.0; 3], vec![0.0, 0.0, 1.0]],
        )
        .unwrap();
        assert_abs_diff_eq!(
            m.predict(&[1.0, -1.0]).unwrap(),
            0.880_797_077_977_882_4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn set_params_round_trip() {
        let mut m = QubitPerceptron::zeros(2, false);
        let p: Vec<f64> = (0..6).map(f64::from).collect();
        m.set_params(&p).unwrap();
        assert_eq!(m.wy(), &[2.0, 3.0]);
        assert_eq!(m.params(), p);
        assert!(m.set_params(&p[..5]).is_err());
    }
}
