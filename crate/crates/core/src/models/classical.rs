use crate::data::AggregatedDataset;
use crate::error::Result;

use super::{
    axpy_input, check_data, check_input, check_params, linear_field, LossGrad, Model, ModelKind,
    ModelSnapshot,
};

/// Logistic-regression perceptron, `p(y = 1 | x) = sigmoid(w . x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalPerceptron {
    dim: usize,
    bias: bool,
    w: Vec<f64>,
}

/// `ln(1 + e^t)` without overflow.
fn softplus(t: f64) -> f64 {
    t.max(0.0) + (-t.abs()).exp().ln_1p()
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

impl ClassicalPerceptron {
    pub fn zeros(dim: usize, bias: bool) -> Self {
        Self {
            dim,
            bias,
            w: vec![0.0; dim + usize::from(bias)],
        }
    }

    pub fn from_weights(dim: usize, bias: bool, w: Vec<f64>) -> Result<Self> {
        check_params(dim + usize::from(bias), &w)?;
        Ok(Self { dim, bias, w })
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn field(&self, x: &[f64]) -> Result<f64> {
        check_input(self.dim, x)?;
        Ok(linear_field(&self.w, x, self.bias))
    }
}

impl Model for ClassicalPerceptron {
    fn kind(&self) -> ModelKind {
        ModelKind::Classical
    }

    fn input_dim(&self) -> usize {
        self.dim
    }

    fn bias_enabled(&self) -> bool {
        self.bias
    }

    fn num_params(&self) -> usize {
        self.w.len()
    }

    fn params(&self) -> Vec<f64> {
        self.w.clone()
    }

    fn set_params(&mut self, params: &[f64]) -> Result<()> {
        check_params(self.w.len(), params)?;
        self.w.copy_from_slice(params);
        Ok(())
    }

    fn loss(&self, data: &AggregatedDataset) -> Result<f64> {
        check_data(self.dim, data)?;
        Ok(data
            .entries()
            .iter()
            .map(|e| {
                let z = linear_field(&self.w, &e.input, self.bias);
                let up = e.prob_positive();
                e.weight * (up * softplus(-z) + (1.0 - up) * softplus(z))
            })
            .sum())
    }

    fn loss_grad(&self, data: &AggregatedDataset) -> Result<LossGrad> {
        check_data(self.dim, data)?;
        let mut loss = 0.0;
        let mut grad = vec![0.0; self.w.len()];
        for e in data.entries() {
            let z = linear_field(&self.w, &e.input, self.bias);
            let up = e.prob_positive();
            loss += e.weight * (up * softplus(-z) + (1.0 - up) * softplus(z));
            axpy_input(&mut grad, e.weight * (sigmoid(z) - up), &e.input, self.bias);
        }
        Ok(LossGrad { loss, grad })
    }

    fn predict(&self, x: &[f64]) -> Result<f64> {
        Ok(sigmoid(self.field(x)?))
    }

    fn snapshot(&self) -> ModelSnapshot {
        ModelSnapshot::Classical {
            dim: self.dim,
            bias: self.bias,
            w: self.w.clone(),
        }
    }

    fn clone_box(&self) -> Box<dyn Model> {
        Box::new(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{aggregate, gen_xor, Sample};
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_weights_give_ln2() {
        let data = aggregate(&gen_xor(3).unwrap()).unwrap();
        let m = ClassicalPerceptron::zeros(2, true);
        assert_abs_diff_eq!(
            m.loss(&data).unwrap(),
            std::f64::consts::LN_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn confident_correct_label_has_vanishing_loss() {
        let data = aggregate(&[Sample::new(vec![1, 1], 1).unwrap()]).unwrap();
        let m = ClassicalPerceptron::from_weights(2, false, vec![250.0, 250.0]).unwrap();
        let lg = m.loss_grad(&data).unwrap();
        assert!(lg.loss < 1e-200);
        assert!(lg.grad.iter().all(|g| g.is_finite()));
        // and the wrong sign is finite, not inf
        let m = ClassicalPerceptron::from_weights(2, false, vec![-250.0, -250.0]).unwrap();
        assert_abs_diff_eq!(m.loss(&data).unwrap(), 500.0, epsilon = 1e-9);
    }

    #[test]
    fn dimension_mismatch() {
        let data = aggregate(&gen_xor(1).unwrap()).unwrap();
        let m = ClassicalPerceptron::zeros(3, true);
        assert!(m.loss_grad(&data).is_err());
        assert!(m.predict(&[1.0]).is_err());
    }
}
