//! The three perceptrons behind a common [`Model`] trait.
//!
//! Each model exposes its weights as one flat real vector so that the
//! trainer and the gradient checks never need to know which family they are
//! driving. Models are looked up by name through [`ModelRegistry`].

mod classical;
mod entangled;
mod qubit;
mod registry;

pub use classical::ClassicalPerceptron;
pub use entangled::{EntangledPerceptron, GradientMethod, DEFAULT_FD_STEP, DEFAULT_INIT_SCALE};
pub use qubit::QubitPerceptron;
pub use registry::{ModelFactory, ModelRegistry, ModelSpec};

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::data::{AggregatedDataset, Sample};
use crate::error::{Error, Result};

/// A loss value with its gradient over all real parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LossGrad {
    pub loss: f64,
    pub grad: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Classical,
    Qubit,
    Entangled,
}

impl ModelKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Classical => "classical",
            ModelKind::Qubit => "qubit",
            ModelKind::Entangled => "entangled",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Binary classifier trained by minimising a log-likelihood over an
/// [`AggregatedDataset`].
pub trait Model: fmt::Debug + Send + Sync {
    fn kind(&self) -> ModelKind;

    /// Raw input dimension `d` (without the bias coordinate).
    fn input_dim(&self) -> usize;

    fn bias_enabled(&self) -> bool;

    fn num_params(&self) -> usize;

    fn params(&self) -> Vec<f64>;

    fn set_params(&mut self, params: &[f64]) -> Result<()>;

    fn loss(&self, data: &AggregatedDataset) -> Result<f64>;

    fn loss_grad(&self, data: &AggregatedDataset) -> Result<LossGrad>;

    /// `p(y = +1 | x)`.
    fn predict(&self, x: &[f64]) -> Result<f64>;

    fn snapshot(&self) -> ModelSnapshot;

    fn clone_box(&self) -> Box<dyn Model>;
}

impl Clone for Box<dyn Model> {
    fn clone(&self) -> Self {
        self.clone_box()
    }
}

/// Serialisable weights of any model. Complex weights are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelSnapshot {
    Classical {
        dim: usize,
        bias: bool,
        w: Vec<f64>,
    },
    Qubit {
        dim: usize,
        bias: bool,
        wx: Vec<f64>,
        wy: Vec<f64>,
        wz: Vec<f64>,
    },
    Entangled {
        dim: usize,
        bias: bool,
        eigen_floor: f64,
        w00: Vec<[f64; 2]>,
        w01: Vec<[f64; 2]>,
        w10: Vec<[f64; 2]>,
        w11: Vec<[f64; 2]>,
    },
}

impl ModelSnapshot {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelSnapshot::Classical { .. } => ModelKind::Classical,
            ModelSnapshot::Qubit { .. } => ModelKind::Qubit,
            ModelSnapshot::Entangled { .. } => ModelKind::Entangled,
        }
    }

    pub fn to_model(&self) -> Result<Box<dyn Model>> {
        let check = |dim: usize, bias: bool, len: usize| {
            let want = dim + usize::from(bias);
            if len == want {
                Ok(())
            } else {
                Err(Error::DimensionMismatch {
                    expected: want,
                    got: len,
                })
            }
        };
        match self {
            ModelSnapshot::Classical { dim, bias, w } => {
                check(*dim, *bias, w.len())?;
                Ok(Box::new(ClassicalPerceptron::from_weights(
                    *dim,
                    *bias,
                    w.clone(),
                )?))
            }
            ModelSnapshot::Qubit { .. } => Ok(Box::new(self.to_qubit()?)),
            ModelSnapshot::Entangled { .. } => Ok(Box::new(self.to_entangled()?)),
        }
    }

    /// The snapshot as a concrete [`QubitPerceptron`].
    pub fn to_qubit(&self) -> Result<QubitPerceptron> {
        match self {
            ModelSnapshot::Qubit {
                dim,
                bias,
                wx,
                wy,
                wz,
            } => QubitPerceptron::from_weights(*dim, *bias, [wx.clone(), wy.clone(), wz.clone()]),
            other => Err(Error::InvalidConfig(format!(
                "expected a qubit snapshot, got {}",
                other.kind()
            ))),
        }
    }

    /// The snapshot as a concrete [`EntangledPerceptron`] with the default
    /// gradient method.
    pub fn to_entangled(&self) -> Result<EntangledPerceptron> {
        match self {
            ModelSnapshot::Entangled {
                dim,
                bias,
                eigen_floor,
                w00,
                w01,
                w10,
                w11,
            } => {
                let conv = |v: &[[f64; 2]]| -> Vec<Complex64> {
                    v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
                };
                EntangledPerceptron::from_weights(
                    *dim,
                    *bias,
                    [conv(w00), conv(w01), conv(w10), conv(w11)],
                    *eigen_floor,
                )
            }
            other => Err(Error::InvalidConfig(format!(
                "expected an entangled snapshot, got {}",
                other.kind()
            ))),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// `w . (x, 1)` when `bias`, `w . x` otherwise. Caller checks lengths.
#[inline]
pub(crate) fn linear_field(w: &[f64], x: &[f64], bias: bool) -> f64 {
    let mut acc: f64 = w.iter().zip(x).map(|(a, b)| a * b).sum();
    if bias {
        acc += w[x.len()];
    }
    acc
}

/// Adds `scale * (x, 1)` into `out`.
#[inline]
pub(crate) fn axpy_input(out: &mut [f64], scale: f64, x: &[f64], bias: bool) {
    for (o, xi) in out.iter_mut().zip(x) {
        *o += scale * xi;
    }
    if bias {
        out[x.len()] += scale;
    }
}

pub(crate) fn check_input(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: x.len(),
        })
    }
}

pub(crate) fn check_data(expected: usize, data: &AggregatedDataset) -> Result<()> {
    if data.dim() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: data.dim(),
        })
    }
}

pub(crate) fn check_params(expected: usize, params: &[f64]) -> Result<()> {
    if params.len() == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected,
            got: params.len(),
        })
    }
}

/// Brier-form mean squared error: mean of `(1[y = +1] - p(+1 | x))^2`.
pub fn mse(prob_positive: &[f64], labels: &[i8]) -> Result<f64> {
    if prob_positive.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: labels.len(),
            got: prob_positive.len(),
        });
    }
    if labels.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let sum: f64 = prob_positive
        .iter()
        .zip(labels)
        .map(|(p, &y)| {
            let target = if y == 1 { 1.0 } else { 0.0 };
            (target - p).powi(2)
        })
        .sum();
    Ok(sum / labels.len() as f64)
}

pub fn predict_samples(model: &dyn Model, samples: &[Sample]) -> Result<Vec<f64>> {
    samples.iter().map(|s| model.predict(&s.input())).collect()
}

/// Model MSE over a sample list.
pub fn sample_mse(model: &dyn Model, samples: &[Sample]) -> Result<f64> {
    let p = predict_samples(model, samples)?;
    let y: Vec<i8> = samples.iter().map(Sample::y).collect();
    mse(&p, &y)
}

/// Fraction of samples whose thresholded prediction (`p > threshold` means
/// +1) matches the label.
pub fn accuracy(model: &dyn Model, samples: &[Sample], threshold: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut hits = 0usize;
    for s in samples {
        let predicted = if model.predict(&s.input())? > threshold {
            1
        } else {
            -1
        };
        hits += usize::from(predicted == s.y());
    }
    Ok(hits as f64 / samples.len() as f64)
}

/// Flat-parameter central finite-difference gradient of `loss`.
pub fn finite_difference_grad(
    model: &dyn Model,
    data: &AggregatedDataset,
    step: f64,
) -> Result<Vec<f64>> {
    let mut probe = model.clone_box();
    let base = model.params();
    let mut grad = Vec::with_capacity(base.len());
    let mut p = base.clone();
    for i in 0..base.len() {
        p[i] = base[i] + step;
        probe.set_params(&p)?;
        let up = probe.loss(data)?;
        p[i] = base[i] - step;
        probe.set_params(&p)?;
        let down = probe.loss(data)?;
        p[i] = base[i];
        grad.push((up - down) / (2.0 * step));
    }
    Ok(grad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn mse_examples() {
        assert_eq!(mse(&[1.0, 0.0, 1.0], &[1, -1, 1]).unwrap(), 0.0);
        assert_eq!(mse(&[0.5; 4], &[1, -1, -1, 1]).unwrap(), 0.25);
        assert!(mse(&[0.5], &[1, 1]).is_err());
        assert!(mse(&[], &[]).is_err());
    }

    #[test]
    fn mse_ideal_fig1_predictor() {
        // p(+1|x) = q(+1|x) per pattern, 40 copies each, 12/40 flips on two
        let mut p = Vec::new();
        let mut y = Vec::new();
        for (q_pos, positives) in [(0.0, 0), (0.3, 12), (1.0, 40), (0.3, 12)] {
            for i in 0..40 {
                p.push(q_pos);
                y.push(if i < positives { 1 } else { -1 });
            }
        }
        assert_abs_diff_eq!(mse(&p, &y).unwrap(), 0.105, epsilon = 1e-15);
    }

    #[test]
    fn snapshot_json_is_exact() {
        let m = QubitPerceptron::from_weights(
            2,
            true,
            [
                vec![0.1, 1.0 / 3.0, -2.5e-17],
                vec![0.0; 3],
                vec![std::f64::consts::PI, -1.0, 7.0],
            ],
        )
        .unwrap();
        let snap = m.snapshot();
        let back = ModelSnapshot::from_json(&snap.to_json().unwrap()).unwrap();
        assert_eq!(back, snap);
        assert_eq!(back.to_model().unwrap().params(), m.params());
    }

    #[test]
    fn snapshot_rejects_wrong_length() {
        let snap = ModelSnapshot::Classical {
            dim: 2,
            bias: true,
            w: vec![1.0, 2.0],
        };
        assert!(snap.to_model().is_err());
    }
}
