use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qm::DEFAULT_EIGEN_FLOOR;

use super::{
    ClassicalPerceptron, EntangledPerceptron, GradientMethod, Model, QubitPerceptron,
    DEFAULT_INIT_SCALE,
};

/// Everything a factory needs to build an untrained model.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub input_dim: usize,
    pub bias: bool,
    /// Only used by models with random initialisation.
    pub seed: u64,
    pub init_scale: f64,
    pub eigen_floor: f64,
    pub gradient: GradientMethod,
}

impl ModelSpec {
    pub fn new(input_dim: usize, bias: bool) -> Self {
        Self {
            input_dim,
            bias,
            seed: 0,
            init_scale: DEFAULT_INIT_SCALE,
            eigen_floor: DEFAULT_EIGEN_FLOOR,
            gradient: GradientMethod::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

pub type ModelFactory = Box<dyn Fn(&ModelSpec) -> Result<Box<dyn Model>> + Send + Sync>;

/// Name-keyed table of model constructors.
pub struct ModelRegistry {
    factories: BTreeMap<String, ModelFactory>,
}

impl ModelRegistry {
    pub fn empty() -> Self {
        Self {
            factories: BTreeMap::new(),
        }
    }

    /// Replaces any factory previously registered under `name`.
    pub fn register(&mut self, name: impl Into<String>, factory: ModelFactory) {
        self.factories.insert(name.into(), factory);
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.factories.keys().map(String::as_str)
    }

    pub fn create(&self, name: &str, spec: &ModelSpec) -> Result<Box<dyn Model>> {
        let factory = self.factories.get(name).ok_or_else(|| Error::UnknownName {
            kind: "model",
            name: name.to_string(),
        })?;
        factory(spec)
    }
}

impl Default for ModelRegistry {
    /// `classical` and `qubit` start from zero weights (their losses are
    /// convex); `entangled` starts from seeded Gaussian weights.
    fn default() -> Self {
        let mut reg = Self::empty();
        reg.register(
            "classical",
            Box::new(|s| Ok(Box::new(ClassicalPerceptron::zeros(s.input_dim, s.bias)))),
        );
        reg.register(
            "qubit",
            Box::new(|s| Ok(Box::new(QubitPerceptron::zeros(s.input_dim, s.bias)))),
        );
        reg.register(
            "entangled",
            Box::new(|s| {
                let m = EntangledPerceptron::random(s.input_dim, s.bias, s.init_scale, s.seed)?
                    .with_eigen_floor(s.eigen_floor)?
                    .with_gradient(s.gradient);
                Ok(Box::new(m))
            }),
        );
        reg
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ModelKind;

    #[test]
    fn default_registry_builds_every_family() {
        let reg = ModelRegistry::default();
        assert_eq!(
            reg.names().collect::<Vec<_>>(),
            ["classical", "entangled", "qubit"]
        );
        let spec = ModelSpec::new(2, true).with_seed(5);
        assert_eq!(reg.create("classical", &spec).unwrap().num_params(), 3);
        assert_eq!(reg.create("qubit", &spec).unwrap().num_params(), 9);
        let ent = reg.create("entangled", &spec).unwrap();
        assert_eq!(ent.kind(), ModelKind::Entangled);
        assert_eq!(ent.num_params(), 24);
        // seeded
        assert_eq!(
            reg.create("entangled", &spec).unwrap().params(),
            ent.params()
        );
        assert!(matches!(
            reg.create("perceptron", &spec),
            Err(Error::UnknownName { .. })
        ));
    }
}
