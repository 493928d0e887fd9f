//! Run configuration as read from JSON.

use std::path::PathBuf;

use projlab::linalg::ComplexMatrix;
use projlab::spaces::{make_projection, ProjectionSpec};
use projlab::{SemigroupExpr, SpaceDescriptor};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorSpec {
    Matrix { matrix: ComplexMatrix },
    Projection(ProjectionSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub name: String,
    #[serde(default)]
    pub params: Map<String, Value>,
}

impl CheckSpec {
    pub fn new(name: &str, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        CheckSpec { name: name.to_string(), params }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: SpaceDescriptor,
    #[serde(default)]
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub expressions: Vec<SemigroupExpr>,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_output() -> PathBuf {
    PathBuf::from("projlab-out")
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("cannot parse config: {e}")))
    }

    /// Generator matrices, in order (generator k is entry k − 1).
    pub fn build_generators(&self) -> Result<Vec<ComplexMatrix>, CliError> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let m = match g {
                    GeneratorSpec::Matrix { matrix } => matrix.clone(),
                    GeneratorSpec::Projection(spec) => make_projection(spec, &self.space)
                        .map_err(|e| CliError::Config(format!("generator {}: {e}", i + 1)))?,
                };
                if m.rows() != self.space.dim || m.cols() != self.space.dim {
                    return Err(CliError::Config(format!(
                        "generator {} is {}x{}, space has dimension {}",
                        i + 1,
                        m.rows(),
                        m.cols(),
                        self.space.dim
                    )));
                }
                Ok(m)
            })
            .collect()
    }

    /// Every expression must be valid over the configured generators.
    pub fn validate_expressions(&self) -> Result<(), CliError> {
        for (i, e) in self.expressions.iter().enumerate() {
            if let Some(v) = e.validate(self.generators.len()).first() {
                return Err(CliError::Config(format!("expression {i}: {} at {}", v.message, v.path)));
            }
        }
        Ok(())
    }
}
