//! Experiment configuration documents.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;
use manybody::Boundary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Ed,
    Lanczos,
    Qmc,
    Dmrg,
    Circuit,
    Coldatoms,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ed => "ed",
            Method::Lanczos => "lanczos",
            Method::Qmc => "qmc",
            Method::Dmrg => "dmrg",
            Method::Circuit => "circuit",
            Method::Coldatoms => "coldatoms",
        }
    }
}

/// A parameter scanned over a list of values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: String,
    pub values: Vec<f64>,
}

/// Top-level document read from `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub method: Method,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate_shape()?;
        Ok(cfg)
    }

    fn validate_shape(&self) -> Result<(), CliError> {
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return Err(CliError::config(
                    Some("values"),
                    "sweep needs at least one value",
                ));
            }
            if let Some(v) = s.values.iter().find(|v| !v.is_finite()) {
                return Err(CliError::config(
                    Some("values"),
                    format!("non-finite sweep value {v}"),
                ));
            }
            if self.method == Method::Circuit {
                return Err(CliError::config(
                    Some("sweep"),
                    "the circuit method does not take a sweep",
                ));
            }
        }
        Ok(())
    }

    /// Sorted-key compact JSON; the basis of the config digest.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        serde_json::to_string(&value).expect("value serializes")
    }

    /// Parameter map for one sweep point.
    pub fn params_at(&self, value: Option<f64>) -> Map<String, Value> {
        let mut params = self.params.clone();
        if let (Some(s), Some(v)) = (&self.sweep, value) {
            params.insert(s.parameter.clone(), sweep_value(v));
        }
        params
    }
}

/// Integral values become JSON integers so count-valued keys accept them.
fn sweep_value(v: f64) -> Value {
    if v.fract() == 0.0 && v.abs() < 9.0e15 {
        Value::from(v as i64)
    } else {
        Value::from(v)
    }
}

pub fn parse_params<T: serde::de::DeserializeOwned>(
    params: &Map<String, Value>,
) -> Result<T, CliError> {
    Ok(serde_json::from_value(Value::Object(params.clone()))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryKind {
    #[default]
    Open,
    Periodic,
}

impl From<BoundaryKind> for Boundary {
    fn from(b: BoundaryKind) -> Self {
        match b {
            BoundaryKind::Open => Boundary::Open,
            BoundaryKind::Periodic => Boundary::Periodic,
        }
    }
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_max_iterations() -> usize {
    10_000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdParams {
    pub n: usize,
    pub g: f64,
    #[serde(default)]
    pub boundary: BoundaryKind,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanczosParams {
    pub n: usize,
    pub g: f64,
    #[serde(default)]
    pub boundary: BoundaryKind,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn periodic() -> BoundaryKind {
    BoundaryKind::Periodic
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum QmcParams {
    /// Chain mapped onto an `n_x × n_y` classical lattice.
    Tfim {
        n_x: usize,
        n_y: usize,
        g: f64,
        beta: f64,
        sweeps: usize,
        #[serde(default = "periodic")]
        boundary: BoundaryKind,
    },
    /// Isotropic classical Ising model at inverse temperature `beta`.
    Classical {
        n_x: usize,
        #[serde(default)]
        n_y: Option<usize>,
        beta: f64,
        sweeps: usize,
        #[serde(default)]
        thermalization: Option<usize>,
    },
}

fn default_finite_sweeps() -> usize {
    3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DmrgParams {
    pub n: usize,
    pub g: f64,
    pub d_max: usize,
    #[serde(default = "default_finite_sweeps")]
    pub sweeps: usize,
    #[serde(default = "default_tolerance")]
    pub energy_tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinCircuit {
    Bell,
    Toffoli,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitParams {
    /// Initial basis state, qubit 0 written first. Defaults to all zeros.
    #[serde(default)]
    pub initial: Option<String>,
    #[serde(default)]
    pub builtin: Option<BuiltinCircuit>,
    #[serde(default)]
    pub circuit_file: Option<String>,
}

fn unit() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ColdAtomsParams {
    Helium {},
    BoseHubbard {
        n_star: u32,
        zj_over_u: f64,
        #[serde(default)]
        mu_over_u: Option<f64>,
    },
    Lattice {
        v0_over_er: f64,
        #[serde(default = "unit")]
        recoil_er: f64,
        #[serde(default = "unit")]
        k_l: f64,
        a_s: f64,
    },
}
