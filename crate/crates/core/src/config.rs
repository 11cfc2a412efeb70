//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "code": { "generators": ["ZZI", "IZZ"] },
//!   "bath": { "dim": 2, "initial_state": "maximally_mixed" },
//!   "hamiltonian": { "terms": [
//!     { "system": "XII", "bath": [[[0,0],[0.1,0]], [[0.1,0],[0,0]]] }
//!   ] },
//!   "logical_state": [[0.6, 0], [0, 0.8]],
//!   "protocol": "group",
//!   "sweep": { "tau": [1.0], "M": [1, 2, 4], "epsilon": [0.5, "inf"] }
//! }
//! ```
//! Complex entries are `[re, im]` pairs; matrices are lists of rows.

use std::fmt;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{self, DensityMatrix};
use crate::error::Error;
use crate::linalg::{self, CMatrix, CVector};
use crate::measurement::{Protocol, Strength};
use crate::pauli::PauliOperator;
use crate::stabilizer::{HamiltonianSpec, HamiltonianTerm, Segment, StabilizerCode};

/// Problem with a config file, located by a JSON field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    fn new(path: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() || self.path == "." {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config field `{}`: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

pub type Complex = [f64; 2];

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub code: CodeConfig,
    pub bath: BathConfig,
    pub hamiltonian: HamiltonianConfig,
    pub logical_state: LogicalState,
    #[serde(default = "default_protocol")]
    pub protocol: Protocol,
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

fn default_protocol() -> Protocol {
    Protocol::Group
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeConfig {
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathConfig {
    pub dim: usize,
    #[serde(default)]
    pub initial_state: BathState,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BathState {
    #[default]
    #[serde(with = "maximally_mixed_tag")]
    MaximallyMixed,
    Matrix(Vec<Vec<Complex>>),
}

mod maximally_mixed_tag {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str("maximally_mixed")
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(), D::Error> {
        let s = String::deserialize(d)?;
        if s == "maximally_mixed" {
            Ok(())
        } else {
            Err(serde::de::Error::custom(format!("unknown bath state {s:?}")))
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    pub terms: Vec<TermConfig>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermConfig {
    pub system: String,
    pub bath: Vec<Vec<Complex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<SegmentConfig>>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentConfig {
    pub t0: f64,
    pub t1: f64,
    pub scale: f64,
}

/// A pure logical vector or a logical density matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LogicalState {
    Vector(Vec<Complex>),
    Density(Vec<Vec<Complex>>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub tau: Vec<f64>,
    #[serde(rename = "M")]
    pub cycles: Vec<u64>,
    pub epsilon: Vec<Strength>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Slack allowed when comparing simulated distances to the bound.
    #[serde(default = "default_bound_tolerance")]
    pub bound: f64,
    /// Operator-norm tolerance for Hamiltonian validation.
    #[serde(default = "default_validation_tolerance")]
    pub validation: f64,
}

fn default_bound_tolerance() -> f64 {
    1e-9
}

fn default_validation_tolerance() -> f64 {
    1e-10
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bound: default_bound_tolerance(),
            validation: default_validation_tolerance(),
        }
    }
}

/// Everything needed to run simulations, built from a validated config.
#[derive(Clone, Debug)]
pub struct Experiment {
    pub code: StabilizerCode,
    pub hamiltonian: HamiltonianSpec,
    pub initial_state: DensityMatrix,
    pub protocol: Protocol,
    pub taus: Vec<f64>,
    pub cycles: Vec<u64>,
    pub strengths: Vec<Strength>,
    pub tolerances: Tolerances,
}

fn matrix_from_rows(rows: &[Vec<Complex>], dim: usize, path: &str) -> Result<CMatrix, ConfigError> {
    if rows.len() != dim {
        return Err(ConfigError::new(
            path,
            format!("expected {dim} rows, got {}", rows.len()),
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(ConfigError::new(
                format!("{path}[{i}]"),
                format!("expected {dim} entries, got {}", row.len()),
            ));
        }
    }
    let m = CMatrix::from_fn(dim, dim, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(ConfigError::new(path, "entries must be finite"));
    }
    Ok(m)
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            ConfigError::new(path, e.into_inner())
        })
    }

    pub fn load(path: &Path) -> Result<(Self, String), ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("", format!("cannot read {}: {e}", path.display())))?;
        Ok((Self::from_json(&text)?, text))
    }

    /// Semantic validation and construction of the model objects.
    pub fn build(&self) -> Result<Experiment, ConfigError> {
        let sweep_checks: [(&str, bool); 3] = [
            ("sweep.tau", self.sweep.tau.is_empty()),
            ("sweep.M", self.sweep.cycles.is_empty()),
            ("sweep.epsilon", self.sweep.epsilon.is_empty()),
        ];
        for (path, empty) in sweep_checks {
            if empty {
                return Err(ConfigError::new(path, "grid must not be empty"));
            }
        }
        for (i, &t) in self.sweep.tau.iter().enumerate() {
            if !(t.is_finite() && t >= 0.0) {
                return Err(ConfigError::new(
                    format!("sweep.tau[{i}]"),
                    "must be finite and nonnegative",
                ));
            }
        }
        for (i, &m) in self.sweep.cycles.iter().enumerate() {
            if m == 0 {
                return Err(ConfigError::new(
                    format!("sweep.M[{i}]"),
                    "cycle count must be at least 1",
                ));
            }
        }
        for (name, v) in [
            ("tolerances.bound", self.tolerances.bound),
            ("tolerances.validation", self.tolerances.validation),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ConfigError::new(name, "must be finite and nonnegative"));
            }
        }

        let mut generators = Vec::with_capacity(self.code.generators.len());
        for (i, g) in self.code.generators.iter().enumerate() {
            let op: PauliOperator = g
                .parse()
                .map_err(|e: Error| ConfigError::new(format!("code.generators[{i}]"), e))?;
            generators.push(op);
        }
        let code = StabilizerCode::new(generators).map_err(|e| ConfigError::new("code.generators", e))?;
        let n = code.num_qubits();

        let bath_dim = self.bath.dim;
        if bath_dim == 0 {
            return Err(ConfigError::new("bath.dim", "must be positive"));
        }
        let joint = (1usize << n) * bath_dim;
        if joint > dynamics::MAX_JOINT_DIM {
            return Err(ConfigError::new(
                "bath.dim",
                format!("joint dimension {joint} exceeds {}", dynamics::MAX_JOINT_DIM),
            ));
        }
        let rho_b = match &self.bath.initial_state {
            BathState::MaximallyMixed => dynamics::maximally_mixed(bath_dim),
            BathState::Matrix(rows) => matrix_from_rows(rows, bath_dim, "bath.initial_state")?,
        };

        let mut terms = Vec::with_capacity(self.hamiltonian.terms.len());
        for (i, t) in self.hamiltonian.terms.iter().enumerate() {
            let path = format!("hamiltonian.terms[{i}]");
            let system: PauliOperator = t
                .system
                .parse()
                .map_err(|e: Error| ConfigError::new(format!("{path}.system"), e))?;
            if system.num_qubits() != n {
                return Err(ConfigError::new(
                    format!("{path}.system"),
                    format!("acts on {} qubits, code has {n}", system.num_qubits()),
                ));
            }
            let bath = matrix_from_rows(&t.bath, bath_dim, &format!("{path}.bath"))?;
            let mut term = HamiltonianTerm::new(system, bath);
            if let Some(profile) = &t.profile {
                term = term.with_profile(
                    profile
                        .iter()
                        .map(|s| Segment {
                            t0: s.t0,
                            t1: s.t1,
                            scale: s.scale,
                        })
                        .collect(),
                );
            }
            terms.push(term);
        }
        let hamiltonian =
            HamiltonianSpec::new(n, bath_dim, terms).map_err(|e| ConfigError::new("hamiltonian.terms", e))?;

        let k_dim = 1usize << code.logical_qubits();
        let rho_s = match &self.logical_state {
            LogicalState::Vector(v) => {
                if v.len() != k_dim {
                    return Err(ConfigError::new(
                        "logical_state",
                        format!("expected {k_dim} amplitudes, got {}", v.len()),
                    ));
                }
                let psi = CVector::from_iterator(k_dim, v.iter().map(|z| Complex64::new(z[0], z[1])));
                dynamics::encode_pure(&code, &psi).map_err(|e| ConfigError::new("logical_state", e))?
            }
            LogicalState::Density(rows) => {
                let m = matrix_from_rows(rows, k_dim, "logical_state")?;
                let v = dynamics::StateValidity::of(&m);
                if !v.is_valid() {
                    return Err(ConfigError::new("logical_state", "not a valid density matrix"));
                }
                dynamics::encode_mixed(&code, &m).map_err(|e| ConfigError::new("logical_state", e))?
            }
        };
        let initial_state = DensityMatrix::new(linalg::kron(&rho_s, &rho_b), 1 << n, bath_dim).map_err(|e| {
            let path = match self.bath.initial_state {
                BathState::Matrix(_) => "bath.initial_state",
                BathState::MaximallyMixed => "logical_state",
            };
            ConfigError::new(path, e)
        })?;

        Ok(Experiment {
            code,
            hamiltonian,
            initial_state,
            protocol: self.protocol,
            taus: self.sweep.tau.clone(),
            cycles: self.sweep.cycles.clone(),
            strengths: self.sweep.epsilon.clone(),
            tolerances: self.tolerances,
        })
    }
}

/// Hex SHA-256 of the raw config text.
pub fn config_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
        "code": {"generators": ["ZZI", "IZZ"]},
        "bath": {"dim": 2},
        "hamiltonian": {"terms": [
            {"system": "XII", "bath": [[[0,0],[0.1,0]],[[0.1,0],[0,0]]]}
        ]},
        "logical_state": [[1,0],[0,0]],
        "sweep": {"tau": [1.0], "M": [1, 2], "epsilon": [1.0, "inf"]}
    }"#;

    fn edit(f: impl FnOnce(&mut serde_json::Value)) -> String {
        let mut v: serde_json::Value = serde_json::from_str(BASE).unwrap();
        f(&mut v);
        v.to_string()
    }

    #[test]
    fn builds_base_config() {
        let cfg = ExperimentConfig::from_json(BASE).unwrap();
        let exp = cfg.build().unwrap();
        assert_eq!(exp.protocol, Protocol::Group);
        assert_eq!(exp.strengths, vec![Strength::Finite(1.0), Strength::Infinite]);
        assert_eq!(exp.initial_state.matrix().nrows(), 16);
    }

    #[test]
    fn schema_errors_carry_paths() {
        let bad = edit(|v| v["sweep"]["epsilon"][0] = serde_json::json!(-1.0));
        let err = ExperimentConfig::from_json(&bad).unwrap_err();
        assert_eq!(err.path, "sweep.epsilon[0]");

        let bad = edit(|v| v["bath"]["dim"] = serde_json::json!("two"));
        assert_eq!(ExperimentConfig::from_json(&bad).unwrap_err().path, "bath.dim");

        let bad = edit(|v| v["sweep"]["M"] = serde_json::json!([]));
        let err = ExperimentConfig::from_json(&bad).unwrap().build().unwrap_err();
        assert_eq!(err.path, "sweep.M");

        let bad = edit(|v| v["hamiltonian"]["terms"][0]["system"] = serde_json::json!("XQI"));
        let err = ExperimentConfig::from_json(&bad).unwrap().build().unwrap_err();
        assert_eq!(err.path, "hamiltonian.terms[0].system");

        let bad = edit(|v| v["code"]["generators"] = serde_json::json!(["ZZI", "XII"]));
        let err = ExperimentConfig::from_json(&bad).unwrap().build().unwrap_err();
        assert_eq!(err.path, "code.generators");
    }

    #[test]
    fn hash_is_stable() {
        assert_eq!(
            config_hash(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
