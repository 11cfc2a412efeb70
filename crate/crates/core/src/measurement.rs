//! Weak stabilizer measurements as Kraus channels.
//!
//! A single weak measurement of a stabilizer element `S` with strength `ε` has
//! Kraus operators `α₊P_S + α₋P_{−S}` and `α₋P_S + α₊P_{−S}`, where
//! `P_{±S} = (𝟙 ± S)/2` and `α± = √((1 ± tanh ε)/2)`. On an operator `A_g` in
//! isotypical sector `g` it acts as multiplication by `ζ^{σ_g(S)}`, `ζ = sech ε`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pauli::PauliOperator;
use crate::stabilizer::StabilizerCode;

/// Measurement strength `ε ∈ (0, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Strength {
    Finite(f64),
    /// Projective limit.
    Infinite,
}

impl Strength {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::Domain(format!(
                "measurement strength must be positive, got {eps}"
            )));
        }
        Ok(if eps.is_infinite() {
            Strength::Infinite
        } else {
            Strength::Finite(eps)
        })
    }

    pub fn value(self) -> f64 {
        match self {
            Strength::Finite(e) => e,
            Strength::Infinite => f64::INFINITY,
        }
    }

    pub fn is_projective(self) -> bool {
        matches!(self, Strength::Infinite)
    }

    /// `ζ = sech ε`.
    pub fn zeta(self) -> f64 {
        match self {
            Strength::Finite(e) => 1.0 / e.cosh(),
            Strength::Infinite => 0.0,
        }
    }

    /// `(α₊, α₋)`, written to avoid cancellation at large `ε`.
    pub fn alphas(self) -> (f64, f64) {
        match self {
            Strength::Finite(e) => {
                let plus = 1.0 / (1.0 + (-2.0 * e).exp()).sqrt();
                let minus = 1.0 / (1.0 + (2.0 * e).exp()).sqrt();
                (plus, minus)
            }
            Strength::Infinite => (1.0, 0.0),
        }
    }

    /// `ζ^p` for a positive exponent.
    pub fn zeta_pow(self, p: f64) -> f64 {
        match self {
            Strength::Finite(_) => self.zeta().powf(p),
            Strength::Infinite => 0.0,
        }
    }

    /// `1 − ζ^p`, accurate for small `ε`.
    pub fn one_minus_zeta_pow(self, p: f64) -> f64 {
        match self {
            Strength::Finite(e) => {
                // ln ζ = −ln(1 + (cosh ε − 1)) and cosh ε − 1 = 2 sinh²(ε/2).
                let s = (0.5 * e).sinh();
                -(-p * (2.0 * s * s).ln_1p()).exp_m1()
            }
            Strength::Infinite => 1.0,
        }
    }
}

impl fmt::Display for Strength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strength::Finite(e) => write!(f, "{e}"),
            Strength::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Strength {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Strength::Finite(e) => s.serialize_f64(*e),
            Strength::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Strength {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        let eps = match Raw::deserialize(d)? {
            Raw::Number(x) => x,
            Raw::Text(t) if matches!(t.as_str(), "inf" | "infinity" | "Infinity") => f64::INFINITY,
            Raw::Text(t) => {
                return Err(serde::de::Error::custom(format!(
                    "expected a number or \"inf\", got {t:?}"
                )))
            }
        };
        Strength::new(eps).map_err(serde::de::Error::custom)
    }
}

/// Which stabilizer elements are measured each cycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// One element.
    Single,
    /// Every non-identity group element.
    Group,
    /// The generators only.
    Generators,
    /// Three-outcome POVM on one element.
    ThreeTerm,
}

/// Sequential composition of Kraus stages acting on `ℋ_S ⊗ ℋ_B`.
#[derive(Clone, Debug)]
pub struct QuantumChannel {
    dim: usize,
    stages: Vec<Vec<CMatrix>>,
    kind: ChannelKind,
    strength: Strength,
}

impl QuantumChannel {
    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn strength(&self) -> Strength {
        self.strength
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn stages(&self) -> &[Vec<CMatrix>] {
        &self.stages
    }

    /// `ρ ↦ Σ K ρ K†` stage by stage.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        linalg::check_square(rho, self.dim)?;
        let mut out = rho.clone();
        for stage in &self.stages {
            let mut next = CMatrix::zeros(self.dim, self.dim);
            for k in stage {
                next += k * &out * k.adjoint();
            }
            out = next;
        }
        Ok(out)
    }

    /// Largest entry of `Σ K†K − 𝟙` over all stages.
    pub fn completeness_error(&self) -> f64 {
        self.stages
            .iter()
            .map(|stage| {
                let mut acc = -CMatrix::identity(self.dim, self.dim);
                for k in stage {
                    acc += k.adjoint() * k;
                }
                linalg::max_abs(&acc)
            })
            .fold(0.0, f64::max)
    }

    /// Dense matrix of the channel on column-stacked operators.
    pub fn superoperator(&self) -> Result<CMatrix> {
        const LIMIT: usize = 64;
        if self.dim > LIMIT {
            return Err(Error::Capacity {
                what: "dimension for dense superoperator",
                size: self.dim,
                limit: LIMIT,
            });
        }
        let d = self.dim;
        let mut sup = CMatrix::zeros(d * d, d * d);
        for c in 0..d {
            for r in 0..d {
                let mut e = CMatrix::zeros(d, d);
                e[(r, c)] = linalg::ONE;
                let img = self.apply(&e)?;
                let col = linalg::vec_index(r, c, d);
                for cc in 0..d {
                    for rr in 0..d {
                        sup[(linalg::vec_index(rr, cc, d), col)] = img[(rr, cc)];
                    }
                }
            }
        }
        Ok(sup)
    }
}

fn projector_pair(s: &PauliOperator, bath_dim: usize) -> Result<(CMatrix, CMatrix)> {
    if !s.is_hermitian() {
        return Err(Error::Domain(format!("measured operator {s} is not Hermitian")));
    }
    let m = s.to_joint_matrix(bath_dim)?;
    let id = CMatrix::identity(m.nrows(), m.ncols());
    Ok(((&id + &m).scale(0.5), (id - m).scale(0.5)))
}

fn single_stage(s: &PauliOperator, bath_dim: usize, strength: Strength) -> Result<Vec<CMatrix>> {
    let (plus, minus) = projector_pair(s, bath_dim)?;
    let (ap, am) = strength.alphas();
    if strength.is_projective() {
        return Ok(vec![plus, minus]);
    }
    Ok(vec![plus.scale(ap) + minus.scale(am), plus.scale(am) + minus.scale(ap)])
}

/// Weak measurement of one stabilizer element.
pub fn weak_measure_single(s: &PauliOperator, bath_dim: usize, strength: Strength) -> Result<QuantumChannel> {
    let stage = single_stage(s, bath_dim, strength)?;
    Ok(QuantumChannel {
        dim: stage[0].nrows(),
        stages: vec![stage],
        kind: ChannelKind::Single,
        strength,
    })
}

/// Weak measurement of every non-identity group element, in label order.
/// The identity element contributes the identity map and is skipped.
pub fn weak_measure_group(code: &StabilizerCode, bath_dim: usize, strength: Strength) -> Result<QuantumChannel> {
    let order: Vec<usize> = (1..code.group_size()).collect();
    weak_measure_group_in_order(code, bath_dim, strength, &order)
}

/// As [`weak_measure_group`] with an explicit order of labels.
pub fn weak_measure_group_in_order(
    code: &StabilizerCode,
    bath_dim: usize,
    strength: Strength,
    order: &[usize],
) -> Result<QuantumChannel> {
    let stages = order
        .iter()
        .map(|&label| {
            if label >= code.group_size() {
                return Err(Error::NotInGroup {
                    label: format!("label {label}"),
                });
            }
            single_stage(code.element(label), bath_dim, strength)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(QuantumChannel {
        dim: code_dim(code, bath_dim),
        stages,
        kind: ChannelKind::Group,
        strength,
    })
}

/// Weak measurement of the generators only.
pub fn weak_measure_generators(code: &StabilizerCode, bath_dim: usize, strength: Strength) -> Result<QuantumChannel> {
    let stages = code
        .generators()
        .iter()
        .map(|g| single_stage(g, bath_dim, strength))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuantumChannel {
        dim: code_dim(code, bath_dim),
        stages,
        kind: ChannelKind::Generators,
        strength,
    })
}

/// POVM `{√(1−ζ)/2 (𝟙 ± S), √ζ 𝟙}`.
pub fn three_term_povm(s: &PauliOperator, bath_dim: usize, strength: Strength) -> Result<QuantumChannel> {
    let (plus, minus) = projector_pair(s, bath_dim)?;
    let zeta = strength.zeta();
    let w = (1.0 - zeta).sqrt();
    let dim = plus.nrows();
    Ok(QuantumChannel {
        dim,
        stages: vec![vec![
            plus.scale(w),
            minus.scale(w),
            CMatrix::identity(dim, dim).scale(zeta.sqrt()),
        ]],
        kind: ChannelKind::ThreeTerm,
        strength,
    })
}

/// Measurement schedule of the Zeno protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Protocol {
    /// Every non-identity element of the stabilizer group each cycle.
    Group,
    /// Only the generators each cycle.
    Generators,
}

impl Protocol {
    pub fn channel_kind(self) -> ChannelKind {
        match self {
            Protocol::Group => ChannelKind::Group,
            Protocol::Generators => ChannelKind::Generators,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::Group => "group",
            Protocol::Generators => "generators",
        }
    }
}

/// Builds the per-cycle channel for a protocol.
pub fn protocol_channel(
    code: &StabilizerCode,
    bath_dim: usize,
    strength: Strength,
    protocol: Protocol,
) -> Result<QuantumChannel> {
    match protocol {
        Protocol::Group => weak_measure_group(code, bath_dim, strength),
        Protocol::Generators => weak_measure_generators(code, bath_dim, strength),
    }
}

/// Exponent `m` such that the channel multiplies sector `g` by `ζ^m`.
pub fn damping_exponent(kind: ChannelKind, code: &StabilizerCode, g: usize, measured: Option<usize>) -> u64 {
    if g == 0 {
        return 0;
    }
    match kind {
        ChannelKind::Group => code.q(),
        ChannelKind::Generators => g.count_ones() as u64,
        ChannelKind::Single | ChannelKind::ThreeTerm => StabilizerCode::sigma_labels(g, measured.unwrap_or(0)) as u64,
    }
}

fn code_dim(code: &StabilizerCode, bath_dim: usize) -> usize {
    (1usize << code.num_qubits()) * bath_dim
}
