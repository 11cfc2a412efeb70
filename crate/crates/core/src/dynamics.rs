//! Dense propagation of system ⊗ bath states and the measurement protocols.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, HermitianEigen};
use crate::measurement::{protocol_channel, Protocol, Strength};
use crate::stabilizer::{self, HamiltonianSpec, StabilizerCode, DEFAULT_TOLERANCE};

/// Largest joint dimension handled by dense propagation.
pub const MAX_JOINT_DIM: usize = 4096;

/// A density matrix on `ℋ_S ⊗ ℋ_B` with the bath as the fast index.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    matrix: CMatrix,
    system_dim: usize,
    bath_dim: usize,
}

/// Deviations from a valid density matrix.
#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct StateValidity {
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl StateValidity {
    pub fn of(m: &CMatrix) -> Self {
        StateValidity {
            hermiticity_error: linalg::hermiticity_error(m),
            trace_error: (linalg::trace(m) - linalg::ONE).norm(),
            min_eigenvalue: linalg::min_eigenvalue(m),
        }
    }

    pub fn is_valid(&self) -> bool {
        self.hermiticity_error <= 1e-12 && self.trace_error <= 1e-12 && self.min_eigenvalue >= -1e-10
    }

    fn worst(self, other: StateValidity) -> StateValidity {
        StateValidity {
            hermiticity_error: self.hermiticity_error.max(other.hermiticity_error),
            trace_error: self.trace_error.max(other.trace_error),
            min_eigenvalue: self.min_eigenvalue.min(other.min_eigenvalue),
        }
    }
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, system_dim: usize, bath_dim: usize) -> Result<Self> {
        linalg::check_square(&matrix, system_dim * bath_dim)?;
        let v = StateValidity::of(&matrix);
        if !v.is_valid() {
            return Err(Error::Domain(format!(
                "not a density matrix (hermiticity {:e}, trace {:e}, min eigenvalue {:e})",
                v.hermiticity_error, v.trace_error, v.min_eigenvalue
            )));
        }
        Ok(DensityMatrix {
            matrix,
            system_dim,
            bath_dim,
        })
    }

    /// `ρ_S ⊗ ρ_B`.
    pub fn product(system: &CMatrix, bath: &CMatrix) -> Result<Self> {
        Self::new(linalg::kron(system, bath), system.nrows(), bath.nrows())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_dim
    }

    pub fn reduced_system(&self) -> CMatrix {
        linalg::partial_trace_bath(&self.matrix, self.system_dim, self.bath_dim)
            .expect("dimensions checked at construction")
    }

    pub fn validity(&self) -> StateValidity {
        StateValidity::of(&self.matrix)
    }
}

/// Maximally mixed bath state `𝟙/d`.
pub fn maximally_mixed(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim).unscale(dim as f64)
}

/// Encodes a normalised logical vector through the code's basis and returns `|ψ⟩⟨ψ|` on `ℋ_S`.
pub fn encode_pure(code: &StabilizerCode, logical: &CVector) -> Result<CMatrix> {
    let basis = code.codespace_basis()?;
    if logical.len() != basis.ncols() {
        return Err(Error::Dimension {
            expected: basis.ncols(),
            found: logical.len(),
        });
    }
    let norm = logical.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("logical state has norm {norm}")));
    }
    let psi = basis * logical;
    Ok(&psi * psi.adjoint())
}

/// `ℰ(ρ) = B ρ_L B†` for a logical density matrix `ρ_L`.
pub fn encode_mixed(code: &StabilizerCode, logical: &CMatrix) -> Result<CMatrix> {
    let basis = code.codespace_basis()?;
    linalg::check_square(logical, basis.ncols())?;
    Ok(&basis * logical * basis.adjoint())
}

/// Piecewise-constant propagator with cached eigendecompositions.
pub struct Propagator {
    spec: HamiltonianSpec,
    eigen: HashMap<usize, HermitianEigen>,
    cuts: Vec<f64>,
}

impl Propagator {
    pub fn new(spec: &HamiltonianSpec) -> Result<Self> {
        if spec.dim() > MAX_JOINT_DIM {
            return Err(Error::Capacity {
                what: "joint dimension",
                size: spec.dim(),
                limit: MAX_JOINT_DIM,
            });
        }
        Ok(Propagator {
            spec: spec.clone(),
            eigen: HashMap::new(),
            cuts: spec.breakpoints(),
        })
    }

    /// Index of the constant region containing `t` (regions are half-open on the right).
    fn region_index(&self, t: f64) -> usize {
        self.cuts.partition_point(|&c| c <= t)
    }

    fn eigen_for(&mut self, idx: usize) -> Result<&HermitianEigen> {
        if !self.eigen.contains_key(&idx) {
            let lo = if idx == 0 {
                f64::NEG_INFINITY
            } else {
                self.cuts[idx - 1]
            };
            let hi = self.cuts.get(idx).copied().unwrap_or(f64::INFINITY);
            let h = self.spec.matrix_on((lo, hi))?;
            let herm = linalg::hermiticity_error(&h);
            if herm > 1e-10 {
                return Err(Error::Model(format!(
                    "Hamiltonian is not Hermitian (deviation {herm:e})"
                )));
            }
            self.eigen.insert(idx, linalg::eigh(&h));
        }
        Ok(&self.eigen[&idx])
    }

    /// True when no profile boundary lies strictly inside `(t0, t1)`.
    pub fn is_constant_on(&self, t0: f64, t1: f64) -> bool {
        !self.cuts.iter().any(|&c| c > t0 && c < t1)
    }

    /// `U(t1, t0)`, the time-ordered product of segment exponentials.
    pub fn unitary(&mut self, t0: f64, t1: f64) -> Result<CMatrix> {
        if t1 < t0 {
            return Err(Error::Domain(format!("propagation backwards in time ({t0} → {t1})")));
        }
        let dim = self.spec.dim();
        let mut u = CMatrix::identity(dim, dim);
        let cuts: Vec<f64> = self.cuts.iter().copied().filter(|&c| c > t0 && c < t1).collect();
        let mut start = t0;
        for end in cuts.into_iter().chain(std::iter::once(t1)) {
            if end > start {
                let idx = self.region_index(start);
                u = self.eigen_for(idx)?.evolution(end - start) * u;
            }
            start = end;
        }
        Ok(u)
    }
}

/// `ρ ↦ U ρ U†` over `[t0, t1]`.
pub fn propagate(h: &HamiltonianSpec, t0: f64, t1: f64, rho: &DensityMatrix) -> Result<DensityMatrix> {
    linalg::check_square(rho.matrix(), h.dim())?;
    let u = Propagator::new(h)?.unitary(t0, t1)?;
    Ok(DensityMatrix {
        matrix: &u * rho.matrix() * u.adjoint(),
        system_dim: rho.system_dim,
        bath_dim: rho.bath_dim,
    })
}

/// `½‖ρ₁ − ρ₂‖₁`.
pub fn trace_distance(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    linalg::check_square(b, a.nrows())?;
    Ok(0.5 * linalg::trace_norm(&(a - b)))
}

/// Reduced system state after evolving under the identity-sector Hamiltonian only.
pub fn ideal_reduced_state(
    code: &StabilizerCode,
    h: &HamiltonianSpec,
    rho0: &DensityMatrix,
    tau: f64,
) -> Result<CMatrix> {
    let ideal = stabilizer::identity_sector(code, h)?;
    Ok(propagate(&ideal, 0.0, tau, rho0)?.reduced_system())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProtocolParams {
    pub tau: f64,
    #[serde(rename = "M")]
    pub cycles: u64,
    pub epsilon: Strength,
    pub variant: Protocol,
}

#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub params: ProtocolParams,
    pub final_state: DensityMatrix,
    pub reduced_state: CMatrix,
    pub ideal_reduced_state: CMatrix,
    /// `D = ½‖ϱ_S(τ) − ϱ⁰_S(τ)‖₁`.
    pub distance: f64,
    /// `D` after each measurement round.
    pub distance_trace: Vec<f64>,
    /// Worst state validity seen after any cycle.
    pub validity: StateValidity,
    pub kraus_completeness_error: f64,
    pub j0: f64,
    pub j1: f64,
    /// Whether the reduced initial state is pure, i.e. inside the bound's hypothesis.
    pub pure_initial_state: bool,
}

/// JSON view of a [`ProtocolResult`]; matrices as rows of `[re, im]`.
#[derive(Serialize)]
pub struct ProtocolRecord<'a> {
    #[serde(flatten)]
    pub params: &'a ProtocolParams,
    #[serde(rename = "D")]
    pub distance: f64,
    pub distance_trace: &'a [f64],
    #[serde(rename = "J0")]
    pub j0: f64,
    #[serde(rename = "J1")]
    pub j1: f64,
    pub pure_initial_state: bool,
    pub validity: StateValidity,
    pub reduced_state: Vec<Vec<[f64; 2]>>,
    pub ideal_reduced_state: Vec<Vec<[f64; 2]>>,
}

pub fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

impl ProtocolResult {
    pub fn record(&self) -> ProtocolRecord<'_> {
        ProtocolRecord {
            params: &self.params,
            distance: self.distance,
            distance_trace: &self.distance_trace,
            j0: self.j0,
            j1: self.j1,
            pure_initial_state: self.pure_initial_state,
            validity: self.validity,
            reduced_state: matrix_rows(&self.reduced_state),
            ideal_reduced_state: matrix_rows(&self.ideal_reduced_state),
        }
    }
}

/// Applies `(𝒫_ε 𝒰(τ/M))^M` and compares with the ideal identity-sector evolution.
pub fn run_protocol(
    code: &StabilizerCode,
    h: &HamiltonianSpec,
    rho0: &DensityMatrix,
    tau: f64,
    cycles: u64,
    strength: Strength,
    variant: Protocol,
) -> Result<ProtocolResult> {
    if cycles < 1 {
        return Err(Error::Domain("cycle count M must be at least 1".into()));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::Domain(format!(
            "total time must be finite and nonnegative, got {tau}"
        )));
    }
    let bath = h.bath_dim();
    if rho0.bath_dim() != bath || rho0.system_dim() != h.system_dim() {
        return Err(Error::Dimension {
            expected: h.dim(),
            found: rho0.matrix().nrows(),
        });
    }
    let decomposition = stabilizer::decompose_over(code, h, 0.0, tau, DEFAULT_TOLERANCE)?;

    let code_proj = code.codespace_projector(bath)?;
    let residual = linalg::max_abs(&(&code_proj * rho0.matrix() * &code_proj - rho0.matrix()));
    if residual > 1e-10 {
        return Err(Error::Precondition {
            what: "initial state is not supported on the codespace".into(),
            residual,
        });
    }
    let reduced0 = rho0.reduced_system();
    let purity = linalg::hs_inner(&reduced0, &reduced0).re;

    let channel = protocol_channel(code, bath, strength, variant)?;
    let ideal_spec = stabilizer::identity_sector(code, h)?;
    let mut actual = Propagator::new(h)?;
    let mut ideal = Propagator::new(&ideal_spec)?;
    let dt = tau / cycles as f64;
    let constant = actual.is_constant_on(0.0, tau);
    let (u_const, u0_const) = if constant {
        (Some(actual.unitary(0.0, dt)?), Some(ideal.unitary(0.0, dt)?))
    } else {
        (None, None)
    };

    let mut rho = rho0.matrix().clone();
    let mut rho_ideal = rho0.matrix().clone();
    let mut trace = Vec::with_capacity(cycles as usize);
    let mut validity = StateValidity::of(&rho);
    for j in 0..cycles {
        let (t0, t1) = (j as f64 * dt, (j + 1) as f64 * dt);
        let (u, u0) = match (&u_const, &u0_const) {
            (Some(u), Some(u0)) => (u.clone(), u0.clone()),
            _ => (actual.unitary(t0, t1)?, ideal.unitary(t0, t1)?),
        };
        rho = channel.apply(&(&u * &rho * u.adjoint()))?;
        // Keep the numerically accumulated state exactly Hermitian.
        rho = (&rho + rho.adjoint()).scale(0.5);
        rho_ideal = &u0 * &rho_ideal * u0.adjoint();
        validity = validity.worst(StateValidity::of(&rho));
        let red = linalg::partial_trace_bath(&rho, h.system_dim(), bath)?;
        let red0 = linalg::partial_trace_bath(&rho_ideal, h.system_dim(), bath)?;
        trace.push(trace_distance(&red, &red0)?);
    }
    let reduced_state = linalg::partial_trace_bath(&rho, h.system_dim(), bath)?;
    let ideal_reduced_state = linalg::partial_trace_bath(&rho_ideal, h.system_dim(), bath)?;
    Ok(ProtocolResult {
        params: ProtocolParams {
            tau,
            cycles,
            epsilon: strength,
            variant,
        },
        final_state: DensityMatrix {
            matrix: rho,
            system_dim: h.system_dim(),
            bath_dim: bath,
        },
        distance: *trace.last().expect("at least one cycle"),
        reduced_state,
        ideal_reduced_state,
        distance_trace: trace,
        validity,
        kraus_completeness_error: channel.completeness_error(),
        j0: decomposition.j0,
        j1: decomposition.j1,
        pure_initial_state: (purity - 1.0).abs() < 1e-10,
    })
}
