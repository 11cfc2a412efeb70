//! Stabilizer codes, their isotypical structure, and Hamiltonian splitting.
//!
//! Group elements are addressed by a label `b ∈ {0,1}^Q̄` packed into a `usize`,
//! bit `j` selecting generator `j`: `B(b) = ∏_j S̄_j^{b_j}`. With that packing the
//! character `σ_g(S)` is the parity of `label(g) & label(S)`.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector};
use crate::pauli::PauliOperator;

/// Largest generator count for which the full group is enumerated.
pub const MAX_GENERATORS: usize = 16;
/// Largest generator count for dense projector application.
pub const MAX_DENSE_GENERATORS: usize = 10;
/// Default absolute tolerance for operator-norm validation.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    generators: Vec<PauliOperator>,
    group: Vec<PauliOperator>,
    index: HashMap<PauliOperator, usize>,
    /// Symplectic bits (ignoring phase) to label.
    support_index: HashMap<(Vec<bool>, Vec<bool>), usize>,
}

impl StabilizerCode {
    /// Validates a generator list and enumerates the group it generates.
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Domain("a code needs at least one generator".into()))?;
        let n = first.num_qubits();
        if generators.len() > MAX_GENERATORS {
            return Err(Error::Capacity {
                what: "generator count",
                size: generators.len(),
                limit: MAX_GENERATORS,
            });
        }
        for g in &generators {
            if g.num_qubits() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: g.num_qubits(),
                });
            }
            if !g.is_hermitian() {
                return Err(Error::InvalidGenerator {
                    label: g.to_string(),
                    reason: "phase must be +1 or -1",
                });
            }
            if g.is_identity_up_to_phase() {
                return Err(Error::InvalidGenerator {
                    label: g.to_string(),
                    reason: "identity is not a valid generator",
                });
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::NonCommuting {
                        first: a.to_string(),
                        second: b.to_string(),
                    });
                }
            }
        }
        let mut rows: Vec<Vec<bool>> = Vec::new();
        for (i, g) in generators.iter().enumerate() {
            rows.push(g.symplectic_row());
            if gf2_rank(&rows) < rows.len() {
                return Err(Error::DependentGenerator {
                    index: i,
                    label: g.to_string(),
                });
            }
        }

        let size = 1usize << generators.len();
        let mut group = Vec::with_capacity(size);
        group.push(PauliOperator::identity(n));
        for label in 1..size {
            // Peel the highest generator off an already-built smaller label.
            let top = usize::BITS - 1 - label.leading_zeros();
            let rest = label & !(1 << top);
            let elem = group[rest].multiply(&generators[top as usize])?;
            if elem.is_identity_up_to_phase() {
                return Err(Error::MinusIdentity {
                    label: elem.to_string(),
                });
            }
            group.push(elem);
        }
        let index = group.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let support_index = group
            .iter()
            .enumerate()
            .map(|(i, p)| ((p.x_bits().to_vec(), p.z_bits().to_vec()), i))
            .collect();
        Ok(StabilizerCode {
            generators,
            group,
            index,
            support_index,
        })
    }

    /// Parses generator labels and builds the code.
    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let gens = labels.iter().map(|s| s.as_ref().parse()).collect::<Result<Vec<_>>>()?;
        Self::new(gens)
    }

    pub fn num_qubits(&self) -> usize {
        self.generators[0].num_qubits()
    }

    /// Number of generators `Q̄ = n − k`.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn logical_qubits(&self) -> usize {
        self.num_qubits() - self.num_generators()
    }

    /// `|𝐒| = 2^Q̄`.
    pub fn group_size(&self) -> usize {
        self.group.len()
    }

    /// `Q = |𝐒| − 1`.
    pub fn big_q(&self) -> u64 {
        self.group.len() as u64 - 1
    }

    /// `q = |𝐒| / 2`.
    pub fn q(&self) -> u64 {
        self.group.len() as u64 / 2
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn elements(&self) -> &[PauliOperator] {
        &self.group
    }

    pub fn element(&self, label: usize) -> &PauliOperator {
        &self.group[label]
    }

    /// Label of a group element, `B⁻¹(p)`.
    pub fn label_of(&self, p: &PauliOperator) -> Result<usize> {
        self.index
            .get(p)
            .copied()
            .ok_or_else(|| Error::NotInGroup { label: p.to_string() })
    }

    /// Label of the element with the same support as `p`, ignoring phase.
    pub fn label_up_to_phase(&self, p: &PauliOperator) -> Option<usize> {
        self.support_index
            .get(&(p.x_bits().to_vec(), p.z_bits().to_vec()))
            .copied()
    }

    /// `σ_g(S)` on labels.
    pub fn sigma_labels(g: usize, s: usize) -> u8 {
        ((g & s).count_ones() % 2) as u8
    }

    /// `σ_g(S) = ⟨B⁻¹(S), B⁻¹(g)⟩ mod 2`.
    pub fn sigma(&self, g: &PauliOperator, s: &PauliOperator) -> Result<u8> {
        Ok(Self::sigma_labels(self.label_of(g)?, self.label_of(s)?))
    }

    /// Label of the syndrome sector `g` whose characters match the commutation
    /// pattern of `p` with the generators.
    pub fn syndrome_of(&self, p: &PauliOperator) -> Result<usize> {
        let mut label = 0;
        for (j, g) in self.generators.iter().enumerate() {
            if !g.commutes(p)? {
                label |= 1 << j;
            }
        }
        Ok(label)
    }

    fn check_dense(&self) -> Result<()> {
        if self.num_generators() > MAX_DENSE_GENERATORS {
            return Err(Error::Capacity {
                what: "generator count for dense projectors",
                size: self.num_generators(),
                limit: MAX_DENSE_GENERATORS,
            });
        }
        Ok(())
    }

    fn joint_dim(&self, bath_dim: usize) -> usize {
        (1usize << self.num_qubits()) * bath_dim
    }

    /// `∏_j (𝟙 + (−1)^{σ_g(S̄_j)} S̄_j)/2 ⊗ 𝟙_B`, the projector onto `V_g`.
    pub fn syndrome_projector(&self, g: usize, bath_dim: usize) -> Result<CMatrix> {
        let dim = self.joint_dim(bath_dim);
        let mut proj = CMatrix::identity(dim, dim);
        for (j, gen) in self.generators.iter().enumerate() {
            let sign = if (g >> j) & 1 == 1 { -0.5 } else { 0.5 };
            let factor = CMatrix::identity(dim, dim).scale(0.5) + gen.to_joint_matrix(bath_dim)?.scale(sign);
            proj = factor * proj;
        }
        Ok(proj)
    }

    pub fn codespace_projector(&self, bath_dim: usize) -> Result<CMatrix> {
        self.syndrome_projector(0, bath_dim)
    }

    /// Orthonormal codespace basis as the columns of a `2ⁿ × 2ᵏ` matrix.
    ///
    /// Computational basis states are projected onto the codespace in
    /// lexicographic order and kept when linearly independent of those already
    /// accepted (Gram–Schmidt).
    pub fn codespace_basis(&self) -> Result<CMatrix> {
        let proj = self.codespace_projector(1)?;
        let dim = proj.nrows();
        let want = 1usize << self.logical_qubits();
        let mut basis: Vec<CVector> = Vec::with_capacity(want);
        for j in 0..dim {
            if basis.len() == want {
                break;
            }
            let mut v: CVector = proj.column(j).into_owned();
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
            let norm = v.norm();
            if norm > 1e-8 {
                basis.push(v.unscale(norm));
            }
        }
        if basis.len() != want {
            return Err(Error::Numerical(format!(
                "found {} codespace vectors, expected {want}",
                basis.len()
            )));
        }
        Ok(CMatrix::from_columns(&basis))
    }

    /// `P̂_g(A) = |𝐒|⁻¹ Σ_S (−1)^{σ_g(S)} S A S` with `S` acting as `S ⊗ 𝟙_B`.
    pub fn apply_isotypical_projector(&self, g: usize, a: &CMatrix, bath_dim: usize) -> Result<CMatrix> {
        self.check_dense()?;
        linalg::check_square(a, self.joint_dim(bath_dim))?;
        if g >= self.group.len() {
            return Err(Error::NotInGroup {
                label: format!("label {g}"),
            });
        }
        let mut acc = CMatrix::zeros(a.nrows(), a.ncols());
        for (s, elem) in self.group.iter().enumerate() {
            let conj = elem.conjugate(a, bath_dim)?;
            if Self::sigma_labels(g, s) == 1 {
                acc -= conj;
            } else {
                acc += conj;
            }
        }
        Ok(acc.unscale(self.group.len() as f64))
    }

    /// All components `A_g = P̂_g(A)`, indexed by label, via a Walsh–Hadamard
    /// transform over the conjugates `S A S`.
    pub fn isotypical_components(&self, a: &CMatrix, bath_dim: usize) -> Result<Vec<CMatrix>> {
        self.check_dense()?;
        linalg::check_square(a, self.joint_dim(bath_dim))?;
        let mut parts: Vec<CMatrix> = self
            .group
            .iter()
            .map(|s| s.conjugate(a, bath_dim))
            .collect::<Result<_>>()?;
        let size = parts.len();
        let mut half = 1;
        while half < size {
            for block in (0..size).step_by(2 * half) {
                for i in block..block + half {
                    let lo = parts[i].clone();
                    let hi = parts[i + half].clone();
                    parts[i] = &lo + &hi;
                    parts[i + half] = lo - hi;
                }
            }
            half *= 2;
        }
        let scale = size as f64;
        Ok(parts.into_iter().map(|m| m.unscale(scale)).collect())
    }

    /// Computes `a_g` and `b_g` numerically and records the closed-form values
    /// `2ᵏ·dim(ℋ_B)` and `2^{2k+Q̄}·dim(ℋ_B)²` beside them.
    pub fn verify_isotypical_dimensions(&self, bath_dim: usize) -> Result<IsotypicalDecomposition> {
        self.check_dense()?;
        let dim = self.joint_dim(bath_dim);
        if dim > 64 {
            return Err(Error::Capacity {
                what: "joint dimension for superoperator ranks",
                size: dim,
                limit: 64,
            });
        }
        let k = self.logical_qubits() as u32;
        let qbar = self.num_generators() as u32;
        let mut state_dims = Vec::with_capacity(self.group.len());
        let mut operator_dims = Vec::with_capacity(self.group.len());
        for g in 0..self.group.len() {
            let proj = self.syndrome_projector(g, bath_dim)?;
            state_dims.push(linalg::rank(&proj, 1e-9));
            operator_dims.push(self.superoperator_rank(g, bath_dim)?);
        }
        Ok(IsotypicalDecomposition {
            bath_dim,
            state_dims,
            operator_dims,
            expected_state_dim: (1usize << k) * bath_dim,
            expected_operator_dim: (1usize << (2 * k + qbar)) * bath_dim * bath_dim,
            total_dim: dim,
        })
    }

    fn superoperator_rank(&self, g: usize, bath_dim: usize) -> Result<usize> {
        let dim = self.joint_dim(bath_dim);
        if dim <= 16 {
            let mut sup = CMatrix::zeros(dim * dim, dim * dim);
            for c in 0..dim {
                for r in 0..dim {
                    let mut e = CMatrix::zeros(dim, dim);
                    e[(r, c)] = linalg::ONE;
                    let img = self.apply_isotypical_projector(g, &e, bath_dim)?;
                    let col = linalg::vec_index(r, c, dim);
                    for cc in 0..dim {
                        for rr in 0..dim {
                            sup[(linalg::vec_index(rr, cc, dim), col)] = img[(rr, cc)];
                        }
                    }
                }
            }
            Ok(linalg::rank(&sup, 1e-9))
        } else {
            // Orthogonal projector: rank equals trace.
            let mut tr = 0.0;
            for c in 0..dim {
                for r in 0..dim {
                    let mut e = CMatrix::zeros(dim, dim);
                    e[(r, c)] = linalg::ONE;
                    tr += self.apply_isotypical_projector(g, &e, bath_dim)?[(r, c)].re;
                }
            }
            Ok(tr.round() as usize)
        }
    }
}

/// Rank over GF(2) of a set of bit rows.
pub fn gf2_rank(rows: &[Vec<bool>]) -> usize {
    let mut m: Vec<Vec<bool>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c]) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in 0..m.len() {
            if r != rank && m[r][c] {
                let (src, dst) = if r < rank {
                    let (a, b) = m.split_at_mut(rank);
                    (&b[0], &mut a[r])
                } else {
                    let (a, b) = m.split_at_mut(r);
                    (&a[rank], &mut b[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    *d ^= *s;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug)]
pub struct IsotypicalDecomposition {
    pub bath_dim: usize,
    /// `a_g` measured as projector ranks, indexed by label.
    pub state_dims: Vec<usize>,
    /// `b_g` measured as superoperator ranks, indexed by label.
    pub operator_dims: Vec<usize>,
    pub expected_state_dim: usize,
    pub expected_operator_dim: usize,
    pub total_dim: usize,
}

impl IsotypicalDecomposition {
    pub fn matches_closed_forms(&self) -> bool {
        self.state_dims.iter().all(|&a| a == self.expected_state_dim)
            && self.operator_dims.iter().all(|&b| b == self.expected_operator_dim)
            && self.state_dims.iter().sum::<usize>() == self.total_dim
    }
}

/// Piecewise-constant multiplier `scale` on `[t0, t1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub t0: f64,
    pub t1: f64,
    pub scale: f64,
}

/// One term `P ⊗ B`, optionally switched by a piecewise-constant profile.
/// Without a profile the term is always on; with one it is zero outside the segments.
#[derive(Clone, Debug)]
pub struct HamiltonianTerm {
    pub system: PauliOperator,
    pub bath: CMatrix,
    pub profile: Option<Vec<Segment>>,
}

impl HamiltonianTerm {
    pub fn new(system: PauliOperator, bath: CMatrix) -> Self {
        HamiltonianTerm {
            system,
            bath,
            profile: None,
        }
    }

    pub fn with_profile(mut self, profile: Vec<Segment>) -> Self {
        self.profile = Some(profile);
        self
    }

    pub fn scale_at(&self, t: f64) -> f64 {
        match &self.profile {
            None => 1.0,
            Some(segs) => segs.iter().find(|s| s.t0 <= t && t < s.t1).map_or(0.0, |s| s.scale),
        }
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        Ok(linalg::kron(&self.system.to_matrix()?, &self.bath))
    }
}

/// `H(t) = Σ_terms scale(t) · P ⊗ B` on `ℋ_S ⊗ ℋ_B`.
#[derive(Clone, Debug)]
pub struct HamiltonianSpec {
    num_qubits: usize,
    bath_dim: usize,
    terms: Vec<HamiltonianTerm>,
}

impl HamiltonianSpec {
    pub fn new(num_qubits: usize, bath_dim: usize, terms: Vec<HamiltonianTerm>) -> Result<Self> {
        if bath_dim == 0 {
            return Err(Error::Domain("bath dimension must be positive".into()));
        }
        for (i, term) in terms.iter().enumerate() {
            if term.system.num_qubits() != num_qubits {
                return Err(Error::Dimension {
                    expected: num_qubits,
                    found: term.system.num_qubits(),
                });
            }
            linalg::check_square(&term.bath, bath_dim)?;
            if !term.system.is_hermitian() {
                return Err(Error::Model(format!(
                    "term {i}: system operator {} is not Hermitian",
                    term.system
                )));
            }
            let herm = linalg::hermiticity_error(&term.bath);
            if herm > 1e-12 || term.bath.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Model(format!(
                    "term {i}: bath operator is not Hermitian (deviation {herm:e})"
                )));
            }
            if let Some(segs) = &term.profile {
                let mut sorted = segs.clone();
                sorted.sort_by(|a, b| a.t0.total_cmp(&b.t0));
                for s in &sorted {
                    if !(s.t0.is_finite() && s.t1.is_finite() && s.scale.is_finite()) || s.t1 <= s.t0 {
                        return Err(Error::Model(format!("term {i}: malformed profile segment {s:?}")));
                    }
                }
                if sorted.windows(2).any(|w| w[1].t0 < w[0].t1) {
                    return Err(Error::Model(format!("term {i}: overlapping profile segments")));
                }
            }
        }
        Ok(HamiltonianSpec {
            num_qubits,
            bath_dim,
            terms,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn bath_dim(&self) -> usize {
        self.bath_dim
    }

    pub fn system_dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.system_dim() * self.bath_dim
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    /// Keeps only the terms selected by `keep`.
    pub fn restricted(&self, keep: impl Fn(usize, &HamiltonianTerm) -> bool) -> HamiltonianSpec {
        HamiltonianSpec {
            num_qubits: self.num_qubits,
            bath_dim: self.bath_dim,
            terms: self
                .terms
                .iter()
                .enumerate()
                .filter(|(i, t)| keep(*i, t))
                .map(|(_, t)| t.clone())
                .collect(),
        }
    }

    /// Sorted distinct profile boundaries.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self
            .terms
            .iter()
            .filter_map(|t| t.profile.as_ref())
            .flat_map(|segs| segs.iter().flat_map(|s| [s.t0, s.t1]))
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Maximal intervals of `[t0, t1]` on which `H` is constant.
    /// Unbounded ends are allowed.
    pub fn regions(&self, t0: f64, t1: f64) -> Vec<(f64, f64)> {
        let mut cuts = vec![t0];
        cuts.extend(self.breakpoints().into_iter().filter(|&b| b > t0 && b < t1));
        cuts.push(t1);
        cuts.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Dense `H(t)`.
    pub fn matrix_at(&self, t: f64) -> Result<CMatrix> {
        let dim = self.dim();
        let mut h = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let s = term.scale_at(t);
            if s != 0.0 {
                h += term.matrix()?.scale(s);
            }
        }
        Ok(h)
    }

    /// `H` on a region given by its endpoints; sampled at an interior point.
    pub fn matrix_on(&self, region: (f64, f64)) -> Result<CMatrix> {
        self.matrix_at(region_sample(region))
    }
}

fn region_sample((a, b): (f64, f64)) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => a + 1.0,
        (false, true) => b - 1.0,
        (false, false) => 0.0,
    }
}

/// How a Hamiltonian term sits relative to the stabilizer group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermRole {
    /// Anticommutes with at least one stabilizer: part of `H_SB`, in sector `W_g`.
    DetectableError { syndrome: usize },
    /// System part is (up to sign) a stabilizer element: part of `H_𝟙`.
    Stabilizer,
    /// Logical operator with a bath factor proportional to the identity: part of `H_𝟙`.
    Logical,
}

impl TermRole {
    pub fn in_identity_sector(self) -> bool {
        !matches!(self, TermRole::DetectableError { .. })
    }
}

/// `H_g` per constant region, plus `J₀ = 2‖H_𝟙‖_∞` and `J₁ = 2‖H_SB‖_∞`.
#[derive(Clone, Debug)]
pub struct HamiltonianDecomposition {
    pub roles: Vec<TermRole>,
    pub regions: Vec<RegionComponents>,
    pub j0: f64,
    pub j1: f64,
    /// Largest `‖Σ_g H_g − H‖` entry over regions.
    pub reconstruction_error: f64,
    /// Largest `‖[H_𝟙, S̄_j]‖` entry over regions and generators.
    pub commutation_error: f64,
}

#[derive(Clone, Debug)]
pub struct RegionComponents {
    pub t0: f64,
    pub t1: f64,
    /// `H_g` indexed by group label.
    pub components: Vec<CMatrix>,
}

impl RegionComponents {
    pub fn identity_part(&self) -> &CMatrix {
        &self.components[0]
    }

    pub fn error_part(&self) -> CMatrix {
        let mut acc = CMatrix::zeros(self.components[0].nrows(), self.components[0].ncols());
        for c in &self.components[1..] {
            acc += c;
        }
        acc
    }
}

/// Classifies each term; rejects undetectable bath couplings.
pub fn classify_terms(code: &StabilizerCode, h: &HamiltonianSpec, tol: f64) -> Result<Vec<TermRole>> {
    if code.num_qubits() != h.num_qubits() {
        return Err(Error::Dimension {
            expected: code.num_qubits(),
            found: h.num_qubits(),
        });
    }
    h.terms()
        .iter()
        .enumerate()
        .map(|(i, term)| {
            let syndrome = code.syndrome_of(&term.system)?;
            if syndrome != 0 {
                return Ok(TermRole::DetectableError { syndrome });
            }
            if code.label_up_to_phase(&term.system).is_some() {
                return Ok(TermRole::Stabilizer);
            }
            let d = h.bath_dim() as f64;
            let mean = linalg::trace(&term.bath) / Complex64::new(d, 0.0);
            let traceless = &term.bath - CMatrix::identity(h.bath_dim(), h.bath_dim()) * mean;
            if linalg::operator_norm(&traceless) <= tol {
                Ok(TermRole::Logical)
            } else {
                Err(Error::Assumption(format!(
                    "term {i} ({}) commutes with every stabilizer but couples to the bath; \
                     the code cannot detect it",
                    term.system.letters()
                )))
            }
        })
        .collect()
}

/// Splits `H` into isotypical components on every constant region of the real line.
pub fn decompose_hamiltonian(code: &StabilizerCode, h: &HamiltonianSpec) -> Result<HamiltonianDecomposition> {
    decompose_over(code, h, f64::NEG_INFINITY, f64::INFINITY, DEFAULT_TOLERANCE)
}

/// As [`decompose_hamiltonian`], restricted to the time window `[t0, t1]`.
pub fn decompose_over(
    code: &StabilizerCode,
    h: &HamiltonianSpec,
    t0: f64,
    t1: f64,
    tol: f64,
) -> Result<HamiltonianDecomposition> {
    let roles = classify_terms(code, h, tol)?;
    let bath = h.bath_dim();
    let gens: Vec<CMatrix> = code
        .generators()
        .iter()
        .map(|g| g.to_joint_matrix(bath))
        .collect::<Result<_>>()?;
    let mut regions = Vec::new();
    let (mut j0, mut j1) = (0.0_f64, 0.0_f64);
    let (mut recon, mut comm) = (0.0_f64, 0.0_f64);
    for region in h.regions(t0, t1) {
        let full = h.matrix_on(region)?;
        let components = code.isotypical_components(&full, bath)?;
        let rc = RegionComponents {
            t0: region.0,
            t1: region.1,
            components,
        };
        let sum = rc
            .components
            .iter()
            .fold(CMatrix::zeros(full.nrows(), full.ncols()), |acc, c| acc + c);
        recon = recon.max(linalg::max_abs(&(sum - &full)));
        for g in &gens {
            comm = comm.max(linalg::max_abs(&linalg::commutator(rc.identity_part(), g)));
        }
        j0 = j0.max(2.0 * linalg::operator_norm(rc.identity_part()));
        j1 = j1.max(2.0 * linalg::operator_norm(&rc.error_part()));
        regions.push(rc);
    }
    if recon > tol {
        return Err(Error::Numerical(format!(
            "isotypical components fail to reconstruct H (error {recon:e})"
        )));
    }
    if comm > tol {
        return Err(Error::Assumption(format!(
            "H_1 does not commute with the stabilizer (commutator {comm:e})"
        )));
    }
    Ok(HamiltonianDecomposition {
        roles,
        regions,
        j0,
        j1,
        reconstruction_error: recon,
        commutation_error: comm,
    })
}

/// Convenience: the identity-sector Hamiltonian (`H_𝟙`) as a spec, used for the ideal evolution.
pub fn identity_sector(code: &StabilizerCode, h: &HamiltonianSpec) -> Result<HamiltonianSpec> {
    let roles = classify_terms(code, h, DEFAULT_TOLERANCE)?;
    Ok(h.restricted(|i, _| roles[i].in_identity_sector()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bitflip() -> StabilizerCode {
        StabilizerCode::from_labels(&["ZZI", "IZZ"]).unwrap()
    }

    fn sigma_x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[linalg::ZERO, linalg::ONE, linalg::ONE, linalg::ZERO])
    }

    fn sigma_z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[linalg::ONE, linalg::ZERO, linalg::ZERO, -linalg::ONE])
    }

    #[test]
    fn builds_bitflip_code() {
        let code = bitflip();
        assert_eq!(code.num_generators(), 2);
        assert_eq!(code.big_q(), 3);
        assert_eq!(code.q(), 2);
        assert_eq!(code.logical_qubits(), 1);
        let labels: Vec<String> = code.elements().iter().map(|p| p.to_string()).collect();
        assert_eq!(labels, ["III", "ZZI", "IZZ", "ZIZ"]);
    }

    #[test]
    fn two_qubit_code_without_logical_qubits() {
        let code = StabilizerCode::from_labels(&["ZZ", "XX"]).unwrap();
        assert_eq!(code.logical_qubits(), 0);
        // XX·ZZ = -YY carries a real sign but is not -I.
        assert_eq!(code.element(3).to_string(), "-YY");
    }

    #[test]
    fn rejects_bad_generator_sets() {
        assert!(matches!(
            StabilizerCode::from_labels(&["XI", "XI"]),
            Err(Error::DependentGenerator { index: 1, .. })
        ));
        assert!(matches!(
            StabilizerCode::from_labels(&["XI", "ZI"]),
            Err(Error::NonCommuting { .. })
        ));
        assert!(matches!(
            StabilizerCode::from_labels(&["ZZI", "IZZ", "ZIZ"]),
            Err(Error::DependentGenerator { index: 2, .. })
        ));
        assert!(matches!(
            StabilizerCode::from_labels(&["II"]),
            Err(Error::InvalidGenerator { .. })
        ));
        assert!(matches!(
            StabilizerCode::from_labels(&["ZZ", "IZZ"]),
            Err(Error::Dimension { .. })
        ));
        let empty: [&str; 0] = [];
        assert!(StabilizerCode::from_labels(&empty).is_err());
    }

    #[test]
    fn sigma_values() {
        let code = bitflip();
        let s1 = code.element(1).clone();
        let s12 = code.element(3).clone();
        let id = code.element(0).clone();
        assert_eq!(code.sigma(&s1, &s12).unwrap(), 1);
        for s in code.elements() {
            assert_eq!(code.sigma(&id, s).unwrap(), 0);
        }
        for g in 1..4 {
            let ones = (0..4).filter(|&s| StabilizerCode::sigma_labels(g, s) == 1).count();
            assert_eq!(ones, 2);
        }
        assert!(matches!(
            code.sigma(&"XXX".parse().unwrap(), &s1),
            Err(Error::NotInGroup { .. })
        ));
    }

    #[test]
    fn codespace_basis_of_bitflip_code() {
        let basis = bitflip().codespace_basis().unwrap();
        assert_eq!(basis.shape(), (8, 2));
        assert!((basis[(0, 0)] - linalg::ONE).norm() < 1e-14);
        assert!((basis[(7, 1)] - linalg::ONE).norm() < 1e-14);
    }

    #[test]
    fn projector_fixes_codespace_states_and_sums_to_identity() {
        let code = bitflip();
        let basis = code.codespace_basis().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let logical = linalg::random::density(&mut rng, 2);
        let bath = linalg::random::density(&mut rng, 2);
        let rho = linalg::kron(&(&basis * logical * basis.adjoint()), &bath);
        let fixed = code.apply_isotypical_projector(0, &rho, 2).unwrap();
        assert!(linalg::max_abs(&(fixed - &rho)) < 1e-12);

        let a = linalg::random::hermitian(&mut rng, 16);
        let parts = code.isotypical_components(&a, 2).unwrap();
        let sum = parts.iter().fold(CMatrix::zeros(16, 16), |acc, p| acc + p);
        assert!(linalg::max_abs(&(sum - &a)) < 1e-12);
        for g in 0..4 {
            let direct = code.apply_isotypical_projector(g, &a, 2).unwrap();
            assert!(linalg::max_abs(&(direct - &parts[g])) < 1e-12);
            for (h, part) in parts.iter().enumerate() {
                if g != h {
                    let twice = code.apply_isotypical_projector(g, part, 2).unwrap();
                    assert!(linalg::max_abs(&twice) < 1e-12);
                }
            }
        }
        assert!(matches!(
            code.apply_isotypical_projector(0, &CMatrix::zeros(4, 4), 2),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn hamiltonian_decomposition_examples() {
        let code = bitflip();
        let id2 = CMatrix::identity(2, 2);
        let stab = HamiltonianSpec::new(3, 2, vec![HamiltonianTerm::new("ZZI".parse().unwrap(), id2.clone())]).unwrap();
        let dec = decompose_hamiltonian(&code, &stab).unwrap();
        assert_eq!(dec.j1, 0.0);
        assert!((dec.j0 - 2.0).abs() < 1e-12);

        let g = 0.3;
        let err = HamiltonianSpec::new(
            3,
            2,
            vec![HamiltonianTerm::new("XII".parse().unwrap(), sigma_x().scale(g))],
        )
        .unwrap();
        let dec = decompose_hamiltonian(&code, &err).unwrap();
        assert!((dec.j1 - 2.0 * g).abs() < 1e-12);
        assert!(dec.j0.abs() < 1e-12);
        assert_eq!(dec.roles, vec![TermRole::DetectableError { syndrome: 1 }]);

        let logical =
            HamiltonianSpec::new(3, 2, vec![HamiltonianTerm::new("XXX".parse().unwrap(), sigma_z())]).unwrap();
        match decompose_hamiltonian(&code, &logical) {
            Err(Error::Assumption(msg)) => assert!(msg.contains("XXX")),
            other => panic!("expected assumption violation, got {other:?}"),
        }

        let logical_free =
            HamiltonianSpec::new(3, 2, vec![HamiltonianTerm::new("XXX".parse().unwrap(), id2.scale(0.2))]).unwrap();
        let dec = decompose_hamiltonian(&code, &logical_free).unwrap();
        assert_eq!(dec.roles, vec![TermRole::Logical]);
        assert!((dec.j0 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn profiles_take_worst_segment() {
        let code = bitflip();
        let term = HamiltonianTerm::new("XII".parse().unwrap(), sigma_x()).with_profile(vec![
            Segment {
                t0: 0.0,
                t1: 0.5,
                scale: 0.1,
            },
            Segment {
                t0: 0.5,
                t1: 1.0,
                scale: -0.4,
            },
        ]);
        let h = HamiltonianSpec::new(3, 2, vec![term]).unwrap();
        assert_eq!(h.regions(0.0, 1.0), vec![(0.0, 0.5), (0.5, 1.0)]);
        let dec = decompose_over(&code, &h, 0.0, 1.0, DEFAULT_TOLERANCE).unwrap();
        assert!((dec.j1 - 0.8).abs() < 1e-12);
        assert_eq!(dec.regions.len(), 2);
    }

    #[test]
    fn isotypical_dimensions_of_bitflip_code() {
        let dims = bitflip().verify_isotypical_dimensions(2).unwrap();
        assert_eq!(dims.state_dims, vec![4; 4]);
        assert_eq!(dims.operator_dims, vec![64; 4]);
        assert!(dims.matches_closed_forms());
    }

    #[test]
    fn gf2_rank_basics() {
        assert_eq!(gf2_rank(&[vec![true, false], vec![false, true], vec![true, true]]), 2);
        assert_eq!(gf2_rank(&[vec![false, false]]), 0);
    }
}
