//! n-qubit Pauli operators in binary symplectic form.
//!
//! An operator is stored as `phase · σ(x₀,z₀) ⊗ … ⊗ σ(x_{n-1},z_{n-1})` where
//! `σ(0,0)=I`, `σ(1,0)=X`, `σ(0,1)=Z` and `σ(1,1)=Y`. Qubit 0 is the leftmost
//! character of a label and the most significant bit of a basis index.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Largest qubit count realised as a dense matrix (4096 × 4096).
pub const DENSE_QUBIT_LIMIT: usize = 12;

/// Element of the quarter-phase group `{+1, +i, -1, -i}`, stored as a power of `i`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_quarter_turns(k: u32) -> Phase {
        Phase((k % 4) as u8)
    }

    pub fn quarter_turns(self) -> u8 {
        self.0
    }

    pub fn compose(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }

    fn prefix(self) -> &'static str {
        match self.0 {
            0 => "",
            1 => "+i",
            2 => "-",
            _ => "-i",
        }
    }
}

/// An n-qubit Pauli operator with an exactly tracked phase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    x: Vec<bool>,
    z: Vec<bool>,
    phase: Phase,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        PauliOperator {
            x: vec![false; n],
            z: vec![false; n],
            phase: Phase::ONE,
        }
    }

    /// Builds an operator from its bit vectors. Both vectors must have the same length.
    pub fn from_bits(x: Vec<bool>, z: Vec<bool>, phase: Phase) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::Dimension {
                expected: x.len(),
                found: z.len(),
            });
        }
        if x.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(PauliOperator { x, z, phase })
    }

    /// Parses a bare label such as `"XZI"` and attaches `phase`.
    pub fn from_label(label: &str, phase: Phase) -> Result<Self> {
        Self::parse_letters(label, 0, phase)
    }

    fn parse_letters(label: &str, offset: usize, phase: Phase) -> Result<Self> {
        let mut x = Vec::with_capacity(label.len());
        let mut z = Vec::with_capacity(label.len());
        for (i, c) in label.chars().enumerate() {
            let (xb, zb) = match c {
                'I' => (false, false),
                'X' => (true, false),
                'Y' => (true, true),
                'Z' => (false, true),
                other => {
                    return Err(Error::Parse {
                        position: offset + i,
                        found: other,
                    })
                }
            };
            x.push(xb);
            z.push(zb);
        }
        if x.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(PauliOperator { x, z, phase })
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = phase;
        self
    }

    /// True when both bit vectors vanish (the phase is not inspected).
    pub fn is_identity_up_to_phase(&self) -> bool {
        !self.x.iter().chain(self.z.iter()).any(|&b| b)
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    pub fn weight(&self) -> usize {
        self.x.iter().zip(&self.z).filter(|(x, z)| **x || **z).count()
    }

    /// Bare letters without phase, e.g. `"XZI"`.
    pub fn letters(&self) -> String {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| match (x, z) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            })
            .collect()
    }

    /// Row `(x | z)` of the symplectic matrix.
    pub fn symplectic_row(&self) -> Vec<bool> {
        self.x.iter().chain(self.z.iter()).copied().collect()
    }

    fn check_same_size(&self, other: &PauliOperator) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::Dimension {
                expected: self.num_qubits(),
                found: other.num_qubits(),
            });
        }
        Ok(())
    }

    /// Product `self · other` with exact phase.
    pub fn multiply(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_same_size(other)?;
        // Accumulate σ_a σ_b = i^g σ_{a⊕b} per qubit, g ∈ {-1, 0, 1}.
        let mut turns: i32 = self.phase.0 as i32 + other.phase.0 as i32;
        let mut x = Vec::with_capacity(self.x.len());
        let mut z = Vec::with_capacity(self.x.len());
        for q in 0..self.x.len() {
            let (x1, z1) = (self.x[q] as i32, self.z[q] as i32);
            let (x2, z2) = (other.x[q] as i32, other.z[q] as i32);
            turns += match (x1, z1) {
                (0, 0) => 0,
                (1, 1) => z2 - x2,
                (1, 0) => z2 * (2 * x2 - 1),
                _ => x2 * (1 - 2 * z2),
            };
            x.push(self.x[q] ^ other.x[q]);
            z.push(self.z[q] ^ other.z[q]);
        }
        Ok(PauliOperator {
            x,
            z,
            phase: Phase::from_quarter_turns(turns.rem_euclid(4) as u32),
        })
    }

    /// Symplectic commutation test.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_same_size(other)?;
        let parity = (0..self.x.len()).fold(false, |acc, q| {
            acc ^ (self.x[q] & other.z[q]) ^ (self.z[q] & other.x[q])
        });
        Ok(!parity)
    }

    /// Index mask of the X part (qubit 0 is the most significant bit).
    pub fn x_mask(&self) -> usize {
        mask_of(&self.x)
    }

    pub fn z_mask(&self) -> usize {
        mask_of(&self.z)
    }

    /// Coefficient `v_k` with `P|k⟩ = v_k |k ⊕ x_mask⟩`.
    pub fn column_value(&self, k: usize) -> Complex64 {
        let y_count = self.x.iter().zip(&self.z).filter(|(x, z)| **x && **z).count() as u32;
        let sign = if (self.z_mask() & k).count_ones() % 2 == 1 {
            2
        } else {
            0
        };
        Phase::from_quarter_turns(self.phase.0 as u32 + y_count + sign).to_complex()
    }

    fn check_dense(&self) -> Result<()> {
        if self.num_qubits() > DENSE_QUBIT_LIMIT {
            return Err(Error::Capacity {
                what: "qubit count for dense realisation",
                size: self.num_qubits(),
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        Ok(())
    }

    /// Dense `2ⁿ × 2ⁿ` matrix.
    pub fn to_matrix(&self) -> Result<CMatrix> {
        self.check_dense()?;
        let dim = 1usize << self.num_qubits();
        let flip = self.x_mask();
        let mut m = CMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k ^ flip, k)] = self.column_value(k);
        }
        Ok(m)
    }

    /// Dense matrix of `P ⊗ 𝟙_B`.
    pub fn to_joint_matrix(&self, bath_dim: usize) -> Result<CMatrix> {
        self.check_dense()?;
        let sys = 1usize << self.num_qubits();
        let flip = self.x_mask();
        let mut m = CMatrix::zeros(sys * bath_dim, sys * bath_dim);
        for k in 0..sys {
            let v = self.column_value(k);
            for b in 0..bath_dim {
                m[((k ^ flip) * bath_dim + b, k * bath_dim + b)] = v;
            }
        }
        Ok(m)
    }

    /// `(P ⊗ 𝟙_B) A (P ⊗ 𝟙_B)†` in O(dim²), without forming the Pauli matrix.
    pub fn conjugate(&self, a: &CMatrix, bath_dim: usize) -> Result<CMatrix> {
        self.check_dense()?;
        let sys = 1usize << self.num_qubits();
        let dim = sys * bath_dim;
        if a.nrows() != dim || a.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: a.nrows(),
            });
        }
        let flip = self.x_mask();
        let values: Vec<Complex64> = (0..sys).map(|k| self.column_value(k)).collect();
        Ok(CMatrix::from_fn(dim, dim, |r, c| {
            let (i, b) = (r / bath_dim, r % bath_dim);
            let (j, d) = (c / bath_dim, c % bath_dim);
            let (si, sj) = (i ^ flip, j ^ flip);
            values[si] * a[(si * bath_dim + b, sj * bath_dim + d)] * values[sj].conj()
        }))
    }
}

fn mask_of(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase.prefix(), self.letters())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Accepts an optional phase prefix (`+`, `-`, `+1`, `-1`, `i`, `+i`, `-i`)
    /// followed by the letters.
    fn from_str(s: &str) -> Result<Self> {
        const PREFIXES: [(&str, Phase); 7] = [
            ("+1", Phase::ONE),
            ("-1", Phase::MINUS_ONE),
            ("+i", Phase::I),
            ("-i", Phase::MINUS_I),
            ("+", Phase::ONE),
            ("-", Phase::MINUS_ONE),
            ("i", Phase::I),
        ];
        let (offset, phase) = PREFIXES
            .iter()
            .find(|(p, _)| s.starts_with(p))
            .map(|(p, ph)| (p.len(), *ph))
            .unwrap_or((0, Phase::ONE));
        Self::parse_letters(&s[offset..], offset, phase)
    }
}
