//! Independent reference implementations used as oracles by the integration tests.
//! Nothing here calls into the library's Pauli, stabilizer or dynamics code.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type Mat = DMatrix<Complex64>;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn single(letter: char) -> Mat {
    let (o, l, i) = (c(0.0), c(1.0), Complex64::i());
    let entries = match letter {
        'I' => [l, o, o, l],
        'X' => [o, l, l, o],
        'Y' => [o, -i, i, o],
        'Z' => [l, o, o, -l],
        other => panic!("bad Pauli letter {other}"),
    };
    Mat::from_row_slice(2, 2, &entries)
}

/// Kronecker product of single-qubit matrices, leftmost letter most significant.
pub fn pauli(label: &str) -> Mat {
    label
        .chars()
        .fold(Mat::identity(1, 1), |acc, ch| acc.kronecker(&single(ch)))
}

pub fn sigma_x(scale: f64) -> Mat {
    single('X') * c(scale)
}

pub fn sigma_z(scale: f64) -> Mat {
    single('Z') * c(scale)
}

pub fn eye(d: usize) -> Mat {
    Mat::identity(d, d)
}

/// Every product of a subset of the generators, as dense matrices.
pub fn group(generators: &[&str]) -> Vec<Mat> {
    let n = generators[0].len();
    let gens: Vec<Mat> = generators.iter().map(|g| pauli(g)).collect();
    (0..1usize << gens.len())
        .map(|mask| {
            gens.iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .fold(eye(1 << n), |acc, (_, g)| acc * g)
        })
        .collect()
}

/// Projectors onto each joint eigenspace of the generators, tensored with the bath identity.
pub fn syndrome_projectors(generators: &[&str], bath: usize) -> Vec<Mat> {
    let n = generators[0].len();
    let id = eye(1 << n);
    (0..1usize << generators.len())
        .map(|signs| {
            let p = generators.iter().enumerate().fold(id.clone(), |acc, (j, g)| {
                let sign = if signs >> j & 1 == 1 { -1.0 } else { 1.0 };
                acc * (&id + pauli(g) * c(sign)) * c(0.5)
            });
            p.kronecker(&eye(bath))
        })
        .collect()
}

/// Orthonormal codespace basis from projecting computational basis states in order.
pub fn code_basis(generators: &[&str]) -> Vec<nalgebra::DVector<Complex64>> {
    let dim = 1 << generators[0].len();
    let proj = &syndrome_projectors(generators, 1)[0];
    let mut basis: Vec<nalgebra::DVector<Complex64>> = Vec::new();
    for k in 0..dim {
        let mut v = proj.column(k).into_owned();
        for b in &basis {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / c(norm));
        }
    }
    basis
}

pub fn encode(generators: &[&str], amplitudes: &[Complex64]) -> Mat {
    let basis = code_basis(generators);
    let mut psi = nalgebra::DVector::zeros(basis[0].len());
    for (b, a) in basis.iter().zip(amplitudes) {
        psi += b * *a;
    }
    let psi = &psi / c(psi.norm());
    &psi * psi.adjoint()
}

/// Tr_B for a joint operator with the bath as the fast index.
pub fn partial_trace(a: &Mat, sys: usize, bath: usize) -> Mat {
    Mat::from_fn(sys, sys, |i, j| {
        (0..bath).map(|b| a[(i * bath + b, j * bath + b)]).sum()
    })
}

pub fn trace_norm_hermitian(a: &Mat) -> f64 {
    let h = (a + a.adjoint()) * c(0.5);
    h.symmetric_eigen().eigenvalues.iter().map(|v| v.abs()).sum()
}

pub fn propagator(h: &Mat, t: f64) -> Mat {
    (h * Complex64::new(0.0, -t)).exp()
}

/// Group twirl `(1/|G|) Σ_S (S⊗𝟙) H (S⊗𝟙)`: the part of `H` commuting with every stabilizer.
pub fn identity_sector(generators: &[&str], h: &Mat, bath: usize) -> Mat {
    let g = group(generators);
    let size = g.len() as f64;
    g.iter()
        .map(|s| {
            let s = s.kronecker(&eye(bath));
            &s * h * &s
        })
        .fold(Mat::zeros(h.nrows(), h.ncols()), |acc, x| acc + x)
        / c(size)
}

pub struct Model<'a> {
    pub generators: &'a [&'a str],
    pub bath: usize,
    pub hamiltonian: Mat,
    pub initial: Mat,
}

/// The bit-flip benchmark: 0.1·XII⊗σx + 0.05·III⊗σz, logical (0.6, 0.8), maximally mixed bath.
pub fn bitflip_model() -> Model<'static> {
    const GENS: &[&str] = &["ZZI", "IZZ"];
    let h = pauli("XII").kronecker(&sigma_x(0.1)) + pauli("III").kronecker(&sigma_z(0.05));
    let rho_s = encode(GENS, &[c(0.6), c(0.8)]);
    Model {
        generators: GENS,
        bath: 2,
        hamiltonian: h,
        initial: rho_s.kronecker(&(eye(2) * c(0.5))),
    }
}

/// Trace distance after `M` rounds of unitary step plus projective syndrome measurement,
/// against evolution under the identity sector alone.
pub fn projective_distance(model: &Model<'_>, tau: f64, cycles: u64) -> f64 {
    let dt = tau / cycles as f64;
    let u = propagator(&model.hamiltonian, dt);
    let projectors = syndrome_projectors(model.generators, model.bath);
    let mut rho = model.initial.clone();
    for _ in 0..cycles {
        let evolved = &u * &rho * u.adjoint();
        rho = projectors
            .iter()
            .map(|p| p * &evolved * p)
            .fold(Mat::zeros(rho.nrows(), rho.ncols()), |acc, x| acc + x);
    }
    let ideal_h = identity_sector(model.generators, &model.hamiltonian, model.bath);
    let v = propagator(&ideal_h, tau);
    let ideal = &v * &model.initial * v.adjoint();
    let sys = model.hamiltonian.nrows() / model.bath;
    let diff = partial_trace(&rho, sys, model.bath) - partial_trace(&ideal, sys, model.bath);
    0.5 * trace_norm_hermitian(&diff)
}

/// Ordered `l`-tuples of non-identity group elements whose product is each element,
/// counted by brute force over symplectic masks (phases ignored).
pub fn tuple_counts(generators: &[&str], l: u32) -> Vec<u64> {
    let mask = |label: &str| -> (u32, u32) {
        label.chars().enumerate().fold((0, 0), |(x, z), (q, ch)| {
            let bit = 1 << q;
            match ch {
                'X' => (x | bit, z),
                'Z' => (x, z | bit),
                'Y' => (x | bit, z | bit),
                _ => (x, z),
            }
        })
    };
    let gens: Vec<(u32, u32)> = generators.iter().map(|g| mask(g)).collect();
    let elements: Vec<(u32, u32)> = (0..1usize << gens.len())
        .map(|m| {
            gens.iter()
                .enumerate()
                .filter(|(j, _)| m >> j & 1 == 1)
                .fold((0, 0), |(x, z), (_, g)| (x ^ g.0, z ^ g.1))
        })
        .collect();
    let non_identity: Vec<(u32, u32)> = elements[1..].to_vec();
    let mut counts = vec![0u64; elements.len()];
    let total = (non_identity.len() as u64).pow(l);
    for mut idx in 0..total {
        let mut acc = (0u32, 0u32);
        for _ in 0..l {
            let e = non_identity[(idx % non_identity.len() as u64) as usize];
            idx /= non_identity.len() as u64;
            acc = (acc.0 ^ e.0, acc.1 ^ e.1);
        }
        let pos = elements.iter().position(|e| *e == acc).expect("closed under products");
        counts[pos] += 1;
    }
    counts
}

/// `e^{J₀τ}[((Q e^{−J₁τ/M} + e^{QJ₁τ/M})/(Q+1))^M − 1]` from its power series, whose
/// terms are all nonnegative, so no cancellation occurs.
pub fn strong_formula(q: f64, j0: f64, j1: f64, tau: f64, m: u64) -> f64 {
    let a = j1 * tau / m as f64;
    // x = Σ_{n≥2} aⁿ (Qⁿ + Q(−1)ⁿ) / (n! (Q+1))
    let mut x = 0.0;
    let mut term_a = a; // aⁿ/n!
    let (mut qn, mut sign) = (q, -1.0);
    for n in 2..60 {
        term_a *= a / n as f64;
        qn *= q;
        sign = -sign;
        x += term_a * (qn + q * sign) / (q + 1.0);
    }
    // (1+x)^M − 1 = Σ_{k≥1} C(M,k) x^k
    let mut acc = 0.0;
    let mut term = 1.0;
    for k in 1..=m {
        term *= (m - k + 1) as f64 / k as f64 * x;
        acc += term;
        if term < 1e-30 * acc {
            break;
        }
    }
    (j0 * tau).exp() * acc
}
