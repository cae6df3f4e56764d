//! Pure and mixed three-qubit states.

use nalgebra::{Complex, Matrix2, SMatrix, SVector, Vector3};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, UnitSphere};

use crate::correlation::CorrelationTensor;
use crate::error::{QuantumError, Result};
use crate::tol;

pub type C64 = Complex<f64>;

/// Basis index of `|abc⟩` is `4a + 2b + c`.
#[derive(Debug, Clone, PartialEq)]
pub enum ThreeQubitState {
    Pure(SVector<C64, 8>),
    Mixed(SMatrix<C64, 8, 8>),
}

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Action of one Pauli matrix on a qubit in state `bit`: the output bit flips
/// for x and y, and this is the phase picked up.
fn pauli_phase(pauli: usize, bit: usize) -> C64 {
    match (pauli, bit) {
        (0, _) => c(1.0, 0.0),
        (1, 0) => c(0.0, 1.0),
        (1, _) => c(0.0, -1.0),
        (_, 0) => c(1.0, 0.0),
        _ => c(-1.0, 0.0),
    }
}

impl ThreeQubitState {
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        if amplitudes.len() != 8 {
            return Err(QuantumError::InvalidState(format!(
                "a pure state needs 8 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let v = SVector::<C64, 8>::from_column_slice(amplitudes);
        let norm = v.norm_squared();
        if (norm - 1.0).abs() > tol::NORM {
            return Err(QuantumError::InvalidState(format!("squared norm {norm} is not 1")));
        }
        Ok(Self::Pure(v))
    }

    pub fn mixed(rho: SMatrix<C64, 8, 8>) -> Result<Self> {
        for i in 0..8 {
            for j in 0..8 {
                let d = rho[(i, j)] - rho[(j, i)].conj();
                if d.norm() > tol::HERMITIAN {
                    return Err(QuantumError::InvalidState(format!(
                        "density matrix is not Hermitian at ({i}, {j})"
                    )));
                }
            }
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(QuantumError::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = rho.symmetric_eigenvalues().min();
        if min < tol::PSD {
            return Err(QuantumError::InvalidState(format!("negative eigenvalue {min}")));
        }
        Ok(Self::Mixed(rho))
    }

    /// 8 entries give a pure state, 64 a row-major density matrix.
    pub fn from_entries(entries: &[C64]) -> Result<Self> {
        match entries.len() {
            8 => Self::pure(entries),
            64 => Self::mixed(SMatrix::<C64, 8, 8>::from_row_slice(entries)),
            n => Err(QuantumError::InvalidState(format!("expected 8 or 64 complex entries, got {n}"))),
        }
    }

    pub fn ghz() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = SVector::<C64, 8>::zeros();
        v[0] = c(h, 0.0);
        v[7] = c(h, 0.0);
        Self::Pure(v)
    }

    /// Computational basis state with index `4a + 2b + c`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 8);
        let mut v = SVector::<C64, 8>::zeros();
        v[index] = c(1.0, 0.0);
        Self::Pure(v)
    }

    pub fn maximally_mixed() -> Self {
        Self::Mixed(SMatrix::<C64, 8, 8>::identity() / c(8.0, 0.0))
    }

    /// Product of three qubits with the given unit Bloch vectors.
    pub fn product(bloch: &[Vector3<f64>; 3]) -> Result<Self> {
        let mut qubits = Vec::with_capacity(3);
        for (p, n) in bloch.iter().enumerate() {
            if (n.norm() - 1.0).abs() > tol::NORM {
                return Err(QuantumError::InvalidState(format!("Bloch vector of party {p} is not unit")));
            }
            let theta = n.z.clamp(-1.0, 1.0).acos();
            let phi = n.y.atan2(n.x);
            qubits.push([
                c((theta / 2.0).cos(), 0.0),
                Complex::from_polar((theta / 2.0).sin(), phi),
            ]);
        }
        let mut v = SVector::<C64, 8>::zeros();
        for (i, x) in v.iter_mut().enumerate() {
            *x = qubits[0][(i >> 2) & 1] * qubits[1][(i >> 1) & 1] * qubits[2][i & 1];
        }
        Ok(Self::Pure(v))
    }

    /// Haar-like random pure state from normalized Gaussian amplitudes.
    pub fn random_pure<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut v = SVector::<C64, 8>::from_fn(|_, _| {
            c(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        v /= c(v.norm(), 0.0);
        Self::Pure(v)
    }

    pub fn random_product<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let b: [Vector3<f64>; 3] = std::array::from_fn(|_| Vector3::from(UnitSphere.sample(rng)));
        Self::product(&b).expect("unit vectors")
    }

    /// Random density matrix of the given rank.
    pub fn random_mixed<R: Rng + ?Sized>(rng: &mut R, rank: usize) -> Self {
        let g = nalgebra::DMatrix::<C64>::from_fn(8, rank.max(1), |_, _| {
            c(StandardNormal.sample(rng), StandardNormal.sample(rng))
        });
        let rho = &g * g.adjoint();
        let tr = rho.trace();
        let rho = SMatrix::<C64, 8, 8>::from_fn(|i, j| rho[(i, j)] / tr);
        Self::Mixed((rho + rho.adjoint()) * c(0.5, 0.0))
    }

    pub fn density_matrix(&self) -> SMatrix<C64, 8, 8> {
        match self {
            Self::Pure(v) => v * v.adjoint(),
            Self::Mixed(m) => *m,
        }
    }

    /// `p ρ + (1 - p) 𝟙/8`.
    pub fn with_white_noise(&self, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(QuantumError::InvalidArgument(format!("visibility {p} outside [0, 1]")));
        }
        let rho = self.density_matrix() * c(p, 0.0)
            + SMatrix::<C64, 8, 8>::identity() * c((1.0 - p) / 8.0, 0.0);
        Ok(Self::Mixed(rho))
    }

    /// `U_A ⊗ U_B ⊗ U_C` applied to the state.
    pub fn apply_local_unitaries(&self, u: &[Matrix2<C64>; 3]) -> Self {
        let full = u[0].kronecker(&u[1]).kronecker(&u[2]);
        let full = SMatrix::<C64, 8, 8>::from_fn(|i, j| full[(i, j)]);
        match self {
            Self::Pure(v) => Self::Pure(full * v),
            Self::Mixed(m) => Self::Mixed(full * m * full.adjoint()),
        }
    }

    /// `Tr ρ (σ_i ⊗ σ_j ⊗ σ_k)`, with the imaginary part asserted to vanish.
    pub fn pauli_expectation(&self, paulis: [usize; 3]) -> Result<f64> {
        let mask = paulis
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 2)
            .fold(0usize, |m, (p, _)| m | (4 >> p));
        let phase = |r: usize| -> C64 {
            (0..3).fold(c(1.0, 0.0), |acc, p| acc * pauli_phase(paulis[p], (r >> (2 - p)) & 1))
        };
        let value: C64 = match self {
            Self::Pure(v) => (0..8).map(|r| v[r ^ mask].conj() * phase(r) * v[r]).sum(),
            Self::Mixed(m) => (0..8).map(|r| m[(r, r ^ mask)] * phase(r)).sum(),
        };
        if value.im.abs() > tol::IMAG {
            return Err(QuantumError::InvalidState(format!(
                "expectation of {paulis:?} has imaginary part {}",
                value.im
            )));
        }
        Ok(value.re)
    }

    pub fn correlation_tensor(&self) -> Result<CorrelationTensor> {
        let mut data = [0.0; 27];
        for (n, x) in data.iter_mut().enumerate() {
            *x = self.pauli_expectation([n / 9, (n / 3) % 3, n % 3])?;
        }
        CorrelationTensor::new(data)
    }
}

pub fn correlation_tensor(s: &ThreeQubitState) -> Result<CorrelationTensor> {
    s.correlation_tensor()
}

/// `exp(-i θ n·σ / 2)`; conjugation by it rotates Bloch vectors by `θ` about `n`.
pub fn su2(axis: &Vector3<f64>, angle: f64) -> Matrix2<C64> {
    let n = axis.normalize();
    let (s, co) = (angle / 2.0).sin_cos();
    Matrix2::new(
        c(co, -s * n.z),
        c(-s * n.y, -s * n.x),
        c(s * n.y, -s * n.x),
        c(co, s * n.z),
    )
}
