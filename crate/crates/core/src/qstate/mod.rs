//! Statevector simulation substrate.
//!
//! [`QState`] values are immutable; every `apply_*` function returns a new
//! state and checks that the norm survived within `1e-9` without
//! renormalizing.

mod circuit;
mod gate;
mod measure;

use num_complex::Complex64;

pub use circuit::{circuit_to_dense, Circuit};
pub use gate::{Gate, Unitary2};
pub use measure::{measure_all, Histogram};

use crate::matrix::DenseUnitary;
use crate::{tol, Error, Result};

/// Largest register the index type comfortably addresses.
const MAX_QUBITS: usize = 30;

/// Pure state of `n` qubits; `amps[k]` is the amplitude of basis state `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct QState {
    n: usize,
    amps: Vec<Complex64>,
}

impl QState {
    /// Computational basis state `|k>`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        check_n(n)?;
        if k >= 1 << n {
            return Err(Error::InvalidInput(format!(
                "basis index {k} out of range for {n} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    /// Wraps amplitudes, checking length `2^n` and unit norm.
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_n(n)?;
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: amps.len(),
            });
        }
        let s = Self { n, amps };
        s.check_norm()?;
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amps[k]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_k |self[k] - other[k]|`; infinite when sizes differ.
    pub fn max_abs_diff(&self, other: &QState) -> f64 {
        if self.n != other.n {
            return f64::INFINITY;
        }
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn check_norm(&self) -> Result<()> {
        let deviation = (self.norm() - 1.0).abs();
        if deviation < tol::STATE {
            Ok(())
        } else {
            Err(Error::NormDrift { deviation })
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidInput(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n}"
        )));
    }
    Ok(())
}

/// `U_g |state>` for the full `2^n`-dimensional lift of `g`.
pub fn apply_gate(state: &QState, g: &Gate) -> Result<QState> {
    g.validate(state.n)?;
    let mut out = state.clone();
    g.apply_in_place(&mut out.amps);
    out.check_norm()?;
    Ok(out)
}

/// Applies the gates of `c` left to right.
pub fn apply_circuit(state: &QState, c: &Circuit) -> Result<QState> {
    if c.n() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: c.n(),
        });
    }
    let mut out = state.clone();
    c.run_in_place(&mut out.amps);
    out.check_norm()?;
    Ok(out)
}

/// Matrix-vector product `m |state>`. No renormalization.
pub fn apply_dense(state: &QState, m: &DenseUnitary) -> Result<QState> {
    if m.n() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            found: m.n(),
        });
    }
    let out = QState {
        n: state.n,
        amps: m.matrix().mul_vec(&state.amps)?,
    };
    out.check_norm()?;
    Ok(out)
}
