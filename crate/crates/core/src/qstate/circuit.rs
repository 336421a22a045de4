use num_complex::Complex64;

use super::Gate;
use crate::matrix::{CMatrix, DenseUnitary};
use crate::{Error, Limits, Result};

/// Ordered gate list over `n` qubits. Gates run left to right.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
        }
    }

    /// Builds a circuit, validating every gate against `n`.
    pub fn from_gates(n: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) -> Result<&mut Self> {
        g.validate(self.n)?;
        self.gates.push(g);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn swap_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Swap(..)))
            .count()
    }

    /// Appends all gates of `other`, which must act on the same register size.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub(crate) fn run_in_place(&self, amps: &mut [Complex64]) {
        for g in &self.gates {
            g.apply_in_place(amps);
        }
    }
}

/// Dense unitary of a circuit: column `x` is the circuit applied to `|x>`.
pub fn circuit_to_dense(c: &Circuit, limits: &Limits) -> Result<DenseUnitary> {
    limits.check_dense("circuit_to_dense", c.n())?;
    let dim = 1usize << c.n();
    let m = CMatrix::from_columns(dim, |x| {
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        col[x] = Complex64::new(1.0, 0.0);
        c.run_in_place(&mut col);
        col
    });
    DenseUnitary::trusted(c.n(), m)
}
