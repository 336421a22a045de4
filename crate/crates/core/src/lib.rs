//! Generalized quantum Fourier transforms on a dense statevector simulator.
//!
//! The crate is organised bottom-up:
//!
//! - [`qstate`]: statevectors, gates, circuits, dense unitaries and measurement
//!   sampling. Everything else targets this substrate.
//! - [`phasemat`]: the phase-exponent matrix that parameterizes the complex
//!   Hadamard family, with its triangular and subset-sum validity criteria.
//! - [`gqft`]: the complex Hadamard transform `G_N` as a dense matrix and as an
//!   `O(n^2)` gate cascade, plus the DFT reference oracle.
//! - [`rotft`]: rotation-cascade transforms (Hadamard-first and rotation-first).
//! - [`haar`]: the recursive Haar matrix, its normalized unitary, closed-form
//!   actions and the inverse circuit.
//! - [`dhsp`]: a dihedral hidden subgroup experiment harness built on `G_N`.
//!
//! Basis convention: a basis index `k` encodes the bits `(x_0, .., x_{n-1})`
//! with `k = sum_i x_i 2^i`, so qubit `i` carries weight `2^i`. Dense matrices
//! are stored row-major with `m[(y, x)] = <y|U|x>`.

pub mod bits;
pub mod dhsp;
pub mod gqft;
pub mod haar;
pub mod matrix;
pub mod phasemat;
pub mod qstate;
pub mod rng;
pub mod rotft;

pub use num_complex::Complex64;

pub use matrix::{CMatrix, DenseUnitary};
pub use phasemat::{PhaseMatrix, Regime, ValidityReport, Witness};
pub use qstate::{Circuit, Gate, Histogram, QState, Unitary2};

/// Tolerances shared across modules.
pub mod tol {
    /// State and dense-matrix equality, norm preservation.
    pub const STATE: f64 = 1e-9;
    /// Unitarity of a 2x2 gate matrix.
    pub const GATE_UNITARY: f64 = 1e-12;
    /// Wraparound distance for modular congruence of real phase exponents.
    pub const MODULAR: f64 = 1e-9;
}

/// Size caps. All of them can be raised by callers that know what they are doing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest `n` for which `2^n x 2^n` matrices are materialized.
    pub dense_cap: usize,
    /// Largest `n` for statevector-only operations.
    pub state_cap: usize,
    /// Largest `n` for the exhaustive subset criterion (`2^n n^2` work).
    pub general_check_cap: usize,
    /// Maximum support of a per-row multi-bit phase function. `None` means `n`.
    pub row_support_cap: Option<usize>,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            dense_cap: 12,
            state_cap: 20,
            general_check_cap: 20,
            row_support_cap: None,
        }
    }
}

impl Limits {
    pub(crate) fn check_dense(&self, what: &'static str, n: usize) -> Result<()> {
        check_cap(what, n, self.dense_cap)
    }

    pub(crate) fn check_state(&self, what: &'static str, n: usize) -> Result<()> {
        check_cap(what, n, self.state_cap)
    }

    pub(crate) fn row_support(&self, n: usize) -> usize {
        self.row_support_cap.unwrap_or(n)
    }
}

fn check_cap(what: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { what, n, cap })
    } else {
        Ok(())
    }
}

/// Errors raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },

    #[error("qubit {0} used more than once by a gate")]
    DuplicateQubit(usize),

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what}: n = {n} exceeds cap {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("phase matrix fails the {} criterion", .0.regime)]
    InvalidSpec(ValidityReport),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("norm drifted from 1 by {deviation:e}")]
    NormDrift { deviation: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
