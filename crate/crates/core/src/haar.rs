//! Quantum Haar transform.
//!
//! The Haar matrix follows the Kronecker recursion
//!
//! ```text
//! A_2     = [[1, 1], [1, -1]]
//! A_{2^n} = [ A_{2^(n-1)} ⊗ [1, 1] ]
//!           [ I_{2^(n-1)} ⊗ [1, -1] ]
//! ```
//!
//! and `P = A` with each row divided by its Euclidean norm.
//!
//! Kets in this module are written as register slots `|s_0, .., s_{n-1}>`.
//! The recursion appends the new slot on the right as the low-order factor,
//! so slot `k` carries index weight `2^(n-1-k)` and lives on qubit `n-1-k`.
//! Under this mapping the closed forms below hold against the matrix exactly:
//!
//! ```text
//! A |x> = |0..0> + sum_i (-1)^(x_i) |0^(n-i-1)> |1> |x_0 .. x_{i-1}>
//! P |x> = 2^(-n/2) ( |0..0> + sum_i (-1)^(x_i) 2^(i/2) |0^(n-i-1)> |1> |x_0 .. x_{i-1}> )
//! ```

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::matrix::{CMatrix, DenseUnitary};
use crate::qstate::{Circuit, Gate, QState};
use crate::{Error, Limits, Result};

/// Index of the register ket `|slots[0], .., slots[n-1]>`.
pub fn register_index(slots: &[u8]) -> usize {
    slots.iter().fold(0, |acc, &s| (acc << 1) | usize::from(s & 1))
}

/// Inverse of [`register_index`].
pub fn register_slots(index: usize, n: usize) -> Vec<u8> {
    (0..n).map(|k| ((index >> (n - 1 - k)) & 1) as u8).collect()
}

/// Qubit holding register slot `k`.
pub fn slot_qubit(n: usize, k: usize) -> usize {
    n - 1 - k
}

fn check_bits(n: usize, x: &[u8]) -> Result<()> {
    if x.len() != n || x.iter().any(|&b| b > 1) {
        return Err(Error::InvalidInput(format!("expected a bit vector of length {n}")));
    }
    Ok(())
}

/// Unnormalized Haar matrix and its row-normalized unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct HaarMatrix {
    n: usize,
    a: Vec<i8>,
    p: DenseUnitary,
}

impl HaarMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Entry of the integer matrix `A`.
    pub fn a(&self, r: usize, c: usize) -> i8 {
        self.a[r * self.dim() + c]
    }

    pub fn a_rows(&self) -> Vec<Vec<i8>> {
        self.a.chunks(self.dim()).map(<[i8]>::to_vec).collect()
    }

    pub fn p(&self) -> &DenseUnitary {
        &self.p
    }
}

fn haar_integer(n: usize) -> Vec<i8> {
    let mut a = vec![1i8, 1, 1, -1];
    for m in 2..=n {
        let half = 1usize << (m - 1);
        let dim = half << 1;
        let mut next = vec![0i8; dim * dim];
        for r in 0..half {
            for c in 0..half {
                let v = a[r * half + c];
                next[r * dim + 2 * c] = v;
                next[r * dim + 2 * c + 1] = v;
            }
            next[(half + r) * dim + 2 * r] = 1;
            next[(half + r) * dim + 2 * r + 1] = -1;
        }
        a = next;
    }
    a
}

/// `A_{2^n}` and `P_{2^n}`.
pub fn haar_matrix(n: usize, limits: &Limits) -> Result<HaarMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    limits.check_dense("haar_matrix", n)?;
    let a = haar_integer(n);
    let dim = 1usize << n;
    let scales: Vec<f64> = a
        .chunks(dim)
        .map(|row| {
            let support = row.iter().filter(|&&v| v != 0).count();
            // support is a power of two: 2^k -> 2^(-k/2)
            let k = support.trailing_zeros() as i32;
            let s = 0.5f64.powi(k / 2);
            if k % 2 == 1 {
                s * FRAC_1_SQRT_2
            } else {
                s
            }
        })
        .collect();
    let p = CMatrix::from_fn(dim, |r, c| Complex64::new(f64::from(a[r * dim + c]) * scales[r], 0.0));
    Ok(HaarMatrix {
        n,
        a,
        p: DenseUnitary::trusted(n, p)?,
    })
}

/// Right-hand side of the integer identity for `A |x>`, as a vector indexed
/// by basis index.
pub fn haar_identity_ket(x: &[u8]) -> Result<Vec<i64>> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidInput("x must not be empty".into()));
    }
    check_bits(n, x)?;
    let mut ket = vec![0i64; 1 << n];
    ket[0] += 1;
    for i in 0..n {
        let detail = HaarKet::Detail {
            level: i,
            prefix: x[..i].to_vec(),
        };
        ket[detail.index(n)?] += if x[i] == 0 { 1 } else { -1 };
    }
    Ok(ket)
}

/// Whether column `x` of `hm.a` equals [`haar_identity_ket`], exactly.
pub fn haar_matrix_identity_check(hm: &HaarMatrix, x: &[u8]) -> Result<bool> {
    check_bits(hm.n, x)?;
    let col = register_index(x);
    let ket = haar_identity_ket(x)?;
    Ok((0..hm.dim()).all(|r| i64::from(hm.a(r, col)) == ket[r]))
}

/// `P |x>` from the closed form; `n + 1` nonzero amplitudes.
pub fn haar_apply_basis(x: &[u8], limits: &Limits) -> Result<QState> {
    let n = x.len();
    if n == 0 {
        return Err(Error::InvalidInput("x must not be empty".into()));
    }
    check_bits(n, x)?;
    limits.check_state("haar_apply_basis", n)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    let n_f = n as f64;
    amps[0] = Complex64::new(2f64.powf(-n_f / 2.0), 0.0);
    for i in 0..n {
        let idx = HaarKet::Detail {
            level: i,
            prefix: x[..i].to_vec(),
        }
        .index(n)?;
        let sign = if x[i] == 0 { 1.0 } else { -1.0 };
        amps[idx] = Complex64::new(sign * 2f64.powf((i as f64 - n_f) / 2.0), 0.0);
    }
    QState::from_amplitudes(n, amps)
}

/// The basis kets the inverse closed forms are stated on. Every basis index
/// is exactly one of these.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HaarKet {
    /// `|0>^n`.
    Zero,
    /// `|0>^(n-level-1) |1> |prefix>`, `prefix.len() == level`.
    Detail { level: usize, prefix: Vec<u8> },
}

impl HaarKet {
    pub fn from_index(n: usize, index: usize) -> Result<Self> {
        if n == 0 || index >= 1 << n {
            return Err(Error::InvalidInput(format!(
                "index {index} out of range for {n} slots"
            )));
        }
        if index == 0 {
            return Ok(HaarKet::Zero);
        }
        let slots = register_slots(index, n);
        let lead = slots.iter().take_while(|&&s| s == 0).count();
        let level = n - lead - 1;
        Ok(HaarKet::Detail {
            level,
            prefix: slots[lead + 1..].to_vec(),
        })
    }

    pub fn index(&self, n: usize) -> Result<usize> {
        match self {
            HaarKet::Zero => Ok(0),
            HaarKet::Detail { level, prefix } => {
                if *level >= n || prefix.len() != *level || prefix.iter().any(|&b| b > 1) {
                    return Err(Error::InvalidInput(format!(
                        "malformed ket: level {level} with a prefix of length {} for {n} slots",
                        prefix.len()
                    )));
                }
                let mut slots = vec![0u8; n - level - 1];
                slots.push(1);
                slots.extend_from_slice(prefix);
                Ok(register_index(&slots))
            }
        }
    }
}

/// `P^† |ket>` from the closed form.
///
/// `|0>^n` goes to the uniform superposition; a detail ket goes to
/// `|prefix> |-> (sum over the trailing n-level-1 slots) / sqrt(2^(n-level-1))`.
pub fn haar_inverse_apply(n: usize, ket: &HaarKet, limits: &Limits) -> Result<QState> {
    ket.index(n)?;
    limits.check_state("haar_inverse_apply", n)?;
    let dim = 1usize << n;
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    match ket {
        HaarKet::Zero => {
            let v = Complex64::new(2f64.powf(-(n as f64) / 2.0), 0.0);
            amps.iter_mut().for_each(|a| *a = v);
        }
        HaarKet::Detail { level, prefix } => {
            let tail = n - level - 1;
            let scale = 2f64.powf(-((tail + 1) as f64) / 2.0);
            let mut slots = prefix.clone();
            slots.push(0);
            slots.resize(n, 0);
            for minus in [0u8, 1] {
                slots[*level] = minus;
                let sign = if minus == 0 { 1.0 } else { -1.0 };
                for rest in 0..1usize << tail {
                    for (k, s) in slots[level + 1..].iter_mut().enumerate() {
                        *s = ((rest >> (tail - 1 - k)) & 1) as u8;
                    }
                    amps[register_index(&slots)] = Complex64::new(sign * scale, 0.0);
                }
            }
        }
    }
    QState::from_amplitudes(n, amps)
}

fn swap_slots(c: &mut Circuit, n: usize, k: usize) -> Result<()> {
    c.push(Gate::Swap(slot_qubit(n, k), slot_qubit(n, k + 1)))?;
    Ok(())
}

/// Circuit taking every level-`level` detail ket to its image under `P^†`.
///
/// Adjacent swaps first walk the `1` right past the prefix (`level` swaps),
/// then walk each leading zero past the prefix and the `1` (`level + 1` swaps
/// each), giving `|prefix> |1> |0..0>`. `H` on the `1` slot makes `|->` and
/// `H` on the trailing slots spreads them.
pub fn haar_inverse_circuit(n: usize, level: usize) -> Result<Circuit> {
    if level >= n {
        return Err(Error::InvalidInput(format!(
            "level {level} out of range for {n} slots"
        )));
    }
    let tail = n - level - 1;
    let mut c = Circuit::new(n);
    for k in tail..tail + level {
        swap_slots(&mut c, n, k)?;
    }
    for t in 0..tail {
        let start = tail - 1 - t;
        for k in start..start + level + 1 {
            swap_slots(&mut c, n, k)?;
        }
    }
    for k in level..n {
        c.push(Gate::h(slot_qubit(n, k)))?;
    }
    Ok(c)
}

/// `(level + 1)(n - level - 1) + level`.
pub fn inverse_swap_count(n: usize, level: usize) -> usize {
    (level + 1) * (n - level - 1) + level
}

/// Gate-count ceiling for [`haar_inverse_circuit`].
pub fn inverse_gate_bound(n: usize) -> usize {
    n * n + 2 * n
}
