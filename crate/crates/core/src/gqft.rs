//! The complex Hadamard transform `G_N`:
//!
//! ```text
//! G_N |x> = 1/sqrt(N) sum_y w_N^(y Phi x^T) |y>
//! ```
//!
//! built either directly as a dense matrix or as a gate cascade in the shape
//! of the textbook QFT circuit, with the fixed `R_k` rotations replaced by
//! controlled phases `diag(1, w_N^phi_ij)`.
//!
//! Wire `i` ends up holding `(|0> + w_N^(Phi_i(x)) |1>)/sqrt 2` where
//! `Phi_i(x) = sum_j phi_ij x_j`, and since qubit `i` carries `y_i` in the
//! little-endian convention the cascade equals the dense formula with no
//! output permutation. Swaps are only emitted by [`qft_circuit`], which maps
//! the Toeplitz case onto the ordinary DFT.

use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::bits::{bit, pow2};
use crate::matrix::{CMatrix, DenseUnitary};
use crate::phasemat::{self, omega, wrap_dist, PhaseMatrix, Regime};
use crate::qstate::{Circuit, Gate, Unitary2};
use crate::{Error, Limits, Result};

/// Replaces the linear term `phi_ij x_j` of cell `(row, col)`, `row > col`,
/// by the lookup `f(x_j)`. `f0` must be 0.
#[derive(Clone, Debug, PartialEq)]
pub struct CellPhase {
    pub row: usize,
    pub col: usize,
    pub f0: f64,
    pub f1: f64,
}

/// Replaces `sum_{j<row} phi_row,j x_j` by a table over the control pattern
/// `(x_0, .., x_{row-1})`, encoded little-endian. Missing patterns map to 0.
#[derive(Clone, Debug, PartialEq)]
pub struct RowPhase {
    pub row: usize,
    pub entries: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PhaseFunctions {
    Cells(Vec<CellPhase>),
    Rows(Vec<RowPhase>),
}

/// A validated transform specification.
#[derive(Clone, Debug, PartialEq)]
pub struct GqftSpec {
    pm: PhaseMatrix,
    regime: Regime,
    phase_fns: Option<PhaseFunctions>,
}

impl GqftSpec {
    /// Validates `pm` against the validator for `regime`.
    ///
    /// The subset-sum regime also runs the signed check whenever `n` is within
    /// the dense cap, because the subset criterion alone admits non-unitary
    /// matrices and [`gqft_dense`] promises a unitary. Above the cap no dense
    /// matrix can be built anyway.
    ///
    /// Phase functions are only meaningful in the triangular regime, where
    /// each one is realized by controlled phase gates.
    pub fn new(
        pm: PhaseMatrix,
        regime: Regime,
        phase_fns: Option<PhaseFunctions>,
        limits: &Limits,
    ) -> Result<Self> {
        let report = match regime {
            Regime::Triangular => phasemat::check_triangular(&pm),
            Regime::General => {
                let subset = phasemat::check_general(&pm, limits)?;
                if subset.valid && pm.n() <= limits.dense_cap {
                    phasemat::check_signed(&pm, limits)?
                } else {
                    subset
                }
            }
            Regime::Signed => phasemat::check_signed(&pm, limits)?,
        };
        if !report.valid {
            return Err(Error::InvalidSpec(report));
        }
        if let Some(fns) = &phase_fns {
            if regime != Regime::Triangular {
                return Err(Error::UnsupportedRegime(
                    "phase functions require the triangular regime".into(),
                ));
            }
            validate_phase_fns(pm.n(), fns, limits)?;
        }
        Ok(Self {
            pm,
            regime,
            phase_fns,
        })
    }

    pub fn triangular(pm: PhaseMatrix) -> Result<Self> {
        Self::new(pm, Regime::Triangular, None, &Limits::default())
    }

    pub fn general(pm: PhaseMatrix, limits: &Limits) -> Result<Self> {
        Self::new(pm, Regime::General, None, limits)
    }

    pub fn n(&self) -> usize {
        self.pm.n()
    }

    pub fn phase_matrix(&self) -> &PhaseMatrix {
        &self.pm
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn phase_fns(&self) -> Option<&PhaseFunctions> {
        self.phase_fns.as_ref()
    }

    /// `Phi_i(x)` for every row `i`, each reduced mod `N`.
    pub fn row_exponents(&self, x: usize) -> Vec<f64> {
        let n = self.n();
        let modulus = self.pm.modulus();
        let mut out: Vec<f64> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| bit(x, j) == 1)
                    .map(|j| self.pm.get(i, j))
                    .sum()
            })
            .collect();
        match &self.phase_fns {
            None => {}
            Some(PhaseFunctions::Cells(cells)) => {
                for c in cells {
                    let linear = self.pm.get(c.row, c.col) * bit(x, c.col) as f64;
                    let table = if bit(x, c.col) == 1 { c.f1 } else { c.f0 };
                    out[c.row] += table - linear;
                }
            }
            Some(PhaseFunctions::Rows(rows)) => {
                for r in rows {
                    let pattern = x & ((1 << r.row) - 1);
                    let linear: f64 = (0..r.row)
                        .filter(|&j| bit(x, j) == 1)
                        .map(|j| self.pm.get(r.row, j))
                        .sum();
                    let table = r
                        .entries
                        .iter()
                        .find(|(p, _)| *p == pattern)
                        .map_or(0.0, |(_, v)| *v);
                    out[r.row] += table - linear;
                }
            }
        }
        out.iter_mut().for_each(|e| *e = e.rem_euclid(modulus));
        out
    }
}

fn validate_phase_fns(n: usize, fns: &PhaseFunctions, limits: &Limits) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidInput(msg));
    match fns {
        PhaseFunctions::Cells(cells) => {
            let mut seen = BTreeSet::new();
            for c in cells {
                if c.row >= n || c.col >= c.row {
                    return bad(format!(
                        "phase function cell ({}, {}) must lie strictly below the diagonal of a {n}x{n} matrix",
                        c.row, c.col
                    ));
                }
                if !seen.insert((c.row, c.col)) {
                    return bad(format!("duplicate phase function cell ({}, {})", c.row, c.col));
                }
                if !c.f0.is_finite() || !c.f1.is_finite() {
                    return bad(format!("phase function cell ({}, {}) is not finite", c.row, c.col));
                }
                if c.f0 != 0.0 {
                    return bad(format!(
                        "phase function cell ({}, {}) must satisfy f(0) = 0, got {}",
                        c.row, c.col, c.f0
                    ));
                }
            }
        }
        PhaseFunctions::Rows(rows) => {
            let cap = limits.row_support(n);
            let mut seen = BTreeSet::new();
            for r in rows {
                if r.row >= n {
                    return bad(format!("phase function row {} out of range", r.row));
                }
                if !seen.insert(r.row) {
                    return bad(format!("duplicate phase function row {}", r.row));
                }
                if r.entries.len() > cap {
                    return bad(format!(
                        "phase function row {} has support {} above the cap {cap}",
                        r.row,
                        r.entries.len()
                    ));
                }
                let mut patterns = BTreeSet::new();
                for &(p, v) in &r.entries {
                    if p >= 1 << r.row {
                        return bad(format!(
                            "pattern {p} does not fit the {} control bits of row {}",
                            r.row, r.row
                        ));
                    }
                    if !patterns.insert(p) {
                        return bad(format!("duplicate pattern {p} in row {}", r.row));
                    }
                    if !v.is_finite() {
                        return bad(format!("row {} pattern {p} is not finite", r.row));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `T = 1/sqrt(N) sum w_N^(y Phi x^T) |y><x|` for any `Phi`, unitary or not.
pub fn transform_matrix(pm: &PhaseMatrix, limits: &Limits) -> Result<CMatrix> {
    limits.check_dense("transform_matrix", pm.n())?;
    // a General spec skips validation here on purpose: T may be singular
    let spec = GqftSpec {
        pm: pm.clone(),
        regime: Regime::General,
        phase_fns: None,
    };
    Ok(dense_from_exponents(&spec))
}

fn dense_from_exponents(spec: &GqftSpec) -> CMatrix {
    let n = spec.n();
    let modulus = spec.pm.modulus();
    let dim = 1usize << n;
    let scale = 1.0 / modulus.sqrt();
    CMatrix::from_columns(dim, |x| {
        let e = spec.row_exponents(x);
        (0..dim)
            .map(|y| {
                let t: f64 = (0..n).filter(|&i| bit(y, i) == 1).map(|i| e[i]).sum();
                omega(t, modulus) * scale
            })
            .collect()
    })
}

/// Dense `G_N` for a validated spec.
pub fn gqft_dense(spec: &GqftSpec, limits: &Limits) -> Result<DenseUnitary> {
    limits.check_dense("gqft_dense", spec.n())?;
    DenseUnitary::trusted(spec.n(), dense_from_exponents(spec))
}

/// Gate cascade for a triangular-regime spec.
///
/// Wires are processed from `n-1` down to `0` so that every control wire
/// still holds its input bit. On wire `i`: `H`, then the controlled phases
/// for `j = i-1, .., 0`. Phases that are multiples of `N` are skipped.
pub fn gqft_circuit(spec: &GqftSpec) -> Result<Circuit> {
    if spec.regime != Regime::Triangular {
        return Err(Error::UnsupportedRegime(
            format!("no circuit construction is known for the {} regime", spec.regime),
        ));
    }
    let n = spec.n();
    let modulus = spec.pm.modulus();
    let mut c = Circuit::new(n);
    for i in (0..n).rev() {
        c.push(Gate::h(i))?;
        match &spec.phase_fns {
            Some(PhaseFunctions::Rows(rows)) if rows.iter().any(|r| r.row == i) => {
                let row = rows.iter().find(|r| r.row == i).expect("checked above");
                let mut entries = row.entries.clone();
                entries.sort_by_key(|&(p, _)| p);
                for (pattern, v) in entries {
                    if wrap_dist(v, 0.0, modulus) == 0.0 {
                        continue;
                    }
                    let u = Unitary2::phase_exponent(v, modulus);
                    if i == 0 {
                        c.push(Gate::single(0, u))?;
                    } else {
                        let controls = (0..i).map(|j| (j, bit(pattern, j) == 1)).collect();
                        c.push(Gate::Controlled {
                            controls,
                            target: i,
                            u,
                        })?;
                    }
                }
            }
            _ => {
                for j in (0..i).rev() {
                    let phase = cell_phase_at_one(spec, i, j);
                    if wrap_dist(phase, 0.0, modulus) == 0.0 {
                        continue;
                    }
                    c.push(Gate::controlled(j, i, Unitary2::phase_exponent(phase, modulus)))?;
                }
            }
        }
    }
    Ok(c)
}

fn cell_phase_at_one(spec: &GqftSpec, i: usize, j: usize) -> f64 {
    if let Some(PhaseFunctions::Cells(cells)) = &spec.phase_fns {
        if let Some(c) = cells.iter().find(|c| c.row == i && c.col == j) {
            return c.f1;
        }
    }
    spec.pm.get(i, j)
}

/// Gate-count ceiling for [`gqft_circuit`] on a plain phase matrix.
pub fn gate_bound(n: usize) -> usize {
    n * (n + 1) / 2 + 2 * n
}

/// The Toeplitz matrix `phi_ij = 2^(n-1-i+j)`, whose transform is the DFT
/// with bit-reversed output.
pub fn toeplitz_phi(n: usize) -> Result<PhaseMatrix> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    PhaseMatrix::new(
        (0..n)
            .map(|i| (0..n).map(|j| pow2(n - 1 + j - i)).collect())
            .collect(),
    )
}

/// Reference DFT: `m[(y, x)] = w_N^(xy) / sqrt(N)`, with `xy` reduced exactly.
pub fn dft_dense(n: usize, limits: &Limits) -> Result<DenseUnitary> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    limits.check_dense("dft_dense", n)?;
    let dim = 1usize << n;
    let scale = 1.0 / (dim as f64).sqrt();
    let m = CMatrix::from_fn(dim, |y, x| {
        let t = ((x as u128 * y as u128) % dim as u128) as f64;
        omega(t, dim as f64) * scale
    });
    DenseUnitary::trusted(n, m)
}

/// Swaps `(i, n-1-i)` for `i < n/2`: the bit-reversal permutation.
pub fn bit_reversal_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for i in 0..n / 2 {
        c.push(Gate::Swap(i, n - 1 - i))
            .expect("indices are distinct and in range");
    }
    c
}

/// The ordinary QFT: the Toeplitz cascade followed by the bit-reversal swaps.
pub fn qft_circuit(n: usize) -> Result<Circuit> {
    let spec = GqftSpec::triangular(toeplitz_phi(n)?)?;
    let mut c = gqft_circuit(&spec)?;
    c.extend(&bit_reversal_circuit(n))?;
    Ok(c)
}

/// `max |entry| - 1/sqrt(N)` deviation; zero for a complex Hadamard matrix.
pub fn flatness_error(m: &DenseUnitary) -> f64 {
    let target = 1.0 / (m.dim() as f64).sqrt();
    m.matrix()
        .as_slice()
        .iter()
        .map(|z| (z.norm() - target).abs())
        .fold(0.0, f64::max)
}

/// Entry of `G_N` computed straight from the definition; `O(n^2)` per entry.
pub fn entry(spec: &GqftSpec, y: usize, x: usize) -> Complex64 {
    let e = spec.row_exponents(x);
    let t: f64 = (0..spec.n()).filter(|&i| bit(y, i) == 1).map(|i| e[i]).sum();
    omega(t, spec.pm.modulus()) / spec.pm.modulus().sqrt()
}
