//! Phase-exponent matrices.
//!
//! A [`PhaseMatrix`] holds an `n x n` real matrix `phi`; entry `phi[i][j]`
//! contributes the phase `w_N^(y_i phi_ij x_j)` to element `(y, x)` of the
//! transform, with `N = 2^n` and `w_N = exp(2 pi i / N)`.
//!
//! Two validity regimes are checked here:
//!
//! - the triangular condition: `phi_ii = 2^(n-1)`, `phi_ij ≡ 0 (mod N)` above
//!   the diagonal, anything below it. It guarantees an `O(n^2)` circuit.
//! - the subset criterion: for every nonempty set of rows some column sums to
//!   `2^(n-1) (mod N)`. It is necessary for unitarity but not sufficient:
//!   `[[1, 2], [1, 2]]` passes it and is not unitary.
//! - the signed criterion: the same condition for every nonzero combination
//!   `z Phi` with `z` in `{-1, 0, 1}^n`. Row `y` and row `y'` of the transform
//!   have inner product `A(y - y')`, so this one is exact.
//!
//! Real congruences are decided by wraparound distance with tolerance `1e-9`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::bits::{bit, pow2};
use crate::{tol, Error, Limits, Result};

/// `n x n` phase-exponent matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseMatrix {
    n: usize,
    phi: Vec<f64>,
}

impl PhaseMatrix {
    /// Builds from rows with the default magnitude bound `2^(2n)`.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        Self::with_bound(rows, pow2(2 * n))
    }

    pub fn with_bound(rows: Vec<Vec<f64>>, bound: f64) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("phase matrix must be at least 1x1".into()));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "phase matrix is not square: row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        let phi: Vec<f64> = rows.into_iter().flatten().collect();
        if let Some(k) = phi.iter().position(|v| !v.is_finite() || v.abs() > bound) {
            return Err(Error::InvalidInput(format!(
                "entry ({}, {}) = {} is not finite or exceeds the bound {bound}",
                k / n,
                k % n,
                phi[k]
            )));
        }
        Ok(Self { n, phi })
    }

    /// `2^(n-1) I`: the matrix whose transform is `H^⊗n`.
    pub fn hadamard(n: usize) -> Result<Self> {
        let half = pow2(n) / 2.0;
        Self::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { half } else { 0.0 }).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `N = 2^n`.
    pub fn modulus(&self) -> f64 {
        pow2(self.n)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.phi[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.phi.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self {
            n,
            phi: (0..n * n).map(|k| self.get(k % n, k / n)).collect(),
        }
    }

    /// Exchanges row `i` with column `i`.
    pub fn transpose_row(&self, i: usize) -> Self {
        let mut out = self.clone();
        for k in 0..self.n {
            out.phi[i * self.n + k] = self.get(k, i);
            out.phi[k * self.n + i] = self.get(i, k);
        }
        out
    }

    /// Replaces strictly-upper entries that are multiples of `N` by 0.
    ///
    /// They induce the phase `w_N^N = 1`, so the transform is unchanged.
    pub fn normalize_upper(&self) -> Self {
        let modulus = self.modulus();
        let mut out = self.clone();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if wrap_dist(self.get(i, j), 0.0, modulus) < tol::MODULAR {
                    out.phi[i * self.n + j] = 0.0;
                }
            }
        }
        out
    }

    /// `z̃ = z Phi` for a bit vector `z` given as a mask.
    pub fn row_combination(&self, z: usize) -> Vec<f64> {
        (0..self.n)
            .map(|j| {
                (0..self.n)
                    .filter(|&i| bit(z, i) == 1)
                    .map(|i| self.get(i, j))
                    .sum()
            })
            .collect()
    }
}

/// `min_k |s - t - kN|`.
pub fn wrap_dist(s: f64, t: f64, modulus: f64) -> f64 {
    let r = (s - t).rem_euclid(modulus);
    r.min(modulus - r)
}

/// `w_N^t = exp(2 pi i t / N)`, with `t` reduced mod `N` before the exponential.
pub fn omega(t: f64, modulus: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * t.rem_euclid(modulus) / modulus)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// Diagonal `2^(n-1)`, upper entries `≡ 0 mod N`, lower entries free.
    Triangular,
    /// Every nonempty row subset has a column summing to `2^(n-1) mod N`.
    General,
    /// Every nonzero `{-1, 0, 1}` row combination has a column `≡ 2^(n-1) mod N`.
    Signed,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Triangular => "triangular",
            Regime::General => "subset-sum",
            Regime::Signed => "signed-sum",
        })
    }
}

/// The first thing that made a check fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Cell { row: usize, col: usize },
    /// Sorted row indices.
    Subset(Vec<usize>),
    /// Rows taken with `+1` and with `-1`, each sorted.
    SignedSubset { plus: Vec<usize>, minus: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityReport {
    pub regime: Regime,
    pub valid: bool,
    pub witness: Option<Witness>,
}

impl ValidityReport {
    fn pass(regime: Regime) -> Self {
        Self {
            regime,
            valid: true,
            witness: None,
        }
    }

    fn fail(regime: Regime, witness: Witness) -> Self {
        Self {
            regime,
            valid: false,
            witness: Some(witness),
        }
    }
}

/// Checks the triangular condition. The witness is the first failing cell in
/// row-major order.
pub fn check_triangular(pm: &PhaseMatrix) -> ValidityReport {
    let half = pm.modulus() / 2.0;
    let modulus = pm.modulus();
    for i in 0..pm.n {
        for j in 0..pm.n {
            let v = pm.get(i, j);
            let ok = match i.cmp(&j) {
                std::cmp::Ordering::Equal => v == half,
                std::cmp::Ordering::Less => wrap_dist(v, 0.0, modulus) < tol::MODULAR,
                std::cmp::Ordering::Greater => true,
            };
            if !ok {
                return ValidityReport::fail(Regime::Triangular, Witness::Cell { row: i, col: j });
            }
        }
    }
    ValidityReport::pass(Regime::Triangular)
}

/// Checks the subset criterion exhaustively over all `2^n - 1` row subsets.
///
/// Subsets are visited in lexicographic order of their sorted index lists, so
/// the witness is the lexicographically first failing subset.
pub fn check_general(pm: &PhaseMatrix, limits: &Limits) -> Result<ValidityReport> {
    if pm.n > limits.general_check_cap {
        return Err(Error::CapExceeded {
            what: "check_general",
            n: pm.n,
            cap: limits.general_check_cap,
        });
    }
    let n = pm.n;
    // sums[d] holds the column sums of the current path's first d rows
    let mut sums = vec![vec![0.0; n]; n + 1];
    let mut path = Vec::with_capacity(n);
    Ok(match first_failing_subset(pm, 0, &mut sums, &mut path) {
        Some(subset) => ValidityReport::fail(Regime::General, Witness::Subset(subset)),
        None => ValidityReport::pass(Regime::General),
    })
}

fn first_failing_subset(
    pm: &PhaseMatrix,
    start: usize,
    sums: &mut [Vec<f64>],
    path: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let modulus = pm.modulus();
    let half = modulus / 2.0;
    let depth = path.len();
    for r in start..pm.n {
        let (done, rest) = sums.split_at_mut(depth + 1);
        let next = &mut rest[0];
        for (j, s) in next.iter_mut().enumerate() {
            *s = done[depth][j] + pm.get(r, j);
        }
        path.push(r);
        if !next.iter().any(|&s| wrap_dist(s, half, modulus) < tol::MODULAR) {
            return Some(path.clone());
        }
        if let Some(w) = first_failing_subset(pm, r + 1, sums, path) {
            return Some(w);
        }
        path.pop();
    }
    None
}

/// Checks the signed criterion over all nonzero `z` in `{-1, 0, 1}^n` up to
/// global sign (the first nonzero coefficient is `+1`).
///
/// This decides unitarity exactly. Work is `3^n n`, so the dense cap applies.
/// The witness is the first failure in lexicographic order of the
/// `(row, sign)` lists, `+` before `-`.
pub fn check_signed(pm: &PhaseMatrix, limits: &Limits) -> Result<ValidityReport> {
    limits.check_dense("check_signed", pm.n)?;
    let n = pm.n;
    let mut sums = vec![vec![0.0; n]; n + 1];
    let mut path = Vec::with_capacity(n);
    Ok(match first_failing_signed(pm, 0, &mut sums, &mut path) {
        Some(p) => {
            let pick = |sign: i8| p.iter().filter(|(_, s)| *s == sign).map(|(r, _)| *r).collect();
            ValidityReport::fail(
                Regime::Signed,
                Witness::SignedSubset {
                    plus: pick(1),
                    minus: pick(-1),
                },
            )
        }
        None => ValidityReport::pass(Regime::Signed),
    })
}

fn first_failing_signed(
    pm: &PhaseMatrix,
    start: usize,
    sums: &mut [Vec<f64>],
    path: &mut Vec<(usize, i8)>,
) -> Option<Vec<(usize, i8)>> {
    let modulus = pm.modulus();
    let half = modulus / 2.0;
    let depth = path.len();
    let signs: &[i8] = if depth == 0 { &[1] } else { &[1, -1] };
    for r in start..pm.n {
        for &sign in signs {
            let (done, rest) = sums.split_at_mut(depth + 1);
            let next = &mut rest[0];
            for (j, s) in next.iter_mut().enumerate() {
                *s = done[depth][j] + f64::from(sign) * pm.get(r, j);
            }
            path.push((r, sign));
            if !next.iter().any(|&s| wrap_dist(s, half, modulus) < tol::MODULAR) {
                return Some(path.clone());
            }
            if let Some(w) = first_failing_signed(pm, r + 1, sums, path) {
                return Some(w);
            }
            path.pop();
        }
    }
    None
}

/// `A(z) = (1/N) prod_j (1 + w_N^(z̃_j))` with `z̃ = z Phi`. `z` is a bit mask.
pub fn a_of_z(pm: &PhaseMatrix, z: usize) -> Complex64 {
    let modulus = pm.modulus();
    pm.row_combination(z)
        .into_iter()
        .map(|t| Complex64::new(1.0, 0.0) + omega(t, modulus))
        .product::<Complex64>()
        / modulus
}

/// Same as [`a_of_z`] for an explicit bit vector.
pub fn a_of_z_bits(pm: &PhaseMatrix, z: &[u8]) -> Result<Complex64> {
    if z.len() != pm.n || z.iter().any(|&b| b > 1) {
        return Err(Error::InvalidInput(format!(
            "z must be a bit vector of length {}",
            pm.n
        )));
    }
    Ok(a_of_z(pm, crate::bits::from_bits(z)))
}

/// `max(|A(0) - 1|, max_{z != 0} |A(z)|)`: zero exactly when the transform is unitary.
pub fn a_of_z_deviation(pm: &PhaseMatrix, limits: &Limits) -> Result<f64> {
    limits.check_dense("a_of_z_deviation", pm.n)?;
    let zero = (a_of_z(pm, 0) - 1.0).norm();
    Ok((1..1usize << pm.n)
        .map(|z| a_of_z(pm, z).norm())
        .fold(zero, f64::max))
}

/// Verdict from `A(z)` over bit vectors `z`: `A` must be the Kronecker delta at 0.
///
/// This mirrors the subset criterion and inherits its gap; see
/// [`signed_consistency_unitary`] for the exact version.
pub fn consistency_unitary(pm: &PhaseMatrix, limits: &Limits) -> Result<bool> {
    Ok(a_of_z_deviation(pm, limits)? < tol::STATE)
}

/// `A(z)` for `z` in `{-1, 0, 1}^n`: the inner product of transform rows `y`
/// and `y'` with `y - y' = z`.
pub fn a_of_signed(pm: &PhaseMatrix, z: &[i8]) -> Result<Complex64> {
    if z.len() != pm.n || z.iter().any(|c| c.abs() > 1) {
        return Err(Error::InvalidInput(format!(
            "z must have length {} and entries in {{-1, 0, 1}}",
            pm.n
        )));
    }
    let modulus = pm.modulus();
    Ok((0..pm.n)
        .map(|j| {
            let t: f64 = z.iter().enumerate().map(|(i, &c)| f64::from(c) * pm.get(i, j)).sum();
            Complex64::new(1.0, 0.0) + omega(t, modulus)
        })
        .product::<Complex64>()
        / modulus)
}

/// Exact unitarity verdict: `A(z)` vanishes for every nonzero signed `z`.
pub fn signed_consistency_unitary(pm: &PhaseMatrix, limits: &Limits) -> Result<bool> {
    limits.check_dense("signed_consistency_unitary", pm.n)?;
    let n = pm.n;
    let mut z = vec![0i8; n];
    for code in 1..3usize.pow(n as u32) {
        let mut c = code;
        for zi in z.iter_mut() {
            *zi = (c % 3) as i8 - 1;
            c /= 3;
        }
        if z.iter().all(|&v| v == 0) {
            continue;
        }
        if a_of_signed(pm, &z)?.norm() >= tol::STATE {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pm(rows: &[&[f64]]) -> PhaseMatrix {
        PhaseMatrix::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert!(PhaseMatrix::new(vec![]).is_err());
        assert!(PhaseMatrix::new(vec![vec![1.0, 2.0], vec![1.0]]).is_err());
        assert!(PhaseMatrix::new(vec![vec![f64::NAN]]).is_err());
        // bound 2^(2n) = 16 for n = 2
        assert!(PhaseMatrix::new(vec![vec![2.0, 17.0], vec![0.0, 2.0]]).is_err());
        assert!(PhaseMatrix::new(vec![vec![2.0, 16.0], vec![0.0, 2.0]]).is_ok());
    }

    #[test]
    fn triangular_examples() {
        assert!(check_triangular(&pm(&[&[1.0]])).valid);
        for a in [0.0, 0.3, 1.0, -7.25, 3.0] {
            assert!(check_triangular(&pm(&[&[2.0, 0.0], &[a, 2.0]])).valid);
        }
        let r = check_triangular(&pm(&[&[2.0, 1.0], &[0.0, 2.0]]));
        assert!(!r.valid);
        assert_eq!(r.witness, Some(Witness::Cell { row: 0, col: 1 }));
        // multiples of N above the diagonal are fine, including negative ones
        assert!(check_triangular(&pm(&[&[2.0, -8.0], &[0.5, 2.0]])).valid);
        // diagonal must be exact
        let r = check_triangular(&pm(&[&[2.0, 0.0], &[0.0, 2.0 + 1e-12]]));
        assert_eq!(r.witness, Some(Witness::Cell { row: 1, col: 1 }));
    }

    #[test]
    fn general_examples() {
        let limits = Limits::default();
        for a in [0.0, 0.5, 1.0, 3.0] {
            assert!(check_general(&pm(&[&[2.0, a], &[2.0, 2.0 - a]]), &limits).unwrap().valid);
            assert!(check_general(&pm(&[&[2.0, a], &[0.0, 2.0]]), &limits).unwrap().valid);
            assert!(check_general(&pm(&[&[2.0, 0.0], &[a, 2.0]]), &limits).unwrap().valid);
        }
        let r = check_general(&pm(&[&[2.0, 0.0], &[0.0, 0.0]]), &limits).unwrap();
        assert!(!r.valid);
        assert_eq!(r.witness, Some(Witness::Subset(vec![1])));
    }

    #[test]
    fn general_witness_is_lexicographically_first() {
        // n = 3, N = 8. Rows 0 and 2 are fine alone; {0, 1} fails before {1}.
        let m = pm(&[&[4.0, 0.0, 0.0], &[4.0, 0.0, 0.0], &[0.0, 0.0, 4.0]]);
        let r = check_general(&m, &Limits::default()).unwrap();
        assert_eq!(r.witness, Some(Witness::Subset(vec![0, 1])));
    }

    #[test]
    fn general_cap() {
        let limits = Limits {
            general_check_cap: 2,
            ..Limits::default()
        };
        assert!(matches!(
            check_general(&PhaseMatrix::hadamard(3).unwrap(), &limits),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn a_of_z_examples() {
        let h = pm(&[&[2.0, 0.0], &[0.0, 2.0]]);
        assert_eq!(a_of_z(&h, 0), Complex64::new(1.0, 0.0));
        assert!(a_of_z_bits(&h, &[1, 0]).unwrap().norm() < 1e-15);
        let m = pm(&[&[1.0, 0.0], &[0.0, 2.0]]);
        let got = a_of_z_bits(&m, &[1, 0]).unwrap();
        assert!((got - Complex64::new(0.5, 0.5)).norm() < 1e-15);
        assert!(a_of_z_bits(&m, &[1, 2]).is_err());
    }

    #[test]
    fn consistency_examples() {
        let limits = Limits::default();
        for n in 1..=4 {
            assert!(consistency_unitary(&PhaseMatrix::hadamard(n).unwrap(), &limits).unwrap());
        }
        assert!(!consistency_unitary(&pm(&[&[0.0, 0.0], &[0.0, 0.0]]), &limits).unwrap());
        // fails the triangular condition but is in the [[2, a], [0, 2]] family
        let upper = pm(&[&[2.0, 1.0], &[0.0, 2.0]]);
        assert!(!check_triangular(&upper).valid);
        assert!(consistency_unitary(&upper, &limits).unwrap());
    }

    #[test]
    fn subset_criterion_misses_signed_combinations() {
        let limits = Limits::default();
        // row 0 - row 1 = 0, so rows 0 and 1 of the transform coincide
        let m = pm(&[&[1.0, 2.0], &[1.0, 2.0]]);
        assert!(check_general(&m, &limits).unwrap().valid);
        assert!(consistency_unitary(&m, &limits).unwrap());
        let r = check_signed(&m, &limits).unwrap();
        assert!(!r.valid);
        assert_eq!(
            r.witness,
            Some(Witness::SignedSubset {
                plus: vec![0],
                minus: vec![1]
            })
        );
        assert!(!signed_consistency_unitary(&m, &limits).unwrap());
        assert!((a_of_signed(&m, &[1, -1]).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn third_family_is_unitary_only_for_even_a() {
        let limits = Limits::default();
        for a in [0.0, 2.0, -2.0, 4.0] {
            let m = pm(&[&[2.0, a], &[2.0, 2.0 - a]]);
            assert!(check_signed(&m, &limits).unwrap().valid);
            assert!(signed_consistency_unitary(&m, &limits).unwrap());
        }
        for a in [0.5, 1.0, 3.0] {
            let m = pm(&[&[2.0, a], &[2.0, 2.0 - a]]);
            assert!(check_general(&m, &limits).unwrap().valid);
            assert!(!check_signed(&m, &limits).unwrap().valid);
        }
    }

    #[test]
    fn signed_accepts_triangular_and_its_transpose() {
        let limits = Limits::default();
        let m = pm(&[&[4.0, 0.0, 0.0], &[1.7, 4.0, 0.0], &[-3.2, 0.4, 4.0]]);
        assert!(check_signed(&m, &limits).unwrap().valid);
        assert!(check_signed(&m.transpose(), &limits).unwrap().valid);
        assert!(signed_consistency_unitary(&m, &limits).unwrap());
        assert!(a_of_signed(&m, &[2, 0, 0]).is_err());
    }

    #[test]
    fn interior_row_transposition_breaks_validity() {
        // first and last rows transpose fine; a middle row couples x_0 to y_1
        // and x_1 to y_2 in a cycle that no column can balance
        let limits = Limits::default();
        let m = pm(&[&[4.0, 0.0, 0.0], &[1.5, 4.0, 0.0], &[0.25, 2.5, 4.0]]);
        assert!(check_general(&m.transpose_row(0), &limits).unwrap().valid);
        assert!(check_general(&m.transpose_row(2), &limits).unwrap().valid);
        assert!(!check_general(&m.transpose_row(1), &limits).unwrap().valid);
    }

    #[test]
    fn wrap_distance() {
        assert!((wrap_dist(7.9, 0.0, 8.0) - 0.1).abs() < 1e-12);
        assert!((wrap_dist(-4.0, 4.0, 8.0)).abs() < 1e-12);
        assert!((wrap_dist(1.0e9 * 8.0 + 4.0, 4.0, 8.0)).abs() < 1e-12);
    }

    #[test]
    fn normalize_and_transpose_row() {
        let m = pm(&[&[2.0, 8.0], &[0.25, 2.0]]);
        assert_eq!(m.normalize_upper().rows(), vec![vec![2.0, 0.0], vec![0.25, 2.0]]);
        assert_eq!(m.transpose_row(0).rows(), vec![vec![2.0, 0.25], vec![8.0, 2.0]]);
        assert_eq!(m.transpose().transpose(), m);
    }
}
