//! Rotation-cascade transforms.
//!
//! Both variants replace the controlled phases of the QFT cascade by
//! controlled real rotations `R(t) = [[cos t, sin t], [-sin t, cos t]]` whose
//! angle depends on the control bit through a table `theta_ij(x_j)`.
//!
//! - Hadamard-first: wire `i` gets `H`, then `R(Theta_i)` with
//!   `Theta_i(x) = sum_{j<i} theta_ij(x_j)`.
//! - Rotation-first: wire `i` gets `R(alpha_i(0))`, then `R(Theta_i)`. On
//!   `|1>` the first rotation acts like `R(alpha_i(0) - pi/2)` on `|0>`, so the
//!   wire ends in `R(Psi_i)|0>` with `Psi_i = alpha_i(x_i) + Theta_i(x)` and
//!   `alpha_i(1) = alpha_i(0) - pi/2`.
//!
//! A two-branch controlled rotation is emitted as an unconditional
//! `R(theta(0))` followed by a controlled `R(theta(1) - theta(0))`.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::bits::bit;
use crate::matrix::{CMatrix, DenseUnitary};
use crate::qstate::{Circuit, Gate, Unitary2};
use crate::{Error, Limits, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    HadamardFirst,
    RotationFirst,
}

/// Angle table entry for target wire `i` and control wire `j < i`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaEntry {
    pub i: usize,
    pub j: usize,
    pub t0: f64,
    pub t1: f64,
}

/// Validated rotation-cascade spec. Angles are stored reduced to `[0, 2 pi)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotSpec {
    n: usize,
    variant: Variant,
    // (i, j) -> (theta_ij(0), theta_ij(1)); absent pairs are zero
    thetas: BTreeMap<(usize, usize), (f64, f64)>,
    alpha0: Vec<f64>,
}

fn reduce(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

impl RotSpec {
    /// `alpha0` must have one entry per wire for [`Variant::RotationFirst`]
    /// and be empty for [`Variant::HadamardFirst`].
    pub fn new(n: usize, variant: Variant, thetas: &[ThetaEntry], alpha0: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let want_alpha = match variant {
            Variant::HadamardFirst => 0,
            Variant::RotationFirst => n,
        };
        if alpha0.len() != want_alpha {
            return Err(Error::InvalidInput(format!(
                "{variant:?} needs {want_alpha} alpha values, got {}",
                alpha0.len()
            )));
        }
        if alpha0.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput("alpha values must be finite".into()));
        }
        let mut table = BTreeMap::new();
        for e in thetas {
            if e.i >= n || e.j >= e.i {
                return Err(Error::InvalidInput(format!(
                    "theta ({}, {}) must satisfy j < i < {n}",
                    e.i, e.j
                )));
            }
            if !e.t0.is_finite() || !e.t1.is_finite() {
                return Err(Error::InvalidInput(format!("theta ({}, {}) is not finite", e.i, e.j)));
            }
            if table.insert((e.i, e.j), (reduce(e.t0), reduce(e.t1))).is_some() {
                return Err(Error::InvalidInput(format!("duplicate theta ({}, {})", e.i, e.j)));
            }
        }
        Ok(Self {
            n,
            variant,
            thetas: table,
            alpha0: alpha0.iter().map(|&a| reduce(a)).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn alpha0(&self) -> &[f64] {
        &self.alpha0
    }

    /// Stored angle entries in `(i, j)` order.
    pub fn thetas(&self) -> Vec<ThetaEntry> {
        self.thetas
            .iter()
            .map(|(&(i, j), &(t0, t1))| ThetaEntry { i, j, t0, t1 })
            .collect()
    }

    /// `theta_ij(s)`; zero when the pair is absent.
    pub fn theta(&self, i: usize, j: usize, s: u8) -> f64 {
        self.thetas
            .get(&(i, j))
            .map_or(0.0, |&(t0, t1)| if s == 0 { t0 } else { t1 })
    }

    /// `alpha_i(s)`, with `alpha_i(1) = alpha_i(0) - pi/2`.
    pub fn alpha(&self, i: usize, s: u8) -> f64 {
        self.alpha0[i] - f64::from(s) * FRAC_PI_2
    }

    /// `Theta_i(x) = sum_{j<i} theta_ij(x_j)`, reduced mod `2 pi`.
    pub fn big_theta(&self, i: usize, x: usize) -> f64 {
        reduce(
            (0..i)
                .map(|j| self.theta(i, j, bit(x, j) as u8))
                .sum(),
        )
    }

    /// `Psi_i(x) = alpha_i(x_i) + Theta_i(x)`, reduced mod `2 pi`.
    pub fn psi(&self, i: usize, x: usize) -> f64 {
        reduce(self.alpha(i, bit(x, i) as u8) + self.big_theta(i, x))
    }

    fn require(&self, v: Variant) -> Result<()> {
        if self.variant == v {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "expected a {v:?} spec, got {:?}",
                self.variant
            )))
        }
    }
}

/// Entry `(y, x)` of the Hadamard-first transform:
/// `(1/sqrt N) (-1)^(x.y) prod_{i>=1} [cos Theta_i + (-1)^(x_i + y_i) sin Theta_i]`.
pub fn rot1_entry(spec: &RotSpec, y: usize, x: usize) -> f64 {
    let n = spec.n;
    let sign = if (x & y).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    let prod: f64 = (1..n)
        .map(|i| {
            let t = spec.big_theta(i, x);
            let s = if (bit(x, i) + bit(y, i)) % 2 == 0 { 1.0 } else { -1.0 };
            t.cos() + s * t.sin()
        })
        .product();
    sign * prod / ((1usize << n) as f64).sqrt()
}

/// Entry `(y, x)` of the rotation-first transform: `prod_i cos(Psi_i(x) + pi y_i / 2)`.
pub fn rot2_entry(spec: &RotSpec, y: usize, x: usize) -> f64 {
    (0..spec.n)
        .map(|i| (spec.psi(i, x) + FRAC_PI_2 * bit(y, i) as f64).cos())
        .product()
}

/// The same entry through `cos a = (e^(ia) + e^(-ia))/2` expanded over all
/// sign vectors: `(1/2^n) sum_s exp(i sum_i s_i (Psi_i + pi y_i / 2))`.
pub fn rot2_entry_exponential(spec: &RotSpec, y: usize, x: usize) -> Complex64 {
    let n = spec.n;
    let angles: Vec<f64> = (0..n)
        .map(|i| spec.psi(i, x) + PI / 2.0 * bit(y, i) as f64)
        .collect();
    let total: Complex64 = (0..1usize << n)
        .map(|signs| {
            let phase: f64 = angles
                .iter()
                .enumerate()
                .map(|(i, a)| if bit(signs, i) == 1 { -a } else { *a })
                .sum();
            Complex64::from_polar(1.0, phase)
        })
        .sum();
    total / (1usize << n) as f64
}

fn dense_real<F>(n: usize, f: F) -> Result<DenseUnitary>
where
    F: Fn(usize, usize) -> f64 + Sync,
{
    DenseUnitary::trusted(n, CMatrix::from_fn(1 << n, |y, x| Complex64::new(f(y, x), 0.0)))
}

pub fn rot1_dense(spec: &RotSpec, limits: &Limits) -> Result<DenseUnitary> {
    spec.require(Variant::HadamardFirst)?;
    limits.check_dense("rot1_dense", spec.n)?;
    dense_real(spec.n, |y, x| rot1_entry(spec, y, x))
}

pub fn rot2_dense(spec: &RotSpec, limits: &Limits) -> Result<DenseUnitary> {
    spec.require(Variant::RotationFirst)?;
    limits.check_dense("rot2_dense", spec.n)?;
    dense_real(spec.n, |y, x| rot2_entry(spec, y, x))
}

/// Max deviation between [`rot2_entry`] and [`rot2_entry_exponential`],
/// including any imaginary residue of the latter.
pub fn rot2_exponential_deviation(spec: &RotSpec, limits: &Limits) -> Result<f64> {
    spec.require(Variant::RotationFirst)?;
    limits.check_dense("rot2_exponential_deviation", spec.n)?;
    let dim = 1usize << spec.n;
    Ok((0..dim * dim)
        .map(|k| {
            let (y, x) = (k / dim, k % dim);
            (rot2_entry_exponential(spec, y, x) - rot2_entry(spec, y, x)).norm()
        })
        .fold(0.0, f64::max))
}

fn push_rotations(c: &mut Circuit, spec: &RotSpec, i: usize) -> Result<()> {
    for j in (0..i).rev() {
        let (t0, t1) = (spec.theta(i, j, 0), spec.theta(i, j, 1));
        if t0 != 0.0 {
            c.push(Gate::single(i, Unitary2::rotation(t0)))?;
        }
        let delta = reduce(t1 - t0);
        if delta != 0.0 {
            c.push(Gate::controlled(j, i, Unitary2::rotation(delta)))?;
        }
    }
    Ok(())
}

/// Wires `n-1` down to `0`: `H`, then the two-branch rotations controlled by
/// the lower wires, which still hold their input bits.
pub fn rot1_circuit(spec: &RotSpec) -> Result<Circuit> {
    spec.require(Variant::HadamardFirst)?;
    let mut c = Circuit::new(spec.n);
    for i in (0..spec.n).rev() {
        c.push(Gate::h(i))?;
        push_rotations(&mut c, spec, i)?;
    }
    Ok(c)
}

/// Wires `n-1` down to `0`: `R(alpha_i(0))`, then the two-branch rotations.
pub fn rot2_circuit(spec: &RotSpec) -> Result<Circuit> {
    spec.require(Variant::RotationFirst)?;
    let mut c = Circuit::new(spec.n);
    for i in (0..spec.n).rev() {
        c.push(Gate::single(i, Unitary2::rotation(spec.alpha0[i])))?;
        push_rotations(&mut c, spec, i)?;
    }
    Ok(c)
}

/// Gate-count ceiling for both circuit builders: one leading gate per wire and
/// at most two per control pair.
pub fn gate_bound(n: usize) -> usize {
    n + n * n.saturating_sub(1)
}
