use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::{tol, Error, Result};

/// A 2x2 unitary, row-major `[u00, u01, u10, u11]`.
///
/// Unitarity (`||u^† u - I||_max < 1e-12`) is checked on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unitary2([Complex64; 4]);

impl Unitary2 {
    pub fn new(m: [Complex64; 4]) -> Result<Self> {
        let deviation = unitarity_error(&m);
        if deviation < tol::GATE_UNITARY {
            Ok(Self(m))
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }

    pub fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        Self([h, h, h, -h])
    }

    /// `diag(1, exp(i angle))`.
    pub fn phase(angle: f64) -> Self {
        Self([
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, angle),
        ])
    }

    /// `diag(1, w_N^t)` with `w_N = exp(2 pi i / N)`; `t` is reduced mod `N` first.
    pub fn phase_exponent(t: f64, modulus: f64) -> Self {
        Self::phase(2.0 * PI * t.rem_euclid(modulus) / modulus)
    }

    /// Real rotation `[[cos t, sin t], [-sin t, cos t]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self([
            Complex64::new(c, 0.0),
            Complex64::new(s, 0.0),
            Complex64::new(-s, 0.0),
            Complex64::new(c, 0.0),
        ])
    }

    pub fn pauli_z() -> Self {
        Self::phase(PI)
    }

    pub fn entries(&self) -> &[Complex64; 4] {
        &self.0
    }

    #[inline]
    pub(crate) fn apply(&self, a0: Complex64, a1: Complex64) -> (Complex64, Complex64) {
        let [u00, u01, u10, u11] = self.0;
        (u00 * a0 + u01 * a1, u10 * a0 + u11 * a1)
    }
}

fn unitarity_error(m: &[Complex64; 4]) -> f64 {
    let [a, b, c, d] = *m;
    // columns (a, c) and (b, d)
    let g00 = a.norm_sqr() + c.norm_sqr() - 1.0;
    let g11 = b.norm_sqr() + d.norm_sqr() - 1.0;
    let g01 = a.conj() * b + c.conj() * d;
    g00.abs().max(g11.abs()).max(g01.norm())
}

/// A primitive gate application.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    Single {
        target: usize,
        u: Unitary2,
    },
    /// Applies `u` to `target` when every `(qubit, bit)` control reads `bit`.
    Controlled {
        controls: Vec<(usize, bool)>,
        target: usize,
        u: Unitary2,
    },
    Swap(usize, usize),
}

impl Gate {
    pub fn single(target: usize, u: Unitary2) -> Self {
        Gate::Single { target, u }
    }

    /// Standard controlled gate: fires when `control` is 1.
    pub fn controlled(control: usize, target: usize, u: Unitary2) -> Self {
        Gate::Controlled {
            controls: vec![(control, true)],
            target,
            u,
        }
    }

    pub fn h(target: usize) -> Self {
        Self::single(target, Unitary2::hadamard())
    }

    /// Every qubit the gate touches, in declaration order.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Single { target, .. } => vec![*target],
            Gate::Controlled {
                controls, target, ..
            } => controls
                .iter()
                .map(|&(q, _)| q)
                .chain(std::iter::once(*target))
                .collect(),
            Gate::Swap(a, b) => vec![*a, *b],
        }
    }

    /// Checks that all indices are `< n` and pairwise distinct.
    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for (i, &q) in qs.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
            if qs[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    /// Applies the gate in place. Indices must already be validated.
    pub(crate) fn apply_in_place(&self, amps: &mut [Complex64]) {
        match self {
            Gate::Single { target, u } => apply_masked(amps, *target, 0, 0, u),
            Gate::Controlled {
                controls,
                target,
                u,
            } => {
                let (mask, value) = controls.iter().fold((0, 0), |(m, v), &(q, b)| {
                    (m | 1 << q, v | usize::from(b) << q)
                });
                apply_masked(amps, *target, mask, value, u)
            }
            Gate::Swap(a, b) => {
                let (ba, bb) = (1usize << a, 1usize << b);
                for k in 0..amps.len() {
                    // visit each exchanged pair once, from the side with bit a set
                    if k & ba != 0 && k & bb == 0 {
                        amps.swap(k, k ^ ba ^ bb);
                    }
                }
            }
        }
    }
}

fn apply_masked(amps: &mut [Complex64], target: usize, mask: usize, value: usize, u: &Unitary2) {
    let t = 1usize << target;
    for k in 0..amps.len() {
        if k & t != 0 || k & mask != value {
            continue;
        }
        let (a0, a1) = u.apply(amps[k], amps[k | t]);
        amps[k] = a0;
        amps[k | t] = a1;
    }
}
