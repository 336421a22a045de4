//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

use gqt_core::Complex64;
use rand::Rng;

/// `T[y][x] = exp(2 pi i sum_ij y_i phi_ij x_j / N) / sqrt N`, straight from the definition.
pub fn brute_transform(phi: &[Vec<f64>]) -> Vec<Vec<Complex64>> {
    let n = phi.len();
    let dim = 1usize << n;
    let big_n = dim as f64;
    (0..dim)
        .map(|y| {
            (0..dim)
                .map(|x| {
                    let mut e = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            if (y >> i) & 1 == 1 && (x >> j) & 1 == 1 {
                                e += phi[i][j];
                            }
                        }
                    }
                    Complex64::from_polar(1.0 / big_n.sqrt(), 2.0 * PI * e / big_n)
                })
                .collect()
        })
        .collect()
}

/// `max |T^† T - I|` for a row-major square matrix.
pub fn gram_error(t: &[Vec<Complex64>]) -> f64 {
    let dim = t.len();
    let mut worst: f64 = 0.0;
    for a in 0..dim {
        for b in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in t {
                acc += row[a].conj() * row[b];
            }
            if a == b {
                acc -= 1.0;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

pub fn numerically_unitary(phi: &[Vec<f64>]) -> bool {
    gram_error(&brute_transform(phi)) < 1e-9
}

/// Triangular-valid matrix: diagonal `N/2`, upper entries multiples of `N`,
/// lower entries a mix of integers and arbitrary reals.
pub fn random_triangular<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let big_n = (1u64 << n) as f64;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match i.cmp(&j) {
                    std::cmp::Ordering::Equal => big_n / 2.0,
                    std::cmp::Ordering::Less => big_n * rng.gen_range(-1i32..=1) as f64,
                    std::cmp::Ordering::Greater => {
                        if rng.gen_bool(0.5) {
                            rng.gen_range(0..(1u64 << n)) as f64
                        } else {
                            rng.gen_range(-big_n..big_n)
                        }
                    }
                })
                .collect()
        })
        .collect()
}

/// Real matrix biased towards the lattice `(N/4) Z` so both verdicts occur.
pub fn random_real<R: Rng>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let big_n = (1u64 << n) as f64;
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| match rng.gen_range(0..3) {
                    0 => rng.gen_range(-big_n..big_n),
                    _ => (big_n / 4.0) * rng.gen_range(-4i32..=4) as f64,
                })
                .collect()
        })
        .collect()
}

pub fn bit_reverse(k: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, i| acc | (((k >> i) & 1) << (n - 1 - i)))
}
