//! Dihedral hidden subgroup experiment built on the inverse of `G_N`.
//!
//! Given `n` coset qubits `(|0> + w_N^(d s_i) |1>)/sqrt 2` with known `s_i`
//! and hidden `d`, the register holds `(1/sqrt N) sum_x w_N^(z.x) |x>` with
//! `z_i = d s_i mod N`. Applying `conj(G_Phi)` entrywise gives
//!
//! ```text
//! |y> with amplitude (1/N) sum_x w_N^((z - y Phi) x^T)
//! ```
//!
//! and probability `prod_i cos^2((z_i - (y Phi)_i) pi / N)`. With `Phi` built
//! from the samples, the bit-reversed outcome is a guess for `d`; it is
//! certain when every `lambda_i = d s_i - (y Phi)_i` vanishes mod `N`.
//!
//! Integer quantities (`z`, `S`, `lambda`, `D`) are exact; floats appear only
//! in amplitudes and probabilities.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::bits::{bit, reverse};
use crate::gqft::{gqft_dense, GqftSpec};
use crate::matrix::DenseUnitary;
use crate::phasemat::{omega, PhaseMatrix};
use crate::qstate::{apply_dense, measure_all, Histogram, QState};
use crate::{rng, Error, Limits, Result};

/// Largest `n` the exact integer arithmetic here is sized for.
const MAX_N: usize = 20;

/// Hidden `d` and known samples `s_0 .. s_{n-1}`, all in `[0, 2^n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DhspInstance {
    n: usize,
    d: u64,
    s: Vec<u64>,
}

impl DhspInstance {
    pub fn new(n: usize, d: u64, s: Vec<u64>) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::InvalidInput(format!("n must be in 1..={MAX_N}, got {n}")));
        }
        let modulus = 1u64 << n;
        if d >= modulus {
            return Err(Error::InvalidInput(format!("d = {d} must be below {modulus}")));
        }
        if s.len() != n {
            return Err(Error::InvalidInput(format!(
                "expected {n} samples, got {}",
                s.len()
            )));
        }
        if let Some(bad) = s.iter().find(|&&v| v >= modulus) {
            return Err(Error::InvalidInput(format!("sample {bad} must be below {modulus}")));
        }
        Ok(Self { n, d, s })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        1 << self.n
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn samples(&self) -> &[u64] {
        &self.s
    }

    /// `z_i = d s_i mod N`.
    pub fn z(&self) -> Vec<u64> {
        self.s.iter().map(|&s| (self.d * s) % self.modulus()).collect()
    }

    /// `S_ji = s_i 2^j mod N`.
    pub fn shifted(&self, j: usize, i: usize) -> u64 {
        (self.s[i] << j) % self.modulus()
    }

    /// `z_i` recomputed as `sum_j S_ji d_j mod N`.
    pub fn z_from_shifts(&self) -> Vec<u64> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .filter(|&j| bit(self.d as usize, j) == 1)
                    .map(|j| self.shifted(j, i))
                    .sum::<u64>()
                    % self.modulus()
            })
            .collect()
    }

    fn d_bit(&self, j: usize) -> i64 {
        ((self.d >> j) & 1) as i64
    }

    fn s_bit(&self, i: usize, k: usize) -> i64 {
        ((self.s[i] >> k) & 1) as i64
    }
}

/// `(1/sqrt N) (x)_i (|0> + w_N^(z_i) |1>)`, built factor by factor.
pub fn coset_state(inst: &DhspInstance) -> Result<QState> {
    let modulus = inst.modulus() as f64;
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for &zi in &inst.z() {
        let phase = omega(zi as f64, modulus);
        let mut next = Vec::with_capacity(amps.len() * 2);
        next.extend(amps.iter().copied());
        next.extend(amps.iter().map(|a| a * phase));
        amps = next;
    }
    let scale = 1.0 / modulus.sqrt();
    amps.iter_mut().for_each(|a| *a *= scale);
    QState::from_amplitudes(inst.n, amps)
}

/// The same state from `(1/sqrt N) sum_x w_N^(z.x) |x>` with `z.x` reduced exactly.
pub fn coset_state_sum(inst: &DhspInstance) -> Result<QState> {
    let modulus = inst.modulus();
    let z = inst.z();
    let scale = 1.0 / (modulus as f64).sqrt();
    let amps = (0..modulus as usize)
        .map(|x| {
            let t = (0..inst.n)
                .filter(|&i| bit(x, i) == 1)
                .map(|i| z[i])
                .sum::<u64>()
                % modulus;
            omega(t as f64, modulus as f64) * scale
        })
        .collect();
    QState::from_amplitudes(inst.n, amps)
}

/// Lower-triangular `Phi` from the samples: `phi_ii = 2^(n-1)` and
/// `phi_ji = S_{n-j-1, i}` for `j > i`.
pub fn phi_from_samples(inst: &DhspInstance) -> PhaseMatrix {
    let n = inst.n;
    let rows = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| match j.cmp(&i) {
                    std::cmp::Ordering::Equal => (inst.modulus() / 2) as f64,
                    std::cmp::Ordering::Greater => inst.shifted(n - j - 1, i) as f64,
                    std::cmp::Ordering::Less => 0.0,
                })
                .collect()
        })
        .collect();
    PhaseMatrix::new(rows).expect("entries are below N")
}

/// `Phi_0 = (2^0, .., 2^(n-1))^T (s_0, .., s_{n-1})`, so that `d Phi_0 = (d s_i)_i`.
pub fn phi0_matrix(inst: &DhspInstance) -> PhaseMatrix {
    let rows = (0..inst.n)
        .map(|j| inst.s.iter().map(|&s| (s << j) as f64).collect())
        .collect();
    PhaseMatrix::new(rows).expect("entries are below 2^(2n)")
}

fn conj_transform(phi: PhaseMatrix, limits: &Limits) -> Result<DenseUnitary> {
    let spec = GqftSpec::general(phi, limits)?;
    let g = gqft_dense(&spec, limits)?;
    DenseUnitary::trusted(g.n(), g.matrix().conj())
}

/// Coset state followed by `conj(G_Phi)` for `Phi` from the samples.
pub fn run_procedure(inst: &DhspInstance, limits: &Limits) -> Result<QState> {
    run_procedure_with(inst, &phi_from_samples(inst), limits)
}

/// Coset state followed by `conj(G_Phi)` for any `Phi` whose transform is unitary.
pub fn run_procedure_with(inst: &DhspInstance, phi: &PhaseMatrix, limits: &Limits) -> Result<QState> {
    if phi.n() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            found: phi.n(),
        });
    }
    limits.check_dense("run_procedure", inst.n)?;
    apply_dense(&coset_state(inst)?, &conj_transform(phi.clone(), limits)?)
}

/// `(1/N) sum_x w_N^((z - y Phi) x^T)` by direct summation.
pub fn outcome_amplitude(inst: &DhspInstance, phi: &PhaseMatrix, y: usize) -> Complex64 {
    let modulus = inst.modulus() as f64;
    let w = residual(inst, phi, y);
    let total: Complex64 = (0..inst.modulus() as usize)
        .map(|x| {
            let t: f64 = (0..inst.n).filter(|&i| bit(x, i) == 1).map(|i| w[i]).sum();
            omega(t, modulus)
        })
        .sum();
    total / modulus
}

// z - y Phi, entrywise
fn residual(inst: &DhspInstance, phi: &PhaseMatrix, y: usize) -> Vec<f64> {
    let z = inst.z();
    (0..inst.n)
        .map(|i| {
            let ty: f64 = (0..inst.n).filter(|&j| bit(y, j) == 1).map(|j| phi.get(j, i)).sum();
            z[i] as f64 - ty
        })
        .collect()
}

fn cos2_product(w: &[f64], modulus: f64) -> f64 {
    w.iter()
        .map(|&t| (t.rem_euclid(modulus) * PI / modulus).cos().powi(2))
        .product()
}

/// `prod_i cos^2((z_i - (y Phi)_i) pi / N)` for `Phi` from the samples.
pub fn success_probability(inst: &DhspInstance, y: usize) -> Result<f64> {
    success_probability_with(inst, &phi_from_samples(inst), y)
}

/// Product form for any `Phi`.
pub fn success_probability_with(inst: &DhspInstance, phi: &PhaseMatrix, y: usize) -> Result<f64> {
    if y as u64 >= inst.modulus() {
        return Err(Error::InvalidInput(format!(
            "outcome {y} out of range for {} qubits",
            inst.n
        )));
    }
    if phi.n() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            found: phi.n(),
        });
    }
    Ok(cos2_product(&residual(inst, phi, y), inst.modulus() as f64))
}

/// `Prob(y = d) = (1/N^2) |sum_x w_N^(d (Phi_0 - Phi) x^T)|^2` in product form.
pub fn phi0_probability(inst: &DhspInstance, phi: &PhaseMatrix) -> Result<f64> {
    if phi.n() != inst.n {
        return Err(Error::DimensionMismatch {
            expected: inst.n,
            found: phi.n(),
        });
    }
    let phi0 = phi0_matrix(inst);
    let d = inst.d as usize;
    let w: Vec<f64> = (0..inst.n)
        .map(|i| {
            (0..inst.n)
                .filter(|&j| bit(d, j) == 1)
                .map(|j| phi0.get(j, i) - phi.get(j, i))
                .sum()
        })
        .collect();
    Ok(cos2_product(&w, inst.modulus() as f64))
}

/// Probability of every outcome from the product form.
pub fn outcome_distribution(inst: &DhspInstance) -> Result<Vec<f64>> {
    let phi = phi_from_samples(inst);
    (0..inst.modulus() as usize)
        .map(|y| success_probability_with(inst, &phi, y))
        .collect()
}

/// `lambda_i = sum_{m=n-i-1}^{n-1} S_mi d_m - 2^(n-1) d_{n-i-1}`.
///
/// Equals `d s_i - (y Phi)_i` mod `N` at the outcome `y = reverse(d)`.
pub fn lambda_vector(inst: &DhspInstance) -> Vec<i64> {
    let n = inst.n;
    let half = (inst.modulus() / 2) as i64;
    (0..n)
        .map(|i| {
            let sum: i64 = (n - i - 1..n)
                .map(|m| inst.shifted(m, i) as i64 * inst.d_bit(m))
                .sum();
            sum - half * inst.d_bit(n - i - 1)
        })
        .collect()
}

/// `D_ik = sum_{j=0}^{i-k} d_{n-i+j-1} 2^(n-i+j-1)` for `k = 0..=i`.
pub fn d_vector(inst: &DhspInstance, i: usize) -> Vec<i64> {
    let n = inst.n;
    (0..=i)
        .map(|k| {
            (0..=i - k)
                .map(|j| {
                    let m = n - i + j - 1;
                    inst.d_bit(m) << m
                })
                .sum()
        })
        .collect()
}

/// `s~_ik = 2^k s_ik` for `k < i` and `2^k (s_ii - 1)` for `k = i`.
pub fn s_tilde(inst: &DhspInstance, i: usize) -> Vec<i64> {
    (0..=i)
        .map(|k| {
            let b = inst.s_bit(i, k) - i64::from(k == i);
            b << k
        })
        .collect()
}

/// `lambda_i = s~_i . D_i`, exactly.
pub fn lambda_inner(inst: &DhspInstance) -> Vec<i64> {
    (0..inst.n)
        .map(|i| {
            s_tilde(inst, i)
                .iter()
                .zip(d_vector(inst, i))
                .map(|(a, b)| a * b)
                .sum()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DhspAnalysis {
    pub phi: PhaseMatrix,
    pub lambda: Vec<i64>,
    /// Probability of measuring `reverse(d)`.
    pub p_success: f64,
    /// Nonzero entries of each `D_i`.
    pub f_per_row: Vec<usize>,
    pub f: usize,
}

pub fn analyze(inst: &DhspInstance) -> DhspAnalysis {
    let lambda = lambda_vector(inst);
    let modulus = inst.modulus() as f64;
    let p_success = lambda
        .iter()
        .map(|&l| ((l as f64).rem_euclid(modulus) * PI / modulus).cos().powi(2))
        .product();
    let f_per_row: Vec<usize> = (0..inst.n)
        .map(|i| d_vector(inst, i).iter().filter(|&&v| v != 0).count())
        .collect();
    DhspAnalysis {
        phi: phi_from_samples(inst),
        lambda,
        p_success,
        f: f_per_row.iter().copied().max().unwrap_or(0),
        f_per_row,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recovery {
    /// Most frequent bit-reversed outcome; ties go to the smallest value.
    pub d_hat: u64,
    pub empirical_rate: f64,
    pub analytic_p: f64,
    /// Raw measurement outcomes `y`.
    pub histogram: Histogram,
}

/// Measures the procedure output `trials` times and reads `d` as `reverse(y)`.
pub fn recover_d(inst: &DhspInstance, trials: u64, seed: u64, limits: &Limits) -> Result<Recovery> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let out = run_procedure(inst, limits)?;
    let histogram = measure_all(&out, seed, trials)?;
    let mut votes: BTreeMap<u64, u64> = BTreeMap::new();
    for (&y, &count) in &histogram {
        *votes.entry(reverse(y, inst.n) as u64).or_default() += count;
    }
    // BTreeMap iterates ascending, so the first maximum is the smallest d
    let (d_hat, _) = votes
        .iter()
        .fold((0, 0), |best, (&d, &c)| if c > best.1 { (d, c) } else { best });
    let hits = votes.get(&inst.d).copied().unwrap_or(0);
    Ok(Recovery {
        d_hat,
        empirical_rate: hits as f64 / trials as f64,
        analytic_p: success_probability(inst, reverse(inst.d as usize, inst.n))?,
        histogram,
    })
}

/// Per-row exhaustive search for samples that make every `lambda_i`
/// vanish mod `N` for every `d`.
///
/// `lambda_i` only involves `s_i`, so each row is searched on its own and
/// the smallest qualifying value is kept. The result is the unit
/// upper-triangular family's canonical member `s_i = 2^i`.
pub fn search_perfect_samples(n: usize) -> Result<Vec<u64>> {
    if n == 0 || n > 8 {
        return Err(Error::InvalidInput(format!(
            "exhaustive search supports n in 1..=8, got {n}"
        )));
    }
    let modulus = 1u64 << n;
    let mut found = vec![0u64; n];
    for i in 0..n {
        let mut s = vec![0u64; n];
        found[i] = (0..modulus)
            .find(|&cand| {
                s[i] = cand;
                (0..modulus).all(|d| {
                    let inst = DhspInstance::new(n, d, s.clone()).expect("in range");
                    lambda_vector(&inst)[i].rem_euclid(modulus as i64) == 0
                })
            })
            .ok_or_else(|| Error::InvalidInput(format!("no perfect sample for row {i}")))?;
    }
    Ok(found)
}

/// Whether the bit matrix of `s` (row `i` = bits of `s_i`) has `s_ii = 1`
/// and `s_ik = 0` for `k < i`.
pub fn is_unit_upper_triangular(s: &[u64]) -> bool {
    s.iter()
        .enumerate()
        .all(|(i, &v)| (v >> i) & 1 == 1 && v & ((1u64 << i) - 1) == 0)
}

/// How the known samples are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SampleStrategy {
    /// Unit upper-triangular rows with random bits above the diagonal.
    Perfect,
    /// Uniform in `[0, N)`.
    Random,
    /// The first `k` rows perfect, the rest uniform.
    Mixed(usize),
}

/// Draws `n` samples with the given strategy.
pub fn draw_samples<R: Rng>(n: usize, strategy: SampleStrategy, rng: &mut R) -> Result<Vec<u64>> {
    if n == 0 || n > MAX_N {
        return Err(Error::InvalidInput(format!("n must be in 1..={MAX_N}, got {n}")));
    }
    let perfect_rows = match strategy {
        SampleStrategy::Perfect => n,
        SampleStrategy::Random => 0,
        SampleStrategy::Mixed(k) if k <= n => k,
        SampleStrategy::Mixed(k) => {
            return Err(Error::InvalidInput(format!("mixed:{k} exceeds n = {n}")))
        }
    };
    let modulus = 1u64 << n;
    Ok((0..n)
        .map(|i| {
            if i < perfect_rows {
                let upper = rng.gen_range(0..modulus >> (i + 1));
                (1u64 << i) | (upper << (i + 1))
            } else {
                rng.gen_range(0..modulus)
            }
        })
        .collect())
}

/// [`draw_samples`] on the seeded stream reserved for sample generation.
pub fn seeded_samples(n: usize, strategy: SampleStrategy, seed: u64) -> Result<Vec<u64>> {
    draw_samples(n, strategy, &mut rng::stream(seed, 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phasemat::check_triangular;

    fn inst(n: usize, d: u64, s: &[u64]) -> DhspInstance {
        DhspInstance::new(n, d, s.to_vec()).unwrap()
    }

    #[test]
    fn instance_validation() {
        assert!(DhspInstance::new(0, 0, vec![]).is_err());
        assert!(DhspInstance::new(2, 4, vec![0, 0]).is_err());
        assert!(DhspInstance::new(2, 1, vec![0]).is_err());
        assert!(DhspInstance::new(2, 1, vec![0, 4]).is_err());
    }

    #[test]
    fn z_matches_shift_sums() {
        let x = inst(4, 11, &[3, 7, 12, 9]);
        assert_eq!(x.z(), vec![1, 13, 4, 3]);
        assert_eq!(x.z_from_shifts(), x.z());
    }

    #[test]
    fn coset_examples() {
        let u = coset_state(&inst(2, 0, &[1, 3])).unwrap();
        assert!(u.amplitudes().iter().all(|a| (a - 0.5).norm() < 1e-15));
        let s = coset_state(&inst(1, 1, &[1])).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amplitude(1) + r).norm() < 1e-15);
        // z = (3, 6 mod 4 = 2)
        let x = inst(2, 3, &[1, 2]);
        let t = coset_state(&x).unwrap();
        assert!(t.max_abs_diff(&coset_state_sum(&x).unwrap()) < 1e-12);
        assert!((t.amplitude(0b01) - omega(3.0, 4.0) * 0.5).norm() < 1e-15);
        assert!((t.amplitude(0b11) - omega(5.0, 4.0) * 0.5).norm() < 1e-15);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_from_samples(&inst(1, 0, &[1])).rows(), vec![vec![1.0]]);
        assert_eq!(
            phi_from_samples(&inst(2, 0, &[7 % 4, 1])).rows(),
            vec![vec![2.0, 0.0], vec![3.0, 2.0]]
        );
        let x = inst(4, 5, &[3, 10, 6, 15]);
        assert!(check_triangular(&phi_from_samples(&x)).valid);
        assert_eq!(phi0_matrix(&inst(2, 0, &[1, 2])).rows(), vec![vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert_eq!(phi0_matrix(&inst(1, 0, &[1])).rows(), vec![vec![1.0]]);
    }

    #[test]
    fn d_zero_lands_on_zero() {
        let l = Limits::default();
        let out = run_procedure(&inst(3, 0, &[5, 2, 7]), &l).unwrap();
        assert!((out.amplitude(0).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn amplitudes_match_direct_sum() {
        let l = Limits::default();
        let x = inst(2, 1, &[1, 1]);
        let out = run_procedure(&x, &l).unwrap();
        let phi = phi_from_samples(&x);
        for y in 0..4 {
            assert!((out.amplitude(y) - outcome_amplitude(&x, &phi, y)).norm() < 1e-12);
            let p = success_probability(&x, y).unwrap();
            assert!((p - out.amplitude(y).norm_sqr()).abs() < 1e-12);
        }
        let total: f64 = outcome_distribution(&x).unwrap().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lambda_forms_agree() {
        for d in 0..8 {
            for s0 in 0..8 {
                let x = inst(3, d, &[s0, (s0 * 5 + 3) % 8, (s0 * 3 + 1) % 8]);
                assert_eq!(lambda_vector(&x), lambda_inner(&x));
                // lambda is d s_i - (y Phi)_i at y = reverse(d)
                let phi = phi_from_samples(&x);
                let y = reverse(d as usize, 3);
                let w = residual(&x, &phi, y);
                for (l, r) in lambda_vector(&x).iter().zip(w) {
                    assert_eq!((*l as f64 - r).rem_euclid(8.0), 0.0);
                }
                let a = analyze(&x);
                assert!((a.p_success - success_probability(&x, y).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lambda_zero_for_n2_two_form() {
        // n = 2: lambda_0 = 2 (s_00 - 1) d_1
        for s0 in 0..4 {
            for d in 0..4 {
                let x = inst(2, d, &[s0, 3]);
                let want = 2 * ((s0 & 1) as i64 - 1) * ((d >> 1) & 1) as i64;
                assert_eq!(lambda_vector(&x)[0], want);
            }
        }
    }

    #[test]
    fn perfect_samples_are_deterministic() {
        for n in 1..=4 {
            let s = search_perfect_samples(n).unwrap();
            assert!(is_unit_upper_triangular(&s));
            assert_eq!(s, (0..n).map(|i| 1u64 << i).collect::<Vec<_>>());
            for d in 0..1u64 << n {
                let x = inst(n, d, &s);
                assert!(lambda_vector(&x).iter().all(|&l| l == 0));
                let r = recover_d(&x, 50, 7, &Limits::default()).unwrap();
                assert_eq!(r.d_hat, d);
                assert_eq!(r.empirical_rate, 1.0);
                assert!((r.analytic_p - 1.0).abs() < 1e-12);
            }
        }
        assert!(search_perfect_samples(9).is_err());
    }

    #[test]
    fn drawn_perfect_samples_are_triangular() {
        for seed in 0..20 {
            let s = seeded_samples(6, SampleStrategy::Perfect, seed).unwrap();
            assert!(is_unit_upper_triangular(&s));
            let m = seeded_samples(6, SampleStrategy::Mixed(3), seed).unwrap();
            assert!(is_unit_upper_triangular(&m[..3]));
        }
        assert!(seeded_samples(3, SampleStrategy::Mixed(4), 0).is_err());
        assert_eq!(
            seeded_samples(5, SampleStrategy::Random, 3).unwrap(),
            seeded_samples(5, SampleStrategy::Random, 3).unwrap()
        );
    }

    #[test]
    fn d_zero_always_recovered() {
        let r = recover_d(&inst(3, 0, &[6, 3, 5]), 40, 1, &Limits::default()).unwrap();
        assert_eq!(r.d_hat, 0);
        assert_eq!(r.empirical_rate, 1.0);
    }

    #[test]
    fn phi0_formula_matches_amplitude_at_d() {
        let l = Limits::default();
        let x = inst(3, 5, &[3, 6, 1]);
        let phi = PhaseMatrix::new(vec![
            vec![4.0, 0.0, 0.0],
            vec![1.25, 4.0, 0.0],
            vec![-2.0, 0.5, 4.0],
        ])
        .unwrap();
        let out = run_procedure_with(&x, &phi, &l).unwrap();
        let p = phi0_probability(&x, &phi).unwrap();
        assert!((p - out.amplitude(5).norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn recovery_rejects_zero_trials() {
        assert!(recover_d(&inst(1, 0, &[1]), 0, 0, &Limits::default()).is_err());
    }
}
