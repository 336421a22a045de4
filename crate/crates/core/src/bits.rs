//! Bit helpers for the little-endian basis convention.

/// Bit `i` of `k` as 0 or 1.
#[inline]
pub fn bit(k: usize, i: usize) -> usize {
    (k >> i) & 1
}

/// Little-endian bit vector `(k_0, .., k_{n-1})`.
pub fn to_bits(k: usize, n: usize) -> Vec<u8> {
    (0..n).map(|i| bit(k, i) as u8).collect()
}

/// Inverse of [`to_bits`]. Entries other than 0 and 1 are treated as 1.
pub fn from_bits(bits: &[u8]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (usize::from(b != 0) << i))
}

/// Reverses the low `n` bits of `k`.
pub fn reverse(k: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, i| acc | (bit(k, i) << (n - 1 - i)))
}

/// `2^n` as a float.
#[inline]
pub fn pow2(n: usize) -> f64 {
    (n as f64).exp2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reverse_is_an_involution() {
        for n in 1..=6 {
            for k in 0..(1 << n) {
                assert_eq!(reverse(reverse(k, n), n), k);
            }
        }
        assert_eq!(reverse(0b001, 3), 0b100);
        assert_eq!(reverse(0b110, 3), 0b011);
    }

    #[test]
    fn bits_round_trip() {
        assert_eq!(to_bits(2, 2), vec![0, 1]);
        for k in 0..32 {
            assert_eq!(from_bits(&to_bits(k, 5)), k);
        }
    }
}
