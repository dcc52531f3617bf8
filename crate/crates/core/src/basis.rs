//! The Fibonacci-constrained configuration space.
//!
//! A configuration is an `N`-bit mask where bit `x` holds the spin at site `x`
//! (`1` = excited). Valid configurations have no two adjacent excitations under
//! periodic boundary conditions; there are `F(N-1) + F(N+1)` of them.

use std::fmt;

use crate::error::{Error, Result};

pub const MIN_SITES: usize = 4;
pub const MAX_SITES: usize = 30;

/// Fibonacci number with `F(1) = F(2) = 1`.
pub fn fibonacci(n: usize) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// Size of the constrained space for a periodic chain of `n` sites.
pub fn constrained_dimension(n: usize) -> u64 {
    assert!(n >= 2, "dimension formula needs n >= 2");
    fibonacci(n - 1) + fibonacci(n + 1)
}

pub(crate) fn check_size(n_sites: usize) -> Result<()> {
    if n_sites % 2 != 0 || !(MIN_SITES..=MAX_SITES).contains(&n_sites) {
        return Err(Error::InvalidSize(n_sites));
    }
    Ok(())
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u32 {
    if n == 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Rotate an `n`-bit mask so that bit `x` moves to bit `x + by` (mod `n`).
#[inline]
pub(crate) fn rotate_up(bits: u32, by: usize, n: usize) -> u32 {
    let by = by % n;
    if by == 0 {
        return bits;
    }
    ((bits << by) | (bits >> (n - by))) & full_mask(n)
}

/// True when no two periodic neighbours are both set.
#[inline]
pub fn is_blockade_free(bits: u32, n: usize) -> bool {
    bits & rotate_up(bits, 1, n) == 0
}

/// Number of maximal runs of set bits in a periodic `n`-bit mask.
///
/// A mask with every bit set is a single run.
pub fn periodic_runs(mask: u32, n: usize) -> usize {
    let mask = mask & full_mask(n);
    if mask == 0 {
        return 0;
    }
    if mask == full_mask(n) {
        return 1;
    }
    // a run starts wherever a set bit has an unset left neighbour
    let starts = mask & !rotate_up(mask, 1, n);
    starts.count_ones() as usize
}

/// One basis configuration of an `N`-site chain.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfig {
    bits: u32,
    n_sites: u8,
}

impl SpinConfig {
    pub fn new(bits: u32, n_sites: usize) -> Result<Self> {
        check_size(n_sites)?;
        if bits & !full_mask(n_sites) != 0 {
            return Err(Error::ConstraintViolation {
                bits,
                site: (32 - bits.leading_zeros() - 1) as usize,
            });
        }
        if !is_blockade_free(bits, n_sites) {
            let clash = bits & rotate_up(bits, 1, n_sites);
            // bit x+1 set in `clash` means sites x and x+1 are both excited
            let upper = clash.trailing_zeros() as usize;
            let site = (upper + n_sites - 1) % n_sites;
            return Err(Error::ConstraintViolation { bits, site });
        }
        Ok(Self {
            bits,
            n_sites: n_sites as u8,
        })
    }

    /// Build from a string of `0`/`1` characters, site 0 leftmost.
    pub fn from_bit_string(s: &str) -> Result<Self> {
        let n = s.len();
        let mut bits = 0u32;
        for (x, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << x,
                _ => return Err(Error::StateSpec(s.to_string())),
            }
        }
        Self::new(bits, n)
    }

    pub(crate) fn from_raw(bits: u32, n_sites: usize) -> Self {
        debug_assert!(is_blockade_free(bits, n_sites));
        Self {
            bits,
            n_sites: n_sites as u8,
        }
    }

    pub fn bits(self) -> u32 {
        self.bits
    }

    pub fn n_sites(self) -> usize {
        self.n_sites as usize
    }

    /// Spin at site `x` (periodic).
    pub fn site(self, x: isize) -> bool {
        let n = self.n_sites() as isize;
        (self.bits >> x.rem_euclid(n)) & 1 == 1
    }

    pub fn excitations(self) -> u32 {
        self.bits.count_ones()
    }

    /// Cyclic shift by two sites: the spin at `x` moves to `x + 2`.
    pub fn translate2(self) -> Self {
        Self::from_raw(rotate_up(self.bits, 2, self.n_sites()), self.n_sites())
    }

    /// Reflection `x -> N - x - 2`.
    pub fn invert(self) -> Self {
        let n = self.n_sites();
        let mut out = 0u32;
        for x in 0..n {
            if (self.bits >> x) & 1 == 1 {
                out |= 1 << ((2 * n - x - 2) % n);
            }
        }
        Self::from_raw(out, n)
    }

    /// Bit `x` of the result is `s(x-1) XOR s(x+1)`.
    pub fn xor_string(self) -> u32 {
        let n = self.n_sites();
        rotate_up(self.bits, 1, n) ^ rotate_up(self.bits, n - 1, n)
    }

    /// Number of domain walls: runs of ones in the XOR string.
    pub fn wall_count(self) -> usize {
        periodic_runs(self.xor_string(), self.n_sites())
    }

    /// Site 0 leftmost.
    pub fn to_bit_string(self) -> String {
        (0..self.n_sites())
            .map(|x| if (self.bits >> x) & 1 == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinConfig({})", self.to_bit_string())
    }
}

impl fmt::Display for SpinConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

/// All valid configurations of an `N`-site chain, sorted by mask value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibonacciBasis {
    n_sites: usize,
    configs: Vec<u32>,
}

impl FibonacciBasis {
    pub fn new(n_sites: usize) -> Result<Self> {
        check_size(n_sites)?;
        let mut configs = Vec::with_capacity(constrained_dimension(n_sites) as usize);
        open_chain_masks(n_sites, &mut configs);
        // the open-chain walk allows sites 0 and N-1 together
        configs.retain(|&c| !((c & 1 == 1) && (c >> (n_sites - 1)) & 1 == 1));
        Ok(Self { n_sites, configs })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.configs.len()
    }

    pub fn configs(&self) -> &[u32] {
        &self.configs
    }

    pub fn config(&self, index: usize) -> SpinConfig {
        SpinConfig::from_raw(self.configs[index], self.n_sites)
    }

    pub fn index_of(&self, bits: u32) -> Option<usize> {
        self.configs.binary_search(&bits).ok()
    }

    pub fn index_of_config(&self, config: SpinConfig) -> Option<usize> {
        if config.n_sites() != self.n_sites {
            return None;
        }
        self.index_of(config.bits())
    }

    pub fn iter(&self) -> impl Iterator<Item = SpinConfig> + '_ {
        self.configs
            .iter()
            .map(move |&c| SpinConfig::from_raw(c, self.n_sites))
    }

    /// Index permutation induced by a configuration map.
    pub fn permutation(&self, map: impl Fn(SpinConfig) -> SpinConfig) -> Vec<usize> {
        self.iter()
            .map(|c| {
                self.index_of_config(map(c))
                    .expect("symmetry maps the basis onto itself")
            })
            .collect()
    }
}

/// Convenience wrapper around [`FibonacciBasis::new`].
pub fn build_basis(n_sites: usize) -> Result<FibonacciBasis> {
    FibonacciBasis::new(n_sites)
}

/// Ascending enumeration of open-chain masks without adjacent ones.
fn open_chain_masks(n: usize, out: &mut Vec<u32>) {
    fn walk(pos: usize, prev_set: bool, acc: u32, out: &mut Vec<u32>) {
        // decide bits from the most significant down so the output is sorted
        let acc0 = acc;
        if pos == 0 {
            out.push(acc0);
            if !prev_set {
                out.push(acc | 1);
            }
            return;
        }
        walk(pos - 1, false, acc0, out);
        if !prev_set {
            walk(pos - 1, true, acc | (1 << pos), out);
        }
    }
    walk(n - 1, false, 0, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(n: usize) -> Vec<u32> {
        (0..1u32 << n).filter(|&c| is_blockade_free(c, n)).collect()
    }

    #[test]
    fn fibonacci_numbers() {
        let first: Vec<u64> = (1..=10).map(fibonacci).collect();
        assert_eq!(first, vec![1, 1, 2, 3, 5, 8, 13, 21, 34, 55]);
        assert_eq!(fibonacci(17), 1597);
        assert_eq!(fibonacci(19), 4181);
    }

    #[test]
    fn n4_configs() {
        let basis = build_basis(4).unwrap();
        let strings: Vec<String> = basis.iter().map(|c| c.to_bit_string()).collect();
        let mut expected = vec!["0000", "0001", "0010", "0100", "1000", "0101", "1010"];
        let mut got: Vec<&str> = strings.iter().map(|s| s.as_str()).collect();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(basis.configs(), brute_force(4).as_slice());
    }

    #[test]
    fn two_site_ring_has_three_states() {
        assert_eq!(brute_force(2).len(), 3);
        assert_eq!(constrained_dimension(2), 3);
    }

    #[test]
    fn n18_dimension() {
        assert_eq!(build_basis(18).unwrap().dim(), 5778);
    }

    #[test]
    fn rejects_bad_sizes() {
        for n in [0, 2, 3, 5, 31, 32] {
            assert!(matches!(build_basis(n), Err(Error::InvalidSize(_))));
        }
    }

    #[test]
    fn matches_brute_force_and_sorted() {
        for n in (4..=16).step_by(2) {
            let basis = build_basis(n).unwrap();
            assert_eq!(basis.configs(), brute_force(n).as_slice(), "N={n}");
            for (i, &c) in basis.configs().iter().enumerate() {
                assert_eq!(basis.index_of(c), Some(i));
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(SpinConfig::new(0b11, 6).is_err());
        match SpinConfig::new(0b100001, 6) {
            Err(Error::ConstraintViolation { site, .. }) => assert_eq!(site, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(SpinConfig::new(0b1000000, 6).is_err());
        assert!(SpinConfig::new(0b010101, 6).is_ok());
        assert!(SpinConfig::new(1 << 7, 6).is_err());
    }

    #[test]
    fn translate2_examples() {
        let vacuum = SpinConfig::new(0, 6).unwrap();
        assert_eq!(vacuum.translate2(), vacuum);
        let c = SpinConfig::from_bit_string("100000").unwrap();
        assert_eq!(c.translate2().to_bit_string(), "001000");
        let g = SpinConfig::from_bit_string("1001000000").unwrap();
        let mut h = g;
        for _ in 0..5 {
            h = h.translate2();
        }
        assert_eq!(h, g);
    }

    #[test]
    fn invert_examples() {
        let c = SpinConfig::from_bit_string("100000").unwrap();
        assert_eq!(c.invert().to_bit_string(), "000010");
        for c in build_basis(10).unwrap().iter() {
            assert_eq!(c.invert().invert(), c);
        }
    }

    #[test]
    fn xor_string_examples() {
        let n = 10;
        let a = SpinConfig::new(0, n).unwrap();
        let b = SpinConfig::new(0b0101010101, n).unwrap();
        assert_eq!(a.xor_string(), 0);
        assert_eq!(b.xor_string(), 0);
        let single = SpinConfig::new(1 << 4, n).unwrap();
        assert_eq!(single.xor_string(), (1 << 3) | (1 << 5));
        let wrap = SpinConfig::new(1, n).unwrap();
        assert_eq!(wrap.xor_string(), (1 << 9) | (1 << 1));
    }

    #[test]
    fn wall_count_examples() {
        let n = 12;
        for bits in [0u32, 0b010101010101, 0b101010101010] {
            assert_eq!(SpinConfig::new(bits, n).unwrap().wall_count(), 0);
        }
        assert_eq!(SpinConfig::new(1 << 5, n).unwrap().wall_count(), 2);
        let glider = SpinConfig::new(0b1001, n).unwrap();
        assert_eq!(glider.wall_count(), 3);
    }

    #[test]
    fn periodic_runs_wraps() {
        assert_eq!(periodic_runs(0b1000_0001, 8), 1);
        assert_eq!(periodic_runs(0b1111_1111, 8), 1);
        assert_eq!(periodic_runs(0b0101_0101, 8), 4);
        assert_eq!(periodic_runs(0, 8), 0);
    }

    #[test]
    fn bit_string_round_trip() {
        let c = SpinConfig::from_bit_string("0100100000").unwrap();
        assert_eq!(c.bits(), (1 << 1) | (1 << 4));
        assert_eq!(c.to_bit_string(), "0100100000");
        assert!(SpinConfig::from_bit_string("01x0").is_err());
    }
}
