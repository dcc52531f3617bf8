//! The integrable point `theta = pi/2`: rule-201 dynamics on the basis.
//!
//! At the classical point every gate is `-i X` on its active pairs, so one
//! step sends a configuration to another one times `(-i)^flips`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{FibonacciBasis, SpinConfig};
use crate::error::{Error, Result};
use crate::evolve::StateVector;

/// Basis permutation of one classical step plus the number of flips it made.
#[derive(Clone, Debug)]
pub struct ClassicalStep {
    permutation: Vec<usize>,
    flip_count: Vec<u32>,
}

impl ClassicalStep {
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn flip_count(&self) -> &[u32] {
        &self.flip_count
    }

    pub fn image(&self, index: usize) -> usize {
        self.permutation[index]
    }

    /// Phase picked up by the quantum step at `theta = pi/2`.
    pub fn phase(&self, index: usize) -> Complex64 {
        minus_i_pow(self.flip_count[index])
    }
}

pub(crate) fn minus_i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Apply one sublayer to a raw mask; returns the new mask and the flips made.
fn sublayer(bits: u32, n: usize, parity: usize) -> (u32, u32) {
    let mut out = bits;
    let mut flips = 0;
    for x in (parity..n).step_by(2) {
        let left = (bits >> ((x + n - 1) % n)) & 1;
        let right = (bits >> ((x + 1) % n)) & 1;
        if left == 0 && right == 0 {
            out ^= 1 << x;
            flips += 1;
        }
    }
    (out, flips)
}

/// Classical image of one configuration and the flip count.
pub fn classical_image(config: SpinConfig) -> (SpinConfig, u32) {
    let n = config.n_sites();
    let (mid, even) = sublayer(config.bits(), n, 0);
    let (out, odd) = sublayer(mid, n, 1);
    (
        SpinConfig::new(out, n).expect("rule 201 preserves the constraint"),
        even + odd,
    )
}

pub fn classical_step(basis: &FibonacciBasis) -> ClassicalStep {
    let (permutation, flip_count) = basis
        .iter()
        .map(|c| {
            let (image, flips) = classical_image(c);
            (
                basis
                    .index_of_config(image)
                    .expect("image lies in the basis"),
                flips,
            )
        })
        .unzip();
    ClassicalStep {
        permutation,
        flip_count,
    }
}

/// A closed orbit `s, U s, U^2 s, ...` of the classical step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    members: Vec<usize>,
}

impl Cycle {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn representative(&self) -> usize {
        self.members[0]
    }
}

/// Partition the basis into the cycles of the permutation, each starting at
/// its smallest index; cycles are ordered by that index.
pub fn find_cycles(step: &ClassicalStep) -> Vec<Cycle> {
    let dim = step.permutation.len();
    let mut seen = vec![false; dim];
    let mut cycles = Vec::new();
    for start in 0..dim {
        if seen[start] {
            continue;
        }
        let mut members = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            members.push(i);
            i = step.permutation[i];
        }
        debug_assert_eq!(i, start);
        cycles.push(Cycle { members });
    }
    cycles
}

/// Normalized `sum_l exp(i 2 pi p l / len) U^l(pi/2) |s>` over the cycle,
/// including the `(-i)^flips` phases of every step along the orbit.
pub fn cycle_eigenstate(
    cycle: &Cycle,
    p: usize,
    step: &ClassicalStep,
    basis: Arc<FibonacciBasis>,
) -> Result<StateVector> {
    let len = cycle.len();
    if p >= len {
        return Err(Error::PhaseIndexOutOfRange { p, len });
    }
    let mut state = StateVector::zeros(basis);
    let norm = 1.0 / (len as f64).sqrt();
    let mut accumulated = Complex64::new(1.0, 0.0);
    for (l, &member) in cycle.members.iter().enumerate() {
        let fourier = Complex64::from_polar(1.0, 2.0 * PI * (p * l) as f64 / len as f64);
        state.amps_mut()[member] = fourier * accumulated * norm;
        accumulated *= step.phase(member);
    }
    Ok(state)
}

/// Total phase of `U^len(pi/2)` on any member of the cycle.
pub fn cycle_phase(cycle: &Cycle, step: &ClassicalStep) -> Complex64 {
    let flips: u32 = cycle.members.iter().map(|&m| step.flip_count[m]).sum();
    minus_i_pow(flips)
}

/// Named initial configurations built on the `A` vacuum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NamedState {
    /// All sites empty.
    A,
    /// Excitations on even sites.
    BVacuum,
    /// Excitations on odd sites.
    CVacuum,
    /// A single flip at site `x`: two counter-propagating walls.
    DoubleWall(usize),
    /// Flips at `2x` and `2x + 3`: the right-moving glider.
    GliderBC(usize),
    /// Flips at `2x + 1` and `2x + 4`: the left-moving glider.
    GliderCB(usize),
    /// Union of non-overlapping patterns.
    Composite(Vec<NamedState>),
    /// An explicit configuration, site 0 leftmost.
    Bits(String),
}

impl NamedState {
    fn raw_mask(&self, n: usize) -> Result<u32> {
        let site = |x: usize| -> u32 { 1u32 << (x % n) };
        Ok(match self {
            NamedState::A => 0,
            NamedState::BVacuum => (0..n).step_by(2).map(site).sum(),
            NamedState::CVacuum => (1..n).step_by(2).map(site).sum(),
            NamedState::DoubleWall(x) => site(*x),
            NamedState::GliderBC(x) => site(2 * x) | site(2 * x + 3),
            NamedState::GliderCB(x) => site(2 * x + 1) | site(2 * x + 4),
            NamedState::Bits(s) => {
                if s.len() != n {
                    return Err(Error::StateSpec(format!(
                        "bit string of length {} for a chain of {n} sites",
                        s.len()
                    )));
                }
                SpinConfig::from_bit_string(s)?.bits()
            }
            NamedState::Composite(parts) => {
                let mut acc = 0u32;
                for part in parts {
                    let mask = part.raw_mask(n)?;
                    let neighbourhood = mask
                        | crate::basis::rotate_up(mask, 1, n)
                        | crate::basis::rotate_up(mask, n - 1, n);
                    let clash = acc & neighbourhood;
                    if clash != 0 {
                        return Err(Error::ConstraintViolation {
                            bits: acc | mask,
                            site: clash.trailing_zeros() as usize,
                        });
                    }
                    acc |= mask;
                }
                acc
            }
        })
    }

    pub fn config(&self, n_sites: usize) -> Result<SpinConfig> {
        crate::basis::check_size(n_sites)?;
        let mask = self.raw_mask(n_sites)?;
        SpinConfig::new(mask, n_sites)
    }
}

impl fmt::Display for NamedState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedState::A => f.write_str("A"),
            NamedState::BVacuum => f.write_str("B"),
            NamedState::CVacuum => f.write_str("C"),
            NamedState::DoubleWall(x) => write!(f, "double_wall:{x}"),
            NamedState::GliderBC(x) => write!(f, "glider_bc:{x}"),
            NamedState::GliderCB(x) => write!(f, "glider_cb:{x}"),
            NamedState::Bits(s) => write!(f, "bits:{s}"),
            NamedState::Composite(parts) => {
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("+")?;
                    }
                    write!(f, "{part}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for NamedState {
    type Err = Error;

    /// `A`, `B`, `C`, `double_wall:x`, `glider_bc:x`, `glider_cb:x`,
    /// `bits:0100..`, or several of these joined with `+`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains('+') {
            let parts = s
                .split('+')
                .map(str::parse)
                .collect::<Result<Vec<NamedState>>>()?;
            return Ok(NamedState::Composite(parts));
        }
        let bad = || Error::StateSpec(s.to_string());
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k.trim(), Some(a.trim())),
            None => (s, None),
        };
        let position = || -> Result<usize> { arg.ok_or_else(bad)?.parse().map_err(|_| bad()) };
        match (kind.to_ascii_lowercase().as_str(), arg) {
            ("a", None) => Ok(NamedState::A),
            ("b", None) => Ok(NamedState::BVacuum),
            ("c", None) => Ok(NamedState::CVacuum),
            ("double_wall", Some(_)) => Ok(NamedState::DoubleWall(position()?)),
            ("glider_bc" | "bc", Some(_)) => Ok(NamedState::GliderBC(position()?)),
            ("glider_cb" | "cb", Some(_)) => Ok(NamedState::GliderCB(position()?)),
            ("bits", Some(b)) => Ok(NamedState::Bits(b.to_string())),
            _ => Err(bad()),
        }
    }
}

pub fn make_named_state(kind: &NamedState, n_sites: usize) -> Result<SpinConfig> {
    kind.config(n_sites)
}
