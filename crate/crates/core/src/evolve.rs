//! Exact Floquet evolution in the constrained basis.
//!
//! One automaton step applies the three-site gate
//! `exp(-i theta P X P)` on every even site and then on every odd site.
//! Gates inside a sublayer commute, so their order is irrelevant.

use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;

use crate::basis::{FibonacciBasis, SpinConfig};
use crate::error::{Error, Result};

/// Rotation angle of the gate, stored together with its distance from the
/// classical point `theta = pi/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepParams {
    theta: f64,
    epsilon: f64,
}

impl StepParams {
    pub fn from_epsilon(epsilon: f64) -> Self {
        Self {
            theta: FRAC_PI_2 - epsilon,
            epsilon,
        }
    }

    pub fn from_theta(theta: f64) -> Self {
        Self {
            theta,
            epsilon: FRAC_PI_2 - theta,
        }
    }

    /// The integrable point `theta = pi/2`.
    pub fn classical() -> Self {
        Self::from_epsilon(0.0)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `(cos theta, sin theta)`, evaluated through epsilon so the classical
    /// point gives exactly `(0, 1)`.
    fn cos_sin(&self) -> (f64, f64) {
        (self.epsilon.sin(), self.epsilon.cos())
    }
}

/// Complex amplitudes over the basis of one chain.
#[derive(Clone, Debug)]
pub struct StateVector {
    basis: Arc<FibonacciBasis>,
    amps: Vec<Complex64>,
}

impl PartialEq for StateVector {
    fn eq(&self, other: &Self) -> bool {
        self.basis.n_sites() == other.basis.n_sites() && self.amps == other.amps
    }
}

impl StateVector {
    pub fn zeros(basis: Arc<FibonacciBasis>) -> Self {
        let amps = vec![Complex64::new(0.0, 0.0); basis.dim()];
        Self { basis, amps }
    }

    pub fn basis_state(basis: Arc<FibonacciBasis>, index: usize) -> Self {
        let mut state = Self::zeros(basis);
        state.amps[index] = Complex64::new(1.0, 0.0);
        state
    }

    pub fn from_config(basis: Arc<FibonacciBasis>, config: SpinConfig) -> Result<Self> {
        let index = basis
            .index_of_config(config)
            .ok_or(Error::NotInBasis(config.bits()))?;
        Ok(Self::basis_state(basis, index))
    }

    pub fn from_amplitudes(basis: Arc<FibonacciBasis>, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != basis.dim() {
            return Err(Error::Config(format!(
                "amplitude vector has length {}, basis has {}",
                amps.len(),
                basis.dim()
            )));
        }
        Ok(Self { basis, amps })
    }

    pub fn basis(&self) -> &FibonacciBasis {
        &self.basis
    }

    pub fn shared_basis(&self) -> &Arc<FibonacciBasis> {
        &self.basis
    }

    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn amplitude(&self, bits: u32) -> Complex64 {
        self.basis
            .index_of(bits)
            .map_or(Complex64::new(0.0, 0.0), |i| self.amps[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn normalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            for a in &mut self.amps {
                *a /= norm;
            }
        }
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&mut self, factor: Complex64) {
        for a in &mut self.amps {
            *a *= factor;
        }
    }

    /// Largest componentwise deviation from `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Precomputed gate action: for each site, the basis index pairs
/// `(s, s + flip at x)` whose neighbours of `x` are both empty.
#[derive(Debug)]
pub struct Propagator {
    basis: Arc<FibonacciBasis>,
    // per site, interleaved [low, high, low, high, ...]
    pairs: Vec<Vec<u32>>,
}

impl Propagator {
    pub fn new(basis: Arc<FibonacciBasis>) -> Self {
        let n = basis.n_sites();
        let mut pairs = vec![Vec::new(); n];
        for (x, table) in pairs.iter_mut().enumerate() {
            let left = 1u32 << ((x + n - 1) % n);
            let right = 1u32 << ((x + 1) % n);
            let centre = 1u32 << x;
            let blockers = left | right | centre;
            for (i, &c) in basis.configs().iter().enumerate() {
                if c & blockers == 0 {
                    let j = basis
                        .index_of(c | centre)
                        .expect("flipping a free site keeps the constraint");
                    table.push(i as u32);
                    table.push(j as u32);
                }
            }
        }
        Self { basis, pairs }
    }

    pub fn for_size(n_sites: usize) -> Result<Self> {
        Ok(Self::new(Arc::new(FibonacciBasis::new(n_sites)?)))
    }

    pub fn basis(&self) -> &Arc<FibonacciBasis> {
        &self.basis
    }

    pub fn n_sites(&self) -> usize {
        self.basis.n_sites()
    }

    /// Number of active pairs of the gate at site `x`.
    pub fn active_pairs(&self, x: usize) -> usize {
        self.pairs[x].len() / 2
    }

    /// Apply `exp(-i theta (PXP)_x)` in place.
    pub fn apply_gate(&self, state: &mut StateVector, x: usize, params: StepParams) {
        let (c, s) = params.cos_sin();
        self.rotate(state, x, c, s);
    }

    fn rotate(&self, state: &mut StateVector, x: usize, c: f64, s: f64) {
        let amps = &mut state.amps;
        for pair in self.pairs[x].chunks_exact(2) {
            let (i, j) = (pair[0] as usize, pair[1] as usize);
            let a = amps[i];
            let b = amps[j];
            // [[c, -i s], [-i s, c]]
            amps[i] = Complex64::new(c * a.re + s * b.im, c * a.im - s * b.re);
            amps[j] = Complex64::new(c * b.re + s * a.im, c * b.im - s * a.re);
        }
    }

    /// One automaton step: even sublayer, then odd sublayer.
    pub fn step(&self, state: &mut StateVector, params: StepParams) {
        let (c, s) = params.cos_sin();
        let n = self.n_sites();
        for x in (0..n).step_by(2) {
            self.rotate(state, x, c, s);
        }
        for x in (1..n).step_by(2) {
            self.rotate(state, x, c, s);
        }
    }

    /// Inverse of [`Propagator::step`]: odd sublayer with `-theta`, then even.
    pub fn step_adjoint(&self, state: &mut StateVector, params: StepParams) {
        let (c, s) = params.cos_sin();
        let n = self.n_sites();
        for x in (1..n).step_by(2) {
            self.rotate(state, x, c, -s);
        }
        for x in (0..n).step_by(2) {
            self.rotate(state, x, c, -s);
        }
    }

    pub fn steps(&self, state: &mut StateVector, params: StepParams, count: usize) {
        for _ in 0..count {
            self.step(state, params);
        }
    }

    pub fn evolve(&self, state: StateVector, params: StepParams, steps: usize) -> Trajectory<'_> {
        Trajectory::new(self, state, params, steps, Direction::Forward)
    }

    pub fn evolve_backward(
        &self,
        state: StateVector,
        params: StepParams,
        steps: usize,
    ) -> Trajectory<'_> {
        Trajectory::new(self, state, params, steps, Direction::Backward)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Streaming evolution: holds only the current state.
pub struct Trajectory<'a> {
    propagator: &'a Propagator,
    state: StateVector,
    params: StepParams,
    done: usize,
    total: usize,
    direction: Direction,
}

impl<'a> Trajectory<'a> {
    fn new(
        propagator: &'a Propagator,
        state: StateVector,
        params: StepParams,
        total: usize,
        direction: Direction,
    ) -> Self {
        Self {
            propagator,
            state,
            params,
            done: 0,
            total,
            direction,
        }
    }

    /// Steps applied so far.
    pub fn time(&self) -> usize {
        self.done
    }

    pub fn remaining(&self) -> usize {
        self.total - self.done
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// Apply the next step, or return `None` once all steps are done.
    pub fn advance(&mut self) -> Option<&StateVector> {
        if self.done == self.total {
            return None;
        }
        match self.direction {
            Direction::Forward => self.propagator.step(&mut self.state, self.params),
            Direction::Backward => self.propagator.step_adjoint(&mut self.state, self.params),
        }
        self.done += 1;
        Some(&self.state)
    }

    /// Visit the state at every time `0..=total` and return the final state.
    pub fn for_each(mut self, mut visit: impl FnMut(usize, &StateVector)) -> StateVector {
        visit(0, &self.state);
        while self.advance().is_some() {
            visit(self.done, &self.state);
        }
        self.state
    }

    pub fn run(mut self) -> StateVector {
        while self.advance().is_some() {}
        self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;

    fn setup(n: usize) -> Propagator {
        Propagator::new(Arc::new(build_basis(n).unwrap()))
    }

    fn vacuum_b(n: usize) -> u32 {
        (0..n).step_by(2).map(|x| 1u32 << x).sum()
    }

    fn random_state(basis: &Arc<FibonacciBasis>, seed: u64) -> StateVector {
        // small LCG keeps the test free of extra dependencies
        let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let amps = (0..basis.dim())
            .map(|_| Complex64::new(next(), next()))
            .collect();
        let mut s = StateVector::from_amplitudes(basis.clone(), amps).unwrap();
        s.normalize();
        s
    }

    #[test]
    fn params_are_consistent() {
        let p = StepParams::from_epsilon(0.01);
        assert_eq!(p.theta(), FRAC_PI_2 - 0.01);
        let q = StepParams::from_theta(1.0);
        assert!((q.epsilon() - (FRAC_PI_2 - 1.0)).abs() < 1e-15);
        assert_eq!(StepParams::classical().cos_sin(), (0.0, 1.0));
    }

    #[test]
    fn zero_angle_gate_is_identity() {
        let prop = setup(8);
        let s0 = random_state(prop.basis(), 3);
        let mut s = s0.clone();
        for x in 0..8 {
            prop.apply_gate(&mut s, x, StepParams::from_theta(0.0));
        }
        assert!(s.max_abs_diff(&s0) < 1e-15);
    }

    #[test]
    fn classical_gate_flips_vacuum_site() {
        let prop = setup(8);
        let basis = prop.basis().clone();
        let mut s = StateVector::basis_state(basis.clone(), 0);
        prop.apply_gate(&mut s, 0, StepParams::classical());
        let target = basis.index_of(1).unwrap();
        assert!((s.amps()[target] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!(s.amps()[0].norm() < 1e-15);
    }

    #[test]
    fn blocked_gate_leaves_state() {
        let prop = setup(8);
        let basis = prop.basis().clone();
        let b = basis.index_of(vacuum_b(8)).unwrap();
        let s0 = StateVector::basis_state(basis, b);
        for x in (1..8).step_by(2) {
            let mut s = s0.clone();
            prop.apply_gate(&mut s, x, StepParams::from_epsilon(0.3));
            assert_eq!(s, s0);
        }
    }

    #[test]
    fn classical_step_maps_a_to_b() {
        for n in [6usize, 8, 10, 12] {
            let prop = setup(n);
            let basis = prop.basis().clone();
            let mut s = StateVector::basis_state(basis.clone(), 0);
            prop.step(&mut s, StepParams::classical());
            let b = basis.index_of(vacuum_b(n)).unwrap();
            let phase = Complex64::new(0.0, -1.0).powu((n / 2) as u32);
            assert!((s.amps()[b] - phase).norm() < 1e-14);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn three_classical_steps_return_vacuum() {
        let prop = setup(12);
        let mut s = StateVector::basis_state(prop.basis().clone(), 0);
        prop.steps(&mut s, StepParams::classical(), 3);
        assert_eq!(s.amps()[0], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn backward_classical_step_from_b() {
        let n = 10;
        let prop = setup(n);
        let basis = prop.basis().clone();
        let b = basis.index_of(vacuum_b(n)).unwrap();
        let s = prop
            .evolve_backward(
                StateVector::basis_state(basis, b),
                StepParams::classical(),
                1,
            )
            .run();
        let phase = Complex64::new(0.0, 1.0).powu((n / 2) as u32);
        assert!((s.amps()[0] - phase).norm() < 1e-14);
    }

    #[test]
    fn step_and_adjoint_cancel() {
        let prop = setup(10);
        let s0 = random_state(prop.basis(), 11);
        for eps in [0.0, 0.01, 0.7, 1.3] {
            let p = StepParams::from_epsilon(eps);
            let mut s = s0.clone();
            prop.step(&mut s, p);
            prop.step_adjoint(&mut s, p);
            assert!(s.max_abs_diff(&s0) < 1e-12);
        }
    }

    #[test]
    fn norm_drift_single_step() {
        let prop = setup(12);
        let mut s = random_state(prop.basis(), 5);
        prop.step(&mut s, StepParams::from_epsilon(0.37));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn even_gates_commute() {
        let prop = setup(10);
        let p = StepParams::from_epsilon(0.2);
        let s0 = random_state(prop.basis(), 7);
        let mut forward = s0.clone();
        for x in [0, 2, 4, 6, 8] {
            prop.apply_gate(&mut forward, x, p);
        }
        let mut shuffled = s0.clone();
        for x in [6, 0, 8, 4, 2] {
            prop.apply_gate(&mut shuffled, x, p);
        }
        assert!(forward.max_abs_diff(&shuffled) < 1e-14);
    }

    #[test]
    fn trajectory_streams_every_time() {
        let prop = setup(8);
        let s0 = StateVector::basis_state(prop.basis().clone(), 0);
        let mut times = Vec::new();
        let last = prop
            .evolve(s0.clone(), StepParams::from_epsilon(0.1), 4)
            .for_each(|t, _| times.push(t));
        assert_eq!(times, vec![0, 1, 2, 3, 4]);
        let mut manual = s0.clone();
        prop.steps(&mut manual, StepParams::from_epsilon(0.1), 4);
        assert_eq!(last, manual);
        assert_eq!(
            prop.evolve(s0.clone(), StepParams::classical(), 0).run(),
            s0
        );
    }
}
