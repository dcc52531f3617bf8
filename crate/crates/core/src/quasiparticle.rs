//! Right-moving glider states, their first-order effective Hamiltonian and
//! the resulting dispersion and Loschmidt echo.
//!
//! Sign convention: the effective Hamiltonian is defined through
//! `U_3^dagger U_eps = 1 - i eps H_BC + O(eps^2)`, with `U_3 = U^3(pi/2)`.
//! With that definition the hopping elements are `-2` and the plane-wave
//! eigenvalues are `-4 [cos q1 + cos q2 + sin(k + q1 - q2)]`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::{rotate_up, FibonacciBasis};
use crate::error::{Error, Result};
use crate::evolve::{Propagator, StateVector, StepParams};
use crate::quadrature::gauss_legendre;

/// Quadrature order of [`loschmidt_analytic`].
pub const ECHO_QUADRATURE_ORDER: usize = 200;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Side of the triangular `(L, R)` domain: `L + R < N/2 - 3`.
pub fn triangle_side(n_sites: usize) -> usize {
    (n_sites / 2).saturating_sub(3)
}

/// All `(L, R)` with `L + R <= N/2 - 4`, ordered by `L` then `R`.
pub fn triangle(n_sites: usize) -> Vec<(usize, usize)> {
    let m = triangle_side(n_sites);
    (0..m)
        .flat_map(|l| (0..m - l).map(move |r| (l, r)))
        .collect()
}

fn momentum(n: usize, n_sites: usize) -> f64 {
    4.0 * PI * n as f64 / n_sites as f64
}

/// Labels of the glider states `|L R k>`; `k = 4 pi n / N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GliderIndex {
    pub l: usize,
    pub r: usize,
    pub n: usize,
    pub n_sites: usize,
}

impl GliderIndex {
    pub fn new(l: usize, r: usize, n: usize, n_sites: usize) -> Result<Self> {
        crate::basis::check_size(n_sites)?;
        if n_sites < 8 {
            return Err(Error::InvalidGlider(format!(
                "gliders need at least 8 sites, got {n_sites}"
            )));
        }
        if l + r > n_sites / 2 - 4 {
            return Err(Error::InvalidGlider(format!(
                "L + R = {} exceeds N/2 - 4 = {}",
                l + r,
                n_sites / 2 - 4
            )));
        }
        if n >= n_sites / 2 {
            return Err(Error::InvalidGlider(format!(
                "momentum index {n} must be below N/2 = {}",
                n_sites / 2
            )));
        }
        Ok(Self { l, r, n, n_sites })
    }

    pub fn k(&self) -> f64 {
        momentum(self.n, self.n_sites)
    }

    /// Configuration at glider position `x`: flips at `2x - 2l` for
    /// `l = 0..=L` and at `2x + 2r + 3` for `r = 0..=R`.
    pub fn config_at(&self, x: usize) -> u32 {
        let n = self.n_sites;
        let mut c = 0u32;
        for l in 0..=self.l {
            c |= 1 << ((2 * x + 2 * n - 2 * l) % n);
        }
        for r in 0..=self.r {
            c |= 1 << ((2 * x + 2 * r + 3) % n);
        }
        c
    }
}

// mode labels and the effective Hamiltonian need no basis, so any even size works
fn check_even(n_sites: usize) -> Result<()> {
    if n_sites < crate::basis::MIN_SITES || n_sites % 2 != 0 {
        return Err(Error::InvalidSize(n_sites));
    }
    Ok(())
}

fn check_basis(basis: &FibonacciBasis, n_sites: usize) -> Result<()> {
    if basis.n_sites() != n_sites {
        return Err(Error::Config(format!(
            "basis has {} sites, index expects {n_sites}",
            basis.n_sites()
        )));
    }
    Ok(())
}

/// `sqrt(2/N) sum_x exp(i k x) |config_at(x)>`.
pub fn build_lrk(g: GliderIndex, basis: Arc<FibonacciBasis>) -> Result<StateVector> {
    check_basis(&basis, g.n_sites)?;
    let mut state = StateVector::zeros(basis);
    let half = g.n_sites / 2;
    let norm = (2.0 / g.n_sites as f64).sqrt();
    for x in 0..half {
        let i = state
            .basis()
            .index_of(g.config_at(x))
            .ok_or(Error::NotInBasis(g.config_at(x)))?;
        state.amps_mut()[i] += Complex64::from_polar(norm, g.k() * x as f64);
    }
    Ok(state)
}

/// Plane-wave labels on the triangle: `q_i = 2 pi n_i / (N/2 - 3)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeIndex {
    pub n1: usize,
    pub n2: usize,
    pub n: usize,
    pub n_sites: usize,
}

impl ModeIndex {
    pub fn new(n1: usize, n2: usize, n: usize, n_sites: usize) -> Result<Self> {
        check_even(n_sites)?;
        let m = triangle_side(n_sites);
        if m == 0 {
            return Err(Error::InvalidMode(format!("no modes for N = {n_sites}")));
        }
        if n1 + n2 >= m {
            return Err(Error::InvalidMode(format!(
                "n1 + n2 = {} must be below N/2 - 3 = {m}",
                n1 + n2
            )));
        }
        if n >= n_sites / 2 {
            return Err(Error::InvalidMode(format!(
                "momentum index {n} must be below N/2 = {}",
                n_sites / 2
            )));
        }
        Ok(Self { n1, n2, n, n_sites })
    }

    pub fn q1(&self) -> f64 {
        2.0 * PI * self.n1 as f64 / triangle_side(self.n_sites) as f64
    }

    pub fn q2(&self) -> f64 {
        2.0 * PI * self.n2 as f64 / triangle_side(self.n_sites) as f64
    }

    pub fn k(&self) -> f64 {
        momentum(self.n, self.n_sites)
    }

    /// All modes on the triangle for the given momentum index.
    pub fn all(n: usize, n_sites: usize) -> Result<Vec<ModeIndex>> {
        triangle(n_sites)
            .into_iter()
            .map(|(n1, n2)| ModeIndex::new(n1, n2, n, n_sites))
            .collect()
    }
}

/// Normalized coefficients of `|q1 q2 k>` on the `|L R k>` states, in
/// [`triangle`] order.
pub fn mode_coefficients(m: ModeIndex) -> Vec<Complex64> {
    let tri = triangle(m.n_sites);
    let norm = 1.0 / (tri.len() as f64).sqrt();
    tri.iter()
        .map(|&(l, r)| Complex64::from_polar(norm, m.q1() * l as f64 + m.q2() * r as f64))
        .collect()
}

/// `<a|b>` between two modes; the `|L R k>` are orthonormal within a sector.
pub fn mode_overlap(a: ModeIndex, b: ModeIndex) -> Complex64 {
    if a.n != b.n || a.n_sites != b.n_sites {
        return Complex64::new(0.0, 0.0);
    }
    mode_coefficients(a)
        .iter()
        .zip(mode_coefficients(b))
        .map(|(x, y)| x.conj() * y)
        .sum()
}

pub fn build_q1q2k(m: ModeIndex, basis: Arc<FibonacciBasis>) -> Result<StateVector> {
    check_basis(&basis, m.n_sites)?;
    let mut state = StateVector::zeros(basis.clone());
    for (&(l, r), c) in triangle(m.n_sites).iter().zip(mode_coefficients(m)) {
        let g = GliderIndex::new(l, r, m.n, m.n_sites)?;
        let lrk = build_lrk(g, basis.clone())?;
        for (a, b) in state.amps_mut().iter_mut().zip(lrk.amps()) {
            *a += c * b;
        }
    }
    state.normalize();
    Ok(state)
}

/// First-order effective Hamiltonian on the glider triangle at momentum `k`.
#[derive(Clone, Debug)]
pub struct HbcMatrix {
    n_sites: usize,
    k: f64,
    triangle: Vec<(usize, usize)>,
    matrix: DMatrix<Complex64>,
}

impl HbcMatrix {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.triangle.len()
    }

    pub fn triangle(&self) -> &[(usize, usize)] {
        &self.triangle
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn index_of(&self, l: usize, r: usize) -> Option<usize> {
        self.triangle.iter().position(|&t| t == (l, r))
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }
}

/// Hops `(L +- 1, R)` and `(L, R +- 1)` carry `-2`;
/// `<L-1, R+1|H|L R> = 2i e^{ik}` and `<L+1, R-1|H|L R> = -2i e^{-ik}`.
pub fn hbc_matrix(n_sites: usize, k: f64) -> Result<HbcMatrix> {
    check_even(n_sites)?;
    if n_sites < 10 {
        return Err(Error::InvalidGlider(format!(
            "the effective Hamiltonian needs N >= 10, got {n_sites}"
        )));
    }
    let tri = triangle(n_sites);
    let dim = tri.len();
    let side = triangle_side(n_sites) as isize;
    let index = |l: isize, r: isize| -> Option<usize> {
        if l < 0 || r < 0 || l + r >= side {
            return None;
        }
        // rows before L hold sum_{j<L} (side - j) entries
        let (l, r, s) = (l as usize, r as usize, side as usize);
        Some(l * (2 * s - l + 1) / 2 + r)
    };
    let cross_up = 2.0 * I * Complex64::from_polar(1.0, k);
    let cross_down = -2.0 * I * Complex64::from_polar(1.0, -k);
    let hop = Complex64::new(-2.0, 0.0);
    let mut matrix = DMatrix::zeros(dim, dim);
    for (b, &(l, r)) in tri.iter().enumerate() {
        let (l, r) = (l as isize, r as isize);
        let moves = [
            (1, 0, hop),
            (-1, 0, hop),
            (0, 1, hop),
            (0, -1, hop),
            (-1, 1, cross_up),
            (1, -1, cross_down),
        ];
        for (dl, dr, v) in moves {
            if let Some(a) = index(l + dl, r + dr) {
                matrix[(a, b)] = v;
            }
        }
    }
    Ok(HbcMatrix {
        n_sites,
        k,
        triangle: tri,
        matrix,
    })
}

/// First-order quasienergy shift `-4 [cos q1 + cos q2 + sin(k + q1 - q2)]`.
pub fn first_order_energy(q1: f64, q2: f64, k: f64) -> f64 {
    -4.0 * (q1.cos() + q2.cos() + (k + q1 - q2).sin())
}

/// Quasienergy per three-step period, `k + eps * E1`.
pub fn dispersion(m: ModeIndex, epsilon: f64) -> f64 {
    m.k() + epsilon * first_order_energy(m.q1(), m.q2(), m.k())
}

/// `E1` over the mode grid of size `N`, sorted ascending.
pub fn analytic_first_order(n_sites: usize, k: f64) -> Vec<f64> {
    let m = triangle_side(n_sites) as f64;
    let mut e: Vec<f64> = triangle(n_sites)
        .into_iter()
        .map(|(n1, n2)| first_order_energy(2.0 * PI * n1 as f64 / m, 2.0 * PI * n2 as f64 / m, k))
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

/// `|1/(2 pi^2) int_0^{2pi} dq1 int_0^{2pi - q1} dq2 exp(i z E1)|^2`.
pub fn loschmidt_analytic(z: f64, k: f64) -> f64 {
    loschmidt_analytic_with(z, k, ECHO_QUADRATURE_ORDER)
}

/// [`loschmidt_analytic`] with an explicit Gauss-Legendre order per axis.
pub fn loschmidt_analytic_with(z: f64, k: f64, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let mut total = Complex64::new(0.0, 0.0);
    for (&xa, &wa) in x.iter().zip(&w) {
        let q1 = PI * (xa + 1.0);
        let half = 0.5 * (2.0 * PI - q1);
        let mut inner = Complex64::new(0.0, 0.0);
        for (&xb, &wb) in x.iter().zip(&w) {
            let q2 = half * (xb + 1.0);
            inner += wb * Complex64::from_polar(1.0, z * first_order_energy(q1, q2, k));
        }
        total += PI * wa * half * inner;
    }
    (total / (2.0 * PI * PI)).norm_sqr()
}

/// Small-`z` form `exp(-24 z^2)`.
pub fn loschmidt_gaussian(z: f64) -> f64 {
    (-24.0 * z * z).exp()
}

/// Matrix of `i (U_3^dagger U_eps - 1) / eps` between the `|L R k>` states,
/// in [`triangle`] order.
pub fn finite_difference_hbc(
    prop: &Propagator,
    n: usize,
    epsilon: f64,
) -> Result<DMatrix<Complex64>> {
    let n_sites = prop.n_sites();
    let states = triangle(n_sites)
        .into_iter()
        .map(|(l, r)| build_lrk(GliderIndex::new(l, r, n, n_sites)?, prop.basis().clone()))
        .collect::<Result<Vec<_>>>()?;
    let dim = states.len();
    let mut h = DMatrix::zeros(dim, dim);
    let perturbed = StepParams::from_epsilon(epsilon);
    let classical = StepParams::classical();
    for (b, psi) in states.iter().enumerate() {
        let mut w = psi.clone();
        prop.steps(&mut w, perturbed, 3);
        for _ in 0..3 {
            prop.step_adjoint(&mut w, classical);
        }
        for (a, phi) in states.iter().enumerate() {
            let delta = if a == b { 1.0 } else { 0.0 };
            h[(a, b)] = I * (phi.inner(&w) - delta) / epsilon;
        }
    }
    Ok(h)
}

/// Quasienergies `E - k` of `U^3(pi/2 - eps)` in the translation sector with
/// momentum `k = 4 pi n / N`, sorted ascending, each in `(-pi, pi]`.
pub fn sector_quasienergies(prop: &Propagator, n: usize, epsilon: f64) -> Result<Vec<f64>> {
    let basis = prop.basis().clone();
    let n_sites = basis.n_sites();
    if n >= n_sites / 2 {
        return Err(Error::InvalidMode(format!(
            "momentum index {n} out of range"
        )));
    }
    let k = momentum(n, n_sites);
    let orbits = translation_orbits(&basis, k);
    let dim = orbits.len();
    let params = StepParams::from_epsilon(epsilon);
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (b, orbit) in orbits.iter().enumerate() {
        let mut w = StateVector::zeros(basis.clone());
        let norm = 1.0 / (orbit.len() as f64).sqrt();
        for (j, &idx) in orbit.iter().enumerate() {
            w.amps_mut()[idx] = Complex64::from_polar(norm, k * j as f64);
        }
        prop.steps(&mut w, params, 3);
        for (a, other) in orbits.iter().enumerate() {
            let norm = 1.0 / (other.len() as f64).sqrt();
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &idx) in other.iter().enumerate() {
                acc += Complex64::from_polar(norm, -k * j as f64) * w.amps()[idx];
            }
            m[(a, b)] = acc;
        }
    }
    // Cayley transform of exp(ik) M; eigenvalue exp(-i phi) maps to tan(-phi/2)
    m *= Complex64::from_polar(1.0, k);
    let id = DMatrix::<Complex64>::identity(dim, dim);
    let inv = (&id + &m)
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Config("Cayley transform is singular".into()))?;
    let h = (&id - &m) * inv * I;
    let h = (&h + h.adjoint()) * Complex64::new(0.5, 0.0);
    let mut phases: Vec<f64> = h
        .symmetric_eigenvalues()
        .iter()
        .map(|&lambda| -2.0 * lambda.atan())
        .collect();
    phases.sort_by(f64::total_cmp);
    Ok(phases)
}

/// Orbits of the two-site translation that support momentum `k`, each listed
/// as `c, T^2 c, T^4 c, ...` in basis indices.
fn translation_orbits(basis: &FibonacciBasis, k: f64) -> Vec<Vec<usize>> {
    let n_sites = basis.n_sites();
    let mut seen = vec![false; basis.dim()];
    let mut orbits = Vec::new();
    for start in 0..basis.dim() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut c = basis.configs()[start];
        loop {
            let i = basis.index_of(c).expect("translation stays in the basis");
            if seen[i] {
                break;
            }
            seen[i] = true;
            orbit.push(i);
            c = rotate_up(c, 2, n_sites);
        }
        let winding = Complex64::from_polar(1.0, k * orbit.len() as f64);
        if (winding - 1.0).norm() < 1e-9 {
            orbits.push(orbit);
        }
    }
    orbits
}

/// `|| U^3(pi/2 - eps)|m> - exp(-i E)|m> ||` with `E` from [`dispersion`].
pub fn mode_residual(prop: &Propagator, m: ModeIndex, epsilon: f64) -> Result<f64> {
    let psi = build_q1q2k(m, prop.basis().clone())?;
    let mut w = psi.clone();
    prop.steps(&mut w, StepParams::from_epsilon(epsilon), 3);
    let phase = Complex64::from_polar(1.0, -dispersion(m, epsilon));
    Ok(psi
        .amps()
        .iter()
        .zip(w.amps())
        .map(|(a, b)| (b - phase * a).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{build_basis, SpinConfig};

    fn setup(n: usize) -> Propagator {
        Propagator::for_size(n).unwrap()
    }

    #[test]
    fn triangle_dimension() {
        assert_eq!(triangle(18).len(), 21);
        assert_eq!(triangle(12).len(), 6);
        assert_eq!(triangle(8), vec![(0, 0)]);
        let m = hbc_matrix(18, 0.3).unwrap();
        for (i, &(l, r)) in m.triangle().iter().enumerate() {
            assert_eq!(m.index_of(l, r), Some(i));
        }
    }

    #[test]
    fn glider_validation() {
        assert!(GliderIndex::new(2, 2, 0, 12).is_err());
        assert!(GliderIndex::new(1, 1, 6, 12).is_err());
        assert!(GliderIndex::new(0, 0, 0, 6).is_err());
        assert!(ModeIndex::new(2, 3, 0, 18).is_ok());
        assert!(ModeIndex::new(3, 3, 0, 16).is_err());
    }

    #[test]
    fn lrk_is_uniform_glider_superposition() {
        let basis = Arc::new(build_basis(12).unwrap());
        let g = GliderIndex::new(0, 0, 0, 12).unwrap();
        let s = build_lrk(g, basis).unwrap();
        let support: Vec<_> = s.amps().iter().filter(|a| a.norm() > 0.0).collect();
        assert_eq!(support.len(), 6);
        for a in support {
            assert!((a - Complex64::new(1.0 / 6f64.sqrt(), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn lrk_normalized_and_translation_eigenstate() {
        for n_sites in [10, 14, 20] {
            let basis = Arc::new(build_basis(n_sites).unwrap());
            for (l, r) in triangle(n_sites) {
                for n in 0..n_sites / 2 {
                    let g = GliderIndex::new(l, r, n, n_sites).unwrap();
                    let s = build_lrk(g, basis.clone()).unwrap();
                    assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
                    let mut t = StateVector::zeros(basis.clone());
                    for (i, c) in basis.iter().enumerate() {
                        let j = basis.index_of_config(c.translate2()).unwrap();
                        t.amps_mut()[j] = s.amps()[i];
                    }
                    let mut expected = s.clone();
                    expected.scale(Complex64::from_polar(1.0, -g.k()));
                    assert!(t.max_abs_diff(&expected) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn lrk_configs_are_valid() {
        let g = GliderIndex::new(2, 3, 0, 20).unwrap();
        let c = SpinConfig::new(g.config_at(0), 20).unwrap();
        assert_eq!(c.excitations(), 7);
    }

    #[test]
    fn hbc_is_hermitian() {
        for k in [0.0, 0.7, 1.6 * PI] {
            let m = hbc_matrix(18, k).unwrap();
            assert_eq!(m.dim(), 21);
            let h = m.matrix();
            assert!((h - h.adjoint()).camax() < 1e-15);
        }
    }

    #[test]
    fn hbc_matches_finite_difference() {
        let prop = setup(14);
        for n in [0, 2, 5] {
            let k = momentum(n, 14);
            let exact = hbc_matrix(14, k).unwrap();
            let fd = finite_difference_hbc(&prop, n, 1e-6).unwrap();
            assert!((exact.matrix() - fd).camax() < 1e-4, "n={n}");
        }
    }

    #[test]
    fn plane_waves_diagonalize_without_boundaries() {
        // the plane-wave eigenvalue of the bulk stencil is the first-order energy
        let (q1, q2, k) = (0.4, 1.3, 0.9);
        let mut acc = Complex64::new(0.0, 0.0);
        let up = 2.0 * I * Complex64::from_polar(1.0, k);
        let down = -2.0 * I * Complex64::from_polar(1.0, -k);
        // (H psi)(L,R) = sum over sources (L-dl, R-dr) of element * psi(source)
        for (dl, dr, v) in [
            (1.0, 0.0, Complex64::new(-2.0, 0.0)),
            (-1.0, 0.0, Complex64::new(-2.0, 0.0)),
            (0.0, 1.0, Complex64::new(-2.0, 0.0)),
            (0.0, -1.0, Complex64::new(-2.0, 0.0)),
            (-1.0, 1.0, up),
            (1.0, -1.0, down),
        ] {
            acc += v * Complex64::from_polar(1.0, -(q1 * dl + q2 * dr));
        }
        assert!((acc.re - first_order_energy(q1, q2, k)).abs() < 1e-14);
        assert!(acc.im.abs() < 1e-14);
    }

    #[test]
    fn dispersion_examples() {
        let m = ModeIndex::new(0, 0, 0, 20).unwrap();
        assert_eq!(dispersion(m, 0.0), 0.0);
        assert!((dispersion(m, 0.01) + 0.08).abs() < 1e-15);
        let m = ModeIndex::new(1, 2, 3, 20).unwrap();
        assert_eq!(dispersion(m, 0.0), m.k());
    }

    #[test]
    fn mode_gram_defect_persists() {
        // plane waves restricted to the triangle keep O(1) overlaps at any N
        let gram_defect = |n_sites: usize| {
            let modes = ModeIndex::all(1, n_sites).unwrap();
            let mut worst: f64 = 0.0;
            for (i, &a) in modes.iter().enumerate() {
                assert!((mode_overlap(a, a).re - 1.0).abs() < 1e-12);
                for &b in &modes[i + 1..] {
                    worst = worst.max(mode_overlap(a, b).norm());
                }
            }
            worst
        };
        for n_sites in [18, 40] {
            let d = gram_defect(n_sites);
            assert!(d > 0.25 && d < 0.35, "N={n_sites}: {d}");
        }
    }

    #[test]
    fn q1q2k_state_matches_coefficients() {
        let basis = Arc::new(build_basis(14).unwrap());
        let zero = ModeIndex::new(0, 0, 0, 14).unwrap();
        let s = build_q1q2k(zero, basis).unwrap();
        let nonzero: Vec<f64> = s
            .amps()
            .iter()
            .map(|a| a.norm())
            .filter(|&a| a > 0.0)
            .collect();
        assert_eq!(nonzero.len(), triangle(14).len() * 7);
        let first = nonzero[0];
        assert!(nonzero.iter().all(|a| (a - first).abs() < 1e-14));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_echo_limits() {
        assert!((loschmidt_analytic(0.0, 0.3) - 1.0).abs() < 1e-12);
        for z in [0.005, 0.01, 0.02] {
            let v = loschmidt_analytic(z, 0.0);
            assert!((v - (1.0 - 24.0 * z * z)).abs() < 1e-3, "z={z}");
            assert!((v - loschmidt_analytic(-z, 0.0)).abs() < 1e-12);
        }
        let z = 1.0 / 24f64.sqrt();
        assert!((loschmidt_analytic(z, 0.0) - (-1f64).exp()).abs() < 0.05);
        assert!((loschmidt_gaussian(0.1) - (-0.24f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn analytic_echo_converged() {
        for z in [0.1, 0.4, 1.0] {
            let a = loschmidt_analytic_with(z, 0.5, 120);
            let b = loschmidt_analytic_with(z, 0.5, 240);
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn sector_contains_glider_levels() {
        let prop = setup(14);
        let n = 2;
        let k = momentum(n, 14);
        let eps = 1e-4;
        let phases = sector_quasienergies(&prop, n, eps).unwrap();
        let hv = hbc_matrix(14, k).unwrap().eigenvalues();
        let scale = hv.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        for h in hv {
            let best = phases
                .iter()
                .map(|&p| (p / eps - h).abs())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 0.05 * scale, "level {h}: {best}");
        }
    }

    #[test]
    fn mode_residual_is_first_order_small() {
        let prop = setup(16);
        let m = ModeIndex::new(1, 1, 0, 16).unwrap();
        let r1 = mode_residual(&prop, m, 1e-3).unwrap();
        let r0 = {
            let psi = build_q1q2k(m, prop.basis().clone()).unwrap();
            let mut w = psi.clone();
            prop.steps(&mut w, StepParams::from_epsilon(1e-3), 3);
            psi.amps()
                .iter()
                .zip(w.amps())
                .map(|(a, b)| (b - Complex64::from_polar(1.0, -m.k()) * a).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        assert!(r1 < 1e-3 * 12.0);
        assert!(r1 <= r0);
    }
}
