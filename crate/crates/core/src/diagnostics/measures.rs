use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{single_site_densities, DensityMatrix};
use crate::basis::SpinConfig;
use crate::error::{Error, Result};
use crate::evolve::{Propagator, StateVector, StepParams};

/// Eigenvalues below `-PHYSICAL_TOL` mark a density matrix as unphysical.
pub const PHYSICAL_TOL: f64 = 1e-10;

fn expect_dim(rho: &DensityMatrix, d: usize, what: &'static str) -> Result<()> {
    if rho.dim() != d {
        return Err(Error::Dimension {
            expected: what,
            actual: rho.dim(),
        });
    }
    Ok(())
}

/// `4 det rho` of a single-qubit state.
pub fn tangle(rho: &DensityMatrix) -> Result<f64> {
    expect_dim(rho, 2, "2x2")?;
    let det = rho.get(0, 0) * rho.get(1, 1) - rho.get(0, 1) * rho.get(1, 0);
    Ok(4.0 * det.re)
}

fn tangle_parts(p: &[Complex64; 3]) -> f64 {
    4.0 * (p[0].re * p[1].re - p[2].norm_sqr())
}

/// Tangle of every site.
pub fn tangle_profile(state: &StateVector) -> Vec<f64> {
    single_site_densities(state)
        .iter()
        .map(tangle_parts)
        .collect()
}

/// Spatial average of the single-site tangles.
pub fn global_q(state: &StateVector) -> f64 {
    let t = tangle_profile(state);
    t.iter().sum::<f64>() / t.len() as f64
}

/// `(<X>, <Y>, <Z>)` at site `x`.
pub fn spin_expectation(state: &StateVector, x: usize) -> Result<[f64; 3]> {
    let n = state.n_sites();
    if x >= n {
        return Err(Error::SiteOutOfRange {
            site: x,
            n_sites: n,
        });
    }
    let p = single_site_densities(state)[x];
    Ok(bloch(&p))
}

fn bloch(p: &[Complex64; 3]) -> [f64; 3] {
    [2.0 * p[2].re, -2.0 * p[2].im, p[0].re - p[1].re]
}

/// `<Z>` at every site.
pub fn spin_z_profile(state: &StateVector) -> Vec<f64> {
    single_site_densities(state)
        .iter()
        .map(|p| bloch(p)[2])
        .collect()
}

fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    expect_dim(rho, 4, "4x4")?;
    let (vals, vecs) = hermitian_eigen(rho.data());
    if let Some(&low) = vals.iter().find(|&&v| v < -PHYSICAL_TOL) {
        return Err(Error::NonPhysical(low));
    }
    let roots = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        4,
        vals.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    let sqrt_rho = &vecs * roots * vecs.adjoint();
    // (Y x Y) rho* (Y x Y): entries pick up the sign (-1)^(popcount(i) + popcount(j))
    let flipped = DMatrix::from_fn(4, 4, |i, j| {
        let sign = if ((i ^ 3).count_ones() + (j ^ 3).count_ones()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        rho.get(3 - i, 3 - j).conj() * sign
    });
    let r = &sqrt_rho * flipped * &sqrt_rho;
    let (mut lambdas, _) = hermitian_eigen(&r);
    for l in &mut lambdas {
        *l = l.max(0.0).sqrt();
    }
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Partial transpose over subsystem `a`.
pub fn partial_transpose(rho: &DensityMatrix) -> DensityMatrix {
    let (da, db) = rho.dims();
    let data = DMatrix::from_fn(da * db, da * db, |row, col| {
        let (ia, ib) = (row / db, row % db);
        let (ja, jb) = (col / db, col % db);
        rho.get(ja * db + ib, ia * db + jb)
    });
    DensityMatrix::new((da, db), data).expect("same shape")
}

/// `(||rho^{T_a}||_1 - 1) / 2`.
pub fn negativity(rho: &DensityMatrix) -> f64 {
    let pt = partial_transpose(rho);
    let (vals, _) = hermitian_eigen(pt.data());
    let norm1: f64 = vals.iter().map(|v| v.abs()).sum();
    ((norm1 - 1.0) / 2.0).max(0.0)
}

/// Inverse participation ratio in the configuration basis.
pub fn ipr(state: &StateVector) -> f64 {
    state.amps().iter().map(|a| a.norm_sqr().powi(2)).sum()
}

/// `|<config|psi>|^2`.
pub fn fidelity(state: &StateVector, reference: SpinConfig) -> f64 {
    state.amplitude(reference.bits()).norm_sqr()
}

/// `|<a|b>|^2`.
pub fn state_fidelity(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm_sqr()
}

/// `|<psi| U_2^{-t} U_1^t |psi>|^2` with three automaton steps per unit `t`.
pub fn loschmidt_numeric(
    prop: &Propagator,
    initial: &StateVector,
    eps1: f64,
    eps2: f64,
    t: usize,
) -> f64 {
    *loschmidt_series(prop, initial, eps1, eps2, t)
        .last()
        .expect("series includes t = 0")
}

/// Echo at `t = 0, 1, ..., t_max` (units of three steps).
pub fn loschmidt_series(
    prop: &Propagator,
    initial: &StateVector,
    eps1: f64,
    eps2: f64,
    t_max: usize,
) -> Vec<f64> {
    let (p1, p2) = (
        StepParams::from_epsilon(eps1),
        StepParams::from_epsilon(eps2),
    );
    let mut a = initial.clone();
    let mut b = initial.clone();
    let mut out = Vec::with_capacity(t_max + 1);
    out.push(state_fidelity(&b, &a));
    for _ in 0..t_max {
        prop.steps(&mut a, p1, 3);
        prop.steps(&mut b, p2, 3);
        out.push(state_fidelity(&b, &a));
    }
    out
}

/// Rate function `-ln(echo) / N`.
pub fn rate_function(echo: f64, n_sites: usize) -> Result<f64> {
    if !(echo > 0.0 && echo <= 1.0 + 1e-12) {
        return Err(Error::EchoSaturated(echo));
    }
    Ok(-echo.min(1.0).ln() / n_sites as f64)
}
