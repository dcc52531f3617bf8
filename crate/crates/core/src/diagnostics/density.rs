use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::FibonacciBasis;
use crate::error::{Error, Result};
use crate::evolve::StateVector;

/// Largest number of sites kept in a reduced state.
pub const MAX_REDUCED_SITES: usize = 12;

/// Density matrix of a (possibly bipartite) subsystem. The local index puts
/// part `a` before part `b`, each most-significant site first.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dims: (usize, usize),
    data: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(dims: (usize, usize), data: DMatrix<Complex64>) -> Result<Self> {
        let d = dims.0 * dims.1;
        if data.nrows() != d || data.ncols() != d {
            return Err(Error::Dimension {
                expected: "square, matching subsystem",
                actual: data.nrows(),
            });
        }
        Ok(Self { dims, data })
    }

    /// Single-subsystem matrix (`d_b = 1`).
    pub fn single(data: DMatrix<Complex64>) -> Result<Self> {
        let d = data.nrows();
        Self::new((d, 1), data)
    }

    /// Pure state projector `|v><v|`.
    pub fn pure(dims: (usize, usize), v: &[Complex64]) -> Result<Self> {
        let d = v.len();
        let data = DMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj());
        Self::new(dims, data)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|rho_ij - conj(rho_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.data - self.data.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.data + self.data.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }
}

/// Precomputed partial trace for a fixed basis and site list.
#[derive(Clone, Debug)]
pub struct Reduction {
    dims: (usize, usize),
    // basis indices sharing one complement pattern, with their local index
    groups: Vec<Vec<(u32, u16)>>,
}

impl Reduction {
    /// Keep `sites`; the result has dimension `2^|sites|` and `d_b = 1`.
    pub fn new(basis: &FibonacciBasis, sites: &[usize]) -> Result<Self> {
        Self::bipartite(basis, sites, &[])
    }

    /// Keep `a` followed by `b`, recording the split for partial transposes.
    pub fn bipartite(basis: &FibonacciBasis, a: &[usize], b: &[usize]) -> Result<Self> {
        let n = basis.n_sites();
        let sites: Vec<usize> = a.iter().chain(b).copied().collect();
        if sites.len() > MAX_REDUCED_SITES {
            return Err(Error::TooManySites {
                requested: sites.len(),
                limit: MAX_REDUCED_SITES,
            });
        }
        let mut mask = 0u32;
        for &x in &sites {
            if x >= n {
                return Err(Error::SiteOutOfRange {
                    site: x,
                    n_sites: n,
                });
            }
            if mask & (1 << x) != 0 {
                return Err(Error::RepeatedSite(x));
            }
            mask |= 1 << x;
        }
        let k = sites.len();
        let mut keyed: Vec<(u32, u32, u16)> = basis
            .configs()
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                let local = sites.iter().enumerate().fold(0u16, |acc, (pos, &x)| {
                    acc | ((((c >> x) & 1) as u16) << (k - 1 - pos))
                });
                (c & !mask, i as u32, local)
            })
            .collect();
        keyed.sort_unstable();
        let mut groups: Vec<Vec<(u32, u16)>> = Vec::new();
        let mut last = None;
        for (key, i, local) in keyed {
            if last != Some(key) {
                groups.push(Vec::new());
                last = Some(key);
            }
            groups.last_mut().expect("group pushed").push((i, local));
        }
        Ok(Self {
            dims: (1 << a.len(), 1 << b.len()),
            groups,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn apply(&self, state: &StateVector) -> DensityMatrix {
        let d = self.dims.0 * self.dims.1;
        let mut data = DMatrix::<Complex64>::zeros(d, d);
        let amps = state.amps();
        for group in &self.groups {
            for &(i, li) in group {
                let ai = amps[i as usize];
                if ai == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for &(j, lj) in group {
                    data[(li as usize, lj as usize)] += ai * amps[j as usize].conj();
                }
            }
        }
        DensityMatrix {
            dims: self.dims,
            data,
        }
    }
}

/// Reduced state of `sites`, tracing out the complement.
pub fn reduced_density(state: &StateVector, sites: &[usize]) -> Result<DensityMatrix> {
    Ok(Reduction::new(state.basis(), sites)?.apply(state))
}

/// Reduced state of `a` and `b` with dims `(2^|a|, 2^|b|)`.
pub fn reduced_density_bipartite(
    state: &StateVector,
    a: &[usize],
    b: &[usize],
) -> Result<DensityMatrix> {
    Ok(Reduction::bipartite(state.basis(), a, b)?.apply(state))
}

/// Single-site reduced states of every site, computed in one pass.
pub fn single_site_densities(state: &StateVector) -> Vec<[Complex64; 3]> {
    // (rho_00, rho_11, rho_01) per site
    let n = state.n_sites();
    let basis = state.basis();
    let amps = state.amps();
    let mut out = vec![[Complex64::new(0.0, 0.0); 3]; n];
    for (i, &c) in basis.configs().iter().enumerate() {
        let p = Complex64::new(amps[i].norm_sqr(), 0.0);
        for (x, entry) in out.iter_mut().enumerate() {
            if (c >> x) & 1 == 0 {
                entry[0] += p;
                if let Some(j) = flipped_partner(basis, c, x) {
                    entry[2] += amps[i] * amps[j].conj();
                }
            } else {
                entry[1] += p;
            }
        }
    }
    out
}

fn flipped_partner(basis: &FibonacciBasis, c: u32, x: usize) -> Option<usize> {
    let n = basis.n_sites();
    let left = 1u32 << ((x + n - 1) % n);
    let right = 1u32 << ((x + 1) % n);
    if c & (left | right) != 0 {
        return None;
    }
    basis.index_of(c | (1 << x))
}
