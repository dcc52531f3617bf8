use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::basis::FibonacciBasis;
use crate::error::{Error, Result};
use crate::evolve::StateVector;

/// Default floor below which Schmidt values are dropped before spacing ratios.
pub const SPECTRUM_CUTOFF: f64 = 1e-12;

/// Terms below this are skipped in the entropy sum.
const ENTROPY_FLOOR: f64 = 1e-14;

/// Schmidt values `p_n` of a bipartition, descending.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtSpectrum {
    values: Vec<f64>,
    part_a: Vec<usize>,
}

impl SchmidtSpectrum {
    pub fn from_values(mut values: Vec<f64>, part_a: Vec<usize>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values, part_a }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn part_a(&self) -> &[usize] {
        &self.part_a
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn entropy(&self) -> f64 {
        entropy(self)
    }
}

/// Sites `0..N/2`.
pub fn half_chain(n_sites: usize) -> Vec<usize> {
    (0..n_sites / 2).collect()
}

/// Row/column placement of every basis config in the coefficient matrix of
/// a fixed bipartition.
#[derive(Clone, Debug)]
pub struct Bipartition {
    part_a: Vec<usize>,
    rows: usize,
    cols: usize,
    place: Vec<(u32, u32)>,
}

impl Bipartition {
    pub fn new(basis: &FibonacciBasis, part_a: &[usize]) -> Result<Self> {
        let n = basis.n_sites();
        let mut mask = 0u32;
        for &x in part_a {
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
        let mut row_of: HashMap<u32, u32> = HashMap::new();
        let mut col_of: HashMap<u32, u32> = HashMap::new();
        let place = basis
            .configs()
            .iter()
            .map(|&c| {
                let next = row_of.len() as u32;
                let r = *row_of.entry(c & mask).or_insert(next);
                let next = col_of.len() as u32;
                let k = *col_of.entry(c & !mask).or_insert(next);
                (r, k)
            })
            .collect();
        Ok(Self {
            part_a: part_a.to_vec(),
            rows: row_of.len(),
            cols: col_of.len(),
            place,
        })
    }

    pub fn half_chain(basis: &FibonacciBasis) -> Self {
        Self::new(basis, &half_chain(basis.n_sites())).expect("half chain is a valid cut")
    }

    /// Shape of the coefficient matrix.
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn coefficients(&self, state: &StateVector) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (&(r, c), &a) in self.place.iter().zip(state.amps()) {
            m[(r as usize, c as usize)] = a;
        }
        m
    }

    pub fn spectrum(&self, state: &StateVector) -> SchmidtSpectrum {
        let values = self
            .coefficients(state)
            .singular_values()
            .iter()
            .map(|s| s * s)
            .collect();
        SchmidtSpectrum::from_values(values, self.part_a.clone())
    }
}

pub fn schmidt_spectrum(state: &StateVector, part_a: &[usize]) -> Result<SchmidtSpectrum> {
    Ok(Bipartition::new(state.basis(), part_a)?.spectrum(state))
}

/// Von Neumann entropy in bits.
pub fn entropy(spec: &SchmidtSpectrum) -> f64 {
    -spec
        .values
        .iter()
        .filter(|&&p| p >= ENTROPY_FLOOR)
        .map(|&p| p * p.log2())
        .sum::<f64>()
}

/// Consecutive spacing ratios `min(d_n, d_n+1) / max(d_n, d_n+1)` of the
/// values at or above `cutoff`. Ratios with both spacings zero are skipped.
pub fn r_statistics(spec: &SchmidtSpectrum, cutoff: f64) -> Result<Vec<f64>> {
    let mut kept: Vec<f64> = spec
        .values
        .iter()
        .copied()
        .filter(|&p| p >= cutoff)
        .collect();
    if kept.len() < 3 {
        return Err(Error::TooFewLevels(kept.len()));
    }
    kept.sort_by(f64::total_cmp);
    let gaps: Vec<f64> = kept.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(gaps
        .windows(2)
        .filter_map(|w| {
            let (lo, hi) = if w[0] <= w[1] {
                (w[0], w[1])
            } else {
                (w[1], w[0])
            };
            (hi > 0.0).then(|| lo / hi)
        })
        .collect())
}

/// Reference spacing-ratio distributions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RefDist {
    Poisson,
    Goe,
}

impl RefDist {
    pub fn pdf(self, r: f64) -> f64 {
        reference_pdf(self, r)
    }

    /// Mean of `r` on `[0, 1]`.
    pub fn mean(self) -> f64 {
        match self {
            RefDist::Poisson => 2.0 * std::f64::consts::LN_2 - 1.0,
            RefDist::Goe => 4.0 - 2.0 * 3f64.sqrt(),
        }
    }
}

pub fn reference_pdf(kind: RefDist, r: f64) -> f64 {
    match kind {
        RefDist::Poisson => 2.0 / ((1.0 + r) * (1.0 + r)),
        RefDist::Goe => 54.0 / 8.0 * r * (1.0 + r) / (1.0 + r + r * r).powf(2.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::build_basis;
    use crate::quadrature::integrate;
    use std::sync::Arc;

    #[test]
    fn basis_state_has_single_value() {
        let basis = Arc::new(build_basis(10).unwrap());
        let s = StateVector::basis_state(basis, 17);
        let spec = schmidt_spectrum(&s, &half_chain(10)).unwrap();
        assert!((spec.values()[0] - 1.0).abs() < 1e-14);
        assert!(spec.values()[1..].iter().all(|&p| p < 1e-28));
        assert_eq!(spec.entropy(), 0.0);
    }

    #[test]
    fn cat_state_has_one_bit() {
        let basis = Arc::new(build_basis(8).unwrap());
        let mut s = StateVector::zeros(basis.clone());
        s.amps_mut()[basis.index_of(0).unwrap()] = Complex64::new(1.0, 0.0);
        s.amps_mut()[basis.index_of(0b01010101).unwrap()] = Complex64::new(1.0, 0.0);
        s.normalize();
        let spec = schmidt_spectrum(&s, &half_chain(8)).unwrap();
        assert!((spec.values()[0] - 0.5).abs() < 1e-14);
        assert!((spec.values()[1] - 0.5).abs() < 1e-14);
        assert!((spec.entropy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_chain_shape_is_fibonacci() {
        // open segments of 9 sites admit F(11) = 89 patterns
        let basis = build_basis(18).unwrap();
        assert_eq!(Bipartition::half_chain(&basis).shape(), (89, 89));
    }

    #[test]
    fn evenly_spaced_levels() {
        let spec = SchmidtSpectrum::from_values((1..=6).map(|i| i as f64 / 21.0).collect(), vec![]);
        let r = r_statistics(&spec, SPECTRUM_CUTOFF).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|&x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn cutoff_and_too_few_levels() {
        let spec = SchmidtSpectrum::from_values(vec![0.6, 0.4, 1e-13, 0.0], vec![]);
        assert!(matches!(
            r_statistics(&spec, SPECTRUM_CUTOFF),
            Err(Error::TooFewLevels(2))
        ));
        let spec = SchmidtSpectrum::from_values(vec![0.5, 0.3, 0.2, 1e-13], vec![]);
        let r = r_statistics(&spec, SPECTRUM_CUTOFF).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn reference_distributions() {
        assert_eq!(reference_pdf(RefDist::Poisson, 0.0), 2.0);
        assert_eq!(reference_pdf(RefDist::Goe, 0.0), 0.0);
        for kind in [RefDist::Poisson, RefDist::Goe] {
            let norm = integrate(|r| kind.pdf(r), 0.0, 1.0, 64);
            assert!((norm - 1.0).abs() < 1e-12, "{kind:?}");
            let mean = integrate(|r| r * kind.pdf(r), 0.0, 1.0, 64);
            assert!((mean - kind.mean()).abs() < 1e-12, "{kind:?}");
        }
        assert!((RefDist::Poisson.mean() - 0.3863).abs() < 1e-4);
        assert!((RefDist::Goe.mean() - 0.536).abs() < 1e-3);
    }
}
