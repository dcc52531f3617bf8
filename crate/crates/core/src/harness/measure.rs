use std::fmt;

use crate::basis::{FibonacciBasis, SpinConfig};
use crate::diagnostics::{self, Bipartition, Reduction, SPECTRUM_CUTOFF};
use crate::error::{Error, Result};
use crate::evolve::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Partition {
    Adjacent,
    Disjoint,
}

impl Partition {
    /// Default regions: `a = 0..N/4`, then `b` right after `a` (adjacent) or
    /// starting at `N/2` (disjoint).
    pub fn regions(self, n_sites: usize) -> (Vec<usize>, Vec<usize>) {
        let w = n_sites / 4;
        let a: Vec<usize> = (0..w).collect();
        let start = match self {
            Partition::Adjacent => w,
            Partition::Disjoint => n_sites / 2,
        };
        (a, (start..start + w).collect())
    }

    fn name(self) -> &'static str {
        match self {
            Partition::Adjacent => "adjacent",
            Partition::Disjoint => "disjoint",
        }
    }
}

/// One observable recorded along a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Measurement {
    TangleProfile,
    Q,
    EntropyHalf,
    Ipr,
    FidelityA,
    Concurrence(usize, usize),
    Negativity(Partition),
    SpectrumR,
    SpinZProfile,
}

impl Measurement {
    pub fn is_profile(self) -> bool {
        matches!(self, Measurement::TangleProfile | Measurement::SpinZProfile)
    }

    fn columns(self, n_sites: usize) -> Vec<String> {
        match self {
            m if m.is_profile() => (0..n_sites).map(|x| format!("site_{x}")).collect(),
            Measurement::Q => vec!["q".into()],
            Measurement::EntropyHalf => vec!["entropy_half".into()],
            Measurement::Ipr => vec!["ipr".into()],
            Measurement::FidelityA => vec!["fidelity_A".into()],
            Measurement::Concurrence(x, y) => vec![format!("concurrence_{x}_{y}")],
            Measurement::Negativity(p) => vec![format!("negativity_{}", p.name())],
            Measurement::SpectrumR => vec!["spectrum_r".into()],
            _ => unreachable!("profiles handled above"),
        }
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measurement::TangleProfile => f.write_str("tangle_profile"),
            Measurement::Q => f.write_str("q"),
            Measurement::EntropyHalf => f.write_str("entropy_half"),
            Measurement::Ipr => f.write_str("ipr"),
            Measurement::FidelityA => f.write_str("fidelity_A"),
            Measurement::Concurrence(x, y) => write!(f, "concurrence:{x},{y}"),
            Measurement::Negativity(p) => write!(f, "negativity:{}", p.name()),
            Measurement::SpectrumR => f.write_str("spectrum_r"),
            Measurement::SpinZProfile => f.write_str("spin_z_profile"),
        }
    }
}

/// Parse a comma-separated list; `concurrence:x,y` consumes the following
/// comma-separated number.
pub fn parse_measurements(list: &str) -> Result<Vec<Measurement>> {
    let bad = |s: &str| Error::Config(format!("unknown measurement `{s}`"));
    let tokens: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let tok = tokens[i];
        let m = match tok {
            "tangle_profile" => Measurement::TangleProfile,
            "q" | "Q" => Measurement::Q,
            "entropy_half" => Measurement::EntropyHalf,
            "ipr" => Measurement::Ipr,
            "fidelity_A" | "fidelity_a" => Measurement::FidelityA,
            "spectrum_r" => Measurement::SpectrumR,
            "spin_z_profile" => Measurement::SpinZProfile,
            "negativity:adjacent" => Measurement::Negativity(Partition::Adjacent),
            "negativity:disjoint" => Measurement::Negativity(Partition::Disjoint),
            _ => {
                let rest = tok.strip_prefix("concurrence:").ok_or_else(|| bad(tok))?;
                let (x, y) = match rest.split_once([',', ' ', ';']) {
                    Some((x, y)) => (x.to_string(), y.to_string()),
                    None => {
                        i += 1;
                        let y = tokens.get(i).ok_or_else(|| bad(tok))?;
                        (rest.to_string(), y.to_string())
                    }
                };
                let x = x.trim().parse().map_err(|_| bad(tok))?;
                let y = y.trim().parse().map_err(|_| bad(tok))?;
                Measurement::Concurrence(x, y)
            }
        };
        out.push(m);
        i += 1;
    }
    if out.is_empty() {
        return Err(Error::Config("no measurements requested".into()));
    }
    Ok(out)
}

enum Probe {
    Plain(Measurement),
    Reduced(Measurement, Reduction),
    Cut(Measurement, Bipartition),
}

/// Measurements bound to one basis, with reductions prepared once.
pub struct MeasurementSet {
    items: Vec<Measurement>,
    n_sites: usize,
}

impl MeasurementSet {
    /// Validate a list for a chain of `n_sites`; at most one profile.
    pub fn parse(list: &str, n_sites: usize) -> Result<Self> {
        Self::new(parse_measurements(list)?, n_sites)
    }

    pub fn new(items: Vec<Measurement>, n_sites: usize) -> Result<Self> {
        if items.iter().filter(|m| m.is_profile()).count() > 1 {
            return Err(Error::Config(
                "at most one profile measurement per output".into(),
            ));
        }
        for m in &items {
            match *m {
                Measurement::Concurrence(x, y) => {
                    if x.max(y) >= n_sites {
                        return Err(Error::SiteOutOfRange {
                            site: x.max(y),
                            n_sites,
                        });
                    }
                    if x == y {
                        return Err(Error::RepeatedSite(x));
                    }
                }
                Measurement::Negativity(p) => {
                    let (a, b) = p.regions(n_sites);
                    if a.len() + b.len() > diagnostics::MAX_REDUCED_SITES {
                        return Err(Error::TooManySites {
                            requested: a.len() + b.len(),
                            limit: diagnostics::MAX_REDUCED_SITES,
                        });
                    }
                }
                _ => {}
            }
        }
        Ok(Self { items, n_sites })
    }

    pub fn items(&self) -> &[Measurement] {
        &self.items
    }

    pub fn header(&self) -> Vec<String> {
        self.items
            .iter()
            .flat_map(|m| m.columns(self.n_sites))
            .collect()
    }

    pub fn bind(&self, basis: &FibonacciBasis) -> Result<BoundMeasurements> {
        let probes = self
            .items
            .iter()
            .map(|&m| {
                Ok(match m {
                    Measurement::Concurrence(x, y) => {
                        Probe::Reduced(m, Reduction::new(basis, &[x, y])?)
                    }
                    Measurement::Negativity(p) => {
                        let (a, b) = p.regions(basis.n_sites());
                        Probe::Reduced(m, Reduction::bipartite(basis, &a, &b)?)
                    }
                    Measurement::EntropyHalf | Measurement::SpectrumR => {
                        Probe::Cut(m, Bipartition::half_chain(basis))
                    }
                    _ => Probe::Plain(m),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(BoundMeasurements {
            probes,
            vacuum: SpinConfig::new(0, basis.n_sites())?,
        })
    }
}

pub struct BoundMeasurements {
    probes: Vec<Probe>,
    vacuum: SpinConfig,
}

impl BoundMeasurements {
    /// One CSV row (without the time column). Undefined values are NaN.
    pub fn evaluate(&self, state: &StateVector) -> Result<Vec<f64>> {
        let mut row = Vec::new();
        for probe in &self.probes {
            match probe {
                Probe::Plain(m) => match m {
                    Measurement::TangleProfile => row.extend(diagnostics::tangle_profile(state)),
                    Measurement::SpinZProfile => row.extend(diagnostics::spin_z_profile(state)),
                    Measurement::Q => row.push(diagnostics::global_q(state)),
                    Measurement::Ipr => row.push(diagnostics::ipr(state)),
                    Measurement::FidelityA => row.push(diagnostics::fidelity(state, self.vacuum)),
                    _ => unreachable!("bound to a reduction"),
                },
                Probe::Reduced(m, red) => {
                    let rho = red.apply(state);
                    row.push(match m {
                        Measurement::Concurrence(..) => diagnostics::concurrence(&rho)?,
                        _ => diagnostics::negativity(&rho),
                    });
                }
                Probe::Cut(m, cut) => {
                    let spec = cut.spectrum(state);
                    row.push(match m {
                        Measurement::EntropyHalf => spec.entropy(),
                        _ => match diagnostics::r_statistics(&spec, SPECTRUM_CUTOFF) {
                            Ok(r) if !r.is_empty() => r.iter().sum::<f64>() / r.len() as f64,
                            _ => f64::NAN,
                        },
                    });
                }
            }
        }
        Ok(row)
    }
}
