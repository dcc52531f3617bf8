use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::measure::MeasurementSet;
use crate::classical::NamedState;
use crate::error::{Error, Result};
use crate::parallel::Execution;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Propagation,
    Concurrence,
    SpectrumStats,
    Sweep,
    Negativity,
    Loschmidt,
    Dispersion,
    Fidelity,
    RateFunction,
}

impl Scenario {
    pub const ALL: [Scenario; 9] = [
        Scenario::Propagation,
        Scenario::Concurrence,
        Scenario::SpectrumStats,
        Scenario::Sweep,
        Scenario::Negativity,
        Scenario::Loschmidt,
        Scenario::Dispersion,
        Scenario::Fidelity,
        Scenario::RateFunction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Propagation => "propagation",
            Scenario::Concurrence => "concurrence",
            Scenario::SpectrumStats => "spectrum_stats",
            Scenario::Sweep => "sweep",
            Scenario::Negativity => "negativity",
            Scenario::Loschmidt => "loschmidt",
            Scenario::Dispersion => "dispersion",
            Scenario::Fidelity => "fidelity",
            Scenario::RateFunction => "rate_function",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == key)
            .ok_or_else(|| Error::Config(format!("unknown scenario `{s}`")))
    }
}

/// Flat experiment description; every field but `scenario` has a default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n_sites: usize,
    pub epsilon: f64,
    /// Second angle for echoes.
    pub epsilon2: f64,
    pub steps: usize,
    /// Named initial states; one output file per entry. `ALL` selects every
    /// basis configuration (sweep only).
    pub initial: Vec<String>,
    /// Measure every `every` steps.
    pub every: usize,
    pub measure: Vec<String>,
    /// Site pairs for concurrence.
    pub pairs: Vec<[usize; 2]>,
    /// Negativity subsystems; empty means the adjacent/disjoint defaults.
    pub region_a: Vec<usize>,
    pub region_b: Vec<usize>,
    /// Spectrum statistics: sample count, spacing and centre time.
    pub samples: usize,
    pub sample_spacing: usize,
    pub center_time: usize,
    pub bins: usize,
    pub cutoff: f64,
    /// Glider `|L R k>` initial state for echoes (`k = 4 pi n / N`).
    pub glider_l: usize,
    pub glider_r: usize,
    pub glider_n: usize,
    /// Momenta in units of pi for dispersion and analytic echo curves.
    pub momenta: Vec<f64>,
    /// Perturbation strengths for exact quasienergies (dispersion).
    pub epsilons: Vec<f64>,
    pub z_max: f64,
    pub z_points: usize,
    /// Worker threads; `None` uses all cores, 1 is sequential.
    pub threads: Option<usize>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: Scenario::Propagation,
            n_sites: 20,
            epsilon: 0.01,
            epsilon2: 0.002,
            steps: 300,
            initial: vec!["A".into()],
            every: 1,
            measure: vec!["q".into()],
            pairs: Vec::new(),
            region_a: Vec::new(),
            region_b: Vec::new(),
            samples: 10,
            sample_spacing: 3,
            center_time: 1000,
            bins: 25,
            cutoff: crate::diagnostics::SPECTRUM_CUTOFF,
            glider_l: 0,
            glider_r: 0,
            glider_n: 0,
            momenta: vec![0.0],
            epsilons: Vec::new(),
            z_max: 0.5,
            z_points: 101,
            threads: None,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn execution(&self) -> Execution {
        Execution::from_threads(self.threads)
    }

    pub fn is_sweep_all(&self) -> bool {
        self.initial.len() == 1 && self.initial[0].eq_ignore_ascii_case("all")
    }

    /// Parsed initial states (not for `ALL`).
    pub fn initial_states(&self) -> Result<Vec<NamedState>> {
        self.initial.iter().map(|s| s.parse()).collect()
    }

    /// Concurrence pairs, defaulting to `(5, 7)`.
    pub fn concurrence_pairs(&self) -> Vec<[usize; 2]> {
        if self.pairs.is_empty() {
            vec![[5, 7]]
        } else {
            self.pairs.clone()
        }
    }

    /// Check scenario-specific parameters before anything runs.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        let sized = self.scenario != Scenario::Dispersion;
        if sized {
            crate::basis::check_size(self.n_sites)?;
        } else if self.n_sites < 10 || self.n_sites % 2 != 0 {
            return bad(format!(
                "dispersion needs even n_sites >= 10, got {}",
                self.n_sites
            ));
        }
        if !self.epsilon.is_finite() || !self.epsilon2.is_finite() {
            return bad("epsilon values must be finite".into());
        }
        if self.every == 0 {
            return bad("`every` must be at least 1".into());
        }
        let uses_states = matches!(
            self.scenario,
            Scenario::Propagation
                | Scenario::Concurrence
                | Scenario::SpectrumStats
                | Scenario::Negativity
                | Scenario::Fidelity
        );
        if uses_states {
            if self.initial.is_empty() {
                return bad("at least one initial state is required".into());
            }
            if self.is_sweep_all() {
                return bad("initial = ALL is only valid for the sweep scenario".into());
            }
            for state in self.initial_states()? {
                state.config(self.n_sites)?;
            }
        }
        match self.scenario {
            Scenario::Propagation => {
                MeasurementSet::parse(&self.measure.join(","), self.n_sites)?;
            }
            Scenario::Concurrence => {
                for [x, y] in self.concurrence_pairs() {
                    if x >= self.n_sites || y >= self.n_sites {
                        return Err(Error::SiteOutOfRange {
                            site: x.max(y),
                            n_sites: self.n_sites,
                        });
                    }
                    if x == y {
                        return Err(Error::RepeatedSite(x));
                    }
                }
            }
            Scenario::SpectrumStats => {
                if self.samples == 0 || self.sample_spacing == 0 || self.bins == 0 {
                    return bad("samples, sample_spacing and bins must be positive".into());
                }
                if self.center_time < self.sample_spacing * (self.samples / 2) + 2 {
                    return bad("center_time too small for the requested samples".into());
                }
                if self.cutoff.is_nan() || self.cutoff < 0.0 {
                    return bad("cutoff must be non-negative".into());
                }
            }
            Scenario::Sweep => {
                if !self.is_sweep_all() {
                    return bad("sweep requires initial = [\"ALL\"]".into());
                }
            }
            Scenario::Negativity => {
                if self.region_a.is_empty() != self.region_b.is_empty() {
                    return bad("region_a and region_b must be given together".into());
                }
                for x in self.region_a.iter().chain(&self.region_b) {
                    if *x >= self.n_sites {
                        return Err(Error::SiteOutOfRange {
                            site: *x,
                            n_sites: self.n_sites,
                        });
                    }
                }
            }
            Scenario::Loschmidt | Scenario::RateFunction => {
                crate::quasiparticle::GliderIndex::new(
                    self.glider_l,
                    self.glider_r,
                    self.glider_n,
                    self.n_sites,
                )?;
                if self.scenario == Scenario::Loschmidt
                    && (self.z_points < 2 || self.z_max.is_nan() || self.z_max <= 0.0)
                {
                    return bad("z_points >= 2 and z_max > 0 are required".into());
                }
            }
            Scenario::Dispersion => {
                if self.momenta.is_empty() {
                    return bad("dispersion needs at least one momentum".into());
                }
                let n = self.n_sites / 2;
                for &k in &self.momenta {
                    let index = k * n as f64 / 2.0;
                    if (index - index.round()).abs() > 1e-9
                        || index < 0.0
                        || index.round() as usize >= n
                    {
                        return bad(format!(
                            "momentum {k} pi is not of the form 4 pi n / N with 0 <= n < N/2"
                        ));
                    }
                }
                if !self.epsilons.is_empty() {
                    crate::basis::check_size(self.n_sites)?;
                }
            }
            Scenario::Fidelity => {}
        }
        Ok(())
    }
}

/// Momentum index `n` of `k = momentum_over_pi * pi = 4 pi n / N`.
pub(crate) fn momentum_index(k_over_pi: f64, n_sites: usize) -> usize {
    (k_over_pi * n_sites as f64 / 4.0).round() as usize
}
