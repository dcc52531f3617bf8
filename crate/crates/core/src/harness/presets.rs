//! Named configurations reproducing the figures of the study, plus a few
//! desk-sized variants that run in seconds.

use std::path::PathBuf;

use super::config::{ExperimentConfig, Scenario};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
}

const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2",
        description: "numeric Loschmidt echo of a BC glider mode, N=16",
    },
    Preset {
        name: "fig3",
        description: "tangle profiles of A, a double wall and a BC glider, N=20",
    },
    Preset {
        name: "fig4",
        description: "two-site concurrence (5,7) carried by a BC glider, N=20",
    },
    Preset {
        name: "fig5",
        description: "entanglement spectrum statistics at t~1000, N=26",
    },
    Preset {
        name: "fig5-desk",
        description: "entanglement spectrum statistics at t~1000, N=18",
    },
    Preset {
        name: "fig6",
        description: "full-basis sweep of entropy and -ln IPR, N=18, t=1200",
    },
    Preset {
        name: "fig7",
        description: "negativity of adjacent and disjoint regions for A, BC and C, N=20",
    },
    Preset {
        name: "fig8",
        description: "glider dispersion and quasienergies against epsilon, N=18",
    },
    Preset {
        name: "fig9",
        description: "glider dispersion at k=0 and k=1.6 pi, N=100",
    },
    Preset {
        name: "fig10",
        description: "analytic Loschmidt echo for several momenta",
    },
    Preset {
        name: "fig11",
        description: "rate function and dQ/dt of a glider mode, N=16",
    },
    Preset {
        name: "fig12",
        description: "fidelity revivals of the A vacuum, N=20",
    },
    Preset {
        name: "fig13",
        description: "half-chain entropy of BC, C and BC+C, N=18",
    },
    Preset {
        name: "fig14",
        description: "full-basis sweep, N=18, epsilon=0.01",
    },
    Preset {
        name: "fig15",
        description: "propagation at epsilon=0.1, N=20",
    },
    Preset {
        name: "fig16",
        description: "full-basis sweep at epsilon=0.1, N=18",
    },
    Preset {
        name: "fig17",
        description: "propagation at epsilon=1, N=20",
    },
    Preset {
        name: "fig18",
        description: "full-basis sweep at epsilon=1, N=18",
    },
    Preset {
        name: "automaton",
        description: "classical rule at epsilon=0, spin profile of a BC glider",
    },
    Preset {
        name: "spin-profile",
        description: "spin-z profile of a BC glider at epsilon=0.01",
    },
    Preset {
        name: "concurrence-double-wall",
        description: "concurrence (7,11) for a double wall, N=20",
    },
    Preset {
        name: "spectrum-a-desk",
        description: "spectrum statistics of the A vacuum, N=18",
    },
];

pub fn preset_names() -> &'static [Preset] {
    PRESETS
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Configuration of a named preset, writing to `out/<name>`.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    use Scenario::*;
    let cfg = |scenario, n_sites, epsilon, steps| {
        let mut c = ExperimentConfig::new(scenario);
        c.n_sites = n_sites;
        c.epsilon = epsilon;
        c.steps = steps;
        c
    };
    let mut c = match name {
        "fig2" => {
            let mut c = cfg(Loschmidt, 16, 0.001, 1000);
            c.epsilon2 = 0.002;
            c.glider_l = 1;
            c.glider_r = 1;
            c.momenta = vec![0.0];
            c
        }
        "fig3" => {
            let mut c = cfg(Propagation, 20, 0.01, 300);
            c.initial = strings(&["A", "double_wall:10", "glider_bc:0"]);
            c.measure = strings(&["tangle_profile", "q"]);
            c
        }
        "fig4" => {
            let mut c = cfg(Concurrence, 20, 0.01, 300);
            c.initial = strings(&["glider_bc:0"]);
            c.pairs = vec![[5, 7]];
            c.every = 3;
            c
        }
        "fig5" | "fig5-desk" => {
            let mut c = cfg(SpectrumStats, if name == "fig5" { 26 } else { 18 }, 0.01, 0);
            c.initial = strings(&["A", "glider_bc:0", "double_wall:10"]);
            c
        }
        "spectrum-a-desk" => {
            let mut c = cfg(SpectrumStats, 18, 0.01, 0);
            c.initial = strings(&["A"]);
            c
        }
        "fig6" | "fig14" => sweep(0.01, 1200),
        "fig16" => sweep(0.1, 600),
        "fig18" => sweep(1.0, 900),
        "fig7" => {
            let mut c = cfg(Negativity, 20, 0.01, 300);
            c.initial = strings(&["A", "glider_bc:0", "double_wall:10"]);
            c
        }
        "fig8" => {
            let mut c = cfg(Dispersion, 18, 0.01, 0);
            c.momenta = vec![4.0 / 9.0];
            c.epsilons = vec![0.001, 0.002, 0.005, 0.01, 0.02, 0.05];
            c
        }
        "fig9" => {
            let mut c = cfg(Dispersion, 100, 0.01, 0);
            c.momenta = vec![0.0, 1.6];
            c
        }
        "fig10" => {
            let mut c = cfg(Loschmidt, 16, 0.001, 0);
            c.epsilon2 = 0.002;
            c.glider_l = 1;
            c.glider_r = 1;
            c.momenta = vec![0.0, 0.25, 0.5, 0.75, 1.0];
            c
        }
        "fig11" => {
            let mut c = cfg(RateFunction, 16, 0.0, 2000);
            c.epsilon2 = 0.001;
            c.glider_l = 1;
            c.glider_r = 1;
            c
        }
        "fig12" => {
            let mut c = cfg(Fidelity, 20, 0.01, 3000);
            c.initial = strings(&["A"]);
            c
        }
        "fig13" => {
            let mut c = cfg(Propagation, 18, 0.01, 6000);
            c.initial = strings(&["glider_bc:0", "double_wall:9", "glider_bc:0+double_wall:10"]);
            c.measure = strings(&["entropy_half"]);
            c.every = 3;
            c
        }
        "fig15" | "fig17" => {
            let mut c = cfg(
                Propagation,
                20,
                if name == "fig15" { 0.1 } else { 1.0 },
                300,
            );
            c.initial = strings(&["A", "double_wall:10", "glider_bc:0"]);
            c.measure = strings(&["tangle_profile", "q"]);
            c
        }
        "automaton" | "spin-profile" => {
            let eps = if name == "automaton" { 0.0 } else { 0.01 };
            let mut c = cfg(Propagation, 20, eps, 60);
            c.initial = strings(&["glider_bc:0"]);
            c.measure = strings(&["spin_z_profile"]);
            c
        }
        "concurrence-double-wall" => {
            let mut c = cfg(Concurrence, 20, 0.01, 300);
            c.initial = strings(&["double_wall:10"]);
            c.pairs = vec![[7, 11]];
            c.every = 3;
            c
        }
        _ => return Err(Error::Config(format!("unknown preset `{name}`"))),
    };
    c.output_dir = PathBuf::from("out").join(name);
    Ok(c)
}

fn sweep(epsilon: f64, steps: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new(Scenario::Sweep);
    c.n_sites = 18;
    c.epsilon = epsilon;
    c.steps = steps;
    c.initial = vec!["ALL".into()];
    c
}
