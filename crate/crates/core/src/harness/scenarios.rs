use std::f64::consts::PI;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use super::analysis::{class_statistics, histogram, peak_times};
use super::config::{momentum_index, ExperimentConfig, Scenario};
use super::measure::{BoundMeasurements, Measurement, MeasurementSet, Partition};
use super::output::{ensure_dir, format_float, state_label, write_manifest, Table};
use super::sweep::sweep_all_configs;
use crate::classical::NamedState;
use crate::diagnostics::{self, r_statistics, Bipartition, Reduction, RefDist};
use crate::error::Result;
use crate::evolve::{Propagator, StateVector, StepParams};
use crate::quasiparticle::{
    build_lrk, first_order_energy, hbc_matrix, loschmidt_analytic, loschmidt_gaussian,
    sector_quasienergies, triangle, triangle_side, GliderIndex,
};

/// Concurrence above this value counts as part of a peak.
pub const PEAK_THRESHOLD: f64 = 1e-4;

/// Files produced by one run.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Validate, run and write every output of `cfg`, then the manifest.
pub fn run_scenario(cfg: &ExperimentConfig) -> Result<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let tables = scenario_tables(cfg)?;
    ensure_dir(&cfg.output_dir)?;
    let mut files = Vec::new();
    for (name, table) in tables {
        let path = cfg.output_dir.join(name);
        table.write(&path)?;
        files.push(path);
    }
    let manifest = write_manifest(&cfg.output_dir, cfg, &files, start.elapsed().as_secs_f64())?;
    Ok(RunReport { files, manifest })
}

/// Output tables keyed by file name, without touching the file system.
pub fn scenario_tables(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    cfg.validate()?;
    match cfg.scenario {
        Scenario::Propagation => propagation(cfg),
        Scenario::Concurrence => concurrence(cfg),
        Scenario::SpectrumStats => spectrum_stats(cfg),
        Scenario::Sweep => sweep(cfg),
        Scenario::Negativity => negativity(cfg),
        Scenario::Loschmidt => loschmidt(cfg),
        Scenario::Dispersion => dispersion(cfg),
        Scenario::Fidelity => fidelity(cfg),
        Scenario::RateFunction => rate_function(cfg),
    }
}

fn initial_state(
    basis: &Arc<crate::basis::FibonacciBasis>,
    spec: &NamedState,
) -> Result<StateVector> {
    StateVector::from_config(basis.clone(), spec.config(basis.n_sites())?)
}

/// Evaluate `bound` at `t = 0, every, 2 every, ..., <= steps`.
pub fn record_trajectory(
    prop: &Propagator,
    initial: StateVector,
    epsilon: f64,
    steps: usize,
    every: usize,
    bound: &BoundMeasurements,
) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
    let params = StepParams::from_epsilon(epsilon);
    let mut times = Vec::new();
    let mut rows = Vec::new();
    let mut state = initial;
    let mut t = 0;
    loop {
        times.push(t);
        rows.push(bound.evaluate(&state)?);
        if t + every > steps {
            break;
        }
        prop.steps(&mut state, params, every);
        t += every;
    }
    Ok((times, rows))
}

fn trajectory_table(header: Vec<String>, times: &[usize], rows: &[Vec<f64>]) -> Table {
    let mut table = Table::new(std::iter::once("t".to_string()).chain(header));
    for (&t, row) in times.iter().zip(rows) {
        table.push_mixed(&[t as u64], row);
    }
    table
}

fn per_initial(
    cfg: &ExperimentConfig,
    prefix: &str,
    set: &MeasurementSet,
) -> Result<Vec<(String, Table)>> {
    let prop = Propagator::for_size(cfg.n_sites)?;
    let bound = set.bind(prop.basis())?;
    let mut out = Vec::new();
    for (spec, state) in cfg.initial.iter().zip(cfg.initial_states()?) {
        let psi = initial_state(prop.basis(), &state)?;
        let (times, rows) =
            record_trajectory(&prop, psi, cfg.epsilon, cfg.steps, cfg.every, &bound)?;
        out.push((
            format!("{prefix}_{}.csv", state_label(spec)),
            trajectory_table(set.header(), &times, &rows),
        ));
    }
    Ok(out)
}

fn propagation(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let set = MeasurementSet::parse(&cfg.measure.join(","), cfg.n_sites)?;
    per_initial(cfg, "propagation", &set)
}

fn concurrence(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let pairs = cfg.concurrence_pairs();
    let items = pairs
        .iter()
        .map(|&[x, y]| Measurement::Concurrence(x, y))
        .collect();
    let set = MeasurementSet::new(items, cfg.n_sites)?;
    let prop = Propagator::for_size(cfg.n_sites)?;
    let bound = set.bind(prop.basis())?;
    let mut out = Vec::new();
    for (spec, state) in cfg.initial.iter().zip(cfg.initial_states()?) {
        let psi = initial_state(prop.basis(), &state)?;
        let (times, rows) =
            record_trajectory(&prop, psi, cfg.epsilon, cfg.steps, cfg.every, &bound)?;
        let label = state_label(spec);
        let mut peaks = Table::new(["x", "y", "peak", "t"]);
        for (col, &[x, y]) in pairs.iter().enumerate() {
            let series: Vec<f64> = rows.iter().map(|r| r[col]).collect();
            for (k, t) in peak_times(&times, &series, PEAK_THRESHOLD)
                .into_iter()
                .enumerate()
            {
                peaks.push(vec![
                    x.to_string(),
                    y.to_string(),
                    k.to_string(),
                    t.to_string(),
                ]);
            }
        }
        out.push((
            format!("concurrence_{label}.csv"),
            trajectory_table(set.header(), &times, &rows),
        ));
        out.push((format!("concurrence_peaks_{label}.csv"), peaks));
    }
    Ok(out)
}

/// Sample times of the spectrum statistics: `samples` times spaced by
/// `spacing`, centred on the multiple of three nearest `center`.
pub fn spectrum_sample_times(center: usize, samples: usize, spacing: usize) -> Vec<usize> {
    let anchor = 3 * ((center + 1) / 3);
    let start = anchor - spacing * (samples / 2);
    (0..samples).map(|j| start + j * spacing).collect()
}

/// `(t, entropy, mean r)` of one sampled spectrum.
pub type SpectrumSample = (usize, f64, f64);

/// Pooled spacing ratios of the half-chain spectrum at the given times,
/// plus the entropy at each time.
pub fn spectrum_ratios(
    prop: &Propagator,
    initial: StateVector,
    epsilon: f64,
    times: &[usize],
    cutoff: f64,
) -> Result<(Vec<f64>, Vec<SpectrumSample>)> {
    let cut = Bipartition::half_chain(prop.basis());
    let params = StepParams::from_epsilon(epsilon);
    let mut state = initial;
    let mut now = 0;
    let mut pooled = Vec::new();
    let mut per_time = Vec::new();
    for &t in times {
        prop.steps(&mut state, params, t - now);
        now = t;
        let spec = cut.spectrum(&state);
        let r = r_statistics(&spec, cutoff)?;
        let mean = r.iter().sum::<f64>() / r.len().max(1) as f64;
        per_time.push((t, spec.entropy(), mean));
        pooled.extend(r);
    }
    Ok((pooled, per_time))
}

fn spectrum_stats(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let prop = Propagator::for_size(cfg.n_sites)?;
    let times = spectrum_sample_times(cfg.center_time, cfg.samples, cfg.sample_spacing);
    let mut summary = Table::new([
        "initial",
        "mean_r",
        "count",
        "poisson_mean",
        "goe_mean",
        "cutoff",
        "first_t",
        "last_t",
    ]);
    let mut out = Vec::new();
    for (spec, state) in cfg.initial.iter().zip(cfg.initial_states()?) {
        let psi = initial_state(prop.basis(), &state)?;
        let (r, per_time) = spectrum_ratios(&prop, psi, cfg.epsilon, &times, cfg.cutoff)?;
        let label = state_label(spec);
        let density = histogram(&r, cfg.bins);
        let width = 1.0 / cfg.bins as f64;
        let mut hist = Table::new(["r_lo", "r_hi", "density", "poisson", "goe"]);
        for (b, d) in density.iter().enumerate() {
            let lo = b as f64 * width;
            let mid = lo + 0.5 * width;
            hist.push_mixed(
                &[],
                &[
                    lo,
                    lo + width,
                    *d,
                    RefDist::Poisson.pdf(mid),
                    RefDist::Goe.pdf(mid),
                ],
            );
        }
        let mut samples = Table::new(["t", "entropy_half", "mean_r"]);
        for (t, s, m) in per_time {
            samples.push_mixed(&[t as u64], &[s, m]);
        }
        let mean = r.iter().sum::<f64>() / r.len().max(1) as f64;
        summary.push(vec![
            spec.clone(),
            format_float(mean),
            r.len().to_string(),
            format_float(RefDist::Poisson.mean()),
            format_float(RefDist::Goe.mean()),
            format_float(cfg.cutoff),
            times[0].to_string(),
            times[times.len() - 1].to_string(),
        ]);
        out.push((format!("spectrum_hist_{label}.csv"), hist));
        out.push((format!("spectrum_samples_{label}.csv"), samples));
    }
    out.push(("spectrum_summary.csv".into(), summary));
    Ok(out)
}

fn sweep(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let prop = Propagator::for_size(cfg.n_sites)?;
    let records = sweep_all_configs(&prop, cfg.epsilon, cfg.steps, cfg.execution());
    let mut table = Table::new([
        "config_index",
        "bits",
        "wall_count",
        "entropy_half",
        "neg_ln_ipr",
        "steady_state_time",
    ]);
    for r in &records {
        table.push(vec![
            r.config_index.to_string(),
            r.bits.to_string(),
            r.wall_count.to_string(),
            format_float(r.entropy_half),
            format_float(r.neg_ln_ipr),
            r.steady_state_time.to_string(),
        ]);
    }
    let mut classes = Table::new([
        "wall_count",
        "count",
        "mean_entropy",
        "sd_entropy",
        "mean_neg_ln_ipr",
        "sd_neg_ln_ipr",
    ]);
    for c in class_statistics(&records) {
        classes.push_mixed(
            &[c.wall_count as u64, c.count as u64],
            &[
                c.mean_entropy,
                c.sd_entropy,
                c.mean_neg_ln_ipr,
                c.sd_neg_ln_ipr,
            ],
        );
    }
    Ok(vec![
        ("sweep.csv".into(), table),
        ("sweep_classes.csv".into(), classes),
    ])
}

/// Negativity regions: the configured pair, or the adjacent and disjoint defaults.
pub fn negativity_regions(cfg: &ExperimentConfig) -> Vec<(String, Vec<usize>, Vec<usize>)> {
    if !cfg.region_a.is_empty() {
        return vec![(
            "negativity_custom".into(),
            cfg.region_a.clone(),
            cfg.region_b.clone(),
        )];
    }
    [Partition::Adjacent, Partition::Disjoint]
        .into_iter()
        .map(|p| {
            let (a, b) = p.regions(cfg.n_sites);
            let name = match p {
                Partition::Adjacent => "negativity_adjacent",
                Partition::Disjoint => "negativity_disjoint",
            };
            (name.to_string(), a, b)
        })
        .collect()
}

fn negativity(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let prop = Propagator::for_size(cfg.n_sites)?;
    let regions = negativity_regions(cfg);
    let reductions = regions
        .iter()
        .map(|(_, a, b)| Reduction::bipartite(prop.basis(), a, b))
        .collect::<Result<Vec<_>>>()?;
    let params = StepParams::from_epsilon(cfg.epsilon);
    let mut out = Vec::new();
    for (spec, state) in cfg.initial.iter().zip(cfg.initial_states()?) {
        let mut psi = initial_state(prop.basis(), &state)?;
        let mut table =
            Table::new(std::iter::once("t".to_string()).chain(regions.iter().map(|r| r.0.clone())));
        let mut t = 0;
        loop {
            let row: Vec<f64> = reductions
                .iter()
                .map(|red| diagnostics::negativity(&red.apply(&psi)))
                .collect();
            table.push_mixed(&[t as u64], &row);
            if t + cfg.every > cfg.steps {
                break;
            }
            prop.steps(&mut psi, params, cfg.every);
            t += cfg.every;
        }
        out.push((format!("negativity_{}.csv", state_label(spec)), table));
    }
    Ok(out)
}

fn glider_state(cfg: &ExperimentConfig, prop: &Propagator) -> Result<(GliderIndex, StateVector)> {
    let g = GliderIndex::new(cfg.glider_l, cfg.glider_r, cfg.glider_n, cfg.n_sites)?;
    Ok((g, build_lrk(g, prop.basis().clone())?))
}

/// `z, L_exact, L_gaussian` on `z_points` values in `[0, z_max]`.
pub fn echo_analytic_table(k: f64, z_max: f64, z_points: usize) -> Table {
    let mut table = Table::new(["z", "L_exact", "L_gaussian"]);
    for i in 0..z_points {
        let z = z_max * i as f64 / (z_points - 1) as f64;
        table.push_mixed(&[], &[z, loschmidt_analytic(z, k), loschmidt_gaussian(z)]);
    }
    table
}

fn loschmidt(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let mut out = Vec::new();
    if cfg.steps > 0 {
        let prop = Propagator::for_size(cfg.n_sites)?;
        let (g, psi) = glider_state(cfg, &prop)?;
        let series =
            diagnostics::loschmidt_series(&prop, &psi, cfg.epsilon, cfg.epsilon2, cfg.steps);
        let mut table = Table::new(["t", "z", "echo", "L_exact", "L_gaussian"]);
        for (t, echo) in series.iter().enumerate().step_by(cfg.every) {
            let z = (cfg.epsilon2 - cfg.epsilon) * t as f64;
            table.push_mixed(
                &[t as u64],
                &[
                    z,
                    *echo,
                    loschmidt_analytic(z, g.k()),
                    loschmidt_gaussian(z),
                ],
            );
        }
        out.push(("loschmidt.csv".into(), table));
    }
    let mut curves = Table::new(["k_over_pi", "z", "L_exact", "L_gaussian"]);
    for &k in &cfg.momenta {
        let t = echo_analytic_table(k * PI, cfg.z_max, cfg.z_points);
        for row in t.rows() {
            let mut r = vec![format_float(k)];
            r.extend(row.iter().cloned());
            curves.push(r);
        }
    }
    out.push(("loschmidt_analytic.csv".into(), curves));
    Ok(out)
}

/// Sorted first-order energies against sorted eigenvalues of the effective
/// matrix, with the modes in analytic order.
pub fn dispersion_table(n_sites: usize, momenta_over_pi: &[f64]) -> Result<Table> {
    let mut table = Table::new(["k", "q1", "q2", "E_first_order", "E_numeric"]);
    let side = triangle_side(n_sites) as f64;
    for &kp in momenta_over_pi {
        let k = kp * PI;
        let mut modes: Vec<(f64, f64, f64)> = triangle(n_sites)
            .into_iter()
            .map(|(n1, n2)| {
                let q1 = 2.0 * PI * n1 as f64 / side;
                let q2 = 2.0 * PI * n2 as f64 / side;
                (first_order_energy(q1, q2, k), q1, q2)
            })
            .collect();
        modes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let numeric = hbc_matrix(n_sites, k)?.eigenvalues();
        for ((e, q1, q2), en) in modes.into_iter().zip(numeric) {
            table.push_mixed(&[], &[k, q1, q2, e, en]);
        }
    }
    Ok(table)
}

fn dispersion(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let mut out = vec![(
        "dispersion.csv".to_string(),
        dispersion_table(cfg.n_sites, &cfg.momenta)?,
    )];
    if !cfg.epsilons.is_empty() {
        let prop = Propagator::for_size(cfg.n_sites)?;
        let mut exact = Table::new(["k", "epsilon", "level", "quasienergy"]);
        let mut first = Table::new(["k", "epsilon", "level", "quasienergy"]);
        for &kp in &cfg.momenta {
            let n = momentum_index(kp, cfg.n_sites);
            let k = kp * PI;
            let h = hbc_matrix(cfg.n_sites, k)?.eigenvalues();
            let scale = h.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
            for &eps in &cfg.epsilons {
                let window = 1.2 * eps.abs() * scale + 1e-9;
                let levels = sector_quasienergies(&prop, n, eps)?;
                for (i, e) in levels.into_iter().filter(|e| e.abs() <= window).enumerate() {
                    exact.push(vec![
                        format_float(k),
                        format_float(eps),
                        i.to_string(),
                        format_float(e),
                    ]);
                }
                for (i, hv) in h.iter().enumerate() {
                    first.push(vec![
                        format_float(k),
                        format_float(eps),
                        i.to_string(),
                        format_float(eps * hv),
                    ]);
                }
            }
        }
        out.push(("quasienergy_exact.csv".into(), exact));
        out.push(("quasienergy_first_order.csv".into(), first));
    }
    Ok(out)
}

fn fidelity(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let prop = Propagator::for_size(cfg.n_sites)?;
    let params = StepParams::from_epsilon(cfg.epsilon);
    let mut out = Vec::new();
    for (spec, state) in cfg.initial.iter().zip(cfg.initial_states()?) {
        let config = state.config(cfg.n_sites)?;
        let mut psi = StateVector::from_config(prop.basis().clone(), config)?;
        let mut table = Table::new(["t", "fidelity"]);
        let mut t = 0;
        loop {
            table.push_mixed(&[t as u64], &[diagnostics::fidelity(&psi, config)]);
            if t + cfg.every > cfg.steps {
                break;
            }
            prop.steps(&mut psi, params, cfg.every);
            t += cfg.every;
        }
        out.push((format!("fidelity_{}.csv", state_label(spec)), table));
    }
    Ok(out)
}

fn rate_function(cfg: &ExperimentConfig) -> Result<Vec<(String, Table)>> {
    let prop = Propagator::for_size(cfg.n_sites)?;
    let (_, psi) = glider_state(cfg, &prop)?;
    let (p1, p2) = (
        StepParams::from_epsilon(cfg.epsilon),
        StepParams::from_epsilon(cfg.epsilon2),
    );
    let mut a = psi.clone();
    let mut b = psi;
    let mut table = Table::new(["t", "echo", "rate", "q", "dq_dt"]);
    let mut prev_q: Option<f64> = None;
    let mut t = 0;
    loop {
        let echo = diagnostics::state_fidelity(&b, &a);
        let rate = diagnostics::rate_function(echo, cfg.n_sites).unwrap_or(f64::INFINITY);
        let q = diagnostics::global_q(&b);
        let dq = prev_q.map_or(f64::NAN, |p| (q - p) / cfg.every as f64);
        prev_q = Some(q);
        table.push_mixed(&[t as u64], &[echo, rate, q, dq]);
        if t + cfg.every > cfg.steps {
            break;
        }
        prop.steps(&mut a, p1, cfg.every);
        prop.steps(&mut b, p2, cfg.every);
        t += cfg.every;
    }
    Ok(vec![("rate_function.csv".into(), table)])
}
