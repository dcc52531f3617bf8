//! Experiment configuration, scenario runner, full-basis sweep and CSV output.

pub mod analysis;
pub mod config;
pub mod measure;
pub mod output;
pub mod presets;
pub mod scenarios;
pub mod sweep;

pub use config::{ExperimentConfig, Scenario};
pub use measure::{parse_measurements, Measurement, MeasurementSet, Partition};
pub use output::{format_float, Table};
pub use presets::{preset, preset_names, Preset};
pub use scenarios::{run_scenario, scenario_tables, RunReport};
pub use sweep::{sweep_all_configs, SweepRecord};
