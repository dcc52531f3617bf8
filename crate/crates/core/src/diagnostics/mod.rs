//! Measurements on state vectors: reduced states, entanglement measures,
//! Schmidt spectra and echoes.

pub mod density;
pub mod measures;
pub mod schmidt;

pub use density::{
    reduced_density, reduced_density_bipartite, DensityMatrix, Reduction, MAX_REDUCED_SITES,
};
pub use measures::{
    concurrence, fidelity, global_q, ipr, loschmidt_numeric, loschmidt_series, negativity,
    partial_transpose, rate_function, spin_expectation, spin_z_profile, state_fidelity, tangle,
    tangle_profile,
};
pub use schmidt::{
    entropy, half_chain, r_statistics, reference_pdf, schmidt_spectrum, Bipartition, RefDist,
    SchmidtSpectrum, SPECTRUM_CUTOFF,
};
