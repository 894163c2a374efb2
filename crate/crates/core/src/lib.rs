//! Estimation of single-mode Gaussian states from finite ensembles under
//! homodyne, heterodyne, sequential and Arthurs-Kelly measurements.

pub mod csv;
pub mod error;
pub mod metrics;
pub mod montecarlo;
pub mod numeric;
pub mod phase;
pub mod schemes;
pub mod sweep;
pub mod symplectic;

pub use error::{Error, Result};
pub use metrics::{
    averaged_distances, critical_squeezing, distance_mean, distance_report, distance_variance, optimal_cor_widths,
    optimal_d1_cor, optimal_d2_cor, optimal_widths, AverageMethod, AverageSpec, Convention, CriticalSqueezing,
    DistanceReport, EnsembleSpec, MeterScheme,
};
pub use phase::{
    apply_symplectic, make_state, marginal_distribution, reduce_modes, symplectic_eigenvalues, symplectic_form,
    wigner_density, CovarianceMatrix, GaussianState, Marginal1D, MeanVector, StateKind, SymplecticForm,
};
pub use schemes::{
    readout_distributions, readout_laws, simon_separability, MeterConfig, Quadrature, ReadoutChannels, SchemeSpec,
    Separability, SimonReport,
};
pub use symplectic::{
    canonical_interaction, generator_from_quadratic, is_symplectic, matrix_exponential, Generator, Interaction,
    QuadraticHamiltonian, SymplecticTransform,
};
