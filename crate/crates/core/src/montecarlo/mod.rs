//! Seeded, parallel Monte Carlo studies: coverage of the concentration bounds, weak limits
//! compared by KS distance, and the data-driven index-set estimator.
//!
//! Every trial draws its sample from its own ChaCha8 stream selected by the trial index, so
//! results do not depend on the number of threads (capped by `SPECTRA_THREADS`).

mod config;
mod index_estimate;
mod limits;
mod report;
mod runner;
mod studies;

pub use config::{McConfig, Prepared, StudyKind, DEFAULT_LIMIT_DRAWS, DEFAULT_TAU};
pub use index_estimate::{estimate_index_set, loglog_slope, median};
pub use limits::{
    bilinear_limit_variance, bridge_covariance, bridge_variance, covariance_root,
    gaussian_limit_sampler, ks_distance, normal_draws, LimitSamples, PSD_TOL,
};
pub use report::{rate, McReport, Summary, TailCheck, TrialRecord, CSV_COLUMNS};
pub use runner::{run_trials, thread_cap, THREADS_ENV};
pub use studies::{
    calibrate_gap_tol, run_eigenvalue_study, run_limit_study, run_opnorm_study,
    run_projection_study, run_study, run_sweep, Sweep, WARMUP_TRIALS,
};
