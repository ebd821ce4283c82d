//! One-way matching of two feature-aligned datasets that share a low-rank signal.
//!
//! Given `X = U·D·Vᵀ + σx·Nx` and `Π*·Y = U·D·Vᵀ + σy·Ny`, [`matching::laps_match`]
//! recovers the row correspondence by projecting both datasets onto the top-`r`
//! right singular subspace of the less noisy one and solving an exact linear
//! assignment. Around it sit the generative model, loss and cycle diagnostics,
//! closed-form rate evaluators and a reproducible simulation harness.
//!
//! ```
//! use matchkit::{laps_match, make_signal_sweep_params, mismatch_loss, sample_pair, BasisSource, SeededRng};
//!
//! let mut rng = SeededRng::new(7);
//! let params = make_signal_sweep_params(&mut rng, 200, 30, 4, 120.0, 1.0, 1.0).unwrap();
//! let data = sample_pair(&mut rng, &params).unwrap();
//! let out = laps_match(&data.x, &data.y, 4, BasisSource::FromX).unwrap();
//! assert!(mismatch_loss(&out.permutation, &params.pi_star).unwrap() < 0.5);
//! ```

pub mod assignment;
pub mod cli;
pub mod error;
pub mod evaluation;
pub mod io;
pub mod linalg;
pub mod matching;
pub mod model;
pub mod rng;
pub mod sim;
pub mod summation;
pub mod theory;

pub use assignment::{brute_force_solve, build_cost, solve, CostMatrix, Permutation};
pub use error::{Error, Result};
pub use evaluation::{cycle_decompose, label_confusion, mismatch_loss, CycleHistogram, LabelConfusion, MatchReport};
pub use linalg::{frobenius_inner, project, subspace_distance, truncated_svd, DenseMatrix, SvdResult};
pub use matching::{detect_less_noisy, laps_match, naive_match, BasisSource, LapsOutcome};
pub use model::{make_lattice_params, make_signal_sweep_params, sample_haar_orthonormal, sample_pair, DatasetPair, ModelParams};
pub use rng::SeededRng;
pub use sim::{run_sweep, Axis, Method, SweepResult, SweepSpec};
pub use theory::{
    ck_constant, minimax_lower_bound, minimax_rate_exp, separation_profile, upper_rate_c6, RateBundle,
    SeparationProfile,
};
