//! Monte-Carlo sweeps comparing LAPS with naive matching.
//!
//! Parameters are drawn once from `param_seed` and kept fixed; only the noise is
//! redrawn per repetition. Repetition `k` always reads noise stream `k` of
//! `noise_seed`, whatever the axis value and however the work is scheduled, so
//! results are bit-identical across thread counts and neighbouring axis values
//! share their noise draws.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::evaluation::mismatch_loss;
use crate::matching::{laps_match, naive_match, BasisSource};
use crate::model::{sample_haar_orthonormal, sample_pair, signal_weights, ModelParams};
use crate::rng::SeededRng;
use crate::summation::pairwise_sum;
use crate::theory::{minimax_rate_exp, separation_profile};

pub const CSV_HEADER: &str =
    "axis,value,method,mean_loss,log10_mean_loss,stderr,theory_rate,reps,seed_param,seed_noise,wall_ms";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Signal,
    AmbientP,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "signal" => Ok(Axis::Signal),
            "p" => Ok(Axis::AmbientP),
            other => Err(Error::arg(format!("unknown axis '{other}' (expected signal or p)"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Signal => "signal",
            Axis::AmbientP => "p",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Laps,
    Naive,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laps" => Ok(Method::Laps),
            "naive" => Ok(Method::Naive),
            other => Err(Error::arg(format!("unknown method '{other}' (expected laps or naive)"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Laps => "laps",
            Method::Naive => "naive",
        })
    }
}

/// `250·(1 + i/9)` for `i = 0..=9`.
pub fn default_signal_grid() -> Vec<f64> {
    (0..10).map(|i| 250.0 * (1.0 + i as f64 / 9.0)).collect()
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub n: usize,
    /// Ambient dimension; ignored on the `AmbientP` axis.
    pub p: usize,
    pub r: usize,
    pub sigma_x: f64,
    pub sigma_y: f64,
    /// Signal strength; ignored on the `Signal` axis.
    pub signal: f64,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub repetitions: usize,
    pub param_seed: u64,
    pub noise_seed: u64,
    pub methods: Vec<Method>,
    pub basis: BasisSource,
    /// Record wall-clock time per method; `false` writes zeros.
    pub timing: bool,
}

impl SweepSpec {
    /// The equal-noise signal sweep at `n = 1000, p = 50, r = 10`.
    pub fn signal_sweep(repetitions: usize, param_seed: u64, noise_seed: u64) -> Self {
        SweepSpec {
            n: 1000,
            p: 50,
            r: 10,
            sigma_x: 1.0,
            sigma_y: 1.0,
            signal: 400.0,
            axis: Axis::Signal,
            values: default_signal_grid(),
            repetitions,
            param_seed,
            noise_seed,
            methods: vec![Method::Laps, Method::Naive],
            basis: BasisSource::FromX,
            timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |m: String| Err(Error::Config(m));
        if self.repetitions == 0 {
            return cfg("repetitions must be at least 1".into());
        }
        if self.values.is_empty() {
            return cfg("axis values must be non-empty".into());
        }
        if !self.values.windows(2).all(|w| w[0] < w[1]) {
            return cfg("axis values must be strictly increasing".into());
        }
        if self.methods.is_empty() {
            return cfg("at least one method is required".into());
        }
        if self.methods.len() > 2 || (self.methods.len() == 2 && self.methods[0] == self.methods[1]) {
            return cfg("methods must be distinct".into());
        }
        if self.r == 0 || self.n < 2 {
            return cfg(format!("need r >= 1 and n >= 2, got n={}, r={}", self.n, self.r));
        }
        if !(self.sigma_x >= 0.0 && self.sigma_y >= 0.0) || !self.sigma_x.is_finite() || !self.sigma_y.is_finite() {
            return cfg("noise levels must be finite and non-negative".into());
        }
        if self.r > self.n {
            return cfg(format!("r={} exceeds n={}", self.r, self.n));
        }
        match self.axis {
            Axis::Signal => {
                if self.r > self.p {
                    return cfg(format!("r={} exceeds p={}", self.r, self.p));
                }
                if !self.values.iter().all(|v| *v > 0.0 && v.is_finite()) {
                    return cfg("signal values must be positive".into());
                }
            }
            Axis::AmbientP => {
                if !(self.signal > 0.0 && self.signal.is_finite()) {
                    return cfg("signal must be positive".into());
                }
                for &v in &self.values {
                    if v.fract() != 0.0 || v < self.r as f64 {
                        return cfg(format!("p value {v} must be an integer >= r={}", self.r));
                    }
                }
            }
        }
        Ok(())
    }

    /// Model parameters at axis position `idx`.
    ///
    /// Stream 0 of `param_seed` yields `U`, `w`, `Π*` and, on the signal axis,
    /// `V`. On the `p` axis `V` is drawn from stream `1 + idx`, so `U·D` is
    /// shared by every `p`.
    pub fn params_at(&self, idx: usize) -> Result<ModelParams> {
        let value = self.values[idx];
        let (signal, p) = match self.axis {
            Axis::Signal => (value, self.p),
            Axis::AmbientP => (self.signal, value as usize),
        };
        let mut rng = SeededRng::with_stream(self.param_seed, 0);
        let u = sample_haar_orthonormal(&mut rng, self.n, self.r)?;
        let d = signal_weights(&mut rng, self.r, signal);
        let pi_star = Permutation::new(rng.permutation(self.n))?;
        let v = match self.axis {
            Axis::Signal => sample_haar_orthonormal(&mut rng, p, self.r)?,
            Axis::AmbientP => {
                let mut vr = SeededRng::with_stream(self.param_seed, 1 + idx as u64);
                sample_haar_orthonormal(&mut vr, p, self.r)?
            }
        };
        ModelParams::new(u, d, v, self.sigma_x, self.sigma_y, pi_star)
    }
}

/// Aggregate for one (axis value, method) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: Axis,
    pub value: f64,
    pub method: Method,
    pub mean_loss: f64,
    /// `-∞` when every repetition was exact.
    pub log10_mean_loss: f64,
    pub stderr: f64,
    pub theory_rate: f64,
    pub reps: usize,
    pub seed_param: u64,
    pub seed_noise: u64,
    pub wall_ms: f64,
    /// Per-repetition losses in repetition order.
    pub losses: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
}

fn fmt_real(v: f64) -> String {
    if v == f64::NEG_INFINITY {
        "-inf".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == 0.0 || (1e-4..1e15).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

impl SweepResult {
    pub fn get(&self, value_idx: usize, method: Method) -> Option<&SweepRow> {
        let mut values: Vec<f64> = Vec::new();
        for row in &self.rows {
            if values.last() != Some(&row.value) {
                values.push(row.value);
            }
            if values.len() == value_idx + 1 && row.method == method {
                return Some(row);
            }
        }
        None
    }

    /// Mean losses of `method` in axis order.
    pub fn mean_losses(&self, method: Method) -> Vec<f64> {
        self.rows.iter().filter(|r| r.method == method).map(|r| r.mean_loss).collect()
    }

    pub fn theory_rates(&self, method: Method) -> Vec<f64> {
        self.rows.iter().filter(|r| r.method == method).map(|r| r.theory_rate).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{},{}\n",
                r.axis,
                fmt_real(r.value),
                r.method,
                fmt_real(r.mean_loss),
                fmt_real(r.log10_mean_loss),
                fmt_real(r.stderr),
                fmt_real(r.theory_rate),
                r.reps,
                r.seed_param,
                r.seed_noise,
                format!("{:.3}", r.wall_ms),
            ));
        }
        out
    }
}

struct RepOutcome {
    losses: Vec<f64>,
    millis: Vec<f64>,
}

fn run_rep(spec: &SweepSpec, params: &ModelParams, rep: usize) -> Result<RepOutcome> {
    let mut rng = SeededRng::with_stream(spec.noise_seed, rep as u64);
    let data = sample_pair(&mut rng, params)?;
    let mut losses = Vec::with_capacity(spec.methods.len());
    let mut millis = Vec::with_capacity(spec.methods.len());
    for method in &spec.methods {
        let start = Instant::now();
        let pi_hat = match method {
            Method::Laps => laps_match(&data.x, &data.y, spec.r, spec.basis)?.permutation,
            Method::Naive => naive_match(&data.x, &data.y)?,
        };
        millis.push(if spec.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 });
        losses.push(mismatch_loss(&pi_hat, &params.pi_star)?);
    }
    Ok(RepOutcome { losses, millis })
}

/// Runs every repetition at every axis value on the current rayon pool.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut rows = Vec::with_capacity(spec.values.len() * spec.methods.len());
    for (idx, &value) in spec.values.iter().enumerate() {
        let params = spec.params_at(idx)?;
        // noiseless configurations are separated infinitely far
        let theory_rate = if params.sigma_max() > 0.0 {
            minimax_rate_exp(&separation_profile(&params.u, &params.d, params.sigma_max())?)
        } else {
            0.0
        };
        let outcomes: Vec<RepOutcome> = (0..spec.repetitions)
            .into_par_iter()
            .map(|rep| run_rep(spec, &params, rep))
            .collect::<Result<_>>()?;
        for (m, &method) in spec.methods.iter().enumerate() {
            let losses: Vec<f64> = outcomes.iter().map(|o| o.losses[m]).collect();
            let millis: Vec<f64> = outcomes.iter().map(|o| o.millis[m]).collect();
            let reps = losses.len() as f64;
            let mean = pairwise_sum(&losses) / reps;
            let stderr = if losses.len() > 1 {
                let dev: Vec<f64> = losses.iter().map(|l| (l - mean) * (l - mean)).collect();
                (pairwise_sum(&dev) / (reps - 1.0) / reps).sqrt()
            } else {
                0.0
            };
            rows.push(SweepRow {
                axis: spec.axis,
                value,
                method,
                mean_loss: mean,
                log10_mean_loss: if mean == 0.0 { f64::NEG_INFINITY } else { mean.log10() },
                stderr,
                theory_rate,
                reps: losses.len(),
                seed_param: spec.param_seed,
                seed_noise: spec.noise_seed,
                wall_ms: pairwise_sum(&millis) / reps,
                losses,
            });
        }
    }
    Ok(SweepResult { rows })
}
