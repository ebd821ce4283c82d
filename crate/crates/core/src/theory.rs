//! Closed-form rate evaluators.
//!
//! Everything here is driven by the scaled pairwise separations
//! `Δ_{ii'} = ‖(U_i − U_{i'})·D‖² / σ_max²`. The asymptotic slack sequences
//! that appear in the rate statements are set to zero by default; the
//! `_with_delta` variants expose them for sensitivity checks.
//!
//! Sums over pairs are order independent: each row's terms are sorted and
//! tree-summed, then the row totals are sorted and tree-summed. A row
//! permutation of `U` therefore leaves every rate bit-identical.

use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::summation::order_independent_sum;

/// Exponent constant for cycles of length six and more.
pub const C6: f64 = (3.0 - 2.0 * SQRT_2) / 4.0;

/// Row counts above which the pairwise table is not stored.
pub const STREAMING_THRESHOLD: usize = 5000;

/// Relative slack used by the finite-n symmetry flags.
pub const SYMMETRY_RTOL: f64 = 1e-9;

/// Standard normal CDF, `Φ(x) = erfc(−x/√2) / 2`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Per-cycle-length exponent constant: `1/4, 1/8, 1/12, 1/14, 11/181` for
/// `k = 1..=5` and `(3 − 2√2)/4` for `k ≥ 6`.
pub fn ck_constant(k: usize) -> Result<f64> {
    Ok(match k {
        0 => return Err(Error::arg("cycle length must be at least 1")),
        1 => 1.0 / 4.0,
        2 => 1.0 / 8.0,
        3 => 1.0 / 12.0,
        4 => 1.0 / 14.0,
        5 => 11.0 / 181.0,
        _ => C6,
    })
}

/// Pairwise separations of the signal rows.
#[derive(Debug, Clone)]
pub struct SeparationProfile {
    u: DenseMatrix,
    d: Vec<f64>,
    sigma_max: f64,
    /// Row-major `n x n` table, absent in streaming mode.
    table: Option<Vec<f64>>,
    /// `min_{i≠i'} Δ_{ii'}`.
    pub beta_sq: f64,
    /// `min_{i'≠i} Δ_{ii'}` for each row.
    pub beta_i_sq: Vec<f64>,
}

/// Builds the profile, storing the full table when `n ≤ STREAMING_THRESHOLD`.
pub fn separation_profile(u: &DenseMatrix, d: &[f64], sigma_max: f64) -> Result<SeparationProfile> {
    build_profile(u, d, sigma_max, u.rows() <= STREAMING_THRESHOLD)
}

/// Profile that recomputes separations on demand instead of storing `n²` values.
pub fn separation_profile_streaming(
    u: &DenseMatrix,
    d: &[f64],
    sigma_max: f64,
) -> Result<SeparationProfile> {
    build_profile(u, d, sigma_max, false)
}

fn build_profile(u: &DenseMatrix, d: &[f64], sigma_max: f64, store: bool) -> Result<SeparationProfile> {
    if !(sigma_max > 0.0) || !sigma_max.is_finite() {
        return Err(Error::arg(format!("sigma_max must be positive, got {sigma_max}")));
    }
    if u.cols() != d.len() {
        return Err(Error::arg(format!(
            "U has {} columns but D has {} entries",
            u.cols(),
            d.len()
        )));
    }
    if u.rows() < 2 {
        return Err(Error::arg("separations need at least two rows"));
    }
    let n = u.rows();
    let mut profile = SeparationProfile {
        u: u.clone(),
        d: d.to_vec(),
        sigma_max,
        table: None,
        beta_sq: f64::INFINITY,
        beta_i_sq: vec![f64::INFINITY; n],
    };
    let mut table = if store { Some(vec![0.0; n * n]) } else { None };
    for i in 0..n {
        for j in (i + 1)..n {
            let delta = profile.compute(i, j);
            if let Some(t) = table.as_mut() {
                t[i * n + j] = delta;
                t[j * n + i] = delta;
            }
            profile.beta_i_sq[i] = profile.beta_i_sq[i].min(delta);
            profile.beta_i_sq[j] = profile.beta_i_sq[j].min(delta);
        }
    }
    profile.beta_sq = profile
        .beta_i_sq
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    profile.table = table;
    Ok(profile)
}

impl SeparationProfile {
    pub fn n(&self) -> usize {
        self.u.rows()
    }

    pub fn is_streaming(&self) -> bool {
        self.table.is_none()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_max
    }

    fn compute(&self, i: usize, j: usize) -> f64 {
        let a = self.u.row(i);
        let b = self.u.row(j);
        let mut acc = 0.0;
        for ((x, y), dk) in a.iter().zip(b).zip(&self.d) {
            let t = (x - y) * dk;
            acc += t * t;
        }
        acc / (self.sigma_max * self.sigma_max)
    }

    /// `Δ_{ij}`; the diagonal is zero.
    pub fn delta(&self, i: usize, j: usize) -> f64 {
        if i == j {
            return 0.0;
        }
        match &self.table {
            Some(t) => t[i * self.n() + j],
            None => self.compute(i, j),
        }
    }

    /// Replaces every separation by a fixed value (used to probe limits).
    pub fn with_uniform_delta(n: usize, delta: f64) -> SeparationProfile {
        SeparationProfile {
            u: DenseMatrix::zeros(n, 0),
            d: Vec::new(),
            sigma_max: 1.0,
            table: Some(
                (0..n * n)
                    .map(|k| if k / n == k % n { 0.0 } else { delta })
                    .collect(),
            ),
            beta_sq: delta,
            beta_i_sq: vec![delta; n],
        }
    }

    /// Profile from an explicit symmetric table (diagonal ignored).
    pub fn from_table(n: usize, table: Vec<f64>) -> Result<SeparationProfile> {
        if table.len() != n * n || n < 2 {
            return Err(Error::arg("table must be n x n with n >= 2"));
        }
        let mut beta_i_sq = vec![f64::INFINITY; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = table[i * n + j];
                if !(v >= 0.0) || v != table[j * n + i] {
                    return Err(Error::arg(format!(
                        "entry ({i}, {j}) must be non-negative and symmetric"
                    )));
                }
                beta_i_sq[i] = beta_i_sq[i].min(v);
            }
        }
        let beta_sq = beta_i_sq.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(SeparationProfile {
            u: DenseMatrix::zeros(n, 0),
            d: Vec::new(),
            sigma_max: 1.0,
            table: Some(table),
            beta_sq,
            beta_i_sq,
        })
    }

    /// `Σ_{i'≠i} f(Δ_{ii'})`, order independent.
    pub fn row_sum(&self, i: usize, f: impl Fn(f64) -> f64) -> f64 {
        let mut terms = Vec::with_capacity(self.n().saturating_sub(1));
        self.row_sum_into(i, &f, &mut terms)
    }

    fn row_sum_into(&self, i: usize, f: &impl Fn(f64) -> f64, buf: &mut Vec<f64>) -> f64 {
        buf.clear();
        for j in 0..self.n() {
            if j != i {
                buf.push(f(self.delta(i, j)));
            }
        }
        order_independent_sum(buf)
    }

    /// `Σ_{i≠i'} f(Δ_{ii'})` over ordered pairs, order independent.
    pub fn pair_sum(&self, f: impl Fn(f64) -> f64) -> f64 {
        let mut buf = Vec::with_capacity(self.n());
        let mut rows: Vec<f64> = (0..self.n())
            .map(|i| self.row_sum_into(i, &f, &mut buf))
            .collect();
        order_independent_sum(&mut rows)
    }
}

/// `(1/n)·Σ_{i≠i'} Φ(−√(Δ_{ii'}/2))`.
pub fn minimax_lower_bound(profile: &SeparationProfile) -> f64 {
    profile.pair_sum(|delta| normal_cdf(-(delta / 2.0).sqrt())) / profile.n() as f64
}

/// `(1/n)·Σ_{i≠i'} exp(−Δ_{ii'}/4)`, the sharp exponential rate.
pub fn minimax_rate_exp(profile: &SeparationProfile) -> f64 {
    minimax_rate_exp_with_delta(profile, 0.0)
}

pub fn minimax_rate_exp_with_delta(profile: &SeparationProfile, delta: f64) -> f64 {
    profile.pair_sum(|d| (-(1.0 - delta) * d / 4.0).exp()) / profile.n() as f64
}

/// `(1/n)·Σ_{i≠i'} exp(−C6·Δ_{ii'})`.
pub fn upper_rate_c6(profile: &SeparationProfile) -> f64 {
    upper_rate_c6_with_delta(profile, 0.0)
}

pub fn upper_rate_c6_with_delta(profile: &SeparationProfile, delta: f64) -> f64 {
    profile.pair_sum(|d| (-(1.0 - delta) * C6 * d).exp()) / profile.n() as f64
}

/// Scalar summary of a configuration, the inputs of the closed-form rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamsSummary {
    pub n: usize,
    pub p: usize,
    pub r: usize,
    pub beta_sq: f64,
    /// Largest signal singular value.
    pub d_1: f64,
    /// Smallest signal singular value.
    pub d_r: f64,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl ParamsSummary {
    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::arg("rates need n >= 2 so that log n > 0"));
        }
        if !(self.d_r > 0.0) {
            return Err(Error::arg("smallest signal singular value must be positive"));
        }
        if self.p == 0 || self.r == 0 {
            return Err(Error::arg("p and r must be positive"));
        }
        Ok(())
    }

    fn log_n(&self) -> f64 {
        (self.n as f64).ln()
    }
}

/// `E_unif = √(r·p·log n) / (d_r/σ_min)`.
pub fn e_unif(s: &ParamsSummary) -> Result<f64> {
    s.check()?;
    Ok((s.r as f64 * s.p as f64 * s.log_n()).sqrt() * s.sigma_min / s.d_r)
}

/// Leave-one-cycle-out subspace error bound
/// `√(μr)(√p + √log n)(d_1/d_r) / (√n·d_r/σ_min) + (√p + √log n)² / (d_r/σ_min)²`.
pub fn e_loco(s: &ParamsSummary, mu: f64) -> Result<f64> {
    s.check()?;
    let spread = (s.p as f64).sqrt() + s.log_n().sqrt();
    let snr = s.d_r / s.sigma_min;
    let first = (mu * s.r as f64).sqrt() * spread * (s.d_1 / s.d_r) / ((s.n as f64).sqrt() * snr);
    let second = spread * spread / (snr * snr);
    Ok(first + second)
}

/// `ω_n = (d_1²/σ_max²)/p · E_unif²`.
pub fn omega_n(s: &ParamsSummary) -> Result<f64> {
    let e = e_unif(s)?;
    Ok((s.d_1 * s.d_1 / (s.sigma_max * s.sigma_max)) / s.p as f64 * e * e)
}

/// Unit-constant polynomial rate `(p/β²)·E_unif·(n^{-1/2} + p^{-1/2}) + r/β²`.
/// An order-of-magnitude diagnostic: the true bound carries an unknown constant.
pub fn poly_rate(s: &ParamsSummary) -> Result<f64> {
    if !(s.beta_sq > 0.0) {
        return Err(Error::arg("polynomial rate undefined for zero separation"));
    }
    let e = e_unif(s)?;
    let (n, p) = (s.n as f64, s.p as f64);
    Ok(p / s.beta_sq * e * (n.powf(-0.5) + p.powf(-0.5)) + s.r as f64 / s.beta_sq)
}

/// `μ = n·max_i ‖U_i‖² / r`, clamped to `[1, n]`.
pub fn incoherence_mu(u: &DenseMatrix) -> Result<f64> {
    let (n, r) = u.shape();
    if n == 0 || r == 0 {
        return Err(Error::arg("incoherence needs a non-empty U"));
    }
    let max_sq = u
        .row_iter()
        .map(|row| row.iter().map(|v| v * v).sum::<f64>())
        .fold(0.0, f64::max);
    Ok((n as f64 * max_sq / r as f64).clamp(1.0, n as f64))
}

/// Every rate and diagnostic for one configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBundle {
    pub lower_bound: f64,
    pub lower_bound_exp: f64,
    pub upper_sharp: f64,
    pub upper_c6: f64,
    /// `+∞` when the minimum separation is zero.
    pub poly_rate: f64,
    pub e_unif: f64,
    pub e_loco: f64,
    pub omega_n: f64,
    pub incoherence_mu: f64,
    pub beta_sq: f64,
}

impl RateBundle {
    pub const CSV_HEADER: &'static str =
        "lower_bound,rate_exp,rate_c6,poly_rate,e_unif,e_loco,omega_n,mu,beta_sq";

    /// One CSV data row matching [`RateBundle::CSV_HEADER`].
    pub fn csv_row(&self) -> String {
        [
            self.lower_bound,
            self.upper_sharp,
            self.upper_c6,
            self.poly_rate,
            self.e_unif,
            self.e_loco,
            self.omega_n,
            self.incoherence_mu,
            self.beta_sq,
        ]
        .iter()
        .map(|v| format_real(*v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

pub(crate) fn format_real(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

/// Evaluates all rates for signal factors `u`, `d` in ambient dimension `p`.
pub fn rate_bundle(u: &DenseMatrix, d: &[f64], p: usize, sigma_x: f64, sigma_y: f64) -> Result<RateBundle> {
    let sigma_max = sigma_x.max(sigma_y);
    let sigma_min = sigma_x.min(sigma_y);
    let profile = separation_profile(u, d, sigma_max)?;
    bundle_from_profile(&profile, u, d, p, sigma_min)
}

pub fn bundle_from_profile(
    profile: &SeparationProfile,
    u: &DenseMatrix,
    d: &[f64],
    p: usize,
    sigma_min: f64,
) -> Result<RateBundle> {
    let summary = ParamsSummary {
        n: u.rows(),
        p,
        r: d.len(),
        beta_sq: profile.beta_sq,
        d_1: d.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        d_r: d.iter().copied().fold(f64::INFINITY, f64::min),
        sigma_min,
        sigma_max: profile.sigma_max(),
    };
    let mu = incoherence_mu(u)?;
    let sharp = minimax_rate_exp(profile);
    Ok(RateBundle {
        lower_bound: minimax_lower_bound(profile),
        lower_bound_exp: sharp,
        upper_sharp: sharp,
        upper_c6: upper_rate_c6(profile),
        poly_rate: if profile.beta_sq > 0.0 { poly_rate(&summary)? } else { f64::INFINITY },
        e_unif: e_unif(&summary)?,
        e_loco: e_loco(&summary, mu)?,
        omega_n: omega_n(&summary)?,
        incoherence_mu: mu,
        beta_sq: profile.beta_sq,
    })
}

/// Energies `E_{i,k}` and symmetry flags for one cycle length.
#[derive(Debug, Clone)]
pub struct SymmetryLevel {
    pub k: usize,
    pub c_k: f64,
    /// `E_{i,k} = Σ_{i'≠i} exp(−C_k·Δ_{ii'})` for every row.
    pub energies: Vec<f64>,
    /// `max_i E_{i,k} ≤ (1/n)·Σ_i E_{i,k}`.
    pub weak_by_energy: bool,
    /// `max_i exp(−C_k β_i²) ≤ (1/n)·Σ_i exp(−C_k β_i²)`, the per-row
    /// minimum-separation form of the weak condition.
    pub weak_by_separation: bool,
    /// `E_{i,k}^k ≤ Σ_{i'≠i} exp(−k·C_k·Δ_{ii'})` for every row; only for `2 ≤ k ≤ 6`.
    pub strong: Option<bool>,
}

impl SymmetryLevel {
    /// Row attaining `max_i E_{i,k}` (first one on ties).
    pub fn argmax_energy(&self) -> usize {
        let mut best = 0;
        for (i, &e) in self.energies.iter().enumerate() {
            if e > self.energies[best] {
                best = i;
            }
        }
        best
    }
}

fn le_rel(a: f64, b: f64) -> bool {
    a <= b + SYMMETRY_RTOL * b.abs().max(a.abs())
}

/// `E_{i,k}` for `k = 1..=k_max` with the weak and strong symmetry checks.
pub fn symmetry_diagnostics(profile: &SeparationProfile, k_max: usize) -> Result<Vec<SymmetryLevel>> {
    if !(1..=6).contains(&k_max) {
        return Err(Error::arg(format!("k_max must lie in 1..=6, got {k_max}")));
    }
    let n = profile.n();
    let mut levels = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let c_k = ck_constant(k)?;
        let energies: Vec<f64> = (0..n).map(|i| profile.row_sum(i, |d| (-c_k * d).exp())).collect();
        let mean = order_independent_sum(&mut energies.clone()) / n as f64;
        let max = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);

        let sep: Vec<f64> = profile.beta_i_sq.iter().map(|b| (-c_k * b).exp()).collect();
        let sep_mean = order_independent_sum(&mut sep.clone()) / n as f64;
        let sep_max = sep.iter().copied().fold(f64::NEG_INFINITY, f64::max);

        let strong = (k >= 2).then(|| {
            (0..n).all(|i| {
                let lhs = energies[i].powi(k as i32);
                let rhs = profile.row_sum(i, |d| (-(k as f64) * c_k * d).exp());
                le_rel(lhs, rhs)
            })
        });
        levels.push(SymmetryLevel {
            k,
            c_k,
            weak_by_energy: le_rel(max, mean),
            weak_by_separation: le_rel(sep_max, sep_mean),
            strong,
            energies,
        });
    }
    Ok(levels)
}
