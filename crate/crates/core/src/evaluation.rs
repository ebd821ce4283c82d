//! Losses and error structure of estimated permutations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Duration;

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::matching::{BasisSource, LapsOutcome};
use crate::theory::RateBundle;

fn same_len(a: &Permutation, b: &Permutation) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::arg(format!(
            "permutation sizes differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::arg("permutations must be non-empty"));
    }
    Ok(())
}

/// Number of rows with `π̂_i ≠ π*_i`.
pub fn mismatch_count(pi_hat: &Permutation, pi_star: &Permutation) -> Result<usize> {
    same_len(pi_hat, pi_star)?;
    Ok(pi_hat
        .as_slice()
        .iter()
        .zip(pi_star.as_slice())
        .filter(|(a, b)| a != b)
        .count())
}

/// Fraction of rows assigned to the wrong partner.
pub fn mismatch_loss(pi_hat: &Permutation, pi_star: &Permutation) -> Result<f64> {
    Ok(mismatch_count(pi_hat, pi_star)? as f64 / pi_hat.len() as f64)
}

/// Error cycles between an estimate and the truth, keyed by cycle length (≥ 2).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CycleHistogram {
    pub counts: BTreeMap<usize, usize>,
}

impl CycleHistogram {
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `Σ_k k·counts[k]`, the number of mismatched rows.
    pub fn mismatches(&self) -> usize {
        self.counts.iter().map(|(k, c)| k * c).sum()
    }
}

impl fmt::Display for CycleHistogram {
    /// Space separated `k:count` pairs in increasing `k`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|(k, c)| format!("{k}:{c}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Cycles of `σ = π*⁻¹ ∘ π̂`, i.e. `σ(i) = j` with `π*_j = π̂_i`.
///
/// A `k`-cycle `i_1 → i_2 → … → i_k → i_1` of `σ` is exactly the event
/// `π̂_{i_1} = π*_{i_2}, …, π̂_{i_k} = π*_{i_1}`: each row in it took the true
/// partner of the next. For `π* = (0,1,2)` and `π̂ = (1,2,0)` the single
/// 3-cycle is `0 → 1 → 2 → 0`. Fixed points are dropped.
pub fn cycle_decompose(pi_hat: &Permutation, pi_star: &Permutation) -> Result<CycleHistogram> {
    same_len(pi_hat, pi_star)?;
    let sigma = pi_star.inverse().compose(pi_hat)?;
    let n = sigma.len();
    let mut seen = vec![false; n];
    let mut counts = BTreeMap::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = sigma.get(i);
            len += 1;
        }
        if len >= 2 {
            *counts.entry(len).or_insert(0) += 1;
        }
    }
    Ok(CycleHistogram { counts })
}

/// Agreement of category labels under a matching.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelConfusion {
    /// Fraction of rows with `labels_x[i] = labels_y[π̂_i]`.
    pub accuracy: f64,
    /// First appearance in `labels_x`, then categories only seen in `labels_y`.
    pub categories: Vec<String>,
    /// `counts[a][b] = #{i : labels_x[i] = a, labels_y[π̂_i] = b}`.
    pub counts: Vec<Vec<usize>>,
}

impl LabelConfusion {
    /// Each row divided by its total; empty rows stay zero.
    pub fn row_normalized(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| {
                let total: usize = row.iter().sum();
                row.iter()
                    .map(|&c| if total == 0 { 0.0 } else { c as f64 / total as f64 })
                    .collect()
            })
            .collect()
    }

    /// CSV with a `label,<categories...>` header and one row per category.
    pub fn to_csv(&self, normalize: bool) -> String {
        let mut out = String::from("label");
        for c in &self.categories {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        let normalized = normalize.then(|| self.row_normalized());
        for (a, name) in self.categories.iter().enumerate() {
            out.push_str(name);
            for b in 0..self.categories.len() {
                out.push(',');
                match &normalized {
                    Some(m) => out.push_str(&m[a][b].to_string()),
                    None => out.push_str(&self.counts[a][b].to_string()),
                }
            }
            out.push('\n');
        }
        out
    }
}

pub fn label_confusion<S: AsRef<str>>(
    pi_hat: &Permutation,
    labels_x: &[S],
    labels_y: &[S],
) -> Result<LabelConfusion> {
    let n = pi_hat.len();
    if labels_x.len() != n || labels_y.len() != n {
        return Err(Error::arg(format!(
            "label lengths ({}, {}) do not match permutation size {n}",
            labels_x.len(),
            labels_y.len()
        )));
    }
    if n == 0 {
        return Err(Error::arg("no labels given"));
    }
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut categories = Vec::new();
    for label in labels_x.iter().chain(labels_y) {
        let label = label.as_ref();
        if !index.contains_key(label) {
            index.insert(label, categories.len());
            categories.push(label.to_string());
        }
    }
    let k = categories.len();
    let mut counts = vec![vec![0usize; k]; k];
    let mut agree = 0usize;
    for i in 0..n {
        let a = labels_x[i].as_ref();
        let b = labels_y[pi_hat.get(i)].as_ref();
        counts[index[a]][index[b]] += 1;
        if a == b {
            agree += 1;
        }
    }
    Ok(LabelConfusion {
        accuracy: agree as f64 / n as f64,
        categories,
        counts,
    })
}

/// Matching result with its diagnostics.
#[derive(Debug, Clone)]
pub struct MatchReport {
    pub permutation: Permutation,
    /// Present when the true permutation is known.
    pub loss: Option<f64>,
    pub cycles: Option<CycleHistogram>,
    pub objective: f64,
    pub wall_time: Duration,
    pub basis_source: BasisSource,
    pub warnings: Vec<String>,
    pub theory: Option<RateBundle>,
}

impl MatchReport {
    pub fn from_outcome(outcome: LapsOutcome, wall_time: Duration) -> Self {
        MatchReport {
            permutation: outcome.permutation,
            loss: None,
            cycles: None,
            objective: outcome.objective,
            wall_time,
            basis_source: outcome.source,
            warnings: outcome.warnings,
            theory: None,
        }
    }

    /// Fills in the loss and cycle histogram against the truth.
    pub fn score(mut self, pi_star: &Permutation) -> Result<Self> {
        self.loss = Some(mismatch_loss(&self.permutation, pi_star)?);
        self.cycles = Some(cycle_decompose(&self.permutation, pi_star)?);
        Ok(self)
    }

    pub fn with_theory(mut self, bundle: RateBundle) -> Self {
        self.theory = Some(bundle);
        self
    }
}
