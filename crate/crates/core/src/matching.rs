//! LAPS and naive matching.
//!
//! Both strategies solve a linear assignment on squared Euclidean distances.
//! LAPS first projects both datasets onto the top-`r` right singular subspace
//! of one of them. The returned permutation reads: row `i` of `x` is matched
//! to row `π̂_i` of `y`.

use crate::assignment::{build_cost, solve, Permutation};
use crate::error::{Error, Result};
use crate::linalg::{project, singular_values, truncated_svd, DenseMatrix};

/// Singular values below this fraction of the largest are treated as zero
/// when checking the requested rank.
pub const RANK_WARNING_RATIO: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisSource {
    FromX,
    FromY,
    /// Pick the dataset with the smaller residual-spectrum noise estimate.
    Auto,
}

impl std::str::FromStr for BasisSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" | "from-x" | "fromx" => Ok(BasisSource::FromX),
            "y" | "from-y" | "fromy" => Ok(BasisSource::FromY),
            "auto" => Ok(BasisSource::Auto),
            other => Err(Error::arg(format!("unknown basis source '{other}' (expected x, y or auto)"))),
        }
    }
}

impl std::fmt::Display for BasisSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            BasisSource::FromX => "x",
            BasisSource::FromY => "y",
            BasisSource::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone)]
pub struct LapsOutcome {
    pub permutation: Permutation,
    /// `p x r` orthonormal basis the data were projected on.
    pub basis: DenseMatrix,
    /// `FromX` or `FromY`, never `Auto`.
    pub source: BasisSource,
    /// Assignment cost `Σ_i ‖(x_i − y_{π̂_i})·V̂‖²`.
    pub objective: f64,
    pub warnings: Vec<String>,
}

fn check_pair(x: &DenseMatrix, y: &DenseMatrix) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::arg(format!(
            "x is {}x{} but y is {}x{}",
            x.rows(),
            x.cols(),
            y.rows(),
            y.cols()
        )));
    }
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::arg("datasets must be non-empty"));
    }
    x.ensure_finite()?;
    y.ensure_finite()
}

/// Linear assignment on the projections `x·V̂` and `y·V̂`, where `V̂` holds the
/// top-`r` right singular vectors of the chosen source.
pub fn laps_match(x: &DenseMatrix, y: &DenseMatrix, r: usize, source: BasisSource) -> Result<LapsOutcome> {
    check_pair(x, y)?;
    let (n, p) = x.shape();
    if r == 0 || r > n.min(p) {
        return Err(Error::arg(format!("rank {r} out of range 1..={}", n.min(p))));
    }
    let source = match source {
        BasisSource::Auto => detect_less_noisy(x, y, r)?,
        s => s,
    };
    let data = if source == BasisSource::FromX { x } else { y };
    if data.frobenius_norm() == 0.0 {
        return Err(Error::Numerical {
            message: format!("basis source {source} is identically zero"),
            iterations: 0,
        });
    }
    let svd = truncated_svd(data, r)?;
    let mut warnings = Vec::new();
    let s1 = svd.singular_values[0];
    let detectable = svd
        .singular_values
        .iter()
        .filter(|&&s| s > RANK_WARNING_RATIO * s1)
        .count();
    if detectable < r {
        warnings.push(format!(
            "requested rank {r} exceeds numerical rank {detectable} of the basis source"
        ));
    }
    let basis = svd.right;
    let px = project(x, &basis)?;
    let py = project(y, &basis)?;
    let cost = build_cost(&px, &py)?;
    let permutation = solve(&cost)?;
    let objective = cost.objective(&permutation);
    Ok(LapsOutcome {
        permutation,
        basis,
        source,
        objective,
        warnings,
    })
}

/// Linear assignment on the raw rows.
pub fn naive_match(x: &DenseMatrix, y: &DenseMatrix) -> Result<Permutation> {
    check_pair(x, y)?;
    solve(&build_cost(x, y)?)
}

/// Residual noise variance `Σ_{i>r} s_i² / ((n − r)·p)` from the full spectrum.
pub fn residual_noise_variance(a: &DenseMatrix, r: usize) -> Result<f64> {
    let (n, p) = a.shape();
    if r >= n.min(p) {
        return Err(Error::arg(format!(
            "rank {r} leaves no residual spectrum for a {n}x{p} matrix"
        )));
    }
    let s = singular_values(a)?;
    let tail: f64 = s[r..].iter().map(|v| v * v).sum();
    Ok(tail / ((n - r) as f64 * p as f64))
}

/// The dataset with the smaller residual noise estimate; ties go to `FromX`.
pub fn detect_less_noisy(x: &DenseMatrix, y: &DenseMatrix, r: usize) -> Result<BasisSource> {
    check_pair(x, y)?;
    let vx = residual_noise_variance(x, r)?;
    let vy = residual_noise_variance(y, r)?;
    Ok(if vy < vx { BasisSource::FromY } else { BasisSource::FromX })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assignment::brute_force_solve;
    use crate::evaluation::mismatch_loss;
    use crate::model::{make_signal_sweep_params, sample_haar_orthonormal, sample_pair};
    use crate::rng::SeededRng;

    fn pair(seed: u64, n: usize, p: usize, r: usize, signal: f64, sx: f64, sy: f64) -> crate::model::DatasetPair {
        let mut rng = SeededRng::new(seed);
        let params = make_signal_sweep_params(&mut rng, n, p, r, signal, sx, sy).unwrap();
        sample_pair(&mut rng, &params).unwrap()
    }

    #[test]
    fn noiseless_recovery() {
        for seed in 0..5 {
            let data = pair(seed, 40, 12, 3, 50.0, 0.0, 0.0);
            let out = laps_match(&data.x, &data.y, 3, BasisSource::FromX).unwrap();
            assert_eq!(out.permutation, data.params.pi_star);
            assert!(out.warnings.is_empty());
        }
    }

    #[test]
    fn high_snr_recovery() {
        for seed in 0..5 {
            let data = pair(100 + seed, 100, 50, 5, 400.0, 0.01, 0.01);
            let out = laps_match(&data.x, &data.y, 5, BasisSource::FromX).unwrap();
            assert_eq!(mismatch_loss(&out.permutation, &data.params.pi_star).unwrap(), 0.0);
        }
    }

    #[test]
    fn full_rank_laps_equals_naive() {
        let mut rng = SeededRng::new(9);
        for _ in 0..10 {
            let x = DenseMatrix::from_vec(20, 8, rng.gaussian_vec(160)).unwrap();
            let y = DenseMatrix::from_vec(20, 8, rng.gaussian_vec(160)).unwrap();
            let laps = laps_match(&x, &y, 8, BasisSource::FromX).unwrap();
            let naive = naive_match(&x, &y).unwrap();
            let raw = build_cost(&x, &y).unwrap();
            let a = raw.objective(&laps.permutation);
            let b = raw.objective(&naive);
            assert!((a - b).abs() <= 1e-8 * b.abs().max(1.0));
            assert!((laps.objective - b).abs() <= 1e-8 * b.abs().max(1.0));
        }
    }

    #[test]
    fn basis_rotation_leaves_objective() {
        let data = pair(3, 60, 20, 4, 80.0, 1.0, 1.0);
        let out = laps_match(&data.x, &data.y, 4, BasisSource::FromX).unwrap();
        let mut rng = SeededRng::new(4);
        let q = sample_haar_orthonormal(&mut rng, 4, 4).unwrap();
        let rotated = out.basis.matmul(&q).unwrap();
        let cost = build_cost(&project(&data.x, &rotated).unwrap(), &project(&data.y, &rotated).unwrap()).unwrap();
        let again = solve(&cost).unwrap();
        let obj = cost.objective(&again);
        assert!((obj - out.objective).abs() <= 1e-8 * out.objective);
    }

    #[test]
    fn scaling_scales_objective() {
        let data = pair(5, 50, 15, 3, 60.0, 1.0, 1.0);
        let out = laps_match(&data.x, &data.y, 3, BasisSource::FromX).unwrap();
        let c = 3.5;
        let scaled = laps_match(&data.x.scaled(c), &data.y.scaled(c), 3, BasisSource::FromX).unwrap();
        assert!((scaled.objective - c * c * out.objective).abs() <= 1e-8 * scaled.objective);
    }

    #[test]
    fn common_row_shift_keeps_optimum() {
        let mut rng = SeededRng::new(6);
        for _ in 0..50 {
            let x = DenseMatrix::from_vec(6, 3, rng.gaussian_vec(18)).unwrap();
            let y = DenseMatrix::from_vec(6, 3, rng.gaussian_vec(18)).unwrap();
            let shift = rng.gaussian_vec(3);
            let y_shift = DenseMatrix::from_fn(6, 3, |i, j| y.get(i, j) + shift[j]);
            let original = naive_match(&x, &y).unwrap();
            let cost = build_cost(&x, &y_shift).unwrap();
            let best = cost.objective(&brute_force_solve(&cost).unwrap());
            let ours = cost.objective(&original);
            assert!((ours - best).abs() <= 1e-9 * best.abs().max(1.0));
        }
    }

    #[test]
    fn auto_detection() {
        let data = pair(7, 200, 30, 5, 200.0, 1.0, 1.5);
        assert_eq!(detect_less_noisy(&data.x, &data.y, 5).unwrap(), BasisSource::FromX);
        assert_eq!(detect_less_noisy(&data.y, &data.x, 5).unwrap(), BasisSource::FromY);
        assert_eq!(detect_less_noisy(&data.x, &data.x, 5).unwrap(), BasisSource::FromX);
        let out = laps_match(&data.x, &data.y, 5, BasisSource::Auto).unwrap();
        assert_eq!(out.source, BasisSource::FromX);
        assert!(detect_less_noisy(&data.x, &data.y, 30).is_err());
    }

    #[test]
    fn errors_and_warnings() {
        let x = DenseMatrix::zeros(5, 3);
        assert!(matches!(
            laps_match(&x, &x, 2, BasisSource::FromX),
            Err(Error::Numerical { .. })
        ));
        let y = DenseMatrix::zeros(5, 4);
        assert!(laps_match(&x, &y, 2, BasisSource::FromX).is_err());
        assert!(naive_match(&x, &y).is_err());
        let ones = DenseMatrix::from_fn(5, 3, |i, _| i as f64 + 1.0);
        assert!(laps_match(&ones, &ones, 0, BasisSource::FromX).is_err());
        assert!(laps_match(&ones, &ones, 4, BasisSource::FromX).is_err());
        let out = laps_match(&ones, &ones, 2, BasisSource::FromY).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert_eq!(out.source, BasisSource::FromY);
    }
}
