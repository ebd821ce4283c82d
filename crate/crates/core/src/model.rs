//! The paired low-rank Gaussian model and structured parameter configurations.
//!
//! A pair `(X, Y)` is generated as
//!
//! ```text
//! X     = U·D·Vᵀ + σx·Nx
//! Π*·Y  = U·D·Vᵀ + σy·Ny
//! ```
//!
//! with `U`, `V` orthonormal, `D` diagonal with descending positive entries and
//! independent standard Gaussian noise. Row `i` of `X` is the partner of row
//! `π*_i` of `Y`.

use crate::assignment::Permutation;
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_factor, truncated_svd, DenseMatrix};
use crate::rng::SeededRng;

const ORTHONORMAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct ModelParams {
    /// `n x r`, orthonormal columns.
    pub u: DenseMatrix,
    /// Descending, strictly positive, length `r`.
    pub d: Vec<f64>,
    /// `p x r`, orthonormal columns.
    pub v: DenseMatrix,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub pi_star: Permutation,
}

impl ModelParams {
    pub fn new(
        u: DenseMatrix,
        d: Vec<f64>,
        v: DenseMatrix,
        sigma_x: f64,
        sigma_y: f64,
        pi_star: Permutation,
    ) -> Result<Self> {
        let params = ModelParams {
            u,
            d,
            v,
            sigma_x,
            sigma_y,
            pi_star,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn n(&self) -> usize {
        self.u.rows()
    }

    pub fn p(&self) -> usize {
        self.v.rows()
    }

    pub fn r(&self) -> usize {
        self.d.len()
    }

    pub fn sigma_max(&self) -> f64 {
        self.sigma_x.max(self.sigma_y)
    }

    pub fn sigma_min(&self) -> f64 {
        self.sigma_x.min(self.sigma_y)
    }

    /// `U·D·Vᵀ`.
    pub fn signal(&self) -> DenseMatrix {
        let ud = self.u.scale_columns(&self.d).expect("validated shapes");
        ud.matmul(&self.v.transpose()).expect("validated shapes")
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.d.len();
        if r == 0 {
            return Err(Error::arg("rank must be at least 1"));
        }
        if self.u.cols() != r || self.v.cols() != r {
            return Err(Error::arg(format!(
                "U is {}x{}, V is {}x{}, but D has {r} entries",
                self.u.rows(),
                self.u.cols(),
                self.v.rows(),
                self.v.cols()
            )));
        }
        if self.pi_star.len() != self.u.rows() {
            return Err(Error::arg(format!(
                "permutation has size {} but U has {} rows",
                self.pi_star.len(),
                self.u.rows()
            )));
        }
        if !self.d.iter().all(|&x| x > 0.0 && x.is_finite()) {
            return Err(Error::arg("singular values must be finite and positive"));
        }
        if self.d.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::arg("singular values must be non-increasing"));
        }
        if !(self.sigma_x >= 0.0 && self.sigma_y >= 0.0)
            || !self.sigma_x.is_finite()
            || !self.sigma_y.is_finite()
        {
            return Err(Error::arg("noise levels must be finite and non-negative"));
        }
        for (name, m) in [("U", &self.u), ("V", &self.v)] {
            let resid = m.orthonormality_residual();
            if resid > ORTHONORMAL_TOLERANCE {
                return Err(Error::arg(format!(
                    "{name} columns are not orthonormal (residual {resid:.3e})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct DatasetPair {
    pub x: DenseMatrix,
    pub y: DenseMatrix,
    pub params: ModelParams,
}

/// Haar-distributed `rows x cols` matrix with orthonormal columns: a Gaussian
/// matrix followed by QR with the sign of `diag(R)` fixed positive.
pub fn sample_haar_orthonormal(rng: &mut SeededRng, rows: usize, cols: usize) -> Result<DenseMatrix> {
    if cols == 0 || rows < cols {
        return Err(Error::arg(format!(
            "Haar sample needs rows >= cols >= 1, got {rows}x{cols}"
        )));
    }
    let g = DenseMatrix::from_vec(rows, cols, rng.gaussian_vec(rows * cols))?;
    orthonormal_factor(&g)
}

/// Draws `(X, Y)` from the model: `X = S + σx·Nx` and `Y = Π*ᵀ(S + σy·Ny)`
/// where `S = U·D·Vᵀ`. `Nx` is drawn before `Ny`, row by row.
pub fn sample_pair(rng: &mut SeededRng, params: &ModelParams) -> Result<DatasetPair> {
    params.validate()?;
    let signal = params.signal();
    let (n, p) = signal.shape();
    let mut x = signal.clone();
    for i in 0..n {
        for v in x.row_mut(i) {
            *v += params.sigma_x * rng.gaussian();
        }
    }
    let mut y = DenseMatrix::zeros(n, p);
    for i in 0..n {
        let dst = params.pi_star.get(i);
        let src = signal.row(i);
        for (out, &s) in y.row_mut(dst).iter_mut().zip(src) {
            *out = s + params.sigma_y * rng.gaussian();
        }
    }
    Ok(DatasetPair {
        x,
        y,
        params: params.clone(),
    })
}

/// `U`, `V` Haar, `d = sort_desc(signal × w)` with `w ~ unif(0,1)^r`, and `Π*`
/// uniform on permutations.
///
/// Draw order is `U`, `w`, `Π*`, then `V`, so configurations that share a
/// generator state agree on everything drawn before `V`.
pub fn make_signal_sweep_params(
    rng: &mut SeededRng,
    n: usize,
    p: usize,
    r: usize,
    signal: f64,
    sigma_x: f64,
    sigma_y: f64,
) -> Result<ModelParams> {
    if r == 0 {
        return Err(Error::arg("rank must be at least 1"));
    }
    if n < r || p < r {
        return Err(Error::arg(format!("need n >= r and p >= r, got n={n}, p={p}, r={r}")));
    }
    if !(signal > 0.0) {
        return Err(Error::arg(format!("signal must be positive, got {signal}")));
    }
    let u = sample_haar_orthonormal(rng, n, r)?;
    let d = signal_weights(rng, r, signal);
    let pi_star = Permutation::new(rng.permutation(n))?;
    let v = sample_haar_orthonormal(rng, p, r)?;
    ModelParams::new(u, d, v, sigma_x, sigma_y, pi_star)
}

/// `signal × w` sorted descending, with `w` i.i.d. uniform on `(0, 1)`.
pub fn signal_weights(rng: &mut SeededRng, r: usize, signal: f64) -> Vec<f64> {
    let mut w: Vec<f64> = (0..r).map(|_| rng.open_uniform()).collect();
    w.sort_by(|a, b| b.total_cmp(a));
    w.into_iter().map(|x| signal * x).collect()
}

/// Signal factors `U`, `D` built from an integer lattice; `V` is left to the caller.
#[derive(Debug, Clone)]
pub struct LatticeSignal {
    pub u: DenseMatrix,
    pub d: Vec<f64>,
    /// The integer lattice rows before scaling, `n x r`.
    pub lattice: DenseMatrix,
    /// Number of leading rows taken from the innermost lattice shells.
    pub core_rows: usize,
}

impl LatticeSignal {
    /// Completes the configuration with a right factor and noise levels.
    pub fn into_params(
        self,
        v: DenseMatrix,
        sigma_x: f64,
        sigma_y: f64,
        pi_star: Permutation,
    ) -> Result<ModelParams> {
        ModelParams::new(self.u, self.d, v, sigma_x, sigma_y, pi_star)
    }
}

/// Upper bound on lattice points enumerated before giving up.
const LATTICE_POINT_CAP: usize = 5_000_000;

/// Integer lattice configuration whose rows are pairwise at distance at least
/// `β·σ_max`, with the first `⌈a·n⌉` rows at exactly that distance from a neighbour.
///
/// Lattice points are visited shell by shell (increasing squared norm,
/// lexicographic within a shell). The first `⌈a·n⌉` visited points form the
/// core ball; the remaining rows continue the scan, accepting a point only if
/// it is at distance at least 1 from every row taken so far. `U` and `D` are the
/// left singular vectors and singular values of `β·σ_max·L`.
pub fn make_lattice_params(
    n: usize,
    r: usize,
    beta: f64,
    sigma_max: f64,
    fraction_a: f64,
) -> Result<LatticeSignal> {
    if r == 0 {
        return Err(Error::arg("rank must be at least 1"));
    }
    if !(fraction_a > 0.0 && fraction_a <= 1.0) {
        return Err(Error::arg(format!("fraction a must lie in (0, 1], got {fraction_a}")));
    }
    if !(beta > 0.0) || !(sigma_max > 0.0) {
        return Err(Error::arg("beta and sigma_max must be positive"));
    }
    if n < 2 {
        return Err(Error::arg("need at least two rows"));
    }
    let core_rows = ((fraction_a * n as f64).ceil() as usize).clamp(1, n);

    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut radius: i64 = 0;
    let mut visited = 0usize;
    'shells: loop {
        let shell = lattice_shell(r, radius, &mut visited)?;
        for point in shell {
            if rows.len() >= core_rows && !far_enough(&rows, &point) {
                continue;
            }
            rows.push(point);
            if rows.len() == n {
                break 'shells;
            }
        }
        radius += 1;
    }

    if n < r {
        return Err(Error::Construction(format!("{n} lattice rows cannot span {r} dimensions")));
    }
    let lattice = DenseMatrix::from_fn(n, r, |i, j| rows[i][j] as f64);
    let scaled = lattice.scaled(beta * sigma_max);
    let svd = truncated_svd(&scaled, r)?;
    let tiny = svd.singular_values[0] * 1e-12;
    if svd.singular_values.iter().any(|&s| s <= tiny) {
        return Err(Error::Construction(format!(
            "lattice rows span fewer than {r} dimensions; increase n"
        )));
    }
    Ok(LatticeSignal {
        u: svd.left,
        d: svd.singular_values,
        lattice,
        core_rows,
    })
}

fn far_enough(rows: &[Vec<i64>], point: &[i64]) -> bool {
    rows.iter().all(|row| {
        let d2: i64 = row.iter().zip(point).map(|(a, b)| (a - b) * (a - b)).sum();
        d2 >= 1
    })
}

/// Integer points with squared norm in `((radius-1)², radius²]`, ordered by
/// squared norm then lexicographically.
fn lattice_shell(r: usize, radius: i64, visited: &mut usize) -> Result<Vec<Vec<i64>>> {
    let radius_sq = radius * radius;
    let inner = if radius == 0 { -1 } else { (radius - 1) * (radius - 1) };
    let mut out = Vec::new();
    let mut point = vec![-radius; r];
    loop {
        let norm: i64 = point.iter().map(|c| c * c).sum();
        if norm > inner && norm <= radius_sq {
            out.push(point.clone());
        }
        *visited += 1;
        if *visited > LATTICE_POINT_CAP {
            return Err(Error::Construction(format!(
                "lattice exhausted after {LATTICE_POINT_CAP} candidate points"
            )));
        }
        // odometer increment over [-radius, radius]^r
        let mut k = r;
        loop {
            if k == 0 {
                out.sort_by(|a, b| {
                    let na: i64 = a.iter().map(|c| c * c).sum();
                    let nb: i64 = b.iter().map(|c| c * c).sum();
                    na.cmp(&nb).then_with(|| a.cmp(b))
                });
                return Ok(out);
            }
            k -= 1;
            if point[k] < radius {
                point[k] += 1;
                for c in point.iter_mut().skip(k + 1) {
                    *c = -radius;
                }
                break;
            }
        }
    }
}
