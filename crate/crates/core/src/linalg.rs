//! Dense row-major matrices and the kernels the matcher is built on:
//! Householder QR, one-sided Jacobi SVD, projections and norms.
//!
//! The SVD reduces a tall matrix to its `p x p` triangular factor with a
//! Householder QR and then runs cyclic one-sided (Hestenes) Jacobi on that
//! factor; wide matrices are handled through their transpose. All kernels are
//! single-threaded and deterministic.

use std::fmt;

use crate::error::{Error, Result};

/// Off-diagonal mass (relative column coherence) below which a sweep counts as converged.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Maximum number of Jacobi sweeps before reporting non-convergence.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(8) {
            writeln!(f, "  {:?}", &self.row(i)[..self.cols.min(8)])?;
        }
        write!(f, "]")
    }
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::arg(format!(
                "data length {} does not match shape {rows}x{cols}",
                data.len()
            )));
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::arg(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Returns an argument error naming the first non-finite entry.
    pub fn ensure_finite(&self) -> Result<()> {
        match self.data.iter().position(|v| !v.is_finite()) {
            None => Ok(()),
            Some(k) => Err(Error::arg(format!(
                "non-finite entry {} at ({}, {})",
                self.data[k],
                k / self.cols.max(1),
                k % self.cols.max(1)
            ))),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::arg(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ · other`.
    pub fn transpose_matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.rows != other.rows {
            return Err(Error::arg(format!(
                "cannot multiply ({}x{})ᵀ by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DenseMatrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            let b_row = other.row(k);
            for (i, &a) in self.row(k).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn scaled(&self, factor: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    /// Multiplies column `j` by `factors[j]`, i.e. `self · diag(factors)`.
    pub fn scale_columns(&self, factors: &[f64]) -> Result<DenseMatrix> {
        if factors.len() != self.cols {
            return Err(Error::arg(format!(
                "{} column factors for a matrix with {} columns",
                factors.len(),
                self.cols
            )));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            for (v, f) in out.row_mut(i).iter_mut().zip(factors) {
                *v *= f;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_same_shape(other)?;
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Rows reordered so that row `i` of the result is row `order[i]` of `self`.
    pub fn select_rows(&self, order: &[usize]) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(order.len(), self.cols);
        for (i, &src) in order.iter().enumerate() {
            out.row_mut(i).copy_from_slice(self.row(src));
        }
        out
    }

    /// `‖selfᵀ·self − I‖_F`, the orthonormality residual of the columns.
    pub fn orthonormality_residual(&self) -> f64 {
        let gram = self
            .transpose_matmul(self)
            .expect("a matrix is always conformable with itself");
        let mut acc = 0.0;
        for i in 0..gram.rows {
            for j in 0..gram.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                let d = gram.get(i, j) - target;
                acc += d * d;
            }
        }
        acc.sqrt()
    }

    fn check_same_shape(&self, other: &DenseMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::arg(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let k = 4 * c;
        acc[0] += a[k] * b[k];
        acc[1] += a[k + 1] * b[k + 1];
        acc[2] += a[k + 2] * b[k + 2];
        acc[3] += a[k + 3] * b[k + 3];
    }
    let mut tail = 0.0;
    for k in 4 * chunks..a.len() {
        tail += a[k] * b[k];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yv, &xv) in y.iter_mut().zip(x) {
        *yv += alpha * xv;
    }
}

/// Thin Householder QR of a tall matrix, returned in column-major form.
struct ThinQr {
    /// Columns of `Q` (each of length `rows`), `cols` of them, contiguous.
    q_cols: Vec<f64>,
    /// `R` stored column-major: column `j` occupies `r_cols[j*cols..(j+1)*cols]`.
    r_cols: Vec<f64>,
    rows: usize,
    cols: usize,
}

fn thin_qr(a: &DenseMatrix, with_q: bool) -> ThinQr {
    let (n, p) = a.shape();
    debug_assert!(n >= p);
    // Work on the transpose so each column is contiguous.
    let mut work = a.transpose().into_vec();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(p);
    let mut r_cols = vec![0.0; p * p];
    for k in 0..p {
        let (head, tail) = work.split_at_mut((k + 1) * n);
        let col_k = &mut head[k * n..];
        let x = &col_k[k..];
        let norm = dot(x, x).sqrt();
        let mut v = x.to_vec();
        let alpha = if x[0] >= 0.0 { -norm } else { norm };
        if norm > 0.0 {
            v[0] -= alpha;
            let vnorm = dot(&v, &v).sqrt();
            if vnorm > 0.0 {
                v.iter_mut().for_each(|e| *e /= vnorm);
            } else {
                v.iter_mut().for_each(|e| *e = 0.0);
            }
        } else {
            v.iter_mut().for_each(|e| *e = 0.0);
        }
        col_k[k] = alpha;
        col_k[k + 1..].iter_mut().for_each(|e| *e = 0.0);
        for j in (k + 1)..p {
            let col_j = &mut tail[(j - k - 1) * n + k..(j - k) * n];
            let s = 2.0 * dot(&v, col_j);
            if s != 0.0 {
                axpy(-s, &v, col_j);
            }
        }
        reflectors.push(v);
    }
    for j in 0..p {
        for i in 0..=j {
            r_cols[j * p + i] = work[j * n + i];
        }
    }
    if !with_q {
        return ThinQr {
            q_cols: Vec::new(),
            r_cols,
            rows: n,
            cols: p,
        };
    }
    // Backward accumulation of Q applied to the first p columns of the identity.
    let mut q_cols = vec![0.0; p * n];
    for j in 0..p {
        q_cols[j * n + j] = 1.0;
    }
    for k in (0..p).rev() {
        let v = &reflectors[k];
        for j in k..p {
            let col = &mut q_cols[j * n + k..(j + 1) * n];
            let s = 2.0 * dot(v, col);
            if s != 0.0 {
                axpy(-s, v, col);
            }
        }
    }
    ThinQr {
        q_cols,
        r_cols,
        rows: n,
        cols: p,
    }
}

/// Orthonormal-column factor `Q` of a thin QR with `diag(R) ≥ 0`.
///
/// Used by the Haar sampler: for a Gaussian input the result is Haar distributed.
pub fn orthonormal_factor(a: &DenseMatrix) -> Result<DenseMatrix> {
    if a.rows() < a.cols() {
        return Err(Error::arg(format!(
            "QR needs rows >= cols, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let qr = thin_qr(a, true);
    let (n, p) = (qr.rows, qr.cols);
    let mut q = DenseMatrix::zeros(n, p);
    for j in 0..p {
        let sign = if qr.r_cols[j * p + j] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            q.set(i, j, sign * qr.q_cols[j * n + i]);
        }
    }
    Ok(q)
}

/// Cyclic one-sided Jacobi on `m` contiguous columns of length `len`.
///
/// Rotates pairs of columns of `w` in place until they are mutually
/// orthogonal; returns the number of sweeps used.
fn one_sided_jacobi(w: &mut [f64], len: usize, m: usize) -> Result<usize> {
    let mut norms = vec![0.0; m];
    let mut sweeps = 0;
    loop {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::Numerical {
                message: "one-sided Jacobi SVD did not converge".into(),
                iterations: sweeps,
            });
        }
        sweeps += 1;
        for j in 0..m {
            let c = &w[j * len..(j + 1) * len];
            norms[j] = dot(c, c);
        }
        let mut max_coherence: f64 = 0.0;
        for j in 0..m {
            for k in (j + 1)..m {
                let alpha = norms[j];
                let beta = norms[k];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let (lo, hi) = w.split_at_mut(k * len);
                let wj = &mut lo[j * len..(j + 1) * len];
                let wk = &mut hi[..len];
                let gamma = dot(wj, wk);
                let coherence = gamma.abs() / (alpha * beta).sqrt();
                max_coherence = max_coherence.max(coherence);
                if coherence <= f64::EPSILON {
                    continue;
                }
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + 1f64.hypot(zeta));
                let c = 1.0 / 1f64.hypot(t);
                let s = c * t;
                rotate(wj, wk, c, s);
                norms[j] = alpha - t * gamma;
                norms[k] = beta + t * gamma;
            }
        }
        if max_coherence <= JACOBI_TOLERANCE {
            return Ok(sweeps);
        }
    }
}

#[inline]
fn rotate(a: &mut [f64], b: &mut [f64], c: f64, s: f64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let xa = *x;
        let yb = *y;
        *x = c * xa - s * yb;
        *y = s * xa + c * yb;
    }
}

/// Singular triple with orthonormal factors and descending singular values.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// `n x k`, orthonormal columns.
    pub left: DenseMatrix,
    pub singular_values: Vec<f64>,
    /// `p x k`, orthonormal columns.
    pub right: DenseMatrix,
}

impl SvdResult {
    pub fn rank(&self) -> usize {
        self.singular_values.len()
    }

    /// `left · diag(s) · rightᵀ`.
    pub fn reconstruct(&self) -> DenseMatrix {
        let us = self
            .left
            .scale_columns(&self.singular_values)
            .expect("factor shapes agree");
        us.matmul(&self.right.transpose()).expect("factor shapes agree")
    }
}

/// Factors of the small-side problem before the sign convention is applied.
struct RawSvd {
    /// Columns of the long-side factor, contiguous (`k` columns of length `long`).
    long_cols: Vec<f64>,
    /// Columns of the short-side factor (`k` columns of length `short`).
    short_cols: Vec<f64>,
    values: Vec<f64>,
    long: usize,
    short: usize,
}

/// SVD of a tall matrix `a` (`rows >= cols`) keeping `keep` leading triples.
///
/// Jacobi runs on the columns of `Rᵀ`, which converge to `σ_k·v_k`, so the
/// right factor comes out directly. Left vectors are `a·v_k/σ_k`,
/// re-orthogonalised in order.
fn tall_svd(a: &DenseMatrix, keep: usize, with_long: bool) -> Result<RawSvd> {
    let (n, p) = a.shape();
    let qr = thin_qr(a, false);
    // column-major R read row by row is column-major Rᵀ
    let mut w = vec![0.0; p * p];
    for j in 0..p {
        for i in 0..=j {
            w[i * p + j] = qr.r_cols[j * p + i];
        }
    }
    one_sided_jacobi(&mut w, p, p)?;
    let values: Vec<f64> = (0..p)
        .map(|j| {
            let c = &w[j * p..(j + 1) * p];
            dot(c, c).sqrt()
        })
        .collect();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&x, &y| values[y].total_cmp(&values[x]).then(x.cmp(&y)));
    order.truncate(keep);
    let sorted_values: Vec<f64> = order.iter().map(|&j| values[j]).collect();

    let mut short_cols = vec![0.0; keep * p];
    let mut deficient = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        let s = values[j];
        if s > 0.0 {
            for (d, &x) in short_cols[slot * p..(slot + 1) * p].iter_mut().zip(&w[j * p..(j + 1) * p]) {
                *d = x / s;
            }
        } else {
            deficient.push(slot);
        }
    }
    complete_orthonormal(&mut short_cols, p, &deficient);

    let mut long_cols = Vec::new();
    if with_long {
        long_cols = vec![0.0; keep * n];
        let mut deficient = Vec::new();
        for slot in 0..keep {
            let s = sorted_values[slot];
            if s == 0.0 {
                deficient.push(slot);
                continue;
            }
            let v = &short_cols[slot * p..(slot + 1) * p];
            let (done, rest) = long_cols.split_at_mut(slot * n);
            let dst = &mut rest[..n];
            for (i, d) in dst.iter_mut().enumerate() {
                *d = dot(a.row(i), v) / s;
            }
            for prev in 0..slot {
                let u = &done[prev * n..(prev + 1) * n];
                let proj = dot(u, dst);
                axpy(-proj, u, dst);
            }
            let norm = dot(dst, dst).sqrt();
            if norm > 0.5 {
                dst.iter_mut().for_each(|x| *x /= norm);
            } else {
                deficient.push(slot);
            }
        }
        complete_orthonormal(&mut long_cols, n, &deficient);
    }
    Ok(RawSvd {
        long_cols,
        short_cols,
        values: sorted_values,
        long: n,
        short: p,
    })
}

/// Replaces the listed columns by unit vectors orthogonal to every other column.
fn complete_orthonormal(cols: &mut [f64], len: usize, slots: &[usize]) {
    if slots.is_empty() {
        return;
    }
    let k = cols.len() / len;
    let mut filled: Vec<bool> = vec![true; k];
    for &s in slots {
        filled[s] = false;
    }
    let mut candidate = 0;
    for &slot in slots {
        loop {
            assert!(candidate < len, "cannot complete an orthonormal basis");
            let mut e = vec![0.0; len];
            e[candidate] = 1.0;
            candidate += 1;
            for _ in 0..2 {
                for other in 0..k {
                    if !filled[other] {
                        continue;
                    }
                    let c = &cols[other * len..(other + 1) * len];
                    let proj = dot(c, &e);
                    axpy(-proj, c, &mut e);
                }
            }
            let norm = dot(&e, &e).sqrt();
            if norm > 0.5 {
                for (d, x) in cols[slot * len..(slot + 1) * len].iter_mut().zip(&e) {
                    *d = x / norm;
                }
                filled[slot] = true;
                break;
            }
        }
    }
}

fn columns_to_matrix(cols: &[f64], len: usize, k: usize) -> DenseMatrix {
    let mut m = DenseMatrix::zeros(len, k);
    for j in 0..k {
        for i in 0..len {
            m.set(i, j, cols[j * len + i]);
        }
    }
    m
}

fn validate_svd_input(a: &DenseMatrix, r: usize) -> Result<()> {
    let (n, p) = a.shape();
    if r == 0 || r > n.min(p) {
        return Err(Error::arg(format!(
            "rank {r} outside 1..={} for a {n}x{p} matrix",
            n.min(p)
        )));
    }
    a.ensure_finite()
}

/// Top-`r` singular triple of `a`.
///
/// Each right singular vector is oriented so that its largest-magnitude entry
/// is positive (first such entry on ties), with the left vector flipped to match.
pub fn truncated_svd(a: &DenseMatrix, r: usize) -> Result<SvdResult> {
    validate_svd_input(a, r)?;
    let (n, p) = a.shape();
    let (mut left_cols, mut right_cols, values) = if n >= p {
        let raw = tall_svd(a, r, true)?;
        debug_assert_eq!((raw.long, raw.short), (n, p));
        (raw.long_cols, raw.short_cols, raw.values)
    } else {
        let raw = tall_svd(&a.transpose(), r, true)?;
        debug_assert_eq!((raw.long, raw.short), (p, n));
        (raw.short_cols, raw.long_cols, raw.values)
    };
    for j in 0..r {
        let rv = &mut right_cols[j * p..(j + 1) * p];
        let mut best = 0;
        for (i, x) in rv.iter().enumerate() {
            if x.abs() > rv[best].abs() {
                best = i;
            }
        }
        if rv[best] < 0.0 {
            rv.iter_mut().for_each(|x| *x = -*x);
            left_cols[j * n..(j + 1) * n]
                .iter_mut()
                .for_each(|x| *x = -*x);
        }
    }
    Ok(SvdResult {
        left: columns_to_matrix(&left_cols, n, r),
        singular_values: values,
        right: columns_to_matrix(&right_cols, p, r),
    })
}

/// All `min(rows, cols)` singular values of `a`, descending.
pub fn singular_values(a: &DenseMatrix) -> Result<Vec<f64>> {
    let (n, p) = a.shape();
    validate_svd_input(a, n.min(p))?;
    let raw = if n >= p {
        tall_svd(a, p, false)?
    } else {
        tall_svd(&a.transpose(), n, false)?
    };
    Ok(raw.values)
}

/// `x · basis`.
pub fn project(x: &DenseMatrix, basis: &DenseMatrix) -> Result<DenseMatrix> {
    if x.cols() != basis.rows() {
        return Err(Error::arg(format!(
            "cannot project {}x{} data onto a {}x{} basis",
            x.rows(),
            x.cols(),
            basis.rows(),
            basis.cols()
        )));
    }
    x.matmul(basis)
}

/// `‖v1·v1ᵀ − v2·v2ᵀ‖_F` for orthonormal-column `v1`, `v2`, evaluated as
/// `√(2r − 2‖v1ᵀv2‖_F²)` without forming the `p x p` projectors.
pub fn subspace_distance(v1: &DenseMatrix, v2: &DenseMatrix) -> Result<f64> {
    if v1.shape() != v2.shape() {
        return Err(Error::arg(format!(
            "subspace bases differ in shape: {}x{} vs {}x{}",
            v1.rows(),
            v1.cols(),
            v2.rows(),
            v2.cols()
        )));
    }
    let cross = v1.transpose_matmul(v2)?;
    let overlap: f64 = cross.as_slice().iter().map(|c| c * c).sum();
    let r = v1.cols() as f64;
    Ok((2.0 * r - 2.0 * overlap).max(0.0).sqrt())
}

/// Trace inner product `⟨a, b⟩ = tr(aᵀb)`.
pub fn frobenius_inner(a: &DenseMatrix, b: &DenseMatrix) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| x * y).sum())
}
