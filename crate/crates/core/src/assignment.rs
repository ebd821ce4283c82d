//! Exact linear assignment.
//!
//! [`solve`] is a Jonker–Volgenant shortest-augmenting-path solver (column
//! reduction, reduction transfer, augmenting row reduction, then Dijkstra-style
//! augmentation) running in `O(n³)` worst case on dense costs.
//! [`brute_force_solve`] enumerates all permutations and serves as a test oracle.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Bijection on `0..n`. Vector view `π`; matrix view `Π` with `Π[i, π_i] = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        let n = map.len();
        let mut seen = vec![false; n];
        for (i, &j) in map.iter().enumerate() {
            if j >= n {
                return Err(Error::arg(format!(
                    "entry {i} maps to {j}, outside 0..{n}"
                )));
            }
            if seen[j] {
                return Err(Error::arg(format!("index {j} appears more than once")));
            }
            seen[j] = true;
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            map: (0..n).collect(),
        }
    }

    /// The transposition of `a` and `b`.
    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a, b);
        Permutation { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.map
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { map: inv }
    }

    /// `i ↦ self[other[i]]`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.len() != other.len() {
            return Err(Error::arg(format!(
                "cannot compose permutations of sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(Permutation {
            map: other.map.iter().map(|&j| self.map[j]).collect(),
        })
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        let n = self.len();
        let mut m = DenseMatrix::zeros(n, n);
        for (i, &j) in self.map.iter().enumerate() {
            m.set(i, j, 1.0);
        }
        m
    }

    /// Reads the vector view back from a 0/1 permutation matrix.
    pub fn from_matrix(m: &DenseMatrix) -> Result<Permutation> {
        if m.rows() != m.cols() {
            return Err(Error::arg("permutation matrix must be square"));
        }
        let mut map = Vec::with_capacity(m.rows());
        for (i, row) in m.row_iter().enumerate() {
            let mut hit = None;
            for (j, &v) in row.iter().enumerate() {
                if v == 1.0 {
                    if hit.is_some() {
                        return Err(Error::arg(format!("row {i} has several unit entries")));
                    }
                    hit = Some(j);
                } else if v != 0.0 {
                    return Err(Error::arg(format!("entry ({i}, {j}) is neither 0 nor 1")));
                }
            }
            map.push(hit.ok_or_else(|| Error::arg(format!("row {i} has no unit entry")))?);
        }
        Permutation::new(map)
    }
}

/// Square cost table; `cost[i][j]` is the price of assigning row `i` to column `j`.
///
/// Costs produced by [`build_cost`] are squared distances, hence finite and non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    cost: DenseMatrix,
}

impl CostMatrix {
    pub fn new(cost: DenseMatrix) -> Result<Self> {
        if cost.rows() != cost.cols() {
            return Err(Error::arg(format!(
                "cost matrix must be square, got {}x{}",
                cost.rows(),
                cost.cols()
            )));
        }
        Ok(CostMatrix { cost })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(DenseMatrix::from_rows(rows)?)
    }

    pub fn n(&self) -> usize {
        self.cost.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.cost.get(i, j)
    }

    pub fn matrix(&self) -> &DenseMatrix {
        &self.cost
    }

    /// `Σ_i cost[i][π_i]`, accumulated in row order.
    pub fn objective(&self, pi: &Permutation) -> f64 {
        assert_eq!(pi.len(), self.n(), "permutation size must match cost size");
        pi.as_slice()
            .iter()
            .enumerate()
            .fold(0.0, |acc, (i, &j)| acc + self.cost.get(i, j))
    }
}

/// `cost[i][j] = ‖px_i − py_j‖²`.
///
/// Minimising total cost over permutations is the same problem as maximising
/// `⟨px, Π·py⟩`, since the row norms do not depend on `Π`.
pub fn build_cost(px: &DenseMatrix, py: &DenseMatrix) -> Result<CostMatrix> {
    if px.shape() != py.shape() {
        return Err(Error::arg(format!(
            "projected data differ in shape: {}x{} vs {}x{}",
            px.rows(),
            px.cols(),
            py.rows(),
            py.cols()
        )));
    }
    let n = px.rows();
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        let a = px.row(i);
        for j in 0..n {
            let b = py.row(j);
            let d: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            data.push(d);
        }
    }
    CostMatrix::new(DenseMatrix::from_vec(n, n, data)?)
}

const UNASSIGNED: usize = usize::MAX;

/// Minimum-cost permutation of `c`.
///
/// The result is optimal and a deterministic function of the input; among
/// co-optimal permutations no particular one is promised.
pub fn solve(c: &CostMatrix) -> Result<Permutation> {
    let n = c.n();
    if n == 0 {
        return Err(Error::arg("cannot solve an empty assignment problem"));
    }
    c.matrix().ensure_finite()?;
    if n == 1 {
        return Ok(Permutation::identity(1));
    }
    let cost = c.matrix().as_slice();
    let at = |i: usize, j: usize| cost[i * n + j];

    let mut row_to_col = vec![UNASSIGNED; n];
    let mut col_to_row = vec![UNASSIGNED; n];
    let mut v = vec![0.0f64; n];

    // Column reduction, scanning columns in reverse.
    let mut matches = vec![0usize; n];
    for j in (0..n).rev() {
        let mut min = at(0, j);
        let mut imin = 0;
        for i in 1..n {
            let h = at(i, j);
            if h < min {
                min = h;
                imin = i;
            }
        }
        v[j] = min;
        matches[imin] += 1;
        if matches[imin] == 1 {
            row_to_col[imin] = j;
            col_to_row[j] = imin;
        } else if v[j] < v[row_to_col[imin]] {
            let j1 = row_to_col[imin];
            row_to_col[imin] = j;
            col_to_row[j] = imin;
            col_to_row[j1] = UNASSIGNED;
        } else {
            col_to_row[j] = UNASSIGNED;
        }
    }

    // Reduction transfer from singly-assigned rows; collect free rows.
    let mut free = Vec::with_capacity(n);
    for i in 0..n {
        match matches[i] {
            0 => free.push(i),
            1 => {
                let j1 = row_to_col[i];
                let mut min = f64::INFINITY;
                for j in 0..n {
                    if j != j1 {
                        let h = at(i, j) - v[j];
                        if h < min {
                            min = h;
                        }
                    }
                }
                v[j1] -= min;
            }
            _ => {}
        }
    }
    // Augmenting row reduction, two passes. Immediate re-insertions are
    // capped: each one lowers a price by a positive amount, but in floating
    // point that amount can be arbitrarily small.
    let mut reinsert_budget = 8 * n;
    for _ in 0..2 {
        let mut queue = std::mem::take(&mut free);
        let mut k = 0;
        while k < queue.len() {
            let i = queue[k];
            k += 1;
            let mut umin = at(i, 0) - v[0];
            let mut j1 = 0;
            let mut usubmin = f64::INFINITY;
            let mut j2 = UNASSIGNED;
            for j in 1..n {
                let h = at(i, j) - v[j];
                if h < usubmin {
                    if h >= umin {
                        usubmin = h;
                        j2 = j;
                    } else {
                        usubmin = umin;
                        umin = h;
                        j2 = j1;
                        j1 = j;
                    }
                }
            }
            let mut i0 = col_to_row[j1];
            let strict = umin < usubmin;
            if strict {
                v[j1] -= usubmin - umin;
            } else if i0 != UNASSIGNED {
                j1 = j2;
                i0 = col_to_row[j2];
            }
            row_to_col[i] = j1;
            col_to_row[j1] = i;
            if i0 != UNASSIGNED {
                row_to_col[i0] = UNASSIGNED;
                if strict && reinsert_budget > 0 {
                    reinsert_budget -= 1;
                    k -= 1;
                    queue[k] = i0;
                } else {
                    free.push(i0);
                }
            }
        }
        if free.is_empty() {
            break;
        }
    }

    // Shortest augmenting paths for the remaining free rows.
    let mut d = vec![0.0f64; n];
    let mut pred = vec![0usize; n];
    let mut collist: Vec<usize> = (0..n).collect();
    for &f in &free {
        for j in 0..n {
            d[j] = at(f, j) - v[j];
            pred[j] = f;
            collist[j] = j;
        }
        let mut low = 0usize;
        let mut up = 0usize;
        // columns collist[..low] are finalised, collist[low..up] hold the current minimum
        let mut last = 0usize;
        let mut min = 0.0f64;
        let endofpath;
        'search: loop {
            if up == low {
                last = low;
                min = d[collist[up]];
                up += 1;
                for k in up..n {
                    let j = collist[k];
                    let h = d[j];
                    if h <= min {
                        if h < min {
                            up = low;
                            min = h;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                }
                for &j in &collist[low..up] {
                    if col_to_row[j] == UNASSIGNED {
                        endofpath = j;
                        break 'search;
                    }
                }
            }
            let j1 = collist[low];
            low += 1;
            let i = col_to_row[j1];
            let u1 = at(i, j1) - v[j1] - min;
            let mut k = up;
            while k < n {
                let j = collist[k];
                let v2 = at(i, j) - v[j] - u1;
                if v2 < d[j] {
                    pred[j] = i;
                    if v2 == min {
                        if col_to_row[j] == UNASSIGNED {
                            endofpath = j;
                            break 'search;
                        }
                        collist[k] = collist[up];
                        collist[up] = j;
                        up += 1;
                    }
                    d[j] = v2;
                }
                k += 1;
            }
        }
        // Price update for finalised columns.
        for &j1 in &collist[..last] {
            v[j1] += d[j1] - min;
        }
        // Augment along the alternating path.
        let mut j = endofpath;
        loop {
            let i = pred[j];
            col_to_row[j] = i;
            let next = row_to_col[i];
            row_to_col[i] = j;
            if i == f {
                break;
            }
            j = next;
        }
    }

    if row_to_col.iter().any(|&j| j == UNASSIGNED) {
        return Err(Error::Numerical {
            message: "assignment solver left a row unassigned".into(),
            iterations: n,
        });
    }
    Permutation::new(row_to_col)
}

/// Largest size [`brute_force_solve`] accepts.
pub const BRUTE_FORCE_MAX_N: usize = 10;

/// Exhaustive optimum; among ties the lexicographically smallest vector view wins.
pub fn brute_force_solve(c: &CostMatrix) -> Result<Permutation> {
    let n = c.n();
    if n == 0 {
        return Err(Error::arg("cannot solve an empty assignment problem"));
    }
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::arg(format!(
            "brute force refused for n = {n} > {BRUTE_FORCE_MAX_N}"
        )));
    }
    c.matrix().ensure_finite()?;

    struct Search<'a> {
        c: &'a CostMatrix,
        used: Vec<bool>,
        current: Vec<usize>,
        best: Vec<usize>,
        best_cost: f64,
    }

    impl Search<'_> {
        fn visit(&mut self, row: usize, partial: f64) {
            let n = self.used.len();
            if row == n {
                // Permutations arrive in lexicographic order, so strict
                // improvement keeps the smallest optimum.
                if partial < self.best_cost {
                    self.best_cost = partial;
                    self.best.copy_from_slice(&self.current);
                }
                return;
            }
            for j in 0..n {
                if !self.used[j] {
                    self.used[j] = true;
                    self.current[row] = j;
                    self.visit(row + 1, partial + self.c.get(row, j));
                    self.used[j] = false;
                }
            }
        }
    }

    let mut search = Search {
        c,
        used: vec![false; n],
        current: vec![0; n],
        best: vec![0; n],
        best_cost: f64::INFINITY,
    };
    search.visit(0, 0.0);
    Permutation::new(search.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn random_cost(rng: &mut SeededRng, n: usize) -> CostMatrix {
        CostMatrix::new(DenseMatrix::from_fn(n, n, |_, _| rng.uniform() * 10.0)).unwrap()
    }

    #[test]
    fn build_cost_examples() {
        let i2 = DenseMatrix::identity(2);
        let c = build_cost(&i2, &i2).unwrap();
        assert_eq!(c.matrix(), &DenseMatrix::from_rows(&[[0.0, 2.0], [2.0, 0.0]]).unwrap());
        let c = build_cost(
            &DenseMatrix::from_rows(&[[1.0]]).unwrap(),
            &DenseMatrix::from_rows(&[[4.0]]).unwrap(),
        )
        .unwrap();
        assert_eq!(c.get(0, 0), 9.0);
        assert!(build_cost(&i2, &DenseMatrix::identity(3)).is_err());
    }

    fn all_permutations(n: usize) -> Vec<Vec<usize>> {
        fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for j in 0..n {
                if !used[j] {
                    used[j] = true;
                    cur.push(j);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[j] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(n, &mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    #[test]
    fn min_cost_equals_max_inner_product() {
        let mut rng = SeededRng::new(11);
        let px = DenseMatrix::from_fn(5, 3, |_, _| rng.gaussian());
        let py = DenseMatrix::from_fn(5, 3, |_, _| rng.gaussian());
        let c = build_cost(&px, &py).unwrap();
        let perms = all_permutations(5);
        assert_eq!(perms.len(), 120);
        let inner = |p: &[usize]| -> f64 {
            (0..5)
                .map(|i| px.row(i).iter().zip(py.row(p[i])).map(|(a, b)| a * b).sum::<f64>())
                .sum()
        };
        let total = |p: &[usize]| -> f64 { (0..5).map(|i| c.get(i, p[i])).sum() };
        let argmin = perms
            .iter()
            .min_by(|a, b| total(a).total_cmp(&total(b)))
            .unwrap();
        let argmax = perms
            .iter()
            .max_by(|a, b| inner(a).total_cmp(&inner(b)))
            .unwrap();
        assert_eq!(argmin, argmax);
    }

    #[test]
    fn solve_small_examples() {
        let c = CostMatrix::from_rows(&[[0.0, 2.0], [2.0, 0.0]]).unwrap();
        assert_eq!(solve(&c).unwrap().as_slice(), &[0, 1]);
        let c = CostMatrix::from_rows(&[[5.0, 1.0], [1.0, 5.0]]).unwrap();
        assert_eq!(solve(&c).unwrap().as_slice(), &[1, 0]);
        let c = CostMatrix::from_rows(&[[3.0]]).unwrap();
        assert_eq!(solve(&c).unwrap().as_slice(), &[0]);
    }

    #[test]
    fn solve_rejects_non_finite() {
        let c = CostMatrix::from_rows(&[[0.0, f64::NAN], [1.0, 0.0]]).unwrap();
        assert!(matches!(solve(&c), Err(Error::Argument(_))));
        let c = CostMatrix::from_rows(&[[0.0, f64::INFINITY], [1.0, 0.0]]).unwrap();
        assert!(solve(&c).is_err());
    }

    #[test]
    fn brute_force_examples() {
        let c = CostMatrix::from_rows(&[[7.0]]).unwrap();
        assert_eq!(brute_force_solve(&c).unwrap().as_slice(), &[0]);
        let c = CostMatrix::from_rows(&[[0.0, 2.0], [2.0, 0.0]]).unwrap();
        assert_eq!(brute_force_solve(&c).unwrap().as_slice(), &[0, 1]);
        // all-equal costs: lexicographically smallest optimum is the identity
        let c = CostMatrix::new(DenseMatrix::from_fn(4, 4, |_, _| 1.0)).unwrap();
        assert_eq!(brute_force_solve(&c).unwrap().as_slice(), &[0, 1, 2, 3]);
        let big = CostMatrix::new(DenseMatrix::zeros(11, 11)).unwrap();
        assert!(brute_force_solve(&big).is_err());
    }

    #[test]
    fn solve_matches_brute_force_on_6x6() {
        let mut rng = SeededRng::new(12);
        for _ in 0..200 {
            let c = random_cost(&mut rng, 6);
            let a = solve(&c).unwrap();
            let b = brute_force_solve(&c).unwrap();
            assert_eq!(c.objective(&a), c.objective(&b));
        }
    }

    #[test]
    fn solve_handles_ties_and_integer_costs() {
        let mut rng = SeededRng::new(13);
        for n in 2..=7 {
            for _ in 0..200 {
                let c = CostMatrix::new(DenseMatrix::from_fn(n, n, |_, _| {
                    (rng.uniform() * 4.0).floor()
                }))
                .unwrap();
                let a = solve(&c).unwrap();
                let b = brute_force_solve(&c).unwrap();
                assert_eq!(c.objective(&a), c.objective(&b));
            }
        }
        let constant = CostMatrix::new(DenseMatrix::from_fn(50, 50, |_, _| 3.0)).unwrap();
        assert_eq!(constant.objective(&solve(&constant).unwrap()), 150.0);
    }

    #[test]
    fn shift_invariance_of_optimum() {
        let mut rng = SeededRng::new(14);
        for _ in 0..100 {
            let c = random_cost(&mut rng, 6);
            let row = (rng.uniform() * 6.0) as usize;
            let col = (rng.uniform() * 6.0) as usize;
            let shift_r = rng.uniform() * 5.0;
            let shift_c = rng.uniform() * 5.0;
            let shifted = DenseMatrix::from_fn(6, 6, |i, j| {
                c.get(i, j) + if i == row { shift_r } else { 0.0 } + if j == col { shift_c } else { 0.0 }
            });
            let shifted = CostMatrix::new(shifted).unwrap();
            let pi = solve(&c).unwrap();
            let oracle = brute_force_solve(&shifted).unwrap();
            let gap = shifted.objective(&pi) - shifted.objective(&oracle);
            assert!(gap.abs() <= 1e-12, "gap {gap}");
        }
    }

    #[test]
    fn solve_is_deterministic_and_bijective_at_scale() {
        let mut rng = SeededRng::new(15);
        let c = random_cost(&mut rng, 300);
        let a = solve(&c).unwrap();
        let b = solve(&c).unwrap();
        assert_eq!(a, b);
        assert!(Permutation::new(a.into_vec()).is_ok());
    }

    #[test]
    fn permutation_views_round_trip() {
        let p = Permutation::new(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(Permutation::from_matrix(&p.to_matrix()).unwrap(), p);
        assert_eq!(p.compose(&p.inverse()).unwrap(), Permutation::identity(4));
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn solve_output_is_bijection(n in 1usize..=500, seed in any::<u64>()) {
                let mut rng = SeededRng::new(seed);
                let c = random_cost(&mut rng, n);
                let pi = solve(&c).unwrap();
                prop_assert!(Permutation::new(pi.into_vec()).is_ok());
            }

            #[test]
            fn matrix_vector_round_trip(seed in any::<u64>(), n in 1usize..40) {
                let mut rng = SeededRng::new(seed);
                let p = Permutation::new(rng.permutation(n)).unwrap();
                prop_assert_eq!(Permutation::from_matrix(&p.to_matrix()).unwrap(), p);
            }
        }
    }
}
