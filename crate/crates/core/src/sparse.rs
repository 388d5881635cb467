//! Compressed sparse rows and a sparse Cholesky factorization `P A Pᵀ = L Lᴴ`
//! for real symmetric and complex Hermitian positive definite matrices.

use std::collections::VecDeque;
use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_complex::Complex64;
use thiserror::Error;

pub trait Scalar:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    fn zero() -> Self;
    fn from_f64(x: f64) -> Self;
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn abs_sq(self) -> f64;
    fn scale(self, r: f64) -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn abs_sq(self) -> f64 {
        self * self
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn abs_sq(self) -> f64 {
        self.norm_sqr()
    }
    fn scale(self, r: f64) -> Self {
        self * r
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FactorError {
    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("matrix must be square")]
    NotSquare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix<T> {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<T>,
}

impl<T: Scalar> CsrMatrix<T> {
    /// Sums duplicate entries. The summation order is the input order, so the
    /// result is deterministic for a deterministic triplet sequence.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, T)]) -> Self {
        let mut order: Vec<usize> = (0..triplets.len()).collect();
        order.sort_by_key(|&k| (triplets[k].0, triplets[k].1));
        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values: Vec<T> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for k in order {
            let (i, j, v) = triplets[k];
            assert!(i < nrows && j < ncols, "triplet ({i}, {j}) out of range");
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![T::from_f64(1.0); n],
        }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[r.clone()].iter().copied().zip(self.values[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[r.clone()].binary_search(&j) {
            Ok(k) => self.values[r.start + k],
            Err(_) => T::zero(),
        }
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        (0..self.nrows)
            .map(|i| {
                let mut s = T::zero();
                for (j, v) in self.row(i) {
                    s += v * x[j];
                }
                s
            })
            .collect()
    }

    /// `self + alpha * other` for matrices of equal shape.
    pub fn add_scaled<U: Scalar>(&self, other: &CsrMatrix<U>, alpha: f64, lift: impl Fn(U) -> T) -> Self {
        let mut t: Vec<(usize, usize, T)> = Vec::with_capacity(self.nnz() + other.nnz());
        for i in 0..self.nrows {
            t.extend(self.row(i).map(|(j, v)| (i, j, v)));
            t.extend(other.row(i).map(|(j, v)| (i, j, lift(v).scale(alpha))));
        }
        CsrMatrix::from_triplets(self.nrows, self.ncols, &t)
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = Vec::with_capacity(self.nnz());
        for i in 0..self.nrows {
            t.extend(self.row(i).map(|(j, v)| (j, i, v.conj())));
        }
        CsrMatrix::from_triplets(self.ncols, self.nrows, &t)
    }

    /// Principal submatrix on `keep` (sorted indices), renumbered consecutively.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let mut map = vec![usize::MAX; self.nrows];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let mut t = Vec::new();
        for (new_i, &old_i) in keep.iter().enumerate() {
            for (j, v) in self.row(old_i) {
                if map[j] != usize::MAX {
                    t.push((new_i, map[j], v));
                }
            }
        }
        CsrMatrix::from_triplets(keep.len(), keep.len(), &t)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs_sq().sqrt()).fold(0.0, f64::max)
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut d = vec![vec![T::zero(); self.ncols]; self.nrows];
        for i in 0..self.nrows {
            for (j, v) in self.row(i) {
                d[i][j] = v;
            }
        }
        d
    }
}

impl CsrMatrix<f64> {
    /// Real matrix applied to a vector of any scalar type.
    pub fn apply<U: Scalar>(&self, x: &[U]) -> Vec<U> {
        (0..self.nrows)
            .map(|i| {
                let mut s = U::zero();
                for (j, v) in self.row(i) {
                    s += x[j].scale(v);
                }
                s
            })
            .collect()
    }

    pub fn to_complex(&self) -> CsrMatrix<Complex64> {
        CsrMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            row_ptr: self.row_ptr.clone(),
            col_idx: self.col_idx.clone(),
            values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }
}

/// Adjacency lists of the symmetric sparsity pattern, without the diagonal.
fn adjacency<T: Scalar>(a: &CsrMatrix<T>) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); a.nrows];
    for i in 0..a.nrows {
        for (j, _) in a.row(i) {
            if i != j {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
        l.dedup();
    }
    adj
}

const LEAF_SIZE: usize = 64;

/// Nested dissection with level-structure separators. Returns `perm` with
/// `perm[new] = old`.
pub fn nested_dissection(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut perm = Vec::with_capacity(n);
    let mut mark = vec![usize::MAX; n];
    let mut level = vec![usize::MAX; n];
    let all: Vec<usize> = (0..n).collect();
    dissect(adj, all, 0, &mut mark, &mut level, &mut perm);
    perm
}

/// BFS from `start` restricted to nodes with `mark == tag`; fills `level`,
/// returns visit order.
fn bfs(adj: &[Vec<usize>], start: usize, tag: usize, mark: &[usize], level: &mut [usize]) -> Vec<usize> {
    let mut order = vec![start];
    level[start] = 0;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &v in &adj[u] {
            if mark[v] == tag && level[v] == usize::MAX {
                level[v] = level[u] + 1;
                order.push(v);
            }
        }
    }
    order
}

fn dissect(
    adj: &[Vec<usize>],
    nodes: Vec<usize>,
    depth: usize,
    mark: &mut [usize],
    level: &mut [usize],
    perm: &mut Vec<usize>,
) {
    if nodes.len() <= LEAF_SIZE || depth > 64 {
        perm.extend(rcm_local(adj, &nodes, mark));
        return;
    }
    let tag = nodes[0] * 2 + 1 + depth * adj.len() * 2;
    for &u in &nodes {
        mark[u] = tag;
        level[u] = usize::MAX;
    }
    // Split into connected components first.
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &u in &nodes {
        if level[u] == usize::MAX {
            comps.push(bfs(adj, u, tag, mark, level));
        }
    }
    if comps.len() > 1 {
        for c in comps {
            dissect(adj, c, depth + 1, mark, level, perm);
        }
        return;
    }
    // Pseudo-peripheral start: repeat BFS from the last node found.
    let reset = |level: &mut [usize]| {
        for &u in &nodes {
            level[u] = usize::MAX;
        }
    };
    let mut start = nodes[0];
    let mut order = comps.pop().unwrap();
    for _ in 0..3 {
        let far = *order.last().unwrap();
        if far == start {
            break;
        }
        reset(level);
        let next = bfs(adj, far, tag, mark, level);
        let ecc_new = level[*next.last().unwrap()];
        start = far;
        order = next;
        if ecc_new == 0 {
            break;
        }
    }
    if level[*order.last().unwrap()] < 2 {
        for &u in &nodes {
            mark[u] = usize::MAX;
        }
        perm.extend(rcm_local(adj, &nodes, mark));
        return;
    }
    // Separator level: where the cumulative count passes half.
    let half = nodes.len() / 2;
    let sep_level = level[order[half]].max(1);
    let mut part_a = Vec::new();
    let mut part_b = Vec::new();
    let mut sep = Vec::new();
    for &u in &order {
        match level[u].cmp(&sep_level) {
            std::cmp::Ordering::Less => part_a.push(u),
            std::cmp::Ordering::Greater => part_b.push(u),
            std::cmp::Ordering::Equal => sep.push(u),
        }
    }
    // Separator nodes without neighbours beyond the separator join part A.
    let mut thin_sep = Vec::new();
    for &u in &sep {
        if adj[u].iter().any(|&v| mark[v] == tag && level[v] == sep_level + 1) {
            thin_sep.push(u);
        } else {
            part_a.push(u);
        }
    }
    for &u in &nodes {
        mark[u] = usize::MAX;
    }
    dissect(adj, part_a, depth + 1, mark, level, perm);
    dissect(adj, part_b, depth + 1, mark, level, perm);
    perm.extend(thin_sep);
}

/// Reverse Cuthill-McKee on a node subset.
fn rcm_local(adj: &[Vec<usize>], nodes: &[usize], mark: &mut [usize]) -> Vec<usize> {
    const IN: usize = usize::MAX - 1;
    const DONE: usize = usize::MAX - 2;
    for &u in nodes {
        mark[u] = IN;
    }
    let deg = |u: usize, mark: &[usize]| adj[u].iter().filter(|&&v| mark[v] == IN || mark[v] == DONE).count();
    let mut out = Vec::with_capacity(nodes.len());
    let mut sorted: Vec<usize> = nodes.to_vec();
    sorted.sort_by_key(|&u| (deg(u, mark), u));
    for &s in &sorted {
        if mark[s] != IN {
            continue;
        }
        let mut q = VecDeque::from([s]);
        mark[s] = DONE;
        while let Some(u) = q.pop_front() {
            out.push(u);
            let mut nb: Vec<usize> = adj[u].iter().copied().filter(|&v| mark[v] == IN).collect();
            nb.sort_by_key(|&v| (deg(v, mark), v));
            for v in nb {
                mark[v] = DONE;
                q.push_back(v);
            }
        }
    }
    for &u in nodes {
        mark[u] = usize::MAX;
    }
    out.reverse();
    out
}

/// Sparse Cholesky factor with `L` stored by columns, diagonal first.
#[derive(Debug, Clone)]
pub struct Cholesky<T> {
    n: usize,
    perm: Vec<usize>,
    lp: Vec<usize>,
    li: Vec<usize>,
    lx: Vec<T>,
}

impl<T: Scalar> Cholesky<T> {
    /// Factorizes a Hermitian positive definite matrix with a nested
    /// dissection ordering. Only the pattern is assumed symmetric; values are
    /// read from the upper triangle of the permuted matrix.
    pub fn factor(a: &CsrMatrix<T>) -> Result<Self, FactorError> {
        if a.nrows != a.ncols {
            return Err(FactorError::NotSquare);
        }
        let perm = nested_dissection(&adjacency(a));
        Self::factor_with(a, perm)
    }

    pub fn factor_with(a: &CsrMatrix<T>, perm: Vec<usize>) -> Result<Self, FactorError> {
        let n = a.nrows;
        let mut pinv = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            pinv[old] = new;
        }
        // Upper triangle of C = P A Pᵀ by columns: C(i, k) for i <= k.
        let mut col_count = vec![0usize; n + 1];
        for r in 0..n {
            for (c, _) in a.row(r) {
                let (i, k) = (pinv[r], pinv[c]);
                if i <= k {
                    col_count[k + 1] += 1;
                }
            }
        }
        for k in 0..n {
            col_count[k + 1] += col_count[k];
        }
        let cp = col_count.clone();
        let mut fill = col_count;
        let mut ci = vec![0usize; cp[n]];
        let mut cx = vec![T::zero(); cp[n]];
        for r in 0..n {
            for (c, v) in a.row(r) {
                let (i, k) = (pinv[r], pinv[c]);
                if i <= k {
                    ci[fill[k]] = i;
                    cx[fill[k]] = v;
                    fill[k] += 1;
                }
            }
        }

        // Elimination tree.
        const NONE: usize = usize::MAX;
        let mut parent = vec![NONE; n];
        let mut ancestor = vec![NONE; n];
        for k in 0..n {
            for &i0 in &ci[cp[k]..cp[k + 1]] {
                let mut i = i0;
                while i != NONE && i < k {
                    let next = ancestor[i];
                    ancestor[i] = k;
                    if next == NONE {
                        parent[i] = k;
                    }
                    i = next;
                }
            }
        }

        let mut flag = vec![NONE; n];
        let mut stack = vec![0usize; n];
        let mut ereach = |k: usize, s: &mut Vec<usize>, flag: &mut [usize]| -> usize {
            let mut top = n;
            flag[k] = k;
            for &i0 in &ci[cp[k]..cp[k + 1]] {
                let mut i = i0;
                if i > k {
                    continue;
                }
                let mut len = 0;
                while flag[i] != k {
                    stack[len] = i;
                    len += 1;
                    flag[i] = k;
                    i = parent[i];
                }
                while len > 0 {
                    top -= 1;
                    len -= 1;
                    s[top] = stack[len];
                }
            }
            top
        };

        // Symbolic pass: column counts of L.
        let mut s = vec![0usize; n];
        let mut counts = vec![1usize; n];
        for k in 0..n {
            let top = ereach(k, &mut s, &mut flag);
            for &i in &s[top..n] {
                counts[i] += 1;
            }
        }
        let mut lp = vec![0usize; n + 1];
        for k in 0..n {
            lp[k + 1] = lp[k] + counts[k];
        }
        let mut li = vec![0usize; lp[n]];
        let mut lx = vec![T::zero(); lp[n]];
        let mut next_slot: Vec<usize> = lp[..n].to_vec();

        // Numeric up-looking pass.
        flag.fill(NONE);
        let mut x = vec![T::zero(); n];
        for k in 0..n {
            let top = ereach(k, &mut s, &mut flag);
            x[k] = T::zero();
            for p in cp[k]..cp[k + 1] {
                x[ci[p]] = cx[p];
            }
            let mut d = x[k].re();
            x[k] = T::zero();
            for &i in &s[top..n] {
                let y = x[i] / lx[lp[i]];
                x[i] = T::zero();
                for p in lp[i] + 1..next_slot[i] {
                    let r = li[p];
                    x[r] -= lx[p] * y;
                }
                d -= y.abs_sq();
                let p = next_slot[i];
                next_slot[i] += 1;
                li[p] = k;
                lx[p] = y.conj();
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(FactorError::NotPositiveDefinite { row: perm[k], pivot: d });
            }
            let p = next_slot[k];
            next_slot[k] += 1;
            li[p] = k;
            lx[p] = T::from_f64(d.sqrt());
        }
        Ok(Cholesky { n, perm, lp, li, lx })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.lx.len()
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.n;
        let mut y: Vec<T> = self.perm.iter().map(|&old| b[old]).collect();
        // L y = b
        for j in 0..n {
            let yj = y[j] / self.lx[self.lp[j]];
            y[j] = yj;
            for p in self.lp[j] + 1..self.lp[j + 1] {
                y[self.li[p]] -= self.lx[p] * yj;
            }
        }
        // Lᴴ x = y
        for j in (0..n).rev() {
            let mut s = y[j];
            for p in self.lp[j] + 1..self.lp[j + 1] {
                s -= self.lx[p].conj() * y[self.li[p]];
            }
            y[j] = s / self.lx[self.lp[j]].conj();
        }
        let mut x = vec![T::zero(); n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// 2D 5-point Laplacian plus identity on an `m x m` grid.
    fn grid(m: usize) -> CsrMatrix<f64> {
        let id = |i: usize, j: usize| i * m + j;
        let mut t = Vec::new();
        for i in 0..m {
            for j in 0..m {
                t.push((id(i, j), id(i, j), 5.0));
                if i + 1 < m {
                    t.push((id(i, j), id(i + 1, j), -1.0));
                    t.push((id(i + 1, j), id(i, j), -1.0));
                }
                if j + 1 < m {
                    t.push((id(i, j), id(i, j + 1), -1.0));
                    t.push((id(i, j + 1), id(i, j), -1.0));
                }
            }
        }
        CsrMatrix::from_triplets(m * m, m * m, &t)
    }

    #[test]
    fn triplets_sum_duplicates() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 2.0), (0, 0, 3.0)]);
        assert_eq!(a.get(0, 0), 4.0);
        assert_eq!(a.get(0, 1), 0.0);
        assert_eq!(a.nnz(), 2);
    }

    #[test]
    fn nested_dissection_is_permutation() {
        let a = grid(40);
        let mut p = nested_dissection(&adjacency(&a));
        p.sort_unstable();
        assert_eq!(p, (0..1600).collect::<Vec<_>>());
    }

    #[test]
    fn real_solve() {
        let a = grid(50);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x: Vec<f64> = (0..a.nrows).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = a.mul_vec(&x);
        let f = Cholesky::factor(&a).unwrap();
        let y = f.solve(&b);
        let err = x.iter().zip(&y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn hermitian_solve() {
        let m = 30;
        let base = grid(m);
        let mut t = Vec::new();
        for i in 0..base.nrows {
            for (j, v) in base.row(i) {
                let z = if i < j {
                    Complex64::new(v, 0.3)
                } else if i > j {
                    Complex64::new(v, -0.3)
                } else {
                    Complex64::new(v, 0.0)
                };
                t.push((i, j, z));
            }
        }
        let a = CsrMatrix::from_triplets(base.nrows, base.ncols, &t);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x: Vec<Complex64> = (0..a.nrows)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let b = a.mul_vec(&x);
        let y = Cholesky::factor(&a).unwrap().solve(&b);
        let err = x.iter().zip(&y).map(|(p, q)| (p - q).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn indefinite_rejected() {
        let a = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(matches!(Cholesky::factor(&a), Err(FactorError::NotPositiveDefinite { .. })));
    }
}
