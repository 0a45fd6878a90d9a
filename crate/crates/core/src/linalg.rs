//! Exact sparse linear algebra over the rationals.
//!
//! Vectors are sparse maps from an ordered key type to [`Scalar`]. The
//! [`Eliminator`] performs incremental Gaussian elimination, optionally
//! tracking how each reduced row is built from the inserted inputs, which is
//! what the solvers in the rest of the crate need. A dense fraction-free
//! (Bareiss) rank routine is kept as an independent oracle.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

pub type SparseVec<K> = BTreeMap<K, Scalar>;

/// `y += a * x`, dropping cancelled entries.
pub fn axpy<K: Ord + Clone>(y: &mut SparseVec<K>, a: &Scalar, x: &SparseVec<K>) {
    if a.is_zero() {
        return;
    }
    for (k, v) in x {
        let t = a * v;
        match y.get_mut(k) {
            Some(c) => {
                *c += &t;
                if c.is_zero() {
                    y.remove(k);
                }
            }
            None => {
                y.insert(k.clone(), t);
            }
        }
    }
}

pub fn scale<K: Ord + Clone>(x: &SparseVec<K>, a: &Scalar) -> SparseVec<K> {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(k, v)| (k.clone(), v * a)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotStrategy {
    /// Pivot on the smallest key of the reduced vector.
    FirstKey,
    /// Pivot on the entry of smallest bit height; ties broken by key.
    SmallestEntry,
}

#[derive(Debug, Clone)]
struct Row<K> {
    pivot: K,
    vec: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Incremental exact elimination.
#[derive(Debug, Clone)]
pub struct Eliminator<K: Ord + Clone> {
    strategy: PivotStrategy,
    track: bool,
    rows: Vec<Row<K>>,
    pivots: BTreeMap<K, usize>,
    inputs: usize,
    null: Vec<SparseVec<usize>>,
}

impl<K: Ord + Clone> Eliminator<K> {
    pub fn new(strategy: PivotStrategy, track: bool) -> Self {
        Eliminator {
            strategy,
            track,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
            inputs: 0,
            null: Vec::new(),
        }
    }

    pub fn tracking() -> Self {
        Self::new(PivotStrategy::FirstKey, true)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    /// Combinations of inputs that reduced to zero, one per dependent input.
    pub fn nullspace(&self) -> &[SparseVec<usize>] {
        &self.null
    }

    /// Reduce `v` against the current rows. Returns the residual and the
    /// combination `c` of inputs with `v - residual = Σ c_i input_i`
    /// (empty unless tracking).
    pub fn reduce(&self, mut v: SparseVec<K>) -> (SparseVec<K>, SparseVec<usize>) {
        let mut combo = SparseVec::new();
        let mut heap: BinaryHeap<Reverse<usize>> = v
            .keys()
            .filter_map(|k| self.pivots.get(k).map(|&i| Reverse(i)))
            .collect();
        let mut last = None;
        while let Some(Reverse(i)) = heap.pop() {
            if last == Some(i) {
                continue;
            }
            last = Some(i);
            let row = &self.rows[i];
            let c = match v.get(&row.pivot) {
                Some(c) => c / &row.vec[&row.pivot],
                None => continue,
            };
            axpy(&mut v, &-&c, &row.vec);
            for k in row.vec.keys() {
                if let Some(&j) = self.pivots.get(k) {
                    if j > i && v.contains_key(k) {
                        heap.push(Reverse(j));
                    }
                }
            }
            if self.track {
                axpy(&mut combo, &c, &row.combo);
            }
        }
        (v, combo)
    }

    /// Insert a new input vector; returns true if it raised the rank.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let index = self.inputs;
        self.inputs += 1;
        let (residual, combo) = self.reduce(v);
        if residual.is_empty() {
            if self.track {
                let mut n = scale(&combo, &Scalar::from_int(-1));
                n.insert(index, Scalar::one());
                self.null.push(n);
            }
            return false;
        }
        let pivot = match self.strategy {
            PivotStrategy::FirstKey => residual.keys().next().unwrap().clone(),
            PivotStrategy::SmallestEntry => residual
                .iter()
                .min_by_key(|(_, c)| c.height())
                .map(|(k, _)| k.clone())
                .unwrap(),
        };
        let mut row_combo = SparseVec::new();
        if self.track {
            row_combo = scale(&combo, &Scalar::from_int(-1));
            row_combo.insert(index, Scalar::one());
        }
        self.pivots.insert(pivot.clone(), self.rows.len());
        self.rows.push(Row {
            pivot,
            vec: residual,
            combo: row_combo,
        });
        true
    }

    /// Solve `Σ x_i input_i = target`. Requires tracking.
    pub fn solve(&self, target: &SparseVec<K>) -> Option<SparseVec<usize>> {
        assert!(self.track, "solve requires a tracking eliminator");
        let (residual, combo) = self.reduce(target.clone());
        if residual.is_empty() {
            Some(combo)
        } else {
            None
        }
    }

    /// The reduced rows, in insertion order; each has zeros at the pivots of
    /// earlier rows.
    pub fn rows(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.iter().map(|r| &r.vec)
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v.clone()).0.is_empty()
    }
}

/// Rank of a family of sparse vectors.
pub fn rank_of<K: Ord + Clone>(vectors: impl IntoIterator<Item = SparseVec<K>>, strategy: PivotStrategy) -> usize {
    let mut e = Eliminator::new(strategy, false);
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Sparse matrix stored by columns; `rows` is the number of rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: Vec<SparseVec<usize>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn apply(&self, x: &SparseVec<usize>) -> SparseVec<usize> {
        let mut y = SparseVec::new();
        for (j, c) in x {
            axpy(&mut y, c, &self.cols[*j]);
        }
        y
    }

    /// `self * other`, where `other.rows == self.ncols()`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(other.rows, self.ncols(), "dimension mismatch");
        SparseMatrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        rank_of(self.cols.iter().cloned(), PivotStrategy::FirstKey)
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut m = vec![vec![Scalar::zero(); self.ncols()]; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, v) in c {
                m[*i][j] = v.clone();
            }
        }
        m
    }
}

/// Rank of a dense rational matrix by fraction-free Bareiss elimination over
/// the integers (rows are first cleared of denominators).
pub fn bareiss_rank(matrix: &[Vec<Scalar>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .map(|x| x.numer() * (&l / x.denom()))
                .collect()
        })
        .collect();
    let n = a.len();
    if n == 0 {
        return 0;
    }
    let m = a[0].len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..m {
        if rank == n {
            break;
        }
        let Some(p) = (rank..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..n {
            for c in col + 1..m {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Exact determinant of a square matrix by Gaussian elimination.
pub fn determinant(matrix: &[Vec<Scalar>]) -> Scalar {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Scalar::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det = det * &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= &t;
            }
        }
    }
    det
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(matrix: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Scalar>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(p, col);
        let inv = a[col][col].inv();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] * &inv;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..2 * n {
                let t = &f * &a[col][c];
                a[r][c] -= &t;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}
