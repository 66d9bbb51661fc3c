//! Compressed sparse row storage for assembled real matrices, and a sparse
//! complex LU wrapper.

use std::io::Write;

use faer::linalg::solvers::Solve;
use faer::prelude::Reborrow;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{Argsort, Pair, SparseColMat, SymbolicSparseColMat};
use faer::{Mat, MatMut};

use crate::error::{param, Error, Result};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Csr {
    pub nrows: usize,
    pub ncols: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl Csr {
    /// Sums duplicate entries. Summation follows the input order within each
    /// `(row, col)` slot, so results are reproducible.
    pub fn from_triplets(nrows: usize, ncols: usize, trips: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; nrows + 1];
        for &(r, c, _) in trips {
            assert!(r < nrows && c < ncols, "triplet ({r}, {c}) out of bounds");
            counts[r + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut pos = counts.clone();
        let mut cols = vec![0usize; trips.len()];
        let mut vals = vec![0.0; trips.len()];
        for &(r, c, v) in trips {
            cols[pos[r]] = c;
            vals[pos[r]] = v;
            pos[r] += 1;
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        let mut perm: Vec<usize> = Vec::new();
        for r in 0..nrows {
            let (a, b) = (counts[r], counts[r + 1]);
            perm.clear();
            perm.extend(a..b);
            perm.sort_by_key(|&i| cols[i]);
            let mut last = usize::MAX;
            for &i in &perm {
                if cols[i] == last {
                    *values.last_mut().unwrap() += vals[i];
                } else {
                    col_idx.push(cols[i]);
                    values.push(vals[i]);
                    last = cols[i];
                }
            }
            row_ptr.push(col_idx.len());
        }
        Csr { nrows, ncols, row_ptr, col_idx, values }
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Csr { nrows, ncols, row_ptr: vec![0; nrows + 1], col_idx: vec![], values: vec![] }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        self.col_idx[a..b].iter().copied().zip(self.values[a..b].iter().copied())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |r| self.row(r).map(move |(c, v)| (r, c, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        let (a, b) = (self.row_ptr[r], self.row_ptr[r + 1]);
        match self.col_idx[a..b].binary_search(&c) {
            Ok(i) => self.values[a + i],
            Err(_) => 0.0,
        }
    }

    pub fn transpose(&self) -> Csr {
        let trips: Vec<_> = self.iter().map(|(r, c, v)| (c, r, v)).collect();
        Csr::from_triplets(self.ncols, self.nrows, &trips)
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|r| self.row(r).map(|(c, v)| v * x[c]).sum()).collect()
    }

    pub fn mul_cvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows).map(|r| self.row(r).map(|(c, v)| x[c] * v).sum()).collect()
    }

    /// `xᵀ A y` for real vectors.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        self.mul_vec(y).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        self.iter().map(|(r, c, v)| (v - self.get(c, r)).abs()).fold(0.0, f64::max)
    }

    /// Restriction to the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Csr {
        let mut cmap = vec![usize::MAX; self.ncols];
        for (j, &c) in cols.iter().enumerate() {
            cmap[c] = j;
        }
        let mut trips = Vec::new();
        for (i, &r) in rows.iter().enumerate() {
            for (c, v) in self.row(r) {
                if cmap[c] != usize::MAX {
                    trips.push((i, cmap[c], v));
                }
            }
        }
        Csr::from_triplets(rows.len(), cols.len(), &trips)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols]; self.nrows];
        for (r, c, v) in self.iter() {
            d[r][c] += v;
        }
        d
    }
}

/// Writes `row col re im` lines (0-based) for every stored entry.
pub fn write_coo<W: Write>(entries: impl IntoIterator<Item = (usize, usize, C64)>, mut w: W) -> Result<()> {
    for (r, c, v) in entries {
        writeln!(w, "{r} {c} {:?} {:?}", v.re, v.im)?;
    }
    Ok(())
}

/// Square sparsity pattern with a symbolic LU factorization, shared by every
/// numeric factorization whose values follow the same triplet order.
#[derive(Debug, Clone)]
pub struct LuPattern {
    n: usize,
    symbolic: SymbolicSparseColMat<usize>,
    argsort: Argsort<usize>,
    lu: SymbolicLu<usize>,
}

impl LuPattern {
    /// `idx` lists `(row, col)` positions; duplicates are summed.
    pub fn new(n: usize, idx: &[(usize, usize)]) -> Result<Self> {
        let pairs: Vec<Pair<usize, usize>> = idx.iter().map(|&(row, col)| Pair { row, col }).collect();
        let (symbolic, argsort) = SymbolicSparseColMat::try_new_from_indices(n, n, &pairs)
            .map_err(|e| param(format!("invalid sparsity pattern: {e:?}")))?;
        let lu = SymbolicLu::try_new(symbolic.rb()).map_err(|e| param(format!("symbolic LU failed: {e:?}")))?;
        Ok(LuPattern { n, symbolic, argsort, lu })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Assembles the matrix with `values` (in the order of the construction
    /// indices).
    pub fn matrix(&self, values: &[C64]) -> Result<SparseColMat<usize, C64>> {
        SparseColMat::new_from_argsort(self.symbolic.clone(), &self.argsort, values)
            .map_err(|e| param(format!("sparse assembly failed: {e:?}")))
    }

    /// Numeric LU with the stored symbolic analysis; failures carry `s`.
    pub fn factor(&self, values: &[C64], s: C64) -> Result<SparseLu> {
        let a = self.matrix(values)?;
        let lu = Lu::try_new_with_symbolic(self.lu.clone(), a.rb())
            .map_err(|e| Error::Solver { s, reason: format!("{e:?}") })?;
        Ok(SparseLu { lu, a })
    }
}

/// Factorized sparse matrix together with the matrix itself (for residuals).
#[derive(Debug)]
pub struct SparseLu {
    lu: Lu<usize, C64>,
    a: SparseColMat<usize, C64>,
}

impl SparseLu {
    pub fn solve_in_place(&self, rhs: MatMut<'_, C64>) {
        self.lu.solve_in_place(rhs);
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x = Mat::<C64>::from_fn(b.len(), 1, |i, _| b[i]);
        self.lu.solve_in_place(x.as_mut());
        (0..b.len()).map(|i| x[(i, 0)]).collect()
    }

    /// `A x`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.a.nrows()];
        let a = self.a.rb();
        for j in 0..a.ncols() {
            for (i, v) in a.row_idx_of_col(j).zip(a.val_of_col(j)) {
                y[i] += v * x[j];
            }
        }
        y
    }
}
