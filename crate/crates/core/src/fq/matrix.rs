//! Dense matrices over `F_q` and the linear solvers built on them.

use super::field::{Fq, FqContext};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Fq>,
}

impl FqMatrix {
    pub fn zeros(rows: usize, cols: usize) -> FqMatrix {
        FqMatrix { rows, cols, entries: vec![Fq::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> FqMatrix {
        let mut m = FqMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fq::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Fq>]) -> Result<FqMatrix> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(FqMatrix { rows: rows.len(), cols, entries: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Fq {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fq) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fq] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> FqMatrix {
        let mut t = FqMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[Fq], k: &FqContext) -> Vec<Fq> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(Fq::ZERO, |acc, (&a, &b)| k.add(acc, k.mul(a, b)))
            })
            .collect()
    }

    /// `x M`.
    pub fn vec_mul(&self, x: &[Fq], k: &FqContext) -> Vec<Fq> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![Fq::ZERO; self.cols];
        for (i, &c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.row(i)) {
                *o = k.add(*o, k.mul(c, a));
            }
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, k: &FqContext) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.entries.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = k.inv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = k.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = k.sub(self.get(i, j), k.mul(f, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, k: &FqContext) -> usize {
        self.clone().rref(k).len()
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self, k: &FqContext) -> Vec<Vec<Fq>> {
        let mut m = self.clone();
        let pivots = m.rref(k);
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fq::ZERO; self.cols];
            v[free] = Fq::ONE;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = k.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `M y = b`: one particular solution and a basis of the kernel,
    /// or `None` when inconsistent.
    pub fn solve(&self, b: &[Fq], k: &FqContext) -> Result<Option<AffineSolution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug = FqMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref(k);
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut particular = vec![Fq::ZERO; self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            particular[p] = aug.get(r, self.cols);
        }
        Ok(Some(AffineSolution { particular, kernel: self.nullspace(k) }))
    }
}

/// `particular + span(kernel)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    pub particular: Vec<Fq>,
    pub kernel: Vec<Vec<Fq>>,
}

/// Solves `x M_k = N_k` for all `k` at once. `Ms` share a row count, each
/// `N_k` has as many entries as `M_k` has columns.
pub fn solve_affine_system(
    ms: &[FqMatrix],
    ns: &[Vec<Fq>],
    k: &FqContext,
) -> Result<Option<AffineSolution>> {
    if ms.len() != ns.len() {
        return Err(Error::DimensionMismatch(format!("{} matrices, {} vectors", ms.len(), ns.len())));
    }
    let Some(first) = ms.first() else {
        return Err(Error::DimensionMismatch("empty system".into()));
    };
    let n = first.rows();
    for (m, v) in ms.iter().zip(ns) {
        if m.rows() != n || m.cols() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "block {}x{} against vector of length {}",
                m.rows(),
                m.cols(),
                v.len()
            )));
        }
    }
    // stack transposes: M_k^T x^T = N_k^T
    let total: usize = ms.iter().map(|m| m.cols()).sum();
    let mut a = FqMatrix::zeros(total, n);
    let mut b = Vec::with_capacity(total);
    let mut row = 0;
    for (m, v) in ms.iter().zip(ns) {
        for j in 0..m.cols() {
            for i in 0..n {
                a.set(row, i, m.get(i, j));
            }
            row += 1;
        }
        b.extend_from_slice(v);
    }
    a.solve(&b, k)
}
