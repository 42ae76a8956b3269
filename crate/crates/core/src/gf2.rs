//! Dense matrices over GF(2), stored as bit rows.

use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FixedBitSet>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![FixedBitSet::with_capacity(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Rows of 0/1 entries; `cols` is needed when there are no rows.
    pub fn from_rows(rows: &[Vec<u8>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Malformed(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(r, c, true),
                    _ => return Err(Error::Malformed(format!("entry {v} is not 0 or 1"))),
                }
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given bit vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[FixedBitSet]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            for r in col.ones() {
                m.set(r, c, true);
            }
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        self.data
            .iter()
            .map(|row| (0..self.cols).map(|c| row.contains(c) as u8).collect())
            .collect()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r].contains(c)
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        self.data[r].set(c, v);
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r].toggle(c);
    }

    pub fn row(&self, r: usize) -> &FixedBitSet {
        &self.data[r]
    }

    pub fn column(&self, c: usize) -> FixedBitSet {
        let mut col = FixedBitSet::with_capacity(self.rows);
        for r in 0..self.rows {
            if self.get(r, c) {
                col.insert(r);
            }
        }
        col
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FixedBitSet::is_clear)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, row) in self.data.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for k in row.ones() {
                out.data[r].symmetric_difference_with(&other.data[k]);
            }
        }
        Ok(out)
    }

    /// Side-by-side concatenation.
    pub fn hstack(parts: &[&Gf2Matrix], rows: usize) -> Result<Gf2Matrix> {
        if parts.iter().any(|p| p.rows != rows) {
            return Err(Error::Mismatch("hstack: row counts differ".into()));
        }
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            for (r, row) in p.data.iter().enumerate() {
                for c in row.ones() {
                    out.set(r, off + c, true);
                }
            }
            off += p.cols;
        }
        Ok(out)
    }

    /// One-above-the-other concatenation.
    pub fn vstack(parts: &[&Gf2Matrix], cols: usize) -> Result<Gf2Matrix> {
        if parts.iter().any(|p| p.cols != cols) {
            return Err(Error::Mismatch("vstack: column counts differ".into()));
        }
        let mut out = Self::zeros(0, cols);
        for p in parts {
            out.data.extend(p.data.iter().cloned());
            out.rows += p.rows;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.clone().eliminate().len()
    }

    /// Row-reduces in place to reduced echelon form; returns pivot columns
    /// in row order.
    fn eliminate(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&k| self.data[k].contains(c)) else {
                continue;
            };
            self.data.swap(r, p);
            let pivot = self.data[r].clone();
            for k in 0..self.rows {
                if k != r && self.data[k].contains(c) {
                    self.data[k].symmetric_difference_with(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Some `x` with `self · x = rhs`, or `None` when inconsistent.
    pub fn solve(&self, rhs: &Gf2Matrix) -> Result<Option<Gf2Matrix>> {
        if rhs.rows != self.rows {
            return Err(Error::Mismatch(
                "solve: right-hand side has the wrong height".into(),
            ));
        }
        let mut aug = Gf2Matrix::hstack(&[self, rhs], self.rows)?;
        let pivots = aug.eliminate();
        if pivots.last().is_some_and(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Self::zeros(self.cols, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for k in 0..rhs.cols {
                if aug.get(r, self.cols + k) {
                    x.set(c, k, true);
                }
            }
        }
        Ok(Some(x))
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self) -> Vec<FixedBitSet> {
        let mut red = self.clone();
        let pivots = red.eliminate();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = FixedBitSet::with_capacity(self.cols);
            v.insert(free);
            for (r, &c) in pivots.iter().enumerate() {
                if red.get(r, free) {
                    v.insert(c);
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Incrementally grown set of independent vectors.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    /// Each vector is reduced against every earlier pivot.
    rows: Vec<(usize, FixedBitSet)>,
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Adds `v` when it is independent of the vectors so far.
    pub fn insert(&mut self, v: &FixedBitSet) -> bool {
        let mut v = v.clone();
        for (pivot, b) in &self.rows {
            if v.contains(*pivot) {
                v.symmetric_difference_with(b);
            }
        }
        match v.ones().next() {
            Some(pivot) => {
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for row in self.to_rows() {
            let s: String = row
                .iter()
                .map(|&v| if v == 1 { '1' } else { '0' })
                .collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u8]], cols: usize) -> Gf2Matrix {
        let v: Vec<Vec<u8>> = rows.iter().map(|r| r.to_vec()).collect();
        Gf2Matrix::from_rows(&v, cols).unwrap()
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]], 3);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0].ones().collect::<Vec<_>>(), vec![0, 1, 2]);
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[0, 1]], 2);
        let b = m(&[&[0], &[1]], 1);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(a.mul(&x).unwrap(), b);
        let z = m(&[&[1, 1], &[1, 1]], 2);
        assert!(z.solve(&m(&[&[1], &[0]], 1)).unwrap().is_none());
    }

    #[test]
    fn transpose_of_product() {
        let a = m(&[&[1, 0, 1], &[1, 1, 0]], 3);
        let b = m(&[&[1, 1], &[0, 1], &[1, 0]], 2);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.transpose(), b.transpose().mul(&a.transpose()).unwrap());
        assert!(a.mul(&a).is_err());
    }

    #[test]
    fn empty_shapes() {
        let z = Gf2Matrix::zeros(0, 3);
        assert_eq!(z.rank(), 0);
        assert_eq!(z.kernel().len(), 3);
        let id0 = Gf2Matrix::identity(0);
        assert_eq!(id0.mul(&Gf2Matrix::zeros(0, 2)).unwrap().cols(), 2);
    }
}
