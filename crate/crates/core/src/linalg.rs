//! Exact linear algebra over Gaussian rationals: just enough for structure
//! constants, basis changes, Killing forms and centers.

use crate::scalar::GaussRat;

/// Dense matrix with exact entries, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<GaussRat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![GaussRat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, GaussRat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussRat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn get(&self, r: usize, c: usize) -> &GaussRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: GaussRat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = GaussRat::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * rhs.get(k, j));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[GaussRat]) -> Vec<GaussRat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussRat::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * &v[k]);
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> GaussRat {
        assert_eq!(self.rows, self.cols);
        let mut acc = GaussRat::zero();
        for i in 0..self.rows {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let Some(pivot_row) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            // swap rows
            for c in 0..m.cols {
                let a = m.get(row, c).clone();
                let b = m.get(pivot_row, c).clone();
                m.set(row, c, b);
                m.set(pivot_row, c, a);
            }
            let inv = m.get(row, col).inv().expect("pivot nonzero");
            for c in 0..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let factor = m.get(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.get(r, c) - &(&factor * m.get(row, c));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, as column vectors.
    pub fn nullspace(&self) -> Vec<Vec<GaussRat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![GaussRat::zero(); self.cols];
            v[f] = GaussRat::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r.get(prow, f);
            }
            basis.push(v);
        }
        basis
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, GaussRat::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        let mut out = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussRat as G;

    fn g(n: i64) -> G {
        G::from_int(n)
    }

    #[test]
    fn inverse_round_trip() {
        let m = Mat::from_rows(vec![
            vec![g(2), g(1), g(0)],
            vec![g(0), GaussRat::i(), g(1)],
            vec![g(1), g(0), g(1)],
        ]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(3));
    }

    #[test]
    fn nullspace_of_rank_deficient() {
        let m = Mat::from_rows(vec![vec![g(1), g(2)], vec![g(2), g(4)]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        let image = m.mul_vec(&ns[0]);
        assert!(image.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = Mat::from_rows(vec![vec![g(1), g(2)], vec![g(2), g(4)]]);
        assert!(m.inverse().is_none());
    }
}
