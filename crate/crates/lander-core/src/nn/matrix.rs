//! Dense row-major `f64` matrices sized for small policy networks.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length mismatch");
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    /// Gather the given rows into a new matrix.
    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(indices.len(), self.cols);
        for (k, &i) in indices.iter().enumerate() {
            out.row_mut(k).copy_from_slice(self.row(i));
        }
        out
    }

    /// `self * other`, (m x k)(k x n).
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        mul_into(
            &mut out.data,
            self.rows,
            other.cols,
            self.cols,
            &self.data,
            &other.data,
        );
        out
    }

    /// `self^T * other`, (m x k)^T (m x n) -> (k x n). Used for weight
    /// gradients: `dW = X^T * delta`.
    pub fn tr_mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "tr_mul shape mismatch");
        let (m, k, n) = (self.rows, self.cols, other.cols);
        let mut out = Matrix::zeros(k, n);
        for i in 0..m {
            let lhs = self.row(i);
            let rhs = other.row(i);
            for (a, out_row) in lhs.iter().zip(out.data.chunks_exact_mut(n)) {
                if *a != 0.0 {
                    for (o, b) in out_row.iter_mut().zip(rhs.iter()) {
                        *o += a * b;
                    }
                }
            }
        }
        out
    }

    /// `self * other^T`, (m x k)(n x k)^T -> (m x n). Used to push the
    /// error back through a layer: `delta_prev = delta * W^T`.
    pub fn mul_tr(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "mul_tr shape mismatch");
        let (m, n, k) = (self.rows, other.rows, self.cols);
        let mut out = Matrix::zeros(m, n);
        let body = |i: usize, out_row: &mut [f64]| {
            let lhs = &self.data[i * k..(i + 1) * k];
            for (j, o) in out_row.iter_mut().enumerate() {
                let rhs = &other.data[j * k..(j + 1) * k];
                let mut s = 0.0;
                for (a, b) in lhs.iter().zip(rhs.iter()) {
                    s += a * b;
                }
                *o = s;
            }
        };
        run_rows(&mut out.data, n, m, body);
        out
    }
}

/// `out += lhs * rhs` with `out` zeroed, ikj ordering, optionally row
/// parallel. Reduction order per output element is fixed, so the parallel
/// path is bit-identical to the serial one.
fn mul_into(out: &mut [f64], m: usize, n: usize, k: usize, lhs: &[f64], rhs: &[f64]) {
    let body = |i: usize, out_row: &mut [f64]| {
        let lhs_row = &lhs[i * k..(i + 1) * k];
        for (p, a) in lhs_row.iter().enumerate() {
            if *a != 0.0 {
                let rhs_row = &rhs[p * n..(p + 1) * n];
                for (o, b) in out_row.iter_mut().zip(rhs_row.iter()) {
                    *o += a * b;
                }
            }
        }
    };
    run_rows(out, n, m, body);
}

#[cfg(feature = "parallel")]
fn run_rows(out: &mut [f64], n: usize, m: usize, body: impl Fn(usize, &mut [f64]) + Sync) {
    use rayon::prelude::*;
    if m * n >= 16_384 {
        out.par_chunks_mut(n)
            .enumerate()
            .for_each(|(i, row)| body(i, row));
    } else {
        for (i, row) in out.chunks_exact_mut(n).enumerate() {
            body(i, row);
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn run_rows(out: &mut [f64], n: usize, m: usize, body: impl Fn(usize, &mut [f64]) + Sync) {
    let _ = m;
    for (i, row) in out.chunks_exact_mut(n).enumerate() {
        body(i, row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_product() {
        let a = Matrix::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = Matrix::from_vec(3, 2, vec![7.0, 8.0, 9.0, 10.0, 11.0, 12.0]);
        let c = a.mul(&b);
        assert_eq!(c.data(), &[58.0, 64.0, 139.0, 154.0]);
    }

    #[test]
    fn transpose_products_agree_with_plain_product() {
        let a = Matrix::from_vec(3, 2, vec![1.0, -2.0, 0.5, 3.0, -1.0, 2.0]);
        let b = Matrix::from_vec(3, 4, (0..12).map(|i| i as f64 * 0.3 - 1.0).collect());
        // a^T b via explicit transpose.
        let mut at = Matrix::zeros(2, 3);
        for i in 0..3 {
            for j in 0..2 {
                at.set(j, i, a.get(i, j));
            }
        }
        assert_eq!(a.tr_mul(&b), at.mul(&b));

        let c = Matrix::from_vec(5, 4, (0..20).map(|i| (i as f64).sin()).collect());
        let mut ct = Matrix::zeros(4, 5);
        for i in 0..5 {
            for j in 0..4 {
                ct.set(j, i, c.get(i, j));
            }
        }
        let d = b.mul_tr(&c);
        let expect = b.mul(&ct);
        for (x, y) in d.data().iter().zip(expect.data().iter()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn select_rows_gathers() {
        let a = Matrix::from_vec(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let s = a.select_rows(&[2, 0]);
        assert_eq!(s.data(), &[5.0, 6.0, 1.0, 2.0]);
    }
}
