use num_complex::Complex64 as C64;

use super::matrix::{ComplexMatrix, ZERO};

/// Compressed-row copy of a square operator, used only to speed up
/// operator × density-matrix products inside generator evaluation.
#[derive(Clone, Debug)]
pub struct SparseRows {
    dim: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseRows {
    /// Keeps entries with `|a_ij| > drop_below`.
    pub fn from_dense(a: &ComplexMatrix, drop_below: f64) -> Self {
        assert!(a.is_square(), "SparseRows needs a square operator");
        let dim = a.rows();
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..dim {
            for (j, &v) in a.row(i).iter().enumerate() {
                if v.norm() > drop_below {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self {
            dim,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// `out = self · b` for a row-major `dim × dim` block `b`.
    pub fn mul_dense_into(&self, b: &[C64], out: &mut [C64]) {
        let n = self.dim;
        debug_assert_eq!(b.len(), n * n);
        debug_assert_eq!(out.len(), n * n);
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            out_row.fill(ZERO);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let v = self.values[k];
                let j = self.col_idx[k];
                let b_row = &b[j * n..(j + 1) * n];
                for (o, &x) in out_row.iter_mut().zip(b_row) {
                    *o += v * x;
                }
            }
        }
    }

    pub fn mul_vec(&self, v: &[C64], out: &mut [C64]) {
        for i in 0..self.dim {
            let mut acc = ZERO;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * v[self.col_idx[k]];
            }
            out[i] = acc;
        }
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[C64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// `out[i, l] += s · (y self†)[i, l]` for `l ≥ i` only, with `y`
    /// row-major `dim × dim`. The strict lower triangle of `out` is untouched.
    pub fn add_right_adjoint_upper(&self, y: &[C64], s: f64, out: &mut [C64]) {
        let n = self.dim;
        for i in 0..n {
            let y_row = &y[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for l in i..n {
                let (cols, vals) = self.row(l);
                let mut acc = ZERO;
                for (&k, v) in cols.iter().zip(vals) {
                    acc += y_row[k] * v.conj();
                }
                out_row[l] += acc * s;
            }
        }
    }

    /// Largest absolute row sum, an upper bound on the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        (0..self.dim)
            .map(|i| {
                self.values[self.row_ptr[i]..self.row_ptr[i + 1]]
                    .iter()
                    .map(|v| v.norm())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// `out = a†` for a row-major square block.
pub(crate) fn adjoint_into(a: &[C64], n: usize, out: &mut [C64]) {
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = a[i * n + j].conj();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sparse_product_matches_dense() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| if (i + j) % 3 == 0 { C64::new(i as f64, j as f64) } else { ZERO });
        let b = ComplexMatrix::from_fn(4, 4, |i, j| C64::new((i * j) as f64 * 0.1, 1.0 - j as f64));
        let s = SparseRows::from_dense(&a, 0.0);
        assert!(s.nnz() < 16);
        let mut out = vec![ZERO; 16];
        s.mul_dense_into(b.data(), &mut out);
        assert_eq!(out, (&a * &b).into_data());
    }

    #[test]
    fn right_adjoint_fills_upper_triangle() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| if (i * j) % 3 == 1 { C64::new(1.0, i as f64) } else { ZERO });
        let y = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(i as f64 - 0.5 * j as f64, 0.3));
        let expected = (&y * &a.dag()).scale_real(2.0);
        let mut out = vec![ZERO; 16];
        SparseRows::from_dense(&a, 0.0).add_right_adjoint_upper(y.data(), 2.0, &mut out);
        for i in 0..4 {
            for j in 0..4 {
                let want = if j >= i { expected[(i, j)] } else { ZERO };
                assert!((out[i * 4 + j] - want).norm() < 1e-14);
            }
        }
    }
}
