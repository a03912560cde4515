//! Liouville-space representation.
//!
//! `vec` stacks columns, so `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)` and element
//! `ρ[i, j]` lands at index `j·d + i`.

use num_complex::Complex64 as C64;

use super::dense::svd_right;
use super::matrix::{ComplexMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Default singular-value threshold for kernel detection.
pub const KERNEL_TOL: f64 = 1e-9;

/// A jump operator `op` with non-negative rate: contributes `rate · 𝓓[op]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladTerm {
    pub rate: f64,
    pub op: ComplexMatrix,
}

impl LindbladTerm {
    pub fn new(rate: f64, op: ComplexMatrix) -> Result<Self> {
        if !(rate >= 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParam {
                name: "rate",
                reason: format!("jump rate must be finite and >= 0, got {rate}"),
            });
        }
        op.ensure_square()?;
        Ok(Self { rate, op })
    }
}

pub fn vectorize(rho: &ComplexMatrix) -> Vec<C64> {
    let (r, c) = (rho.rows(), rho.cols());
    let mut v = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            v.push(rho[(i, j)]);
        }
    }
    v
}

pub fn devectorize(v: &[C64], d: usize) -> Result<ComplexMatrix> {
    if d * d != v.len() {
        return Err(Error::DimMismatch(format!(
            "vector of length {} is not a {d}x{d} matrix",
            v.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| v[j * d + i]))
}

/// Superoperator acting on column-stacked density matrices.
#[derive(Clone, Debug)]
pub struct SuperOp {
    dim: usize,
    matrix: ComplexMatrix,
}

impl SuperOp {
    pub fn new(dim: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != dim * dim || matrix.cols() != dim * dim {
            return Err(Error::DimMismatch(format!(
                "superoperator for d={dim} must be {0}x{0}",
                dim * dim
            )));
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.mat_vec(v)
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim || rho.cols() != self.dim {
            return Err(Error::DimMismatch(format!(
                "superoperator acts on {0}x{0}, got {1}x{2}",
                self.dim,
                rho.rows(),
                rho.cols()
            )));
        }
        devectorize(&self.apply_vec(&vectorize(rho)), self.dim)
    }

    /// `vec(I)ᵀ · L`: zero for trace-preserving generators.
    pub fn trace_row(&self) -> Vec<C64> {
        let d = self.dim;
        let n = d * d;
        let mut row = vec![ZERO; n];
        for k in 0..d {
            let r = k * d + k;
            for (acc, &x) in row.iter_mut().zip(self.matrix.row(r)) {
                *acc += x;
            }
        }
        row
    }
}

/// `target += s · (a ⊗ b)` without materializing the product.
fn add_kron_scaled(target: &mut ComplexMatrix, s: C64, a: &ComplexMatrix, b: &ComplexMatrix) {
    let bd = b.rows();
    let cols = target.cols();
    let data = target.data_mut();
    for ai in 0..a.rows() {
        for aj in 0..a.cols() {
            let sa = a[(ai, aj)] * s;
            if sa == ZERO {
                continue;
            }
            for bi in 0..bd {
                let row = ai * bd + bi;
                let base = row * cols + aj * b.cols();
                for (bj, &bv) in b.row(bi).iter().enumerate() {
                    if bv != ZERO {
                        data[base + bj] += sa * bv;
                    }
                }
            }
        }
    }
}

/// Matrix `L` with `L·vec(ρ) = vec(−i[H,ρ] + Σ γₖ 𝓓[cₖ]ρ)`.
pub fn liouvillian_matrix(h: &ComplexMatrix, terms: &[LindbladTerm]) -> Result<SuperOp> {
    let d = h.ensure_square()?;
    for t in terms {
        if t.op.rows() != d || t.op.cols() != d {
            return Err(Error::DimMismatch(format!(
                "jump operator is {}x{}, Hamiltonian is {d}x{d}",
                t.op.rows(),
                t.op.cols()
            )));
        }
    }
    let ident = ComplexMatrix::identity(d);
    let mut l = ComplexMatrix::zeros(d * d, d * d);
    let minus_i = C64::new(0.0, -1.0);
    add_kron_scaled(&mut l, minus_i, &ident, h);
    add_kron_scaled(&mut l, -minus_i, &h.transpose(), &ident);
    for t in terms.iter().filter(|t| t.rate > 0.0) {
        let g = C64::new(t.rate, 0.0);
        let cdc = &t.op.dag() * &t.op;
        add_kron_scaled(&mut l, g, &t.op.conj(), &t.op);
        add_kron_scaled(&mut l, g * -0.5, &ident, &cdc);
        add_kron_scaled(&mut l, g * -0.5, &cdc.transpose(), &ident);
    }
    SuperOp::new(d, l)
}

/// Orthonormal kernel basis: right singular vectors with singular value
/// below `tol`. An empty kernel is an error.
pub fn null_space(l: &SuperOp, tol: f64) -> Result<Vec<Vec<C64>>> {
    let (sv, v) = svd_right(l.matrix())?;
    let n = l.matrix().cols();
    let kernel: Vec<Vec<C64>> = (0..n)
        .filter(|&k| sv.get(k).copied().unwrap_or(0.0) < tol)
        .map(|k| v.column(k))
        .collect();
    if kernel.is_empty() {
        return Err(Error::EmptyKernel {
            tol,
            smallest: sv.last().copied().unwrap_or(f64::NAN),
        });
    }
    Ok(kernel)
}

/// `vec(I)`.
pub fn vec_identity(d: usize) -> Vec<C64> {
    let mut v = vec![ZERO; d * d];
    for k in 0..d {
        v[k * d + k] = ONE;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::matrix::{commutator, dissipator, kron, norm};
    use proptest::prelude::*;

    fn pseudo_random(d: usize, seed: u64) -> ComplexMatrix {
        // splitmix64 stream mapped to [-1, 1]
        let mut state = seed;
        let mut next = move || {
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z ^= z >> 31;
            (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(d, d, |_, _| C64::new(next(), next()))
    }

    fn random_density(d: usize, seed: u64) -> ComplexMatrix {
        let a = pseudo_random(d, seed);
        let mut rho = &a * &a.dag();
        let tr = rho.trace();
        rho = rho.scale(ONE / tr);
        rho.hermitize();
        rho
    }

    #[test]
    fn diagonal_lands_at_stride_d_plus_one() {
        let rho = ComplexMatrix::from_diag(&[C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(3.0, 0.0)]);
        let v = vectorize(&rho);
        assert_eq!(v[0].re, 1.0);
        assert_eq!(v[4].re, 2.0);
        assert_eq!(v[8].re, 3.0);
        assert_eq!(v.iter().filter(|z| **z != ZERO).count(), 3);
    }

    #[test]
    fn sandwich_identity_against_direct_product() {
        let a = pseudo_random(3, 1);
        let b = pseudo_random(3, 2);
        let rho = pseudo_random(3, 3);
        let lhs = kron(&b.transpose(), &a).mat_vec(&vectorize(&rho));
        let rhs = vectorize(&(&(&a * &rho) * &b));
        for (x, y) in lhs.iter().zip(&rhs) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn devectorize_rejects_bad_length() {
        assert!(devectorize(&[ZERO; 5], 2).is_err());
    }

    #[test]
    fn zero_generator_gives_zero_matrix() {
        let l = liouvillian_matrix(&ComplexMatrix::zeros(3, 3), &[]).unwrap();
        assert_eq!(l.matrix().max_abs(), 0.0);
    }

    #[test]
    fn liouvillian_matches_direct_evaluation() {
        let d = 4;
        let h0 = pseudo_random(d, 10);
        let h = &(&h0 + &h0.dag()) * 0.5;
        let terms = vec![
            LindbladTerm::new(0.7, pseudo_random(d, 11)).unwrap(),
            LindbladTerm::new(1.3, pseudo_random(d, 12)).unwrap(),
        ];
        let l = liouvillian_matrix(&h, &terms).unwrap();
        let rho = pseudo_random(d, 13);
        let mut direct = commutator(&h, &rho).unwrap().scale(C64::new(0.0, -1.0));
        for t in &terms {
            direct.add_scaled(C64::new(t.rate, 0.0), &dissipator(&t.op, &rho).unwrap());
        }
        let via_l = l.apply(&rho).unwrap();
        assert!((&via_l - &direct).max_abs() < 1e-12);
        assert!(norm(&l.trace_row()) < 1e-12);
    }

    #[test]
    fn liouvillian_rejects_mismatched_terms() {
        let terms = vec![LindbladTerm::new(1.0, ComplexMatrix::identity(3)).unwrap()];
        assert!(liouvillian_matrix(&ComplexMatrix::zeros(2, 2), &terms).is_err());
        assert!(LindbladTerm::new(-1.0, ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let l = liouvillian_matrix(&ComplexMatrix::zeros(2, 2), &[]).unwrap();
        assert_eq!(null_space(&l, KERNEL_TOL).unwrap().len(), 4);
    }

    #[test]
    fn qubit_decay_has_unique_fixed_point() {
        // |0⟩ upper, |1⟩ lower
        let sigma = ComplexMatrix::ket_bra(2, 1, 0);
        let l = liouvillian_matrix(&ComplexMatrix::zeros(2, 2), &[LindbladTerm::new(1.0, sigma).unwrap()]).unwrap();
        let kernel = null_space(&l, KERNEL_TOL).unwrap();
        assert_eq!(kernel.len(), 1);
        let rho = devectorize(&kernel[0], 2).unwrap();
        let rho = rho.scale(ONE / rho.trace());
        assert!((&rho - &ComplexMatrix::ket_bra(2, 1, 1)).max_abs() < 1e-12);
        for v in &kernel {
            assert!(norm(&l.apply_vec(v)) < 10.0 * KERNEL_TOL);
        }
    }

    #[test]
    fn full_rank_operator_has_empty_kernel() {
        let l = SuperOp::new(2, ComplexMatrix::identity(4)).unwrap();
        assert!(matches!(null_space(&l, KERNEL_TOL), Err(Error::EmptyKernel { .. })));
    }

    proptest! {
        #[test]
        fn vectorize_round_trip(seed in any::<u64>(), d in 1usize..6) {
            let rho = pseudo_random(d, seed);
            prop_assert_eq!(devectorize(&vectorize(&rho), d).unwrap(), rho);
        }

        #[test]
        fn generator_preserves_trace_and_hermiticity(seed in any::<u64>(), rate in 0.0f64..3.0) {
            let d = 3;
            let h0 = pseudo_random(d, seed);
            let h = &(&h0 + &h0.dag()) * 0.5;
            let terms = vec![LindbladTerm::new(rate, pseudo_random(d, seed ^ 0xABCD)).unwrap()];
            let l = liouvillian_matrix(&h, &terms).unwrap();
            prop_assert!(norm(&l.trace_row()) < 1e-12);
            let out = l.apply(&random_density(d, seed.wrapping_add(7))).unwrap();
            prop_assert!(out.is_hermitian(1e-12));
        }

        #[test]
        fn kron_is_associative(seed in any::<u64>()) {
            let a = pseudo_random(2, seed);
            let b = pseudo_random(3, seed.wrapping_add(1));
            let c = pseudo_random(2, seed.wrapping_add(2));
            let left = kron(&kron(&a, &b), &c);
            let right = kron(&a, &kron(&b, &c));
            prop_assert!((&left - &right).max_abs() < 1e-14);
        }
    }
}
