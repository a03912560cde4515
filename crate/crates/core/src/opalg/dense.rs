//! Dense decompositions. Factorizations are delegated to `faer`; everything
//! crossing this boundary is converted to and from [`ComplexMatrix`].

use faer::linalg::solvers::Solve;
use faer::Mat;
use num_complex::Complex64 as C64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Hermiticity tolerance accepted by [`herm_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

pub(crate) fn to_faer(a: &ComplexMatrix) -> Mat<C64> {
    Mat::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns ascending eigenvalues and a matrix whose columns are the
/// corresponding orthonormal eigenvectors.
pub fn herm_eig(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.ensure_square()?;
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian(dev));
    }
    if n == 0 {
        return Ok((Vec::new(), ComplexMatrix::zeros(0, 0)));
    }
    let mut h = a.clone();
    h.hermitize();
    let eig = to_faer(&h)
        .self_adjoint_eigen(faer::Side::Lower)
        .map_err(|e| Error::Backend(format!("{e:?}")))?;
    let s = eig.S();
    let u = eig.U();
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let values = order.iter().map(|&i| vals[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| u[(r, order[c])]);
    Ok((values, vectors))
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    let (vals, _) = herm_eig(a)?;
    Ok(vals.first().copied().unwrap_or(0.0))
}

/// `f(A)` for Hermitian `A` via its spectral decomposition.
pub fn herm_fn(a: &ComplexMatrix, f: impl Fn(f64) -> C64) -> Result<ComplexMatrix> {
    let (vals, vecs) = herm_eig(a)?;
    let n = vals.len();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vecs[(i, j)] * f(vals[j]));
    Ok(&scaled * &vecs.dag())
}

/// Singular values (descending) and right singular vectors (columns).
pub(crate) fn svd_right(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let svd = to_faer(a)
        .svd()
        .map_err(|e| Error::Backend(format!("{e:?}")))?;
    let s = svd.S();
    let n = a.cols().min(a.rows());
    let values = (0..n).map(|i| s[i].re).collect();
    Ok((values, from_faer(svd.V())))
}

/// Solves `A x = b` with partial-pivoting LU. Fails when a pivot vanishes.
pub fn lu_solve(a: &ComplexMatrix, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.ensure_square()?;
    if b.len() != n {
        return Err(Error::DimMismatch(format!("rhs length {} for {n}x{n} system", b.len())));
    }
    lu_solve_faer(to_faer(a), b)
}

pub(crate) fn lu_solve_faer(a: Mat<C64>, b: &[C64]) -> Result<Vec<C64>> {
    let n = a.nrows();
    let lu = a.partial_piv_lu();
    let rhs = Mat::from_fn(n, 1, |i, _| b[i]);
    let x = lu.solve(&rhs);
    let out: Vec<C64> = (0..n).map(|i| x[(i, 0)]).collect();
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Backend("singular linear system".into()));
    }
    Ok(out)
}

fn one_norm(a: &ComplexMatrix) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Matrix exponential by scaling and squaring with a degree-13 Padé
/// approximant (Higham 2005).
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.ensure_square()?;
    if n == 0 {
        return Ok(ComplexMatrix::zeros(0, 0));
    }
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    const THETA_13: f64 = 5.371920351148152;
    let norm = one_norm(a);
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a.scale_real(0.5f64.powi(s));
    let ident = ComplexMatrix::identity(n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let comb = |c: [f64; 4]| {
        let mut m = a6.scale_real(c[0]);
        m.add_scaled(C64::new(c[1], 0.0), &a4);
        m.add_scaled(C64::new(c[2], 0.0), &a2);
        m.add_scaled(C64::new(c[3], 0.0), &ident);
        m
    };
    let mut u_inner = &a6 * &comb([B[13], B[11], B[9], 0.0]);
    u_inner += &comb([B[7], B[5], B[3], B[1]]);
    let u = &a * &u_inner;
    let mut v = &a6 * &comb([B[12], B[10], B[8], 0.0]);
    v += &comb([B[6], B[4], B[2], B[0]]);

    let p = &v + &u;
    let q = &v - &u;
    let lu = to_faer(&q).partial_piv_lu();
    let x = lu.solve(&to_faer(&p));
    let mut r = from_faer(x.as_ref());
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
