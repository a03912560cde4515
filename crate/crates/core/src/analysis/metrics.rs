use crate::error::{Error, Result};
use crate::opalg::{herm_eig, herm_fn, ComplexMatrix, C64};

/// `F = √⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]`.
pub fn fidelity(target: &[C64], rho: &ComplexMatrix) -> Result<f64> {
    let d = rho.ensure_square()?;
    if target.len() != d {
        return Err(Error::DimMismatch(format!("target of length {} for {d}x{d} state", target.len())));
    }
    let p = rho.expectation(target, target).re;
    if p < -1e-12 {
        return Err(Error::InvalidParam {
            name: "rho",
            reason: format!("negative target population {p}"),
        });
    }
    Ok(p.max(0.0).sqrt().min(1.0))
}

/// Root fidelity `tr√(√ρ σ √ρ)` between two mixed states.
pub fn state_fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != sigma.rows() {
        return Err(Error::DimMismatch(format!("{} vs {}", rho.rows(), sigma.rows())));
    }
    let sqrt_rho = herm_fn(rho, |x| C64::new(x.max(0.0).sqrt(), 0.0))?;
    let mut m = &(&sqrt_rho * sigma) * &sqrt_rho;
    m.hermitize();
    let (vals, _) = herm_eig(&m)?;
    Ok(vals.iter().map(|v| v.max(0.0).sqrt()).sum::<f64>().min(1.0))
}

/// Traces out the trailing `dim / keep` factor of a bipartite state.
pub fn partial_trace(rho: &ComplexMatrix, keep: usize) -> Result<ComplexMatrix> {
    let d = rho.ensure_square()?;
    if keep == 0 || d % keep != 0 {
        return Err(Error::DimMismatch(format!("cannot keep a {keep}-dim factor of {d}")));
    }
    let m = d / keep;
    if m == 1 {
        return Ok(rho.clone());
    }
    Ok(ComplexMatrix::from_fn(keep, keep, |i, j| {
        (0..m).map(|k| rho[(i * m + k, j * m + k)]).sum()
    }))
}

/// `tr ρ²`.
pub fn purity(rho: &ComplexMatrix) -> f64 {
    // tr(ρ²) = Σ |ρ_ij|² for Hermitian ρ
    rho.data().iter().map(|z| z.norm_sqr()).sum()
}

/// `½‖ρ − σ‖₁` for Hermitian arguments.
pub fn trace_distance(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    let mut diff = rho - sigma;
    diff.hermitize();
    let (vals, _) = herm_eig(&diff)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}
