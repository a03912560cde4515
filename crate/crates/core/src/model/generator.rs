//! Lindblad generators `ρ̇ = −i[H, ρ] + Σ γₖ𝓓[cₖ]ρ`.

use crate::error::{Error, Result};
use crate::opalg::{adjoint_into, liouvillian_matrix, ComplexMatrix, LindbladTerm, SparseRows, SuperOp, C64, I};

/// Relative Hermiticity tolerance for Hamiltonians.
const H_TOL: f64 = 1e-12;
/// Entries below this fraction of the largest operator entry are dropped
/// when compiling.
const SPARSE_DROP: f64 = 1e-15;
/// Block edge for the transposed reads in the Hermitian apply.
const TILE: usize = 16;

/// A Hamiltonian plus jump channels on `atoms ⊗ modes`.
#[derive(Clone, Debug)]
pub struct Generator {
    hamiltonian: ComplexMatrix,
    terms: Vec<LindbladTerm>,
    atom_dim: usize,
}

impl Generator {
    pub fn new(hamiltonian: ComplexMatrix, terms: Vec<LindbladTerm>, atom_dim: usize) -> Result<Self> {
        let d = hamiltonian.ensure_square()?;
        let dev = hamiltonian.hermitian_deviation();
        if dev > H_TOL * hamiltonian.max_abs().max(1.0) {
            return Err(Error::NotHermitian(dev));
        }
        for t in &terms {
            if t.op.rows() != d || !t.op.is_square() {
                return Err(Error::DimMismatch(format!(
                    "jump operator {}x{} for dimension {d}",
                    t.op.rows(),
                    t.op.cols()
                )));
            }
            if !(t.rate >= 0.0 && t.rate.is_finite()) {
                return Err(Error::InvalidParam {
                    name: "rate",
                    reason: format!("jump rate must be finite and >= 0, got {}", t.rate),
                });
            }
        }
        if atom_dim == 0 || d % atom_dim != 0 {
            return Err(Error::DimMismatch(format!("atom dimension {atom_dim} does not divide {d}")));
        }
        Ok(Self {
            hamiltonian,
            terms,
            atom_dim,
        })
    }

    /// Generator with no Hamiltonian and no channels.
    pub fn zero(dim: usize) -> Self {
        Self {
            hamiltonian: ComplexMatrix::zeros(dim, dim),
            terms: Vec::new(),
            atom_dim: dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.rows()
    }

    pub fn atom_dim(&self) -> usize {
        self.atom_dim
    }

    pub fn mode_dim(&self) -> usize {
        self.dim() / self.atom_dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn terms(&self) -> &[LindbladTerm] {
        &self.terms
    }

    /// Appends further channels, for example spontaneous emission.
    pub fn with_terms(mut self, extra: impl IntoIterator<Item = LindbladTerm>) -> Result<Self> {
        self.terms.extend(extra);
        Self::new(self.hamiltonian, self.terms, self.atom_dim)
    }

    /// Dense reference evaluation of `𝓛ρ`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let hr = self.hamiltonian.checked_mul(rho)?;
        let rh = rho.checked_mul(&self.hamiltonian)?;
        let mut out = (&hr - &rh).scale(-I);
        for t in &self.terms {
            let c = &t.op;
            let cd = c.dag();
            let cdc = &cd * c;
            let mut d = &(&(c * rho) * &cd) - &(&(&cdc * rho) + &(rho * &cdc)).scale_real(0.5);
            d = d.scale_real(t.rate);
            out += &d;
        }
        Ok(out)
    }

    pub fn liouvillian(&self) -> Result<SuperOp> {
        liouvillian_matrix(&self.hamiltonian, &self.terms)
    }

    /// Largest Hamiltonian energy scale (row-sum bound on ‖H‖).
    pub fn max_frequency(&self) -> f64 {
        (0..self.dim())
            .map(|i| self.hamiltonian.row(i).iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Smallest non-zero effective damping rate `γ‖c‖²`, or 0 without channels.
    pub fn min_rate(&self) -> f64 {
        let r = self
            .terms
            .iter()
            .map(|t| t.rate * t.op.frobenius_norm().powi(2) / self.dim() as f64)
            .filter(|r| *r > 0.0)
            .fold(f64::INFINITY, f64::min);
        if r.is_finite() {
            r
        } else {
            0.0
        }
    }

    pub fn compile(&self) -> CompiledGenerator {
        CompiledGenerator::new(self)
    }
}

/// Sparse form of a generator for repeated application to density
/// matrices stored row-major. Uses `H_eff = H − (i/2)Σγc†c`, so that
/// `𝓛ρ = −i(H_eff ρ − ρH_eff†) + Σγ cρc†`.
#[derive(Clone, Debug)]
pub struct CompiledGenerator {
    dim: usize,
    h_eff: SparseRows,
    jumps: Vec<(f64, SparseRows)>,
    norm_bound: f64,
    stiffness: f64,
}

/// Workspace for [`CompiledGenerator`], reusable across calls.
#[derive(Clone, Debug)]
pub struct ApplyScratch {
    x: Vec<C64>,
    y: Vec<C64>,
    z: Vec<C64>,
    w: Vec<C64>,
}

impl ApplyScratch {
    pub fn new(dim: usize) -> Self {
        let n = dim * dim;
        Self {
            x: vec![C64::new(0.0, 0.0); n],
            y: vec![C64::new(0.0, 0.0); n],
            z: vec![C64::new(0.0, 0.0); n],
            w: vec![C64::new(0.0, 0.0); n],
        }
    }
}

impl CompiledGenerator {
    fn new(g: &Generator) -> Self {
        let d = g.dim();
        let mut h_eff = g.hamiltonian.clone();
        for t in &g.terms {
            let cdc = &t.op.dag() * &t.op;
            h_eff.add_scaled(C64::new(0.0, -0.5 * t.rate), &cdc);
        }
        let drop = |m: &ComplexMatrix| SPARSE_DROP * m.max_abs();
        let jumps: Vec<(f64, SparseRows)> = g
            .terms
            .iter()
            .filter(|t| t.rate > 0.0)
            .map(|t| (t.rate, SparseRows::from_dense(&t.op, drop(&t.op))))
            .collect();
        let h_sparse = SparseRows::from_dense(&h_eff, drop(&h_eff));
        let norm_bound = 2.0 * h_sparse.inf_norm()
            + jumps.iter().map(|(r, c)| r * c.inf_norm() * c.inf_norm()).sum::<f64>();
        let min_rate = g.min_rate();
        let stiffness = if min_rate > 0.0 {
            g.max_frequency() / min_rate
        } else {
            f64::INFINITY
        };
        Self {
            dim: d,
            h_eff: h_sparse,
            jumps,
            norm_bound,
            stiffness,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Upper bound on the induced ∞-norm of `𝓛`, used to pick step sizes.
    pub fn norm_bound(&self) -> f64 {
        self.norm_bound
    }

    /// Ratio of the largest Hamiltonian frequency to the smallest damping rate.
    pub fn stiffness(&self) -> f64 {
        self.stiffness
    }

    /// `out = 𝓛ρ` assuming `ρ` is Hermitian. The result is Hermitian by
    /// construction.
    pub fn apply_hermitian(&self, rho: &[C64], out: &mut [C64], s: &mut ApplyScratch) {
        let n = self.dim;
        // jump part Σγ (cρ)c†, upper triangle only, accumulated in `w`
        for i in 0..n {
            s.w[i * n + i..(i + 1) * n].fill(C64::new(0.0, 0.0));
        }
        for (rate, c) in &self.jumps {
            c.mul_dense_into(rho, &mut s.x);
            c.add_right_adjoint_upper(&s.x, *rate, &mut s.w);
        }
        self.h_eff.mul_dense_into(rho, &mut s.x);
        // out = −iX + (−iX)† + W, in tiles to keep the transposed reads cached
        for bi in (0..n).step_by(TILE) {
            for bj in (bi..n).step_by(TILE) {
                for i in bi..(bi + TILE).min(n) {
                    for j in bj.max(i)..(bj + TILE).min(n) {
                        let a = -I * s.x[i * n + j];
                        let b = -I * s.x[j * n + i];
                        let v = a + b.conj() + s.w[i * n + j];
                        if i == j {
                            out[i * n + i] = C64::new(v.re, 0.0);
                        } else {
                            out[i * n + j] = v;
                            out[j * n + i] = v.conj();
                        }
                    }
                }
            }
        }
    }

    /// `out = 𝓛ρ` for arbitrary `ρ`.
    pub fn apply_general(&self, rho: &[C64], out: &mut [C64], s: &mut ApplyScratch) {
        let n = self.dim;
        let mut rho_dag = vec![C64::new(0.0, 0.0); n * n];
        adjoint_into(rho, n, &mut rho_dag);
        // −i H_eff ρ + i (H_eff ρ†)†
        self.h_eff.mul_dense_into(rho, &mut s.x);
        self.h_eff.mul_dense_into(&rho_dag, &mut s.y);
        adjoint_into(&s.y, n, &mut s.z);
        for ((o, x), z) in out.iter_mut().zip(&s.x).zip(&s.z) {
            *o = -I * x + I * z;
        }
        for (rate, c) in &self.jumps {
            // c ρ c† = c (c ρ†)†
            c.mul_dense_into(&rho_dag, &mut s.x);
            adjoint_into(&s.x, n, &mut s.y);
            c.mul_dense_into(&s.y, &mut s.z);
            for (o, v) in out.iter_mut().zip(&s.z) {
                *o += v * rate;
            }
        }
    }

    /// Convenience wrapper around [`Self::apply_hermitian`].
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = vec![C64::new(0.0, 0.0); self.dim * self.dim];
        let mut s = ApplyScratch::new(self.dim);
        if rho.is_hermitian(0.0) {
            self.apply_hermitian(rho.data(), &mut out, &mut s);
        } else {
            self.apply_general(rho.data(), &mut out, &mut s);
        }
        ComplexMatrix::new(self.dim, self.dim, out).expect("square")
    }
}
