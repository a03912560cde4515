//! Time steppers for `ρ̇ = 𝓛ρ` on row-major Hermitian density matrices.

use crate::error::{Error, Result};
use crate::model::{ApplyScratch, CompiledGenerator};
use crate::opalg::{expm, ComplexMatrix, C64};
use crate::registry::Registry;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-8, atol: 1e-10 }
    }
}

/// Advances a density matrix under a fixed generator. Implementations keep
/// step-size state between calls, so one instance should follow one
/// trajectory.
pub trait Propagator: Send {
    fn name(&self) -> &'static str;
    /// Evolves `rho` from `t0` to `t1`; `rho` stays Hermitian.
    fn advance(&mut self, gen: &CompiledGenerator, rho: &mut [C64], t0: f64, t1: f64) -> Result<()>;
    /// Generator applications so far.
    fn evaluations(&self) -> usize;
}

pub fn propagator_registry() -> Registry<Tolerances, dyn Propagator> {
    Registry::new("propagator")
        .with("dopri5", |t| -> Box<dyn Propagator> { Box::new(Dopri5::new(*t)) })
        .with("krylov", |t| -> Box<dyn Propagator> { Box::new(Krylov::new(*t)) })
}

fn hermitize(rho: &mut [C64], n: usize) {
    for i in 0..n {
        rho[i * n + i].im = 0.0;
        for j in (i + 1)..n {
            let m = (rho[i * n + j] + rho[j * n + i].conj()) * 0.5;
            rho[i * n + j] = m;
            rho[j * n + i] = m.conj();
        }
    }
}

fn dim_of(len: usize) -> usize {
    let n = (len as f64).sqrt().round() as usize;
    assert_eq!(n * n, len, "density matrix buffer is not square");
    n
}

// Dormand–Prince 5(4) tableau.
const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Adaptive Dormand–Prince 5(4) with first-same-as-last stages.
pub struct Dopri5 {
    tol: Tolerances,
    h: Option<f64>,
    k: Vec<Vec<C64>>,
    k1_valid: bool,
    stage: Vec<C64>,
    scratch: Option<ApplyScratch>,
    evals: usize,
}

impl Dopri5 {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            tol,
            h: None,
            k: Vec::new(),
            k1_valid: false,
            stage: Vec::new(),
            scratch: None,
            evals: 0,
        }
    }

    fn ensure_buffers(&mut self, n: usize) {
        if self.stage.len() != n * n {
            self.k = vec![vec![C64::new(0.0, 0.0); n * n]; 7];
            self.stage = vec![C64::new(0.0, 0.0); n * n];
            self.scratch = Some(ApplyScratch::new(n));
            self.k1_valid = false;
        }
    }
}

impl Propagator for Dopri5 {
    fn name(&self) -> &'static str {
        "dopri5"
    }

    fn evaluations(&self) -> usize {
        self.evals
    }

    fn advance(&mut self, gen: &CompiledGenerator, rho: &mut [C64], t0: f64, t1: f64) -> Result<()> {
        let n = dim_of(rho.len());
        self.ensure_buffers(n);
        let mut scratch = self.scratch.take().expect("buffers allocated");
        let span = t1 - t0;
        if span <= 0.0 {
            self.scratch = Some(scratch);
            return Ok(());
        }
        let mut h = self.h.unwrap_or_else(|| {
            let b = gen.norm_bound();
            if b > 0.0 {
                0.1 / b
            } else {
                span
            }
        });
        if !self.k1_valid {
            gen.apply_hermitian(rho, &mut self.k[0], &mut scratch);
            self.evals += 1;
            self.k1_valid = true;
        }
        let mut t = t0;
        while t < t1 {
            let remaining = t1 - t;
            let last = h >= remaining * (1.0 - 1e-12);
            let step = if last { remaining } else { h };
            if step < 1e-14 * t.abs().max(1.0) {
                self.scratch = Some(scratch);
                return Err(Error::StepUnderflow {
                    t,
                    h: step,
                    ratio: gen.stiffness(),
                });
            }
            for s in 1..7 {
                let row = A[s - 1];
                for (idx, out) in self.stage.iter_mut().enumerate() {
                    let mut acc = C64::new(0.0, 0.0);
                    for (j, a) in row.iter().enumerate() {
                        if *a != 0.0 {
                            acc += self.k[j][idx] * *a;
                        }
                    }
                    *out = rho[idx] + acc * step;
                }
                gen.apply_hermitian(&self.stage, &mut self.k[s], &mut scratch);
                self.evals += 1;
            }
            // stage now holds the 5th-order solution; k[6] = 𝓛(stage)
            let mut err_sq = 0.0;
            for idx in 0..rho.len() {
                let mut e = C64::new(0.0, 0.0);
                for (j, c) in E.iter().enumerate() {
                    if *c != 0.0 {
                        e += self.k[j][idx] * *c;
                    }
                }
                let scale = self.tol.atol + self.tol.rtol * rho[idx].norm().max(self.stage[idx].norm());
                err_sq += (e.norm() * step / scale).powi(2);
            }
            let err = (err_sq / rho.len() as f64).sqrt();
            if err <= 1.0 {
                t = if last { t1 } else { t + step };
                rho.copy_from_slice(&self.stage);
                hermitize(rho, n);
                self.k.swap(0, 6);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || fac < 1.0 {
                    h = step * fac;
                }
            } else {
                let fac = (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                h = step * fac;
            }
        }
        self.h = Some(h);
        self.scratch = Some(scratch);
        Ok(())
    }
}

/// Krylov-subspace action of `exp(t𝓛)` with local error control, after
/// Sidje's `expv`. Basis vectors stay Hermitian because the Arnoldi
/// coefficients are taken in the real inner product `Re tr(A†B)`.
pub struct Krylov {
    tol: f64,
    m: usize,
    tau: Option<f64>,
    evals: usize,
}

impl Krylov {
    pub fn new(tol: Tolerances) -> Self {
        Self {
            tol: tol.rtol,
            m: 20,
            tau: None,
            evals: 0,
        }
    }
}

/// `Re⟨a, b⟩` with independent partial sums so the loop pipelines.
fn real_inner(a: &[C64], b: &[C64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let (ca, cb) = (a.chunks_exact(4), b.chunks_exact(4));
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x.re * y.re + x.im * y.im).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..4 {
            acc[2 * k] += x[k].re * y[k].re;
            acc[2 * k + 1] += x[k].im * y[k].im;
        }
    }
    acc.iter().sum::<f64>() + tail
}

fn round_two_digits(x: f64) -> f64 {
    if x <= 0.0 || !x.is_finite() {
        return x;
    }
    let s = 10f64.powf(x.log10().floor() - 1.0);
    (x / s).ceil() * s
}

impl Propagator for Krylov {
    fn name(&self) -> &'static str {
        "krylov"
    }

    fn evaluations(&self) -> usize {
        self.evals
    }

    fn advance(&mut self, gen: &CompiledGenerator, rho: &mut [C64], t0: f64, t1: f64) -> Result<()> {
        let n = dim_of(rho.len());
        let len = rho.len();
        let span = t1 - t0;
        let anorm = gen.norm_bound();
        if span <= 0.0 || anorm == 0.0 {
            return Ok(());
        }
        let m = self.m.min(len);
        let mut scratch = ApplyScratch::new(n);
        let mut basis: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); len]; m + 1];
        let mut work = vec![C64::new(0.0, 0.0); len];
        let btol = 1e-14 * anorm;
        let (delta, gamma) = (1.2, 0.9);
        let xm = 1.0 / m as f64;

        let mut beta = real_inner(rho, rho).sqrt();
        if beta == 0.0 {
            return Ok(());
        }
        let mut tau_next = self.tau.unwrap_or_else(|| {
            let mf = (m + 1) as f64;
            let fact = (mf / std::f64::consts::E).powf(mf) * (2.0 * std::f64::consts::PI * mf).sqrt();
            round_two_digits((1.0 / anorm) * ((fact * self.tol) / (4.0 * beta * anorm)).powf(xm))
        });
        let mut t = 0.0;
        while t < span {
            let mut tau = tau_next.min(span - t);
            for (b, r) in basis[0].iter_mut().zip(rho.iter()) {
                *b = r / beta;
            }
            let mut hess = vec![vec![0.0f64; m + 2]; m + 2];
            let mut breakdown = false;
            let mut mb = m;
            for j in 0..m {
                gen.apply_hermitian(&basis[j], &mut work, &mut scratch);
                self.evals += 1;
                for (i, v) in basis.iter().enumerate().take(j + 1) {
                    let h = real_inner(v, &work);
                    hess[i][j] = h;
                    for (w, x) in work.iter_mut().zip(v) {
                        *w -= x * h;
                    }
                }
                let s = real_inner(&work, &work).sqrt();
                if s < btol {
                    breakdown = true;
                    mb = j + 1;
                    tau = span - t;
                    break;
                }
                hess[j + 1][j] = s;
                for (b, w) in basis[j + 1].iter_mut().zip(&work) {
                    *b = w / s;
                }
            }
            let mut avnorm = 0.0;
            if !breakdown {
                hess[m + 1][m] = 1.0;
                gen.apply_hermitian(&basis[m], &mut work, &mut scratch);
                self.evals += 1;
                avnorm = real_inner(&work, &work).sqrt();
            }
            let mut rejects = 0;
            let (f, err_loc, used) = loop {
                let mx = if breakdown { mb } else { m + 2 };
                let small = ComplexMatrix::from_fn(mx, mx, |i, j| C64::new(tau * hess[i][j], 0.0));
                let f = expm(&small)?;
                if breakdown {
                    break (f, btol, mb);
                }
                let phi1 = (beta * f[(m, 0)]).norm();
                let phi2 = (beta * f[(m + 1, 0)] * avnorm).norm();
                let err = if phi1 > 10.0 * phi2 {
                    phi2
                } else if phi1 > phi2 {
                    phi1 * phi2 / (phi1 - phi2)
                } else {
                    phi1
                };
                if err <= delta * tau * self.tol || rejects >= 20 {
                    break (f, err, m + 1);
                }
                tau = round_two_digits(gamma * tau * (tau * self.tol / err).powf(xm));
                rejects += 1;
            };
            // w = β Σᵢ F[i,0] vᵢ
            work.fill(C64::new(0.0, 0.0));
            for (i, v) in basis.iter().enumerate().take(used) {
                let c = beta * f[(i, 0)].re;
                for (w, x) in work.iter_mut().zip(v) {
                    *w += x * c;
                }
            }
            rho.copy_from_slice(&work);
            hermitize(rho, n);
            beta = real_inner(rho, rho).sqrt();
            t += tau;
            if !breakdown {
                let err = err_loc.max(1e-300);
                tau_next = round_two_digits(gamma * tau * (tau * self.tol / err).powf(xm));
            }
            if beta == 0.0 {
                break;
            }
        }
        self.tau = Some(tau_next);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Generator;
    use crate::opalg::LindbladTerm;

    fn qubit_decay(gamma: f64, omega: f64) -> Generator {
        let sx = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let lower = ComplexMatrix::ket_bra(2, 1, 0);
        Generator::new(sx.scale_real(omega), vec![LindbladTerm::new(gamma, lower).unwrap()], 2).unwrap()
    }

    fn run(name: &str, g: &Generator, t: f64) -> (Vec<C64>, usize) {
        let c = g.compile();
        let mut p = propagator_registry().create(name, &Tolerances::default()).unwrap();
        let mut rho = ComplexMatrix::ket_bra(2, 0, 0).into_data();
        p.advance(&c, &mut rho, 0.0, t / 2.0).unwrap();
        p.advance(&c, &mut rho, t / 2.0, t).unwrap();
        (rho, p.evaluations())
    }

    #[test]
    fn pure_decay_matches_exponential() {
        let g = qubit_decay(0.7, 0.0);
        for name in ["dopri5", "krylov"] {
            let (rho, _) = run(name, &g, 3.0);
            let p_upper = (-0.7f64 * 3.0).exp();
            assert!((rho[0].re - p_upper).abs() < 1e-8, "{name}: {}", rho[0].re);
            assert!((rho[0].re + rho[3].re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn driven_decay_matches_superoperator_exponential() {
        let g = qubit_decay(0.4, 1.3);
        let l = g.liouvillian().unwrap();
        let t = 5.0;
        let prop = expm(&l.matrix().scale_real(t)).unwrap();
        let v0 = crate::opalg::vectorize(&ComplexMatrix::ket_bra(2, 0, 0));
        let exact = crate::opalg::devectorize(&prop.mat_vec(&v0), 2).unwrap();
        for name in ["dopri5", "krylov"] {
            let (rho, evals) = run(name, &g, t);
            let got = ComplexMatrix::new(2, 2, rho).unwrap();
            assert!((&got - &exact).max_abs() < 1e-7, "{name}");
            assert!(got.is_hermitian(0.0));
            assert!(evals > 0);
        }
    }

    #[test]
    fn zero_generator_is_identity() {
        let g = Generator::zero(2);
        let rho0 = ComplexMatrix::from_real_rows(&[&[0.3, 0.1], &[0.1, 0.7]]).unwrap();
        for name in ["dopri5", "krylov"] {
            let c = g.compile();
            let mut p = propagator_registry().create(name, &Tolerances::default()).unwrap();
            let mut rho = rho0.data().to_vec();
            p.advance(&c, &mut rho, 0.0, 10.0).unwrap();
            assert_eq!(rho, rho0.data());
        }
    }

    #[test]
    fn underflow_reports_stiffness_ratio() {
        let g = qubit_decay(1e-3, 1e3);
        let c = g.compile();
        let mut p = Dopri5::new(Tolerances { rtol: 1e-30, atol: 1e-300 });
        let mut rho = ComplexMatrix::ket_bra(2, 0, 0).into_data();
        match p.advance(&c, &mut rho, 0.0, 1.0) {
            Err(Error::StepUnderflow { ratio, .. }) => assert!(ratio > 1e5),
            other => panic!("expected underflow, got {other:?}"),
        }
    }

    #[test]
    fn unknown_propagator() {
        assert!(propagator_registry().create("euler", &Tolerances::default()).is_err());
    }
}
