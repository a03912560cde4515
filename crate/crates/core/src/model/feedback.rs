//! Quantum-jump feedback: unitary kicks applied after each detection and
//! the unconditioned dressing of a jump channel they induce.

use std::fmt;
use std::str::FromStr;

use super::states::{embed_atom, ATOM_DIM};
use crate::error::{Error, Result};
use crate::opalg::{herm_fn, kron_all, ComplexMatrix, LindbladTerm, C64};
use crate::registry::Registry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FeedbackKind {
    None,
    Nonlocal,
    LocalRandom,
}

impl FeedbackKind {
    pub const ALL: [FeedbackKind; 3] = [FeedbackKind::None, FeedbackKind::Nonlocal, FeedbackKind::LocalRandom];

    pub fn name(self) -> &'static str {
        match self {
            FeedbackKind::None => "none",
            FeedbackKind::Nonlocal => "nonlocal",
            FeedbackKind::LocalRandom => "local",
        }
    }
}

impl fmt::Display for FeedbackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FeedbackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownName {
                kind: "feedback strategy",
                name: s.to_string(),
                known: Self::ALL.map(|k| k.name()).join(", "),
            })
    }
}

/// Which kick follows a detection, its angle `ω` and the detector
/// efficiency `η`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FeedbackStrategy {
    pub kind: FeedbackKind,
    pub omega_fb: f64,
    pub eta: f64,
}

impl FeedbackStrategy {
    pub fn new(kind: FeedbackKind, omega_fb: f64, eta: f64) -> Result<Self> {
        let s = Self { kind, omega_fb, eta };
        s.validate()?;
        Ok(s)
    }

    pub fn none() -> Self {
        Self {
            kind: FeedbackKind::None,
            omega_fb: 0.0,
            eta: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.omega_fb.is_finite() {
            return Err(Error::InvalidParam {
                name: "omega_fb",
                reason: format!("must be finite, got {}", self.omega_fb),
            });
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return Err(Error::InvalidParam {
                name: "eta",
                reason: format!("detector efficiency must lie in [0, 1], got {}", self.eta),
            });
        }
        Ok(())
    }

    /// Instantiates the kick set through [`feedback_registry`].
    pub fn scheme(&self) -> Result<Box<dyn FeedbackScheme>> {
        feedback_registry().create(self.kind.name(), &self.omega_fb)
    }

    /// Replaces every channel `rate·𝓓[c]` by
    /// `η·rate·Σₖ wₖ𝓓[Uₖc] + (1−η)·rate·𝓓[c]`. `lift` maps an atomic
    /// kick onto the full Hilbert space.
    pub fn dress(
        &self,
        channels: &[LindbladTerm],
        lift: impl Fn(&ComplexMatrix) -> ComplexMatrix,
    ) -> Result<Vec<LindbladTerm>> {
        self.validate()?;
        let kicks = self.scheme()?.kicks();
        if kicks.is_empty() {
            return Ok(channels.iter().filter(|t| t.rate > 0.0).cloned().collect());
        }
        let lifted: Vec<(f64, ComplexMatrix)> = kicks.iter().map(|k| (k.weight, lift(&k.unitary))).collect();
        let mut out = Vec::new();
        for ch in channels {
            for (w, u) in &lifted {
                push_nonzero(&mut out, self.eta * ch.rate * w, u.checked_mul(&ch.op)?)?;
            }
            push_nonzero(&mut out, (1.0 - self.eta) * ch.rate, ch.op.clone())?;
        }
        Ok(out)
    }
}

fn push_nonzero(out: &mut Vec<LindbladTerm>, rate: f64, op: ComplexMatrix) -> Result<()> {
    if rate > 0.0 {
        out.push(LindbladTerm::new(rate, op)?);
    }
    Ok(())
}

/// One possible kick with the probability that it is applied.
#[derive(Clone, Debug)]
pub struct Kick {
    pub weight: f64,
    pub unitary: ComplexMatrix,
}

/// A feedback protocol: the set of atomic unitaries that may follow a
/// detection. Weights sum to one; an empty set means no feedback.
pub trait FeedbackScheme: Send + Sync {
    fn name(&self) -> &'static str;
    fn kicks(&self) -> Vec<Kick>;
}

struct NoFeedback;

impl FeedbackScheme for NoFeedback {
    fn name(&self) -> &'static str {
        "none"
    }
    fn kicks(&self) -> Vec<Kick> {
        Vec::new()
    }
}

struct Nonlocal(f64);

impl FeedbackScheme for Nonlocal {
    fn name(&self) -> &'static str {
        "nonlocal"
    }
    fn kicks(&self) -> Vec<Kick> {
        vec![Kick {
            weight: 1.0,
            unitary: feedback_unitary_nonlocal(self.0),
        }]
    }
}

struct LocalRandom(f64);

impl FeedbackScheme for LocalRandom {
    fn name(&self) -> &'static str {
        "local"
    }
    fn kicks(&self) -> Vec<Kick> {
        feedback_unitaries_local(self.0)
            .into_iter()
            .map(|unitary| Kick {
                weight: 1.0 / 3.0,
                unitary,
            })
            .collect()
    }
}

/// Schemes keyed by name; the factory argument is the kick angle `ω`.
pub fn feedback_registry() -> Registry<f64, dyn FeedbackScheme> {
    Registry::new("feedback strategy")
        .with("none", |_| -> Box<dyn FeedbackScheme> { Box::new(NoFeedback) })
        .with("nonlocal", |w| -> Box<dyn FeedbackScheme> { Box::new(Nonlocal(*w)) })
        .with("local", |w| -> Box<dyn FeedbackScheme> { Box::new(LocalRandom(*w)) })
}

/// `|0⟩⟨1| + |1⟩⟨0|` on one qutrit.
fn flip_01() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 0.0]]).expect("3x3")
}

/// `exp(−iθ(|0⟩⟨1| + |1⟩⟨0|))` on one qutrit.
fn qutrit_rotation(theta: f64) -> ComplexMatrix {
    herm_fn(&flip_01(), |x| C64::new(0.0, -theta * x).exp()).expect("flip_01 is Hermitian")
}

/// `exp[−iωX₁ − 2iωX₂]` with `Xᵢ = |1⟩ᵢ⟨0| + |0⟩ᵢ⟨1|`; atom 3 untouched.
pub fn feedback_unitary_nonlocal(omega_fb: f64) -> ComplexMatrix {
    let id = ComplexMatrix::identity(3);
    kron_all(&[&qutrit_rotation(omega_fb), &qutrit_rotation(2.0 * omega_fb), &id])
}

/// `Uⁱ = exp[−iωXᵢ]` for `i = 1, 2, 3`.
pub fn feedback_unitaries_local(omega_fb: f64) -> Vec<ComplexMatrix> {
    let r = qutrit_rotation(omega_fb);
    (0..3).map(|i| embed_atom(&r, i)).collect()
}

/// Lifts an atomic operator onto `atoms ⊗ modes` with `mode_dim` boson states.
pub fn lift_atomic(mode_dim: usize) -> impl Fn(&ComplexMatrix) -> ComplexMatrix {
    move |u| {
        debug_assert_eq!(u.rows(), ATOM_DIM);
        if mode_dim == 1 {
            u.clone()
        } else {
            crate::opalg::kron(u, &ComplexMatrix::identity(mode_dim))
        }
    }
}
