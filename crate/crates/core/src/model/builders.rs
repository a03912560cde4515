//! Generator builders for the three model levels: the effective
//! collective-decay model on the atoms alone, the single-mode cavity model,
//! and the full three-mode coupled-cavity model.

use std::f64::consts::SQRT_2;

use super::feedback::{lift_atomic, FeedbackStrategy};
use super::generator::Generator;
use super::params::{RawDrives, SystemParams};
use super::states::{
    annihilation, atoms_modes, basis_state, collective_ops, embed_atom, normal_modes, qutrit_ket_bra,
    ATOM_DIM,
};
use crate::error::{Error, Result};
use crate::opalg::{ComplexMatrix, LindbladTerm, C64};
use crate::registry::Registry;

/// `Ω(J₁⁺ + J₁⁻ + J₂⁺ + J₂⁻)`.
pub fn drive_hamiltonian(p: &SystemParams) -> ComplexMatrix {
    let ops = collective_ops();
    let mut h = &ops.j1_plus + &ops.j1_minus;
    h += &ops.j2_plus;
    h += &ops.j2_minus;
    h.scale_real(p.drive)
}

/// Collective decay without feedback: `H = Ω(J₁⁺+J₁⁻+J₂⁺+J₂⁻)`,
/// one channel `Γ𝓓[J₁⁻]` with `Γ = G²/κ`.
pub fn build_effective_me(p: &SystemParams) -> Result<Generator> {
    build_feedback_me(p, &FeedbackStrategy::none())
}

/// Effective model with the collective channel dressed by `strategy`.
pub fn build_feedback_me(p: &SystemParams, strategy: &FeedbackStrategy) -> Result<Generator> {
    p.validate()?;
    let ops = collective_ops();
    let channel = LindbladTerm::new(p.collective_rate(), ops.j1_minus)?;
    let terms = strategy.dress(&[channel], |u| u.clone())?;
    Generator::new(drive_hamiltonian(p), terms, ATOM_DIM)
}

/// Spontaneous emission surviving elimination of the excited levels: six
/// channels per atom. Uses `p.raw` when present and the default binding
/// otherwise. Channels from the `|r⟩` manifold carry `γ′`.
pub fn build_spontaneous_channels(p: &SystemParams) -> Result<Vec<LindbladTerm>> {
    if p.gamma == 0.0 && p.gamma_prime == 0.0 {
        return Ok(Vec::new());
    }
    if p.detuning == 0.0 {
        return Err(Error::InvalidParam {
            name: "detuning",
            reason: "spontaneous channels need a non-zero detuning".into(),
        });
    }
    let raw = p.raw.clone().unwrap_or_else(|| RawDrives::bind(p));
    let d2 = p.detuning * p.detuning;
    let rate_e = p.gamma / (2.0 * d2);
    let rate_r = p.gamma_prime / (2.0 * d2);
    let ket_bra = |i, j, amp: f64| qutrit_ket_bra(i, j).scale_real(amp);
    let mut out = Vec::with_capacity(18);
    for atom in 0..3 {
        let oa = raw.omega_a[atom];
        let mut single = Vec::with_capacity(6);
        for ket in [0, 1] {
            let op = &ket_bra(ket, 0, raw.lambda_a) + &ket_bra(ket, 1, raw.lambda_b);
            single.push((rate_e, op));
        }
        single.push((rate_e, ket_bra(0, 0, oa)));
        single.push((rate_e, ket_bra(1, 0, oa)));
        for ket in [1, 2] {
            let op = &ket_bra(ket, 1, raw.omega_b) + &ket_bra(ket, 2, raw.omega_c);
            single.push((rate_r, op));
        }
        for (rate, op) in single {
            if rate > 0.0 {
                out.push(LindbladTerm::new(rate, embed_atom(&op, atom))?);
            }
        }
    }
    Ok(out)
}

fn lift_terms(terms: Vec<LindbladTerm>, mode_dim: usize) -> Vec<LindbladTerm> {
    let lift = lift_atomic(mode_dim);
    terms
        .into_iter()
        .map(|t| LindbladTerm {
            rate: t.rate,
            op: lift(&t.op),
        })
        .collect()
}

/// Atoms coupled to the resonant mode `c₃` only:
/// `H = Ω(…) + (G/2)(J₁⁺c₃ + J₁⁻c₃†)`, channel `κ𝓓[c₃]` dressed by the
/// feedback, plus spontaneous channels.
pub fn build_cavity_me(p: &SystemParams, strategy: &FeedbackStrategy) -> Result<Generator> {
    p.validate()?;
    let m = p.n_max + 1;
    let c = annihilation(p.n_max);
    let ops = collective_ops();
    let id_m = ComplexMatrix::identity(m);
    let mut h = atoms_modes(&drive_hamiltonian(p), &id_m);
    let mut coupling = atoms_modes(&ops.j1_plus, &c);
    coupling += &atoms_modes(&ops.j1_minus, &c.dag());
    h.add_scaled(C64::new(0.5 * p.coupling, 0.0), &coupling);

    let channel = LindbladTerm::new(p.kappa, atoms_modes(&ComplexMatrix::identity(ATOM_DIM), &c))?;
    let mut terms = strategy.dress(&[channel], lift_atomic(m))?;
    terms.extend(lift_terms(build_spontaneous_channels(p)?, m));
    Generator::new(h, terms, ATOM_DIM)
}

/// Three atoms in three coupled cavities, written in the normal modes
/// `c₁, c₂, c₃` (each truncated at `n_max`). Atom `i` couples to its own
/// cavity mode with strength `G, G/√2, G`.
///
/// The detectors watch the physical modes `a, b, c`. Because these are an
/// orthogonal real mix of `c₁, c₂, c₃` and every detector triggers the same
/// kick, `Σₓ κ𝓓[U x] = Σₖ κ𝓓[U cₖ]`; the channels are stored in the
/// sparser normal-mode form.
pub fn build_full_me(p: &SystemParams, strategy: &FeedbackStrategy) -> Result<Generator> {
    p.validate()?;
    let m = (p.n_max + 1).pow(3);
    let normal = normal_modes(p.n_max);
    let [c1, c2, c3] = &normal;
    let id_m = ComplexMatrix::identity(m);

    let mut h = atoms_modes(&drive_hamiltonian(p), &id_m);
    let half = 0.5 * p.coupling;
    let mode_sum = |w: [f64; 3]| {
        let mut x = c1.scale_real(w[0]);
        x.add_scaled(C64::new(w[1], 0.0), c2);
        x.add_scaled(C64::new(w[2], 0.0), c3);
        x
    };
    let per_atom = [
        mode_sum([SQRT_2, 1.0, 1.0]),
        mode_sum([0.0, -1.0, 1.0]),
        mode_sum([-SQRT_2, 1.0, 1.0]),
    ];
    for (atom, modes) in per_atom.iter().enumerate() {
        let raise = embed_atom(&qutrit_ket_bra(0, 1), atom);
        let x = atoms_modes(&raise, modes);
        let xd = x.dag();
        h.add_scaled(C64::new(half, 0.0), &x);
        h.add_scaled(C64::new(half, 0.0), &xd);
    }
    let id_a = ComplexMatrix::identity(ATOM_DIM);
    let n1 = c1.dag().checked_mul(c1)?;
    let n2 = c2.dag().checked_mul(c2)?;
    h.add_scaled(C64::new(-SQRT_2 * p.hopping, 0.0), &atoms_modes(&id_a, &n1));
    h.add_scaled(C64::new(-2.0 * SQRT_2 * p.hopping, 0.0), &atoms_modes(&id_a, &n2));

    let channels = normal
        .iter()
        .map(|x| LindbladTerm::new(p.kappa, atoms_modes(&id_a, x)))
        .collect::<Result<Vec<_>>>()?;
    let mut terms = strategy.dress(&channels, lift_atomic(m))?;
    terms.extend(lift_terms(build_spontaneous_channels(p)?, m));
    Generator::new(h, terms, ATOM_DIM)
}

/// `|l₁l₂l₃⟩⟨l₁l₂l₃| ⊗ |vac⟩⟨vac|` on a space with `mode_dim` boson states.
pub fn product_state(levels: [usize; 3], mode_dim: usize) -> ComplexMatrix {
    let atoms = ComplexMatrix::projector(&basis_state(levels));
    let vac = ComplexMatrix::ket_bra(mode_dim, 0, 0);
    atoms_modes(&atoms, &vac)
}

/// A model level selectable at runtime.
pub trait ModelBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, p: &SystemParams, strategy: &FeedbackStrategy) -> Result<Generator>;
    /// Number of boson states tensored onto the atoms.
    fn mode_dim(&self, p: &SystemParams) -> usize;
}

struct Effective;
struct Cavity;
struct Full;

impl ModelBuilder for Effective {
    fn name(&self) -> &'static str {
        "effective"
    }
    fn build(&self, p: &SystemParams, strategy: &FeedbackStrategy) -> Result<Generator> {
        build_feedback_me(p, strategy)?.with_terms(build_spontaneous_channels(p)?)
    }
    fn mode_dim(&self, _: &SystemParams) -> usize {
        1
    }
}

impl ModelBuilder for Cavity {
    fn name(&self) -> &'static str {
        "cavity"
    }
    fn build(&self, p: &SystemParams, strategy: &FeedbackStrategy) -> Result<Generator> {
        build_cavity_me(p, strategy)
    }
    fn mode_dim(&self, p: &SystemParams) -> usize {
        p.n_max + 1
    }
}

impl ModelBuilder for Full {
    fn name(&self) -> &'static str {
        "full"
    }
    fn build(&self, p: &SystemParams, strategy: &FeedbackStrategy) -> Result<Generator> {
        build_full_me(p, strategy)
    }
    fn mode_dim(&self, p: &SystemParams) -> usize {
        (p.n_max + 1).pow(3)
    }
}

pub fn model_registry() -> Registry<(), dyn ModelBuilder> {
    Registry::new("model")
        .with("effective", |_| -> Box<dyn ModelBuilder> { Box::new(Effective) })
        .with("cavity", |_| -> Box<dyn ModelBuilder> { Box::new(Cavity) })
        .with("full", |_| -> Box<dyn ModelBuilder> { Box::new(Full) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::feedback::FeedbackKind;
    use crate::model::states::{singlet_state, N_ATOMS};
    use crate::opalg::{kron, vec_identity, dissipator};

    fn singlet_rho() -> ComplexMatrix {
        ComplexMatrix::projector(&singlet_state())
    }

    fn strategies() -> Vec<FeedbackStrategy> {
        vec![
            FeedbackStrategy::none(),
            FeedbackStrategy::new(FeedbackKind::Nonlocal, 0.3 * std::f64::consts::PI, 1.0).unwrap(),
            FeedbackStrategy::new(FeedbackKind::Nonlocal, 1.3, 0.4).unwrap(),
            FeedbackStrategy::new(FeedbackKind::LocalRandom, 0.5 * std::f64::consts::PI, 0.7).unwrap(),
        ]
    }

    fn random_density(n: usize, seed: u64) -> ComplexMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = ComplexMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        let rho = &a * &a.dag();
        let tr = rho.trace().re;
        rho.scale_real(1.0 / tr)
    }

    #[test]
    fn effective_generator_structure() {
        let p = SystemParams::effective(0.5, 0.0, 1.0);
        let g = build_effective_me(&p).unwrap();
        assert_eq!(g.dim(), 27);
        assert_eq!(g.terms().len(), 1);
        assert!((g.terms()[0].rate - 1.0).abs() < 1e-15);
        assert!(g.hamiltonian().is_hermitian(1e-12));
        assert!(g.apply(&singlet_rho()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn decay_only_fixes_lower_product() {
        let p = SystemParams::effective(0.0, 0.0, 1.0);
        let g = build_effective_me(&p).unwrap();
        let rho = product_state([1, 1, 1], 1);
        assert!(g.apply(&rho).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn feedback_keeps_singlet_stationary_and_trace() {
        for s in strategies() {
            let p = SystemParams::effective(0.7, s.omega_fb, s.eta);
            let g = build_feedback_me(&p, &s).unwrap();
            assert!(g.apply(&singlet_rho()).unwrap().max_abs() < 1e-12, "{s:?}");
            let l = g.liouvillian().unwrap();
            let row = l.trace_row();
            assert!(row.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-12);
            let rho = random_density(27, 5);
            assert!(g.apply(&rho).unwrap().trace().norm() < 1e-12);
        }
    }

    #[test]
    fn zero_efficiency_reduces_to_plain_decay() {
        let p = SystemParams::effective(0.5, 0.0, 1.0);
        let plain = build_effective_me(&p).unwrap();
        for kind in [FeedbackKind::Nonlocal, FeedbackKind::LocalRandom] {
            let s = FeedbackStrategy::new(kind, 0.9, 0.0).unwrap();
            let g = build_feedback_me(&p, &s).unwrap();
            assert_eq!(g.terms(), plain.terms());
            assert_eq!(g.hamiltonian(), plain.hamiltonian());
        }
    }

    #[test]
    fn local_dressing_has_three_equal_weights() {
        let s = FeedbackStrategy::new(FeedbackKind::LocalRandom, 0.5, 1.0).unwrap();
        let p = SystemParams::effective(0.5, 0.5, 1.0);
        let g = build_feedback_me(&p, &s).unwrap();
        assert_eq!(g.terms().len(), 3);
        for t in g.terms() {
            assert!((t.rate - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    fn emission_params() -> SystemParams {
        SystemParams {
            coupling: 0.1,
            drive: 0.01,
            kappa: 0.02,
            gamma: 0.05,
            gamma_prime: 0.05,
            ..SystemParams::default()
        }
        .with_bound_drives()
    }

    #[test]
    fn spontaneous_channel_count_and_scaling() {
        let p = emission_params();
        let terms = build_spontaneous_channels(&p).unwrap();
        assert_eq!(terms.len(), 6 * N_ATOMS);
        let rho = random_density(27, 17);
        for t in &terms {
            let scale = t.op.max_abs().powi(2).max(1.0);
            assert!(dissipator(&t.op, &rho).unwrap().trace().norm() < 1e-14 * scale);
        }

        // doubling Δ at fixed raw amplitudes quarters every rate
        let mut q = p.clone();
        q.detuning *= 2.0;
        let doubled = build_spontaneous_channels(&q).unwrap();
        for (a, b) in terms.iter().zip(&doubled) {
            assert!((b.rate - a.rate / 4.0).abs() < 1e-15 * a.rate.max(1e-300));
            assert_eq!(a.op, b.op);
        }

        let none = SystemParams { gamma: 0.0, gamma_prime: 0.0, ..p.clone() };
        assert!(build_spontaneous_channels(&none).unwrap().is_empty());
        let bad = SystemParams { detuning: 0.0, raw: None, ..p };
        assert!(build_spontaneous_channels(&bad).is_err());
    }

    #[test]
    fn spontaneous_channels_match_printed_operators() {
        // R₀ₑ = √(γλa²/2Δ²)|0⟩(⟨0| + (λb/λa)⟨1|) on atom 1
        let p = emission_params();
        let raw = p.raw.clone().unwrap();
        let t = &build_spontaneous_channels(&p).unwrap()[0];
        let amp = (p.gamma * raw.lambda_a.powi(2) / (2.0 * p.detuning.powi(2))).sqrt();
        let mut r = qutrit_ket_bra(0, 0);
        r.add_scaled(C64::new(raw.lambda_b / raw.lambda_a, 0.0), &qutrit_ket_bra(0, 1));
        let expected = embed_atom(&r.scale_real(amp), 0);
        let got = t.op.scale_real(t.rate.sqrt());
        assert!((&got - &expected).max_abs() < 1e-15);
    }

    #[test]
    fn cavity_model_singlet_vacuum_is_stationary() {
        for s in strategies() {
            let p = SystemParams { n_max: 2, ..SystemParams::effective(0.5, s.omega_fb, s.eta) };
            let g = build_cavity_me(&p, &s).unwrap();
            assert_eq!(g.dim(), 81);
            let rho = atoms_modes(&singlet_rho(), &ComplexMatrix::ket_bra(3, 0, 0));
            assert!(g.apply(&rho).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn cavity_model_decouples_without_coupling() {
        let p = SystemParams {
            coupling: 0.0,
            ..SystemParams::effective(0.5, 0.0, 1.0)
        };
        let g = build_cavity_me(&p, &FeedbackStrategy::none()).unwrap();
        // any atomic state times vacuum evolves under the drive alone
        let atoms = random_density(27, 3);
        let rho = atoms_modes(&atoms, &ComplexMatrix::ket_bra(2, 0, 0));
        let h = drive_hamiltonian(&p);
        let expected = atoms_modes(
            &(&(&h * &atoms) - &(&atoms * &h)).scale(C64::new(0.0, -1.0)),
            &ComplexMatrix::ket_bra(2, 0, 0),
        );
        assert!((&g.apply(&rho).unwrap() - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn full_model_basics() {
        let s = FeedbackStrategy::new(FeedbackKind::Nonlocal, 0.3 * std::f64::consts::PI, 1.0).unwrap();
        let p = SystemParams {
            kappa: 5.0,
            drive: 0.1,
            ..SystemParams::default()
        }
        .with_detuning(20.0);
        let g = build_full_me(&p, &s).unwrap();
        assert_eq!(g.dim(), 216);
        assert_eq!(g.terms().len(), 3);
        assert!(g.hamiltonian().is_hermitian(1e-12));
        // the detuned modes c₁, c₂ do not couple collectively, so the
        // singlet is only approximately dark here
        let rho = atoms_modes(&singlet_rho(), &ComplexMatrix::ket_bra(8, 0, 0));
        let leak = g.compile().apply(&rho).max_abs();
        assert!(leak > 1e-3 && leak < p.coupling);
        let any = random_density(216, 8);
        assert!(g.compile().apply(&any).trace().norm() < 1e-11);
    }

    #[test]
    fn full_model_detectors_equal_physical_mode_detectors() {
        let p = SystemParams::default().with_detuning(20.0);
        let s = FeedbackStrategy::new(FeedbackKind::Nonlocal, 0.9, 1.0).unwrap();
        let g = build_full_me(&p, &s).unwrap();
        let rho = random_density(216, 4);
        let mut from_normal = ComplexMatrix::zeros(216, 216);
        for t in g.terms() {
            from_normal += &dissipator(&t.op, &rho).unwrap().scale_real(t.rate);
        }
        let u = kron(&crate::model::feedback_unitary_nonlocal(0.9), &ComplexMatrix::identity(8));
        let mut from_physical = ComplexMatrix::zeros(216, 216);
        for x in crate::model::states::physical_modes(&normal_modes(1)) {
            let op = &u * &kron(&ComplexMatrix::identity(27), &x);
            from_physical += &dissipator(&op, &rho).unwrap().scale_real(p.kappa);
        }
        assert!((&from_physical - &from_normal).max_abs() < 1e-13);
    }

    #[test]
    fn full_model_without_hopping_has_no_mode_frequencies() {
        let p = SystemParams {
            hopping: 0.0,
            drive: 0.0,
            ..SystemParams::default()
        };
        let g = build_full_me(&p, &FeedbackStrategy::none()).unwrap();
        // vacuum diagonal of H vanishes when J = 0 and Ω = 0
        for k in 0..g.dim() {
            assert!(g.hamiltonian()[(k, k)].norm() < 1e-15);
        }
        let with_j = build_full_me(&SystemParams { drive: 0.0, ..SystemParams::default() }, &FeedbackStrategy::none())
            .unwrap();
        // |·⟩ ⊗ |n₁=1, n₂=1, n₃=0⟩ sits at mode index 4 + 2 = 6
        let e = with_j.hamiltonian()[(6, 6)].re;
        assert!((e + 3.0 * SQRT_2 * SystemParams::default().hopping).abs() < 1e-9);
    }

    #[test]
    fn trace_identity_is_left_null_vector_for_cavity_model() {
        let s = FeedbackStrategy::new(FeedbackKind::LocalRandom, 0.9, 0.6).unwrap();
        let p = SystemParams { n_max: 1, gamma: 0.01, ..SystemParams::effective(0.5, 0.9, 0.6) };
        let l = build_cavity_me(&p, &s).unwrap().liouvillian().unwrap();
        let v = vec_identity(l.dim());
        let n = l.dim() * l.dim();
        for col in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for (row, vr) in v.iter().enumerate() {
                acc += vr.conj() * l.matrix()[(row, col)];
            }
            assert!(acc.norm() < 1e-12);
        }
    }

    #[test]
    fn registry_lists_models() {
        let reg = model_registry();
        assert_eq!(reg.names(), vec!["cavity", "effective", "full"]);
        let p = SystemParams::effective(0.5, 0.3, 1.0);
        let m = reg.create("effective", &()).unwrap();
        assert_eq!(m.mode_dim(&p), 1);
        assert_eq!(m.build(&p, &FeedbackStrategy::none()).unwrap().dim(), 27);
        assert!(reg.create("bogus", &()).is_err());
    }
}
