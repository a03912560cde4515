//! Three-qutrit basis, the singlet `|S3⟩`, collective operators and
//! bosonic mode operators.
//!
//! Atom 1 is the slowest index: `|abc⟩` sits at `9a + 3b + c`. Levels are
//! ordered `0, 1, 2`. In composite spaces atoms come before the modes.

use std::f64::consts::SQRT_2;

use crate::opalg::{kron, kron_all, ComplexMatrix, C64, ONE, ZERO};

pub const LEVELS: usize = 3;
pub const N_ATOMS: usize = 3;
pub const ATOM_DIM: usize = 27;

/// Index of `|l1 l2 l3⟩`.
pub fn basis_index(levels: [usize; 3]) -> usize {
    9 * levels[0] + 3 * levels[1] + levels[2]
}

pub fn basis_state(levels: [usize; 3]) -> Vec<C64> {
    let mut v = vec![ZERO; ATOM_DIM];
    v[basis_index(levels)] = ONE;
    v
}

/// `(|012⟩ − |102⟩ − |210⟩ + |120⟩ + |201⟩ − |021⟩)/√6`
pub fn singlet_state() -> Vec<C64> {
    let amp = 1.0 / 6f64.sqrt();
    let mut v = vec![ZERO; ATOM_DIM];
    for (levels, sign) in [
        ([0, 1, 2], 1.0),
        ([1, 0, 2], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
    ] {
        v[basis_index(levels)] = C64::new(sign * amp, 0.0);
    }
    v
}

/// Single-atom `|i⟩⟨j|`.
pub fn qutrit_ket_bra(i: usize, j: usize) -> ComplexMatrix {
    ComplexMatrix::ket_bra(LEVELS, i, j)
}

/// Embeds a single-qutrit operator on `atom` (0-based) into the 27-dim space.
pub fn embed_atom(op: &ComplexMatrix, atom: usize) -> ComplexMatrix {
    assert!(atom < N_ATOMS, "atom index out of range");
    let id = ComplexMatrix::identity(LEVELS);
    let factors: Vec<&ComplexMatrix> = (0..N_ATOMS).map(|k| if k == atom { op } else { &id }).collect();
    kron_all(&factors)
}

/// `Σᵢ op_i` over the three atoms.
pub fn collective(op: &ComplexMatrix) -> ComplexMatrix {
    (0..N_ATOMS).fold(ComplexMatrix::zeros(ATOM_DIM, ATOM_DIM), |mut acc, i| {
        acc += &embed_atom(op, i);
        acc
    })
}

/// Collective lowering and raising operators.
#[derive(Clone, Debug)]
pub struct CollectiveOps {
    /// `J₁⁻ = Σᵢ |1⟩ᵢ⟨0|`
    pub j1_minus: ComplexMatrix,
    pub j1_plus: ComplexMatrix,
    /// `J₂⁻ = Σᵢ |1⟩ᵢ⟨2|`
    pub j2_minus: ComplexMatrix,
    pub j2_plus: ComplexMatrix,
}

pub fn collective_ops() -> CollectiveOps {
    let j1_minus = collective(&qutrit_ket_bra(1, 0));
    let j2_minus = collective(&qutrit_ket_bra(1, 2));
    CollectiveOps {
        j1_plus: j1_minus.dag(),
        j2_plus: j2_minus.dag(),
        j1_minus,
        j2_minus,
    }
}

/// Truncated annihilation operator on `0..=n_max`.
pub fn annihilation(n_max: usize) -> ComplexMatrix {
    let d = n_max + 1;
    let mut a = ComplexMatrix::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// Normal-mode annihilators `c₁, c₂, c₃` on `modes = c₁ ⊗ c₂ ⊗ c₃`,
/// each truncated at `n_max`.
pub fn normal_modes(n_max: usize) -> [ComplexMatrix; 3] {
    let a = annihilation(n_max);
    let id = ComplexMatrix::identity(n_max + 1);
    [
        kron_all(&[&a, &id, &id]),
        kron_all(&[&id, &a, &id]),
        kron_all(&[&id, &id, &a]),
    ]
}

/// Physical cavity modes `(a, b, c)` obtained by inverting
/// `c₁ = (a − c)/√2`, `c₂ = (a − √2 b + c)/2`, `c₃ = (a + √2 b + c)/2`.
pub fn physical_modes(normal: &[ComplexMatrix; 3]) -> [ComplexMatrix; 3] {
    let [c1, c2, c3] = normal;
    let h = 1.0 / SQRT_2;
    let combo = |w: [f64; 3]| {
        let mut m = c1.scale_real(w[0]);
        m.add_scaled(C64::new(w[1], 0.0), c2);
        m.add_scaled(C64::new(w[2], 0.0), c3);
        m
    };
    [combo([h, 0.5, 0.5]), combo([0.0, -h, h]), combo([-h, 0.5, 0.5])]
}

/// `op_atoms ⊗ op_modes`.
pub fn atoms_modes(atoms: &ComplexMatrix, modes: &ComplexMatrix) -> ComplexMatrix {
    kron(atoms, modes)
}

/// Permutation of atom labels acting on the 27-dim space: the content of
/// atom `k` moves to atom `perm[k]`.
pub fn atom_permutation(perm: [usize; 3]) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(ATOM_DIM, ATOM_DIM);
    for a in 0..LEVELS {
        for b in 0..LEVELS {
            for c in 0..LEVELS {
                let src = [a, b, c];
                let mut dst = [0; 3];
                for k in 0..3 {
                    dst[perm[k]] = src[k];
                }
                p[(basis_index(dst), basis_index(src))] = ONE;
            }
        }
    }
    p
}
