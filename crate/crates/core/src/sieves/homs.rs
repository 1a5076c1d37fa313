use std::fmt;

use super::{Presheaf, Sieve};
use crate::exactalg::{nullspace, Matrix, Scalar, Subspace};
use crate::lincat::{LinCategory, ObjId};
use crate::topology::CoverSystem;

/// Natural transformations `R => F` from a sieve to a presheaf, as a
/// subspace of the tuples of component matrices `R(a) -> F(a)`.
///
/// Columns of the component at `a` are indexed by the canonical basis of
/// `R(a)`; a tuple is flattened object by object, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTransModule<K> {
    // (offset, rows, cols) per object
    layout: Vec<(usize, usize, usize)>,
    solutions: Subspace<K>,
}

impl<K: Scalar> NatTransModule<K> {
    pub fn dim(&self) -> usize {
        self.solutions.dim()
    }

    pub fn ambient_dim(&self) -> usize {
        self.solutions.ambient_dim()
    }

    pub fn basis(&self) -> Vec<Vec<K>> {
        self.solutions.basis_vectors()
    }

    pub fn contains(&self, flat: &[K]) -> bool {
        self.solutions.contains(flat)
    }

    pub fn coordinates(&self, flat: &[K]) -> Option<Vec<K>> {
        self.solutions.coordinates(flat)
    }

    /// The component `R(a) -> F(a)` of a flattened transformation.
    pub fn component(&self, flat: &[K], a: ObjId) -> Matrix<K> {
        let (off, rows, cols) = self.layout[a];
        Matrix::new(rows, cols, flat[off..off + rows * cols].to_vec())
    }

    /// Flattens per-object component matrices.
    pub fn flatten(&self, components: &[Matrix<K>]) -> Vec<K> {
        let mut out = vec![K::zero(); self.ambient_dim()];
        for (a, m) in components.iter().enumerate() {
            let (off, rows, cols) = self.layout[a];
            for r in 0..rows {
                for c in 0..cols {
                    out[off + r * cols + c] = m.get(r, c).clone();
                }
            }
        }
        out
    }
}

fn layout<K: Scalar>(sieve: &Sieve<K>, presheaf: &Presheaf<K>) -> Vec<(usize, usize, usize)> {
    let mut off = 0;
    (0..presheaf.num_objects())
        .map(|a| {
            let (rows, cols) = (presheaf.value_dim(a), sieve.component(a).dim());
            let entry = (off, rows, cols);
            off += rows * cols;
            entry
        })
        .collect()
}

/// Solves the naturality equations for families `R(a) -> F(a)`.
///
/// For a basis element `r` of `R(b)` and a basis morphism `f: a -> b`,
/// `phi_a(r . f) = F(f) phi_b(r)`.
pub fn hom_from_sieve<K: Scalar>(c: &LinCategory<K>, sieve: &Sieve<K>, presheaf: &Presheaf<K>) -> NatTransModule<K> {
    let n = c.num_objects();
    let t = sieve.target();
    let layout = layout(sieve, presheaf);
    let total: usize = layout.iter().map(|&(_, r, c)| r * c).sum();
    let mut rows: Vec<Vec<K>> = Vec::new();
    for b in 0..n {
        let (off_b, _, cols_b) = layout[b];
        for (j, r) in sieve.component(b).basis_vectors().iter().enumerate() {
            for a in 0..n {
                let (off_a, rows_a, cols_a) = layout[a];
                for f in 0..c.hom_dim(a, b) {
                    let rf = c.compose(a, b, t, r, &c.basis_vector(a, b, f));
                    let coef = sieve.component(a).coordinates(&rf).expect("sieve is closed");
                    let act = presheaf.action_basis(a, b, f);
                    for p in 0..rows_a {
                        let mut eq = vec![K::zero(); total];
                        for (k, ck) in coef.iter().enumerate() {
                            eq[off_a + p * cols_a + k] = ck.clone();
                        }
                        for q in 0..presheaf.value_dim(b) {
                            let idx = off_b + q * cols_b + j;
                            eq[idx] = eq[idx].clone() - act.get(p, q).clone();
                        }
                        if eq.iter().any(|e| !e.is_zero()) {
                            rows.push(eq);
                        }
                    }
                }
            }
        }
    }
    let solutions = if rows.is_empty() {
        Subspace::full(total)
    } else {
        Subspace::span(total, &nullspace(&Matrix::from_rows(total, &rows)))
    };
    NatTransModule { layout, solutions }
}

/// The map `F(A) -> Nat(R, F)`, `x |-> (r |-> F(r) x)`, as a matrix into the
/// flattened ambient space of [`hom_from_sieve`].
pub fn restriction_map<K: Scalar>(c: &LinCategory<K>, sieve: &Sieve<K>, presheaf: &Presheaf<K>) -> Matrix<K> {
    let t = sieve.target();
    let layout = layout(sieve, presheaf);
    let total: usize = layout.iter().map(|&(_, r, c)| r * c).sum();
    let acts: Vec<Vec<Matrix<K>>> = (0..c.num_objects())
        .map(|a| {
            sieve
                .component(a)
                .basis_vectors()
                .iter()
                .map(|r| presheaf.action(a, t, r))
                .collect()
        })
        .collect();
    let mut m = Matrix::zeros(total, presheaf.value_dim(t));
    for (a, &(off, rows, cols)) in layout.iter().enumerate() {
        for (k, act) in acts[a].iter().enumerate() {
            for p in 0..rows {
                for x in 0..presheaf.value_dim(t) {
                    m.set(off + p * cols + k, x, act.get(p, x).clone());
                }
            }
        }
    }
    m
}

/// Why the restriction along a sieve fails to be bijective.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SheafFailure {
    /// Some nonzero section restricts to zero.
    NotInjective,
    /// Some natural family does not come from a section.
    NotSurjective,
}

impl fmt::Display for SheafFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheafFailure::NotInjective => write!(f, "restriction is not injective"),
            SheafFailure::NotSurjective => write!(f, "restriction is not surjective"),
        }
    }
}

/// Checks that restriction `F(A) -> Nat(R, F)` is bijective.
pub fn sheaf_condition<K: Scalar>(c: &LinCategory<K>, sieve: &Sieve<K>, presheaf: &Presheaf<K>) -> Option<SheafFailure> {
    let d = presheaf.value_dim(sieve.target());
    if restriction_map(c, sieve, presheaf).rank() < d {
        return Some(SheafFailure::NotInjective);
    }
    if hom_from_sieve(c, sieve, presheaf).dim() > d {
        return Some(SheafFailure::NotSurjective);
    }
    None
}

/// Outcome of a sheaf check, with the first failing cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafVerdict<K> {
    pub failure: Option<(ObjId, Sieve<K>, SheafFailure)>,
}

impl<K> SheafVerdict<K> {
    pub fn is_sheaf(&self) -> bool {
        self.failure.is_none()
    }
}

/// Checks the sheaf condition for every stored cover, in object order and
/// then sieve order.
pub fn is_sheaf<K: Scalar>(c: &LinCategory<K>, presheaf: &Presheaf<K>, covers: &CoverSystem<K>) -> SheafVerdict<K> {
    for a in 0..c.num_objects() {
        for r in covers.covers(a) {
            if let Some(why) = sheaf_condition(c, r, presheaf) {
                return SheafVerdict {
                    failure: Some((a, r.clone(), why)),
                };
            }
        }
    }
    SheafVerdict { failure: None }
}
