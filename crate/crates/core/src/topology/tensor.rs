use std::fmt;

use super::cover::{generate_topology, CoverSystem, Topology};
use super::lc::{check_lc, LCReport};
use crate::error::{Bounds, Error, Result};
use crate::exactalg::{kron_vec, unit_vector, Scalar, Subspace};
use crate::lincat::{tensor_category, tensor_functor, tensor_object, LinCategory, LinFunctor, ObjId};
use crate::sieves::{is_sheaf, Presheaf, SheafFailure, Sieve};

/// A linear category with a certified topology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Site<K> {
    pub category: LinCategory<K>,
    pub topology: Topology<K>,
}

impl<K: Scalar> Site<K> {
    pub fn new(category: LinCategory<K>, topology: Topology<K>) -> Result<Self> {
        if topology.num_objects() != category.num_objects() {
            return Err(Error::DimensionMismatch(format!(
                "topology on {} objects, category has {}",
                topology.num_objects(),
                category.num_objects()
            )));
        }
        for s in topology.iter() {
            Sieve::new(&category, s.target(), s.components().to_vec())?;
        }
        Ok(Site { category, topology })
    }

    pub fn minimal(category: LinCategory<K>) -> Self {
        let topology = Topology::minimal(&category);
        Site { category, topology }
    }
}

/// `R ⊗ hom(-, B)` on `(A, B)` for a sieve `R` on `A`, or `hom(-, A) ⊗ S` on
/// `(A, B)` for a sieve `S` on `B`.
fn tensor_sieve<K: Scalar>(
    a: &LinCategory<K>,
    b: &LinCategory<K>,
    ab: &LinCategory<K>,
    left: &Sieve<K>,
    right: &Sieve<K>,
) -> Sieve<K> {
    let nb = b.num_objects();
    let comps = (0..ab.num_objects())
        .map(|o| {
            let (x, y) = (o / nb, o % nb);
            let vs: Vec<Vec<K>> = left
                .component(x)
                .basis_vectors()
                .iter()
                .flat_map(|l| right.component(y).basis_vectors().into_iter().map(move |r| kron_vec(l, &r)))
                .collect();
            Subspace::span(a.hom_dim(x, left.target()) * b.hom_dim(y, right.target()), &vs)
        })
        .collect();
    Sieve::new(ab, tensor_object(nb, left.target(), right.target()), comps).expect("tensor of sieves is a sieve")
}

/// The generating covers of the tensor topology: `R ⊗ hom(-, B)` and
/// `hom(-, A) ⊗ S` for covers `R`, `S` of the factors.
pub fn tensor_cover_system<K: Scalar>(s1: &Site<K>, s2: &Site<K>, ab: &LinCategory<K>) -> CoverSystem<K> {
    let (a, b) = (&s1.category, &s2.category);
    let mut out = CoverSystem::empty(ab);
    for x in 0..a.num_objects() {
        for y in 0..b.num_objects() {
            let (max_a, max_b) = (Sieve::maximal(a, x), Sieve::maximal(b, y));
            for r in s1.topology.covers(x) {
                out.insert(tensor_sieve(a, b, ab, r, &max_b));
            }
            for s in s2.topology.covers(y) {
                out.insert(tensor_sieve(a, b, ab, &max_a, s));
            }
        }
    }
    out
}

/// `a ⊗ b` with the topology generated by the tensored covers of the
/// factors (finite fields only).
pub fn tensor_site<K: Scalar>(s1: &Site<K>, s2: &Site<K>, bounds: &Bounds) -> Result<Site<K>> {
    let ab = tensor_category(&s1.category, &s2.category);
    let gens = tensor_cover_system(s1, s2, &ab);
    let topology = generate_topology(&ab, &gens, bounds)?;
    Ok(Site { category: ab, topology })
}

/// `A ⊗ -: b -> a ⊗ b`.
pub fn left_slice_functor<K: Scalar>(a: &LinCategory<K>, b: &LinCategory<K>, ab: &LinCategory<K>, x: ObjId) -> LinFunctor<K> {
    let nb = b.num_objects();
    let obj_map = (0..nb).map(|y| tensor_object(nb, x, y)).collect();
    LinFunctor::from_basis_images(b, ab, obj_map, |y1, y2, i| {
        kron_vec(a.identity(x), &unit_vector(b.hom_dim(y1, y2), i))
    })
}

/// `- ⊗ B: a -> a ⊗ b`.
pub fn right_slice_functor<K: Scalar>(a: &LinCategory<K>, b: &LinCategory<K>, ab: &LinCategory<K>, y: ObjId) -> LinFunctor<K> {
    let nb = b.num_objects();
    let obj_map = (0..a.num_objects()).map(|x| tensor_object(nb, x, y)).collect();
    LinFunctor::from_basis_images(a, ab, obj_map, |x1, x2, i| {
        kron_vec(&unit_vector(a.hom_dim(x1, x2), i), b.identity(y))
    })
}

/// Which partial presheaf failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slice {
    /// `F(A, -)` on the second factor.
    Left(ObjId),
    /// `F(-, B)` on the first factor.
    Right(ObjId),
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slice::Left(x) => write!(f, "F(#{x}, -)"),
            Slice::Right(y) => write!(f, "F(-, #{y})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BimoduleVerdict<K> {
    pub failure: Option<(Slice, ObjId, Sieve<K>, SheafFailure)>,
}

impl<K> BimoduleVerdict<K> {
    pub fn is_sheaf(&self) -> bool {
        self.failure.is_none()
    }
}

/// Whether every `F(A, -)` is a sheaf on the second site and every
/// `F(-, B)` a sheaf on the first.
pub fn is_bimodule_sheaf<K: Scalar>(presheaf: &Presheaf<K>, s1: &Site<K>, s2: &Site<K>) -> Result<BimoduleVerdict<K>> {
    let (a, b) = (&s1.category, &s2.category);
    let ab = tensor_category(a, b);
    if presheaf.num_objects() != ab.num_objects() {
        return Err(Error::DimensionMismatch(format!(
            "presheaf on {} objects is not on a tensor category of {} x {} objects",
            presheaf.num_objects(),
            a.num_objects(),
            b.num_objects()
        )));
    }
    for x in 0..a.num_objects() {
        let slice = presheaf.restrict(&left_slice_functor(a, b, &ab, x), b);
        if let Some((o, r, why)) = is_sheaf(b, &slice, &s2.topology).failure {
            return Ok(BimoduleVerdict {
                failure: Some((Slice::Left(x), o, r, why)),
            });
        }
    }
    for y in 0..b.num_objects() {
        let slice = presheaf.restrict(&right_slice_functor(a, b, &ab, y), a);
        if let Some((o, r, why)) = is_sheaf(a, &slice, &s1.topology).failure {
            return Ok(BimoduleVerdict {
                failure: Some((Slice::Right(y), o, r, why)),
            });
        }
    }
    Ok(BimoduleVerdict { failure: None })
}

/// Runs the LC check on `f ⊗ g` between tensor sites, after confirming that
/// `f` and `g` are LC. A failing factor is a precondition error.
pub fn check_tensor_lc<K: Scalar>(
    f: &LinFunctor<K>,
    f_sites: (&Site<K>, &Site<K>),
    g: &LinFunctor<K>,
    g_sites: (&Site<K>, &Site<K>),
    bounds: &Bounds,
) -> Result<LCReport> {
    for (name, h, (s, t)) in [("f", f, f_sites), ("g", g, g_sites)] {
        let r = check_lc(h, &s.category, &s.topology, &t.category, &t.topology, bounds)?;
        if let Some((clause, c)) = r.first_failure() {
            return Err(Error::Precondition(format!("{name} is not LC: ({clause}) {c}")));
        }
    }
    let src = tensor_site(f_sites.0, g_sites.0, bounds)?;
    let dst = tensor_site(f_sites.1, g_sites.1, bounds)?;
    let fg = tensor_functor(f, g, g_sites.1.category.num_objects());
    check_lc(&fg, &src.category, &src.topology, &dst.category, &dst.topology, bounds)
}
