use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Bounds, Error, Result};
use crate::exactalg::{projective_points, Scalar, Subspace};
use crate::lincat::{LinCategory, Morphism, ObjId};

/// A subfunctor of the representable `hom(-, target)`, stored as one
/// subspace of `hom(a, target)` per object `a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve<K> {
    target: ObjId,
    components: Vec<Subspace<K>>,
}

impl<K: fmt::Debug> fmt::Debug for Sieve<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sieve(on #{}, {:?})", self.target, self.components)
    }
}

impl<K: Scalar> Sieve<K> {
    /// Checks dimensions and closure under precomposition.
    pub fn new(c: &LinCategory<K>, target: ObjId, components: Vec<Subspace<K>>) -> Result<Self> {
        if target >= c.num_objects() {
            return Err(Error::UnknownObject(format!("#{target}")));
        }
        if components.len() != c.num_objects() {
            return Err(Error::DimensionMismatch(format!(
                "sieve has {} components for {} objects",
                components.len(),
                c.num_objects()
            )));
        }
        for (a, s) in components.iter().enumerate() {
            if s.ambient_dim() != c.hom_dim(a, target) {
                return Err(Error::DimensionMismatch(format!(
                    "component at `{}` lives in dimension {} but hom has dimension {}",
                    c.object_name(a),
                    s.ambient_dim(),
                    c.hom_dim(a, target)
                )));
            }
        }
        let sieve = Sieve { target, components };
        if let Some((a, r, (b, h))) = sieve.closure_failure(c) {
            return Err(Error::invalid(
                "sieve",
                format!(
                    "not closed: element {:?} at `{}` composed with `{}` leaves the sieve",
                    r,
                    c.object_name(a),
                    c.hom_basis(b, a)[h]
                ),
            ));
        }
        Ok(sieve)
    }

    fn closure_failure(&self, c: &LinCategory<K>) -> Option<(ObjId, Vec<K>, (ObjId, usize))> {
        let n = c.num_objects();
        for a in 0..n {
            for r in self.components[a].basis_vectors() {
                for b in 0..n {
                    for h in 0..c.hom_dim(b, a) {
                        let rh = c.compose(b, a, self.target, &r, &c.basis_vector(b, a, h));
                        if !self.components[b].contains(&rh) {
                            return Some((a, r, (b, h)));
                        }
                    }
                }
            }
        }
        None
    }

    /// Whether the stored components are closed under precomposition.
    pub fn is_closed(&self, c: &LinCategory<K>) -> bool {
        self.closure_failure(c).is_none()
    }

    pub fn maximal(c: &LinCategory<K>, target: ObjId) -> Self {
        Sieve {
            target,
            components: (0..c.num_objects()).map(|a| Subspace::full(c.hom_dim(a, target))).collect(),
        }
    }

    pub fn zero(c: &LinCategory<K>, target: ObjId) -> Self {
        Sieve {
            target,
            components: (0..c.num_objects()).map(|a| Subspace::zero(c.hom_dim(a, target))).collect(),
        }
    }

    /// The least sieve on `target` containing `family`.
    pub fn generated(c: &LinCategory<K>, target: ObjId, family: &[Morphism<K>]) -> Result<Self> {
        let n = c.num_objects();
        let mut gens: Vec<Vec<Vec<K>>> = vec![Vec::new(); n];
        for m in family {
            if m.dst != target {
                return Err(Error::Typing(format!(
                    "generator ends at `{}`, not at `{}`",
                    c.object_name(m.dst),
                    c.object_name(target)
                )));
            }
            if m.coords.len() != c.hom_dim(m.src, target) {
                return Err(Error::DimensionMismatch(format!(
                    "generator into `{}` has {} coordinates",
                    c.object_name(target),
                    m.coords.len()
                )));
            }
            gens[m.src].push(m.coords.clone());
        }
        let components = (0..n)
            .map(|a| Subspace::span(c.hom_dim(a, target), &gens[a]))
            .collect();
        Ok(Self::saturate(c, target, components))
    }

    /// Closes the components under precomposition by basis morphisms.
    pub(crate) fn saturate(c: &LinCategory<K>, target: ObjId, mut components: Vec<Subspace<K>>) -> Self {
        let n = c.num_objects();
        loop {
            let mut grew = false;
            for a in 0..n {
                let rows = components[a].basis_vectors();
                for b in 0..n {
                    let mut extra = Vec::new();
                    for r in &rows {
                        for h in 0..c.hom_dim(b, a) {
                            let rh = c.compose(b, a, target, r, &c.basis_vector(b, a, h));
                            if !components[b].contains(&rh) {
                                extra.push(rh);
                            }
                        }
                    }
                    if !extra.is_empty() {
                        let d = components[b].ambient_dim();
                        components[b] = components[b].sum(&Subspace::span(d, &extra));
                        grew = true;
                    }
                }
            }
            if !grew {
                return Sieve { target, components };
            }
        }
    }

    pub fn target(&self) -> ObjId {
        self.target
    }

    pub fn component(&self, a: ObjId) -> &Subspace<K> {
        &self.components[a]
    }

    pub fn components(&self) -> &[Subspace<K>] {
        &self.components
    }

    pub fn total_dim(&self) -> usize {
        self.components.iter().map(Subspace::dim).sum()
    }

    pub fn is_maximal(&self) -> bool {
        self.components.iter().all(Subspace::is_full)
    }

    pub fn contains(&self, m: &Morphism<K>) -> bool {
        m.dst == self.target && self.components[m.src].contains(&m.coords)
    }

    pub fn is_subsieve_of(&self, other: &Sieve<K>) -> bool {
        self.target == other.target
            && self.components.iter().zip(&other.components).all(|(a, b)| a.is_subspace_of(b))
    }

    pub fn intersection(&self, other: &Sieve<K>) -> Sieve<K> {
        assert_eq!(self.target, other.target);
        Sieve {
            target: self.target,
            components: self.components.iter().zip(&other.components).map(|(a, b)| a.intersection(b)).collect(),
        }
    }

    /// Basis elements of every component, as morphisms into the target.
    pub fn spanning_morphisms(&self) -> Vec<Morphism<K>> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.basis_vectors().into_iter().map(move |v| Morphism::new(a, self.target, v)))
            .collect()
    }

    /// `g^-1 R` for `g: A' -> A`: at `A''` the preimage of `R(A'')` under
    /// `g . -`.
    pub fn pullback(&self, c: &LinCategory<K>, g: &Morphism<K>) -> Result<Sieve<K>> {
        if g.dst != self.target {
            return Err(Error::Typing(format!(
                "cannot pull a sieve on `{}` back along a morphism into `{}`",
                c.object_name(self.target),
                c.object_name(g.dst)
            )));
        }
        let components = (0..c.num_objects())
            .map(|b| self.components[b].preimage(&c.post_composition(b, g.src, g.dst, &g.coords)))
            .collect();
        Ok(Sieve {
            target: g.src,
            components,
        })
    }
}

/// Every sieve on `a` (finite fields only), sorted.
///
/// Sieves are submodules of the representable, so each arises from the zero
/// sieve by repeatedly adjoining a single homogeneous element and
/// saturating.
pub fn enumerate_sieves<K: Scalar>(c: &LinCategory<K>, a: ObjId, bounds: &Bounds) -> Result<Vec<Sieve<K>>> {
    if K::order().is_none() {
        return Err(Error::FieldNotFinite(K::field_name()));
    }
    let mut points: Vec<(ObjId, Vec<K>)> = Vec::new();
    for b in 0..c.num_objects() {
        for v in projective_points::<K>(c.hom_dim(b, a), bounds)? {
            points.push((b, v));
        }
    }
    let zero = Sieve::zero(c, a);
    let mut seen: BTreeSet<Sieve<K>> = BTreeSet::new();
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(s) = frontier.pop() {
        for (b, v) in &points {
            if s.components[*b].contains(v) {
                continue;
            }
            let mut comps = s.components.clone();
            comps[*b] = comps[*b].sum(&Subspace::span(v.len(), std::slice::from_ref(v)));
            let t = Sieve::saturate(c, a, comps);
            if !seen.contains(&t) {
                if seen.len() >= bounds.max_sieves {
                    return Err(Error::bound(
                        format!("sieves on `{}`", c.object_name(a)),
                        seen.len() as u128 + 1,
                        bounds.max_sieves as u128,
                    ));
                }
                seen.insert(t.clone());
                frontier.push(t);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// The sieve lattices of every object.
pub fn sieve_lattice<K: Scalar>(c: &LinCategory<K>, bounds: &Bounds) -> Result<Vec<Vec<Sieve<K>>>> {
    (0..c.num_objects()).map(|a| enumerate_sieves(c, a, bounds)).collect()
}
