use super::{LinCategory, LinFunctor, ObjId};
use crate::exactalg::Scalar;

/// A natural transformation `F => G`, stored as one coordinate vector in
/// `hom(F a, G a)` per source object.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinNatTrans<K> {
    components: Vec<Vec<K>>,
}

impl<K: Scalar> LinNatTrans<K> {
    pub fn new(components: Vec<Vec<K>>) -> Self {
        LinNatTrans { components }
    }

    pub fn identity(f: &LinFunctor<K>, dst: &LinCategory<K>) -> Self {
        LinNatTrans {
            components: f.obj_map().iter().map(|&x| dst.identity(x).to_vec()).collect(),
        }
    }

    pub fn component(&self, a: ObjId) -> &[K] {
        &self.components[a]
    }

    pub fn components(&self) -> &[Vec<K>] {
        &self.components
    }

    /// Vertical composite `self . first` for `first: F => G`, `self: G => H`.
    pub fn vertical(
        &self,
        first: &LinNatTrans<K>,
        f: &LinFunctor<K>,
        g: &LinFunctor<K>,
        h: &LinFunctor<K>,
        dst: &LinCategory<K>,
    ) -> Self {
        let components = (0..f.num_objects())
            .map(|a| dst.compose(f.obj(a), g.obj(a), h.obj(a), &self.components[a], &first.components[a]))
            .collect();
        LinNatTrans { components }
    }

    /// `H eta` for a functor `H` applied after the target of `eta: F => G`.
    pub fn whisker_left(&self, h: &LinFunctor<K>, f: &LinFunctor<K>, g: &LinFunctor<K>) -> Self {
        let components = (0..f.num_objects())
            .map(|a| h.apply(f.obj(a), g.obj(a), &self.components[a]))
            .collect();
        LinNatTrans { components }
    }

    /// `eta K` for a functor `K` applied before the source of `eta`.
    pub fn whisker_right(&self, k: &LinFunctor<K>) -> Self {
        LinNatTrans {
            components: k.obj_map().iter().map(|&x| self.components[x].clone()).collect(),
        }
    }

    /// Componentwise inverse `G => F`, if every component is invertible.
    pub fn inverse(&self, f: &LinFunctor<K>, g: &LinFunctor<K>, dst: &LinCategory<K>) -> Option<Self> {
        let components = (0..f.num_objects())
            .map(|a| dst.inverse(f.obj(a), g.obj(a), &self.components[a]))
            .collect::<Option<Vec<_>>>()?;
        Some(LinNatTrans { components })
    }
}
