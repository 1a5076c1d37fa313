use super::{LinCategory, ObjId};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Scalar};

/// A k-linear functor given by an object map and one matrix per ordered pair
/// of source objects.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinFunctor<K> {
    obj_map: Vec<ObjId>,
    // indexed a * n + b, maps hom(a, b) -> hom(F a, F b)
    hom_maps: Vec<Matrix<K>>,
}

impl<K: Scalar> LinFunctor<K> {
    pub fn new(obj_map: Vec<ObjId>, hom_maps: Vec<Matrix<K>>) -> Result<Self> {
        let n = obj_map.len();
        if hom_maps.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "functor on {n} objects needs {} hom maps, got {}",
                n * n,
                hom_maps.len()
            )));
        }
        Ok(LinFunctor { obj_map, hom_maps })
    }

    /// Builds the hom maps from a callback that images one basis element.
    pub fn from_basis_images(
        src: &LinCategory<K>,
        dst: &LinCategory<K>,
        obj_map: Vec<ObjId>,
        image: impl Fn(ObjId, ObjId, usize) -> Vec<K>,
    ) -> Self {
        let n = src.num_objects();
        let mut hom_maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let cols: Vec<Vec<K>> = (0..src.hom_dim(a, b)).map(|i| image(a, b, i)).collect();
                hom_maps.push(Matrix::from_cols(dst.hom_dim(obj_map[a], obj_map[b]), &cols));
            }
        }
        LinFunctor { obj_map, hom_maps }
    }

    pub fn identity(c: &LinCategory<K>) -> Self {
        let n = c.num_objects();
        let hom_maps = (0..n * n)
            .map(|ab| Matrix::identity(c.hom_dim(ab / n, ab % n)))
            .collect();
        LinFunctor {
            obj_map: (0..n).collect(),
            hom_maps,
        }
    }

    pub fn num_objects(&self) -> usize {
        self.obj_map.len()
    }

    pub fn obj(&self, a: ObjId) -> ObjId {
        self.obj_map[a]
    }

    pub fn obj_map(&self) -> &[ObjId] {
        &self.obj_map
    }

    pub fn hom_map(&self, a: ObjId, b: ObjId) -> &Matrix<K> {
        &self.hom_maps[a * self.num_objects() + b]
    }

    pub fn apply(&self, a: ObjId, b: ObjId, f: &[K]) -> Vec<K> {
        self.hom_map(a, b).mul_vec(f)
    }

    /// `self . first`, i.e. apply `first` and then `self`.
    pub fn after(&self, first: &LinFunctor<K>) -> LinFunctor<K> {
        let n = first.num_objects();
        let mut hom_maps = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                hom_maps.push(self.hom_map(first.obj(a), first.obj(b)).mul(first.hom_map(a, b)));
            }
        }
        LinFunctor {
            obj_map: first.obj_map.iter().map(|&x| self.obj(x)).collect(),
            hom_maps,
        }
    }

    /// Whether the functor is injective on objects and every hom map is
    /// invertible.
    pub fn is_isomorphism(&self, dst: &LinCategory<K>) -> bool {
        let n = self.num_objects();
        if n != dst.num_objects() {
            return false;
        }
        let mut seen = vec![false; n];
        for &x in &self.obj_map {
            if std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        self.hom_maps
            .iter()
            .all(|m| m.rows() == m.cols() && m.rank() == m.cols())
    }

    pub fn is_faithful(&self) -> bool {
        self.hom_maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_full(&self) -> bool {
        self.hom_maps.iter().all(|m| m.rank() == m.rows())
    }
}
