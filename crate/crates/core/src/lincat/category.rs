use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactalg::{is_zero_vec, unit_vector, Matrix, Scalar};

pub type ObjId = usize;

/// A morphism given by coordinates in the chosen basis of `hom(src, dst)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Morphism<K> {
    pub src: ObjId,
    pub dst: ObjId,
    pub coords: Vec<K>,
}

impl<K: Scalar> Morphism<K> {
    pub fn new(src: ObjId, dst: ObjId, coords: Vec<K>) -> Self {
        Morphism { src, dst, coords }
    }
}

/// A finite k-linear category presented by hom bases and composition
/// structure constants.
///
/// `hom(a, b)` is the free module on `hom_basis(a, b)`. For `g: b -> c` and
/// `f: a -> b` basis elements, `comp(a, b, c)` stores the coordinates of
/// `g . f` in `hom(a, c)`.
#[derive(Clone, PartialEq, Eq)]
pub struct LinCategory<K> {
    objects: Vec<String>,
    index: HashMap<String, ObjId>,
    hom_basis: Vec<Vec<String>>,
    comp: Vec<Vec<K>>,
    identities: Vec<Vec<K>>,
}

impl<K> fmt::Debug for LinCategory<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.objects.len();
        let dims: Vec<Vec<usize>> = (0..n)
            .map(|a| (0..n).map(|b| self.hom_basis[a * n + b].len()).collect())
            .collect();
        f.debug_struct("LinCategory")
            .field("objects", &self.objects)
            .field("hom_dims", &dims)
            .finish()
    }
}

impl<K: Scalar> LinCategory<K> {
    /// Assembles a category from raw tables.
    ///
    /// `hom_basis` is indexed by `a * n + b`. `compose` receives
    /// `(a, b, c, g, f)` for basis indices `g` of `hom(b, c)` and `f` of
    /// `hom(a, b)` and returns coordinates in `hom(a, c)`. The laws are not
    /// checked here; see [`validate_category`](super::validate_category).
    pub fn from_parts(
        objects: Vec<String>,
        hom_basis: Vec<Vec<String>>,
        identities: Vec<Vec<K>>,
        compose: impl Fn(ObjId, ObjId, ObjId, usize, usize) -> Vec<K>,
    ) -> Result<Self> {
        let n = objects.len();
        let mut index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if index.insert(o.clone(), i).is_some() {
                return Err(Error::invalid("category", format!("duplicate object `{o}`")));
            }
        }
        if hom_basis.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "expected {} hom spaces, got {}",
                n * n,
                hom_basis.len()
            )));
        }
        if identities.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "expected {n} identities, got {}",
                identities.len()
            )));
        }
        for (a, id) in identities.iter().enumerate() {
            if id.len() != hom_basis[a * n + a].len() {
                return Err(Error::DimensionMismatch(format!(
                    "identity of `{}` has length {} but hom has dimension {}",
                    objects[a],
                    id.len(),
                    hom_basis[a * n + a].len()
                )));
            }
        }
        let mut comp = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (dab, dbc, dac) = (
                        hom_basis[a * n + b].len(),
                        hom_basis[b * n + c].len(),
                        hom_basis[a * n + c].len(),
                    );
                    let mut table = Vec::with_capacity(dab * dbc * dac);
                    for g in 0..dbc {
                        for f in 0..dab {
                            let v = compose(a, b, c, g, f);
                            if v.len() != dac {
                                return Err(Error::DimensionMismatch(format!(
                                    "composite {} . {} has {} coordinates, expected {dac}",
                                    hom_basis[b * n + c][g],
                                    hom_basis[a * n + b][f],
                                    v.len()
                                )));
                            }
                            table.extend(v);
                        }
                    }
                    comp.push(table);
                }
            }
        }
        Ok(LinCategory {
            objects,
            index,
            hom_basis,
            comp,
            identities,
        })
    }

    pub fn empty() -> Self {
        LinCategory {
            objects: Vec::new(),
            index: HashMap::new(),
            hom_basis: Vec::new(),
            comp: Vec::new(),
            identities: Vec::new(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, a: ObjId) -> &str {
        &self.objects[a]
    }

    pub fn object_id(&self, name: &str) -> Result<ObjId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn hom_dim(&self, a: ObjId, b: ObjId) -> usize {
        self.hom_basis[a * self.num_objects() + b].len()
    }

    pub fn hom_basis(&self, a: ObjId, b: ObjId) -> &[String] {
        &self.hom_basis[a * self.num_objects() + b]
    }

    pub fn total_hom_dim(&self) -> usize {
        self.hom_basis.iter().map(Vec::len).sum()
    }

    pub fn identity(&self, a: ObjId) -> &[K] {
        &self.identities[a]
    }

    pub fn identity_morphism(&self, a: ObjId) -> Morphism<K> {
        Morphism::new(a, a, self.identities[a].clone())
    }

    pub fn zero(&self, a: ObjId, b: ObjId) -> Vec<K> {
        vec![K::zero(); self.hom_dim(a, b)]
    }

    pub fn basis_vector(&self, a: ObjId, b: ObjId, i: usize) -> Vec<K> {
        unit_vector(self.hom_dim(a, b), i)
    }

    /// Coordinates of `g . f` for basis elements `g: b -> c`, `f: a -> b`.
    pub fn compose_basis(&self, a: ObjId, b: ObjId, c: ObjId, g: usize, f: usize) -> &[K] {
        let n = self.num_objects();
        let (dab, dac) = (self.hom_dim(a, b), self.hom_dim(a, c));
        let start = (g * dab + f) * dac;
        &self.comp[(a * n + b) * n + c][start..start + dac]
    }

    /// `g . f` for `g: b -> c` and `f: a -> b` given in coordinates.
    pub fn compose(&self, a: ObjId, b: ObjId, c: ObjId, g: &[K], f: &[K]) -> Vec<K> {
        debug_assert_eq!(g.len(), self.hom_dim(b, c));
        debug_assert_eq!(f.len(), self.hom_dim(a, b));
        let mut out = self.zero(a, c);
        for (gi, gc) in g.iter().enumerate() {
            if gc.is_zero() {
                continue;
            }
            for (fi, fc) in f.iter().enumerate() {
                if fc.is_zero() {
                    continue;
                }
                let lambda = gc.clone() * fc.clone();
                for (o, t) in out.iter_mut().zip(self.compose_basis(a, b, c, gi, fi)) {
                    if !t.is_zero() {
                        *o = o.clone() + lambda.clone() * t.clone();
                    }
                }
            }
        }
        out
    }

    pub fn compose_morphisms(&self, g: &Morphism<K>, f: &Morphism<K>) -> Result<Morphism<K>> {
        if f.dst != g.src {
            return Err(Error::Typing(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.object_name(g.src),
                self.object_name(g.dst),
                self.object_name(f.src),
                self.object_name(f.dst)
            )));
        }
        Ok(Morphism::new(f.src, g.dst, self.compose(f.src, f.dst, g.dst, &g.coords, &f.coords)))
    }

    /// Matrix of `f |-> g . f` from `hom(a, b)` to `hom(a, c)`, for `g: b -> c`.
    pub fn post_composition(&self, a: ObjId, b: ObjId, c: ObjId, g: &[K]) -> Matrix<K> {
        let cols: Vec<Vec<K>> = (0..self.hom_dim(a, b))
            .map(|f| self.compose(a, b, c, g, &self.basis_vector(a, b, f)))
            .collect();
        Matrix::from_cols(self.hom_dim(a, c), &cols)
    }

    /// Matrix of `g |-> g . f` from `hom(b, c)` to `hom(a, c)`, for `f: a -> b`.
    pub fn pre_composition(&self, a: ObjId, b: ObjId, c: ObjId, f: &[K]) -> Matrix<K> {
        let cols: Vec<Vec<K>> = (0..self.hom_dim(b, c))
            .map(|g| self.compose(a, b, c, &self.basis_vector(b, c, g), f))
            .collect();
        Matrix::from_cols(self.hom_dim(a, c), &cols)
    }

    /// Two-sided inverse of `m: a -> b`, if one exists.
    pub fn inverse(&self, a: ObjId, b: ObjId, m: &[K]) -> Option<Vec<K>> {
        // solve m . x = id_b for x: b -> a, then confirm x . m = id_a
        let post = self.post_composition(b, a, b, m);
        let sol = crate::exactalg::solve(&post, self.identity(b)).ok()?;
        let x = sol.particular;
        let back = self.compose(a, b, a, &x, m);
        (back == self.identity(a)).then_some(x)
    }

    pub fn is_isomorphism(&self, a: ObjId, b: ObjId, m: &[K]) -> bool {
        self.inverse(a, b, m).is_some()
    }

    /// Some isomorphism `a -> b`, searched exhaustively over finite fields.
    ///
    /// Over an infinite field only the identity and the basis elements are
    /// tried, and a negative answer is reported as an error rather than a
    /// proof of non-isomorphism.
    pub fn find_isomorphism(&self, a: ObjId, b: ObjId, bounds: &crate::Bounds) -> Result<Option<Vec<K>>> {
        if a == b {
            return Ok(Some(self.identity(a).to_vec()));
        }
        let d = self.hom_dim(a, b);
        // composing with an isomorphism a -> b identifies hom(a, a), hom(a, b)
        // and hom(b, b)
        if d != self.hom_dim(a, a) || d != self.hom_dim(b, b) {
            return Ok(None);
        }
        if K::order().is_none() {
            for i in 0..d {
                let e = self.basis_vector(a, b, i);
                if self.is_isomorphism(a, b, &e) {
                    return Ok(Some(e));
                }
            }
            return Err(Error::FieldNotFinite(K::field_name()));
        }
        for v in crate::exactalg::all_vectors::<K>(d, bounds)? {
            if self.is_isomorphism(a, b, &v) {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    pub fn is_zero_morphism(v: &[K]) -> bool {
        is_zero_vec(v)
    }

    /// All morphisms out of or into `a`, as `(other, basis index)` pairs, in
    /// lexicographic order.
    pub fn basis_morphisms_into(&self, a: ObjId) -> Vec<(ObjId, usize)> {
        (0..self.num_objects())
            .flat_map(|s| (0..self.hom_dim(s, a)).map(move |i| (s, i)))
            .collect()
    }
}
