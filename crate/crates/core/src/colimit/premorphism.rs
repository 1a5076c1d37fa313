use super::{ArrowId, PseudoFunctor};
use crate::error::{Error, Result};
use crate::exactalg::{axpy, scale, Scalar};
use crate::lincat::ObjId;

/// An object `(x, A)` of the colimit: `x` is an object of the fiber over `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColimObject {
    pub index: usize,
    pub obj: ObjId,
}

impl ColimObject {
    pub fn new(index: usize, obj: ObjId) -> Self {
        ColimObject { index, obj }
    }
}

/// A triple `(u, f, v)_C: (x, A) -> (y, B)` with `u: A -> C`, `v: B -> C` and
/// `f: F(u) x -> F(v) y` in the fiber over `C`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Premorphism<K> {
    pub src: ColimObject,
    pub dst: ColimObject,
    pub u: ArrowId,
    pub v: ArrowId,
    pub f: Vec<K>,
}

impl<K: Scalar> PseudoFunctor<K> {
    pub fn apex(&self, p: &Premorphism<K>) -> usize {
        self.index().dst(p.u)
    }

    /// Checks the typing of a premorphism.
    pub fn check_premorphism(&self, p: &Premorphism<K>) -> Result<()> {
        let idx = self.index();
        let m = idx.num_arrows();
        let ok = p.u < m
            && p.v < m
            && idx.src(p.u) == p.src.index
            && idx.src(p.v) == p.dst.index
            && idx.dst(p.u) == idx.dst(p.v)
            && p.src.obj < self.fiber(p.src.index).num_objects()
            && p.dst.obj < self.fiber(p.dst.index).num_objects()
            && p.f.len()
                == self
                    .fiber(idx.dst(p.u))
                    .hom_dim(self.obj(p.u, p.src.obj), self.obj(p.v, p.dst.obj));
        if ok {
            Ok(())
        } else {
            Err(Error::Typing("premorphism legs or payload are mistyped".into()))
        }
    }

    /// `(id_A, id, id_A)_A` on `(x, A)`; the payload is the identity of
    /// `F(id_A) x`.
    pub fn identity_premorphism(&self, x: ColimObject) -> Premorphism<K> {
        let id = self.index().identity(x.index);
        let fx = self.obj(id, x.obj);
        Premorphism {
            src: x,
            dst: x,
            u: id,
            v: id,
            f: self.fiber(x.index).identity(fx).to_vec(),
        }
    }

    /// Moves a premorphism along `w: C -> C'`:
    /// `gamma(w, v)_y . F(w)(f) . gamma(w, u)_x^-1`.
    pub fn push(&self, p: &Premorphism<K>, w: ArrowId) -> Result<Premorphism<K>> {
        let idx = self.index();
        if idx.src(w) != self.apex(p) {
            return Err(Error::Typing(format!(
                "cannot push along `{}`: apex is `{}`",
                idx.arrow(w).name,
                idx.object_name(self.apex(p))
            )));
        }
        Ok(self.push_unchecked(p, w))
    }

    pub(crate) fn push_unchecked(&self, p: &Premorphism<K>, w: ArrowId) -> Premorphism<K> {
        let idx = self.index();
        let (x, y) = (p.src.obj, p.dst.obj);
        let (wu, wv) = (idx.compose(w, p.u), idx.compose(w, p.v));
        let (ux, vy) = (self.obj(p.u, x), self.obj(p.v, y));
        let (wux, wvy) = (self.obj(w, ux), self.obj(w, vy));
        let target = self.fiber(idx.dst(w));
        let moved = self.transit(w).apply(ux, vy, &p.f);
        let right = target.compose(wux, wvy, self.obj(wv, y), self.gamma(w, p.v, y), &moved);
        let f = target.compose(self.obj(wu, x), wux, self.obj(wv, y), &right, self.gamma_inv(w, p.u, x));
        Premorphism {
            src: p.src,
            dst: p.dst,
            u: wu,
            v: wv,
            f,
        }
    }

    /// Decides homotopy by searching every pair of arrows out of the two
    /// apexes into a common object.
    pub fn are_homotopic(&self, p: &Premorphism<K>, q: &Premorphism<K>) -> Result<bool> {
        if p.src != q.src || p.dst != q.dst {
            return Err(Error::Typing("premorphisms have different endpoints".into()));
        }
        Ok(self.homotopy_witness(p, q).is_some())
    }

    /// The first `(w1, w2)` in lexicographic order witnessing homotopy.
    pub fn homotopy_witness(&self, p: &Premorphism<K>, q: &Premorphism<K>) -> Option<(ArrowId, ArrowId)> {
        let idx = self.index();
        let (c1, c2) = (self.apex(p), self.apex(q));
        for w1 in idx.arrows_from(c1) {
            let (w1u, w1v) = (idx.compose(w1, p.u), idx.compose(w1, p.v));
            let mut pushed = None;
            for w2 in idx.arrows_between(c2, idx.dst(w1)) {
                if idx.compose(w2, q.u) != w1u || idx.compose(w2, q.v) != w1v {
                    continue;
                }
                let lhs = pushed.get_or_insert_with(|| self.push_unchecked(p, w1).f);
                if *lhs == self.push_unchecked(q, w2).f {
                    return Some((w1, w2));
                }
            }
        }
        None
    }

    /// `m2 . m1` for `m1: (x, A) -> (y, B)` and `m2: (y, B) -> (z, D)`.
    ///
    /// Both are pushed to a common apex along certified arrows `s1`, `s2` with
    /// `s1 v1 == s2 u2`, where the payloads compose in the fiber.
    pub fn compose(&self, m2: &Premorphism<K>, m1: &Premorphism<K>) -> Result<Premorphism<K>> {
        if m1.dst != m2.src {
            return Err(Error::Typing("composite endpoints do not match".into()));
        }
        let (s1, s2) = self.index().complete_square(m1.v, m2.u);
        let p1 = self.push_unchecked(m1, s1);
        let p2 = self.push_unchecked(m2, s2);
        let e = self.index().dst(s1);
        let fe = self.fiber(e);
        let (a, b, c) = (
            self.obj(p1.u, m1.src.obj),
            self.obj(p1.v, m1.dst.obj),
            self.obj(p2.v, m2.dst.obj),
        );
        Ok(Premorphism {
            src: m1.src,
            dst: m2.dst,
            u: p1.u,
            v: p2.v,
            f: fe.compose(a, b, c, &p2.f, &p1.f),
        })
    }

    /// A representative of `[m1] + lambda [m2]`.
    pub fn linear_combination(&self, m1: &Premorphism<K>, lambda: &K, m2: &Premorphism<K>) -> Result<Premorphism<K>> {
        if m1.src != m2.src || m1.dst != m2.dst {
            return Err(Error::Typing("summands have different endpoints".into()));
        }
        let (w1, w2) = self.index().complete_double_square((m1.u, m1.v), (m2.u, m2.v));
        let p1 = self.push_unchecked(m1, w1);
        let p2 = self.push_unchecked(m2, w2);
        Ok(Premorphism {
            f: axpy(&p1.f, lambda, &p2.f),
            ..p1
        })
    }

    pub fn scale_premorphism(&self, lambda: &K, m: &Premorphism<K>) -> Premorphism<K> {
        Premorphism {
            f: scale(lambda, &m.f),
            ..m.clone()
        }
    }

    /// Every premorphism `(x, A) -> (y, B)` with payload a basis element.
    pub fn basis_premorphisms(&self, x: ColimObject, y: ColimObject) -> Vec<Premorphism<K>> {
        let mut out = Vec::new();
        for (u, v) in self.cospans(x.index, y.index) {
            let c = self.index().dst(u);
            let d = self.fiber(c).hom_dim(self.obj(u, x.obj), self.obj(v, y.obj));
            for i in 0..d {
                out.push(Premorphism {
                    src: x,
                    dst: y,
                    u,
                    v,
                    f: crate::exactalg::unit_vector(d, i),
                });
            }
        }
        out
    }

    /// All cospans `A -> C <- B`, ordered by arrow ids.
    pub fn cospans(&self, a: usize, b: usize) -> Vec<(ArrowId, ArrowId)> {
        let idx = self.index();
        let mut out = Vec::new();
        for u in idx.arrows_from(a) {
            for v in idx.arrows_between(b, idx.dst(u)) {
                out.push((u, v));
            }
        }
        out
    }

    /// Every object `(x, A)` of the colimit, index-major.
    pub fn colim_objects(&self) -> Vec<ColimObject> {
        (0..self.index().num_objects())
            .flat_map(|a| (0..self.fiber(a).num_objects()).map(move |x| ColimObject::new(a, x)))
            .collect()
    }
}
