use std::sync::Arc;

use super::{ArrowId, ColimObject, Premorphism, PseudoFunctor};
use crate::error::{Error, Result};
use crate::exactalg::{invert, unit_vector, Matrix, Scalar, Subspace};
use crate::lincat::{validate_category, LinCategory, ObjId};

/// The hom module `hom((x, A), (y, B))` of the colimit as the quotient `V / W`
/// of the direct sum over all cospans by the push relations.
#[derive(Clone, Debug)]
pub struct HomQuotient<K> {
    pub cospans: Vec<(ArrowId, ArrowId)>,
    offsets: Vec<usize>,
    dims: Vec<usize>,
    relations: Subspace<K>,
    /// Cospan whose component surjects onto the quotient.
    pub dominant: usize,
    /// Basis positions inside the dominant component chosen as the quotient
    /// basis.
    pub chosen: Vec<usize>,
    // first rows of the inverse of [chosen | relation basis]
    coords: Matrix<K>,
}

impl<K: Scalar> HomQuotient<K> {
    pub fn dim(&self) -> usize {
        self.chosen.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.relations.ambient_dim()
    }

    pub fn relations(&self) -> &Subspace<K> {
        &self.relations
    }

    fn slot(&self, u: ArrowId, v: ArrowId) -> Option<usize> {
        self.cospans.iter().position(|&c| c == (u, v))
    }

    /// The image of a premorphism in `V`.
    pub fn embed(&self, p: &Premorphism<K>) -> Vec<K> {
        let s = self.slot(p.u, p.v).expect("cospan of the premorphism is listed");
        let mut out = vec![K::zero(); self.ambient_dim()];
        out[self.offsets[s]..self.offsets[s] + self.dims[s]].clone_from_slice(&p.f);
        out
    }

    /// Quotient coordinates of a vector of `V`.
    pub fn coordinates_of(&self, v: &[K]) -> Vec<K> {
        self.coords.mul_vec(v)
    }
}

/// The materialized colimit category, with each object tagged by its
/// `(index object, fiber object)` pair.
#[derive(Clone, Debug)]
pub struct ColimCategory<K> {
    pf: Arc<PseudoFunctor<K>>,
    category: LinCategory<K>,
    objects: Vec<ColimObject>,
    homs: Vec<HomQuotient<K>>,
}

/// A morphism of the colimit in quotient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomotopyClass<K> {
    pub src: ObjId,
    pub dst: ObjId,
    pub coords: Vec<K>,
}

impl<K: Scalar> ColimCategory<K> {
    /// Builds `L(F)` with every hom computed as a quotient module, then
    /// checks the category laws of the result.
    pub fn build(pf: Arc<PseudoFunctor<K>>) -> Result<Self> {
        let objects = pf.colim_objects();
        let n = objects.len();
        let mut homs = Vec::with_capacity(n * n);
        for &x in &objects {
            for &y in &objects {
                homs.push(hom_quotient(&pf, x, y));
            }
        }
        let names = objects
            .iter()
            .map(|o| object_name(&pf, *o))
            .collect::<Vec<_>>();
        let bases = (0..n * n)
            .map(|xy| {
                let h = &homs[xy];
                let (u, v) = h.cospans[h.dominant];
                let (x, y) = (objects[xy / n], objects[xy % n]);
                let idx = pf.index();
                let c = idx.dst(u);
                let fb = pf.fiber(c).hom_basis(pf.obj(u, x.obj), pf.obj(v, y.obj));
                h.chosen
                    .iter()
                    .map(|&i| format!("[{},{},{}]", idx.arrow(u).name, fb[i], idx.arrow(v).name))
                    .collect()
            })
            .collect();
        let mut proto = ColimCategory {
            pf: pf.clone(),
            category: LinCategory::empty(),
            objects: objects.clone(),
            homs,
        };
        let ids = objects
            .iter()
            .map(|&x| proto.class_of(&pf.identity_premorphism(x)).coords)
            .collect::<Vec<_>>();
        let cat = LinCategory::from_parts(names, bases, ids, |a, b, c, g, f| {
            let pf_ = proto.representative_basis(a, b, f);
            let pg = proto.representative_basis(b, c, g);
            let comp = pf.compose(&pg, &pf_).expect("endpoints match");
            proto.class_of(&comp).coords
        })?;
        validate_category(&cat).map_err(|v| Error::invalid("colimit", v.to_string()))?;
        proto.category = cat;
        Ok(proto)
    }

    pub fn pseudofunctor(&self) -> &PseudoFunctor<K> {
        &self.pf
    }

    pub fn pseudofunctor_arc(&self) -> &Arc<PseudoFunctor<K>> {
        &self.pf
    }

    pub fn category(&self) -> &LinCategory<K> {
        &self.category
    }

    pub fn colim_objects(&self) -> &[ColimObject] {
        &self.objects
    }

    pub fn tag(&self, o: ObjId) -> ColimObject {
        self.objects[o]
    }

    pub fn object_of(&self, x: ColimObject) -> ObjId {
        self.objects.iter().position(|&o| o == x).expect("object of the colimit")
    }

    pub fn hom_quotient(&self, a: ObjId, b: ObjId) -> &HomQuotient<K> {
        &self.homs[a * self.objects.len() + b]
    }

    /// The class of a premorphism, in coordinates of the chosen quotient basis.
    pub fn class_of(&self, p: &Premorphism<K>) -> HomotopyClass<K> {
        let (a, b) = (self.object_of(p.src), self.object_of(p.dst));
        let h = self.hom_quotient(a, b);
        HomotopyClass {
            src: a,
            dst: b,
            coords: h.coordinates_of(&h.embed(p)),
        }
    }

    /// The canonical representative: supported on the dominant cospan.
    pub fn representative(&self, c: &HomotopyClass<K>) -> Premorphism<K> {
        let h = self.hom_quotient(c.src, c.dst);
        let (u, v) = h.cospans[h.dominant];
        let d = h.dims[h.dominant];
        let mut f = vec![K::zero(); d];
        for (coef, &i) in c.coords.iter().zip(&h.chosen) {
            f[i] = f[i].clone() + coef.clone();
        }
        Premorphism {
            src: self.objects[c.src],
            dst: self.objects[c.dst],
            u,
            v,
            f,
        }
    }

    fn representative_basis(&self, a: ObjId, b: ObjId, i: usize) -> Premorphism<K> {
        let d = self.hom_quotient(a, b).dim();
        self.representative(&HomotopyClass {
            src: a,
            dst: b,
            coords: unit_vector(d, i),
        })
    }

    /// Whether two premorphisms have the same image in the quotient.
    pub fn same_class(&self, p: &Premorphism<K>, q: &Premorphism<K>) -> bool {
        let (a, b) = (self.object_of(p.src), self.object_of(p.dst));
        let h = self.hom_quotient(a, b);
        let mut diff = h.embed(p);
        for (d, e) in diff.iter_mut().zip(h.embed(q)) {
            *d = d.clone() - e;
        }
        h.relations.contains(&diff)
    }
}

pub(crate) fn object_name<K: Scalar>(pf: &PseudoFunctor<K>, x: ColimObject) -> String {
    format!(
        "({},{})",
        pf.fiber(x.index).object_name(x.obj),
        pf.index().object_name(x.index)
    )
}

fn hom_quotient<K: Scalar>(pf: &PseudoFunctor<K>, x: ColimObject, y: ColimObject) -> HomQuotient<K> {
    let idx = pf.index();
    let cospans = pf.cospans(x.index, y.index);
    let dims: Vec<usize> = cospans
        .iter()
        .map(|&(u, v)| pf.fiber(idx.dst(u)).hom_dim(pf.obj(u, x.obj), pf.obj(v, y.obj)))
        .collect();
    let mut offsets = Vec::with_capacity(dims.len());
    let mut total = 0;
    for d in &dims {
        offsets.push(total);
        total += d;
    }
    let proto = HomQuotient {
        cospans: cospans.clone(),
        offsets: offsets.clone(),
        dims: dims.clone(),
        relations: Subspace::zero(total),
        dominant: 0,
        chosen: Vec::new(),
        coords: Matrix::zeros(0, total),
    };
    let mut rels = Vec::new();
    for (s, &(u, v)) in cospans.iter().enumerate() {
        for i in 0..dims[s] {
            let p = Premorphism {
                src: x,
                dst: y,
                u,
                v,
                f: unit_vector(dims[s], i),
            };
            let e = proto.embed(&p);
            for w in idx.arrows_from(idx.dst(u)) {
                let q = proto.embed(&pf.push_unchecked(&p, w));
                let r: Vec<K> = e.iter().zip(&q).map(|(a, b)| a.clone() - b.clone()).collect();
                rels.push(r);
            }
        }
    }
    let relations = Subspace::span(total, &rels);
    let qdim = total - relations.dim();
    // first cospan whose component spans V / W, then a greedy basis in it
    for (s, &d) in dims.iter().enumerate() {
        let mut acc = relations.clone();
        let mut chosen = Vec::new();
        for i in 0..d {
            let mut e = vec![K::zero(); total];
            e[offsets[s] + i] = K::one();
            if !acc.contains(&e) {
                acc = acc.sum(&Subspace::span(total, &[e]));
                chosen.push(i);
            }
        }
        if chosen.len() == qdim {
            let mut cols: Vec<Vec<K>> = chosen
                .iter()
                .map(|&i| {
                    let mut e = vec![K::zero(); total];
                    e[offsets[s] + i] = K::one();
                    e
                })
                .collect();
            cols.extend(relations.basis_vectors());
            let inv = invert(&Matrix::from_cols(total, &cols)).expect("chosen basis completes the relations");
            let coords = Matrix::from_fn(qdim, total, |r, c| inv.get(r, c).clone());
            return HomQuotient {
                relations,
                dominant: s,
                chosen,
                coords,
                ..proto
            };
        }
    }
    // a filtered cospan diagram always has a weakly terminal component, and
    // when V / W is zero any component works
    unreachable!("no cospan component surjects onto the quotient")
}
