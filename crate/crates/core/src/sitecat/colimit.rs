use std::sync::Arc;

use super::presentation::{AmbientCategory, PresentationDiagram, SitePresentation};
use crate::colimit::{
    ColimCategory, ColimObject, FilteredIndex, HomotopyClass, IndexArrow, IndexCategory, Premorphism, PseudoFunctor,
};
use crate::error::{Bounds, Error, Result};
use crate::exactalg::{axpy, Scalar};
use crate::lincat::{validate_functor, LinFunctor, ObjId};

/// `L(G_C)` restricted to a finite closed diagram of presentations, with the
/// comparison functor `psi` back to the ambient category.
#[derive(Clone, Debug)]
pub struct SiteColimit<K> {
    pub diagram: PresentationDiagram<K>,
    pub colimit: ColimCategory<K>,
    pub psi: LinFunctor<K>,
}

/// Verdicts on `psi: L(G_C) -> C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SiteColimitReport {
    pub presentations: usize,
    pub index_arrows: usize,
    pub colimit_objects: usize,
    pub well_defined: bool,
    pub functor_valid: bool,
    pub linear: bool,
    pub essentially_surjective: bool,
    pub full: bool,
    pub faithful: bool,
    pub witness: Option<String>,
}

impl SiteColimitReport {
    pub fn is_equivalence(&self) -> bool {
        self.well_defined && self.functor_valid && self.linear && self.essentially_surjective && self.full && self.faithful
    }
}

fn strict_pseudofunctor<K: Scalar>(d: &PresentationDiagram<K>) -> Result<PseudoFunctor<K>> {
    let objects: Vec<String> = d.presentations.iter().map(|p| p.name.clone()).collect();
    let arrows: Vec<IndexArrow> = d
        .arrows
        .iter()
        .enumerate()
        .map(|(i, (s, t, _))| IndexArrow {
            name: format!("j{i}:{s}->{t}"),
            src: *s,
            dst: *t,
        })
        .collect();
    let identities = (0..objects.len())
        .map(|i| {
            let id = LinFunctor::identity(&d.presentations[i].site.category);
            d.find_arrow(i, i, &id).expect("identities are added with their presentation")
        })
        .collect();
    let cat = IndexCategory::new(objects, arrows, identities, |g, f| {
        let ((fs, ft, fm), (gs, gt, gm)) = (&d.arrows[f], &d.arrows[g]);
        if ft != gs {
            return None;
        }
        d.find_arrow(*fs, *gt, &gm.functor.after(&fm.functor))
    })?;
    let index = FilteredIndex::certify(cat)
        .map_err(|e| Error::Precondition(format!("closed diagram is not filtered, raise the closure depth: {e}")))?;
    let fibers = d.presentations.iter().map(|p| p.site.category.clone()).collect();
    let transits = d.arrows.iter().map(|(_, _, m)| m.functor.clone()).collect();
    PseudoFunctor::strict(index, fibers, transits)
}

impl<K: Scalar> SiteColimit<K> {
    /// Closes `seeds`, builds the colimit of the underlying categories and
    /// the functor `psi(x, u_a) = u_a(x)`.
    pub fn build(ambient: &AmbientCategory<K>, seeds: &[SitePresentation<K>], bounds: &Bounds) -> Result<Self> {
        if seeds.is_empty() {
            return Err(Error::Precondition("no seed presentations".into()));
        }
        let mut hit = vec![false; ambient.num_objects()];
        for s in seeds {
            for &o in s.u.obj_map() {
                hit[o] = true;
            }
        }
        if let Some(o) = hit.iter().position(|h| !h) {
            return Err(Error::Precondition(format!(
                "seeds miss object `{}` of the ambient category",
                ambient.category.object_name(o)
            )));
        }
        let diagram = PresentationDiagram::close(ambient, seeds, bounds)?;
        if !diagram.saturated {
            return Err(Error::bound("closure rounds", bounds.closure_depth as u128 + 1, bounds.closure_depth as u128));
        }
        let colimit = ColimCategory::build(Arc::new(strict_pseudofunctor(&diagram)?))?;
        let mut out = SiteColimit {
            diagram,
            colimit,
            psi: LinFunctor::new(Vec::new(), Vec::new())?,
        };
        let l = out.colimit.category();
        let obj_map = out
            .colimit
            .colim_objects()
            .iter()
            .map(|x| out.diagram.presentations[x.index].u.obj(x.obj))
            .collect();
        let psi = LinFunctor::from_basis_images(l, &ambient.category, obj_map, |s, t, i| {
            out.psi_class(&HomotopyClass {
                src: s,
                dst: t,
                coords: l.basis_vector(s, t, i),
            })
        });
        out.psi = psi;
        Ok(out)
    }

    /// `psi(x, u_a) = u_a(x)`.
    pub fn psi_object(&self, x: ColimObject) -> Result<ObjId> {
        let p = self
            .diagram
            .presentations
            .get(x.index)
            .ok_or_else(|| Error::Typing(format!("no presentation #{}", x.index)))?;
        if x.obj >= p.u.num_objects() {
            return Err(Error::Typing(format!("`{}` has no object #{}", p.name, x.obj)));
        }
        Ok(p.u.obj(x.obj))
    }

    /// `psi[(u, f, v)_c] = u_c(f)`.
    pub fn psi_premorphism(&self, p: &Premorphism<K>) -> Result<Vec<K>> {
        let pf = self.colimit.pseudofunctor();
        pf.check_premorphism(p)?;
        let apex = pf.apex(p);
        let u_c = &self.diagram.presentations[apex].u;
        Ok(u_c.apply(pf.obj(p.u, p.src.obj), pf.obj(p.v, p.dst.obj), &p.f))
    }

    /// `psi` on a class through its canonical representative.
    pub fn psi_class(&self, c: &HomotopyClass<K>) -> Vec<K> {
        self.psi_premorphism(&self.colimit.representative(c))
            .expect("representatives are well typed")
    }

    /// Runs every check of the comparison functor.
    pub fn verify(&self, ambient: &AmbientCategory<K>) -> Result<SiteColimitReport> {
        let pf = self.colimit.pseudofunctor();
        let l = self.colimit.category();
        let c = &ambient.category;
        let objs = self.colimit.colim_objects();
        let mut r = SiteColimitReport {
            presentations: self.diagram.presentations.len(),
            index_arrows: self.diagram.arrows.len(),
            colimit_objects: objs.len(),
            well_defined: true,
            functor_valid: true,
            linear: true,
            essentially_surjective: true,
            full: true,
            faithful: true,
            witness: None,
        };
        let name = |o: ObjId| l.object_name(o).to_string();

        // every premorphism agrees with its class, and pushing changes nothing
        'wd: for a in 0..objs.len() {
            for b in 0..objs.len() {
                for p in pf.basis_premorphisms(objs[a], objs[b]) {
                    let image = self.psi_premorphism(&p)?;
                    let apex = pf.apex(&p);
                    let pushed_ok = pf
                        .index()
                        .arrows_from(apex)
                        .all(|w| pf.push(&p, w).map(|q| self.psi_premorphism(&q)) == Ok(Ok(image.clone())));
                    if !pushed_ok || self.psi_class(&self.colimit.class_of(&p)) != image {
                        r.well_defined = false;
                        r.witness = Some(format!("psi is not constant on a class in hom({}, {})", name(a), name(b)));
                        break 'wd;
                    }
                }
            }
        }

        if let Err(v) = validate_functor(&self.psi, l, c) {
            r.functor_valid = false;
            r.witness.get_or_insert_with(|| v.to_string());
        }

        // psi([m1] + lambda [m2]) against psi(m1) + lambda psi(m2), with the
        // summands taken on every pair of cospans
        let scalars = K::elements().unwrap_or_else(|| vec![K::one(), K::from_i64(2), K::from_i64(-1)]);
        'lin: for a in 0..objs.len() {
            for b in 0..objs.len() {
                let basis = pf.basis_premorphisms(objs[a], objs[b]);
                for m1 in &basis {
                    for m2 in &basis {
                        for lambda in &scalars {
                            let sum = pf.linear_combination(m1, lambda, m2)?;
                            let lhs = self.psi_premorphism(&sum)?;
                            let rhs = axpy(&self.psi_premorphism(m1)?, lambda, &self.psi_premorphism(m2)?);
                            if lhs != rhs {
                                r.linear = false;
                                r.witness.get_or_insert_with(|| format!("psi is not linear on hom({}, {})", name(a), name(b)));
                                break 'lin;
                            }
                        }
                    }
                }
            }
        }

        // every object of C is psi of some (x, u_a), on the nose
        for y in 0..c.num_objects() {
            if !self.psi.obj_map().contains(&y) {
                r.essentially_surjective = false;
                r.witness.get_or_insert_with(|| format!("`{}` is not hit", c.object_name(y)));
            }
        }

        // fullness: f: u_a x -> u_b y lifts to (u_a~, f~, u_b~) over the full
        // subcategory spanned by both images; faithfulness: psi is injective
        // on each hom of L
        for a in 0..objs.len() {
            for b in 0..objs.len() {
                let (x, y) = (objs[a], objs[b]);
                let m = self.psi.hom_map(a, b);
                if m.rank() != m.cols() {
                    r.faithful = false;
                    r.witness.get_or_insert_with(|| format!("psi is not faithful on hom({}, {})", name(a), name(b)));
                }
                match self.lift_through_span(x, y) {
                    Some((u, v, apex)) => {
                        let fa = pf.fiber(apex);
                        let (sx, sy) = (pf.obj(u, x.obj), pf.obj(v, y.obj));
                        for i in 0..c.hom_dim(self.psi.obj(a), self.psi.obj(b)) {
                            let f = c.basis_vector(self.psi.obj(a), self.psi.obj(b), i);
                            debug_assert_eq!(fa.hom_dim(sx, sy), f.len());
                            let p = Premorphism { src: x, dst: y, u, v, f: f.clone() };
                            if self.psi_premorphism(&p)? != f {
                                r.full = false;
                                r.witness.get_or_insert_with(|| format!("lift of a morphism into hom({}, {}) fails", name(a), name(b)));
                            }
                        }
                    }
                    None => {
                        r.full = false;
                        r.witness.get_or_insert_with(|| {
                            format!("no spanned subcategory for hom({}, {}) in the diagram", name(a), name(b))
                        });
                    }
                }
                if m.rank() != m.rows() {
                    r.full = false;
                    r.witness.get_or_insert_with(|| format!("psi is not full on hom({}, {})", name(a), name(b)));
                }
            }
        }
        Ok(r)
    }

    /// Arrows `x.index -> c <- y.index` into the presentation of the full
    /// subcategory spanned by both images.
    fn lift_through_span(&self, x: ColimObject, y: ColimObject) -> Option<(usize, usize, usize)> {
        let ps = &self.diagram.presentations;
        let mut span = ps[x.index].image();
        span.extend(ps[y.index].image());
        span.sort_unstable();
        span.dedup();
        let apex = ps.iter().position(|p| p.is_full_inclusion() && p.u.obj_map() == span.as_slice())?;
        let u = self.diagram.arrows_between(x.index, apex).next()?;
        let v = self.diagram.arrows_between(y.index, apex).next()?;
        Some((u, v, apex))
    }
}

/// Builds the closed diagram and its colimit, then checks that `psi` is a
/// k-linear equivalence.
pub fn verify_site_colimit<K: Scalar>(
    ambient: &AmbientCategory<K>,
    seeds: &[SitePresentation<K>],
    bounds: &Bounds,
) -> Result<(SiteColimit<K>, SiteColimitReport)> {
    let sc = SiteColimit::build(ambient, seeds, bounds)?;
    let report = sc.verify(ambient)?;
    Ok((sc, report))
}
