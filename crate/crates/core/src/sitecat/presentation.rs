use crate::error::{Bounds, Error, Result};
use crate::exactalg::Scalar;
use crate::lincat::{full_subcategory, validate_functor, LinCategory, LinFunctor, ObjId};
use crate::topology::{canonical_topology, check_lc, induced_topology, LCReport, Site, Topology};

/// A finite linear category with its canonical topology, standing in for a
/// Grothendieck category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmbientCategory<K> {
    pub category: LinCategory<K>,
    pub topology: Topology<K>,
}

impl<K: Scalar> AmbientCategory<K> {
    pub fn new(category: LinCategory<K>, bounds: &Bounds) -> Result<Self> {
        let topology = canonical_topology(&category, bounds)?.topology;
        Ok(AmbientCategory { category, topology })
    }

    pub fn num_objects(&self) -> usize {
        self.category.num_objects()
    }
}

/// An LC functor `u: (a, T_a) -> C` into the ambient category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SitePresentation<K> {
    pub name: String,
    pub site: Site<K>,
    pub u: LinFunctor<K>,
    pub lc: LCReport,
}

fn lc_failure(what: &str, r: &LCReport) -> Error {
    let (clause, c) = r.first_failure().expect("a failing report");
    Error::Precondition(format!("{what} is not LC: ({clause}) {c}"))
}

impl<K: Scalar> SitePresentation<K> {
    /// Validates `u` and checks that it is LC.
    pub fn new(ambient: &AmbientCategory<K>, name: impl Into<String>, site: Site<K>, u: LinFunctor<K>, bounds: &Bounds) -> Result<Self> {
        let name = name.into();
        validate_functor(&u, &site.category, &ambient.category)
            .map_err(|v| Error::invalid("presentation", format!("`{name}`: {v}")))?;
        let lc = check_lc(&u, &site.category, &site.topology, &ambient.category, &ambient.topology, bounds)?;
        if !lc.lc_overall() {
            return Err(lc_failure(&format!("presentation `{name}`"), &lc));
        }
        Ok(SitePresentation { name, site, u, lc })
    }

    /// The full subcategory on `objs` with the induced topology and its
    /// inclusion. Objects are sorted and deduplicated first.
    pub fn full(ambient: &AmbientCategory<K>, objs: &[ObjId], bounds: &Bounds) -> Result<Self> {
        let mut objs = objs.to_vec();
        objs.sort_unstable();
        objs.dedup();
        let (sub, incl) = full_subcategory(&ambient.category, &objs)?;
        let induced = induced_topology(&incl, &sub, &ambient.category, &ambient.topology, bounds)?;
        let topology = Topology::new(&sub, induced, bounds)?;
        let name = format!(
            "<{}>",
            objs.iter().map(|&o| ambient.category.object_name(o)).collect::<Vec<_>>().join(",")
        );
        Self::new(ambient, name, Site::new(sub, topology)?, incl, bounds)
    }

    /// Sorted, deduplicated objects hit by `u`.
    pub fn image(&self) -> Vec<ObjId> {
        let mut objs = self.u.obj_map().to_vec();
        objs.sort_unstable();
        objs.dedup();
        objs
    }

    /// Whether this is the inclusion of a full subcategory.
    pub fn is_full_inclusion(&self) -> bool {
        self.image().len() == self.u.num_objects() && self.u.is_full() && self.u.is_faithful()
    }

    fn same_as(&self, other: &SitePresentation<K>) -> bool {
        self.site == other.site && self.u == other.u
    }
}

/// An LC functor `f: a -> b` with `u_b f = u_a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentationMorphism<K> {
    pub functor: LinFunctor<K>,
    pub lc: LCReport,
}

impl<K: Scalar> PresentationMorphism<K> {
    pub fn new(functor: LinFunctor<K>, from: &SitePresentation<K>, to: &SitePresentation<K>, bounds: &Bounds) -> Result<Self> {
        let (a, b) = (&from.site, &to.site);
        validate_functor(&functor, &a.category, &b.category)
            .map_err(|v| Error::invalid("presentation morphism", v.to_string()))?;
        if to.u.after(&functor) != from.u {
            return Err(Error::Precondition(format!(
                "triangle `{}` -> `{}` does not commute",
                from.name, to.name
            )));
        }
        let lc = check_lc(&functor, &a.category, &a.topology, &b.category, &b.topology, bounds)?;
        if !lc.lc_overall() {
            return Err(lc_failure(&format!("morphism `{}` -> `{}`", from.name, to.name), &lc));
        }
        Ok(PresentationMorphism { functor, lc })
    }
}

/// `u_a` with its target cut down to the full subcategory on `objs` (sorted),
/// which must contain its image.
fn corestriction<K: Scalar>(u: &LinFunctor<K>, objs: &[ObjId]) -> LinFunctor<K> {
    let obj_map = u
        .obj_map()
        .iter()
        .map(|o| objs.binary_search(o).expect("image lies in the subcategory"))
        .collect();
    let n = u.num_objects();
    // homs of a full subcategory are those of the ambient verbatim
    let hom_maps = (0..n * n).map(|ab| u.hom_map(ab / n, ab % n).clone()).collect();
    LinFunctor::new(obj_map, hom_maps).expect("shape is preserved")
}

/// A cocone over two presentations.
#[derive(Clone, Debug)]
pub struct Cocone<K> {
    pub apex: SitePresentation<K>,
    pub left: PresentationMorphism<K>,
    pub right: PresentationMorphism<K>,
}

/// The full subcategory on the union of the two images, with the induced
/// topology, and the corestrictions of both presentations into it.
pub fn cocone_presentations<K: Scalar>(
    ambient: &AmbientCategory<K>,
    a: &SitePresentation<K>,
    b: &SitePresentation<K>,
    bounds: &Bounds,
) -> Result<Cocone<K>> {
    let mut objs = a.image();
    objs.extend(b.image());
    let apex = SitePresentation::full(ambient, &objs, bounds)?;
    let objs = apex.u.obj_map().to_vec();
    let left = PresentationMorphism::new(corestriction(&a.u, &objs), a, &apex, bounds)?;
    let right = PresentationMorphism::new(corestriction(&b.u, &objs), b, &apex, bounds)?;
    Ok(Cocone { apex, left, right })
}

#[derive(Clone, Debug)]
pub struct Equalizer<K> {
    pub apex: SitePresentation<K>,
    pub h: PresentationMorphism<K>,
}

/// The full subcategory on the image of `u_b`, with `h` the corestriction of
/// `u_b`. Checks `h f = h g`.
pub fn equalize_presentations<K: Scalar>(
    ambient: &AmbientCategory<K>,
    f: &PresentationMorphism<K>,
    g: &PresentationMorphism<K>,
    a: &SitePresentation<K>,
    b: &SitePresentation<K>,
    bounds: &Bounds,
) -> Result<Equalizer<K>> {
    for (name, m) in [("f", f), ("g", g)] {
        if b.u.after(&m.functor) != a.u {
            return Err(Error::Typing(format!("{name} is not a morphism `{}` -> `{}`", a.name, b.name)));
        }
    }
    let apex = SitePresentation::full(ambient, &b.image(), bounds)?;
    let h = PresentationMorphism::new(corestriction(&b.u, apex.u.obj_map()), b, &apex, bounds)?;
    if h.functor.after(&f.functor) != h.functor.after(&g.functor) {
        return Err(Error::invalid("equalizer", "h f and h g differ"));
    }
    Ok(Equalizer { apex, h })
}

/// A finite diagram of presentations and presentation morphisms, closed
/// under composition.
#[derive(Clone, Debug)]
pub struct PresentationDiagram<K> {
    pub presentations: Vec<SitePresentation<K>>,
    /// `(from, to, morphism)`, including identities.
    pub arrows: Vec<(usize, usize, PresentationMorphism<K>)>,
    /// Whether the last closure round added nothing.
    pub saturated: bool,
}

impl<K: Scalar> PresentationDiagram<K> {
    fn new() -> Self {
        PresentationDiagram {
            presentations: Vec::new(),
            arrows: Vec::new(),
            saturated: false,
        }
    }

    fn add_presentation(&mut self, p: SitePresentation<K>, bounds: &Bounds) -> Result<(usize, bool)> {
        if let Some(i) = self.presentations.iter().position(|q| q.same_as(&p)) {
            return Ok((i, false));
        }
        let i = self.presentations.len();
        let id = PresentationMorphism::new(LinFunctor::identity(&p.site.category), &p, &p, bounds)?;
        self.presentations.push(p);
        self.arrows.push((i, i, id));
        Ok((i, true))
    }

    fn add_arrow(&mut self, from: usize, to: usize, m: PresentationMorphism<K>) -> bool {
        if self.find_arrow(from, to, &m.functor).is_some() {
            return false;
        }
        self.arrows.push((from, to, m));
        true
    }

    pub fn find_arrow(&self, from: usize, to: usize, f: &LinFunctor<K>) -> Option<usize> {
        self.arrows
            .iter()
            .position(|(s, t, m)| *s == from && *t == to && m.functor == *f)
    }

    pub fn arrows_between(&self, from: usize, to: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&i| self.arrows[i].0 == from && self.arrows[i].1 == to)
    }

    fn close_under_composition(&mut self, bounds: &Bounds) -> Result<bool> {
        let mut changed = false;
        loop {
            let mut new = Vec::new();
            for (f_src, f_dst, f) in &self.arrows {
                for (g_src, g_dst, g) in &self.arrows {
                    if g_src != f_dst {
                        continue;
                    }
                    let gf = g.functor.after(&f.functor);
                    if self.find_arrow(*f_src, *g_dst, &gf).is_none()
                        && !new.iter().any(|(s, t, h): &(usize, usize, LinFunctor<K>)| s == f_src && t == g_dst && *h == gf)
                    {
                        new.push((*f_src, *g_dst, gf));
                    }
                }
            }
            if new.is_empty() {
                return Ok(changed);
            }
            for (s, t, h) in new {
                let m = PresentationMorphism::new(h, &self.presentations[s], &self.presentations[t], bounds)?;
                self.add_arrow(s, t, m);
            }
            changed = true;
        }
    }

    /// Closes `seeds` under cocones, equalizers and composition for at most
    /// `bounds.closure_depth` rounds.
    pub fn close(ambient: &AmbientCategory<K>, seeds: &[SitePresentation<K>], bounds: &Bounds) -> Result<Self> {
        let mut d = Self::new();
        for s in seeds {
            d.add_presentation(s.clone(), bounds)?;
        }
        d.close_under_composition(bounds)?;
        for _ in 0..bounds.closure_depth {
            let mut changed = false;
            let n = d.presentations.len();
            for i in 0..n {
                for j in 0..n {
                    let c = cocone_presentations(ambient, &d.presentations[i], &d.presentations[j], bounds)?;
                    let (k, fresh) = d.add_presentation(c.apex, bounds)?;
                    changed |= fresh;
                    changed |= d.add_arrow(i, k, c.left);
                    changed |= d.add_arrow(j, k, c.right);
                }
            }
            let m = d.arrows.len();
            for x in 0..m {
                for y in 0..m {
                    let ((s, t, f), (s2, t2, g)) = (&d.arrows[x], &d.arrows[y]);
                    if (s, t) != (s2, t2) || x == y {
                        continue;
                    }
                    let (s, t) = (*s, *t);
                    let e = equalize_presentations(ambient, f, g, &d.presentations[s], &d.presentations[t], bounds)?;
                    let (k, fresh) = d.add_presentation(e.apex, bounds)?;
                    changed |= fresh;
                    changed |= d.add_arrow(t, k, e.h);
                }
            }
            changed |= d.close_under_composition(bounds)?;
            if !changed {
                d.saturated = true;
                break;
            }
        }
        Ok(d)
    }
}
