use std::fmt;

use super::cover::CoverSystem;
use crate::error::{Bounds, Error, Result};
use crate::exactalg::{nullspace, projective_points, Matrix, Scalar, Subspace};
use crate::lincat::{LinCategory, LinFunctor, Morphism, ObjId};
use crate::sieves::{sieve_lattice, Sieve};

/// The sieve on `f(a)` generated by the image of a spanning set of `r`.
pub fn image_sieve<K: Scalar>(f: &LinFunctor<K>, dst: &LinCategory<K>, r: &Sieve<K>) -> Sieve<K> {
    let t = r.target();
    let family: Vec<Morphism<K>> = r
        .spanning_morphisms()
        .into_iter()
        .map(|m| Morphism::new(f.obj(m.src), f.obj(t), f.apply(m.src, t, &m.coords)))
        .collect();
    Sieve::generated(dst, f.obj(t), &family).expect("images end at f(t)")
}

/// `f^-1 T`: the sieves on `src` whose image generates a cover (finite
/// fields only).
pub fn induced_topology<K: Scalar>(
    f: &LinFunctor<K>,
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    t: &CoverSystem<K>,
    bounds: &Bounds,
) -> Result<CoverSystem<K>> {
    let mut out = CoverSystem::empty(src);
    for r in sieve_lattice(src, bounds)?.into_iter().flatten() {
        if t.contains(&image_sieve(f, dst, &r)) {
            out.insert(r);
        }
    }
    Ok(out)
}

/// One clause of the LC condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Clause {
    fn pass() -> Self {
        Clause {
            holds: true,
            witness: None,
        }
    }

    fn fail(witness: String) -> Self {
        Clause {
            holds: false,
            witness: Some(witness),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "pass"),
            Some(w) => write!(f, "fail ({w})"),
        }
    }
}

/// Verdicts for (G), (F), (FF) and `T_a = f^-1 T_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LCReport {
    pub g: Clause,
    pub f: Clause,
    pub ff: Clause,
    pub pullback_eq: Clause,
}

impl LCReport {
    pub fn lc_overall(&self) -> bool {
        self.g.holds && self.f.holds && self.ff.holds && self.pullback_eq.holds
    }

    pub fn first_failure(&self) -> Option<(&'static str, &Clause)> {
        [("G", &self.g), ("F", &self.f), ("FF", &self.ff), ("pullback", &self.pullback_eq)]
            .into_iter()
            .find(|(_, c)| !c.holds)
    }
}

/// (G): every object of `dst` has a cover generated by morphisms out of
/// objects in the image of `f`.
fn check_g<K: Scalar>(f: &LinFunctor<K>, dst: &LinCategory<K>, tc: &CoverSystem<K>) -> Clause {
    let image: Vec<ObjId> = f.obj_map().to_vec();
    for c in 0..dst.num_objects() {
        let found = tc.covers(c).any(|r| {
            let from_image: Vec<Morphism<K>> = r
                .spanning_morphisms()
                .into_iter()
                .filter(|m| image.contains(&m.src))
                .collect();
            Sieve::generated(dst, c, &from_image).expect("same target") == *r
        });
        if !found {
            return Clause::fail(format!(
                "object `{}` has no cover generated from the image",
                dst.object_name(c)
            ));
        }
    }
    Clause::pass()
}

/// Column space of `m`.
fn image_of<K: Scalar>(m: &Matrix<K>) -> Subspace<K> {
    Subspace::span(m.rows(), &m.col_vecs())
}

/// (F): for every `c: f(A) -> f(A')`, the sieve of `a: A'' -> A` with
/// `c f(a)` in the image of `f` contains a cover of `A`.
fn check_f<K: Scalar>(
    f: &LinFunctor<K>,
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    ta: &CoverSystem<K>,
    bounds: &Bounds,
) -> Result<Clause> {
    let n = src.num_objects();
    for a in 0..n {
        for a2 in 0..n {
            let (fa, fa2) = (f.obj(a), f.obj(a2));
            for c in projective_points::<K>(dst.hom_dim(fa, fa2), bounds)? {
                let comps = (0..n)
                    .map(|b| {
                        let post = dst.post_composition(f.obj(b), fa, fa2, &c).mul(f.hom_map(b, a));
                        image_of(f.hom_map(b, a2)).preimage(&post)
                    })
                    .collect();
                let lifts = Sieve::new(src, a, comps)?;
                if !ta.has_cover_inside(&lifts) {
                    return Ok(Clause::fail(format!(
                        "morphism {:?} from `{}` to `{}` has no covering family of lifts",
                        c,
                        dst.object_name(fa),
                        dst.object_name(fa2)
                    )));
                }
            }
        }
    }
    Ok(Clause::pass())
}

/// (FF): for every `a: A -> A'` killed by `f`, the sieve of `h` with
/// `a h = 0` contains a cover of `A`.
fn check_ff<K: Scalar>(f: &LinFunctor<K>, src: &LinCategory<K>, ta: &CoverSystem<K>, bounds: &Bounds) -> Result<Clause> {
    let n = src.num_objects();
    for a in 0..n {
        for a2 in 0..n {
            let kernel = Subspace::span(src.hom_dim(a, a2), &nullspace(f.hom_map(a, a2)));
            for coords in projective_points::<K>(kernel.dim(), bounds)? {
                let m = kernel.combine(&coords);
                let comps = (0..n)
                    .map(|b| {
                        let post = src.post_composition(b, a, a2, &m);
                        Subspace::span(src.hom_dim(b, a), &nullspace(&post))
                    })
                    .collect();
                let annihilator = Sieve::new(src, a, comps)?;
                if !ta.has_cover_inside(&annihilator) {
                    return Ok(Clause::fail(format!(
                        "morphism {:?} from `{}` to `{}` is killed but not locally zero",
                        m,
                        src.object_name(a),
                        src.object_name(a2)
                    )));
                }
            }
        }
    }
    Ok(Clause::pass())
}

/// Checks that `f: (src, ta) -> (dst, tc)` is an LC morphism (finite fields
/// only).
///
/// Covering families are handled through the sieves they generate, so each
/// existential over families becomes a search for a stored cover inside a
/// computed sieve.
pub fn check_lc<K: Scalar>(
    f: &LinFunctor<K>,
    src: &LinCategory<K>,
    ta: &CoverSystem<K>,
    dst: &LinCategory<K>,
    tc: &CoverSystem<K>,
    bounds: &Bounds,
) -> Result<LCReport> {
    if K::order().is_none() {
        return Err(Error::FieldNotFinite(K::field_name()));
    }
    if f.num_objects() != src.num_objects() || ta.num_objects() != src.num_objects() {
        return Err(Error::DimensionMismatch("functor, source and its topology disagree on objects".into()));
    }
    if tc.num_objects() != dst.num_objects() {
        return Err(Error::DimensionMismatch("target topology lives on another category".into()));
    }
    let induced = induced_topology(f, src, dst, tc, bounds)?;
    let pullback_eq = if induced == *ta {
        Clause::pass()
    } else {
        let extra = ta.iter().find(|s| !induced.contains(s));
        let missing = induced.iter().find(|s| !ta.contains(s));
        Clause::fail(match (extra, missing) {
            (Some(s), _) => format!(
                "{s:?} on `{}` covers in the source but its image does not",
                src.object_name(s.target())
            ),
            (_, Some(s)) => format!(
                "{s:?} on `{}` has a covering image but is not a source cover",
                src.object_name(s.target())
            ),
            _ => unreachable!("systems differ"),
        })
    };
    Ok(LCReport {
        g: check_g(f, dst, tc),
        f: check_f(f, src, dst, ta, bounds)?,
        ff: check_ff(f, src, ta, bounds)?,
        pullback_eq,
    })
}
