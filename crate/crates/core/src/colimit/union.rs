use std::sync::Arc;

use super::{ColimCategory, FilteredIndex, IndexCategory, PseudoFunctor};
use crate::error::{Bounds, Error, Result};
use crate::exactalg::{Matrix, Scalar};
use crate::lincat::{full_subcategory, validate_functor, LinCategory, LinFunctor, ObjId};

/// Verdicts for a comparison functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub functor_valid: bool,
    pub essentially_surjective: bool,
    pub full: bool,
    pub faithful: bool,
    /// First object or hom pair where a verdict failed.
    pub witness: Option<String>,
}

impl EquivalenceReport {
    pub fn is_equivalence(&self) -> bool {
        self.functor_valid && self.essentially_surjective && self.full && self.faithful
    }
}

/// Checks that `phi: src -> dst` is a valid, fully faithful, essentially
/// surjective functor, hom by hom.
pub fn check_equivalence<K: Scalar>(
    phi: &LinFunctor<K>,
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    bounds: &Bounds,
) -> Result<EquivalenceReport> {
    let mut report = EquivalenceReport {
        functor_valid: true,
        essentially_surjective: true,
        full: true,
        faithful: true,
        witness: None,
    };
    if let Err(v) = validate_functor(phi, src, dst) {
        report.functor_valid = false;
        report.witness = Some(v.to_string());
    }
    for a in 0..src.num_objects() {
        for b in 0..src.num_objects() {
            let m = phi.hom_map(a, b);
            let r = m.rank();
            let pair = || format!("hom({}, {})", src.object_name(a), src.object_name(b));
            if r != m.cols() {
                report.faithful = false;
                report.witness.get_or_insert_with(|| format!("not faithful on {}", pair()));
            }
            if r != m.rows() {
                report.full = false;
                report.witness.get_or_insert_with(|| format!("not full on {}", pair()));
            }
        }
    }
    for y in 0..dst.num_objects() {
        let mut hit = phi.obj_map().contains(&y);
        if !hit {
            for a in 0..src.num_objects() {
                if dst.find_isomorphism(phi.obj(a), y, bounds)?.is_some() {
                    hit = true;
                    break;
                }
            }
        }
        if !hit {
            report.essentially_surjective = false;
            report
                .witness
                .get_or_insert_with(|| format!("`{}` is not isomorphic to an image", dst.object_name(y)));
        }
    }
    Ok(report)
}

/// A category written as the union of full subcategories indexed by a
/// directed preorder.
#[derive(Clone, Debug)]
pub struct UnionColimit<K> {
    pub colimit: ColimCategory<K>,
    /// `(x, i) |-> x`.
    pub phi: LinFunctor<K>,
    pub report: EquivalenceReport,
}

/// Builds the strict pseudofunctor of full subcategories `subsets[i]` and
/// inclusions, its colimit, and the comparison functor back to `c`.
pub fn union_colimit_equivalence<K: Scalar>(
    c: &LinCategory<K>,
    order: IndexCategory,
    subsets: &[Vec<ObjId>],
    bounds: &Bounds,
) -> Result<UnionColimit<K>> {
    let pf = Arc::new(union_pseudofunctor(c, order, subsets)?);
    let colimit = ColimCategory::build(pf.clone())?;
    let mut sorted: Vec<Vec<ObjId>> = subsets.to_vec();
    for s in &mut sorted {
        s.sort_unstable();
    }
    let l = colimit.category();
    let obj_map = colimit
        .colim_objects()
        .iter()
        .map(|o| sorted[o.index][o.obj])
        .collect();
    let phi = LinFunctor::from_basis_images(l, c, obj_map, |s, t, i| {
        let rep = colimit.representative(&super::HomotopyClass {
            src: s,
            dst: t,
            coords: l.basis_vector(s, t, i),
        });
        // fiber homs are the homs of c verbatim
        rep.f
    });
    let report = check_equivalence(&phi, l, c, bounds)?;
    Ok(UnionColimit { colimit, phi, report })
}

/// The strict pseudofunctor `i |-> full subcategory on subsets[i]` with
/// inclusions as transits. Subsets are sorted before use.
pub fn union_pseudofunctor<K: Scalar>(
    c: &LinCategory<K>,
    order: IndexCategory,
    subsets: &[Vec<ObjId>],
) -> Result<PseudoFunctor<K>> {
    let n = order.num_objects();
    if subsets.len() != n {
        return Err(Error::Precondition(format!("{} subsets for {n} index objects", subsets.len())));
    }
    let mut sorted: Vec<Vec<ObjId>> = subsets.to_vec();
    for s in &mut sorted {
        s.sort_unstable();
        s.dedup();
    }
    let mut covered = vec![false; c.num_objects()];
    for s in &sorted {
        for &x in s {
            if x >= c.num_objects() {
                return Err(Error::UnknownObject(format!("#{x}")));
            }
            covered[x] = true;
        }
    }
    if let Some(x) = covered.iter().position(|&b| !b) {
        return Err(Error::Precondition(format!(
            "the subsets miss object `{}`",
            c.object_name(x)
        )));
    }
    for a in order.arrows() {
        if !sorted[a.src].iter().all(|x| sorted[a.dst].contains(x)) {
            return Err(Error::Precondition(format!(
                "subsets are not nested along `{}`",
                a.name
            )));
        }
    }
    let index = FilteredIndex::certify(order)?;
    let fibers = sorted
        .iter()
        .map(|s| full_subcategory(c, s).map(|(sub, _)| sub))
        .collect::<Result<Vec<_>>>()?;
    let transits = index
        .arrows()
        .iter()
        .map(|a| {
            let (from, to) = (&sorted[a.src], &sorted[a.dst]);
            let obj_map: Vec<ObjId> = from
                .iter()
                .map(|x| to.iter().position(|y| y == x).expect("nested"))
                .collect();
            let k = from.len();
            let hom_maps = (0..k * k)
                .map(|ab| Matrix::identity(c.hom_dim(from[ab / k], from[ab % k])))
                .collect();
            LinFunctor::new(obj_map, hom_maps)
        })
        .collect::<Result<Vec<_>>>()?;
    PseudoFunctor::strict(index, fibers, transits)
}
