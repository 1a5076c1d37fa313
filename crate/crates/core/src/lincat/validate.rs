use std::fmt;

use super::{LinCategory, LinFunctor, LinNatTrans, ObjId};
use crate::exactalg::Scalar;

/// First law violated by a category presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CategoryViolation {
    LeftUnit { src: String, dst: String, basis: String },
    RightUnit { src: String, dst: String, basis: String },
    Associativity { objects: [String; 4], h: String, g: String, f: String },
}

impl fmt::Display for CategoryViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CategoryViolation::LeftUnit { src, dst, basis } => {
                write!(f, "id_{dst} . {basis} != {basis} for {basis}: {src} -> {dst}")
            }
            CategoryViolation::RightUnit { src, dst, basis } => {
                write!(f, "{basis} . id_{src} != {basis} for {basis}: {src} -> {dst}")
            }
            CategoryViolation::Associativity { objects, h, g, f: ff } => write!(
                f,
                "associativity fails on triple ({h}, {g}, {ff}) over {} -> {} -> {} -> {}",
                objects[0], objects[1], objects[2], objects[3]
            ),
        }
    }
}

/// Checks the unit laws on every basis element and associativity on every
/// basis triple.
pub fn validate_category<K: Scalar>(c: &LinCategory<K>) -> Result<(), CategoryViolation> {
    let n = c.num_objects();
    for a in 0..n {
        for b in 0..n {
            for i in 0..c.hom_dim(a, b) {
                let e = c.basis_vector(a, b, i);
                if c.compose(a, b, b, c.identity(b), &e) != e {
                    return Err(CategoryViolation::LeftUnit {
                        src: c.object_name(a).into(),
                        dst: c.object_name(b).into(),
                        basis: c.hom_basis(a, b)[i].clone(),
                    });
                }
                if c.compose(a, a, b, &e, c.identity(a)) != e {
                    return Err(CategoryViolation::RightUnit {
                        src: c.object_name(a).into(),
                        dst: c.object_name(b).into(),
                        basis: c.hom_basis(a, b)[i].clone(),
                    });
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for cc in 0..n {
                for d in 0..n {
                    if let Some(v) = associativity_failure(c, [a, b, cc, d]) {
                        return Err(v);
                    }
                }
            }
        }
    }
    Ok(())
}

fn associativity_failure<K: Scalar>(c: &LinCategory<K>, [a, b, cc, d]: [ObjId; 4]) -> Option<CategoryViolation> {
    for f in 0..c.hom_dim(a, b) {
        for g in 0..c.hom_dim(b, cc) {
            let gf = c.compose_basis(a, b, cc, g, f).to_vec();
            for h in 0..c.hom_dim(cc, d) {
                let hv = c.basis_vector(cc, d, h);
                let left = c.compose(a, cc, d, &hv, &gf);
                let hg = c.compose_basis(b, cc, d, h, g).to_vec();
                let right = c.compose(a, b, d, &hg, &c.basis_vector(a, b, f));
                if left != right {
                    return Some(CategoryViolation::Associativity {
                        objects: [a, b, cc, d].map(|o| c.object_name(o).to_string()),
                        h: c.hom_basis(cc, d)[h].clone(),
                        g: c.hom_basis(b, cc)[g].clone(),
                        f: c.hom_basis(a, b)[f].clone(),
                    });
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctorViolation {
    ObjectCount { expected: usize, found: usize },
    ObjectOutOfRange { object: String },
    HomMapShape { src: String, dst: String },
    IdentityNotPreserved { object: String },
    CompositionNotPreserved { g: String, f: String },
}

impl fmt::Display for FunctorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorViolation::ObjectCount { expected, found } => {
                write!(f, "object map has {found} entries, source has {expected} objects")
            }
            FunctorViolation::ObjectOutOfRange { object } => {
                write!(f, "object `{object}` is sent outside the target")
            }
            FunctorViolation::HomMapShape { src, dst } => {
                write!(f, "hom map on ({src}, {dst}) has the wrong shape")
            }
            FunctorViolation::IdentityNotPreserved { object } => {
                write!(f, "identity not preserved at `{object}`")
            }
            FunctorViolation::CompositionNotPreserved { g, f: ff } => {
                write!(f, "composition not preserved on {g} . {ff}")
            }
        }
    }
}

/// Checks shape, identity preservation and composition preservation on all
/// basis pairs.
pub fn validate_functor<K: Scalar>(
    func: &LinFunctor<K>,
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
) -> Result<(), FunctorViolation> {
    let n = src.num_objects();
    if func.obj_map().len() != n {
        return Err(FunctorViolation::ObjectCount {
            expected: n,
            found: func.obj_map().len(),
        });
    }
    for a in 0..n {
        if func.obj(a) >= dst.num_objects() {
            return Err(FunctorViolation::ObjectOutOfRange {
                object: src.object_name(a).into(),
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            let m = func.hom_map(a, b);
            if m.cols() != src.hom_dim(a, b) || m.rows() != dst.hom_dim(func.obj(a), func.obj(b)) {
                return Err(FunctorViolation::HomMapShape {
                    src: src.object_name(a).into(),
                    dst: src.object_name(b).into(),
                });
            }
        }
    }
    for a in 0..n {
        if func.apply(a, a, src.identity(a)) != dst.identity(func.obj(a)) {
            return Err(FunctorViolation::IdentityNotPreserved {
                object: src.object_name(a).into(),
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for g in 0..src.hom_dim(b, c) {
                    let fg = func.apply(b, c, &src.basis_vector(b, c, g));
                    for f in 0..src.hom_dim(a, b) {
                        let ff = func.apply(a, b, &src.basis_vector(a, b, f));
                        let lhs = func.apply(a, c, src.compose_basis(a, b, c, g, f));
                        let rhs = dst.compose(func.obj(a), func.obj(b), func.obj(c), &fg, &ff);
                        if lhs != rhs {
                            return Err(FunctorViolation::CompositionNotPreserved {
                                g: src.hom_basis(b, c)[g].clone(),
                                f: src.hom_basis(a, b)[f].clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NatTransViolation {
    ComponentShape { object: String },
    NotNatural { basis: String },
}

impl fmt::Display for NatTransViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NatTransViolation::ComponentShape { object } => {
                write!(f, "component at `{object}` has the wrong shape")
            }
            NatTransViolation::NotNatural { basis } => {
                write!(f, "naturality square fails on `{basis}`")
            }
        }
    }
}

/// Checks `G(f) . eta_A = eta_B . F(f)` on every basis morphism `f: A -> B`.
pub fn validate_nat_trans<K: Scalar>(
    eta: &LinNatTrans<K>,
    from: &LinFunctor<K>,
    to: &LinFunctor<K>,
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
) -> Result<(), NatTransViolation> {
    let n = src.num_objects();
    for a in 0..n {
        if eta.component(a).len() != dst.hom_dim(from.obj(a), to.obj(a)) {
            return Err(NatTransViolation::ComponentShape {
                object: src.object_name(a).into(),
            });
        }
    }
    for a in 0..n {
        for b in 0..n {
            for i in 0..src.hom_dim(a, b) {
                let e = src.basis_vector(a, b, i);
                let lhs = dst.compose(from.obj(a), to.obj(a), to.obj(b), &to.apply(a, b, &e), eta.component(a));
                let rhs = dst.compose(from.obj(a), from.obj(b), to.obj(b), eta.component(b), &from.apply(a, b, &e));
                if lhs != rhs {
                    return Err(NatTransViolation::NotNatural {
                        basis: src.hom_basis(a, b)[i].clone(),
                    });
                }
            }
        }
    }
    Ok(())
}
