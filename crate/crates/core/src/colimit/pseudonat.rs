use super::{ColimCategory, ColimObject, HomotopyClass, Premorphism, PseudoFunctor};
use crate::error::{Error, Result};
use crate::exactalg::Scalar;
use crate::lincat::{validate_functor, validate_nat_trans, LinCategory, LinFunctor, LinNatTrans, ObjId};

/// A pseudonatural transformation from a pseudofunctor to the constant
/// pseudofunctor at a category `c`.
///
/// `cells[u][x]` is the invertible component `Phi_{u,x}: Phi_A'(F(u) x) ->
/// Phi_A(x)` for `u: A -> A'`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudoNatTrans<K> {
    pub components: Vec<LinFunctor<K>>,
    pub cells: Vec<Vec<Vec<K>>>,
}

/// A modification `Phi => Psi`: one natural transformation per index object.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Modification<K> {
    pub components: Vec<LinNatTrans<K>>,
}

fn violation(detail: String) -> Error {
    Error::invalid("pseudonatural transformation", detail)
}

/// Checks typing, naturality and invertibility of every cell, and the
/// composition and unit laws.
pub fn validate_pseudonat<K: Scalar>(pf: &PseudoFunctor<K>, c: &LinCategory<K>, phi: &PseudoNatTrans<K>) -> Result<()> {
    let idx = pf.index();
    if phi.components.len() != idx.num_objects() || phi.cells.len() != idx.num_arrows() {
        return Err(violation("component or cell count does not match the index".into()));
    }
    for (a, comp) in phi.components.iter().enumerate() {
        validate_functor(comp, pf.fiber(a), c)
            .map_err(|v| violation(format!("component at `{}`: {v}", idx.object_name(a))))?;
    }
    for u in 0..idx.num_arrows() {
        check_cell(pf, c, phi, u)?;
    }
    for u in 0..idx.num_arrows() {
        for v in 0..idx.num_arrows() {
            let Some(vu) = idx.try_compose(v, u) else { continue };
            let (a, a2) = (idx.src(u), idx.dst(v));
            for x in 0..pf.fiber(a).num_objects() {
                if let Some(bad) = composition_law_fails(pf, c, phi, u, v, vu, a2, x) {
                    return Err(bad);
                }
            }
        }
    }
    Ok(())
}

fn check_cell<K: Scalar>(pf: &PseudoFunctor<K>, c: &LinCategory<K>, phi: &PseudoNatTrans<K>, u: usize) -> Result<()> {
    let idx = pf.index();
    let (a, a2) = (idx.src(u), idx.dst(u));
    let name = &idx.arrow(u).name;
    let fa = pf.fiber(a);
    if phi.cells[u].len() != fa.num_objects() {
        return Err(violation(format!("cell at `{name}` has the wrong number of components")));
    }
    for x in 0..fa.num_objects() {
        let (s, t) = (phi.components[a2].obj(pf.obj(u, x)), phi.components[a].obj(x));
        let cell = &phi.cells[u][x];
        if cell.len() != c.hom_dim(s, t) {
            return Err(violation(format!("cell at `{name}` is mistyped at `{}`", fa.object_name(x))));
        }
        if !c.is_isomorphism(s, t, cell) {
            return Err(violation(format!(
                "cell at `{name}` is not invertible at `{}`",
                fa.object_name(x)
            )));
        }
    }
    if let Some(bad) = cell_naturality_fails(pf, c, phi, u, &phi.cells[u]) {
        return Err(bad);
    }
    if idx.is_identity(u) {
        for x in 0..fa.num_objects() {
            if let Some(bad) = unit_law_fails(pf, c, phi, a, x, &phi.cells[u][x]) {
                return Err(bad);
            }
        }
    }
    Ok(())
}

// Phi_{u,x'} . Phi_A'(F(u) g) == Phi_A(g) . Phi_{u,x} for every basis g: x -> x'
// with both endpoints among the first `cells.len()` objects
fn cell_naturality_fails<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    u: usize,
    cells: &[Vec<K>],
) -> Option<Error> {
    let idx = pf.index();
    let (a, a2) = (idx.src(u), idx.dst(u));
    let (fa, pa, pa2, t) = (pf.fiber(a), &phi.components[a], &phi.components[a2], pf.transit(u));
    let k = cells.len();
    for x in 0..k {
        for y in 0..k {
            for i in 0..fa.hom_dim(x, y) {
                let g = fa.basis_vector(x, y, i);
                let (ux, uy) = (t.obj(x), t.obj(y));
                let lhs = c.compose(
                    pa2.obj(ux),
                    pa2.obj(uy),
                    pa.obj(y),
                    &cells[y],
                    &pa2.apply(ux, uy, &t.apply(x, y, &g)),
                );
                let rhs = c.compose(pa2.obj(ux), pa.obj(x), pa.obj(y), &pa.apply(x, y, &g), &cells[x]);
                if lhs != rhs {
                    return Some(violation(format!(
                        "cell at `{}` is not natural on `{}`",
                        idx.arrow(u).name,
                        fa.hom_basis(x, y)[i]
                    )));
                }
            }
        }
    }
    None
}

// Phi_{id,x} . Phi_A(iota_x) == id
fn unit_law_fails<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    a: usize,
    x: ObjId,
    cell: &[K],
) -> Option<Error> {
    let pa = &phi.components[a];
    let ix = pf.obj(pf.index().identity(a), x);
    let lhs = c.compose(pa.obj(x), pa.obj(ix), pa.obj(x), cell, &pa.apply(x, ix, pf.unit(a, x)));
    (lhs != c.identity(pa.obj(x))).then(|| {
        violation(format!(
            "unit law fails at `{}` over `{}`",
            pf.fiber(a).object_name(x),
            pf.index().object_name(a)
        ))
    })
}

// Phi_{vu,x} . Phi_A''(gamma(v,u)_x) == Phi_{u,x} . Phi_{v,F(u)x}
#[allow(clippy::too_many_arguments)]
fn composition_law_fails<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    u: usize,
    v: usize,
    vu: usize,
    a2: usize,
    x: ObjId,
) -> Option<Error> {
    let idx = pf.index();
    let a = idx.src(u);
    let a1 = idx.dst(u);
    let (p, p1, p2) = (&phi.components[a], &phi.components[a1], &phi.components[a2]);
    let ux = pf.obj(u, x);
    let vux = pf.obj(v, ux);
    let cx = pf.obj(vu, x);
    let lhs = c.compose(
        p2.obj(vux),
        p2.obj(cx),
        p.obj(x),
        &phi.cells[vu][x],
        &p2.apply(vux, cx, pf.gamma(v, u, x)),
    );
    let rhs = c.compose(p2.obj(vux), p1.obj(ux), p.obj(x), &phi.cells[u][x], &phi.cells[v][ux]);
    (lhs != rhs).then(|| {
        violation(format!(
            "composition law fails for (`{}`, `{}`) at `{}`",
            idx.arrow(v).name,
            idx.arrow(u).name,
            pf.fiber(a).object_name(x)
        ))
    })
}

/// Checks that each component is natural and the modification law
/// `r_{A,x} . Phi_{u,x} == Psi_{u,x} . r_{A',F(u)x}`.
pub fn validate_modification<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    psi: &PseudoNatTrans<K>,
    r: &Modification<K>,
) -> Result<()> {
    let idx = pf.index();
    let bad = |d: String| Error::invalid("modification", d);
    if r.components.len() != idx.num_objects() {
        return Err(bad("one component per index object is required".into()));
    }
    for a in 0..idx.num_objects() {
        validate_nat_trans(&r.components[a], &phi.components[a], &psi.components[a], pf.fiber(a), c)
            .map_err(|v| bad(format!("component at `{}`: {v}", idx.object_name(a))))?;
    }
    for u in 0..idx.num_arrows() {
        let (a, a2) = (idx.src(u), idx.dst(u));
        for x in 0..pf.fiber(a).num_objects() {
            let ux = pf.obj(u, x);
            let lhs = c.compose(
                phi.components[a2].obj(ux),
                phi.components[a].obj(x),
                psi.components[a].obj(x),
                r.components[a].component(x),
                &phi.cells[u][x],
            );
            let rhs = c.compose(
                phi.components[a2].obj(ux),
                psi.components[a2].obj(ux),
                psi.components[a].obj(x),
                &psi.cells[u][x],
                r.components[a2].component(ux),
            );
            if lhs != rhs {
                return Err(bad(format!(
                    "modification law fails on `{}` at `{}`",
                    idx.arrow(u).name,
                    pf.fiber(a).object_name(x)
                )));
            }
        }
    }
    Ok(())
}

impl<K: Scalar> ColimCategory<K> {
    /// The universal cocone `lambda: F => L(F)`.
    ///
    /// `lambda_A(g) = [(id_A, iota g iota^-1, id_A)]` and
    /// `lambda_{u,x} = [(id_A', iota^-1_{F(u)x}, u)]: (F(u) x, A') -> (x, A)`.
    pub fn cocone(&self) -> PseudoNatTrans<K> {
        let pf = self.pseudofunctor();
        let idx = pf.index();
        let l = self.category();
        let mut components = Vec::new();
        for a in 0..idx.num_objects() {
            let fa = pf.fiber(a);
            let id = idx.identity(a);
            let obj_map = (0..fa.num_objects())
                .map(|x| self.object_of(ColimObject::new(a, x)))
                .collect();
            let comp = LinFunctor::from_basis_images(fa, l, obj_map, |x, y, i| {
                let (ix, iy) = (pf.obj(id, x), pf.obj(id, y));
                let g = fa.basis_vector(x, y, i);
                let inner = fa.compose(x, y, iy, pf.unit(a, y), &g);
                let f = fa.compose(ix, x, iy, &inner, pf.unit_inv(a, x));
                let p = Premorphism {
                    src: ColimObject::new(a, x),
                    dst: ColimObject::new(a, y),
                    u: id,
                    v: id,
                    f,
                };
                self.class_of(&p).coords
            });
            components.push(comp);
        }
        let cells = (0..idx.num_arrows())
            .map(|u| {
                let (a, a2) = (idx.src(u), idx.dst(u));
                let id2 = idx.identity(a2);
                (0..pf.fiber(a).num_objects())
                    .map(|x| {
                        let ux = pf.obj(u, x);
                        let p = Premorphism {
                            src: ColimObject::new(a2, ux),
                            dst: ColimObject::new(a, x),
                            u: id2,
                            v: u,
                            f: pf.unit_inv(a2, ux).to_vec(),
                        };
                        self.class_of(&p).coords
                    })
                    .collect()
            })
            .collect();
        PseudoNatTrans { components, cells }
    }

    /// The functor `L(F) -> c` induced by `phi`, sending `[(u, f, v)]` to
    /// `Phi_{v,y} . Phi_C(f) . Phi_{u,x}^-1`.
    pub fn induced_functor(&self, c: &LinCategory<K>, phi: &PseudoNatTrans<K>) -> Result<LinFunctor<K>> {
        let pf = self.pseudofunctor();
        validate_pseudonat(pf, c, phi)?;
        let l = self.category();
        let obj_map: Vec<ObjId> = self
            .colim_objects()
            .iter()
            .map(|o| phi.components[o.index].obj(o.obj))
            .collect();
        let idx = pf.index();
        let functor = LinFunctor::from_basis_images(l, c, obj_map.clone(), |s, t, i| {
            let rep = self.representative(&HomotopyClass {
                src: s,
                dst: t,
                coords: l.basis_vector(s, t, i),
            });
            let apex = idx.dst(rep.u);
            let pc = &phi.components[apex];
            let (ux, vy) = (pf.obj(rep.u, rep.src.obj), pf.obj(rep.v, rep.dst.obj));
            let cell_u = &phi.cells[rep.u][rep.src.obj];
            let inv_u = c
                .inverse(pc.obj(ux), obj_map[s], cell_u)
                .expect("cells are invertible");
            let mid = c.compose(obj_map[s], pc.obj(ux), pc.obj(vy), &pc.apply(ux, vy, &rep.f), &inv_u);
            c.compose(obj_map[s], pc.obj(vy), obj_map[t], &phi.cells[rep.v][rep.dst.obj], &mid)
        });
        validate_functor(&functor, l, c).map_err(|v| Error::invalid("induced functor", v.to_string()))?;
        Ok(functor)
    }

    /// `G . lambda` for a functor `G: L(F) -> c`.
    pub fn precompose_cocone(&self, cocone: &PseudoNatTrans<K>, g: &LinFunctor<K>) -> PseudoNatTrans<K> {
        let pf = self.pseudofunctor();
        let idx = pf.index();
        let components = cocone.components.iter().map(|l| g.after(l)).collect();
        let cells = (0..idx.num_arrows())
            .map(|u| {
                let (a, a2) = (idx.src(u), idx.dst(u));
                (0..pf.fiber(a).num_objects())
                    .map(|x| {
                        let s = cocone.components[a2].obj(pf.obj(u, x));
                        let t = cocone.components[a].obj(x);
                        g.apply(s, t, &cocone.cells[u][x])
                    })
                    .collect()
            })
            .collect();
        PseudoNatTrans { components, cells }
    }
}

pub(super) fn cell_naturality_prefix_ok<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    u: usize,
    prefix: &[Vec<K>],
) -> bool {
    cell_naturality_fails(pf, c, phi, u, prefix).is_none()
}

pub(super) fn unit_law_ok<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    a: usize,
    x: ObjId,
    cell: &[K],
) -> bool {
    unit_law_fails(pf, c, phi, a, x, cell).is_none()
}

/// Composition laws whose three arrows are all at most `u`, with one equal
/// to `u`.
pub(super) fn composition_laws_ok_upto<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    u: usize,
) -> bool {
    let idx = pf.index();
    for f in 0..=u {
        for g in 0..=u {
            let Some(gf) = idx.try_compose(g, f) else { continue };
            if gf > u || f.max(g).max(gf) != u {
                continue;
            }
            let a2 = idx.dst(g);
            for x in 0..pf.fiber(idx.src(f)).num_objects() {
                if composition_law_fails(pf, c, phi, f, g, gf, a2, x).is_some() {
                    return false;
                }
            }
        }
    }
    true
}
