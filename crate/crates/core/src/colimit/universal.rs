use std::collections::HashSet;

use super::pseudonat::validate_pseudonat;
use super::{ColimCategory, PseudoFunctor, PseudoNatTrans};
use crate::error::{Bounds, Error, Result};
use crate::exactalg::{all_vectors, nullspace, Matrix, Scalar, Subspace};
use crate::lincat::{enumerate_functors, LinCategory, LinFunctor, ObjId};

/// Outcome of checking `Fun(L(F), c) = Psnat(F, c)` by exhaustive
/// enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalReport {
    pub functors: usize,
    pub pseudonat: usize,
    /// `G |-> G . lambda` is injective and hits every enumerated
    /// pseudonatural transformation.
    pub objects_bijective: bool,
    /// `induced(G . lambda) == G` and `induced(Phi) . lambda == Phi`.
    pub round_trip: bool,
    /// Natural transformations `G => G'` and modifications
    /// `G lambda => G' lambda` form the same subspace for every pair.
    pub morphisms_bijective: bool,
    pub counterexample: Option<String>,
}

impl UniversalReport {
    pub fn holds(&self) -> bool {
        self.objects_bijective && self.round_trip && self.morphisms_bijective
    }
}

struct Budget {
    left: u128,
    limit: u128,
}

impl Budget {
    fn spend(&mut self, n: u128) -> Result<()> {
        if n > self.left {
            return Err(Error::bound("pseudonatural candidates", self.limit + 1, self.limit));
        }
        self.left -= n;
        Ok(())
    }
}

/// Every pseudonatural transformation from `pf` to the constant
/// pseudofunctor at `c` (finite fields only).
///
/// Components are enumerated as functors; cells arrow by arrow with
/// invertibility, naturality and the unit law checked per arrow and the
/// composition law checked as soon as its three arrows are fixed. Every
/// examined candidate counts against `bounds.max_functors`.
pub fn enumerate_pseudonat<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    bounds: &Bounds,
) -> Result<Vec<PseudoNatTrans<K>>> {
    let idx = pf.index();
    let mut budget = Budget {
        left: bounds.max_functors,
        limit: bounds.max_functors,
    };
    let mut per_object = Vec::new();
    for a in 0..idx.num_objects() {
        let fs = enumerate_functors(pf.fiber(a), c, bounds)?;
        budget.spend(fs.len() as u128)?;
        per_object.push(fs);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; idx.num_objects()];
    if per_object.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        let components: Vec<LinFunctor<K>> = choice
            .iter()
            .enumerate()
            .map(|(a, &i)| per_object[a][i].clone())
            .collect();
        let mut phi = PseudoNatTrans {
            components,
            cells: vec![Vec::new(); idx.num_arrows()],
        };
        let mut per_arrow = Vec::with_capacity(idx.num_arrows());
        for u in 0..idx.num_arrows() {
            per_arrow.push(arrow_cells(pf, c, &phi, u, bounds, &mut budget)?);
        }
        combine_arrows(pf, c, &mut phi, &per_arrow, 0, &mut out, &mut budget)?;
        // next combination of components
        let mut k = choice.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < per_object[k].len() {
                break;
            }
            choice[k] = 0;
        }
    }
}

// all cell families for one arrow passing the per-arrow laws
fn arrow_cells<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    u: usize,
    bounds: &Bounds,
    budget: &mut Budget,
) -> Result<Vec<Vec<Vec<K>>>> {
    let idx = pf.index();
    let (a, a2) = (idx.src(u), idx.dst(u));
    let n = pf.fiber(a).num_objects();
    let mut options = Vec::with_capacity(n);
    for x in 0..n {
        let s = phi.components[a2].obj(pf.obj(u, x));
        let t = phi.components[a].obj(x);
        let all = all_vectors::<K>(c.hom_dim(s, t), bounds)?;
        budget.spend(all.len() as u128)?;
        options.push(all.into_iter().filter(|v| c.is_isomorphism(s, t, v)).collect::<Vec<_>>());
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    extend_cells(pf, c, phi, u, &options, &mut cur, &mut out, budget)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend_cells<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    u: usize,
    options: &[Vec<Vec<K>>],
    cur: &mut Vec<Vec<K>>,
    out: &mut Vec<Vec<Vec<K>>>,
    budget: &mut Budget,
) -> Result<()> {
    let k = cur.len();
    if k == options.len() {
        out.push(cur.clone());
        return Ok(());
    }
    let idx = pf.index();
    for cand in &options[k] {
        budget.spend(1)?;
        cur.push(cand.clone());
        let mut ok = super::pseudonat::cell_naturality_prefix_ok(pf, c, phi, u, cur);
        if ok && idx.is_identity(u) {
            ok = super::pseudonat::unit_law_ok(pf, c, phi, idx.src(u), k, cand);
        }
        if ok {
            extend_cells(pf, c, phi, u, options, cur, out, budget)?;
        }
        cur.pop();
    }
    Ok(())
}

fn combine_arrows<K: Scalar>(
    pf: &PseudoFunctor<K>,
    c: &LinCategory<K>,
    phi: &mut PseudoNatTrans<K>,
    per_arrow: &[Vec<Vec<Vec<K>>>],
    u: usize,
    out: &mut Vec<PseudoNatTrans<K>>,
    budget: &mut Budget,
) -> Result<()> {
    let idx = pf.index();
    if u == idx.num_arrows() {
        debug_assert!(validate_pseudonat(pf, c, phi).is_ok());
        out.push(phi.clone());
        return Ok(());
    }
    for cells in &per_arrow[u] {
        budget.spend(1)?;
        phi.cells[u] = cells.clone();
        if super::pseudonat::composition_laws_ok_upto(pf, c, phi, u) {
            combine_arrows(pf, c, phi, per_arrow, u + 1, out, budget)?;
        }
    }
    phi.cells[u] = Vec::new();
    Ok(())
}

/// Natural transformations `G => H` between functors `src -> c`, as a
/// subspace of the direct sum of `hom(G a, H a)` over objects `a`.
pub fn nat_trans_space<K: Scalar>(
    src: &LinCategory<K>,
    c: &LinCategory<K>,
    g: &LinFunctor<K>,
    h: &LinFunctor<K>,
) -> Subspace<K> {
    let n = src.num_objects();
    let blocks: Vec<(ObjId, ObjId)> = (0..n).map(|a| (g.obj(a), h.obj(a))).collect();
    let mut eqs = EquationSystem::new(c, &blocks);
    for a in 0..n {
        for b in 0..n {
            for i in 0..src.hom_dim(a, b) {
                let e = src.basis_vector(a, b, i);
                // H(e) . eta_a - eta_b . G(e)
                eqs.add(a, b, &h.apply(a, b, &e), &g.apply(a, b, &e));
            }
        }
    }
    eqs.solutions()
}

/// Modifications `Phi => Psi` in the same coordinates as
/// [`nat_trans_space`] on the colimit objects.
pub fn modification_space<K: Scalar>(
    colim: &ColimCategory<K>,
    c: &LinCategory<K>,
    phi: &PseudoNatTrans<K>,
    psi: &PseudoNatTrans<K>,
) -> Subspace<K> {
    let pf = colim.pseudofunctor();
    let idx = pf.index();
    let objs = colim.colim_objects();
    let blocks: Vec<(ObjId, ObjId)> = objs
        .iter()
        .map(|o| (phi.components[o.index].obj(o.obj), psi.components[o.index].obj(o.obj)))
        .collect();
    let slot = |a: usize, x: ObjId| colim.object_of(super::ColimObject::new(a, x));
    let mut eqs = EquationSystem::new(c, &blocks);
    for a in 0..idx.num_objects() {
        let fa = pf.fiber(a);
        for x in 0..fa.num_objects() {
            for y in 0..fa.num_objects() {
                for i in 0..fa.hom_dim(x, y) {
                    let e = fa.basis_vector(x, y, i);
                    eqs.add(
                        slot(a, x),
                        slot(a, y),
                        &psi.components[a].apply(x, y, &e),
                        &phi.components[a].apply(x, y, &e),
                    );
                }
            }
        }
    }
    for u in 0..idx.num_arrows() {
        let (a, a2) = (idx.src(u), idx.dst(u));
        for x in 0..pf.fiber(a).num_objects() {
            let ux = pf.obj(u, x);
            // Psi_{u,x} . r_{A',ux} - r_{A,x} . Phi_{u,x}
            eqs.add(slot(a2, ux), slot(a, x), &psi.cells[u][x], &phi.cells[u][x]);
        }
    }
    eqs.solutions()
}

/// Homogeneous equations `left . z_i - z_j . right = 0` in unknown blocks
/// `z_k in hom(s_k, t_k)`.
struct EquationSystem<'a, K> {
    c: &'a LinCategory<K>,
    blocks: &'a [(ObjId, ObjId)],
    offsets: Vec<usize>,
    total: usize,
    rows: Vec<Vec<K>>,
}

impl<'a, K: Scalar> EquationSystem<'a, K> {
    fn new(c: &'a LinCategory<K>, blocks: &'a [(ObjId, ObjId)]) -> Self {
        let mut offsets = Vec::new();
        let mut total = 0;
        for &(s, t) in blocks {
            offsets.push(total);
            total += c.hom_dim(s, t);
        }
        EquationSystem {
            c,
            blocks,
            offsets,
            total,
            rows: Vec::new(),
        }
    }

    fn add(&mut self, i: usize, j: usize, left: &[K], right: &[K]) {
        let (si, ti) = self.blocks[i];
        let (sj, tj) = self.blocks[j];
        // left: ti -> tj, right: si -> sj; both terms land in hom(si, tj)
        let post = self.c.post_composition(si, ti, tj, left);
        let pre = self.c.pre_composition(si, sj, tj, right);
        for r in 0..post.rows() {
            let mut row = vec![K::zero(); self.total];
            for k in 0..post.cols() {
                row[self.offsets[i] + k] = row[self.offsets[i] + k].clone() + post.get(r, k).clone();
            }
            for k in 0..pre.cols() {
                row[self.offsets[j] + k] = row[self.offsets[j] + k].clone() - pre.get(r, k).clone();
            }
            self.rows.push(row);
        }
    }

    fn solutions(&self) -> Subspace<K> {
        if self.rows.is_empty() {
            return Subspace::full(self.total);
        }
        let m = Matrix::from_rows(self.total, &self.rows);
        Subspace::span(self.total, &nullspace(&m))
    }
}

/// Checks the universal property of the colimit against `c` by exhaustive
/// enumeration of both sides (finite fields only).
pub fn verify_universal_property<K: Scalar>(
    colim: &ColimCategory<K>,
    c: &LinCategory<K>,
    bounds: &Bounds,
) -> Result<UniversalReport> {
    let pf = colim.pseudofunctor();
    let l = colim.category();
    let functors = enumerate_functors(l, c, bounds)?;
    let pseudonat = enumerate_pseudonat(pf, c, bounds)?;
    let cocone = colim.cocone();
    let mut report = UniversalReport {
        functors: functors.len(),
        pseudonat: pseudonat.len(),
        objects_bijective: true,
        round_trip: true,
        morphisms_bijective: true,
        counterexample: None,
    };
    let images: Vec<PseudoNatTrans<K>> = functors.iter().map(|g| colim.precompose_cocone(&cocone, g)).collect();
    let image_set: HashSet<&PseudoNatTrans<K>> = images.iter().collect();
    let enumerated: HashSet<&PseudoNatTrans<K>> = pseudonat.iter().collect();
    if image_set.len() != images.len() {
        report.objects_bijective = false;
        report.counterexample = Some("two functors restrict to the same pseudonatural transformation".into());
    }
    for (i, img) in images.iter().enumerate() {
        if validate_pseudonat(pf, c, img).is_err() || !enumerated.contains(img) {
            report.objects_bijective = false;
            report
                .counterexample
                .get_or_insert_with(|| format!("functor #{i} restricts outside the enumerated transformations"));
        }
    }
    for (i, phi) in pseudonat.iter().enumerate() {
        if !image_set.contains(phi) {
            report.objects_bijective = false;
            report
                .counterexample
                .get_or_insert_with(|| format!("pseudonatural transformation #{i} is not a restriction"));
        }
        match colim.induced_functor(c, phi) {
            Ok(g) if colim.precompose_cocone(&cocone, &g) == *phi => {}
            _ => {
                report.round_trip = false;
                report
                    .counterexample
                    .get_or_insert_with(|| format!("induced functor of transformation #{i} does not restrict back"));
            }
        }
    }
    for (i, g) in functors.iter().enumerate() {
        match colim.induced_functor(c, &images[i]) {
            Ok(h) if h == *g => {}
            _ => {
                report.round_trip = false;
                report
                    .counterexample
                    .get_or_insert_with(|| format!("functor #{i} is not induced by its restriction"));
            }
        }
    }
    for (i, g) in functors.iter().enumerate() {
        for (j, h) in functors.iter().enumerate() {
            let nat = nat_trans_space(l, c, g, h);
            let modif = modification_space(colim, c, &images[i], &images[j]);
            if nat != modif {
                report.morphisms_bijective = false;
                report.counterexample.get_or_insert_with(|| {
                    format!(
                        "functors #{i}, #{j}: {} natural transformations against {} modifications (dimensions)",
                        nat.dim(),
                        modif.dim()
                    )
                });
            }
        }
    }
    Ok(report)
}
