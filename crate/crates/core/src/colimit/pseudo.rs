use std::collections::HashMap;

use super::{ArrowId, FilteredIndex};
use crate::error::{Error, Result};
use crate::exactalg::Scalar;
use crate::lincat::{validate_category, validate_functor, validate_nat_trans, LinCategory, LinFunctor, LinNatTrans, ObjId};

/// A pseudofunctor from a filtered index category into finite k-linear
/// categories.
///
/// `gamma(g, f)` is the coherence cell `F(g) F(f) => F(g f)` and `unit(a)` is
/// `id => F(id_a)`. Both are validated for naturality, invertibility and the
/// associativity and unit coherences on construction.
#[derive(Clone, Debug)]
pub struct PseudoFunctor<K> {
    index: FilteredIndex,
    fibers: Vec<LinCategory<K>>,
    transits: Vec<LinFunctor<K>>,
    // g * m + f for composable pairs: (cell, inverse)
    gamma: Vec<Option<(LinNatTrans<K>, LinNatTrans<K>)>>,
    units: Vec<(LinNatTrans<K>, LinNatTrans<K>)>,
    strict: bool,
}

fn violation(detail: String) -> Error {
    Error::invalid("pseudofunctor", detail)
}

impl<K: Scalar> PseudoFunctor<K> {
    pub fn new(
        index: FilteredIndex,
        fibers: Vec<LinCategory<K>>,
        transits: Vec<LinFunctor<K>>,
        gamma: HashMap<(ArrowId, ArrowId), LinNatTrans<K>>,
        units: Vec<LinNatTrans<K>>,
    ) -> Result<Self> {
        let m = index.num_arrows();
        let n = index.num_objects();
        if fibers.len() != n {
            return Err(violation(format!("{} fibers for {n} index objects", fibers.len())));
        }
        if transits.len() != m {
            return Err(violation(format!("{} transits for {m} index arrows", transits.len())));
        }
        if units.len() != n {
            return Err(violation(format!("{} unit cells for {n} index objects", units.len())));
        }
        for (a, c) in fibers.iter().enumerate() {
            validate_category(c).map_err(|v| violation(format!("fiber `{}`: {v}", index.object_name(a))))?;
        }
        for (u, t) in transits.iter().enumerate() {
            let arrow = index.arrow(u);
            validate_functor(t, &fibers[arrow.src], &fibers[arrow.dst])
                .map_err(|v| violation(format!("transit `{}`: {v}", arrow.name)))?;
        }
        let mut cells = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                if index.try_compose(g, f).is_none() {
                    continue;
                }
                let cell = gamma.get(&(g, f)).ok_or_else(|| {
                    violation(format!(
                        "missing coherence cell for (`{}`, `{}`)",
                        index.arrow(g).name,
                        index.arrow(f).name
                    ))
                })?;
                cells[g * m + f] = Some(cell.clone());
            }
        }
        let mut pf = PseudoFunctor {
            index,
            fibers,
            transits,
            gamma: Vec::new(),
            units: Vec::new(),
            strict: false,
        };
        pf.install_cells(cells, units)?;
        pf.check_coherence()?;
        Ok(pf)
    }

    /// A strict 2-functor: transits compose on the nose and send identities
    /// to identities; all cells are identities.
    pub fn strict(index: FilteredIndex, fibers: Vec<LinCategory<K>>, transits: Vec<LinFunctor<K>>) -> Result<Self> {
        let m = index.num_arrows();
        if transits.len() != m || fibers.len() != index.num_objects() {
            return Err(violation("fiber or transit count does not match the index".into()));
        }
        let mut gamma = HashMap::new();
        for g in 0..m {
            for f in 0..m {
                let Some(gf) = index.try_compose(g, f) else { continue };
                let comp = transits[g].after(&transits[f]);
                if comp != transits[gf] {
                    return Err(violation(format!(
                        "transits of `{}` and `{}` do not compose strictly",
                        index.arrow(g).name,
                        index.arrow(f).name
                    )));
                }
                let dst = &fibers[index.dst(g)];
                gamma.insert((g, f), LinNatTrans::identity(&comp, dst));
            }
        }
        let mut units = Vec::new();
        for a in 0..index.num_objects() {
            let t = &transits[index.identity(a)];
            if *t != LinFunctor::identity(&fibers[a]) {
                return Err(violation(format!(
                    "transit of the identity of `{}` is not the identity",
                    index.object_name(a)
                )));
            }
            units.push(LinNatTrans::identity(t, &fibers[a]));
        }
        let mut pf = Self::new(index, fibers, transits, gamma, units)?;
        pf.strict = true;
        Ok(pf)
    }

    fn install_cells(
        &mut self,
        cells: Vec<Option<LinNatTrans<K>>>,
        units: Vec<LinNatTrans<K>>,
    ) -> Result<()> {
        let m = self.index.num_arrows();
        let mut gamma = vec![None; m * m];
        for (gf_slot, cell) in cells.into_iter().enumerate() {
            let Some(cell) = cell else { continue };
            let (g, f) = (gf_slot / m, gf_slot % m);
            let gf = self.index.compose(g, f);
            let (a, c) = (self.index.src(f), self.index.dst(g));
            let lhs = self.transits[g].after(&self.transits[f]);
            let rhs = &self.transits[gf];
            let name = format!("({}, {})", self.index.arrow(g).name, self.index.arrow(f).name);
            validate_nat_trans(&cell, &lhs, rhs, &self.fibers[a], &self.fibers[c])
                .map_err(|v| violation(format!("coherence cell {name}: {v}")))?;
            let inv = cell
                .inverse(&lhs, rhs, &self.fibers[c])
                .ok_or_else(|| violation(format!("coherence cell {name} is not invertible")))?;
            gamma[gf_slot] = Some((cell, inv));
        }
        let mut us = Vec::with_capacity(units.len());
        for (a, cell) in units.into_iter().enumerate() {
            let id = LinFunctor::identity(&self.fibers[a]);
            let t = &self.transits[self.index.identity(a)];
            let name = self.index.object_name(a);
            validate_nat_trans(&cell, &id, t, &self.fibers[a], &self.fibers[a])
                .map_err(|v| violation(format!("unit cell at `{name}`: {v}")))?;
            let inv = cell
                .inverse(&id, t, &self.fibers[a])
                .ok_or_else(|| violation(format!("unit cell at `{name}` is not invertible")))?;
            us.push((cell, inv));
        }
        self.gamma = gamma;
        self.units = us;
        Ok(())
    }

    fn check_coherence(&self) -> Result<()> {
        let idx = &self.index;
        let m = idx.num_arrows();
        // gamma(h, g f) . F(h)(gamma(g, f)) == gamma(h g, f) . gamma(h, g)_{F(f) x}
        for f in 0..m {
            for g in 0..m {
                let Some(gf) = idx.try_compose(g, f) else { continue };
                for h in 0..m {
                    let Some(hg) = idx.try_compose(h, g) else { continue };
                    let (a, d) = (idx.src(f), idx.dst(h));
                    let fd = &self.fibers[d];
                    for x in 0..self.fibers[a].num_objects() {
                        let fx = self.obj(f, x);
                        let gfx = self.obj(g, fx);
                        let hgfx = self.obj(h, gfx);
                        let top = self.obj(idx.compose(h, gf), x);
                        let lhs = fd.compose(
                            hgfx,
                            self.obj(h, self.obj(gf, x)),
                            top,
                            self.gamma(h, gf, x),
                            &self.transits[h].apply(gfx, self.obj(gf, x), self.gamma(g, f, x)),
                        );
                        let rhs = fd.compose(
                            hgfx,
                            self.obj(hg, fx),
                            top,
                            self.gamma(hg, f, x),
                            self.gamma(h, g, fx),
                        );
                        if lhs != rhs {
                            return Err(violation(format!(
                                "associativity coherence fails for (`{}`, `{}`, `{}`) at `{}`",
                                idx.arrow(h).name,
                                idx.arrow(g).name,
                                idx.arrow(f).name,
                                self.fibers[a].object_name(x)
                            )));
                        }
                    }
                }
            }
        }
        for f in 0..m {
            let (a, b) = (idx.src(f), idx.dst(f));
            let (ia, ib) = (idx.identity(a), idx.identity(b));
            let fb = &self.fibers[b];
            for x in 0..self.fibers[a].num_objects() {
                let fx = self.obj(f, x);
                // gamma(f, id) . F(f)(unit_x) == id
                let right = fb.compose(
                    fx,
                    self.obj(f, self.obj(ia, x)),
                    fx,
                    self.gamma(f, ia, x),
                    &self.transits[f].apply(x, self.obj(ia, x), self.unit(a, x)),
                );
                // gamma(id, f) . unit_{F(f) x} == id
                let left = fb.compose(fx, self.obj(ib, fx), fx, self.gamma(ib, f, x), self.unit(b, fx));
                let name = |side: &str| {
                    violation(format!(
                        "{side} unit coherence fails for `{}` at `{}`",
                        idx.arrow(f).name,
                        self.fibers[a].object_name(x)
                    ))
                };
                if right != fb.identity(fx) {
                    return Err(name("right"));
                }
                if left != fb.identity(fx) {
                    return Err(name("left"));
                }
            }
        }
        Ok(())
    }

    pub fn index(&self) -> &FilteredIndex {
        &self.index
    }

    pub fn fiber(&self, a: usize) -> &LinCategory<K> {
        &self.fibers[a]
    }

    pub fn fibers(&self) -> &[LinCategory<K>] {
        &self.fibers
    }

    pub fn transit(&self, u: ArrowId) -> &LinFunctor<K> {
        &self.transits[u]
    }

    pub fn transits(&self) -> &[LinFunctor<K>] {
        &self.transits
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    /// `F(u)(x)`.
    pub fn obj(&self, u: ArrowId, x: ObjId) -> ObjId {
        self.transits[u].obj(x)
    }

    /// Component at `x` of `F(g) F(f) => F(g f)`.
    pub fn gamma(&self, g: ArrowId, f: ArrowId, x: ObjId) -> &[K] {
        let m = self.index.num_arrows();
        self.gamma[g * m + f].as_ref().expect("composable pair").0.component(x)
    }

    pub fn gamma_inv(&self, g: ArrowId, f: ArrowId, x: ObjId) -> &[K] {
        let m = self.index.num_arrows();
        self.gamma[g * m + f].as_ref().expect("composable pair").1.component(x)
    }

    pub fn gamma_cell(&self, g: ArrowId, f: ArrowId) -> &LinNatTrans<K> {
        let m = self.index.num_arrows();
        &self.gamma[g * m + f].as_ref().expect("composable pair").0
    }

    /// Component at `x` of `id => F(id_a)`.
    pub fn unit(&self, a: usize, x: ObjId) -> &[K] {
        self.units[a].0.component(x)
    }

    pub fn unit_inv(&self, a: usize, x: ObjId) -> &[K] {
        self.units[a].1.component(x)
    }

    pub fn unit_cell(&self, a: usize) -> &LinNatTrans<K> {
        &self.units[a].0
    }

    /// All coherence cells keyed by composable pair, for serialization.
    pub fn gamma_cells(&self) -> HashMap<(ArrowId, ArrowId), LinNatTrans<K>> {
        let m = self.index.num_arrows();
        self.gamma
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|(cell, _)| ((i / m, i % m), cell.clone())))
            .collect()
    }

    pub fn unit_cells(&self) -> Vec<LinNatTrans<K>> {
        self.units.iter().map(|(c, _)| c.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::IndexCategory;
    use super::*;
    use crate::exactalg::{Fp, Matrix};
    use crate::lincat::{builders, full_subcategory};
    use num_traits::One;

    type F3 = Fp<3>;

    fn two_chain() -> (FilteredIndex, Vec<LinCategory<F3>>, Vec<LinFunctor<F3>>) {
        let idx = FilteredIndex::certify(IndexCategory::chain(2).unwrap()).unwrap();
        let big = builders::path_category::<F3>(&["x", "y"], &[(0, 1)], None).unwrap();
        let (small, incl) = full_subcategory(&big, &[0]).unwrap();
        // arrows of the chain: id_A0, A0<=A1, id_A1
        let transits = vec![LinFunctor::identity(&small), incl, LinFunctor::identity(&big)];
        (idx, vec![small, big], transits)
    }

    #[test]
    fn strict_inclusion_chain_is_valid() {
        let (idx, fibers, transits) = two_chain();
        let pf = PseudoFunctor::strict(idx, fibers, transits).unwrap();
        assert!(pf.is_strict());
    }

    #[test]
    fn corrupted_unit_cell_is_pinpointed() {
        let (idx, fibers, transits) = two_chain();
        let pf = PseudoFunctor::strict(idx.clone(), fibers.clone(), transits.clone()).unwrap();
        let mut units = pf.unit_cells();
        let two = F3::one() + F3::one();
        units[0] = LinNatTrans::new(vec![vec![two]]);
        let err = PseudoFunctor::new(idx, fibers, transits, pf.gamma_cells(), units).unwrap_err();
        assert!(err.to_string().contains("unit coherence"), "{err}");
    }

    #[test]
    fn missing_cell_is_reported() {
        let (idx, fibers, transits) = two_chain();
        let pf = PseudoFunctor::strict(idx.clone(), fibers.clone(), transits.clone()).unwrap();
        let mut cells = pf.gamma_cells();
        cells.remove(&(1, 0));
        let err = PseudoFunctor::new(idx, fibers, transits, cells, pf.unit_cells()).unwrap_err();
        assert!(err.to_string().contains("missing coherence cell"), "{err}");
    }

    #[test]
    fn non_strict_transits_refused_by_strict_builder() {
        let (idx, fibers, mut transits) = two_chain();
        transits[2] = LinFunctor::new(
            vec![0, 1],
            (0..4)
                .map(|ab| {
                    let d = fibers[1].hom_dim(ab / 2, ab % 2);
                    let mut m = Matrix::identity(d);
                    if ab == 1 {
                        m.set(0, 0, F3::one() + F3::one());
                    }
                    m
                })
                .collect(),
        )
        .unwrap();
        assert!(PseudoFunctor::strict(idx, fibers, transits).is_err());
    }
}
