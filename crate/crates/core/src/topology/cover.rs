use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

use crate::error::{Bounds, Error, Result};
use crate::exactalg::{projective_points, unit_vector, Scalar};
use crate::lincat::{LinCategory, Morphism, ObjId};
use crate::sieves::{sieve_lattice, Sieve};

/// A finite set of covering sieves per object.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CoverSystem<K> {
    covers: Vec<BTreeSet<Sieve<K>>>,
}

impl<K: Scalar> CoverSystem<K> {
    /// Validates every sieve against `c` and files it under its target.
    pub fn new(c: &LinCategory<K>, sieves: impl IntoIterator<Item = Sieve<K>>) -> Result<Self> {
        let mut covers = vec![BTreeSet::new(); c.num_objects()];
        for s in sieves {
            let s = Sieve::new(c, s.target(), s.components().to_vec())?;
            covers[s.target()].insert(s);
        }
        Ok(CoverSystem { covers })
    }

    pub fn empty(c: &LinCategory<K>) -> Self {
        CoverSystem {
            covers: vec![BTreeSet::new(); c.num_objects()],
        }
    }

    /// Only the maximal sieves.
    pub fn minimal(c: &LinCategory<K>) -> Self {
        let mut s = Self::empty(c);
        for a in 0..c.num_objects() {
            s.insert(Sieve::maximal(c, a));
        }
        s
    }

    /// Every sieve (finite fields only).
    pub fn discrete(c: &LinCategory<K>, bounds: &Bounds) -> Result<Self> {
        Ok(CoverSystem {
            covers: sieve_lattice(c, bounds)?.into_iter().map(|l| l.into_iter().collect()).collect(),
        })
    }

    pub fn num_objects(&self) -> usize {
        self.covers.len()
    }

    pub fn covers(&self, a: ObjId) -> impl Iterator<Item = &Sieve<K>> {
        self.covers[a].iter()
    }

    pub fn num_covers(&self) -> usize {
        self.covers.iter().map(BTreeSet::len).sum()
    }

    pub fn contains(&self, s: &Sieve<K>) -> bool {
        self.covers[s.target()].contains(s)
    }

    /// Adds a sieve; returns whether it was new.
    pub fn insert(&mut self, s: Sieve<K>) -> bool {
        let a = s.target();
        self.covers[a].insert(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Sieve<K>> {
        self.covers.iter().flatten()
    }

    pub fn is_subsystem_of(&self, other: &CoverSystem<K>) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    pub fn union(&self, other: &CoverSystem<K>) -> CoverSystem<K> {
        let mut out = self.clone();
        for s in other.iter() {
            out.insert(s.clone());
        }
        out
    }

    /// Whether some stored cover on `a` lies inside `s`.
    pub fn has_cover_inside(&self, s: &Sieve<K>) -> bool {
        self.covers(s.target()).any(|r| r.is_subsieve_of(s))
    }
}

/// A violated axiom with its witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AxiomViolation<K> {
    /// The maximal sieve on the object is not a cover.
    Id { object: ObjId },
    /// The pullback of `cover` along `along` is not a cover.
    Pb { cover: Sieve<K>, along: Morphism<K> },
    /// `sieve` is not a cover although its pullback along every spanning
    /// element of the cover `via` is.
    Glue { sieve: Sieve<K>, via: Sieve<K> },
}

impl<K: Scalar> fmt::Display for AxiomViolation<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::Id { object } => write!(f, "(Id) the maximal sieve on #{object} is not a cover"),
            AxiomViolation::Pb { cover, along } => write!(
                f,
                "(Pb) pulling {cover:?} back along #{} -> #{} {:?} gives a non-cover",
                along.src, along.dst, along.coords
            ),
            AxiomViolation::Glue { sieve, via } => {
                write!(f, "(Glue) {sieve:?} is locally covering over {via:?} but not a cover")
            }
        }
    }
}

/// Verdicts for (Id), (Pb) and (Glue), each with its first witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AxiomReport<K> {
    pub id: Option<AxiomViolation<K>>,
    pub pb: Option<AxiomViolation<K>>,
    pub glue: Option<AxiomViolation<K>>,
    /// False when quantifiers could only be sampled (infinite fields).
    pub exhaustive: bool,
}

impl<K> AxiomReport<K> {
    pub fn holds(&self) -> bool {
        self.id.is_none() && self.pb.is_none() && self.glue.is_none()
    }

    pub fn first_violation(&self) -> Option<&AxiomViolation<K>> {
        self.id.as_ref().or(self.pb.as_ref()).or(self.glue.as_ref())
    }
}

/// Every morphism `b -> a` up to a nonzero scalar, zero included, over a
/// finite field; the basis over an infinite one.
pub(crate) fn morphisms_into<K: Scalar>(
    c: &LinCategory<K>,
    b: ObjId,
    a: ObjId,
    bounds: &Bounds,
) -> Result<Vec<Morphism<K>>> {
    let d = c.hom_dim(b, a);
    let coords = if K::order().is_some() {
        let mut v = vec![vec![K::zero(); d]];
        v.extend(projective_points::<K>(d, bounds)?);
        v
    } else {
        (0..d).map(|i| unit_vector(d, i)).collect()
    };
    Ok(coords.into_iter().map(|v| Morphism::new(b, a, v)).collect())
}

/// Candidate sieves for (Glue) over an infinite field: those generated by
/// sets of basis morphisms.
fn basis_generated_sieves<K: Scalar>(c: &LinCategory<K>, a: ObjId, bounds: &Bounds) -> Result<Vec<Sieve<K>>> {
    let gens: Vec<Morphism<K>> = (0..c.num_objects())
        .flat_map(|b| (0..c.hom_dim(b, a)).map(move |i| Morphism::new(b, a, c.basis_vector(b, a, i))))
        .collect();
    if gens.len() >= usize::BITS as usize || (1usize << gens.len()) > bounds.max_sieves {
        return Err(Error::bound(
            format!("basis-generated sieves on `{}`", c.object_name(a)),
            1u128 << gens.len().min(127),
            bounds.max_sieves as u128,
        ));
    }
    let mut out = BTreeSet::new();
    for mask in 0..(1usize << gens.len()) {
        let fam: Vec<Morphism<K>> = (0..gens.len()).filter(|i| mask >> i & 1 == 1).map(|i| gens[i].clone()).collect();
        out.insert(Sieve::generated(c, a, &fam)?);
    }
    Ok(out.into_iter().collect())
}

/// Whether every pullback of `r` along a spanning element of `s` is a cover.
///
/// Spanning elements suffice: once (Id) and (Pb) hold, covers are closed
/// under finite intersections and enlargement, and
/// `(sum_i l_i g_i)^-1 R` contains `the intersection of the g_i^-1 R`.
fn locally_covering<K: Scalar>(c: &LinCategory<K>, t: &CoverSystem<K>, r: &Sieve<K>, s: &Sieve<K>) -> bool {
    s.spanning_morphisms()
        .iter()
        .all(|g| t.contains(&r.pullback(c, g).expect("g ends at the target")))
}

pub(crate) fn check_axioms_with<K: Scalar>(
    c: &LinCategory<K>,
    t: &CoverSystem<K>,
    lattice: Option<&[Vec<Sieve<K>>]>,
    bounds: &Bounds,
) -> Result<AxiomReport<K>> {
    let n = c.num_objects();
    if t.num_objects() != n {
        return Err(Error::DimensionMismatch(format!(
            "cover system on {} objects, category has {n}",
            t.num_objects()
        )));
    }
    let finite = K::order().is_some();
    let mut report = AxiomReport {
        id: None,
        pb: None,
        glue: None,
        exhaustive: finite,
    };
    report.id = (0..n)
        .find(|&a| !t.contains(&Sieve::maximal(c, a)))
        .map(|object| AxiomViolation::Id { object });
    'pb: for a in 0..n {
        for cover in t.covers(a) {
            for b in 0..n {
                for g in morphisms_into(c, b, a, bounds)? {
                    if !t.contains(&cover.pullback(c, &g)?) {
                        report.pb = Some(AxiomViolation::Pb {
                            cover: cover.clone(),
                            along: g,
                        });
                        break 'pb;
                    }
                }
            }
        }
    }
    let owned;
    let lattice = match lattice {
        Some(l) => l,
        None if finite => {
            owned = sieve_lattice(c, bounds)?;
            &owned[..]
        }
        None => {
            owned = (0..n).map(|a| basis_generated_sieves(c, a, bounds)).collect::<Result<Vec<_>>>()?;
            &owned[..]
        }
    };
    'glue: for a in 0..n {
        for r in lattice[a].iter().filter(|r| !t.contains(r)) {
            for s in t.covers(a) {
                if locally_covering(c, t, r, s) {
                    report.glue = Some(AxiomViolation::Glue {
                        sieve: r.clone(),
                        via: s.clone(),
                    });
                    break 'glue;
                }
            }
        }
    }
    Ok(report)
}

/// Checks (Id) per object, (Pb) per cover and morphism, and (Glue) per
/// candidate sieve and cover.
///
/// Over a finite field every quantifier is exhaustive. Over the rationals
/// (Pb) runs over basis morphisms and (Glue) over sieves generated by basis
/// morphisms, and the report is marked non-exhaustive.
pub fn check_axioms<K: Scalar>(c: &LinCategory<K>, t: &CoverSystem<K>, bounds: &Bounds) -> Result<AxiomReport<K>> {
    check_axioms_with(c, t, None, bounds)
}

/// A cover system certified to satisfy (Id), (Pb) and (Glue).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Topology<K> {
    system: CoverSystem<K>,
}

impl<K: Scalar> Topology<K> {
    /// Certifies `system`; fails with the first violated axiom.
    pub fn new(c: &LinCategory<K>, system: CoverSystem<K>, bounds: &Bounds) -> Result<Self> {
        let report = check_axioms(c, &system, bounds)?;
        if let Some(v) = report.first_violation() {
            return Err(Error::invalid("topology", v.to_string()));
        }
        Ok(Topology { system })
    }

    pub(crate) fn certified(system: CoverSystem<K>) -> Self {
        Topology { system }
    }

    pub fn minimal(c: &LinCategory<K>) -> Self {
        Topology {
            system: CoverSystem::minimal(c),
        }
    }

    pub fn discrete(c: &LinCategory<K>, bounds: &Bounds) -> Result<Self> {
        Ok(Topology {
            system: CoverSystem::discrete(c, bounds)?,
        })
    }

    pub fn system(&self) -> &CoverSystem<K> {
        &self.system
    }

    pub fn into_system(self) -> CoverSystem<K> {
        self.system
    }
}

impl<K> Deref for Topology<K> {
    type Target = CoverSystem<K>;

    fn deref(&self) -> &CoverSystem<K> {
        &self.system
    }
}

/// The least topology containing `s` (finite fields only).
///
/// Alternates closure under pullbacks and under gluing over the enumerated
/// sieve lattice until nothing changes.
pub fn generate_topology<K: Scalar>(c: &LinCategory<K>, s: &CoverSystem<K>, bounds: &Bounds) -> Result<Topology<K>> {
    let lattice = sieve_lattice(c, bounds)?;
    generate_with(c, s, &lattice, bounds)
}

pub(crate) fn generate_with<K: Scalar>(
    c: &LinCategory<K>,
    s: &CoverSystem<K>,
    lattice: &[Vec<Sieve<K>>],
    bounds: &Bounds,
) -> Result<Topology<K>> {
    let n = c.num_objects();
    let mut t = s.union(&CoverSystem::minimal(c));
    let morphisms: Vec<Vec<Vec<Morphism<K>>>> = (0..n)
        .map(|a| (0..n).map(|b| morphisms_into(c, b, a, bounds)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    loop {
        let mut worklist: Vec<Sieve<K>> = t.iter().cloned().collect();
        while let Some(r) = worklist.pop() {
            for gs in &morphisms[r.target()] {
                for g in gs {
                    let p = r.pullback(c, g)?;
                    if t.insert(p.clone()) {
                        worklist.push(p);
                    }
                }
            }
        }
        let mut glued = Vec::new();
        for a in 0..n {
            for r in lattice[a].iter().filter(|r| !t.contains(r)) {
                if t.covers(a).any(|s| locally_covering(c, &t, r, s)) {
                    glued.push(r.clone());
                }
            }
        }
        if glued.is_empty() {
            break;
        }
        for r in glued {
            t.insert(r);
        }
    }
    let report = check_axioms_with(c, &t, Some(lattice), bounds)?;
    if let Some(v) = report.first_violation() {
        return Err(Error::invalid("generated topology", v.to_string()));
    }
    Ok(Topology { system: t })
}
