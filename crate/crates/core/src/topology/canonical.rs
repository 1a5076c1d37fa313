use super::cover::{generate_with, morphisms_into, CoverSystem, Topology};
use crate::error::{Bounds, Error, Result};
use crate::exactalg::Scalar;
use crate::lincat::{LinCategory, Morphism, ObjId};
use crate::sieves::{is_sheaf, sheaf_condition, sieve_lattice, Presheaf, SheafFailure, Sieve};

/// Why a sieve is not in the canonical topology: some representable fails
/// the sheaf condition along one of its pullbacks.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Exclusion<K> {
    pub sieve: Sieve<K>,
    pub along: Morphism<K>,
    pub representable: ObjId,
    pub failure: SheafFailure,
}

/// The canonical topology together with a witness for every sieve left out.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonicalTopology<K> {
    pub topology: Topology<K>,
    pub excluded: Vec<Exclusion<K>>,
}

fn exclusion<K: Scalar>(
    c: &LinCategory<K>,
    r: &Sieve<K>,
    representables: &[Presheaf<K>],
    bounds: &Bounds,
) -> Result<Option<Exclusion<K>>> {
    for b in 0..c.num_objects() {
        for g in morphisms_into(c, b, r.target(), bounds)? {
            let p = r.pullback(c, &g)?;
            for (x, rep) in representables.iter().enumerate() {
                if let Some(failure) = sheaf_condition(c, &p, rep) {
                    return Ok(Some(Exclusion {
                        sieve: r.clone(),
                        along: g,
                        representable: x,
                        failure,
                    }));
                }
            }
        }
    }
    Ok(None)
}

/// The largest topology for which every representable is a sheaf (finite
/// fields only).
///
/// A sieve is kept when every representable satisfies the sheaf condition
/// along every pullback of it. The kept sieves are then certified as a
/// topology; a failure there is reported as an error.
pub fn canonical_topology<K: Scalar>(c: &LinCategory<K>, bounds: &Bounds) -> Result<CanonicalTopology<K>> {
    let lattice = sieve_lattice(c, bounds)?;
    let representables: Vec<Presheaf<K>> = (0..c.num_objects()).map(|x| Presheaf::representable(c, x)).collect();
    let mut kept = CoverSystem::empty(c);
    let mut excluded = Vec::new();
    for sieves in &lattice {
        for r in sieves {
            match exclusion(c, r, &representables, bounds)? {
                Some(e) => excluded.push(e),
                None => {
                    kept.insert(r.clone());
                }
            }
        }
    }
    let report = super::cover::check_axioms_with(c, &kept, Some(&lattice), bounds)?;
    if let Some(v) = report.first_violation() {
        return Err(Error::invalid("canonical topology", v.to_string()));
    }
    Ok(CanonicalTopology {
        topology: Topology::certified(kept),
        excluded,
    })
}

/// First representable that is not a sheaf for `t`, with the failing cover.
pub fn subcanonical_failure<K: Scalar>(
    c: &LinCategory<K>,
    t: &CoverSystem<K>,
) -> Option<(ObjId, ObjId, Sieve<K>, SheafFailure)> {
    (0..c.num_objects()).find_map(|x| {
        is_sheaf(c, &Presheaf::representable(c, x), t)
            .failure
            .map(|(a, r, why)| (x, a, r, why))
    })
}

pub fn is_subcanonical<K: Scalar>(c: &LinCategory<K>, t: &CoverSystem<K>) -> bool {
    subcanonical_failure(c, t).is_none()
}

/// For one excluded sieve: the representable and cover that stop being a
/// sheaf once the sieve is adjoined and the topology regenerated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MaximalityWitness<K> {
    pub adjoined: Sieve<K>,
    pub representable: ObjId,
    pub cover: Sieve<K>,
}

/// Adjoins each sieve missing from `t`, closes, and looks for a
/// representable that is no longer a sheaf. Returns one witness per missing
/// sieve, or the first sieve whose adjunction keeps every representable a
/// sheaf.
pub fn check_maximality<K: Scalar>(
    c: &LinCategory<K>,
    t: &Topology<K>,
    bounds: &Bounds,
) -> Result<std::result::Result<Vec<MaximalityWitness<K>>, Sieve<K>>> {
    let lattice = sieve_lattice(c, bounds)?;
    let mut witnesses = Vec::new();
    for r in lattice.iter().flatten().filter(|r| !t.contains(r)) {
        let mut bigger = t.system().clone();
        bigger.insert(r.clone());
        let closed = generate_with(c, &bigger, &lattice, bounds)?;
        match subcanonical_failure(c, &closed) {
            Some((x, _, cover, _)) => witnesses.push(MaximalityWitness {
                adjoined: r.clone(),
                representable: x,
                cover,
            }),
            None => return Ok(Err(r.clone())),
        }
    }
    Ok(Ok(witnesses))
}
