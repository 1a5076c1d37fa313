//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the verdicts always reach the output;
//! the process exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use lincolim::colimit::{
    union_colimit_equivalence, verify_universal_property, ColimCategory, ColimObject, HomotopyClass, IndexCategory,
    Premorphism, PseudoFunctor,
};
use lincolim::exactalg::{all_vectors, axpy, enumerate_subspaces, scale, Scalar, Subspace};
use lincolim::lincat::{
    builders, enumerate_functors, full_subcategory, validate_category, validate_functor, LinCategory, LinFunctor,
    Morphism,
};
use lincolim::sieves::{enumerate_presheaves, enumerate_sieves, is_sheaf, sieve_lattice, Presheaf, Sieve};
use lincolim::sitecat::{
    cocone_presentations, equalize_presentations, verify_site_colimit, AmbientCategory, PresentationMorphism,
    SitePresentation,
};
use lincolim::topology::{
    canonical_topology, check_axioms, check_lc, check_maximality, check_tensor_lc, generate_topology,
    is_bimodule_sheaf, tensor_site, CoverSystem, Site, Topology,
};
use lincolim::{Bounds, Error, F2, F3};
use num_traits::{One, Zero};
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn bounds() -> Bounds {
    Bounds::default()
}

fn vectors<K: Scalar>(n: usize) -> Vec<Vec<K>> {
    all_vectors::<K>(n, &bounds()).unwrap()
}

fn all_morphisms<K: Scalar>(c: &LinCategory<K>, a: usize, b: usize) -> Vec<Morphism<K>> {
    vectors::<K>(c.hom_dim(a, b)).into_iter().map(|v| Morphism::new(a, b, v)).collect()
}

fn add<K: Scalar>(a: &[K], b: &[K]) -> Vec<K> {
    axpy(a, &K::one(), b)
}

fn space_size<K: Scalar>(dim: usize) -> u128 {
    (K::order().unwrap() as u128).saturating_pow(dim as u32)
}

// ---------------------------------------------------------------------------
// homotopy of premorphisms

/// Every premorphism `x -> y` if there are few, otherwise random ones with
/// chains of pushes so that homotopic pairs are well represented.
fn premorphism_pool<K: Scalar>(
    rng: &mut TestRng,
    pf: &PseudoFunctor<K>,
    x: ColimObject,
    y: ColimObject,
) -> (Vec<Premorphism<K>>, bool) {
    let mut total = 0u128;
    for (u, v) in pf.cospans(x.index, y.index) {
        let c = pf.index().dst(u);
        total += space_size::<K>(pf.fiber(c).hom_dim(pf.obj(u, x.obj), pf.obj(v, y.obj)));
    }
    let mut pool = Vec::new();
    if total <= 40 {
        for (u, v) in pf.cospans(x.index, y.index) {
            let c = pf.index().dst(u);
            for f in vectors::<K>(pf.fiber(c).hom_dim(pf.obj(u, x.obj), pf.obj(v, y.obj))) {
                pool.push(Premorphism { src: x, dst: y, u, v, f });
            }
        }
        return (pool, true);
    }
    for _ in 0..8 {
        let p = random_premorphism(rng, pf, x, y);
        let q = random_push(rng, pf, &p);
        let r = random_push(rng, pf, &q);
        pool.extend([p, q, r]);
    }
    (pool, false)
}

struct HomotopyInstance<K> {
    colim: ColimCategory<K>,
    pools: Vec<Vec<Premorphism<K>>>,
    exhaustive: usize,
}

/// The deterministic instance family shared by the first two criteria.
fn homotopy_instances<K: Scalar>(seed: u64, count: usize, mut visit: impl FnMut(HomotopyInstance<K>) -> Result<(), String>) -> Result<(), String> {
    let mut rng = rng(seed);
    for _ in 0..count {
        let pf = random_pseudofunctor::<K>(&mut rng, 3);
        let colim = ColimCategory::build(pf.clone()).map_err(|e| e.to_string())?;
        let objs = pf.colim_objects();
        let mut pools = Vec::new();
        let mut exhaustive = 0;
        for _ in 0..3 {
            let x = objs[rng.gen_range(0..objs.len())];
            let y = objs[rng.gen_range(0..objs.len())];
            let (pool, all) = premorphism_pool(&mut rng, &pf, x, y);
            exhaustive += usize::from(all);
            pools.push(pool);
        }
        visit(HomotopyInstance { colim, pools, exhaustive })?;
    }
    Ok(())
}

fn relation_matrix<K: Scalar>(pf: &PseudoFunctor<K>, pool: &[Premorphism<K>]) -> Vec<Vec<bool>> {
    pool.iter()
        .map(|p| pool.iter().map(|q| pf.are_homotopic(p, q).unwrap()).collect())
        .collect()
}

fn equivalence_relation<K: Scalar>(seed: u64, count: usize) -> Result<(usize, usize, usize), String> {
    let (mut pairs, mut triples, mut exhaustive) = (0, 0, 0);
    homotopy_instances::<K>(seed, count, |inst| {
        let pf = inst.colim.pseudofunctor();
        exhaustive += inst.exhaustive;
        for pool in &inst.pools {
            let rel = relation_matrix(pf, pool);
            let n = pool.len();
            for i in 0..n {
                ensure!(rel[i][i], "not reflexive at {:?}", pool[i]);
                for j in 0..n {
                    ensure!(rel[i][j] == rel[j][i], "not symmetric at {:?}, {:?}", pool[i], pool[j]);
                    pairs += 1;
                    if !rel[i][j] {
                        continue;
                    }
                    for k in 0..n {
                        triples += 1;
                        ensure!(!rel[j][k] || rel[i][k], "not transitive at {:?}, {:?}, {:?}", pool[i], pool[j], pool[k]);
                    }
                }
            }
        }
        Ok(())
    })?;
    Ok((pairs, triples, exhaustive))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (p2, t2, e2) = equivalence_relation::<F2>(1001, 100)?;
    let (p3, t3, e3) = equivalence_relation::<F3>(1002, 100)?;
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(60), "took {:.1}s", elapsed.as_secs_f64());
    Ok(format!(
        "200 instances (100 over F_2, 100 over F_3), {} pairs, {} transitivity triples, {} exhaustive pools, {:.1}s",
        p2 + p3,
        t2 + t3,
        e2 + e3,
        elapsed.as_secs_f64()
    ))
}

fn quotient_agreement<K: Scalar>(seed: u64, count: usize) -> Result<(usize, usize), String> {
    let (mut pairs, mut homotopic) = (0, 0);
    homotopy_instances::<K>(seed, count, |inst| {
        let colim = &inst.colim;
        let pf = colim.pseudofunctor();
        for pool in &inst.pools {
            let classes: Vec<HomotopyClass<K>> = pool.iter().map(|p| colim.class_of(p)).collect();
            for (i, p) in pool.iter().enumerate() {
                for (j, q) in pool.iter().enumerate() {
                    let h = pf.are_homotopic(p, q).unwrap();
                    ensure!(h == colim.same_class(p, q), "homotopy and quotient membership differ on {p:?}, {q:?}");
                    ensure!(h == (classes[i] == classes[j]), "homotopy and quotient coordinates differ on {p:?}, {q:?}");
                    pairs += 1;
                    homotopic += usize::from(h && i != j);
                }
            }
        }
        Ok(())
    })?;
    Ok((pairs, homotopic))
}

fn criterion_2() -> Outcome {
    let (p2, h2) = quotient_agreement::<F2>(1001, 100)?;
    let (p3, h3) = quotient_agreement::<F3>(1002, 100)?;
    ensure!(h2 > 0 && h3 > 0, "no distinct homotopic pairs were exercised");
    Ok(format!("{} pairs agree, {} of them distinct and homotopic", p2 + p3, h2 + h3))
}

// ---------------------------------------------------------------------------
// linearity of the colimit

fn module_axioms(dim: usize) -> Result<usize, String> {
    let vs = vectors::<F2>(dim);
    let scalars = F2::elements().unwrap();
    let zero = vec![F2::zero(); dim];
    let mut checks = 0;
    for a in &vs {
        ensure!(add(a, &zero) == *a, "zero is not neutral");
        ensure!(add(a, &scale(&-F2::one(), a)) == zero, "no additive inverse");
        ensure!(scale(&F2::one(), a) == *a, "1 does not act trivially");
        for b in &vs {
            ensure!(add(a, b) == add(b, a), "addition does not commute");
            for c in &vs {
                ensure!(add(&add(a, b), c) == add(a, &add(b, c)), "addition is not associative");
                checks += 1;
            }
            for l in &scalars {
                ensure!(scale(l, &add(a, b)) == add(&scale(l, a), &scale(l, b)), "scaling does not distribute");
            }
        }
        for l in &scalars {
            for m in &scalars {
                ensure!(scale(&(l.clone() * m.clone()), a) == scale(l, &scale(m, a)), "scaling is not associative");
                ensure!(
                    scale(&(l.clone() + m.clone()), a) == add(&scale(l, a), &scale(m, a)),
                    "scalar addition does not distribute"
                );
            }
        }
    }
    Ok(checks)
}

fn linear_colimit(colim: &ColimCategory<F2>) -> Result<(usize, usize), String> {
    let pf = colim.pseudofunctor();
    let l = colim.category();
    validate_category(l).map_err(|v| format!("colimit fails validation: {v:?}"))?;
    let n = l.num_objects();
    let scalars = F2::elements().unwrap();
    let (mut axioms, mut bilinear) = (0, 0);
    for a in 0..n {
        for b in 0..n {
            let h = colim.hom_quotient(a, b);
            axioms += module_axioms(h.dim())?;
            // the quotient map V -> hom is linear, onto, with kernel W
            if h.ambient_dim() <= 8 {
                let vs = vectors::<F2>(h.ambient_dim());
                for v in &vs {
                    let cv = h.coordinates_of(v);
                    ensure!(cv.iter().all(|x| x.is_zero()) == h.relations().contains(v), "kernel is not W");
                    for w in &vs {
                        ensure!(h.coordinates_of(&add(v, w)) == add(&cv, &h.coordinates_of(w)), "quotient map is not additive");
                    }
                }
            }
            for c in vectors::<F2>(h.dim()) {
                let class = HomotopyClass { src: a, dst: b, coords: c };
                ensure!(colim.class_of(&colim.representative(&class)) == class, "representative has another class");
            }
            let (x, y) = (colim.tag(a), colim.tag(b));
            let basis = pf.basis_premorphisms(x, y);
            for p in &basis {
                for q in &basis {
                    for lam in &scalars {
                        let sum = pf.linear_combination(p, lam, q).map_err(|e| e.to_string())?;
                        let expected = axpy(&colim.class_of(p).coords, lam, &colim.class_of(q).coords);
                        ensure!(colim.class_of(&sum).coords == expected, "sum of classes is not the class of the sum");
                    }
                }
            }
            // composition is bilinear and induced by composing premorphisms
            for c in 0..n {
                let (dab, dbc) = (l.hom_dim(a, b), l.hom_dim(b, c));
                if space_size::<F2>(2 * dab + 2 * dbc) <= 1 << 12 {
                    let fs = vectors::<F2>(dab);
                    let gs = vectors::<F2>(dbc);
                    for f in &fs {
                        for f2 in &fs {
                            for g in &gs {
                                for g2 in &gs {
                                    for lam in &scalars {
                                        let left = l.compose(a, b, c, &axpy(g, lam, g2), f);
                                        let split = axpy(&l.compose(a, b, c, g, f), lam, &l.compose(a, b, c, g2, f));
                                        ensure!(left == split, "composition is not linear in the left factor");
                                        let right = l.compose(a, b, c, g, &axpy(f, lam, f2));
                                        let split = axpy(&l.compose(a, b, c, g, f), lam, &l.compose(a, b, c, g, f2));
                                        ensure!(right == split, "composition is not linear in the right factor");
                                        bilinear += 1;
                                    }
                                }
                            }
                        }
                    }
                }
                let z = colim.tag(c);
                for m1 in &basis {
                    for m2 in pf.basis_premorphisms(y, z) {
                        let composite = pf.compose(&m2, m1).map_err(|e| e.to_string())?;
                        let expected = l.compose(a, b, c, &colim.class_of(&m2).coords, &colim.class_of(m1).coords);
                        ensure!(colim.class_of(&composite).coords == expected, "composition is not induced by premorphisms");
                    }
                }
            }
        }
    }
    Ok((axioms, bilinear))
}

fn criterion_3() -> Outcome {
    let mut rng = rng(1003);
    let (mut axioms, mut bilinear) = (0, 0);
    let count = 40;
    for _ in 0..count {
        let pf = random_pseudofunctor::<F2>(&mut rng, 3);
        let colim = ColimCategory::build(pf).map_err(|e| e.to_string())?;
        let (a, b) = linear_colimit(&colim)?;
        axioms += a;
        bilinear += b;
    }
    Ok(format!("{count} colimits over F_2 validate; {axioms} associativity triples, {bilinear} bilinearity cases"))
}

// ---------------------------------------------------------------------------
// universal property

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let limit = Bounds {
        max_functors: 9_999,
        ..Bounds::default()
    };
    let mut rng = rng(1004);
    let (mut done, mut skipped, mut largest) = (0, 0, 0);
    let mut attempts = 0;
    while done < 12 {
        attempts += 1;
        ensure!(attempts < 2000, "only {done} instances within the enumeration bound");
        let pf = random_pseudofunctor::<F2>(&mut rng, 2);
        let target = random_fiber::<F2>(&mut rng, 2, &["p", "q"]);
        let colim = ColimCategory::build(pf).map_err(|e| e.to_string())?;
        match verify_universal_property(&colim, &target, &limit) {
            Ok(r) => {
                ensure!(r.holds(), "universal property fails: {r:?}");
                ensure!(r.functors == r.pseudonat, "{} functors but {} pseudonatural transformations", r.functors, r.pseudonat);
                largest = largest.max(r.functors);
                done += 1;
            }
            Err(Error::BoundExceeded { .. }) => skipped += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(300), "took {:.1}s", elapsed.as_secs_f64());
    Ok(format!(
        "{done} exact bijections (largest side {largest}), {skipped} instances over 10^4 candidates skipped, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

// ---------------------------------------------------------------------------
// unions of full subcategories

fn criterion_5() -> Outcome {
    let mut rng = rng(1005);
    let names = ["w", "x", "y", "z"];
    let count = 24;
    let mut largest = 0;
    for _ in 0..count {
        let c = random_fiber::<F2>(&mut rng, 4, &names);
        let order = IndexCategory::chain(rng.gen_range(1..=4)).unwrap();
        let subsets = nested_subsets(&mut rng, &order, c.num_objects());
        let u = union_colimit_equivalence(&c, order, &subsets, &bounds()).map_err(|e| e.to_string())?;
        let r = &u.report;
        ensure!(r.essentially_surjective && r.full && r.faithful && r.functor_valid, "{r:?} on subsets {subsets:?}");
        // independently: phi is a functor, hom dimensions match, every object is hit
        let l = u.colimit.category();
        validate_functor(&u.phi, l, &c).map_err(|v| format!("{v:?}"))?;
        for a in 0..l.num_objects() {
            for b in 0..l.num_objects() {
                ensure!(l.hom_dim(a, b) == c.hom_dim(u.phi.obj(a), u.phi.obj(b)), "hom dimension differs");
            }
        }
        let hit: BTreeSet<usize> = (0..l.num_objects()).map(|a| u.phi.obj(a)).collect();
        ensure!(hit.len() == c.num_objects(), "objects missed by phi");
        largest = largest.max(l.num_objects());
    }
    Ok(format!("{count} chains over F_2 give equivalences (largest colimit has {largest} objects)"))
}

// ---------------------------------------------------------------------------
// sieves

/// Every sieve on `a` by filtering all tuples of component subspaces.
fn brute_force_lattice(c: &LinCategory<F2>, a: usize) -> Vec<Sieve<F2>> {
    let per: Vec<Vec<Subspace<F2>>> = (0..c.num_objects())
        .map(|x| enumerate_subspaces(c.hom_dim(x, a), &bounds()).unwrap())
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; per.len()];
    loop {
        let comps: Vec<Subspace<F2>> = idx.iter().enumerate().map(|(x, &i)| per[x][i].clone()).collect();
        if let Ok(s) = Sieve::new(c, a, comps) {
            out.push(s);
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < per[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    out.sort();
    out
}

fn sieve_categories(rng: &mut TestRng, random: usize) -> Vec<LinCategory<F2>> {
    let mut cats: Vec<LinCategory<F2>> =
        named_categories().into_iter().map(|(_, c)| c).filter(|c| c.total_hom_dim() <= 6).collect();
    cats.push(builders::truncated_polynomial("x", 4).unwrap());
    cats.push(builders::path_category(&["x", "y", "z"], &[(0, 1), (1, 2)], Some(2)).unwrap());
    cats.push(builders::incidence_category(&["x", "y", "z"], &[(0, 1), (0, 2), (1, 2)]).unwrap());
    assert!(cats.iter().all(|c| c.total_hom_dim() <= 6));
    while cats.len() < random {
        let c = random_fiber::<F2>(rng, 3, &["x", "y", "z"]);
        if c.total_hom_dim() <= 6 {
            cats.push(c);
        }
    }
    cats
}

fn criterion_6() -> Outcome {
    let mut rng = rng(1006);
    let cats = sieve_categories(&mut rng, 30);
    let (mut pullbacks, mut families) = (0, 0);
    for c in &cats {
        let n = c.num_objects();
        for a in 0..n {
            let lattice = brute_force_lattice(c, a);
            ensure!(enumerate_sieves(c, a, &bounds()).unwrap() == lattice, "sieve lattice differs from brute force");
            for r in &lattice {
                ensure!(r.pullback(c, &c.identity_morphism(a)).unwrap() == *r, "id^-1 R differs from R");
                for a1 in 0..n {
                    for g in all_morphisms(c, a1, a) {
                        let gr = r.pullback(c, &g).unwrap();
                        for a2 in 0..n {
                            for h in all_morphisms(c, a2, a1) {
                                let gh = c.compose_morphisms(&g, &h).unwrap();
                                ensure!(r.pullback(c, &gh).unwrap() == gr.pullback(c, &h).unwrap(), "(g h)^-1 R differs");
                                pullbacks += 1;
                            }
                        }
                    }
                }
            }
            // every family of at most two morphisms into a
            let into: Vec<Morphism<F2>> = (0..n).flat_map(|x| all_morphisms(c, x, a)).collect();
            let mut fams: Vec<Vec<Morphism<F2>>> = vec![Vec::new()];
            for (i, f) in into.iter().enumerate() {
                fams.push(vec![f.clone()]);
                for g in &into[i + 1..] {
                    fams.push(vec![f.clone(), g.clone()]);
                }
            }
            for fam in fams {
                let gen = Sieve::generated(c, a, &fam).unwrap();
                ensure!(lattice.contains(&gen), "generated sieve is not in the lattice");
                ensure!(fam.iter().all(|m| gen.contains(m)), "generated sieve misses a generator");
                let least = lattice.iter().filter(|s| fam.iter().all(|m| s.contains(m))).all(|s| gen.is_subsieve_of(s));
                ensure!(least, "generated sieve is not the least one containing {fam:?}");
                families += 1;
            }
        }
    }
    Ok(format!(
        "{} categories with total hom dimension <= 6; {pullbacks} pullback composites, {families} generating families",
        cats.len()
    ))
}

// ---------------------------------------------------------------------------
// canonical topology

/// The three axioms straight from their definitions, over every morphism.
fn is_topology_by_definition(c: &LinCategory<F2>, covers: &BTreeSet<Sieve<F2>>) -> bool {
    let n = c.num_objects();
    if (0..n).any(|a| !covers.contains(&Sieve::maximal(c, a))) {
        return false;
    }
    for r in covers {
        for b in 0..n {
            for g in all_morphisms(c, b, r.target()) {
                if !covers.contains(&r.pullback(c, &g).unwrap()) {
                    return false;
                }
            }
        }
    }
    let sieves: Vec<Sieve<F2>> = sieve_lattice(c, &bounds()).unwrap().into_iter().flatten().collect();
    for s in covers {
        for r in sieves.iter().filter(|r| r.target() == s.target() && !covers.contains(*r)) {
            let locally = (0..n).all(|b| {
                all_morphisms(c, b, s.target())
                    .into_iter()
                    .filter(|g| s.contains(g))
                    .all(|g| covers.contains(&r.pullback(c, &g).unwrap()))
            });
            if locally {
                return false;
            }
        }
    }
    true
}

fn representables_are_sheaves(c: &LinCategory<F2>, t: &CoverSystem<F2>) -> bool {
    (0..c.num_objects()).all(|x| is_sheaf(c, &Presheaf::representable(c, x), t).is_sheaf())
}

fn criterion_7() -> Outcome {
    let b = bounds();
    let cats = named_categories::<F2>();
    let mut excluded = 0;
    for (name, c) in &cats {
        let can = canonical_topology(c, &b).map_err(|e| e.to_string())?;
        ensure!(check_axioms(c, &can.topology, &b).unwrap().holds(), "{name}: axioms fail");
        let set: BTreeSet<Sieve<F2>> = can.topology.iter().cloned().collect();
        ensure!(is_topology_by_definition(c, &set), "{name}: not a topology by definition");
        ensure!(representables_are_sheaves(c, &can.topology), "{name}: a representable is not a sheaf");
        match check_maximality(c, &can.topology, &b).map_err(|e| e.to_string())? {
            Ok(w) => ensure!(w.len() == can.excluded.len(), "{name}: witness count differs"),
            Err(s) => return Err(format!("{name}: adjoining {s:?} keeps every representable a sheaf")),
        }
        for s in sieve_lattice(c, &b).unwrap().into_iter().flatten().filter(|s| !set.contains(s)) {
            let mut bigger = can.topology.system().clone();
            bigger.insert(s.clone());
            let closed = generate_topology(c, &bigger, &b).map_err(|e| e.to_string())?;
            ensure!(!representables_are_sheaves(c, &closed), "{name}: {s:?} could be adjoined");
            excluded += 1;
        }
    }
    Ok(format!("{} categories; {excluded} excluded sieves each break subcanonicity", cats.len()))
}

// ---------------------------------------------------------------------------
// LC morphisms

fn random_site(rng: &mut TestRng) -> (LinCategory<F2>, Topology<F2>) {
    let b = bounds();
    let c = loop {
        let c = random_fiber::<F2>(rng, 3, &["x", "y", "z"]);
        if c.total_hom_dim() <= 5 {
            break c;
        }
    };
    let t = match rng.gen_range(0..3) {
        0 => Topology::minimal(&c),
        1 => Topology::discrete(&c, &b).unwrap(),
        _ => canonical_topology(&c, &b).unwrap().topology,
    };
    (c, t)
}

fn lc_functors(
    from: &(LinCategory<F2>, Topology<F2>),
    to: &(LinCategory<F2>, Topology<F2>),
) -> Vec<LinFunctor<F2>> {
    let b = bounds();
    enumerate_functors(&from.0, &to.0, &b)
        .unwrap_or_default()
        .into_iter()
        .filter(|f| check_lc(f, &from.0, &from.1, &to.0, &to.1, &b).unwrap().lc_overall())
        .collect()
}

fn criterion_8() -> Outcome {
    let b = bounds();
    let mut identities = 0;
    for (name, c) in named_categories::<F2>() {
        for t in [
            Topology::minimal(&c),
            Topology::discrete(&c, &b).unwrap(),
            canonical_topology(&c, &b).unwrap().topology,
        ] {
            let r = check_lc(&LinFunctor::identity(&c), &c, &t, &c, &t, &b).unwrap();
            ensure!(r.lc_overall(), "{name}: identity is not LC: {r:?}");
            identities += 1;
        }
    }

    let mut rng = rng(1008);
    let (mut composed, mut attempts) = (0, 0);
    while composed < 15 {
        attempts += 1;
        ensure!(attempts < 5000, "only {composed} composable LC pairs found");
        let sites: Vec<_> = (0..3).map(|_| random_site(&mut rng)).collect();
        let fs = lc_functors(&sites[0], &sites[1]);
        let gs = lc_functors(&sites[1], &sites[2]);
        if fs.is_empty() || gs.is_empty() {
            continue;
        }
        let f = &fs[rng.gen_range(0..fs.len())];
        let g = &gs[rng.gen_range(0..gs.len())];
        let r = check_lc(&g.after(f), &sites[0].0, &sites[0].1, &sites[2].0, &sites[2].1, &b).unwrap();
        ensure!(r.lc_overall(), "composite of LC functors is not LC: {r:?}");
        composed += 1;
    }

    // concrete pairs for the tensor product
    let arrow = builders::path_category::<F2>(&["x", "y"], &[(0, 1)], None).unwrap();
    let (pt, inc) = full_subcategory(&arrow, &[0]).unwrap();
    let covered = {
        let mut t = CoverSystem::minimal(&arrow);
        t.insert(Sieve::generated(&arrow, 1, &[Morphism::new(0, 1, vec![F2::new(1)])]).unwrap());
        Site::new(arrow.clone(), Topology::new(&arrow, t, &b).unwrap()).unwrap()
    };
    let point = Site::minimal(pt);
    let dual = Site::minimal(builders::truncated_polynomial::<F2>("u", 2).unwrap());
    let canonical_arrow = Site::new(arrow.clone(), canonical_topology(&arrow, &b).unwrap().topology).unwrap();
    let zc = zero_chain::<F2>();
    let canonical_zc = Site::new(zc.clone(), canonical_topology(&zc, &b).unwrap().topology).unwrap();
    let id = |s: &Site<F2>| LinFunctor::identity(&s.category);
    type Pair<'a> = (LinFunctor<F2>, &'a Site<F2>, &'a Site<F2>);
    let pairs: Vec<(Pair, Pair)> = vec![
        ((inc.clone(), &point, &covered), (id(&dual), &dual, &dual)),
        ((inc.clone(), &point, &covered), (inc.clone(), &point, &covered)),
        ((id(&dual), &dual, &dual), (inc.clone(), &point, &covered)),
        ((id(&canonical_arrow), &canonical_arrow, &canonical_arrow), (id(&point), &point, &point)),
        ((id(&canonical_zc), &canonical_zc, &canonical_zc), (inc.clone(), &point, &covered)),
    ];
    for ((f, fs, ft), (g, gs, gt)) in &pairs {
        for (h, s, t) in [(f, fs, ft), (g, gs, gt)] {
            let r = check_lc(h, &s.category, &s.topology, &t.category, &t.topology, &b).unwrap();
            ensure!(r.lc_overall(), "a factor is not LC: {r:?}");
        }
        let r = check_tensor_lc(f, (fs, ft), g, (gs, gt), &b).map_err(|e| e.to_string())?;
        ensure!(r.lc_overall(), "tensor product is not LC: {r:?}");
    }
    Ok(format!(
        "{identities} identities, {composed} composites, {} tensor products are LC",
        pairs.len()
    ))
}

// ---------------------------------------------------------------------------
// presentations

fn presentation_pair(rng: &mut TestRng) -> (AmbientCategory<F2>, SitePresentation<F2>, SitePresentation<F2>) {
    loop {
        let amb = random_ambient::<F2>(rng);
        let (Some(a), Some(b)) = (random_presentation(rng, &amb), random_presentation(rng, &amb)) else {
            continue;
        };
        return (amb, a, b);
    }
}

fn criterion_9() -> Outcome {
    let b = bounds();
    let mut rng = rng(1009);
    for _ in 0..25 {
        let (amb, p, q) = presentation_pair(&mut rng);
        let c = cocone_presentations(&amb, &p, &q, &b).map_err(|e| e.to_string())?;
        for r in [&c.apex.lc, &c.left.lc, &c.right.lc] {
            ensure!(r.lc_overall(), "cocone report fails: {r:?}");
        }
        ensure!(c.apex.u.after(&c.left.functor) == p.u, "left cocone triangle does not commute");
        ensure!(c.apex.u.after(&c.right.functor) == q.u, "right cocone triangle does not commute");
        let r = check_lc(&c.apex.u, &c.apex.site.category, &c.apex.site.topology, &amb.category, &amb.topology, &b)
            .unwrap();
        ensure!(r.lc_overall(), "cocone apex is not LC on recheck");
    }
    let (mut pairs, mut distinct, mut attempts) = (0, 0, 0);
    while pairs < 25 || distinct < 5 {
        attempts += 1;
        ensure!(attempts < 2000, "only {pairs} parallel pairs found");
        let (amb, p, q) = presentation_pair(&mut rng);
        let ms: Vec<PresentationMorphism<F2>> = enumerate_functors(&p.site.category, &q.site.category, &b)
            .unwrap_or_default()
            .into_iter()
            .filter_map(|f| PresentationMorphism::new(f, &p, &q, &b).ok())
            .collect();
        if ms.is_empty() {
            continue;
        }
        let f = &ms[rng.gen_range(0..ms.len())];
        let g = &ms[rng.gen_range(0..ms.len())];
        let e = equalize_presentations(&amb, f, g, &p, &q, &b).map_err(|e| e.to_string())?;
        ensure!(e.apex.lc.lc_overall() && e.h.lc.lc_overall(), "equalizer report fails");
        ensure!(e.h.functor.after(&f.functor) == e.h.functor.after(&g.functor), "h does not equalize");
        ensure!(e.apex.u.after(&e.h.functor) == q.u, "equalizer triangle does not commute");
        pairs += 1;
        distinct += usize::from(f != g);
    }
    Ok(format!("25 cocones and {pairs} equalizers ({distinct} of distinct morphisms)"))
}

// ---------------------------------------------------------------------------
// the site colimit

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let b = bounds();
    let mut rng = rng(1010);
    let (mut done, mut missing) = (0, 0);
    let mut largest = 0;
    while done < 12 {
        let amb = random_ambient::<F2>(&mut rng);
        let seeds: Vec<SitePresentation<F2>> =
            (0..rng.gen_range(1..=3)).filter_map(|_| random_presentation(&mut rng, &amb)).collect();
        if seeds.is_empty() {
            continue;
        }
        match verify_site_colimit(&amb, &seeds, &b) {
            Ok((sc, report)) => {
                ensure!(report.is_equivalence(), "{report:?}");
                validate_functor(&sc.psi, sc.colimit.category(), &amb.category).map_err(|v| format!("{v:?}"))?;
                let l = sc.colimit.category();
                let objs = sc.colimit.colim_objects();
                for x in 0..objs.len() {
                    for y in 0..objs.len() {
                        let (px, py) = (sc.psi_object(objs[x]).unwrap(), sc.psi_object(objs[y]).unwrap());
                        ensure!(l.hom_dim(x, y) == amb.category.hom_dim(px, py), "hom dimension differs");
                    }
                }
                largest = largest.max(report.presentations);
                done += 1;
            }
            Err(Error::Precondition(msg)) if msg.contains("miss") => missing += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(600), "took {:.1}s", elapsed.as_secs_f64());
    Ok(format!(
        "{done} equivalences (up to {largest} presentations), {missing} seed sets missing an object, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

// ---------------------------------------------------------------------------
// tensor sheaves

fn micro_sites() -> Vec<Site<F2>> {
    let b = bounds();
    let mut out = Vec::new();
    for (_, c) in named_categories::<F2>().into_iter().filter(|(_, c)| c.total_hom_dim() <= 4) {
        out.push(Site::minimal(c.clone()));
        out.push(Site::new(c.clone(), Topology::discrete(&c, &b).unwrap()).unwrap());
        let can = canonical_topology(&c, &b).unwrap().topology;
        out.push(Site::new(c, can).unwrap());
    }
    // y covered by the arrow from x
    let arrow = builders::path_category::<F2>(&["x", "y"], &[(0, 1)], None).unwrap();
    let mut t = CoverSystem::minimal(&arrow);
    t.insert(Sieve::generated(&arrow, 1, &[Morphism::new(0, 1, vec![F2::new(1)])]).unwrap());
    out.push(Site::new(arrow.clone(), Topology::new(&arrow, t, &b).unwrap()).unwrap());
    out
}

fn criterion_11() -> Outcome {
    let b = bounds();
    let sites = micro_sites();
    let (mut pairs, mut presheaves, mut sheaves) = (0, 0, 0);
    for s1 in &sites {
        for s2 in &sites {
            if s1.category.num_objects() * s2.category.num_objects() > 2
                || s1.category.total_hom_dim() * s2.category.total_hom_dim() > 4
            {
                continue;
            }
            pairs += 1;
            let t = tensor_site(s1, s2, &b).map_err(|e| e.to_string())?;
            for f in enumerate_presheaves(&t.category, 2, &b).map_err(|e| e.to_string())? {
                let tensor = is_sheaf(&t.category, &f, &t.topology).is_sheaf();
                let bimodule = is_bimodule_sheaf(&f, s1, s2).map_err(|e| e.to_string())?.is_sheaf();
                ensure!(tensor == bimodule, "verdicts differ on {f:?}");
                presheaves += 1;
                sheaves += usize::from(tensor);
            }
        }
    }
    ensure!(presheaves > 100, "only {presheaves} presheaves");
    ensure!(sheaves > 0 && sheaves < presheaves, "only one verdict occurs among {presheaves} presheaves");
    Ok(format!("{pairs} site pairs, {presheaves} presheaves ({sheaves} sheaves) agree"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("homotopy is an equivalence relation", criterion_1),
        ("homotopy agrees with the quotient", criterion_2),
        ("the colimit is k-linear", criterion_3),
        ("universal property", criterion_4),
        ("union of full subcategories", criterion_5),
        ("sieve calculus", criterion_6),
        ("canonical topology", criterion_7),
        ("LC closure", criterion_8),
        ("cocones and equalizers of presentations", criterion_9),
        ("site colimit", criterion_10),
        ("tensor sheaves", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

