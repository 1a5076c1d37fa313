//! Random small instances shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use lincolim::colimit::{union_pseudofunctor, ColimObject, FilteredIndex, IndexArrow, IndexCategory, Premorphism, PseudoFunctor};
use lincolim::exactalg::{invert, Matrix, Scalar};
use lincolim::lincat::{builders, enumerate_functors, LinCategory, LinFunctor, LinNatTrans, ObjId};
use lincolim::Bounds;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_scalar<K: Scalar>(rng: &mut TestRng) -> K {
    let elems = K::elements().expect("finite field");
    elems.choose(rng).unwrap().clone()
}

pub fn random_vector<K: Scalar>(rng: &mut TestRng, n: usize) -> Vec<K> {
    (0..n).map(|_| random_scalar(rng)).collect()
}

pub fn random_invertible<K: Scalar>(rng: &mut TestRng, n: usize) -> Matrix<K> {
    loop {
        let m = Matrix::new(n, n, random_vector(rng, n * n));
        if invert(&m).is_some() {
            return m;
        }
    }
}

fn max_hom_dim<K: Scalar>(c: &LinCategory<K>) -> usize {
    let n = c.num_objects();
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| c.hom_dim(a, b)).max().unwrap_or(0)
}

/// A random category with at most `max_objects` objects and hom dimensions at
/// most 2, with object names drawn from `names`.
pub fn random_fiber<K: Scalar>(rng: &mut TestRng, max_objects: usize, names: &[&str]) -> LinCategory<K> {
    loop {
        let n = rng.gen_range(1..=max_objects.min(names.len()));
        let objs = &names[..n];
        let c = match rng.gen_range(0..5) {
            0 => {
                if n == 1 {
                    builders::unit_category::<K>(objs[0])
                } else {
                    builders::codiscrete_category::<K>(objs).unwrap()
                }
            }
            1 => builders::truncated_polynomial::<K>(objs[0], 2).unwrap(),
            2 => {
                let mut arrows = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        for _ in 0..rng.gen_range(0..=2) {
                            arrows.push((i, j));
                        }
                    }
                }
                builders::path_category::<K>(objs, &arrows, None).unwrap()
            }
            3 => {
                let mut rel = Vec::new();
                for i in 0..n {
                    for j in i + 1..n {
                        if rng.gen_bool(0.6) {
                            rel.push((i, j));
                        }
                    }
                }
                builders::incidence_category::<K>(objs, &rel).unwrap()
            }
            _ => {
                if n < 2 {
                    continue;
                }
                let base = if rng.gen_bool(0.5) {
                    builders::truncated_polynomial::<K>(objs[0], 2).unwrap()
                } else {
                    builders::path_category::<K>(&objs[..n - 1], &[], None).unwrap()
                };
                let mut c = base;
                while c.num_objects() < n {
                    let of = rng.gen_range(0..c.num_objects());
                    c = builders::duplicate_object(&c, of, objs[c.num_objects()]).unwrap();
                }
                c
            }
        };
        if max_hom_dim(&c) > 2 {
            continue;
        }
        if rng.gen_bool(0.5) {
            let k = c.num_objects();
            let changes: Vec<Matrix<K>> = (0..k * k)
                .map(|ab| random_invertible(rng, c.hom_dim(ab / k, ab % k)))
                .collect();
            return builders::change_basis(&c, &changes).unwrap();
        }
        return c;
    }
}

/// Filtered index shapes with at most four objects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Point,
    Chain(usize),
    Vee,
    Diamond,
    Idempotent,
    ArrowIdempotent,
}

pub const SHAPES: [Shape; 8] = [
    Shape::Point,
    Shape::Chain(2),
    Shape::Chain(3),
    Shape::Chain(4),
    Shape::Vee,
    Shape::Diamond,
    Shape::Idempotent,
    Shape::ArrowIdempotent,
];

pub fn shape_index(shape: Shape) -> IndexCategory {
    match shape {
        Shape::Point => IndexCategory::chain(1).unwrap(),
        Shape::Chain(n) => IndexCategory::chain(n).unwrap(),
        Shape::Vee => IndexCategory::from_preorder(&["A", "B", "C"], &[(0, 2), (1, 2)]).unwrap(),
        Shape::Diamond => {
            IndexCategory::from_preorder(&["A", "B", "C", "D"], &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
        }
        Shape::Idempotent => IndexCategory::monoid("M", &["1", "e"], |g, f| g.max(f)).unwrap(),
        Shape::ArrowIdempotent => {
            // id_A, id_B, a: A -> B, e: B -> B with e e = e and e a = a
            let arrows = vec![
                IndexArrow { name: "id_A".into(), src: 0, dst: 0 },
                IndexArrow { name: "id_B".into(), src: 1, dst: 1 },
                IndexArrow { name: "a".into(), src: 0, dst: 1 },
                IndexArrow { name: "e".into(), src: 1, dst: 1 },
            ];
            let table = |g: usize, f: usize| -> Option<usize> {
                match (g, f) {
                    (0, 0) => Some(0),
                    (1, 1) => Some(1),
                    (1, 2) | (2, 0) | (3, 2) => Some(2),
                    (1, 3) | (3, 1) | (3, 3) => Some(3),
                    _ => None,
                }
            };
            IndexCategory::new(vec!["A".into(), "B".into()], arrows, vec![0, 1], table).unwrap()
        }
    }
}

fn is_preorder(shape: Shape) -> bool {
    !matches!(shape, Shape::Idempotent | Shape::ArrowIdempotent)
}

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

/// A random strict pseudofunctor on the given shape with fibers of at most
/// `max_objects` objects.
pub fn random_strict<K: Scalar>(rng: &mut TestRng, shape: Shape, max_objects: usize) -> PseudoFunctor<K> {
    let bounds = Bounds::default();
    loop {
        let order = shape_index(shape);
        if is_preorder(shape) && rng.gen_bool(0.5) {
            // nested full subcategories of one ambient category
            let c = random_fiber::<K>(rng, max_objects, &NAMES);
            let subsets = nested_subsets(rng, &order, c.num_objects());
            return union_pseudofunctor(&c, order, &subsets).unwrap();
        }
        if let Some(pf) = random_functor_diagram(rng, shape, order, max_objects, &bounds) {
            return pf;
        }
    }
}

/// Monotone subsets whose union at the maximal objects is everything.
pub fn nested_subsets(rng: &mut TestRng, order: &IndexCategory, n: usize) -> Vec<Vec<ObjId>> {
    let k = order.num_objects();
    let mut subsets: Vec<Vec<ObjId>> = vec![Vec::new(); k];
    // objects of the preorder shapes are listed in a linear extension
    for i in 0..k {
        let mut s: Vec<ObjId> = Vec::new();
        for a in order.arrows() {
            if a.dst == i && a.src != i {
                s.extend(&subsets[a.src]);
            }
        }
        let maximal = order.arrows().iter().all(|a| a.src != i || a.dst == i);
        for x in 0..n {
            if maximal || rng.gen_bool(0.5) {
                s.push(x);
            }
        }
        if s.is_empty() {
            s.push(rng.gen_range(0..n));
        }
        s.sort_unstable();
        s.dedup();
        subsets[i] = s;
    }
    subsets
}

fn random_functor<K: Scalar>(
    rng: &mut TestRng,
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    bounds: &Bounds,
) -> Option<LinFunctor<K>> {
    let all = enumerate_functors(src, dst, bounds).ok()?;
    all.choose(rng).cloned()
}

fn random_functor_diagram<K: Scalar>(
    rng: &mut TestRng,
    shape: Shape,
    order: IndexCategory,
    max_objects: usize,
    bounds: &Bounds,
) -> Option<PseudoFunctor<K>> {
    let index = FilteredIndex::certify(order).unwrap();
    let k = index.num_objects();
    let fibers: Vec<LinCategory<K>> = (0..k).map(|_| random_fiber(rng, max_objects, &NAMES)).collect();
    let m = index.num_arrows();
    let mut transits: Vec<Option<LinFunctor<K>>> = vec![None; m];
    for a in 0..k {
        transits[index.identity(a)] = Some(LinFunctor::identity(&fibers[a]));
    }
    match shape {
        Shape::Idempotent => {
            let all = enumerate_functors(&fibers[0], &fibers[0], bounds).ok()?;
            let idem: Vec<_> = all.into_iter().filter(|f| f.after(f) == *f).collect();
            transits[1] = Some(idem.choose(rng)?.clone());
        }
        Shape::ArrowIdempotent => {
            let all = enumerate_functors(&fibers[1], &fibers[1], bounds).ok()?;
            let idem: Vec<_> = all.into_iter().filter(|f| f.after(f) == *f).collect();
            let e = idem.choose(rng)?.clone();
            let g = random_functor(rng, &fibers[0], &fibers[1], bounds)?;
            transits[2] = Some(e.after(&g));
            transits[3] = Some(e);
        }
        _ => {
            // generate along arrows between distinct objects in id order, then
            // fill composites; diamonds must commute
            let arrows: Vec<usize> = (0..m).filter(|&u| !index.is_identity(u)).collect();
            for &u in &arrows {
                let (s, t) = (index.src(u), index.dst(u));
                // an arrow is a composite if it factors through an intermediate object
                let factor = arrows.iter().find_map(|&v| {
                    arrows
                        .iter()
                        .find(|&&w| index.src(v) == s && index.dst(w) == t && index.dst(v) == index.src(w))
                        .map(|&w| (w, v))
                });
                if factor.is_none() {
                    transits[u] = Some(random_functor(rng, &fibers[s], &fibers[t], bounds)?);
                }
            }
            for &u in &arrows {
                if transits[u].is_some() {
                    continue;
                }
                let (s, t) = (index.src(u), index.dst(u));
                let mut composite = None;
                for &v in &arrows {
                    for &w in &arrows {
                        if index.src(v) == s && index.dst(w) == t && index.dst(v) == index.src(w) {
                            let (tv, tw) = (transits[v].clone()?, transits[w].clone()?);
                            let c = tw.after(&tv);
                            match &composite {
                                None => composite = Some(c),
                                Some(prev) if *prev != c => return None,
                                _ => {}
                            }
                        }
                    }
                }
                transits[u] = composite;
            }
        }
    }
    let transits: Vec<LinFunctor<K>> = transits.into_iter().collect::<Option<_>>()?;
    PseudoFunctor::strict(index, fibers, transits).ok()
}

/// Replaces each transit `T(u)` by a conjugate `F(u)` along random
/// isomorphisms `beta_{u,x}: T(u) x -> F(u) x`, possibly moving to another
/// isomorphic object, and derives the coherence cells.
pub fn pseudoify<K: Scalar>(rng: &mut TestRng, strict: &PseudoFunctor<K>) -> PseudoFunctor<K> {
    let idx = strict.index();
    let bounds = Bounds::default();
    let m = idx.num_arrows();
    // beta[u][x] = (target object, iso T(u)x -> target)
    let mut beta: Vec<Vec<(ObjId, Vec<K>)>> = Vec::with_capacity(m);
    for u in 0..m {
        let fb = strict.fiber(idx.dst(u));
        let row = (0..strict.fiber(idx.src(u)).num_objects())
            .map(|x| {
                let tx = strict.obj(u, x);
                let candidates: Vec<(ObjId, Vec<K>)> = (0..fb.num_objects())
                    .filter_map(|y| {
                        let isos: Vec<Vec<K>> = lincolim::exactalg::all_vectors::<K>(fb.hom_dim(tx, y), &bounds)
                            .unwrap()
                            .into_iter()
                            .filter(|v| fb.is_isomorphism(tx, y, v))
                            .collect();
                        isos.choose(rng).map(|v| (y, v.clone()))
                    })
                    .collect();
                candidates.choose(rng).unwrap().clone()
            })
            .collect();
        beta.push(row);
    }
    let inv = |u: usize, x: ObjId| -> Vec<K> {
        let fb = strict.fiber(idx.dst(u));
        fb.inverse(strict.obj(u, x), beta[u][x].0, &beta[u][x].1).unwrap()
    };
    let mut transits = Vec::with_capacity(m);
    for u in 0..m {
        let (fa, fb) = (strict.fiber(idx.src(u)), strict.fiber(idx.dst(u)));
        let t = strict.transit(u);
        let obj_map: Vec<ObjId> = (0..fa.num_objects()).map(|x| beta[u][x].0).collect();
        let f = LinFunctor::from_basis_images(fa, fb, obj_map.clone(), |x, y, i| {
            let moved = t.apply(x, y, &fa.basis_vector(x, y, i));
            let right = fb.compose(t.obj(x), t.obj(y), obj_map[y], &beta[u][y].1, &moved);
            fb.compose(obj_map[x], t.obj(x), obj_map[y], &right, &inv(u, x))
        });
        transits.push(f);
    }
    let mut gamma = HashMap::new();
    for g in 0..m {
        for f in 0..m {
            let Some(gf) = idx.try_compose(g, f) else { continue };
            let fc = strict.fiber(idx.dst(g));
            let comps = (0..strict.fiber(idx.src(f)).num_objects())
                .map(|x| {
                    let tfx = strict.obj(f, x);
                    let ffx = transits[f].obj(x);
                    // (beta_g * beta_f)_x = F(g)(beta_{f,x}) . beta_{g,T(f)x}
                    let lifted = transits[g].apply(tfx, ffx, &beta[f][x].1);
                    let star = fc.compose(
                        strict.obj(g, tfx),
                        transits[g].obj(tfx),
                        transits[g].obj(ffx),
                        &lifted,
                        &beta[g][tfx].1,
                    );
                    let star_inv = fc.inverse(strict.obj(g, tfx), transits[g].obj(ffx), &star).unwrap();
                    fc.compose(transits[g].obj(ffx), strict.obj(gf, x), transits[gf].obj(x), &beta[gf][x].1, &star_inv)
                })
                .collect();
            gamma.insert((g, f), LinNatTrans::new(comps));
        }
    }
    let units = (0..idx.num_objects())
        .map(|a| {
            let id = idx.identity(a);
            LinNatTrans::new((0..strict.fiber(a).num_objects()).map(|x| beta[id][x].1.clone()).collect())
        })
        .collect();
    PseudoFunctor::new(
        idx.clone(),
        strict.fibers().to_vec(),
        transits,
        gamma,
        units,
    )
    .expect("conjugated pseudofunctor is coherent")
}

/// A random instance: strict or pseudo-ified with equal probability.
pub fn random_pseudofunctor<K: Scalar>(rng: &mut TestRng, max_objects: usize) -> Arc<PseudoFunctor<K>> {
    let shape = *SHAPES.choose(rng).unwrap();
    let strict = random_strict::<K>(rng, shape, max_objects);
    if rng.gen_bool(0.5) {
        Arc::new(strict)
    } else {
        Arc::new(pseudoify(rng, &strict))
    }
}

/// A random premorphism between two given objects.
pub fn random_premorphism<K: Scalar>(
    rng: &mut TestRng,
    pf: &PseudoFunctor<K>,
    x: ColimObject,
    y: ColimObject,
) -> Premorphism<K> {
    let cospans = pf.cospans(x.index, y.index);
    let &(u, v) = cospans.choose(rng).unwrap();
    let c = pf.index().dst(u);
    let d = pf.fiber(c).hom_dim(pf.obj(u, x.obj), pf.obj(v, y.obj));
    Premorphism {
        src: x,
        dst: y,
        u,
        v,
        f: random_vector(rng, d),
    }
}

/// A random push of `p` along an arrow out of its apex.
pub fn random_push<K: Scalar>(rng: &mut TestRng, pf: &PseudoFunctor<K>, p: &Premorphism<K>) -> Premorphism<K> {
    let ws: Vec<usize> = pf.index().arrows_from(pf.apex(p)).collect();
    pf.push(p, *ws.choose(rng).unwrap()).unwrap()
}

/// `x -> y -> z` with the composite `x -> z` set to zero.
pub fn zero_chain<K: Scalar>() -> LinCategory<K> {
    builders::path_category(&["x", "y", "z"], &[(0, 1), (1, 2)], Some(1)).unwrap()
}

/// Projective `P` and simple `S` over `k[t]/t^2`: `p: P -> S`, `i: S -> P`,
/// `i p = t`, `p i = 0`.
pub fn auslander<K: Scalar>() -> LinCategory<K> {
    let bases = vec![
        vec!["id_P".to_string(), "t".to_string()],
        vec!["p".to_string()],
        vec!["i".to_string()],
        vec!["id_S".to_string()],
    ];
    let (o, z) = (K::one(), K::zero());
    let unit = |x: bool| if x { o.clone() } else { z.clone() };
    LinCategory::from_parts(
        vec!["P".into(), "S".into()],
        bases,
        vec![vec![o.clone(), z.clone()], vec![o.clone()]],
        |a, b, c, g, f| match (a, b, c) {
            // id = 0, t = 1 and t t = 0
            (0, 0, 0) => match g + f {
                0 => vec![unit(true), unit(false)],
                1 => vec![unit(false), unit(true)],
                _ => vec![z.clone(), z.clone()],
            },
            (0, 0, 1) => vec![unit(f == 0)],
            (0, 1, 0) => vec![z.clone(), o.clone()],
            (1, 0, 0) => vec![unit(g == 0)],
            (1, 0, 1) => vec![z.clone()],
            _ => vec![o.clone()],
        },
    )
    .unwrap()
}

/// Small categories with hand-checkable sieve lattices.
pub fn named_categories<K: Scalar>() -> Vec<(&'static str, LinCategory<K>)> {
    vec![
        ("point", builders::unit_category("pt")),
        ("dual numbers", builders::truncated_polynomial("x", 2).unwrap()),
        ("arrow", builders::path_category(&["x", "y"], &[(0, 1)], None).unwrap()),
        ("chain", builders::path_category(&["x", "y", "z"], &[(0, 1), (1, 2)], None).unwrap()),
        ("codiscrete", builders::codiscrete_category(&["x", "y"]).unwrap()),
        ("zero chain", zero_chain()),
        ("auslander", auslander()),
    ]
}

/// A random ambient category over F2-sized fields with at most four objects.
pub fn random_ambient<K: Scalar>(rng: &mut TestRng) -> lincolim::sitecat::AmbientCategory<K> {
    let b = Bounds::default();
    let c = match rng.gen_range(0..6) {
        0 => zero_chain(),
        1 => auslander(),
        2 => builders::codiscrete_category(&["w", "x", "y", "z"][..rng.gen_range(2..=4)]).unwrap(),
        _ => random_fiber(rng, 4, &["w", "x", "y", "z"]),
    };
    lincolim::sitecat::AmbientCategory::new(c, &b).unwrap()
}

/// `a` with one object duplicated, and the functor folding the copy back.
pub fn with_duplicate<K: Scalar>(a: &LinCategory<K>, of: ObjId) -> (LinCategory<K>, LinFunctor<K>) {
    let name = format!("{}'", a.object_name(of));
    let d = builders::duplicate_object(a, of, &name).unwrap();
    let n = a.num_objects();
    let obj_map = (0..=n).map(|x| if x == n { of } else { x }).collect();
    let fold = LinFunctor::from_basis_images(&d, a, obj_map, |s, t, i| d.basis_vector(s, t, i));
    (d, fold)
}

/// A full subcategory presentation, sometimes with a duplicated object;
/// `None` when the chosen subset is not LC.
pub fn random_presentation<K: Scalar>(
    rng: &mut TestRng,
    ambient: &lincolim::sitecat::AmbientCategory<K>,
) -> Option<lincolim::sitecat::SitePresentation<K>> {
    use lincolim::sitecat::SitePresentation;
    use lincolim::topology::{induced_topology, Site, Topology};
    let b = Bounds::default();
    let n = ambient.num_objects();
    let objs: Vec<ObjId> = loop {
        let s: Vec<ObjId> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
        if !s.is_empty() {
            break s;
        }
    };
    let full = SitePresentation::full(ambient, &objs, &b).ok()?;
    if rng.gen_bool(0.5) {
        return Some(full);
    }
    let of = rng.gen_range(0..full.site.category.num_objects());
    let (d, fold) = with_duplicate(&full.site.category, of);
    let u = full.u.after(&fold);
    let t = induced_topology(&u, &d, &ambient.category, &ambient.topology, &b).unwrap();
    let site = Site::new(d.clone(), Topology::new(&d, t, &b).ok()?).unwrap();
    SitePresentation::new(ambient, format!("{}+{}'", full.name, of), site, u, &b).ok()
}
