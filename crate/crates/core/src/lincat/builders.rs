//! Standard small categories.

use std::collections::{BTreeMap, VecDeque};

use super::{LinCategory, ObjId};
use crate::error::{Error, Result};
use crate::exactalg::{invert, unit_vector, Matrix, Scalar};

/// One object whose endomorphisms are `k . id`.
pub fn unit_category<K: Scalar>(name: &str) -> LinCategory<K> {
    LinCategory::from_parts(
        vec![name.to_string()],
        vec![vec![format!("id_{name}")]],
        vec![vec![K::one()]],
        |_, _, _, _, _| vec![K::one()],
    )
    .expect("unit category")
}

/// The k-linear path category of a quiver, with arrows named `a0, a1, ...`.
///
/// See [`named_path_category`].
pub fn path_category<K: Scalar>(
    objects: &[&str],
    arrows: &[(ObjId, ObjId)],
    max_len: Option<usize>,
) -> Result<LinCategory<K>> {
    let named: Vec<(String, ObjId, ObjId)> = arrows
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| (format!("a{i}"), s, t))
        .collect();
    named_path_category(objects, &named, max_len)
}

/// The k-linear path category of a quiver.
///
/// Paths of length greater than `max_len` are set to zero. Without a
/// truncation the quiver must be acyclic. A path is named by its arrows in
/// composition order, `g.f` for `f` followed by `g`; trivial paths are `id_A`.
pub fn named_path_category<K: Scalar>(
    objects: &[&str],
    arrows: &[(String, ObjId, ObjId)],
    max_len: Option<usize>,
) -> Result<LinCategory<K>> {
    let n = objects.len();
    for (name, s, t) in arrows {
        if *s >= n || *t >= n {
            return Err(Error::invalid("quiver", format!("arrow `{name}` has an endpoint out of range")));
        }
    }
    let limit = match max_len {
        Some(l) => l,
        None => {
            if has_cycle(n, arrows) {
                return Err(Error::invalid("quiver", "cyclic quiver needs a path length bound"));
            }
            n.saturating_sub(1)
        }
    };
    // paths as arrow index sequences in traversal order
    let mut homs: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n * n];
    for a in 0..n {
        let mut queue = VecDeque::from([(a, Vec::<usize>::new())]);
        while let Some((end, path)) = queue.pop_front() {
            if path.len() < limit {
                for (i, (_, s, t)) in arrows.iter().enumerate() {
                    if *s == end {
                        let mut p = path.clone();
                        p.push(i);
                        queue.push_back((*t, p));
                    }
                }
            }
            homs[a * n + end].push(path);
        }
    }
    let lookup: Vec<BTreeMap<Vec<usize>, usize>> = homs
        .iter()
        .map(|ps| ps.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect())
        .collect();
    let names: Vec<Vec<String>> = homs
        .iter()
        .enumerate()
        .map(|(ab, ps)| {
            ps.iter()
                .map(|p| {
                    if p.is_empty() {
                        format!("id_{}", objects[ab / n])
                    } else {
                        p.iter().rev().map(|&i| arrows[i].0.as_str()).collect::<Vec<_>>().join(".")
                    }
                })
                .collect()
        })
        .collect();
    let identities = (0..n)
        .map(|a| {
            let i = lookup[a * n + a][&Vec::new()];
            unit_vector(homs[a * n + a].len(), i)
        })
        .collect();
    LinCategory::from_parts(
        objects.iter().map(|s| s.to_string()).collect(),
        names,
        identities,
        |a, b, c, g, f| {
            let mut p = homs[a * n + b][f].clone();
            p.extend(&homs[b * n + c][g]);
            let dac = homs[a * n + c].len();
            match lookup[a * n + c].get(&p) {
                Some(&i) => unit_vector(dac, i),
                None => vec![K::zero(); dac],
            }
        },
    )
}

fn has_cycle(n: usize, arrows: &[(String, ObjId, ObjId)]) -> bool {
    let mut indeg = vec![0usize; n];
    for (_, _, t) in arrows {
        indeg[*t] += 1;
    }
    let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut seen = 0;
    while let Some(v) = stack.pop() {
        seen += 1;
        for (_, s, t) in arrows {
            if *s == v {
                indeg[*t] -= 1;
                if indeg[*t] == 0 {
                    stack.push(*t);
                }
            }
        }
    }
    seen < n
}

/// The k-linearization of a preorder: `hom(a, b)` is `k` when `a <= b` in the
/// reflexive-transitive closure of `relations`, and zero otherwise.
pub fn incidence_category<K: Scalar>(objects: &[&str], relations: &[(ObjId, ObjId)]) -> Result<LinCategory<K>> {
    let n = objects.len();
    let mut le = vec![false; n * n];
    for a in 0..n {
        le[a * n + a] = true;
    }
    for &(a, b) in relations {
        if a >= n || b >= n {
            return Err(Error::invalid("preorder", "relation endpoint out of range"));
        }
        le[a * n + b] = true;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if le[i * n + k] && le[k * n + j] {
                    le[i * n + j] = true;
                }
            }
        }
    }
    let names = (0..n * n)
        .map(|ab| {
            if le[ab] {
                vec![format!("{}<={}", objects[ab / n], objects[ab % n])]
            } else {
                Vec::new()
            }
        })
        .collect();
    LinCategory::from_parts(
        objects.iter().map(|s| s.to_string()).collect(),
        names,
        vec![vec![K::one()]; n],
        |_, _, _, _, _| vec![K::one()],
    )
}

/// Every pair of objects related by a unique (hence invertible) morphism.
pub fn codiscrete_category<K: Scalar>(objects: &[&str]) -> Result<LinCategory<K>> {
    let n = objects.len();
    let rel: Vec<(ObjId, ObjId)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    incidence_category(objects, &rel)
}

/// One object with endomorphism algebra `k[t]/t^n`.
pub fn truncated_polynomial<K: Scalar>(name: &str, n: usize) -> Result<LinCategory<K>> {
    if n == 0 {
        return Err(Error::invalid("algebra", "k[t]/t^0 is the zero ring"));
    }
    named_path_category(&[name], &[("t".to_string(), 0, 0)], Some(n - 1))
}

/// Adds an isomorphic copy `name` of object `of`.
///
/// Homs into and out of the copy are those of `of`, with the same basis
/// names; the new object is last.
pub fn duplicate_object<K: Scalar>(c: &LinCategory<K>, of: ObjId, name: &str) -> Result<LinCategory<K>> {
    let n = c.num_objects();
    let pi = |x: ObjId| if x == n { of } else { x };
    let mut objects = c.objects().to_vec();
    objects.push(name.to_string());
    let m = n + 1;
    let names = (0..m * m)
        .map(|ab| c.hom_basis(pi(ab / m), pi(ab % m)).to_vec())
        .collect();
    let ids = (0..m).map(|a| c.identity(pi(a)).to_vec()).collect();
    LinCategory::from_parts(objects, names, ids, |a, b, cc, g, f| {
        c.compose_basis(pi(a), pi(b), pi(cc), g, f).to_vec()
    })
}

/// Re-expresses `c` in new hom bases.
///
/// `changes[a * n + b]` is an invertible matrix whose columns are the new
/// basis vectors of `hom(a, b)` in old coordinates. Basis names get a prime.
pub fn change_basis<K: Scalar>(c: &LinCategory<K>, changes: &[Matrix<K>]) -> Result<LinCategory<K>> {
    let n = c.num_objects();
    if changes.len() != n * n {
        return Err(Error::DimensionMismatch("one basis change per hom space".into()));
    }
    let mut inverses = Vec::with_capacity(n * n);
    for (ab, p) in changes.iter().enumerate() {
        let d = c.hom_dim(ab / n, ab % n);
        if p.rows() != d || p.cols() != d {
            return Err(Error::DimensionMismatch(format!("basis change {ab} is not {d} x {d}")));
        }
        inverses.push(invert(p).ok_or_else(|| Error::invalid("basis change", "matrix is singular"))?);
    }
    let names = (0..n * n)
        .map(|ab| c.hom_basis(ab / n, ab % n).iter().map(|s| format!("{s}'")).collect())
        .collect();
    let ids = (0..n)
        .map(|a| inverses[a * n + a].mul_vec(c.identity(a)))
        .collect();
    LinCategory::from_parts(c.objects().to_vec(), names, ids, |a, b, cc, g, f| {
        let gv = changes[b * n + cc].col(g);
        let fv = changes[a * n + b].col(f);
        inverses[a * n + cc].mul_vec(&c.compose(a, b, cc, &gv, &fv))
    })
}
