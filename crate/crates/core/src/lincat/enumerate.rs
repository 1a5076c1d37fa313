use super::{validate_functor, LinCategory, LinFunctor, ObjId};
use crate::error::{Bounds, Error, Result};
use crate::exactalg::{solve, Matrix, Scalar, Subspace};

/// Candidate hom maps for one pair `(a, b)` once the object map is fixed:
/// an affine space, cut down to `id -> id` on endomorphisms.
struct PairChoices<K> {
    particular: Vec<K>,
    directions: Subspace<K>,
    rows: usize,
    cols: usize,
}

impl<K: Scalar> PairChoices<K> {
    fn matrix(&self, offset: &[K]) -> Matrix<K> {
        let data = self
            .particular
            .iter()
            .zip(offset)
            .map(|(p, o)| p.clone() + o.clone())
            .collect();
        Matrix::new(self.rows, self.cols, data)
    }
}

fn pair_choices<K: Scalar>(
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    obj_map: &[ObjId],
    a: ObjId,
    b: ObjId,
) -> Option<PairChoices<K>> {
    let (rows, cols) = (dst.hom_dim(obj_map[a], obj_map[b]), src.hom_dim(a, b));
    let n = rows * cols;
    if a != b {
        return Some(PairChoices {
            particular: vec![K::zero(); n],
            directions: Subspace::full(n),
            rows,
            cols,
        });
    }
    // row-major vec(M); (M id)_i = sum_j M[i][j] id_j
    let id = src.identity(a);
    let constraint = Matrix::from_fn(rows, n, |i, k| {
        if k / cols == i {
            id[k % cols].clone()
        } else {
            K::zero()
        }
    });
    let sol = solve(&constraint, dst.identity(obj_map[a])).ok()?;
    Some(PairChoices {
        particular: sol.particular,
        directions: Subspace::span(n, &sol.nullspace),
        rows,
        cols,
    })
}

/// Number of candidates the search would visit, saturating.
pub fn functor_search_size<K: Scalar>(src: &LinCategory<K>, dst: &LinCategory<K>) -> Result<u128> {
    let q = K::order().ok_or_else(|| Error::FieldNotFinite(K::field_name()))? as u128;
    let n = src.num_objects();
    let mut total: u128 = 0;
    for obj_map in object_maps(n, dst.num_objects()) {
        let mut count: u128 = 1;
        for a in 0..n {
            for b in 0..n {
                match pair_choices(src, dst, &obj_map, a, b) {
                    Some(pc) => {
                        for _ in 0..pc.directions.dim() {
                            count = count.saturating_mul(q);
                        }
                    }
                    None => count = 0,
                }
            }
        }
        total = total.saturating_add(count);
    }
    Ok(total)
}

fn object_maps(n: usize, m: usize) -> Vec<Vec<ObjId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Every k-linear functor `src -> dst` (finite fields only).
///
/// Object maps are enumerated in lexicographic order; for each, hom maps are
/// chosen pair by pair with identities preserved, and composition is checked
/// as soon as the three maps of a triple are fixed.
pub fn enumerate_functors<K: Scalar>(
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    bounds: &Bounds,
) -> Result<Vec<LinFunctor<K>>> {
    let size = functor_search_size(src, dst)?;
    if size > bounds.max_functors {
        return Err(Error::bound("functor candidates", size, bounds.max_functors));
    }
    let n = src.num_objects();
    let mut out = Vec::new();
    for obj_map in object_maps(n, dst.num_objects()) {
        let mut choices = Vec::with_capacity(n * n);
        let mut feasible = true;
        for ab in 0..n * n {
            match pair_choices(src, dst, &obj_map, ab / n, ab % n) {
                Some(pc) => {
                    let offsets = pc.directions.elements(&unbounded(bounds))?;
                    choices.push((pc, offsets));
                }
                None => {
                    feasible = false;
                    break;
                }
            }
        }
        if !feasible {
            continue;
        }
        let mut chosen: Vec<Matrix<K>> = Vec::with_capacity(n * n);
        search(src, dst, &obj_map, &choices, &mut chosen, &mut out);
    }
    for f in &out {
        debug_assert!(validate_functor(f, src, dst).is_ok());
    }
    Ok(out)
}

// the per-pair enumeration is already covered by the total candidate count
fn unbounded(bounds: &Bounds) -> Bounds {
    Bounds {
        max_vectors: bounds.max_functors.max(bounds.max_vectors),
        ..*bounds
    }
}

type Choice<K> = (PairChoices<K>, Vec<Vec<K>>);

fn search<K: Scalar>(
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    obj_map: &[ObjId],
    choices: &[Choice<K>],
    chosen: &mut Vec<Matrix<K>>,
    out: &mut Vec<LinFunctor<K>>,
) {
    let n = obj_map.len();
    let k = chosen.len();
    if k == n * n {
        out.push(LinFunctor::new(obj_map.to_vec(), chosen.clone()).expect("sizes agree"));
        return;
    }
    let (pc, offsets) = &choices[k];
    for off in offsets {
        chosen.push(pc.matrix(off));
        if consistent_upto(src, dst, obj_map, chosen, k) {
            search(src, dst, obj_map, choices, chosen, out);
        }
        chosen.pop();
    }
}

/// Checks every composition triple whose last-assigned pair is `k`.
fn consistent_upto<K: Scalar>(
    src: &LinCategory<K>,
    dst: &LinCategory<K>,
    obj_map: &[ObjId],
    chosen: &[Matrix<K>],
    k: usize,
) -> bool {
    let n = obj_map.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (ab, bc, ac) = (a * n + b, b * n + c, a * n + c);
                if ab.max(bc).max(ac) != k {
                    continue;
                }
                let (fab, fbc, fac) = (&chosen[ab], &chosen[bc], &chosen[ac]);
                for g in 0..src.hom_dim(b, c) {
                    let gi = fbc.col(g);
                    for f in 0..src.hom_dim(a, b) {
                        let fi = fab.col(f);
                        let lhs = fac.mul_vec(src.compose_basis(a, b, c, g, f));
                        let rhs = dst.compose(obj_map[a], obj_map[b], obj_map[c], &gi, &fi);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}
