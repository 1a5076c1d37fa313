use super::{LinCategory, LinFunctor, ObjId};
use crate::error::{Error, Result};
use crate::exactalg::{kron_vec, Matrix, Scalar};

/// The full subcategory on `objs` (in the given order) and its inclusion.
pub fn full_subcategory<K: Scalar>(c: &LinCategory<K>, objs: &[ObjId]) -> Result<(LinCategory<K>, LinFunctor<K>)> {
    for &o in objs {
        if o >= c.num_objects() {
            return Err(Error::UnknownObject(format!("#{o}")));
        }
    }
    let m = objs.len();
    let names = objs.iter().map(|&o| c.object_name(o).to_string()).collect();
    let bases = (0..m * m)
        .map(|ab| c.hom_basis(objs[ab / m], objs[ab % m]).to_vec())
        .collect();
    let ids = objs.iter().map(|&o| c.identity(o).to_vec()).collect();
    let sub = LinCategory::from_parts(names, bases, ids, |a, b, cc, g, f| {
        c.compose_basis(objs[a], objs[b], objs[cc], g, f).to_vec()
    })?;
    let hom_maps = (0..m * m)
        .map(|ab| Matrix::identity(sub.hom_dim(ab / m, ab % m)))
        .collect();
    let incl = LinFunctor::new(objs.to_vec(), hom_maps)?;
    Ok((sub, incl))
}

pub fn full_subcategory_by_name<K: Scalar>(
    c: &LinCategory<K>,
    names: &[&str],
) -> Result<(LinCategory<K>, LinFunctor<K>)> {
    let ids = names.iter().map(|n| c.object_id(n)).collect::<Result<Vec<_>>>()?;
    full_subcategory(c, &ids)
}

/// Object id of `(x, y)` in `tensor_category(a, b)`.
pub fn tensor_object(b_objects: usize, x: ObjId, y: ObjId) -> ObjId {
    x * b_objects + y
}

/// The tensor product `a ⊗ b`: pairs of objects, tensor products of homs,
/// componentwise composition.
pub fn tensor_category<K: Scalar>(a: &LinCategory<K>, b: &LinCategory<K>) -> LinCategory<K> {
    let (na, nb) = (a.num_objects(), b.num_objects());
    let n = na * nb;
    let split = |o: ObjId| (o / nb, o % nb);
    let objects = (0..n)
        .map(|o| {
            let (x, y) = split(o);
            format!("({},{})", a.object_name(x), b.object_name(y))
        })
        .collect();
    let bases = (0..n * n)
        .map(|st| {
            let ((x, y), (x2, y2)) = (split(st / n), split(st % n));
            let mut v = Vec::new();
            for f in a.hom_basis(x, x2) {
                for g in b.hom_basis(y, y2) {
                    v.push(format!("({f},{g})"));
                }
            }
            v
        })
        .collect();
    let ids = (0..n)
        .map(|o| {
            let (x, y) = split(o);
            kron_vec(a.identity(x), b.identity(y))
        })
        .collect();
    LinCategory::from_parts(objects, bases, ids, |s, t, u, g, f| {
        let ((x0, y0), (x1, y1), (x2, y2)) = (split(s), split(t), split(u));
        let db_f = b.hom_dim(y0, y1);
        let db_g = b.hom_dim(y1, y2);
        let (fa, fb) = (f / db_f, f % db_f);
        let (ga, gb) = (g / db_g, g % db_g);
        kron_vec(
            a.compose_basis(x0, x1, x2, ga, fa),
            b.compose_basis(y0, y1, y2, gb, fb),
        )
    })
    .expect("tensor tables are consistent by construction")
}

/// `f ⊗ g` between tensor categories.
pub fn tensor_functor<K: Scalar>(f: &LinFunctor<K>, g: &LinFunctor<K>, g_target_objects: usize) -> LinFunctor<K> {
    let (na, nb) = (f.num_objects(), g.num_objects());
    let n = na * nb;
    let obj_map = (0..n)
        .map(|o| tensor_object(g_target_objects, f.obj(o / nb), g.obj(o % nb)))
        .collect();
    let hom_maps = (0..n * n)
        .map(|st| {
            let (s, t) = (st / n, st % n);
            f.hom_map(s / nb, t / nb).kron(g.hom_map(s % nb, t % nb))
        })
        .collect();
    LinFunctor::new(obj_map, hom_maps).expect("sizes agree")
}

#[cfg(test)]
mod tests {
    use super::super::{builders, validate_category, validate_functor};
    use super::*;
    use crate::exactalg::Fp;

    type F2 = Fp<2>;

    #[test]
    fn full_subcategory_extremes() {
        let c = builders::path_category::<F2>(&["A", "B", "C"], &[(0, 1), (1, 2)], None).unwrap();
        let (all, incl) = full_subcategory(&c, &[0, 1, 2]).unwrap();
        assert_eq!(all, c);
        assert_eq!(incl, LinFunctor::identity(&c));
        let (none, incl) = full_subcategory(&c, &[]).unwrap();
        assert_eq!(none.num_objects(), 0);
        validate_functor(&incl, &none, &c).unwrap();
        assert!(full_subcategory(&c, &[7]).is_err());
    }

    #[test]
    fn full_subcategory_inclusion_is_valid_and_fully_faithful() {
        let c = builders::path_category::<F2>(&["A", "B", "C"], &[(0, 1), (1, 2)], None).unwrap();
        let (s, incl) = full_subcategory_by_name(&c, &["C", "A"]).unwrap();
        validate_category(&s).unwrap();
        validate_functor(&incl, &s, &c).unwrap();
        assert!(incl.is_full() && incl.is_faithful());
        assert_eq!(s.hom_dim(1, 0), 1);
    }

    #[test]
    fn tensor_with_unit_is_isomorphic() {
        let a = builders::path_category::<F2>(&["A", "B"], &[(0, 1), (0, 1)], None).unwrap();
        let u = builders::unit_category::<F2>("*");
        let t = tensor_category(&a, &u);
        validate_category(&t).unwrap();
        // (A,*) -> A with identity hom maps
        let back = LinFunctor::new(
            vec![0, 1],
            (0..4).map(|ab| Matrix::identity(t.hom_dim(ab / 2, ab % 2))).collect(),
        )
        .unwrap();
        validate_functor(&back, &t, &a).unwrap();
        assert!(back.is_isomorphism(&a));
    }

    #[test]
    fn tensor_dims_multiply() {
        let a = builders::path_category::<F2>(&["A", "B"], &[(0, 1), (0, 1)], None).unwrap();
        let b = builders::path_category::<F2>(&["X", "Y"], &[(0, 1), (0, 1), (0, 1)], None).unwrap();
        let t = tensor_category(&a, &b);
        assert_eq!(t.hom_dim(tensor_object(2, 0, 0), tensor_object(2, 1, 1)), 6);
        for s in 0..4 {
            for u in 0..4 {
                assert_eq!(t.hom_dim(s, u), a.hom_dim(s / 2, u / 2) * b.hom_dim(s % 2, u % 2));
            }
        }
        validate_category(&t).unwrap();
    }
}
