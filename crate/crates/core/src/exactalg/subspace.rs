use super::matrix::{axpy, is_zero_vec, nullspace, rref, Matrix};
use super::Scalar;
use crate::error::{Bounds, Error, Result};

/// A linear subspace of `K^n`, stored by its reduced row-echelon basis.
///
/// The basis is canonical, so structural equality is subspace equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace<K> {
    ambient_dim: usize,
    basis: Matrix<K>,
    pivots: Vec<usize>,
}

impl<K: std::fmt::Debug> std::fmt::Debug for Subspace<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace({}; {:?})", self.ambient_dim, self.basis)
    }
}

impl<K: Scalar> Subspace<K> {
    pub fn zero(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::zeros(0, n),
            pivots: Vec::new(),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            ambient_dim: n,
            basis: Matrix::identity(n),
            pivots: (0..n).collect(),
        }
    }

    pub fn span(n: usize, vectors: &[Vec<K>]) -> Self {
        Self::from_rows(&Matrix::from_rows(n, vectors))
    }

    /// Row space of `m`.
    pub fn from_rows(m: &Matrix<K>) -> Self {
        let r = rref(m);
        Subspace {
            ambient_dim: m.cols(),
            basis: r.reduced,
            pivots: r.pivots,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// Basis rows in reduced row-echelon form.
    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<K>> {
        self.basis.row_vecs()
    }

    /// Normal form of `v` modulo the subspace: pivot coordinates cleared.
    pub fn reduce(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.ambient_dim, "vector outside ambient space");
        let mut out = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let c = out[p].clone();
            if !c.is_zero() {
                out = axpy(&out, &(-c), self.basis.row(i));
            }
        }
        out
    }

    pub fn contains(&self, v: &[K]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Vector with the given coordinates in the canonical basis.
    pub fn combine(&self, coords: &[K]) -> Vec<K> {
        assert_eq!(coords.len(), self.dim());
        let mut out = vec![K::zero(); self.ambient_dim];
        for (i, c) in coords.iter().enumerate() {
            out = axpy(&out, c, self.basis.row(i));
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Subspace<K>) -> bool {
        self.ambient_dim == other.ambient_dim
            && (0..self.dim()).all(|i| other.contains(self.basis.row(i)))
    }

    pub fn sum(&self, other: &Subspace<K>) -> Subspace<K> {
        Self::from_rows(&self.basis.vstack(&other.basis))
    }

    /// Rows spanning `{y : y . x = 0 for all x in self}`.
    pub fn annihilator(&self) -> Matrix<K> {
        Matrix::from_rows(self.ambient_dim, &nullspace(&self.basis))
    }

    pub fn intersection(&self, other: &Subspace<K>) -> Subspace<K> {
        let constraints = self.annihilator().vstack(&other.annihilator());
        Self::span(self.ambient_dim, &nullspace(&constraints))
    }

    /// `{x : map x in self}` for a linear map `map: K^m -> K^n`.
    pub fn preimage(&self, map: &Matrix<K>) -> Subspace<K> {
        assert_eq!(map.rows(), self.ambient_dim, "preimage map has wrong codomain");
        let constraints = self.annihilator().mul(map);
        Self::span(map.cols(), &nullspace(&constraints))
    }

    pub fn image(&self, map: &Matrix<K>) -> Subspace<K> {
        assert_eq!(map.cols(), self.ambient_dim, "image map has wrong domain");
        let imgs: Vec<Vec<K>> = (0..self.dim())
            .map(|i| map.mul_vec(self.basis.row(i)))
            .collect();
        Self::span(map.rows(), &imgs)
    }

    /// Every vector of the subspace (finite fields only).
    pub fn elements(&self, bounds: &Bounds) -> Result<Vec<Vec<K>>> {
        let coords = all_vectors::<K>(self.dim(), bounds)?;
        Ok(coords.iter().map(|c| self.combine(c)).collect())
    }
}

fn checked_power<K: Scalar>(n: usize) -> Result<u128> {
    let q = K::order().ok_or_else(|| Error::FieldNotFinite(K::field_name()))? as u128;
    let mut total: u128 = 1;
    for _ in 0..n {
        total = total.saturating_mul(q);
    }
    Ok(total)
}

/// Every vector of `K^n` in lexicographic order of coordinates.
pub fn all_vectors<K: Scalar>(n: usize, bounds: &Bounds) -> Result<Vec<Vec<K>>> {
    let total = checked_power::<K>(n)?;
    if total > bounds.max_vectors {
        return Err(Error::bound(format!("vectors of {}^{n}", K::field_name()), total, bounds.max_vectors));
    }
    let elems = K::elements().expect("finite field");
    let mut out: Vec<Vec<K>> = vec![Vec::with_capacity(n)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for v in &out {
            for e in &elems {
                let mut w = v.clone();
                w.push(e.clone());
                next.push(w);
            }
        }
        out = next;
    }
    Ok(out)
}

/// One representative per subspace of `K^n` (prime fields only).
///
/// Walks every reduced row-echelon shape: a pivot set, then every filling of
/// the free positions to the right of each pivot outside pivot columns.
pub fn enumerate_subspaces<K: Scalar>(n: usize, bounds: &Bounds) -> Result<Vec<Subspace<K>>> {
    let total = checked_power::<K>(n)?;
    if total > bounds.max_vectors {
        return Err(Error::bound(
            format!("subspace enumeration of {}^{n}", K::field_name()),
            total,
            bounds.max_vectors,
        ));
    }
    let elems = K::elements().expect("finite field");
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            let mut free = Vec::new();
            for (i, &p) in pivots.iter().enumerate() {
                for c in p + 1..n {
                    if !pivots.contains(&c) {
                        free.push((i, c));
                    }
                }
            }
            let mut counter = vec![0usize; free.len()];
            loop {
                let mut m = Matrix::zeros(k, n);
                for (i, &p) in pivots.iter().enumerate() {
                    m.set(i, p, K::one());
                }
                for (slot, &(i, c)) in free.iter().enumerate() {
                    m.set(i, c, elems[counter[slot]].clone());
                }
                out.push(Subspace {
                    ambient_dim: n,
                    basis: m,
                    pivots: pivots.clone(),
                });
                if !advance(&mut counter, elems.len()) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn advance(counter: &mut [usize], base: usize) -> bool {
    for c in counter.iter_mut().rev() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{Fp, Rational};
    use num_traits::{One, Zero};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    type F2 = Fp<2>;
    type F3 = Fp<3>;

    fn gaussian_binomial(n: u32, k: u32, q: u128) -> u128 {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn dim_zero_has_one_subspace() {
        let subs = enumerate_subspaces::<F2>(0, &Bounds::default()).unwrap();
        assert_eq!(subs.len(), 1);
        assert!(subs[0].is_zero());
    }

    #[test]
    fn dim_one_over_f2() {
        let subs = enumerate_subspaces::<F2>(1, &Bounds::default()).unwrap();
        assert_eq!(subs.len(), 2);
    }

    #[test]
    fn dim_two_over_f2_matches_subset_enumeration() {
        // oracle: all 16 subsets of F_2^2 that contain 0 and are closed under +
        let vecs: Vec<[u64; 2]> = vec![[0, 0], [0, 1], [1, 0], [1, 1]];
        let mut closed = 0;
        for mask in 0u32..16 {
            let set: Vec<[u64; 2]> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| vecs[i]).collect();
            let has_zero = set.contains(&[0, 0]);
            let sum_closed = set
                .iter()
                .all(|a| set.iter().all(|b| set.contains(&[(a[0] + b[0]) % 2, (a[1] + b[1]) % 2])));
            if has_zero && sum_closed {
                closed += 1;
            }
        }
        assert_eq!(closed, 5);
        let subs = enumerate_subspaces::<F2>(2, &Bounds::default()).unwrap();
        assert_eq!(subs.len(), closed);
        let distinct: BTreeSet<_> = subs.iter().cloned().collect();
        assert_eq!(distinct.len(), 5);
    }

    #[test]
    fn counts_match_gaussian_binomials() {
        for n in 0..=5u32 {
            let total: u128 = (0..=n).map(|k| gaussian_binomial(n, k, 2)).sum();
            assert_eq!(enumerate_subspaces::<F2>(n as usize, &Bounds::default()).unwrap().len() as u128, total);
        }
        for n in 0..=3u32 {
            let total: u128 = (0..=n).map(|k| gaussian_binomial(n, k, 3)).sum();
            assert_eq!(enumerate_subspaces::<F3>(n as usize, &Bounds::default()).unwrap().len() as u128, total);
        }
    }

    #[test]
    fn enumeration_errors() {
        assert_eq!(
            enumerate_subspaces::<Rational>(2, &Bounds::default()),
            Err(Error::FieldNotFinite("Q".into()))
        );
        let tight = Bounds {
            max_vectors: 8,
            ..Bounds::default()
        };
        assert!(matches!(
            enumerate_subspaces::<F2>(4, &tight),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn preimage_and_intersection() {
        let o = F3::one();
        let z = F3::zero();
        let line = Subspace::span(2, &[vec![o, o]]);
        // map (x) -> (x, 0): only zero lands on the diagonal
        let m = Matrix::from_rows(1, &[vec![o], vec![z]]);
        assert!(line.preimage(&m).is_zero());
        let m2 = Matrix::from_rows(1, &[vec![o], vec![o]]);
        assert!(line.preimage(&m2).is_full());
        let axis = Subspace::span(2, &[vec![o, z]]);
        assert!(line.intersection(&axis).is_zero());
        assert!(line.sum(&axis).is_full());
    }

    fn arb_vectors() -> impl Strategy<Value = Vec<Vec<F3>>> {
        proptest::collection::vec(proptest::collection::vec((0u64..3).prop_map(F3::new), 4), 0..4)
    }

    proptest! {
        #[test]
        fn intersection_is_largest_common_subspace(a in arb_vectors(), b in arb_vectors()) {
            let s = Subspace::span(4, &a);
            let t = Subspace::span(4, &b);
            let i = s.intersection(&t);
            prop_assert!(i.is_subspace_of(&s) && i.is_subspace_of(&t));
            prop_assert_eq!(i.dim() + s.sum(&t).dim(), s.dim() + t.dim());
        }

        #[test]
        fn elements_are_members(a in arb_vectors()) {
            let s = Subspace::span(4, &a);
            let els = s.elements(&Bounds::default()).unwrap();
            prop_assert_eq!(els.len() as u64, 3u64.pow(s.dim() as u32));
            for e in &els {
                prop_assert!(s.contains(e));
                prop_assert_eq!(s.combine(&s.coordinates(e).unwrap()), e.clone());
            }
        }
    }
}

/// Nonzero vectors of `K^n` whose first nonzero coordinate is one: one
/// representative per line (finite fields only).
pub fn projective_points<K: Scalar>(n: usize, bounds: &Bounds) -> Result<Vec<Vec<K>>> {
    Ok(all_vectors::<K>(n, bounds)?
        .into_iter()
        .filter(|v| v.iter().find(|c| !c.is_zero()).is_some_and(|c| *c == K::one()))
        .collect())
}
