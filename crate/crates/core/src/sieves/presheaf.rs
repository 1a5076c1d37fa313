use std::fmt;

use crate::error::{Bounds, Error, Result};
use crate::exactalg::{all_vectors, Matrix, Scalar};
use crate::lincat::{LinCategory, LinFunctor, ObjId};

/// A right module over a finite linear category: a finite-dimensional
/// value per object and, for each basis morphism `f: a -> b`, a matrix
/// `F(b) -> F(a)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Presheaf<K> {
    dims: Vec<usize>,
    // indexed by a * n + b, then by basis index of hom(a, b)
    actions: Vec<Vec<Matrix<K>>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresheafViolation {
    Shape(String),
    Identity { object: String },
    Composition { g: String, f: String },
}

impl fmt::Display for PresheafViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresheafViolation::Shape(s) => write!(f, "{s}"),
            PresheafViolation::Identity { object } => write!(f, "identity of `{object}` does not act trivially"),
            PresheafViolation::Composition { g, f: ff } => {
                write!(f, "action of {g} . {ff} is not the composite action")
            }
        }
    }
}

impl<K: Scalar> Presheaf<K> {
    /// Assembles a presheaf and checks functoriality.
    pub fn new(c: &LinCategory<K>, dims: Vec<usize>, actions: Vec<Vec<Matrix<K>>>) -> Result<Self> {
        let p = Presheaf { dims, actions };
        p.validate(c).map_err(|v| Error::invalid("presheaf", v.to_string()))?;
        Ok(p)
    }

    /// `hom(-, x)` with actions by precomposition.
    pub fn representable(c: &LinCategory<K>, x: ObjId) -> Self {
        let n = c.num_objects();
        let dims = (0..n).map(|a| c.hom_dim(a, x)).collect();
        let actions = (0..n * n)
            .map(|ab| {
                let (a, b) = (ab / n, ab % n);
                (0..c.hom_dim(a, b))
                    .map(|i| c.pre_composition(a, b, x, &c.basis_vector(a, b, i)))
                    .collect()
            })
            .collect();
        Presheaf { dims, actions }
    }

    pub fn zero(c: &LinCategory<K>) -> Self {
        let n = c.num_objects();
        Presheaf {
            dims: vec![0; n],
            actions: (0..n * n)
                .map(|ab| vec![Matrix::zeros(0, 0); c.hom_dim(ab / n, ab % n)])
                .collect(),
        }
    }

    pub fn num_objects(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn value_dim(&self, a: ObjId) -> usize {
        self.dims[a]
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn action_basis(&self, a: ObjId, b: ObjId, i: usize) -> &Matrix<K> {
        &self.actions[a * self.num_objects() + b][i]
    }

    /// `F(f): F(b) -> F(a)` for `f: a -> b` in coordinates.
    pub fn action(&self, a: ObjId, b: ObjId, f: &[K]) -> Matrix<K> {
        let mut out = Matrix::<K>::zeros(self.dims[a], self.dims[b]);
        for (i, coeff) in f.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let m = self.action_basis(a, b, i);
            for r in 0..out.rows() {
                for col in 0..out.cols() {
                    let v = out.get(r, col).clone() + coeff.clone() * m.get(r, col).clone();
                    out.set(r, col, v);
                }
            }
        }
        out
    }

    pub fn validate(&self, c: &LinCategory<K>) -> std::result::Result<(), PresheafViolation> {
        let n = c.num_objects();
        if self.dims.len() != n || self.actions.len() != n * n {
            return Err(PresheafViolation::Shape(format!(
                "presheaf has {} values for {n} objects",
                self.dims.len()
            )));
        }
        for a in 0..n {
            for b in 0..n {
                let acts = &self.actions[a * n + b];
                if acts.len() != c.hom_dim(a, b) {
                    return Err(PresheafViolation::Shape(format!(
                        "{} actions for hom(`{}`, `{}`) of dimension {}",
                        acts.len(),
                        c.object_name(a),
                        c.object_name(b),
                        c.hom_dim(a, b)
                    )));
                }
                if let Some(m) = acts.iter().find(|m| m.rows() != self.dims[a] || m.cols() != self.dims[b]) {
                    return Err(PresheafViolation::Shape(format!(
                        "action of a morphism `{}` -> `{}` is {}x{}, expected {}x{}",
                        c.object_name(a),
                        c.object_name(b),
                        m.rows(),
                        m.cols(),
                        self.dims[a],
                        self.dims[b]
                    )));
                }
            }
        }
        for a in 0..n {
            if let Some(v) = self.identity_violation(c, a) {
                return Err(v);
            }
        }
        for a in 0..n {
            for b in 0..n {
                for d in 0..n {
                    if let Some(v) = self.composition_violation(c, a, b, d) {
                        return Err(v);
                    }
                }
            }
        }
        Ok(())
    }

    fn identity_violation(&self, c: &LinCategory<K>, a: ObjId) -> Option<PresheafViolation> {
        (self.action(a, a, c.identity(a)) != Matrix::identity(self.dims[a])).then(|| PresheafViolation::Identity {
            object: c.object_name(a).to_string(),
        })
    }

    // f: a -> b, g: b -> d; F(g . f) = F(f) F(g)
    fn composition_violation(&self, c: &LinCategory<K>, a: ObjId, b: ObjId, d: ObjId) -> Option<PresheafViolation> {
        for g in 0..c.hom_dim(b, d) {
            for f in 0..c.hom_dim(a, b) {
                let gf = c.compose_basis(a, b, d, g, f);
                let lhs = self.action(a, d, gf);
                let rhs = self.action_basis(a, b, f).mul(self.action_basis(b, d, g));
                if lhs != rhs {
                    return Some(PresheafViolation::Composition {
                        g: c.hom_basis(b, d)[g].clone(),
                        f: c.hom_basis(a, b)[f].clone(),
                    });
                }
            }
        }
        None
    }

    /// Restriction of scalars `F . f` along `f: src -> dst`.
    pub fn restrict(&self, f: &LinFunctor<K>, src: &LinCategory<K>) -> Presheaf<K> {
        let n = src.num_objects();
        let dims = (0..n).map(|a| self.dims[f.obj(a)]).collect();
        let actions = (0..n * n)
            .map(|ab| {
                let (a, b) = (ab / n, ab % n);
                let m = f.hom_map(a, b);
                (0..src.hom_dim(a, b))
                    .map(|i| self.action(f.obj(a), f.obj(b), &m.col(i)))
                    .collect()
            })
            .collect();
        Presheaf { dims, actions }
    }
}

/// `f^* F = F . f`.
pub fn restrict_presheaf<K: Scalar>(f: &LinFunctor<K>, src: &LinCategory<K>, presheaf: &Presheaf<K>) -> Presheaf<K> {
    presheaf.restrict(f, src)
}

/// Every presheaf on `c` with all values of dimension at most `max_dim`
/// (finite fields only).
///
/// Hom blocks are filled one at a time; identity and composition constraints
/// are checked as soon as the blocks they mention are fixed. Every examined
/// block candidate counts against `bounds.max_functors`.
pub fn enumerate_presheaves<K: Scalar>(c: &LinCategory<K>, max_dim: usize, bounds: &Bounds) -> Result<Vec<Presheaf<K>>> {
    if K::order().is_none() {
        return Err(Error::FieldNotFinite(K::field_name()));
    }
    let n = c.num_objects();
    let mut out = Vec::new();
    let mut spent: u128 = 0;
    let mut dims = vec![0usize; n];
    loop {
        enumerate_with_dims(c, &dims, bounds, &mut spent, &mut out)?;
        // next dimension vector
        let mut i = 0;
        loop {
            if i == n {
                return Ok(out);
            }
            dims[i] += 1;
            if dims[i] <= max_dim {
                break;
            }
            dims[i] = 0;
            i += 1;
        }
    }
}

fn enumerate_with_dims<K: Scalar>(
    c: &LinCategory<K>,
    dims: &[usize],
    bounds: &Bounds,
    spent: &mut u128,
    out: &mut Vec<Presheaf<K>>,
) -> Result<()> {
    let n = c.num_objects();
    let blocks: Vec<(ObjId, ObjId)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let mut options: Vec<Vec<Vec<Matrix<K>>>> = Vec::with_capacity(blocks.len());
    for &(a, b) in &blocks {
        let entries = dims[a] * dims[b];
        let count = c.hom_dim(a, b);
        let vecs = all_vectors::<K>(entries * count, bounds)?;
        options.push(
            vecs.into_iter()
                .map(|v| {
                    (0..count)
                        .map(|i| Matrix::new(dims[a], dims[b], v[i * entries..(i + 1) * entries].to_vec()))
                        .collect()
                })
                .collect(),
        );
    }
    let mut current = Presheaf {
        dims: dims.to_vec(),
        actions: blocks.iter().map(|&(a, b)| vec![Matrix::zeros(dims[a], dims[b]); c.hom_dim(a, b)]).collect(),
    };
    let mut assigned = vec![false; blocks.len()];
    fill(c, &blocks, &options, 0, &mut current, &mut assigned, bounds, spent, out)
}

#[allow(clippy::too_many_arguments)]
fn fill<K: Scalar>(
    c: &LinCategory<K>,
    blocks: &[(ObjId, ObjId)],
    options: &[Vec<Vec<Matrix<K>>>],
    k: usize,
    current: &mut Presheaf<K>,
    assigned: &mut Vec<bool>,
    bounds: &Bounds,
    spent: &mut u128,
    out: &mut Vec<Presheaf<K>>,
) -> Result<()> {
    if k == blocks.len() {
        out.push(current.clone());
        return Ok(());
    }
    let n = c.num_objects();
    let (a, b) = blocks[k];
    for opt in &options[k] {
        *spent += 1;
        if *spent > bounds.max_functors {
            return Err(Error::bound("presheaf candidates", *spent, bounds.max_functors));
        }
        current.actions[k] = opt.clone();
        assigned[k] = true;
        let mut ok = a != b || current.identity_violation(c, a).is_none();
        // triples touching block k whose three blocks are all fixed
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let touches = (x, y) == (a, b) || (y, z) == (a, b) || (x, z) == (a, b);
                    if !ok || !touches {
                        continue;
                    }
                    if assigned[x * n + y] && assigned[y * n + z] && assigned[x * n + z]
                        && current.composition_violation(c, x, y, z).is_some()
                    {
                        ok = false;
                        break 'outer;
                    }
                }
            }
        }
        if ok {
            fill(c, blocks, options, k + 1, current, assigned, bounds, spent, out)?;
        }
        assigned[k] = false;
    }
    Ok(())
}
