use std::collections::HashMap;

use crate::error::{Error, Result};

pub type ArrowId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexArrow {
    pub name: String,
    pub src: usize,
    pub dst: usize,
}

/// A finite ordinary category with an explicit composition table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexCategory {
    objects: Vec<String>,
    arrows: Vec<IndexArrow>,
    identities: Vec<ArrowId>,
    // g * m + f -> g . f when dst f == src g
    comp: Vec<Option<ArrowId>>,
}

impl IndexCategory {
    /// Builds and validates a category.
    ///
    /// `compose(g, f)` must return `Some(g . f)` exactly when `f` and `g` are
    /// composable.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<IndexArrow>,
        identities: Vec<ArrowId>,
        compose: impl Fn(ArrowId, ArrowId) -> Option<ArrowId>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = arrows.len();
        let bad = |d: String| Error::invalid("index category", d);
        for a in &arrows {
            if a.src >= n || a.dst >= n {
                return Err(bad(format!("arrow `{}` has an endpoint out of range", a.name)));
            }
        }
        let mut seen = HashMap::new();
        for (i, a) in arrows.iter().enumerate() {
            if seen.insert(a.name.clone(), i).is_some() {
                return Err(bad(format!("duplicate arrow `{}`", a.name)));
            }
        }
        if identities.len() != n {
            return Err(bad("one identity per object is required".into()));
        }
        for (o, &i) in identities.iter().enumerate() {
            if i >= m || arrows[i].src != o || arrows[i].dst != o {
                return Err(bad(format!("identity of `{}` is not an endomorphism of it", objects[o])));
            }
        }
        let mut comp = vec![None; m * m];
        for g in 0..m {
            for f in 0..m {
                let composable = arrows[f].dst == arrows[g].src;
                match (composable, compose(g, f)) {
                    (true, Some(h)) => {
                        if h >= m || arrows[h].src != arrows[f].src || arrows[h].dst != arrows[g].dst {
                            return Err(bad(format!(
                                "composite `{}` . `{}` is mistyped",
                                arrows[g].name, arrows[f].name
                            )));
                        }
                        comp[g * m + f] = Some(h);
                    }
                    (true, None) => {
                        return Err(bad(format!(
                            "composite `{}` . `{}` is missing",
                            arrows[g].name, arrows[f].name
                        )))
                    }
                    (false, Some(_)) => {
                        return Err(bad(format!(
                            "`{}` and `{}` are not composable",
                            arrows[g].name, arrows[f].name
                        )))
                    }
                    (false, None) => {}
                }
            }
        }
        let cat = IndexCategory {
            objects,
            arrows,
            identities,
            comp,
        };
        cat.check_laws()?;
        Ok(cat)
    }

    fn check_laws(&self) -> Result<()> {
        let bad = |d: String| Error::invalid("index category", d);
        for (f, a) in self.arrows.iter().enumerate() {
            if self.compose(self.identities[a.dst], f) != f || self.compose(f, self.identities[a.src]) != f {
                return Err(bad(format!("identity law fails on `{}`", a.name)));
            }
        }
        let m = self.arrows.len();
        for f in 0..m {
            for g in 0..m {
                let Some(gf) = self.try_compose(g, f) else { continue };
                for h in 0..m {
                    let Some(hg) = self.try_compose(h, g) else { continue };
                    if self.compose(h, gf) != self.compose(hg, f) {
                        return Err(bad(format!(
                            "associativity fails on `{}`, `{}`, `{}`",
                            self.arrows[h].name, self.arrows[g].name, self.arrows[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The category of a preorder: one arrow `a<=b` whenever `a <= b` in the
    /// reflexive-transitive closure of `relations`.
    pub fn from_preorder(objects: &[&str], relations: &[(usize, usize)]) -> Result<Self> {
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
        let mut arrows = Vec::new();
        let mut id_of = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if le[a * n + b] {
                    let name = if a == b {
                        format!("id_{}", objects[a])
                    } else {
                        format!("{}<={}", objects[a], objects[b])
                    };
                    id_of.insert((a, b), arrows.len());
                    arrows.push(IndexArrow { name, src: a, dst: b });
                }
            }
        }
        let identities = (0..n).map(|a| id_of[&(a, a)]).collect();
        let arrows2 = arrows.clone();
        IndexCategory::new(
            objects.iter().map(|s| s.to_string()).collect(),
            arrows,
            identities,
            |g, f| {
                (arrows2[f].dst == arrows2[g].src).then(|| id_of[&(arrows2[f].src, arrows2[g].dst)])
            },
        )
    }

    /// The chain `A0 -> A1 -> ... -> A(len-1)`.
    pub fn chain(len: usize) -> Result<Self> {
        let names: Vec<String> = (0..len).map(|i| format!("A{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let rel: Vec<(usize, usize)> = (1..len).map(|i| (i - 1, i)).collect();
        Self::from_preorder(&refs, &rel)
    }

    /// A one-object category from a finite monoid; element 0 is the unit.
    pub fn monoid(object: &str, elements: &[&str], mul: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let arrows = elements
            .iter()
            .map(|e| IndexArrow {
                name: e.to_string(),
                src: 0,
                dst: 0,
            })
            .collect();
        let k = elements.len();
        IndexCategory::new(vec![object.to_string()], arrows, vec![0], |g, f| {
            let h = mul(g, f);
            (h < k).then_some(h)
        })
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_name(&self, a: usize) -> &str {
        &self.objects[a]
    }

    pub fn object_id(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn arrow(&self, f: ArrowId) -> &IndexArrow {
        &self.arrows[f]
    }

    pub fn arrows(&self) -> &[IndexArrow] {
        &self.arrows
    }

    pub fn arrow_id(&self, name: &str) -> Result<ArrowId> {
        self.arrows
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::invalid("index arrow", format!("unknown arrow `{name}`")))
    }

    pub fn src(&self, f: ArrowId) -> usize {
        self.arrows[f].src
    }

    pub fn dst(&self, f: ArrowId) -> usize {
        self.arrows[f].dst
    }

    pub fn identity(&self, a: usize) -> ArrowId {
        self.identities[a]
    }

    pub fn is_identity(&self, f: ArrowId) -> bool {
        self.identities[self.arrows[f].src] == f
    }

    pub fn try_compose(&self, g: ArrowId, f: ArrowId) -> Option<ArrowId> {
        self.comp[g * self.arrows.len() + f]
    }

    /// `g . f`; panics if the arrows are not composable.
    pub fn compose(&self, g: ArrowId, f: ArrowId) -> ArrowId {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "`{}` . `{}` is not defined",
                self.arrows[g].name, self.arrows[f].name
            )
        })
    }

    pub fn arrows_from(&self, a: usize) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(move |&f| self.arrows[f].src == a)
    }

    pub fn arrows_between(&self, a: usize, b: usize) -> impl Iterator<Item = ArrowId> + '_ {
        (0..self.arrows.len()).filter(move |&f| self.arrows[f].src == a && self.arrows[f].dst == b)
    }
}

/// An index category together with filteredness certificates: a cospan for
/// every pair of objects and an equalizing arrow for every parallel pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredIndex {
    cat: IndexCategory,
    cospans: Vec<(ArrowId, ArrowId)>,
    equalizers: HashMap<(ArrowId, ArrowId), ArrowId>,
}

impl FilteredIndex {
    /// Finds the lexicographically first certificates, or fails if the
    /// category is not filtered.
    pub fn certify(cat: IndexCategory) -> Result<Self> {
        Self::with_certificates(cat, &HashMap::new(), &HashMap::new())
    }

    /// Validates the supplied certificates and searches for the missing ones.
    pub fn with_certificates(
        cat: IndexCategory,
        cospans: &HashMap<(usize, usize), (ArrowId, ArrowId)>,
        equalizers: &HashMap<(ArrowId, ArrowId), ArrowId>,
    ) -> Result<Self> {
        let n = cat.num_objects();
        let m = cat.num_arrows();
        if n == 0 {
            return Err(Error::invalid("filtered index", "the empty category is not filtered"));
        }
        let bad = |d: String| Error::invalid("filtered index", d);
        let mut cs = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let pair = match cospans.get(&(a, b)) {
                    Some(&(u, v)) => {
                        if u >= m || v >= m || cat.src(u) != a || cat.src(v) != b || cat.dst(u) != cat.dst(v) {
                            return Err(bad(format!(
                                "cospan certificate for ({}, {}) is mistyped",
                                cat.object_name(a),
                                cat.object_name(b)
                            )));
                        }
                        (u, v)
                    }
                    None => (0..m)
                        .filter(|&u| cat.src(u) == a)
                        .find_map(|u| cat.arrows_between(b, cat.dst(u)).next().map(|v| (u, v)))
                        .ok_or_else(|| {
                            bad(format!(
                                "no cospan for ({}, {})",
                                cat.object_name(a),
                                cat.object_name(b)
                            ))
                        })?,
                };
                cs.push(pair);
            }
        }
        let mut eqs = HashMap::new();
        for f in 0..m {
            for g in 0..m {
                if cat.src(f) != cat.src(g) || cat.dst(f) != cat.dst(g) {
                    continue;
                }
                let w = match equalizers.get(&(f, g)) {
                    Some(&w) => {
                        if w >= m
                            || cat.src(w) != cat.dst(f)
                            || cat.compose(w, f) != cat.compose(w, g)
                        {
                            return Err(bad(format!(
                                "equalizer certificate for (`{}`, `{}`) fails",
                                cat.arrow(f).name,
                                cat.arrow(g).name
                            )));
                        }
                        w
                    }
                    None => cat
                        .arrows_from(cat.dst(f))
                        .find(|&w| cat.compose(w, f) == cat.compose(w, g))
                        .ok_or_else(|| {
                            bad(format!(
                                "no arrow equalizes `{}` and `{}`",
                                cat.arrow(f).name,
                                cat.arrow(g).name
                            ))
                        })?,
                };
                eqs.insert((f, g), w);
            }
        }
        Ok(FilteredIndex {
            cat,
            cospans: cs,
            equalizers: eqs,
        })
    }

    pub fn category(&self) -> &IndexCategory {
        &self.cat
    }

    /// Certified cospan `a -> c <- b`.
    pub fn cospan(&self, a: usize, b: usize) -> (ArrowId, ArrowId) {
        self.cospans[a * self.cat.num_objects() + b]
    }

    /// Certified `w` with `w . f == w . g`.
    pub fn equalizer(&self, f: ArrowId, g: ArrowId) -> ArrowId {
        self.equalizers[&(f, g)]
    }

    /// Arrows `s: c1 -> e`, `t: c2 -> e` with `s . x == t . y`, for
    /// `x: b -> c1` and `y: b -> c2`.
    pub fn complete_square(&self, x: ArrowId, y: ArrowId) -> (ArrowId, ArrowId) {
        let (s, t) = self.cospan(self.cat.dst(x), self.cat.dst(y));
        let w = self.equalizer(self.cat.compose(s, x), self.cat.compose(t, y));
        (self.cat.compose(w, s), self.cat.compose(w, t))
    }

    /// Arrows out of `c1` and `c2` to a common object that agree on two
    /// pairs of parallel legs: `s . x1 == t . y1` and `s . x2 == t . y2`.
    pub fn complete_double_square(
        &self,
        (x1, x2): (ArrowId, ArrowId),
        (y1, y2): (ArrowId, ArrowId),
    ) -> (ArrowId, ArrowId) {
        let (s, t) = self.complete_square(x1, y1);
        let w = self.equalizer(self.cat.compose(s, x2), self.cat.compose(t, y2));
        (self.cat.compose(w, s), self.cat.compose(w, t))
    }
}

impl std::ops::Deref for FilteredIndex {
    type Target = IndexCategory;

    fn deref(&self) -> &IndexCategory {
        &self.cat
    }
}
