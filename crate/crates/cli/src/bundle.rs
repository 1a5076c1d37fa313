//! Bundle documents: parsing into validated objects over a fixed field.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use lincolim::colimit::{FilteredIndex, IndexArrow, IndexCategory, PseudoFunctor};
use lincolim::exactalg::{is_prime, Matrix, Scalar, Subspace};
use lincolim::lincat::{
    builders, full_subcategory_by_name, tensor_category, LinCategory, LinFunctor, LinNatTrans, Morphism, ObjId,
};
use lincolim::sieves::{Presheaf, Sieve};
use lincolim::topology::{canonical_topology, generate_topology, CoverSystem, Topology};
use lincolim::Bounds;
use serde_json::Value;

use crate::node::{BundleError, Node, Parse};

pub const SCHEMA_VERSION: u64 = 1;

/// Largest modulus with a compiled prime field.
pub const MAX_PRIME: u64 = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Prime(u64),
    Rational,
}

const TOP_KEYS: &[&str] = &[
    "schema_version",
    "description",
    "field",
    "categories",
    "functors",
    "presheaves",
    "sieves",
    "cover_systems",
    "topologies",
    "pseudofunctors",
    "chains",
    "presentations",
];

pub fn read_document(path: &Path) -> Parse<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| BundleError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    serde_json::from_str(&text).map_err(|e| BundleError::Syntax(e.to_string()))
}

/// Checks the schema version and reads the declared field.
pub fn field_of(doc: &Value) -> Parse<Field> {
    let root = Node::root(doc);
    root.only_keys(TOP_KEYS)?;
    let v = root.get("schema_version")?;
    if v.value.as_u64() != Some(SCHEMA_VERSION) {
        return Err(v.error(format!("unsupported schema version {}, expected {SCHEMA_VERSION}", v.value)));
    }
    let field = root.get("field")?;
    let kind = field.get("kind")?;
    match kind.str()? {
        "rational" => {
            field.only_keys(&["kind"])?;
            Ok(Field::Rational)
        }
        "prime" => {
            field.only_keys(&["kind", "p"])?;
            let pn = field.get("p")?;
            let p = pn.usize()? as u64;
            if !is_prime(p) {
                return Err(BundleError::Modulus {
                    pointer: pn.pointer().to_string(),
                    p,
                });
            }
            if p > MAX_PRIME {
                return Err(pn.error(format!("moduli above {MAX_PRIME} are not supported")));
            }
            Ok(Field::Prime(p))
        }
        other => Err(kind.error(format!("unknown field kind \"{other}\""))),
    }
}

pub struct FunctorEntry<K> {
    pub src: String,
    pub dst: String,
    pub functor: LinFunctor<K>,
}

pub struct PresheafEntry<K> {
    pub category: String,
    pub presheaf: Presheaf<K>,
}

pub struct SieveEntry<K> {
    pub category: String,
    pub sieve: Sieve<K>,
}

pub struct CoverEntry<K> {
    pub category: String,
    pub system: CoverSystem<K>,
}

pub struct TopologyEntry<K> {
    pub category: String,
    pub topology: Topology<K>,
}

pub struct PseudoEntry<K> {
    pub fibers: Vec<String>,
    pub pseudofunctor: PseudoFunctor<K>,
}

pub struct ChainEntry {
    pub category: String,
    pub subsets: Vec<Vec<ObjId>>,
}

pub enum PresentationSpec {
    /// The inclusion of the full subcategory on these objects.
    Full(Vec<ObjId>),
    Functor { topology: String, functor: String },
}

pub struct PresentationEntry {
    pub ambient: String,
    pub spec: PresentationSpec,
}

pub struct Bundle<K> {
    pub categories: BTreeMap<String, LinCategory<K>>,
    pub functors: BTreeMap<String, FunctorEntry<K>>,
    pub presheaves: BTreeMap<String, PresheafEntry<K>>,
    pub sieves: BTreeMap<String, SieveEntry<K>>,
    pub cover_systems: BTreeMap<String, CoverEntry<K>>,
    pub topologies: BTreeMap<String, TopologyEntry<K>>,
    pub pseudofunctors: BTreeMap<String, PseudoEntry<K>>,
    pub chains: BTreeMap<String, ChainEntry>,
    pub presentations: BTreeMap<String, PresentationEntry>,
}

fn section<'a>(root: &Node<'a>, key: &str) -> Parse<Vec<(&'a str, Node<'a>)>> {
    match root.opt(key)? {
        Some(n) => n.entries(),
        None => Ok(Vec::new()),
    }
}

fn object_ref(c: &LinCategory<impl Scalar>, cat: &str, n: &Node) -> Parse<ObjId> {
    let name = n.str()?;
    c.object_id(name)
        .map_err(|_| n.error(format!("category `{cat}` has no object `{name}`")))
}

fn lookup<'m, V>(map: &'m BTreeMap<String, V>, kind: &'static str, n: &Node) -> Parse<(&'m str, &'m V)> {
    let name = n.str()?;
    map.get_key_value(name)
        .map(|(k, v)| (k.as_str(), v))
        .ok_or_else(|| n.dangling(kind, name))
}

fn core_error(n: &Node, e: lincolim::Error) -> BundleError {
    match e {
        lincolim::Error::BoundExceeded { .. } | lincolim::Error::FieldNotFinite(_) => BundleError::Construction {
            pointer: n.pointer().to_string(),
            message: e.to_string(),
        },
        e => n.error(e.to_string()),
    }
}

impl<K: Scalar> Bundle<K> {
    pub fn parse(doc: &Value, bounds: &Bounds) -> Parse<Self> {
        field_of(doc)?;
        let root = Node::root(doc);
        let mut b = Bundle {
            categories: BTreeMap::new(),
            functors: BTreeMap::new(),
            presheaves: BTreeMap::new(),
            sieves: BTreeMap::new(),
            cover_systems: BTreeMap::new(),
            topologies: BTreeMap::new(),
            pseudofunctors: BTreeMap::new(),
            chains: BTreeMap::new(),
            presentations: BTreeMap::new(),
        };
        let raw = section(&root, "categories")?;
        let mut visiting = BTreeSet::new();
        for (name, n) in &raw {
            b.resolve_category(name, n, &raw, &mut visiting)?;
        }
        for (name, n) in section(&root, "functors")? {
            let f = b.functor(&n)?;
            b.functors.insert(name.to_string(), f);
        }
        for (name, n) in section(&root, "presheaves")? {
            let p = b.presheaf(&n)?;
            b.presheaves.insert(name.to_string(), p);
        }
        for (name, n) in section(&root, "sieves")? {
            let s = b.sieve(&n)?;
            b.sieves.insert(name.to_string(), s);
        }
        for (name, n) in section(&root, "cover_systems")? {
            let s = b.cover_system(&n)?;
            b.cover_systems.insert(name.to_string(), s);
        }
        for (name, n) in section(&root, "topologies")? {
            let t = b.topology(&n, bounds)?;
            b.topologies.insert(name.to_string(), t);
        }
        for (name, n) in section(&root, "pseudofunctors")? {
            let p = b.pseudofunctor(&n)?;
            b.pseudofunctors.insert(name.to_string(), p);
        }
        for (name, n) in section(&root, "chains")? {
            let c = b.chain(&n)?;
            b.chains.insert(name.to_string(), c);
        }
        for (name, n) in section(&root, "presentations")? {
            let p = b.presentation(&n)?;
            b.presentations.insert(name.to_string(), p);
        }
        Ok(b)
    }

    fn category_ref(&self, n: &Node) -> Parse<(String, &LinCategory<K>)> {
        let (k, c) = lookup(&self.categories, "category", n)?;
        Ok((k.to_string(), c))
    }

    fn resolve_category(
        &mut self,
        name: &str,
        at: &Node,
        raw: &[(&str, Node)],
        visiting: &mut BTreeSet<String>,
    ) -> Parse<()> {
        if self.categories.contains_key(name) {
            return Ok(());
        }
        let Some((_, n)) = raw.iter().find(|(k, _)| *k == name) else {
            return Err(at.dangling("category", name));
        };
        if !visiting.insert(name.to_string()) {
            return Err(n.error(format!("category `{name}` is defined in terms of itself")));
        }
        let c = match n.opt("builder")? {
            None => explicit_category(n)?,
            Some(kind) => {
                // a builder may refer to other categories
                for key in ["of", "left", "right"] {
                    if let Some(r) = n.opt(key)? {
                        self.resolve_category(r.str()?, &r, raw, visiting)?;
                    }
                }
                self.built_category(n, &kind)?
            }
        };
        visiting.remove(name);
        self.categories.insert(name.to_string(), c);
        Ok(())
    }

    fn built_category(&self, n: &Node, kind: &Node) -> Parse<LinCategory<K>> {
        let names = |key: &str| -> Parse<Vec<&str>> { n.get(key)?.strings() };
        let positions = |objs: &[&str], r: &Node| -> Parse<ObjId> {
            let s = r.str()?;
            objs.iter()
                .position(|o| *o == s)
                .ok_or_else(|| r.error(format!("no object `{s}` among the listed objects")))
        };
        let c = match kind.str()? {
            "unit" => {
                n.only_keys(&["builder", "object"])?;
                Ok(builders::unit_category(n.get("object")?.str()?))
            }
            "truncated_polynomial" => {
                n.only_keys(&["builder", "object", "n"])?;
                builders::truncated_polynomial(n.get("object")?.str()?, n.get("n")?.usize()?)
            }
            "codiscrete" => {
                n.only_keys(&["builder", "objects"])?;
                builders::codiscrete_category(&names("objects")?)
            }
            "incidence" => {
                n.only_keys(&["builder", "objects", "relations"])?;
                let objs = names("objects")?;
                let mut rel = Vec::new();
                for r in n.get("relations")?.items()? {
                    let pair = r.items()?;
                    if pair.len() != 2 {
                        return Err(r.error("a relation is a pair of objects"));
                    }
                    rel.push((positions(&objs, &pair[0])?, positions(&objs, &pair[1])?));
                }
                builders::incidence_category(&objs, &rel)
            }
            "path" => {
                n.only_keys(&["builder", "objects", "arrows", "max_length"])?;
                let objs = names("objects")?;
                let mut arrows = Vec::new();
                for a in n.get("arrows")?.items()? {
                    a.only_keys(&["name", "src", "dst"])?;
                    arrows.push((
                        a.get("name")?.str()?.to_string(),
                        positions(&objs, &a.get("src")?)?,
                        positions(&objs, &a.get("dst")?)?,
                    ));
                }
                let max_len = n.opt("max_length")?.map(|m| m.usize()).transpose()?;
                builders::named_path_category(&objs, &arrows, max_len)
            }
            "full_subcategory" => {
                n.only_keys(&["builder", "of", "objects"])?;
                let (of, c) = self.category_ref(&n.get("of")?)?;
                let on = n.get("objects")?;
                for o in on.items()? {
                    object_ref(c, &of, &o)?;
                }
                full_subcategory_by_name(c, &on.strings()?).map(|(s, _)| s)
            }
            "tensor" => {
                n.only_keys(&["builder", "left", "right"])?;
                let (_, a) = self.category_ref(&n.get("left")?)?;
                let (_, b) = self.category_ref(&n.get("right")?)?;
                Ok(tensor_category(a, b))
            }
            other => return Err(kind.error(format!("unknown builder \"{other}\""))),
        };
        c.map_err(|e| core_error(n, e))
    }

    fn functor(&self, n: &Node) -> Parse<FunctorEntry<K>> {
        let kind = match n.opt("kind")? {
            Some(k) => k.str()?.to_string(),
            None => "explicit".to_string(),
        };
        match kind.as_str() {
            "identity" => {
                n.only_keys(&["kind", "category"])?;
                let (name, c) = self.category_ref(&n.get("category")?)?;
                Ok(FunctorEntry {
                    src: name.clone(),
                    dst: name,
                    functor: LinFunctor::identity(c),
                })
            }
            "inclusion" => {
                n.only_keys(&["kind", "src", "dst"])?;
                let (sn, src) = self.category_ref(&n.get("src")?)?;
                let (dn, dst) = self.category_ref(&n.get("dst")?)?;
                let mut obj_map = Vec::new();
                for o in src.objects() {
                    let t = dst
                        .object_id(o)
                        .map_err(|_| n.error(format!("`{dn}` has no object `{o}` to include")))?;
                    obj_map.push(t);
                }
                for a in 0..src.num_objects() {
                    for b in 0..src.num_objects() {
                        if src.hom_dim(a, b) != dst.hom_dim(obj_map[a], obj_map[b]) {
                            return Err(n.error(format!(
                                "hom(`{}`, `{}`) differs in `{sn}` and `{dn}`",
                                src.object_name(a),
                                src.object_name(b)
                            )));
                        }
                    }
                }
                let functor = LinFunctor::from_basis_images(src, dst, obj_map, |a, b, i| {
                    lincolim::exactalg::unit_vector(src.hom_dim(a, b), i)
                });
                Ok(FunctorEntry { src: sn, dst: dn, functor })
            }
            "explicit" => {
                n.only_keys(&["kind", "src", "dst", "objects", "homs"])?;
                let (sn, src) = self.category_ref(&n.get("src")?)?;
                let (dn, dst) = self.category_ref(&n.get("dst")?)?;
                let on = n.get("objects")?;
                let mut obj_map = vec![None; src.num_objects()];
                for (k, v) in on.entries()? {
                    let a = src
                        .object_id(k)
                        .map_err(|_| v.error(format!("`{sn}` has no object `{k}`")))?;
                    obj_map[a] = Some(object_ref(dst, &dn, &v)?);
                }
                let obj_map: Vec<ObjId> = obj_map
                    .into_iter()
                    .enumerate()
                    .map(|(a, t)| t.ok_or_else(|| on.error(format!("no image for `{}`", src.object_name(a)))))
                    .collect::<Parse<_>>()?;
                let ns = src.num_objects();
                let mut maps: Vec<Option<Matrix<K>>> = vec![None; ns * ns];
                if let Some(h) = n.opt("homs")? {
                    for item in h.items()? {
                        item.only_keys(&["src", "dst", "images"])?;
                        let a = object_ref(src, &sn, &item.get("src")?)?;
                        let b = object_ref(src, &sn, &item.get("dst")?)?;
                        if maps[a * ns + b].is_some() {
                            return Err(item.error("hom given twice"));
                        }
                        let images = item.get("images")?;
                        let cols = images.rows::<K>(dst.hom_dim(obj_map[a], obj_map[b]))?;
                        if cols.len() != src.hom_dim(a, b) {
                            return Err(images.error(format!(
                                "expected one image per basis element, {} in all",
                                src.hom_dim(a, b)
                            )));
                        }
                        maps[a * ns + b] = Some(Matrix::from_cols(dst.hom_dim(obj_map[a], obj_map[b]), &cols));
                    }
                }
                let maps = maps
                    .into_iter()
                    .enumerate()
                    .map(|(ab, m)| {
                        m.unwrap_or_else(|| {
                            Matrix::zeros(dst.hom_dim(obj_map[ab / ns], obj_map[ab % ns]), src.hom_dim(ab / ns, ab % ns))
                        })
                    })
                    .collect();
                let functor = LinFunctor::new(obj_map, maps).map_err(|e| core_error(n, e))?;
                Ok(FunctorEntry { src: sn, dst: dn, functor })
            }
            other => Err(n.get("kind")?.error(format!("unknown functor kind \"{other}\""))),
        }
    }

    fn presheaf(&self, n: &Node) -> Parse<PresheafEntry<K>> {
        let (cn, c) = self.category_ref(&n.get("category")?)?;
        if let Some(r) = n.opt("representable")? {
            n.only_keys(&["category", "representable"])?;
            let x = object_ref(c, &cn, &r)?;
            return Ok(PresheafEntry {
                category: cn,
                presheaf: Presheaf::representable(c, x),
            });
        }
        n.only_keys(&["category", "dims", "actions"])?;
        let nc = c.num_objects();
        let dn = n.get("dims")?;
        let mut dims = vec![None; nc];
        for (k, v) in dn.entries()? {
            let a = c.object_id(k).map_err(|_| v.error(format!("`{cn}` has no object `{k}`")))?;
            dims[a] = Some(v.usize()?);
        }
        let dims: Vec<usize> = dims
            .into_iter()
            .enumerate()
            .map(|(a, d)| d.ok_or_else(|| dn.error(format!("no dimension for `{}`", c.object_name(a)))))
            .collect::<Parse<_>>()?;
        let mut actions: Vec<Vec<Option<Matrix<K>>>> =
            (0..nc * nc).map(|ab| vec![None; c.hom_dim(ab / nc, ab % nc)]).collect();
        if let Some(an) = n.opt("actions")? {
            for item in an.items()? {
                item.only_keys(&["src", "dst", "basis", "matrix"])?;
                let a = object_ref(c, &cn, &item.get("src")?)?;
                let b = object_ref(c, &cn, &item.get("dst")?)?;
                let bn = item.get("basis")?;
                let i = match bn.value {
                    Value::String(s) => c.hom_basis(a, b).iter().position(|x| x == s),
                    _ => Some(bn.usize()?).filter(|&i| i < c.hom_dim(a, b)),
                }
                .ok_or_else(|| bn.error("not a basis element of this hom"))?;
                if actions[a * nc + b][i].is_some() {
                    return Err(item.error("action given twice"));
                }
                actions[a * nc + b][i] = Some(item.get("matrix")?.matrix(dims[a], dims[b])?);
            }
        }
        let actions = actions
            .into_iter()
            .enumerate()
            .map(|(ab, v)| {
                v.into_iter()
                    .map(|m| m.unwrap_or_else(|| Matrix::zeros(dims[ab / nc], dims[ab % nc])))
                    .collect()
            })
            .collect();
        let presheaf = Presheaf::new(c, dims, actions).map_err(|e| core_error(n, e))?;
        Ok(PresheafEntry { category: cn, presheaf })
    }

    fn sieve(&self, n: &Node) -> Parse<SieveEntry<K>> {
        n.only_keys(&["category", "target", "components", "generators", "maximal"])?;
        let (cn, c) = self.category_ref(&n.get("category")?)?;
        let target = object_ref(c, &cn, &n.get("target")?)?;
        let given = ["components", "generators", "maximal"]
            .iter()
            .filter(|k| n.opt(k).ok().flatten().is_some())
            .count();
        if given != 1 {
            return Err(n.error("give exactly one of \"components\", \"generators\", \"maximal\""));
        }
        let sieve = if let Some(m) = n.opt("maximal")? {
            if !m.bool()? {
                return Err(m.error("only `true` is meaningful here"));
            }
            Sieve::maximal(c, target)
        } else if let Some(g) = n.opt("generators")? {
            let mut family = Vec::new();
            for item in g.items()? {
                item.only_keys(&["src", "coords"])?;
                let src = object_ref(c, &cn, &item.get("src")?)?;
                family.push(Morphism::new(src, target, item.get("coords")?.vector(c.hom_dim(src, target))?));
            }
            Sieve::generated(c, target, &family).map_err(|e| core_error(n, e))?
        } else {
            let cs = n.get("components")?;
            let mut comps: Vec<Subspace<K>> = (0..c.num_objects()).map(|x| Subspace::zero(c.hom_dim(x, target))).collect();
            for (k, v) in cs.entries()? {
                let x = c.object_id(k).map_err(|_| v.error(format!("`{cn}` has no object `{k}`")))?;
                comps[x] = Subspace::span(c.hom_dim(x, target), &v.rows(c.hom_dim(x, target))?);
            }
            Sieve::new(c, target, comps).map_err(|e| core_error(n, e))?
        };
        Ok(SieveEntry { category: cn, sieve })
    }

    fn cover_system(&self, n: &Node) -> Parse<CoverEntry<K>> {
        n.only_keys(&["category", "sieves", "include_maximal"])?;
        let (cn, c) = self.category_ref(&n.get("category")?)?;
        let mut sieves = Vec::new();
        if let Some(sn) = n.opt("sieves")? {
            for r in sn.items()? {
                let (name, s) = lookup(&self.sieves, "sieve", &r)?;
                if s.category != cn {
                    return Err(r.error(format!("sieve `{name}` lives on `{}`, not `{cn}`", s.category)));
                }
                sieves.push(s.sieve.clone());
            }
        }
        if let Some(m) = n.opt("include_maximal")? {
            if m.bool()? {
                sieves.extend((0..c.num_objects()).map(|a| Sieve::maximal(c, a)));
            }
        }
        let system = CoverSystem::new(c, sieves).map_err(|e| core_error(n, e))?;
        Ok(CoverEntry { category: cn, system })
    }

    fn cover_system_ref(&self, n: &Node, category: &str) -> Parse<&CoverSystem<K>> {
        let (name, s) = lookup(&self.cover_systems, "cover system", n)?;
        if s.category != category {
            return Err(n.error(format!("cover system `{name}` lives on `{}`, not `{category}`", s.category)));
        }
        Ok(&s.system)
    }

    fn topology(&self, n: &Node, bounds: &Bounds) -> Parse<TopologyEntry<K>> {
        n.only_keys(&["category", "kind", "cover_system"])?;
        let (cn, c) = self.category_ref(&n.get("category")?)?;
        let kind = n.get("kind")?;
        let needs_system = matches!(kind.str()?, "explicit" | "generated");
        if needs_system != n.opt("cover_system")?.is_some() {
            return Err(n.error(format!(
                "\"cover_system\" is {} for kind \"{}\"",
                if needs_system { "required" } else { "not allowed" },
                kind.str()?
            )));
        }
        let topology = match kind.str()? {
            "minimal" => Ok(Topology::minimal(c)),
            "discrete" => Topology::discrete(c, bounds),
            "canonical" => canonical_topology(c, bounds).map(|t| t.topology),
            "explicit" => Topology::new(c, self.cover_system_ref(&n.get("cover_system")?, &cn)?.clone(), bounds),
            "generated" => generate_topology(c, self.cover_system_ref(&n.get("cover_system")?, &cn)?, bounds),
            other => return Err(kind.error(format!("unknown topology kind \"{other}\""))),
        }
        .map_err(|e| core_error(n, e))?;
        Ok(TopologyEntry { category: cn, topology })
    }

    fn pseudofunctor(&self, n: &Node) -> Parse<PseudoEntry<K>> {
        n.only_keys(&["index", "certificates", "fibers", "transits", "strict", "gamma", "units"])?;
        let idx_node = n.get("index")?;
        let index = index_category(&idx_node)?;
        let filtered = match n.opt("certificates")? {
            None => FilteredIndex::certify(index),
            Some(cn) => {
                let (cospans, equalizers) = certificates(&cn, &index)?;
                FilteredIndex::with_certificates(index, &cospans, &equalizers)
            }
        }
        .map_err(|e| core_error(&idx_node, e))?;
        let cat = filtered.category();

        let fn_node = n.get("fibers")?;
        let mut fiber_names = vec![None; cat.num_objects()];
        for (k, v) in fn_node.entries()? {
            let a = cat
                .object_id(k)
                .map_err(|_| v.error(format!("the index has no object `{k}`")))?;
            fiber_names[a] = Some(self.category_ref(&v)?.0);
        }
        let fiber_names: Vec<String> = fiber_names
            .into_iter()
            .enumerate()
            .map(|(a, f)| f.ok_or_else(|| fn_node.error(format!("no fiber for `{}`", cat.object_name(a)))))
            .collect::<Parse<_>>()?;
        let fibers: Vec<LinCategory<K>> = fiber_names.iter().map(|f| self.categories[f].clone()).collect();

        let tn = n.get("transits")?;
        let mut transits = vec![None; cat.num_arrows()];
        for (k, v) in tn.entries()? {
            let u = cat
                .arrow_id(k)
                .map_err(|_| v.error(format!("the index has no arrow `{k}`")))?;
            let (fname, f) = lookup(&self.functors, "functor", &v)?;
            let arrow = cat.arrow(u);
            let (want_src, want_dst) = (&fiber_names[arrow.src], &fiber_names[arrow.dst]);
            if &f.src != want_src || &f.dst != want_dst {
                return Err(v.error(format!(
                    "functor `{fname}` goes `{}` -> `{}`, but `{k}` needs `{want_src}` -> `{want_dst}`",
                    f.src, f.dst
                )));
            }
            transits[u] = Some(f.functor.clone());
        }
        let transits: Vec<LinFunctor<K>> = transits
            .into_iter()
            .enumerate()
            .map(|(u, t)| match t {
                Some(t) => Ok(t),
                None if cat.is_identity(u) => Ok(LinFunctor::identity(&fibers[cat.src(u)])),
                None => Err(tn.error(format!("no transit for `{}`", cat.arrow(u).name))),
            })
            .collect::<Parse<_>>()?;

        let strict = match n.opt("strict")? {
            Some(s) => s.bool()?,
            None => false,
        };
        let built = if strict {
            if n.opt("gamma")?.is_some() || n.opt("units")?.is_some() {
                return Err(n.error("a strict pseudofunctor takes no coherence cells"));
            }
            PseudoFunctor::strict(filtered, fibers, transits)
        } else {
            let mut gamma = HashMap::new();
            if let Some(gn) = n.opt("gamma")? {
                for item in gn.items()? {
                    item.only_keys(&["g", "f", "components"])?;
                    let g = arrow_ref(cat, &item.get("g")?)?;
                    let f = arrow_ref(cat, &item.get("f")?)?;
                    let gf = cat
                        .try_compose(g, f)
                        .ok_or_else(|| item.error("the arrows are not composable"))?;
                    let (src, dst) = (&fibers[cat.src(f)], &fibers[cat.dst(g)]);
                    let dims = |x: ObjId| {
                        let through = transits[g].obj(transits[f].obj(x));
                        dst.hom_dim(through, transits[gf].obj(x))
                    };
                    let cell = components(&item.get("components")?, src, &dims)?;
                    if gamma.insert((g, f), cell).is_some() {
                        return Err(item.error("cell given twice"));
                    }
                }
            }
            let mut units = Vec::new();
            let un = n.opt("units")?;
            for a in 0..cat.num_objects() {
                let name = cat.object_name(a);
                let Some(cell) = un.as_ref().map(|u| u.opt(name)).transpose()?.flatten() else {
                    return Err(n.error(format!("missing unit cell for `{name}`")));
                };
                let c = &fibers[a];
                let id = &transits[cat.identity(a)];
                units.push(components(&cell, c, &|x| c.hom_dim(x, id.obj(x)))?);
            }
            PseudoFunctor::new(filtered, fibers, transits, gamma, units)
        };
        let pseudofunctor = built.map_err(|e| core_error(n, e))?;
        Ok(PseudoEntry {
            fibers: fiber_names,
            pseudofunctor,
        })
    }

    fn chain(&self, n: &Node) -> Parse<ChainEntry> {
        n.only_keys(&["category", "subsets"])?;
        let (cn, c) = self.category_ref(&n.get("category")?)?;
        let sn = n.get("subsets")?;
        let mut subsets = Vec::new();
        for s in sn.items()? {
            subsets.push(s.items()?.iter().map(|o| object_ref(c, &cn, o)).collect::<Parse<Vec<_>>>()?);
        }
        if subsets.is_empty() {
            return Err(sn.error("a chain needs at least one subset"));
        }
        Ok(ChainEntry { category: cn, subsets })
    }

    fn presentation(&self, n: &Node) -> Parse<PresentationEntry> {
        let (an, ambient) = self.category_ref(&n.get("ambient")?)?;
        let spec = if let Some(objs) = n.opt("full")? {
            n.only_keys(&["ambient", "full"])?;
            PresentationSpec::Full(objs.items()?.iter().map(|o| object_ref(ambient, &an, o)).collect::<Parse<_>>()?)
        } else {
            n.only_keys(&["ambient", "topology", "functor"])?;
            let tn = n.get("topology")?;
            let (tname, t) = lookup(&self.topologies, "topology", &tn)?;
            let fnode = n.get("functor")?;
            let (fname, f) = lookup(&self.functors, "functor", &fnode)?;
            if f.dst != an {
                return Err(fnode.error(format!("functor `{fname}` lands in `{}`, not `{an}`", f.dst)));
            }
            if f.src != t.category {
                return Err(tn.error(format!(
                    "topology `{tname}` lives on `{}`, but `{fname}` starts at `{}`",
                    t.category, f.src
                )));
            }
            PresentationSpec::Functor {
                topology: tname.to_string(),
                functor: fname.to_string(),
            }
        };
        Ok(PresentationEntry { ambient: an, spec })
    }
}

fn explicit_category<K: Scalar>(n: &Node) -> Parse<LinCategory<K>> {
    n.only_keys(&["objects", "homs", "identities", "composition"])?;
    let on = n.get("objects")?;
    let objects: Vec<String> = on.strings()?.into_iter().map(str::to_string).collect();
    let nc = objects.len();
    let mut seen = BTreeSet::new();
    for (o, item) in objects.iter().zip(on.items()?) {
        if !seen.insert(o) {
            return Err(item.error(format!("duplicate object `{o}`")));
        }
    }
    let obj = |r: &Node| -> Parse<ObjId> {
        let s = r.str()?;
        objects
            .iter()
            .position(|o| o == s)
            .ok_or_else(|| r.error(format!("no object `{s}`")))
    };
    let mut basis: Vec<Option<Vec<String>>> = vec![None; nc * nc];
    if let Some(h) = n.opt("homs")? {
        for item in h.items()? {
            item.only_keys(&["src", "dst", "basis"])?;
            let (a, b) = (obj(&item.get("src")?)?, obj(&item.get("dst")?)?);
            if basis[a * nc + b].is_some() {
                return Err(item.error("hom given twice"));
            }
            basis[a * nc + b] = Some(item.get("basis")?.strings()?.into_iter().map(str::to_string).collect());
        }
    }
    let basis: Vec<Vec<String>> = basis.into_iter().map(Option::unwrap_or_default).collect();
    let dim = |a: ObjId, b: ObjId| basis[a * nc + b].len();

    let idn = n.get("identities")?;
    let mut ids = vec![None; nc];
    for (k, v) in idn.entries()? {
        let a = objects
            .iter()
            .position(|o| o == k)
            .ok_or_else(|| v.error(format!("no object `{k}`")))?;
        ids[a] = Some(v.vector(dim(a, a))?);
    }
    let ids: Vec<Vec<K>> = ids
        .into_iter()
        .enumerate()
        .map(|(a, v)| v.ok_or_else(|| idn.error(format!("no identity for `{}`", objects[a]))))
        .collect::<Parse<_>>()?;

    let mut table: HashMap<(ObjId, ObjId, ObjId), Vec<Vec<Vec<K>>>> = HashMap::new();
    if let Some(cn) = n.opt("composition")? {
        for item in cn.items()? {
            item.only_keys(&["src", "mid", "dst", "table"])?;
            let (a, b, c) = (obj(&item.get("src")?)?, obj(&item.get("mid")?)?, obj(&item.get("dst")?)?);
            let tn = item.get("table")?;
            let rows = tn.items()?;
            if rows.len() != dim(b, c) {
                return Err(tn.error(format!("expected {} rows, one per basis element of the later hom", dim(b, c))));
            }
            let mut t = Vec::new();
            for r in rows {
                let cells = r.items()?;
                if cells.len() != dim(a, b) {
                    return Err(r.error(format!("expected {} entries, one per basis element of the earlier hom", dim(a, b))));
                }
                t.push(cells.iter().map(|x| x.vector(dim(a, c))).collect::<Parse<Vec<_>>>()?);
            }
            if table.insert((a, b, c), t).is_some() {
                return Err(item.error("composition table given twice"));
            }
        }
    }
    LinCategory::from_parts(objects.clone(), basis.clone(), ids, |a, b, c, g, f| match table.get(&(a, b, c)) {
        Some(t) => t[g][f].clone(),
        None => vec![K::zero(); basis[a * nc + c].len()],
    })
    .map_err(|e| core_error(n, e))
}

fn index_category(n: &Node) -> Parse<IndexCategory> {
    let on = n.get("objects")?;
    let objects = on.strings()?;
    let pos = |r: &Node| -> Parse<usize> {
        let s = r.str()?;
        objects
            .iter()
            .position(|o| *o == s)
            .ok_or_else(|| r.error(format!("the index has no object `{s}`")))
    };
    if let Some(p) = n.opt("preorder")? {
        n.only_keys(&["objects", "preorder"])?;
        let mut rel = Vec::new();
        for r in p.items()? {
            let pair = r.items()?;
            if pair.len() != 2 {
                return Err(r.error("a relation is a pair of objects"));
            }
            rel.push((pos(&pair[0])?, pos(&pair[1])?));
        }
        return IndexCategory::from_preorder(&objects, &rel).map_err(|e| core_error(n, e));
    }
    n.only_keys(&["objects", "arrows", "compositions"])?;
    // identities come first, named id_<object>
    let mut arrows: Vec<IndexArrow> = objects
        .iter()
        .enumerate()
        .map(|(a, o)| IndexArrow {
            name: format!("id_{o}"),
            src: a,
            dst: a,
        })
        .collect();
    if let Some(an) = n.opt("arrows")? {
        for item in an.items()? {
            item.only_keys(&["name", "src", "dst"])?;
            let name = item.get("name")?.str()?;
            if arrows.iter().any(|x| x.name == name) {
                return Err(item.error(format!("duplicate arrow `{name}`")));
            }
            arrows.push(IndexArrow {
                name: name.to_string(),
                src: pos(&item.get("src")?)?,
                dst: pos(&item.get("dst")?)?,
            });
        }
    }
    let k = objects.len();
    let arrow = |r: &Node| -> Parse<usize> {
        let s = r.str()?;
        arrows
            .iter()
            .position(|x| x.name == s)
            .ok_or_else(|| r.error(format!("the index has no arrow `{s}`")))
    };
    let mut comp = HashMap::new();
    if let Some(cn) = n.opt("compositions")? {
        for item in cn.items()? {
            item.only_keys(&["g", "f", "result"])?;
            let (g, f, h) = (arrow(&item.get("g")?)?, arrow(&item.get("f")?)?, arrow(&item.get("result")?)?);
            if g < k || f < k {
                return Err(item.error("composites with identities are implied"));
            }
            if comp.insert((g, f), h).is_some() {
                return Err(item.error("composite given twice"));
            }
        }
    }
    let names: Vec<String> = objects.iter().map(|s| s.to_string()).collect();
    let arrows2 = arrows.clone();
    IndexCategory::new(names, arrows, (0..k).collect(), |g, f| {
        if arrows2[f].dst != arrows2[g].src {
            None
        } else if f < k {
            Some(g)
        } else if g < k {
            Some(f)
        } else {
            comp.get(&(g, f)).copied()
        }
    })
    .map_err(|e| core_error(n, e))
}

fn arrow_ref(cat: &IndexCategory, n: &Node) -> Parse<usize> {
    let s = n.str()?;
    cat.arrow_id(s).map_err(|_| n.error(format!("the index has no arrow `{s}`")))
}

type Certificates = (HashMap<(usize, usize), (usize, usize)>, HashMap<(usize, usize), usize>);

fn certificates(n: &Node, cat: &IndexCategory) -> Parse<Certificates> {
    n.only_keys(&["cospans", "equalizers"])?;
    let obj = |r: &Node| -> Parse<usize> {
        let s = r.str()?;
        cat.object_id(s).map_err(|_| r.error(format!("the index has no object `{s}`")))
    };
    let mut cospans = HashMap::new();
    if let Some(cn) = n.opt("cospans")? {
        for item in cn.items()? {
            item.only_keys(&["a", "b", "u", "v"])?;
            let key = (obj(&item.get("a")?)?, obj(&item.get("b")?)?);
            let val = (arrow_ref(cat, &item.get("u")?)?, arrow_ref(cat, &item.get("v")?)?);
            cospans.insert(key, val);
        }
    }
    let mut equalizers = HashMap::new();
    if let Some(en) = n.opt("equalizers")? {
        for item in en.items()? {
            item.only_keys(&["f", "g", "w"])?;
            let key = (arrow_ref(cat, &item.get("f")?)?, arrow_ref(cat, &item.get("g")?)?);
            equalizers.insert(key, arrow_ref(cat, &item.get("w")?)?);
        }
    }
    Ok((cospans, equalizers))
}

/// One coordinate vector per object of `src`, keyed by object name.
fn components<K: Scalar>(n: &Node, src: &LinCategory<K>, dims: &dyn Fn(ObjId) -> usize) -> Parse<LinNatTrans<K>> {
    let mut comps = vec![None; src.num_objects()];
    for (k, v) in n.entries()? {
        let x = src.object_id(k).map_err(|_| v.error(format!("no object `{k}` in the fiber")))?;
        comps[x] = Some(v.vector(dims(x))?);
    }
    let comps = comps
        .into_iter()
        .enumerate()
        .map(|(x, c)| c.ok_or_else(|| n.error(format!("no component at `{}`", src.object_name(x)))))
        .collect::<Parse<_>>()?;
    Ok(LinNatTrans::new(comps))
}
