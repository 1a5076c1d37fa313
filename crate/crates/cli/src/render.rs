//! Human-readable names for morphisms and sieves, and the bundle encoding of
//! categories.

use lincolim::exactalg::Scalar;
use lincolim::lincat::{LinCategory, Morphism, ObjId};
use lincolim::sieves::Sieve;
use lincolim::topology::AxiomViolation;
use serde_json::{json, Map, Value};

/// `2*f + g`, or `0`.
pub fn combination<K: Scalar>(c: &LinCategory<K>, a: ObjId, b: ObjId, coords: &[K]) -> String {
    let basis = c.hom_basis(a, b);
    let terms: Vec<String> = coords
        .iter()
        .zip(basis)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, name)| if x.is_one() { name.clone() } else { format!("{x}*{name}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn morphism<K: Scalar>(c: &LinCategory<K>, m: &Morphism<K>) -> String {
    format!(
        "{}: {} -> {}",
        combination(c, m.src, m.dst, &m.coords),
        c.object_name(m.src),
        c.object_name(m.dst)
    )
}

/// The sieve as the span of its basis morphisms.
pub fn sieve<K: Scalar>(c: &LinCategory<K>, s: &Sieve<K>) -> String {
    let gens: Vec<String> = s
        .spanning_morphisms()
        .iter()
        .map(|m| format!("{} from {}", combination(c, m.src, m.dst, &m.coords), c.object_name(m.src)))
        .collect();
    format!("<{}> on {}", gens.join(", "), c.object_name(s.target()))
}

pub fn axiom_violation<K: Scalar>(c: &LinCategory<K>, v: &AxiomViolation<K>) -> String {
    match v {
        AxiomViolation::Id { object } => format!("the maximal sieve on {} is not a cover", c.object_name(*object)),
        AxiomViolation::Pb { cover, along } => format!(
            "the pullback of the cover {} along {} is not a cover",
            sieve(c, cover),
            morphism(c, along)
        ),
        AxiomViolation::Glue { sieve: s, via } => format!(
            "{} is not a cover, yet its pullbacks along the cover {} are",
            sieve(c, s),
            sieve(c, via)
        ),
    }
}

pub fn scalar<K: Scalar>(x: &K) -> Value {
    let s = x.to_string();
    match s.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(s),
    }
}

fn vector<K: Scalar>(v: &[K]) -> Value {
    Value::Array(v.iter().map(scalar).collect())
}

/// The explicit bundle encoding of `c`.
pub fn category_json<K: Scalar>(c: &LinCategory<K>) -> Value {
    let n = c.num_objects();
    let mut homs = Vec::new();
    let mut identities = Map::new();
    let mut composition = Vec::new();
    for a in 0..n {
        identities.insert(c.object_name(a).to_string(), vector(c.identity(a)));
        for b in 0..n {
            if c.hom_dim(a, b) > 0 {
                homs.push(json!({
                    "src": c.object_name(a),
                    "dst": c.object_name(b),
                    "basis": c.hom_basis(a, b),
                }));
            }
            for d in 0..n {
                if c.hom_dim(a, b) == 0 || c.hom_dim(b, d) == 0 || c.hom_dim(a, d) == 0 {
                    continue;
                }
                let table: Vec<Value> = (0..c.hom_dim(b, d))
                    .map(|g| {
                        Value::Array(
                            (0..c.hom_dim(a, b))
                                .map(|f| vector(c.compose_basis(a, b, d, g, f)))
                                .collect(),
                        )
                    })
                    .collect();
                composition.push(json!({
                    "src": c.object_name(a),
                    "mid": c.object_name(b),
                    "dst": c.object_name(d),
                    "table": table,
                }));
            }
        }
    }
    json!({
        "objects": c.objects(),
        "homs": homs,
        "identities": identities,
        "composition": composition,
    })
}
