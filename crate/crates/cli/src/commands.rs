use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use lincolim::colimit::{union_colimit_equivalence, verify_universal_property, ColimCategory, IndexCategory};
use lincolim::exactalg::Scalar;
use lincolim::lincat::{validate_category, validate_functor, LinCategory};
use lincolim::sitecat::{verify_site_colimit, AmbientCategory, SitePresentation};
use lincolim::topology::{
    canonical_topology, check_axioms, check_lc, check_maximality, check_tensor_lc, generate_topology,
    subcanonical_failure, tensor_site, CoverSystem, LCReport, Site,
};
use lincolim::Bounds;
use serde_json::{json, Value};

use crate::bundle::{Bundle, PresentationSpec, TopologyEntry};
use crate::render;
use crate::report::Report;
use crate::Command;

type Outcome = Result<(), String>;

const SURROGATE: &str = "the ambient category is a finite k-linear category with its computed canonical topology, \
standing in for a Grothendieck category; the colimit is taken over the finite diagram generated from the seeds";

fn pick<'m, V>(map: &'m BTreeMap<String, V>, arg: &Option<String>, kind: &str, flag: &str) -> Result<(&'m str, &'m V), String> {
    match arg {
        Some(name) => map
            .get_key_value(name)
            .map(|(k, v)| (k.as_str(), v))
            .ok_or_else(|| format!("the bundle has no {kind} named `{name}`")),
        None => {
            let mut it = map.iter();
            match (it.next(), it.next()) {
                (Some((k, v)), None) => Ok((k.as_str(), v)),
                (None, _) => Err(format!("the bundle has no {kind}")),
                _ => Err(format!("the bundle has more than one {kind}; choose one with --{flag}")),
            }
        }
    }
}

fn site<K: Scalar>(b: &Bundle<K>, t: &TopologyEntry<K>) -> Result<Site<K>, String> {
    Site::new(b.categories[&t.category].clone(), t.topology.clone()).map_err(|e| e.to_string())
}

fn covers_json<K: Scalar>(c: &LinCategory<K>, t: &CoverSystem<K>) -> Value {
    let mut m = serde_json::Map::new();
    for a in 0..c.num_objects() {
        let list: Vec<String> = t.covers(a).map(|s| render::sieve(c, s)).collect();
        m.insert(c.object_name(a).to_string(), json!(list));
    }
    Value::Object(m)
}

fn axiom_checks<K: Scalar>(r: &mut Report, c: &LinCategory<K>, t: &CoverSystem<K>, bounds: &Bounds) -> Outcome {
    let a = check_axioms(c, t, bounds).map_err(|e| e.to_string())?;
    for (name, v) in [("Id", &a.id), ("Pb", &a.pb), ("Glue", &a.glue)] {
        r.check(name, v.is_none(), v.as_ref().map(|v| render::axiom_violation(c, v)));
    }
    r.detail("exhaustive", a.exhaustive);
    Ok(())
}

fn lc_checks(r: &mut Report, lc: &LCReport) {
    for (name, c) in [("G", &lc.g), ("F", &lc.f), ("FF", &lc.ff), ("pullback", &lc.pullback_eq)] {
        r.check(name, c.holds, c.witness.clone());
    }
}

pub fn execute<K: Scalar>(doc: &Value, cmd: &Command, bounds: &Bounds, r: &mut Report, timings: &mut BTreeMap<String, f64>) -> Outcome {
    r.field = Some(K::field_name());
    let t0 = Instant::now();
    let b = Bundle::<K>::parse(doc, bounds).map_err(|e| e.to_string())?;
    timings.insert("parse".into(), t0.elapsed().as_secs_f64() * 1e3);
    let t1 = Instant::now();
    let out = run(&b, cmd, bounds, r);
    timings.insert("execute".into(), t1.elapsed().as_secs_f64() * 1e3);
    out
}

fn run<K: Scalar>(b: &Bundle<K>, cmd: &Command, bounds: &Bounds, r: &mut Report) -> Outcome {
    let err = |e: lincolim::Error| e.to_string();
    match cmd {
        Command::Validate { .. } => {
            for (name, c) in &b.categories {
                let v = validate_category(c);
                r.check(format!("category `{name}`"), v.is_ok(), v.err().map(|v| v.to_string()));
            }
            for (name, f) in &b.functors {
                let v = validate_functor(&f.functor, &b.categories[&f.src], &b.categories[&f.dst]);
                r.check(format!("functor `{name}`"), v.is_ok(), v.err().map(|v| v.to_string()));
            }
            for (name, p) in &b.presheaves {
                let v = p.presheaf.validate(&b.categories[&p.category]);
                r.check(format!("presheaf `{name}`"), v.is_ok(), v.err().map(|v| v.to_string()));
            }
            for (key, n) in [
                ("categories", b.categories.len()),
                ("functors", b.functors.len()),
                ("presheaves", b.presheaves.len()),
                ("sieves", b.sieves.len()),
                ("cover_systems", b.cover_systems.len()),
                ("topologies", b.topologies.len()),
                ("pseudofunctors", b.pseudofunctors.len()),
                ("chains", b.chains.len()),
                ("presentations", b.presentations.len()),
            ] {
                r.detail(key, n);
            }
        }
        Command::Colimit { pseudofunctor, .. } => {
            let (_, p) = pick(&b.pseudofunctors, pseudofunctor, "pseudofunctor", "pseudofunctor")?;
            let colim = ColimCategory::build(Arc::new(p.pseudofunctor.clone())).map_err(err)?;
            let l = colim.category();
            let v = validate_category(l);
            r.check("colimit category is valid", v.is_ok(), v.err().map(|v| v.to_string()));
            let pf = colim.pseudofunctor();
            let tagging: Vec<Value> = (0..l.num_objects())
                .map(|o| {
                    let x = colim.tag(o);
                    json!({
                        "object": l.object_name(o),
                        "index": pf.index().category().object_name(x.index),
                        "fiber_object": pf.fiber(x.index).object_name(x.obj),
                    })
                })
                .collect();
            let fibers: serde_json::Map<String, Value> = (0..pf.index().num_objects())
                .map(|a| (pf.index().category().object_name(a).to_string(), json!(p.fibers[a])))
                .collect();
            r.detail("fibers", Value::Object(fibers));
            r.detail("category", render::category_json(l));
            r.detail("tagging", tagging);
        }
        Command::CheckTopology { cover_system, topology, .. } => {
            let (cat, system) = match (cover_system, topology) {
                (Some(_), Some(_)) => return Err("give one of --cover-system and --topology".into()),
                (None, Some(_)) => {
                    let (_, t) = pick(&b.topologies, topology, "topology", "topology")?;
                    (&t.category, t.topology.system())
                }
                _ => {
                    let (_, s) = pick(&b.cover_systems, cover_system, "cover system", "cover-system")?;
                    (&s.category, &s.system)
                }
            };
            axiom_checks(r, &b.categories[cat], system, bounds)?;
        }
        Command::GenerateTopology { cover_system, .. } => {
            let (_, s) = pick(&b.cover_systems, cover_system, "cover system", "cover-system")?;
            let c = &b.categories[&s.category];
            let t = generate_topology(c, &s.system, bounds).map_err(err)?;
            axiom_checks(r, c, &t, bounds)?;
            r.detail("covers", covers_json(c, &t));
            r.detail("num_covers", t.num_covers());
        }
        Command::Canonical { category, .. } => {
            let (_, c) = pick(&b.categories, category, "category", "category")?;
            let ct = canonical_topology(c, bounds).map_err(err)?;
            axiom_checks(r, c, &ct.topology, bounds)?;
            let sub = subcanonical_failure(c, &ct.topology);
            r.check(
                "subcanonical",
                sub.is_none(),
                sub.map(|(x, _, s, why)| {
                    format!("hom(-, {}) along {}: {why}", c.object_name(x), render::sieve(c, &s))
                }),
            );
            let max = check_maximality(c, &ct.topology, bounds).map_err(err)?;
            r.check(
                "maximal",
                max.is_ok(),
                max.as_ref().err().map(|s| format!("adjoining {} keeps every representable a sheaf", render::sieve(c, s))),
            );
            r.detail("covers", covers_json(c, &ct.topology));
            r.detail("num_covers", ct.topology.num_covers());
            r.detail("excluded_sieves", ct.excluded.len());
        }
        Command::CheckSheaf { presheaf, topology, .. } => {
            let (pn, p) = pick(&b.presheaves, presheaf, "presheaf", "presheaf")?;
            let (tn, t) = pick(&b.topologies, topology, "topology", "topology")?;
            if p.category != t.category {
                return Err(format!("presheaf `{pn}` lives on `{}`, topology `{tn}` on `{}`", p.category, t.category));
            }
            let c = &b.categories[&p.category];
            let v = lincolim::sieves::is_sheaf(c, &p.presheaf, &t.topology);
            r.check(
                "sheaf",
                v.is_sheaf(),
                v.failure.map(|(a, s, why)| format!("at {}, cover {}: {why}", c.object_name(a), render::sieve(c, &s))),
            );
        }
        Command::CheckLc { functor, source, target, .. } => {
            let (fname, f) = pick(&b.functors, functor, "functor", "functor")?;
            let (sn, s) = pick(&b.topologies, source, "topology", "source")?;
            let (tn, t) = pick(&b.topologies, target, "topology", "target")?;
            if s.category != f.src || t.category != f.dst {
                return Err(format!(
                    "functor `{fname}` goes `{}` -> `{}`, but the topologies `{sn}` and `{tn}` live on `{}` and `{}`",
                    f.src, f.dst, s.category, t.category
                ));
            }
            let (src, dst) = (&b.categories[&f.src], &b.categories[&f.dst]);
            validate_functor(&f.functor, src, dst).map_err(|v| format!("`{fname}` is not a functor: {v}"))?;
            let lc = check_lc(&f.functor, src, &s.topology, dst, &t.topology, bounds).map_err(err)?;
            lc_checks(r, &lc);
        }
        Command::TensorSite { left, right, .. } => {
            let (_, a) = pick(&b.topologies, left, "topology", "left")?;
            let (_, c) = pick(&b.topologies, right, "topology", "right")?;
            let s = tensor_site(&site(b, a)?, &site(b, c)?, bounds).map_err(err)?;
            axiom_checks(r, &s.category, &s.topology, bounds)?;
            r.detail("objects", json!(s.category.objects()));
            r.detail("covers", covers_json(&s.category, &s.topology));
            r.detail("num_covers", s.topology.num_covers());
        }
        Command::CheckTensorLc {
            f,
            f_source,
            f_target,
            g,
            g_source,
            g_target,
            ..
        } => {
            let mut parts = Vec::new();
            for (fun, src, dst, label) in [(f, f_source, f_target, "f"), (g, g_source, g_target, "g")] {
                let (fname, fe) = pick(&b.functors, fun, "functor", label)?;
                let (_, s) = pick(&b.topologies, src, "topology", &format!("{label}-source"))?;
                let (_, t) = pick(&b.topologies, dst, "topology", &format!("{label}-target"))?;
                if s.category != fe.src || t.category != fe.dst {
                    return Err(format!("the sites given for `{fname}` do not match its source and target"));
                }
                parts.push((fe, site(b, s)?, site(b, t)?));
            }
            let (fe, fs, ft) = &parts[0];
            let (ge, gs, gt) = &parts[1];
            let lc = check_tensor_lc(&fe.functor, (fs, ft), &ge.functor, (gs, gt), bounds).map_err(err)?;
            lc_checks(r, &lc);
        }
        Command::UnionColimit { chain, .. } => {
            let (_, ch) = pick(&b.chains, chain, "chain", "chain")?;
            let c = &b.categories[&ch.category];
            let order = IndexCategory::chain(ch.subsets.len()).map_err(err)?;
            let u = union_colimit_equivalence(c, order, &ch.subsets, bounds).map_err(err)?;
            let e = &u.report;
            for (name, holds) in [
                ("functor", e.functor_valid),
                ("essentially surjective", e.essentially_surjective),
                ("full", e.full),
                ("faithful", e.faithful),
            ] {
                r.check(name, holds, e.witness.clone());
            }
            r.detail("colimit_objects", u.colimit.category().num_objects());
        }
        Command::SiteColimit { ambient, seeds, .. } => {
            r.note = Some(SURROGATE.into());
            let (an, c) = pick(&b.categories, ambient, "category", "ambient")?;
            let amb = AmbientCategory::new(c.clone(), bounds).map_err(err)?;
            let names: Vec<&str> = match seeds {
                Some(list) => list.iter().map(String::as_str).collect(),
                None => b
                    .presentations
                    .iter()
                    .filter(|(_, p)| p.ambient == an)
                    .map(|(k, _)| k.as_str())
                    .collect(),
            };
            let mut ps = Vec::new();
            for name in names {
                let p = b
                    .presentations
                    .get(name)
                    .ok_or_else(|| format!("the bundle has no presentation named `{name}`"))?;
                if p.ambient != an {
                    return Err(format!("presentation `{name}` lives over `{}`, not `{an}`", p.ambient));
                }
                let built = match &p.spec {
                    PresentationSpec::Full(objs) => SitePresentation::full(&amb, objs, bounds),
                    PresentationSpec::Functor { topology, functor } => {
                        let t = &b.topologies[topology];
                        SitePresentation::new(&amb, name, site(b, t)?, b.functors[functor].functor.clone(), bounds)
                    }
                };
                ps.push(built.map_err(err)?);
            }
            let (sc, rep) = verify_site_colimit(&amb, &ps, bounds).map_err(err)?;
            for (name, holds) in [
                ("psi well defined", rep.well_defined),
                ("psi is a functor", rep.functor_valid),
                ("psi is linear", rep.linear),
                ("essentially surjective", rep.essentially_surjective),
                ("full", rep.full),
                ("faithful", rep.faithful),
            ] {
                r.check(name, holds, rep.witness.clone());
            }
            r.detail("presentations", rep.presentations);
            r.detail("index_arrows", rep.index_arrows);
            r.detail("colimit_objects", rep.colimit_objects);
            r.detail(
                "diagram",
                json!(sc.diagram.presentations.iter().map(|p| p.name.clone()).collect::<Vec<_>>()),
            );
        }
        Command::VerifyUniversal { pseudofunctor, target, .. } => {
            let (_, p) = pick(&b.pseudofunctors, pseudofunctor, "pseudofunctor", "pseudofunctor")?;
            let (_, c) = pick(&b.categories, target, "category", "target")?;
            let colim = ColimCategory::build(Arc::new(p.pseudofunctor.clone())).map_err(err)?;
            let u = verify_universal_property(&colim, c, bounds).map_err(err)?;
            for (name, holds) in [
                ("objects correspond", u.objects_bijective),
                ("round trip", u.round_trip),
                ("morphisms correspond", u.morphisms_bijective),
            ] {
                r.check(name, holds, u.counterexample.clone());
            }
            r.detail("functors", u.functors);
            r.detail("pseudonatural_transformations", u.pseudonat);
        }
    }
    Ok(())
}
