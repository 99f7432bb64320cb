use serde_json::{json, Value};

use super::{SupercharTable, SuperclassTable, Theory, TheoryKind};
use crate::involution_group::GroupSpec;
use crate::orbits::OrbitIndex;

pub fn spec_json(spec: &GroupSpec) -> Value {
    let poset = match &spec.poset {
        Some(p) if !p.is_chain() => json!(p.positions().iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>()),
        _ => Value::Null,
    };
    json!({
        "family": spec.family.to_string(),
        "n": spec.n,
        "p": spec.p,
        "e": spec.e,
        "k": spec.k,
        "poset": poset,
    })
}

fn map_name(t: &Theory) -> String {
    match t.kind() {
        TheoryKind::Involution => t.options().springer.to_string(),
        TheoryKind::AlgebraGroup => "minus-one".to_string(),
    }
}

pub fn table_json(t: &Theory, sc: &SuperclassTable, ch: &SupercharTable) -> Value {
    let classes: Vec<Value> =
        sc.classes.iter().map(|c| json!({"rep": c.rep.to_entries(), "size": c.members.len()})).collect();
    let rows: Vec<Value> = ch
        .rows
        .iter()
        .map(|r| {
            json!({
                "lambda": t.functional(&r.lambda).encodings(),
                "n_lambda": r.n_lambda,
                "degree": r.degree,
                "values": serde_json::to_value(&r.values).expect("serializable"),
            })
        })
        .collect();
    json!({
        "spec": spec_json(t.ctx().spec()),
        "springer": map_name(t),
        "theta": format!("{:?}", t.options().theta).to_lowercase(),
        "superclasses": classes,
        "rows": rows,
    })
}

fn join(v: &[u32]) -> String {
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// One header line naming the superclass representatives, then one line per supercharacter.
pub fn table_csv(t: &Theory, sc: &SuperclassTable, ch: &SupercharTable) -> String {
    let mut out = String::from("lambda,n_lambda,degree");
    for c in &sc.classes {
        out.push_str(&format!(",[{}]", join(&c.rep.to_entries())));
    }
    out.push('\n');
    for r in &ch.rows {
        out.push_str(&format!("[{}],{},{}", join(&t.functional(&r.lambda).encodings()), r.n_lambda, r.degree));
        for v in &r.values {
            out.push(',');
            out.push_str(&v.to_poly_string());
        }
        out.push('\n');
    }
    out
}

/// JSON lines `{"rep", "size", "orbit_id"}`, one per orbit.
pub fn orbit_dump(index: &OrbitIndex, rep_entries: impl Fn(usize) -> Vec<u32>) -> String {
    let mut out = String::new();
    for (id, (&rep, &size)) in index.reps().iter().zip(index.sizes()).enumerate() {
        out.push_str(&json!({"rep": rep_entries(rep), "size": size, "orbit_id": id}).to_string());
        out.push('\n');
    }
    out
}
