//! Text and JSON renderings of results. JSON objects have sorted keys and
//! arc lists in lexicographic order.

use serde_json::{json, Value};
use treepack::extremal::{CellOutcome, CharacterizationReport, DegreeProfile};
use treepack::format::arcs_to_string;
use treepack::{CanonicalCode, ConnectivityReport, MinimalityCertificate, TreePacking};

fn set(vs: &[usize]) -> String {
    let inner: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn trees_json(p: &TreePacking) -> Value {
    p.trees
        .iter()
        .map(|t| {
            t.arcs
                .iter()
                .map(|&(u, v)| json!([u, v]))
                .collect::<Vec<_>>()
        })
        .collect()
}

fn trees_text(p: &TreePacking) -> String {
    p.trees
        .iter()
        .enumerate()
        .map(|(i, t)| format!("T{}: {}\n", i + 1, arcs_to_string(&t.arcs)))
        .collect()
}

pub fn connectivity_text(r: &ConnectivityReport) -> String {
    format!(
        "{}_{} = {}  (argmin S={}, r={})\n{}",
        r.mode.symbol(),
        r.k,
        r.value,
        set(r.argmin.terminals()),
        r.argmin.root(),
        trees_text(&r.witness)
    )
}

pub fn connectivity_json(r: &ConnectivityReport) -> Value {
    json!({
        "k": r.k,
        "mode": r.mode.name(),
        "value": r.value,
        "argmin_S": r.argmin.terminals(),
        "argmin_r": r.argmin.root(),
        "witness_trees": trees_json(&r.witness),
    })
}

pub fn packing_text(p: &TreePacking) -> String {
    format!(
        "{}_S,r = {}  (S={}, r={})\n{}",
        p.mode.symbol(),
        p.len(),
        set(p.instance.terminals()),
        p.instance.root(),
        trees_text(p)
    )
}

pub fn packing_json(p: &TreePacking) -> Value {
    json!({
        "mode": p.mode.name(),
        "value": p.len(),
        "S": p.instance.terminals(),
        "r": p.instance.root(),
        "witness_trees": trees_json(p),
    })
}

pub fn certificate_text(c: &MinimalityCertificate) -> String {
    let mut s = format!(
        "minimal ({}, k={}, l={}): {}\n{}_{} = {}\n",
        c.mode,
        c.k,
        c.l,
        c.holds,
        c.mode.symbol(),
        c.k,
        c.base_value
    );
    for &((u, v), val) in &c.per_arc {
        s.push_str(&format!("  without {u}->{v}: {val}\n"));
    }
    s
}

pub fn certificate_json(c: &MinimalityCertificate) -> Value {
    json!({
        "k": c.k,
        "l": c.l,
        "mode": c.mode.name(),
        "holds": c.holds,
        "base_value": c.base_value,
        "arcs": c.per_arc.iter().map(|&((u, v), _)| json!([u, v])).collect::<Vec<_>>(),
        "per_arc": c.per_arc.iter().map(|&(_, val)| val).collect::<Vec<_>>(),
    })
}

fn codes(cs: &[CanonicalCode]) -> Vec<String> {
    cs.iter().map(|c| c.to_string()).collect()
}

pub fn cell_json(o: &CellOutcome) -> Value {
    match o {
        CellOutcome::Done(r) => json!({
            "n": r.n,
            "k": r.k,
            "l": r.l,
            "mode": r.mode.name(),
            "min_size": r.min_size,
            "max_size": r.max_size,
            "members": r.members,
            "min_witnesses": codes(&r.min_witnesses),
            "max_witnesses": codes(&r.max_witnesses),
        }),
        CellOutcome::Skipped { n, k, l, mode } => json!({
            "n": n,
            "k": k,
            "l": l,
            "mode": mode.name(),
            "skipped": true,
        }),
    }
}

pub fn characterization_text(r: &CharacterizationReport) -> String {
    let mut s = format!(
        "case {:?} n={} k={}: {}\n",
        r.case,
        r.n,
        r.k,
        if r.pass { "pass" } else { "FAIL" }
    )
    .to_lowercase();
    for d in &r.discrepancies {
        s.push_str(&format!("  {d}\n"));
    }
    s
}

pub fn characterization_json(r: &CharacterizationReport) -> Value {
    json!({
        "n": r.n,
        "k": r.k,
        "case": format!("{:?}", r.case).to_lowercase(),
        "pass": r.pass,
        "discrepancies": r.discrepancies,
    })
}

pub fn profile_json(code: &CanonicalCode, p: &DegreeProfile, l: usize) -> Value {
    json!({
        "code": code.to_string(),
        "out_count": p.out_count,
        "in_count": p.in_count,
        "checks": p.checks(l),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use treepack::{kappa_k, Digraph, Mode};

    #[test]
    fn connectivity_line() {
        let k4 = Digraph::complete(4).unwrap();
        let r = kappa_k(&k4, 3).unwrap();
        let text = connectivity_text(&r);
        assert!(text.starts_with("kappa_3 = 3  (argmin S={0,1,2}, r=0)\n"));
        let j = connectivity_json(&r);
        assert_eq!(j["value"], 3);
        assert_eq!(j["argmin_S"], json!([0, 1, 2]));
        assert_eq!(j["witness_trees"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn certificate_fields() {
        let c3 = Digraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let c = treepack::is_min_gen(&c3, 2, 1, Mode::Arc).unwrap();
        let j = certificate_json(&c);
        assert_eq!(j["holds"], true);
        assert_eq!(j["per_arc"], json!([0, 0, 0]));
        let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }
}
