//! JSON documents (schema `cotree-lab/1`) and DOT export.

use crate::algebra::BiHeytingAlgebra;
use crate::error::{Error, Result};
use crate::morphism::PosetMap;
use crate::poset::{build_poset, Poset};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "cotree-lab/1";

fn default_schema() -> String {
    SCHEMA.to_string()
}

fn check_schema(s: &str) -> Result<()> {
    if s != SCHEMA {
        return Err(Error::Usage(format!(
            "unsupported schema `{s}`, expected `{SCHEMA}`"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetDoc {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

pub fn poset_to_doc(p: &Poset) -> PosetDoc {
    PosetDoc {
        schema: SCHEMA.into(),
        elements: p.labels().to_vec(),
        covers: p
            .covers()
            .into_iter()
            .map(|(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
            .collect(),
    }
}

pub fn poset_from_doc(doc: &PosetDoc) -> Result<Poset> {
    check_schema(&doc.schema)?;
    build_poset(&doc.elements, &doc.covers)
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string_pretty(&poset_to_doc(p)).expect("poset serializes")
}

pub fn poset_from_json(src: &str) -> Result<Poset> {
    poset_from_doc(&serde_json::from_str(src)?)
}

/// Hasse diagram in DOT, drawn bottom-up.
pub fn poset_to_dot(p: &Poset) -> String {
    let mut out = String::from("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for i in 0..p.n() {
        out.push_str(&format!("  n{} [label=\"{}\"];\n", i, p.label(i)));
    }
    for (a, b) in p.covers() {
        out.push_str(&format!("  n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AlgebraDoc {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub labels: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub meet: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub join: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub imp: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coimp: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub top: Option<usize>,
}

pub fn algebra_to_doc(a: &BiHeytingAlgebra) -> AlgebraDoc {
    let k = a.k();
    let table = |f: &dyn Fn(usize, usize) -> usize| -> Vec<Vec<usize>> {
        (0..k).map(|x| (0..k).map(|y| f(x, y)).collect()).collect()
    };
    AlgebraDoc {
        schema: SCHEMA.into(),
        labels: a.labels().to_vec(),
        leq: (0..k)
            .map(|x| (0..k).map(|y| a.leq(x, y)).collect())
            .collect(),
        meet: Some(table(&|x, y| a.meet(x, y))),
        join: Some(table(&|x, y| a.join(x, y))),
        imp: Some(table(&|x, y| a.imp(x, y))),
        coimp: Some(table(&|x, y| a.coimp(x, y))),
        bot: Some(a.bot()),
        top: Some(a.top()),
    }
}

/// Rebuilds the algebra from the order matrix, verifying every supplied
/// table against the recomputed operations.
pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<BiHeytingAlgebra> {
    check_schema(&doc.schema)?;
    let a = BiHeytingAlgebra::from_lattice(
        doc.labels.clone(),
        &doc.leq,
        doc.imp.as_deref(),
        doc.coimp.as_deref(),
    )?;
    let verify = |name: &str, t: &Option<Vec<Vec<usize>>>, f: &dyn Fn(usize, usize) -> usize| -> Result<()> {
        if let Some(t) = t {
            for x in 0..a.k() {
                for y in 0..a.k() {
                    if t.get(x).and_then(|r| r.get(y)) != Some(&f(x, y)) {
                        return Err(Error::MalformedAlgebra(format!(
                            "supplied {name} table disagrees at ({x},{y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    };
    verify("meet", &doc.meet, &|x, y| a.meet(x, y))?;
    verify("join", &doc.join, &|x, y| a.join(x, y))?;
    if let Some(b) = doc.bot {
        if b != a.bot() {
            return Err(Error::MalformedAlgebra("supplied bot disagrees".into()));
        }
    }
    if let Some(t) = doc.top {
        if t != a.top() {
            return Err(Error::MalformedAlgebra("supplied top disagrees".into()));
        }
    }
    Ok(a)
}

pub fn algebra_to_json(a: &BiHeytingAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_to_doc(a)).expect("algebra serializes")
}

pub fn algebra_from_json(src: &str) -> Result<BiHeytingAlgebra> {
    algebra_from_doc(&serde_json::from_str(src)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapDoc {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub map: Vec<usize>,
}

pub fn poset_map_to_json(m: &PosetMap) -> String {
    let doc = MapDoc { schema: SCHEMA.into(), map: m.map.clone() };
    serde_json::to_string_pretty(&doc).expect("map serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::{make_comb, make_hodkinson};

    #[test]
    fn poset_json_round_trip_bit_exact() {
        for p in [make_comb(2).unwrap(), make_hodkinson(1).unwrap()] {
            let json = poset_to_json(&p);
            let back = poset_from_json(&json).unwrap();
            assert_eq!(back, p);
            assert_eq!(poset_to_json(&back), json);
        }
    }

    #[test]
    fn poset_json_example_shape() {
        let src = r#"{"schema":"cotree-lab/1","elements":["a","b"],"covers":[["a","b"]]}"#;
        let p = poset_from_json(src).unwrap();
        assert_eq!(p.n(), 2);
        assert!(p.leq(0, 1));
    }

    #[test]
    fn poset_json_rejects_wrong_schema() {
        let src = r#"{"schema":"other/9","elements":["a"],"covers":[]}"#;
        assert!(poset_from_json(src).is_err());
    }

    #[test]
    fn algebra_json_round_trip() {
        let a = BiHeytingAlgebra::upset_algebra(&make_comb(2).unwrap(), 100).unwrap();
        let json = algebra_to_json(&a);
        let back = algebra_from_json(&json).unwrap();
        assert!(back.same_tables(&a));
        assert_eq!(algebra_to_json(&back), json);
    }

    #[test]
    fn algebra_json_rejects_bad_tables() {
        let a = crate::algebra::chain_algebra(3).unwrap();
        let mut doc = algebra_to_doc(&a);
        doc.imp.as_mut().unwrap()[0][0] = 0; // top is correct; corrupt it
        assert!(algebra_from_doc(&doc).is_err());
    }

    #[test]
    fn dot_contains_covers() {
        let p = make_comb(1).unwrap();
        let dot = poset_to_dot(&p);
        assert!(dot.contains("rankdir=BT"));
        assert!(dot.contains("n1 -> n0"));
    }
}
