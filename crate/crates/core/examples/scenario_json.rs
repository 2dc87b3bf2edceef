//! A scenario written as a JSON document: two copies of P^1 x P^1 glued
//! along a fiber, with an expectation registry checked by the same driver
//! as the built-in scenario.

use std::error::Error;

use prelogchow::cubic3fold::{run_verification, Scenario, ScenarioDoc, VerifyOptions};

const DOC: &str = r#"{
  "id": "quadric-chain",
  "degree": 1,
  "rings": [
    {"name": "Y1", "kind": "socle", "dim": 2, "linear": true,
     "vars": [{"name": "a", "degree": 1}, {"name": "b", "degree": 1}], "socle": "a^-1*b^-1"},
    {"name": "Y2", "kind": "renamed", "from": "Y1", "map": {"a": "c", "b": "d"}},
    {"name": "L", "kind": "socle", "dim": 1, "linear": true,
     "vars": [{"name": "p", "degree": 1}], "socle": "p^-1"}
  ],
  "maps": [
    {"name": "12->1", "kind": "socle", "source": "L", "target": "Y1",
     "pullback": {"a": "0", "b": "p"}, "pushforward": [["1", "a"], ["p", "a*b"]]},
    {"name": "12->2", "kind": "socle", "source": "L", "target": "Y2",
     "pullback": {"c": "0", "d": "p"}, "pushforward": [["1", "c"], ["p", "c*d"]]}
  ],
  "components": [{"index": 1, "ring": "Y1"}, {"index": 2, "ring": "Y2"}],
  "pairs": [{"i": 1, "j": 2, "ring": "L", "to_i": "12->1", "to_j": "12->2"}],
  "cycles": [
    {"name": "A", "entries": ["a", "0"]},
    {"name": "B", "entries": ["b", "d"]}
  ],
  "expectations": [
    {"id": "delta.rank", "description": "rank of delta", "expected": 1, "citation": "example"},
    {"id": "coker.free_rank", "description": "free rank of coker delta", "expected": 3, "citation": "example"},
    {"id": "prelog.rank", "description": "prelog rank", "expected": 2, "citation": "example"},
    {"id": "commutativity", "description": "no triple points", "expected": true, "citation": "example"},
    {"id": "cycles.basis", "description": "the rulings form a basis", "expected": true, "citation": "example"},
    {"id": "saturation.index", "description": "already saturated", "expected": 1, "citation": "example"},
    {"id": "deg.ab", "description": "deg a*b", "expected": 1, "citation": "example",
     "probe": {"kind": "degree", "ring": "Y1", "class": "a*b"}}
  ]
}"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let doc: ScenarioDoc = serde_json::from_str(DOC)?;
    let sc = Scenario::from_doc(doc.clone())?;
    let v = run_verification(&sc, &VerifyOptions::default());
    for c in &v.checks {
        println!("{:?} {:<18} expected {} computed {}", c.status, c.id, c.expected, c.computed);
    }
    assert!(v.passed());

    // Documents round-trip through serde.
    let text = serde_json::to_string_pretty(&doc)?;
    assert_eq!(serde_json::from_str::<ScenarioDoc>(&text)?, doc);
    println!("document re-serialized to {} bytes", text.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
