//! Prelog Chow group of P^1 x P^1 degenerating into two copies of
//! P^1 x P^1 glued along a fiber.

use std::error::Error;
use std::sync::Arc;

use prelogchow::chowvariety::{Inclusion, PushforwardData, RingHom, VarietyRing};
use prelogchow::gradedring::VarSpec;
use prelogchow::prelogcx::{check_commutativity, compute_prelog, verify_prelog_cycles, Component, Cycle, PairData, SncConfig};

fn quadric(name: &str, a: &str, b: &str) -> Result<VarietyRing, Box<dyn Error>> {
    let vars = vec![VarSpec::new(a, 1), VarSpec::new(b, 1)];
    Ok(VarietyRing::parse_socle(name, vars, 2, &format!("{a}^-1*{b}^-1"), true)?)
}

/// The fiber `{a = pt}` of `(a, b)` as the line with hyperplane class `p`.
fn fiber(name: &str, line: &VarietyRing, y: &VarietyRing, a: &str, b: &str) -> Result<Inclusion, Box<dyn Error>> {
    let pull = RingHom::parse(name, &[(a, "0"), (b, "p")], line.vars())?;
    let ab = format!("{a}*{b}");
    let push = PushforwardData::parse(&[("1", a), ("p", ab.as_str())], line.vars(), y.vars())?;
    Ok(Inclusion::socle(name, line, y, pull, push)?)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let y1 = quadric("Y1", "a", "b")?;
    let y2 = quadric("Y2", "c", "d")?;
    let line = VarietyRing::parse_socle("Y12", vec![VarSpec::new("p", 1)], 1, "p^-1", true)?;
    let to1 = fiber("12->1", &line, &y1, "a", "b")?;
    let to2 = fiber("12->2", &line, &y2, "c", "d")?;
    let cfg = SncConfig::new(
        vec![
            Component { index: 1, ring: y1.clone() },
            Component { index: 2, ring: y2.clone() },
        ],
        vec![PairData { i: 1, j: 2, ring: line, to_i: Arc::new(to1), to_j: Arc::new(to2) }],
        vec![],
    )?;

    println!("{}", check_commutativity(&cfg, 1)?);
    let r = compute_prelog(&cfg, 1)?;
    println!("delta:\n{}", r.delta.matrix);
    println!("rho:\n{}", r.rho.matrix);
    println!("coker delta: Z^{}, ker rho: Z^{}, prelog rank {}", r.coker.free_rank, r.kernel.cols(), r.prelog_rank);

    // The two rulings of the general fiber specialize to these tuples.
    let cycles = vec![
        Cycle { name: "ruling a".into(), entries: vec![y1.parse("a")?, y2.parse("0")?] },
        Cycle { name: "ruling b".into(), entries: vec![y1.parse("b")?, y2.parse("d")?] },
    ];
    let report = verify_prelog_cycles(&cfg, &r, &cycles)?;
    for c in &report.cycles {
        println!("{}: prelog {}, coker coordinates {:?}", c.name, c.prelog, c.coker_coordinates.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    println!("Z-basis of the prelog group: {}", report.is_basis());
    assert!(report.is_basis());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
