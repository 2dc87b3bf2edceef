//! The degeneration of a cubic threefold: build every ring and map, then run
//! the verification suite.

use std::error::Error;

use prelogchow::cubic3fold::{run_verification, CheckStatus, Scenario, VerifyOptions};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sc = Scenario::builtin()?;
    for c in sc.config().components() {
        println!("Y{}: {} ({})", c.index, c.ring.name(), c.ring.note());
    }
    for s in sc.solved_pullbacks() {
        let src = sc.map(&s.map)?.source().clone();
        println!("pullback of {} along {}: {}", s.var, s.map, s.image.render(src.vars()));
    }
    for r in sc.rederivations() {
        println!("socle of {} re-derived: {}", r.ring, if r.matches() { "matches" } else { "differs" });
    }

    let v = run_verification(&sc, &VerifyOptions { only: vec![], char_probe: Some(2) });
    for c in &v.checks {
        println!("{:?} {} = {}", c.status, c.id, c.computed);
    }
    println!("prelog rank {:?}, saturation index {:?}", v.summary.prelog_rank, v.summary.saturation_index);
    assert!(v.checks.iter().all(|c| c.status != CheckStatus::Fail));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
