//! Recovering the pullback of a generator from the projection formula: the
//! class D on L_C x L_C restricted to L_C x (P^1 x P^1).

use std::error::Error;

use prelogchow::chowvariety::solve_unknown_pullback;
use prelogchow::cubic3fold::Scenario;
use prelogchow::gradedring::parse_poly;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let sc = Scenario::builtin()?;
    let incl = sc.map("12->1")?;
    let src = incl.source();
    println!("{} -> {}", src.name(), incl.target().name());

    // The built map already carries the solved image; solve again from scratch.
    let ansatz: Vec<_> = ["h*R1*R2", "e*R1*R2", "h^2*(R1 + R2)", "f*(R1 + R2)"]
        .iter()
        .map(|t| parse_poly(t, src.vars()))
        .collect::<Result<_, _>>()?;
    let sol = solve_unknown_pullback(incl, "D", &ansatz)?;
    println!("coefficients on the ansatz: {:?}", sol.coefficients.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("pullback of D = {}", sol.image.render(src.vars()));
    assert_eq!(sol.image, parse_poly("e*R1*R2 + 3*f*(R1 + R2)", src.vars())?);

    // An ansatz without the right terms has no solution.
    let short = vec![parse_poly("h*R1*R2", src.vars())?];
    println!("with a short ansatz: {}", solve_unknown_pullback(incl, "D", &short).unwrap_err());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
