//! Projectivization of a rank-2 bundle over P^1 x P^1 and its two sections.

use std::error::Error;

use prelogchow::chowvariety::{kunneth, proj_bundle_rank2, Class, Inclusion, VarietyRing};
use prelogchow::gradedring::{parse_poly, GradedPoly, VarSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p1 = |name: &str, v: &str| {
        VarietyRing::parse_socle(name, vec![VarSpec::new(v, 1)], 1, &format!("{v}^-1"), true)
    };
    let s1 = kunneth("s", &p1("a", "r1")?, &p1("b", "r2")?, false)?;
    let s2 = kunneth("S", &p1("c", "R1")?, &p1("d", "R2")?, false)?;
    let base = kunneth("SxS", &s1, &s2, false)?;

    let mut vars = base.vars().to_vec();
    vars.push(VarSpec::new("xi", 1));
    let relation = parse_poly("(xi - r1 - r2)*(xi + R1 + R2)", &vars)?;
    let n = proj_bundle_rank2("N", &base, "xi", &relation)?;
    println!("N: dimension {}, socle {}", n.dim(), n.socle().expect("bundle socle").render(n.vars()));
    for d in 0..=n.dim() {
        println!("  rank Num^{d}(N) = {}", n.rank(d)?);
    }

    // The two sections are the zero loci of the factors of the relation.
    for sigma in ["xi + R1 + R2", "xi - r1 - r2"] {
        let s = Inclusion::section(sigma, &n, parse_poly(sigma, n.vars())?)?;
        let fundamental = s.push(&Class::from_poly(GradedPoly::one()))?;
        let restricted = s.pull(&n.parse("xi")?)?;
        println!("section {sigma}: [section] = {}, xi restricts to {}", n.render(&fundamental), base.render(&restricted));
        for d in 0..=base.dim() {
            assert!(s.check_projection_formula(d)?.is_empty());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
