//! Blow-up of P^3 along a line: intersection numbers of the exceptional
//! divisor and the strict transform of a plane through the line.

use std::error::Error;

use prelogchow::chowvariety::{blowup, proj_bundle_rank2, Inclusion, RingHom, VarietyRing};
use prelogchow::gradedring::{parse_poly, VarSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let p3 = VarietyRing::parse_socle("P3", vec![VarSpec::new("H", 1)], 3, "H^-3", true)?;
    let line = VarietyRing::parse_socle("L", vec![VarSpec::new("P", 1)], 1, "P^-1", true)?;

    // Normal bundle O(1) + O(1): xi^2 + c1·xi + c2 with c1 = 2P, c2 = 0.
    let vars = vec![VarSpec::new("P", 1), VarSpec::new("xi", 1)];
    let e = proj_bundle_rank2("E", &line, "xi", &parse_poly("xi^2 + 2*P*xi", &vars)?)?;
    let center = RingHom::parse("P3|L", &[("H", "P")], line.vars())?;
    let x = blowup("Bl", &p3, center, &e, parse_poly("xi", e.vars())?)?;

    let ex = Inclusion::exceptional("E->Bl", &x)?;
    let e_class = ex.push(&e.parse("1")?)?;
    let h = x.parse("H")?;
    let deg = |c: &prelogchow::chowvariety::Class| x.degree_of(c);
    println!("H^3     = {}", deg(&x.mul(&x.mul(&h, &h), &h)));
    println!("H^2·E   = {}", deg(&x.mul(&x.mul(&h, &h), &e_class)));
    println!("H·E^2   = {}", deg(&x.mul(&h, &x.mul(&e_class, &e_class))));
    println!("E^3     = {}", deg(&x.mul(&e_class, &x.mul(&e_class, &e_class))));
    assert_eq!(deg(&x.mul(&e_class, &x.mul(&e_class, &e_class))), (-2).into());

    // Planes through the line form the pencil H - E, so (H - E)^2 = 0 numerically.
    let pencil = h.sub(&e_class);
    let sq = x.mul(&pencil, &pencil);
    println!("(H - E)^2 = {}", x.render(&sq));
    assert!(x.pairing_vector(&sq, 2)?.iter().all(|v| *v == 0.into()));
    for d in 0..=3 {
        println!("rank Num^{d}(Bl) = {}", x.rank(d)?);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
