//! Numerical Chow rings presented by a dual socle generator: contraction,
//! pairing matrices and graded pieces as lattices.

use std::error::Error;

use prelogchow::chowvariety::VarietyRing;
use prelogchow::gradedring::{contract, pairing_matrix, parse_poly, VarSpec};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // P^3 blown up along a canonical genus 4 curve.
    let vars = vec![VarSpec::new("H", 1), VarSpec::new("E", 1), VarSpec::new("F", 2)];
    let lc = VarietyRing::parse_socle("LC", vars.clone(), 3, "H^-3 - 6*H^-1*E^-2 - 30*E^-3 - E^-1*F^-1", false)?;
    let f = lc.socle().expect("socle ring");
    println!("socle: {}", f.render(&vars));

    for text in ["H^3", "H*E^2", "E^3", "E*F", "H^2*E"] {
        let c = lc.parse(text)?;
        println!("deg {text:<6} = {}", lc.degree_of(&c));
    }

    // Contracting by E lowers the socle to a generator of E's annihilator quotient.
    let e = parse_poly("E", &vars)?;
    println!("E ⌟ f = {}", contract(&e, f, &vars)?.render(&vars));

    for d in 0..=3 {
        let gram = pairing_matrix(&vars, f, d)?;
        let piece = lc.graded_piece(d)?;
        println!("Num^{d}: {} monomials, rank {}", gram.rows(), piece.rank);
    }
    println!("pairing Num^1 x Num^2 on monomials:\n{}", pairing_matrix(&vars, f, 1)?);

    // Coordinates are taken in the HNF basis of the pairing lattice of Num^2.
    let e2 = lc.parse("E^2")?;
    println!("E^2 in the lattice basis of Num^2: {:?}", lc.coordinates(&e2, 2)?.iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
