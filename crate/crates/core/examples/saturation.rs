//! Saturating a sublattice: the gcd of maximal minors measures the index and
//! the kernel mod 2 locates the missing half-sum.

use std::error::Error;

use prelogchow::exactlin::IntMatrix;
use prelogchow::prelogcx::saturate_generators;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Columns g1, g2, g3 with g1 + g2 + g3 divisible by 2.
    let g = IntMatrix::from_i64_rows(&[[1, 1, 0], [1, 0, 1], [0, 1, 1], [3, 1, 2]]);
    println!("generators (columns):\n{g}");
    let s = saturate_generators(&g)?;
    println!("gcd of maximal minors: {}", s.gcd_maximal_minors);
    println!("ranks mod p: {:?}", s.ranks_mod_p);
    println!("kernel mod 2: {:?}", s.kernel_mod_2);
    println!("index [saturation : span] = {}", s.index);
    println!("half sum: {:?}", s.half_sum.as_ref().map(|v| v.iter().map(ToString::to_string).collect::<Vec<_>>()));
    println!("adjoining it saturates: {}", s.half_sum_saturates);
    println!("saturated basis (columns):\n{}", s.saturated);
    assert_eq!(s.index, s.gcd_maximal_minors);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
