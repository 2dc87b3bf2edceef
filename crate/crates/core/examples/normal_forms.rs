//! Hermite and Smith normal forms, kernels and cokernels of an integer
//! matrix.

use std::error::Error;

use prelogchow::exactlin::{cokernel, gcd_maximal_minors, hnf, kernel_saturated, rank_mod_p, snf, IntMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let a = IntMatrix::from_i64_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
    println!("A =\n{a}");

    let (h, u) = hnf(&a);
    assert_eq!(u.mul(&a), h);
    println!("row-style HNF, U·A = H:\n{h}");

    let d = snf(&a);
    assert_eq!(d.u.mul(&a).mul(&d.v), d.s);
    println!("invariant factors: {:?}", d.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>());

    let c = cokernel(&a);
    println!("coker A: Z^{} with torsion {:?}", c.free_rank, c.invariant_factors.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("gcd of maximal minors: {}", gcd_maximal_minors(&a));
    for p in [2, 3, 5, 7] {
        println!("rank mod {p}: {}", rank_mod_p(&a, p)?);
    }

    let b = IntMatrix::from_i64_rows(&[[1, 2, 3], [2, 4, 6]]);
    let k = kernel_saturated(&b);
    assert!(b.mul(&k).is_zero());
    println!("saturated kernel of\n{b}is spanned by the columns of\n{k}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
