// Mixed volumes and the binomial expansion of Vol_d(A + B).

use reluvol::volume::{binomial_expansion_check, mixed_volume};
use reluvol::LatticePolytope;

fn main() {
    let a = LatticePolytope::cuboid(&[(2, 5), (0, 1)]).unwrap();
    let b = LatticePolytope::from_i64(&[&[0, 2], &[1, 2], &[0, 3]]).unwrap();
    println!("V(A, B) = {}", mixed_volume(&[a.clone(), b.clone()]).unwrap());

    let e = binomial_expansion_check(&a, &b, 2).unwrap();
    for t in &e.terms {
        println!(
            "  {} * V(A^{}, B^{}) = {} * {} = {}",
            t.coefficient,
            t.copies_of_a,
            e.d - t.copies_of_a,
            t.coefficient,
            t.mixed_volume,
            t.term
        );
    }
    println!("sum {} vs Vol_2(A + B) {}: {}", e.sum, e.volume_of_sum, e.holds);
    assert!(e.holds);

    let c = LatticePolytope::from_i64(&[&[0, 0, 0], &[1, 2, 0], &[0, 1, 1]]).unwrap();
    let d = LatticePolytope::from_i64(&[&[0, 0, 0], &[1, 0, 1], &[2, 1, 0], &[0, 0, 2]]).unwrap();
    let e = binomial_expansion_check(&c, &d, 3).unwrap();
    println!("in R^3: sum {} vs {}", e.sum, e.volume_of_sum);
    assert!(e.holds);
}
