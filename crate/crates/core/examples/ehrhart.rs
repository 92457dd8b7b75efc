// Ehrhart counts of a tetrahedron and the volume read off from them.

use reluvol::arith::format_rational;
use reluvol::volume::{ehrhart_data, normalized_volume};
use reluvol::LatticePolytope;

fn main() {
    let p = LatticePolytope::from_i64(&[&[0, 0, 0], &[2, 0, 0], &[0, 1, 0], &[1, 1, 3]]).unwrap();
    let (counts, coeffs) = ehrhart_data(&p, 4);
    println!("L(tP) for t = 0..4: {}", counts.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
    let poly: Vec<String> = coeffs.iter().enumerate().map(|(i, c)| format!("{} t^{i}", format_rational(c))).collect();
    println!("L(t) = {}", poly.join(" + "));
    // Leading coefficient times 3! is the normalized volume.
    let lead = coeffs[3].clone() * reluvol::Rational::from_integer(6.into());
    println!("3! * leading = {}, triangulation = {}", format_rational(&lead), normalized_volume(&p, 3).unwrap());
    assert_eq!(lead.to_integer(), normalized_volume(&p, 3).unwrap());
}
