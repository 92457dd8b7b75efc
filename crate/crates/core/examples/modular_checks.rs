// Divisibility checks modulo a prime: additivity over Minkowski sums, joins,
// unions and faces.

use reluvol::volume::{
    face_volume_propagation_check, join_divisibility_check, modular_additivity_check, union_divisibility_check,
};
use reluvol::LatticePolytope;

fn main() {
    let a = LatticePolytope::cuboid(&[(2, 5), (0, 1)]).unwrap();
    let b = LatticePolytope::from_i64(&[&[0, 2], &[1, 2], &[0, 3]]).unwrap();

    let c = modular_additivity_check(&[a.clone(), b.clone()], 2, 2).unwrap();
    println!("additivity mod 2: {:?} {:?}", c.verdict, c.witness_volumes);
    let c = modular_additivity_check(&[a, b], 2, 3).unwrap();
    println!("additivity mod 3: {:?} ({})", c.verdict, c.note.unwrap_or_default());

    let rect = LatticePolytope::cuboid(&[(0, 3), (0, 1), (0, 0)]).unwrap();
    let apex = LatticePolytope::from_i64(&[&[0, 0, 2]]).unwrap();
    let c = join_divisibility_check(&rect, &apex).unwrap();
    println!("join: {:?} {:?}", c.verdict, c.witness_volumes);

    let low = LatticePolytope::from_i64(&[&[0, 0], &[2, 0]]).unwrap();
    let high = LatticePolytope::from_i64(&[&[0, 2], &[2, 2]]).unwrap();
    let c = union_divisibility_check(&low, &high, 2, 1).unwrap();
    println!("union: {:?} {:?}", c.verdict, c.witness_volumes);

    let cube = LatticePolytope::cuboid(&[(0, 2), (0, 2), (0, 2)]).unwrap();
    let c = face_volume_propagation_check(&cube, 2, 3, 2).unwrap();
    println!("faces of 2*cube: {:?}", c.verdict);
}
