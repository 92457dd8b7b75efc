// Normalized volumes of two plane polygons and their Minkowski sum, checked
// against lattice-point counting.

use reluvol::volume::{normalized_volume, normalized_volume_counting_oracle, pulling_triangulation};
use reluvol::LatticePolytope;

fn main() {
    let rectangle = LatticePolytope::cuboid(&[(2, 5), (0, 1)]).unwrap();
    let triangle = LatticePolytope::from_i64(&[&[0, 2], &[1, 2], &[0, 3]]).unwrap();
    let sum = rectangle.minkowski_sum(&triangle).unwrap();

    for (name, p) in [("rectangle", &rectangle), ("triangle", &triangle), ("sum", &sum)] {
        let vol = normalized_volume(p, 2).unwrap();
        let counted = normalized_volume_counting_oracle(p, 2, 3).unwrap();
        assert_eq!(vol, counted);
        println!(
            "{name:9} vertices={} simplices={} Vol_2={vol}",
            p.num_vertices(),
            pulling_triangulation(p).len()
        );
    }
    assert_eq!(normalized_volume(&sum, 2).unwrap(), 15.into());

    // A polytope of lower dimension has zero top-dimensional volume.
    let segment = LatticePolytope::from_i64(&[&[0, 0], &[3, 3]]).unwrap();
    println!("segment   Vol_1={} Vol_2={}", normalized_volume(&segment, 1).unwrap(), normalized_volume(&segment, 2).unwrap());
}
