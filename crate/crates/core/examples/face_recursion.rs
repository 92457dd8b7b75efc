// Faces of an SU expression computed symbolically and compared with faces of
// the evaluated polytope.

use reluvol::arith::{format_rational, rat};
use reluvol::su::RandomSu;

fn main() {
    let e = RandomSu::new(2, 3).budget(3).range(-2, 2).seed(11).generate().unwrap();
    let p = e.evaluate().unwrap();
    println!("expression size {} depth {}, polytope dim {} with {} vertices", e.size(), e.depth(), p.dim(), p.num_vertices());
    for u in [[1, 0, 0], [0, -1, 0], [1, 1, 1], [0, 0, 0]] {
        let u: Vec<_> = u.iter().map(|&x| rat(x, 1)).collect();
        let f = e.face_expr(&u).unwrap();
        let face = f.evaluate().unwrap();
        assert_eq!(face, p.face(&u).unwrap());
        let shown: Vec<String> = u.iter().map(format_rational).collect();
        println!("u = ({}): face expression size {}, face dim {}", shown.join(", "), f.size(), face.dim());
    }
}
