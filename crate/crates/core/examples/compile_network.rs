// Compiling a homogeneous integer network to a pair of polytopes (A, B) with
// f = h_B - h_A, then testing two networks for equality.

use reluvol::arith::rat;
use reluvol::relu::{compile_to_polytopes, functions_equal, Layer, RandomNet, ReluNetwork, Ring};

fn main() {
    let net = RandomNet::new(2, vec![3, 2]).range(2).seed(3).generate().unwrap();
    let pair = compile_to_polytopes(&net).unwrap();
    let (a, b) = pair.evaluate().unwrap();
    println!("depth {} |A| = {} |B| = {}", pair.depth(), a.num_vertices(), b.num_vertices());
    for x in [[rat(1, 1), rat(-2, 3)], [rat(5, 2), rat(1, 7)]] {
        let (lhs, rhs) = (net.evaluate(&x).unwrap(), pair.value_at(&x).unwrap());
        assert_eq!(lhs, rhs);
        println!("  f({}, {}) = {lhs}", x[0], x[1]);
    }

    // max(0, x1, x2) against max(x1, x2): they differ at (-1, -1).
    let a = reluvol::relu::max_network(2).unwrap();
    let b = ReluNetwork::new(
        Ring::Integers,
        vec![Layer::linear(&[vec![0, 1], vec![1, -1], vec![0, -1]]), Layer::linear(&[vec![1, 1, -1]])],
    )
    .unwrap();
    let c = functions_equal(&a, &b).unwrap();
    println!("equal: {:?}", c.verdict);
    if let Some(w) = c.witness {
        println!("witness {w}");
    }
}
