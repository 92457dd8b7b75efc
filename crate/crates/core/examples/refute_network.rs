// Rejecting a network that claims to compute max(0, x1, x2) with one hidden
// layer: the polytope pair disagrees with the simplex, and the volume of the
// simplex is odd.

use reluvol::arith::int;
use reluvol::depth::{refute_network_claim, volume_obstruction_check, Lambda};
use reluvol::{LatticePolytope, ReluNetwork};

fn main() {
    let text = include_str!("../data/impostor_f2.json");
    let net = ReluNetwork::from_json(&serde_json::from_str(text).unwrap()).unwrap();
    let r = refute_network_claim(&net, 2, Lambda::Auto).unwrap();
    println!("verdict {:?}, exit code {}", r.certificate.verdict, r.exit_code());
    println!("witness {}", r.certificate.witness.clone().unwrap_or_default());
    if let Some(o) = &r.obstruction {
        println!("obstruction: Vol_{} = {} = {} mod {}, {:?}", o.d, o.volume, o.residue, o.p, o.verdict);
    }

    let simplex = LatticePolytope::standard_simplex(3).unwrap().dilate(&int(2)).unwrap();
    let o = volume_obstruction_check(&simplex, 1, 2).unwrap();
    println!("2*simplex in R^3 with k=1: {:?} ({})", o.verdict, o.note.unwrap_or_default());
}
