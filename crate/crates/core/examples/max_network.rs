// The maximum of n numbers as a ReLU network with weights in {-1, 1} and
// ceil(log2(n+1)) hidden layers.

use reluvol::arith::{ceil_log, rat, Integer};
use reluvol::relu::{max_network, pairwise_max_network, represents_scaled_simplex};

fn main() {
    for n in 1..=7 {
        let net = max_network(n).unwrap();
        assert_eq!(net.hidden_layers() as u32, ceil_log(2, n as u64 + 1));
        let x: Vec<_> = (0..n).map(|i| rat(3 * i as i64 - 7, 2)).collect();
        println!("n={n} widths {:?} max(0, x) = {}", net.widths(), net.evaluate(&x).unwrap());
        assert!(represents_scaled_simplex(&net, &Integer::from(1)).unwrap().holds());
    }

    // Another pairing of the values 0, x1, x2, x3 gives the same function.
    let other = pairwise_max_network(3, &[3, 0, 2, 1]).unwrap();
    let c = reluvol::relu::functions_equal(&other, &max_network(3).unwrap()).unwrap();
    println!("pairing [3, 0, 2, 1]: widths {:?}, same function: {:?}", other.widths(), c.verdict);
}
