// A network with decimal weights becomes an integer network computing
// M^(k+1) times the original function.

use reluvol::arith::{rat, Integer};
use reluvol::ReluNetwork;

fn main() {
    let text = include_str!("../data/decimal_relu.json");
    let net = ReluNetwork::from_json(&serde_json::from_str(text).unwrap()).unwrap();
    let m = Integer::from(20);
    let cleared = net.clear_denominators(&m).unwrap();
    assert!(cleared.has_integer_weights());
    let scale = m.pow(net.hidden_layers() as u32 + 1);
    let x = [rat(3, 4), rat(-1, 5)];
    let (f, g) = (net.evaluate(&x).unwrap(), cleared.evaluate(&x).unwrap());
    println!("f(x) = {f}, g(x) = {g}, M^(k+1) = {scale}");
    assert_eq!(g, f * reluvol::Rational::from_integer(scale));
    println!("{}", serde_json::to_string_pretty(&cleared.to_json()).unwrap());
}
