// Lower bounds on the number of hidden layers needed for max(0, x_1, ..., x_n)
// with N-ary weights, and the functions that separate depths.

use reluvol::depth::{gradual_growth_table, lower_bound_integer, lower_bound_nary};

fn main() {
    for n in [3, 8, 26, 80, 1_000_000] {
        let z = lower_bound_integer(n).unwrap();
        let dec = lower_bound_nary(n, 10).unwrap();
        println!("n={n:>8}: integers k >= {} (p={}), decimals k >= {} (p={}), upper {}", z.k_lo, z.p, dec.k_lo, dec.p, dec.k_hi);
    }
    println!("base 10, n = 100:");
    for row in gradual_growth_table(100, 10).unwrap() {
        println!(
            "  {} needs more than {} and at most {} hidden layers",
            row.function, row.not_representable_with, row.representable_with
        );
    }
}
