// Random sum-union expressions: every p^k-face of an SU^k polytope has
// normalized volume divisible by p.

use reluvol::su::{p_invariant_check, random_su, SuExpr};
use reluvol::Verdict;

fn main() {
    let mut shown = 0;
    for seed in 0.. {
        let e = random_su(2, 4, 3, (-2, 2), seed).unwrap();
        let r = p_invariant_check(&e, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        if r.faces.is_empty() {
            continue;
        }
        let residues: Vec<u64> = r.faces.iter().map(|f| f.residue).collect();
        println!("seed {seed}: size {} depth {} faces {} residues {:?}", e.size(), e.depth(), r.faces.len(), residues);
        shown += 1;
        if shown == 3 {
            break;
        }
    }

    // The square [0,1]^2 is a sum of two segments, each a union of two points.
    let seg = |x: i64, y: i64| {
        SuExpr::conv_union(SuExpr::origin(2), SuExpr::point(reluvol::arith::point(&[x, y])).unwrap()).unwrap()
    };
    let square = SuExpr::sum(vec![seg(1, 0), seg(0, 1)]).unwrap();
    let r = p_invariant_check(&square, 2).unwrap();
    println!("unit square: depth {} Vol_2 = {}", square.depth(), r.faces[0].volume);
}
