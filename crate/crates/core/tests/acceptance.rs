//! Acceptance gate: runs every criterion and prints one PASS/FAIL line each.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reluvol::arith::{ceil_log, int, Integer, Rational};
use reluvol::certificate::Verdict;
use reluvol::depth::{lower_bound_nary, volume_obstruction_check, ObstructionVerdict};
use reluvol::relu::{compile_to_polytopes, max_network, RandomNet};
use reluvol::su::{p_invariant_check, random_su};
use reluvol::volume::{
    binomial_expansion_check, join_divisibility_check, modular_additivity_check, normalized_volume,
    normalized_volume_counting_oracle,
};
use reluvol::LatticePolytope;

type Check = fn() -> Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    ensure!(took <= limit, "took {:.2?}, limit {:?}", took, limit);
    Ok(())
}

fn rectangle_and_triangle() -> (LatticePolytope, LatticePolytope) {
    (
        LatticePolytope::cuboid(&[(2, 5), (0, 1)]).unwrap(),
        LatticePolytope::from_i64(&[&[0, 2], &[1, 2], &[0, 3]]).unwrap(),
    )
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-20i64..=20).into(), rng.gen_range(1i64..=7).into())
}

fn random_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n).map(|_| random_rational(rng)).collect()
}

fn plane_pair() -> Result<(), String> {
    let start = Instant::now();
    let (p1, p2) = rectangle_and_triangle();
    let sum = p1.minkowski_sum(&p2).map_err(|e| e.to_string())?;
    let vols: Vec<Integer> = [&p1, &p2, &sum].iter().map(|p| normalized_volume(p, 2).unwrap()).collect();
    ensure!(vols == [int(6), int(1), int(15)], "volumes {:?}", vols);
    let c = modular_additivity_check(&[p1.clone(), p2.clone()], 2, 2).map_err(|e| e.to_string())?;
    ensure!(c.verdict == Verdict::Holds, "15 = 6 + 1 mod 2 not confirmed");
    let c = modular_additivity_check(&[p1, p2], 2, 3).map_err(|e| e.to_string())?;
    ensure!(c.verdict == Verdict::Inapplicable, "p=3 verdict {:?}", c.verdict);
    ensure!(c.note.as_deref() == Some("d=2 is not a power of p=3"), "note {:?}", c.note);
    within(start, Duration::from_secs(1))
}

fn pyramid() -> Result<(), String> {
    let start = Instant::now();
    let rect = LatticePolytope::cuboid(&[(0, 3), (0, 1), (0, 0)]).unwrap();
    let apex = LatticePolytope::from_i64(&[&[0, 0, 2]]).unwrap();
    let pyramid = rect.conv_union(&apex).unwrap();
    let vol = normalized_volume(&pyramid, 3).unwrap();
    ensure!(vol == int(12), "Vol_3 = {}", vol);
    let c = join_divisibility_check(&rect, &apex).map_err(|e| e.to_string())?;
    ensure!(c.verdict == Verdict::Holds, "join check {:?}", c.verdict);
    ensure!(c.witness_volumes["A"] == 6 && c.witness_volumes["B"] == 1, "factors {:?}", c.witness_volumes);
    within(start, Duration::from_secs(1))
}

fn binomial_suite() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for d in 2..=4 {
        for i in 0..100 {
            let a = LatticePolytope::random_of_dim(d, d, d + 2, (-4, 4), &mut rng).unwrap();
            let b = LatticePolytope::random_of_dim(d, d, d + 2, (-4, 4), &mut rng).unwrap();
            let e = binomial_expansion_check(&a, &b, d).map_err(|e| e.to_string())?;
            ensure!(e.holds, "d={d} pair {i}: {} != {}", e.sum, e.volume_of_sum);
        }
    }
    within(start, Duration::from_secs(60))
}

fn modular_suite() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for (p, t) in [(2u64, 1u32), (2, 2), (3, 1)] {
        let d = p.pow(t) as usize;
        for i in 0..100 {
            let parts: Vec<LatticePolytope> = (0..rng.gen_range(2..=3))
                .map(|_| {
                    let dim = rng.gen_range(1..=d);
                    LatticePolytope::random_of_dim(d, dim, dim + 2, (-2, 2), &mut rng).unwrap()
                })
                .collect();
            let c = modular_additivity_check(&parts, d, p).map_err(|e| e.to_string())?;
            ensure!(c.verdict == Verdict::Holds, "(p,t)=({p},{t}) instance {i}: {:?}", c.witness_volumes);
        }
    }
    within(start, Duration::from_secs(60))
}

fn oracle_agreement() -> Result<(), String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..200 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(1..=n);
        let p = LatticePolytope::random_of_dim(n, d, d + 3, (-2, 2), &mut rng).unwrap();
        let tri = normalized_volume(&p, d).map_err(|e| e.to_string())?;
        let oracle = normalized_volume_counting_oracle(&p, d, d as u64 + 1).map_err(|e| e.to_string())?;
        ensure!(tri == oracle, "polytope {i} {:?}: triangulation {tri}, counting {oracle}", p);
    }
    within(start, Duration::from_secs(120))
}

/// Draws instances until `wanted` of them have at least one `p^k`-face, so
/// none pass vacuously.
fn su_instances(k: usize, dims: &[usize], budget: usize, range: (i64, i64), wanted: usize) -> Result<usize, String> {
    let mut found = 0;
    let mut faces = 0;
    for seed in 0..10_000u64 {
        if found == wanted {
            return Ok(faces);
        }
        let n = dims[seed as usize % dims.len()];
        let e = random_su(k, n, budget, range, seed).unwrap();
        let r = p_invariant_check(&e, 2).map_err(|e| e.to_string())?;
        ensure!(r.verdict == Verdict::Holds, "SU^{k} seed {seed} in n={n}: {:?}", r.faces);
        if !r.faces.is_empty() {
            found += 1;
            faces += r.faces.len();
        }
    }
    Err(format!("only {found} non-vacuous SU^{k} instances"))
}

fn su_invariant_suite() -> Result<(), String> {
    let start = Instant::now();
    su_instances(1, &[2, 3, 4], 3, (-2, 2), 50)?;
    su_instances(2, &[4], 3, (-2, 2), 20)?;
    within(start, Duration::from_secs(300))
}

fn face_recursion_suite() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100u64 {
        let k = 1 + (i % 2) as usize;
        let e = random_su(k, 3, 2, (-2, 2), i).unwrap();
        // small integer directions with zeros, so ties occur
        let u: Vec<Rational> = (0..3).map(|_| Rational::from_integer(rng.gen_range(-1i64..=1).into())).collect();
        let f = e.face_expr(&u).map_err(|e| e.to_string())?;
        let expected = e.evaluate().unwrap().face(&u).unwrap();
        ensure!(f.depth() <= e.depth(), "instance {i}: depth grew");
        ensure!(f.evaluate().unwrap() == expected, "instance {i}: face mismatch");
    }
    Ok(())
}

fn compiler_soundness() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100u64 {
        let n = rng.gen_range(1..=3);
        let k = rng.gen_range(1..=2);
        let hidden: Vec<usize> = (0..k).map(|_| rng.gen_range(1..=4)).collect();
        let net = RandomNet::new(n, hidden).seed(i).generate().unwrap();
        let pair = compile_to_polytopes(&net).map_err(|e| e.to_string())?;
        ensure!(pair.depth() <= net.hidden_layers(), "net {i}: depth {}", pair.depth());
        for _ in 0..100 {
            let x = random_point(&mut rng, n);
            let f = net.evaluate(&x).unwrap();
            let g = pair.value_at(&x).unwrap();
            ensure!(f == g, "net {i} at {:?}: {f} vs {g}", x);
        }
    }
    Ok(())
}

fn grid(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-2..=2).map(move |v| {
                    let mut q: Vec<i64> = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn max_construction() -> Result<(), String> {
    for n in 1..=4usize {
        let net = max_network(n).unwrap();
        let expected = ceil_log(2, n as u64 + 1) as usize;
        ensure!(net.hidden_layers() == expected, "n={n}: {} hidden layers", net.hidden_layers());
        let lambda = Rational::from_integer(Integer::from(2u32).pow(net.scale_log2()));
        for x in grid(n) {
            let direct = x.iter().copied().chain([0]).max().unwrap();
            let got = net.evaluate_int(&x).unwrap();
            ensure!(got == &lambda * Rational::from_integer(direct.into()), "n={n} at {:?}: {got}", x);
        }
    }
    Ok(())
}

fn cor_2_5() -> Result<(), String> {
    let pair = compile_to_polytopes(&max_network(2).unwrap()).map_err(|e| e.to_string())?;
    let (a, b) = pair.evaluate().unwrap();
    let lhs = LatticePolytope::standard_simplex(2).unwrap().minkowski_sum(&a).unwrap();
    ensure!(lhs == b, "Δ_2 + A = {:?} but B = {:?}", lhs, b);
    Ok(())
}

fn clearing_denominators() -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..50u64 {
        let m = rng.gen_range(2u64..=100);
        let n = rng.gen_range(1..=3);
        let hidden: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(1..=3)).collect();
        let net = RandomNet::new(n, hidden).denominator(m).biased(i % 2 == 0).seed(i).generate().unwrap();
        let g = net.clear_denominators(&Integer::from(m)).map_err(|e| e.to_string())?;
        ensure!(g.has_integer_weights(), "net {i}: non-integer weights");
        ensure!(g.hidden_layers() == net.hidden_layers(), "net {i}: depth changed");
        let scale = Rational::from_integer(Integer::from(m).pow(net.hidden_layers() as u32 + 1));
        for _ in 0..100 {
            let x = random_point(&mut rng, n);
            let lhs = g.evaluate(&x).unwrap();
            let rhs = net.evaluate(&x).unwrap() * &scale;
            ensure!(lhs == rhs, "net {i} at {:?}", x);
        }
    }
    Ok(())
}

fn decimal_bound() -> Result<(), String> {
    let start = Instant::now();
    let mut k = 0u32;
    let mut power = 1u64;
    for n in 1..=1_000_000u64 {
        // brute force: smallest k with 3^k >= n + 1
        while power < n + 1 {
            power *= 3;
            k += 1;
        }
        let r = lower_bound_nary(n, 10).map_err(|e| e.to_string())?;
        ensure!(r.p == 3 && r.k_lo == k, "n={n}: got (p={}, k={}), expected k={k}", r.p, r.k_lo);
    }
    within(start, Duration::from_secs(5))
}

fn obstruction_demo() -> Result<(), String> {
    let c = volume_obstruction_check(&LatticePolytope::standard_simplex(2).unwrap(), 1, 2).map_err(|e| e.to_string())?;
    ensure!(c.verdict == ObstructionVerdict::Obstructed, "verdict {:?}", c.verdict);
    ensure!(c.residue == 1, "residue {}", c.residue);
    Ok(())
}

fn refuter_pipeline() -> Result<(), String> {
    let start = Instant::now();
    let net = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/impostor_f2.json");
    let out = Command::new(env!("CARGO_BIN_EXE_reluvol"))
        .args(["net", "refute"])
        .arg(&net)
        .args(["-n", "2"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(1), "exit code {:?}", out.status.code());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let witnessed = v["certificate"]["witness"]["u"].is_array();
    let obstructed = v["obstruction"]["verdict"] == "obstructed";
    ensure!(witnessed || obstructed, "neither a witness nor an obstruction: {v}");
    within(start, Duration::from_secs(5))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check); 14] = [
        ("rectangle, triangle and sum volumes, mod-2 additivity", plane_pair),
        ("pyramid volume and join divisibility", pyramid),
        ("binomial expansion on random pairs, d = 2, 3, 4", binomial_suite),
        ("modular additivity for (p,t) in (2,1), (2,2), (3,1)", modular_suite),
        ("triangulation agrees with the counting oracle", oracle_agreement),
        ("SU^k faces have Vol_{p^k} divisible by p", su_invariant_suite),
        ("face expressions evaluate to faces", face_recursion_suite),
        ("compiled pairs match network evaluation", compiler_soundness),
        ("max construction depth and values", max_construction),
        ("Δ_2 + A = B for the compiled max network", cor_2_5),
        ("clearing denominators computes M^(k+1) f", clearing_denominators),
        ("decimal depth bound equals ⌈log_3(n+1)⌉ up to 10^6", decimal_bound),
        ("Vol_2(Δ_2) obstructs one hidden layer", obstruction_demo),
        ("refuter rejects a one-hidden-layer F_2 network", refuter_pipeline),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed().as_secs_f64();
        match result {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({took:.2} s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name} ({took:.2} s): {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
