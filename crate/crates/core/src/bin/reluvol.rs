use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use reluvol::arith::{integer_to_json, parse_rational, Integer, Rational};
use reluvol::certificate::Verdict;
use reluvol::depth::{
    gradual_growth_table, lower_bound_integer, lower_bound_nary, refute_network_claim, volume_obstruction_check,
    Lambda, ObstructionVerdict,
};
use reluvol::polytope::{set_max_ambient_dim, LatticePolytope};
use reluvol::relu::{compile_to_polytopes, functions_equal, max_network, pairwise_max_network, represents_scaled_simplex, ReluNetwork};
use reluvol::su::{p_invariant_check, random_su, SuExpr};
use reluvol::volume::{
    binomial_expansion_check, ehrhart_data, face_volume_propagation_check, join_divisibility_check, mixed_volume,
    modular_additivity_check, normalized_volume_counting_oracle, union_divisibility_check, volume_report,
};
use reluvol::{Error, Result};

#[derive(Parser)]
#[command(name = "reluvol", version, about = "Exact lattice-polytope volumes and ReLU depth obstructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized volume Vol_d (d defaults to dim P)
    Vol {
        poly: PathBuf,
        #[arg(short)]
        d: Option<usize>,
        /// Also run the lattice-point counting oracle
        #[arg(long)]
        oracle: bool,
    },
    /// Lattice points of tP for t = 0..=tmax and the Ehrhart polynomial
    Count {
        poly: PathBuf,
        #[arg(long, default_value_t = 1)]
        tmax: u64,
    },
    /// Mixed volume V(P_1, ..., P_d)
    Mixedvol {
        #[arg(required = true)]
        polys: Vec<PathBuf>,
    },
    /// Minkowski sum
    Mink { p: PathBuf, q: PathBuf },
    /// Convex hull of a list of integer points
    Hull { points: PathBuf },
    /// Face maximizing a direction
    Face {
        poly: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Binomial expansion of Vol_d(A + B) into mixed volumes
    Binomial {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        d: Option<usize>,
    },
    /// Divisibility checks
    Check {
        #[command(subcommand)]
        check: CheckCommand,
    },
    /// Sum-union expressions
    Su {
        #[command(subcommand)]
        command: SuCommand,
    },
    /// ReLU networks
    Net {
        #[command(subcommand)]
        command: NetCommand,
    },
    /// Depth lower bound for n inputs and weight base N (omit N for integers)
    Bound {
        #[arg(short = 'n')]
        inputs: u64,
        #[arg(short = 'N')]
        base: Option<u64>,
    },
    /// Functions F_{p^k} separating depth k from a larger depth
    Growth {
        #[arg(short = 'n')]
        inputs: u64,
        #[arg(short = 'N', default_value_t = 10)]
        base: u64,
    },
    /// Volume obstruction for a claimed depth k
    Obstruct {
        poly: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Vol_d of a sum against the sum of Vol_d, modulo p, with d = p^t
    Modular {
        #[arg(required = true)]
        parts: Vec<PathBuf>,
        #[arg(short)]
        p: u64,
        #[arg(short)]
        t: u32,
    },
    /// Join of polytopes in skew position
    Join { a: PathBuf, b: PathBuf },
    /// conv(A ∪ B) from p^(t-1)-faces of A and B
    Union {
        a: PathBuf,
        b: PathBuf,
        #[arg(short)]
        p: u64,
        #[arg(short)]
        t: u32,
    },
    /// Face volumes mod m propagating to Vol_d
    Faces {
        poly: PathBuf,
        #[arg(short)]
        s: usize,
        #[arg(short)]
        d: usize,
        #[arg(short)]
        m: u64,
    },
    /// Vol_{p^k} of every p^k-face of an SU^k expression, modulo p
    SuInvariant {
        expr: PathBuf,
        #[arg(short)]
        p: u64,
    },
}

#[derive(Subcommand)]
enum SuCommand {
    /// Evaluate an expression to its polytope
    Eval {
        expr: PathBuf,
    },
    /// Face expression for a direction, with its evaluation
    Face {
        expr: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Random SU^k expression of exact depth k
    Random {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        budget: usize,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 2)]
        hi: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum NetCommand {
    /// Value of the network at a point
    Eval {
        net: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Integer network computing M^(k+1) f (M defaults to the common denominator)
    Clear {
        net: PathBuf,
        #[arg(short = 'M')]
        m: Option<String>,
    },
    /// Polytope pair (A, B) with f = h_B - h_A
    Compile {
        net: PathBuf,
    },
    /// Whether two networks compute the same function
    Equal {
        first: PathBuf,
        second: PathBuf,
    },
    /// The max construction for n inputs, optionally in another pairing order
    Max {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        order: Option<String>,
    },
    /// Depth and values of a max network (built for -n when no file is given)
    VerifyMax {
        net: Option<PathBuf>,
        #[arg(short)]
        n: Option<usize>,
    },
    /// Tests the claim that a network computes F_n
    Refute {
        net: PathBuf,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value = "auto")]
        lambda: String,
    },
}

fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

/// Accepts `{"n": .., "vertices": [..]}` or a bare list of points.
fn read_polytope(path: &Path) -> Result<LatticePolytope> {
    let v = read_json(path)?;
    if v.is_array() {
        let n = v.get(0).and_then(Value::as_array).map_or(0, Vec::len);
        return LatticePolytope::from_json(&json!({ "n": n, "vertices": v }));
    }
    if let Some(points) = v.get("points") {
        let n = points.get(0).and_then(Value::as_array).map_or(0, Vec::len);
        return LatticePolytope::from_json(&json!({ "n": n, "vertices": points }));
    }
    LatticePolytope::from_json(&v)
}

fn read_net(path: &Path) -> Result<ReluNetwork> {
    ReluNetwork::from_json(&read_json(path)?)
}

fn parse_vector(text: &str) -> Result<Vec<Rational>> {
    text.split(',').map(|s| parse_rational(s.trim())).collect()
}

fn parse_integer(text: &str) -> Result<Integer> {
    text.trim().parse().map_err(|_| Error::Parse {
        text: text.into(),
        reason: "expected an integer".into(),
    })
}

fn verdict_code(v: Verdict) -> u8 {
    v.exit_code() as u8
}

fn run(cli: Cli) -> Result<(Value, u8)> {
    Ok(match cli.command {
        Command::Vol { poly, d, oracle } => {
            let p = read_polytope(&poly)?;
            let d = d.unwrap_or_else(|| p.dim());
            let mut out = serde_json::to_value(volume_report(&p, d)?)?;
            if oracle && p.dim() == d {
                let v = normalized_volume_counting_oracle(&p, d, d as u64 + 1)?;
                out["oracle"] = integer_to_json(&v);
            }
            (out, 0)
        }
        Command::Count { poly, tmax } => {
            let p = read_polytope(&poly)?;
            let (counts, coeffs) = ehrhart_data(&p, tmax);
            (
                json!({
                    "counts": counts.iter().map(integer_to_json).collect::<Vec<_>>(),
                    "polynomial": coeffs.iter().map(reluvol::arith::format_rational).collect::<Vec<_>>(),
                }),
                0,
            )
        }
        Command::Mixedvol { polys } => {
            let ps = polys.iter().map(|p| read_polytope(p)).collect::<Result<Vec<_>>>()?;
            (json!({ "d": ps.len(), "mixed_volume": integer_to_json(&mixed_volume(&ps)?) }), 0)
        }
        Command::Mink { p, q } => (read_polytope(&p)?.minkowski_sum(&read_polytope(&q)?)?.to_json(), 0),
        Command::Hull { points } => (read_polytope(&points)?.to_json(), 0),
        Command::Face { poly, u } => (read_polytope(&poly)?.face(&parse_vector(&u)?)?.to_json(), 0),
        Command::Binomial { a, b, d } => {
            let (a, b) = (read_polytope(&a)?, read_polytope(&b)?);
            let d = d.unwrap_or_else(|| a.minkowski_sum(&b).map(|s| s.dim()).unwrap_or(0));
            let exp = binomial_expansion_check(&a, &b, d)?;
            let code = if exp.holds { 0 } else { 1 };
            (serde_json::to_value(exp)?, code)
        }
        Command::Check { check } => {
            let cert = match check {
                CheckCommand::Modular { parts, p, t } => {
                    let ps = parts.iter().map(|q| read_polytope(q)).collect::<Result<Vec<_>>>()?;
                    let d = p
                        .checked_pow(t)
                        .ok_or_else(|| Error::InvalidArgument("p^t overflows".into()))?;
                    modular_additivity_check(&ps, d as usize, p)?
                }
                CheckCommand::Join { a, b } => join_divisibility_check(&read_polytope(&a)?, &read_polytope(&b)?)?,
                CheckCommand::Union { a, b, p, t } => {
                    union_divisibility_check(&read_polytope(&a)?, &read_polytope(&b)?, p, t)?
                }
                CheckCommand::Faces { poly, s, d, m } => face_volume_propagation_check(&read_polytope(&poly)?, s, d, m)?,
                CheckCommand::SuInvariant { expr, p } => {
                    let report = p_invariant_check(&SuExpr::from_json(&read_json(&expr)?)?, p)?;
                    let code = verdict_code(report.verdict);
                    return Ok((serde_json::to_value(report)?, code));
                }
            };
            let code = verdict_code(cert.verdict);
            (cert.to_json(), code)
        }
        Command::Su { command } => match command {
            SuCommand::Eval { expr } => {
                let e = SuExpr::from_json(&read_json(&expr)?)?;
                (json!({ "depth": e.depth(), "polytope": e.evaluate()?.to_json() }), 0)
            }
            SuCommand::Face { expr, u } => {
                let e = SuExpr::from_json(&read_json(&expr)?)?;
                let f = e.face_expr(&parse_vector(&u)?)?;
                (
                    json!({ "depth": f.depth(), "expr": f.to_json(), "polytope": f.evaluate()?.to_json() }),
                    0,
                )
            }
            SuCommand::Random {
                k,
                n,
                budget,
                lo,
                hi,
                seed,
            } => (random_su(k, n, budget, (lo, hi), seed)?.to_json(), 0),
        },
        Command::Net { command } => run_net(command)?,
        Command::Bound { inputs, base } => {
            let report = match base {
                Some(b) => lower_bound_nary(inputs, b)?,
                None => lower_bound_integer(inputs)?,
            };
            (serde_json::to_value(report)?, 0)
        }
        Command::Growth { inputs, base } => (serde_json::to_value(gradual_growth_table(inputs, base)?)?, 0),
        Command::Obstruct { poly, k, p } => {
            let cert = volume_obstruction_check(&read_polytope(&poly)?, k, p)?;
            let code = match cert.verdict {
                ObstructionVerdict::Obstructed => 0,
                ObstructionVerdict::NoObstruction => 1,
                ObstructionVerdict::Inapplicable => 2,
            };
            (serde_json::to_value(cert)?, code)
        }
    })
}

fn run_net(command: NetCommand) -> Result<(Value, u8)> {
    Ok(match command {
        NetCommand::Eval { net, x } => {
            let v = read_net(&net)?.evaluate(&parse_vector(&x)?)?;
            (json!({ "value": reluvol::arith::format_rational(&v) }), 0)
        }
        NetCommand::Clear { net, m } => {
            let net = read_net(&net)?;
            let m = match m.as_deref() {
                None | Some("auto") => reluvol::arith::common_denominator(net.weights()),
                Some(text) => parse_integer(text)?,
            };
            let cleared = net.clear_denominators(&m)?;
            (
                json!({ "M": integer_to_json(&m), "k": net.hidden_layers(), "network": cleared.to_json() }),
                0,
            )
        }
        NetCommand::Compile { net } => {
            let pair = compile_to_polytopes(&read_net(&net)?)?;
            let (a, b) = pair.evaluate()?;
            let mut out = pair.to_json();
            out["depth"] = json!(pair.depth());
            out["A_polytope"] = a.to_json();
            out["B_polytope"] = b.to_json();
            (out, 0)
        }
        NetCommand::Equal { first, second } => {
            let cert = functions_equal(&read_net(&first)?, &read_net(&second)?)?;
            let code = verdict_code(cert.verdict);
            (cert.to_json(), code)
        }
        NetCommand::Max { n, order } => {
            let net = match order {
                Some(text) => {
                    let order = text
                        .split(',')
                        .map(|s| s.trim().parse::<usize>())
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|e| Error::InvalidArgument(format!("bad order: {e}")))?;
                    pairwise_max_network(n, &order)?
                }
                None => max_network(n)?,
            };
            (net.to_json(), 0)
        }
        NetCommand::VerifyMax { net, n } => {
            let net = match (net, n) {
                (Some(path), _) => read_net(&path)?,
                (None, Some(n)) => max_network(n)?,
                (None, None) => return Err(Error::InvalidArgument("give a network file or -n".into())),
            };
            let n = net.input_dim();
            let expected_depth = reluvol::arith::ceil_log(2, n as u64 + 1) as usize;
            let lambda = Integer::from(2u32).pow(net.scale_log2());
            let cert = represents_scaled_simplex(&net, &lambda)?;
            let depth_ok = net.hidden_layers() == expected_depth;
            let verdict = Verdict::from_bool(depth_ok && cert.holds());
            let out = json!({
                "n": n,
                "hidden_layers": net.hidden_layers(),
                "expected_hidden_layers": expected_depth,
                "scale_log2": net.scale_log2(),
                "representation": cert.to_json(),
                "verdict": verdict,
            });
            (out, verdict_code(verdict))
        }
        NetCommand::Refute { net, n, lambda } => {
            let lambda = match lambda.as_str() {
                "auto" => Lambda::Auto,
                text => Lambda::Fixed(parse_integer(text)?),
            };
            let r = refute_network_claim(&read_net(&net)?, n, lambda)?;
            let code = r.exit_code() as u8;
            (serde_json::to_value(r)?, code)
        }
    })
}

fn main() -> ExitCode {
    if let Ok(text) = std::env::var("RELUVOL_MAX_DIM") {
        match text.trim().parse::<usize>() {
            Ok(limit) => set_max_ambient_dim(limit),
            Err(_) => {
                eprintln!("RELUVOL_MAX_DIM must be a non-negative integer, got {text:?}");
                return ExitCode::from(3);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok((value, code)) => {
            // a closed pipe is not worth a panic
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&value).expect("JSON output"));
            ExitCode::from(code)
        }
        Err(e) => {
            let code = if matches!(e, Error::Precondition(_)) { 2 } else { 3 };
            let _ = writeln!(std::io::stdout().lock(), "{}", json!({ "error": e.to_string() }));
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
