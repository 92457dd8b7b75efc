//! Depth lower bounds for networks with N-ary weights, volume obstructions and
//! the refutation pipeline for networks claiming to compute
//! `F_n = max{0, x_1, ..., x_n}`.

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{ceil_log, integer_to_json, is_prime, mod_reduce, prime_power_exponent, smallest_prime_not_dividing, Integer, NaryFraction};
use crate::certificate::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;
use crate::relu::{represents_scaled_simplex, ReluNetwork, Ring};
use crate::volume::normalized_volume;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepthBoundReport {
    pub n: u64,
    /// Weight base; `None` for integer weights.
    #[serde(rename = "N", serialize_with = "ser_base")]
    pub base: Option<u64>,
    pub p: u64,
    pub k_lo: u32,
    pub k_hi: u32,
    pub notes: Vec<String>,
}

fn ser_base<S: serde::Serializer>(base: &Option<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match base {
        Some(b) => s.serialize_u64(*b),
        None => s.serialize_str("Z"),
    }
}

fn bound(n: u64, base: Option<u64>, p: u64) -> DepthBoundReport {
    let k_lo = ceil_log(p, n + 1);
    let k_hi = ceil_log(2, n + 1);
    let mut notes = vec![format!(
        "F_{n} needs at least ⌈log_{p}({})⌉ = {k_lo} hidden layers; ⌈log_2({})⌉ = {k_hi} suffice",
        n + 1,
        n + 1
    )];
    if let Some(base) = base {
        notes.push(format!(
            "{p} is the smallest prime not dividing N={base}; the asymptotic form C·ln n / ln ln N is not evaluated"
        ));
    }
    DepthBoundReport {
        n,
        base,
        p,
        k_lo,
        k_hi,
        notes,
    }
}

/// Lower bound `⌈log_p(n+1)⌉` with `p` the smallest prime not dividing `N`.
pub fn lower_bound_nary(n: u64, base: u64) -> Result<DepthBoundReport> {
    if n == 0 || base < 2 {
        return Err(Error::InvalidArgument("need n >= 1 and N >= 2".into()));
    }
    Ok(bound(n, Some(base), smallest_prime_not_dividing(base)))
}

/// Integer weights: every prime applies, and `p = 2` gives the best bound.
pub fn lower_bound_integer(n: u64) -> Result<DepthBoundReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("need n >= 1".into()));
    }
    Ok(bound(n, None, 2))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthRow {
    pub k: u32,
    pub inputs: u64,
    pub function: String,
    pub not_representable_with: u32,
    pub representable_with: u32,
}

/// Rows `k >= 1` with `p^k <= n`: `F_{p^k}` needs more than `k` hidden layers
/// with N-ary weights but `⌈log_2(p^k + 1)⌉` are enough (`2k` when `p = 3`).
pub fn gradual_growth_table(n: u64, base: u64) -> Result<Vec<GrowthRow>> {
    if base < 2 {
        return Err(Error::InvalidArgument("N must be at least 2".into()));
    }
    let p = smallest_prime_not_dividing(base);
    let mut rows = Vec::new();
    let mut k = 1u32;
    while let Some(m) = p.checked_pow(k).filter(|&m| m <= n) {
        rows.push(GrowthRow {
            k,
            inputs: m,
            function: format!("F_{m}"),
            not_representable_with: k,
            representable_with: ceil_log(2, m + 1),
        });
        k += 1;
    }
    Ok(rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObstructionVerdict {
    /// `Vol_d(P)` is not divisible by `p`, so `h_P` needs more than `k` hidden
    /// layers with integer weights.
    Obstructed,
    /// Divisible by `p`: inconclusive.
    NoObstruction,
    Inapplicable,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionCertificate {
    pub polytope: Value,
    pub d: usize,
    pub t: u32,
    pub p: u64,
    pub volume: Value,
    pub residue: u64,
    pub claimed_k: usize,
    pub verdict: ObstructionVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// For `dim P = p^t` and `k <= t`: if `Vol_{p^t}(P)` is not divisible by `p`,
/// then `h_P` is not computed by any integer-weight network with `k` hidden
/// layers.
pub fn volume_obstruction_check(p_poly: &LatticePolytope, k: usize, p: u64) -> Result<ObstructionCertificate> {
    let d = p_poly.dim();
    let mut cert = ObstructionCertificate {
        polytope: p_poly.to_json(),
        d,
        t: 0,
        p,
        volume: json!(null),
        residue: 0,
        claimed_k: k,
        verdict: ObstructionVerdict::Inapplicable,
        note: None,
    };
    if !is_prime(p) {
        cert.note = Some(format!("p={p} is not prime"));
        return Ok(cert);
    }
    let Some(t) = prime_power_exponent(d as u64, p) else {
        cert.note = Some(format!("dim(P)={d} is not a positive power of p={p}"));
        return Ok(cert);
    };
    cert.t = t;
    if k > t as usize {
        cert.note = Some(format!("k={k} exceeds t={t}"));
        return Ok(cert);
    }
    let vol = normalized_volume(p_poly, d)?;
    let residue = mod_reduce(&vol, p)?.value;
    cert.volume = integer_to_json(&vol);
    cert.residue = residue;
    cert.verdict = if residue != 0 {
        ObstructionVerdict::Obstructed
    } else {
        ObstructionVerdict::NoObstruction
    };
    Ok(cert)
}

/// Input to [`refute_network_claim`]: `λ` is inferred unless given.
#[derive(Clone, Debug)]
pub enum Lambda {
    Auto,
    Fixed(Integer),
}

/// Result of the refutation pipeline.
#[derive(Clone, Debug, Serialize)]
pub struct Refutation {
    pub certificate: Certificate,
    pub bound: DepthBoundReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionCertificate>,
}

impl Refutation {
    pub fn exit_code(&self) -> i32 {
        self.certificate.verdict.exit_code()
    }
}

/// Tests the claim that `net` computes `F_n`: clear denominators with
/// `M = N^t`, compile, and compare with `λ Δ_n` for `λ = M^{k+1}`. When the
/// network is too shallow for the bound, the obstruction on the face
/// `λ Δ_{p^k}` is attached.
pub fn refute_network_claim(net: &ReluNetwork, n: usize, lambda: Lambda) -> Result<Refutation> {
    if !net.is_homogeneous() {
        return Err(Error::Precondition("homogeneity required: every bias must be zero".into()));
    }
    if net.input_dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: net.input_dim(),
        });
    }
    let base = match net.ring() {
        Ring::Integers => 1u64,
        Ring::Nary(b) => b,
        Ring::Rationals => {
            return Err(Error::Precondition(
                "the network must declare an integer or N-ary weight ring".into(),
            ))
        }
    };
    let t = if base == 1 {
        0
    } else {
        net.weights()
            .map(|w| NaryFraction::from_rational(w, base).map(|f| f.exponent()))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0)
    };
    let k = net.hidden_layers();
    let m = Integer::from(base).pow(t);
    let cleared = net.clear_denominators(&m)?;
    let lambda = match lambda {
        Lambda::Auto => m.pow((k + 1) as u32),
        Lambda::Fixed(l) => l,
    };
    let bound = if base == 1 {
        lower_bound_integer(n as u64)?
    } else {
        lower_bound_nary(n as u64, base)?
    };
    let p = bound.p;
    let rep = represents_scaled_simplex(&cleared, &lambda)?;

    let obstruction = if (k as u32) < bound.k_lo && k >= 1 {
        // p^k <= n since k < ⌈log_p(n+1)⌉
        let d = p.pow(k as u32) as usize;
        let face = LatticePolytope::standard_simplex(d)?.dilate(&lambda)?;
        let face = embed(&face, n)?;
        Some(volume_obstruction_check(&face, k, p)?)
    } else {
        None
    };

    let inputs = json!({
        "network": net.to_json(),
        "n": n,
        "N": if base == 1 { Value::from("Z") } else { Value::from(base) },
    });
    let mut cert = Certificate::new(format!("the network computes F_{n} = max{{0, x_1, ..., x_{n}}}"), inputs)
        .value("k", json!(k))
        .value("t", json!(t))
        .value("M", integer_to_json(&m))
        .value("lambda", integer_to_json(&lambda))
        .value("k_lo", json!(bound.k_lo))
        .value("p", json!(p));
    if let Some(w) = &rep.witness {
        cert = cert.with_witness(w.clone());
    }
    let represents = rep.holds();
    cert = if !represents {
        cert.with_verdict(Verdict::Fails).with_note(format!(
            "refuted: the cleared network differs from {lambda}·F_{n} in the witness direction"
        ))
    } else if (k as u32) < bound.k_lo {
        cert.with_verdict(Verdict::Fails).with_note(format!(
            "refuted: {k} hidden layers contradict the bound k_lo={} (p={p})",
            bound.k_lo
        ))
    } else {
        cert.with_verdict(Verdict::Holds).with_note(format!(
            "represents F_{n}; depth {k} is consistent with the bound k_lo={} (p={p})",
            bound.k_lo
        ))
    };
    Ok(Refutation {
        certificate: cert,
        bound,
        obstruction,
    })
}

/// Pads the coordinates of `p` with zeros up to dimension `n`.
fn embed(p: &LatticePolytope, n: usize) -> Result<LatticePolytope> {
    if p.ambient_dim() == n {
        return Ok(p.clone());
    }
    let pts: Vec<Vec<Integer>> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.resize(n, Integer::zero());
            w
        })
        .collect();
    LatticePolytope::hull(&pts)
}

/// `Vol_d(λ Δ_d) = λ^d`, the value the proof of the lower bound reduces mod `p`.
pub fn scaled_simplex_volume(lambda: &Integer, d: usize) -> Integer {
    let mut v = Integer::one();
    for _ in 0..d {
        v *= lambda;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::relu::{max_network, Layer};

    #[test]
    fn bound_examples() {
        let r = lower_bound_nary(3, 10).unwrap();
        assert_eq!((r.p, r.k_lo), (3, 2));
        let r = lower_bound_nary(9, 10).unwrap();
        assert_eq!((r.p, r.k_lo), (3, 3));
        let r = lower_bound_nary(4, 6).unwrap();
        assert_eq!((r.p, r.k_lo, r.k_hi), (5, 1, 3));
        let r = lower_bound_integer(2).unwrap();
        assert_eq!((r.p, r.k_lo), (2, 2));
        assert!(lower_bound_nary(3, 1).is_err());
    }

    #[test]
    fn growth_examples() {
        let rows = gradual_growth_table(9, 10).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[0].function.as_str(), rows[0].not_representable_with, rows[0].representable_with), ("F_3", 1, 2));
        assert_eq!((rows[1].function.as_str(), rows[1].not_representable_with, rows[1].representable_with), ("F_9", 2, 4));
        assert_eq!(gradual_growth_table(3, 10).unwrap().len(), 1);
        assert!(gradual_growth_table(2, 10).unwrap().is_empty());
    }

    #[test]
    fn obstruction_examples() {
        let s2 = LatticePolytope::standard_simplex(2).unwrap();
        let c = volume_obstruction_check(&s2, 1, 2).unwrap();
        assert_eq!(c.verdict, ObstructionVerdict::Obstructed);
        assert_eq!((c.volume.clone(), c.residue), (json!(1), 1));
        let c = volume_obstruction_check(&s2.dilate(&int(2)).unwrap(), 1, 2).unwrap();
        assert_eq!(c.verdict, ObstructionVerdict::NoObstruction);
        assert_eq!(c.volume, json!(4));
        let lambda = int(10).pow(2u32);
        let s3 = LatticePolytope::standard_simplex(3).unwrap().dilate(&lambda).unwrap();
        let c = volume_obstruction_check(&s3, 1, 3).unwrap();
        assert_eq!(c.verdict, ObstructionVerdict::Obstructed);
        assert_eq!(c.volume, integer_to_json(&scaled_simplex_volume(&lambda, 3)));
        assert_eq!(volume_obstruction_check(&s2, 2, 2).unwrap().verdict, ObstructionVerdict::Inapplicable);
        assert_eq!(volume_obstruction_check(&s3, 1, 2).unwrap().verdict, ObstructionVerdict::Inapplicable);
    }

    #[test]
    fn refute_examples() {
        let r = refute_network_claim(&max_network(2).unwrap(), 2, Lambda::Auto).unwrap();
        assert_eq!(r.certificate.verdict, Verdict::Holds);
        assert_eq!(r.bound.k_lo, 2);
        assert!(r.obstruction.is_none());

        let impostor = ReluNetwork::new(
            Ring::Integers,
            vec![Layer::linear(&[vec![1, 0], vec![-1, 1]]), Layer::linear(&[vec![1, 1]])],
        )
        .unwrap();
        let r = refute_network_claim(&impostor, 2, Lambda::Auto).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert!(r.certificate.witness.is_some());
        assert_eq!(r.obstruction.unwrap().verdict, ObstructionVerdict::Obstructed);

        let biased = ReluNetwork::new(
            Ring::Integers,
            vec![Layer::new(vec![vec![rat(1, 1)]], vec![rat(1, 1)]), Layer::linear(&[vec![1]])],
        )
        .unwrap();
        let err = refute_network_claim(&biased, 1, Lambda::Auto).unwrap_err();
        assert!(err.to_string().contains("homogeneity required"));
    }

    #[test]
    fn refute_decimal_max_network() {
        // max network with every first-layer weight halved and the output
        // doubled: weights 5/10, the function is unchanged
        let base = max_network(2).unwrap();
        let mut layers = base.layers().to_vec();
        for row in layers[0].weights.iter_mut() {
            for w in row.iter_mut() {
                *w = &*w * rat(1, 2);
            }
        }
        let last = layers.len() - 1;
        for row in layers[last].weights.iter_mut() {
            for w in row.iter_mut() {
                *w = &*w * rat(2, 1);
            }
        }
        let net = ReluNetwork::new(Ring::Nary(10), layers).unwrap();
        let r = refute_network_claim(&net, 2, Lambda::Auto).unwrap();
        assert_eq!(r.certificate.witness_volumes["t"], 1);
        assert_eq!(r.certificate.witness_volumes["lambda"], 1000);
        assert_eq!(r.certificate.verdict, Verdict::Holds);
    }
}
