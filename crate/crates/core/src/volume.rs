//! Normalized volumes `Vol_d`, the Ehrhart counting oracle, mixed volumes and
//! the modular divisibility checks built on them.
//!
//! `Vol_d` is `d!` times the Lebesgue volume in the lattice chart of the
//! polytope's affine hull, so it is an integer and equals one on the standard
//! simplex. It is computed from a pulling triangulation: the lexicographically
//! least vertex is coned over every facet not containing it, recursively.

use std::collections::HashMap;
use std::rc::Rc;
use std::sync::OnceLock;

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::arith::{
    binomial, factorial, integer_to_json, is_prime, mod_reduce, prime_power_exponent, Integer, Rational,
};
use crate::bitset::BitSet;
use crate::certificate::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::lattice::{determinant, LatticeChart};
use crate::polytope::{subfaces, Geometry, LatticePolytope};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeMethod {
    Triangulation,
    CountingOracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VolumeReport {
    pub d: usize,
    #[serde(serialize_with = "ser_int")]
    pub value: Integer,
    pub method: VolumeMethod,
}

fn ser_int<S: serde::Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    integer_to_json(v).serialize(s)
}

type Simplices = Rc<Vec<Vec<usize>>>;

fn triangulate(g: &Geometry, face: &BitSet, dim: usize, memo: &mut HashMap<BitSet, Simplices>) -> Simplices {
    if let Some(hit) = memo.get(face) {
        return hit.clone();
    }
    let apex = face.first().expect("faces are non-empty");
    let result = if dim == 0 {
        vec![vec![apex]]
    } else {
        let mut out = Vec::new();
        for sub in subfaces(g, face) {
            if sub.contains(apex) {
                continue;
            }
            for simplex in triangulate(g, &sub, dim - 1, memo).iter() {
                let mut s = Vec::with_capacity(simplex.len() + 1);
                s.push(apex);
                s.extend_from_slice(simplex);
                out.push(s);
            }
        }
        out
    };
    let result = Rc::new(result);
    memo.insert(face.clone(), result.clone());
    result
}

/// Pulling triangulation of `P` as lists of vertex indices (into
/// `P.vertices()`), each list a full-dimensional simplex of `P`.
pub fn pulling_triangulation(p: &LatticePolytope) -> Vec<Vec<usize>> {
    let g = p.geometry();
    let dim = g.chart.dim();
    let mut memo = HashMap::new();
    let all = BitSet::full(p.num_vertices());
    triangulate(g, &all, dim, &mut memo).as_ref().clone()
}

/// Normalized volume of a simplex given by points of `Z^d`.
fn simplex_volume(points: &[&Vec<Integer>]) -> Integer {
    let origin = points[0];
    let rows: Vec<Vec<Integer>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(origin).map(|(a, b)| a - b).collect())
        .collect();
    determinant(&rows).abs()
}

fn full_volume(p: &LatticePolytope) -> Integer {
    let g = p.geometry();
    pulling_triangulation(p)
        .iter()
        .map(|s| {
            let pts: Vec<&Vec<Integer>> = s.iter().map(|&i| &g.local[i]).collect();
            simplex_volume(&pts)
        })
        .sum()
}

/// `Vol_d(P)`: zero unless `dim(P) = d`, one for a point with `d = 0`.
pub fn normalized_volume(p: &LatticePolytope, d: usize) -> Result<Integer> {
    if d > p.ambient_dim() {
        return Err(Error::InvalidArgument(format!(
            "volume dimension {d} exceeds the ambient dimension {}",
            p.ambient_dim()
        )));
    }
    if p.dim() != d {
        return Ok(Integer::zero());
    }
    if d == 0 {
        return Ok(Integer::one());
    }
    Ok(full_volume(p))
}

pub fn volume_report(p: &LatticePolytope, d: usize) -> Result<VolumeReport> {
    Ok(VolumeReport {
        d,
        value: normalized_volume(p, d)?,
        method: VolumeMethod::Triangulation,
    })
}

/// Monomial coefficients (constant first) of the polynomial through
/// `(t, values[t])` for `t = 0..values.len()`, from Newton forward differences.
pub fn interpolate_from_zero(values: &[Integer]) -> Vec<Rational> {
    let n = values.len();
    let mut diffs: Vec<Integer> = Vec::with_capacity(n);
    let mut row: Vec<Integer> = values.to_vec();
    for _ in 0..n {
        diffs.push(row[0].clone());
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    let mut coeffs = vec![Rational::zero(); n];
    // falling factorial t (t-1) ... (t-k+1), expanded incrementally
    let mut falling: Vec<Integer> = vec![Integer::one()];
    for (k, delta) in diffs.iter().enumerate() {
        let scale = Rational::new(delta.clone(), factorial(k));
        for (i, c) in falling.iter().enumerate() {
            coeffs[i] += &scale * Rational::from_integer(c.clone());
        }
        let shift = Integer::from(k);
        let mut next = vec![Integer::zero(); falling.len() + 1];
        for (i, c) in falling.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= c * &shift;
        }
        falling = next;
    }
    coeffs
}

/// `G(tP)` for `t = 0..=t_max` and the interpolated polynomial.
pub fn ehrhart_data(p: &LatticePolytope, t_max: u64) -> (Vec<Integer>, Vec<Rational>) {
    let counts: Vec<Integer> = (0..=t_max).map(|t| p.lattice_points_count_dilated(t)).collect();
    let poly = interpolate_from_zero(&counts);
    (counts, poly)
}

/// `Vol_d(P)` as `d!` times the leading coefficient of the Ehrhart polynomial,
/// fitted exactly from lattice-point counts of `tP`, `t = 0..=t_max`.
pub fn normalized_volume_counting_oracle(p: &LatticePolytope, d: usize, t_max: u64) -> Result<Integer> {
    if p.dim() != d {
        return Err(Error::InvalidArgument(format!(
            "counting oracle needs dim(P) = d, got dim {} and d = {d}",
            p.dim()
        )));
    }
    if t_max < d as u64 + 1 {
        return Err(Error::InvalidArgument(format!("t_max must be at least d + 1 = {}", d + 1)));
    }
    let (counts, poly) = ehrhart_data(p, t_max);
    if let Some((deg, _)) = poly.iter().enumerate().skip(d + 1).find(|(_, c)| !c.is_zero()) {
        return Err(Error::Interpolation(format!(
            "lattice-point counts {counts:?} fit a polynomial of degree {deg} > {d}"
        )));
    }
    if !poly[0].is_one() {
        return Err(Error::Interpolation("Ehrhart polynomial must have constant term 1".into()));
    }
    let vol = &poly[d] * Rational::from_integer(factorial(d));
    if !vol.is_integer() || vol.is_negative() {
        return Err(Error::Interpolation(format!("non-integral normalized volume {vol}")));
    }
    Ok(vol.to_integer())
}

static POLARIZATION_CHECKED: [OnceLock<()>; 17] = [const { OnceLock::new() }; 17];

/// Inclusion-exclusion over sub-multisets: with `k = c_1 + ... + c_r`,
/// `d! V = sum (-1)^(d-k) prod binom(m_j, c_j) Vol_d(c_1 Q_1 + ... + c_r Q_r)`.
/// The `d!` makes `V(Q, ..., Q) = Vol_d(Q)`.
struct Polarization<'a> {
    bases: &'a [LatticePolytope],
    d: usize,
    sums: HashMap<Vec<usize>, Integer>,
}

impl<'a> Polarization<'a> {
    fn new(bases: &'a [LatticePolytope], d: usize) -> Self {
        Self {
            bases,
            d,
            sums: HashMap::new(),
        }
    }

    fn sum_volume(&mut self, counts: &[usize]) -> Result<Integer> {
        if let Some(v) = self.sums.get(counts) {
            return Ok(v.clone());
        }
        let mut acc: Option<LatticePolytope> = None;
        for (q, &c) in self.bases.iter().zip(counts) {
            if c == 0 {
                continue;
            }
            let scaled = q.dilate(&Integer::from(c))?;
            acc = Some(match acc {
                None => scaled,
                Some(s) => s.minkowski_sum(&scaled)?,
            });
        }
        let vol = match acc {
            Some(s) => normalized_volume(&s, self.d)?,
            None => Integer::zero(),
        };
        self.sums.insert(counts.to_vec(), vol.clone());
        Ok(vol)
    }

    /// `d! V(Q_1^{m_1}, ..., Q_r^{m_r})`.
    fn scaled_mixed(&mut self, mults: &[usize]) -> Result<Integer> {
        let d = self.d;
        let mut counts = vec![0usize; mults.len()];
        let mut total = Integer::zero();
        loop {
            // next count vector in mixed radix
            let mut i = 0;
            while i < counts.len() && counts[i] == mults[i] {
                counts[i] = 0;
                i += 1;
            }
            if i == counts.len() {
                break;
            }
            counts[i] += 1;
            let k: usize = counts.iter().sum();
            let coef: Integer = mults.iter().zip(&counts).map(|(&m, &c)| binomial(m, c)).product();
            let vol = self.sum_volume(&counts)?;
            let term = coef * vol;
            if (d - k) % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        Ok(total)
    }

    fn mixed(&mut self, mults: &[usize]) -> Result<Integer> {
        let scaled = self.scaled_mixed(mults)?;
        let (q, r) = scaled.div_rem(&factorial(self.d));
        assert!(r.is_zero() && !q.is_negative(), "mixed volume of lattice polytopes is a non-negative integer");
        Ok(q)
    }
}

/// Checks once per dimension that the frozen `1/d!` normalization gives
/// `V(Δ_d, ..., Δ_d) = 1`.
fn ensure_polarization_constant(d: usize) -> Result<()> {
    if d >= POLARIZATION_CHECKED.len() {
        return Ok(());
    }
    let mut result = Ok(());
    POLARIZATION_CHECKED[d].get_or_init(|| {
        let simplex = match LatticePolytope::standard_simplex(d) {
            Ok(s) => s,
            Err(e) => {
                result = Err(e);
                return;
            }
        };
        let bases = [simplex];
        let scaled = Polarization::new(&bases, d).scaled_mixed(&[d]);
        match scaled {
            Ok(v) => assert_eq!(v, factorial(d), "polarization constant is wrong for d = {d}"),
            Err(e) => result = Err(e),
        }
    });
    result
}

/// The common chart of a tuple of polytopes after translating each to contain
/// the origin, together with the pulled-back polytopes. `None` when the
/// translated sum has dimension below `d`.
fn common_pullbacks(polys: &[LatticePolytope], d: usize) -> Result<Option<Vec<LatticePolytope>>> {
    let n = polys[0].ambient_dim();
    for p in polys {
        if p.ambient_dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.ambient_dim(),
            });
        }
    }
    if d > n {
        return Err(Error::NotCoChartable(format!("{d} polytopes in ambient dimension {n}")));
    }
    let translated: Vec<LatticePolytope> = polys
        .iter()
        .map(|p| {
            let shift: Vec<Integer> = p.vertices()[0].iter().map(|x| -x).collect();
            p.translate(&shift)
        })
        .collect();
    let mut sum = translated[0].clone();
    for q in &translated[1..] {
        sum = sum.minkowski_sum(q)?;
    }
    let dim = sum.dim();
    if dim > d {
        return Err(Error::NotCoChartable(format!(
            "the translated polytopes span a {dim}-dimensional subspace, more than {d}"
        )));
    }
    if dim < d {
        return Ok(None);
    }
    let origin = vec![Integer::zero(); n];
    let chart = LatticeChart::through(&origin, sum.vertices());
    let pulled = translated
        .iter()
        .map(|q| {
            let pts: Vec<Vec<Integer>> = q
                .vertices()
                .iter()
                .map(|v| chart.pull(v).expect("translated summands lie in the common subspace"))
                .collect();
            LatticePolytope::hull(&pts)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(pulled))
}

fn group_distinct(polys: Vec<LatticePolytope>) -> (Vec<LatticePolytope>, Vec<usize>) {
    let mut bases: Vec<LatticePolytope> = Vec::new();
    let mut mults: Vec<usize> = Vec::new();
    for p in polys {
        match bases.iter().position(|b| *b == p) {
            Some(i) => mults[i] += 1,
            None => {
                bases.push(p);
                mults.push(1);
            }
        }
    }
    (bases, mults)
}

/// `V(P_1, ..., P_d)` for `d` polytopes lying, up to translation, in a common
/// `d`-dimensional lattice subspace.
pub fn mixed_volume(polys: &[LatticePolytope]) -> Result<Integer> {
    let d = polys.len();
    if d == 0 {
        return Err(Error::InvalidArgument("mixed volume needs at least one polytope".into()));
    }
    ensure_polarization_constant(d)?;
    let Some(pulled) = common_pullbacks(polys, d)? else {
        return Ok(Integer::zero());
    };
    let (bases, mults) = group_distinct(pulled);
    Polarization::new(&bases, d).mixed(&mults)
}

#[derive(Clone, Debug, Serialize)]
pub struct BinomialTerm {
    /// Number of copies of `A` (the rest are copies of `B`).
    pub copies_of_a: usize,
    #[serde(serialize_with = "ser_int")]
    pub coefficient: Integer,
    #[serde(serialize_with = "ser_int")]
    pub mixed_volume: Integer,
    #[serde(serialize_with = "ser_int")]
    pub term: Integer,
}

#[derive(Clone, Debug, Serialize)]
pub struct BinomialExpansion {
    pub d: usize,
    /// Ordered from `i = d` (all copies of `A`) down to `i = 0`.
    pub terms: Vec<BinomialTerm>,
    #[serde(serialize_with = "ser_int")]
    pub sum: Integer,
    #[serde(serialize_with = "ser_int")]
    pub volume_of_sum: Integer,
    pub holds: bool,
}

/// Expands `Vol_d(A + B)` as `sum_i binom(d, i) V(A^i, B^(d-i))` and compares
/// with the directly computed volume.
pub fn binomial_expansion_check(a: &LatticePolytope, b: &LatticePolytope, d: usize) -> Result<BinomialExpansion> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    ensure_polarization_constant(d)?;
    let volume_of_sum = normalized_volume(&a.minkowski_sum(b)?, d)?;
    let pair = [a.clone(), b.clone()];
    let pulled = common_pullbacks(&pair, d)?;
    let mut terms = Vec::with_capacity(d + 1);
    match pulled {
        None => {
            for i in (0..=d).rev() {
                terms.push(BinomialTerm {
                    copies_of_a: i,
                    coefficient: binomial(d, i),
                    mixed_volume: Integer::zero(),
                    term: Integer::zero(),
                });
            }
        }
        Some(bases) => {
            let mut engine = Polarization::new(&bases, d);
            for i in (0..=d).rev() {
                let mv = engine.mixed(&[i, d - i])?;
                let coefficient = binomial(d, i);
                terms.push(BinomialTerm {
                    copies_of_a: i,
                    term: &coefficient * &mv,
                    coefficient,
                    mixed_volume: mv,
                });
            }
        }
    }
    let sum: Integer = terms.iter().map(|t| &t.term).sum();
    Ok(BinomialExpansion {
        d,
        holds: sum == volume_of_sum,
        terms,
        sum,
        volume_of_sum,
    })
}

fn polytopes_json(ps: &[LatticePolytope]) -> serde_json::Value {
    serde_json::Value::Array(ps.iter().map(LatticePolytope::to_json).collect())
}

/// `Vol_d(sum P_i) ≡ sum Vol_d(P_i) (mod p)` when `d` is a power of the prime `p`.
pub fn modular_additivity_check(parts: &[LatticePolytope], d: usize, p: u64) -> Result<Certificate> {
    let first = parts.first().ok_or(Error::EmptyInput)?;
    let cert = Certificate::new(
        format!("Vol_{d}(sum of parts) is congruent to the sum of Vol_{d}(part) modulo {p}"),
        json!({ "parts": polytopes_json(parts), "d": d, "p": p }),
    );
    if !is_prime(p) {
        return Ok(cert.with_note(format!("p={p} is not prime")));
    }
    let Some(t) = prime_power_exponent(d as u64, p) else {
        return Ok(cert.with_note(format!("d={d} is not a power of p={p}")));
    };
    if d > first.ambient_dim() {
        return Ok(cert.with_note(format!("d={d} exceeds the ambient dimension")));
    }
    let mut sum = first.clone();
    for q in &parts[1..] {
        sum = sum.minkowski_sum(q)?;
    }
    if sum.dim() > d {
        return Ok(cert.with_note(format!("the sum has dimension {} > d={d}", sum.dim())));
    }
    let vols = parts
        .iter()
        .map(|q| normalized_volume(q, d))
        .collect::<Result<Vec<_>>>()?;
    let vol_sum = normalized_volume(&sum, d)?;
    let lhs = mod_reduce(&vol_sum, p)?;
    let total: Integer = vols.iter().sum();
    let rhs = mod_reduce(&total, p)?;
    let mut cert = cert.volume("sum", &vol_sum);
    for (i, v) in vols.iter().enumerate() {
        cert = cert.volume(format!("part_{i}"), v);
    }
    Ok(cert
        .value("t", json!(t))
        .value("lhs_residue", json!(lhs.value))
        .value("rhs_residue", json!(rhs.value))
        .with_verdict(Verdict::from_bool(lhs == rhs)))
}

/// `Vol_{i+j+1}(conv(A ∪ B))` is divisible by `Vol_i(A) Vol_j(B)` when `A` and
/// `B` lie in skew affine subspaces.
pub fn join_divisibility_check(a: &LatticePolytope, b: &LatticePolytope) -> Result<Certificate> {
    let join = a.conv_union(b)?;
    let (i, j) = (a.dim(), b.dim());
    let cert = Certificate::new(
        format!("Vol_{}(conv(A ∪ B)) is divisible by Vol_{i}(A) * Vol_{j}(B)", i + j + 1),
        json!({ "A": a.to_json(), "B": b.to_json() }),
    );
    if join.dim() != i + j + 1 {
        return Ok(cert.with_note(format!(
            "not in skew position: dim conv(A ∪ B) = {} but dim A + dim B + 1 = {}",
            join.dim(),
            i + j + 1
        )));
    }
    let vj = normalized_volume(&join, i + j + 1)?;
    let va = normalized_volume(a, i)?;
    let vb = normalized_volume(b, j)?;
    let product = &va * &vb;
    let divides = vj.is_multiple_of(&product);
    Ok(cert
        .volume("join", &vj)
        .volume("A", &va)
        .volume("B", &vb)
        .with_verdict(Verdict::from_bool(divides)))
}

/// Volumes of all faces of dimension `s`, computed in parallel, in canonical
/// face order.
pub fn face_volumes(p: &LatticePolytope, s: usize) -> Result<Vec<(LatticePolytope, Integer)>> {
    p.faces_of_dim(s)
        .into_par_iter()
        .map(|f| {
            let v = normalized_volume(&f, s)?;
            Ok((f, v))
        })
        .collect()
}

/// If every `s`-face of `P` has `Vol_s ≡ 0 (mod m)`, then `Vol_d(P) ≡ 0 (mod m)`.
pub fn face_volume_propagation_check(p: &LatticePolytope, s: usize, d: usize, m: u64) -> Result<Certificate> {
    let cert = Certificate::new(
        format!("all {s}-faces have Vol_{s} ≡ 0 (mod {m}) implies Vol_{d}(P) ≡ 0 (mod {m})"),
        json!({ "P": p.to_json(), "s": s, "d": d, "m": m }),
    );
    if !(s < d && d <= p.ambient_dim()) || m < 2 {
        return Ok(cert.with_note("requires s < d <= n and m >= 2"));
    }
    if p.dim() > d {
        return Ok(cert.with_note(format!("dim(P) = {} exceeds d = {d}", p.dim())));
    }
    let faces = face_volumes(p, s)?;
    let face_values: Vec<serde_json::Value> = faces.iter().map(|(_, v)| integer_to_json(v)).collect();
    let cert = cert.value("faces", serde_json::Value::Array(face_values));
    let mut hypothesis = true;
    for (_, v) in &faces {
        if !mod_reduce(v, m)?.is_zero() {
            hypothesis = false;
        }
    }
    if !hypothesis {
        return Ok(cert.with_note("hypothesis not met: some face volume is not divisible by m"));
    }
    let vol = normalized_volume(p, d)?;
    let ok = mod_reduce(&vol, m)?.is_zero();
    Ok(cert.volume("P", &vol).with_verdict(Verdict::from_bool(ok)))
}

/// For `d = p^t`: if every `p^(t-1)`-face of `A` and of `B` has volume divisible
/// by `p`, then so does `Vol_d(conv(A ∪ B))`.
pub fn union_divisibility_check(a: &LatticePolytope, b: &LatticePolytope, p: u64, t: u32) -> Result<Certificate> {
    let d = p.pow(t) as usize;
    let cert = Certificate::new(
        format!("Vol_{d}(conv(A ∪ B)) ≡ 0 (mod {p}) from the {}-faces of A and B", d / p as usize),
        json!({ "A": a.to_json(), "B": b.to_json(), "p": p, "t": t }),
    );
    if !is_prime(p) || t == 0 {
        return Ok(cert.with_note("requires a prime p and t >= 1"));
    }
    let join = a.conv_union(b)?;
    if d > a.ambient_dim() || join.dim() > d {
        return Ok(cert.with_note(format!("needs conv(A ∪ B) of dimension at most d={d} <= n")));
    }
    let s = d / p as usize;
    let mut face_values = Vec::new();
    let mut hypothesis = true;
    for q in [a, b] {
        for (_, v) in face_volumes(q, s)? {
            hypothesis &= mod_reduce(&v, p)?.is_zero();
            face_values.push(integer_to_json(&v));
        }
    }
    let cert = cert.value("faces", serde_json::Value::Array(face_values));
    if !hypothesis {
        return Ok(cert.with_note("hypothesis not met: some face volume is not divisible by p"));
    }
    let vol = normalized_volume(&join, d)?;
    let ok = mod_reduce(&vol, p)?.is_zero();
    Ok(cert.volume("join", &vol).with_verdict(Verdict::from_bool(ok)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn poly(points: &[&[i64]]) -> LatticePolytope {
        LatticePolytope::from_i64(points).unwrap()
    }

    fn rectangle_and_triangle() -> (LatticePolytope, LatticePolytope) {
        (
            LatticePolytope::cuboid(&[(2, 5), (0, 1)]).unwrap(),
            poly(&[&[0, 2], &[1, 2], &[0, 3]]),
        )
    }

    #[test]
    fn volume_examples() {
        let (p1, p2) = rectangle_and_triangle();
        assert_eq!(normalized_volume(&p1, 2).unwrap(), int(6));
        assert_eq!(normalized_volume(&p2, 2).unwrap(), int(1));
        assert_eq!(normalized_volume(&p1.minkowski_sum(&p2).unwrap(), 2).unwrap(), int(15));
        for n in 1..=5 {
            let s = LatticePolytope::standard_simplex(n).unwrap();
            assert_eq!(normalized_volume(&s, n).unwrap(), int(1));
        }
        let rect = LatticePolytope::cuboid(&[(0, 3), (0, 1), (0, 0)]).unwrap();
        let pyramid = rect.conv_union(&poly(&[&[0, 0, 2]])).unwrap();
        assert_eq!(normalized_volume(&pyramid, 3).unwrap(), int(12));
        assert_eq!(normalized_volume(&poly(&[&[4, 4]]), 0).unwrap(), int(1));
        assert_eq!(normalized_volume(&p1, 1).unwrap(), int(0));
        assert!(normalized_volume(&p1, 3).is_err());
    }

    #[test]
    fn lower_dimensional_volumes_use_the_chart() {
        // the segment (0,0)-(2,2) has three lattice points, so Vol_1 = 2
        assert_eq!(normalized_volume(&poly(&[&[0, 0], &[2, 2]]), 1).unwrap(), int(2));
        // a 2x2 square lifted into the plane x + y + z = 0
        let tilted = poly(&[&[0, 0, 0], &[2, -2, 0], &[0, 2, -2], &[2, 0, -2]]);
        let flat = tilted.pullback().unwrap();
        assert_eq!(normalized_volume(&tilted, 2).unwrap(), normalized_volume(&flat, 2).unwrap());
    }

    #[test]
    fn counting_oracle_examples() {
        let s2 = LatticePolytope::standard_simplex(2).unwrap();
        let (counts, poly2) = ehrhart_data(&s2, 3);
        assert_eq!(counts, vec![int(1), int(3), int(6), int(10)]);
        assert_eq!(poly2[2], rat(1, 2));
        assert_eq!(normalized_volume_counting_oracle(&s2, 2, 3).unwrap(), int(1));
        let rect = LatticePolytope::cuboid(&[(2, 5), (0, 1)]).unwrap();
        assert_eq!(normalized_volume_counting_oracle(&rect, 2, 3).unwrap(), int(6));
        let seg = poly(&[&[0], &[3]]);
        assert_eq!(normalized_volume_counting_oracle(&seg, 1, 2).unwrap(), int(3));
        assert!(normalized_volume_counting_oracle(&seg, 1, 1).is_err());
        assert!(normalized_volume_counting_oracle(&seg, 2, 4).is_err());
    }

    #[test]
    fn interpolation_recovers_polynomials() {
        // (t+1)(3t+1) = 3t^2 + 4t + 1
        let vals: Vec<Integer> = (0..5).map(|t: i64| int((t + 1) * (3 * t + 1))).collect();
        let c = interpolate_from_zero(&vals);
        assert_eq!(c, vec![rat(1, 1), rat(4, 1), rat(3, 1), rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn mixed_volume_examples() {
        let (p1, p2) = rectangle_and_triangle();
        assert_eq!(mixed_volume(&[p1.clone(), p2.clone()]).unwrap(), int(4));
        assert_eq!(mixed_volume(&[p2.clone(), p1.clone()]).unwrap(), int(4));
        assert_eq!(mixed_volume(&[p1.clone(), p1.clone()]).unwrap(), int(6));
        // segments along independent axes: V = 1
        let e1 = poly(&[&[0, 0], &[1, 0]]);
        let e2 = poly(&[&[0, 0], &[0, 1]]);
        assert_eq!(mixed_volume(&[e1.clone(), e2]).unwrap(), int(1));
        assert_eq!(mixed_volume(&[e1.clone(), e1]).unwrap(), int(0));
        let cube = LatticePolytope::cuboid(&[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert!(matches!(mixed_volume(&[cube.clone(), cube]), Err(Error::NotCoChartable(_))));
    }

    #[test]
    fn binomial_examples() {
        let (p1, p2) = rectangle_and_triangle();
        let exp = binomial_expansion_check(&p1, &p2, 2).unwrap();
        let terms: Vec<Integer> = exp.terms.iter().map(|t| t.term.clone()).collect();
        assert_eq!(terms, vec![int(6), int(8), int(1)]);
        assert_eq!(exp.sum, int(15));
        assert!(exp.holds);
        let pt = poly(&[&[3, 3]]);
        let exp = binomial_expansion_check(&p1, &pt, 2).unwrap();
        let terms: Vec<Integer> = exp.terms.iter().map(|t| t.term.clone()).collect();
        assert_eq!(terms, vec![int(6), int(0), int(0)]);
    }

    #[test]
    fn modular_additivity_examples() {
        let (p1, p2) = rectangle_and_triangle();
        let c = modular_additivity_check(&[p1.clone(), p2.clone()], 2, 2).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.witness_volumes["sum"], 15);
        let c = modular_additivity_check(&[p1, p2], 2, 3).unwrap();
        assert_eq!(c.verdict, Verdict::Inapplicable);
        assert_eq!(c.note.as_deref(), Some("d=2 is not a power of p=3"));
        for m in 1..=5 {
            let copies: Vec<LatticePolytope> = (0..m)
                .map(|i| LatticePolytope::standard_simplex(2).unwrap().translate(&[int(i), int(-i)]))
                .collect();
            let c = modular_additivity_check(&copies, 2, 2).unwrap();
            assert_eq!(c.verdict, Verdict::Holds);
            assert_eq!(c.witness_volumes["sum"], m * m);
        }
    }

    #[test]
    fn join_examples() {
        let rect = LatticePolytope::cuboid(&[(0, 3), (0, 1), (0, 0)]).unwrap();
        let apex = poly(&[&[0, 0, 2]]);
        let c = join_divisibility_check(&rect, &apex).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.witness_volumes["join"], 12);
        assert_eq!(c.witness_volumes["A"], 6);
        let c = join_divisibility_check(&poly(&[&[0, 0]]), &poly(&[&[1, 1]])).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        let base = LatticePolytope::standard_simplex(2)
            .unwrap()
            .dilate(&int(2))
            .unwrap();
        let base3 = LatticePolytope::hull(
            &base.vertices().iter().map(|v| vec![v[0].clone(), v[1].clone(), int(0)]).collect::<Vec<_>>(),
        )
        .unwrap();
        let c = join_divisibility_check(&base3, &poly(&[&[1, 1, 3]])).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.witness_volumes["B"], 1);
        assert_eq!(c.witness_volumes["A"], 4);
        // coplanar: not skew
        let c = join_divisibility_check(&base3, &poly(&[&[5, 5, 0]])).unwrap();
        assert_eq!(c.verdict, Verdict::Inapplicable);
    }

    #[test]
    fn face_propagation_examples() {
        let cube2 = LatticePolytope::cuboid(&[(0, 2), (0, 2), (0, 2)]).unwrap();
        let c = face_volume_propagation_check(&cube2, 2, 3, 2).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.witness_volumes["P"], 48);
        assert_eq!(c.witness_volumes["faces"].as_array().unwrap().len(), 6);
        assert!(c.witness_volumes["faces"].as_array().unwrap().iter().all(|v| v == 8));
        let square = LatticePolytope::cuboid(&[(0, 1), (0, 1), (0, 0)]).unwrap();
        let c = face_volume_propagation_check(&square, 1, 2, 2).unwrap();
        assert_eq!(c.verdict, Verdict::Inapplicable);
        assert!(c.note.unwrap().contains("hypothesis not met"));
    }

    #[test]
    fn union_divisibility_example() {
        // parallel segments of lattice length 2 span a 2x2 square
        let a = poly(&[&[0, 0], &[2, 0]]);
        let b = poly(&[&[0, 2], &[2, 2]]);
        let c = union_divisibility_check(&a, &b, 2, 1).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.witness_volumes["join"], 8);
        let c = union_divisibility_check(&poly(&[&[0, 0], &[1, 0]]), &poly(&[&[0, 1]]), 2, 1).unwrap();
        assert_eq!(c.verdict, Verdict::Inapplicable);
    }

    #[test]
    fn triangulation_covers_the_cube() {
        let cube = LatticePolytope::cuboid(&[(0, 1), (0, 1), (0, 1)]).unwrap();
        let t = pulling_triangulation(&cube);
        assert!(t.iter().all(|s| s.len() == 4 && s[0] == 0));
        assert_eq!(normalized_volume(&cube, 3).unwrap(), int(6));
    }
}
