//! Sum-union expressions: trees of lattice points, Minkowski sums and convex
//! hulls of pairwise unions. A tree of depth `k` evaluates to a polytope in
//! `SU^k` of the lattice points.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{integer_direction, integer_from_json, integer_to_json, is_prime, mod_reduce, dot, Integer, Point, Rational};
use crate::certificate::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;
use crate::volume::normalized_volume;

#[derive(Debug)]
pub enum SuNode {
    Point(Point),
    Sum(Vec<SuExpr>),
    ConvUnion(SuExpr, SuExpr),
}

#[derive(Debug)]
struct Inner {
    node: SuNode,
    depth: usize,
    ambient: usize,
}

/// Immutable, cheaply cloneable expression; subtrees may be shared.
#[derive(Clone)]
pub struct SuExpr(Arc<Inner>);

impl SuExpr {
    pub fn point(p: Point) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidArgument("points need at least one coordinate".into()));
        }
        let ambient = p.len();
        Ok(Self(Arc::new(Inner {
            node: SuNode::Point(p),
            depth: 0,
            ambient,
        })))
    }

    pub fn origin(n: usize) -> Self {
        Self::point(vec![Integer::zero(); n]).expect("n >= 1")
    }

    pub fn sum(children: Vec<SuExpr>) -> Result<Self> {
        let first = children.first().ok_or(Error::EmptyInput)?;
        let ambient = first.ambient_dim();
        for c in &children {
            same_dim(ambient, c.ambient_dim())?;
        }
        let depth = children.iter().map(SuExpr::depth).max().unwrap_or(0);
        Ok(Self(Arc::new(Inner {
            node: SuNode::Sum(children),
            depth,
            ambient,
        })))
    }

    pub fn conv_union(a: SuExpr, b: SuExpr) -> Result<Self> {
        same_dim(a.ambient_dim(), b.ambient_dim())?;
        let ambient = a.ambient_dim();
        let depth = 1 + a.depth().max(b.depth());
        Ok(Self(Arc::new(Inner {
            node: SuNode::ConvUnion(a, b),
            depth,
            ambient,
        })))
    }

    /// A sum that collapses single children and folds all-point sums into a
    /// point; the evaluation is unchanged.
    pub fn sum_simplified(children: Vec<SuExpr>) -> Result<Self> {
        if children.len() == 1 {
            return Ok(children.into_iter().next().expect("one child"));
        }
        if !children.is_empty() && children.iter().all(|c| matches!(c.node(), SuNode::Point(_))) {
            let n = children[0].ambient_dim();
            let mut acc = vec![Integer::zero(); n];
            for c in &children {
                same_dim(n, c.ambient_dim())?;
                if let SuNode::Point(p) = c.node() {
                    for (a, x) in acc.iter_mut().zip(p) {
                        *a += x;
                    }
                }
            }
            return Self::point(acc);
        }
        Self::sum(children)
    }

    pub fn node(&self) -> &SuNode {
        &self.0.node
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.ambient
    }

    fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Number of distinct nodes.
    pub fn size(&self) -> usize {
        fn walk(e: &SuExpr, seen: &mut HashMap<usize, ()>) {
            if seen.insert(e.key(), ()).is_some() {
                return;
            }
            match e.node() {
                SuNode::Point(_) => {}
                SuNode::Sum(cs) => cs.iter().for_each(|c| walk(c, seen)),
                SuNode::ConvUnion(a, b) => {
                    walk(a, seen);
                    walk(b, seen);
                }
            }
        }
        let mut seen = HashMap::new();
        walk(self, &mut seen);
        seen.len()
    }

    pub fn evaluate(&self) -> Result<LatticePolytope> {
        let mut memo = HashMap::new();
        self.evaluate_memo(&mut memo)
    }

    fn evaluate_memo(&self, memo: &mut HashMap<usize, LatticePolytope>) -> Result<LatticePolytope> {
        if let Some(p) = memo.get(&self.key()) {
            return Ok(p.clone());
        }
        let result = match self.node() {
            SuNode::Point(p) => LatticePolytope::point(p.clone())?,
            SuNode::Sum(children) => {
                let mut acc = children[0].evaluate_memo(memo)?;
                for c in &children[1..] {
                    acc = acc.minkowski_sum(&c.evaluate_memo(memo)?)?;
                }
                acc
            }
            SuNode::ConvUnion(a, b) => a.evaluate_memo(memo)?.conv_union(&b.evaluate_memo(memo)?)?,
        };
        memo.insert(self.key(), result.clone());
        Ok(result)
    }

    /// `h(u)` of the evaluated polytope, computed on the tree.
    pub fn support_int(&self, u: &[Integer]) -> Integer {
        let mut memo = HashMap::new();
        self.support_memo(u, &mut memo)
    }

    pub fn support(&self, u: &[Rational]) -> Result<Rational> {
        same_dim(self.ambient_dim(), u.len())?;
        let dir = integer_direction(u);
        let scale = crate::arith::common_denominator(u.iter());
        Ok(Rational::new(self.support_int(&dir), scale))
    }

    fn support_memo(&self, u: &[Integer], memo: &mut HashMap<usize, Integer>) -> Integer {
        if let Some(v) = memo.get(&self.key()) {
            return v.clone();
        }
        let v = match self.node() {
            SuNode::Point(p) => dot(p, u),
            SuNode::Sum(cs) => cs.iter().map(|c| c.support_memo(u, memo)).sum(),
            SuNode::ConvUnion(a, b) => a.support_memo(u, memo).max(b.support_memo(u, memo)),
        };
        memo.insert(self.key(), v.clone());
        v
    }

    /// `lambda * expr` for an integer `lambda >= 0`, applied to the leaves so the
    /// depth is unchanged.
    pub fn dilate(&self, lambda: &Integer) -> Result<Self> {
        if lambda < &Integer::zero() {
            return Err(Error::InvalidArgument("dilation factor must be non-negative".into()));
        }
        let mut memo = HashMap::new();
        Ok(self.map_leaves(&|p: &Point| p.iter().map(|x| x * lambda).collect(), &mut memo))
    }

    /// Reflects every leaf through `x_j -> -x_j`.
    pub fn mirror(&self, j: usize) -> Self {
        let mut memo = HashMap::new();
        self.map_leaves(
            &|p: &Point| {
                let mut q = p.clone();
                q[j] = -&q[j];
                q
            },
            &mut memo,
        )
    }

    fn map_leaves(&self, f: &dyn Fn(&Point) -> Point, memo: &mut HashMap<usize, SuExpr>) -> SuExpr {
        if let Some(e) = memo.get(&self.key()) {
            return e.clone();
        }
        let out = match self.node() {
            SuNode::Point(p) => SuExpr::point(f(p)).expect("same dimension"),
            SuNode::Sum(cs) => SuExpr::sum(cs.iter().map(|c| c.map_leaves(f, memo)).collect()).expect("non-empty"),
            SuNode::ConvUnion(a, b) => {
                SuExpr::conv_union(a.map_leaves(f, memo), b.map_leaves(f, memo)).expect("same dimension")
            }
        };
        memo.insert(self.key(), out.clone());
        out
    }

    /// An expression of no greater depth evaluating to the face maximizing `u`.
    pub fn face_expr(&self, u: &[Rational]) -> Result<SuExpr> {
        same_dim(self.ambient_dim(), u.len())?;
        let dir = integer_direction(u);
        let mut support = HashMap::new();
        let mut memo = HashMap::new();
        Ok(self.face_memo(&dir, &mut support, &mut memo))
    }

    fn face_memo(&self, u: &[Integer], support: &mut HashMap<usize, Integer>, memo: &mut HashMap<usize, SuExpr>) -> SuExpr {
        if let Some(e) = memo.get(&self.key()) {
            return e.clone();
        }
        let out = match self.node() {
            SuNode::Point(_) => self.clone(),
            SuNode::Sum(cs) => {
                SuExpr::sum(cs.iter().map(|c| c.face_memo(u, support, memo)).collect()).expect("non-empty")
            }
            SuNode::ConvUnion(a, b) => {
                let ha = a.support_memo(u, support);
                let hb = b.support_memo(u, support);
                match ha.cmp(&hb) {
                    std::cmp::Ordering::Greater => a.face_memo(u, support, memo),
                    std::cmp::Ordering::Less => b.face_memo(u, support, memo),
                    std::cmp::Ordering::Equal => {
                        SuExpr::conv_union(a.face_memo(u, support, memo), b.face_memo(u, support, memo))
                            .expect("same dimension")
                    }
                }
            }
        };
        memo.insert(self.key(), out.clone());
        out
    }

    pub fn to_json(&self) -> Value {
        match self.node() {
            SuNode::Point(p) => json!({ "point": p.iter().map(integer_to_json).collect::<Vec<_>>() }),
            SuNode::Sum(cs) => json!({ "sum": cs.iter().map(SuExpr::to_json).collect::<Vec<_>>() }),
            SuNode::ConvUnion(a, b) => json!({ "convunion": [a.to_json(), b.to_json()] }),
        }
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        let bad = |reason: &str| Error::Parse {
            text: truncate(value.to_string()),
            reason: reason.into(),
        };
        let obj = value.as_object().filter(|o| o.len() == 1).ok_or_else(|| bad("expected a single-key node"))?;
        let (tag, body) = obj.iter().next().expect("one entry");
        match tag.as_str() {
            "point" => {
                let coords = body.as_array().ok_or_else(|| bad("point must be an array"))?;
                let p = coords.iter().map(integer_from_json).collect::<Result<Point>>()?;
                SuExpr::point(p)
            }
            "sum" => {
                let cs = body.as_array().ok_or_else(|| bad("sum must be an array"))?;
                SuExpr::sum(cs.iter().map(SuExpr::from_json).collect::<Result<Vec<_>>>()?)
            }
            "convunion" => match body.as_array().map(Vec::as_slice) {
                Some([a, b]) => SuExpr::conv_union(SuExpr::from_json(a)?, SuExpr::from_json(b)?),
                _ => Err(bad("convunion takes exactly two children")),
            },
            _ => Err(bad("unknown node kind")),
        }
    }
}

fn truncate(mut s: String) -> String {
    if s.len() > 80 {
        let cut = (0..=80).rev().find(|&i| s.is_char_boundary(i)).unwrap_or(0);
        s.truncate(cut);
        s.push_str("...");
    }
    s
}

impl PartialEq for SuExpr {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (self.node(), other.node()) {
            (SuNode::Point(a), SuNode::Point(b)) => a == b,
            (SuNode::Sum(a), SuNode::Sum(b)) => a == b,
            (SuNode::ConvUnion(a1, b1), SuNode::ConvUnion(a2, b2)) => a1 == a2 && b1 == b2,
            _ => false,
        }
    }
}

impl Eq for SuExpr {}

impl fmt::Debug for SuExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            SuNode::Point(p) => {
                let coords: Vec<String> = p.iter().map(ToString::to_string).collect();
                write!(f, "({})", coords.join(","))
            }
            SuNode::Sum(cs) => {
                write!(f, "[")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{c:?}")?;
                }
                write!(f, "]")
            }
            SuNode::ConvUnion(a, b) => write!(f, "conv({a:?} ∪ {b:?})"),
        }
    }
}

fn same_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Parameters for [`random_su`].
#[derive(Clone, Debug)]
pub struct RandomSu {
    pub depth: usize,
    pub dim: usize,
    /// Largest number of summands in each sum node.
    pub budget: usize,
    pub range: (i64, i64),
    pub seed: u64,
}

impl RandomSu {
    pub fn new(depth: usize, dim: usize) -> Self {
        Self {
            depth,
            dim,
            budget: 2,
            range: (-2, 2),
            seed: 0,
        }
    }

    pub fn budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn range(mut self, lo: i64, hi: i64) -> Self {
        self.range = (lo, hi);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn generate(&self) -> Result<SuExpr> {
        if self.dim == 0 || self.budget == 0 || self.range.0 > self.range.1 {
            return Err(Error::InvalidArgument(
                "random_su needs n >= 1, a positive budget and a non-empty range".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        Ok(self.build(self.depth, &mut rng))
    }

    fn random_point(&self, rng: &mut ChaCha8Rng) -> SuExpr {
        let p = (0..self.dim)
            .map(|_| Integer::from(rng.gen_range(self.range.0..=self.range.1)))
            .collect();
        SuExpr::point(p).expect("dim >= 1")
    }

    /// Depth exactly `k`: a sum of conv-unions, each with at least one child of
    /// depth `k - 1`. About a quarter of the conv-unions pair a subtree with its
    /// mirror image, which creates ties in the face recursion.
    fn build(&self, k: usize, rng: &mut ChaCha8Rng) -> SuExpr {
        if k == 0 {
            return self.random_point(rng);
        }
        let m = rng.gen_range(1..=self.budget);
        let terms = (0..m)
            .map(|_| {
                let left = self.build(k - 1, rng);
                let right = if rng.gen_ratio(1, 4) {
                    left.mirror(rng.gen_range(0..self.dim))
                } else {
                    let depth = if k >= 2 && rng.gen_bool(0.5) { rng.gen_range(0..k - 1) } else { k - 1 };
                    self.build(depth, rng)
                };
                if rng.gen_bool(0.5) {
                    SuExpr::conv_union(left, right)
                } else {
                    SuExpr::conv_union(right, left)
                }
                .expect("same dimension")
            })
            .collect();
        SuExpr::sum_simplified(terms).expect("non-empty")
    }
}

/// Deterministic random expression of depth exactly `k` in `Z^n`.
pub fn random_su(k: usize, n: usize, budget: usize, range: (i64, i64), seed: u64) -> Result<SuExpr> {
    RandomSu {
        depth: k,
        dim: n,
        budget,
        range,
        seed,
    }
    .generate()
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceRecord {
    pub id: usize,
    pub dim: usize,
    pub vertices: Value,
    pub volume: Value,
    pub residue: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub p: u64,
    pub k: usize,
    pub faces: Vec<FaceRecord>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// For an expression of depth `k >= 1`, reports `Vol_{p^k}(F) mod p` for every
/// `p^k`-dimensional face `F` of its evaluation. Every residue must vanish.
pub fn p_invariant_check(expr: &SuExpr, p: u64) -> Result<InvariantReport> {
    let k = expr.depth();
    let mut report = InvariantReport {
        p,
        k,
        faces: Vec::new(),
        verdict: Verdict::Inapplicable,
        note: None,
    };
    if !is_prime(p) {
        report.note = Some(format!("p={p} is not prime"));
        return Ok(report);
    }
    if k == 0 {
        report.note = Some("expression has depth 0".into());
        return Ok(report);
    }
    let d = u32::try_from(k)
        .ok()
        .and_then(|k| p.checked_pow(k))
        .filter(|&d| d <= expr.ambient_dim() as u64);
    let Some(d) = d else {
        report.note = Some(format!("p^k = {p}^{k} exceeds the ambient dimension {}", expr.ambient_dim()));
        return Ok(report);
    };
    let d = d as usize;
    let polytope = expr.evaluate()?;
    let faces = polytope.faces_of_dim(d);
    let records = faces
        .par_iter()
        .enumerate()
        .map(|(id, f)| {
            let vol = normalized_volume(f, d)?;
            Ok(FaceRecord {
                id,
                dim: d,
                vertices: f.to_json()["vertices"].clone(),
                volume: integer_to_json(&vol),
                residue: mod_reduce(&vol, p)?.value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    report.verdict = Verdict::from_bool(records.iter().all(|r| r.residue == 0));
    if records.is_empty() {
        report.note = Some(format!("the polytope has no {d}-dimensional faces"));
    }
    report.faces = records;
    Ok(report)
}

/// Checks `P + A = B`, which certifies that `h_P = h_B - h_A` is computed at
/// depth `max(depth A, depth B)`.
pub fn membership_as_sum_certificate(p: &LatticePolytope, a: &SuExpr, b: &SuExpr) -> Result<Certificate> {
    same_dim(p.ambient_dim(), a.ambient_dim())?;
    same_dim(p.ambient_dim(), b.ambient_dim())?;
    let lhs = p.minkowski_sum(&a.evaluate()?)?;
    let rhs = b.evaluate()?;
    let k = a.depth().max(b.depth());
    Ok(Certificate::new(
        "P + A = B",
        json!({ "P": p.to_json(), "A": a.to_json(), "B": b.to_json() }),
    )
    .value("k", json!(k))
    .value("P_plus_A", lhs.to_json())
    .value("B", rhs.to_json())
    .with_verdict(Verdict::from_bool(lhs == rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{point, rat};

    fn pt(c: &[i64]) -> SuExpr {
        SuExpr::point(point(c)).unwrap()
    }

    fn segment(a: &[i64], b: &[i64]) -> SuExpr {
        SuExpr::conv_union(pt(a), pt(b)).unwrap()
    }

    fn unit_square() -> SuExpr {
        SuExpr::sum(vec![segment(&[0, 0], &[1, 0]), segment(&[0, 0], &[0, 1])]).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let sq = unit_square();
        assert_eq!(sq.depth(), 1);
        assert_eq!(sq.evaluate().unwrap(), LatticePolytope::cuboid(&[(0, 1), (0, 1)]).unwrap());
        assert_eq!(pt(&[3, -1]).evaluate().unwrap(), LatticePolytope::from_i64(&[&[3, -1]]).unwrap());

        let rect = SuExpr::sum(vec![
            segment(&[0, 0, 0], &[3, 0, 0]),
            segment(&[0, 0, 0], &[0, 1, 0]),
        ])
        .unwrap();
        let pyramid = SuExpr::conv_union(rect, pt(&[0, 0, 2])).unwrap();
        assert_eq!(pyramid.depth(), 2);
        let p = pyramid.evaluate().unwrap();
        assert_eq!(normalized_volume(&p, 3).unwrap(), Integer::from(12));
        assert!(SuExpr::conv_union(pt(&[0]), pt(&[0, 0])).is_err());
    }

    #[test]
    fn face_examples() {
        let sq = unit_square();
        let right = sq.face_expr(&[rat(1, 1), rat(0, 1)]).unwrap();
        assert_eq!(right.evaluate().unwrap(), LatticePolytope::from_i64(&[&[1, 0], &[1, 1]]).unwrap());
        let whole = sq.face_expr(&[rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(whole.evaluate().unwrap(), sq.evaluate().unwrap());
        // tie: both children have support 1 in direction (0, 1)
        let tie = segment(&[0, 1], &[1, 1]);
        let f = tie.face_expr(&[rat(0, 1), rat(1, 1)]).unwrap();
        assert!(matches!(f.node(), SuNode::ConvUnion(..)));
        assert_eq!(f.evaluate().unwrap(), tie.evaluate().unwrap());
    }

    #[test]
    fn random_generation_is_deterministic() {
        let a = random_su(1, 3, 4, (-3, 3), 7).unwrap();
        let b = random_su(1, 3, 4, (-3, 3), 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.depth(), 1);
        a.evaluate().unwrap();
        let z = random_su(0, 2, 3, (-3, 3), 1).unwrap();
        assert!(matches!(z.node(), SuNode::Point(_)));
        for seed in 0..20 {
            assert_eq!(random_su(3, 2, 2, (-1, 1), seed).unwrap().depth(), 3);
        }
    }

    #[test]
    fn json_round_trip() {
        let e = random_su(2, 3, 2, (-2, 2), 11).unwrap();
        let back = SuExpr::from_json(&e.to_json()).unwrap();
        assert_eq!(back, e);
        assert!(SuExpr::from_json(&json!({ "convunion": [{ "point": [1] }] })).is_err());
        assert!(SuExpr::from_json(&json!({ "sum": [] })).is_err());
    }

    #[test]
    fn invariant_examples() {
        let r = p_invariant_check(&unit_square(), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert_eq!(r.faces.len(), 1);
        assert_eq!(r.faces[0].volume, 2);
        let r = p_invariant_check(&segment(&[0], &[1]), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Inapplicable);
        for seed in 0..5 {
            let e = random_su(1, 3, 3, (-2, 2), seed).unwrap();
            assert_eq!(p_invariant_check(&e, 2).unwrap().verdict, Verdict::Holds);
        }
    }

    #[test]
    fn membership_examples() {
        let simplex = LatticePolytope::standard_simplex(1).unwrap();
        let a = pt(&[0]);
        let b = segment(&[0], &[1]);
        let c = membership_as_sum_certificate(&simplex, &a, &b).unwrap();
        assert_eq!(c.verdict, Verdict::Holds);
        assert_eq!(c.witness_volumes["k"], 1);
        let wrong = segment(&[0], &[2]);
        let c = membership_as_sum_certificate(&simplex, &a, &wrong).unwrap();
        assert_eq!(c.verdict, Verdict::Fails);
    }

    #[test]
    fn dilation_and_support() {
        let sq = unit_square();
        let two = sq.dilate(&Integer::from(2)).unwrap();
        assert_eq!(two.depth(), 1);
        assert_eq!(two.evaluate().unwrap(), sq.evaluate().unwrap().dilate_by(2).unwrap());
        let u = [rat(1, 2), rat(-3, 1)];
        assert_eq!(two.support(&u).unwrap(), two.evaluate().unwrap().support(&u).unwrap());
    }
}
