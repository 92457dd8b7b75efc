//! Exact ReLU networks `t_{k+1} ∘ σ ∘ t_k ∘ ... ∘ σ ∘ t_1` with rational
//! weights, and their compilation to pairs of sum-union expressions
//! `f = h_B - h_A`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{format_rational, integer_to_json, serde_rational, Integer, NaryFraction, Point, Rational};
use crate::certificate::{Certificate, Verdict};
use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;
use crate::su::SuExpr;

/// The ring the weights are declared to lie in. Biases are arbitrary rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    Integers,
    /// Fractions `z / N^t`.
    Nary(u64),
    Rationals,
}

impl Ring {
    pub fn contains(&self, w: &Rational) -> bool {
        match self {
            Ring::Integers => w.is_integer(),
            Ring::Nary(n) => NaryFraction::from_rational(w, *n).is_ok(),
            Ring::Rationals => true,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Ring::Integers => json!("Z"),
            Ring::Nary(n) => json!({ "nary": n }),
            Ring::Rationals => json!("Q"),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) if s == "Z" => Ok(Ring::Integers),
            Value::String(s) if s == "Q" => Ok(Ring::Rationals),
            Value::Object(o) => match o.get("nary").and_then(Value::as_u64) {
                Some(n) if n >= 2 => Ok(Ring::Nary(n)),
                _ => Err(bad_json("ring", "nary base must be an integer >= 2")),
            },
            _ => Err(bad_json("ring", "expected \"Z\", \"Q\" or {\"nary\": N}")),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Nary(n) => write!(f, "Z[1/{n}]"),
            Ring::Rationals => write!(f, "Q"),
        }
    }
}

fn bad_json(what: &str, reason: &str) -> Error {
    Error::Parse {
        text: what.into(),
        reason: reason.into(),
    }
}

/// One affine map `x -> A x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub weights: Vec<Vec<Rational>>,
    pub bias: Vec<Rational>,
}

impl Layer {
    pub fn new(weights: Vec<Vec<Rational>>, bias: Vec<Rational>) -> Self {
        Self { weights, bias }
    }

    /// A bias-free layer from integer weights.
    pub fn linear(weights: &[Vec<i64>]) -> Self {
        let weights: Vec<Vec<Rational>> = weights
            .iter()
            .map(|row| row.iter().map(|&w| Rational::from_integer(w.into())).collect())
            .collect();
        let bias = vec![Rational::zero(); weights.len()];
        Self { weights, bias }
    }

    pub fn outputs(&self) -> usize {
        self.weights.len()
    }

    pub fn inputs(&self) -> usize {
        self.weights.first().map_or(0, Vec::len)
    }

    fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(row, b)| row.iter().zip(x).map(|(w, v)| w * v).sum::<Rational>() + b)
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReluNetwork {
    ring: Ring,
    layers: Vec<Layer>,
    /// The network computes `2^s` times its nominal function. Only the max
    /// construction sets it, and it is always zero there.
    scale_log2: u32,
}

impl ReluNetwork {
    pub fn new(ring: Ring, layers: Vec<Layer>) -> Result<Self> {
        let first = layers
            .first()
            .ok_or_else(|| Error::Network("a network needs at least one affine map".into()))?;
        if first.inputs() == 0 {
            return Err(Error::Network("the input dimension must be positive".into()));
        }
        let mut width = first.inputs();
        for (i, layer) in layers.iter().enumerate() {
            if layer.outputs() == 0 {
                return Err(Error::Network(format!("layer {} has no neurons", i + 1)));
            }
            if layer.bias.len() != layer.outputs() {
                return Err(Error::Network(format!(
                    "layer {} has {} neurons but {} biases",
                    i + 1,
                    layer.outputs(),
                    layer.bias.len()
                )));
            }
            for row in &layer.weights {
                if row.len() != width {
                    return Err(Error::Network(format!(
                        "layer {} expects {} inputs but a row has {} entries",
                        i + 1,
                        width,
                        row.len()
                    )));
                }
                if let Some(w) = row.iter().find(|w| !ring.contains(w)) {
                    return Err(Error::Network(format!(
                        "weight {} of layer {} is not in {ring}",
                        format_rational(w),
                        i + 1
                    )));
                }
            }
            width = layer.outputs();
        }
        if width != 1 {
            return Err(Error::Network(format!("the output layer must have one neuron, found {width}")));
        }
        Ok(Self {
            ring,
            layers,
            scale_log2: 0,
        })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn hidden_layers(&self) -> usize {
        self.layers.len() - 1
    }

    pub fn widths(&self) -> Vec<usize> {
        self.layers.iter().map(Layer::outputs).collect()
    }

    pub fn scale_log2(&self) -> u32 {
        self.scale_log2
    }

    pub fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.layers.iter().flat_map(|l| l.weights.iter().flatten())
    }

    pub fn is_homogeneous(&self) -> bool {
        self.layers.iter().all(|l| l.bias.iter().all(Zero::is_zero))
    }

    pub fn has_integer_weights(&self) -> bool {
        self.weights().all(Rational::is_integer)
    }

    pub fn evaluate(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        let mut v = x.to_vec();
        let last = self.layers.len() - 1;
        for (i, layer) in self.layers.iter().enumerate() {
            v = layer.apply(&v);
            if i < last {
                for y in v.iter_mut() {
                    if y.is_negative() {
                        *y = Rational::zero();
                    }
                }
            }
        }
        Ok(v.pop().expect("one output"))
    }

    pub fn evaluate_int(&self, x: &[i64]) -> Result<Rational> {
        let x: Vec<Rational> = x.iter().map(|&v| Rational::from_integer(v.into())).collect();
        self.evaluate(&x)
    }

    /// With `M` a common denominator of the weights, an integer-weight network
    /// with the same depth computing `M^{k+1} f`.
    pub fn clear_denominators(&self, m: &Integer) -> Result<ReluNetwork> {
        if !m.is_positive() {
            return Err(Error::InvalidArgument("M must be positive".into()));
        }
        let mr = Rational::from_integer(m.clone());
        if let Some(w) = self.weights().find(|w| !(*w * &mr).is_integer()) {
            return Err(Error::InvalidArgument(format!(
                "M={m} is not a common denominator: {} * M is not an integer",
                format_rational(w)
            )));
        }
        let mut bias_scale = Rational::one();
        let layers = self
            .layers
            .iter()
            .map(|l| {
                bias_scale *= &mr;
                Layer {
                    weights: l.weights.iter().map(|row| row.iter().map(|w| w * &mr).collect()).collect(),
                    bias: l.bias.iter().map(|b| b * &bias_scale).collect(),
                }
            })
            .collect();
        ReluNetwork::new(Ring::Integers, layers)
    }

    pub fn to_json(&self) -> Value {
        let layers: Vec<Value> = self
            .layers
            .iter()
            .map(|l| {
                let a: Vec<Vec<String>> = l.weights.iter().map(|row| row.iter().map(format_rational).collect()).collect();
                let b: Vec<String> = l.bias.iter().map(format_rational).collect();
                json!({ "A": a, "b": b })
            })
            .collect();
        let mut out = json!({ "ring": self.ring.to_json(), "layers": layers });
        if self.scale_log2 > 0 {
            out["scale_log2"] = json!(self.scale_log2);
        }
        out
    }

    /// Reads the network format; a missing or empty `b` means zero biases.
    pub fn from_json(value: &Value) -> Result<Self> {
        let ring = Ring::from_json(value.get("ring").ok_or_else(|| bad_json("network", "missing \"ring\""))?)?;
        let raw_layers = value
            .get("layers")
            .and_then(Value::as_array)
            .ok_or_else(|| bad_json("network", "missing \"layers\" array"))?;
        let mut layers = Vec::with_capacity(raw_layers.len());
        for raw in raw_layers {
            let weights = raw
                .get("A")
                .and_then(Value::as_array)
                .ok_or_else(|| bad_json("layer", "missing \"A\" matrix"))?
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad_json("layer", "rows of A must be arrays"))?
                        .iter()
                        .map(serde_rational::from_json)
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let bias = match raw.get("b").and_then(Value::as_array) {
                Some(b) if !b.is_empty() => b.iter().map(serde_rational::from_json).collect::<Result<Vec<_>>>()?,
                _ => vec![Rational::zero(); weights.len()],
            };
            layers.push(Layer { weights, bias });
        }
        let mut net = ReluNetwork::new(ring, layers)?;
        if let Some(s) = value.get("scale_log2").and_then(Value::as_u64) {
            net.scale_log2 = s as u32;
        }
        Ok(net)
    }
}

/// Pairwise maxima over `values` taken in the given order: adjacent entries
/// are combined level by level, `0` is value `0` and `j` is `x_j`. Uses
/// `max(a, b) = σ(a) - σ(-a) + σ(b - a)` and `max(0, a) = σ(a)`; all weights are
/// `±1` and there are no biases.
pub fn pairwise_max_network(n: usize, order: &[usize]) -> Result<ReluNetwork> {
    if n == 0 {
        return Err(Error::InvalidArgument("max_network needs n >= 1".into()));
    }
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..=n).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!("order must be a permutation of 0..={n}")));
    }
    // each value is a linear form over the previous layer's outputs
    let mut values: Vec<Vec<i64>> = order
        .iter()
        .map(|&j| {
            let mut v = vec![0i64; n];
            if j > 0 {
                v[j - 1] = 1;
            }
            v
        })
        .collect();
    let mut layers = Vec::new();
    let mut width = n;
    while values.len() > 1 {
        let mut rows: Vec<Vec<i64>> = Vec::new();
        let mut next: Vec<Vec<(usize, i64)>> = Vec::new();
        let neuron = |rows: &mut Vec<Vec<i64>>, row: Vec<i64>| {
            rows.push(row);
            rows.len() - 1
        };
        let neg = |v: &[i64]| v.iter().map(|x| -x).collect::<Vec<_>>();
        for pair in values.chunks(2) {
            match pair {
                [a, b] => {
                    if a.iter().all(|&x| x == 0) {
                        next.push(vec![(neuron(&mut rows, b.clone()), 1)]);
                    } else if b.iter().all(|&x| x == 0) {
                        next.push(vec![(neuron(&mut rows, a.clone()), 1)]);
                    } else {
                        let pos = neuron(&mut rows, a.clone());
                        let negative = neuron(&mut rows, neg(a));
                        let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
                        let d = neuron(&mut rows, diff);
                        next.push(vec![(pos, 1), (negative, -1), (d, 1)]);
                    }
                }
                [a] => {
                    if a.iter().all(|&x| x == 0) {
                        next.push(Vec::new());
                    } else {
                        let pos = neuron(&mut rows, a.clone());
                        let negative = neuron(&mut rows, neg(a));
                        next.push(vec![(pos, 1), (negative, -1)]);
                    }
                }
                _ => unreachable!(),
            }
        }
        // a value that is identically zero still needs a slot in the next layer
        if rows.is_empty() {
            rows.push(vec![0; width]);
        }
        let w = rows.len();
        layers.push(Layer::linear(&rows));
        values = next
            .into_iter()
            .map(|terms| {
                let mut v = vec![0i64; w];
                for (i, c) in terms {
                    v[i] += c;
                }
                v
            })
            .collect();
        width = w;
    }
    layers.push(Layer::linear(&values));
    ReluNetwork::new(Ring::Integers, layers)
}

/// `max{0, x_1, ..., x_n}` with exactly `⌈log_2(n+1)⌉` hidden layers.
pub fn max_network(n: usize) -> Result<ReluNetwork> {
    let order: Vec<usize> = (0..=n).collect();
    pairwise_max_network(n, &order)
}

/// `f = h_B - h_A`.
#[derive(Clone, Debug)]
pub struct PolytopePair {
    pub a: SuExpr,
    pub b: SuExpr,
}

impl PolytopePair {
    pub fn depth(&self) -> usize {
        self.a.depth().max(self.b.depth())
    }

    pub fn value_at(&self, x: &[Rational]) -> Result<Rational> {
        Ok(self.b.support(x)? - self.a.support(x)?)
    }

    pub fn evaluate(&self) -> Result<(LatticePolytope, LatticePolytope)> {
        Ok((self.a.evaluate()?, self.b.evaluate()?))
    }

    pub fn to_json(&self) -> Value {
        json!({ "A": self.a.to_json(), "B": self.b.to_json() })
    }
}

fn require_compilable(net: &ReluNetwork) -> Result<()> {
    if !net.is_homogeneous() {
        return Err(Error::Precondition("homogeneity required: every bias must be zero".into()));
    }
    if !net.has_integer_weights() {
        return Err(Error::Precondition(
            "integer weights required: clear denominators first".into(),
        ));
    }
    Ok(())
}

/// `sum_i w_i (h_{B_i} - h_{A_i})` as a single pair: positive weights dilate
/// `B_i` into the new `B` side, negative ones swap sides.
fn combine(n: usize, row: &[Rational], inputs: &[PolytopePair]) -> Result<PolytopePair> {
    let mut a_side = Vec::new();
    let mut b_side = Vec::new();
    for (w, pair) in row.iter().zip(inputs) {
        let w = w.to_integer();
        if w.is_zero() {
            continue;
        }
        let (plus, minus) = if w.is_positive() { (&pair.b, &pair.a) } else { (&pair.a, &pair.b) };
        let scale = w.abs();
        b_side.push(plus.dilate(&scale)?);
        a_side.push(minus.dilate(&scale)?);
    }
    let side = |terms: Vec<SuExpr>| {
        if terms.is_empty() {
            Ok(SuExpr::origin(n))
        } else {
            SuExpr::sum_simplified(terms)
        }
    };
    Ok(PolytopePair {
        a: side(a_side)?,
        b: side(b_side)?,
    })
}

/// Compiles a homogeneous integer-weight network into `(A, B)` with
/// `net(x) = h_B(x) - h_A(x)` and both depths at most the number of hidden
/// layers. A first-layer neuron `a . x` becomes `(0, {a})`, and `σ` maps
/// `(A, B)` to `(A, conv(B ∪ A))`.
pub fn compile_to_polytopes(net: &ReluNetwork) -> Result<PolytopePair> {
    require_compilable(net)?;
    let n = net.input_dim();
    let layers = net.layers();
    let mut current: Vec<PolytopePair> = layers[0]
        .weights
        .iter()
        .map(|row| {
            let a: Point = row.iter().map(Rational::to_integer).collect();
            Ok(PolytopePair {
                a: SuExpr::origin(n),
                b: SuExpr::point(a)?,
            })
        })
        .collect::<Result<_>>()?;
    for layer in &layers[1..] {
        let activated: Vec<PolytopePair> = current
            .into_iter()
            .map(|p| {
                Ok(PolytopePair {
                    b: SuExpr::conv_union(p.b, p.a.clone())?,
                    a: p.a,
                })
            })
            .collect::<Result<_>>()?;
        current = layer
            .weights
            .iter()
            .map(|row| combine(n, row, &activated))
            .collect::<Result<_>>()?;
    }
    Ok(current.pop().expect("one output"))
}

/// A direction `u` with `h_L(u) != h_R(u)`, or `None` when `L = R`. The
/// lexicographically least vertex of either polytope lying outside the other is
/// separated from it by one of the other's constraints.
pub fn separating_direction(l: &LatticePolytope, r: &LatticePolytope) -> Option<Point> {
    if l == r {
        return None;
    }
    let hl = l.ambient_hrep();
    let hr = r.ambient_hrep();
    let candidate = l
        .vertices()
        .iter()
        .filter(|v| !hr.contains(v))
        .map(|v| (v, &hr))
        .chain(r.vertices().iter().filter(|v| !hl.contains(v)).map(|v| (v, &hl)))
        .min_by(|x, y| x.0.cmp(y.0));
    let (v, other) = candidate.expect("distinct polytopes differ at a vertex");
    let violated = other
        .inequalities
        .iter()
        .find(|h| crate::arith::dot(&h.normal, v) > h.offset)
        .map(|h| h.normal.clone());
    violated.or_else(|| {
        other.equations.iter().find_map(|h| {
            let val = crate::arith::dot(&h.normal, v);
            if val > h.offset {
                Some(h.normal.clone())
            } else if val < h.offset {
                Some(h.normal.iter().map(|x| -x).collect())
            } else {
                None
            }
        })
    })
}

fn witness_json(u: &Point, f: Rational, g: Rational) -> Value {
    json!({
        "u": u.iter().map(integer_to_json).collect::<Vec<_>>(),
        "first": format_rational(&f),
        "second": format_rational(&g),
    })
}

fn int_direction(u: &Point) -> Vec<Rational> {
    u.iter().cloned().map(Rational::from_integer).collect()
}

/// Decides `net1 = net2` as functions through `A + D = B + C`, where
/// `net1 = h_B - h_A` and `net2 = h_D - h_C`.
pub fn functions_equal(net1: &ReluNetwork, net2: &ReluNetwork) -> Result<Certificate> {
    if net1.input_dim() != net2.input_dim() {
        return Err(Error::DimensionMismatch {
            expected: net1.input_dim(),
            found: net2.input_dim(),
        });
    }
    let first = compile_to_polytopes(net1)?;
    let second = compile_to_polytopes(net2)?;
    let (a, b) = first.evaluate()?;
    let (c, d) = second.evaluate()?;
    let l = a.minkowski_sum(&d)?;
    let r = b.minkowski_sum(&c)?;
    let cert = Certificate::new(
        "the two networks compute the same function",
        json!({ "first": net1.to_json(), "second": net2.to_json() }),
    )
    .value("A_plus_D", l.to_json())
    .value("B_plus_C", r.to_json());
    Ok(match separating_direction(&l, &r) {
        None => cert.with_verdict(Verdict::Holds),
        Some(u) => {
            let x = int_direction(&u);
            let (f, g) = (net1.evaluate(&x)?, net2.evaluate(&x)?);
            debug_assert_ne!(f, g);
            cert.with_verdict(Verdict::Fails).with_witness(witness_json(&u, f, g))
        }
    })
}

/// Checks `λ Δ_n + A = B`, i.e. that the network computes `λ max{0, x_1, ..., x_n}`.
pub fn represents_scaled_simplex(net: &ReluNetwork, lambda: &Integer) -> Result<Certificate> {
    if !lambda.is_positive() {
        return Err(Error::InvalidArgument("λ must be positive".into()));
    }
    let n = net.input_dim();
    let pair = compile_to_polytopes(net)?;
    let (a, b) = pair.evaluate()?;
    let simplex = LatticePolytope::standard_simplex(n)?.dilate(lambda)?;
    let l = simplex.minkowski_sum(&a)?;
    let cert = Certificate::new(
        format!("the network computes {lambda} * max{{0, x_1, ..., x_{n}}}"),
        json!({ "network": net.to_json(), "lambda": integer_to_json(lambda) }),
    )
    .value("k", json!(pair.depth()))
    .value("lambda_simplex_plus_A", l.to_json())
    .value("B", b.to_json());
    Ok(match separating_direction(&l, &b) {
        None => cert.with_verdict(Verdict::Holds),
        Some(u) => {
            let x = int_direction(&u);
            let expected = simplex.support(&x)?;
            let got = net.evaluate(&x)?;
            cert.with_verdict(Verdict::Fails).with_witness(witness_json(&u, got, expected))
        }
    })
}

/// Shape of a random network for tests and examples.
#[derive(Clone, Debug, Serialize)]
pub struct RandomNet {
    pub inputs: usize,
    pub hidden: Vec<usize>,
    /// Weights are `z / denominator` with `|z| <= range * denominator`.
    pub range: i64,
    pub denominator: u64,
    pub biased: bool,
    pub seed: u64,
}

impl RandomNet {
    pub fn new(inputs: usize, hidden: Vec<usize>) -> Self {
        Self {
            inputs,
            hidden,
            range: 3,
            denominator: 1,
            biased: false,
            seed: 0,
        }
    }

    pub fn range(mut self, range: i64) -> Self {
        self.range = range;
        self
    }

    pub fn denominator(mut self, m: u64) -> Self {
        self.denominator = m;
        self
    }

    pub fn biased(mut self, biased: bool) -> Self {
        self.biased = biased;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn generate(&self) -> Result<ReluNetwork> {
        if self.denominator == 0 {
            return Err(Error::InvalidArgument("denominator must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let den = self.denominator as i64;
        let bound = self.range * den;
        let draw = |rng: &mut ChaCha8Rng| Rational::new(rng.gen_range(-bound..=bound).into(), den.into());
        let mut widths = self.hidden.clone();
        widths.push(1);
        let mut prev = self.inputs;
        let mut layers = Vec::new();
        for &w in &widths {
            let weights = (0..w).map(|_| (0..prev).map(|_| draw(&mut rng)).collect()).collect();
            let bias = (0..w)
                .map(|_| if self.biased { draw(&mut rng) } else { Rational::zero() })
                .collect();
            layers.push(Layer { weights, bias });
            prev = w;
        }
        let ring = if self.denominator == 1 { Ring::Integers } else { Ring::Rationals };
        ReluNetwork::new(ring, layers)
    }
}
