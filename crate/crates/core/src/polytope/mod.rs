//! Lattice polytopes in vertex representation.
//!
//! A [`LatticePolytope`] stores its vertices sorted lexicographically, so two
//! polytopes are equal exactly when their vertex lists are. The facet structure
//! (an exact H-representation in the polytope's own lattice chart) is computed
//! on first use and cached.

mod count;
pub(crate) mod dd;

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{
    common_denominator, dot, integer_direction, integer_from_json, integer_to_json, Integer, Point, Rational,
};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::lattice::LatticeChart;

pub use count::Constraint;

static MAX_AMBIENT_DIM: AtomicUsize = AtomicUsize::new(8);

/// Current guard on the ambient dimension (default 8).
pub fn max_ambient_dim() -> usize {
    MAX_AMBIENT_DIM.load(Ordering::Relaxed)
}

pub fn set_max_ambient_dim(limit: usize) {
    MAX_AMBIENT_DIM.store(limit.max(1), Ordering::Relaxed);
}

/// A facet `normal . z <= offset` in chart coordinates, with the indices of the
/// vertices lying on it.
#[derive(Clone, Debug)]
pub struct Facet {
    pub normal: Vec<Integer>,
    pub offset: Integer,
    pub vertices: BitSet,
}

#[derive(Debug)]
pub(crate) struct Geometry {
    pub chart: LatticeChart,
    /// Vertices pulled back to `Z^d`.
    pub local: Vec<Vec<Integer>>,
    pub facets: Vec<Facet>,
}

/// `normal . x <= offset` (or `=` for equations) in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Point,
    pub offset: Integer,
}

/// Ambient H-representation: the affine hull as equations plus facet
/// inequalities.
#[derive(Clone, Debug)]
pub struct AmbientHRep {
    pub equations: Vec<HalfSpace>,
    pub inequalities: Vec<HalfSpace>,
}

impl AmbientHRep {
    pub fn contains(&self, x: &[Integer]) -> bool {
        self.equations.iter().all(|h| dot(&h.normal, x) == h.offset)
            && self.inequalities.iter().all(|h| dot(&h.normal, x) <= h.offset)
    }

    /// All constraint normals, each equation contributing both signs.
    pub fn directions(&self) -> Vec<Point> {
        let mut out: Vec<Point> = self.inequalities.iter().map(|h| h.normal.clone()).collect();
        for h in &self.equations {
            out.push(h.normal.clone());
            out.push(h.normal.iter().map(|x| -x).collect());
        }
        out
    }
}

#[derive(Clone)]
pub struct LatticePolytope {
    ambient: usize,
    vertices: Vec<Point>,
    geometry: OnceLock<Arc<Geometry>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl Hash for LatticePolytope {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ambient.hash(state);
        self.vertices.hash(state);
    }
}

impl PartialOrd for LatticePolytope {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LatticePolytope {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ambient, &self.vertices).cmp(&(other.ambient, &other.vertices))
    }
}

impl fmt::Debug for LatticePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "conv{{")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

fn check_dim(n: usize) -> Result<()> {
    let limit = max_ambient_dim();
    if n > limit {
        return Err(Error::DimensionTooLarge { dim: n, limit });
    }
    if n == 0 {
        return Err(Error::InvalidArgument("ambient dimension must be positive".into()));
    }
    Ok(())
}

fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

impl LatticePolytope {
    /// Convex hull of a non-empty list of integer points.
    pub fn hull(points: &[Point]) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyInput)?;
        let n = first.len();
        check_dim(n)?;
        for p in points {
            check_same(n, p.len())?;
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        Ok(Self::hull_sorted(n, pts))
    }

    /// Convenience constructor from small coordinates.
    pub fn from_i64(points: &[&[i64]]) -> Result<Self> {
        let pts: Vec<Point> = points.iter().map(|p| crate::arith::point(p)).collect();
        Self::hull(&pts)
    }

    fn hull_sorted(n: usize, pts: Vec<Point>) -> Self {
        let (vertices, geometry) = compute_geometry(pts);
        let cell = OnceLock::new();
        let _ = cell.set(Arc::new(geometry));
        Self {
            ambient: n,
            vertices,
            geometry: cell,
        }
    }

    /// Wraps a list already known to be sorted vertices in convex position.
    pub(crate) fn from_sorted_vertices(ambient: usize, vertices: Vec<Point>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Self {
            ambient,
            vertices,
            geometry: OnceLock::new(),
        }
    }

    pub fn point(p: Point) -> Result<Self> {
        check_dim(p.len())?;
        Ok(Self::from_sorted_vertices(p.len(), vec![p]))
    }

    pub fn origin(n: usize) -> Result<Self> {
        Self::point(vec![Integer::zero(); n])
    }

    /// `conv(0, e_1, ..., e_n)`.
    pub fn standard_simplex(n: usize) -> Result<Self> {
        check_dim(n)?;
        let mut vertices = vec![vec![Integer::zero(); n]];
        for i in 0..n {
            let mut e = vec![Integer::zero(); n];
            e[i] = Integer::one();
            vertices.push(e);
        }
        vertices.sort();
        Ok(Self::from_sorted_vertices(n, vertices))
    }

    /// Axis-parallel box `[lo_1, hi_1] x ... x [lo_n, hi_n]`.
    pub fn cuboid(bounds: &[(i64, i64)]) -> Result<Self> {
        let n = bounds.len();
        check_dim(n)?;
        let mut pts: Vec<Point> = vec![Vec::new()];
        for &(lo, hi) in bounds {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    [lo, hi].into_iter().map(move |c| {
                        let mut q = p.clone();
                        q.push(Integer::from(c));
                        q
                    })
                })
                .collect();
        }
        Self::hull(&pts)
    }

    /// Hull of `count` points drawn uniformly from `[lo, hi]^n`.
    pub fn random<R: Rng + ?Sized>(n: usize, count: usize, range: (i64, i64), rng: &mut R) -> Result<Self> {
        if count == 0 || range.0 > range.1 {
            return Err(Error::InvalidArgument("need at least one point and a non-empty range".into()));
        }
        let pts: Vec<Point> = (0..count)
            .map(|_| (0..n).map(|_| Integer::from(rng.gen_range(range.0..=range.1))).collect())
            .collect();
        Self::hull(&pts)
    }

    /// Like [`LatticePolytope::random`], redrawing until the hull has
    /// dimension `d`.
    pub fn random_of_dim<R: Rng + ?Sized>(
        n: usize,
        d: usize,
        count: usize,
        range: (i64, i64),
        rng: &mut R,
    ) -> Result<Self> {
        if d > n || count < d + 1 || (d > 0 && range.0 == range.1) {
            return Err(Error::InvalidArgument(format!("cannot draw a {d}-dimensional polytope")));
        }
        loop {
            let p = if d == n {
                Self::random(n, count, range, rng)?
            } else {
                // random points of Z^d pushed into Z^n by a random integer map
                let local = Self::random(d, count, range, rng)?;
                if local.dim() != d {
                    continue;
                }
                let map: Vec<Vec<i64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-1..=1)).collect()).collect();
                let pts: Vec<Point> = local
                    .vertices()
                    .iter()
                    .map(|v| {
                        map.iter()
                            .map(|row| row.iter().zip(v).map(|(&a, x)| x * a).sum::<Integer>())
                            .collect()
                    })
                    .collect();
                Self::hull(&pts)?
            };
            if p.dim() == d {
                return Ok(p);
            }
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub(crate) fn geometry(&self) -> &Geometry {
        self.geometry
            .get_or_init(|| Arc::new(compute_geometry(self.vertices.clone()).1))
    }

    pub fn dim(&self) -> usize {
        self.geometry().chart.dim()
    }

    pub fn lattice_chart(&self) -> LatticeChart {
        self.geometry().chart.clone()
    }

    /// Facets in chart coordinates. Empty for points.
    pub fn facets(&self) -> &[Facet] {
        &self.geometry().facets
    }

    /// `T^{-1}(P)` as a full-dimensional polytope in `Z^d` (`d >= 1`).
    pub fn pullback(&self) -> Result<LatticePolytope> {
        let g = self.geometry();
        if g.chart.dim() == 0 {
            return Err(Error::InvalidArgument("a point has no positive-dimensional pullback".into()));
        }
        LatticePolytope::hull(&g.local)
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        check_same(self.ambient, other.ambient)?;
        if other.vertices.len() == 1 {
            return Ok(self.translate(&other.vertices[0]));
        }
        if self.vertices.len() == 1 {
            return Ok(other.translate(&self.vertices[0]));
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect::<Point>());
            }
        }
        pts.sort();
        pts.dedup();
        Ok(Self::hull_sorted(self.ambient, pts))
    }

    pub fn translate(&self, v: &[Integer]) -> Self {
        let vertices = self
            .vertices
            .iter()
            .map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect())
            .collect();
        Self::from_sorted_vertices(self.ambient, vertices)
    }

    /// `lambda * P` for an integer `lambda >= 0`.
    pub fn dilate(&self, lambda: &Integer) -> Result<Self> {
        if lambda.is_negative() {
            return Err(Error::InvalidArgument("dilation factor must be non-negative".into()));
        }
        if lambda.is_zero() {
            return Self::origin(self.ambient);
        }
        let vertices = self
            .vertices
            .iter()
            .map(|p| p.iter().map(|x| x * lambda).collect())
            .collect();
        Ok(Self::from_sorted_vertices(self.ambient, vertices))
    }

    pub fn dilate_by(&self, lambda: u64) -> Result<Self> {
        self.dilate(&Integer::from(lambda))
    }

    /// `conv(A ∪ B)`.
    pub fn conv_union(&self, other: &Self) -> Result<Self> {
        check_same(self.ambient, other.ambient)?;
        let mut pts: Vec<Point> = self.vertices.iter().chain(&other.vertices).cloned().collect();
        pts.sort();
        pts.dedup();
        Ok(Self::hull_sorted(self.ambient, pts))
    }

    /// `h_P(u) = max { u . v : v vertex }`.
    pub fn support(&self, u: &[Rational]) -> Result<Rational> {
        check_same(self.ambient, u.len())?;
        let dir = integer_direction(u);
        let scale = common_denominator(u.iter());
        Ok(Rational::new(self.support_int(&dir), scale))
    }

    pub fn support_int(&self, u: &[Integer]) -> Integer {
        self.vertices
            .iter()
            .map(|v| dot(u, v))
            .max()
            .expect("polytopes are non-empty")
    }

    /// `P^u`, the face maximizing `u`.
    pub fn face(&self, u: &[Rational]) -> Result<Self> {
        check_same(self.ambient, u.len())?;
        Ok(self.face_int(&integer_direction(u)))
    }

    pub fn face_int(&self, u: &[Integer]) -> Self {
        let h = self.support_int(u);
        let vertices = self
            .vertices
            .iter()
            .filter(|v| dot(u, v) == h)
            .cloned()
            .collect();
        Self::from_sorted_vertices(self.ambient, vertices)
    }

    /// Vertex-index sets of all faces of dimension `d`.
    pub(crate) fn face_sets(&self, d: usize) -> Vec<BitSet> {
        let dim = self.dim();
        if d > dim {
            return Vec::new();
        }
        let g = self.geometry();
        let mut level = vec![BitSet::full(self.vertices.len())];
        for _ in d..dim {
            let next: BTreeSet<BitSet> = level.iter().flat_map(|f| subfaces(g, f)).collect();
            level = next.into_iter().collect();
        }
        level
    }

    /// All `d`-dimensional faces, sorted, without duplicates.
    pub fn faces_of_dim(&self, d: usize) -> Vec<LatticePolytope> {
        let mut faces: Vec<LatticePolytope> = self
            .face_sets(d)
            .iter()
            .map(|s| self.sub_polytope(s))
            .collect();
        faces.sort();
        faces
    }

    pub(crate) fn sub_polytope(&self, set: &BitSet) -> LatticePolytope {
        Self::from_sorted_vertices(self.ambient, set.iter().map(|i| self.vertices[i].clone()).collect())
    }

    /// Equations of the affine hull and facet inequalities in ambient
    /// integer coordinates.
    pub fn ambient_hrep(&self) -> AmbientHRep {
        let g = self.geometry();
        let base = g.chart.base();
        let equations = g
            .chart
            .equations()
            .into_iter()
            .map(|k| {
                let offset = dot(&k, base);
                HalfSpace { normal: k, offset }
            })
            .collect();
        let functionals = g.chart.coordinate_functionals();
        let inequalities = g
            .facets
            .iter()
            .map(|f| {
                let c: Vec<Rational> = (0..self.ambient)
                    .map(|j| {
                        f.normal
                            .iter()
                            .zip(&functionals)
                            .map(|(a, row)| Rational::from_integer(a.clone()) * &row[j])
                            .sum()
                    })
                    .collect();
                let scale = common_denominator(c.iter());
                let normal: Point = c
                    .iter()
                    .map(|x| (x * Rational::from_integer(scale.clone())).to_integer())
                    .collect();
                let offset = &f.offset * &scale + dot(&normal, base);
                HalfSpace { normal, offset }
            })
            .collect();
        AmbientHRep {
            equations,
            inequalities,
        }
    }

    pub fn contains(&self, x: &[Integer]) -> bool {
        x.len() == self.ambient && self.ambient_hrep().contains(x)
    }

    /// Number of lattice points of `t * P`, by bounding-box enumeration.
    pub fn lattice_points_count_dilated(&self, t: u64) -> Integer {
        let t = Integer::from(t);
        let hrep = self.ambient_hrep();
        let mut constraints = Vec::new();
        for h in &hrep.inequalities {
            constraints.push(Constraint {
                normal: h.normal.clone(),
                offset: &h.offset * &t,
            });
        }
        for h in &hrep.equations {
            constraints.push(Constraint {
                normal: h.normal.clone(),
                offset: &h.offset * &t,
            });
            constraints.push(Constraint {
                normal: h.normal.iter().map(|x| -x).collect(),
                offset: -&h.offset * &t,
            });
        }
        let lo: Point = (0..self.ambient)
            .map(|j| self.vertices.iter().map(|v| &v[j] * &t).min().unwrap())
            .collect();
        let hi: Point = (0..self.ambient)
            .map(|j| self.vertices.iter().map(|v| &v[j] * &t).max().unwrap())
            .collect();
        count::count_points(&constraints, &lo, &hi)
    }

    /// `G(P)`, the number of lattice points in `P`.
    pub fn lattice_points_count(&self) -> Integer {
        self.lattice_points_count_dilated(1)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(PolytopeJson::from(self)).expect("polytope JSON")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let raw: PolytopeJson = serde_json::from_value(value.clone())?;
        raw.try_into()
    }
}

/// Maximal proper non-empty intersections of `face` with facets of `P`, which
/// are exactly the facets of `face`.
pub(crate) fn subfaces(g: &Geometry, face: &BitSet) -> Vec<BitSet> {
    let mut candidates: Vec<BitSet> = g
        .facets
        .iter()
        .map(|f| f.vertices.intersection(face))
        .filter(|s| !s.is_empty() && s != face)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // largest first so containment only needs checking against earlier entries
    candidates.sort_by_key(|s| std::cmp::Reverse(s.len()));
    let mut maximal: Vec<BitSet> = Vec::new();
    for c in candidates {
        if !maximal.iter().any(|m| c.is_subset(m)) {
            maximal.push(c);
        }
    }
    maximal
}

/// Vertices (sorted) and geometry of the hull of sorted, distinct points.
fn compute_geometry(pts: Vec<Point>) -> (Vec<Point>, Geometry) {
    let chart = LatticeChart::through(&pts[0], &pts[1..]);
    let d = chart.dim();
    let local: Vec<Vec<Integer>> = pts
        .iter()
        .map(|p| chart.pull(p).expect("points lie on their own affine hull lattice"))
        .collect();
    if d == 0 {
        return (
            pts,
            Geometry {
                chart,
                local,
                facets: Vec::new(),
            },
        );
    }
    let raw = dd::facets(&local, d);
    let m = pts.len();
    // incidence of each point: the facets it lies on
    let mut on: Vec<BitSet> = vec![BitSet::new(raw.len()); m];
    for (fi, f) in raw.iter().enumerate() {
        for i in f.incidence.iter() {
            on[i].insert(fi);
        }
    }
    // a point is a vertex iff the facets through it meet only in that point
    let is_vertex: Vec<bool> = (0..m)
        .map(|i| {
            let mut common = BitSet::full(m);
            for f in on[i].iter() {
                common = common.intersection(&raw[f].incidence);
            }
            !on[i].is_empty() && common.len() == 1
        })
        .collect();
    let index: Vec<Option<usize>> = {
        let mut next = 0;
        is_vertex
            .iter()
            .map(|&v| {
                v.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let count = is_vertex.iter().filter(|&&v| v).count();
    let facets = raw
        .into_iter()
        .map(|f| {
            let mut vs = BitSet::new(count);
            for i in f.incidence.iter() {
                if let Some(k) = index[i] {
                    vs.insert(k);
                }
            }
            Facet {
                normal: f.normal,
                offset: f.offset,
                vertices: vs,
            }
        })
        .collect();
    let mut vertices = Vec::with_capacity(count);
    let mut local_vertices = Vec::with_capacity(count);
    for ((p, z), keep) in pts.into_iter().zip(local).zip(is_vertex) {
        if keep {
            vertices.push(p);
            local_vertices.push(z);
        }
    }
    (
        vertices,
        Geometry {
            chart,
            local: local_vertices,
            facets,
        },
    )
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    n: usize,
    vertices: Vec<Vec<serde_json::Value>>,
}

impl From<&LatticePolytope> for PolytopeJson {
    fn from(p: &LatticePolytope) -> Self {
        Self {
            n: p.ambient,
            vertices: p
                .vertices
                .iter()
                .map(|v| v.iter().map(integer_to_json).collect())
                .collect(),
        }
    }
}

impl TryFrom<PolytopeJson> for LatticePolytope {
    type Error = Error;

    fn try_from(raw: PolytopeJson) -> Result<Self> {
        let pts = raw
            .vertices
            .iter()
            .map(|v| v.iter().map(integer_from_json).collect::<Result<Point>>())
            .collect::<Result<Vec<Point>>>()?;
        for p in &pts {
            check_same(raw.n, p.len())?;
        }
        LatticePolytope::hull(&pts)
    }
}

impl Serialize for LatticePolytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(d)?;
        raw.try_into().map_err(serde::de::Error::custom)
    }
}
