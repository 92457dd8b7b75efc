//! Integer linear algebra: Hermite normal forms, integer kernels, lattice
//! saturation and the affine lattice charts used to measure lower-dimensional
//! polytopes.

use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{integer_to_json, Integer, Point, Rational};

fn swap_rows<T>(rows: &mut [Vec<T>], a: usize, b: usize) {
    if a != b {
        rows.swap(a, b);
    }
}

/// Row echelon form under unimodular row operations, optionally tracking the
/// transform `U` so that `U * input = echelon`. Pivots are positive and
/// entries above each pivot are reduced into `[0, pivot)`, so the nonzero rows
/// are the Hermite normal form of the row lattice.
fn echelon(mut a: Vec<Vec<Integer>>, track: bool) -> (Vec<Vec<Integer>>, Vec<Vec<Integer>>, Vec<usize>) {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut u: Vec<Vec<Integer>> = if track {
        (0..m)
            .map(|i| (0..m).map(|j| if i == j { Integer::one() } else { Integer::zero() }).collect())
            .collect()
    } else {
        Vec::new()
    };
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..n {
        if r == m {
            break;
        }
        for i in (r + 1)..m {
            if a[i][col].is_zero() {
                continue;
            }
            if a[r][col].is_zero() {
                swap_rows(&mut a, r, i);
                if track {
                    swap_rows(&mut u, r, i);
                }
                continue;
            }
            let ext = a[r][col].extended_gcd(&a[i][col]);
            let (g, x, y) = (ext.gcd, ext.x, ext.y);
            let p = &a[r][col] / &g;
            let q = &a[i][col] / &g;
            combine(&mut a, r, i, &x, &y, &p, &q);
            if track {
                combine(&mut u, r, i, &x, &y, &p, &q);
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for v in a[r].iter_mut() {
                *v = -&*v;
            }
            if track {
                for v in u[r].iter_mut() {
                    *v = -&*v;
                }
            }
        }
        for above in 0..r {
            let q = a[above][col].div_floor(&a[r][col]);
            if q.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            for (t, b) in top[above].iter_mut().zip(&bottom[0]) {
                *t -= &q * b;
            }
            if track {
                let (top, bottom) = u.split_at_mut(r);
                for (t, b) in top[above].iter_mut().zip(&bottom[0]) {
                    *t -= &q * b;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (a, u, pivots)
}

/// `row_r <- x*row_r + y*row_i`, `row_i <- p*row_i - q*row_r` (determinant one
/// because `x*p + y*q = 1`).
fn combine(rows: &mut [Vec<Integer>], r: usize, i: usize, x: &Integer, y: &Integer, p: &Integer, q: &Integer) {
    let new_r: Vec<Integer> = rows[r].iter().zip(&rows[i]).map(|(a, b)| x * a + y * b).collect();
    let new_i: Vec<Integer> = rows[r].iter().zip(&rows[i]).map(|(a, b)| p * b - q * a).collect();
    rows[r] = new_r;
    rows[i] = new_i;
}

/// Hermite normal form basis of the lattice spanned by `rows`.
pub fn hermite_normal_form(rows: &[Vec<Integer>]) -> Vec<Vec<Integer>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let (e, _, pivots) = echelon(rows.to_vec(), false);
    e.into_iter().take(pivots.len()).collect()
}

pub fn rank(rows: &[Vec<Integer>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    echelon(rows.to_vec(), false).2.len()
}

/// Basis (in Hermite normal form) of `{ x in Z^n : row . x = 0 for every row }`.
pub fn integer_kernel(rows: &[Vec<Integer>], n: usize) -> Vec<Vec<Integer>> {
    if rows.is_empty() {
        return identity(n);
    }
    // echelonize the transpose; zero rows of the result give kernel vectors
    let transpose: Vec<Vec<Integer>> = (0..n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    let (_, u, pivots) = echelon(transpose, true);
    let kernel: Vec<Vec<Integer>> = u.into_iter().skip(pivots.len()).collect();
    hermite_normal_form(&kernel)
}

/// Basis of `span_Q(rows) ∩ Z^n` in Hermite normal form.
pub fn saturate(rows: &[Vec<Integer>], n: usize) -> Vec<Vec<Integer>> {
    let nonzero: Vec<Vec<Integer>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if nonzero.is_empty() {
        return Vec::new();
    }
    let normals = integer_kernel(&nonzero, n);
    if normals.is_empty() {
        return identity(n);
    }
    integer_kernel(&normals, n)
}

pub fn identity(n: usize) -> Vec<Vec<Integer>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Integer::one() } else { Integer::zero() }).collect())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(matrix: &[Vec<Integer>]) -> Integer {
    let n = matrix.len();
    if n == 0 {
        return Integer::one();
    }
    let mut a = matrix.to_vec();
    let mut sign = Integer::one();
    let mut prev = Integer::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Integer::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Affine bijection `T(z) = base + sum_i z_i * directions[i]` between `Z^d` and
/// the lattice points of a `d`-dimensional affine subspace of `R^n`.
///
/// The directions are the Hermite normal form of the saturated direction
/// lattice, so the chart is canonical for a given base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeChart {
    ambient: usize,
    base: Point,
    directions: Vec<Point>,
    pivots: Vec<usize>,
}

impl LatticeChart {
    /// Chart for the affine hull of `base` and `points`.
    pub fn through(base: &[Integer], points: &[Point]) -> Self {
        let n = base.len();
        let edges: Vec<Vec<Integer>> = points
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let directions = saturate(&edges, n);
        let pivots = directions
            .iter()
            .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero HNF row"))
            .collect();
        let base = if directions.len() == n {
            vec![Integer::zero(); n]
        } else {
            base.to_vec()
        };
        Self {
            ambient: n,
            base,
            directions,
            pivots,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            ambient: n,
            base: vec![Integer::zero(); n],
            directions: identity(n),
            pivots: (0..n).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn directions(&self) -> &[Point] {
        &self.directions
    }

    pub fn push(&self, z: &[Integer]) -> Point {
        let mut x = self.base.clone();
        for (zi, dir) in z.iter().zip(&self.directions) {
            for (xj, dj) in x.iter_mut().zip(dir) {
                *xj += zi * dj;
            }
        }
        x
    }

    /// `T^{-1}(x)`, or `None` when `x` is not a lattice point of the affine hull.
    pub fn pull(&self, x: &[Integer]) -> Option<Vec<Integer>> {
        let mut y: Vec<Integer> = x.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        let mut z = Vec::with_capacity(self.dim());
        for (dir, &p) in self.directions.iter().zip(&self.pivots) {
            let (q, r) = y[p].div_rem(&dir[p]);
            if !r.is_zero() {
                return None;
            }
            for (yj, dj) in y.iter_mut().zip(dir) {
                *yj -= &q * dj;
            }
            z.push(q);
        }
        y.iter().all(Zero::is_zero).then_some(z)
    }

    /// Rational linear functionals `F` (one row per chart coordinate) with
    /// `T^{-1}(x) = F (x - base)` for every `x` in the affine hull.
    pub fn coordinate_functionals(&self) -> Vec<Vec<Rational>> {
        let d = self.dim();
        let mut out = vec![vec![Rational::zero(); self.ambient]; d];
        for &col in &self.pivots {
            let mut y = vec![Rational::zero(); self.ambient];
            y[col] = Rational::one();
            for (i, (dir, &p)) in self.directions.iter().zip(&self.pivots).enumerate() {
                let q = &y[p] / Rational::from_integer(dir[p].clone());
                for (yj, dj) in y.iter_mut().zip(dir) {
                    *yj -= &q * Rational::from_integer(dj.clone());
                }
                out[i][col] = q;
            }
        }
        out
    }

    /// Integer normals `k` with `k . (x - base) = 0` exactly on the affine hull.
    pub fn equations(&self) -> Vec<Point> {
        if self.directions.is_empty() {
            return identity(self.ambient);
        }
        integer_kernel(&self.directions, self.ambient)
    }
}

impl Serialize for LatticeChart {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LatticeChart", 3)?;
        st.serialize_field("d", &self.dim())?;
        st.serialize_field("base", &self.base.iter().map(integer_to_json).collect::<Vec<_>>())?;
        let dirs: Vec<Vec<serde_json::Value>> = self
            .directions
            .iter()
            .map(|d| d.iter().map(integer_to_json).collect())
            .collect();
        st.serialize_field("directions", &dirs)?;
        st.end()
    }
}
