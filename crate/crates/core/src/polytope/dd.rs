//! Facets of a full-dimensional integer point configuration by the double
//! description method.
//!
//! The facet normals `(a, b)` with `a . x <= b` are the extreme rays of the cone
//! `{ (a, b) : a . x_i - b <= 0 for all i }`, which is pointed when the points
//! affinely span `R^d`. Starting from a simplex, constraints are added one
//! point at a time; adjacency of rays is decided combinatorially from their
//! zero sets, so no arithmetic happens outside of ray combination.

use num_traits::{One, Signed, Zero};

use crate::arith::{dot, make_primitive, Integer, Rational};
use crate::bitset::BitSet;

#[derive(Clone, Debug)]
pub(crate) struct RawFacet {
    pub normal: Vec<Integer>,
    pub offset: Integer,
    /// Indices of input points lying on the facet.
    pub incidence: BitSet,
}

struct Ray {
    coords: Vec<Integer>,
    zeros: BitSet,
}

/// Greedily picks `d + 1` affinely independent points, first index first.
fn initial_simplex(points: &[Vec<Integer>], d: usize) -> Vec<usize> {
    let mut chosen = vec![0usize];
    // reduced rows with their pivot column
    let mut basis: Vec<(usize, Vec<Rational>)> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if chosen.len() == d + 1 {
            break;
        }
        let mut v: Vec<Rational> = p
            .iter()
            .zip(&points[0])
            .map(|(a, b)| Rational::from_integer(a - b))
            .collect();
        for (pivot, row) in &basis {
            if !v[*pivot].is_zero() {
                let f = &v[*pivot] / &row[*pivot];
                for (x, r) in v.iter_mut().zip(row) {
                    *x -= &f * r;
                }
            }
        }
        if let Some(pivot) = v.iter().position(|x| !x.is_zero()) {
            basis.push((pivot, v));
            chosen.push(i);
        }
    }
    assert_eq!(chosen.len(), d + 1, "points do not affinely span R^{d}");
    chosen
}

fn invert(matrix: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("singular simplex matrix");
        a.swap(col, pivot);
        let inv = Rational::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let (src, dst) = if r < col {
                    let (lo, hi) = a.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = a.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (x, s) in dst.iter_mut().zip(src) {
                    *x -= &f * s;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

fn homogenize(p: &[Integer]) -> Vec<Integer> {
    let mut h = p.to_vec();
    h.push(-Integer::one());
    h
}

/// Facets of `conv(points)`; the points must affinely span `R^d` with `d >= 1`.
pub(crate) fn facets(points: &[Vec<Integer>], d: usize) -> Vec<RawFacet> {
    let m = points.len();
    let rows: Vec<Vec<Integer>> = points.iter().map(|p| homogenize(p)).collect();
    let simplex = initial_simplex(points, d);

    let matrix: Vec<Vec<Rational>> = simplex
        .iter()
        .map(|&i| rows[i].iter().cloned().map(Rational::from_integer).collect())
        .collect();
    let inverse = invert(matrix);
    let mut rays: Vec<Ray> = (0..=d)
        .map(|j| {
            let col: Vec<Rational> = inverse.iter().map(|row| -&row[j]).collect();
            let den = col.iter().fold(Integer::one(), |acc, x| num_integer::lcm(acc, x.denom().clone()));
            let mut coords: Vec<Integer> = col
                .iter()
                .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
                .collect();
            make_primitive(&mut coords);
            let mut zeros = BitSet::new(m);
            for (k, &i) in simplex.iter().enumerate() {
                if k != j {
                    zeros.insert(i);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    let mut in_simplex = vec![false; m];
    for &i in &simplex {
        in_simplex[i] = true;
    }

    for i in (0..m).filter(|&i| !in_simplex[i]) {
        let values: Vec<Integer> = rays.iter().map(|r| dot(&rows[i], &r.coords)).collect();
        let positive: Vec<usize> = (0..rays.len()).filter(|&r| values[r].is_positive()).collect();
        if positive.is_empty() {
            for (r, v) in rays.iter_mut().zip(&values) {
                if v.is_zero() {
                    r.zeros.insert(i);
                }
            }
            continue;
        }
        let negative: Vec<usize> = (0..rays.len()).filter(|&r| values[r].is_negative()).collect();
        let mut fresh = Vec::new();
        for &p in &positive {
            for &q in &negative {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.len() + 1 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(r, ray)| r != p && r != q && common.is_subset(&ray.zeros));
                if blocked {
                    continue;
                }
                let mut coords: Vec<Integer> = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(rq, rp)| &values[p] * rq - &values[q] * rp)
                    .collect();
                make_primitive(&mut coords);
                let mut zeros = common;
                zeros.insert(i);
                fresh.push(Ray { coords, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (mut r, v) in rays.into_iter().zip(values) {
            if v.is_positive() {
                continue;
            }
            if v.is_zero() {
                r.zeros.insert(i);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }

    rays.into_iter()
        .map(|r| {
            let mut normal = r.coords[..d].to_vec();
            let mut offset = r.coords[d].clone();
            let g = crate::arith::gcd_all(normal.iter());
            if !g.is_one() {
                for x in normal.iter_mut() {
                    *x /= &g;
                }
                offset /= &g;
            }
            RawFacet {
                normal,
                offset,
                incidence: r.zeros,
            }
        })
        .collect()
}
