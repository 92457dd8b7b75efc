//! Lattice-point enumeration over a bounding box with an exact membership test.
//!
//! Each constraint is `normal . x <= offset`. All but the last coordinate are
//! enumerated; the last one is solved as an interval. Subtrees are pruned when
//! some constraint cannot be met anywhere in the remaining box.

use num_bigint::BigInt;
use num_integer::Integer as NumInteger;
use num_traits::{Signed, ToPrimitive};

use crate::arith::Integer;

pub struct Constraint {
    pub normal: Vec<Integer>,
    pub offset: Integer,
}

trait Scalar: NumInteger + Signed + Clone + Ord {}
impl Scalar for i128 {}
impl Scalar for BigInt {}

fn ceil_div<T: Scalar>(a: &T, b: &T) -> T {
    -((-a.clone()).div_floor(b))
}

struct Problem<T> {
    normals: Vec<Vec<T>>,
    offsets: Vec<T>,
    lo: Vec<T>,
    hi: Vec<T>,
    /// `rest_min[c][j]`: minimum of `sum_{i >= j} normal_c[i] x_i` over the box.
    rest_min: Vec<Vec<T>>,
}

impl<T: Scalar> Problem<T> {
    fn new(normals: Vec<Vec<T>>, offsets: Vec<T>, lo: Vec<T>, hi: Vec<T>) -> Self {
        let n = lo.len();
        let rest_min = normals
            .iter()
            .map(|c| {
                let mut acc = vec![T::zero(); n + 1];
                for j in (0..n).rev() {
                    let a = c[j].clone() * lo[j].clone();
                    let b = c[j].clone() * hi[j].clone();
                    acc[j] = acc[j + 1].clone() + a.min(b);
                }
                acc
            })
            .collect();
        Self {
            normals,
            offsets,
            lo,
            hi,
            rest_min,
        }
    }

    fn count(&self) -> T {
        let partial = vec![T::zero(); self.normals.len()];
        self.walk(0, &partial)
    }

    fn walk(&self, level: usize, partial: &[T]) -> T {
        let n = self.lo.len();
        for (c, p) in partial.iter().enumerate() {
            if p.clone() + self.rest_min[c][level].clone() > self.offsets[c] {
                return T::zero();
            }
        }
        if level + 1 == n {
            let mut lo = self.lo[level].clone();
            let mut hi = self.hi[level].clone();
            for (c, p) in partial.iter().enumerate() {
                let coef = &self.normals[c][level];
                let rhs = self.offsets[c].clone() - p.clone();
                if coef.is_positive() {
                    hi = hi.min(rhs.div_floor(coef));
                } else if coef.is_negative() {
                    lo = lo.max(ceil_div(&rhs, coef));
                }
            }
            return if hi >= lo { hi - lo + T::one() } else { T::zero() };
        }
        let mut total = T::zero();
        let mut v = self.lo[level].clone();
        let mut next = partial.to_vec();
        while v <= self.hi[level] {
            for (c, slot) in next.iter_mut().enumerate() {
                *slot = partial[c].clone() + self.normals[c][level].clone() * v.clone();
            }
            total = total + self.walk(level + 1, &next);
            v = v + T::one();
        }
        total
    }
}

fn small(x: &Integer) -> Option<i128> {
    const BOUND: i64 = 1 << 40;
    x.to_i64().filter(|v| v.abs() < BOUND).map(i128::from)
}

/// Counts `x in Z^n` with `lo <= x <= hi` satisfying every constraint.
pub(crate) fn count_points(constraints: &[Constraint], lo: &[Integer], hi: &[Integer]) -> Integer {
    let n = lo.len();
    if n == 0 {
        let ok = constraints.iter().all(|c| !c.offset.is_negative());
        return Integer::from(ok as u8);
    }
    let fits = constraints
        .iter()
        .all(|c| small(&c.offset).is_some() && c.normal.iter().all(|x| small(x).is_some()))
        && lo.iter().chain(hi).all(|x| small(x).is_some());
    if fits {
        let p = Problem::new(
            constraints
                .iter()
                .map(|c| c.normal.iter().map(|x| small(x).unwrap()).collect())
                .collect(),
            constraints.iter().map(|c| small(&c.offset).unwrap()).collect(),
            lo.iter().map(|x| small(x).unwrap()).collect(),
            hi.iter().map(|x| small(x).unwrap()).collect(),
        );
        Integer::from(p.count())
    } else {
        let p = Problem::new(
            constraints.iter().map(|c| c.normal.clone()).collect(),
            constraints.iter().map(|c| c.offset.clone()).collect(),
            lo.to_vec(),
            hi.to_vec(),
        );
        p.count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, point};

    fn brute(constraints: &[Constraint], lo: &[i64], hi: &[i64]) -> i64 {
        let mut count = 0;
        for x in lo[0]..=hi[0] {
            for y in lo[1]..=hi[1] {
                let p = point(&[x, y]);
                if constraints.iter().all(|c| crate::arith::dot(&c.normal, &p) <= c.offset) {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn triangle_counts_match_brute_force() {
        // 3 * standard triangle: x >= 0, y >= 0, x + y <= 3
        let cons = vec![
            Constraint { normal: point(&[-1, 0]), offset: int(0) },
            Constraint { normal: point(&[0, -1]), offset: int(0) },
            Constraint { normal: point(&[1, 1]), offset: int(3) },
        ];
        let got = count_points(&cons, &point(&[-2, -2]), &point(&[5, 5]));
        assert_eq!(got, int(brute(&cons, &[-2, -2], &[5, 5])));
        assert_eq!(got, int(10));
        // equality constraints as two inequalities: the diagonal segment
        let seg = vec![
            Constraint { normal: point(&[1, -1]), offset: int(0) },
            Constraint { normal: point(&[-1, 1]), offset: int(0) },
            Constraint { normal: point(&[1, 0]), offset: int(2) },
            Constraint { normal: point(&[-1, 0]), offset: int(0) },
        ];
        assert_eq!(count_points(&seg, &point(&[0, 0]), &point(&[2, 2])), int(3));
    }
}
