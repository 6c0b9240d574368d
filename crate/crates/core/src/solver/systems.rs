//! Tight constraints and their exact 2×2 solutions.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;

use super::bounds::CoefficientBounds;
use super::SolutionBox;
use crate::family::Rect;
use crate::rational::Rational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Axis {
    X,
    Y,
}

/// `i·a + j·c = w_s` on the X axis, `i·b + j·d = h_s` on the Y axis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TightConstraint {
    pub axis: Axis,
    pub i: i64,
    pub j: i64,
    pub rect_index: usize,
    pub rhs: Rational,
}

impl TightConstraint {
    pub fn holds(&self, first: &Rational, second: &Rational) -> bool {
        first * self.i + second * self.j == self.rhs
    }
}

/// Every constraint on `axis` within the per-rectangle caps, in a fixed order.
pub fn constraints(rects: &[Rect], bounds: &CoefficientBounds, axis: Axis) -> Vec<TightConstraint> {
    let mut out = Vec::new();
    for (s, r) in rects.iter().enumerate() {
        let m = bounds.per_rect[s] as i64;
        let rhs = match axis {
            Axis::X => r.w.clone(),
            Axis::Y => r.h.clone(),
        };
        for i in -m..=m {
            let rest = m - i.abs();
            for j in -rest..=rest {
                if i != 0 || j != 0 {
                    out.push(TightConstraint { axis, i, j, rect_index: s, rhs: rhs.clone() });
                }
            }
        }
    }
    out
}

/// Unique solution of two constraints, or `None` when they are dependent.
pub fn solve_pair(p: &TightConstraint, q: &TightConstraint) -> Option<(Rational, Rational)> {
    let det = p.i * q.j - q.i * p.j;
    if det == 0 {
        return None;
    }
    let x = (&p.rhs * q.j - &q.rhs * p.j) / det;
    let y = (&q.rhs * p.i - &p.rhs * q.i) / det;
    Some((x, y))
}

/// Every independent unordered pair of constraints, lazily.
pub fn independent_pairs(cs: &[TightConstraint]) -> impl Iterator<Item = (&TightConstraint, &TightConstraint)> + '_ {
    cs.iter()
        .enumerate()
        .flat_map(move |(n, p)| cs[n + 1..].iter().map(move |q| (p, q)))
        .filter(|(p, q)| p.i * q.j != q.i * p.j)
}

/// Solutions of all independent pairs that fall inside `window`, plus the
/// number of independent systems solved.
pub fn solutions(cs: &[TightConstraint], window: &SolutionBox) -> (BTreeSet<(Rational, Rational)>, u64) {
    let parts: Vec<(Vec<(Rational, Rational)>, u64)> = (0..cs.len())
        .into_par_iter()
        .map(|n| {
            let mut found = Vec::new();
            let mut systems = 0;
            for q in &cs[n + 1..] {
                if let Some((x, y)) = solve_pair(&cs[n], q) {
                    systems += 1;
                    if window.admits(&x, &y) {
                        found.push((x, y));
                    }
                }
            }
            (found, systems)
        })
        .collect();
    let mut set = BTreeSet::new();
    let mut total = 0;
    for (f, s) in parts {
        total += s;
        set.extend(f);
    }
    (set, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::f0;
    use crate::rational::q;

    fn tc(axis: Axis, i: i64, j: i64, rhs: i64) -> TightConstraint {
        TightConstraint { axis, i, j, rect_index: 0, rhs: rhs.into() }
    }

    #[test]
    fn known_systems_solve() {
        // a = 1, a + 2c = 6 and d = 1, 3b + d = 6.
        assert_eq!(solve_pair(&tc(Axis::X, 1, 0, 1), &tc(Axis::X, 1, 2, 6)), Some((q(1, 1), q(5, 2))));
        assert_eq!(solve_pair(&tc(Axis::Y, 0, 1, 1), &tc(Axis::Y, 3, 1, 6)), Some((q(5, 3), q(1, 1))));
        assert_eq!(solve_pair(&tc(Axis::X, 1, 1, 1), &tc(Axis::X, 2, 2, 2)), None);
    }

    #[test]
    fn constraint_counts() {
        let b = CoefficientBounds {
            per_rect: vec![2, 1, 3],
            lambda_lo_sq: q(1, 4),
            lambda_hi_sq: q(4, 1),
            v_hi_sq: q(9, 1),
            a_lo: q(3, 1),
            a_hi: q(6, 1),
        };
        let cs = constraints(f0().rects(), &b, Axis::X);
        // 2m² + 2m lattice vectors with 0 < |i| + |j| <= m.
        assert_eq!(cs.len(), (8 + 4) + (2 + 2) + (18 + 6));
        // Dependent pairs share a primitive direction up to sign.
        let mut dirs = std::collections::HashMap::new();
        for c in &cs {
            let g = num_integer::gcd(c.i, c.j);
            let (mut di, mut dj) = (c.i / g, c.j / g);
            if di < 0 || (di == 0 && dj < 0) {
                (di, dj) = (-di, -dj);
            }
            *dirs.entry((di, dj)).or_insert(0usize) += 1;
        }
        let n = cs.len();
        let brute = n * (n - 1) / 2 - dirs.values().map(|k| k * (k - 1) / 2).sum::<usize>();
        assert_eq!(independent_pairs(&cs).count(), brute);
    }
}
