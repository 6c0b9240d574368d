//! Denominator sweep for integer families.
//!
//! A tight pair `(x, y)` solves two independent integer systems, so both
//! coordinates share a denominator `M` dividing the system determinant,
//! `M <= m_s·m_t`. Sweeping `M` and the numerators and testing each
//! candidate against every constraint in `O(m)` integer work reproduces the
//! tight pairs without solving any linear system.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;

use super::bounds::CoefficientBounds;
use super::SolutionBox;
use crate::family::Rect;
use crate::rational::Rational;

/// `(i, j)` with `|i| + |j| <= m` and `i·p + j·q = rhs`.
fn solutions_into(p: i64, q: i64, rhs: i64, m: i64, out: &mut Vec<(i64, i64)>) {
    for i in -m..=m {
        let rem = rhs - i * p;
        let rest = m - i.abs();
        if q == 0 {
            if rem == 0 {
                out.extend((-rest..=rest).map(|j| (i, j)));
            }
        } else if rem % q == 0 {
            let j = rem / q;
            if j.abs() <= rest {
                out.push((i, j));
            }
        }
    }
}

fn has_independent(v: &[(i64, i64)]) -> bool {
    let Some(&(i0, j0)) = v.first() else { return false };
    v.iter().any(|&(i, j)| i0 * j != i * j0)
}

/// Pairs `(p/M, q/M)` in `window` that satisfy two independent constraints.
/// `dims[s]` is the integer right-hand side of rectangle `s` on this axis.
pub fn sweep_pairs(
    dims: &[i64],
    bounds: &CoefficientBounds,
    window: &SolutionBox,
) -> (BTreeSet<(Rational, Rational)>, u64) {
    let caps: Vec<i64> = bounds.per_rect.iter().map(|&m| m as i64).collect();
    let max_cap = caps.iter().copied().max().unwrap_or(0);
    let m_max = max_cap * max_cap;
    let x_hi = window.first_max2.sqrt_bounds(32).1;
    let y_hi = window.second_max2.sqrt_bounds(32).1;
    let parts: Vec<(Vec<(Rational, Rational)>, u64)> = (1..=m_max.max(1))
        .into_par_iter()
        .map(|den| {
            let mut found = Vec::new();
            let mut tried = 0u64;
            let p_hi = (&x_hi * den).floor_i64().expect("numerator range");
            let q_hi = (&y_hi * den).floor_i64().expect("numerator range");
            let p_lo = if window.first_positive { 1 } else { 0 };
            let mut sols = Vec::new();
            for p in p_lo..=p_hi {
                let g = p.gcd(&den);
                for q in 0..=q_hi {
                    if g.gcd(&q) != 1 {
                        continue;
                    }
                    tried += 1;
                    sols.clear();
                    for (s, &w) in dims.iter().enumerate() {
                        solutions_into(p, q, w * den, caps[s], &mut sols);
                    }
                    if has_independent(&sols) {
                        let (x, y) = (Rational::new(p, den), Rational::new(q, den));
                        if window.admits(&x, &y) {
                            found.push((x, y));
                        }
                    }
                }
            }
            (found, tried)
        })
        .collect();
    let mut set = BTreeSet::new();
    let mut total = 0;
    for (f, t) in parts {
        total += t;
        set.extend(f);
    }
    (set, total)
}

/// Integer right-hand sides per rectangle on the chosen axis.
pub fn integer_dims(rects: &[Rect], widths: bool) -> Option<Vec<i64>> {
    rects
        .iter()
        .map(|r| {
            let v = if widths { &r.w } else { &r.h };
            if v.is_integer() {
                v.floor_i64()
            } else {
                None
            }
        })
        .collect()
}
