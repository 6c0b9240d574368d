//! Sound caps on `|i| + |j|` for tight constraints `i·a + j·c = w` and
//! `i·b + j·d = h`.
//!
//! A tight constraint joins two lattice points on opposite sides of a
//! placement of `R = w × h`, so the lattice vector `i·u + j·v` has length at
//! most `diag(R)`. Walking `|i|` steps of `u` then `|j|` steps of `v` makes a
//! triangle whose angle at the joint lies in `[45°, 135°]`, hence
//!
//! * `|i|λ + |j||v| <= diag / sin 22.5°`, and
//! * `s₁² + s₂² - √2·s₁s₂ <= diag²` with `s₁ = |i|λ`, `s₂ = |j||v|`.
//!
//! `λ` and `|v|` are confined by the area window `[aLo, aHi]`. A split
//! `(|i|, |j|)` is discarded only when interval bisection over `λ` proves
//! one of the inequalities fails everywhere; rational outward enclosures make
//! every discard safe.

use serde::Serialize;

use crate::family::RectFamily;
use crate::rational::Rational;

const SQRT_BITS: u32 = 48;
const BISECT_DEPTH: u32 = 10;

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CoefficientBounds {
    /// Cap on `|i| + |j|` for rectangle `s`, identical for both axes.
    pub per_rect: Vec<u32>,
    pub lambda_lo_sq: Rational,
    pub lambda_hi_sq: Rational,
    /// Upper bound on `|v|²` over the admissible window.
    pub v_hi_sq: Rational,
    pub a_lo: Rational,
    pub a_hi: Rational,
}

impl CoefficientBounds {
    pub fn max_sum(&self) -> u32 {
        self.per_rect.iter().copied().max().unwrap_or(0)
    }

    /// Each cap replaced by `min(cap, limit)`.
    pub fn capped(&self, limit: u32) -> CoefficientBounds {
        let mut b = self.clone();
        for m in &mut b.per_rect {
            *m = (*m).min(limit);
        }
        b
    }

    pub fn scaled(&self, factor: u32) -> CoefficientBounds {
        let mut b = self.clone();
        for m in &mut b.per_rect {
            *m *= factor;
        }
        b
    }
}

struct Consts {
    sqrt2_hi: Rational,
    inv_sqrt2_lo: Rational,
    inv_sqrt2_hi: Rational,
    sqrt73_hi: Rational,
}

impl Consts {
    fn new() -> Consts {
        let (_, s2hi) = Rational::from_int(2).sqrt_bounds(SQRT_BITS);
        let (i2lo, i2hi) = Rational::new(1, 2).sqrt_bounds(SQRT_BITS);
        let (_, s73hi) = Rational::new(7, 3).sqrt_bounds(SQRT_BITS);
        Consts { sqrt2_hi: s2hi, inv_sqrt2_lo: i2lo, inv_sqrt2_hi: i2hi, sqrt73_hi: s73hi }
    }
}

fn sqrt_lo(x: &Rational) -> Rational {
    x.sqrt_bounds(SQRT_BITS).0
}

fn sqrt_hi(x: &Rational) -> Rational {
    x.sqrt_bounds(SQRT_BITS).1
}

/// `|v|` range for `λ ∈ [l0, l1]`: `max(λ, aLo/λ) <= |v| <= min(√(λ² + μmax²), √(7/3)·aHi/λ)`.
fn v_range(
    l0: &Rational,
    l1: &Rational,
    a_lo: &Rational,
    a_hi: &Rational,
    mu_max2: &Rational,
    c: &Consts,
) -> (Rational, Rational) {
    let lo = l0.clone().max(a_lo / l1);
    let hi = sqrt_hi(&(l1.square() + mu_max2)).min(&c.sqrt73_hi * a_hi / l0);
    (lo, hi)
}

struct Split<'a> {
    i: Rational,
    j: Rational,
    diag2: &'a Rational,
    path2: &'a Rational,
    a_lo: &'a Rational,
    a_hi: &'a Rational,
    mu_max2: &'a Rational,
}

impl Split<'_> {
    /// True unless infeasibility is proved on `[l0, l1]`.
    fn feasible(&self, l0: &Rational, l1: &Rational, depth: u32, c: &Consts) -> bool {
        if !self.refuted(l0, l1, c) {
            if depth == 0 {
                return true;
            }
            let mid = (l0 + l1) / 2;
            return self.feasible(l0, &mid, depth - 1, c) || self.feasible(&mid, l1, depth - 1, c);
        }
        false
    }

    fn refuted(&self, l0: &Rational, l1: &Rational, c: &Consts) -> bool {
        let (t0, t1) = v_range(l0, l1, self.a_lo, self.a_hi, self.mu_max2, c);
        if t0 > t1 {
            return true;
        }
        let (s1lo, s1hi) = (&self.i * l0, &self.i * l1);
        let (s2lo, s2hi) = (&self.j * &t0, &self.j * &t1);
        if (&s1lo + &s2lo).square() > *self.path2 {
            return true;
        }
        // s₁² + s₂² - √2 s₁s₂ = (s₂ - s₁/√2)² + s₁²/2 = (s₁ - s₂/√2)² + s₂²/2.
        let gap = |lo: &Rational, hi: &Rational, olo: &Rational, ohi: &Rational| -> Rational {
            let g1 = lo - &(ohi * &c.inv_sqrt2_hi);
            let g2 = &(olo * &c.inv_sqrt2_lo) - hi;
            Rational::ZERO.max(g1).max(g2)
        };
        let lb1 = s1lo.square() / 2 + gap(&s2lo, &s2hi, &s1lo, &s1hi).square();
        let lb2 = s2lo.square() / 2 + gap(&s1lo, &s1hi, &s2lo, &s2hi).square();
        lb1.max(lb2) > *self.diag2
    }
}

/// Coefficient caps for every rectangle given `A ∈ [a_lo, A_min]`.
pub fn coefficient_bounds(family: &RectFamily, a_lo: &Rational) -> CoefficientBounds {
    let c = Consts::new();
    let a_hi = family.a_min().clone();
    let mu_max2 = family.min_diag2().clone();
    let lambda_lo_sq = Rational::new(1, 4).max(a_lo.square() / &mu_max2);
    // λ² <= 2A/√3, i.e. 3λ⁴ <= 4A².
    let lambda_hi_sq = sqrt_hi(&(a_hi.square() * 4 / 3));
    let l0 = sqrt_lo(&lambda_lo_sq);
    let l1 = sqrt_hi(&lambda_hi_sq);
    let v_hi_sq = (a_hi.square() * 7 / 3 / &lambda_lo_sq).min(&lambda_hi_sq + &mu_max2);
    // 1/sin²(22.5°) = 4 + 2√2.
    let path_factor = Rational::from_int(4) + &c.sqrt2_hi * 2;
    let mut per_rect = Vec::with_capacity(family.len());
    for r in family.rects() {
        let diag2 = r.diag2();
        let path2 = &diag2 * &path_factor;
        let m_cap = (sqrt_hi(&path2) / &l0).floor_i64().unwrap_or(0).max(1) as u32 + 1;
        let mut best = 1;
        for m in 1..=m_cap {
            let any = (0..=m).any(|i| {
                let split = Split {
                    i: Rational::from_int(i as i64),
                    j: Rational::from_int((m - i) as i64),
                    diag2: &diag2,
                    path2: &path2,
                    a_lo,
                    a_hi: &a_hi,
                    mu_max2: &mu_max2,
                };
                split.feasible(&l0, &l1, BISECT_DEPTH, &c)
            });
            if any {
                best = m;
            }
        }
        per_rect.push(best);
    }
    CoefficientBounds { per_rect, lambda_lo_sq, lambda_hi_sq, v_hi_sq, a_lo: a_lo.clone(), a_hi }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{f0, f1};
    use crate::rational::q;

    #[test]
    fn f0_caps_at_known_lattice_area() {
        let b = coefficient_bounds(&f0(), &q(31, 6));
        assert_eq!(b.per_rect[0], 8);
        assert_eq!(b.per_rect[1], 8);
        assert!(b.per_rect[2] <= 6);
    }

    #[test]
    fn looser_area_gives_looser_caps() {
        let tight = coefficient_bounds(&f0(), &q(31, 6));
        let loose = coefficient_bounds(&f0(), &q(3, 1));
        for (t, l) in tight.per_rect.iter().zip(&loose.per_rect) {
            assert!(l >= t);
        }
        // Outward enclosure of the exact bound 3λ⁴ = 4A².
        assert!(tight.lambda_hi_sq.square() * 3 >= tight.a_hi.square() * 4);
        assert!(tight.lambda_hi_sq.square() * 3 <= tight.a_hi.square() * 4 + q(1, 1 << 40));
    }

    #[test]
    fn f1_caps() {
        let b = coefficient_bounds(&f1(), &q(5, 1));
        assert_eq!(&b.per_rect[..2], &[8, 8]);
        assert!(b.per_rect[2..].iter().all(|&m| m <= 6));
    }
}
