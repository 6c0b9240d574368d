//! Decides whether a lattice pierces every translate of a rectangle family.
//!
//! In the canonical frame every maximal empty rectangle, translated so a
//! lattice point sits on its left side at the origin, is bounded by the two
//! staircases of the funnel: the lower-left-most lattice points above the
//! x-axis (`upper`) and the upper-left-most ones on or below it (`lower`).
//! A sweep over both staircases lists these rectangles with increasing
//! width and non-increasing height. Rectangles without a left support
//! are horizontal or vertical strips, handled by line spacings.

use serde::Serialize;

use crate::error::Result;
use crate::family::{AxisTransform, Point, Rect, RectFamily};
use crate::lattice::{canonicalize, enumerate_points, gauss_reduce, metrics, CanonicalBasis, LatticeBasis};
use crate::periodic::{maximal_empty_rects, Window};
use crate::rational::{ExtendedLength, Rational};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Funnel {
    /// Increasing x, strictly decreasing y, all with `y > 0`.
    pub upper: Vec<Point>,
    /// Increasing x, strictly increasing y, all with `y <= 0`.
    pub lower: Vec<Point>,
    /// Board extent `k + 1`; the board is `[0, K] × [-K, K]`.
    pub board: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MaxRect {
    pub width: ExtendedLength,
    pub height: ExtendedLength,
    /// `None` is `+inf`.
    pub top: Option<Rational>,
    /// `None` is `-inf`.
    pub bottom: Option<Rational>,
    pub right_support: Option<Point>,
    pub top_support: Option<Point>,
    pub bottom_support: Option<Point>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum WitnessSource {
    MaxRect,
    HorizontalStrip,
    VerticalStrip,
}

/// A closed translate of `family[rect_index]` avoiding every lattice point,
/// in the input frame.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub rect_index: usize,
    pub rect: Rect,
    pub lower_left: Point,
    pub upper_right: Point,
    pub source: WitnessSource,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub canonical: CanonicalBasis,
    pub max_rects: Vec<MaxRect>,
    pub h_spacing: Rational,
    pub v_spacing: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PiercingVerdict {
    pub pierced: bool,
    pub area: Rational,
    pub witness: Option<Witness>,
    pub certificate: Certificate,
}

fn floor(r: &Rational) -> i64 {
    r.floor_i64().expect("coordinate range exceeds i64")
}

fn ceil(r: &Rational) -> i64 {
    r.ceil_i64().expect("coordinate range exceeds i64")
}

fn pareto(mut pts: Vec<Point>, upper: bool) -> Vec<Point> {
    pts.sort_by(|p, q| p.x.cmp(&q.x).then(if upper { p.y.cmp(&q.y) } else { q.y.cmp(&p.y) }));
    let mut out: Vec<Point> = Vec::new();
    for p in pts {
        let keep = match out.last() {
            None => true,
            Some(l) if upper => p.y < l.y,
            Some(l) => p.y > l.y,
        };
        if keep {
            out.push(p);
        }
    }
    out
}

/// Funnel of a canonical basis over the board `[0, k+1] × [-(k+1), k+1]`.
///
/// Each `u`-line contributes its first point in the open first quadrant and
/// each `v`-line its first point in `x > 0, y <= 0`; both are closed-form
/// in the line index.
pub fn build_funnel(cb: &CanonicalBasis, k: &Rational) -> Funnel {
    let b = &cb.basis;
    let (a, bb, c, d) = (&b.a, &b.b, &b.c, &b.d);
    let area = b.signed_area();
    let kk = k + 1;
    let (u, v) = (b.u(), b.v());
    let mut upper = Vec::new();
    for j in floor(&(-(a * &kk) / &area))..=ceil(&(bb * &kk / &area)) {
        let jc = c * j;
        let mut i = floor(&(&(d * j) / bb)) + 1;
        if a.is_positive() {
            i = i.max(floor(&(-&jc / a)) + 1);
        } else if !jc.is_positive() {
            continue;
        }
        let p = u.scale_int(i).add(&v.scale_int(j));
        if p.x <= kk && p.y <= kk {
            upper.push(p);
        }
    }
    let mut lower = Vec::new();
    let neg_kk = -&kk;
    for i in floor(&(-(c * &kk) / &area))..=ceil(&(d * &kk / &area)) {
        let (ia, ib) = (a * i, bb * i);
        let mut j = i64::MIN;
        if c.is_positive() {
            j = j.max(floor(&(-&ia / c)) + 1);
        } else if !ia.is_positive() {
            continue;
        }
        if d.is_positive() {
            j = j.max(ceil(&(&ib / d)));
        } else if ib.is_positive() {
            continue;
        }
        if j == i64::MIN {
            // c = d = 0 is degenerate.
            continue;
        }
        let p = u.scale_int(i).add(&v.scale_int(j));
        if p.x <= kk && p.y >= neg_kk {
            lower.push(p);
        }
    }
    Funnel { upper: pareto(upper, true), lower: pareto(lower, false), board: kk }
}

/// Reference funnel: every board point whose open diagonal rectangle with the
/// origin is empty, reduced to the two staircases. Quadratic in the number of
/// board points.
pub fn build_funnel_brute(cb: &CanonicalBasis, k: &Rational) -> Funnel {
    let kk = k + 1;
    let pts: Vec<Point> = enumerate_points(&cb.basis, (&Rational::ZERO, &kk), (&(-&kk), &kk))
        .into_iter()
        .map(|(p, _, _)| p)
        .filter(|p| p.x.is_positive())
        .collect();
    let empty_diag = |p: &Point| {
        !pts.iter().any(|q| {
            q.x < p.x
                && (if p.y.is_positive() { q.y.is_positive() && q.y < p.y } else { q.y.is_negative() && q.y > p.y })
        })
    };
    let (mut upper, mut lower) = (Vec::new(), Vec::new());
    for p in &pts {
        if empty_diag(p) {
            if p.y.is_positive() {
                upper.push(p.clone());
            } else {
                lower.push(p.clone());
            }
        }
    }
    Funnel { upper: pareto(upper, true), lower: pareto(lower, false), board: kk }
}

/// Sweeps both staircases by increasing x. One rectangle per distinct x of a
/// funnel point, plus a final one of infinite width.
pub fn maximal_rects(f: &Funnel) -> Vec<MaxRect> {
    let mut events: Vec<(&Point, bool)> =
        f.upper.iter().map(|p| (p, true)).chain(f.lower.iter().map(|p| (p, false))).collect();
    events.sort_by(|l, r| l.0.x.cmp(&r.0.x));
    let mut top: Option<(Rational, Point)> = None;
    let mut bot: Option<(Rational, Point)> = None;
    let height = |top: &Option<(Rational, Point)>, bot: &Option<(Rational, Point)>| match (top, bot) {
        (Some((t, _)), Some((b, _))) => ExtendedLength::Finite(t - b),
        _ => ExtendedLength::Inf,
    };
    let mut out = Vec::new();
    let mut idx = 0;
    while idx < events.len() {
        let x = events[idx].0.x.clone();
        let end = idx + events[idx..].iter().take_while(|e| e.0.x == x).count();
        let group = &events[idx..end];
        out.push(MaxRect {
            width: ExtendedLength::Finite(x.clone()),
            height: height(&top, &bot),
            top: top.as_ref().map(|t| t.0.clone()),
            bottom: bot.as_ref().map(|b| b.0.clone()),
            right_support: Some(group[0].0.clone()),
            top_support: top.as_ref().map(|t| t.1.clone()),
            bottom_support: bot.as_ref().map(|b| b.1.clone()),
        });
        for (p, is_upper) in group {
            if *is_upper {
                if top.as_ref().is_none_or(|t| p.y < t.0) {
                    top = Some((p.y.clone(), (*p).clone()));
                }
            } else if bot.as_ref().is_none_or(|b| p.y > b.0) {
                bot = Some((p.y.clone(), (*p).clone()));
            }
        }
        idx = end;
    }
    out.push(MaxRect {
        width: ExtendedLength::Inf,
        height: height(&top, &bot),
        top: top.as_ref().map(|t| t.0.clone()),
        bottom: bot.as_ref().map(|b| b.0.clone()),
        right_support: None,
        top_support: top.as_ref().map(|t| t.1.clone()),
        bottom_support: bot.as_ref().map(|b| b.1.clone()),
    });
    out
}

fn centered(lo: &Rational, hi: &Rational, len: &Rational) -> (Rational, Rational) {
    let start = (lo + hi - len) / 2;
    let end = &start + len;
    (start, end)
}

fn to_input_frame(t: &AxisTransform, idx: usize, rect: &Rect, p0: Point, p1: Point, source: WitnessSource) -> Witness {
    let inv = t.inverse();
    let (q0, q1) = (inv.apply(&p0), inv.apply(&p1));
    let lower_left = Point::new(q0.x.clone().min(q1.x.clone()), q0.y.clone().min(q1.y.clone()));
    let upper_right = Point::new(q0.x.max(q1.x), q0.y.max(q1.y));
    Witness { rect_index: idx, rect: rect.clone(), lower_left, upper_right, source }
}

/// Decision procedure against rectangles already expressed in the canonical
/// frame of `cb`. `rects` and `original` share indices; the witness is
/// reported in the input frame using `original`.
pub fn is_piercing_canonical(cb: &CanonicalBasis, rects: &[Rect], original: &[Rect]) -> PiercingVerdict {
    let k = rects.iter().flat_map(|r| [&r.w, &r.h]).max().expect("non-empty family").clone();
    let funnel = build_funnel(cb, &k);
    let max_rects = maximal_rects(&funnel);
    let m = metrics(cb);
    let kk = &funnel.board;
    let t = &cb.family_transform;
    let mut witness = None;

    // Horizontal lattice lines pass through the origin every g_h.
    if let Some((i, r)) = rects.iter().enumerate().filter(|(_, r)| r.h < m.h_spacing).min_by(|x, y| x.1.h.cmp(&y.1.h)) {
        let (y0, y1) = centered(&Rational::ZERO, &m.h_spacing, &r.h);
        let p0 = Point::new(Rational::ZERO, y0);
        let p1 = Point::new(r.w.clone(), y1);
        witness = Some(to_input_frame(t, i, &original[i], p0, p1, WitnessSource::HorizontalStrip));
    }
    if witness.is_none() {
        if let Some((i, r)) =
            rects.iter().enumerate().filter(|(_, r)| r.w < m.v_spacing).min_by(|x, y| x.1.w.cmp(&y.1.w))
        {
            let (x0, x1) = centered(&Rational::ZERO, &m.v_spacing, &r.w);
            let p0 = Point::new(x0, Rational::ZERO);
            let p1 = Point::new(x1, r.h.clone());
            witness = Some(to_input_frame(t, i, &original[i], p0, p1, WitnessSource::VerticalStrip));
        }
    }
    if witness.is_none() {
        for (i, r) in rects.iter().enumerate() {
            let pos = max_rects.partition_point(|mr| !mr.width.gt(&r.w));
            let Some(mr) = max_rects.get(pos) else { continue };
            if !mr.height.gt(&r.h) {
                continue;
            }
            let right = mr.width.finite().cloned().unwrap_or_else(|| kk.clone()).min(kk.clone());
            let top = mr.top.clone().unwrap_or_else(|| kk.clone());
            let bot = mr.bottom.clone().unwrap_or_else(|| -kk);
            let (x0, x1) = centered(&Rational::ZERO, &right, &r.w);
            let (y0, y1) = centered(&bot, &top, &r.h);
            witness = Some(to_input_frame(
                t,
                i,
                &original[i],
                Point::new(x0, y0),
                Point::new(x1, y1),
                WitnessSource::MaxRect,
            ));
            break;
        }
    }
    let area = cb.area();
    debug_assert!(
        witness.is_some() || rects.iter().all(|r| area <= r.area()),
        "area above the smallest rectangle area must leave a rectangle unpierced"
    );
    PiercingVerdict {
        pierced: witness.is_none(),
        area,
        witness,
        certificate: Certificate { canonical: cb.clone(), max_rects, h_spacing: m.h_spacing, v_spacing: m.v_spacing },
    }
}

/// Does the lattice of `basis` pierce every translate of every rectangle?
pub fn is_piercing(basis: &LatticeBasis, family: &RectFamily) -> Result<PiercingVerdict> {
    let cb = canonicalize(basis)?;
    let rects = family.map_rects(&cb.family_transform);
    Ok(is_piercing_canonical(&cb, &rects, family.rects()))
}

/// Checks a witness directly: the closed rectangle has the right size and
/// contains no lattice point.
pub fn witness_is_valid(basis: &LatticeBasis, family: &RectFamily, w: &Witness) -> bool {
    let Some(r) = family.rects().get(w.rect_index) else { return false };
    let dims_ok = &w.upper_right.x - &w.lower_left.x == r.w && &w.upper_right.y - &w.lower_left.y == r.h;
    dims_ok
        && enumerate_points(basis, (&w.lower_left.x, &w.upper_right.x), (&w.lower_left.y, &w.upper_right.y)).is_empty()
}

/// Brute-force verdict from all maximal empty rectangles of the lattice points
/// in a window covering a fundamental domain plus the largest rectangle.
/// Independent of canonicalization and of the funnel.
pub fn is_piercing_oracle(basis: &LatticeBasis, family: &RectFamily) -> Result<bool> {
    let red = gauss_reduce(basis)?;
    let (r1, r2) = (red.u(), red.v());
    let corners = [Point::origin(), r1.clone(), r2.clone(), r1.add(&r2)];
    let xmin = corners.iter().map(|p| &p.x).min().unwrap();
    let xmax = corners.iter().map(|p| &p.x).max().unwrap();
    let ymin = corners.iter().map(|p| &p.y).min().unwrap();
    let ymax = corners.iter().map(|p| &p.y).max().unwrap();
    let k = family.k();
    let window = Window { x0: xmin - 1, x1: xmax + k + 1, y0: ymin - 1, y1: ymax + k + 1 };
    let pts: Vec<Point> =
        enumerate_points(basis, (&window.x0, &window.x1), (&window.y0, &window.y1)).into_iter().map(|t| t.0).collect();
    let rects = maximal_empty_rects(&pts, &window);
    Ok(!rects.iter().any(|e| family.rects().iter().any(|r| e.width() > r.w && e.height() > r.h)))
}
