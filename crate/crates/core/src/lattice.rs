//! Lattice bases, reduction and the canonical form used by the decision
//! procedure.
//!
//! A basis is stored as `(a, b, c, d)` with `u = (a, b)` and `v = (c, -d)`.
//! The canonical form has `a, b, c, d >= 0`, `b > 0`, `u` a shortest vector
//! and `v` chosen on the `u`-line adjacent to the origin (clockwise side) so
//! that the angle between `u` and `v` lies in `[45°, 135°]`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{AxisTransform, Point, TransformKind};
use crate::rational::{rational_gcd, Rational};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct LatticeBasis {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl LatticeBasis {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> LatticeBasis {
        LatticeBasis { a, b, c, d }
    }

    /// From small integer fractions `(num, den)` in `a, b, c, d` order.
    pub fn from_fracs(v: [(i64, i64); 4]) -> LatticeBasis {
        let r = |(n, d): (i64, i64)| Rational::new(n, d);
        LatticeBasis::new(r(v[0]), r(v[1]), r(v[2]), r(v[3]))
    }

    pub fn from_vectors(u: &Point, v: &Point) -> LatticeBasis {
        LatticeBasis::new(u.x.clone(), u.y.clone(), v.x.clone(), -&v.y)
    }

    pub fn u(&self) -> Point {
        Point::new(self.a.clone(), self.b.clone())
    }

    pub fn v(&self) -> Point {
        Point::new(self.c.clone(), -&self.d)
    }

    /// `a·d + b·c`, positive for canonical bases.
    pub fn signed_area(&self) -> Rational {
        &self.a * &self.d + &self.b * &self.c
    }

    pub fn area(&self) -> Rational {
        self.signed_area().abs()
    }

    pub fn is_degenerate(&self) -> bool {
        self.signed_area().is_zero()
    }

    pub fn point(&self, i: i64, j: i64) -> Point {
        self.u().scale_int(i).add(&self.v().scale_int(j))
    }

    /// Lattice coordinates of `p`, if `p` is a lattice point.
    pub fn coords(&self, p: &Point) -> Option<(i64, i64)> {
        let (u, v) = (self.u(), self.v());
        let det = u.cross(&v);
        if det.is_zero() {
            return None;
        }
        let i = p.cross(&v) / &det;
        let j = u.cross(p) / &det;
        if i.is_integer() && j.is_integer() {
            Some((i.floor_i64()?, j.floor_i64()?))
        } else {
            None
        }
    }

    pub fn transformed(&self, t: &AxisTransform) -> LatticeBasis {
        LatticeBasis::from_vectors(&t.apply(&self.u()), &t.apply(&self.v()))
    }

    pub fn to_array(&self) -> [Rational; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// Parses `a b c d` or `u=(ux,uy) v=(vx,vy)`.
pub fn parse_basis(text: &str) -> Result<LatticeBasis> {
    let t = text.trim();
    if t.contains('=') {
        let grab = |key: &str| -> Result<Point> {
            let start =
                t.find(&format!("{key}=")).ok_or_else(|| Error::Parse(format!("missing `{key}=` in {text:?}")))?;
            let rest = &t[start + key.len() + 1..];
            let open = rest.find('(').ok_or_else(|| Error::Parse(format!("missing `(` after {key}=")))?;
            let close = rest.find(')').ok_or_else(|| Error::Parse(format!("missing `)` after {key}=")))?;
            let inner = &rest[open + 1..close];
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() != 2 {
                return Err(Error::Parse(format!("{key} must have two coordinates")));
            }
            Ok(Point::new(parts[0].parse()?, parts[1].parse()?))
        };
        let b = LatticeBasis::from_vectors(&grab("u")?, &grab("v")?);
        return Ok(b);
    }
    let parts: Vec<&str> = t.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("expected four rationals `a b c d`, got {text:?}")));
    }
    Ok(LatticeBasis::new(parts[0].parse()?, parts[1].parse()?, parts[2].parse()?, parts[3].parse()?))
}

/// Lagrange reduction: first vector shortest, second shortest among the
/// vectors independent of it.
pub fn gauss_reduce(basis: &LatticeBasis) -> Result<LatticeBasis> {
    if basis.is_degenerate() {
        return Err(Error::DegenerateBasis);
    }
    let (mut r1, mut r2) = (basis.u(), basis.v());
    if r2.norm2() < r1.norm2() {
        std::mem::swap(&mut r1, &mut r2);
    }
    loop {
        let m = Rational::from(r1.dot(&r2).checked_div(&r1.norm2())?.round_half_up());
        if !m.is_zero() {
            r2 = r2.sub(&r1.scale(&m));
        }
        if r2.norm2() < r1.norm2() {
            std::mem::swap(&mut r1, &mut r2);
        } else {
            break;
        }
    }
    Ok(LatticeBasis::from_vectors(&r1, &r2))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CanonicalBasis {
    pub basis: LatticeBasis,
    /// `|u|²`.
    pub lambda2: Rational,
    /// Squared distance between consecutive `u`-lines, `A²/λ²`.
    pub mu2: Rational,
    /// Maps the input frame to the canonical frame.
    pub family_transform: AxisTransform,
}

impl CanonicalBasis {
    pub fn area(&self) -> Rational {
        self.basis.signed_area()
    }

    /// Every canonical-form property that fails, as a readable list.
    pub fn violations(&self) -> Vec<String> {
        let b = &self.basis;
        let mut out = Vec::new();
        let (u, v) = (b.u(), b.v());
        let a = self.area();
        if b.a.is_negative() || b.c.is_negative() || b.d.is_negative() || !b.b.is_positive() {
            out.push(format!("sign pattern violated by {b}"));
        }
        if !a.is_positive() {
            out.push("non-positive area".into());
        }
        let v2 = v.norm2();
        if v2 < self.lambda2 || u.add(&v).norm2() < self.lambda2 || u.sub(&v).norm2() < self.lambda2 {
            out.push("u is not a shortest vector".into());
        }
        let uv = u.dot(&v);
        if uv.square() * 2 > &self.lambda2 * &v2 {
            out.push("angle between u and v outside [45°, 135°]".into());
        }
        if v2 > &self.lambda2 + &self.mu2 {
            out.push("|v|² exceeds λ² + μ²".into());
        }
        if self.lambda2.square() * 3 > a.square() * 4 {
            out.push("3λ⁴ > 4A²".into());
        }
        if &self.lambda2 * 3 > &self.mu2 * 4 {
            out.push("λ² > (4/3)μ²".into());
        }
        out
    }

    /// The basis properties established for optimal piercing lattices with
    /// `A >= 1`: `λ² >= 1/4` and `|v|² <= (7/3)·A²/λ²`.
    pub fn optimal_shape_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if &self.lambda2 * 4 < Rational::ONE {
            out.push("λ² < 1/4".into());
        }
        let v2 = self.basis.v().norm2();
        if &v2 * &self.lambda2 * 3 > self.area().square() * 7 {
            out.push("|v|² > (7/3)·A²/λ²".into());
        }
        out
    }
}

impl fmt::Display for CanonicalBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis)
    }
}

fn rank(kind: TransformKind) -> u8 {
    match kind {
        TransformKind::Identity => 0,
        TransformKind::ReflectX => 1,
        TransformKind::Rotate90 => 2,
        _ => 3,
    }
}

/// Orientation that sends a shortest vector `s` into the closed first
/// quadrant with positive `y`, and the image with that orientation.
fn orient(s: &Point) -> (AxisTransform, Point) {
    let t = if s.y.is_zero() {
        AxisTransform::rotate90()
    } else if s.x.is_zero() || s.x.signum() == s.y.signum() {
        AxisTransform::identity()
    } else {
        AxisTransform::reflect_x()
    };
    let img = t.apply(s);
    let img = if img.y.is_negative() { img.neg() } else { img };
    (t, img)
}

/// Picks `v` on the line `w + i·u` (`u = (a, b)`, `b > 0`, `w` clockwise of
/// `u`) among the points in the quadrant `x >= 0, y <= 0`.
fn choose_v(u: &Point, w: &Point) -> Point {
    let (a, b) = (&u.x, &u.y);
    let i_max = (-&w.y / b).floor();
    if a.is_zero() {
        return w.add(&u.scale(&Rational::from(i_max)));
    }
    let i_min = (-&w.x / a).ceil();
    let t_star = -w.dot(u) / u.norm2();
    let i = if b < a { t_star.floor() } else { t_star.ceil() };
    let i = i.max(i_min).min(i_max);
    w.add(&u.scale(&Rational::from(i)))
}

/// Canonical basis of the lattice, up to the recorded reflection/rotation.
pub fn canonicalize(basis: &LatticeBasis) -> Result<CanonicalBasis> {
    let red = gauss_reduce(basis)?;
    let (r1, r2) = (red.u(), red.v());
    let lambda2 = r1.norm2();
    // (shortest vector, completing vector) pairs, up to sign.
    let mut cands = vec![(r1.clone(), r2.clone())];
    if r2.norm2() == lambda2 {
        cands.push((r2.clone(), r1.clone()));
    }
    for s in [r1.add(&r2), r1.sub(&r2)] {
        if s.norm2() == lambda2 {
            cands.push((s, r1.clone()));
        }
    }
    let mut best: Option<(u8, LatticeBasis, AxisTransform)> = None;
    for (s, w) in cands {
        let (t, u) = orient(&s);
        let mut w = t.apply(&w);
        if u.cross(&w).is_positive() {
            w = w.neg();
        }
        let v = choose_v(&u, &w);
        let cand = LatticeBasis::from_vectors(&u, &v);
        let r = rank(t.kind());
        let better = match &best {
            None => true,
            Some((br, bb, _)) => (r, &cand.a, &cand.b, &cand.c, &cand.d) < (*br, &bb.a, &bb.b, &bb.c, &bb.d),
        };
        if better {
            best = Some((r, cand, t));
        }
    }
    let (_, basis, family_transform) = best.expect("at least one shortest vector");
    let area = basis.signed_area();
    let mu2 = area.square() / &lambda2;
    Ok(CanonicalBasis { basis, lambda2, mu2, family_transform })
}

/// True when `basis` is already the canonical representative of its lattice
/// with no reorientation.
pub fn is_canonical(basis: &LatticeBasis) -> bool {
    match canonicalize(basis) {
        Ok(cb) => cb.basis == *basis && cb.family_transform.is_identity(),
        Err(_) => false,
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LatticeMetrics {
    pub area: Rational,
    /// Gap between consecutive horizontal lattice lines.
    pub h_spacing: Rational,
    /// Gap between consecutive vertical lattice lines.
    pub v_spacing: Rational,
}

pub fn metrics(cb: &CanonicalBasis) -> LatticeMetrics {
    basis_metrics(&cb.basis)
}

/// Metrics of any non-degenerate basis; spacings use absolute coordinates.
pub fn basis_metrics(b: &LatticeBasis) -> LatticeMetrics {
    LatticeMetrics {
        area: b.area(),
        h_spacing: rational_gcd(&b.b.abs(), &b.d.abs()).expect("independent basis"),
        v_spacing: rational_gcd(&b.a.abs(), &b.c.abs()).expect("independent basis"),
    }
}

/// Lattice points `i·u + j·v` in the closed box, with their coefficients,
/// sorted by `(x, y)`.
pub fn enumerate_points(
    basis: &LatticeBasis,
    x_range: (&Rational, &Rational),
    y_range: (&Rational, &Rational),
) -> Vec<(Point, i64, i64)> {
    let (x0, x1) = x_range;
    let (y0, y1) = y_range;
    if x0 > x1 || y0 > y1 || basis.is_degenerate() {
        return Vec::new();
    }
    let (u, v) = (basis.u(), basis.v());
    let det = u.cross(&v);
    let corners = [
        Point::new(x0.clone(), y0.clone()),
        Point::new(x0.clone(), y1.clone()),
        Point::new(x1.clone(), y0.clone()),
        Point::new(x1.clone(), y1.clone()),
    ];
    let is: Vec<Rational> = corners.iter().map(|p| p.cross(&v) / &det).collect();
    let js: Vec<Rational> = corners.iter().map(|p| u.cross(p) / &det).collect();
    let span = |vals: &[Rational]| -> (i64, i64) {
        let lo = vals.iter().min().unwrap().floor_i64().expect("box too large");
        let hi = vals.iter().max().unwrap().ceil_i64().expect("box too large");
        (lo, hi)
    };
    let (i_lo, i_hi) = span(&is);
    let (j_lo, j_hi) = span(&js);
    let mut out = Vec::new();
    for j in j_lo..=j_hi {
        let base = v.scale_int(j);
        for i in i_lo..=i_hi {
            let p = base.add(&u.scale_int(i));
            if &p.x >= x0 && &p.x <= x1 && &p.y >= y0 && &p.y <= y1 {
                out.push((p, i, j));
            }
        }
    }
    out.sort_by(|l, r| l.0.cmp(&r.0));
    out
}
