//! Planar primitives, axis transforms and normalized rectangle families.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Point {
        Point { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Point {
        Point::new(x.into(), y.into())
    }

    pub fn origin() -> Point {
        Point::new(Rational::ZERO, Rational::ZERO)
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, s: &Rational) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn scale_int(&self, s: i64) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn dot(&self, o: &Point) -> Rational {
        &self.x * &o.x + &self.y * &o.y
    }

    /// z-component of `self × o`.
    pub fn cross(&self, o: &Point) -> Rational {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm2(&self) -> Rational {
        self.dot(self)
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Rect {
    pub w: Rational,
    pub h: Rational,
}

impl Rect {
    pub fn new(w: Rational, h: Rational) -> Rect {
        Rect { w, h }
    }

    pub fn ints(w: i64, h: i64) -> Rect {
        Rect::new(w.into(), h.into())
    }

    pub fn area(&self) -> Rational {
        &self.w * &self.h
    }

    pub fn diag2(&self) -> Rational {
        self.w.square() + self.h.square()
    }

    pub fn swapped(&self) -> Rect {
        Rect::new(self.h.clone(), self.w.clone())
    }

    /// `self` fits inside `other` (weakly, both dimensions). Piercing every
    /// translate of `self` then pierces every translate of `other`.
    pub fn dominated_by(&self, other: &Rect) -> bool {
        self.w <= other.w && self.h <= other.h
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.w.to_short_string(), self.h.to_short_string())
    }
}

/// An element of the dihedral group of the square (signed permutation
/// matrix `k`) followed by positive axis scales: `p -> diag(sx, sy)·k·p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AxisTransform {
    k: [[i8; 2]; 2],
    pub scale_x: Rational,
    pub scale_y: Rational,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum TransformKind {
    Identity,
    ReflectX,
    Rotate90,
    Rotate90ReflectX,
    Other,
}

const ID: [[i8; 2]; 2] = [[1, 0], [0, 1]];

fn matmul(a: [[i8; 2]; 2], b: [[i8; 2]; 2]) -> [[i8; 2]; 2] {
    let mut r = [[0i8; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

fn transpose(a: [[i8; 2]; 2]) -> [[i8; 2]; 2] {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

impl AxisTransform {
    fn from_k(k: [[i8; 2]; 2]) -> AxisTransform {
        AxisTransform { k, scale_x: Rational::ONE, scale_y: Rational::ONE }
    }

    pub fn identity() -> AxisTransform {
        Self::from_k(ID)
    }

    /// `x -> -x`.
    pub fn reflect_x() -> AxisTransform {
        Self::from_k([[-1, 0], [0, 1]])
    }

    /// Counter-clockwise quarter turn.
    pub fn rotate90() -> AxisTransform {
        Self::from_k([[0, -1], [1, 0]])
    }

    /// `rotate90 ∘ reflect_x`: `(x, y) -> (-y, -x)`.
    pub fn rotate90_reflect_x() -> AxisTransform {
        Self::rotate90().compose(&Self::reflect_x())
    }

    /// Swap of the axes: `(x, y) -> (y, x)`.
    pub fn transpose() -> AxisTransform {
        Self::from_k([[0, 1], [1, 0]])
    }

    pub fn reflect_y() -> AxisTransform {
        Self::from_k([[1, 0], [0, -1]])
    }

    pub fn scaling(sx: Rational, sy: Rational) -> AxisTransform {
        assert!(sx.is_positive() && sy.is_positive(), "scales must be positive");
        AxisTransform { k: ID, scale_x: sx, scale_y: sy }
    }

    pub fn kind(&self) -> TransformKind {
        match self.k {
            [[1, 0], [0, 1]] => TransformKind::Identity,
            [[-1, 0], [0, 1]] => TransformKind::ReflectX,
            [[0, -1], [1, 0]] => TransformKind::Rotate90,
            [[0, -1], [-1, 0]] => TransformKind::Rotate90ReflectX,
            _ => TransformKind::Other,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.k == ID && self.scale_x == Rational::ONE && self.scale_y == Rational::ONE
    }

    pub fn has_unit_scales(&self) -> bool {
        self.scale_x == Rational::ONE && self.scale_y == Rational::ONE
    }

    /// True when the linear part exchanges the axes.
    pub fn swaps_axes(&self) -> bool {
        self.k[0][0] == 0
    }

    pub fn apply(&self, p: &Point) -> Point {
        let m = |r: [i8; 2]| -> Rational {
            let mut acc = Rational::ZERO;
            if r[0] != 0 {
                acc += &p.x * r[0] as i64;
            }
            if r[1] != 0 {
                acc += &p.y * r[1] as i64;
            }
            acc
        };
        Point::new(&self.scale_x * m(self.k[0]), &self.scale_y * m(self.k[1]))
    }

    /// Image of an axis-parallel `w × h` rectangle (dimensions only).
    pub fn apply_rect(&self, r: &Rect) -> Rect {
        let (w, h) = if self.swaps_axes() { (&r.h, &r.w) } else { (&r.w, &r.h) };
        Rect::new(&self.scale_x * w, &self.scale_y * h)
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &AxisTransform) -> AxisTransform {
        let (fx, fy) =
            if self.swaps_axes() { (&first.scale_y, &first.scale_x) } else { (&first.scale_x, &first.scale_y) };
        AxisTransform { k: matmul(self.k, first.k), scale_x: &self.scale_x * fx, scale_y: &self.scale_y * fy }
    }

    pub fn inverse(&self) -> AxisTransform {
        // (D·K)^-1 = K^T·D^-1 = (K^T D^-1 K)·K^T.
        let kt = transpose(self.k);
        let (sx, sy) = (self.scale_x.recip(), self.scale_y.recip());
        let (sx, sy) = if self.swaps_axes() { (sy, sx) } else { (sx, sy) };
        AxisTransform { k: kt, scale_x: sx, scale_y: sy }
    }
}

impl fmt::Display for AxisTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.kind())?;
        if !self.has_unit_scales() {
            write!(f, " scale=({}, {})", self.scale_x, self.scale_y)?;
        }
        Ok(())
    }
}

impl Serialize for AxisTransform {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AxisTransform", 4)?;
        st.serialize_field("kind", &self.kind())?;
        st.serialize_field("matrix", &self.k)?;
        st.serialize_field("scaleX", &self.scale_x)?;
        st.serialize_field("scaleY", &self.scale_y)?;
        st.end()
    }
}

/// A normalized family: min width = min height = 1, no rectangle contained
/// in another, order of first appearance preserved.
#[derive(Clone, Debug, Serialize)]
pub struct RectFamily {
    rects: Vec<Rect>,
    k: Rational,
    a_min: Rational,
    #[serde(skip)]
    min_diag2: Rational,
}

impl PartialEq for RectFamily {
    fn eq(&self, other: &Self) -> bool {
        self.sorted_rects() == other.sorted_rects()
    }
}

impl Eq for RectFamily {}

fn validate(raw: &[Rect]) -> Result<()> {
    if raw.is_empty() {
        return Err(Error::EmptyFamily);
    }
    for r in raw {
        if !r.w.is_positive() || !r.h.is_positive() {
            return Err(Error::NonPositiveDimension(r.w.to_string(), r.h.to_string()));
        }
    }
    Ok(())
}

fn antichain(raw: &[Rect]) -> Vec<Rect> {
    let mut uniq: Vec<Rect> = Vec::with_capacity(raw.len());
    for r in raw {
        if !uniq.contains(r) {
            uniq.push(r.clone());
        }
    }
    uniq.iter()
        .enumerate()
        // A rectangle containing another is pierced whenever the smaller one is.
        .filter(|(i, r)| !uniq.iter().enumerate().any(|(j, s)| j != *i && s.dominated_by(r)))
        .map(|(_, r)| r.clone())
        .collect()
}

impl RectFamily {
    /// Builds a family that must already be normalized.
    pub fn new(rects: Vec<Rect>) -> Result<RectFamily> {
        let (f, t) = normalize_family(&rects)?;
        if !t.is_identity() || f.rects.len() != rects.len() {
            return Err(Error::Parse(
                "family is not normalized (min width/height must be 1, no contained rectangles)".into(),
            ));
        }
        Ok(f)
    }

    pub fn from_ints(dims: &[(i64, i64)]) -> Result<RectFamily> {
        Self::new(dims.iter().map(|&(w, h)| Rect::ints(w, h)).collect())
    }

    fn from_antichain(rects: Vec<Rect>) -> RectFamily {
        let k = rects.iter().flat_map(|r| [&r.w, &r.h]).max().unwrap().clone();
        let a_min = rects.iter().map(Rect::area).min().unwrap();
        let min_diag2 = rects.iter().map(Rect::diag2).min().unwrap();
        RectFamily { rects, k, a_min, min_diag2 }
    }

    pub fn rects(&self) -> &[Rect] {
        &self.rects
    }

    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// Largest side length over all rectangles.
    pub fn k(&self) -> &Rational {
        &self.k
    }

    /// Smallest rectangle area; an upper bound on any piercing lattice's area.
    pub fn a_min(&self) -> &Rational {
        &self.a_min
    }

    pub fn min_diag2(&self) -> &Rational {
        &self.min_diag2
    }

    pub fn is_integer(&self) -> bool {
        self.rects.iter().all(|r| r.w.is_integer() && r.h.is_integer())
    }

    pub fn sorted_rects(&self) -> Vec<Rect> {
        let mut v = self.rects.clone();
        v.sort();
        v
    }

    /// Invariant under exchanging widths and heights.
    pub fn swap_symmetric(&self) -> bool {
        *self == transform_family(self, &AxisTransform::rotate90())
    }

    /// `w₁×h₁, w₂×h₂, …` in family order.
    pub fn describe(&self) -> String {
        self.rects.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
    }

    /// Rectangles mapped one-by-one, index order preserved.
    pub fn map_rects(&self, t: &AxisTransform) -> Vec<Rect> {
        self.rects.iter().map(|r| t.apply_rect(r)).collect()
    }
}

impl fmt::Display for RectFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.describe())
    }
}

/// Scales so the smallest width and height are 1, then drops duplicates and
/// contained rectangles. The transform maps raw to normalized coordinates.
pub fn normalize_family(raw: &[Rect]) -> Result<(RectFamily, AxisTransform)> {
    validate(raw)?;
    let min_w = raw.iter().map(|r| &r.w).min().unwrap();
    let min_h = raw.iter().map(|r| &r.h).min().unwrap();
    let t = AxisTransform::scaling(min_w.recip(), min_h.recip());
    let scaled: Vec<Rect> = raw.iter().map(|r| t.apply_rect(r)).collect();
    Ok((RectFamily::from_antichain(antichain(&scaled)), t))
}

/// Applies a (typically unit-scale) transform and re-normalizes for dominance.
pub fn transform_family(f: &RectFamily, t: &AxisTransform) -> RectFamily {
    RectFamily::from_antichain(antichain(&f.map_rects(t)))
}

/// Parses `<w> <h>` lines; `#` starts a comment.
pub fn parse_rects(text: &str) -> Result<Vec<Rect>> {
    let mut out = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!("line {}: expected `<w> <h>`", no + 1)));
        }
        let w: Rational = fields[0].parse().map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        let h: Rational = fields[1].parse().map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        out.push(Rect::new(w, h));
    }
    Ok(out)
}

/// Parses and normalizes a family file.
pub fn parse_family(text: &str) -> Result<(RectFamily, AxisTransform)> {
    normalize_family(&parse_rects(text)?)
}

/// `{6×1, 1×6, 3×3}`.
pub fn f0() -> RectFamily {
    RectFamily::from_ints(&[(6, 1), (1, 6), (3, 3)]).unwrap()
}

/// `F0 ∪ {4×2, 2×4}`.
pub fn f1() -> RectFamily {
    RectFamily::from_ints(&[(6, 1), (1, 6), (3, 3), (4, 2), (2, 4)]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn fam(dims: &[(i64, i64)]) -> Vec<Rect> {
        dims.iter().map(|&(w, h)| Rect::ints(w, h)).collect()
    }

    #[test]
    fn normalize_examples() {
        let (f, t) = normalize_family(&fam(&[(6, 1), (1, 6), (3, 3)])).unwrap();
        assert_eq!(f, f0());
        assert!(t.is_identity());

        let (f, t) = normalize_family(&fam(&[(12, 2), (2, 12), (6, 6)])).unwrap();
        assert_eq!(f, f0());
        assert_eq!((t.scale_x.clone(), t.scale_y.clone()), (q(1, 2), q(1, 2)));

        let (f, _) = normalize_family(&fam(&[(6, 1), (1, 6), (3, 3), (4, 1)])).unwrap();
        assert_eq!(f.rects(), &[Rect::ints(1, 6), Rect::ints(3, 3), Rect::ints(4, 1)]);
        let (f, _) = normalize_family(&fam(&[(6, 1), (1, 6), (3, 3), (7, 1), (3, 4)])).unwrap();
        assert_eq!(f, f0());

        let (f, t) = normalize_family(&fam(&[(1, 1)])).unwrap();
        assert_eq!(f.rects(), &[Rect::ints(1, 1)]);
        assert!(t.is_identity());
        assert_eq!((f.k().clone(), f.a_min().clone()), (q(1, 1), q(1, 1)));
    }

    #[test]
    fn normalize_errors() {
        assert_eq!(normalize_family(&[]).unwrap_err(), Error::EmptyFamily);
        assert!(matches!(normalize_family(&[Rect::new(q(0, 1), q(1, 1))]), Err(Error::NonPositiveDimension(..))));
    }

    #[test]
    fn duplicates_collapse() {
        let (f, _) = normalize_family(&fam(&[(2, 1), (2, 1), (1, 2)])).unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn transform_examples() {
        let rot = AxisTransform::rotate90();
        assert_eq!(transform_family(&f0(), &rot), f0());
        assert_eq!(transform_family(&f1(), &rot), f1());
        assert_eq!(rot.apply_rect(&Rect::ints(4, 2)), Rect::ints(2, 4));
        let fam = RectFamily::from_ints(&[(4, 1), (1, 2)]).unwrap();
        assert_eq!(transform_family(&fam, &rot).rects(), &[Rect::ints(1, 4), Rect::ints(2, 1)]);
        assert_eq!(transform_family(&f1(), &AxisTransform::reflect_x()).rects(), f1().rects());
        assert!(f0().swap_symmetric() && f1().swap_symmetric());
    }

    #[test]
    fn transform_group_laws() {
        let gens = [
            AxisTransform::identity(),
            AxisTransform::reflect_x(),
            AxisTransform::rotate90(),
            AxisTransform::rotate90_reflect_x(),
            AxisTransform::scaling(q(2, 3), q(5, 1)),
            AxisTransform::rotate90().compose(&AxisTransform::scaling(q(1, 7), q(3, 2))),
        ];
        let p = Point::new(q(3, 4), q(-5, 2));
        for a in &gens {
            assert_eq!(a.inverse().apply(&a.apply(&p)), p);
            assert!(a.compose(&a.inverse()).is_identity());
            for b in &gens {
                assert_eq!(a.compose(b).apply(&p), a.apply(&b.apply(&p)));
                for c in &gens {
                    assert_eq!(a.compose(b).compose(c), a.compose(&b.compose(c)));
                }
            }
        }
        assert_eq!(AxisTransform::rotate90_reflect_x().kind(), TransformKind::Rotate90ReflectX);
        assert_eq!(AxisTransform::rotate90_reflect_x().apply(&Point::ints(1, 2)), Point::ints(-2, -1));
    }

    #[test]
    fn parse_file() {
        let text = "# F0\n6 1\n1 6 # tall\n\n3/1 3\n";
        let (f, _) = parse_family(text).unwrap();
        assert_eq!(f, f0());
        assert!(parse_rects("1 2 3").is_err());
        assert!(parse_rects("1 x").is_err());
    }
}
