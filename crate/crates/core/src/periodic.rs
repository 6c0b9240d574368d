//! Periodic point sets: maximal empty rectangles, verification by unfolding,
//! and exhaustive search on integer tiles.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::decision::{Witness, WitnessSource};
use crate::error::{Error, Result};
use crate::family::{Point, RectFamily};
use crate::rational::Rational;

/// Closed box `[x0, x1] × [y0, y1]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Window {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
}

impl Window {
    fn strictly_inside(&self, p: &Point) -> bool {
        p.x > self.x0 && p.x < self.x1 && p.y > self.y0 && p.y < self.y1
    }
}

/// Open rectangle `(x0, x1) × (y0, y1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EmptyRect {
    pub x0: Rational,
    pub x1: Rational,
    pub y0: Rational,
    pub y1: Rational,
    pub touches_edge: bool,
}

impl EmptyRect {
    pub fn width(&self) -> Rational {
        &self.x1 - &self.x0
    }

    pub fn height(&self) -> Rational {
        &self.y1 - &self.y0
    }
}

/// All maximal empty open rectangles amid `points` inside `window`.
///
/// Points on or outside the window boundary are ignored; the window sides act
/// as blockers, so every returned rectangle lies inside the window. Each
/// rectangle is produced once, from its leftmost bottom support, or from its
/// leftmost top support when its bottom is the window edge. `O(m²)` output
/// and time for `m` points.
pub fn maximal_empty_rects(points: &[Point], window: &Window) -> Vec<EmptyRect> {
    let mut pts: Vec<&Point> = points.iter().filter(|p| window.strictly_inside(p)).collect();
    pts.sort_by(|a, b| a.y.cmp(&b.y).then(a.x.cmp(&b.x)));
    pts.dedup();
    let w = window;
    let mk = |x0: &Rational, x1: &Rational, y0: &Rational, y1: &Rational| EmptyRect {
        touches_edge: *x0 == w.x0 || *x1 == w.x1 || *y0 == w.y0 || *y1 == w.y1,
        x0: x0.clone(),
        x1: x1.clone(),
        y0: y0.clone(),
        y1: y1.clone(),
    };
    let mut out = Vec::new();
    let n = pts.len();

    // Bottom side supported by pts[s].
    for s in 0..n {
        let p = pts[s];
        let (mut l, mut r) = (&w.x0, &w.x1);
        let mut blocked = false;
        let mut emitted_top = false;
        let mut t = s + 1;
        while t < n && pts[t].y == p.y {
            t += 1;
        }
        while t < n {
            let y = &pts[t].y;
            let end = t + pts[t..].iter().take_while(|q| &q.y == y).count();
            let hits: Vec<&Point> = pts[t..end].iter().copied().filter(|q| &q.x > l && &q.x < r).collect();
            if !hits.is_empty() {
                if leftmost_bottom(&pts, s, l) {
                    out.push(mk(l, r, &p.y, y));
                }
                for q in hits {
                    match q.x.cmp(&p.x) {
                        std::cmp::Ordering::Less => l = &q.x,
                        std::cmp::Ordering::Greater => {
                            if &q.x < r {
                                r = &q.x
                            }
                        }
                        std::cmp::Ordering::Equal => blocked = true,
                    }
                }
                if blocked {
                    emitted_top = true;
                    break;
                }
            }
            t = end;
        }
        if !emitted_top && leftmost_bottom(&pts, s, l) {
            out.push(mk(l, r, &p.y, &w.y1));
        }
    }

    // Bottom side on the window edge, top side supported by pts[s].
    for s in 0..n {
        let q = pts[s];
        let (mut l, mut r) = (&w.x0, &w.x1);
        let mut ok = true;
        for p in pts.iter().take_while(|p| p.y < q.y) {
            match p.x.cmp(&q.x) {
                std::cmp::Ordering::Less => {
                    if &p.x > l {
                        l = &p.x
                    }
                }
                std::cmp::Ordering::Greater => {
                    if &p.x < r {
                        r = &p.x
                    }
                }
                std::cmp::Ordering::Equal => ok = false,
            }
        }
        let leftmost = s == 0 || pts[s - 1].y != q.y || &pts[s - 1].x <= l;
        if ok && leftmost {
            out.push(mk(l, r, &w.y0, &q.y));
        }
    }

    // Full-height strips.
    let mut xs: Vec<&Rational> = pts.iter().map(|p| &p.x).collect();
    xs.sort();
    xs.dedup();
    let mut prev = &w.x0;
    for x in xs.into_iter().chain(std::iter::once(&w.x1)) {
        out.push(mk(prev, x, &w.y0, &w.y1));
        prev = x;
    }
    out
}

// pts[s] is the leftmost point of its row inside (l, ·).
fn leftmost_bottom(pts: &[&Point], s: usize, l: &Rational) -> bool {
    s == 0 || pts[s - 1].y != pts[s].y || &pts[s - 1].x <= l
}

/// Points repeated with period `tile_w × tile_h`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PeriodicSet {
    pub tile_w: Rational,
    pub tile_h: Rational,
    pub points: Vec<Point>,
}

impl PeriodicSet {
    pub fn new(tile_w: Rational, tile_h: Rational, points: Vec<Point>) -> Result<PeriodicSet> {
        if !tile_w.is_positive() || !tile_h.is_positive() {
            return Err(Error::InvalidPeriodicSet("tile dimensions must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidPeriodicSet("no points".into()));
        }
        for p in &points {
            if p.x.is_negative() || p.x >= tile_w || p.y.is_negative() || p.y >= tile_h {
                return Err(Error::InvalidPeriodicSet(format!("point {p} outside the tile")));
            }
        }
        let mut sorted = points.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPeriodicSet("duplicate point".into()));
        }
        Ok(PeriodicSet { tile_w, tile_h, points })
    }

    pub fn density(&self) -> Rational {
        Rational::from_int(self.points.len() as i64) / (&self.tile_w * &self.tile_h)
    }

    fn wrap(&self, p: &Point) -> Point {
        let wx = &p.x - &self.tile_w * Rational::from((&p.x / &self.tile_w).floor());
        let wy = &p.y - &self.tile_h * Rational::from((&p.y / &self.tile_h).floor());
        Point::new(wx, wy)
    }

    /// True when the set is a single lattice coset: `S - s₀` is closed under
    /// addition modulo the tile.
    pub fn is_lattice(&self) -> bool {
        let s0 = &self.points[0];
        let rel: Vec<Point> = self.points.iter().map(|p| self.wrap(&p.sub(s0))).collect();
        rel.iter().all(|p| rel.iter().all(|q| rel.contains(&self.wrap(&p.add(q)))))
    }

    /// All copies of the points inside the closed window.
    pub fn unfold(&self, w: &Window) -> Vec<Point> {
        let mut out = Vec::new();
        for p in &self.points {
            let tx0 = ((&w.x0 - &p.x) / &self.tile_w).ceil_i64().expect("window too large");
            let tx1 = ((&w.x1 - &p.x) / &self.tile_w).floor_i64().expect("window too large");
            let ty0 = ((&w.y0 - &p.y) / &self.tile_h).ceil_i64().expect("window too large");
            let ty1 = ((&w.y1 - &p.y) / &self.tile_h).floor_i64().expect("window too large");
            for tx in tx0..=tx1 {
                for ty in ty0..=ty1 {
                    out.push(Point::new(&p.x + &self.tile_w * tx, &p.y + &self.tile_h * ty));
                }
            }
        }
        out
    }
}

impl fmt::Display for PeriodicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tile {} {}", self.tile_w.to_short_string(), self.tile_h.to_short_string())?;
        for p in &self.points {
            writeln!(f, "{} {}", p.x.to_short_string(), p.y.to_short_string())?;
        }
        Ok(())
    }
}

/// Parses `tile <W> <H>` followed by `x y` lines; `#` starts a comment.
pub fn parse_periodic(text: &str) -> Result<PeriodicSet> {
    let mut tile: Option<(Rational, Rational)> = None;
    let mut pts = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split_whitespace().collect();
        let err = |m: &str| Error::Parse(format!("line {}: {m}", no + 1));
        if tile.is_none() {
            if f.len() != 3 || f[0] != "tile" {
                return Err(err("expected `tile <W> <H>`"));
            }
            tile = Some((f[1].parse()?, f[2].parse()?));
        } else {
            if f.len() != 2 {
                return Err(err("expected `x y`"));
            }
            pts.push(Point::new(f[0].parse()?, f[1].parse()?));
        }
    }
    let (w, h) = tile.ok_or_else(|| Error::Parse("missing `tile` line".into()))?;
    PeriodicSet::new(w, h, pts)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PeriodicVerdict {
    pub pierced: bool,
    pub density: Rational,
    pub witness: Option<Witness>,
}

/// Proof that a periodic set pierces a family; the only way to obtain a
/// density accepted by the separation report.
#[derive(Clone, Debug)]
pub struct VerifiedPeriodic {
    family: RectFamily,
    set: PeriodicSet,
}

impl VerifiedPeriodic {
    pub fn family(&self) -> &RectFamily {
        &self.family
    }

    pub fn set(&self) -> &PeriodicSet {
        &self.set
    }

    pub fn density(&self) -> Rational {
        self.set.density()
    }
}

fn unfold_window(ps: &PeriodicSet, k: &Rational) -> Window {
    Window { x0: -(k + &ps.tile_w), x1: k + &ps.tile_w * 2, y0: -(k + &ps.tile_h), y1: k + &ps.tile_h * 2 }
}

/// Exact verdict for the periodic extension of `ps`.
///
/// Any unpierced translate moves by tile periods to a lower-left corner in
/// the base tile, hence lies strictly inside the unfolded window; the window
/// edges block, so every reported rectangle is genuinely empty.
pub fn verify_periodic(ps: &PeriodicSet, family: &RectFamily) -> PeriodicVerdict {
    let window = unfold_window(ps, family.k());
    let pts = ps.unfold(&window);
    let rects = maximal_empty_rects(&pts, &window);
    let mut witness = None;
    'outer: for e in &rects {
        for (i, r) in family.rects().iter().enumerate() {
            if e.width() > r.w && e.height() > r.h {
                let x0 = (&e.x0 + &e.x1 - &r.w) / 2;
                let y0 = (&e.y0 + &e.y1 - &r.h) / 2;
                let ll = Point::new(x0, y0);
                let ur = Point::new(&ll.x + &r.w, &ll.y + &r.h);
                witness = Some(Witness {
                    rect_index: i,
                    rect: r.clone(),
                    lower_left: ll,
                    upper_right: ur,
                    source: WitnessSource::MaxRect,
                });
                break 'outer;
            }
        }
    }
    PeriodicVerdict { pierced: witness.is_none(), density: ps.density(), witness }
}

/// Verifies and, on success, returns the token used by the separation report.
pub fn certify_periodic(ps: &PeriodicSet, family: &RectFamily) -> Result<VerifiedPeriodic> {
    let v = verify_periodic(ps, family);
    if v.pierced {
        Ok(VerifiedPeriodic { family: family.clone(), set: ps.clone() })
    } else {
        Err(Error::InvalidPeriodicSet("set does not pierce the family".into()))
    }
}

const MAX_TILE: usize = 8;
const MAX_COUNT: usize = 8;

struct TorusSearch {
    t: usize,
    count: usize,
    // (w, h) pairs, clamped to t.
    blocks: Vec<(usize, usize)>,
    // cyc[w][x0]: columns x0..x0+w-1 mod t.
    cyc: Vec<Vec<u16>>,
    symmetric: bool,
}

type CellMap = Box<dyn Fn(usize, usize) -> (usize, usize)>;

impl TorusSearch {
    fn block_empty(&self, rows: &[u16], w: usize, h: usize, x0: usize, y0: usize) -> bool {
        let mut acc = 0u16;
        for dy in 0..h {
            acc |= rows[(y0 + dy) % self.t];
        }
        acc & self.cyc[w][x0] == 0
    }

    /// Blocks whose rows end exactly at `last` and do not wrap.
    fn rows_ok(&self, rows: &[u16], last: usize) -> bool {
        self.blocks.iter().all(|&(w, h)| {
            if h > last + 1 {
                return true;
            }
            let y0 = last + 1 - h;
            (0..self.t).all(|x0| !self.block_empty(rows, w, h, x0, y0))
        })
    }

    fn full_ok(&self, rows: &[u16]) -> bool {
        self.blocks
            .iter()
            .all(|&(w, h)| (0..self.t).all(|y0| (0..self.t).all(|x0| !self.block_empty(rows, w, h, x0, y0))))
    }

    fn images(&self, cells: &[usize]) -> Vec<Vec<usize>> {
        let t = self.t;
        let mut maps: Vec<CellMap> = vec![
            Box::new(|x, y| (x, y)),
            Box::new(move |x, y| ((t - x) % t, y)),
            Box::new(move |x, y| (x, (t - y) % t)),
            Box::new(move |x, y| ((t - x) % t, (t - y) % t)),
        ];
        if self.symmetric {
            maps.push(Box::new(|x, y| (y, x)));
            maps.push(Box::new(move |x, y| ((t - y) % t, x)));
            maps.push(Box::new(move |x, y| (y, (t - x) % t)));
            maps.push(Box::new(move |x, y| ((t - y) % t, (t - x) % t)));
        }
        let mut out = Vec::new();
        for m in &maps {
            let base: Vec<(usize, usize)> = cells.iter().map(|&c| m(c % t, c / t)).collect();
            for dy in 0..t {
                for dx in 0..t {
                    let mut v: Vec<usize> = base.iter().map(|&(x, y)| ((y + dy) % t) * t + (x + dx) % t).collect();
                    v.sort_unstable();
                    out.push(v);
                }
            }
        }
        out
    }

    fn is_canonical(&self, cells: &[usize]) -> bool {
        self.images(cells).iter().all(|img| img.as_slice() >= cells)
    }

    fn dfs(&self, rows: &mut [u16], cells: &mut Vec<usize>, start: usize, found: &mut Vec<Vec<usize>>) {
        let t = self.t;
        if cells.len() == self.count {
            if self.full_ok(rows) && self.is_canonical(cells) {
                found.push(cells.clone());
            }
            return;
        }
        let mut checked_row = cells.last().map_or(0, |&c| c / t);
        for idx in start..t * t {
            if self.count - cells.len() > t * t - idx {
                break;
            }
            let r = idx / t;
            let mut dead = false;
            while checked_row < r {
                if !self.rows_ok(rows, checked_row) {
                    dead = true;
                    break;
                }
                checked_row += 1;
            }
            if dead {
                break;
            }
            rows[r] |= 1 << (idx % t);
            cells.push(idx);
            self.dfs(rows, cells, idx + 1, found);
            cells.pop();
            rows[r] &= !(1 << (idx % t));
        }
    }
}

/// Every `count`-point subset of the `tile × tile` integer torus whose periodic
/// extension pierces `family`, one representative per symmetry class
/// (torus translations, axis reflections, and the diagonal reflection when the
/// family is invariant under exchanging widths and heights). Deterministic order.
pub fn search_integer_periodic(family: &RectFamily, tile: usize, count: usize) -> Result<Vec<PeriodicSet>> {
    if !family.is_integer() {
        return Err(Error::NonIntegerFamily);
    }
    if tile == 0 || tile > MAX_TILE || count == 0 || count > MAX_COUNT || count > tile * tile {
        return Err(Error::SearchTooLarge(format!(
            "tile must be in 1..={MAX_TILE} and count in 1..={MAX_COUNT} (at most tile²)"
        )));
    }
    let dim = |r: &Rational| (r.floor_i64().unwrap_or(i64::MAX).min(tile as i64)) as usize;
    let mut cyc = vec![vec![0u16; tile]; tile + 1];
    for (w, row) in cyc.iter_mut().enumerate() {
        for (x0, m) in row.iter_mut().enumerate() {
            for i in 0..w {
                *m |= 1 << ((x0 + i) % tile);
            }
        }
    }
    let search = TorusSearch {
        t: tile,
        count,
        blocks: family.rects().iter().map(|r| (dim(&r.w), dim(&r.h))).collect(),
        cyc,
        symmetric: family.swap_symmetric(),
    };
    // Translation fixes one point at the origin; shard by the second point.
    let shards: Vec<Vec<Vec<usize>>> = if count == 1 {
        let mut found = Vec::new();
        let mut rows = vec![0u16; tile];
        rows[0] = 1;
        search.dfs(&mut rows, &mut vec![0], 1, &mut found);
        vec![found]
    } else {
        (1..tile * tile)
            .into_par_iter()
            .map(|second| {
                let mut found = Vec::new();
                let mut rows = vec![0u16; tile];
                rows[0] |= 1;
                rows[second / tile] |= 1 << (second % tile);
                let mut cells = vec![0, second];
                // Rows strictly between the two points are already final.
                let prefix_ok = (0..second / tile).all(|r| search.rows_ok(&rows, r));
                if prefix_ok {
                    search.dfs(&mut rows, &mut cells, second + 1, &mut found);
                }
                found
            })
            .collect()
    };
    let t = Rational::from_int(tile as i64);
    let mut all: Vec<Vec<usize>> = shards.into_iter().flatten().collect();
    all.sort();
    all.into_iter()
        .map(|cells| {
            let pts = cells.iter().map(|&c| Point::ints((c % tile) as i64, (c / tile) as i64)).collect();
            PeriodicSet::new(t.clone(), t.clone(), pts)
        })
        .collect()
}
