//! Optimal piercing lattices.
//!
//! An optimal lattice is tight: its canonical `(a, c)` solves two independent
//! constraints `i·a + j·c = w_s` and its `(b, d)` two independent
//! `i·b + j·d = h_s`, with `|i| + |j|` capped by [`coefficient_bounds`].
//! Both solver modes build the sets of admissible `(a, c)` and `(b, d)`
//! pairs, join them inside the area window, keep canonical candidates and
//! test each one with the decision procedure.
//!
//! The area window is `[aLo, A_min]`. `aLo` starts at `A_min/2` and rises to
//! the best piercing area found, tightening the caps; passes run with caps
//! `2, 4, 8, …` until the last pass uses the full caps of its own `aLo`,
//! which makes the final result complete.

pub mod bounds;
pub mod sweep;
pub mod systems;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

pub use bounds::{coefficient_bounds, CoefficientBounds};
pub use systems::{constraints, independent_pairs, solve_pair, Axis, TightConstraint};

use crate::decision::{build_funnel, is_piercing_canonical, maximal_rects};
use crate::error::{Error, Result};
use crate::family::{AxisTransform, Rect, RectFamily, TransformKind};
use crate::lattice::{canonicalize, enumerate_points, metrics, CanonicalBasis, LatticeBasis};
use crate::periodic::VerifiedPeriodic;
use crate::rational::Rational;

/// Admissible `(x, y)` for one axis: `x >= 0` (or `> 0`), `y >= 0`,
/// `x² <= first_max2`, `y² <= second_max2`.
#[derive(Clone, Debug)]
pub struct SolutionBox {
    pub first_positive: bool,
    pub first_max2: Rational,
    pub second_max2: Rational,
}

impl SolutionBox {
    pub fn admits(&self, x: &Rational, y: &Rational) -> bool {
        let x_ok = if self.first_positive { x.is_positive() } else { !x.is_negative() };
        x_ok && !y.is_negative() && x.square() <= self.first_max2 && y.square() <= self.second_max2
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum SolveMode {
    Systems,
    DenominatorSweep,
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub mode: SolveMode,
    /// Collapse generators of one lattice to its canonical basis. When off,
    /// every piercing optimal generator basis is also listed.
    pub dedup: bool,
    /// Worker threads; `0` uses the global pool.
    pub parallelism: usize,
    /// Report every optimal lattice rather than the first.
    pub emit_all: bool,
    /// Multiplies every coefficient cap (soundness experiments).
    pub bound_multiplier: u32,
    /// Raise `aLo` to the incumbent between passes.
    pub incumbent_tightening: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: SolveMode::Systems,
            dedup: true,
            parallelism: 0,
            emit_all: true,
            bound_multiplier: 1,
            incumbent_tightening: true,
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveStats {
    pub passes: u32,
    /// Independent systems solved (systems mode) or numerator pairs tried (sweep).
    pub generated: u64,
    pub ac_pairs: u64,
    pub bd_pairs: u64,
    pub joined: u64,
    pub pruned_shape: u64,
    pub canonical: u64,
    pub tested: u64,
    pub piercing: u64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveResult {
    pub family: RectFamily,
    pub optimal_area: Rational,
    /// Sorted by `(a, b, c, d)`; all have area `optimal_area`.
    pub lattices: Vec<CanonicalBasis>,
    /// Non-canonical generating bases, filled only when `dedup` is off.
    pub generators: Vec<LatticeBasis>,
    pub bounds: CoefficientBounds,
    pub stats: SolveStats,
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl SolveResult {
    pub fn bases(&self) -> Vec<LatticeBasis> {
        self.lattices.iter().map(|c| c.basis.clone()).collect()
    }
}

struct Frame {
    to_frame: AxisTransform,
    rects: Vec<Rect>,
}

fn frames(family: &RectFamily) -> Vec<Frame> {
    let mut out = vec![Frame { to_frame: AxisTransform::identity(), rects: family.rects().to_vec() }];
    if !family.swap_symmetric() {
        let rot = AxisTransform::rotate90();
        out.push(Frame { rects: family.map_rects(&rot), to_frame: rot });
    }
    out
}

fn boxes(b: &CoefficientBounds) -> (SolutionBox, SolutionBox) {
    let ac = SolutionBox { first_positive: false, first_max2: b.lambda_hi_sq.clone(), second_max2: b.v_hi_sq.clone() };
    let bd = SolutionBox { first_positive: true, first_max2: b.lambda_hi_sq.clone(), second_max2: b.v_hi_sq.clone() };
    (ac, bd)
}

type PairSet = BTreeSet<(Rational, Rational)>;

fn pair_sets(
    mode: SolveMode,
    rects: &[Rect],
    b: &CoefficientBounds,
    stats: &mut SolveStats,
) -> Result<(PairSet, PairSet)> {
    let (ac_box, bd_box) = boxes(b);
    let (ac, bd, generated) = match mode {
        SolveMode::Systems => {
            let (ac, n1) = systems::solutions(&constraints(rects, b, Axis::X), &ac_box);
            let (bd, n2) = systems::solutions(&constraints(rects, b, Axis::Y), &bd_box);
            (ac, bd, n1 + n2)
        }
        SolveMode::DenominatorSweep => {
            let ws = sweep::integer_dims(rects, true).ok_or(Error::NonIntegerFamily)?;
            let hs = sweep::integer_dims(rects, false).ok_or(Error::NonIntegerFamily)?;
            let (ac, n1) = sweep::sweep_pairs(&ws, b, &ac_box);
            let (bd, n2) = sweep::sweep_pairs(&hs, b, &bd_box);
            (ac, bd, n1 + n2)
        }
    };
    stats.generated += generated;
    stats.ac_pairs += ac.len() as u64;
    stats.bd_pairs += bd.len() as u64;
    Ok((ac, bd))
}

/// Exact shape tests implied by the canonical form and by the properties
/// of optimal lattices; cheaper than a full canonicalization.
fn shape_ok(b: &LatticeBasis, bounds: &CoefficientBounds) -> bool {
    let (u, v) = (b.u(), b.v());
    let lam2 = u.norm2();
    let v2 = v.norm2();
    let area = b.signed_area();
    if lam2 < bounds.lambda_lo_sq || lam2 > bounds.lambda_hi_sq || v2 < lam2 {
        return false;
    }
    let uv = u.dot(&v);
    // Angle in [45°, 135°].
    if uv.square() * 2 > &lam2 * &v2 {
        return false;
    }
    // |v|² <= λ² + μ², μ = A/λ.
    if &v2 * &lam2 > lam2.square() + area.square() {
        return false;
    }
    // |v|² <= (7/3)·A²/λ².
    if &v2 * &lam2 * 3 > area.square() * 7 {
        return false;
    }
    u.add(&v).norm2() >= lam2 && u.sub(&v).norm2() >= lam2
}

/// Candidates stream straight into the piercing test; each worker keeps only
/// the piercing lattices of the largest area it has seen, which is all the
/// caller can use.
#[derive(Default)]
struct Tally {
    joined: u64,
    pruned: u64,
    tested: u64,
    canonical: u64,
    piercing: u64,
    best: Vec<(Rational, Found)>,
}

impl Tally {
    fn keep(&mut self, area: Rational, found: Found) {
        self.piercing += 1;
        match self.best.first().map(|(a, _)| area.cmp(a)) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => self.best.push((area, found)),
            _ => self.best = vec![(area, found)],
        }
    }
}

fn join_and_evaluate(
    frame: &Frame,
    ac: &PairSet,
    bd: &PairSet,
    bounds: &CoefficientBounds,
    a_lo: &Rational,
    dedup: bool,
    stats: &mut SolveStats,
) -> Vec<(Rational, Found)> {
    let mut by_b: BTreeMap<&Rational, Vec<&Rational>> = BTreeMap::new();
    for (b, d) in bd {
        by_b.entry(b).or_default().push(d);
    }
    let a_hi = &bounds.a_hi;
    let ac: Vec<&(Rational, Rational)> = ac.iter().collect();
    let parts: Vec<Tally> = ac
        .par_iter()
        .map(|(a, c)| {
            let mut t = Tally::default();
            let a2 = a.square();
            let b2_lo = &bounds.lambda_lo_sq - &a2;
            let b2_hi = &bounds.lambda_hi_sq - &a2;
            if b2_hi.is_negative() {
                return t;
            }
            let b_lo = if b2_lo.is_positive() { b2_lo.sqrt_bounds(32).0 } else { Rational::ZERO };
            let b_hi = b2_hi.sqrt_bounds(32).1;
            for (b, ds) in by_b.range::<&Rational, _>(&b_lo..=&b_hi) {
                let bc = *b * c;
                let (lo, hi) = if a.is_positive() {
                    ((a_lo - &bc) / a, (a_hi - &bc) / a)
                } else if &bc >= a_lo && &bc <= a_hi {
                    (Rational::ZERO, bounds.v_hi_sq.clone() + 1)
                } else {
                    continue;
                };
                let start = ds.partition_point(|d| **d < lo);
                let end = ds.partition_point(|d| **d <= hi);
                for d in &ds[start..end.max(start)] {
                    t.joined += 1;
                    let basis = LatticeBasis::new((*a).clone(), (*b).clone(), (*c).clone(), (*d).clone());
                    if !shape_ok(&basis, bounds) {
                        t.pruned += 1;
                        continue;
                    }
                    t.tested += 1;
                    let (canonical, hit) = evaluate(frame, basis, dedup);
                    t.canonical += u64::from(canonical);
                    if let Some((area, found)) = hit {
                        t.keep(area, found);
                    }
                }
            }
            t
        })
        .collect();
    let mut out = Vec::new();
    for t in parts {
        stats.joined += t.joined;
        stats.pruned_shape += t.pruned;
        stats.tested += t.tested;
        stats.canonical += t.canonical;
        stats.piercing += t.piercing;
        out.extend(t.best);
    }
    out
}

struct Found {
    cb: CanonicalBasis,
    generator: LatticeBasis,
}

/// Whether the candidate is its own canonical form, and its area when it pierces.
fn evaluate(frame: &Frame, basis: LatticeBasis, dedup: bool) -> (bool, Option<(Rational, Found)>) {
    let cb = match canonicalize(&basis) {
        Ok(cb) => cb,
        Err(_) => return (false, None),
    };
    let canonical = cb.basis == basis && cb.family_transform.is_identity();
    if dedup && !canonical {
        return (false, None);
    }
    // In the rotated frame keep only lattices whose own canonical form
    // needs the rotation; the identity frame covers the rest.
    let reported = if !frame.to_frame.is_identity() {
        let orig = canonicalize(&basis.transformed(&frame.to_frame.inverse())).expect("non-degenerate");
        if canonical && !orig.family_transform.swaps_axes() {
            return (canonical, None);
        }
        orig
    } else {
        cb.clone()
    };
    let verdict = is_piercing_canonical(&cb, &frame.rects, &frame.rects);
    if verdict.pierced {
        (canonical, Some((verdict.area, Found { cb: reported, generator: basis })))
    } else {
        (canonical, None)
    }
}

/// Every family is invariant under `x -> -x`, so a lattice and its mirror
/// image are reported once, as whichever canonical form sorts first.
fn mirror_representative(cb: CanonicalBasis) -> CanonicalBasis {
    let lattice = cb.basis.transformed(&cb.family_transform.inverse());
    match canonicalize(&lattice.transformed(&AxisTransform::reflect_x())) {
        Ok(m) if (&m.basis, m.family_transform.kind()) < (&cb.basis, cb.family_transform.kind()) => m,
        _ => cb,
    }
}

fn run(family: &RectFamily, cfg: &SolverConfig) -> Result<SolveResult> {
    if cfg.mode == SolveMode::DenominatorSweep && !family.is_integer() {
        return Err(Error::NonIntegerFamily);
    }
    let start = Instant::now();
    let a_half = family.a_min() / 2;
    let frames = frames(family);
    let mut stats = SolveStats::default();
    let mut best: Option<Rational> = None;
    let mut winners: BTreeMap<(LatticeBasis, TransformKind), CanonicalBasis> = BTreeMap::new();
    let mut generators: BTreeSet<LatticeBasis> = BTreeSet::new();
    let mut cap = if cfg.incumbent_tightening { 2 } else { u32::MAX };
    let final_bounds = loop {
        stats.passes += 1;
        let a_lo = match (&best, cfg.incumbent_tightening) {
            (Some(b), true) => b.clone().max(a_half.clone()),
            _ => a_half.clone(),
        };
        let full = coefficient_bounds(family, &a_lo).scaled(cfg.bound_multiplier);
        let capped = full.capped(cap);
        let join_lo = best.clone().unwrap_or_else(|| a_half.clone()).max(a_half.clone());
        for frame in &frames {
            let (ac, bd) = pair_sets(cfg.mode, &frame.rects, &capped, &mut stats)?;
            for (area, found) in join_and_evaluate(frame, &ac, &bd, &capped, &join_lo, cfg.dedup, &mut stats) {
                if best.as_ref().is_none_or(|b| area > *b) {
                    best = Some(area.clone());
                    winners.clear();
                    generators.clear();
                }
                if best.as_ref() == Some(&area) {
                    generators.insert(found.generator);
                    let rep = mirror_representative(found.cb);
                    let key = (rep.basis.clone(), rep.family_transform.kind());
                    winners.insert(key, rep);
                }
            }
        }
        if cap >= full.max_sum() {
            break full;
        }
        cap = cap.saturating_mul(2);
    };
    let optimal_area = best.ok_or_else(|| Error::Internal("no piercing lattice found".into()))?;
    let mut lattices: Vec<CanonicalBasis> = winners.into_values().collect();
    lattices.sort_by(|x, y| x.basis.cmp(&y.basis));
    if !cfg.emit_all {
        lattices.truncate(1);
    }
    let generators = if cfg.dedup { Vec::new() } else { generators.into_iter().collect() };
    Ok(SolveResult {
        family: family.clone(),
        optimal_area,
        lattices,
        generators,
        bounds: final_bounds,
        stats,
        elapsed_ms: start.elapsed().as_millis(),
    })
}

fn with_pool<T: Send>(parallelism: usize, f: impl FnOnce() -> T + Send) -> T {
    if parallelism == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(parallelism).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Dispatches on `cfg.mode`.
pub fn solve(family: &RectFamily, cfg: &SolverConfig) -> Result<SolveResult> {
    with_pool(cfg.parallelism, || run(family, cfg))
}

/// Optimal lattices by exact solution of tight 2×2 systems.
pub fn solve_systems(family: &RectFamily, cfg: &SolverConfig) -> Result<SolveResult> {
    let cfg = SolverConfig { mode: SolveMode::Systems, ..cfg.clone() };
    solve(family, &cfg)
}

/// Optimal lattices by sweeping common denominators; integer families only.
pub fn solve_denominator_sweep(family: &RectFamily, cfg: &SolverConfig) -> Result<SolveResult> {
    let cfg = SolverConfig { mode: SolveMode::DenominatorSweep, ..cfg.clone() };
    solve(family, &cfg)
}

/// Lattice density over the density of a verified periodic piercing set.
pub fn separation_report(result: &SolveResult, verified: &VerifiedPeriodic) -> Result<Rational> {
    if *verified.family() != result.family {
        return Err(Error::FamilyMismatch(format!("{} vs {}", verified.family(), result.family)));
    }
    Ok(result.optimal_area.recip() / verified.density())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TightnessReport {
    pub x: Vec<TightConstraint>,
    pub y: Vec<TightConstraint>,
    pub x_rank: usize,
    pub y_rank: usize,
}

impl TightnessReport {
    pub fn is_tight(&self) -> bool {
        self.x_rank == 2 && self.y_rank == 2
    }
}

fn rank(cs: &[TightConstraint]) -> usize {
    match cs.first() {
        None => 0,
        Some(p) => {
            if cs.iter().any(|q| p.i * q.j != q.i * p.j) {
                2
            } else {
                1
            }
        }
    }
}

/// Active constraints of a piercing canonical lattice, read off its funnel:
/// every maximal rectangle of width exactly `w_s` and height at least `h_s`
/// gives an X equality through its right support; every one of height
/// exactly `h_s` and width at least `w_s` gives a Y equality between its top
/// and bottom supports. A line spacing equal to a side makes the strip next
/// to the origin tight, and every lattice point of the board on the far
/// line of that strip supports it.
pub fn tightness(cb: &CanonicalBasis, rects: &[Rect]) -> TightnessReport {
    let k = rects.iter().flat_map(|r| [&r.w, &r.h]).max().expect("non-empty").clone();
    let funnel = build_funnel(cb, &k);
    let mrs = maximal_rects(&funnel);
    let kk = funnel.board.clone();
    let m = metrics(cb);
    let basis = &cb.basis;
    let mut x = BTreeSet::new();
    let mut y = BTreeSet::new();
    for (s, r) in rects.iter().enumerate() {
        for mr in &mrs {
            if mr.width.finite() == Some(&r.w) && !(mr.height.finite().is_some_and(|h| *h < r.h)) {
                if let Some((i, j)) = mr.right_support.as_ref().and_then(|p| basis.coords(p)) {
                    x.insert(TightConstraint { axis: Axis::X, i, j, rect_index: s, rhs: r.w.clone() });
                }
            }
            if mr.height.finite() == Some(&r.h) && !(mr.width.finite().is_some_and(|w| *w < r.w)) {
                if let (Some(t), Some(b)) = (&mr.top_support, &mr.bottom_support) {
                    if let Some((i, j)) = basis.coords(&t.sub(b)) {
                        // Y form i·b + j·d: the y-displacement is i·b - j·d.
                        y.insert(TightConstraint { axis: Axis::Y, i, j: -j, rect_index: s, rhs: r.h.clone() });
                    }
                }
            }
        }
        if m.v_spacing == r.w {
            for (_, i, j) in enumerate_points(basis, (&m.v_spacing, &m.v_spacing), (&-&kk, &kk)) {
                x.insert(TightConstraint { axis: Axis::X, i, j, rect_index: s, rhs: r.w.clone() });
            }
        }
        if m.h_spacing == r.h {
            for (_, i, j) in enumerate_points(basis, (&-&kk, &kk), (&m.h_spacing, &m.h_spacing)) {
                y.insert(TightConstraint { axis: Axis::Y, i, j: -j, rect_index: s, rhs: r.h.clone() });
            }
        }
    }
    let x: Vec<TightConstraint> = x.into_iter().filter(|c| c.holds(&basis.a, &basis.c)).collect();
    let y: Vec<TightConstraint> = y.into_iter().filter(|c| c.holds(&basis.b, &basis.d)).collect();
    let (x_rank, y_rank) = (rank(&x), rank(&y));
    TightnessReport { x, y, x_rank, y_rank }
}
