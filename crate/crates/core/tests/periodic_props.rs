use std::collections::BTreeSet;

use latpierce::periodic::{
    certify_periodic, maximal_empty_rects, search_integer_periodic, verify_periodic, PeriodicSet, Window,
};
use latpierce::rational::q;
use latpierce::{f0, f1, is_piercing, normalize_family, LatticeBasis, Point, Rational, Rect, RectFamily};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn window(x0: i64, x1: i64, y0: i64, y1: i64) -> Window {
    Window { x0: x0.into(), x1: x1.into(), y0: y0.into(), y1: y1.into() }
}

fn int_set(tile: i64, cells: &[(i64, i64)]) -> PeriodicSet {
    PeriodicSet::new(tile.into(), tile.into(), cells.iter().map(|&(x, y)| Point::ints(x, y)).collect()).unwrap()
}

#[test]
fn maximal_empty_rect_examples() {
    let w = window(0, 4, 0, 4);
    assert_eq!(maximal_empty_rects(&[], &w).len(), 1);
    assert_eq!(maximal_empty_rects(&[Point::ints(2, 2)], &w).len(), 4);
}

/// Each side of every reported rectangle is blocked by a point in the open
/// side segment or by the window edge, and no point lies inside.
#[test]
fn maximal_empty_rects_are_empty_and_maximal() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let n = rng.gen_range(0..12);
        let pts: Vec<Point> =
            (0..n).map(|_| Point::new(q(rng.gen_range(0..=24), 2), q(rng.gen_range(0..=24), 2))).collect();
        let w = window(0, 12, 0, 12);
        for e in maximal_empty_rects(&pts, &w) {
            assert!(pts.iter().all(|p| !(p.x > e.x0 && p.x < e.x1 && p.y > e.y0 && p.y < e.y1)), "{e:?} not empty");
            let on_v = |x: &Rational| pts.iter().any(|p| &p.x == x && p.y > e.y0 && p.y < e.y1);
            let on_h = |y: &Rational| pts.iter().any(|p| &p.y == y && p.x > e.x0 && p.x < e.x1);
            assert!(e.x0 == w.x0 || on_v(&e.x0), "{e:?} can grow left");
            assert!(e.x1 == w.x1 || on_v(&e.x1), "{e:?} can grow right");
            assert!(e.y0 == w.y0 || on_h(&e.y0), "{e:?} can grow down");
            assert!(e.y1 == w.y1 || on_h(&e.y1), "{e:?} can grow up");
            let edge = e.x0 == w.x0 || e.x1 == w.x1 || e.y0 == w.y0 || e.y1 == w.y1;
            assert_eq!(edge, e.touches_edge);
        }
    }
}

/// Integer lattices contain `det·Z²`, so their points in `[0, det)²` form a
/// periodic set with that tile.
#[test]
fn periodic_and_lattice_verdicts_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut seen = 0;
    while seen < 200 {
        let m: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-4..=4));
        let det = (m[0] * m[3] + m[1] * m[2]).abs();
        if !(1..=9).contains(&det) {
            continue;
        }
        let basis = LatticeBasis::from_fracs([(m[0], 1), (m[1], 1), (m[2], 1), (m[3], 1)]);
        let t = det;
        let cells: Vec<(i64, i64)> = (0..t)
            .flat_map(|x| (0..t).map(move |y| (x, y)))
            .filter(|&(x, y)| basis.coords(&Point::ints(x, y)).is_some())
            .collect();
        let ps = int_set(t, &cells);
        assert!(ps.is_lattice());
        assert_eq!(ps.density(), q(1, det));
        let raw: Vec<Rect> =
            (0..rng.gen_range(1..=3)).map(|_| Rect::ints(rng.gen_range(1..=6), rng.gen_range(1..=6))).collect();
        let fam = normalize_family(&raw).unwrap().0;
        assert_eq!(
            verify_periodic(&ps, &fam).pierced,
            is_piercing(&basis, &fam).unwrap().pierced,
            "basis {basis} family {}",
            fam.describe()
        );
        seen += 1;
    }
}

#[test]
fn optimal_f0_lattice_as_periodic_set() {
    // 6·(1, 5/3, 5/2, 1) is integral with determinant 186, so the lattice
    // itself repeats on a 31 × 31 tile.
    let basis = LatticeBasis::from_fracs([(6, 1), (10, 1), (15, 1), (6, 1)]);
    let det = 186;
    let cells: Vec<(i64, i64)> = (0..det)
        .flat_map(|x| (0..det).map(move |y| (x, y)))
        .filter(|&(x, y)| basis.coords(&Point::ints(x, y)).is_some())
        .collect();
    let ps = PeriodicSet::new(q(det, 6), q(det, 6), cells.iter().map(|&(x, y)| Point::new(q(x, 6), q(y, 6))).collect())
        .unwrap();
    assert!(verify_periodic(&ps, &f0()).pierced);
    assert_eq!(ps.density(), q(6, 31));
}

#[test]
fn five_points_per_six_tile_never_pierce_f0() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let all: Vec<(i64, i64)> = (0..6).flat_map(|x| (0..6).map(move |y| (x, y))).collect();
    for _ in 0..300 {
        let cells: Vec<(i64, i64)> = all.choose_multiple(&mut rng, 5).cloned().collect();
        assert!(!verify_periodic(&int_set(6, &cells), &f0()).pierced);
    }
    assert!(search_integer_periodic(&f0(), 6, 5).unwrap().is_empty());
}

type CellMap = fn(i64, i64, i64) -> (i64, i64);

fn orbit_key(cells: &[(i64, i64)], n: i64, rotations: bool) -> Vec<(i64, i64)> {
    let maps: Vec<CellMap> = vec![
        |x, y, _| (x, y),
        |x, y, n| (n - 1 - x, y),
        |x, y, n| (x, n - 1 - y),
        |x, y, n| (n - 1 - x, n - 1 - y),
        |x, y, _| (y, x),
        |x, y, n| (n - 1 - y, x),
        |x, y, n| (y, n - 1 - x),
        |x, y, n| (n - 1 - y, n - 1 - x),
    ];
    let used = if rotations { 8 } else { 4 };
    let mut best: Option<Vec<(i64, i64)>> = None;
    for f in &maps[..used] {
        for dx in 0..n {
            for dy in 0..n {
                let mut img: Vec<(i64, i64)> = cells
                    .iter()
                    .map(|&(x, y)| {
                        let (a, b) = f(x, y, n);
                        ((a + dx) % n, (b + dy) % n)
                    })
                    .collect();
                img.sort();
                if best.as_ref().is_none_or(|b| img < *b) {
                    best = Some(img);
                }
            }
        }
    }
    best.unwrap()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// With 6×1 and 1×6 in the family, six points per 6-torus must sit one per
/// row and column, so the 720 permutation patterns are the whole search
/// space. Verifying each directly gives an independent orbit count.
fn permutation_oracle(fam: &RectFamily) -> BTreeSet<Vec<(i64, i64)>> {
    let rotations = fam.swap_symmetric();
    permutations(6)
        .into_iter()
        .map(|p| p.iter().enumerate().map(|(y, &x)| (x as i64, y as i64)).collect::<Vec<_>>())
        .filter(|cells| verify_periodic(&int_set(6, cells), fam).pierced)
        .map(|cells| orbit_key(&cells, 6, rotations))
        .collect()
}

#[test]
fn six_point_search_matches_permutation_oracle() {
    let asym = RectFamily::from_ints(&[(6, 1), (1, 6), (4, 2)]).unwrap();
    for fam in [f0(), f1(), asym] {
        let found = search_integer_periodic(&fam, 6, 6).unwrap();
        let keys: BTreeSet<Vec<(i64, i64)>> = found
            .iter()
            .map(|ps| {
                assert!(verify_periodic(ps, &fam).pierced);
                let cells: Vec<(i64, i64)> =
                    ps.points.iter().map(|p| (p.x.floor_i64().unwrap(), p.y.floor_i64().unwrap())).collect();
                orbit_key(&cells, 6, fam.swap_symmetric())
            })
            .collect();
        assert_eq!(keys.len(), found.len(), "duplicate orbit in search output");
        assert_eq!(keys, permutation_oracle(&fam), "family {}", fam.describe());
    }
}

#[test]
fn six_point_sets_for_f0_and_f1_are_non_lattice() {
    for fam in [f0(), f1()] {
        let found = search_integer_periodic(&fam, 6, 6).unwrap();
        assert!(!found.is_empty());
        assert!(found.iter().any(|ps| !ps.is_lattice()));
        let cert = certify_periodic(&found[0], &fam).unwrap();
        assert_eq!(cert.density(), q(1, 6));
    }
    // The F1 pattern also pierces F0.
    let f1_sets = search_integer_periodic(&f1(), 6, 6).unwrap();
    assert!(verify_periodic(&f1_sets[0], &f0()).pierced);
}

#[test]
fn search_guards() {
    assert!(search_integer_periodic(&f0(), 9, 6).is_err());
    assert!(search_integer_periodic(&f0(), 6, 9).is_err());
    let frac = normalize_family(&[Rect::new(q(3, 2), q(1, 1)), Rect::new(q(1, 1), q(5, 2))]).unwrap().0;
    assert!(search_integer_periodic(&frac, 4, 2).is_err());
}
