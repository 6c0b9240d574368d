//! Published optima and separation ratios, recomputed from scratch.

use latpierce::periodic::{certify_periodic, search_integer_periodic};
use latpierce::rational::q;
use latpierce::solver::{separation_report, solve, SolverConfig};
use latpierce::{canonicalize, f0, f1, LatticeBasis, Rational, RectFamily};
use serde_json::json;

use crate::report::Report;
use crate::{Failure, Outcome, Target};

struct Golden {
    name: &'static str,
    family: RectFamily,
    area: Rational,
    /// Bases as published, `(a, b, c, d)` with `u = (a, b)`, `v = (c, -d)`.
    lattices: [[(i64, i64); 4]; 2],
    ratio: Rational,
}

fn golden(target: Target) -> Golden {
    match target {
        Target::F0 => Golden {
            name: "F0",
            family: f0(),
            area: q(31, 6),
            lattices: [[(1, 1), (5, 3), (5, 2), (1, 1)], [(5, 3), (1, 1), (8, 3), (3, 2)]],
            ratio: q(36, 31),
        },
        Target::F1 => Golden {
            name: "F1",
            family: f1(),
            area: q(5, 1),
            lattices: [[(1, 1), (1, 1), (1, 1), (4, 1)], [(1, 1), (2, 1), (1, 1), (3, 1)]],
            ratio: q(6, 5),
        },
    }
}

fn check(out: &mut Report, ok: &mut bool, what: &str, pass: bool) {
    out.line(format!("[{}] {what}", if pass { "ok" } else { "MISMATCH" }));
    *ok &= pass;
}

/// Solves the target family, compares with the published lattices (as point
/// sets, through their canonical bases), finds a six-point periodic set of
/// density 1/6 and reports the separation ratio.
pub fn reproduce(target: Target, jobs: usize, out: &mut Report) -> Result<Outcome, Failure> {
    let g = golden(target);
    let mut ok = true;
    out.line(format!("target {}: {}", g.name, g.family));

    let cfg = SolverConfig { parallelism: jobs, ..SolverConfig::default() };
    let res = solve(&g.family, &cfg)?;
    out.line(format!(
        "optimal area {} (density {}), {} ms",
        res.optimal_area,
        res.optimal_area.recip(),
        res.elapsed_ms
    ));
    check(out, &mut ok, &format!("optimal area equals {}", g.area), res.optimal_area == g.area);

    let mut expected = Vec::new();
    for l in g.lattices {
        let published = LatticeBasis::from_fracs(l);
        let cb = canonicalize(&published)?;
        out.line(format!(
            "published ({}, {}, {}, {}) has canonical basis {}",
            published.a, published.b, published.c, published.d, cb.basis
        ));
        expected.push(cb.basis);
    }
    expected.sort();
    let found = res.bases();
    for cb in &res.lattices {
        out.line(format!(
            "a = {}  b = {}  c = {}  d = {}  A = {}",
            cb.basis.a,
            cb.basis.b,
            cb.basis.c,
            cb.basis.d,
            cb.area()
        ));
    }
    check(out, &mut ok, "optimal lattice set equals the published set", found == expected);
    for (n, cb) in res.lattices.iter().enumerate() {
        let input_frame = cb.basis.transformed(&cb.family_transform.inverse());
        out.svg_lattice(&format!("{}-lattice-{}.svg", g.name.to_lowercase(), n + 1), &input_frame, &g.family)?;
    }

    let sets = search_integer_periodic(&g.family, 6, 6)?;
    let non_lattice = sets.iter().find(|ps| !ps.is_lattice());
    out.line(format!(
        "six points on a 6 x 6 torus: {} set(s), non-lattice present: {}",
        sets.len(),
        non_lattice.is_some()
    ));
    check(out, &mut ok, "a non-lattice periodic set of density 1/6 exists", non_lattice.is_some());
    let mut ratio_json = serde_json::Value::Null;
    if let Some(ps) = non_lattice {
        let cert = certify_periodic(ps, &g.family)?;
        let ratio = separation_report(&res, &cert)?;
        let pts: Vec<String> = ps.points.iter().map(|p| format!("({}, {})", p.x, p.y)).collect();
        out.line(format!("periodic set: {}", pts.join(" ")));
        out.line(format!("separation ratio {} (≈ {:.6})", ratio, ratio.to_f64()));
        check(out, &mut ok, &format!("separation ratio equals {}", g.ratio), ratio == g.ratio);
        ratio_json = serde_json::to_value(&ratio).expect("json");
        out.svg_periodic(&format!("{}-periodic.svg", g.name.to_lowercase()), ps, &g.family)?;
    }

    out.field(
        "reproduce",
        json!({
            "target": g.name,
            "solve": serde_json::to_value(&res).expect("json"),
            "expectedLattices": serde_json::to_value(&expected).expect("json"),
            "periodicSets": sets.len(),
            "separationRatio": ratio_json,
            "matchesPublished": ok,
        }),
    );
    Ok(if ok { Outcome::Success } else { Outcome::Mismatch })
}
