//! Text, JSON and SVG rendering of command results.
//!
//! Text and JSON carry the same numbers; every rational is printed as an
//! exact `p/q` string and decimals appear only as display annotations.

use std::path::PathBuf;

use latpierce::decision::{PiercingVerdict, Witness};
use latpierce::lattice::{metrics, CanonicalBasis};
use latpierce::periodic::{PeriodicSet, PeriodicVerdict, Window};
use latpierce::solver::SolveResult;
use latpierce::svg::{emit_svg, Subject};
use latpierce::{AxisTransform, LatticeBasis, Rational, RectFamily};
use serde_json::{json, Map, Value};

use crate::{Failure, Format, Outcome};

pub struct Report {
    format: Format,
    out_dir: PathBuf,
    lines: Vec<String>,
    json: Map<String, Value>,
    files: Vec<PathBuf>,
}

fn approx(r: &Rational) -> String {
    format!("{} (≈ {:.6})", r, r.to_f64())
}

fn vectors(b: &LatticeBasis) -> String {
    format!("u=[{}, {}] v=[{}, {}]", b.a, b.b, b.c, -&b.d)
}

/// One lattice in the appendix layout.
fn appendix_line(b: &LatticeBasis) -> String {
    format!("a = {}  b = {}  c = {}  d = {}  A = {}", b.a, b.b, b.c, b.d, b.area())
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn square(side: Rational) -> Window {
    Window { x0: Rational::ZERO, x1: side.clone(), y0: Rational::ZERO, y1: side }
}

impl Report {
    pub fn new(format: Format, out_dir: PathBuf) -> Report {
        Report { format, out_dir, lines: Vec::new(), json: Map::new(), files: Vec::new() }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn field(&mut self, key: &str, v: Value) {
        self.json.insert(key.to_string(), v);
    }

    fn svg(&mut self, name: &str, body: String) -> Result<(), Failure> {
        std::fs::create_dir_all(&self.out_dir)
            .map_err(|e| Failure::usage(format!("cannot create {}: {e}", self.out_dir.display())))?;
        let path = self.out_dir.join(name);
        std::fs::write(&path, body).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
        self.files.push(path);
        Ok(())
    }

    pub fn svg_lattice(&mut self, name: &str, b: &LatticeBasis, fam: &RectFamily) -> Result<(), Failure> {
        if self.format != Format::Svg {
            return Ok(());
        }
        let body = emit_svg(&Subject::Lattice(b), fam, &square(fam.k() * 2));
        self.svg(name, body)
    }

    pub fn svg_periodic(&mut self, name: &str, ps: &PeriodicSet, fam: &RectFamily) -> Result<(), Failure> {
        if self.format != Format::Svg {
            return Ok(());
        }
        let side = ps.tile_w.clone().max(ps.tile_h.clone()).max(fam.k().clone()) * 2;
        let body = emit_svg(&Subject::Periodic(ps), fam, &square(side));
        self.svg(name, body)
    }

    pub fn normalization(&mut self, fam: &RectFamily, t: &AxisTransform, raw_len: usize) {
        self.line(format!("family: {fam}  (k = {}, A_min = {})", fam.k(), fam.a_min()));
        if !t.is_identity() {
            self.line(format!("normalized by scaling x by {} and y by {}", t.scale_x, t.scale_y));
        }
        if raw_len != fam.len() {
            self.line(format!("dropped {} duplicate or containing rectangle(s)", raw_len - fam.len()));
        }
        self.field("family", to_value(fam));
        self.field("normalization", to_value(t));
    }

    fn witness_lines(&mut self, w: &Witness, t: &AxisTransform) {
        self.line(format!(
            "witness: {} translate [{}, {}] x [{}, {}] contains no point ({:?})",
            w.rect, w.lower_left.x, w.upper_right.x, w.lower_left.y, w.upper_right.y, w.source
        ));
        self.line(format!("witness json: {}", to_value(w)));
        if !t.is_identity() {
            let inv = t.inverse();
            let (p, q) = (inv.apply(&w.lower_left), inv.apply(&w.upper_right));
            self.line(format!("witness in input units: [{}, {}] x [{}, {}]", p.x, q.x, p.y, q.y));
        }
    }

    pub fn verdict(
        &mut self,
        basis: &LatticeBasis,
        fam: &RectFamily,
        v: &PiercingVerdict,
        t: &AxisTransform,
    ) -> Result<(), Failure> {
        let cb = &v.certificate.canonical;
        self.line(format!("basis: {}", vectors(basis)));
        self.line(format!("canonical: {} via {}", cb.basis, cb.family_transform));
        self.line(format!("area: {}", approx(&v.area)));
        self.line(format!(
            "line spacings: horizontal {}, vertical {}",
            v.certificate.h_spacing, v.certificate.v_spacing
        ));
        self.line(format!("maximal supported rectangles: {}", v.certificate.max_rects.len()));
        self.line(format!("pierced: {}", if v.pierced { "yes" } else { "no" }));
        if let Some(w) = &v.witness {
            self.witness_lines(w, t);
        }
        self.field("basis", to_value(basis));
        self.field("verdict", to_value(v));
        self.svg_lattice("decide.svg", basis, fam)
    }

    pub fn cross_check(&mut self, oracle: bool, funnel_ok: bool) {
        self.line(format!("oracle verdict: {}", if oracle { "pierced" } else { "not pierced" }));
        self.line(format!("funnel matches brute force: {}", if funnel_ok { "yes" } else { "NO" }));
        self.field("crossCheck", json!({ "oraclePierced": oracle, "funnelMatchesBruteForce": funnel_ok }));
    }

    pub fn solve_result(&mut self, res: &SolveResult, t: &AxisTransform) -> Result<(), Failure> {
        self.line(format!("optimal area: {}", approx(&res.optimal_area)));
        self.line(format!("optimal density: {}", res.optimal_area.recip()));
        self.line(format!("optimal lattices: {}", res.lattices.len()));
        let mut listed: Vec<&LatticeBasis> = res.lattices.iter().map(|cb| &cb.basis).collect();
        listed.sort_by(|x, y| y.area().cmp(&x.area()).then_with(|| x.cmp(y)));
        for b in listed {
            self.line(appendix_line(b));
        }
        if !res.generators.is_empty() {
            self.line(format!("generating bases before deduplication: {}", res.generators.len()));
            let mut gens: Vec<&LatticeBasis> = res.generators.iter().collect();
            gens.sort_by(|x, y| y.area().cmp(&x.area()).then_with(|| x.cmp(y)));
            for g in gens {
                self.line(format!("  {}", appendix_line(g)));
            }
        }
        if !t.is_identity() {
            self.line("(lattices are in normalized units)");
        }
        let caps: Vec<String> = res.bounds.per_rect.iter().map(u32::to_string).collect();
        self.line(format!("coefficient caps per rectangle: {}", caps.join(" ")));
        let s = &res.stats;
        self.line(format!(
            "passes {}, systems {}, x-pairs {}, y-pairs {}, joined {}, shape-pruned {}, canonical {}, tested {}, piercing {}",
            s.passes, s.generated, s.ac_pairs, s.bd_pairs, s.joined, s.pruned_shape, s.canonical, s.tested, s.piercing
        ));
        self.line(format!("elapsed: {} ms", res.elapsed_ms));
        self.field("solve", to_value(res));
        for (n, cb) in res.lattices.iter().enumerate() {
            let input_frame = cb.basis.transformed(&cb.family_transform.inverse());
            self.svg_lattice(&format!("lattice-{}.svg", n + 1), &input_frame, &res.family)?;
        }
        Ok(())
    }

    pub fn periodic_verdict(
        &mut self,
        ps: &PeriodicSet,
        fam: &RectFamily,
        v: &PeriodicVerdict,
        t: &AxisTransform,
    ) -> Result<(), Failure> {
        self.line(format!("tile: {} x {}, {} points", ps.tile_w, ps.tile_h, ps.points.len()));
        self.line(format!("density: {}", v.density));
        self.line(format!("single lattice coset: {}", if ps.is_lattice() { "yes" } else { "no" }));
        self.line(format!("pierced: {}", if v.pierced { "yes" } else { "no" }));
        if let Some(w) = &v.witness {
            self.witness_lines(w, t);
        }
        self.field("set", to_value(ps));
        self.field("verdict", to_value(v));
        self.svg_periodic("periodic.svg", ps, fam)
    }

    pub fn search_result(
        &mut self,
        fam: &RectFamily,
        tile: usize,
        count: usize,
        sets: &[PeriodicSet],
    ) -> Result<(), Failure> {
        self.line(format!("search: {count} points on a {tile} x {tile} torus, {} set(s) up to symmetry", sets.len()));
        let mut listed = Vec::new();
        for (n, ps) in sets.iter().enumerate() {
            let pts: Vec<String> = ps.points.iter().map(|p| format!("({}, {})", p.x, p.y)).collect();
            let lattice = ps.is_lattice();
            self.line(format!("  #{} {}{}", n + 1, pts.join(" "), if lattice { "  [lattice]" } else { "" }));
            listed.push(json!({ "set": to_value(ps), "isLattice": lattice }));
            self.svg_periodic(&format!("periodic-{}.svg", n + 1), ps, fam)?;
        }
        self.field("search", json!({ "tile": tile, "count": count, "sets": listed }));
        Ok(())
    }

    pub fn canonical(&mut self, b: &LatticeBasis, cb: &CanonicalBasis) {
        let m = metrics(cb);
        self.line(format!("basis: {}", vectors(b)));
        self.line(format!("canonical: {}  ({})", cb.basis, vectors(&cb.basis)));
        self.line(format!("frame: {}", cb.family_transform));
        self.line(format!("area: {}", approx(&m.area)));
        self.line(format!("lambda^2: {}", cb.lambda2));
        self.line(format!("mu^2: {}", cb.mu2));
        self.line(format!("line spacings: horizontal {}, vertical {}", m.h_spacing, m.v_spacing));
        self.field("basis", to_value(b));
        self.field("canonical", to_value(cb));
        self.field("metrics", to_value(&m));
    }

    pub fn finish(&mut self) -> Result<Outcome, Failure> {
        match self.format {
            Format::Json => {
                let doc = Value::Object(std::mem::take(&mut self.json));
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            Format::Text => {
                for l in self.lines.drain(..) {
                    println!("{l}");
                }
            }
            Format::Svg => {
                for l in self.lines.drain(..) {
                    println!("{l}");
                }
                for f in self.files.drain(..) {
                    println!("wrote {}", f.display());
                }
            }
        }
        Ok(Outcome::Success)
    }
}
