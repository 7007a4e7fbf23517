use porism_core::chain::{chain_at_with, SteinerChain};
use porism_core::porism::fit_outer_conic;
use porism_core::{Point, PorismConfig, PrincipalForm, ToleranceSet};
use std::fmt::Write as _;

const SIZE: f64 = 800.0;
/// Locus points farther than this many median distances from the caustic
/// center are drawn but do not widen the view.
const OUTLIER_FACTOR: f64 = 20.0;

#[derive(Debug, Clone, Copy)]
struct Bounds {
    min: Point,
    max: Point,
}

impl Bounds {
    fn empty() -> Self {
        Self { min: Point::new(f64::INFINITY, f64::INFINITY), max: Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY) }
    }

    fn add(&mut self, p: Point) {
        if p.is_finite() {
            self.min = Point::new(self.min.x.min(p.x), self.min.y.min(p.y));
            self.max = Point::new(self.max.x.max(p.x), self.max.y.max(p.y));
        }
    }

    fn add_disc(&mut self, c: Point, r: f64) {
        self.add(c + Point::new(r, r));
        self.add(c - Point::new(r, r));
    }

    fn padded(self, f: f64) -> Self {
        let pad = (self.max - self.min) * f;
        let m = pad.x.max(pad.y).max(1e-9);
        Self { min: self.min - Point::new(m, m), max: self.max + Point::new(m, m) }
    }

    fn diagonal(&self) -> f64 {
        self.min.distance(self.max)
    }
}

struct Pen {
    digits: usize,
}

impl Pen {
    fn f(&self, v: f64) -> String {
        let s = format!("{:.*}", self.digits, v);
        if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
            s[1..].to_string()
        } else {
            s
        }
    }

    /// SVG's y axis points down.
    fn xy(&self, p: Point) -> String {
        format!("{},{}", self.f(p.x), self.f(-p.y))
    }

    fn path(&self, pts: &[Point], closed: bool) -> String {
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let _ = write!(d, "{}{}", if i == 0 { "M" } else { " L" }, self.xy(*p));
        }
        if closed {
            d.push_str(" Z");
        }
        d
    }
}

/// Polylines for the outer conic, long enough to leave a box of diagonal `reach`.
fn conic_paths(form: &PrincipalForm, reach: f64) -> Vec<(Vec<Point>, bool)> {
    const STEPS: usize = 720;
    match *form {
        PrincipalForm::Central { center, axis, a, b, hyperbola: false } => {
            let pts = (0..STEPS)
                .map(|i| {
                    let th = std::f64::consts::TAU * i as f64 / STEPS as f64;
                    center + axis * (a * th.cos()) + axis.perp() * (b * th.sin())
                })
                .collect();
            vec![(pts, true)]
        }
        PrincipalForm::Central { center, axis, a, b, hyperbola: true } => {
            let smax = (reach / a.min(b)).asinh();
            [1.0, -1.0]
                .iter()
                .map(|&side| {
                    let pts = (0..=STEPS)
                        .map(|i| {
                            let s = smax * (2.0 * i as f64 / STEPS as f64 - 1.0);
                            center + axis * (side * a * s.cosh()) + axis.perp() * (b * s.sinh())
                        })
                        .collect();
                    (pts, false)
                })
                .collect()
        }
        PrincipalForm::Parabola { vertex, axis, focal_length } => {
            let umax = reach.max(4.0 * focal_length);
            let pts = (0..=STEPS)
                .map(|i| {
                    let u = umax * (2.0 * i as f64 / STEPS as f64 - 1.0);
                    vertex + axis * (u * u / (4.0 * focal_length)) + axis.perp() * u
                })
                .collect();
            vec![(pts, false)]
        }
    }
}

/// The chain at t = 0, or at a quarter or half period when a circle at
/// t = 0 is (nearly) a line through the inversion center.
fn first_chain(cfg: &PorismConfig, tol: &ToleranceSet) -> Option<SteinerChain> {
    let scale = cfg.r().max(cfg.x0()).max(cfg.lambda());
    let sane = |ch: &SteinerChain| {
        let limit = 1e3 * ch.caustic.radius.max(scale);
        ch.circles.iter().all(|c| c.radius < limit)
    };
    [0.0, 0.25, 0.5]
        .iter()
        .find_map(|f| chain_at_with(cfg, f * cfg.period(), tol).ok().filter(sane))
        .or_else(|| chain_at_with(cfg, 0.0, tol).ok())
}

/// Static SVG 1.1 figure with the groups `outer-conic`, `caustic`, `chain`
/// and `locus`. `locus` holds the sampled center positions, `None` marking gaps.
pub fn render(cfg: &PorismConfig, tol: &ToleranceSet, locus: Option<(u32, &[Option<Point>])>) -> String {
    let chain = first_chain(cfg, tol);
    let form = fit_outer_conic(cfg, 90, tol).ok().and_then(|f| f.conic.principal_form().ok());

    let mut b = Bounds::empty();
    if let Some(ch) = &chain {
        for c in &ch.circles {
            b.add_disc(c.center, c.radius);
        }
        b.add_disc(ch.caustic.center, ch.caustic.radius);
    }
    if let Some(PrincipalForm::Central { center, a, hyperbola: false, .. }) = form {
        b.add_disc(center, a);
    }
    if let Some((_, pts)) = locus {
        let anchor = chain.as_ref().map_or(Point::new(cfg.x0(), 0.0), |ch| ch.caustic.center);
        let mut d: Vec<f64> = pts.iter().flatten().map(|p| p.distance(anchor)).collect();
        d.sort_by(f64::total_cmp);
        let cut = d.get(d.len() / 2).map_or(f64::INFINITY, |m| OUTLIER_FACTOR * m);
        for p in pts.iter().flatten().filter(|p| p.distance(anchor) <= cut) {
            b.add(*p);
        }
    }
    if !b.min.is_finite() {
        b.add_disc(Point::new(cfg.x0(), 0.0), cfg.r().max(cfg.lambda()));
    }
    let b = b.padded(0.08);
    let diag = b.diagonal();
    let pen = Pen { digits: (7.0 - diag.log10().floor()).clamp(2.0, 14.0) as usize };
    let stroke = pen.f(diag * 0.0025);
    let (w, h) = (b.max.x - b.min.x, b.max.y - b.min.y);
    let (pw, ph) = if w >= h { (SIZE, SIZE * h / w) } else { (SIZE * w / h, SIZE) };

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        pen.f(pw),
        pen.f(ph),
        pen.f(b.min.x),
        pen.f(-b.max.y),
        pen.f(w),
        pen.f(h)
    );
    let _ = writeln!(s, "<title>N={} R={} x0={} lambda={}</title>", cfg.n(), cfg.r(), cfg.x0(), cfg.lambda());

    let _ = writeln!(s, "<g id=\"outer-conic\" fill=\"none\" stroke=\"#1f4e99\" stroke-width=\"{stroke}\">");
    if let Some(form) = &form {
        for (pts, closed) in conic_paths(form, 4.0 * diag) {
            let _ = writeln!(s, "<path d=\"{}\"/>", pen.path(&pts, closed));
        }
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, "<g id=\"caustic\" fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"{stroke}\">");
    if let Some(ch) = &chain {
        let c = ch.caustic;
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            pen.f(c.center.x),
            pen.f(-c.center.y),
            pen.f(c.radius)
        );
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, "<g id=\"chain\" fill=\"none\" stroke=\"#555555\" stroke-width=\"{stroke}\">");
    if let Some(ch) = &chain {
        for c in &ch.circles {
            let _ = writeln!(
                s,
                "<circle cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                pen.f(c.center.x),
                pen.f(-c.center.y),
                pen.f(c.radius)
            );
        }
        let _ = writeln!(s, "<path stroke=\"#000000\" d=\"{}\"/>", pen.path(&ch.centers(), true));
    }
    s.push_str("</g>\n");

    let _ = writeln!(s, "<g id=\"locus\" fill=\"none\" stroke=\"#1e8449\" stroke-width=\"{stroke}\">");
    if let Some((k, pts)) = locus {
        let _ = writeln!(s, "<desc>X{k}</desc>");
        let mut runs: Vec<Vec<Point>> = vec![Vec::new()];
        for p in pts {
            match (p, runs.last_mut().and_then(|r| r.last().copied())) {
                (None, _) => runs.push(Vec::new()),
                (Some(p), Some(q)) if p.distance(q) > diag => runs.push(vec![*p]),
                (Some(p), _) => runs.last_mut().expect("non-empty").push(*p),
            }
        }
        for run in runs.iter().filter(|r| r.len() > 1) {
            let _ = writeln!(s, "<path d=\"{}\"/>", pen.path(run, false));
        }
        if let Some(p) = pts.iter().flatten().next() {
            let _ = writeln!(
                s,
                "<circle fill=\"#1e8449\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                pen.f(p.x),
                pen.f(-p.y),
                pen.f(diag * 0.004)
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    s
}
