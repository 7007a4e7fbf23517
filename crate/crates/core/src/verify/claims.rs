use super::{Claim, Outcome, Status, Suite};
use crate::centers::{intouch_triangle, is_acute, kimberling, CenterId, Triangle};
use crate::chain::closed_form::X6Reading;
use crate::chain::{chain_at_with, closed_form, PorismConfig, Regime, SteinerChain};
use crate::error::PorismError;
use crate::geom::{
    conic_from_points_with, conic_from_tangent_lines, point_in_polygon, Circle, ConicKind, FocalData, GCircle, Line,
    Point, Polygon, PrincipalForm,
};
use crate::invariants::{
    centroid_ratio_check, chain_pedal_cot_sums, curvature_reports, descartes_check, half_tangent_reports,
    half_tangent_sum, half_tangent_sum_from_radii, sweep_chains, SignRule,
};
use crate::locus::{
    circle_as_axis_conic, classify_locus_scaled, classify_sweep, ellipse_circle_contacts, parabola_orthocenters,
    polynomial_residual, sweep_center, triangle_at, x4_in_parabola_frame, x4_parabola_line, LocusKind, LocusParams,
    ParabolaFamily,
};
use crate::porism::{
    branch_state, centroids, fit_outer_conic, homothetic_triangle, pedal_feet, pedal_polygon_at_with,
    polar_image_polygon, polygon_at_with, BranchState,
};

/// Registered claims, sorted by id.
pub(super) static CLAIMS: &[Claim] = &[
    Claim {
        id: "brocard_closed_form",
        anchor: "Brocard inellipse (caustic of the pedal family)",
        run: brocard_closed_form,
    },
    Claim { id: "caustic_closed_form", anchor: "The parameters of the caustic C=(I,r)", run: caustic_closed_form },
    Claim { id: "centroid_loci", anchor: "the locus of the perimeter centroid", run: centroid_loci },
    Claim { id: "centroid_ratio", anchor: "(C1-O)=(3/2)(C2-O)", run: centroid_ratio },
    Claim { id: "conic_regime", anchor: "inscribed in a conic", run: conic_regime },
    Claim {
        id: "contacts_concyclic",
        anchor: "points of contact between consecutive circles in the chain are concyclic",
        run: contacts_concyclic,
    },
    Claim { id: "curvature_moments", anchor: "sum of the k-th powers of curvatures", run: curvature_moments },
    Claim { id: "descartes", anchor: "Hence 1/rho=(1/r4+1/r5)/2", run: descartes },
    Claim { id: "eversion", anchor: "oscillate between two states", run: eversion },
    Claim { id: "foci_closed_form", anchor: "coordinates of foci f1 and f2", run: foci_closed_form },
    Claim { id: "foci_soddy_centers", anchor: "foci of E are the centers", run: foci_soddy_centers },
    Claim { id: "half_tangent_conservation", anchor: "The P family conserves", run: half_tangent_conservation },
    Claim { id: "half_tangent_radii", anchor: "tan(theta_i/2)=r/r_i", run: half_tangent_radii },
    Claim { id: "homothetic_polar_image", anchor: "centered on one of its inner foci", run: homothetic_polar_image },
    Claim {
        id: "intouch_coincidence",
        anchor: "its circumcenter X3 (resp. symmedian X6) coincides",
        run: intouch_coincidence,
    },
    Claim { id: "loci_circles", anchor: "13, 14, 15, 16, 80 are circles", run: loci_circles },
    Claim { id: "loci_conics", anchor: "2, 3, 4, 5 are conics; 6, 8, 9, 10 are also conics", run: loci_conics },
    Claim { id: "loci_segments", anchor: "20, 77, 170 are segments along the major axis", run: loci_segments },
    Claim { id: "parabola_aspect_ratio", anchor: "aspect ratio is sqrt(5)/2", run: parabola_aspect_ratio },
    Claim {
        id: "parabola_soddy_line",
        anchor: "S' becomes a line parallel to the directrix",
        run: parabola_soddy_line,
    },
    Claim { id: "pedal_cotangents", anchor: "conserved and identical", run: pedal_cotangents },
    Claim { id: "pedal_relation", anchor: "P is the pedal polygon of H with respect to I", run: pedal_relation },
    Claim { id: "ponceletian", anchor: "The family P is Ponceletian", run: ponceletian },
    Claim {
        id: "sign_flip_rule",
        anchor: "flipped for the two angles whose neighboring vertices lie on different branches",
        run: sign_flip_rule,
    },
    Claim {
        id: "soddy_centers_stationary",
        anchor: "X175 and X176 are the foci of the outer conic",
        run: soddy_centers_stationary,
    },
    Claim {
        id: "symmedian_proportional",
        anchor: "distance to the sides are a constant proportion",
        run: symmedian_proportional,
    },
    Claim { id: "symmetric_reductions", anchor: "inversion circle centered at inv=(x0,0)", run: symmetric_reductions },
    Claim { id: "tangent_sides", anchor: "the sides of P are tangent to C", run: tangent_sides },
    Claim { id: "tau_trichotomy", anchor: "less than, equal, or greater than two", run: tau_trichotomy },
    Claim {
        id: "x105_tangent_circle",
        anchor: "circle centered on the major axis of E and tangent",
        run: x105_tangent_circle,
    },
    Claim { id: "x15_circle", anchor: "the locus X15 is the circle", run: x15_circle_claim },
    Claim { id: "x1_x7_stationary", anchor: "X1 and X7 are stationary", run: x1_x7_stationary },
    Claim { id: "x20_segment", anchor: "The locus of X20 is a segment", run: x20_segment_claim },
    Claim { id: "x234_conics", anchor: "The loci of X2, X3 and X4 are the conics", run: x234_conics },
    Claim { id: "x4_general_parabola", anchor: "do not depend on a", run: x4_general_parabola },
    Claim { id: "x4_parabola_line", anchor: "y=-7c/4", run: x4_steiner_soddy_line },
    Claim { id: "x4_parabola_remark", anchor: "the locus of X4 is the line y=-4c+x0^2/(4c)", run: x4_parabola_remark },
    Claim { id: "x6_conic", anchor: "The locus of X6", run: x6_conic_claim },
];

/// Running maximum that treats NaN as infinitely bad.
#[derive(Debug, Clone, Copy, Default)]
struct Worst(f64);

impl Worst {
    fn add(&mut self, v: f64) {
        self.0 = if v.is_nan() { f64::INFINITY } else { self.0.max(v) };
    }
}

fn not_exercised() -> Outcome {
    Outcome::fail("not exercised by the suite")
}

fn members(s: &Suite, pred: impl Fn(&PorismConfig, Regime) -> bool) -> Vec<&PorismConfig> {
    s.configs.iter().filter(|c| pred(c, s.regime(c))).collect()
}

fn chains(s: &Suite, c: &PorismConfig) -> Vec<SteinerChain> {
    sweep_chains(c, s.samples, &s.tolerances)
}

fn id(k: u32) -> CenterId {
    CenterId::new(k).expect("supported center")
}

fn n3_ellipse(c: &PorismConfig, r: Regime) -> bool {
    c.n() == 3 && r == Regime::Ellipse && c.x0() > 0.0
}

/// Members with the inversion center inside the inner pre-image Soddy circle.
fn n3_inner_ellipse(c: &PorismConfig, r: Regime) -> bool {
    n3_ellipse(c, r) && c.x0() < c.r() * (1.0 - c.alpha().sin())
}

fn scale_of(points: &[Point]) -> f64 {
    points.iter().map(|p| p.norm()).fold(0.0, f64::max)
}

fn run<F: FnOnce() -> Result<Outcome, PorismError>>(f: F) -> Outcome {
    f().unwrap_or_else(|e| Outcome::fail(e.to_string()))
}

fn tangent_sides(s: &Suite) -> Outcome {
    let mut w = Worst::default();
    for c in &s.configs {
        for ch in chains(s, c) {
            let poly = Polygon::new(ch.centers(), 0.0).ok();
            let Some(poly) = poly else { continue };
            let k = ch.caustic;
            let scale = scale_of(poly.vertices()).max(k.radius).max(k.center.norm());
            for l in poly.side_lines() {
                w.add((l.distance(k.center) - k.radius).abs() / scale);
            }
        }
    }
    Outcome::judge(w.0, s.tolerances.geometry)
}

fn contacts_concyclic(s: &Suite) -> Outcome {
    let mut w = Worst::default();
    for c in &s.configs {
        for ch in chains(s, c) {
            let k = ch.caustic;
            let scale = k.radius.max(k.center.norm());
            for p in &ch.contacts {
                w.add((p.distance(k.center) - k.radius).abs() / scale);
            }
        }
    }
    Outcome::judge(w.0, s.tolerances.geometry)
}

/// Largest normalized residual of the swept vertices on the fitted outer conic.
fn ponceletian(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-8;
    run(|| {
        let mut w = Worst::default();
        for c in &s.configs {
            let fit = fit_outer_conic(c, s.samples / 4, &s.tolerances)?;
            for ch in chains(s, c) {
                for v in ch.centers() {
                    let q = fit.to_normalized(v);
                    // vertices thrown far out along an asymptote are not resolved by the fit
                    if q.norm() < 20.0 {
                        w.add(fit.normalized.eval(q).abs());
                    }
                }
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

fn conic_regime(s: &Suite) -> Outcome {
    run(|| {
        let mut wrong = Vec::new();
        for c in &s.configs {
            let kind = fit_outer_conic(c, s.samples / 4, &s.tolerances)?.kind();
            let ok = match s.regime(c) {
                Regime::Ellipse => matches!(kind, ConicKind::Ellipse | ConicKind::Circle),
                Regime::Parabola => kind == ConicKind::Parabola,
                Regime::Hyperbola => kind == ConicKind::Hyperbola,
            };
            if !ok {
                wrong.push(format!("N={} x0={}: {kind:?}", c.n(), c.x0()));
            }
        }
        Ok(Outcome::judge(wrong.len() as f64, 0.0).with_note(wrong.join("; ")))
    })
}

fn soddy_centers(ch: &SteinerChain) -> Option<(Point, Point)> {
    match (ch.soddy_inner, ch.soddy_outer) {
        (GCircle::Circle(a), GCircle::Circle(b)) => Some((a.center, b.center)),
        _ => None,
    }
}

fn pair_distance(a: (Point, Point), b: (Point, Point)) -> f64 {
    (a.0.distance(b.0).max(a.1.distance(b.1))).min(a.0.distance(b.1).max(a.1.distance(b.0)))
}

fn foci_soddy_centers(s: &Suite) -> Outcome {
    run(|| {
        let ms = members(s, |c, r| r != Regime::Parabola && c.x0() > 0.0);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            let fit = fit_outer_conic(c, s.samples / 4, &s.tolerances)?;
            let FocalData::Foci(f1, f2) = fit.conic.foci()? else {
                return Ok(Outcome::fail("fitted conic has no foci pair"));
            };
            let ch = chain_at_with(c, c.sample_phase(0, 7), &s.tolerances)?;
            let Some(sc) = soddy_centers(&ch) else { continue };
            let scale = scale_of(&[sc.0, sc.1]).max(c.r());
            w.add(pair_distance((f1, f2), sc) / scale);
        }
        Ok(Outcome::judge(w.0, s.tolerances.conic))
    })
}

fn parabola_soddy_line(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-8;
    run(|| {
        let ms = members(s, |_, r| r == Regime::Parabola);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            let fit = fit_outer_conic(c, s.samples / 4, &s.tolerances)?;
            let FocalData::FocusDirectrix { directrix, .. } = fit.conic.foci()? else {
                return Ok(Outcome::fail("fitted conic is not a parabola"));
            };
            for ch in chains(s, c).iter().step_by(17) {
                let line = match (ch.soddy_inner, ch.soddy_outer) {
                    (GCircle::Line(l), GCircle::Circle(_)) | (GCircle::Circle(_), GCircle::Line(l)) => l,
                    _ => return Ok(Outcome::fail("expected exactly one Soddy image to be a line")),
                };
                w.add(line.angle_to(&directrix));
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

fn max_relative(reports: &[crate::invariants::InvariantReport]) -> f64 {
    let mut w = Worst::default();
    for r in reports {
        w.add(r.relative_deviation);
    }
    w.0
}

fn half_tangent_conservation(s: &Suite) -> Outcome {
    run(|| {
        let mut w = Worst::default();
        for c in &s.configs {
            w.add(max_relative(&half_tangent_reports(c, s.samples, SignRule::DistalVertex, &s.tolerances)?));
        }
        Ok(Outcome::judge(w.0, s.tolerances.invariant))
    })
}

/// The printed rule negates the two neighbors of the far-branch vertex; the
/// oracle negates the far-branch vertex itself.
fn sign_flip_rule(s: &Suite) -> Outcome {
    run(|| {
        let ms = members(s, |_, r| r == Regime::Hyperbola);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let (mut printed, mut oracle) = (Worst::default(), Worst::default());
        for c in ms {
            printed.add(max_relative(&half_tangent_reports(c, s.samples, SignRule::NeighborPair, &s.tolerances)?));
            oracle.add(max_relative(&half_tangent_reports(c, s.samples, SignRule::DistalVertex, &s.tolerances)?));
        }
        let o = Outcome::printed(printed.0, oracle.0, s.tolerances.invariant);
        let note = if o.status == Status::SuspectedTypo {
            format!("negating only the far-branch vertex conserves every power sum (deviation {:.1e})", oracle.0)
        } else {
            String::new()
        };
        Ok(o.with_note(note))
    })
}

fn half_tangent_radii(s: &Suite) -> Outcome {
    run(|| {
        let mut w = Worst::default();
        for c in &s.configs {
            for ch in chains(s, c) {
                for k in 1..c.n() as i32 {
                    let a = half_tangent_sum(&ch, k, SignRule::DistalVertex)?;
                    let b = half_tangent_sum_from_radii(&ch, k, SignRule::DistalVertex);
                    w.add((a - b).abs() / b.abs().max(1.0));
                }
            }
        }
        Ok(Outcome::judge(w.0, s.tolerances.invariant))
    })
}

fn curvature_moments(s: &Suite) -> Outcome {
    let mut w = Worst::default();
    for c in &s.configs {
        w.add(max_relative(&curvature_reports(c, s.samples, &s.tolerances)));
    }
    Outcome::judge(w.0, s.tolerances.invariant)
}

fn descartes(s: &Suite) -> Outcome {
    run(|| {
        let ms = members(s, |c, _| c.n() == 3);
        let mut w = Worst::default();
        for c in &ms {
            for ch in chains(s, c) {
                w.add(descartes_check(c, &ch)?.relative);
            }
        }
        Ok(if ms.is_empty() { not_exercised() } else { Outcome::judge(w.0, s.tolerances.geometry) })
    })
}

fn tau_trichotomy(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-8;
    run(|| {
        let ms = members(s, |c, _| c.n() == 3);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            let regime = s.regime(c);
            for ch in chains(s, c) {
                let tau = half_tangent_sum(&ch, 1, SignRule::DistalVertex)?;
                w.add(match regime {
                    Regime::Ellipse => (tau - 2.0 + TOL).max(0.0),
                    Regime::Parabola => (tau - 2.0).abs(),
                    Regime::Hyperbola => (2.0 + TOL - tau).max(0.0),
                });
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

fn eversion(s: &Suite) -> Outcome {
    run(|| {
        let ms = members(s, |_, r| r == Regime::Hyperbola);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let samples = 10 * s.samples;
        let mut disagreements = 0usize;
        let mut both = true;
        for c in ms {
            let (mut split, mut single) = (false, false);
            for j in 0..samples {
                let t = c.sample_phase(j, samples);
                let (Ok(st), Ok(h)) = (branch_state(c, t, &s.tolerances), pedal_polygon_at_with(c, t, &s.tolerances))
                else {
                    continue;
                };
                let i = chain_at_with(c, t, &s.tolerances)?.caustic.center;
                let outside = !point_in_polygon(i, &h, 0.0);
                split |= st == BranchState::SplitBranch;
                single |= st == BranchState::SingleBranch;
                if (st == BranchState::SplitBranch) != outside {
                    disagreements += 1;
                }
            }
            if c.n() == 3 {
                both &= split && single;
            }
        }
        let o = Outcome::judge(disagreements as f64, 0.0);
        Ok(if both {
            o
        } else {
            Outcome { status: Status::Fail, ..o }.with_note("an N = 3 member never changed state")
        })
    })
}

/// The printed direction (P as the pedal of H) against the converse (H as
/// the pedal of P), both about I.
fn pedal_relation(s: &Suite) -> Outcome {
    let (mut printed, mut converse) = (Worst::default(), Worst::default());
    for c in &s.configs {
        for ch in chains(s, c) {
            let i = ch.caustic.center;
            let (Ok(p), Ok(h)) = (Polygon::new(ch.centers(), 0.0), Polygon::new(ch.contacts.clone(), 0.0)) else {
                continue;
            };
            let scale = scale_of(p.vertices()).max(scale_of(h.vertices()));
            let feet_h = pedal_feet(&h, i);
            let n = p.len();
            let best = (0..n)
                .map(|shift| (0..n).map(|k| feet_h[k].distance(p.vertex(k + shift))).fold(0.0, f64::max))
                .fold(f64::INFINITY, f64::min);
            printed.add(best / scale);
            let feet_p = pedal_feet(&p, i);
            converse.add(feet_p.iter().zip(h.vertices()).map(|(a, b)| a.distance(*b)).fold(0.0, f64::max) / scale);
        }
    }
    let o = Outcome::printed(printed.0, converse.0, s.tolerances.geometry);
    let note = if o.status == Status::SuspectedTypo {
        format!("H is the I-pedal polygon of P (residual {:.1e}); P is its antipedal", converse.0)
    } else {
        String::new()
    };
    o.with_note(note)
}

fn centroid_ratio(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-9;
    let mut w = Worst::default();
    let mut skipped = 0;
    for c in s.configs.iter().filter(|c| c.x0() > 0.0) {
        for ch in chains(s, c) {
            let Ok(p) = Polygon::new(ch.centers(), 0.0) else { continue };
            match centroid_ratio_check(&p, ch.caustic.center) {
                Ok((col, ratio)) => {
                    w.add(col);
                    w.add(ratio);
                }
                Err(_) => skipped += 1,
            }
        }
    }
    let o = Outcome::judge(w.0, TOL);
    if skipped > 0 {
        o.with_note(format!("{skipped} phases with a centroid at I skipped"))
    } else {
        o
    }
}

/// The three centroids trace conics centered on the x-axis with axes along
/// the coordinate axes (ellipse-regime members).
fn centroid_loci(s: &Suite) -> Outcome {
    run(|| {
        let ms = members(s, |c, r| r == Regime::Ellipse && c.x0() > 0.0);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        let mut wrong = Vec::new();
        for c in ms {
            let mut sets = [Vec::new(), Vec::new(), Vec::new()];
            for j in 0..s.samples {
                let Ok(p) = polygon_at_with(c, c.sample_phase(j, s.samples), &s.tolerances) else { continue };
                let (c0, c1, c2) = centroids(&p)?;
                sets[0].push(c0);
                sets[1].push(c1);
                sets[2].push(c2);
            }
            for (name, pts) in ["C0", "C1", "C2"].iter().zip(&sets) {
                let r = classify_locus_scaled(pts, c.r(), &s.tolerances)?;
                let LocusParams::Conic(conic) = r.params else {
                    wrong.push(format!("N={} x0={} {name}: {:?}", c.n(), c.x0(), r.kind));
                    continue;
                };
                let PrincipalForm::Central { center, axis, .. } = conic.principal_form()? else {
                    wrong.push(format!("N={} {name}: not central", c.n()));
                    continue;
                };
                w.add(center.y.abs() / scale_of(pts).max(c.r()));
                w.add(axis.x.abs().min(axis.y.abs()));
            }
        }
        let o = Outcome::judge(if wrong.is_empty() { w.0 } else { f64::INFINITY }, s.tolerances.conic);
        Ok(o.with_note(wrong.join("; ")))
    })
}

/// Residuals of the polar image of the homothetic triangle family (outer
/// ellipse `(a, b)`, caustic `(a/2, b/2)`) about the unit circle centered at
/// `focus`: `(vertex conic fit, side-envelope circularity)`.
pub fn homothetic_polar_residuals(a: f64, b: f64, focus: Point, samples: usize) -> Result<(f64, f64), PorismError> {
    let tol = crate::tolerance::ToleranceSet::default();
    let inv = Circle::new(focus, 1.0);
    let mut verts = Vec::new();
    let mut lines: Vec<Line> = Vec::new();
    for j in 0..samples {
        let t = (j as f64 + 0.5) * std::f64::consts::TAU / (3 * samples) as f64;
        let Ok(img) = polar_image_polygon(&homothetic_triangle(a, b, t), &inv, &tol) else { continue };
        if scale_of(img.vertices()) > 1e3 {
            continue;
        }
        verts.extend_from_slice(img.vertices());
        lines.extend(img.side_lines());
    }
    let vfit = conic_from_points_with(&verts, tol.rank_separation, tol.classification)?;
    let env = conic_from_tangent_lines(&lines)?;
    let circularity = match env.conic.principal_form() {
        Ok(PrincipalForm::Central { a, b, hyperbola: false, .. }) => (a - b).abs() / a.max(b),
        _ => f64::INFINITY,
    };
    Ok((vfit.residual_rms, circularity.max(env.residual_rms)))
}

/// Polar image about an inner focus (the caustic's focus) should be
/// conic-inscribed and circumscribe a circle; the outer focus is the
/// cross-check.
fn homothetic_polar_image(s: &Suite) -> Outcome {
    run(|| {
        let (a, b): (f64, f64) = (2.0, 1.2);
        let c: f64 = (a * a - b * b).sqrt();
        let samples = s.samples.max(60);
        let (iv, ie) = homothetic_polar_residuals(a, b, Point::new(0.5 * c, 0.0), samples)?;
        let (ov, oe) = homothetic_polar_residuals(a, b, Point::new(c, 0.0), samples)?;
        let o = Outcome::printed(iv.max(ie), ov.max(oe), s.tolerances.conic);
        let note = format!(
            "inner focus: vertex conic {iv:.1e}, side envelope off a circle by {ie:.1e}; \
             outer focus: {ov:.1e}, {oe:.1e}"
        );
        Ok(o.with_note(note))
    })
}

fn pedal_cotangents(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-9;
    run(|| {
        let ms = members(s, |c, _| c.n() == 3);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            for ch in chains(s, c) {
                for k in [1, 2] {
                    let (l, r) = chain_pedal_cot_sums(&ch, SignRule::DistalVertex, k)?;
                    w.add((l - r).abs() / l.abs().max(1.0));
                }
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

fn parabola_aspect_ratio(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-9;
    run(|| {
        let ms = members(s, |c, r| c.n() == 3 && r == Regime::Parabola);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            w.add((closed_form::brocard_inellipse(c)?.aspect_ratio() - 5f64.sqrt() / 2.0).abs());
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

fn caustic_closed_form(s: &Suite) -> Outcome {
    run(|| {
        let (mut printed, mut cross) = (Worst::default(), Worst::default());
        for c in &s.configs {
            let k = closed_form::caustic(c)?;
            for ch in chains(s, c) {
                let scale = k.radius.max(k.center.norm());
                printed.add(ch.caustic.center.distance(k.center) / scale);
                printed.add((ch.caustic.radius - k.radius).abs() / k.radius);
                if let Ok(p) = Polygon::new(ch.centers(), 0.0) {
                    let v = scale_of(p.vertices()).max(scale);
                    for l in p.side_lines() {
                        cross.add((l.distance(ch.caustic.center) - ch.caustic.radius).abs() / v);
                    }
                }
            }
        }
        Ok(Outcome::printed(printed.0, cross.0, 1e-9))
    })
}

/// Printed foci against the Soddy image centers, printed vertex against the
/// fitted conic's vertices. Cross-check: fitted foci against Soddy centers.
fn foci_closed_form(s: &Suite) -> Outcome {
    run(|| {
        let ms = members(s, |c, r| r != Regime::Parabola && c.x0() > 0.0);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let (mut printed, mut cross) = (Worst::default(), Worst::default());
        for c in ms {
            let o = closed_form::outer_conic(c)?;
            let fit = fit_outer_conic(c, s.samples / 4, &s.tolerances)?;
            let ch = chain_at_with(c, c.sample_phase(0, 7), &s.tolerances)?;
            let Some(sc) = soddy_centers(&ch) else { continue };
            let scale = scale_of(&[sc.0, sc.1]).max(c.r());
            printed.add(pair_distance((o.f1, o.f2), sc) / scale);
            let PrincipalForm::Central { center, axis, a, .. } = fit.conic.principal_form()? else {
                return Ok(Outcome::fail("fitted outer conic is not central"));
            };
            let (v1, v2) = ((center + axis * a).x, (center - axis * a).x);
            printed.add((o.vertex_x - v1).abs().min((o.vertex_x - v2).abs()) / scale);
            let FocalData::Foci(g1, g2) = fit.conic.foci()? else { continue };
            cross.add(pair_distance((g1, g2), sc) / scale);
        }
        Ok(Outcome::printed(printed.0, cross.0, s.tolerances.conic))
    })
}

/// Printed Brocard inellipse against a dual-conic fit of the pedal
/// polygons' side lines; cross-check is the fit's own residual.
fn brocard_closed_form(s: &Suite) -> Outcome {
    run(|| {
        let (mut printed, mut cross) = (Worst::default(), Worst::default());
        let mut used = 0;
        for c in s.configs.iter().filter(|c| s.regime(c) != Regime::Hyperbola) {
            let Ok(b) = closed_form::brocard_inellipse(c) else { continue };
            let mut lines = Vec::new();
            for j in 0..s.samples / 4 {
                if let Ok(h) = pedal_polygon_at_with(c, c.sample_phase(j, s.samples / 4), &s.tolerances) {
                    lines.extend(h.side_lines());
                }
            }
            let scale = b.a.max(b.b).max(b.center.norm());
            if c.x0() == 0.0 {
                // the pedal polygons are regular: the envelope is the inscribed circle
                let h = pedal_polygon_at_with(c, 0.3, &s.tolerances)?;
                for l in h.side_lines() {
                    printed.add((l.distance(b.center) - b.a).abs() / scale);
                }
                printed.add((b.a - b.b).abs() / scale);
                used += 1;
                continue;
            }
            let fit = conic_from_tangent_lines(&lines)?;
            cross.add(fit.residual_rms);
            let PrincipalForm::Central { center, axis, a, b: bb, hyperbola: false } = fit.conic.principal_form()?
            else {
                return Ok(Outcome::fail("pedal envelope is not an ellipse"));
            };
            let (ax, by) = if axis.x.abs() >= axis.y.abs() { (a, bb) } else { (bb, a) };
            printed.add(center.distance(b.center) / scale);
            printed.add((ax - b.a).abs() / scale);
            printed.add((by - b.b).abs() / scale);
            used += 1;
        }
        if used == 0 {
            return Ok(not_exercised());
        }
        Ok(Outcome::printed(printed.0, cross.0, s.tolerances.conic))
    })
}

fn symmetric_reductions(s: &Suite) -> Outcome {
    run(|| {
        let ms = members(s, |c, _| c.x0() == 0.0);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            let k = closed_form::caustic(c)?;
            let expect = c.lambda() * c.lambda() / (c.r() * c.alpha().cos());
            w.add(k.center.norm() / expect);
            w.add((k.radius - expect).abs() / expect);
            let o = closed_form::outer_conic(c)?;
            w.add((o.f1.norm() + o.f2.norm()) / c.r());
            if c.n() == 3 {
                w.add(closed_form::x20_segment(c)?.length.abs() / c.r());
            }
        }
        Ok(Outcome::judge(w.0, 1e-12))
    })
}

fn locus_members(s: &Suite) -> Vec<&PorismConfig> {
    members(s, n3_inner_ellipse)
}

/// Printed implicit conic against sampled centers; cross-check: the samples
/// classify as a conic.
fn printed_locus(
    s: &Suite,
    k: u32,
    conic: impl Fn(&PorismConfig) -> Result<closed_form::AxisConic, PorismError>,
) -> Result<(Outcome, f64), PorismError> {
    let ms = locus_members(s);
    if ms.is_empty() {
        return Ok((not_exercised(), f64::NAN));
    }
    let (mut printed, mut cross) = (Worst::default(), Worst::default());
    for c in ms {
        let sweep = sweep_center(c, id(k), s.samples, &s.tolerances)?;
        printed.add(polynomial_residual(&sweep.valid(), &conic(c)?));
        let r = classify_sweep(&sweep, &s.tolerances)?;
        cross.add(if r.kind == LocusKind::Conic { r.fit_residual } else { f64::INFINITY });
    }
    Ok((Outcome::printed(printed.0, cross.0, s.tolerances.conic), printed.0))
}

fn x234_conics(s: &Suite) -> Outcome {
    run(|| {
        let (a, _) = printed_locus(s, 2, closed_form::x2_conic)?;
        let (b, _) = printed_locus(s, 3, closed_form::x3_conic)?;
        let (c, _) = printed_locus(s, 4, closed_form::x4_conic)?;
        let worst = [a, b, c].into_iter().max_by(|p, q| rank(p).cmp(&rank(q)).then(p.residual.total_cmp(&q.residual)));
        Ok(worst.expect("three outcomes"))
    })
}

fn rank(o: &Outcome) -> u8 {
    match o.status {
        Status::Pass => 0,
        Status::SuspectedTypo => 1,
        Status::Fail => 2,
    }
}

fn x6_conic_claim(s: &Suite) -> Outcome {
    run(|| {
        let (o, _) = printed_locus(s, 6, closed_form::x6_conic)?;
        let (_, plus) = printed_locus(s, 6, |c| closed_form::x6_conic_reading(c, X6Reading::Minus.other()))?;
        Ok(o.with_note(format!("constant term read with a minus sign; the plus reading leaves residual {plus:.1e}")))
    })
}

trait OtherReading {
    fn other(self) -> Self;
}

impl OtherReading for X6Reading {
    fn other(self) -> Self {
        match self {
            X6Reading::Minus => X6Reading::Plus,
            X6Reading::Plus => X6Reading::Minus,
        }
    }
}

fn x15_circle_claim(s: &Suite) -> Outcome {
    run(|| {
        let ms = locus_members(s);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let (mut printed, mut cross) = (Worst::default(), Worst::default());
        for c in ms {
            let sweep = sweep_center(c, id(15), s.samples, &s.tolerances)?;
            let circle = closed_form::x15_circle(c)?;
            printed.add(polynomial_residual(&sweep.valid(), &circle_as_axis_conic(&circle)));
            let r = classify_sweep(&sweep, &s.tolerances)?;
            cross.add(if r.kind == LocusKind::Circle { r.fit_residual } else { f64::INFINITY });
        }
        Ok(Outcome::printed(printed.0, cross.0, s.tolerances.conic))
    })
}

/// Abscissa of the de Longchamps point at phase `t`.
fn x20_x(c: &PorismConfig, t: f64, s: &Suite) -> Option<f64> {
    let tri = triangle_at(c, t, &s.tolerances).ok()?;
    kimberling(&tri, id(20)).ok().map(|p| p.x)
}

/// Golden-section refinement of an extremum of `sign * x20(t)` around `t0`.
fn refine_x20(c: &PorismConfig, t0: f64, h: f64, sign: f64, s: &Suite) -> Option<f64> {
    let f = |t: f64| x20_x(c, t, s).map(|x| -sign * x).unwrap_or(f64::INFINITY);
    let (mut lo, mut hi) = (t0 - h, t0 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..100 {
        let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(m1) < f(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    x20_x(c, 0.5 * (lo + hi), s)
}

/// Printed endpoints and length against the refined extremes of the sweep;
/// cross-check: the sweep classifies as a segment on the x-axis.
fn x20_segment_claim(s: &Suite) -> Outcome {
    run(|| {
        let ms = locus_members(s);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let (mut printed, mut cross) = (Worst::default(), Worst::default());
        for c in ms {
            let sweep = sweep_center(c, id(20), s.samples, &s.tolerances)?;
            let r = classify_sweep(&sweep, &s.tolerances)?;
            let LocusParams::Segment(p, q) = r.params else {
                cross.add(f64::INFINITY);
                continue;
            };
            cross.add(p.y.abs().max(q.y.abs()) / c.r());
            let xs: Vec<(f64, f64)> =
                sweep.phases.iter().zip(&sweep.points).filter_map(|(t, p)| p.map(|p| (*t, p.x))).collect();
            let h = c.period() / s.samples as f64;
            let (tmin, _) = xs.iter().copied().min_by(|a, b| a.1.total_cmp(&b.1)).expect("samples");
            let (tmax, _) = xs.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1)).expect("samples");
            let lo = refine_x20(c, tmin, h, -1.0, s).unwrap_or(f64::NAN);
            let hi = refine_x20(c, tmax, h, 1.0, s).unwrap_or(f64::NAN);
            let seg = closed_form::x20_segment(c)?;
            let (plo, phi) = seg.endpoints();
            let scale = phi.abs().max(plo.abs());
            printed.add((lo - plo).abs() / scale);
            printed.add((hi - phi).abs() / scale);
            printed.add(((hi - lo) - seg.length).abs() / seg.length.abs());
        }
        let o = Outcome::printed(printed.0, cross.0, s.tolerances.conic);
        Ok(o.with_note("the endpoint printed as X20+ is the smaller abscissa"))
    })
}

fn x4_general_parabola(_s: &Suite) -> Outcome {
    const TOL: f64 = 1e-9;
    run(|| {
        let mut w = Worst::default();
        for r in [0.05, 0.2, 0.5, 1.0, 2.0] {
            let fam = ParabolaFamily::unit(r)?;
            let (pts, defect) = parabola_orthocenters(&fam, 3.0 + 2.0 * r, 200);
            w.add(defect);
            for p in pts {
                w.add((p.y - (r * r + 2.0 * r - 1.0)).abs());
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

fn x4_parabola_remark(_s: &Suite) -> Outcome {
    const TOL: f64 = 1e-9;
    run(|| {
        let mut w = Worst::default();
        for (c, y0) in [(1.0, 2.0), (0.3, 0.7), (2.0, 0.5), (0.25, 0.75)] {
            let fam = ParabolaFamily::new(c, y0)?;
            let line = x4_parabola_line(c, y0)?;
            let (pts, defect) = parabola_orthocenters(&fam, 6.0 * c + 4.0 * fam.r, 100);
            w.add(defect / c);
            for p in pts {
                w.add(line.distance(p) / c);
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

/// Orthocenter ordinate in the frame of the outer parabola `4cy = x^2`.
fn x4_steiner_soddy_line(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-8;
    run(|| {
        let ms = members(s, |c, r| c.n() == 3 && r == Regime::Parabola);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            let f = x4_in_parabola_frame(c, s.samples, &s.tolerances)?;
            for y in &f.ordinates {
                w.add((y + 1.75 * f.focal_length).abs() / f.focal_length);
            }
            let sweep = sweep_center(c, id(4), s.samples, &s.tolerances)?;
            let r = classify_sweep(&sweep, &s.tolerances)?;
            match r.params {
                LocusParams::Segment(p, q) => w.add((q - p).normalized().dot(f.axis).abs()),
                _ => w.add(f64::INFINITY),
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

/// Centers `X1` and `X7` over the phases where the contact triangle (the
/// I-pedal of the triangle) is acute; both stay put there.
fn x1_x7_stationary(s: &Suite) -> Outcome {
    run(|| {
        let mut w = Worst::default();
        let mut used = 0;
        for c in members(s, |c, _| c.n() == 3 && c.x0() > 0.0) {
            let mut pts = [Vec::new(), Vec::new()];
            for ch in chains(s, c) {
                let Ok(h) = Triangle::new(ch.contacts[0], ch.contacts[1], ch.contacts[2]) else { continue };
                if !is_acute(&h) {
                    continue;
                }
                let cs = ch.centers();
                let tri = Triangle::new(cs[0], cs[1], cs[2])?;
                pts[0].push(kimberling(&tri, id(1))?);
                pts[1].push(kimberling(&tri, id(7))?);
            }
            if pts[0].len() < crate::locus::MIN_SAMPLES {
                continue;
            }
            used += 1;
            for p in &pts {
                let r = classify_locus_scaled(p, c.r().max(c.x0()).max(c.lambda()), &s.tolerances)?;
                w.add(if r.kind == LocusKind::Stationary { r.fit_residual } else { f64::INFINITY });
            }
        }
        Ok(if used == 0 { not_exercised() } else { Outcome::judge(w.0, s.tolerances.stationary) })
    })
}

fn intouch_coincidence(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-9;
    run(|| {
        let mut w = Worst::default();
        let mut used = 0;
        for c in members(s, |c, _| c.n() == 3) {
            for j in 0..s.samples {
                let Ok(tri) = triangle_at(c, c.sample_phase(j, s.samples), &s.tolerances) else { continue };
                let it = intouch_triangle(&tri);
                if !is_acute(&it) {
                    continue;
                }
                let scale = scale_of(&tri.vertices());
                let (Ok(a), Ok(b), Ok(x3), Ok(x6)) =
                    (kimberling(&tri, id(1)), kimberling(&tri, id(7)), kimberling(&it, id(3)), kimberling(&it, id(6)))
                else {
                    continue;
                };
                w.add(a.distance(x3) / scale);
                w.add(b.distance(x6) / scale);
                used += 1;
            }
        }
        Ok(if used == 0 { not_exercised() } else { Outcome::judge(w.0, TOL) })
    })
}

/// The symmedian point of the contact triangle has side distances
/// proportional to the side lengths.
fn symmedian_proportional(s: &Suite) -> Outcome {
    run(|| {
        let mut w = Worst::default();
        for c in members(s, |c, _| c.n() == 3) {
            for ch in chains(s, c) {
                let Ok(h) = Triangle::new(ch.contacts[0], ch.contacts[1], ch.contacts[2]) else { continue };
                let k = kimberling(&h, id(6))?;
                let v = h.vertices();
                let ratios: Vec<f64> = (0..3)
                    .map(|i| {
                        let (p, q) = (v[i], v[(i + 1) % 3]);
                        Line::through(p, q).distance(k) / p.distance(q)
                    })
                    .collect();
                let mean = ratios.iter().sum::<f64>() / 3.0;
                let spread = ratios.iter().map(|r| (r - mean).abs()).fold(0.0, f64::max);
                w.add(spread / mean);
            }
        }
        Ok(Outcome::judge(w.0, s.tolerances.geometry))
    })
}

fn kinds_on_reference(s: &Suite, ks: &[u32], want: LocusKind) -> Result<(Outcome, Vec<LocusParams>), PorismError> {
    let ms = locus_members(s);
    if ms.is_empty() {
        return Ok((not_exercised(), Vec::new()));
    }
    let mut w = Worst::default();
    let mut wrong = Vec::new();
    let mut params = Vec::new();
    for c in ms {
        for &k in ks {
            let r = classify_sweep(&sweep_center(c, id(k), s.samples, &s.tolerances)?, &s.tolerances)?;
            if r.kind == want {
                w.add(r.fit_residual);
                params.push(r.params);
            } else {
                wrong.push(format!("X{k} at x0={}: {:?}", c.x0(), r.kind));
                w.add(f64::INFINITY);
            }
        }
    }
    let tol = match want {
        LocusKind::Stationary => s.tolerances.stationary,
        LocusKind::Segment => s.tolerances.segment,
        LocusKind::Circle => s.tolerances.circle,
        _ => s.tolerances.conic,
    };
    Ok((Outcome::judge(w.0, tol).with_note(wrong.join("; ")), params))
}

fn loci_conics(s: &Suite) -> Outcome {
    run(|| Ok(kinds_on_reference(s, &[2, 3, 4, 5, 6, 8, 9, 10], LocusKind::Conic)?.0))
}

fn loci_circles(s: &Suite) -> Outcome {
    run(|| Ok(kinds_on_reference(s, &[13, 14, 15, 16, 80], LocusKind::Circle)?.0))
}

/// Segments whose supporting line is the x-axis (within 1e-8 in angle and offset).
fn loci_segments(s: &Suite) -> Outcome {
    run(|| {
        let (o, params) = kinds_on_reference(s, &[20, 77, 170], LocusKind::Segment)?;
        if o.status != Status::Pass {
            return Ok(o);
        }
        let mut w = Worst::default();
        for p in params {
            if let LocusParams::Segment(a, b) = p {
                w.add((b - a).normalized().y.abs());
                w.add(a.y.abs().max(b.y.abs()));
            }
        }
        Ok(Outcome::judge(w.0, s.tolerances.segment))
    })
}

fn x105_tangent_circle(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-6;
    run(|| {
        let ms = locus_members(s);
        if ms.is_empty() {
            return Ok(not_exercised());
        }
        let mut w = Worst::default();
        for c in ms {
            let r = classify_sweep(&sweep_center(c, id(105), s.samples, &s.tolerances)?, &s.tolerances)?;
            let LocusParams::Circle(circle) = r.params else {
                return Ok(Outcome::fail(format!("X105 locus is {:?}", r.kind)));
            };
            w.add(circle.center.y.abs() / c.r());
            let outer = fit_outer_conic(c, s.samples / 3, &s.tolerances)?;
            let contacts = ellipse_circle_contacts(&outer.conic, &circle)?;
            if contacts.len() < 2 {
                return Ok(Outcome::fail("fewer than two local minima of the curve distance"));
            }
            w.add(contacts[0].gap / c.r());
            w.add(contacts[1].gap / c.r());
            w.add((contacts[0].point.y + contacts[1].point.y).abs() / c.r());
            if let Some(third) = contacts.get(2) {
                // exactly two contacts: any further local minimum stays clear of zero
                if third.gap < TOL * c.r() {
                    w.add(f64::INFINITY);
                }
            }
        }
        Ok(Outcome::judge(w.0, TOL))
    })
}

fn soddy_centers_stationary(s: &Suite) -> Outcome {
    run(|| {
        let (o, params) = kinds_on_reference(s, &[175, 176], LocusKind::Stationary)?;
        if o.status != Status::Pass {
            return Ok(o);
        }
        let ms = locus_members(s);
        let mut w = Worst::default();
        for (c, pair) in ms.iter().zip(params.chunks(2)) {
            let fit = fit_outer_conic(c, s.samples / 4, &s.tolerances)?;
            let FocalData::Foci(f1, f2) = fit.conic.foci()? else { return Ok(Outcome::fail("no foci pair")) };
            let (LocusParams::Point(a), LocusParams::Point(b)) = (pair[0], pair[1]) else { continue };
            w.add(pair_distance((a, b), (f1, f2)) / c.r());
        }
        Ok(Outcome::judge(w.0, s.tolerances.conic))
    })
}
