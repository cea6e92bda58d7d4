//! SVG graphs of the Gauss-type maps and of the attractors.
//!
//! Branches are enumerated exactly (domains are exact unions, truncated at a
//! fixed depth where they are infinite), sampled at rational points, and
//! mapped exactly. Only the final coordinates are floating point.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::attractor::{Gdifs, Side};
use crate::dynamics::Realization;
use crate::exact::{Point, Quad};
use crate::{Error, Mat, QNum, Result, Union, Z};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum PlotKind {
    F,
    Fjump,
    Fdual,
    FfirstReturn,
    Attractor,
}

impl std::str::FromStr for PlotKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "F" => PlotKind::F,
            "Fjump" => PlotKind::Fjump,
            "Fdual" => PlotKind::Fdual,
            "FfirstReturn" => PlotKind::FfirstReturn,
            "attractor" => PlotKind::Attractor,
            _ => return Err(Error::Parse(format!("unknown plot kind `{s}`"))),
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PlotSpec {
    pub which: PlotKind,
    /// Samples per branch.
    pub resolution: usize,
    /// Angle chart `[-π/2, 3π/2]` on both axes instead of the real line.
    pub circular: bool,
    /// Truncation depth for tails and for accelerated branches.
    pub depth: usize,
}

impl PlotSpec {
    pub fn new(which: PlotKind) -> Self {
        let circular = matches!(which, PlotKind::Fdual | PlotKind::FfirstReturn | PlotKind::Attractor);
        PlotSpec { which, resolution: 64, circular, depth: 8 }
    }
}

/// One branch: `x ↦ map(x)` on `domain`, from node `from` to node `to`.
#[derive(Clone, Debug)]
pub struct Branch {
    pub word: Vec<usize>,
    pub from: usize,
    pub to: usize,
    pub map: Mat,
    pub domain: Union,
}

#[derive(Clone, Debug)]
pub struct Plot {
    pub svg: String,
    /// Labeled branch domains.
    pub branches: usize,
    /// Curves left after collapsing branches with the same matrix.
    pub curves: usize,
}

fn usable(u: &Union) -> bool {
    u.arcs().iter().any(|a| !a.is_point())
}

/// Branches of `F` (base side) or `F♯` (dual side).
pub fn slow_branches(r: &Realization, side: Side, depth: usize) -> Vec<Branch> {
    let descs = match side {
        Side::Base => &r.h,
        Side::Dual => &r.k,
    };
    let ifs = Gdifs::new(&r.spec, side);
    let mut out = Vec::new();
    for i in 0..r.nodes() {
        for (k, j) in ifs.incoming(i) {
            let m = ifs.map(k);
            let domain = descs[j].truncate(depth).image(m);
            if usable(&domain) {
                out.push(Branch { word: vec![k], from: i, to: j, map: m.inv(), domain });
            }
        }
    }
    out
}

/// Branches of `F_jump`: `P^t a` with `P` the parabolic loop and `a` not
/// parabolic, for `t < depth`.
pub fn jump_branches(r: &Realization, depth: usize) -> Vec<Branch> {
    let ifs = Gdifs::new(&r.spec, Side::Base);
    let mut out = Vec::new();
    for i in 0..r.nodes() {
        let p = r.parabolic[i];
        let reps = if p.is_some() { depth } else { 1 };
        let mut prefix = Mat::identity();
        for t in 0..reps {
            for (k, j) in ifs.incoming(i) {
                if r.is_parabolic(k) {
                    continue;
                }
                let m = prefix.mul(ifs.map(k));
                let domain = r.h[j].truncate(depth).image(&m);
                if usable(&domain) {
                    let mut word = vec![p.unwrap_or(k); t];
                    word.push(k);
                    out.push(Branch { word, from: i, to: j, map: m.inv(), domain });
                }
            }
            if let Some(p) = p {
                prefix = prefix.mul(ifs.map(p));
            }
        }
    }
    out
}

/// Branches of `F♯_R`: dual words leaving `R` and coming back, up to
/// `depth` letters.
pub fn return_branches(r: &Realization, depth: usize) -> Result<Vec<Branch>> {
    let rr = r.r()?.to_vec();
    let ifs = Gdifs::new(&r.spec, Side::Dual);
    let ks: Vec<Union> = r.k.iter().map(|k| k.truncate(depth)).collect();
    let mut out = Vec::new();
    for i in 0..r.nodes() {
        // (word, current node, points reached, map from the start)
        let mut stack = vec![(Vec::new(), i, rr[i].clone(), Mat::identity())];
        while let Some((word, node, set, m)) = stack.pop() {
            for (k, j) in ifs.incoming(node) {
                let step = ifs.map(k).inv();
                let reached = set.image(&step).intersection(&ks[j]);
                if !usable(&reached) {
                    continue;
                }
                let m2 = step.mul(&m);
                let mut w = word.clone();
                w.push(k);
                let back = reached.intersection(&rr[j]);
                if usable(&back) {
                    out.push(Branch { word: w.clone(), from: i, to: j, map: m2.clone(), domain: back.image(&m2.inv()) });
                }
                let rest = reached.difference_closure(&rr[j]);
                if w.len() < depth && usable(&rest) {
                    stack.push((w, j, rest, m2));
                }
            }
        }
    }
    Ok(out)
}

fn rational_near(x: f64) -> QNum {
    const SCALE: f64 = (1u64 << 24) as f64;
    if !x.is_finite() || x.abs() > 1e12 {
        return Point::Infinity;
    }
    Point::Finite(Quad::rational((x * SCALE).round() as Z, 1 << 24).expect("nonzero denominator"))
}

/// Inverse of [`Point::angle`].
fn from_angle(t: f64) -> QNum {
    if (t - PI / 2.0).abs() < 1e-12 {
        return Point::Infinity;
    }
    rational_near(((t + PI / 2.0) / 2.0).tan())
}

/// Rational points of `u`, about `n` of them, plus the arc endpoints.
fn sample(u: &Union, n: usize) -> Vec<Vec<QNum>> {
    let arcs: Vec<_> = u.arcs().into_iter().filter(|a| !a.is_point()).collect();
    let per = (n / arcs.len().max(1)).max(2);
    arcs.iter()
        .map(|a| {
            let one = Union::arc(a.lo.clone(), a.hi.clone());
            let t0 = a.lo.angle();
            let mut t1 = a.hi.angle();
            if t1 <= t0 {
                t1 += 2.0 * PI;
            }
            let mut pts = vec![a.lo.clone()];
            for s in 1..per {
                let t = t0 + (t1 - t0) * s as f64 / per as f64;
                let t = if t >= 1.5 * PI { t - 2.0 * PI } else { t };
                let x = from_angle(t);
                if one.contains(&x) && !pts.contains(&x) {
                    pts.push(x);
                }
            }
            pts.push(a.hi.clone());
            pts
        })
        .collect()
}

struct Frame {
    lo: f64,
    hi: f64,
}

const SIZE: f64 = 480.0;
const MARGIN: f64 = 24.0;

impl Frame {
    fn px(&self, v: f64) -> f64 {
        MARGIN + (v - self.lo) / (self.hi - self.lo) * (SIZE - 2.0 * MARGIN)
    }

    fn py(&self, v: f64) -> f64 {
        SIZE - self.px(v)
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">"
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\"/>");
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

const COLORS: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

fn graph(r: &Realization, spec: &PlotSpec, branches: &[Branch], title: &str) -> Result<Plot> {
    // collapse branches acting by the same matrix
    let mut curves: BTreeMap<[Z; 4], Vec<&Branch>> = BTreeMap::new();
    for b in branches {
        curves.entry(b.map.entries()).or_default().push(b);
    }
    let mut lines: Vec<(String, Vec<Vec<(f64, f64)>>)> = Vec::new();
    let mut points: Vec<(QNum, QNum)> = Vec::new();
    let mut polys: Vec<(String, Vec<Vec<(QNum, QNum)>>)> = Vec::new();
    for group in curves.values() {
        let labels: Vec<String> = group.iter().map(|b| r.labels(&b.word).concat()).collect();
        let mut pieces = Vec::new();
        for b in group {
            for arc in sample(&b.domain, spec.resolution) {
                let piece: Vec<(QNum, QNum)> = arc.into_iter().map(|x| (x.clone(), b.map.apply(&x))).collect();
                points.extend(piece.iter().cloned());
                pieces.push(piece);
            }
        }
        polys.push((labels.join(" "), pieces));
    }
    if !spec.circular && points.iter().any(|(x, y)| x.is_infinite() || y.is_infinite()) {
        return Err(Error::OutOfRange("∞ occurs; use the circular chart".into()));
    }
    let coord = |x: &QNum| if spec.circular { x.angle() } else { x.to_f64() };
    for (label, pieces) in polys {
        let pts = pieces
            .into_iter()
            .map(|p| {
                let mut out: Vec<(f64, f64)> = Vec::with_capacity(p.len());
                for (x, y) in &p {
                    let (mut u, mut v) = (coord(x), coord(y));
                    // keep the curve continuous across the cut of the angle chart
                    if let (true, Some(&(pu, pv))) = (spec.circular, out.last()) {
                        u += 2.0 * PI * ((pu - u) / (2.0 * PI)).round();
                        v += 2.0 * PI * ((pv - v) / (2.0 * PI)).round();
                    }
                    out.push((u, v));
                }
                out
            })
            .collect();
        lines.push((label, pts));
    }
    let vals: Vec<f64> = lines.iter().flat_map(|(_, ps)| ps.iter().flatten().flat_map(|&(u, v)| [u, v])).collect();
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo < hi) {
        return Err(Error::OutOfRange("empty plot".into()));
    }
    let frame = Frame { lo, hi };
    let mut svg = String::new();
    header(&mut svg, title);
    let (a, b) = (frame.px(frame.lo), frame.px(frame.hi));
    let _ = writeln!(svg, "<rect x=\"{a:.2}\" y=\"{a:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"none\" stroke=\"black\"/>", b - a, b - a);
    let _ = writeln!(svg, "<line x1=\"{a:.2}\" y1=\"{b:.2}\" x2=\"{b:.2}\" y2=\"{a:.2}\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>");
    for (n, (label, pieces)) in lines.iter().enumerate() {
        let mut d = String::new();
        for piece in pieces {
            for (t, (x, y)) in piece.iter().enumerate() {
                let _ = write!(d, "{}{:.2} {:.2} ", if t == 0 { "M" } else { "L" }, frame.px(*x), frame.py(*y));
            }
        }
        let _ = writeln!(
            svg,
            "<path class=\"branch\" data-labels=\"{}\" d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>",
            escape(label),
            d.trim_end(),
            COLORS[n % COLORS.len()]
        );
    }
    svg.push_str("</svg>\n");
    Ok(Plot { svg, branches: branches.len(), curves: lines.len() })
}

fn attractor_plot(r: &Realization, spec: &PlotSpec) -> Plot {
    let frame = Frame { lo: -PI / 2.0, hi: 1.5 * PI };
    let mut svg = String::new();
    header(&mut svg, &format!("{} attractors", r.spec.name));
    let rows = 2 * r.nodes();
    let mut count = 0;
    for i in 0..r.nodes() {
        for (s, (name, desc, color)) in [("H", &r.h[i], COLORS[0]), ("K", &r.k[i], COLORS[1])].into_iter().enumerate() {
            let row = 2 * i + s;
            let y = MARGIN + (row as f64 + 0.5) * (SIZE - 2.0 * MARGIN) / rows as f64;
            let _ = writeln!(svg, "<text x=\"2\" y=\"{:.2}\" font-size=\"10\">{name}{i}</text>", y + 3.0);
            for a in desc.truncate(spec.depth).arcs() {
                let t0 = a.lo.angle();
                let mut t1 = t0 + if a.is_point() { 0.0 } else { (a.hi.angle() - t0).rem_euclid(2.0 * PI) };
                if !a.is_point() && t1 == t0 {
                    t1 += 2.0 * PI;
                }
                let mut segs = vec![(t0, t1.min(frame.hi))];
                if t1 > frame.hi {
                    segs.push((frame.lo, t1 - 2.0 * PI));
                }
                for (u, v) in segs {
                    count += 1;
                    let _ = writeln!(
                        svg,
                        "<line class=\"arc\" x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"{color}\" stroke-width=\"4\" stroke-linecap=\"round\"/>",
                        frame.px(u),
                        frame.px(v)
                    );
                }
            }
        }
    }
    svg.push_str("</svg>\n");
    Plot { svg, branches: count, curves: count }
}

/// Renders the requested picture. Output depends only on the inputs.
pub fn plot(r: &Realization, spec: &PlotSpec) -> Result<Plot> {
    let name = &r.spec.name;
    match spec.which {
        PlotKind::F => graph(r, spec, &slow_branches(r, Side::Base, spec.depth), &format!("{name}: F")),
        PlotKind::Fdual => graph(r, spec, &slow_branches(r, Side::Dual, spec.depth), &format!("{name}: dual F")),
        PlotKind::Fjump => graph(r, spec, &jump_branches(r, spec.depth), &format!("{name}: jump F")),
        PlotKind::FfirstReturn => {
            graph(r, spec, &return_branches(r, spec.depth)?, &format!("{name}: first return to R"))
        }
        PlotKind::Attractor => Ok(attractor_plot(r, spec)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draw(name: &str, which: PlotKind) -> Plot {
        let r = Realization::preset(name).unwrap();
        plot(&r, &PlotSpec::new(which)).unwrap()
    }

    #[test]
    fn branch_counts() {
        let p = draw("tau-minus-one", PlotKind::F);
        assert_eq!((p.branches, p.curves), (6, 4));
        let p = draw("tau-minus-one", PlotKind::Fdual);
        assert_eq!((p.branches, p.curves), (6, 4));
        let p = draw("farey", PlotKind::F);
        assert_eq!((p.branches, p.curves), (2, 2));
        let p = draw("even", PlotKind::F);
        assert_eq!(p.curves, 4);
        let p = draw("odd", PlotKind::Fdual);
        assert_eq!(p.curves, 6);
    }

    #[test]
    fn farey_branches_meet_at_half() {
        let r = Realization::preset("farey").unwrap();
        let bs = slow_branches(&r, Side::Base, 8);
        let half = QNum::rational(1, 2);
        assert!(bs.iter().all(|b| b.domain.contains(&half) && b.map.apply(&half) == QNum::int(1)));
    }

    #[test]
    fn accelerated_branches_land_in_place() {
        let r = Realization::preset("tau-minus-one").unwrap();
        for b in jump_branches(&r, 6) {
            for x in b.domain.sample_points() {
                assert!(r.h[b.to].contains(&b.map.apply(&x)));
            }
        }
        let bs = return_branches(&r, 6).unwrap();
        assert!(!bs.is_empty());
        for b in bs {
            for x in b.domain.sample_points() {
                assert!(r.r.as_ref().unwrap()[b.to].contains(&b.map.apply(&x)));
                assert!(r.r.as_ref().unwrap()[b.from].contains(&x));
            }
        }
    }

    #[test]
    fn deterministic_and_well_formed() {
        for which in [PlotKind::F, PlotKind::Fjump, PlotKind::Fdual, PlotKind::FfirstReturn, PlotKind::Attractor] {
            let a = draw("even", which);
            let b = draw("even", which);
            assert_eq!(a.svg, b.svg);
            assert!(a.svg.starts_with("<svg") && a.svg.trim_end().ends_with("</svg>"));
            assert!(a.curves > 0);
        }
    }

    #[test]
    fn linear_chart_rejects_infinity() {
        let r = Realization::preset("farey").unwrap();
        let mut s = PlotSpec::new(PlotKind::Fdual);
        s.circular = false;
        assert!(plot(&r, &s).is_err());
    }
}
