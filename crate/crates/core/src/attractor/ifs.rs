//! Graph-directed IFS on either side of a spec: Hutchinson iteration,
//! fixed-point verification and the telescoping of parabolic tails.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;

use crate::attractor::desc::{real_segments, AttractorDesc, Segment, Tail};
use crate::attractor::union::CircArc;
use crate::cfspec::CfSpec;
use crate::exact::{circ_key, Point};
use crate::modular::{chart_to_infinity, Matrix};
use crate::{Mat, QNum, Result, Union, Z};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Side {
    /// Maps `B_a : I_j → I_i` for `a = iσj`.
    Base,
    /// Maps `D_a : I_iS → I_jS` for `a = iσj`.
    Dual,
}

pub struct Gdifs<'a> {
    pub spec: &'a CfSpec,
    pub side: Side,
    maps: Vec<Mat>,
}

#[derive(Clone, Debug)]
pub struct IterReport {
    pub state: Vec<Union>,
    pub iterations: usize,
    pub exact_fixed: bool,
    /// Hausdorff distance between the last two iterates, in the angle metric.
    pub last_step: f64,
}

/// One group of tail images sharing a limit point.
#[derive(Clone, Debug)]
pub struct TailGroup {
    pub witnesses: Vec<Mat>,
    pub fix: QNum,
    pub base: Union,
    pub result: Option<Union>,
    /// The translates inside one period window past the bases.
    pub approx: Union,
    /// A point in the window next to `fix` missed by every translate.
    pub gap: Option<QNum>,
}

/// `⋃ M_a[X_j]` over the arrows acting into one node.
#[derive(Clone, Debug)]
pub struct NodeImage {
    pub finite: Union,
    pub groups: Vec<TailGroup>,
    pub exact: Option<Union>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Verified,
    /// `witness` lies in exactly one of the image and the candidate.
    Refuted { witness: QNum, in_image: bool },
    Unverified { reason: String },
}

impl Verdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Verified => write!(f, "verified"),
            Verdict::Refuted { witness, in_image } => {
                if *in_image {
                    write!(f, "refuted: {witness} is in the image but not in the candidate")
                } else {
                    write!(f, "refuted: {witness} is in the candidate but not in the image")
                }
            }
            Verdict::Unverified { reason } => write!(f, "unverified: {reason}"),
        }
    }
}

impl<'a> Gdifs<'a> {
    pub fn new(spec: &'a CfSpec, side: Side) -> Self {
        let maps = (0..spec.code.letters.len())
            .map(|k| match side {
                Side::Base => spec.branch(k),
                Side::Dual => spec.dual_branch(k),
            })
            .collect();
        Gdifs { spec, side, maps }
    }

    pub fn map(&self, k: usize) -> &Mat {
        &self.maps[k]
    }

    /// Letters acting into node `i`, with the node they act from.
    pub fn incoming(&self, i: usize) -> Vec<(usize, usize)> {
        self.spec
            .code
            .letters
            .iter()
            .enumerate()
            .filter_map(|(k, l)| match self.side {
                Side::Base if l.arrow.from == i => Some((k, l.arrow.to)),
                Side::Dual if l.arrow.to == i => Some((k, l.arrow.from)),
                _ => None,
            })
            .collect()
    }

    /// `I_i` on the base side, `I_iS` on the dual side.
    pub fn start(&self) -> Vec<Union> {
        self.spec
            .intervals
            .iter()
            .map(|iv| match self.side {
                Side::Base => Union::from_interval(iv),
                Side::Dual => Union::from_interval(&iv.complement()),
            })
            .collect()
    }

    pub fn step(&self, state: &[Union]) -> Vec<Union> {
        hutchinson_step(self, state)
    }

    pub fn iterate(&self, start: Vec<Union>, max_iters: usize, tol: f64) -> IterReport {
        iterate_hutchinson(self, start, max_iters, tol)
    }

    /// Whether `x` lies in `⋃ M_a[X_j]` over arrows into `i`, `skip` excluded.
    pub fn in_image(&self, i: usize, descs: &[AttractorDesc], skip: Option<usize>, x: &QNum) -> bool {
        self.incoming(i)
            .into_iter()
            .filter(|(k, _)| Some(*k) != skip)
            .any(|(k, j)| descs[j].contains(&self.maps[k].inv().apply(x)))
    }

    /// Exact image of the descriptors into node `i`, telescoping tails.
    pub fn image(&self, i: usize, descs: &[AttractorDesc], skip: Option<usize>) -> Result<NodeImage> {
        let mut finite = Union::empty();
        let mut tails: Vec<Tail> = Vec::new();
        for (k, j) in self.incoming(i) {
            if Some(k) == skip {
                continue;
            }
            match &descs[j] {
                AttractorDesc::Finite(u) => finite = finite.union(&u.image(&self.maps[k])),
                AttractorDesc::Tail(t) => tails.push(t.image(&self.maps[k], &self.spec.letter(k).label)?),
            }
        }
        let mut by_fix: BTreeMap<crate::Key, Vec<Tail>> = BTreeMap::new();
        for t in tails {
            by_fix.entry(circ_key(&t.limit)).or_default().push(t);
        }
        let mut groups = Vec::new();
        let mut exact = Some(finite.clone());
        for (_, ts) in by_fix {
            let g = telescope(&ts);
            exact = match (&exact, &g.result) {
                (Some(e), Some(r)) => Some(e.union(r)),
                _ => None,
            };
            groups.push(g);
        }
        Ok(NodeImage { finite, groups, exact })
    }

    /// Checks that the descriptors are a fixed point of the Hutchinson operator.
    ///
    /// For a tail `⋃ Pᵗ[R] ∪ {ℓ}` with `P = M_a`, the equation reduces to
    /// `R = ⋃ M_b[X_j]` over the remaining arrows `b`.
    pub fn verify(&self, descs: &[AttractorDesc]) -> Vec<Verdict> {
        (0..descs.len()).map(|i| self.verify_node(i, descs)).collect()
    }

    fn verify_node(&self, i: usize, descs: &[AttractorDesc]) -> Verdict {
        let skip = match &descs[i] {
            AttractorDesc::Tail(t) => match self.spec.code.index_of(&t.label) {
                Some(k) if self.incoming(i).iter().any(|&(kk, j)| kk == k && j == i) && self.maps[k] == t.map => Some(k),
                _ => return Verdict::Unverified { reason: format!("tail map {} is not a loop at node {i}", t.label) },
            },
            AttractorDesc::Finite(_) => None,
        };
        let target = descs[i].block();
        let img = match self.image(i, descs, skip) {
            Ok(img) => img,
            Err(e) => return Verdict::Unverified { reason: e.to_string() },
        };
        let mut cands: Vec<QNum> = Vec::new();
        match &img.exact {
            Some(u) if u == target => return Verdict::Verified,
            Some(u) => {
                cands.extend(u.point_outside(target));
                cands.extend(target.point_outside(u));
            }
            None => {
                cands.extend(img.finite.sample_points());
                for g in &img.groups {
                    cands.extend(g.approx.sample_points());
                    cands.extend(g.gap.iter().cloned());
                    if let Some(gap) = &g.gap {
                        for w in &g.witnesses {
                            let mut y = gap.clone();
                            for _ in 0..4 {
                                y = w.inv().apply(&y);
                                cands.push(y.clone());
                            }
                        }
                    }
                }
                cands.extend(target.sample_points());
            }
        }
        for x in &cands {
            let a = self.in_image(i, descs, None, x);
            let b = descs[i].contains(x);
            if a != b {
                return Verdict::Refuted { witness: x.clone(), in_image: a };
            }
        }
        Verdict::Unverified { reason: "image and candidate differ only where exact comparison is unavailable".into() }
    }

    /// The blocks `R_i = ⋃ M_b[X_j]` with the parabolic letter of each node left out.
    pub fn compute_r(&self, descs: &[AttractorDesc], parabolic: &[Option<usize>]) -> Result<Vec<NodeImage>> {
        (0..descs.len()).map(|i| self.image(i, descs, parabolic[i])).collect()
    }

    /// Ping-pong: the images `M_a[U_j]` lie in `U_i` with pairwise disjoint interiors.
    pub fn open_set_condition(&self, sets: &[Union]) -> std::result::Result<(), String> {
        for (i, target) in sets.iter().enumerate() {
            let imgs: Vec<(usize, Union)> =
                self.incoming(i).into_iter().map(|(k, j)| (k, sets[j].image(&self.maps[k]))).collect();
            for (k, u) in &imgs {
                if !u.is_subset(target) {
                    return Err(format!("image under {} leaves node {i}", self.spec.letter(*k).label));
                }
            }
            for a in 0..imgs.len() {
                for b in a + 1..imgs.len() {
                    if !imgs[a].1.interiors_disjoint(&imgs[b].1) {
                        let la = &self.spec.letter(imgs[a].0).label;
                        let lb = &self.spec.letter(imgs[b].0).label;
                        return Err(format!("images under {la} and {lb} overlap"));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn hutchinson_step(ifs: &Gdifs, state: &[Union]) -> Vec<Union> {
    (0..state.len())
        .map(|i| {
            ifs.incoming(i).into_iter().fold(Union::empty(), |acc, (k, j)| acc.union(&state[j].image(&ifs.maps[k])))
        })
        .collect()
}

pub fn iterate_hutchinson(ifs: &Gdifs, start: Vec<Union>, max_iters: usize, tol: f64) -> IterReport {
    let mut cur = start;
    let mut last = f64::INFINITY;
    for it in 1..=max_iters.max(1) {
        let next = hutchinson_step(ifs, &cur);
        if next == cur {
            return IterReport { state: next, iterations: it, exact_fixed: true, last_step: 0.0 };
        }
        last = cur.iter().zip(&next).map(|(a, b)| a.hausdorff(b)).fold(0.0, f64::max);
        cur = next;
        if last < tol {
            return IterReport { state: cur, iterations: it, exact_fixed: false, last_step: last };
        }
    }
    IterReport { state: cur, iterations: max_iters.max(1), exact_fixed: false, last_step: last }
}

/// Union of tails sharing a limit, in closed form when it telescopes.
///
/// In a chart sending the limit to ∞ every map is a translation `X ↦ X + k`.
/// Past the rightmost base point `T0` the union is periodic with period
/// `lcm k`, so it contains the whole ray iff it covers one period window.
fn telescope(ts: &[Tail]) -> TailGroup {
    let fix = ts[0].limit.clone();
    let mut witnesses: Vec<Mat> = Vec::new();
    for t in ts {
        if !witnesses.contains(&t.map) {
            witnesses.push(t.map.clone());
        }
    }
    let base = ts.iter().fold(Union::empty(), |acc, t| acc.union(&t.base));
    let chart = chart_to_infinity(&fix);
    let mirror: Mat = Matrix::from_i64([[-1, 0], [0, 1]]).expect("unimodular");
    let mut result = Union::point(fix.clone());
    let mut approx = Union::point(fix.clone());
    let mut gap = None;
    for sign in [1, -1] {
        let c = if sign > 0 { chart.clone() } else { mirror.mul(&chart) };
        let mut parts: Vec<(Z, Vec<Segment>)> = Vec::new();
        for t in ts {
            let tc = t.chart();
            if tc.k.signum() != sign {
                continue;
            }
            let segs = real_segments(&t.base.image(&c)).expect("tail base avoids its limit");
            parts.push((tc.k.abs(), segs));
        }
        if parts.is_empty() {
            continue;
        }
        let period = parts.iter().fold(1, |acc: Z, (k, _)| acc.lcm(k));
        let t0 = parts.iter().flat_map(|(_, s)| s.iter().map(|x| x.hi.clone())).max().expect("nonempty base");
        let end = t0.add_int(&period);
        let mut window = Union::empty();
        for (k, segs) in &parts {
            for s in segs {
                let mut cur = s.clone();
                while cur.lo <= end {
                    window = window.union(&Union::from_arcs([cur.to_arc()]));
                    cur = cur.shift(*k);
                }
            }
        }
        let span = Union::from_arcs([CircArc::new(Point::Finite(t0.clone()), Point::Finite(end))]);
        let back = c.inv();
        approx = approx.union(&window.image(&back));
        match span.point_outside(&window) {
            None => {
                let ray = Union::arc(Point::Finite(t0), Point::Infinity);
                result = result.union(&window.union(&ray).image(&back));
            }
            Some(g) => {
                gap = Some(back.apply(&g));
                result = result.union(&window.image(&back));
            }
        }
    }
    TailGroup { witnesses, fix, base, result: if gap.is_none() { Some(result) } else { None }, approx, gap }
}
