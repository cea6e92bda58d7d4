//! The multivalued Gauss-type maps of a realization, their duals, jump and
//! first-return accelerations, orbit exploration and the Galois checks.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::attractor::{AttractorDesc, Gdifs, Side};
use crate::attractor::union::between;
use crate::cfspec::CfSpec;
use crate::exact::{circ_key, is_perfect_square, Point, Quad, QuadForm};
use crate::{Error, Form, Mat, QNum, Result, Union, Z};

/// A spec with verified attractors, its `R` blocks and parabolic letters.
#[derive(Clone, Debug)]
pub struct Realization {
    pub spec: CfSpec,
    pub h: Vec<AttractorDesc>,
    pub k: Vec<AttractorDesc>,
    /// `None` when some block does not telescope to a finite union.
    pub r: Option<Vec<Union>>,
    /// Per node, the parabolic loop fixing the zero point.
    pub parabolic: Vec<Option<usize>>,
    base: Vec<Mat>,
    dual: Vec<Mat>,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct OrbitState {
    pub node: usize,
    pub x: QNum,
}

impl OrbitState {
    pub fn new(node: usize, x: QNum) -> Self {
        OrbitState { node, x }
    }

    pub fn form(&self) -> Option<Form> {
        self.x.finite().and_then(|q| QuadForm::of_quad(q).ok())
    }
}

impl fmt::Display for OrbitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.node, self.x)
    }
}

/// One branch of a (possibly accelerated) map: the letters used and the image.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Move {
    pub word: Vec<usize>,
    pub to: OrbitState,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    /// `F`.
    Slow,
    /// `F♯`.
    SlowDual,
    /// `F_jump`.
    Jump,
    /// `F♯_R`.
    FirstReturn,
}

#[derive(Clone, Debug)]
pub struct OrbitReport {
    pub purely_periodic: bool,
    /// Words along the period, starting at the initial state.
    pub period: Vec<Vec<usize>>,
    /// States along the period, starting at the initial state.
    pub trace: Vec<OrbitState>,
    /// Distance from the initial state to the nearest periodic state.
    pub preperiod: usize,
    /// Explored states with more than one image.
    pub multivalued: usize,
    pub states: usize,
}

impl OrbitReport {
    pub fn period_letters(&self) -> Vec<usize> {
        self.period.concat()
    }
}

const STEP_BUDGET: usize = 1 << 16;

impl Realization {
    /// Verifies the spec's `H` and `K`, and computes `R` (checked against the
    /// spec's own `R` when present).
    pub fn new(spec: CfSpec) -> Result<Self> {
        let bad = |msg: String| Error::Validation { at: format!("realization {}", spec.name), msg };
        let h = spec.attractors.h.clone().ok_or_else(|| bad("no H given".into()))?;
        let k = spec.attractors.k.clone().ok_or_else(|| bad("no K given".into()))?;
        for (side, descs, name) in [(Side::Base, &h, "H"), (Side::Dual, &k, "K")] {
            for (i, v) in Gdifs::new(&spec, side).verify(descs).into_iter().enumerate() {
                if !v.is_verified() {
                    return Err(bad(format!("{name}{i}: {v}")));
                }
            }
        }
        let parabolic = spec.parabolic_letters();
        if parabolic.iter().flatten().count() == spec.code.letters.len() {
            return Err(bad("every letter is parabolic".into()));
        }
        let images = Gdifs::new(&spec, Side::Dual).compute_r(&k, &parabolic)?;
        let r: Option<Vec<Union>> = images.into_iter().map(|img| img.exact).collect();
        if let Some(given) = &spec.attractors.r {
            match &r {
                Some(r) if r == given => {}
                Some(r) => return Err(bad(format!("R is {r:?}, not {given:?}"))),
                None => return Err(bad("R does not telescope".into())),
            }
        }
        let base = (0..spec.code.letters.len()).map(|a| spec.branch(a)).collect();
        let dual = (0..spec.code.letters.len()).map(|a| spec.dual_branch(a)).collect();
        Ok(Realization { spec, h, k, r, parabolic, base, dual })
    }

    pub fn preset(name: &str) -> Result<Self> {
        Self::new(CfSpec::preset(name)?)
    }

    pub fn nodes(&self) -> usize {
        self.spec.nodes()
    }

    pub fn is_parabolic(&self, a: usize) -> bool {
        self.parabolic.contains(&Some(a))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.spec.code.letters[a].label
    }

    pub fn labels(&self, word: &[usize]) -> Vec<String> {
        word.iter().map(|&a| self.label(a).to_string()).collect()
    }

    /// `F`: every `(j, B_a⁻¹x)` with `a = iσj` and `B_a⁻¹x ∈ H_j`.
    pub fn step_f(&self, s: &OrbitState) -> Result<Vec<Move>> {
        if !self.h[s.node].contains(&s.x) {
            return Err(Error::NotInAttractor(s.to_string()));
        }
        Ok(self.acting(Side::Base, s))
    }

    /// `F♯`: every `(j, B_a x)` with `a = jσi` and `B_a x ∈ K_j`.
    pub fn step_fdual(&self, s: &OrbitState) -> Result<Vec<Move>> {
        if !self.k[s.node].contains(&s.x) {
            return Err(Error::NotInAttractor(s.to_string()));
        }
        Ok(self.acting(Side::Dual, s))
    }

    /// Branches acting on `s`, without checking that `s` is in the attractor.
    fn acting(&self, side: Side, s: &OrbitState) -> Vec<Move> {
        let (maps, descs) = match side {
            Side::Base => (&self.base, &self.h),
            Side::Dual => (&self.dual, &self.k),
        };
        let mut out: Vec<Move> = self
            .spec
            .code
            .letters
            .iter()
            .enumerate()
            .filter_map(|(a, l)| {
                let j = match side {
                    Side::Base if l.arrow.from == s.node => l.arrow.to,
                    Side::Dual if l.arrow.to == s.node => l.arrow.from,
                    _ => return None,
                };
                let y = maps[a].inv().apply(&s.x);
                descs[j].contains(&y).then(|| Move { word: vec![a], to: OrbitState::new(j, y) })
            })
            .collect();
        out.sort();
        out
    }

    /// Matrices acting on `x` at node `i`, as maps on the glued line.
    pub(crate) fn acting_maps(&self, side: Side, i: usize, x: &QNum) -> BTreeSet<[Z; 4]> {
        let maps = match side {
            Side::Base => &self.base,
            Side::Dual => &self.dual,
        };
        self.acting(side, &OrbitState::new(i, x.clone())).into_iter().map(|m| maps[m.word[0]].inv().entries()).collect()
    }

    /// `F_jump`: parabolic branches while they act, then one branch in `J`.
    pub fn jump_step(&self, s: &OrbitState) -> Result<Vec<Move>> {
        if s.x.is_rational() {
            return Err(Error::RationalPoint);
        }
        let mut out = Vec::new();
        let mut frontier = vec![(Vec::new(), s.clone())];
        let mut budget = STEP_BUDGET;
        while let Some((word, t)) = frontier.pop() {
            for m in self.step_f(&t)? {
                let mut w = word.clone();
                w.extend(&m.word);
                if self.is_parabolic(m.word[0]) {
                    budget = budget.checked_sub(1).ok_or(Error::StepBudgetExceeded)?;
                    frontier.push((w, m.to));
                } else {
                    out.push(Move { word: w, to: m.to });
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn r(&self) -> Result<&[Union]> {
        self.r.as_deref().ok_or_else(|| Error::Validation { at: self.spec.name.clone(), msg: "R is not available".into() })
    }

    pub fn in_r(&self, s: &OrbitState) -> Result<bool> {
        Ok(self.r()?[s.node].contains(&s.x))
    }

    /// `F♯_R`: dual steps until the orbit is back in `R`.
    pub fn first_return(&self, s: &OrbitState) -> Result<Vec<Move>> {
        if !self.in_r(s)? {
            return Err(Error::NotInAttractor(s.to_string()));
        }
        let mut out = Vec::new();
        let mut frontier = vec![(Vec::new(), s.clone())];
        let mut budget = STEP_BUDGET;
        while let Some((word, t)) = frontier.pop() {
            for m in self.step_fdual(&t)? {
                let mut w = word.clone();
                w.extend(&m.word);
                if self.in_r(&m.to)? {
                    out.push(Move { word: w, to: m.to });
                } else {
                    budget = budget.checked_sub(1).ok_or(Error::NoReturn)?;
                    frontier.push((w, m.to));
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }

    pub fn step(&self, map: MapKind, s: &OrbitState) -> Result<Vec<Move>> {
        match map {
            MapKind::Slow => self.step_f(s),
            MapKind::SlowDual => self.step_fdual(s),
            MapKind::Jump => self.jump_step(s),
            MapKind::FirstReturn => self.first_return(s),
        }
    }

    /// Explores every branch of the orbit of `s` and reads off its period.
    pub fn orbit(&self, map: MapKind, s: &OrbitState, max_states: usize) -> Result<OrbitReport> {
        explore(s, max_states, |t| self.step(map, t))
    }
}

/// Breadth-first exploration of a multivalued orbit with memoized states.
pub fn explore<F>(s: &OrbitState, max_states: usize, mut succ: F) -> Result<OrbitReport>
where
    F: FnMut(&OrbitState) -> Result<Vec<Move>>,
{
    let mut index: HashMap<OrbitState, usize> = HashMap::new();
    let mut states = vec![s.clone()];
    let mut edges: Vec<Vec<(usize, Vec<usize>)>> = Vec::new();
    index.insert(s.clone(), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let moves = succ(&states[u])?;
        let mut out = Vec::with_capacity(moves.len());
        for m in moves {
            let v = match index.get(&m.to) {
                Some(&v) => v,
                None => {
                    if states.len() >= max_states {
                        return Err(Error::StepBudgetExceeded);
                    }
                    states.push(m.to.clone());
                    index.insert(m.to, states.len() - 1);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                }
            };
            out.push((v, m.word));
        }
        if edges.len() <= u {
            edges.resize(u + 1, Vec::new());
        }
        edges[u] = out;
    }
    edges.resize(states.len(), Vec::new());
    let n = states.len();
    // shortest paths from the start, for the period and the preperiod
    let mut dist = vec![usize::MAX; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    dist[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    let mut back: Option<(usize, usize)> = None;
    while let Some(u) = queue.pop_front() {
        for (e, (v, _)) in edges[u].iter().enumerate() {
            if *v == 0 && back.is_none() {
                back = Some((u, e));
            }
            if dist[*v] == usize::MAX {
                dist[*v] = dist[u] + 1;
                parent[*v] = Some((u, e));
                queue.push_back(*v);
            }
        }
    }
    let reaches = |from: usize, to: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        while let Some(u) = stack.pop() {
            if u == to {
                return true;
            }
            if !std::mem::replace(&mut seen[u], true) {
                stack.extend(edges[u].iter().map(|(v, _)| *v));
            }
        }
        false
    };
    let on_cycle: Vec<bool> = (0..n).map(|u| edges[u].iter().any(|(v, _)| reaches(*v, u))).collect();
    let preperiod = (0..n).filter(|&u| on_cycle[u]).map(|u| dist[u]).min().unwrap_or(usize::MAX);
    let multivalued = edges.iter().filter(|e| e.len() > 1).count();
    let (mut period, mut trace) = (Vec::new(), Vec::new());
    if let Some((u, e)) = back {
        // walk the parent chain from u back to the start
        let mut path = vec![(u, e)];
        let mut v = u;
        while let Some((p, pe)) = parent[v] {
            path.push((p, pe));
            v = p;
        }
        path.reverse();
        for (u, e) in path {
            trace.push(states[u].clone());
            period.push(edges[u][e].1.clone());
        }
    }
    Ok(OrbitReport { purely_periodic: back.is_some(), period, trace, preperiod, multivalued, states: n })
}

/// Why two glued copies of a point disagree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum RealizationVerdict {
    Ok,
    Fail { witness: QNum, nodes: (usize, usize), images: (Vec<QNum>, Vec<QNum>) },
}

impl RealizationVerdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, RealizationVerdict::Ok)
    }
}

impl fmt::Display for RealizationVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealizationVerdict::Ok => write!(f, "ok"),
            RealizationVerdict::Fail { witness, nodes: (i, j), images: (a, b) } => {
                let show = |v: &[QNum]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
                write!(f, "fail at {witness}: images {{{}}} from node {i}, {{{}}} from node {j}", show(a), show(b))
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Geometry {
    Geometric,
    BaseOnly,
    Neither,
}

/// Tail depth used to lay out the cells of an overlap.
const CELL_DEPTH: usize = 16;

impl Realization {
    /// Condition (i) of a realization on one side: glued copies of a point
    /// have the same glued images.
    ///
    /// Each overlap `X_i ∩ X_j` is cut at the endpoints of all branch images.
    /// Inside a cell the acting matrices are constant, so they are compared
    /// as matrices; at cut points the image sets are compared. Cells touching
    /// a tail limit are left out, the limit itself is checked as a point.
    pub fn realization_check(&self, side: Side) -> RealizationVerdict {
        let descs = match side {
            Side::Base => &self.h,
            Side::Dual => &self.k,
        };
        let ifs = Gdifs::new(&self.spec, side);
        for i in 0..self.nodes() {
            for j in i + 1..self.nodes() {
                let mut cuts: Vec<QNum> = Vec::new();
                let mut limits: Vec<QNum> = Vec::new();
                for d in [&descs[i], &descs[j]] {
                    cuts.extend(d.truncate(CELL_DEPTH).endpoints());
                    if let AttractorDesc::Tail(t) = d {
                        limits.push(t.limit.clone());
                    }
                }
                for (k, from) in ifs.incoming(i).into_iter().chain(ifs.incoming(j)) {
                    let m = ifs.map(k);
                    cuts.extend(descs[from].truncate(CELL_DEPTH).image(m).endpoints());
                    if let AttractorDesc::Tail(t) = &descs[from] {
                        limits.push(m.apply(&t.limit));
                    }
                }
                cuts.extend(limits.iter().cloned());
                cuts.sort_by_key(circ_key);
                cuts.dedup();
                let both = |x: &QNum| descs[i].contains(x) && descs[j].contains(x);
                let images = |node: usize, x: &QNum| -> Vec<QNum> {
                    let mut v: Vec<QNum> =
                        self.acting(side, &OrbitState::new(node, x.clone())).into_iter().map(|m| m.to.x).collect();
                    v.sort_by_key(circ_key);
                    v.dedup();
                    v
                };
                let fail = |x: &QNum| RealizationVerdict::Fail {
                    witness: x.clone(),
                    nodes: (i, j),
                    images: (images(i, x), images(j, x)),
                };
                for x in &cuts {
                    if both(x) && images(i, x) != images(j, x) {
                        return fail(x);
                    }
                }
                for w in 0..cuts.len() {
                    let (a, b) = (&cuts[w], &cuts[(w + 1) % cuts.len()]);
                    if limits.contains(a) || limits.contains(b) {
                        continue;
                    }
                    let Some(c) = between(a, b) else { continue };
                    if both(&c) && self.acting_maps(side, i, &c) != self.acting_maps(side, j, &c) {
                        return fail(&c);
                    }
                }
            }
        }
        RealizationVerdict::Ok
    }

    pub fn geometric_check(&self) -> Geometry {
        if !self.realization_check(Side::Base).is_ok() {
            Geometry::Neither
        } else if self.realization_check(Side::Dual).is_ok() {
            Geometry::Geometric
        } else {
            Geometry::BaseOnly
        }
    }
}

/// Primitive forms of discriminant `d` with `0 < f1 ≤ f1max` and a root in
/// `window`, as (form selecting that root, root, conjugate).
pub fn enumerate_quadratics(d: Z, window: &Union, f1max: Z) -> Result<Vec<(Form, Quad<Z>, Quad<Z>)>> {
    if d <= 0 || is_perfect_square(&d) || d.rem_euclid(4) > 1 {
        return Err(Error::BadDiscriminant);
    }
    if window.contains(&Point::Infinity) {
        return Err(Error::OutOfRange("window contains ∞".into()));
    }
    let reach = window
        .endpoints()
        .iter()
        .filter_map(|x| x.finite().map(|q| q.abs().ceil()))
        .max()
        .unwrap_or(0);
    let root_d = (d as f64).sqrt().ceil() as Z;
    let mut out = Vec::new();
    for f1 in 1..=f1max {
        let f2max = 2 * f1 * reach + root_d + 1;
        for f2 in -f2max..=f2max {
            let num = f2 * f2 - d;
            if num % (4 * f1) != 0 {
                continue;
            }
            let f3 = num / (4 * f1);
            for plus in [true, false] {
                let form = QuadForm::new(f1, f2, f3, plus);
                if !form.is_primitive() {
                    break;
                }
                let (w, c) = form.roots()?;
                if window.contains(&Point::Finite(w.clone())) {
                    out.push((form, w, c));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GaloisMode {
    Slow,
    Jump,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisRecord {
    pub form: [i64; 3],
    pub node: usize,
    pub omega: String,
    pub conj: String,
    pub purely_periodic: bool,
    pub criterion_met: bool,
    pub period_labels: Vec<String>,
    pub dual_period_labels: Vec<String>,
    /// Problems found with the dual orbit of the conjugate.
    pub dual_problem: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GaloisReport {
    pub spec: String,
    pub mode: GaloisMode,
    pub dmax: i64,
    pub f1max: i64,
    pub tested: usize,
    pub purely_periodic: usize,
    pub counterexamples: usize,
    /// Purely periodic points whose dual orbit was checked for reversal.
    pub reversal_checked: usize,
    pub reversal_failures: usize,
    pub records: Vec<GaloisRecord>,
}

impl GaloisReport {
    pub fn passed(&self) -> bool {
        self.counterexamples == 0 && self.reversal_failures == 0
    }
}

const ORBIT_STATES: usize = 1 << 14;

impl Realization {
    /// The Galois criterion at node `i`: `ω'` in `K_i` (slow) or `R_i` (jump).
    pub fn criterion(&self, mode: GaloisMode, i: usize, conj: &QNum) -> Result<bool> {
        Ok(match mode {
            GaloisMode::Slow => self.k[i].contains(conj),
            GaloisMode::Jump => self.r()?[i].contains(conj),
        })
    }

    /// Orbit of `ω` under `F` or `F_jump`, and for purely periodic points the
    /// dual orbit of `ω'` under `F♯` or `F♯_R`, checked for time reversal.
    pub fn galois_point(&self, mode: GaloisMode, form: &Form, i: usize, w: &Quad<Z>) -> Result<GaloisRecord> {
        let (map, dual_map) = match mode {
            GaloisMode::Slow => (MapKind::Slow, MapKind::SlowDual),
            GaloisMode::Jump => (MapKind::Jump, MapKind::FirstReturn),
        };
        let x = Point::Finite(w.clone());
        let c = x.conj();
        let rep = self.orbit(map, &OrbitState::new(i, x.clone()), ORBIT_STATES)?;
        let mut rec = GaloisRecord {
            form: [form.f1 as i64, form.f2 as i64, form.f3 as i64],
            node: i,
            omega: x.to_string(),
            conj: c.to_string(),
            purely_periodic: rep.purely_periodic,
            criterion_met: self.criterion(mode, i, &c)?,
            period_labels: self.labels(&rep.period_letters()),
            dual_period_labels: vec![],
            dual_problem: None,
        };
        if rep.purely_periodic {
            rec.dual_problem = self.check_reversal(dual_map, &rep).err();
            if let Ok(d) = self.orbit(dual_map, &OrbitState::new(i, c), ORBIT_STATES) {
                rec.dual_period_labels = self.labels(&d.period_letters());
            }
        }
        Ok(rec)
    }

    /// `(F♯)ᵗ(ω') = (F⁻ᵗ(ω))'` along the period, with the period reversed.
    fn check_reversal(&self, dual_map: MapKind, rep: &OrbitReport) -> std::result::Result<(), String> {
        if rep.multivalued > 0 {
            return Err(format!("purely periodic orbit has {} multivalued states", rep.multivalued));
        }
        let p = rep.trace.len();
        let start = OrbitState::new(rep.trace[0].node, rep.trace[0].x.conj());
        let d = self.orbit(dual_map, &start, ORBIT_STATES).map_err(|e| e.to_string())?;
        if !d.purely_periodic {
            return Err("dual orbit is not purely periodic".into());
        }
        if d.multivalued > 0 {
            return Err("dual orbit is multivalued".into());
        }
        let want: Vec<Vec<usize>> =
            rep.period.iter().rev().map(|w| w.iter().rev().copied().collect()).collect();
        if d.period != want {
            return Err(format!("dual period {:?} is not the reverse of {:?}", d.period, rep.period));
        }
        for t in 0..p {
            let s = &rep.trace[(p - t) % p];
            if d.trace[t] != OrbitState::new(s.node, s.x.conj()) {
                return Err(format!("dual orbit at time {t} is {}, expected the conjugate of {s}", d.trace[t]));
            }
        }
        Ok(())
    }

    /// Sweeps every discriminant up to `dmax` and every form with
    /// `|f1| ≤ f1max` whose root lies in some `H_i`.
    pub fn galois_verify(&self, dmax: Z, f1max: Z, mode: GaloisMode) -> Result<GaloisReport> {
        let ds: Vec<Z> = (2..=dmax).filter(|&d| d.rem_euclid(4) <= 1 && !is_perfect_square(&d)).collect();
        let per_d: Vec<Result<Vec<GaloisRecord>>> = ds
            .par_iter()
            .map(|&d| {
                let mut recs = Vec::new();
                for i in 0..self.nodes() {
                    let window = self.h[i].truncate(0);
                    for (form, w, _) in enumerate_quadratics(d, &window, f1max)? {
                        if self.h[i].contains(&Point::Finite(w.clone())) {
                            recs.push(self.galois_point(mode, &form, i, &w)?);
                        }
                    }
                }
                Ok(recs)
            })
            .collect();
        let mut records = Vec::new();
        for r in per_d {
            records.extend(r?);
        }
        let count = |f: &dyn Fn(&GaloisRecord) -> bool| records.iter().filter(|r| f(r)).count();
        Ok(GaloisReport {
            spec: self.spec.name.clone(),
            mode,
            dmax: dmax as i64,
            f1max: f1max as i64,
            tested: records.len(),
            purely_periodic: count(&|r| r.purely_periodic),
            counterexamples: count(&|r| r.purely_periodic != r.criterion_met),
            reversal_checked: count(&|r| r.purely_periodic),
            reversal_failures: count(&|r| r.dual_problem.is_some()),
            records,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Interval;

    fn p(s: &str) -> QNum {
        QNum::parse(s).unwrap()
    }

    fn st(i: usize, s: &str) -> OrbitState {
        OrbitState::new(i, p(s))
    }

    fn targets(ms: &[Move]) -> Vec<OrbitState> {
        ms.iter().map(|m| m.to.clone()).collect()
    }

    #[test]
    fn presets_are_realizations() {
        for name in crate::cfspec::preset_names() {
            let r = Realization::preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(r.parabolic.iter().any(Option::is_some), "{name}");
        }
    }

    #[test]
    fn farey_steps() {
        let r = Realization::preset("farey").unwrap();
        assert_eq!(targets(&r.step_f(&st(0, "2/5")).unwrap()), [st(0, "2/3")]);
        assert_eq!(targets(&r.step_f(&st(0, "0")).unwrap()), [st(0, "0")]);
        assert!(matches!(r.step_f(&st(0, "3/2")), Err(Error::NotInAttractor(_))));
        // both branches at 1/2
        assert_eq!(targets(&r.step_f(&st(0, "1/2")).unwrap()), [st(0, "1"), st(0, "1")]);
        // B_a(-3) = 3/2 leaves K, B_b(-3) = -1/(-3 + 1)... = -1/2 stays
        let dual = targets(&r.step_fdual(&st(0, "-3")).unwrap());
        assert_eq!(dual, [st(0, "-1/2")]);
        assert_eq!(targets(&r.step_fdual(&st(0, "0")).unwrap()), [st(0, "0")]);
    }

    #[test]
    fn orbits() {
        let farey = Realization::preset("farey").unwrap();
        let rep = farey.orbit(MapKind::Slow, &st(0, "(-1 1 2 5)"), 100).unwrap();
        assert!(rep.purely_periodic);
        assert_eq!(farey.labels(&rep.period_letters()), ["b"]);
        // √2/2 is purely periodic for the slow map, not for the Gauss map
        let rep = farey.orbit(MapKind::Slow, &st(0, "(0 1 2 2)"), 100).unwrap();
        assert!(rep.purely_periodic);
        assert_eq!(farey.labels(&rep.period_letters()), ["b", "a"]);
        let rep = farey.orbit(MapKind::Jump, &st(0, "(0 1 2 2)"), 100).unwrap();
        assert!(!rep.purely_periodic);
        assert_eq!(rep.preperiod, 1);
        let jump = farey.jump_step(&st(0, "(0 1 2 2)")).unwrap();
        assert_eq!(targets(&jump), [st(0, "(-1 1 1 2)")]);
        assert_eq!(farey.jump_step(&st(0, "1/3")), Err(Error::RationalPoint));
        let even = Realization::preset("even").unwrap();
        let rep = even.orbit(MapKind::Slow, &st(1, "(-1 1 1 2)"), 100).unwrap();
        assert!(rep.purely_periodic);
        assert!(even.k[1].contains(&p("(-1 -1 1 2)")));
    }

    #[test]
    fn tau_steps() {
        let r = Realization::preset("tau-minus-one").unwrap();
        let x = st(1, "(15 -1 22 5)");
        let first = r.step_f(&x).unwrap();
        assert_eq!(first.len(), 1);
        assert_eq!(r.step_f(&first[0].to).unwrap().len(), 2);
        for i in 0..2 {
            let back = r.first_return(&st(i, "-5/2")).unwrap();
            let pts: BTreeSet<QNum> = back.iter().map(|m| m.to.x.clone()).collect();
            assert_eq!(pts.into_iter().collect::<Vec<_>>(), [p("-2")]);
        }
        // the J-branch q is x ↦ -1/(x+3) on the dual side
        let q = r.spec.code.index_of("q").unwrap();
        assert_eq!(r.dual[q].inv(), Mat::from_i64([[0, -1], [1, 3]]).unwrap());
    }

    #[test]
    fn geometry_of_presets() {
        let expect = [
            ("farey", Geometry::Geometric),
            ("ceiling", Geometry::Geometric),
            ("even", Geometry::Geometric),
            ("odd", Geometry::BaseOnly),
            ("nicf", Geometry::BaseOnly),
            ("tau-minus-one", Geometry::Geometric),
        ];
        for (name, g) in expect {
            assert_eq!(Realization::preset(name).unwrap().geometric_check(), g, "{name}");
        }
    }

    #[test]
    fn shifted_interval_is_not_geometric() {
        let spec = CfSpec::preset("tau-minus-one").unwrap();
        let iv = Interval::from_endpoints(&p("0"), &p("1")).unwrap();
        let r = Realization::new(spec.reinterval(0, iv).unwrap()).unwrap();
        assert!(r.realization_check(Side::Base).is_ok());
        match r.realization_check(Side::Dual) {
            RealizationVerdict::Fail { witness, images: (a, b), .. } => {
                assert!(r.k[0].contains(&witness) && r.k[1].contains(&witness));
                assert_ne!(a, b);
            }
            RealizationVerdict::Ok => panic!("dual realization accepted"),
        }
    }

    #[test]
    fn enumeration() {
        let unit = Union::arc(p("0"), p("1"));
        let five = enumerate_quadratics(5, &unit, 3).unwrap();
        assert!(five.iter().any(|(f, w, _)| (f.f1, f.f2, f.f3) == (1, 1, -1) && Point::Finite(w.clone()) == p("(-1 1 2 5)")));
        let eight = enumerate_quadratics(8, &unit, 3).unwrap();
        assert!(eight.iter().any(|(f, _, _)| (f.f1, f.f2, f.f3) == (1, 2, -1)));
        assert_eq!(enumerate_quadratics(4, &unit, 3).unwrap_err(), Error::BadDiscriminant);
        assert_eq!(enumerate_quadratics(7, &unit, 3).unwrap_err(), Error::BadDiscriminant);
        for (f, w, c) in five {
            assert_eq!(f.discriminant(), 5);
            assert!(f.is_primitive());
            assert_eq!(w.conj(), c);
        }
    }

    /// `1/x - ⌊1/x⌋`.
    fn gauss(x: &Quad<Z>) -> Quad<Z> {
        let y = x.recip().unwrap();
        y.add_int(&-y.floor())
    }

    #[test]
    fn farey_jump_is_gauss() {
        let r = Realization::preset("farey").unwrap();
        let unit = Union::arc(p("0"), p("1"));
        for d in [5, 8, 12, 13, 21, 28] {
            for (_, w, _) in enumerate_quadratics(d, &unit, 6).unwrap() {
                let got = targets(&r.jump_step(&OrbitState::new(0, Point::Finite(w.clone()))).unwrap());
                assert_eq!(got, [OrbitState::new(0, Point::Finite(gauss(&w)))], "{w}");
            }
        }
    }

    #[test]
    fn small_sweeps() {
        for name in ["farey", "tau-minus-one"] {
            let r = Realization::preset(name).unwrap();
            for mode in [GaloisMode::Slow, GaloisMode::Jump] {
                let rep = r.galois_verify(40, 8, mode).unwrap();
                assert!(rep.tested > 0 && rep.purely_periodic > 0, "{name} {mode:?}");
                let bad: Vec<_> = rep
                    .records
                    .iter()
                    .filter(|x| x.purely_periodic != x.criterion_met || x.dual_problem.is_some())
                    .collect();
                assert!(bad.is_empty(), "{name} {mode:?}: {bad:?}");
            }
        }
    }
}
