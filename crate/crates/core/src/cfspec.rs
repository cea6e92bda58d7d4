//! Codes in the multimonoid, abstract continued fractions and their
//! definition files.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::path::Path;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::attractor::desc::{AttractorDesc, Tail};
use crate::modular::{branch_matrix, dual_matrix, interval_member};
use crate::words::{left_quotient, Arrow, Word};
use crate::{Error, Interval, Mat, QNum, Result, Union, Z};

pub type Rational = Ratio<Z>;

/// A codeword with its label.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Letter {
    pub label: String,
    pub arrow: Arrow,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Code {
    pub nodes: usize,
    pub letters: Vec<Letter>,
}

/// Outcome of the codehood test. `No` carries two distinct factorizations
/// of the same element, as label lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CodeVerdict {
    Yes,
    No { left: Vec<String>, right: Vec<String> },
}

impl CodeVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, CodeVerdict::Yes)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Perron {
    Yes(Vec<Z>),
    No,
}

impl Code {
    pub fn new(nodes: usize, letters: Vec<Letter>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut arrows = HashSet::new();
        for (k, l) in letters.iter().enumerate() {
            let at = || format!("code[{k}]");
            if l.arrow.from >= nodes || l.arrow.to >= nodes {
                return Err(Error::Validation { at: at(), msg: format!("node out of range in {}", l.arrow) });
            }
            if !seen.insert(l.label.clone()) {
                return Err(Error::Validation { at: at(), msg: format!("duplicate label `{}`", l.label) });
            }
            if !arrows.insert(l.arrow.clone()) {
                return Err(Error::Validation { at: at(), msg: format!("duplicate arrow {}", l.arrow) });
            }
        }
        Ok(Code { nodes, letters })
    }

    /// Builds a code from `(label, "i:word:j")` pairs.
    pub fn parse(nodes: usize, items: &[(&str, &str)]) -> Result<Self> {
        let letters = items
            .iter()
            .map(|(l, a)| Ok(Letter { label: l.to_string(), arrow: a.parse()? }))
            .collect::<Result<Vec<_>>>()?;
        Code::new(nodes, letters)
    }

    pub fn get(&self, label: &str) -> Option<&Letter> {
        self.letters.iter().find(|l| l.label == label)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.letters.iter().position(|l| l.label == label)
    }

    /// Letters `i → j` as indices.
    pub fn edges(&self, i: usize, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.letters.len()).filter(move |&k| self.letters[k].arrow.from == i && self.letters[k].arrow.to == j)
    }

    pub fn from_node(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.letters.len()).filter(move |&k| self.letters[k].arrow.from == i)
    }

    pub fn into_node(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.letters.len()).filter(move |&k| self.letters[k].arrow.to == i)
    }

    pub fn max_grade(&self) -> usize {
        self.letters.iter().map(|l| l.arrow.grade()).max().unwrap_or(0)
    }

    pub fn is_code(&self) -> CodeVerdict {
        is_code(self)
    }

    pub fn dual(&self) -> Code {
        dual_code(self)
    }

    pub fn strongly_connected(&self) -> bool {
        strongly_connected(self)
    }

    pub fn g_matrix(&self) -> Vec<Vec<Rational>> {
        g_matrix(self)
    }
}

/// `(iσj)♯ = jσ♯i` letterwise, labels kept.
pub fn dual_code(c: &Code) -> Code {
    Code {
        nodes: c.nodes,
        letters: c.letters.iter().map(|l| Letter { label: l.label.clone(), arrow: l.arrow.sharp() }).collect(),
    }
}

/// `r` with `a · r = b`, both starting at the same node.
fn arrow_quotient(a: &Arrow, b: &Arrow) -> Option<Arrow> {
    if a.from != b.from {
        return None;
    }
    let w = left_quotient(&a.word, &b.word).ok()?;
    Some(Arrow::new(a.to, w, b.to))
}

fn grade_zero_cycle(c: &Code) -> Option<Vec<usize>> {
    let zero: Vec<usize> = (0..c.letters.len()).filter(|&k| c.letters[k].arrow.grade() == 0).collect();
    for &start in &zero {
        // search a path of grade-0 letters back to the start node
        let s = c.letters[start].arrow.from;
        let mut prev: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        let mut seen = HashSet::from([start]);
        while let Some(k) = queue.pop_front() {
            if c.letters[k].arrow.to == s {
                let mut path = vec![k];
                let mut cur = k;
                while let Some(&p) = prev.get(&cur) {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for &m in &zero {
                if c.letters[m].arrow.from == c.letters[k].arrow.to && seen.insert(m) {
                    prev.insert(m, k);
                    queue.push_back(m);
                }
            }
        }
    }
    None
}

/// Sardinas–Patterson over the multimonoid.
///
/// A state is a pair of factorizations `A`, `B` together with the residual
/// `d` such that `prod(A) · d = prod(B)`. The code fails to be free iff some
/// residual becomes an identity arrow.
pub fn is_code(c: &Code) -> CodeVerdict {
    let labels = |v: &[usize]| v.iter().map(|&k| c.letters[k].label.clone()).collect::<Vec<_>>();
    for l in &c.letters {
        if l.arrow.is_identity() {
            return CodeVerdict::No { left: vec![l.label.clone()], right: vec![] };
        }
    }
    if let Some(cyc) = grade_zero_cycle(c) {
        let two: Vec<usize> = cyc.iter().chain(cyc.iter()).copied().collect();
        let four: Vec<usize> = two.iter().chain(two.iter()).copied().collect();
        return CodeVerdict::No { left: labels(&two), right: labels(&four) };
    }
    let n = c.letters.len();
    let mut seen: HashSet<Arrow> = HashSet::new();
    let mut queue: VecDeque<(Vec<usize>, Vec<usize>, Arrow)> = VecDeque::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            if let Some(r) = arrow_quotient(&c.letters[a].arrow, &c.letters[b].arrow) {
                if r.is_identity() {
                    return CodeVerdict::No { left: labels(&[a]), right: labels(&[b]) };
                }
                if seen.insert(r.clone()) {
                    queue.push_back((vec![a], vec![b], r));
                }
            }
        }
    }
    while let Some((sa, sb, d)) = queue.pop_front() {
        for k in 0..n {
            let w = &c.letters[k].arrow;
            if w.from != d.from {
                continue;
            }
            let mut ext = sa.clone();
            ext.push(k);
            // the codeword overshoots the residual: sides swap
            if let Some(r) = arrow_quotient(&d, w) {
                if r.is_identity() {
                    return CodeVerdict::No { left: labels(&ext), right: labels(&sb) };
                }
                if seen.insert(r.clone()) {
                    queue.push_back((sb.clone(), ext.clone(), r));
                }
            }
            if let Some(r) = arrow_quotient(w, &d) {
                if r.is_identity() {
                    return CodeVerdict::No { left: labels(&ext), right: labels(&sb) };
                }
                if seen.insert(r.clone()) {
                    queue.push_back((ext, sb.clone(), r));
                }
            }
        }
    }
    CodeVerdict::Yes
}

pub fn strongly_connected(c: &Code) -> bool {
    if c.nodes == 0 {
        return false;
    }
    let reach = |forward: bool| {
        let mut seen = vec![false; c.nodes];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            for l in &c.letters {
                let (s, t) = if forward { (l.arrow.from, l.arrow.to) } else { (l.arrow.to, l.arrow.from) };
                if s == i && !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.into_iter().all(|b| b)
    };
    reach(true) && reach(false)
}

pub fn g_matrix(c: &Code) -> Vec<Vec<Rational>> {
    let mut g = vec![vec![Rational::zero(); c.nodes]; c.nodes];
    for l in &c.letters {
        g[l.arrow.from][l.arrow.to] += Rational::new(1, 1 << l.arrow.grade());
    }
    g
}

/// Exact test for a positive eigenvector of eigenvalue 1.
///
/// Returns it scaled to coprime integers. For an irreducible nonnegative
/// matrix this is equivalent to spectral radius 1.
pub fn perron_unit(g: &[Vec<Rational>]) -> Perron {
    let n = g.len();
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|i| (0..n).map(|j| g[i][j] - if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col];
                for cc in 0..n {
                    let v = a[row][cc];
                    a[r][cc] -= f * v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.len() != 1 {
        return Perron::No;
    }
    let mut v = vec![Rational::zero(); n];
    v[free[0]] = Rational::one();
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = -a[r][free[0]];
    }
    let lcm = v.iter().fold(1 as Z, |acc, x| num_integer::lcm(acc, *x.denom()));
    let ints: Vec<Z> = v.iter().map(|x| (x * Rational::from_integer(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0 as Z, |acc, x| num_integer::gcd(acc, *x));
    let sign = if ints.iter().any(|x| x.is_negative()) { -1 } else { 1 };
    let ints: Vec<Z> = ints.iter().map(|x| sign * x / g).collect();
    if ints.iter().all(|x| x.is_positive()) {
        Perron::Yes(ints)
    } else {
        Perron::No
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Attractors {
    pub h: Option<Vec<AttractorDesc>>,
    pub k: Option<Vec<AttractorDesc>>,
    pub r: Option<Vec<Union>>,
}

/// An abstract continued fraction together with a choice of intervals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CfSpec {
    pub name: String,
    pub code: Code,
    pub intervals: Vec<Interval>,
    pub zero_point: QNum,
    pub attractors: Attractors,
}

impl CfSpec {
    pub fn nodes(&self) -> usize {
        self.code.nodes
    }

    pub fn letter(&self, k: usize) -> &Letter {
        &self.code.letters[k]
    }

    /// `B_a` for letter `k`.
    pub fn branch(&self, k: usize) -> Mat {
        branch_matrix(&self.code.letters[k].arrow, &self.intervals)
    }

    /// `D_a = B_a⁻¹` for letter `k`.
    pub fn dual_branch(&self, k: usize) -> Mat {
        dual_matrix(&self.code.letters[k].arrow, &self.intervals)
    }

    /// Per node, the parabolic loop whose branch fixes `zero_point`, if any.
    pub fn parabolic_letters(&self) -> Vec<Option<usize>> {
        (0..self.nodes())
            .map(|i| {
                self.code.edges(i, i).find(|&k| {
                    self.letter(k).arrow.is_parabolic() && self.branch(k).apply(&self.zero_point) == self.zero_point
                })
            })
            .collect()
    }

    pub fn label_index(&self, label: &str) -> Result<usize> {
        self.code.index_of(label).ok_or_else(|| Error::Validation { at: "label".into(), msg: format!("unknown label `{label}`") })
    }

    pub fn check(&self) -> CfReport {
        check_cf(self)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        load_spec(path)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        save_spec(self, path)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        raw.into_spec()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&RawSpec::from_spec(self)).expect("serializable")
    }

    /// One of the shipped presets, by name.
    pub fn preset(name: &str) -> Result<Self> {
        let text = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| Error::Parse(format!("unknown preset `{name}`")))?;
        Self::from_json(text)
    }

    /// The same code with interval `i` replaced.
    pub fn with_interval(&self, i: usize, iv: Interval) -> Self {
        let mut s = self.clone();
        s.intervals[i] = iv;
        s.attractors = Attractors { h: None, k: None, r: None };
        s
    }
}

impl CfSpec {
    /// Replaces `I_i` by `iv`, carrying `H_i` and `K_i` along by `iv · I_i⁻¹`.
    /// `R` is dropped, since the parabolic letters depend on the zero point.
    pub fn reinterval(&self, i: usize, iv: Interval) -> Result<Self> {
        let m = iv.matrix().mul(&self.intervals[i].matrix().inv());
        let mut s = self.clone();
        s.intervals[i] = iv;
        let a = &mut s.attractors;
        for descs in [&mut a.h, &mut a.k].into_iter().flatten() {
            descs[i] = descs[i].image(&m)?;
        }
        a.r = None;
        Ok(s)
    }
}

pub const PRESETS: &[(&str, &str)] = &[
    ("farey", include_str!("../presets/farey.json")),
    ("ceiling", include_str!("../presets/ceiling.json")),
    ("even", include_str!("../presets/even.json")),
    ("odd", include_str!("../presets/odd.json")),
    ("nicf", include_str!("../presets/nicf.json")),
    ("tau-minus-one", include_str!("../presets/tau-minus-one.json")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

#[derive(Clone, Debug)]
pub struct CfReport {
    pub code: CodeVerdict,
    pub dual_code: CodeVerdict,
    pub strongly_connected: bool,
    pub g: Vec<Vec<Rational>>,
    pub perron: Perron,
    pub interval_problems: Vec<String>,
}

impl CfReport {
    pub fn admissible(&self) -> bool {
        self.code.is_yes()
            && self.strongly_connected
            && matches!(self.perron, Perron::Yes(_))
            && self.interval_problems.is_empty()
    }
}

impl fmt::Display for CfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.code {
            CodeVerdict::Yes => writeln!(f, "code: yes")?,
            CodeVerdict::No { left, right } => writeln!(f, "code: no ({} = {})", left.join(" "), right.join(" "))?,
        }
        writeln!(f, "strongly connected: {}", self.strongly_connected)?;
        let rows: Vec<String> = self
            .g
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        writeln!(f, "G = [{}]", rows.join(", "))?;
        match &self.perron {
            Perron::Yes(u) => writeln!(f, "spectral radius 1, eigenvector {u:?}")?,
            Perron::No => writeln!(f, "spectral radius is not 1")?,
        }
        for p in &self.interval_problems {
            writeln!(f, "interval: {p}")?;
        }
        write!(f, "admissible: {}", self.admissible())
    }
}

pub fn check_cf(spec: &CfSpec) -> CfReport {
    let c = &spec.code;
    let g = c.g_matrix();
    let strongly = c.strongly_connected();
    let perron = if strongly { perron_unit(&g) } else { Perron::No };
    let mut problems = Vec::new();
    if spec.intervals.len() != c.nodes {
        problems.push(format!("{} intervals for {} nodes", spec.intervals.len(), c.nodes));
    } else {
        for k in 0..c.letters.len() {
            let a = &c.letters[k].arrow;
            if a.grade() == 0 {
                continue;
            }
            let b = spec.branch(k);
            let (lo, hi) = (&spec.intervals[a.to].lo(), &spec.intervals[a.to].hi());
            let target = &spec.intervals[a.from];
            for x in [lo, hi] {
                let y = b.apply(x);
                if !interval_member(&y, target) {
                    problems.push(format!("B_{} sends {x} outside I_{}", c.letters[k].label, a.from));
                }
            }
            let img = Union::from_interval(&spec.intervals[a.to]).image(&b);
            if img == Union::from_interval(target) {
                problems.push(format!("B_{} maps I_{} onto I_{}", c.letters[k].label, a.to, a.from));
            }
        }
    }
    CfReport { code: c.is_code(), dual_code: c.dual().is_code(), strongly_connected: strongly, g, perron, interval_problems: problems }
}

// ---- definition files ----

#[derive(Serialize, Deserialize)]
struct RawSpec {
    name: String,
    nodes: usize,
    code: Vec<RawLetter>,
    intervals: Vec<RawInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero_point: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    attractors: Option<RawAttractors>,
}

#[derive(Serialize, Deserialize)]
struct RawLetter {
    label: String,
    from: usize,
    word: String,
    to: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawInterval {
    Matrix { matrix: [[i64; 2]; 2] },
    Endpoints { endpoints: [String; 2] },
}

#[derive(Serialize, Deserialize, Default)]
struct RawAttractors {
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    h: Option<Vec<RawNode>>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    k: Option<Vec<RawNode>>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    r: Option<Vec<Vec<RawArc>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawNode {
    Tail { tail: RawTail },
    Arcs(Vec<RawArc>),
}

#[derive(Serialize, Deserialize)]
struct RawTail {
    #[serde(rename = "P_label")]
    p_label: String,
    base: Vec<RawArc>,
    limit: String,
}

#[derive(Serialize, Deserialize)]
struct RawArc {
    lo: String,
    hi: String,
}

fn parse_qnum(s: &str, at: &str) -> Result<QNum> {
    QNum::parse(s).map_err(|e| Error::Validation { at: at.to_string(), msg: e.to_string() })
}

fn raw_union(arcs: &[RawArc], at: &str) -> Result<Union> {
    let mut u = Union::empty();
    for (k, a) in arcs.iter().enumerate() {
        let at = format!("{at}[{k}]");
        u = u.union(&Union::arc(parse_qnum(&a.lo, &at)?, parse_qnum(&a.hi, &at)?));
    }
    Ok(u)
}

fn union_raw(u: &Union) -> Vec<RawArc> {
    u.arcs().into_iter().map(|a| RawArc { lo: a.lo.to_string(), hi: a.hi.to_string() }).collect()
}

impl RawSpec {
    fn into_spec(self) -> Result<CfSpec> {
        let letters = self
            .code
            .iter()
            .enumerate()
            .map(|(k, l)| {
                let word: Word = l.word.parse().map_err(|e: Error| Error::Validation { at: format!("code[{k}].word"), msg: e.to_string() })?;
                Ok(Letter { label: l.label.clone(), arrow: Arrow::new(l.from, word, l.to) })
            })
            .collect::<Result<Vec<_>>>()?;
        let code = Code::new(self.nodes, letters)?;
        if self.intervals.len() != self.nodes {
            return Err(Error::Validation { at: "intervals".into(), msg: format!("expected {} intervals", self.nodes) });
        }
        let intervals = self
            .intervals
            .iter()
            .enumerate()
            .map(|(k, iv)| {
                let at = format!("intervals[{k}]");
                let wrap = |e: Error| Error::Validation { at: at.clone(), msg: e.to_string() };
                match iv {
                    RawInterval::Matrix { matrix } => Interval::from_matrix(Mat::from_i64(*matrix).map_err(wrap)?).map_err(wrap),
                    RawInterval::Endpoints { endpoints } => {
                        Interval::from_endpoints(&parse_qnum(&endpoints[0], &at)?, &parse_qnum(&endpoints[1], &at)?).map_err(wrap)
                    }
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let zero_point = match &self.zero_point {
            Some(s) => parse_qnum(s, "zero_point")?,
            None => QNum::zero(),
        };
        let mut spec = CfSpec {
            name: self.name,
            code,
            intervals,
            zero_point,
            attractors: Attractors { h: None, k: None, r: None },
        };
        if let Some(att) = self.attractors {
            let nodes = |v: &Vec<RawNode>, key: &str, dual: bool| -> Result<Vec<AttractorDesc>> {
                if v.len() != spec.nodes() {
                    return Err(Error::Validation { at: format!("attractors.{key}"), msg: format!("expected {} entries", spec.nodes()) });
                }
                v.iter()
                    .enumerate()
                    .map(|(i, node)| {
                        let at = format!("attractors.{key}[{i}]");
                        match node {
                            RawNode::Arcs(a) => Ok(AttractorDesc::Finite(raw_union(a, &at)?)),
                            RawNode::Tail { tail } => {
                                let k = spec.label_index(&tail.p_label)?;
                                let map = if dual { spec.dual_branch(k) } else { spec.branch(k) };
                                let t = Tail::new(&tail.p_label, map, raw_union(&tail.base, &at)?, parse_qnum(&tail.limit, &at)?)?;
                                Ok(AttractorDesc::Tail(t))
                            }
                        }
                    })
                    .collect()
            };
            let h = att.h.as_ref().map(|v| nodes(v, "H", false)).transpose()?;
            let k = att.k.as_ref().map(|v| nodes(v, "K", true)).transpose()?;
            let r = att
                .r
                .as_ref()
                .map(|v| v.iter().enumerate().map(|(i, a)| raw_union(a, &format!("attractors.R[{i}]"))).collect::<Result<Vec<_>>>())
                .transpose()?;
            spec.attractors = Attractors { h, k, r };
        }
        Ok(spec)
    }

    fn from_spec(s: &CfSpec) -> RawSpec {
        let node = |d: &AttractorDesc| match d {
            AttractorDesc::Finite(u) => RawNode::Arcs(union_raw(u)),
            AttractorDesc::Tail(t) => RawNode::Tail {
                tail: RawTail { p_label: t.label.clone(), base: union_raw(&t.base), limit: t.limit.to_string() },
            },
        };
        let att = &s.attractors;
        let attractors = if att.h.is_none() && att.k.is_none() && att.r.is_none() {
            None
        } else {
            Some(RawAttractors {
                h: att.h.as_ref().map(|v| v.iter().map(node).collect()),
                k: att.k.as_ref().map(|v| v.iter().map(node).collect()),
                r: att.r.as_ref().map(|v| v.iter().map(union_raw).collect()),
            })
        };
        RawSpec {
            name: s.name.clone(),
            nodes: s.code.nodes,
            code: s
                .code
                .letters
                .iter()
                .map(|l| RawLetter { label: l.label.clone(), from: l.arrow.from, word: l.arrow.word.to_string(), to: l.arrow.to })
                .collect(),
            intervals: s
                .intervals
                .iter()
                .map(|iv| {
                    let [a, b, c, d] = iv.matrix().entries();
                    let e = |x: Z| i64::try_from(x).expect("interval matrix fits i64");
                    RawInterval::Matrix { matrix: [[e(a), e(b)], [e(c), e(d)]] }
                })
                .collect(),
            zero_point: if s.zero_point == QNum::zero() { None } else { Some(s.zero_point.to_string()) },
            attractors,
        }
    }
}

pub fn load_spec(path: impl AsRef<Path>) -> Result<CfSpec> {
    let text = std::fs::read_to_string(path.as_ref()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))?;
    CfSpec::from_json(&text)
}

pub fn save_spec(spec: &CfSpec, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path.as_ref(), spec.to_json()).map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tau_code() -> Code {
        Code::parse(2, &[("o", "0:n:0"), ("p", "1:l:1"), ("q", "0:nl:0"), ("r", "0:nnl:1"), ("s", "1:nf:0"), ("t", "1:lnf:1")]).unwrap()
    }

    fn farey() -> Code {
        Code::parse(1, &[("a", "0:l:0"), ("b", "0:nf:0")]).unwrap()
    }

    #[test]
    fn codehood_examples() {
        let bad = Code::parse(1, &[("x", "0:l:0"), ("y", "0:ll:0")]).unwrap();
        match bad.is_code() {
            CodeVerdict::No { left, right } => {
                let mut pair = [left, right];
                pair.sort();
                assert_eq!(pair, [vec!["x".to_string(), "x".to_string()], vec!["y".to_string()]]);
            }
            CodeVerdict::Yes => panic!("{{l, ll}} is not a code"),
        }
        assert!(tau_code().is_code().is_yes());
        assert!(farey().is_code().is_yes());
        let f = Code::parse(2, &[("a", "0:f:1"), ("b", "1:f:0"), ("c", "0:l:0")]).unwrap();
        assert!(!f.is_code().is_yes());
        let split = Code::parse(1, &[("a", "0:l:0"), ("b", "0:n:0"), ("c", "0:ln:0")]).unwrap();
        assert!(!split.is_code().is_yes());
    }

    #[test]
    fn duals() {
        let d = farey().dual();
        assert_eq!(d.letters[0].arrow.to_string(), "0:n:0");
        assert_eq!(d.letters[1].arrow.to_string(), "0:nf:0");
        assert_eq!(d.dual(), farey());
        assert_eq!(tau_code().dual().get("r").unwrap().arrow.to_string(), "1:nll:0");
    }

    #[test]
    fn connectivity() {
        assert!(tau_code().strongly_connected());
        assert!(Code::parse(1, &[("a", "0:l:0")]).unwrap().strongly_connected());
        assert!(!Code::parse(2, &[("a", "0:l:1")]).unwrap().strongly_connected());
    }

    #[test]
    fn g_and_perron() {
        let r = |a, b| Rational::new(a, b);
        assert_eq!(tau_code().g_matrix(), vec![vec![r(6, 8), r(1, 8)], vec![r(4, 8), r(6, 8)]]);
        assert_eq!(perron_unit(&tau_code().g_matrix()), Perron::Yes(vec![1, 2]));
        assert_eq!(farey().g_matrix(), vec![vec![r(1, 1)]]);
        assert_eq!(perron_unit(&farey().g_matrix()), Perron::Yes(vec![1]));
        let half = Code::parse(1, &[("a", "0:l:0")]).unwrap();
        assert_eq!(half.g_matrix(), vec![vec![r(1, 2)]]);
        assert_eq!(perron_unit(&half.g_matrix()), Perron::No);
    }

    #[test]
    fn definition_files() {
        let text = r#"{"name":"x","nodes":1,"code":[{"label":"a","from":0,"word":"fl","to":0}],"intervals":[{"endpoints":["0","1"]}]}"#;
        let s = CfSpec::from_json(text).unwrap();
        assert_eq!(s.code.letters[0].arrow.word, "nf".parse().unwrap());
        let bad = r#"{"name":"x","nodes":1,"code":[],"intervals":[{"matrix":[[2,0],[0,1]]}]}"#;
        assert!(matches!(CfSpec::from_json(bad), Err(Error::Validation { .. })));
        assert!(matches!(CfSpec::from_json("{"), Err(Error::Parse(_))));
        for name in preset_names() {
            let s = CfSpec::preset(name).unwrap();
            assert_eq!(CfSpec::from_json(&s.to_json()).unwrap(), s, "{name}");
        }
        assert_eq!(CfSpec::preset("farey").unwrap().name, "Farey");
    }

    #[test]
    fn presets_admissible() {
        for name in preset_names() {
            let r = CfSpec::preset(name).unwrap().check();
            assert!(r.admissible(), "{name}: {r}");
            assert!(r.dual_code.is_yes(), "{name}");
        }
        let s = CfSpec::preset("farey").unwrap();
        assert_eq!(s.dual_branch(1), Mat::from_i64([[1, -1], [-1, 0]]).unwrap());
    }

    fn small_code() -> impl Strategy<Value = Code> {
        let letter = (0usize..2, prop::collection::vec(0u8..2, 0..4), any::<bool>(), 0usize..2);
        prop::collection::vec(letter, 1..5).prop_filter_map("valid code", |v| {
            let items: Vec<(String, String)> = v
                .into_iter()
                .enumerate()
                .map(|(k, (i, b, f, j))| {
                    let mut w: String = b.iter().map(|&x| if x == 0 { 'l' } else { 'n' }).collect();
                    if f {
                        w.push('f');
                    }
                    (format!("c{k}"), format!("{i}:{w}:{j}"))
                })
                .collect();
            let refs: Vec<(&str, &str)> = items.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
            Code::parse(2, &refs).ok()
        })
    }

    // Brute force: distinct factorizations of equal total grade up to a bound.
    fn brute_force_is_code(c: &Code, max_grade: usize) -> bool {
        let mut seen: HashMap<Arrow, Vec<usize>> = HashMap::new();
        let mut layer: Vec<(Arrow, Vec<usize>)> =
            c.letters.iter().enumerate().map(|(k, l)| (l.arrow.clone(), vec![k])).collect();
        for _ in 0..8 {
            let mut next = Vec::new();
            for (a, f) in layer {
                if a.grade() > max_grade {
                    continue;
                }
                if a.is_identity() {
                    return false;
                }
                if let Some(prev) = seen.get(&a) {
                    if *prev != f {
                        return false;
                    }
                    continue;
                }
                seen.insert(a.clone(), f.clone());
                for (k, l) in c.letters.iter().enumerate() {
                    if let Ok(b) = a.product(&l.arrow) {
                        let mut g = f.clone();
                        g.push(k);
                        next.push((b, g));
                    }
                }
            }
            layer = next;
        }
        true
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn dual_preserves_codehood(c in small_code()) {
            prop_assert_eq!(c.is_code().is_yes(), c.dual().is_code().is_yes());
            let gt: Vec<Vec<Rational>> = (0..2).map(|i| (0..2).map(|j| c.g_matrix()[j][i]).collect()).collect();
            prop_assert_eq!(c.dual().g_matrix(), gt);
        }

        #[test]
        fn sp_agrees_with_brute_force(c in small_code()) {
            if !brute_force_is_code(&c, 6) {
                prop_assert!(!c.is_code().is_yes());
            }
        }

        #[test]
        fn witnesses_are_genuine(c in small_code()) {
            if let CodeVerdict::No { left, right } = c.is_code() {
                prop_assert_ne!(&left, &right);
                let prod = |v: &[String]| -> Option<Arrow> {
                    let mut it = v.iter().map(|l| c.get(l).unwrap().arrow.clone());
                    let first = it.next()?;
                    it.try_fold(first, |acc, a| acc.product(&a).ok())
                };
                match (prod(&left), prod(&right)) {
                    (Some(a), Some(b)) => prop_assert_eq!(a, b),
                    (Some(a), None) | (None, Some(a)) => prop_assert!(a.is_identity()),
                    (None, None) => prop_assert!(false),
                }
            }
        }
    }
}
