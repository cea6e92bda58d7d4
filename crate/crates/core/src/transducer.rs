//! LR-expansions, the infinite product Φ, and the splitting transducer whose
//! parallel runs enumerate the symbolic fiber of a point.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cfspec::{CfSpec, Code};
use crate::exact::{Point, Quad};
use crate::words::{Letter, Word};
use crate::modular::{fixed_points, FixKind};
use crate::{Error, Interval, Mat, QNum, Result};

/// Eventually periodic sequence over `{l, n}` in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LrStream {
    pub pre: Vec<Letter>,
    pub period: Vec<Letter>,
}

/// Eventually periodic sequence of code letters, by index.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PathSeq {
    pub pre: Vec<usize>,
    pub period: Vec<usize>,
}

/// Shortest preperiod, primitive period.
fn canonical<T: Clone + PartialEq>(mut pre: Vec<T>, mut period: Vec<T>) -> (Vec<T>, Vec<T>) {
    assert!(!period.is_empty(), "empty period");
    let n = period.len();
    if let Some(d) = (1..=n).find(|&d| n % d == 0 && (d..n).all(|i| period[i] == period[i - d])) {
        period.truncate(d);
    }
    while pre.last().is_some_and(|x| *x == period[period.len() - 1]) {
        pre.pop();
        period.rotate_right(1);
    }
    (pre, period)
}

impl LrStream {
    pub fn new(pre: Vec<Letter>, period: Vec<Letter>) -> Self {
        let (pre, period) = canonical(pre, period);
        LrStream { pre, period }
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// Letter at position `t`.
    pub fn at(&self, t: usize) -> Letter {
        if t < self.pre.len() {
            self.pre[t]
        } else {
            self.period[(t - self.pre.len()) % self.period.len()]
        }
    }

    /// The first `n` letters.
    pub fn take(&self, n: usize) -> Vec<Letter> {
        (0..n).map(|t| self.at(t)).collect()
    }

    /// `π*`: the point of `[0, ∞]` coded by the stream.
    pub fn value(&self) -> QNum {
        let m = |w: &[Letter]| w.iter().fold(Mat::identity(), |acc, x| acc.mul(&letter_matrix(*x)));
        let p = m(&self.period);
        let fix = match p.parabolic_fix() {
            Some(x) => x,
            None => fixed_points(&p)
                .expect("period is not the identity")
                .into_iter()
                .find(|(_, kind)| *kind == FixKind::Attracting)
                .expect("positive hyperbolic matrix")
                .0,
        };
        m(&self.pre).apply(&fix)
    }
}

pub fn letter_matrix(x: Letter) -> Mat {
    match x {
        Letter::L => Mat::l(),
        Letter::N => Mat::n(),
    }
}

impl fmt::Display for LrStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |w: &[Letter]| w.iter().map(|x| x.as_char()).collect::<String>();
        write!(f, "{}({})*", s(&self.pre), s(&self.period))
    }
}

impl FromStr for LrStream {
    type Err = Error;

    /// `prefix(period)*` over `l`, `n`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `prefix(period)*`, got `{s}`"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(bad)?;
        let body = s[open + 1..].strip_suffix(")*").ok_or_else(bad)?;
        let letters = |w: &str| -> Result<Vec<Letter>> {
            w.chars()
                .map(|c| match c {
                    'l' => Ok(Letter::L),
                    'n' => Ok(Letter::N),
                    _ => Err(bad()),
                })
                .collect()
        };
        let period = letters(body)?;
        if period.is_empty() {
            return Err(bad());
        }
        Ok(LrStream::new(letters(&s[..open])?, period))
    }
}

impl PathSeq {
    pub fn new(pre: Vec<usize>, period: Vec<usize>) -> Self {
        let (pre, period) = canonical(pre, period);
        PathSeq { pre, period }
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    pub fn at(&self, t: usize) -> usize {
        if t < self.pre.len() {
            self.pre[t]
        } else {
            self.period[(t - self.pre.len()) % self.period.len()]
        }
    }

    pub fn labels(&self, code: &Code) -> PathLabels {
        let l = |w: &[usize]| w.iter().map(|&k| code.letters[k].label.clone()).collect();
        PathLabels { preperiod: l(&self.pre), period: l(&self.period) }
    }

    pub fn display(&self, code: &Code) -> String {
        let l = |w: &[usize]| w.iter().map(|&k| code.letters[k].label.as_str()).collect::<Vec<_>>().join(" ");
        if self.pre.is_empty() {
            format!("({})*", l(&self.period))
        } else {
            format!("{} ({})*", l(&self.pre), l(&self.period))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PathLabels {
    pub preperiod: Vec<String>,
    pub period: Vec<String>,
}

/// LR-expansions of `x` relative to `base`: one, or two at interior rationals.
pub fn lr_expand(x: &QNum, base: &Interval) -> Result<Vec<LrStream>> {
    if !base.contains(x) {
        return Err(Error::NotInInterval(x.to_string()));
    }
    let y = base.matrix().inv().apply(x);
    let mut out = Vec::new();
    expand_from(y, Vec::new(), &mut out)?;
    out.sort();
    out.dedup();
    Ok(out)
}

const LR_BUDGET: usize = 1 << 20;

fn expand_from(mut y: QNum, mut word: Vec<Letter>, out: &mut Vec<LrStream>) -> Result<()> {
    let one = QNum::int(1);
    let l_inv = Mat::l().inv();
    let n_inv = Mat::n().inv();
    let mut seen: HashMap<QNum, usize> = HashMap::new();
    for _ in 0..LR_BUDGET {
        if let Some(&at) = seen.get(&y) {
            let period = word.split_off(at);
            out.push(LrStream::new(word, period));
            return Ok(());
        }
        if y == one {
            let mut w = word.clone();
            w.push(Letter::N);
            out.push(LrStream::new(w, vec![Letter::L]));
            word.push(Letter::L);
            out.push(LrStream::new(word, vec![Letter::N]));
            return Ok(());
        }
        seen.insert(y.clone(), word.len());
        let small = match &y {
            Point::Infinity => false,
            Point::Finite(q) => *q < Quad::one(),
        };
        if small {
            word.push(Letter::L);
            y = l_inv.apply(&y);
        } else {
            word.push(Letter::N);
            y = n_inv.apply(&y);
        }
    }
    Err(Error::StepBudgetExceeded)
}

/// `Φ`: starting node and LR-stream of the infinite product of a path.
pub fn phi(code: &Code, path: &PathSeq) -> Result<(usize, LrStream)> {
    let arrows: Vec<_> = path.pre.iter().chain(&path.period).map(|&k| &code.letters[k].arrow).collect();
    for w in arrows.windows(2) {
        if w[0].to != w[1].from {
            return Err(Error::NodeMismatch(w[0].to, w[1].from));
        }
    }
    let first = &code.letters[path.period[0]].arrow;
    let last = &code.letters[*path.period.last().expect("nonempty")].arrow;
    if last.to != first.from {
        return Err(Error::NodeMismatch(last.to, first.from));
    }
    let prod = |ks: &[usize]| ks.iter().fold(Word::empty(), |acc, &k| acc.concat(&code.letters[k].arrow.word));
    let pre = prod(&path.pre);
    let mut per = prod(&path.period);
    if per.flip {
        per = per.concat(&per);
    }
    if per.body.is_empty() {
        return Err(Error::Validation { at: "phi".into(), msg: "period has grade 0".into() });
    }
    let period = per.body.iter().map(|x| x.swap_if(pre.flip)).collect();
    Ok((arrows[0].from, LrStream::new(pre.body, period)))
}

/// A node of the transducer: prefix `iu`, or its dual `i'u'` when `dual`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct TNode {
    pub node: usize,
    pub prefix: Vec<Letter>,
    pub dual: bool,
}

impl fmt::Display for TNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let u: String = self.prefix.iter().map(|x| x.swap_if(self.dual).as_char()).collect();
        write!(f, "{}{}{}", self.node, if self.dual { "'" } else { "" }, u)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TEdge {
    pub from: usize,
    pub input: Letter,
    pub output: Option<usize>,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct Transducer {
    pub nodes: Vec<TNode>,
    pub edges: Vec<TEdge>,
    out: Vec<Vec<usize>>,
}

impl Transducer {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn index(&self, n: &TNode) -> Option<usize> {
        self.nodes.iter().position(|m| m == n)
    }

    fn step(&self, at: usize, z: Letter) -> impl Iterator<Item = &TEdge> + '_ {
        self.out[at].iter().map(|&e| &self.edges[e]).filter(move |e| e.input == z)
    }
}

/// Splittings `(iu)(vj)` of every letter, edges labelled by input and output.
pub fn build_transducer(code: &Code) -> Transducer {
    let mut prefixes: BTreeSet<(usize, Vec<Letter>)> = BTreeSet::new();
    // (prefix, z, flip, letter)
    let mut completions = Vec::new();
    for (k, l) in code.letters.iter().enumerate() {
        let a = &l.arrow;
        let body = &a.word.body;
        for cut in 0..body.len() {
            prefixes.insert((a.from, body[..cut].to_vec()));
        }
        if let Some(&z) = body.last() {
            completions.push(((a.from, body[..body.len() - 1].to_vec()), z, a.word.flip, k));
        }
    }
    let mut nodes = Vec::new();
    for dual in [false, true] {
        for (i, u) in &prefixes {
            nodes.push(TNode { node: *i, prefix: u.clone(), dual });
        }
    }
    let idx = |i: usize, u: &[Letter], dual: bool| {
        nodes.iter().position(|n| n.node == i && n.prefix == u && n.dual == dual).expect("prefix node")
    };
    let mut edges = Vec::new();
    for dual in [false, true] {
        for (i, u) in &prefixes {
            for z in [Letter::L, Letter::N] {
                let mut v = u.clone();
                v.push(z);
                if prefixes.contains(&(*i, v.clone())) {
                    edges.push(TEdge { from: idx(*i, u, dual), input: z.swap_if(dual), output: None, to: idx(*i, &v, dual) });
                }
            }
        }
        for ((i, u), z, flip, k) in &completions {
            let j = code.letters[*k].arrow.to;
            edges.push(TEdge { from: idx(*i, u, dual), input: z.swap_if(dual), output: Some(*k), to: idx(j, &[], dual ^ flip) });
        }
    }
    let mut out = vec![Vec::new(); nodes.len()];
    for (e, edge) in edges.iter().enumerate() {
        out[edge.from].push(e);
    }
    Transducer { nodes, edges, out }
}

#[derive(Clone)]
struct Token {
    at: usize,
    out: Vec<usize>,
    /// Node and output length at every time step.
    hist: Vec<(usize, usize)>,
}

/// Every path from `start` whose infinite product is `start · z`.
pub fn run_transducer(t: &Transducer, start: usize, z: &LrStream, steps: usize) -> Result<Vec<PathSeq>> {
    let s0 = t.index(&TNode { node: start, prefix: vec![], dual: false }).ok_or(Error::OutOfRange(format!("node {start}")))?;
    let mut tokens = vec![Token { at: s0, out: vec![], hist: vec![(s0, 0)] }];
    let mut seen: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
    for time in 0..=steps {
        let phase = if time < z.pre.len() { time } else { z.pre.len() + (time - z.pre.len()) % z.period.len() };
        let mut config: Vec<usize> = tokens.iter().map(|k| k.at).collect();
        config.sort_unstable();
        if config.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::TwoTokens);
        }
        if tokens.is_empty() {
            return Err(Error::AllTokensDied);
        }
        if let Some(&t1) = seen.get(&(phase, config.clone())) {
            return Ok(close_cycle(&tokens, t1));
        }
        seen.insert((phase, config), time);
        let zt = z.at(time);
        let mut next = Vec::with_capacity(tokens.len());
        for k in &tokens {
            for e in t.step(k.at, zt) {
                let mut n = k.clone();
                n.at = e.to;
                n.out.extend(e.output);
                n.hist.push((e.to, n.out.len()));
                next.push(n);
            }
        }
        tokens = next;
    }
    Err(Error::CycleNotFound)
}

/// Infinite survivors, given that the configuration at `t2` repeats `t1`.
///
/// With `f` sending each node occupied at `t2` to the node its ancestor
/// occupied at `t1`, the surviving paths are exactly those on cycles of `f`.
fn close_cycle(tokens: &[Token], t1: usize) -> Vec<PathSeq> {
    let f: HashMap<usize, usize> = tokens.iter().map(|k| (k.at, k.hist[t1].0)).collect();
    let on_cycle = |x: usize| {
        let mut y = x;
        for _ in 0..f.len() {
            y = f[&y];
            if y == x {
                return true;
            }
        }
        false
    };
    // on a cycle, each node has one preimage that is itself on the cycle
    let g: HashMap<usize, &Token> = tokens.iter().filter(|k| on_cycle(k.at)).map(|k| (f[&k.at], k)).collect();
    let mut out = Vec::new();
    for (&y0, child) in &g {
        let pre = child.out[..child.hist[t1].1].to_vec();
        let mut period = Vec::new();
        let mut y = y0;
        loop {
            let k = g[&y];
            period.extend_from_slice(&k.out[k.hist[t1].1..]);
            y = k.at;
            if y == y0 {
                break;
            }
        }
        out.push(PathSeq::new(pre, period));
    }
    out.sort();
    out.dedup();
    out
}

/// Symbolic sequences from node `i` whose point is `x`.
pub fn fiber(x: &QNum, i: usize, spec: &CfSpec, steps: usize) -> Result<Vec<PathSeq>> {
    if let Some(h) = &spec.attractors.h {
        if !h[i].contains(x) {
            return Err(Error::NotInAttractor(x.to_string()));
        }
    }
    let t = build_transducer(&spec.code);
    let mut out = Vec::new();
    for z in lr_expand(x, &spec.intervals[i])? {
        match run_transducer(&t, i, &z, steps) {
            Ok(paths) => out.extend(paths),
            Err(Error::AllTokensDied) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort();
    out.dedup();
    assert!(out.len() <= t.node_count(), "fiber of {x} exceeds the transducer size");
    if out.iter().any(PathSeq::is_purely_periodic) {
        assert_eq!(out.len(), 1, "purely periodic fiber of {x} is not a singleton");
    }
    Ok(out)
}
