//! Attractor components: finite unions and parabolic tails.

use std::fmt;

use crate::attractor::union::CircArc;
use crate::exact::{Point, Quad};
use crate::modular::{chart_to_infinity, MatClass};
use crate::{Error, Mat, QNum, Result, Union, Z};

/// `⋃_{t≥0} Pᵗ[base] ∪ {limit}` with `P` parabolic fixing `limit`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tail {
    pub label: String,
    pub map: Mat,
    pub base: Union,
    pub limit: QNum,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum AttractorDesc {
    Finite(Union),
    Tail(Tail),
}

/// Real interval `[lo, hi]` in a chart where ∞ is not involved.
#[derive(Clone, PartialEq, Eq, Debug)]
pub(crate) struct Segment {
    pub lo: Quadratic,
    pub hi: Quadratic,
}

type Quadratic = Quad<Z>;

impl Segment {
    pub fn shift(&self, by: Z) -> Segment {
        Segment { lo: self.lo.add_int(&by), hi: self.hi.add_int(&by) }
    }

    pub fn contains(&self, x: &Quadratic) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn to_arc(&self) -> CircArc<Z> {
        CircArc::new(Point::Finite(self.lo.clone()), Point::Finite(self.hi.clone()))
    }
}

/// Real intervals making up a union that avoids ∞.
pub(crate) fn real_segments(u: &Union) -> Option<Vec<Segment>> {
    if u.contains(&Point::Infinity) {
        return None;
    }
    Some(
        u.arcs()
            .into_iter()
            .map(|a| Segment { lo: a.lo.finite().cloned().expect("finite"), hi: a.hi.finite().cloned().expect("finite") })
            .collect(),
    )
}

/// A tail in translation coordinates: chart `C` sends the limit to ∞ and
/// conjugates the map to `X ↦ X + k`.
pub(crate) struct TailChart {
    pub chart: Mat,
    pub k: Z,
    pub base: Vec<Segment>,
}

impl Tail {
    pub fn new(label: impl Into<String>, map: Mat, base: Union, limit: QNum) -> Result<Self> {
        let t = Tail { label: label.into(), map, base, limit };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation { at: format!("tail {}", self.label), msg });
        if self.map.classify() != MatClass::Parabolic {
            return bad(format!("map {} is not parabolic", self.map));
        }
        if self.map.apply(&self.limit) != self.limit {
            return bad(format!("map {} does not fix {}", self.map, self.limit));
        }
        if self.base.contains(&self.limit) {
            return bad(format!("base {} contains the limit {}", self.base, self.limit));
        }
        Ok(())
    }

    pub(crate) fn chart(&self) -> TailChart {
        let chart = chart_to_infinity(&self.limit);
        let [a, b, _, d] = chart.conj(&self.map).entries();
        debug_assert!(a == d);
        let k = b * a;
        let base = real_segments(&self.base.image(&chart)).expect("base avoids the limit");
        TailChart { chart, k, base }
    }

    pub fn contains(&self, x: &QNum) -> bool {
        if *x == self.limit {
            return true;
        }
        let tc = self.chart();
        let y = match tc.chart.apply(x) {
            Point::Infinity => return true,
            Point::Finite(y) => y,
        };
        tc.base.iter().any(|s| {
            // t k ranges over y - [lo, hi] ⊆ [a, b]
            let a = y.floor() - s.hi.ceil();
            let b = y.ceil() - s.lo.floor();
            let (a, b) = if tc.k > 0 { (a, b) } else { (-b, -a) };
            let k = tc.k.abs();
            let (t0, t1) = (a.div_euclid(k), b.div_euclid(k) + 1);
            if t1 < 0 {
                return false;
            }
            (t0.max(0)..=t1).any(|t| s.contains(&y.add_int(&(-t * tc.k))))
        })
    }

    /// `⋃_{t<depth} Pᵗ[base] ∪ {limit}`.
    pub fn truncate(&self, depth: usize) -> Union {
        let mut out = Union::point(self.limit.clone());
        let mut piece = self.base.clone();
        for _ in 0..depth {
            out = out.union(&piece);
            piece = piece.image(&self.map);
        }
        out
    }

    pub fn image(&self, m: &Mat, label: impl Into<String>) -> Result<Tail> {
        let w = m.conj(&self.map);
        if w.classify() != MatClass::Parabolic {
            return Err(Error::WitnessNotParabolic);
        }
        Ok(Tail { label: label.into(), map: w, base: self.base.image(m), limit: m.apply(&self.limit) })
    }
}

impl AttractorDesc {
    pub fn contains(&self, x: &QNum) -> bool {
        attractor_member(x, self)
    }

    pub fn truncate(&self, depth: usize) -> Union {
        match self {
            AttractorDesc::Finite(u) => u.clone(),
            AttractorDesc::Tail(t) => t.truncate(depth),
        }
    }

    pub fn as_finite(&self) -> Option<&Union> {
        match self {
            AttractorDesc::Finite(u) => Some(u),
            AttractorDesc::Tail(_) => None,
        }
    }

    /// The block the tail is generated from, or the whole union.
    pub fn block(&self) -> &Union {
        match self {
            AttractorDesc::Finite(u) => u,
            AttractorDesc::Tail(t) => &t.base,
        }
    }

    pub fn image(&self, m: &Mat) -> Result<AttractorDesc> {
        Ok(match self {
            AttractorDesc::Finite(u) => AttractorDesc::Finite(u.image(m)),
            AttractorDesc::Tail(t) => AttractorDesc::Tail(t.image(m, t.label.clone())?),
        })
    }

    pub fn sample_points(&self, depth: usize) -> Vec<QNum> {
        self.truncate(depth).sample_points()
    }
}

pub fn attractor_member(x: &QNum, d: &AttractorDesc) -> bool {
    match d {
        AttractorDesc::Finite(u) => u.contains(x),
        AttractorDesc::Tail(t) => t.contains(x),
    }
}

impl fmt::Display for AttractorDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttractorDesc::Finite(u) => write!(f, "{u}"),
            AttractorDesc::Tail(t) => write!(f, "⋃ {}^t[{}] ∪ {{{}}}", t.label, t.base, t.limit),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QNum {
        QNum::parse(s).unwrap()
    }

    fn k0() -> Tail {
        Tail::new("o", Mat::l(), Union::arc(QNum::Infinity, p("-2")), QNum::zero()).unwrap()
    }

    #[test]
    fn tail_membership() {
        let k = k0();
        assert!(k.contains(&p("1/3")));
        assert!(k.contains(&p("2/5")));
        assert!(!k.contains(&p("-1/2")));
        assert!(k.contains(&QNum::Infinity));
        assert!(k.contains(&QNum::zero()));
        assert!(k.contains(&p("1/2")));
        assert!(!k.contains(&p("9/20")));
        assert!(k.contains(&p("-5")));
        // L³[∞, -2] = [1/3, 2/5]
        assert!(k.truncate(4).contains(&p("7/20")));
        assert!(!k.contains(&p("(1 1 4 5)")));
    }

    #[test]
    fn tail_matches_truncation() {
        let k = k0();
        let t = k.truncate(40);
        for num in -30..30 {
            for den in 1..12 {
                let x = QNum::rational(num, den);
                assert_eq!(k.contains(&x), t.contains(&x), "{x}");
            }
        }
        let q = p("(-1 1 2 5)");
        assert_eq!(k.contains(&q), t.contains(&q));
    }

    #[test]
    fn rejects_bad_tails() {
        assert!(Tail::new("x", Mat::n(), Union::arc(p("1"), p("2")), QNum::zero()).is_err());
        assert!(Tail::new("x", Mat::l(), Union::arc(p("-1"), p("1")), QNum::zero()).is_err());
        let hyp = Mat::from_i64([[1, 1], [1, 2]]).unwrap();
        assert!(Tail::new("x", hyp, Union::arc(p("1"), p("2")), QNum::zero()).is_err());
    }
}
