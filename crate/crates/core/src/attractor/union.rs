//! Finite unions of closed circular arcs with exact endpoints.
//!
//! The circle is cut open at 0 and laid out along the circular key order
//! `0 → 1 → ∞ → -1 → 0⁻`. The cut point `0⁻` is called `Top` here and is
//! identified with 0, so a segment reaching `Top` contains 0.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use crate::exact::{circ_key, int, CircKey, Int, Point, Quad};
use crate::modular::{Matrix, UnimodInterval};
use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Pos<T> {
    At(Point<T>),
    Top,
}

impl<T: Int> Pos<T> {
    fn key(&self) -> Option<CircKey<T>> {
        match self {
            Pos::At(p) => Some(circ_key(p)),
            Pos::Top => None,
        }
    }

    pub(crate) fn point(&self) -> Point<T> {
        match self {
            Pos::At(p) => p.clone(),
            Pos::Top => Point::zero(),
        }
    }
}

impl<T: Int> PartialOrd for Pos<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Int> Ord for Pos<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.key(), other.key()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }
}

/// Closed arc from `lo` counterclockwise to `hi`; `lo == hi` is a single point.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CircArc<T> {
    pub lo: Point<T>,
    pub hi: Point<T>,
}

impl<T: Int> CircArc<T> {
    pub fn new(lo: Point<T>, hi: Point<T>) -> Self {
        CircArc { lo, hi }
    }

    pub fn point(x: Point<T>) -> Self {
        CircArc { lo: x.clone(), hi: x }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl<T: Int> fmt::Display for CircArc<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Seg<T> {
    lo: Pos<T>,
    hi: Pos<T>,
}

/// A closed subset of P¹ that is a finite union of closed arcs and points.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntervalUnion<T> {
    segs: Vec<Seg<T>>,
}

impl<T: Int> IntervalUnion<T> {
    pub fn empty() -> Self {
        IntervalUnion { segs: Vec::new() }
    }

    pub fn full() -> Self {
        Self::canonical(vec![Seg { lo: Pos::At(Point::zero()), hi: Pos::Top }])
    }

    pub fn point(x: Point<T>) -> Self {
        Self::arc(x.clone(), x)
    }

    /// The arc from `lo` counterclockwise to `hi`.
    pub fn arc(lo: Point<T>, hi: Point<T>) -> Self {
        let (a, b) = (Pos::At(lo.clone()), Pos::At(hi.clone()));
        if a <= b {
            Self::canonical(vec![Seg { lo: a, hi: b }])
        } else {
            Self::canonical(vec![Seg { lo: a, hi: Pos::Top }, Seg { lo: Pos::At(Point::zero()), hi: b }])
        }
    }

    pub fn from_interval(iv: &UnimodInterval<T>) -> Self {
        Self::arc(iv.lo(), iv.hi())
    }

    pub fn from_arcs<I: IntoIterator<Item = CircArc<T>>>(arcs: I) -> Self {
        arcs.into_iter().fold(Self::empty(), |acc, a| acc.union(&Self::arc(a.lo, a.hi)))
    }

    fn canonical(mut segs: Vec<Seg<T>>) -> Self {
        if segs.iter().any(|s| s.hi == Pos::Top) {
            let zero = Pos::At(Point::zero());
            segs.push(Seg { lo: zero.clone(), hi: zero });
        }
        segs.sort_by(|a, b| a.lo.cmp(&b.lo).then_with(|| a.hi.cmp(&b.hi)));
        let mut out: Vec<Seg<T>> = Vec::with_capacity(segs.len());
        for s in segs {
            match out.last_mut() {
                Some(last) if s.lo <= last.hi => {
                    if s.hi > last.hi {
                        last.hi = s.hi;
                    }
                }
                _ => out.push(s),
            }
        }
        IntervalUnion { segs: out }
    }

    pub fn is_empty(&self) -> bool {
        self.segs.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.segs.len() == 1 && self.segs[0].lo == Pos::At(Point::zero()) && self.segs[0].hi == Pos::Top
    }

    /// Maximal arcs, the one through 0 from below glued back together.
    pub fn arcs(&self) -> Vec<CircArc<T>> {
        if self.is_full() {
            return vec![
                CircArc::new(Point::zero(), Point::Infinity),
                CircArc::new(Point::Infinity, Point::zero()),
            ];
        }
        let mut segs = self.segs.clone();
        let wraps = segs.last().is_some_and(|s| s.hi == Pos::Top);
        let mut out = Vec::with_capacity(segs.len());
        if wraps {
            let last = segs.pop().expect("nonempty");
            let first = segs.remove(0);
            out.push(CircArc::new(last.lo.point(), first.hi.point()));
        }
        out.extend(segs.into_iter().map(|s| CircArc::new(s.lo.point(), s.hi.point())));
        out.sort_by(|a, b| circ_key(&a.lo).cmp(&circ_key(&b.lo)));
        out
    }

    /// Arc endpoints, each once.
    pub fn endpoints(&self) -> Vec<Point<T>> {
        let mut out = Vec::new();
        for a in self.arcs() {
            if !out.contains(&a.lo) {
                out.push(a.lo.clone());
            }
            if !out.contains(&a.hi) {
                out.push(a.hi);
            }
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut segs = self.segs.clone();
        segs.extend(other.segs.iter().cloned());
        Self::canonical(segs)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut segs = Vec::new();
        for a in &self.segs {
            for b in &other.segs {
                let lo = a.lo.clone().max(b.lo.clone());
                let hi = a.hi.clone().min(b.hi.clone());
                if lo <= hi {
                    segs.push(Seg { lo, hi });
                }
            }
        }
        Self::canonical(segs)
    }

    /// Closure of the complement.
    pub fn complement_closure(&self) -> Self {
        if self.is_empty() {
            return Self::full();
        }
        if self.is_full() {
            return Self::empty();
        }
        let arcs = self.arcs();
        if arcs.len() == 1 && arcs[0].is_point() {
            return Self::full();
        }
        Self::from_arcs(self.gaps())
    }

    /// Closure of `self ∖ other`.
    pub fn difference_closure(&self, other: &Self) -> Self {
        let d = self.intersection(&other.complement_closure());
        // drop isolated points created on the boundary of `other`
        Self::canonical(d.segs.into_iter().filter(|s| s.lo != s.hi || !other.contains(&s.lo.point())).collect())
    }

    /// Closed arcs spanning the open gaps between consecutive arcs.
    pub fn gaps(&self) -> Vec<CircArc<T>> {
        let arcs = self.arcs();
        if self.is_full() || arcs.is_empty() {
            return vec![];
        }
        let k = arcs.len();
        (0..k).map(|i| CircArc::new(arcs[i].hi.clone(), arcs[(i + 1) % k].lo.clone())).collect()
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        let p = Pos::At(x.clone());
        self.segs.iter().any(|s| s.lo <= p && p <= s.hi)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.intersection(other) == *self
    }

    /// True when the intersection has no interior.
    pub fn interiors_disjoint(&self, other: &Self) -> bool {
        self.intersection(other).segs.iter().all(|s| s.lo == s.hi)
    }

    /// Image under a Möbius map.
    pub fn image(&self, m: &Matrix<T>) -> Self {
        if self.is_full() {
            return Self::full();
        }
        let keep = m.is_orientation_preserving();
        Self::from_arcs(self.arcs().into_iter().map(|a| {
            let (lo, hi) = (m.apply(&a.lo), m.apply(&a.hi));
            if keep {
                CircArc::new(lo, hi)
            } else {
                CircArc::new(hi, lo)
            }
        }))
    }

    /// A point of `self` lying outside `other`, if any.
    pub fn point_outside(&self, other: &Self) -> Option<Point<T>> {
        for a in self.arcs() {
            for x in [&a.lo, &a.hi] {
                if !other.contains(x) {
                    return Some(x.clone());
                }
            }
        }
        // every endpoint is covered: look inside the gaps of `other`
        for g in other.gaps() {
            if let Some(y) = between(&g.lo, &g.hi) {
                if self.contains(&y) {
                    return Some(y);
                }
            }
        }
        None
    }

    /// Sample points: arc endpoints and one interior point per arc.
    pub fn sample_points(&self) -> Vec<Point<T>> {
        let mut out = Vec::new();
        for a in self.arcs() {
            out.push(a.lo.clone());
            if !a.is_point() {
                if let Some(m) = between(&a.lo, &a.hi) {
                    out.push(m);
                }
                out.push(a.hi.clone());
            }
        }
        out
    }

    /// Total angular length in the `[-π/2, 3π/2)` chart.
    pub fn angular_length(&self) -> f64 {
        self.arcs().iter().map(arc_angle_len).sum()
    }

    /// Hausdorff distance in the angle metric of the circle.
    pub fn hausdorff(&self, other: &Self) -> f64 {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => return 0.0,
            (true, false) | (false, true) => return PI,
            _ => {}
        }
        self.directed_hausdorff(other).max(other.directed_hausdorff(self))
    }

    fn angle_arcs(&self) -> Vec<(f64, f64)> {
        self.arcs().iter().map(|a| (a.lo.angle(), a.lo.angle() + arc_angle_len(a))).collect()
    }

    fn dist_to(&self, th: f64) -> f64 {
        self.angle_arcs()
            .iter()
            .map(|&(a, b)| {
                let rel = (th - a).rem_euclid(2.0 * PI);
                if rel <= b - a {
                    0.0
                } else {
                    (rel - (b - a)).min(2.0 * PI - rel)
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn directed_hausdorff(&self, other: &Self) -> f64 {
        let mut cand: Vec<f64> = self.angle_arcs().iter().flat_map(|&(a, b)| [a, b]).collect();
        // the farthest point may sit in the middle of a gap of `other`
        for (a, b) in other.angle_arcs().iter().zip(other.angle_arcs().iter().cycle().skip(1)) {
            let gap = (b.0 - a.1).rem_euclid(2.0 * PI);
            let mid = a.1 + gap / 2.0;
            if self.dist_to(mid) == 0.0 {
                cand.push(mid);
            }
        }
        cand.into_iter().map(|t| other.dist_to(t)).fold(0.0, f64::max)
    }
}

fn arc_angle_len<T: Int>(a: &CircArc<T>) -> f64 {
    if a.is_point() {
        return 0.0;
    }
    (a.hi.angle() - a.lo.angle()).rem_euclid(2.0 * PI)
}

impl<T: Int> fmt::Display for IntervalUnion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        let parts: Vec<String> = self.arcs().iter().map(|a| a.to_string()).collect();
        write!(f, "{}", parts.join(" ∪ "))
    }
}

/// Simplest rational strictly between `x < y`.
pub fn rational_between<T: Int>(x: &Quad<T>, y: &Quad<T>) -> Result<Quad<T>> {
    if x >= y {
        return Err(Error::OutOfRange(format!("{x} is not below {y}")));
    }
    let fl = x.floor();
    let next = Quad::integer(fl.clone() + T::one());
    if next < *y {
        return Ok(next);
    }
    // x, y both in [fl, fl + 1]; recurse on reciprocals of the fractional parts
    let fx = x.add_int(&-fl.clone());
    let fy = y.add_int(&-fl.clone());
    let ry = fy.recip()?;
    let r = if fx.is_zero() {
        Quad::integer(ry.floor() + T::one())
    } else {
        rational_between(&ry, &fx.recip()?)?
    };
    Ok(r.recip()?.add_int(&fl))
}

/// A point strictly inside the open arc from `a` counterclockwise to `b`.
///
/// For `a == b` the arc is the circle minus `a`.
pub fn between<T: Int>(a: &Point<T>, b: &Point<T>) -> Option<Point<T>> {
    let ka = circ_key(a);
    let kb = circ_key(b);
    if a == b {
        return Some(if a.is_infinite() { Point::zero() } else { Point::Infinity });
    }
    let fin = |x: &Point<T>| x.finite().cloned().expect("finite");
    let one = T::one();
    if ka < kb {
        let p = match (ka.band, kb.band) {
            (1, 1) => return None,
            (0, 1) => Point::Finite(Quad::integer(fin(a).floor() + one)),
            (1, 2) => Point::Finite(Quad::integer(fin(b).ceil() - one)),
            (0, 2) => Point::Infinity,
            _ => Point::Finite(rational_between(&fin(a), &fin(b)).ok()?),
        };
        return Some(p);
    }
    // the arc passes through the cut at 0
    let p = match ka.band {
        0 => Point::Infinity,
        1 => Point::Finite(Quad::integer(-one)),
        _ => Point::Finite(fin(a).div_int(&int(2)).ok()?),
    };
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type U = IntervalUnion<i64>;
    type P = Point<i64>;

    fn p(s: &str) -> P {
        P::parse(s).unwrap()
    }

    fn arc(a: &str, b: &str) -> U {
        U::arc(p(a), p(b))
    }

    #[test]
    fn merges_touching_arcs() {
        assert_eq!(arc("-3", "-5/2").union(&arc("-5/2", "-2")), arc("-3", "-2"));
        assert_eq!(arc("-1", "0").union(&arc("inf", "-1")), arc("inf", "0"));
        let a = arc("1", "2");
        assert_eq!(a.union(&U::empty()), a);
        assert_eq!(arc("inf", "0").arcs(), vec![CircArc::new(P::Infinity, P::zero())]);
    }

    #[test]
    fn images() {
        let m = Matrix::<i64>::l().inv();
        assert_eq!(arc("inf", "0").image(&m), arc("-1", "0"));
        let db = Matrix::from_i64([[1, -1], [-1, 0]]).unwrap();
        assert_eq!(arc("inf", "0").image(&db), arc("inf", "-1"));
        assert_eq!(arc("0", "inf").image(&Matrix::s()), arc("inf", "0"));
    }

    #[test]
    fn wrap_around() {
        let w = arc("2", "1/2");
        assert!(w.contains(&P::Infinity));
        assert!(w.contains(&P::zero()));
        assert!(w.contains(&p("-7")));
        assert!(!w.contains(&p("1")));
        assert_eq!(w.arcs(), vec![CircArc::new(p("2"), p("1/2"))]);
        assert_eq!(w.complement_closure(), arc("1/2", "2"));
        assert_eq!(w.union(&arc("1/2", "2")), U::full());
        assert!(U::full().contains(&p("-1/3")));
        assert_eq!(U::full().complement_closure(), U::empty());
    }

    #[test]
    fn intersections() {
        let a = arc("inf", "0");
        let b = arc("-1", "1");
        assert_eq!(a.intersection(&b), arc("-1", "0"));
        assert_eq!(arc("0", "1").intersection(&arc("1", "2")), U::point(p("1")));
        assert!(arc("0", "1").interiors_disjoint(&arc("1", "2")));
        assert!(!arc("0", "1").interiors_disjoint(&arc("1/2", "2")));
        assert_eq!(arc("2", "1/2").intersection(&arc("-1", "1")), arc("-1", "1/2"));
    }

    #[test]
    fn witnesses() {
        let r3 = arc("inf", "-3");
        let r2 = arc("inf", "-2");
        let w = r2.point_outside(&r3).unwrap();
        assert!(r2.contains(&w) && !r3.contains(&w));
        assert!(r3.point_outside(&r2).is_none());
        let x = p("(-1 1 2 5)");
        let y = p("(2 0 3 0)");
        let m = between(&x, &y).unwrap();
        assert!(x.key() < m.key() && m.key() < y.key());
    }

    #[test]
    fn simplest_rationals() {
        let q = |s: &str| p(s).finite().unwrap().clone();
        assert_eq!(rational_between(&q("(-1 1 2 5)"), &q("(2 0 3 0)")).unwrap(), q("5/8"));
        assert_eq!(rational_between(&q("0"), &q("1")).unwrap(), q("1/2"));
        assert_eq!(rational_between(&q("-3"), &q("-5/2")).unwrap(), q("-8/3"));
    }

    #[test]
    fn hausdorff_metric() {
        assert_eq!(arc("0", "1").hausdorff(&arc("0", "1")), 0.0);
        let d = arc("0", "1").hausdorff(&arc("0", "inf"));
        assert!((d - PI / 2.0).abs() < 1e-12);
    }

    fn small_point() -> impl Strategy<Value = P> {
        prop_oneof![
            1 => Just(P::Infinity),
            8 => (-20i64..20, 1i64..8).prop_map(|(a, b)| P::rational(a, b)),
        ]
    }

    fn small_union() -> impl Strategy<Value = U> {
        prop::collection::vec((small_point(), small_point()), 0..4)
            .prop_map(|v| v.into_iter().fold(U::empty(), |acc, (a, b)| acc.union(&U::arc(a, b))))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn membership_matches_set_ops(a in small_union(), b in small_union(), x in small_point()) {
            prop_assert_eq!(a.union(&b).contains(&x), a.contains(&x) || b.contains(&x));
            prop_assert_eq!(a.intersection(&b).contains(&x), a.contains(&x) && b.contains(&x));
            if !a.contains(&x) {
                prop_assert!(a.complement_closure().contains(&x));
            }
        }

        #[test]
        fn image_commutes_with_membership(a in small_union(), x in small_point(),
                                          m in prop::sample::select(vec![[[1i64,0],[1,1]], [[0,1],[1,0]], [[2,1],[-1,0]], [[1,-1],[-1,0]]])) {
            let m = Matrix::from_i64(m).unwrap();
            prop_assert_eq!(a.image(&m).contains(&m.apply(&x)), a.contains(&x));
        }

        #[test]
        fn canonical_is_unique(a in small_union(), b in small_union()) {
            prop_assert_eq!(a.union(&b), b.union(&a));
            prop_assert_eq!(U::from_arcs(a.arcs()), a.clone());
            prop_assert_eq!(a.union(&a), a);
        }
    }
}
