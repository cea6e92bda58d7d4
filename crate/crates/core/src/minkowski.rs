//! The affine twin of the projective representation and the Minkowski
//! question mark function.
//!
//! `?` conjugates `x ↦ x/(x+1)`, `x ↦ 1/(2-x)` and `x ↦ 1-x` on `[0, 1]` to
//! the dyadic maps `𝐋`, `𝐍`, `𝐅`. On rationals it is computed exactly by
//! peeling off those maps; on quadratic irrationals it is only bracketed.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::Serialize;

use crate::attractor::desc::AttractorDesc;
use crate::cfspec::{CfSpec, Rational};
use crate::exact::{int, Int, Point, Quad};
use crate::modular::Matrix;
use crate::words::{Letter, Word};
use crate::{Error, Interval, Mat, QNum, Result, Z};

/// Largest exponent `qmark` produces; keeps `i128` numerators in range.
pub const MAX_EXP: u32 = 120;

fn pow2<T: Int>(e: u32) -> T {
    num_traits::pow(int::<T>(2), e as usize)
}

/// `num / 2^exp`, canonical: `num` odd or `exp = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Dyadic<T> {
    num: T,
    exp: u32,
}

impl<T: Int> Dyadic<T> {
    pub fn new(num: T, exp: u32) -> Self {
        let two = int::<T>(2);
        let (mut num, mut exp) = (num, exp);
        if num.is_zero() {
            exp = 0;
        }
        while exp > 0 && num.is_even() {
            num = num / two.clone();
            exp -= 1;
        }
        Dyadic { num, exp }
    }

    pub fn int(n: i64) -> Self {
        Dyadic { num: int(n), exp: 0 }
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn half() -> Self {
        Dyadic { num: T::one(), exp: 1 }
    }

    pub fn numerator(&self) -> &T {
        &self.num
    }

    pub fn exponent(&self) -> u32 {
        self.exp
    }

    fn aligned(&self, o: &Self) -> (T, T, u32) {
        let e = self.exp.max(o.exp);
        (self.num.clone() * pow2(e - self.exp), o.num.clone() * pow2(e - o.exp), e)
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b, e) = self.aligned(o);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Dyadic { num: -self.num.clone(), exp: self.exp }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Dyadic::new(self.num.clone() * o.num.clone(), self.exp + o.exp)
    }

    pub fn abs(&self) -> Self {
        Dyadic { num: self.num.abs(), exp: self.exp }
    }

    pub fn to_ratio(&self) -> Ratio<T> {
        Ratio::new(self.num.clone(), pow2(self.exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64().unwrap_or(f64::NAN) * (-(self.exp as f64)).exp2()
    }
}

impl<T: Int> Ord for Dyadic<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        let (a, b, _) = self.aligned(o);
        a.cmp(&b)
    }
}

impl<T: Int> PartialOrd for Dyadic<T> {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl<T: Int> fmt::Display for Dyadic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl<T: Int> Serialize for Dyadic<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `x ↦ scale·x + offset`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AffMap<T> {
    pub scale: Dyadic<T>,
    pub offset: Dyadic<T>,
}

impl<T: Int> AffMap<T> {
    pub fn identity() -> Self {
        AffMap { scale: Dyadic::one(), offset: Dyadic::zero() }
    }

    /// `𝐋(x) = x/2`.
    pub fn l() -> Self {
        AffMap { scale: Dyadic::half(), offset: Dyadic::zero() }
    }

    /// `𝐍(x) = x/2 + 1/2`.
    pub fn n() -> Self {
        AffMap { scale: Dyadic::half(), offset: Dyadic::half() }
    }

    /// `𝐅(x) = 1 - x`.
    pub fn f() -> Self {
        AffMap { scale: Dyadic::int(-1), offset: Dyadic::one() }
    }

    pub fn apply(&self, x: &Dyadic<T>) -> Dyadic<T> {
        self.scale.mul(x).add(&self.offset)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        AffMap { scale: self.scale.mul(&o.scale), offset: self.scale.mul(&o.offset).add(&self.offset) }
    }
}

impl<T: Int> fmt::Display for AffMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ ({})·x + {}", self.scale, self.offset)
    }
}

/// `Aff(w)`, composed in word order.
pub fn aff<T: Int>(w: &Word) -> AffMap<T> {
    let mut m = AffMap::identity();
    for x in &w.body {
        m = m.compose(&match x {
            Letter::L => AffMap::l(),
            Letter::N => AffMap::n(),
        });
    }
    if w.flip {
        m = m.compose(&AffMap::f());
    }
    m
}

fn out_of_range<T: Int>(x: &Quad<T>) -> Error {
    Error::OutOfRange(format!("{x} is not in [0, 1]"))
}

/// `?(x)` for rational `x ∈ [0, 1]`, exactly.
pub fn qmark<T: Int>(x: &Quad<T>) -> Result<Dyadic<T>> {
    if !x.is_rational() {
        return Err(Error::OutOfRange(format!("{x} is irrational; use qmark_approx")));
    }
    let (mut a, mut b) = (x.p().clone(), x.r().clone());
    if a.is_negative() || a > b {
        return Err(out_of_range(x));
    }
    let two = int::<T>(2);
    let mut word = Vec::new();
    let end = loop {
        if a.is_zero() {
            break Dyadic::zero();
        }
        if a == b {
            break Dyadic::one();
        }
        match (two.clone() * a.clone()).cmp(&b) {
            Ordering::Equal => break Dyadic::half(),
            Ordering::Less => {
                word.push(Letter::L);
                b = b - a.clone();
            }
            Ordering::Greater => {
                word.push(Letter::N);
                let na = two.clone() * a.clone() - b;
                b = a;
                a = na;
            }
        }
        if word.len() as u32 >= MAX_EXP {
            return Err(Error::OutOfRange(format!("expansion of {x} is too long")));
        }
    };
    Ok(aff(&Word::new(word, false)).apply(&end))
}

/// Closed dyadic interval `[lo, hi]`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Bracket<T: Int> {
    pub lo: Dyadic<T>,
    pub hi: Dyadic<T>,
}

impl<T: Int> Bracket<T> {
    pub fn exact(x: Dyadic<T>) -> Self {
        Bracket { lo: x.clone(), hi: x }
    }

    pub fn width(&self) -> Dyadic<T> {
        self.hi.sub(&self.lo)
    }

    pub fn contains(&self, x: &Ratio<T>) -> bool {
        self.lo.to_ratio() <= *x && *x <= self.hi.to_ratio()
    }
}

impl<T: Int> fmt::Display for Bracket<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

/// Encloses `?(x)` for `x ∈ [0, 1]` in a bracket of width at most
/// `2^-bits`. Rationals whose expansion ends early get a point bracket.
pub fn qmark_approx<T: Int>(x: &Quad<T>, bits: u32) -> Result<Bracket<T>> {
    if bits > 64 {
        return Err(Error::OutOfRange(format!("bits = {bits} exceeds 64")));
    }
    if *x < Quad::zero() || *x > Quad::one() {
        return Err(out_of_range(x));
    }
    let half = Quad::rational(T::one(), int(2))?;
    let mut y = x.clone();
    let mut word = Vec::new();
    while (word.len() as u32) < bits {
        if y.is_zero() || y == Quad::one() || y == half {
            let end = if y.is_zero() {
                Dyadic::zero()
            } else if y == half {
                Dyadic::half()
            } else {
                Dyadic::one()
            };
            return Ok(Bracket::exact(aff(&Word::new(word, false)).apply(&end)));
        }
        if y < half {
            word.push(Letter::L);
            y = y.checked_div(&Quad::one().checked_sub(&y)?)?;
        } else {
            word.push(Letter::N);
            y = y.recip()?.neg().add_int(&int(2));
        }
    }
    let m = aff::<T>(&Word::new(word, false));
    Ok(Bracket { lo: m.apply(&Dyadic::zero()), hi: m.apply(&Dyadic::one()) })
}

/// `L · I⁻¹`, sending `I` onto `[0, 1]` preserving order.
pub fn unit_chart(iv: &Interval) -> Mat {
    Matrix::l().mul(&iv.matrix().inv())
}

fn charted(spec: &CfSpec, i: usize, x: &QNum) -> Result<Quad<Z>> {
    if !spec.intervals[i].contains(x) {
        return Err(Error::NotInInterval(x.to_string()));
    }
    match unit_chart(&spec.intervals[i]).apply(x) {
        Point::Finite(y) => Ok(y),
        Point::Infinity => unreachable!("the chart sends I_i into [0, 1]"),
    }
}

/// `M_i(x) = ?(L I_i⁻¹ x)` for rational `x ∈ I_i`.
pub fn minkowski_at(spec: &CfSpec, i: usize, x: &QNum) -> Result<Dyadic<Z>> {
    qmark(&charted(spec, i, x)?)
}

pub fn minkowski_approx(spec: &CfSpec, i: usize, x: &QNum, bits: u32) -> Result<Bracket<Z>> {
    qmark_approx(&charted(spec, i, x)?, bits)
}

/// `C_a = Aff(σ)` for `a = iσj`, acting between `[0, 1]` copies.
pub fn twin(spec: &CfSpec, k: usize) -> AffMap<Z> {
    aff(&spec.letter(k).arrow.word)
}

/// Rational affine map `x ↦ scale·x + offset` on the real line.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RealAff {
    pub scale: Rational,
    pub offset: Rational,
}

impl RealAff {
    pub fn apply(&self, x: &Rational) -> Rational {
        self.scale * x + self.offset
    }

    pub fn compose(&self, o: &Self) -> Self {
        RealAff { scale: self.scale * o.scale, offset: self.scale * o.offset + self.offset }
    }

    pub fn inv(&self) -> Self {
        let s = self.scale.recip();
        RealAff { scale: s, offset: -self.offset * s }
    }

    fn of(m: &AffMap<Z>) -> Self {
        RealAff { scale: m.scale.to_ratio(), offset: m.offset.to_ratio() }
    }
}

impl fmt::Display for RealAff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x ↦ ({})·x + {}", self.scale, self.offset)
    }
}

fn rational_of(x: &QNum) -> Option<Rational> {
    match x {
        Point::Finite(q) if q.is_rational() => Some(Ratio::new(*q.p(), *q.r())),
        _ => None,
    }
}

/// `𝐈`: the order-preserving affine map `[0, 1] → I`, if `I` avoids ∞.
pub fn interval_affine(iv: &Interval) -> Option<RealAff> {
    let (lo, hi) = (rational_of(&iv.lo())?, rational_of(&iv.hi())?);
    (lo < hi).then(|| RealAff { scale: hi - lo, offset: lo })
}

/// `𝐈_i · Aff(σ) · 𝐈_j⁻¹` for `a = iσj`, when both intervals avoid ∞.
pub fn real_twin(spec: &CfSpec, k: usize) -> Option<RealAff> {
    let a = &spec.letter(k).arrow;
    let (ii, ij) = (interval_affine(&spec.intervals[a.from])?, interval_affine(&spec.intervals[a.to])?);
    Some(ii.compose(&RealAff::of(&twin(spec, k))).compose(&ij.inv()))
}

/// Rationals of `iv` with denominator at most `qmax`; when `iv` holds ∞,
/// also bounded by `|x| ≤ qmax`, and ∞ itself is included.
pub fn rationals_in(iv: &Interval, qmax: Z) -> Vec<QNum> {
    let bounds = match (rational_of(&iv.lo()), rational_of(&iv.hi())) {
        (Some(lo), Some(hi)) if lo < hi => (lo, hi),
        _ => (Ratio::from_integer(-qmax), Ratio::from_integer(qmax)),
    };
    let mut out = Vec::new();
    if iv.contains(&Point::Infinity) {
        out.push(Point::Infinity);
    }
    for q in 1..=qmax {
        let lo = (bounds.0 * q).floor().to_integer();
        let hi = (bounds.1 * q).ceil().to_integer();
        for p in lo..=hi {
            if num_integer::gcd(p, q) != 1 {
                continue;
            }
            let x = Point::Finite(Quad::rational(p, q).expect("q > 0"));
            if iv.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Mismatch {
    pub letter: String,
    pub x: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugacyReport {
    pub spec: String,
    pub qmax: Z,
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Checks `M_i(B_a x) = C_a(M_j x)` for every letter `a = iσj` and every
/// rational `x ∈ I_j` of denominator at most `qmax`.
pub fn conjugacy_check(spec: &CfSpec, qmax: Z) -> Result<ConjugacyReport> {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let samples: Vec<Vec<QNum>> = spec.intervals.iter().map(|iv| rationals_in(iv, qmax)).collect();
    for (k, letter) in spec.code.letters.iter().enumerate() {
        let (i, j) = (letter.arrow.from, letter.arrow.to);
        let (b, c) = (spec.branch(k), twin(spec, k));
        for x in &samples[j] {
            let lhs = minkowski_at(spec, i, &b.apply(x))?;
            let rhs = c.apply(&minkowski_at(spec, j, x)?);
            checked += 1;
            if lhs != rhs {
                mismatches.push(Mismatch {
                    letter: letter.label.clone(),
                    x: x.to_string(),
                    lhs: lhs.to_string(),
                    rhs: rhs.to_string(),
                });
            }
        }
    }
    Ok(ConjugacyReport { spec: spec.name.clone(), qmax, checked, mismatches })
}

/// Arcs of `H′_i = M_i[H_i]` on the `[0, 1]` copies, endpoints bracketed.
pub fn twin_attractor(spec: &CfSpec, bits: u32) -> Result<Vec<Vec<(Bracket<Z>, Bracket<Z>)>>> {
    let h = spec.attractors.h.as_ref().ok_or_else(|| Error::Validation {
        at: "attractors".into(),
        msg: "H is not given".into(),
    })?;
    h.iter()
        .enumerate()
        .map(|(i, d)| match d {
            AttractorDesc::Finite(u) => u
                .arcs()
                .into_iter()
                .map(|a| Ok((minkowski_approx(spec, i, &a.lo, bits)?, minkowski_approx(spec, i, &a.hi, bits)?)))
                .collect(),
            AttractorDesc::Tail(_) => Err(Error::OutOfRange(format!("H_{i} is a tail"))),
        })
        .collect()
}

/// Enclosure `[lo, hi]` of each `len(H′_i)`.
pub fn twin_lengths(spec: &CfSpec, bits: u32) -> Result<Vec<(Rational, Rational)>> {
    Ok(twin_attractor(spec, bits)?
        .iter()
        .map(|arcs| {
            arcs.iter().fold((Rational::zero(), Rational::zero()), |(lo, hi), (a, b)| {
                let shortest = (b.lo.to_ratio() - a.hi.to_ratio()).max(Rational::zero());
                (lo + shortest, hi + b.hi.to_ratio() - a.lo.to_ratio())
            })
        })
        .collect())
}

/// Whether `Σ_j G_ij len(H′_j) = len(H′_i)` is consistent with the
/// enclosures, for every node.
pub fn measure_identity(spec: &CfSpec, bits: u32) -> Result<bool> {
    let len = twin_lengths(spec, bits)?;
    let g = spec.code.g_matrix();
    Ok(g.iter().zip(&len).all(|(row, (lo, hi))| {
        let (slo, shi) = row
            .iter()
            .zip(&len)
            .fold((Rational::zero(), Rational::zero()), |(a, b), (w, (l, h))| (a + w * l, b + w * h));
        slo <= *hi && *lo <= shi
    }))
}

/// `𝐈_i` applied to a bracket on the `[0, 1]` copy of node `i`.
pub fn to_real_line(spec: &CfSpec, i: usize, b: &Bracket<Z>) -> Option<(Rational, Rational)> {
    let m = interval_affine(&spec.intervals[i])?;
    Some((m.apply(&b.lo.to_ratio()), m.apply(&b.hi.to_ratio())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfspec::preset_names;
    use proptest::prelude::*;

    fn d(n: Z, e: u32) -> Dyadic<Z> {
        Dyadic::new(n, e)
    }

    fn q(a: Z, b: Z) -> Quad<Z> {
        Quad::rational(a, b).unwrap()
    }

    fn r(a: Z, b: Z) -> Rational {
        Ratio::new(a, b)
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    /// `?(x) = 2 Σ (-1)^{k+1} 2^{-(a_1+…+a_k)}` from the continued fraction.
    fn oracle(a: Z, b: Z) -> Rational {
        let (mut a, mut b) = (a, b);
        let mut quotients = Vec::new();
        while a != 0 {
            quotients.push(b / a);
            let t = b % a;
            b = a;
            a = t;
        }
        let mut sum = Rational::zero();
        let mut s = 0u32;
        for (k, q) in quotients.iter().enumerate() {
            s += *q as u32;
            let term = r(2, 1) / Rational::from_integer(1 << s);
            sum = if k % 2 == 0 { sum + term } else { sum - term };
        }
        sum
    }

    #[test]
    fn dyadics() {
        assert_eq!(d(6, 3), d(3, 2));
        assert_eq!(d(0, 9), Dyadic::zero());
        assert_eq!(d(1, 1).add(&d(1, 2)), d(3, 2));
        assert!(d(1, 2) < d(1, 1));
        assert_eq!(d(3, 2).to_ratio(), r(3, 4));
        assert_eq!(d(3, 2).to_string(), "3/2^2");
    }

    #[test]
    fn affine_words() {
        assert_eq!(aff::<Z>(&w("l")).apply(&Dyadic::half()), d(1, 2));
        assert_eq!(aff::<Z>(&w("lnf")).apply(&Dyadic::zero()), Dyadic::half());
        assert_eq!(aff::<Z>(&w("")), AffMap::identity());
        // fl = nf, fn = lf
        assert_eq!(AffMap::<Z>::f().compose(&AffMap::l()), aff(&w("nf")));
        assert_eq!(AffMap::<Z>::f().compose(&AffMap::n()), aff(&w("lf")));
    }

    #[test]
    fn tau_twin_branch() {
        let s = CfSpec::preset("tau-minus-one").unwrap();
        let k = s.label_index("s").unwrap();
        assert_eq!(real_twin(&s, k).unwrap(), RealAff { scale: r(-1, 2), offset: r(1, 2) });
    }

    #[test]
    fn qmark_values() {
        assert_eq!(qmark(&q(0, 1)).unwrap(), Dyadic::zero());
        assert_eq!(qmark(&q(1, 1)).unwrap(), Dyadic::one());
        assert_eq!(qmark(&q(1, 2)).unwrap(), Dyadic::half());
        assert_eq!(qmark(&q(1, 3)).unwrap(), d(1, 2));
        assert_eq!(qmark(&q(2, 3)).unwrap(), d(3, 2));
        assert_eq!(qmark(&q(2, 5)).unwrap(), d(3, 3));
        assert!(qmark(&q(3, 2)).is_err());
        assert!(qmark(&q(-1, 2)).is_err());
        let tau = Quad::new(-1, 1, 2, 5).unwrap();
        assert!(qmark(&tau).is_err());
    }

    #[test]
    fn qmark_is_monotone() {
        let mut xs: Vec<Rational> = (1..=30).flat_map(|b| (0..=b).map(move |a| r(a, b))).collect();
        xs.sort();
        xs.dedup();
        let ys: Vec<Dyadic<Z>> = xs.iter().map(|x| qmark(&q(*x.numer(), *x.denom())).unwrap()).collect();
        assert!(ys.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn brackets() {
        let tau = Quad::new(-1, 1, 2, 5).unwrap();
        let b = qmark_approx(&tau, 20).unwrap();
        assert!(b.contains(&r(2, 3)));
        assert_eq!(b.width(), d(1, 20));
        let root2 = Quad::new(-1, 1, 1, 2).unwrap();
        let b = qmark_approx(&root2, 20).unwrap();
        assert_eq!(b.width(), d(1, 20));
        // [0; 2, 2, ...]: 2(1/4 - 1/16 + ...) = 2/5
        assert!(b.contains(&r(2, 5)));
        assert_eq!(qmark_approx(&q(1, 3), 20).unwrap(), Bracket::exact(d(1, 2)));
        assert!(qmark_approx(&tau, 65).is_err());
        assert!(qmark_approx(&tau.add_int(&1), 10).is_err());
    }

    #[test]
    fn farey_square() {
        let s = CfSpec::preset("farey").unwrap();
        let k = s.code.letters.iter().position(|l| l.arrow.word == w("l")).unwrap();
        let x = QNum::int(1);
        let lhs = minkowski_at(&s, 0, &s.branch(k).apply(&x)).unwrap();
        assert_eq!(lhs, Dyadic::half());
        assert_eq!(twin(&s, k).apply(&minkowski_at(&s, 0, &x).unwrap()), Dyadic::half());
    }

    #[test]
    fn presets_are_conjugate() {
        for name in preset_names() {
            let s = CfSpec::preset(name).unwrap();
            let rep = conjugacy_check(&s, 30).unwrap();
            assert!(rep.checked > 0);
            assert!(rep.passed(), "{name}: {:?}", rep.mismatches.first());
        }
    }

    #[test]
    fn tau_twin_attractor() {
        let s = CfSpec::preset("tau-minus-one").unwrap();
        let h = twin_attractor(&s, 30).unwrap();
        let (lo0, hi0) = &h[0][0];
        let (lo1, hi1) = &h[1][0];
        assert!(lo0.contains(&r(2, 3)) && lo0.width() == d(1, 30));
        assert_eq!((hi0, lo1), (&Bracket::exact(Dyadic::one()), &Bracket::exact(Dyadic::zero())));
        assert!(hi1.contains(&r(2, 3)));
        let (a, b) = to_real_line(&s, 0, lo0).unwrap();
        assert!(a <= r(-1, 3) && r(-1, 3) <= b);
        let len = twin_lengths(&s, 30).unwrap();
        assert!(len[0].0 <= r(1, 3) && r(1, 3) <= len[0].1);
        assert!(len[1].0 <= r(2, 3) && r(2, 3) <= len[1].1);
    }

    #[test]
    fn measure_identities() {
        for name in preset_names() {
            let s = CfSpec::preset(name).unwrap();
            assert!(measure_identity(&s, 40).unwrap(), "{name}");
        }
    }

    #[test]
    fn rationals_in_intervals() {
        let iv = Interval::from_endpoints(&QNum::int(-1), &QNum::zero()).unwrap();
        let xs = rationals_in(&iv, 3);
        assert_eq!(xs.len(), 5);
        let iv = Interval::from_endpoints(&QNum::int(1), &QNum::Infinity).unwrap();
        let xs = rationals_in(&iv, 2);
        assert!(xs.contains(&QNum::Infinity) && xs.contains(&QNum::rational(3, 2)));
        assert!(xs.iter().all(|x| iv.contains(x)));
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        (prop::collection::vec(any::<bool>(), 0..40), any::<bool>())
            .prop_map(|(b, f)| Word::new(b.into_iter().map(|x| if x { Letter::L } else { Letter::N }).collect(), f))
    }

    proptest! {
        #[test]
        fn contraction_is_grade(u in word_strategy()) {
            let m = aff::<Z>(&u);
            prop_assert_eq!(m.scale.abs(), d(1, u.grade() as u32));
            let (a, b) = (m.apply(&Dyadic::zero()), m.apply(&Dyadic::one()));
            for y in [a, b] {
                prop_assert!(Dyadic::zero() <= y && y <= Dyadic::one());
            }
        }

        #[test]
        fn aff_is_a_homomorphism(u in word_strategy(), v in word_strategy()) {
            prop_assert_eq!(aff::<Z>(&u.concat(&v)), aff::<Z>(&u).compose(&aff(&v)));
        }

        #[test]
        fn qmark_matches_oracle(b in 1i128..120, a in 0i128..120) {
            let a = a % (b + 1);
            let g = num_integer::gcd(a, b).max(1);
            let (a, b) = (a / g, b / g);
            let v = qmark(&q(a, b)).unwrap();
            prop_assert_eq!(v.to_ratio(), oracle(a, b));
            prop_assert_eq!(qmark(&q(b - a, b)).unwrap(), Dyadic::one().sub(&v));
        }

        #[test]
        fn qmark_exponent_bound(b in 1i128..120, a in 0i128..120) {
            let a = a % (b + 1);
            let v = qmark(&q(a, b)).unwrap();
            let (mut x, mut y, mut sum) = (a / num_integer::gcd(a, b).max(1), b / num_integer::gcd(a, b).max(1), 0);
            while x != 0 {
                sum += y / x;
                let t = y % x;
                y = x;
                x = t;
            }
            prop_assert!(v.exponent() as Z <= sum.max(0));
        }

        #[test]
        fn bracket_encloses_rational_neighbours(b in 2i128..100, a in 1i128..100, s in 0i128..50) {
            let a = a % b;
            let x = Quad::new(a * 7, 1, b * 7, 2 + s * 4 + 1).unwrap();
            prop_assume!(x > Quad::zero() && x < Quad::one());
            let br = qmark_approx(&x, 24).unwrap();
            let lo = Quad::rational((x.to_f64() * 1e6).floor() as Z, 1_000_000).unwrap();
            let hi = Quad::rational((x.to_f64() * 1e6).ceil() as Z, 1_000_000).unwrap();
            prop_assume!(lo < x && x < hi);
            let (ql, qh) = (qmark_approx(&lo, 64).unwrap(), qmark_approx(&hi, 64).unwrap());
            prop_assert!(ql.lo <= br.hi && br.lo <= qh.hi);
        }
    }
}
