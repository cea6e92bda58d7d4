//! Exact points of the projective line over real quadratic fields.
//!
//! A finite point is stored as `(p + q√D)/r` in canonical form. The
//! infinite point is a separate variant of [`Point`] and never takes part
//! in ring arithmetic; Möbius maps handle it.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, Signed, ToPrimitive};

use crate::Error;

/// Integer scalar the exact layer is generic over (`i64`, `i128`, `BigInt`, ...).
pub trait Int:
    Integer
    + Signed
    + Roots
    + Clone
    + Hash
    + fmt::Debug
    + fmt::Display
    + FromPrimitive
    + ToPrimitive
    + Send
    + Sync
    + 'static
{
}

impl<T> Int for T where
    T: Integer
        + Signed
        + Roots
        + Clone
        + Hash
        + fmt::Debug
        + fmt::Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
        + 'static
{
}

#[inline]
pub(crate) fn int<T: Int>(v: i64) -> T {
    T::from_i64(v).expect("small integer fits the scalar type")
}

fn gcd3<T: Int>(a: &T, b: &T, c: &T) -> T {
    a.gcd(b).gcd(c)
}

/// Splits `d >= 0` as `s² · core` with `core` squarefree.
pub(crate) fn squarefree_split<T: Int>(d: &T) -> (T, T) {
    if d.is_zero() {
        return (T::one(), T::zero());
    }
    let mut core = d.clone();
    let mut s = T::one();
    let mut k: T = int(2);
    while k.clone() * k.clone() <= core {
        let kk = k.clone() * k.clone();
        while (core.clone() % kk.clone()).is_zero() {
            core = core / kk.clone();
            s = s * k.clone();
        }
        k = k + T::one();
    }
    (s, core)
}

pub(crate) fn is_perfect_square<T: Int>(n: &T) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    s.clone() * s == *n
}

/// Sign of `a + b√m` for integers `a`, `b` and `m >= 0`.
pub(crate) fn sign_surd<T: Int>(a: &T, b: &T, m: &T) -> Ordering {
    let zero = T::zero();
    if b.is_zero() || m.is_zero() {
        return a.cmp(&zero);
    }
    let sa = a.cmp(&zero);
    let sb = b.cmp(&zero);
    match (sa, sb) {
        (Ordering::Equal, s) => s,
        (s, t) if s == t => s,
        _ => {
            let lhs = a.clone() * a.clone();
            let rhs = b.clone() * b.clone() * m.clone();
            match lhs.cmp(&rhs) {
                Ordering::Greater => sa,
                Ordering::Less => sb,
                Ordering::Equal => Ordering::Equal,
            }
        }
    }
}

/// Sign of `a + b√m + c√n`.
fn sign_surd2<T: Int>(a: &T, b: &T, m: &T, c: &T, n: &T) -> Ordering {
    let zero = T::zero();
    // sign of s = b√m + c√n
    let ss = {
        let sb = if m.is_zero() { Ordering::Equal } else { b.cmp(&zero) };
        let sc = if n.is_zero() { Ordering::Equal } else { c.cmp(&zero) };
        match (sb, sc) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (s, t) if s == t => s,
            _ => match (b.clone() * b.clone() * m.clone()).cmp(&(c.clone() * c.clone() * n.clone())) {
                Ordering::Greater => sb,
                Ordering::Less => sc,
                Ordering::Equal => Ordering::Equal,
            },
        }
    };
    let sa = a.cmp(&zero);
    if sa == Ordering::Equal || sa == ss {
        return if sa == Ordering::Equal { ss } else { sa };
    }
    if ss == Ordering::Equal {
        return sa;
    }
    // opposite signs: compare a² with s² = b²m + c²n + 2bc√(mn)
    let e = a.clone() * a.clone() - b.clone() * b.clone() * m.clone() - c.clone() * c.clone() * n.clone();
    let f = -(int::<T>(2) * b.clone() * c.clone());
    match sign_surd(&e, &f, &(m.clone() * n.clone())) {
        Ordering::Greater => sa,
        Ordering::Less => ss,
        Ordering::Equal => Ordering::Equal,
    }
}

/// A finite real quadratic number `(p + q√d)/r`.
///
/// Canonical: `r > 0`, `gcd(p, q, r) = 1`, `d` squarefree and different
/// from 1, and `d = 0` exactly when `q = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quad<T> {
    p: T,
    q: T,
    r: T,
    d: T,
}

impl<T: Int> Quad<T> {
    pub fn new(p: T, q: T, r: T, d: T) -> Result<Self, Error> {
        if r.is_zero() {
            return Err(Error::DivByZero);
        }
        if d.is_negative() {
            return Err(Error::NegativeDiscriminant);
        }
        let (s, core) = squarefree_split(&d);
        let mut p = p;
        let mut q = q * s;
        let mut d = core;
        if d.is_one() {
            p = p + q;
            q = T::zero();
        }
        if q.is_zero() || d.is_zero() {
            q = T::zero();
            d = T::zero();
        }
        Ok(Self::reduce(p, q, r, d))
    }

    fn reduce(mut p: T, mut q: T, mut r: T, d: T) -> Self {
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = gcd3(&p, &q, &r);
        if !g.is_one() && !g.is_zero() {
            p = p / g.clone();
            q = q / g.clone();
            r = r / g;
        }
        Quad { p, q, r, d }
    }

    pub fn integer(n: T) -> Self {
        Quad { p: n, q: T::zero(), r: T::one(), d: T::zero() }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::integer(int(n))
    }

    pub fn rational(num: T, den: T) -> Result<Self, Error> {
        Self::new(num, T::zero(), den, T::zero())
    }

    pub fn zero() -> Self {
        Self::integer(T::zero())
    }

    pub fn one() -> Self {
        Self::integer(T::one())
    }

    pub fn p(&self) -> &T {
        &self.p
    }
    pub fn q(&self) -> &T {
        &self.q
    }
    pub fn r(&self) -> &T {
        &self.r
    }
    /// Squarefree radicand; 0 for rationals.
    pub fn radicand(&self) -> &T {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.is_rational() && self.r.is_one()
    }

    /// Galois conjugate `√d ↦ -√d`.
    pub fn conj(&self) -> Self {
        Quad { p: self.p.clone(), q: -self.q.clone(), r: self.r.clone(), d: self.d.clone() }
    }

    pub fn signum(&self) -> Ordering {
        sign_surd(&self.p, &self.q, &self.d)
    }

    fn field(&self, other: &Self) -> Result<T, Error> {
        if self.d.is_zero() {
            Ok(other.d.clone())
        } else if other.d.is_zero() || self.d == other.d {
            Ok(self.d.clone())
        } else {
            Err(Error::MixedField)
        }
    }

    pub fn checked_add(&self, o: &Self) -> Result<Self, Error> {
        let d = self.field(o)?;
        Ok(Self::reduce(
            self.p.clone() * o.r.clone() + o.p.clone() * self.r.clone(),
            self.q.clone() * o.r.clone() + o.q.clone() * self.r.clone(),
            self.r.clone() * o.r.clone(),
            d,
        )
        .fix_zero_q())
    }

    pub fn checked_sub(&self, o: &Self) -> Result<Self, Error> {
        self.checked_add(&o.neg())
    }

    pub fn checked_mul(&self, o: &Self) -> Result<Self, Error> {
        let d = self.field(o)?;
        Ok(Self::reduce(
            self.p.clone() * o.p.clone() + self.q.clone() * o.q.clone() * d.clone(),
            self.p.clone() * o.q.clone() + o.p.clone() * self.q.clone(),
            self.r.clone() * o.r.clone(),
            d,
        )
        .fix_zero_q())
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivByZero);
        }
        // r/(p + q√d) = r(p - q√d)/(p² - q²d)
        let den = self.p.clone() * self.p.clone() - self.q.clone() * self.q.clone() * self.d.clone();
        Ok(Self::reduce(
            self.r.clone() * self.p.clone(),
            -(self.r.clone() * self.q.clone()),
            den,
            self.d.clone(),
        )
        .fix_zero_q())
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, Error> {
        self.field(o)?;
        self.checked_mul(&o.recip()?)
    }

    fn fix_zero_q(mut self) -> Self {
        if self.q.is_zero() {
            self.d = T::zero();
            let g = self.p.gcd(&self.r);
            if !g.is_one() && !g.is_zero() {
                self.p = self.p / g.clone();
                self.r = self.r / g;
            }
            if self.p.is_zero() {
                self.r = T::one();
            }
        }
        self
    }

    pub fn neg(&self) -> Self {
        Quad { p: -self.p.clone(), q: -self.q.clone(), r: self.r.clone(), d: self.d.clone() }
    }

    /// `a·x + b` for integers `a`, `b`; never leaves the field.
    pub fn affine(&self, a: &T, b: &T) -> Self {
        Self::reduce(
            a.clone() * self.p.clone() + b.clone() * self.r.clone(),
            a.clone() * self.q.clone(),
            self.r.clone(),
            self.d.clone(),
        )
        .fix_zero_q()
    }

    pub fn add_int(&self, n: &T) -> Self {
        self.affine(&T::one(), n)
    }

    pub fn div_int(&self, n: &T) -> Result<Self, Error> {
        if n.is_zero() {
            return Err(Error::DivByZero);
        }
        Ok(Self::reduce(self.p.clone(), self.q.clone(), self.r.clone() * n.clone(), self.d.clone()).fix_zero_q())
    }

    pub fn abs(&self) -> Self {
        if self.signum() == Ordering::Less {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Exact floor.
    pub fn floor(&self) -> T {
        let s = if self.q.is_zero() {
            T::zero()
        } else {
            let qq = self.q.clone() * self.q.clone() * self.d.clone();
            let root = qq.sqrt();
            if self.q.is_positive() {
                root
            } else if root.clone() * root.clone() == qq {
                -root
            } else {
                -(root + T::one())
            }
        };
        (self.p.clone() + s).div_floor(&self.r)
    }

    pub fn ceil(&self) -> T {
        -(self.neg().floor())
    }

    /// Midpoint `(self + other)/2`, defined across fields only when one is rational.
    pub fn midpoint(&self, o: &Self) -> Result<Self, Error> {
        self.checked_add(o)?.div_int(&int(2))
    }

    pub fn to_f64(&self) -> f64 {
        let p = self.p.to_f64().unwrap_or(f64::NAN);
        let q = self.q.to_f64().unwrap_or(f64::NAN);
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        (p + q * d.sqrt()) / r
    }

    /// Bit length of the largest of `|p|, |q|, r, d`.
    pub fn height_bits(&self) -> u32 {
        [&self.p, &self.q, &self.r, &self.d]
            .iter()
            .map(|v| {
                let mut a = v.abs();
                let mut bits = 0u32;
                let two: T = int(2);
                while !a.is_zero() {
                    a = a / two.clone();
                    bits += 1;
                }
                bits
            })
            .max()
            .unwrap_or(0)
    }
}

impl<T: Int> PartialOrd for Quad<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Real order. Comparison works across distinct quadratic fields.
impl<T: Int> Ord for Quad<T> {
    fn cmp(&self, o: &Self) -> Ordering {
        let a = self.p.clone() * o.r.clone() - o.p.clone() * self.r.clone();
        let b = self.q.clone() * o.r.clone();
        let c = -(o.q.clone() * self.r.clone());
        if self.d == o.d || self.d.is_zero() || o.d.is_zero() {
            let d = if self.d.is_zero() { o.d.clone() } else { self.d.clone() };
            return sign_surd(&a, &(b + c), &d);
        }
        sign_surd2(&a, &b, &self.d, &c, &o.d)
    }
}

/// `qnum_cmp`: exact comparison of two finite points.
pub fn qnum_cmp<T: Int>(a: &Quad<T>, b: &Quad<T>) -> Ordering {
    a.cmp(b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// `qnum_arith`: field operation, failing on mixed fields or division by zero.
pub fn qnum_arith<T: Int>(a: &Quad<T>, b: &Quad<T>, op: ArithOp) -> Result<Quad<T>, Error> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
        ArithOp::Div => a.checked_div(b),
    }
}

impl<T: Int> fmt::Display for Quad<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {} {})", self.p, self.q, self.r, self.d)
    }
}

/// A point of P¹(R) with quadratic coordinates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point<T> {
    Infinity,
    Finite(Quad<T>),
}

impl<T: Int> Point<T> {
    pub fn int(n: i64) -> Self {
        Point::Finite(Quad::from_i64(n))
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Point::Finite(Quad::rational(int(num), int(den)).expect("nonzero denominator"))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(&self) -> Option<&Quad<T>> {
        match self {
            Point::Finite(q) => Some(q),
            Point::Infinity => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        match self {
            Point::Infinity => true,
            Point::Finite(q) => q.is_rational(),
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Finite(q) => Point::Finite(q.conj()),
        }
    }

    pub fn key(&self) -> CircKey<T> {
        circ_key(self)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Point::Infinity => f64::INFINITY,
            Point::Finite(q) => q.to_f64(),
        }
    }

    /// Angle chart in `[-π/2, 3π/2)`: 0 ↦ -π/2, ∞ ↦ π/2, increasing along the circular order.
    pub fn angle(&self) -> f64 {
        use std::f64::consts::PI;
        match self {
            Point::Infinity => PI / 2.0,
            Point::Finite(q) => {
                let x = q.to_f64();
                if q.signum() != Ordering::Less {
                    -PI / 2.0 + 2.0 * x.atan()
                } else {
                    1.5 * PI + 2.0 * x.atan()
                }
            }
        }
    }

    pub fn parse(s: &str) -> Result<Self, Error> {
        parse_point(s)
    }
}

impl<T: Int> fmt::Display for Point<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "inf"),
            Point::Finite(q) => write!(f, "{q}"),
        }
    }
}

/// Circular order `0 → 1 → ∞ → -1`.
impl<T: Int> Ord for Point<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        circ_key(self).cmp(&circ_key(other))
    }
}

impl<T: Int> PartialOrd for Point<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Int> From<Quad<T>> for Point<T> {
    fn from(q: Quad<T>) -> Self {
        Point::Finite(q)
    }
}

/// Position on the circle: band 0 is `x >= 0`, band 1 is ∞, band 2 is `x < 0`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct CircKey<T> {
    pub band: u8,
    pub value: Option<Quad<T>>,
}

impl<T: Int> PartialOrd for CircKey<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Int> Ord for CircKey<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.band.cmp(&other.band).then_with(|| self.value.cmp(&other.value))
    }
}

pub fn circ_key<T: Int>(x: &Point<T>) -> CircKey<T> {
    match x {
        Point::Infinity => CircKey { band: 1, value: None },
        Point::Finite(q) => {
            let band = if q.signum() == Ordering::Less { 2 } else { 0 };
            CircKey { band, value: Some(q.clone()) }
        }
    }
}

/// Primitive integer quadratic `f1 x² + f2 x + f3` with a root selector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadForm<T> {
    pub f1: T,
    pub f2: T,
    pub f3: T,
    /// `true` selects the root `(-f2 + √Δ)/(2 f1)`.
    pub plus: bool,
}

impl<T: Int> QuadForm<T> {
    pub fn new(f1: T, f2: T, f3: T, plus: bool) -> Self {
        QuadForm { f1, f2, f3, plus }
    }

    pub fn discriminant(&self) -> T {
        self.f2.clone() * self.f2.clone() - int::<T>(4) * self.f1.clone() * self.f3.clone()
    }

    pub fn is_primitive(&self) -> bool {
        gcd3(&self.f1, &self.f2, &self.f3).is_one()
    }

    /// Minimal primitive polynomial (with `f1 > 0`) of a quadratic irrational.
    pub fn of_quad(x: &Quad<T>) -> Result<Self, Error> {
        if x.is_rational() {
            return Err(Error::RationalRoots);
        }
        // (r x - p)² = q² d
        let (p, q, r, d) = (x.p.clone(), x.q.clone(), x.r.clone(), x.d.clone());
        let f1 = r.clone() * r.clone();
        let f2 = -(int::<T>(2) * p.clone() * r);
        let f3 = p.clone() * p - q.clone() * q.clone() * d;
        let g = gcd3(&f1, &f2, &f3);
        let form = QuadForm::new(f1 / g.clone(), f2 / g.clone(), f3 / g, true);
        let plus = form.roots()?.0 == *x;
        Ok(QuadForm { plus, ..form })
    }

    /// `form_roots`: the selected root and its Galois conjugate.
    pub fn roots(&self) -> Result<(Quad<T>, Quad<T>), Error> {
        let disc = self.discriminant();
        if disc.is_negative() {
            return Err(Error::NegativeDiscriminant);
        }
        if is_perfect_square(&disc) {
            return Err(Error::RationalRoots);
        }
        if self.f1.is_zero() {
            return Err(Error::RationalRoots);
        }
        let sel = if self.plus { T::one() } else { -T::one() };
        let w = Quad::new(-self.f2.clone(), sel, int::<T>(2) * self.f1.clone(), disc)?;
        let c = w.conj();
        Ok((w, c))
    }
}

pub fn form_roots<T: Int>(f: &QuadForm<T>) -> Result<(Quad<T>, Quad<T>), Error> {
    f.roots()
}

fn parse_int<T: Int>(s: &str) -> Result<T, Error> {
    T::from_str_radix(s.trim(), 10).map_err(|_| Error::Parse(format!("bad integer `{s}`")))
}

/// Parses `inf`, `(p q r D)`, `p/q` or an integer.
pub fn parse_point<T: Int>(s: &str) -> Result<Point<T>, Error> {
    let t = s.trim();
    if t == "inf" || t == "∞" {
        return Ok(Point::Infinity);
    }
    if let Some(inner) = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!("expected `(p q r D)`, got `{s}`")));
        }
        let q = Quad::new(parse_int(parts[0])?, parse_int(parts[1])?, parse_int(parts[2])?, parse_int(parts[3])?)?;
        return Ok(Point::Finite(q));
    }
    if let Some((a, b)) = t.split_once('/') {
        return Ok(Point::Finite(Quad::rational(parse_int(a)?, parse_int(b)?)?));
    }
    Ok(Point::Finite(Quad::integer(parse_int(t)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = Quad<i64>;

    fn q(p: i64, qq: i64, r: i64, d: i64) -> Q {
        Quad::new(p, qq, r, d).unwrap()
    }

    fn tau() -> Q {
        q(1, 1, 2, 5)
    }

    #[test]
    fn golden_square() {
        let t1 = tau().checked_sub(&Q::one()).unwrap();
        // ((-1+√5)/2)² = (6 - 2√5)/4 = (3-√5)/2
        assert_eq!(t1.checked_mul(&t1).unwrap(), q(3, -1, 2, 5));
        assert_eq!(q(3, -1, 2, 5), Q::from_i64(2).checked_sub(&tau()).unwrap());
        assert_eq!(tau().checked_div(&tau()).unwrap(), Q::one());
        assert_eq!(t1.checked_add(&Q::zero()).unwrap(), t1);
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(q(2, 2, 4, 5), q(1, 1, 2, 5));
        assert_eq!(q(1, 1, 1, 20), q(1, 2, 1, 5));
        assert_eq!(q(1, 1, 1, 4), Q::from_i64(3));
        assert_eq!(q(-1, 0, -2, 7), Q::rational(1, 2).unwrap());
        assert!(Q::new(1, 0, 0, 0).is_err());
    }

    #[test]
    fn comparisons() {
        // (√5-1)/2 vs 2/3: 3√5 - 3 vs 4, 45 < 49
        assert_eq!(q(-1, 1, 2, 5).cmp(&Q::rational(2, 3).unwrap()), Ordering::Less);
        assert_eq!(q(-3, -1, 2, 5).cmp(&Q::from_i64(-2)), Ordering::Less);
        let x = q(7, -3, 11, 13);
        assert_eq!(x.cmp(&x), Ordering::Equal);
        // cross field: √2 < √3, √2 + √3 > 3.14
        assert_eq!(q(0, 1, 1, 2).cmp(&q(0, 1, 1, 3)), Ordering::Less);
        assert_eq!(q(0, 1, 1, 2).cmp(&q(0, -1, 1, 3).checked_add(&Q::rational(314, 100).unwrap()).unwrap()), Ordering::Greater);
        assert!(q(0, 1, 1, 2).checked_add(&q(0, 1, 1, 3)).is_err());
    }

    #[test]
    fn circular_keys() {
        let k0 = circ_key(&Point::<i64>::zero());
        assert_eq!((k0.band, k0.value.clone()), (0, Some(Q::zero())));
        assert_eq!(circ_key(&Point::<i64>::Infinity).band, 1);
        assert_eq!(circ_key(&Point::<i64>::int(-2)).band, 2);
        let order = [Point::<i64>::zero(), Point::int(1), Point::Infinity, Point::int(-1), Point::rational(-1, 9)];
        for w in order.windows(2) {
            assert!(w[0].key() < w[1].key());
        }
    }

    #[test]
    fn form_roots_examples() {
        let (w, c) = QuadForm::new(1i64, 1, -1, true).roots().unwrap();
        assert_eq!(w, q(-1, 1, 2, 5));
        assert_eq!(c, tau().neg());
        let (w, c) = QuadForm::new(1i64, 2, -1, true).roots().unwrap();
        assert_eq!(w, q(-1, 1, 1, 2));
        assert_eq!(c, q(-1, -1, 1, 2));
        assert_eq!(QuadForm::new(1i64, -2, -1, true).discriminant(), 8);
        assert_eq!(QuadForm::new(1i64, 2, -1, true).discriminant(), 8);
        assert!(matches!(QuadForm::new(1i64, 0, -4, true).roots(), Err(Error::RationalRoots)));
        assert!(matches!(QuadForm::new(1i64, 0, 4, true).roots(), Err(Error::NegativeDiscriminant)));
        let f = QuadForm::of_quad(&q(-1, 1, 1, 2)).unwrap();
        assert_eq!((f.f1, f.f2, f.f3, f.plus), (1, 2, -1, true));
    }

    #[test]
    fn floors() {
        assert_eq!(tau().floor(), 1);
        assert_eq!(tau().neg().floor(), -2);
        assert_eq!(q(0, 1, 1, 2).recip().unwrap().floor(), 0);
        assert_eq!(Q::rational(-3, 2).unwrap().floor(), -2);
        assert_eq!(Q::from_i64(-3).floor(), -3);
        assert_eq!(tau().ceil(), 2);
    }

    #[test]
    fn text_form() {
        let p: Point<i64> = parse_point("(-1 1 2 5)").unwrap();
        assert_eq!(p, Point::Finite(tau().checked_sub(&Q::one()).unwrap()));
        assert_eq!(p.to_string(), "(-1 1 2 5)");
        assert_eq!(parse_point::<i64>("inf").unwrap(), Point::Infinity);
        assert_eq!(parse_point::<i64>("-5/2").unwrap(), Point::rational(-5, 2));
        assert!(parse_point::<i64>("(1 2)").is_err());
    }
}
