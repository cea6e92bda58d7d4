//! The extended modular group up to sign, the projective representation of
//! Σ, unimodular intervals and branch matrices.

use std::cmp::Ordering;
use std::fmt;

use crate::exact::{int, Int, Point, Quad};
use crate::words::{Arrow, Letter, Word};
use crate::{Error, Result};

/// `[[a, b], [c, d]]` up to global sign, determinant ±1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix<T> {
    a: T,
    b: T,
    c: T,
    d: T,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatClass {
    Identity,
    Parabolic,
    Elliptic,
    Hyperbolic,
    Reflectionlike,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FixKind {
    Attracting,
    Repelling,
    Neutral,
}

impl<T: Int> Matrix<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        let det = a.clone() * d.clone() - b.clone() * c.clone();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular);
        }
        Ok(Self::canon(a, b, c, d))
    }

    pub fn from_i64(m: [[i64; 2]; 2]) -> Result<Self> {
        Self::new(int(m[0][0]), int(m[0][1]), int(m[1][0]), int(m[1][1]))
    }

    fn canon(a: T, b: T, c: T, d: T) -> Self {
        let lead = [&a, &b, &c].into_iter().find(|x| !x.is_zero()).cloned().unwrap_or_else(T::one);
        if lead.is_negative() {
            Matrix { a: -a, b: -b, c: -c, d: -d }
        } else {
            Matrix { a, b, c, d }
        }
    }

    pub fn identity() -> Self {
        Self::canon(T::one(), T::zero(), T::zero(), T::one())
    }
    pub fn l() -> Self {
        Self::canon(T::one(), T::zero(), T::one(), T::one())
    }
    pub fn n() -> Self {
        Self::canon(T::one(), T::one(), T::zero(), T::one())
    }
    pub fn f() -> Self {
        Self::canon(T::zero(), T::one(), T::one(), T::zero())
    }
    pub fn s() -> Self {
        Self::canon(T::zero(), -T::one(), T::one(), T::zero())
    }

    pub fn entries(&self) -> [T; 4] {
        [self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()]
    }

    pub fn rows(&self) -> [[T; 2]; 2] {
        [[self.a.clone(), self.b.clone()], [self.c.clone(), self.d.clone()]]
    }

    pub fn det(&self) -> T {
        self.a.clone() * self.d.clone() - self.b.clone() * self.c.clone()
    }

    pub fn is_orientation_preserving(&self) -> bool {
        self.det().is_positive()
    }

    /// Trace, up to sign.
    pub fn abs_trace(&self) -> T {
        (self.a.clone() + self.d.clone()).abs()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::canon(
            self.a.clone() * o.a.clone() + self.b.clone() * o.c.clone(),
            self.a.clone() * o.b.clone() + self.b.clone() * o.d.clone(),
            self.c.clone() * o.a.clone() + self.d.clone() * o.c.clone(),
            self.c.clone() * o.b.clone() + self.d.clone() * o.d.clone(),
        )
    }

    pub fn inv(&self) -> Self {
        Self::canon(self.d.clone(), -self.b.clone(), -self.c.clone(), self.a.clone())
    }

    pub fn transpose(&self) -> Self {
        Self::canon(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn pow(&self, k: u64) -> Self {
        (0..k).fold(Self::identity(), |acc, _| acc.mul(self))
    }

    /// Conjugate `self · m · self⁻¹`.
    pub fn conj(&self, m: &Self) -> Self {
        self.mul(m).mul(&self.inv())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `x ↦ (ax + b)/(cx + d)` on P¹.
    pub fn apply(&self, x: &Point<T>) -> Point<T> {
        match x {
            Point::Infinity => {
                if self.c.is_zero() {
                    Point::Infinity
                } else {
                    Point::Finite(Quad::rational(self.a.clone(), self.c.clone()).expect("c != 0"))
                }
            }
            Point::Finite(q) => {
                let den = q.affine(&self.c, &self.d);
                if den.is_zero() {
                    return Point::Infinity;
                }
                let num = q.affine(&self.a, &self.b);
                Point::Finite(num.checked_div(&den).expect("same field"))
            }
        }
    }

    pub fn classify(&self) -> MatClass {
        mat_classify(self)
    }

    pub fn fixed_points(&self) -> Result<Vec<(Point<T>, FixKind)>> {
        fixed_points(self)
    }

    /// Unique fixed point of a parabolic matrix.
    pub fn parabolic_fix(&self) -> Option<Point<T>> {
        if self.classify() != MatClass::Parabolic {
            return None;
        }
        self.fixed_points().ok().map(|v| v[0].0.clone())
    }
}

impl<T: Int> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn mobius<T: Int>(m: &Matrix<T>, x: &Point<T>) -> Point<T> {
    m.apply(x)
}

pub fn proj<T: Int>(w: &Word) -> Matrix<T> {
    let mut m = Matrix::identity();
    for x in &w.body {
        m = m.mul(&match x {
            Letter::L => Matrix::l(),
            Letter::N => Matrix::n(),
        });
    }
    if w.flip {
        m = m.mul(&Matrix::f());
    }
    m
}

pub fn mat_classify<T: Int>(m: &Matrix<T>) -> MatClass {
    if m.is_identity() {
        return MatClass::Identity;
    }
    if m.det().is_negative() {
        return MatClass::Reflectionlike;
    }
    let t = m.abs_trace();
    let two: T = int(2);
    match t.cmp(&two) {
        Ordering::Equal => MatClass::Parabolic,
        Ordering::Greater => MatClass::Hyperbolic,
        Ordering::Less => MatClass::Elliptic,
    }
}

/// Real fixed points of `m`, each tagged by the derivative test.
pub fn fixed_points<T: Int>(m: &Matrix<T>) -> Result<Vec<(Point<T>, FixKind)>> {
    if m.is_identity() {
        return Err(Error::IdentityMatrix);
    }
    let [a, b, c, d] = m.entries();
    let det = m.det();
    let tr = a.clone() + d.clone();
    let disc = tr.clone() * tr.clone() - int::<T>(4) * det.clone();
    if disc.is_negative() {
        return Ok(vec![]);
    }
    // derivative at a finite fixed point x is det/(cx+d)², and cx+d is an eigenvalue
    let tag = |lam: &Quad<T>| match lam.abs().cmp(&Quad::one()) {
        Ordering::Greater => FixKind::Attracting,
        Ordering::Less => FixKind::Repelling,
        Ordering::Equal => FixKind::Neutral,
    };
    if c.is_zero() {
        // fixes ∞ with derivative d/a there
        let mut out = Vec::new();
        let at_inf = match a.abs().cmp(&d.abs()) {
            Ordering::Greater => FixKind::Repelling,
            Ordering::Less => FixKind::Attracting,
            Ordering::Equal => FixKind::Neutral,
        };
        out.push((Point::Infinity, at_inf));
        if a != d {
            let x = Quad::rational(b.clone(), d.clone() - a.clone())?;
            out.push((Point::Finite(x), tag(&Quad::integer(d.clone()))));
        }
        return Ok(out);
    }
    let two_c = int::<T>(2) * c.clone();
    if disc.is_zero() {
        let x = Quad::rational(a - d, two_c)?;
        return Ok(vec![(Point::Finite(x), FixKind::Neutral)]);
    }
    let mut out = Vec::new();
    for s in [T::one(), -T::one()] {
        let x = Quad::new(a.clone() - d.clone(), s.clone(), two_c.clone(), disc.clone())?;
        let lam = Quad::new(tr.clone(), s, int(2), disc.clone())?;
        out.push((Point::Finite(x), tag(&lam)));
    }
    Ok(out)
}

/// Unimodular `M` with `M(p) = ∞`, for rational `p`.
pub fn chart_to_infinity<T: Int>(p: &Point<T>) -> Matrix<T> {
    match p {
        Point::Infinity => Matrix::identity(),
        Point::Finite(q) => {
            assert!(q.is_rational(), "parabolic fixed points are rational");
            let (u, v) = (q.p().clone(), q.r().clone());
            let e = u.extended_gcd(&v);
            // rows (−x, −y) and (v, −u): det = x u + y v = 1
            Matrix::new(-e.x, -e.y, v, -u).expect("unimodular by construction")
        }
    }
}

/// Closed circular interval `mat[0, ∞] = [mat(0), mat(∞)]`, `det mat = +1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UnimodInterval<T> {
    mat: Matrix<T>,
}

impl<T: Int> UnimodInterval<T> {
    pub fn from_matrix(mat: Matrix<T>) -> Result<Self> {
        if !mat.det().is_one() {
            return Err(Error::Validation { at: "interval".into(), msg: format!("matrix {mat} has determinant -1") });
        }
        Ok(UnimodInterval { mat })
    }

    /// `[lo, hi]` from the endpoints, which must be adjacent Farey fractions.
    pub fn from_endpoints(lo: &Point<T>, hi: &Point<T>) -> Result<Self> {
        let frac = |x: &Point<T>| -> Result<(T, T)> {
            match x {
                Point::Infinity => Ok((T::one(), T::zero())),
                Point::Finite(q) if q.is_rational() => Ok((q.p().clone(), q.r().clone())),
                Point::Finite(q) => Err(Error::Validation { at: "interval".into(), msg: format!("irrational endpoint {q}") }),
            }
        };
        let (p, q) = frac(lo)?;
        let (p1, q1) = frac(hi)?;
        let det = p1.clone() * q.clone() - p.clone() * q1.clone();
        if det.is_one() {
            Ok(UnimodInterval { mat: Matrix::canon(p1, p, q1, q) })
        } else if (-det).is_one() {
            Ok(UnimodInterval { mat: Matrix::canon(-p1, p, -q1, q) })
        } else {
            Err(Error::NotUnimodular)
        }
    }

    pub fn base() -> Self {
        UnimodInterval { mat: Matrix::identity() }
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.mat
    }

    pub fn lo(&self) -> Point<T> {
        self.mat.apply(&Point::zero())
    }

    pub fn hi(&self) -> Point<T> {
        self.mat.apply(&Point::Infinity)
    }

    pub fn contains(&self, x: &Point<T>) -> bool {
        interval_member(x, self)
    }

    /// The closure of the complement, `mat · S`.
    pub fn complement(&self) -> Self {
        UnimodInterval { mat: self.mat.mul(&Matrix::s()) }
    }

    /// Image under any element of the extended modular group.
    pub fn image(&self, m: &Matrix<T>) -> Self {
        let mat = m.mul(&self.mat);
        if mat.det().is_one() {
            UnimodInterval { mat }
        } else {
            UnimodInterval { mat: mat.mul(&Matrix::f()) }
        }
    }
}

impl<T: Int> fmt::Display for UnimodInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo(), self.hi())
    }
}

pub fn interval_member<T: Int>(x: &Point<T>, iv: &UnimodInterval<T>) -> bool {
    match iv.mat.inv().apply(x) {
        Point::Infinity => true,
        Point::Finite(y) => y.signum() != Ordering::Less,
    }
}

/// `B_{iσj} = I_i · proj(σ) · I_j⁻¹`.
pub fn branch_matrix<T: Int>(a: &Arrow, intervals: &[UnimodInterval<T>]) -> Matrix<T> {
    intervals[a.from].mat.mul(&proj(&a.word)).mul(&intervals[a.to].mat.inv())
}

/// `D_{iσj} = (I_j S) · proj(σ♯) · (I_i S)⁻¹`, which equals `B_{iσj}⁻¹`.
pub fn dual_matrix<T: Int>(a: &Arrow, intervals: &[UnimodInterval<T>]) -> Matrix<T> {
    let js = intervals[a.to].mat.mul(&Matrix::s());
    let is = intervals[a.from].mat.mul(&Matrix::s());
    js.mul(&proj(&a.word.sharp())).mul(&is.inv())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::HashMap;

    type M = Matrix<i64>;
    type P = Point<i64>;

    fn m(r: [[i64; 2]; 2]) -> M {
        M::from_i64(r).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn tau_minus_one() -> P {
        P::parse("(-1 1 2 5)").unwrap()
    }

    #[test]
    fn generators() {
        assert_eq!(proj::<i64>(&w("n")), m([[1, 1], [0, 1]]));
        assert_eq!(proj::<i64>(&Word::empty()), M::identity());
        assert_eq!(proj::<i64>(&w("lnf")), m([[1, 1], [2, 1]]));
        assert_eq!(proj::<i64>(&w("lnf")), proj::<i64>(&w("nlf")).transpose());
        assert_eq!(M::f().mul(&M::l()), M::n().mul(&M::f()));
        assert_eq!(M::f().mul(&M::f()), M::identity());
        assert_eq!(m([[-1, 0], [0, -1]]), M::identity());
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(M::n().apply(&P::Infinity), P::Infinity);
        assert_eq!(m([[0, 1], [1, 2]]).apply(&P::int(-1)), P::int(1));
        assert_eq!(M::l().apply(&tau_minus_one()), P::parse("(3 -1 2 5)").unwrap());
        assert_eq!(M::l().apply(&P::int(-1)), P::Infinity);
    }

    #[test]
    fn intervals() {
        let i0 = UnimodInterval::from_endpoints(&P::int(-1), &P::zero()).unwrap();
        assert_eq!(i0.matrix(), &m([[0, -1], [1, 1]]));
        assert_eq!(i0.matrix().inv(), m([[1, 1], [-1, 0]]));
        assert_eq!((i0.lo(), i0.hi()), (P::int(-1), P::zero()));
        let r = UnimodInterval::from_endpoints(&P::Infinity, &P::int(-2)).unwrap();
        assert_eq!(r.matrix(), &m([[2, 1], [-1, 0]]));
        assert!(r.contains(&P::int(-3)));
        assert!(!r.contains(&P::int(-1)));
        assert!(UnimodInterval::<i64>::base().contains(&P::Infinity));
        let wrap = UnimodInterval::from_endpoints(&P::zero(), &P::int(-1)).unwrap();
        assert!(wrap.contains(&P::int(2)));
        assert!(!wrap.contains(&P::rational(-1, 2)));
        assert!(UnimodInterval::from_endpoints(&P::zero(), &P::int(2)).is_err());
        assert!(UnimodInterval::from_matrix(M::f()).is_err());
        let c = i0.complement();
        assert_eq!((c.lo(), c.hi()), (P::zero(), P::int(-1)));
        let img = i0.image(&M::f());
        assert_eq!((img.lo(), img.hi()), (P::Infinity, P::int(-1)));
    }

    #[test]
    fn branch_and_dual() {
        let i0 = UnimodInterval::from_endpoints(&P::int(-1), &P::zero()).unwrap();
        let i1 = UnimodInterval::from_endpoints(&P::zero(), &P::int(1)).unwrap();
        let iv = vec![i0, i1.clone()];
        let a: Arrow = "1:nf:0".parse().unwrap();
        assert_eq!(branch_matrix(&a, &iv), m([[0, 1], [1, 2]]));
        let one = vec![i1];
        assert_eq!(branch_matrix(&"0:l:0".parse().unwrap(), &one), M::l());
        assert_eq!(branch_matrix(&Arrow::identity(0), &one), M::identity());
        assert_eq!(dual_matrix(&"0:l:0".parse().unwrap(), &one), M::l().inv());
        assert_eq!(dual_matrix(&"0:nf:0".parse().unwrap(), &one), m([[1, -1], [-1, 0]]));
        assert_eq!(dual_matrix(&Arrow::identity(0), &one), M::identity());
    }

    #[test]
    fn classification() {
        assert_eq!(M::l().classify(), MatClass::Parabolic);
        assert_eq!(m([[1, 1], [1, 2]]).classify(), MatClass::Hyperbolic);
        assert_eq!(proj::<i64>(&w("ln")), m([[1, 1], [1, 2]]));
        assert_eq!(M::f().classify(), MatClass::Reflectionlike);
        assert_eq!(M::s().classify(), MatClass::Elliptic);
        assert_eq!(M::identity().classify(), MatClass::Identity);
    }

    #[test]
    fn fixed_point_examples() {
        let fp = m([[0, 1], [1, 1]]).fixed_points().unwrap();
        assert_eq!(fp.len(), 2);
        assert!(fp.contains(&(tau_minus_one(), FixKind::Attracting)));
        assert!(fp.contains(&(P::parse("(-1 -1 2 5)").unwrap(), FixKind::Repelling)));
        assert_eq!(M::l().fixed_points().unwrap(), vec![(P::zero(), FixKind::Neutral)]);
        assert_eq!(M::n().fixed_points().unwrap(), vec![(P::Infinity, FixKind::Neutral)]);
        assert_eq!(M::l().parabolic_fix(), Some(P::zero()));
        assert!(matches!(M::identity().fixed_points(), Err(Error::IdentityMatrix)));
        for (x, _) in m([[2, 1], [1, 1]]).fixed_points().unwrap() {
            assert_eq!(m([[2, 1], [1, 1]]).apply(&x), x);
        }
    }

    #[test]
    fn charts() {
        for p in [P::Infinity, P::zero(), P::rational(-5, 3), P::rational(7, 2), P::int(-1)] {
            assert_eq!(chart_to_infinity(&p).apply(&p), P::Infinity);
        }
    }

    fn all_words(max: usize) -> Vec<Word> {
        let mut out = vec![Word::empty(), Word::f()];
        let mut layer = vec![Word::empty()];
        for _ in 0..max {
            let mut next = Vec::new();
            for v in &layer {
                for x in [Letter::L, Letter::N] {
                    let mut b = v.body.clone();
                    b.push(x);
                    next.push(Word::new(b.clone(), false));
                    out.push(Word::new(b.clone(), false));
                    out.push(Word::new(b, true));
                }
            }
            layer = next;
        }
        out
    }

    #[test]
    fn faithful_up_to_grade_8() {
        let mut seen: HashMap<M, Word> = HashMap::new();
        for v in all_words(8) {
            if let Some(prev) = seen.insert(proj(&v), v.clone()) {
                panic!("{prev} and {v} have the same image");
            }
        }
        assert_eq!(seen.len(), 2 * ((1 << 9) - 1));
    }

    fn word() -> impl Strategy<Value = Word> {
        (prop::collection::vec(prop_oneof![Just(Letter::L), Just(Letter::N)], 0..16), any::<bool>())
            .prop_map(|(b, f)| Word::new(b, f))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn transpose_law(v in word()) {
            prop_assert_eq!(proj::<i64>(&v.sharp()), proj::<i64>(&v).transpose());
        }

        #[test]
        fn homomorphism(a in word(), b in word()) {
            prop_assert_eq!(proj::<i64>(&a.concat(&b)), proj::<i64>(&a).mul(&proj(&b)));
        }
    }
}
