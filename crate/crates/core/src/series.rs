//! Truncated Puiseux series in `q` on the exponent lattice `(1/24)Z`.
//!
//! A [`PuiseuxSeries`] stores its nonzero coefficients up to a cutoff and is
//! exact through that cutoff: every coefficient at an exponent `<= cutoff` is
//! known (zero if absent). Each operation propagates the cutoff so that the
//! result is again exact through its own cutoff.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::laurent::WLaurent;
use crate::rational::Rational;
use crate::wrational::WRational;

/// Common denominator of every `q`-exponent.
pub const LATTICE_DEN: i64 = 24;

/// A `q`-exponent `numerator / 24`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QExponent(pub i64);

impl QExponent {
    pub const ZERO: QExponent = QExponent(0);

    pub const fn new(numerator: i64) -> Self {
        QExponent(numerator)
    }

    /// The integer `n` as an exponent.
    pub const fn integer(n: i64) -> Self {
        QExponent(n * LATTICE_DEN)
    }

    /// `p / q` if it lies on the lattice.
    pub fn from_ratio(p: i64, q: i64) -> Option<Self> {
        if q == 0 || (p * LATTICE_DEN) % q != 0 {
            None
        } else {
            Some(QExponent(p * LATTICE_DEN / q))
        }
    }

    /// Lattice point of an exact rational, if it lies on the lattice.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        let scaled = r * Rational::from_integer(LATTICE_DEN.into());
        if scaled.is_integer() {
            i64::try_from(scaled.to_integer()).ok().map(QExponent)
        } else {
            None
        }
    }

    pub const fn numerator(self) -> i64 {
        self.0
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.0.into(), LATTICE_DEN.into())
    }
}

impl Add for QExponent {
    type Output = QExponent;
    fn add(self, rhs: QExponent) -> QExponent {
        QExponent(self.0 + rhs.0)
    }
}

impl Sub for QExponent {
    type Output = QExponent;
    fn sub(self, rhs: QExponent) -> QExponent {
        QExponent(self.0 - rhs.0)
    }
}

impl Neg for QExponent {
    type Output = QExponent;
    fn neg(self) -> QExponent {
        QExponent(-self.0)
    }
}

impl Mul<i64> for QExponent {
    type Output = QExponent;
    fn mul(self, k: i64) -> QExponent {
        QExponent(self.0 * k)
    }
}

impl fmt::Debug for QExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QExponent({})", self)
    }
}

impl fmt::Display for QExponent {
    /// Reduced fraction, e.g. `-5/6` or `2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

/// The ring interface a series coefficient needs.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` if it does not exist in the ring.
    fn inverse(&self) -> Option<Self>;
    fn from_rational(c: Rational) -> Self;

    fn scale(&self, c: &Rational) -> Self {
        self.mul(&Self::from_rational(c.clone()))
    }

    /// `sum a_i * b_i`. Rings with expensive normalization override this.
    fn sum_of_products<'a, I>(pairs: I) -> Self
    where
        Self: 'a,
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
    {
        pairs
            .into_iter()
            .fold(Self::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
    }
}

impl Coefficient for Rational {
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        (!num_traits::Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_rational(c: Rational) -> Self {
        c
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn sum_of_products<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
    {
        let mut acc: Rational = num_traits::Zero::zero();
        for (a, b) in pairs {
            acc += a * b;
        }
        acc
    }
}

impl Coefficient for WLaurent {
    fn zero() -> Self {
        WLaurent::zero()
    }
    fn one() -> Self {
        WLaurent::one()
    }
    fn is_zero(&self) -> bool {
        WLaurent::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Option<Self> {
        self.monomial_inverse()
    }
    fn from_rational(c: Rational) -> Self {
        WLaurent::constant(c)
    }
    fn scale(&self, c: &Rational) -> Self {
        WLaurent::scale(self, c)
    }
}

impl Coefficient for WRational {
    fn zero() -> Self {
        WRational::zero()
    }
    fn one() -> Self {
        WRational::one()
    }
    fn is_zero(&self) -> bool {
        WRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        WRational::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        WRational::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        WRational::mul(self, other)
    }
    fn neg(&self) -> Self {
        WRational::neg(self)
    }
    fn inverse(&self) -> Option<Self> {
        WRational::inverse(self)
    }
    fn from_rational(c: Rational) -> Self {
        WRational::from_rational(c)
    }
    fn scale(&self, c: &Rational) -> Self {
        WRational::scale(self, c)
    }
    fn sum_of_products<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a Self, &'a Self)>,
    {
        WRational::sum_of_products(pairs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("series is not invertible: {0}")]
    NotInvertible(&'static str),
    #[error("coefficient at q^({exponent}) requested beyond truncation at q^({cutoff})")]
    BeyondTruncation {
        exponent: QExponent,
        cutoff: QExponent,
    },
}

/// Truncated series `sum c_e q^(e/24)`, exact through `cutoff`.
#[derive(Clone, PartialEq, Eq)]
pub struct PuiseuxSeries<R> {
    terms: BTreeMap<i64, R>,
    cutoff: i64,
}

impl<R: Coefficient> PuiseuxSeries<R> {
    /// The zero series, exact through `cutoff`.
    pub fn zero(cutoff: QExponent) -> Self {
        Self {
            terms: BTreeMap::new(),
            cutoff: cutoff.0,
        }
    }

    /// `c * q^e`, exact through `cutoff`.
    pub fn monomial(e: QExponent, c: R, cutoff: QExponent) -> Self {
        Self::from_terms([(e, c)], cutoff)
    }

    pub fn constant(c: R, cutoff: QExponent) -> Self {
        Self::monomial(QExponent::ZERO, c, cutoff)
    }

    /// Sums repeated exponents, drops zeros and anything beyond `cutoff`.
    pub fn from_terms<I: IntoIterator<Item = (QExponent, R)>>(terms: I, cutoff: QExponent) -> Self {
        let mut map: BTreeMap<i64, R> = BTreeMap::new();
        for (e, c) in terms {
            if e.0 > cutoff.0 {
                continue;
            }
            match map.get_mut(&e.0) {
                Some(v) => *v = v.add(&c),
                None => {
                    map.insert(e.0, c);
                }
            }
        }
        map.retain(|_, v| !v.is_zero());
        Self {
            terms: map,
            cutoff: cutoff.0,
        }
    }

    pub fn cutoff(&self) -> QExponent {
        QExponent(self.cutoff)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored nonzero coefficients.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (QExponent, &R)> + '_ {
        self.terms.iter().map(|(e, c)| (QExponent(*e), c))
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn leading_exponent(&self) -> Option<QExponent> {
        self.terms.keys().next().map(|e| QExponent(*e))
    }

    pub fn leading_coefficient(&self) -> Option<&R> {
        self.terms.values().next()
    }

    // Valuation used for cutoff bookkeeping; a zero series counts as
    // vanishing through its cutoff.
    fn valuation(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.cutoff + 1)
    }

    pub fn coefficient(&self, e: QExponent) -> Result<R, SeriesError> {
        if e.0 > self.cutoff {
            return Err(SeriesError::BeyondTruncation {
                exponent: e,
                cutoff: self.cutoff(),
            });
        }
        Ok(self.terms.get(&e.0).cloned().unwrap_or_else(R::zero))
    }

    /// Lowers the cutoff (never raises it).
    pub fn truncate(&self, cutoff: QExponent) -> Self {
        let cut = cutoff.0.min(self.cutoff);
        Self {
            terms: self.terms.range(..=cut).map(|(e, c)| (*e, c.clone())).collect(),
            cutoff: cut,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let cut = self.cutoff.min(other.cutoff);
        let mut terms: BTreeMap<i64, R> = self.terms.range(..=cut).map(|(e, c)| (*e, c.clone())).collect();
        for (e, c) in other.terms.range(..=cut) {
            match terms.get_mut(e) {
                Some(v) => {
                    let s = v.add(c);
                    if s.is_zero() {
                        terms.remove(e);
                    } else {
                        *v = s;
                    }
                }
                None => {
                    terms.insert(*e, c.clone());
                }
            }
        }
        Self { terms, cutoff: cut }
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (*e, c.neg())).collect(),
            cutoff: self.cutoff,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Multiplies every coefficient by the ring element `c`.
    pub fn scale(&self, c: &R) -> Self {
        self.map(|v| v.mul(c))
    }

    /// Multiplies every coefficient by a rational.
    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.map(|v| v.scale(c))
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: QExponent) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + e.0, c.clone())).collect(),
            cutoff: self.cutoff + e.0,
        }
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map<S: Coefficient, F: Fn(&R) -> S>(&self, f: F) -> PuiseuxSeries<S> {
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let v = f(c);
                (!v.is_zero()).then_some((*e, v))
            })
            .collect();
        PuiseuxSeries {
            terms,
            cutoff: self.cutoff,
        }
    }

    /// Cauchy product, exact through
    /// `min(cutoff(s) + val(t), cutoff(t) + val(s))`.
    pub fn mul(&self, other: &Self) -> Self {
        let cut = (self.cutoff + other.valuation()).min(other.cutoff + self.valuation());
        let mut buckets: BTreeMap<i64, Vec<(&R, &R)>> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1 + e2;
                if e > cut {
                    break;
                }
                buckets.entry(e).or_default().push((c1, c2));
            }
        }
        let terms = buckets
            .into_iter()
            .filter_map(|(e, pairs)| {
                let v = R::sum_of_products(pairs);
                (!v.is_zero()).then_some((e, v))
            })
            .collect();
        Self { terms, cutoff: cut }
    }

    /// Multiplicative inverse. The leading exponent is negated and the result
    /// is exact through `cutoff - 2 * leading_exponent`.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let (&e0, c0) = self
            .terms
            .iter()
            .next()
            .ok_or(SeriesError::NotInvertible("zero series"))?;
        let c0_inv = c0
            .inverse()
            .ok_or(SeriesError::NotInvertible("leading coefficient is not a unit"))?;
        let cut = self.cutoff - 2 * e0;
        let span = (cut + e0).max(-1);
        // res[n] is the coefficient at -e0 + n.
        let tail: Vec<(i64, &R)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(e, c)| (e - e0, c))
            .take_while(|(d, _)| *d <= span)
            .collect();
        let mut res: Vec<Option<R>> = Vec::with_capacity(span as usize + 1);
        res.push(Some(c0_inv.clone()));
        for n in 1..=span {
            let pairs = tail
                .iter()
                .take_while(|(d, _)| *d <= n)
                .filter_map(|(d, a)| res[(n - d) as usize].as_ref().map(|b| (*a, b)));
            let acc = R::sum_of_products(pairs);
            res.push(if acc.is_zero() {
                None
            } else {
                Some(c0_inv.mul(&acc).neg())
            });
        }
        let terms = res
            .into_iter()
            .enumerate()
            .filter_map(|(n, c)| c.map(|c| (n as i64 - e0, c)))
            .collect();
        Ok(Self { terms, cutoff: cut })
    }

    /// `self / other` via inversion.
    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self.mul(&other.invert()?))
    }

    /// `self^n`; `n = 0` gives the constant 1 with the same cutoff.
    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::constant(R::one(), self.cutoff());
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitutes `q -> q^k`, `k >= 1`.
    pub fn scale_q(&self, k: u32) -> Self {
        assert!(k >= 1, "q-power substitution needs k >= 1");
        let k = k as i64;
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect(),
            cutoff: self.cutoff * k,
        }
    }

    /// True if both series agree at every exponent up to `upto`, which must
    /// not exceed either cutoff.
    pub fn agrees_through(&self, other: &Self, upto: QExponent) -> bool {
        if upto.0 > self.cutoff || upto.0 > other.cutoff {
            return false;
        }
        let a = self.terms.range(..=upto.0);
        let b = other.terms.range(..=upto.0);
        a.eq(b)
    }
}

impl PuiseuxSeries<Rational> {
    /// Embeds a series with rational coefficients into the refined ring.
    pub fn to_wrational(&self) -> PuiseuxSeries<WRational> {
        self.map(|c| WRational::from_rational(c.clone()))
    }
}

impl PuiseuxSeries<WLaurent> {
    /// Substitutes `w -> w^m` in every coefficient.
    pub fn substitute_w_power(&self, m: u32) -> Self {
        self.map(|c| c.substitute_power(m as i32))
    }

    pub fn to_wrational(&self) -> PuiseuxSeries<WRational> {
        self.map(|c| WRational::from_laurent(c.clone()))
    }
}

impl PuiseuxSeries<WRational> {
    /// Substitutes `w -> w^m` in every coefficient.
    pub fn substitute_w_power(&self, m: u32) -> Self {
        self.map(|c| c.substitute_power(m as i32))
    }
}

impl<R: Coefficient> Add for &PuiseuxSeries<R> {
    type Output = PuiseuxSeries<R>;
    fn add(self, rhs: Self) -> PuiseuxSeries<R> {
        PuiseuxSeries::add(self, rhs)
    }
}

impl<R: Coefficient> Sub for &PuiseuxSeries<R> {
    type Output = PuiseuxSeries<R>;
    fn sub(self, rhs: Self) -> PuiseuxSeries<R> {
        PuiseuxSeries::sub(self, rhs)
    }
}

impl<R: Coefficient> Mul for &PuiseuxSeries<R> {
    type Output = PuiseuxSeries<R>;
    fn mul(self, rhs: Self) -> PuiseuxSeries<R> {
        PuiseuxSeries::mul(self, rhs)
    }
}

impl<R: Coefficient> Neg for &PuiseuxSeries<R> {
    type Output = PuiseuxSeries<R>;
    fn neg(self) -> PuiseuxSeries<R> {
        PuiseuxSeries::neg(self)
    }
}

impl<R: fmt::Debug> fmt::Debug for PuiseuxSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "q^({}): {:?}", QExponent(*e), c)?;
        }
        write!(f, "; O(q^({}))]", QExponent(self.cutoff))
    }
}
