//! Laurent polynomials in the auxiliary variable `w` with rational coefficients.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};

/// Finitely supported map from `w`-exponents to nonzero rationals.
///
/// Terms are kept sorted by exponent and no zero coefficient is ever stored,
/// so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct WLaurent {
    terms: Vec<(i32, Rational)>,
}

impl WLaurent {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    /// `c * w^exp`.
    pub fn monomial(exp: i32, c: Rational) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self {
                terms: alloc::vec![(exp, c)],
            }
        }
    }

    /// `w^k - w^-k`, the numerator of the refined wall-crossing kernel.
    pub fn antisymmetric(k: i32) -> Self {
        Self::from_terms([(k, Rational::one()), (-k, -Rational::one())])
    }

    /// `w^k + w^-k`.
    pub fn symmetric(k: i32) -> Self {
        Self::from_terms([(k, Rational::one()), (-k, Rational::one())])
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// summing repeated exponents and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(iter: I) -> Self {
        let mut terms: Vec<(i32, Rational)> = iter.into_iter().collect();
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, Rational)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Self { terms: out }
    }

    pub(crate) fn from_sorted_unchecked(terms: Vec<(i32, Rational)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// True if the polynomial has no nonzero `w`-exponent.
    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == 0)
    }

    pub fn terms(&self) -> &[(i32, Rational)] {
        &self.terms
    }

    pub fn coefficient(&self, exp: i32) -> Rational {
        match self.terms.binary_search_by_key(&exp, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Coefficient of the highest power of `w`.
    pub fn leading_coefficient(&self) -> Option<&Rational> {
        self.terms.last().map(|t| &t.1)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    /// Multiplies by `w^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, v)| (e + k, v.clone())).collect(),
        }
    }

    /// Substitutes `w -> w^m`.
    pub fn substitute_power(&self, m: i32) -> Self {
        assert!(m >= 1, "w-power substitution needs m >= 1");
        Self {
            terms: self.terms.iter().map(|(e, v)| (e * m, v.clone())).collect(),
        }
    }

    /// Evaluates at a nonzero rational value of `w`.
    pub fn eval(&self, w: &Rational) -> Rational {
        assert!(!w.is_zero(), "Laurent polynomial evaluated at w = 0");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let p = if *e >= 0 {
                num_traits::pow(w.clone(), *e as usize)
            } else {
                num_traits::pow(w.recip(), e.unsigned_abs() as usize)
            };
            acc += c * p;
        }
        acc
    }

    /// Inverse inside the Laurent ring, which exists only for monomials.
    pub fn monomial_inverse(&self) -> Option<Self> {
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            Some(Self::monomial(-e, c.recip()))
        } else {
            None
        }
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_integer())
    }

    /// True when every coefficient is a nonnegative rational.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| !t.1.is_negative())
    }

    fn merge(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_other {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { terms: out }
    }

    fn product(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return Self {
                terms: other.terms.iter().map(|(f, d)| (e + f, c * d)).collect(),
            };
        }
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.terms.last().unwrap().0 + other.terms.last().unwrap().0;
        let mut acc: Vec<Rational> = alloc::vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.terms {
            for (f, d) in &other.terms {
                acc[(e + f - lo) as usize] += c * d;
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (lo + i as i32, c))
            .collect();
        Self { terms }
    }
}

impl From<Rational> for WLaurent {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl From<i64> for WLaurent {
    fn from(c: i64) -> Self {
        Self::constant(int(c))
    }
}

impl<'a> Add<&'a WLaurent> for &'a WLaurent {
    type Output = WLaurent;
    fn add(self, rhs: &'a WLaurent) -> WLaurent {
        self.merge(rhs, false)
    }
}

impl<'a> Sub<&'a WLaurent> for &'a WLaurent {
    type Output = WLaurent;
    fn sub(self, rhs: &'a WLaurent) -> WLaurent {
        self.merge(rhs, true)
    }
}

impl<'a> Mul<&'a WLaurent> for &'a WLaurent {
    type Output = WLaurent;
    fn mul(self, rhs: &'a WLaurent) -> WLaurent {
        self.product(rhs)
    }
}

impl Neg for &WLaurent {
    type Output = WLaurent;
    fn neg(self) -> WLaurent {
        WLaurent {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl fmt::Debug for WLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WLaurent {
    /// Highest power first, e.g. `w^3 - 2*w + 1/2*w^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            match (*e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("w")?,
                (1, false) => write!(f, "{mag}*w")?,
                (_, true) => write!(f, "w^{e}")?,
                (_, false) => write!(f, "{mag}*w^{e}")?,
            }
        }
        Ok(())
    }
}
