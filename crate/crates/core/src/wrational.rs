//! Rational functions in `w` over the rationals, kept in lowest terms.

use core::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::laurent::WLaurent;
use crate::poly::Poly;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WRationalError {
    #[error("zero denominator")]
    ZeroDenominator,
}

/// `num / den` with `num`, `den` Laurent polynomials in `w`.
///
/// Canonical form: `den` is a monic polynomial with nonzero constant term,
/// and `num`, `den` share no nonconstant factor. All powers of `w` live in
/// `num`. Two values are equal iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WRational {
    num: WLaurent,
    den: WLaurent,
}

impl WRational {
    pub fn new(num: WLaurent, den: WLaurent) -> Result<Self, WRationalError> {
        if den.is_zero() {
            return Err(WRationalError::ZeroDenominator);
        }
        Ok(Self::reduce(&num, &den))
    }

    pub fn zero() -> Self {
        Self::from_laurent(WLaurent::zero())
    }

    pub fn one() -> Self {
        Self::from_laurent(WLaurent::one())
    }

    pub fn from_laurent(num: WLaurent) -> Self {
        Self {
            num,
            den: WLaurent::one(),
        }
    }

    pub fn from_rational(c: Rational) -> Self {
        Self::from_laurent(WLaurent::constant(c))
    }

    pub fn numerator(&self) -> &WLaurent {
        &self.num
    }

    pub fn denominator(&self) -> &WLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True if the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// The Laurent polynomial, if the denominator is 1.
    pub fn to_laurent(&self) -> Option<WLaurent> {
        self.is_laurent().then(|| self.num.clone())
    }

    /// Value at a rational point; `None` where the denominator vanishes.
    pub fn eval(&self, w: &Rational) -> Option<Rational> {
        let d = self.den.eval(w);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(w) / d)
        }
    }

    /// Substitutes `w -> w^m`, `m >= 1`. The result stays canonical.
    pub fn substitute_power(&self, m: i32) -> Self {
        Self {
            num: self.num.substitute_power(m),
            den: self.den.substitute_power(m),
        }
    }

    /// Multiplies by `w^k`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            num: self.num.shift(k),
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::reduce(&self.den, &self.num))
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            if self.den.is_one() {
                return Self::from_laurent(num);
            }
            return Self::reduce(&num, &self.den);
        }
        let (d1, _) = Poly::from_laurent(&self.den);
        let (d2, _) = Poly::from_laurent(&other.den);
        let g = d1.gcd(&d2);
        let c1 = d2.exact_div(&g).to_laurent(0);
        let c2 = d1.exact_div(&g).to_laurent(0);
        let num = &(&self.num * &c1) + &(&other.num * &c2);
        let den = &self.den * &c1;
        Self::reduce(&num, &den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::from_laurent(&self.num * &other.num);
        }
        let (n1, s1) = Poly::from_laurent(&self.num);
        let (n2, s2) = Poly::from_laurent(&other.num);
        let (d1, _) = Poly::from_laurent(&self.den);
        let (d2, _) = Poly::from_laurent(&other.den);
        let g12 = n1.gcd(&d2);
        let g21 = n2.gcd(&d1);
        let n = n1.exact_div(&g12).mul(&n2.exact_div(&g21));
        let d = d1.exact_div(&g21).mul(&d2.exact_div(&g12));
        Self::normalized(n, s1 + s2, d)
    }

    /// `sum a_i * b_i` with a single reduction at the end.
    pub fn sum_of_products<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a WRational, &'a WRational)>,
    {
        let mut num = WLaurent::zero();
        let mut den = Poly::from_laurent(&WLaurent::one()).0;
        let mut den_l = WLaurent::one();
        for (a, b) in pairs {
            if a.is_zero() || b.is_zero() {
                continue;
            }
            let n = &a.num * &b.num;
            let d_l = if a.den.is_one() {
                b.den.clone()
            } else if b.den.is_one() {
                a.den.clone()
            } else {
                &a.den * &b.den
            };
            if d_l == den_l {
                num = &num + &n;
                continue;
            }
            let (d, _) = Poly::from_laurent(&d_l);
            let g = den.gcd(&d);
            let c_acc = d.exact_div(&g);
            let c_new = den.exact_div(&g);
            num = &(&num * &c_acc.to_laurent(0)) + &(&n * &c_new.to_laurent(0));
            den = den.mul(&c_acc);
            den_l = den.to_laurent(0);
        }
        if den_l.is_one() {
            return Self::from_laurent(num);
        }
        Self::reduce(&num, &den_l)
    }

    fn reduce(num: &WLaurent, den: &WLaurent) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if let Some(inv) = den.monomial_inverse() {
            return Self::from_laurent(num * &inv);
        }
        let (pn, sn) = Poly::from_laurent(num);
        let (pd, sd) = Poly::from_laurent(den);
        let g = pn.gcd(&pd);
        let (pn, pd) = if g.is_one() {
            (pn, pd)
        } else {
            (pn.exact_div(&g), pd.exact_div(&g))
        };
        Self::normalized(pn, sn - sd, pd)
    }

    // Scales so that `d` is monic; `d` must be coprime to `n` and to `w`.
    fn normalized(n: Poly, shift: i32, d: Poly) -> Self {
        if d.degree() == 0 {
            let inv = d.leading().recip();
            return Self::from_laurent(n.scale(&inv).to_laurent(shift));
        }
        let inv = d.leading().recip();
        Self {
            num: n.scale(&inv).to_laurent(shift),
            den: d.scale(&inv).to_laurent(0),
        }
    }
}

impl From<WLaurent> for WRational {
    fn from(l: WLaurent) -> Self {
        Self::from_laurent(l)
    }
}

impl From<Rational> for WRational {
    fn from(c: Rational) -> Self {
        Self::from_rational(c)
    }
}

impl fmt::Debug for WRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for WRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let simple_num = self.num.terms().len() == 1 && !self.num.terms()[0].1.is_negative();
        if simple_num {
            write!(f, "{}/({})", self.num, self.den)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
