// Dense univariate polynomials over Q, used to put w-rational functions in
// lowest terms. Index i holds the coefficient of w^i; no trailing zeros.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::laurent::WLaurent;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly {
    c: Vec<Rational>,
}

impl Poly {
    pub(crate) fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    fn trimmed(mut c: Vec<Rational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub(crate) fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub(crate) fn leading(&self) -> &Rational {
        self.c.last().expect("leading coefficient of zero polynomial")
    }

    /// Splits `p` as `w^shift * poly` with `poly(0) != 0`.
    pub(crate) fn from_laurent(p: &WLaurent) -> (Poly, i32) {
        let Some(lo) = p.min_exponent() else {
            return (Poly::zero(), 0);
        };
        let hi = p.max_exponent().unwrap();
        let mut c = alloc::vec![Rational::zero(); (hi - lo + 1) as usize];
        for (e, v) in p.terms() {
            c[(e - lo) as usize] = v.clone();
        }
        (Poly { c }, lo)
    }

    pub(crate) fn to_laurent(&self, shift: i32) -> WLaurent {
        let terms = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i as i32 + shift, v.clone()))
            .collect();
        WLaurent::from_sorted_unchecked(terms)
    }

    pub(crate) fn scale(&self, s: &Rational) -> Poly {
        if s.is_zero() {
            return Poly::zero();
        }
        Poly {
            c: self.c.iter().map(|x| x * s).collect(),
        }
    }

    pub(crate) fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = self.leading().recip();
        self.scale(&inv)
    }

    pub(crate) fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut c = alloc::vec![Rational::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Poly::trimmed(c)
    }

    pub(crate) fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.c.len() < d.c.len() {
            return (Poly::zero(), self.clone());
        }
        let mut r = self.c.clone();
        let dl = d.c.len();
        let inv = d.leading().recip();
        let mut q = alloc::vec![Rational::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let top = &r[k + dl - 1];
            if top.is_zero() {
                continue;
            }
            let f = top * &inv;
            for (j, dj) in d.c.iter().enumerate() {
                if !dj.is_zero() {
                    r[k + j] -= &f * dj;
                }
            }
            q[k] = f;
        }
        r.truncate(dl - 1);
        (Poly::trimmed(q), Poly::trimmed(r))
    }

    /// Quotient of an exact division. Panics in debug builds if inexact.
    pub(crate) fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub(crate) fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a
    }

    pub(crate) fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }
}
