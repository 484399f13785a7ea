//! Integer invariants, Poincare polynomials and Betti tables.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};

use num_traits::{Signed, ToPrimitive};
use thiserror::Error;

use crate::blowup::{Blowup, BlowupError};
use crate::geometry::{self, ChernData, DivisorClass, GeometryError, Polarization};
use crate::laurent::WLaurent;
use crate::rational::{int, rat, sign_power, Rational};
use crate::series::{Coefficient, PuiseuxSeries, QExponent, SeriesError};
use crate::wallcross::{InvariantSeries, Refined, WallCrossError, WallCrossing};
use crate::wrational::WRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("missing rational invariants of rank {rank}, c1 = {c1}")]
    MissingLowerRank { rank: u32, c1: DivisorClass },
    #[error("Betti tables cover rank 3 with c1 = -H on P^2, got rank {rank}, c1 = {c1}")]
    UnsupportedClass { rank: u32, c1: DivisorClass },
    #[error("integer invariants are only implemented up to rank 3, got {0}")]
    RankTooLarge(u32),
    #[error("(w - 1/w) w^dim Omega is not a Laurent polynomial: {0}")]
    NotPolynomial(String),
    #[error("exponent {exponent} of p(w) lies outside [0, {max}]")]
    OutOfRange { exponent: i64, max: i64 },
    #[error("Betti number b_{index} = {value} is not an integer")]
    NonInteger { index: usize, value: Rational },
    #[error("Betti number b_{index} = {value} is negative")]
    Negative { index: usize, value: Rational },
    #[error("b_{index} != b_{mirror}: Poincare duality fails")]
    NotPalindromic { index: usize, mirror: usize },
    #[error("odd Betti number b_{index} = {value} is nonzero")]
    OddBetti { index: usize, value: u64 },
    #[error("series known only up to q^({cutoff}), need q^({needed})")]
    InsufficientCutoff { cutoff: QExponent, needed: QExponent },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    WallCross(#[from] WallCrossError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// The Mobius function, by trial division.
pub fn mobius(m: u64) -> i64 {
    assert!(m > 0, "mobius of zero");
    let (mut n, mut sign, mut p) = (m, 1, 2);
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

// Divisors m > 1 of the class (r, c1): m | r and m | c1. The charge ch2
// imposes no condition at the level of generating functions, since
// `Gamma/m` at exponent e lands at exponent m e.
fn class_divisors(r: u32, c1: DivisorClass) -> Vec<u32> {
    let (a, b) = match c1 {
        DivisorClass::Ruled { c, f } => (c, f),
        DivisorClass::P2 { h } => (h, 0),
    };
    (2..=r)
        .filter(|&m| r % m == 0 && a % m as i64 == 0 && b % m as i64 == 0)
        .collect()
}

fn find_lower<'a, R>(lower: &'a [InvariantSeries<R>], rank: u32, c1: DivisorClass) -> Option<&'a InvariantSeries<R>> {
    let target = geometry::reduce_c1(rank, c1).0;
    lower
        .iter()
        .find(|s| s.rank == rank && geometry::reduce_c1(rank, s.c1).0 == target)
}

fn invert_with<R, G>(
    bar: &InvariantSeries<R>,
    lower: &[InvariantSeries<R>],
    term: G,
) -> Result<InvariantSeries<R>, InvariantsError>
where
    R: Coefficient,
    G: Fn(u32, &PuiseuxSeries<R>) -> PuiseuxSeries<R>,
{
    if bar.rank > 3 {
        return Err(InvariantsError::RankTooLarge(bar.rank));
    }
    let mut out = bar.series.clone();
    for m in class_divisors(bar.rank, bar.c1) {
        let mu = mobius(m as u64);
        if mu == 0 {
            continue;
        }
        let c1 = divide_class(bar.c1, m);
        let rank = bar.rank / m;
        let part = find_lower(lower, rank, c1).ok_or(InvariantsError::MissingLowerRank { rank, c1 })?;
        out = out.add(&term(m, &part.series).scale_rational(&int(mu)));
    }
    Ok(InvariantSeries {
        series: out,
        ..bar.clone()
    })
}

fn divide_class(c1: DivisorClass, m: u32) -> DivisorClass {
    let m = m as i64;
    match c1 {
        DivisorClass::Ruled { c, f } => DivisorClass::ruled(c / m, f / m),
        DivisorClass::P2 { h } => DivisorClass::p2(h / m),
    }
}

/// `Omega(Gamma) = sum_{m | Gamma} mu(m) Omega_bar(Gamma/m) / m^2`.
///
/// `lower` holds the rational invariants of each `Gamma/m`, `m > 1`.
pub fn omega_from_bar_unrefined(
    bar: &InvariantSeries<Rational>,
    lower: &[InvariantSeries<Rational>],
) -> Result<InvariantSeries<Rational>, InvariantsError> {
    invert_with(bar, lower, |m, s| s.scale_q(m).scale_rational(&rat(1, (m * m) as i64)))
}

/// `Omega(Gamma, w) = sum_{m | Gamma} mu(m) (-1)^(m+1) Omega_bar(Gamma/m, w^m) / m`.
pub fn omega_from_bar_refined(
    bar: &InvariantSeries<WRational>,
    lower: &[InvariantSeries<WRational>],
) -> Result<InvariantSeries<WRational>, InvariantsError> {
    invert_with(bar, lower, |m, s| {
        s.substitute_w_power(m)
            .scale_q(m)
            .scale_rational(&(sign_power(m as i64 + 1) * rat(1, m as i64)))
    })
}

/// Betti numbers `b_0, ..., b_{2 dim}` of a compact moduli space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoincarePolynomial {
    dim: u32,
    betti: Vec<u64>,
}

impl PoincarePolynomial {
    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn betti(&self) -> &[u64] {
        &self.betti
    }

    /// `b_0, b_2, ..., b_dim`, the layout of a half row.
    pub fn even_half(&self) -> Vec<u64> {
        self.betti[..=self.dim as usize].iter().step_by(2).copied().collect()
    }

    /// `p(1)`.
    pub fn euler(&self) -> u64 {
        self.betti.iter().sum()
    }
}

impl fmt::Display for PoincarePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, b) in self.betti.iter().enumerate().filter(|(_, b)| **b != 0) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{b}")?,
                1 if *b == 1 => f.write_str("s")?,
                1 => write!(f, "{b}*s")?,
                _ if *b == 1 => write!(f, "s^{i}")?,
                _ => write!(f, "{b}*s^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `p(w) = (w - 1/w) w^dim Omega(w)`, checked to be a palindromic
/// polynomial of degree `2 dim` with nonnegative integer even coefficients.
pub fn poincare_extract(omega: &WRational, dim: u32) -> Result<PoincarePolynomial, InvariantsError> {
    let factor = WRational::from_laurent(WLaurent::antisymmetric(1).shift(dim as i32));
    let p = omega.mul(&factor);
    let lp = p
        .to_laurent()
        .ok_or_else(|| InvariantsError::NotPolynomial(alloc::format!("{p}")))?;
    let top = 2 * dim as i64;
    let mut betti = alloc::vec![0u64; top as usize + 1];
    for (e, c) in lp.terms() {
        let e = *e as i64;
        if e < 0 || e > top {
            return Err(InvariantsError::OutOfRange { exponent: e, max: top });
        }
        let index = e as usize;
        if !c.is_integer() {
            return Err(InvariantsError::NonInteger { index, value: c.clone() });
        }
        if c.is_negative() {
            return Err(InvariantsError::Negative { index, value: c.clone() });
        }
        betti[index] = c.to_integer().to_u64().expect("Betti number fits in u64");
    }
    for i in 0..betti.len() {
        let mirror = betti.len() - 1 - i;
        if betti[i] != betti[mirror] {
            return Err(InvariantsError::NotPalindromic { index: i, mirror });
        }
    }
    if let Some((index, &value)) = betti.iter().enumerate().find(|(i, b)| i % 2 == 1 && **b != 0) {
        return Err(InvariantsError::OddBetti { index, value });
    }
    Ok(PoincarePolynomial { dim, betti })
}

/// `chi = p(1)`.
pub fn euler_from_refined(p: &PoincarePolynomial) -> u64 {
    p.euler()
}

/// The unrefined invariant `(-1)^dim chi`.
pub fn euler_sign(chi: i64, dim: i64) -> i64 {
    if dim.rem_euclid(2) == 0 {
        chi
    } else {
        -chi
    }
}

/// One row of a Betti table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiRow {
    pub c2: i64,
    pub dim: u32,
    /// `b_0, b_2, ..., b_dim`.
    pub half: Vec<u64>,
    pub chi: u64,
}

impl BettiRow {
    /// Euler number from the half row: twice the sum below the middle plus
    /// the middle entry.
    pub fn chi_from_half(half: &[u64]) -> u64 {
        match half.split_last() {
            Some((mid, rest)) => 2 * rest.iter().sum::<u64>() + mid,
            None => 0,
        }
    }

    /// All Betti numbers `b_0 .. b_{2 dim}`, odd ones zero.
    pub fn full(&self) -> Vec<u64> {
        let mut out = alloc::vec![0; 2 * self.dim as usize + 1];
        for (i, b) in self.half.iter().enumerate() {
            out[2 * i] = *b;
            out[2 * self.dim as usize - 2 * i] = *b;
        }
        out
    }
}

/// Betti numbers of the moduli of stable rank-3 sheaves on `P^2` with
/// `c1 = -H`, one row per `c2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiTable {
    pub rows: Vec<BettiRow>,
}

impl BettiTable {
    /// Longest half row, the number of `b` columns.
    pub fn width(&self) -> usize {
        self.rows.iter().map(|r| r.half.len()).max().unwrap_or(0)
    }

    /// `c2,b0,b2,...,chi` with empty cells past each row's middle.
    pub fn to_csv(&self) -> String {
        let width = self.width();
        let mut out = String::from("c2");
        for i in 0..width {
            let _ = write!(out, ",b{}", 2 * i);
        }
        out.push_str(",chi\n");
        for row in &self.rows {
            let _ = write!(out, "{}", row.c2);
            for i in 0..width {
                out.push(',');
                if let Some(b) = row.half.get(i) {
                    let _ = write!(out, "{b}");
                }
            }
            let _ = writeln!(out, ",{}", row.chi);
        }
        out
    }
}

/// Exponent of `q` at which the rank-3, `c1 = -H` class with second Chern
/// class `c2` sits in the generating function on `P^2`.
pub fn p2_rank3_exponent(c2: i64) -> QExponent {
    QExponent(24 * c2 - 17)
}

/// `dim_C = 6 c2 - 10` for rank 3, `c1 = -H` on `P^2`.
pub fn p2_rank3_dim(c2: i64) -> i64 {
    6 * c2 - 10
}

/// The refined generating function of rank-3, `c1 = -H` invariants on `P^2`,
/// exact through `q^cutoff`.
pub fn p2_rank3_refined(cutoff: QExponent) -> Result<InvariantSeries<WRational>, InvariantsError> {
    let h3 = WallCrossing::<Refined>::new().h3(Polarization::J10, cutoff)?;
    Ok(Blowup::<Refined>::to_p2(&h3)?.series)
}

/// Table rows for each `c2` in `c2s`, read from the refined generating
/// function `h` of rank-3, `c1 = -H` sheaves on `P^2`.
pub fn betti_table(h: &InvariantSeries<WRational>, c2s: &[i64]) -> Result<BettiTable, InvariantsError> {
    if h.rank != 3 || h.c1 != DivisorClass::p2(-1) {
        return Err(InvariantsError::UnsupportedClass { rank: h.rank, c1: h.c1 });
    }
    let mut rows = Vec::new();
    for &c2 in c2s {
        let e = p2_rank3_exponent(c2);
        if e > h.series.cutoff() {
            return Err(InvariantsError::InsufficientCutoff {
                cutoff: h.series.cutoff(),
                needed: e,
            });
        }
        let g = ChernData::from_c2(3, h.c1, int(c2))?;
        debug_assert_eq!(QExponent::from_rational(&g.generating_exponent()), Some(e));
        let dim = g.moduli_dim()?;
        let omega = h.series.coefficient(e)?;
        let p = poincare_extract(&omega, dim as u32)?;
        rows.push(BettiRow {
            c2,
            dim: dim as u32,
            half: p.even_half(),
            chi: p.euler(),
        });
    }
    Ok(BettiTable { rows })
}
