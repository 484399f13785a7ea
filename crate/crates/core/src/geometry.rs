//! Intersection theory and Chern data on the blown-up plane and on `P^2`.
//!
//! The blown-up plane is the ruled surface with exceptional curve `C`
//! (`C^2 = -1`) and fiber `f` (`f^2 = 0`, `C.f = 1`); its canonical class is
//! `-2C - 3f` and `H = C + f` pulls back the hyperplane class of `P^2`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::{int, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("divisor classes live on different surfaces")]
    MixedSurfaces,
    #[error("invalid polarization ({0}, {1}): need m, n >= 0, not both zero")]
    InvalidPolarization(i64, i64),
    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },
    #[error("empty moduli space expected: dimension {0} < 0")]
    EmptyModuli(Rational),
    #[error("moduli dimension {0} is not an integer")]
    NonIntegralDimension(Rational),
    #[error("rank must be positive")]
    ZeroRank,
    #[error("filtration has no quotients")]
    EmptyFiltration,
}

/// The two surfaces handled by the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Surface {
    /// The projective plane blown up in one point.
    RuledP2Tilde,
    P2,
}

impl Surface {
    /// Topological Euler characteristic.
    pub fn euler_char(self) -> i64 {
        match self {
            Surface::RuledP2Tilde => 4,
            Surface::P2 => 3,
        }
    }

    pub fn b2(self) -> i64 {
        match self {
            Surface::RuledP2Tilde => 2,
            Surface::P2 => 1,
        }
    }

    /// Holomorphic Euler characteristic `chi(O_S)`.
    pub fn holo_euler(self) -> i64 {
        1
    }

    pub fn canonical(self) -> DivisorClass {
        match self {
            Surface::RuledP2Tilde => DivisorClass::ruled(-2, -3),
            Surface::P2 => DivisorClass::p2(-3),
        }
    }

    pub fn zero_class(self) -> DivisorClass {
        match self {
            Surface::RuledP2Tilde => DivisorClass::ruled(0, 0),
            Surface::P2 => DivisorClass::p2(0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Surface::RuledP2Tilde => "ruled",
            Surface::P2 => "p2",
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An integral divisor class: `cC + ff` on the ruled surface or `hH` on `P^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisorClass {
    Ruled { c: i64, f: i64 },
    P2 { h: i64 },
}

impl DivisorClass {
    pub const fn ruled(c: i64, f: i64) -> Self {
        DivisorClass::Ruled { c, f }
    }

    pub const fn p2(h: i64) -> Self {
        DivisorClass::P2 { h }
    }

    pub fn surface(self) -> Surface {
        match self {
            DivisorClass::Ruled { .. } => Surface::RuledP2Tilde,
            DivisorClass::P2 { .. } => Surface::P2,
        }
    }

    pub fn intersect(self, other: DivisorClass) -> Result<i64, GeometryError> {
        match (self, other) {
            (DivisorClass::Ruled { c: c1, f: f1 }, DivisorClass::Ruled { c: c2, f: f2 }) => {
                Ok(-c1 * c2 + c1 * f2 + f1 * c2)
            }
            (DivisorClass::P2 { h: h1 }, DivisorClass::P2 { h: h2 }) => Ok(h1 * h2),
            _ => Err(GeometryError::MixedSurfaces),
        }
    }

    /// Self-intersection.
    pub fn square(self) -> i64 {
        self.intersect(self).expect("same surface")
    }

    pub fn add(self, other: DivisorClass) -> Result<DivisorClass, GeometryError> {
        match (self, other) {
            (DivisorClass::Ruled { c: c1, f: f1 }, DivisorClass::Ruled { c: c2, f: f2 }) => {
                Ok(DivisorClass::ruled(c1 + c2, f1 + f2))
            }
            (DivisorClass::P2 { h: h1 }, DivisorClass::P2 { h: h2 }) => Ok(DivisorClass::p2(h1 + h2)),
            _ => Err(GeometryError::MixedSurfaces),
        }
    }

    pub fn scale(self, k: i64) -> DivisorClass {
        match self {
            DivisorClass::Ruled { c, f } => DivisorClass::ruled(k * c, k * f),
            DivisorClass::P2 { h } => DivisorClass::p2(k * h),
        }
    }

    pub fn sub(self, other: DivisorClass) -> Result<DivisorClass, GeometryError> {
        self.add(other.scale(-1))
    }

    pub fn is_zero(self) -> bool {
        matches!(self, DivisorClass::Ruled { c: 0, f: 0 } | DivisorClass::P2 { h: 0 })
    }

    /// Parses `"bC+af"`-style classes (`"-C-f"`, `"C-3f"`, `"2C"`, `"-H"`,
    /// `"0"`). A bare `"0"` is placed on `surface`.
    pub fn parse(s: &str, surface: Surface) -> Result<DivisorClass, GeometryError> {
        let err = || GeometryError::Parse {
            kind: "divisor class",
            input: s.to_string(),
        };
        let compact: String = s.chars().filter(|ch| !ch.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let (mut c, mut f, mut h) = (0i64, 0i64, 0i64);
        let (mut seen_ruled, mut seen_p2) = (false, false);
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = 1;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                if bytes[i] == b'-' {
                    sign = -1;
                }
                i += 1;
            } else if i > 0 {
                return Err(err());
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let digits = &compact[start..i];
            let coeff = if digits.is_empty() {
                None
            } else {
                Some(digits.parse::<i64>().map_err(|_| err())?)
            };
            let target = match bytes.get(i) {
                Some(b'C') => {
                    seen_ruled = true;
                    &mut c
                }
                Some(b'f') => {
                    seen_ruled = true;
                    &mut f
                }
                Some(b'H') => {
                    seen_p2 = true;
                    &mut h
                }
                Some(b'+') | Some(b'-') | None => {
                    // Bare integer term: only zero is meaningful.
                    if coeff != Some(0) {
                        return Err(err());
                    }
                    continue;
                }
                _ => return Err(err()),
            };
            i += 1;
            *target += sign * coeff.unwrap_or(1);
        }
        match (seen_ruled, seen_p2) {
            (true, true) => Err(err()),
            (true, false) => Ok(DivisorClass::ruled(c, f)),
            (false, true) => Ok(DivisorClass::p2(h)),
            (false, false) => Ok(surface.zero_class()),
        }
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, coeff: i64, symbol: &str, first: bool) -> fmt::Result {
    if coeff == 0 {
        return Ok(());
    }
    if coeff < 0 {
        f.write_str("-")?;
    } else if !first {
        f.write_str("+")?;
    }
    if coeff.abs() != 1 {
        write!(f, "{}", coeff.abs())?;
    }
    f.write_str(symbol)
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        match *self {
            DivisorClass::Ruled { c, f: fc } => {
                write_term(f, c, "C", true)?;
                write_term(f, fc, "f", c == 0)
            }
            DivisorClass::P2 { h } => write_term(f, h, "H", true),
        }
    }
}

/// `J_{m,n} = m(C + f) + nf` on the ruled surface, `m, n >= 0` not both 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Polarization {
    m: i64,
    n: i64,
}

impl Polarization {
    pub fn new(m: i64, n: i64) -> Result<Self, GeometryError> {
        if m < 0 || n < 0 || (m == 0 && n == 0) {
            return Err(GeometryError::InvalidPolarization(m, n));
        }
        Ok(Self { m, n })
    }

    /// `J_{1,0} = C + f`, the pullback of the hyperplane class.
    pub const J10: Polarization = Polarization { m: 1, n: 0 };
    /// `J_{0,1} = f`, the fiber class.
    pub const J01: Polarization = Polarization { m: 0, n: 1 };

    pub fn m(self) -> i64 {
        self.m
    }

    pub fn n(self) -> i64 {
        self.n
    }

    pub fn class(self) -> DivisorClass {
        DivisorClass::ruled(self.m, self.m + self.n)
    }

    /// True for `m, n >= 1`.
    pub fn is_interior(self) -> bool {
        self.m >= 1 && self.n >= 1
    }

    /// `D.J` for a ruled class `D`.
    pub fn degree(self, d: DivisorClass) -> Result<i64, GeometryError> {
        d.intersect(self.class())
    }
}

impl FromStr for Polarization {
    type Err = GeometryError;

    /// Parses `"m,n"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GeometryError::Parse {
            kind: "polarization",
            input: s.to_string(),
        };
        let (m, n) = s.split_once(',').ok_or_else(err)?;
        let m = m.trim().parse::<i64>().map_err(|_| err())?;
        let n = n.trim().parse::<i64>().map_err(|_| err())?;
        Polarization::new(m, n)
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.m, self.n)
    }
}

/// Chern data `(r, c1, ch2)` of a sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChernData {
    pub r: u32,
    pub c1: DivisorClass,
    pub ch2: Rational,
}

impl ChernData {
    pub fn new(r: u32, c1: DivisorClass, ch2: Rational) -> Result<Self, GeometryError> {
        if r == 0 {
            return Err(GeometryError::ZeroRank);
        }
        Ok(Self { r, c1, ch2 })
    }

    /// Chern data with second Chern class `c2`, i.e. `ch2 = c1^2/2 - c2`.
    pub fn from_c2(r: u32, c1: DivisorClass, c2: Rational) -> Result<Self, GeometryError> {
        let ch2 = rat(c1.square(), 2) - c2;
        Self::new(r, c1, ch2)
    }

    pub fn surface(&self) -> Surface {
        self.c1.surface()
    }

    pub fn c2(&self) -> Rational {
        rat(self.c1.square(), 2) - &self.ch2
    }

    /// `Delta = (c2 - (r-1)/(2r) c1^2) / r`.
    pub fn discriminant(&self) -> Rational {
        let r = self.r as i64;
        (self.c2() - rat((r - 1) * self.c1.square(), 2 * r)) / int(r)
    }

    /// Componentwise sum of Chern characters.
    pub fn add(&self, other: &ChernData) -> Result<ChernData, GeometryError> {
        Ok(ChernData {
            r: self.r + other.r,
            c1: self.c1.add(other.c1)?,
            ch2: &self.ch2 + &other.ch2,
        })
    }

    /// `dim_C M = 2 r^2 Delta - r^2 chi(O_S) + 1`.
    pub fn moduli_dim(&self) -> Result<i64, GeometryError> {
        let r = self.r as i64;
        let s = self.surface();
        let d = int(2 * r * r) * self.discriminant() - int(r * r * s.holo_euler()) + int(1);
        if d.is_negative() {
            return Err(GeometryError::EmptyModuli(d));
        }
        if !d.is_integer() {
            return Err(GeometryError::NonIntegralDimension(d));
        }
        Ok(i64::try_from(d.to_integer()).expect("dimension fits in i64"))
    }

    /// Exponent `r Delta - r chi(S)/24` of this class in its generating function.
    pub fn generating_exponent(&self) -> Rational {
        let r = self.r as i64;
        int(r) * self.discriminant() - rat(r * self.surface().euler_char(), 24)
    }
}

/// `r1 c1(E2) - r2 c1(E1) = r1 r2 (mu2 - mu1)`.
pub fn charge_difference(g1: &ChernData, g2: &ChernData) -> Result<DivisorClass, GeometryError> {
    g2.c1.scale(g1.r as i64).sub(g1.c1.scale(g2.r as i64))
}

/// `<G1, G2> = r1 r2 (mu2 - mu1) . K_S`.
pub fn pairing_k(g1: &ChernData, g2: &ChernData) -> Result<i64, GeometryError> {
    let d = charge_difference(g1, g2)?;
    d.intersect(d.surface().canonical())
}

/// `I(G1, G2; J) = r1 r2 (mu2 - mu1) . J`.
pub fn degree_j(g1: &ChernData, g2: &ChernData, j: Polarization) -> Result<i64, GeometryError> {
    j.degree(charge_difference(g1, g2)?)
}

/// Discriminant of a sheaf with a filtration whose successive quotients are
/// `quotients`:
/// `sum (r_i/r) Delta_i - 1/(2r) sum_{i>=2} r(F_{i-1}) r(F_i) / r_i (mu(F_{i-1}) - mu(F_i))^2`
/// where `F_i` is the `i`-th partial sum.
pub fn filtration_discriminant(quotients: &[ChernData]) -> Result<Rational, GeometryError> {
    let first = quotients.first().ok_or(GeometryError::EmptyFiltration)?;
    let mut partial = first.clone();
    let mut partials = alloc::vec![partial.clone()];
    for q in &quotients[1..] {
        partial = partial.add(q)?;
        partials.push(partial.clone());
    }
    let r = partial.r as i64;
    let mut delta = Rational::zero();
    for q in quotients {
        delta += rat(q.r as i64, r) * q.discriminant();
    }
    for i in 1..quotients.len() {
        let (prev, cur) = (&partials[i - 1], &partials[i]);
        let (rp, rc) = (prev.r as i64, cur.r as i64);
        // (mu_prev - mu_cur)^2 = (rc c1_prev - rp c1_cur)^2 / (rp rc)^2
        let d = prev.c1.scale(rc).sub(cur.c1.scale(rp))?;
        let sq = rat(d.square(), rp * rp * rc * rc);
        delta -= rat(rp * rc, 2 * r * quotients[i].r as i64) * sq;
    }
    Ok(delta)
}

/// Reduces `c1` modulo `r H_2(S, Z)` to the representative with every
/// component in `(-r, 0]`, returning `(representative, shift)` with
/// `c1 = representative + shift`.
pub fn reduce_c1(r: u32, c1: DivisorClass) -> (DivisorClass, DivisorClass) {
    let r = r as i64;
    let red = |x: i64| -((-x).rem_euclid(r));
    let rep = match c1 {
        DivisorClass::Ruled { c, f } => DivisorClass::ruled(red(c), red(f)),
        DivisorClass::P2 { h } => DivisorClass::p2(red(h)),
    };
    let shift = c1.sub(rep).expect("same surface");
    (rep, shift)
}

/// Splittings of `(r, c1)` on the ruled surface into a rank `r - r2` piece
/// `E1` and a rank `r2` piece `E2` with `c1(E2) = bC - af`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitFamily {
    pub r: u32,
    pub r2: u32,
    pub c1: DivisorClass,
}

impl SplitFamily {
    /// Rank 2 with `c1 = -C - alpha f`, split into two rank-1 pieces.
    pub fn rank2(alpha: i64) -> Self {
        SplitFamily {
            r: 2,
            r2: 1,
            c1: DivisorClass::ruled(-1, -alpha),
        }
    }

    /// Rank 3 with `c1 = -C - f`, split as rank 1 plus rank 2.
    pub fn rank3() -> Self {
        SplitFamily {
            r: 3,
            r2: 2,
            c1: DivisorClass::ruled(-1, -1),
        }
    }

    pub fn r1(&self) -> u32 {
        self.r - self.r2
    }

    /// `(B, A)` with `r c1(E2) - r2 c1 = BC - Af`.
    pub fn charges(&self, a: i64, b: i64) -> (i64, i64) {
        let DivisorClass::Ruled { c: x, f: y } = self.c1 else {
            panic!("split families live on the ruled surface");
        };
        let (r, r2) = (self.r as i64, self.r2 as i64);
        (r * b - r2 * x, r * a + r2 * y)
    }

    /// `r r1 r2`, the normalization of the q-shift.
    pub fn norm(&self) -> i64 {
        (self.r * self.r1() * self.r2) as i64
    }

    /// q-shift `(B^2 + 2AB) / (2 r r1 r2)` of the `(a, b)` term.
    pub fn q_shift(&self, big_b: i64, big_a: i64) -> Rational {
        rat(big_b * big_b + 2 * big_a * big_b, 2 * self.norm())
    }

    /// All walls with `AB > 0` and q-shift at most `delta_max`, sorted by
    /// the ratio `m/n` of the wall locus (ties broken by `(a, b)`).
    pub fn walls(&self, delta_max: &Rational) -> Vec<Wall> {
        if delta_max.is_negative() {
            return Vec::new();
        }
        // B^2 <= B^2 + 2AB <= 2 r r1 r2 delta_max.
        let bound = int(2 * self.norm()) * delta_max;
        let b_max = bound.floor().to_integer();
        let b_max = i64::try_from(b_max).unwrap_or(i64::MAX / 4);
        let mut big_b_max = 0i64;
        while (big_b_max + 1) * (big_b_max + 1) <= b_max {
            big_b_max += 1;
        }
        let r = self.r as i64;
        let range = big_b_max / r + 2;
        let a_range = (b_max / r).max(1) + 2;
        let mut out = Vec::new();
        for b in -range..=range {
            for a in -a_range..=a_range {
                let (big_b, big_a) = self.charges(a, b);
                if big_b * big_a <= 0 {
                    continue;
                }
                let shift = self.q_shift(big_b, big_a);
                if &shift > delta_max {
                    continue;
                }
                let e2 = DivisorClass::ruled(b, -a);
                let e1 = self.c1.sub(e2).expect("same surface");
                let g = big_b.abs().gcd(&big_a.abs());
                out.push(Wall {
                    a,
                    b,
                    big_a,
                    big_b,
                    ratio: (big_b.abs() / g, big_a.abs() / g),
                    q_shift: shift,
                    pairing: -big_b + 2 * big_a,
                    c1_e1: e1,
                    c1_e2: e2,
                    ranks: (self.r1(), self.r2),
                });
            }
        }
        out.sort_by(|x, y| match (x.ratio.0 * y.ratio.1).cmp(&(y.ratio.0 * x.ratio.1)) {
            Ordering::Equal => (x.a, x.b).cmp(&(y.a, y.b)),
            o => o,
        });
        out
    }
}

/// A wall `m/n = B/A` of marginal stability for one splitting `(a, b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub a: i64,
    pub b: i64,
    pub big_a: i64,
    pub big_b: i64,
    /// `(m, n)` in lowest terms with `I(G1, G2; J_{m,n}) = 0`.
    pub ratio: (i64, i64),
    pub q_shift: Rational,
    /// `<G1, G2>`.
    pub pairing: i64,
    pub c1_e1: DivisorClass,
    pub c1_e2: DivisorClass,
    pub ranks: (u32, u32),
}

impl Wall {
    /// The polarization on the wall.
    pub fn polarization(&self) -> Polarization {
        Polarization::new(self.ratio.0, self.ratio.1).expect("ratio in the open quadrant")
    }

    /// `I(G1, G2; J) = Bn - Am`.
    pub fn degree(&self, j: Polarization) -> i64 {
        self.big_b * j.n() - self.big_a * j.m()
    }
}

/// Walls of the family with q-shift at most `delta_max`.
pub fn walls_for(family: &SplitFamily, delta_max: &Rational) -> Vec<Wall> {
    family.walls(delta_max)
}
