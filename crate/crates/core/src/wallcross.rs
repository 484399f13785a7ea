//! Generating functions of rank 1, 2 and 3 sheaf invariants on the blown-up
//! plane in any chamber of the ample cone, unrefined and refined.
//!
//! Rank 2 generating functions come from two independent routes: the double
//! sum over splittings starting from the fiber boundary `J_{0,1}` where they
//! vanish, and closed forms at `J_{1,0}` plus the wall-crossing jump from
//! `J_{1,0}`. Rank 3 uses the splitting sum with the rank-2 factor evaluated
//! on each wall.
//!
//! Sign convention: `sgn(0) = 0`, so a polarization sitting on a wall gives
//! the average of the two adjacent chambers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::marker::PhantomData;

use thiserror::Error;

use crate::geometry::{self, ChernData, DivisorClass, GeometryError, Polarization, SplitFamily, Surface};
use crate::laurent::WLaurent;
use crate::modular::{self, HurwitzCache, ModularError};
use crate::rational::{int, rat, sign_power, Rational};
use crate::series::{Coefficient, PuiseuxSeries, QExponent, SeriesError, LATTICE_DEN};
use crate::wrational::WRational;

// Headroom added to every intermediate cutoff. Prefactors have leading
// exponents no lower than -8/24, so four units of q cover all products.
const MARGIN: QExponent = QExponent(4 * LATTICE_DEN);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WallCrossError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("wall sum diverges: infinitely many splittings with B = 0 cross between {0} and {1}")]
    Divergent(Polarization, Polarization),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("internal precision loss: reached q^({reached}) but q^({wanted}) was requested")]
    Precision { reached: QExponent, wanted: QExponent },
}

/// Unrefined (Euler number) or refined (Poincare polynomial) invariants.
pub trait Flavor {
    type Coeff: Coefficient;
    const REFINED: bool;

    fn lift(s: &PuiseuxSeries<Rational>) -> PuiseuxSeries<Self::Coeff>;

    /// Weight of a primitive wall crossing with pairing `k`:
    /// `(-1)^k k` unrefined, `-(w^k - w^-k)` refined.
    fn kernel(k: i64) -> Self::Coeff;

    /// `h_1` on `surface`, exact through `cutoff`.
    fn h1_series(surface: Surface, cutoff: QExponent) -> Result<PuiseuxSeries<Self::Coeff>, WallCrossError>;

    /// Closed form for `h_{2, beta C - alpha f}(J_{1,0})`.
    fn h2_seed_series(
        beta: i64,
        alpha: i64,
        cutoff: QExponent,
        hurwitz: &HurwitzCache,
    ) -> Result<PuiseuxSeries<Self::Coeff>, WallCrossError>;

    /// Blow-up factor `B_{r,k}`.
    fn blowup_factor(r: u32, k: i64, cutoff: QExponent) -> Result<PuiseuxSeries<Self::Coeff>, ModularError>;
}

/// Euler numbers: coefficients in `Q`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Unrefined;

/// Poincare polynomials: coefficients in `Q(w)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Refined;

impl Flavor for Unrefined {
    type Coeff = Rational;
    const REFINED: bool = false;

    fn lift(s: &PuiseuxSeries<Rational>) -> PuiseuxSeries<Rational> {
        s.clone()
    }

    fn kernel(k: i64) -> Rational {
        sign_power(k) * int(k)
    }

    fn h1_series(surface: Surface, cutoff: QExponent) -> Result<PuiseuxSeries<Rational>, WallCrossError> {
        Ok(modular::eta_power(-(surface.euler_char() as i32), cutoff))
    }

    /// `h_{2,-C-f} = 3 th_0 h_1 / eta^6`, `h_{2,-C} = 3 th_1 h_0 / eta^6`,
    /// `h_{2,-f} = -3 th_1 h_1 / eta^6`, `h_{2,0} = -3 th_0 h_0 / eta^6`, where
    /// `th_k = theta_quotient_2(k)` and `h_j` are the class number series.
    fn h2_seed_series(
        beta: i64,
        alpha: i64,
        cutoff: QExponent,
        hurwitz: &HurwitzCache,
    ) -> Result<PuiseuxSeries<Rational>, WallCrossError> {
        let c = cutoff + MARGIN;
        let k = (beta + alpha).rem_euclid(2);
        let sign = if beta.rem_euclid(2) == 1 { 3 } else { -3 };
        let th = modular::theta_quotient_2(k, c);
        let h = hurwitz.hclass_series(alpha.rem_euclid(2) as u32, c)?;
        let out = th.mul(&h).mul(&modular::eta_power(-6, c)).scale_rational(&int(sign));
        ensure_cutoff(out, cutoff)
    }

    fn blowup_factor(r: u32, k: i64, cutoff: QExponent) -> Result<PuiseuxSeries<Rational>, ModularError> {
        modular::blowup_factor(r, k, cutoff)
    }
}

impl Flavor for Refined {
    type Coeff = WRational;
    const REFINED: bool = true;

    fn lift(s: &PuiseuxSeries<Rational>) -> PuiseuxSeries<WRational> {
        s.to_wrational()
    }

    fn kernel(k: i64) -> WRational {
        WRational::from_laurent(-&WLaurent::antisymmetric(k as i32))
    }

    /// `1 / (theta1_tilde(2z) eta)` on the ruled surface.
    fn h1_series(surface: Surface, cutoff: QExponent) -> Result<PuiseuxSeries<WRational>, WallCrossError> {
        if surface != Surface::RuledP2Tilde {
            return Err(WallCrossError::Unsupported("refined rank-1 series on P^2"));
        }
        let c = cutoff + MARGIN;
        let denom = modular::theta1_tilde_2z(c).mul(&modular::eta(c).to_wrational());
        ensure_cutoff(denom.invert()?, cutoff)
    }

    /// `B_{2,k}(z) g_alpha / theta1_tilde(2z)^2` with `k = beta + alpha mod 2`,
    /// `g_1` for `alpha = 1` and `g_0` for `alpha = 0`.
    fn h2_seed_series(
        beta: i64,
        alpha: i64,
        cutoff: QExponent,
        _hurwitz: &HurwitzCache,
    ) -> Result<PuiseuxSeries<WRational>, WallCrossError> {
        let c = cutoff + MARGIN;
        let k = (beta + alpha).rem_euclid(2);
        let g = if alpha.rem_euclid(2) == 1 { modular::g1(c) } else { modular::g0(c) };
        let t = modular::theta1_tilde_2z(c);
        let inv_t2 = t.mul(&t).invert()?;
        let b = modular::blowup_factor_refined(2, k, c)?;
        ensure_cutoff(b.mul(&g).mul(&inv_t2), cutoff)
    }

    fn blowup_factor(r: u32, k: i64, cutoff: QExponent) -> Result<PuiseuxSeries<WRational>, ModularError> {
        modular::blowup_factor_refined(r, k, cutoff)
    }
}

fn ensure_cutoff<R: Coefficient>(s: PuiseuxSeries<R>, cutoff: QExponent) -> Result<PuiseuxSeries<R>, WallCrossError> {
    if s.cutoff() < cutoff {
        return Err(WallCrossError::Precision {
            reached: s.cutoff(),
            wanted: cutoff,
        });
    }
    Ok(s.truncate(cutoff))
}

fn sgn(x: i64) -> i64 {
    x.signum()
}

/// A generating function together with the class it counts.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSeries<R> {
    pub rank: u32,
    pub c1: DivisorClass,
    /// `None` on `P^2`, where there is no chamber structure.
    pub polarization: Option<Polarization>,
    pub refined: bool,
    pub series: PuiseuxSeries<R>,
}

impl<R: Coefficient> InvariantSeries<R> {
    pub fn surface(&self) -> Surface {
        self.c1.surface()
    }

    /// The rational invariant of the class with second Chern class `c2`,
    /// read off at exponent `r Delta - r chi(S)/24`.
    pub fn omega_bar(&self, c2: &Rational) -> Result<R, WallCrossError> {
        let g = ChernData::from_c2(self.rank, self.c1, c2.clone())?;
        let e = QExponent::from_rational(&g.generating_exponent()).ok_or(WallCrossError::Unsupported(
            "generating exponent off the 1/24 lattice",
        ))?;
        Ok(self.series.coefficient(e)?)
    }
}

/// One splitting `(a, b)` contributing to a wall-crossing sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallTerm {
    pub a: i64,
    pub b: i64,
    pub big_a: i64,
    pub big_b: i64,
    /// `(sgn I(J) - sgn I(J_ref)) / 2`.
    pub sgn_weight: Rational,
    /// `<G1, G2>`.
    pub k_pairing: i64,
    pub q_shift: QExponent,
}

/// All splittings of `family` whose weight between `j_ref` and `j` is
/// nonzero and whose q-shift is at most `max_shift`.
///
/// `j_ref` must be one of the boundary polarizations `J_{1,0}`, `J_{0,1}`;
/// then every contributing term has `AB >= 0`, which bounds the search.
pub fn wall_terms(
    family: &SplitFamily,
    j: Polarization,
    j_ref: Polarization,
    max_shift: QExponent,
) -> Result<Vec<WallTerm>, WallCrossError> {
    if j_ref != Polarization::J10 && j_ref != Polarization::J01 {
        return Err(WallCrossError::Unsupported("reference polarization must be J_{1,0} or J_{0,1}"));
    }
    let norm = family.norm();
    let twice = 2 * norm;
    // shift (24ths) = 24 (B^2 + 2AB) / (2 r r1 r2)
    let scale = LATTICE_DEN;
    assert_eq!(scale % twice, 0, "q-shifts must lie on the lattice");
    let per = scale / twice;
    let e_max = max_shift.numerator();
    if e_max < 0 {
        return Ok(Vec::new());
    }
    // B^2 <= B^2 + 2AB <= e_max / per, |A| <= (e_max / per) / (2|B|) for B != 0.
    let quad_max = e_max / per;
    let mut big_b_max = 0;
    while (big_b_max + 1) * (big_b_max + 1) <= quad_max {
        big_b_max += 1;
    }
    let DivisorClass::Ruled { c: x, f: y } = family.c1 else {
        return Err(WallCrossError::Unsupported("split families live on the ruled surface"));
    };
    let (r, r2) = (family.r as i64, family.r2 as i64);
    let mut out = Vec::new();
    let b_lo = (-big_b_max + r2 * x).div_euclid(r) - 1;
    let b_hi = (big_b_max + r2 * x).div_euclid(r) + 1;
    for b in b_lo..=b_hi {
        let big_b = r * b - r2 * x;
        if big_b.abs() > big_b_max {
            continue;
        }
        let a_span = if big_b == 0 { 2 } else { quad_max / (2 * big_b.abs()) + 1 };
        let a_lo = (-a_span - r2 * y).div_euclid(r) - 1;
        let a_hi = (a_span - r2 * y).div_euclid(r) + 1;
        for a in a_lo..=a_hi {
            let big_a = r * a + r2 * y;
            let i_j = big_b * j.n() - big_a * j.m();
            let i_ref = big_b * j_ref.n() - big_a * j_ref.m();
            let w2 = sgn(i_j) - sgn(i_ref);
            if w2 == 0 {
                continue;
            }
            if big_b == 0 {
                if big_a != 0 {
                    return Err(WallCrossError::Divergent(j_ref, j));
                }
                continue;
            }
            let quad = big_b * big_b + 2 * big_a * big_b;
            debug_assert!(big_a * big_b >= 0);
            let e = per * quad;
            if e > e_max {
                continue;
            }
            out.push(WallTerm {
                a,
                b,
                big_a,
                big_b,
                sgn_weight: rat(w2, 2),
                k_pairing: -big_b + 2 * big_a,
                q_shift: QExponent(e),
            });
        }
    }
    Ok(out)
}

/// Wall-crossing machinery for one flavor. Holds the Hurwitz numbers used by
/// the unrefined closed forms.
#[derive(Debug, Clone)]
pub struct WallCrossing<F> {
    hurwitz: HurwitzCache,
    flavor: PhantomData<F>,
}

impl<F: Flavor> Default for WallCrossing<F> {
    fn default() -> Self {
        Self::new()
    }
}

// Pieces shared by every rank-2 evaluation at one cutoff: the closed forms at
// J_{1,0} and the prefactor h1^2 / 2 of the splitting sums.
struct Rank2Kit<R> {
    half_h1_sq: PuiseuxSeries<R>,
    seeds: BTreeMap<(i64, i64), PuiseuxSeries<R>>,
}

impl<F: Flavor> WallCrossing<F> {
    pub fn new() -> Self {
        Self::with_hurwitz(HurwitzCache::from_values(Vec::new()))
    }

    pub fn with_hurwitz(hurwitz: HurwitzCache) -> Self {
        Self {
            hurwitz,
            flavor: PhantomData,
        }
    }

    fn wrap(
        &self,
        rank: u32,
        c1: DivisorClass,
        polarization: Option<Polarization>,
        series: PuiseuxSeries<F::Coeff>,
    ) -> InvariantSeries<F::Coeff> {
        InvariantSeries {
            rank,
            c1,
            polarization,
            refined: F::REFINED,
            series,
        }
    }

    /// `h_1`: `1/eta^chi(S)` unrefined, `1/(theta1_tilde(2z) eta)` refined
    /// (ruled surface only).
    pub fn h1(&self, surface: Surface, cutoff: QExponent) -> Result<InvariantSeries<F::Coeff>, WallCrossError> {
        let s = F::h1_series(surface, cutoff)?;
        let pol = (surface == Surface::RuledP2Tilde).then_some(Polarization::J10);
        Ok(self.wrap(1, surface.zero_class(), pol, s))
    }

    // sum over terms of weight * kernel * q^shift * extra(term), exact
    // through `cutoff`.
    fn term_sum<G>(&self, terms: &[WallTerm], cutoff: QExponent, mut extra: G) -> Result<PuiseuxSeries<F::Coeff>, WallCrossError>
    where
        G: FnMut(&WallTerm, QExponent) -> Result<Option<PuiseuxSeries<F::Coeff>>, WallCrossError>,
    {
        let mut monomials = Vec::new();
        let mut acc = PuiseuxSeries::zero(cutoff);
        for t in terms {
            let c = F::kernel(t.k_pairing).scale(&t.sgn_weight);
            match extra(t, cutoff - t.q_shift)? {
                None => monomials.push((t.q_shift, c)),
                Some(s) => acc = acc.add(&s.scale(&c).shift(t.q_shift)),
            }
        }
        Ok(acc.add(&PuiseuxSeries::from_terms(monomials, cutoff)))
    }

    fn half_h1_sq(&self, cutoff: QExponent) -> Result<PuiseuxSeries<F::Coeff>, WallCrossError> {
        let h1 = F::h1_series(Surface::RuledP2Tilde, cutoff + MARGIN)?;
        let half = F::Coeff::from_rational(rat(1, 2));
        ensure_cutoff(h1.mul(&h1).scale(&half), cutoff)
    }

    // h1^2/2 * sum, exact through cutoff.
    fn rank2_from_terms(&self, terms: &[WallTerm], cutoff: QExponent) -> Result<PuiseuxSeries<F::Coeff>, WallCrossError> {
        let sum = self.term_sum(terms, cutoff + MARGIN, |_, _| Ok(None))?;
        let pre = self.half_h1_sq(cutoff + MARGIN)?;
        ensure_cutoff(pre.mul(&sum), cutoff)
    }

    /// `h_{2,-C-alpha f}(J)` from the splitting sum anchored at `J_{0,1}`:
    /// `(1/2) h1^2 sum_{a,b} (sgn I(J) - sgn I(J_{0,1}))/2 kernel(<G1,G2>) q^shift`.
    pub fn h2_from_boundary(&self, alpha: i64, j: Polarization, cutoff: QExponent) -> Result<InvariantSeries<F::Coeff>, WallCrossError> {
        let family = SplitFamily::rank2(alpha.rem_euclid(2));
        let terms = wall_terms(&family, j, Polarization::J01, cutoff + MARGIN + MARGIN)?;
        let s = self.rank2_from_terms(&terms, cutoff)?;
        Ok(self.wrap(2, family.c1, Some(j), s))
    }

    /// Closed form for `h_{2,c1}(J_{1,0})`, `c1` reduced to one of
    /// `-C-f`, `-C`, `-f`, `0`.
    pub fn h2_seed_j10(&self, c1: DivisorClass, cutoff: QExponent) -> Result<InvariantSeries<F::Coeff>, WallCrossError> {
        let (beta, alpha) = rank2_class(c1)?;
        let s = F::h2_seed_series(beta, alpha, cutoff, &self.hurwitz)?;
        Ok(self.wrap(2, geometry::reduce_c1(2, c1).0, Some(Polarization::J10), s))
    }

    /// Jump of `h_{2, beta C - alpha f}` from `J_{1,0}` to `j`:
    /// `(1/2) h1^2 sum_{a,b} (sgn I(J) - sgn I(J_{1,0}))/2 kernel(<G1,G2>) q^shift`.
    pub fn delta_h2(&self, beta: i64, alpha: i64, j: Polarization, cutoff: QExponent) -> Result<InvariantSeries<F::Coeff>, WallCrossError> {
        let family = rank2_family(beta, alpha);
        let terms = wall_terms(&family, j, Polarization::J10, cutoff + MARGIN + MARGIN)?;
        let s = self.rank2_from_terms(&terms, cutoff)?;
        Ok(self.wrap(2, family.c1, Some(j), s))
    }

    /// `h_{2,c1}(J)` for any integral `c1`, as closed form plus jump.
    pub fn h2_at(&self, c1: DivisorClass, j: Polarization, cutoff: QExponent) -> Result<InvariantSeries<F::Coeff>, WallCrossError> {
        let (beta, alpha) = rank2_class(c1)?;
        let seed = self.h2_seed_j10(c1, cutoff)?;
        let delta = self.delta_h2(beta, alpha, j, cutoff)?;
        Ok(self.wrap(2, seed.c1, Some(j), seed.series.add(&delta.series)))
    }

    fn rank2_kit(&self, cutoff: QExponent) -> Result<Rank2Kit<F::Coeff>, WallCrossError> {
        let mut seeds = BTreeMap::new();
        for beta in 0..2 {
            for alpha in 0..2 {
                seeds.insert((beta, alpha), F::h2_seed_series(beta, alpha, cutoff, &self.hurwitz)?);
            }
        }
        Ok(Rank2Kit {
            half_h1_sq: self.half_h1_sq(cutoff)?,
            seeds,
        })
    }

    /// `h_{3,-C-f}(J) = h1 sum_{a,b} (sgn I(J) - sgn I(J_{0,1}))/2 kernel(<G1,G2>)
    /// q^shift h_{2,bC-af}(J_{|3b+2|,|3a-2|})`, the rank-2 factor taken on the
    /// wall of the term.
    pub fn h3(&self, j: Polarization, cutoff: QExponent) -> Result<InvariantSeries<F::Coeff>, WallCrossError> {
        let family = SplitFamily::rank3();
        let c1 = family.c1;
        // The rank-2 factors start at q^(-1/3) or later and h1 at q^(-1/6).
        let lowest_h2 = QExponent(-8);
        let t_cut = cutoff + QExponent(4) + MARGIN;
        let terms = wall_terms(&family, j, Polarization::J01, t_cut - lowest_h2)?;
        if terms.is_empty() {
            return Ok(self.wrap(3, c1, Some(j), PuiseuxSeries::zero(cutoff)));
        }
        let kit = self.rank2_kit(t_cut + MARGIN)?;

        // T = sum_t c_t q^s_t (seed_t + h1^2/2 S_t)
        //   = sum_class seed_class P_class + (h1^2/2) Q.
        let mut per_class: BTreeMap<(i64, i64), Vec<(QExponent, F::Coeff)>> = BTreeMap::new();
        let mut q_terms: Vec<(QExponent, F::Coeff)> = Vec::new();
        let q_cut = t_cut - lowest_h2;
        for t in &terms {
            let c = F::kernel(t.k_pairing).scale(&t.sgn_weight);
            let (beta, alpha) = (t.b.rem_euclid(2), t.a.rem_euclid(2));
            per_class.entry((beta, alpha)).or_default().push((t.q_shift, c.clone()));
            let wall = Polarization::new(t.big_b.abs(), t.big_a.abs())?;
            let sub_family = rank2_family(beta, alpha);
            let budget = q_cut - t.q_shift;
            let sub_terms = wall_terms(&sub_family, wall, Polarization::J10, budget)?;
            for s in sub_terms {
                let sc = F::kernel(s.k_pairing).scale(&s.sgn_weight);
                q_terms.push((t.q_shift + s.q_shift, c.mul(&sc)));
            }
        }
        let mut total = kit.half_h1_sq.mul(&PuiseuxSeries::from_terms(q_terms, q_cut));
        for (class, monos) in per_class {
            let p = PuiseuxSeries::from_terms(monos, q_cut);
            total = total.add(&kit.seeds[&class].mul(&p));
        }
        let total = ensure_cutoff(total, t_cut)?;
        let lead = total.leading_exponent().unwrap_or(t_cut);
        let h1 = F::h1_series(Surface::RuledP2Tilde, cutoff - lead + MARGIN)?;
        let s = ensure_cutoff(h1.mul(&total), cutoff)?;
        Ok(self.wrap(3, c1, Some(j), s))
    }

    /// Jump of `Omega(G1 + G2)` from a primitive wall crossing:
    /// `(sgn I(J_to) - sgn I(J_from))/2 kernel(<G1,G2>) Omega(G1) Omega(G2)`.
    pub fn delta_omega_primitive(
        g1: &ChernData,
        g2: &ChernData,
        j_from: Polarization,
        j_to: Polarization,
        omega1: &F::Coeff,
        omega2: &F::Coeff,
    ) -> Result<F::Coeff, WallCrossError> {
        let k = geometry::pairing_k(g1, g2)?;
        let w = rat(
            sgn(geometry::degree_j(g1, g2, j_to)?) - sgn(geometry::degree_j(g1, g2, j_from)?),
            2,
        );
        Ok(F::kernel(k).scale(&w).mul(omega1).mul(omega2))
    }
}

fn rank2_class(c1: DivisorClass) -> Result<(i64, i64), WallCrossError> {
    match geometry::reduce_c1(2, c1).0 {
        DivisorClass::Ruled { c, f } => Ok((-c, -f)),
        DivisorClass::P2 { .. } => Err(WallCrossError::Unsupported("rank-2 chamber series live on the ruled surface")),
    }
}

fn rank2_family(beta: i64, alpha: i64) -> SplitFamily {
    SplitFamily {
        r: 2,
        r2: 1,
        c1: DivisorClass::ruled(beta, -alpha),
    }
}

/// Invariants entering one semi-primitive crossing of `2 G1 + G2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiPrimitiveValues {
    pub omega1: Rational,
    pub omega2: Rational,
    /// `Omega(2 G1)`; it does not jump across this wall.
    pub omega_2g1: Rational,
    /// `Omega(G1 + G2)` at a point on the wall.
    pub omega_sum_wall: Rational,
}

/// Both forms of a semi-primitive jump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiPrimitiveJump {
    /// Three-term form with invariants taken just off the wall.
    pub raw: Rational,
    /// Form with the rational invariant of `2 G1` and invariants on the wall.
    pub simplified: Rational,
}

/// Jump of `Omega(2 G1 + G2)` across the wall of `G1`, `G2`.
///
/// The three-term form uses invariants in the chamber where
/// `I(G1, G2; J) < 0`; there `Omega(G1 + G2)` equals the wall value minus
/// half a primitive jump. The simplified form uses
/// `Omega_bar(2 G1) = Omega(2 G1) + Omega(G1)/4` and wall values.
pub fn delta_omega_semiprimitive(
    g1: &ChernData,
    g2: &ChernData,
    j_from: Polarization,
    j_to: Polarization,
    v: &SemiPrimitiveValues,
) -> Result<SemiPrimitiveJump, WallCrossError> {
    let k = geometry::pairing_k(g1, g2)?;
    let weight = rat(
        sgn(geometry::degree_j(g1, g2, j_to)?) - sgn(geometry::degree_j(g1, g2, j_from)?),
        2,
    );
    Ok(semiprimitive_forms(k, &weight, v))
}

/// The two semi-primitive forms for pairing `k` and sign weight `weight`.
pub fn semiprimitive_forms(k: i64, weight: &Rational, v: &SemiPrimitiveValues) -> SemiPrimitiveJump {
    let kr = int(k);
    let sk = sign_power(k);
    let (o1, o2) = (&v.omega1, &v.omega2);
    let sum_off_wall = &v.omega_sum_wall - rat(1, 2) * &sk * &kr * o1 * o2;
    let raw = int(-2) * &kr * &v.omega_2g1 * o2 + &sk * &kr * o1 * &sum_off_wall
        + rat(1, 2) * &kr * o2 * o1 * (&kr * o1 - int(1));
    let bar_2g1 = &v.omega_2g1 + o1 * rat(1, 4);
    let simplified = &kr * (int(-2) * bar_2g1 * o2 + &sk * o1 * &v.omega_sum_wall);
    SemiPrimitiveJump {
        raw: weight * raw,
        simplified: weight * simplified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{eta_power, hclass_series, theta_quotient_2};
    use proptest::prelude::*;

    fn q(n: i64) -> QExponent {
        QExponent(n)
    }

    fn pol(m: i64, n: i64) -> Polarization {
        Polarization::new(m, n).unwrap()
    }

    fn coeffs(s: &PuiseuxSeries<Rational>, start: i64, count: i64) -> Vec<Rational> {
        (0..count).map(|k| s.coefficient(q(start + 24 * k)).unwrap()).collect()
    }

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn h1_unrefined() {
        let wc = WallCrossing::<Unrefined>::new();
        let ruled = wc.h1(Surface::RuledP2Tilde, q(100)).unwrap();
        assert_eq!(ruled.series.leading_exponent(), Some(q(-4)));
        let p2 = wc.h1(Surface::P2, q(-3 + 24 * 3)).unwrap();
        assert_eq!(coeffs(&p2.series, -3, 4), ints(&[1, 3, 9, 22]));
    }

    #[test]
    fn h1_refined() {
        let wc = WallCrossing::<Refined>::new();
        let s = wc.h1(Surface::RuledP2Tilde, q(60)).unwrap().series;
        assert_eq!(s.leading_exponent(), Some(q(-4)));
        let expect = WRational::from_laurent(WLaurent::antisymmetric(1)).inverse().unwrap();
        assert_eq!(s.leading_coefficient(), Some(&expect));
        assert!(matches!(wc.h1(Surface::P2, q(10)), Err(WallCrossError::Unsupported(_))));
    }

    #[test]
    fn kernels() {
        assert_eq!(Unrefined::kernel(3), int(-3));
        assert_eq!(Unrefined::kernel(-2), int(-2));
        assert!(Refined::kernel(0).is_zero());
        assert_eq!(Refined::kernel(1).eval(&int(2)), Some(rat(-3, 2)));
    }

    #[test]
    fn boundary_term_count_is_finite() {
        let terms = wall_terms(&SplitFamily::rank2(1), Polarization::J10, Polarization::J01, q(24 * 3)).unwrap();
        assert!(!terms.is_empty());
        for t in &terms {
            assert_eq!(t.big_b, 2 * t.b + 1);
            assert_eq!(t.big_a, 2 * t.a - 1);
            assert_eq!(t.k_pairing, -(2 * t.b + 1) + 2 * (2 * t.a - 1));
            assert!(t.big_a * t.big_b > 0);
        }
    }

    #[test]
    fn divergent_sum_is_reported() {
        let fam = SplitFamily {
            r: 2,
            r2: 1,
            c1: DivisorClass::ruled(0, 0),
        };
        assert!(matches!(
            wall_terms(&fam, Polarization::J01, Polarization::J10, q(48)),
            Err(WallCrossError::Divergent(..))
        ));
    }

    // Oracle: direct expansion of 3 th_0 h_1 / eta^6 and 3 th_1 h_0 / eta^6.
    fn closed_form(alpha: i64, cut: QExponent) -> PuiseuxSeries<Rational> {
        let c = cut + q(96);
        let k = 1 - alpha;
        theta_quotient_2(k, c)
            .mul(&hclass_series(alpha as u32, c).unwrap())
            .mul(&eta_power(-6, c))
            .scale_rational(&int(3))
            .truncate(cut)
    }

    #[test]
    fn boundary_sum_equals_closed_form() {
        let wc = WallCrossing::<Unrefined>::new();
        for alpha in 0..2 {
            let cut = q(24 * 13);
            let h = wc.h2_from_boundary(alpha, Polarization::J10, cut).unwrap();
            assert_eq!(h.series, closed_form(alpha, cut), "alpha = {alpha}");
        }
    }

    #[test]
    fn seed_values() {
        let wc = WallCrossing::<Unrefined>::new();
        let s = wc.h2_seed_j10(DivisorClass::ruled(-1, -1), q(10 + 24 * 3)).unwrap();
        assert_eq!(coeffs(&s.series, 10, 4), ints(&[1, 13, 93, 496]));
        let z = wc.h2_seed_j10(DivisorClass::ruled(0, 0), q(24)).unwrap();
        assert_eq!(z.series.leading_exponent(), Some(q(-8)));
        assert_eq!(z.series.leading_coefficient(), Some(&rat(1, 4)));
        let at = wc.h2_at(DivisorClass::ruled(0, 0), Polarization::J10, q(24)).unwrap();
        assert_eq!(at.series, z.series);
    }

    #[test]
    fn half_integral_on_walls() {
        let wc = WallCrossing::<Unrefined>::new();
        let h = wc.h2_from_boundary(1, pol(1, 1), q(24 * 4)).unwrap();
        assert!(h.series.terms().any(|(_, c)| !c.is_integer()));
        let off = wc.h2_from_boundary(1, pol(2, 1), q(24 * 4)).unwrap();
        assert!(off.series.terms().all(|(_, c)| c.is_integer()));
    }

    #[test]
    fn path_independence() {
        let wc = WallCrossing::<Unrefined>::new();
        let cut = q(24 * 5);
        for alpha in 0..2 {
            for j in [pol(1, 1), pol(3, 1), pol(5, 1), pol(1, 3), pol(2, 5)] {
                let direct = wc.h2_from_boundary(alpha, j, cut).unwrap();
                let via = wc.h2_at(DivisorClass::ruled(-1, -alpha), j, cut).unwrap();
                assert_eq!(direct.series, via.series, "alpha={alpha} J={j}");
            }
        }
    }

    #[test]
    fn boundary_vanishing() {
        let wc = WallCrossing::<Unrefined>::new();
        for alpha in 0..2 {
            assert!(wc.h2_from_boundary(alpha, Polarization::J01, q(200)).unwrap().series.is_zero());
            let seed = wc.h2_seed_j10(DivisorClass::ruled(-1, -alpha), q(200)).unwrap();
            let delta = wc.delta_h2(1, alpha, Polarization::J01, q(200)).unwrap();
            assert_eq!(delta.series, seed.series.neg());
        }
        assert!(wc.h3(Polarization::J01, q(200)).unwrap().series.is_zero());
        assert!(wc.delta_h2(1, 1, Polarization::J10, q(100)).unwrap().series.is_zero());
    }

    #[test]
    fn rank3_euler_numbers() {
        let wc = WallCrossing::<Unrefined>::new();
        let h = wc.h3(Polarization::J10, q(-20 + 24 * 6)).unwrap();
        assert_eq!(h.series.leading_exponent(), Some(q(-20 + 48)));
        assert_eq!(coeffs(&h.series, -20 + 48, 4), ints(&[3, 69, 792, 6345]));
    }

    #[test]
    fn rank3_chamber_locality() {
        let wc = WallCrossing::<Unrefined>::new();
        let cut = q(24 * 4);
        // No rank-3 wall with small q-shift separates J_{1,0}-adjacent ratios 100:1 and 200:1.
        let a = wc.h3(pol(100, 1), cut).unwrap();
        let b = wc.h3(pol(200, 1), cut).unwrap();
        assert_eq!(a.series, b.series);
    }

    #[test]
    fn primitive_jump() {
        let g1 = ChernData::new(1, DivisorClass::ruled(-1, 0), int(0)).unwrap();
        let g2 = ChernData::new(1, DivisorClass::ruled(0, -1), int(0)).unwrap();
        let j = pol(1, 1);
        let one = int(1);
        let same = WallCrossing::<Unrefined>::delta_omega_primitive(&g1, &g2, j, j, &one, &one).unwrap();
        assert_eq!(same, int(0));
        // D = c1(E2) - c1(E1) = C - f: I = Bn - Am with B = 1, A = 1.
        let k = geometry::pairing_k(&g1, &g2).unwrap();
        let full = WallCrossing::<Unrefined>::delta_omega_primitive(&g1, &g2, pol(2, 1), pol(1, 2), &one, &one).unwrap();
        let half = WallCrossing::<Unrefined>::delta_omega_primitive(&g1, &g2, pol(1, 1), pol(1, 2), &one, &one).unwrap();
        assert_eq!(full, Unrefined::kernel(k));
        assert_eq!(full, half * int(2));
    }

    // (w - 1/w) times each refined coefficient, evaluated at w = 1.
    fn at_w1(s: &PuiseuxSeries<WRational>) -> PuiseuxSeries<Rational> {
        let factor = WRational::from_laurent(WLaurent::antisymmetric(1));
        s.map(|c| c.mul(&factor).eval(&int(1)).expect("no pole at w = 1"))
    }

    #[test]
    fn refined_boundary_sum_equals_closed_form() {
        let wc = WallCrossing::<Refined>::new();
        let cut = q(24 * 3);
        for alpha in 0..2 {
            let bound = wc.h2_from_boundary(alpha, Polarization::J10, cut).unwrap();
            let seed = wc.h2_seed_j10(DivisorClass::ruled(-1, -alpha), cut).unwrap();
            assert_eq!(bound.series, seed.series, "alpha = {alpha}");
        }
    }

    #[test]
    fn refined_path_independence() {
        let wc = WallCrossing::<Refined>::new();
        let cut = q(24 * 2);
        for j in [pol(1, 1), pol(3, 1)] {
            let direct = wc.h2_from_boundary(1, j, cut).unwrap();
            let via = wc.h2_at(DivisorClass::ruled(-1, -1), j, cut).unwrap();
            assert_eq!(direct.series, via.series, "J = {j}");
        }
    }

    #[test]
    fn refined_specializes_to_unrefined() {
        let r = WallCrossing::<Refined>::new();
        let u = WallCrossing::<Unrefined>::new();
        let cut = q(24 * 2);
        for (c1, j) in [
            (DivisorClass::ruled(-1, -1), pol(2, 1)),
            (DivisorClass::ruled(0, -1), pol(1, 1)),
            (DivisorClass::ruled(0, 0), pol(1, 5)),
            (DivisorClass::ruled(-1, 0), Polarization::J10),
        ] {
            let refined = r.h2_at(c1, j, cut).unwrap();
            let plain = u.h2_at(c1, j, cut).unwrap();
            // moduli dimension 4 c2 - c1^2 - 3 has the parity of c + 1
            let DivisorClass::Ruled { c, .. } = c1 else { unreachable!() };
            let sign = sign_power(c + 1);
            assert_eq!(at_w1(&refined.series).scale_rational(&sign), plain.series, "c1 = {c1}, J = {j}");
        }
        let cut = q(24 * 3);
        assert_eq!(
            at_w1(&r.h3(Polarization::J10, cut).unwrap().series),
            u.h3(Polarization::J10, cut).unwrap().series
        );
    }

    proptest! {
        #[test]
        fn semiprimitive_forms_agree(
            k in -6i64..7,
            o1 in -5i64..6, o2 in -5i64..6, o2g in -5i64..6, ow in -5i64..6,
            from in -1i64..2, to in -1i64..2,
        ) {
            let v = SemiPrimitiveValues {
                omega1: int(o1),
                omega2: int(o2),
                omega_2g1: int(o2g),
                omega_sum_wall: int(ow),
            };
            let j = semiprimitive_forms(k, &rat(to - from, 2), &v);
            prop_assert_eq!(j.raw, j.simplified);
        }
    }
}
