//! Transfer of generating functions between `P^2` and its blow-up at a point.
//!
//! With `phi` the blow-down map and `C` the exceptional curve, a class `c1` on
//! `P^2` corresponds to `phi^* c1 - k C` on the blow-up, and
//! `h_{r, phi^* c1 - k C}(J_{1,0}) = B_{r,k} h_{r, c1}(P^2)`.

use alloc::vec::Vec;
use core::marker::PhantomData;

use num_integer::Integer;
use thiserror::Error;

use crate::geometry::{DivisorClass, Polarization, Surface};
use crate::modular::ModularError;
use crate::series::{QExponent, SeriesError};
use crate::wallcross::{Flavor, InvariantSeries};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlowupError {
    #[error("expected a series on {expected}, got one on {found}")]
    WrongSurface { expected: Surface, found: Surface },
    #[error("blow-up transfer needs the series at J_{{1,0}}, got {0:?}")]
    NotAtPullback(Option<Polarization>),
    #[error(transparent)]
    Modular(#[from] ModularError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Conditions under which the transferred series may not count stable
/// sheaves; the series is still returned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlowupWarning {
    /// `gcd(r, c1 . H) != 1`: strictly semistable sheaves may exist on `P^2`.
    NotCoprime { rank: u32, degree: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToP2,
    ToRuled,
}

/// The correspondence `c1 <-> phi^* c1 - k C` for rank `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlowupMap {
    pub r: u32,
    pub k: i64,
    pub direction: Direction,
}

impl BlowupMap {
    /// The map sending a blow-up class `x C + y f` to `y H`, with `k = y - x mod r`.
    pub fn from_ruled(r: u32, c1: DivisorClass) -> Result<Self, BlowupError> {
        let DivisorClass::Ruled { c: x, f: y } = c1 else {
            return Err(BlowupError::WrongSurface {
                expected: Surface::RuledP2Tilde,
                found: c1.surface(),
            });
        };
        Ok(Self {
            r,
            k: (y - x).rem_euclid(r as i64),
            direction: Direction::ToP2,
        })
    }

    pub fn to_ruled(r: u32, k: i64) -> Self {
        Self {
            r,
            k: k.rem_euclid(r as i64),
            direction: Direction::ToRuled,
        }
    }

    /// `phi^* (h H) - k C = (h - k) C + h f`.
    pub fn pull_back(&self, c1: DivisorClass) -> Result<DivisorClass, BlowupError> {
        match c1 {
            DivisorClass::P2 { h } => Ok(DivisorClass::ruled(h - self.k, h)),
            other => Err(BlowupError::WrongSurface {
                expected: Surface::P2,
                found: other.surface(),
            }),
        }
    }

    /// `x C + y f -> y H`.
    pub fn push_forward(&self, c1: DivisorClass) -> Result<DivisorClass, BlowupError> {
        match c1 {
            DivisorClass::Ruled { f, .. } => Ok(DivisorClass::p2(f)),
            other => Err(BlowupError::WrongSurface {
                expected: Surface::RuledP2Tilde,
                found: other.surface(),
            }),
        }
    }
}

/// A transferred series with any warnings raised on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct Transfer<R> {
    pub series: InvariantSeries<R>,
    pub warnings: Vec<BlowupWarning>,
}

// Extra precision for the blow-up factor; its leading exponent is at least -3/24.
const FACTOR_MARGIN: QExponent = QExponent(48);

fn coprimality(r: u32, p2_class: DivisorClass) -> Vec<BlowupWarning> {
    let DivisorClass::P2 { h } = p2_class else {
        return Vec::new();
    };
    if (r as i64).gcd(&h) == 1 {
        Vec::new()
    } else {
        alloc::vec![BlowupWarning::NotCoprime { rank: r, degree: h }]
    }
}

/// Blow-up transfers for one flavor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Blowup<F>(PhantomData<F>);

impl<F: Flavor> Blowup<F> {
    /// `h(P^2) = h(blow-up, J_{1,0}) / B_{r,k}`.
    pub fn to_p2(h: &InvariantSeries<F::Coeff>) -> Result<Transfer<F::Coeff>, BlowupError> {
        if h.polarization != Some(Polarization::J10) {
            return Err(BlowupError::NotAtPullback(h.polarization));
        }
        let map = BlowupMap::from_ruled(h.rank, h.c1)?;
        let c1 = map.push_forward(h.c1)?;
        let b = F::blowup_factor(h.rank, map.k, h.series.cutoff() + FACTOR_MARGIN)?;
        let series = h.series.div(&b)?.truncate(h.series.cutoff());
        Ok(Transfer {
            warnings: coprimality(h.rank, c1),
            series: InvariantSeries {
                rank: h.rank,
                c1,
                polarization: None,
                refined: h.refined,
                series,
            },
        })
    }

    /// `h(blow-up, J_{1,0}) = B_{r,k} h(P^2)` for the class `phi^* c1 - k C`.
    pub fn to_ruled(h: &InvariantSeries<F::Coeff>, k: i64) -> Result<InvariantSeries<F::Coeff>, BlowupError> {
        let map = BlowupMap::to_ruled(h.rank, k);
        let c1 = map.pull_back(h.c1)?;
        let b = F::blowup_factor(h.rank, map.k, h.series.cutoff() + FACTOR_MARGIN)?;
        let series = h.series.mul(&b).truncate(h.series.cutoff());
        Ok(InvariantSeries {
            rank: h.rank,
            c1,
            polarization: Some(Polarization::J10),
            refined: h.refined,
            series,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{eta_power, hclass_series};
    use crate::rational::{int, Rational};
    use crate::series::PuiseuxSeries;
    use crate::wallcross::{Refined, Unrefined, WallCrossing};

    fn q(n: i64) -> QExponent {
        QExponent(n)
    }

    #[test]
    fn class_correspondence() {
        let m = BlowupMap::from_ruled(3, DivisorClass::ruled(-1, -1)).unwrap();
        assert_eq!(m.k, 0);
        assert_eq!(m.push_forward(DivisorClass::ruled(-1, -1)).unwrap(), DivisorClass::p2(-1));
        assert_eq!(m.pull_back(DivisorClass::p2(-1)).unwrap(), DivisorClass::ruled(-1, -1));
        let m2 = BlowupMap::from_ruled(2, DivisorClass::ruled(0, -1)).unwrap();
        assert_eq!(m2.k, 1);
        assert_eq!(m2.pull_back(DivisorClass::p2(-1)).unwrap(), DivisorClass::ruled(-2, -1));
        assert_eq!(BlowupMap::to_ruled(3, 4), BlowupMap::to_ruled(3, 1));
    }

    // 3 h_1 / eta^6 on P^2 from the closed form on the blow-up.
    #[test]
    fn rank2_cancellation() {
        let wc = WallCrossing::<Unrefined>::new();
        let cut = q(24 * 8);
        let seed = wc.h2_seed_j10(DivisorClass::ruled(-1, -1), cut).unwrap();
        let t = Blowup::<Unrefined>::to_p2(&seed).unwrap();
        assert_eq!(t.series.c1, DivisorClass::p2(-1));
        assert!(t.warnings.is_empty());
        let c = cut + q(96);
        let expect = hclass_series(1, c).unwrap().mul(&eta_power(-6, c)).scale_rational(&int(3)).truncate(cut);
        assert!(t.series.series.agrees_through(&expect, cut - q(24)));
    }

    #[test]
    fn rank2_to_ruled_matches_minus_f_seed() {
        let wc = WallCrossing::<Unrefined>::new();
        let cut = q(24 * 6);
        let seed = wc.h2_seed_j10(DivisorClass::ruled(-1, -1), cut).unwrap();
        let p2 = Blowup::<Unrefined>::to_p2(&seed).unwrap().series;
        // -H pulls back to -C - f for k = 0 and to -2C - f ~ -f for k = 1.
        let ruled = Blowup::<Unrefined>::to_ruled(&p2, 1).unwrap();
        assert_eq!(ruled.c1, DivisorClass::ruled(-2, -1));
        let expect = wc.h2_seed_j10(DivisorClass::ruled(0, -1), cut).unwrap();
        assert!(ruled.series.agrees_through(&expect.series, cut - q(24)));
    }

    #[test]
    fn even_degree_warns() {
        let wc = WallCrossing::<Unrefined>::new();
        let seed = wc.h2_seed_j10(DivisorClass::ruled(0, 0), q(48)).unwrap();
        let t = Blowup::<Unrefined>::to_p2(&seed).unwrap();
        assert_eq!(t.warnings, alloc::vec![BlowupWarning::NotCoprime { rank: 2, degree: 0 }]);
    }

    #[test]
    fn needs_pullback_polarization() {
        let wc = WallCrossing::<Unrefined>::new();
        let h = wc.h2_from_boundary(1, Polarization::new(1, 1).unwrap(), q(24)).unwrap();
        assert!(matches!(Blowup::<Unrefined>::to_p2(&h), Err(BlowupError::NotAtPullback(_))));
    }

    #[test]
    fn roundtrip_unrefined() {
        let cut = q(24 * 6);
        let base: PuiseuxSeries<Rational> = eta_power(-3, cut + q(48)).shift(q(-5)).truncate(cut);
        for r in [2u32, 3] {
            for k in 0..3 {
                let h = InvariantSeries {
                    rank: r,
                    c1: DivisorClass::p2(-1),
                    polarization: None,
                    refined: false,
                    series: base.clone(),
                };
                let up = Blowup::<Unrefined>::to_ruled(&h, k).unwrap();
                let down = Blowup::<Unrefined>::to_p2(&up).unwrap().series;
                assert_eq!(down.c1, h.c1);
                assert!(down.series.agrees_through(&base, cut - q(24)), "r={r} k={k}");
            }
        }
    }

    #[test]
    fn roundtrip_refined_rank3() {
        let wc = WallCrossing::<Refined>::new();
        let cut = q(24 * 2);
        let h3 = wc.h3(Polarization::J10, cut).unwrap();
        let p2 = Blowup::<Refined>::to_p2(&h3).unwrap().series;
        let back = Blowup::<Refined>::to_ruled(&p2, 0).unwrap();
        assert_eq!(back.c1, h3.c1);
        assert!(back.series.agrees_through(&h3.series, cut - q(24)));
    }
}
