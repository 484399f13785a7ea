//! The `series`, `betti` and `walls` commands.

use serde_json::json;
use sheafwc_core::blowup::{Blowup, BlowupWarning};
use sheafwc_core::geometry::{self, DivisorClass, Polarization, SplitFamily, Surface};
use sheafwc_core::invariants;
use sheafwc_core::wallcross::{Flavor, WallCrossError};
use sheafwc_core::{PuiseuxSeries, QExponent, Refined, Unrefined, WallCrossing};

use crate::cache;
use crate::config::{
    parse_bound, parse_c2_range, BettiArgs, ConfigError, Format, SeriesArgs, SeriesRequest, WallsArgs,
};
use crate::format::{self, Provenance, Render, SeriesView};
use crate::Failure;

fn wallcross_failure(e: WallCrossError) -> Failure {
    match e {
        WallCrossError::Divergent(..) | WallCrossError::Unsupported(_) => {
            Failure::Config(ConfigError::Unsupported(e.to_string()))
        }
        other => Failure::Runtime(other.into()),
    }
}

fn warning_text(w: &BlowupWarning) -> String {
    match w {
        BlowupWarning::NotCoprime { rank, degree } => format!(
            "gcd(r, c1.H) = gcd({rank}, {degree}) != 1: strictly semistable sheaves may exist on P^2"
        ),
    }
}

// Enough Hurwitz numbers for the class-number series through `cutoff` plus headroom.
fn hurwitz_bound(cutoff: QExponent) -> u64 {
    let steps = (cutoff.numerator().max(0) + 300) / 24 + 1;
    (4 * steps + 3) as u64
}

struct Computed<R> {
    series: PuiseuxSeries<R>,
    notes: Vec<String>,
}

fn compute<F: Flavor>(req: &SeriesRequest, wc: &WallCrossing<F>) -> Result<Computed<F::Coeff>, Failure> {
    let mut notes = Vec::new();
    let cut = req.cutoff;
    let series = match (req.rank, req.surface) {
        (1, s) => wc.h1(s, cut).map_err(wallcross_failure)?.series,
        (2, Surface::RuledP2Tilde) => wc.h2_at(req.c1, req.polarization, cut).map_err(wallcross_failure)?.series,
        (2, Surface::P2) => {
            let DivisorClass::P2 { h } = req.c1 else { unreachable!() };
            let up = wc
                .h2_at(DivisorClass::ruled(h, h), Polarization::J10, cut)
                .map_err(wallcross_failure)?;
            let t = Blowup::<F>::to_p2(&up).map_err(|e| Failure::Runtime(e.into()))?;
            notes.extend(t.warnings.iter().map(warning_text));
            t.series.series
        }
        (3, Surface::RuledP2Tilde) => wc.h3(req.polarization, cut).map_err(wallcross_failure)?.series,
        (3, Surface::P2) => {
            let up = wc.h3(Polarization::J10, cut).map_err(wallcross_failure)?;
            let t = Blowup::<F>::to_p2(&up).map_err(|e| Failure::Runtime(e.into()))?;
            notes.extend(t.warnings.iter().map(warning_text));
            notes.push("the series for c1 = -H and c1 = H coincide".into());
            t.series.series
        }
        _ => unreachable!("rank validated"),
    };
    if series.is_zero() {
        notes.push("the series vanishes identically through the cutoff".into());
    }
    if req.surface == Surface::RuledP2Tilde && req.rank > 1 && on_wall(req) {
        notes.push("the polarization lies on a wall; coefficients average the adjacent chambers".into());
    }
    Ok(Computed { series, notes })
}

fn on_wall(req: &SeriesRequest) -> bool {
    let family = match req.rank {
        2 => SplitFamily {
            r: 2,
            r2: 1,
            c1: geometry::reduce_c1(2, req.c1).0,
        },
        _ => SplitFamily::rank3(),
    };
    let bound = (req.cutoff - QExponent(-48)).to_rational();
    geometry::walls_for(&family, &bound)
        .iter()
        .any(|w| w.degree(req.polarization) == 0)
}

fn render<R: Render + sheafwc_core::Coefficient>(
    req: &SeriesRequest,
    c: &Computed<R>,
    format: Format,
    command: String,
) -> String {
    let prov = Provenance::new(command, Some(c.series.cutoff()));
    let meta = json!({
        "rank": req.rank,
        "c1": req.c1.to_string(),
        "surface": req.surface.name(),
        "polarization": if req.surface == Surface::P2 { None } else { Some(req.polarization.to_string()) },
        "refined": req.refined,
        "base": req.base.to_string(),
    });
    let view = SeriesView {
        provenance: &prov,
        base: req.base,
        series: &c.series,
        meta,
        notes: &c.notes,
    };
    match format {
        Format::Text => view.text(),
        Format::Json => pretty(&view.json()),
        Format::Csv => view.csv(),
    }
}

pub fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn series(args: &SeriesArgs, command: String) -> Result<String, Failure> {
    let req = args.validate()?;
    if req.refined {
        let c = compute(&req, &WallCrossing::<Refined>::new())?;
        Ok(render(&req, &c, args.out.format, command))
    } else {
        let hurwitz = cache::from_env(hurwitz_bound(req.cutoff)).map_err(Failure::Runtime)?;
        let c = compute(&req, &WallCrossing::<Unrefined>::with_hurwitz(hurwitz))?;
        Ok(render(&req, &c, args.out.format, command))
    }
}

pub fn betti(args: &BettiArgs, command: String) -> Result<String, Failure> {
    let c2s = parse_c2_range(&args.c2)?;
    let top = *c2s.last().expect("nonempty range");
    let cutoff = invariants::p2_rank3_exponent(top);
    let h = invariants::p2_rank3_refined(cutoff).map_err(|e| Failure::Runtime(e.into()))?;
    let table = invariants::betti_table(&h, &c2s).map_err(|e| Failure::Runtime(e.into()))?;
    let prov = Provenance::new(command, Some(h.series.cutoff()));
    Ok(match args.out.format {
        Format::Text => format::betti_text(&prov, &table),
        Format::Csv => format::betti_csv(&prov, &table),
        Format::Json => pretty(&format::betti_json(&prov, &table)),
    })
}

pub fn walls(args: &WallsArgs, command: String) -> Result<String, Failure> {
    let c1 = DivisorClass::parse(&args.c1, Surface::RuledP2Tilde).map_err(ConfigError::from)?;
    if c1.surface() != Surface::RuledP2Tilde {
        return Err(ConfigError::Invalid(format!("walls are listed on the ruled surface; got c1 = {c1}")).into());
    }
    let bound = parse_bound(&args.bound)?;
    let family = match args.rank {
        2 => SplitFamily { r: 2, r2: 1, c1 },
        3 if geometry::reduce_c1(3, c1).0 == DivisorClass::ruled(-1, -1) => SplitFamily::rank3(),
        3 => {
            return Err(ConfigError::Unsupported(format!("rank-3 walls need c1 = -C-f mod 3, got {c1}")).into());
        }
        r => return Err(ConfigError::Invalid(format!("walls are listed for rank 2 or 3, got {r}")).into()),
    };
    let walls = geometry::walls_for(&family, &bound);
    let prov = Provenance::new(command, None);
    Ok(match args.out.format {
        Format::Text => format::walls_text(&prov, &walls),
        Format::Json => pretty(&format::walls_json(&prov, &walls)),
        Format::Csv => format::walls_csv(&prov, &walls),
    })
}
