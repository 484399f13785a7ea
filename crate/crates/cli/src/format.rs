//! Text, JSON and CSV renderings. Every output starts with a provenance
//! header: `#` comment lines for text and CSV, a `provenance` object for JSON.

use serde::Serialize;
use serde_json::{json, Value};
use sheafwc_core::geometry::Wall;
use sheafwc_core::invariants::BettiTable;
use sheafwc_core::series::LATTICE_DEN;
use sheafwc_core::{PuiseuxSeries, QExponent, Rational, WLaurent, WRational};

/// Rows with `c2` above this were not cross-checked against known values.
pub const CHECKED_C2_MAX: i64 = 6;

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<String>,
}

impl Provenance {
    pub fn new(command: String, cutoff: Option<QExponent>) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            cutoff: cutoff.map(|c| c.to_string()),
        }
    }

    pub fn comment(&self) -> String {
        let mut out = format!("# {} {}\n# command: {}\n", self.tool, self.version, self.command);
        if let Some(c) = &self.cutoff {
            out.push_str(&format!("# exact through: q^({c})\n"));
        }
        out
    }
}

/// `q^(base+n)`, or `q^(n)` when the base is zero.
pub fn exponent_label(base: QExponent, e: QExponent) -> String {
    let steps = (e.numerator() - base.numerator()).div_euclid(LATTICE_DEN);
    let rest = QExponent(e.numerator() - steps * LATTICE_DEN);
    if rest == QExponent::ZERO {
        return format!("q^({steps})");
    }
    if steps < 0 {
        format!("q^({rest}{steps})")
    } else {
        format!("q^({rest}+{steps})")
    }
}

/// Coefficient rings the formats know how to print.
pub trait Render {
    fn text(&self) -> String;
    fn json(&self) -> Value;
}

impl Render for Rational {
    fn text(&self) -> String {
        self.to_string()
    }

    fn json(&self) -> Value {
        Value::String(self.to_string())
    }
}

fn laurent_json(p: &WLaurent) -> Value {
    Value::Array(p.terms().iter().map(|(e, c)| json!([e, c.to_string()])).collect())
}

impl Render for WRational {
    fn text(&self) -> String {
        self.to_string()
    }

    fn json(&self) -> Value {
        json!({ "num": laurent_json(self.numerator()), "den": laurent_json(self.denominator()) })
    }
}

pub struct SeriesView<'a, R> {
    pub provenance: &'a Provenance,
    pub base: QExponent,
    pub series: &'a PuiseuxSeries<R>,
    pub meta: Value,
    pub notes: &'a [String],
}

impl<R: Render + sheafwc_core::Coefficient> SeriesView<'_, R> {
    pub fn text(&self) -> String {
        let mut out = self.provenance.comment();
        for n in self.notes {
            out.push_str(&format!("# note: {n}\n"));
        }
        for (e, c) in self.series.terms() {
            out.push_str(&format!("{}: {}\n", exponent_label(self.base, e), c.text()));
        }
        out
    }

    pub fn json(&self) -> Value {
        let terms: Vec<Value> = self
            .series
            .terms()
            .map(|(e, c)| json!({ "q_num": e.numerator(), "coeff": c.json() }))
            .collect();
        json!({
            "provenance": self.provenance,
            "lattice_den": LATTICE_DEN,
            "cutoff": self.series.cutoff().numerator(),
            "class": self.meta,
            "notes": self.notes,
            "terms": terms,
        })
    }

    /// `q_num,coeff` rows; refined coefficients are quoted.
    pub fn csv(&self) -> String {
        let mut out = self.provenance.comment();
        out.push_str("q_num,coeff\n");
        for (e, c) in self.series.terms() {
            let t = c.text();
            if t.contains(',') || t.contains(' ') {
                out.push_str(&format!("{},\"{}\"\n", e.numerator(), t));
            } else {
                out.push_str(&format!("{},{}\n", e.numerator(), t));
            }
        }
        out
    }
}

fn extrapolated(c2: i64) -> bool {
    c2 > CHECKED_C2_MAX
}

pub fn betti_text(p: &Provenance, t: &BettiTable) -> String {
    let mut out = p.comment();
    for row in &t.rows {
        let half: Vec<String> = row.half.iter().map(u64::to_string).collect();
        out.push_str(&format!(
            "c2={} dim={} b0..b{}: {} chi={}{}\n",
            row.c2,
            row.dim,
            row.dim,
            half.join(" "),
            row.chi,
            if extrapolated(row.c2) { " (extrapolated)" } else { "" }
        ));
    }
    out
}

pub fn betti_csv(p: &Provenance, t: &BettiTable) -> String {
    let mut out = p.comment();
    for row in t.rows.iter().filter(|r| extrapolated(r.c2)) {
        out.push_str(&format!("# extrapolated: c2 = {} is beyond the cross-checked range\n", row.c2));
    }
    out.push_str(&t.to_csv());
    out
}

pub fn betti_json(p: &Provenance, t: &BettiTable) -> Value {
    let rows: Vec<Value> = t
        .rows
        .iter()
        .map(|r| {
            json!({
                "c2": r.c2,
                "dim": r.dim,
                "betti_even": r.half,
                "chi": r.chi,
                "extrapolated": extrapolated(r.c2),
            })
        })
        .collect();
    json!({ "provenance": p, "rows": rows })
}

fn wall_json(w: &Wall) -> Value {
    json!({
        "a": w.a,
        "b": w.b,
        "A": w.big_a,
        "B": w.big_b,
        "ratio": [w.ratio.0, w.ratio.1],
        "q_shift": w.q_shift.to_string(),
        "pairing": w.pairing,
        "c1_e1": w.c1_e1.to_string(),
        "c1_e2": w.c1_e2.to_string(),
    })
}

pub fn walls_json(p: &Provenance, walls: &[Wall]) -> Value {
    json!({ "provenance": p, "walls": walls.iter().map(wall_json).collect::<Vec<_>>() })
}

pub fn walls_text(p: &Provenance, walls: &[Wall]) -> String {
    let mut out = p.comment();
    for w in walls {
        out.push_str(&format!(
            "m:n = {}:{}  (a, b) = ({}, {})  shift {}  <G1,G2> = {}  c1 = ({}) + ({})\n",
            w.ratio.0, w.ratio.1, w.a, w.b, w.q_shift, w.pairing, w.c1_e1, w.c1_e2
        ));
    }
    out
}

pub fn walls_csv(p: &Provenance, walls: &[Wall]) -> String {
    let mut out = p.comment();
    out.push_str("a,b,A,B,m,n,q_shift,pairing\n");
    for w in walls {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            w.a, w.b, w.big_a, w.big_b, w.ratio.0, w.ratio.1, w.q_shift, w.pairing
        ));
    }
    out
}
