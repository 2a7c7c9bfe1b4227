//! Persistence diagrams as standalone SVG.
//!
//! A bar `I` becomes the point `(lo, hi)`. Deaths at `+∞` sit on a dashed
//! band above the plot and births at `-∞` on a band to its left. Coordinates
//! are printed with two decimals so the output is byte-for-byte stable.

use std::fmt::Write as _;

use persmod::barcode::Barcode;
use persmod::interval::Interval;
use persmod::scalar::ExtendedRational;

const SIZE: f64 = 480.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 450.0;
const TOP: f64 = 60.0;
const BOTTOM: f64 = 420.0;
const TOP_BAND: f64 = 30.0;
const LEFT_BAND: f64 = 30.0;

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// The finite range shown on both axes, padded slightly.
fn range(b: &Barcode) -> (f64, f64) {
    let finite: Vec<f64> = b
        .iter()
        .flat_map(|(_, i, _)| [i.lo(), i.hi()])
        .flatten()
        .filter(|v| v.is_finite())
        .map(ExtendedRational::to_f64)
        .collect();
    let lo = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if finite.is_empty() {
        (0.0, 1.0)
    } else if lo == hi {
        (lo - 1.0, hi + 1.0)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}

struct Axes {
    lo: f64,
    hi: f64,
}

impl Axes {
    fn x(&self, v: &ExtendedRational) -> f64 {
        match v {
            ExtendedRational::NegInfinity => LEFT_BAND,
            _ => LEFT + (v.to_f64() - self.lo) / (self.hi - self.lo) * (RIGHT - LEFT),
        }
    }

    fn y(&self, v: &ExtendedRational) -> f64 {
        match v {
            ExtendedRational::PosInfinity => TOP_BAND,
            _ => BOTTOM - (v.to_f64() - self.lo) / (self.hi - self.lo) * (BOTTOM - TOP),
        }
    }
}

fn point(out: &mut String, axes: &Axes, degree: usize, bar: &Interval, multiplicity: usize) {
    let (lo, hi) = (bar.lo().expect("non-empty"), bar.hi().expect("non-empty"));
    let (x, y) = (axes.x(lo), axes.y(hi));
    let color = COLORS[degree % COLORS.len()];
    writeln!(
        out,
        r#"  <circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}" data-degree="{degree}" data-lo="{lo}" data-hi="{hi}" data-multiplicity="{multiplicity}"><title>H{degree} {bar}</title></circle>"#
    )
    .unwrap();
    if multiplicity > 1 {
        writeln!(
            out,
            r#"  <text x="{:.2}" y="{:.2}" font-size="11" fill="{color}">×{multiplicity}</text>"#,
            x + 6.0,
            y - 6.0
        )
        .unwrap();
    }
}

pub fn render(b: &Barcode) -> String {
    let (lo, hi) = range(b);
    let axes = Axes { lo, hi };
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    )
    .unwrap();
    writeln!(out, r#"  <rect width="{SIZE}" height="{SIZE}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"  <rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="darkgray"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    )
    .unwrap();
    writeln!(
        out,
        r#"  <line class="diagonal" x1="{LEFT}" y1="{BOTTOM}" x2="{RIGHT}" y2="{TOP}" stroke="dimgray"/>"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <line class="infinity" x1="{LEFT}" y1="{TOP_BAND}" x2="{RIGHT}" y2="{TOP_BAND}" stroke="dimgray" stroke-dasharray="4 3"/>"#
    )
    .unwrap();
    writeln!(out, r#"  <text x="{}" y="{}" font-size="11">+inf</text>"#, RIGHT - 24.0, TOP_BAND - 6.0).unwrap();
    let has_neg = b.iter().any(|(_, i, _)| i.lo() == Some(&ExtendedRational::NegInfinity));
    if has_neg {
        writeln!(
            out,
            r#"  <line class="neg-infinity" x1="{LEFT_BAND}" y1="{TOP}" x2="{LEFT_BAND}" y2="{BOTTOM}" stroke="dimgray" stroke-dasharray="4 3"/>"#
        )
        .unwrap();
        writeln!(out, r#"  <text x="{}" y="{}" font-size="11">-inf</text>"#, LEFT_BAND - 12.0, BOTTOM + 16.0).unwrap();
    }
    writeln!(out, r#"  <text x="{LEFT}" y="{}" font-size="11">{lo:.2}</text>"#, BOTTOM + 16.0).unwrap();
    writeln!(out, r#"  <text x="{}" y="{}" font-size="11">{hi:.2}</text>"#, RIGHT - 24.0, BOTTOM + 16.0).unwrap();
    for (degree, bar, multiplicity) in b.iter() {
        point(&mut out, &axes, degree, bar, multiplicity);
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    #[test]
    fn empty_barcode_draws_only_axes() {
        let svg = render(&Barcode::new());
        assert!(svg.contains(r#"class="diagonal""#));
        assert!(!svg.contains("<circle"));
    }

    #[test]
    fn infinite_death_sits_on_the_band() {
        let b = Barcode::from_bars(0, [Interval::closed_open(q("0"), q("inf"))]);
        let svg = render(&b);
        assert!(svg.contains(&format!(r#"cy="{TOP_BAND:.2}""#)));
    }

    #[test]
    fn multiplicity_is_annotated() {
        let mut b = Barcode::new();
        b.insert(1, Interval::closed(q("0"), q("1")), 3);
        assert!(render(&b).contains("×3"));
    }
}
