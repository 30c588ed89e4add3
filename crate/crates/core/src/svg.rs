//! Chord-diagram rendering of a built surface.

use std::fmt::Write;

use crate::families::BuiltSurface;
use crate::ribbon::{Parity, RibbonSurface};

const SIZE: f64 = 440.0;
const RADIUS: f64 = 170.0;
const LABEL_RADIUS: f64 = 196.0;

fn point(slot: usize, slots: usize, r: f64) -> (f64, f64) {
    let theta = -std::f64::consts::FRAC_PI_2 + std::f64::consts::TAU * slot as f64 / slots as f64;
    (SIZE / 2.0 + r * theta.cos(), SIZE / 2.0 + r * theta.sin())
}

/// The disk as a circle, each band end as a labelled dot, each band as a
/// chord bowed toward the centre; odd bands are dashed.
pub fn chord_diagram(built: &BuiltSurface) -> String {
    let s: &RibbonSurface = &built.surface;
    let slots = s.num_ends();
    let c = SIZE / 2.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE:.0}" height="{SIZE:.0}" viewBox="0 0 {SIZE:.0} {SIZE:.0}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"  <circle cx="{c:.2}" cy="{c:.2}" r="{RADIUS:.2}" fill="none" stroke="black" stroke-width="2"/>"#
    )
    .unwrap();
    for band in s.bands() {
        let (p, q) = (s.slot_of(band.ends.0).unwrap(), s.slot_of(band.ends.1).unwrap());
        let (x1, y1) = point(p, slots, RADIUS);
        let (x2, y2) = point(q, slots, RADIUS);
        let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
        let (qx, qy) = (c + 0.35 * (mx - c), c + 0.35 * (my - c));
        let dash = match band.parity {
            Parity::Odd => r#" stroke-dasharray="6 4""#,
            Parity::Even => "",
        };
        writeln!(
            out,
            r#"  <path d="M {x1:.2} {y1:.2} Q {qx:.2} {qy:.2} {x2:.2} {y2:.2}" fill="none" stroke="steelblue" stroke-width="2"{dash}/>"#
        )
        .unwrap();
    }
    for (slot, &end) in s.order().iter().enumerate() {
        let (x, y) = point(slot, slots, RADIUS);
        let (lx, ly) = point(slot, slots, LABEL_RADIUS);
        writeln!(out, r#"  <circle cx="{x:.2}" cy="{y:.2}" r="3" fill="black"/>"#).unwrap();
        writeln!(
            out,
            r#"  <text x="{lx:.2}" y="{ly:.2}" font-family="monospace" font-size="13" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
            built.end_label(end)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_surface, Family, FamilyInstance};

    fn render(family: Family, n: usize, k: usize) -> String {
        chord_diagram(&build_surface(&FamilyInstance::new(family, n, k, false)).unwrap())
    }

    #[test]
    fn one_band() {
        let svg = render(Family::NonsepOrientableGenus0, 1, 0);
        assert_eq!(svg.matches("<path").count(), 1);
        assert!(svg.contains(">a1<") && svg.contains(">a1'<"));
    }

    #[test]
    fn odd_bands_are_dashed() {
        let svg = render(Family::NonOrientable, 2, 2);
        assert_eq!(svg.matches("<path").count(), 2);
        assert_eq!(svg.matches("stroke-dasharray").count(), 2);
    }

    #[test]
    fn separating_labels() {
        let svg = render(Family::Separating, 2, 2);
        assert_eq!(svg.matches("<path").count(), 4);
        let labels: Vec<&str> = svg
            .lines()
            .filter(|l| l.contains("<text"))
            .filter_map(|l| l.split_once("\">").map(|(_, rest)| rest.trim_end_matches("</text>")))
            .collect();
        assert_eq!(labels, ["a1", "b1", "a1'", "b1'", "a2", "b2", "b2'", "a2'"]);
    }

    #[test]
    fn deterministic() {
        assert_eq!(render(Family::Separating, 3, 3), render(Family::Separating, 3, 3));
    }
}
