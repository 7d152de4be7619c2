use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{HarnessError, Summary};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 55.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e9 {
        format!("{}", v as i64)
    } else {
        format!("{v:.3}")
    }
}

/// Standalone SVG: one mean curve per series with a shaded ±1 standard-error
/// band, x-axis in environment steps. Output is byte-for-byte deterministic.
pub fn render_svg_plot(series: &[(String, Summary)]) -> Result<String, HarnessError> {
    if series.is_empty() {
        return Err(HarnessError::EmptyPlot("no series".into()));
    }
    for (label, s) in series {
        if s.env_steps.len() < 2 {
            return Err(HarnessError::EmptyPlot(format!(
                "series {label} has fewer than two points"
            )));
        }
    }
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, s) in series {
        for i in 0..s.env_steps.len() {
            let x = s.env_steps[i] as f64;
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(s.mean[i] - s.sem[i]);
            y_max = y_max.max(s.mean[i] + s.sem[i]);
        }
    }
    if !(y_min.is_finite() && y_max.is_finite()) {
        return Err(HarnessError::EmptyPlot("non-finite returns".into()));
    }
    if x_max == x_min {
        x_max = x_min + 1.0;
    }
    if y_max == y_min {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - x_min) / (x_max - x_min) * pw;
    let py = |y: f64| TOP + (y_max - y) / (y_max - y_min) * ph;

    let mut svg = String::new();
    let w = &mut svg;
    // fmt::Write on String cannot fail.
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for k in 0..=TICKS {
        let f = k as f64 / TICKS as f64;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        let (x, y) = (px(xv), py(yv));
        let _ = writeln!(
            w,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 18.0,
            tick_label(xv)
        );
        let _ = writeln!(
            w,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0,
            tick_label(yv)
        );
    }
    let _ = writeln!(
        w,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">environment steps</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        w,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">evaluation return</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0
    );

    for (i, (label, s)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let n = s.env_steps.len();
        let upper = (0..n).map(|j| (s.env_steps[j] as f64, s.mean[j] + s.sem[j]));
        let lower = (0..n).rev().map(|j| (s.env_steps[j] as f64, s.mean[j] - s.sem[j]));
        let band: Vec<String> = upper
            .chain(lower)
            .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let line: Vec<String> = (0..n)
            .map(|j| format!("{:.2},{:.2}", px(s.env_steps[j] as f64), py(s.mean[j])))
            .collect();
        let _ = writeln!(
            w,
            r#"<polygon points="{}" fill="{color}" fill-opacity="0.2" stroke="none"/>"#,
            band.join(" ")
        );
        let _ = writeln!(
            w,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            line.join(" ")
        );
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            w,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0,
            escape(label)
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_svg_plot(series: &[(String, Summary)], path: &Path) -> Result<(), HarnessError> {
    let svg = render_svg_plot(series)?;
    fs::write(path, svg)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(steps: &[usize], mean: &[f64]) -> Summary {
        Summary {
            env_steps: steps.to_vec(),
            mean: mean.to_vec(),
            std: vec![1.0; mean.len()],
            sem: vec![0.5; mean.len()],
            auc: vec![0.0],
            num_trials: 4,
        }
    }

    #[test]
    fn two_series_render_two_curves_and_bands() {
        let series = vec![
            ("uniform".to_string(), summary(&[0, 10, 20], &[0.0, 1.0, 2.0])),
            ("stratified <ser>".to_string(), summary(&[0, 10, 20], &[0.0, 2.0, 3.0])),
        ];
        let svg = render_svg_plot(&series).unwrap();
        let doc = roxmltree::Document::parse(&svg).unwrap();
        let count = |tag: &str| doc.descendants().filter(|n| n.has_tag_name(tag)).count();
        assert_eq!(count("polyline"), 2);
        assert_eq!(count("polygon"), 2);
        let texts: Vec<&str> = doc.descendants().filter_map(|n| n.text()).collect();
        assert!(texts.iter().any(|t| t.contains("environment steps")));
        assert!(texts.contains(&"stratified <ser>"));
        assert_eq!(svg, render_svg_plot(&series).unwrap());
    }

    #[test]
    fn rejects_empty_and_single_point() {
        assert!(matches!(render_svg_plot(&[]), Err(HarnessError::EmptyPlot(_))));
        let one = vec![("a".to_string(), summary(&[0], &[1.0]))];
        assert!(matches!(render_svg_plot(&one), Err(HarnessError::EmptyPlot(_))));
    }
}
