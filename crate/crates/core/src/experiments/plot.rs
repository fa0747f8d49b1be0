//! Static log-log SVG plots of rate tables.

use std::fmt::Write as _;

use super::csv::fmt_sig;
use super::rate::RateTable;

const W: f64 = 640.0;
const H: f64 = 440.0;
const PAD_L: f64 = 70.0;
const PAD_R: f64 = 20.0;
const PAD_T: f64 = 30.0;
const PAD_B: f64 = 50.0;

/// Replicate values as dots, per-size means as filled markers and the
/// fitted power law as a line, all on log-log axes.
pub fn rate_plot_svg(table: &RateTable, title: &str) -> String {
    let xs: Vec<f64> = table.rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = table.rows.iter().map(|r| r.w1.max(1e-300).ln()).collect();
    let (x0, x1) = padded_range(&xs);
    let (y0, y1) = padded_range(&ys);
    let px = |x: f64| PAD_L + (x - x0) / (x1 - x0) * (W - PAD_L - PAD_R);
    let py = |y: f64| H - PAD_B - (y - y0) / (y1 - y0) * (H - PAD_T - PAD_B);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="18" text-anchor="middle">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{PAD_L}" y="{PAD_T}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - PAD_L - PAD_R,
        H - PAD_T - PAD_B
    );
    for &(n, _) in &table.means() {
        let x = px((n as f64).ln());
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            H - PAD_B,
            H - PAD_B + 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{}" text-anchor="middle">{n}</text>"#,
            H - PAD_B + 18.0
        );
    }
    let (lo, hi) = (
        y0.exp().log10().floor() as i32,
        y1.exp().log10().ceil() as i32,
    );
    for e in lo..=hi {
        for m in [1.0, 2.0, 5.0] {
            let v = m * 10f64.powi(e);
            let y = v.ln();
            if y < y0 || y > y1 {
                continue;
            }
            let yy = py(y);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{yy:.2}" x2="{PAD_L}" y2="{yy:.2}" stroke="black"/>"#,
                PAD_L - 5.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                PAD_L - 8.0,
                yy + 4.0,
                fmt_sig(v, 3)
            );
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">n (log scale)</text>"#,
        W / 2.0,
        H - 10.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">W1 (log scale)</text>"#,
        H / 2.0,
        H / 2.0
    );
    for (x, y) in xs.iter().zip(&ys) {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="2" fill="#9aa"/>"##,
            px(*x),
            py(*y)
        );
    }
    for (n, m) in table.means() {
        let _ = writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#035"/>"##,
            px((n as f64).ln()),
            py(m.ln())
        );
    }
    if let Some(f) = &table.fit {
        let line = |x: f64| f.intercept + f.slope * x;
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#c30" stroke-width="1.5"/>"##,
            px(x0),
            py(line(x0)),
            px(x1),
            py(line(x1))
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">slope {} ± {}</text>"#,
            W - PAD_R - 8.0,
            PAD_T + 18.0,
            fmt_sig(f.slope, 4),
            fmt_sig(f.stderr, 2)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn padded_range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((hi - lo) * 0.08).max(0.05);
    (lo - pad, hi + pad)
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
