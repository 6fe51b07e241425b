use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::model::Channel;

use super::aggregate::AggregateRow;
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Ettd,
    Mttd,
}

impl Metric {
    pub fn value(&self, row: &AggregateRow) -> Option<f64> {
        match self {
            Metric::Ettd => row.ettd,
            Metric::Mttd => row.mttd,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Metric::Ettd => "ETTD (slots)",
            Metric::Mttd => "MTTD (slots)",
        }
    }
}

impl FromStr for Metric {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ettd" => Ok(Metric::Ettd),
            "mttd" => Ok(Metric::Mttd),
            other => Err(HarnessError::Config(format!(
                "unknown metric `{other}`; expected ettd or mttd"
            ))),
        }
    }
}

impl std::fmt::Display for Metric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Metric::Ettd => write!(f, "ettd"),
            Metric::Mttd => write!(f, "mttd"),
        }
    }
}

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 180.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 60.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

/// Renders one comparison chart: one polyline per algorithm, x = common-set
/// size, y = the chosen metric. Rows without a value for the metric are
/// skipped; at least one plottable point is required.
pub fn render_plot(rows: &[AggregateRow], metric: Metric) -> Result<String, HarnessError> {
    // Series keyed by algorithm name, points sorted by n_common.
    let mut series: BTreeMap<String, Vec<(Channel, f64)>> = BTreeMap::new();
    for row in rows {
        if let Some(v) = metric.value(row) {
            series
                .entry(row.algorithm.to_string())
                .or_default()
                .push((row.n_common, v));
        }
    }
    series.retain(|_, pts| {
        pts.sort_by_key(|&(x, _)| x);
        !pts.is_empty()
    });
    if series.is_empty() {
        return Err(HarnessError::EmptyPlot);
    }

    let xs: Vec<Channel> = series
        .values()
        .flat_map(|pts| pts.iter().map(|&(x, _)| x))
        .collect();
    let ys: Vec<f64> = series
        .values()
        .flat_map(|pts| pts.iter().map(|&(_, y)| y))
        .collect();
    let x_min = *xs.iter().min().expect("non-empty") as f64;
    let x_max = *xs.iter().max().expect("non-empty") as f64;
    let y_max = ys.iter().cloned().fold(f64::MIN, f64::max);
    let x_span = (x_max - x_min).max(1.0);
    let y_span = (y_max * 1.08).max(1.0);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / x_span * plot_w;
    let py = |y: f64| MARGIN_TOP + plot_h - y / y_span * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{y0}" x2="{}" y2="{y0}" stroke="black"/>"#,
        MARGIN_LEFT + plot_w
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>"#
    );

    // X ticks at the observed grid values.
    let mut tick_xs: Vec<Channel> = xs.clone();
    tick_xs.sort_unstable();
    tick_xs.dedup();
    for &tx in &tick_xs {
        let x = px(tx as f64);
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{y0}" x2="{x}" y2="{}" stroke="black"/>"#,
            y0 + 6.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" font-size="12" text-anchor="middle">{tx}</text>"#,
            y0 + 20.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">common channels</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    );

    // Y ticks: five round-ish levels plus gridlines.
    for i in 0..=5 {
        let v = y_span * i as f64 / 5.0;
        let y = py(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y}" x2="{x0}" y2="{y}" stroke="black"/>"#,
            x0 - 6.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{x0}" y1="{y}" x2="{}" y2="{y}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12" text-anchor="end">{:.1}</text>"#,
            x0 - 10.0,
            y + 4.0,
            v
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{}" font-size="13" transform="rotate(-90 16 {})" text-anchor="middle">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        metric.label()
    );

    // Series.
    for (idx, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x as f64), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            coords.join(" ")
        );
        for &(x, y) in pts {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#,
                px(x as f64),
                py(y)
            );
        }
        // Legend entry.
        let ly = MARGIN_TOP + 16.0 + idx as f64 * 20.0;
        let lx = MARGIN_LEFT + plot_w + 14.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#,
            lx + 22.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="12">{}</text>"#,
            lx + 28.0,
            ly + 4.0,
            escape_xml(name)
        );
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

pub fn emit_plot(rows: &[AggregateRow], metric: Metric, path: &Path) -> Result<(), HarnessError> {
    let svg = render_plot(rows, metric)?;
    fs::write(path, svg)?;
    Ok(())
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
