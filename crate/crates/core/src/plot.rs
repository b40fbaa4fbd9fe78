//! Minimal self-contained SVG plots. Output bytes depend only on the input.

use std::fmt::Write as _;
use std::path::Path;

use crate::abm::Snapshot;
use crate::cusp::FoldBoundaryRow;
use crate::error::{Error, Result};
use crate::io::EnvelopeRow;
use crate::params::PsychParams;
use crate::polarization::{boundary_tau_hours, critical_p1, critical_p2, Regime, RegimeCell};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 80.0;
const MARGIN_R: f64 = 160.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Solid,
    Dashed,
    Markers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub color: &'static str,
    pub style: Style,
    pub points: Vec<(f64, f64)>,
}

/// Filled polygon, e.g. the region between two curves.
#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub name: String,
    pub color: &'static str,
    pub outline: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Guide {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub x_scale: Scale,
    pub y_scale: Scale,
    pub regions: Vec<Region>,
    pub series: Vec<Series>,
    pub h_guides: Vec<Guide>,
    pub v_guides: Vec<Guide>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Plot {
            title: title.to_owned(),
            x_label: x_label.to_owned(),
            y_label: y_label.to_owned(),
            x_scale: Scale::Linear,
            y_scale: Scale::Linear,
            regions: Vec::new(),
            series: Vec::new(),
            h_guides: Vec::new(),
            v_guides: Vec::new(),
        }
    }

    fn data_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.series
            .iter()
            .flat_map(|s| s.points.iter().copied())
            .chain(self.regions.iter().flat_map(|r| r.outline.iter().copied()))
    }
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    scale: Scale,
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn fit(
        scale: Scale,
        values: impl Iterator<Item = f64>,
        px_lo: f64,
        px_hi: f64,
    ) -> Option<Self> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (scale == Scale::Linear || *v > 0.0)) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            return None;
        }
        match scale {
            Scale::Linear => {
                if hi - lo < 1e-12 {
                    lo -= 0.5;
                    hi += 0.5;
                } else {
                    let pad = 0.05 * (hi - lo);
                    lo -= pad;
                    hi += pad;
                }
            }
            Scale::Log => {
                lo = 10f64.powf(lo.log10().floor());
                hi = 10f64.powf(hi.log10().ceil());
                if hi <= lo {
                    hi = lo * 10.0;
                }
            }
        }
        Some(Axis {
            scale,
            lo,
            hi,
            px_lo,
            px_hi,
        })
    }

    fn map(&self, v: f64) -> f64 {
        let f = match self.scale {
            Scale::Linear => (v - self.lo) / (self.hi - self.lo),
            Scale::Log => {
                (v.max(f64::MIN_POSITIVE).log10() - self.lo.log10())
                    / (self.hi.log10() - self.lo.log10())
            }
        };
        self.px_lo + f * (self.px_hi - self.px_lo)
    }

    fn ticks(&self) -> Vec<f64> {
        match self.scale {
            Scale::Log => {
                let (a, b) = (
                    self.lo.log10().round() as i32,
                    self.hi.log10().round() as i32,
                );
                (a..=b).map(|e| 10f64.powi(e)).collect()
            }
            Scale::Linear => {
                let raw = (self.hi - self.lo) / 6.0;
                let mag = 10f64.powf(raw.log10().floor());
                let step = [1.0, 2.0, 5.0, 10.0]
                    .iter()
                    .map(|m| m * mag)
                    .find(|s| *s >= raw)
                    .unwrap_or(10.0 * mag);
                let first = (self.lo / step).ceil() as i64;
                let last = (self.hi / step).floor() as i64;
                (first..=last).map(|j| j as f64 * step).collect()
            }
        }
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".to_owned()
    } else if v.abs() >= 1e4 || v.abs() < 1e-2 {
        format!("1e{}", v.log10().round() as i32)
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

pub fn render_svg(plot: &Plot) -> Result<String> {
    if plot.data_points().next().is_none() {
        return Err(Error::invalid("cannot plot an empty dataset"));
    }
    let x = Axis::fit(
        plot.x_scale,
        plot.data_points()
            .map(|p| p.0)
            .chain(plot.v_guides.iter().map(|g| g.value)),
        MARGIN_L,
        WIDTH - MARGIN_R,
    )
    .ok_or_else(|| Error::invalid("no plottable x values"))?;
    let y = Axis::fit(
        plot.y_scale,
        plot.data_points()
            .map(|p| p.1)
            .chain(plot.h_guides.iter().map(|g| g.value)),
        HEIGHT - MARGIN_B,
        MARGIN_T,
    )
    .ok_or_else(|| Error::invalid("no plottable y values"))?;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        (MARGIN_L + WIDTH - MARGIN_R) / 2.0,
        escape(&plot.title)
    );
    let _ = writeln!(
        s,
        r#"<clipPath id="plot-area"><rect x="{MARGIN_L}" y="{MARGIN_T}" width="{:.2}" height="{:.2}"/></clipPath>"#,
        WIDTH - MARGIN_L - MARGIN_R,
        HEIGHT - MARGIN_T - MARGIN_B
    );

    let _ = writeln!(s, r#"<g clip-path="url(#plot-area)">"#);
    for region in &plot.regions {
        let pts = polyline_points(&region.outline, &x, &y);
        let _ = writeln!(
            s,
            r#"<polygon points="{pts}" fill="{}" fill-opacity="0.35" stroke="none"/>"#,
            region.color
        );
    }
    for g in &plot.h_guides {
        let py = y.map(g.value);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_L}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#555" stroke-dasharray="2,3"/>"##,
            WIDTH - MARGIN_R
        );
    }
    for g in &plot.v_guides {
        let px = x.map(g.value);
        let _ = writeln!(
            s,
            r##"<line x1="{px:.2}" y1="{MARGIN_T}" x2="{px:.2}" y2="{:.2}" stroke="#555" stroke-dasharray="2,3"/>"##,
            HEIGHT - MARGIN_B
        );
    }
    for series in &plot.series {
        match series.style {
            Style::Markers => {
                for &(px, py) in &series.points {
                    if plottable(px, py, &x, &y) {
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{}"/>"#,
                            x.map(px),
                            y.map(py),
                            series.color
                        );
                    }
                }
            }
            Style::Solid | Style::Dashed => {
                let dash = if series.style == Style::Dashed {
                    r#" stroke-dasharray="6,4""#
                } else {
                    ""
                };
                let pts = polyline_points(&series.points, &x, &y);
                let _ = writeln!(
                    s,
                    r#"<polyline points="{pts}" fill="none" stroke="{}" stroke-width="1.8"{dash}/>"#,
                    series.color
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    // Axes, ticks and labels.
    let (x0, x1, y0, y1) = (MARGIN_L, WIDTH - MARGIN_R, HEIGHT - MARGIN_B, MARGIN_T);
    let _ = writeln!(
        s,
        r#"<rect x="{x0}" y="{y1}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    for t in x.ticks() {
        let px = x.map(t);
        let _ = writeln!(
            s,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 18.0,
            tick_label(t)
        );
    }
    for t in y.ticks() {
        let py = y.map(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 18.0,
        escape(&plot.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(&plot.y_label)
    );

    // Legend.
    let mut ly = MARGIN_T + 10.0;
    let lx = WIDTH - MARGIN_R + 15.0;
    for r in &plot.regions {
        let _ = writeln!(
            s,
            r#"<rect x="{lx}" y="{:.2}" width="14" height="10" fill="{}" fill-opacity="0.35"/><text x="{:.2}" y="{ly:.2}">{}</text>"#,
            ly - 9.0,
            r.color,
            lx + 20.0,
            escape(&r.name)
        );
        ly += 18.0;
    }
    for series in plot.series.iter().filter(|s| !s.name.is_empty()) {
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{ly:.2}">{}</text>"#,
            ly - 4.0,
            lx + 14.0,
            ly - 4.0,
            series.color,
            lx + 20.0,
            escape(&series.name)
        );
        ly += 18.0;
    }
    for g in plot.h_guides.iter().chain(&plot.v_guides) {
        let _ = writeln!(
            s,
            r##"<text x="{lx}" y="{ly:.2}" fill="#555">{}</text>"##,
            escape(&g.label)
        );
        ly += 18.0;
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn plottable(px: f64, py: f64, x: &Axis, y: &Axis) -> bool {
    let ok = |v: f64, a: &Axis| v.is_finite() && (a.scale == Scale::Linear || v > 0.0);
    ok(px, x) && ok(py, y)
}

fn polyline_points(points: &[(f64, f64)], x: &Axis, y: &Axis) -> String {
    points
        .iter()
        .filter(|(px, py)| plottable(*px, *py, x, y))
        .map(|&(px, py)| format!("{:.2},{:.2}", x.map(px), y.map(py)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn emit_plot(plot: &Plot, path: &Path) -> Result<()> {
    let svg = render_svg(plot)?;
    std::fs::write(path, svg)?;
    Ok(())
}

/// Peak and trough of the attention envelope against `P`.
pub fn envelope_plot(rows: &[EnvelopeRow], params: &PsychParams) -> Plot {
    let mut plot = Plot::new("Attention envelope", "P = tau / N^2 (s)", "A");
    plot.x_scale = Scale::Log;
    plot.series.push(Series {
        name: "A_UP".into(),
        color: "#d62728",
        style: Style::Solid,
        points: rows.iter().map(|r| (r.p, r.a_upper)).collect(),
    });
    plot.series.push(Series {
        name: "A_LP".into(),
        color: "#1f77b4",
        style: Style::Solid,
        points: rows.iter().map(|r| (r.p, r.a_lower)).collect(),
    });
    plot.h_guides.push(Guide {
        label: format!("A_crit = {}", params.a_crit),
        value: params.a_crit,
    });
    plot
}

/// Envelope with the critical polarization numbers marked.
pub fn critical_plot(rows: &[EnvelopeRow], params: &PsychParams) -> Plot {
    let mut plot = envelope_plot(rows, params);
    plot.title = "Critical polarization numbers".into();
    if let Some(p1) = critical_p1(params).finite() {
        plot.v_guides.push(Guide {
            label: format!("P1 = {}", crate::io::format_sig(p1)),
            value: p1,
        });
    }
    let p2 = critical_p2(params);
    if p2 > 0.0 {
        plot.v_guides.push(Guide {
            label: format!("P2 = {}", crate::io::format_sig(p2)),
            value: p2,
        });
    }
    plot
}

/// Band of opinions without an attractor, `|O| < E_P`, against attention.
pub fn extent_plot(rows: &[FoldBoundaryRow]) -> Plot {
    let mut plot = Plot::new("Extent of polarization", "A", "O (scaled)");
    if !rows.is_empty() {
        let mut outline: Vec<(f64, f64)> = rows.iter().map(|r| (r.a, r.e_p)).collect();
        outline.extend(rows.iter().rev().map(|r| (r.a, -r.e_p)));
        plot.regions.push(Region {
            name: "no stable O".into(),
            color: "#7f7f7f",
            outline,
        });
    }
    plot.series.push(Series {
        name: "E_P".into(),
        color: "#d62728",
        style: Style::Solid,
        points: rows.iter().map(|r| (r.a, r.e_p)).collect(),
    });
    plot
}

fn regime_color(r: Regime) -> &'static str {
    match r {
        Regime::NonPolarized => "#2ca02c",
        Regime::Transition => "#ff7f0e",
        Regime::Polarized => "#d62728",
    }
}

/// Regime of each `(N, τ)` cell with the `P1`/`P2` boundary curves.
pub fn regime_map_plot(cells: &[RegimeCell], params: &PsychParams) -> Plot {
    let mut plot = Plot::new(
        "Regimes over network size and arrival period",
        "N",
        "tau (hours)",
    );
    plot.x_scale = Scale::Log;
    plot.y_scale = Scale::Log;
    for regime in [Regime::NonPolarized, Regime::Transition, Regime::Polarized] {
        let points: Vec<(f64, f64)> = cells
            .iter()
            .filter(|c| c.regime == regime)
            .map(|c| (f64::from(c.n), c.tau_hours))
            .collect();
        if !points.is_empty() {
            plot.series.push(Series {
                name: regime.as_str().into(),
                color: regime_color(regime),
                style: Style::Markers,
                points,
            });
        }
    }
    let mut ns: Vec<u32> = cells.iter().map(|c| c.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let curve = |p: f64| {
        ns.iter()
            .map(|&n| (f64::from(n), boundary_tau_hours(p, n)))
            .collect()
    };
    if let Some(p1) = critical_p1(params).finite() {
        plot.series.push(Series {
            name: "tau = P1 N^2".into(),
            color: "#000000",
            style: Style::Solid,
            points: curve(p1),
        });
    }
    plot.series.push(Series {
        name: "tau = P2 N^2".into(),
        color: "#000000",
        style: Style::Dashed,
        points: curve(critical_p2(params)),
    });
    plot
}

/// Opinion against information for every agent in a snapshot.
pub fn snapshot_plot(snapshot: &Snapshot) -> Plot {
    let mut plot = Plot::new(
        &format!(
            "Agents at t = {} s",
            crate::io::format_sig(snapshot.sim_time_seconds)
        ),
        "I",
        "O (scaled)",
    );
    plot.series.push(Series {
        name: "agents".into(),
        color: "#1f77b4",
        style: Style::Markers,
        points: snapshot
            .agents
            .iter()
            .map(|a| (a.i_level, a.o_scaled))
            .collect(),
    });
    plot
}

/// Attention trajectory.
pub fn attention_plot(points: &[(f64, f64)]) -> Plot {
    let mut plot = Plot::new("Attention", "t (hours)", "A");
    plot.series.push(Series {
        name: "A(t)".into(),
        color: "#1f77b4",
        style: Style::Solid,
        points: points
            .iter()
            .map(|&(t, a)| (t / crate::SECONDS_PER_HOUR, a))
            .collect(),
    });
    plot
}
