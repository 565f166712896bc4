//! Minimal self-contained SVG rendering for the report figures.
//!
//! No external plotting dependency: figures are built from computed points
//! and written as static SVG with optional log-scaled axes.

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 55.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesStyle {
    Line,
    Points,
    Bars,
}

#[derive(Debug, Clone)]
pub struct PlotLine {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: SeriesStyle,
}

#[derive(Debug, Clone)]
pub struct Figure {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<PlotLine>,
}

impl Figure {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Figure {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            log_x: false,
            log_y: false,
            series: Vec::new(),
        }
    }

    pub fn log_log(mut self) -> Self {
        self.log_x = true;
        self.log_y = true;
        self
    }

    pub fn with_series(mut self, label: &str, points: Vec<(f64, f64)>, style: SeriesStyle) -> Self {
        self.series.push(PlotLine {
            label: label.to_string(),
            points,
            style,
        });
        self
    }

    /// CSV form of the plotted points: `series,x,y`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("series,x,y\n");
        for line in &self.series {
            for &(x, y) in &line.points {
                out.push_str(&format!("{},{},{}\n", line.label, x, y));
            }
        }
        out
    }

    fn transformed(&self) -> Vec<(usize, Vec<(f64, f64)>)> {
        self.series
            .iter()
            .enumerate()
            .map(|(i, line)| {
                let pts = line
                    .points
                    .iter()
                    .filter(|&&(x, y)| {
                        (!self.log_x || x > 0.0) && (!self.log_y || y > 0.0)
                    })
                    .map(|&(x, y)| {
                        (
                            if self.log_x { x.log10() } else { x },
                            if self.log_y { y.log10() } else { y },
                        )
                    })
                    .collect();
                (i, pts)
            })
            .collect()
    }

    pub fn to_svg(&self) -> String {
        let data = self.transformed();
        let all: Vec<(f64, f64)> = data.iter().flat_map(|(_, p)| p.iter().copied()).collect();
        let (mut xmin, mut xmax, mut ymin, mut ymax) =
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in &all {
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(y);
            ymax = ymax.max(y);
        }
        if !xmin.is_finite() {
            xmin = 0.0;
            xmax = 1.0;
            ymin = 0.0;
            ymax = 1.0;
        }
        if xmax - xmin < 1e-12 {
            xmax = xmin + 1.0;
        }
        if ymax - ymin < 1e-12 {
            ymax = ymin + 1.0;
        }
        let padx = 0.04 * (xmax - xmin);
        let pady = 0.06 * (ymax - ymin);
        xmin -= padx;
        xmax += padx;
        ymin -= pady;
        ymax += pady;
        let px = |x: f64| MARGIN_L + (x - xmin) / (xmax - xmin) * (WIDTH - MARGIN_L - MARGIN_R);
        let py = |y: f64| HEIGHT - MARGIN_B - (y - ymin) / (ymax - ymin) * (HEIGHT - MARGIN_T - MARGIN_B);

        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
             viewBox=\"0 0 {WIDTH} {HEIGHT}\" font-family=\"sans-serif\">\n"
        ));
        svg.push_str(&format!(
            "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
            WIDTH / 2.0,
            escape(&self.title)
        ));
        // Axes.
        svg.push_str(&format!(
            "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
            WIDTH - MARGIN_L - MARGIN_R,
            HEIGHT - MARGIN_T - MARGIN_B
        ));
        for (value, frac) in ticks(xmin, xmax) {
            let x = px(value);
            let label = tick_label(value, self.log_x);
            let _ = frac;
            svg.push_str(&format!(
                "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\"/>\n",
                HEIGHT - MARGIN_B,
                HEIGHT - MARGIN_B + 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{x}\" y=\"{}\" text-anchor=\"middle\" font-size=\"11\">{label}</text>\n",
                HEIGHT - MARGIN_B + 18.0
            ));
        }
        for (value, _) in ticks(ymin, ymax) {
            let y = py(value);
            let label = tick_label(value, self.log_y);
            svg.push_str(&format!(
                "<line x1=\"{}\" y1=\"{y}\" x2=\"{MARGIN_L}\" y2=\"{y}\" stroke=\"black\"/>\n",
                MARGIN_L - 5.0
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" text-anchor=\"end\" font-size=\"11\">{label}</text>\n",
                MARGIN_L - 8.0,
                y + 4.0
            ));
        }
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
            WIDTH / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        ));
        svg.push_str(&format!(
            "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 {})\">{}</text>\n",
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(&self.y_label)
        ));

        for (i, pts) in &data {
            let color = PALETTE[i % PALETTE.len()];
            match self.series[*i].style {
                SeriesStyle::Line => {
                    if pts.len() >= 2 {
                        let path: Vec<String> = pts
                            .iter()
                            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                            .collect();
                        svg.push_str(&format!(
                            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
                            path.join(" ")
                        ));
                    }
                }
                SeriesStyle::Points => {
                    for &(x, y) in pts {
                        svg.push_str(&format!(
                            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>\n",
                            px(x),
                            py(y)
                        ));
                    }
                }
                SeriesStyle::Bars => {
                    let base = py(ymin.max(0.0));
                    for &(x, y) in pts {
                        let cx = px(x);
                        let top = py(y);
                        svg.push_str(&format!(
                            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"4\" height=\"{:.2}\" fill=\"{color}\" fill-opacity=\"0.6\"/>\n",
                            cx - 2.0,
                            top.min(base),
                            (base - top).abs()
                        ));
                    }
                }
            }
        }
        // Legend.
        for (i, line) in self.series.iter().enumerate() {
            let y = MARGIN_T + 16.0 + 16.0 * i as f64;
            let color = PALETTE[i % PALETTE.len()];
            svg.push_str(&format!(
                "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"4\" fill=\"{color}\"/>\n",
                WIDTH - MARGIN_R - 150.0,
                y - 4.0
            ));
            svg.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n",
                WIDTH - MARGIN_R - 132.0,
                y,
                escape(&line.label)
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(value: f64, log: bool) -> String {
    if log {
        format!("1e{value:.0}")
    } else if value.abs() >= 1000.0 || (value != 0.0 && value.abs() < 0.01) {
        format!("{value:.1e}")
    } else {
        format!("{value:.3}")
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string()
    }
}

/// About five round-valued ticks across [lo, hi].
fn ticks(lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let span = hi - lo;
    let raw_step = span / 5.0;
    let mag = 10f64.powf(raw_step.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw_step)
        .unwrap_or(mag * 10.0);
    let mut v = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while v <= hi + 1e-9 * span {
        out.push((v, (v - lo) / span));
        v += step;
    }
    out
}
