//! Front exports: CSV, JSON and an SVG scatter plot.

use std::fmt;
use std::str::FromStr;

use morpho_core::objectives::ObjectiveVector;
use morpho_core::GENOME_LEN;
use plotters::prelude::*;

use crate::error::{Error, Result};
use crate::records::IndividualRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Alpha,
    Lambda,
    Size,
}

impl Objective {
    pub fn of(self, o: &ObjectiveVector) -> f64 {
        match self {
            Objective::Alpha => o.alpha,
            Objective::Lambda => o.lambda,
            Objective::Size => o.size,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Objective::Alpha => "thrust-to-weight ratio",
            Objective::Lambda => "maneuverability",
            Objective::Size => "size [m^2]",
        }
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "alpha" => Ok(Objective::Alpha),
            "lambda" => Ok(Objective::Lambda),
            "size" => Ok(Objective::Size),
            other => Err(Error::validation(format!(
                "unknown objective `{other}` (expected alpha, lambda or size)"
            ))),
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Alpha => "alpha",
            Objective::Lambda => "lambda",
            Objective::Size => "size",
        })
    }
}

/// Plot axes written `X:Y`, e.g. `lambda:alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Axes {
    pub x: Objective,
    pub y: Objective,
}

impl Default for Axes {
    fn default() -> Self {
        Self {
            x: Objective::Lambda,
            y: Objective::Alpha,
        }
    }
}

impl FromStr for Axes {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (x, y) = s
            .split_once(':')
            .ok_or_else(|| Error::validation(format!("axes must look like A:B, got `{s}`")))?;
        let axes = Axes {
            x: x.parse()?,
            y: y.parse()?,
        };
        if axes.x == axes.y {
            return Err(Error::validation(format!("axes must differ, got `{s}`")));
        }
        Ok(axes)
    }
}

/// `Static`, `Spinning`, `None` or `Invalid`.
pub fn tier_label(o: &ObjectiveVector) -> &'static str {
    if o.invalid {
        return "Invalid";
    }
    match o.hover_class {
        morpho_core::HoverClass::Static => "Static",
        morpho_core::HoverClass::Spinning => "Spinning",
        morpho_core::HoverClass::None => "None",
    }
}

/// Columns: id, n_props, alpha, lambda, size, hover_class, gene_0..gene_40.
pub fn front_csv(front: &[IndividualRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["id", "n_props", "alpha", "lambda", "size", "hover_class"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((0..GENOME_LEN).map(|i| format!("gene_{i}")));
    w.write_record(&header).map_err(csv_err)?;
    for r in front {
        let mut row = vec![
            r.id.to_string(),
            r.n_props.to_string(),
            r.objectives.alpha.to_string(),
            r.objectives.lambda.to_string(),
            r.objectives.size.to_string(),
            tier_label(&r.objectives).to_string(),
        ];
        row.extend(r.genes.iter().map(f64::to_string));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| Error::validation(format!("csv: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::validation(format!("csv: {e}"))
}

pub fn front_json(front: &[IndividualRecord]) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(front).expect("records serialize");
    out.push(b'\n');
    out
}

const PROP_COLORS: [RGBColor; 5] = [
    RGBColor(31, 119, 180),
    RGBColor(255, 127, 14),
    RGBColor(44, 160, 44),
    RGBColor(214, 39, 40),
    RGBColor(148, 103, 189),
];

fn padded_range(values: impl Iterator<Item = f64>) -> std::ops::Range<f64> {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return 0.0..1.0;
    }
    let pad = if hi > lo {
        0.05 * (hi - lo)
    } else {
        0.05 * lo.abs().max(1.0)
    };
    (lo - pad)..(hi + pad)
}

/// Scatter of the front on two objectives, coloured by propeller count,
/// with the reference design drawn as a black cross.
pub fn front_svg(front: &[IndividualRecord], axes: Axes, baseline: &ObjectiveVector) -> Result<String> {
    let pts: Vec<(f64, f64, usize)> = front
        .iter()
        .filter(|r| !r.objectives.invalid)
        .map(|r| (axes.x.of(&r.objectives), axes.y.of(&r.objectives), r.n_props))
        .collect();
    let base = (axes.x.of(baseline), axes.y.of(baseline));
    let x_range = padded_range(pts.iter().map(|p| p.0).chain([base.0]));
    let y_range = padded_range(pts.iter().map(|p| p.1).chain([base.1]));

    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (800, 600)).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let mut chart = ChartBuilder::on(&root)
            .margin(20)
            .x_label_area_size(50)
            .y_label_area_size(70)
            .build_cartesian_2d(x_range, y_range)
            .map_err(plot_err)?;
        chart
            .configure_mesh()
            .x_desc(axes.x.label())
            .y_desc(axes.y.label())
            .draw()
            .map_err(plot_err)?;

        for (k, color) in PROP_COLORS.iter().enumerate() {
            let count = k + 4;
            let series: Vec<(f64, f64)> = pts.iter().filter(|p| p.2 == count).map(|p| (p.0, p.1)).collect();
            if series.is_empty() {
                continue;
            }
            let color = *color;
            chart
                .draw_series(series.into_iter().map(|p| Circle::new(p, 4, color.filled())))
                .map_err(plot_err)?
                .label(format!("{count} propellers"))
                .legend(move |(x, y)| Circle::new((x, y), 4, color.filled()));
        }
        chart
            .draw_series(std::iter::once(Cross::new(base, 8, BLACK.stroke_width(2))))
            .map_err(plot_err)?
            .label("baseline quadcopter")
            .legend(|(x, y)| Cross::new((x, y), 5, BLACK.stroke_width(2)));
        chart
            .configure_series_labels()
            .background_style(WHITE.mix(0.8))
            .border_style(BLACK)
            .draw()
            .map_err(plot_err)?;
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

fn plot_err<E: std::fmt::Display>(e: E) -> Error {
    Error::validation(format!("plot: {e}"))
}
