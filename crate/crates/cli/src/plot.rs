//! Line plots rendered to SVG.

use std::path::Path;

use plotters::prelude::*;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub curves: Vec<Curve>,
}

const PALETTE: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(214, 39, 40),
    RGBColor(44, 160, 44),
    RGBColor(148, 103, 189),
    RGBColor(255, 127, 14),
    RGBColor(23, 190, 207),
];

impl PlotSpec {
    /// Points that can be drawn: finite, and positive on a log axis.
    fn drawable(&self, curve: &Curve) -> Vec<(f64, f64)> {
        curve
            .points
            .iter()
            .copied()
            .filter(|(x, y)| x.is_finite() && y.is_finite() && (!self.log_y || *y > 0.0))
            .collect()
    }

    fn bounds(&self) -> Option<((f64, f64), (f64, f64))> {
        let pts: Vec<(f64, f64)> = self.curves.iter().flat_map(|c| self.drawable(c)).collect();
        if pts.is_empty() {
            return None;
        }
        let fold = |f: fn(&(f64, f64)) -> f64| {
            pts.iter()
                .map(f)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                })
        };
        let (x0, x1) = fold(|p| p.0);
        let (mut y0, mut y1) = fold(|p| p.1);
        if self.log_y {
            y0 /= 1.5;
            y1 *= 1.5;
        } else {
            let pad = 0.05 * (y1 - y0).max(1e-12);
            y0 = (y0 - pad).min(0.0);
            y1 += pad;
        }
        let x1 = if x1 > x0 { x1 } else { x0 + 1.0 };
        Some(((x0, x1), (y0, y1)))
    }

    pub fn render_svg(&self, path: &Path) -> CliResult<()> {
        let fail = |e: &dyn std::fmt::Display| CliError::Plot {
            path: path.to_path_buf(),
            message: e.to_string(),
        };
        let ((x0, x1), (y0, y1)) = self.bounds().ok_or_else(|| fail(&"no drawable points"))?;
        let root = SVGBackend::new(path, (800, 560)).into_drawing_area();
        root.fill(&WHITE).map_err(|e| fail(&e))?;
        let mut builder = ChartBuilder::on(&root);
        builder
            .caption(&self.title, ("sans-serif", 20))
            .margin(12)
            .x_label_area_size(44)
            .y_label_area_size(70);
        if self.log_y {
            let mut chart = builder
                .build_cartesian_2d(x0..x1, (y0..y1).log_scale())
                .map_err(|e| fail(&e))?;
            chart
                .configure_mesh()
                .x_desc(&self.x_label)
                .y_desc(&self.y_label)
                .y_label_formatter(&|v| format!("{v:.0e}"))
                .draw()
                .map_err(|e| fail(&e))?;
            for (i, c) in self.curves.iter().enumerate() {
                let color = PALETTE[i % PALETTE.len()];
                chart
                    .draw_series(LineSeries::new(self.drawable(c), color.stroke_width(2)))
                    .map_err(|e| fail(&e))?
                    .label(&c.label)
                    .legend(move |(x, y)| PathElement::new([(x, y), (x + 20, y)], color));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(|e| fail(&e))?;
        } else {
            let mut chart = builder
                .build_cartesian_2d(x0..x1, y0..y1)
                .map_err(|e| fail(&e))?;
            chart
                .configure_mesh()
                .x_desc(&self.x_label)
                .y_desc(&self.y_label)
                .draw()
                .map_err(|e| fail(&e))?;
            for (i, c) in self.curves.iter().enumerate() {
                let color = PALETTE[i % PALETTE.len()];
                chart
                    .draw_series(LineSeries::new(self.drawable(c), color.stroke_width(2)))
                    .map_err(|e| fail(&e))?
                    .label(&c.label)
                    .legend(move |(x, y)| PathElement::new([(x, y), (x + 20, y)], color));
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(|e| fail(&e))?;
        }
        root.present().map_err(|e| fail(&e))
    }
}
