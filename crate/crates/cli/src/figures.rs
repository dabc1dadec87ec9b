//! The five reference figures. Each produces one or more data tables with a
//! matching plot.
//!
//! All spectra figures use degenerate PPLN pumped at 800 nm, a 1 cm crystal,
//! the fixed quadrature phase and zero delay.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use mopo::dispersion::derived_scales;
use mopo::spectra::{
    near_threshold_parabola, near_threshold_regime, spectrum_general, spectrum_series,
    spectrum_universal, tuning_metadata, SpectrumRequest,
};
use mopo::table::DataTable;
use mopo::units::wavelength_to_angular;
use mopo::{
    Branch, FrequencyGrid, MaterialDatabase, Model, PhasePrescription, QuadratureSetting,
    SignalWavelength, TuningConfiguration, THRESHOLD_GAIN,
};
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::plot::{Curve, PlotSpec};

pub const DEFAULT_GAINS: [f64; 5] = [1.0, 1.2, 1.4, 1.5, 1.55];
pub const FIG4A_GAINS: [f64; 3] = [1.2, 1.4, 1.5];
const PUMP_WAVELENGTH: f64 = 800e-9;
const CRYSTAL_LENGTH: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig2,
    Fig3,
    Fig4a,
    Fig4b,
    Fig5,
}

impl FigureName {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureName::Fig2 => "fig2",
            FigureName::Fig3 => "fig3",
            FigureName::Fig4a => "fig4a",
            FigureName::Fig4b => "fig4b",
            FigureName::Fig5 => "fig5",
        }
    }

    fn takes_gains(&self) -> bool {
        matches!(
            self,
            FigureName::Fig2 | FigureName::Fig3 | FigureName::Fig4a
        )
    }
}

/// Command-line adjustments of a figure.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FigureOptions {
    pub gains: Option<Vec<f64>>,
    pub points: Option<usize>,
    pub span: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureOutput {
    pub stem: String,
    pub table: DataTable,
    pub plot: PlotSpec,
}

impl FigureOutput {
    /// Writes `<stem>.tsv` and `<stem>.svg` into `dir`, returning both paths.
    pub fn write(&self, dir: &Path) -> CliResult<Vec<PathBuf>> {
        let tsv = dir.join(format!("{}.tsv", self.stem));
        let text = self.table.render()?;
        std::fs::write(&tsv, text).map_err(|e| CliError::io(&tsv, e))?;
        let svg = dir.join(format!("{}.svg", self.stem));
        self.plot.render_svg(&svg)?;
        Ok(vec![tsv, svg])
    }
}

pub fn reference_tuning(db: &MaterialDatabase) -> CliResult<TuningConfiguration> {
    let ppln = db.get(mopo::materials::PPLN)?;
    Ok(TuningConfiguration::phase_matched(
        ppln,
        PUMP_WAVELENGTH,
        SignalWavelength::Degenerate,
        1,
        CRYSTAL_LENGTH,
    )?)
}

pub fn build(
    name: FigureName,
    options: &FigureOptions,
    db: &MaterialDatabase,
) -> CliResult<Vec<FigureOutput>> {
    if options.gains.is_some() && !name.takes_gains() {
        return Err(CliError::Config(format!(
            "{} does not take --g",
            name.as_str()
        )));
    }
    match name {
        FigureName::Fig2 => spectra_figure(name, Branch::Squeeze, options, db),
        FigureName::Fig3 => spectra_figure(name, Branch::Antisqueeze, options, db),
        FigureName::Fig4a => fig4a(options, db),
        FigureName::Fig4b => fig4b(options, db),
        FigureName::Fig5 => fig5(options, db),
    }
}

pub fn run(
    name: FigureName,
    options: &FigureOptions,
    db: &MaterialDatabase,
    out: &Path,
) -> CliResult<Vec<PathBuf>> {
    let outputs = build(name, options, db)?;
    std::fs::create_dir_all(out).map_err(|e| CliError::io(out, e))?;
    let mut written = Vec::new();
    for o in &outputs {
        written.extend(o.write(out)?);
    }
    Ok(written)
}

fn column_name(prefix: &str, g: f64) -> String {
    format!("{prefix}_g{g}")
}

fn gain_list(options: &FigureOptions, default: &[f64]) -> Vec<f64> {
    options.gains.clone().unwrap_or_else(|| default.to_vec())
}

fn curves_from(table: &DataTable, x: &str, labels: &[(String, String)]) -> Vec<Curve> {
    let xs = table.column(x).unwrap_or_default();
    labels
        .iter()
        .map(|(col, label)| Curve {
            label: label.clone(),
            points: xs
                .iter()
                .copied()
                .zip(table.column(col).unwrap_or_default())
                .collect(),
        })
        .collect()
}

fn spectra_figure(
    name: FigureName,
    branch: Branch,
    options: &FigureOptions,
    db: &MaterialDatabase,
) -> CliResult<Vec<FigureOutput>> {
    let grid =
        FrequencyGrid::symmetric(options.span.unwrap_or(6.0), options.points.unwrap_or(1201))
            .map_err(|e| CliError::Config(e.to_string()))?;
    let gains = gain_list(options, &DEFAULT_GAINS);
    let base = reference_tuning(db)?;
    let request = SpectrumRequest {
        phase: PhasePrescription::Fixed,
        delta_t: 0.0,
        branch,
        model: Model::Exact,
    };
    let mut columns = vec!["omega_tilde".to_string()];
    let mut series = Vec::new();
    for &g in &gains {
        let tuning = base.clone().with_gain(g)?;
        let scales = derived_scales(&tuning)?;
        series.push(spectrum_series(&tuning, &scales, &request, &grid)?);
        columns.push(column_name("sigma", g));
    }

    let mut table = DataTable::new(columns.clone());
    let first = &series[0];
    for (k, v) in &first.metadata {
        if k != "g" {
            table.push_meta(k.clone(), v);
        }
    }
    table.push_meta("g", join(&gains));
    for (i, &x) in first.grid.iter().enumerate() {
        let mut row = vec![x];
        row.extend(series.iter().map(|s| s.values[i]));
        table.push_row(row)?;
    }

    let labels: Vec<(String, String)> = columns[1..]
        .iter()
        .zip(&gains)
        .map(|(c, g)| (c.clone(), format!("g = {g}")))
        .collect();
    let (title, y_label, log_y) = match branch {
        Branch::Squeeze => ("Squeezing spectra", "Sigma (shot noise = 1)", false),
        Branch::Antisqueeze => ("Antisqueezing spectra", "Sigma (shot noise = 1)", true),
    };
    let plot = PlotSpec {
        title: title.into(),
        x_label: "Omega / Omega_gvs".into(),
        y_label: y_label.into(),
        log_y,
        curves: curves_from(&table, "omega_tilde", &labels),
    };
    let mut outputs = vec![FigureOutput {
        stem: name.as_str().to_string(),
        table: table.clone(),
        plot: plot.clone(),
    }];

    if branch == Branch::Antisqueeze {
        let mut normalized = table.clone();
        normalized.push_meta("normalization", "unit peak per curve");
        for c in 1..normalized.columns.len() {
            let peak = normalized
                .rows
                .iter()
                .map(|r| r[c])
                .fold(f64::NEG_INFINITY, f64::max);
            for r in &mut normalized.rows {
                r[c] /= peak;
            }
        }
        outputs.push(FigureOutput {
            stem: format!("{}_normalized", name.as_str()),
            plot: PlotSpec {
                title: "Antisqueezing spectra, normalized to unit peak".into(),
                y_label: "Sigma / max Sigma".into(),
                log_y: false,
                curves: curves_from(&normalized, "omega_tilde", &labels),
                ..plot
            },
            table: normalized,
        });
    }
    Ok(outputs)
}

/// Universal spectrum against the near-threshold parabola, with the exact
/// PPLN spectrum alongside.
fn fig4a(options: &FigureOptions, db: &MaterialDatabase) -> CliResult<Vec<FigureOutput>> {
    let grid = FrequencyGrid::symmetric(options.span.unwrap_or(1.5), options.points.unwrap_or(601))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let gains = gain_list(options, &FIG4A_GAINS);
    let base = reference_tuning(db)?;
    let xs = grid.values();

    let mut columns = vec!["omega_tilde".to_string()];
    let mut per_gain: Vec<[Vec<f64>; 3]> = Vec::new();
    for &g in &gains {
        let tuning = base.clone().with_gain(g)?;
        let scales = derived_scales(&tuning)?;
        let setting = QuadratureSetting::fixed(&tuning);
        let eps = THRESHOLD_GAIN - g;
        if let Some(w) = near_threshold_regime(eps, xs[0]) {
            log::warn!("fig4a: {w}");
        }
        let universal: Vec<f64> = xs
            .iter()
            .map(|&x| spectrum_universal(g, x, Branch::Squeeze))
            .collect();
        let approx: Vec<f64> = xs
            .iter()
            .map(|&x| near_threshold_parabola(eps, x))
            .collect();
        let exact = xs
            .par_iter()
            .map(|&x| {
                spectrum_general(
                    &tuning,
                    &scales,
                    &setting,
                    scales.denormalized(x),
                    Model::Exact,
                )
            })
            .collect::<mopo::Result<Vec<f64>>>()?;
        columns.extend(["universal", "approx", "exact"].map(|p| column_name(p, g)));
        per_gain.push([universal, approx, exact]);
    }
    let mut table = DataTable::new(columns.clone());
    for (k, v) in tuning_metadata(&base) {
        table.push_meta(k, v);
    }
    table.push_meta("g", join(&gains));
    table.push_meta("phi_sum", "fixed");
    table.push_meta("branch", "squeeze");
    table.push_meta("delta_t", format!("{:e}", 0.0));
    table.push_meta("grid", grid.describe());
    for (i, &x) in xs.iter().enumerate() {
        let mut row = vec![x];
        for cols in &per_gain {
            row.extend(cols.iter().map(|c| c[i]));
        }
        table.push_row(row)?;
    }
    let labels: Vec<(String, String)> = gains
        .iter()
        .flat_map(|&g| {
            [
                (column_name("universal", g), format!("universal, g = {g}")),
                (column_name("approx", g), format!("near-threshold, g = {g}")),
            ]
        })
        .collect();
    Ok(vec![FigureOutput {
        stem: "fig4a".into(),
        plot: PlotSpec {
            title: "Exact vs near-threshold squeezing spectrum".into(),
            x_label: "Omega / Omega_gvs".into(),
            y_label: "Sigma".into(),
            log_y: false,
            curves: curves_from(&table, "omega_tilde", &labels),
        },
        table,
    }])
}

/// `Σ(0)` against the distance from threshold `ε = π/2 − g`.
fn fig4b(options: &FigureOptions, db: &MaterialDatabase) -> CliResult<Vec<FigureOutput>> {
    let span = options.span.unwrap_or(0.5);
    let n = options.points.unwrap_or(100);
    if !(span > 0.0 && span < THRESHOLD_GAIN) || n == 0 {
        return Err(CliError::Config(format!(
            "fig4b needs 0 < span < pi/2 and at least one point, got span={span} points={n}"
        )));
    }
    let base = reference_tuning(db)?;
    let mut table = DataTable::new(
        [
            "epsilon",
            "g",
            "sigma_exact",
            "sigma_universal",
            "sigma_approx",
        ]
        .map(String::from)
        .to_vec(),
    );
    for (k, v) in tuning_metadata(&base) {
        table.push_meta(k, v);
    }
    table.push_meta("model", "exact");
    table.push_meta("phi_sum", "fixed");
    table.push_meta("omega", 0);
    table.push_meta(
        "grid",
        format!("epsilon = span*i/N, i=1..N, span={span} N={n}"),
    );
    for i in 1..=n {
        let eps = span * i as f64 / n as f64;
        let g = THRESHOLD_GAIN - eps;
        let tuning = base.clone().with_gain(g)?;
        let scales = derived_scales(&tuning)?;
        let exact = spectrum_general(
            &tuning,
            &scales,
            &QuadratureSetting::fixed(&tuning),
            0.0,
            Model::Exact,
        )?;
        let universal = spectrum_universal(g, 0.0, Branch::Squeeze);
        let approx = near_threshold_parabola(eps, 0.0);
        table.push_row(vec![eps, g, exact, universal, approx])?;
    }
    let labels = [
        ("sigma_exact".to_string(), "exact".to_string()),
        ("sigma_approx".to_string(), "eps^2 / 4".to_string()),
    ];
    Ok(vec![FigureOutput {
        stem: "fig4b".into(),
        plot: PlotSpec {
            title: "Squeezing at zero frequency vs distance from threshold".into(),
            x_label: "epsilon = pi/2 - g".into(),
            y_label: "Sigma(0)".into(),
            log_y: true,
            curves: curves_from(&table, "epsilon", &labels),
        },
        table,
    }])
}

/// Spectral scales over the tuning curve, `ω_s = ω_p/2 (1 + x)`.
fn fig5(options: &FigureOptions, db: &MaterialDatabase) -> CliResult<Vec<FigureOutput>> {
    let span = options.span.unwrap_or(0.5);
    if !(span > 0.0 && span < 1.0) {
        return Err(CliError::Config(format!(
            "fig5 needs 0 < span < 1, got {span}"
        )));
    }
    let grid = FrequencyGrid::symmetric(span, options.points.unwrap_or(201))
        .map_err(|e| CliError::Config(e.to_string()))?;
    let ppln = db.get(mopo::materials::PPLN)?;
    let omega_p = wavelength_to_angular(PUMP_WAVELENGTH);
    let rows = grid
        .values()
        .par_iter()
        .map(|&x| -> CliResult<Vec<f64>> {
            let signal = if x == 0.0 {
                SignalWavelength::Degenerate
            } else {
                SignalWavelength::Wavelength(mopo::units::angular_to_wavelength(
                    0.5 * omega_p * (1.0 + x),
                ))
            };
            let t = TuningConfiguration::phase_matched(
                ppln,
                PUMP_WAVELENGTH,
                signal,
                1,
                CRYSTAL_LENGTH,
            )?;
            let s = derived_scales(&t)?;
            Ok(vec![
                t.lambda_s(),
                t.lambda_i(),
                t.poling_period(),
                s.omega_gvs,
                s.omega_gvm.to_f64().abs(),
            ])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut table = DataTable::new(
        ["lambda_s", "lambda_i", "Lambda", "omega_gvs", "omega_gvm"]
            .map(String::from)
            .to_vec(),
    );
    table.push_meta("material", ppln.name());
    table.push_meta("lambda_p", format!("{PUMP_WAVELENGTH:e}"));
    table.push_meta("l_c", format!("{CRYSTAL_LENGTH:e}"));
    table.push_meta("qpm_order", 1);
    table.push_meta(
        "grid",
        format!("omega_s = omega_p/2 (1 + x), x: {}", grid.describe()),
    );
    table.push_meta(
        "units",
        "m, rad/s; omega_gvm is |Omega_gvm|, inf at degeneracy",
    );
    for r in rows {
        table.push_row(r)?;
    }
    let mut curves = curves_from(
        &table,
        "lambda_s",
        &[
            ("omega_gvs".into(), "Omega_gvs".into()),
            ("omega_gvm".into(), "|Omega_gvm|".into()),
        ],
    );
    for c in &mut curves {
        for p in &mut c.points {
            p.0 *= 1e6;
        }
    }
    Ok(vec![FigureOutput {
        stem: "fig5".into(),
        plot: PlotSpec {
            title: "Spectral scales along the PPLN tuning curve".into(),
            x_label: "signal wavelength (um)".into(),
            y_label: "rad/s".into(),
            log_y: true,
            curves,
        },
        table,
    }])
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(f64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}
