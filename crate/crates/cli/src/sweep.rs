//! Parameter sweeps: one table per requested gain, one column group per model.

use std::path::PathBuf;

use mopo::dispersion::derived_scales;
use mopo::spectra::{spectrum_terms_on_grid, tuning_metadata, SpectrumRequest, SpectrumTerms};
use mopo::table::DataTable;
use mopo::{MaterialDatabase, Model};

use crate::config::{Delay, Settings};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub file_name: String,
    pub table: DataTable,
}

pub fn build(settings: &Settings, db: &MaterialDatabase) -> CliResult<Vec<SweepTable>> {
    let base = settings.tuning(db)?;
    let xs = settings.grid.values();
    let both =
        settings.models.contains(&Model::Exact) && settings.models.contains(&Model::Linearized);

    let mut tables = Vec::with_capacity(settings.gains.len());
    for (index, point) in settings.gains.iter().enumerate() {
        let tuning = base.clone().with_gain(point.gain)?;
        let scales = derived_scales(&tuning)?;
        let delta_t = match settings.delay {
            Delay::Seconds(t) => t,
            Delay::TauGvm => scales.tau_gvm,
        };

        let mut columns = vec!["omega_tilde".to_string()];
        let mut results: Vec<(Model, Vec<SpectrumTerms>)> = Vec::new();
        for &model in &settings.models {
            let request = SpectrumRequest {
                phase: settings.phase,
                delta_t,
                branch: settings.branch,
                model,
            };
            results.push((
                model,
                spectrum_terms_on_grid(&tuning, &scales, &request, &xs)?,
            ));
            columns.push(format!("sigma_{model}"));
            columns.push(format!("balance_{model}"));
        }
        if both {
            columns.push("rel_diff".into());
        }

        let mut table = DataTable::new(columns);
        for (k, v) in tuning_metadata(&tuning) {
            table.push_meta(k, v);
        }
        table.push_meta("g", tuning.gain());
        if let Some(eps) = point.epsilon {
            table.push_meta("epsilon", eps);
        }
        table.push_meta(
            "model",
            settings
                .models
                .iter()
                .map(Model::as_str)
                .collect::<Vec<_>>()
                .join(","),
        );
        table.push_meta("phi_sum", settings.phase.label());
        table.push_meta("branch", settings.branch.as_str());
        table.push_meta("delta_t", format!("{delta_t:e}"));
        table.push_meta("delta_t_request", settings.delay.label());
        table.push_meta("pump_phase", tuning.pump_phase());
        table.push_meta("qpm_order", tuning.qpm_order());
        table.push_meta("omega_gvs", format!("{:e}", scales.omega_gvs));
        table.push_meta("omega_gvm", format!("{:e}", scales.omega_gvm.to_f64()));
        table.push_meta("grid", settings.grid.describe());

        let sigma_of = |m: Model, i: usize| {
            results
                .iter()
                .find(|(model, _)| *model == m)
                .map(|(_, terms)| terms[i].sigma())
        };
        for (i, &x) in xs.iter().enumerate() {
            let mut row = vec![x];
            for (_, terms) in &results {
                row.push(terms[i].sigma());
                row.push(terms[i].balance());
            }
            if both {
                let exact = sigma_of(Model::Exact, i).unwrap_or(f64::NAN);
                let linear = sigma_of(Model::Linearized, i).unwrap_or(f64::NAN);
                row.push((exact - linear).abs() / linear.abs());
            }
            table.push_row(row)?;
        }
        tables.push(SweepTable {
            file_name: format!("sweep_{index:03}.tsv"),
            table,
        });
    }
    Ok(tables)
}

pub fn run(settings: &Settings, db: &MaterialDatabase) -> CliResult<Vec<PathBuf>> {
    let tables = build(settings, db)?;
    std::fs::create_dir_all(&settings.out).map_err(|e| CliError::io(&settings.out, e))?;
    let mut written = Vec::new();
    for t in tables {
        let path = settings.out.join(&t.file_name);
        let text = t.table.render()?;
        std::fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ConfigLayer;

    fn settings(text: &str) -> Settings {
        ConfigLayer::from_toml(text).unwrap().resolve().unwrap()
    }

    #[test]
    fn one_gain_one_table() {
        let s = settings("gains = [1.2]\npoints = 101\nspan = 4.0");
        let t = build(&s, MaterialDatabase::bundled()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].table.rows.len(), 101);
        assert_eq!(
            t[0].table.columns,
            vec!["omega_tilde", "sigma_exact", "balance_exact"]
        );
    }

    #[test]
    fn both_models_add_relative_difference() {
        let s = settings(
            "epsilons = [0.1, 0.3]\npoints = 51\nspan = 5.0\nmodels = [\"exact\", \"linearized\"]",
        );
        let t = build(&s, MaterialDatabase::bundled()).unwrap();
        assert_eq!(t.len(), 2);
        let rel = t[0].table.column("rel_diff").unwrap();
        assert!(rel.iter().all(|r| *r < 0.01), "{rel:?}");
        assert_eq!(t[1].table.meta("epsilon"), Some("0.3"));
    }

    #[test]
    fn compensating_delay_balances() {
        let s = settings(
            "signal = 1300.0\ngains = [1.3]\npoints = 41\nspan = 4.0\nmodels = [\"linearized\"]\n\
             delta_t = \"tau_gvm\"\nphase = 0.4",
        );
        let t = &build(&s, MaterialDatabase::bundled()).unwrap()[0].table;
        let bal = t.column("balance_linearized").unwrap();
        assert!(bal.iter().all(|b| *b < 1e-12), "{bal:?}");
        assert_ne!(t.meta("delta_t"), Some("0e0"));
    }
}
