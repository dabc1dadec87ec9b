//! Run configuration: a TOML file layered under command-line overrides.
//!
//! ```toml
//! material = "LiNbO3-e"
//! pump_nm = 800.0
//! signal = "degenerate"      # or a wavelength in nm
//! crystal_length_mm = 10.0
//! qpm_order = 1
//! pump_phase = 0.0
//! gains = [1.0, 1.5]          # or: epsilons = [0.1]  (g = pi/2 - epsilon)
//! models = ["exact", "linearized"]
//! phase = "fixed"             # optimal | optimal-linear | optimal-linear-gvm | <rad>
//! branch = "squeeze"
//! delta_t = 0.0               # seconds, or "tau_gvm"
//! span = 6.0                  # half-width of the grid in units of Omega_gvs
//! points = 1201
//! out = "out"
//! ```

use std::borrow::Cow;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mopo::bogoliubov::THRESHOLD_GUARD;
use mopo::materials::PPLN;
use mopo::{
    Branch, FrequencyGrid, MaterialDatabase, Model, PhasePrescription, SignalWavelength,
    TuningConfiguration, THRESHOLD_GAIN,
};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// Environment variable naming a directory of material files that replaces
/// the bundled database.
pub const MATERIALS_DIR_ENV: &str = "MOPO_MATERIALS_DIR";

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum SignalSpec {
    Named(String),
    Nanometres(f64),
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum PhaseSpec {
    Named(String),
    Radians(f64),
}

#[derive(Debug, Clone, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DelaySpec {
    Named(String),
    Seconds(f64),
}

/// One layer of settings. Every field is optional so that a file and the
/// command line can be merged field by field.
#[derive(Debug, Clone, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub material: Option<String>,
    pub pump_nm: Option<f64>,
    pub signal: Option<SignalSpec>,
    pub crystal_length_mm: Option<f64>,
    pub qpm_order: Option<u32>,
    pub pump_phase: Option<f64>,
    pub gains: Option<Vec<f64>>,
    pub epsilons: Option<Vec<f64>>,
    pub models: Option<Vec<String>>,
    pub phase: Option<PhaseSpec>,
    pub branch: Option<String>,
    pub delta_t: Option<DelaySpec>,
    pub span: Option<f64>,
    pub points: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Fields set in `self` win over those of `base`. Setting either gain
    /// list on top replaces both lists of the base.
    pub fn over(self, base: ConfigLayer) -> ConfigLayer {
        let gain_lists = if self.gains.is_some() || self.epsilons.is_some() {
            (self.gains, self.epsilons)
        } else {
            (base.gains, base.epsilons)
        };
        ConfigLayer {
            material: self.material.or(base.material),
            pump_nm: self.pump_nm.or(base.pump_nm),
            signal: self.signal.or(base.signal),
            crystal_length_mm: self.crystal_length_mm.or(base.crystal_length_mm),
            qpm_order: self.qpm_order.or(base.qpm_order),
            pump_phase: self.pump_phase.or(base.pump_phase),
            gains: gain_lists.0,
            epsilons: gain_lists.1,
            models: self.models.or(base.models),
            phase: self.phase.or(base.phase),
            branch: self.branch.or(base.branch),
            delta_t: self.delta_t.or(base.delta_t),
            span: self.span.or(base.span),
            points: self.points.or(base.points),
            out: self.out.or(base.out),
        }
    }

    pub fn resolve(self) -> CliResult<Settings> {
        let signal = match self.signal {
            None => SignalWavelength::Degenerate,
            Some(SignalSpec::Named(s)) if s.eq_ignore_ascii_case("degenerate") => {
                SignalWavelength::Degenerate
            }
            Some(SignalSpec::Named(s)) => {
                return Err(CliError::Config(format!(
                    "signal must be \"degenerate\" or a wavelength in nm, got \"{s}\""
                )))
            }
            Some(SignalSpec::Nanometres(nm)) => SignalWavelength::Wavelength(nm / 1e9),
        };
        let delay = match self.delta_t {
            None => Delay::Seconds(0.0),
            Some(DelaySpec::Seconds(t)) if t.is_finite() => Delay::Seconds(t),
            Some(DelaySpec::Named(s)) if s == "tau_gvm" => Delay::TauGvm,
            Some(other) => {
                return Err(CliError::Config(format!(
                    "delta_t must be a number of seconds or \"tau_gvm\", got {other:?}"
                )))
            }
        };
        let gains = match (self.gains, self.epsilons) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "give either gains or epsilons, not both".into(),
                ))
            }
            (Some(g), None) => g.into_iter().map(GainPoint::gain).collect(),
            (None, Some(e)) => e.into_iter().map(GainPoint::epsilon).collect(),
            (None, None) => vec![GainPoint::gain(1.0)],
        };
        let models = self
            .models
            .unwrap_or_else(|| vec!["exact".into()])
            .iter()
            .map(|m| parse_model(m))
            .collect::<CliResult<Vec<_>>>()?;
        let settings = Settings {
            material: self.material.unwrap_or_else(|| PPLN.to_string()),
            pump_wavelength: self.pump_nm.unwrap_or(800.0) / 1e9,
            signal,
            crystal_length: self.crystal_length_mm.unwrap_or(10.0) / 1e3,
            qpm_order: self.qpm_order.unwrap_or(1),
            pump_phase: self.pump_phase.unwrap_or(0.0),
            gains,
            models,
            phase: match self.phase {
                None => PhasePrescription::Fixed,
                Some(PhaseSpec::Radians(p)) if p.is_finite() => PhasePrescription::Explicit(p),
                Some(PhaseSpec::Radians(p)) => {
                    return Err(CliError::Config(format!("phase must be finite, got {p}")))
                }
                Some(PhaseSpec::Named(s)) => parse_phase(&s)?,
            },
            branch: parse_branch(self.branch.as_deref().unwrap_or("squeeze"))?,
            delay,
            grid: FrequencyGrid::symmetric(self.span.unwrap_or(6.0), self.points.unwrap_or(1201))
                .map_err(|e| CliError::Config(e.to_string()))?,
            out: self.out.unwrap_or_else(|| PathBuf::from("out")),
        };
        settings.validate()?;
        Ok(settings)
    }
}

/// A requested gain, remembering whether it was given as a distance from
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainPoint {
    pub gain: f64,
    pub epsilon: Option<f64>,
}

impl GainPoint {
    pub fn gain(gain: f64) -> Self {
        Self {
            gain,
            epsilon: None,
        }
    }

    pub fn epsilon(epsilon: f64) -> Self {
        Self {
            gain: THRESHOLD_GAIN - epsilon,
            epsilon: Some(epsilon),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delay {
    Seconds(f64),
    /// The group-velocity-mismatch offset of the tuning being computed.
    TauGvm,
}

impl Delay {
    pub fn label(&self) -> String {
        match self {
            Delay::Seconds(t) => format!("{t:e}"),
            Delay::TauGvm => "tau_gvm".into(),
        }
    }
}

/// Fully resolved and validated settings, SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub material: String,
    pub pump_wavelength: f64,
    pub signal: SignalWavelength,
    pub crystal_length: f64,
    pub qpm_order: u32,
    pub pump_phase: f64,
    pub gains: Vec<GainPoint>,
    pub models: Vec<Model>,
    pub phase: PhasePrescription,
    pub branch: Branch,
    pub delay: Delay,
    pub grid: FrequencyGrid,
    pub out: PathBuf,
}

impl Settings {
    pub fn validate(&self) -> CliResult<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !(self.pump_wavelength > 0.0 && self.pump_wavelength.is_finite()) {
            return bad(format!(
                "pump wavelength must be positive, got {} m",
                self.pump_wavelength
            ));
        }
        if !(self.crystal_length > 0.0 && self.crystal_length.is_finite()) {
            return bad(format!(
                "crystal length must be positive, got {} m",
                self.crystal_length
            ));
        }
        if self.gains.is_empty() {
            return bad("the gain list is empty".into());
        }
        for p in &self.gains {
            if !(p.gain >= 0.0 && p.gain < THRESHOLD_GAIN - THRESHOLD_GUARD) {
                return bad(format!(
                    "gain {} is not below threshold pi/2 by at least {THRESHOLD_GUARD:e}",
                    p.gain
                ));
            }
        }
        if self.models.is_empty() {
            return bad("the model list is empty".into());
        }
        Ok(())
    }

    pub fn tuning(&self, db: &MaterialDatabase) -> CliResult<TuningConfiguration> {
        let material = db.get(&self.material)?;
        Ok(TuningConfiguration::phase_matched(
            material,
            self.pump_wavelength,
            self.signal,
            self.qpm_order,
            self.crystal_length,
        )?
        .with_pump_phase(self.pump_phase))
    }
}

pub fn parse_model(s: &str) -> CliResult<Model> {
    Model::from_str(s).map_err(|_| CliError::Config(format!("unknown model \"{s}\"")))
}

pub fn parse_branch(s: &str) -> CliResult<Branch> {
    Branch::from_str(s).map_err(|_| CliError::Config(format!("unknown branch \"{s}\"")))
}

pub fn parse_phase(s: &str) -> CliResult<PhasePrescription> {
    Ok(match s {
        "fixed" => PhasePrescription::Fixed,
        "optimal" => PhasePrescription::Optimal,
        "optimal-linear" => PhasePrescription::OptimalLinear,
        "optimal-linear-gvm" => PhasePrescription::OptimalLinearGvm,
        other => PhasePrescription::Explicit(other.parse().map_err(|_| {
            CliError::Config(format!(
                "phase must be fixed, optimal, optimal-linear, optimal-linear-gvm or radians, got \"{other}\""
            ))
        })?),
    })
}

/// Parses a comma-separated list of numbers.
pub fn parse_list(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Config(format!("\"{v}\" is not a number")))
        })
        .collect()
}

/// The bundled database, or the one in the directory named by
/// [`MATERIALS_DIR_ENV`].
pub fn material_database() -> CliResult<Cow<'static, MaterialDatabase>> {
    match std::env::var_os(MATERIALS_DIR_ENV) {
        Some(dir) if !dir.is_empty() => {
            let dir = PathBuf::from(dir);
            let db = MaterialDatabase::from_dir(&dir).map_err(|e| match e {
                mopo::MopoError::Io(io) => CliError::io(&dir, io),
                other => other.into(),
            })?;
            log::info!("loaded {} material(s) from {}", db.len(), dir.display());
            Ok(Cow::Owned(db))
        }
        _ => Ok(Cow::Borrowed(MaterialDatabase::bundled())),
    }
}
