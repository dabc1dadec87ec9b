//! Material database: one TOML file per material.
//!
//! ```toml
//! name = "LiNbO3-e"
//! axis = "extraordinary"
//! formula = "pole-ir"            # sellmeier | pole-ir | constant
//! coefficients = [ ... ]
//! lambda_min_um = 0.4
//! lambda_max_um = 5.0
//! provenance = "citation"
//! ```

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::dispersion::{SellmeierFormula, SellmeierMaterial};
use crate::error::{MopoError, Result};

/// Name of the bundled periodically poled lithium niobate entry.
pub const PPLN: &str = "LiNbO3-e";

const BUNDLED: &[(&str, &str)] = &[(
    "linbo3-e.toml",
    include_str!("../data/materials/linbo3-e.toml"),
)];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialFile {
    name: String,
    axis: String,
    formula: SellmeierFormula,
    coefficients: Vec<f64>,
    lambda_min_um: f64,
    lambda_max_um: f64,
    provenance: String,
}

/// Parses one material file.
pub fn parse_material(text: &str, origin: &str) -> Result<SellmeierMaterial> {
    let file: MaterialFile = toml::from_str(text).map_err(|e| MopoError::InvalidMaterial {
        material: origin.to_string(),
        reason: e.to_string(),
    })?;
    SellmeierMaterial::new(
        file.name,
        file.axis,
        file.formula,
        file.coefficients,
        file.lambda_min_um * 1e-6,
        file.lambda_max_um * 1e-6,
        file.provenance,
    )
}

#[derive(Debug, Clone, Default)]
pub struct MaterialDatabase {
    materials: BTreeMap<String, SellmeierMaterial>,
}

impl MaterialDatabase {
    /// The materials shipped with the crate.
    pub fn bundled() -> &'static MaterialDatabase {
        static DB: OnceLock<MaterialDatabase> = OnceLock::new();
        DB.get_or_init(|| {
            let mut db = MaterialDatabase::default();
            for (file, text) in BUNDLED {
                let m = parse_material(text, file).expect("bundled material file is valid");
                db.insert(m);
            }
            db
        })
    }

    /// Loads every `*.toml` file in `dir`.
    pub fn from_dir(dir: &Path) -> Result<MaterialDatabase> {
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|ext| ext == "toml"))
            .collect();
        paths.sort();
        let mut db = MaterialDatabase::default();
        for path in paths {
            let text = std::fs::read_to_string(&path)?;
            let m = parse_material(&text, &path.display().to_string())?;
            if db.materials.contains_key(m.name()) {
                return Err(MopoError::InvalidMaterial {
                    material: m.name().to_string(),
                    reason: format!("duplicate entry in {}", path.display()),
                });
            }
            db.insert(m);
        }
        Ok(db)
    }

    pub fn insert(&mut self, material: SellmeierMaterial) {
        self.materials.insert(material.name().to_string(), material);
    }

    pub fn get(&self, name: &str) -> Result<&SellmeierMaterial> {
        self.materials
            .get(name)
            .ok_or_else(|| MopoError::UnknownMaterial(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.materials.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.materials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.materials.is_empty()
    }
}
