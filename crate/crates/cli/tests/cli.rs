//! End-to-end runs of the `mopo-squeeze` binary.

use std::path::Path;
use std::process::{Command, Output};

use mopo::table::DataTable;
use mopo::SpectrumSeries;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mopo-squeeze"));
    c.env_remove("MOPO_MATERIALS_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn selfcheck_json_report() {
    let o = run(&["selfcheck", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let families = v["families"].as_array().unwrap();
    assert!(families.len() >= 4);
    let names: Vec<&str> = families
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    for expected in [
        "unitarity",
        "reciprocity",
        "optimality",
        "exact-vs-linearized",
    ] {
        assert!(names.contains(&expected), "{names:?}");
    }
}

#[test]
fn injected_fault_fails_unitarity_with_frequency() {
    let o = run(&["selfcheck", "--inject-fault", "vs-sign"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("unitarity")).unwrap();
    assert!(line.starts_with("FAIL"), "{text}");
    assert!(text.contains("first: g="), "{text}");
    assert!(text.contains("Omega="), "{text}");

    let o = run(&["selfcheck", "--json", "--inject-fault", "vs-sign"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["fault"], "vs-sign");
    assert!(v["families"][0]["first_failure"]["omega"].is_number());
}

#[test]
fn fault_flag_is_hidden_from_help() {
    let o = run(&["selfcheck", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("inject"));
}

#[test]
fn sweep_one_gain_101_points() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "sweep",
        "--g",
        "1.2",
        "--points",
        "101",
        "--span",
        "5",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let t = DataTable::read(&dir.path().join("sweep_000.tsv")).unwrap();
    assert_eq!(t.rows.len(), 101);
    for key in [
        "material", "lambda_p", "lambda_s", "Lambda", "l_c", "g", "model", "phi_sum", "delta_t",
        "grid",
    ] {
        assert!(t.meta(key).is_some(), "missing {key}");
    }
}

#[test]
fn sweep_config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    let out = dir.path().join("out");
    std::fs::write(
        &cfg,
        format!(
            "gains = [1.0, 1.5]\nmodels = [\"exact\", \"linearized\"]\nspan = 5.0\npoints = 201\nout = \"{}\"\n",
            out.display()
        ),
    )
    .unwrap();
    let o = run(&["sweep", "--config", path(&cfg), "--points", "51"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    for name in ["sweep_000.tsv", "sweep_001.tsv"] {
        let t = DataTable::read(&out.join(name)).unwrap();
        assert_eq!(t.rows.len(), 51);
        let rel = t.column("rel_diff").unwrap();
        assert!(rel.iter().all(|r| *r < 0.01));
    }
}

#[test]
fn sweep_gvm_delay_balances_terms() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "sweep",
        "--signal",
        "1300",
        "--g",
        "1.2",
        "--model",
        "linearized",
        "--phase",
        "-0.5",
        "--delta-t",
        "tau_gvm",
        "--points",
        "61",
        "--span",
        "6",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let t = DataTable::read(&dir.path().join("sweep_000.tsv")).unwrap();
    assert!(t
        .column("balance_linearized")
        .unwrap()
        .iter()
        .all(|b| *b < 1e-12));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path());
    // config: even grid, unknown key, missing file argument value
    assert_eq!(
        run(&["sweep", "--points", "100", "--out", out])
            .status
            .code(),
        Some(2)
    );
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "colour = 1\n").unwrap();
    assert_eq!(
        run(&["sweep", "--config", path(&bad)]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["figure", "fig9"]).status.code(), Some(2));
    assert_eq!(
        run(&["sweep", "--material", "unobtainium", "--out", out])
            .status
            .code(),
        Some(2)
    );
    // domain: gain above threshold in a figure, pump outside the material range
    assert_eq!(
        run(&["figure", "fig2", "--g", "1.6", "--points", "5", "--out", out])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["sweep", "--pump-nm", "300", "--points", "5", "--out", out])
            .status
            .code(),
        Some(3)
    );
    // io: missing config file
    let missing = dir.path().join("nope.toml");
    assert_eq!(
        run(&["sweep", "--config", path(&missing)]).status.code(),
        Some(5)
    );
    let o = run(&["sweep", "--points", "100", "--out", out]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("odd"));
}

#[test]
fn figure_tables_round_trip_and_repeat_exactly() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig2", "fig3", "fig4a", "fig4b", "fig5"] {
        let mut texts = Vec::new();
        for run_id in ["a", "b"] {
            let out = dir.path().join(run_id);
            let o = run(&["figure", name, "--points", "41", "--out", path(&out)]);
            assert_eq!(
                o.status.code(),
                Some(0),
                "{name}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
            let tsv = out.join(format!("{name}.tsv"));
            assert!(out.join(format!("{name}.svg")).exists());
            texts.push(std::fs::read_to_string(&tsv).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{name} not deterministic");
        let t = DataTable::parse(&texts[0]).unwrap();
        assert_eq!(t.render().unwrap(), texts[0], "{name} does not round-trip");
    }
}

#[test]
fn spectrum_series_survives_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&[
        "sweep",
        "--g",
        "1.5",
        "--points",
        "31",
        "--span",
        "3",
        "--out",
        path(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let t = DataTable::read(&dir.path().join("sweep_000.tsv")).unwrap();
    let mut renamed = t.clone();
    renamed.columns[1] = "sigma".into();
    let series = SpectrumSeries::from_table(&renamed).unwrap();
    assert_eq!(series.len(), 31);
    assert_eq!(series.values, t.column("sigma_exact").unwrap());
    assert_eq!(series.grid[15], 0.0);
}

#[test]
fn alternative_material_directory() {
    let dir = tempfile::tempdir().unwrap();
    let mats = dir.path().join("mats");
    std::fs::create_dir(&mats).unwrap();
    std::fs::write(
        mats.join("flat.toml"),
        "name = \"Flat\"\naxis = \"iso\"\nformula = \"sellmeier\"\n\
         coefficients = [1.0, 1.0, 0.01]\nlambda_min_um = 0.3\nlambda_max_um = 3.0\n\
         provenance = \"test fixture\"\n",
    )
    .unwrap();
    let out = dir.path().join("out");
    let o = bin()
        .env("MOPO_MATERIALS_DIR", &mats)
        .args([
            "sweep",
            "--material",
            "Flat",
            "--points",
            "11",
            "--out",
            path(&out),
        ])
        .output()
        .unwrap();
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let t = DataTable::read(&out.join("sweep_000.tsv")).unwrap();
    assert_eq!(t.meta("material"), Some("Flat"));

    // the bundled PPLN is not visible through the alternative directory
    let o = bin()
        .env("MOPO_MATERIALS_DIR", &mats)
        .args(["figure", "fig4b", "--points", "3", "--out", path(&out)])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
