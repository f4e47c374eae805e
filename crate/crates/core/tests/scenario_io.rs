use wolbachia_core::experiments::simulate;
use wolbachia_core::model::{Compartment, DIM};
use wolbachia_core::output::{parse_trajectory_csv, run_simulate, trajectory_csv, RunOptions, MANIFEST_NAME};
use wolbachia_core::release::ReleaseSchedule;
use wolbachia_core::scenario::{load_scenario, Scenario, PRESETS};

#[test]
fn resolved_document_lists_every_input() {
    let text = Scenario::preset("quezon-city").unwrap().to_toml_string().unwrap();
    let doc: toml::Table = text.parse().unwrap();
    assert_eq!(doc["parameters"].as_table().unwrap().len(), 23);
    let initial = doc["initial_state"].as_table().unwrap();
    assert_eq!(initial.len(), DIM);
    for c in Compartment::ALL {
        assert!(initial.contains_key(c.name()), "{} missing", c.name());
    }
    let cost = doc["cost"].as_table().unwrap();
    for key in ["release_unit_cost", "hospitalization_daily_cost", "currency", "accounting"] {
        assert!(cost.contains_key(key), "{key} missing");
    }
}

#[test]
fn every_preset_survives_save_and_load() {
    let dir = tempfile::tempdir().unwrap();
    for name in PRESETS {
        let s = Scenario::preset(name).unwrap();
        let path = dir.path().join(format!("{name}.toml"));
        s.save(&path).unwrap();
        assert_eq!(load_scenario(path.to_str().unwrap()).unwrap(), s, "{name}");
    }
}

#[test]
fn trajectory_file_reproduces_the_simulation() {
    let s = Scenario::preset("quezon-city").unwrap();
    let sched = ReleaseSchedule::constant(5e5, s.horizon).unwrap();
    let summary = simulate(&s, &sched).unwrap();
    let rows = parse_trajectory_csv(&trajectory_csv(&summary.daily)).unwrap();
    assert_eq!(rows.len(), summary.daily.len());
    for (day, (t, x)) in rows.iter().enumerate() {
        assert_eq!(*t, day as f64);
        assert_eq!(x, &summary.daily[day]);
    }
}

#[test]
fn simulate_run_writes_loadable_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let s = Scenario::preset("quezon-city").unwrap();
    let sched = ReleaseSchedule::constant(1e6, s.horizon).unwrap();
    let mut opts = RunOptions::new(dir.path(), "simulate");
    opts.charts = false;
    let record = run_simulate(&s, &sched, &opts).unwrap();
    for entry in &record.outputs {
        assert!(dir.path().join(&entry.path).exists(), "{} missing", entry.path);
    }
    assert!(dir.path().join(MANIFEST_NAME).exists());
    let reloaded = Scenario::from_path(dir.path().join("scenario.toml")).unwrap();
    assert_eq!(reloaded, s);
    let text = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(parse_trajectory_csv(&text).unwrap().len(), s.horizon as usize + 1);
}

#[test]
fn bad_documents_are_rejected() {
    assert!(Scenario::from_toml_str("").is_err());
    assert!(Scenario::from_toml_str("preset = \"nowhere\"").is_err());
    assert!(Scenario::from_toml_str("preset = \"quezon-city\"\nbogus = 1").is_err());
    assert!(Scenario::from_toml_str("preset = \"quezon-city\"\n[parameters]\nnot_a_parameter = 1.0").is_err());
    assert!(Scenario::from_toml_str("preset = \"quezon-city\"\nhorizon = 0").is_err());
    assert!(load_scenario("/no/such/scenario.toml").is_err());
}
