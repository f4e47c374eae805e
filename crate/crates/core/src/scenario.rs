//! Scenario documents (TOML) and the built-in presets.
//!
//! A document either names a `preset` to start from, or supplies both the
//! `[parameters]` and `[initial_state]` tables. Anything left out is taken
//! from the preset, or from the reference values when no preset is named.
//!
//! ```toml
//! preset = "quezon-city-ramp"
//! budget = 5e8
//!
//! [capacity]
//! kind = "ramp"
//! initial = 500000.0
//! peak = 3500000.0
//! peak_day = 94.0
//!
//! [parameters]
//! mu_a = 0.03
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cost::CostConfig;
use crate::error::{Error, Result};
use crate::integrator::IntegratorConfig;
use crate::model::{
    in_domain, reference_initial_state, Compartment, ModelParameters, StateVector, DEFAULT_CARRYING_CAPACITY_FACTOR,
};
use crate::optimize::{CapacityBoundMode, CapacityFunction, ObjectiveKind, SingleObjectiveProblem, SolverSettings};
use crate::output::write_atomic;

/// Population scale that maps the reference city to Quezon City.
pub const QUEZON_CITY_SCALE: f64 = 0.0592;

pub const PRESETS: [&str; 3] = ["paper-baseline", "quezon-city", "quezon-city-ramp"];

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub params: ModelParameters,
    /// Initial state before scaling.
    pub base_initial: StateVector,
    pub scale: f64,
    pub horizon: u32,
    pub pieces: usize,
    pub cost: CostConfig,
    pub capacity: CapacityFunction,
    /// `f64::INFINITY` when unconstrained.
    pub budget: f64,
    pub bound_mode: CapacityBoundMode,
    pub integrator: IntegratorConfig,
    pub solver: SolverSettings,
    /// Reject capacities above the largest release rate that keeps the
    /// state inside the invariant region, instead of warning.
    pub strict_domain: bool,
}

/// Capacity as written in a document; `release_bound` resolves to the
/// largest release rate compatible with forward invariance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum CapacityDoc {
    ReleaseBound,
    Constant { value: f64 },
    Ramp { initial: f64, peak: f64, peak_day: f64 },
    Tabulated { values: Vec<f64> },
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostDoc {
    release_unit_cost: Option<f64>,
    hospitalization_daily_cost: Option<f64>,
    currency: Option<String>,
    accounting: Option<crate::cost::ReleaseAccounting>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    horizon: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pieces: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strict_domain: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    capacity_bound: Option<CapacityBoundMode>,
    /// `K_a` as a multiple of the scaled initial aquatic population; ignored
    /// when `parameters.k_a` is given.
    #[serde(skip_serializing_if = "Option::is_none")]
    carrying_capacity_factor: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parameters: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    initial_state: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<CostDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    capacity: Option<CapacityDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integrator: Option<IntegratorConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver: Option<SolverSettings>,
}

/// Fully specified preset documents.
fn preset_document(name: &str) -> Option<ScenarioDocument> {
    let base = ScenarioDocument {
        name: Some(name.to_string()),
        scale: Some(1.0),
        horizon: Some(365),
        pieces: Some(12),
        budget: Some(f64::INFINITY),
        capacity: Some(CapacityDoc::ReleaseBound),
        ..ScenarioDocument::default()
    };
    match name {
        "paper-baseline" => Some(base),
        "quezon-city" => Some(ScenarioDocument { scale: Some(QUEZON_CITY_SCALE), ..base }),
        "quezon-city-ramp" => Some(ScenarioDocument {
            scale: Some(QUEZON_CITY_SCALE),
            capacity: Some(CapacityDoc::Ramp { initial: 1_000_000.0, peak: 3_500_000.0, peak_day: 94.0 }),
            ..base
        }),
        _ => None,
    }
}

fn merge_parameters(base: ModelParameters, overrides: &BTreeMap<String, f64>) -> Result<ModelParameters> {
    let toml::Value::Table(mut table) = toml::Value::try_from(base).map_err(|e| Error::Parse(e.to_string()))? else {
        unreachable!("parameters serialize to a table");
    };
    let unknown: Vec<String> = overrides
        .keys()
        .filter(|k| !table.contains_key(*k))
        .map(|k| format!("parameters.{k}: unknown parameter"))
        .collect();
    if !unknown.is_empty() {
        return Err(Error::Validation(unknown));
    }
    for (k, v) in overrides {
        table.insert(k.clone(), toml::Value::Float(*v));
    }
    toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))
}

fn merge_state(mut base: StateVector, overrides: &BTreeMap<String, f64>) -> Result<StateVector> {
    let mut problems = Vec::new();
    for (k, v) in overrides {
        match Compartment::from_name(k) {
            Some(c) => base[c] = *v,
            None => problems.push(format!("initial_state.{k}: unknown compartment")),
        }
    }
    if problems.is_empty() {
        Ok(base)
    } else {
        Err(Error::Validation(problems))
    }
}

impl Scenario {
    pub fn preset(name: &str) -> Result<Scenario> {
        if preset_document(name).is_none() {
            return Err(Error::InvalidInput(format!("unknown preset '{name}' (known: {})", PRESETS.join(", "))));
        }
        Scenario::from_document(ScenarioDocument { preset: Some(name.to_string()), ..ScenarioDocument::default() })
    }

    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        let doc: ScenarioDocument = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Scenario::from_document(doc)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Scenario> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Scenario::from_toml_str(&text)
    }

    fn from_document(doc: ScenarioDocument) -> Result<Scenario> {
        let base = match &doc.preset {
            Some(name) => Some(
                preset_document(name)
                    .ok_or_else(|| Error::Validation(vec![format!("preset: unknown preset '{name}'")]))?,
            ),
            None => {
                let mut missing = Vec::new();
                if doc.parameters.is_none() {
                    missing.push("parameters: required when no preset is named".to_string());
                }
                if doc.initial_state.is_none() {
                    missing.push("initial_state: required when no preset is named".to_string());
                }
                if !missing.is_empty() {
                    missing.insert(0, "preset: missing (name a preset or give [parameters] and [initial_state])".into());
                    return Err(Error::Validation(missing));
                }
                None
            }
        };
        let base = base.unwrap_or_default();
        let pick = |a: Option<f64>, b: Option<f64>, d: f64| a.or(b).unwrap_or(d);

        let scale = pick(doc.scale, base.scale, 1.0);
        let base_initial = merge_state(reference_initial_state(), doc.initial_state.as_ref().unwrap_or(&BTreeMap::new()))?;
        let initial = base_initial.scale(scale).map_err(|e| Error::Validation(vec![format!("scale: {e}")]))?;

        let factor = pick(doc.carrying_capacity_factor, base.carrying_capacity_factor, DEFAULT_CARRYING_CAPACITY_FACTOR);
        let overrides = doc.parameters.clone().unwrap_or_default();
        let params = merge_parameters(ModelParameters::reference(factor * initial.aquatic_total()), &overrides)?;

        let cd = doc.cost.clone().unwrap_or_default();
        let defaults = CostConfig::default();
        let cost = CostConfig {
            release_unit_cost: cd.release_unit_cost.unwrap_or(defaults.release_unit_cost),
            hospitalization_daily_cost: cd.hospitalization_daily_cost.unwrap_or(defaults.hospitalization_daily_cost),
            currency: cd.currency.unwrap_or(defaults.currency),
            accounting: cd.accounting.unwrap_or(defaults.accounting),
        };
        let capacity = match doc.capacity.or(base.capacity).unwrap_or(CapacityDoc::ReleaseBound) {
            CapacityDoc::ReleaseBound => CapacityFunction::Constant { value: params.max_release_rate() },
            CapacityDoc::Constant { value } => CapacityFunction::Constant { value },
            CapacityDoc::Ramp { initial, peak, peak_day } => CapacityFunction::Ramp { initial, peak, peak_day },
            CapacityDoc::Tabulated { values } => CapacityFunction::Tabulated { values },
        };

        let scenario = Scenario {
            name: doc.name.or(doc.preset).or(base.name).unwrap_or_else(|| "custom".into()),
            params,
            base_initial,
            scale,
            horizon: doc.horizon.or(base.horizon).unwrap_or(365),
            pieces: doc.pieces.or(base.pieces).unwrap_or(12),
            cost,
            capacity,
            budget: pick(doc.budget, base.budget, f64::INFINITY),
            bound_mode: doc.capacity_bound.or(base.capacity_bound).unwrap_or_default(),
            integrator: doc.integrator.or(base.integrator).unwrap_or_default(),
            solver: doc.solver.or(base.solver).unwrap_or_default(),
            strict_domain: doc.strict_domain.or(base.strict_domain).unwrap_or(false),
        };
        scenario.validate()?;
        Ok(scenario)
    }

    /// Initial state after scaling.
    pub fn initial(&self) -> StateVector {
        StateVector(self.base_initial.0.map(|v| v * self.scale))
    }

    /// Checks every invariant. Returns warnings that do not block a run.
    pub fn validate(&self) -> Result<Vec<String>> {
        let mut problems = Vec::new();
        let mut warnings = Vec::new();
        if self.horizon == 0 {
            problems.push("horizon: must be at least 1".to_string());
        }
        if self.pieces == 0 {
            problems.push("pieces: must be at least 1".to_string());
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            problems.push(format!("scale: must be positive and finite (got {})", self.scale));
        }
        if !(self.budget >= 0.0) {
            problems.push(format!("budget: must be non-negative (got {})", self.budget));
        }
        let sections: [(&str, Result<()>); 5] = [
            ("parameters", self.params.validate()),
            ("cost", self.cost.validate()),
            ("capacity", self.capacity.validate()),
            ("integrator", self.integrator.validate()),
            ("solver", validate_solver(&self.solver)),
        ];
        for (section, check) in sections {
            match check {
                Ok(()) => {}
                Err(Error::Validation(p)) => problems.extend(p.into_iter().map(|m| format!("{section}: {m}"))),
                Err(e) => problems.push(format!("{section}: {e}")),
            }
        }
        if problems.is_empty() {
            let report = in_domain(&self.initial(), &self.params, 1e-6);
            for f in report.failures() {
                problems.push(format!(
                    "initial_state: outside the invariant region ({:?}: {} vs limit {})",
                    f.bound, f.value, f.limit
                ));
            }
            let limit = self.params.max_release_rate();
            let pmax = self.capacity.max_value();
            if pmax > limit * (1.0 + 1e-12) {
                let msg = format!("capacity: maximum {pmax} exceeds the invariance release limit {limit}");
                if self.strict_domain {
                    problems.push(msg);
                } else {
                    warnings.push(msg);
                }
            }
        }
        if problems.is_empty() {
            Ok(warnings)
        } else {
            Err(Error::Validation(problems))
        }
    }

    pub fn problem(&self, objective: ObjectiveKind) -> SingleObjectiveProblem {
        SingleObjectiveProblem {
            params: self.params,
            initial: self.initial(),
            horizon: self.horizon,
            pieces: self.pieces,
            cost: self.cost.clone(),
            capacity: self.capacity.clone(),
            budget: self.budget,
            objective,
            bound_mode: self.bound_mode,
            integrator: self.integrator,
            settings: self.solver,
        }
    }

    /// Fully explicit document; loading it reproduces `self` exactly.
    pub fn to_toml_string(&self) -> Result<String> {
        let capacity = match &self.capacity {
            CapacityFunction::Constant { value } => CapacityDoc::Constant { value: *value },
            CapacityFunction::Ramp { initial, peak, peak_day } => {
                CapacityDoc::Ramp { initial: *initial, peak: *peak, peak_day: *peak_day }
            }
            CapacityFunction::Tabulated { values } => CapacityDoc::Tabulated { values: values.clone() },
        };
        let doc = ScenarioDocument {
            preset: None,
            name: Some(self.name.clone()),
            scale: Some(self.scale),
            horizon: Some(self.horizon),
            pieces: Some(self.pieces),
            budget: Some(self.budget),
            strict_domain: Some(self.strict_domain),
            capacity_bound: Some(self.bound_mode),
            carrying_capacity_factor: None,
            parameters: Some(self.params.named_values().iter().map(|(k, v)| (k.to_string(), *v)).collect()),
            initial_state: Some(Compartment::ALL.iter().map(|c| (c.name().to_string(), self.base_initial[*c])).collect()),
            cost: Some(CostDoc {
                release_unit_cost: Some(self.cost.release_unit_cost),
                hospitalization_daily_cost: Some(self.cost.hospitalization_daily_cost),
                currency: Some(self.cost.currency.clone()),
                accounting: Some(self.cost.accounting),
            }),
            capacity: Some(capacity),
            integrator: Some(self.integrator),
            solver: Some(self.solver),
        };
        toml::to_string(&doc).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), self.to_toml_string()?.as_bytes())
    }
}

fn validate_solver(s: &SolverSettings) -> Result<()> {
    let mut problems = Vec::new();
    for (name, v) in [("gtol", s.gtol), ("ftol", s.ftol), ("fd_relative_step", s.fd_relative_step), ("fd_min_step", s.fd_min_step)] {
        if !(v > 0.0 && v.is_finite()) {
            problems.push(format!("{name} must be positive and finite (got {v})"));
        }
    }
    if problems.is_empty() {
        Ok(())
    } else {
        Err(Error::Validation(problems))
    }
}

/// A preset name or a path to a scenario document.
pub fn load_scenario(source: &str) -> Result<Scenario> {
    if PRESETS.contains(&source) {
        Scenario::preset(source)
    } else {
        Scenario::from_path(source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn baseline_preset_values() {
        let s = Scenario::preset("paper-baseline").unwrap();
        assert_eq!(s.params.b_h, 0.00085 / 7.0);
        assert_eq!(s.params.sigma, 1.0);
        assert_eq!(s.params.phi, 13.0);
        assert_eq!(s.params.psi, 1.0 / 8.75);
        assert_eq!(s.params.mu_f, 1.0 / 17.5);
        assert_eq!((s.horizon, s.pieces), (365, 12));
        assert_eq!(s.budget, f64::INFINITY);
    }

    #[test]
    fn quezon_city_scaling() {
        let s = Scenario::preset("quezon-city").unwrap();
        assert_relative_eq!(s.initial()[Compartment::Sh], 2_960_000.0, max_relative = 1e-15);
        assert_relative_eq!(s.params.k_a, 15.0 * 1_480_000.0, max_relative = 1e-15);
        assert_eq!(s.capacity, CapacityFunction::Constant { value: s.params.max_release_rate() });
    }

    #[test]
    fn empty_document_lists_required_fields() {
        match Scenario::from_toml_str("") {
            Err(Error::Validation(p)) => {
                assert!(p.iter().any(|m| m.starts_with("preset")));
                assert!(p.iter().any(|m| m.starts_with("parameters")));
                assert!(p.iter().any(|m| m.starts_with("initial_state")));
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn overrides_and_unknown_keys() {
        let s = Scenario::from_toml_str("preset = \"quezon-city\"\nbudget = 1e8\n[parameters]\nmu_a = 0.03\n").unwrap();
        assert_eq!(s.params.mu_a, 0.03);
        assert_eq!(s.budget, 1e8);
        assert!(matches!(
            Scenario::from_toml_str("preset = \"quezon-city\"\n[parameters]\nnope = 1.0\n"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(Scenario::from_toml_str("preset = \"quezon-city\"\nbogus = 1\n"), Err(Error::Parse(_))));
        assert!(matches!(Scenario::from_toml_str("preset = \"atlantis\"\n"), Err(Error::Validation(_))));
    }

    #[test]
    fn initial_state_outside_domain_is_rejected() {
        let err = Scenario::from_toml_str("preset = \"paper-baseline\"\n[initial_state]\nM_v = 1e10\n").unwrap_err();
        assert!(err.to_string().contains("initial_state"), "{err}");
    }

    #[test]
    fn strict_domain_capacity() {
        let text = "preset = \"quezon-city\"\nstrict_domain = true\n[capacity]\nkind = \"constant\"\nvalue = 1e9\n";
        assert!(Scenario::from_toml_str(text).is_err());
        let lax = Scenario::from_toml_str(&text.replace("true", "false")).unwrap();
        assert_eq!(lax.validate().unwrap().len(), 1);
    }

    #[test]
    fn round_trip() {
        for name in PRESETS {
            let s = Scenario::preset(name).unwrap();
            let back = Scenario::from_toml_str(&s.to_toml_string().unwrap()).unwrap();
            assert_eq!(back, s, "{name}");
        }
    }
}
