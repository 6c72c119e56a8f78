//! JSON instance-configuration schema shared by the library and the CLI.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::payoff::{GroupPartition, PayoffParameters, Scenario, ScenarioConstraints, Tunable};
use crate::DEFAULT_MARGIN;

/// One payoff instance plus optional scenario annotations, as stored in a
/// configuration file. Keys: `wpc, wct, wba, mpw, mca, mcv, mbr, scenario,
/// tunable, s, margin, group_sizes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub wpc: f64,
    pub wct: f64,
    pub wba: f64,
    pub mpw: f64,
    pub mca: f64,
    pub mcv: f64,
    pub mbr: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scenario: Option<Scenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tunable: Option<Tunable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default = "default_margin")]
    pub margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_sizes: Option<Vec<u32>>,
}

fn default_margin() -> f64 {
    DEFAULT_MARGIN
}

impl InstanceConfig {
    pub fn params(&self) -> PayoffParameters {
        PayoffParameters {
            wpc: self.wpc,
            wct: self.wct,
            wba: self.wba,
            mpw: self.mpw,
            mca: self.mca,
            mcv: self.mcv,
            mbr: self.mbr,
        }
    }

    /// Scenario constraints; errors when the file does not name a scenario.
    pub fn constraints(&self) -> Result<ScenarioConstraints> {
        let scenario = self
            .scenario
            .ok_or_else(|| Error::Config("config does not set a scenario".into()))?;
        ScenarioConstraints::new(
            scenario,
            self.tunable.unwrap_or(Tunable::None),
            self.s,
            self.margin,
        )
    }

    pub fn partition(&self) -> Result<Option<GroupPartition>> {
        match &self.group_sizes {
            None => Ok(None),
            Some(sizes) => GroupPartition::new(sizes.clone()).map(Some),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_config() {
        let cfg = InstanceConfig::from_json(
            r#"{
                "wpc": 2.0, "wct": 1.0, "wba": 2.0, "mpw": 3.0,
                "mca": 2.0, "mcv": 1.0, "mbr": 5.0,
                "scenario": "contractor", "tunable": "n", "s": 2.0,
                "margin": 0.001, "group_sizes": [1, 1, 1]
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.params().mbr, 5.0);
        let constraints = cfg.constraints().unwrap();
        assert_eq!(constraints.scenario, Scenario::Contractor);
        assert_eq!(constraints.tunable, Tunable::N);
        assert_eq!(cfg.partition().unwrap().unwrap().total_workers(), 3);
    }

    #[test]
    fn margin_defaults_and_unknown_keys_rejected() {
        let cfg = InstanceConfig::from_json(
            r#"{"wpc":1,"wct":0,"wba":1,"mpw":3,"mca":1,"mcv":1,"mbr":5}"#,
        )
        .unwrap();
        assert_eq!(cfg.margin, DEFAULT_MARGIN);
        assert!(cfg.constraints().is_err());

        let bad = InstanceConfig::from_json(
            r#"{"wpc":1,"wct":0,"wba":1,"mpw":3,"mca":1,"mcv":1,"mbr":5,"wot":9}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn even_partition_rejected() {
        let cfg = InstanceConfig::from_json(
            r#"{"wpc":1,"wct":0,"wba":1,"mpw":3,"mca":1,"mcv":1,"mbr":5,"group_sizes":[2,2]}"#,
        )
        .unwrap();
        assert!(cfg.partition().is_err());
    }
}
