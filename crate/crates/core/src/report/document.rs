//! Versioned JSON plan files.
//!
//! Rendering is byte-stable: fixed key order, one step per line.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::execute;
use crate::model::{Plan, PlanStats};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<String>,
    #[serde(flatten)]
    pub plan: Plan,
    /// Counts recorded when the file was written. Informational: readers
    /// recompute them with the executor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<PlanStats>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("unsupported plan format version {0} (expected {FORMAT_VERSION})")]
    Version(u32),
}

impl PlanDocument {
    pub fn new(plan: Plan, algorithm: Option<&str>) -> Self {
        let stats = Some(execute(&plan).stats);
        PlanDocument { version: FORMAT_VERSION, algorithm: algorithm.map(str::to_string), plan, stats }
    }

    pub fn render(&self) -> String {
        fn json<T: Serialize>(v: &T) -> String {
            serde_json::to_string(v).expect("plan types always serialize")
        }
        fn list<T: Serialize>(items: &[T]) -> String {
            if items.is_empty() {
                return "[]".to_string();
            }
            let body: Vec<String> = items.iter().map(|i| format!("    {}", json(i))).collect();
            format!("[\n{}\n  ]", body.join(",\n"))
        }

        let mut fields = vec![format!("  \"version\": {}", self.version)];
        if let Some(a) = &self.algorithm {
            fields.push(format!("  \"algorithm\": {}", json(a)));
        }
        fields.push(format!("  \"targets\": {}", json(&self.plan.targets)));
        fields.push(format!("  \"steps\": {}", list(&self.plan.steps)));
        fields.push(format!("  \"direct_dispenses\": {}", list(&self.plan.direct_dispenses)));
        if let Some(s) = &self.stats {
            fields.push(format!("  \"stats\": {}", json(s)));
        }
        format!("{{\n{}\n}}\n", fields.join(",\n"))
    }

    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let doc: PlanDocument = serde_json::from_str(text).map_err(|e| DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if doc.version != FORMAT_VERSION {
            return Err(DocumentError::Version(doc.version));
        }
        Ok(doc)
    }
}

/// Renders `plan` with freshly computed stats.
pub fn render_plan(plan: &Plan, algorithm: Option<&str>) -> String {
    PlanDocument::new(plan.clone(), algorithm).render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cf::ConcFactor;
    use crate::emdp::{self, EmdpConfig};
    use crate::fixtures;
    use crate::model::TargetSeries;

    #[test]
    fn witness_fixture_is_the_rendered_witness() {
        assert_eq!(render_plan(&fixtures::ts1_witness(), None), fixtures::TS1_WITNESS_JSON);
        let doc = PlanDocument::parse(fixtures::TS1_WITNESS_JSON).unwrap();
        assert_eq!(doc.plan, fixtures::ts1_witness());
    }

    #[test]
    fn empty_plan_round_trips() {
        let doc = PlanDocument::new(Plan::default(), Some("emdp"));
        let text = doc.render();
        assert!(text.contains("\"steps\": []"));
        assert_eq!(PlanDocument::parse(&text).unwrap(), doc);
    }

    #[test]
    fn version_and_syntax_errors() {
        let text = render_plan(&Plan::default(), None).replace("\"version\": 1", "\"version\": 9");
        assert_eq!(PlanDocument::parse(&text), Err(DocumentError::Version(9)));
        match PlanDocument::parse("{\n  \"version\": 1,\n  \"targets\": [\"1/2\"] \"steps\": []\n}") {
            Err(DocumentError::Syntax { line, column, .. }) => assert_eq!((line, column), (3, 22)),
            other => panic!("{other:?}"),
        }
        // non-dyadic concentrations are rejected while parsing
        assert!(matches!(
            PlanDocument::parse("{\"version\": 1, \"targets\": [\"3/7\"]}"),
            Err(DocumentError::Syntax { .. })
        ));
    }

    #[test]
    fn direct_dispenses_default_to_empty() {
        let text = r#"{"version":1,"targets":["1/2"],"steps":[{"id":0,"inputs":["sample","buffer"],"out_cf":"1/2","outputs":[{"target":0},"waste"]}]}"#;
        let doc = PlanDocument::parse(text).unwrap();
        assert!(doc.plan.direct_dispenses.is_empty());
        assert!(doc.stats.is_none());
        assert!(execute(&doc.plan).is_valid());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn render_parse_round_trip(d in 1u32..=6, ks in prop::collection::vec(0u64..=64, 0..8)) {
                let targets: TargetSeries = ks
                    .into_iter()
                    .map(|k| ConcFactor::from_parts(k % ((1 << d) + 1), d).unwrap())
                    .collect();
                let plan = emdp::plan(&targets, &EmdpConfig::default()).unwrap();
                let doc = PlanDocument::new(plan, Some("emdp"));
                let text = doc.render();
                let back = PlanDocument::parse(&text).unwrap();
                prop_assert_eq!(&back, &doc);
                prop_assert_eq!(back.render(), text);
            }
        }
    }
}
