//! Graphviz export of a plan as a mixing graph.
//!
//! Droplet nodes carry their concentration over the plan's common
//! denominator; mix nodes carry the step id. Dispensed droplets get one node
//! per use. Output styling: targets green double octagons, waste and
//! leftovers grey dashed, stored-and-reused droplets plain ellipses.

use std::collections::HashSet;
use std::fmt::Write;

use crate::exec::{execute, Violation};
use crate::model::{Disposition, DropletSource, Plan};

const HEADER: &str = "digraph plan {\n  rankdir=TB;\n  node [fontname=\"Helvetica\", fontsize=10];\n";

/// Renders `plan` after validating it. Output is deterministic.
pub fn export_dot(plan: &Plan) -> Result<String, Vec<Violation>> {
    let trace = execute(plan);
    if !trace.is_valid() {
        return Err(trace.violations);
    }

    let prec = plan
        .steps
        .iter()
        .map(|s| s.out_cf.precision())
        .chain(plan.targets.iter().map(|t| t.precision()))
        .max()
        .unwrap_or(0);
    let consumed: HashSet<(usize, u8)> = plan
        .steps
        .iter()
        .flat_map(|s| s.inputs)
        .filter_map(|i| match i {
            DropletSource::StepOutput { step, output } => Some((step, output)),
            _ => None,
        })
        .collect();
    let label = |cf: crate::cf::ConcFactor| cf.display_over(prec);
    let sample = label(crate::cf::ConcFactor::ONE);
    let buffer = label(crate::cf::ConcFactor::ZERO);

    let mut out = String::from(HEADER);
    for step in &plan.steps {
        let j = step.id;
        let _ = writeln!(out, "  m{j} [label=\"mix {j}\", shape=box];");
        for (i, input) in step.inputs.iter().enumerate() {
            match *input {
                DropletSource::SampleDispenser => {
                    let _ = writeln!(out, "  s{j}_{i} [label=\"S {sample}\", shape=circle, style=filled, fillcolor=lightblue];");
                    let _ = writeln!(out, "  s{j}_{i} -> m{j};");
                }
                DropletSource::BufferDispenser => {
                    let _ = writeln!(out, "  s{j}_{i} [label=\"B {buffer}\", shape=circle];");
                    let _ = writeln!(out, "  s{j}_{i} -> m{j};");
                }
                DropletSource::StepOutput { step, output } => {
                    let _ = writeln!(out, "  o{step}_{output} -> m{j};");
                }
            }
        }
        let cf = label(step.out_cf);
        for (o, disp) in step.outputs.iter().enumerate() {
            let attrs = match *disp {
                Disposition::Target(t) => {
                    format!("label=\"{cf}\\nT{t}\", shape=doubleoctagon, style=filled, fillcolor=palegreen")
                }
                Disposition::Waste => format!("label=\"{cf}\\nwaste\", style=dashed, color=grey50"),
                Disposition::Store if consumed.contains(&(j, o as u8)) => format!("label=\"{cf}\""),
                Disposition::Store => format!("label=\"{cf}\\nleftover\", style=dashed, color=grey50"),
            };
            let _ = writeln!(out, "  o{j}_{o} [{attrs}];");
            let _ = writeln!(out, "  m{j} -> o{j}_{o};");
        }
    }
    for (i, dd) in plan.direct_dispenses.iter().enumerate() {
        let what = if dd.source == DropletSource::SampleDispenser { &sample } else { &buffer };
        let _ = writeln!(
            out,
            "  d{i} [label=\"{what}\\nT{} (direct)\", shape=doubleoctagon, style=filled, fillcolor=palegreen];",
            dd.target
        );
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{PlanStep, TargetSeries};

    fn count(dot: &str, needle: &str) -> usize {
        dot.lines().filter(|l| l.contains(needle)).count()
    }

    #[test]
    fn empty_plan_is_header_only() {
        assert_eq!(export_dot(&Plan::default()).unwrap(), format!("{HEADER}}}\n"));
    }

    #[test]
    fn single_mix_shape() {
        let half = crate::cf::ConcFactor::new(1, 2).unwrap();
        let plan = Plan {
            targets: TargetSeries::new(vec![half]),
            steps: vec![PlanStep {
                id: 0,
                inputs: [DropletSource::SampleDispenser, DropletSource::BufferDispenser],
                out_cf: half,
                outputs: [Disposition::Target(0), Disposition::Waste],
            }],
            direct_dispenses: vec![],
        };
        let dot = export_dot(&plan).unwrap();
        assert_eq!(count(&dot, "shape=circle"), 2);
        assert_eq!(count(&dot, "shape=box"), 1);
        assert_eq!(dot.lines().filter(|l| l.trim_start().starts_with("o0_") && l.contains('[')).count(), 2);
        assert!(dot.contains("label=\"1/2\\nT0\""));
    }

    #[test]
    fn witness_graph() {
        let dot = export_dot(&fixtures::ts1_witness()).unwrap();
        assert_eq!(count(&dot, "shape=box"), 8);
        assert_eq!(count(&dot, "(direct)"), 1);
        // 6 mixed targets + the sample droplet dispensed straight to 16/16
        assert_eq!(count(&dot, "doubleoctagon"), 7);
        assert_eq!(count(&dot, "leftover"), 2);
        assert!(dot.contains("label=\"14/16\\nT2\""));
        assert_eq!(dot, fixtures::TS1_WITNESS_DOT);
    }

    #[test]
    fn invalid_plans_are_rejected() {
        let mut plan = fixtures::ts1_witness();
        plan.steps[0].out_cf = crate::cf::ConcFactor::ONE;
        assert!(export_dot(&plan).is_err());
    }
}
