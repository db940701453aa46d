//! Droplets, plan steps and plans shared by every planner and the executor.

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::cf::ConcFactor;

/// An ordered list of target concentration factors. Duplicates are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TargetSeries(Vec<ConcFactor>);

impl TargetSeries {
    pub fn new(values: Vec<ConcFactor>) -> Self {
        TargetSeries(values)
    }

    pub fn into_vec(self) -> Vec<ConcFactor> {
        self.0
    }

    /// Largest canonical precision among the targets.
    pub fn max_precision(&self) -> u32 {
        self.0.iter().map(|c| c.precision()).max().unwrap_or(0)
    }

    /// Renders the series over its common denominator, e.g. `5/16,14/16`.
    pub fn display_common(&self) -> String {
        let d = self.max_precision();
        self.0.iter().map(|c| c.display_over(d)).collect::<Vec<_>>().join(",")
    }
}

impl Deref for TargetSeries {
    type Target = [ConcFactor];

    fn deref(&self) -> &[ConcFactor] {
        &self.0
    }
}

impl From<Vec<ConcFactor>> for TargetSeries {
    fn from(v: Vec<ConcFactor>) -> Self {
        TargetSeries(v)
    }
}

impl FromIterator<ConcFactor> for TargetSeries {
    fn from_iter<I: IntoIterator<Item = ConcFactor>>(iter: I) -> Self {
        TargetSeries(iter.into_iter().collect())
    }
}

/// Where a droplet came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "SourceRepr", into = "SourceRepr")]
pub enum DropletSource {
    SampleDispenser,
    BufferDispenser,
    StepOutput { step: usize, output: u8 },
}

impl DropletSource {
    pub fn is_dispenser(self) -> bool {
        !matches!(self, DropletSource::StepOutput { .. })
    }
}

impl fmt::Display for DropletSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DropletSource::SampleDispenser => f.write_str("sample"),
            DropletSource::BufferDispenser => f.write_str("buffer"),
            DropletSource::StepOutput { step, output } => write!(f, "step {step}.{output}"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Dispenser {
    Sample,
    Buffer,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SourceRepr {
    Dispenser(Dispenser),
    Output { step: usize, output: u8 },
}

impl From<SourceRepr> for DropletSource {
    fn from(r: SourceRepr) -> Self {
        match r {
            SourceRepr::Dispenser(Dispenser::Sample) => DropletSource::SampleDispenser,
            SourceRepr::Dispenser(Dispenser::Buffer) => DropletSource::BufferDispenser,
            SourceRepr::Output { step, output } => DropletSource::StepOutput { step, output },
        }
    }
}

impl From<DropletSource> for SourceRepr {
    fn from(s: DropletSource) -> Self {
        match s {
            DropletSource::SampleDispenser => SourceRepr::Dispenser(Dispenser::Sample),
            DropletSource::BufferDispenser => SourceRepr::Dispenser(Dispenser::Buffer),
            DropletSource::StepOutput { step, output } => SourceRepr::Output { step, output },
        }
    }
}

/// A unit-volume droplet with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Droplet {
    pub cf: ConcFactor,
    pub source: DropletSource,
}

impl Droplet {
    pub fn sample() -> Self {
        Droplet { cf: ConcFactor::ONE, source: DropletSource::SampleDispenser }
    }

    pub fn buffer() -> Self {
        Droplet { cf: ConcFactor::ZERO, source: DropletSource::BufferDispenser }
    }
}

/// What happens to one output droplet of a mix-split step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Disposition {
    /// Delivered as the target at this series index.
    Target(usize),
    /// Kept on chip; later consumed by a step or discarded at the end.
    Store,
    Waste,
}

/// One 1:1 mix-split event. Both outputs carry `out_cf`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub id: usize,
    pub inputs: [DropletSource; 2],
    pub out_cf: ConcFactor,
    pub outputs: [Disposition; 2],
}

/// A target satisfied without mixing (pure sample or pure buffer).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectDispense {
    pub target: usize,
    pub source: DropletSource,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plan {
    pub targets: TargetSeries,
    pub steps: Vec<PlanStep>,
    #[serde(default)]
    pub direct_dispenses: Vec<DirectDispense>,
}

impl Plan {
    pub fn empty(targets: TargetSeries) -> Self {
        Plan { targets, steps: Vec::new(), direct_dispenses: Vec::new() }
    }

    pub fn step(&self, id: usize) -> Option<&PlanStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// Appends another plan's steps, renumbering its step ids and target
    /// indices so they follow this plan's.
    pub fn append(&mut self, other: Plan) {
        let step_offset = self.steps.iter().map(|s| s.id + 1).max().unwrap_or(0);
        let target_offset = self.targets.len();
        let shift_src = |s: DropletSource| match s {
            DropletSource::StepOutput { step, output } => {
                DropletSource::StepOutput { step: step + step_offset, output }
            }
            other => other,
        };
        let shift_disp = |d: Disposition| match d {
            Disposition::Target(i) => Disposition::Target(i + target_offset),
            other => other,
        };
        for s in other.steps {
            self.steps.push(PlanStep {
                id: s.id + step_offset,
                inputs: s.inputs.map(shift_src),
                out_cf: s.out_cf,
                outputs: s.outputs.map(shift_disp),
            });
        }
        for d in other.direct_dispenses {
            self.direct_dispenses.push(DirectDispense {
                target: d.target + target_offset,
                source: shift_src(d.source),
            });
        }
        let mut targets = std::mem::take(&mut self.targets).into_vec();
        targets.extend(other.targets.iter().copied());
        self.targets = TargetSeries::new(targets);
    }
}

/// Cost figures of an executed plan.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PlanStats {
    pub n_sample: usize,
    pub n_buffer: usize,
    pub n_waste: usize,
    pub n_steps: usize,
    pub peak_storage: usize,
}

impl PlanStats {
    pub fn inputs(&self) -> usize {
        self.n_sample + self.n_buffer
    }
}

impl fmt::Display for PlanStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "S={} B={} W={} steps={} peak={}",
            self.n_sample, self.n_buffer, self.n_waste, self.n_steps, self.peak_storage
        )
    }
}
