//! Replays a plan on a virtual chip.
//!
//! The executor never trusts a planner's own bookkeeping: it re-derives every
//! droplet, checks that each step is executable in order and that the right
//! concentrations reach the right targets, and produces the cost figures that
//! every report prints.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::cf::{ConcFactor, DyadicSum};
use crate::model::{Disposition, DropletSource, Plan, PlanStats};

/// Identifies one output droplet of one step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct OutputRef {
    pub step: usize,
    pub output: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DuplicateStepId { step: usize },
    /// The referenced droplet does not exist yet or was never stored.
    UnavailableInput { step: usize, source: DropletSource },
    DoubleConsumption { step: usize, source: DropletSource },
    CfMismatch { step: usize, declared: ConcFactor, actual: ConcFactor },
    UnknownTarget { step: Option<usize>, target: usize },
    TargetCfMismatch { target: usize, expected: ConcFactor, delivered: ConcFactor },
    UnmetTarget { target: usize },
    DoubleSatisfiedTarget { target: usize, times: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateStepId { step } => write!(f, "duplicate step id {step}"),
            Violation::UnavailableInput { step, source } => {
                write!(f, "step {step}: input {source} is not available")
            }
            Violation::DoubleConsumption { step, source } => {
                write!(f, "step {step}: input {source} was already consumed")
            }
            Violation::CfMismatch { step, declared, actual } => {
                write!(f, "step {step}: declares {declared} but inputs mix to {actual}")
            }
            Violation::UnknownTarget { step: Some(s), target } => {
                write!(f, "step {s}: no target with index {target}")
            }
            Violation::UnknownTarget { step: None, target } => {
                write!(f, "direct dispense to unknown target {target}")
            }
            Violation::TargetCfMismatch { target, expected, delivered } => {
                write!(f, "target {target}: expected {expected}, delivered {delivered}")
            }
            Violation::UnmetTarget { target } => write!(f, "target {target} is never produced"),
            Violation::DoubleSatisfiedTarget { target, times } => {
                write!(f, "target {target} is satisfied {times} times")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalKind {
    Target,
    /// Discarded by a step.
    Discarded,
    /// Still in storage when the plan ends.
    Leftover,
}

/// A droplet that leaves the chip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Terminal {
    pub cf: ConcFactor,
    pub kind: TerminalKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub id: usize,
    /// Resolved input concentrations (`None` when the input was unavailable).
    pub inputs: [Option<ConcFactor>; 2],
    pub out_cf: ConcFactor,
    /// Stored droplets after this step, ordered by (step, output).
    pub storage: Vec<OutputRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExecutionTrace {
    pub steps: Vec<StepRecord>,
    pub stats: PlanStats,
    pub violations: Vec<Violation>,
    pub terminals: Vec<Terminal>,
}

impl ExecutionTrace {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn targets_delivered(&self) -> usize {
        self.terminals.iter().filter(|t| t.kind == TerminalKind::Target).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputState {
    Stored,
    Consumed,
    /// Delivered as a target or discarded; never usable as an input.
    Gone,
}

struct Chip<'p> {
    plan: &'p Plan,
    outputs: HashMap<OutputRef, (ConcFactor, OutputState)>,
    storage: BTreeSet<OutputRef>,
    target_hits: Vec<usize>,
    stats: PlanStats,
    violations: Vec<Violation>,
    terminals: Vec<Terminal>,
}

impl<'p> Chip<'p> {
    fn consume(&mut self, step: usize, source: DropletSource) -> Option<ConcFactor> {
        match source {
            DropletSource::SampleDispenser => {
                self.stats.n_sample += 1;
                Some(ConcFactor::ONE)
            }
            DropletSource::BufferDispenser => {
                self.stats.n_buffer += 1;
                Some(ConcFactor::ZERO)
            }
            DropletSource::StepOutput { step: s, output } => {
                let r = OutputRef { step: s, output };
                match self.outputs.get_mut(&r) {
                    Some((cf, state @ OutputState::Stored)) => {
                        *state = OutputState::Consumed;
                        self.storage.remove(&r);
                        Some(*cf)
                    }
                    Some((_, OutputState::Consumed)) => {
                        self.violations.push(Violation::DoubleConsumption { step, source });
                        None
                    }
                    _ => {
                        self.violations.push(Violation::UnavailableInput { step, source });
                        None
                    }
                }
            }
        }
    }

    fn deliver(&mut self, step: Option<usize>, target: usize, cf: ConcFactor) {
        let Some(&expected) = self.plan.targets.get(target) else {
            self.violations.push(Violation::UnknownTarget { step, target });
            return;
        };
        self.target_hits[target] += 1;
        if expected != cf {
            self.violations.push(Violation::TargetCfMismatch { target, expected, delivered: cf });
        }
        self.terminals.push(Terminal { cf, kind: TerminalKind::Target });
    }
}

/// Replays `plan`. Always returns a trace; problems are reported as violations.
pub fn execute(plan: &Plan) -> ExecutionTrace {
    let mut chip = Chip {
        plan,
        outputs: HashMap::new(),
        storage: BTreeSet::new(),
        target_hits: vec![0; plan.targets.len()],
        stats: PlanStats { n_steps: plan.steps.len(), ..PlanStats::default() },
        violations: Vec::new(),
        terminals: Vec::new(),
    };
    let mut seen_ids = BTreeSet::new();
    let mut records = Vec::with_capacity(plan.steps.len());

    for step in &plan.steps {
        if !seen_ids.insert(step.id) {
            chip.violations.push(Violation::DuplicateStepId { step: step.id });
            continue;
        }
        let a = chip.consume(step.id, step.inputs[0]);
        let b = chip.consume(step.id, step.inputs[1]);
        if let (Some(a), Some(b)) = (a, b) {
            let actual = a.mix(b);
            if actual != step.out_cf {
                chip.violations.push(Violation::CfMismatch {
                    step: step.id,
                    declared: step.out_cf,
                    actual,
                });
            }
        }
        for (i, disp) in step.outputs.iter().enumerate() {
            let r = OutputRef { step: step.id, output: i as u8 };
            let state = match *disp {
                Disposition::Store => {
                    chip.storage.insert(r);
                    OutputState::Stored
                }
                Disposition::Waste => {
                    chip.stats.n_waste += 1;
                    chip.terminals.push(Terminal { cf: step.out_cf, kind: TerminalKind::Discarded });
                    OutputState::Gone
                }
                Disposition::Target(t) => {
                    chip.deliver(Some(step.id), t, step.out_cf);
                    OutputState::Gone
                }
            };
            chip.outputs.insert(r, (step.out_cf, state));
        }
        chip.stats.peak_storage = chip.stats.peak_storage.max(chip.storage.len());
        records.push(StepRecord {
            id: step.id,
            inputs: [a, b],
            out_cf: step.out_cf,
            storage: chip.storage.iter().copied().collect(),
        });
    }

    for dd in &plan.direct_dispenses {
        if let Some(cf) = chip.consume(usize::MAX, dd.source) {
            chip.deliver(None, dd.target, cf);
        }
    }

    let leftovers: Vec<OutputRef> = chip.storage.iter().copied().collect();
    for r in leftovers {
        let cf = chip.outputs[&r].0;
        chip.stats.n_waste += 1;
        chip.terminals.push(Terminal { cf, kind: TerminalKind::Leftover });
    }

    for (target, &times) in chip.target_hits.iter().enumerate() {
        match times {
            0 => chip.violations.push(Violation::UnmetTarget { target }),
            1 => {}
            _ => chip.violations.push(Violation::DoubleSatisfiedTarget { target, times }),
        }
    }

    ExecutionTrace {
        steps: records,
        stats: chip.stats,
        violations: chip.violations,
        terminals: chip.terminals,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConservationError {
    #[error("trace has {0} violation(s); balances are undefined")]
    HasViolations(usize),
    #[error("droplet count: {sample} sample + {buffer} buffer != {targets} targets + {waste} waste")]
    Count { sample: usize, buffer: usize, targets: usize, waste: usize },
    #[error("sample mass: {sample} dispensed != {terminal} leaving the chip")]
    Mass { sample: usize, terminal: String },
}

/// Droplet-count and sample-mass balance of a violation-free trace.
pub fn check_conservation(trace: &ExecutionTrace) -> Result<(), ConservationError> {
    if !trace.violations.is_empty() {
        return Err(ConservationError::HasViolations(trace.violations.len()));
    }
    let s = &trace.stats;
    let targets = trace.targets_delivered();
    if s.n_sample + s.n_buffer != targets + s.n_waste {
        return Err(ConservationError::Count {
            sample: s.n_sample,
            buffer: s.n_buffer,
            targets,
            waste: s.n_waste,
        });
    }
    let mut mass = DyadicSum::default();
    for t in &trace.terminals {
        mass.add(t.cf);
    }
    if mass != DyadicSum::of_integer(s.n_sample as u64) {
        return Err(ConservationError::Mass { sample: s.n_sample, terminal: mass.to_string() });
    }
    Ok(())
}
