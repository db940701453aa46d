//! The three published test series and a hand-checked 8-step TS1 plan.

use crate::cf::ConcFactor;
use crate::model::{DirectDispense, Disposition, DropletSource, Plan, PlanStep, TargetSeries};

fn over(den: u64, nums: &[u64]) -> TargetSeries {
    nums.iter()
        .map(|&k| ConcFactor::new(k, den).expect("fixture values are on the grid"))
        .collect()
}

pub fn ts1() -> TargetSeries {
    over(16, &[5, 11, 14, 16, 14, 11, 5])
}

pub fn ts2() -> TargetSeries {
    over(32, &[9, 18, 25, 30, 32, 28, 22])
}

pub fn ts3() -> TargetSeries {
    over(64, &[31, 55, 64, 51])
}

/// Looks up a fixture series by name (`ts1`, `ts2`, `ts3`).
pub fn by_name(name: &str) -> Option<TargetSeries> {
    match name.to_ascii_lowercase().as_str() {
        "ts1" => Some(ts1()),
        "ts2" => Some(ts2()),
        "ts3" => Some(ts3()),
        _ => None,
    }
}

pub const NAMES: [&str; 3] = ["ts1", "ts2", "ts3"];

/// Serialized form of [`ts1_witness`], shipped for the CLI and format tests.
pub const TS1_WITNESS_JSON: &str = include_str!("../fixtures/ts1_witness.json");

/// Graphviz export of [`ts1_witness`], kept to pin the DOT output byte for byte.
pub const TS1_WITNESS_DOT: &str = include_str!("../fixtures/ts1_witness.dot");

/// An 8-step plan for TS1 using 5 sample and 4 buffer droplets with 2 waste.
pub fn ts1_witness() -> Plan {
    use Disposition::{Store, Target};
    use DropletSource::{BufferDispenser as B, SampleDispenser as S};
    let out = |step, output| DropletSource::StepOutput { step, output };
    let cf = |k| ConcFactor::new(k, 16).expect("grid value");
    let step = |id, inputs, k, outputs| PlanStep { id, inputs, out_cf: cf(k), outputs };

    Plan {
        targets: ts1(),
        steps: vec![
            step(0, [S, B], 8, [Store, Store]),
            step(1, [S, out(0, 0)], 12, [Store, Store]),
            step(2, [S, out(1, 0)], 14, [Target(2), Target(4)]),
            step(3, [out(0, 1), B], 4, [Store, Store]),
            step(4, [out(3, 0), B], 2, [Store, Store]),
            step(5, [out(1, 1), B], 6, [Store, Store]),
            step(6, [out(3, 1), out(5, 0)], 5, [Target(0), Target(6)]),
            step(7, [S, out(5, 1)], 11, [Target(1), Target(5)]),
        ],
        direct_dispenses: vec![DirectDispense { target: 3, source: S }],
    }
}
