// Exact minimum-cost plans for small instances, and the gap between EMDP
// and the optimum.
//
//     cargo run --release --example oracle_search

use std::error::Error;

use dmfprep::oracle::{optimality_gap, search, SearchOptions};
use dmfprep::{emdp, execute, fixtures, ConcFactor, EmdpConfig, Objective, SearchCaps, TargetSeries};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let caps = SearchCaps { max_steps: 8, max_droplets: 6, max_precision: 4, ..SearchCaps::default() };
    for objective in [Objective::Samples, Objective::Steps] {
        let r = search(&fixtures::ts1(), SearchOptions::new(caps, objective));
        let plan = r.outcome.plan().ok_or("TS1 is feasible within these caps")?;
        println!("TS1 optimum ({objective:?}): {}  [{} nodes expanded]", execute(plan).stats, r.expanded);
    }

    // every pair at precision 3
    let grid: Vec<ConcFactor> = (1..8).map(|k| ConcFactor::new(k, 8)).collect::<Result<_, _>>()?;
    let mut instances = Vec::new();
    for (i, &a) in grid.iter().enumerate() {
        for &b in &grid[i..] {
            instances.push(TargetSeries::new(vec![a, b]));
        }
    }
    let planner = |ts: &TargetSeries| emdp::plan(ts, &EmdpConfig::default()).expect("small instance");
    let caps = SearchCaps { max_steps: 8, max_droplets: 6, max_precision: 3, ..SearchCaps::default() };
    let report = optimality_gap(planner, &instances, caps, Objective::Samples)?;
    println!(
        "{} pairs: {} optimal, total extra samples {}, total extra steps {}",
        report.rows.len(),
        report.optimal_count(),
        report.total_sample_gap(),
        report.total_step_gap()
    );
    for row in report.rows.iter().filter(|r| r.sample_gap.unwrap_or(0) + r.step_gap.unwrap_or(0) > 0).take(3) {
        println!("  {}: emdp {} vs oracle {}", row.targets.display_common(), row.planner, row.oracle.unwrap_or_default());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
