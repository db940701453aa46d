// Plans the first published test series step by step and compares the
// planner variants with the published 8-step plan.
//
//     cargo run --example ts1_walkthrough

use std::error::Error;

use dmfprep::model::Disposition;
use dmfprep::{emdp, execute, fixtures, EmdpConfig, TargetOrder};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let ts1 = fixtures::ts1();
    println!("TS1 = {{{}}}", ts1.display_common());

    let plan = emdp::plan(&ts1, &EmdpConfig::default())?;
    for step in &plan.steps {
        let outs: Vec<String> = step
            .outputs
            .iter()
            .map(|d| match d {
                Disposition::Target(i) => format!("target {i}"),
                Disposition::Store => "store".into(),
                Disposition::Waste => "waste".into(),
            })
            .collect();
        println!(
            "  step {}: {} + {} -> {} [{}]",
            step.id,
            step.inputs[0],
            step.inputs[1],
            step.out_cf.display_over(4),
            outs.join(", ")
        );
    }
    let trace = execute(&plan);
    assert!(trace.is_valid());
    println!("emdp (default):     {}", trace.stats);

    let series_order = EmdpConfig { order: TargetOrder::Series, ..EmdpConfig::default() };
    println!("emdp (series order): {}", execute(&emdp::plan(&ts1, &series_order)?).stats);
    println!("emdp (classic):      {}", execute(&emdp::plan(&ts1, &EmdpConfig::classic())?).stats);
    println!("published plan:      {}", execute(&fixtures::ts1_witness()).stats);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
