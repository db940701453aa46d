// Replaying plans: counts, conservation, and what broken plans look like.
//
//     cargo run --example validate_plan

use std::error::Error;

use dmfprep::report::PlanDocument;
use dmfprep::{check_conservation, execute, fixtures, DropletSource};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let doc = PlanDocument::parse(fixtures::TS1_WITNESS_JSON)?;
    let trace = execute(&doc.plan);
    println!("witness: {} valid={}", trace.stats, trace.is_valid());
    check_conservation(&trace)?;
    println!("conservation holds: {} inputs = {} targets + {} waste", trace.stats.inputs(), doc.plan.targets.len(), trace.stats.n_waste);

    // reuse a droplet that step 1 already consumed
    let mut broken = doc.plan.clone();
    broken.steps[7].inputs[1] = DropletSource::StepOutput { step: 0, output: 0 };
    for v in execute(&broken).violations {
        println!("  violation: {v}");
    }

    // claim the wrong concentration
    let mut wrong = doc.plan;
    wrong.steps[2].out_cf = "13/16".parse()?;
    for v in execute(&wrong).violations {
        println!("  violation: {v}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
