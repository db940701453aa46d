// Writing and reading versioned plan documents.
//
//     cargo run --example plan_files

use std::error::Error;

use dmfprep::report::PlanDocument;
use dmfprep::{emdp, execute, ConcFactor, EmdpConfig, TargetSeries};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let targets: TargetSeries = ["3/4", "1/2", "1/2", "1/8"]
        .iter()
        .map(|s| s.parse::<ConcFactor>())
        .collect::<Result<_, _>>()?;
    let plan = emdp::plan(&targets, &EmdpConfig::default())?;
    let text = PlanDocument::new(plan.clone(), Some("emdp")).render();
    print!("{text}");

    let path = std::env::temp_dir().join(format!("dmfprep-example-{}.json", std::process::id()));
    std::fs::write(&path, &text)?;
    let back = PlanDocument::parse(&std::fs::read_to_string(&path)?)?;
    std::fs::remove_file(&path)?;
    assert_eq!(back.plan, plan);
    println!("reloaded: {}", execute(&back.plan).stats);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
