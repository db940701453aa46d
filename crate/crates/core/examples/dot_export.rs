// Mixing graph of a plan in Graphviz DOT.
//
//     cargo run --example dot_export | dot -Tsvg > ts1.svg

use std::error::Error;

use dmfprep::report::export_dot;
use dmfprep::{emdp, fixtures, EmdpConfig};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let plan = emdp::plan(&fixtures::ts1(), &EmdpConfig::default())?;
    let dot = export_dot(&plan).map_err(|v| format!("invalid plan: {v:?}"))?;
    print!("{dot}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
