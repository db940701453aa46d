// On-chip storage: FIFO per concentration, peak tracking and capacity
// policies.
//
//     cargo run --example storage_fifo

use std::error::Error;

use dmfprep::inventory::{Capacity, Inventory, OnFull};
use dmfprep::{ConcFactor, Droplet, DropletSource};

fn droplet(cf: &str, step: usize) -> Result<Droplet, Box<dyn Error>> {
    Ok(Droplet { cf: cf.parse()?, source: DropletSource::StepOutput { step, output: 0 } })
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut inv = Inventory::new();
    for (i, cf) in ["1/2", "1/4", "1/4", "3/4"].iter().enumerate() {
        inv.store(droplet(cf, i)?)?;
    }
    let quarter: ConcFactor = "1/4".parse()?;
    let first = inv.take_exact(quarter).ok_or("no 1/4 stored")?;
    println!("took {} from {} (oldest first)", first.cf, first.source);
    println!("immediate higher than 5/16: {:?}", inv.peek_immediate_higher("5/16".parse()?));
    println!("occupancy {} peak {}", inv.occupancy(), inv.peak());

    let mut small = Inventory::with_capacity_limit(Capacity { limit: 2, on_full: OnFull::EvictOldest });
    for (i, cf) in ["1/2", "1/4", "1/8"].iter().enumerate() {
        if let Some(evicted) = small.store(droplet(cf, i)?)? {
            println!("full: evicted {} to waste", evicted.cf);
        }
    }
    let mut strict = Inventory::with_capacity_limit(Capacity { limit: 1, on_full: OnFull::Reject });
    strict.store(droplet("1/2", 0)?)?;
    if let Err(e) = strict.store(droplet("1/4", 1)?) {
        println!("strict storage: {e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
