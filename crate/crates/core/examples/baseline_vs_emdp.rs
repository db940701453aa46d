// EMDP against bit-serial dilution of every target, on the fixtures and on
// a seeded random corpus.
//
//     cargo run --example baseline_vs_emdp

use std::error::Error;

use dmfprep::baseline::{naive_multi, BitSchedule};
use dmfprep::report::table::{ComparisonTable, TableRow};
use dmfprep::series::random_explicit;
use dmfprep::{emdp, fixtures, ConcFactor, EmdpConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let t: ConcFactor = "5/16".parse()?;
    let schedule = BitSchedule::new(t).ok_or("endpoint")?;
    let chain: Vec<String> = schedule.intermediates().iter().map(|c| c.to_string()).collect();
    println!("bit-serial {t}: partners {:?}, chain {}", schedule.partners, chain.join(" -> "));

    let mut table = ComparisonTable::default();
    let mut named: Vec<(String, _)> = fixtures::NAMES.iter().map(|n| (n.to_string(), fixtures::by_name(n))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..5 {
        named.push((format!("random-{i}"), Some(random_explicit(8, 6, &mut rng))));
    }
    for (name, ts) in named {
        let ts = ts.ok_or("missing fixture")?;
        let e = emdp::plan(&ts, &EmdpConfig::default())?;
        table.push(TableRow::computed(&name, "emdp", &e).map_err(|v| format!("{v:?}"))?);
        table.push(TableRow::computed(&name, "naive", &naive_multi(&ts)).map_err(|v| format!("{v:?}"))?);
    }
    print!("{}", table.to_text());
    if let Some(r) = table.sample_reduction("emdp", "naive") {
        println!("sample droplets saved overall: {:.1}%", 100.0 * r);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
