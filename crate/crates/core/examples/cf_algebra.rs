// Exact concentration-factor arithmetic on the dyadic grid.
//
//     cargo run --example cf_algebra

use std::error::Error;

use dmfprep::ConcFactor;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let t: ConcFactor = "5/16".parse()?;
    let anchor: ConcFactor = "8/16".parse()?;

    // 8/16 is stored canonically as 1/2
    println!("anchor {anchor} (precision {})", anchor.precision());

    let partner = ConcFactor::complement(t, anchor).ok_or("anchor out of range")?;
    println!("{t} = mix({anchor}, {partner})");
    assert_eq!(anchor.mix(partner), t);

    // Each mix adds at most one bit of precision.
    let mut c = ConcFactor::ONE;
    for _ in 0..4 {
        c = c.halve();
        print!("{} ", c.display_over(4));
    }
    println!();

    let q = ConcFactor::quantize(1.0 / 6.0, 4)?;
    println!("1/6 on the 1/16 grid -> {q} (error {:.4})", (q.to_f64() - 1.0 / 6.0).abs());

    for bad in ["3/7", "5/4", "0.3x"] {
        if let Err(e) = bad.parse::<ConcFactor>() {
            println!("{bad:>5}: {e}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
