// Gradient families quantized to the grid, plus seeded random corpora.
//
//     cargo run --example series_gradients

use std::error::Error;

use dmfprep::series::{generate, random_family, Family, SeriesSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let families = [
        Family::Linear { a: 0.25, delta: 0.25 },
        Family::Harmonic { a: 0.5 },
        Family::Geometric { a: 0.5, ratio: 0.5 },
        Family::Parabolic { a: 0.1, b: 0.05 },
    ];
    for family in families {
        let name = family.name();
        let ts = generate(&SeriesSpec { family, count: 4, precision: 4 })?;
        println!("{name:>9}: {}", ts.display_common());
    }

    // out-of-range values are an error, never clamped
    let err = generate(&SeriesSpec { family: Family::Linear { a: 0.5, delta: 0.5 }, count: 3, precision: 4 });
    println!("linear 1/2 + 1/2 i: {}", err.unwrap_err());

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..2 {
        let family = random_family("geometric", 6, &mut rng)?;
        println!("random {:?}: {}", family, generate(&SeriesSpec { family: family.clone(), count: 6, precision: 5 })?.display_common());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
