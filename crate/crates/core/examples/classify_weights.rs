//! Is the big space Λ(p), or the small space λ(p), nontrivial?
//!
//! Run with `cargo run --example classify_weights [p ...]`.

use hpw::theorems::{witness_big, witness_small};
use hpw::weights::{classify_weight, MinorantOptions};
use hpw::Weight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut weights: Vec<String> = std::env::args().skip(1).collect();
    if weights.is_empty() {
        weights = ["1", "t", "t + exp(t)", "exp(t^2)"].map(String::from).to_vec();
    }
    for src in &weights {
        let w = Weight::parse(src)?;
        let c = classify_weight(&w, &MinorantOptions::default())?;
        println!("p(t) = {}", src);
        println!("  big space:   {}", c.big_space.name());
        if let Some(a) = c.big_space.witness() {
            println!("    -ln p(t) >= {:.6} t + {:.6}, witness {}", a.a, a.b, witness_big(a.a, a.b));
        }
        println!("  small space: {}", c.small_space.name());
        if let Some(a) = c.small_space.witness() {
            println!("    witness {}", witness_small(a.a));
        }
        println!("  p(t) as t -> 0+: {:?}", c.limit_at_zero.trend);
    }
    Ok(())
}
