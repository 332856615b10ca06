//! Witness functions built from affine minorants, and why the small-space
//! witness uses e^{-i(a-1)z} rather than e^{i(a+1)z}.
//!
//! Run with `cargo run --release --example witness_functions`.

use hpw::halfnorm::{default_schedule, is_in_small_space, weighted_norm};
use hpw::theorems::{witness_big, witness_small_form, WitnessForm};
use hpw::weights::classify_big_space;
use hpw::Weight;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in ["1", "t", "t + exp(t)"] {
        let w = Weight::parse(p)?;
        let a = classify_big_space(&w).witness().expect("nontrivial");
        let f = witness_big(a.a, a.b);
        println!("p = {:<10} f = {:<50} ||f|| = {:.9}", p, f.to_string(), weighted_norm(&f, &w)?.value);
    }

    let w = Weight::parse("t")?;
    for form in [WitnessForm::Corrected, WitnessForm::Literal] {
        let f = witness_small_form(-1.0, form);
        let m = is_in_small_space(&f, &w, &default_schedule())?;
        println!(
            "{:?} witness {}: {:?}, sup outside K_c at c = 2^24 is {:.3e}",
            form,
            f,
            m.in_small_space,
            m.last_sup()
        );
    }
    Ok(())
}
