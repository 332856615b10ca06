//! Bloch functions on the disk against the weight p(t) = t on the half plane.
//!
//! Run with `cargo run --release --example bloch_bridge`.

use hpw::bloch::{compare_norms, g_transform, little_bloch_check, DiskFunction};
use hpw::Expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 1..=4 {
        let df = DiskFunction::parse(&format!("w^{}", n))?;
        let r = compare_norms(&df)?;
        println!(
            "f = w^{}: disk {:.9}  half plane {:.9}  gap {:.1e}",
            n, r.bloch.value, r.half_plane.value, r.gap
        );
    }

    let df = DiskFunction::parse("w^2")?;
    println!("g_f for f = w^2: {}", g_transform(&df));

    // f' = 1/(1-w): Bloch but not little Bloch.
    let df = DiskFunction::from_derivative(Expr::parse("1/(1-w)", "w")?)?;
    let r = little_bloch_check(&df)?;
    let last = r.rings.last().unwrap();
    println!(
        "f' = 1/(1-w): ring max {:.6} at 1-r = {:.1e}; disk {:?}, half plane {:?}, agree {}",
        last.max, last.gap, r.disk_verdict, r.half_plane_verdict, r.agree
    );
    Ok(())
}
