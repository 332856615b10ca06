//! ln Mf(t) - a t → -∞ for members of the small space, and the auxiliary
//! function F(z) = e^{iaz} f(z).
//!
//! Run with `cargo run --release --example theorem3`.

use hpw::theorems::{theorem3_check, verify_f_properties};
use hpw::{Expr, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = Weight::parse("t")?;
    let f = Expr::parse("exp(2*i*z)/(z+i)", "z")?;

    let r = theorem3_check(&f, &w)?;
    println!("a_hat = {:.9} (running minimum of ln Mf/t: {:.6})", r.a_hat, r.slope.running_min);
    println!("{:>8} {:>14} {:>14}", "t", "D(t)", "-ln(1+t)");
    for (t, d) in r.d_curve.points().step_by(12) {
        println!("{:>8.3} {:>14.9} {:>14.9}", t, d, -(1.0 + t).ln());
    }
    println!(
        "tail monotone: {}, diverges to -inf: {}, hypothesis met: {}",
        r.tail_monotone, r.diverges_to_minus_inf, r.hypothesis_met
    );

    let props = verify_f_properties(&f, &w)?;
    println!("F(z) = {}", props.f_expr);
    for c in &props.checks {
        println!("  ({}) {:<45} {}  {}", c.id, c.name, if c.pass { "ok  " } else { "FAIL" }, c.detail);
    }

    match theorem3_check(&Expr::parse("1/(z+i)", "z")?, &w) {
        Err(e) => println!("1/(z+i): {}", e),
        Ok(_) => println!("1/(z+i): unexpectedly accepted"),
    }
    Ok(())
}
