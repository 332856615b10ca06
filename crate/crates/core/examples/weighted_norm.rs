//! Weighted sup-norms sup p(Im z)|f(z)|.
//!
//! Run with `cargo run --example weighted_norm`.

use hpw::halfnorm::weighted_norm;
use hpw::{Expr, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("4/(1-i*z)^2", "t"),
        ("1/(z+i)", "t"),
        ("exp(2*i*z)/(z+i)", "t"),
        ("exp(i*z)", "t + exp(t)"),
        ("1", "1"),
    ];
    for (f, p) in cases {
        let n = weighted_norm(&Expr::parse(f, "z")?, &Weight::parse(p)?)?;
        let at = n
            .argmax
            .map(|z| format!("{:.4} + {:.4}i", z.re, z.im))
            .unwrap_or_else(|| "-".into());
        println!("{:>18}  p = {:<11} norm {:.9}  at {:<20} {:?}", f, p, n.value, at, n.status);
    }
    Ok(())
}
