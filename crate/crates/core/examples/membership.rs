//! Does p(Im z)|f(z)| vanish outside large boxes K_c?
//!
//! Run with `cargo run --release --example membership`.

use hpw::halfnorm::{default_schedule, is_in_small_space};
use hpw::{Expr, Weight};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let w = Weight::parse("t")?;
    for f in ["exp(2*i*z)/(z+i)", "1/(z+i)", "4/(1-i*z)^2"] {
        let m = is_in_small_space(&Expr::parse(f, "z")?, &w, &default_schedule())?;
        println!("f = {}: {:?}", f, m.in_small_space);
        for row in m.table.iter().step_by(4) {
            println!(
                "  c = {:>9}  sup {:.3e}  (strip below {:.1e}, above {:.1e}, sides {:.1e})",
                row.c, row.sup, row.regions.lower, row.regions.upper, row.regions.side
            );
        }
        println!("  {}", m.diagnostics);
    }
    Ok(())
}
