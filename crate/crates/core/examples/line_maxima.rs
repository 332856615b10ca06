//! Line maxima Mf(t) = sup_x |f(x + it)| and the convexity of ln Mf.
//!
//! Run with `cargo run --example line_maxima [f]`.

use hpw::curve::geometric_grid;
use hpw::linemax::{affine_minorant_of_curve, check_log_convexity, curve_from_lines, mf_lines, LineMaxOptions};
use hpw::Expr;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let src = std::env::args().nth(1).unwrap_or_else(|| "1/(z-3+2*i) + 0.5/(z+5+i)".into());
    let f = Expr::parse(&src, "z")?;
    let grid = geometric_grid(1.0 / 16.0, 16.0, 9);
    let lines = mf_lines(&f, &grid, &LineMaxOptions::default())?;

    println!("f(z) = {}", src);
    println!("{:>10} {:>14} {:>12} {:>16}", "t", "ln Mf(t)", "argmax x", "status");
    for l in &lines {
        println!(
            "{:>10.5} {:>14.9} {:>12.6} {:>16?}",
            l.y,
            l.log_value,
            l.argmax_x.unwrap_or(f64::NAN),
            l.status
        );
    }

    let curve = curve_from_lines(&lines, "ln Mf")?;
    let conv = check_log_convexity(&curve, 1e-6);
    println!("worst convexity defect {:.3e} ({})", conv.worst_defect, if conv.pass { "convex" } else { "NOT convex" });
    if let Ok(m) = affine_minorant_of_curve(&curve) {
        println!("ln Mf(t) >= {:.6} t + {:.6} on the grid", m.a, m.b);
    }
    Ok(())
}
