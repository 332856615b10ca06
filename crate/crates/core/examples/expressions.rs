//! Parse, evaluate and differentiate expressions.
//!
//! Run with `cargo run --example expressions`.

use hpw::{Complex64, Expr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = Expr::parse("exp(2*i*z)/(z+i)", "z")?;
    let df = f.differentiate();
    println!("f(z)  = {}", f);
    println!("f'(z) = {}", df);

    for z in [Complex64::new(0.0, 1.0), Complex64::new(1.5, 0.25)] {
        println!("z = {:<12} f = {:.6}  f' = {:.6}", z, f.eval_complex(z)?, df.eval_complex(z)?);
    }

    // Moduli far outside f64 range are still available through ln|f|.
    let g = Expr::parse("exp(-i*z^2)", "z")?;
    let z = Complex64::new(40.0, 40.0);
    println!("ln|exp(-i z^2)| at {} = {}", z, g.ln_abs(z)?);

    let p = Expr::parse("t + exp(t)", "t")?;
    println!("p(1) = {}", p.eval_real(1.0)?);

    for bad in ["2z", "sin(z)", "z^100"] {
        match Expr::parse(bad, "z") {
            Ok(_) => unreachable!(),
            Err(e) => println!("{:>8}: {}", bad, e),
        }
    }
    Ok(())
}
