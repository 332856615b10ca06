//! Weighted sup-norm spaces of holomorphic functions on the upper half plane.
//!
//! For a weight `p : (0, ∞) → (0, ∞)` the big space `Λ(p)` holds the
//! holomorphic `f` with `‖f‖ = sup p(Im z)|f(z)| < ∞`; the small space `λ(p)`
//! additionally asks that `p(Im z)|f(z)|` vanish uniformly outside the boxes
//! `K_c = {1/c ≤ Im z ≤ c, |Re z| ≤ c}`.
//!
//! The crate decides numerically, on explicit sample grids, whether these
//! spaces are trivial, computes line maxima `Mf(y)` and weighted norms,
//! checks the log-convexity of `Mf` and the asymptotics of `ln Mf(t) - a t`,
//! and maps the disk Bloch spaces onto the half-plane with the Cayley
//! transform.
//!
//! | module | what it does |
//! |---|---|
//! | [`expr`] | parse, evaluate and differentiate expressions in `z`, `t` or `w` |
//! | [`weights`] | weight validation, `Λ(p)` / `λ(p)` triviality verdicts |
//! | [`linemax`] | `Mf(y)`, `ln Mf` curves, convexity and affine minorants |
//! | [`halfnorm`] | weighted norm, tails outside `K_c`, small-space membership |
//! | [`theorems`] | witness functions, liminf slope, asymptotic decay checks |
//! | [`bloch`] | Cayley transform and the Bloch-space correspondence |
//! | [`cli`] | the `hpw` command-line driver and its JSON reports |

pub mod bloch;
pub mod cli;
pub mod curve;
pub mod error;
pub mod expr;
pub mod halfnorm;
pub mod linemax;
pub mod optimize;
pub mod scaled;
pub mod theorems;
pub mod weights;

pub use curve::SampledCurve;
pub use error::{Error, Result};
pub use expr::Expr;
pub use weights::{AffineWitness, ClassificationVerdict, Weight};

pub use num_complex::Complex64;
