//! Expressions over one complex (or real) variable.
//!
//! The grammar covers constants, the single variable, `+ - * /`, integer
//! powers and `exp`. That is enough to write every entire function and
//! quotient used by the analyses, and it keeps evaluation branch-free: there
//! are no multivalued functions.

mod diff;
mod eval;
mod parser;

use std::fmt;

use num_complex::Complex64;

pub use eval::EvalError;
pub use parser::{ParseError, ParseErrorKind};

/// Largest absolute integer exponent accepted by `^`.
pub const MAX_POWER: i32 = 64;

/// Variable names that are rejected as "wrong variable" instead of
/// "unknown identifier" when they are not the expected symbol.
pub const KNOWN_VARIABLES: &[&str] = &["z", "t", "w", "x", "y", "u"];

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(Complex64),
    Var,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Exp(Box<Node>),
}

/// A parsed expression in exactly one variable symbol.
///
/// Immutable once built; evaluation takes `&self`, so trees can be shared
/// between threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    var: String,
    root: Node,
}

impl Expr {
    pub fn parse(source: &str, variable: &str) -> Result<Self, ParseError> {
        let root = parser::parse(source, variable)?;
        Ok(Expr {
            var: variable.to_string(),
            root,
        })
    }

    pub fn from_node(variable: &str, root: Node) -> Self {
        Expr {
            var: variable.to_string(),
            root,
        }
    }

    pub fn constant(variable: &str, value: Complex64) -> Self {
        Self::from_node(variable, Node::Const(value))
    }

    pub fn variable(&self) -> &str {
        &self.var
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn into_root(self) -> Node {
        self.root
    }

    /// True if the tree is literally the constant zero.
    pub fn is_zero_constant(&self) -> bool {
        matches!(self.root, Node::Const(c) if c == Complex64::new(0.0, 0.0))
    }

    /// Replace every occurrence of the variable by `replacement`; the result
    /// is an expression in `replacement`'s variable.
    pub fn substitute(&self, replacement: &Expr) -> Expr {
        Expr {
            var: replacement.var.clone(),
            root: substitute_node(&self.root, &replacement.root),
        }
    }

    /// Symbolic derivative with respect to the expression's variable.
    pub fn differentiate(&self) -> Expr {
        Expr {
            var: self.var.clone(),
            root: diff::derivative(&self.root),
        }
    }

    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64, EvalError> {
        eval::eval_complex(&self.root, z)
    }

    pub fn eval_real(&self, t: f64) -> Result<f64, EvalError> {
        eval::eval_real(&self.root, t)
    }

    pub fn eval_scaled(&self, z: Complex64) -> Result<crate::scaled::Scaled, EvalError> {
        eval::eval_scaled(&self.root, z)
    }

    /// `ln |f(z)|` in extended range; `-inf` where `f(z) = 0`.
    pub fn ln_abs(&self, z: Complex64) -> Result<f64, EvalError> {
        Ok(self.eval_scaled(z)?.ln_abs())
    }
}

fn substitute_node(node: &Node, repl: &Node) -> Node {
    let sub = |n: &Node| Box::new(substitute_node(n, repl));
    match node {
        Node::Const(c) => Node::Const(*c),
        Node::Var => repl.clone(),
        Node::Neg(a) => Node::Neg(sub(a)),
        Node::Add(a, b) => Node::Add(sub(a), sub(b)),
        Node::Sub(a, b) => Node::Sub(sub(a), sub(b)),
        Node::Mul(a, b) => Node::Mul(sub(a), sub(b)),
        Node::Div(a, b) => Node::Div(sub(a), sub(b)),
        Node::Pow(a, n) => Node::Pow(sub(a), *n),
        Node::Exp(a) => Node::Exp(sub(a)),
    }
}

// Builders with light constant folding, shared by the differentiator and the
// witness constructors.

pub(crate) fn is_const(n: &Node, v: f64) -> bool {
    matches!(n, Node::Const(c) if c.re == v && c.im == 0.0)
}

pub fn cnst(re: f64, im: f64) -> Node {
    Node::Const(Complex64::new(re, im))
}

pub fn add(a: Node, b: Node) -> Node {
    if is_const(&a, 0.0) {
        return b;
    }
    if is_const(&b, 0.0) {
        return a;
    }
    if let (Node::Const(x), Node::Const(y)) = (&a, &b) {
        return Node::Const(x + y);
    }
    Node::Add(Box::new(a), Box::new(b))
}

pub fn sub(a: Node, b: Node) -> Node {
    if is_const(&b, 0.0) {
        return a;
    }
    if is_const(&a, 0.0) {
        return neg(b);
    }
    if let (Node::Const(x), Node::Const(y)) = (&a, &b) {
        return Node::Const(x - y);
    }
    Node::Sub(Box::new(a), Box::new(b))
}

pub fn neg(a: Node) -> Node {
    match a {
        Node::Const(c) => Node::Const(-c),
        Node::Neg(inner) => *inner,
        other => Node::Neg(Box::new(other)),
    }
}

pub fn mul(a: Node, b: Node) -> Node {
    if is_const(&a, 0.0) || is_const(&b, 0.0) {
        return cnst(0.0, 0.0);
    }
    if is_const(&a, 1.0) {
        return b;
    }
    if is_const(&b, 1.0) {
        return a;
    }
    if let (Node::Const(x), Node::Const(y)) = (&a, &b) {
        return Node::Const(x * y);
    }
    Node::Mul(Box::new(a), Box::new(b))
}

pub fn div(a: Node, b: Node) -> Node {
    if is_const(&a, 0.0) {
        return cnst(0.0, 0.0);
    }
    if is_const(&b, 1.0) {
        return a;
    }
    Node::Div(Box::new(a), Box::new(b))
}

/// Integer power; exponents outside `±MAX_POWER` are split so the tree
/// invariant holds.
pub fn powi(a: Node, n: i32) -> Node {
    match n {
        0 => cnst(1.0, 0.0),
        1 => a,
        n if n > MAX_POWER => mul(Node::Pow(Box::new(a.clone()), MAX_POWER), powi(a, n - MAX_POWER)),
        n if n < -MAX_POWER => div(Node::Pow(Box::new(a.clone()), -MAX_POWER), powi(a, -n - MAX_POWER)),
        n => Node::Pow(Box::new(a), n),
    }
}

pub fn exp(a: Node) -> Node {
    if is_const(&a, 0.0) {
        return cnst(1.0, 0.0);
    }
    Node::Exp(Box::new(a))
}

fn fmt_real(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x < 0.0 || (x == 0.0 && x.is_sign_negative()) {
        write!(f, "(-{})", -x)
    } else {
        write!(f, "{}", x)
    }
}

fn fmt_node(node: &Node, var: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match node {
        Node::Const(c) => {
            if c.im == 0.0 {
                fmt_real(c.re, f)
            } else if c.re == 0.0 {
                write!(f, "(")?;
                fmt_real(c.im, f)?;
                write!(f, "*i)")
            } else {
                write!(f, "(")?;
                fmt_real(c.re, f)?;
                write!(f, " + ")?;
                fmt_real(c.im, f)?;
                write!(f, "*i)")
            }
        }
        Node::Var => write!(f, "{}", var),
        Node::Neg(a) => {
            write!(f, "(-")?;
            fmt_node(a, var, f)?;
            write!(f, ")")
        }
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
            let op = match node {
                Node::Add(..) => " + ",
                Node::Sub(..) => " - ",
                Node::Mul(..) => "*",
                _ => "/",
            };
            write!(f, "(")?;
            fmt_node(a, var, f)?;
            write!(f, "{}", op)?;
            fmt_node(b, var, f)?;
            write!(f, ")")
        }
        Node::Pow(a, n) => {
            write!(f, "(")?;
            fmt_node(a, var, f)?;
            write!(f, ")^{}", n)
        }
        Node::Exp(a) => {
            write!(f, "exp(")?;
            fmt_node(a, var, f)?;
            write!(f, ")")
        }
    }
}

/// Prints in the input grammar, fully parenthesised, so `parse(print(e))`
/// evaluates like `e`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_node(&self.root, &self.var, f)
    }
}
