//! A small expression language for integrands.
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := '-' factor | atom ('^' exponent)?
//! exponent := '-' exponent | (number | '(' expr ')') ('^' exponent)?
//! atom     := number | 't' | call | '(' expr ')'
//! call     := 'exp' '(' expr ')'
//!           | 'pow' '(' expr ',' const ')'
//!           | 'ml3' '(' const ',' const ',' const ',' const (',' const)? ')'
//! number   := digits ('.' digits)? (('e' | 'E') ('+' | '-')? digits)? 'i'? | 'i'
//! ```
//!
//! Exponents and call parameters marked `const` must not mention `t`.
//! `ml3(μ, ν, γ, ω, a)` is (t−a)^{ν−1}·E^γ_{μ,ν}(ω(t−a)^μ), with a = 0 when
//! omitted. Whitespace is ignored; `−` (U+2212) is accepted as a minus sign.

mod compile;
mod parser;
mod print;

use num_complex::Complex64;

pub use compile::{compile, compile_str, constant_value};
pub use parser::parse;

/// Grammar summary, suitable for help text.
pub const GRAMMAR: &str = "\
expr     := term (('+' | '-') term)*
term     := factor (('*' | '/') factor)*
factor   := '-' factor | atom ('^' exponent)?
exponent := '-' exponent | (number | '(' expr ')') ('^' exponent)?
atom     := number | 't' | call | '(' expr ')'
call     := exp(expr) | pow(expr, const) | ml3(mu, nu, gamma, omega [, a])
number   := 1 | 2.5 | 1e-3 | 2i | i
exponents and call parameters must not depend on t;
ml3(mu, nu, gamma, omega, a) = (t-a)^(nu-1) E^gamma_{mu,nu}(omega (t-a)^mu)";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Pow,
    Ml3,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Pow => "pow",
            Func::Ml3 => "ml3",
        }
    }
}

/// Syntax tree. `Pow` exponents and the constant call arguments are
/// t-free; [`parse`] guarantees it.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(Complex64),
    T,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Vec<Expr>),
}

impl Expr {
    pub fn mentions_t(&self) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::T => true,
            Expr::Neg(e) => e.mentions_t(),
            Expr::Bin(_, l, r) | Expr::Pow(l, r) => l.mentions_t() || r.mentions_t(),
            Expr::Call(_, args) => args.iter().any(Expr::mentions_t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at offset {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    /// The input with a caret under the offending byte.
    pub fn pointer(&self, input: &str) -> String {
        let col = input.get(..self.offset).map_or(self.offset, |s| s.chars().count());
        format!("{input}\n{}^", " ".repeat(col))
    }
}
