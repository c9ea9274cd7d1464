use std::sync::Arc;

use num_complex::Complex64;

use super::{parse, BinOp, Expr, Func};
use crate::closed_forms::MlKernelParams;
use crate::error::{Error, Result};
use crate::function::{FunctionHandle, Interval, Regularity};
use crate::specfun::{rgamma, SeriesSpec};

const NAN: Complex64 = Complex64::new(f64::NAN, 0.0);

enum Node {
    Const(Complex64),
    T,
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, Complex64),
    Exp(Box<Node>),
    Ml3(MlKernelParams, f64),
}

fn constant(e: &Expr) -> Result<Complex64> {
    let v = lower(e)?.eval(f64::NAN);
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::domain(format!("constant `{e}` is not finite")));
    }
    // drop negative zeros
    Ok(Complex64::new(v.re + 0.0, v.im + 0.0))
}

fn lower(e: &Expr) -> Result<Node> {
    Ok(match e {
        Expr::Num(z) => Node::Const(*z),
        Expr::T => Node::T,
        Expr::Neg(x) => Node::Neg(Box::new(lower(x)?)),
        Expr::Bin(op, l, r) => Node::Bin(*op, Box::new(lower(l)?), Box::new(lower(r)?)),
        Expr::Pow(b, x) => Node::Pow(Box::new(lower(b)?), constant(x)?),
        Expr::Call(Func::Exp, args) => Node::Exp(Box::new(lower(&args[0])?)),
        Expr::Call(Func::Pow, args) => Node::Pow(Box::new(lower(&args[0])?), constant(&args[1])?),
        Expr::Call(Func::Ml3, args) => {
            let c: Vec<Complex64> = args.iter().map(constant).collect::<Result<_>>()?;
            let shift = match c.get(4) {
                None => 0.0,
                Some(a) if a.im == 0.0 => a.re,
                Some(a) => return Err(Error::domain(format!("ml3 shift must be real (got {a})"))),
            };
            Node::Ml3(MlKernelParams::new(c[0], c[1], c[2], c[3])?, shift)
        }
    })
}

fn power(z: Complex64, w: Complex64) -> Complex64 {
    if z.im == 0.0 && w.im == 0.0 {
        let (x, p) = (z.re, w.re);
        if x >= 0.0 {
            return Complex64::new(x.powf(p), 0.0);
        }
        if p == p.trunc() && p.abs() < i32::MAX as f64 {
            return Complex64::new(x.powi(p as i32), 0.0);
        }
    }
    if z == Complex64::new(0.0, 0.0) {
        return if w.re > 0.0 { z } else { NAN };
    }
    (w * z.ln()).exp()
}

fn ml3(k: &MlKernelParams, x: f64) -> Complex64 {
    if !(x >= 0.0) {
        return NAN;
    }
    if x == 0.0 {
        let e = k.nu - 1.0;
        return if e == Complex64::new(0.0, 0.0) {
            rgamma(k.nu)
        } else if e.re > 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            NAN
        };
    }
    k.eval(x, &SeriesSpec::default()).unwrap_or(NAN)
}

impl Node {
    fn eval(&self, t: f64) -> Complex64 {
        match self {
            Node::Const(z) => *z,
            Node::T => Complex64::new(t, 0.0),
            Node::Neg(x) => -x.eval(t),
            Node::Bin(op, l, r) => {
                let (a, b) = (l.eval(t), r.eval(t));
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if a.im == 0.0 && b.im == 0.0 => Complex64::new(a.re / b.re, 0.0),
                    BinOp::Div => a / b,
                }
            }
            Node::Pow(b, w) => power(b.eval(t), *w),
            Node::Exp(x) => {
                let z = x.eval(t);
                if z.im == 0.0 {
                    Complex64::new(z.re.exp(), 0.0)
                } else {
                    z.exp()
                }
            }
            Node::Ml3(k, a) => ml3(k, t - a),
        }
    }
}

/// Turns a syntax tree into a handle on `domain`. The regularity is taken on
/// trust. Evaluation failures (0 to a negative power, say) show up as
/// non-finite values, which `FunctionHandle::try_eval` reports.
pub fn compile(e: &Expr, domain: Interval, regularity: Regularity) -> Result<FunctionHandle> {
    let node = Arc::new(lower(e)?);
    Ok(FunctionHandle::new(domain, regularity, move |t| node.eval(t)))
}

/// Value of a t-free expression such as `0.5+1i` or `1/3`.
pub fn constant_value(text: &str) -> Result<Complex64> {
    let e = parse(text)?;
    if e.mentions_t() {
        return Err(Error::domain(format!("`{text}` must not depend on t")));
    }
    constant(&e)
}

/// `parse` followed by `compile`.
pub fn compile_str(text: &str, domain: Interval, regularity: Regularity) -> Result<FunctionHandle> {
    compile(&parse(text)?, domain, regularity)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str, a: f64, b: f64, t: f64) -> Complex64 {
        compile_str(s, Interval::new(a, b).unwrap(), Regularity::Smooth).unwrap().eval(t)
    }

    #[test]
    fn examples() {
        assert_eq!(at("(t-0)^2", 0.0, 2.0, 1.5).re, 2.25);
        assert!((at("exp(-t)*t", 0.0, 2.0, 1.0).re - 0.36787944117144233).abs() < 1e-16);
        assert!((at("t^1.4", 0.0, 1.0, 0.7).re - 0.6069281150667864).abs() < 1e-15);
        assert_eq!(at("1", 0.0, 1.0, 0.3), Complex64::new(1.0, 0.0));
        assert!((at("pow(1-t, -0.5)", 0.0, 0.9, 0.5).re - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn complex_values() {
        let v = at("exp(2i*t)", 0.0, 1.0, 0.5);
        assert!((v - Complex64::new(1f64.cos(), 1f64.sin())).norm() < 1e-15);
        let v = at("t^(0.5+1i)", 0.0, 2.0, 2.0);
        let want = (Complex64::new(0.5, 1.0) * 2f64.ln()).exp();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn ml3_reduces_to_exp() {
        // E_{1,1}(ω x) = e^{ωx}
        let v = at("ml3(1, 1, 1, -0.5)", 0.0, 2.0, 1.2);
        assert!((v.re - (-0.6f64).exp()).abs() < 1e-14);
        let v = at("ml3(1, 2, 1, 1, 0.5)", 0.5, 2.0, 1.5);
        assert!((v.re - (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn lazy_errors() {
        let f = compile_str("t^-1", Interval::new(0.0, 1.0).unwrap(), Regularity::Integrable).unwrap();
        assert!(matches!(f.try_eval(0.0), Err(Error::NonFinite { .. })));
        assert!(f.try_eval(0.5).is_ok());
        assert!(compile_str("ml3(-1, 1, 1, 1)", Interval::new(0.0, 1.0).unwrap(), Regularity::Smooth).is_err());
        assert_eq!(constant_value("1/4 - 2i").unwrap(), Complex64::new(0.25, -2.0));
        assert!(constant_value("t").is_err());
        assert!(matches!(compile_str("t^", Interval::new(0.0, 1.0).unwrap(), Regularity::Smooth), Err(Error::Parse(_))));
    }
}
