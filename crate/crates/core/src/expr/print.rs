use std::fmt;

use num_complex::Complex64;

use super::{BinOp, Expr};

fn literal(z: Complex64) -> Option<String> {
    match (z.re, z.im) {
        (x, y) if y == 0.0 && x >= 0.0 && !x.is_sign_negative() => Some(format!("{x}")),
        (x, y) if x == 0.0 && y >= 0.0 && !x.is_sign_negative() => Some(format!("{y}i")),
        _ => None,
    }
}

fn num(z: Complex64) -> String {
    literal(z).unwrap_or_else(|| {
        let re = literal(Complex64::new(z.re.abs(), 0.0)).unwrap_or_default();
        let im = literal(Complex64::new(0.0, z.im.abs())).unwrap_or_default();
        let sr = if z.re < 0.0 { "-" } else { "" };
        let si = if z.im < 0.0 { "-" } else { "+" };
        format!("({sr}{re}{si}{im})")
    })
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
        Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(z) if literal(*z).is_none() => 5,
        _ => 6,
    }
}

fn write(e: &Expr, min: u8, out: &mut String) {
    if prec(e) < min {
        out.push('(');
        write(e, 0, out);
        out.push(')');
        return;
    }
    match e {
        Expr::Num(z) => out.push_str(&num(*z)),
        Expr::T => out.push('t'),
        Expr::Neg(x) => {
            out.push('-');
            write(x, 3, out);
        }
        Expr::Bin(op, l, r) => {
            let (sym, lp, rp) = match op {
                BinOp::Add => (" + ", 1, 2),
                BinOp::Sub => (" - ", 1, 2),
                BinOp::Mul => ("*", 2, 3),
                BinOp::Div => ("/", 2, 3),
            };
            write(l, lp, out);
            out.push_str(sym);
            write(r, rp, out);
        }
        Expr::Pow(b, x) => {
            write(b, 6, out);
            out.push('^');
            exponent(x, out);
        }
        Expr::Call(f, args) => {
            out.push_str(f.name());
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(a, 0, out);
            }
            out.push(')');
        }
    }
}

fn exponent(e: &Expr, out: &mut String) {
    match e {
        Expr::Num(z) if literal(*z).is_some() => out.push_str(&num(*z)),
        Expr::Neg(x) => {
            out.push('-');
            exponent(x, out);
        }
        Expr::Pow(b, x) if matches!(**b, Expr::Num(z) if literal(z).is_some()) => {
            write(b, 6, out);
            out.push('^');
            exponent(x, out);
        }
        _ => {
            out.push('(');
            write(e, 0, out);
            out.push(')');
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write(self, 0, &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use crate::expr::parse;

    fn show(s: &str) -> String {
        parse(s).unwrap().to_string()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(show("(t-0)^2"), "(t - 0)^2");
        assert_eq!(show("exp( -t )*t"), "exp(-t)*t");
        assert_eq!(show("t-(1-t)"), "t - (1 - t)");
        assert_eq!(show("(-t)^2"), "(-t)^2");
        assert_eq!(show("t^(-(2))"), "t^-2");
        assert_eq!(show("t^(1+2i)"), "t^(1 + 2i)");
        assert_eq!(show("pow(1-t,-0.5)"), "pow(1 - t, -0.5)");
        assert_eq!(show("--t"), "--t");
    }
}
