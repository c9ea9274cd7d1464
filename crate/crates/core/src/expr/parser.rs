use num_complex::Complex64;

use super::{BinOp, Expr, Func, ParseError};

const MAX_DEPTH: usize = 200;

const ATOM: &[&str] = &["number", "'t'", "'('", "'-'", "exp", "pow", "ml3"];
const EXPONENT: &[&str] = &["number", "'('", "'-'"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Complex64),
    Ident(String),
    Sym(char),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(_) => "number".into(),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Sym(c) => format!("'{c}'"),
        Tok::End => "end of input".into(),
    }
}

fn err(offset: usize, expected: &[&str], found: impl Into<String>) -> ParseError {
    ParseError { offset, expected: expected.iter().map(|s| s.to_string()).collect(), found: found.into() }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == b'.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if i < b.len() && b[i] == b'.' {
                i += 1;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
                let mut j = i + 1;
                if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                    j += 1;
                }
                if j < b.len() && b[j].is_ascii_digit() {
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let x: f64 = src[start..i].parse().map_err(|_| err(start, &["number"], &src[start..i]))?;
            if !x.is_finite() {
                return Err(err(start, &["finite number"], &src[start..i]));
            }
            let imag = i < b.len() && b[i] == b'i' && !b.get(i + 1).is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_');
            if imag {
                i += 1;
                out.push((Tok::Num(Complex64::new(0.0, x)), start));
            } else {
                out.push((Tok::Num(Complex64::new(x, 0.0)), start));
            }
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let word = &src[start..i];
            if word == "i" {
                out.push((Tok::Num(Complex64::new(0.0, 1.0)), start));
            } else {
                out.push((Tok::Ident(word.to_string()), start));
            }
        } else if b"+-*/^(),".contains(&c) {
            out.push((Tok::Sym(c as char), i));
            i += 1;
        } else if src[i..].starts_with('−') {
            out.push((Tok::Sym('-'), i));
            i += '−'.len_utf8();
        } else {
            let ch = src[i..].chars().next().unwrap_or('?');
            return Err(err(i, ATOM, format!("'{ch}'")));
        }
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        Err(err(self.offset(), expected, describe(self.peek())))
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            let want = format!("'{c}'");
            self.fail(&[want.as_str()])
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(err(self.offset(), &["shallower nesting"], format!("more than {MAX_DEPTH} levels")));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let e = if *self.peek() == Tok::Sym('-') {
            self.bump();
            Expr::Neg(Box::new(self.factor()?))
        } else {
            let base = self.atom()?;
            if *self.peek() == Tok::Sym('^') {
                self.bump();
                Expr::Pow(Box::new(base), Box::new(self.exponent()?))
            } else {
                base
            }
        };
        self.depth -= 1;
        Ok(e)
    }

    fn exponent(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let e = match self.peek() {
            Tok::Sym('-') => {
                self.bump();
                Expr::Neg(Box::new(self.exponent()?))
            }
            Tok::Num(z) => {
                let base = Expr::Num(*z);
                self.bump();
                self.exponent_tail(base)?
            }
            Tok::Sym('(') => {
                let base = self.constant_group()?;
                self.exponent_tail(base)?
            }
            _ => return self.fail(EXPONENT),
        };
        self.depth -= 1;
        Ok(e)
    }

    fn exponent_tail(&mut self, base: Expr) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            Ok(Expr::Pow(Box::new(base), Box::new(self.exponent()?)))
        } else {
            Ok(base)
        }
    }

    fn constant_group(&mut self) -> Result<Expr, ParseError> {
        self.expect('(')?;
        let e = self.constant()?;
        self.expect(')')?;
        Ok(e)
    }

    fn constant(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        let e = self.expr()?;
        if e.mentions_t() {
            return Err(err(at, &["expression not involving t"], "t-dependent expression"));
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(z) => {
                self.bump();
                Ok(Expr::Num(z))
            }
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let at = self.offset();
                let f = match name.as_str() {
                    "t" => {
                        self.bump();
                        return Ok(Expr::T);
                    }
                    "exp" => Func::Exp,
                    "pow" => Func::Pow,
                    "ml3" => Func::Ml3,
                    _ => return Err(err(at, ATOM, format!("unknown name '{name}'"))),
                };
                self.bump();
                self.call(f)
            }
            _ => self.fail(ATOM),
        }
    }

    fn call(&mut self, f: Func) -> Result<Expr, ParseError> {
        self.expect('(')?;
        let args = match f {
            Func::Exp => vec![self.expr()?],
            Func::Pow => {
                let base = self.expr()?;
                self.expect(',')?;
                vec![base, self.constant()?]
            }
            Func::Ml3 => {
                let mut args = vec![self.constant()?];
                for _ in 0..3 {
                    self.expect(',')?;
                    args.push(self.constant()?);
                }
                if *self.peek() == Tok::Sym(',') {
                    self.bump();
                    args.push(self.constant()?);
                }
                args
            }
        };
        if *self.peek() != Tok::Sym(')') {
            let more = matches!(f, Func::Ml3) && args.len() == 4;
            return self.fail(if more { &["','", "')'"] } else { &["')'"] });
        }
        self.bump();
        Ok(Expr::Call(f, args))
    }
}

/// Parses `text`; never panics.
pub fn parse(text: &str) -> Result<Expr, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, depth: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(x: f64) -> Box<Expr> {
        Box::new(Expr::Num(Complex64::new(x, 0.0)))
    }

    #[test]
    fn precedence() {
        let e = parse("1 + 2*t^3").unwrap();
        let want = Expr::Bin(BinOp::Add, re(1.0), Box::new(Expr::Bin(BinOp::Mul, re(2.0), Box::new(Expr::Pow(Box::new(Expr::T), re(3.0))))));
        assert_eq!(e, want);
        assert_eq!(parse("-t^2").unwrap(), Expr::Neg(Box::new(Expr::Pow(Box::new(Expr::T), re(2.0)))));
        assert_eq!(parse("t^2^3").unwrap(), Expr::Pow(Box::new(Expr::T), Box::new(Expr::Pow(re(2.0), re(3.0)))));
        assert_eq!(parse("t-1-2").unwrap(), parse("(t-1)-2").unwrap());
    }

    #[test]
    fn literals() {
        assert_eq!(parse("2i").unwrap(), Expr::Num(Complex64::new(0.0, 2.0)));
        assert_eq!(parse("i").unwrap(), Expr::Num(Complex64::new(0.0, 1.0)));
        assert_eq!(parse(".5e1").unwrap(), Expr::Num(Complex64::new(5.0, 0.0)));
        assert_eq!(parse("t^−0.5").unwrap(), Expr::Pow(Box::new(Expr::T), Box::new(Expr::Neg(re(0.5)))));
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse("t^^2").unwrap_err();
        assert_eq!(e.offset, 2);
        assert!(e.expected.contains(&"number".to_string()));
        assert_eq!(parse("").unwrap_err().offset, 0);
        assert_eq!(parse("(t+1").unwrap_err().offset, 4);
        assert_eq!(parse("t $ 2").unwrap_err().offset, 2);
        assert_eq!(parse("sin(t)").unwrap_err().offset, 0);
        assert_eq!(parse("t^(t)").unwrap_err().offset, 3);
        assert_eq!(parse("pow(t, t)").unwrap_err().offset, 7);
        assert_eq!(parse("ml3(1, 1, 1)").unwrap_err().offset, 11);
        assert_eq!(parse("1e999").unwrap_err().offset, 0);
        assert_eq!(parse("t 2").unwrap_err().offset, 2);
    }

    #[test]
    fn deep_nesting_is_an_error() {
        let s = format!("{}t{}", "(".repeat(5000), ")".repeat(5000));
        assert!(parse(&s).is_err());
        let s = format!("{}t", "-".repeat(5000));
        assert!(parse(&s).is_err());
    }
}
