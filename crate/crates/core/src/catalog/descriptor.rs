//! Textual descriptors for reference functions.
//!
//! ```text
//! abs_pow(p=4)                       coeff·|x|^p        (coeff defaults to 1)
//! two_norm_pow(p=4, dim=3)           coeff·‖x‖₂^p
//! p_norm_pow(p=4, dim=2)             coeff·‖x‖_p^p
//! pw_quad(a=1e-7, b=1)               a·x² (x ≥ 0), b·x² (x < 0)
//! quad(q=[[2,0],[0,1]], b=[1,0], c=3) or quad(dim=3) for ½‖x‖²
//! sum(0.25*abs_pow(p=4), 0.75*abs_pow(p=4/3))
//! affine(abs_pow(p=6), l=[[-2]], x0=[1], b=[0], c=0, scale=5)
//! ```
//!
//! Whitespace is ignored. Numbers accept an optional `/denominator`.

use nalgebra::{DMatrix, DVector};

use super::ReferenceFunction;
use crate::error::{Error, Result};

/// Parses a function descriptor into a validated [`ReferenceFunction`].
pub fn parse_descriptor(src: &str) -> Result<ReferenceFunction> {
    let mut parser = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let f = parser.function()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(f)
}

#[derive(Debug, Clone)]
enum Value {
    Number(f64),
    List(Vec<Value>),
    Function(ReferenceFunction),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.error("expected an identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn raw_number(&mut self) -> Result<f64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let exp_sign = (c == b'+' || c == b'-')
                && self.pos > start
                && matches!(self.src[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit()
                || c == b'.'
                || c == b'e'
                || c == b'E'
                || exp_sign
                || ((c == b'-' || c == b'+') && self.pos == start)
            {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        text.parse::<f64>().map_err(|_| {
            self.pos = start;
            self.error(format!("invalid number `{text}`"))
        })
    }

    fn number(&mut self) -> Result<f64> {
        let num = self.raw_number()?;
        if self.eat(b'/') {
            let den = self.raw_number()?;
            if den == 0.0 {
                return Err(self.error("division by zero"));
            }
            return Ok(num / den);
        }
        Ok(num)
    }

    fn value(&mut self) -> Result<Value> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut items = Vec::new();
                if !self.eat(b']') {
                    loop {
                        items.push(self.value()?);
                        if self.eat(b']') {
                            break;
                        }
                        self.expect(b',')?;
                    }
                }
                Ok(Value::List(items))
            }
            Some(c) if c.is_ascii_alphabetic() => Ok(Value::Function(self.function()?)),
            Some(_) => Ok(Value::Number(self.number()?)),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// `[w *] function`
    fn weighted(&mut self) -> Result<(f64, ReferenceFunction)> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() => Ok((1.0, self.function()?)),
            _ => {
                let w = self.number()?;
                self.expect(b'*')?;
                Ok((w, self.function()?))
            }
        }
    }

    fn function(&mut self) -> Result<ReferenceFunction> {
        let start = self.pos;
        let name = self.ident()?;
        self.expect(b'(')?;
        if name == "sum" {
            let mut terms = vec![self.weighted()?];
            while self.eat(b',') {
                terms.push(self.weighted()?);
            }
            self.expect(b')')?;
            return ReferenceFunction::scaled_sum(terms);
        }

        let mut positional = Vec::new();
        let mut named: Vec<(String, Value)> = Vec::new();
        if !self.eat(b')') {
            loop {
                let save = self.pos;
                let is_named = self.ident().is_ok() && self.peek() == Some(b'=');
                self.pos = save;
                if is_named {
                    let key = self.ident()?;
                    self.expect(b'=')?;
                    if named.iter().any(|(k, _)| *k == key) {
                        return Err(self.error(format!("duplicate parameter `{key}`")));
                    }
                    named.push((key, self.value()?));
                } else {
                    positional.push(self.value()?);
                }
                if self.eat(b')') {
                    break;
                }
                self.expect(b',')?;
            }
        }
        let mut args = Args {
            func: name.clone(),
            named,
            pos: start,
        };

        let f = match name.as_str() {
            "abs_pow" => {
                let p = args.number("p")?;
                let coeff = args.number_or("coeff", 1.0)?;
                args.finish(&positional)?;
                ReferenceFunction::power_abs(p, coeff)
            }
            "two_norm_pow" | "p_norm_pow" => {
                let p = args.number("p")?;
                let dim = args.dim()?;
                let coeff = args.number_or("coeff", 1.0)?;
                args.finish(&positional)?;
                if name == "two_norm_pow" {
                    ReferenceFunction::two_norm_power(p, dim, coeff)
                } else {
                    ReferenceFunction::p_norm_power(p, dim, coeff)
                }
            }
            "pw_quad" => {
                let a = args.number("a")?;
                let b = args.number("b")?;
                args.finish(&positional)?;
                ReferenceFunction::piecewise_quadratic(a, b)
            }
            "quad" => {
                let q = match args.take("q") {
                    Some(v) => matrix(v, args.pos)?,
                    None => {
                        let n = args.dim()?;
                        DMatrix::identity(n, n)
                    }
                };
                let n = q.nrows();
                let b = args.vector_or("b", n)?;
                let c = args.number_or("c", 0.0)?;
                args.finish(&positional)?;
                ReferenceFunction::quadratic(q, b, c)
            }
            "affine" => {
                let inner = match positional.pop() {
                    Some(Value::Function(f)) if positional.is_empty() => f,
                    _ => return Err(args.err("expects exactly one inner function")),
                };
                let n = inner.dim();
                let l = match args.take("l") {
                    Some(v) => matrix(v, args.pos)?,
                    None => DMatrix::identity(n, n),
                };
                let x0 = args.vector_or("x0", n)?;
                let b = args.vector_or("b", n)?;
                let c = args.number_or("c", 0.0)?;
                let scale = args.number_or("scale", 1.0)?;
                args.finish(&[])?;
                ReferenceFunction::affine_image(inner, l, x0, b, c, scale)
            }
            other => {
                self.pos = start;
                return Err(self.error(format!("unknown function `{other}`")));
            }
        }?;
        Ok(f)
    }
}

struct Args {
    func: String,
    named: Vec<(String, Value)>,
    pos: usize,
}

impl Args {
    fn err(&self, msg: impl std::fmt::Display) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: format!("{}: {msg}", self.func),
        }
    }

    fn take(&mut self, key: &str) -> Option<Value> {
        let i = self.named.iter().position(|(k, _)| k == key)?;
        Some(self.named.remove(i).1)
    }

    fn number(&mut self, key: &str) -> Result<f64> {
        match self.take(key) {
            Some(Value::Number(v)) => Ok(v),
            Some(_) => Err(self.err(format!("`{key}` must be a number"))),
            None => Err(self.err(format!("missing parameter `{key}`"))),
        }
    }

    fn number_or(&mut self, key: &str, default: f64) -> Result<f64> {
        if self.named.iter().any(|(k, _)| k == key) {
            self.number(key)
        } else {
            Ok(default)
        }
    }

    fn dim(&mut self) -> Result<usize> {
        let d = self.number("dim")?;
        if d < 1.0 || d.fract() != 0.0 || d > u32::MAX as f64 {
            return Err(self.err("`dim` must be a positive integer"));
        }
        Ok(d as usize)
    }

    fn vector_or(&mut self, key: &str, n: usize) -> Result<DVector<f64>> {
        match self.take(key) {
            None => Ok(DVector::zeros(n)),
            Some(v) => {
                vector(v).ok_or_else(|| self.err(format!("`{key}` must be a list of numbers")))
            }
        }
    }

    fn finish(&self, positional: &[Value]) -> Result<()> {
        if !positional.is_empty() {
            return Err(self.err("unexpected positional argument"));
        }
        if let Some((k, _)) = self.named.first() {
            return Err(self.err(format!("unknown parameter `{k}`")));
        }
        Ok(())
    }
}

fn vector(v: Value) -> Option<DVector<f64>> {
    match v {
        Value::List(items) => items
            .into_iter()
            .map(|it| match it {
                Value::Number(x) => Some(x),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(DVector::from_vec),
        Value::Number(x) => Some(DVector::from_element(1, x)),
        Value::Function(_) => None,
    }
}

fn matrix(v: Value, pos: usize) -> Result<DMatrix<f64>> {
    let bad = || Error::Parse {
        pos,
        msg: "matrix must be a non-empty list of equal-length rows".into(),
    };
    let Value::List(rows) = v else {
        return Err(bad());
    };
    let rows: Vec<DVector<f64>> = rows
        .into_iter()
        .map(vector)
        .collect::<Option<_>>()
        .ok_or_else(bad)?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(bad());
    }
    Ok(DMatrix::from_fn(n, rows[0].len(), |i, j| rows[i][j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Kind;

    #[test]
    fn parses_catalog_examples() {
        assert_eq!(
            parse_descriptor("abs_pow(p=4)").unwrap().kind(),
            &Kind::PowerAbs { p: 4.0, coeff: 1.0 }
        );
        assert_eq!(
            parse_descriptor(" two_norm_pow( p = 4 , dim = 3 ) ")
                .unwrap()
                .kind(),
            &Kind::TwoNormPower {
                p: 4.0,
                dim: 3,
                coeff: 1.0
            }
        );
        assert_eq!(
            parse_descriptor("p_norm_pow(p=4,dim=2)").unwrap().kind(),
            &Kind::PNormPower {
                p: 4.0,
                dim: 2,
                coeff: 1.0
            }
        );
        assert_eq!(
            parse_descriptor("pw_quad(a=1e-7,b=1)").unwrap().kind(),
            &Kind::PiecewiseQuadratic { a: 1e-7, b: 1.0 }
        );
        let s =
            parse_descriptor("sum(0.25*abs_pow(p=4), 0.75*abs_pow(p=1.3333333333333333))").unwrap();
        let Kind::Sum(terms) = s.kind() else {
            panic!("expected sum")
        };
        assert_eq!(terms.len(), 2);
        assert_eq!(
            terms[0].kind(),
            &Kind::PowerAbs {
                p: 4.0,
                coeff: 0.25
            }
        );
    }

    #[test]
    fn parses_matrices_and_affine() {
        let q = parse_descriptor("quad(q=[[1,0],[0,2]], b=[1,0], c=7)").unwrap();
        assert_eq!(q.gradient(&[1.0, 1.0]).unwrap(), vec![2.0, 2.0]);
        assert_eq!(parse_descriptor("quad(dim=3)").unwrap().dim(), 3);

        let a = parse_descriptor("affine(abs_pow(p=6), l=[[-2]], x0=[1], scale=5)").unwrap();
        assert!(matches!(a.kind(), Kind::Affine(_)));
        assert_eq!(
            parse_descriptor("abs_pow(p=4/3)").unwrap().kind(),
            &Kind::PowerAbs {
                p: 4.0 / 3.0,
                coeff: 1.0
            }
        );
    }

    #[test]
    fn rejects_malformed_input() {
        for bad in [
            "",
            "abs_pow",
            "abs_pow(p=)",
            "abs_pow(q=4)",
            "abs_pow(p=4",
            "abs_pow(p=4) x",
            "abs_pow(p=4, p=5)",
            "two_norm_pow(p=4)",
            "two_norm_pow(p=4, dim=1.5)",
            "cube(p=3)",
            "sum()",
            "sum(2 abs_pow(p=4))",
            "quad(q=[[1,0],[0]])",
            "affine(l=[[1]])",
        ] {
            assert!(
                matches!(parse_descriptor(bad), Err(Error::Parse { .. })),
                "{bad:?} should be a parse error"
            );
        }
    }

    #[test]
    fn invalid_parameters_are_construction_errors() {
        assert!(matches!(
            parse_descriptor("abs_pow(p=0.5)"),
            Err(Error::InvalidExponent { .. })
        ));
        assert!(matches!(
            parse_descriptor("quad(q=[[1,0],[0,-1]])"),
            Err(Error::NotPositiveDefinite)
        ));
    }
}
