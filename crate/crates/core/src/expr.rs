//! Evaluator for closed-form constants written as radical expressions, e.g.
//! `sqrt(8)*(1+sqrt(2))^(7/2)/pi` or `2*sqrt(2)/gamma(1/4)`.

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
enum Node {
    Int(String),
    Pi,
    Neg(Box<Node>),
    Bin(char, Box<Node>, Box<Node>),
    Call(String, Box<Node>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&mut self) -> Option<u8> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{what} at offset {} in {:?}",
            self.pos,
            String::from_utf8_lossy(self.src)
        )))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(&format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            lhs = Node::Bin(c as char, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Node::Bin(c as char, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exp = self.unary()?;
            return Ok(Node::Bin('^', Box::new(base), Box::new(exp)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                Ok(Node::Int(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                match name.as_str() {
                    "pi" => Ok(Node::Pi),
                    "sqrt" | "gamma" => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(Node::Call(name, Box::new(arg)))
                    }
                    _ => self.fail(&format!("unknown identifier {name:?}")),
                }
            }
            _ => self.fail("unexpected token"),
        }
    }
}

fn eval_node<T: Real>(n: &Node) -> Result<T> {
    Ok(match n {
        Node::Int(s) => {
            let v: num_bigint::BigInt = s.parse().map_err(|_| Error::Parse(format!("bad integer {s}")))?;
            T::from_bigint(&v)
        }
        Node::Pi => T::pi(),
        Node::Neg(x) => -eval_node::<T>(x)?,
        Node::Call(f, x) => {
            let v = eval_node::<T>(x)?;
            match f.as_str() {
                "sqrt" => {
                    if v < T::zero() {
                        return Err(Error::Domain("square root of a negative number".into()));
                    }
                    v.sqrt()
                }
                _ => v.gamma(),
            }
        }
        Node::Bin(op, a, b) => {
            let x = eval_node::<T>(a)?;
            let y = eval_node::<T>(b)?;
            match op {
                '+' => x + y,
                '-' => x - y,
                '*' => x * y,
                '/' => {
                    if y.is_zero() {
                        return Err(Error::Domain("division by zero".into()));
                    }
                    x / y
                }
                _ => {
                    if let Node::Int(s) = b.as_ref() {
                        if let Ok(k) = s.parse::<i32>() {
                            return Ok(x.powi(k));
                        }
                    }
                    if x <= T::zero() {
                        return Err(Error::Domain("non-integer power of a non-positive base".into()));
                    }
                    x.powf(&y)
                }
            }
        }
    })
}

/// Evaluates a radical expression at the precision of `T`.
pub fn eval_expr<T: Real>(src: &str) -> Result<T> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let node = p.expr()?;
    if p.peek().is_some() {
        return p.fail("trailing input");
    }
    eval_node(&node)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Mp;

    #[test]
    fn evaluates_table_style_constants() {
        let v: f64 = eval_expr("3*sqrt(3)*(2+sqrt(3))/pi").unwrap();
        assert!((v - 3.0 * 3f64.sqrt() * (2.0 + 3f64.sqrt()) / std::f64::consts::PI).abs() < 1e-13);
        let w: f64 = eval_expr("sqrt(8)*(1+sqrt(2))^(7/2)/pi").unwrap();
        assert!((w - 8f64.sqrt() * (1.0 + 2f64.sqrt()).powf(3.5) / std::f64::consts::PI).abs() < 1e-12);
        let g: f64 = eval_expr("2*sqrt(2)/gamma(1/4)").unwrap();
        assert!((g - 2.0 * 2f64.sqrt() / 3.625_609_908_221_908).abs() < 1e-12);
        let n: f64 = eval_expr("-2^2").unwrap();
        assert_eq!(n, -4.0);
    }

    #[test]
    fn multiprecision_evaluation() {
        let v: Mp = eval_expr("sqrt(2)*sqrt(2)-2").unwrap();
        assert!(v.abs() < Mp::exp2_neg(180));
    }

    #[test]
    fn rejects_garbage() {
        assert!(eval_expr::<f64>("sqrt(2").is_err());
        assert!(eval_expr::<f64>("foo(2)").is_err());
        assert!(eval_expr::<f64>("2 3").is_err());
    }
}
