//! Expression parser: one Pratt parser covering polynomials, polyvector
//! fields and polydifferential operators.
//!
//! Atoms: rational literals `3`, `3/2`; coordinates `x1..xn`; derivative
//! basis fields `d1..dn` (grade-1 polyvectors); derivative operator slots
//! `d[i,j,...]` (1-ary operators, `d[]` the identity slot); names of
//! earlier definitions. Operators by increasing precedence: `+ -`, `*`,
//! `|` (slot concatenation of operators), `^` (wedge on fields, integer
//! power on polynomials). All errors carry the offending position.

use std::collections::BTreeMap;
use std::fmt;

use starlift_core::hochschild::PolyDiffOp;
use starlift_core::multivector::PolyVectorField;
use starlift_core::poly::{MultiIndex, Polynomial};
use starlift_core::rat::{self, Rat};

use crate::lexer::{Pos, Tok};
use crate::session::Defined;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.message, self.pos)
    }
}

pub fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// A parsed mathematical value.
#[derive(Debug, Clone)]
pub enum Value {
    Poly(Polynomial),
    Mvf(PolyVectorField),
    Op(PolyDiffOp),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Poly(_) => "polynomial",
            Value::Mvf(_) => "polyvector field",
            Value::Op(_) => "operator",
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Poly(p) => p.is_zero(),
            Value::Mvf(v) => v.is_zero(),
            Value::Op(o) => o.is_zero(),
        }
    }

    /// Coerces to a polynomial; zero values of any kind qualify.
    pub fn into_poly(self, dim: usize, pos: Pos) -> Result<Polynomial, ParseError> {
        match self {
            Value::Poly(p) => Ok(p),
            v if v.is_zero() => Ok(Polynomial::zero(dim)),
            v => err(pos, format!("expected a polynomial, got a {}", v.kind())),
        }
    }

    /// Coerces to a polyvector field of the given grade when stated.
    pub fn into_mvf(
        self,
        dim: usize,
        grade: Option<usize>,
        pos: Pos,
    ) -> Result<PolyVectorField, ParseError> {
        let v = match self {
            Value::Mvf(v) => v,
            Value::Poly(p) if p.is_zero() && grade.is_some() => {
                PolyVectorField::zero(dim, grade.unwrap())
            }
            Value::Poly(p) => PolyVectorField::scalar(p),
            v => return err(pos, format!("expected a polyvector field, got an {}", v.kind())),
        };
        if let Some(g) = grade {
            if v.grade() != g {
                return err(
                    pos,
                    format!("expected a grade-{g} field, got grade {}", v.grade()),
                );
            }
        }
        Ok(v)
    }

    /// Coerces to an operator of the given arity when stated.
    pub fn into_op(self, dim: usize, arity: Option<usize>, pos: Pos) -> Result<PolyDiffOp, ParseError> {
        let o = match self {
            Value::Op(o) => o,
            Value::Poly(p) if p.is_zero() && arity.is_some() => {
                PolyDiffOp::zero(dim, arity.unwrap())
            }
            Value::Poly(p) => PolyDiffOp::from_polynomial(p),
            v => return err(pos, format!("expected an operator, got a {}", v.kind())),
        };
        if let Some(a) = arity {
            if o.arity() != a {
                return err(
                    pos,
                    format!("expected a {a}-ary operator, got arity {}", o.arity()),
                );
            }
        }
        Ok(o)
    }
}

fn add_values(a: Value, b: Value, dim: usize, pos: Pos) -> Result<Value, ParseError> {
    Ok(match (a, b) {
        (Value::Poly(x), Value::Poly(y)) => Value::Poly(x.add(&y)),
        (Value::Mvf(x), Value::Mvf(y)) if x.grade() == y.grade() => Value::Mvf(x.add(&y)),
        (Value::Op(x), Value::Op(y)) if x.arity() == y.arity() => Value::Op(x.add(&y)),
        // zero absorbs into the other side
        (z, other) if z.is_zero() => other,
        (other, z) if z.is_zero() => other,
        (a, b) => {
            let _ = dim;
            return err(
                pos,
                format!("cannot add a {} and a {}", a.kind(), b.kind()),
            );
        }
    })
}

fn mul_values(a: Value, b: Value, pos: Pos) -> Result<Value, ParseError> {
    Ok(match (a, b) {
        (Value::Poly(x), Value::Poly(y)) => Value::Poly(x.mul(&y)),
        (Value::Poly(x), Value::Mvf(v)) | (Value::Mvf(v), Value::Poly(x)) => {
            let mut out = PolyVectorField::zero(v.dim(), v.grade());
            for (axes, c) in v.components() {
                out.add_component(axes.clone(), c.mul(&x));
            }
            Value::Mvf(out)
        }
        (Value::Poly(x), Value::Op(o)) | (Value::Op(o), Value::Poly(x)) => {
            let mut out = PolyDiffOp::zero(o.dim(), o.arity());
            for (key, c) in o.terms() {
                out.add_term(key.clone(), c.mul(&x));
            }
            Value::Op(out)
        }
        (Value::Mvf(_), Value::Mvf(_)) => {
            return err(pos, "use '^' (wedge) to multiply polyvector fields")
        }
        (Value::Op(_), Value::Op(_)) => {
            return err(pos, "use '|' to concatenate operator slots")
        }
        (a, b) => {
            return err(
                pos,
                format!("cannot multiply a {} and a {}", a.kind(), b.kind()),
            )
        }
    })
}

pub struct ExprParser<'a> {
    toks: &'a [(Tok, Pos)],
    idx: usize,
    dim: usize,
    env: &'a BTreeMap<String, Defined>,
}

impl<'a> ExprParser<'a> {
    pub fn new(toks: &'a [(Tok, Pos)], dim: usize, env: &'a BTreeMap<String, Defined>) -> Self {
        ExprParser { toks, idx: 0, dim, env }
    }

    pub fn pos(&self) -> Pos {
        self.toks
            .get(self.idx)
            .or_else(|| self.toks.last())
            .map(|(_, p)| *p)
            .unwrap_or(Pos { line: 1, col: 1 })
    }

    pub fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    pub fn bump(&mut self) -> Option<(Tok, Pos)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn expect(&mut self, tok: &Tok) -> Result<Pos, ParseError> {
        match self.bump() {
            Some((t, p)) if &t == tok => Ok(p),
            Some((t, p)) => err(p, format!("expected {tok}, found {t}")),
            None => err(self.pos(), format!("expected {tok}, found end of input")),
        }
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.toks.len()
    }

    /// Parses a rational literal `p` or `p/q`.
    fn rational(&mut self, first: u64) -> Result<Rat, ParseError> {
        if self.peek() == Some(&Tok::Slash) {
            self.bump();
            match self.bump() {
                Some((Tok::Int(q), p)) if q != 0 => {
                    let _ = p;
                    Ok(rat::rat(first as i64, q as i64))
                }
                Some((Tok::Int(_), p)) => err(p, "zero denominator"),
                Some((t, p)) => err(p, format!("expected denominator, found {t}")),
                None => err(self.pos(), "expected denominator"),
            }
        } else {
            Ok(rat::rint(first as i64))
        }
    }

    fn atom(&mut self) -> Result<Value, ParseError> {
        let (tok, pos) = match self.bump() {
            Some(t) => t,
            None => return err(self.pos(), "expected an expression"),
        };
        match tok {
            Tok::Int(n) => Ok(Value::Poly(Polynomial::constant(self.dim, self.rational(n)?))),
            Tok::Minus => {
                let v = self.expr(6)?;
                mul_values(
                    Value::Poly(Polynomial::constant(self.dim, rat::rint(-1))),
                    v,
                    pos,
                )
            }
            Tok::LParen => {
                let v = self.expr(0)?;
                self.expect(&Tok::RParen)?;
                Ok(v)
            }
            Tok::Ident(name) => self.ident_atom(&name, pos),
            other => err(pos, format!("unexpected token {other}")),
        }
    }

    fn ident_atom(&mut self, name: &str, pos: Pos) -> Result<Value, ParseError> {
        if let Some(rest) = name.strip_prefix('x') {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                let k: usize = rest.parse().unwrap();
                if k == 0 || k > self.dim {
                    return err(pos, format!("coordinate x{k} out of range 1..{}", self.dim));
                }
                return Ok(Value::Poly(Polynomial::var(self.dim, k - 1)));
            }
        }
        if name == "d" && self.peek() == Some(&Tok::LBracket) {
            self.bump();
            let mut mi = MultiIndex::zero(self.dim);
            loop {
                match self.peek() {
                    Some(Tok::RBracket) => {
                        self.bump();
                        break;
                    }
                    Some(Tok::Int(_)) => {
                        let Some((Tok::Int(axis), p)) = self.bump() else {
                            unreachable!()
                        };
                        let axis = axis as usize;
                        if axis == 0 || axis > self.dim {
                            return err(
                                p,
                                format!("derivative axis {axis} out of range 1..{}", self.dim),
                            );
                        }
                        mi.0[axis - 1] += 1;
                        if self.peek() == Some(&Tok::Comma) {
                            self.bump();
                        }
                    }
                    Some(t) => return err(self.pos(), format!("expected axis index, found {t}")),
                    None => return err(self.pos(), "unterminated 'd[' slot"),
                }
            }
            let mut op = PolyDiffOp::zero(self.dim, 1);
            op.add_term(vec![mi], Polynomial::one(self.dim));
            return Ok(Value::Op(op));
        }
        if let Some(rest) = name.strip_prefix('d') {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                let k: usize = rest.parse().unwrap();
                if k == 0 || k > self.dim {
                    return err(pos, format!("basis field d{k} out of range 1..{}", self.dim));
                }
                return Ok(Value::Mvf(PolyVectorField::from_component(
                    self.dim,
                    vec![(k - 1) as u32],
                    Polynomial::one(self.dim),
                )));
            }
        }
        if let Some(rest) = name.strip_prefix('e') {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                return err(
                    pos,
                    "Lie basis elements are only valid inside lie/action/ce declarations",
                );
            }
        }
        match self.env.get(name) {
            Some(Defined::Poly(p)) => Ok(Value::Poly(p.clone())),
            Some(Defined::Mvf(v)) => Ok(Value::Mvf(v.clone())),
            Some(Defined::Op(o)) => Ok(Value::Op(o.clone())),
            Some(other) => err(
                pos,
                format!("'{name}' is a {}, not usable in an expression", other.kind()),
            ),
            None => err(pos, format!("unknown name '{name}'")),
        }
    }

    /// Pratt loop. Binding powers: `+ -` = 1, `*` = 3, `|` = 5, `^` = 7.
    pub fn expr(&mut self, min_bp: u8) -> Result<Value, ParseError> {
        let mut lhs = self.atom()?;
        loop {
            let (op, bp, pos) = match self.toks.get(self.idx) {
                Some((Tok::Plus, p)) => (Tok::Plus, 1, *p),
                Some((Tok::Minus, p)) => (Tok::Minus, 1, *p),
                Some((Tok::Star, p)) => (Tok::Star, 3, *p),
                Some((Tok::Pipe, p)) => (Tok::Pipe, 5, *p),
                Some((Tok::Caret, p)) => (Tok::Caret, 7, *p),
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            self.bump();
            match op {
                Tok::Caret => {
                    // wedge on fields; integer power on polynomials
                    match lhs {
                        Value::Poly(p) => {
                            let (exp, epos) = match self.bump() {
                                Some((Tok::Int(n), ep)) => (n, ep),
                                Some((t, ep)) => {
                                    return err(ep, format!("expected integer exponent, found {t}"))
                                }
                                None => return err(self.pos(), "expected integer exponent"),
                            };
                            let _ = epos;
                            let mut acc = Polynomial::one(self.dim);
                            for _ in 0..exp {
                                acc = acc.mul(&p);
                            }
                            lhs = Value::Poly(acc);
                        }
                        Value::Mvf(a) => {
                            let rhs = self.expr(8)?;
                            let b = rhs.into_mvf(self.dim, None, pos)?;
                            lhs = Value::Mvf(starlift_core::multivector::wedge(&a, &b));
                        }
                        Value::Op(_) => {
                            return err(pos, "'^' is not defined on operators; use '|' for slots")
                        }
                    }
                }
                Tok::Pipe => {
                    let rhs = self.expr(6)?;
                    let a = lhs.into_op(self.dim, None, pos)?;
                    let b = rhs.into_op(self.dim, None, pos)?;
                    lhs = Value::Op(
                        starlift_core::hochschild::cup(&a, &b)
                            .map_err(|e| ParseError {
                                pos,
                                message: e.to_string(),
                            })?,
                    );
                }
                Tok::Star => {
                    let rhs = self.expr(4)?;
                    lhs = mul_values(lhs, rhs, pos)?;
                }
                Tok::Plus => {
                    let rhs = self.expr(2)?;
                    lhs = add_values(lhs, rhs, self.dim, pos)?;
                }
                Tok::Minus => {
                    let rhs = self.expr(2)?;
                    let neg = mul_values(
                        Value::Poly(Polynomial::constant(self.dim, rat::rint(-1))),
                        rhs,
                        pos,
                    )?;
                    lhs = add_values(lhs, neg, self.dim, pos)?;
                }
                _ => unreachable!(),
            }
        }
        Ok(lhs)
    }
}

/// Parses a standalone expression string (command arguments).
pub fn parse_inline(
    text: &str,
    dim: usize,
    env: &BTreeMap<String, Defined>,
) -> Result<Value, ParseError> {
    let toks = crate::lexer::tokenize(text).map_err(|e| ParseError {
        pos: e.pos,
        message: e.message,
    })?;
    let toks: Vec<(Tok, Pos)> = toks.into_iter().filter(|(t, _)| t != &Tok::Newline).collect();
    let mut p = ExprParser::new(&toks, dim, env);
    let v = p.expr(0)?;
    if !p.at_end() {
        return err(p.pos(), "trailing input after expression");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn env() -> BTreeMap<String, Defined> {
        BTreeMap::new()
    }

    #[test]
    fn polynomial_expression() {
        let e = env();
        let v = parse_inline("3/2*x1^2*x2 - x2", 2, &e).unwrap();
        let Value::Poly(p) = v else { panic!("expected polynomial") };
        assert_eq!(p.to_string(), "-x2 + 3/2*x1^2*x2");
    }

    #[test]
    fn wedge_and_grade() {
        let e = env();
        let v = parse_inline("x2*(d1^d2) + (d2^d3)", 3, &e).unwrap();
        let Value::Mvf(f) = v else { panic!("expected field") };
        assert_eq!(f.grade(), 2);
        assert_eq!(f.to_string(), "(x2)*(d1^d2) + (d2^d3)");
    }

    #[test]
    fn operator_slots_apply() {
        // binary operator x1 * (d1 (x) d2): applied to (x1, x2) gives x1
        let e = env();
        let v = parse_inline("x1*(d[1]|d[2])", 2, &e).unwrap();
        let Value::Op(op) = v else { panic!("expected operator") };
        assert_eq!(op.arity(), 2);
        let out = op
            .apply(&[Polynomial::var(2, 0), Polynomial::var(2, 1)])
            .unwrap();
        assert_eq!(out, Polynomial::var(2, 0));
    }

    #[test]
    fn kind_errors_have_positions() {
        let e = env();
        let err = parse_inline("d1 + x1*(d[1]|d[2])", 2, &e).unwrap_err();
        assert!(err.message.contains("cannot add"));
        assert!(err.pos.col > 0);
        let err2 = parse_inline("x9", 2, &e).unwrap_err();
        assert!(err2.message.contains("out of range"));
    }
}
