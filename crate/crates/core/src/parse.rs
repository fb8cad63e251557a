//! Expression grammar for scalars, forms, multivectors and tensors on a
//! chart.
//!
//! ```text
//! expr   := ['-'] tensor (('+' | '-') tensor)*
//! tensor := wedge ['&' wedge]
//! wedge  := prod ('^' prod)*
//! prod   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ['**' int]
//! atom   := int | coord | f'c1'c2(args) | d(expr) | dX[i,..] | @/coord | (expr)
//! ```
//!
//! `*` binds tighter than `^`, `^` tighter than `&`.

use num_bigint::BigInt;

use crate::chart::Chart;
use crate::error::{Error, Result};
use crate::exterior::{Form, MultiVector, MvForm};
use crate::scalar::{FuncSym, Scalar, Var, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(Scalar),
    Form(Form),
    Vector(MultiVector),
    Tensor(MvForm),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Func(String, Vec<String>),
    D,
    DX,
    Partial,
    Pow,
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < b.len() && (b[i] as char).is_ascii_digit() {
                i += 1;
            }
            let v: BigInt = s[start..i].parse().expect("digits");
            out.push((Tok::Int(v), start));
            continue;
        }
        if c.is_ascii_alphabetic() {
            while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            let name = s[start..i].to_string();
            let mut partials = Vec::new();
            while i < b.len() && b[i] == b'\'' {
                i += 1;
                let ps = i;
                while i < b.len() && ((b[i] as char).is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                if ps == i {
                    return Err(Error::Parse {
                        pos: ps,
                        msg: "expected a coordinate after `'`".into(),
                    });
                }
                partials.push(s[ps..i].to_string());
            }
            let next = s[i..].trim_start().chars().next();
            let tok = if !partials.is_empty() {
                Tok::Func(name, partials)
            } else if name == "d" && next == Some('(') {
                Tok::D
            } else if name == "dX" && next == Some('[') {
                Tok::DX
            } else if next == Some('(') {
                Tok::Func(name, partials)
            } else {
                Tok::Ident(name)
            };
            out.push((tok, start));
            continue;
        }
        if c == '@' {
            if b.get(i + 1) == Some(&b'/') {
                out.push((Tok::Partial, start));
                i += 2;
                continue;
            }
            return Err(Error::Parse {
                pos: i,
                msg: "expected `@/`".into(),
            });
        }
        if c == '*' && b.get(i + 1) == Some(&b'*') {
            out.push((Tok::Pow, start));
            i += 2;
            continue;
        }
        if "+-*/^&()[],".contains(c) {
            out.push((Tok::Sym(c), start));
            i += 1;
            continue;
        }
        return Err(Error::Parse {
            pos: i,
            msg: format!("unexpected character `{c}`"),
        });
    }
    Ok(out)
}

struct Parser<'a> {
    chart: &'a Chart,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

fn perr<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse {
        pos,
        msg: msg.into(),
    })
}

impl Value {
    fn normalize(self) -> Value {
        match self {
            Value::Form(f) if f.deg() == 0 => Value::Scalar(f.coeff(0)),
            Value::Vector(u) if u.deg() == 0 => Value::Scalar(u.coeff(0)),
            v => v,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Form(_) => "form",
            Value::Vector(_) => "multivector",
            Value::Tensor(_) => "multivector-valued form",
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Value::Scalar(s) => s.is_zero(),
            Value::Form(f) => f.is_zero(),
            Value::Vector(u) => u.is_zero(),
            Value::Tensor(w) => w.is_zero(),
        }
    }

    fn scale(self, c: &Scalar) -> Value {
        match self {
            Value::Scalar(s) => Value::Scalar(&s * c),
            Value::Form(f) => Value::Form(f.scale(c)),
            Value::Vector(u) => Value::Vector(u.scale(c)),
            Value::Tensor(w) => Value::Tensor(w.scale(c)),
        }
    }
}

fn add(a: Value, b: Value, pos: usize) -> Result<Value> {
    let (a, b) = (a.normalize(), b.normalize());
    if a.is_zero() {
        return Ok(b);
    }
    if b.is_zero() {
        return Ok(a);
    }
    let r = match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
        (Value::Form(x), Value::Form(y)) => Value::Form(x.try_add(&y).or_else(|e| perr(pos, e.to_string()))?),
        (Value::Vector(x), Value::Vector(y)) => {
            Value::Vector(x.try_add(&y).or_else(|e| perr(pos, e.to_string()))?)
        }
        (Value::Tensor(x), Value::Tensor(y)) => {
            Value::Tensor(x.try_add(&y).or_else(|e| perr(pos, e.to_string()))?)
        }
        (x, y) => return perr(pos, format!("cannot add a {} and a {}", x.kind(), y.kind())),
    };
    Ok(r)
}

fn mul(a: Value, b: Value, pos: usize) -> Result<Value> {
    match (a.normalize(), b.normalize()) {
        (Value::Scalar(s), v) | (v, Value::Scalar(s)) => Ok(v.scale(&s)),
        (x, y) => perr(
            pos,
            format!("`*` needs a scalar factor, got {} and {}; use `^`", x.kind(), y.kind()),
        ),
    }
}

fn wedge(a: Value, b: Value, pos: usize) -> Result<Value> {
    match (a.normalize(), b.normalize()) {
        (Value::Scalar(s), v) | (v, Value::Scalar(s)) => Ok(v.scale(&s)),
        (Value::Form(x), Value::Form(y)) => Ok(Value::Form(x.wedge(&y))),
        (Value::Vector(x), Value::Vector(y)) => Ok(Value::Vector(x.wedge(&y))),
        (Value::Tensor(w), Value::Vector(u)) => Ok(Value::Tensor(w.wedge_mv(&u))),
        (Value::Vector(u), Value::Tensor(w)) => {
            let lifted = Form::scalar(Scalar::one()).tensor(&u);
            Ok(Value::Tensor(lifted.wedge(&w)))
        }
        (Value::Form(f), Value::Tensor(w)) => {
            let lifted = f.tensor(&MultiVector::scalar(Scalar::one()));
            Ok(Value::Tensor(lifted.wedge(&w)))
        }
        (Value::Tensor(w), Value::Form(f)) => {
            let lifted = f.tensor(&MultiVector::scalar(Scalar::one()));
            Ok(Value::Tensor(w.wedge(&lifted)))
        }
        (Value::Tensor(x), Value::Tensor(y)) => Ok(Value::Tensor(x.wedge(&y))),
        (x, y) => perr(pos, format!("cannot wedge a {} and a {}", x.kind(), y.kind())),
    }
}

fn tensor(a: Value, b: Value, pos: usize) -> Result<Value> {
    let f = match a.normalize() {
        Value::Scalar(s) => Form::scalar(s),
        Value::Form(f) => f,
        v => return perr(pos, format!("left of `&` must be a form, got {}", v.kind())),
    };
    let u = match b.normalize() {
        Value::Scalar(s) => MultiVector::scalar(s),
        Value::Vector(u) => u,
        v => return perr(pos, format!("right of `&` must be a multivector, got {}", v.kind())),
    };
    Ok(Value::Tensor(f.tensor(&u)))
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.1).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            perr(self.here(), format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Value> {
        let neg = self.eat('-');
        let p = self.here();
        let mut v = self.tensor()?;
        if neg {
            v = v.scale(&Scalar::from_i64(-1));
        }
        loop {
            let p2 = self.here();
            if self.eat('+') {
                let r = self.tensor()?;
                v = add(v, r, p2)?;
            } else if self.eat('-') {
                let r = self.tensor()?.scale(&Scalar::from_i64(-1));
                v = add(v, r, p2)?;
            } else {
                break;
            }
        }
        let _ = p;
        Ok(v)
    }

    fn tensor(&mut self) -> Result<Value> {
        let v = self.wedge()?;
        let p = self.here();
        if self.eat('&') {
            let r = self.wedge()?;
            return tensor(v, r, p);
        }
        Ok(v)
    }

    fn wedge(&mut self) -> Result<Value> {
        let mut v = self.prod()?;
        loop {
            let p = self.here();
            if self.eat('^') {
                let r = self.prod()?;
                v = wedge(v, r, p)?;
            } else {
                return Ok(v);
            }
        }
    }

    fn prod(&mut self) -> Result<Value> {
        let mut v = self.unary()?;
        loop {
            let p = self.here();
            if self.eat('*') {
                let r = self.unary()?;
                v = mul(v, r, p)?;
            } else if self.eat('/') {
                let r = self.unary()?;
                let Value::Scalar(s) = r.normalize() else {
                    return perr(p, "can only divide by a scalar");
                };
                let Some(inv) = s.recip() else {
                    return perr(p, "division by zero");
                };
                v = v.scale(&inv);
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        if self.eat('-') {
            return Ok(self.unary()?.scale(&Scalar::from_i64(-1)));
        }
        let v = self.atom()?;
        if self.peek() == Some(&Tok::Pow) {
            let p = self.here();
            self.pos += 1;
            let Some(Tok::Int(e)) = self.peek().cloned() else {
                return perr(self.here(), "expected an integer exponent");
            };
            self.pos += 1;
            let e: u32 = e
                .try_into()
                .or_else(|_| perr(p, "exponent too large"))?;
            let Value::Scalar(s) = v.normalize() else {
                return perr(p, "only scalars can be raised to a power");
            };
            return Ok(Value::Scalar(s.pow(e)));
        }
        Ok(v)
    }

    fn coord_name(&mut self) -> Result<String> {
        let p = self.here();
        match self.peek().cloned() {
            Some(Tok::Ident(n)) => {
                if self.chart.index_of(&n).is_none() {
                    return perr(p, format!("unknown coordinate `{n}`"));
                }
                self.pos += 1;
                Ok(n)
            }
            _ => perr(p, "expected a coordinate"),
        }
    }

    fn atom(&mut self) -> Result<Value> {
        let p = self.here();
        let Some(tok) = self.peek().cloned() else {
            return perr(p, "unexpected end of input");
        };
        self.pos += 1;
        match tok {
            Tok::Int(v) => Ok(Value::Scalar(Scalar::from_q(Q::from_integer(v)))),
            Tok::Ident(n) => {
                if self.chart.index_of(&n).is_none() {
                    return perr(p, format!("unknown coordinate `{n}`"));
                }
                Ok(Value::Scalar(Scalar::coord(&n)))
            }
            Tok::Func(name, partials) => {
                self.expect('(')?;
                let mut args = Vec::new();
                if !self.eat(')') {
                    loop {
                        args.push(self.coord_name()?);
                        if self.eat(')') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                for q in &partials {
                    if !args.contains(q) {
                        return perr(p, format!("`{name}` does not depend on `{q}`"));
                    }
                }
                let mut partials: Vec<std::sync::Arc<str>> =
                    partials.iter().map(|s| s.as_str().into()).collect();
                partials.sort();
                let sym = FuncSym {
                    name: name.as_str().into(),
                    args: args.iter().map(|s| s.as_str().into()).collect(),
                    partials,
                };
                Ok(Value::Scalar(Scalar::var(Var::Func(sym.into()))))
            }
            Tok::D => {
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                let f = match inner.normalize() {
                    Value::Scalar(s) => Form::scalar(s),
                    Value::Form(f) => f,
                    v => return perr(p, format!("cannot differentiate a {}", v.kind())),
                };
                Ok(Value::Form(self.chart.d(&f)))
            }
            Tok::DX => {
                self.expect('[')?;
                let mut mus = Vec::new();
                if !self.eat(']') {
                    loop {
                        let q = self.here();
                        let Some(Tok::Int(v)) = self.peek().cloned() else {
                            return perr(q, "expected a base index");
                        };
                        self.pos += 1;
                        let mu: usize = v.try_into().or_else(|_| perr(q, "index too large"))?;
                        mus.push(mu);
                        if self.eat(']') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                let f = self.chart.dxv(&mus).or_else(|e| perr(p, e.to_string()))?;
                Ok(Value::Form(f))
            }
            Tok::Partial => {
                let n = self.coord_name()?;
                Ok(Value::Vector(self.chart.partial(&n)?))
            }
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Sym(c) => perr(p, format!("unexpected `{c}`")),
            Tok::Pow => perr(p, "unexpected `**`"),
        }
    }
}

pub fn parse(chart: &Chart, s: &str) -> Result<Value> {
    let toks = lex(s)?;
    let mut p = Parser {
        chart,
        toks,
        pos: 0,
        end: s.len(),
    };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return perr(p.here(), "trailing input");
    }
    Ok(v.normalize())
}

pub fn parse_scalar(chart: &Chart, s: &str) -> Result<Scalar> {
    match parse(chart, s)? {
        Value::Scalar(x) => Ok(x),
        v => perr(0, format!("expected a scalar, got a {}", v.kind())),
    }
}

pub fn parse_form(chart: &Chart, s: &str) -> Result<Form> {
    match parse(chart, s)? {
        Value::Scalar(x) => Ok(Form::scalar(x)),
        Value::Form(f) => Ok(f),
        v => perr(0, format!("expected a form, got a {}", v.kind())),
    }
}

pub fn parse_multivector(chart: &Chart, s: &str) -> Result<MultiVector> {
    match parse(chart, s)? {
        Value::Scalar(x) => Ok(MultiVector::scalar(x)),
        Value::Vector(u) => Ok(u),
        v => perr(0, format!("expected a multivector, got a {}", v.kind())),
    }
}

pub fn parse_mvform(chart: &Chart, s: &str) -> Result<MvForm> {
    match parse(chart, s)? {
        Value::Tensor(w) => Ok(w),
        Value::Scalar(x) if x.is_zero() => Ok(MvForm::zero(0, 0)),
        v => perr(0, format!("expected a multivector-valued form, got a {}", v.kind())),
    }
}
