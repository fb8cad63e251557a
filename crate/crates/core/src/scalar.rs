//! Exact rational functions in coordinates and formal function symbols.
//!
//! A [`Scalar`] is `num / den` with both sides sparse polynomials over the
//! rationals. Every constructor normalizes: the fraction is reduced by a
//! multivariate gcd and the leading coefficient of the denominator is 1, so
//! structural equality is mathematical equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Formal function symbol `name(args)` with a sorted multiset of partial
/// derivatives taken by coordinate name.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuncSym {
    pub name: Arc<str>,
    pub args: Vec<Arc<str>>,
    pub partials: Vec<Arc<str>>,
}

/// Indeterminate: a coordinate or an opaque function of coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Coord(Arc<str>),
    Func(Arc<FuncSym>),
}

impl Var {
    pub fn coord(name: &str) -> Var {
        Var::Coord(Arc::from(name))
    }

    pub fn func(name: &str, args: &[&str]) -> Var {
        Var::Func(Arc::new(FuncSym {
            name: Arc::from(name),
            args: args.iter().map(|a| Arc::from(*a)).collect(),
            partials: Vec::new(),
        }))
    }

    /// `None` when the derivative vanishes, `Some(None)` for 1.
    fn diff(&self, c: &str) -> Option<Option<Var>> {
        match self {
            Var::Coord(n) => (&**n == c).then_some(None),
            Var::Func(f) => {
                if !f.args.iter().any(|a| &**a == c) {
                    return None;
                }
                let mut g = (**f).clone();
                let pos = g.partials.partition_point(|p| &**p <= c);
                g.partials.insert(pos, Arc::from(c));
                Some(Some(Var::Func(Arc::new(g))))
            }
        }
    }

    pub fn depends_on(&self, c: &str) -> bool {
        match self {
            Var::Coord(n) => &**n == c,
            Var::Func(f) => f.args.iter().any(|a| &**a == c),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Coord(n) => write!(f, "{n}"),
            Var::Func(s) => {
                write!(f, "{}", s.name)?;
                for p in &s.partials {
                    write!(f, "'{p}")?;
                }
                write!(f, "(")?;
                for (i, a) in s.args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Power product, sorted by variable. Ordered graded-lex so the maximum is a
/// valid leading term for division.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < o.0.len() {
            match self.0[i].0.cmp(&o.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(o.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + o.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < o.0.len() && &o.0[j].0 == v {
                let f = o.0[j].1;
                if f > *e {
                    return None;
                }
                if e > &f {
                    out.push((v.clone(), e - f));
                }
                j += 1;
            } else if j < o.0.len() && o.0[j].0 < *v {
                return None;
            } else {
                out.push((v.clone(), *e));
            }
        }
        (j == o.0.len()).then_some(Monomial(out))
    }

    fn without(&self, v: &Var) -> Monomial {
        Monomial(self.0.iter().filter(|(w, _)| w != v).cloned().collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.total_degree().cmp(&o.total_degree()) {
            Ordering::Equal => {}
            c => return c,
        }
        for (a, b) in self.0.iter().zip(o.0.iter()) {
            match a.0.cmp(&b.0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    c => return c,
                },
            }
        }
        self.0.len().cmp(&o.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sparse multivariate polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(BTreeMap<Monomial, Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn one() -> Self {
        Poly::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(Monomial::one(), c);
        }
        Poly(m)
    }

    pub fn var(v: Var) -> Self {
        let mut m = BTreeMap::new();
        m.insert(Monomial(vec![(v, 1)]), Q::one());
        Poly(m)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_constant(&self) -> Option<Q> {
        match self.0.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                m.0.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn leading(&self) -> (&Monomial, &Q) {
        self.0.iter().next_back().expect("leading term of zero polynomial")
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (m, c) in &o.0 {
            r.add_term(m.clone(), -c.clone());
        }
        r
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly(self.0.iter().map(|(m, d)| (m.clone(), d * c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.0 {
            for (m2, c2) in &o.0 {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    fn mul_term(&self, m: &Monomial, c: &Q) -> Poly {
        Poly(self.0.iter().map(|(n, d)| (n.mul(m), d * c)).collect())
    }

    pub fn diff(&self, coord: &str) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.0 {
            for (k, (v, e)) in m.0.iter().enumerate() {
                let Some(dv) = v.diff(coord) else { continue };
                let mut rest: Vec<(Var, u32)> = m.0.clone();
                if *e == 1 {
                    rest.remove(k);
                } else {
                    rest[k].1 -= 1;
                }
                let mut mono = Monomial(rest);
                if let Some(w) = dv {
                    mono = mono.mul(&Monomial(vec![(w, 1)]));
                }
                r.add_term(mono, c * Q::from_integer(BigInt::from(*e)));
            }
        }
        r
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.0
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.0.keys().map(|m| m.degree_in(v)).max().unwrap_or(0)
    }

    /// Coefficients of the powers of `v`.
    fn coeffs_in(&self, v: &Var) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.0 {
            out.entry(m.degree_in(v))
                .or_default()
                .add_term(m.without(v), c.clone());
        }
        out
    }

    fn coeff_of_power(&self, v: &Var, k: u32) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.0 {
            if m.degree_in(v) == k {
                r.add_term(m.without(v), c.clone());
            }
        }
        r
    }

    fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading().1.clone();
        self.scale(&lc.recip())
    }

    /// Exact division; `None` if `o` does not divide `self`.
    pub fn div_exact(&self, o: &Poly) -> Option<Poly> {
        if o.is_zero() {
            return None;
        }
        if let Some(c) = o.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (lm, lc) = o.leading();
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut r = self.clone();
        let mut quot = Poly::zero();
        while !r.is_zero() {
            let (rm, rc) = r.leading();
            let m = rm.div(&lm)?;
            let c = rc / &lc;
            r = r.sub(&o.mul_term(&m, &c));
            quot.add_term(m, c);
        }
        Some(quot)
    }

    fn content_in(&self, v: &Var) -> Poly {
        let mut g = Poly::zero();
        for c in self.coeffs_in(v).values() {
            g = Poly::gcd(&g, c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn pseudo_rem(a: &Poly, b: &Poly, v: &Var) -> Poly {
        let db = b.degree_in(v);
        let lc = b.coeff_of_power(v, db);
        let mut r = a.clone();
        while !r.is_zero() && r.degree_in(v) >= db {
            let dr = r.degree_in(v);
            let lr = r.coeff_of_power(v, dr);
            let shift = if dr > db {
                Monomial(vec![(v.clone(), dr - db)])
            } else {
                Monomial::one()
            };
            r = lc.mul(&r).sub(&lr.mul_term(&shift, &Q::one()).mul(b));
        }
        r
    }

    /// Monic greatest common divisor.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.as_constant().is_some() || b.as_constant().is_some() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        let va = a.vars();
        let vb = b.vars();
        let Some(v) = va.union(&vb).next().cloned() else {
            return Poly::one();
        };
        if !va.contains(&v) {
            return Poly::gcd(a, &b.content_in(&v));
        }
        if !vb.contains(&v) {
            return Poly::gcd(&a.content_in(&v), b);
        }
        let ca = a.content_in(&v);
        let cb = b.content_in(&v);
        let c = Poly::gcd(&ca, &cb);
        let mut p = a.div_exact(&ca).expect("content divides");
        let mut r = b.div_exact(&cb).expect("content divides");
        if p.degree_in(&v) < r.degree_in(&v) {
            std::mem::swap(&mut p, &mut r);
        }
        loop {
            let rem = Poly::pseudo_rem(&p, &r, &v);
            if rem.is_zero() {
                break;
            }
            if rem.degree_in(&v) == 0 {
                r = Poly::one();
                break;
            }
            p = r;
            let cr = rem.content_in(&v);
            r = rem.div_exact(&cr).expect("content divides");
        }
        c.mul(&r).monic()
    }

    pub fn subs(&self, f: &dyn Fn(&Var) -> Option<Scalar>) -> Scalar {
        let mut acc = Scalar::zero();
        for (m, c) in &self.0 {
            let mut t = Scalar::from_q(c.clone());
            for (v, e) in &m.0 {
                let base = f(v).unwrap_or_else(|| Scalar::var(v.clone()));
                for _ in 0..*e {
                    t = &t * &base;
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.0.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || m.0.is_empty() {
                parts.push(fmt_q(&a));
            }
            for (v, e) in &m.0 {
                if *e == 1 {
                    parts.push(v.to_string());
                } else {
                    parts.push(format!("{v}**{e}"));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Normalized rational function.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_i64(1)
    }

    pub fn from_i64(n: i64) -> Self {
        Scalar::from_q(q(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Scalar::from_q(qf(n, d))
    }

    pub fn from_q(c: Q) -> Self {
        Scalar {
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        Scalar {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn coord(name: &str) -> Self {
        Scalar::var(Var::coord(name))
    }

    pub fn func(name: &str, args: &[&str]) -> Self {
        Scalar::var(Var::func(name, args))
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Builds `num / den` in canonical form.
    pub fn fraction(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        Some(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        if let Some(c) = den.as_constant() {
            return Scalar {
                num: num.scale(&c.recip()),
                den: Poly::one(),
            };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().1.recip();
        let den = den.scale(&lc);
        let num = num.scale(&lc);
        if den.is_one() {
            return Scalar {
                num,
                den: Poly::one(),
            };
        }
        Scalar { num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn depends_on(&self, coord: &str) -> bool {
        self.vars().iter().any(|v| v.depends_on(coord))
    }

    pub fn has_functions(&self) -> bool {
        self.vars().iter().any(|v| matches!(v, Var::Func(_)))
    }

    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut r = Scalar::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn diff(&self, coord: &str) -> Scalar {
        if self.den.is_one() {
            return Scalar::from_poly(self.num.diff(coord));
        }
        let n = self
            .num
            .diff(coord)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.diff(coord)));
        Self::normalize(n, self.den.mul(&self.den))
    }

    /// Substitutes variables; unmapped variables are kept.
    pub fn subs(&self, f: &dyn Fn(&Var) -> Option<Scalar>) -> Scalar {
        let n = self.num.subs(f);
        if self.den.is_one() {
            return n;
        }
        let d = self.den.subs(f);
        &n / &d
    }

    pub fn scale_q(&self, c: &Q) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// True when the display needs parentheses as a product factor.
    pub fn is_compound(&self) -> bool {
        !self.den.is_one() || self.num.0.len() > 1
    }

    pub fn is_negative_leading(&self) -> bool {
        self.num
            .0
            .iter()
            .next_back()
            .is_some_and(|(_, c)| c.is_negative())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with(f);
        }
        let wrap = |p: &Poly| {
            let s = format!("{}", PolyDisplay(p));
            if p.0.len() > 1 || s.contains('*') || s.contains('/') || s.starts_with('-') {
                format!("({s})")
            } else {
                s
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

struct PolyDisplay<'a>(&'a Poly);

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_with(f)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                self.$m(&o)
            }
        }
    };
}

binop!(Add, add, |a, b| {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return b.clone();
    }
    if a.den.is_one() && b.den.is_one() {
        return Scalar::from_poly(a.num.add(&b.num));
    }
    if a.den == b.den {
        return Scalar::normalize(a.num.add(&b.num), a.den.clone());
    }
    Scalar::normalize(
        a.num.mul(&b.den).add(&b.num.mul(&a.den)),
        a.den.mul(&b.den),
    )
});

binop!(Sub, sub, |a, b| a + &(-b));

binop!(Mul, mul, |a, b| {
    if a.is_zero() || b.is_zero() {
        return Scalar::zero();
    }
    if let Some(c) = a.as_constant() {
        return b.scale_q(&c);
    }
    if let Some(c) = b.as_constant() {
        return a.scale_q(&c);
    }
    if a.den.is_one() && b.den.is_one() {
        return Scalar::from_poly(a.num.mul(&b.num));
    }
    Scalar::normalize(a.num.mul(&b.num), a.den.mul(&b.den))
});

binop!(Div, div, |a, b| {
    let r = b.recip().expect("division by zero scalar");
    a * &r
});

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.scale(&-Q::one()),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_i64(n)
    }
}

impl From<Q> for Scalar {
    fn from(c: Q) -> Self {
        Scalar::from_q(c)
    }
}

/// Binomial coefficient as a rational.
pub fn binom(n: i64, k: i64) -> Q {
    if k < 0 || n < 0 || k > n {
        return Q::zero();
    }
    let mut r = Q::one();
    for i in 0..k {
        r = r * q(n - i) / q(i + 1);
    }
    r
}
