//! Sparse polynomials with exact coefficients.
//!
//! A [`Polynomial`] in `dim` variables represents an element of `S(g)` viewed as
//! a polynomial function on `g*`, with variable `x_i` standing for the basis
//! vector `e_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Exponent vector `x_1^{a_1} ... x_d^{a_d}`.
pub type Monomial = Vec<u32>;

pub fn degree(m: &[u32]) -> usize {
    m.iter().map(|&a| a as usize).sum()
}

/// All exponent vectors of length `dim` and total degree `d`, in lexicographic
/// order with the first variable's exponent decreasing.
pub fn monomials_of_degree(dim: usize, d: usize) -> Vec<Monomial> {
    fn rec(dim: usize, left: usize, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == dim {
            cur.push(left as u32);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (0..=left).rev() {
            cur.push(a as u32);
            rec(dim, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if dim == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(dim, d, &mut Vec::with_capacity(dim), &mut out);
    out
}

/// Monomials of degree `<= d`, grouped by increasing degree.
pub fn monomials_up_to(dim: usize, d: usize) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(dim, k)).collect()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(vec![0; dim], c);
        p
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(dim: usize, i: usize) -> Self {
        let mut m = vec![0; dim];
        m[i] = 1;
        Self::monomial(m, Scalar::one())
    }

    pub fn monomial(m: Monomial, c: Scalar) -> Self {
        let mut p = Self::zero(m.len());
        p.add_term(m, c);
        p
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = Self::zero(dim);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &[u32]) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| degree(m)).max()
    }

    /// Degree with the zero polynomial counted as degree 0.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        debug_assert_eq!(m.len(), self.dim);
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Polynomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &[u32], c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        if c.is_zero() {
            return out;
        }
        for (k, a) in &self.terms {
            let prod: Monomial = k.iter().zip(m).map(|(x, y)| x + y).collect();
            out.add_term(prod, a * c);
        }
        out
    }

    /// `d/dx_i`
    pub fn partial(&self, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, a) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let mut n = m.clone();
            n[i] -= 1;
            out.add_term(n, a * scalar::int(m[i] as i64));
        }
        out
    }

    /// Constant-coefficient derivative `D^alpha`.
    pub fn derivative(&self, alpha: &[u32]) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        'terms: for (m, a) in &self.terms {
            let mut c = a.clone();
            let mut n = m.clone();
            for i in 0..self.dim {
                if alpha[i] > m[i] {
                    continue 'terms;
                }
                for t in 0..alpha[i] {
                    c *= scalar::int((m[i] - t) as i64);
                }
                n[i] -= alpha[i];
            }
            out.add_term(n, c);
        }
        out
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| degree(m) == d)
                .map(|(m, a)| (m.clone(), a.clone()))
                .collect(),
        }
    }

    /// Drops all terms of degree greater than `d`.
    pub fn truncate(&self, d: usize) -> Polynomial {
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| degree(m) <= d)
                .map(|(m, a)| (m.clone(), a.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: usize) -> Polynomial {
        let mut acc = Polynomial::one(self.dim);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero();
        for (m, a) in &self.terms {
            let mut t = a.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    /// Renders with the given variable names, e.g. `2*e*f - 1/2*h^2`.
    pub fn render(&self, labels: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        // highest degree first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| degree(b).cmp(&degree(a)).then(b.cmp(a)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = scalar::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = labels.get(v).cloned().unwrap_or_else(|| format!("x{}", v + 1));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                out.push_str(&scalar::render(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&scalar::render(&abs));
                    out.push('*');
                }
                out.push_str(&factors.join("*"));
            }
        }
        out
    }

    /// Parses infix syntax over the given variable names: `+ - * ^`,
    /// parentheses, integers and `a/b` rationals.
    pub fn parse(text: &str, labels: &[String]) -> Result<Polynomial> {
        let tokens = tokenize(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            labels,
        };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected trailing input in {text:?}"
            )));
        }
        Ok(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.dim).map(|i| format!("x{}", i + 1)).collect();
        f.write_str(&self.render(&labels))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.dim);
        for (m, a) in &rhs.terms {
            for (k, b) in &self.terms {
                let prod: Monomial = k.iter().zip(m).map(|(x, y)| x + y).collect();
                out.add_term(prod, a * b);
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Num(Scalar),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(scalar::parse(&s)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {text:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    labels: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn dim(&self) -> usize {
        self.labels.len()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        while let Some(Token::Op(op @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if op == '+' { &acc + &rhs } else { &acc - &rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Op('*')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = &acc * &rhs;
                }
                Some(Token::Op('/')) => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    if rhs.degree() != Some(0) {
                        return Err(Error::Parse("division only by nonzero constants".into()));
                    }
                    let c = rhs.coeff(&vec![0; self.dim()]);
                    acc = acc.scale(&(Scalar::one() / c));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if let Some(Token::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-&self.unary()?);
        }
        if let Some(Token::Op('+')) = self.peek() {
            self.pos += 1;
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Token::Op('^')) = self.peek() {
            self.pos += 1;
            match self.tokens.get(self.pos).cloned() {
                Some(Token::Num(n)) if n.is_integer() => {
                    self.pos += 1;
                    let k: usize = n
                        .numer()
                        .to_string()
                        .parse()
                        .map_err(|_| Error::Parse("exponent too large".into()))?;
                    return Ok(base.pow(k));
                }
                _ => return Err(Error::Parse("expected a non-negative integer exponent".into())),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let dim = self.dim();
        match self.tokens.get(self.pos).cloned() {
            Some(Token::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(dim, n))
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                match self.labels.iter().position(|l| *l == name) {
                    Some(i) => Ok(Polynomial::var(dim, i)),
                    None => Err(Error::Parse(format!(
                        "unknown variable {name:?}; expected one of {:?}",
                        self.labels
                    ))),
                }
            }
            Some(Token::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Token::Op(')')) {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}
