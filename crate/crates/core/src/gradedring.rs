//! Weighted graded integer polynomials and inverse polynomials.
//!
//! A [`GradedPoly`] lives in `Z[x_1, …, x_r]` where each variable carries a
//! positive weight. A [`SoclePoly`] is an inverse polynomial in the
//! `x_i^{-1}`; it is stored with positive exponents and read as inverse. The
//! polynomial ring acts on inverse polynomials by contraction, and the
//! resulting pairing between complementary degrees is what presents a
//! numerical Chow ring.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GradedError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("variable `{0}` must have positive degree")]
    NonPositiveDegree(String),
    #[error("polynomial `{0}` is not homogeneous")]
    Inhomogeneous(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A generator of a graded ring: name and positive weight.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarSpec {
    pub name: String,
    pub degree: u32,
}

impl VarSpec {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        VarSpec {
            name: name.into(),
            degree,
        }
    }
}

/// Checks names are unique and weights positive.
pub fn validate_vars(vars: &[VarSpec]) -> Result<(), GradedError> {
    for (i, v) in vars.iter().enumerate() {
        if v.degree == 0 {
            return Err(GradedError::NonPositiveDegree(v.name.clone()));
        }
        if vars[..i].iter().any(|w| w.name == v.name) {
            return Err(GradedError::DuplicateVariable(v.name.clone()));
        }
    }
    Ok(())
}

fn var_degree(vars: &[VarSpec], name: &str) -> Result<u32, GradedError> {
    vars.iter()
        .find(|v| v.name == name)
        .map(|v| v.degree)
        .ok_or_else(|| GradedError::UnknownVariable(name.to_string()))
}

/// Exponent vector keyed by variable name; zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<String, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(name: &str) -> Self {
        Self::from_exponents([(name, 1)])
    }

    pub fn from_exponents<'a, I: IntoIterator<Item = (&'a str, u32)>>(it: I) -> Self {
        let mut m = BTreeMap::new();
        for (n, e) in it {
            if e > 0 {
                *m.entry(n.to_string()).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, name: &str) -> u32 {
        self.0.get(name).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u32)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn degree(&self, vars: &[VarSpec]) -> Result<u32, GradedError> {
        self.iter()
            .try_fold(0, |acc, (n, e)| Ok(acc + var_degree(vars, n)? * e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (n, e) in &other.0 {
            *m.entry(n.clone()).or_insert(0) += e;
        }
        Monomial(m)
    }

    /// `self / other` when `other` divides `self`.
    pub fn divide(&self, other: &Monomial) -> Option<Monomial> {
        let mut m = self.0.clone();
        for (n, &e) in &other.0 {
            let have = m.get_mut(n)?;
            if *have < e {
                return None;
            }
            *have -= e;
            if *have == 0 {
                m.remove(n);
            }
        }
        Some(Monomial(m))
    }

    /// Renders with the given variable order (unknown names go last).
    pub fn render(&self, vars: &[VarSpec], inverse: bool) -> String {
        if self.is_one() {
            return "1".into();
        }
        let mut names: Vec<(&str, u32)> = self.iter().collect();
        names.sort_by_key(|(n, _)| vars.iter().position(|v| v.name == *n).unwrap_or(usize::MAX));
        names
            .iter()
            .map(|(n, e)| match (inverse, e) {
                (false, 1) => n.to_string(),
                (false, e) => format!("{n}^{e}"),
                (true, e) => format!("{n}^-{e}"),
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    fn sort_key(&self, vars: &[VarSpec]) -> (std::cmp::Reverse<u32>, Vec<std::cmp::Reverse<u32>>) {
        let deg = self.degree(vars).unwrap_or(0);
        let exps = vars
            .iter()
            .map(|v| std::cmp::Reverse(self.exponent(&v.name)))
            .collect();
        (std::cmp::Reverse(deg), exps)
    }
}

/// All monomials of weighted degree exactly `d`, in graded-lex order on the
/// given variable order (higher powers of earlier variables first).
pub fn mono_basis(vars: &[VarSpec], d: u32) -> Vec<Monomial> {
    fn go(vars: &[VarSpec], d: u32, prefix: &mut Vec<(String, u32)>, out: &mut Vec<Monomial>) {
        match vars.split_first() {
            None => {
                if d == 0 {
                    out.push(Monomial::from_exponents(
                        prefix.iter().map(|(n, e)| (n.as_str(), *e)),
                    ));
                }
            }
            Some((v, rest)) => {
                for e in (0..=d / v.degree).rev() {
                    prefix.push((v.name.clone(), e));
                    go(rest, d - e * v.degree, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
    let mut out = Vec::new();
    go(vars, d, &mut Vec::new(), &mut out);
    out
}

/// Integer polynomial in named variables, canonical (no zero coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GradedPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl GradedPoly {
    pub fn zero() -> Self {
        GradedPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(Monomial::var(name), 1)
    }

    pub fn monomial(m: Monomial, c: impl Into<BigInt>) -> Self {
        let mut p = GradedPoly::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigInt)>>(it: I) -> Self {
        let mut p = GradedPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&Monomial::one())
    }

    pub fn scale(&self, k: &BigInt) -> GradedPoly {
        GradedPoly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c * k)))
    }

    pub fn mul(&self, other: &GradedPoly) -> GradedPoly {
        let mut out = GradedPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> GradedPoly {
        (0..e).fold(GradedPoly::one(), |acc, _| acc.mul(self))
    }

    /// Variable names occurring in the polynomial.
    pub fn variables(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .keys()
            .flat_map(|m| m.iter().map(|(n, _)| n.to_string()))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    /// The common degree of all terms, `None` for the zero polynomial.
    pub fn homogeneous_degree(&self, vars: &[VarSpec]) -> Result<Option<u32>, GradedError> {
        let mut deg = None;
        for m in self.terms.keys() {
            let d = m.degree(vars)?;
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => {
                    return Err(GradedError::Inhomogeneous(self.render(vars)));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Part of weighted degree exactly `d`.
    pub fn part_of_degree(&self, vars: &[VarSpec], d: u32) -> Result<GradedPoly, GradedError> {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            if m.degree(vars)? == d {
                out.add_term(m.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Substitutes every variable through `image`; variables for which the
    /// closure returns `None` are reported as unknown.
    pub fn substitute<F>(&self, mut image: F) -> Result<GradedPoly, GradedError>
    where
        F: FnMut(&str) -> Option<GradedPoly>,
    {
        let mut out = GradedPoly::zero();
        for (m, c) in &self.terms {
            let mut t = GradedPoly::constant(c.clone());
            for (n, e) in m.iter() {
                let img = image(n).ok_or_else(|| GradedError::UnknownVariable(n.to_string()))?;
                t = t.mul(&img.pow(e));
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Renames variables; names missing from `map` are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> GradedPoly {
        GradedPoly::from_terms(self.terms.iter().map(|(m, c)| {
            let m = Monomial::from_exponents(
                m.iter()
                    .map(|(n, e)| (map.get(n).map(String::as_str).unwrap_or(n), e)),
            );
            (m, c.clone())
        }))
    }

    fn sorted_terms(&self, vars: &[VarSpec]) -> Vec<(&Monomial, &BigInt)> {
        let mut ts: Vec<_> = self.terms.iter().collect();
        ts.sort_by_cached_key(|(m, _)| m.sort_key(vars));
        ts
    }

    fn render_impl(&self, vars: &[VarSpec], inverse: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.sorted_terms(vars).into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (i, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if m.is_one() {
                s.push_str(&a.to_string());
            } else if a.is_one() {
                s.push_str(&m.render(vars, inverse));
            } else {
                s.push_str(&format!("{}*{}", a, m.render(vars, inverse)));
            }
        }
        s
    }

    /// Text form in the given variable order, parseable by [`parse_poly`].
    pub fn render(&self, vars: &[VarSpec]) -> String {
        self.render_impl(vars, false)
    }
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

impl<'a> std::ops::Add<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> std::ops::Sub<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> std::ops::Mul<&'a GradedPoly> for &'a GradedPoly {
    type Output = GradedPoly;
    fn mul(self, rhs: &GradedPoly) -> GradedPoly {
        GradedPoly::mul(self, rhs)
    }
}

impl std::ops::Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&BigInt::from(-1))
    }
}

/// Dual socle generator: an inverse polynomial homogeneous of degree
/// `top_degree`. Monomials are stored with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SoclePoly {
    poly: GradedPoly,
    top_degree: u32,
}

impl SoclePoly {
    pub fn new(poly: GradedPoly, vars: &[VarSpec], top_degree: u32) -> Result<Self, GradedError> {
        for (m, _) in poly.terms() {
            let d = m.degree(vars)?;
            if d != top_degree {
                return Err(GradedError::DegreeMismatch(format!(
                    "socle term {} has degree {}, expected {}",
                    m.render(vars, true),
                    d,
                    top_degree
                )));
            }
        }
        Ok(SoclePoly { poly, top_degree })
    }

    pub fn top_degree(&self) -> u32 {
        self.top_degree
    }

    /// The socle with positive exponents (monomial ↦ intersection number).
    pub fn as_poly(&self) -> &GradedPoly {
        &self.poly
    }

    /// Intersection number of a top-degree monomial.
    pub fn value(&self, m: &Monomial) -> BigInt {
        self.poly.coefficient(m)
    }

    /// Degree of a polynomial: its top-degree part contracted against the
    /// socle. Lower-degree terms contribute nothing.
    pub fn evaluate(&self, p: &GradedPoly) -> BigInt {
        p.terms()
            .fold(BigInt::zero(), |acc, (m, c)| acc + c * self.poly.coefficient(m))
    }

    pub fn rename(&self, map: &BTreeMap<String, String>) -> SoclePoly {
        SoclePoly {
            poly: self.poly.rename(map),
            top_degree: self.top_degree,
        }
    }

    /// Product of two socles in disjoint variables.
    pub fn product(&self, other: &SoclePoly) -> SoclePoly {
        SoclePoly {
            poly: self.poly.mul(&other.poly),
            top_degree: self.top_degree + other.top_degree,
        }
    }

    /// Inverse notation, e.g. `H^-3 - 6*H^-1*E^-2`.
    pub fn render(&self, vars: &[VarSpec]) -> String {
        self.poly.render_impl(vars, true)
    }
}

/// Contraction `p · f`: monomial `m` sends `x^{-a}` to `x^{-(a-m)}` when
/// `m` divides `a`, and to zero otherwise. The result is an inverse
/// polynomial (positive-exponent storage) of degree `top - deg p`.
pub fn contract(p: &GradedPoly, f: &SoclePoly, vars: &[VarSpec]) -> Result<GradedPoly, GradedError> {
    p.homogeneous_degree(vars)?;
    let mut out = GradedPoly::zero();
    for (m, c) in p.terms() {
        for (a, fc) in f.poly.terms() {
            if let Some(q) = a.divide(m) {
                out.add_term(q, c * fc);
            }
        }
    }
    Ok(out)
}

/// Intersection pairing `⟨p, q⟩ = (p·q)·f`, a constant.
pub fn pair(p: &GradedPoly, q: &GradedPoly, f: &SoclePoly, vars: &[VarSpec]) -> Result<BigInt, GradedError> {
    let dp = p.homogeneous_degree(vars)?;
    let dq = q.homogeneous_degree(vars)?;
    if let (Some(a), Some(b)) = (dp, dq) {
        if a + b != f.top_degree {
            return Err(GradedError::DegreeMismatch(format!(
                "degrees {} + {} do not add up to {}",
                a, b, f.top_degree
            )));
        }
    }
    Ok(f.evaluate(&p.mul(q)))
}

/// Pairing matrix between `mono_basis(d)` (rows) and `mono_basis(top - d)`
/// (columns).
pub fn pairing_matrix(vars: &[VarSpec], f: &SoclePoly, d: u32) -> Result<IntMatrix, GradedError> {
    if d > f.top_degree {
        return Err(GradedError::DegreeMismatch(format!(
            "degree {} above top degree {}",
            d, f.top_degree
        )));
    }
    let rows = mono_basis(vars, d);
    let cols = mono_basis(vars, f.top_degree - d);
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (i, a) in rows.iter().enumerate() {
        for (j, b) in cols.iter().enumerate() {
            m.set(i, j, f.value(&a.mul(b)));
        }
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, GradedError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(GradedError::Parse {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

type LaurentMono = BTreeMap<String, i64>;
type Laurent = BTreeMap<LaurentMono, BigInt>;

fn laurent_mul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            let mut m = m1.clone();
            for (n, e) in m2 {
                *m.entry(n.clone()).or_insert(0) += e;
            }
            m.retain(|_, e| *e != 0);
            *out.entry(m).or_insert_with(BigInt::zero) += c1 * c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn laurent_add(a: &mut Laurent, b: Laurent, sign: i32) {
    for (m, c) in b {
        *a.entry(m).or_insert_with(BigInt::zero) += c * sign;
    }
    a.retain(|_, c| !c.is_zero());
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    vars: &'a [VarSpec],
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.len, |(p, _)| *p)
    }

    fn err(&self, msg: impl Into<String>) -> GradedError {
        GradedError::Parse {
            pos: self.here(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<Laurent, GradedError> {
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -1;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let mut acc = Laurent::new();
        laurent_add(&mut acc, self.term()?, sign);
        loop {
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => break,
            }
            self.pos += 1;
            laurent_add(&mut acc, self.term()?, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Laurent, GradedError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = laurent_mul(&acc, &f);
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.factor()?;
                    acc = laurent_mul(&acc, &f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<Option<i64>, GradedError> {
        if self.peek() != Some(&Tok::Caret) {
            return Ok(None);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let e = n.to_i64().ok_or_else(|| self.err("exponent too large"))?;
                Ok(Some(if neg { -e } else { e }))
            }
            _ => Err(self.err("expected an integer exponent")),
        }
    }

    fn factor(&mut self) -> Result<Laurent, GradedError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let mut l = Laurent::new();
                if !n.is_zero() {
                    l.insert(LaurentMono::new(), n);
                }
                match self.exponent()? {
                    None => Ok(l),
                    Some(e) if e >= 0 => Ok((0..e).fold(unit(), |acc, _| laurent_mul(&acc, &l))),
                    Some(_) => Err(self.err("negative power of a constant")),
                }
            }
            Some(Tok::Ident(name)) => {
                let at = self.here();
                self.pos += 1;
                if !self.vars.iter().any(|v| v.name == name) {
                    return Err(GradedError::Parse {
                        pos: at,
                        msg: format!("unknown variable `{name}`"),
                    });
                }
                let e = self.exponent()?.unwrap_or(1);
                let mut m = LaurentMono::new();
                if e != 0 {
                    m.insert(name, e);
                }
                let mut l = Laurent::new();
                l.insert(m, BigInt::one());
                Ok(l)
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                match self.exponent()? {
                    None => Ok(inner),
                    Some(e) if e >= 0 => {
                        Ok((0..e).fold(unit(), |acc, _| laurent_mul(&acc, &inner)))
                    }
                    Some(_) => Err(self.err("negative power of a parenthesized expression")),
                }
            }
            _ => Err(self.err("expected a number, variable or `(`")),
        }
    }
}

fn unit() -> Laurent {
    let mut l = Laurent::new();
    l.insert(LaurentMono::new(), BigInt::one());
    l
}

fn parse_laurent(text: &str, vars: &[VarSpec]) -> Result<Laurent, GradedError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        vars,
        len: text.len(),
    };
    let l = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(l)
}

/// Parses a polynomial such as `3*(r1+r2)` or `H^2 - 3*F`.
///
/// Integer coefficients, `+`, `-`, `*`, `^`, parentheses and juxtaposition
/// of a coefficient with a factor (`2H`) are accepted. Variable names must
/// be declared in `vars`.
pub fn parse_poly(text: &str, vars: &[VarSpec]) -> Result<GradedPoly, GradedError> {
    let l = parse_laurent(text, vars)?;
    let mut out = GradedPoly::zero();
    for (m, c) in l {
        if m.values().any(|&e| e < 0) {
            return Err(GradedError::Parse {
                pos: 0,
                msg: "negative exponent in an ordinary polynomial".into(),
            });
        }
        out.add_term(
            Monomial::from_exponents(m.iter().map(|(n, &e)| (n.as_str(), e as u32))),
            c,
        );
    }
    Ok(out)
}

/// Parses a socle in inverse notation, e.g. `2*S^-3 + S^-1*L^-1`.
pub fn parse_socle(text: &str, vars: &[VarSpec], top_degree: u32) -> Result<SoclePoly, GradedError> {
    let l = parse_laurent(text, vars)?;
    let mut out = GradedPoly::zero();
    for (m, c) in l {
        if m.values().any(|&e| e > 0) || (m.is_empty() && top_degree > 0) {
            return Err(GradedError::Parse {
                pos: 0,
                msg: "socle terms must use negative exponents only".into(),
            });
        }
        out.add_term(
            Monomial::from_exponents(m.iter().map(|(n, &e)| (n.as_str(), (-e) as u32))),
            c,
        );
    }
    SoclePoly::new(out, vars, top_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lc_vars() -> Vec<VarSpec> {
        vec![VarSpec::new("H", 1), VarSpec::new("E", 1), VarSpec::new("F", 2)]
    }

    fn f_lc() -> SoclePoly {
        parse_socle("H^-3 - 6*H^-1*E^-2 - 30*E^-3 - E^-1*F^-1", &lc_vars(), 3).unwrap()
    }

    fn p(text: &str, vars: &[VarSpec]) -> GradedPoly {
        parse_poly(text, vars).unwrap()
    }

    #[test]
    fn mono_basis_orders() {
        let he = &lc_vars()[..2];
        let names: Vec<String> = mono_basis(he, 2).iter().map(|m| m.render(he, false)).collect();
        assert_eq!(names, ["H^2", "H*E", "E^2"]);
        let v = lc_vars();
        let names: Vec<String> = mono_basis(&v, 2).iter().map(|m| m.render(&v, false)).collect();
        assert_eq!(names, ["H^2", "H*E", "E^2", "F"]);
        assert_eq!(mono_basis(&v, 0), vec![Monomial::one()]);
    }

    #[test]
    fn contraction_examples() {
        let v = lc_vars();
        let f = f_lc();
        assert_eq!(contract(&GradedPoly::one(), &f, &v).unwrap(), f.as_poly().clone());
        let c = contract(&p("H", &v), &f, &v).unwrap();
        // H^-2 - 6E^-2, stored with positive exponents
        assert_eq!(c, p("H^2 - 6*E^2", &v));
        let c = contract(&p("E*F", &v), &f, &v).unwrap();
        assert_eq!(c, GradedPoly::constant(-1));
        assert!(contract(&p("H + F", &v), &f, &v).is_err());
    }

    #[test]
    fn pairings() {
        let v = lc_vars();
        let f = f_lc();
        assert_eq!(pair(&p("H", &v), &p("H^2", &v), &f, &v).unwrap(), BigInt::from(1));
        assert_eq!(pair(&p("E", &v), &p("E^2", &v), &f, &v).unwrap(), BigInt::from(-30));
        assert!(pair(&p("E", &v), &p("E", &v), &f, &v).is_err());
        let q = vec![VarSpec::new("S", 1), VarSpec::new("L", 2)];
        let fq = parse_socle("2*S^-3 + S^-1*L^-1", &q, 3).unwrap();
        assert_eq!(pair(&p("S", &q), &p("S^2", &q), &fq, &q).unwrap(), BigInt::from(2));
    }

    #[test]
    fn pairing_matrices() {
        let s = vec![VarSpec::new("r1", 1), VarSpec::new("r2", 1)];
        let fs = parse_socle("r1^-1*r2^-1", &s, 2).unwrap();
        assert_eq!(
            pairing_matrix(&s, &fs, 1).unwrap(),
            IntMatrix::from_i64_rows(&[[0, 1], [1, 0]])
        );
        assert_eq!(
            pairing_matrix(&lc_vars(), &f_lc(), 1).unwrap(),
            IntMatrix::from_i64_rows(&[[1, 0, -6, 0], [0, -6, -30, -1]])
        );
        let top = pairing_matrix(&lc_vars(), &f_lc(), 0).unwrap();
        assert_eq!(top.rows(), 1);
        assert_eq!(top.row(0), &crate::exactlin::to_bigints(&[1, 0, -6, 0, -30, -1])[..]);
    }

    #[test]
    fn parser_and_printer() {
        let v = lc_vars();
        let q = p("2H - E", &v);
        assert_eq!(q.render(&v), "2*H - E");
        assert_eq!(p("3*(H+E)^2", &v), p("3*H^2 + 6*H*E + 3*E^2", &v));
        assert_eq!(f_lc().render(&v), "H^-3 - 6*H^-1*E^-2 - 30*E^-3 - E^-1*F^-1");
        assert_eq!(parse_socle(&f_lc().render(&v), &v, 3).unwrap(), f_lc());
        assert!(matches!(parse_poly("H + X", &v), Err(GradedError::Parse { .. })));
        assert!(parse_poly("H^-1", &v).is_err());
        assert!(parse_socle("H^3", &v, 3).is_err());
        assert!(parse_socle("H^-2", &v, 3).is_err());
        assert!(parse_poly("(H", &v).is_err());
        assert_eq!(p("0", &v), GradedPoly::zero());
        assert_eq!(p("H - H", &v).render(&v), "0");
    }

    #[test]
    fn var_validation() {
        assert!(validate_vars(&lc_vars()).is_ok());
        assert!(validate_vars(&[VarSpec::new("a", 1), VarSpec::new("a", 2)]).is_err());
        assert!(validate_vars(&[VarSpec::new("a", 0)]).is_err());
    }
}
