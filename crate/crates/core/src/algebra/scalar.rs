use std::collections::BTreeMap;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Highest coupling index with its own variable (`t0..t8`, `s0..s8`).
pub const MAX_COUPLING: usize = 8;

/// Number of variables in the fixed alphabet.
pub const NUM_VARS: usize = 2 * (MAX_COUPLING + 1) + 4;

/// Variables available to scalar polynomials.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Var {
    /// Coupling `t_i` of a growth model.
    T(u8),
    /// Spawn-rate `s_i` of a growth model.
    S(u8),
    /// Percolation parameter.
    Q,
    /// Ratio `t1 / t0` used by normalised tables.
    Ratio,
    Alpha,
    Beta,
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::T(i) => i as usize,
            Var::S(i) => MAX_COUPLING + 1 + i as usize,
            Var::Q => 2 * (MAX_COUPLING + 1),
            Var::Ratio => 2 * (MAX_COUPLING + 1) + 1,
            Var::Alpha => 2 * (MAX_COUPLING + 1) + 2,
            Var::Beta => 2 * (MAX_COUPLING + 1) + 3,
        }
    }

    pub fn from_index(i: usize) -> Var {
        let k = MAX_COUPLING + 1;
        match i {
            _ if i < k => Var::T(i as u8),
            _ if i < 2 * k => Var::S((i - k) as u8),
            _ if i == 2 * k => Var::Q,
            _ if i == 2 * k + 1 => Var::Ratio,
            _ if i == 2 * k + 2 => Var::Alpha,
            _ => Var::Beta,
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::T(i) => format!("t{i}"),
            Var::S(i) => format!("s{i}"),
            Var::Q => "q".into(),
            Var::Ratio => "t".into(),
            Var::Alpha => "alpha".into(),
            Var::Beta => "beta".into(),
        }
    }

    pub fn parse(name: &str) -> Option<Var> {
        match name {
            "q" => return Some(Var::Q),
            "t" => return Some(Var::Ratio),
            "alpha" => return Some(Var::Alpha),
            "beta" => return Some(Var::Beta),
            _ => {}
        }
        let (head, tail) = name.split_at(1);
        let i: usize = tail.parse().ok()?;
        if i > MAX_COUPLING || tail.is_empty() {
            return None;
        }
        match head {
            "t" => Some(Var::T(i as u8)),
            "s" => Some(Var::S(i as u8)),
            _ => None,
        }
    }
}

/// A monomial over the fixed alphabet.
///
/// The derived ordering is graded lexicographic with `t0 > t1 > ...`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Monomial {
    deg: u32,
    exps: [u16; NUM_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: Var) -> Self {
        let mut m = Monomial::default();
        m.exps[v.index()] = 1;
        m.deg = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exponent(&self, v: Var) -> u16 {
        self.exps[v.index()]
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..NUM_VARS {
            out.exps[i] += other.exps[i];
        }
        out.deg += other.deg;
        out
    }

    fn divides(&self, other: &Monomial) -> bool {
        (0..NUM_VARS).all(|i| self.exps[i] <= other.exps[i])
    }

    fn div(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for i in 0..NUM_VARS {
            out.exps[i] -= other.exps[i];
        }
        out.deg -= other.deg;
        out
    }

    fn without(&self, v: Var) -> Monomial {
        let mut out = *self;
        let e = out.exps[v.index()];
        out.exps[v.index()] = 0;
        out.deg -= e as u32;
        out
    }

    fn fmt_factors(&self) -> String {
        let mut parts = Vec::new();
        for i in 0..NUM_VARS {
            let e = self.exps[i];
            if e == 0 {
                continue;
            }
            let name = Var::from_index(i).name();
            if e == 1 {
                parts.push(name);
            } else {
                parts.push(format!("{name}^{e}"));
            }
        }
        parts.join("*")
    }
}

/// Sparse polynomial with rational coefficients over the fixed alphabet.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from(1)
    }

    pub fn var(v: Var) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), BigRational::one());
        Scalar { terms }
    }

    pub fn t(i: usize) -> Self {
        Scalar::var(Var::T(i as u8))
    }

    pub fn q() -> Self {
        Scalar::var(Var::Q)
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Monomial::one(), r);
        }
        Scalar { terms }
    }

    pub fn from_term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Scalar { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.deg).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Leading term in graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn variables(&self) -> Vec<Var> {
        (0..NUM_VARS).filter(|&i| self.terms.keys().any(|m| m.exps[i] > 0)).map(Var::from_index).collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &BigRational) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    fn mul_term(&self, m: &Monomial, c: &BigRational) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Exact quotient `self / d`; fails unless `d` divides `self`.
    pub fn exact_div(&self, d: &Scalar) -> Result<Scalar> {
        if d.is_zero() {
            return Err(Error::InexactDivision);
        }
        if let Some(c) = d.constant() {
            return Ok(self.scale(&c.recip()));
        }
        let (lm, lc) = d.leading().map(|(m, c)| (*m, c.clone())).expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Scalar::zero();
        while let Some((m, c)) = rem.leading().map(|(m, c)| (*m, c.clone())) {
            if !lm.divides(&m) {
                return Err(Error::InexactDivision);
            }
            let qm = m.div(&lm);
            let qc = c / &lc;
            rem -= d.mul_term(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Replaces every occurrence of `v` by `value`.
    pub fn substitute(&self, v: Var, value: &Scalar) -> Scalar {
        let mut powers: Vec<Scalar> = vec![Scalar::one()];
        let mut out = Scalar::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            out += powers[e].mul_term(&m.without(v), c);
        }
        out
    }

    pub fn substitute_all(&self, values: &[(Var, Scalar)]) -> Scalar {
        values.iter().fold(self.clone(), |acc, (v, x)| acc.substitute(*v, x))
    }

    /// Value modulo the prime `2^61 - 1` at `point` (indexed by variable);
    /// `None` when a coefficient denominator vanishes modulo the prime.
    pub fn eval_mod(&self, point: &[u64; NUM_VARS]) -> Option<u64> {
        let mut acc = 0u64;
        for (m, c) in &self.terms {
            let num = big_mod(c.numer());
            let den = big_mod(c.denom());
            if den == 0 {
                return None;
            }
            let mut term = mul_mod(num, inv_mod(den));
            for i in 0..NUM_VARS {
                if m.exps[i] > 0 {
                    term = mul_mod(term, pow_mod(point[i], m.exps[i] as u64));
                }
            }
            acc = add_mod(acc, term);
        }
        Some(acc)
    }

    /// Leading coefficient made positive by an overall sign change.
    pub fn sign_normalised(&self) -> Scalar {
        match self.leading() {
            Some((_, c)) if c.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }

    /// Evaluates a polynomial with no variables other than those in `values`.
    pub fn eval(&self, values: &[(Var, BigRational)]) -> Option<BigRational> {
        let subs: Vec<(Var, Scalar)> = values.iter().map(|(v, r)| (*v, Scalar::from_rational(r.clone()))).collect();
        self.substitute_all(&subs).constant()
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.constant().and_then(|c| c.to_f64())
    }
}

pub const MOD_P: u64 = (1 << 61) - 1;

fn big_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(MOD_P);
    let r = ((x % &p) + &p) % &p;
    r.to_u64().expect("reduced")
}

pub fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MOD_P as u128) as u64
}

pub fn add_mod(a: u64, b: u64) -> u64 {
    (a + b) % MOD_P
}

pub fn sub_mod(a: u64, b: u64) -> u64 {
    (a + MOD_P - b) % MOD_P
}

pub fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut out = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            out = mul_mod(out, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    out
}

pub fn inv_mod(a: u64) -> u64 {
    pow_mod(a, MOD_P - 2)
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(v)))
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(v))
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::from_rational(v)
    }
}

impl From<Var> for Scalar {
    fn from(v: Var) -> Self {
        Scalar::var(v)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(mut self) -> Scalar {
        for v in self.terms.values_mut() {
            *v = -v.clone();
        }
        self
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, c.clone());
        }
    }
}

impl AddAssign<Scalar> for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        if self.terms.len() < rhs.terms.len() {
            let lhs = std::mem::replace(self, rhs);
            for (m, c) in lhs.terms {
                self.add_term(m, c);
            }
        } else {
            for (m, c) in rhs.terms {
                self.add_term(m, c);
            }
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (m, c) in &rhs.terms {
            self.add_term(*m, -c.clone());
        }
    }
}

impl SubAssign<Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: Scalar) {
        for (m, c) in rhs.terms {
            self.add_term(m, -c);
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        let mut out = Scalar::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $assign:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(mut self, rhs: Scalar) -> Scalar {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(mut self, rhs: &Scalar) -> Scalar {
                self.$assign(rhs);
                self
            }
        }
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                let mut out = self.clone();
                out.$assign(rhs);
                out
            }
        }
    };
}

forward_binop!(Add, add, add_assign);
forward_binop!(Sub, sub, sub_assign);

impl Mul<Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Mul<&Scalar> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        &self * rhs
    }
}

impl Mul<Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        self * &rhs
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

fn fmt_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Terms in descending graded lexicographic order, e.g. `3*t0^2 + t0*t1 - 1/2`.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            let sep = match (first, neg) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            f.write_str(sep)?;
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&m.fmt_factors())?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), m.fmt_factors())?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses sums, differences, products, integer powers, rational literals
    /// and parentheses over the fixed alphabet.
    fn from_str(s: &str) -> Result<Scalar> {
        let tokens = tokenize(s)?;
        let mut p = Parser { tokens, pos: 0 };
        let out = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!("trailing input in `{s}`")));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Tok::Num(text.parse().expect("digits")));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphabetic() {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Scalar> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc += self.term()?;
            } else if self.eat('-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Scalar> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc * self.power()?;
            } else if self.eat('/') {
                let d = self.power()?;
                let c = d
                    .constant()
                    .filter(|c| !c.is_zero())
                    .ok_or_else(|| Error::Parse("division by a non-constant or zero".into()))?;
                acc = acc.scale(&c.recip());
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Scalar> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.tokens.get(self.pos).cloned() {
                Some(Tok::Num(e)) => {
                    self.pos += 1;
                    let e = e.to_u32().ok_or_else(|| Error::Parse("exponent too large".into()))?;
                    Ok(base.pow(e))
                }
                _ => Err(Error::Parse("expected an integer exponent".into())),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Scalar> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Scalar::from(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                Var::parse(&name).map(Scalar::var).ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing `)`".into()));
                }
                Ok(inner)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Gaussian binomial `[n choose k]_q` as a polynomial in `q`.
pub fn qbinom(n: usize, k: usize) -> Scalar {
    if k > n {
        return Scalar::zero();
    }
    let mut row: Vec<Scalar> = vec![Scalar::one()];
    for m in 1..=n {
        let mut next = vec![Scalar::zero(); m + 1];
        next[0] = Scalar::one();
        next[m] = Scalar::one();
        for j in 1..m {
            next[j] = &row[j - 1] + Scalar::q().pow(j as u32) * &row[j];
        }
        row = next;
    }
    row[k].clone()
}

/// A quotient of polynomials kept without gcd reduction.
///
/// Construction divides out the denominator whenever it divides exactly.
/// Equality is decided by cross-multiplication.
#[derive(Clone)]
pub struct ScalarRatio {
    num: Scalar,
    den: Scalar,
}

impl ScalarRatio {
    pub fn new(num: Scalar, den: Scalar) -> Result<ScalarRatio> {
        if den.is_zero() {
            return Err(Error::DomainError("zero denominator".into()));
        }
        if let Ok(q) = num.exact_div(&den) {
            return Ok(ScalarRatio { num: q, den: Scalar::one() });
        }
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = lc.recip();
        Ok(ScalarRatio { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_scalar(s: Scalar) -> ScalarRatio {
        ScalarRatio { num: s, den: Scalar::one() }
    }

    pub fn numer(&self) -> &Scalar {
        &self.num
    }

    pub fn denom(&self) -> &Scalar {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value, when the denominator divides out.
    pub fn to_scalar(&self) -> Option<Scalar> {
        self.num.exact_div(&self.den).ok()
    }

    pub fn mul(&self, other: &ScalarRatio) -> ScalarRatio {
        ScalarRatio::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero")
    }

    pub fn add(&self, other: &ScalarRatio) -> ScalarRatio {
        if self.den == other.den {
            return ScalarRatio::new(&self.num + &other.num, self.den.clone()).expect("nonzero");
        }
        ScalarRatio::new(&self.num * &other.den + &other.num * &self.den, &self.den * &other.den).expect("nonzero")
    }

    pub fn neg(&self) -> ScalarRatio {
        ScalarRatio { num: -&self.num, den: self.den.clone() }
    }

    pub fn div(&self, other: &ScalarRatio) -> Result<ScalarRatio> {
        ScalarRatio::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn substitute(&self, v: Var, value: &Scalar) -> Result<ScalarRatio> {
        ScalarRatio::new(self.num.substitute(v, value), self.den.substitute(v, value))
    }
}

impl PartialEq for ScalarRatio {
    fn eq(&self, other: &ScalarRatio) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for ScalarRatio {}

impl fmt::Display for ScalarRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for ScalarRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarRatio({self})")
    }
}

impl From<Scalar> for ScalarRatio {
    fn from(s: Scalar) -> Self {
        ScalarRatio::from_scalar(s)
    }
}
