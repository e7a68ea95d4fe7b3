use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Commutative ring operations needed by truncated power series.
pub trait Ring: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, c: &Scalar) -> Self;
}

impl Ring for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, c: &Scalar) -> Self {
        self * c
    }
}

/// Power series truncated after the coefficient of `x^(len - 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<T = Scalar> {
    pub coeffs: Vec<T>,
}

impl<T: Ring> PowerSeries<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Product truncated to `len` coefficients.
    pub fn mul_trunc(&self, other: &Self, len: usize) -> Self {
        let mut out = vec![T::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] = out[i + j].add(&a.mul(b));
                }
            }
        }
        PowerSeries { coeffs: out }
    }
}

/// `f(g(x))` truncated to `len` coefficients; `g` must have no constant term.
pub fn series_compose<T: Ring>(f: &PowerSeries<Scalar>, g: &PowerSeries<T>, len: usize) -> Result<PowerSeries<T>> {
    if !g.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let mut out = vec![T::zero(); len];
    let mut power = PowerSeries { coeffs: vec![T::one()] };
    for k in 0..len {
        let fk = f.coeff(k);
        if !fk.is_zero() {
            for (n, c) in power.coeffs.iter().enumerate().take(len) {
                if !c.is_zero() {
                    out[n] = out[n].add(&c.scale(&fk));
                }
            }
        }
        power = power.mul_trunc(g, len);
    }
    Ok(PowerSeries { coeffs: out })
}

/// Coefficients `f_0..f_{len-1}` of the series whose growth stays inside a
/// sub-Hopf algebra of trees: `1` when `alpha = 0`, `exp(alpha x)` when
/// `beta = 0`, and `(1 - alpha beta x)^(-1/beta)` otherwise.
pub fn foissy_series(alpha: &BigRational, beta: &BigRational, len: usize) -> PowerSeries<Scalar> {
    let mut coeffs = Vec::with_capacity(len);
    if alpha.is_zero() {
        coeffs.push(Scalar::one());
        coeffs.resize(len, Scalar::zero());
        coeffs.truncate(len);
        return PowerSeries { coeffs };
    }
    // (1 - a b x)^(-1/b) and exp(a x) share c_n = a^n prod_{j<n} (1 + j b) / n!.
    let mut c = BigRational::one();
    for n in 0..len {
        coeffs.push(Scalar::from_rational(c.clone()));
        let j = BigRational::from_integer(BigInt::from(n as i64));
        c = c * alpha * (BigRational::one() + &j * beta) / (j + BigRational::one());
    }
    PowerSeries { coeffs }
}
