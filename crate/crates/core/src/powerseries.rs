//! Exact polynomials and truncated power series over an integer scalar.
//!
//! The only denominators that ever occur are powers of `(1 - t)`, so rational
//! generating functions are expanded by the binomial formula
//! `[t^n] p(t) / (1-t)^(l+1) = sum_k p_k C(n - k + l, l)` instead of by series
//! division.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense polynomial in `t`; index is the exponent. Trailing zeros are trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| T::from_int(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![T::one()],
        }
    }

    /// `c t^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Adds `c t^k` in place.
    pub fn add_term(&mut self, c: T, k: usize) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, T::zero());
        }
        self.coeffs[k] = self.coeffs[k].clone() + c;
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    /// Value at `t = 1`.
    pub fn sum_of_coeffs(&self) -> T {
        self.coeffs.iter().fold(T::zero(), |acc, c| acc + c.clone())
    }
}

/// Convolution product.
pub fn poly_mul<T: Scalar>(p: &Polynomial<T>, q: &Polynomial<T>) -> Polynomial<T> {
    if p.is_zero() || q.is_zero() {
        return Polynomial::zero();
    }
    let mut out = vec![T::zero(); p.coeffs.len() + q.coeffs.len() - 1];
    for (i, a) in p.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in q.coeffs.iter().enumerate() {
            out[i + j] = out[i + j].clone() + a.clone() * b.clone();
        }
    }
    Polynomial::new(out)
}

impl<T: Scalar> Mul for &Polynomial<T> {
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        poly_mul(self, rhs)
    }
}

impl<T: Scalar> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if c.is_negative() {
                write!(f, "{}", if first { "-" } else { " - " })?;
            } else if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Coefficients `c_0 .. c_N` of a power series truncated after `t^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeriesCoefficients<T> {
    trunc: usize,
    coeffs: Vec<T>,
}

impl<T: Scalar> SeriesCoefficients<T> {
    /// Panics unless `coeffs.len() == trunc + 1`.
    pub fn new(trunc: usize, coeffs: Vec<T>) -> Self {
        assert_eq!(
            coeffs.len(),
            trunc + 1,
            "series needs trunc + 1 coefficients"
        );
        SeriesCoefficients { trunc, coeffs }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Option<&T> {
        self.coeffs.get(n)
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Truncated product with a polynomial.
    pub fn mul_poly(&self, p: &Polynomial<T>) -> Self {
        let mut out = vec![T::zero(); self.trunc + 1];
        for (k, a) in p.coeffs().iter().enumerate().take(self.trunc + 1) {
            for (o, c) in out[k..].iter_mut().zip(&self.coeffs) {
                *o = o.clone() + a.clone() * c.clone();
            }
        }
        SeriesCoefficients::new(self.trunc, out)
    }
}

/// `C(n, k)` for `n >= 0`; zero when `k > n`.
pub fn binom<T: Scalar>(n: &T, k: &T) -> Result<T> {
    if n.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "binomial C({n}, {k}) with negative top is not supported"
        )));
    }
    if k.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "binomial C({n}, {k}) with negative bottom"
        )));
    }
    if k > n {
        return Ok(T::zero());
    }
    let other = n.clone() - k.clone();
    let small = if &other < k { other } else { k.clone() };
    let steps = small.to_usize().ok_or_else(|| {
        Error::InvalidArgument(format!("binomial C({n}, {k}) is too large to evaluate"))
    })?;
    Ok(falling_binomial(n, steps))
}

/// Integer-valued binomial polynomial `x (x-1) ... (x-k+1) / k!`, valid for every integer `x`.
pub fn binomial_polynomial<T: Scalar>(x: &T, k: usize) -> T {
    falling_binomial(x, k)
}

fn falling_binomial<T: Scalar>(x: &T, k: usize) -> T {
    // acc after step i is C(x, i+1); each division is exact.
    let mut acc = T::one();
    for i in 0..k {
        let i = T::from_usize(i).expect("index fits the scalar");
        acc = acc * (x.clone() - i.clone()) / (i + T::one());
    }
    acc
}

/// First `trunc + 1` coefficients of `numerator / (1 - t)^(l+1)`.
pub fn expand_rational_gf<T: Scalar>(
    numerator: &Polynomial<T>,
    l: &T,
    trunc: usize,
) -> Result<SeriesCoefficients<T>> {
    if l.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "denominator exponent l + 1 needs l >= 0, got l = {l}"
        )));
    }
    // C(j + l, l) for j = 0..=trunc, built by C(j+l, l) = C(j-1+l, l) (j+l) / j.
    let mut base = Vec::with_capacity(trunc + 1);
    let mut c = T::one();
    base.push(c.clone());
    for j in 1..=trunc {
        let jt = T::from_usize(j).expect("truncation index fits the scalar");
        c = c * (jt.clone() + l.clone()) / jt;
        base.push(c.clone());
    }
    let mut out = vec![T::zero(); trunc + 1];
    for (k, a) in numerator.coeffs().iter().enumerate().take(trunc + 1) {
        if a.is_zero() {
            continue;
        }
        for n in k..=trunc {
            out[n] = out[n].clone() + a.clone() * base[n - k].clone();
        }
    }
    Ok(SeriesCoefficients::new(trunc, out))
}
