use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

/// Power series in the nome `p`, truncated modulo `p^(K+1)`.
#[derive(Clone, PartialEq)]
pub struct PSeries<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> PSeries<F> {
    pub fn zero(order: usize) -> Self {
        PSeries { coeffs: vec![F::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(F::one(), order)
    }

    pub fn constant(c: F, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// `c * p^e`, or zero when `e` exceeds the order.
    pub fn monomial(c: F, e: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e <= order {
            s.coeffs[e] = c;
        }
        s
    }

    /// Series from explicit coefficients; missing ones are zero, extra ones dropped.
    pub fn from_coeffs(mut coeffs: Vec<F>, order: usize) -> Self {
        coeffs.resize(order + 1, F::zero());
        PSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &F {
        &self.coeffs[k]
    }

    pub fn constant_term(&self) -> &F {
        &self.coeffs[0]
    }

    pub fn scale(&self, c: &F) -> Self {
        PSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Multiply by `1 - c p^e`, the building block of every infinite product here.
    pub fn mul_one_minus(&self, c: &F, e: usize) -> Self {
        let mut out = self.coeffs.clone();
        if e == 0 {
            let f = F::one() - c.clone();
            for a in out.iter_mut() {
                *a = a.clone() * f.clone();
            }
        } else {
            for k in (e..out.len()).rev() {
                out[k] = out[k].clone() - c.clone() * self.coeffs[k - e].clone();
            }
        }
        PSeries { coeffs: out }
    }

    /// Valuation in `p`, or `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn exact_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.exact_string()).collect()
    }

    fn check_order(&self, rhs: &Self) {
        assert_eq!(self.order(), rhs.order(), "series of different truncation orders");
    }
}

impl<F: Scalar> fmt::Debug for PSeries<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})p")?,
                _ => write!(f, "({c})p^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(p^{})", self.order() + 1)
    }
}

impl<F: Scalar> Add for PSeries<F> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.check_order(&rhs);
        PSeries { coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<F: Scalar> Sub for PSeries<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.check_order(&rhs);
        PSeries { coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<F: Scalar> Neg for PSeries<F> {
    type Output = Self;
    fn neg(self) -> Self {
        PSeries { coeffs: self.coeffs.into_iter().map(|a| -a).collect() }
    }
}

impl<F: Scalar> Mul for PSeries<F> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.check_order(&rhs);
        let n = self.coeffs.len();
        let mut out = vec![F::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        PSeries { coeffs: out }
    }
}

impl<F: Scalar> Ring for PSeries<F> {
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn zero_like(&self) -> Self {
        Self::zero(self.order())
    }
    fn one_like(&self) -> Self {
        Self::one(self.order())
    }
    fn try_inv(&self) -> Option<Self> {
        let c0inv = self.coeffs[0].try_inv()?;
        let n = self.coeffs.len();
        let mut r = vec![F::zero(); n];
        r[0] = c0inv.clone();
        for k in 1..n {
            let mut acc = F::zero();
            for j in 1..=k {
                acc = acc + self.coeffs[j].clone() * r[k - j].clone();
            }
            r[k] = -(acc * c0inv.clone());
        }
        Some(PSeries { coeffs: r })
    }
    fn inv(&self) -> Result<Self> {
        self.try_inv().ok_or_else(|| Error::NotInvertible(format!("{self:?}")))
    }
}
