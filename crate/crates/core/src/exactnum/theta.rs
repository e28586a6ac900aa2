use super::scalar::{Ring, Scalar};
use super::series::PSeries;
use crate::error::{Error, Result};

/// `(u; p^e)_∞` truncated to order `order`.
pub fn pochhammer<F: Scalar>(u: &F, e: usize, order: usize) -> PSeries<F> {
    assert!(e > 0, "nome exponent must be positive");
    let mut r = PSeries::one(order);
    let mut s = 0;
    while s == 0 || e * s <= order {
        r = r.mul_one_minus(u, e * s);
        s += 1;
    }
    r
}

/// `(u; p^e)_∞` for a series argument.
pub fn pochhammer_series<F: Scalar>(u: &PSeries<F>, e: usize) -> PSeries<F> {
    assert!(e > 0, "nome exponent must be positive");
    let order = u.order();
    let one = PSeries::one(order);
    let mut r = one.clone();
    let mut s = 0;
    while s == 0 || e * s <= order {
        let shifted = PSeries::monomial(F::one(), e * s, order) * u.clone();
        r = r * (one.clone() - shifted);
        s += 1;
    }
    r
}

/// `(p^e; p^e)_∞`.
pub fn euler<F: Scalar>(e: usize, order: usize) -> PSeries<F> {
    let mut r = PSeries::one(order);
    let mut s = 1;
    while e * s <= order {
        r = r.mul_one_minus(&F::one(), e * s);
        s += 1;
    }
    r
}

/// `θ(c·p^shift; p^e)` with `0 <= shift <= e`.
///
/// The monomial form covers both plain scalar arguments and the shifted
/// arguments of the one-variable basis, where the constant term is zero but
/// `p^e / u` still expands.
pub fn theta_monomial<F: Scalar>(c: &F, shift: usize, e: usize, order: usize) -> Result<PSeries<F>> {
    assert!(e > 0, "nome exponent must be positive");
    if shift > e {
        return Err(Error::Degenerate(format!("theta argument shift {shift} exceeds nome exponent {e}")));
    }
    let cinv = c.try_inv().ok_or_else(|| Error::NotInvertible("theta argument with zero constant term".into()))?;
    let mut r = PSeries::one(order);
    let mut s = 0;
    while s == 0 || shift + e * s <= order {
        r = r.mul_one_minus(c, shift + e * s);
        s += 1;
    }
    let mut s = 0;
    while e * (s + 1) - shift <= order {
        r = r.mul_one_minus(&cinv, e * (s + 1) - shift);
        s += 1;
    }
    Ok(r * euler(e, order))
}

/// `θ(u; p^e) = (u; p^e)_∞ (p^e/u; p^e)_∞ (p^e; p^e)_∞`.
pub fn theta<F: Scalar>(u: &F, e: usize, order: usize) -> Result<PSeries<F>> {
    theta_monomial(u, 0, e, order)
}

/// `θ(u; p^e)` for a series argument with invertible constant term.
pub fn theta_series<F: Scalar>(u: &PSeries<F>, e: usize) -> Result<PSeries<F>> {
    let order = u.order();
    let uinv = u.inv()?;
    let mut r = pochhammer_series(u, e);
    let one = PSeries::one(order);
    let mut s = 0;
    while e * (s + 1) <= order {
        let t = PSeries::monomial(F::one(), e * (s + 1), order) * uinv.clone();
        r = r * (one.clone() - t);
        s += 1;
    }
    Ok(r * euler(e, order))
}

/// `θ(u)/(1-u)` with the vanishing factor removed before expansion.
///
/// At `u = 1` this is `(p;p)_∞^3`, the residue constant of the theta kernel.
pub fn theta_reduced<F: Scalar>(u: &F, order: usize) -> Result<PSeries<F>> {
    let uinv = u.try_inv().ok_or_else(|| Error::NotInvertible("theta_reduced at u = 0".into()))?;
    let mut r = PSeries::one(order);
    for s in 1..=order {
        r = r.mul_one_minus(u, s);
    }
    for s in 1..=order {
        r = r.mul_one_minus(&uinv, s);
    }
    Ok(r * euler(1, order))
}
