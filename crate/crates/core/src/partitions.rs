//! The partition families indexing weights, basis vectors and residue points.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// Weakly decreasing tuple with entries in `1..=n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    pub fn new(parts: Vec<usize>, n: usize) -> Result<Self> {
        if parts.iter().any(|&p| p == 0 || p > n) {
            return Err(Error::Usage(format!("partition entries must lie in 1..={n}: {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Usage(format!("partition must be weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts, n })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `ω_k` for `k = 1..=n`, stored at index `k-1`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut w = vec![0; self.n];
        for &p in &self.parts {
            w[p - 1] += 1;
        }
        w
    }

    pub fn in_window(&self, i: usize, j: usize) -> bool {
        self.parts.iter().all(|&p| i <= p && p <= j)
    }

    /// Embedding `λ ↦ λ` of the `n-1` family into the `n` family.
    pub fn embed_same(&self) -> Partition {
        Partition { parts: self.parts.clone(), n: self.n + 1 }
    }

    /// Embedding `λ ↦ (λ_1+1, …, λ_ℓ+1)`.
    pub fn embed_shifted(&self) -> Partition {
        Partition { parts: self.parts.iter().map(|p| p + 1).collect(), n: self.n + 1 }
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// All partitions of length `ell` with entries in `1..=n`, in lexicographic
/// ascending order.
pub fn enumerate(ell: usize, n: usize) -> Result<Vec<Partition>> {
    if n == 0 {
        return Err(Error::Usage("n must be at least 1".into()));
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(ell);
    fill(ell, 1, n, &mut cur, &mut out);
    Ok(out.into_iter().map(|parts| Partition { parts, n }).collect())
}

fn fill(left: usize, lo: usize, hi: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
        out.push(cur.clone());
        return;
    }
    // The first entry is the largest; walking it upward and recursing with it
    // as the new cap yields lexicographic ascending order.
    let cap = cur.last().copied().unwrap_or(hi);
    for v in lo..=cap {
        cur.push(v);
        fill(left - 1, lo, hi, cur, out);
        cur.pop();
    }
}

/// Partitions with `j >= λ_1 >= … >= λ_ℓ >= i`.
pub fn enumerate_window(ell: usize, n: usize, i: usize, j: usize) -> Result<Vec<Partition>> {
    if !(1 <= i && i <= j && j <= n) {
        return Err(Error::Usage(format!("window requires 1 <= i <= j <= n, got i={i}, j={j}, n={n}")));
    }
    Ok(enumerate(ell, n)?.into_iter().filter(|p| p.in_window(i, j)).collect())
}

/// Binomial coefficient, zero whenever `k < 0`, `top < 0` or `k > top`.
pub fn binom(top: i64, k: i64) -> u64 {
    if k < 0 || top < 0 || k > top {
        return 0;
    }
    let k = k.min(top - k);
    let mut r: u64 = 1;
    for i in 0..k {
        r = r * (top - i) as u64 / (i + 1) as u64;
    }
    r
}

/// Outcome of the componentwise comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl Comparison {
    /// `λ >= μ` holds.
    pub fn ge(self) -> bool {
        matches!(self, Comparison::Greater | Comparison::Equal)
    }

    /// `λ <= μ` holds.
    pub fn le(self) -> bool {
        matches!(self, Comparison::Less | Comparison::Equal)
    }
}

/// Componentwise order: `λ >= μ` iff `λ_a >= μ_a` for every `a`.
pub fn compare(lam: &Partition, mu: &Partition) -> Result<Comparison> {
    if lam.len() != mu.len() {
        return Err(Error::Usage("cannot compare partitions of different lengths".into()));
    }
    let ge = lam.parts.iter().zip(&mu.parts).all(|(a, b)| a >= b);
    let le = lam.parts.iter().zip(&mu.parts).all(|(a, b)| a <= b);
    Ok(match (ge, le) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Greater,
        (false, true) => Comparison::Less,
        (false, false) => Comparison::Incomparable,
    })
}

/// The constant partition `(j, …, j)` of length `ell`.
pub fn kappa(ell: usize, j: usize, n: usize) -> Result<Partition> {
    Partition::new(vec![j; ell], n)
}

/// Which side a special point was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointKind {
    X,
    Y,
}

/// A special evaluation point together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalPoint<F> {
    pub coords: Vec<F>,
    pub kind: PointKind,
    pub source: Partition,
}

/// `x▷λ`: blocks for `m` ascending, each `η^{1-ω_m}x_m, …, η^{-1}x_m, x_m`.
pub fn x_point<F: Scalar>(lam: &Partition, x: &[F], eta: &F) -> Result<EvalPoint<F>> {
    let etainv = eta.inv()?;
    let coords = blocks(lam, x, &etainv)?;
    Ok(EvalPoint { coords, kind: PointKind::X, source: lam.clone() })
}

/// `y◁λ`: blocks for `m` ascending, each `η^{ω_m-1}y_m, …, η y_m, y_m`.
pub fn y_point<F: Scalar>(lam: &Partition, y: &[F], eta: &F) -> Result<EvalPoint<F>> {
    let coords = blocks(lam, y, eta)?;
    Ok(EvalPoint { coords, kind: PointKind::Y, source: lam.clone() })
}

fn blocks<F: Scalar>(lam: &Partition, base: &[F], step: &F) -> Result<Vec<F>> {
    if base.len() != lam.n {
        return Err(Error::Usage(format!("expected {} parameters, got {}", lam.n, base.len())));
    }
    let mut out = Vec::with_capacity(lam.len());
    for (m, &w) in lam.multiplicities().iter().enumerate() {
        for e in (0..w).rev() {
            out.push(step.powi(e as i64)? * base[m].clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::Rational;

    fn p(parts: &[usize], n: usize) -> Partition {
        Partition::new(parts.to_vec(), n).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate(2, 2).unwrap(), vec![p(&[1, 1], 2), p(&[2, 1], 2), p(&[2, 2], 2)]);
        assert_eq!(enumerate(1, 3).unwrap(), vec![p(&[1], 3), p(&[2], 3), p(&[3], 3)]);
        assert_eq!(enumerate(0, 4).unwrap(), vec![p(&[], 4)]);
        assert!(enumerate(2, 0).is_err());
    }

    #[test]
    fn multiplicities_examples() {
        assert_eq!(p(&[2, 2, 1], 3).multiplicities(), vec![1, 2, 0]);
        assert_eq!(p(&[], 3).multiplicities(), vec![0, 0, 0]);
        assert_eq!(p(&[3, 3, 3], 3).multiplicities(), vec![0, 0, 3]);
    }

    #[test]
    fn comparisons() {
        assert_eq!(compare(&p(&[2, 1], 3), &p(&[1, 1], 3)).unwrap(), Comparison::Greater);
        assert_eq!(compare(&p(&[3, 1], 3), &p(&[2, 2], 3)).unwrap(), Comparison::Incomparable);
        assert_eq!(compare(&p(&[2, 1], 3), &p(&[2, 1], 3)).unwrap(), Comparison::Equal);
        assert!(compare(&p(&[2, 1], 3), &p(&[2], 3)).is_err());
    }

    #[test]
    fn special_points() {
        let x = [Rational::new(3, 1), Rational::new(5, 1)];
        let y = [Rational::new(7, 1), Rational::new(11, 1)];
        let eta = Rational::new(2, 1);
        assert_eq!(x_point(&p(&[2, 1], 2), &x, &eta).unwrap().coords, x.to_vec());
        assert_eq!(x_point(&p(&[2, 2], 2), &x, &eta).unwrap().coords, vec![Rational::new(5, 2), Rational::new(5, 1)]);
        let y1 = [y[0].clone()];
        assert_eq!(y_point(&p(&[1, 1], 1), &y1, &eta).unwrap().coords, vec![Rational::new(14, 1), Rational::new(7, 1)]);
        let k = kappa(2, 2, 2).unwrap();
        assert_eq!(x_point(&k, &x, &eta).unwrap().coords, vec![Rational::new(5, 2), Rational::new(5, 1)]);
        assert_eq!(kappa(3, 2, 3).unwrap(), p(&[2, 2, 2], 3));
        assert!(kappa(0, 1, 3).unwrap().is_empty());
    }

    #[test]
    fn window_filters() {
        let w = enumerate_window(2, 3, 2, 3).unwrap();
        assert_eq!(w, vec![p(&[2, 2], 3), p(&[3, 2], 3), p(&[3, 3], 3)]);
        assert!(enumerate_window(2, 3, 3, 2).is_err());
    }
}
