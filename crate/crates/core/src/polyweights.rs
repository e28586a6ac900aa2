//! Polynomial weight functions `P_λ`, `P'_λ`, monomial symmetric `Q_λ`,
//! norms `N_λ`, the coefficients `c_λ^{(i,j)}` and the identity sums built
//! from them.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactnum::{Ring, Scalar};
use crate::partitions::{self, Partition};

/// Ground parameters `x`, `y`, `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyParams<F> {
    pub x: Vec<F>,
    pub y: Vec<F>,
    pub eta: F,
}

impl<F: Scalar> PolyParams<F> {
    pub fn new(x: Vec<F>, y: Vec<F>, eta: F) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::Usage("x and y must have the same positive length".into()));
        }
        Ok(PolyParams { x, y, eta })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// `(y, x, η^{-1})`, the parameters of the dual weight.
    pub fn dual(&self) -> Result<Self> {
        Ok(PolyParams { x: self.y.clone(), y: self.x.clone(), eta: self.eta.inv()? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Plain,
    Primed,
}

/// `X_m(u)` (plain) or `X'_m(u)` (primed), `m` counted from 1.
pub fn x_factor<F: Scalar>(u: &F, m: usize, params: &PolyParams<F>, variant: Variant) -> F {
    let (before, after) = match variant {
        Variant::Plain => (&params.y, &params.x),
        Variant::Primed => (&params.x, &params.y),
    };
    let mut r = match variant {
        Variant::Plain => u.clone(),
        Variant::Primed => F::one(),
    };
    for v in &before[..m - 1] {
        r = r * (u.clone() - v.clone());
    }
    for v in &after[m..] {
        r = r * (u.clone() - v.clone());
    }
    r
}

/// `r_λ(η) = ∏_m ∏_{s=1}^{ω_m} (1-η)/(1-η^s)`.
pub fn r_lambda<F: Scalar>(lam: &Partition, eta: &F) -> Result<F> {
    let mut r = F::one();
    let one_minus = F::one() - eta.clone();
    for w in lam.multiplicities() {
        for s in 1..=w {
            r = r * one_minus.div(&(F::one() - eta.powi(s as i64)?))?;
        }
    }
    Ok(r)
}

/// Pairwise interaction table: `(t_a - η t_b)/(t_a - t_b)` (plain) or
/// `(η t_a - t_b)/(t_a - t_b)` (primed), indexed `[a][b]`.
fn pair_table<F: Scalar>(t: &[F], eta: &F, variant: Variant) -> Result<Vec<Vec<F>>> {
    let l = t.len();
    let mut tab = vec![vec![F::one(); l]; l];
    for a in 0..l {
        for b in 0..l {
            if a == b {
                continue;
            }
            let den = t[a].clone() - t[b].clone();
            if den.is_zero() {
                return Err(Error::Degenerate(format!("coincident coordinates t_{} = t_{}", a + 1, b + 1)));
            }
            let num = match variant {
                Variant::Plain => t[a].clone() - eta.clone() * t[b].clone(),
                Variant::Primed => eta.clone() * t[a].clone() - t[b].clone(),
            };
            tab[a][b] = num.div(&den)?;
        }
    }
    Ok(tab)
}

/// Sum over `σ ∈ S_ℓ` of `∏_a single[σ_a][a] · ∏_{a<b} pair[σ_a][σ_b]`.
///
/// `single[v][a]` is the factor contributed by variable `v` in position `a`.
pub(crate) fn symmetrize<R: Ring>(single: &[Vec<R>], pair: &[Vec<R>], one: &R) -> R {
    let l = single.len();
    let mut total = one.zero_like();
    for sigma in (0..l).permutations(l) {
        let mut term = one.clone();
        for (a, &v) in sigma.iter().enumerate() {
            term = term * single[v][a].clone();
        }
        for a in 0..l {
            for b in a + 1..l {
                term = term * pair[sigma[a]][sigma[b]].clone();
            }
        }
        total = total + term;
    }
    total
}

fn check_len<F>(lam: &Partition, t: &[F], params: &PolyParams<F>) -> Result<()> {
    if lam.len() != t.len() {
        return Err(Error::Usage(format!("partition has length {} but {} variables were given", lam.len(), t.len())));
    }
    if lam.n() != params.x.len() {
        return Err(Error::Usage(format!("partition bound {} differs from n = {}", lam.n(), params.x.len())));
    }
    Ok(())
}

/// `P_λ(t)` or `P'_λ(t)`, including the `r_λ(η)` prefactor, by full symmetrization.
pub fn weight<F: Scalar>(lam: &Partition, t: &[F], params: &PolyParams<F>, variant: Variant) -> Result<F> {
    check_len(lam, t, params)?;
    let single: Vec<Vec<F>> =
        t.iter().map(|u| lam.parts().iter().map(|&m| x_factor(u, m, params, variant)).collect()).collect();
    let pair = pair_table(t, &params.eta, variant)?;
    Ok(r_lambda(lam, &params.eta)? * symmetrize(&single, &pair, &F::one()))
}

/// Only the identity-permutation term of the weight, times `r_λ(η)`.
///
/// Coordinate `t_a` is paired with `λ_a`, so a special point must list its
/// blocks in descending `m` for this to equal the full sum there.
pub fn weight_identity_term<F: Scalar>(
    lam: &Partition,
    t: &[F],
    params: &PolyParams<F>,
    variant: Variant,
) -> Result<F> {
    check_len(lam, t, params)?;
    let pair = pair_table(t, &params.eta, variant)?;
    let mut term = r_lambda(lam, &params.eta)?;
    for (a, &m) in lam.parts().iter().enumerate() {
        term = term * x_factor(&t[a], m, params, variant);
    }
    for a in 0..t.len() {
        for b in a + 1..t.len() {
            term = term * pair[a][b].clone();
        }
    }
    Ok(term)
}

/// Symmetrized monomial `Σ_σ ∏_a t_{σ_a}^{e_a}` divided by the multiplicity factorials.
pub fn monomial_symmetric<F: Scalar>(exps: &[usize], t: &[F]) -> Result<F> {
    if exps.len() != t.len() {
        return Err(Error::Usage("exponent list and variables differ in length".into()));
    }
    let l = t.len();
    let single: Vec<Vec<F>> =
        t.iter().map(|u| exps.iter().map(|&e| u.powi(e as i64)).collect::<Result<Vec<F>>>()).collect::<Result<_>>()?;
    let pair = vec![vec![F::one(); l]; l];
    let mut norm = 1i64;
    for (_, c) in exps.iter().counts() {
        norm *= (1..=c as i64).product::<i64>();
    }
    symmetrize(&single, &pair, &F::one()).div(&F::from_i64(norm))
}

/// `Q_λ(t)`.
pub fn q_monomial<F: Scalar>(lam: &Partition, t: &[F]) -> Result<F> {
    monomial_symmetric(lam.parts(), t)
}

/// `N_λ = ∏_m ∏_{s=1}^{ω_m} (1-η^s)(x_m - η^{s-1} y_m)/(1-η)`.
pub fn norm_n<F: Scalar>(lam: &Partition, params: &PolyParams<F>) -> Result<F> {
    let eta = &params.eta;
    let one_minus = F::one() - eta.clone();
    let mut r = F::one();
    for (m, w) in lam.multiplicities().into_iter().enumerate() {
        for s in 1..=w {
            let num = (F::one() - eta.powi(s as i64)?)
                * (params.x[m].clone() - eta.powi(s as i64 - 1)? * params.y[m].clone());
            r = r * num.div(&one_minus)?;
        }
    }
    Ok(r)
}

/// `c_λ^{(i,j)}` for `λ` in the window `j >= λ_1 >= … >= λ_ℓ >= i`.
pub fn c_coeff<F: Scalar>(lam: &Partition, i: usize, j: usize, params: &PolyParams<F>) -> Result<F> {
    if !(i < j && j <= params.n()) || !lam.in_window(i, j) {
        return Err(Error::Usage(format!("partition {lam} is not in the window [{i}, {j}]")));
    }
    let (x, y, eta) = (&params.x, &params.y, &params.eta);
    let w = lam.multiplicities();
    let l = lam.len() as i64;
    let wi = w[i - 1] as i64;
    let wj = w[j - 1] as i64;
    let mut r = if wi % 2 == 0 { F::one() } else { -F::one() };
    r = r * eta.powi(wj * (wj - 1) / 2)?;
    for k in i + 1..j {
        for s in 0..w[k - 1] {
            r = r * (x[k - 1].clone() - eta.powi(s as i64)? * y[k - 1].clone());
        }
    }
    for (a0, &la) in lam.parts().iter().enumerate() {
        let shifted = eta.powi(l - (a0 as i64 + 1))? * y[i - 1].clone();
        for k in i + 1..la {
            r = r * (shifted.clone() - x[k - 1].clone());
        }
        for m in la + 1..j {
            r = r * (shifted.clone() - y[m - 1].clone());
        }
    }
    Ok(r)
}

/// Left side of Jing's identity at the point `t`.
///
/// `mutate` doubles the `k = 0` coefficient, a deliberate falsification.
pub fn jing_sum<F: Scalar>(t: &[F], eta: &F, mutate: bool) -> Result<F> {
    let l = t.len();
    let pair = pair_table(t, eta, Variant::Plain)?;
    let shift = eta.powi(l as i64 - 1)?;
    let eta_l = eta.powi(l as i64)?;
    let mut total = F::zero();
    let mut coef = F::one();
    for k in 0..=l {
        if k > 0 {
            let s = (k - 1) as i64;
            coef = coef * (eta_l.clone() - eta.powi(s)?).div(&(F::one() - eta.powi(s + 1)?))?;
        }
        // position a < k gets (t - 1), the rest (t - η^{ℓ-1})
        let single: Vec<Vec<F>> = t
            .iter()
            .map(|u| (0..l).map(|a| if a < k { u.clone() - F::one() } else { u.clone() - shift.clone() }).collect())
            .collect();
        let mut term = coef.clone() * symmetrize(&single, &pair, &F::one());
        if mutate && k == 0 {
            term = term * F::from_i64(2);
        }
        total = total + term;
    }
    Ok(total)
}

/// `Σ_{λ in window} c_λ^{(i,j)} P_λ(t)`.
pub fn id1_sum<F: Scalar>(i: usize, j: usize, t: &[F], params: &PolyParams<F>, mutate: bool) -> Result<F> {
    let window = partitions::enumerate_window(t.len(), params.n(), i, j)?;
    let mut total = F::zero();
    for (k, lam) in window.iter().enumerate() {
        let mut c = c_coeff(lam, i, j, params)?;
        if mutate && k == 0 {
            c = c * F::from_i64(2);
        }
        total = total + c * weight(lam, t, params, Variant::Plain)?;
    }
    Ok(total)
}

/// `Σ_λ P'_λ(x▷κ^{(j)}) N_λ P_λ(t)`. `mutate` adds 1 to `N_κ`.
pub fn id2_sum<F: Scalar>(j: usize, t: &[F], params: &PolyParams<F>, mutate: bool) -> Result<F> {
    let l = t.len();
    let kap = partitions::kappa(l, j, params.n())?;
    let pt = partitions::x_point(&kap, &params.x, &params.eta)?;
    let mut total = F::zero();
    for lam in &partitions::enumerate(l, params.n())? {
        let mut nl = norm_n(lam, params)?;
        // P'_κ(x▷κ) is never zero, so perturbing N_κ always shows
        if mutate && *lam == kap {
            nl = nl + F::one();
        }
        total =
            total + weight(lam, &pt.coords, params, Variant::Primed)? * nl * weight(lam, t, params, Variant::Plain)?;
    }
    Ok(total)
}

/// Duality prefactor `η^{ℓ(ℓ-1)/2 - Σ ω(ω-1)/2}`.
pub fn duality_exponent(lam: &Partition) -> i64 {
    let l = lam.len() as i64;
    let s: i64 = lam.multiplicities().iter().map(|&w| (w * w.saturating_sub(1) / 2) as i64).sum();
    l * (l - 1) / 2 - s
}
