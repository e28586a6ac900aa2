//! The polynomial kernel `S(t)`, iterated residues at the special points and
//! everything computed from them: the residue scalar product, the Gram matrix
//! of the weights, the transition matrix to monomials and the determinant
//! closed forms.

use crate::error::{Error, Result};
use crate::exactnum::{Ring, Scalar};
use crate::linalg::{self, Matrix};
use crate::partitions::{self, binom, EvalPoint, Partition};
use crate::polyweights::{self, PolyParams, Variant};

/// Whether a factor sits in the numerator of the kernel (a pole of the
/// integrand) or in its denominator (a zero of the integrand).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Pole,
    Zero,
}

/// One factor of a factorized kernel, as seen by the residue engine.
///
/// Every factor depends on its lowest variable `var` and possibly on later
/// ones; it is examined at the step where `var` is the current variable and
/// all later variables are already substituted.
pub trait KernelFactor<B, V> {
    fn var(&self) -> usize;
    fn role(&self) -> Role;
    fn vanishes(&self, pt: &[B]) -> bool;
    fn value(&self, pt: &[B]) -> Result<V>;
    /// Residue of `(1/factor)·dt/t` in the current variable at the point.
    fn residue_weight(&self, pt: &[B]) -> Result<V>;
}

/// Kernel part of the iterated residue at `pt`, innermost variable last:
/// `Res … Res (1/K(t)) ∏ dt_a/t_a`. The full residue of `f g / K` is this
/// times `f(pt) g(pt)`.
pub fn kernel_residue<B, V, K>(factors: &[K], pt: &[B], one: &V) -> Result<V>
where
    V: Ring,
    K: KernelFactor<B, V>,
{
    let mut val = one.clone();
    for v in (0..pt.len()).rev() {
        let mut poles = 0;
        let mut zeros = 0;
        for f in factors.iter().filter(|f| f.var() == v) {
            let hits = f.vanishes(pt);
            match (f.role(), hits) {
                (Role::Pole, true) => {
                    poles += 1;
                    val = val * f.residue_weight(pt)?;
                }
                (Role::Pole, false) => val = val * f.value(pt)?.inv()?,
                (Role::Zero, true) => zeros += 1,
                (Role::Zero, false) => val = val * f.value(pt)?,
            }
        }
        if poles != 1 || zeros != 0 {
            return Err(Error::PoleOrder { step: v + 1, poles, zeros });
        }
    }
    Ok(val)
}

/// `M_κ`, the reciprocal of the kernel residue, as a direct product.
///
/// A second vanishing pole factor at one step (a double pole) makes the
/// product, and hence `M_κ`, exactly zero.
pub fn kernel_residue_inverse<B, V, K>(factors: &[K], pt: &[B], one: &V) -> Result<V>
where
    V: Ring,
    K: KernelFactor<B, V>,
{
    let mut val = one.clone();
    for v in (0..pt.len()).rev() {
        let mut cancelled = false;
        for f in factors.iter().filter(|f| f.var() == v) {
            let hits = f.vanishes(pt);
            match (f.role(), hits) {
                (Role::Pole, true) if !cancelled => {
                    cancelled = true;
                    val = val * f.residue_weight(pt)?.inv()?;
                }
                (Role::Pole, _) => val = val * f.value(pt)?,
                (Role::Zero, true) => {
                    return Err(Error::PoleOrder { step: v + 1, poles: usize::from(cancelled), zeros: 1 })
                }
                (Role::Zero, false) => val = val * f.value(pt)?.inv()?,
            }
        }
        if !cancelled {
            return Err(Error::PoleOrder { step: v + 1, poles: 0, zeros: 0 });
        }
    }
    Ok(val)
}

/// `coef·t_var + other_coef·t_other + constant`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFactor<F> {
    pub var: usize,
    pub coef: F,
    pub other: Option<(usize, F)>,
    pub constant: F,
    pub role: Role,
}

impl<F: Scalar> LinearFactor<F> {
    fn eval(&self, pt: &[F]) -> F {
        let mut v = self.coef.clone() * pt[self.var].clone() + self.constant.clone();
        if let Some((b, c)) = &self.other {
            v = v + c.clone() * pt[*b].clone();
        }
        v
    }
}

impl<F: Scalar> KernelFactor<F, F> for LinearFactor<F> {
    fn var(&self) -> usize {
        self.var
    }
    fn role(&self) -> Role {
        self.role
    }
    fn vanishes(&self, pt: &[F]) -> bool {
        self.eval(pt).is_zero()
    }
    fn value(&self, pt: &[F]) -> Result<F> {
        Ok(self.eval(pt))
    }
    fn residue_weight(&self, pt: &[F]) -> Result<F> {
        (self.coef.clone() * pt[self.var].clone()).inv()
    }
}

/// The kernel `S(t) = ∏_a ∏_m (t_a - x_m)(t_a - y_m) ∏_{a≠b} (t_a - η t_b)/(t_a - t_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizedKernel<F> {
    pub factors: Vec<LinearFactor<F>>,
}

impl<F: Scalar> FactorizedKernel<F> {
    pub fn new(ell: usize, params: &PolyParams<F>) -> Self {
        let mut factors = Vec::new();
        let lin = |var, c: F, other, d: F, role| LinearFactor { var, coef: c, other, constant: d, role };
        for a in 0..ell {
            for m in 0..params.n() {
                factors.push(lin(a, F::one(), None, -params.x[m].clone(), Role::Pole));
                factors.push(lin(a, F::one(), None, -params.y[m].clone(), Role::Pole));
            }
            for b in a + 1..ell {
                let eta = params.eta.clone();
                // (t_a - η t_b) and (t_b - η t_a), both seen as functions of t_a
                factors.push(lin(a, F::one(), Some((b, -eta.clone())), F::zero(), Role::Pole));
                factors.push(lin(a, -eta, Some((b, F::one())), F::zero(), Role::Pole));
                // (t_a - t_b)(t_b - t_a)
                factors.push(lin(a, F::one(), Some((b, -F::one())), F::zero(), Role::Zero));
                factors.push(lin(a, -F::one(), Some((b, F::one())), F::zero(), Role::Zero));
            }
        }
        FactorizedKernel { factors }
    }

    /// `S(t)` by the product formula.
    pub fn evaluate(&self, pt: &[F]) -> Result<F> {
        let mut v = F::one();
        for f in &self.factors {
            match f.role {
                Role::Pole => v = v * f.eval(pt),
                Role::Zero => v = v.div(&f.eval(pt))?,
            }
        }
        Ok(v)
    }

    pub fn residue(&self, pt: &[F]) -> Result<F> {
        kernel_residue(&self.factors, pt, &F::one())
    }

    pub fn residue_inverse(&self, pt: &[F]) -> Result<F> {
        kernel_residue_inverse(&self.factors, pt, &F::one())
    }
}

/// Iterated residue of `f g / S · ∏ dt/t` at the point.
pub fn iterated_residue<F: Scalar>(
    f: impl Fn(&[F]) -> Result<F>,
    g: impl Fn(&[F]) -> Result<F>,
    kernel: &FactorizedKernel<F>,
    pt: &EvalPoint<F>,
) -> Result<F> {
    let k = kernel.residue(&pt.coords)?;
    Ok(k * f(&pt.coords)? * g(&pt.coords)?)
}

/// The x▷ and y◁ residue sums of `fg/S`.
pub fn residue_sums<F: Scalar>(fg: impl Fn(&[F]) -> Result<F>, ell: usize, params: &PolyParams<F>) -> Result<(F, F)> {
    let kernel = FactorizedKernel::new(ell, params);
    let mut xs = F::zero();
    let mut ys = F::zero();
    for lam in partitions::enumerate(ell, params.n())? {
        let xp = partitions::x_point(&lam, &params.x, &params.eta)?;
        let yp = partitions::y_point(&lam, &params.y, &params.eta)?;
        xs = xs + kernel.residue(&xp.coords)? * fg(&xp.coords)?;
        ys = ys + kernel.residue(&yp.coords)? * fg(&yp.coords)?;
    }
    Ok((xs, ys))
}

fn sign<F: Scalar>(ell: usize) -> F {
    if ell.is_multiple_of(2) {
        F::one()
    } else {
        -F::one()
    }
}

/// `⟨f, g⟩_S` as the x▷ residue sum, after checking it against `(-1)^ℓ` times
/// the y◁ sum.
pub fn scalar_product_s<F: Scalar>(
    f: impl Fn(&[F]) -> Result<F>,
    g: impl Fn(&[F]) -> Result<F>,
    ell: usize,
    params: &PolyParams<F>,
) -> Result<F> {
    let (xs, ys) = residue_sums(|t| Ok(f(t)? * g(t)?), ell, params)?;
    if xs != sign::<F>(ell) * ys {
        return Err(Error::Internal("x and y residue sums disagree; inputs are not admissible".into()));
    }
    Ok(xs)
}

/// Weights and kernel residues tabulated at the special points of one family.
pub struct PointTables<F> {
    pub parts: Vec<Partition>,
    pub xpts: Vec<EvalPoint<F>>,
    pub ypts: Vec<EvalPoint<F>>,
    /// `[κ]` kernel residue at x▷κ (that is `M_κ^{-1}`).
    pub xres: Vec<F>,
    pub yres: Vec<F>,
    /// `[λ][κ]` values `P_λ(x▷κ)`, `P'_λ(x▷κ)` and their y◁ analogues.
    pub p_x: Matrix<F>,
    pub pp_x: Matrix<F>,
    pub p_y: Matrix<F>,
    pub pp_y: Matrix<F>,
}

impl<F: Scalar> PointTables<F> {
    pub fn new(ell: usize, params: &PolyParams<F>) -> Result<Self> {
        let parts = partitions::enumerate(ell, params.n())?;
        let kernel = FactorizedKernel::new(ell, params);
        let xpts: Vec<_> =
            parts.iter().map(|l| partitions::x_point(l, &params.x, &params.eta)).collect::<Result<_>>()?;
        let ypts: Vec<_> =
            parts.iter().map(|l| partitions::y_point(l, &params.y, &params.eta)).collect::<Result<_>>()?;
        let xres = xpts.iter().map(|p| kernel.residue(&p.coords)).collect::<Result<_>>()?;
        let yres = ypts.iter().map(|p| kernel.residue(&p.coords)).collect::<Result<_>>()?;
        let table = |pts: &[EvalPoint<F>], v| -> Result<Matrix<F>> {
            parts.iter().map(|l| pts.iter().map(|p| polyweights::weight(l, &p.coords, params, v)).collect()).collect()
        };
        Ok(PointTables {
            p_x: table(&xpts, Variant::Plain)?,
            pp_x: table(&xpts, Variant::Primed)?,
            p_y: table(&ypts, Variant::Plain)?,
            pp_y: table(&ypts, Variant::Primed)?,
            parts,
            xpts,
            ypts,
            xres,
            yres,
        })
    }
}

/// Gram matrices `[⟨P'_λ, P_μ⟩]` from the x▷ and y◁ sides (the latter
/// already multiplied by `(-1)^ℓ`).
pub fn gram_pp<F: Scalar>(ell: usize, params: &PolyParams<F>) -> Result<(Matrix<F>, Matrix<F>)> {
    let tb = PointTables::new(ell, params)?;
    let r = tb.parts.len();
    let sg = sign::<F>(ell);
    let mut gx = vec![vec![F::zero(); r]; r];
    let mut gy = vec![vec![F::zero(); r]; r];
    for l in 0..r {
        for m in 0..r {
            for k in 0..r {
                gx[l][m] = gx[l][m].clone() + tb.xres[k].clone() * tb.pp_x[l][k].clone() * tb.p_x[m][k].clone();
                gy[l][m] = gy[l][m].clone() + tb.yres[k].clone() * tb.pp_y[l][k].clone() * tb.p_y[m][k].clone();
            }
            gy[l][m] = sg.clone() * gy[l][m].clone();
        }
    }
    Ok((gx, gy))
}

/// The transition data of `P_λ = Σ_μ A_{λμ} Q_μ`.
pub struct Transition<F> {
    pub parts: Vec<Partition>,
    /// `[λ][μ]`.
    pub a: Matrix<F>,
    /// `[κ][μ] = Q_μ(x▷κ)`.
    pub q: Matrix<F>,
    /// Inverse of `q`.
    pub b: Matrix<F>,
}

pub fn transition_matrix<F: Scalar>(ell: usize, params: &PolyParams<F>) -> Result<Transition<F>> {
    let parts = partitions::enumerate(ell, params.n())?;
    let xpts: Vec<_> = parts.iter().map(|l| partitions::x_point(l, &params.x, &params.eta)).collect::<Result<_>>()?;
    let q: Matrix<F> = xpts
        .iter()
        .map(|p| parts.iter().map(|mu| polyweights::q_monomial(mu, &p.coords)).collect())
        .collect::<Result<_>>()?;
    // rhs[κ][λ] = P_λ(x▷κ); solving q · Aᵀ = rhs
    let rhs: Matrix<F> = xpts
        .iter()
        .map(|p| parts.iter().map(|l| polyweights::weight(l, &p.coords, params, Variant::Plain)).collect())
        .collect::<Result<_>>()?;
    let at = linalg::solve(&q, &rhs)?;
    let b = linalg::inverse(&q)?;
    Ok(Transition { parts, a: linalg::transpose(&at), q, b })
}

/// `Σ_{κ,λ} M_κ^{-1} Q_μ(x▷κ) P'_λ(x▷κ) N_λ A_{λν}`, which should be the identity.
pub fn mn_matrix<F: Scalar>(ell: usize, params: &PolyParams<F>, mutate: bool) -> Result<Matrix<F>> {
    let tr = transition_matrix(ell, params)?;
    let tb = PointTables::new(ell, params)?;
    let r = tr.parts.len();
    let mut norms: Vec<F> = tr.parts.iter().map(|l| polyweights::norm_n(l, params)).collect::<Result<_>>()?;
    if mutate {
        norms[0] = norms[0].clone() + F::one();
    }
    let mut out = vec![vec![F::zero(); r]; r];
    for mu in 0..r {
        for nu in 0..r {
            let mut acc = F::zero();
            for k in 0..r {
                for l in 0..r {
                    acc = acc
                        + tb.xres[k].clone()
                            * tr.q[k][mu].clone()
                            * tb.pp_x[l][k].clone()
                            * norms[l].clone()
                            * tr.a[l][nu].clone();
                }
            }
            out[mu][nu] = acc;
        }
    }
    Ok(out)
}

/// `M_κ` at `x▷κ`.
pub fn m_kappa<F: Scalar>(kap: &Partition, params: &PolyParams<F>) -> Result<F> {
    let kernel = FactorizedKernel::new(kap.len(), params);
    let pt = partitions::x_point(kap, &params.x, &params.eta)?;
    kernel.residue_inverse(&pt.coords)
}

/// `D(n, ℓ, s) = Σ_{r >= 0, 2r <= ℓ-|s|-1} C(n+ℓ-|s|-2r-3, n-2)`.
pub fn exponent_big_d(n: usize, ell: usize, s: i64) -> u64 {
    let (n, ell) = (n as i64, ell as i64);
    let mut total = 0;
    let mut r = 0;
    while 2 * r < ell - s.abs() {
        total += binom(n + ell - s.abs() - 2 * r - 3, n - 2);
        r += 1;
    }
    total
}

/// Closed form of `det[Q_λ(x▷μ)]`.
pub fn det_q_closed<F: Scalar>(ell: usize, params: &PolyParams<F>) -> Result<F> {
    let n = params.n();
    let (ni, li) = (n as i64, ell as i64);
    let eta = &params.eta;
    let mut r = eta.powi(-(ni * (ni + 1) / 2) * binom(ni + li - 1, ni + 1) as i64)?;
    let ex = binom(ni + li - 1, ni) as i64;
    for xm in &params.x {
        r = r * xm.powi(ex)?;
    }
    for s in 1 - li..li {
        let d = exponent_big_d(n, ell, s) as i64;
        if d == 0 {
            continue;
        }
        let es = eta.powi(s)?;
        for j in 0..n {
            for k in j + 1..n {
                r = r * (es.clone() * params.x[k].clone() - params.x[j].clone()).powi(d)?;
            }
        }
    }
    Ok(r)
}

/// Closed form of `det[A_{λμ}]`.
pub fn det_a_closed<F: Scalar>(ell: usize, params: &PolyParams<F>) -> Result<F> {
    let n = params.n();
    let (ni, li) = (n as i64, ell as i64);
    let mut r = F::one();
    for s in 0..li {
        let e = binom(ni + li - s - 2, ni - 1) as i64;
        let es = params.eta.powi(s)?;
        for j in 0..n {
            for k in j + 1..n {
                r = r * (es.clone() * params.y[j].clone() - params.x[k].clone()).powi(e)?;
            }
        }
    }
    Ok(r)
}

/// `det[Q_λ(x▷μ)]` computed from the matrix.
pub fn det_q<F: Scalar>(ell: usize, params: &PolyParams<F>) -> Result<F> {
    let parts = partitions::enumerate(ell, params.n())?;
    let m: Matrix<F> = parts
        .iter()
        .map(|l| {
            parts
                .iter()
                .map(|mu| polyweights::q_monomial(l, &partitions::x_point(mu, &params.x, &params.eta)?.coords))
                .collect()
        })
        .collect::<Result<_>>()?;
    linalg::det(&m)
}

/// `det[A_{λμ}]` computed from the solved transition matrix.
pub fn det_a<F: Scalar>(ell: usize, params: &PolyParams<F>) -> Result<F> {
    linalg::det(&transition_matrix(ell, params)?.a)
}

/// Outcome of one admissible monomial in the ResI sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct ResiEntry<F> {
    pub exponents: Vec<usize>,
    pub x_sum: F,
    pub y_sum: F,
}

impl<F: Scalar> ResiEntry<F> {
    /// `x▷ - (-1)^ℓ y◁`.
    pub fn defect(&self) -> F {
        self.x_sum.clone() - sign::<F>(self.exponents.len()) * self.y_sum.clone()
    }
}

/// Exponent multisets (weakly decreasing) of length `ell` with entries in `lo..=hi`.
pub fn exponent_multisets(ell: usize, lo: usize, hi: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(left: usize, lo: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=cap {
            cur.push(v);
            go(left - 1, lo, v, cur, out);
            cur.pop();
        }
    }
    if lo <= hi {
        go(ell, lo, hi, &mut cur, &mut out);
    }
    out
}

/// Residue sums of every symmetrized monomial `fg = Σ_σ t^{σ(e)}` with all
/// exponents in `1..=2n-1`, the admissible range (divisible by every `t_a`,
/// degree below `2n` in each variable).
pub fn resi_sweep<F: Scalar>(ell: usize, params: &PolyParams<F>) -> Result<Vec<ResiEntry<F>>> {
    let n = params.n();
    exponent_multisets(ell, 1, 2 * n - 1)
        .into_iter()
        .map(|e| {
            let (x_sum, y_sum) = residue_sums(|t| polyweights::monomial_symmetric(&e, t), ell, params)?;
            Ok(ResiEntry { exponents: e, x_sum, y_sum })
        })
        .collect()
}
