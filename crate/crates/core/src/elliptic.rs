//! Elliptic weight functions in the nome-truncated series ring: `Ξ_λ`, `Ξ'_λ`,
//! the coefficients `C_λ^{(i,j)}` and norms `D_λ`, the theta kernel `Ω` with
//! its residues, the `ϑ` basis and the determinant closed forms.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactnum::{euler, theta, theta_monomial, theta_reduced, PSeries, Ring, Scalar};
use crate::linalg::{self, Matrix};
use crate::partitions::{self, binom, EvalPoint, Partition};
use crate::polyweights::{symmetrize, Variant};
use crate::residues::{exponent_big_d, kernel_residue, KernelFactor, Role};

pub type SeriesMatrix<F> = Matrix<PSeries<F>>;

#[derive(Debug, Clone, PartialEq)]
pub struct EllParams<F> {
    pub x: Vec<F>,
    pub y: Vec<F>,
    pub eta: F,
    pub alpha: F,
    /// Truncation order `K`: series are kept modulo `p^{K+1}`.
    pub order: usize,
}

impl<F: Scalar> EllParams<F> {
    pub fn new(x: Vec<F>, y: Vec<F>, eta: F, alpha: F, order: usize) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::Usage(format!("need equally many x and y, got {} and {}", x.len(), y.len())));
        }
        Ok(EllParams { x, y, eta, alpha, order })
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Parameters `(y, x, η^{-1}, α^{-1})` of the dual family.
    pub fn dual(&self) -> Result<Self> {
        Ok(EllParams {
            x: self.y.clone(),
            y: self.x.clone(),
            eta: self.eta.inv()?,
            alpha: self.alpha.inv()?,
            order: self.order,
        })
    }

    /// `θ(u; p)` at this truncation order.
    pub fn th(&self, u: &F) -> Result<PSeries<F>> {
        theta(u, 1, self.order)
    }

    fn one(&self) -> PSeries<F> {
        PSeries::one(self.order)
    }

    fn ratio(&self, m: usize) -> Result<F> {
        self.x[m].div(&self.y[m])
    }

    /// `α_m = α ∏_{j<m} x_j/y_j` for 1-based `m`, applied to a shifted `α`.
    pub fn alpha_m(&self, alpha: &F, m: usize) -> Result<F> {
        let mut r = alpha.clone();
        for j in 0..m - 1 {
            r = r * self.ratio(j)?;
        }
        Ok(r)
    }

    /// `α_{m,λ} = α ∏_{j<m} η^{-2ω_j} x_j/y_j` for 1-based `m`.
    pub fn alpha_m_lambda(&self, lam: &Partition, m: usize) -> Result<F> {
        let w = lam.multiplicities();
        let mut r = self.alpha.clone();
        for j in 0..m - 1 {
            r = r * self.eta.powi(-2 * w[j] as i64)? * self.ratio(j)?;
        }
        Ok(r)
    }
}

/// `Z_m(u)` (plain) or `Z'_m(u)` (primed) for 1-based `m` with the dynamical
/// parameter `alpha` supplied by the caller.
pub fn z_factor<F: Scalar>(u: &F, m: usize, params: &EllParams<F>, alpha: &F, variant: Variant) -> Result<PSeries<F>> {
    let am = params.alpha_m(alpha, m)?;
    let i = m - 1;
    let (head, before, after) = match variant {
        Variant::Plain => (am.inv()? * u.div(&params.x[i])?, &params.y, &params.x),
        Variant::Primed => (am * u.div(&params.y[i])?, &params.x, &params.y),
    };
    let mut r = params.th(&head)?;
    for v in &before[..i] {
        r = r * params.th(&u.div(v)?)?;
    }
    for v in &after[i + 1..] {
        r = r * params.th(&u.div(v)?)?;
    }
    Ok(r)
}

/// `ρ_λ(η) = ∏_m ∏_{s=1}^{ω_m} θ(η)/θ(η^s)`.
pub fn rho<F: Scalar>(lam: &Partition, params: &EllParams<F>) -> Result<PSeries<F>> {
    let te = params.th(&params.eta)?;
    let mut r = params.one();
    for w in lam.multiplicities() {
        for s in 1..=w {
            r = r * te.div(&params.th(&params.eta.powi(s as i64)?)?)?;
        }
    }
    Ok(r)
}

fn check_len<F>(lam: &Partition, t: &[F], n: usize) -> Result<()> {
    if lam.len() != t.len() || lam.n() != n {
        return Err(Error::Usage(format!("partition {lam} does not fit {} variables with n = {n}", t.len())));
    }
    Ok(())
}

/// `θ(η t_b/t_a)/θ(t_b/t_a)` (plain) or `θ(η t_a/t_b)/θ(t_a/t_b)` (primed), `[a][b]`.
fn pair_table<F: Scalar>(t: &[F], params: &EllParams<F>, variant: Variant) -> Result<Vec<Vec<PSeries<F>>>> {
    let l = t.len();
    let mut tab = vec![vec![params.one(); l]; l];
    for a in 0..l {
        for b in 0..l {
            if a == b {
                continue;
            }
            let r = match variant {
                Variant::Plain => t[b].div(&t[a])?,
                Variant::Primed => t[a].div(&t[b])?,
            };
            let den = params.th(&r)?;
            if den.constant_term().is_zero() {
                return Err(Error::Degenerate(format!("theta(t_{}/t_{}) is not invertible", a + 1, b + 1)));
            }
            tab[a][b] = params.th(&(params.eta.clone() * r))?.div(&den)?;
        }
    }
    Ok(tab)
}

/// `Ξ_λ(t)` or `Ξ'_λ(t)` by full symmetrization, including `ρ_λ(η)`.
///
/// Both variants shift the dynamical parameter by `η^{2a-2ℓ}` in position `a`;
/// this is the choice compatible with the duality between them and with the
/// biorthogonality against `Ξ_μ`.
pub fn xi_weight<F: Scalar>(lam: &Partition, t: &[F], params: &EllParams<F>, variant: Variant) -> Result<PSeries<F>> {
    check_len(lam, t, params.n())?;
    let l = t.len() as i64;
    let shifts: Vec<F> =
        (1..=l).map(|a| Ok(params.alpha.clone() * params.eta.powi(2 * a - 2 * l)?)).collect::<Result<_>>()?;
    let single: Vec<Vec<PSeries<F>>> = t
        .iter()
        .map(|u| {
            lam.parts().iter().zip(&shifts).map(|(&m, al)| z_factor(u, m, params, al, variant)).collect::<Result<_>>()
        })
        .collect::<Result<_>>()?;
    let pair = pair_table(t, params, variant)?;
    Ok(rho(lam, params)? * symmetrize(&single, &pair, &params.one()))
}

/// `D_λ`, the inverse of the diagonal Gram entry.
pub fn norm_d<F: Scalar>(lam: &Partition, params: &EllParams<F>) -> Result<PSeries<F>> {
    let w = lam.multiplicities();
    let eta = &params.eta;
    let cube = {
        let e = euler::<F>(1, params.order);
        e.clone() * e.clone() * e
    };
    let te = params.th(eta)?;
    let mut r = if lam.len().is_multiple_of(2) { params.one() } else { -params.one() };
    for m in 1..=params.n() {
        let am = params.alpha_m_lambda(lam, m)?;
        let xy = params.ratio(m - 1)?;
        let wm = w[m - 1] as i64;
        for s in 0..wm {
            let num = cube.clone() * params.th(&eta.powi(s + 1)?)? * params.th(&(eta.powi(-s)? * xy.clone()))?;
            let den = te.clone()
                * params.th(&eta.powi(s)?.div(&am)?)?
                * params.th(&(eta.powi(1 - s - wm)? * am.clone() * xy.clone()))?;
            r = r * num.div(&den).map_err(|_| Error::NotInvertible(format!("denominator of D at m = {m}, s = {s}")))?;
        }
    }
    Ok(r)
}

/// `C_λ^{(i,j)}` for `i < j` (1-based).
pub fn c_coeff<F: Scalar>(lam: &Partition, i: usize, j: usize, params: &EllParams<F>) -> Result<PSeries<F>> {
    if !(1 <= i && i < j && j <= params.n()) {
        return Err(Error::Usage(format!("need 1 <= i < j <= n, got i = {i}, j = {j}")));
    }
    let w = lam.multiplicities();
    let l = lam.len() as i64;
    let eta = &params.eta;
    let (wi, wj) = (w[i - 1] as i64, w[j - 1] as i64);
    let bad = |what: &str| Error::NotInvertible(format!("denominator of C: {what}"));
    let ai_plain = params.alpha_m(&params.alpha, i)?;
    let pre = (ai_plain * params.ratio(i - 1)?).powi(wi)? * eta.powi(-wi * (wi - 1))?;
    let mut r = PSeries::constant(pre, params.order);
    for k in i + 1..j {
        let ak = params.alpha_m_lambda(lam, k)?;
        let xy = params.ratio(k - 1)?;
        let wk = w[k - 1] as i64;
        for s in 0..wk {
            let num = params.th(&(eta.powi(-s)? * xy.clone()))?;
            let den =
                params.th(&eta.powi(s)?.div(&ak)?)? * params.th(&(eta.powi(1 - s - wk)? * ak.clone() * xy.clone()))?;
            r = r * num.div(&den).map_err(|_| bad("middle block"))?;
        }
    }
    let ai = params.alpha_m_lambda(lam, i)?;
    let aj = params.alpha_m_lambda(lam, j)?;
    let xyi = params.ratio(i - 1)?;
    for s in 0..wi {
        r = r.div(&params.th(&(eta.powi(1 - s - wi)? * ai.clone() * xyi.clone()))?).map_err(|_| bad("block i"))?;
    }
    for s in 0..wj {
        r = r.div(&params.th(&eta.powi(s)?.div(&aj)?)?).map_err(|_| bad("block j"))?;
    }
    let yi = &params.y[i - 1];
    for a in (wj + 1)..=(l - wi) {
        let la = lam.parts()[(a - 1) as usize];
        let arg = params.alpha_m(&params.alpha, la)? * eta.powi(a - l)? * yi.div(&params.y[la - 1])?;
        r = r * params.th(&arg)?;
    }
    for a in 1..=l {
        let la = lam.parts()[(a - 1) as usize];
        let e = eta.powi(l - a)?;
        for k in i + 1..la {
            r = r * params.th(&(e.clone() * yi.div(&params.x[k - 1])?))?;
        }
        for m in la + 1..j {
            r = r * params.th(&(e.clone() * yi.div(&params.y[m - 1])?))?;
        }
    }
    Ok(r)
}

/// `Σ_{λ ⊂ [i,j]} C_λ^{(i,j)} Ξ_λ(t)`, zero when `x_j = η^{ℓ-1} y_i`.
/// `mutate` doubles the first coefficient.
pub fn idp1_sum<F: Scalar>(i: usize, j: usize, t: &[F], params: &EllParams<F>, mutate: bool) -> Result<PSeries<F>> {
    let mut total = PSeries::zero(params.order);
    for (idx, lam) in partitions::enumerate_window(t.len(), params.n(), i, j)?.iter().enumerate() {
        let mut c = c_coeff(lam, i, j, params)?;
        if mutate && idx == 0 {
            c = c.clone() + c;
        }
        total = total + c * xi_weight(lam, t, params, Variant::Plain)?;
    }
    Ok(total)
}

/// The one-block identity with `β = η^{1-2ℓ} α x_1/y_1`. `mutate` doubles the
/// `k = 0` term.
pub fn idp2_sum<F: Scalar>(t: &[F], params: &EllParams<F>, mutate: bool) -> Result<PSeries<F>> {
    let l = t.len() as i64;
    let eta = &params.eta;
    let beta = eta.powi(1 - 2 * l)? * params.alpha.clone() * params.ratio(0)?;
    let th = |u: F| params.th(&u);
    let mut total = PSeries::zero(params.order);
    let mut coef = params.one();
    for k in 0..=l {
        if k > 0 {
            let s = k - 1;
            let num = th(eta.powi(l - s)?)? * th(eta.powi(s)? * beta.clone())?.scale(&eta.powi(s)?);
            let den = th(eta.powi(s + 1)?)? * th(eta.powi(s + l + 1)? * beta.clone())?;
            coef = -(coef * num.div(&den)?);
        }
        let lead = th(eta.powi(2 * k)? * beta.clone())? * coef.clone();
        let single: Vec<Vec<PSeries<F>>> = t
            .iter()
            .map(|u| {
                (1..=l)
                    .map(|a| {
                        if a <= k {
                            Ok(th(u.clone())? * th(eta.powi(2 - 2 * a - l)? * u.div(&beta)?)?)
                        } else {
                            Ok(th(eta.powi(1 - l)? * u.clone())? * th(eta.powi(1 - 2 * a)? * u.div(&beta)?)?)
                        }
                    })
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let pair = pair_table(t, params, Variant::Plain)?;
        let mut term = lead * symmetrize(&single, &pair, &params.one());
        if mutate && k == 0 {
            term = term.clone() + term;
        }
        total = total + term;
    }
    Ok(total)
}

/// A theta factor `θ(c · t_var^{±1} · t_other^{∓1})` of the kernel `Ω`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllKernelFactor<F> {
    pub var: usize,
    pub coef: F,
    /// `true` for `θ(c/t_var)`.
    pub inverted: bool,
    pub other: Option<usize>,
    pub role: Role,
    order: usize,
}

impl<F: Scalar> EllKernelFactor<F> {
    fn arg(&self, pt: &[F]) -> Result<F> {
        let mut a =
            if self.inverted { self.coef.div(&pt[self.var])? } else { self.coef.clone() * pt[self.var].clone() };
        if let Some(b) = self.other {
            a = if self.inverted { a * pt[b].clone() } else { a.div(&pt[b])? };
        }
        Ok(a)
    }
}

impl<F: Scalar> KernelFactor<F, PSeries<F>> for EllKernelFactor<F> {
    fn var(&self) -> usize {
        self.var
    }
    fn role(&self) -> Role {
        self.role
    }
    fn vanishes(&self, pt: &[F]) -> bool {
        self.arg(pt).map(|a| a == F::one()).unwrap_or(false)
    }
    fn value(&self, pt: &[F]) -> Result<PSeries<F>> {
        theta(&self.arg(pt)?, 1, self.order)
    }
    fn residue_weight(&self, _pt: &[F]) -> Result<PSeries<F>> {
        // θ(u) = (1-u)·θ_red(u) with θ_red(1) = (p;p)^3; the dt/t residue of
        // 1/θ(c t) is -1/θ_red(1), that of 1/θ(c/t) is +1/θ_red(1).
        let w = theta_reduced(&F::one(), self.order)?.inv()?;
        Ok(if self.inverted { w } else { -w })
    }
}

/// The kernel `Ω(t) = ∏_{a,m} θ(t_a/x_m)θ(t_a/y_m) ∏_{a≠b} θ(η t_a/t_b)/θ(t_a/t_b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EllKernel<F> {
    pub factors: Vec<EllKernelFactor<F>>,
    order: usize,
}

impl<F: Scalar> EllKernel<F> {
    pub fn new(ell: usize, params: &EllParams<F>) -> Result<Self> {
        let order = params.order;
        let f = |var, coef, inverted, other, role| EllKernelFactor { var, coef, inverted, other, role, order };
        let mut factors = Vec::new();
        for a in 0..ell {
            for m in 0..params.n() {
                factors.push(f(a, params.x[m].inv()?, false, None, Role::Pole));
                factors.push(f(a, params.y[m].inv()?, false, None, Role::Pole));
            }
            for b in a + 1..ell {
                factors.push(f(a, params.eta.clone(), false, Some(b), Role::Pole));
                factors.push(f(a, params.eta.clone(), true, Some(b), Role::Pole));
                factors.push(f(a, F::one(), false, Some(b), Role::Zero));
                factors.push(f(a, F::one(), true, Some(b), Role::Zero));
            }
        }
        Ok(EllKernel { factors, order })
    }

    pub fn residue(&self, pt: &[F]) -> Result<PSeries<F>> {
        kernel_residue(&self.factors, pt, &PSeries::one(self.order))
    }
}

fn sign<F: Scalar>(ell: usize, order: usize) -> PSeries<F> {
    if ell.is_multiple_of(2) {
        PSeries::one(order)
    } else {
        -PSeries::one(order)
    }
}

/// The x▷ and y◁ residue sums of `fg/Ω`.
pub fn residue_sums_omega<F: Scalar>(
    fg: impl Fn(&[F]) -> Result<PSeries<F>>,
    ell: usize,
    params: &EllParams<F>,
) -> Result<(PSeries<F>, PSeries<F>)> {
    let kernel = EllKernel::new(ell, params)?;
    let mut xs = PSeries::zero(params.order);
    let mut ys = PSeries::zero(params.order);
    for lam in partitions::enumerate(ell, params.n())? {
        let xp = partitions::x_point(&lam, &params.x, &params.eta)?;
        let yp = partitions::y_point(&lam, &params.y, &params.eta)?;
        xs = xs + kernel.residue(&xp.coords)? * fg(&xp.coords)?;
        ys = ys + kernel.residue(&yp.coords)? * fg(&yp.coords)?;
    }
    Ok((xs, ys))
}

/// `⟨f, g⟩_Ω` as the x▷ residue sum, checked against `(-1)^ℓ` times the y◁ sum.
pub fn scalar_product_omega<F: Scalar>(
    f: impl Fn(&[F]) -> Result<PSeries<F>>,
    g: impl Fn(&[F]) -> Result<PSeries<F>>,
    ell: usize,
    params: &EllParams<F>,
) -> Result<PSeries<F>> {
    let (xs, ys) = residue_sums_omega(|t| Ok(f(t)? * g(t)?), ell, params)?;
    if xs != sign::<F>(ell, params.order) * ys {
        return Err(Error::Internal("x and y elliptic residue sums disagree".into()));
    }
    Ok(xs)
}

/// Gram matrices `[⟨Ξ'_λ, Ξ_μ⟩_Ω]` from the x▷ side and from the y◁ side
/// (times `(-1)^ℓ`).
pub fn gram_xx<F: Scalar>(ell: usize, params: &EllParams<F>) -> Result<(SeriesMatrix<F>, SeriesMatrix<F>)> {
    let parts = partitions::enumerate(ell, params.n())?;
    let kernel = EllKernel::new(ell, params)?;
    let side = |pts: Vec<EvalPoint<F>>| -> Result<Matrix<PSeries<F>>> {
        let res: Vec<PSeries<F>> = pts.iter().map(|p| kernel.residue(&p.coords)).collect::<Result<_>>()?;
        let table = |v| -> Result<Matrix<PSeries<F>>> {
            parts.iter().map(|l| pts.iter().map(|p| xi_weight(l, &p.coords, params, v)).collect()).collect()
        };
        let (pr, pl) = (table(Variant::Primed)?, table(Variant::Plain)?);
        let r = parts.len();
        let mut g = vec![vec![PSeries::zero(params.order); r]; r];
        for a in 0..r {
            for b in 0..r {
                for k in 0..r {
                    g[a][b] = g[a][b].clone() + res[k].clone() * pr[a][k].clone() * pl[b][k].clone();
                }
            }
        }
        Ok(g)
    };
    let xpts = parts.iter().map(|l| partitions::x_point(l, &params.x, &params.eta)).collect::<Result<_>>()?;
    let ypts = parts.iter().map(|l| partitions::y_point(l, &params.y, &params.eta)).collect::<Result<_>>()?;
    let gx = side(xpts)?;
    let sg = sign::<F>(ell, params.order);
    let gy = side(ypts)?.into_iter().map(|row| row.into_iter().map(|v| sg.clone() * v).collect()).collect();
    Ok((gx, gy))
}

/// `ϑ_m(u) = u^{m-1} θ(-p^{m-1} η^{ℓ-1} α^{-1} (∏x)^{-1} (-u)^n; p^n) (p^n;p^n)^{-1} (p;p)^n`.
pub fn vartheta<F: Scalar>(m: usize, u: &F, ell: usize, params: &EllParams<F>) -> Result<PSeries<F>> {
    let n = params.n();
    if !(1..=n).contains(&m) {
        return Err(Error::Usage(format!("basis index {m} outside 1..={n}")));
    }
    let mut prod = F::one();
    for v in &params.x {
        prod = prod * v.clone();
    }
    let c = -(params.eta.powi(ell as i64 - 1)? * params.alpha.inv()? * prod.inv()? * (-u.clone()).powi(n as i64)?);
    let order = params.order;
    let mut r = theta_monomial(&c, m - 1, n, order)?.div(&euler(n, order))?;
    let e1 = euler::<F>(1, order);
    for _ in 0..n {
        r = r * e1.clone();
    }
    Ok(r.scale(&u.powi(m as i64 - 1)?))
}

/// `Θ_λ(t) = (∏ ω_m!)^{-1} Σ_σ ∏_a ϑ_{λ_a}(t_{σ_a})`.
pub fn theta_lambda<F: Scalar>(lam: &Partition, t: &[F], params: &EllParams<F>) -> Result<PSeries<F>> {
    check_len(lam, t, params.n())?;
    let ell = t.len();
    let vals: Vec<Vec<PSeries<F>>> =
        t.iter().map(|u| lam.parts().iter().map(|&m| vartheta(m, u, ell, params)).collect()).collect::<Result<_>>()?;
    let mut total = PSeries::zero(params.order);
    for sigma in (0..ell).permutations(ell) {
        let mut term = params.one();
        for (a, &v) in sigma.iter().enumerate() {
            term = term * vals[v][a].clone();
        }
        total = total + term;
    }
    let fact: i64 = lam.multiplicities().iter().map(|&w| (1..=w as i64).product::<i64>()).product();
    total.div(&PSeries::constant(F::from_i64(fact), params.order))
}

/// Coefficients of `Ξ_λ` in the `Θ` basis, solved from the special points.
pub struct EllTransition<F> {
    pub parts: Vec<Partition>,
    /// `[λ][μ]`.
    pub a: Matrix<PSeries<F>>,
}

impl<F: Scalar> EllTransition<F> {
    pub fn solve(ell: usize, params: &EllParams<F>) -> Result<Self> {
        let parts = partitions::enumerate(ell, params.n())?;
        let pts: Vec<_> =
            parts.iter().map(|l| partitions::x_point(l, &params.x, &params.eta)).collect::<Result<_>>()?;
        let basis: Matrix<PSeries<F>> = pts
            .iter()
            .map(|p| parts.iter().map(|mu| theta_lambda(mu, &p.coords, params)).collect())
            .collect::<Result<_>>()?;
        let rhs: Matrix<PSeries<F>> = pts
            .iter()
            .map(|p| parts.iter().map(|l| xi_weight(l, &p.coords, params, Variant::Plain)).collect())
            .collect::<Result<_>>()?;
        let at = linalg::solve(&basis, &rhs)?;
        Ok(EllTransition { parts, a: linalg::transpose(&at) })
    }

    /// `Ξ_λ(t) - Σ_μ A_{λμ} Θ_μ(t)` for every `λ`.
    pub fn residuals(&self, t: &[F], params: &EllParams<F>) -> Result<Vec<PSeries<F>>> {
        let thetas: Vec<_> = self.parts.iter().map(|mu| theta_lambda(mu, t, params)).collect::<Result<_>>()?;
        self.parts
            .iter()
            .zip(&self.a)
            .map(|(l, row)| {
                let mut v = xi_weight(l, t, params, Variant::Plain)?;
                for (c, th) in row.iter().zip(&thetas) {
                    v = v - c.clone() * th.clone();
                }
                Ok(v)
            })
            .collect()
    }
}

/// `d(n,m,ℓ,s) = Σ_{i,j >= 0, i+j < ℓ, i-j = s} C(m-1+i, m-1) C(n-m-1+j, n-m-1)`.
pub fn exponent_small_d(n: usize, m: usize, ell: usize, s: i64) -> u64 {
    let (n, m, l) = (n as i64, m as i64, ell as i64);
    let mut total = 0;
    for i in 0..l {
        let j = i - s;
        if j < 0 || i + j >= l {
            continue;
        }
        total += binom(m - 1 + i, m - 1) * binom(n - m - 1 + j, n - m - 1);
    }
    total
}

fn series_pow<F: Scalar>(v: &PSeries<F>, e: i64) -> Result<PSeries<F>> {
    v.powi(e)
}

/// Right-hand side of the theta-basis determinant without its root-of-unity constant.
pub fn det_t_rhs<F: Scalar>(ell: usize, params: &EllParams<F>) -> Result<PSeries<F>> {
    let n = params.n();
    let (ni, li) = (n as i64, ell as i64);
    let eta = &params.eta;
    let e1 = ni * (1 - ni) / 2 * binom(ni + li - 1, ni + 1) as i64;
    let mut c = eta.powi(e1)?;
    let ex = binom(ni + li - 1, ni) as i64;
    for (m, xm) in params.x.iter().enumerate() {
        c = c * (-xm.clone()).powi(m as i64 * ex)?;
    }
    let mut r = PSeries::constant(c, params.order);
    for s in 0..li {
        let e = binom(ni + li - s - 2, ni - 1) as i64;
        r = r * series_pow(&params.th(&eta.powi(s)?.div(&params.alpha)?)?, e)?;
    }
    for s in 1 - li..li {
        let d = exponent_big_d(n, ell, s) as i64;
        if d == 0 {
            continue;
        }
        for j in 0..n {
            for k in j + 1..n {
                r = r * series_pow(&params.th(&(eta.powi(s)? * params.x[j].div(&params.x[k])?))?, d)?;
            }
        }
    }
    Ok(r)
}

/// Right-hand side of the elliptic transition determinant without the inverse constant.
pub fn det_ae_rhs<F: Scalar>(ell: usize, params: &EllParams<F>) -> Result<PSeries<F>> {
    let n = params.n();
    let (ni, li) = (n as i64, ell as i64);
    let eta = &params.eta;
    let mut c = F::one();
    let ex = binom(ni + li - 1, ni) as i64;
    for (m, ym) in params.y.iter().enumerate() {
        c = c * ym.powi((m as i64 + 1 - ni) * ex)?;
    }
    let mut r = PSeries::constant(c, params.order);
    for s in 1 - li..li {
        let mut pr = F::one();
        for m in 1..n {
            pr = pr * params.y[m - 1].div(&params.x[m - 1])?;
            let d = exponent_small_d(n, m, ell, s) as i64;
            if d == 0 {
                continue;
            }
            let arg = eta.powi(s + li - 1)? * params.alpha.inv()? * pr.clone();
            r = r * series_pow(&params.th(&arg)?, d)?;
        }
    }
    for s in 0..li {
        let e = binom(ni + li - s - 2, ni - 1) as i64;
        if e == 0 {
            continue;
        }
        for j in 0..n {
            for k in j + 1..n {
                r = r * series_pow(&params.th(&(eta.powi(s)? * params.y[j].div(&params.x[k])?))?, e)?;
            }
        }
    }
    Ok(r)
}

/// `det[Ξ_λ(x▷μ)]_{λ,μ}`.
pub fn det_xi<F: Scalar>(ell: usize, params: &EllParams<F>) -> Result<PSeries<F>> {
    let parts = partitions::enumerate(ell, params.n())?;
    let m: Matrix<PSeries<F>> = parts
        .iter()
        .map(|l| {
            parts
                .iter()
                .map(|mu| {
                    xi_weight(l, &partitions::x_point(mu, &params.x, &params.eta)?.coords, params, Variant::Plain)
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    linalg::det(&m)
}
