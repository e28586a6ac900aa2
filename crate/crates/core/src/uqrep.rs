//! Verma modules of the quantum loop algebra, the evaluation L-operator and
//! its coproduct action on tensor products, plus the operator strings behind
//! the raising/lowering expansions and the singular-vector statements.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::partitions::{self, Partition};
use crate::polyweights::{self, PolyParams, Variant};

/// `q`, highest weights `s_m = q^{Λ_m}` and evaluation points `z_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightParams<F> {
    pub q: F,
    pub s: Vec<F>,
    pub z: Vec<F>,
}

impl<F: Scalar> WeightParams<F> {
    pub fn new(q: F, s: Vec<F>, z: Vec<F>) -> Result<Self> {
        if s.len() != z.len() || s.is_empty() {
            return Err(Error::Usage(format!("need equally many weights and points, got {} and {}", s.len(), z.len())));
        }
        Ok(WeightParams { q, s, z })
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// `η = q^2`, `x_m = s_m^2 z_m`, `y_m = s_m^{-2} z_m`.
    pub fn param_map(&self) -> Result<PolyParams<F>> {
        let sq: Vec<F> = self.s.iter().map(|s| s.clone() * s.clone()).collect();
        let x = sq.iter().zip(&self.z).map(|(w, z)| w.clone() * z.clone()).collect();
        let y = sq.iter().zip(&self.z).map(|(w, z)| z.div(w)).collect::<Result<_>>()?;
        PolyParams::new(x, y, self.q.clone() * self.q.clone())
    }

    /// Impose `z_i = s_i^2 s_j^2 q^{-2ℓ} z_j` (1-based `i`, `j`).
    pub fn impose_resonance(&mut self, i: usize, j: usize, ell: usize) -> Result<()> {
        let (si, sj) = (&self.s[i - 1], &self.s[j - 1]);
        self.z[i - 1] =
            si.clone() * si.clone() * sj.clone() * sj.clone() * self.q.powi(-2 * ell as i64)? * self.z[j - 1].clone();
        Ok(())
    }

    /// `q^{2Λ_j - 2s} z_j`, the spectral values of the singular-vector strings.
    pub fn resonant_point(&self, j: usize, s: usize) -> Result<F> {
        let sj = &self.s[j - 1];
        Ok(sj.clone() * sj.clone() * self.q.powi(-2 * s as i64)? * self.z[j - 1].clone())
    }

    fn modules(&self, order: Order, cap: usize) -> Result<Vec<Verma<F>>> {
        let mut mods: Vec<Verma<F>> = (0..self.n())
            .map(|m| Verma::new(self.q.clone(), self.s[m].clone(), self.z[m].clone(), cap))
            .collect::<Result<_>>()?;
        if order == Order::Reversed {
            mods.reverse();
        }
        Ok(mods)
    }
}

/// Verma module with basis `F^k v`, `k <= cap`, at evaluation point `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verma<F> {
    pub q: F,
    pub s: F,
    pub z: F,
    pub cap: usize,
    /// `E F^k v = γ_k F^{k-1} v`, indices `0..=cap`.
    gamma: Vec<F>,
}

impl<F: Scalar> Verma<F> {
    /// Derives `γ_k` from `[E, F] = (q^{2H} - q^{-2H})/(q - q^{-1})` and
    /// cross-checks it against the product form.
    pub fn new(q: F, s: F, z: F, cap: usize) -> Result<Self> {
        let qq = q.clone() - q.inv()?;
        let s2 = s.clone() * s.clone();
        let mut gamma = vec![F::zero()];
        for k in 1..=cap as i64 {
            let step = (s2.clone() * q.powi(-2 * (k - 1))? - s2.inv()? * q.powi(2 * (k - 1))?).div(&qq)?;
            let g = gamma[(k - 1) as usize].clone() + step;
            let closed = (q.powi(k)? - q.powi(-k)?)
                * (s2.clone() * q.powi(1 - k)? - s2.inv()? * q.powi(k - 1)?).div(&(qq.clone() * qq.clone()))?;
            if g != closed {
                return Err(Error::Internal(format!("E F^{k} coefficient disagrees with its product form")));
            }
            gamma.push(g);
        }
        Ok(Verma { q, s, z, cap, gamma })
    }

    pub fn gamma(&self, k: usize) -> &F {
        &self.gamma[k]
    }

    /// Eigenvalue of `q^H` on `F^k v`.
    pub fn qh(&self, k: usize) -> Result<F> {
        Ok(self.s.clone() * self.q.powi(-(k as i64))?)
    }

    /// `L^+_{ij}(u) F^k v` as an optional `(k', coefficient)`.
    pub fn l_entry(&self, i: u8, j: u8, u: &F, k: usize) -> Result<Option<(usize, F)>> {
        let w = u.div(&self.z)?;
        let qh = self.qh(k)?;
        let qq = self.q.clone() - self.q.inv()?;
        Ok(match (i, j) {
            (1, 1) => Some((k, -(w * qh.clone() - qh.inv()?))),
            (2, 2) => Some((k, -(w.div(&qh)? - qh))),
            (1, 2) => Some((k + 1, -(w * qq))),
            (2, 1) if k > 0 => Some((k - 1, -(qq * self.gamma[k].clone()))),
            (2, 1) => None,
            _ => return Err(Error::Usage(format!("L-operator entry ({i},{j}) out of range"))),
        })
    }

    /// Checks `q^H E = q E q^H`, `q^H F = q^{-1} F q^H` and the commutator on
    /// every basis vector below the cap.
    pub fn check_relations(&self) -> Result<bool> {
        let q = &self.q;
        let qq = q.clone() - q.inv()?;
        for k in 0..self.cap {
            let qh = self.qh(k)?;
            if k > 0 {
                // both sides are multiples of F^{k-1} v
                let lhs = self.qh(k - 1)? * self.gamma[k].clone();
                let rhs = q.clone() * self.gamma[k].clone() * qh.clone();
                if lhs != rhs {
                    return Ok(false);
                }
            }
            if self.qh(k + 1)? != q.inv()? * qh.clone() {
                return Ok(false);
            }
            let comm = self.gamma[k + 1].clone() - self.gamma[k].clone();
            let want = (qh.clone() * qh.clone() - (qh.clone() * qh).inv()?).div(&qq)?;
            if comm != want {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Order {
    /// `V_1 ⊗ … ⊗ V_n`
    Forward,
    /// `V_n ⊗ … ⊗ V_1`
    Reversed,
}

/// Sparse vector in the tensor product, keyed by the depths `(k_1..k_n)` in slot order.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorVector<F> {
    pub coeffs: BTreeMap<Vec<usize>, F>,
}

impl<F: Scalar> TensorVector<F> {
    pub fn zero() -> Self {
        TensorVector { coeffs: BTreeMap::new() }
    }

    pub fn basis(key: Vec<usize>) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(key, F::one());
        TensorVector { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, key: &[usize]) -> F {
        self.coeffs.get(key).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_scaled(&mut self, other: &TensorVector<F>, c: &F) {
        for (k, v) in &other.coeffs {
            let e = self.coeffs.entry(k.clone()).or_insert_with(F::zero);
            *e = e.clone() + c.clone() * v.clone();
        }
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = TensorVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &TensorVector<F>) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &-F::one());
        out
    }

    /// Distinct total depths present.
    pub fn depths(&self) -> Vec<usize> {
        self.coeffs.keys().map(|k| k.iter().sum()).unique().sorted().collect()
    }
}

/// Tensor product of evaluation Verma modules with hard depth caps.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorModule<F> {
    pub modules: Vec<Verma<F>>,
    pub order: Order,
    pub total_cap: usize,
}

impl<F: Scalar> TensorModule<F> {
    pub fn new(wp: &WeightParams<F>, order: Order, cap: usize) -> Result<Self> {
        Ok(TensorModule { modules: wp.modules(order, cap)?, order, total_cap: cap })
    }

    pub fn highest(&self) -> TensorVector<F> {
        TensorVector::basis(vec![0; self.modules.len()])
    }

    /// `L^+_{ij}(u)` through the iterated coproduct `Σ L_{i k_1} ⊗ L_{k_1 k_2} ⊗ … ⊗ L_{k_{n-1} j}`.
    pub fn apply(&self, i: u8, j: u8, u: &F, v: &TensorVector<F>) -> Result<TensorVector<F>> {
        let n = self.modules.len();
        let mut out: BTreeMap<Vec<usize>, F> = BTreeMap::new();
        for (key, c) in &v.coeffs {
            let mut states = vec![(i, key.clone(), c.clone())];
            for (pos, module) in self.modules.iter().enumerate() {
                let targets: &[u8] = if pos + 1 == n { std::slice::from_ref(&j) } else { &[1, 2] };
                let mut next = Vec::new();
                for (a, kk, cc) in &states {
                    for &b in targets {
                        if let Some((nk, f)) = module.l_entry(*a, b, u, kk[pos])? {
                            if nk > module.cap {
                                return Err(Error::DepthOverflow { index: pos + 1, cap: module.cap });
                            }
                            let mut k2 = kk.clone();
                            k2[pos] = nk;
                            next.push((b, k2, cc.clone() * f));
                        }
                    }
                }
                states = next;
            }
            for (_, kk, cc) in states {
                if kk.iter().sum::<usize>() > self.total_cap {
                    return Err(Error::DepthOverflow { index: 0, cap: self.total_cap });
                }
                let e = out.entry(kk).or_insert_with(F::zero);
                *e = e.clone() + cc;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(TensorVector { coeffs: out })
    }

    /// Apply `L_{ij}(u_1) … L_{ij}(u_k)` (the last one acts first).
    pub fn apply_string(&self, i: u8, j: u8, us: &[F], v: &TensorVector<F>) -> Result<TensorVector<F>> {
        let mut v = v.clone();
        for u in us.iter().rev() {
            v = self.apply(i, j, u, &v)?;
        }
        Ok(v)
    }
}

/// Basis index pair of `C^2 ⊗ C^2`.
pub type Pair = (u8, u8);

/// `R(u)` on `C^2 ⊗ C^2`, entries `[(out), (in)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RMatrix<F> {
    pub entries: BTreeMap<(Pair, Pair), F>,
}

impl<F: Scalar> RMatrix<F> {
    pub fn new(u: &F, q: &F) -> Result<Self> {
        let qq = q.clone() - q.inv()?;
        let mut e = BTreeMap::new();
        for a in [1, 2] {
            e.insert(((a, a), (a, a)), u.clone() * q.clone() - q.inv()?);
        }
        e.insert(((1, 2), (1, 2)), u.clone() - F::one());
        e.insert(((2, 1), (2, 1)), u.clone() - F::one());
        e.insert(((1, 2), (2, 1)), u.clone() * qq.clone());
        e.insert(((2, 1), (1, 2)), qq);
        Ok(RMatrix { entries: e })
    }

    pub fn get(&self, out: (u8, u8), inp: (u8, u8)) -> Option<&F> {
        self.entries.get(&(out, inp))
    }
}

/// Number of coefficient mismatches in `R(u/z) L_1(u) L_2(z) = L_2(z) L_1(u) R(u/z)`
/// over all basis vectors of total depth `<= depth` and all auxiliary indices.
pub fn rll_mismatches<F: Scalar>(tm: &TensorModule<F>, u: &F, z: &F, depth: usize, mutate: bool) -> Result<usize> {
    let mut r = RMatrix::new(&u.div(z)?, &tm.modules[0].q)?;
    if mutate {
        let e = r.entries.get_mut(&((1, 2), (2, 1))).expect("entry present");
        *e = e.clone() + e.clone();
    }
    let n = tm.modules.len();
    let keys = (0..n).map(|_| 0..=depth).multi_cartesian_product().filter(|k| k.iter().sum::<usize>() <= depth);
    let mut bad = 0;
    for key in keys {
        let w = TensorVector::basis(key);
        // cache the one- and two-step products for this basis vector
        let mut l_z = BTreeMap::new();
        let mut l_u = BTreeMap::new();
        for c in [1u8, 2] {
            for b in [1u8, 2] {
                l_z.insert((c, b), tm.apply(c, b, z, &w)?);
                l_u.insert((c, b), tm.apply(c, b, u, &w)?);
            }
        }
        for (a, b, d2, c2) in [1u8, 2].into_iter().flat_map(|a| {
            [1u8, 2].into_iter().flat_map(move |b| {
                [1u8, 2].into_iter().flat_map(move |d| [1u8, 2].into_iter().map(move |c| (a, b, d, c)))
            })
        }) {
            let mut lhs = TensorVector::zero();
            let mut rhs = TensorVector::zero();
            for d in [1u8, 2] {
                for c in [1u8, 2] {
                    if let Some(rv) = r.get((d2, c2), (d, c)) {
                        lhs.add_scaled(&tm.apply(d, a, u, &l_z[&(c, b)])?, rv);
                    }
                }
            }
            for a2 in [1u8, 2] {
                for b2 in [1u8, 2] {
                    if let Some(rv) = r.get((a2, b2), (a, b)) {
                        rhs.add_scaled(&tm.apply(c2, b2, z, &l_u[&(d2, a2)])?, rv);
                    }
                }
            }
            bad += lhs.sub(&rhs).coeffs.len();
        }
    }
    Ok(bad)
}

fn check_t<F: Scalar>(t: &[F]) -> Result<()> {
    for (a, b) in (0..t.len()).tuple_combinations() {
        if t[a] == t[b] {
            return Err(Error::Degenerate(format!("t_{} = t_{}", a + 1, b + 1)));
        }
    }
    Ok(())
}

/// `∏_{j<k} s_j^{ω_k} s_k^{-ω_j} q^{-ω_j ω_k}` (raising) or with `j`, `k`
/// swapped in the `s` powers (lowering).
fn cross_weight<F: Scalar>(wp: &WeightParams<F>, w: &[usize], lowering: bool) -> Result<F> {
    let mut c = F::one();
    for j in 0..w.len() {
        for k in j + 1..w.len() {
            let (wj, wk) = (w[j] as i64, w[k] as i64);
            let (a, b) = if lowering { (k, j) } else { (j, k) };
            let (ea, eb) = if lowering { (wj, wk) } else { (wk, wj) };
            c = c * wp.s[a].powi(ea)? * wp.s[b].powi(-eb)? * wp.q.powi(-wj * wk)?;
        }
    }
    Ok(c)
}

/// Raising string `L_{12}(t_1) … L_{12}(t_ℓ) v` by operators (left) and from
/// the weight expansion (right).
pub fn kbi_raising<F: Scalar>(wp: &WeightParams<F>, t: &[F]) -> Result<(TensorVector<F>, TensorVector<F>)> {
    check_t(t)?;
    let ell = t.len();
    let n = wp.n();
    let tm = TensorModule::new(wp, Order::Forward, ell + 2)?;
    let lhs = tm.apply_string(1, 2, t, &tm.highest())?;
    let pp = wp.param_map()?;
    let q = &wp.q;
    let mut pre = (q.clone() - q.inv()?).powi(ell as i64)?;
    for z in &wp.z {
        pre = pre * (-z.clone()).powi(-(ell as i64))?;
    }
    let mut rhs = TensorVector::zero();
    for lam in partitions::enumerate(ell, n)? {
        let w = lam.multiplicities();
        let c = pre.clone() * polyweights::weight(&lam, t, &pp, Variant::Plain)? * cross_weight(wp, &w, false)?;
        rhs.add_scaled(&TensorVector::basis(w), &c);
    }
    Ok((lhs, rhs))
}

/// Lowering string `L_{21}(t_1) … L_{21}(t_ℓ) F^ω v` by operators (left) and
/// from the formula (right), including the overall `(-1)^ℓ`.
pub fn kbi_lowering<F: Scalar>(
    wp: &WeightParams<F>,
    lam: &Partition,
    t: &[F],
) -> Result<(TensorVector<F>, TensorVector<F>)> {
    check_t(t)?;
    let ell = t.len();
    let tm = TensorModule::new(wp, Order::Forward, ell + 2)?;
    let w = lam.multiplicities();
    let lhs = tm.apply_string(2, 1, t, &TensorVector::basis(w.clone()))?;
    let pp = wp.param_map()?;
    let q = &wp.q;
    let qq = q.clone() - q.inv()?;
    let mut c = polyweights::weight(lam, t, &pp, Variant::Primed)?;
    if ell % 2 == 1 {
        c = -c;
    }
    for (m, &wm) in w.iter().enumerate() {
        c = c * (-wp.z[m].clone()).powi(wm as i64 - ell as i64)?;
        let s2 = wp.s[m].clone() * wp.s[m].clone();
        for s in 1..=wm as i64 {
            c = c
                * ((q.powi(s)? - q.powi(-s)?) * (s2.clone() * q.powi(1 - s)? - s2.inv()? * q.powi(s - 1)?)).div(&qq)?;
        }
    }
    c = c * cross_weight(wp, &w, true)?;
    let rhs = TensorVector::basis(vec![0; wp.n()]).scale(&c);
    Ok((lhs, rhs))
}

fn lowering_points<F: Scalar>(wp: &WeightParams<F>, j: usize, ell: usize, mutate: bool) -> Result<Vec<F>> {
    let mut pts: Vec<F> = (0..=ell).map(|s| wp.resonant_point(j, s)).collect::<Result<_>>()?;
    if mutate {
        pts[0] = pts[0].clone() * wp.q.clone();
    }
    Ok(pts)
}

/// `L_{21}(q^{2Λ_j} z_j) … L_{21}(q^{2Λ_j-2ℓ} z_j) L_{12}(t_1) … L_{12}(t_k) v` on
/// the forward product. With `k = ℓ` (as printed) this vanishes for depth
/// reasons alone; the meaningful statement takes `k = ℓ+1`.
pub fn bc1<F: Scalar>(wp: &WeightParams<F>, ell: usize, j: usize, t: &[F], mutate: bool) -> Result<TensorVector<F>> {
    let tm = TensorModule::new(wp, Order::Forward, ell + 2)?;
    let v = tm.apply_string(1, 2, t, &tm.highest())?;
    tm.apply_string(2, 1, &lowering_points(wp, j, ell, mutate)?, &v)
}

/// `ṽ = L_{12}(q^{2Λ_j} z_j) … L_{12}(q^{2Λ_j-2ℓ} z_j) (v_n ⊗ … ⊗ v_1)`.
pub fn singular_vector<F: Scalar>(
    wp: &WeightParams<F>,
    ell: usize,
    j: usize,
    mutate: bool,
) -> Result<(TensorModule<F>, TensorVector<F>)> {
    let tm = TensorModule::new(wp, Order::Reversed, ell + 2)?;
    let v = tm.apply_string(1, 2, &lowering_points(wp, j, ell, mutate)?, &tm.highest())?;
    Ok((tm, v))
}

/// `L_{21}(t_1) … L_{21}(t_k) ṽ` on the reversed product.
pub fn bc2<F: Scalar>(wp: &WeightParams<F>, ell: usize, j: usize, t: &[F], mutate: bool) -> Result<TensorVector<F>> {
    let (tm, v) = singular_vector(wp, ell, j, mutate)?;
    tm.apply_string(2, 1, t, &v)
}

/// `L_{21}(u) ṽ` for each `u`.
pub fn singular_check<F: Scalar>(
    wp: &WeightParams<F>,
    ell: usize,
    j: usize,
    us: &[F],
    mutate: bool,
) -> Result<Vec<TensorVector<F>>> {
    let (tm, v) = singular_vector(wp, ell, j, mutate)?;
    us.iter().map(|u| tm.apply(2, 1, u, &v)).collect()
}

/// Outcome of the submodule annihilation sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubmoduleSweep {
    pub words: usize,
    /// Words whose vector reaches total depth above `ℓ`.
    pub deep_words: usize,
    /// Words not annihilated by the lowering product.
    pub survivors: usize,
}

/// Generate spanning vectors from all words of length `<= word_len` in the
/// four `L^+` entries (fresh spectral values from `next_u`) on the forward
/// product and apply the `ℓ+1` lowering operators at the resonant points.
pub fn submodule_sweep<F: Scalar>(
    wp: &WeightParams<F>,
    ell: usize,
    j: usize,
    word_len: usize,
    mutate: bool,
    mut next_u: impl FnMut() -> Result<F>,
) -> Result<SubmoduleSweep> {
    let tm = TensorModule::new(wp, Order::Forward, word_len.max(ell + 1) + 1)?;
    let pts = lowering_points(wp, j, ell, mutate)?;
    let entries = [(1u8, 1u8), (1, 2), (2, 1), (2, 2)];
    let mut out = SubmoduleSweep { words: 0, deep_words: 0, survivors: 0 };
    for len in 0..=word_len {
        for word in (0..len).map(|_| entries.iter()).multi_cartesian_product() {
            let mut v = tm.highest();
            for &&(a, b) in word.iter().rev() {
                v = tm.apply(a, b, &next_u()?, &v)?;
            }
            out.words += 1;
            if v.depths().last().is_some_and(|&d| d > ell) {
                out.deep_words += 1;
            }
            if !tm.apply_string(2, 1, &pts, &v)?.is_zero() {
                out.survivors += 1;
            }
        }
    }
    Ok(out)
}
