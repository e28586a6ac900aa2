//! Seeded trial orchestration: run configurations, reports, verdicts, suites
//! and replays. The `qcomb` binary is a thin front end over this module.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::elliptic::{self, EllParams, EllTransition};
use crate::error::{Error, Result};
use crate::exactnum::{
    euler, lift, theta, theta_monomial, theta_reduced, Draw, ModP, PSeries, Rational, Ring, Sampler, SamplerConfig,
    Scalar, PRNG_NAME,
};
use crate::linalg::Matrix;
use crate::partitions::{self, Partition};
use crate::polyweights::{self, PolyParams};
use crate::residues;
use crate::uqrep::{self, Order, TensorModule, WeightParams};

pub const SCHEMA_VERSION: u32 = 1;

/// Fresh whole-trial samples tried when a draw turns out degenerate.
const MAX_RESAMPLES: usize = 25;
const MAX_ELL: usize = 8;
const MAX_N: usize = 8;

pub const PRIME_MENU: [u64; 4] = [2305843009213693951, 2147483647, 1000000007, 998244353];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Jing,
    Id1,
    Id2,
    Pp,
    Mn,
    Detq,
    Deta,
    Idp1,
    Idp2,
    Xx,
    Xt,
    Detprod,
    Rll,
    Kbi,
    Bc1,
    Bc2,
    Singular,
    #[serde(rename = "resI", alias = "resi")]
    ResI,
    Submodule,
    Theta,
}

impl Check {
    pub const ALL: [Check; 20] = [
        Check::Jing,
        Check::Id1,
        Check::Id2,
        Check::Pp,
        Check::Mn,
        Check::Detq,
        Check::Deta,
        Check::Idp1,
        Check::Idp2,
        Check::Xx,
        Check::Xt,
        Check::Detprod,
        Check::Rll,
        Check::Kbi,
        Check::Bc1,
        Check::Bc2,
        Check::Singular,
        Check::ResI,
        Check::Submodule,
        Check::Theta,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Jing => "jing",
            Check::Id1 => "id1",
            Check::Id2 => "id2",
            Check::Pp => "pp",
            Check::Mn => "mn",
            Check::Detq => "detq",
            Check::Deta => "deta",
            Check::Idp1 => "idp1",
            Check::Idp2 => "idp2",
            Check::Xx => "xx",
            Check::Xt => "xt",
            Check::Detprod => "detprod",
            Check::Rll => "rll",
            Check::Kbi => "kbi",
            Check::Bc1 => "bc1",
            Check::Bc2 => "bc2",
            Check::Singular => "singular",
            Check::ResI => "resI",
            Check::Submodule => "submodule",
            Check::Theta => "theta",
        }
    }

    /// Checks whose hypothesis is a condition that `lift_condition` drops.
    fn has_condition(self) -> bool {
        matches!(
            self,
            Check::Id1 | Check::Id2 | Check::Idp1 | Check::Bc1 | Check::Bc2 | Check::Singular | Check::Submodule
        )
    }

    fn needs_window(self) -> bool {
        self.has_condition()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Usage(format!("unknown check `{s}`")))
    }
}

/// Exact rationals or one of the supported prime fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Field {
    Rational,
    Prime(u64),
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("rational"),
            Field::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" => Ok(Field::Rational),
            "prime" => Ok(Field::Prime(PRIME_MENU[0])),
            _ => {
                let p = s
                    .strip_prefix("prime:")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| Error::Usage(format!("unknown field `{s}`")))?;
                if !PRIME_MENU.contains(&p) {
                    return Err(Error::Usage(format!("prime {p} is not one of {PRIME_MENU:?}")));
                }
                Ok(Field::Prime(p))
            }
        }
    }
}

impl TryFrom<String> for Field {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Field> for String {
    fn from(f: Field) -> String {
        f.to_string()
    }
}

fn d_ell() -> usize {
    2
}
fn d_n() -> usize {
    2
}
fn d_i() -> usize {
    1
}
fn d_j() -> usize {
    2
}
fn d_order() -> usize {
    8
}
fn d_trials() -> usize {
    3
}
fn d_seed() -> u64 {
    1
}
fn d_bound() -> u64 {
    1000
}
fn d_depth() -> usize {
    2
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub check: Check,
    #[serde(default = "d_ell")]
    pub ell: usize,
    #[serde(default = "d_n")]
    pub n: usize,
    #[serde(default = "d_i")]
    pub i: usize,
    #[serde(default = "d_j")]
    pub j: usize,
    /// Truncation order `K` of the series ring.
    #[serde(default = "d_order")]
    pub order: usize,
    #[serde(default = "d_trials")]
    pub trials: usize,
    #[serde(default = "d_seed")]
    pub seed: u64,
    #[serde(default = "field_default")]
    pub field: Field,
    #[serde(default = "d_bound")]
    pub bound: u64,
    #[serde(default)]
    pub mutate: bool,
    /// Skip imposing the hypothesis of the identity (negative control).
    #[serde(default)]
    pub lift_condition: bool,
    /// Basis depth for the RLL comparison.
    #[serde(default = "d_depth")]
    pub depth: usize,
    /// Word length for the submodule check; `ℓ+2` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word_len: Option<usize>,
}

fn field_default() -> Field {
    Field::Rational
}

impl RunConfig {
    pub fn new(check: Check) -> Self {
        RunConfig {
            check,
            ell: d_ell(),
            n: d_n(),
            i: d_i(),
            j: d_j(),
            order: d_order(),
            trials: d_trials(),
            seed: d_seed(),
            field: Field::Rational,
            bound: d_bound(),
            mutate: false,
            lift_condition: false,
            depth: d_depth(),
            word_len: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let usage = |m: String| Err(Error::Usage(m));
        if self.n == 0 || self.n > MAX_N {
            return usage(format!("n must be in 1..={MAX_N}, got {}", self.n));
        }
        if self.ell > MAX_ELL {
            return usage(format!("ell must be at most {MAX_ELL}, got {}", self.ell));
        }
        if self.trials == 0 {
            return usage("trials must be positive".into());
        }
        if self.bound < 2 {
            return usage("bound must be at least 2".into());
        }
        let c = self.check;
        let min_ell = match c {
            Check::Kbi | Check::Bc1 | Check::Bc2 | Check::Singular | Check::Submodule | Check::Theta | Check::Rll => 0,
            _ => 1,
        };
        if self.ell < min_ell {
            return usage(format!("{c} needs ell >= {min_ell}"));
        }
        if c.needs_window() && !(1 <= self.i && self.i < self.j && self.j <= self.n) {
            return usage(format!("{c} needs 1 <= i < j <= n, got i = {}, j = {}, n = {}", self.i, self.j, self.n));
        }
        if c == Check::Rll && self.depth + 1 > MAX_ELL {
            return usage("rll depth too large".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Verified,
    Falsified,
    ConditionNotSatisfied,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified => 0,
            Verdict::Falsified | Verdict::ConditionNotSatisfied => 1,
            Verdict::Error => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Falsified => "falsified",
            Verdict::ConditionNotSatisfied => "condition-not-satisfied",
            Verdict::Error => "error",
        }
    }
}

/// One evaluated quantity: a scalar is a single entry, a series lists its coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Value {
    pub label: String,
    pub value: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    /// Whole-trial resamples needed before a non-degenerate draw.
    pub resamples: usize,
    pub draws: Vec<Draw>,
    pub constraints: Vec<String>,
    pub values: Vec<Value>,
    /// Whether the asserted relation held exactly.
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub prng: String,
    pub config: RunConfig,
    pub trials: Vec<TrialRecord>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub notes: Vec<String>,
    pub timing_ms: u64,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Usage(format!("not a report: {e}")))
    }

    /// The report with wall-clock timing cleared, for replay comparison.
    pub fn without_timing(&self) -> Report {
        Report { timing_ms: 0, ..self.clone() }
    }
}

/// Exact string rendering of scalars and series.
trait Exact {
    fn exact(&self) -> Vec<String>;
}

impl<F: Scalar> Exact for F {
    fn exact(&self) -> Vec<String> {
        vec![self.exact_string()]
    }
}

impl<F: Scalar> Exact for PSeries<F> {
    fn exact(&self) -> Vec<String> {
        self.exact_strings()
    }
}

/// Per-trial sampling state and record.
struct Trial {
    sampler: Sampler,
    seen: Vec<BigRational>,
    constraints: Vec<String>,
    values: Vec<Value>,
}

impl Trial {
    fn new(cfg: SamplerConfig) -> Self {
        Trial { sampler: Sampler::new(cfg), seen: Vec::new(), constraints: Vec::new(), values: Vec::new() }
    }

    /// A generic value distinct from every earlier draw of this trial.
    fn fresh<F: Scalar>(&mut self, name: &str) -> Result<F> {
        let v = self.sampler.generic(name, &self.seen)?;
        self.seen.push(v.clone());
        lift(&v)
    }

    fn fresh_vec<F: Scalar>(&mut self, prefix: &str, k: usize) -> Result<Vec<F>> {
        (1..=k).map(|a| self.fresh(&format!("{prefix}{a}"))).collect()
    }

    fn constrain(&mut self, what: String) {
        self.constraints.push(what);
    }

    fn record(&mut self, label: impl Into<String>, v: &impl Exact) {
        self.values.push(Value { label: label.into(), value: v.exact() });
    }

    fn record_count(&mut self, label: impl Into<String>, k: usize) {
        self.values.push(Value { label: label.into(), value: vec![format!("{k}/1")] });
    }
}

/// `η^s != 1` for `s = 1..=k` in the working field.
fn not_root_of_unity<F: Scalar>(eta: &F, k: usize) -> Result<()> {
    let mut p = F::one();
    for s in 1..=k {
        p = p * eta.clone();
        if p == F::one() {
            return Err(Error::Degenerate(format!("eta is a root of unity of order {s}")));
        }
    }
    Ok(())
}

fn poly_params<F: Scalar>(tr: &mut Trial, n: usize, ell: usize) -> Result<PolyParams<F>> {
    let x = tr.fresh_vec("x", n)?;
    let y = tr.fresh_vec("y", n)?;
    let eta: F = tr.fresh("eta")?;
    not_root_of_unity(&eta, 2 * ell + 2)?;
    tr.constrain(format!("eta^s != 1 for s <= {}", 2 * ell + 2));
    PolyParams::new(x, y, eta)
}

fn ell_params<F: Scalar>(tr: &mut Trial, n: usize, ell: usize, order: usize) -> Result<EllParams<F>> {
    let x = tr.fresh_vec("x", n)?;
    let y = tr.fresh_vec("y", n)?;
    let eta: F = tr.fresh("eta")?;
    not_root_of_unity(&eta, 2 * ell + 2)?;
    let alpha = tr.fresh("alpha")?;
    tr.constrain(format!("eta^s != 1 for s <= {}", 2 * ell + 2));
    EllParams::new(x, y, eta, alpha, order)
}

fn weight_params<F: Scalar>(tr: &mut Trial, n: usize, ell: usize) -> Result<WeightParams<F>> {
    let q: F = tr.fresh("q")?;
    not_root_of_unity(&q, 2 * ell + 4)?;
    tr.constrain(format!("q^k != 1 for k <= {}", 2 * ell + 4));
    let s = tr.fresh_vec("s", n)?;
    let z = tr.fresh_vec("z", n)?;
    WeightParams::new(q, s, z)
}

/// Impose `x_j = η^{ℓ-1} y_i` unless the condition is lifted.
fn impose_x<F: Scalar>(tr: &mut Trial, cfg: &RunConfig, x: &mut [F], y: &[F], eta: &F) -> Result<()> {
    if cfg.lift_condition {
        tr.constrain(format!("x{} = eta^{} y{} NOT imposed", cfg.j, cfg.ell as i64 - 1, cfg.i));
        return Ok(());
    }
    x[cfg.j - 1] = eta.powi(cfg.ell as i64 - 1)? * y[cfg.i - 1].clone();
    tr.constrain(format!("x{} := eta^{} y{} = {}", cfg.j, cfg.ell as i64 - 1, cfg.i, x[cfg.j - 1].exact_string()));
    Ok(())
}

fn impose_resonance<F: Scalar>(tr: &mut Trial, cfg: &RunConfig, wp: &mut WeightParams<F>) -> Result<()> {
    let desc = format!("z{i} = s{i}^2 s{j}^2 q^-{} z{j}", 2 * cfg.ell, i = cfg.i, j = cfg.j);
    if cfg.lift_condition {
        tr.constrain(format!("{desc} NOT imposed"));
        return Ok(());
    }
    wp.impose_resonance(cfg.i, cfg.j, cfg.ell)?;
    tr.constrain(format!("{desc} := {}", wp.z[cfg.i - 1].exact_string()));
    Ok(())
}

fn is_identity<R: Ring>(m: &Matrix<R>) -> bool {
    m.iter()
        .enumerate()
        .all(|(a, row)| row.iter().enumerate().all(|(b, v)| if a == b { *v == v.one_like() } else { v.is_zero() }))
}

fn record_matrix<R: Exact>(tr: &mut Trial, name: &str, parts: &[Partition], m: &Matrix<R>) {
    for (a, la) in parts.iter().enumerate() {
        for (b, mu) in parts.iter().enumerate() {
            tr.record(format!("{name}[{la},{mu}]"), &m[a][b]);
        }
    }
}

/// Evaluate one trial of the configured check; returns whether the asserted
/// relation held.
fn eval_trial<F: Scalar>(cfg: &RunConfig, tr: &mut Trial) -> Result<bool> {
    let (ell, n, mutate) = (cfg.ell, cfg.n, cfg.mutate);
    match cfg.check {
        Check::Jing => {
            let eta: F = tr.fresh("eta")?;
            not_root_of_unity(&eta, ell)?;
            tr.constrain(format!("eta^s != 1 for s <= {ell}"));
            let t: Vec<F> = tr.fresh_vec("t", ell)?;
            let v = polyweights::jing_sum(&t, &eta, mutate)?;
            tr.record("sum", &v);
            Ok(v.is_zero())
        }
        Check::Id1 | Check::Id2 => {
            let mut pp = poly_params::<F>(tr, n, ell)?;
            let (y, eta) = (pp.y.clone(), pp.eta.clone());
            impose_x(tr, cfg, &mut pp.x, &y, &eta)?;
            let t: Vec<F> = tr.fresh_vec("t", ell)?;
            let v = if cfg.check == Check::Id1 {
                polyweights::id1_sum(cfg.i, cfg.j, &t, &pp, mutate)?
            } else {
                polyweights::id2_sum(cfg.j, &t, &pp, mutate)?
            };
            tr.record("sum", &v);
            Ok(v.is_zero())
        }
        Check::Pp => {
            let pp = poly_params::<F>(tr, n, ell)?;
            let (gx, gy) = residues::gram_pp(ell, &pp)?;
            let parts = partitions::enumerate(ell, n)?;
            let mut ok = gx == gy;
            for (a, la) in parts.iter().enumerate() {
                let mut nl = polyweights::norm_n(la, &pp)?;
                if mutate && a == 0 {
                    nl = nl + F::one();
                }
                for b in 0..parts.len() {
                    let want = if a == b { nl.inv()? } else { F::zero() };
                    ok &= gx[a][b] == want;
                }
                tr.record(format!("N{la}"), &nl);
            }
            record_matrix(tr, "gram", &parts, &gx);
            tr.record_count(
                "y-side mismatches",
                gx.iter().flatten().zip(gy.iter().flatten()).filter(|(a, b)| a != b).count(),
            );
            Ok(ok)
        }
        Check::Mn => {
            let pp = poly_params::<F>(tr, n, ell)?;
            let m = residues::mn_matrix(ell, &pp, mutate)?;
            let parts = partitions::enumerate(ell, n)?;
            record_matrix(tr, "product", &parts, &m);
            Ok(is_identity(&m))
        }
        Check::Detq | Check::Deta => {
            let pp = poly_params::<F>(tr, n, ell)?;
            let (lhs, mut rhs) = if cfg.check == Check::Detq {
                (residues::det_q(ell, &pp)?, residues::det_q_closed(ell, &pp)?)
            } else {
                (residues::det_a(ell, &pp)?, residues::det_a_closed(ell, &pp)?)
            };
            if mutate {
                rhs = rhs * pp.eta.clone();
            }
            tr.record("det", &lhs);
            tr.record("closed form", &rhs);
            for s in 1 - ell as i64..ell as i64 {
                tr.record_count(format!("D(n,l,{s})"), residues::exponent_big_d(n, ell, s) as usize);
            }
            Ok(lhs == rhs)
        }
        Check::Idp1 => {
            let mut pp = ell_params::<F>(tr, n, ell, cfg.order)?;
            let (y, eta) = (pp.y.clone(), pp.eta.clone());
            impose_x(tr, cfg, &mut pp.x, &y, &eta)?;
            let t: Vec<F> = tr.fresh_vec("t", ell)?;
            let v = elliptic::idp1_sum(cfg.i, cfg.j, &t, &pp, mutate)?;
            tr.record("sum", &v);
            Ok(v.is_zero())
        }
        Check::Idp2 => {
            let pp = ell_params::<F>(tr, n, ell, cfg.order)?;
            let t: Vec<F> = tr.fresh_vec("t", ell)?;
            let v = elliptic::idp2_sum(&t, &pp, mutate)?;
            tr.record("sum", &v);
            Ok(v.is_zero())
        }
        Check::Xx => {
            let pp = ell_params::<F>(tr, n, ell, cfg.order)?;
            let (gx, gy) = elliptic::gram_xx(ell, &pp)?;
            let parts = partitions::enumerate(ell, n)?;
            let one = PSeries::one(cfg.order);
            let mut ok = gx == gy;
            for (a, la) in parts.iter().enumerate() {
                let mut d = elliptic::norm_d(la, &pp)?;
                if mutate && a == 0 {
                    d = d + one.clone();
                }
                for b in 0..parts.len() {
                    ok &= if a == b { gx[a][a].clone() * d.clone() == one } else { gx[a][b].is_zero() };
                }
                tr.record(format!("D{la}"), &d);
            }
            record_matrix(tr, "gram", &parts, &gx);
            Ok(ok)
        }
        Check::Xt => {
            let pp = ell_params::<F>(tr, n, ell, cfg.order)?;
            let mut trn = EllTransition::solve(ell, &pp)?;
            if mutate {
                trn.a[0][0] = trn.a[0][0].clone() + PSeries::one(cfg.order);
            }
            let mut ok = true;
            for k in 1..=3 {
                let t: Vec<F> = tr.fresh_vec(&format!("fresh{k}_t"), ell)?;
                for (la, r) in trn.parts.clone().iter().zip(trn.residuals(&t, &pp)?) {
                    ok &= r.is_zero();
                    tr.record(format!("residual{k}{la}"), &r);
                }
            }
            Ok(ok)
        }
        Check::Detprod => {
            let pp = ell_params::<F>(tr, n, ell, cfg.order)?;
            let lhs = elliptic::det_xi(ell, &pp)?;
            let mut rhs = elliptic::det_t_rhs(ell, &pp)? * elliptic::det_ae_rhs(ell, &pp)?;
            if mutate {
                rhs = rhs.scale(&pp.eta);
            }
            tr.record("det", &lhs);
            tr.record("closed form product", &rhs);
            Ok(lhs == rhs)
        }
        Check::Rll => {
            let wp = weight_params::<F>(tr, n, cfg.depth)?;
            let u: F = tr.fresh("u")?;
            let z: F = tr.fresh("zeta")?;
            let tm = TensorModule::new(&wp, Order::Forward, cfg.depth + 2)?;
            let bad = uqrep::rll_mismatches(&tm, &u, &z, cfg.depth, mutate)?;
            tr.record_count("mismatched coefficients", bad);
            Ok(bad == 0)
        }
        Check::Kbi => {
            let wp = weight_params::<F>(tr, n, ell)?;
            let t: Vec<F> = tr.fresh_vec("t", ell)?;
            let (l, mut r) = uqrep::kbi_raising(&wp, &t)?;
            if mutate {
                r = r.scale(&F::from_i64(2));
            }
            let raise_bad = l.sub(&r).coeffs.len();
            let mut lower_bad = 0;
            for lam in partitions::enumerate(ell, n)? {
                let (l, r) = uqrep::kbi_lowering(&wp, &lam, &t)?;
                lower_bad += l.sub(&r).coeffs.len();
                tr.record(format!("lowering{lam}"), &l.get(&vec![0; n]));
            }
            tr.record_count("raising mismatches", raise_bad);
            tr.record_count("lowering mismatches", lower_bad);
            Ok(raise_bad == 0 && lower_bad == 0)
        }
        Check::Bc1 | Check::Bc2 => {
            let mut wp = weight_params::<F>(tr, n, ell)?;
            impose_resonance(tr, cfg, &mut wp)?;
            let t: Vec<F> = tr.fresh_vec("t", ell + 1)?;
            let v = if cfg.check == Check::Bc1 {
                let printed = uqrep::bc1(&wp, ell, cfg.j, &t[..ell], mutate)?;
                tr.record_count("as printed (l raising operators): nonzero coefficients", printed.coeffs.len());
                uqrep::bc1(&wp, ell, cfg.j, &t, mutate)?
            } else {
                uqrep::bc2(&wp, ell, cfg.j, &t, mutate)?
            };
            tr.record_count("nonzero coefficients", v.coeffs.len());
            for (k, c) in &v.coeffs {
                tr.record(format!("coeff{k:?}"), c);
            }
            Ok(v.is_zero())
        }
        Check::Singular => {
            let mut wp = weight_params::<F>(tr, n, ell)?;
            impose_resonance(tr, cfg, &mut wp)?;
            let us: Vec<F> = tr.fresh_vec("u", n + ell + 2)?;
            let outs = uqrep::singular_check(&wp, ell, cfg.j, &us, mutate)?;
            let bad = outs.iter().filter(|v| !v.is_zero()).count();
            tr.record_count("spectral values tested", us.len());
            tr.record_count("nonzero results", bad);
            Ok(bad == 0)
        }
        Check::Submodule => {
            let mut wp = weight_params::<F>(tr, n, ell)?;
            impose_resonance(tr, cfg, &mut wp)?;
            let word_len = cfg.word_len.unwrap_or(ell + 2);
            let mut k = 0;
            let sweep = uqrep::submodule_sweep(&wp, ell, cfg.j, word_len, mutate, || {
                k += 1;
                tr.fresh(&format!("u{k}"))
            })?;
            tr.record_count("words", sweep.words);
            tr.record_count("words above depth l", sweep.deep_words);
            tr.record_count("not annihilated", sweep.survivors);
            Ok(sweep.survivors == 0)
        }
        Check::ResI => {
            let pp = poly_params::<F>(tr, n, ell)?;
            tr.constrain(format!("monomial exponents in [1, {}]", 2 * n - 1));
            let sweep = residues::resi_sweep(ell, &pp)?;
            let sign = if (ell + usize::from(mutate)) % 2 == 0 { F::one() } else { -F::one() };
            let mut ok = true;
            for e in &sweep {
                let d = e.x_sum.clone() - sign.clone() * e.y_sum.clone();
                ok &= d.is_zero();
                tr.record(format!("x-sum{:?}", e.exponents), &e.x_sum);
                tr.record(format!("y-sum{:?}", e.exponents), &e.y_sum);
            }
            Ok(ok)
        }
        Check::Theta => {
            let k = cfg.order;
            let mut ok = true;
            for a in 1..=5 {
                let u: F = tr.fresh(&format!("u{a}"))?;
                let th = theta(&u, 1, k)?;
                let mut minus_inv = -u.inv()?;
                if mutate {
                    minus_inv = -minus_inv;
                }
                let shifted = theta_monomial(&u, 1, 1, k)?;
                let inverted = theta(&u.inv()?, 1, k)?;
                let want = th.scale(&minus_inv);
                ok &= shifted == want && inverted == want;
                tr.record(format!("theta(u{a})"), &th);
            }
            let two = theta(&F::from_i64(2), 1, 1)?;
            ok &= two.coeffs() == [-F::one(), F::from_i64(7).div(&F::from_i64(2))?];
            let cube = {
                let e = euler::<F>(1, k);
                e.clone() * e.clone() * e
            };
            ok &= theta_reduced(&F::one(), k)? == cube;
            tr.record("theta(2) mod p^2", &two);
            tr.record("theta_reduced(1)", &cube);
            Ok(ok)
        }
    }
}

fn notes_for(cfg: &RunConfig) -> Vec<String> {
    let mut notes = Vec::new();
    match cfg.check {
        Check::Xt | Check::Detprod => notes.push(
            "the root-of-unity constant of the theta-basis determinant is not computed; only the product in which it cancels is checked"
                .into(),
        ),
        Check::Kbi => notes.push("lowering formula includes the overall sign (-1)^l".into()),
        Check::Bc1 => notes.push(
            "the printed string with l raising operators vanishes for depth reasons alone; the verdict uses l+1 free spectral values"
                .into(),
        ),
        Check::Bc2 => notes.push("lowering operators act on the singular vector of the reversed product".into()),
        Check::Xx => notes.push("the dual weight uses the same dynamical shift as the plain weight".into()),
        Check::ResI => notes.push("f is a symmetrized monomial with every exponent in [1, 2n-1], g = 1".into()),
        _ => {}
    }
    if cfg.check.has_condition() && cfg.lift_condition {
        notes.push("hypothesis lifted: a nonzero value means the condition is needed".into());
    }
    if cfg.mutate {
        notes.push("mutation mode: one coefficient perturbed, the check is expected to fail".into());
    }
    notes
}

struct TrialResult {
    record: TrialRecord,
    error: Option<Error>,
}

fn run_trial<F: Scalar>(cfg: &RunConfig, index: usize) -> TrialResult {
    let base = SamplerConfig { seed: cfg.seed, bound: cfg.bound, max_retries: 10_000 }.for_trial(index);
    let mut last_err = None;
    for attempt in 0..MAX_RESAMPLES {
        let scfg = if attempt == 0 { base } else { base.for_trial(attempt) };
        let mut tr = Trial::new(scfg);
        let res = eval_trial::<F>(cfg, &mut tr);
        match res {
            Ok(holds) => {
                return TrialResult {
                    record: TrialRecord {
                        index,
                        seed: scfg.seed,
                        resamples: attempt,
                        draws: tr.sampler.take_log(),
                        constraints: tr.constraints,
                        values: tr.values,
                        holds,
                    },
                    error: None,
                }
            }
            Err(e) if e.is_degenerate() => last_err = Some(e),
            Err(e) => {
                last_err = Some(e);
                break;
            }
        }
    }
    TrialResult {
        record: TrialRecord {
            index,
            seed: base.seed,
            resamples: MAX_RESAMPLES,
            draws: Vec::new(),
            constraints: Vec::new(),
            values: Vec::new(),
            holds: false,
        },
        error: last_err,
    }
}

fn run_in<F: Scalar>(cfg: &RunConfig) -> (Vec<TrialRecord>, Option<Error>) {
    let results: Vec<TrialResult> = (0..cfg.trials).into_par_iter().map(|k| run_trial::<F>(cfg, k)).collect();
    let mut err = None;
    let mut records = Vec::new();
    for r in results {
        if err.is_none() {
            err = r.error;
        }
        records.push(r.record);
    }
    (records, err)
}

/// Run a configuration. Usage errors are returned; everything else ends up in
/// the report's verdict.
pub fn run(cfg: &RunConfig) -> Result<Report> {
    cfg.validate()?;
    let start = Instant::now();
    let (trials, err) = match cfg.field {
        Field::Rational => run_in::<Rational>(cfg),
        Field::Prime(2305843009213693951) => run_in::<ModP<2305843009213693951>>(cfg),
        Field::Prime(2147483647) => run_in::<ModP<2147483647>>(cfg),
        Field::Prime(1000000007) => run_in::<ModP<1000000007>>(cfg),
        Field::Prime(998244353) => run_in::<ModP<998244353>>(cfg),
        Field::Prime(p) => return Err(Error::Usage(format!("prime {p} is not supported"))),
    };
    if let Some(Error::Usage(m)) = &err {
        return Err(Error::Usage(m.clone()));
    }
    let all_hold = trials.iter().all(|t| t.holds);
    let verdict = match (&err, all_hold) {
        (Some(_), _) => Verdict::Error,
        (None, true) => Verdict::Verified,
        (None, false) if cfg.lift_condition && cfg.check.has_condition() => Verdict::ConditionNotSatisfied,
        (None, false) => Verdict::Falsified,
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        prng: PRNG_NAME.into(),
        config: cfg.clone(),
        trials,
        verdict,
        error: err.map(|e| e.to_string()),
        notes: notes_for(cfg),
        timing_ms: start.elapsed().as_millis() as u64,
    })
}

/// Re-run a report's embedded configuration; the flag says whether the new
/// report matches the old one apart from timing.
pub fn replay(report: &Report) -> Result<(Report, bool)> {
    if report.schema_version != SCHEMA_VERSION {
        return Err(Error::Usage(format!("unsupported schema version {}", report.schema_version)));
    }
    let fresh = run(&report.config)?;
    let same =
        serde_json::to_string(&fresh.without_timing()).ok() == serde_json::to_string(&report.without_timing()).ok();
    Ok((fresh, same))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    #[serde(default)]
    run: Vec<toml::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub index: usize,
    pub check: Option<String>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub entries: Vec<SuiteEntry>,
    pub verdict: Verdict,
    pub timing_ms: u64,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("suite report serializes")
    }
}

/// Parse a TOML manifest with one `[[run]]` table per configuration.
pub fn parse_manifest(text: &str) -> Result<Vec<std::result::Result<RunConfig, String>>> {
    let m: Manifest = toml::from_str(text).map_err(|e| Error::Usage(format!("bad manifest: {e}")))?;
    if m.run.is_empty() {
        return Err(Error::Usage("manifest lists no runs".into()));
    }
    Ok(m.run.into_iter().map(|v| v.try_into::<RunConfig>().map_err(|e| e.to_string())).collect())
}

/// Run every manifest entry; entry failures are recorded, not fatal.
pub fn run_suite(text: &str) -> Result<SuiteReport> {
    let start = Instant::now();
    let entries: Vec<SuiteEntry> = parse_manifest(text)?
        .into_par_iter()
        .enumerate()
        .map(|(index, parsed)| match parsed {
            Err(e) => SuiteEntry {
                index,
                check: None,
                verdict: Verdict::Error,
                error: Some(format!("usage: {e}")),
                report: None,
            },
            Ok(cfg) => match run(&cfg) {
                Ok(r) => SuiteEntry {
                    index,
                    check: Some(cfg.check.to_string()),
                    verdict: r.verdict,
                    error: r.error.clone(),
                    report: Some(r),
                },
                Err(e) => SuiteEntry {
                    index,
                    check: Some(cfg.check.to_string()),
                    verdict: Verdict::Error,
                    error: Some(e.to_string()),
                    report: None,
                },
            },
        })
        .collect();
    let rank = |v: Verdict| match v {
        Verdict::Verified => 0,
        Verdict::ConditionNotSatisfied => 1,
        Verdict::Falsified => 2,
        Verdict::Error => 3,
    };
    let verdict = entries.iter().map(|e| e.verdict).max_by_key(|&v| rank(v)).unwrap_or(Verdict::Verified);
    Ok(SuiteReport { schema_version: SCHEMA_VERSION, entries, verdict, timing_ms: start.elapsed().as_millis() as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(check: Check) -> RunConfig {
        RunConfig { trials: 2, ..RunConfig::new(check) }
    }

    #[test]
    fn check_names_round_trip() {
        for c in Check::ALL {
            assert_eq!(c.name().parse::<Check>().unwrap(), c);
            let j = serde_json::to_string(&c).unwrap();
            assert_eq!(serde_json::from_str::<Check>(&j).unwrap(), c);
        }
        assert_eq!("resi".parse::<Check>().unwrap(), Check::ResI);
    }

    #[test]
    fn field_parsing() {
        assert_eq!("rational".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("prime:998244353".parse::<Field>().unwrap(), Field::Prime(998244353));
        assert!("prime:13".parse::<Field>().is_err());
    }

    #[test]
    fn jing_verifies_and_mutation_falsifies() {
        let r = run(&RunConfig { ell: 3, ..cfg(Check::Jing) }).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
        let r = run(&RunConfig { ell: 3, mutate: true, ..cfg(Check::Jing) }).unwrap();
        assert_eq!(r.verdict, Verdict::Falsified);
    }

    #[test]
    fn lifted_condition() {
        let r = run(&RunConfig { lift_condition: true, ..cfg(Check::Id2) }).unwrap();
        assert_eq!(r.verdict, Verdict::ConditionNotSatisfied);
        assert_eq!(r.verdict.exit_code(), 1);
    }

    #[test]
    fn usage_errors() {
        assert!(matches!(run(&RunConfig { n: 0, ..cfg(Check::Jing) }), Err(Error::Usage(_))));
        assert!(matches!(run(&RunConfig { i: 2, j: 2, ..cfg(Check::Id1) }), Err(Error::Usage(_))));
        assert!(matches!(parse_manifest(""), Err(Error::Usage(_))));
    }

    #[test]
    fn replay_is_identical() {
        let r = run(&RunConfig { field: Field::Prime(1000000007), ..cfg(Check::Id1) }).unwrap();
        let text = r.to_json();
        let back = Report::from_json(&text).unwrap();
        let (_, same) = replay(&back).unwrap();
        assert!(same);
    }
}
