use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the generator, recorded in reports.
pub const PRNG_NAME: &str = "splitmix64";

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    /// Bound on |numerator| and denominator.
    pub bound: u64,
    pub max_retries: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { seed: 1, bound: 1000, max_retries: 10_000 }
    }
}

impl SamplerConfig {
    /// Independent stream for trial `index`, so trials can run in any order.
    pub fn for_trial(&self, index: usize) -> SamplerConfig {
        let seed = self.seed ^ (index as u64 + 1).wrapping_mul(GOLDEN_GAMMA);
        SamplerConfig { seed, ..*self }
    }
}

/// A nonvanishing condition on a candidate value.
#[derive(Debug, Clone, PartialEq)]
pub enum Constraint {
    NonZero,
    /// `v^s != 1` for `s = 1..=k`.
    NotRootOfUnity(u32),
    DistinctFrom(Vec<BigRational>),
}

impl Constraint {
    pub fn holds(&self, v: &BigRational) -> bool {
        match self {
            Constraint::NonZero => !v.is_zero(),
            Constraint::NotRootOfUnity(k) => {
                let mut p = BigRational::one();
                for _ in 0..*k {
                    p *= v;
                    if p.is_one() {
                        return false;
                    }
                }
                true
            }
            Constraint::DistinctFrom(others) => others.iter().all(|o| o != v),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Constraint::NonZero => "nonzero".into(),
            Constraint::NotRootOfUnity(k) => format!("v^s != 1 for s=1..{k}"),
            Constraint::DistinctFrom(o) => format!("distinct from {} earlier values", o.len()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Draw {
    pub name: String,
    pub value: String,
}

/// Seeded rejection sampler for bounded-height rationals.
pub struct Sampler {
    cfg: SamplerConfig,
    rng: SplitMix64,
    log: Vec<Draw>,
}

impl Sampler {
    pub fn new(cfg: SamplerConfig) -> Self {
        Sampler { cfg, rng: SplitMix64::seed_from_u64(cfg.seed), log: Vec::new() }
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.cfg
    }

    fn candidate(&mut self) -> BigRational {
        let b = self.cfg.bound.max(1) as i64;
        let num = self.rng.gen_range(-b..=b);
        let den = self.rng.gen_range(1..=b);
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    /// Draw a nonzero value satisfying every constraint.
    pub fn sample(&mut self, name: &str, constraints: &[Constraint]) -> Result<BigRational> {
        self.sample_with(name, |v| constraints.iter().all(|c| c.holds(v)))
    }

    /// Draw a nonzero value accepted by an arbitrary predicate.
    pub fn sample_with(&mut self, name: &str, accept: impl Fn(&BigRational) -> bool) -> Result<BigRational> {
        for _ in 0..self.cfg.max_retries {
            let v = self.candidate();
            if !v.is_zero() && accept(&v) {
                self.log.push(Draw { name: name.to_string(), value: format!("{}/{}", v.numer(), v.denom()) });
                return Ok(v);
            }
        }
        Err(Error::Exhausted(self.cfg.max_retries))
    }

    /// Nonzero value avoiding 0, 1 and -1 and everything in `avoid`.
    pub fn generic(&mut self, name: &str, avoid: &[BigRational]) -> Result<BigRational> {
        self.sample_with(name, |v| {
            let one = BigRational::one();
            *v != one && *v != -one && avoid.iter().all(|a| a != v)
        })
    }

    /// Record a derived value (e.g. an imposed constraint) in the draw log.
    pub fn note(&mut self, name: &str, v: &BigRational) {
        self.log.push(Draw { name: name.to_string(), value: format!("{}/{}", v.numer(), v.denom()) });
    }

    pub fn log(&self) -> &[Draw] {
        &self.log
    }

    pub fn take_log(&mut self) -> Vec<Draw> {
        std::mem::take(&mut self.log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn same_seed_same_values() {
        let cfg = SamplerConfig { seed: 1, ..Default::default() };
        let mut a = Sampler::new(cfg);
        let mut b = Sampler::new(cfg);
        for _ in 0..20 {
            assert_eq!(a.sample("v", &[Constraint::NonZero]).unwrap(), b.sample("v", &[Constraint::NonZero]).unwrap());
        }
        assert_eq!(a.log(), b.log());
    }

    #[test]
    fn root_of_unity_constraint() {
        let mut s = Sampler::new(SamplerConfig { seed: 7, bound: 2, max_retries: 10_000 });
        for _ in 0..50 {
            let v = s.sample("eta", &[Constraint::NotRootOfUnity(3)]).unwrap();
            assert!(Constraint::NotRootOfUnity(3).holds(&v));
            assert!(v.abs() != BigRational::one());
        }
    }

    #[test]
    fn impossible_constraint_exhausts() {
        let mut s = Sampler::new(SamplerConfig { seed: 3, bound: 5, max_retries: 100 });
        assert_eq!(s.sample_with("x", |_| false), Err(Error::Exhausted(100)));
    }

    #[test]
    fn values_respect_bound() {
        let mut s = Sampler::new(SamplerConfig { seed: 11, bound: 9, max_retries: 10 });
        for _ in 0..100 {
            let v = s.sample("x", &[]).unwrap();
            assert!(v.numer().magnitude() <= &9u32.into() && v.denom() <= &9.into());
        }
    }
}
