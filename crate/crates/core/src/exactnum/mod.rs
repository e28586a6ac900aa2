//! Exact scalars, truncated series in the nome, theta functions and the
//! seeded point sampler.

mod sampler;
mod scalar;
mod series;
mod theta;

pub use sampler::{Constraint, Draw, Sampler, SamplerConfig, PRNG_NAME};
pub use scalar::{to_prime_field, ModP, Rational, Ring, Scalar};
pub use series::PSeries;
pub use theta::{euler, pochhammer, pochhammer_series, theta, theta_monomial, theta_reduced, theta_series};

use num_rational::BigRational;

use crate::error::Result;

/// Map a sampled rational into the working field.
pub fn lift<F: Scalar>(r: &BigRational) -> Result<F> {
    F::from_rational(r)
}

/// Map several sampled rationals into the working field.
pub fn lift_all<F: Scalar>(rs: &[BigRational]) -> Result<Vec<F>> {
    rs.iter().map(F::from_rational).collect()
}
