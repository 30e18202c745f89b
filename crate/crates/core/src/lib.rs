//! Positivity of quadratic-character partial sums and multiplicative Dyck paths.
//!
//! * [`numtheory`]: sieve, Legendre symbol, squarefree kernels.
//! * [`lplus`]: primes whose Legendre partial sums never go negative.
//! * [`paths`]: exact counting of multiplicative sign patterns whose partial
//!   sums stay non-negative.
//! * [`random_mult`]: Monte Carlo over random multiplicative functions,
//!   second moments, tail bounds and truncated Dirichlet series.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod lplus;
pub mod numtheory;
pub mod paths;
pub mod random_mult;

pub use error::{Error, Result};
pub use num_rational::Ratio;
