use num_complex::Complex64;

use crate::error::{Error, Result};

/// `sum_{n<=K} f(n) n^-(sigma + i t)`.
///
/// A plain partial sum with no acceleration. Close to `sigma = 1/2` it is not
/// a reliable approximation of the full series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaEval {
    pub sigma: f64,
    pub t: f64,
    pub cutoff: u64,
    pub value: Complex64,
}

/// `steps[n - 1] = f(n)`; must cover `cutoff`.
pub fn zeta_truncated(steps: &[i8], sigma: f64, t: f64, cutoff: u64) -> Result<ZetaEval> {
    if cutoff == 0 {
        return Err(Error::domain("cutoff", "must be at least 1"));
    }
    if !(sigma > 0.0) {
        return Err(Error::domain("sigma", format!("{sigma} is not positive")));
    }
    if (steps.len() as u64) < cutoff {
        return Err(Error::domain(
            "cutoff",
            format!("{cutoff} exceeds the {} available values of f", steps.len()),
        ));
    }
    // Smallest terms first.
    let mut value = Complex64::new(0.0, 0.0);
    for n in (1..=cutoff).rev() {
        let f = steps[n as usize - 1];
        if f == 0 {
            continue;
        }
        let ln_n = (n as f64).ln();
        let magnitude = (-sigma * ln_n).exp();
        let term = Complex64::from_polar(magnitude, -t * ln_n);
        value += term * f64::from(f);
    }
    Ok(ZetaEval {
        sigma,
        t,
        cutoff,
        value,
    })
}
