use crate::error::{Error, Result};

/// Above this argument `erf(√t)` equals 1 to double precision.
const ASYMPTOTIC_T: f64 = 36.0;

/// Zeroth-order Boys function `F₀(t) = ∫₀¹ exp(−t u²) du`.
///
/// Uses the all-positive series `e^{−t} Σ_k (2t)^k / (2k+1)!!`, which is
/// well-conditioned from `t = 0` upward, and `½√(π/t)` past [`ASYMPTOTIC_T`].
pub fn boys_f0(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("Boys argument must be >= 0, got {t}")));
    }
    if t >= ASYMPTOTIC_T {
        return Ok(0.5 * (std::f64::consts::PI / t).sqrt());
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= 2.0 * t / (2.0 * k + 1.0);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    Ok((-t).exp() * sum)
}
