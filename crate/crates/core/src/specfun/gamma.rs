use std::f64::consts::PI;

use num_complex::Complex64;

use super::{c, is_nonpositive_integer};
use crate::error::{Error, Result};

const LANCZOS_G: f64 = 607.0 / 128.0;

const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_8e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// Lanczos sum and shifted argument for Re z ≥ ½.
fn lanczos(z: Complex64) -> (Complex64, Complex64) {
    let zm1 = z - 1.0;
    let mut sum = c(LANCZOS_COEF[0]);
    for (k, ck) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += *ck / (zm1 + k as f64);
    }
    (sum, zm1 + LANCZOS_G + 0.5)
}

/// Γ(z). Poles at 0, −1, −2, … are reported as [`Error::Pole`].
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("gamma at z = {}", z.re)));
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return PI / ((z * PI).sin() * gamma_unchecked(1.0 - z));
    }
    if z.im == 0.0 && z.re == z.re.round() && z.re <= 30.0 {
        // exact factorials for small positive integers
        let n = z.re as u32;
        return c((1..n).fold(1.0, |acc, k| acc * k as f64));
    }
    let (sum, t) = lanczos(z);
    let zm1 = z - 1.0;
    ((zm1 + 0.5) * t.ln() - t + HALF_LN_2PI).exp() * sum
}

/// ln Γ(z), any branch (callers only exponentiate it).
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole(format!("ln_gamma at z = {}", z.re)));
    }
    Ok(ln_gamma_unchecked(z))
}

fn ln_gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return c(PI.ln()) - (z * PI).sin().ln() - ln_gamma_unchecked(1.0 - z);
    }
    let (sum, t) = lanczos(z);
    (z - 0.5) * t.ln() - t + HALF_LN_2PI + sum.ln()
}

/// 1/Γ(z), entire; zero at the poles of Γ.
pub fn rgamma(z: Complex64) -> Complex64 {
    if is_nonpositive_integer(z) {
        return c(0.0);
    }
    if z.re < 0.5 {
        return (z * PI).sin() * gamma_unchecked(1.0 - z) / PI;
    }
    if z.norm() < 100.0 {
        1.0 / gamma_unchecked(z)
    } else {
        (-ln_gamma_unchecked(z)).exp()
    }
}
