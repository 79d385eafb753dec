//! Beta function and the lattice constants α, β, γ.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_path, integrate_real, Abscissa, QuadratureSpec, SingularEnds};

// Lanczos coefficients, g = 671/128, 14 terms.
const LANCZOS: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    let tmp = x + 5.242_187_5;
    let tmp = (x + 0.5) * tmp.ln() - tmp;
    let mut ser = 0.999_999_999_999_997_092;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    tmp + (2.506_628_274_631_000_5 * ser / x).ln()
}

pub fn beta_function(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "beta function needs positive arguments, got ({a}, {b})"
        )));
    }
    Ok((ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp())
}

/// `∫₀¹ t^{a−1}(1−t)^{b−1} dt` by quadrature, independent of the Gamma route.
///
/// Each half is desingularised by a power substitution: `t = u^{1/a}` on
/// `[0, 1/2]` and `1 − t = v^{1/b}` on `[1/2, 1]`.
pub fn beta_by_quadrature(a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "beta function needs positive arguments, got ({a}, {b})"
        )));
    }
    let left = integrate_real(
        |u| {
            let t = u.powf(1.0 / a);
            (1.0 - t).powf(b - 1.0) / a
        },
        0.0,
        0.5f64.powf(a),
        spec,
    )?;
    let right = integrate_real(
        |v| {
            let s = v.powf(1.0 / b);
            (1.0 - s).powf(a - 1.0) / b
        },
        0.0,
        0.5f64.powf(b),
        spec,
    )?;
    Ok(left.value + right.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatticeConstants {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

pub fn alpha() -> f64 {
    beta_function(2.0 / 3.0, 1.0 / 6.0).unwrap() / (6.0 * 2f64.cbrt())
}

pub fn beta() -> f64 {
    beta_function(1.0 / 3.0, 1.0 / 6.0).unwrap() / (4.0 * 3f64.sqrt())
}

/// `γ = ∫_{1/2}^1 dt / ∛(4(1−t²)(4t²−1)²)` by singular-endpoint quadrature.
pub fn gamma_by_quadrature(spec: &QuadratureSpec) -> Result<f64> {
    let f = |x: Abscissa| {
        // exact differences at both anchors
        let one_minus_t = (1.0 - x.anchor) - x.offset;
        let two_t_minus_one = (2.0 * x.anchor - 1.0) + 2.0 * x.offset;
        let t = x.value();
        let q = 4.0 * one_minus_t * (1.0 + t) * (two_t_minus_one * (2.0 * t + 1.0)).powi(2);
        1.0 / q.cbrt()
    };
    Ok(integrate_path(f, 0.5, 1.0, spec, SingularEnds::BOTH)?.value)
}

pub fn lattice_constants(spec: &QuadratureSpec) -> Result<LatticeConstants> {
    Ok(LatticeConstants {
        alpha: alpha(),
        beta: beta(),
        gamma: gamma_by_quadrature(spec)?,
    })
}

impl LatticeConstants {
    /// `|β − √3γ| / β`.
    pub fn beta_gamma_residual(&self) -> f64 {
        (self.beta - 3f64.sqrt() * self.gamma).abs() / self.beta
    }
}
