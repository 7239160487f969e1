//! Pointwise evaluation of the hyperbolic convolution kernels
//! `C(ξ) = (ω/π) sech(ωξ)` and `S(ξ) = (ω/π) / sinh(ωξ)`, their exponential
//! envelopes, the split of `S` into a Hilbert part plus a bounded remainder,
//! and the weighted-space majorant kernels with their closed-form integrals.
//!
//! Hyperbolic functions are evaluated through `exp(-|x|)`, so every kernel
//! flushes to zero once `ω|ξ|` exceeds roughly 745 (f64) or 103 (f32). That is
//! the effective support of the kernels in floating point.

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Transform parameter `ω > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaParam<T> {
    omega: T,
}

impl<T: Real> OmegaParam<T> {
    pub fn new(omega: T) -> Result<Self> {
        if !(omega.is_finite() && omega > T::zero()) {
            return Err(invalid("omega", format!("must be finite and > 0, got {omega}")));
        }
        Ok(Self { omega })
    }

    #[inline]
    pub fn get(self) -> T {
        self.omega
    }
}

/// Weight exponent `σ ≥ 0` of the space `L²_σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaParam<T> {
    sigma: T,
}

impl<T: Real> SigmaParam<T> {
    pub fn new(sigma: T) -> Result<Self> {
        if !(sigma.is_finite() && sigma >= T::zero()) {
            return Err(invalid("sigma", format!("must be finite and >= 0, got {sigma}")));
        }
        Ok(Self { sigma })
    }

    #[inline]
    pub fn get(self) -> T {
        self.sigma
    }

    /// The ratio `a = σ/ω`, which must satisfy `a < 1` for every bound in the crate.
    pub fn ratio_to(self, omega: OmegaParam<T>) -> Result<T> {
        let a = self.sigma / omega.get();
        if a >= T::one() {
            return Err(invalid(
                "sigma",
                format!("sigma/omega must be < 1, got {}/{}", self.sigma, omega.get()),
            ));
        }
        Ok(a)
    }
}

/// `sech(x)` without overflow.
#[inline]
pub fn sech<T: Real>(x: T) -> T {
    let e = (-x.abs()).exp();
    (e + e) / (T::one() + e * e)
}

/// `1/sinh(x)` for `x != 0`, accurate near zero.
#[inline]
pub(crate) fn csch<T: Real>(x: T) -> T {
    let ax = x.abs();
    let e = (-ax).exp();
    let denom = -(-(ax + ax)).exp_m1();
    let v = (e + e) / denom;
    if x < T::zero() {
        -v
    } else {
        v
    }
}

/// `C_ω(ξ) = (ω/π) sech(ωξ)`.
#[inline]
pub fn eval_c<T: Real>(omega: OmegaParam<T>, xi: T) -> T {
    let w = omega.get();
    w / T::PI() * sech(w * xi)
}

/// `S_ω(ξ) = (ω/π) / sinh(ωξ)`; undefined at `ξ = 0`.
pub fn eval_s<T: Real>(omega: OmegaParam<T>, xi: T) -> Result<T> {
    if xi == T::zero() {
        return Err(Error::Domain { what: "S kernel", at: 0.0 });
    }
    Ok(eval_s_unchecked(omega, xi))
}

#[inline]
pub(crate) fn eval_s_unchecked<T: Real>(omega: OmegaParam<T>, xi: T) -> T {
    let w = omega.get();
    w / T::PI() * csch(w * xi)
}

/// Below this value of `|ωξ|` the remainder uses its Taylor series.
pub const R_SERIES_THRESHOLD: f64 = 1e-3;

/// Bounded remainder `r(ξ) = S_ω(ξ) − 1/(πξ)`, continuously extended by `r(0) = 0`.
pub fn eval_r<T: Real>(omega: OmegaParam<T>, xi: T) -> T {
    let w = omega.get();
    let x = w * xi;
    if x.abs() < T::lit(R_SERIES_THRESHOLD) {
        // 1/sinh x = 1/x - x/6 + 7x^3/360 - ...
        let x2 = x * x;
        w / T::PI() * x * (-T::one() / T::lit(6.0) + T::lit(7.0) / T::lit(360.0) * x2)
    } else {
        eval_s_unchecked(omega, xi) - T::one() / (T::PI() * xi)
    }
}

/// Result of checking the two-sided exponential envelope of `C_ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CEnvelope<T> {
    pub lower: T,
    pub value: T,
    pub upper: T,
    /// `upper − value`, computed without cancellation.
    pub gap: T,
    pub holds: bool,
}

/// `(ω/π)e^{−ω|ξ|} ≤ C_ω(ξ) < (2ω/π)e^{−ω|ξ|}`.
pub fn check_c_envelope<T: Real>(omega: OmegaParam<T>, xi: T) -> CEnvelope<T> {
    let w = omega.get();
    let scale = w / T::PI();
    let x = w * xi.abs();
    let e = (-x).exp();
    let lower = scale * e;
    let upper = (scale + scale) * e;
    let value = eval_c(omega, xi);
    // upper - C = (2ω/π) e^{-x} (1 - 1/(1 + e^{-2x})) = (2ω/π) e^{-3x} / (1 + e^{-2x})
    let e2 = e * e;
    let gap = (scale + scale) * e * e2 / (T::one() + e2);
    // once the gap underflows, its logarithm relative to upper, -2x - ln(1+e^{-2x}), is still finite
    let log_rel_gap = -(x + x) - e2.ln_1p();
    let strict = gap > T::zero() || log_rel_gap.is_finite();
    CEnvelope { lower, value, upper, gap, holds: lower <= value && strict }
}

/// Result of checking the exponential majorant of `|S_ω|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SEnvelope<T> {
    pub value: T,
    pub bound: T,
    /// `(bound − |S|)/bound`. Zero up to rounding: the majorant is attained.
    pub slack: T,
    pub holds: bool,
}

/// `|S_ω(ξ)| ≤ (2ω/π) e^{−ω|ξ|} / (1 − e^{−2ω|ξ|})`.
///
/// The right-hand side equals `|S_ω(ξ)|` identically, so the comparison allows
/// four ulps of rounding and `slack` reports the relative difference.
pub fn check_s_envelope<T: Real>(omega: OmegaParam<T>, xi: T) -> Result<SEnvelope<T>> {
    let value = eval_s(omega, xi)?.abs();
    let w = omega.get();
    let x = w * xi.abs();
    let e = (-x).exp();
    // 1 - e^{-2x} evaluated as -expm1(-2x) so the bound keeps full precision near 0
    let bound = (w + w) / T::PI() * e / -(-(x + x)).exp_m1();
    let slack = (bound - value) / bound;
    let holds = value <= bound * (T::one() + T::lit(4.0) * T::epsilon());
    Ok(SEnvelope { value, bound, slack, holds })
}

/// Majorant of the weighted `C` kernel: `(ω/π) e^{σ|ξ|} / cosh(ωξ)`.
pub fn eval_kc_envelope<T: Real>(omega: OmegaParam<T>, sigma: SigmaParam<T>, xi: T) -> Result<T> {
    sigma.ratio_to(omega)?;
    let w = omega.get();
    let ax = xi.abs();
    let e = (-(w * ax)).exp();
    Ok(w / T::PI() * ((sigma.get() - w) * ax).exp() * (T::one() + T::one()) / (T::one() + e * e))
}

/// Majorant of the weighted `S` kernel correction: `(ω/π) σ|ξ| e^{σ|ξ|} / sinh(ω|ξ|)`,
/// extended by its limit `σ/π` at zero.
pub fn eval_ks_envelope<T: Real>(omega: OmegaParam<T>, sigma: SigmaParam<T>, xi: T) -> Result<T> {
    sigma.ratio_to(omega)?;
    let w = omega.get();
    let s = sigma.get();
    let ax = xi.abs();
    if ax == T::zero() {
        return Ok(s / T::PI());
    }
    Ok(w / T::PI() * s * ax * (s * ax).exp() * csch(w * ax))
}

fn check_ratio<T: Real>(a: T) -> Result<()> {
    if !(a >= T::zero() && a < T::one()) {
        return Err(Error::Domain { what: "closed-form integral (needs 0 <= a < 1)", at: a.as_f64() });
    }
    Ok(())
}

/// `∫₀^∞ cosh(aξ)/cosh(ξ) dξ = π / (2 cos(πa/2))` for `0 ≤ a < 1`.
pub fn closed_form_cosh_integral<T: Real>(a: T) -> Result<T> {
    check_ratio(a)?;
    Ok(T::PI() / ((T::one() + T::one()) * (T::FRAC_PI_2() * a).cos()))
}

/// `∫₀^∞ ξ cosh(aξ)/sinh(ξ) dξ = π² / (4 sin²(π(1−a)/2))` for `0 ≤ a < 1`.
pub fn closed_form_sinh_integral<T: Real>(a: T) -> Result<T> {
    check_ratio(a)?;
    let s = (T::FRAC_PI_2() * (T::one() - a)).sin();
    Ok(T::PI() * T::PI() / (T::lit(4.0) * s * s))
}

/// Integrand `cosh(aξ)/cosh(ξ)` for `ξ ≥ 0`, evaluated without overflow.
pub fn cosh_ratio_integrand<T: Real>(a: T, xi: T) -> T {
    let x = xi.abs();
    let num = T::one() + (-(a + a) * x).exp();
    let den = T::one() + (-(x + x)).exp();
    ((a - T::one()) * x).exp() * num / den
}

/// Integrand `ξ cosh(aξ)/sinh(ξ)` for `ξ ≥ 0`, with value 1 at the origin.
pub fn xi_cosh_sinh_integrand<T: Real>(a: T, xi: T) -> T {
    let x = xi.abs();
    if x == T::zero() {
        return T::one();
    }
    let num = T::one() + (-(a + a) * x).exp();
    let den = -(-(x + x)).exp_m1();
    x * ((a - T::one()) * x).exp() * num / den
}

/// Upper bound on `‖k^c‖_{L¹}`: `2/(1 − a)`.
pub fn kc_l1_bound<T: Real>(a: T) -> T {
    (T::one() + T::one()) / (T::one() - a)
}

/// Upper bound on `‖k^s‖_{L¹}`: `π/(1 − a)²`.
pub fn ks_l1_bound<T: Real>(a: T) -> T {
    let d = T::one() - a;
    T::PI() / (d * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn w(x: f64) -> OmegaParam<f64> {
        OmegaParam::new(x).unwrap()
    }

    #[test]
    fn omega_rejects_non_positive() {
        assert!(OmegaParam::new(0.0).is_err());
        assert!(OmegaParam::new(-1.0).is_err());
        assert!(OmegaParam::new(f64::NAN).is_err());
        assert!(SigmaParam::new(-0.1).is_err());
        let s = SigmaParam::new(1.0).unwrap();
        assert!(s.ratio_to(w(1.0)).is_err());
        assert_relative_eq!(s.ratio_to(w(4.0)).unwrap(), 0.25);
    }

    #[test]
    fn c_kernel_values() {
        assert_relative_eq!(eval_c(w(1.0), 0.0), 1.0 / PI, max_relative = 1e-15);
        assert_eq!(eval_c(w(1.0), -2.0), eval_c(w(1.0), 2.0));
        // mpmath, 40 digits
        assert_relative_eq!(eval_c(w(2.0), 1.0), 0.169_214_954_415_147_58, max_relative = 1e-14);
        assert_eq!(eval_c(w(1.0), 800.0), 0.0);
    }

    #[test]
    fn s_kernel_values() {
        assert_relative_eq!(eval_s(w(1.0), 1.0).unwrap(), 0.270_855_652_551_582_64, max_relative = 1e-14);
        assert_eq!(eval_s(w(1.0), -1.0).unwrap(), -eval_s(w(1.0), 1.0).unwrap());
        assert!(matches!(eval_s(w(1.0), 0.0), Err(Error::Domain { .. })));
        assert_relative_eq!(eval_s(w(3.0), 1e-9).unwrap(), 1.0 / (PI * 1e-9), max_relative = 1e-12);
    }

    #[test]
    fn remainder_values() {
        assert_eq!(eval_r(w(1.0), 0.0), 0.0);
        let slope = eval_r(w(1.0), 1e-4) / 1e-4;
        assert!((slope + 1.0 / (6.0 * PI)).abs() < 1e-6);
        // mpmath: -0.0530516476354048...
        assert_relative_eq!(slope, -0.053_051_647_635_404_86, max_relative = 1e-12);
        assert_relative_eq!(eval_r(w(1.0), 3.0), -0.074_329_102_914_626_60, max_relative = 1e-12);
    }

    #[test]
    fn remainder_branches_agree_at_switch() {
        for &omega in &[0.5, 1.0, PI, 10.0] {
            let xi = R_SERIES_THRESHOLD / omega;
            let below = eval_r(w(omega), xi * (1.0 - 1e-12));
            let above = eval_r(w(omega), xi * (1.0 + 1e-12));
            assert!((below - above).abs() < 1e-12, "omega={omega}: {below} vs {above}");
        }
    }

    #[test]
    fn c_envelope_examples() {
        let e0 = check_c_envelope(w(1.0), 0.0);
        assert!(e0.holds);
        assert_eq!(e0.lower, e0.value);
        assert_relative_eq!(e0.upper, 2.0 / PI);
        assert!(check_c_envelope(w(1.0), 5.0).holds);
        assert!(check_c_envelope(w(3.0), -2.0).holds);
        // far tail where upper and C agree to every printed digit
        let far = check_c_envelope(w(1.0), 30.0);
        assert!(far.holds && far.gap > 0.0);
        let beyond = check_c_envelope(w(1.0), 700.0);
        assert!(beyond.holds && beyond.gap == 0.0);
    }

    #[test]
    fn s_envelope_is_attained() {
        let e = check_s_envelope(w(1.0), 1.0).unwrap();
        assert!(e.holds);
        assert!(e.slack.abs() < 1e-15);
        assert!(check_s_envelope(w(1.0), 10.0).unwrap().holds);
        assert!(check_s_envelope(w(2.0), 0.01).unwrap().holds);
        assert!(check_s_envelope(w(2.0), 0.0).is_err());
    }

    #[test]
    fn weighted_envelopes() {
        let s0 = SigmaParam::new(0.0).unwrap();
        assert_relative_eq!(eval_kc_envelope(w(1.0), s0, 0.0).unwrap(), 1.0 / PI);
        let s = SigmaParam::new(0.5).unwrap();
        assert_relative_eq!(
            eval_kc_envelope(w(1.0), s, 2.0).unwrap(),
            0.229_986_967_845_110_68,
            max_relative = 1e-14
        );
        let s1 = SigmaParam::new(1.0).unwrap();
        assert_eq!(eval_kc_envelope(w(2.0), s1, -1.0).unwrap(), eval_kc_envelope(w(2.0), s1, 1.0).unwrap());
        assert!(eval_kc_envelope(w(1.0), s1, 1.0).is_err());
        assert_relative_eq!(eval_ks_envelope(w(2.0), s1, 0.0).unwrap(), 1.0 / PI);
        let near = eval_ks_envelope(w(2.0), s1, 1e-9).unwrap();
        assert_relative_eq!(near, 1.0 / PI, max_relative = 1e-8);
    }

    #[test]
    fn closed_forms() {
        assert_relative_eq!(closed_form_cosh_integral(0.0).unwrap(), PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(closed_form_cosh_integral(0.5).unwrap(), PI / 2f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(closed_form_cosh_integral(0.9).unwrap(), 10.041_242_039_539_874, max_relative = 1e-13);
        assert_relative_eq!(closed_form_sinh_integral(0.0).unwrap(), PI * PI / 4.0, max_relative = 1e-15);
        assert_relative_eq!(closed_form_sinh_integral(0.5).unwrap(), PI * PI / 2.0, max_relative = 1e-15);
        assert_relative_eq!(closed_form_sinh_integral(0.75).unwrap(), 16.848_468_600_728_238, max_relative = 1e-13);
        assert!(closed_form_cosh_integral(1.0).is_err());
        assert!(closed_form_sinh_integral(1.2).is_err());
        assert!(closed_form_sinh_integral(-0.1).is_err());
    }

    #[test]
    fn integrands_are_stable() {
        assert_eq!(cosh_ratio_integrand(0.5, 0.0), 1.0);
        assert!(cosh_ratio_integrand(0.9f64, 5000.0).is_finite());
        assert_eq!(xi_cosh_sinh_integrand(0.5, 0.0), 1.0);
        assert_relative_eq!(xi_cosh_sinh_integrand(0.5, 1e-8), 1.0, max_relative = 1e-12);
        assert_relative_eq!(
            cosh_ratio_integrand(0.3, 2.0),
            (0.6f64).cosh() / 2f64.cosh(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn single_precision_kernels() {
        let w32 = OmegaParam::new(1.0f32).unwrap();
        assert!((eval_c(w32, 0.0) - std::f32::consts::FRAC_1_PI).abs() < 1e-7);
        assert!((eval_r(w32, 0.0)).abs() == 0.0);
        assert!(check_c_envelope(w32, 3.0).holds);
    }
}
