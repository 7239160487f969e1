//! Globally adaptive Gauss–Kronrod (7, 15) quadrature.

use crate::scalar::{CompensatedSum, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    /// Estimated absolute error.
    pub error: T,
    pub evaluations: usize,
    pub intervals: usize,
    pub converged: bool,
}

/// Stopping rule: stop once `error ≤ max(abs, rel·|value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        Self { abs: 1e-12, rel: 1e-12, max_intervals: 500 }
    }
}

impl QuadTolerance {
    pub fn absolute(abs: f64) -> Self {
        Self { abs, rel: 0.0, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn kronrod<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Segment<T> {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut k = fc * T::lit(WGK[7]);
    let mut g = fc * T::lit(WG[3]);
    for j in 0..7 {
        let dx = half * T::lit(XGK[j]);
        let pair = f(mid - dx) + f(mid + dx);
        k = k + pair * T::lit(WGK[j]);
        if j % 2 == 1 {
            g = g + pair * T::lit(WG[j / 2]);
        }
    }
    let value = k * half;
    let error = ((k - g) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]` by bisecting the segment with the largest error estimate.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, tol: QuadTolerance) -> Integral<T> {
    if a == b {
        return Integral { value: T::zero(), error: T::zero(), evaluations: 0, intervals: 0, converged: true };
    }
    let mut segments = vec![kronrod(&mut f, a, b)];
    let mut evaluations = 15;
    loop {
        let (value, error) = totals(&segments);
        let target = T::lit(tol.abs).max(T::lit(tol.rel) * value.abs());
        if error <= target || !error.is_finite() || segments.len() >= tol.max_intervals {
            return Integral {
                value,
                error,
                evaluations,
                intervals: segments.len(),
                converged: error <= target,
            };
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i)
            .expect("non-empty");
        let s = segments.swap_remove(worst);
        let mid = (s.a + s.b) * T::lit(0.5);
        if mid <= s.a || mid >= s.b {
            // segment cannot be split further in this precision
            segments.push(Segment { error: T::zero(), ..s });
            continue;
        }
        segments.push(kronrod(&mut f, s.a, mid));
        segments.push(kronrod(&mut f, mid, s.b));
        evaluations += 30;
    }
}

fn totals<T: Real>(segments: &[Segment<T>]) -> (T, T) {
    let mut v = CompensatedSum::new();
    let mut e = T::zero();
    for s in segments {
        v.add(s.value);
        e = e + s.error;
    }
    (v.value(), e)
}

/// Integrates over `[a, ∞)` for an integrand dominated by `amplitude·e^{−rate·(x−a)}`.
///
/// The range is cut where the analytic tail drops below half the absolute
/// tolerance; the tail bound is added to the reported error.
pub fn integrate_half_line<T: Real, F: FnMut(T) -> T>(
    f: F,
    a: T,
    amplitude: T,
    rate: T,
    tol: QuadTolerance,
) -> Integral<T> {
    let half_tol = T::lit(tol.abs * 0.5).max(T::min_positive_value());
    let len = ((amplitude / (rate * half_tol)).ln() / rate + T::LN_2() / rate).max(T::one());
    let cut = a + len;
    let tail = amplitude * (-(rate * len)).exp() / rate;
    let inner = QuadTolerance { abs: tol.abs * 0.5, ..tol };
    let mut out = integrate(f, a, cut, inner);
    out.error = out.error + tail;
    out.converged = out.converged && tail <= half_tol;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x.powi(5) - 3.0 * x * x, -1.0, 2.0, QuadTolerance::default());
        assert!(r.converged);
        assert_relative_eq!(r.value, (64.0 - 1.0) / 6.0 - 9.0, max_relative = 1e-14);
    }

    #[test]
    fn sqrt_singularity_converges() {
        let r = integrate(|x: f64| x.sqrt(), 0.0, 1.0, QuadTolerance { abs: 1e-11, rel: 0.0, max_intervals: 1000 });
        assert!(r.converged, "{r:?}");
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn half_line_exponential() {
        let r = integrate_half_line(|x: f64| (-2.0 * x).exp(), 0.0, 1.0, 2.0, QuadTolerance::absolute(1e-12));
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|x: f64| x, 1.0, 1.0, QuadTolerance::default());
        assert_eq!(r.value, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn reports_non_convergence() {
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, QuadTolerance { abs: 1e-12, rel: 0.0, max_intervals: 20 });
        assert!(!r.converged);
    }
}
