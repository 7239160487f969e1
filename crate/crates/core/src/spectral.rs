//! Fourier multipliers of the kernels, with the convention
//! `û(λ) = ∫ u(t) e^{iλt} dt`:
//!
//! ```text
//! ĉ(λ) = sech(πλ/2ω)        ŝ(λ) = i·tanh(πλ/2ω)
//! ```
//!
//! `ŝ` only exists as a principal value. [`s_hat_truncated`] evaluates the
//! transform of `S_ω` restricted to `|t| ≥ ε`, and [`s_hat_extrapolated`]
//! recovers the limit `ε → 0` from a halving sequence of truncations.

use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::kernels::{eval_c, eval_s_unchecked, sech, OmegaParam};
use crate::quadrature::adaptive::{integrate, QuadTolerance};
use crate::scalar::{CompensatedSum, Real};

#[inline]
fn scaled<T: Real>(omega: OmegaParam<T>, lambda: T) -> T {
    T::FRAC_PI_2() * lambda / omega.get()
}

/// `ĉ(λ) = sech(πλ/(2ω))`.
pub fn c_hat<T: Real>(omega: OmegaParam<T>, lambda: T) -> T {
    sech(scaled(omega, lambda))
}

/// `ŝ(λ) = i·tanh(πλ/(2ω))`.
pub fn s_hat<T: Real>(omega: OmegaParam<T>, lambda: T) -> Complex<T> {
    Complex::new(T::zero(), scaled(omega, lambda).tanh())
}

/// `|ĉ(λ)|² + |ŝ(λ)|²`, which is identically one.
pub fn verify_crucial_identity<T: Real>(omega: OmegaParam<T>, lambda: T) -> T {
    let c = c_hat(omega, lambda);
    c * c + s_hat(omega, lambda).norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MultiplierKind {
    Phi,
    Psi,
}

/// Value of the 2×2 matrix multiplier of `Φ_ω` or `Ψ_ω` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiplierMatrix<T> {
    pub entries: [[Complex<T>; 2]; 2],
    pub lambda: T,
    pub kind: MultiplierKind,
}

/// `[[ĉ, ŝ], [ŝ, ĉ]]`.
pub fn phi_hat_matrix<T: Real>(omega: OmegaParam<T>, lambda: T) -> MultiplierMatrix<T> {
    let c = Complex::new(c_hat(omega, lambda), T::zero());
    let s = s_hat(omega, lambda);
    MultiplierMatrix { entries: [[c, s], [s, c]], lambda, kind: MultiplierKind::Phi }
}

/// `[[ĉ, −ŝ], [−ŝ, ĉ]]`.
pub fn psi_hat_matrix<T: Real>(omega: OmegaParam<T>, lambda: T) -> MultiplierMatrix<T> {
    let c = Complex::new(c_hat(omega, lambda), T::zero());
    let s = -s_hat(omega, lambda);
    MultiplierMatrix { entries: [[c, s], [s, c]], lambda, kind: MultiplierKind::Psi }
}

fn mat_mul<T: Real>(a: &[[Complex<T>; 2]; 2], b: &[[Complex<T>; 2]; 2]) -> [[Complex<T>; 2]; 2] {
    let mut out = [[Complex::new(T::zero(), T::zero()); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn identity_defect<T: Real>(m: &[[Complex<T>; 2]; 2]) -> T {
    let mut worst = T::zero();
    for (i, row) in m.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((z - Complex::new(target, T::zero())).norm());
        }
    }
    worst
}

impl<T: Real> MultiplierMatrix<T> {
    pub fn conjugate_transpose(&self) -> [[Complex<T>; 2]; 2] {
        let e = &self.entries;
        [[e[0][0].conj(), e[1][0].conj()], [e[0][1].conj(), e[1][1].conj()]]
    }

    pub fn product(&self, other: &Self) -> [[Complex<T>; 2]; 2] {
        mat_mul(&self.entries, &other.entries)
    }

    /// `max |(M*M − I)_{ij}|`.
    pub fn unitarity_defect(&self) -> T {
        identity_defect(&mat_mul(&self.conjugate_transpose(), &self.entries))
    }

    /// `max |(M·N − I)_{ij}|`.
    pub fn inverse_defect(&self, other: &Self) -> T {
        identity_defect(&self.product(other))
    }

    pub fn apply(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        let e = &self.entries;
        [e[0][0] * v[0] + e[0][1] * v[1], e[1][0] * v[0] + e[1][1] * v[1]]
    }
}

/// A numerically evaluated complex quantity with its absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: Complex<T>,
    pub error: T,
}

/// Default absolute tolerance for the truncated transforms.
pub const TRUNCATION_TOL: f64 = 1e-12;

/// Above this many radians of `λt` over the range, the sine integral is split
/// into half periods.
const OSCILLATION_SPLIT: f64 = 50.0;

/// `∫_a^b S_ω(t) sin(λt) dt` for `0 < a < b`.
fn s_sine_integral<T: Real>(omega: OmegaParam<T>, lambda: T, a: T, b: T, tol: T) -> Result<(T, T)> {
    if lambda == T::zero() || b <= a {
        return Ok((T::zero(), T::zero()));
    }
    let f = |t: T| eval_s_unchecked(omega, t) * (lambda * t).sin();
    let lam = lambda.abs();
    if lam * (b - a) <= T::lit(OSCILLATION_SPLIT) {
        let r = integrate(f, a, b, QuadTolerance::absolute(tol.as_f64()));
        if !r.converged {
            return Err(Error::NonConvergence { estimate: r.error.as_f64(), target: tol.as_f64() });
        }
        return Ok((r.value, r.error));
    }
    let period = T::PI() / lam;
    let mut edges = vec![a];
    let mut p = (a / period).floor() + T::one();
    loop {
        let e = p * period;
        if e >= b {
            break;
        }
        if e > a {
            edges.push(e);
        }
        p = p + T::one();
    }
    edges.push(b);
    let panels = edges.len() - 1;
    let panel_tol = (tol / T::of_usize(panels)).as_f64();
    let mut sum = CompensatedSum::new();
    let mut err = T::zero();
    for w in edges.windows(2) {
        let r = integrate(f, w[0], w[1], QuadTolerance::absolute(panel_tol));
        if !r.converged {
            return Err(Error::NonConvergence { estimate: r.error.as_f64(), target: panel_tol });
        }
        sum.add(r.value);
        err = err + r.error;
    }
    Ok((sum.value(), err))
}

/// Cut-off `T` with `2∫_T^∞ |S_ω| ≤ tol/2` (up to the factor `1/(1 − e^{−2ωT})`).
fn truncation_cutoff<T: Real>(omega: OmegaParam<T>, tol: T) -> T {
    (T::lit(8.0) / (T::PI() * tol)).ln().max(T::one()) / omega.get()
}

/// `2∫_T^∞ |S_ω| ≤ (4/π) e^{−ωT} / (1 − e^{−2ωT})`.
fn tail_bound<T: Real>(omega: OmegaParam<T>, from: T) -> T {
    let e = (-(omega.get() * from)).exp();
    T::lit(4.0) / T::PI() * e / (T::one() - e * e)
}

/// `∫_{|t|≥ε} S_ω(t) e^{iλt} dt = 2i ∫_ε^∞ S_ω(t) sin(λt) dt`.
pub fn s_hat_truncated<T: Real>(omega: OmegaParam<T>, lambda: T, epsilon: T) -> Result<Estimate<T>> {
    s_hat_truncated_tol(omega, lambda, epsilon, T::lit(TRUNCATION_TOL))
}

pub fn s_hat_truncated_tol<T: Real>(omega: OmegaParam<T>, lambda: T, epsilon: T, tol: T) -> Result<Estimate<T>> {
    if !(epsilon > T::zero()) {
        return Err(invalid("epsilon", format!("must be > 0, got {epsilon}")));
    }
    let cut = truncation_cutoff(omega, tol).max(epsilon);
    let (v, e) = s_sine_integral(omega, lambda, epsilon, cut, tol * T::lit(0.5))?;
    let two = T::one() + T::one();
    Ok(Estimate { value: Complex::new(T::zero(), two * v), error: two * e + tail_bound(omega, cut) })
}

/// `ρ_ω(λ, ε) = ŝ(λ) − ŝ_ε(λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRemainder<T> {
    pub lambda: T,
    pub epsilon: T,
    pub rho: Complex<T>,
    pub error: T,
}

pub fn remainder_rho<T: Real>(omega: OmegaParam<T>, lambda: T, epsilon: T) -> Result<TruncationRemainder<T>> {
    let trunc = s_hat_truncated(omega, lambda, epsilon)?;
    Ok(TruncationRemainder { lambda, epsilon, rho: s_hat(omega, lambda) - trunc.value, error: trunc.error })
}

/// `sup |ρ_ω(λ, ε)|` over the product grid `lambdas × epsilons`.
pub fn remainder_grid_sup<T: Real>(omega: OmegaParam<T>, lambdas: &[T], epsilons: &[T]) -> Result<T> {
    let mut sup = T::zero();
    for &l in lambdas {
        for &e in epsilons {
            sup = sup.max(remainder_rho(omega, l, e)?.rho.norm());
        }
    }
    Ok(sup)
}

/// Richardson-extrapolated principal-value transform of `S_ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated<T> {
    pub value: Complex<T>,
    /// Difference between the last two diagonal entries of the Richardson table.
    pub change: T,
    pub levels: usize,
}

/// Stop once successive extrapolants differ by less than this.
pub const EXTRAPOLATION_STOP: f64 = 1e-8;
const MAX_LEVELS: usize = 14;

/// `ŝ(λ)` recovered as `lim_{ε→0} ŝ_ε(λ)` on `ε_k = ε₀·2^{−k}`.
///
/// The missing piece `2i∫₀^ε S_ω(t) sin(λt) dt` has an even integrand, so its
/// expansion in `ε` has odd powers only; the table eliminates `ε, ε³, ε⁵, …`.
pub fn s_hat_extrapolated<T: Real>(omega: OmegaParam<T>, lambda: T) -> Result<Extrapolated<T>> {
    let w = omega.get();
    let two = T::one() + T::one();
    let mut eps = T::PI() / (T::lit(4.0) * w);
    if lambda != T::zero() {
        eps = eps.min(T::lit(0.5) / lambda.abs());
    }
    let tol = T::lit(TRUNCATION_TOL);
    let base = s_hat_truncated_tol(omega, lambda, eps, tol)?.value.im;
    let mut partial = CompensatedSum::new();
    partial.add(base);
    let mut table: Vec<Vec<T>> = vec![vec![base]];
    let mut change = T::infinity();
    for k in 1..MAX_LEVELS {
        let next = eps / two;
        let (piece, _) = s_sine_integral(omega, lambda, next, eps, tol * T::lit(0.01))?;
        partial.add(two * piece);
        eps = next;
        let mut row = vec![partial.value()];
        for j in 1..=k {
            let factor = two.powi(2 * j as i32 - 1) - T::one();
            let prev = &table[k - 1];
            let v = row[j - 1] + (row[j - 1] - prev[j - 1]) / factor;
            row.push(v);
        }
        change = (row[k] - table[k - 1][k - 1]).abs();
        table.push(row);
        if k >= 2 && change < T::lit(EXTRAPOLATION_STOP) {
            break;
        }
    }
    let levels = table.len();
    let value = table[levels - 1][levels - 1];
    Ok(Extrapolated { value: Complex::new(T::zero(), value), change, levels })
}

/// `ĉ(λ)` by the trapezoid rule `2h Σ' C_ω(kh) cos(λkh)` over `[0, support]`.
pub fn c_hat_trapezoid<T: Real>(omega: OmegaParam<T>, lambda: T, step: T, support: T) -> T {
    let n = (support / step).ceil().to_usize().unwrap_or(0);
    let mut acc = CompensatedSum::new();
    acc.add(eval_c(omega, T::zero()) * T::lit(0.5));
    for k in 1..=n {
        let t = step * T::of_usize(k);
        acc.add(eval_c(omega, t) * (lambda * t).cos());
    }
    (step + step) * acc.value()
}
