//! Direct evaluation of the convolutions on grid signals.
//!
//! `C_ω x` is an ordinary integral and is computed with the composite
//! trapezoid rule over the grid. `S_ω x` and the Hilbert transform are
//! principal-value integrals; they are computed by pairing `τ = t − u` with
//! `τ = t + u`:
//!
//! ```text
//! p.v.∫ K(t−τ) x(τ) dτ = ∫₀^∞ K(u) [x(t−u) − x(t+u)] du
//! ```
//!
//! which is absolutely convergent for odd `K` when `x` is Lipschitz at `t`.
//! Evaluation points must be grid nodes so that the pairing is exact on the
//! grid. This path is O(n) per point and serves as the reference for the
//! FFT-based path in [`crate::transform`].

pub mod adaptive;
mod grid;

pub use grid::{Grid, GridSignal};

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::kernels::{eval_c, eval_r, eval_s_unchecked, OmegaParam};
use crate::scalar::{CompensatedSum, Real};

/// Settings for principal-value quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PVConfig<T> {
    /// Largest `u` used in the symmetric pairing.
    pub pairing_halfwidth: T,
    /// Truncation radius of the `S` kernel, in units of `1/ω`.
    pub tail_cut: T,
    /// Largest acceptable bound on the neglected kernel tail.
    pub quad_tol: T,
}

impl<T: Real> Default for PVConfig<T> {
    fn default() -> Self {
        Self { pairing_halfwidth: T::max_value(), tail_cut: T::lit(40.0), quad_tol: T::lit(1e-8) }
    }
}

impl<T: Real> PVConfig<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("pairing_halfwidth", self.pairing_halfwidth),
            ("tail_cut", self.tail_cut),
            ("quad_tol", self.quad_tol),
        ] {
            if !(v > T::zero()) || v.is_nan() {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if self.quad_tol >= T::one() {
            return Err(invalid("quad_tol", "must be < 1"));
        }
        Ok(())
    }
}

/// Status attached to direct convolution output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QuadStatus<T> {
    Ok,
    /// `delta·ω > 1`: the grid under-resolves the kernel.
    CoarseGrid { delta_omega: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluated<T> {
    pub values: Vec<Complex<T>>,
    pub status: QuadStatus<T>,
}

/// `(C_ω x)(t) = ∫ C_ω(t−τ) x(τ) dτ` at each point of `eval_at`.
pub fn convolve_c_direct<T: Real>(omega: OmegaParam<T>, x: &GridSignal<T>, eval_at: &[T]) -> Evaluated<T> {
    let grid = *x.grid();
    let delta = grid.delta();
    let n = grid.len();
    let half = T::lit(0.5);
    let values = eval_at
        .par_iter()
        .map(|&t| {
            let mut re = CompensatedSum::new();
            let mut im = CompensatedSum::new();
            for (k, z) in x.samples().iter().enumerate() {
                let w = if k == 0 || k == n - 1 { half } else { T::one() };
                let c = w * eval_c(omega, t - grid.node(k));
                re.add(c * z.re);
                im.add(c * z.im);
            }
            Complex::new(re.value(), im.value()) * delta
        })
        .collect();
    let delta_omega = delta * omega.get();
    let status = if delta_omega > T::one() {
        log::warn!("grid step {delta} is coarse for omega {} (delta*omega = {delta_omega})", omega.get());
        QuadStatus::CoarseGrid { delta_omega }
    } else {
        QuadStatus::Ok
    };
    Evaluated { values, status }
}

/// Odd singular kernel used by principal-value quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PvKernel<T> {
    /// `1/(πu)`.
    Hilbert,
    /// `S_ω(u)`, evaluated as `1/(πu) + r(u)` when `split` is set.
    S { omega: OmegaParam<T>, split: bool },
}

impl<T: Real> PvKernel<T> {
    fn support(&self, cfg: &PVConfig<T>) -> T {
        match self {
            PvKernel::Hilbert => cfg.pairing_halfwidth,
            PvKernel::S { omega, .. } => cfg.pairing_halfwidth.min(cfg.tail_cut / omega.get()),
        }
    }

    /// Bound on `∫_U^{U_max} |K(u)| du`.
    fn tail_bound(&self, cut: T, reach: T) -> T {
        match self {
            PvKernel::Hilbert => (reach / cut).ln() / T::PI(),
            PvKernel::S { omega, .. } => {
                let e = (-(omega.get() * cut)).exp();
                (T::one() + T::one()) / T::PI() * e / (T::one() - e * e)
            }
        }
    }
}

/// Principal-value convolution at grid nodes by symmetric pairing.
///
/// The pairing integrand `g(u) = K(u)[x(t−u) − x(t+u)]` is even in `u`, so the
/// trapezoid rule on `u_k = k·delta` carries no odd-order endpoint error. Its
/// value at `u = 0` is the limit of the locally linearised integrand,
/// `−2x'(t)/π`, with `x'(t)` from a centred difference.
pub fn pv_convolve<T: Real>(
    x: &GridSignal<T>,
    eval_at: &[T],
    kernel: PvKernel<T>,
    cfg: &PVConfig<T>,
) -> Result<Vec<Complex<T>>> {
    cfg.validate()?;
    let grid = *x.grid();
    let nodes: Vec<usize> = eval_at
        .iter()
        .map(|&t| grid.node_index(t).ok_or(Error::OffGrid { t: t.as_f64() }))
        .collect::<Result<_>>()?;
    let max_abs = x.max_abs();
    nodes.par_iter().map(|&k0| pair_at_node(x, k0, kernel, cfg, max_abs)).collect()
}

fn pair_at_node<T: Real>(
    x: &GridSignal<T>,
    k0: usize,
    kernel: PvKernel<T>,
    cfg: &PVConfig<T>,
    max_abs: T,
) -> Result<Complex<T>> {
    let grid = x.grid();
    let delta = grid.delta();
    let n = grid.len();
    let span = k0.max(n - 1 - k0);
    let support = kernel.support(cfg);
    let steps = (support / delta).floor().to_usize().unwrap_or(usize::MAX);
    let kmax = span.min(steps);
    if kmax < span {
        let cut = delta * T::of_usize(kmax.max(1));
        let reach = delta * T::of_usize(span);
        let estimate = (max_abs + max_abs) * kernel.tail_bound(cut, reach);
        if estimate > cfg.quad_tol {
            return Err(Error::NonConvergence { estimate: estimate.as_f64(), target: cfg.quad_tol.as_f64() });
        }
    }
    let inv_pi = T::FRAC_1_PI();
    let g0 = -(x.derivative_at(k0) * (inv_pi + inv_pi));
    let half = T::lit(0.5);
    let mut main = (CompensatedSum::new(), CompensatedSum::new());
    let mut regular = (CompensatedSum::new(), CompensatedSum::new());
    main.0.add(g0.re * half);
    main.1.add(g0.im * half);
    let k0s = k0 as isize;
    for k in 1..=kmax {
        let u = delta * T::of_usize(k);
        let d = x.at(k0s - k as isize) - x.at(k0s + k as isize);
        let w = if k == kmax && kmax < span { half } else { T::one() };
        match kernel {
            PvKernel::Hilbert => {
                let kv = w * inv_pi / u;
                main.0.add(kv * d.re);
                main.1.add(kv * d.im);
            }
            PvKernel::S { omega, split: true } => {
                let kv = w * inv_pi / u;
                main.0.add(kv * d.re);
                main.1.add(kv * d.im);
                let rv = w * eval_r(omega, u);
                regular.0.add(rv * d.re);
                regular.1.add(rv * d.im);
            }
            PvKernel::S { omega, split: false } => {
                let kv = w * eval_s_unchecked(omega, u);
                main.0.add(kv * d.re);
                main.1.add(kv * d.im);
            }
        }
    }
    let re = main.0.value() + regular.0.value();
    let im = main.1.value() + regular.1.value();
    Ok(Complex::new(re, im) * delta)
}

/// `(S_ω x)(t)` as a principal-value integral, via the `1/(πu) + r(u)` split.
pub fn convolve_s_pv<T: Real>(
    omega: OmegaParam<T>,
    x: &GridSignal<T>,
    eval_at: &[T],
    cfg: &PVConfig<T>,
) -> Result<Vec<Complex<T>>> {
    pv_convolve(x, eval_at, PvKernel::S { omega, split: true }, cfg)
}

/// Hilbert transform `(Hx)(t) = p.v. (1/π) ∫ x(τ)/(t−τ) dτ` at grid nodes.
pub fn hilbert_pv<T: Real>(x: &GridSignal<T>, eval_at: &[T], cfg: &PVConfig<T>) -> Result<Vec<Complex<T>>> {
    pv_convolve(x, eval_at, PvKernel::Hilbert, cfg)
}

/// Truncated integrals `∫_{|t−τ|≥ε} S_ω(t−τ) x(τ) dτ` for each `ε`.
///
/// Values of `x` between nodes come from cubic interpolation; the first,
/// partial panel `[ε, ⌈ε/δ⌉δ]` is integrated with the trapezoid rule.
pub fn epsilon_sweep_pv<T: Real>(
    omega: OmegaParam<T>,
    x: &GridSignal<T>,
    t: T,
    epsilons: &[T],
) -> Result<Vec<Complex<T>>> {
    if epsilons.is_empty() {
        return Err(invalid("epsilons", "empty sweep"));
    }
    if epsilons.iter().any(|&e| !(e > T::zero())) {
        return Err(invalid("epsilons", "all entries must be > 0"));
    }
    if epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("epsilons", "must be strictly decreasing"));
    }
    let grid = *x.grid();
    let k0 = grid.node_index(t).ok_or(Error::OffGrid { t: t.as_f64() })?;
    let delta = grid.delta();
    let span = k0.max(grid.len() - 1 - k0);
    let k0s = k0 as isize;
    let pair = |u: T| -> Complex<T> { x.interpolate(t - u) - x.interpolate(t + u) };
    let node_term = |k: usize| -> Complex<T> {
        let u = delta * T::of_usize(k);
        (x.at(k0s - k as isize) - x.at(k0s + k as isize)) * eval_s_unchecked(omega, u)
    };
    let half = T::lit(0.5);
    epsilons
        .iter()
        .map(|&eps| {
            let first = (eps / delta).ceil().to_usize().unwrap_or(usize::MAX).max(1);
            if first > span {
                return Ok(Complex::new(T::zero(), T::zero()));
            }
            let u1 = delta * T::of_usize(first);
            let mid = (eps + u1) * half;
            let g_eps = pair(eps) * eval_s_unchecked(omega, eps);
            let g_mid = pair(mid) * eval_s_unchecked(omega, mid);
            let g1 = node_term(first);
            // Simpson on the partial panel, trapezoid beyond it
            let mut acc = (g_eps + g_mid * T::lit(4.0) + g1) * ((u1 - eps) / T::lit(6.0));
            let mut re = CompensatedSum::new();
            let mut im = CompensatedSum::new();
            re.add(g1.re * half);
            im.add(g1.im * half);
            for k in first + 1..=span {
                let g = node_term(k);
                re.add(g.re);
                im.add(g.im);
            }
            // Euler-Maclaurin correction for the trapezoid's left end
            if first + 2 <= span {
                let slope = (node_term(first + 1) * T::lit(4.0) - g1 * T::lit(3.0) - node_term(first + 2))
                    / (delta + delta);
                acc = acc + slope * (delta * delta / T::lit(12.0));
            }
            acc = acc + Complex::new(re.value(), im.value()) * delta;
            Ok(acc)
        })
        .collect()
}

/// Extrapolates truncated values `v(ε)` to `ε → 0` by fitting
/// `v(ε) = L + a₁ε + a₃ε³ + a₅ε⁵ + …` through every supplied point.
///
/// The expansion holds for the truncated integrals of an odd kernel against a
/// smooth function, whose missing part `∫₀^ε g(u) du` has an even integrand.
pub fn extrapolate_to_zero<T: Real>(epsilons: &[T], values: &[Complex<T>]) -> Result<Complex<T>> {
    let m = epsilons.len();
    if m == 0 || m != values.len() {
        return Err(invalid("epsilons", "need one value per epsilon"));
    }
    // columns: 1, ε, ε³, ε⁵, ...
    let mut a = vec![vec![T::zero(); m]; m];
    for (i, &e) in epsilons.iter().enumerate() {
        a[i][0] = T::one();
        for j in 1..m {
            a[i][j] = e.powi(2 * j as i32 - 1);
        }
    }
    let re: Vec<T> = values.iter().map(|z| z.re).collect();
    let im: Vec<T> = values.iter().map(|z| z.im).collect();
    let lre = solve_dense(a.clone(), re)?[0];
    let lim = solve_dense(a, im)?[0];
    Ok(Complex::new(lre, lim))
}

fn solve_dense<T: Real>(mut a: Vec<Vec<T>>, mut b: Vec<T>) -> Result<Vec<T>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("non-empty");
        if a[piv][col] == T::zero() {
            return Err(invalid("epsilons", "singular extrapolation system (repeated epsilon?)"));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for c in col..n {
                a[row][c] = a[row][c] - f * a[col][c];
            }
            b[row] = b[row] - f * b[col];
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for c in row + 1..n {
            s = s - a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// A sweep over halving `ε` converges when the last successive difference is
/// at most three quarters of the one before it. A logarithmic divergence (a
/// jump in `x` at `t`) keeps the differences constant.
pub fn sweep_is_convergent<T: Real>(values: &[Complex<T>]) -> bool {
    if values.len() < 3 {
        return false;
    }
    let d: Vec<T> = values.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let last = d[d.len() - 1];
    let prev = d[d.len() - 2];
    last <= T::lit(0.75) * prev || last <= T::epsilon() * T::lit(64.0) * values[values.len() - 1].norm().max(T::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn w(x: f64) -> OmegaParam<f64> {
        OmegaParam::new(x).unwrap()
    }

    fn gaussian(grid: Grid<f64>) -> GridSignal<f64> {
        GridSignal::from_real_fn(grid, |t| (-t * t).exp()).unwrap()
    }

    #[test]
    fn c_direct_of_zero_is_zero() {
        let g = Grid::from_bounds(-5.0, 5.0, 101).unwrap();
        let out = convolve_c_direct(w(1.0), &GridSignal::zeros(g), &[0.0, 1.3]);
        assert!(out.values.iter().all(|z| z.norm() == 0.0));
        assert_eq!(out.status, QuadStatus::Ok);
    }

    #[test]
    fn c_direct_self_convolution_matches_parseval_value() {
        let g = Grid::from_bounds(-40.0, 40.0, 8192).unwrap();
        let x = GridSignal::from_real_fn(g, |t| eval_c(w(1.0), t)).unwrap();
        let y = convolve_c_direct(w(1.0), &x, &[0.0]);
        // (1/2π)∫sech²(πλ/2)dλ = 2/π²
        assert!((y.values[0].re - 2.0 / (PI * PI)).abs() < 1e-10, "{}", y.values[0].re);
    }

    #[test]
    fn c_direct_preserves_mass() {
        let g = Grid::from_bounds(-30.0, 30.0, 3001).unwrap();
        let x = gaussian(g);
        let nodes: Vec<f64> = g.nodes().collect();
        let y = convolve_c_direct(w(1.0), &x, &nodes);
        let mass: f64 = y.values.iter().map(|z| z.re).sum::<f64>() * g.delta();
        assert!((mass - PI.sqrt()).abs() < 1e-6, "{mass}");
    }

    #[test]
    fn coarse_grid_is_flagged() {
        let g = Grid::from_bounds(-5.0, 5.0, 5).unwrap();
        let out = convolve_c_direct(w(1.0), &gaussian(g), &[0.0]);
        assert!(matches!(out.status, QuadStatus::CoarseGrid { .. }));
    }

    #[test]
    fn pv_annihilates_symmetric_data() {
        let g = Grid::from_bounds(-100.0, 100.0, 2001).unwrap();
        let c = GridSignal::from_real_fn(g, |_| 3.0).unwrap();
        let y = convolve_s_pv(w(1.0), &c, &[0.0], &PVConfig::default()).unwrap();
        assert!(y[0].norm() < 1e-14);
        let y = convolve_s_pv(w(1.0), &gaussian(g), &[0.0], &PVConfig::default()).unwrap();
        assert!(y[0].norm() < 1e-14);
        let h = hilbert_pv(&gaussian(g), &[0.0], &PVConfig::default()).unwrap();
        assert!(h[0].norm() < 1e-14);
    }

    #[test]
    fn pv_matches_high_precision_reference() {
        // mpmath: p.v.∫S_1(1−τ)e^{−τ²}dτ = 0.533008577345684687...
        let g = Grid::from_bounds(-20.0, 20.0, 4001).unwrap();
        let y = convolve_s_pv(w(1.0), &gaussian(g), &[1.0], &PVConfig::default()).unwrap();
        assert!((y[0].re - 0.533_008_577_345_684_7).abs() < 1e-8, "{}", y[0].re);
        // H e^{−τ²} at 1 = (2/√π)·Dawson(1) = 0.607157705841393729...
        let h = hilbert_pv(&gaussian(g), &[1.0], &PVConfig::default()).unwrap();
        assert!((h[0].re - 0.607_157_705_841_393_7).abs() < 1e-8, "{}", h[0].re);
    }

    #[test]
    fn split_and_unsplit_kernels_agree() {
        let g = Grid::from_bounds(-20.0f64, 20.0, 2001).unwrap();
        let x = GridSignal::from_real_fn(g, |t| (-(t - 0.3) * (t - 0.3)).exp() * (2.0 * t).cos()).unwrap();
        let pts = [-1.0, 0.0, 0.5, 2.0];
        let cfg = PVConfig::default();
        let a = pv_convolve(&x, &pts, PvKernel::S { omega: w(2.0), split: true }, &cfg).unwrap();
        let b = pv_convolve(&x, &pts, PvKernel::S { omega: w(2.0), split: false }, &cfg).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert!((p - q).norm() < 1e-10);
        }
    }

    #[test]
    fn off_grid_points_are_rejected() {
        let g = Grid::from_bounds(-1.0, 1.0, 11).unwrap();
        let err = convolve_s_pv(w(1.0), &gaussian(g), &[0.05], &PVConfig::default()).unwrap_err();
        assert!(matches!(err, Error::OffGrid { .. }));
    }

    #[test]
    fn short_tail_cut_reports_non_convergence() {
        let g = Grid::from_bounds(-20.0, 20.0, 401).unwrap();
        let cfg = PVConfig { tail_cut: 1.0, ..PVConfig::default() };
        let err = convolve_s_pv(w(1.0), &gaussian(g), &[0.0], &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
        let bad = PVConfig { quad_tol: 2.0, ..PVConfig::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn lorentzian_hilbert_transform() {
        let g = Grid::from_bounds(-200.0f64, 200.0, 1 << 15).unwrap();
        let x = GridSignal::from_real_fn(g, |t| 1.0 / (1.0 + t * t)).unwrap();
        // grid of 2^15 nodes over [-200,200] has no node at 0.5 exactly; use nearest nodes
        for target in [0.5, 1.0, 2.0] {
            let k = ((target - g.t_min()) / g.delta()).round() as usize;
            let t = g.node(k);
            let h = hilbert_pv(&x, &[t], &PVConfig::default()).unwrap();
            assert!((h[0].re - t / (1.0 + t * t)).abs() < 1e-4, "t={t}: {}", h[0].re);
        }
    }

    #[test]
    fn sweep_examples() {
        let g = Grid::from_bounds(-20.0, 20.0, 4001).unwrap();
        let eps = [0.4, 0.2, 0.1, 0.05];
        let even = epsilon_sweep_pv(w(1.0), &gaussian(g), 0.0, &eps).unwrap();
        assert!(even.iter().all(|z| z.norm() < 1e-14));

        let v = epsilon_sweep_pv(w(1.0), &gaussian(g), 1.0, &eps).unwrap();
        // mpmath truncated values
        let reference = [0.350_600_970_491_918, 0.439_952_093_088_956, 0.486_246_739_248_091, 0.509_598_401_819_174];
        for (z, r) in v.iter().zip(reference) {
            assert!((z.re - r).abs() < 1e-6, "{} vs {r}", z.re);
        }
        assert!(sweep_is_convergent(&v));
        let limit = extrapolate_to_zero(&eps, &v).unwrap();
        let pv = convolve_s_pv(w(1.0), &gaussian(g), &[1.0], &PVConfig::default()).unwrap()[0];
        assert!((limit - pv).norm() < 1e-5, "{limit} vs {pv}");
    }

    #[test]
    fn sweep_at_jump_is_not_convergent() {
        let g = Grid::from_bounds(-20.0, 20.0, 4001).unwrap();
        let step = GridSignal::from_real_fn(g, |t| if t > 0.0 { 1.0 } else { 0.0 }).unwrap();
        let eps = [0.4, 0.2, 0.1, 0.05, 0.025];
        let v = epsilon_sweep_pv(w(1.0), &step, 0.0, &eps).unwrap();
        assert!(!sweep_is_convergent(&v));
    }

    #[test]
    fn sweep_validates_epsilons() {
        let g = Grid::from_bounds(-1.0, 1.0, 11).unwrap();
        let x = gaussian(g);
        assert!(epsilon_sweep_pv(w(1.0), &x, 0.0, &[0.1, 0.2]).is_err());
        assert!(epsilon_sweep_pv(w(1.0), &x, 0.0, &[0.1, -0.2]).is_err());
        assert!(epsilon_sweep_pv(w(1.0), &x, 0.0, &[]).is_err());
    }
}
