//! Deterministic test signals on a grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::kernels::sech;
use crate::quadrature::{Grid, GridSignal};
use crate::scalar::Real;

/// `e^{−((t − center)/width)²}`.
pub fn gaussian<T: Real>(grid: Grid<T>, center: T, width: T) -> Result<GridSignal<T>> {
    if !(width > T::zero()) {
        return Err(invalid("width", "must be > 0"));
    }
    GridSignal::from_real_fn(grid, |t| {
        let s = (t - center) / width;
        (-s * s).exp()
    })
}

fn bump_profile<T: Real>(s: T) -> T {
    if s.abs() >= T::one() {
        T::zero()
    } else {
        (-T::one() / (T::one() - s * s)).exp()
    }
}

/// Compactly supported `exp(−1/(1 − s²))`, `s = (t − center)/radius`.
pub fn bump<T: Real>(grid: Grid<T>, center: T, radius: T) -> Result<GridSignal<T>> {
    if !(radius > T::zero()) {
        return Err(invalid("radius", "must be > 0"));
    }
    GridSignal::from_real_fn(grid, |t| bump_profile((t - center) / radius))
}

/// `sech(t/scale)^power`.
pub fn sech_power<T: Real>(grid: Grid<T>, scale: T, power: T) -> Result<GridSignal<T>> {
    if !(scale > T::zero() && power > T::zero()) {
        return Err(invalid("sech_power", "scale and power must be > 0"));
    }
    GridSignal::from_real_fn(grid, |t| sech(t / scale).powf(power))
}

/// Smooth step from 0 at `s ≤ 0` to 1 at `s ≥ 1`, flat to all orders at both ends.
fn smooth_step<T: Real>(s: T) -> T {
    let f = |u: T| if u > T::zero() { (-T::one() / u).exp() } else { T::zero() };
    let a = f(s);
    let b = f(T::one() - s);
    if a + b == T::zero() {
        T::zero()
    } else {
        a / (a + b)
    }
}

/// Window equal to 1 on `|t| ≤ plateau`, falling smoothly to 0 at `|t| = plateau + taper`.
pub fn plateau_window<T: Real>(t: T, plateau: T, taper: T) -> T {
    T::one() - smooth_step((t.abs() - plateau) / taper)
}

/// `window(t)·e^{γ√(1+t²)}`: grows like `e^{γ|t|}` up to the window edge.
pub fn grown_bump<T: Real>(grid: Grid<T>, growth: T, plateau: T, taper: T) -> Result<GridSignal<T>> {
    if !(growth >= T::zero() && plateau >= T::zero() && taper > T::zero()) {
        return Err(invalid("grown_bump", "need growth >= 0, plateau >= 0, taper > 0"));
    }
    GridSignal::from_real_fn(grid, |t| {
        let w = plateau_window(t, plateau, taper);
        if w == T::zero() {
            T::zero()
        } else {
            w * (growth * (T::one() + t * t).sqrt()).exp()
        }
    })
}

/// Sum of `modes` random cosines with frequencies in `[0, cutoff]`, unit RMS amplitude.
pub fn bandlimited_noise<T: Real>(grid: Grid<T>, cutoff: T, modes: usize, seed: u64) -> Result<GridSignal<T>> {
    if modes == 0 || !(cutoff >= T::zero()) {
        return Err(invalid("bandlimited_noise", "need modes >= 1 and cutoff >= 0"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let waves: Vec<(T, T, T)> = (0..modes)
        .map(|_| {
            let a = T::lit(rng.random_range(-1.0..1.0));
            let nu = cutoff * T::lit(rng.random::<f64>());
            let phi = T::lit(rng.random_range(0.0..std::f64::consts::TAU));
            (a, nu, phi)
        })
        .collect();
    let norm = (T::lit(2.0) / T::of_usize(modes)).sqrt();
    GridSignal::from_real_fn(grid, |t| waves.iter().fold(T::zero(), |s, &(a, nu, phi)| s + a * (nu * t + phi).cos()) * norm)
}

/// Random smooth signal for weighted-norm trials.
///
/// Band-limited noise times `e^{γ√(1+τ²)}` with `γ ∈ [0, max_growth)`, windowed
/// to the central part of the grid so that kernel tails stay inside it.
/// `τ` is measured from the grid centre.
pub fn random_weighted_trial<T: Real>(grid: Grid<T>, max_growth: T, rng: &mut ChaCha8Rng) -> Result<GridSignal<T>> {
    let gamma = if max_growth > T::zero() { max_growth * T::lit(rng.random::<f64>()) } else { T::zero() };
    let half = (grid.t_max() - grid.t_min()) * T::lit(0.5);
    let mid = grid.t_min() + half;
    let plateau = half * T::lit(0.2);
    let taper = half * T::lit(0.2);
    let cutoff = T::lit(rng.random_range(0.5..4.0));
    let noise = bandlimited_noise(grid, cutoff, 12, rng.random())?;
    Ok(noise.map(|t, z| {
        let tau = t - mid;
        let w = plateau_window(tau, plateau, taper);
        if w == T::zero() {
            z * T::zero()
        } else {
            z * (w * (gamma * (T::one() + tau * tau).sqrt()).exp())
        }
    }))
}

/// Named signal recipe, as chosen on the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpec {
    Gaussian { center: f64, width: f64 },
    Bump { center: f64, radius: f64 },
    SechPower { scale: f64, power: f64 },
    GrownBump { growth: f64, plateau: f64, taper: f64 },
    BandlimitedNoise { cutoff: f64, modes: usize, seed: u64 },
}

impl SignalSpec {
    pub fn generate<T: Real>(&self, grid: Grid<T>) -> Result<GridSignal<T>> {
        match *self {
            Self::Gaussian { center, width } => gaussian(grid, T::lit(center), T::lit(width)),
            Self::Bump { center, radius } => bump(grid, T::lit(center), T::lit(radius)),
            Self::SechPower { scale, power } => sech_power(grid, T::lit(scale), T::lit(power)),
            Self::GrownBump { growth, plateau, taper } => grown_bump(grid, T::lit(growth), T::lit(plateau), T::lit(taper)),
            Self::BandlimitedNoise { cutoff, modes, seed } => bandlimited_noise(grid, T::lit(cutoff), modes, seed),
        }
    }
}
