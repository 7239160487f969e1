//! Fast spectral application of `C_ω`, `S_ω`, `Φ_ω`, `Ψ_ω` and the Hilbert
//! transform to grid signals, plus norms and weighted-space diagnostics.
//!
//! A grid signal of `n` samples is zero-padded to `m ≥ 2n` (a power of two),
//! transformed with the `e^{+iλt}` kernel, multiplied pointwise and transformed
//! back. Bin `j` of the padded transform sits at
//! `λ_j = 2πj'/(mδ)` with `j' = j` for `j < m/2` and `j' = j − m` above.
//! The phase `e^{iλt_min}` and the factor `δ` cancel between the two transforms.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{sech, OmegaParam, SigmaParam};
use crate::quadrature::{convolve_c_direct, convolve_s_pv, hilbert_pv, Grid, GridSignal, PVConfig};
use crate::scalar::{CompensatedSum, Real};
use crate::signals::random_weighted_trial;

/// Sign convention of the continuous Fourier transform the tables approximate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FtConvention {
    /// `û(λ) = ∫ u(t) e^{iλt} dt`, inverse `(1/2π) ∫ û(λ) e^{−iλt} dλ`.
    PlusExponent,
}

/// A pair of scalar signals on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSignal<T> {
    x1: GridSignal<T>,
    x2: GridSignal<T>,
}

impl<T: Real> VectorSignal<T> {
    pub fn new(x1: GridSignal<T>, x2: GridSignal<T>) -> Result<Self> {
        x1.ensure_same_grid(&x2)?;
        Ok(Self { x1, x2 })
    }

    /// `[x, 0]`.
    pub fn from_first(x: GridSignal<T>) -> Self {
        let x2 = GridSignal::zeros(*x.grid());
        Self { x1: x, x2 }
    }

    pub fn x1(&self) -> &GridSignal<T> {
        &self.x1
    }

    pub fn x2(&self) -> &GridSignal<T> {
        &self.x2
    }

    pub fn grid(&self) -> &Grid<T> {
        self.x1.grid()
    }

    pub fn into_parts(self) -> (GridSignal<T>, GridSignal<T>) {
        (self.x1, self.x2)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self { x1: self.x1.sub(&other.x1)?, x2: self.x2.sub(&other.x2)? })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        Ok(self.x1.max_abs_diff(&other.x1)?.max(self.x2.max_abs_diff(&other.x2)?))
    }

    /// Norm in `L² ⊕ L²`.
    pub fn l2_norm(&self) -> T {
        hypot(l2_norm(&self.x1), l2_norm(&self.x2))
    }

    /// Norm in `L²_σ ⊕ L²_σ`.
    pub fn weighted_norm(&self, sigma: SigmaParam<T>) -> T {
        hypot(weighted_norm(&self.x1, sigma), weighted_norm(&self.x2, sigma))
    }
}

fn hypot<T: Real>(a: T, b: T) -> T {
    (a * a + b * b).sqrt()
}

/// Immutable, thread-shareable precomputation for one `(ω, grid)` pair.
#[derive(Clone)]
pub struct TransformPlan<T: Real> {
    omega: OmegaParam<T>,
    grid: Grid<T>,
    m: usize,
    c_table: Vec<T>,
    /// Imaginary part of `ŝ` per bin.
    s_table: Vec<T>,
    /// Padded transform of the truncated band-limited Hilbert kernel.
    hilbert_table: Vec<Complex<T>>,
    convention: FtConvention,
    plus: Arc<dyn Fft<T>>,
    minus: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for TransformPlan<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformPlan")
            .field("omega", &self.omega.get())
            .field("grid", &self.grid)
            .field("m", &self.m)
            .field("convention", &self.convention)
            .finish_non_exhaustive()
    }
}

impl<T: Real> PartialEq for TransformPlan<T> {
    fn eq(&self, other: &Self) -> bool {
        self.omega == other.omega
            && self.grid == other.grid
            && self.m == other.m
            && self.convention == other.convention
            && self.c_table == other.c_table
            && self.s_table == other.s_table
    }
}

/// Continuous frequency of padded bin `j`.
fn bin_frequency<T: Real>(j: usize, m: usize, delta: T) -> T {
    let signed = if j < m / 2 { T::of_usize(j) } else { -T::of_usize(m - j) };
    T::TAU() * signed / (T::of_usize(m) * delta)
}

pub fn make_plan<T: Real>(omega: OmegaParam<T>, grid: Grid<T>) -> Result<TransformPlan<T>> {
    TransformPlan::new(omega, grid)
}

impl<T: Real> TransformPlan<T> {
    pub fn new(omega: OmegaParam<T>, grid: Grid<T>) -> Result<Self> {
        let n = grid.len();
        let support = T::of_usize(n) * grid.delta() * omega.get();
        if !support.is_finite() {
            return Err(Error::Overflow(format!("n·δ·ω is not representable for n = {n}")));
        }
        let m = n
            .checked_mul(2)
            .and_then(usize::checked_next_power_of_two)
            .ok_or_else(|| Error::Overflow(format!("padded length for n = {n} exceeds usize")))?;
        let nyquist = m / 2;
        let (c_table, s_table) = (0..m)
            .map(|j| {
                if j == nyquist {
                    return (T::one(), T::zero());
                }
                let x = T::FRAC_PI_2() * bin_frequency(j, m, grid.delta()) / omega.get();
                (sech(x), x.tanh())
            })
            .unzip();
        let mut planner = FftPlanner::new();
        // rustfft's "inverse" carries e^{+i}, which is the forward transform here
        let plus = planner.plan_fft_inverse(m);
        let minus = planner.plan_fft_forward(m);
        // (1 - cos(πt/δ))/(πt) sampled at t = dδ, times δ: 2/(πd) for odd d
        let mut hilbert_table = vec![Complex::new(T::zero(), T::zero()); m];
        for d in (1..n).step_by(2) {
            let h = (T::one() + T::one()) / (T::PI() * T::of_usize(d));
            hilbert_table[d] = Complex::new(h, T::zero());
            hilbert_table[m - d] = Complex::new(-h, T::zero());
        }
        plus.process(&mut hilbert_table);
        Ok(Self {
            omega,
            grid,
            m,
            c_table,
            s_table,
            hilbert_table,
            convention: FtConvention::PlusExponent,
            plus,
            minus,
        })
    }

    pub fn omega(&self) -> OmegaParam<T> {
        self.omega
    }

    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    pub fn padded_len(&self) -> usize {
        self.m
    }

    pub fn convention(&self) -> FtConvention {
        self.convention
    }

    pub fn c_table(&self) -> &[T] {
        &self.c_table
    }

    pub fn s_table(&self) -> &[T] {
        &self.s_table
    }

    pub fn frequency(&self, j: usize) -> T {
        bin_frequency(j, self.m, self.grid.delta())
    }

    /// `max_j | |ĉ_j|² + |ŝ_j|² − 1 |`.
    pub fn table_unitarity_defect(&self) -> T {
        self.c_table
            .iter()
            .zip(&self.s_table)
            .fold(T::zero(), |w, (&c, &s)| w.max((c * c + s * s - T::one()).abs()))
    }

    /// Bound on `Σ_{p≠0} |K(d + pmδ)|` for `|d| < nδ`, `K ∈ {C_ω, S_ω}`: the
    /// periodisation error per unit `δ·Σ|x_k|`.
    pub fn wrap_bound(&self) -> T {
        let w = self.omega.get();
        let gap = T::of_usize(self.m - self.grid.len() + 1) * self.grid.delta();
        let period = T::of_usize(self.m) * self.grid.delta();
        let two = T::one() + T::one();
        let e = (-(w * gap)).exp();
        two * (two * w / T::PI()) * e / ((T::one() - (-(two * w * gap)).exp()) * (T::one() - (-(w * period)).exp()))
    }

    /// Overwrites one entry of the `ĉ` table. Exists so that the verification
    /// suite can be shown to catch a corrupted plan.
    #[doc(hidden)]
    pub fn corrupt_c_table(&mut self, j: usize, value: T) {
        if let Some(c) = self.c_table.get_mut(j) {
            *c = value;
        }
    }

    fn check(&self, x: &GridSignal<T>) -> Result<()> {
        if *x.grid() != self.grid {
            return Err(Error::GridMismatch(format!("signal grid {:?} vs plan grid {:?}", x.grid(), self.grid)));
        }
        Ok(())
    }

    fn spectrum(&self, x: &GridSignal<T>) -> Vec<Complex<T>> {
        let mut buf = vec![Complex::new(T::zero(), T::zero()); self.m];
        buf[..x.len()].copy_from_slice(x.samples());
        self.plus.process(&mut buf);
        buf
    }

    fn synthesize(&self, mut spec: Vec<Complex<T>>) -> GridSignal<T> {
        self.minus.process(&mut spec);
        let scale = T::one() / T::of_usize(self.m);
        spec.truncate(self.grid.len());
        for z in spec.iter_mut() {
            *z = *z * scale;
        }
        GridSignal::new(self.grid, spec).expect("finite spectrum of a finite signal")
    }

    fn apply_multiplier(&self, x: &GridSignal<T>, mult: impl Fn(usize) -> Complex<T>) -> Result<GridSignal<T>> {
        self.check(x)?;
        let mut spec = self.spectrum(x);
        for (j, z) in spec.iter_mut().enumerate() {
            *z = *z * mult(j);
        }
        Ok(self.synthesize(spec))
    }

    pub fn apply_c_spectral(&self, x: &GridSignal<T>) -> Result<GridSignal<T>> {
        self.apply_multiplier(x, |j| Complex::new(self.c_table[j], T::zero()))
    }

    pub fn apply_s_spectral(&self, x: &GridSignal<T>) -> Result<GridSignal<T>> {
        self.apply_multiplier(x, |j| Complex::new(T::zero(), self.s_table[j]))
    }

    /// Hilbert transform with kernel `1/(πt)`, multiplier `i·sgn(λ)`.
    ///
    /// The kernel decays too slowly for a sampled multiplier: its periodised
    /// image would leak across the padding. The table is instead the padded
    /// transform of the band-limited kernel truncated to the grid span, which
    /// makes the circular convolution an exact linear one.
    pub fn apply_hilbert_spectral(&self, x: &GridSignal<T>) -> Result<GridSignal<T>> {
        self.apply_multiplier(x, |j| self.hilbert_table[j])
    }

    fn apply_matrix(&self, x: &VectorSignal<T>, sign: T) -> Result<VectorSignal<T>> {
        self.check(&x.x1)?;
        self.check(&x.x2)?;
        let (a, b) = rayon::join(|| self.spectrum(&x.x1), || self.spectrum(&x.x2));
        let mut y1 = Vec::with_capacity(self.m);
        let mut y2 = Vec::with_capacity(self.m);
        for j in 0..self.m {
            let c = Complex::new(self.c_table[j], T::zero());
            let s = Complex::new(T::zero(), sign * self.s_table[j]);
            y1.push(c * a[j] + s * b[j]);
            y2.push(s * a[j] + c * b[j]);
        }
        let (x1, x2) = rayon::join(|| self.synthesize(y1), || self.synthesize(y2));
        Ok(VectorSignal { x1, x2 })
    }

    /// `[C x₁ + S x₂, S x₁ + C x₂]`.
    pub fn apply_phi(&self, x: &VectorSignal<T>) -> Result<VectorSignal<T>> {
        self.apply_matrix(x, T::one())
    }

    /// `[C x₁ − S x₂, −S x₁ + C x₂]`.
    pub fn apply_psi(&self, x: &VectorSignal<T>) -> Result<VectorSignal<T>> {
        self.apply_matrix(x, -T::one())
    }
}

/// `C_ω x` at every node by the trapezoid rule.
pub fn apply_c_direct<T: Real>(omega: OmegaParam<T>, x: &GridSignal<T>) -> GridSignal<T> {
    let nodes: Vec<T> = x.grid().nodes().collect();
    let out = convolve_c_direct(omega, x, &nodes);
    GridSignal::new(*x.grid(), out.values).expect("finite")
}

/// `S_ω x` at every node by symmetric-pair principal-value quadrature.
pub fn apply_s_direct<T: Real>(omega: OmegaParam<T>, x: &GridSignal<T>, cfg: &PVConfig<T>) -> Result<GridSignal<T>> {
    let nodes: Vec<T> = x.grid().nodes().collect();
    GridSignal::new(*x.grid(), convolve_s_pv(omega, x, &nodes, cfg)?)
}

pub fn apply_hilbert_direct<T: Real>(x: &GridSignal<T>, cfg: &PVConfig<T>) -> Result<GridSignal<T>> {
    let nodes: Vec<T> = x.grid().nodes().collect();
    GridSignal::new(*x.grid(), hilbert_pv(x, &nodes, cfg)?)
}

fn apply_matrix_direct<T: Real>(
    omega: OmegaParam<T>,
    x: &VectorSignal<T>,
    sign: T,
    cfg: &PVConfig<T>,
) -> Result<VectorSignal<T>> {
    let c1 = apply_c_direct(omega, &x.x1);
    let c2 = apply_c_direct(omega, &x.x2);
    let s1 = apply_s_direct(omega, &x.x1, cfg)?.scale(Complex::new(sign, T::zero()));
    let s2 = apply_s_direct(omega, &x.x2, cfg)?.scale(Complex::new(sign, T::zero()));
    Ok(VectorSignal { x1: c1.add(&s2)?, x2: s1.add(&c2)? })
}

pub fn apply_phi_direct<T: Real>(omega: OmegaParam<T>, x: &VectorSignal<T>, cfg: &PVConfig<T>) -> Result<VectorSignal<T>> {
    apply_matrix_direct(omega, x, T::one(), cfg)
}

pub fn apply_psi_direct<T: Real>(omega: OmegaParam<T>, x: &VectorSignal<T>, cfg: &PVConfig<T>) -> Result<VectorSignal<T>> {
    apply_matrix_direct(omega, x, -T::one(), cfg)
}

/// `sqrt(δ Σ |x_k|²)`.
pub fn l2_norm<T: Real>(x: &GridSignal<T>) -> T {
    let mut acc = CompensatedSum::new();
    for z in x.samples() {
        acc.add(z.norm_sqr());
    }
    (x.grid().delta() * acc.value()).sqrt()
}

/// `sqrt(δ Σ |x_k|² e^{−2σ|t_k|})`.
pub fn weighted_norm<T: Real>(x: &GridSignal<T>, sigma: SigmaParam<T>) -> T {
    let g = x.grid();
    let two_s = sigma.get() + sigma.get();
    let mut acc = CompensatedSum::new();
    for (k, z) in x.samples().iter().enumerate() {
        acc.add(z.norm_sqr() * (-two_s * g.node(k).abs()).exp());
    }
    (g.delta() * acc.value()).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// Multiply by `e^{−σ|t|}`.
    Forward,
    /// Multiply by `e^{+σ|t|}`.
    Inverse,
}

/// Conjugation between `L²_σ` and `L²`: `‖forward(x)‖_{L²} = ‖x‖_{L²_σ}`.
pub fn conjugate_weight<T: Real>(x: &GridSignal<T>, sigma: SigmaParam<T>, direction: Direction) -> Result<GridSignal<T>> {
    let s = match direction {
        Direction::Forward => -sigma.get(),
        Direction::Inverse => sigma.get(),
    };
    let g = *x.grid();
    let mut out = Vec::with_capacity(x.len());
    for (k, z) in x.samples().iter().enumerate() {
        let w = (s * g.node(k).abs()).exp();
        let v = z * w;
        if !(w.is_finite() && v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow(format!("weight e^(σ|t|) at t = {} is not representable", g.node(k))));
        }
        out.push(v);
    }
    GridSignal::new(g, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorTag {
    C,
    S,
    Phi,
    Psi,
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::C => "C",
            Self::S => "S",
            Self::Phi => "phi",
            Self::Psi => "psi",
        })
    }
}

/// Norm bound of an operator on `L²_σ` (`a = σ/ω < 1`).
pub fn operator_bound(tag: OperatorTag, a: f64) -> f64 {
    let d = 1.0 - a;
    let mc = 2.0;
    let ms = std::f64::consts::PI + 1.0;
    match tag {
        OperatorTag::C => mc / d,
        OperatorTag::S => ms / (d * d),
        OperatorTag::Phi | OperatorTag::Psi => (mc + ms / d) / d,
    }
}

/// Empirical lower estimate of an operator norm on `L²_σ`, against its bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub sigma: f64,
    pub omega: f64,
    pub operator: OperatorTag,
    pub empirical_ratio: f64,
    pub paper_bound: f64,
    pub satisfied: bool,
    pub trials: usize,
    pub skipped: usize,
    pub note: String,
}

fn bound_note(tag: OperatorTag, a: f64) -> String {
    match tag {
        OperatorTag::C => format!("M_c/(1-a) with M_c = 2, a = {a}"),
        OperatorTag::S => format!("M_s/(1-a)^2 with M_s = pi+1, a = {a}"),
        OperatorTag::Phi | OperatorTag::Psi => format!(
            "M/(1-a) with M = M_c + M_s/(1-a) = 2 + (pi+1)/(1-a): the C and S entries each obey their own bound, a = {a}"
        ),
    }
}

/// Draws `trials` random signals in `L²_σ` and reports `max ‖op f‖_σ / ‖f‖_σ`.
pub fn weighted_bound_report<T: Real>(
    plan: &TransformPlan<T>,
    sigma: SigmaParam<T>,
    tag: OperatorTag,
    trials: usize,
    seed: u64,
) -> Result<BoundReport> {
    let a = sigma.ratio_to(plan.omega())?;
    if trials == 0 {
        return Err(crate::error::invalid("trials", "must be >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inputs: Vec<VectorSignal<T>> = (0..trials)
        .map(|_| {
            let x1 = random_weighted_trial(*plan.grid(), sigma.get(), &mut rng)?;
            let x2 = match tag {
                OperatorTag::Phi | OperatorTag::Psi => random_weighted_trial(*plan.grid(), sigma.get(), &mut rng)?,
                _ => GridSignal::zeros(*plan.grid()),
            };
            Ok(VectorSignal { x1, x2 })
        })
        .collect::<Result<_>>()?;
    let ratios: Vec<Option<T>> = inputs
        .par_iter()
        .map(|x| {
            let den = x.weighted_norm(sigma);
            if !(den > T::zero()) {
                return Ok(None);
            }
            let num = match tag {
                OperatorTag::C => weighted_norm(&plan.apply_c_spectral(&x.x1)?, sigma),
                OperatorTag::S => weighted_norm(&plan.apply_s_spectral(&x.x1)?, sigma),
                OperatorTag::Phi => plan.apply_phi(x)?.weighted_norm(sigma),
                OperatorTag::Psi => plan.apply_psi(x)?.weighted_norm(sigma),
            };
            Ok(Some(num / den))
        })
        .collect::<Result<_>>()?;
    let skipped = ratios.iter().filter(|r| r.is_none()).count();
    let empirical = ratios.iter().flatten().fold(0.0f64, |m, r| m.max(r.as_f64()));
    let a = a.as_f64();
    let bound = operator_bound(tag, a);
    Ok(BoundReport {
        sigma: sigma.get().as_f64(),
        omega: plan.omega().get().as_f64(),
        operator: tag,
        empirical_ratio: empirical,
        paper_bound: bound,
        satisfied: empirical <= bound,
        trials,
        skipped,
        note: bound_note(tag, a),
    })
}

/// `‖Ψ Φ x − x‖_σ / ‖x‖_σ` on the spectral path.
pub fn roundtrip_error<T: Real>(plan: &TransformPlan<T>, x: &VectorSignal<T>, sigma: SigmaParam<T>) -> Result<T> {
    sigma.ratio_to(plan.omega())?;
    let den = x.weighted_norm(sigma);
    if !(den > T::zero()) {
        return Err(Error::ZeroNorm);
    }
    let back = plan.apply_psi(&plan.apply_phi(x)?)?;
    Ok(back.sub(x)?.weighted_norm(sigma) / den)
}

/// Every numerical tolerance used by the verification suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub identity: f64,
    pub table_unitarity: f64,
    pub ft_reproduction: f64,
    pub decomposition: f64,
    pub closed_form: f64,
    pub pythagoras: f64,
    pub isometry: f64,
    pub inversion: f64,
    pub weighted_roundtrip: f64,
    pub hilbert_norm: f64,
    pub hilbert_square: f64,
    pub cross_c: f64,
    pub cross_s: f64,
    pub contractivity: f64,
    pub weight_roundtrip: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-12,
            table_unitarity: 1e-12,
            ft_reproduction: 1e-6,
            decomposition: 1e-12,
            closed_form: 1e-8,
            pythagoras: 1e-6,
            isometry: 1e-6,
            inversion: 1e-6,
            weighted_roundtrip: 1e-4,
            hilbert_norm: 1e-3,
            hilbert_square: 1e-4,
            cross_c: 1e-6,
            cross_s: 1e-4,
            contractivity: 1e-6,
            weight_roundtrip: 1e-12,
        }
    }
}
