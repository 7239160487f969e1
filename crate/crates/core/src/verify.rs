//! Invariant checks, each producing one named pass/fail record, and the full
//! suite that the command-line `verify` runs.

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernels::{
    check_c_envelope, check_s_envelope, closed_form_cosh_integral, closed_form_sinh_integral, cosh_ratio_integrand,
    eval_r, eval_s, sech, xi_cosh_sinh_integrand, OmegaParam, SigmaParam,
};
use crate::quadrature::adaptive::{integrate_half_line, QuadTolerance};
use crate::quadrature::{convolve_c_direct, convolve_s_pv, Grid, GridSignal, PVConfig};
use crate::signals::{bump, gaussian, grown_bump, random_weighted_trial};
use crate::spectral::{c_hat, c_hat_trapezoid, remainder_rho, s_hat, s_hat_extrapolated, verify_crucial_identity};
use crate::transform::{
    apply_c_direct, apply_hilbert_direct, apply_s_direct, l2_norm, make_plan, weighted_bound_report, BoundReport,
    OperatorTag, Tolerances, TransformPlan, VectorSignal,
};

/// One verified property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The mathematical statement being checked.
    pub paper_ref: String,
    pub value: f64,
    pub bound_or_target: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckResult {
    /// Passes when `value ≤ bound + tolerance`.
    fn at_most(name: &str, statement: &str, value: f64, bound: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            paper_ref: statement.into(),
            value,
            bound_or_target: bound,
            tolerance,
            pass: value.is_finite() && value <= bound + tolerance,
        }
    }

    fn failed(name: &str, statement: &str, err: &crate::Error) -> Self {
        Self {
            name: name.into(),
            paper_ref: format!("{statement} [error: {err}]"),
            value: f64::NAN,
            bound_or_target: 0.0,
            tolerance: 0.0,
            pass: false,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {:<28} value={:.3e} target={:.3e} tol={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.value,
            self.bound_or_target,
            self.tolerance
        )
    }
}

fn guard(name: &str, statement: &str, r: Result<CheckResult>) -> CheckResult {
    r.unwrap_or_else(|e| CheckResult::failed(name, statement, &e))
}

fn omega(w: f64) -> OmegaParam<f64> {
    OmegaParam::new(w).expect("positive omega")
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

/// `max |ĉ² + |ŝ|² − 1|` over `points` frequencies in `[−50ω, 50ω]` for each `ω`.
pub fn check_crucial_identity(omegas: &[f64], points: usize, tol: f64) -> CheckResult {
    let worst = omegas
        .iter()
        .flat_map(|&w| linspace(-50.0 * w, 50.0 * w, points).into_iter().map(move |l| (w, l)))
        .fold(0.0f64, |m, (w, l)| m.max((verify_crucial_identity(omega(w), l) - 1.0).abs()));
    CheckResult::at_most("crucial_identity", "|c^(l)|^2 + |s^(l)|^2 = 1", worst, 0.0, tol)
}

pub fn check_table_unitarity(plan: &TransformPlan<f64>, tol: f64) -> CheckResult {
    CheckResult::at_most(
        "plan_table_unitarity",
        "discrete multiplier tables satisfy |c_j|^2 + |s_j|^2 = 1",
        plan.table_unitarity_defect(),
        0.0,
        tol,
    )
}

fn envelope_points(w: f64) -> Vec<f64> {
    let mut xs = linspace(-60.0 / w, 60.0 / w, 2001);
    xs.extend([1e-9, -1e-9, 1e-6, 1e-3, 700.0 / w]);
    xs
}

/// Counts points where `(ω/π)e^{−ω|ξ|} ≤ C < (2ω/π)e^{−ω|ξ|}` fails.
pub fn check_c_envelope_sweep(omegas: &[f64]) -> CheckResult {
    let bad = omegas
        .iter()
        .flat_map(|&w| envelope_points(w).into_iter().map(move |x| check_c_envelope(omega(w), x)))
        .filter(|e| !e.holds)
        .count();
    CheckResult::at_most("c_envelope", "(w/pi)e^{-w|x|} <= C(x) < (2w/pi)e^{-w|x|}", bad as f64, 0.0, 0.0)
}

/// Counts points where `|S| ≤ (2ω/π)e^{−ω|ξ|}/(1 − e^{−2ω|ξ|})` fails.
pub fn check_s_envelope_sweep(omegas: &[f64]) -> CheckResult {
    let mut bad = 0usize;
    for &w in omegas {
        for x in envelope_points(w) {
            match check_s_envelope(omega(w), x) {
                Ok(e) if e.holds => {}
                Ok(_) => bad += 1,
                Err(_) => {}
            }
        }
    }
    CheckResult::at_most("s_envelope", "|S(x)| <= (2w/pi)e^{-w|x|}/(1-e^{-2w|x|})", bad as f64, 0.0, 0.0)
}

/// `max |S − 1/(πξ) − r| / max(1, |S|)`.
pub fn check_decomposition(omegas: &[f64], tol: f64) -> CheckResult {
    let mut worst = 0.0f64;
    for &w in omegas {
        for x in envelope_points(w) {
            let Ok(s) = eval_s(omega(w), x) else { continue };
            let res = s - 1.0 / (std::f64::consts::PI * x) - eval_r(omega(w), x);
            worst = worst.max(res.abs() / s.abs().max(1.0));
        }
    }
    CheckResult::at_most("s_decomposition", "S(x) = 1/(pi x) + r(x), r bounded", worst, 0.0, tol)
}

/// Trapezoid transform of sampled `C_ω` against `sech(πλ/2ω)` on `[−20ω, 20ω]`.
pub fn check_ft_c(w: f64, tol: f64) -> CheckResult {
    let worst = linspace(-20.0 * w, 20.0 * w, 401)
        .par_iter()
        .map(|&l| (c_hat_trapezoid(omega(w), l, 0.05 / w, 40.0 / w) - c_hat(omega(w), l)).abs())
        .reduce(|| 0.0, f64::max);
    CheckResult::at_most("ft_of_c", "Fourier transform of C is sech(pi l/2w)", worst, 0.0, tol)
}

/// Extrapolated truncated transform of `S_ω` against `i·tanh(πλ/2ω)`.
pub fn check_ft_s(w: f64, points: usize, tol: f64) -> CheckResult {
    let statement = "Fourier transform of S (principal value) is i tanh(pi l/2w)";
    let lambdas = linspace(-20.0 * w, 20.0 * w, points);
    let r: Result<f64> = lambdas
        .par_iter()
        .map(|&l| Ok((s_hat_extrapolated(omega(w), l)?.value - s_hat(omega(w), l)).norm()))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)));
    guard("ft_of_s", statement, r.map(|v| CheckResult::at_most("ft_of_s", statement, v, 0.0, tol)))
}

/// `|ρ(λ, ε)|` decreases strictly along `ε_k = ε₀2^{−k}`, `ε₀ = min(π/4ω, 1/2|λ|)`.
pub fn check_rho_monotone(w: f64) -> CheckResult {
    let statement = "s^(l) - s^_eps(l) -> 0 monotonically as eps -> 0";
    let r = (|| -> Result<CheckResult> {
        let mut violations = 0usize;
        let mut last = 0.0f64;
        for &l in &[0.3 * w, w, 3.0 * w, -7.0 * w, 20.0 * w] {
            let eps0 = (std::f64::consts::FRAC_PI_4 / w).min(0.5 / l.abs());
            let mags: Vec<f64> = (0..6)
                .map(|k| Ok(remainder_rho(omega(w), l, eps0 / f64::powi(2.0, k))?.rho.norm()))
                .collect::<Result<_>>()?;
            violations += mags.windows(2).filter(|p| !(p[1] < p[0])).count();
            last = last.max(*mags.last().expect("six levels"));
        }
        let mut c = CheckResult::at_most("rho_monotone_decay", statement, violations as f64, 0.0, 0.0);
        c.paper_ref = format!("{statement}; smallest-eps |rho| = {last:.3e}");
        Ok(c)
    })();
    guard("rho_monotone_decay", statement, r)
}

/// `sup |ρ(λ, ε)|` over `λ ∈ [−50ω, 50ω]`, `ε ∈ (0, π/4ω]` is finite; it is at most
/// `(2/π)Si(π) + (π/4)²/(6π) < 1.25`.
pub fn check_rho_sup(w: f64) -> CheckResult {
    let statement = "sup over l, 0 < eps <= pi/4w of |s^(l) - s^_eps(l)| is finite";
    let lambdas = linspace(-50.0 * w, 50.0 * w, 41);
    let eps: Vec<f64> = (0..6).map(|k| std::f64::consts::FRAC_PI_4 / w / f64::powi(2.0, k)).collect();
    let r: Result<f64> = lambdas
        .par_iter()
        .map(|&l| crate::spectral::remainder_grid_sup(omega(w), &[l], &eps))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)));
    guard("rho_grid_sup", statement, r.map(|v| CheckResult::at_most("rho_grid_sup", statement, v, 1.25, 0.0)))
}

/// Adaptive quadrature against `π/(2cos(πa/2))` and `π²/(4sin²(π(1−a)/2))`, relative error.
pub fn check_closed_forms(tol: f64) -> Vec<CheckResult> {
    let ratios: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();
    let mut cosh_err = 0.0f64;
    let mut sinh_err = 0.0f64;
    let mut converged = true;
    for &a in &ratios {
        let q = QuadTolerance { abs: 1e-12, rel: 1e-13, max_intervals: 2000 };
        let ic = integrate_half_line(|x| cosh_ratio_integrand(a, x), 0.0, 2.0, 1.0 - a, q);
        let b = 0.5 * (1.0 - a);
        let is = integrate_half_line(|x| xi_cosh_sinh_integrand(a, x), 0.0, 1.0 + 2.0 / b, b, q);
        converged &= ic.converged && is.converged;
        let c = closed_form_cosh_integral(a).expect("a < 1");
        let s = closed_form_sinh_integral(a).expect("a < 1");
        cosh_err = cosh_err.max((ic.value - c).abs() / c);
        sinh_err = sinh_err.max((is.value - s).abs() / s);
    }
    let nan_unless = |v: f64| if converged { v } else { f64::NAN };
    vec![
        CheckResult::at_most(
            "closed_form_cosh",
            "int_0^inf cosh(a x)/cosh(x) dx = pi/(2cos(pi a/2))",
            nan_unless(cosh_err),
            0.0,
            tol,
        ),
        CheckResult::at_most(
            "closed_form_sinh",
            "int_0^inf x cosh(a x)/sinh(x) dx = pi^2/(4sin^2(pi(1-a)/2))",
            nan_unless(sinh_err),
            0.0,
            tol,
        ),
    ]
}

/// `‖Cf‖² + ‖Sf‖² = ‖f‖²` on random smooth signals, worst relative defect.
pub fn check_pythagoras(plan: &TransformPlan<f64>, trials: usize, seed: u64, tol: f64) -> CheckResult {
    let statement = "||C f||^2 + ||S f||^2 = ||f||^2";
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = (|| -> Result<f64> {
        let inputs: Vec<GridSignal<f64>> =
            (0..trials).map(|_| random_weighted_trial(*plan.grid(), 0.0, &mut rng)).collect::<Result<_>>()?;
        inputs
            .par_iter()
            .map(|f| {
                let n2 = l2_norm(f).powi(2);
                let c = l2_norm(&plan.apply_c_spectral(f)?).powi(2);
                let s = l2_norm(&plan.apply_s_spectral(f)?).powi(2);
                Ok((c + s - n2).abs() / n2)
            })
            .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
    })();
    guard("pythagoras", statement, r.map(|v| CheckResult::at_most("pythagoras", statement, v, 0.0, tol)))
}

/// Pairs of smooth, well-contained signals scaled to the plan grid.
pub fn standard_signals(grid: Grid<f64>, seed: u64) -> Result<Vec<VectorSignal<f64>>> {
    let half = 0.5 * (grid.t_max() - grid.t_min());
    let mid = grid.t_min() + half;
    let width = half / 20.0;
    let g = gaussian(grid, mid, width)?;
    let gt = g.map(|t, z| z * ((t - mid) / width));
    let b = bump(grid, mid, half / 4.0)?;
    let sp = GridSignal::from_real_fn(grid, |t| sech((t - mid) / width).powi(2))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r1 = random_weighted_trial(grid, 0.0, &mut rng)?;
    let r2 = random_weighted_trial(grid, 0.0, &mut rng)?;
    let complex = g.map(|t, z| z * Complex::new(0.0, (t - mid) / width).exp());
    Ok(vec![
        VectorSignal::new(g.clone(), gt)?,
        VectorSignal::new(b, sp)?,
        VectorSignal::new(r1, r2)?,
        VectorSignal::new(complex, g)?,
    ])
}

/// `‖Φx‖ = ‖x‖` and `‖Ψx‖ = ‖x‖` in `L² ⊕ L²`, worst relative defect.
pub fn check_isometry(plan: &TransformPlan<f64>, seed: u64, tol: f64) -> CheckResult {
    let statement = "||Phi x|| = ||Psi x|| = ||x|| in L2+L2";
    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for x in standard_signals(*plan.grid(), seed)? {
            let n = x.l2_norm();
            worst = worst.max((plan.apply_phi(&x)?.l2_norm() - n).abs() / n);
            worst = worst.max((plan.apply_psi(&x)?.l2_norm() - n).abs() / n);
        }
        Ok(worst)
    })();
    guard("isometry", statement, r.map(|v| CheckResult::at_most("isometry", statement, v, 0.0, tol)))
}

/// `ΨΦx = ΦΨx = x`, worst relative `L² ⊕ L²` error.
pub fn check_inversion(plan: &TransformPlan<f64>, seed: u64, tol: f64) -> CheckResult {
    let statement = "Psi Phi = Phi Psi = I in L2+L2";
    let r = (|| -> Result<f64> {
        let mut worst = 0.0f64;
        for x in standard_signals(*plan.grid(), seed)? {
            let n = x.l2_norm();
            worst = worst.max(plan.apply_psi(&plan.apply_phi(&x)?)?.sub(&x)?.l2_norm() / n);
            worst = worst.max(plan.apply_phi(&plan.apply_psi(&x)?)?.sub(&x)?.l2_norm() / n);
        }
        Ok(worst)
    })();
    guard("mutual_inversion", statement, r.map(|v| CheckResult::at_most("mutual_inversion", statement, v, 0.0, tol)))
}

/// `‖Hx‖ = ‖x‖` and `H²x = −x` by direct principal-value quadrature on
/// zero-mean derivatives of a gaussian, whose transforms decay like `|t|^{−3}`
/// or faster.
pub fn check_hilbert(tol_norm: f64, tol_square: f64) -> Vec<CheckResult> {
    let s_norm = "||H x|| = ||x||";
    let s_square = "H(H x) = -x";
    let r = (|| -> Result<(f64, f64)> {
        let grid = Grid::from_bounds(-30.0f64, 30.0, 4096)?;
        let cfg = PVConfig::default();
        let d2 = GridSignal::from_real_fn(grid, |t| (4.0 * t * t - 2.0) * (-t * t).exp())?;
        let d3 = GridSignal::from_real_fn(grid, |t| (12.0 * t - 8.0 * t * t * t) * (-t * t).exp())?;
        let mut norm_err = 0.0f64;
        let mut sq_err = 0.0f64;
        for x in [d2, d3] {
            let n = l2_norm(&x);
            let hx = apply_hilbert_direct(&x, &cfg)?;
            norm_err = norm_err.max((l2_norm(&hx) - n).abs() / n);
            let hhx = apply_hilbert_direct(&hx, &cfg)?;
            sq_err = sq_err.max(l2_norm(&hhx.add(&x)?) / n);
        }
        Ok((norm_err, sq_err))
    })();
    match r {
        Ok((a, b)) => vec![
            CheckResult::at_most("hilbert_norm", s_norm, a, 0.0, tol_norm),
            CheckResult::at_most("hilbert_square", s_square, b, 0.0, tol_square),
        ],
        Err(e) => vec![CheckResult::failed("hilbert_norm", s_norm, &e), CheckResult::failed("hilbert_square", s_square, &e)],
    }
}

/// Weighted operator-norm reports for every `(σ/ω, operator)` pair.
pub fn bound_reports(plan: &TransformPlan<f64>, ratios: &[f64], trials: usize, seed: u64) -> (Vec<BoundReport>, Vec<CheckResult>) {
    let w = plan.omega().get();
    let mut reports = Vec::new();
    let mut checks = Vec::new();
    for &a in ratios {
        for tag in [OperatorTag::C, OperatorTag::S, OperatorTag::Phi, OperatorTag::Psi] {
            let name = format!("weighted_bound_{tag}_a{a}");
            let statement = "||op||_{L2_sigma} <= bound(sigma/omega)";
            let r = SigmaParam::new(a * w).and_then(|s| weighted_bound_report(plan, s, tag, trials, seed));
            match r {
                Ok(rep) => {
                    let mut c = CheckResult::at_most(&name, statement, rep.empirical_ratio, rep.paper_bound, 0.0);
                    c.paper_ref = format!("{statement}; {}", rep.note);
                    checks.push(c);
                    reports.push(rep);
                }
                Err(e) => checks.push(CheckResult::failed(&name, statement, &e)),
            }
        }
    }
    (reports, checks)
}

/// At `σ = 0`, `C_ω` is a contraction.
pub fn check_contractivity(plan: &TransformPlan<f64>, trials: usize, seed: u64, tol: f64) -> CheckResult {
    let statement = "||C f|| <= ||f|| in L2";
    let r = weighted_bound_report(plan, SigmaParam::new(0.0).expect("zero"), OperatorTag::C, trials, seed)
        .map(|rep| CheckResult::at_most("c_contractive", statement, rep.empirical_ratio, 1.0, tol));
    guard("c_contractive", statement, r)
}

/// Spectral `ΨΦx = x` in `L²_σ ⊕ L²_σ` for signals growing like `e^{0.8σ|t|}`.
pub fn check_weighted_roundtrip(w: f64, ratios: &[f64], tol: f64) -> Vec<CheckResult> {
    ratios
        .iter()
        .map(|&a| {
            let name = format!("weighted_roundtrip_a{a}");
            let statement = "Psi Phi = I in L2_sigma + L2_sigma";
            let r = (|| -> Result<CheckResult> {
                let grid = Grid::from_bounds(-40.0 / w, 40.0 / w, 4096)?;
                let plan = make_plan(omega(w), grid)?;
                let sigma = SigmaParam::new(a * w)?;
                let g = grown_bump(grid, 0.8 * a * w, 12.0 / w, 4.0 / w)?;
                let x = VectorSignal::new(g.clone(), g.map(|t, z| z * (w * t / 10.0).sin()))?;
                let e = crate::transform::roundtrip_error(&plan, &x, sigma)?;
                Ok(CheckResult::at_most(&name, statement, e, 0.0, tol))
            })();
            guard(&name, statement, r)
        })
        .collect()
}

/// Spectral against direct quadrature for `C` and `S`: every node at `n = 256`,
/// spot nodes at `n = 4096`.
pub fn check_cross_path(w: f64, tol_c: f64, tol_s: f64) -> Vec<CheckResult> {
    let s_c = "spectral C agrees with direct quadrature";
    let s_s = "spectral S agrees with principal-value quadrature";
    let r = (|| -> Result<(f64, f64)> {
        let cfg = PVConfig::default();
        let mut dc = 0.0f64;
        let mut ds = 0.0f64;
        let small = Grid::from_bounds(-20.0 / w, 20.0 / w, 256)?;
        let plan = make_plan(omega(w), small)?;
        let x = gaussian(small, 0.3 / w, 1.0 / w)?;
        dc = dc.max(plan.apply_c_spectral(&x)?.max_abs_diff(&apply_c_direct(omega(w), &x))?);
        ds = ds.max(plan.apply_s_spectral(&x)?.max_abs_diff(&apply_s_direct(omega(w), &x, &cfg)?)?);
        let big = Grid::from_bounds(-20.0 / w, 20.0 / w, 4096)?;
        let plan = make_plan(omega(w), big)?;
        let x = gaussian(big, 0.3 / w, 1.0 / w)?;
        let yc = plan.apply_c_spectral(&x)?;
        let ys = plan.apply_s_spectral(&x)?;
        let spots: Vec<usize> = (0..17).map(|k| k * 255 + 8).collect();
        let at: Vec<f64> = spots.iter().map(|&k| big.node(k)).collect();
        let dcv = convolve_c_direct(omega(w), &x, &at).values;
        let dsv = convolve_s_pv(omega(w), &x, &at, &cfg)?;
        for (i, &k) in spots.iter().enumerate() {
            dc = dc.max((yc.samples()[k] - dcv[i]).norm());
            ds = ds.max((ys.samples()[k] - dsv[i]).norm());
        }
        Ok((dc, ds))
    })();
    match r {
        Ok((c, s)) => vec![
            CheckResult::at_most("cross_path_c", s_c, c, 0.0, tol_c),
            CheckResult::at_most("cross_path_s", s_s, s, 0.0, tol_s),
        ],
        Err(e) => vec![CheckResult::failed("cross_path_c", s_c, &e), CheckResult::failed("cross_path_s", s_s, &e)],
    }
}

/// Deliberate damage applied before the suite runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Sets one `ĉ` table entry to 1.5.
    CorruptMultiplierTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub omega: f64,
    pub sigma: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub fault: Option<Fault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            omega: 1.0,
            sigma: 0.5,
            t_min: -20.0,
            t_max: 20.0,
            n: 4096,
            seed: 0,
            trials: 50,
            tolerances: Tolerances::default(),
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
    pub bound_reports: Vec<BoundReport>,
    pub all_pass: bool,
}

impl VerifyReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Runs every check. Parameter errors (bad `ω`, grid, `σ ≥ ω`) are returned
/// as errors; numerical failures appear as failing checks.
pub fn run_suite(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let w = OmegaParam::new(cfg.omega)?;
    SigmaParam::new(cfg.sigma)?.ratio_to(w)?;
    let grid = Grid::from_bounds(cfg.t_min, cfg.t_max, cfg.n)?;
    let mut plan = make_plan(w, grid)?;
    if cfg.fault == Some(Fault::CorruptMultiplierTable) {
        plan.corrupt_c_table(1, 1.5);
    }
    let tol = &cfg.tolerances;
    let omegas = [0.5, 1.0, std::f64::consts::PI, 10.0, cfg.omega];
    let mut checks = vec![
        check_crucial_identity(&omegas, 1000, tol.identity),
        check_table_unitarity(&plan, tol.table_unitarity),
        check_c_envelope_sweep(&omegas),
        check_s_envelope_sweep(&omegas),
        check_decomposition(&omegas, tol.decomposition),
        check_ft_c(cfg.omega, tol.ft_reproduction),
        check_ft_s(cfg.omega, 50, tol.ft_reproduction),
        check_rho_monotone(cfg.omega),
        check_rho_sup(cfg.omega),
    ];
    checks.extend(check_closed_forms(tol.closed_form));
    checks.push(check_pythagoras(&plan, 100, cfg.seed, tol.pythagoras));
    checks.push(check_isometry(&plan, cfg.seed, tol.isometry));
    checks.push(check_inversion(&plan, cfg.seed, tol.inversion));
    checks.extend(check_hilbert(tol.hilbert_norm, tol.hilbert_square));
    checks.push(check_contractivity(&plan, cfg.trials, cfg.seed, tol.contractivity));
    let a = cfg.sigma / cfg.omega;
    let mut ratios = vec![0.0, 0.25, 0.5, 0.75, 0.9];
    if !ratios.contains(&a) {
        ratios.push(a);
    }
    let (bound_reports, bound_checks) = bound_reports(&plan, &ratios, cfg.trials, cfg.seed);
    checks.extend(bound_checks);
    checks.extend(check_weighted_roundtrip(cfg.omega, &[0.25, 0.5], tol.weighted_roundtrip));
    checks.extend(check_cross_path(cfg.omega, tol.cross_c, tol.cross_s));
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerifyReport { config: cfg.clone(), checks, bound_reports, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_envelopes() {
        assert!(check_crucial_identity(&[0.5, 1.0], 100, 1e-12).pass);
        assert!(check_c_envelope_sweep(&[1.0]).pass);
        assert!(check_s_envelope_sweep(&[1.0]).pass);
        assert!(check_decomposition(&[1.0, 10.0], 1e-12).pass);
    }

    #[test]
    fn closed_forms_pass() {
        for c in check_closed_forms(1e-8) {
            assert!(c.pass, "{c:?}");
        }
    }

    #[test]
    fn corrupted_table_is_caught() {
        let g = Grid::from_bounds(-20.0, 20.0, 256).unwrap();
        let mut p = make_plan(omega(1.0), g).unwrap();
        assert!(check_table_unitarity(&p, 1e-12).pass);
        p.corrupt_c_table(1, 1.5);
        let c = check_table_unitarity(&p, 1e-12);
        assert!(!c.pass);
        assert_eq!(c.name, "plan_table_unitarity");
    }

    #[test]
    fn result_line_format() {
        let c = CheckResult::at_most("x", "y", 1e-13, 0.0, 1e-12);
        assert!(c.line().starts_with("PASS x"));
        let f = CheckResult::at_most("x", "y", f64::NAN, 0.0, 1.0);
        assert!(!f.pass);
    }
}
