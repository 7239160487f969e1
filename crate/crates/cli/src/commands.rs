use std::path::{Path, PathBuf};
use std::time::Duration;

use akhiezer::bench::{self, BenchConfig};
use akhiezer::signals::SignalSpec;
use akhiezer::transform::{apply_c_direct, apply_hilbert_direct, apply_phi_direct, apply_psi_direct, apply_s_direct};
use akhiezer::verify::{run_suite, Fault, VerifyConfig};
use akhiezer::{make_plan, Grid, GridSignal, OmegaParam, PVConfig, SigmaParam, Tolerances, VectorSignal};
use anyhow::{anyhow, bail, Context};

use crate::io::{deviation_csv, emit, read_signal, signal_csv};
use crate::{ApplyArgs, BenchArgs, Failure, Method, RunArgs, SignalKind, Transform, VerifyArgs};

fn params(run: &RunArgs) -> anyhow::Result<(OmegaParam<f64>, SigmaParam<f64>)> {
    let w = OmegaParam::new(run.omega)?;
    let s = SigmaParam::new(run.sigma)?;
    s.ratio_to(w)?;
    Ok((w, s))
}

fn tolerances(run: &RunArgs) -> anyhow::Result<Tolerances> {
    let mut v = serde_json::to_value(Tolerances::default())?;
    for (name, value) in &run.tolerances {
        let slot = v.get_mut(name.as_str()).ok_or_else(|| anyhow!("unknown tolerance {name:?}"))?;
        *slot = serde_json::json!(value);
    }
    Ok(serde_json::from_value(v)?)
}

fn generate(run: &RunArgs, a: &ApplyArgs) -> anyhow::Result<VectorSignal<f64>> {
    let grid = Grid::from_bounds(run.grid.t_min, run.grid.t_max, run.grid.n)?;
    let spec = match a.signal {
        SignalKind::Gaussian => SignalSpec::Gaussian { center: a.center, width: a.width },
        SignalKind::Bump => SignalSpec::Bump { center: a.center, radius: a.width },
        SignalKind::SechPower => SignalSpec::SechPower { scale: a.width, power: a.power },
        SignalKind::GrownBump => {
            let growth = a.growth.unwrap_or(0.8 * run.sigma);
            if !(growth < run.sigma || growth == 0.0) {
                bail!("grown_bump growth {growth} must be below sigma {}", run.sigma);
            }
            SignalSpec::GrownBump { growth, plateau: a.plateau, taper: a.taper }
        }
        SignalKind::BandlimitedNoise => SignalSpec::BandlimitedNoise { cutoff: a.cutoff, modes: a.modes, seed: run.seed },
    };
    let x: GridSignal<f64> = spec.generate(grid)?;
    Ok(VectorSignal::from_first(x))
}

fn direct(t: Transform, w: OmegaParam<f64>, x: &VectorSignal<f64>) -> akhiezer::Result<VectorSignal<f64>> {
    let cfg = PVConfig::default();
    match t {
        Transform::C => VectorSignal::new(apply_c_direct(w, x.x1()), apply_c_direct(w, x.x2())),
        Transform::S => VectorSignal::new(apply_s_direct(w, x.x1(), &cfg)?, apply_s_direct(w, x.x2(), &cfg)?),
        Transform::Hilbert => VectorSignal::new(apply_hilbert_direct(x.x1(), &cfg)?, apply_hilbert_direct(x.x2(), &cfg)?),
        Transform::Phi => apply_phi_direct(w, x, &cfg),
        Transform::Psi => apply_psi_direct(w, x, &cfg),
    }
}

fn spectral(t: Transform, w: OmegaParam<f64>, x: &VectorSignal<f64>) -> akhiezer::Result<VectorSignal<f64>> {
    let plan = make_plan(w, *x.grid())?;
    match t {
        Transform::C => VectorSignal::new(plan.apply_c_spectral(x.x1())?, plan.apply_c_spectral(x.x2())?),
        Transform::S => VectorSignal::new(plan.apply_s_spectral(x.x1())?, plan.apply_s_spectral(x.x2())?),
        Transform::Hilbert => VectorSignal::new(plan.apply_hilbert_spectral(x.x1())?, plan.apply_hilbert_spectral(x.x2())?),
        Transform::Phi => plan.apply_phi(x),
        Transform::Psi => plan.apply_psi(x),
    }
}

fn deviation_path(out: Option<&Path>, explicit: Option<&PathBuf>) -> Option<PathBuf> {
    explicit.cloned().or_else(|| {
        out.map(|p| {
            let stem = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            p.with_file_name(format!("{stem}.deviation.csv"))
        })
    })
}

pub fn apply(run: &RunArgs, a: &ApplyArgs) -> Result<(), Failure> {
    let (w, _) = params(run)?;
    let tol = tolerances(run)?;
    let x = match &a.input {
        Some(p) => read_signal(p)?,
        None => generate(run, a)?,
    };
    let out = run.out.as_deref();
    match a.method {
        Method::Spectral => emit(out, &signal_csv(&spectral(a.transform, w, &x)?)?)?,
        Method::Direct => emit(out, &signal_csv(&direct(a.transform, w, &x)?)?)?,
        Method::Both => {
            let ys = spectral(a.transform, w, &x)?;
            let yd = direct(a.transform, w, &x)?;
            let dev = deviation_csv(&ys, &yd)?;
            let main = signal_csv(&ys)?;
            let dev_path = deviation_path(out, a.deviation_out.as_ref());
            emit(out, &main)?;
            match &dev_path {
                Some(p) => emit(Some(p), &dev)?,
                None => log::info!("no --out or --deviation-out; deviation table not written"),
            }
            let max = ys.max_abs_diff(&yd)?;
            let limit = if a.transform == Transform::C { tol.cross_c } else { tol.cross_s };
            eprintln!("max deviation spectral vs direct: {max:.3e} (tolerance {limit:.1e})");
            if !(max <= limit) {
                return Err(Failure::Invariant(format!("paths disagree by {max:.3e} > {limit:.1e}")));
            }
        }
    }
    Ok(())
}

pub fn verify(run: &RunArgs, v: &VerifyArgs) -> Result<(), Failure> {
    params(run)?;
    let fault = match v.inject_fault.as_deref() {
        None | Some("") => None,
        Some("corrupt_table") => Some(Fault::CorruptMultiplierTable),
        Some(other) => return Err(anyhow!("unknown fault {other:?}").into()),
    };
    let cfg = VerifyConfig {
        omega: run.omega,
        sigma: run.sigma,
        t_min: run.grid.t_min,
        t_max: run.grid.t_max,
        n: run.grid.n,
        seed: run.seed,
        trials: v.trials,
        tolerances: tolerances(run)?,
        fault,
    };
    let report = run_suite(&cfg)?;
    let json = serde_json::to_string_pretty(&report).context("serialising report")?;
    let lines: Vec<String> = report.checks.iter().map(|c| c.line()).collect();
    match run.out.as_deref() {
        Some(p) => {
            emit(Some(p), json.as_bytes())?;
            println!("{}", lines.join("\n"));
        }
        None => {
            eprintln!("{}", lines.join("\n"));
            emit(None, json.as_bytes())?;
        }
    }
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Invariant(format!("failing checks: {}", failed.join(", "))))
    }
}

pub fn bench(run: &RunArgs, b: &BenchArgs) -> Result<(), Failure> {
    params(run)?;
    if !(b.timeout.is_finite() && b.timeout > 0.0) {
        return Err(anyhow!("timeout must be > 0").into());
    }
    let cfg = BenchConfig {
        omega: run.omega,
        sizes: b.sizes.clone(),
        timeout: Duration::from_secs_f64(b.timeout),
        tolerance: tolerances(run)?.cross_s,
        ..BenchConfig::default()
    };
    let rows = bench::run(&cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "spectral_seconds", "direct_seconds", "max_deviation", "status"])?;
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.6e}")).unwrap_or_default();
    for r in &rows {
        let status = serde_json::to_value(r.status)?.as_str().unwrap_or("unknown").to_owned();
        w.write_record([
            r.n.to_string(),
            format!("{:.6e}", r.spectral_seconds),
            opt(r.direct_seconds),
            opt(r.max_deviation),
            status,
        ])?;
    }
    emit(run.out.as_deref(), &w.into_inner().map_err(|e| anyhow!("{e}"))?)?;
    Ok(())
}
