use std::sync::Arc;

use akhiezer::signals::{bump, gaussian, grown_bump};
use akhiezer::transform::{apply_phi_direct, apply_psi_direct, roundtrip_error};
use akhiezer::{make_plan, Grid, OmegaParam, PVConfig, Plan32, SigmaParam, VectorSignal};
use rayon::prelude::*;

fn w() -> OmegaParam<f64> {
    OmegaParam::new(1.0).unwrap()
}

fn orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|p| (p[0] / p[1]).log2()).collect()
}

#[test]
fn narrow_bump_refinement_spectral() {
    let errs: Vec<f64> = [257, 513, 1025, 2049]
        .iter()
        .map(|&n| {
            let g = Grid::from_bounds(-20.0, 20.0, n).unwrap();
            let x = VectorSignal::from_first(bump(g, 0.0, 1.0).unwrap());
            roundtrip_error(&make_plan(w(), g).unwrap(), &x, SigmaParam::new(0.0).unwrap()).unwrap()
        })
        .collect();
    let ord = orders(&errs);
    assert!(ord.iter().all(|&p| p >= 2.0), "errors {errs:?} orders {ord:?}");
}

#[test]
fn narrow_bump_refinement_direct() {
    let cfg = PVConfig::default();
    let errs: Vec<f64> = [257, 513, 1025, 2049]
        .iter()
        .map(|&n| {
            let g = Grid::from_bounds(-20.0, 20.0, n).unwrap();
            let x = VectorSignal::from_first(bump(g, 0.0, 1.0).unwrap());
            let y = apply_psi_direct(w(), &apply_phi_direct(w(), &x, &cfg).unwrap(), &cfg).unwrap();
            y.sub(&x).unwrap().l2_norm() / x.l2_norm()
        })
        .collect();
    let ord = orders(&errs);
    assert!(ord.iter().all(|&p| p >= 2.0), "errors {errs:?} orders {ord:?}");
}

#[test]
fn direct_and_spectral_phi_agree() {
    let g = Grid::from_bounds(-20.0, 20.0, 512).unwrap();
    let x1 = gaussian(g, 0.5, 1.0).unwrap();
    let x2 = gaussian(g, -1.0, 1.5).unwrap();
    let x = VectorSignal::new(x1, x2).unwrap();
    let a = make_plan(w(), g).unwrap().apply_phi(&x).unwrap();
    let b = apply_phi_direct(w(), &x, &PVConfig::default()).unwrap();
    assert!(a.max_abs_diff(&b).unwrap() < 1e-4);
}

#[test]
fn weighted_roundtrip_with_growth() {
    let g = Grid::from_bounds(-40.0, 40.0, 4096).unwrap();
    let plan = make_plan(w(), g).unwrap();
    let x = grown_bump(g, 0.4, 10.0, 5.0).unwrap();
    let v = VectorSignal::new(x.clone(), x.map(|t, z| z * (t / 7.0).cos())).unwrap();
    let e = roundtrip_error(&plan, &v, SigmaParam::new(0.5).unwrap()).unwrap();
    assert!(e < 1e-4, "{e}");
}

#[test]
fn plan_is_shareable_across_threads() {
    let g = Grid::from_bounds(-10.0, 10.0, 1024).unwrap();
    let plan = Arc::new(make_plan(w(), g).unwrap());
    let x = VectorSignal::from_first(gaussian(g, 0.0, 1.0).unwrap());
    let reference = plan.apply_phi(&x).unwrap();
    let all: Vec<_> = (0..8).into_par_iter().map(|_| plan.apply_phi(&x).unwrap()).collect();
    assert!(all.iter().all(|y| *y == reference));
}

#[test]
fn single_precision_roundtrip() {
    let g = Grid::from_bounds(-20.0f32, 20.0, 1024).unwrap();
    let plan: Plan32 = make_plan(OmegaParam::new(1.0f32).unwrap(), g).unwrap();
    let x = VectorSignal::from_first(gaussian(g, 0.0, 1.0).unwrap());
    let back = plan.apply_psi(&plan.apply_phi(&x).unwrap()).unwrap();
    assert!(back.max_abs_diff(&x).unwrap() < 1e-5);
    assert!(plan.table_unitarity_defect() < 1e-6);
}
