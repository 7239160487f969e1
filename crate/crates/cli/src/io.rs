//! CSV signal files: header `t,re1,im1,re2,im2`, one row per grid node.

use std::fs;
use std::io::Write;
use std::path::Path;

use akhiezer::{Grid, GridSignal, VectorSignal};
use anyhow::{bail, ensure, Context, Result};
use num_complex::Complex;

pub const HEADER: [&str; 5] = ["t", "re1", "im1", "re2", "im2"];

/// Reads a two-component signal. The `t` column must be a uniform grid.
pub fn read_signal(path: &Path) -> Result<VectorSignal<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    ensure!(header == HEADER, "{}: header must be {}, found {}", path.display(), HEADER.join(","), header.join(","));
    let mut ts = Vec::new();
    let mut x1 = Vec::new();
    let mut x2 = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("{}: row {}", path.display(), i + 2))?;
        let v: Vec<f64> = rec
            .iter()
            .map(|f| f.parse::<f64>().with_context(|| format!("{}: row {}: bad number {f:?}", path.display(), i + 2)))
            .collect::<Result<_>>()?;
        ensure!(v.iter().all(|x| x.is_finite()), "{}: row {}: non-finite value", path.display(), i + 2);
        ts.push(v[0]);
        x1.push(Complex::new(v[1], v[2]));
        x2.push(Complex::new(v[3], v[4]));
    }
    ensure!(ts.len() >= 2, "{}: need at least 2 rows, found {}", path.display(), ts.len());
    let grid = Grid::from_bounds(ts[0], ts[ts.len() - 1], ts.len())?;
    for (k, &t) in ts.iter().enumerate() {
        if grid.node_index(t) != Some(k) {
            bail!("{}: t column is not uniformly spaced (row {})", path.display(), k + 2);
        }
    }
    Ok(VectorSignal::new(GridSignal::new(grid, x1)?, GridSignal::new(grid, x2)?)?)
}

fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn signal_csv(x: &VectorSignal<f64>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(HEADER)?;
    for (k, t) in x.grid().nodes().enumerate() {
        let a = x.x1().samples()[k];
        let b = x.x2().samples()[k];
        w.write_record([fmt(t), fmt(a.re), fmt(a.im), fmt(b.re), fmt(b.im)])?;
    }
    Ok(w.into_inner()?)
}

/// Node-wise `|a − b|` per component, header `t,dev1,dev2`.
pub fn deviation_csv(a: &VectorSignal<f64>, b: &VectorSignal<f64>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "dev1", "dev2"])?;
    for (k, t) in a.grid().nodes().enumerate() {
        let d1 = (a.x1().samples()[k] - b.x1().samples()[k]).norm();
        let d2 = (a.x2().samples()[k] - b.x2().samples()[k]).norm();
        w.write_record([fmt(t), fmt(d1), fmt(d2)])?;
    }
    Ok(w.into_inner()?)
}

/// Writes to `path`, or stdout when `None`.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            Ok(out.flush()?)
        }
    }
}
