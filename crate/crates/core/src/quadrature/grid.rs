use num_complex::Complex;

use crate::error::{invalid, Error, Result};
use crate::scalar::Real;

/// Uniform sampling grid `t_k = t_min + k·delta`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    t_min: T,
    delta: T,
    n: usize,
}

impl<T: Real> Grid<T> {
    pub fn new(t_min: T, delta: T, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("n", format!("grid needs at least 2 samples, got {n}")));
        }
        if !(delta.is_finite() && delta > T::zero()) {
            return Err(invalid("delta", format!("grid step must be finite and > 0, got {delta}")));
        }
        if !t_min.is_finite() {
            return Err(invalid("t_min", "must be finite"));
        }
        let last = t_min + delta * T::of_usize(n - 1);
        if !last.is_finite() {
            return Err(Error::Overflow("grid end point is not representable".into()));
        }
        Ok(Self { t_min, delta, n })
    }

    /// Grid with `n` nodes spanning `[t_min, t_max]` inclusive.
    pub fn from_bounds(t_min: T, t_max: T, n: usize) -> Result<Self> {
        if !(t_max > t_min) {
            return Err(invalid("t_max", format!("must exceed t_min ({t_max} <= {t_min})")));
        }
        if n < 2 {
            return Err(invalid("n", format!("grid needs at least 2 samples, got {n}")));
        }
        Self::new(t_min, (t_max - t_min) / T::of_usize(n - 1), n)
    }

    #[inline]
    pub fn t_min(&self) -> T {
        self.t_min
    }

    #[inline]
    pub fn delta(&self) -> T {
        self.delta
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn node(&self, k: usize) -> T {
        self.t_min + self.delta * T::of_usize(k)
    }

    pub fn t_max(&self) -> T {
        self.node(self.n - 1)
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.n).map(move |k| self.node(k))
    }

    /// Index of the node at `t`, if `t` lies on the grid to within `1e-9·delta`.
    pub fn node_index(&self, t: T) -> Option<usize> {
        let pos = (t - self.t_min) / self.delta;
        let k = pos.round();
        if k < T::zero() || (pos - k).abs() > T::lit(1e-9).max(T::epsilon() * T::lit(16.0) * pos.abs()) {
            return None;
        }
        let k = k.to_usize()?;
        (k < self.n).then_some(k)
    }
}

/// Complex samples of one scalar function on a uniform grid. The function is
/// taken to vanish outside `[t_min, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSignal<T> {
    grid: Grid<T>,
    samples: Vec<Complex<T>>,
}

impl<T: Real> GridSignal<T> {
    pub fn new(grid: Grid<T>, samples: Vec<Complex<T>>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.len()
            )));
        }
        if let Some(k) = samples.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(invalid("samples", format!("non-finite value at index {k}")));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: Grid<T>) -> Self {
        Self { grid, samples: vec![Complex::new(T::zero(), T::zero()); grid.len()] }
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        Self::new(grid, grid.nodes().map(f).collect())
    }

    pub fn from_real_fn(grid: Grid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        Self::from_fn(grid, |t| Complex::new(f(t), T::zero()))
    }

    #[inline]
    pub fn grid(&self) -> &Grid<T> {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[Complex<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex<T>> {
        self.samples
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Sample at signed index `k`, zero off the grid.
    #[inline]
    pub fn at(&self, k: isize) -> Complex<T> {
        if k < 0 {
            return Complex::new(T::zero(), T::zero());
        }
        self.samples.get(k as usize).copied().unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    pub fn map(&self, mut f: impl FnMut(T, Complex<T>) -> Complex<T>) -> Self {
        let samples = self.samples.iter().enumerate().map(|(k, &z)| f(self.grid.node(k), z)).collect();
        Self { grid: self.grid, samples }
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        self.map(|_, z| z * c)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect();
        Ok(Self { grid: self.grid, samples })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.ensure_same_grid(other)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(a, b)| a - b).collect();
        Ok(Self { grid: self.grid, samples })
    }

    pub fn max_abs(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.ensure_same_grid(other)?;
        Ok(self.samples.iter().zip(&other.samples).fold(T::zero(), |m, (a, b)| m.max((a - b).norm())))
    }

    /// Largest imaginary part in magnitude.
    pub fn max_imag(&self) -> T {
        self.samples.iter().fold(T::zero(), |m, z| m.max(z.im.abs()))
    }

    /// Sixth-order centred difference at node `k`, using the zero extension off the grid.
    pub fn derivative_at(&self, k: usize) -> Complex<T> {
        let k = k as isize;
        let d1 = self.at(k + 1) - self.at(k - 1);
        let d2 = self.at(k + 2) - self.at(k - 2);
        let d3 = self.at(k + 3) - self.at(k - 3);
        (d1 * T::lit(45.0) - d2 * T::lit(9.0) + d3) / (T::lit(60.0) * self.grid.delta)
    }

    /// Cubic Lagrange interpolation at an arbitrary `t`, zero-extended.
    pub fn interpolate(&self, t: T) -> Complex<T> {
        let pos = (t - self.grid.t_min) / self.grid.delta;
        let base = pos.floor();
        let s = pos - base;
        let Some(b) = base.to_isize() else {
            return Complex::new(T::zero(), T::zero());
        };
        let one = T::one();
        let two = one + one;
        let six = T::lit(6.0);
        // nodes b-1, b, b+1, b+2 at offsets -1, 0, 1, 2
        let w0 = -s * (s - one) * (s - two) / six;
        let w1 = (s + one) * (s - one) * (s - two) / two;
        let w2 = -(s + one) * s * (s - two) / two;
        let w3 = (s + one) * s * (s - one) / six;
        self.at(b - 1) * w0 + self.at(b) * w1 + self.at(b + 1) * w2 + self.at(b + 2) * w3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(0.0, 0.1, 1).is_err());
        assert!(Grid::new(0.0, 0.0, 4).is_err());
        assert!(Grid::new(0.0, -0.1, 4).is_err());
        assert!(Grid::from_bounds(1.0, 1.0, 4).is_err());
        assert!(Grid::new(0.0, f64::MAX, 4).is_err());
        let g = Grid::from_bounds(-20.0f64, 20.0, 4096).unwrap();
        assert!((g.t_max() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn node_lookup() {
        let g = Grid::from_bounds(-1.0, 1.0, 21).unwrap();
        assert_eq!(g.node_index(0.0), Some(10));
        assert_eq!(g.node_index(-1.0), Some(0));
        assert_eq!(g.node_index(1.0), Some(20));
        assert_eq!(g.node_index(0.05), None);
        assert_eq!(g.node_index(1.1), None);
        assert_eq!(g.node_index(-1.1), None);
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = Grid::new(0.0, 1.0, 3).unwrap();
        let bad = vec![Complex::new(0.0, 0.0), Complex::new(f64::NAN, 0.0), Complex::new(1.0, 0.0)];
        assert!(GridSignal::new(g, bad).is_err());
        assert!(GridSignal::new(g, vec![Complex::new(0.0, 0.0); 2]).is_err());
    }

    #[test]
    fn derivative_and_interpolation_of_smooth_function() {
        let g = Grid::from_bounds(-5.0, 5.0, 1001).unwrap();
        let x = GridSignal::from_real_fn(g, |t: f64| (-t * t).exp()).unwrap();
        let k = g.node_index(1.0).unwrap();
        let exact = -2.0 * (-1.0f64).exp();
        assert!((x.derivative_at(k).re - exact).abs() < 1e-10);
        let t = 0.123_456;
        assert!((x.interpolate(t).re - (-t * t).exp()).abs() < 1e-8);
        assert_eq!(x.interpolate(50.0).re, 0.0);
    }

    #[test]
    fn mismatched_grids_are_rejected() {
        let a = GridSignal::<f64>::zeros(Grid::new(0.0, 1.0, 4).unwrap());
        let b = GridSignal::<f64>::zeros(Grid::new(0.0, 0.5, 4).unwrap());
        assert!(matches!(a.add(&b), Err(Error::GridMismatch(_))));
    }
}
