//! Discretized frequency distributions.
//!
//! Frequencies are absolute (Hz). All amplitudes carry units of Hz^{-1/2} so
//! that `Σ_k w_k |g_k|² = 1` with the grid's quadrature weights `w_k`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erf;
use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::Photon;

/// Tolerance on every normalization invariant in this module.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Default number of grid points per photon.
pub const DEFAULT_GRID_POINTS: usize = 512;

/// Default half-span of a grid in units of the widest component's σ.
pub const DEFAULT_SPAN_SIGMAS: f64 = 4.0;

/// Ordered frequency samples with quadrature weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::domain("frequency grid must not be empty"));
        }
        if points.len() != weights.len() {
            return Err(Error::domain(format!(
                "grid has {} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if points.iter().any(|f| !f.is_finite() || *f <= 0.0) {
            return Err(Error::domain("grid frequencies must be finite and positive"));
        }
        if points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::domain("grid frequencies must be strictly increasing"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w <= 0.0) {
            return Err(Error::domain("quadrature weights must be finite and positive"));
        }
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.points[0]
    }

    pub fn max(&self) -> f64 {
        self.points[self.points.len() - 1]
    }

    /// Quadrature inner product `Σ_k w_k conj(x_k) y_k`.
    pub fn inner(&self, x: &[Complex64], y: &[Complex64]) -> Complex64 {
        self.weights
            .iter()
            .zip(x.iter().zip(y))
            .map(|(w, (a, b))| a.conj() * b * *w)
            .sum()
    }

    /// Quadrature integral of a real density sampled on the grid.
    pub fn integrate(&self, density: &[f64]) -> f64 {
        self.weights.iter().zip(density).map(|(w, d)| w * d).sum()
    }
}

/// Uniform grid of `n_points` over `[center − span/2, center + span/2]`, weights equal to the spacing.
pub fn make_uniform_grid(center: f64, span: f64, n_points: usize) -> Result<FrequencyGrid> {
    if n_points < 2 {
        return Err(Error::domain(format!("uniform grid needs at least 2 points, got {n_points}")));
    }
    if !(span > 0.0) || !span.is_finite() {
        return Err(Error::domain(format!("grid span must be positive, got {span}")));
    }
    let lo = center - span / 2.0;
    if !(lo > 0.0) {
        return Err(Error::domain(format!(
            "grid would contain non-positive frequencies (lower edge {lo})"
        )));
    }
    let spacing = span / (n_points - 1) as f64;
    let points = (0..n_points).map(|k| lo + k as f64 * spacing).collect();
    FrequencyGrid::new(points, vec![spacing; n_points])
}

/// Single-photon amplitude `g(f)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralAmplitude {
    grid: FrequencyGrid,
    values: Vec<Complex64>,
}

impl SpectralAmplitude {
    /// Wraps already-normalized values; fails if the norm is off by more than [`NORM_TOLERANCE`].
    pub fn new(grid: FrequencyGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain("amplitude length does not match grid"));
        }
        let amp = Self { grid, values };
        let norm = amp.norm_squared();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!("spectral amplitude not normalized: norm² = {norm}")));
        }
        Ok(amp)
    }

    /// Rescales arbitrary samples to unit norm on the grid.
    pub fn normalized(grid: FrequencyGrid, mut values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::domain("amplitude length does not match grid"));
        }
        let norm = grid.inner(&values, &values).re;
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("spectral amplitude has zero or non-finite norm on the grid"));
        }
        let scale = norm.sqrt().recip();
        values.iter_mut().for_each(|v| *v *= scale);
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn norm_squared(&self) -> f64 {
        self.grid.inner(&self.values, &self.values).re
    }

    /// Probability density `|g_k|²` per grid point.
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }
}

/// One Gaussian of a mixture: weight, center (Hz) and σ of the intensity spectrum (Hz).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianComponent {
    pub weight: f64,
    pub center: f64,
    pub width: f64,
}

impl GaussianComponent {
    /// Builds a component from a center wavelength and an intensity FWHM, both in nm.
    pub fn from_wavelength(weight: f64, center_nm: f64, fwhm_nm: f64) -> Self {
        let center = crate::wavelength_to_frequency(center_nm * 1e-9);
        let fwhm = crate::wavelength_window_to_bandwidth(center_nm * 1e-9, fwhm_nm * 1e-9);
        Self {
            weight,
            center,
            width: fwhm / (2.0 * (2.0 * 2f64.ln()).sqrt()),
        }
    }

    fn density(&self, f: f64) -> f64 {
        let z = (f - self.center) / self.width;
        self.weight * (-0.5 * z * z).exp() / (self.width * (2.0 * PI).sqrt())
    }

    fn cdf(&self, f: f64) -> f64 {
        0.5 * (1.0 + erf((f - self.center) / (self.width * SQRT_2)))
    }
}

/// Weighted sum of Gaussians describing an intensity spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMixtureSpec {
    components: Vec<GaussianComponent>,
}

impl GaussianMixtureSpec {
    pub fn new(components: Vec<GaussianComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::domain("gaussian mixture needs at least one component"));
        }
        for c in &components {
            if !(c.weight > 0.0) || !c.weight.is_finite() {
                return Err(Error::domain(format!("mixture weight must be positive, got {}", c.weight)));
            }
            if !(c.width > 0.0) || !c.width.is_finite() {
                return Err(Error::domain(format!("mixture width must be positive, got {}", c.width)));
            }
            if !(c.center > 0.0) || !c.center.is_finite() {
                return Err(Error::domain(format!("mixture center must be positive, got {}", c.center)));
            }
        }
        let total: f64 = components.iter().map(|c| c.weight).sum();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::domain(format!("mixture weights must sum to 1, got {total}")));
        }
        Ok(Self { components })
    }

    /// A single Gaussian of intensity FWHM `fwhm_nm` centered at `center_nm`.
    pub fn single_from_wavelength(center_nm: f64, fwhm_nm: f64) -> Result<Self> {
        Self::new(vec![GaussianComponent::from_wavelength(1.0, center_nm, fwhm_nm)])
    }

    pub fn components(&self) -> &[GaussianComponent] {
        &self.components
    }

    /// Mixture intensity density (Hz^{-1}) at `f`.
    pub fn density(&self, f: f64) -> f64 {
        self.components.iter().map(|c| c.density(f)).sum()
    }

    /// Exact probability mass of the mixture inside `[lo, hi]`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * (c.cdf(hi) - c.cdf(lo)))
            .sum()
    }

    /// Lowest `μ − kσ` and highest `μ + kσ` over all components.
    pub fn envelope(&self, sigmas: f64) -> (f64, f64) {
        let lo = self
            .components
            .iter()
            .map(|c| c.center - sigmas * c.width)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .components
            .iter()
            .map(|c| c.center + sigmas * c.width)
            .fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }

    /// Uniform grid covering `±span_sigmas` σ around every component.
    pub fn default_grid(&self, n_points: usize, span_sigmas: f64) -> Result<FrequencyGrid> {
        let (lo, hi) = self.envelope(span_sigmas);
        make_uniform_grid((lo + hi) / 2.0, hi - lo, n_points)
    }
}

/// Raised when a grid cuts off part of a mixture's ±3σ support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationWarning {
    /// Fraction of the mixture's probability mass lying inside the grid range.
    pub captured_mass: f64,
}

/// Samples `sqrt(density)` of a mixture on the grid and renormalizes it.
///
/// The returned warning is set when the grid does not cover ±3σ of every
/// component; normalization is enforced either way.
pub fn gaussian_mixture_amplitude(
    spec: &GaussianMixtureSpec,
    grid: &FrequencyGrid,
) -> Result<(SpectralAmplitude, Option<TruncationWarning>)> {
    if spec.components.is_empty() {
        return Err(Error::domain("gaussian mixture needs at least one component"));
    }
    let (lo3, hi3) = spec.envelope(3.0);
    let warning = if grid.min() > lo3 || grid.max() < hi3 {
        let captured_mass = spec.mass_between(grid.min(), grid.max());
        log::warn!(
            "frequency grid [{:.6e}, {:.6e}] Hz truncates the spectrum; captured mass {:.6}",
            grid.min(),
            grid.max(),
            captured_mass
        );
        Some(TruncationWarning { captured_mass })
    } else {
        None
    };
    let values = grid
        .points()
        .iter()
        .map(|&f| Complex64::new(spec.density(f).sqrt(), 0.0))
        .collect();
    let amp = SpectralAmplitude::normalized(grid.clone(), values)?;
    Ok((amp, warning))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum JsaValues {
    Product {
        a: Vec<Complex64>,
        b: Vec<Complex64>,
    },
    /// Row-major `n_a × n_b`.
    Dense(Vec<Complex64>),
}

/// Two-photon amplitude `g(f_a, f_b)`.
///
/// Product spectra keep their marginals; correlated spectra are stored dense,
/// costing `O(n_a · n_b)` memory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSpectralAmplitude {
    grid_a: FrequencyGrid,
    grid_b: FrequencyGrid,
    values: JsaValues,
}

impl JointSpectralAmplitude {
    /// Dense amplitude from row-major samples, rescaled to unit joint norm.
    pub fn dense(grid_a: FrequencyGrid, grid_b: FrequencyGrid, mut values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid_a.len() * grid_b.len() {
            return Err(Error::domain(format!(
                "dense JSA needs {}×{} values, got {}",
                grid_a.len(),
                grid_b.len(),
                values.len()
            )));
        }
        let norm = dense_norm(&grid_a, &grid_b, &values);
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::domain("joint spectral amplitude has zero or non-finite norm"));
        }
        let scale = norm.sqrt().recip();
        values.iter_mut().for_each(|v| *v *= scale);
        Ok(Self {
            grid_a,
            grid_b,
            values: JsaValues::Dense(values),
        })
    }

    /// Dense amplitude sampled from `g(f_a, f_b)`, rescaled to unit joint norm.
    pub fn from_fn(
        grid_a: FrequencyGrid,
        grid_b: FrequencyGrid,
        g: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let values = grid_a
            .points()
            .iter()
            .flat_map(|&fa| grid_b.points().iter().map(move |&fb| (fa, fb)))
            .map(|(fa, fb)| g(fa, fb))
            .collect();
        Self::dense(grid_a, grid_b, values)
    }

    pub fn grid_a(&self) -> &FrequencyGrid {
        &self.grid_a
    }

    pub fn grid_b(&self) -> &FrequencyGrid {
        &self.grid_b
    }

    pub fn grid(&self, photon: Photon) -> Result<&FrequencyGrid> {
        match photon {
            Photon::Alice => Ok(&self.grid_a),
            Photon::Bob => Ok(&self.grid_b),
            Photon::Teleportee => Err(Error::domain("the teleportee photon carries no spectral amplitude")),
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self.values, JsaValues::Product { .. })
    }

    /// Marginal amplitudes, present only for product spectra.
    pub fn factors(&self) -> Option<(&[Complex64], &[Complex64])> {
        match &self.values {
            JsaValues::Product { a, b } => Some((a, b)),
            JsaValues::Dense(_) => None,
        }
    }

    pub fn value(&self, k: usize, l: usize) -> Complex64 {
        match &self.values {
            JsaValues::Product { a, b } => a[k] * b[l],
            JsaValues::Dense(v) => v[k * self.grid_b.len() + l],
        }
    }

    /// Row-major samples, materialized for product spectra.
    pub fn to_dense(&self) -> Vec<Complex64> {
        match &self.values {
            JsaValues::Product { a, b } => a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect(),
            JsaValues::Dense(v) => v.clone(),
        }
    }

    /// The same amplitude stored dense.
    pub fn densified(&self) -> Self {
        Self {
            grid_a: self.grid_a.clone(),
            grid_b: self.grid_b.clone(),
            values: JsaValues::Dense(self.to_dense()),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        match &self.values {
            JsaValues::Product { a, b } => self.grid_a.inner(a, a).re * self.grid_b.inner(b, b).re,
            JsaValues::Dense(v) => dense_norm(&self.grid_a, &self.grid_b, v),
        }
    }

    /// Joint density `|g(f_a, f_b)|²`, row-major.
    pub fn joint_density(&self) -> Vec<f64> {
        self.to_dense().iter().map(|v| v.norm_sqr()).collect()
    }
}

fn dense_norm(grid_a: &FrequencyGrid, grid_b: &FrequencyGrid, values: &[Complex64]) -> f64 {
    let nb = grid_b.len();
    grid_a
        .weights()
        .iter()
        .enumerate()
        .map(|(k, wa)| wa * grid_b.integrate(&values[k * nb..(k + 1) * nb].iter().map(|v| v.norm_sqr()).collect::<Vec<_>>()))
        .sum()
}

/// Uncorrelated joint amplitude `g(f_a, f_b) = g_a(f_a) g_b(f_b)`.
pub fn product_jsa(a: &SpectralAmplitude, b: &SpectralAmplitude) -> Result<JointSpectralAmplitude> {
    for (label, amp) in [("Alice", a), ("Bob", b)] {
        let norm = amp.norm_squared();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!("{label}'s marginal amplitude not normalized: norm² = {norm}")));
        }
    }
    Ok(JointSpectralAmplitude {
        grid_a: a.grid.clone(),
        grid_b: b.grid.clone(),
        values: JsaValues::Product {
            a: a.values.clone(),
            b: b.values.clone(),
        },
    })
}

/// Marginal probability density of one photon, per grid point of that photon.
pub fn marginal(jsa: &JointSpectralAmplitude, which: Photon) -> Result<Vec<f64>> {
    let (na, nb) = (jsa.grid_a.len(), jsa.grid_b.len());
    match (&jsa.values, which) {
        (_, Photon::Teleportee) => Err(Error::domain("the teleportee photon has no marginal spectrum")),
        (JsaValues::Product { a, b }, Photon::Alice) => {
            let nb_norm = jsa.grid_b.inner(b, b).re;
            Ok(a.iter().map(|v| v.norm_sqr() * nb_norm).collect())
        }
        (JsaValues::Product { a, b }, Photon::Bob) => {
            let na_norm = jsa.grid_a.inner(a, a).re;
            Ok(b.iter().map(|v| v.norm_sqr() * na_norm).collect())
        }
        (JsaValues::Dense(v), Photon::Alice) => Ok((0..na)
            .map(|k| (0..nb).map(|l| jsa.grid_b.weights()[l] * v[k * nb + l].norm_sqr()).sum())
            .collect()),
        (JsaValues::Dense(v), Photon::Bob) => Ok((0..nb)
            .map(|l| (0..na).map(|k| jsa.grid_a.weights()[k] * v[k * nb + l].norm_sqr()).sum())
            .collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(center_nm: f64, fwhm_nm: f64, n: usize) -> SpectralAmplitude {
        let spec = GaussianMixtureSpec::single_from_wavelength(center_nm, fwhm_nm).unwrap();
        let grid = spec.default_grid(n, DEFAULT_SPAN_SIGMAS).unwrap();
        gaussian_mixture_amplitude(&spec, &grid).unwrap().0
    }

    #[test]
    fn uniform_grid_arithmetic() {
        let g = make_uniform_grid(100.0, 10.0, 11).unwrap();
        let expected: Vec<f64> = (95..=105).map(f64::from).collect();
        for (p, e) in g.points().iter().zip(&expected) {
            assert!((p - e).abs() < 1e-12);
        }
        assert!(g.weights().iter().all(|w| (w - 1.0).abs() < 1e-12));
    }

    #[test]
    fn degenerate_grids_rejected() {
        assert!(make_uniform_grid(1.0, 0.0, 11).is_err());
        assert!(make_uniform_grid(1.0, -2.0, 11).is_err());
        assert!(make_uniform_grid(1.0, 4.0, 11).is_err());
        assert!(make_uniform_grid(100.0, 10.0, 1).is_err());
        assert!(FrequencyGrid::new(vec![1.0, 1.0], vec![1.0, 1.0]).is_err());
        assert!(FrequencyGrid::new(vec![1.0, 2.0], vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn slm_like_grid() {
        let center = crate::wavelength_to_frequency(780e-9);
        let span = crate::wavelength_window_to_bandwidth(780e-9, 3.5e-9);
        let g = make_uniform_grid(center, span, 150).unwrap();
        assert_eq!(g.len(), 150);
        assert!((center - 3.8436e14).abs() / center < 1e-4);
        assert!(((g.max() - g.min()) - span).abs() / span < 1e-12);
    }

    #[test]
    fn single_gaussian_normalized() {
        let amp = gaussian(780.0, 2.0, 512);
        assert!((amp.norm_squared() - 1.0).abs() < 1e-9);
        assert!(amp.values().iter().all(|v| v.re >= 0.0 && v.im == 0.0));
    }

    #[test]
    fn three_component_mixture_has_three_peaks() {
        let spec = GaussianMixtureSpec::new(vec![
            GaussianComponent::from_wavelength(0.3, 778.0, 0.8),
            GaussianComponent::from_wavelength(0.4, 780.0, 0.8),
            GaussianComponent::from_wavelength(0.3, 782.0, 0.8),
        ])
        .unwrap();
        let grid = spec.default_grid(1024, 4.0).unwrap();
        let (amp, warning) = gaussian_mixture_amplitude(&spec, &grid).unwrap();
        assert!(warning.is_none());
        assert!((amp.norm_squared() - 1.0).abs() < 1e-9);
        let d = amp.density();
        let maxima = (1..d.len() - 1).filter(|&k| d[k] > d[k - 1] && d[k] > d[k + 1]).count();
        assert_eq!(maxima, 3);
    }

    #[test]
    fn narrow_grid_warns_but_normalizes() {
        let spec = GaussianMixtureSpec::single_from_wavelength(780.0, 2.0).unwrap();
        let sigma = spec.components()[0].width;
        let grid = make_uniform_grid(spec.components()[0].center, 0.5 * sigma, 64).unwrap();
        let (amp, warning) = gaussian_mixture_amplitude(&spec, &grid).unwrap();
        let w = warning.expect("truncation must be flagged");
        assert!(w.captured_mass < 0.25);
        assert!((amp.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn mixture_validation() {
        assert!(GaussianMixtureSpec::new(vec![]).is_err());
        let bad = GaussianComponent { weight: 1.0, center: 3e14, width: 0.0 };
        assert!(GaussianMixtureSpec::new(vec![bad]).is_err());
        let unbalanced = GaussianComponent { weight: 0.5, center: 3e14, width: 1e11 };
        assert!(GaussianMixtureSpec::new(vec![unbalanced]).is_err());
    }

    #[test]
    fn product_norm_and_symmetry() {
        let a = gaussian(780.0, 2.0, 128);
        let jsa = product_jsa(&a, &a).unwrap();
        assert!(jsa.is_product());
        assert!((jsa.norm_squared() - 1.0).abs() < 1e-9);
        for k in (0..128).step_by(7) {
            for l in (0..128).step_by(5) {
                assert_eq!(jsa.value(k, l), jsa.value(l, k));
            }
        }
        let dense = jsa.densified();
        assert!((dense.norm_squared() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn delta_like_marginals() {
        let grid = make_uniform_grid(100.0, 10.0, 11).unwrap();
        let mut va = vec![Complex64::new(0.0, 0.0); 11];
        va[3] = Complex64::new(1.0, 0.0);
        let mut vb = vec![Complex64::new(0.0, 0.0); 11];
        vb[8] = Complex64::new(0.0, 1.0);
        let a = SpectralAmplitude::normalized(grid.clone(), va).unwrap();
        let b = SpectralAmplitude::normalized(grid, vb).unwrap();
        let jsa = product_jsa(&a, &b).unwrap();
        let dense = jsa.to_dense();
        let nonzero: Vec<usize> = (0..dense.len()).filter(|&i| dense[i].norm() > 0.0).collect();
        assert_eq!(nonzero, vec![3 * 11 + 8]);
        // weight-compensated: w_a w_b |g|² = 1 with unit weights
        assert!((dense[3 * 11 + 8].norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn product_marginal_matches_inputs() {
        let a = gaussian(780.0, 2.0, 200);
        let b = gaussian(780.5, 3.0, 150);
        let jsa = product_jsa(&a, &b).unwrap();
        for (photon, amp) in [(Photon::Alice, &a), (Photon::Bob, &b)] {
            let m = marginal(&jsa, photon).unwrap();
            for (x, y) in m.iter().zip(amp.density()) {
                assert!((x - y).abs() <= 1e-10 * y.max(1e-300) + 1e-300);
            }
            assert!((amp.grid().integrate(&m) - 1.0).abs() < 1e-9);
        }
        assert!(marginal(&jsa, Photon::Teleportee).is_err());
    }

    #[test]
    fn correlated_ridge_marginal() {
        // g ∝ exp(-(fa - f0)²/4s²) · exp(-(fa + fb - 2 f0)²/4r²) with a narrow ridge r
        let grid = make_uniform_grid(1000.0, 40.0, 81).unwrap();
        let (f0, s, r) = (1000.0, 4.0, 0.3);
        let g = |fa: f64, fb: f64| {
            let x = fa - f0;
            let y = fa + fb - 2.0 * f0;
            Complex64::new((-x * x / (4.0 * s * s) - y * y / (4.0 * r * r)).exp(), 0.0)
        };
        let jsa = JointSpectralAmplitude::from_fn(grid.clone(), grid.clone(), g).unwrap();
        assert!(!jsa.is_product());
        let m = marginal(&jsa, Photon::Alice).unwrap();
        // direct summation oracle
        let raw: Vec<f64> = grid
            .points()
            .iter()
            .map(|&fa| grid.points().iter().zip(grid.weights()).map(|(&fb, w)| w * g(fa, fb).norm_sqr()).sum())
            .collect();
        let z = grid.integrate(&raw);
        for (x, y) in m.iter().zip(&raw) {
            assert!((x - y / z).abs() < 1e-12);
        }
        assert!((grid.integrate(&m) - 1.0).abs() < 1e-9);
        let mb = marginal(&jsa, Photon::Bob).unwrap();
        assert!((grid.integrate(&mb) - 1.0).abs() < 1e-9);
    }
}
