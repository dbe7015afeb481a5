//! Programmable spectral phases and birefringent dephasing elements.
//!
//! Sign convention: an SLM linear phase has negative slope in frequency, a
//! birefringent element positive slope, so equal effective path differences
//! cancel exactly.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectra::FrequencyGrid;
use crate::SPEED_OF_LIGHT;

/// How a profile's phase can be evaluated off-grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum PhaseShape {
    /// `theta_H(f) = slope · f`, `theta_V = 0`.
    Linear { slope: f64 },
    /// Piecewise constant over pixels; zero outside the window.
    Pixelated {
        window_lo: f64,
        pixel_width: f64,
        values_h: Vec<f64>,
        values_v: Vec<f64>,
    },
    /// Known on grid points only; linear interpolation in between.
    Sampled,
}

/// Per-polarization spectral phases `theta_H(f)`, `theta_V(f)` on a grid.
///
/// Only `theta_H − theta_V` is observable in this protocol; both components are
/// kept so common (non-birefringent) phases can be represented.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    grid: FrequencyGrid,
    theta_h: Vec<f64>,
    theta_v: Vec<f64>,
    shape: PhaseShape,
}

impl PhaseProfile {
    pub fn zero(grid: &FrequencyGrid) -> Self {
        Self {
            grid: grid.clone(),
            theta_h: vec![0.0; grid.len()],
            theta_v: vec![0.0; grid.len()],
            shape: PhaseShape::Linear { slope: 0.0 },
        }
    }

    /// Arbitrary sampled phases.
    pub fn sampled(grid: &FrequencyGrid, theta_h: Vec<f64>, theta_v: Vec<f64>) -> Result<Self> {
        if theta_h.len() != grid.len() || theta_v.len() != grid.len() {
            return Err(Error::domain("phase profile length does not match grid"));
        }
        if theta_h.iter().chain(&theta_v).any(|t| !t.is_finite()) {
            return Err(Error::domain("phase profile contains non-finite values"));
        }
        Ok(Self {
            grid: grid.clone(),
            theta_h,
            theta_v,
            shape: PhaseShape::Sampled,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn theta_h(&self) -> &[f64] {
        &self.theta_h
    }

    pub fn theta_v(&self) -> &[f64] {
        &self.theta_v
    }

    pub fn theta(&self, horizontal: bool) -> &[f64] {
        if horizontal {
            &self.theta_h
        } else {
            &self.theta_v
        }
    }

    /// `theta_H(f) − theta_V(f)` per grid point.
    pub fn difference(&self) -> Vec<f64> {
        self.theta_h.iter().zip(&self.theta_v).map(|(h, v)| h - v).collect()
    }

    /// Phases `(theta_H, theta_V)` at an arbitrary frequency.
    pub fn eval(&self, f: f64) -> (f64, f64) {
        match &self.shape {
            PhaseShape::Linear { slope } => (slope * f, 0.0),
            PhaseShape::Pixelated {
                window_lo,
                pixel_width,
                values_h,
                values_v,
            } => match pixel_index(f, *window_lo, *pixel_width, values_h.len()) {
                Some(k) => (values_h[k], values_v[k]),
                None => (0.0, 0.0),
            },
            PhaseShape::Sampled => (interpolate(&self.grid, &self.theta_h, f), interpolate(&self.grid, &self.theta_v, f)),
        }
    }

    /// Pointwise sum of two profiles on the same grid.
    pub fn combined(&self, other: &PhaseProfile) -> Result<PhaseProfile> {
        if self.grid != other.grid {
            return Err(Error::domain("cannot combine phase profiles on different grids"));
        }
        let shape = match (&self.shape, &other.shape) {
            (PhaseShape::Linear { slope: a }, PhaseShape::Linear { slope: b }) => PhaseShape::Linear { slope: a + b },
            _ => PhaseShape::Sampled,
        };
        Ok(Self {
            grid: self.grid.clone(),
            theta_h: self.theta_h.iter().zip(&other.theta_h).map(|(a, b)| a + b).collect(),
            theta_v: self.theta_v.iter().zip(&other.theta_v).map(|(a, b)| a + b).collect(),
            shape,
        })
    }

    /// Adds `common` to both polarizations and `offset` to `theta_H` only.
    pub fn shifted(&self, common: &[f64], offset: f64) -> Result<PhaseProfile> {
        if common.len() != self.grid.len() {
            return Err(Error::domain("common phase length does not match grid"));
        }
        Ok(Self {
            grid: self.grid.clone(),
            theta_h: self.theta_h.iter().zip(common).map(|(t, c)| t + c + offset).collect(),
            theta_v: self.theta_v.iter().zip(common).map(|(t, c)| t + c).collect(),
            shape: PhaseShape::Sampled,
        })
    }
}

fn pixel_index(f: f64, window_lo: f64, pixel_width: f64, n_pixels: usize) -> Option<usize> {
    let window_hi = window_lo + pixel_width * n_pixels as f64;
    if f < window_lo || f > window_hi {
        return None;
    }
    Some((((f - window_lo) / pixel_width).floor() as usize).min(n_pixels - 1))
}

fn interpolate(grid: &FrequencyGrid, values: &[f64], f: f64) -> f64 {
    let pts = grid.points();
    if pts.len() == 1 {
        return values[0];
    }
    let hi = pts.partition_point(|&p| p < f).clamp(1, pts.len() - 1);
    let lo = hi - 1;
    let t = (f - pts[lo]) / (pts[hi] - pts[lo]);
    values[lo] + t * (values[hi] - values[lo])
}

/// SLM phase `theta_H(f) = −2π f/c · x λ₀`, `theta_V = 0`.
pub fn linear_phase(slope_lambda0: f64, lambda0: f64, grid: &FrequencyGrid) -> PhaseProfile {
    let slope = -(2.0 * PI * (slope_lambda0 * lambda0) / SPEED_OF_LIGHT);
    PhaseProfile {
        grid: grid.clone(),
        theta_h: grid.points().iter().map(|f| slope * f).collect(),
        theta_v: vec![0.0; grid.len()],
        shape: PhaseShape::Linear { slope },
    }
}

/// Phase resolution of the modulator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PhaseLevels {
    Continuous,
    /// Phases are rounded to multiples of `2π / levels`.
    Quantized(u32),
}

/// A pixelated spatial light modulator mapped onto a frequency window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlmModel {
    pub n_pixels: usize,
    /// Width of the frequency window mapped onto the pixels (Hz).
    pub covered_bandwidth: f64,
    /// Center of that window (Hz).
    pub center_frequency: f64,
    pub phase_levels: PhaseLevels,
}

impl SlmModel {
    pub fn new(n_pixels: usize, covered_bandwidth: f64, center_frequency: f64, phase_levels: PhaseLevels) -> Result<Self> {
        if n_pixels == 0 {
            return Err(Error::domain("SLM needs at least one pixel"));
        }
        if !(covered_bandwidth > 0.0) || !covered_bandwidth.is_finite() {
            return Err(Error::domain("SLM covered bandwidth must be positive"));
        }
        if let PhaseLevels::Quantized(0) = phase_levels {
            return Err(Error::domain("quantized SLM needs at least one phase level"));
        }
        Ok(Self {
            n_pixels,
            covered_bandwidth,
            center_frequency,
            phase_levels,
        })
    }

    /// `n_pixels` spread over a wavelength window of `window_nm` around `center_nm`.
    pub fn from_wavelength_window(n_pixels: usize, window_nm: f64, center_nm: f64) -> Result<Self> {
        Self::new(
            n_pixels,
            crate::wavelength_window_to_bandwidth(center_nm * 1e-9, window_nm * 1e-9),
            crate::wavelength_to_frequency(center_nm * 1e-9),
            PhaseLevels::Continuous,
        )
    }

    /// 150 pixels over 3.5 nm around 780 nm.
    pub fn experiment() -> Self {
        Self::from_wavelength_window(150, 3.5, 780.0).expect("valid preset")
    }

    pub fn window(&self) -> (f64, f64) {
        (
            self.center_frequency - self.covered_bandwidth / 2.0,
            self.center_frequency + self.covered_bandwidth / 2.0,
        )
    }

    pub fn pixel_width(&self) -> f64 {
        self.covered_bandwidth / self.n_pixels as f64
    }

    fn quantize(&self, phase: f64) -> f64 {
        match self.phase_levels {
            PhaseLevels::Continuous => phase,
            PhaseLevels::Quantized(levels) => {
                let step = 2.0 * PI / levels as f64;
                (phase / step).round() * step
            }
        }
    }
}

/// Resamples a profile onto SLM pixels.
///
/// Inside the window each pixel takes the profile's phase at the pixel center;
/// outside it the light is left unmodulated (zero phase).
pub fn pixelate(profile: &PhaseProfile, slm: &SlmModel) -> Result<PhaseProfile> {
    let (lo, hi) = slm.window();
    let grid = &profile.grid;
    if hi < grid.min() || lo > grid.max() {
        return Err(Error::domain(format!(
            "SLM window [{lo:.6e}, {hi:.6e}] Hz does not overlap the grid [{:.6e}, {:.6e}] Hz",
            grid.min(),
            grid.max()
        )));
    }
    let width = slm.pixel_width();
    let (values_h, values_v): (Vec<f64>, Vec<f64>) = (0..slm.n_pixels)
        .map(|k| {
            let (h, v) = profile.eval(lo + (k as f64 + 0.5) * width);
            (slm.quantize(h), slm.quantize(v))
        })
        .unzip();
    let sample = |values: &[f64]| -> Vec<f64> {
        grid.points()
            .iter()
            .map(|&f| pixel_index(f, lo, width, slm.n_pixels).map_or(0.0, |k| values[k]))
            .collect()
    };
    Ok(PhaseProfile {
        grid: grid.clone(),
        theta_h: sample(&values_h),
        theta_v: sample(&values_v),
        shape: PhaseShape::Pixelated {
            window_lo: lo,
            pixel_width: width,
            values_h,
            values_v,
        },
    })
}

/// Refractive indices `n_H`, `n_V` as polynomials in the normalized detuning
/// `ν = (f − f_ref) / f_ref`; coefficient `i` multiplies `ν^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexModel {
    pub reference_frequency: f64,
    pub n_h: Vec<f64>,
    pub n_v: Vec<f64>,
}

impl IndexModel {
    fn poly(coeffs: &[f64], nu: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * nu + c)
    }

    pub fn n_h(&self, f: f64) -> f64 {
        Self::poly(&self.n_h, (f - self.reference_frequency) / self.reference_frequency)
    }

    pub fn n_v(&self, f: f64) -> f64 {
        Self::poly(&self.n_v, (f - self.reference_frequency) / self.reference_frequency)
    }

    pub fn birefringence(&self, f: f64) -> f64 {
        self.n_h(f) - self.n_v(f)
    }
}

/// A birefringent dephasing element.
///
/// The thickness is the effective path difference `c·Δn·T = x·λ₀` at the
/// center wavelength, expressed as `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirefringentElement {
    pub effective_path_lambda0: f64,
    pub lambda0: f64,
    /// `None` means constant birefringence.
    pub index_model: Option<IndexModel>,
}

impl BirefringentElement {
    pub fn constant(effective_path_lambda0: f64, lambda0: f64) -> Result<Self> {
        Self::new(effective_path_lambda0, lambda0, None)
    }

    pub fn new(effective_path_lambda0: f64, lambda0: f64, index_model: Option<IndexModel>) -> Result<Self> {
        if !(effective_path_lambda0 >= 0.0) || !effective_path_lambda0.is_finite() {
            return Err(Error::domain(format!(
                "effective path difference must be non-negative, got {effective_path_lambda0}"
            )));
        }
        if !(lambda0 > 0.0) {
            return Err(Error::domain("lambda0 must be positive"));
        }
        if let Some(model) = &index_model {
            if model.n_h.is_empty() || model.n_v.is_empty() || !(model.reference_frequency > 0.0) {
                return Err(Error::domain("index model needs coefficients and a positive reference frequency"));
            }
        }
        Ok(Self {
            effective_path_lambda0,
            lambda0,
            index_model,
        })
    }

    /// The same material with thickness scaled by `fraction` (partial interaction time).
    pub fn scaled(&self, fraction: f64) -> Result<Self> {
        Self::new(self.effective_path_lambda0 * fraction, self.lambda0, self.index_model.clone())
    }

    /// The same material at a different thickness.
    pub fn with_path(&self, effective_path_lambda0: f64) -> Result<Self> {
        Self::new(effective_path_lambda0, self.lambda0, self.index_model.clone())
    }

    pub fn center_frequency(&self) -> f64 {
        SPEED_OF_LIGHT / self.lambda0
    }

    pub fn is_dispersive(&self) -> bool {
        self.index_model.is_some()
    }
}

/// Phases imprinted by a birefringent element.
///
/// Constant birefringence gives `theta_H − theta_V = 2π f/c · x λ₀`. With an
/// index model each polarization picks up `2π f n_λ(f) T`, with `T` fixed so
/// the path difference at the center frequency is `x λ₀`.
pub fn element_phase(elem: &BirefringentElement, grid: &FrequencyGrid) -> Result<PhaseProfile> {
    let path = elem.effective_path_lambda0 * elem.lambda0;
    match &elem.index_model {
        None => {
            let slope = 2.0 * PI * path / SPEED_OF_LIGHT;
            Ok(PhaseProfile {
                grid: grid.clone(),
                theta_h: grid.points().iter().map(|f| slope * f).collect(),
                theta_v: vec![0.0; grid.len()],
                shape: PhaseShape::Linear { slope },
            })
        }
        Some(model) => {
            for &f in grid.points() {
                let (nh, nv) = (model.n_h(f), model.n_v(f));
                if !nh.is_finite() || !nv.is_finite() || nh <= 0.0 || nv <= 0.0 {
                    return Err(Error::domain(format!(
                        "index model gives n_H = {nh}, n_V = {nv} at {f:.6e} Hz"
                    )));
                }
            }
            let dn0 = model.birefringence(elem.center_frequency());
            let time = if path == 0.0 {
                0.0
            } else if dn0.abs() < 1e-15 || !dn0.is_finite() {
                return Err(Error::domain("index model has no birefringence at the center frequency"));
            } else {
                path / (SPEED_OF_LIGHT * dn0)
            };
            let phase = |n: &dyn Fn(f64) -> f64| -> Vec<f64> {
                grid.points().iter().map(|&f| 2.0 * PI * f * n(f) * time).collect()
            };
            PhaseProfile::sampled(grid, phase(&|f| model.n_h(f)), phase(&|f| model.n_v(f)))
        }
    }
}

/// Named noise elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementPreset {
    /// Alice's YVO₄ plate, 400 λ₀.
    Yvo4_400,
    /// Bob's quartz plates, 411 λ₀.
    Quartz411,
    /// 2 m polarization-maintaining fiber, 1080 λ₀.
    PmFiber1080,
}

impl ElementPreset {
    pub const ALL: [ElementPreset; 3] = [ElementPreset::Yvo4_400, ElementPreset::Quartz411, ElementPreset::PmFiber1080];

    pub fn name(self) -> &'static str {
        match self {
            ElementPreset::Yvo4_400 => "yvo4_400",
            ElementPreset::Quartz411 => "quartz_411",
            ElementPreset::PmFiber1080 => "pm_fiber_1080",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn path_lambda0(self) -> f64 {
        match self {
            ElementPreset::Yvo4_400 => 400.0,
            ElementPreset::Quartz411 => 411.0,
            ElementPreset::PmFiber1080 => 1080.0,
        }
    }

    pub fn constant(self, lambda0: f64) -> BirefringentElement {
        BirefringentElement::constant(self.path_lambda0(), lambda0).expect("valid preset")
    }

    /// Illustrative quadratic dispersion whose group birefringence exceeds the
    /// phase birefringence, so the best-cancelling SLM slope lies above the
    /// nominal thickness (≈446 λ₀ for YVO₄, ≈429 λ₀ for quartz).
    ///
    /// These are not fitted material data.
    pub fn demo_dispersion(self, lambda0: f64) -> Option<IndexModel> {
        let (n_o, dn0, best_slope) = match self {
            ElementPreset::Yvo4_400 => (1.99, 0.22, 446.0),
            ElementPreset::Quartz411 => (1.54, 0.009, 429.0),
            ElementPreset::PmFiber1080 => return None,
        };
        // Δn(ν) = Δn0 (1 + k1 ν + k2 ν²); the group path is x (1 + k1) at ν = 0.
        let k1 = best_slope / self.path_lambda0() - 1.0;
        let k2 = 0.5;
        let n_v = vec![n_o, 0.05];
        let n_h = vec![n_o + dn0, 0.05 + dn0 * k1, dn0 * k2];
        Some(IndexModel {
            reference_frequency: SPEED_OF_LIGHT / lambda0,
            n_h,
            n_v,
        })
    }

    pub fn dispersive(self, lambda0: f64) -> Option<BirefringentElement> {
        self.demo_dispersion(lambda0)
            .map(|m| BirefringentElement::new(self.path_lambda0(), lambda0, Some(m)).expect("valid preset"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{make_uniform_grid, GaussianMixtureSpec};
    use crate::LAMBDA0;

    fn grid() -> FrequencyGrid {
        GaussianMixtureSpec::single_from_wavelength(780.0, 2.0)
            .unwrap()
            .default_grid(512, 4.0)
            .unwrap()
    }

    #[test]
    fn linear_phase_sign_and_slope() {
        let g = grid();
        let p = linear_phase(446.0, LAMBDA0, &g);
        for (f, d) in g.points().iter().zip(p.difference()) {
            let expected = -2.0 * PI * f / SPEED_OF_LIGHT * 446.0 * LAMBDA0;
            assert!(d < 0.0);
            assert!((d - expected).abs() <= 1e-12 * expected.abs());
        }
        assert!(p.theta_v().iter().all(|v| *v == 0.0));
        assert!(linear_phase(0.0, LAMBDA0, &g).difference().iter().all(|d| *d == 0.0));
    }

    #[test]
    fn element_cancels_matching_slm() {
        let g = grid();
        let slm = linear_phase(400.0, LAMBDA0, &g);
        let crystal = element_phase(&ElementPreset::Yvo4_400.constant(LAMBDA0), &g).unwrap();
        let total = slm.combined(&crystal).unwrap();
        assert!(total.difference().iter().all(|d| d.abs() < 1e-12));
        let zero = element_phase(&BirefringentElement::constant(0.0, LAMBDA0).unwrap(), &g).unwrap();
        assert!(zero.difference().iter().all(|d| *d == 0.0));
    }

    #[test]
    fn pixelation_converges_to_continuous() {
        let g = grid();
        let p = linear_phase(446.0, LAMBDA0, &g);
        let slm = SlmModel::new(10_000, 1.7e12, SPEED_OF_LIGHT / LAMBDA0, PhaseLevels::Continuous).unwrap();
        let px = pixelate(&p, &slm).unwrap();
        let (lo, hi) = slm.window();
        for (k, &f) in g.points().iter().enumerate() {
            if f >= lo && f <= hi {
                assert!((px.difference()[k] - p.difference()[k]).abs() < 1e-3);
            } else {
                assert_eq!(px.difference()[k], 0.0);
            }
        }
    }

    #[test]
    fn single_pixel_is_constant_on_window() {
        let g = grid();
        let p = linear_phase(446.0, LAMBDA0, &g);
        let slm = SlmModel::new(1, 1e12, SPEED_OF_LIGHT / LAMBDA0, PhaseLevels::Continuous).unwrap();
        let px = pixelate(&p, &slm).unwrap();
        let (lo, hi) = slm.window();
        let inside: Vec<f64> = g
            .points()
            .iter()
            .zip(px.difference())
            .filter(|(f, _)| **f >= lo && **f <= hi)
            .map(|(_, d)| d)
            .collect();
        assert!(inside.len() > 10);
        assert!(inside.iter().all(|d| *d == inside[0]));
        assert!((inside[0] - p.eval(SPEED_OF_LIGHT / LAMBDA0).0).abs() < 1e-9);
    }

    #[test]
    fn pixelation_idempotent_and_quantized() {
        let g = grid();
        let p = linear_phase(429.0, LAMBDA0, &g);
        for slm in [
            SlmModel::experiment(),
            SlmModel::new(37, 2e12, SPEED_OF_LIGHT / LAMBDA0, PhaseLevels::Quantized(256)).unwrap(),
        ] {
            let once = pixelate(&p, &slm).unwrap();
            let twice = pixelate(&once, &slm).unwrap();
            assert_eq!(once.theta_h(), twice.theta_h());
            assert_eq!(once.theta_v(), twice.theta_v());
        }
    }

    #[test]
    fn disjoint_window_rejected() {
        let g = make_uniform_grid(100.0, 10.0, 11).unwrap();
        let p = linear_phase(1.0, LAMBDA0, &g);
        let slm = SlmModel::new(10, 5.0, 1000.0, PhaseLevels::Continuous).unwrap();
        assert!(pixelate(&p, &slm).is_err());
    }

    #[test]
    fn dispersive_element_path_at_center() {
        let g = grid();
        let elem = ElementPreset::Yvo4_400.dispersive(LAMBDA0).unwrap();
        let model = elem.index_model.as_ref().unwrap();
        let f0 = SPEED_OF_LIGHT / LAMBDA0;
        let profile = element_phase(&elem, &g).unwrap();
        // phase difference at f0 is 2π · 400 by construction
        let (h, v) = profile.eval(f0);
        assert!(((h - v) / (2.0 * PI) - 400.0).abs() < 1e-6);
        assert!(model.birefringence(f0) > 0.0);
    }

    #[test]
    fn bad_index_model_rejected() {
        let g = grid();
        let model = IndexModel {
            reference_frequency: SPEED_OF_LIGHT / LAMBDA0,
            n_h: vec![-1.0],
            n_v: vec![1.5],
        };
        let elem = BirefringentElement::new(400.0, LAMBDA0, Some(model)).unwrap();
        assert!(element_phase(&elem, &g).is_err());
        assert!(BirefringentElement::constant(-1.0, LAMBDA0).is_err());
    }

    #[test]
    fn preset_names_resolve() {
        for p in ElementPreset::ALL {
            assert_eq!(ElementPreset::from_name(p.name()), Some(p));
        }
        assert_eq!(ElementPreset::PmFiber1080.path_lambda0(), 1080.0);
        assert!(ElementPreset::from_name("calcite").is_none());
    }
}
