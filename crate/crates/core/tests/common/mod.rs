#![allow(dead_code)]

use hybrid_teleport::optics::{BirefringentElement, SlmModel};
use hybrid_teleport::protocol::{InputQubit, SideConfig, SlmSetting, SpectrumConfig};
use hybrid_teleport::spectra::{GaussianComponent, GaussianMixtureSpec, JointSpectralAmplitude};
use hybrid_teleport::{Complex64, LAMBDA0};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_mixture(rng: &mut impl Rng) -> GaussianMixtureSpec {
    let n = rng.random_range(1..=3);
    let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    GaussianMixtureSpec::new(
        raw.iter()
            .map(|w| {
                GaussianComponent::from_wavelength(w / total, rng.random_range(778.5..781.5), rng.random_range(1.0..3.5))
            })
            .collect(),
    )
    .unwrap()
}

pub fn random_spectrum(rng: &mut impl Rng, points: usize) -> SpectrumConfig {
    SpectrumConfig {
        alice: random_mixture(rng),
        bob: random_mixture(rng),
        grid_points: points,
        span_sigmas: 4.0,
    }
}

/// Bivariate Gaussian joint amplitude with frequency correlation `corr`.
pub fn correlated_jsa(points: usize, corr: f64) -> JointSpectralAmplitude {
    let base = SpectrumConfig::filters_2nm_3nm();
    let ga = base.alice.default_grid(points, 4.0).unwrap();
    let gb = base.bob.default_grid(points, 4.0).unwrap();
    let (ca, sa) = (base.alice.components()[0].center, base.alice.components()[0].width);
    let (cb, sb) = (base.bob.components()[0].center, base.bob.components()[0].width);
    JointSpectralAmplitude::from_fn(ga, gb, |fa, fb| {
        let (x, y) = ((fa - ca) / sa, (fb - cb) / sb);
        let q = (x * x - 2.0 * corr * x * y + y * y) / (1.0 - corr * corr);
        Complex64::new((-0.25 * q).exp(), 0.0)
    })
    .unwrap()
}

pub fn random_qubit(rng: &mut impl Rng) -> InputQubit {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::PI);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let alpha = Complex64::new((theta / 2.0).cos(), 0.0);
    let beta = Complex64::from_polar((theta / 2.0).sin(), phi);
    InputQubit::new(alpha, beta).unwrap()
}

pub fn random_side(rng: &mut impl Rng) -> SideConfig {
    let slm = rng.random_bool(0.8).then(|| SlmSetting {
        slope_lambda0: rng.random_range(0.0..600.0),
        pixelation: rng.random_bool(0.3).then(SlmModel::experiment),
    });
    let noise = rng
        .random_bool(0.7)
        .then(|| BirefringentElement::constant(rng.random_range(0.0..600.0), LAMBDA0).unwrap());
    SideConfig::new(slm, noise)
}

pub fn max_abs_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
