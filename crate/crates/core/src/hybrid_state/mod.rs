//! Pure polarization–frequency states stored branch by branch.
//!
//! A state is a sum over polarization labels (one letter H/V per photon, in
//! photon order) of `coefficient · envelope(f_a, f_b)`. Both auxiliary
//! frequency environments are always present; the teleportee contributes a
//! polarization slot only.

mod density;
mod envelope;

pub use density::{DensityMatrix, EIGEN_CLAMP, HERMITIAN_TOLERANCE, PSD_TOLERANCE, TRACE_TOLERANCE};
pub use envelope::Envelope;
pub(crate) use density::{hermitian_eigen, hermitian_sqrt};

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::optics::{element_phase, BirefringentElement, PhaseProfile};
use crate::spectra::{FrequencyGrid, JointSpectralAmplitude};
use crate::Photon;

/// Tolerance on the total-state normalization.
pub const STATE_NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    fn from_bit(bit: u8) -> Self {
        if bit & 1 == 0 {
            Polarization::H
        } else {
            Polarization::V
        }
    }
}

/// One polarization branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub coefficient: Complex64,
    pub envelope: Envelope,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    photons: Vec<Photon>,
    grid_a: FrequencyGrid,
    grid_b: FrequencyGrid,
    /// Keyed by label bits; slot 0 is the most significant bit.
    branches: BTreeMap<u8, Branch>,
}

impl HybridState {
    /// Builds a normalized state from `(label, branch)` pairs such as `("HV", …)`.
    pub fn new(
        photons: Vec<Photon>,
        grid_a: FrequencyGrid,
        grid_b: FrequencyGrid,
        branches: Vec<(&str, Branch)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (label, branch) in branches {
            let bits = parse_label(label, photons.len())?;
            if map.insert(bits, branch).is_some() {
                return Err(Error::domain(format!("duplicate polarization branch {label}")));
            }
        }
        let state = Self::from_parts(photons, grid_a, grid_b, map)?;
        let norm = state.norm_squared();
        if (norm - 1.0).abs() > STATE_NORM_TOLERANCE {
            return Err(Error::domain(format!("hybrid state not normalized: norm² = {norm}")));
        }
        Ok(state)
    }

    /// Structural checks only; norm is not enforced.
    pub(crate) fn from_parts(
        photons: Vec<Photon>,
        grid_a: FrequencyGrid,
        grid_b: FrequencyGrid,
        branches: BTreeMap<u8, Branch>,
    ) -> Result<Self> {
        if photons.is_empty() || photons.len() > 3 {
            return Err(Error::domain(format!("hybrid state needs 1 to 3 photons, got {}", photons.len())));
        }
        for (i, p) in photons.iter().enumerate() {
            if photons[..i].contains(p) {
                return Err(Error::domain(format!("photon {p:?} listed twice")));
            }
        }
        let (na, nb) = (grid_a.len(), grid_b.len());
        for branch in branches.values() {
            let ok = match &branch.envelope {
                Envelope::Product { a, b } => a.len() == na && b.len() == nb,
                Envelope::Dense(v) => v.len() == na * nb,
            };
            if !ok {
                return Err(Error::domain("branch envelope does not match the frequency grids"));
            }
        }
        Ok(Self {
            photons,
            grid_a,
            grid_b,
            branches,
        })
    }

    pub fn photons(&self) -> &[Photon] {
        &self.photons
    }

    pub fn n_photons(&self) -> usize {
        self.photons.len()
    }

    pub fn grid_a(&self) -> &FrequencyGrid {
        &self.grid_a
    }

    pub fn grid_b(&self) -> &FrequencyGrid {
        &self.grid_b
    }

    pub(crate) fn raw_branches(&self) -> &BTreeMap<u8, Branch> {
        &self.branches
    }

    /// Branches with their labels, e.g. `"HV"`.
    pub fn branches(&self) -> impl Iterator<Item = (String, &Branch)> {
        self.branches.iter().map(|(bits, b)| (self.label_string(*bits), b))
    }

    pub fn branch(&self, label: &str) -> Option<&Branch> {
        parse_label(label, self.n_photons()).ok().and_then(|bits| self.branches.get(&bits))
    }

    pub fn slot(&self, photon: Photon) -> Option<usize> {
        self.photons.iter().position(|p| *p == photon)
    }

    pub(crate) fn polarization_at(&self, bits: u8, slot: usize) -> Polarization {
        Polarization::from_bit(bits >> (self.n_photons() - 1 - slot))
    }

    pub(crate) fn label_string(&self, bits: u8) -> String {
        (0..self.n_photons())
            .map(|s| match self.polarization_at(bits, s) {
                Polarization::H => 'H',
                Polarization::V => 'V',
            })
            .collect()
    }

    /// `Σ |c|² ‖ψ‖²`; branches with distinct labels are orthogonal.
    pub fn norm_squared(&self) -> f64 {
        self.branches
            .values()
            .map(|b| b.coefficient.norm_sqr() * b.envelope.norm_squared(&self.grid_a, &self.grid_b))
            .sum()
    }

    /// `⟨self|other⟩` for states over the same photons and grids.
    pub fn inner(&self, other: &HybridState) -> Result<Complex64> {
        if self.photons != other.photons || self.grid_a != other.grid_a || self.grid_b != other.grid_b {
            return Err(Error::domain("states live on different spaces"));
        }
        Ok(self
            .branches
            .iter()
            .filter_map(|(bits, b1)| other.branches.get(bits).map(|b2| (b1, b2)))
            .map(|(b1, b2)| b1.coefficient.conj() * b2.coefficient * b1.envelope.inner(&b2.envelope, &self.grid_a, &self.grid_b))
            .sum())
    }

    pub(crate) fn scaled(&self, factor: Complex64) -> HybridState {
        let mut out = self.clone();
        out.branches.values_mut().for_each(|b| b.coefficient *= factor);
        out
    }

    fn env_slot(&self, photon: Photon) -> Result<(usize, usize)> {
        let axis = photon
            .env_axis()
            .ok_or_else(|| Error::domain(format!("photon {photon:?} carries no frequency environment")))?;
        let slot = self
            .slot(photon)
            .ok_or_else(|| Error::domain(format!("photon {photon:?} has no polarization in this state")))?;
        Ok((slot, axis))
    }
}

fn parse_label(label: &str, n: usize) -> Result<u8> {
    if label.chars().count() != n {
        return Err(Error::domain(format!("label {label:?} must have {n} letters")));
    }
    label.chars().try_fold(0u8, |acc, ch| match ch {
        'H' => Ok(acc << 1),
        'V' => Ok((acc << 1) | 1),
        other => Err(Error::domain(format!("invalid polarization letter {other:?}"))),
    })
}

/// `(|HV⟩ ψ_HV + |VH⟩ ψ_VH)/√2` with `ψ_λλ' = g · e^{i[θ_aλ(f_a) + θ_bλ'(f_b)]}`.
pub fn auxiliary_state(jsa: &JointSpectralAmplitude, phase_a: &PhaseProfile, phase_b: &PhaseProfile) -> Result<HybridState> {
    if phase_a.grid() != jsa.grid_a() || phase_b.grid() != jsa.grid_b() {
        return Err(Error::domain("phase profiles must share the JSA's frequency grids"));
    }
    let envelope = |alice_h: bool, bob_h: bool| -> Envelope {
        let mut env = match jsa.factors() {
            Some((a, b)) => Envelope::Product { a: a.to_vec(), b: b.to_vec() },
            None => Envelope::Dense(jsa.to_dense()),
        };
        env.apply_phase(0, phase_a.theta(alice_h));
        env.apply_phase(1, phase_b.theta(bob_h));
        env
    };
    let coefficient = Complex64::new(FRAC_1_SQRT_2, 0.0);
    HybridState::new(
        vec![Photon::Alice, Photon::Bob],
        jsa.grid_a().clone(),
        jsa.grid_b().clone(),
        vec![
            ("HV", Branch { coefficient, envelope: envelope(true, false) }),
            ("VH", Branch { coefficient, envelope: envelope(false, true) }),
        ],
    )
}

/// Multiplies each branch by `e^{i θ_λ(f)}` for the polarization `λ` of `photon` in that branch.
pub fn apply_phase(state: &HybridState, photon: Photon, profile: &PhaseProfile) -> Result<HybridState> {
    let (slot, axis) = state.env_slot(photon)?;
    let grid = if axis == 0 { &state.grid_a } else { &state.grid_b };
    if profile.grid() != grid {
        return Err(Error::domain("phase profile grid does not match the photon's frequency grid"));
    }
    let mut out = state.clone();
    for (bits, branch) in out.branches.iter_mut() {
        let horizontal = state.polarization_at(*bits, slot) == Polarization::H;
        branch.envelope.apply_phase(axis, profile.theta(horizontal));
    }
    Ok(out)
}

/// Pure-dephasing evolution of one photon through a birefringent element.
pub fn apply_element(state: &HybridState, photon: Photon, elem: &BirefringentElement) -> Result<HybridState> {
    let (_, axis) = state.env_slot(photon)?;
    let grid = if axis == 0 { &state.grid_a } else { &state.grid_b };
    apply_phase(state, photon, &element_phase(elem, grid)?)
}

/// Applies a 2×2 unitary to one photon's polarization, leaving envelopes untouched.
pub fn apply_polarization_unitary(state: &HybridState, photon: Photon, unitary: &Matrix2<Complex64>) -> Result<HybridState> {
    let slot = state
        .slot(photon)
        .ok_or_else(|| Error::domain(format!("photon {photon:?} has no polarization in this state")))?;
    let shift = state.n_photons() - 1 - slot;
    let nb = state.grid_b.len();
    let mut rest: Vec<u8> = state.branches.keys().map(|bits| bits & !(1 << shift)).collect();
    rest.sort_unstable();
    rest.dedup();
    let mut branches = BTreeMap::new();
    for base in rest {
        for out_bit in 0..2u8 {
            let terms: Vec<(Complex64, &Envelope)> = (0..2u8)
                .filter_map(|in_bit| {
                    let u = unitary[(out_bit as usize, in_bit as usize)];
                    let branch = state.branches.get(&(base | (in_bit << shift)))?;
                    (u != Complex64::new(0.0, 0.0)).then_some((u * branch.coefficient, &branch.envelope))
                })
                .collect();
            if !terms.is_empty() {
                branches.insert(
                    base | (out_bit << shift),
                    Branch {
                        coefficient: Complex64::new(1.0, 0.0),
                        envelope: Envelope::combine(&terms, nb),
                    },
                );
            }
        }
    }
    HybridState::from_parts(state.photons.clone(), state.grid_a.clone(), state.grid_b.clone(), branches)
}

/// Partial trace over frequency and over every photon not in `keep`.
///
/// Rows and columns follow the order of `keep`, first photon most significant.
pub fn reduce_polarization(state: &HybridState, keep: &[Photon]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(Error::domain("at least one photon must be kept"));
    }
    let slots: Vec<usize> = keep
        .iter()
        .map(|p| state.slot(*p).ok_or_else(|| Error::domain(format!("photon {p:?} not in state"))))
        .collect::<Result<_>>()?;
    for (i, s) in slots.iter().enumerate() {
        if slots[..i].contains(s) {
            return Err(Error::domain("photon listed twice in keep"));
        }
    }
    let n = state.n_photons();
    let kept_index = |bits: u8| -> usize {
        slots
            .iter()
            .fold(0usize, |acc, &s| (acc << 1) | ((bits >> (n - 1 - s)) & 1) as usize)
    };
    let kept_mask: u8 = slots.iter().map(|&s| 1u8 << (n - 1 - s)).sum();
    let entries: Vec<(&u8, &Branch)> = state.branches.iter().collect();
    let dim = 1usize << slots.len();
    let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, (bi, branch_i)) in entries.iter().enumerate() {
        for (bj, branch_j) in &entries[i..] {
            if (*bi & !kept_mask) != (*bj & !kept_mask) {
                continue;
            }
            let overlap = branch_j.envelope.inner(&branch_i.envelope, &state.grid_a, &state.grid_b);
            let value = branch_i.coefficient * branch_j.coefficient.conj() * overlap;
            let (r, c) = (kept_index(**bi), kept_index(**bj));
            if r == c {
                rho[(r, c)] += Complex64::new(value.re, 0.0);
            } else {
                rho[(r, c)] += value;
                rho[(c, r)] += value.conj();
            }
        }
    }
    DensityMatrix::new(rho)
}

/// Complex decoherence value `Λ`, `|Λ| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceValue {
    pub value: Complex64,
}

impl DecoherenceValue {
    pub fn new(value: Complex64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() || value.norm() > 1.0 + 1e-10 {
            return Err(Error::numerical(format!("decoherence function |Λ| = {} out of range", value.norm())));
        }
        Ok(Self { value })
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }
}

fn residual_differences(
    jsa: &JointSpectralAmplitude,
    phase_a: &PhaseProfile,
    phase_b: &PhaseProfile,
    noise_a: Option<&BirefringentElement>,
    noise_b: Option<&BirefringentElement>,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if phase_a.grid() != jsa.grid_a() || phase_b.grid() != jsa.grid_b() {
        return Err(Error::domain("phase profiles must share the JSA's frequency grids"));
    }
    let total = |profile: &PhaseProfile, noise: Option<&BirefringentElement>, grid: &FrequencyGrid| -> Result<Vec<f64>> {
        let mut d = profile.difference();
        if let Some(elem) = noise {
            d.iter_mut().zip(element_phase(elem, grid)?.difference()).for_each(|(x, y)| *x += y);
        }
        Ok(d)
    };
    Ok((total(phase_a, noise_a, jsa.grid_a())?, total(phase_b, noise_b, jsa.grid_b())?))
}

/// `Λ = ∫ df_a df_b |g|² e^{i[θ_a(f_a) + φ_a(f_a) − θ_b(f_b) − φ_b(f_b)]}`, with `θ_j` the
/// SLM phase differences and `φ_j` those of the noise elements.
///
/// Product spectra are integrated as `Λ_a · conj(Λ_b)`.
pub fn decoherence_function(
    jsa: &JointSpectralAmplitude,
    phase_a: &PhaseProfile,
    phase_b: &PhaseProfile,
    noise_a: Option<&BirefringentElement>,
    noise_b: Option<&BirefringentElement>,
) -> Result<DecoherenceValue> {
    let Some((ga, gb)) = jsa.factors() else {
        return decoherence_function_dense(jsa, phase_a, phase_b, noise_a, noise_b);
    };
    let (da, db) = residual_differences(jsa, phase_a, phase_b, noise_a, noise_b)?;
    let single = |grid: &FrequencyGrid, g: &[Complex64], d: &[f64]| -> Complex64 {
        grid.weights()
            .iter()
            .zip(g.iter().zip(d))
            .map(|(w, (v, p))| Complex64::from_polar(w * v.norm_sqr(), *p))
            .sum()
    };
    DecoherenceValue::new(single(jsa.grid_a(), ga, &da) * single(jsa.grid_b(), gb, &db).conj())
}

/// Same integral as [`decoherence_function`], always summed over the full 2-D grid.
pub fn decoherence_function_dense(
    jsa: &JointSpectralAmplitude,
    phase_a: &PhaseProfile,
    phase_b: &PhaseProfile,
    noise_a: Option<&BirefringentElement>,
    noise_b: Option<&BirefringentElement>,
) -> Result<DecoherenceValue> {
    let (da, db) = residual_differences(jsa, phase_a, phase_b, noise_a, noise_b)?;
    let density = jsa.joint_density();
    let nb = jsa.grid_b().len();
    let eb: Vec<Complex64> = db
        .iter()
        .zip(jsa.grid_b().weights())
        .map(|(p, w)| Complex64::from_polar(*w, -p))
        .collect();
    let value: Complex64 = jsa
        .grid_a()
        .weights()
        .iter()
        .enumerate()
        .map(|(k, wa)| {
            let row: Complex64 = density[k * nb..(k + 1) * nb].iter().zip(&eb).map(|(d, e)| e * *d).sum();
            row * Complex64::from_polar(*wa, da[k])
        })
        .sum();
    DecoherenceValue::new(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{linear_phase, ElementPreset};
    use crate::spectra::{gaussian_mixture_amplitude, product_jsa, GaussianMixtureSpec};
    use crate::LAMBDA0;

    fn preset_jsa(n: usize) -> JointSpectralAmplitude {
        let sa = GaussianMixtureSpec::single_from_wavelength(780.0, 2.0).unwrap();
        let sb = GaussianMixtureSpec::single_from_wavelength(780.0, 3.0).unwrap();
        let a = gaussian_mixture_amplitude(&sa, &sa.default_grid(n, 4.0).unwrap()).unwrap().0;
        let b = gaussian_mixture_amplitude(&sb, &sb.default_grid(n, 4.0).unwrap()).unwrap().0;
        product_jsa(&a, &b).unwrap()
    }

    fn zero_phases(jsa: &JointSpectralAmplitude) -> (PhaseProfile, PhaseProfile) {
        (PhaseProfile::zero(jsa.grid_a()), PhaseProfile::zero(jsa.grid_b()))
    }

    #[test]
    fn zero_phase_auxiliary_state_is_psi_plus() {
        let jsa = preset_jsa(128);
        let (pa, pb) = zero_phases(&jsa);
        let aux = auxiliary_state(&jsa, &pa, &pb).unwrap();
        assert!((aux.norm_squared() - 1.0).abs() < 1e-12);
        let rho = reduce_polarization(&aux, &[Photon::Alice, Photon::Bob]).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let expected = if (r == 1 || r == 2) && (c == 1 || c == 2) { 0.5 } else { 0.0 };
                assert!((rho.get(r, c) - Complex64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn element_composition_and_identity() {
        let jsa = preset_jsa(128);
        let pa = linear_phase(446.0, LAMBDA0, jsa.grid_a());
        let pb = linear_phase(429.0, LAMBDA0, jsa.grid_b());
        let aux = auxiliary_state(&jsa, &pa, &pb).unwrap();
        let zero = BirefringentElement::constant(0.0, LAMBDA0).unwrap();
        assert_eq!(apply_element(&aux, Photon::Alice, &zero).unwrap(), aux);
        let x = BirefringentElement::constant(123.0, LAMBDA0).unwrap();
        let twice = apply_element(&apply_element(&aux, Photon::Bob, &x).unwrap(), Photon::Bob, &x).unwrap();
        let once = apply_element(&aux, Photon::Bob, &x.scaled(2.0).unwrap()).unwrap();
        assert!((twice.inner(&once).unwrap().norm() - 1.0).abs() < 1e-12);
        assert!((twice.norm_squared() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn element_on_teleportee_rejected() {
        let jsa = preset_jsa(32);
        let (pa, pb) = zero_phases(&jsa);
        let aux = auxiliary_state(&jsa, &pa, &pb).unwrap();
        let elem = ElementPreset::Yvo4_400.constant(LAMBDA0);
        assert!(apply_element(&aux, Photon::Teleportee, &elem).is_err());
        assert!(reduce_polarization(&aux, &[Photon::Teleportee]).is_err());
    }

    #[test]
    fn matched_slopes_give_unit_lambda() {
        let jsa = preset_jsa(256);
        let pa = linear_phase(400.0, LAMBDA0, jsa.grid_a());
        let pb = linear_phase(411.0, LAMBDA0, jsa.grid_b());
        let ea = ElementPreset::Yvo4_400.constant(LAMBDA0);
        let eb = ElementPreset::Quartz411.constant(LAMBDA0);
        let lam = decoherence_function(&jsa, &pa, &pb, Some(&ea), Some(&eb)).unwrap();
        assert!((lam.value - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn factorized_matches_dense() {
        let jsa = preset_jsa(96);
        let pa = linear_phase(446.0, LAMBDA0, jsa.grid_a());
        let pb = linear_phase(429.0, LAMBDA0, jsa.grid_b());
        let ea = ElementPreset::Yvo4_400.constant(LAMBDA0);
        let fact = decoherence_function(&jsa, &pa, &pb, Some(&ea), None).unwrap();
        let dense = decoherence_function_dense(&jsa, &pa, &pb, Some(&ea), None).unwrap();
        assert!((fact.value - dense.value).norm() < 1e-12);
    }

    #[test]
    fn unitary_mixing_preserves_norm_and_inverts() {
        let jsa = preset_jsa(48);
        let pa = linear_phase(446.0, LAMBDA0, jsa.grid_a());
        let (_, pb) = zero_phases(&jsa);
        let aux = auxiliary_state(&jsa, &pa, &pb).unwrap();
        let h = FRAC_1_SQRT_2;
        let hadamard = Matrix2::new(
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(h, 0.0),
            Complex64::new(-h, 0.0),
        );
        let mixed = apply_polarization_unitary(&aux, Photon::Alice, &hadamard).unwrap();
        assert_eq!(mixed.raw_branches().len(), 4);
        assert!((mixed.norm_squared() - 1.0).abs() < 1e-12);
        let back = apply_polarization_unitary(&mixed, Photon::Alice, &hadamard).unwrap();
        assert!((back.inner(&aux).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(parse_label("HVH", 3).unwrap(), 0b010);
        assert!(parse_label("HX", 2).is_err());
        assert!(parse_label("H", 2).is_err());
        let jsa = preset_jsa(16);
        let (pa, pb) = zero_phases(&jsa);
        let aux = auxiliary_state(&jsa, &pa, &pb).unwrap();
        let labels: Vec<String> = aux.branches().map(|(l, _)| l).collect();
        assert_eq!(labels, vec!["HV".to_string(), "VH".to_string()]);
        assert!(aux.branch("HH").is_none());
    }
}
