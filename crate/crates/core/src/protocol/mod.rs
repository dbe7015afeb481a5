//! The noisy teleportation pipeline and Bell-state purification sweeps.
//!
//! Pipeline: auxiliary pair with programmed phases → Alice's dephasing →
//! attach the input qubit → project photons (teleportee, Alice) on each Bell
//! state → Bob's dephasing → Bob's correction. All four outcomes are
//! enumerated deterministically.

pub mod presets;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::hybrid_state::{
    apply_element, apply_polarization_unitary, auxiliary_state, decoherence_function, reduce_polarization, Branch,
    DensityMatrix, Envelope, HybridState,
};
use crate::metrics::{chsh_max, concurrence_pure_bipartition, concurrence_wootters, fidelity, purity, Cut};
use crate::optics::{linear_phase, pixelate, BirefringentElement, PhaseProfile, SlmModel};
use crate::spectra::{
    gaussian_mixture_amplitude, product_jsa, FrequencyGrid, GaussianMixtureSpec, JointSpectralAmplitude,
    DEFAULT_GRID_POINTS, DEFAULT_SPAN_SIGMAS,
};
use crate::Photon;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// The qubit `α|H⟩ + β|V⟩` to be teleported.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InputQubit {
    alpha: Complex64,
    beta: Complex64,
}

impl InputQubit {
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("input qubit not normalized: |α|² + |β|² = {norm}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn horizontal() -> Self {
        Self { alpha: c(1.0, 0.0), beta: c(0.0, 0.0) }
    }

    pub fn vertical() -> Self {
        Self { alpha: c(0.0, 0.0), beta: c(1.0, 0.0) }
    }

    pub fn plus() -> Self {
        Self { alpha: c(FRAC_1_SQRT_2, 0.0), beta: c(FRAC_1_SQRT_2, 0.0) }
    }

    pub fn minus() -> Self {
        Self { alpha: c(FRAC_1_SQRT_2, 0.0), beta: c(-FRAC_1_SQRT_2, 0.0) }
    }

    pub fn right() -> Self {
        Self { alpha: c(FRAC_1_SQRT_2, 0.0), beta: c(0.0, FRAC_1_SQRT_2) }
    }

    pub fn left() -> Self {
        Self { alpha: c(FRAC_1_SQRT_2, 0.0), beta: c(0.0, -FRAC_1_SQRT_2) }
    }

    /// Resolves `+`, `-`, `R`, `L`, `H` or `V`.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "+" => Some(Self::plus()),
            "-" => Some(Self::minus()),
            "R" => Some(Self::right()),
            "L" => Some(Self::left()),
            "H" => Some(Self::horizontal()),
            "V" => Some(Self::vertical()),
            _ => None,
        }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn ket(&self) -> [Complex64; 2] {
        [self.alpha, self.beta]
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.ket()).expect("normalized qubit")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    pub const ALL: [BellState; 4] = [BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus];

    pub fn name(self) -> &'static str {
        match self {
            BellState::PhiPlus => "PhiPlus",
            BellState::PhiMinus => "PhiMinus",
            BellState::PsiPlus => "PsiPlus",
            BellState::PsiMinus => "PsiMinus",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|b| b.name() == name)
    }

    /// Amplitudes over `HH, HV, VH, VV`.
    pub fn ket(self) -> [Complex64; 4] {
        let s = FRAC_1_SQRT_2;
        let z = c(0.0, 0.0);
        match self {
            BellState::PhiPlus => [c(s, 0.0), z, z, c(s, 0.0)],
            BellState::PhiMinus => [c(s, 0.0), z, z, c(-s, 0.0)],
            BellState::PsiPlus => [z, c(s, 0.0), c(s, 0.0), z],
            BellState::PsiMinus => [z, c(s, 0.0), c(-s, 0.0), z],
        }
    }

    pub fn density(self) -> DensityMatrix {
        DensityMatrix::from_pure(&self.ket()).expect("normalized Bell state")
    }

    /// Local unitary on the first qubit taking `|Ψ⁺⟩` to this state.
    pub fn from_psi_plus(self) -> Matrix2<Complex64> {
        let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
        match self {
            BellState::PsiPlus => Matrix2::identity(),
            BellState::PhiPlus => Matrix2::new(z, o, o, z),
            BellState::PsiMinus => Matrix2::new(o, z, z, -o),
            BellState::PhiMinus => Matrix2::new(z, o, -o, z),
        }
    }
}

/// A Bell-measurement result and its probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellOutcome {
    pub label: BellState,
    pub probability: f64,
}

/// Bob's correction: `σ_x` for Φ⁺, `iσ_y` for Φ⁻, identity for Ψ⁺, `σ_z` for Ψ⁻.
pub fn correction(outcome: BellState) -> Matrix2<Complex64> {
    let (o, z) = (c(1.0, 0.0), c(0.0, 0.0));
    match outcome {
        BellState::PhiPlus => Matrix2::new(z, o, o, z),
        BellState::PhiMinus => Matrix2::new(z, o, -o, z),
        BellState::PsiPlus => Matrix2::identity(),
        BellState::PsiMinus => Matrix2::new(o, z, z, -o),
    }
}

/// `|φ⟩ ⊗ |aux⟩`, teleportee first.
pub fn attach_input(aux: &HybridState, q: &InputQubit) -> Result<HybridState> {
    if aux.photons() != [Photon::Alice, Photon::Bob] {
        return Err(Error::domain("input qubit can only be attached to the two-photon auxiliary state"));
    }
    let mut branches = BTreeMap::new();
    for (t_bit, amp) in [(0u8, q.alpha), (1u8, q.beta)] {
        if amp == c(0.0, 0.0) {
            continue;
        }
        for (bits, branch) in aux.raw_branches() {
            branches.insert(
                (t_bit << 2) | bits,
                Branch {
                    coefficient: amp * branch.coefficient,
                    envelope: branch.envelope.clone(),
                },
            );
        }
    }
    HybridState::from_parts(
        vec![Photon::Teleportee, Photon::Alice, Photon::Bob],
        aux.grid_a().clone(),
        aux.grid_b().clone(),
        branches,
    )
}

/// Result of projecting the teleportee and Alice's photon on one Bell state.
#[derive(Debug, Clone, PartialEq)]
pub struct BellProjection {
    pub outcome: BellOutcome,
    /// Bob's normalized conditional state; `None` when the outcome has zero probability.
    pub state: Option<HybridState>,
}

const ZERO_PROBABILITY: f64 = 1e-14;

/// `⟨B|_{t,a} |Ω⟩`, normalized, with its probability.
///
/// Bob's conditional state keeps his polarization and both frequency environments.
pub fn bell_project(total: &HybridState, outcome: BellState) -> Result<BellProjection> {
    if total.photons() != [Photon::Teleportee, Photon::Alice, Photon::Bob] {
        return Err(Error::domain("Bell projection needs the three-photon state"));
    }
    let bell = outcome.ket();
    let nb = total.grid_b().len();
    let mut terms: BTreeMap<u8, Vec<(Complex64, &Envelope)>> = BTreeMap::new();
    for (bits, branch) in total.raw_branches() {
        let pair = (bits >> 1) as usize & 0b11;
        let amp = bell[pair].conj();
        if amp != c(0.0, 0.0) {
            terms.entry(bits & 1).or_default().push((amp * branch.coefficient, &branch.envelope));
        }
    }
    let branches: BTreeMap<u8, Branch> = terms
        .into_iter()
        .map(|(bob, t)| {
            (
                bob,
                Branch {
                    coefficient: c(1.0, 0.0),
                    envelope: Envelope::combine(&t, nb),
                },
            )
        })
        .collect();
    let unnormalized = HybridState::from_parts(vec![Photon::Bob], total.grid_a().clone(), total.grid_b().clone(), branches)?;
    let probability = unnormalized.norm_squared();
    let state = (probability > ZERO_PROBABILITY).then(|| unnormalized.scaled(c(probability.sqrt().recip(), 0.0)));
    Ok(BellProjection {
        outcome: BellOutcome { label: outcome, probability },
        state,
    })
}

/// A programmed SLM: linear slope, optionally pixelated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlmSetting {
    pub slope_lambda0: f64,
    pub pixelation: Option<SlmModel>,
}

impl SlmSetting {
    pub fn continuous(slope_lambda0: f64) -> Self {
        Self { slope_lambda0, pixelation: None }
    }
}

/// What one party applies to their auxiliary photon.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SideConfig {
    pub slm: Option<SlmSetting>,
    pub noise: Option<BirefringentElement>,
}

impl SideConfig {
    pub fn new(slm: Option<SlmSetting>, noise: Option<BirefringentElement>) -> Self {
        Self { slm, noise }
    }

    /// Initial phase profile; zero when no SLM is used.
    pub fn profile(&self, grid: &FrequencyGrid, lambda0: f64) -> Result<PhaseProfile> {
        match &self.slm {
            None => Ok(PhaseProfile::zero(grid)),
            Some(setting) => {
                let p = linear_phase(setting.slope_lambda0, lambda0, grid);
                match &setting.pixelation {
                    Some(model) => pixelate(&p, model),
                    None => Ok(p),
                }
            }
        }
    }
}

/// Marginal spectra of the two auxiliary photons and their discretization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumConfig {
    pub alice: GaussianMixtureSpec,
    pub bob: GaussianMixtureSpec,
    pub grid_points: usize,
    pub span_sigmas: f64,
}

impl SpectrumConfig {
    /// Single Gaussians of 2 nm (Alice) and 3 nm (Bob) FWHM at 780 nm.
    pub fn filters_2nm_3nm() -> Self {
        Self {
            alice: GaussianMixtureSpec::single_from_wavelength(780.0, 2.0).expect("valid preset"),
            bob: GaussianMixtureSpec::single_from_wavelength(780.0, 3.0).expect("valid preset"),
            grid_points: DEFAULT_GRID_POINTS,
            span_sigmas: DEFAULT_SPAN_SIGMAS,
        }
    }

    pub fn with_grid_points(mut self, n: usize) -> Self {
        self.grid_points = n;
        self
    }

    /// Uncorrelated joint amplitude of the two marginals.
    pub fn build(&self) -> Result<JointSpectralAmplitude> {
        let ga = self.alice.default_grid(self.grid_points, self.span_sigmas)?;
        let gb = self.bob.default_grid(self.grid_points, self.span_sigmas)?;
        let (a, _) = gaussian_mixture_amplitude(&self.alice, &ga)?;
        let (b, _) = gaussian_mixture_amplitude(&self.bob, &gb)?;
        product_jsa(&a, &b)
    }
}

/// A complete teleportation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub name: String,
    pub input: InputQubit,
    pub alice: SideConfig,
    pub bob: SideConfig,
    pub spectrum: SpectrumConfig,
    pub lambda0: f64,
}

/// One Bell outcome of a teleportation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeResult {
    pub outcome: BellState,
    pub probability: f64,
    /// `U_B ρ_b U_B†` before Bob's dephasing.
    pub bob_pre_noise: DensityMatrix,
    /// `U_B N_b(ρ_b) U_B†`: Bob's dephasing, then the correction.
    pub bob_final: DensityMatrix,
    pub fidelity_pre_noise: f64,
    pub fidelity_final: f64,
}

/// The auxiliary pair at the time of the Bell measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairDiagnostics {
    pub rho: DensityMatrix,
    pub concurrence: f64,
    pub chsh_max: f64,
    pub purity: f64,
    /// Alice's photon against Bob's, both degrees of freedom included.
    pub photon_cut_concurrence: f64,
    /// Composite polarization against composite frequency.
    pub polarization_frequency_concurrence: f64,
}

impl PairDiagnostics {
    pub fn of(state: &HybridState) -> Result<Self> {
        let rho = reduce_polarization(state, &[Photon::Alice, Photon::Bob])?;
        Ok(Self {
            concurrence: concurrence_wootters(&rho)?,
            chsh_max: chsh_max(&rho)?,
            purity: purity(&rho),
            photon_cut_concurrence: concurrence_pure_bipartition(state, &Cut::Photons(vec![Photon::Alice]))?,
            polarization_frequency_concurrence: concurrence_pure_bipartition(state, &Cut::PolarizationFrequency)?,
            rho,
        })
    }
}

/// Decoherence function before noise, after Alice's noise, and after both.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageLambdas {
    pub initial: Complex64,
    pub after_alice: Complex64,
    pub after_both: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub name: String,
    pub input: InputQubit,
    pub outcomes: Vec<OutcomeResult>,
    pub average_fidelity: f64,
    pub average_fidelity_pre_noise: f64,
    pub lambdas: StageLambdas,
    pub pair_at_bsm: PairDiagnostics,
}

pub fn run_teleportation(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    run_teleportation_with(cfg, &cfg.spectrum.build()?)
}

/// Runs a scenario on an explicit joint amplitude (the config's spectrum block is ignored).
pub fn run_teleportation_with(cfg: &ScenarioConfig, jsa: &JointSpectralAmplitude) -> Result<ScenarioResult> {
    let phase_a = cfg.alice.profile(jsa.grid_a(), cfg.lambda0)?;
    let phase_b = cfg.bob.profile(jsa.grid_b(), cfg.lambda0)?;
    let noise_a = cfg.alice.noise.as_ref();
    let noise_b = cfg.bob.noise.as_ref();

    let aux = auxiliary_state(jsa, &phase_a, &phase_b)?;
    let after_alice = match noise_a {
        Some(elem) => apply_element(&aux, Photon::Alice, elem)?,
        None => aux,
    };
    let pair_at_bsm = PairDiagnostics::of(&after_alice)?;
    let total = attach_input(&after_alice, &cfg.input)?;
    let target = cfg.input.density();

    let mut outcomes = Vec::with_capacity(4);
    for label in BellState::ALL {
        let projection = bell_project(&total, label)?;
        let Some(bob) = projection.state else {
            log::debug!("{}: outcome {} has zero probability", cfg.name, label.name());
            continue;
        };
        let u = correction(label);
        let corrected = apply_polarization_unitary(&bob, Photon::Bob, &u)?;
        let bob_pre_noise = reduce_polarization(&corrected, &[Photon::Bob])?;
        // Dephasing acts on the photon as it left the BSM; the correction follows it.
        // σ_x and iσ_y swap H and V and so do not commute with a birefringent element.
        let bob_after = match noise_b {
            Some(elem) => apply_polarization_unitary(&apply_element(&bob, Photon::Bob, elem)?, Photon::Bob, &u)?,
            None => corrected,
        };
        let bob_final = reduce_polarization(&bob_after, &[Photon::Bob])?;
        outcomes.push(OutcomeResult {
            outcome: label,
            probability: projection.outcome.probability,
            fidelity_pre_noise: fidelity(&bob_pre_noise, &target)?,
            fidelity_final: fidelity(&bob_final, &target)?,
            bob_pre_noise,
            bob_final,
        });
    }
    let average_fidelity = outcomes.iter().map(|o| o.probability * o.fidelity_final).sum();
    let average_fidelity_pre_noise = outcomes.iter().map(|o| o.probability * o.fidelity_pre_noise).sum();

    let lambdas = StageLambdas {
        initial: decoherence_function(jsa, &phase_a, &phase_b, None, None)?.value,
        after_alice: decoherence_function(jsa, &phase_a, &phase_b, noise_a, None)?.value,
        after_both: decoherence_function(jsa, &phase_a, &phase_b, noise_a, noise_b)?.value,
    };
    Ok(ScenarioResult {
        name: cfg.name.clone(),
        input: cfg.input,
        outcomes,
        average_fidelity,
        average_fidelity_pre_noise,
        lambdas,
        pair_at_bsm,
    })
}

/// The quantity varied along a purification sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    /// SLM slope, in λ₀ units.
    Slope,
    /// Effective path difference of the noise element, in λ₀ units.
    Thickness,
}

/// A two-photon purification experiment: no teleportee, target Bell state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurificationConfig {
    pub name: String,
    pub target: BellState,
    pub alice: SideConfig,
    pub bob: SideConfig,
    pub spectrum: SpectrumConfig,
    pub lambda0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub x: f64,
    pub fidelity: f64,
    pub lambda: Complex64,
    pub concurrence: f64,
    pub chsh_max: f64,
}

/// Both-sided dephasing of the auxiliary pair, evaluated against the target Bell state.
///
/// The target is reached from `|Ψ⁺⟩` by a local Pauli on Alice's qubit applied
/// after the dephasing.
pub fn purification_point(cfg: &PurificationConfig, jsa: &JointSpectralAmplitude, x: f64) -> Result<SweepPoint> {
    let phase_a = cfg.alice.profile(jsa.grid_a(), cfg.lambda0)?;
    let phase_b = cfg.bob.profile(jsa.grid_b(), cfg.lambda0)?;
    let mut state = auxiliary_state(jsa, &phase_a, &phase_b)?;
    if let Some(elem) = &cfg.alice.noise {
        state = apply_element(&state, Photon::Alice, elem)?;
    }
    if let Some(elem) = &cfg.bob.noise {
        state = apply_element(&state, Photon::Bob, elem)?;
    }
    let rho = reduce_polarization(&state, &[Photon::Alice, Photon::Bob])?;
    let local = cfg.target.from_psi_plus();
    let full = DMatrix::from_fn(2, 2, |r, s| local[(r, s)]).kronecker(&DMatrix::identity(2, 2));
    let rho = rho.conjugated(&full)?;
    let lambda = decoherence_function(jsa, &phase_a, &phase_b, cfg.alice.noise.as_ref(), cfg.bob.noise.as_ref())?.value;
    Ok(SweepPoint {
        x,
        fidelity: fidelity(&rho, &cfg.target.density())?,
        lambda,
        concurrence: concurrence_wootters(&rho)?,
        chsh_max: chsh_max(&rho)?,
    })
}

/// Sets the swept quantity on `side` to `x`.
pub fn with_sweep_value(base: &PurificationConfig, side: Photon, variable: SweepVariable, x: f64) -> Result<PurificationConfig> {
    let mut cfg = base.clone();
    let target = match side {
        Photon::Alice => &mut cfg.alice,
        Photon::Bob => &mut cfg.bob,
        Photon::Teleportee => return Err(Error::domain("the teleportee has no SLM or noise element")),
    };
    match variable {
        SweepVariable::Slope => match &mut target.slm {
            Some(slm) => slm.slope_lambda0 = x,
            None => target.slm = Some(SlmSetting::continuous(x)),
        },
        SweepVariable::Thickness => {
            target.noise = Some(match &target.noise {
                Some(elem) => elem.with_path(x)?,
                None => BirefringentElement::constant(x, cfg.lambda0)?,
            })
        }
    }
    Ok(cfg)
}

/// Fidelity to the target Bell state for each value in `sweep`, in input order.
pub fn purification_sweep(
    base: &PurificationConfig,
    sweep: &[f64],
    side: Photon,
    variable: SweepVariable,
) -> Result<Vec<SweepPoint>> {
    if sweep.is_empty() {
        return Err(Error::domain("purification sweep needs at least one value"));
    }
    let jsa = base.spectrum.build()?;
    sweep
        .par_iter()
        .map(|&x| purification_point(&with_sweep_value(base, side, variable, x)?, &jsa, x))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::LAMBDA0;

    fn small_aux() -> HybridState {
        let jsa = SpectrumConfig::filters_2nm_3nm().with_grid_points(64).build().unwrap();
        let pa = linear_phase(446.0, LAMBDA0, jsa.grid_a());
        let pb = linear_phase(429.0, LAMBDA0, jsa.grid_b());
        auxiliary_state(&jsa, &pa, &pb).unwrap()
    }

    #[test]
    fn corrections_are_the_listed_paulis() {
        let (o, z, i) = (c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0));
        assert_eq!(correction(BellState::PsiPlus), Matrix2::identity());
        assert_eq!(correction(BellState::PhiPlus), Matrix2::new(z, o, o, z));
        assert_eq!(correction(BellState::PsiMinus), Matrix2::new(o, z, z, -o));
        // iσ_y
        let sy = Matrix2::new(z, -i, i, z);
        assert_eq!(correction(BellState::PhiMinus), sy * i);
        for b in BellState::ALL {
            let u = correction(b);
            assert!((u.adjoint() * u - Matrix2::identity()).norm() < 1e-15);
        }
    }

    #[test]
    fn attach_basis_and_plus() {
        let aux = small_aux();
        let h = attach_input(&aux, &InputQubit::horizontal()).unwrap();
        let labels: Vec<String> = h.branches().map(|(l, _)| l).collect();
        assert_eq!(labels, vec!["HHV", "HVH"]);
        let plus = attach_input(&aux, &InputQubit::plus()).unwrap();
        assert_eq!(plus.branches().count(), 4);
        for (_, b) in plus.branches() {
            assert!((b.coefficient.norm() - 0.5).abs() < 1e-15);
        }
        assert!((plus.norm_squared() - 1.0).abs() < 1e-12);
        assert!(attach_input(&plus, &InputQubit::plus()).is_err());
    }

    #[test]
    fn psi_minus_branch_pattern() {
        let aux = small_aux();
        let q = InputQubit::plus();
        let total = attach_input(&aux, &q).unwrap();
        let proj = bell_project(&total, BellState::PsiMinus).unwrap();
        assert!((proj.outcome.probability - 0.25).abs() < 1e-10);
        let bob = proj.state.unwrap();
        // α|H⟩|ξ_VH⟩ − β|V⟩|ξ_HV⟩ up to the overall 1/2
        let xi_vh = &aux.branch("VH").unwrap().envelope;
        let xi_hv = &aux.branch("HV").unwrap().envelope;
        let (ga, gb) = (bob.grid_a(), bob.grid_b());
        let h = bob.branch("H").unwrap();
        let v = bob.branch("V").unwrap();
        let h_amp = h.coefficient * xi_vh.inner(&h.envelope, ga, gb);
        let v_amp = v.coefficient * xi_hv.inner(&v.envelope, ga, gb);
        let s = FRAC_1_SQRT_2;
        // aux branches carry 1/√2; after normalization Bob's amplitudes are (α, −β)
        assert!((h_amp - c(s, 0.0)).norm() < 1e-12);
        assert!((v_amp - c(-s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn input_validation() {
        assert!(InputQubit::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
        for name in ["+", "-", "R", "L", "H", "V"] {
            assert!(InputQubit::from_name(name).is_some());
        }
        assert!(InputQubit::from_name("X").is_none());
    }

    #[test]
    fn empty_sweep_rejected() {
        let cfg = presets::purification_alice(BellState::PsiPlus);
        assert!(purification_sweep(&cfg, &[], Photon::Alice, SweepVariable::Slope).is_err());
    }
}
