//! Built-in scenarios: the teleportation bar chart, the purification sweeps
//! and the fiber purification run.

use super::{BellState, InputQubit, PurificationConfig, ScenarioConfig, SideConfig, SlmSetting, SpectrumConfig, SweepVariable};
use crate::optics::ElementPreset;
use crate::{Photon, LAMBDA0};
use serde::{Deserialize, Serialize};

pub const ALICE_SLOPE: f64 = 446.0;
pub const BOB_SLOPE: f64 = 429.0;
pub const FIBER_SLOPE: f64 = 1063.0;

/// Where dephasing acts in a teleportation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoisePlacement {
    A,
    B,
    AB,
}

impl NoisePlacement {
    pub const ALL: [NoisePlacement; 3] = [NoisePlacement::A, NoisePlacement::B, NoisePlacement::AB];

    pub fn name(self) -> &'static str {
        match self {
            NoisePlacement::A => "A",
            NoisePlacement::B => "B",
            NoisePlacement::AB => "A+B",
        }
    }

    pub fn alice_noisy(self) -> bool {
        matches!(self, NoisePlacement::A | NoisePlacement::AB)
    }

    pub fn bob_noisy(self) -> bool {
        matches!(self, NoisePlacement::B | NoisePlacement::AB)
    }
}

/// Input states of the teleportation runs.
pub const FIG3_INPUTS: [&str; 4] = ["+", "-", "R", "L"];

fn side(noisy: bool, slm: bool, slope: f64, element: ElementPreset) -> SideConfig {
    if !noisy {
        return SideConfig::default();
    }
    SideConfig::new(slm.then(|| SlmSetting::continuous(slope)), Some(element.constant(LAMBDA0)))
}

/// One bar of the teleportation chart. SLMs are programmed only on the sides
/// that carry noise; with noise on Alice only, Bob's side is left untouched.
pub fn fig3_scenario(placement: NoisePlacement, slm: bool, input: &str) -> ScenarioConfig {
    let name = format!("{}_{}", placement.name(), if slm { "slm" } else { "noslm" });
    ScenarioConfig {
        name,
        input: InputQubit::from_name(input).expect("known input"),
        alice: side(placement.alice_noisy(), slm, ALICE_SLOPE, ElementPreset::Yvo4_400),
        bob: side(placement.bob_noisy(), slm, BOB_SLOPE, ElementPreset::Quartz411),
        spectrum: SpectrumConfig::filters_2nm_3nm(),
        lambda0: LAMBDA0,
    }
}

/// Neither noise nor SLMs.
pub fn fig3_reference(input: &str) -> ScenarioConfig {
    ScenarioConfig {
        name: "reference".into(),
        input: InputQubit::from_name(input).expect("known input"),
        alice: SideConfig::default(),
        bob: SideConfig::default(),
        spectrum: SpectrumConfig::filters_2nm_3nm(),
        lambda0: LAMBDA0,
    }
}

/// Every bar: 4 inputs × {A, B, A+B} × {SLM on, off}, then the references.
pub fn fig3() -> Vec<ScenarioConfig> {
    let mut out = Vec::new();
    for placement in NoisePlacement::ALL {
        for slm in [true, false] {
            for input in FIG3_INPUTS {
                out.push(fig3_scenario(placement, slm, input));
            }
        }
    }
    out.extend(FIG3_INPUTS.iter().map(|i| fig3_reference(i)));
    out
}

/// A named purification sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub name: String,
    pub base: PurificationConfig,
    pub side: Photon,
    pub variable: SweepVariable,
    pub values: Vec<f64>,
}

/// `start, start + step, …` up to and including `stop` (within half a step).
pub fn stepped(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return Vec::new();
    }
    let n = ((stop - start) / step + 0.5).floor() as usize;
    (0..=n).map(|i| start + i as f64 * step).collect()
}

/// Alice dephases through YVO₄ and tunes her SLM slope; Bob does nothing.
pub fn purification_alice(target: BellState) -> PurificationConfig {
    PurificationConfig {
        name: format!("alice_{}", target.name()),
        target,
        alice: SideConfig::new(
            Some(SlmSetting::continuous(ALICE_SLOPE)),
            Some(ElementPreset::Yvo4_400.constant(LAMBDA0)),
        ),
        bob: SideConfig::default(),
        spectrum: sweep_spectrum(),
        lambda0: LAMBDA0,
    }
}

/// Bob keeps the 429 λ₀ slope and stacks quartz; Alice does nothing.
pub fn purification_bob(target: BellState) -> PurificationConfig {
    PurificationConfig {
        name: format!("bob_{}", target.name()),
        target,
        alice: SideConfig::default(),
        bob: SideConfig::new(
            Some(SlmSetting::continuous(BOB_SLOPE)),
            Some(ElementPreset::Quartz411.constant(LAMBDA0)),
        ),
        spectrum: sweep_spectrum(),
        lambda0: LAMBDA0,
    }
}

/// Sweeps follow `|Λ|` far into its Gaussian tail, below the sidelobes that
/// truncating the spectrum at ±4σ would leave, so they sample ±6σ.
pub const SWEEP_SPAN_SIGMAS: f64 = 6.0;

fn sweep_spectrum() -> SpectrumConfig {
    SpectrumConfig {
        span_sigmas: SWEEP_SPAN_SIGMAS,
        ..SpectrumConfig::filters_2nm_3nm()
    }
}

pub fn alice_slopes() -> Vec<f64> {
    stepped(0.0, 1000.0, 5.0)
}

pub fn bob_thicknesses() -> Vec<f64> {
    stepped(0.0, 900.0, 3.0)
}

/// Eight curves: four Bell targets, purified by Alice's slope or Bob's quartz stack.
pub fn figs2() -> Vec<SweepSpec> {
    let mut out = Vec::new();
    for target in BellState::ALL {
        let base = purification_alice(target);
        out.push(SweepSpec {
            name: base.name.clone(),
            base,
            side: Photon::Alice,
            variable: SweepVariable::Slope,
            values: alice_slopes(),
        });
    }
    for target in BellState::ALL {
        let base = purification_bob(target);
        out.push(SweepSpec {
            name: base.name.clone(),
            base,
            side: Photon::Bob,
            variable: SweepVariable::Thickness,
            values: bob_thicknesses(),
        });
    }
    out
}

/// Alice's slope sweep against YVO₄ with the illustrative quadratic dispersion.
pub fn figs2_dispersive() -> Vec<SweepSpec> {
    BellState::ALL
        .into_iter()
        .map(|target| {
            let mut base = purification_alice(target);
            base.name = format!("alice_dispersive_{}", target.name());
            base.alice.noise = ElementPreset::Yvo4_400.dispersive(LAMBDA0);
            SweepSpec {
                name: base.name.clone(),
                base,
                side: Photon::Alice,
                variable: SweepVariable::Slope,
                values: alice_slopes(),
            }
        })
        .collect()
}

/// `|Ψ⁺⟩` through 1080 λ₀ of PM fiber on Bob's side, purified by Bob's slope.
pub fn figs4() -> SweepSpec {
    let base = PurificationConfig {
        name: "bob_pm_fiber_PsiPlus".into(),
        target: BellState::PsiPlus,
        alice: SideConfig::default(),
        bob: SideConfig::new(
            Some(SlmSetting::continuous(FIBER_SLOPE)),
            Some(ElementPreset::PmFiber1080.constant(LAMBDA0)),
        ),
        spectrum: sweep_spectrum(),
        lambda0: LAMBDA0,
    };
    SweepSpec {
        name: base.name.clone(),
        base,
        side: Photon::Bob,
        variable: SweepVariable::Slope,
        values: stepped(863.0, 1263.0, 1.0),
    }
}
