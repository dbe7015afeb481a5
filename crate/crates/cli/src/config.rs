//! Scenario files: TOML with units in every physical key name.

use std::collections::BTreeMap;

use hybrid_teleport::optics::{BirefringentElement, ElementPreset, IndexModel, SlmModel};
use hybrid_teleport::protocol::presets::{stepped, SweepSpec};
use hybrid_teleport::protocol::{
    BellState, InputQubit, PurificationConfig, ScenarioConfig, SideConfig, SlmSetting, SpectrumConfig, SweepVariable,
};
use hybrid_teleport::spectra::{GaussianComponent, GaussianMixtureSpec};
use hybrid_teleport::{Complex64, Photon, SPEED_OF_LIGHT};
use serde::{Deserialize, Serialize};

use crate::CliError;

fn default_lambda0_nm() -> f64 {
    780.0
}

fn default_weight() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub name: String,
    #[serde(default = "default_lambda0_nm")]
    pub lambda0_nm: f64,
    #[serde(default)]
    pub grid: GridSpec,
    pub spectrum: SpectrumSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub teleportation: Vec<TeleportationSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<SweepBlock>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub points: usize,
    pub span_sigmas: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 512,
            span_sigmas: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumSpec {
    pub alice: Vec<ComponentSpec>,
    pub bob: Vec<ComponentSpec>,
}

/// One Gaussian of an intensity spectrum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    #[serde(default = "default_weight")]
    pub weight: f64,
    pub center_nm: f64,
    pub fwhm_nm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TeleportationSpec {
    pub name: String,
    /// Named inputs: `+`, `-`, `R`, `L`, `H`, `V`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inputs: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub custom_inputs: Vec<CustomInput>,
    #[serde(default, skip_serializing_if = "SideSpec::is_empty")]
    pub alice: SideSpec,
    #[serde(default, skip_serializing_if = "SideSpec::is_empty")]
    pub bob: SideSpec,
}

/// `α|H⟩ + β|V⟩` given by its amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomInput {
    pub label: String,
    pub alpha_re: f64,
    #[serde(default)]
    pub alpha_im: f64,
    pub beta_re: f64,
    #[serde(default)]
    pub beta_im: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    #[default]
    Constant,
    /// The illustrative quadratic dispersion of the element preset.
    Demo,
}

/// What one photon meets: an optional SLM and an optional dephasing element.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SideSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slm_slope_lambda0: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub slm_pixelated: bool,
    /// Element preset name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<String>,
    /// Overrides the preset thickness, or defines a constant-Δn element on its own.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_path_lambda0: Option<f64>,
    #[serde(default, skip_serializing_if = "is_constant")]
    pub noise_model: NoiseModel,
}

impl NoiseModel {
    pub fn name(self) -> &'static str {
        match self {
            NoiseModel::Constant => "constant",
            NoiseModel::Demo => "demo",
        }
    }
}

fn is_constant(m: &NoiseModel) -> bool {
    *m == NoiseModel::Constant
}

impl SideSpec {
    pub fn is_empty(&self) -> bool {
        *self == SideSpec::default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    Alice,
    Bob,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariableName {
    Slope,
    Thickness,
}

impl SideName {
    pub fn name(self) -> &'static str {
        match self {
            SideName::Alice => "alice",
            SideName::Bob => "bob",
        }
    }
}

impl VariableName {
    pub fn name(self) -> &'static str {
        match self {
            VariableName::Slope => "slope",
            VariableName::Thickness => "thickness",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    pub name: String,
    /// Bell state name: PhiPlus, PhiMinus, PsiPlus, PsiMinus.
    pub target: String,
    pub side: SideName,
    pub variable: VariableName,
    pub start_lambda0: f64,
    pub stop_lambda0: f64,
    pub step_lambda0: f64,
    #[serde(default, skip_serializing_if = "SideSpec::is_empty")]
    pub alice: SideSpec,
    #[serde(default, skip_serializing_if = "SideSpec::is_empty")]
    pub bob: SideSpec,
}

/// Index polynomials per element preset, read from `--dispersion`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionEntry {
    #[serde(default = "default_lambda0_nm")]
    pub reference_wavelength_nm: f64,
    pub n_h: Vec<f64>,
    pub n_v: Vec<f64>,
}

pub type DispersionFile = BTreeMap<String, DispersionEntry>;

pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })
}

pub fn parse_dispersion(text: &str, origin: &str) -> Result<DispersionFile, CliError> {
    let file: DispersionFile = toml::from_str(text).map_err(|e| CliError::Parse {
        origin: origin.to_string(),
        message: e.to_string(),
    })?;
    for name in file.keys() {
        if ElementPreset::from_name(name).is_none() {
            return Err(CliError::Config(format!(
                "{origin}: [{name}] is not an element preset (known: {})",
                preset_names()
            )));
        }
    }
    Ok(file)
}

fn preset_names() -> String {
    ElementPreset::ALL.map(|p| p.name()).join(", ")
}

/// Core configurations a run file describes.
#[derive(Debug, Clone, PartialEq)]
pub struct Resolved {
    /// One entry per teleportation block and input state.
    pub scenarios: Vec<ScenarioConfig>,
    pub input_labels: Vec<String>,
    pub sweeps: Vec<SweepSpec>,
}

pub fn resolve(cfg: &RunConfig, dispersion: Option<&DispersionFile>) -> Result<Resolved, CliError> {
    if cfg.teleportation.is_empty() && cfg.sweep.is_empty() {
        return Err(CliError::Config("config has neither [[teleportation]] nor [[sweep]] blocks".into()));
    }
    if !(cfg.lambda0_nm > 0.0) {
        return Err(CliError::Config(format!("lambda0_nm must be positive, got {}", cfg.lambda0_nm)));
    }
    let lambda0 = cfg.lambda0_nm / 1e9;
    let spectrum = SpectrumConfig {
        alice: mixture(&cfg.spectrum.alice, "spectrum.alice")?,
        bob: mixture(&cfg.spectrum.bob, "spectrum.bob")?,
        grid_points: cfg.grid.points,
        span_sigmas: cfg.grid.span_sigmas,
    };
    spectrum.build().map_err(|e| CliError::Config(format!("spectrum/grid: {e}")))?;
    let ctx = Context { lambda0, dispersion };

    let mut scenarios = Vec::new();
    let mut input_labels = Vec::new();
    for (i, block) in cfg.teleportation.iter().enumerate() {
        let field = format!("teleportation[{i}] ({})", block.name);
        let alice = ctx.side(&block.alice, &format!("{field}.alice"))?;
        let bob = ctx.side(&block.bob, &format!("{field}.bob"))?;
        let mut inputs = Vec::new();
        for name in &block.inputs {
            let q = InputQubit::from_name(name).ok_or_else(|| {
                CliError::Config(format!("{field}.inputs: unknown input {name:?} (known: +, -, R, L, H, V)"))
            })?;
            inputs.push((name.clone(), q));
        }
        for c in &block.custom_inputs {
            let q = InputQubit::new(Complex64::new(c.alpha_re, c.alpha_im), Complex64::new(c.beta_re, c.beta_im))
                .map_err(|e| CliError::Config(format!("{field}.custom_inputs ({}): {e}", c.label)))?;
            inputs.push((c.label.clone(), q));
        }
        if inputs.is_empty() {
            return Err(CliError::Config(format!("{field}: no inputs given")));
        }
        for (label, input) in inputs {
            scenarios.push(ScenarioConfig {
                name: block.name.clone(),
                input,
                alice: alice.clone(),
                bob: bob.clone(),
                spectrum: spectrum.clone(),
                lambda0,
            });
            input_labels.push(label);
        }
    }

    let mut sweeps = Vec::new();
    for (i, block) in cfg.sweep.iter().enumerate() {
        let field = format!("sweep[{i}] ({})", block.name);
        let target = BellState::from_name(&block.target).ok_or_else(|| {
            CliError::Config(format!(
                "{field}.target: unknown Bell state {:?} (known: PhiPlus, PhiMinus, PsiPlus, PsiMinus)",
                block.target
            ))
        })?;
        let base = PurificationConfig {
            name: block.name.clone(),
            target,
            alice: ctx.side(&block.alice, &format!("{field}.alice"))?,
            bob: ctx.side(&block.bob, &format!("{field}.bob"))?,
            spectrum: spectrum.clone(),
            lambda0,
        };
        let (side, swept) = match block.side {
            SideName::Alice => (Photon::Alice, &base.alice),
            SideName::Bob => (Photon::Bob, &base.bob),
        };
        let variable = match block.variable {
            VariableName::Slope => SweepVariable::Slope,
            VariableName::Thickness => SweepVariable::Thickness,
        };
        if variable == SweepVariable::Thickness && swept.noise.is_none() {
            return Err(CliError::Config(format!("{field}: a thickness sweep needs a noise element on the swept side")));
        }
        let values = stepped(block.start_lambda0, block.stop_lambda0, block.step_lambda0);
        if values.is_empty() {
            return Err(CliError::Config(format!(
                "{field}: empty range {}..{} step {}",
                block.start_lambda0, block.stop_lambda0, block.step_lambda0
            )));
        }
        sweeps.push(SweepSpec {
            name: block.name.clone(),
            base,
            side,
            variable,
            values,
        });
    }
    Ok(Resolved {
        scenarios,
        input_labels,
        sweeps,
    })
}

fn mixture(components: &[ComponentSpec], field: &str) -> Result<GaussianMixtureSpec, CliError> {
    let parts = components
        .iter()
        .map(|c| GaussianComponent::from_wavelength(c.weight, c.center_nm, c.fwhm_nm))
        .collect();
    GaussianMixtureSpec::new(parts).map_err(|e| CliError::Config(format!("{field}: {e}")))
}

struct Context<'a> {
    lambda0: f64,
    dispersion: Option<&'a DispersionFile>,
}

impl Context<'_> {
    fn side(&self, spec: &SideSpec, field: &str) -> Result<SideConfig, CliError> {
        let err = |msg: String| CliError::Config(format!("{field}: {msg}"));
        if spec.slm_pixelated && spec.slm_slope_lambda0.is_none() {
            return Err(err("slm_pixelated needs slm_slope_lambda0".into()));
        }
        let slm = spec.slm_slope_lambda0.map(|slope| SlmSetting {
            slope_lambda0: slope,
            pixelation: spec.slm_pixelated.then(SlmModel::experiment),
        });
        let noise = match (&spec.noise, spec.noise_path_lambda0) {
            (None, None) => {
                if spec.noise_model != NoiseModel::Constant {
                    return Err(err("noise_model without a noise element".into()));
                }
                None
            }
            (None, Some(path)) => {
                if spec.noise_model != NoiseModel::Constant {
                    return Err(err("only element presets carry a demo dispersion".into()));
                }
                Some(BirefringentElement::constant(path, self.lambda0).map_err(|e| err(e.to_string()))?)
            }
            (Some(name), path) => {
                let preset = ElementPreset::from_name(name)
                    .ok_or_else(|| err(format!("unknown noise preset {name:?} (known: {})", preset_names())))?;
                let model = match self.dispersion.and_then(|d| d.get(name)) {
                    Some(entry) => Some(IndexModel {
                        reference_frequency: SPEED_OF_LIGHT / (entry.reference_wavelength_nm / 1e9),
                        n_h: entry.n_h.clone(),
                        n_v: entry.n_v.clone(),
                    }),
                    None => match spec.noise_model {
                        NoiseModel::Constant => None,
                        NoiseModel::Demo => Some(
                            preset
                                .demo_dispersion(self.lambda0)
                                .ok_or_else(|| err(format!("{name} has no demo dispersion")))?,
                        ),
                    },
                };
                let path = path.unwrap_or(preset.path_lambda0());
                Some(BirefringentElement::new(path, self.lambda0, model).map_err(|e| err(e.to_string()))?)
            }
        };
        Ok(SideConfig::new(slm, noise))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "mini"

[spectrum]
alice = [{ center_nm = 780.0, fwhm_nm = 2.0 }]
bob = [{ center_nm = 780.0, fwhm_nm = 3.0 }]

[[teleportation]]
name = "t"
inputs = ["+"]
alice = { slm_slope_lambda0 = 446.0, noise = "yvo4_400" }
"#;

    #[test]
    fn defaults_fill_grid_and_lambda0() {
        let cfg = parse_config(MINIMAL, "mini").unwrap();
        assert_eq!(cfg.grid, GridSpec::default());
        assert_eq!(cfg.lambda0_nm, 780.0);
        let r = resolve(&cfg, None).unwrap();
        assert_eq!(r.scenarios.len(), 1);
        assert_eq!(r.scenarios[0].lambda0, hybrid_teleport::LAMBDA0);
        assert_eq!(r.scenarios[0].alice.noise, Some(ElementPreset::Yvo4_400.constant(hybrid_teleport::LAMBDA0)));
    }

    #[test]
    fn snapshot_round_trips() {
        let cfg = parse_config(MINIMAL, "mini").unwrap();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(parse_config(&text, "again").unwrap(), cfg);
    }

    #[test]
    fn unknown_names_are_config_errors() {
        let bad_input = MINIMAL.replace(r#"["+"]"#, r#"["diagonal"]"#);
        let err = resolve(&parse_config(&bad_input, "x").unwrap(), None).unwrap_err();
        assert!(err.to_string().contains("teleportation[0] (t).inputs"), "{err}");
        let bad_noise = MINIMAL.replace("yvo4_400", "calcite");
        let err = resolve(&parse_config(&bad_noise, "x").unwrap(), None).unwrap_err();
        assert!(err.to_string().contains("calcite"));
    }

    #[test]
    fn dispersion_file_overrides_noise_model() {
        let disp = parse_dispersion("[yvo4_400]\nn_h = [2.2, 0.3]\nn_v = [2.0, 0.1]\n", "d").unwrap();
        let cfg = parse_config(MINIMAL, "mini").unwrap();
        let r = resolve(&cfg, Some(&disp)).unwrap();
        let elem = r.scenarios[0].alice.noise.as_ref().unwrap();
        assert!(elem.is_dispersive());
        assert_eq!(elem.effective_path_lambda0, 400.0);
        assert!(parse_dispersion("[calcite]\nn_h = [1.0]\nn_v = [1.0]\n", "d").is_err());
    }

    #[test]
    fn custom_input_must_be_normalized() {
        let text = MINIMAL.replace(
            r#"inputs = ["+"]"#,
            "custom_inputs = [{ label = \"tilt\", alpha_re = 0.6, beta_re = 0.8 }, { label = \"bad\", alpha_re = 1.0, beta_re = 1.0 }]",
        );
        let err = resolve(&parse_config(&text, "x").unwrap(), None).unwrap_err();
        assert!(err.to_string().contains("custom_inputs (bad)"), "{err}");
    }
}
