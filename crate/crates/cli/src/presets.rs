//! Built-in scenario files.

use crate::config::{parse_config, RunConfig, SideSpec};

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: &'static str,
}

pub const PRESETS: [Preset; 4] = [
    Preset {
        name: "fig3",
        summary: "teleportation of +, -, R, L under noise on A, B and A+B, SLMs on and off",
        source: include_str!("../presets/fig3.toml"),
    },
    Preset {
        name: "figS2",
        summary: "purification sweeps of the four Bell states, Alice's slope and Bob's quartz stack",
        source: include_str!("../presets/figS2.toml"),
    },
    Preset {
        name: "figS2_dispersive",
        summary: "Alice's slope sweep with the illustrative quadratic YVO4 dispersion",
        source: include_str!("../presets/figS2_dispersive.toml"),
    },
    Preset {
        name: "figS4",
        summary: "PM-fiber dephasing on Bob's side, SLM slope swept around 1063 λ0",
        source: include_str!("../presets/figS4.toml"),
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

pub fn load(preset: &Preset) -> RunConfig {
    parse_config(preset.source, preset.name).expect("built-in preset parses")
}

fn side(label: &str, s: &SideSpec) -> Option<String> {
    let mut parts = Vec::new();
    if let Some(slope) = s.slm_slope_lambda0 {
        parts.push(format!("SLM slope {slope} λ0{}", if s.slm_pixelated { " (pixelated)" } else { "" }));
    }
    match (&s.noise, s.noise_path_lambda0) {
        (Some(name), path) => {
            let path = path
                .or_else(|| hybrid_teleport::optics::ElementPreset::from_name(name).map(|p| p.path_lambda0()))
                .unwrap_or(f64::NAN);
            parts.push(format!("{name} {path} λ0 {}", s.noise_model.name()));
        }
        (None, Some(path)) => parts.push(format!("constant element {path} λ0")),
        (None, None) => {}
    }
    (!parts.is_empty()).then(|| format!("{label}: {}", parts.join(", ")))
}

/// Parameter dump of a preset, one line per block.
pub fn describe(preset: &Preset) -> String {
    let cfg = load(preset);
    let mut out = format!("{}  {}\n", preset.name, preset.summary);
    let spectrum = |c: &[crate::config::ComponentSpec]| {
        c.iter()
            .map(|g| format!("{} nm FWHM at {} nm", g.fwhm_nm, g.center_nm))
            .collect::<Vec<_>>()
            .join(" + ")
    };
    out += &format!(
        "    λ0 {} nm; spectra alice {}, bob {}; grid {} points over ±{}σ\n",
        cfg.lambda0_nm,
        spectrum(&cfg.spectrum.alice),
        spectrum(&cfg.spectrum.bob),
        cfg.grid.points,
        cfg.grid.span_sigmas
    );
    for t in &cfg.teleportation {
        let sides: Vec<String> = [side("alice", &t.alice), side("bob", &t.bob)].into_iter().flatten().collect();
        let sides = if sides.is_empty() { "no noise, no SLM".to_string() } else { sides.join("; ") };
        out += &format!("    {} [{}]: {}\n", t.name, t.inputs.join(" "), sides);
    }
    for s in &cfg.sweep {
        let sides: Vec<String> = [side("alice", &s.alice), side("bob", &s.bob)].into_iter().flatten().collect();
        out += &format!(
            "    {} target {}: {} {} {}..{} step {} λ0; {}\n",
            s.name,
            s.target,
            s.side.name(),
            s.variable.name(),
            s.start_lambda0,
            s.stop_lambda0,
            s.step_lambda0,
            sides.join("; ")
        );
    }
    out
}
