//! Result tables and the run manifest.

use hybrid_teleport::protocol::presets::SweepSpec;
use hybrid_teleport::protocol::{ScenarioResult, SweepPoint};
use hybrid_teleport::Photon;
use serde::{Deserialize, Serialize};

use crate::config::{DispersionFile, GridSpec, RunConfig};

/// Best average fidelity reachable without shared entanglement.
pub const CLASSICAL_LIMIT: f64 = 2.0 / 3.0;

pub const RESULTS_HEADER: [&str; 10] = [
    "scenario",
    "input_state",
    "outcome",
    "probability",
    "fidelity_pre_noise",
    "fidelity_final",
    "abs_lambda",
    "concurrence",
    "chsh_max",
    "classical_limit",
];

pub const SWEEPS_HEADER: [&str; 10] = [
    "sweep",
    "target",
    "side",
    "variable",
    "x_lambda0",
    "fidelity",
    "abs_lambda",
    "concurrence",
    "chsh_max",
    "classical_limit",
];

fn num(x: f64) -> String {
    format!("{x}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 fields")
}

/// One row per Bell outcome plus an `average` row per scenario. `abs_lambda`
/// is `|Λ(T_a, T_b)|`; concurrence and CHSH describe the pair at the BSM.
pub fn results_csv(rows: &[(String, ScenarioResult)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(RESULTS_HEADER).expect("in-memory write");
    for (input, res) in rows {
        let shared = [
            num(res.lambdas.after_both.norm()),
            num(res.pair_at_bsm.concurrence),
            num(res.pair_at_bsm.chsh_max),
            num(CLASSICAL_LIMIT),
        ];
        for o in &res.outcomes {
            let head = [
                res.name.clone(),
                input.clone(),
                o.outcome.name().to_string(),
                num(o.probability),
                num(o.fidelity_pre_noise),
                num(o.fidelity_final),
            ];
            w.write_record(head.iter().chain(&shared)).expect("in-memory write");
        }
        let total: f64 = res.outcomes.iter().map(|o| o.probability).sum();
        let head = [
            res.name.clone(),
            input.clone(),
            "average".to_string(),
            num(total),
            num(res.average_fidelity_pre_noise),
            num(res.average_fidelity),
        ];
        w.write_record(head.iter().chain(&shared)).expect("in-memory write");
    }
    finish(w)
}

pub fn sweeps_csv(sweeps: &[(SweepSpec, Vec<SweepPoint>)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEPS_HEADER).expect("in-memory write");
    for (spec, points) in sweeps {
        let side = match spec.side {
            Photon::Alice => "alice",
            Photon::Bob => "bob",
            Photon::Teleportee => "teleportee",
        };
        let variable = format!("{:?}", spec.variable).to_lowercase();
        for p in points {
            w.write_record([
                spec.name.clone(),
                spec.base.target.name().to_string(),
                side.to_string(),
                variable.clone(),
                num(p.x),
                num(p.fidelity),
                num(p.lambda.norm()),
                num(p.concurrence),
                num(p.chsh_max),
                num(CLASSICAL_LIMIT),
            ])
            .expect("in-memory write");
        }
    }
    finish(w)
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    /// `preset:<name>` or the config path.
    pub source: String,
    pub config: RunConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion: Option<DispersionFile>,
    pub timestamp: String,
    pub grid: GridSpec,
    pub outputs: Vec<String>,
    pub version: String,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
