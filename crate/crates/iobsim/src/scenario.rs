//! Scenario data model, the device-class catalog, and pre-flight
//! validation.
//!
//! Catalog sense-model coefficients are calibration constants chosen so
//! each class lands in its published lifetime band. They are not measured
//! values; the `catalog_note` on each class says so.

use std::collections::HashMap;

use thiserror::Error;

use crate::energy::{
    self, BatterySpec, ComputeModel, EnergyPerBit, HarvesterSpec, PowerDraw,
    SensePowerModel,
};
use crate::link::{allocate_tdma, LinkError, LinkTech, Placement};

/// Standalone leaves condense raw data locally and transmit a small
/// result stream; this is the default condensation ratio.
pub const DEFAULT_RESULT_RATE_FRACTION: f64 = 0.01;

/// Default standalone-CPU cost per raw bit.
pub const DEFAULT_LOCAL_COMPUTE_J_PER_BIT: f64 = 10e-12;

/// Indoor harvesting band upper edge; configured harvesters above a
/// node's draw beyond this are worth a warning.
pub const HARVEST_BAND_MAX_W: f64 = 200e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("node `{node}`: {source}")]
    Link {
        node: String,
        #[source]
        source: LinkError,
    },
    #[error("{0}")]
    Invalid(String),
}

/// One entry in the Fig.-2-style device catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceClass {
    pub name: String,
    pub sense_model: SensePowerModel,
    pub typical_raw_rate_bps: f64,
    pub default_compression: f64,
    pub catalog_note: String,
}

const CALIBRATION_NOTE: &str = "calibration constants, not measured data";

fn class(
    name: &str,
    static_w: f64,
    sense_j_per_bit: f64,
    rate_bps: f64,
    compression: f64,
    note: &str,
) -> DeviceClass {
    DeviceClass {
        name: name.into(),
        sense_model: SensePowerModel::new(static_w, sense_j_per_bit).expect("constant"),
        typical_raw_rate_bps: rate_bps,
        default_compression: compression,
        catalog_note: format!("{note}; {CALIBRATION_NOTE}"),
    }
}

/// Built-in device classes with calibration sense models.
pub fn default_catalog() -> Vec<DeviceClass> {
    vec![
        class(
            "biopotential-patch",
            2e-6,
            0.3e-9,
            10e3,
            1.0,
            "ECG/EMG patch, tens of uW budget",
        ),
        class(
            "smart-ring-fitness",
            10e-6,
            0.3e-9,
            5e3,
            1.0,
            "ring or fitness tracker, activity and vitals",
        ),
        class(
            "earbud-audio",
            4e-3,
            1e-9,
            256e3,
            1.0,
            "audio capture/playback earbud",
        ),
        class(
            "voice-pendant",
            2e-3,
            1e-9,
            64e3,
            1.0,
            "voice-command pendant or pin",
        ),
        class(
            "camera-video",
            50e-3,
            0.5e-9,
            10e6,
            0.2,
            "first-person camera, MJPEG-class compression",
        ),
    ]
}

pub fn find_class<'a>(catalog: &'a [DeviceClass], name: &str) -> Option<&'a DeviceClass> {
    catalog.iter().find(|c| c.name == name)
}

/// How a node is built: its own CPU and radio, or a bare sensor
/// offloading to the hub.
#[derive(Debug, Clone, PartialEq)]
pub enum Architecture {
    /// Full node: local compute condenses raw data down to a result
    /// stream that goes out over the node's own radio.
    Standalone {
        result_rate_bps: f64,
        local_compute: ComputeModel,
    },
    /// Leaf node: optional in-sensor analytics, then the (compressed)
    /// stream goes to the on-body hub.
    HubOffload { isa: ComputeModel },
}

impl Architecture {
    pub fn default_standalone(raw_rate_bps: f64) -> Architecture {
        Architecture::Standalone {
            result_rate_bps: DEFAULT_RESULT_RATE_FRACTION * raw_rate_bps,
            local_compute: ComputeModel::new(0.0, DEFAULT_LOCAL_COMPUTE_J_PER_BIT, 1.0)
                .expect("constant"),
        }
    }

    pub fn default_hub_offload(compression: f64) -> Architecture {
        Architecture::HubOffload {
            isa: ComputeModel::new(0.0, 0.0, compression).expect("validated upstream"),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Architecture::Standalone { .. } => "standalone",
            Architecture::HubOffload { .. } => "hub-offload",
        }
    }
}

/// One leaf wearable.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSpec {
    pub id: String,
    pub class: String,
    pub raw_rate_bps: f64,
    pub architecture: Architecture,
    pub battery: BatterySpec,
    pub harvester: HarvesterSpec,
    pub placement: Placement,
    pub link: String,
}

/// Per-term power split for one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerBreakdown {
    pub sense: PowerDraw,
    pub compute: PowerDraw,
    pub comm: PowerDraw,
}

impl PowerBreakdown {
    pub fn total(&self) -> PowerDraw {
        self.sense + self.compute + self.comm
    }
}

impl NodeSpec {
    /// Rate this node puts on its link.
    pub fn tx_rate_bps(&self) -> f64 {
        match &self.architecture {
            Architecture::Standalone { result_rate_bps, .. } => *result_rate_bps,
            Architecture::HubOffload { isa } => isa.compression_factor * self.raw_rate_bps,
        }
    }

    fn compute_energy_per_raw_bit(&self) -> EnergyPerBit {
        match &self.architecture {
            Architecture::Standalone { local_compute, .. } => {
                local_compute.local_compute_energy_per_bit
            }
            Architecture::HubOffload { isa } => isa.isa_energy_per_bit,
        }
    }

    /// Total node power as sense + compute + comm terms.
    pub fn power_breakdown(
        &self,
        sense_model: &SensePowerModel,
        link: &LinkTech,
    ) -> Result<PowerBreakdown, ScenarioError> {
        let comm = link
            .comm_power(self.tx_rate_bps())
            .map_err(|source| ScenarioError::Link {
                node: self.id.clone(),
                source,
            })?;
        Ok(PowerBreakdown {
            sense: energy::sense_power(sense_model, self.raw_rate_bps),
            compute: self.compute_energy_per_raw_bit().power_at(self.raw_rate_bps),
            comm,
        })
    }
}

/// The on-body hub (the single compute-capable wearable).
#[derive(Debug, Clone, PartialEq)]
pub struct HubSpec {
    pub id: String,
    pub battery: BatterySpec,
    pub base_power: PowerDraw,
    pub hub_compute_energy_per_bit: EnergyPerBit,
}

impl HubSpec {
    /// 5000 mAh @ 3.8 V with a 150 mW floor, which lands hub life near
    /// daily charging.
    pub fn default_hub() -> HubSpec {
        HubSpec {
            id: "hub".into(),
            battery: BatterySpec::new(5000.0, 3.8).expect("constant"),
            base_power: PowerDraw::new(150e-3).expect("constant"),
            hub_compute_energy_per_bit: EnergyPerBit::new(1e-12).expect("constant"),
        }
    }
}

/// A full experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub schema_version: u32,
    pub nodes: Vec<NodeSpec>,
    pub hub: HubSpec,
    pub links: Vec<LinkTech>,
    pub catalog: Vec<DeviceClass>,
    pub duration_s: f64,
    pub epoch_s: f64,
    pub seed: u64,
    /// Uniform traffic jitter amplitude as a fraction of the nominal
    /// rate, applied per epoch. 0 disables jitter (the default; the
    /// projections assume constant-rate traffic).
    pub jitter_frac: f64,
}

impl Scenario {
    pub fn find_link(&self, name: &str) -> Option<&LinkTech> {
        self.links.iter().find(|l| l.name == name)
    }

    pub fn find_node(&self, id: &str) -> Option<&NodeSpec> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn class_of(&self, node: &NodeSpec) -> Option<&DeviceClass> {
        find_class(&self.catalog, &node.class)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// One validation finding, with a machine-readable code and the config
/// path it refers to.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: &'static str,
    pub path: String,
    pub message: String,
}

impl Diagnostic {
    fn error(code: &'static str, path: String, message: String) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            code,
            path,
            message,
        }
    }

    fn warning(code: &'static str, path: String, message: String) -> Diagnostic {
        Diagnostic {
            severity: Severity::Warning,
            code,
            path,
            message,
        }
    }
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}] at {}: {}", self.code, self.path, self.message)
    }
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(|d| d.severity == Severity::Error)
}

/// Full pre-flight check: structural invariants, link admission per
/// channel, and harvest-band warnings. Returns diagnostics instead of
/// failing on the first problem.
pub fn validate(s: &Scenario) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    if s.duration_s.is_nan() || s.duration_s <= 0.0 {
        diags.push(Diagnostic::error(
            "bad-duration",
            "duration".into(),
            format!("duration must be positive, got {} s", s.duration_s),
        ));
    }
    if s.epoch_s.is_nan() || s.epoch_s <= 0.0 {
        diags.push(Diagnostic::error(
            "bad-epoch",
            "epoch".into(),
            format!("epoch must be positive, got {} s", s.epoch_s),
        ));
    }
    if !(0.0..1.0).contains(&s.jitter_frac) {
        diags.push(Diagnostic::error(
            "bad-jitter",
            "jitter".into(),
            format!("jitter fraction must be in [0, 1), got {}", s.jitter_frac),
        ));
    }

    for (i, link) in s.links.iter().enumerate() {
        if let Err(e) = link.validate() {
            diags.push(Diagnostic::error(
                "bad-link",
                format!("links[{i}]"),
                e.to_string(),
            ));
        }
    }

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, node) in s.nodes.iter().enumerate() {
        let path = format!("nodes[{i}]");
        if let Some(prev) = seen.insert(node.id.as_str(), i) {
            diags.push(Diagnostic::error(
                "duplicate-id",
                path.clone(),
                format!("node id `{}` already used at nodes[{prev}]", node.id),
            ));
        }
        if node.raw_rate_bps.is_nan() || node.raw_rate_bps <= 0.0 {
            diags.push(Diagnostic::error(
                "bad-rate",
                format!("{path}.raw_rate"),
                format!("raw_rate must be positive, got {} bps", node.raw_rate_bps),
            ));
        }
        if let Architecture::Standalone { result_rate_bps, .. } = &node.architecture {
            if *result_rate_bps > node.raw_rate_bps {
                diags.push(Diagnostic::error(
                    "bad-result-rate",
                    format!("{path}.architecture.result_rate"),
                    format!(
                        "result_rate {} bps exceeds raw_rate {} bps",
                        result_rate_bps, node.raw_rate_bps
                    ),
                ));
            }
        }
        if s.class_of(node).is_none() {
            diags.push(Diagnostic::error(
                "unknown-class",
                format!("{path}.class"),
                format!("unknown device class `{}`", node.class),
            ));
        }
        let Some(link) = s.find_link(&node.link) else {
            diags.push(Diagnostic::error(
                "unknown-link",
                format!("{path}.link"),
                format!("unknown link `{}`", node.link),
            ));
            continue;
        };
        // harvest-band warning: a harvester is configured but the node
        // draws more than indoor harvesting can plausibly supply
        if let Some(class) = s.class_of(node) {
            if let Ok(split) = node.power_breakdown(&class.sense_model, link) {
                let harvest = node.harvester.harvest_power.watts();
                if harvest > 0.0 && split.total().watts() > HARVEST_BAND_MAX_W {
                    diags.push(Diagnostic::warning(
                        "harvest-band",
                        format!("{path}.harvester"),
                        format!(
                            "node draws {} which is above the {} indoor harvesting band",
                            split.total(),
                            crate::units::format_power(HARVEST_BAND_MAX_W)
                        ),
                    ));
                }
            }
        }
    }

    // per-link admission pre-flight
    for (li, link) in s.links.iter().enumerate() {
        let demands: Vec<(String, f64)> = s
            .nodes
            .iter()
            .filter(|n| n.link == link.name)
            .map(|n| (n.id.clone(), n.tx_rate_bps()))
            .collect();
        if let Err(e) = allocate_tdma(link, &demands) {
            diags.push(Diagnostic::error(
                "channel-overload",
                format!("links[{li}]"),
                e.to_string(),
            ));
        }
    }

    diags
}

/// A ready-to-run scenario with every catalog class as one hub-offload
/// node on a shared Wi-R link. This mirrors the default projection setup.
pub fn catalog_scenario() -> Scenario {
    let catalog = default_catalog();
    let wir = LinkTech::wir_default();
    let nodes = catalog
        .iter()
        .map(|c| NodeSpec {
            id: format!("{}-0", c.name),
            class: c.name.clone(),
            raw_rate_bps: c.typical_raw_rate_bps,
            architecture: Architecture::default_hub_offload(c.default_compression),
            battery: energy::default_leaf_battery(),
            harvester: HarvesterSpec::NONE,
            placement: Placement::on_body("unspecified"),
            link: wir.name.clone(),
        })
        .collect();
    Scenario {
        schema_version: 1,
        nodes,
        hub: HubSpec::default_hub(),
        links: vec![wir, LinkTech::ble_default()],
        catalog,
        duration_s: 1000.0 * 3600.0,
        epoch_s: 1.0,
        seed: 0,
        jitter_frac: 0.0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_contents() {
        let cat = default_catalog();
        assert!(cat.len() >= 5);
        let bio = find_class(&cat, "biopotential-patch").unwrap();
        assert_eq!(bio.typical_raw_rate_bps, 10e3);
        let video = find_class(&cat, "camera-video").unwrap();
        assert!(video.default_compression < 1.0);
        for c in &cat {
            assert!(c.sense_model.static_power.watts() >= 0.0);
            assert!(c.sense_model.energy_per_sensed_bit.joules_per_bit() >= 0.0);
            assert!(c.typical_raw_rate_bps > 0.0);
            assert!(c.default_compression > 0.0 && c.default_compression <= 1.0);
        }
    }

    #[test]
    fn catalog_is_deterministic() {
        assert_eq!(default_catalog(), default_catalog());
    }

    #[test]
    fn default_scenario_validates_clean() {
        let s = catalog_scenario();
        let diags = validate(&s);
        assert!(diags.is_empty(), "{diags:?}");
    }

    #[test]
    fn node_power_examples() {
        let s = catalog_scenario();
        let wir = s.find_link("wir").unwrap();

        // hub-offload biopotential: 5 uW sense + 1 uW comm = 6 uW
        let bio = s.find_node("biopotential-patch-0").unwrap();
        let class = s.class_of(bio).unwrap();
        let split = bio.power_breakdown(&class.sense_model, wir).unwrap();
        assert!((split.total().watts() - 6e-6).abs() < 1e-12);
        assert_eq!(split.compute.watts(), 0.0);

        // hub-offload video: 55 mW sense + 200 uW comm (2 Mbps after 0.2x)
        let video = s.find_node("camera-video-0").unwrap();
        let class = s.class_of(video).unwrap();
        let split = video.power_breakdown(&class.sense_model, wir).unwrap();
        assert!((split.comm.watts() - 200e-6).abs() < 1e-12);
        assert!((split.sense.watts() - 55e-3).abs() < 1e-9);

        // all-zero models -> 0 W
        let zero_sense = SensePowerModel::new(0.0, 0.0).unwrap();
        let mut link = LinkTech::wir_default();
        link.static_power = PowerDraw::ZERO;
        let node = NodeSpec {
            id: "z".into(),
            class: "biopotential-patch".into(),
            raw_rate_bps: 1e3,
            architecture: Architecture::HubOffload {
                isa: ComputeModel::new(0.0, 0.0, 1.0).unwrap(),
            },
            battery: energy::default_leaf_battery(),
            harvester: HarvesterSpec::NONE,
            placement: Placement::on_body("chest"),
            link: "wir".into(),
        };
        // energy_per_bit cannot be zero on a valid link, so zero the rate path
        let mut zero_node = node.clone();
        zero_node.raw_rate_bps = 0.0;
        let split = zero_node.power_breakdown(&zero_sense, &link).unwrap();
        assert_eq!(split.total().watts(), 0.0);
    }

    #[test]
    fn compression_identity_keeps_rate() {
        let s = catalog_scenario();
        let audio = s.find_node("earbud-audio-0").unwrap();
        // default audio compression is 1.0, so tx rate equals raw rate
        assert_eq!(audio.tx_rate_bps(), audio.raw_rate_bps);
    }

    #[test]
    fn overload_diagnosed() {
        let mut s = catalog_scenario();
        s.nodes = vec![
            NodeSpec {
                id: "v1".into(),
                raw_rate_bps: 3e6,
                ..s.nodes.last().unwrap().clone()
            },
            NodeSpec {
                id: "v2".into(),
                raw_rate_bps: 2e6,
                ..s.nodes.last().unwrap().clone()
            },
        ];
        // make both pass-through so demands are 3 + 2 Mbps on 4 Mbps
        for n in &mut s.nodes {
            n.architecture = Architecture::default_hub_offload(1.0);
        }
        let diags = validate(&s);
        assert!(diags.iter().any(|d| d.code == "channel-overload"));
    }

    #[test]
    fn harvest_band_warning() {
        let mut s = catalog_scenario();
        // earbud draws ~4.28 mW; give it a 200 uW harvester
        let idx = s
            .nodes
            .iter()
            .position(|n| n.class == "earbud-audio")
            .unwrap();
        s.nodes[idx].harvester = HarvesterSpec::new(200e-6).unwrap();
        let diags = validate(&s);
        assert!(diags
            .iter()
            .any(|d| d.code == "harvest-band" && d.severity == Severity::Warning));
        // warnings are not fatal
        assert!(!has_errors(&diags));
    }

    #[test]
    fn unknown_link_diagnosed() {
        let mut s = catalog_scenario();
        s.nodes[0].link = "wir2".into();
        let diags = validate(&s);
        let d = diags.iter().find(|d| d.code == "unknown-link").unwrap();
        assert!(d.message.contains("wir2"));
        assert!(d.path.contains("nodes[0]"));
    }
}
