//! Scenario file parsing and serialization.
//!
//! The on-disk format is TOML (see `docs/scenario-format.md` for the
//! schema and a full example). Quantities may be written either as bare
//! SI numbers or as strings with a unit suffix (`"10 kbps"`, `"2 uW"`,
//! `"0.3 nJ/bit"`, `"1000 mAh"`, `"3 V"`, `"1000 h"`). Serialization
//! always emits bare SI numbers, so `parse(serialize(s)) == s`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::energy::{BatterySpec, ComputeModel, EnergyPerBit, HarvesterSpec, PowerDraw, SensePowerModel};
use crate::link::{LinkTech, Placement, Propagation};
use crate::scenario::{
    default_catalog, find_class, has_errors, validate, Architecture, DeviceClass,
    Diagnostic, HubSpec, NodeSpec, Scenario, DEFAULT_LOCAL_COMPUTE_J_PER_BIT,
    DEFAULT_RESULT_RATE_FRACTION,
};
use crate::units::{self, UnitError};

pub const SCHEMA_VERSION: u32 = 1;

const DEFAULT_DURATION_S: f64 = 1000.0 * 3600.0;
const DEFAULT_EPOCH_S: f64 = 1.0;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("scenario syntax error: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("at {path}: {message}")]
    Invalid { path: String, message: String },
    #[error("scenario is invalid:\n{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Diagnostics(Vec<Diagnostic>),
}

impl ParseError {
    fn at(path: impl Into<String>, message: impl Into<String>) -> ParseError {
        ParseError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// A quantity that is either a bare SI number or a suffixed string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Qty {
    Num(f64),
    Str(String),
}

impl Qty {
    fn resolve(
        &self,
        path: &str,
        parse: fn(&str) -> Result<f64, UnitError>,
    ) -> Result<f64, ParseError> {
        match self {
            Qty::Num(v) => Ok(*v),
            Qty::Str(s) => parse(s).map_err(|e| ParseError::at(path, e.to_string())),
        }
    }
}

fn opt_qty(
    q: &Option<Qty>,
    path: &str,
    parse: fn(&str) -> Result<f64, UnitError>,
    default: f64,
) -> Result<f64, ParseError> {
    match q {
        Some(q) => q.resolve(path, parse),
        None => Ok(default),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(skip_serializing_if = "Option::is_none")]
    schema_version: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    duration: Option<Qty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epoch: Option<Qty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    jitter: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hub: Option<RawHub>,
    #[serde(skip_serializing_if = "Option::is_none")]
    links: Option<Vec<RawLink>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<RawClass>>,
    #[serde(default)]
    nodes: Vec<RawNode>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHub {
    #[serde(skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    battery: Option<RawBattery>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_power: Option<Qty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    compute_energy_per_bit: Option<Qty>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBattery {
    capacity: Qty,
    voltage: Qty,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLink {
    name: String,
    energy_per_bit: Qty,
    #[serde(skip_serializing_if = "Option::is_none")]
    static_power: Option<Qty>,
    max_rate: Qty,
    propagation: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bubble_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    radius_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    carrier_limit_hz: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClass {
    name: String,
    sense_static: Qty,
    sense_energy_per_bit: Qty,
    typical_rate: Qty,
    #[serde(skip_serializing_if = "Option::is_none")]
    compression: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    id: String,
    class: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    raw_rate: Option<Qty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    link: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    placement: Option<RawPlacement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    battery: Option<RawBattery>,
    #[serde(skip_serializing_if = "Option::is_none")]
    harvest: Option<Qty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    architecture: Option<RawArch>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlacement {
    #[serde(skip_serializing_if = "Option::is_none")]
    on_body: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    off_body_m: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArch {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    compression: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    isa_energy_per_bit: Option<Qty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    local_compute_energy_per_bit: Option<Qty>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result_rate: Option<Qty>,
}

fn battery(raw: &RawBattery, path: &str) -> Result<BatterySpec, ParseError> {
    let cap = raw
        .capacity
        .resolve(&format!("{path}.capacity"), units::parse_charge_mah)?;
    let v = raw
        .voltage
        .resolve(&format!("{path}.voltage"), units::parse_voltage)?;
    BatterySpec::new(cap, v).map_err(|e| ParseError::at(path, e.to_string()))
}

fn link(raw: &RawLink, path: &str) -> Result<LinkTech, ParseError> {
    let e_bit = raw
        .energy_per_bit
        .resolve(&format!("{path}.energy_per_bit"), units::parse_energy_per_bit)?;
    let static_w = opt_qty(
        &raw.static_power,
        &format!("{path}.static_power"),
        units::parse_power,
        0.0,
    )?;
    let max_rate = raw
        .max_rate
        .resolve(&format!("{path}.max_rate"), units::parse_rate)?;
    let (propagation, default_carrier) = match raw.propagation.as_str() {
        "body-contained" => (
            Propagation::BodyContained {
                bubble_m: raw.bubble_m.unwrap_or(0.1),
            },
            crate::link::EQS_CARRIER_LIMIT_HZ,
        ),
        "radiative" => (
            Propagation::Radiative {
                radius_m: raw.radius_m.unwrap_or(7.5),
            },
            2.4e9,
        ),
        other => {
            return Err(ParseError::at(
                format!("{path}.propagation"),
                format!("expected `body-contained` or `radiative`, got `{other}`"),
            ))
        }
    };
    let link = LinkTech {
        name: raw.name.clone(),
        energy_per_bit: EnergyPerBit::new(e_bit)
            .map_err(|e| ParseError::at(format!("{path}.energy_per_bit"), e.to_string()))?,
        static_power: PowerDraw::new(static_w)
            .map_err(|e| ParseError::at(format!("{path}.static_power"), e.to_string()))?,
        max_rate_bps: max_rate,
        propagation,
        carrier_limit_hz: raw.carrier_limit_hz.unwrap_or(default_carrier),
    };
    link.validate()
        .map_err(|e| ParseError::at(path, e.to_string()))?;
    Ok(link)
}

fn device_class(raw: &RawClass, path: &str) -> Result<DeviceClass, ParseError> {
    let static_w = raw
        .sense_static
        .resolve(&format!("{path}.sense_static"), units::parse_power)?;
    let e_bit = raw.sense_energy_per_bit.resolve(
        &format!("{path}.sense_energy_per_bit"),
        units::parse_energy_per_bit,
    )?;
    let rate = raw
        .typical_rate
        .resolve(&format!("{path}.typical_rate"), units::parse_rate)?;
    if rate.is_nan() || rate <= 0.0 {
        return Err(ParseError::at(
            format!("{path}.typical_rate"),
            format!("rate must be positive, got {rate}"),
        ));
    }
    let compression = raw.compression.unwrap_or(1.0);
    if !(compression > 0.0 && compression <= 1.0) {
        return Err(ParseError::at(
            format!("{path}.compression"),
            format!("compression must be in (0, 1], got {compression}"),
        ));
    }
    Ok(DeviceClass {
        name: raw.name.clone(),
        sense_model: SensePowerModel::new(static_w, e_bit)
            .map_err(|e| ParseError::at(path, e.to_string()))?,
        typical_raw_rate_bps: rate,
        default_compression: compression,
        catalog_note: raw.note.clone().unwrap_or_default(),
    })
}

fn architecture(
    raw: Option<&RawArch>,
    path: &str,
    class: &DeviceClass,
    raw_rate_bps: f64,
) -> Result<Architecture, ParseError> {
    let Some(raw) = raw else {
        return Ok(Architecture::default_hub_offload(class.default_compression));
    };
    let isa = opt_qty(
        &raw.isa_energy_per_bit,
        &format!("{path}.isa_energy_per_bit"),
        units::parse_energy_per_bit,
        0.0,
    )?;
    match raw.kind.as_str() {
        "hub-offload" => {
            let local = opt_qty(
                &raw.local_compute_energy_per_bit,
                &format!("{path}.local_compute_energy_per_bit"),
                units::parse_energy_per_bit,
                0.0,
            )?;
            let compression = raw.compression.unwrap_or(class.default_compression);
            Ok(Architecture::HubOffload {
                isa: ComputeModel::new(isa, local, compression)
                    .map_err(|e| ParseError::at(path, e.to_string()))?,
            })
        }
        "standalone" => {
            let local = opt_qty(
                &raw.local_compute_energy_per_bit,
                &format!("{path}.local_compute_energy_per_bit"),
                units::parse_energy_per_bit,
                DEFAULT_LOCAL_COMPUTE_J_PER_BIT,
            )?;
            let result_rate = opt_qty(
                &raw.result_rate,
                &format!("{path}.result_rate"),
                units::parse_rate,
                DEFAULT_RESULT_RATE_FRACTION * raw_rate_bps,
            )?;
            let compression = raw.compression.unwrap_or(1.0);
            Ok(Architecture::Standalone {
                result_rate_bps: result_rate,
                local_compute: ComputeModel::new(isa, local, compression)
                    .map_err(|e| ParseError::at(path, e.to_string()))?,
            })
        }
        other => Err(ParseError::at(
            format!("{path}.kind"),
            format!("expected `hub-offload` or `standalone`, got `{other}`"),
        )),
    }
}

/// Parse without the final validation pass: syntax, units, defaults.
/// Returned scenarios may still carry reference or admission errors;
/// use [`validate`] to surface them as diagnostics.
pub fn parse_scenario_lenient(text: &str) -> Result<Scenario, ParseError> {
    let raw: RawScenario = toml::from_str(text)?;

    if let Some(v) = raw.schema_version {
        if v != SCHEMA_VERSION {
            return Err(ParseError::at(
                "schema_version",
                format!("unsupported schema version {v}, expected {SCHEMA_VERSION}"),
            ));
        }
    }

    let duration_s = opt_qty(&raw.duration, "duration", units::parse_duration_s, DEFAULT_DURATION_S)?;
    let epoch_s = opt_qty(&raw.epoch, "epoch", units::parse_duration_s, DEFAULT_EPOCH_S)?;
    let seed = raw.seed.unwrap_or(0).max(0) as u64;
    let jitter_frac = raw.jitter.unwrap_or(0.0);

    let hub = match &raw.hub {
        None => HubSpec::default_hub(),
        Some(h) => {
            let defaults = HubSpec::default_hub();
            HubSpec {
                id: h.id.clone().unwrap_or(defaults.id),
                battery: match &h.battery {
                    Some(b) => battery(b, "hub.battery")?,
                    None => defaults.battery,
                },
                base_power: PowerDraw::new(opt_qty(
                    &h.base_power,
                    "hub.base_power",
                    units::parse_power,
                    defaults.base_power.watts(),
                )?)
                .map_err(|e| ParseError::at("hub.base_power", e.to_string()))?,
                hub_compute_energy_per_bit: EnergyPerBit::new(opt_qty(
                    &h.compute_energy_per_bit,
                    "hub.compute_energy_per_bit",
                    units::parse_energy_per_bit,
                    defaults.hub_compute_energy_per_bit.joules_per_bit(),
                )?)
                .map_err(|e| ParseError::at("hub.compute_energy_per_bit", e.to_string()))?,
            }
        }
    };

    let links: Vec<LinkTech> = match &raw.links {
        None => vec![LinkTech::wir_default(), LinkTech::ble_default()],
        Some(raws) => raws
            .iter()
            .enumerate()
            .map(|(i, r)| link(r, &format!("links[{i}]")))
            .collect::<Result<_, _>>()?,
    };

    // catalog: built-ins first, user classes override by name or append
    let mut catalog = default_catalog();
    if let Some(raws) = &raw.classes {
        for (i, rc) in raws.iter().enumerate() {
            let dc = device_class(rc, &format!("classes[{i}]"))?;
            match catalog.iter_mut().find(|c| c.name == dc.name) {
                Some(slot) => *slot = dc,
                None => catalog.push(dc),
            }
        }
    }

    let mut nodes = Vec::with_capacity(raw.nodes.len());
    for (i, rn) in raw.nodes.iter().enumerate() {
        let path = format!("nodes[{i}]");
        // class lookup is needed for defaults; unresolved classes are
        // reported here since nothing can be defaulted without one
        let class = find_class(&catalog, &rn.class).ok_or_else(|| {
            ParseError::at(format!("{path}.class"), format!("unknown device class `{}`", rn.class))
        })?;
        let raw_rate = opt_qty(
            &rn.raw_rate,
            &format!("{path}.raw_rate"),
            units::parse_rate,
            class.typical_raw_rate_bps,
        )?;
        let link_name = match &rn.link {
            Some(l) => l.clone(),
            None if links.len() == 1 => links[0].name.clone(),
            None => "wir".to_string(),
        };
        let placement = match &rn.placement {
            None => Placement::on_body("unspecified"),
            Some(RawPlacement { on_body: Some(site), off_body_m: None }) => {
                Placement::OnBody { site: site.clone() }
            }
            Some(RawPlacement { on_body: None, off_body_m: Some(d) }) => {
                if d.is_nan() || *d <= 0.0 {
                    return Err(ParseError::at(
                        format!("{path}.placement.off_body_m"),
                        format!("off-body distance must be positive, got {d}"),
                    ));
                }
                Placement::OffBody { distance_m: *d }
            }
            Some(_) => {
                return Err(ParseError::at(
                    format!("{path}.placement"),
                    "set exactly one of `on_body` or `off_body_m`",
                ))
            }
        };
        let batt = match &rn.battery {
            Some(b) => battery(b, &format!("{path}.battery"))?,
            None => crate::energy::default_leaf_battery(),
        };
        let harvest_w = opt_qty(&rn.harvest, &format!("{path}.harvest"), units::parse_power, 0.0)?;
        let node = NodeSpec {
            id: rn.id.clone(),
            class: rn.class.clone(),
            raw_rate_bps: raw_rate,
            architecture: architecture(
                rn.architecture.as_ref(),
                &format!("{path}.architecture"),
                class,
                raw_rate,
            )?,
            battery: batt,
            harvester: HarvesterSpec::new(harvest_w)
                .map_err(|e| ParseError::at(format!("{path}.harvest"), e.to_string()))?,
            placement,
            link: link_name,
        };
        nodes.push(node);
    }

    Ok(Scenario {
        schema_version: SCHEMA_VERSION,
        nodes,
        hub,
        links,
        catalog,
        duration_s,
        epoch_s,
        seed,
        jitter_frac,
    })
}

/// Parse and fully validate. Any error-severity diagnostic fails the parse.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let scenario = parse_scenario_lenient(text)?;
    let diags = validate(&scenario);
    if has_errors(&diags) {
        return Err(ParseError::Diagnostics(
            diags
                .into_iter()
                .filter(|d| d.severity == crate::scenario::Severity::Error)
                .collect(),
        ));
    }
    Ok(scenario)
}

fn raw_battery(b: &BatterySpec) -> RawBattery {
    RawBattery {
        capacity: Qty::Num(b.capacity_mah),
        voltage: Qty::Num(b.nominal_voltage_v),
    }
}

/// Serialize a scenario back to the TOML schema with bare SI numbers.
pub fn serialize_scenario(s: &Scenario) -> String {
    let raw = RawScenario {
        schema_version: Some(s.schema_version),
        duration: Some(Qty::Num(s.duration_s)),
        epoch: Some(Qty::Num(s.epoch_s)),
        seed: Some(s.seed as i64),
        jitter: Some(s.jitter_frac),
        hub: Some(RawHub {
            id: Some(s.hub.id.clone()),
            battery: Some(raw_battery(&s.hub.battery)),
            base_power: Some(Qty::Num(s.hub.base_power.watts())),
            compute_energy_per_bit: Some(Qty::Num(
                s.hub.hub_compute_energy_per_bit.joules_per_bit(),
            )),
        }),
        links: Some(
            s.links
                .iter()
                .map(|l| {
                    let (prop, bubble, radius) = match l.propagation {
                        Propagation::BodyContained { bubble_m } => {
                            ("body-contained", Some(bubble_m), None)
                        }
                        Propagation::Radiative { radius_m } => {
                            ("radiative", None, Some(radius_m))
                        }
                    };
                    RawLink {
                        name: l.name.clone(),
                        energy_per_bit: Qty::Num(l.energy_per_bit.joules_per_bit()),
                        static_power: Some(Qty::Num(l.static_power.watts())),
                        max_rate: Qty::Num(l.max_rate_bps),
                        propagation: prop.to_string(),
                        bubble_m: bubble,
                        radius_m: radius,
                        carrier_limit_hz: Some(l.carrier_limit_hz),
                    }
                })
                .collect(),
        ),
        classes: Some(
            s.catalog
                .iter()
                .map(|c| RawClass {
                    name: c.name.clone(),
                    sense_static: Qty::Num(c.sense_model.static_power.watts()),
                    sense_energy_per_bit: Qty::Num(
                        c.sense_model.energy_per_sensed_bit.joules_per_bit(),
                    ),
                    typical_rate: Qty::Num(c.typical_raw_rate_bps),
                    compression: Some(c.default_compression),
                    note: Some(c.catalog_note.clone()),
                })
                .collect(),
        ),
        nodes: s
            .nodes
            .iter()
            .map(|n| {
                let placement = match &n.placement {
                    Placement::OnBody { site } => RawPlacement {
                        on_body: Some(site.clone()),
                        off_body_m: None,
                    },
                    Placement::OffBody { distance_m } => RawPlacement {
                        on_body: None,
                        off_body_m: Some(*distance_m),
                    },
                };
                let architecture = match &n.architecture {
                    Architecture::HubOffload { isa } => RawArch {
                        kind: "hub-offload".into(),
                        compression: Some(isa.compression_factor),
                        isa_energy_per_bit: Some(Qty::Num(
                            isa.isa_energy_per_bit.joules_per_bit(),
                        )),
                        local_compute_energy_per_bit: Some(Qty::Num(
                            isa.local_compute_energy_per_bit.joules_per_bit(),
                        )),
                        result_rate: None,
                    },
                    Architecture::Standalone {
                        result_rate_bps,
                        local_compute,
                    } => RawArch {
                        kind: "standalone".into(),
                        compression: Some(local_compute.compression_factor),
                        isa_energy_per_bit: Some(Qty::Num(
                            local_compute.isa_energy_per_bit.joules_per_bit(),
                        )),
                        local_compute_energy_per_bit: Some(Qty::Num(
                            local_compute.local_compute_energy_per_bit.joules_per_bit(),
                        )),
                        result_rate: Some(Qty::Num(*result_rate_bps)),
                    },
                };
                RawNode {
                    id: n.id.clone(),
                    class: n.class.clone(),
                    raw_rate: Some(Qty::Num(n.raw_rate_bps)),
                    link: Some(n.link.clone()),
                    placement: Some(placement),
                    battery: Some(raw_battery(&n.battery)),
                    harvest: Some(Qty::Num(n.harvester.harvest_power.watts())),
                    architecture: Some(architecture),
                }
            })
            .collect(),
    };
    toml::to_string_pretty(&raw).expect("scenario serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::catalog_scenario;

    const MINIMAL: &str = r#"
        [[nodes]]
        id = "bio-0"
        class = "biopotential-patch"
    "#;

    #[test]
    fn minimal_document_gets_defaults() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.epoch_s, 1.0);
        assert_eq!(s.seed, 0);
        assert_eq!(s.nodes.len(), 1);
        let n = &s.nodes[0];
        assert_eq!(n.raw_rate_bps, 10e3);
        assert_eq!(n.link, "wir");
        assert_eq!(n.battery.capacity_mah, 1000.0);
        assert_eq!(n.battery.nominal_voltage_v, 3.0);
        assert!(matches!(n.architecture, Architecture::HubOffload { .. }));
    }

    #[test]
    fn unit_suffixes_in_document() {
        let text = r#"
            duration = "10 h"
            epoch = "60 s"

            [[nodes]]
            id = "a"
            class = "earbud-audio"
            raw_rate = "128 kbps"
            harvest = "100 uW"
        "#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.duration_s, 36_000.0);
        assert_eq!(s.epoch_s, 60.0);
        assert_eq!(s.nodes[0].raw_rate_bps, 128e3);
        assert!((s.nodes[0].harvester.harvest_power.watts() - 1e-4).abs() < 1e-16);
    }

    #[test]
    fn unknown_link_reference_is_named() {
        let text = r#"
            [[nodes]]
            id = "a"
            class = "biopotential-patch"
            link = "wir2"
        "#;
        let err = parse_scenario(text).unwrap_err();
        assert!(err.to_string().contains("wir2"), "{err}");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let text = r#"
            [[nodes]]
            id = "a"
            class = "biopotential-patch"
            [[nodes]]
            id = "a"
            class = "smart-ring-fitness"
        "#;
        let err = parse_scenario(text).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn malformed_suffix_names_path() {
        let text = r#"
            [[nodes]]
            id = "a"
            class = "biopotential-patch"
            raw_rate = "10 kilobits"
        "#;
        let err = parse_scenario(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("nodes[0].raw_rate"), "{msg}");
        assert!(msg.contains("kilobits"), "{msg}");
    }

    #[test]
    fn negative_quantity_rejected() {
        let text = r#"
            [[nodes]]
            id = "a"
            class = "biopotential-patch"
            harvest = -5.0
        "#;
        let err = parse_scenario(text).unwrap_err();
        assert!(err.to_string().contains("nodes[0].harvest"), "{err}");
    }

    #[test]
    fn round_trip_identity() {
        let s = catalog_scenario();
        let text = serialize_scenario(&s);
        let back = parse_scenario(&text).unwrap();
        assert_eq!(s, back);
    }

    #[test]
    fn round_trip_standalone_node() {
        let mut s = catalog_scenario();
        s.nodes[0].architecture = Architecture::Standalone {
            result_rate_bps: 100.0,
            local_compute: ComputeModel::new(0.0, 10e-12, 1.0).unwrap(),
        };
        s.nodes[0].link = "ble".into();
        s.nodes[1].placement = Placement::off_body(0.05);
        s.jitter_frac = 0.05;
        s.seed = 42;
        let back = parse_scenario(&serialize_scenario(&s)).unwrap();
        assert_eq!(s, back);
    }
}
