//! Analytic projections: battery-life-vs-rate curves, the
//! standalone-vs-hub-offload comparison, and lifetime classification
//! tables over simulation results.

use thiserror::Error;

use crate::energy::{
    battery_life, classify_lifetime, sense_power, BatterySpec, HarvesterSpec,
    Lifetime, LifetimeClass,
};
use crate::link::{LinkError, LinkTech};
use crate::scenario::{
    Architecture, DeviceClass, NodeSpec, Scenario, ScenarioError,
    DEFAULT_LOCAL_COMPUTE_J_PER_BIT, DEFAULT_RESULT_RATE_FRACTION,
};
use crate::sim::SimResult;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("sweep spec invalid: {0}")]
    BadSweep(String),
    #[error(transparent)]
    Link(#[from] LinkError),
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

/// Grid description for a battery-life-vs-data-rate projection.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub rate_min_bps: f64,
    pub rate_max_bps: f64,
    pub points: usize,
    pub spacing: Spacing,
    pub class: DeviceClass,
    pub link: LinkTech,
    pub battery: BatterySpec,
    pub harvester: HarvesterSpec,
    /// Output/input bit ratio applied to the transmit rate.
    pub compression: f64,
}

impl SweepSpec {
    fn check(&self) -> Result<(), AnalysisError> {
        if self.rate_min_bps.is_nan() || self.rate_min_bps >= self.rate_max_bps {
            return Err(AnalysisError::BadSweep(format!(
                "rate_min {} must be below rate_max {}",
                self.rate_min_bps, self.rate_max_bps
            )));
        }
        if self.points < 2 {
            return Err(AnalysisError::BadSweep(format!(
                "need at least 2 points, got {}",
                self.points
            )));
        }
        if self.spacing == Spacing::Log && self.rate_min_bps <= 0.0 {
            return Err(AnalysisError::BadSweep(
                "log spacing needs a positive rate_min".into(),
            ));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Linear => {
                        self.rate_min_bps + f * (self.rate_max_bps - self.rate_min_bps)
                    }
                    Spacing::Log => {
                        (self.rate_min_bps.ln()
                            + f * (self.rate_max_bps.ln() - self.rate_min_bps.ln()))
                        .exp()
                    }
                }
            })
            .collect()
    }
}

/// One projected point.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub rate_bps: f64,
    pub sense_w: f64,
    pub comm_w: f64,
    pub compute_w: f64,
    pub total_w: f64,
    pub life: Lifetime,
    pub class_label: LifetimeClass,
    /// False when the transmit rate exceeds the link capacity; the row
    /// is kept so the curve visibly truncates.
    pub feasible: bool,
}

/// Analytic battery-life projection over a rate grid. No simulation.
pub fn project_curve(spec: &SweepSpec) -> Result<Vec<CurveRow>, AnalysisError> {
    spec.check()?;
    Ok(spec
        .grid()
        .into_iter()
        .map(|rate_bps| {
            let tx_bps = spec.compression * rate_bps;
            let sense = sense_power(&spec.class.sense_model, rate_bps);
            let comm = spec.link.comm_power_unchecked(tx_bps);
            let total = sense + comm;
            let life = battery_life(&spec.battery, total, &spec.harvester);
            CurveRow {
                rate_bps,
                sense_w: sense.watts(),
                comm_w: comm.watts(),
                compute_w: 0.0,
                total_w: total.watts(),
                life,
                class_label: classify_lifetime(life),
                feasible: tx_bps <= spec.link.max_rate_bps,
            }
        })
        .collect())
}

/// Curve CSV: `rate_bps,sense_W,comm_W,total_W,life_h,class,feasible`
/// with an empty `life_h` for perpetual rows and INFEASIBLE markers
/// carried in the `feasible` column.
pub fn curve_to_csv(rows: &[CurveRow]) -> String {
    let mut out = String::from("rate_bps,sense_W,comm_W,total_W,life_h,class,feasible\n");
    for r in rows {
        let life = match r.life {
            Lifetime::Perpetual => String::new(),
            Lifetime::Hours(h) => format!("{h}"),
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.rate_bps,
            r.sense_w,
            r.comm_w,
            r.total_w,
            life,
            r.class_label,
            if r.feasible { "OK" } else { "INFEASIBLE" }
        ));
    }
    out
}

/// Gnuplot script for a curve CSV, emitted next to the data on request.
pub fn curve_gnuplot(csv_path: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\n\
         set logscale xy\n\
         set xlabel 'data rate (bps)'\n\
         set ylabel 'battery life (h)'\n\
         set title '{title}'\n\
         plot '{csv_path}' every ::1 using 1:5 with lines title 'projected life'\n"
    )
}

/// Per-term power for one side of the architecture comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArchPower {
    pub sense_w: f64,
    pub compute_w: f64,
    pub comm_w: f64,
}

impl ArchPower {
    pub fn total_w(&self) -> f64 {
        self.sense_w + self.compute_w + self.comm_w
    }
}

/// Standalone-over-RF versus hub-offload-over-body-channel, for the same
/// sensing workload. The ratio is a pure power comparison, so it is
/// independent of battery size.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub node_id: String,
    pub standalone: ArchPower,
    pub hub_offload: ArchPower,
    /// standalone total over hub-offload total
    pub ratio: f64,
}

fn arch_power(
    node: &NodeSpec,
    sense_model: &crate::energy::SensePowerModel,
    arch: &Architecture,
    link: &LinkTech,
) -> Result<ArchPower, ScenarioError> {
    let mut probe = node.clone();
    probe.architecture = arch.clone();
    let split = probe.power_breakdown(sense_model, link)?;
    Ok(ArchPower {
        sense_w: split.sense.watts(),
        compute_w: split.compute.watts(),
        comm_w: split.comm.watts(),
    })
}

/// Evaluate the node both ways: as a standalone device on `rf` and as a
/// hub-offload leaf on `body`. Whichever side the node's own
/// architecture does not describe gets the stock defaults (result rate
/// 1% of raw, 10 pJ/bit local compute; zero-cost ISA with the class
/// compression).
pub fn compare_architectures(
    node: &NodeSpec,
    class: &DeviceClass,
    body: &LinkTech,
    rf: &LinkTech,
) -> Result<Comparison, AnalysisError> {
    let standalone_arch = match &node.architecture {
        Architecture::Standalone { .. } => node.architecture.clone(),
        Architecture::HubOffload { .. } => Architecture::Standalone {
            result_rate_bps: DEFAULT_RESULT_RATE_FRACTION * node.raw_rate_bps,
            local_compute: crate::energy::ComputeModel::new(
                0.0,
                DEFAULT_LOCAL_COMPUTE_J_PER_BIT,
                1.0,
            )
            .expect("constant"),
        },
    };
    let offload_arch = match &node.architecture {
        Architecture::HubOffload { .. } => node.architecture.clone(),
        Architecture::Standalone { .. } => {
            Architecture::default_hub_offload(class.default_compression)
        }
    };

    let standalone = arch_power(node, &class.sense_model, &standalone_arch, rf)?;
    let hub_offload = arch_power(node, &class.sense_model, &offload_arch, body)?;
    let ratio = standalone.total_w() / hub_offload.total_w();
    Ok(Comparison {
        node_id: node.id.clone(),
        standalone,
        hub_offload,
        ratio,
    })
}

/// Comparison CSV, one row per term plus totals.
pub fn comparison_to_csv(c: &Comparison) -> String {
    let mut out = String::from("node,architecture,sense_W,compute_W,comm_W,total_W,ratio\n");
    out.push_str(&format!(
        "{},standalone,{},{},{},{},\n",
        c.node_id,
        c.standalone.sense_w,
        c.standalone.compute_w,
        c.standalone.comm_w,
        c.standalone.total_w()
    ));
    out.push_str(&format!(
        "{},hub-offload,{},{},{},{},{}\n",
        c.node_id,
        c.hub_offload.sense_w,
        c.hub_offload.compute_w,
        c.hub_offload.comm_w,
        c.hub_offload.total_w(),
        c.ratio
    ));
    out
}

/// Apply the lifetime bands to each node's simulated outcome.
pub fn classify_scenario(result: &SimResult) -> Vec<(String, LifetimeClass)> {
    result
        .nodes
        .iter()
        .map(|n| (n.id.clone(), classify_lifetime(n.outcome.lifetime())))
        .collect()
}

/// Projection at a single configured rate, used to cross-check the
/// simulator against the analytic path.
pub fn project_node(s: &Scenario, node: &NodeSpec) -> Result<Lifetime, AnalysisError> {
    let class = s
        .class_of(node)
        .ok_or_else(|| AnalysisError::BadSweep(format!("unknown class `{}`", node.class)))?;
    let link = s
        .find_link(&node.link)
        .ok_or_else(|| AnalysisError::BadSweep(format!("unknown link `{}`", node.link)))?;
    let split = node.power_breakdown(&class.sense_model, link)?;
    Ok(battery_life(&node.battery, split.total(), &node.harvester))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::default_leaf_battery;
    use crate::energy::PowerDraw;
    use crate::scenario::{catalog_scenario, default_catalog, find_class};

    fn bio_sweep() -> SweepSpec {
        let cat = default_catalog();
        SweepSpec {
            rate_min_bps: 1e3,
            rate_max_bps: 10e6,
            points: 50,
            spacing: Spacing::Log,
            class: find_class(&cat, "biopotential-patch").unwrap().clone(),
            link: LinkTech::wir_default(),
            battery: default_leaf_battery(),
            harvester: HarvesterSpec::NONE,
            compression: 1.0,
        }
    }

    #[test]
    fn curve_hits_examples() {
        let mut spec = bio_sweep();
        spec.rate_min_bps = 10e3;
        spec.rate_max_bps = 4e6;
        spec.points = 2;
        let rows = project_curve(&spec).unwrap();

        // 10 kbps: 5 uW sense + 1 uW comm = 6 uW, 500,000 h -> perpetual band
        let low = &rows[0];
        assert!((low.total_w - 6e-6).abs() < 1e-12);
        assert!((low.life.hours().unwrap() - 500_000.0).abs() < 1.0);
        assert_eq!(low.class_label, LifetimeClass::Perpetual);

        // 4 Mbps: sense 1.202 mW + comm 400 uW = 1.602 mW,
        // 10,800 J / 1.602 mW = 6,741,573 s which is 1872.7 h
        let high = &rows[1];
        assert!((high.sense_w - 1.202e-3).abs() < 1e-9);
        assert!((high.comm_w - 400e-6).abs() < 1e-12);
        assert!((high.total_w - 1.602e-3).abs() < 1e-9);
        let h = high.life.hours().unwrap();
        let expect = 10_800.0 / 1.602e-3 / 3600.0;
        assert!((h - expect).abs() < 1e-6, "{h} vs {expect}");
        assert!(high.feasible);
    }

    #[test]
    fn rows_past_capacity_flagged() {
        let rows = project_curve(&bio_sweep()).unwrap();
        assert_eq!(rows.len(), 50);
        for r in &rows {
            assert_eq!(r.feasible, r.rate_bps <= 4e6, "at {}", r.rate_bps);
            // sum invariant is exact
            assert_eq!(r.total_w, r.sense_w + r.comm_w + r.compute_w);
        }
        assert!(rows.iter().any(|r| !r.feasible));
    }

    #[test]
    fn life_monotone_in_rate() {
        let rows = project_curve(&bio_sweep()).unwrap();
        let mut prev = f64::INFINITY;
        for r in &rows {
            let h = match r.life {
                Lifetime::Perpetual => f64::INFINITY,
                Lifetime::Hours(h) => h,
            };
            assert!(h <= prev, "life increased at {} bps", r.rate_bps);
            prev = h;
        }
    }

    #[test]
    fn architecture_comparison_example() {
        let s = catalog_scenario();
        let node = s.find_node("biopotential-patch-0").unwrap();
        let class = s.class_of(node).unwrap();
        let c = compare_architectures(
            node,
            class,
            s.find_link("wir").unwrap(),
            s.find_link("ble").unwrap(),
        )
        .unwrap();
        // standalone: 5 uW sense + 0.1 uW compute + (0.5 mW + 1 uW) comm
        assert!((c.standalone.total_w() - 0.5061e-3).abs() < 1e-9);
        assert!((c.hub_offload.total_w() - 6e-6).abs() < 1e-12);
        assert!((c.ratio - 0.5061e-3 / 6e-6).abs() < 1e-6);
        assert!(c.ratio > 80.0 && c.ratio < 90.0);
    }

    #[test]
    fn comparison_symmetry_baseline() {
        // identical links, zero compute both sides, result rate = raw rate
        let s = catalog_scenario();
        let mut node = s.find_node("biopotential-patch-0").unwrap().clone();
        node.architecture = Architecture::Standalone {
            result_rate_bps: node.raw_rate_bps,
            local_compute: crate::energy::ComputeModel::new(0.0, 0.0, 1.0).unwrap(),
        };
        let class = s.class_of(&node).unwrap();
        let wir = s.find_link("wir").unwrap();
        let c = compare_architectures(&node, class, wir, wir).unwrap();
        assert!((c.ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_comm_ratio_is_100x() {
        // 10 nJ/bit over 100 pJ/bit at the same rate, zero statics
        let mut wir = LinkTech::wir_default();
        wir.static_power = PowerDraw::ZERO;
        let mut ble = LinkTech::ble_default();
        ble.static_power = PowerDraw::ZERO;
        let rate = 1e6;
        let p_ble = ble.comm_power(rate).unwrap().watts();
        let p_wir = wir.comm_power(rate).unwrap().watts();
        assert_eq!(p_ble / p_wir, 100.0);
    }

    #[test]
    fn classify_default_catalog() {
        let mut s = catalog_scenario();
        s.duration_s = 10.0 * 3600.0;
        s.epoch_s = 3600.0;
        let r = crate::sim::run(&s).unwrap();
        let table = classify_scenario(&r);
        let get = |id: &str| table.iter().find(|(n, _)| n == id).unwrap().1;
        assert_eq!(get("biopotential-patch-0"), LifetimeClass::Perpetual);
        assert_eq!(get("smart-ring-fitness-0"), LifetimeClass::Perpetual);
        assert_eq!(get("earbud-audio-0"), LifetimeClass::AllWeek);
        assert_eq!(get("camera-video-0"), LifetimeClass::AllDay);
    }
}
