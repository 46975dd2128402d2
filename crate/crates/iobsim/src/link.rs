//! Link technologies, containment semantics, and body-channel scheduling.
//!
//! Geometry is deliberately 1-D: a placement is either on the body or a
//! distance off the body surface. A body-contained link couples through
//! the body, so at least one endpoint must be on-body and an off-body
//! endpoint must sit inside the personal bubble. A radiative link reaches
//! anything within its radius.

use thiserror::Error;

use crate::energy::{EnergyPerBit, PowerDraw};

pub const EQS_CARRIER_LIMIT_HZ: f64 = 30e6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinkError {
    #[error("link `{link}`: demanded {demand_bps} bps exceeds capacity {capacity_bps} bps")]
    RateExceedsCapacity {
        link: String,
        demand_bps: f64,
        capacity_bps: f64,
    },
    #[error(
        "link `{link}` overloaded: aggregate demand {demand_bps} bps exceeds \
         capacity {capacity_bps} bps (deficit {deficit_bps} bps)"
    )]
    Overload {
        link: String,
        demand_bps: f64,
        capacity_bps: f64,
        deficit_bps: f64,
    },
    #[error("negative demand {demand_bps} bps for node `{node}`")]
    NegativeDemand { node: String, demand_bps: f64 },
    #[error("link `{link}`: {what}")]
    Invalid { link: String, what: String },
}

/// How a link's field propagates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Propagation {
    /// Electro-quasistatic coupling contained in a personal bubble
    /// around the body surface.
    BodyContained { bubble_m: f64 },
    /// Conventional radiative RF with a reach radius.
    Radiative { radius_m: f64 },
}

/// One communication technology.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTech {
    pub name: String,
    pub energy_per_bit: EnergyPerBit,
    pub static_power: PowerDraw,
    pub max_rate_bps: f64,
    pub propagation: Propagation,
    pub carrier_limit_hz: f64,
}

impl LinkTech {
    pub fn validate(&self) -> Result<(), LinkError> {
        let invalid = |what: String| LinkError::Invalid {
            link: self.name.clone(),
            what,
        };
        if !(self.max_rate_bps > 0.0 && self.max_rate_bps.is_finite()) {
            return Err(invalid(format!(
                "max_rate must be positive, got {}",
                self.max_rate_bps
            )));
        }
        if self.energy_per_bit.joules_per_bit() <= 0.0 {
            return Err(invalid("energy_per_bit must be strictly positive".into()));
        }
        match self.propagation {
            Propagation::BodyContained { bubble_m } => {
                if !(bubble_m >= 0.0 && bubble_m.is_finite()) {
                    return Err(invalid(format!("bubble must be >= 0, got {bubble_m}")));
                }
                if self.carrier_limit_hz > EQS_CARRIER_LIMIT_HZ {
                    return Err(invalid(format!(
                        "body-contained carrier limit {} Hz exceeds the EQS bound {} Hz",
                        self.carrier_limit_hz, EQS_CARRIER_LIMIT_HZ
                    )));
                }
            }
            Propagation::Radiative { radius_m } => {
                if !(radius_m > 0.0 && radius_m.is_finite()) {
                    return Err(invalid(format!("radius must be > 0, got {radius_m}")));
                }
            }
        }
        Ok(())
    }

    /// Average transmit power at `tx_rate_bps`: `e_bit * rate + static`.
    pub fn comm_power(&self, tx_rate_bps: f64) -> Result<PowerDraw, LinkError> {
        if tx_rate_bps > self.max_rate_bps {
            return Err(LinkError::RateExceedsCapacity {
                link: self.name.clone(),
                demand_bps: tx_rate_bps,
                capacity_bps: self.max_rate_bps,
            });
        }
        Ok(self.comm_power_unchecked(tx_rate_bps))
    }

    /// Same affine formula without the capacity check. Used for sweep
    /// rows past the link limit, which are reported as infeasible rather
    /// than dropped.
    pub fn comm_power_unchecked(&self, tx_rate_bps: f64) -> PowerDraw {
        self.static_power + self.energy_per_bit.power_at(tx_rate_bps)
    }

    /// Default body-channel link: 100 pJ/bit, no static term, 4 Mbps,
    /// 0.1 m personal bubble.
    pub fn wir_default() -> LinkTech {
        LinkTech {
            name: "wir".into(),
            energy_per_bit: EnergyPerBit::new(100e-12).expect("constant"),
            static_power: PowerDraw::ZERO,
            max_rate_bps: 4e6,
            propagation: Propagation::BodyContained { bubble_m: 0.1 },
            carrier_limit_hz: EQS_CARRIER_LIMIT_HZ,
        }
    }

    /// Default BLE-class radiative link: 10 nJ/bit plus a 0.5 mW static
    /// term, which puts 1 Mbps workloads in the low-milliwatt range.
    pub fn ble_default() -> LinkTech {
        LinkTech {
            name: "ble".into(),
            energy_per_bit: EnergyPerBit::new(10e-9).expect("constant"),
            static_power: PowerDraw::new(0.5e-3).expect("constant"),
            max_rate_bps: 2e6,
            propagation: Propagation::Radiative { radius_m: 7.5 },
            carrier_limit_hz: 2.4e9,
        }
    }
}

/// Where a device sits relative to the body.
#[derive(Debug, Clone, PartialEq)]
pub enum Placement {
    OnBody { site: String },
    OffBody { distance_m: f64 },
}

impl Placement {
    pub fn on_body(site: &str) -> Placement {
        Placement::OnBody { site: site.into() }
    }

    pub fn off_body(distance_m: f64) -> Placement {
        Placement::OffBody { distance_m }
    }

    fn distance_from_body_m(&self) -> f64 {
        match self {
            Placement::OnBody { .. } => 0.0,
            Placement::OffBody { distance_m } => *distance_m,
        }
    }
}

/// Whether a transmitter at `tx` can reach a receiver at `rx` over `link`.
pub fn reachable(link: &LinkTech, tx: &Placement, rx: &Placement) -> bool {
    match link.propagation {
        Propagation::BodyContained { bubble_m } => match (tx, rx) {
            (Placement::OnBody { .. }, Placement::OnBody { .. }) => true,
            (Placement::OnBody { .. }, Placement::OffBody { distance_m })
            | (Placement::OffBody { distance_m }, Placement::OnBody { .. }) => {
                *distance_m <= bubble_m
            }
            // no body-coupled endpoint, no channel
            (Placement::OffBody { .. }, Placement::OffBody { .. }) => false,
        },
        Propagation::Radiative { radius_m } => {
            let d = (tx.distance_from_body_m() - rx.distance_from_body_m()).abs();
            d <= radius_m
        }
    }
}

/// Observers that can receive `tx`'s transmissions on `link`, i.e. the
/// pointwise filter of `reachable`.
pub fn eavesdrop_set<'a>(
    link: &LinkTech,
    tx: &Placement,
    observers: &'a [Placement],
) -> Vec<&'a Placement> {
    observers
        .iter()
        .filter(|obs| reachable(link, tx, obs))
        .collect()
}

/// Admission-controlled rate allocation on a single shared channel.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SlotTable {
    allocations: Vec<(String, f64)>,
}

impl SlotTable {
    pub fn allocations(&self) -> &[(String, f64)] {
        &self.allocations
    }

    pub fn allocated_rate(&self, node: &str) -> f64 {
        self.allocations
            .iter()
            .find(|(id, _)| id == node)
            .map(|(_, r)| *r)
            .unwrap_or(0.0)
    }

    pub fn total_rate_bps(&self) -> f64 {
        self.allocations.iter().map(|(_, r)| r).sum()
    }
}

/// Admit all demands or fail with the overload deficit. There is no
/// proportional degradation: an overloaded channel is a scenario error,
/// since the projections assume demanded rates are served.
pub fn allocate_tdma(
    link: &LinkTech,
    demands: &[(String, f64)],
) -> Result<SlotTable, LinkError> {
    for (node, rate) in demands {
        if rate.is_nan() || *rate < 0.0 {
            return Err(LinkError::NegativeDemand {
                node: node.clone(),
                demand_bps: *rate,
            });
        }
    }
    let total: f64 = demands.iter().map(|(_, r)| r).sum();
    if total > link.max_rate_bps {
        return Err(LinkError::Overload {
            link: link.name.clone(),
            demand_bps: total,
            capacity_bps: link.max_rate_bps,
            deficit_bps: total - link.max_rate_bps,
        });
    }
    Ok(SlotTable {
        allocations: demands
            .iter()
            .filter(|(_, r)| *r > 0.0)
            .cloned()
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comm_power_examples() {
        // Wi-R at 4 Mbps -> 400 uW
        let wir = LinkTech::wir_default();
        assert!((wir.comm_power(4e6).unwrap().watts() - 400e-6).abs() < 1e-15);

        // rate 0, static 0 -> 0 W
        assert_eq!(wir.comm_power(0.0).unwrap().watts(), 0.0);

        // BLE-class at 1 Mbps -> 10.5 mW
        let ble = LinkTech::ble_default();
        assert!((ble.comm_power(1e6).unwrap().watts() - 10.5e-3).abs() < 1e-12);

        // beyond capacity is a capacity error
        assert!(matches!(
            wir.comm_power(5e6),
            Err(LinkError::RateExceedsCapacity { .. })
        ));
    }

    #[test]
    fn containment() {
        let wir = LinkTech::wir_default();
        let chest = Placement::on_body("chest");
        // off-body at 5 m is outside the bubble
        assert!(!reachable(&wir, &chest, &Placement::off_body(5.0)));
        // inside the bubble is fine
        assert!(reachable(&wir, &chest, &Placement::off_body(0.05)));
        // on-body to on-body always couples
        assert!(reachable(&wir, &chest, &chest));
        // two off-body devices have no body channel
        assert!(!reachable(
            &wir,
            &Placement::off_body(0.01),
            &Placement::off_body(0.01)
        ));

        let ble = LinkTech::ble_default();
        assert!(reachable(&ble, &chest, &Placement::off_body(5.0)));
        assert!(!reachable(&ble, &chest, &Placement::off_body(8.0)));
    }

    #[test]
    fn eavesdroppers() {
        let observers = vec![Placement::off_body(1.0), Placement::off_body(5.0)];
        let tx = Placement::on_body("wrist");

        let wir = LinkTech::wir_default();
        assert!(eavesdrop_set(&wir, &tx, &observers).is_empty());

        let ble = LinkTech::ble_default();
        assert_eq!(eavesdrop_set(&ble, &tx, &observers).len(), 2);

        assert!(eavesdrop_set(&ble, &tx, &[]).is_empty());
    }

    #[test]
    fn tdma_admission() {
        let wir = LinkTech::wir_default();
        let table = allocate_tdma(
            &wir,
            &[("a".into(), 2e6), ("b".into(), 1e6)],
        )
        .unwrap();
        assert_eq!(table.allocated_rate("a"), 2e6);
        assert_eq!(table.allocated_rate("b"), 1e6);
        assert_eq!(table.total_rate_bps(), 3e6);

        assert_eq!(allocate_tdma(&wir, &[]).unwrap(), SlotTable::default());

        match allocate_tdma(&wir, &[("a".into(), 3e6), ("b".into(), 2e6)]) {
            Err(LinkError::Overload { deficit_bps, .. }) => {
                assert!((deficit_bps - 1e6).abs() < 1e-6)
            }
            other => panic!("expected overload, got {other:?}"),
        }
    }

    #[test]
    fn zero_demands_are_not_allocated() {
        let wir = LinkTech::wir_default();
        let table =
            allocate_tdma(&wir, &[("a".into(), 0.0), ("b".into(), 100.0)]).unwrap();
        assert_eq!(table.allocations().len(), 1);
    }

    #[test]
    fn carrier_limit_enforced() {
        let mut link = LinkTech::wir_default();
        link.carrier_limit_hz = 60e6;
        assert!(link.validate().is_err());
    }
}
