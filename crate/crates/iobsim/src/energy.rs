//! Power and battery-life arithmetic.
//!
//! Everything here is pure double-precision SI math: rates in bits/s,
//! power in watts, energy in joules. Unit suffixes are handled at the
//! config boundary ([`crate::units`]), never in this layer.

use std::fmt;
use std::ops::Add;

use thiserror::Error;

pub const HOURS_PER_YEAR: f64 = 8760.0;
pub const HOURS_PER_WEEK: f64 = 168.0;
pub const HOURS_PER_DAY: f64 = 24.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("{what} must be finite and non-negative, got {value}")]
    OutOfRange { what: &'static str, value: f64 },
    #[error("{what} must be strictly positive, got {value}")]
    NotPositive { what: &'static str, value: f64 },
    #[error("compression factor must be in (0, 1], got {0}")]
    BadCompression(f64),
}

fn non_negative(what: &'static str, value: f64) -> Result<f64, EnergyError> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(EnergyError::OutOfRange { what, value })
    }
}

fn positive(what: &'static str, value: f64) -> Result<f64, EnergyError> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(EnergyError::NotPositive { what, value })
    }
}

/// Link or compute efficiency in joules per bit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EnergyPerBit(f64);

impl EnergyPerBit {
    pub const ZERO: EnergyPerBit = EnergyPerBit(0.0);

    pub fn new(joules_per_bit: f64) -> Result<Self, EnergyError> {
        Ok(Self(non_negative("energy per bit", joules_per_bit)?))
    }

    pub fn joules_per_bit(self) -> f64 {
        self.0
    }

    /// Average power when processing `rate_bps` bits per second.
    pub fn power_at(self, rate_bps: f64) -> PowerDraw {
        PowerDraw(self.0 * rate_bps)
    }
}

/// Average power in watts. Non-negative and finite by construction.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerDraw(f64);

impl PowerDraw {
    pub const ZERO: PowerDraw = PowerDraw(0.0);

    pub fn new(watts: f64) -> Result<Self, EnergyError> {
        Ok(Self(non_negative("power", watts)?))
    }

    pub fn watts(self) -> f64 {
        self.0
    }
}

impl Add for PowerDraw {
    type Output = PowerDraw;
    fn add(self, rhs: PowerDraw) -> PowerDraw {
        PowerDraw(self.0 + rhs.0)
    }
}

impl fmt::Display for PowerDraw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::units::format_power(self.0))
    }
}

/// Affine sensing-power model: `static + e_bit * rate`.
///
/// The coefficients shipped in the device catalog are calibration values,
/// not measured ground truth; see the catalog notes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensePowerModel {
    pub static_power: PowerDraw,
    pub energy_per_sensed_bit: EnergyPerBit,
}

impl SensePowerModel {
    pub fn new(static_w: f64, joules_per_bit: f64) -> Result<Self, EnergyError> {
        Ok(Self {
            static_power: PowerDraw::new(static_w)?,
            energy_per_sensed_bit: EnergyPerBit::new(joules_per_bit)?,
        })
    }
}

/// Per-node compute cost model.
///
/// `isa_energy_per_bit` is the in-sensor-analytics cost paid by a
/// hub-offload leaf (default 0: compute treated as negligible to first
/// order). `local_compute_energy_per_bit` is the standalone-CPU cost.
/// `compression_factor` is output bits over input bits, in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComputeModel {
    pub isa_energy_per_bit: EnergyPerBit,
    pub local_compute_energy_per_bit: EnergyPerBit,
    pub compression_factor: f64,
}

impl ComputeModel {
    pub fn new(
        isa_j_per_bit: f64,
        local_j_per_bit: f64,
        compression_factor: f64,
    ) -> Result<Self, EnergyError> {
        if !compression_factor.is_finite()
            || compression_factor <= 0.0
            || compression_factor > 1.0
        {
            return Err(EnergyError::BadCompression(compression_factor));
        }
        Ok(Self {
            isa_energy_per_bit: EnergyPerBit::new(isa_j_per_bit)?,
            local_compute_energy_per_bit: EnergyPerBit::new(local_j_per_bit)?,
            compression_factor,
        })
    }

    /// Zero-cost pass-through model (no ISA, no compression).
    pub fn passthrough() -> Self {
        Self {
            isa_energy_per_bit: EnergyPerBit::ZERO,
            local_compute_energy_per_bit: EnergyPerBit::ZERO,
            compression_factor: 1.0,
        }
    }
}

impl Default for ComputeModel {
    fn default() -> Self {
        Self::passthrough()
    }
}

/// Battery described by capacity and nominal voltage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatterySpec {
    pub capacity_mah: f64,
    pub nominal_voltage_v: f64,
}

impl BatterySpec {
    pub fn new(capacity_mah: f64, nominal_voltage_v: f64) -> Result<Self, EnergyError> {
        Ok(Self {
            capacity_mah: positive("battery capacity", capacity_mah)?,
            nominal_voltage_v: positive("battery voltage", nominal_voltage_v)?,
        })
    }

    /// 1 mAh = 3.6 C, so E = mAh * 3.6 * V joules.
    pub fn energy_joules(&self) -> f64 {
        self.capacity_mah * 3.6 * self.nominal_voltage_v
    }
}

/// Default leaf battery: 1000 mAh coin cell at a nominal 3.0 V.
pub fn default_leaf_battery() -> BatterySpec {
    BatterySpec::new(1000.0, 3.0).expect("constant")
}

/// Constant-rate energy harvester.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarvesterSpec {
    pub harvest_power: PowerDraw,
}

impl HarvesterSpec {
    pub const NONE: HarvesterSpec = HarvesterSpec {
        harvest_power: PowerDraw::ZERO,
    };

    pub fn new(watts: f64) -> Result<Self, EnergyError> {
        Ok(Self {
            harvest_power: PowerDraw::new(watts)?,
        })
    }
}

/// Battery-life outcome: either the battery never depletes, or it lasts
/// a finite number of hours.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lifetime {
    Perpetual,
    Hours(f64),
}

impl Lifetime {
    pub fn hours(&self) -> Option<f64> {
        match self {
            Lifetime::Perpetual => None,
            Lifetime::Hours(h) => Some(*h),
        }
    }
}

impl fmt::Display for Lifetime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lifetime::Perpetual => write!(f, "PERPETUAL"),
            Lifetime::Hours(h) => write!(f, "{h:.2} h"),
        }
    }
}

/// Lifetime bands used for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LifetimeClass {
    Perpetual,
    AllWeek,
    AllDay,
    SubDay,
}

impl fmt::Display for LifetimeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LifetimeClass::Perpetual => "Perpetual",
            LifetimeClass::AllWeek => "AllWeek",
            LifetimeClass::AllDay => "AllDay",
            LifetimeClass::SubDay => "SubDay",
        };
        write!(f, "{s}")
    }
}

/// Sensing power at a given raw acquisition rate.
pub fn sense_power(model: &SensePowerModel, raw_rate_bps: f64) -> PowerDraw {
    model.static_power + model.energy_per_sensed_bit.power_at(raw_rate_bps)
}

/// Time to depletion given average node power and constant harvesting.
/// Non-depleting (harvest covers the load) reports `Perpetual`.
pub fn battery_life(
    batt: &BatterySpec,
    p_node: PowerDraw,
    harvest: &HarvesterSpec,
) -> Lifetime {
    let net_w = p_node.watts() - harvest.harvest_power.watts();
    if net_w <= 0.0 {
        Lifetime::Perpetual
    } else {
        Lifetime::Hours(batt.energy_joules() / net_w / 3600.0)
    }
}

/// Band classification. Perpetual means non-depleting or more than a
/// year of life; boundaries are inclusive.
pub fn classify_lifetime(life: Lifetime) -> LifetimeClass {
    match life {
        Lifetime::Perpetual => LifetimeClass::Perpetual,
        Lifetime::Hours(h) => {
            if h > HOURS_PER_YEAR {
                LifetimeClass::Perpetual
            } else if h >= HOURS_PER_WEEK {
                LifetimeClass::AllWeek
            } else if h >= HOURS_PER_DAY {
                LifetimeClass::AllDay
            } else {
                LifetimeClass::SubDay
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: f64) -> PowerDraw {
        PowerDraw::new(v).unwrap()
    }

    #[test]
    fn sense_power_examples() {
        // (2 uW static, 0.3 nJ/bit) at 10 kbps -> 5 uW
        let m = SensePowerModel::new(2e-6, 0.3e-9).unwrap();
        assert!((sense_power(&m, 1e4).watts() - 5e-6).abs() < 1e-18);

        // zero model, any rate -> 0 W
        let z = SensePowerModel::new(0.0, 0.0).unwrap();
        assert_eq!(sense_power(&z, 123456.0).watts(), 0.0);

        // (4 mW, 1 nJ/bit) at 256 kbps -> 4.256 mW
        let a = SensePowerModel::new(4e-3, 1e-9).unwrap();
        assert!((sense_power(&a, 256e3).watts() - 4.256e-3).abs() < 1e-12);
    }

    #[test]
    fn battery_units_round_trip() {
        // 1000 mAh at 3.0 V is exactly 10,800 J
        let b = BatterySpec::new(1000.0, 3.0).unwrap();
        assert_eq!(b.energy_joules(), 10_800.0);
    }

    #[test]
    fn battery_life_examples() {
        let b = BatterySpec::new(1000.0, 3.0).unwrap();
        // 342.47 uW drains 10,800 J in one year (8760 h) up to rounding
        let life = battery_life(&b, w(342.47e-6), &HarvesterSpec::NONE);
        let h = life.hours().unwrap();
        assert!((h - 8760.0).abs() / 8760.0 < 1e-3, "got {h}");

        // harvest covers the load -> perpetual
        let life = battery_life(&b, w(50e-6), &HarvesterSpec::new(200e-6).unwrap());
        assert_eq!(life, Lifetime::Perpetual);

        // 3 mW -> 1000 h
        let life = battery_life(&b, w(3e-3), &HarvesterSpec::NONE);
        assert!((life.hours().unwrap() - 1000.0).abs() < 1e-9);
    }

    #[test]
    fn classification_bands() {
        assert_eq!(classify_lifetime(Lifetime::Hours(8761.0)), LifetimeClass::Perpetual);
        assert_eq!(classify_lifetime(Lifetime::Hours(8760.0)), LifetimeClass::AllWeek);
        assert_eq!(classify_lifetime(Lifetime::Hours(24.0)), LifetimeClass::AllDay);
        assert_eq!(classify_lifetime(Lifetime::Hours(168.0)), LifetimeClass::AllWeek);
        assert_eq!(classify_lifetime(Lifetime::Hours(23.9)), LifetimeClass::SubDay);
        assert_eq!(classify_lifetime(Lifetime::Perpetual), LifetimeClass::Perpetual);
        // biopotential case: 10,800 J at 6 uW is 500,000 h
        let b = BatterySpec::new(1000.0, 3.0).unwrap();
        let life = battery_life(&b, w(6e-6), &HarvesterSpec::NONE);
        assert!((life.hours().unwrap() - 500_000.0).abs() < 1e-6);
        assert_eq!(classify_lifetime(life), LifetimeClass::Perpetual);
    }

    #[test]
    fn invariants_rejected() {
        assert!(PowerDraw::new(-1.0).is_err());
        assert!(PowerDraw::new(f64::NAN).is_err());
        assert!(BatterySpec::new(0.0, 3.0).is_err());
        assert!(ComputeModel::new(0.0, 0.0, 0.0).is_err());
        assert!(ComputeModel::new(0.0, 0.0, 1.1).is_err());
        assert!(ComputeModel::new(0.0, 0.0, 1.0).is_ok());
    }
}
