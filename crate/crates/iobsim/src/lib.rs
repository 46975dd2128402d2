//! Body-area-network energy modeling and simulation.
//!
//! The library projects battery life for on-body wearables under two
//! architectures: standalone devices with their own CPU and radio, and
//! bare leaf nodes that offload compute to a single on-body hub over an
//! ultra-low-power body-coupled channel. It ships:
//!
//! - [`energy`]: pure power/battery arithmetic and lifetime bands
//! - [`link`]: link technologies, containment semantics, TDMA admission
//! - [`scenario`]: the device catalog, scenario model, and validation
//! - [`config`]: the TOML scenario schema (parse and serialize)
//! - [`sim`]: the deterministic epoch-based simulation engine
//! - [`analysis`]: life-vs-rate curves and architecture comparisons

pub mod analysis;
pub mod config;
pub mod energy;
pub mod link;
pub mod scenario;
pub mod sim;
pub mod units;
