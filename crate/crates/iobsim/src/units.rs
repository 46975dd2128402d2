//! Unit-suffix parsing for the scenario schema and CLI flags.
//!
//! Everything inside the model layers is plain SI (bits/s, watts, joules,
//! seconds). Suffixes exist only at the config boundary. Accepted suffixes:
//! `bps`/`kbps`/`Mbps`, `uW`/`mW`/`W`, `pJ`/`nJ` (optionally `/bit`),
//! `mAh`, `V`, `s`/`h`/`d`. A bare number is taken as the SI base unit
//! (bps, W, J/bit, mAh, V, s).

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("cannot parse {kind} quantity from `{input}`: {reason}")]
pub struct UnitError {
    pub kind: &'static str,
    pub input: String,
    pub reason: String,
}

fn split_number(s: &str) -> Option<(f64, &str)> {
    let s = s.trim();
    let end = s
        .find(|c: char| !(c.is_ascii_digit() || c == '.' || c == '-' || c == '+' || c == 'e' || c == 'E'))
        .unwrap_or(s.len());
    // a trailing exponent sign like "1e" must not swallow the suffix letter
    let (num, rest) = s.split_at(end);
    let value: f64 = num.parse().ok()?;
    Some((value, rest.trim()))
}

fn parse_with(
    kind: &'static str,
    input: &str,
    table: &[(&str, f64)],
) -> Result<f64, UnitError> {
    let err = |reason: &str| UnitError {
        kind,
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let (value, suffix) = split_number(input).ok_or_else(|| err("no leading number"))?;
    if suffix.is_empty() {
        return Ok(value);
    }
    for (name, scale) in table {
        if suffix == *name {
            return Ok(value * scale);
        }
    }
    let known: Vec<&str> = table.iter().map(|(n, _)| *n).collect();
    Err(err(&format!(
        "unknown suffix `{suffix}` (expected one of {})",
        known.join(", ")
    )))
}

/// Bit-rate in bits/s. Suffixes: bps, kbps, Mbps.
pub fn parse_rate(input: &str) -> Result<f64, UnitError> {
    parse_with(
        "bit-rate",
        input,
        &[("bps", 1.0), ("kbps", 1e3), ("Mbps", 1e6)],
    )
}

/// Power in watts. Suffixes: uW, mW, W.
pub fn parse_power(input: &str) -> Result<f64, UnitError> {
    parse_with("power", input, &[("uW", 1e-6), ("mW", 1e-3), ("W", 1.0)])
}

/// Energy per bit in J/bit. Suffixes: pJ, nJ, with optional `/bit`.
pub fn parse_energy_per_bit(input: &str) -> Result<f64, UnitError> {
    let trimmed = input.trim();
    let stripped = trimmed.strip_suffix("/bit").unwrap_or(trimmed);
    parse_with("energy-per-bit", stripped, &[("pJ", 1e-12), ("nJ", 1e-9)])
}

/// Battery charge in mAh (the base unit here is mAh, not coulombs).
pub fn parse_charge_mah(input: &str) -> Result<f64, UnitError> {
    parse_with("charge", input, &[("mAh", 1.0)])
}

/// Voltage in volts.
pub fn parse_voltage(input: &str) -> Result<f64, UnitError> {
    parse_with("voltage", input, &[("V", 1.0)])
}

/// Duration in seconds. Suffixes: s, h, d.
pub fn parse_duration_s(input: &str) -> Result<f64, UnitError> {
    parse_with(
        "duration",
        input,
        &[("s", 1.0), ("h", 3600.0), ("d", 86400.0)],
    )
}

/// Human-readable power for tables (`412 uW`, `4.26 mW`).
pub fn format_power(watts: f64) -> String {
    let a = watts.abs();
    if a == 0.0 {
        "0 W".to_string()
    } else if a < 1e-3 {
        format!("{:.4} uW", watts * 1e6)
    } else if a < 1.0 {
        format!("{:.4} mW", watts * 1e3)
    } else {
        format!("{:.4} W", watts)
    }
}

/// Human-readable bit-rate for tables.
pub fn format_rate(bps: f64) -> String {
    let a = bps.abs();
    if a >= 1e6 {
        format!("{} Mbps", trim_zeros(bps / 1e6))
    } else if a >= 1e3 {
        format!("{} kbps", trim_zeros(bps / 1e3))
    } else {
        format!("{} bps", trim_zeros(bps))
    }
}

fn trim_zeros(v: f64) -> String {
    let s = format!("{v:.3}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_suffixes() {
        assert_eq!(parse_rate("10 kbps").unwrap(), 1e4);
        assert_eq!(parse_rate("4Mbps").unwrap(), 4e6);
        assert_eq!(parse_rate("250 bps").unwrap(), 250.0);
        assert_eq!(parse_rate("512").unwrap(), 512.0);
    }

    #[test]
    fn energy_per_bit_parses_to_si() {
        // "100 pJ/bit" -> 1e-10 J/bit
        assert_eq!(parse_energy_per_bit("100 pJ/bit").unwrap(), 1e-10);
        assert_eq!(parse_energy_per_bit("10 nJ").unwrap(), 1e-8);
        assert_eq!(parse_energy_per_bit("0.3 nJ/bit").unwrap(), 0.3e-9);
    }

    #[test]
    fn power_and_time() {
        assert_eq!(parse_power("150 mW").unwrap(), 0.15);
        assert!((parse_power("10 uW").unwrap() - 1e-5).abs() < 1e-18);
        assert_eq!(parse_duration_s("2 h").unwrap(), 7200.0);
        assert_eq!(parse_duration_s("1 d").unwrap(), 86400.0);
    }

    #[test]
    fn bad_suffix_is_named() {
        let e = parse_rate("5 Gbps").unwrap_err();
        assert!(e.to_string().contains("Gbps"));
        assert!(parse_power("watts").is_err());
    }
}
