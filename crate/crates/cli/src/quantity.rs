//! Parsing of unit-suffixed flag values.
//!
//! Scalar flags take an optional suffix matching their documented unit
//! (`0.9ev`, `20.8A`, `300K`, `0.5V`, `2.05e13/s`); a bare number is read in
//! that unit. Compound barrier specs always need suffixes.

use tunnel_chrono::potential::{PotentialProfile, Segment};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// eV; also `mev`.
    Energy,
    /// Å; also `nm`.
    Length,
    /// K.
    Temperature,
    /// V; also `mv`.
    Voltage,
    /// s⁻¹, suffix `/s`.
    Frequency,
    /// Plain real number.
    Number,
    /// Non-negative integer.
    Count,
    /// File path.
    Path,
    /// `height:width[,height:width…]`, e.g. `1.8ev:20.8A`.
    Barrier,
}

impl Kind {
    pub fn unit_label(self) -> &'static str {
        match self {
            Kind::Energy => "eV",
            Kind::Length => "Å",
            Kind::Temperature => "K",
            Kind::Voltage => "V",
            Kind::Frequency => "1/s",
            Kind::Number => "number",
            Kind::Count => "integer",
            Kind::Path => "path",
            Kind::Barrier => "height:width,…",
        }
    }

    fn suffixes(self) -> &'static [(&'static str, f64)] {
        match self {
            Kind::Energy => &[("mev", 1e-3), ("ev", 1.0)],
            Kind::Length => &[("nm", 10.0), ("å", 1.0), ("a", 1.0)],
            Kind::Temperature => &[("k", 1.0)],
            Kind::Voltage => &[("mv", 1e-3), ("v", 1.0)],
            Kind::Frequency => &[("/s", 1.0)],
            _ => &[],
        }
    }
}

fn split_suffix(text: &str, kind: Kind) -> (String, Option<f64>) {
    let lower = text.trim().to_lowercase();
    for &(suffix, scale) in kind.suffixes() {
        if let Some(number) = lower.strip_suffix(suffix) {
            return (number.trim().to_string(), Some(scale));
        }
    }
    (lower, None)
}

fn finite(flag: &str, text: &str, number: &str) -> Result<f64, CliError> {
    match number.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::value(flag, format!("cannot read `{text}` as a number"))),
    }
}

/// Reads a scalar of the given kind, converted to eV, Å, K, V or s⁻¹.
pub fn parse_scalar(flag: &str, text: &str, kind: Kind) -> Result<f64, CliError> {
    let (number, scale) = split_suffix(text, kind);
    Ok(finite(flag, text, &number)? * scale.unwrap_or(1.0))
}

/// Like [`parse_scalar`] but the unit suffix is mandatory.
pub fn parse_suffixed(flag: &str, text: &str, kind: Kind) -> Result<f64, CliError> {
    let (number, scale) = split_suffix(text, kind);
    match scale {
        Some(scale) => Ok(finite(flag, text, &number)? * scale),
        None => Err(CliError::value(flag, format!("`{text}` needs a unit suffix ({})", kind.unit_label()))),
    }
}

pub fn parse_count(flag: &str, text: &str) -> Result<usize, CliError> {
    text.trim().parse().map_err(|_| CliError::value(flag, format!("`{text}` is not a non-negative integer")))
}

pub fn parse_seed(flag: &str, text: &str) -> Result<u64, CliError> {
    text.trim().parse().map_err(|_| CliError::value(flag, format!("`{text}` is not a valid seed")))
}

/// `1.8ev:20.8A` or several segments separated by commas.
pub fn parse_barrier(flag: &str, text: &str) -> Result<PotentialProfile, CliError> {
    let mut segments = Vec::new();
    for part in text.split(',') {
        let (height, width) = part
            .split_once(':')
            .ok_or_else(|| CliError::value(flag, format!("segment `{part}` is not height:width")))?;
        segments.push(Segment {
            height: parse_suffixed(flag, height, Kind::Energy)?,
            width: parse_suffixed(flag, width, Kind::Length)?,
        });
    }
    PotentialProfile::from_segments(segments).map_err(|e| CliError::value(flag, e.to_string()))
}
