//! Unit-suffixed quantities as accepted on the command line.
//!
//! Lengths take `nm`, `um` (or `μm`), `mm`, `cm` or `m`; a bare number is in
//! metres. Temperatures take an optional `K`. The decimal exponent is shifted
//! textually before parsing, so `1000 nm`, `1 um` and `0.001 mm` all parse to
//! the same `f64`.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnitError {
    #[error("empty quantity")]
    Empty,
    #[error("cannot parse number in `{0}`")]
    BadNumber(String),
    #[error("unknown unit `{unit}` in `{input}`")]
    UnknownUnit { input: String, unit: String },
}

const LENGTH_UNITS: [(&str, i32); 7] = [
    ("nm", -9),
    ("um", -6),
    ("μm", -6),
    ("µm", -6),
    ("mm", -3),
    ("cm", -2),
    ("m", 0),
];

fn split_unit(input: &str) -> (&str, &str) {
    let end = input
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_alphabetic() && *c != 'e' && *c != 'E')
        .last()
        .map(|(i, _)| i)
        .unwrap_or(input.len());
    (input[..end].trim(), input[end..].trim())
}

/// Parses `number` and multiplies it by 10^`shift` through the decimal
/// exponent.
fn parse_scaled(input: &str, number: &str, shift: i32) -> Result<f64, UnitError> {
    let bad = || UnitError::BadNumber(input.to_string());
    if number.is_empty() || number.parse::<f64>().is_err() {
        return Err(bad());
    }
    let (mantissa, exponent) = match number.find(['e', 'E']) {
        Some(i) => (
            &number[..i],
            number[i + 1..].parse::<i32>().map_err(|_| bad())?,
        ),
        None => (number, 0),
    };
    let value: f64 = format!("{mantissa}e{}", exponent + shift)
        .parse()
        .map_err(|_| bad())?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Length in metres.
pub fn parse_length(input: &str) -> Result<f64, UnitError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(UnitError::Empty);
    }
    let (number, unit) = split_unit(trimmed);
    let shift = if unit.is_empty() {
        0
    } else {
        LENGTH_UNITS
            .iter()
            .find(|(name, _)| *name == unit)
            .map(|&(_, shift)| shift)
            .ok_or_else(|| UnitError::UnknownUnit {
                input: input.to_string(),
                unit: unit.to_string(),
            })?
    };
    parse_scaled(input, number, shift)
}

/// Temperature in kelvin.
pub fn parse_temperature(input: &str) -> Result<f64, UnitError> {
    let trimmed = input.trim();
    if trimmed.is_empty() {
        return Err(UnitError::Empty);
    }
    let (number, unit) = split_unit(trimmed);
    if !(unit.is_empty() || unit == "K") {
        return Err(UnitError::UnknownUnit {
            input: input.to_string(),
            unit: unit.to_string(),
        });
    }
    parse_scaled(input, number, 0)
}
