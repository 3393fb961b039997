//! Scalar entries of spec files and command-line arguments.
//!
//! An entry is a JSON number, a `[re, im]` pair of numbers, or a string in
//! the grammar `[-]a[/b][(+|-)c[/d]i]` with `b, d > 0`, for example `"3/5"`,
//! `"-2+1/3i"` or `"0-1i"`. Exact mode accepts integral numbers only; other
//! rationals must be written as strings.

use std::str::FromStr;

use misolab_core::scalar::format_scalar;
use misolab_core::{Mode, Rational, Scalar, C64};
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Number(Number),
    Pair([Number; 2]),
    Text(String),
}

const MAX_EXACT_FLOAT: f64 = 9_007_199_254_740_992.0;

fn number_to_scalar<S: Scalar>(n: &Number) -> Result<S, CliError> {
    if let Some(i) = n.as_i64() {
        return Ok(S::from_i64(i));
    }
    let x = n.as_f64().ok_or_else(|| CliError::Parse(format!("number {n} is out of range")))?;
    match S::MODE {
        Mode::Float => Ok(S::from_c64(C64::new(x, 0.0))),
        Mode::Exact if x.fract() == 0.0 && x.abs() <= MAX_EXACT_FLOAT => Ok(S::from_i64(x as i64)),
        Mode::Exact => Err(CliError::Parse(format!(
            "exact mode needs integers or rational strings, got {n}"
        ))),
    }
}

impl Entry {
    pub fn to_scalar<S: Scalar>(&self) -> Result<S, CliError> {
        match self {
            Entry::Number(n) => number_to_scalar(n),
            Entry::Pair([re, im]) => Ok(number_to_scalar::<S>(re)? + number_to_scalar::<S>(im)? * S::imag_unit()),
            Entry::Text(s) => {
                let (re, im) = parse_gaussian(s)?;
                Ok(S::from_rational_parts(&re, &im))
            }
        }
    }

    /// Strings in exact mode, `[re, im]` pairs in float mode.
    pub fn from_scalar<S: Scalar>(z: &S) -> Entry {
        match S::MODE {
            Mode::Exact => Entry::Text(format_scalar(z)),
            Mode::Float => {
                let c = z.to_c64();
                let num = |x: f64| Number::from_f64(x).unwrap_or_else(|| Number::from(0));
                Entry::Pair([num(c.re), num(c.im)])
            }
        }
    }
}

fn parse_unsigned_ratio(s: &str, full: &str) -> Result<String, CliError> {
    let bad = || CliError::Parse(format!("malformed rational {full:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    if num.is_empty() || !num.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    match den {
        None => Ok(num.to_string()),
        Some(d) => {
            if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) || d.bytes().all(|b| b == b'0') {
                return Err(bad());
            }
            Ok(format!("{num}/{d}"))
        }
    }
}

fn rational(text: &str) -> Rational {
    Rational::from_str(text).expect("validated rational")
}

/// Parses `[-]a[/b][(+|-)c[/d]i]` into real and imaginary parts.
pub fn parse_gaussian(text: &str) -> Result<(Rational, Rational), CliError> {
    let (real_text, imag) = match text.strip_suffix('i') {
        Some(body) => {
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(p, _)| p)
                .last()
                .ok_or_else(|| CliError::Parse(format!("malformed rational {text:?}")))?;
            (&body[..split], Some((&body[split..split + 1], &body[split + 1..])))
        }
        None => (text, None),
    };
    let (neg, digits) = match real_text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, real_text),
    };
    let mut re = rational(&parse_unsigned_ratio(digits, text)?);
    if neg {
        re = -re;
    }
    let im = match imag {
        None => rational("0"),
        Some((sign, digits)) => {
            let v = rational(&parse_unsigned_ratio(digits, text)?);
            if sign == "-" {
                -v
            } else {
                v
            }
        }
    };
    Ok((re, im))
}

/// A vector argument: either a JSON array of entries or comma-separated
/// rational strings such as `0+1i,1`.
pub fn parse_vector_arg<S: Scalar>(text: &str) -> Result<Vec<S>, CliError> {
    let entries: Vec<Entry> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("vector {text:?}: {e}")))?
    } else {
        text.split(',').map(|s| Entry::Text(s.trim().to_string())).collect()
    };
    entries.iter().map(Entry::to_scalar).collect()
}

pub fn parse_scalar_arg<S: Scalar>(text: &str) -> Result<S, CliError> {
    let entry = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("scalar {text:?}: {e}")))?
    } else {
        Entry::Text(text.trim().to_string())
    };
    entry.to_scalar()
}
