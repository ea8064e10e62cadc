//! Exact rationals and their text forms.

use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational `{text}`: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

/// Parses `p/q` or a bare integer `p`. The denominator must be positive.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.chars().take(64).collect(),
        reason,
    };
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: i64 = num.parse().map_err(|_| err("bad numerator"))?;
    let den: i64 = den.parse().map_err(|_| err("bad denominator"))?;
    if den <= 0 {
        return Err(err("denominator must be positive"));
    }
    Ok(Rational::new(num, den))
}

/// Always `p/q`, including integers (`1/1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn is_positive(r: &Rational) -> bool {
    r.is_positive()
}

/// Formats a float with 9 significant digits, fixed notation.
pub fn format_sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x.is_zero() {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (8 - magnitude).clamp(0, 30) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
