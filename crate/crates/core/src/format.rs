//! Locale-independent number formatting with 12 significant digits.

use serde_json::Value;

/// `%.12g`: 12 significant digits, trailing zeros removed, scientific
/// notation outside `1e-5 ≤ |x| < 1e12`.
pub fn g12(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..12).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        g12(x).parse().expect("formatted float parses")
    } else {
        x
    }
}

/// JSON number rounded to 12 significant digits; non-finite values become
/// the strings `"inf"`, `"-inf"`, `"nan"`.
pub fn json_f64(x: f64) -> Value {
    match serde_json::Number::from_f64(round12(x)) {
        Some(n) => Value::Number(n),
        None => Value::String(g12(x)),
    }
}

/// Rounds every float inside a JSON value.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => json_f64(n.as_f64().expect("f64")),
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(g12(0.0), "0");
        assert_eq!(g12(1.0), "1");
        assert_eq!(g12(0.415037499278844), "0.415037499279");
        assert_eq!(g12(-2.5), "-2.5");
        assert_eq!(g12(1e-7), "1e-07");
        assert_eq!(g12(123456789012345.0), "1.23456789012e+14");
        assert_eq!(g12(0.0001), "0.0001");
        assert_eq!(g12(0.00001234), "1.234e-05");
        assert_eq!(g12(999999999999.5), "1e+12");
        assert_eq!(g12(f64::INFINITY), "inf");
    }

    #[test]
    fn json_rounding() {
        assert_eq!(json_f64(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(json_f64(f64::INFINITY), Value::String("inf".into()));
    }
}
