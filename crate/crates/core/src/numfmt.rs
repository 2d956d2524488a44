//! Byte-stable float formatting for JSON and CSV outputs.

use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// JSON floats use 17 significant digits, CSV floats 12.
pub const JSON_SIG_DIGITS: usize = 17;
pub const CSV_SIG_DIGITS: usize = 12;

/// Scientific notation with a fixed number of significant digits.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{:.*e}", digits.saturating_sub(1), x)
}

struct FixedDigits;

impl Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_sig(value, JSON_SIG_DIGITS).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with every float printed at 17 significant digits, newline
/// terminated. Non-finite floats become `null`.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json emits UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [1.0, -0.1, 1.0 / 3.0, 6.02e23, 5e-324, f64::MAX] {
            let s = fmt_sig(x, JSON_SIG_DIGITS);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_sig(1.0, 17), "1.0000000000000000e0");
        assert_eq!(fmt_sig(0.25, 12), "2.50000000000e-1");
    }

    #[test]
    fn json_output_is_parseable() {
        let v = serde_json::json!({"a": [1.5, -2.0], "b": {"c": 0.1}, "n": 3});
        let s = to_json_string(&v).unwrap();
        assert!(s.contains("1.5000000000000000e0"));
        let back: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"]["c"].as_f64().unwrap(), 0.1);
        assert_eq!(back["n"].as_u64().unwrap(), 3);
    }
}
