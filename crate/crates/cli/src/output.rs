//! Report emission: 17-digit JSON bodies under a run header, 6-digit summaries.

use serde::{Serialize, Serializer};
use std::io::Write;
use std::path::Path;

/// Float serialized with 17 significant digits; non-finite values become strings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F(pub f64);

impl Serialize for F {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let x = self.0;
        if x.is_nan() {
            s.serialize_str("nan")
        } else if x.is_infinite() {
            s.serialize_str(if x > 0.0 { "inf" } else { "-inf" })
        } else {
            let n: serde_json::Number = format!("{x:.16e}").parse().expect("valid number literal");
            n.serialize(s)
        }
    }
}

/// Run metadata kept apart from the deterministic body.
#[derive(Debug, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub source: String,
    pub elapsed_s: F,
}

impl Header {
    pub fn new(command: &str, source: String, elapsed: std::time::Duration) -> Self {
        Self {
            tool: "riccati",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            source,
            elapsed_s: F(elapsed.as_secs_f64()),
        }
    }
}

#[derive(Serialize)]
struct Document<'a, B: Serialize> {
    header: &'a Header,
    body: &'a B,
}

pub fn document_json<B: Serialize>(header: &Header, body: &B) -> String {
    let mut s = serde_json::to_string_pretty(&Document { header, body }).expect("report serializes");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> std::io::Result<()> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(contents.as_bytes())
}

/// Six significant digits for terminal summaries.
pub fn short(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e6) {
        format!("{x:.5e}")
    } else {
        sig(x, 6)
    }
}

/// Fixed-point rendering with `digits` significant digits.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let rounded: f64 = s.parse().expect("formatted float parses");
    if decimals > 0 && rounded.abs() >= 10f64.powi(mag as i32 + 1) {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        let s = serde_json::to_string(&F(std::f64::consts::PI)).unwrap();
        assert_eq!(s, "3.1415926535897931e+0");
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
        assert_eq!(serde_json::to_string(&F(f64::INFINITY)).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&F(-0.25)).unwrap(), "-2.5000000000000000e-1");
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig(2.404825557695773, 15), "2.40482555769577");
        assert_eq!(sig(30.634606468431975, 15), "30.6346064684320");
        assert_eq!(sig(0.000123456789, 3), "0.000123");
        assert_eq!(sig(9.9999999, 3), "10.0");
        assert_eq!(short(5.783185962946784), "5.78319");
    }
}
