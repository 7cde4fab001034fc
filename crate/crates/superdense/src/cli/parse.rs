//! Parsers for the CLI's structured flag values.
//!
//! These take untrusted text and must never panic; they are the crate's fuzz
//! targets. Grammar kept deliberately small:
//!
//! - complex: `re`, `imi`, or `re±imi`, with `i` suffixing the imaginary
//!   part (`0.5`, `-0.3i`, `1+2i`, `i`, `1e-3-2e2i`);
//! - spectrum: comma-separated probabilities, renormalized when the sum is
//!   within `1e-6` of 1 and rejected otherwise;
//! - range: `start:stop:steps` with `steps` points spaced inclusively;
//! - dimension list: comma-separated positive integers.

use std::fmt;

use crate::qmath::Scalar;

/// How a flag value failed to parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    Empty,
    BadNumber(String),
    BadComplex(String),
    NegativeEntry(String),
    BadSum(String),
    BadRange(String),
    BadInteger(String),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Empty => write!(f, "empty value"),
            ParseError::BadNumber(s) => write!(f, "not a number: '{s}'"),
            ParseError::BadComplex(s) => write!(f, "not a complex number: '{s}'"),
            ParseError::NegativeEntry(s) => write!(f, "negative entry: {s}"),
            ParseError::BadSum(s) => write!(f, "probabilities must sum to 1 within 1e-6, got {s}"),
            ParseError::BadRange(s) => write!(f, "range must be start:stop:steps, got '{s}'"),
            ParseError::BadInteger(s) => write!(f, "not a positive integer: '{s}'"),
        }
    }
}

impl std::error::Error for ParseError {}

fn parse_real(s: &str) -> Result<f64, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let x: f64 = t.parse().map_err(|_| ParseError::BadNumber(t.into()))?;
    if !x.is_finite() {
        return Err(ParseError::BadNumber(t.into()));
    }
    Ok(x)
}

/// Parses `re`, `imi`, or `re±imi`. A bare sign before `i` means ±1;
/// whitespace is ignored throughout.
pub fn parse_complex(s: &str) -> Result<Scalar, ParseError> {
    let squeezed: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let t = squeezed.as_str();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // Split at the last +/- that is not leading and not an exponent sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let b = bytes[idx];
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let re = if re_str.is_empty() {
            0.0
        } else {
            parse_real(re_str)?
        };
        let im = match im_str.trim() {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => parse_real(other)?,
        };
        return Ok(Scalar::new(re, im));
    }
    Ok(Scalar::new(parse_real(t)?, 0.0))
}

/// Parses a comma-separated probability vector. Entries must be finite and
/// nonnegative; a total within `1e-6` of 1 is silently renormalized,
/// anything farther off is an error.
pub fn parse_spectrum(s: &str) -> Result<Vec<f64>, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut out = Vec::new();
    for part in t.split(',') {
        let x = parse_real(part)?;
        if x < 0.0 {
            return Err(ParseError::NegativeEntry(format!("{x}")));
        }
        out.push(x);
    }
    let sum: f64 = out.iter().sum();
    if (sum - 1.0).abs() > 1e-6 {
        return Err(ParseError::BadSum(format!("{sum}")));
    }
    for x in &mut out {
        *x /= sum;
    }
    Ok(out)
}

/// An inclusive linear sweep grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepRange {
    /// The grid points: `steps` values from `start` to `stop` inclusive;
    /// a single step collapses to `start`.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.start + h * i as f64).collect()
    }
}

/// Parses `start:stop:steps`.
pub fn parse_range(s: &str) -> Result<SweepRange, ParseError> {
    let t = s.trim();
    let parts: Vec<&str> = t.split(':').collect();
    if parts.len() != 3 {
        return Err(ParseError::BadRange(t.into()));
    }
    let start = parse_real(parts[0])?;
    let stop = parse_real(parts[1])?;
    let steps: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| ParseError::BadInteger(parts[2].into()))?;
    if steps == 0 {
        return Err(ParseError::BadRange("zero steps".into()));
    }
    Ok(SweepRange { start, stop, steps })
}

/// Parses a comma-separated list of positive integers.
pub fn parse_dim_list(s: &str) -> Result<Vec<usize>, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut out = Vec::new();
    for part in t.split(',') {
        let n: usize = part
            .trim()
            .parse()
            .map_err(|_| ParseError::BadInteger(part.trim().into()))?;
        if n == 0 {
            return Err(ParseError::BadInteger("0".into()));
        }
        out.push(n);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), Scalar::new(0.5, 0.0));
        assert_eq!(parse_complex("-2").unwrap(), Scalar::new(-2.0, 0.0));
        assert_eq!(parse_complex("0.3i").unwrap(), Scalar::new(0.0, 0.3));
        assert_eq!(parse_complex("-0.5i").unwrap(), Scalar::new(0.0, -0.5));
        assert_eq!(parse_complex("i").unwrap(), Scalar::new(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), Scalar::new(0.0, -1.0));
        assert_eq!(parse_complex("1+2i").unwrap(), Scalar::new(1.0, 2.0));
        assert_eq!(parse_complex("1.5-0.25i").unwrap(), Scalar::new(1.5, -0.25));
        assert_eq!(
            parse_complex("1e-3+2e2i").unwrap(),
            Scalar::new(1e-3, 200.0)
        );
        assert_eq!(parse_complex(" 1 + 2i ").unwrap(), Scalar::new(1.0, 2.0));
        assert_eq!(parse_complex("3+i").unwrap(), Scalar::new(3.0, 1.0));
        assert_eq!(parse_complex("3-i").unwrap(), Scalar::new(3.0, -1.0));
    }

    #[test]
    fn complex_rejects_junk() {
        for bad in [
            "", "  ", "abc", "1+2", "++i", "1i2", "nan", "inf", "1+infi", "--3",
        ] {
            assert!(parse_complex(bad).is_err(), "accepted '{bad}'");
        }
    }

    #[test]
    fn spectrum_renormalizes_small_drift() {
        let got = parse_spectrum("0.3333,0.3333,0.3334").unwrap();
        assert!((got.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn spectrum_rejects_bad_input() {
        assert!(matches!(
            parse_spectrum("0.5,0.6"),
            Err(ParseError::BadSum(_))
        ));
        assert!(matches!(
            parse_spectrum("-0.1,1.1"),
            Err(ParseError::NegativeEntry(_))
        ));
        assert!(parse_spectrum("0.5,,0.5").is_err());
        assert!(parse_spectrum("").is_err());
        assert!(parse_spectrum("0.5,abc").is_err());
    }

    #[test]
    fn range_grid() {
        let r = parse_range("0:1:11").unwrap();
        let v = r.values();
        assert_eq!(v.len(), 11);
        assert!((v[0] - 0.0).abs() < 1e-15);
        assert!((v[10] - 1.0).abs() < 1e-15);
        assert!((v[5] - 0.5).abs() < 1e-15);

        let single = parse_range("0.7:0.9:1").unwrap();
        assert_eq!(single.values(), vec![0.7]);
    }

    #[test]
    fn range_rejects_malformed() {
        for bad in ["", "0:1", "0:1:0", "0:1:2:3", "a:1:2", "0:b:2", "0:1:x"] {
            assert!(parse_range(bad).is_err(), "accepted '{bad}'");
        }
    }

    #[test]
    fn dim_list() {
        assert_eq!(parse_dim_list("2,3,4,6").unwrap(), vec![2, 3, 4, 6]);
        assert_eq!(parse_dim_list(" 2 , 3 ").unwrap(), vec![2, 3]);
        assert!(parse_dim_list("2,0").is_err());
        assert!(parse_dim_list("2,-3").is_err());
        assert!(parse_dim_list("").is_err());
        assert!(parse_dim_list("2,x").is_err());
    }
}
