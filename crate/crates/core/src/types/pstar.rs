use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// An integrability exponent in `[1, ∞]`.
///
/// Used for the discrepancy exponent `p*` and for its conjugate `p`, with
/// `1/p + 1/p* = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PStar {
    Finite(f64),
    Infinity,
}

impl PStar {
    pub fn new(value: f64) -> Result<Self> {
        if value == f64::INFINITY {
            Ok(PStar::Infinity)
        } else if value.is_finite() && value >= 1.0 {
            Ok(PStar::Finite(value))
        } else {
            Err(Error::InvalidInput(format!(
                "exponent must lie in [1, inf], got {value}"
            )))
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, PStar::Infinity)
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            PStar::Finite(p) => Some(p),
            PStar::Infinity => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            PStar::Finite(p) => p,
            PStar::Infinity => f64::INFINITY,
        }
    }

    /// The conjugate exponent.
    pub fn conjugate(self) -> PStar {
        match self {
            PStar::Infinity => PStar::Finite(1.0),
            PStar::Finite(1.0) => PStar::Infinity,
            PStar::Finite(p) => PStar::Finite(p / (p - 1.0)),
        }
    }
}

impl fmt::Display for PStar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PStar::Finite(p) => write!(f, "{p}"),
            PStar::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for PStar {
    type Err = Error;

    /// Accepts a decimal number or `inf` / `infinity` (any case).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(PStar::Infinity);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidInput(format!("cannot parse exponent {s:?}")))?;
        PStar::new(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_round_trips() {
        for v in [1.0, 2.0, 3.0, 7.0 / 3.0, 1.5, 64.0] {
            let p = PStar::new(v).unwrap();
            let back = p.conjugate().conjugate();
            match back {
                PStar::Finite(b) => assert!((b - v).abs() <= 1e-14 * v, "{v} -> {b}"),
                PStar::Infinity => panic!("{v} became infinite"),
            }
        }
        assert_eq!(PStar::Infinity.conjugate().conjugate(), PStar::Infinity);
        assert_eq!(PStar::Infinity.conjugate(), PStar::Finite(1.0));
        assert_eq!(PStar::Finite(1.0).conjugate(), PStar::Infinity);
        assert_eq!(PStar::Finite(2.0).conjugate(), PStar::Finite(2.0));
    }

    #[test]
    fn conjugacy_relation() {
        for v in [1.25, 2.0, 3.0, 7.0 / 3.0] {
            let p = PStar::new(v).unwrap().conjugate().as_f64();
            assert!((1.0 / p + 1.0 / v - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn parse() {
        assert_eq!("inf".parse::<PStar>().unwrap(), PStar::Infinity);
        assert_eq!(" 2.5 ".parse::<PStar>().unwrap(), PStar::Finite(2.5));
        assert!("0.5".parse::<PStar>().is_err());
        assert!("x".parse::<PStar>().is_err());
        assert!(PStar::new(f64::NAN).is_err());
    }
}
