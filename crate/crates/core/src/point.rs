use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub type Complex = num_complex::Complex64;

/// A point of the extended complex plane.
///
/// Serialized as `{"re": .., "im": ..}` for finite points and as the string
/// `"inf"` for the point at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ComplexPoint {
    Finite(Complex),
    Infinity,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexPoint::Finite(Complex::new(re, im))
    }

    pub fn real(re: f64) -> Self {
        ComplexPoint::Finite(Complex::new(re, 0.0))
    }

    pub fn finite(self) -> Option<Complex> {
        match self {
            ComplexPoint::Finite(z) => Some(z),
            ComplexPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ComplexPoint::Infinity)
    }

    /// `1 / conj(u)`, the reflection in the unit circle.
    pub fn reflect(self) -> Self {
        match self {
            ComplexPoint::Infinity => ComplexPoint::real(0.0),
            ComplexPoint::Finite(z) if z == Complex::new(0.0, 0.0) => ComplexPoint::Infinity,
            ComplexPoint::Finite(z) => ComplexPoint::Finite(1.0 / z.conj()),
        }
    }
}

impl From<Complex> for ComplexPoint {
    fn from(z: Complex) -> Self {
        ComplexPoint::Finite(z)
    }
}

impl fmt::Display for ComplexPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexPoint::Finite(z) => write!(f, "{},{}", z.re, z.im),
            ComplexPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// Parses `inf`, `RE` or `RE,IM`.
impl FromStr for ComplexPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
            return Ok(ComplexPoint::Infinity);
        }
        let bad = || Error::InvalidParameter(format!("cannot parse point '{s}'"));
        let mut parts = s.split(',');
        let re: f64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let im: f64 = match parts.next() {
            Some(p) => p.trim().parse().map_err(|_| bad())?,
            None => 0.0,
        };
        if parts.next().is_some() || !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        Ok(ComplexPoint::new(re, im))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Finite { re: f64, im: f64 },
    Tag(String),
}

impl Serialize for ComplexPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match *self {
            ComplexPoint::Finite(z) => PointRepr::Finite { re: z.re, im: z.im },
            ComplexPoint::Infinity => PointRepr::Tag("inf".to_string()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        match PointRepr::deserialize(deserializer)? {
            PointRepr::Finite { re, im } if re.is_finite() && im.is_finite() => Ok(ComplexPoint::new(re, im)),
            PointRepr::Finite { .. } => Err(serde::de::Error::custom("non-finite coordinates")),
            PointRepr::Tag(t) if t.eq_ignore_ascii_case("inf") => Ok(ComplexPoint::Infinity),
            PointRepr::Tag(t) => Err(serde::de::Error::custom(format!("unknown point tag '{t}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!("inf".parse::<ComplexPoint>().unwrap(), ComplexPoint::Infinity);
        assert_eq!("0.5".parse::<ComplexPoint>().unwrap(), ComplexPoint::new(0.5, 0.0));
        assert_eq!("1,-2".parse::<ComplexPoint>().unwrap(), ComplexPoint::new(1.0, -2.0));
        assert!("1,2,3".parse::<ComplexPoint>().is_err());
        assert!("nan".parse::<ComplexPoint>().is_err());
    }

    #[test]
    fn json_forms() {
        let p = ComplexPoint::new(0.25, -1.0);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"re":0.25,"im":-1.0}"#);
        assert_eq!(serde_json::from_str::<ComplexPoint>(&s).unwrap(), p);
        let inf = serde_json::to_string(&ComplexPoint::Infinity).unwrap();
        assert_eq!(inf, r#""inf""#);
        assert_eq!(
            serde_json::from_str::<ComplexPoint>(&inf).unwrap(),
            ComplexPoint::Infinity
        );
    }

    #[test]
    fn reflection() {
        assert_eq!(ComplexPoint::Infinity.reflect(), ComplexPoint::real(0.0));
        assert_eq!(ComplexPoint::real(0.0).reflect(), ComplexPoint::Infinity);
        let p = ComplexPoint::new(0.0, 0.5).reflect().finite().unwrap();
        assert!((p - Complex::new(0.0, 2.0)).norm() < 1e-15);
    }
}
