//! The JSON system description:
//! `{"maps": [{"num": [c0, ..., cd], "den": [c0, ..., cd]}, ...], "point": [a, b]}`.
//!
//! Coefficients run from the `X^d` term down to `Z^d` and are decimal integers
//! or rationals `"p/q"`, written as strings (bare JSON integers are accepted too).

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{DynamicsError, RationalMapQ, SemigroupSystem};
use crate::algebra::{normalize_point, ProjectivePointQ};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coefficient(pub BigRational);

impl FromStr for Coefficient {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let value = match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|e| format!("bad numerator in {s:?}: {e}"))?;
                let d = BigInt::from_str(d.trim()).map_err(|e| format!("bad denominator in {s:?}: {e}"))?;
                if d.is_zero() {
                    return Err(format!("zero denominator in {s:?}"));
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(BigInt::from_str(s).map_err(|e| format!("bad integer {s:?}: {e}"))?),
        };
        Ok(Coefficient(value))
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<'de> Deserialize<'de> for Coefficient {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Int(i64),
        }
        match Raw::deserialize(de)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(Coefficient(BigRational::from_integer(i.into()))),
        }
    }
}

impl Serialize for Coefficient {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    pub num: Vec<Coefficient>,
    pub den: Vec<Coefficient>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub maps: Vec<MapSpec>,
    pub point: [Coefficient; 2],
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, DynamicsError> {
        serde_json::from_str(text).map_err(|e| DynamicsError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, DynamicsError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DynamicsError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Builds the validated system and normalized base point.
    pub fn build(&self) -> Result<(SemigroupSystem, ProjectivePointQ), DynamicsError> {
        let mut maps = Vec::with_capacity(self.maps.len());
        for (i, m) in self.maps.iter().enumerate() {
            if m.num.len() != m.den.len() {
                return Err(DynamicsError::Map {
                    index: i + 1,
                    message: format!("num has {} coefficients but den has {}", m.num.len(), m.den.len()),
                });
            }
            let num: Vec<BigRational> = m.num.iter().map(|c| c.0.clone()).collect();
            let den: Vec<BigRational> = m.den.iter().map(|c| c.0.clone()).collect();
            let f = RationalMapQ::from_rational(&num, &den)
                .map_err(|e| DynamicsError::Map { index: i + 1, message: e.to_string() })?;
            maps.push(f);
        }
        let system = SemigroupSystem::new(maps)?;
        let point = normalize_point(&self.point[0].0, &self.point[1].0)?;
        Ok((system, point))
    }

    /// Inverse of [`SystemFile::build`] up to normalization.
    pub fn from_system(system: &SemigroupSystem, point: &ProjectivePointQ) -> Self {
        let coeffs = |v: &[BigInt]| v.iter().map(|c| Coefficient(BigRational::from_integer(c.clone()))).collect();
        SystemFile {
            maps: system
                .maps()
                .iter()
                .map(|f| MapSpec { num: coeffs(f.num().coeffs()), den: coeffs(f.den().coeffs()) })
                .collect(),
            point: [
                Coefficient(BigRational::from_integer(point.a().clone())),
                Coefficient(BigRational::from_integer(point.b().clone())),
            ],
        }
    }
}

pub fn load_system(path: &Path) -> Result<(SemigroupSystem, ProjectivePointQ), DynamicsError> {
    SystemFile::load(path)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_strings_rationals_and_integers() {
        let text = r#"{"maps": [{"num": ["1", "0", "1/2"], "den": [0, 0, "1"]},
                                {"num": ["1", "0", "-1"], "den": ["0", "0", "1"]}],
                       "point": ["1/2", "1/3"]}"#;
        let (s, p) = SystemFile::parse(text).unwrap().build().unwrap();
        assert_eq!(s.rank(), 2);
        assert_eq!(s.maps()[0].canonical(), "[2,0,1]/[0,0,2]");
        assert_eq!(p.to_string(), "[3:2]");
        let again = SystemFile::from_system(&s, &p).build().unwrap();
        assert_eq!(again, (s, p));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let text = "{\"maps\": [\n  {\"num\": [\"1\", \"0\",], \"den\": []}\n]}";
        match SystemFile::parse(text) {
            Err(DynamicsError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(
            SystemFile::parse(r#"{"maps": [], "point": ["1", "x"]}"#),
            Err(DynamicsError::Parse { .. })
        ));
    }

    #[test]
    fn semantic_errors_name_the_map() {
        let text = r#"{"maps": [{"num": ["1","0","0"], "den": ["0","1"]}], "point": ["0","1"]}"#;
        assert!(matches!(SystemFile::parse(text).unwrap().build(), Err(DynamicsError::Map { index: 1, .. })));
        let text = r#"{"maps": [{"num": ["1","0","1"], "den": ["0","0","1"]}], "point": ["0","0"]}"#;
        assert!(matches!(SystemFile::parse(text).unwrap().build(), Err(DynamicsError::Algebra(_))));
    }
}
