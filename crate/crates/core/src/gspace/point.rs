use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// A point of one of the space models, in exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointDescriptor {
    Euclidean(Vec<Rational>),
    /// Coordinates reduced into `[0, 1)`.
    Torus(Vec<Rational>),
    /// Abstract models have no coordinates; a point names its stratum.
    Abstract(String),
}

impl PointDescriptor {
    pub fn torus(coords: Vec<Rational>) -> Self {
        PointDescriptor::Torus(coords.into_iter().map(reduce_mod_one).collect())
    }

    pub fn coords(&self) -> Option<&[Rational]> {
        match self {
            PointDescriptor::Euclidean(c) | PointDescriptor::Torus(c) => Some(c),
            PointDescriptor::Abstract(_) => None,
        }
    }

    pub fn to_f64(&self) -> Option<Vec<f64>> {
        self.coords().map(|c| c.iter().map(rational_to_f64).collect())
    }

    /// `self + t * direction`, reduced for torus points.
    pub fn offset(&self, direction: &[Rational], t: Rational) -> Result<PointDescriptor> {
        let shift = |c: &[Rational]| -> Result<Vec<Rational>> {
            if c.len() != direction.len() {
                return Err(Error::Point(format!(
                    "direction of length {} for a point of length {}",
                    direction.len(),
                    c.len()
                )));
            }
            Ok(c.iter().zip(direction).map(|(a, d)| a + d * t).collect())
        };
        match self {
            PointDescriptor::Euclidean(c) => Ok(PointDescriptor::Euclidean(shift(c)?)),
            PointDescriptor::Torus(c) => Ok(PointDescriptor::torus(shift(c)?)),
            PointDescriptor::Abstract(_) => Err(Error::Point("abstract points cannot be displaced".into())),
        }
    }
}

impl fmt::Display for PointDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointDescriptor::Euclidean(c) | PointDescriptor::Torus(c) => {
                let parts: Vec<String> = c.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            PointDescriptor::Abstract(s) => write!(f, "<{s}>"),
        }
    }
}

pub fn reduce_mod_one(x: Rational) -> Rational {
    x - x.floor()
}

pub fn is_integer(x: &Rational) -> bool {
    x.is_integer()
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// Parses `"3"`, `"-1/2"` or a JSON integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Point(format!("'{s}' is not a rational number"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Serde adapter: rationals travel as strings (`"1/2"`) or integers.
pub mod serde_rational {
    use super::*;

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(i64),
        Text(String),
    }

    pub fn parse_value<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(i) => Ok(Rational::from_integer(i)),
            Repr::Text(s) => parse_rational(&s).map_err(serde::de::Error::custom),
        }
    }

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        format_rational(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        parse_value(d)
    }

    pub mod vec {
        use super::*;

        #[derive(Deserialize)]
        struct Wrapped(#[serde(deserialize_with = "super::parse_value")] Rational);

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            xs.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            Ok(Vec::<Wrapped>::deserialize(d)?.into_iter().map(|w| w.0).collect())
        }
    }
}

pub(crate) fn abs_max(xs: &[Rational]) -> Rational {
    xs.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
}
