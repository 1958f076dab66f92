//! Serialization helpers shared by every JSON report.
//!
//! Rationals are written as exact `"p/q"` strings (integers as `"p/1"`).

use serde::Serializer;

use crate::linrat::Rational;

pub fn fraction(v: &Rational) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn rational_str<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fraction(v))
}

pub fn rational_strs<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(fraction))
}
