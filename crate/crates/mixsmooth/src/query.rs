//! Embedding queries: the decision to make and its exact parameters.
//!
//! ```json
//! { "decision": "besov-to-lip", "p": "2", "tau": "3/2", "theta": "2",
//!   "alpha": ["1"], "b": ["1"], "xi": ["1/2"] }
//! ```
//!
//! Rationals are strings (`"3/2"`, `"0.25"`, `"inf"`) or JSON integers;
//! floating-point numbers are rejected because they are not exact. Axis
//! indices such as `j0` are 0-based.

use std::fmt;
use std::path::Path;

use anyhow::{anyhow, Context, Result};
use mixsmooth_core::embedding::{
    decide_besov_to_lip, decide_cross_exponent, decide_lip_to_besov, decide_lip_to_lip, decide_third_index, Direction,
    EmbeddingVerdict, ExtRational, RationalParams,
};
use mixsmooth_core::embedding::BigRational;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Decision {
    BesovToLip,
    LipToBesov,
    ThirdIndex,
    CrossExponent,
    LipToLip,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::BesovToLip => "besov-to-lip",
            Decision::LipToBesov => "lip-to-besov",
            Decision::ThirdIndex => "third-index",
            Decision::CrossExponent => "cross-exponent",
            Decision::LipToLip => "lip-to-lip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionJson {
    IntoLip,
    FromLip,
}

/// An exact extended rational read from a string or an integer.
#[derive(Debug, Clone, PartialEq)]
pub struct Exact(pub ExtRational);

impl<'de> Deserialize<'de> for Exact {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Exact;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exact rational such as \"3/2\", \"inf\" or an integer")
            }

            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Exact, E> {
                ExtRational::parse(s).map(Exact).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, n: i64) -> std::result::Result<Exact, E> {
                Ok(Exact(ExtRational::int(n)))
            }

            fn visit_u64<E: de::Error>(self, n: u64) -> std::result::Result<Exact, E> {
                i64::try_from(n).map(|n| Exact(ExtRational::int(n))).map_err(E::custom)
            }

            fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<Exact, E> {
                Err(E::custom(format!("{x} is a floating-point number; write it as an exact string")))
            }
        }
        d.deserialize_any(V)
    }
}

/// An exact finite rational.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactFinite(pub BigRational);

impl<'de> Deserialize<'de> for ExactFinite {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Exact::deserialize(d)?.0 {
            ExtRational::Finite(q) => Ok(ExactFinite(q)),
            ExtRational::Infinity => Err(de::Error::custom("must be finite")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QueryFile {
    pub decision: Decision,
    #[serde(default)]
    pub direction: Option<DirectionJson>,
    pub p: Option<Exact>,
    pub tau: Option<Exact>,
    pub theta: Option<Exact>,
    pub p0: Option<Exact>,
    pub p1: Option<Exact>,
    pub tau0: Option<Exact>,
    pub tau1: Option<Exact>,
    pub theta0: Option<Exact>,
    pub theta1: Option<Exact>,
    pub q: Option<Exact>,
    pub r: Option<Exact>,
    pub alpha: Option<Vec<ExactFinite>>,
    pub b: Option<Vec<ExactFinite>>,
    pub xi: Option<Vec<ExactFinite>>,
    pub alpha0: Option<Vec<ExactFinite>>,
    pub alpha1: Option<Vec<ExactFinite>>,
    pub b0: Option<Vec<ExactFinite>>,
    pub b1: Option<Vec<ExactFinite>>,
    pub j0: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Query {
    pub decision: Decision,
    pub direction: Option<Direction>,
    pub params: RationalParams,
    /// The file as read, echoed into reports.
    pub raw: serde_json::Value,
}

pub fn parse_query(text: &str) -> Result<Query> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: QueryFile =
        serde_path_to_error::deserialize(de).map_err(|e| anyhow!("invalid query at `{}`: {}", e.path(), e.inner()))?;
    let raw: serde_json::Value = serde_json::from_str(text)?;
    let one = |v: Option<Exact>| v.map(|e| e.0);
    let many = |v: Option<Vec<ExactFinite>>| v.map(|v| v.into_iter().map(|e| e.0).collect());
    let direction = file.direction.map(|d| match d {
        DirectionJson::IntoLip => Direction::IntoLip,
        DirectionJson::FromLip => Direction::FromLip,
    });
    if matches!(file.decision, Decision::ThirdIndex | Decision::CrossExponent) && direction.is_none() {
        return Err(anyhow!("invalid query at `direction`: required for `{}`", file.decision.as_str()));
    }
    let params = RationalParams {
        p: one(file.p),
        tau: one(file.tau),
        theta: one(file.theta),
        p0: one(file.p0),
        p1: one(file.p1),
        tau0: one(file.tau0),
        tau1: one(file.tau1),
        theta0: one(file.theta0),
        theta1: one(file.theta1),
        q: one(file.q),
        r: one(file.r),
        alpha: many(file.alpha),
        b: many(file.b),
        xi: many(file.xi),
        alpha0: many(file.alpha0),
        alpha1: many(file.alpha1),
        b0: many(file.b0),
        b1: many(file.b1),
        j0: file.j0,
    };
    Ok(Query {
        decision: file.decision,
        direction,
        params,
        raw,
    })
}

pub fn load_query(path: &Path) -> Result<Query> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_query(&text)
}

pub fn decide(q: &Query) -> EmbeddingVerdict {
    let dir = q.direction.unwrap_or(Direction::IntoLip);
    match q.decision {
        Decision::BesovToLip => decide_besov_to_lip(&q.params),
        Decision::LipToBesov => decide_lip_to_besov(&q.params),
        Decision::ThirdIndex => decide_third_index(&q.params, dir),
        Decision::CrossExponent => decide_cross_exponent(&q.params, dir),
        Decision::LipToLip => decide_lip_to_lip(&q.params),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mixsmooth_core::embedding::Status;

    #[test]
    fn parses_exact_values() {
        let q = parse_query(r#"{"decision":"besov-to-lip","p":2,"tau":"3/2","theta":"inf","alpha":["1"],"b":["1/10"],"xi":["2/3"]}"#).unwrap();
        assert_eq!(q.params.theta, Some(ExtRational::Infinity));
        assert_eq!(decide(&q).status, Status::Holds);
    }

    #[test]
    fn floats_are_rejected_with_a_path() {
        let e = parse_query(r#"{"decision":"besov-to-lip","p":2,"tau":1.5}"#).unwrap_err().to_string();
        assert!(e.contains("`tau`"), "{e}");
        let e = parse_query(r#"{"decision":"besov-to-lip","alpha":["1","x/2"]}"#).unwrap_err().to_string();
        assert!(e.contains("alpha[1]"), "{e}");
        let e = parse_query(r#"{"decision":"third-index","q":"2"}"#).unwrap_err().to_string();
        assert!(e.contains("direction"), "{e}");
        let e = parse_query(r#"{"decision":"besov-to-lip","b":["inf"]}"#).unwrap_err().to_string();
        assert!(e.contains("b[0]"), "{e}");
    }
}
