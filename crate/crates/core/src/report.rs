//! JSON output: the stable report schema and serde helpers for rationals
//! and polynomials.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{AcmError, Result};
use crate::partition::Partition;
use crate::poly::{Monomial, Poly};
use crate::scalar::{parse_rational, Field, Scalar};
use crate::series::HilbertData;
use crate::verdict::Verdict;

/// `BigRational` as a `"p/q"` string.
pub mod rational {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::scalar::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

pub mod rational_vec {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::scalar::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect()
    }
}

pub mod rational_pairs {
    use num_rational::BigRational;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use crate::scalar::{format_rational, parse_rational};

    pub fn serialize<S: Serializer>(v: &[(BigRational, BigRational)], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|(a, b)| [format_rational(a), format_rational(b)]))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<(BigRational, BigRational)>, D::Error> {
        let v = Vec::<[String; 2]>::deserialize(d)?;
        v.iter()
            .map(|[a, b]| {
                Ok((
                    parse_rational(a).map_err(D::Error::custom)?,
                    parse_rational(b).map_err(D::Error::custom)?,
                ))
            })
            .collect()
    }
}

pub fn parse_scalar(s: &str, field: Field) -> Result<Scalar> {
    Scalar::from_rational(field, &parse_rational(s)?)
}

/// Polynomial as a list of `[exponents, "coeff"]` pairs.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| json!([m.exps(), c.to_string()]))
            .collect(),
    )
}

pub fn poly_from_json(v: &Value, nvars: usize, field: Field) -> Result<Poly> {
    let bad = || AcmError::Parse("bad polynomial term list".into());
    let mut p = Poly::zero(nvars, field);
    for t in v.as_array().ok_or_else(bad)? {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(bad)?;
        let exps: Vec<u16> = serde_json::from_value(pair[0].clone()).map_err(|_| bad())?;
        if exps.len() != nvars {
            return Err(AcmError::VarCountMismatch {
                expected: nvars,
                found: exps.len(),
            });
        }
        let c = parse_scalar(pair[1].as_str().ok_or_else(bad)?, field)?;
        p.add_term(Monomial::from_exps(&exps), c);
    }
    Ok(p)
}

/// The stable report emitted by every subcommand with `--json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub target: String,
    pub lambda: Option<Partition>,
    pub field: Option<Field>,
    pub dims: Option<Vec<u64>>,
    pub denominator_degrees: Option<Vec<u32>>,
    pub numerator: Option<Vec<i64>>,
    pub verdict: Option<Verdict>,
    pub certificate: Option<Value>,
    pub seed: Option<u64>,
    /// Rule trace of a classification.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Value>,
    /// Labels such as evidence notes and conjectural predictions.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(target: impl Into<String>) -> Report {
        Report {
            target: target.into(),
            lambda: None,
            field: None,
            dims: None,
            denominator_degrees: None,
            numerator: None,
            verdict: None,
            certificate: None,
            seed: None,
            trace: None,
            notes: Vec::new(),
        }
    }

    pub fn with_hilbert(mut self, h: &HilbertData) -> Report {
        self.field = Some(h.field);
        self.dims = Some(h.dims.clone());
        self.denominator_degrees = Some(h.denominator_degrees.clone());
        self.numerator = Some(h.trimmed_numerator());
        self
    }

    pub fn with_lambda(mut self, lambda: &Partition) -> Report {
        self.lambda = Some(lambda.clone());
        self
    }

    pub fn with_verdict(mut self, v: Verdict) -> Report {
        self.verdict = Some(v);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Report {
        self.seed = Some(seed);
        self
    }

    pub fn with_certificate(mut self, c: Value) -> Report {
        self.certificate = Some(c);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Report {
        self.notes.push(note.into());
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Rational parameter formatted for report targets.
pub fn target_with_parameter(name: &str, a: &BigRational) -> String {
    format!("{name}[{}]", crate::scalar::format_rational(a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::verdict::{Certainty, RuleRef, Status};

    #[test]
    fn poly_round_trip() {
        let f = Field::Rational;
        let mut p = Poly::zero(3, f);
        p.add_term(Monomial::from_exps(&[2, 0, 1]), Scalar::from_rational(f, &rat(-3, 7)).unwrap());
        p.add_term(Monomial::from_exps(&[0, 1, 0]), Scalar::one(f));
        let back = poly_from_json(&poly_to_json(&p), 3, f).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn report_round_trip() {
        let h = HilbertData::new(vec![1, 1, 2, 2, 3], vec![1, 2], Field::Prime(32003));
        let r = Report::new("arrangement")
            .with_lambda(&Partition::new(vec![3, 2, 1]).unwrap())
            .with_hilbert(&h)
            .with_verdict(Verdict::new(
                Status::NotCm,
                Certainty::ComputedCertified,
                vec![RuleRef::new("numerator", "negative coefficient")],
            ))
            .with_seed(5);
        let v = r.to_json();
        assert_eq!(v["field"], "GF(32003)");
        assert_eq!(v["lambda"], json!([3, 2, 1]));
        assert_eq!(v["verdict"]["status"], "notCM");
        let back: Report = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
