//! Verdicts shared by the classifier and the computational checks.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "CM")]
    Cm,
    #[serde(rename = "notCM")]
    NotCm,
    #[serde(rename = "unknown")]
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Cm => "CM",
            Status::NotCm => "notCM",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Certainty {
    #[serde(rename = "theorem-cited")]
    TheoremCited,
    #[serde(rename = "computed-certified")]
    ComputedCertified,
    #[serde(rename = "computed-probable")]
    ComputedProbable,
}

impl fmt::Display for Certainty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Certainty::TheoremCited => "theorem-cited",
            Certainty::ComputedCertified => "computed-certified",
            Certainty::ComputedProbable => "computed-probable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleRef {
    pub id: String,
    pub citation: String,
}

impl RuleRef {
    pub fn new(id: &str, citation: impl Into<String>) -> RuleRef {
        RuleRef {
            id: id.to_string(),
            citation: citation.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub certainty: Certainty,
    pub rules: Vec<RuleRef>,
}

impl Verdict {
    pub fn new(status: Status, certainty: Certainty, rules: Vec<RuleRef>) -> Verdict {
        Verdict {
            status,
            certainty,
            rules,
        }
    }

    pub fn unknown(certainty: Certainty) -> Verdict {
        Verdict::new(Status::Unknown, certainty, Vec::new())
    }

    pub fn is_decided(&self) -> bool {
        self.status != Status::Unknown
    }

    /// Two decided verdicts disagree.
    pub fn contradicts(&self, other: &Verdict) -> bool {
        self.is_decided() && other.is_decided() && self.status != other.status
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.status, self.certainty)?;
        if !self.rules.is_empty() {
            let ids: Vec<&str> = self.rules.iter().map(|r| r.id.as_str()).collect();
            write!(f, " [{}]", ids.join(", "))?;
        }
        Ok(())
    }
}
