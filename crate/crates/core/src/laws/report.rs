use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::contexts::Mode;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LawId {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "c")]
    C,
    #[serde(rename = "d")]
    D,
    #[serde(rename = "e")]
    E,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "extended-lemma")]
    ExtendedLemma,
    #[serde(rename = "naturality")]
    Naturality,
    #[serde(rename = "leibniz")]
    Leibniz,
    #[serde(rename = "homomorphism")]
    Homomorphism,
    #[serde(rename = "oracle")]
    Oracle,
    #[serde(rename = "initiality")]
    Initiality,
}

impl LawId {
    pub const AXIOMS: [LawId; 6] = [LawId::A, LawId::B, LawId::C, LawId::D, LawId::E, LawId::F];

    pub fn as_str(self) -> &'static str {
        match self {
            LawId::A => "a",
            LawId::B => "b",
            LawId::C => "c",
            LawId::D => "d",
            LawId::E => "e",
            LawId::F => "f",
            LawId::ExtendedLemma => "extended-lemma",
            LawId::Naturality => "naturality",
            LawId::Leibniz => "leibniz",
            LawId::Homomorphism => "homomorphism",
            LawId::Oracle => "oracle",
            LawId::Initiality => "initiality",
        }
    }

    pub fn is_axiom(self) -> bool {
        LawId::AXIOMS.contains(&self)
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for LawId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        [
            LawId::A,
            LawId::B,
            LawId::C,
            LawId::D,
            LawId::E,
            LawId::F,
            LawId::ExtendedLemma,
            LawId::Naturality,
            LawId::Leibniz,
            LawId::Homomorphism,
            LawId::Oracle,
            LawId::Initiality,
        ]
        .into_iter()
        .find(|l| l.as_str() == s)
        .ok_or_else(|| format!("unknown law '{s}'"))
    }
}

/// Which axioms each mode's substitution algebras satisfy.
pub struct ApplicabilityMatrix;

impl ApplicabilityMatrix {
    pub fn axioms(mode: Mode) -> &'static [LawId] {
        use LawId::*;
        match mode {
            Mode::Cartesian => &[A, B, E, F],
            Mode::Linear => &[A, B, C, D],
            Mode::Affine => &[A, B, C, D, E],
            Mode::Relevant => &[A, B, C, D, F],
        }
    }

    pub fn applies(mode: Mode, law: LawId) -> bool {
        !law.is_axiom() || Self::axioms(mode).contains(&law)
    }
}

/// A failing instance, terms printed as s-expressions with their contexts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub inputs: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// No instances exist within the bounds.
    Vacuous,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Vacuous => "vacuous",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: LawId,
    pub mode: Mode,
    pub instances: usize,
    /// Instances with at least one operator node among the inputs.
    pub nondegenerate: usize,
    pub failure_count: usize,
    /// The first failures in enumeration order, so the smallest come first.
    pub failures: Vec<Counterexample>,
    pub status: Status,
}

impl LawReport {
    pub fn new(law: LawId, mode: Mode, instances: usize, nondegenerate: usize, failure_count: usize, failures: Vec<Counterexample>) -> Self {
        let status = if failure_count > 0 {
            Status::Fail
        } else if instances == 0 {
            Status::Vacuous
        } else {
            Status::Pass
        };
        LawReport {
            law,
            mode,
            instances,
            nondegenerate,
            failure_count,
            failures,
            status,
        }
    }

    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Aligned text table, one row per report.
pub fn render_table(reports: &[LawReport]) -> String {
    let mut out = format!(
        "{:<15} {:<10} {:>9} {:>14} {:>9}  {}\n",
        "law", "mode", "instances", "nondegenerate", "failures", "status"
    );
    for r in reports {
        out.push_str(&format!(
            "{:<15} {:<10} {:>9} {:>14} {:>9}  {}\n",
            r.law, r.mode, r.instances, r.nondegenerate, r.failure_count, r.status
        ));
        for c in &r.failures {
            out.push_str(&format!("    inputs: {}\n    lhs: {}\n    rhs: {}\n", c.inputs.join("; "), c.lhs, c.rhs));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix() {
        assert!(ApplicabilityMatrix::applies(Mode::Cartesian, LawId::F));
        assert!(!ApplicabilityMatrix::applies(Mode::Linear, LawId::E));
        assert!(ApplicabilityMatrix::applies(Mode::Linear, LawId::Oracle));
        assert_eq!(ApplicabilityMatrix::axioms(Mode::Affine).len(), 5);
    }

    #[test]
    fn json_shape() {
        let r = LawReport::new(LawId::C, Mode::Linear, 7, 5, 0, vec![]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["law"], "c");
        assert_eq!(v["mode"], "linear");
        assert_eq!(v["instances"], 7);
        assert_eq!(v["failures"], serde_json::json!([]));
        assert_eq!(v["status"], "pass");
        assert_eq!("extended-lemma".parse::<LawId>().unwrap(), LawId::ExtendedLemma);
    }
}
