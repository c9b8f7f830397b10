use serde::{Deserialize, Serialize};

use crate::finite_check::RsCertificate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TheoremId {
    #[serde(rename = "T1_mod5")]
    T1Mod5,
    #[serde(rename = "T2_mod25")]
    T2Mod25,
    #[serde(rename = "T3_mod7")]
    T3Mod7,
    #[serde(rename = "T4_mod49")]
    T4Mod49,
    #[serde(rename = "regression")]
    Regression,
}

impl TheoremId {
    /// `"1"`..`"4"` or `"regressions"`.
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "1" => Some(TheoremId::T1Mod5),
            "2" => Some(TheoremId::T2Mod25),
            "3" => Some(TheoremId::T3Mod7),
            "4" => Some(TheoremId::T4Mod49),
            "regressions" | "regression" => Some(TheoremId::Regression),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepWitness {
    /// Exponent (or progression index, see `detail`) where the check broke.
    pub exponent: u64,
    pub value: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofStep {
    pub name: String,
    pub status: StepStatus,
    pub order: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<StepWitness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ProofStep {
    pub fn pass(name: impl Into<String>, order: usize) -> Self {
        ProofStep {
            name: name.into(),
            status: StepStatus::Pass,
            order: order as u64,
            witness: None,
            note: None,
        }
    }

    pub fn fail(name: impl Into<String>, order: usize, witness: StepWitness) -> Self {
        ProofStep {
            name: name.into(),
            status: StepStatus::Fail,
            order: order as u64,
            witness: Some(witness),
            note: None,
        }
    }

    pub fn from_outcome(name: impl Into<String>, order: usize, outcome: Result<(), StepWitness>) -> Self {
        match outcome {
            Ok(()) => Self::pass(name, order),
            Err(w) => Self::fail(name, order, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == StepStatus::Pass
    }
}

/// Append-only log of proof steps; `overall` is true iff every step passed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofReport {
    theorem: TheoremId,
    steps: Vec<ProofStep>,
    certificates: Vec<RsCertificate>,
    overall: bool,
}

impl ProofReport {
    pub fn new(theorem: TheoremId) -> Self {
        ProofReport {
            theorem,
            steps: Vec::new(),
            certificates: Vec::new(),
            overall: true,
        }
    }

    pub fn push_step(&mut self, step: ProofStep) {
        self.overall &= step.passed();
        self.steps.push(step);
    }

    pub fn push_certificate(&mut self, cert: RsCertificate) {
        self.certificates.push(cert);
    }

    pub fn theorem(&self) -> TheoremId {
        self.theorem
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    pub fn step(&self, name: &str) -> Option<&ProofStep> {
        self.steps.iter().find(|s| s.name == name)
    }

    pub fn certificates(&self) -> &[RsCertificate] {
        &self.certificates
    }

    pub fn overall(&self) -> bool {
        self.overall
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_tracks_every_step() {
        let mut r = ProofReport::new(TheoremId::T1Mod5);
        assert!(r.overall());
        r.push_step(ProofStep::pass("a", 10));
        assert!(r.overall());
        r.push_step(ProofStep::fail(
            "b",
            10,
            StepWitness {
                exponent: 4,
                value: "1".into(),
                detail: "x".into(),
            },
        ));
        r.push_step(ProofStep::pass("c", 10));
        assert!(!r.overall());
        assert_eq!(r.steps().len(), 3);
    }

    #[test]
    fn theorem_ids() {
        assert_eq!(TheoremId::parse("4"), Some(TheoremId::T4Mod49));
        assert_eq!(TheoremId::parse("regressions"), Some(TheoremId::Regression));
        assert_eq!(TheoremId::parse("9"), None);
        assert_eq!(serde_json::to_string(&TheoremId::T2Mod25).unwrap(), "\"T2_mod25\"");
    }

    #[test]
    fn report_json_shape() {
        let mut r = ProofReport::new(TheoremId::Regression);
        r.push_step(ProofStep::pass("s", 3).with_note("n"));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["theorem"], "regression");
        assert_eq!(v["steps"][0]["status"], "pass");
        assert_eq!(v["steps"][0]["order"], 3);
        assert!(v["steps"][0].get("witness").is_none());
        assert_eq!(v["overall"], true);
        assert!(v["certificates"].as_array().unwrap().is_empty());
    }
}
