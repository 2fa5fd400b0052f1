//! Families, colored covers, and the combinators that build covers from
//! covers of pieces.

pub mod combine;
pub mod family;
pub mod pullback;
pub mod saturate;
pub mod verify;

use serde::{Deserialize, Serialize};

pub use combine::{finite_union_cover, union_combine, Evidence, PieceCheck, UnionInput, YGap};
pub use family::{ColoredCover, Family};
pub use pullback::{bounded_geometry, pullback_cover};
pub use saturate::{close_pairs, saturated_union};
pub use verify::{verify_cover, FamilyReport, VerifyReport};

/// One hypothesis check performed while building a cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub stage: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Ordered record of hypothesis checks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub checks: Vec<Check>,
}

impl Transcript {
    /// Records a check; a failed check becomes a hypothesis error.
    pub fn require(
        &mut self,
        stage: &str,
        name: &str,
        passed: bool,
        detail: impl Into<String>,
    ) -> crate::Result<()> {
        let detail = detail.into();
        self.checks.push(Check {
            stage: stage.to_string(),
            name: name.to_string(),
            passed,
            detail: detail.clone(),
        });
        if passed {
            Ok(())
        } else {
            Err(crate::Error::hypothesis(stage, name, detail))
        }
    }

    /// Records a check without failing.
    pub fn record(&mut self, stage: &str, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            stage: stage.to_string(),
            name: name.to_string(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: Transcript) {
        self.checks.extend(other.checks);
    }

    pub fn len(&self) -> usize {
        self.checks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.checks.is_empty()
    }
}
