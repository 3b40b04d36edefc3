//! Verdicts of exhaustive checks.

use alloc::string::{String, ToString};
use core::fmt;

/// Outcome of one named check at a given truncation level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub id: String,
    pub level: usize,
    /// Number of individual instances examined.
    pub checked: u64,
    /// First counterexample found, if any.
    pub failure: Option<String>,
    pub note: Option<String>,
}

impl Report {
    pub fn pass(id: impl Into<String>, level: usize, checked: u64) -> Self {
        Report { id: id.into(), level, checked, failure: None, note: None }
    }

    pub fn fail(id: impl Into<String>, level: usize, checked: u64, witness: impl Into<String>) -> Self {
        Report { id: id.into(), level, checked, failure: Some(witness.into()), note: None }
    }

    pub fn from_result(id: impl Into<String>, level: usize, checked: u64, res: Result<(), String>) -> Self {
        match res {
            Ok(()) => Self::pass(id, level, checked),
            Err(w) => Self::fail(id, level, checked, w),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Combine sub-reports under one id: passes iff all pass, keeps the first failure.
    pub fn all(id: impl Into<String>, level: usize, parts: &[Report]) -> Self {
        let checked = parts.iter().map(|r| r.checked).sum();
        match parts.iter().find(|r| !r.passed()) {
            None => Self::pass(id, level, checked),
            Some(r) => Self::fail(
                id,
                level,
                checked,
                alloc::format!("{}: {}", r.id, r.failure.as_deref().unwrap_or("")),
            ),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "CHECK {} {}", self.id, verdict)?;
        if let Some(w) = &self.failure {
            write!(f, " witness={w}")?;
        }
        write!(f, " level={} checked={}", self.level, self.checked)?;
        if let Some(n) = &self.note {
            write!(f, " {n}")?;
        }
        Ok(())
    }
}

/// Counts instances and stops at the first failure.
pub(crate) struct Tally {
    pub checked: u64,
}

impl Tally {
    pub fn new() -> Self {
        Tally { checked: 0 }
    }

    #[inline]
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
        self.checked += 1;
        if ok {
            Ok(())
        } else {
            Err(witness())
        }
    }

    pub fn report(self, id: &str, level: usize, res: Result<(), String>) -> Report {
        Report::from_result(id.to_string(), level, self.checked, res)
    }
}
