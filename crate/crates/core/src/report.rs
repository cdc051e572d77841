//! Pass/fail summaries produced by the verifiers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Witnesses kept per report; further failures are only counted.
pub const MAX_WITNESSES: usize = 8;

/// Outcome of one exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: &'static str,
    /// Number of individual conditions evaluated.
    pub checked: u64,
    pub failures: u64,
    /// Human-readable counterexamples, at most [`MAX_WITNESSES`].
    pub witnesses: Vec<String>,
}

impl CheckReport {
    pub fn new(name: &'static str) -> Self {
        CheckReport {
            name,
            checked: 0,
            failures: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records one evaluated condition. The witness closure only runs on failure.
    #[inline]
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(witness());
        }
    }

    pub fn fail(&mut self, witness: String) {
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    /// Folds another report of the same check into this one.
    pub fn merge(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failures += other.failures;
        for w in other.witnesses {
            if self.witnesses.len() >= MAX_WITNESSES {
                break;
            }
            self.witnesses.push(w);
        }
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} ({} checked, {} failed)",
            self.name, self.checked, self.failures
        )?;
        if let Some(w) = self.witnesses.first() {
            write!(f, "; first witness: {w}")?;
        }
        Ok(())
    }
}
