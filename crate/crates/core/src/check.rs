//! Named residual records produced by every verification routine.

use alloc::string::String;
use alloc::vec::Vec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    /// Passes when the maximum residual is within tolerance.
    Residual,
    /// Passes when the minimum gap is at least `-tolerance`.
    Gap,
    /// Reported value only; never affects pass/fail.
    Info,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    /// The identity being checked, written out.
    pub reference: String,
    pub kind: CheckKind,
    /// Max residual for `Residual`, min gap for `Gap`, the reported value for `Info`.
    pub value: f64,
    pub tolerance: f64,
    pub per_sample: Vec<f64>,
    pub notes: Vec<String>,
}

impl CheckResult {
    pub fn residual(name: &str, reference: &str, per_sample: Vec<f64>, tolerance: f64) -> Self {
        let value = per_sample.iter().fold(0.0f64, |m, &x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x) });
        CheckResult {
            name: name.into(),
            reference: reference.into(),
            kind: CheckKind::Residual,
            value,
            tolerance,
            per_sample,
            notes: Vec::new(),
        }
    }

    pub fn gap(name: &str, reference: &str, per_sample: Vec<f64>, tolerance: f64) -> Self {
        let value =
            per_sample.iter().fold(f64::INFINITY, |m, &x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.min(x) });
        CheckResult {
            name: name.into(),
            reference: reference.into(),
            kind: CheckKind::Gap,
            value,
            tolerance,
            per_sample,
            notes: Vec::new(),
        }
    }

    pub fn info(name: &str, reference: &str, value: f64) -> Self {
        CheckResult {
            name: name.into(),
            reference: reference.into(),
            kind: CheckKind::Info,
            value,
            tolerance: 0.0,
            per_sample: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn samples(&self) -> usize {
        self.per_sample.len()
    }

    pub fn passed(&self) -> bool {
        match self.kind {
            CheckKind::Residual => self.value <= self.tolerance,
            CheckKind::Gap => self.value >= -self.tolerance,
            CheckKind::Info => true,
        }
    }

    pub fn is_informational(&self) -> bool {
        self.kind == CheckKind::Info
    }
}

/// Largest absolute entry, NaN-propagating.
pub fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0f64, |m, &x| if x.is_nan() || m.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn pass_flags() {
        assert!(CheckResult::residual("a", "", vec![1e-12, 3e-10], 1e-9).passed());
        assert!(!CheckResult::residual("a", "", vec![1e-12, 3e-9], 1e-9).passed());
        assert!(!CheckResult::residual("a", "", vec![f64::NAN], 1e-9).passed());
        assert!(CheckResult::gap("g", "", vec![0.5, -1e-7], 1e-6).passed());
        assert!(!CheckResult::gap("g", "", vec![0.5, -1e-5], 1e-6).passed());
        assert!(CheckResult::info("i", "", 42.0).passed());
    }
}
