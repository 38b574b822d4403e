//! Flat pass/fail records for the verification commands.

#[derive(Debug, Clone)]
pub struct CheckRecord {
    /// short machine-friendly check name
    pub name: String,
    /// where the claim lives in the library (module::item)
    pub anchor: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRecord {
    /// |measured - expected| <= tolerance.
    pub fn close(name: &str, anchor: &str, measured: f64, expected: f64, tol: f64) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            measured,
            expected,
            tolerance: tol,
            pass: (measured - expected).abs() <= tol && measured.is_finite(),
        }
    }

    /// measured <= bound (expected reports the bound).
    pub fn below(name: &str, anchor: &str, measured: f64, bound: f64) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            measured,
            expected: bound,
            tolerance: bound,
            pass: measured <= bound && measured.is_finite(),
        }
    }

    /// measured > bound, strictly.
    pub fn above(name: &str, anchor: &str, measured: f64, bound: f64) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            measured,
            expected: bound,
            tolerance: 0.0,
            pass: measured > bound && measured.is_finite(),
        }
    }

    pub fn flag(name: &str, anchor: &str, pass: bool) -> CheckRecord {
        CheckRecord {
            name: name.into(),
            anchor: anchor.into(),
            measured: if pass { 1.0 } else { 0.0 },
            expected: 1.0,
            tolerance: 0.0,
            pass,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct VerificationReport {
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new() -> VerificationReport {
        VerificationReport::default()
    }

    pub fn add(&mut self, record: CheckRecord) {
        self.records.push(record);
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.records.extend(other.records);
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }
}
