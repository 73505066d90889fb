//! Pass/fail ledger shared by every verification routine.

use std::fmt::Display;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub c: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub g: Option<usize>,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Inclusive range of crossing numbers covered.
    pub c_range: [usize; 2],
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn find(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    /// Records one check. Compares every `(c, g, expected, actual)` case and
    /// keeps the first mismatch. Skipped when `c_range` is empty.
    pub fn compare<T, I>(&mut self, name: &str, c_range: (usize, usize), cases: I)
    where
        T: PartialEq + Display,
        I: IntoIterator<Item = (usize, Option<usize>, T, T)>,
    {
        if c_range.0 > c_range.1 {
            return;
        }
        let first_counterexample = cases.into_iter().find(|(_, _, e, a)| e != a).map(|(c, g, e, a)| Counterexample {
            c,
            g,
            expected: e.to_string(),
            actual: a.to_string(),
        });
        self.checks.push(Check {
            name: name.to_string(),
            c_range: [c_range.0, c_range.1],
            status: if first_counterexample.is_some() { Status::Fail } else { Status::Pass },
            first_counterexample,
        });
    }

    /// Records a predicate check; the first `c` where it fails becomes the
    /// counterexample.
    pub fn assert_all<I>(&mut self, name: &str, c_range: (usize, usize), cases: I)
    where
        I: IntoIterator<Item = (usize, Option<usize>, bool, String)>,
    {
        self.compare(
            name,
            c_range,
            cases.into_iter().map(|(c, g, ok, detail)| {
                let actual = if ok { "holds".to_string() } else { detail };
                (c, g, "holds".to_string(), actual)
            }),
        );
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One compact JSON object per check.
    pub fn to_json_lines(&self) -> Vec<String> {
        self.checks.iter().map(|c| serde_json::to_string(c).expect("check serializes")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_mismatch_is_kept() {
        let mut r = VerificationReport::new();
        r.compare("a", (3, 5), vec![(3, Some(1), 1, 1), (4, Some(1), 2, 3), (5, Some(2), 4, 5)]);
        assert!(!r.passed());
        let ce = r.find("a").unwrap().first_counterexample.clone().unwrap();
        assert_eq!((ce.c, ce.g, ce.expected.as_str(), ce.actual.as_str()), (4, Some(1), "2", "3"));
    }

    #[test]
    fn empty_range_records_nothing() {
        let mut r = VerificationReport::new();
        r.compare("a", (3, 2), vec![(3, None, 1, 2)]);
        assert!(r.checks.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn json_shape() {
        let mut r = VerificationReport::new();
        r.compare("x", (3, 3), vec![(3, None, 1, 1)]);
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["checks"][0]["status"], "pass");
        assert_eq!(v["checks"][0]["c_range"], serde_json::json!([3, 3]));
        assert!(v["checks"][0].get("first_counterexample").is_none());
    }
}
