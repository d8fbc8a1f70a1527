use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// ChaCha8 seeded with `seed`, on the stream selected by the 64-bit FNV-1a
/// hash of `name`. Each check draws from its own stream so adding or
/// reordering checks never shifts another check's samples.
pub fn stream_rng(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(name));
    rng
}

pub fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// What a check measured and the criterion it was held to.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Measure {
    /// Passes iff `count == expected`.
    Count { count: u64, expected: u64 },
    /// Passes iff `residual < threshold`.
    Residual { residual: f64, threshold: f64 },
    /// Passes iff `value >= threshold`.
    AtLeast { value: f64, threshold: f64 },
    /// The check could not be carried out.
    Failed { error: String },
}

impl Measure {
    fn passes(&self) -> bool {
        match self {
            Measure::Count { count, expected } => count == expected,
            Measure::Residual { residual, threshold } => residual.is_finite() && residual < threshold,
            Measure::AtLeast { value, threshold } => value >= threshold,
            Measure::Failed { .. } => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub name: String,
    #[serde(flatten)]
    pub measure: Measure,
    pub pass: bool,
}

impl CheckRecord {
    pub fn new(name: impl Into<String>, measure: Measure) -> Self {
        let pass = measure.passes();
        Self { name: name.into(), measure, pass }
    }

    pub fn count(name: &str, count: usize, expected: usize) -> Self {
        Self::new(name, Measure::Count { count: count as u64, expected: expected as u64 })
    }

    pub fn residual(name: &str, residual: f64, threshold: f64) -> Self {
        Self::new(name, Measure::Residual { residual, threshold })
    }

    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self::new(name, Measure::AtLeast { value, threshold })
    }

    pub fn failed(name: &str, error: impl ToString) -> Self {
        Self::new(name, Measure::Failed { error: error.to_string() })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    /// Sorted by name.
    pub records: Vec<CheckRecord>,
    pub pass: bool,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(
        suite: &str,
        seed: u64,
        samples: Option<usize>,
        tol: Option<f64>,
        mut records: Vec<CheckRecord>,
        wall_time_s: f64,
    ) -> Self {
        records.sort_by(|a, b| a.name.cmp(&b.name));
        let pass = !records.is_empty() && records.iter().all(|r| r.pass);
        Self { suite: suite.to_string(), seed, samples, tol, records, pass, wall_time_s }
    }

    pub fn record(&self, name: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.name == name)
    }

    /// JSON with the wall time zeroed: identical for identical inputs.
    pub fn deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.wall_time_s = 0.0;
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
        for r in &self.records {
            let detail = match &r.measure {
                Measure::Count { count, expected } => format!("{count} (expected {expected})"),
                Measure::Residual { residual, threshold } => format!("{residual:.3e} < {threshold:.0e}"),
                Measure::AtLeast { value, threshold } => format!("{value:.3e} >= {threshold:.0e}"),
                Measure::Failed { error } => format!("error: {error}"),
            };
            out.push_str(&format!("  {} {:<44} {detail}\n", if r.pass { "PASS" } else { "FAIL" }, r.name));
        }
        out.push_str(&format!("{} in {:.2}s\n", if self.pass { "PASS" } else { "FAIL" }, self.wall_time_s));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: u64 = stream_rng(7, "x").random();
        let b: u64 = stream_rng(7, "x").random();
        let c: u64 = stream_rng(7, "y").random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(fnv1a(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a("a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn pass_flags() {
        assert!(CheckRecord::residual("r", 1e-9, 1e-8).pass);
        assert!(!CheckRecord::residual("r", f64::NAN, 1e-8).pass);
        assert!(!CheckRecord::count("c", 3, 4).pass);
        assert!(CheckRecord::at_least("g", 1e7, 1e6).pass);
        let rep = Report::new("s", 1, None, None, vec![CheckRecord::count("b", 1, 1), CheckRecord::failed("a", "x")], 0.5);
        assert_eq!(rep.records[0].name, "a");
        assert!(!rep.pass);
        assert!(rep.deterministic_json().contains("\"wall_time_s\": 0.0"));
        assert!(rep.to_json().contains("\"kind\": \"failed\""));
    }
}
