//! The JSON run report. Keys are sorted and every field except `timing` is
//! a pure function of the inputs.

use std::cmp::Ordering;

use serde::Serialize;
use serde_json::Value;

use spark_forge_core::dict::{
    uniqueness_threshold, Coherence, ScaledDictionary, SparkCertificate, Verdict,
};
use spark_forge_core::search::BruteForceOutcome;
use spark_forge_core::CheckReport;

#[derive(Clone, Debug, Serialize)]
pub struct Dimensions {
    pub rows: usize,
    pub cols: usize,
    pub blocks: usize,
    pub scale_sq: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub passed: bool,
    pub checked: u64,
    pub failures: u64,
    pub witnesses: Vec<String>,
}

impl From<&CheckReport> for CheckSummary {
    fn from(c: &CheckReport) -> Self {
        CheckSummary {
            name: c.name.to_string(),
            passed: c.passed(),
            checked: c.checked,
            failures: c.failures,
            witnesses: c.witnesses.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    /// `1 + 1/μ`.
    pub coherence_bound: String,
    /// `(1 + 1/(blocks-1)) / μ`, when the blocks are orthonormal.
    pub union_bound: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SparkSummary {
    /// `exact` or `interval`.
    pub verdict: String,
    pub value: Option<usize>,
    pub lower: usize,
    pub upper: usize,
    pub by_bound: bool,
    pub by_search: bool,
    /// `η·μ`.
    pub tightness: String,
    /// Spark against `1 + 1/μ`: `equal`, `greater` or `less`.
    pub coherence_bound_comparison: String,
    pub uniqueness_threshold: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NullVector {
    pub size: usize,
    pub support: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BruteForce {
    pub k_max: usize,
    pub k_checked: usize,
    pub witness: Option<Vec<usize>>,
    pub budget: u64,
    pub budget_exhausted: bool,
    /// Subsets in the size levels that were searched to completion.
    pub exhausted_subsets: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub family: String,
    pub q: usize,
    pub dimensions: Option<Dimensions>,
    pub coherence: Option<String>,
    pub coherence_pair: Option<[usize; 2]>,
    pub bounds: Option<Bounds>,
    pub spark: Option<SparkSummary>,
    pub null_vector: Option<NullVector>,
    pub brute_force: Option<BruteForce>,
    pub checks: Vec<CheckSummary>,
    pub passed: bool,
    pub timing: Timing,
}

fn saturate(v: u128) -> u64 {
    u64::try_from(v).unwrap_or(u64::MAX)
}

impl RunReport {
    pub fn new(command: &str, family: &str, q: usize) -> Self {
        RunReport {
            command: command.into(),
            family: family.into(),
            q,
            dimensions: None,
            coherence: None,
            coherence_pair: None,
            bounds: None,
            spark: None,
            null_vector: None,
            brute_force: None,
            checks: Vec::new(),
            passed: true,
            timing: Timing { elapsed_ms: 0 },
        }
    }

    pub fn set_dictionary(&mut self, d: &ScaledDictionary) {
        self.dimensions = Some(Dimensions {
            rows: d.dimension(),
            cols: d.n_cols(),
            blocks: d.blocks(),
            scale_sq: d.scale_sq(),
        });
    }

    pub fn set_coherence(&mut self, c: &Coherence) {
        self.coherence = Some(c.value.to_string());
        self.coherence_pair = c.pair.map(|(a, b)| [a, b]);
    }

    pub fn set_null_vector(&mut self, support: Vec<usize>) {
        self.null_vector = Some(NullVector {
            size: support.len(),
            support,
        });
    }

    pub fn add_check(&mut self, c: &CheckReport) {
        self.passed &= c.passed();
        self.checks.push(c.into());
    }

    pub fn set_certificate(&mut self, cert: &SparkCertificate) {
        self.coherence = Some(cert.coherence.to_string());
        self.bounds = Some(Bounds {
            coherence_bound: cert.coherence_bound.to_string(),
            union_bound: cert.union_bound.map(|u| u.to_string()),
        });
        let (verdict, value, lower, upper, by_bound, by_search) = match cert.verdict {
            Verdict::Exact { spark, by_bound, by_search } => {
                ("exact", Some(spark), spark, spark, by_bound, by_search)
            }
            Verdict::Interval { lower, upper } => ("interval", None, lower, upper, false, false),
        };
        let comparison = match cert.coherence_bound_comparison() {
            Ordering::Less => "less",
            Ordering::Equal => "equal",
            Ordering::Greater => "greater",
        };
        self.spark = Some(SparkSummary {
            verdict: verdict.into(),
            value,
            lower,
            upper,
            by_bound,
            by_search,
            tightness: cert.tightness_product().to_string(),
            coherence_bound_comparison: comparison.into(),
            uniqueness_threshold: uniqueness_threshold(cert),
        });
        self.set_null_vector(cert.support.clone());
    }

    pub fn set_brute_force(&mut self, out: &BruteForceOutcome, k_max: usize, budget: u128) {
        self.brute_force = Some(BruteForce {
            k_max,
            k_checked: out.k_checked,
            witness: out.witness.clone(),
            budget: saturate(budget),
            budget_exhausted: out.budget_exhausted,
            exhausted_subsets: saturate(out.exhausted_subsets()),
        });
    }

    /// Sorted-key JSON value.
    pub fn to_value(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// The report without its `timing` field, for comparing runs.
    pub fn canonical(&self) -> Value {
        strip_timing(self.to_value())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Drops `timing` from a parsed report, for comparing files on disk.
pub fn strip_timing(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.remove("timing");
    }
    v
}
