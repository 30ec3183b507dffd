//! Verification harness: named suites, bounds with hard caps, JSON reports.

pub mod corpus;
pub mod partitions;
pub mod scan;
pub mod sets;
pub mod sweep;
pub mod words;

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;

pub use corpus::Corpus;
pub use scan::{scan_discrete_cylinders, ScanFamily, ScanWitness};
pub use sweep::{Failure, Tally};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub bounds: BTreeMap<String, u64>,
    pub cases_checked: u64,
    pub branch_counts: BTreeMap<String, u64>,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<ScanWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerifyReport {
    fn from_tally(suite: &str, bounds: BTreeMap<String, u64>, t: Tally) -> Self {
        VerifyReport {
            suite: suite.to_string(),
            bounds,
            cases_checked: t.cases,
            branch_counts: t.branches,
            failures: t.failures,
            witnesses: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `(key, default, cap)` per bound.
type Bounds = &'static [(&'static str, u64, u64)];

pub const SUITES: &[(&str, Bounds)] = &[
    ("decode-equiv", &[("maxlen", 16, 24)]),
    ("lemma5.2", &[("maxlen", 16, 24), ("maxn", 17, 64)]),
    ("lemma5.4a", &[("tlen", 2, 3), ("tmax", 3, 6), ("nmax", 8, 16)]),
    ("lemma5.4b", &[("tlen", 2, 3), ("tmax", 2, 6), ("maxlen", 8, 12)]),
    ("lemma5.5d", &[("tlen", 3, 4), ("tmax", 3, 6)]),
    ("lemma5.6", &[("tlen", 2, 3), ("tmax", 3, 6), ("pmax", 60, 400)]),
    ("lemma5.8", &[("maxlen", 16, 22), ("pairwise", 10, 12)]),
    ("lemma5.9", &[("maxlen", 16, 24)]),
    ("lemma5.10", &[("tlen", 2, 3), ("tmax", 3, 6)]),
    ("def4.2-a2", &[("imax", 8, 16), ("qmax", 8, 16)]),
    ("def4.8c-a2", &[("imax", 8, 16), ("bound", 30030, 1_000_000)]),
    ("def4.2-s3", &[("imax", 8, 16), ("qmax", 8, 16), ("depth", 12, 14)]),
    ("phi-tail", &[("imax", 6, 12), ("depth", 30, 200)]),
    ("g0-tree", &[("N", 12, 16)]),
    ("a3-x3", &[]),
    ("density", &[("x3len", 12, 14), ("htlen", 10, 12), ("tlen", 2, 3), ("tmax", 2, 4)]),
    ("partition-cover", &[("qmax", 8, 16)]),
];

fn corpus() -> &'static Corpus {
    static CORPUS: OnceLock<Corpus> = OnceLock::new();
    CORPUS.get_or_init(Corpus::build)
}

/// Fills defaults, rejects unknown keys and enforces caps.
pub fn resolve_bounds(suite: &str, given: &BTreeMap<String, u64>) -> Result<BTreeMap<String, u64>> {
    let spec = SUITES
        .iter()
        .find(|(n, _)| *n == suite)
        .ok_or_else(|| Error::UnknownSuite(suite.to_string()))?
        .1;
    let mut out = BTreeMap::new();
    for (key, default, cap) in spec {
        let v = given.get(*key).copied().unwrap_or(*default);
        if v > *cap {
            return Err(Error::TooLarge {
                what: key,
                value: v,
                limit: *cap,
            });
        }
        out.insert(key.to_string(), v);
    }
    if let Some(k) = given.keys().find(|k| !out.contains_key(*k)) {
        return Err(Error::Parse(format!("unknown bound {k:?} for suite {suite}")));
    }
    Ok(out)
}

fn run_resolved(suite: &str, b: &BTreeMap<String, u64>) -> Tally {
    let g = |k: &str| b[k];
    match suite {
        "decode-equiv" => words::decode_equiv(g("maxlen") as usize),
        "lemma5.2" => words::slice_growth(g("maxlen") as usize, g("maxn")),
        "lemma5.4a" => sets::ktn_disjoint(corpus(), g("tlen") as usize, g("tmax"), g("nmax")),
        "lemma5.4b" => sets::ktn_in_cylinder(g("tlen") as usize, g("tmax"), g("maxlen") as usize),
        "lemma5.5d" => sets::canonical_chain(g("tlen") as usize, g("tmax")),
        "lemma5.6" => sets::witness_extension(corpus(), g("tlen") as usize, g("tmax"), g("pmax")),
        "lemma5.8" => words::mirror_disjoint(g("maxlen") as usize, g("pairwise") as usize),
        "lemma5.9" => words::predecessors(g("maxlen") as usize),
        "lemma5.10" => sets::h_tilde_homes(corpus(), g("tlen") as usize, g("tmax")),
        "def4.2-a2" => partitions::a2_partition(g("imax"), g("qmax")),
        "def4.8c-a2" => partitions::a2_collapse(g("imax"), g("bound")),
        "def4.2-s3" => partitions::s3_partition(g("imax"), g("qmax"), g("depth") as usize),
        "phi-tail" => partitions::phi_tail(g("imax"), g("depth") as usize),
        "g0-tree" => partitions::g0_tree(g("N") as u32),
        "a3-x3" => sets::a3_in_x3(corpus()),
        "density" => sets::density(g("x3len") as usize, g("htlen") as usize, g("tlen") as usize, g("tmax")),
        "partition-cover" => sets::partition_cover(corpus(), g("qmax")),
        _ => unreachable!("resolve_bounds checked the name"),
    }
}

/// Runs suites on a dedicated worker pool; reports do not depend on its size.
pub struct Runner {
    pool: rayon::ThreadPool,
    timing: bool,
}

impl Runner {
    pub fn new(jobs: Option<usize>, timing: bool) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.unwrap_or(0))
            .build()
            .map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Runner { pool, timing })
    }

    fn stamp(&self, mut r: VerifyReport, start: Instant) -> VerifyReport {
        if self.timing {
            r.elapsed_ms = Some(start.elapsed().as_millis() as u64);
        }
        r
    }

    pub fn run_suite(&self, name: &str, bounds: &BTreeMap<String, u64>) -> Result<VerifyReport> {
        let b = resolve_bounds(name, bounds)?;
        let start = Instant::now();
        let tally = self.pool.install(|| run_resolved(name, &b));
        Ok(self.stamp(VerifyReport::from_tally(name, b, tally), start))
    }

    pub fn scan(&self, family: ScanFamily, depth: usize) -> Result<VerifyReport> {
        let start = Instant::now();
        let (tally, witnesses) = self.pool.install(|| scan_discrete_cylinders(family, depth))?;
        let bounds = BTreeMap::from([("depth".to_string(), depth as u64)]);
        let mut r = VerifyReport::from_tally(&format!("scan-{family}"), bounds, tally);
        r.witnesses = witnesses;
        Ok(self.stamp(r, start))
    }
}

/// Runs a suite on the global pool, without timing.
pub fn run_suite(name: &str, bounds: &BTreeMap<String, u64>) -> Result<VerifyReport> {
    let b = resolve_bounds(name, bounds)?;
    Ok(VerifyReport::from_tally(name, b.clone(), run_resolved(name, &b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn slice_suite_small() {
        let r = run_suite("lemma5.2", &b(&[("maxlen", 10)])).unwrap();
        assert!(r.cases_checked > 0 && r.passed());
        assert_eq!(r.bounds["maxn"], 17);
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(run_suite("lemma9.9", &b(&[])), Err(Error::UnknownSuite(_))));
        assert!(matches!(run_suite("g0-tree", &b(&[("N", 17)])), Err(Error::TooLarge { .. })));
        assert!(matches!(run_suite("g0-tree", &b(&[("depth", 3)])), Err(Error::Parse(_))));
    }

    #[test]
    fn report_json_shape() {
        let r = run_suite("g0-tree", &b(&[("N", 3)])).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["suite", "bounds", "cases_checked", "branch_counts", "failures"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("elapsed_ms").is_none());
    }

    #[test]
    fn jobs_do_not_change_reports() {
        let one = Runner::new(Some(1), false).unwrap();
        let three = Runner::new(Some(3), false).unwrap();
        let bounds = b(&[("maxlen", 12)]);
        for suite in ["lemma5.9", "decode-equiv"] {
            assert_eq!(
                one.run_suite(suite, &bounds).unwrap().to_json(),
                three.run_suite(suite, &bounds).unwrap().to_json()
            );
        }
    }
}
