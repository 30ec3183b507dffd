//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines always reach stdout; exits nonzero if any criterion fails.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use dichotomy::verify::{Runner, ScanFamily, VerifyReport};

const DECODE_BUDGET: Duration = Duration::from_secs(300);
const SLICE_BUDGET: Duration = Duration::from_secs(60);
const G0_BUDGET: Duration = Duration::from_secs(30);
const SETS_BUDGET: Duration = Duration::from_secs(120);

fn b(pairs: &[(&str, u64)]) -> BTreeMap<String, u64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

struct Check {
    ok: bool,
    notes: Vec<String>,
}

impl Check {
    fn new() -> Self {
        Check { ok: true, notes: Vec::new() }
    }

    fn report(&mut self, r: &VerifyReport) {
        if !r.passed() {
            self.ok = false;
            let first = &r.failures[0];
            self.notes.push(format!(
                "{}: {} failures, first {} (expected {}, got {})",
                r.suite,
                r.failures.len(),
                first.case,
                first.expected,
                first.got
            ));
        } else {
            self.notes.push(format!("{} {} cases", r.suite, r.cases_checked));
        }
    }

    fn require(&mut self, ok: bool, note: impl Into<String>) {
        self.ok &= ok;
        self.notes.push(note.into());
    }

    fn within(&mut self, start: Instant, budget: Duration) {
        let took = start.elapsed();
        self.require(took <= budget, format!("{:.1}s of {}s", took.as_secs_f64(), budget.as_secs()));
    }
}

fn criterion(n: u32, title: &str, f: impl FnOnce(&mut Check)) -> bool {
    let mut c = Check::new();
    f(&mut c);
    println!(
        "criterion {n:>2} {}: {title} [{}]",
        if c.ok { "PASS" } else { "FAIL" },
        c.notes.join("; ")
    );
    c.ok
}

fn main() {
    let runner = Runner::new(None, false).unwrap();
    let run = |suite: &str, bounds: &[(&str, u64)]| runner.run_suite(suite, &b(bounds)).unwrap();
    let scan = |f: ScanFamily, d: usize| runner.scan(f, d).unwrap();
    let mut all = true;

    all &= criterion(1, "decode equivalence over 2^{≤21}", |c| {
        let start = Instant::now();
        let r = run("decode-equiv", &[("maxlen", 21)]);
        c.report(&r);
        c.require(r.cases_checked == (1 << 22) - 1, format!("{} words", r.cases_checked));
        c.require(r.branch_counts["non_unique"] == 0, "no non-unique witness");
        c.within(start, DECODE_BUDGET);
    });

    all &= criterion(2, "predecessor clauses (a)-(e) over 2^{≤21}", |c| {
        let r = run("lemma5.9", &[("maxlen", 21)]);
        c.report(&r);
        for k in ["pred_lt", "pred_eq", "pred_gt"] {
            c.require(r.branch_counts[k] > 0, format!("{k}={}", r.branch_counts[k]));
        }
        let small = run("lemma5.9", &[("maxlen", 6)]);
        c.require(small.branch_counts["pred_gt"] > 0, "pred_gt seen by length 6");
    });

    all &= criterion(3, "slice clauses (a)(b)(c), |u| ≤ 20, n ≤ 21", |c| {
        let start = Instant::now();
        c.report(&run("lemma5.2", &[("maxlen", 20), ("maxn", 21)]));
        c.within(start, SLICE_BUDGET);
    });

    all &= criterion(4, "mirror pairs disjoint over 2^{≤16}", |c| {
        let r = run("lemma5.8", &[("maxlen", 16), ("pairwise", 10)]);
        c.report(&r);
    });

    all &= criterion(5, "G0 level graphs are spanning trees, N ≤ 12", |c| {
        let start = Instant::now();
        let r = run("g0-tree", &[("N", 12)]);
        c.report(&r);
        for n in 0..=12u32 {
            let e = r.branch_counts[&format!("edges_{n}")];
            c.ok &= e == (1 << n) - 1;
        }
        c.require(r.branch_counts["chromatic_2"] == 12, "χ = 2 for 1 ≤ N ≤ 12");
        c.within(start, G0_BUDGET);
    });

    all &= criterion(6, "partition suites", |c| {
        c.report(&run("def4.2-a2", &[("imax", 8), ("qmax", 8)]));
        c.report(&run("def4.2-s3", &[("imax", 8), ("qmax", 8), ("depth", 12)]));
        c.report(&run("def4.8c-a2", &[("imax", 8)]));
        c.report(&run("partition-cover", &[("qmax", 8)]));
    });

    all &= criterion(7, "Φ tail, i ≤ 6, depth 30", |c| {
        c.report(&run("phi-tail", &[("imax", 6), ("depth", 30)]));
    });

    all &= criterion(8, "K_t / H_t / X₃ set suites on the seeded corpus", |c| {
        let start = Instant::now();
        let corpus = dichotomy::verify::Corpus::build();
        c.require(corpus.binary.len() >= 1000, format!("{} binary points", corpus.binary.len()));
        c.report(&run("lemma5.4a", &[("tlen", 2), ("tmax", 3)]));
        c.report(&run("lemma5.10", &[("tlen", 2), ("tmax", 3)]));
        c.report(&run("a3-x3", &[]));
        c.report(&run("lemma5.5d", &[("tlen", 3), ("tmax", 3)]));
        c.report(&run("lemma5.6", &[("tlen", 2), ("tmax", 3)]));
        c.within(start, SETS_BUDGET);
    });

    all &= criterion(9, "constructive density and discreteness scans", |c| {
        c.report(&run("density", &[("x3len", 12), ("htlen", 10), ("tlen", 2), ("tmax", 2)]));
        for f in [ScanFamily::G0, ScanFamily::A1, ScanFamily::A1rect, ScanFamily::A2] {
            let mut fails = 0;
            let mut cases = 0;
            for d in 0..=10 {
                let r = scan(f, d);
                fails += r.failures.len();
                cases += r.witnesses.len();
            }
            c.require(fails == 0, format!("scan-{f} {cases} witnesses, {fails} failures"));
        }
        let r = scan(ScanFamily::A3rel, 8);
        c.report(&r);
    });

    all &= criterion(10, "reports identical across worker counts", |c| {
        let one = Runner::new(Some(1), false).unwrap();
        let four = Runner::new(Some(4), false).unwrap();
        let cases: &[(&str, &[(&str, u64)])] = &[
            ("decode-equiv", &[("maxlen", 16)]),
            ("lemma5.9", &[("maxlen", 16)]),
            ("lemma5.10", &[]),
            ("def4.2-s3", &[("depth", 10)]),
            ("density", &[("x3len", 8), ("htlen", 6)]),
            ("g0-tree", &[("N", 10)]),
        ];
        for (suite, bounds) in cases {
            let a = one.run_suite(suite, &b(bounds)).unwrap().to_json();
            let z = four.run_suite(suite, &b(bounds)).unwrap().to_json();
            c.require(a == z, format!("{suite} {} bytes", a.len()));
        }
        let a = one.scan(ScanFamily::A2, 6).unwrap().to_json();
        let z = four.scan(ScanFamily::A2, 6).unwrap().to_json();
        c.require(a == z, format!("scan-a2 {} bytes", a.len()));
    });

    if !all {
        std::process::exit(1);
    }
}
