//! Exhaustive enumeration of 2^{≤N}, split by prefix across workers.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::ktree::{decode_bits, Decoded};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Failure {
    pub case: String,
    pub expected: String,
    pub got: String,
}

/// Per-worker accumulator; merging is associative and the final order is fixed
/// by sorting failures.
#[derive(Debug, Default, Clone)]
pub struct Tally {
    pub cases: u64,
    pub branches: BTreeMap<String, u64>,
    pub failures: Vec<Failure>,
}

impl Tally {
    pub fn case(&mut self) {
        self.cases += 1;
    }

    pub fn branch(&mut self, name: &str) {
        *self.branches.entry(name.to_string()).or_default() += 1;
    }

    pub fn ensure_branch(&mut self, name: &str) {
        self.branches.entry(name.to_string()).or_default();
    }

    pub fn fail(&mut self, case: impl Into<String>, expected: impl ToString, got: impl ToString) {
        self.failures.push(Failure {
            case: case.into(),
            expected: expected.to_string(),
            got: got.to_string(),
        });
    }

    /// Records a failure unless `ok`.
    pub fn check(&mut self, ok: bool, case: impl FnOnce() -> String, expected: &str, got: impl FnOnce() -> String) {
        self.case();
        if !ok {
            self.fail(case(), expected, got());
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.cases += other.cases;
        for (k, v) in other.branches {
            *self.branches.entry(k).or_default() += v;
        }
        self.failures.extend(other.failures);
    }

    pub fn finish(mut self) -> Self {
        self.failures.sort();
        self.failures.dedup();
        self
    }
}

pub fn bits_string(bits: &[u8]) -> String {
    bits.iter().map(|&b| char::from(b'0' + b)).collect()
}

/// State handed to the visitor: the current word and the decode of each of its
/// prefixes (`prefixes[k]` decodes `bits[..k]`, so the last entry is the word).
pub struct Node<'a> {
    pub bits: &'a [u8],
    pub prefixes: &'a [Option<Decoded>],
}

impl Node<'_> {
    pub fn decoded(&self) -> Option<&Decoded> {
        self.prefixes.last().unwrap().as_ref()
    }

    /// Longest proper placed prefix of level `≤ max_level`.
    pub fn pred_len(&self, max_level: Option<usize>) -> usize {
        let len = self.bits.len();
        if len <= 1 {
            return 0;
        }
        (1..len)
            .rev()
            .find(|&n| {
                self.prefixes[n]
                    .as_ref()
                    .is_some_and(|d| max_level.map_or(true, |l| d.level() <= l))
            })
            .unwrap_or(0)
    }
}

fn dfs<F>(bits: &mut Vec<u8>, prefixes: &mut Vec<Option<Decoded>>, maxlen: usize, visit: &F, acc: &mut Tally)
where
    F: Fn(&Node<'_>, &mut Tally),
{
    visit(
        &Node {
            bits,
            prefixes,
        },
        acc,
    );
    if bits.len() == maxlen {
        return;
    }
    for b in 0..2u8 {
        bits.push(b);
        prefixes.push(decode_bits(bits));
        dfs(bits, prefixes, maxlen, visit, acc);
        prefixes.pop();
        bits.pop();
    }
}

/// Visits every binary word of length `≤ maxlen` exactly once.
pub fn sweep_words<F>(maxlen: usize, visit: F) -> Tally
where
    F: Fn(&Node<'_>, &mut Tally) + Sync,
{
    let split = maxlen.min(10);
    let mut total = Tally::default();
    // short words, serially
    {
        let mut bits = Vec::new();
        let mut prefixes = vec![None];
        dfs(&mut bits, &mut prefixes, split.saturating_sub(1), &|n: &Node<'_>, acc: &mut Tally| {
            if n.bits.len() < split {
                visit(n, acc)
            }
        }, &mut total);
    }
    let parts: Vec<Tally> = (0u32..(1u32 << split))
        .into_par_iter()
        .map(|code| {
            let mut bits: Vec<u8> = (0..split).map(|j| ((code >> (split - 1 - j)) & 1) as u8).collect();
            let mut prefixes: Vec<Option<Decoded>> = (0..=split).map(|k| decode_bits(&bits[..k])).collect();
            let mut acc = Tally::default();
            dfs(&mut bits, &mut prefixes, maxlen, &visit, &mut acc);
            acc
        })
        .collect();
    for p in parts {
        total.merge(p);
    }
    total.finish()
}
