//! Placed words: decoding the witness `t`, mirrors and placed predecessors.

use std::collections::BTreeMap;

use serde::Serialize;

use super::calculus::{kt_constraints, KtShape};
use crate::error::{Error, Result};
use crate::points::EpPoint;
use crate::seqcore::{pair, slice, unpair, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacedInfo {
    pub u: Word,
    pub t: Word,
    pub l: u64,
    pub sigma: u64,
    pub eps: u8,
}

/// Bit-level decode result, without the input word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub t: Vec<u64>,
    pub sigma: u64,
    pub eps: u8,
}

impl Decoded {
    pub fn level(&self) -> usize {
        self.t.len()
    }

    fn into_info(self, u: &Word) -> PlacedInfo {
        PlacedInfo {
            u: u.clone(),
            l: self.t.len() as u64,
            t: Word::omega(&self.t),
            sigma: self.sigma,
            eps: self.eps,
        }
    }
}

/// Reads `t` backwards from the last 1 strictly before each `⟨Σ^t_{k+1}, 0⟩`,
/// then checks the prefix against the constraints of `K_t`.
pub fn decode_bits(u: &[u8]) -> Option<Decoded> {
    let last = u.len().checked_sub(1)? as u64;
    let top = unpair(last);
    if top.p > 0 && u[last as usize] != 1 {
        return None;
    }
    let mut rev = Vec::new();
    let mut s = top.n;
    while s > 0 {
        let before = pair(s, 0) as usize;
        let r = u[..before].iter().rposition(|&b| b == 1)? as u64;
        let ix = unpair(r);
        if ix.p == 0 || ix.n + ix.p + 1 != s {
            return None;
        }
        rev.push(ix.p - 1);
        s = ix.n;
    }
    rev.reverse();
    if !KtShape::new(&rev).admits_prefix(u) {
        return None;
    }
    let sigma = pair(top.n, 0);
    Some(Decoded {
        t: rev,
        sigma,
        eps: u[sigma as usize],
    })
}

fn binary_bits(u: &Word) -> Option<Vec<u8>> {
    (u.alphabet() == Alphabet::Binary).then(|| u.to_bits())
}

pub fn placed_decode(u: &Word) -> Option<PlacedInfo> {
    decode_bits(&binary_bits(u)?).map(|d| d.into_info(u))
}

/// Compositions of `a` into parts `≥ 2`, each part `c` recorded as `c − 2`.
pub fn compositions(a: u64) -> Vec<Vec<u64>> {
    if a == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 2..=a {
        for mut rest in compositions(a - first) {
            rest.insert(0, first - 2);
            out.push(rest);
        }
    }
    out
}

/// Candidate witnesses for a given last vertical, with their constraint points.
#[derive(Debug, Default)]
pub struct OracleTables {
    by_vertical: BTreeMap<u64, Vec<(Word, BTreeMap<u64, EpPoint>)>>,
}

impl OracleTables {
    pub fn new(max_vertical: u64) -> Self {
        let mut tables = OracleTables::default();
        for a in 0..=max_vertical {
            tables.ensure(a);
        }
        tables
    }

    fn ensure(&mut self, a: u64) {
        self.by_vertical.entry(a).or_insert_with(|| {
            compositions(a)
                .into_iter()
                .map(|t| {
                    let t = Word::omega(&t);
                    let c = kt_constraints(&t);
                    (t, c)
                })
                .collect()
        });
    }

    fn candidates(&self, a: u64) -> Option<&[(Word, BTreeMap<u64, EpPoint>)]> {
        self.by_vertical.get(&a).map(Vec::as_slice)
    }

    /// Direct search over all compositions; errors if two witnesses survive.
    pub fn decode(&self, u: &Word) -> Result<Option<PlacedInfo>> {
        if u.alphabet() != Alphabet::Binary {
            return Err(Error::AlphabetMismatch {
                expected: Alphabet::Binary,
                got: u.alphabet(),
            });
        }
        if u.is_empty() {
            return Ok(None);
        }
        let last = (u.len() - 1) as u64;
        let top = unpair(last);
        if top.p > 0 && u.get(last as usize) != Some(1) {
            return Ok(None);
        }
        let owned;
        let cands = match self.candidates(top.n) {
            Some(c) => c,
            None => {
                let mut fresh = OracleTables::default();
                fresh.ensure(top.n);
                owned = fresh;
                owned.candidates(top.n).unwrap()
            }
        };
        let mut found: Option<&Word> = None;
        for (t, constraints) in cands {
            let consistent = constraints
                .iter()
                .all(|(&v, target)| target.starts_with(&slice(u, v)));
            if !consistent {
                continue;
            }
            if let Some(first) = found {
                return Err(Error::NonUniqueWitness {
                    word: u.to_string(),
                    first: first.to_string(),
                    second: t.to_string(),
                });
            }
            found = Some(t);
        }
        Ok(found.map(|t| {
            let sigma = pair(top.n, 0);
            PlacedInfo {
                u: u.clone(),
                t: t.clone(),
                l: t.len() as u64,
                sigma,
                eps: u.get(sigma as usize).unwrap() as u8,
            }
        }))
    }
}

pub fn placed_decode_oracle(u: &Word) -> Result<Option<PlacedInfo>> {
    OracleTables::default().decode(u)
}

fn require_placed(u: &Word) -> Result<PlacedInfo> {
    placed_decode(u).ok_or_else(|| Error::NotPlaced(u.to_string()))
}

/// `u^{l(u)}`: flips position `Σ_t`.
pub fn mirror(u: &Word) -> Result<Word> {
    let info = require_placed(u)?;
    let mut bits = u.to_bits();
    bits[info.sigma as usize] ^= 1;
    Ok(Word::from_bits(&bits))
}

pub fn eps_of(u: &Word) -> Result<u8> {
    Ok(require_placed(u)?.eps)
}

/// Length of the longest proper placed prefix of level `≤ max_level`.
pub fn pred_len(u: &[u8], max_level: Option<usize>) -> usize {
    if u.len() <= 1 {
        return 0;
    }
    (1..u.len())
        .rev()
        .find(|&n| {
            decode_bits(&u[..n]).is_some_and(|d| max_level.map_or(true, |l| d.level() <= l))
        })
        .unwrap_or(0)
}

/// `u⁻`.
pub fn pred(u: &Word) -> Word {
    match binary_bits(u) {
        Some(bits) => u.prefix(pred_len(&bits, None)),
        None => Word::empty(u.alphabet()),
    }
}

/// `u^{−l}`.
pub fn pred_l(u: &Word, l: u64) -> Word {
    match binary_bits(u) {
        Some(bits) => u.prefix(pred_len(&bits, Some(l as usize))),
        None => Word::empty(u.alphabet()),
    }
}
