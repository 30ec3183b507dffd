//! Eventually-periodic points `u·v^∞` of 2^ω, 3^ω and ω^ω.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::seqcore::{pair, Alphabet, Word};

/// `preperiod · period^∞`, always kept in normal form: the period is primitive
/// and the preperiod is as short as possible, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpPoint {
    alphabet: Alphabet,
    preperiod: Vec<u64>,
    period: Vec<u64>,
}

impl EpPoint {
    pub fn new(alphabet: Alphabet, preperiod: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("period must be nonempty".into()));
        }
        if let Some(&bad) = preperiod
            .iter()
            .chain(&period)
            .find(|&&s| !alphabet.admits(s))
        {
            return Err(Error::SymbolOutOfRange {
                symbol: bad,
                alphabet,
            });
        }
        Ok(Self::normalized(alphabet, preperiod, period))
    }

    pub fn from_words(preperiod: &Word, period: &Word) -> Result<Self> {
        EpPoint::new(
            preperiod.alphabet().max(period.alphabet()),
            preperiod.symbols().to_vec(),
            period.symbols().to_vec(),
        )
    }

    /// Binary point from 0/1 bytes.
    pub fn from_bits(preperiod: &[u8], period: &[u8]) -> Self {
        EpPoint::new(
            Alphabet::Binary,
            preperiod.iter().map(|&b| b as u64).collect(),
            period.iter().map(|&b| b as u64).collect(),
        )
        .expect("binary point")
    }

    /// `symbol^∞`.
    pub fn constant(alphabet: Alphabet, symbol: u64) -> Self {
        EpPoint::new(alphabet, vec![], vec![symbol]).expect("constant point")
    }

    pub(crate) fn normalized(alphabet: Alphabet, mut preperiod: Vec<u64>, period: Vec<u64>) -> Self {
        let mut period = primitive_root(&period).to_vec();
        while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
            if a != b {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        EpPoint {
            alphabet,
            preperiod,
            period,
        }
    }

    /// Parses `"u;v"`, both halves in the word literal syntax of `alphabet`.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let (pre, per) = text
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("point literal {text:?} lacks ';'")))?;
        let pre = Word::parse(alphabet, pre)?;
        let per = Word::parse(alphabet, per)?;
        if per.is_empty() {
            return Err(Error::Parse(format!("point literal {text:?} has empty period")));
        }
        EpPoint::from_words(&pre, &per)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn preperiod(&self) -> &[u64] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u64] {
        &self.period
    }

    #[inline]
    pub fn at(&self, p: u64) -> u64 {
        let pre = self.preperiod.len() as u64;
        if p < pre {
            self.preperiod[p as usize]
        } else {
            self.period[((p - pre) % self.period.len() as u64) as usize]
        }
    }

    /// The first `n` symbols.
    pub fn prefix(&self, n: usize) -> Word {
        Word::new(self.alphabet, (0..n as u64).map(|p| self.at(p)).collect())
            .expect("symbols of a valid point")
    }

    pub fn starts_with(&self, u: &Word) -> bool {
        u.symbols()
            .iter()
            .enumerate()
            .all(|(p, &s)| self.at(p as u64) == s)
    }

    /// Every position at or beyond this index lies in the periodic tail.
    pub fn tail_start(&self) -> u64 {
        self.preperiod.len() as u64
    }

    /// Whether `symbol` occurs infinitely often.
    pub fn recurs(&self, symbol: u64) -> bool {
        self.period.contains(&symbol)
    }

    /// Whether `symbol` occurs at some position `≥ from`.
    pub fn occurs_from(&self, symbol: u64, from: u64) -> bool {
        self.recurs(symbol)
            || self.preperiod.iter().skip(from as usize).any(|&s| s == symbol)
    }

    /// Position of the last occurrence of `symbol`, `None` if it never occurs
    /// or occurs infinitely often.
    pub fn last_occurrence(&self, symbol: u64) -> Option<u64> {
        if self.recurs(symbol) {
            return None;
        }
        self.preperiod
            .iter()
            .rposition(|&s| s == symbol)
            .map(|p| p as u64)
    }

    pub fn first_occurrence(&self, symbol: u64) -> Option<u64> {
        if let Some(p) = self.preperiod.iter().position(|&s| s == symbol) {
            return Some(p as u64);
        }
        self.period
            .iter()
            .position(|&s| s == symbol)
            .map(|p| self.tail_start() + p as u64)
    }

    /// A copy whose symbol at `position` is replaced by `symbol`.
    pub fn with_symbol(&self, position: u64, symbol: u64) -> Result<Self> {
        if !self.alphabet.admits(symbol) {
            return Err(Error::SymbolOutOfRange {
                symbol,
                alphabet: self.alphabet,
            });
        }
        let len = self.tail_start().max(position + 1);
        let mut pre: Vec<u64> = (0..len).map(|p| self.at(p)).collect();
        pre[position as usize] = symbol;
        let mut period = self.period.clone();
        let offset = (len - self.tail_start()) % period.len() as u64;
        period.rotate_left(offset as usize);
        Ok(Self::normalized(self.alphabet, pre, period))
    }

    /// `w·x`.
    pub fn prepend(&self, w: &Word) -> Self {
        let mut pre = w.symbols().to_vec();
        pre.extend_from_slice(&self.preperiod);
        Self::normalized(self.alphabet.max(w.alphabet()), pre, self.period.clone())
    }

    /// Symbols from position `from` on.
    pub fn shift(&self, from: u64) -> Self {
        let pre: Vec<u64> = self.preperiod.iter().skip(from as usize).copied().collect();
        let mut period = self.period.clone();
        if from > self.tail_start() {
            let offset = (from - self.tail_start()) % period.len() as u64;
            period.rotate_left(offset as usize);
        }
        Self::normalized(self.alphabet, pre, period)
    }

    pub fn literal(&self) -> String {
        self.to_string()
    }
}

fn primitive_root(v: &[u64]) -> &[u64] {
    let n = v.len();
    (1..=n)
        .filter(|d| n % d == 0)
        .find(|&d| (d..n).all(|i| v[i] == v[i - d]))
        .map(|d| &v[..d])
        .unwrap_or(v)
}

impl fmt::Display for EpPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pre = Word::new(self.alphabet, self.preperiod.clone()).map_err(|_| fmt::Error)?;
        let per = Word::new(self.alphabet, self.period.clone()).map_err(|_| fmt::Error)?;
        write!(f, "{pre};{per}")
    }
}

impl Serialize for EpPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

pub fn ep_at(x: &EpPoint, p: u64) -> u64 {
    x.at(p)
}

/// Vertical `n` of `x`: `p ↦ x(⟨n,p⟩)`, in normal form.
///
/// Past the first index whose position reaches the tail, `⟨n,p⟩ mod |period|`
/// is periodic in `p` with period dividing `2·|period|`.
pub fn ep_vertical(x: &EpPoint, n: u64) -> EpPoint {
    let start = x.tail_start();
    let first_tail = (0..).find(|&p| pair(n, p) >= start).unwrap();
    let span = 2 * x.period.len() as u64;
    let pre: Vec<u64> = (0..first_tail).map(|p| x.at(pair(n, p))).collect();
    let per: Vec<u64> = (first_tail..first_tail + span)
        .map(|p| x.at(pair(n, p)))
        .collect();
    EpPoint::normalized(x.alphabet, pre, per)
}

/// Whether vertical `n` of `x` contains `symbol` infinitely often.
pub fn ep_hits_forever(x: &EpPoint, n: u64, symbol: u64) -> bool {
    ep_vertical(x, n).recurs(symbol)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiffSet {
    /// Differing positions below the joint horizon.
    pub positions: Vec<u64>,
    /// True iff the tails agree, in which case `positions` is complete.
    pub finite: bool,
    pub horizon: u64,
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Positions where `x` and `y` differ, up to `max preperiod + lcm(periods)`.
pub fn ep_diff_positions(x: &EpPoint, y: &EpPoint, cap: u64) -> Result<DiffSet> {
    if x.alphabet != y.alphabet {
        return Err(Error::AlphabetMismatch {
            expected: x.alphabet,
            got: y.alphabet,
        });
    }
    let (lx, ly) = (x.period.len() as u64, y.period.len() as u64);
    let lcm = lx / gcd(lx, ly) * ly;
    let pre = x.tail_start().max(y.tail_start());
    let horizon = pre + lcm;
    if horizon > cap {
        return Err(Error::CapExceeded { horizon, cap });
    }
    let positions: Vec<u64> = (0..horizon).filter(|&p| x.at(p) != y.at(p)).collect();
    let finite = positions.iter().all(|&p| p < pre);
    Ok(DiffSet {
        positions,
        finite,
        horizon,
    })
}

/// The single position where `x` and `y` differ, if there is exactly one.
pub fn single_difference(x: &EpPoint, y: &EpPoint, cap: u64) -> Result<Option<u64>> {
    let d = ep_diff_positions(x, y, cap)?;
    Ok(match (d.finite, d.positions.as_slice()) {
        (true, &[m]) => Some(m),
        _ => None,
    })
}

/// Default cap used by the edge tests.
pub const DEFAULT_CAP: u64 = 1 << 24;

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> EpPoint {
        EpPoint::parse(Alphabet::Binary, s).unwrap()
    }

    // Expands the literal directly, without going through normalization.
    fn expand_literal(s: &str, n: usize) -> Vec<u64> {
        let (pre, per) = s.split_once(';').unwrap();
        let digits = |t: &str| t.chars().map(|c| c.to_digit(10).unwrap() as u64).collect::<Vec<_>>();
        let (pre, per) = (digits(pre), digits(per));
        (0..n)
            .map(|p| {
                if p < pre.len() {
                    pre[p]
                } else {
                    per[(p - pre.len()) % per.len()]
                }
            })
            .collect()
    }

    #[test]
    fn at_examples() {
        assert_eq!(ep_at(&bp("01;1"), 0), 0);
        assert_eq!(ep_at(&bp("01;1"), 100), 1);
        // 0·(10)^∞ = 0,1,0,1,0,…
        assert_eq!(expand_literal("0;10", 5), vec![0, 1, 0, 1, 0]);
        assert_eq!(ep_at(&bp("0;10"), 4), 0);
        assert_eq!(ep_at(&bp("0;10"), 3), 1);
    }

    #[test]
    fn normal_forms() {
        assert_eq!(bp("0010;0").to_string(), "001;0");
        assert_eq!(bp("0;0").to_string(), ";0");
        assert_eq!(bp("0101;0101").to_string(), ";01");
        assert_eq!(bp("1;01").to_string(), ";10");
        assert_eq!(
            EpPoint::parse(Alphabet::Omega, "3,0;2").unwrap().to_string(),
            "3,0;2"
        );
        assert!(EpPoint::parse(Alphabet::Binary, "01;").is_err());
        assert!(EpPoint::parse(Alphabet::Binary, "01").is_err());
    }

    #[test]
    fn vertical_examples() {
        assert_eq!(ep_vertical(&bp("0;1"), 0), bp("0;1"));
        assert_eq!(ep_vertical(&bp("0;0"), 3), bp("0;0"));
        assert_eq!(ep_vertical(&bp("0010;0"), 0), bp("01;0"));
        // 40-term expansion of the same vertical
        let x = bp("0;1");
        let v = ep_vertical(&x, 0);
        for p in 0..40 {
            assert_eq!(v.at(p), x.at(pair(0, p)));
        }
    }

    #[test]
    fn hits_forever_examples() {
        assert!(ep_hits_forever(&bp("01;1"), 0, 1));
        assert!(!ep_hits_forever(&bp("0;0"), 0, 1));
        assert!(!ep_hits_forever(&bp("0010;0"), 0, 1));
    }

    #[test]
    fn diff_examples() {
        // "0;1" and "01;1" are the same point 01^∞
        let d = ep_diff_positions(&bp("0;1"), &bp("01;1"), 1_000_000).unwrap();
        assert_eq!((d.positions, d.finite), (vec![], true));
        let d = ep_diff_positions(&bp("0;1"), &bp("1;1"), 1_000_000).unwrap();
        assert_eq!((d.positions, d.finite), (vec![0], true));
        let d = ep_diff_positions(&bp("0;0"), &bp("0;0"), 1_000_000).unwrap();
        assert_eq!((d.positions.len(), d.finite), (0, true));
        let d = ep_diff_positions(&bp("0;01"), &bp("0;10"), 1_000_000).unwrap();
        assert!(!d.finite);
        assert!(matches!(
            ep_diff_positions(&bp("0000000;01"), &bp(";011"), 4),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn with_symbol_and_shift() {
        let x = bp("0;01");
        for pos in 0..12 {
            let y = x.with_symbol(pos, 1).unwrap();
            for p in 0..40 {
                let want = if p == pos { 1 } else { x.at(p) };
                assert_eq!(y.at(p), want, "pos {pos} p {p}");
            }
        }
        let s = bp("0110;011").shift(6);
        for p in 0..30 {
            assert_eq!(s.at(p), bp("0110;011").at(p + 6));
        }
    }

    #[test]
    fn occurrences() {
        let x = bp("00101;0");
        assert_eq!(x.last_occurrence(1), Some(4));
        assert_eq!(x.first_occurrence(1), Some(2));
        assert_eq!(bp(";01").last_occurrence(1), None);
        assert_eq!(bp("000;01").first_occurrence(1), Some(4));
    }
}
