//! Canonical encodings shared by every construction: finite words, the dense
//! sequence `ψ(n)`/`s_n`/`w_n`, the diagonal pairing of ω² with ω, vertical
//! slices, and the prime-power coder of finite ω-sequences.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Alphabet {
    Binary,
    Ternary,
    Omega,
}

impl Alphabet {
    /// Number of symbols, `None` for ω.
    pub fn size(self) -> Option<u64> {
        match self {
            Alphabet::Binary => Some(2),
            Alphabet::Ternary => Some(3),
            Alphabet::Omega => None,
        }
    }

    pub fn admits(self, symbol: u64) -> bool {
        self.size().map_or(true, |s| symbol < s)
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::Binary => f.write_str("2"),
            Alphabet::Ternary => f.write_str("3"),
            Alphabet::Omega => f.write_str("ω"),
        }
    }
}

/// A finite word over 2, 3 or ω.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    alphabet: Alphabet,
    symbols: Vec<u64>,
}

impl Word {
    pub fn new(alphabet: Alphabet, symbols: Vec<u64>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| !alphabet.admits(s)) {
            return Err(Error::SymbolOutOfRange {
                symbol: bad,
                alphabet,
            });
        }
        Ok(Word { alphabet, symbols })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            symbols: Vec::new(),
        }
    }

    /// Binary word from 0/1 bytes. Panics on other values.
    pub fn from_bits(bits: &[u8]) -> Self {
        assert!(bits.iter().all(|&b| b < 2), "non-binary symbol");
        Word {
            alphabet: Alphabet::Binary,
            symbols: bits.iter().map(|&b| b as u64).collect(),
        }
    }

    pub fn omega(symbols: &[u64]) -> Self {
        Word {
            alphabet: Alphabet::Omega,
            symbols: symbols.to_vec(),
        }
    }

    pub fn ternary(symbols: &[u64]) -> Result<Self> {
        Word::new(Alphabet::Ternary, symbols.to_vec())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbols(&self) -> &[u64] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u64> {
        self.symbols.get(i).copied()
    }

    pub fn last(&self) -> Option<u64> {
        self.symbols.last().copied()
    }

    /// The 0/1 bytes of a binary word.
    pub fn to_bits(&self) -> Vec<u8> {
        self.symbols.iter().map(|&s| s as u8).collect()
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word {
            alphabet: self.alphabet,
            symbols: self.symbols[..n.min(self.len())].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.symbols.starts_with(&self.symbols)
    }

    pub fn pushed(&self, symbol: u64) -> Result<Word> {
        let mut symbols = self.symbols.clone();
        symbols.push(symbol);
        Word::new(self.alphabet, symbols)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.extend_from_slice(&other.symbols);
        Word {
            alphabet: self.alphabet.max(other.alphabet),
            symbols,
        }
    }

    /// Parses the text form: digit strings for 2 and 3, comma-separated
    /// naturals for ω, the empty string for ∅.
    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "∅" {
            return Ok(Word::empty(alphabet));
        }
        let symbols = match alphabet {
            Alphabet::Omega => text
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u64>()
                        .map_err(|e| Error::Parse(format!("bad ω-symbol {s:?}: {e}")))
                })
                .collect::<Result<Vec<_>>>()?,
            _ => text
                .chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(u64::from)
                        .ok_or_else(|| Error::Parse(format!("bad digit {c:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        Word::new(alphabet, symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alphabet {
            Alphabet::Omega => {
                for (i, s) in self.symbols.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{s}")?;
                }
                Ok(())
            }
            _ => {
                for s in &self.symbols {
                    write!(f, "{s}")?;
                }
                Ok(())
            }
        }
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.alphabet {
            Alphabet::Omega => self.symbols.serialize(serializer),
            _ => serializer.serialize_str(&self.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Dense sequence

/// `ψ(n)`: binary words by length, then lexicographically with 0 < 1.
pub fn psi(n: u64) -> Word {
    let (len, rank) = psi_coords(n);
    let bits: Vec<u8> = (0..len)
        .map(|k| ((rank >> (len - 1 - k)) & 1) as u8)
        .collect();
    Word::from_bits(&bits)
}

// (|ψ(n)|, rank of ψ(n) among the words of that length)
fn psi_coords(n: u64) -> (u32, u64) {
    let len = 63 - (n + 1).leading_zeros();
    (len, n + 1 - (1u64 << len))
}

/// Bit `k` of `w_n = s_n·0` for `k ≤ n`, without building the word.
pub fn w_bit(n: u64, k: u64) -> u8 {
    debug_assert!(k <= n);
    let (len, rank) = psi_coords(n);
    if k < len as u64 {
        ((rank >> (len as u64 - 1 - k)) & 1) as u8
    } else {
        0
    }
}

/// `s_n := ψ(n)0^{n−|ψ(n)|}`.
pub fn s_word(n: u64) -> Word {
    let mut bits = psi(n).to_bits();
    bits.resize(n as usize, 0);
    Word::from_bits(&bits)
}

/// `w_n := s_n0`.
pub fn w_word(n: u64) -> Word {
    let mut bits = s_word(n).to_bits();
    bits.push(0);
    Word::from_bits(&bits)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DenseWords {
    pub n: u64,
    pub psi: Word,
    pub s: Word,
    pub w: Word,
}

pub fn dense_words(n: u64) -> DenseWords {
    DenseWords {
        n,
        psi: psi(n),
        s: s_word(n),
        w: w_word(n),
    }
}

// ---------------------------------------------------------------------------
// Pairing

#[inline]
pub fn triangular(m: u64) -> u64 {
    m * (m + 1) / 2
}

/// `⟨n,p⟩ = (Σ_{k≤n+p} k) + p`.
#[inline]
pub fn pair(n: u64, p: u64) -> u64 {
    triangular(n + p) + p
}

/// Flat index together with its coordinates; `m = n + p = M(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PairIndex {
    pub q: u64,
    pub n: u64,
    pub p: u64,
    pub m: u64,
}

/// `M(q) = max{m | Σ_{k≤m} k ≤ q}`.
#[inline]
pub fn diagonal_of(q: u64) -> u64 {
    let mut m = ((((8 * q + 1) as f64).sqrt() - 1.0) / 2.0) as u64;
    while triangular(m) > q {
        m -= 1;
    }
    while triangular(m + 1) <= q {
        m += 1;
    }
    m
}

#[inline]
pub fn unpair(q: u64) -> PairIndex {
    let m = diagonal_of(q);
    let p = q - triangular(m);
    PairIndex { q, n: m - p, p, m }
}

/// `(u)_n`: the word read along vertical `n`.
pub fn slice(u: &Word, n: u64) -> Word {
    let symbols = (0..)
        .map(|p| pair(n, p))
        .take_while(|&q| q < u.len() as u64)
        .map(|q| u.symbols[q as usize])
        .collect();
    Word {
        alphabet: u.alphabet,
        symbols,
    }
}

/// Inverse of slicing: `⟨u_0, u_1, …⟩` restricted to positions below `len`.
/// Positions not covered by the given slices are filled with `fill`.
pub fn join(slices: &[Word], len: usize, fill: u64) -> Word {
    let alphabet = slices.first().map_or(Alphabet::Binary, |w| w.alphabet);
    let symbols = (0..len as u64)
        .map(|q| {
            let ix = unpair(q);
            slices
                .get(ix.n as usize)
                .and_then(|w| w.get(ix.p as usize))
                .unwrap_or(fill)
        })
        .collect();
    Word { alphabet, symbols }
}

// ---------------------------------------------------------------------------
// Prime coder

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| candidate % p != 0)
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// `I(s) = p_0^{s(0)+1} ⋯ p_{|s|−1}^{s(|s|−1)+1}`, `I(∅) = 1`.
pub fn prime_code(s: &Word) -> Result<u64> {
    let primes = first_primes(s.len());
    let mut acc: u64 = 1;
    for (&p, &e) in primes.iter().zip(s.symbols()) {
        let e = u32::try_from(e + 1).map_err(|_| Error::Overflow)?;
        let factor = p.checked_pow(e).ok_or(Error::Overflow)?;
        acc = acc.checked_mul(factor).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

// Factor `q` over consecutive primes 2, 3, 5, … with every exponent ≥ 1.
fn image_preimage(mut q: u64, primes: &mut Vec<u64>) -> Option<Vec<u64>> {
    let mut word = Vec::new();
    let mut j = 0;
    while q > 1 {
        if j == primes.len() {
            let more = first_primes(primes.len() * 2 + 1);
            *primes = more;
        }
        let p = primes[j];
        let mut e = 0u64;
        while q % p == 0 {
            q /= p;
            e += 1;
        }
        if e == 0 {
            return None;
        }
        word.push(e - 1);
        j += 1;
    }
    Some(word)
}

/// The bijection `b = (φ∘I)^{−1}` tabulated over the image of `I` up to a bound.
#[derive(Debug, Clone)]
pub struct PrimeCoder {
    bound: u64,
    entries: Vec<(u64, Word)>,
}

impl PrimeCoder {
    pub fn with_bound(bound: u64) -> Self {
        let mut primes = first_primes(8);
        let entries = (1..=bound)
            .filter_map(|q| image_preimage(q, &mut primes).map(|w| (q, Word::omega(&w))))
            .collect();
        PrimeCoder { bound, entries }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Number of indices `i` for which `b(i)` is available.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn decode(&self, i: u64) -> Result<&Word> {
        self.entries
            .get(i as usize)
            .map(|(_, w)| w)
            .ok_or(Error::BoundExceeded {
                index: i,
                bound: self.bound,
            })
    }

    /// `b^{−1}(s)`, when `I(s)` is within the bound.
    pub fn index_of(&self, s: &Word) -> Option<u64> {
        let code = prime_code(s).ok()?;
        self.entries
            .binary_search_by_key(&code, |(q, _)| *q)
            .ok()
            .map(|i| i as u64)
    }
}

/// `b(i)`, enumerating the image of `I` by trial division up to `bound`.
pub fn prime_decode(i: u64, bound: u64) -> Result<Word> {
    PrimeCoder::with_bound(bound).decode(i).cloned()
}
