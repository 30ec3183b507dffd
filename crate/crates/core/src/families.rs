//! Example digraphs and their partitions: `G₀`, `A₁`, the open-rectangle
//! family, `A₂`, the suitable-word family on 3^ω, and `φ`/`Φ`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ktree::{self, Verdict};
use crate::points::{single_difference, EpPoint, DEFAULT_CAP};
use crate::seqcore::{s_word, Alphabet, PrimeCoder, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FamilyId {
    G0,
    A1,
    A1rect,
    A2,
    S3,
    A3,
    G,
}

impl FamilyId {
    pub const ALL: [FamilyId; 7] = [
        FamilyId::G0,
        FamilyId::A1,
        FamilyId::A1rect,
        FamilyId::A2,
        FamilyId::S3,
        FamilyId::A3,
        FamilyId::G,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyId::G0 => "g0",
            FamilyId::A1 => "a1",
            FamilyId::A1rect => "a1rect",
            FamilyId::A2 => "a2",
            FamilyId::S3 => "s3",
            FamilyId::A3 => "a3",
            FamilyId::G => "g",
        }
    }

    /// Alphabet of the ambient space.
    pub fn alphabet(self) -> Alphabet {
        match self {
            FamilyId::A2 => Alphabet::Omega,
            FamilyId::S3 => Alphabet::Ternary,
            _ => Alphabet::Binary,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        FamilyId::ALL
            .into_iter()
            .find(|f| f.name() == lower)
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum EdgeParameter {
    Natural(u64),
    Word(Word),
}

impl fmt::Display for EdgeParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeParameter::Natural(n) => write!(f, "{n}"),
            EdgeParameter::Word(w) => write!(f, "{w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyEdge {
    pub family: FamilyId,
    pub left: EpPoint,
    pub right: EpPoint,
    pub parameter: EdgeParameter,
}

impl FamilyEdge {
    /// Re-runs the family's edge test and checks the parameter.
    pub fn recheck(&self) -> Result<bool> {
        Ok(is_edge(self.family, &self.left, &self.right)?.as_ref() == Some(&self.parameter))
    }
}

/// Dispatches to the family's edge test.
pub fn is_edge(family: FamilyId, x: &EpPoint, y: &EpPoint) -> Result<Option<EdgeParameter>> {
    use EdgeParameter::{Natural, Word as W};
    Ok(match family {
        FamilyId::G0 => g0_is_edge(x, y)?.map(Natural),
        FamilyId::A1 => a1_is_edge(x, y).map(Natural),
        FamilyId::A1rect => a1rect_is_edge(x, y).map(Natural),
        FamilyId::A2 => a2_is_edge(x, y).map(W),
        FamilyId::S3 => s3_is_edge(x, y).map(Natural),
        FamilyId::A3 => ktree::a3_is_edge(x, y)?.map(W),
        FamilyId::G => ktree::g_is_edge(x, y)?.map(W),
    })
}

pub fn certify_edge(family: FamilyId, x: &EpPoint, y: &EpPoint) -> Result<Option<FamilyEdge>> {
    Ok(is_edge(family, x, y)?.map(|parameter| FamilyEdge {
        family,
        left: x.clone(),
        right: y.clone(),
        parameter,
    }))
}

fn is_binary(x: &EpPoint) -> bool {
    x.alphabet() == Alphabet::Binary
}

pub fn g0_is_edge(x: &EpPoint, y: &EpPoint) -> Result<Option<u64>> {
    if !is_binary(x) || !is_binary(y) {
        return Ok(None);
    }
    let Some(n) = single_difference(x, y, DEFAULT_CAP)? else {
        return Ok(None);
    };
    let ok = x.at(n) == 0 && y.at(n) == 1 && x.starts_with(&s_word(n));
    Ok(ok.then_some(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelGraph {
    pub n: u32,
    pub edges: Vec<(Word, Word)>,
}

pub const LEVEL_GRAPH_LIMIT: u32 = 16;

/// `G₀` restricted to words of length `N`.
pub fn g0_level_graph(n: u32) -> Result<LevelGraph> {
    if n > LEVEL_GRAPH_LIMIT {
        return Err(Error::TooLarge {
            what: "level",
            value: n as u64,
            limit: LEVEL_GRAPH_LIMIT as u64,
        });
    }
    let mut edges = Vec::with_capacity((1usize << n).saturating_sub(1));
    for k in 0..n {
        let s = s_word(k as u64).to_bits();
        let rest = n - k - 1;
        for tail in 0u32..(1 << rest) {
            let mut left = s.clone();
            left.push(0);
            left.extend((0..rest).rev().map(|j| ((tail >> j) & 1) as u8));
            let mut right = left.clone();
            right[k as usize] = 1;
            edges.push((Word::from_bits(&left), Word::from_bits(&right)));
        }
    }
    edges.sort_by(|a, b| (a.0.symbols(), a.1.symbols()).cmp(&(b.0.symbols(), b.1.symbols())));
    Ok(LevelGraph { n, edges })
}

impl LevelGraph {
    pub fn vertices(&self) -> impl Iterator<Item = Word> + '_ {
        (0u32..(1 << self.n)).map(move |code| {
            let bits: Vec<u8> = (0..self.n).rev().map(|j| ((code >> j) & 1) as u8).collect();
            Word::from_bits(&bits)
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("graph g0_level_{} {{\n", self.n);
        for v in self.vertices() {
            out.push_str(&format!("  \"{v}\";\n"));
        }
        for (a, b) in &self.edges {
            out.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("graph serializes")
    }
}

/// Position of the first 1, if any.
fn first_one(x: &EpPoint) -> Option<u64> {
    x.first_occurrence(1)
}

/// `i` with `x ∈ N_{0^{2i}1}` and `y ∈ N_{0^{2i+1}1}`.
pub fn a1_is_edge(x: &EpPoint, y: &EpPoint) -> Option<u64> {
    if !is_binary(x) || !is_binary(y) {
        return None;
    }
    let (a, b) = (first_one(x)?, first_one(y)?);
    (a % 2 == 0 && b == a + 1).then_some(a / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RectCell {
    Center,
    Cell(u64),
}

/// The `i` with `x ∈ N_{0^i1}`, or the center `0^∞`.
pub fn a1rect_classify(x: &EpPoint) -> RectCell {
    first_one(x).map_or(RectCell::Center, RectCell::Cell)
}

/// `i` with `x, y ∈ N_{0^i1}`.
pub fn a1rect_is_edge(x: &EpPoint, y: &EpPoint) -> Option<u64> {
    if !is_binary(x) || !is_binary(y) {
        return None;
    }
    match (a1rect_classify(x), a1rect_classify(y)) {
        (RectCell::Cell(i), RectCell::Cell(j)) if i == j => Some(i),
        _ => None,
    }
}

/// `u` with `x = u(2|u|)^∞` and `y = u(2|u|+1)^∞`.
pub fn a2_is_edge(x: &EpPoint, y: &EpPoint) -> Option<Word> {
    if x.alphabet() != Alphabet::Omega || y.alphabet() != Alphabet::Omega {
        return None;
    }
    let &[c] = x.period() else { return None };
    if c % 2 != 0 {
        return None;
    }
    let u = x.prefix((c / 2) as usize);
    let tail = |s: u64| EpPoint::new(Alphabet::Omega, u.symbols().to_vec(), vec![s]).ok();
    (tail(c).as_ref() == Some(x) && tail(c + 1).as_ref() == Some(y)).then_some(u)
}

/// `b(i)(2|b(i)|+ε)^∞`, the single point of `C^ε_i`.
pub fn a2_family_point(coder: &PrimeCoder, i: u64, eps: u8) -> Result<EpPoint> {
    let b = coder.decode(i)?;
    EpPoint::new(
        Alphabet::Omega,
        b.symbols().to_vec(),
        vec![2 * b.len() as u64 + eps as u64],
    )
}

/// `max_{l≤q} (|b(l)| + 1)`.
pub fn a2_depth(coder: &PrimeCoder, q: u64) -> Result<u64> {
    let mut best = 0;
    for l in 0..=q {
        best = best.max(coder.decode(l)?.len() as u64 + 1);
    }
    Ok(best)
}

/// The word `b(i)(2|b(i)|+ε)^{L_q − |b(i)|}` whose cylinder is `O^{2i+ε}_q`.
pub fn a2_cell_word(coder: &PrimeCoder, q: u64, i: u64, eps: u8) -> Result<Word> {
    let b = coder.decode(i)?;
    let reps = a2_depth(coder, q)?.saturating_sub(b.len() as u64);
    let mut s = b.symbols().to_vec();
    s.extend(std::iter::repeat(2 * b.len() as u64 + eps as u64).take(reps as usize));
    Ok(Word::omega(&s))
}

pub fn a2_partition_member_with(coder: &PrimeCoder, q: u64, p: u64, x: &EpPoint) -> Result<bool> {
    if p >= 2 * q + 3 {
        return Ok(false);
    }
    if p <= 2 * q + 1 {
        return Ok(x.starts_with(&a2_cell_word(coder, q, p / 2, (p % 2) as u8)?));
    }
    for cell in 0..=2 * q + 1 {
        if a2_partition_member_with(coder, q, cell, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn a2_partition_member(q: u64, p: u64, x: &EpPoint, bound: u64) -> Result<bool> {
    a2_partition_member_with(&PrimeCoder::with_bound(bound), q, p, x)
}

pub fn suitable(s: &Word) -> bool {
    s.alphabet() == Alphabet::Ternary && s.last().map_or(true, |c| c == 2)
}

/// The `i`-th suitable word: by length, then lexicographically.
pub fn theta(i: u64) -> Word {
    if i == 0 {
        return Word::ternary(&[]).unwrap();
    }
    // 3^{L−1} suitable words of each length L ≥ 1
    let mut offset = 1u64;
    let mut len = 1u32;
    loop {
        let count = 3u64.pow(len - 1);
        if i < offset + count {
            let mut r = i - offset;
            let mut digits = vec![0u64; len as usize - 1];
            for d in digits.iter_mut().rev() {
                *d = r % 3;
                r /= 3;
            }
            digits.push(2);
            return Word::ternary(&digits).unwrap();
        }
        offset += count;
        len += 1;
    }
}

/// Inverse of `theta` on suitable words.
pub fn theta_index(s: &Word) -> Option<u64> {
    if !suitable(s) {
        return None;
    }
    if s.is_empty() {
        return Some(0);
    }
    let len = s.len() as u32;
    let offset: u64 = 1 + (1..len).map(|l| 3u64.pow(l - 1)).sum::<u64>();
    let rank = s.symbols()[..s.len() - 1]
        .iter()
        .fold(0u64, |acc, &d| acc * 3 + d);
    Some(offset + rank)
}

/// `s⁻`: the longest proper suitable prefix of a nonempty suitable word.
pub fn suitable_pred(s: &Word) -> Result<Word> {
    if s.is_empty() || !suitable(s) {
        return Err(Error::Parse(format!("{s:?} is not a nonempty suitable word")));
    }
    let l = (0..s.len())
        .rev()
        .find(|&l| suitable(&s.prefix(l)))
        .unwrap_or(0);
    Ok(s.prefix(l))
}

/// `x ∈ S^ε_i`: `x = θ(i)εα` with `α ∈ 2^ω`.
pub fn s3_family_member(i: u64, eps: u8, x: &EpPoint) -> bool {
    if x.alphabet() != Alphabet::Ternary {
        return false;
    }
    let head = theta(i).pushed(eps as u64).unwrap();
    x.starts_with(&head) && !x.occurs_from(2, head.len() as u64)
}

/// The `i` with `x ∈ S^0_i` and `y ∈ S^1_i`.
pub fn s3_is_edge(x: &EpPoint, y: &EpPoint) -> Option<u64> {
    if x.alphabet() != Alphabet::Ternary || x.recurs(2) {
        return None;
    }
    let cut = x.last_occurrence(2).map_or(0, |p| p + 1);
    let i = theta_index(&x.prefix(cut as usize))?;
    (s3_family_member(i, 0, x) && s3_family_member(i, 1, y)).then_some(i)
}

fn s3_cell(q: u64, i: u64, eps: u8, x: &EpPoint) -> bool {
    let head = theta(i).pushed(eps as u64).unwrap();
    let free = theta(q).len().saturating_sub(theta(i).len());
    x.starts_with(&head) && (0..free as u64).all(|k| x.at(head.len() as u64 + k) < 2)
}

pub fn s3_partition_member(q: u64, p: u64, x: &EpPoint) -> bool {
    if x.alphabet() != Alphabet::Ternary || p >= 2 * q + 3 {
        return false;
    }
    if p <= 2 * q + 1 {
        return s3_cell(q, p / 2, (p % 2) as u8, x);
    }
    !(0..=2 * q + 1).any(|c| s3_cell(q, c / 2, (c % 2) as u8, x))
}

/// `φ(s)`; on overlap of the two clauses the first wins.
pub fn phi_map(s: &Word) -> Word {
    let mut out: Vec<u64> = Vec::new();
    let syms = s.symbols();
    for (len, &n) in syms.iter().enumerate() {
        let eps = n % 2;
        let q = n / 2;
        let first = q == len as u64 || (len > 0 && n != syms[len - 1]);
        if first {
            out.push(2);
        }
        out.push(eps);
    }
    Word::ternary(&out).unwrap()
}

/// The first `depth` symbols of `Φ(γ)`.
pub fn phi_prefix(gamma: &EpPoint, depth: usize) -> Word {
    // φ(γ|(p+1)) ⊑ φ(γ|(depth)) for p < depth, and |φ(s)| ≥ |s|
    phi_map(&gamma.prefix(depth)).prefix(depth)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PartitionFamily {
    A2part,
    S3part,
    KTpart,
}

impl FromStr for PartitionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a2part" | "a2" => Ok(PartitionFamily::A2part),
            "s3part" | "s3" => Ok(PartitionFamily::S3part),
            "ktpart" | "kt" => Ok(PartitionFamily::KTpart),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartitionSpec {
    pub family: PartitionFamily,
    pub q: u64,
}

impl PartitionSpec {
    /// Membership of `x` in `O^p_q`; only the `KTpart` complement can be `Unknown`.
    pub fn member(&self, coder: &PrimeCoder, p: u64, x: &EpPoint) -> Result<Verdict> {
        let b = |v: bool| if v { Verdict::In } else { Verdict::Out };
        match self.family {
            PartitionFamily::A2part => Ok(b(a2_partition_member_with(coder, self.q, p, x)?)),
            PartitionFamily::S3part => Ok(b(s3_partition_member(self.q, p, x))),
            PartitionFamily::KTpart => ktree::kt_partition_member_with(coder, self.q, p, x),
        }
    }

    /// Every `p` whose cell may hold `x`.
    pub fn cells_of(&self, coder: &PrimeCoder, x: &EpPoint) -> Result<Vec<(u64, Verdict)>> {
        let mut out = Vec::new();
        for p in 0..=2 * self.q + 2 {
            let v = self.member(coder, p, x)?;
            if v != Verdict::Out {
                out.push((p, v));
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> EpPoint {
        EpPoint::parse(Alphabet::Binary, s).unwrap()
    }

    fn op(s: &str) -> EpPoint {
        EpPoint::parse(Alphabet::Omega, s).unwrap()
    }

    fn tp(s: &str) -> EpPoint {
        EpPoint::parse(Alphabet::Ternary, s).unwrap()
    }

    fn tw(s: &str) -> Word {
        Word::parse(Alphabet::Ternary, s).unwrap()
    }

    #[test]
    fn g0_edges() {
        assert_eq!(g0_is_edge(&bp("0;0"), &bp("1;0")).unwrap(), Some(0));
        assert_eq!(g0_is_edge(&bp("00;0"), &bp("01;0")).unwrap(), Some(1));
        assert_eq!(g0_is_edge(&bp("1;0"), &bp("11;0")).unwrap(), None);
    }

    #[test]
    fn level_graphs() {
        let g = g0_level_graph(1).unwrap();
        assert_eq!(g.to_json(), r#"{"n":1,"edges":[["0","1"]]}"#);
        let g = g0_level_graph(2).unwrap();
        assert_eq!(
            g.to_json(),
            r#"{"n":2,"edges":[["00","01"],["00","10"],["01","11"]]}"#
        );
        assert_eq!(g0_level_graph(3).unwrap().edges.len(), 7);
        assert!(matches!(g0_level_graph(17), Err(Error::TooLarge { .. })));
        let dot = g0_level_graph(2).unwrap().to_dot();
        assert!(dot.contains("\"00\" -- \"01\";"));
        assert_eq!(dot.matches(';').count(), 4 + 3);
    }

    #[test]
    fn level_edges_are_g0_edges() {
        for (a, b) in g0_level_graph(6).unwrap().edges {
            let x = EpPoint::from_bits(&a.to_bits(), &[0]);
            let y = EpPoint::from_bits(&b.to_bits(), &[0]);
            assert!(g0_is_edge(&x, &y).unwrap().is_some(), "{a} {b}");
        }
    }

    #[test]
    fn a1_examples() {
        assert_eq!(a1_is_edge(&bp("1;0"), &bp("01;0")), Some(0));
        assert_eq!(a1_is_edge(&bp("01;0"), &bp("1;0")), None);
        assert_eq!(a1_is_edge(&bp("001;0"), &bp("0001;0")), Some(1));
        assert_eq!(a1rect_classify(&bp("0;0")), RectCell::Center);
        assert_eq!(a1rect_classify(&bp("0001;0")), RectCell::Cell(3));
        assert_eq!(a1rect_is_edge(&bp("01;1"), &bp("010;0")), Some(1));
        assert_eq!(a1rect_is_edge(&bp("0;0"), &bp("0;0")), None);
    }

    #[test]
    fn a2_examples() {
        assert_eq!(a2_is_edge(&op(";0"), &op(";1")), Some(Word::omega(&[])));
        assert_eq!(a2_is_edge(&op("3;2"), &op("3;3")), Some(Word::omega(&[3])));
        assert_eq!(a2_is_edge(&op("3;2"), &op("3;2")), None);
        assert_eq!(a2_is_edge(&op("2;2"), &op("2;3")), Some(Word::omega(&[2])));
    }

    #[test]
    fn a2_partition_examples() {
        assert!(a2_partition_member(0, 0, &op("0;0"), 100).unwrap());
        assert!(!a2_partition_member(0, 1, &op("0;0"), 100).unwrap());
        assert!(a2_partition_member(0, 2, &op("5;5"), 100).unwrap());
        assert!(!a2_partition_member(0, 3, &op("5;5"), 100).unwrap());
    }

    #[test]
    fn theta_and_suitable() {
        assert!(suitable(&tw("02")));
        assert!(suitable(&tw("")));
        assert!(!suitable(&tw("20")));
        let firsts: Vec<String> = (0..6).map(|i| theta(i).to_string()).collect();
        assert_eq!(firsts, ["", "2", "02", "12", "22", "002"]);
        for i in 0..500 {
            assert_eq!(theta_index(&theta(i)), Some(i));
            assert!(theta(i).len() <= theta(i + 1).len());
        }
        assert_eq!(suitable_pred(&tw("22")).unwrap(), tw("2"));
        assert_eq!(suitable_pred(&tw("0102")).unwrap(), tw(""));
        assert!(suitable_pred(&tw("")).is_err());
    }

    #[test]
    fn s3_examples() {
        assert!(s3_family_member(1, 0, &tp("20;0")));
        assert!(!s3_family_member(1, 0, &tp("20;2")));
        assert!(s3_partition_member(0, 0, &tp("0;0")));
        assert_eq!(s3_is_edge(&tp("20;1"), &tp("21;0")), Some(1));
        assert_eq!(s3_is_edge(&tp("0;1"), &tp("1;1")), Some(0));
        assert_eq!(s3_is_edge(&tp("20;1"), &tp("20;0")), None);
    }

    #[test]
    fn phi_examples() {
        let t = |v: &[u64]| phi_map(&Word::omega(v)).to_string();
        assert_eq!(t(&[0]), "20");
        assert_eq!(t(&[2]), "0");
        assert_eq!(t(&[0, 0]), "200");
        assert_eq!(t(&[]), "");
    }

    #[test]
    fn edge_parameters_recheck() {
        let e = certify_edge(FamilyId::A2, &op("3;2"), &op("3;3")).unwrap().unwrap();
        assert!(e.recheck().unwrap());
        assert_eq!(
            serde_json::to_string(&e).unwrap(),
            r#"{"family":"A2","left":"3;2","right":";3","parameter":[3]}"#
        );
        assert_eq!("A1rect".parse::<FamilyId>().unwrap(), FamilyId::A1rect);
        assert!("zz".parse::<FamilyId>().is_err());
    }
}
