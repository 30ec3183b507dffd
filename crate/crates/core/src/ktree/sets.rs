//! `H_t`, `H̃_t`, `X₃`, the graphs `A₃` and `𝔾`, density witnesses, and the
//! comparing partition built on `K_{b(i)}`.

use serde::Serialize;

use super::calculus::{
    canonical_point, kt_member, kt_split_member, ktn_member, phi_t, KtShape,
};
use super::placed::decode_bits;
use crate::error::{Error, Result};
use crate::points::{ep_vertical, single_difference, EpPoint, DEFAULT_CAP};
use crate::seqcore::{pair, triangular, unpair, w_bit, Alphabet, PrimeCoder, Word};

fn free_vertical(t: &Word) -> u64 {
    KtShape::new(t.symbols()).free_vertical()
}

pub fn h_member(t: &Word, x: &EpPoint) -> bool {
    kt_split_member(t, 0, x) && ep_vertical(x, free_vertical(t)).recurs(1)
}

/// The only `n` for which `x` or `φ_t(x)` can lie in `K_{tn}`: the last 1 of
/// the free vertical sits at `n + 1`.
fn ktn_candidate(t: &Word, x: &EpPoint) -> Option<u64> {
    ep_vertical(x, free_vertical(t))
        .last_occurrence(1)
        .and_then(|j| j.checked_sub(1))
}

pub fn h_tilde_member(t: &Word, x: &EpPoint) -> bool {
    if !kt_split_member(t, 0, x) {
        return false;
    }
    match ktn_candidate(t, x) {
        None => true,
        Some(n) => !ktn_member(t, n, x) && !ktn_member(t, n, &phi_t(t, x)),
    }
}

/// `y ∈ φ_t[H̃_t]`.
pub fn h_tilde_image_member(t: &Word, y: &EpPoint) -> bool {
    kt_split_member(t, 1, y) && h_tilde_member(t, &super::calculus::phi_t_inverse(t, y))
}

/// The ⊑-chain `∅ ⊏ (t0) ⊏ (t0,t1) ⊏ …` of all `t` with `x ∈ K_t`.
pub fn witness_chain(x: &EpPoint) -> Vec<Word> {
    let mut t: Vec<u64> = Vec::new();
    let mut chain = vec![Word::omega(&t)];
    // once ⟨V,0⟩ passes the preperiod the free vertical is purely periodic,
    // so it either recurs 1 or is constant 0 and the chain stops
    let limit = x.tail_start() + 2;
    for _ in 0..limit {
        let tw = Word::omega(&t);
        let Some(n) = ktn_candidate(&tw, x) else { break };
        if !ktn_member(&tw, n, x) {
            break;
        }
        t.push(n);
        chain.push(Word::omega(&t));
    }
    chain
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    In,
    Out,
    Unknown { depth: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `x ∈ K_t` and the free vertical of `t` carries infinitely many 1s.
    Recurring { t: Word, vertical: u64 },
    /// The chain is exhausted: no placed prefix is longer than `bound`, and a
    /// scan of all prefix lengths up to `scanned_to` agrees.
    Exhausted {
        chain: Vec<Word>,
        bound: u64,
        scanned_to: u64,
        last_placed: u64,
    },
    /// A placed prefix of length `stray` beat the bound.
    Inconclusive {
        chain: Vec<Word>,
        bound: u64,
        stray: u64,
    },
    /// Not a binary point.
    Foreign,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tristate {
    #[serde(flatten)]
    pub verdict: Verdict,
    pub certificate: Certificate,
}

/// Lengths `1..=upto` of placed prefixes of `x`.
fn placed_prefix_lengths(x: &EpPoint, upto: u64) -> Vec<u64> {
    let bits: Vec<u8> = x.prefix(upto as usize).to_bits();
    (1..=upto)
        .filter(|&len| {
            let m = len - 1;
            (unpair(m).p == 0 || bits[m as usize] == 1) && decode_bits(&bits[..len as usize]).is_some()
        })
        .collect()
}

/// First index at which vertical `v` of `x` leaves `target`.
fn first_mismatch(x: &EpPoint, v: u64, target: &EpPoint) -> Option<u64> {
    let vert = ep_vertical(x, v);
    if &vert == target {
        return None;
    }
    let horizon = vert.tail_start().max(target.tail_start())
        + (vert.period().len() * target.period().len()) as u64;
    (0..horizon).find(|&j| vert.at(j) != target.at(j))
}

/// The exact length past which no prefix of `x` is placed, given that the
/// chain ends at `t` with a free vertical of finite support.
fn exhausted_bound(t: &Word, x: &EpPoint) -> u64 {
    let shape = KtShape::new(t.symbols());
    let v = shape.free_vertical();
    let mut bound = shape.split_position() + 1;
    let vert = ep_vertical(x, v);
    if let Some(j) = vert.last_occurrence(1) {
        bound = bound.max(pair(v, j) + 1);
        if j >= 1 {
            let n = j - 1;
            let mismatch = if !kt_split_member(t, w_bit(n, 0), x) {
                Some(shape.split_position())
            } else {
                (0..n + 2).find_map(|i| {
                    first_mismatch(x, v + i, &super::calculus::block_target(n, i))
                        .map(|h| pair(v + i, h))
                })
            };
            if let Some(d) = mismatch {
                bound = bound.max(d + 1);
            }
        }
    }
    bound
}

pub fn x3_member(x: &EpPoint) -> Tristate {
    if x.alphabet() != Alphabet::Binary {
        return Tristate {
            verdict: Verdict::Out,
            certificate: Certificate::Foreign,
        };
    }
    let chain = witness_chain(x);
    let t = chain.last().unwrap().clone();
    let v = free_vertical(&t);
    if ep_vertical(x, v).recurs(1) {
        return Tristate {
            verdict: Verdict::In,
            certificate: Certificate::Recurring { t, vertical: v },
        };
    }
    let bound = exhausted_bound(&t, x);
    let max_vertical = v + t.symbols().iter().max().map_or(0, |&n| n + 2);
    let horizon =
        x.tail_start() + 2 * x.period().len() as u64 * (max_vertical + 2);
    let scanned_to = bound.max(horizon) + 1;
    let lengths = placed_prefix_lengths(x, scanned_to);
    let last_placed = lengths.last().copied().unwrap_or(0);
    if last_placed > bound {
        return Tristate {
            verdict: Verdict::Unknown { depth: scanned_to },
            certificate: Certificate::Inconclusive {
                chain,
                bound,
                stray: last_placed,
            },
        };
    }
    Tristate {
        verdict: Verdict::Out,
        certificate: Certificate::Exhausted {
            chain,
            bound,
            scanned_to,
            last_placed,
        },
    }
}

impl Tristate {
    pub fn is_in(&self) -> bool {
        self.verdict == Verdict::In
    }

    pub fn is_out(&self) -> bool {
        self.verdict == Verdict::Out
    }

    /// Re-checks the certificate against `x` from the definitions.
    pub fn recheck(&self, x: &EpPoint) -> bool {
        match (&self.verdict, &self.certificate) {
            (Verdict::In, Certificate::Recurring { t, vertical }) => {
                if !kt_member(t, x) || *vertical != free_vertical(t) {
                    return false;
                }
                let vert = ep_vertical(x, *vertical);
                if !vert.recurs(1) {
                    return false;
                }
                // a concrete placed prefix ending on the free vertical, past the preperiod
                let start = vert.tail_start().max(1);
                let Some(j) = (start..start + vert.period().len() as u64).find(|&j| vert.at(j) == 1)
                else {
                    return false;
                };
                let len = pair(*vertical, j) + 1;
                let bits = x.prefix(len as usize).to_bits();
                decode_bits(&bits).is_some_and(|d| d.t == t.symbols())
            }
            (
                Verdict::Out,
                Certificate::Exhausted {
                    chain,
                    bound,
                    scanned_to,
                    last_placed,
                },
            ) => {
                let Some(t) = chain.last() else { return false };
                if *chain != witness_chain(x) || ep_vertical(x, free_vertical(t)).recurs(1) {
                    return false;
                }
                let lengths = placed_prefix_lengths(x, *scanned_to);
                lengths.last().copied().unwrap_or(0) == *last_placed && last_placed <= bound
            }
            (Verdict::Out, Certificate::Foreign) => x.alphabet() != Alphabet::Binary,
            _ => false,
        }
    }
}

/// Candidate `t` for an edge `x → y`: the chain element whose free vertical
/// holds the single differing position.
fn edge_witness(x: &EpPoint, y: &EpPoint) -> Result<Option<Word>> {
    if x.alphabet() != Alphabet::Binary || y.alphabet() != Alphabet::Binary {
        return Ok(None);
    }
    let Some(m) = single_difference(x, y, DEFAULT_CAP)? else {
        return Ok(None);
    };
    let ix = unpair(m);
    if ix.p != 0 || x.at(m) != 0 || y.at(m) != 1 {
        return Ok(None);
    }
    Ok(witness_chain(x)
        .into_iter()
        .find(|t| free_vertical(t) == ix.n))
}

pub fn a3_is_edge(x: &EpPoint, y: &EpPoint) -> Result<Option<Word>> {
    Ok(edge_witness(x, y)?.filter(|t| h_member(t, x) && &phi_t(t, x) == y))
}

pub fn g_is_edge(x: &EpPoint, y: &EpPoint) -> Result<Option<Word>> {
    Ok(edge_witness(x, y)?.filter(|t| h_tilde_member(t, x) && &phi_t(t, x) == y))
}

pub fn density_witness_x3(u: &Word) -> Result<EpPoint> {
    if u.is_empty() {
        return Err(Error::EmptyWord);
    }
    if u.alphabet() != Alphabet::Binary {
        return Err(Error::AlphabetMismatch {
            expected: Alphabet::Binary,
            got: u.alphabet(),
        });
    }
    Ok(EpPoint::from_bits(&u.to_bits(), &[1]))
}

/// Modulus `L` and residue `r` such that a point whose tail is 1 exactly at
/// positions `≡ r (mod L)` has no tail 1 on verticals `< v` and infinitely
/// many on vertical `v`.
///
/// Uses `⟨w,p⟩ + w + 1 = T(w+p+1)`: the tail position is on vertical `w`
/// only if `r + w + 1` is a triangular residue mod `L`.
pub fn free_vertical_residue(v: u64) -> (u64, u64) {
    for l in 1u64.. {
        let mut tri = vec![false; l as usize];
        for k in 0..2 * l {
            tri[(triangular(k) % l) as usize] = true;
        }
        for target in 0..l {
            if !tri[target as usize] {
                continue;
            }
            let r = (target + l - (v + 1) % l) % l;
            if (0..v).all(|w| !tri[((r + w + 1) % l) as usize]) {
                return (l, r);
            }
        }
    }
    unreachable!()
}

pub fn density_witness_ht(t: &Word, u: &Word) -> Result<EpPoint> {
    let shape = KtShape::new(t.symbols());
    let sigma = shape.split_position();
    let inconsistent = || Error::Inconsistent {
        word: u.to_string(),
        t: t.to_string(),
    };
    if u.alphabet() != Alphabet::Binary {
        return Err(inconsistent());
    }
    let bits = u.to_bits();
    if !shape.admits_prefix(&bits) || bits.get(sigma as usize).is_some_and(|&b| b != 0) {
        return Err(inconsistent());
    }
    let (l, r) = free_vertical_residue(shape.free_vertical());
    let need = (bits.len() as u64).max(shape.support_end()).max(sigma + 1);
    let k = need.div_ceil(l) * l;
    let pre: Vec<u8> = (0..k)
        .map(|p| {
            if let Some(&b) = bits.get(p as usize) {
                b
            } else if let Some(b) = shape.bit_at(p) {
                b
            } else if p == sigma {
                0
            } else {
                (p % l == r) as u8
            }
        })
        .collect();
    let period: Vec<u8> = (0..l).map(|p| (p == r) as u8).collect();
    Ok(EpPoint::from_bits(&pre, &period))
}

/// Least `n` with `ε·u ⊑ w_n`.
pub fn find_ktn_in_cylinder(_t: &Word, eps: u8, u: &Word) -> u64 {
    let mut target = vec![eps];
    target.extend(u.to_bits());
    let len = target.len() as u64;
    (len.saturating_sub(1)..)
        .find(|&n| {
            target
                .iter()
                .enumerate()
                .all(|(k, &b)| w_bit(n, k as u64) == b)
        })
        .unwrap()
}

/// Whether `K_{tn}` lies inside the relative cylinder of `K^ε_t` whose
/// verticals from `Σ^t_{|t|}` on, joined, extend `ε·u`.
pub fn ktn_inside_cylinder(t: &Word, eps: u8, u: &Word, n: u64) -> bool {
    let mut target = vec![eps];
    target.extend(u.to_bits());
    let base = free_vertical(t);
    let tn = t.pushed(n).expect("omega word");
    let shape = KtShape::new(tn.symbols());
    // positions ⟨i,p⟩ < |εu| have i ≤ M(|u|) < n + 2, so K_{tn} pins them all
    let pinned = target.iter().enumerate().all(|(m, &b)| {
        let ix = unpair(m as u64);
        ix.n < n + 2 && shape.bit_on(base + ix.n, ix.p) == Some(b)
    });
    let canonical_ok = (0..2u8).all(|e| {
        let x = canonical_point(&tn, e);
        kt_split_member(t, eps, &x)
            && target.iter().enumerate().all(|(m, &b)| {
                let ix = unpair(m as u64);
                x.at(pair(base + ix.n, ix.p)) == b as u64
            })
    });
    pinned && canonical_ok
}

/// Membership in `K^ε_{b(i)} \ ⋃ K_{b(i)n}` over `l ≤ q`, `b(i)n ⊑ b(l)`, `w_n(0) = ε`.
fn kt_cell_member(coder: &PrimeCoder, q: u64, i: u64, eps: u8, x: &EpPoint) -> Result<bool> {
    let bi = coder.decode(i)?;
    if !kt_split_member(bi, eps, x) {
        return Ok(false);
    }
    for l in 0..=q {
        let bl = coder.decode(l)?;
        if bl.len() > bi.len() && bi.is_prefix_of(bl) {
            let n = bl.symbols()[bi.len()];
            if w_bit(n, 0) == eps && ktn_member(bi, n, x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn kt_partition_member_with(
    coder: &PrimeCoder,
    q: u64,
    p: u64,
    x: &EpPoint,
) -> Result<Verdict> {
    if p >= 2 * q + 3 {
        return Ok(Verdict::Out);
    }
    if p <= 2 * q + 1 {
        let hit = kt_cell_member(coder, q, p / 2, (p % 2) as u8, x)?;
        return Ok(if hit { Verdict::In } else { Verdict::Out });
    }
    for cell in 0..=2 * q + 1 {
        if kt_cell_member(coder, q, cell / 2, (cell % 2) as u8, x)? {
            return Ok(Verdict::Out);
        }
    }
    Ok(x3_member(x).verdict)
}

pub fn kt_partition_member(q: u64, p: u64, x: &EpPoint, bound: u64) -> Result<Verdict> {
    kt_partition_member_with(&PrimeCoder::with_bound(bound), q, p, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktree::calculus::phi_t_inverse;

    fn bp(s: &str) -> EpPoint {
        EpPoint::parse(Alphabet::Binary, s).unwrap()
    }

    fn om(s: &[u64]) -> Word {
        Word::omega(s)
    }

    fn b(s: &str) -> Word {
        Word::parse(Alphabet::Binary, s).unwrap()
    }

    #[test]
    fn h_examples() {
        assert!(h_member(&om(&[]), &bp("01;1")));
        assert!(!h_member(&om(&[0]), &bp("0010;0")));
        assert!(h_tilde_member(&om(&[]), &bp("01;1")));
        assert!(!h_tilde_member(&om(&[]), &bp("0010;0")));
        assert!(!h_tilde_member(&om(&[]), &bp("0011;0")));
    }

    #[test]
    fn chain_examples() {
        assert_eq!(witness_chain(&bp("0;0")), vec![om(&[])]);
        assert_eq!(witness_chain(&bp("0010;0")), vec![om(&[]), om(&[0])]);
        let x = canonical_point(&om(&[3, 1, 2]), 0);
        assert_eq!(
            witness_chain(&x),
            vec![om(&[]), om(&[3]), om(&[3, 1]), om(&[3, 1, 2])]
        );
    }

    #[test]
    fn x3_examples() {
        let r = x3_member(&bp("01;1"));
        assert!(r.is_in());
        assert_eq!(
            r.certificate,
            Certificate::Recurring {
                t: om(&[]),
                vertical: 0
            }
        );
        assert!(r.recheck(&bp("01;1")));
        for s in ["0;0", "0010;0"] {
            let r = x3_member(&bp(s));
            assert!(r.is_out(), "{s}: {r:?}");
            assert!(r.recheck(&bp(s)));
        }
    }

    #[test]
    fn x3_out_bound_is_last_placed_prefix() {
        // the bound is exact when the free vertical has its last 1 as the last constrained event
        let x = bp("0;0");
        let Certificate::Exhausted { last_placed, .. } = x3_member(&x).certificate else {
            panic!()
        };
        assert_eq!(last_placed, 1);
    }

    #[test]
    fn edge_examples() {
        assert_eq!(a3_is_edge(&bp("01;1"), &bp("11;1")).unwrap(), Some(om(&[])));
        assert_eq!(a3_is_edge(&bp("0010;0"), &bp("0011;0")).unwrap(), None);
        assert_eq!(a3_is_edge(&bp("0;0"), &bp("1;0")).unwrap(), None);
        assert_eq!(g_is_edge(&bp("01;1"), &bp("11;1")).unwrap(), Some(om(&[])));
        // 0^∞ avoids every K_(n) and φ-preimage, so it lies in H̃_∅ though not in H_∅
        assert_eq!(g_is_edge(&bp("0;0"), &bp("1;0")).unwrap(), Some(om(&[])));
    }

    #[test]
    fn density_x3_examples() {
        assert_eq!(density_witness_x3(&b("00")).unwrap(), bp("00;1"));
        assert!(x3_member(&density_witness_x3(&b("00")).unwrap()).is_in());
        assert_eq!(density_witness_x3(&b("")), Err(Error::EmptyWord));
    }

    #[test]
    fn residues_hit_only_the_free_vertical() {
        for v in 0..25u64 {
            let (l, r) = free_vertical_residue(v);
            let mut on_v = 0;
            for pos in (r..200_000).step_by(l as usize) {
                let ix = unpair(pos);
                assert!(ix.n >= v, "v={v} pos={pos}");
                on_v += (ix.n == v) as u32;
            }
            assert!(on_v > 0, "v={v}");
        }
        assert_eq!(free_vertical_residue(0).0, 1);
        assert_eq!(free_vertical_residue(1).0, 3);
        assert_eq!(free_vertical_residue(2).0, 7);
    }

    #[test]
    fn density_ht_examples() {
        assert_eq!(density_witness_ht(&om(&[]), &b("0")).unwrap(), bp("0;1"));
        assert!(matches!(
            density_witness_ht(&om(&[0]), &b("0011")),
            Err(Error::Inconsistent { .. })
        ));
        for (t, u) in [(vec![0], "0010"), (vec![2, 1], "1"), (vec![4], "0")] {
            let x = density_witness_ht(&om(&t), &b(u)).unwrap();
            assert!(x.starts_with(&b(u)));
            assert!(h_member(&om(&t), &x), "t={t:?} x={x}");
            assert!(x3_member(&x).is_in());
        }
    }

    #[test]
    fn cylinder_examples() {
        assert_eq!(find_ktn_in_cylinder(&om(&[]), 0, &b("")), 0);
        assert_eq!(find_ktn_in_cylinder(&om(&[]), 1, &b("")), 2);
        // w_1 = "00" already extends "00"
        assert_eq!(find_ktn_in_cylinder(&om(&[0]), 0, &b("0")), 1);
        for (t, eps, u) in [(vec![], 0, ""), (vec![0], 1, "01"), (vec![1, 0], 0, "110")] {
            let n = find_ktn_in_cylinder(&om(&t), eps, &b(u));
            assert!(ktn_inside_cylinder(&om(&t), eps, &b(u), n));
        }
    }

    #[test]
    fn partition_examples() {
        assert_eq!(kt_partition_member(0, 0, &bp("0;1"), 100).unwrap(), Verdict::In);
        let x = canonical_point(&om(&[0]), 0);
        assert_eq!(kt_partition_member(1, 0, &x, 100).unwrap(), Verdict::Out);
        assert_eq!(kt_partition_member(0, 5, &x, 100).unwrap(), Verdict::Out);
    }

    #[test]
    fn phi_image_of_h_tilde() {
        let t = om(&[]);
        let y = phi_t(&t, &bp("01;1"));
        assert!(h_tilde_image_member(&t, &y));
        assert_eq!(phi_t_inverse(&t, &y), bp("01;1"));
    }
}
