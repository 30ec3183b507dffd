//! Offsets `Σ^t_k`, the closed sets `K_t`, their splits `K^ε_t`, and `φ_t`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::points::{ep_vertical, EpPoint};
use crate::seqcore::{pair, slice, unpair, w_bit, w_word, Alphabet, Word};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Offsets {
    /// `Σ^t_0, …, Σ^t_{|t|}`.
    pub partials: Vec<u64>,
    /// `Σ_t = ⟨Σ^t_{|t|}, 0⟩`.
    pub sigma_t: u64,
}

pub fn sigma_offsets(t: &Word) -> Offsets {
    let shape = KtShape::new(t.symbols());
    Offsets {
        sigma_t: shape.split_position(),
        partials: shape.partials,
    }
}

/// Position-level view of the constraints defining `K_t`.
///
/// Vertical `Σ^t_k + i` (for `i < t(k)+2`) is pinned to block `i` of `w_{t(k)}`;
/// every vertical from `Σ^t_{|t|}` on is free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KtShape {
    t: Vec<u64>,
    partials: Vec<u64>,
}

impl KtShape {
    pub fn new(t: &[u64]) -> Self {
        let mut partials = Vec::with_capacity(t.len() + 1);
        let mut acc = 0u64;
        partials.push(acc);
        for &n in t {
            acc += n + 2;
            partials.push(acc);
        }
        KtShape {
            t: t.to_vec(),
            partials,
        }
    }

    pub fn t(&self) -> &[u64] {
        &self.t
    }

    pub fn t_word(&self) -> Word {
        Word::omega(&self.t)
    }

    pub fn level(&self) -> usize {
        self.t.len()
    }

    pub fn partials(&self) -> &[u64] {
        &self.partials
    }

    /// `Σ^t_{|t|}`, the first unconstrained vertical.
    pub fn free_vertical(&self) -> u64 {
        *self.partials.last().unwrap()
    }

    /// `Σ_t`, the coordinate flipped by `φ_t`.
    pub fn split_position(&self) -> u64 {
        pair(self.free_vertical(), 0)
    }

    pub fn extended(&self, n: u64) -> KtShape {
        let mut t = self.t.clone();
        t.push(n);
        KtShape::new(&t)
    }

    /// Target bit at index `j` of vertical `v`, `None` when `v` is free.
    #[inline]
    pub fn bit_on(&self, v: u64, j: u64) -> Option<u8> {
        if v >= self.free_vertical() {
            return None;
        }
        let k = self.partials.partition_point(|&s| s <= v) - 1;
        Some(block_bit(self.t[k], v - self.partials[k], j))
    }

    #[inline]
    pub fn bit_at(&self, position: u64) -> Option<u8> {
        let ix = unpair(position);
        self.bit_on(ix.n, ix.p)
    }

    /// One past the last position carrying a constrained 1.
    pub fn support_end(&self) -> u64 {
        let mut end = 0;
        for (k, &n) in self.t.iter().enumerate() {
            let base = self.partials[k];
            end = end.max(pair(base, n + 1) + 1);
            for q in 0..=n {
                if w_bit(n, q) == 1 {
                    let ix = unpair(q);
                    end = end.max(pair(base + ix.n, ix.p) + 1);
                }
            }
        }
        end
    }

    /// Whether the binary prefix `u` meets `K_t`.
    pub fn admits_prefix(&self, u: &[u8]) -> bool {
        u.iter()
            .enumerate()
            .all(|(p, &b)| self.bit_at(p as u64).map_or(true, |target| target == b))
    }

    /// The point with every constrained coordinate at its target, `Σ_t` set to
    /// `eps`, and every other coordinate 0.
    pub fn canonical_bits(&self, eps: u8) -> Vec<u8> {
        let sigma = self.split_position();
        let len = self.support_end().max(sigma + 1);
        (0..len)
            .map(|p| {
                if p == sigma {
                    eps
                } else {
                    self.bit_at(p).unwrap_or(0)
                }
            })
            .collect()
    }
}

/// Index `j` of block `i` of `w_n`: block 0 is `(w_n)_0 0^{n+1−|(w_n)_0|} 1 0^∞`,
/// block `i > 0` is `(w_n)_i 0^∞`.
#[inline]
fn block_bit(n: u64, i: u64, j: u64) -> u8 {
    if i == 0 && j == n + 1 {
        return 1;
    }
    let q = pair(i, j);
    if q <= n {
        w_bit(n, q)
    } else {
        0
    }
}

/// Target point of block `i` of `w_n`, built from the word `w_n` and its slices.
pub fn block_target(n: u64, i: u64) -> EpPoint {
    let block = slice(&w_word(n), i);
    let mut pre = block.to_bits();
    if i == 0 {
        pre.resize(n as usize + 1, 0);
        pre.push(1);
    }
    EpPoint::from_bits(&pre, &[0])
}

/// Vertical index ↦ the point that vertical must equal in `K_t`.
pub fn kt_constraints(t: &Word) -> BTreeMap<u64, EpPoint> {
    let mut out = BTreeMap::new();
    let mut base = 0;
    for &n in t.symbols() {
        for i in 0..n + 2 {
            out.insert(base + i, block_target(n, i));
        }
        base += n + 2;
    }
    out
}

fn require_binary(x: &EpPoint) -> Result<()> {
    if x.alphabet() != Alphabet::Binary {
        return Err(Error::AlphabetMismatch {
            expected: Alphabet::Binary,
            got: x.alphabet(),
        });
    }
    Ok(())
}

pub fn kt_member(t: &Word, x: &EpPoint) -> bool {
    if require_binary(x).is_err() {
        return false;
    }
    kt_constraints(t)
        .into_iter()
        .all(|(v, target)| ep_vertical(x, v) == target)
}

pub fn kt_prefix_consistent(t: &Word, u: &Word) -> bool {
    u.alphabet() == Alphabet::Binary && KtShape::new(t.symbols()).admits_prefix(&u.to_bits())
}

pub fn canonical_point(t: &Word, eps: u8) -> EpPoint {
    EpPoint::from_bits(&KtShape::new(t.symbols()).canonical_bits(eps), &[0])
}

/// `φ_t`: forces coordinate `Σ_t` to 1.
pub fn phi_t(t: &Word, x: &EpPoint) -> EpPoint {
    x.with_symbol(KtShape::new(t.symbols()).split_position(), 1)
        .expect("binary symbol")
}

/// Inverse of `φ_t` on `K^1_t`: forces coordinate `Σ_t` to 0.
pub fn phi_t_inverse(t: &Word, x: &EpPoint) -> EpPoint {
    x.with_symbol(KtShape::new(t.symbols()).split_position(), 0)
        .expect("binary symbol")
}

/// `φ_t` on a finite word reaching past `Σ_t`.
pub fn phi_t_word(t: &Word, u: &Word) -> Result<Word> {
    let sigma = KtShape::new(t.symbols()).split_position();
    if (u.len() as u64) <= sigma {
        return Err(Error::TooShort {
            len: u.len(),
            position: sigma,
        });
    }
    let mut bits = u.to_bits();
    bits[sigma as usize] = 1;
    Ok(Word::from_bits(&bits))
}

/// `x ∈ K^ε_t`.
pub fn kt_split_member(t: &Word, eps: u8, x: &EpPoint) -> bool {
    kt_member(t, x) && x.at(KtShape::new(t.symbols()).split_position()) == eps as u64
}

/// `x ∈ K_{tn}` through the inductive description: `x ∈ K^{w_n(0)}_t` and the
/// verticals `Σ^t_{|t|} + i`, `i < n + 2`, carry the blocks of `w_n`.
pub fn ktn_member(t: &Word, n: u64, x: &EpPoint) -> bool {
    if !kt_split_member(t, w_bit(n, 0), x) {
        return false;
    }
    let base = KtShape::new(t.symbols()).free_vertical();
    (0..n + 2).all(|i| ep_vertical(x, base + i) == block_target(n, i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bp(s: &str) -> EpPoint {
        EpPoint::parse(Alphabet::Binary, s).unwrap()
    }

    fn om(s: &[u64]) -> Word {
        Word::omega(s)
    }

    #[test]
    fn offsets_examples() {
        assert_eq!(
            sigma_offsets(&om(&[])),
            Offsets {
                partials: vec![0],
                sigma_t: 0
            }
        );
        assert_eq!(
            sigma_offsets(&om(&[0])),
            Offsets {
                partials: vec![0, 2],
                sigma_t: 3
            }
        );
        assert_eq!(
            sigma_offsets(&om(&[4, 2])),
            Offsets {
                partials: vec![0, 6, 10],
                sigma_t: 55
            }
        );
    }

    #[test]
    fn constraints_examples() {
        assert!(kt_constraints(&om(&[])).is_empty());
        let c = kt_constraints(&om(&[0]));
        assert_eq!(c.len(), 2);
        assert_eq!(c[&0], bp("01;0"));
        assert_eq!(c[&1], bp("0;0"));
        let c = kt_constraints(&om(&[0, 0]));
        assert_eq!(c.keys().copied().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(c[&2], bp("01;0"));
        assert_eq!(c[&3], bp("0;0"));
    }

    #[test]
    fn last_one_of_each_block_sits_at_n_plus_one() {
        for n in 0..60 {
            assert_eq!(block_target(n, 0).last_occurrence(1), Some(n + 1));
        }
    }

    #[test]
    fn shape_agrees_with_constraint_points() {
        for t in [vec![], vec![0], vec![4, 2], vec![1, 3, 0], vec![7]] {
            let shape = KtShape::new(&t);
            let c = kt_constraints(&om(&t));
            for pos in 0..2000u64 {
                let ix = unpair(pos);
                let want = c.get(&ix.n).map(|pt| pt.at(ix.p) as u8);
                assert_eq!(shape.bit_at(pos), want, "t={t:?} pos={pos}");
            }
        }
    }

    #[test]
    fn prefix_consistency_examples() {
        assert!(kt_prefix_consistent(&om(&[0]), &Word::from_bits(&[0, 0, 1, 1])));
        assert!(!kt_prefix_consistent(&om(&[0]), &Word::from_bits(&[1])));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(canonical_point(&om(&[]), 0), bp("0;0"));
        assert_eq!(canonical_point(&om(&[0]), 0), bp("0010;0"));
        assert_eq!(canonical_point(&om(&[0]), 1), bp("0011;0"));
        for t in [vec![], vec![0], vec![3, 1], vec![2, 0, 5]] {
            for eps in 0..2u8 {
                let x = canonical_point(&om(&t), eps);
                assert!(kt_member(&om(&t), &x));
                assert_eq!(x.at(KtShape::new(&t).split_position()), eps as u64);
            }
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_t(&om(&[]), &bp("01;1")), bp("11;1"));
        assert_eq!(phi_t(&om(&[0]), &bp("0010;0")), bp("0011;0"));
        assert_eq!(phi_t(&om(&[]), &bp("1;1")), bp("1;1"));
        let x = bp("0010;0");
        assert_eq!(phi_t_inverse(&om(&[0]), &phi_t(&om(&[0]), &x)), x);
        assert!(phi_t_word(&om(&[0]), &Word::from_bits(&[0, 0, 1])).is_err());
        assert_eq!(
            phi_t_word(&om(&[0]), &Word::from_bits(&[0, 0, 1, 0])).unwrap(),
            Word::from_bits(&[0, 0, 1, 1])
        );
    }

    #[test]
    fn kt_member_empty_t_accepts_everything() {
        for s in ["0;0", "1;01", "0110;1"] {
            assert!(kt_member(&om(&[]), &bp(s)));
        }
    }

    #[test]
    fn ktn_examples() {
        assert!(ktn_member(&om(&[]), 0, &bp("0010;0")));
        // split bit 1 at Σ_(0) = 3 is a free coordinate of K_(0)
        assert!(ktn_member(&om(&[]), 0, &bp("0011;0")));
        assert!(kt_member(&om(&[0]), &bp("0011;0")));
        assert!(!ktn_member(&om(&[]), 1, &bp("0010;0")));
    }

    #[test]
    fn ktn_matches_direct_extension() {
        let ts: Vec<Vec<u64>> = vec![vec![], vec![0], vec![2], vec![1, 0]];
        for t in &ts {
            for n in 0..6 {
                let mut tn = t.clone();
                tn.push(n);
                for m in 0..6 {
                    let mut tm = t.clone();
                    tm.push(m);
                    for eps in 0..2 {
                        let x = canonical_point(&om(&tm), eps);
                        assert_eq!(ktn_member(&om(t), n, &x), kt_member(&om(&tn), &x));
                        assert_eq!(ktn_member(&om(t), n, &x), n == m);
                    }
                }
            }
        }
    }
}
