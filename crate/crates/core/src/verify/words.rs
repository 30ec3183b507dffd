//! Exhaustive suites over binary words: decoding, slices, mirrors, predecessors.

use std::collections::HashMap;

use super::sweep::{bits_string, sweep_words, Node, Tally};
use crate::error::Error;
use crate::ktree::{decode_bits, mirror, Decoded, OracleTables};
use crate::seqcore::{diagonal_of, slice, Word};

pub fn decode_equiv(maxlen: usize) -> Tally {
    let tables = OracleTables::new(diagonal_of(maxlen.saturating_sub(1) as u64));
    let mut t = sweep_words(maxlen, |node, acc| {
        acc.case();
        let u = Word::from_bits(node.bits);
        let fast = node.decoded();
        match tables.decode(&u) {
            Err(Error::NonUniqueWitness { first, second, .. }) => {
                acc.branch("non_unique");
                acc.fail(bits_string(node.bits), "unique witness", format!("{first} and {second}"));
            }
            Err(e) => acc.fail(bits_string(node.bits), "decode", e),
            Ok(oracle) => {
                let same = match (fast, &oracle) {
                    (None, None) => true,
                    (Some(d), Some(o)) => {
                        d.t == o.t.symbols()
                            && d.sigma == o.sigma
                            && d.eps == o.eps
                            && o.sigma < node.bits.len() as u64
                    }
                    _ => false,
                };
                if oracle.is_some() {
                    acc.branch(&format!("level_{}", oracle.as_ref().unwrap().l));
                } else {
                    acc.branch("not_placed");
                }
                if !same {
                    acc.fail(
                        bits_string(node.bits),
                        format!("{:?}", oracle.map(|o| (o.t.to_string(), o.sigma, o.eps))),
                        format!("{:?}", fast.map(|d| (d.t.clone(), d.sigma, d.eps))),
                    );
                }
            }
        }
    });
    t.ensure_branch("non_unique");
    t
}

pub fn slice_growth(maxlen: usize, maxn: u64) -> Tally {
    sweep_words(maxlen, |node, acc| {
        let u = Word::from_bits(node.bits);
        let len = node.bits.len() as u64;
        let parent = (len > 0).then(|| u.prefix(node.bits.len() - 1));
        for n in 0..=maxn {
            let s = slice(&u, n);
            if let Some(p) = &parent {
                acc.branch("a");
                let ps = slice(p, n);
                acc.check(
                    ps.is_prefix_of(&s),
                    || format!("a u={u} n={n}"),
                    "(u|k)_n ⊑ (u)_n",
                    || format!("{ps} vs {s}"),
                );
            }
            if n == 0 {
                acc.branch("b");
                acc.check(
                    s.len() as u64 <= len,
                    || format!("b u={u}"),
                    "|(u)_0| ≤ |u|",
                    || s.len().to_string(),
                );
            }
            if n <= len + 1 {
                acc.branch("c");
                acc.check(
                    s.len() as u64 <= len + 1 - n,
                    || format!("c u={u} n={n}"),
                    "|(u)_n| ≤ |u|+1−n",
                    || s.len().to_string(),
                );
            }
        }
    })
}

fn word_key(bits: &[u8]) -> (usize, u64) {
    (bits.len(), bits.iter().fold(0u64, |a, &b| a * 2 + b as u64))
}

fn all_words(maxlen: usize) -> impl Iterator<Item = Vec<u8>> {
    (0..=maxlen).flat_map(|len| {
        (0u64..(1 << len)).map(move |code| (0..len).map(|j| ((code >> (len - 1 - j)) & 1) as u8).collect())
    })
}

/// Per digit class, counts how often each word appears as `u` or `u^{l(u)}`;
/// the two-element sets are pairwise disjoint iff no word appears twice.
pub fn mirror_disjoint(maxlen: usize, pairwise_upto: usize) -> Tally {
    let mut acc = Tally::default();
    let mut seen: [HashMap<(usize, u64), Vec<u8>>; 2] = [HashMap::new(), HashMap::new()];
    let mut class_size = [0u64; 2];
    let mut small: Vec<(Vec<u8>, Vec<u8>, u8)> = Vec::new();
    for bits in all_words(maxlen) {
        let Some(d) = decode_bits(&bits) else { continue };
        let mut m = bits.clone();
        m[d.sigma as usize] ^= 1;
        let e = d.eps as usize;
        class_size[e] += 1;
        for w in [&bits, &m] {
            if let Some(prev) = seen[e].insert(word_key(w), bits.clone()) {
                acc.fail(
                    format!("eps={e} u={} v={}", bits_string(&prev), bits_string(&bits)),
                    "disjoint",
                    format!("share {}", bits_string(w)),
                );
            }
        }
        if bits.len() <= pairwise_upto {
            small.push((bits.clone(), m, d.eps));
        }
    }
    acc.cases = class_size.iter().map(|&n| n * n.saturating_sub(1) / 2).sum();
    acc.branches.insert("placed_eps0".into(), class_size[0]);
    acc.branches.insert("placed_eps1".into(), class_size[1]);
    // direct pairwise check on short words, through the public mirror
    for (i, (u, um, eu)) in small.iter().enumerate() {
        let mu = mirror(&Word::from_bits(u)).unwrap().to_bits();
        if &mu != um {
            acc.fail(bits_string(u), bits_string(um), bits_string(&mu));
        }
        for (v, vm, ev) in &small[i + 1..] {
            if eu != ev {
                continue;
            }
            acc.branch("pairwise");
            if u == v || u == vm || um == v || um == vm {
                acc.fail(format!("u={} v={}", bits_string(u), bits_string(v)), "disjoint", "intersect");
            }
        }
    }
    acc.finish()
}

struct PredView {
    len: usize,
    level: Option<usize>,
    eps: u8,
    sigma: u64,
}

fn view(len: usize, d: Option<&Decoded>) -> PredView {
    PredView {
        len,
        level: d.map(|d| d.level()),
        eps: d.map_or(0, |d| d.eps),
        sigma: d.map_or(0, |d| d.sigma),
    }
}

fn flipped(bits: &[u8], len: usize, at: u64) -> Vec<u8> {
    let mut w = bits[..len].to_vec();
    if len > 0 {
        w[at as usize] ^= 1;
    }
    w
}

/// Decodes of every prefix of `u^{l(u)}`, sharing those of `u` up to `Σ_t`.
fn mirror_prefixes(node: &Node<'_>, sigma: u64) -> (Vec<u8>, Vec<Option<Decoded>>) {
    let mbits = flipped(node.bits, node.bits.len(), sigma);
    let mut pre = node.prefixes[..=sigma as usize].to_vec();
    for n in sigma as usize + 1..=mbits.len() {
        pre.push(decode_bits(&mbits[..n]));
    }
    (mbits, pre)
}

pub fn predecessors(maxlen: usize) -> Tally {
    let mut t = sweep_words(maxlen, |node, acc| {
        let Some(d) = node.decoded() else { return };
        if node.bits.len() < 2 {
            return;
        }
        let l = d.level();
        let (mbits, mpre) = mirror_prefixes(node, d.sigma);
        let mnode = Node {
            bits: &mbits,
            prefixes: &mpre,
        };
        let bits = node.bits;
        let at = |n: &Node<'_>, len: usize| view(len, n.prefixes[len].as_ref());
        let p = at(node, node.pred_len(None));
        let q = at(node, node.pred_len(Some(l)));
        let pm = at(&mnode, mnode.pred_len(None));
        let qm = at(&mnode, mnode.pred_len(Some(l)));
        let key = || bits_string(bits);
        let word = |b: &[u8], v: &PredView| b[..v.len].to_vec();
        let mirror_of = |b: &[u8], v: &PredView| flipped(b, v.len, v.sigma);
        let lvl = |v: &PredView| v.level.map(|x| x as i64).unwrap_or(-1);
        let l = l as i64;

        match lvl(&p).cmp(&l) {
            std::cmp::Ordering::Less => acc.branch("pred_lt"),
            std::cmp::Ordering::Equal => acc.branch("pred_eq"),
            std::cmp::Ordering::Greater => acc.branch("pred_gt"),
        }

        // (a)
        if lvl(&p) == l {
            acc.check(p.eps == d.eps, || format!("a u={}", key()), "ε(u⁻) = ε(u)", || p.eps.to_string());
            if lvl(&pm) == l {
                acc.check(
                    word(&mbits, &pm) == mirror_of(bits, &p),
                    || format!("a u={}", key()),
                    "(u^l)⁻ = (u⁻)^l",
                    || bits_string(&word(&mbits, &pm)),
                );
            }
        }
        // (b)
        acc.check(
            (lvl(&q) == l) == (lvl(&qm) == l),
            || format!("b u={}", key()),
            "u^{-l} l-placed iff (u^l)^{-l} l-placed",
            || format!("{} vs {}", lvl(&q), lvl(&qm)),
        );
        if lvl(&q) == l && lvl(&qm) == l {
            acc.check(
                word(&mbits, &qm) == mirror_of(bits, &q) && q.eps == d.eps,
                || format!("b u={}", key()),
                "(u^l)^{-l} = (u^{-l})^l, ε kept",
                || bits_string(&word(&mbits, &qm)),
            );
        }
        // (c)
        if lvl(&p) < l || lvl(&pm) < l {
            acc.branch("c_applies");
            let all = [word(bits, &p), word(bits, &q), word(&mbits, &pm), word(&mbits, &qm)];
            acc.check(
                all.iter().all(|w| w == &all[0]) && [&p, &q, &pm, &qm].iter().all(|v| lvl(v) == l - 1),
                || format!("c u={}", key()),
                "four predecessors coincide, (l−1)-placed",
                || all.iter().map(|w| bits_string(w)).collect::<Vec<_>>().join(","),
            );
        }
        // (d)
        if lvl(&p) > l || lvl(&pm) > l {
            acc.branch("d_applies");
            let exactly_one = (lvl(&p) > l) != (lvl(&pm) > l);
            let other_is_l = if lvl(&p) > l { lvl(&pm) == l } else { lvl(&p) == l };
            acc.check(
                exactly_one && other_is_l,
                || format!("d u={}", key()),
                "exactly one (>l)-placed, other l-placed",
                || format!("{} {}", lvl(&p), lvl(&pm)),
            );
            if lvl(&p) > l && lvl(&pm) == l {
                acc.check(
                    word(bits, &q) == mirror_of(&mbits, &pm) && q.eps == d.eps,
                    || format!("d u={}", key()),
                    "u^{-l} = ((u^l)⁻)^l",
                    || bits_string(&word(bits, &q)),
                );
            }
            if lvl(&pm) > l && lvl(&p) == l {
                acc.check(
                    word(bits, &q) == word(bits, &p) && qm.eps == 1 - d.eps,
                    || format!("d u={}", key()),
                    "u^{-l} = u⁻",
                    || bits_string(&word(bits, &q)),
                );
            }
        }
        // (e)
        acc.check(
            lvl(&q) == l || lvl(&q) == l - 1,
            || format!("e u={}", key()),
            "l(u^{-l}) ∈ {l−1, l}",
            || lvl(&q).to_string(),
        );
    });
    for b in ["pred_lt", "pred_eq", "pred_gt"] {
        t.ensure_branch(b);
        if t.branches[b] == 0 {
            t.fail(format!("branch {b}"), "> 0 instances", 0);
        }
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds_pass() {
        for t in [decode_equiv(12), slice_growth(10, 11), mirror_disjoint(10, 8), predecessors(12)] {
            assert!(t.failures.is_empty(), "{:?}", &t.failures[..t.failures.len().min(5)]);
            assert!(t.cases > 0);
        }
    }

    #[test]
    fn greater_branch_is_witnessed_by_001111() {
        let mut hit = false;
        let t = sweep_words(6, |node, acc| {
            if node.bits == [0, 0, 1, 1, 1, 1] {
                let d = node.decoded().unwrap();
                let p = node.pred_len(None);
                acc.case();
                if node.prefixes[p].as_ref().unwrap().level() > d.level() {
                    acc.branch("gt");
                }
            }
        });
        hit |= t.branches.get("gt") == Some(&1);
        assert!(hit);
    }
}
