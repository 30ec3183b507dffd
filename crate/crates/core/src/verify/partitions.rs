//! Suites for the A₂ and 3^ω partitions, the Φ tail, and the G₀ level trees.

use rayon::prelude::*;

use super::sets::par_tally;
use super::sweep::Tally;
use crate::families::{
    a2_cell_word, a2_family_point, a2_partition_member_with, g0_is_edge, g0_level_graph, phi_map,
    phi_prefix, s3_family_member, s3_partition_member, theta,
};
use crate::points::EpPoint;
use crate::seqcore::{Alphabet, PrimeCoder, Word};

/// The unique `p` with `x ∈ O^p_q`, or every `p` that claims it.
fn a2_trace(coder: &PrimeCoder, q: u64, x: &EpPoint) -> Result<u64, Vec<u64>> {
    let hits: Vec<u64> = (0..=2 * q + 2)
        .filter(|&p| a2_partition_member_with(coder, q, p, x).unwrap_or(false))
        .collect();
    match hits[..] {
        [p] => Ok(p),
        _ => Err(hits),
    }
}

pub fn a2_partition(imax: u64, qmax: u64) -> Tally {
    let coder = PrimeCoder::with_bound(1000);
    let is: Vec<u64> = (0..=imax).collect();
    par_tally(&is, |&i, acc| {
        let pts: Vec<EpPoint> = (0..2).map(|e| a2_family_point(&coder, i, e).unwrap()).collect();
        for q in 0..=qmax {
            let traces: Vec<_> = pts.iter().map(|x| a2_trace(&coder, q, x)).collect();
            for (e, tr) in traces.iter().enumerate() {
                acc.check(tr.is_ok(), || format!("cover i={i} e={e} q={q}"), "exactly one cell", || format!("{tr:?}"));
            }
            if q >= i {
                acc.branch("b");
                for e in 0..2u64 {
                    acc.check(
                        traces[e as usize] == Ok(2 * i + e),
                        || format!("b i={i} e={e} q={q}"),
                        "C^ε_i ⊆ O^{2i+ε}_q",
                        || format!("{:?}", traces[e as usize]),
                    );
                }
            } else {
                acc.branch("a");
                acc.check(
                    traces[0].is_ok() && traces[0] == traces[1],
                    || format!("a i={i} q={q}"),
                    "C⁰_i ∪ C¹_i in one cell",
                    || format!("{:?} {:?}", traces[0], traces[1]),
                );
            }
        }
    })
}

/// `⋂_{q≥i} O^{2i+ε}_q` is a nested family of cylinders around `C^ε_i` whose
/// depth reaches every target the coder bound allows.
pub fn a2_collapse(imax: u64, bound: u64) -> Tally {
    let coder = PrimeCoder::with_bound(bound);
    let qs = coder.len() as u64;
    let is: Vec<u64> = (0..=imax).collect();
    par_tally(&is, |&i, acc| {
        for e in 0..2u8 {
            let x = a2_family_point(&coder, i, e).unwrap();
            let base = coder.decode(i).unwrap().len();
            let mut prev: Option<Word> = None;
            let mut deepest = 0;
            for q in i..qs {
                let w = a2_cell_word(&coder, q, i, e).unwrap();
                let nested = prev.as_ref().map_or(true, |p| p.is_prefix_of(&w));
                if prev.as_ref().map_or(true, |p| p.len() != w.len()) {
                    acc.check(
                        nested && x.starts_with(&w),
                        || format!("i={i} e={e} q={q}"),
                        "nested cylinder around C^ε_i",
                        || w.to_string(),
                    );
                }
                deepest = deepest.max(w.len() - base);
                prev = Some(w);
            }
            // the longest word in the table fixes the reachable depth
            let reach = (0..qs).map(|l| coder.decode(l).unwrap().len() + 1).max().unwrap_or(0) - base;
            acc.branch(&format!("depth_{deepest}"));
            acc.check(
                deepest == reach && deepest >= 3,
                || format!("i={i} e={e}"),
                "cylinder depth grows with q",
                || deepest.to_string(),
            );
        }
    })
}

fn binary_tails(len: usize) -> Vec<Vec<u64>> {
    (0u32..(1 << len))
        .map(|c| (0..len).map(|j| ((c >> (len - 1 - j)) & 1) as u64).collect())
        .collect()
}

fn s3_trace(q: u64, x: &EpPoint) -> Result<u64, Vec<u64>> {
    let hits: Vec<u64> = (0..=2 * q + 2).filter(|&p| s3_partition_member(q, p, x)).collect();
    match hits[..] {
        [p] => Ok(p),
        _ => Err(hits),
    }
}

/// Partition clauses for `S^ε_i`, sampled exhaustively over the binary
/// symbols the cells can see, and cylinder disjointness at `depth`.
pub fn s3_partition(imax: u64, qmax: u64, depth: usize) -> Tally {
    let is: Vec<u64> = (0..=imax).collect();
    let mut total = par_tally(&is, |&i, acc| {
        let head = theta(i);
        let seen = (0..=qmax).map(|q| theta(q).len()).max().unwrap() + 1;
        let free = seen.saturating_sub(head.len());
        let points = |e: u64| -> Vec<EpPoint> {
            binary_tails(free)
                .into_iter()
                .flat_map(|tail| {
                    let mut pre = head.symbols().to_vec();
                    pre.push(e);
                    pre.extend(tail);
                    [vec![0], vec![1], vec![0, 1]]
                        .map(|per| EpPoint::new(Alphabet::Ternary, pre.clone(), per).unwrap())
                })
                .collect()
        };
        let sides = [points(0), points(1)];
        for (e, side) in sides.iter().enumerate() {
            for x in side {
                acc.check(s3_family_member(i, e as u8, x), || format!("member i={i} x={x}"), "in S^ε_i", || "no".into());
            }
        }
        for q in 0..=qmax {
            let mut cells = Vec::new();
            for (e, side) in sides.iter().enumerate() {
                for x in side {
                    let tr = s3_trace(q, x);
                    acc.check(tr.is_ok(), || format!("cover q={q} x={x}"), "exactly one cell", || format!("{tr:?}"));
                    if q >= i {
                        acc.branch("b");
                        acc.check(
                            tr == Ok(2 * i + e as u64),
                            || format!("b i={i} q={q} x={x}"),
                            "S^ε_i ⊆ O^{2i+ε}_q",
                            || format!("{tr:?}"),
                        );
                    }
                    cells.push(tr);
                }
            }
            if q < i {
                acc.branch("a");
                cells.dedup();
                acc.check(
                    cells.len() == 1 && cells[0].is_ok(),
                    || format!("a i={i} q={q}"),
                    "S⁰_i ∪ S¹_i in one cell",
                    || format!("{cells:?}"),
                );
            }
        }
    });
    total.merge(s3_disjoint(imax, depth));
    total.finish()
}

/// No ternary cylinder of length `depth` meets two of the `S^ε_i`.
fn s3_disjoint(imax: u64, depth: usize) -> Tally {
    let heads: Vec<(u64, u8, Vec<u64>)> = (0..=imax)
        .flat_map(|i| {
            (0..2u8).map(move |e| {
                let mut h = theta(i).symbols().to_vec();
                h.push(e as u64);
                (i, e, h)
            })
        })
        .collect();
    let count = 3u64.pow(depth as u32);
    let chunks: Vec<u64> = (0..count).step_by(1 << 12).collect();
    let parts: Vec<Tally> = chunks
        .par_iter()
        .map(|&start| {
            let mut acc = Tally::default();
            for code in start..(start + (1 << 12)).min(count) {
                let mut w = vec![0u64; depth];
                let mut c = code;
                for d in w.iter_mut().rev() {
                    *d = c % 3;
                    c /= 3;
                }
                let meets = heads
                    .iter()
                    .filter(|(_, _, h)| {
                        let k = h.len().min(depth);
                        w[..k] == h[..k] && w[k..].iter().all(|&s| s < 2)
                    })
                    .count();
                acc.branch("disjoint");
                if meets > 1 {
                    acc.fail(format!("w={}", Word::ternary(&w).unwrap()), "≤ 1 family set", meets);
                }
                acc.case();
            }
            acc
        })
        .collect();
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    total
}

pub fn phi_tail(imax: u64, depth: usize) -> Tally {
    let coder = PrimeCoder::with_bound(1000);
    let is: Vec<u64> = (0..=imax).collect();
    par_tally(&is, |&i, acc| {
        for e in 0..2u8 {
            let x = a2_family_point(&coder, i, e).unwrap();
            let trace: Vec<u64> = (0..depth as u64)
                .map(|q| a2_trace(&coder, q, &x).unwrap_or(u64::MAX))
                .collect();
            let settled = trace[i as usize..].iter().all(|&p| p == 2 * i + e as u64);
            acc.check(settled, || format!("i={i} e={e}"), "trace settles at 2i+ε", || format!("{trace:?}"));
            let gamma = EpPoint::new(Alphabet::Omega, trace[..i as usize].to_vec(), vec![2 * i + e as u64]).unwrap();
            let got = phi_prefix(&gamma, depth);
            let mut want = phi_map(&Word::omega(&trace[..i as usize])).symbols().to_vec();
            want.push(2);
            want.resize(depth.max(want.len()), e as u64);
            let want = Word::ternary(&want[..depth]).unwrap();
            acc.check(got == want, || format!("i={i} e={e}"), &want.to_string(), || got.to_string());
        }
    })
}

/// Minimal union-find with path halving.
struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, mut a: usize) -> usize {
        while self.0[a] != a {
            self.0[a] = self.0[self.0[a]];
            a = self.0[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

fn bits_index(w: &Word) -> usize {
    w.symbols().iter().fold(0, |a, &b| a * 2 + b as usize)
}

pub fn g0_tree(nmax: u32) -> Tally {
    let levels: Vec<u32> = (0..=nmax).collect();
    par_tally(&levels, |&n, acc| {
        let g = g0_level_graph(n).unwrap();
        let size = 1usize << n;
        acc.branch(&format!("edges_{n}"));
        *acc.branches.get_mut(&format!("edges_{n}")).unwrap() = g.edges.len() as u64;
        acc.check(g.edges.len() == size - 1, || format!("N={n}"), "2^N − 1 edges", || g.edges.len().to_string());
        let mut dsu = Dsu((0..size).collect());
        let mut adj = vec![Vec::new(); size];
        for (a, b) in &g.edges {
            let (ia, ib) = (bits_index(a), bits_index(b));
            acc.check(dsu.union(ia, ib), || format!("N={n} {a}-{b}"), "no cycle", || "closes a cycle".into());
            adj[ia].push(ib);
            adj[ib].push(ia);
            let pad = |w: &Word| EpPoint::from_bits(&w.to_bits(), &[0]);
            let ok = g0_is_edge(&pad(a), &pad(b)).ok().flatten().is_some();
            acc.check(ok, || format!("N={n} {a}-{b}"), "G₀ edge on padded points", || "rejected".into());
        }
        let root = dsu.find(0);
        let connected = (0..size).all(|v| dsu.find(v) == root);
        acc.check(connected, || format!("N={n}"), "connected", || "several components".into());
        // BFS 2-coloring
        let mut color = vec![u8::MAX; size];
        color[0] = 0;
        let mut queue = std::collections::VecDeque::from([0usize]);
        let mut proper = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    queue.push_back(w);
                } else if color[w] == color[v] {
                    proper = false;
                }
            }
        }
        let chi = if n == 0 { 1 } else { 2 };
        acc.branch(&format!("chromatic_{chi}"));
        acc.check(proper, || format!("N={n}"), "2-colorable", || "odd cycle".into());
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_suites_pass_small() {
        for t in [
            a2_partition(4, 4),
            a2_collapse(3, 2310),
            s3_partition(4, 4, 6),
            phi_tail(3, 12),
            g0_tree(6),
        ] {
            assert!(t.failures.is_empty(), "{:?}", &t.failures[..t.failures.len().min(5)]);
            assert!(t.cases > 0);
        }
    }

    #[test]
    fn g0_edge_counts() {
        let t = g0_tree(4);
        assert_eq!(t.branches["edges_3"], 7);
        assert_eq!(t.branches["edges_4"], 15);
    }
}
