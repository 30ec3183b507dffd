//! Sampled suites for `K_t`, `H_t`, `H̃_t`, `X₃` and `A₃` on the fixed corpus.

use rayon::prelude::*;

use super::corpus::{small_words, Corpus};
use super::sweep::Tally;
use crate::families::{PartitionFamily, PartitionSpec};
use crate::ktree::{
    a3_is_edge, canonical_point, decode_bits, density_witness_ht, density_witness_x3,
    find_ktn_in_cylinder, g_is_edge, h_member, h_tilde_image_member, h_tilde_member, kt_member,
    kt_split_member, ktn_inside_cylinder, ktn_member, phi_t, witness_chain, x3_member, KtShape,
    Verdict,
};
use crate::points::{ep_vertical, EpPoint};
use crate::seqcore::{w_bit, w_word, Alphabet, PrimeCoder, Word};

/// Runs `f` on each item in parallel and merges in input order.
pub fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|x| {
            let mut acc = Tally::default();
            f(x, &mut acc);
            acc
        })
        .collect();
    let mut total = Tally::default();
    for p in parts {
        total.merge(p);
    }
    total.finish()
}

pub fn ktn_disjoint(corpus: &Corpus, tlen: usize, tmax: u64, nmax: u64) -> Tally {
    let ts = small_words(tlen, tmax);
    par_tally(&corpus.binary, |x, acc| {
        for t in &ts {
            let members: Vec<u64> = (0..=nmax).filter(|&n| ktn_member(t, n, x)).collect();
            let v = KtShape::new(t.symbols()).free_vertical();
            for &n in &members {
                acc.branch("member");
                acc.check(
                    kt_member(&t.pushed(n).unwrap(), x),
                    || format!("x={x} t={t} n={n}"),
                    "inductive and direct K_tn agree",
                    || "direct says no".into(),
                );
                acc.check(
                    ep_vertical(x, v).last_occurrence(1) == Some(n + 1),
                    || format!("x={x} t={t} n={n}"),
                    "last 1 of free vertical at n+1",
                    || format!("{:?}", ep_vertical(x, v).last_occurrence(1)),
                );
            }
            for (i, &n) in members.iter().enumerate() {
                for &m in &members[i + 1..] {
                    if w_bit(n, 0) == w_bit(m, 0) {
                        acc.fail(format!("x={x} t={t}"), "disjoint K_tn", format!("in K_t{n} and K_t{m}"));
                    }
                }
            }
            // every pair n < n' with equal first digit counts as a case
            for n in 0..=nmax {
                for m in n + 1..=nmax {
                    if w_bit(n, 0) == w_bit(m, 0) {
                        acc.case();
                    }
                }
            }
        }
    })
}

/// Every `(t, ε, u)` gets the least `n` with `εu ⊑ w_n`, checked minimal
/// against `w_word` and checked to put `K_{tn}` inside the relative cylinder.
pub fn ktn_in_cylinder(tlen: usize, tmax: u64, maxlen: usize) -> Tally {
    let ts = small_words(tlen, tmax);
    par_tally(&ts, |t, acc| {
        for len in 0..=maxlen {
            for code in 0u32..(1 << len) {
                let bits: Vec<u8> = (0..len).map(|j| ((code >> (len - 1 - j)) & 1) as u8).collect();
                let u = Word::from_bits(&bits);
                for eps in 0..2u8 {
                    let n = find_ktn_in_cylinder(t, eps, &u);
                    let mut target = vec![eps];
                    target.extend(&bits);
                    let target = Word::from_bits(&target);
                    let extends = |k: u64| target.is_prefix_of(&w_word(k));
                    acc.check(
                        extends(n) && !(0..n).any(extends),
                        || format!("t={t} eps={eps} u={u}"),
                        "least n with εu ⊑ w_n",
                        || n.to_string(),
                    );
                    acc.check(
                        ktn_inside_cylinder(t, eps, &u, n),
                        || format!("t={t} eps={eps} u={u} n={n}"),
                        "K_tn inside cylinder",
                        || "escapes".into(),
                    );
                }
            }
        }
    })
}

/// Canonical points of `K_t` have placed prefixes witnessed by each `t|k`.
pub fn canonical_chain(tlen: usize, tmax: u64) -> Tally {
    let ts = small_words(tlen, tmax);
    par_tally(&ts, |t, acc| {
        let x = canonical_point(t, 0);
        let shape = KtShape::new(t.symbols());
        let horizon = (shape.split_position() + 1).max(shape.support_end()) as usize;
        let bits = x.prefix(horizon).to_bits();
        let witnesses: Vec<Vec<u64>> = (1..=horizon)
            .filter_map(|p| decode_bits(&bits[..p]).map(|d| d.t))
            .collect();
        for k in 1..=t.len() {
            let want = &t.symbols()[..k];
            acc.check(
                witnesses.iter().any(|w| w == want),
                || format!("t={t} k={k}"),
                "placed proper prefix with witness t|k",
                || format!("{} placed prefixes", witnesses.len()),
            );
        }
        acc.check(
            witnesses.len() >= t.len(),
            || format!("t={t}"),
            "at least |t| placed proper prefixes",
            || witnesses.len().to_string(),
        );
        acc.check(
            witness_chain(&x).last() == Some(t),
            || format!("t={t}"),
            "chain ends at t",
            || format!("{:?}", witness_chain(&x).last().map(|w| w.to_string())),
        );
    })
}

/// Placed prefixes of `x ∈ K_t` past `Σ_t` have witnesses extending `t`.
pub fn witness_extension(corpus: &Corpus, tlen: usize, tmax: u64, pmax: u64) -> Tally {
    let ts = small_words(tlen, tmax);
    par_tally(&corpus.binary, |x, acc| {
        for t in &ts {
            if !kt_member(t, x) {
                continue;
            }
            acc.branch("in_kt");
            let sigma = KtShape::new(t.symbols()).split_position();
            let upto = pmax.max(sigma + 40);
            let bits = x.prefix(upto as usize).to_bits();
            for p in sigma + 1..=upto {
                if let Some(d) = decode_bits(&bits[..p as usize]) {
                    acc.check(
                        d.t.starts_with(t.symbols()),
                        || format!("x={x} t={t} p={p}"),
                        "witness extends t",
                        || format!("{:?}", d.t),
                    );
                }
            }
        }
    })
}

pub fn h_tilde_homes(corpus: &Corpus, tlen: usize, tmax: u64) -> Tally {
    let ts = small_words(tlen, tmax);
    par_tally(&corpus.binary, |x, acc| {
        let mut homes = Vec::new();
        for t in &ts {
            let ht = h_tilde_member(t, x);
            let image = h_tilde_image_member(t, x);
            if ht || image {
                homes.push(t.to_string());
            }
            // (b)
            if h_member(t, x) {
                acc.branch("in_h");
                acc.check(ht, || format!("b x={x} t={t}"), "H_t ⊆ H̃_t", || "not in H̃_t".into());
            }
            // H̃_t ∩ φ_t[H̃_t] = ∅
            if ht {
                acc.branch("in_h_tilde");
                let y = phi_t(t, x);
                acc.check(
                    !h_tilde_member(t, &y) && h_tilde_image_member(t, &y) && !image,
                    || format!("c x={x} t={t}"),
                    "H̃_t ∩ φ_t[H̃_t] = ∅",
                    || "overlap".into(),
                );
            }
        }
        // (a)
        acc.check(
            homes.len() <= 1,
            || format!("a x={x}"),
            "in at most one H̃_t ∪ φ_t[H̃_t]",
            || homes.join(" "),
        );
    })
}

/// `A₃ ⊆ X₃²`: every certified edge from a corpus point has both ends in `X₃`.
pub fn a3_in_x3(corpus: &Corpus) -> Tally {
    par_tally(&corpus.binary, |x, acc| {
        for t in witness_chain(x) {
            if !kt_split_member(&t, 0, x) {
                continue;
            }
            let y = phi_t(&t, x);
            match a3_is_edge(x, &y) {
                Ok(Some(found)) => {
                    acc.branch("a3_edge");
                    let (a, b) = (x3_member(x), x3_member(&y));
                    acc.check(
                        found == t && a.is_in() && b.is_in() && a.recheck(x) && b.recheck(&y),
                        || format!("x={x} t={t}"),
                        "both ends IN with valid certificates",
                        || format!("{:?} {:?}", a.verdict, b.verdict),
                    );
                }
                Ok(None) => {
                    acc.case();
                    if h_member(&t, x) {
                        acc.fail(format!("x={x} t={t}"), "edge", "rejected");
                    }
                }
                Err(e) => acc.fail(format!("x={x} t={t}"), "edge test", e),
            }
            if let Ok(Some(found)) = g_is_edge(x, &y) {
                acc.branch("g_edge");
                acc.check(found == t && h_tilde_member(&t, x), || format!("g x={x} t={t}"), "G edge", || found.to_string());
            }
        }
        let r = x3_member(x);
        acc.branch(match r.verdict {
            Verdict::In => "x3_in",
            Verdict::Out => "x3_out",
            Verdict::Unknown { .. } => "x3_unknown",
        });
        acc.check(r.recheck(x), || format!("x3 x={x}"), "certificate rechecks", || format!("{:?}", r.verdict));
    })
}

pub fn density(x3_len: usize, ht_len: usize, tlen: usize, tmax: u64) -> Tally {
    let words = |maxlen: usize| -> Vec<Word> {
        (1..=maxlen)
            .flat_map(|len| {
                (0u32..(1 << len)).map(move |code| {
                    Word::from_bits(&(0..len).map(|j| ((code >> (len - 1 - j)) & 1) as u8).collect::<Vec<_>>())
                })
            })
            .collect()
    };
    let mut total = par_tally(&words(x3_len), |u, acc| {
        acc.branch("x3");
        let r = density_witness_x3(u).map(|x| {
            let m = x3_member(&x);
            (x.starts_with(u), m.is_in() && m.recheck(&x))
        });
        acc.check(r == Ok((true, true)), || format!("x3 u={u}"), "u·1^∞ certified IN", || format!("{r:?}"));
    });
    let ts = small_words(tlen, tmax);
    let mut with_empty = vec![Word::from_bits(&[])];
    with_empty.extend(words(ht_len));
    let ht = par_tally(&ts, |t, acc| {
        let shape = KtShape::new(t.symbols());
        let sigma = shape.split_position() as usize;
        for u in &with_empty {
            let bits = u.to_bits();
            let consistent = shape.admits_prefix(&bits) && bits.get(sigma).map_or(true, |&b| b == 0);
            match density_witness_ht(t, u) {
                Ok(x) => {
                    acc.branch("ht");
                    let ok = consistent
                        && x.starts_with(u)
                        && h_member(t, &x)
                        && x3_member(&x).is_in();
                    acc.check(ok, || format!("ht t={t} u={u}"), "witness in N_u ∩ H_t", || x.to_string());
                }
                Err(_) => {
                    acc.branch("ht_inconsistent");
                    acc.check(!consistent, || format!("ht t={t} u={u}"), "witness exists", || "error".into());
                }
            }
        }
    });
    total.merge(ht);
    total.finish()
}

/// Each corpus point lies in exactly one cell of each partition.
pub fn partition_cover(corpus: &Corpus, qmax: u64) -> Tally {
    let coder = PrimeCoder::with_bound(1000);
    let mut jobs: Vec<(PartitionFamily, &EpPoint)> = Vec::new();
    jobs.extend(corpus.omega.iter().map(|x| (PartitionFamily::A2part, x)));
    jobs.extend(corpus.ternary.iter().map(|x| (PartitionFamily::S3part, x)));
    jobs.extend(corpus.binary.iter().map(|x| (PartitionFamily::KTpart, x)));
    par_tally(&jobs, |(family, x), acc| {
        for q in 0..=qmax {
            let spec = PartitionSpec { family: *family, q };
            match spec.cells_of(&coder, x) {
                Ok(cells) => {
                    let ins = cells.iter().filter(|(_, v)| *v == Verdict::In).count();
                    let unknown = cells.len() - ins;
                    if unknown > 0 {
                        acc.branch("kt_complement_unknown");
                    }
                    // KT cells cover X₃; a point outside X₃ sits in no cell
                    let ok = match family {
                        PartitionFamily::KTpart => {
                            ins + unknown <= 1
                                && (ins == 1 || unknown == 1 || !x3_member(x).is_in())
                        }
                        _ => ins == 1 && unknown == 0,
                    };
                    acc.check(
                        ok,
                        || format!("{family:?} q={q} x={x}"),
                        "exactly one cell",
                        || format!("{cells:?}"),
                    );
                }
                Err(e) => acc.fail(format!("{family:?} q={q} x={x}"), "membership", e),
            }
        }
        if *family == PartitionFamily::KTpart && x.alphabet() == Alphabet::Binary {
            acc.branch("kt_points");
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::sweep::bits_string;

    #[test]
    fn small_runs_pass() {
        let corpus = Corpus::build();
        let small = Corpus {
            binary: corpus.binary[..120].to_vec(),
            ternary: corpus.ternary[..40].to_vec(),
            omega: corpus.omega[..40].to_vec(),
        };
        for t in [
            ktn_disjoint(&small, 1, 2, 4),
            ktn_in_cylinder(1, 1, 4),
            canonical_chain(2, 2),
            witness_extension(&small, 1, 2, 30),
            h_tilde_homes(&small, 1, 2),
            a3_in_x3(&small),
            density(5, 4, 1, 1),
            partition_cover(&small, 2),
        ] {
            assert!(t.failures.is_empty(), "{:?}", &t.failures[..t.failures.len().min(5)]);
            assert!(t.cases > 0);
        }
    }

    #[test]
    fn bits_helper_formats() {
        assert_eq!(bits_string(&[0, 1, 1]), "011");
    }
}
