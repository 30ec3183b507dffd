//! Constructive "no discrete clopen set" scans: one certified edge per cylinder.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::corpus::small_words;
use super::sweep::Tally;
use crate::error::{Error, Result};
use crate::families::{a1_is_edge, a1rect_is_edge, a2_is_edge, g0_is_edge};
use crate::ktree::{canonical_point, find_ktn_in_cylinder, ktn_inside_cylinder, ktn_member};
use crate::points::EpPoint;
use crate::seqcore::{s_word, Alphabet, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScanFamily {
    G0,
    A1,
    A1rect,
    A2,
    A3rel,
}

impl ScanFamily {
    pub fn max_depth(self) -> usize {
        match self {
            ScanFamily::A3rel => 8,
            _ => 12,
        }
    }
}

impl FromStr for ScanFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "g0" => Ok(ScanFamily::G0),
            "a1" => Ok(ScanFamily::A1),
            "a1rect" => Ok(ScanFamily::A1rect),
            "a2" => Ok(ScanFamily::A2),
            "a3rel" | "a3" => Ok(ScanFamily::A3rel),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

impl fmt::Display for ScanFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ScanFamily::G0 => "g0",
            ScanFamily::A1 => "a1",
            ScanFamily::A1rect => "a1rect",
            ScanFamily::A2 => "a2",
            ScanFamily::A3rel => "a3rel",
        };
        f.write_str(name)
    }
}

/// One cylinder and what was found inside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanWitness {
    pub cylinder: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<EpPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<EpPoint>,
    pub parameter: String,
}

fn binary_words(len: usize) -> impl Iterator<Item = Word> {
    (0u32..(1 << len)).map(move |c| {
        Word::from_bits(&(0..len).map(|j| ((c >> (len - 1 - j)) & 1) as u8).collect::<Vec<_>>())
    })
}

fn with_tail(u: &Word, extra: &[u64], period: &[u64]) -> EpPoint {
    let mut pre = u.symbols().to_vec();
    pre.extend(extra);
    EpPoint::new(u.alphabet(), pre, period.to_vec()).unwrap()
}

fn g0_witness(u: &Word) -> (EpPoint, EpPoint) {
    let n = (0..).find(|&n| u.is_prefix_of(&s_word(n))).unwrap();
    let s = s_word(n);
    (with_tail(&s, &[0], &[0]), with_tail(&s, &[1], &[0]))
}

/// Every cylinder of length `depth` for the point families, every `(t, ε, u)`
/// with `|t| ≤ 2` and `|u| ≤ depth` for `A3rel`.
pub fn scan_discrete_cylinders(family: ScanFamily, depth: usize) -> Result<(Tally, Vec<ScanWitness>)> {
    if depth > family.max_depth() {
        return Err(Error::TooLarge {
            what: "depth",
            value: depth as u64,
            limit: family.max_depth() as u64,
        });
    }
    let mut acc = Tally::default();
    let mut out = Vec::new();
    let mut emit = |acc: &mut Tally, u: &Word, edge: Option<(EpPoint, EpPoint, String)>| match edge {
        Some((x, y, param)) => {
            let inside = x != y && x.starts_with(u) && y.starts_with(u);
            acc.check(inside, || format!("u={u}"), "edge inside N_u²", || format!("{x} {y}"));
            out.push(ScanWitness {
                cylinder: u.to_string(),
                left: Some(x),
                right: Some(y),
                parameter: param,
            });
        }
        None => acc.fail(format!("u={u}"), "edge", "none found"),
    };
    match family {
        ScanFamily::G0 => {
            for u in binary_words(depth) {
                let (x, y) = g0_witness(&u);
                let n = g0_is_edge(&x, &y)?;
                emit(&mut acc, &u, n.map(|n| (x, y, n.to_string())));
            }
        }
        ScanFamily::A1 => {
            // only cylinders around the uncovered point 0^∞ must carry an edge
            for u in binary_words(depth) {
                if u.symbols().iter().any(|&b| b == 1) {
                    acc.branch("misses_center");
                    continue;
                }
                let i = (depth as u64).div_ceil(2);
                let x = with_tail(&u, &vec![0; 2 * i as usize - depth].into_iter().chain([1]).collect::<Vec<_>>(), &[0]);
                let y = with_tail(&u, &vec![0; 2 * i as usize + 1 - depth].into_iter().chain([1]).collect::<Vec<_>>(), &[0]);
                let found = a1_is_edge(&x, &y);
                emit(&mut acc, &u, found.map(|i| (x, y, i.to_string())));
            }
        }
        ScanFamily::A1rect => {
            for u in binary_words(depth) {
                let (x, y) = if u.symbols().iter().all(|&b| b == 0) {
                    (with_tail(&u, &[1], &[0]), with_tail(&u, &[1], &[1]))
                } else {
                    (with_tail(&u, &[], &[0]), with_tail(&u, &[], &[1]))
                };
                let found = a1rect_is_edge(&x, &y);
                emit(&mut acc, &u, found.map(|i| (x, y, i.to_string())));
            }
        }
        ScanFamily::A2 => {
            // ω^depth is infinite; symbols below 3 stand in for it
            let total = 3u64.pow(depth as u32);
            for code in 0..total {
                let mut s = vec![0u64; depth];
                let mut c = code;
                for d in s.iter_mut().rev() {
                    *d = c % 3;
                    c /= 3;
                }
                let u = Word::new(Alphabet::Omega, s).unwrap();
                let d = depth as u64;
                let x = with_tail(&u, &[], &[2 * d]);
                let y = with_tail(&u, &[], &[2 * d + 1]);
                let found = a2_is_edge(&x, &y);
                emit(&mut acc, &u, found.map(|w| (x, y, format!("({w})"))));
            }
        }
        ScanFamily::A3rel => {
            for t in small_words(2, 2) {
                for eps in 0..2u8 {
                    for len in 0..=depth {
                        for u in binary_words(len) {
                            let n = find_ktn_in_cylinder(&t, eps, &u);
                            let inside = ktn_inside_cylinder(&t, eps, &u, n);
                            let tn = t.pushed(n).unwrap();
                            let member = ktn_member(&t, n, &canonical_point(&tn, 0));
                            let key = format!("t={t} eps={eps} u={u}");
                            acc.check(inside && member, || key.clone(), "K_tn inside relative cylinder", || n.to_string());
                            out.push(ScanWitness {
                                cylinder: key,
                                left: None,
                                right: None,
                                parameter: format!("n={n}"),
                            });
                        }
                    }
                }
            }
        }
    }
    acc.branch("witnesses");
    *acc.branches.get_mut("witnesses").unwrap() = out.len() as u64;
    Ok((acc.finish(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g0_cylinder_11_uses_s6() {
        let (t, w) = scan_discrete_cylinders(ScanFamily::G0, 2).unwrap();
        assert!(t.failures.is_empty());
        let hit = w.iter().find(|w| w.cylinder == "11").unwrap();
        assert_eq!(hit.parameter, "6");
        assert_eq!(hit.left.as_ref().unwrap(), &EpPoint::from_bits(&[1, 1, 0, 0, 0, 0, 0], &[0]));
        assert_eq!(hit.right.as_ref().unwrap(), &EpPoint::from_bits(&[1, 1, 0, 0, 0, 0, 1], &[0]));
    }

    #[test]
    fn a1_depth_one_and_a2_empty() {
        let (t, w) = scan_discrete_cylinders(ScanFamily::A1, 1).unwrap();
        assert!(t.failures.is_empty());
        let w0 = &w[0];
        assert_eq!(
            (w0.left.as_ref().unwrap().literal(), w0.right.as_ref().unwrap().literal()),
            ("001;0".to_string(), "0001;0".to_string())
        );
        let (_, w) = scan_discrete_cylinders(ScanFamily::A2, 0).unwrap();
        assert_eq!(w[0].left.as_ref().unwrap().to_string(), ";0");
        assert_eq!(w[0].right.as_ref().unwrap().to_string(), ";1");
    }

    #[test]
    fn all_families_small_depth() {
        for f in [ScanFamily::G0, ScanFamily::A1, ScanFamily::A1rect, ScanFamily::A2, ScanFamily::A3rel] {
            let (t, _) = scan_discrete_cylinders(f, 4).unwrap();
            assert!(t.failures.is_empty(), "{f}: {:?}", t.failures);
        }
        assert!(scan_discrete_cylinders(ScanFamily::A3rel, 9).is_err());
    }
}
