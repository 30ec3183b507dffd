//! Fixed, seeded corpus of eventually-periodic points for the sampled suites.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::families::a2_family_point;
use crate::ktree::{canonical_point, density_witness_ht, density_witness_x3, phi_t, KtShape};
use crate::points::EpPoint;
use crate::seqcore::{Alphabet, PrimeCoder, Word};

pub const SEED: u64 = 0x5EED_D1C0_7011;
pub const RANDOM_POINTS: usize = 1000;

/// All `t` with `|t| ≤ len` and entries `≤ max`, shortlex order.
pub fn small_words(len: usize, max: u64) -> Vec<Word> {
    let mut out = vec![Word::omega(&[])];
    let mut layer = vec![Vec::<u64>::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in &layer {
            for n in 0..=max {
                let mut e = t.clone();
                e.push(n);
                next.push(e);
            }
        }
        out.extend(next.iter().map(|t| Word::omega(t)));
        layer = next;
    }
    out
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub binary: Vec<EpPoint>,
    pub ternary: Vec<EpPoint>,
    pub omega: Vec<EpPoint>,
}

fn random_point(rng: &mut ChaCha8Rng, alphabet: Alphabet, symbols: u64) -> EpPoint {
    let pre_len = rng.gen_range(0..=8);
    let per_len = rng.gen_range(1..=4);
    let pre = (0..pre_len).map(|_| rng.gen_range(0..symbols)).collect();
    let per = (0..per_len).map(|_| rng.gen_range(0..symbols)).collect();
    EpPoint::new(alphabet, pre, per).expect("symbols in range")
}

impl Corpus {
    pub fn build() -> Corpus {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut binary = BTreeSet::new();

        for t in small_words(2, 4) {
            for eps in 0..2 {
                binary.insert(canonical_point(&t, eps));
            }
            for n in 0..=8 {
                let tn = t.pushed(n).unwrap();
                for eps in 0..2 {
                    binary.insert(canonical_point(&tn, eps));
                }
            }
        }
        for len in 1..=4usize {
            for code in 0u32..(1 << len) {
                let bits: Vec<u8> = (0..len).map(|j| ((code >> j) & 1) as u8).collect();
                binary.insert(density_witness_x3(&Word::from_bits(&bits)).unwrap());
            }
        }
        // H_t witnesses and their φ_t images, the two ends of A₃ edges
        for t in small_words(2, 2) {
            let base = canonical_point(&t, 0);
            let sigma = KtShape::new(t.symbols()).split_position() as usize;
            for len in [1, sigma + 1, sigma + 5] {
                if let Ok(x) = density_witness_ht(&t, &base.prefix(len)) {
                    binary.insert(phi_t(&t, &x));
                    binary.insert(x);
                }
            }
        }
        for _ in 0..RANDOM_POINTS {
            binary.insert(random_point(&mut rng, Alphabet::Binary, 2));
        }

        let mut ternary = BTreeSet::new();
        for _ in 0..RANDOM_POINTS / 4 {
            ternary.insert(random_point(&mut rng, Alphabet::Ternary, 3));
        }
        for i in 0..9 {
            for eps in 0..2u64 {
                let mut pre = crate::families::theta(i).symbols().to_vec();
                pre.push(eps);
                ternary.insert(EpPoint::new(Alphabet::Ternary, pre.clone(), vec![0]).unwrap());
                ternary.insert(EpPoint::new(Alphabet::Ternary, pre, vec![0, 1]).unwrap());
            }
        }

        let coder = PrimeCoder::with_bound(1000);
        let mut omega = BTreeSet::new();
        for _ in 0..RANDOM_POINTS / 4 {
            omega.insert(random_point(&mut rng, Alphabet::Omega, 6));
        }
        for i in 0..=16 {
            for eps in 0..2 {
                omega.insert(a2_family_point(&coder, i, eps).unwrap());
            }
        }

        Corpus {
            binary: binary.into_iter().collect(),
            ternary: ternary.into_iter().collect(),
            omega: omega.into_iter().collect(),
        }
    }
}
