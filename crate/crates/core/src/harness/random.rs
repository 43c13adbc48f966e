//! Seeded generators for matrices, rings, modules and sequences.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::IntMatrix;
use crate::module::FgModule;
use crate::ring::{FiniteRing, Ideal, RingElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The generator for instance `k` of the stream named `stream`.
pub fn sub_rng(seed: u64, stream: &str, k: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let tag = stream.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    r.set_stream(tag);
    r.set_word_pos((k as u128) << 24);
    r
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let data = (0..rows * cols).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect();
    IntMatrix::from_vec(rows, cols, data)
}

pub fn random_element<R: Rng>(rng: &mut R, ring: &FiniteRing) -> RingElement {
    let v: Vec<BigInt> = ring
        .group()
        .factors()
        .iter()
        .map(|d| BigInt::from(rng.gen_range(0..d.to_u64().expect("small ring"))))
        .collect();
    ring.reduce(&v)
}

pub fn random_sequence<R: Rng>(rng: &mut R, ring: &FiniteRing, max_len: usize) -> Vec<RingElement> {
    let k = rng.gen_range(1..=max_len);
    (0..k).map(|_| random_element(rng, ring)).collect()
}

/// A proper ideal on at most two random generators, or the zero ideal.
pub fn random_proper_ideal<R: Rng>(rng: &mut R, ring: &FiniteRing) -> Ideal {
    for _ in 0..16 {
        let g: Vec<RingElement> = (0..rng.gen_range(1..=2)).map(|_| random_element(rng, ring)).collect();
        let i = ring.ideal(&g);
        if !i.is_unit_ideal() {
            return i;
        }
    }
    ring.zero_ideal()
}

fn order_of(r: &FiniteRing) -> u64 {
    r.order().to_u64().expect("small ring")
}

fn prime_powers(max: u64) -> Vec<u64> {
    (2..=max)
        .filter(|&q| {
            let p = (2..=q).find(|p| q % p == 0).unwrap();
            let mut t = q;
            while t % p == 0 {
                t /= p;
            }
            t == 1
        })
        .collect()
}

/// A ring of order at most `max_order` with a short description.
pub fn random_ring<R: Rng>(rng: &mut R, max_order: u64) -> (String, FiniteRing) {
    assert!(max_order >= 4, "max_order must be at least 4");
    loop {
        match rng.gen_range(0..4) {
            0 => {
                let n = if rng.gen_bool(0.5) {
                    rng.gen_range(2..=max_order)
                } else {
                    let primes: Vec<u64> = [2u64, 3, 5, 7].into_iter().filter(|p| p * p <= max_order).collect();
                    let p = *primes.choose(rng).expect("max_order >= 4");
                    let mut n = p * p;
                    while n * p <= max_order && rng.gen_bool(0.5) {
                        n *= p;
                    }
                    let c = rng.gen_range(1..=max_order / n);
                    if c % p == 0 { n } else { n * c }
                };
                return (format!("Z/{n}"), FiniteRing::zmod(n).expect("n >= 2"));
            }
            1 => {
                let choices: Vec<(u64, usize)> = prime_powers(max_order)
                    .into_iter()
                    .flat_map(|q| (2..=3).map(move |k| (q, k)))
                    .filter(|&(q, k)| q.checked_pow(k as u32).is_some_and(|o| o <= max_order))
                    .collect();
                let &(q, k) = choices.choose(rng).expect("max_order >= 4");
                let c: Vec<i64> = (0..k).map(|_| rng.gen_range(0..q as i64)).collect();
                let r = FiniteRing::polynomial_quotient(q, &c).expect("valid parameters").ring;
                return (format!("Z/{q}[t]/(t^{k} - {c:?})"), r);
            }
            2 => {
                let (la, a) = random_ring(rng, (max_order / 2).max(4));
                let rest = max_order / order_of(&a);
                if rest < 2 {
                    continue;
                }
                let (lb, b) = if rest >= 4 {
                    random_ring(rng, rest)
                } else {
                    (format!("Z/{rest}"), FiniteRing::zmod(rest).expect("rest >= 2"))
                };
                return (format!("({la}) x ({lb})"), FiniteRing::product(&[a, b]));
            }
            _ => {
                let (la, a) = random_ring(rng, max_order);
                let i = random_proper_ideal(rng, &a);
                if a.ideal_order(&i) == BigInt::from(1) {
                    continue;
                }
                let q = a.quotient(&i).expect("proper ideal").ring;
                if q.order() < BigInt::from(2) {
                    continue;
                }
                return (format!("({la}) / I"), q);
            }
        }
    }
}

/// A nonzero module of order at most `max_order`, with a short description.
pub fn random_module<R: Rng>(rng: &mut R, ring: &Arc<FiniteRing>, max_order: u64) -> (String, FgModule) {
    let r = FgModule::ring_module(ring);
    for _ in 0..64 {
        let (label, m) = match rng.gen_range(0..8) {
            0 => ("R".to_string(), r.clone()),
            1 => ("R/I".to_string(), FgModule::cyclic(ring, &random_proper_ideal(rng, ring))),
            2 | 6 => {
                let a = FgModule::cyclic(ring, &random_proper_ideal(rng, ring));
                let b = FgModule::cyclic(ring, &random_proper_ideal(rng, ring));
                ("R/I + R/J".to_string(), FgModule::direct_sum(&[a, b], ring).module)
            }
            3 => {
                let g: Vec<RingElement> = (0..rng.gen_range(1..=2)).map(|_| random_element(rng, ring)).collect();
                let i = r.ideal_image_of(&g);
                ("I".to_string(), r.submodule_as_module(&i).module)
            }
            4 => ("(R/I)^v".to_string(), FgModule::cyclic(ring, &random_proper_ideal(rng, ring)).matlis_dual()),
            _ => ("R^2".to_string(), FgModule::free(ring, 2).module),
        };
        if !m.is_zero_module() && m.order() <= BigInt::from(max_order) {
            return (label, m);
        }
    }
    ("R".to_string(), r)
}

#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub ring_order: u64,
    pub module_order: u64,
    pub max_len: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            ring_order: 64,
            module_order: 256,
            max_len: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Instance {
    pub ring_label: String,
    pub module_label: String,
    pub ring: Arc<FiniteRing>,
    pub module: FgModule,
    pub xs: Vec<RingElement>,
}

impl Instance {
    pub fn describe(&self) -> String {
        format!("{} over {} with {:?}", self.module_label, self.ring_label, self.xs)
    }
}

pub fn random_instance<R: Rng>(rng: &mut R, limits: Limits) -> Instance {
    let (ring_label, ring) = random_ring(rng, limits.ring_order);
    let ring = Arc::new(ring);
    let (module_label, module) = random_module(rng, &ring, limits.module_order);
    let xs = random_sequence(rng, &ring, limits.max_len);
    Instance {
        ring_label,
        module_label,
        ring,
        module,
        xs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_respect_limits() {
        let mut r = rng(7);
        for _ in 0..40 {
            let inst = random_instance(&mut r, Limits::default());
            assert!(inst.ring.order() <= BigInt::from(64), "{}", inst.ring_label);
            assert!(inst.module.order() <= BigInt::from(256));
            assert!(inst.ring.check_axioms().is_empty(), "{}", inst.ring_label);
            assert!(inst.module.check_axioms().is_empty(), "{}", inst.describe());
            assert!((1..=3).contains(&inst.xs.len()));
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = sub_rng(5, "x", 3).gen();
        let b: u64 = sub_rng(5, "x", 3).gen();
        let c: u64 = sub_rng(5, "y", 3).gen();
        let d: u64 = sub_rng(5, "x", 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
