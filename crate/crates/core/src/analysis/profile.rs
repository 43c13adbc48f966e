//! Bounded torsion and the three witness profiles.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Certificate, Entry, Profile, ProfileKind};
use crate::complex::KoszulFamily;
use crate::linalg::GroupElement;
use crate::module::{FgModule, Submodule};
use crate::ring::RingElement;

/// `c` minimal with `0 :_M x^c = 0 :_M x^{c+1}`, and the orders of `0 :_M x^j` for `1 ≤ j ≤ c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionIndex {
    pub c: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub chain: Vec<BigInt>,
}

pub fn bounded_torsion_index(m: &FgModule, x: &RingElement) -> TorsionIndex {
    let ring = m.ring();
    let mut prev = m.zero_submodule();
    let mut chain = Vec::new();
    let mut power = ring.one();
    loop {
        power = ring.mul(&power, x);
        let cur = m.annihilator_of(&power);
        if cur == prev {
            return TorsionIndex { c: chain.len(), chain };
        }
        chain.push(m.submodule_order(&cur));
        prev = cur;
    }
}

/// `n_max + ⌈log₂|M|⌉·(k+1)`.
pub fn default_m_max(m: &FgModule, k: usize, n_max: u64) -> u64 {
    n_max + (m.group().log2_order() as u64) * (k as u64 + 1)
}

/// Cached data for one degree: the left sides indexed by `m`, the right-hand bases by `n`.
struct ColonLadder<'a> {
    module: &'a FgModule,
    y: RingElement,
    lhs: Vec<Submodule>,
    base: Vec<Submodule>,
}

impl ColonLadder<'_> {
    fn violation(&self, n: u64, m: u64) -> Option<GroupElement> {
        let ring = self.module.ring();
        let mult = self.module.action_hom(&ring.pow(&self.y, m - n));
        let lhs = &self.lhs[m as usize];
        let base = &self.base[n as usize];
        if mult.image_of(lhs.span()).is_subset_of(base.span()) {
            return None;
        }
        self.module
            .submodule_generators(lhs)
            .into_iter()
            .find(|z| !base.contains(&mult.apply(z)))
    }
}

fn ladder<'a>(kind: ProfileKind, module: &'a FgModule, xs: &[RingElement], i: usize, m_max: u64) -> ColonLadder<'a> {
    let ring = module.ring();
    let prefix = &xs[..i - 1];
    let y = ring.reduce(&xs[i - 1]);
    let prefix_ideal = ring.ideal(prefix);
    let base: Vec<Submodule> = (0..=m_max)
        .map(|e| match kind {
            ProfileKind::Lipman => module.power_image(prefix, &vec![e; prefix.len()]),
            _ => module.ideal_power_image(&prefix_ideal, e as usize),
        })
        .collect();
    let lhs = (0..=m_max).map(|e| module.colon(&base[e as usize], &y, e)).collect();
    ColonLadder { module, y, lhs, base }
}

/// `None` when the defining inclusion holds for `(i, n)` at `m`, otherwise a violating element.
pub fn verify_entry(
    kind: ProfileKind,
    module: &FgModule,
    xs: &[RingElement],
    i: usize,
    n: u64,
    m: u64,
) -> Option<GroupElement> {
    assert!(m >= n && n >= 1 && i >= 1);
    match kind {
        ProfileKind::Weak => {
            let fam = KoszulFamily::new(xs, module).expect("nonempty sequence");
            weak_violation(&fam, i, n, m)
        }
        _ => ladder(kind, module, xs, i, m).violation(n, m),
    }
}

fn weak_violation(fam: &KoszulFamily, i: usize, n: u64, m: u64) -> Option<GroupElement> {
    if i > fam.length() {
        return None;
    }
    let t = fam.transition(i, m, n);
    let z = fam.cycles(i, m);
    let b = fam.boundaries(i, n);
    if t.image_of(&z).is_subset_of(&b) {
        return None;
    }
    fam.term(i)
        .module
        .submodule_generators(&z)
        .into_iter()
        .find(|c| !b.contains(&t.apply(c)))
}

/// Scans `m = n, n+1, ..., m_max` for each level; collects violating elements of inconclusive levels.
fn scan<F>(n_max: u64, m_max: u64, i: usize, violation: F) -> (Vec<Entry>, Vec<Certificate>)
where
    F: Fn(u64, u64) -> Option<GroupElement> + Sync,
{
    let rows: Vec<(Entry, Vec<Certificate>)> = (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut certs = Vec::new();
            for m in n..=m_max {
                match violation(n, m) {
                    None => return (Entry::Witness(m), Vec::new()),
                    Some(element) => certs.push(Certificate::ViolatingElement { i, n, m, element }),
                }
            }
            (Entry::Inconclusive(m_max), certs)
        })
        .collect();
    let mut entries = Vec::with_capacity(rows.len());
    let mut certificates = Vec::new();
    for (e, c) in rows {
        entries.push(e);
        certificates.extend(c);
    }
    (entries, certificates)
}

fn colon_profile(kind: ProfileKind, module: &FgModule, xs: &[RingElement], n_max: u64, m_max: u64) -> Profile {
    let k = xs.len();
    let mut entries = Vec::with_capacity(k);
    let mut certificates = Vec::new();
    for i in 1..=k {
        let lad = ladder(kind, module, xs, i, m_max.max(n_max));
        let (row, certs) = scan(n_max, m_max, i, |n, m| lad.violation(n, m));
        entries.push(row);
        certificates.extend(certs);
    }
    Profile {
        kind,
        length: k,
        n_max,
        m_max,
        degrees: (1..=k).collect(),
        entries,
        certificates,
    }
}

/// Minimal `m ≥ n` with `(x_1^m..x_{i-1}^m)M :_M x_i^m ⊆ (x_1^n..x_{i-1}^n)M :_M x_i^{m-n}`.
pub fn lipman_profile(module: &FgModule, xs: &[RingElement], n_max: u64, m_max: u64) -> Profile {
    colon_profile(ProfileKind::Lipman, module, xs, n_max, m_max)
}

/// Minimal `m ≥ n` with `a^m M :_M x_i^m ⊆ a^n M :_M x_i^{m-n}`, `a = (x_1..x_{i-1})`.
pub fn gm_profile(module: &FgModule, xs: &[RingElement], n_max: u64, m_max: u64) -> Profile {
    colon_profile(ProfileKind::GreenleesMay, module, xs, n_max, m_max)
}

/// Minimal `m ≥ n` with `H_i(x^{(m)}; M) → H_i(x^{(n)}; M)` zero, for `1 ≤ i ≤ i_max`.
pub fn weak_profile(module: &FgModule, xs: &[RingElement], n_max: u64, m_max: u64, i_max: usize) -> Profile {
    let fam = KoszulFamily::new(xs, module).expect("nonempty sequence");
    let mut entries = Vec::with_capacity(i_max);
    let mut certificates = Vec::new();
    for i in 1..=i_max {
        let (row, certs) = scan(n_max, m_max, i, |n, m| weak_violation(&fam, i, n, m));
        entries.push(row);
        certificates.extend(certs);
    }
    Profile {
        kind: ProfileKind::Weak,
        length: xs.len(),
        n_max,
        m_max,
        degrees: (1..=i_max).collect(),
        entries,
        certificates,
    }
}

/// Whether multiplication by `y^{m-n}` from `(P_m :_M y^m)/P_m` to `(P_n :_M y^n)/P_n` is zero,
/// with `P_e = (x_1^e..x_{i-1}^e)M`, computed on the subquotients.
pub fn multiplication_map_vanishes(module: &FgModule, xs: &[RingElement], i: usize, n: u64, m: u64) -> bool {
    let ring = module.ring();
    let prefix = &xs[..i - 1];
    let y = &xs[i - 1];
    let p = |e: u64| module.power_image(prefix, &vec![e; prefix.len()]);
    let (pm, pn) = (p(m), p(n));
    let src = module.subquotient(&module.colon(&pm, y, m), &pm);
    let tgt = module.subquotient(&module.colon(&pn, y, n), &pn);
    let ypow = ring.pow(y, m - n);
    let g = src.module.group();
    (0..g.rank()).all(|k| {
        let z = module.act(&ypow, &src.representative(&g.generator(k)));
        let c = tgt.class_of(&z).expect("y^(m-n) maps the colon quotients");
        tgt.module.group().is_zero(&c)
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ring::FiniteRing;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn zmod(m: u64) -> FgModule {
        FgModule::ring_module(&Arc::new(FiniteRing::zmod(m).unwrap()))
    }

    fn two_power(n: usize) -> (FgModule, RingElement) {
        let t = FiniteRing::truncated_two_power(n).unwrap();
        let x = t.x.clone();
        (FgModule::ring_module(&Arc::new(t.ring)), x)
    }

    fn row(p: &Profile, i: usize) -> Vec<Option<u64>> {
        (1..=p.n_max).map(|n| p.witness(i, n)).collect()
    }

    #[test]
    fn torsion_index_examples() {
        let t = bounded_torsion_index(&zmod(8), &ints(&[2]));
        assert_eq!(t.c, 3);
        assert_eq!(t.chain, ints(&[2, 4, 8]));
        assert_eq!(bounded_torsion_index(&zmod(8), &ints(&[3])).c, 0);
        let (m, x) = two_power(3);
        let t = bounded_torsion_index(&m, &x);
        assert_eq!(t.c, 3);
        assert_eq!(t.chain.last(), Some(&m.order()));
    }

    #[test]
    fn single_element_profiles() {
        let m = zmod(8);
        let xs = [ints(&[2])];
        let lip = lipman_profile(&m, &xs, 4, 10);
        assert_eq!(row(&lip, 1), vec![Some(4), Some(5), Some(6), Some(7)]);
        assert_eq!(gm_profile(&m, &xs, 4, 10).entries, lip.entries);
        let weak = weak_profile(&m, &xs, 4, 10, 1);
        assert_eq!(weak.entries, lip.entries);
        for n in 1..=4 {
            let w = lip.witness(1, n).unwrap();
            assert!(multiplication_map_vanishes(&m, &xs, 1, n, w));
            assert!(!multiplication_map_vanishes(&m, &xs, 1, n, w - 1) || w == n);
        }
    }

    #[test]
    fn inconclusive_entries_carry_certificates() {
        let m = zmod(8);
        let xs = [ints(&[2])];
        let lip = lipman_profile(&m, &xs, 2, 4);
        assert_eq!(lip.get(1, 1), Some(Entry::Witness(4)));
        assert_eq!(lip.get(1, 2), Some(Entry::Inconclusive(4)));
        assert_eq!(lip.certificates.len(), 3);
        for c in &lip.certificates {
            if let Certificate::ViolatingElement { i, n, m: mm, element } = c {
                assert!(verify_entry(ProfileKind::Lipman, &m, &xs, *i, *n, *mm).is_some());
                let ring = m.ring();
                let moved = m.act(&ring.pow(&xs[0], mm - n), element);
                assert!(!m.group().is_zero(&moved));
            }
        }
    }

    #[test]
    fn truncated_orderings() {
        let (m, x) = two_power(3);
        let one = m.ring().one();
        let p = lipman_profile(&m, &[one.clone(), x.clone()], 3, 12);
        assert_eq!(row(&p, 1), vec![Some(1), Some(2), Some(3)]);
        assert_eq!(row(&p, 2), vec![Some(1), Some(2), Some(3)]);
        let p = lipman_profile(&m, &[x.clone(), one.clone()], 3, 12);
        assert_eq!(row(&p, 1), vec![Some(4), Some(5), Some(6)]);
        assert_eq!(row(&p, 2), vec![Some(1), Some(2), Some(3)]);
        let (m4, x4) = two_power(4);
        assert_eq!(weak_profile(&m4, &[x4], 1, 10, 1).witness(1, 1), Some(5));
    }

    #[test]
    fn gm_two_elements() {
        let m = zmod(12);
        let xs = [ints(&[3]), ints(&[2])];
        let p = gm_profile(&m, &xs, 3, 7);
        assert!(p.is_conclusive());
        for n in 1..=3 {
            assert!(p.witness(2, n).unwrap() <= n + 4);
        }
    }

    #[test]
    fn unit_in_sequence_gives_diagonal_weak_profile() {
        let m = zmod(12);
        let p = weak_profile(&m, &[ints(&[2]), ints(&[5])], 3, 10, 2);
        for (_, n, e) in p.cells() {
            assert_eq!(e, Entry::Witness(n));
        }
    }
}
