//! Equivalence checks: bound transfer, power stability, injective criteria, local-global
//! behaviour and the Cartier condition.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use super::profile::{bounded_torsion_index, default_m_max, lipman_profile, weak_profile};
use super::{Certificate, CheckOutcome, Entry, Profile, ProfileKind};
use crate::complex::cech_cohomology;
use crate::error::{Error, Result};
use crate::linalg::GroupElement;
use crate::module::FgModule;
use crate::ring::{FiniteRing, Ideal, RingElement};

/// Entrywise `gm(i, n) ≤ i·lip(i, n)` and `lip(i, n) ≤ gm(i, i·n)`.
pub fn verify_bound_transfer(lip: &Profile, gm: &Profile) -> Result<CheckOutcome> {
    let mut out = CheckOutcome::new("bound_transfer");
    let mut upper_ok = true;
    let mut lower_ok = true;
    let mut compared = 0usize;
    for (i, n, e) in lip.cells() {
        let (Entry::Witness(l), Some(Entry::Witness(g))) = (e, gm.get(i, n)) else {
            return Err(Error::InsufficientBound { i, n: n as usize });
        };
        let bound = i as u64 * l;
        if g > bound {
            upper_ok = false;
            out.certificates.push(Certificate::BoundViolation {
                i,
                n,
                relation: "gm(i,n) <= i*lip(i,n)".into(),
                lhs: g,
                rhs: bound,
            });
        }
        if let Some(Entry::Witness(g2)) = gm.get(i, i as u64 * n) {
            compared += 1;
            if l > g2 {
                lower_ok = false;
                out.certificates.push(Certificate::BoundViolation {
                    i,
                    n,
                    relation: "lip(i,n) <= gm(i,i*n)".into(),
                    lhs: l,
                    rhs: g2,
                });
            }
        }
    }
    out.set("gm_le_i_times_lip", upper_ok);
    out.set("lip_le_gm_at_i_times_n", lower_ok);
    out.record("lower_bound_pairs_compared", compared);
    Ok(out)
}

/// Profiles of `x` and of `x^{(n̲)}`, both required to be conclusive with `m ≤ n + ⌈log₂|M|⌉`.
pub fn power_stability_check(module: &FgModule, xs: &[RingElement], exponents: &[u64], n_max: u64) -> Result<CheckOutcome> {
    if exponents.len() != xs.len() || exponents.contains(&0) {
        return Err(Error::InvalidSpec("one positive exponent per sequence element".into()));
    }
    let ring = module.ring();
    let powered: Vec<RingElement> = xs.iter().zip(exponents).map(|(x, &e)| ring.pow(x, e)).collect();
    let m_max = n_max + module.group().log2_order() as u64;
    let base = lipman_profile(module, xs, n_max, m_max);
    let pow = lipman_profile(module, &powered, n_max, m_max);
    let mut out = CheckOutcome::new("power_stability");
    out.set("base_conclusive", base.is_conclusive());
    out.set("powered_conclusive", pow.is_conclusive());
    out.record("m_max", m_max);
    out.certificates.extend(base.certificates.iter().cloned());
    out.certificates.extend(pow.certificates.iter().cloned());
    out.profiles.insert("base".into(), base);
    out.profiles.insert("powered".into(), pow);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InjectiveMode {
    Proregular,
    Weak,
}

/// Tests the conditions on `Hom_R(M, E)`, `E = Hom_Z(R, Q/Z)`, and compares the verdict with the matching profile.
pub fn injective_criterion(module: &FgModule, xs: &[RingElement], mode: InjectiveMode, n_max: u64) -> Result<CheckOutcome> {
    if xs.is_empty() {
        return Err(Error::InvalidSpec("sequence must be nonempty".into()));
    }
    let ring = module.ring();
    let e = FgModule::ring_module(ring).matlis_dual();
    let h = module.hom_module(&e);
    let k = xs.len();
    let mut out = CheckOutcome::new("injective_criterion");
    out.record("mode", mode);
    out.record("dual_order", h.order().to_string());
    let mut verdict = true;
    match mode {
        InjectiveMode::Proregular => {
            for i in 1..=k {
                let before = h.torsion_submodule(&ring.ideal(&xs[..i - 1]));
                let upto = h.torsion_submodule(&ring.ideal(&xs[..i]));
                let d = h.submodule_as_module(&before).module;
                let vanishes = cech_cohomology(&xs[i - 1..i], &d, 1)?.is_zero_module();
                let divisible = h.subquotient(&before, &upto).module.is_divisible(&xs[i - 1]);
                out.set(format!("cech_h1_vanishes_{i}"), vanishes);
                out.set(format!("quotient_divisible_{i}"), divisible);
                verdict &= vanishes && divisible;
            }
        }
        InjectiveMode::Weak => {
            for i in 1..=k {
                let vanishes = cech_cohomology(xs, &h, i)?.is_zero_module();
                out.set(format!("cech_h{i}_vanishes"), vanishes);
                verdict &= vanishes;
            }
        }
    }
    let m_max = default_m_max(module, k, n_max);
    let profile = match mode {
        InjectiveMode::Proregular => lipman_profile(module, xs, n_max, m_max),
        InjectiveMode::Weak => weak_profile(module, xs, n_max, m_max, k),
    };
    out.set("agrees_with_profile", verdict == profile.is_conclusive());
    out.record("verdict", verdict);
    out.profiles.insert("profile".into(), profile);
    Ok(out)
}

/// `|a^n M / a^{n+1} M|` for the ideal `a` of the sequence.
fn graded_piece_order(module: &FgModule, a: &Ideal, n: usize) -> BigInt {
    let hi = module.ideal_power_image(a, n);
    let lo = module.ideal_power_image(a, n + 1);
    module.submodule_order(&hi) / module.submodule_order(&lo)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, j| acc * (n - j) / (j + 1))
}

/// Regularity of `x` on `M`, bounded `y`-torsion of `M/xM`, the profile of `(x, y)`, and the
/// graded-piece cardinalities `|a^n M/a^{n+1} M| = |M/aM|^{C(k+n-1, n)}` for `n ≤ 3`.
pub fn regular_then_bounded(module: &FgModule, xs: &[RingElement], y: &RingElement, n_max: u64) -> Result<CheckOutcome> {
    let ring = module.ring();
    let k = xs.len();
    let mut out = CheckOutcome::new("regular_then_bounded");
    let mut regular = true;
    for i in 0..k {
        let q = module.quotient(&module.ideal_image_of(&xs[..i])).module;
        let injective = q.action_hom(&xs[i]).is_injective();
        regular &= injective;
        out.record(format!("regular_{}", i + 1), injective);
    }
    let a = ring.ideal(xs);
    let top = module.quotient(&module.ideal_image(&a)).module;
    let torsion = bounded_torsion_index(&top, y);
    out.record("torsion_index", &torsion);
    out.record("hypotheses_hold", regular);
    if !regular {
        out.notes.push("hypothesis failed: sequence is not M-regular".into());
    }
    let mut seq = xs.to_vec();
    seq.push(y.clone());
    let profile = lipman_profile(module, &seq, n_max, default_m_max(module, seq.len(), n_max));
    out.set("profile_conclusive", profile.is_conclusive());
    out.profiles.insert("profile".into(), profile);
    if regular {
        let base = top.order();
        let mut ok = true;
        let mut pieces = Vec::new();
        for n in 1..=3u64 {
            let got = graded_piece_order(module, &a, n as usize);
            let b = if k == 0 { 0 } else { binomial(k as u64 + n - 1, n) };
            let want: BigInt = Pow::pow(&base, b);
            ok &= got == want;
            pieces.push((n, got.to_string(), want.to_string()));
        }
        out.set("graded_cardinalities", ok);
        out.record("graded_pieces", pieces);
    }
    Ok(out)
}

/// The cover used by [`local_global_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Covering {
    Elements(Vec<RingElement>),
    /// The primitive idempotents, one per maximal ideal.
    Maximal,
}

/// Injectivity of `M → ⊕ M_{f_j}` and global witnesses equal to the maximum of the local ones.
pub fn local_global_check(module: &FgModule, xs: &[RingElement], covering: &Covering, n_max: u64) -> Result<CheckOutcome> {
    let ring = module.ring();
    let fs = match covering {
        Covering::Elements(v) => v.clone(),
        Covering::Maximal => ring.primitive_idempotents()?,
    };
    if !ring.is_covering(&fs) {
        return Err(Error::NotCovering);
    }
    let k = xs.len();
    let m_max = default_m_max(module, k, n_max);
    let mut out = CheckOutcome::new("local_global");
    let g = module.group();
    let mut common = g.whole();
    let mut locals = Vec::with_capacity(fs.len());
    for f in &fs {
        let loc = ring.localize(f);
        let (mf, map) = module.localize(&loc);
        common = g.intersect(&common, &map.kernel());
        let xf: Vec<RingElement> = xs.iter().map(|x| loc.image(x)).collect();
        locals.push((
            lipman_profile(&mf, &xf, n_max, m_max),
            weak_profile(&mf, &xf, n_max, m_max, k),
        ));
    }
    out.set("diagonal_injective", common == g.zero_subgroup());
    let global = (
        lipman_profile(module, xs, n_max, m_max),
        weak_profile(module, xs, n_max, m_max, k),
    );
    for (label, pick) in [("lipman", 0usize), ("weak", 1usize)] {
        let gp = if pick == 0 { &global.0 } else { &global.1 };
        let mut max_ok = true;
        let mut conclusive_ok = true;
        for (i, n, e) in gp.cells() {
            let local: Vec<Entry> = locals
                .iter()
                .map(|l| if pick == 0 { &l.0 } else { &l.1 }.get(i, n).expect("same shape"))
                .collect();
            let all_local = local.iter().all(Entry::is_conclusive);
            if e.is_conclusive() != all_local {
                conclusive_ok = false;
            }
            if let (Entry::Witness(m), true) = (e, all_local) {
                let mx = local.iter().filter_map(Entry::witness).max().unwrap_or(n).max(n);
                if m != mx {
                    max_ok = false;
                    out.certificates.push(Certificate::BoundViolation {
                        i,
                        n,
                        relation: format!("{label}: global = max local"),
                        lhs: m,
                        rhs: mx,
                    });
                }
            }
        }
        out.set(format!("{label}_global_is_max_local"), max_ok);
        out.set(format!("{label}_conclusiveness_agrees"), conclusive_ok);
    }
    out.record("charts", fs.len());
    for (j, (lip, weak)) in locals.into_iter().enumerate() {
        out.profiles.insert(format!("chart_{j}_lipman"), lip);
        out.profiles.insert(format!("chart_{j}_weak"), weak);
    }
    out.profiles.insert("global_lipman".into(), global.0);
    out.profiles.insert("global_weak".into(), global.1);
    Ok(out)
}

/// `I^m :_R x^m ⊆ I^n :_R x^{m-n}` versus `x`-divisibility of `Γ_I(E)/Γ_{I+(x)}(E)`.
pub fn cartier_check(ring: &Arc<FiniteRing>, ideal: &Ideal, x: &RingElement, n_max: u64, m_max: u64) -> Result<CheckOutcome> {
    let r = FgModule::ring_module(ring);
    let mut out = CheckOutcome::new("cartier");
    let torsion = bounded_torsion_index(&FgModule::cyclic(ring, ideal), x);
    out.set("bounded_torsion", true);
    out.record("torsion_index", &torsion);

    let powers: Vec<Ideal> = (0..=m_max as usize).map(|e| ring.ideal_power(ideal, e)).collect();
    let lhs: Vec<Ideal> = (0..=m_max).map(|e| ring.ideal_colon(&powers[e as usize], &ring.pow(x, e))).collect();
    let mut entries = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let mut found = None;
        for m in n..=m_max {
            let rhs = ring.ideal_colon(&powers[n as usize], &ring.pow(x, m - n));
            match violating(ring, &lhs[m as usize], &rhs) {
                None => {
                    found = Some(m);
                    break;
                }
                Some(element) => out.certificates.push(Certificate::ViolatingElement { i: 1, n, m, element }),
            }
        }
        entries.push(found.map_or(Entry::Inconclusive(m_max), Entry::Witness));
    }
    let profile = Profile {
        kind: ProfileKind::Cartier,
        length: 1,
        n_max,
        m_max,
        degrees: vec![1],
        entries: vec![entries],
        certificates: out.certificates.clone(),
    };
    let a = profile.is_conclusive();

    let e = r.matlis_dual();
    let with_x = ring.ideal_sum(ideal, &ring.ideal(std::slice::from_ref(x)));
    let gi = e.torsion_submodule(ideal);
    let gix = e.torsion_submodule(&with_x);
    let b = e.subquotient(&gi, &gix).module.is_divisible(x);

    out.set("a_profile_conclusive", a);
    out.set("b_dual_quotient_divisible", b);
    out.set("a_iff_b", a == b);
    let cartier = is_effective_cartier(ring, ideal, &[ring.one()])?;
    out.record("effective_cartier_hypothesis", cartier.passed());
    out.notes.push("the Cartier hypothesis is reported, not enforced".into());
    out.profiles.insert("colon".into(), profile);
    Ok(out)
}

fn violating(ring: &FiniteRing, lhs: &Ideal, rhs: &Ideal) -> Option<GroupElement> {
    if lhs.is_subset_of(rhs) {
        return None;
    }
    ring.ideal_generators(lhs).into_iter().find(|g| !rhs.contains(g))
}

/// Looks in each chart `R_{f_j}` for a non-zerodivisor generating `I·R_{f_j}`.
///
/// Over a finite ring a non-zerodivisor is a unit, so a chart passes exactly when `I·R_{f_j} = R_{f_j}`.
pub fn is_effective_cartier(ring: &Arc<FiniteRing>, ideal: &Ideal, covering: &[RingElement]) -> Result<CheckOutcome> {
    if !ring.is_covering(covering) {
        return Err(Error::NotCovering);
    }
    let mut out = CheckOutcome::new("effective_cartier");
    let gens = ring.ideal_generators(ideal);
    let mut witnesses = Vec::new();
    for (j, f) in covering.iter().enumerate() {
        let loc = ring.localize(f);
        let lr = &loc.ring;
        let images: Vec<RingElement> = gens.iter().map(|g| loc.image(g)).collect();
        let local = lr.ideal(&images);
        let mut candidates = images.clone();
        candidates.extend(lr.ideal_generators(&local));
        candidates.push(lr.one());
        let found = candidates.into_iter().find(|c| {
            local.contains(c) && lr.mult_hom(c).is_injective() && lr.ideal(std::slice::from_ref(c)) == local
        });
        out.set(format!("chart_{j}"), found.is_some());
        witnesses.push(found.map(|c| c.iter().map(|v| v.to_string()).collect::<Vec<_>>()));
        out.record(format!("chart_{j}_order"), lr.order().to_string());
    }
    out.record("generators", witnesses);
    out.notes.push("over a finite ring only charts where the ideal becomes the unit ideal can pass".into());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::gm_profile;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn ring(m: u64) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(m).unwrap())
    }

    #[test]
    fn bound_transfer_examples() {
        let m = FgModule::ring_module(&ring(12));
        let xs = [ints(&[3]), ints(&[2])];
        let lip = lipman_profile(&m, &xs, 3, 12);
        let gm = gm_profile(&m, &xs, 6, 14);
        let out = verify_bound_transfer(&lip, &gm).unwrap();
        assert!(out.passed(), "{:?}", out);
        let short = lipman_profile(&m, &xs, 3, 3);
        let short_gm = gm_profile(&m, &[ints(&[2])], 3, 3);
        assert!(matches!(
            verify_bound_transfer(&short, &short_gm),
            Err(Error::InsufficientBound { .. })
        ));
    }

    #[test]
    fn power_stability_examples() {
        let m = FgModule::ring_module(&ring(8));
        let out = power_stability_check(&m, &[ints(&[2])], &[2], 4).unwrap();
        assert!(out.passed());
        let p = &out.profiles["powered"];
        assert_eq!(p.witness(1, 1), Some(3));
        assert_eq!(p.witness(1, 4), Some(6));
        let same = power_stability_check(&m, &[ints(&[2])], &[1], 3).unwrap();
        assert_eq!(same.profiles["base"], same.profiles["powered"]);
    }

    #[test]
    fn injective_examples() {
        let m = FgModule::ring_module(&ring(8));
        let out = injective_criterion(&m, &[ints(&[2])], InjectiveMode::Proregular, 3).unwrap();
        assert!(out.passed(), "{:?}", out.failures());
        let r12 = FgModule::ring_module(&ring(12));
        let out = injective_criterion(&r12, &[ints(&[2]), ints(&[3])], InjectiveMode::Weak, 2).unwrap();
        assert!(out.passed(), "{:?}", out.failures());
        let out = injective_criterion(&r12, &[ints(&[5])], InjectiveMode::Proregular, 2).unwrap();
        assert!(out.passed());
    }

    #[test]
    fn regular_then_bounded_examples() {
        let m = FgModule::ring_module(&ring(8));
        let out = regular_then_bounded(&m, &[ints(&[3])], &ints(&[2]), 3).unwrap();
        assert!(out.passed(), "{:?}", out);
        let out = regular_then_bounded(&m, &[], &ints(&[2]), 3).unwrap();
        assert_eq!(out.data["torsion_index"]["c"], 3);
        let r12 = FgModule::ring_module(&ring(12));
        assert!(regular_then_bounded(&r12, &[ints(&[5])], &ints(&[2]), 3).unwrap().passed());
        let bad = regular_then_bounded(&r12, &[ints(&[2])], &ints(&[3]), 2).unwrap();
        assert_eq!(bad.data["hypotheses_hold"], false);
    }

    #[test]
    fn local_global_examples() {
        let r6 = ring(6);
        let m = FgModule::ring_module(&r6);
        let out = local_global_check(&m, &[ints(&[2])], &Covering::Elements(vec![ints(&[3]), ints(&[4])]), 3).unwrap();
        assert!(out.passed(), "{:?}", out.failures());
        assert_eq!(out.profiles["global_lipman"].witness(1, 2), Some(3));
        assert_eq!(out.profiles["chart_0_lipman"].witness(1, 2), Some(3));
        assert_eq!(out.profiles["chart_1_lipman"].witness(1, 2), Some(2));
        let m12 = FgModule::ring_module(&ring(12));
        assert!(local_global_check(&m12, &[ints(&[2])], &Covering::Maximal, 3).unwrap().passed());
        assert!(local_global_check(&m12, &[ints(&[2])], &Covering::Elements(vec![ints(&[1])]), 3).unwrap().passed());
        assert!(matches!(
            local_global_check(&m12, &[ints(&[2])], &Covering::Elements(vec![ints(&[2])]), 3),
            Err(Error::NotCovering)
        ));
        let m8 = FgModule::ring_module(&ring(8));
        let out = local_global_check(&m8, &[ints(&[2])], &Covering::Elements(vec![ints(&[1]), ints(&[2])]), 2).unwrap();
        assert!(out.passed(), "{:?}", out.failures());
    }

    #[test]
    fn cartier_examples() {
        let r = ring(12);
        let out = cartier_check(&r, &r.ideal(&[ints(&[3])]), &ints(&[2]), 4, 10).unwrap();
        assert!(out.passed(), "{:?}", out.failures());
        let p = &out.profiles["colon"];
        assert!((1..=4).all(|n| p.witness(1, n) == Some(n)));
        let out = cartier_check(&r, &r.unit_ideal(), &ints(&[2]), 3, 8).unwrap();
        assert!(out.passed());
        let r8 = ring(8);
        let out = cartier_check(&r8, &r8.ideal(&[ints(&[2])]), &ints(&[2]), 5, 12).unwrap();
        assert!(out.passed());
        let p = &out.profiles["colon"];
        let got: Vec<_> = (1..=5).map(|n| p.witness(1, n).unwrap()).collect();
        assert_eq!(got, vec![2, 4, 6, 7, 8]);
    }

    #[test]
    fn effective_cartier_examples() {
        let r = ring(12);
        assert!(is_effective_cartier(&r, &r.unit_ideal(), &[ints(&[1])]).unwrap().passed());
        let out = is_effective_cartier(&r, &r.ideal(&[ints(&[2])]), &[ints(&[3]), ints(&[4])]).unwrap();
        assert!(!out.passed());
        assert!(!out.checks["chart_0"]);
        assert!(out.checks["chart_1"]);
        let r6 = ring(6);
        assert!(is_effective_cartier(&r6, &r6.ideal(&[ints(&[5])]), &[ints(&[1])]).unwrap().passed());
        assert!(matches!(
            is_effective_cartier(&r, &r.unit_ideal(), &[ints(&[2])]),
            Err(Error::NotCovering)
        ));
    }
}
