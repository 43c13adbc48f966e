//! Named randomized batteries. Instance `k` of a suite draws from its own seeded stream, so
//! results do not depend on the number of worker threads.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::random::{self, Instance, Limits};
use crate::analysis::{
    bounded_torsion_index, cartier_check, default_m_max, gm_profile, injective_criterion, lipman_profile,
    local_global_check, verify_bound_transfer, weak_profile, CheckOutcome, Covering, InjectiveMode,
};
use crate::complex::{cech_cohomology, cech_homology, cech_tor_compare, colon_identification};
use crate::error::{Error, Result};
use crate::linalg::{snf_full, IntMatrix};
use crate::module::FgModule;
use crate::ring::RingElement;

pub const SUITES: &[&str] = &[
    "smith_oracle",
    "colon_identification",
    "single_element_law",
    "bound_transfer",
    "finite_proregular",
    "vanishing",
    "injective_dual",
    "dual_endomorphisms",
    "local_global",
    "cartier",
    "tor_compare",
];

pub fn default_count(name: &str) -> Option<usize> {
    Some(match name {
        "smith_oracle" => 200,
        "colon_identification" | "single_element_law" | "finite_proregular" | "vanishing" | "injective_dual" => 100,
        "bound_transfer" | "local_global" | "cartier" => 50,
        "dual_endomorphisms" | "tor_compare" => 20,
        _ => return None,
    })
}

type Verdicts = Vec<(String, bool)>;

fn verdict(key: &str, ok: bool) -> (String, bool) {
    (key.to_string(), ok)
}

pub(crate) const TALLY: &str = "tally:";

/// Counted in the report instead of asserted.
fn tally(key: &str, seen: bool) -> (String, bool) {
    (format!("{TALLY}{key}"), seen)
}

/// Runs `f` on `count` instances and merges the per-instance verdicts.
fn battery<F>(name: &str, seed: u64, count: usize, f: F) -> CheckOutcome
where
    F: Fn(&mut ChaCha8Rng) -> (String, Result<Verdicts>) + Sync,
{
    let results: Vec<(String, Result<Verdicts>)> = (0..count as u64)
        .into_par_iter()
        .map(|k| f(&mut random::sub_rng(seed, name, k)))
        .collect();
    let mut out = CheckOutcome::new(name);
    out.record("seed", seed);
    out.record("instances", count);
    let mut errors = 0usize;
    let mut failed_instances = 0usize;
    let mut tallies: std::collections::BTreeMap<String, usize> = Default::default();
    for (k, (desc, res)) in results.into_iter().enumerate() {
        match res {
            Ok(vs) => {
                let mut ok = true;
                for (key, pass) in vs {
                    if let Some(t) = key.strip_prefix(TALLY) {
                        *tallies.entry(t.to_string()).or_default() += usize::from(pass);
                        continue;
                    }
                    let slot = out.checks.entry(key.clone()).or_insert(true);
                    *slot &= pass;
                    if !pass {
                        ok = false;
                        out.notes.push(format!("instance {k}: {key} failed on {desc}"));
                    }
                }
                failed_instances += usize::from(!ok);
            }
            Err(e) => {
                errors += 1;
                failed_instances += 1;
                out.notes.push(format!("instance {k}: error {e} on {desc}"));
            }
        }
    }
    out.set("no_errors", errors == 0);
    out.record("failed_instances", failed_instances);
    if !tallies.is_empty() {
        out.record("tallies", tallies);
    }
    out
}

pub fn run_suite(name: &str, seed: u64, count: Option<usize>) -> Result<CheckOutcome> {
    let count = match (count, default_count(name)) {
        (Some(c), Some(_)) => c,
        (None, Some(c)) => c,
        _ => return Err(Error::UnknownReference(format!("suite {name:?}"))),
    };
    let limits = Limits::default();
    Ok(match name {
        "smith_oracle" => battery(name, seed, count, smith_instance),
        "colon_identification" => battery(name, seed, count, |r| colon_instance(r, limits)),
        "single_element_law" => battery(name, seed, count, |r| single_element_instance(r, limits)),
        "bound_transfer" => battery(name, seed, count, |r| bound_transfer_instance(r, limits)),
        "finite_proregular" => battery(name, seed, count, |r| proregular_instance(r, limits)),
        "vanishing" => battery(name, seed, count, |r| vanishing_instance(r, limits)),
        "injective_dual" => battery(name, seed, count, |r| injective_instance(r, limits)),
        "dual_endomorphisms" => battery(name, seed, count, |r| dual_endo_instance(r, limits)),
        "local_global" => battery(name, seed, count, |r| local_global_instance(r, limits)),
        "cartier" => battery(name, seed, count, |r| cartier_instance(r, limits)),
        "tor_compare" => battery(name, seed, count, |r| tor_instance(r, limits)),
        _ => unreachable!("checked above"),
    })
}

/// Cofactor expansion along the first row.
pub fn cofactor_determinant(a: &IntMatrix) -> BigInt {
    fn go(a: &IntMatrix, rows: &[usize], cols: &mut Vec<usize>) -> BigInt {
        let Some((&r, rest)) = rows.split_first() else {
            return BigInt::one();
        };
        let mut acc = BigInt::zero();
        for pos in 0..cols.len() {
            let c = cols.remove(pos);
            let entry = a.get(r, c);
            if !entry.is_zero() {
                let minor = entry * go(a, rest, cols);
                if pos % 2 == 0 {
                    acc += minor;
                } else {
                    acc -= minor;
                }
            }
            cols.insert(pos, c);
        }
        acc
    }
    assert!(a.is_square(), "determinant of a non-square matrix");
    let rows: Vec<usize> = (0..a.rows()).collect();
    go(a, &rows, &mut rows.clone())
}

fn smith_instance(rng: &mut ChaCha8Rng) -> (String, Result<Verdicts>) {
    let (rows, cols) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let a = random::random_matrix(rng, rows, cols, 20);
    let desc = format!("{rows}x{cols} {:?}", a.row_vecs());
    let s = snf_full(&a);
    let mut v = Vec::new();
    v.push(verdict("d_equals_uav", s.u.mul(&a).mul(&s.v) == s.d));
    let diag = s.diagonal();
    let off_diagonal_zero = (0..rows).all(|i| (0..cols).all(|j| i == j || s.d.get(i, j).is_zero()));
    v.push(verdict("diagonal", off_diagonal_zero && diag.iter().all(|d| !d.is_negative())));
    let chain = diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    });
    v.push(verdict("divisibility_chain", chain));
    let unimodular = cofactor_determinant(&s.u).abs().is_one() && cofactor_determinant(&s.v).abs().is_one();
    v.push(verdict("unimodular", unimodular));
    v.push(verdict("v_inverse", s.v.mul(&s.v_inv) == IntMatrix::identity(cols)));
    if rows == cols {
        let det = cofactor_determinant(&a);
        let prod: BigInt = diag.iter().product();
        v.push(verdict("det_is_product", det.abs() == prod));
        v.push(tally("square_nonsingular", !det.is_zero()));
    }
    (desc, Ok(v))
}

fn colon_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let inst = random::random_instance(rng, limits);
    let n = rng.gen_range(1..=4);
    let k = inst.xs.len();
    let desc = format!("{} at n={n}", inst.describe());
    let res = colon_identification(&inst.xs[..k - 1], &inst.xs[k - 1], n, &inst.module).map(|ci| {
        vec![
            verdict("isomorphism", ci.iso.is_isomorphism() && ci.iso.is_equivariant()),
            verdict("square_commutes", ci.verified),
            verdict("orders_match", ci.colon_side.order() == ci.koszul_side.order()),
            tally("nonzero_colon_quotient", !ci.colon_side.is_zero_module()),
        ]
    });
    (desc, res)
}

fn single_element_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let mut inst = random::random_instance(rng, limits);
    inst.xs.truncate(1);
    let desc = inst.describe();
    let n_max = 4;
    let m_max = default_m_max(&inst.module, 1, n_max);
    let c = bounded_torsion_index(&inst.module, &inst.xs[0]).c as u64;
    let lip = lipman_profile(&inst.module, &inst.xs, n_max, m_max);
    let gm = gm_profile(&inst.module, &inst.xs, n_max, m_max);
    let law = (1..=n_max).all(|n| lip.witness(1, n) == Some(n + c));
    let v = vec![
        verdict("lipman_is_n_plus_c", law),
        verdict("gm_equals_lipman", lip.entries == gm.entries),
        tally("torsion_index_positive", c > 0),
        tally("torsion_index_at_least_2", c > 1),
    ];
    (desc, Ok(v))
}

fn bound_transfer_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let inst = random::random_instance(rng, limits);
    let desc = inst.describe();
    let k = inst.xs.len();
    let n_max = 3;
    let gm_n = n_max * k as u64;
    let lip = lipman_profile(&inst.module, &inst.xs, n_max, default_m_max(&inst.module, k, n_max));
    let gm = gm_profile(&inst.module, &inst.xs, gm_n, default_m_max(&inst.module, k, gm_n));
    let res = verify_bound_transfer(&lip, &gm).map(|o| {
        let pairs = o.data.get("lower_bound_pairs_compared").and_then(|v| v.as_u64());
        let mut v: Verdicts = o.checks.into_iter().collect();
        v.push(verdict("all_pairs_compared", pairs == Some(k as u64 * n_max)));
        v.push(tally("gm_differs_from_lipman", lip.cells().any(|(i, n, e)| gm.get(i, n) != Some(e))));
        v
    });
    (desc, res)
}

fn proregular_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let inst = random::random_instance(rng, limits);
    let desc = inst.describe();
    let k = inst.xs.len();
    let n_max = 3;
    let m_max = default_m_max(&inst.module, k, n_max);
    let v = vec![
        verdict("lipman_conclusive", lipman_profile(&inst.module, &inst.xs, n_max, m_max).is_conclusive()),
        verdict("gm_conclusive", gm_profile(&inst.module, &inst.xs, n_max, m_max).is_conclusive()),
        verdict("weak_conclusive", weak_profile(&inst.module, &inst.xs, n_max, m_max, k).is_conclusive()),
    ];
    (desc, Ok(v))
}

/// Čech (co)homology vanishing above degree 0 and the degree-0 identifications.
pub(crate) fn vanishing_checks(m: &FgModule, xs: &[RingElement]) -> Result<Vec<(String, bool)>> {
    let ideal = m.ring().ideal(xs);
    let mut v = Vec::new();
    let mut coh = true;
    let mut hom = true;
    for i in 1..=xs.len() {
        coh &= cech_cohomology(xs, m, i)?.is_zero_module();
        hom &= cech_homology(xs, m, i)?.is_zero_module();
    }
    v.push(verdict("cech_cohomology_vanishes", coh));
    v.push(verdict("cech_homology_vanishes", hom));
    v.push(tally("nonzero_torsion", m.torsion_submodule(&ideal) != m.zero_submodule()));
    let h0 = cech_cohomology(xs, m, 0)?;
    let gamma = m.submodule_as_module(&m.torsion_submodule(&ideal)).module;
    let local = m.local_cohomology(&ideal, 0);
    v.push(verdict("h0_is_torsion", h0.signature() == gamma.signature()));
    v.push(verdict("torsion_is_local_cohomology", gamma.signature() == local.signature()));
    let completion = m.adic_completion(&ideal).module;
    v.push(verdict("h0_homology_is_completion", cech_homology(xs, m, 0)?.signature() == completion.signature()));
    Ok(v)
}

fn vanishing_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let inst = random::random_instance(rng, limits);
    (inst.describe(), vanishing_checks(&inst.module, &inst.xs))
}

fn injective_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let inst = random::random_instance(rng, limits);
    let run = || -> Result<Verdicts> {
        let mut v = Vec::new();
        for (mode, label) in [(InjectiveMode::Proregular, "proregular"), (InjectiveMode::Weak, "weak")] {
            let o = injective_criterion(&inst.module, &inst.xs, mode, 2)?;
            let verdict_true = o.data.get("verdict").and_then(|x| x.as_bool()) == Some(true);
            v.push(verdict(&format!("{label}_verdict"), verdict_true));
            v.push(verdict(&format!("{label}_agrees_with_profile"), o.checks["agrees_with_profile"]));
        }
        Ok(v)
    };
    (inst.describe(), run())
}

fn dual_endo_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let (label, ring) = random::random_ring(rng, limits.ring_order);
    let ring = Arc::new(ring);
    let xs = random::random_sequence(rng, &ring, limits.max_len);
    let desc = format!("End(E) over {label} with {xs:?}");
    let run = || -> Result<Verdicts> {
        let e = FgModule::ring_module(&ring).matlis_dual();
        let end = e.hom_module(&e);
        let mut ok = true;
        for i in 1..=xs.len() {
            ok &= cech_homology(&xs, &end, i)?.is_zero_module();
        }
        Ok(vec![verdict("higher_cech_homology_vanishes", ok)])
    };
    (desc, run())
}

fn random_covering(rng: &mut ChaCha8Rng, inst: &Instance) -> Vec<RingElement> {
    for _ in 0..32 {
        let len = rng.gen_range(1..=3);
        let fs: Vec<RingElement> = (0..len).map(|_| random::random_element(rng, &inst.ring)).collect();
        if inst.ring.is_covering(&fs) && fs.iter().any(|f| !inst.ring.is_unit(f)) {
            return fs;
        }
    }
    vec![inst.ring.one()]
}

fn local_global_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let inst = random::random_instance(rng, limits);
    let fs = random_covering(rng, &inst);
    let desc = format!("{} covered by {fs:?}", inst.describe());
    let run = || -> Result<Verdicts> {
        let mut v = Vec::new();
        for (cover, label) in [(Covering::Elements(fs.clone()), "elements"), (Covering::Maximal, "maximal")] {
            let o = local_global_check(&inst.module, &inst.xs, &cover, 3)?;
            v.extend(o.checks.into_iter().map(|(k, b)| (format!("{label}_{k}"), b)));
        }
        Ok(v)
    };
    (desc, run())
}

fn cartier_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let (label, ring) = random::random_ring(rng, limits.ring_order);
    let ring = Arc::new(ring);
    let ideal = random::random_proper_ideal(rng, &ring);
    let x = random::random_element(rng, &ring);
    let gens = ring.ideal_generators(&ideal);
    let desc = format!("{label}, I = {gens:?}, x = {x:?}");
    let n_max = 3;
    let m_max = n_max + 2 * ring.group().log2_order() as u64;
    let res = cartier_check(&ring, &ideal, &x, n_max, m_max).map(|o| {
        vec![
            verdict("bounded_torsion", o.checks["bounded_torsion"]),
            verdict("a_iff_b", o.checks["a_iff_b"]),
            tally("a_holds", o.checks["a_profile_conclusive"]),
            tally("b_holds", o.checks["b_dual_quotient_divisible"]),
        ]
    });
    (desc, res)
}

fn tor_instance(rng: &mut ChaCha8Rng, limits: Limits) -> (String, Result<Verdicts>) {
    let inst = random::random_instance(rng, Limits { module_order: 64, ..limits });
    let (nlabel, n) = random::random_module(rng, &inst.ring, 64);
    let desc = format!("{}, N = {nlabel}", inst.describe());
    let run = || -> Result<Verdicts> {
        let mut v = Vec::new();
        for i in 0..=1 {
            let c = cech_tor_compare(&inst.module, &n, &inst.xs, i, i + 2)?;
            v.push(verdict(&format!("tor_{i}_isomorphic"), c.isomorphic));
        }
        Ok(v)
    };
    (desc, run())
}
