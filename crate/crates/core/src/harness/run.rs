//! Task execution.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::report::{ErrorEntry, LabeledCertificate, NamedProfile, Report, Series, Status, SweepMember, SweepReport, Timing};
use super::suites::{self, TALLY};
use super::task::{
    family_member, Analysis, Bounds, CheckName, ElementRef, RingFamilySpec, SequenceRef, TaskSpec,
    Track, TrackEntries,
};
use crate::analysis::{
    bounded_torsion_index, cartier_check, default_m_max, gm_profile, injective_criterion, is_effective_cartier,
    lipman_profile, local_global_check, power_stability_check, regular_then_bounded, verify_bound_transfer,
    weak_profile, CheckOutcome, Covering, InjectiveMode, Profile, ProfileKind,
};
use crate::complex::{cech_tor_compare, colon_identification};
use crate::error::{Error, Result};
use crate::module::FgModule;
use crate::ring::{FiniteRing, RingElement};

/// Computes one profile of `module` along `xs`.
pub fn compute_profile(kind: ProfileKind, module: &FgModule, xs: &[RingElement], bounds: &Bounds) -> Profile {
    let k = xs.len();
    let n_max = bounds.n_max;
    let m_max = bounds.m_max.unwrap_or_else(|| default_m_max(module, k, n_max));
    match kind {
        ProfileKind::Lipman => lipman_profile(module, xs, n_max, m_max),
        ProfileKind::GreenleesMay => gm_profile(module, xs, n_max, m_max),
        ProfileKind::Weak => weak_profile(module, xs, n_max, m_max, bounds.i_max.unwrap_or(k)),
        ProfileKind::Cartier => unreachable!("rejected during validation"),
    }
}

/// Runs a validated task. The seed is taken from the task, defaulting to 0.
pub fn run_task(t: &TaskSpec) -> Report {
    let start = Instant::now();
    let seed = t.seed.unwrap_or(0);
    let mut r = Report::empty(seed);
    r.task = Some(t.clone());
    let res = match &t.analysis {
        Analysis::Profile {
            module,
            sequence,
            profiles,
            expect,
        } => run_profiles(t, module.as_deref(), sequence, profiles, expect, &mut r),
        Analysis::Verify { .. } => run_verify(t, &mut r),
        Analysis::Sweep {
            family,
            profiles,
            track,
            expect,
        } => family_sweep(family, profiles, track, &t.bounds).map(|sw| {
            if let Some(e) = expect {
                let mut o = CheckOutcome::new("expectations");
                if let Some(d) = e.divergent {
                    o.set("divergent", sw.divergent == d);
                }
                if let Some(b) = e.bounded {
                    o.set("bounded", sw.bounded == b);
                }
                for (label, want) in &e.series {
                    let got = sw.series.iter().find(|s| &s.label == label);
                    let ok = got.is_some_and(|s| s.values.iter().copied().eq(want.iter().map(|&v| Some(v))));
                    if !ok {
                        o.notes.push(format!("series {label}: expected {want:?}, got {:?}", got.map(|s| &s.values)));
                    }
                    o.set(format!("series {label}"), ok);
                }
                r.outcomes.push(o);
            }
            let tracked_inconclusive = sw.series.iter().any(|s| s.values.contains(&None));
            if tracked_inconclusive {
                r.status = r.status.max(Status::Inconclusive);
            }
            r.sweep = Some(sw);
        }),
        Analysis::Suite { name, count } => suites::run_suite(name, seed, *count).map(|o| r.outcomes.push(o)),
        Analysis::Axioms => run_axioms_into(t, &mut r),
    };
    if let Err(e) = res {
        r.status = r.status.max(Status::of_error(&e));
        r.errors.push(ErrorEntry::new("task", &e));
    }
    finish(&mut r);
    r.timing = Some(Timing {
        total_ms: start.elapsed().as_secs_f64() * 1e3,
    });
    r
}

/// Ring and module axioms for the declared ring, or for every member of a swept family.
pub fn run_axioms(t: &TaskSpec) -> Report {
    let mut r = Report::empty(t.seed.unwrap_or(0));
    r.task = Some(t.clone());
    if let Err(e) = run_axioms_into(t, &mut r) {
        r.status = r.status.max(Status::of_error(&e));
        r.errors.push(ErrorEntry::new("axioms", &e));
    }
    finish(&mut r);
    r
}

/// The profile task on the module and sequence of `t`.
pub fn as_profile_task(t: &TaskSpec) -> Result<TaskSpec> {
    let mut p = t.clone();
    p.analysis = match &t.analysis {
        Analysis::Profile { .. } => return Ok(p),
        Analysis::Verify { module, sequence, .. } => Analysis::Profile {
            module: module.clone(),
            sequence: sequence.clone(),
            profiles: vec![ProfileKind::Lipman, ProfileKind::GreenleesMay, ProfileKind::Weak],
            expect: Default::default(),
        },
        _ => return Err(Error::InvalidSpec("task has no module and sequence to profile".into())),
    };
    p.validate()?;
    Ok(p)
}

fn finish(r: &mut Report) {
    for o in &r.outcomes {
        if !o.passed() {
            r.status = r.status.max(Status::Counterexample);
        }
    }
    let mut certs = Vec::new();
    for p in &r.profiles {
        if !p.profile.is_conclusive() {
            r.status = r.status.max(Status::Inconclusive);
        }
        certs.extend(p.profile.witness_certificates().into_iter().map(|c| LabeledCertificate {
            source: p.label.clone(),
            certificate: c,
        }));
    }
    for o in &r.outcomes {
        certs.extend(o.certificates.iter().cloned().map(|c| LabeledCertificate {
            source: o.name.clone(),
            certificate: c,
        }));
    }
    r.certificates = certs;
}

fn run_profiles(
    t: &TaskSpec,
    module: Option<&str>,
    sequence: &SequenceRef,
    profiles: &[ProfileKind],
    expect: &std::collections::BTreeMap<String, std::collections::BTreeMap<String, Vec<u64>>>,
    r: &mut Report,
) -> Result<()> {
    let ctx = t.context()?;
    let m = ctx.module(module.unwrap_or("R"))?;
    let xs = ctx.sequence(sequence)?;
    for &kind in profiles {
        r.profiles.push(NamedProfile {
            label: kind.label().into(),
            profile: compute_profile(kind, &m, &xs, &t.bounds),
        });
    }
    if !expect.is_empty() {
        let mut o = CheckOutcome::new("expectations");
        for (label, rows) in expect {
            let table = r.profiles.iter().find(|p| &p.label == label);
            for (deg, want) in rows {
                let key = format!("{label}({deg})");
                let got: Option<Vec<Option<u64>>> = table.and_then(|p| {
                    let i: usize = deg.parse().ok()?;
                    Some((1..=want.len() as u64).map(|n| p.profile.witness(i, n)).collect())
                });
                let ok = got.as_ref().is_some_and(|g| g.iter().copied().eq(want.iter().map(|&v| Some(v))));
                if !ok {
                    o.notes.push(format!("{key}: expected {want:?}, got {got:?}"));
                }
                o.set(key, ok);
            }
        }
        r.outcomes.push(o);
    }
    Ok(())
}

fn expand_checks(requested: &[CheckName], t: &TaskSpec, k: usize) -> Vec<CheckName> {
    let Analysis::Verify {
        y,
        covering,
        ideal,
        x,
        tensor_with,
        ..
    } = &t.analysis
    else {
        return Vec::new();
    };
    let mut out: Vec<CheckName> = Vec::new();
    for &c in requested {
        if c == CheckName::All {
            out.extend([
                CheckName::BoundTransfer,
                CheckName::PowerStability,
                CheckName::InjectiveProregular,
                CheckName::InjectiveWeak,
                CheckName::LocalGlobalMaximal,
                CheckName::ColonIdentification,
                CheckName::CechVanishing,
            ]);
            if y.is_some() {
                out.push(CheckName::RegularThenBounded);
            }
            if covering.is_some() {
                out.push(CheckName::LocalGlobal);
            }
            if ideal.is_some() && x.is_some() {
                out.push(CheckName::Cartier);
            }
            if ideal.is_some() && covering.is_some() {
                out.push(CheckName::EffectiveCartier);
            }
            if tensor_with.is_some() {
                out.push(CheckName::TorCompare);
            }
            if k == 1 {
                out.push(CheckName::TorsionLaw);
            }
        } else {
            out.push(c);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn from_verdicts(name: &str, vs: Vec<(String, bool)>) -> CheckOutcome {
    let mut o = CheckOutcome::new(name);
    for (k, v) in vs {
        if !k.starts_with(TALLY) {
            o.set(k, v);
        }
    }
    o
}

fn run_verify(t: &TaskSpec, r: &mut Report) -> Result<()> {
    let Analysis::Verify {
        module,
        sequence,
        checks,
        exponents,
        y,
        covering,
        ideal,
        x,
        tensor_with,
    } = &t.analysis
    else {
        unreachable!("dispatched on Verify");
    };
    let ctx = t.context()?;
    let ring = ctx.ring.clone();
    let m = ctx.module(module.as_deref().unwrap_or("R"))?;
    let xs = ctx.sequence(sequence)?;
    let k = xs.len();
    let b = &t.bounds;
    let n_max = b.n_max;
    for c in expand_checks(checks, t, k) {
        let res: Result<CheckOutcome> = match c {
            CheckName::All => unreachable!("expanded"),
            CheckName::BoundTransfer => {
                let lip = compute_profile(ProfileKind::Lipman, &m, &xs, b);
                let wide = Bounds {
                    n_max: n_max * k as u64,
                    m_max: b.m_max.map(|v| v.max(n_max * k as u64)),
                    i_max: None,
                };
                let gm = compute_profile(ProfileKind::GreenleesMay, &m, &xs, &wide);
                verify_bound_transfer(&lip, &gm)
            }
            CheckName::PowerStability => {
                let e = exponents.clone().unwrap_or_else(|| vec![2; k]);
                power_stability_check(&m, &xs, &e, n_max)
            }
            CheckName::InjectiveProregular => injective_criterion(&m, &xs, InjectiveMode::Proregular, n_max),
            CheckName::InjectiveWeak => injective_criterion(&m, &xs, InjectiveMode::Weak, n_max),
            CheckName::RegularThenBounded => {
                let y = ctx.element(y.as_ref().expect("validated"))?;
                regular_then_bounded(&m, &xs, &y, n_max)
            }
            CheckName::LocalGlobal => {
                let fs = ctx.sequence(covering.as_ref().expect("validated"))?;
                local_global_check(&m, &xs, &Covering::Elements(fs), n_max)
            }
            CheckName::LocalGlobalMaximal => local_global_check(&m, &xs, &Covering::Maximal, n_max),
            CheckName::Cartier => {
                let i = ctx.ideal(ideal.as_ref().expect("validated"))?;
                let x = ctx.element(x.as_ref().expect("validated"))?;
                let m_max = b.m_max.unwrap_or(n_max + 2 * ring.group().log2_order() as u64);
                cartier_check(&ring, &i, &x, n_max, m_max)
            }
            CheckName::EffectiveCartier => {
                let i = ctx.ideal(ideal.as_ref().expect("validated"))?;
                let fs = ctx.sequence(covering.as_ref().expect("validated"))?;
                is_effective_cartier(&ring, &i, &fs)
            }
            CheckName::ColonIdentification => Ok(colon_outcome(&m, &xs, n_max.min(3))),
            CheckName::CechVanishing => suites::vanishing_checks(&m, &xs).map(|v| from_verdicts("cech_vanishing", v)),
            CheckName::TorCompare => {
                let n = ctx.module(tensor_with.as_ref().expect("validated"))?;
                (0..=1)
                    .map(|i| cech_tor_compare(&m, &n, &xs, i, i + 2).map(|c| (format!("tor_{i}_isomorphic"), c.isomorphic)))
                    .collect::<Result<Vec<_>>>()
                    .map(|v| from_verdicts("tor_compare", v))
            }
            CheckName::TorsionLaw => Ok(torsion_law(&m, &xs[0], b)),
        };
        match res {
            Ok(o) => r.outcomes.push(o),
            Err(e) => {
                let label = serde_json::to_value(c).expect("serializable");
                let label = label.as_str().unwrap_or("check");
                r.status = r.status.max(Status::of_error(&e));
                r.errors.push(ErrorEntry::new(label, &e));
            }
        }
    }
    Ok(())
}

fn colon_outcome(m: &FgModule, xs: &[RingElement], n_top: u64) -> CheckOutcome {
    let mut o = CheckOutcome::new("colon_identification");
    for i in 1..=xs.len() {
        for n in 1..=n_top {
            let key = format!("i={i},n={n}");
            match colon_identification(&xs[..i - 1], &xs[i - 1], n, m) {
                Ok(ci) => o.set(key, ci.verified),
                Err(e) => {
                    o.notes.push(format!("{key}: {e}"));
                    o.set(key, false);
                }
            }
        }
    }
    o
}

fn torsion_law(m: &FgModule, x: &RingElement, b: &Bounds) -> CheckOutcome {
    let mut o = CheckOutcome::new("torsion_law");
    let t = bounded_torsion_index(m, x);
    let xs = std::slice::from_ref(x);
    let lip = compute_profile(ProfileKind::Lipman, m, xs, b);
    let gm = compute_profile(ProfileKind::GreenleesMay, m, xs, b);
    let c = t.c as u64;
    o.set("lipman_is_n_plus_c", (1..=b.n_max).all(|n| lip.witness(1, n) == Some(n + c)));
    o.set("gm_equals_lipman", lip.entries == gm.entries);
    o.record("torsion_index", &t);
    o.profiles.insert("lipman".into(), lip);
    o
}

fn run_axioms_into(t: &TaskSpec, r: &mut Report) -> Result<()> {
    let mut o = CheckOutcome::new("axioms");
    if let Analysis::Sweep { family, .. } = &t.analysis {
        let (lo, hi) = family.range;
        for n in lo..=hi {
            let member = family_member(family, n)?;
            o.set(format!("ring N={n}"), member.ring.check_axioms().is_empty());
        }
    } else {
        let ctx = t.context()?;
        let failures = ctx.ring.check_axioms();
        o.set("ring", failures.is_empty());
        o.notes.extend(failures.iter().take(5).map(|f| format!("ring: {f}")));
        for (name, m) in ctx.modules()? {
            let failures = m.check_axioms();
            o.set(format!("module {name}"), failures.is_empty());
            o.notes.extend(failures.iter().take(5).map(|f| format!("module {name}: {f}")));
        }
    }
    r.outcomes.push(o);
    Ok(())
}

/// `x`, `one`, `zero` or an integer, inside a family member.
fn member_element(ring: &FiniteRing, x: &RingElement, e: &ElementRef) -> Result<RingElement> {
    match e {
        ElementRef::Int(k) => Ok(ring.from_int(&BigInt::from(*k))),
        ElementRef::Name(n) => match n.as_str() {
            "x" => Ok(x.clone()),
            "one" => Ok(ring.one()),
            "zero" => Ok(ring.zero()),
            _ => Err(Error::UnknownReference(n.clone())),
        },
    }
}

pub(crate) fn member_sequence(f: &RingFamilySpec, n: usize) -> Result<(Arc<FiniteRing>, Vec<RingElement>)> {
    let member = family_member(f, n)?;
    let xs = f
        .sequence
        .iter()
        .map(|e| member_element(&member.ring, &member.x, e))
        .collect::<Result<Vec<_>>>()?;
    Ok((Arc::new(member.ring), xs))
}

/// Profiles of `R` along the family sequence for each parameter, with the tracked series.
pub fn family_sweep(f: &RingFamilySpec, profiles: &[ProfileKind], track: &Track, bounds: &Bounds) -> Result<SweepReport> {
    let (lo, hi) = f.range;
    if lo < 1 || hi < lo {
        return Err(Error::BoundViolation(format!("family range [{lo}, {hi}] needs 1 <= lo <= hi")));
    }
    let members: Vec<SweepMember> = (lo..=hi)
        .into_par_iter()
        .map(|n| -> Result<SweepMember> {
            let (ring, xs) = member_sequence(f, n)?;
            let module = FgModule::ring_module(&ring);
            let profiles = profiles
                .iter()
                .map(|&kind| NamedProfile {
                    label: kind.label().into(),
                    profile: compute_profile(kind, &module, &xs, bounds),
                })
                .collect();
            let torsion_index = track
                .torsion_index
                .then(|| bounded_torsion_index(&module, xs.last().expect("nonempty")));
            Ok(SweepMember {
                schema: super::task::SCHEMA,
                parameter: n,
                ring_factors: ring.group().factors().to_vec(),
                sequence: xs,
                profiles,
                torsion_index,
            })
        })
        .collect::<Result<_>>()?;

    let mut series = Vec::new();
    let first = &members[0];
    for (pk, p) in first.profiles.iter().enumerate() {
        let cells: Vec<(usize, u64)> = match &track.entries {
            None | Some(TrackEntries::All(_)) => p.profile.cells().map(|(i, n, _)| (i, n)).collect(),
            Some(TrackEntries::Cells(c)) => c.clone(),
        };
        for (i, n) in cells {
            let values = members.iter().map(|m| m.profiles[pk].profile.witness(i, n)).collect();
            series.push(Series::new(format!("{}({i},{n})", p.label), values));
        }
    }
    if track.torsion_index {
        let values = members
            .iter()
            .map(|m| m.torsion_index.as_ref().map(|t| t.c as u64))
            .collect();
        series.push(Series::new("torsion_index".into(), values));
    }
    let divergent = series.iter().any(|s| s.strictly_increasing);
    let bounded = !series.is_empty() && series.iter().all(|s| s.constant);
    Ok(SweepReport {
        family: f.clone(),
        members,
        series,
        divergent,
        bounded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::report::emit_report;
    use crate::harness::task::{parse_spec, Format};

    fn run(text: &str) -> Report {
        run_task(&parse_spec(text).unwrap())
    }

    #[test]
    fn zmod_eight_profile() {
        let r = run(r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
            "analysis": {"kind": "profile", "sequence": [2], "profiles": ["lipman"]},
            "bounds": {"n_max": 4}}"#);
        assert_eq!(r.status, Status::Pass);
        let p = &r.profiles[0].profile;
        assert_eq!((1..=4).map(|n| p.witness(1, n).unwrap()).collect::<Vec<_>>(), vec![4, 5, 6, 7]);
        let csv = String::from_utf8(emit_report(&r, Format::Csv)).unwrap();
        let rows = csv.lines().filter(|l| l.chars().next().is_some_and(|c| c.is_ascii_digit())).count();
        assert_eq!(rows, 4);
        assert_eq!(r.certificates.len(), 4);
    }

    #[test]
    fn zmod_twelve_full_battery() {
        let r = run(r#"{"schema": 1, "ring": {"kind": "zmod", "n": 12},
            "analysis": {"kind": "verify", "sequence": [2, 3], "checks": ["all"]}}"#);
        assert!(r.errors.is_empty(), "{:?}", r.errors);
        for o in &r.outcomes {
            assert!(o.passed(), "{}: {:?}", o.name, o.failures());
        }
        assert_eq!(r.status, Status::Pass);
        assert!(r.outcomes.len() >= 7);
    }

    #[test]
    fn expectation_mismatch_is_a_counterexample() {
        let r = run(r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
            "analysis": {"kind": "profile", "sequence": [2], "profiles": ["lipman"],
                         "expect": {"lipman": {"1": [4, 5, 7]}}}}"#);
        assert_eq!(r.status, Status::Counterexample);
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn tight_bound_is_inconclusive() {
        let r = run(r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
            "analysis": {"kind": "profile", "sequence": [2], "profiles": ["lipman"]},
            "bounds": {"n_max": 2, "m_max": 3}}"#);
        assert_eq!(r.status, Status::Inconclusive);
        assert_eq!(r.exit_code(), 2);
    }

    #[test]
    fn sweeps_flag_divergence_and_boundedness() {
        let r = run(r#"{"schema": 1, "analysis": {"kind": "sweep",
            "family": {"kind": "truncated_two_power", "range": [2, 6], "sequence": ["x"]},
            "track": {"entries": [[1, 1]]}}}"#);
        let sw = r.sweep.as_ref().unwrap();
        assert_eq!(sw.series[0].values, vec![Some(3), Some(4), Some(5), Some(6), Some(7)]);
        assert!(sw.divergent && !sw.bounded);

        let r = run(r#"{"schema": 1, "analysis": {"kind": "sweep",
            "family": {"kind": "truncated_two_power", "range": [2, 6], "sequence": ["one", "x"]}}}"#);
        let sw = r.sweep.as_ref().unwrap();
        assert!(sw.bounded && !sw.divergent);
        for s in &sw.series {
            let n: u64 = s.label.trim_end_matches(')').rsplit(',').next().unwrap().parse().unwrap();
            assert!(s.values.iter().all(|&v| v == Some(n)), "{s:?}");
        }

        let r = run(r#"{"schema": 1, "analysis": {"kind": "sweep",
            "family": {"kind": "truncated_polynomial", "q": 2, "range": [2, 5], "sequence": ["x"]},
            "track": {"entries": [], "torsion_index": true}}}"#);
        let sw = r.sweep.as_ref().unwrap();
        assert_eq!(sw.series[0].values, vec![Some(2), Some(3), Some(4), Some(5)]);
        assert!(sw.divergent);
    }

    #[test]
    fn json_round_trip_and_determinism() {
        let text = r#"{"schema": 1, "ring": {"kind": "zmod", "n": 12}, "seed": 9,
            "analysis": {"kind": "profile", "sequence": [2, 3]}}"#;
        let a = run(text);
        let b = run(text);
        let ja = emit_report(&a.body(), Format::Json);
        assert_eq!(ja, emit_report(&b.body(), Format::Json));
        let back: Report = serde_json::from_slice(&emit_report(&a, Format::Json)).unwrap();
        assert_eq!(back, a);
        assert_eq!(a.seed, 9);
    }

    #[test]
    fn runtime_errors_become_entries() {
        let r = run(r#"{"schema": 1, "ring": {"kind": "zmod", "n": 12},
            "analysis": {"kind": "verify", "sequence": [2], "checks": ["local_global"], "covering": [2]}}"#);
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].kind, "not_covering");
        assert_eq!(r.status, Status::Invalid);
    }

    #[test]
    fn axioms_and_profile_conversion() {
        let t = parse_spec(r#"{"schema": 1, "ring": {"kind": "zmod", "n": 12},
            "modules": {"M": {"kind": "cyclic", "ideal": [4]}},
            "analysis": {"kind": "verify", "module": "M", "sequence": [2], "checks": ["cech_vanishing"]}}"#)
        .unwrap();
        let r = run_axioms(&t);
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.outcomes[0].checks.len(), 3);
        let p = as_profile_task(&t).unwrap();
        assert!(matches!(p.analysis, Analysis::Profile { .. }));
        assert_eq!(run_task(&p).profiles.len(), 3);
    }
}
