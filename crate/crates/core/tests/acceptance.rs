//! Acceptance criteria, one line each. Set `PROKIT_SEED` to replay with another seed.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use prokit::analysis::CheckOutcome;
use prokit::harness::report::{emit_report, Report, Status};
use prokit::harness::run::run_task;
use prokit::harness::task::{parse_spec, Format};

fn fixture_text(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn suite_task(name: &str, count: usize, seed: u64) -> String {
    format!(r#"{{"schema": 1, "name": "{name}", "seed": {seed}, "analysis": {{"kind": "suite", "name": "{name}", "count": {count}}}}}"#)
}

fn run(text: &str) -> Report {
    run_task(&parse_spec(text).expect("acceptance task parses"))
}

fn body_bytes(r: &Report) -> Vec<u8> {
    emit_report(&r.body(), Format::Json)
}

struct Verdict {
    ok: bool,
    detail: String,
}

struct Criterion {
    id: u32,
    title: &'static str,
    limit: Option<Duration>,
    tasks: Vec<String>,
    judge: fn(&[Report]) -> Verdict,
}

fn outcome(r: &Report) -> &CheckOutcome {
    &r.outcomes[0]
}

fn battery(rs: &[Report]) -> Verdict {
    let mut parts = Vec::new();
    let mut ok = true;
    for r in rs {
        let o = outcome(r);
        let n = o.data.get("instances").and_then(|v| v.as_u64()).unwrap_or(0);
        let failed = o.data.get("failed_instances").and_then(|v| v.as_u64()).unwrap_or(u64::MAX);
        ok &= r.status == Status::Pass && failed == 0;
        parts.push(format!("{}: {n} instances, {failed} failed", o.name));
        for note in o.notes.iter().take(3) {
            parts.push(note.clone());
        }
    }
    Verdict {
        ok,
        detail: parts.join("; "),
    }
}

fn series<'a>(r: &'a Report, label: &str) -> Option<&'a [Option<u64>]> {
    r.sweep.as_ref()?.series.iter().find(|s| s.label == label).map(|s| s.values.as_slice())
}

fn sweeps(rs: &[Report]) -> Verdict {
    let [x, one_x, poly] = rs else { unreachable!() };
    let want: Vec<Option<u64>> = (3..=7).map(Some).collect();
    let x_ok = series(x, "lipman(1,1)") == Some(&want[..]) && x.sweep.as_ref().is_some_and(|s| s.divergent);
    let sw = one_x.sweep.as_ref();
    let one_x_ok = sw.is_some_and(|s| {
        s.bounded
            && !s.divergent
            && s.members.iter().all(|m| {
                let p = &m.profiles[0].profile;
                p.cells().all(|(_, n, e)| e.witness() == Some(n))
            })
    });
    let t_want: Vec<Option<u64>> = (2..=5).map(Some).collect();
    let poly_ok = series(poly, "torsion_index") == Some(&t_want[..]) && poly.sweep.as_ref().is_some_and(|s| s.divergent);
    let ok = x_ok && one_x_ok && poly_ok && rs.iter().all(|r| r.status == Status::Pass);
    let fmt = |v: Option<&[Option<u64>]>| v.map(|v| format!("{:?}", v.iter().map(|x| x.unwrap_or(0)).collect::<Vec<_>>()));
    Verdict {
        ok,
        detail: format!(
            "(x) entry (1,1) = {}, divergent {x_ok}; (1,x) constant = n, bounded {one_x_ok}; torsion index = {}, divergent {poly_ok}",
            fmt(series(x, "lipman(1,1)")).unwrap_or_default(),
            fmt(series(poly, "torsion_index")).unwrap_or_default(),
        ),
    }
}

fn cartier(rs: &[Report]) -> Verdict {
    let [prism, random] = rs else { unreachable!() };
    let o = outcome(prism);
    let p = o.profiles.get("colon");
    let law = p.is_some_and(|p| p.is_conclusive() && p.cells().all(|(_, n, e)| e.witness() == Some(n)));
    let b = o.checks.get("b_dual_quotient_divisible") == Some(&true);
    let fixture_ok = prism.status == Status::Pass && law && b;
    let rv = battery(std::slice::from_ref(random));
    let tallies = outcome(random).data.get("tallies").map(|t| t.to_string()).unwrap_or_default();
    Verdict {
        ok: fixture_ok && rv.ok,
        detail: format!("prism (Z/12, (3), 2): m(n) = n {law}, (b) {b}; {}; tallies {tallies}", rv.detail),
    }
}

fn criteria(seed: u64) -> Vec<Criterion> {
    let s = |name: &str, count: usize| suite_task(name, count, seed);
    vec![
        Criterion {
            id: 1,
            title: "exact-linalg oracle",
            limit: Some(Duration::from_secs(5)),
            tasks: vec![s("smith_oracle", 200)],
            judge: battery,
        },
        Criterion {
            id: 2,
            title: "Koszul/colon identification",
            limit: Some(Duration::from_secs(60)),
            tasks: vec![s("colon_identification", 100)],
            judge: battery,
        },
        Criterion {
            id: 3,
            title: "single-element law",
            limit: None,
            tasks: vec![s("single_element_law", 100)],
            judge: battery,
        },
        Criterion {
            id: 4,
            title: "bound transfer",
            limit: None,
            tasks: vec![s("bound_transfer", 50)],
            judge: battery,
        },
        Criterion {
            id: 5,
            title: "finite implies proregular and weakly proregular",
            limit: None,
            tasks: vec![s("finite_proregular", 100)],
            judge: battery,
        },
        Criterion {
            id: 6,
            title: "homological vanishing battery",
            limit: Some(Duration::from_secs(120)),
            tasks: vec![s("vanishing", 100)],
            judge: battery,
        },
        Criterion {
            id: 7,
            title: "injective-dual criteria",
            limit: None,
            tasks: vec![s("injective_dual", 100), s("dual_endomorphisms", 20)],
            judge: battery,
        },
        Criterion {
            id: 8,
            title: "truncated family sweeps",
            limit: Some(Duration::from_secs(30)),
            tasks: vec![
                fixture_text("ex1_truncated_x.json"),
                fixture_text("ex1_truncated_one_x.json"),
                fixture_text("ex2_truncated.json"),
            ],
            judge: sweeps,
        },
        Criterion {
            id: 9,
            title: "local-global",
            limit: None,
            tasks: vec![s("local_global", 50)],
            judge: battery,
        },
        Criterion {
            id: 10,
            title: "Cartier/prism equivalence",
            limit: None,
            tasks: vec![fixture_text("prism_style.json"), s("cartier", 50)],
            judge: cartier,
        },
        Criterion {
            id: 11,
            title: "Tor edge comparison",
            limit: None,
            tasks: vec![s("tor_compare", 20)],
            judge: battery,
        },
    ]
}

fn line(ok: bool, id: u32, title: &str, detail: &str) {
    println!("[{}] criterion {id:>2}: {title}: {detail}", if ok { "PASS" } else { "FAIL" });
}

fn main() -> ExitCode {
    let seed = std::env::var("PROKIT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(1);
    println!("acceptance seed {seed}");
    let mut all_ok = true;
    let mut first_run: Vec<(String, Vec<u8>)> = Vec::new();
    for c in criteria(seed) {
        let start = Instant::now();
        let reports: Vec<Report> = c.tasks.iter().map(|t| run(t)).collect();
        let elapsed = start.elapsed();
        let v = (c.judge)(&reports);
        let in_time = c.limit.is_none_or(|l| elapsed < l);
        let timing = match c.limit {
            Some(l) => format!("{:.2} s (limit {} s)", elapsed.as_secs_f64(), l.as_secs()),
            None => format!("{:.2} s", elapsed.as_secs_f64()),
        };
        let ok = v.ok && in_time;
        all_ok &= ok;
        line(ok, c.id, c.title, &format!("{}; {timing}", v.detail));
        first_run.extend(c.tasks.into_iter().zip(reports.iter().map(body_bytes)));
    }

    let start = Instant::now();
    let mismatched: Vec<String> = first_run
        .iter()
        .filter(|(task, bytes)| body_bytes(&run(task)) != *bytes)
        .map(|(task, _)| parse_spec(task).map(|t| t.name).unwrap_or_default())
        .collect();
    let ok = mismatched.is_empty();
    all_ok &= ok;
    line(
        ok,
        12,
        "determinism",
        &format!(
            "{} report bodies re-run, {} differ {mismatched:?}; {:.2} s",
            first_run.len(),
            mismatched.len(),
            start.elapsed().as_secs_f64()
        ),
    );

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
