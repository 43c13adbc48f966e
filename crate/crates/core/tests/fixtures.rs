use std::path::PathBuf;

use prokit::harness::report::{emit_report, Report, Status};
use prokit::harness::run::{run_axioms, run_task};
use prokit::harness::task::{parse_spec, Format, TaskSpec};

fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn load(name: &str) -> TaskSpec {
    let text = std::fs::read_to_string(dir().join(name)).unwrap();
    parse_spec(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn run(name: &str) -> Report {
    run_task(&load(name))
}

#[test]
fn every_fixture_passes() {
    let mut names: Vec<String> = std::fs::read_dir(dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    assert_eq!(
        names,
        ["ex1_truncated_one_x.json", "ex1_truncated_x.json", "ex2_truncated.json", "prism_style.json", "z12_battery.json"]
    );
    for name in &names {
        let r = run(name);
        assert_eq!(r.status, Status::Pass, "{name}: {:?} {:?}", r.errors, r.outcomes.iter().map(|o| o.failures()).collect::<Vec<_>>());
        assert!(r.errors.is_empty());
        assert_eq!(run_axioms(&load(name)).status, Status::Pass, "{name}");
    }
}

#[test]
fn ex1_orderings() {
    let r = run("ex1_truncated_x.json");
    let sw = r.sweep.unwrap();
    assert_eq!(sw.members.iter().map(|m| m.parameter).collect::<Vec<_>>(), [2, 3, 4, 5, 6]);
    assert_eq!(sw.series.len(), 1);
    assert!(sw.divergent && !sw.bounded);

    let r = run("ex1_truncated_one_x.json");
    let sw = r.sweep.unwrap();
    assert_eq!(sw.series.len(), 6);
    assert!(sw.bounded && !sw.divergent);
}

#[test]
fn ex2_torsion_index() {
    let sw = run("ex2_truncated.json").sweep.unwrap();
    let c: Vec<usize> = sw.members.iter().map(|m| m.torsion_index.as_ref().unwrap().c).collect();
    assert_eq!(c, [2, 3, 4, 5]);
}

#[test]
fn prism_profile_is_identity() {
    let r = run("prism_style.json");
    let o = &r.outcomes[0];
    assert_eq!(o.name, "cartier");
    let p = &o.profiles["colon"];
    assert_eq!((1..=4).map(|n| p.witness(1, n)).collect::<Vec<_>>(), [Some(1), Some(2), Some(3), Some(4)]);
    assert!(o.checks["b_dual_quotient_divisible"]);
    let csv = String::from_utf8(emit_report(&r, Format::Csv)).unwrap();
    assert_eq!(csv, "# cartier/colon\ni,n,m,conclusive\n1,1,1,true\n1,2,2,true\n1,3,3,true\n1,4,4,true\n");
}

#[test]
fn z12_battery_covers_every_check() {
    let r = run("z12_battery.json");
    let names: Vec<&str> = r.outcomes.iter().map(|o| o.name.as_str()).collect();
    for want in ["bound_transfer", "power_stability", "injective_criterion", "regular_then_bounded", "local_global", "colon_identification", "cech_vanishing", "tor_compare"] {
        assert!(names.contains(&want), "{want} missing from {names:?}");
    }
}

#[test]
fn fixture_reports_are_deterministic() {
    for name in ["ex1_truncated_one_x.json", "z12_battery.json"] {
        let a = emit_report(&run(name).body(), Format::Json);
        let b = emit_report(&run(name).body(), Format::Json);
        assert_eq!(a, b, "{name}");
    }
}
