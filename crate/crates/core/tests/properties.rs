use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use prokit::analysis::{bounded_torsion_index, default_m_max, gm_profile, lipman_profile, weak_profile};
use prokit::complex::{cech_cohomology, cech_homology};
use prokit::harness::report::{emit_report, Series};
use prokit::harness::run::run_task;
use prokit::harness::suites::{cofactor_determinant, run_suite};
use prokit::harness::task::{parse_spec, Format};
use prokit::linalg::{hnf, snf, IntMatrix};
use prokit::module::FgModule;
use prokit::ring::FiniteRing;

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c)
            .prop_map(move |v| IntMatrix::from_vec(r, c, v.into_iter().map(BigInt::from).collect()))
    })
}

fn is_unit(d: &BigInt) -> bool {
    d.abs() == BigInt::from(1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_an_equivalence(a in matrix()) {
        let (d, u, v) = snf(&a);
        prop_assert_eq!(&u.mul(&a).mul(&v), &d);
        prop_assert!(is_unit(&cofactor_determinant(&u)));
        prop_assert!(is_unit(&cofactor_determinant(&v)));
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                prop_assert!(i == j || d.get(i, j).is_zero());
            }
        }
        for w in diag.windows(2) {
            prop_assert!(!w[0].is_negative());
            let divides = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(divides);
        }
        if a.is_square() {
            let prod = diag.iter().fold(BigInt::from(1), |p, x| p * x);
            prop_assert_eq!(cofactor_determinant(&a).abs(), prod);
        }
    }

    #[test]
    fn hermite_form_is_echelon(a in matrix()) {
        let (h, u) = hnf(&a);
        prop_assert_eq!(&u.mul(&a), &h);
        prop_assert!(is_unit(&cofactor_determinant(&u)));
        let mut last: Option<usize> = None;
        let mut seen_zero = false;
        for i in 0..h.rows() {
            match (0..h.cols()).find(|&j| !h.get(i, j).is_zero()) {
                None => seen_zero = true,
                Some(p) => {
                    prop_assert!(!seen_zero);
                    prop_assert!(last.is_none_or(|l| p > l));
                    prop_assert!(h.get(i, p).is_positive());
                    for r in 0..i {
                        prop_assert!(!h.get(r, p).is_negative() && h.get(r, p) < h.get(i, p));
                    }
                    last = Some(p);
                }
            }
        }
    }

    #[test]
    fn zmod_matches_integer_arithmetic(n in 2u64..200, a in 0i64..1000, b in 0i64..1000) {
        let r = FiniteRing::zmod(n).unwrap();
        let (ea, eb) = (r.from_int(&a.into()), r.from_int(&b.into()));
        prop_assert_eq!(r.mul(&ea, &eb), r.from_int(&(a * b).into()));
        prop_assert_eq!(r.add(&ea, &eb), r.from_int(&(a + b).into()));
        prop_assert_eq!(r.is_unit(&ea), a.gcd(&(n as i64)) == 1);
    }

    #[test]
    fn constructed_rings_satisfy_axioms(q in prop::sample::select(vec![2u64, 3, 4, 5, 8, 9]), c in prop::collection::vec(0i64..9, 2..=3), m in 2u64..13) {
        let p = FiniteRing::polynomial_quotient(q, &c).unwrap().ring;
        prop_assert!(p.check_axioms().is_empty());
        prop_assert_eq!(p.order(), BigInt::from(q.pow(c.len() as u32)));
        let prod = FiniteRing::product(&[p.clone(), FiniteRing::zmod(m).unwrap()]);
        prop_assert!(prod.check_axioms().is_empty());
        prop_assert_eq!(prod.order(), p.order() * m);
    }

    #[test]
    fn module_functors_on_cyclic_modules(n in 2u64..40, g in 0i64..40) {
        let r = Arc::new(FiniteRing::zmod(n).unwrap());
        let m = FgModule::cyclic(&r, &r.ideal(&[r.from_int(&g.into())]));
        let rm = FgModule::ring_module(&r);
        prop_assert!(m.check_axioms().is_empty());
        prop_assert_eq!(m.matlis_dual().order(), m.order());
        prop_assert_eq!(m.matlis_dual().matlis_dual().signature(), m.signature());
        prop_assert_eq!(rm.hom_module(&m).order(), m.order());
        prop_assert_eq!(rm.tensor_module(&m).order(), m.order());
    }

    #[test]
    fn single_element_law_over_zmod(n in 2u64..64, x in 0i64..64, n_max in 1u64..=3) {
        let r = Arc::new(FiniteRing::zmod(n).unwrap());
        let m = FgModule::ring_module(&r);
        let xs = vec![r.from_int(&x.into())];
        let c = bounded_torsion_index(&m, &xs[0]).c as u64;
        let m_max = default_m_max(&m, 1, n_max);
        let lip = lipman_profile(&m, &xs, n_max, m_max);
        let gm = gm_profile(&m, &xs, n_max, m_max);
        for k in 1..=n_max {
            prop_assert_eq!(lip.witness(1, k), Some(k + c));
        }
        prop_assert_eq!(lip.entries, gm.entries);
    }

    #[test]
    fn finite_modules_are_weakly_proregular(n in 2u64..40, xs in prop::collection::vec(0i64..40, 1..=2)) {
        let r = Arc::new(FiniteRing::zmod(n).unwrap());
        let m = FgModule::ring_module(&r);
        let xs: Vec<_> = xs.iter().map(|&x| r.from_int(&x.into())).collect();
        let m_max = default_m_max(&m, xs.len(), 2);
        prop_assert!(lipman_profile(&m, &xs, 2, m_max).is_conclusive());
        prop_assert!(weak_profile(&m, &xs, 2, m_max, xs.len()).is_conclusive());
    }

    #[test]
    fn cech_vanishing_in_positive_degrees(n in 2u64..30, g in 0i64..30, xs in prop::collection::vec(0i64..30, 1..=2)) {
        let r = Arc::new(FiniteRing::zmod(n).unwrap());
        let m = FgModule::cyclic(&r, &r.ideal(&[r.from_int(&g.into())]));
        let xs: Vec<_> = xs.iter().map(|&x| r.from_int(&x.into())).collect();
        for i in 1..=xs.len() {
            prop_assert!(cech_cohomology(&xs, &m, i).unwrap().is_zero_module());
            prop_assert!(cech_homology(&xs, &m, i).unwrap().is_zero_module());
        }
    }

    #[test]
    fn series_flags_are_exact(v in prop::collection::vec(0u64..6, 2..6)) {
        let s = Series::new("s".into(), v.iter().copied().map(Some).collect());
        prop_assert_eq!(s.strictly_increasing, v.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(s.constant, v.iter().all(|&x| x == v[0]));
    }

    #[test]
    fn profile_reports_round_trip(n in 2u64..30, xs in prop::collection::vec(0i64..30, 1..=2), n_max in 1u64..=3) {
        let text = format!(
            r#"{{"schema": 1, "ring": {{"kind": "zmod", "n": {n}}}, "bounds": {{"n_max": {n_max}}},
                "analysis": {{"kind": "profile", "sequence": {xs:?}}}}}"#
        );
        let t = parse_spec(&text).unwrap();
        let r = run_task(&t);
        let back: prokit::harness::report::Report = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        prop_assert_eq!(&back, &r);
        let csv = String::from_utf8(emit_report(&r, Format::Csv)).unwrap();
        let rows = csv.lines().filter(|l| l.starts_with(|c: char| c.is_ascii_digit())).count() as u64;
        prop_assert_eq!(rows, 3 * xs.len() as u64 * n_max);
        prop_assert_eq!(emit_report(&run_task(&t).body(), Format::Json), emit_report(&r.body(), Format::Json));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn suites_replay_from_their_seed(seed in any::<u64>()) {
        let a = run_suite("colon_identification", seed, Some(6)).unwrap();
        let b = run_suite("colon_identification", seed, Some(6)).unwrap();
        prop_assert!(a.passed());
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}
