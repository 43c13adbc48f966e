//! Reports and their json, csv and text renderings.

use std::fmt::Write as _;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::task::{Format, RingFamilySpec, TaskSpec, SCHEMA};
use crate::analysis::{Certificate, CheckOutcome, Entry, Profile, TorsionIndex};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Inconclusive,
    Counterexample,
    Invalid,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Counterexample => 1,
            Status::Inconclusive => 2,
            Status::Invalid => 64,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::NotStabilized { .. } | Error::InsufficientBound { .. } | Error::DecompositionBoundExceeded { .. } => {
                Status::Inconclusive
            }
            Error::IdentificationFailure(_) | Error::AxiomViolation(_) => Status::Counterexample,
            _ => Status::Invalid,
        }
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InfiniteCokernel { .. } => "infinite_cokernel",
        Error::DimensionMismatch(_) => "dimension_mismatch",
        Error::InvalidSpec(_) => "invalid_spec",
        Error::AxiomViolation(_) => "axiom_violation",
        Error::DecompositionBoundExceeded { .. } => "decomposition_bound_exceeded",
        Error::NotStabilized { .. } => "not_stabilized",
        Error::IdentificationFailure(_) => "identification_failure",
        Error::InsufficientBound { .. } => "insufficient_bound",
        Error::NotCovering => "not_covering",
        Error::Parse { .. } => "parse",
        Error::UnknownReference(_) => "unknown_reference",
        Error::BoundViolation(_) => "bound_violation",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedProfile {
    pub label: String,
    pub profile: Profile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCertificate {
    pub source: String,
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorEntry {
    pub context: String,
    pub kind: String,
    pub message: String,
}

impl ErrorEntry {
    pub fn new(context: &str, e: &Error) -> Self {
        ErrorEntry {
            context: context.to_string(),
            kind: error_kind(e).to_string(),
            message: e.to_string(),
        }
    }
}

/// One tracked quantity across the family; `None` marks an inconclusive entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Series {
    pub label: String,
    pub values: Vec<Option<u64>>,
    pub strictly_increasing: bool,
    pub constant: bool,
}

impl Series {
    pub fn new(label: String, values: Vec<Option<u64>>) -> Self {
        let known: Option<Vec<u64>> = values.iter().copied().collect();
        let (inc, constant) = match known {
            Some(v) if v.len() >= 2 => (v.windows(2).all(|w| w[0] < w[1]), v.windows(2).all(|w| w[0] == w[1])),
            _ => (false, false),
        };
        Series {
            label,
            values,
            strictly_increasing: inc,
            constant,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepMember {
    pub schema: u32,
    pub parameter: usize,
    #[serde(with = "crate::serde_int::vec")]
    pub ring_factors: Vec<BigInt>,
    #[serde(with = "crate::serde_int::vec_vec")]
    pub sequence: Vec<Vec<BigInt>>,
    pub profiles: Vec<NamedProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_index: Option<TorsionIndex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub family: RingFamilySpec,
    pub members: Vec<SweepMember>,
    pub series: Vec<Series>,
    /// Some tracked series increases strictly at every step.
    pub divergent: bool,
    /// Every tracked series is constant.
    pub bounded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub task: Option<TaskSpec>,
    pub status: Status,
    pub outcomes: Vec<CheckOutcome>,
    pub profiles: Vec<NamedProfile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepReport>,
    pub certificates: Vec<LabeledCertificate>,
    pub errors: Vec<ErrorEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn empty(seed: u64) -> Self {
        Report {
            schema: SCHEMA,
            tool: "prokit".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            task: None,
            status: Status::Pass,
            outcomes: Vec::new(),
            profiles: Vec::new(),
            sweep: None,
            certificates: Vec::new(),
            errors: Vec::new(),
            timing: None,
        }
    }

    /// The report without timing.
    pub fn body(&self) -> Report {
        Report {
            timing: None,
            ..self.clone()
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    /// Every profile table with a label, in emission order.
    pub fn tables(&self) -> Vec<(String, &Profile)> {
        let mut out: Vec<(String, &Profile)> = self.profiles.iter().map(|p| (p.label.clone(), &p.profile)).collect();
        if let Some(s) = &self.sweep {
            for m in &s.members {
                for p in &m.profiles {
                    out.push((format!("N={}/{}", m.parameter, p.label), &p.profile));
                }
            }
        }
        for o in &self.outcomes {
            for (label, p) in &o.profiles {
                out.push((format!("{}/{label}", o.name), p));
            }
        }
        out
    }
}

pub fn emit_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(r).expect("report serializes");
            v.push(b'\n');
            v
        }
        Format::Csv => csv(r).into_bytes(),
        Format::Text => text(r).into_bytes(),
    }
}

const CSV_HEADER: &str = "i,n,m,conclusive";

fn entry_m(e: Entry) -> (u64, bool) {
    match e {
        Entry::Witness(m) => (m, true),
        Entry::Inconclusive(m) => (m, false),
    }
}

/// One block per table: a `# label` line, the header, then one row per cell.
fn csv(r: &Report) -> String {
    let tables = r.tables();
    if tables.is_empty() {
        return format!("{CSV_HEADER}\n");
    }
    let mut s = String::new();
    for (k, (label, p)) in tables.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        let _ = writeln!(s, "# {label}");
        let _ = writeln!(s, "{CSV_HEADER}");
        for (i, n, e) in p.cells() {
            let (m, c) = entry_m(e);
            let _ = writeln!(s, "{i},{n},{m},{c}");
        }
    }
    s
}

fn table_text(s: &mut String, label: &str, p: &Profile) {
    let _ = writeln!(s, "profile {label} ({:?}, k={}, n_max={}, m_max={})", p.kind, p.length, p.n_max, p.m_max);
    let _ = write!(s, "  i\\n");
    for n in 1..=p.n_max {
        let _ = write!(s, " {n:>4}");
    }
    s.push('\n');
    for (i, row) in p.degrees.iter().zip(&p.entries) {
        let _ = write!(s, "  {i:<3}");
        for e in row {
            let cell = match e {
                Entry::Witness(m) => m.to_string(),
                Entry::Inconclusive(m) => format!(">{m}"),
            };
            let _ = write!(s, " {cell:>4}");
        }
        s.push('\n');
    }
}

fn text(r: &Report) -> String {
    let mut s = String::new();
    let name = r.task.as_ref().map_or("(none)", |t| t.name.as_str());
    let _ = writeln!(
        s,
        "{} {}  task: {name}  seed: {}  status: {:?}",
        r.tool, r.version, r.seed, r.status
    );
    for p in &r.profiles {
        table_text(&mut s, &p.label, &p.profile);
    }
    for o in &r.outcomes {
        let verdict = if o.passed() { "pass" } else { "FAIL" };
        let _ = writeln!(s, "check {}: {verdict}", o.name);
        for (k, v) in &o.checks {
            let _ = writeln!(s, "  {k}: {}", if *v { "ok" } else { "failed" });
        }
        for n in &o.notes {
            let _ = writeln!(s, "  note: {n}");
        }
    }
    if let Some(sw) = &r.sweep {
        let (lo, hi) = sw.family.range;
        let _ = writeln!(s, "sweep {:?} N={lo}..{hi}", sw.family.kind);
        for ser in &sw.series {
            let vals: Vec<String> = ser
                .values
                .iter()
                .map(|v| v.map_or("?".to_string(), |x| x.to_string()))
                .collect();
            let shape = if ser.strictly_increasing {
                "increasing"
            } else if ser.constant {
                "constant"
            } else {
                "mixed"
            };
            let _ = writeln!(s, "  {}: {}  {shape}", ser.label, vals.join(" "));
        }
        let yn = |b: bool| if b { "yes" } else { "no" };
        let _ = writeln!(s, "  divergent: {}  bounded: {}", yn(sw.divergent), yn(sw.bounded));
    }
    for e in &r.errors {
        let _ = writeln!(s, "error in {}: [{}] {}", e.context, e.kind, e.message);
    }
    if let Some(t) = &r.timing {
        let _ = writeln!(s, "time: {:.1} ms", t.total_ms);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_in_every_format() {
        let r = Report::empty(0);
        let json = emit_report(&r, Format::Json);
        let back: Report = serde_json::from_slice(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(emit_report(&r, Format::Csv), b"i,n,m,conclusive\n");
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(text.contains("status: Pass"));
    }

    #[test]
    fn series_flags() {
        let s = Series::new("a".into(), vec![Some(3), Some(4), Some(5)]);
        assert!(s.strictly_increasing && !s.constant);
        let s = Series::new("b".into(), vec![Some(2), Some(2)]);
        assert!(!s.strictly_increasing && s.constant);
        let s = Series::new("c".into(), vec![Some(2), Some(3), Some(3)]);
        assert!(!s.strictly_increasing && !s.constant);
        let s = Series::new("d".into(), vec![Some(2), None]);
        assert!(!s.strictly_increasing && !s.constant);
    }

    #[test]
    fn status_order_and_codes() {
        assert!(Status::Counterexample > Status::Inconclusive);
        assert_eq!(Status::of_error(&Error::NotStabilized { n_max: 3 }), Status::Inconclusive);
        assert_eq!(Status::of_error(&Error::NotCovering).exit_code(), 64);
    }
}
