//! The task file format and its resolution against a concrete ring.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::analysis::ProfileKind;
use crate::error::{Error, Result};
use crate::module::FgModule;
use crate::ring::{FiniteRing, Ideal, RingElement};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub schema: u32,
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, ElementSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sequences: BTreeMap<String, Vec<ElementRef>>,
    pub analysis: Analysis,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub output: OutputOptions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn default_name() -> String {
    "task".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RingSpec {
    Zmod { n: u64 },
    TruncatedTwoPower { n: usize },
    TruncatedPolynomial { q: u64, n: usize },
    TruncatedPolynomialFamily { q: u64, n: usize },
    /// `Z/q[t]/(tᵏ - Σ c_i tⁱ)`.
    PolynomialQuotient { q: u64, coeffs: Vec<i64> },
    Product { parts: Vec<RingSpec> },
    /// `table[i][j]` holds the coordinates of `e_i·e_j` over the invariant factors.
    Structure {
        #[serde(with = "crate::serde_int::vec")]
        factors: Vec<BigInt>,
        table: Vec<Vec<Vec<i64>>>,
        one: Vec<i64>,
    },
}

/// An element by name (`one`, `zero`, `x` or a declared element) or as an integer multiple of one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementRef {
    Int(i64),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElementSpec {
    Int(i64),
    Name(String),
    Coords(Vec<i64>),
    Expr(ElementExpr),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ElementExpr {
    Add(Vec<ElementRef>),
    Mul(Vec<ElementRef>),
    Pow(ElementRef, u64),
    /// Block coordinates in a product ring.
    Components(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Ring,
    Free { rank: usize },
    /// `R/I`.
    Cyclic { ideal: Vec<ElementRef> },
    /// `I` as a submodule of `R`.
    Ideal { gens: Vec<ElementRef> },
    /// `M/IM`.
    Quotient { of: String, ideal: Vec<ElementRef> },
    Dual { of: String },
    Sum { of: Vec<String> },
    Hom { source: String, target: String },
    Tensor { left: String, right: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SequenceRef {
    Name(String),
    Inline(Vec<ElementRef>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    All,
    BoundTransfer,
    PowerStability,
    InjectiveProregular,
    InjectiveWeak,
    RegularThenBounded,
    LocalGlobal,
    LocalGlobalMaximal,
    Cartier,
    EffectiveCartier,
    ColonIdentification,
    CechVanishing,
    TorCompare,
    TorsionLaw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    TruncatedTwoPower,
    /// Member `N` is `∏_{n=1}^N Z/q[t]/(tⁿ)`.
    TruncatedPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingFamilySpec {
    pub kind: FamilyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    pub range: (usize, usize),
    pub sequence: Vec<ElementRef>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Track {
    /// `"all"` or a list of `[i, n]` cells.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub entries: Option<TrackEntries>,
    #[serde(default)]
    pub torsion_index: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TrackEntries {
    All(AllMarker),
    Cells(Vec<(usize, u64)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AllMarker {
    All,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divergent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounded: Option<bool>,
    /// Series by label, as printed in the report.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    Profile {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        module: Option<String>,
        sequence: SequenceRef,
        #[serde(default = "all_profiles")]
        profiles: Vec<ProfileKind>,
        /// Witness rows by profile and degree: `{"lipman": {"1": [4, 5, 6]}}`.
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        expect: BTreeMap<String, BTreeMap<String, Vec<u64>>>,
    },
    Verify {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        module: Option<String>,
        sequence: SequenceRef,
        checks: Vec<CheckName>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        exponents: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<ElementRef>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        covering: Option<SequenceRef>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ideal: Option<Vec<ElementRef>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        x: Option<ElementRef>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tensor_with: Option<String>,
    },
    Sweep {
        family: RingFamilySpec,
        #[serde(default = "lipman_only")]
        profiles: Vec<ProfileKind>,
        #[serde(default)]
        track: Track,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<SweepExpect>,
    },
    Suite {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        count: Option<usize>,
    },
    Axioms,
}

fn all_profiles() -> Vec<ProfileKind> {
    vec![ProfileKind::Lipman, ProfileKind::GreenleesMay, ProfileKind::Weak]
}

fn lipman_only() -> Vec<ProfileKind> {
    vec![ProfileKind::Lipman]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(default = "default_n_max")]
    pub n_max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_max: Option<usize>,
}

fn default_n_max() -> u64 {
    3
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            n_max: default_n_max(),
            m_max: None,
            i_max: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputOptions {
    #[serde(default)]
    pub format: Format,
}

/// Parses and validates a task document.
pub fn parse_spec(text: &str) -> Result<TaskSpec> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    match value.get("schema") {
        Some(v) if v.as_u64() == Some(SCHEMA as u64) => {}
        Some(v) => {
            return Err(Error::Parse {
                location: "field `schema`".into(),
                message: format!("unsupported schema {v}, expected {SCHEMA}"),
            })
        }
        None => {
            return Err(Error::Parse {
                location: "field `schema`".into(),
                message: "missing".into(),
            })
        }
    }
    let spec: TaskSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
        location: format!("line {}, column {}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    spec.validate()?;
    Ok(spec)
}

impl TaskSpec {
    /// Checks bounds and resolves every name.
    pub fn validate(&self) -> Result<()> {
        let b = &self.bounds;
        if b.n_max == 0 {
            return Err(Error::BoundViolation("n_max must be positive".into()));
        }
        if let Some(m) = b.m_max {
            if m < b.n_max {
                return Err(Error::BoundViolation(format!("m_max = {m} is below n_max = {}", b.n_max)));
            }
        }
        match &self.analysis {
            Analysis::Sweep { family, profiles, .. } => {
                let (lo, hi) = family.range;
                if lo < 1 || hi < lo {
                    return Err(Error::BoundViolation(format!("family range [{lo}, {hi}] needs 1 <= lo <= hi")));
                }
                if family.sequence.is_empty() {
                    return Err(Error::InvalidSpec("family sequence is empty".into()));
                }
                check_profiles(profiles, family.sequence.len(), b)?;
                super::run::member_sequence(family, lo)?;
                if let Some(i) = b.i_max {
                    if i == 0 {
                        return Err(Error::BoundViolation("i_max must be positive".into()));
                    }
                }
            }
            Analysis::Suite { name, .. } => {
                if super::suites::default_count(name).is_none() {
                    return Err(Error::UnknownReference(format!("suite {name:?}")));
                }
            }
            _ => {
                let ctx = self.context()?;
                ctx.modules()?;
                match &self.analysis {
                    Analysis::Profile { module, sequence, profiles, .. } => {
                        ctx.module(module.as_deref().unwrap_or("R"))?;
                        let xs = ctx.sequence(sequence)?;
                        check_profiles(profiles, xs.len(), b)?;
                    }
                    Analysis::Verify {
                        module,
                        sequence,
                        y,
                        covering,
                        ideal,
                        x,
                        tensor_with,
                        exponents,
                        checks,
                    } => {
                        ctx.module(module.as_deref().unwrap_or("R"))?;
                        let xs = ctx.sequence(sequence)?;
                        if xs.is_empty() {
                            return Err(Error::InvalidSpec("sequence is empty".into()));
                        }
                        if checks.is_empty() {
                            return Err(Error::InvalidSpec("no checks requested".into()));
                        }
                        if let Some(y) = y {
                            ctx.element(y)?;
                        }
                        if let Some(c) = covering {
                            ctx.sequence(c)?;
                        }
                        if let Some(i) = ideal {
                            ctx.elements(i)?;
                        }
                        if let Some(x) = x {
                            ctx.element(x)?;
                        }
                        if let Some(t) = tensor_with {
                            ctx.module(t)?;
                        }
                        if let Some(e) = exponents {
                            if e.len() != xs.len() || e.contains(&0) {
                                return Err(Error::BoundViolation(
                                    "exponents need one positive entry per sequence element".into(),
                                ));
                            }
                        }
                        let needs = |c: CheckName| checks.contains(&c);
                        let missing = [
                            (CheckName::RegularThenBounded, y.is_none(), "y"),
                            (CheckName::LocalGlobal, covering.is_none(), "covering"),
                            (CheckName::Cartier, ideal.is_none() || x.is_none(), "ideal and x"),
                            (CheckName::EffectiveCartier, ideal.is_none() || covering.is_none(), "ideal and covering"),
                            (CheckName::TorCompare, tensor_with.is_none(), "tensor_with"),
                        ];
                        for (c, absent, what) in missing {
                            if needs(c) && absent {
                                return Err(Error::InvalidSpec(format!("check {c:?} needs {what}")));
                            }
                        }
                        if needs(CheckName::TorsionLaw) && xs.len() != 1 {
                            return Err(Error::InvalidSpec("torsion_law needs a single element".into()));
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub(crate) fn context(&self) -> Result<Context<'_>> {
        let spec = self.ring.as_ref().ok_or_else(|| Error::InvalidSpec("task declares no ring".into()))?;
        let (ring, x) = build_ring(spec)?;
        Context::new(self, ring, x)
    }
}

fn check_profiles(profiles: &[ProfileKind], k: usize, b: &Bounds) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidSpec("sequence is empty".into()));
    }
    if profiles.is_empty() {
        return Err(Error::InvalidSpec("no profiles requested".into()));
    }
    if profiles.contains(&ProfileKind::Cartier) {
        return Err(Error::InvalidSpec("the cartier profile is computed by the cartier check".into()));
    }
    if profiles.contains(&ProfileKind::Weak) {
        match b.i_max {
            Some(0) => return Err(Error::BoundViolation("weak profile needs i_max >= 1".into())),
            Some(i) if i > k => {
                return Err(Error::BoundViolation(format!("i_max = {i} exceeds the sequence length {k}")))
            }
            _ => {}
        }
    }
    Ok(())
}

pub(crate) fn build_ring(spec: &RingSpec) -> Result<(FiniteRing, Option<RingElement>)> {
    Ok(match spec {
        RingSpec::Zmod { n } => (FiniteRing::zmod(*n)?, None),
        RingSpec::TruncatedTwoPower { n } => {
            let t = FiniteRing::truncated_two_power(*n)?;
            (t.ring, Some(t.x))
        }
        RingSpec::TruncatedPolynomial { q, n } => {
            let t = FiniteRing::truncated_polynomial(*q, *n)?;
            (t.ring, Some(t.x))
        }
        RingSpec::TruncatedPolynomialFamily { q, n } => {
            let t = FiniteRing::truncated_polynomial_family(*q, *n)?;
            (t.ring, Some(t.x))
        }
        RingSpec::PolynomialQuotient { q, coeffs } => {
            let t = FiniteRing::polynomial_quotient(*q, coeffs)?;
            (t.ring, Some(t.x))
        }
        RingSpec::Product { parts } => {
            if parts.is_empty() {
                return Err(Error::InvalidSpec("product of no rings".into()));
            }
            let rings: Vec<FiniteRing> = parts.iter().map(|p| build_ring(p).map(|r| r.0)).collect::<Result<_>>()?;
            (FiniteRing::product(&rings), None)
        }
        RingSpec::Structure { factors, table, one } => {
            let t = table
                .iter()
                .map(|row| row.iter().map(|v| ints(v)).collect())
                .collect();
            (FiniteRing::from_structure(factors.clone(), t, ints(one))?, None)
        }
    })
}

pub(crate) fn family_member(f: &RingFamilySpec, n: usize) -> Result<crate::ring::TruncatedRing> {
    match f.kind {
        FamilyKind::TruncatedTwoPower => FiniteRing::truncated_two_power(n),
        FamilyKind::TruncatedPolynomial => FiniteRing::truncated_polynomial_family(f.q.unwrap_or(2), n),
    }
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&a| BigInt::from(a)).collect()
}

/// Name resolution against a built ring.
pub(crate) struct Context<'a> {
    spec: &'a TaskSpec,
    pub ring: Arc<FiniteRing>,
    x: Option<RingElement>,
    product_parts: Option<crate::linalg::DirectSum>,
}

impl<'a> Context<'a> {
    pub(crate) fn new(spec: &'a TaskSpec, ring: FiniteRing, x: Option<RingElement>) -> Result<Self> {
        let product_parts = match &spec.ring {
            Some(RingSpec::Product { parts }) => {
                let rings: Vec<FiniteRing> =
                    parts.iter().map(|p| build_ring(p).map(|r| r.0)).collect::<Result<_>>()?;
                Some(FiniteRing::product_with_coords(&rings).sum)
            }
            _ => None,
        };
        let ctx = Context {
            spec,
            ring: Arc::new(ring),
            x,
            product_parts,
        };
        for name in spec.elements.keys() {
            ctx.named(name, &mut BTreeSet::new())?;
        }
        for seq in spec.sequences.values() {
            ctx.elements(seq)?;
        }
        Ok(ctx)
    }

    fn named(&self, name: &str, seen: &mut BTreeSet<String>) -> Result<RingElement> {
        let r = &self.ring;
        if let Some(spec) = self.spec.elements.get(name) {
            if !seen.insert(name.to_string()) {
                return Err(Error::InvalidSpec(format!("element `{name}` is defined in terms of itself")));
            }
            let v = self.eval(spec, seen);
            seen.remove(name);
            return v;
        }
        match name {
            "one" => Ok(r.one()),
            "zero" => Ok(r.zero()),
            "x" => self.x.clone().ok_or_else(|| Error::UnknownReference(name.into())),
            _ => Err(Error::UnknownReference(name.into())),
        }
    }

    fn reference(&self, e: &ElementRef, seen: &mut BTreeSet<String>) -> Result<RingElement> {
        match e {
            ElementRef::Int(k) => Ok(self.ring.from_int(&BigInt::from(*k))),
            ElementRef::Name(n) => self.named(n, seen),
        }
    }

    fn eval(&self, spec: &ElementSpec, seen: &mut BTreeSet<String>) -> Result<RingElement> {
        let r = &self.ring;
        match spec {
            ElementSpec::Int(k) => Ok(r.from_int(&BigInt::from(*k))),
            ElementSpec::Name(n) => self.named(n, seen),
            ElementSpec::Coords(c) => {
                if c.len() != r.rank() {
                    return Err(Error::InvalidSpec(format!(
                        "coordinate vector of length {} for a ring of rank {}",
                        c.len(),
                        r.rank()
                    )));
                }
                Ok(r.reduce(&ints(c)))
            }
            ElementSpec::Expr(ElementExpr::Add(v)) => v.iter().try_fold(r.zero(), |acc, e| {
                Ok(r.add(&acc, &self.reference(e, seen)?))
            }),
            ElementSpec::Expr(ElementExpr::Mul(v)) => v.iter().try_fold(r.one(), |acc, e| {
                Ok(r.mul(&acc, &self.reference(e, seen)?))
            }),
            ElementSpec::Expr(ElementExpr::Pow(e, k)) => Ok(r.pow(&self.reference(e, seen)?, *k)),
            ElementSpec::Expr(ElementExpr::Components(blocks)) => {
                let sum = self
                    .product_parts
                    .as_ref()
                    .ok_or_else(|| Error::InvalidSpec("components need a product ring".into()))?;
                let widths: Vec<usize> = (0..sum.parts.len()).map(|k| sum.block_range(k).len()).collect();
                if blocks.iter().map(|b| b.len()).collect::<Vec<_>>() != widths {
                    return Err(Error::InvalidSpec(format!("component widths must be {widths:?}")));
                }
                let flat: Vec<BigInt> = blocks.iter().flat_map(|b| ints(b)).collect();
                Ok(sum.assemble(&flat))
            }
        }
    }

    pub(crate) fn element(&self, e: &ElementRef) -> Result<RingElement> {
        self.reference(e, &mut BTreeSet::new())
    }

    pub(crate) fn elements(&self, es: &[ElementRef]) -> Result<Vec<RingElement>> {
        es.iter().map(|e| self.element(e)).collect()
    }

    pub(crate) fn sequence(&self, s: &SequenceRef) -> Result<Vec<RingElement>> {
        match s {
            SequenceRef::Inline(v) => self.elements(v),
            SequenceRef::Name(n) => {
                let v = self
                    .spec
                    .sequences
                    .get(n)
                    .ok_or_else(|| Error::UnknownReference(n.clone()))?;
                self.elements(v)
            }
        }
    }

    pub(crate) fn ideal(&self, es: &[ElementRef]) -> Result<Ideal> {
        Ok(self.ring.ideal(&self.elements(es)?))
    }

    /// Every declared module, by name, plus `R`.
    pub(crate) fn modules(&self) -> Result<BTreeMap<String, FgModule>> {
        let mut done = BTreeMap::new();
        done.insert("R".to_string(), FgModule::ring_module(&self.ring));
        for name in self.spec.modules.keys() {
            self.build_module(name, &mut done, &mut BTreeSet::new())?;
        }
        Ok(done)
    }

    pub(crate) fn module(&self, name: &str) -> Result<FgModule> {
        let mut done = BTreeMap::new();
        done.insert("R".to_string(), FgModule::ring_module(&self.ring));
        self.build_module(name, &mut done, &mut BTreeSet::new())
    }

    fn build_module(
        &self,
        name: &str,
        done: &mut BTreeMap<String, FgModule>,
        visiting: &mut BTreeSet<String>,
    ) -> Result<FgModule> {
        if let Some(m) = done.get(name) {
            return Ok(m.clone());
        }
        let spec = self
            .spec
            .modules
            .get(name)
            .ok_or_else(|| Error::UnknownReference(name.to_string()))?;
        if !visiting.insert(name.to_string()) {
            return Err(Error::InvalidSpec(format!("module `{name}` is defined in terms of itself")));
        }
        let ring = &self.ring;
        let mut dep = |n: &str| self.build_module(n, done, visiting);
        let m = match spec {
            ModuleSpec::Ring => FgModule::ring_module(ring),
            ModuleSpec::Free { rank } => FgModule::free(ring, *rank).module,
            ModuleSpec::Cyclic { ideal } => FgModule::cyclic(ring, &self.ideal(ideal)?),
            ModuleSpec::Ideal { gens } => {
                let r = FgModule::ring_module(ring);
                let i = r.ideal_image_of(&self.elements(gens)?);
                r.submodule_as_module(&i).module
            }
            ModuleSpec::Quotient { of, ideal } => {
                let base = dep(of)?;
                let i = self.ideal(ideal)?;
                base.quotient(&base.ideal_image(&i)).module
            }
            ModuleSpec::Dual { of } => dep(of)?.matlis_dual(),
            ModuleSpec::Sum { of } => {
                let parts: Vec<FgModule> = of.iter().map(|n| dep(n)).collect::<Result<_>>()?;
                FgModule::direct_sum(&parts, ring).module
            }
            ModuleSpec::Hom { source, target } => {
                let s = dep(source)?;
                s.hom_module(&dep(target)?)
            }
            ModuleSpec::Tensor { left, right } => {
                let l = dep(left)?;
                l.tensor_module(&dep(right)?)
            }
        };
        visiting.remove(name);
        done.insert(name.to_string(), m.clone());
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spec_gets_defaults() {
        let t = parse_spec(
            r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
                "analysis": {"kind": "profile", "sequence": [2]}}"#,
        )
        .unwrap();
        assert_eq!(t.name, "task");
        assert_eq!(t.bounds, Bounds::default());
        assert_eq!(t.output.format, Format::Json);
        let Analysis::Profile { profiles, module, .. } = &t.analysis else { panic!() };
        assert_eq!(profiles.len(), 3);
        assert!(module.is_none());
    }

    #[test]
    fn undeclared_element() {
        let e = parse_spec(
            r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
                "analysis": {"kind": "profile", "sequence": ["y"]}}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::UnknownReference("y".into()));
        let e = parse_spec(
            r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
                "analysis": {"kind": "profile", "sequence": ["x"]}}"#,
        )
        .unwrap_err();
        assert_eq!(e, Error::UnknownReference("x".into()));
    }

    #[test]
    fn weak_profile_with_zero_i_max() {
        let e = parse_spec(
            r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
                "analysis": {"kind": "profile", "sequence": [2], "profiles": ["weak"]},
                "bounds": {"n_max": 3, "i_max": 0}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::BoundViolation(_)));
    }

    #[test]
    fn sweep_spec() {
        let t = parse_spec(
            r#"{"schema": 1, "name": "ex1",
                "analysis": {"kind": "sweep",
                  "family": {"kind": "truncated_two_power", "range": [2, 6], "sequence": ["x", "one"]},
                  "track": {"entries": "all"}}}"#,
        )
        .unwrap();
        let Analysis::Sweep { family, track, .. } = &t.analysis else { panic!() };
        assert_eq!(family.range, (2, 6));
        assert_eq!(track.entries, Some(TrackEntries::All(AllMarker::All)));
        let bad = r#"{"schema": 1, "analysis": {"kind": "sweep",
              "family": {"kind": "truncated_two_power", "range": [3, 2], "sequence": ["x"]}}}"#;
        assert!(matches!(parse_spec(bad), Err(Error::BoundViolation(_))));
    }

    #[test]
    fn parse_errors_carry_location() {
        let e = parse_spec("{\"schema\": 1,\n \"ring\": }").unwrap_err();
        let Error::Parse { location, .. } = e else { panic!("{e:?}") };
        assert!(location.starts_with("line 2"), "{location}");
        let e = parse_spec(r#"{"schema": 2, "analysis": {"kind": "axioms"}}"#).unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let e = parse_spec(r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8}, "analysis": {"kind": "axioms"}, "extra": 1}"#)
            .unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }

    #[test]
    fn elements_and_modules_resolve() {
        let t = parse_spec(
            r#"{"schema": 1,
                "ring": {"kind": "product", "parts": [{"kind": "zmod", "n": 4}, {"kind": "zmod", "n": 3}]},
                "elements": {"a": {"components": [[2], [1]]}, "b": {"pow": ["a", 2]}, "c": {"mul": ["a", 5]}},
                "modules": {"M": {"kind": "cyclic", "ideal": ["a"]}, "N": {"kind": "sum", "of": ["M", "R"]},
                            "D": {"kind": "dual", "of": "N"}},
                "sequences": {"s": ["a", "b"]},
                "analysis": {"kind": "profile", "module": "D", "sequence": "s"}}"#,
        )
        .unwrap();
        let ctx = t.context().unwrap();
        let a = ctx.element(&ElementRef::Name("a".into())).unwrap();
        let b = ctx.element(&ElementRef::Name("b".into())).unwrap();
        assert_eq!(ctx.ring.mul(&a, &a), b);
        let c = ctx.element(&ElementRef::Name("c".into())).unwrap();
        assert_eq!(c, ctx.ring.scale(&BigInt::from(5), &a));
        let mods = ctx.modules().unwrap();
        assert_eq!(mods["D"].order(), mods["N"].order());
        assert_eq!(mods["M"].order(), BigInt::from(2));
    }

    #[test]
    fn cyclic_definitions_are_rejected() {
        let e = parse_spec(
            r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
                "elements": {"a": "b", "b": {"add": ["a", 1]}},
                "analysis": {"kind": "axioms"}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::InvalidSpec(_)));
        let e = parse_spec(
            r#"{"schema": 1, "ring": {"kind": "zmod", "n": 8},
                "modules": {"M": {"kind": "dual", "of": "M"}},
                "analysis": {"kind": "axioms"}}"#,
        )
        .unwrap_err();
        assert!(matches!(e, Error::InvalidSpec(_)));
    }
}
