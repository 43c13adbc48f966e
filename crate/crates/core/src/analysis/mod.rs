//! Minimal-witness profiles for the proregularity conditions and the checks built on them.

mod checks;
mod profile;

pub use checks::{
    cartier_check, injective_criterion, is_effective_cartier, local_global_check, power_stability_check,
    regular_then_bounded, verify_bound_transfer, Covering, InjectiveMode,
};
pub use profile::{
    bounded_torsion_index, default_m_max, gm_profile, lipman_profile, multiplication_map_vanishes, verify_entry,
    weak_profile, TorsionIndex,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    /// `x^{(m)}M : x_i^m ⊆ x^{(n)}M : x_i^{m-n}` over prefixes.
    Lipman,
    /// `a^m M : x_i^m ⊆ a^n M : x_i^{m-n}` with `a` the prefix ideal.
    GreenleesMay,
    /// `H_i(x^{(m)}; M) → H_i(x^{(n)}; M)` is zero.
    Weak,
    /// `I^m :_R x^m ⊆ I^n :_R x^{m-n}` for an ideal `I`.
    Cartier,
}

impl ProfileKind {
    pub fn label(self) -> &'static str {
        match self {
            ProfileKind::Lipman => "lipman",
            ProfileKind::GreenleesMay => "greenlees_may",
            ProfileKind::Weak => "weak",
            ProfileKind::Cartier => "cartier",
        }
    }
}

/// The minimal `m` found for one `(i, n)`, or the exhausted bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "m", rename_all = "snake_case")]
pub enum Entry {
    Witness(u64),
    Inconclusive(u64),
}

impl Entry {
    pub fn witness(&self) -> Option<u64> {
        match *self {
            Entry::Witness(m) => Some(m),
            Entry::Inconclusive(_) => None,
        }
    }

    pub fn is_conclusive(&self) -> bool {
        matches!(self, Entry::Witness(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The inclusion for `(i, n)` holds at `m`.
    WitnessInclusion { i: usize, n: u64, m: u64 },
    /// An element of the left side whose image misses the right side.
    ViolatingElement {
        i: usize,
        n: u64,
        m: u64,
        #[serde(with = "crate::serde_int::vec")]
        element: Vec<BigInt>,
    },
    /// A failed comparison between two profile entries.
    BoundViolation { i: usize, n: u64, relation: String, lhs: u64, rhs: u64 },
}

/// `entries[d][n-1]` is the entry for degree `degrees[d]` and level `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub kind: ProfileKind,
    pub length: usize,
    pub n_max: u64,
    pub m_max: u64,
    pub degrees: Vec<usize>,
    pub entries: Vec<Vec<Entry>>,
    /// Violating elements for every `m` searched at inconclusive entries.
    pub certificates: Vec<Certificate>,
}

impl Profile {
    pub fn get(&self, i: usize, n: u64) -> Option<Entry> {
        let d = self.degrees.iter().position(|&x| x == i)?;
        self.entries[d].get((n as usize).checked_sub(1)?).copied()
    }

    pub fn witness(&self, i: usize, n: u64) -> Option<u64> {
        self.get(i, n).and_then(|e| e.witness())
    }

    pub fn is_conclusive(&self) -> bool {
        self.entries.iter().flatten().all(Entry::is_conclusive)
    }

    /// `(i, n, entry)` in degree-then-level order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, u64, Entry)> + '_ {
        self.degrees
            .iter()
            .zip(&self.entries)
            .flat_map(|(&i, row)| row.iter().enumerate().map(move |(k, &e)| (i, k as u64 + 1, e)))
    }

    /// Witness certificates for the conclusive entries.
    pub fn witness_certificates(&self) -> Vec<Certificate> {
        self.cells()
            .filter_map(|(i, n, e)| e.witness().map(|m| Certificate::WitnessInclusion { i, n, m }))
            .collect()
    }
}

/// Named verdicts of one check, with supporting data.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub checks: BTreeMap<String, bool>,
    pub certificates: Vec<Certificate>,
    pub profiles: BTreeMap<String, Profile>,
    pub data: BTreeMap<String, serde_json::Value>,
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn new(name: &str) -> Self {
        CheckOutcome {
            name: name.to_string(),
            ..Default::default()
        }
    }

    pub fn set(&mut self, key: impl Into<String>, value: bool) {
        self.checks.insert(key.into(), value);
    }

    pub fn record(&mut self, key: impl Into<String>, value: impl Serialize) {
        self.data
            .insert(key.into(), serde_json::to_value(value).expect("serializable"));
    }

    pub fn passed(&self) -> bool {
        self.checks.values().all(|&b| b)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, &b)| !b)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}
