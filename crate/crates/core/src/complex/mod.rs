//! Chain complexes, Koszul and Čech complexes, inverse systems and their limits.

mod cech;
mod koszul;
mod limit;

pub use cech::{cech_cohomology, CechComplex};
pub use koszul::{
    colon_identification, koszul_complex, koszul_transition, pro_zero_index, subsets, ColonIdentification,
    KoszulComplex, KoszulFamily,
};
pub use limit::{
    cech_homology, cech_homology_with_window, cech_tor_compare, default_window, koszul_homology_system,
    CechTorComparison, InverseSystem, StableLimit,
};

use crate::error::{Error, Result};
use crate::linalg::GroupElement;
use crate::module::{homology_at, FgModule, ModuleHom, Subquotient};

/// `X_n → ... → X_1 → X_0`; `diffs[i]` is `d_{i+1} : X_{i+1} → X_i`.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    modules: Vec<FgModule>,
    diffs: Vec<ModuleHom>,
}

/// `C^0 → C^1 → ... → C^n`; `diffs[j]` is `d^j : C^j → C^{j+1}`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    modules: Vec<FgModule>,
    diffs: Vec<ModuleHom>,
}

/// A degreewise map of chain complexes.
#[derive(Clone, Debug)]
pub struct ComplexMap {
    pub components: Vec<ModuleHom>,
}

fn check_composable(modules: &[FgModule], diffs: &[ModuleHom], forward: bool) -> Result<()> {
    if modules.is_empty() || diffs.len() + 1 != modules.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} modules need {} differentials, got {}",
            modules.len(),
            modules.len().saturating_sub(1),
            diffs.len()
        )));
    }
    for (k, d) in diffs.iter().enumerate() {
        let (s, t) = if forward { (k, k + 1) } else { (k + 1, k) };
        if d.source().group() != modules[s].group() || d.target().group() != modules[t].group() {
            return Err(Error::DimensionMismatch(format!("differential {k} has the wrong shape")));
        }
    }
    for w in diffs.windows(2) {
        let comp = if forward { w[1].compose(&w[0]) } else { w[0].compose(&w[1]) };
        if !comp.is_zero() {
            return Err(Error::DimensionMismatch("d∘d is not zero".into()));
        }
    }
    Ok(())
}

impl ChainComplex {
    pub fn new(modules: Vec<FgModule>, diffs: Vec<ModuleHom>) -> Result<Self> {
        check_composable(&modules, &diffs, false)?;
        Ok(ChainComplex { modules, diffs })
    }

    pub fn top_degree(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, i: usize) -> &FgModule {
        &self.modules[i]
    }

    /// `d_i : X_i → X_{i-1}` for `1 ≤ i ≤ top`.
    pub fn differential(&self, i: usize) -> &ModuleHom {
        &self.diffs[i - 1]
    }

    fn incoming(&self, i: usize) -> ModuleHom {
        if i < self.top_degree() {
            self.diffs[i].clone()
        } else {
            ModuleHom::zero(&FgModule::zero(self.modules[i].ring()), &self.modules[i])
        }
    }

    fn outgoing(&self, i: usize) -> ModuleHom {
        if i > 0 {
            self.diffs[i - 1].clone()
        } else {
            ModuleHom::zero(&self.modules[0], &FgModule::zero(self.modules[0].ring()))
        }
    }

    /// `H_i` as a subquotient of `X_i`.
    pub fn homology(&self, i: usize) -> Subquotient {
        homology_at(&self.incoming(i), &self.outgoing(i))
    }

    pub fn homology_module(&self, i: usize) -> FgModule {
        if i > self.top_degree() {
            return FgModule::zero(self.modules[0].ring());
        }
        self.homology(i).module
    }
}

impl CochainComplex {
    pub fn new(modules: Vec<FgModule>, diffs: Vec<ModuleHom>) -> Result<Self> {
        check_composable(&modules, &diffs, true)?;
        Ok(CochainComplex { modules, diffs })
    }

    pub fn top_degree(&self) -> usize {
        self.modules.len() - 1
    }

    pub fn module(&self, j: usize) -> &FgModule {
        &self.modules[j]
    }

    /// `d^j : C^j → C^{j+1}` for `j < top`.
    pub fn differential(&self, j: usize) -> &ModuleHom {
        &self.diffs[j]
    }

    pub fn cohomology(&self, j: usize) -> Subquotient {
        let incoming = if j > 0 {
            self.diffs[j - 1].clone()
        } else {
            ModuleHom::zero(&FgModule::zero(self.modules[0].ring()), &self.modules[0])
        };
        let outgoing = if j < self.top_degree() {
            self.diffs[j].clone()
        } else {
            ModuleHom::zero(&self.modules[j], &FgModule::zero(self.modules[j].ring()))
        };
        homology_at(&incoming, &outgoing)
    }

    pub fn cohomology_module(&self, j: usize) -> FgModule {
        if j > self.top_degree() {
            return FgModule::zero(self.modules[0].ring());
        }
        self.cohomology(j).module
    }
}

impl ComplexMap {
    /// Checks `f_{i-1} ∘ d_i = d_i ∘ f_i` in every degree.
    pub fn new(source: &ChainComplex, target: &ChainComplex, components: Vec<ModuleHom>) -> Result<Self> {
        if components.len() != source.modules.len() || source.modules.len() != target.modules.len() {
            return Err(Error::DimensionMismatch("complex map needs one component per degree".into()));
        }
        for i in 1..=source.top_degree() {
            let lhs = components[i - 1].compose(source.differential(i));
            let rhs = target.differential(i).compose(&components[i]);
            if lhs.matrix() != rhs.matrix() {
                return Err(Error::DimensionMismatch(format!(
                    "complex map does not commute with d_{i}"
                )));
            }
        }
        Ok(ComplexMap { components })
    }

    /// The induced map `H_i(source) → H_i(target)`.
    pub fn on_homology(&self, source: &ChainComplex, target: &ChainComplex, i: usize) -> ModuleHom {
        let hs = source.homology(i);
        let ht = target.homology(i);
        induced_map(&hs, &ht, &self.components[i])
    }
}

/// The map `N/N' → P/P'` induced by a map `f` of the ambient modules.
pub(crate) fn induced_map(src: &Subquotient, tgt: &Subquotient, f: &ModuleHom) -> ModuleHom {
    let g = src.module.group();
    let cols: Vec<GroupElement> = (0..g.rank())
        .map(|k| {
            let rep = src.representative(&g.generator(k));
            tgt.class_of(&f.apply(&rep)).expect("map respects the subquotients")
        })
        .collect();
    let m = crate::linalg::IntMatrix::from_columns(tgt.module.group().rank(), &cols);
    ModuleHom::from_matrix(&src.module, &tgt.module, m).expect("induced map is R-linear")
}
