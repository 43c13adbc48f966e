//! Inverse systems of finite modules, their stabilized limits, and Čech homology.

use num_bigint::BigInt;

use super::{ChainComplex, KoszulFamily};
use crate::error::{Error, Result};
use crate::module::{FgModule, ModuleHom, ModuleSum, Submodule};
use crate::ring::RingElement;

/// Modules `M_1, ..., M_N` with transitions `M_{n+1} → M_n`.
#[derive(Clone, Debug)]
pub struct InverseSystem {
    modules: Vec<FgModule>,
    steps: Vec<ModuleHom>,
}

/// `lim M_n`, realized as the stable image in `M_level`.
#[derive(Clone, Debug)]
pub struct StableLimit {
    pub module: FgModule,
    pub inclusion: ModuleHom,
    /// First level from which the stable images map bijectively onto each other.
    pub level: usize,
    /// Largest level whose image from the top of the window has been seen to stabilize.
    pub stable_upto: usize,
}

impl InverseSystem {
    /// `steps[k]` is the transition `M_{k+2} → M_{k+1}`.
    pub fn new(modules: Vec<FgModule>, steps: Vec<ModuleHom>) -> Result<Self> {
        if modules.is_empty() || steps.len() + 1 != modules.len() {
            return Err(Error::DimensionMismatch("an inverse system of N modules needs N-1 transitions".into()));
        }
        for (k, s) in steps.iter().enumerate() {
            if s.source().group() != modules[k + 1].group() || s.target().group() != modules[k].group() {
                return Err(Error::DimensionMismatch(format!("transition {} → {} has the wrong shape", k + 2, k + 1)));
            }
        }
        Ok(InverseSystem { modules, steps })
    }

    pub fn n_max(&self) -> usize {
        self.modules.len()
    }

    /// `M_n` for `1 ≤ n ≤ N`.
    pub fn module(&self, n: usize) -> &FgModule {
        &self.modules[n - 1]
    }

    /// `τ_{m,n} : M_m → M_n`.
    pub fn transition(&self, m: usize, n: usize) -> ModuleHom {
        assert!(m >= n && n >= 1 && m <= self.n_max());
        let mut t = ModuleHom::identity(self.module(m));
        for k in (n..m).rev() {
            t = self.steps[k - 1].compose(&t);
        }
        t
    }

    /// Checks `τ_{n,n} = id` and `τ_{m,n} ∘ τ_{l,m} = τ_{l,n}` on the given triples.
    pub fn is_consistent(&self, triples: &[(usize, usize, usize)]) -> bool {
        triples.iter().all(|&(l, m, n)| {
            let id = self.transition(n, n);
            id.matrix() == ModuleHom::identity(self.module(n)).matrix()
                && self.transition(m, n).compose(&self.transition(l, m)).matrix() == self.transition(l, n).matrix()
        })
    }

    /// The stabilized limit.
    ///
    /// With `N` the top of the window, the stable image at level `n` is `I_n = im τ_{N,n}`, accepted
    /// when it equals `im τ_{N-1,n}`. The limit is `I_L` for the least `L` from which the restricted
    /// transitions `I_{n+1} → I_n` are bijective up to the last stable level.
    pub fn stable_limit(&self) -> Result<StableLimit> {
        let top = self.n_max();
        let fail = Err(Error::NotStabilized { n_max: top });
        if top < 3 {
            return fail;
        }
        let mut from_top = Vec::with_capacity(top);
        let mut t = ModuleHom::identity(self.module(top));
        let mut t_prev = ModuleHom::identity(self.module(top - 1));
        let mut images: Vec<Submodule> = vec![self.module(top).whole(); top];
        for n in (1..top).rev() {
            t = self.steps[n - 1].compose(&t);
            if n < top - 1 {
                t_prev = self.steps[n - 1].compose(&t_prev);
            }
            let i_n = t.image();
            let stable = i_n == t_prev.image();
            images[n - 1] = i_n;
            from_top.push((n, stable));
        }
        let stable_upto = from_top
            .iter()
            .filter(|&&(_, s)| s)
            .map(|&(n, _)| n)
            .max()
            .unwrap_or(0);
        if stable_upto < 2 || from_top.iter().any(|&(n, s)| n <= stable_upto && !s) {
            return fail;
        }
        for n in 1..stable_upto {
            if self.steps[n - 1].image_of(&images[n]) != images[n - 1] {
                return fail;
            }
        }
        let mut level = stable_upto;
        while level > 1 {
            let a = self.module(level).submodule_order(&images[level - 1]);
            let b = self.module(level - 1).submodule_order(&images[level - 2]);
            if a != b {
                break;
            }
            level -= 1;
        }
        if level == stable_upto {
            return fail;
        }
        let m = self.module(level);
        let sub = m.submodule_as_module(&images[level - 1]);
        Ok(StableLimit {
            module: sub.module,
            inclusion: sub.inclusion,
            level,
            stable_upto,
        })
    }
}

/// A window long enough for the images of Koszul homology of `M` to stabilize.
pub fn default_window(m: &FgModule) -> usize {
    2 * m.group().log2_order() + 4
}

/// `n ↦ H_i(x^{(n)}; M)` for `1 ≤ n ≤ window` with the Koszul transitions.
pub fn koszul_homology_system(xs: &[RingElement], m: &FgModule, i: usize, window: usize) -> Result<InverseSystem> {
    let fam = KoszulFamily::new(xs, m)?;
    if i > fam.length() {
        let z = FgModule::zero(m.ring());
        let steps = vec![ModuleHom::identity(&z); window.saturating_sub(1)];
        return InverseSystem::new(vec![z; window], steps);
    }
    let hs: Vec<_> = (1..=window as u64).map(|n| fam.homology(i, n)).collect();
    let steps = (1..window)
        .map(|n| fam.homology_transition(i, n as u64 + 1, n as u64, &hs[n], &hs[n - 1]))
        .collect();
    InverseSystem::new(hs.into_iter().map(|h| h.module).collect(), steps)
}

/// `Ȟ_i^x(M) = lim_n H_i(x^{(n)}; M)`.
pub fn cech_homology(xs: &[RingElement], m: &FgModule, i: usize) -> Result<FgModule> {
    cech_homology_with_window(xs, m, i, default_window(m))
}

pub fn cech_homology_with_window(xs: &[RingElement], m: &FgModule, i: usize, window: usize) -> Result<FgModule> {
    Ok(koszul_homology_system(xs, m, i, window)?.stable_limit()?.module)
}

/// Both sides of `Ȟ_i(M ⊗ L_•) ≅ Tor_i(Λ(M), N)`.
#[derive(Clone, Debug)]
pub struct CechTorComparison {
    pub lhs: FgModule,
    pub rhs: FgModule,
    pub isomorphic: bool,
}

/// Applies `Ȟ_0` degreewise to `M ⊗ L_•` for a free resolution `L_•` of `n`, and compares its
/// `i`-th homology with `Tor_i(Λ(M), N)` computed by resolving `Λ(M)`.
pub fn cech_tor_compare(
    m: &FgModule,
    n: &FgModule,
    xs: &[RingElement],
    i: usize,
    resolution_length: usize,
) -> Result<CechTorComparison> {
    if resolution_length <= i {
        return Err(Error::InvalidSpec(format!("resolution length {resolution_length} must exceed {i}")));
    }
    let ring = m.ring();
    let res = n.free_resolution(resolution_length);
    let top = (i + 1).min(res.ranks.len() - 1);
    let sums: Vec<ModuleSum> = (0..=top)
        .map(|q| FgModule::direct_sum(&vec![m.clone(); res.ranks[q]], ring))
        .collect();
    let window = default_window(m);
    let mut level = 1;
    for s in &sums {
        let lim = koszul_homology_system(xs, &s.module, 0, window)?.stable_limit()?;
        level = level.max(lim.level);
    }
    let quotients: Vec<_> = sums
        .iter()
        .map(|s| s.module.quotient(&s.module.power_image(xs, &vec![level as u64; xs.len()])))
        .collect();
    let mut diffs = Vec::with_capacity(top);
    for q in 1..=top {
        let d = res.differentials[q - 1].on_sums(&sums[q], &sums[q - 1], m);
        let (src, tgt) = (&quotients[q], &quotients[q - 1]);
        let g = src.module.group();
        let cols: Vec<Vec<BigInt>> = (0..g.rank())
            .map(|k| tgt.projection.apply(&d.apply(&src.lift(&g.generator(k)))))
            .collect();
        let mat = crate::linalg::IntMatrix::from_columns(tgt.module.group().rank(), &cols);
        diffs.push(ModuleHom::from_matrix(&src.module, &tgt.module, mat)?);
    }
    let complex = ChainComplex::new(quotients.into_iter().map(|q| q.module).collect(), diffs)?;
    let lhs = complex.homology_module(i);
    let lambda = m.adic_completion(&ring.ideal(xs)).module;
    let rhs = lambda.tor(n, i);
    let isomorphic = lhs.signature() == rhs.signature();
    Ok(CechTorComparison { lhs, rhs, isomorphic })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ring::FiniteRing;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn ring(m: u64) -> Arc<FiniteRing> {
        Arc::new(FiniteRing::zmod(m).unwrap())
    }

    #[test]
    fn constant_system() {
        let m = FgModule::ring_module(&ring(6));
        let s = InverseSystem::new(vec![m.clone(); 5], vec![ModuleHom::identity(&m); 4]).unwrap();
        assert!(s.is_consistent(&[(5, 3, 1), (4, 4, 2)]));
        let lim = s.stable_limit().unwrap();
        assert_eq!(lim.module.order(), BigInt::from(6));
        assert_eq!(lim.level, 1);
    }

    #[test]
    fn annihilator_system_has_zero_limit() {
        let r = ring(8);
        let m = FgModule::ring_module(&r);
        let lim = koszul_homology_system(&[ints(&[2])], &m, 1, 10).unwrap().stable_limit().unwrap();
        assert!(lim.module.is_zero_module());
    }

    #[test]
    fn quotient_system_limit() {
        let r = ring(12);
        let m = FgModule::ring_module(&r);
        let s = koszul_homology_system(&[ints(&[2])], &m, 0, 8).unwrap();
        let lim = s.stable_limit().unwrap();
        assert_eq!(lim.module.order(), BigInt::from(4));
        assert_eq!(lim.level, 2);
        assert!(s.is_consistent(&[(8, 5, 2), (3, 2, 1)]));
    }

    #[test]
    fn short_window_is_rejected() {
        let r = ring(8);
        let m = FgModule::ring_module(&r);
        let s = koszul_homology_system(&[ints(&[2])], &m, 1, 3).unwrap();
        assert!(matches!(s.stable_limit(), Err(Error::NotStabilized { n_max: 3 })));
    }

    #[test]
    fn cech_homology_examples() {
        let r = ring(12);
        let m = FgModule::ring_module(&r);
        let h0 = cech_homology(&[ints(&[2])], &m, 0).unwrap();
        let lambda = m.adic_completion(&r.ideal(&[ints(&[2])])).module;
        assert_eq!(h0.signature(), lambda.signature());
        let m8 = FgModule::ring_module(&ring(8));
        assert!(cech_homology(&[ints(&[2])], &m8, 1).unwrap().is_zero_module());
        assert!(cech_homology(&[ints(&[5])], &m, 0).unwrap().is_zero_module());
        assert!(cech_homology(&[ints(&[5])], &m, 1).unwrap().is_zero_module());
    }

    #[test]
    fn cech_tor_examples() {
        let r = ring(12);
        let m = FgModule::ring_module(&r);
        let c = cech_tor_compare(&m, &m, &[ints(&[2])], 0, 2).unwrap();
        assert!(c.isomorphic);
        assert_eq!(c.lhs.order(), BigInt::from(4));
        let z2 = FgModule::cyclic(&r, &r.ideal(&[ints(&[2])]));
        let c = cech_tor_compare(&m, &z2, &[ints(&[2])], 0, 2).unwrap();
        assert!(c.isomorphic);
        assert_eq!(c.lhs.order(), BigInt::from(2));
        let r8 = ring(8);
        let m8 = FgModule::ring_module(&r8);
        let z2 = FgModule::cyclic(&r8, &r8.ideal(&[ints(&[2])]));
        let c = cech_tor_compare(&m8, &z2, &[ints(&[2])], 1, 3).unwrap();
        assert!(c.isomorphic);
        assert!(c.lhs.is_zero_module());
        let c = cech_tor_compare(&z2, &z2, &[ints(&[2])], 1, 3).unwrap();
        assert!(c.isomorphic);
        assert_eq!(c.lhs.order(), BigInt::from(2));
    }
}
