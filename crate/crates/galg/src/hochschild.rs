//! The enveloping algebra of a presented ring, Ext against it along the
//! diagonal, the bigrade invariant, and the residual transcendence degree.
//!
//! For S presented on variables x_1..x_d the enveloping algebra S (x) S is
//! presented on doubled variables, with a primed copy of each name, and the
//! defining ideal appearing once in each block. S itself becomes the cyclic
//! module over the enveloping algebra cut out by the differences between
//! each variable and its primed copy (the diagonal). Ext along the diagonal
//! can be computed two ways: directly over the enveloping algebra, or, for
//! Cohen-Macaulay rings, by a degree shift from Ext over S itself against
//! the canonical module. Both paths land in modules over S and expose the
//! same isomorphism invariants.
//!
//! The bigrade of S is the least n with a nonvanishing diagonal Ext module;
//! it always falls in [0, d], squeezes between d - pd and d, and between
//! depth and dim for graded presentations.

use crate::exthom::{ExtComputer, ExtEntry, ExtSource, ExtTable};
use crate::groebner::ModuleVector;
use crate::invariants::RingAnalysis;
use crate::limits::{EngineError, Limits, Result};
use crate::polycore::field::Field;
use crate::polycore::poly::{PolyRing, Polynomial};
use crate::polycore::quotient::{QRingRc, QuotientRing};
use crate::resolve::{Matrix, PresentedModule};

/// The enveloping algebra of a presented ring, together with the diagonal
/// module it acts on.
pub struct EnvelopingAlgebra<K: Field> {
    /// The ring S whose enveloping algebra this is.
    pub base: QRingRc<K>,
    /// S (x) S, presented on doubled variables.
    pub ring: QRingRc<K>,
    /// The differences between each variable and its primed copy.
    pub diagonal_ideal: Vec<Polynomial<K>>,
    /// S as the cyclic module over the enveloping algebra on one generator,
    /// with the diagonal ideal as relations.
    pub diagonal: PresentedModule<K>,
}

/// Build the enveloping algebra of a ring: double every variable (the copy
/// gets a primed name and the same weight), repeat the defining ideal in
/// each block, and present the diagonal module.
pub fn enveloping_algebra<K: Field>(base: &QRingRc<K>) -> Result<EnvelopingAlgebra<K>> {
    let amb = &base.ambient;
    let d = amb.nvars();
    let mut names = amb.vars.clone();
    names.extend(amb.vars.iter().map(|v| format!("{v}'")));
    let mut weights = amb.weights.clone();
    weights.extend_from_slice(&amb.weights);
    let env_amb = PolyRing::new(amb.field.clone(), names, weights, amb.order.clone())?;

    let left: Vec<usize> = (0..d).collect();
    let right: Vec<usize> = (d..2 * d).collect();
    let mut gens = Vec::with_capacity(2 * base.ideal_gens.len());
    for f in &base.ideal_gens {
        gens.push(f.map_vars(&env_amb, &left)?);
    }
    for f in &base.ideal_gens {
        gens.push(f.map_vars(&env_amb, &right)?);
    }
    let ring = QuotientRing::new(env_amb.clone(), gens)?;

    let diagonal_ideal: Vec<Polynomial<K>> = (0..d)
        .map(|i| {
            Polynomial::var(&env_amb, i).sub(&Polynomial::var(&env_amb, d + i))
        })
        .collect::<Result<_>>()?;
    let diagonal = PresentedModule::cyclic(&ring, &diagonal_ideal)?;
    Ok(EnvelopingAlgebra { base: base.clone(), ring, diagonal_ideal, diagonal })
}

impl<K: Field> EnvelopingAlgebra<K> {
    /// Carry a module presented over the enveloping algebra, and annihilated
    /// by the diagonal ideal, back to a presentation over the base ring:
    /// every primed variable collapses onto its unprimed partner and the
    /// relation entries are reduced modulo the base ideal.
    pub fn collapse_to_base(&self, module: &PresentedModule<K>) -> Result<PresentedModule<K>> {
        let d = self.base.nvars();
        let fold: Vec<usize> = (0..2 * d).map(|i| i % d).collect();
        let mut cols = Vec::with_capacity(module.relations.cols.len());
        for col in &module.relations.cols {
            let comps = col
                .components
                .iter()
                .map(|p| p.map_vars(&self.base.ambient, &fold))
                .collect::<Result<Vec<_>>>()?;
            let v = ModuleVector::from_polys(comps).nf_componentwise(&self.base);
            if !v.is_zero() {
                cols.push(v);
            }
        }
        Ok(PresentedModule {
            ring: self.base.clone(),
            gens: module.gens,
            relations: Matrix { rows: module.gens, cols },
            degrees: module.degrees.clone(),
        })
    }
}

/// Driver for the direct path: Ext along the diagonal computed over the
/// enveloping algebra itself, one degree at a time, with every entry
/// collapsed back to a module over the base ring.
struct DirectScan<K: Field> {
    env: EnvelopingAlgebra<K>,
    comp: ExtComputer<K>,
}

impl<K: Field> DirectScan<K> {
    fn new(base: &QRingRc<K>, limits: &Limits) -> Result<Self> {
        let env = enveloping_algebra(base)?;
        let scalars = PresentedModule::ring_module(&env.ring);
        let comp = ExtComputer::new(&env.diagonal, &scalars, limits)?;
        Ok(DirectScan { env, comp })
    }

    fn entry(&mut self, n: usize, limits: &Limits) -> Result<ExtEntry<K>> {
        if self.comp.zero_by_series(n, limits)? == Some(true) {
            return Ok(ExtEntry::zero(n, &self.env.base, self.env.base.homogeneous));
        }
        let raw = self.comp.ext(n, limits)?;
        let folded = self.env.collapse_to_base(&raw)?;
        ExtEntry::from_module(n, &folded, limits)
    }
}

/// Driver for the reduction path, available for Cohen-Macaulay rings:
/// the diagonal Ext module in degree n is isomorphic to Ext^{n-b} over the
/// base ring against the canonical module, where b = d - pd.
struct ReductionScan<K: Field> {
    base: QRingRc<K>,
    comp: ExtComputer<K>,
    shift: usize,
}

impl<K: Field> ReductionScan<K> {
    fn new(base: &QRingRc<K>, limits: &Limits) -> Result<Self> {
        let mut analysis = RingAnalysis::new(base, limits)?;
        let cm = analysis.cm_test(limits)?;
        if !cm.verdict {
            return Err(EngineError::Precondition(
                "the reduction path requires a Cohen-Macaulay ring".into(),
            ));
        }
        let shift = base.nvars() - cm.pd;
        let canonical = analysis.canonical_module(limits)?;
        let scalars = PresentedModule::ring_module(base);
        let comp = ExtComputer::new(&canonical, &scalars, limits)?;
        Ok(ReductionScan { base: base.clone(), comp, shift })
    }

    fn entry(&mut self, n: usize, limits: &Limits) -> Result<ExtEntry<K>> {
        let graded = self.base.homogeneous;
        if n < self.shift {
            return Ok(ExtEntry::zero(n, &self.base, graded));
        }
        let k = n - self.shift;
        if self.comp.zero_by_series(k, limits)? == Some(true) {
            return Ok(ExtEntry::zero(n, &self.base, graded));
        }
        let raw = self.comp.ext(k, limits)?;
        let mut entry = ExtEntry::from_module(k, &raw, limits)?;
        entry.n = n;
        Ok(entry)
    }
}

/// Which route to use for diagonal Ext scans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanPath {
    /// Compute over the enveloping algebra; always applicable.
    Direct,
    /// Shiftward transfer through the canonical module; Cohen-Macaulay only.
    Reduction,
}

enum ScannerImpl<K: Field> {
    Direct(DirectScan<K>),
    Reduction(ReductionScan<K>),
}

/// Incremental diagonal Ext scanner over either route. Degrees can be
/// requested one at a time (ascending), so callers can stop a scan as soon
/// as the entries seen settle their question.
pub struct DiagonalScanner<K: Field> {
    imp: ScannerImpl<K>,
    pub source: ExtSource,
}

impl<K: Field> DiagonalScanner<K> {
    pub fn new(base: &QRingRc<K>, path: ScanPath, limits: &Limits) -> Result<Self> {
        Ok(match path {
            ScanPath::Direct => DiagonalScanner {
                imp: ScannerImpl::Direct(DirectScan::new(base, limits)?),
                source: ExtSource::EnvelopingDirect,
            },
            ScanPath::Reduction => DiagonalScanner {
                imp: ScannerImpl::Reduction(ReductionScan::new(base, limits)?),
                source: ExtSource::CanonicalTransfer,
            },
        })
    }

    pub fn entry(&mut self, n: usize, limits: &Limits) -> Result<ExtEntry<K>> {
        match &mut self.imp {
            ScannerImpl::Direct(s) => s.entry(n, limits),
            ScannerImpl::Reduction(s) => s.entry(n, limits),
        }
    }

    /// Whether every diagonal Ext degree above `n_hi` is known to vanish:
    /// the underlying resolution has terminated within reach. A table over
    /// [0, n_hi] is then exhaustive.
    pub fn covered(&self, n_hi: usize) -> bool {
        match &self.imp {
            ScannerImpl::Direct(s) => {
                let res = s.comp.resolution();
                res.complete && n_hi + 1 >= res.length()
            }
            ScannerImpl::Reduction(s) => {
                let res = s.comp.resolution();
                res.complete && n_hi + 1 >= s.shift + res.length()
            }
        }
    }
}

fn table_over<K: Field>(
    base: &QRingRc<K>,
    path: ScanPath,
    n_lo: usize,
    n_hi: usize,
    limits: &Limits,
) -> Result<ExtTable<K>> {
    let mut scan = DiagonalScanner::new(base, path, limits)?;
    let mut entries = Vec::with_capacity(n_hi - n_lo + 1);
    for n in n_lo..=n_hi {
        entries.push(scan.entry(n, limits)?);
    }
    Ok(ExtTable {
        ring: base.clone(),
        n_lo,
        n_hi,
        entries,
        exhaustive: scan.covered(n_hi),
        source: scan.source,
    })
}

/// Ext along the diagonal over the enveloping algebra, computed directly,
/// for every degree in [n_lo, n_hi]. Entries are modules over the base ring.
pub fn diagonal_ext_table<K: Field>(
    base: &QRingRc<K>,
    n_lo: usize,
    n_hi: usize,
    limits: &Limits,
) -> Result<ExtTable<K>> {
    table_over(base, ScanPath::Direct, n_lo, n_hi, limits)
}

/// Ext along the diagonal computed through the canonical module: for a
/// Cohen-Macaulay ring the degree-n diagonal Ext module is isomorphic to
/// Ext^{n-b} over the base ring against the canonical module, with
/// b = d - pd. Degrees below b vanish.
pub fn diagonal_ext_via_canonical<K: Field>(
    base: &QRingRc<K>,
    n_lo: usize,
    n_hi: usize,
    limits: &Limits,
) -> Result<ExtTable<K>> {
    table_over(base, ScanPath::Reduction, n_lo, n_hi, limits)
}

/// The bigrade of a ring: the least degree with nonvanishing diagonal Ext,
/// together with the scanned table that witnesses it.
pub struct BigradeReport<K: Field> {
    pub bigrade: usize,
    /// Entries for 0..=bigrade; all but the last are zero.
    pub table: ExtTable<K>,
    /// The scan never needs to pass this bound (the ambient variable count).
    pub scan_bound: usize,
    pub path: ExtSource,
}

/// Scan diagonal Ext degrees from zero upward and stop at the first
/// nonvanishing one. The scan bound is the ambient variable count; a clean
/// miss inside the bound would contradict the squeeze d - pd <= bigrade <= d
/// and is reported as an internal error.
pub fn bigrade<K: Field>(
    base: &QRingRc<K>,
    path: ScanPath,
    limits: &Limits,
) -> Result<BigradeReport<K>> {
    let mut scanner = DiagonalScanner::new(base, path, limits)?;
    let source = scanner.source;
    let bound = base.nvars();
    let mut entries = Vec::new();
    for n in 0..=bound {
        let e = scanner.entry(n, limits)?;
        let hit = !e.is_zero;
        entries.push(e);
        if hit {
            let table = ExtTable {
                ring: base.clone(),
                n_lo: 0,
                n_hi: n,
                entries,
                exhaustive: scanner.covered(n),
                source,
            };
            return Ok(BigradeReport { bigrade: n, table, scan_bound: bound, path: source });
        }
    }
    Err(EngineError::Internal(
        "no nonvanishing diagonal Ext degree within the scan bound".into(),
    ))
}

/// The residual transcendence degree of a presented ring: d - pd when the
/// ring is Cohen-Macaulay, the Krull dimension when it is a domain (known
/// here through toric provenance). When both routes apply they must agree.
#[derive(Debug, Clone, Copy)]
pub struct ResidualTrDeg {
    pub t: i64,
    pub via_cm: bool,
    pub via_domain: bool,
}

pub fn residual_tr_deg<K: Field>(base: &QRingRc<K>, limits: &Limits) -> Result<ResidualTrDeg> {
    let mut analysis = RingAnalysis::new(base, limits)?;
    let via_cm = analysis.cm_test(limits)?.verdict;
    let via_domain = base.toric;
    if !via_cm && !via_domain {
        return Err(EngineError::Precondition(
            "the residual transcendence degree needs a Cohen-Macaulay ring \
             or a domain presentation"
                .into(),
        ));
    }
    let t_cm = if via_cm {
        Some(base.nvars() as i64 - analysis.projective_dimension(limits)? as i64)
    } else {
        None
    };
    let t_domain = if via_domain { Some(analysis.dim()) } else { None };
    if let (Some(a), Some(b)) = (t_cm, t_domain) {
        if a != b {
            return Err(EngineError::Internal(
                "the two residual transcendence degree formulas disagree".into(),
            ));
        }
    }
    Ok(ResidualTrDeg { t: t_cm.or(t_domain).unwrap(), via_cm, via_domain })
}
