//! Homological invariants of a quotient ring over its ambient polynomial
//! ring: Krull dimension, grade (codimension), projective dimension, depth,
//! the Cohen-Macaulay and Gorenstein tests with re-checkable certificates,
//! the canonical module, and the vanishing test for Ext against it.
//!
//! Everything here is driven by one free resolution of the quotient ring
//! viewed as a module over its ambient polynomial ring; [`RingAnalysis`]
//! owns that resolution and caches each derived invariant so a full report
//! costs a single pass.

use crate::exthom::{is_invertible, ExtComputer, InvertibilityCertificate};
use crate::limits::{EngineError, Limits, Result};
use crate::polycore::field::Field;
use crate::polycore::quotient::{QRingRc, QuotientRing};
use crate::resolve::{krull_dim, Matrix, PresentedModule};

/// Outcome of the Cohen-Macaulay test, with the vanishing window that
/// witnesses it: the ring is Cohen-Macaulay exactly when every dual Ext
/// module strictly between the codimension and the ambient variable count
/// vanishes, equivalently when grade equals projective dimension.
#[derive(Debug, Clone)]
pub struct CmReport {
    pub verdict: bool,
    /// Codimension: ambient variables minus Krull dimension, cross-checked
    /// as the first nonvanishing dual Ext degree.
    pub grade: usize,
    /// Projective dimension over the ambient polynomial ring.
    pub pd: usize,
    /// `(n, is_zero)` for each n with grade < n <= ambient variables.
    pub window: Vec<(usize, bool)>,
}

/// Outcome of the Gorenstein test. When the ring is Cohen-Macaulay the
/// verdict is decided by invertibility of the canonical module and the
/// certificate carries the Fitting-ideal evidence; otherwise the verdict
/// is false and no certificate is produced.
#[derive(Debug, Clone)]
pub struct GorensteinReport<K: Field> {
    pub verdict: bool,
    pub certificate: Option<InvertibilityCertificate<K>>,
}

/// Vanishing of Ext against the canonical module in the window 1..=dim.
/// Only meaningful for Cohen-Macaulay rings that are generically Gorenstein;
/// the latter is either asserted by the caller or implied by a toric
/// (monomial-kernel) presentation, which is a domain.
#[derive(Debug, Clone)]
pub struct DualVanishingReport {
    pub verdict: bool,
    /// `(n, is_zero)` for 1 <= n <= dim.
    pub window: Vec<(usize, bool)>,
    /// True when the generically Gorenstein hypothesis came from the toric
    /// provenance of the presentation rather than a caller assertion.
    pub via_toric: bool,
}

/// Full invariant report for one ring.
#[derive(Debug, Clone)]
pub struct InvariantReport<K: Field> {
    /// Number of ambient variables.
    pub d: usize,
    /// Krull dimension.
    pub dim: i64,
    /// Depth; only defined for rings with a graded presentation.
    pub depth: Option<i64>,
    pub cm: CmReport,
    pub gorenstein: GorensteinReport<K>,
}

/// Shared homological state for one quotient ring: the ring as a module
/// over its ambient polynomial ring, a growing free resolution of it, and
/// caches for every invariant derived from that resolution.
pub struct RingAnalysis<K: Field> {
    ring: QRingRc<K>,
    d: usize,
    dim: i64,
    comp: ExtComputer<K>,
    grade_c: Option<usize>,
    pd_c: Option<usize>,
    cm_c: Option<CmReport>,
    canonical_c: Option<PresentedModule<K>>,
}

impl<K: Field> RingAnalysis<K> {
    pub fn new(ring: &QRingRc<K>, limits: &Limits) -> Result<Self> {
        let dim = krull_dim(ring, limits)?;
        if dim < 0 {
            return Err(EngineError::Input(
                "the defining ideal is the unit ideal, so the ring is zero".into(),
            ));
        }
        let ambient = QuotientRing::polynomial_ring(ring.ambient.clone());
        let module = PresentedModule::cyclic(&ambient, &ring.ideal_gens)?;
        let scalars = PresentedModule::ring_module(&ambient);
        let comp = ExtComputer::new(&module, &scalars, limits)?;
        Ok(RingAnalysis {
            ring: ring.clone(),
            d: ring.nvars(),
            dim,
            comp,
            grade_c: None,
            pd_c: None,
            cm_c: None,
            canonical_c: None,
        })
    }

    pub fn ring(&self) -> &QRingRc<K> {
        &self.ring
    }

    /// Number of ambient variables.
    pub fn ambient_vars(&self) -> usize {
        self.d
    }

    /// Krull dimension of the ring.
    pub fn dim(&self) -> i64 {
        self.dim
    }

    fn ext_is_zero(&mut self, n: usize, limits: &Limits) -> Result<bool> {
        ext_zero_via(&mut self.comp, n, limits)
    }

    /// Grade (codimension) of the ring inside its ambient polynomial ring,
    /// computed as ambient variables minus Krull dimension and cross-checked
    /// against the first nonvanishing dual Ext degree. Disagreement would
    /// mean an engine bug, so it is reported as an internal error.
    pub fn grade(&mut self, limits: &Limits) -> Result<usize> {
        if let Some(g) = self.grade_c {
            return Ok(g);
        }
        let g = (self.d as i64 - self.dim) as usize;
        for n in 0..g {
            if !self.ext_is_zero(n, limits)? {
                return Err(EngineError::Internal(format!(
                    "grade cross-check failed: Ext^{n} against the ambient ring \
                     is nonzero below the codimension {g}"
                )));
            }
        }
        if self.ext_is_zero(g, limits)? {
            return Err(EngineError::Internal(format!(
                "grade cross-check failed: Ext^{g} against the ambient ring \
                 vanishes at the codimension"
            )));
        }
        self.grade_c = Some(g);
        Ok(g)
    }

    /// Projective dimension of the ring over its ambient polynomial ring.
    /// For a graded presentation this is the length of the minimal graded
    /// resolution; in general it is the largest degree with nonvanishing
    /// dual Ext, which never exceeds the number of ambient variables.
    pub fn projective_dimension(&mut self, limits: &Limits) -> Result<usize> {
        if let Some(p) = self.pd_c {
            return Ok(p);
        }
        self.comp.extend(self.d + 1, limits)?;
        let p = if self.ring.homogeneous && self.comp.resolution().complete {
            self.comp.resolution().length() - 1
        } else if self.ring.homogeneous {
            return Err(EngineError::Internal(
                "graded resolution over the polynomial ring did not terminate \
                 within the global dimension bound"
                    .into(),
            ));
        } else {
            let mut p = 0;
            for n in (0..=self.d).rev() {
                if !self.ext_is_zero(n, limits)? {
                    p = n;
                    break;
                }
            }
            p
        };
        if self.ext_is_zero(p, limits)? {
            return Err(EngineError::Internal(
                "resolution length disagrees with the support of dual Ext".into(),
            ));
        }
        self.pd_c = Some(p);
        Ok(p)
    }

    /// Depth via the Auslander-Buchsbaum formula; graded presentations only.
    pub fn depth(&mut self, limits: &Limits) -> Result<i64> {
        if !self.ring.homogeneous {
            return Err(EngineError::Precondition(
                "depth is only computed for graded presentations".into(),
            ));
        }
        Ok(self.d as i64 - self.projective_dimension(limits)? as i64)
    }

    /// Cohen-Macaulay test: the vanishing window of dual Ext strictly above
    /// the grade, cross-checked against grade = projective dimension.
    pub fn cm_test(&mut self, limits: &Limits) -> Result<CmReport> {
        if let Some(r) = &self.cm_c {
            return Ok(r.clone());
        }
        let grade = self.grade(limits)?;
        let pd = self.projective_dimension(limits)?;
        let mut window = Vec::new();
        let mut all_zero = true;
        for n in (grade + 1)..=self.d {
            let z = self.ext_is_zero(n, limits)?;
            window.push((n, z));
            all_zero &= z;
        }
        if all_zero != (grade == pd) {
            return Err(EngineError::Internal(
                "Cohen-Macaulay window disagrees with grade = projective dimension".into(),
            ));
        }
        let report = CmReport { verdict: all_zero, grade, pd, window };
        self.cm_c = Some(report.clone());
        Ok(report)
    }

    /// The canonical module: the top nonvanishing dual Ext module against
    /// the ambient polynomial ring, carried back to a presentation over the
    /// quotient ring itself. Requires the ring to be Cohen-Macaulay.
    pub fn canonical_module(&mut self, limits: &Limits) -> Result<PresentedModule<K>> {
        if let Some(c) = &self.canonical_c {
            return Ok(c.clone());
        }
        let cm = self.cm_test(limits)?;
        if !cm.verdict {
            return Err(EngineError::Precondition(
                "the canonical module is only computed for Cohen-Macaulay rings".into(),
            ));
        }
        let top = self.comp.ext(cm.pd, limits)?;
        let c = transfer_to_quotient(&self.ring, &top)?.minimized()?;
        self.canonical_c = Some(c.clone());
        Ok(c)
    }

    /// Gorenstein test: Cohen-Macaulay plus invertibility of the canonical
    /// module, certified through its Fitting ideals.
    pub fn gorenstein_test(&mut self, limits: &Limits) -> Result<GorensteinReport<K>> {
        let cm = self.cm_test(limits)?;
        if !cm.verdict {
            return Ok(GorensteinReport { verdict: false, certificate: None });
        }
        let canonical = self.canonical_module(limits)?;
        let cert = is_invertible(&canonical, limits)?;
        Ok(GorensteinReport { verdict: cert.invertible, certificate: Some(cert) })
    }

    /// Vanishing of Ext^n against the canonical module for 1 <= n <= dim.
    /// Preconditions: the ring is Cohen-Macaulay, and it is generically
    /// Gorenstein, either asserted by the caller or implied by a toric
    /// presentation.
    pub fn dual_vanishing_test(
        &mut self,
        assume_generically_gorenstein: bool,
        limits: &Limits,
    ) -> Result<DualVanishingReport> {
        let cm = self.cm_test(limits)?;
        if !cm.verdict {
            return Err(EngineError::Precondition(
                "the dual-vanishing test requires a Cohen-Macaulay ring".into(),
            ));
        }
        let via_toric = self.ring.toric;
        if !assume_generically_gorenstein && !via_toric {
            return Err(EngineError::Precondition(
                "the dual-vanishing test needs the generically Gorenstein \
                 hypothesis; assert it or present the ring as a monomial kernel"
                    .into(),
            ));
        }
        let canonical = self.canonical_module(limits)?;
        let scalars = PresentedModule::ring_module(&self.ring);
        let mut comp = ExtComputer::new(&canonical, &scalars, limits)?;
        let mut window = Vec::new();
        let mut verdict = true;
        for n in 1..=(self.dim as usize) {
            let z = ext_zero_via(&mut comp, n, limits)?;
            window.push((n, z));
            verdict &= z;
        }
        Ok(DualVanishingReport { verdict, window, via_toric })
    }

    /// One-shot report of every invariant.
    pub fn report(&mut self, limits: &Limits) -> Result<InvariantReport<K>> {
        let gorenstein = self.gorenstein_test(limits)?;
        let cm = self.cm_test(limits)?;
        let depth = if self.ring.homogeneous {
            Some(self.depth(limits)?)
        } else {
            None
        };
        Ok(InvariantReport { d: self.d, dim: self.dim, depth, cm, gorenstein })
    }
}

/// Decide vanishing of one Ext module, preferring the Hilbert-series test
/// when it applies and falling back to an exact presentation.
fn ext_zero_via<K: Field>(
    comp: &mut ExtComputer<K>,
    n: usize,
    limits: &Limits,
) -> Result<bool> {
    match comp.zero_by_series(n, limits)? {
        Some(z) => Ok(z),
        None => Ok(comp.ext(n, limits)?.is_zero(limits)?),
    }
}

/// Reinterpret a module presented over the ambient polynomial ring, but
/// annihilated by the defining ideal, as a module over the quotient ring:
/// the generators carry over and the relation entries are reduced modulo
/// the ideal.
pub fn transfer_to_quotient<K: Field>(
    target: &QRingRc<K>,
    module: &PresentedModule<K>,
) -> Result<PresentedModule<K>> {
    if !std::sync::Arc::ptr_eq(&target.ambient, &module.ring.ambient)
        && target.ambient.as_ref() != module.ring.ambient.as_ref()
    {
        return Err(EngineError::RingMismatch(
            "module is not presented over the ambient ring of the target quotient".into(),
        ));
    }
    let cols: Vec<_> = module
        .relations
        .cols
        .iter()
        .map(|c| c.nf_componentwise(target))
        .filter(|c| !c.is_zero())
        .collect();
    let relations = Matrix { rows: module.gens, cols };
    Ok(PresentedModule {
        ring: target.clone(),
        gens: module.gens,
        relations,
        degrees: module.degrees.clone(),
    })
}

/// Krull dimension of a ring.
pub fn dimension<K: Field>(ring: &QRingRc<K>, limits: &Limits) -> Result<i64> {
    krull_dim(ring, limits)
}

/// Grade (codimension) of a ring inside its ambient polynomial ring.
pub fn grade<K: Field>(ring: &QRingRc<K>, limits: &Limits) -> Result<usize> {
    RingAnalysis::new(ring, limits)?.grade(limits)
}

/// Projective dimension of a ring over its ambient polynomial ring.
pub fn projective_dimension<K: Field>(ring: &QRingRc<K>, limits: &Limits) -> Result<usize> {
    RingAnalysis::new(ring, limits)?.projective_dimension(limits)
}

/// Depth of a graded ring via the Auslander-Buchsbaum formula.
pub fn depth<K: Field>(ring: &QRingRc<K>, limits: &Limits) -> Result<i64> {
    RingAnalysis::new(ring, limits)?.depth(limits)
}

/// Cohen-Macaulay test with its vanishing-window witness.
pub fn cm_test<K: Field>(ring: &QRingRc<K>, limits: &Limits) -> Result<CmReport> {
    RingAnalysis::new(ring, limits)?.cm_test(limits)
}

/// Gorenstein test with its invertibility certificate.
pub fn gorenstein_test<K: Field>(
    ring: &QRingRc<K>,
    limits: &Limits,
) -> Result<GorensteinReport<K>> {
    RingAnalysis::new(ring, limits)?.gorenstein_test(limits)
}

/// The canonical module of a Cohen-Macaulay ring, presented over the ring.
pub fn canonical_module<K: Field>(
    ring: &QRingRc<K>,
    limits: &Limits,
) -> Result<PresentedModule<K>> {
    RingAnalysis::new(ring, limits)?.canonical_module(limits)
}

/// Vanishing test for Ext against the canonical module over 1..=dim.
pub fn dual_vanishing_test<K: Field>(
    ring: &QRingRc<K>,
    assume_generically_gorenstein: bool,
    limits: &Limits,
) -> Result<DualVanishingReport> {
    RingAnalysis::new(ring, limits)?.dual_vanishing_test(assume_generically_gorenstein, limits)
}

/// One-shot invariant report for a ring.
pub fn ring_invariants<K: Field>(
    ring: &QRingRc<K>,
    limits: &Limits,
) -> Result<InvariantReport<K>> {
    RingAnalysis::new(ring, limits)?.report(limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::kernel_of_monomial_map;
    use crate::polycore::field::PrimeField;
    use crate::polycore::parse::poly_from_str;
    use crate::polycore::poly::PolyRing;

    fn ring_p(p: u64, vars: &[&str], ideal: &[&str]) -> QRingRc<PrimeField> {
        let r = PolyRing::standard(PrimeField::new(p).unwrap(), vars).unwrap();
        let gens = ideal.iter().map(|s| poly_from_str(&r, s).unwrap()).collect();
        QuotientRing::new(r, gens).unwrap()
    }

    #[test]
    fn polynomial_ring_is_gorenstein() {
        let q = ring_p(101, &["x"], &[]);
        let lim = Limits::none();
        let rep = ring_invariants(&q, &lim).unwrap();
        assert_eq!(rep.d, 1);
        assert_eq!(rep.dim, 1);
        assert_eq!(rep.depth, Some(1));
        assert_eq!(rep.cm.grade, 0);
        assert_eq!(rep.cm.pd, 0);
        assert!(rep.cm.verdict);
        assert!(rep.gorenstein.verdict);
        let cert = rep.gorenstein.certificate.unwrap();
        assert!(cert.verify(&q).unwrap());
    }

    #[test]
    fn two_planes_meeting_at_a_point() {
        // K[x,y,u,v]/(xu, xv, yu, yv): two planes glued at the origin.
        let q = ring_p(101, &["x", "y", "u", "v"], &["x*u", "x*v", "y*u", "y*v"]);
        let lim = Limits::none();
        let mut a = RingAnalysis::new(&q, &lim).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.grade(&lim).unwrap(), 2);
        assert_eq!(a.projective_dimension(&lim).unwrap(), 3);
        assert_eq!(a.depth(&lim).unwrap(), 1);
        let cm = a.cm_test(&lim).unwrap();
        assert!(!cm.verdict);
        // The witness window covers (2, 4]; Ext^3 is the nonzero one.
        assert_eq!(cm.window, vec![(3, false), (4, true)]);
        let gor = a.gorenstein_test(&lim).unwrap();
        assert!(!gor.verdict);
        assert!(gor.certificate.is_none());
    }

    #[test]
    fn twisted_cubic_is_cm_not_gorenstein() {
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["t", "u"]).unwrap();
        let mons = vec![
            r.mono_from_exps(&[3, 0]),
            r.mono_from_exps(&[2, 1]),
            r.mono_from_exps(&[1, 2]),
            r.mono_from_exps(&[0, 3]),
        ];
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        let lim = Limits::none();
        let q = kernel_of_monomial_map(&r, &mons, &names, &lim).unwrap();
        let mut a = RingAnalysis::new(&q, &lim).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.grade(&lim).unwrap(), 2);
        assert_eq!(a.projective_dimension(&lim).unwrap(), 2);
        let cm = a.cm_test(&lim).unwrap();
        assert!(cm.verdict);
        // The canonical module needs two generators, so the ring is not
        // Gorenstein and Fitting ideal 1 fails to reach the unit.
        let c = a.canonical_module(&lim).unwrap();
        assert_eq!(c.gens, 2);
        let gor = a.gorenstein_test(&lim).unwrap();
        assert!(!gor.verdict);
        let cert = gor.certificate.unwrap();
        assert!(!cert.invertible);
        assert!(cert.unit_combination.is_none());
        assert!(cert.verify(&q).unwrap());
        // Ext against the canonical module does not vanish everywhere in
        // the window 1..=dim.
        let dv = a.dual_vanishing_test(false, &lim).unwrap();
        assert!(dv.via_toric);
        assert!(!dv.verdict);
    }

    #[test]
    fn depth_zero_line_with_embedded_point() {
        // K[x,y]/(x^2, xy): a line with an embedded point at the origin.
        let q = ring_p(101, &["x", "y"], &["x^2", "x*y"]);
        let lim = Limits::none();
        let mut a = RingAnalysis::new(&q, &lim).unwrap();
        assert_eq!(a.dim(), 1);
        assert_eq!(a.grade(&lim).unwrap(), 1);
        assert_eq!(a.projective_dimension(&lim).unwrap(), 2);
        assert_eq!(a.depth(&lim).unwrap(), 0);
        assert!(!a.cm_test(&lim).unwrap().verdict);
        assert!(a.canonical_module(&lim).is_err());
    }

    #[test]
    fn hypersurfaces_are_gorenstein() {
        let lim = Limits::none();
        for ideal in [&["x*y"][..], &["x^2 - y^3"][..]] {
            let q = ring_p(101, &["x", "y"], ideal);
            let rep = ring_invariants(&q, &lim).unwrap();
            assert_eq!(rep.dim, 1);
            assert_eq!(rep.cm.grade, 1);
            assert!(rep.cm.verdict);
            assert!(rep.gorenstein.verdict);
            assert!(rep.gorenstein.certificate.unwrap().verify(&q).unwrap());
        }
    }

    #[test]
    fn complete_intersection_invariants() {
        // K[x,y]/(x^2, y^3): artinian complete intersection.
        let q = ring_p(101, &["x", "y"], &["x^2", "y^3"]);
        let lim = Limits::none();
        let rep = ring_invariants(&q, &lim).unwrap();
        assert_eq!(rep.dim, 0);
        assert_eq!(rep.depth, Some(0));
        assert_eq!(rep.cm.grade, 2);
        assert_eq!(rep.cm.pd, 2);
        assert!(rep.cm.verdict);
        assert!(rep.gorenstein.verdict);
        // The canonical module of a zero-dimensional Gorenstein ring is
        // free of rank one over the ring.
        let c = canonical_module(&q, &lim).unwrap();
        assert_eq!(c.gens, 1);
    }

    #[test]
    fn fat_point_is_cm_not_gorenstein() {
        // K[x,y]/(x^2, xy, y^2): artinian with a two-dimensional socle.
        let q = ring_p(101, &["x", "y"], &["x^2", "x*y", "y^2"]);
        let lim = Limits::none();
        let rep = ring_invariants(&q, &lim).unwrap();
        assert_eq!(rep.dim, 0);
        assert!(rep.cm.verdict);
        assert!(!rep.gorenstein.verdict);
        let c = canonical_module(&q, &lim).unwrap();
        assert_eq!(c.gens, 2);
    }

    #[test]
    fn grade_plus_dimension_is_ambient_count() {
        let lim = Limits::none();
        let cases: Vec<QRingRc<PrimeField>> = vec![
            ring_p(101, &["x", "y", "z"], &["x*y - z^2"]),
            ring_p(101, &["x", "y", "z"], &["x*y", "x*z"]),
            ring_p(101, &["x", "y"], &["x^2", "x*y"]),
            ring_p(101, &["x", "y", "u", "v"], &["x*u", "x*v", "y*u", "y*v"]),
        ];
        for q in cases {
            let mut a = RingAnalysis::new(&q, &lim).unwrap();
            let g = a.grade(&lim).unwrap();
            assert_eq!(g as i64 + a.dim(), q.nvars() as i64);
        }
    }

    #[test]
    fn inhomogeneous_component_invariants() {
        // K[x,y]/(x, y-1): a point off the origin; the presentation is not
        // graded so depth is unavailable but grade and pd still work.
        let q = ring_p(101, &["x", "y"], &["x", "y - 1"]);
        let lim = Limits::none();
        let mut a = RingAnalysis::new(&q, &lim).unwrap();
        assert_eq!(a.dim(), 0);
        assert_eq!(a.grade(&lim).unwrap(), 2);
        assert_eq!(a.projective_dimension(&lim).unwrap(), 2);
        assert!(a.depth(&lim).is_err());
        assert!(a.cm_test(&lim).unwrap().verdict);
        let gor = a.gorenstein_test(&lim).unwrap();
        assert!(gor.verdict);
    }

    #[test]
    fn gorenstein_dual_vanishing_holds() {
        // For a Gorenstein ring the canonical module is free, so all the
        // window Ext modules vanish.
        let q = ring_p(101, &["x", "y"], &["x*y"]);
        let lim = Limits::none();
        let mut a = RingAnalysis::new(&q, &lim).unwrap();
        let dv = a.dual_vanishing_test(true, &lim).unwrap();
        assert!(dv.verdict);
        assert_eq!(dv.window.len(), 1);
    }

    #[test]
    fn zero_ring_is_rejected() {
        // The generators hide a unit: x*y - (x*y - 1) = 1.
        let q = ring_p(101, &["x", "y"], &["x*y", "x*y - 1"]);
        let lim = Limits::none();
        assert!(matches!(
            RingAnalysis::new(&q, &lim),
            Err(EngineError::Input(_))
        ));
    }
}
