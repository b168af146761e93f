//! Top-level drivers: the full analysis of a presented ring, the
//! factorization induced by an invertible diagonal Ext table, and the
//! vanishing-window probe.
//!
//! Beyond assembling the individual computations, the drivers cross-check
//! every pair of routes that must agree by theorem: the bigrade against its
//! squeeze bounds, the Gorenstein verdict against invertibility of the
//! diagonal table whenever the table is fully computed, and per-component
//! concentration against the residual transcendence degree. A disagreement
//! is an engine bug and surfaces as an internal error, never as a report.

use crate::exthom::{
    graded_is_invertible, graded_module_decomposition, ExtTable,
    GradedInvertibility, RingDecomposition, Verdict,
};
use crate::hochschild::{
    bigrade, diagonal_ext_table, diagonal_ext_via_canonical, residual_tr_deg, BigradeReport,
    DiagonalScanner, ScanPath,
};
use crate::invariants::{GorensteinReport, InvariantReport, RingAnalysis};
use crate::limits::{EngineError, Limits, Result};
use crate::polycore::field::Field;
use crate::polycore::poly::Polynomial;
use crate::polycore::quotient::QRingRc;

/// Caller-supplied switches for [`analyze`].
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    /// Assert that the ring is generically Gorenstein, enabling the probe
    /// on non-toric presentations.
    pub assume_generically_gorenstein: bool,
    /// Recorded assertion that the ring has connected spectrum; purely
    /// informational, nothing currently depends on it.
    pub assume_connected: bool,
    /// Force a diagonal Ext route instead of the automatic choice
    /// (reduction when Cohen-Macaulay, direct otherwise).
    pub path: Option<ScanPath>,
    /// Cap the diagonal Ext table at this degree instead of the ambient
    /// variable count.
    pub max_diagonal_degree: Option<usize>,
}

/// Everything [`analyze`] can determine about one ring. Later stages are
/// optional: they are skipped when their preconditions fail (with a note in
/// `diagnostics`) or absent when a resource limit stopped the run early
/// (`complete` is false and the limit is recorded in `diagnostics`).
pub struct AnalysisReport<K: Field> {
    pub invariants: InvariantReport<K>,
    pub bigrade: Option<BigradeReport<K>>,
    /// The diagonal Ext table used for the invertibility verdict; covers
    /// degrees 0..=d on the reduction path, or the scanned prefix on the
    /// direct path.
    pub diagonal_table: Option<ExtTable<K>>,
    pub invertibility: Option<GradedInvertibility<K>>,
    pub factorization: Option<FactorizationReport<K>>,
    pub probe: Option<ProbeReport<K>>,
    pub diagnostics: Vec<String>,
    pub complete: bool,
}

/// One factor of a decomposed ring.
pub struct ComponentReport<K: Field> {
    /// Reduced generators of the ideal cutting this component out of the
    /// analyzed ring (ambient representation).
    pub ideal: Vec<Polynomial<K>>,
    pub ring: QRingRc<K>,
    /// The one diagonal Ext degree of the whole ring this component owns.
    pub n: usize,
    /// The component's residual transcendence degree; equals `n`.
    pub t: i64,
    /// `(degree, is_zero)` scan of the component's own diagonal Ext table,
    /// witnessing concentration at `n`.
    pub concentration: Vec<(usize, bool)>,
}

/// The product decomposition induced by an invertible diagonal Ext table,
/// with per-component certificates.
pub struct FactorizationReport<K: Field> {
    pub decomposition: RingDecomposition<K>,
    pub components: Vec<ComponentReport<K>>,
}

/// Outcome flag of the vanishing-window probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeFlag {
    /// Both windows agree with the definitive Gorenstein test.
    Consistent,
    /// Dimension zero: the short window is empty, so no prediction exists.
    Degenerate,
    /// The short window predicts Gorenstein but the definitive test says
    /// otherwise. The report carries full certificates for audit.
    CounterexampleCandidate,
}

impl std::fmt::Display for ProbeFlag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ProbeFlag::Consistent => "CONSISTENT",
            ProbeFlag::Degenerate => "DEGENERATE",
            ProbeFlag::CounterexampleCandidate => "COUNTEREXAMPLE CANDIDATE",
        };
        f.write_str(s)
    }
}

/// Result of probing the vanishing windows against the definitive
/// Gorenstein test.
pub struct ProbeReport<K: Field> {
    /// Residual transcendence degree; both windows open just above it.
    pub t: i64,
    pub dim: i64,
    /// `(n, is_zero)` over the short window (t, t + min(dim, 1)].
    pub window_short: Vec<(usize, bool)>,
    /// `(n, is_zero)` over the full window (t, t + dim].
    pub window_full: Vec<(usize, bool)>,
    /// Whether each window predicts Gorenstein (all entries vanish); absent
    /// when the window is empty.
    pub prediction_short: Option<bool>,
    pub prediction_full: Option<bool>,
    /// The definitive Gorenstein verdict with its certificate.
    pub definitive: bool,
    pub gorenstein: GorensteinReport<K>,
    pub flag: ProbeFlag,
    /// The window entries with their presentations, for audit.
    pub window_table: Option<ExtTable<K>>,
}

/// Run every applicable computation on one ring and cross-check the routes
/// that must agree. Resource-limit errors after the invariants stage stop
/// the run and leave a partial report with `complete` false.
pub fn analyze<K: Field>(
    ring: &QRingRc<K>,
    opts: &AnalyzeOptions,
    limits: &Limits,
) -> Result<AnalysisReport<K>> {
    let mut analysis = RingAnalysis::new(ring, limits)?;
    let invariants = analysis.report(limits)?;
    let mut report = AnalysisReport {
        invariants,
        bigrade: None,
        diagonal_table: None,
        invertibility: None,
        factorization: None,
        probe: None,
        diagnostics: Vec::new(),
        complete: true,
    };
    if opts.assume_connected {
        report.diagnostics.push("assumed: connected spectrum".into());
    }

    let cm = report.invariants.cm.verdict;
    let path = opts.path.unwrap_or(if cm { ScanPath::Reduction } else { ScanPath::Direct });
    let d = ring.nvars();
    let hi = opts.max_diagonal_degree.map_or(d, |m| m.min(d));

    macro_rules! stage {
        ($expr:expr, $what:literal) => {
            match $expr {
                Ok(v) => Some(v),
                Err(e) if e.is_resource_limit() => {
                    report
                        .diagnostics
                        .push(format!("{} stopped by resource limit: {e}", $what));
                    report.complete = false;
                    return Ok(report);
                }
                Err(e) => return Err(e),
            }
        };
    }

    let big = stage!(bigrade(ring, path, limits), "bigrade scan").unwrap();
    check_bigrade_bounds(&report.invariants, &big)?;
    report.bigrade = Some(big);

    // Invertibility of the diagonal table. On the reduction path the table
    // over 0..=d is cheap and usually exhaustive; on the direct path, reuse
    // the scanned prefix, which can still certify non-invertibility.
    let table = match path {
        ScanPath::Reduction => {
            stage!(diagonal_ext_via_canonical(ring, 0, hi, limits), "diagonal Ext table").unwrap()
        }
        ScanPath::Direct => report.bigrade.as_ref().unwrap().table.clone(),
    };
    // A resource blow-up inside the Fitting-ideal expansion leaves the
    // verdict honestly unknown; record why and keep going.
    let inv = match graded_is_invertible(&table, limits) {
        Ok(v) => v,
        Err(e) if e.is_resource_limit() => {
            report
                .diagnostics
                .push(format!("invertibility test stopped by resource limit: {e}"));
            report.complete = false;
            GradedInvertibility {
                verdict: Verdict::Inconclusive,
                degrees: table.nonzero_degrees(),
                certificate: None,
            }
        }
        Err(e) => return Err(e),
    };
    if inv.verdict != Verdict::Inconclusive {
        let gor = report.invariants.gorenstein.verdict;
        if (inv.verdict == Verdict::True) != gor {
            return Err(EngineError::Internal(
                "the Gorenstein test disagrees with invertibility of the \
                 diagonal Ext table"
                    .into(),
            ));
        }
    }
    let invertible = inv.verdict == Verdict::True;
    report.diagonal_table = Some(table);
    report.invertibility = Some(inv);

    if invertible {
        let fact = stage!(
            factorization_from_table(report.diagonal_table.as_ref().unwrap(), limits),
            "factorization"
        )
        .unwrap();
        report.factorization = Some(fact);
    } else {
        report
            .diagnostics
            .push("factorization skipped: diagonal Ext table not certified invertible".into());
    }

    if cm && (opts.assume_generically_gorenstein || ring.toric) {
        let probe = stage!(
            conjecture_probe(ring, opts.assume_generically_gorenstein, limits),
            "vanishing-window probe"
        )
        .unwrap();
        report.probe = Some(probe);
    } else {
        report.diagnostics.push(
            "probe skipped: needs a Cohen-Macaulay ring and the generically \
             Gorenstein hypothesis"
                .into(),
        );
    }

    Ok(report)
}

fn check_bigrade_bounds<K: Field>(
    inv: &InvariantReport<K>,
    big: &BigradeReport<K>,
) -> Result<()> {
    let b = big.bigrade as i64;
    let d = inv.d as i64;
    let lo = d - inv.cm.pd as i64;
    if b < lo || b > d {
        return Err(EngineError::Internal(format!(
            "bigrade {b} escapes the squeeze [{lo}, {d}]"
        )));
    }
    if let Some(depth) = inv.depth {
        if b < depth || b > inv.dim {
            return Err(EngineError::Internal(format!(
                "bigrade {b} escapes [depth {depth}, dim {}]",
                inv.dim
            )));
        }
        if inv.cm.verdict && b != inv.dim {
            return Err(EngineError::Internal(format!(
                "Cohen-Macaulay ring with bigrade {b} different from dim {}",
                inv.dim
            )));
        }
    }
    Ok(())
}

/// Factor a ring along its diagonal Ext table: compute the table over the
/// full scan range, decompose, and certify each component. Fails with a
/// precondition error when the table is not invertible.
pub fn gorenstein_factorization<K: Field>(
    ring: &QRingRc<K>,
    limits: &Limits,
) -> Result<FactorizationReport<K>> {
    let table = scan_for_factorization(ring, limits)?;
    factorization_from_table(&table, limits)
}

/// Build the diagonal Ext table degree by degree, preferring the cheap
/// canonical-module route, and give up with a precondition error as soon as
/// the entries seen so far rule out invertibility. The Fitting ideals of a
/// direct sum multiply out over the summands, so a partial sum with
/// vanishing Fitt_0 and non-unit Fitt_1 already convicts the full table.
fn scan_for_factorization<K: Field>(
    ring: &QRingRc<K>,
    limits: &Limits,
) -> Result<ExtTable<K>> {
    let mut scanner = match DiagonalScanner::new(ring, ScanPath::Reduction, limits) {
        Ok(s) => s,
        Err(EngineError::Precondition(_)) => {
            DiagonalScanner::new(ring, ScanPath::Direct, limits)?
        }
        Err(e) => return Err(e),
    };
    let d = ring.nvars();
    let source = scanner.source;
    let mut entries = Vec::with_capacity(d + 1);
    let mut n_hi = d;
    for n in 0..=d {
        let e = scanner.entry(n, limits)?;
        let fresh = !e.is_zero;
        entries.push(e);
        if fresh {
            let partial = ExtTable {
                ring: ring.clone(),
                n_lo: 0,
                n_hi: n,
                entries: entries.clone(),
                exhaustive: scanner.covered(n),
                source,
            };
            // A resource blow-up here only means the early check is
            // unavailable; the decomposition itself will settle the matter.
            match graded_is_invertible(&partial, limits) {
                Ok(inv) if inv.verdict == Verdict::False => {
                    return Err(EngineError::Precondition(
                        "the diagonal Ext table is not invertible, so the \
                         ring does not factor along it"
                            .into(),
                    ));
                }
                Ok(_) => {}
                Err(e) if e.is_resource_limit() => {}
                Err(e) => return Err(e),
            }
        }
        if scanner.covered(n) {
            n_hi = n;
            break;
        }
    }
    Ok(ExtTable {
        ring: ring.clone(),
        n_lo: 0,
        n_hi,
        entries,
        exhaustive: scanner.covered(n_hi),
        source,
    })
}

fn factorization_from_table<K: Field>(
    table: &ExtTable<K>,
    limits: &Limits,
) -> Result<FactorizationReport<K>> {
    let decomposition = graded_module_decomposition(table, limits)?;
    let mut components = Vec::with_capacity(decomposition.components.len());
    for (i, comp_ring) in decomposition.components.iter().enumerate() {
        let n = decomposition.degrees[i];
        let t = residual_tr_deg(comp_ring, limits)?;
        if t.t != n as i64 {
            return Err(EngineError::Internal(format!(
                "component {i} sits in diagonal degree {n} but has residual \
                 transcendence degree {}",
                t.t
            )));
        }
        // Recompute the component's own diagonal Ext table and confirm it
        // is concentrated in that single degree.
        let bound = comp_ring.nvars();
        let ctable = match diagonal_ext_via_canonical(comp_ring, 0, bound, limits) {
            Ok(t) => t,
            Err(EngineError::Precondition(_)) => {
                diagonal_ext_table(comp_ring, 0, bound, limits)?
            }
            Err(e) => return Err(e),
        };
        if ctable.nonzero_degrees() != vec![n] {
            return Err(EngineError::Internal(format!(
                "component {i} diagonal Ext is not concentrated in degree {n}"
            )));
        }
        let concentration = ctable.entries.iter().map(|e| (e.n, e.is_zero)).collect();
        components.push(ComponentReport {
            ideal: decomposition.component_ideals[i].clone(),
            ring: comp_ring.clone(),
            n,
            t: t.t,
            concentration,
        });
    }
    Ok(FactorizationReport { decomposition, components })
}

/// Probe the two vanishing windows above the residual transcendence degree
/// and compare their predictions with the definitive Gorenstein test.
/// Requires a Cohen-Macaulay ring that is generically Gorenstein (asserted
/// or toric).
pub fn conjecture_probe<K: Field>(
    ring: &QRingRc<K>,
    assume_generically_gorenstein: bool,
    limits: &Limits,
) -> Result<ProbeReport<K>> {
    let mut analysis = RingAnalysis::new(ring, limits)?;
    let cm = analysis.cm_test(limits)?;
    if !cm.verdict {
        return Err(EngineError::Precondition(
            "the vanishing-window probe requires a Cohen-Macaulay ring".into(),
        ));
    }
    if !assume_generically_gorenstein && !ring.toric {
        return Err(EngineError::Precondition(
            "the probe needs the generically Gorenstein hypothesis; assert \
             it or present the ring as a monomial kernel"
                .into(),
        ));
    }
    let rtd = residual_tr_deg(ring, limits)?;
    let t = rtd.t;
    let dim = analysis.dim();
    let gorenstein = analysis.gorenstein_test(limits)?;
    let definitive = gorenstein.verdict;

    let (window_full, window_table) = if dim > 0 {
        let lo = (t + 1) as usize;
        let hi = (t + dim) as usize;
        let table = diagonal_ext_via_canonical(ring, lo, hi, limits)?;
        let w: Vec<(usize, bool)> = table.entries.iter().map(|e| (e.n, e.is_zero)).collect();
        (w, Some(table))
    } else {
        (Vec::new(), None)
    };
    let short_len = dim.min(1) as usize;
    let window_short: Vec<(usize, bool)> = window_full[..short_len].to_vec();

    let all_zero = |w: &[(usize, bool)]| w.iter().all(|&(_, z)| z);
    let prediction_short = (!window_short.is_empty()).then(|| all_zero(&window_short));
    let prediction_full = (!window_full.is_empty()).then(|| all_zero(&window_full));

    if let Some(pf) = prediction_full {
        if pf != definitive {
            // Full-window vanishing is equivalent to the Gorenstein verdict
            // for generically Gorenstein rings, so either the engine or a
            // falsely asserted hypothesis is to blame.
            return Err(EngineError::Internal(
                "full-window vanishing disagrees with the definitive \
                 Gorenstein test; if generic Gorensteinness was asserted \
                 rather than derived, the assertion may be false"
                    .into(),
            ));
        }
    }
    let flag = match prediction_short {
        None => ProbeFlag::Degenerate,
        Some(true) if !definitive => ProbeFlag::CounterexampleCandidate,
        Some(false) if definitive => {
            return Err(EngineError::Internal(
                "a Gorenstein ring shows nonvanishing inside the short window".into(),
            ));
        }
        _ => ProbeFlag::Consistent,
    };

    Ok(ProbeReport {
        t,
        dim,
        window_short,
        window_full,
        prediction_short,
        prediction_full,
        definitive,
        gorenstein,
        flag,
        window_table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groebner::kernel_of_monomial_map;
    use crate::polycore::field::PrimeField;
    use crate::polycore::parse::poly_from_str;
    use crate::polycore::poly::PolyRing;
    use crate::polycore::quotient::QuotientRing;

    fn ring_p(p: u64, vars: &[&str], ideal: &[&str]) -> QRingRc<PrimeField> {
        let r = PolyRing::standard(PrimeField::new(p).unwrap(), vars).unwrap();
        let gens = ideal.iter().map(|s| poly_from_str(&r, s).unwrap()).collect();
        QuotientRing::new(r, gens).unwrap()
    }

    fn twisted_cubic() -> QRingRc<PrimeField> {
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["t", "u"]).unwrap();
        let mons = vec![
            r.mono_from_exps(&[3, 0]),
            r.mono_from_exps(&[2, 1]),
            r.mono_from_exps(&[1, 2]),
            r.mono_from_exps(&[0, 3]),
        ];
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        kernel_of_monomial_map(&r, &mons, &names, &Limits::none()).unwrap()
    }

    fn lim() -> Limits {
        Limits::none()
    }

    #[test]
    fn complete_intersection_analysis() {
        // K[x,y,z]/(x^2 - y*z, y^2): a two-generator complete intersection.
        let q = ring_p(101, &["x", "y", "z"], &["x^2 - y*z", "y^2"]);
        let rep = analyze(&q, &AnalyzeOptions::default(), &lim()).unwrap();
        assert!(rep.complete);
        assert!(rep.invariants.cm.verdict);
        assert!(rep.invariants.gorenstein.verdict);
        let big = rep.bigrade.as_ref().unwrap();
        assert_eq!(big.bigrade as i64, rep.invariants.dim);
        let inv = rep.invertibility.as_ref().unwrap();
        assert_eq!(inv.verdict, Verdict::True);
        let fact = rep.factorization.as_ref().unwrap();
        assert_eq!(fact.components.len(), 1);
        assert_eq!(fact.components[0].n as i64, rep.invariants.dim);
    }

    #[test]
    fn twisted_cubic_analysis() {
        let q = twisted_cubic();
        let rep = analyze(&q, &AnalyzeOptions::default(), &lim()).unwrap();
        assert!(rep.invariants.cm.verdict);
        assert!(!rep.invariants.gorenstein.verdict);
        // The table over 0..=d is not exhaustive (the canonical module has
        // an infinite resolution), but partial Fitting data already rules
        // out invertibility.
        let inv = rep.invertibility.as_ref().unwrap();
        assert_eq!(inv.verdict, Verdict::False);
        assert!(rep.factorization.is_none());
        // Toric provenance lets the probe run without extra assertions.
        let probe = rep.probe.as_ref().unwrap();
        assert_eq!(probe.t, 2);
        assert_eq!(probe.prediction_full, Some(false));
        assert!(!probe.definitive);
        // Nonvanishing occurs somewhere inside (t, t + dim].
        assert!(probe.window_full.iter().any(|&(_, z)| !z));
        // Degree t + 1 vanishes here even though the ring is not Gorenstein:
        // Ext^1 into the ring of the transfer module is zero while Ext^2 is
        // not. The narrow window therefore flags a candidate while the wide
        // window agrees with the definitive test.
        assert_eq!(probe.window_short, vec![(3, true)]);
        assert_eq!(probe.prediction_short, Some(true));
        assert_eq!(probe.flag, ProbeFlag::CounterexampleCandidate);
    }

    #[test]
    fn paper_style_product_factorization() {
        // K[x,y]/(xy, y^2 - y) is K x K[x]; the diagonal Ext table lives in
        // degrees 0 and 1 and splits the ring accordingly.
        let q = ring_p(101, &["x", "y"], &["x*y", "y^2 - y"]);
        let fact = gorenstein_factorization(&q, &lim()).unwrap();
        assert_eq!(fact.components.len(), 2);
        let pairs: Vec<(usize, i64)> = fact.components.iter().map(|c| (c.n, c.t)).collect();
        assert_eq!(pairs, vec![(0, 0), (1, 1)]);
        assert!(fact.decomposition.verify(&lim()).unwrap());
        // Component rings: a point and a line.
        let dims: Vec<i64> = fact
            .components
            .iter()
            .map(|c| crate::resolve::krull_dim(&c.ring, &lim()).unwrap())
            .collect();
        assert_eq!(dims, vec![0, 1]);
    }

    #[test]
    fn factorization_rejects_non_invertible_tables() {
        let q = twisted_cubic();
        assert!(matches!(
            gorenstein_factorization(&q, &lim()),
            Err(EngineError::Precondition(_))
        ));
    }

    #[test]
    fn probe_on_gorenstein_hypersurface() {
        let q = ring_p(101, &["x", "y"], &["x*y"]);
        let probe = conjecture_probe(&q, true, &lim()).unwrap();
        assert_eq!(probe.t, 1);
        assert_eq!(probe.dim, 1);
        assert_eq!(probe.flag, ProbeFlag::Consistent);
        assert_eq!(probe.prediction_short, Some(true));
        assert_eq!(probe.prediction_full, Some(true));
        assert!(probe.definitive);
    }

    #[test]
    fn probe_degenerate_in_dimension_zero() {
        // Artinian non-Gorenstein ring with the generic assertion: both
        // windows are empty, so no prediction is made.
        let q = ring_p(101, &["x", "y"], &["x^2", "x*y", "y^2"]);
        let probe = conjecture_probe(&q, true, &lim()).unwrap();
        assert_eq!(probe.flag, ProbeFlag::Degenerate);
        assert_eq!(probe.prediction_short, None);
        assert_eq!(probe.prediction_full, None);
        assert!(!probe.definitive);
        assert!(probe.window_short.is_empty() && probe.window_full.is_empty());
    }

    #[test]
    fn probe_needs_cohen_macaulay() {
        let q = ring_p(101, &["x", "y"], &["x^2", "x*y"]);
        assert!(matches!(
            conjecture_probe(&q, true, &lim()),
            Err(EngineError::Precondition(_))
        ));
    }

    #[test]
    fn probe_needs_generic_hypothesis() {
        let q = ring_p(101, &["x", "y"], &["x*y"]);
        assert!(matches!(
            conjecture_probe(&q, false, &lim()),
            Err(EngineError::Precondition(_))
        ));
    }

    #[test]
    fn analysis_survives_resource_limits() {
        // A limit tight enough to stop the later stages but loose enough
        // for the invariants leaves a partial, incomplete report.
        let q = twisted_cubic();
        let full = Limits::none();
        let rep_full = analyze(&q, &AnalyzeOptions::default(), &full).unwrap();
        assert!(rep_full.complete);
        let tight = Limits::none().with_max_basis(2);
        match analyze(&q, &AnalyzeOptions::default(), &tight) {
            Ok(rep) => {
                assert!(!rep.complete);
                assert!(!rep.diagnostics.is_empty());
            }
            Err(e) => assert!(e.is_resource_limit()),
        }
    }

    #[test]
    fn two_planes_analysis_is_inconclusive_on_invertibility() {
        let q = ring_p(101, &["x", "y", "u", "v"], &["x*u", "x*v", "y*u", "y*v"]);
        let rep = analyze(&q, &AnalyzeOptions::default(), &lim()).unwrap();
        assert!(!rep.invariants.cm.verdict);
        assert_eq!(rep.bigrade.as_ref().unwrap().bigrade, 2);
        assert_eq!(rep.invariants.depth, Some(1));
        // The prefix table cannot certify either way here: the lone nonzero
        // entry is too wide for exact Fitting expansion under the cap.
        let inv = rep.invertibility.as_ref().unwrap();
        assert_eq!(inv.verdict, Verdict::Inconclusive);
        assert!(rep.factorization.is_none());
        assert!(rep.probe.is_none());
    }
}
