//! Free resolutions, presentations, and Hilbert-series machinery.
//!
//! Resolutions are built by iterated syzygy computation. After each step the
//! new matrix is swept for invertible constant entries; sweeping a pivot
//! deletes one generator of the middle free module and one column of the new
//! matrix, so ranks stay minimal as the resolution grows. Over a graded ring
//! a pivot-free resolution is the minimal one, which is what makes projective
//! dimension and Betti numbers readable off the ranks. Over a quotient ring
//! resolutions can be infinite; construction is capped and the cap recorded.
//!
//! Hilbert series are handled through numerators over the common denominator
//! prod_i (1 - T^{w_i}). The numerator of a cokernel is assembled from the
//! leading terms of a Groebner basis of the column span, one monomial-ideal
//! recursion per component, which keeps the series exact (no truncation) and
//! cheap compared to building resolutions.

use crate::groebner::{minimal_generators, syzygies, GbCtx, ModuleGb, ModuleVector};
use crate::limits::{EngineError, Limits, Result};
use crate::polycore::field::Field;
use crate::polycore::monomial::Monomial;
use crate::polycore::poly::Polynomial;
use crate::polycore::quotient::QRingRc;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Matrices over the ambient ring, read modulo the quotient ideal.

/// A matrix with polynomial entries; column j is the image of the j-th basis
/// vector, stored as a module vector of length `rows`.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<K: Field> {
    pub rows: usize,
    pub cols: Vec<ModuleVector<K>>,
}

impl<K: Field> Matrix<K> {
    pub fn new(rows: usize, cols: Vec<ModuleVector<K>>) -> Result<Self> {
        for c in &cols {
            if c.rank() != rows {
                return Err(EngineError::Precondition(format!(
                    "column of rank {} in a {}-row matrix",
                    c.rank(),
                    rows
                )));
            }
        }
        Ok(Matrix { rows, cols })
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, r: usize, c: usize) -> &Polynomial<K> {
        &self.cols[c].components[r]
    }

    pub fn transpose(&self, q: &QRingRc<K>) -> Matrix<K> {
        let ring = &q.ambient;
        let mut cols = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let comps: Vec<Polynomial<K>> =
                (0..self.ncols()).map(|c| self.entry(r, c).clone()).collect();
            cols.push(ModuleVector::from_polys(comps));
        }
        let _ = ring;
        Matrix { rows: self.ncols(), cols }
    }

    pub fn nf_entries(&self, q: &QRingRc<K>) -> Matrix<K> {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.nf_componentwise(q)).collect(),
        }
    }

    /// Image of a coordinate vector (length = ncols).
    pub fn apply(&self, coords: &ModuleVector<K>, q: &QRingRc<K>) -> Result<ModuleVector<K>> {
        let ring = &q.ambient;
        let mut acc = ModuleVector::zero(ring, self.rows);
        for (j, a) in coords.components.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for r in 0..self.rows {
                let t = a.mul(self.entry(r, j))?;
                acc.components[r] = acc.components[r].add(&t)?;
            }
        }
        Ok(acc.nf_componentwise(q))
    }

    /// self after other: columns are self applied to other's columns.
    pub fn compose(&self, other: &Matrix<K>, q: &QRingRc<K>) -> Result<Matrix<K>> {
        if self.ncols() != other.rows {
            return Err(EngineError::Precondition("composing mismatched matrices".into()));
        }
        let cols = other
            .cols
            .iter()
            .map(|c| self.apply(c, q))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: self.rows, cols })
    }

    pub fn is_zero_mod(&self, q: &QRingRc<K>) -> bool {
        self.cols
            .iter()
            .all(|c| c.components.iter().all(|p| q.is_zero_mod(p)))
    }
}

/// Generators of the kernel of the map given by `mat` over the quotient ring.
pub fn kernel_gens<K: Field>(
    q: &QRingRc<K>,
    mat: &Matrix<K>,
    limits: &Limits,
) -> Result<Vec<ModuleVector<K>>> {
    syzygies(q, &mat.cols, mat.rows, limits)
}

// ---------------------------------------------------------------------------
// Presented modules.

/// A module given by generators and relations: coker(relations) in S^gens.
#[derive(Clone, Debug)]
pub struct PresentedModule<K: Field> {
    pub ring: QRingRc<K>,
    pub gens: usize,
    pub relations: Matrix<K>,
    /// Degrees of the generators when the module is graded.
    pub degrees: Option<Vec<i64>>,
}

impl<K: Field> PresentedModule<K> {
    /// The ring itself as a module over itself.
    pub fn ring_module(ring: &QRingRc<K>) -> Self {
        PresentedModule {
            ring: ring.clone(),
            gens: 1,
            relations: Matrix { rows: 1, cols: vec![] },
            degrees: ring.homogeneous.then(|| vec![0]),
        }
    }

    /// S/J for an ideal J of the quotient ring S.
    pub fn cyclic(ring: &QRingRc<K>, ideal: &[Polynomial<K>]) -> Result<Self> {
        let cols: Vec<ModuleVector<K>> = ideal
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| ModuleVector::from_polys(vec![g.clone()]))
            .collect();
        let homog = ring.homogeneous && ideal.iter().all(|g| g.is_homogeneous());
        Ok(PresentedModule {
            ring: ring.clone(),
            gens: 1,
            relations: Matrix::new(1, cols)?,
            degrees: homog.then(|| vec![0]),
        })
    }

    pub fn from_matrix(ring: &QRingRc<K>, relations: Matrix<K>, degrees: Option<Vec<i64>>) -> Self {
        PresentedModule { ring: ring.clone(), gens: relations.rows, relations, degrees }
    }

    /// Annihilator ideal, as a reduced basis of its lift to the ambient ring.
    pub fn annihilator(&self, limits: &Limits) -> Result<Vec<Polynomial<K>>> {
        crate::groebner::annihilator_of_cokernel(&self.ring, &self.relations.cols, self.gens, limits)
    }

    /// Exact zero test: the columns span the whole free module.
    pub fn is_zero(&self, limits: &Limits) -> Result<bool> {
        if self.gens == 0 {
            return Ok(true);
        }
        let gb = ModuleGb::new(&self.ring, &self.relations.cols, self.gens, limits)?;
        gb.is_whole_module(limits)
    }

    /// Remove superfluous generators by sweeping invertible constant entries
    /// out of the relation matrix. Over a graded ring the result is the
    /// minimal presentation (same module up to isomorphism).
    pub fn minimized(&self) -> Result<PresentedModule<K>> {
        let q = &self.ring;
        let mut mat = Matrix {
            rows: self.gens,
            cols: self
                .relations
                .cols
                .iter()
                .map(|c| c.nf_componentwise(q))
                .filter(|c| !c.is_zero())
                .collect(),
        };
        let mut degs = self.degrees.clone();
        sweep_pair(q, None, &mut mat, degs.as_mut())?;
        mat.cols.retain(|c| !c.is_zero());
        Ok(PresentedModule { ring: q.clone(), gens: mat.rows, relations: mat, degrees: degs })
    }

    /// Block direct sum of presented modules over a common ring.
    pub fn direct_sum(parts: &[&PresentedModule<K>]) -> Result<PresentedModule<K>> {
        let first = parts
            .first()
            .ok_or_else(|| EngineError::Precondition("direct sum of no modules".into()))?;
        let q = first.ring.clone();
        for p in parts {
            if !crate::polycore::quotient::same_qring(&p.ring, &q) {
                return Err(EngineError::RingMismatch("direct sum across rings".into()));
            }
        }
        let gens: usize = parts.iter().map(|p| p.gens).sum();
        let amb = &q.ambient;
        let mut cols = Vec::new();
        let mut off = 0;
        for p in parts {
            for col in &p.relations.cols {
                let mut comps = vec![Polynomial::zero(amb); gens];
                for (j, e) in col.components.iter().enumerate() {
                    comps[off + j] = e.clone();
                }
                cols.push(ModuleVector::from_polys(comps));
            }
            off += p.gens;
        }
        let degrees = if parts.iter().all(|p| p.degrees.is_some()) {
            Some(parts.iter().flat_map(|p| p.degrees.clone().unwrap()).collect())
        } else {
            None
        };
        Ok(PresentedModule { ring: q, gens, relations: Matrix { rows: gens, cols }, degrees })
    }
}

// ---------------------------------------------------------------------------
// Free resolutions.

/// ... -> F_2 -> F_1 -> F_0 (-> M -> 0), with diffs[i] the map F_{i+1} -> F_i.
#[derive(Clone, Debug)]
pub struct FreeResolution<K: Field> {
    pub ring: QRingRc<K>,
    pub ranks: Vec<usize>,
    pub diffs: Vec<Matrix<K>>,
    /// Generator degrees of each F_i, when graded.
    pub degrees: Option<Vec<Vec<i64>>>,
    /// True when the last syzygy module was zero; false when construction
    /// stopped at the length cap.
    pub complete: bool,
}

impl<K: Field> FreeResolution<K> {
    /// Index of the last free module present.
    pub fn length(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks.get(i).copied().unwrap_or(0)
    }

    /// d_i: F_i -> F_{i-1}, for 1 <= i <= length; beyond a complete
    /// resolution the maps are zero (returned as None).
    pub fn diff(&self, i: usize) -> Option<&Matrix<K>> {
        if i == 0 {
            return None;
        }
        self.diffs.get(i - 1)
    }

    /// Extend by one syzygy step. No-op when complete.
    pub fn extend_one(&mut self, limits: &Limits) -> Result<()> {
        if self.complete {
            return Ok(());
        }
        let s = self.diffs.len();
        if s == 0 || self.diffs[s - 1].ncols() == 0 {
            self.complete = true;
            return Ok(());
        }
        let last = &self.diffs[s - 1];
        let t0 = std::time::Instant::now();
        let syz = syzygies(&self.ring, &last.cols, last.rows, limits)?;
        let t_syz = t0.elapsed();
        let t0 = std::time::Instant::now();
        let mut new_mat = Matrix::new(last.ncols(), syz)?.nf_entries(&self.ring);
        let t_nf = t0.elapsed();
        let t0 = std::time::Instant::now();
        {
            let (head, tail) = self.diffs.split_at_mut(s - 1);
            let _ = head;
            let prev = &mut tail[0];
            let mid_degs = self.degrees.as_mut().map(|d| &mut d[s]);
            sweep_pair(&self.ring, Some(prev), &mut new_mat, mid_degs)?;
            self.ranks[s] = prev.ncols();
        }
        let t_sweep = t0.elapsed();
        new_mat.cols.retain(|c| !c.is_zero());
        let before = new_mat.ncols();
        let t0 = std::time::Instant::now();
        let base = self.degrees.as_ref().map(|d| d[s].clone());
        if std::env::var("GALG_NO_PRUNE").is_err() {
            prune_generators(&self.ring, &mut new_mat, base.as_deref(), limits)?;
        }
        eprintln!(
            "step {s}: syz {t_syz:?}, nf {t_nf:?}, sweep {t_sweep:?}, prune {:?} ({before} -> {})",
            t0.elapsed(),
            new_mat.ncols()
        );
        if let Some(degs) = self.degrees.as_mut() {
            let base = degs[s].clone();
            let mut next = Vec::with_capacity(new_mat.ncols());
            for c in &new_mat.cols {
                match c.degree(&base)? {
                    Some(d) => next.push(d),
                    None => return Err(EngineError::Internal("zero column survived sweep".into())),
                }
            }
            degs.push(next);
        }
        self.ranks.push(new_mat.ncols());
        if new_mat.ncols() == 0 {
            self.complete = true;
        }
        self.diffs.push(new_mat);
        Ok(())
    }

    /// Extend until complete or until the resolution reaches `max_len` maps.
    pub fn extend_to(&mut self, max_len: usize, limits: &Limits) -> Result<()> {
        while !self.complete && self.diffs.len() < max_len {
            self.extend_one(limits)?;
        }
        Ok(())
    }

    /// Certify the complex property (d composed with d vanishes) and, where
    /// computable, exactness: every kernel element lies in the image of the
    /// next map. Expensive; meant for tests and certificates.
    pub fn certify(&self, limits: &Limits) -> Result<bool> {
        for i in 1..self.diffs.len() {
            let comp = self.diffs[i - 1].compose(&self.diffs[i], &self.ring)?;
            if !comp.is_zero_mod(&self.ring) {
                return Ok(false);
            }
        }
        for i in 0..self.diffs.len() {
            let ker = kernel_gens(&self.ring, &self.diffs[i], limits)?;
            if i + 1 < self.diffs.len() {
                let next = &self.diffs[i + 1];
                if next.ncols() == 0 {
                    if !ker.is_empty() {
                        return Ok(false);
                    }
                    continue;
                }
                let span = ModuleGb::new(&self.ring, &next.cols, next.rows, limits)?;
                for v in &ker {
                    if !span.contains(v, limits)? {
                        return Ok(false);
                    }
                }
            } else if self.complete && !ker.is_empty() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Sweep invertible constant entries out of `new_mat`. Each pivot (r, c)
/// deletes basis element r of the middle module (column r of `prev`, row r of
/// `new_mat`) and column c of `new_mat`; the complex property guarantees the
/// discarded row and column are zero modulo the ideal after the column
/// operations, so no other arithmetic is needed.
fn sweep_pair<K: Field>(
    q: &QRingRc<K>,
    mut prev: Option<&mut Matrix<K>>,
    new_mat: &mut Matrix<K>,
    mut mid_degrees: Option<&mut Vec<i64>>,
) -> Result<()> {
    let field = &q.ambient.field;
    loop {
        let mut pivot = None;
        'scan: for c in 0..new_mat.ncols() {
            for r in 0..new_mat.rows {
                if let Some(a) = new_mat.entry(r, c).as_nonzero_constant() {
                    pivot = Some((r, c, a.clone()));
                    break 'scan;
                }
            }
        }
        let Some((r, c, a)) = pivot else { break };
        let inv = field.inv(&a);
        let pivot_col = new_mat.cols[c].clone();
        for c2 in 0..new_mat.ncols() {
            if c2 == c {
                continue;
            }
            let beta = new_mat.entry(r, c2);
            if beta.is_zero() {
                continue;
            }
            let factor = beta.scale(&inv);
            for row in 0..new_mat.rows {
                let t = factor.mul(&pivot_col.components[row])?;
                let e = new_mat.cols[c2].components[row].sub(&t)?;
                new_mat.cols[c2].components[row] = q.nf(&e);
            }
            debug_assert!(new_mat.entry(r, c2).is_zero());
        }
        for col in new_mat.cols.iter_mut() {
            col.components.remove(r);
        }
        new_mat.rows -= 1;
        new_mat.cols.remove(c);
        if let Some(p) = prev.as_deref_mut() {
            p.cols.remove(r);
        }
        if let Some(d) = mid_degrees.as_deref_mut() {
            d.remove(r);
        }
    }
    Ok(())
}

/// Cut a raw generating set of a graded submodule down to a minimal one.
/// Candidates are tested in nondecreasing degree order for membership in the
/// span of everything kept so far, via a degree-truncated Groebner basis of
/// that span. Inhomogeneous columns disable the cut (the truncation argument
/// needs homogeneity), which costs minimality but never correctness: the
/// next sweep erases any redundancy they cause.
fn prune_generators<K: Field>(
    q: &QRingRc<K>,
    mat: &mut Matrix<K>,
    base: Option<&[i64]>,
    limits: &Limits,
) -> Result<()> {
    let Some(base) = base else { return Ok(()) };
    if mat.ncols() <= 1 {
        return Ok(());
    }
    let rank = mat.rows;
    let qgb = q.gb_limited(limits)?;
    let ctx = GbCtx::pot(&q.ambient, qgb, rank as u32, false, limits);
    let mut cands = Vec::with_capacity(mat.ncols());
    for c in &mat.cols {
        let Some(d) = c.degree(base)? else { return Ok(()) };
        cands.push((d, ctx.mvec_from_components(c)));
    }
    let keep = minimal_generators(&cands, base, &ctx)?;
    let mut it = keep.iter();
    mat.cols.retain(|_| *it.next().unwrap());
    Ok(())
}

/// Free resolution of a presented module, built one syzygy module at a time
/// and swept after every step. Over a graded ring the result is minimal.
pub fn resolve<K: Field>(
    module: &PresentedModule<K>,
    max_len: usize,
    limits: &Limits,
) -> Result<FreeResolution<K>> {
    let ring = module.ring.clone();
    let graded = module.degrees.is_some() && ring.homogeneous;
    let mut degrees: Option<Vec<Vec<i64>>> = if graded {
        Some(vec![module.degrees.clone().unwrap()])
    } else {
        None
    };
    let mut d1 = Matrix {
        rows: module.gens,
        cols: module
            .relations
            .cols
            .iter()
            .map(|c| c.nf_componentwise(&ring))
            .filter(|c| !c.is_zero())
            .collect(),
    };
    {
        let mid = degrees.as_mut().map(|d| &mut d[0]);
        sweep_pair(&ring, None, &mut d1, mid)?;
    }
    d1.cols.retain(|c| !c.is_zero());
    let f0 = d1.rows;
    if let Some(degs) = degrees.as_mut() {
        let base = degs[0].clone();
        let mut next = Vec::with_capacity(d1.ncols());
        for c in &d1.cols {
            match c.degree(&base)? {
                Some(d) => next.push(d),
                None => return Err(EngineError::Internal("zero column survived sweep".into())),
            }
        }
        degs.push(next);
    }
    let complete = d1.ncols() == 0;
    let mut res = FreeResolution {
        ring,
        ranks: vec![f0, d1.ncols()],
        diffs: vec![d1],
        degrees,
        complete,
    };
    res.extend_to(max_len, limits)?;
    Ok(res)
}

// ---------------------------------------------------------------------------
// Hilbert functions by counting standard monomials.

fn for_each_monomial_of_wdeg(weights: &[u32], d: i64, f: &mut impl FnMut(&[u16])) {
    if d < 0 {
        return;
    }
    let mut exps = vec![0u16; weights.len()];
    fn go(weights: &[u32], i: usize, rem: i64, exps: &mut Vec<u16>, f: &mut impl FnMut(&[u16])) {
        if i == weights.len() {
            if rem == 0 {
                f(exps);
            }
            return;
        }
        if i + 1 == weights.len() {
            let w = weights[i] as i64;
            if rem % w == 0 && rem / w <= u16::MAX as i64 {
                exps[i] = (rem / w) as u16;
                f(exps);
                exps[i] = 0;
            }
            return;
        }
        let w = weights[i] as i64;
        let mut e = 0i64;
        while e * w <= rem {
            exps[i] = e as u16;
            go(weights, i + 1, rem - e * w, exps, f);
            e += 1;
            if e > u16::MAX as i64 {
                break;
            }
        }
        exps[i] = 0;
    }
    go(weights, 0, d, &mut exps, f);
}

fn divisible_by_any(exps: &[u16], leads: &[Monomial]) -> bool {
    leads.iter().any(|l| l.exps().iter().zip(exps).all(|(a, b)| a <= b))
}

/// Dimension over the base field of degree-d part of coker(columns) in
/// S^rank, with the given generator degrees.
pub fn hilbert_function_of_cokernel<K: Field>(
    gb: &ModuleGb<K>,
    degrees: &[i64],
    d: i64,
) -> Result<u64> {
    let q = gb.ring();
    if !q.homogeneous {
        return Err(EngineError::Precondition("Hilbert function of a non-graded ring".into()));
    }
    let qleads: Vec<Monomial> = q
        .gb()
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    let mut by_comp: Vec<Vec<Monomial>> = vec![qleads; gb.rank()];
    for (comp, m) in gb.lead_terms() {
        by_comp[comp].push(m);
    }
    let weights = &q.ambient.weights;
    let mut total = 0u64;
    for (j, leads) in by_comp.iter().enumerate() {
        let target = d - degrees[j];
        let mut count = 0u64;
        for_each_monomial_of_wdeg(weights, target, &mut |exps| {
            if !divisible_by_any(exps, leads) {
                count += 1;
            }
        });
        total += count;
    }
    Ok(total)
}

/// Dimension of the degree-d part of the quotient ring itself.
pub fn hilbert_function_ring<K: Field>(q: &QRingRc<K>, d: i64, limits: &Limits) -> Result<u64> {
    if !q.homogeneous {
        return Err(EngineError::Precondition("Hilbert function of a non-graded ring".into()));
    }
    let leads: Vec<Monomial> = q
        .gb_limited(limits)?
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    let mut count = 0u64;
    for_each_monomial_of_wdeg(&q.ambient.weights, d, &mut |exps| {
        if !divisible_by_any(exps, &leads) {
            count += 1;
        }
    });
    Ok(count)
}

// ---------------------------------------------------------------------------
// Hilbert series numerators over prod_i (1 - T^{w_i}).

/// A Laurent polynomial in T with integer coefficients, used as the
/// numerator of a Hilbert series over the fixed denominator of the ambient
/// ring.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SeriesNumerator {
    pub coeffs: BTreeMap<i64, i64>,
}

impl SeriesNumerator {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn monomial(deg: i64, coef: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coef != 0 {
            coeffs.insert(deg, coef);
        }
        SeriesNumerator { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_assign(&mut self, other: &SeriesNumerator) {
        for (&d, &c) in &other.coeffs {
            let e = self.coeffs.entry(d).or_insert(0);
            *e += c;
            if *e == 0 {
                self.coeffs.remove(&d);
            }
        }
    }

    pub fn sub_assign(&mut self, other: &SeriesNumerator) {
        for (&d, &c) in &other.coeffs {
            let e = self.coeffs.entry(d).or_insert(0);
            *e -= c;
            if *e == 0 {
                self.coeffs.remove(&d);
            }
        }
    }

    /// self * T^shift * sign.
    pub fn shifted(&self, shift: i64, sign: i64) -> SeriesNumerator {
        SeriesNumerator {
            coeffs: self.coeffs.iter().map(|(&d, &c)| (d + shift, c * sign)).collect(),
        }
    }

    pub fn mul(&self, other: &SeriesNumerator) -> SeriesNumerator {
        let mut out = SeriesNumerator::zero();
        for (&d, &c) in &self.coeffs {
            out.add_assign(&other.shifted(d, c));
        }
        out
    }
}

impl std::fmt::Display for SeriesNumerator {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(fm, "0");
        }
        let mut first = true;
        for (&d, &c) in &self.coeffs {
            if first {
                if c < 0 {
                    write!(fm, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(fm, " - ")?;
            } else {
                write!(fm, " + ")?;
            }
            let a = c.abs();
            match d {
                0 => write!(fm, "{a}")?,
                1 if a == 1 => write!(fm, "T")?,
                1 => write!(fm, "{a}*T")?,
                _ if a == 1 => write!(fm, "T^{d}")?,
                _ => write!(fm, "{a}*T^{d}")?,
            }
        }
        Ok(())
    }
}

fn minimalize_monomials(gens: &[Monomial]) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = Vec::new();
    let mut sorted: Vec<&Monomial> = gens.iter().collect();
    sorted.sort_by_key(|m| m.wdeg());
    for m in sorted {
        if !out.iter().any(|k| k.divides(m)) {
            out.push(m.clone());
        }
    }
    out
}

/// Numerator of the Hilbert series of P/J for a monomial ideal J, over the
/// denominator prod (1 - T^{w_i}). Recursion splits on the most frequent
/// variable; pairwise-coprime generator sets get the product formula.
pub fn monomial_quotient_numerator(weights: &[u32], gens: &[Monomial]) -> SeriesNumerator {
    let gens = minimalize_monomials(gens);
    numerator_rec(weights, &gens)
}

fn numerator_rec(weights: &[u32], gens: &[Monomial]) -> SeriesNumerator {
    if gens.is_empty() {
        return SeriesNumerator::one();
    }
    if gens.iter().any(|m| m.is_one()) {
        return SeriesNumerator::zero();
    }
    let pairwise_coprime = (0..gens.len())
        .all(|i| (i + 1..gens.len()).all(|j| gens[i].coprime(&gens[j])));
    if pairwise_coprime {
        let mut out = SeriesNumerator::one();
        for m in gens {
            let mut f = SeriesNumerator::one();
            f.sub_assign(&SeriesNumerator::monomial(m.wdeg() as i64, 1));
            out = out.mul(&f);
        }
        return out;
    }
    // Split on x^1 for the most frequent variable x.
    let nv = weights.len();
    let mut freq = vec![0usize; nv];
    for m in gens {
        for v in m.support() {
            freq[v] += 1;
        }
    }
    let x = (0..nv).max_by_key(|&v| freq[v]).unwrap();
    let mut xe = vec![0u16; nv];
    xe[x] = 1;
    let p = Monomial::new(&xe, weights);
    // From 0 -> P/(J:p) --*p--> P/J -> P/(J + p) -> 0:
    let mut plus = gens.to_vec();
    plus.push(p.clone());
    let plus = minimalize_monomials(&plus);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|m| {
            let e: Vec<u16> = m
                .exps()
                .iter()
                .enumerate()
                .map(|(v, &a)| if v == x { a.saturating_sub(1) } else { a })
                .collect();
            Monomial::new(&e, weights)
        })
        .collect();
    let colon = minimalize_monomials(&colon);
    let mut out = numerator_rec(weights, &plus);
    out.add_assign(&numerator_rec(weights, &colon).shifted(p.wdeg() as i64, 1));
    out
}

/// Numerator of the Hilbert series of coker(columns) from the leading terms
/// of its Groebner basis: the standard monomials of each component are those
/// outside a monomial ideal, and passing to leading terms preserves Hilbert
/// series.
pub fn numerator_of_cokernel<K: Field>(
    gb: &ModuleGb<K>,
    degrees: &[i64],
    limits: &Limits,
) -> Result<SeriesNumerator> {
    let q = gb.ring();
    if !q.homogeneous {
        return Err(EngineError::Precondition("Hilbert series of a non-graded ring".into()));
    }
    let qleads: Vec<Monomial> = q
        .gb_limited(limits)?
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    let mut by_comp: Vec<Vec<Monomial>> = vec![qleads; gb.rank()];
    for (comp, m) in gb.lead_terms() {
        by_comp[comp].push(m);
    }
    let weights = &q.ambient.weights;
    let mut out = SeriesNumerator::zero();
    for (j, leads) in by_comp.iter().enumerate() {
        let n = monomial_quotient_numerator(weights, leads);
        out.add_assign(&n.shifted(degrees[j], 1));
    }
    Ok(out)
}

/// Numerator of the Hilbert series of the quotient ring itself.
pub fn numerator_of_ring<K: Field>(q: &QRingRc<K>, limits: &Limits) -> Result<SeriesNumerator> {
    if !q.homogeneous {
        return Err(EngineError::Precondition("Hilbert series of a non-graded ring".into()));
    }
    let leads: Vec<Monomial> = q
        .gb_limited(limits)?
        .iter()
        .map(|g| g.leading().unwrap().0.clone())
        .collect();
    Ok(monomial_quotient_numerator(&q.ambient.weights, &leads))
}

/// Numerator from a complete graded free resolution over the polynomial
/// ring: the alternating sum of generator-degree contributions.
pub fn numerator_from_resolution<K: Field>(res: &FreeResolution<K>) -> Result<SeriesNumerator> {
    if !res.ring.is_polynomial_ring() {
        return Err(EngineError::Precondition(
            "resolution-based Hilbert series needs the ambient polynomial ring".into(),
        ));
    }
    if !res.complete {
        return Err(EngineError::Truncated(res.length()));
    }
    let degrees = res
        .degrees
        .as_ref()
        .ok_or_else(|| EngineError::Precondition("resolution is not graded".into()))?;
    let mut out = SeriesNumerator::zero();
    for (i, degs) in degrees.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for &d in degs {
            out.add_assign(&SeriesNumerator::monomial(d, sign));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Krull dimension via independent sets of variables.

/// Krull dimension of the quotient ring: the largest set of variables that
/// is independent modulo the leading-term ideal. Returns -1 for the zero
/// ring (unit ideal).
pub fn krull_dim<K: Field>(q: &QRingRc<K>, limits: &Limits) -> Result<i64> {
    let gb = q.gb_limited(limits)?;
    if gb.iter().any(|g| g.as_nonzero_constant().is_some()) {
        return Ok(-1);
    }
    let n = q.ambient.nvars();
    if n > 64 {
        return Err(EngineError::Precondition("too many variables for dimension search".into()));
    }
    let masks: Vec<u64> = gb
        .iter()
        .map(|g| {
            let m = g.leading().unwrap().0;
            m.support().fold(0u64, |acc, v| acc | (1 << v))
        })
        .collect();
    fn go(v: usize, n: usize, subset: u64, size: u32, masks: &[u64], best: &mut u32) {
        if size + (n - v) as u32 <= *best {
            return;
        }
        if v == n {
            *best = (*best).max(size);
            return;
        }
        let with = subset | (1 << v);
        // Independent iff no leading support is contained in the subset.
        if masks.iter().all(|&m| m & !with != 0) {
            go(v + 1, n, with, size + 1, masks, best);
        }
        go(v + 1, n, subset, size, masks, best);
    }
    let mut best = 0u32;
    if masks.iter().all(|&m| m != 0) {
        go(0, n, 0, 0, &masks, &mut best);
    }
    Ok(best as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;
    use crate::polycore::field::PrimeField;
    use crate::polycore::parse::poly_from_str;
    use crate::polycore::poly::{PolyRing, RingRc};
    use crate::polycore::quotient::QuotientRing;

    type F = PrimeField;

    fn polys(r: &RingRc<F>, srcs: &[&str]) -> Vec<Polynomial<F>> {
        srcs.iter().map(|s| poly_from_str(r, s).unwrap()).collect()
    }

    #[test]
    fn koszul_complex_of_a_point() {
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["x", "y", "z"]).unwrap();
        let q = QuotientRing::polynomial_ring(r.clone());
        let m = PresentedModule::cyclic(&q, &polys(&r, &["x", "y", "z"])).unwrap();
        let res = resolve(&m, 10, &Limits::none()).unwrap();
        assert!(res.complete);
        assert_eq!(res.ranks, vec![1, 3, 3, 1, 0]);
        assert!(res.certify(&Limits::none()).unwrap());
        let degs = res.degrees.as_ref().unwrap();
        assert_eq!(degs[1], vec![1, 1, 1]);
        assert_eq!(degs[2], vec![2, 2, 2]);
        assert_eq!(degs[3], vec![3]);
    }

    #[test]
    fn twisted_cubic_betti_numbers() {
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["a", "b", "c", "d"]).unwrap();
        let q = QuotientRing::polynomial_ring(r.clone());
        let m = PresentedModule::cyclic(
            &q,
            &polys(&r, &["b^2 - a*c", "b*c - a*d", "c^2 - b*d"]),
        )
        .unwrap();
        let res = resolve(&m, 10, &Limits::none()).unwrap();
        assert!(res.complete);
        assert_eq!(res.ranks, vec![1, 3, 2, 0]);
        let degs = res.degrees.as_ref().unwrap();
        assert_eq!(degs[1], vec![2, 2, 2]);
        assert_eq!(degs[2], vec![3, 3]);
        assert!(res.certify(&Limits::none()).unwrap());
    }

    #[test]
    fn infinite_resolution_is_truncated() {
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x"]).unwrap();
        let q = QuotientRing::new(r.clone(), polys(&r, &["x^2"])).unwrap();
        let m = PresentedModule::cyclic(&q, &polys(&r, &["x"])).unwrap();
        let res = resolve(&m, 5, &Limits::none()).unwrap();
        assert!(!res.complete);
        assert_eq!(res.ranks, vec![1, 1, 1, 1, 1, 1]);
        for i in 1..=5 {
            let d = res.diff(i).unwrap();
            assert_eq!(d.entry(0, 0).to_string(), "x");
        }
    }

    #[test]
    fn sweep_removes_redundant_generators() {
        // Present K[x]/(x) with a redundant second generator equal to the
        // first: coker [[1], [x, stuff]] style input.
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x"]).unwrap();
        let q = QuotientRing::polynomial_ring(r.clone());
        // Relations among gens (g0, g1): g0 - g1 = 0 and x*g0 = 0.
        let one = Polynomial::one(&r);
        let x = poly_from_str(&r, "x").unwrap();
        let cols = vec![
            ModuleVector::from_polys(vec![one.clone(), one.neg()]),
            ModuleVector::from_polys(vec![x, Polynomial::zero(&r)]),
        ];
        let m = PresentedModule::from_matrix(&q, Matrix::new(2, cols).unwrap(), None);
        let res = resolve(&m, 10, &Limits::none()).unwrap();
        assert_eq!(res.ranks[0], 1);
        assert_eq!(res.ranks[1], 1);
        assert!(res.complete);
    }

    #[test]
    fn hilbert_function_of_twisted_cubic() {
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["a", "b", "c", "d"]).unwrap();
        let q = QuotientRing::new(
            r.clone(),
            polys(&r, &["b^2 - a*c", "b*c - a*d", "c^2 - b*d"]),
        )
        .unwrap();
        let want = [1u64, 4, 7, 10, 13];
        for (d, &w) in want.iter().enumerate() {
            assert_eq!(hilbert_function_ring(&q, d as i64, &Limits::none()).unwrap(), w);
        }
    }

    #[test]
    fn series_numerator_routes_agree() {
        // For P/I, the numerator from leading terms must match the
        // alternating sum over a minimal graded resolution.
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["a", "b", "c", "d"]).unwrap();
        let gens = polys(&r, &["b^2 - a*c", "b*c - a*d", "c^2 - b*d"]);
        let q = QuotientRing::new(r.clone(), gens.clone()).unwrap();
        let by_leads = numerator_of_ring(&q, &Limits::none()).unwrap();
        let p = QuotientRing::polynomial_ring(r.clone());
        let m = PresentedModule::cyclic(&p, &gens).unwrap();
        let res = resolve(&m, 10, &Limits::none()).unwrap();
        let by_res = numerator_from_resolution(&res).unwrap();
        assert_eq!(by_leads, by_res);
        // 1 - 3T^2 + 2T^3 for the twisted cubic.
        let mut expect = SeriesNumerator::one();
        expect.sub_assign(&SeriesNumerator::monomial(2, 3));
        expect.add_assign(&SeriesNumerator::monomial(3, 2));
        assert_eq!(by_res, expect);
    }

    #[test]
    fn numerator_matches_counted_values() {
        // Expand N(T)/prod(1-T^w) and compare with direct counting.
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x", "y", "z"]).unwrap();
        let q = QuotientRing::new(r.clone(), polys(&r, &["x*y - z^2", "x^3"])).unwrap();
        let num = numerator_of_ring(&q, &Limits::none()).unwrap();
        // Series expansion of 1/prod(1 - T^{w_i}) up to degree 8 by counting
        // all monomials, then convolve with the numerator.
        let dmax = 8i64;
        let mut full = vec![0i64; (dmax + 1) as usize];
        for d in 0..=dmax {
            let mut count = 0i64;
            for_each_monomial_of_wdeg(&r.weights, d, &mut |_| count += 1);
            full[d as usize] = count;
        }
        for d in 0..=dmax {
            let mut v = 0i64;
            for (&e, &c) in &num.coeffs {
                if e >= 0 && e <= d {
                    v += c * full[(d - e) as usize];
                }
            }
            let counted = hilbert_function_ring(&q, d, &Limits::none()).unwrap() as i64;
            assert_eq!(v, counted, "degree {d}");
        }
    }

    #[test]
    fn krull_dimensions() {
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["a", "b", "c", "d"]).unwrap();
        let q = QuotientRing::new(
            r.clone(),
            polys(&r, &["b^2 - a*c", "b*c - a*d", "c^2 - b*d"]),
        )
        .unwrap();
        assert_eq!(krull_dim(&q, &Limits::none()).unwrap(), 2);
        let p = QuotientRing::polynomial_ring(r.clone());
        assert_eq!(krull_dim(&p, &Limits::none()).unwrap(), 4);
        let r1 = PolyRing::standard(PrimeField::new(101).unwrap(), &["x", "y"]).unwrap();
        let art = QuotientRing::new(r1.clone(), polys(&r1, &["x^2", "x*y", "y^2"])).unwrap();
        assert_eq!(krull_dim(&art, &Limits::none()).unwrap(), 0);
    }

    #[test]
    fn kernel_generators_compose_to_zero() {
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x", "y"]).unwrap();
        let q = QuotientRing::polynomial_ring(r.clone());
        let cols = vec![
            ModuleVector::from_polys(polys(&r, &["x", "y"])),
            ModuleVector::from_polys(polys(&r, &["y", "x"])),
            ModuleVector::from_polys(polys(&r, &["x + y", "x + y"])),
        ];
        let mat = Matrix::new(2, cols).unwrap();
        let ker = kernel_gens(&q, &mat, &Limits::none()).unwrap();
        assert!(!ker.is_empty());
        for v in &ker {
            let img = mat.apply(v, &q).unwrap();
            assert!(img.is_zero(), "kernel vector maps to {img:?}");
        }
    }
}
