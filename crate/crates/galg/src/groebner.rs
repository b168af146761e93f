//! Groebner engine for ideals and submodules of free modules.
//!
//! One Buchberger core serves every computation in the crate:
//!
//! * ideals in a polynomial ring (rank-1 modules);
//! * submodules of S^k over a quotient ring S = P/I, by working over P and
//!   letting the reduced basis of I act "virtually" on every component
//!   instead of materializing h*e_j generators;
//! * syzygies and membership witnesses, by augmenting vectors with tracking
//!   components that sit below every module component in the
//!   position-over-term order (components are compared first; a smaller
//!   component index wins).
//!
//! Pair pruning: the lcm-divisibility (chain) criteria are applied always —
//! they are valid for modules. The coprime-product criterion is applied only
//! where it is sound: rank-1 ideal runs, and pairs against a virtual quotient
//! element (which is a ring scalar, so the classical rewriting argument goes
//! through componentwise).

use crate::limits::{EngineError, Limits, Result};
use crate::polycore::field::Field;
use crate::polycore::monomial::{Monomial, MonomialOrder, SortKey};
use crate::polycore::poly::{PolyRing, Polynomial, RingRc};
use crate::polycore::quotient::{QRingRc, QuotientRing};
use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashSet};
use std::sync::Arc;

/// An element of a free module S^k: one polynomial per component.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector<K: Field> {
    pub components: Vec<Polynomial<K>>,
}

impl<K: Field> ModuleVector<K> {
    pub fn zero(ring: &RingRc<K>, rank: usize) -> Self {
        ModuleVector {
            components: vec![Polynomial::zero(ring); rank],
        }
    }

    pub fn unit(ring: &RingRc<K>, rank: usize, j: usize) -> Self {
        let mut v = Self::zero(ring, rank);
        v.components[j] = Polynomial::one(ring);
        v
    }

    pub fn from_polys(components: Vec<Polynomial<K>>) -> Self {
        ModuleVector { components }
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|p| p.is_zero())
    }

    pub fn nf_componentwise(&self, q: &QuotientRing<K>) -> Self {
        ModuleVector {
            components: self.components.iter().map(|p| q.nf(p)).collect(),
        }
    }

    /// Homogeneous degree with respect to component degrees, if any.
    /// Zero vectors report None.
    pub fn degree(&self, comp_degs: &[i64]) -> Result<Option<i64>> {
        let mut deg = None;
        for (j, p) in self.components.iter().enumerate() {
            if let Some(d) = p.weighted_degree()? {
                let total = d + comp_degs[j];
                match deg {
                    None => deg = Some(total),
                    Some(t) if t == total => {}
                    Some(t) => {
                        return Err(EngineError::Inhomogeneous(format!(
                            "vector mixes degrees {t} and {total}"
                        )))
                    }
                }
            }
        }
        Ok(deg)
    }
}

// ---------------------------------------------------------------------------
// Flat engine representation.

#[derive(Clone, Debug)]
pub(crate) struct MTerm<K: Field> {
    pub comp: u32,
    pub mono: Monomial,
    pub c: K::Elem,
}

/// Terms strictly descending in the active module order.
#[derive(Clone, Debug)]
pub(crate) struct MVec<K: Field> {
    pub terms: Vec<MTerm<K>>,
}

impl<K: Field> MVec<K> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &MTerm<K> {
        &self.terms[0]
    }
}

pub(crate) struct GbCtx<'a, K: Field> {
    pub ring: &'a RingRc<K>,
    pub qgb: &'a [Polynomial<K>],
    /// Virtual quotient reduction applies to components < qbound.
    pub qbound: u32,
    /// Pure ideal computation: full Gebauer-Moeller pruning is valid.
    pub rank1: bool,
    /// Elements whose lead component is at or above this bound are finished
    /// products (syzygy residues in tracking components): they spawn no
    /// pairs and are never used as reducers. Leaving it at u32::MAX keeps
    /// the classical behavior.
    pub track_bound: u32,
    pub limits: &'a Limits,
}

impl<'a, K: Field> GbCtx<'a, K> {
    pub fn pot(ring: &'a RingRc<K>, qgb: &'a [Polynomial<K>], qbound: u32, rank1: bool, limits: &'a Limits) -> Self {
        GbCtx { ring, qgb, qbound, rank1, track_bound: u32::MAX, limits }
    }

    /// Position-over-term: a smaller component index wins; ties fall back to
    /// the ring order on monomials.
    fn cmp_term(&self, a: (u32, &Monomial), b: (u32, &Monomial)) -> Ordering {
        b.0.cmp(&a.0).then_with(|| self.ring.order.cmp(a.1, b.1))
    }

    pub fn mvec_from_components(&self, v: &ModuleVector<K>) -> MVec<K> {
        let mut terms = Vec::new();
        for (j, p) in v.components.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(MTerm { comp: j as u32, mono: m.clone(), c: c.clone() });
            }
        }
        terms.sort_by(|x, y| self.cmp_term((y.comp, &y.mono), (x.comp, &x.mono)));
        MVec { terms }
    }

    pub fn mvec_to_components(&self, v: &MVec<K>, rank: usize) -> ModuleVector<K> {
        let mut buckets: Vec<Vec<(Monomial, K::Elem)>> = vec![Vec::new(); rank];
        for t in &v.terms {
            buckets[t.comp as usize].push((t.mono.clone(), t.c.clone()));
        }
        ModuleVector {
            components: buckets
                .into_iter()
                .map(|b| Polynomial::from_terms(self.ring, b))
                .collect(),
        }
    }

    /// self - c * x^u * other (the canonical reduction step).
    fn sub_scaled_vec(&self, a: &MVec<K>, other: &MVec<K>, u: &Monomial, c: &K::Elem) -> Result<MVec<K>> {
        let f = &self.ring.field;
        let mut scaled = Vec::with_capacity(other.terms.len());
        for t in &other.terms {
            scaled.push(MTerm {
                comp: t.comp,
                mono: t.mono.mul(u)?,
                c: f.mul(&t.c, c),
            });
        }
        Ok(self.merge_sub(&a.terms, scaled))
    }

    /// self - c * x^u * (h placed in component `comp`).
    fn sub_scaled_poly(
        &self,
        a: &MVec<K>,
        h: &Polynomial<K>,
        comp: u32,
        u: &Monomial,
        c: &K::Elem,
    ) -> Result<MVec<K>> {
        let f = &self.ring.field;
        let mut scaled = Vec::with_capacity(h.num_terms());
        for (m, hc) in h.terms() {
            scaled.push(MTerm { comp, mono: m.mul(u)?, c: f.mul(hc, c) });
        }
        Ok(self.merge_sub(&a.terms, scaled))
    }

    /// a[..] - c * x^u * other, where `a` is a descending term slice.
    fn sub_scaled_terms(&self, a: &[MTerm<K>], other: &MVec<K>, u: &Monomial, c: &K::Elem) -> Result<MVec<K>> {
        let f = &self.ring.field;
        let mut scaled = Vec::with_capacity(other.terms.len());
        for t in &other.terms {
            scaled.push(MTerm {
                comp: t.comp,
                mono: t.mono.mul(u)?,
                c: f.mul(&t.c, c),
            });
        }
        Ok(self.merge_sub(a, scaled))
    }

    /// a[..] - c * x^u * (h placed in component `comp`), `a` descending.
    fn sub_scaled_poly_terms(
        &self,
        a: &[MTerm<K>],
        h: &Polynomial<K>,
        comp: u32,
        u: &Monomial,
        c: &K::Elem,
    ) -> Result<MVec<K>> {
        let f = &self.ring.field;
        let mut scaled = Vec::with_capacity(h.num_terms());
        for (m, hc) in h.terms() {
            scaled.push(MTerm { comp, mono: m.mul(u)?, c: f.mul(hc, c) });
        }
        Ok(self.merge_sub(a, scaled))
    }

    fn merge_sub(&self, a: &[MTerm<K>], b: Vec<MTerm<K>>) -> MVec<K> {
        let f = &self.ring.field;
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.cmp_term((a[i].comp, &a[i].mono), (b[j].comp, &b[j].mono)) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(MTerm { comp: b[j].comp, mono: b[j].mono.clone(), c: f.neg(&b[j].c) });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.sub(&a[i].c, &b[j].c);
                    if !f.is_zero(&c) {
                        out.push(MTerm { comp: a[i].comp, mono: a[i].mono.clone(), c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in b.into_iter().skip(j) {
            out.push(MTerm { comp: t.comp, mono: t.mono, c: f.neg(&t.c) });
        }
        MVec { terms: out }
    }

    fn scaled(&self, v: &MVec<K>, u: &Monomial, c: &K::Elem) -> Result<MVec<K>> {
        let f = &self.ring.field;
        let mut terms = Vec::with_capacity(v.terms.len());
        for t in &v.terms {
            terms.push(MTerm { comp: t.comp, mono: t.mono.mul(u)?, c: f.mul(&t.c, c) });
        }
        Ok(MVec { terms })
    }

    /// Full normal form: every term below `bound` gets reduced; terms at or
    /// above `bound` pass through (used to protect tracking components).
    /// Terms before `pos` are already irreducible; a reduction step only
    /// rewrites the tail, so the head is kept in place untouched.
    pub fn reduce(&self, v: MVec<K>, basis: &[MVec<K>], bound: u32) -> Result<MVec<K>> {
        let f = &self.ring.field;
        let mut cur: Vec<MTerm<K>> = v.terms;
        let mut pos = 0usize;
        let mut steps = 0usize;
        'outer: while pos < cur.len() {
            steps += 1;
            if steps % 256 == 0 {
                self.limits.check_time()?;
            }
            let lt = &cur[pos];
            if lt.comp < bound {
                for g in basis {
                    if g.is_zero() {
                        continue;
                    }
                    let gl = g.lead();
                    if gl.comp == lt.comp && gl.mono.divides(&lt.mono) {
                        let u = lt.mono.div(&gl.mono).unwrap();
                        let c = f.div(&lt.c, &gl.c);
                        let red = self.sub_scaled_terms(&cur[pos..], g, &u, &c)?;
                        cur.truncate(pos);
                        cur.extend(red.terms);
                        continue 'outer;
                    }
                }
                if lt.comp < self.qbound {
                    for h in self.qgb {
                        let (hm, hc) = h.leading().unwrap();
                        if hm.divides(&lt.mono) {
                            let u = lt.mono.div(hm).unwrap();
                            let c = f.div(&lt.c, hc);
                            let comp = lt.comp;
                            let red = self.sub_scaled_poly_terms(&cur[pos..], h, comp, &u, &c)?;
                            cur.truncate(pos);
                            cur.extend(red.terms);
                            continue 'outer;
                        }
                    }
                }
            }
            pos += 1;
        }
        Ok(MVec { terms: cur })
    }

    fn remove_content(&self, v: &mut MVec<K>) {
        let mut coeffs: Vec<K::Elem> = v.terms.iter().map(|t| t.c.clone()).collect();
        self.ring.field.remove_content(&mut coeffs);
        for (t, c) in v.terms.iter_mut().zip(coeffs) {
            t.c = c;
        }
    }
}

// ---------------------------------------------------------------------------
// Buchberger core with Gebauer-Moeller pruning.

#[derive(Clone, Debug, PartialEq, Eq)]
enum PKind {
    /// Basis-basis pair.
    BB(u32, u32),
    /// Basis element against a quotient-ideal element acting on its lead
    /// component.
    BQ(u32, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct PairRec {
    key: (u32, u32, SortKey, u32, u32),
    kind: PKind,
    lcm: Monomial,
    comp: u32,
}

impl PartialOrd for PairRec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for PairRec {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

fn pair_key(ring_ord: &MonomialOrder, lcm: &Monomial, comp: u32, i: u32, j: u32) -> (u32, u32, SortKey, u32, u32) {
    (lcm.wdeg(), comp, ring_ord.sort_key(lcm), i, j)
}

pub(crate) fn buchberger_core<K: Field>(gens: Vec<MVec<K>>, ctx: &GbCtx<K>) -> Result<Vec<MVec<K>>> {
    buchberger_extend(Vec::new(), gens, ctx)
}

/// Join `g` to the basis and queue its S-pairs, applying the Gebauer-Moeller
/// criteria. Heap keys lead with the pair degree: the plain lcm degree, or
/// the shifted element degree when component shifts are supplied (used by the
/// degree-truncated completion in `minimal_generators`).
fn add_element<K: Field>(
    mut g: MVec<K>,
    ctx: &GbCtx<K>,
    shifts: Option<&[i64]>,
    basis: &mut Vec<MVec<K>>,
    heap: &mut BinaryHeap<Reverse<(i64, PairRec)>>,
    cancelled: &mut HashSet<(u32, u32)>,
    alive: &mut Vec<(u32, u32, Monomial, u32)>,
) -> Result<()> {
    ctx.remove_content(&mut g);
    let t = basis.len() as u32;
    let (tc, tm) = {
        let l = g.lead();
        (l.comp, l.mono.clone())
    };
    let deg_of = |lcm: &Monomial, comp: u32| -> i64 {
        lcm.wdeg() as i64 + shifts.map_or(0, |s| s[comp as usize])
    };

    // Candidate basis-basis pairs in the same component.
    let mut cands: Vec<(u32, Monomial)> = Vec::new();
    for (i, b) in basis.iter().enumerate() {
        let bl = b.lead();
        if bl.comp == tc {
            cands.push((i as u32, ctx.ring.mono_lcm(&bl.mono, &tm)));
        }
    }

    // B criterion against existing pairs (lcm chain, module-valid).
    let lcm_with: std::collections::HashMap<u32, Monomial> =
        cands.iter().cloned().collect();
    alive.retain(|(i, j, lcm, comp)| {
        if *comp == tc && tm.divides(lcm) {
            if let (Some(li), Some(lj)) = (lcm_with.get(i), lcm_with.get(j)) {
                if li != lcm && lj != lcm {
                    cancelled.insert((*i, *j));
                    return false;
                }
            }
        }
        true
    });

    // M criterion: strict lcm divisibility among the new pairs.
    let mut keep = vec![true; cands.len()];
    for a in 0..cands.len() {
        if !keep[a] {
            continue;
        }
        for b in 0..cands.len() {
            if a == b || !keep[a] {
                continue;
            }
            if keep[b] && cands[b].1 != cands[a].1 && cands[b].1.divides(&cands[a].1) {
                keep[a] = false;
            }
        }
    }

    if ctx.rank1 {
        // F criterion: one representative per lcm class, and a class with
        // a coprime member disappears entirely.
        let mut by_lcm: Vec<(Monomial, Vec<usize>)> = Vec::new();
        for (idx, (_, lcm)) in cands.iter().enumerate() {
            if !keep[idx] {
                continue;
            }
            match by_lcm.iter_mut().find(|(l, _)| l == lcm) {
                Some((_, v)) => v.push(idx),
                None => by_lcm.push((lcm.clone(), vec![idx])),
            }
        }
        for (_, class) in &by_lcm {
            let coprime = class.iter().any(|&idx| {
                let i = cands[idx].0;
                basis[i as usize].lead().mono.coprime(&tm)
            });
            for (pos, &idx) in class.iter().enumerate() {
                keep[idx] = !coprime && pos == 0;
            }
        }
    }

    for (idx, (i, lcm)) in cands.iter().enumerate() {
        if !keep[idx] {
            continue;
        }
        let rec = PairRec {
            key: pair_key(&ctx.ring.order, lcm, tc, *i, t),
            kind: PKind::BB(*i, t),
            lcm: lcm.clone(),
            comp: tc,
        };
        alive.push((*i, t, lcm.clone(), tc));
        heap.push(Reverse((deg_of(lcm, tc), rec)));
    }

    // Pairs against the quotient basis acting on the lead component.
    if tc < ctx.qbound {
        let mut qcands: Vec<(u32, Monomial)> = Vec::new();
        for (k, h) in ctx.qgb.iter().enumerate() {
            let hm = h.leading().unwrap().0;
            if hm.coprime(&tm) {
                continue; // sound here: h is a ring scalar
            }
            qcands.push((k as u32, ctx.ring.mono_lcm(hm, &tm)));
        }
        let mut qkeep = vec![true; qcands.len()];
        for a in 0..qcands.len() {
            for b in 0..qcands.len() {
                if a == b || !qkeep[a] {
                    continue;
                }
                if qkeep[b] && qcands[b].1 != qcands[a].1 && qcands[b].1.divides(&qcands[a].1) {
                    qkeep[a] = false;
                }
            }
        }
        for (idx, (k, lcm)) in qcands.iter().enumerate() {
            if !qkeep[idx] {
                continue;
            }
            let rec = PairRec {
                key: pair_key(&ctx.ring.order, lcm, tc, t, u32::MAX - k),
                kind: PKind::BQ(t, *k),
                lcm: lcm.clone(),
                comp: tc,
            };
            heap.push(Reverse((deg_of(lcm, tc), rec)));
        }
    }

    basis.push(g);
    ctx.limits.check_basis(basis.len())?;
    Ok(())
}

/// Form the S-vector of a queued pair, or None when the pair has been
/// cancelled by the chain criterion since it was queued.
fn take_pair<K: Field>(
    rec: &PairRec,
    ctx: &GbCtx<K>,
    basis: &[MVec<K>],
    cancelled: &HashSet<(u32, u32)>,
    alive: &mut Vec<(u32, u32, Monomial, u32)>,
) -> Result<Option<MVec<K>>> {
    let f = &ctx.ring.field;
    let s = match rec.kind {
        PKind::BB(i, j) => {
            if cancelled.contains(&(i, j)) {
                return Ok(None);
            }
            alive.retain(|(a, b, _, _)| !(*a == i && *b == j));
            let gi = &basis[i as usize];
            let gj = &basis[j as usize];
            let (li, lj) = (gi.lead(), gj.lead());
            let ui = rec.lcm.div(&li.mono).unwrap();
            let uj = rec.lcm.div(&lj.mono).unwrap();
            let a = ctx.scaled(gi, &ui, &f.inv(&li.c))?;
            ctx.sub_scaled_vec(&a, gj, &uj, &f.inv(&lj.c))?
        }
        PKind::BQ(i, k) => {
            let gi = &basis[i as usize];
            let h = &ctx.qgb[k as usize];
            let li = gi.lead();
            let (hm, hc) = h.leading().unwrap();
            let ui = rec.lcm.div(&li.mono).unwrap();
            let uk = rec.lcm.div(hm).unwrap();
            let a = ctx.scaled(gi, &ui, &f.inv(&li.c))?;
            ctx.sub_scaled_poly(&a, h, li.comp, &uk, &f.inv(hc))?
        }
    };
    Ok(Some(s))
}

/// Complete `established` joined with `gens` to a Groebner basis, assuming
/// `established` already is one: pairs internal to it (including its pairs
/// against the quotient basis) have reduced to zero before and are skipped.
pub(crate) fn buchberger_extend<K: Field>(
    established: Vec<MVec<K>>,
    gens: Vec<MVec<K>>,
    ctx: &GbCtx<K>,
) -> Result<Vec<MVec<K>>> {
    let mut basis: Vec<MVec<K>> = Vec::new();
    let mut heap: BinaryHeap<Reverse<(i64, PairRec)>> = BinaryHeap::new();
    let mut cancelled: HashSet<(u32, u32)> = HashSet::new();
    let mut alive: Vec<(u32, u32, Monomial, u32)> = Vec::new(); // (i, j, lcm, comp)

    // Finished products: elements whose lead sits in a tracking component.
    // They are complete syzygy residues, so they join the output directly
    // without spawning pairs or serving as reducers.
    let mut done: Vec<MVec<K>> = Vec::new();

    for g in established {
        if g.is_zero() {
            continue;
        }
        if g.lead().comp >= ctx.track_bound {
            done.push(g);
        } else {
            basis.push(g);
        }
        ctx.limits.check_basis(basis.len())?;
    }

    // Seed with the reduced input vectors.
    let mut seeds = gens;
    // Deterministic seeding order: smaller leads first.
    seeds.sort_by(|a, b| match (a.is_zero(), b.is_zero()) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        (false, false) => {
            let la = a.lead();
            let lb = b.lead();
            ctx.cmp_term((la.comp, &la.mono), (lb.comp, &lb.mono))
        }
    });
    for g in seeds {
        let red = ctx.reduce(g, &basis, ctx.track_bound)?;
        if red.is_zero() {
            continue;
        }
        if red.lead().comp >= ctx.track_bound {
            done.push(red);
        } else {
            add_element(red, ctx, None, &mut basis, &mut heap, &mut cancelled, &mut alive)?;
        }
    }

    let mut iter = 0usize;
    while let Some(Reverse((_, rec))) = heap.pop() {
        iter += 1;
        if iter % 16 == 0 {
            ctx.limits.check_time()?;
        }
        let Some(s) = take_pair(&rec, ctx, &basis, &cancelled, &mut alive)? else {
            continue;
        };
        let red = ctx.reduce(s, &basis, ctx.track_bound)?;
        if red.is_zero() {
            continue;
        }
        if red.lead().comp >= ctx.track_bound {
            done.push(red);
        } else {
            add_element(red, ctx, None, &mut basis, &mut heap, &mut cancelled, &mut alive)?;
        }
    }

    basis.extend(done);
    Ok(basis)
}

/// Normal form against an indexed basis: reducers for a term are looked up
/// by lead component instead of scanning the whole basis. With `top_only`
/// the loop stops at the first irreducible lead, which is all a membership
/// test needs (an irreducible lead already certifies nonmembership).
fn reduce_indexed<K: Field>(
    ctx: &GbCtx<K>,
    v: MVec<K>,
    basis: &[MVec<K>],
    by_comp: &[Vec<u32>],
    top_only: bool,
) -> Result<MVec<K>> {
    let f = &ctx.ring.field;
    let mut cur: Vec<MTerm<K>> = v.terms;
    let mut pos = 0usize;
    let mut steps = 0usize;
    'outer: while pos < cur.len() {
        steps += 1;
        if steps % 256 == 0 {
            ctx.limits.check_time()?;
        }
        let lt = &cur[pos];
        for &gi in &by_comp[lt.comp as usize] {
            let g = &basis[gi as usize];
            let gl = g.lead();
            if gl.mono.divides(&lt.mono) {
                let u = lt.mono.div(&gl.mono).unwrap();
                let c = f.div(&lt.c, &gl.c);
                let red = ctx.sub_scaled_terms(&cur[pos..], g, &u, &c)?;
                cur.truncate(pos);
                cur.extend(red.terms);
                continue 'outer;
            }
        }
        if lt.comp < ctx.qbound {
            for h in ctx.qgb {
                let (hm, hc) = h.leading().unwrap();
                if hm.divides(&lt.mono) {
                    let u = lt.mono.div(hm).unwrap();
                    let c = f.div(&lt.c, hc);
                    let comp = lt.comp;
                    let red = ctx.sub_scaled_poly_terms(&cur[pos..], h, comp, &u, &c)?;
                    cur.truncate(pos);
                    cur.extend(red.terms);
                    continue 'outer;
                }
            }
        }
        if top_only {
            break;
        }
        pos += 1;
    }
    Ok(MVec { terms: cur })
}

/// Keep-mask of a minimal generating subset of a graded submodule, given
/// homogeneous candidates tagged with their degrees and the degree shifts of
/// the ambient free module's components. Candidates are consumed in
/// nondecreasing degree order against a Groebner basis of the kept ones that
/// is completed only up to the candidate degree; for homogeneous modules a
/// truncated basis decides membership in every degree up to the truncation,
/// so the completion never climbs past the top candidate degree no matter
/// how far the full basis would run.
pub(crate) fn minimal_generators<K: Field>(
    cands: &[(i64, MVec<K>)],
    shifts: &[i64],
    ctx: &GbCtx<K>,
) -> Result<Vec<bool>> {
    let mut order: Vec<usize> = (0..cands.len()).collect();
    order.sort_by_key(|&i| cands[i].0);
    let mut keep = vec![false; cands.len()];
    let mut basis: Vec<MVec<K>> = Vec::new();
    let mut by_comp: Vec<Vec<u32>> = vec![Vec::new(); shifts.len()];
    let mut heap: BinaryHeap<Reverse<(i64, PairRec)>> = BinaryHeap::new();
    let mut cancelled: HashSet<(u32, u32)> = HashSet::new();
    let mut alive: Vec<(u32, u32, Monomial, u32)> = Vec::new();
    let mut iter = 0usize;
    let mut stats: Vec<(i64, usize, usize, usize, std::time::Duration)> = Vec::new();
    for &ci in &order {
        let (cdeg, cand) = &cands[ci];
        if stats.last().map(|s| s.0) != Some(*cdeg) {
            stats.push((*cdeg, 0, 0, 0, std::time::Duration::ZERO));
        }
        let t0 = std::time::Instant::now();
        // Finish every queued pair at or below the candidate degree.
        while heap.peek().is_some_and(|Reverse((d, _))| *d <= *cdeg) {
            let Reverse((_, rec)) = heap.pop().unwrap();
            iter += 1;
            if iter % 16 == 0 {
                ctx.limits.check_time()?;
            }
            let Some(s) = take_pair(&rec, ctx, &basis, &cancelled, &mut alive)? else {
                continue;
            };
            stats.last_mut().unwrap().3 += 1;
            let red = reduce_indexed(ctx, s, &basis, &by_comp, false)?;
            if !red.is_zero() {
                by_comp[red.lead().comp as usize].push(basis.len() as u32);
                add_element(red, ctx, Some(shifts), &mut basis, &mut heap, &mut cancelled, &mut alive)?;
            }
        }
        let red = reduce_indexed(ctx, cand.clone(), &basis, &by_comp, true)?;
        {
            let st = stats.last_mut().unwrap();
            st.1 += 1;
            st.4 += t0.elapsed();
        }
        if red.is_zero() {
            continue;
        }
        keep[ci] = true;
        stats.last_mut().unwrap().2 += 1;
        by_comp[red.lead().comp as usize].push(basis.len() as u32);
        add_element(red, ctx, Some(shifts), &mut basis, &mut heap, &mut cancelled, &mut alive)?;
    }
    for (d, nc, nk, np, t) in &stats {
        eprintln!("    deg {d}: {nc} cands, {nk} kept, {np} pairs, {t:?}");
    }
    Ok(keep)
}

/// Minimalize and tail-reduce into the unique reduced basis (monic, sorted
/// ascending by leading term).
pub(crate) fn interreduce<K: Field>(basis: Vec<MVec<K>>, ctx: &GbCtx<K>) -> Result<Vec<MVec<K>>> {
    let f = &ctx.ring.field;
    let mut elems: Vec<MVec<K>> = basis.into_iter().filter(|v| !v.is_zero()).collect();
    elems.sort_by(|a, b| {
        let la = a.lead();
        let lb = b.lead();
        ctx.cmp_term((la.comp, &la.mono), (lb.comp, &lb.mono))
    });
    // Drop elements whose lead is covered by an earlier kept lead or by the
    // quotient basis.
    let mut kept: Vec<MVec<K>> = Vec::new();
    'next: for e in elems {
        let le = e.lead();
        if le.comp < ctx.qbound {
            for h in ctx.qgb {
                if h.leading().unwrap().0.divides(&le.mono) {
                    continue 'next;
                }
            }
        }
        for k in &kept {
            let lk = k.lead();
            if lk.comp == le.comp && lk.mono.divides(&le.mono) {
                continue 'next;
            }
        }
        kept.push(e);
    }
    // Tail-reduce each against the others.
    let snapshot = kept.clone();
    let mut out = Vec::with_capacity(kept.len());
    for (i, e) in snapshot.iter().enumerate() {
        let others: Vec<MVec<K>> = snapshot
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, v)| v.clone())
            .collect();
        let mut red = ctx.reduce(e.clone(), &others, u32::MAX)?;
        debug_assert!(!red.is_zero());
        let inv = f.inv(&red.lead().c);
        for t in red.terms.iter_mut() {
            t.c = f.mul(&t.c, &inv);
        }
        out.push(red);
    }
    out.sort_by(|a, b| {
        let la = a.lead();
        let lb = b.lead();
        ctx.cmp_term((la.comp, &la.mono), (lb.comp, &lb.mono))
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Public ideal-level API (rank 1, ambient polynomial ring).

/// Reduced Groebner basis of an ideal in the ambient polynomial ring.
pub fn groebner_basis<K: Field>(
    ring: &RingRc<K>,
    gens: &[Polynomial<K>],
    limits: &Limits,
) -> Result<Vec<Polynomial<K>>> {
    let ctx = GbCtx::pot(ring, &[], 0, true, limits);
    let mvecs: Vec<MVec<K>> = gens
        .iter()
        .map(|g| ctx.mvec_from_components(&ModuleVector::from_polys(vec![g.clone()])))
        .collect();
    let basis = buchberger_core(mvecs, &ctx)?;
    let red = interreduce(basis, &ctx)?;
    Ok(red
        .iter()
        .map(|v| ctx.mvec_to_components(v, 1).components.remove(0))
        .collect())
}

/// Remainder of division by `basis` (the canonical normal form when `basis`
/// is a Groebner basis).
pub fn normal_form<K: Field>(ring: &RingRc<K>, f: &Polynomial<K>, basis: &[Polynomial<K>]) -> Polynomial<K> {
    let limits = Limits::none();
    let ctx = GbCtx::pot(ring, &[], 0, true, &limits);
    let mvecs: Vec<MVec<K>> = basis
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| ctx.mvec_from_components(&ModuleVector::from_polys(vec![g.clone()])))
        .collect();
    let v = ctx.mvec_from_components(&ModuleVector::from_polys(vec![f.clone()]));
    let red = ctx.reduce(v, &mvecs, u32::MAX).expect("unbudgeted reduction");
    ctx.mvec_to_components(&red, 1).components.remove(0)
}

/// Check Buchberger's criterion exhaustively (no pruning): every S-vector of
/// `basis`, and of basis elements against the quotient ideal, reduces to 0.
pub fn certify_groebner<K: Field>(
    ring: &QRingRc<K>,
    basis: &[ModuleVector<K>],
    rank: usize,
    limits: &Limits,
) -> Result<bool> {
    let qgb = ring.gb_limited(limits)?;
    let ctx = GbCtx::pot(&ring.ambient, qgb, rank as u32, false, limits);
    let f = &ring.ambient.field;
    let mvecs: Vec<MVec<K>> = basis.iter().map(|v| ctx.mvec_from_components(v)).collect();
    for (i, a) in mvecs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let la = a.lead();
        for b in mvecs.iter().skip(i + 1) {
            if b.is_zero() {
                continue;
            }
            let lb = b.lead();
            if la.comp != lb.comp {
                continue;
            }
            let lcm = ctx.ring.mono_lcm(&la.mono, &lb.mono);
            let s0 = ctx.scaled(a, &lcm.div(&la.mono).unwrap(), &f.inv(&la.c))?;
            let s = ctx.sub_scaled_vec(&s0, b, &lcm.div(&lb.mono).unwrap(), &f.inv(&lb.c))?;
            if !ctx.reduce(s, &mvecs, u32::MAX)?.is_zero() {
                return Ok(false);
            }
        }
        for h in qgb {
            let (hm, hc) = h.leading().unwrap();
            let lcm = ctx.ring.mono_lcm(&la.mono, hm);
            let s0 = ctx.scaled(a, &lcm.div(&la.mono).unwrap(), &f.inv(&la.c))?;
            let s = ctx.sub_scaled_poly(&s0, h, la.comp, &lcm.div(hm).unwrap(), &f.inv(hc))?;
            if !ctx.reduce(s, &mvecs, u32::MAX)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Module Groebner bases over a quotient ring.

/// Reduced Groebner basis of a submodule of S^rank, S the quotient ring.
pub struct ModuleGb<K: Field> {
    ring: QRingRc<K>,
    rank: usize,
    basis: Vec<MVec<K>>,
}

impl<K: Field> ModuleGb<K> {
    pub fn new(
        ring: &QRingRc<K>,
        vecs: &[ModuleVector<K>],
        rank: usize,
        limits: &Limits,
    ) -> Result<Self> {
        for v in vecs {
            if v.rank() != rank {
                return Err(EngineError::Precondition(format!(
                    "vector of rank {} in a rank-{} module",
                    v.rank(),
                    rank
                )));
            }
        }
        let qgb = ring.gb_limited(limits)?;
        let ctx = GbCtx::pot(&ring.ambient, qgb, rank as u32, false, limits);
        let mvecs: Vec<MVec<K>> = vecs.iter().map(|v| ctx.mvec_from_components(v)).collect();
        let basis = buchberger_core(mvecs, &ctx)?;
        let basis = interreduce(basis, &ctx)?;
        Ok(ModuleGb { ring: ring.clone(), rank, basis })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ring(&self) -> &QRingRc<K> {
        &self.ring
    }

    pub fn nf(&self, v: &ModuleVector<K>, limits: &Limits) -> Result<ModuleVector<K>> {
        let qgb = self.ring.gb_limited(limits)?;
        let ctx = GbCtx::pot(&self.ring.ambient, qgb, self.rank as u32, false, limits);
        let m = ctx.mvec_from_components(v);
        let red = ctx.reduce(m, &self.basis, u32::MAX)?;
        Ok(ctx.mvec_to_components(&red, self.rank))
    }

    pub fn contains(&self, v: &ModuleVector<K>, limits: &Limits) -> Result<bool> {
        Ok(self.nf(v, limits)?.is_zero())
    }

    /// Does the basis span the whole free module (cokernel = 0)?
    pub fn is_whole_module(&self, limits: &Limits) -> Result<bool> {
        for j in 0..self.rank {
            let e = ModuleVector::unit(&self.ring.ambient, self.rank, j);
            if !self.contains(&e, limits)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn generators(&self) -> Vec<ModuleVector<K>> {
        let limits = Limits::none();
        let ctx = GbCtx::pot(&self.ring.ambient, &[], self.rank as u32, false, &limits);
        self.basis
            .iter()
            .map(|v| ctx.mvec_to_components(v, self.rank))
            .collect()
    }

    /// Leading terms (component, monomial) of the reduced basis.
    pub fn lead_terms(&self) -> Vec<(usize, Monomial)> {
        self.basis
            .iter()
            .map(|v| {
                let l = v.lead();
                (l.comp as usize, l.mono.clone())
            })
            .collect()
    }

}

// ---------------------------------------------------------------------------
// Syzygies and membership witnesses via augmented components.

/// Generators of the syzygy module of `vecs` inside S^rank: all (a_1..a_m)
/// with sum a_i v_i = 0 over the quotient ring.
pub fn syzygies<K: Field>(
    ring: &QRingRc<K>,
    vecs: &[ModuleVector<K>],
    rank: usize,
    limits: &Limits,
) -> Result<Vec<ModuleVector<K>>> {
    let (_gb, syz) = syzygies_and_gb(ring, vecs, rank, limits)?;
    Ok(syz)
}

/// As `syzygies`, also returning the Groebner basis of the span (handy when
/// the caller needs both; one augmented run computes them together).
pub fn syzygies_and_gb<K: Field>(
    ring: &QRingRc<K>,
    vecs: &[ModuleVector<K>],
    rank: usize,
    limits: &Limits,
) -> Result<(Vec<ModuleVector<K>>, Vec<ModuleVector<K>>)> {
    let k = rank as u32;
    let m = vecs.len();
    let qgb = ring.gb_limited(limits)?;
    let mut ctx = GbCtx::pot(&ring.ambient, qgb, k, false, limits);
    // Syzygy residues are final: never pair or reduce inside the tracking
    // components.
    ctx.track_bound = k;
    let one = ring.ambient.field.one();
    let mut gens = Vec::with_capacity(m);
    for (i, v) in vecs.iter().enumerate() {
        if v.rank() != rank {
            return Err(EngineError::Precondition("syzygy input rank mismatch".into()));
        }
        let mut mv = ctx.mvec_from_components(v);
        mv.terms.push(MTerm {
            comp: k + i as u32,
            mono: ring.ambient.mono_one(),
            c: one.clone(),
        });
        gens.push(mv);
    }
    let basis = buchberger_core(gens, &ctx)?;
    let mut gb_part = Vec::new();
    let mut syz_part = Vec::new();
    for v in basis {
        if v.is_zero() {
            continue;
        }
        if v.lead().comp < k {
            gb_part.push({
                let full = ctx.mvec_to_components(&v, rank + m);
                ModuleVector::from_polys(full.components[..rank].to_vec())
            });
        } else {
            let shifted = MVec {
                terms: v
                    .terms
                    .iter()
                    .map(|t| MTerm { comp: t.comp - k, mono: t.mono.clone(), c: t.c.clone() })
                    .collect(),
            };
            let mv = ctx.mvec_to_components(&shifted, m);
            let mv = mv.nf_componentwise(ring);
            if !mv.is_zero() {
                syz_part.push(mv);
            }
        }
    }
    Ok((gb_part, syz_part))
}

/// If f lies in (gens) + I, return coefficients w with f = sum w_i g_i
/// modulo I; None otherwise.
pub fn ideal_membership_witness<K: Field>(
    ring: &QRingRc<K>,
    f: &Polynomial<K>,
    gens: &[Polynomial<K>],
    limits: &Limits,
) -> Result<Option<Vec<Polynomial<K>>>> {
    let m = gens.len();
    let qgb = ring.gb_limited(limits)?;
    let mut ctx = GbCtx::pot(&ring.ambient, qgb, 1, false, limits);
    ctx.track_bound = 1;
    let one = ring.ambient.field.one();
    let mut aug = Vec::with_capacity(m);
    for (i, g) in gens.iter().enumerate() {
        let mut mv = ctx.mvec_from_components(&ModuleVector::from_polys(vec![g.clone()]));
        mv.terms.push(MTerm {
            comp: 1 + i as u32,
            mono: ring.ambient.mono_one(),
            c: one.clone(),
        });
        aug.push(mv);
    }
    let basis = buchberger_core(aug, &ctx)?;
    let reducers: Vec<MVec<K>> = basis.into_iter().filter(|v| v.lead().comp == 0).collect();
    let v = ctx.mvec_from_components(&ModuleVector::from_polys(vec![f.clone()]));
    let red = ctx.reduce(v, &reducers, 1)?;
    if red.terms.iter().any(|t| t.comp == 0) {
        return Ok(None);
    }
    let fneg = {
        let shifted = MVec {
            terms: red
                .terms
                .iter()
                .map(|t| MTerm { comp: t.comp - 1, mono: t.mono.clone(), c: t.c.clone() })
                .collect(),
        };
        ctx.mvec_to_components(&shifted, m)
    };
    Ok(Some(fneg.components.iter().map(|p| p.neg()).collect()))
}

// ---------------------------------------------------------------------------
// Derived ideal operations.

/// Reduced basis of the lift of an ideal of S to the ambient ring (always
/// contains the quotient ideal). The canonical object for comparing ideals
/// of a quotient ring.
pub fn reduced_ideal_basis<K: Field>(
    ring: &QRingRc<K>,
    gens: &[Polynomial<K>],
    limits: &Limits,
) -> Result<Vec<Polynomial<K>>> {
    let mut all: Vec<Polynomial<K>> = gens.to_vec();
    all.extend(ring.ideal_gens.iter().cloned());
    groebner_basis(&ring.ambient, &all, limits)
}

/// Colon ideal (span(gens) : f) in the quotient ring, returned as a reduced
/// basis of its lift.
pub fn ideal_quotient<K: Field>(
    ring: &QRingRc<K>,
    gens: &[Polynomial<K>],
    f: &Polynomial<K>,
    limits: &Limits,
) -> Result<Vec<Polynomial<K>>> {
    if ring.is_zero_mod(f) {
        return Ok(vec![Polynomial::one(&ring.ambient)]);
    }
    let mut vecs = vec![ModuleVector::from_polys(vec![f.clone()])];
    for g in gens {
        vecs.push(ModuleVector::from_polys(vec![g.clone()]));
    }
    let syz = syzygies(ring, &vecs, 1, limits)?;
    let firsts: Vec<Polynomial<K>> = syz.iter().map(|v| v.components[0].clone()).collect();
    reduced_ideal_basis(ring, &firsts, limits)
}

/// Intersection of two ideals of the quotient ring (reduced lift basis).
pub fn intersect_ideals<K: Field>(
    ring: &QRingRc<K>,
    a: &[Polynomial<K>],
    b: &[Polynomial<K>],
    limits: &Limits,
) -> Result<Vec<Polynomial<K>>> {
    let amb = &ring.ambient;
    let one = Polynomial::one(amb);
    let zero = Polynomial::zero(amb);
    let mut vecs = vec![ModuleVector::from_polys(vec![one.clone(), one])];
    for g in a {
        vecs.push(ModuleVector::from_polys(vec![g.clone(), zero.clone()]));
    }
    for g in b {
        vecs.push(ModuleVector::from_polys(vec![zero.clone(), g.clone()]));
    }
    let syz = syzygies(ring, &vecs, 2, limits)?;
    let firsts: Vec<Polynomial<K>> = syz.iter().map(|v| v.components[0].clone()).collect();
    reduced_ideal_basis(ring, &firsts, limits)
}

/// Annihilator of coker(columns) in S^rank, as a reduced lift basis.
pub fn annihilator_of_cokernel<K: Field>(
    ring: &QRingRc<K>,
    columns: &[ModuleVector<K>],
    rank: usize,
    limits: &Limits,
) -> Result<Vec<Polynomial<K>>> {
    if rank == 0 {
        return Ok(vec![Polynomial::one(&ring.ambient)]);
    }
    let mut ann: Option<Vec<Polynomial<K>>> = None;
    for j in 0..rank {
        let mut vecs = vec![ModuleVector::unit(&ring.ambient, rank, j)];
        vecs.extend(columns.iter().cloned());
        let syz = syzygies(ring, &vecs, rank, limits)?;
        let firsts: Vec<Polynomial<K>> = syz.iter().map(|v| v.components[0].clone()).collect();
        let qj = reduced_ideal_basis(ring, &firsts, limits)?;
        ann = Some(match ann {
            None => qj,
            Some(prev) => intersect_ideals(ring, &prev, &qj, limits)?,
        });
    }
    Ok(ann.unwrap())
}

// ---------------------------------------------------------------------------
// Elimination and monomial-map kernels.

/// Generators of (gens) intersected with the subring on the unflagged
/// variables, via a block elimination order.
pub fn eliminate<K: Field>(
    ring: &RingRc<K>,
    gens: &[Polynomial<K>],
    drop: &[bool],
    limits: &Limits,
) -> Result<Vec<Polynomial<K>>> {
    if drop.len() != ring.nvars() {
        return Err(EngineError::Precondition("elimination flag length".into()));
    }
    let elim_ring = Arc::new(PolyRing {
        field: ring.field.clone(),
        vars: ring.vars.clone(),
        weights: ring.weights.clone(),
        order: MonomialOrder::Block { eliminate: drop.to_vec() },
    });
    let ident: Vec<usize> = (0..ring.nvars()).collect();
    let egens: Vec<Polynomial<K>> = gens
        .iter()
        .map(|g| g.map_vars(&elim_ring, &ident))
        .collect::<Result<_>>()?;
    let gb = groebner_basis(&elim_ring, &egens, limits)?;
    let mut kept = Vec::new();
    for g in gb {
        let uses_dropped = g
            .terms()
            .iter()
            .any(|(m, _)| m.support().any(|i| drop[i]));
        if !uses_dropped {
            kept.push(g.map_vars(ring, &ident)?);
        }
    }
    Ok(kept)
}

/// Presentation of the subalgebra K[m_1..m_s] of the ambient ring: a new
/// polynomial ring with one variable per generator (weights the generator
/// degrees, normalized by their gcd) modulo the kernel of the monomial map.
/// The kernel of a monomial map is a toric ideal, so the result is flagged
/// as a domain.
pub fn kernel_of_monomial_map<K: Field>(
    ambient: &RingRc<K>,
    monomials: &[Monomial],
    new_names: &[String],
    limits: &Limits,
) -> Result<QRingRc<K>> {
    if monomials.is_empty() || monomials.len() != new_names.len() {
        return Err(EngineError::Input("subring generators and names disagree".into()));
    }
    for m in monomials {
        if m.is_one() {
            return Err(EngineError::Input("constant subring generator".into()));
        }
    }
    let n = ambient.nvars();
    let s = monomials.len();
    let mut vars = ambient.vars.clone();
    vars.extend(new_names.iter().cloned());
    let mut weights = ambient.weights.clone();
    weights.extend(monomials.iter().map(|m| m.wdeg()));
    let mut drop = vec![true; n];
    drop.extend(std::iter::repeat(false).take(s));
    let graph_ring = Arc::new(PolyRing {
        field: ambient.field.clone(),
        vars,
        weights,
        order: MonomialOrder::Block { eliminate: drop.clone() },
    });
    let one = graph_ring.field.one();
    let gens: Vec<Polynomial<K>> = monomials
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let tvar = Polynomial::term(&graph_ring, graph_ring.mono_var(n + i), one.clone());
            let mono = Polynomial::term(
                &graph_ring,
                graph_ring.mono_from_exps(&{
                    let mut e = m.exps().to_vec();
                    e.extend(std::iter::repeat(0).take(s));
                    e
                }),
                one.clone(),
            );
            tvar.sub(&mono)
        })
        .collect::<Result<_>>()?;
    let gb = groebner_basis(&graph_ring, &gens, limits)?;

    let degs: Vec<u32> = monomials.iter().map(|m| m.wdeg()).collect();
    let g = degs.iter().fold(0u32, |a, &b| num_integer::gcd(a, b)).max(1);
    let new_ring = PolyRing::new(
        ambient.field.clone(),
        new_names.to_vec(),
        degs.iter().map(|d| d / g).collect(),
        MonomialOrder::GrevLex,
    )?;
    let mut var_map = vec![usize::MAX; n + s];
    for (i, vm) in var_map.iter_mut().enumerate().skip(n) {
        *vm = i - n;
    }
    let mut kept = Vec::new();
    for p in gb {
        let uses_dropped = p.terms().iter().any(|(m, _)| m.support().any(|i| i < n));
        if !uses_dropped {
            kept.push(p.map_vars(&new_ring, &var_map)?);
        }
    }
    QuotientRing::new_toric(new_ring, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::field::{PrimeField, Rationals};
    use crate::polycore::parse::poly_from_str;

    type F = PrimeField;

    fn ring3() -> RingRc<F> {
        PolyRing::standard(PrimeField::new(32003).unwrap(), &["x", "y", "z"]).unwrap()
    }

    fn polys<K: Field>(r: &RingRc<K>, srcs: &[&str]) -> Vec<Polynomial<K>> {
        srcs.iter().map(|s| poly_from_str(r, s).unwrap()).collect()
    }

    /// Brute-force oracle: Buchberger with a FIFO queue and no pruning at
    /// all, followed by interreduction. Only for small test inputs.
    fn naive_reduced_gb<K: Field>(ring: &RingRc<K>, gens: &[Polynomial<K>]) -> Vec<Polynomial<K>> {
        let mut basis: Vec<Polynomial<K>> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        let mut queue: Vec<(usize, usize)> = Vec::new();
        for i in 0..basis.len() {
            for j in 0..i {
                queue.push((j, i));
            }
        }
        let mut qi = 0;
        while qi < queue.len() {
            let (i, j) = queue[qi];
            qi += 1;
            let (mi, ci) = {
                let l = basis[i].leading().unwrap();
                (l.0.clone(), l.1.clone())
            };
            let (mj, cj) = {
                let l = basis[j].leading().unwrap();
                (l.0.clone(), l.1.clone())
            };
            let lcm = ring.mono_lcm(&mi, &mj);
            let f = &ring.field;
            let a = basis[i]
                .mul_term(&lcm.div(&mi).unwrap(), &f.inv(&ci))
                .unwrap();
            let b = basis[j]
                .mul_term(&lcm.div(&mj).unwrap(), &f.inv(&cj))
                .unwrap();
            let s = a.sub(&b).unwrap();
            let red = normal_form(ring, &s, &basis);
            if !red.is_zero() {
                for k in 0..basis.len() {
                    queue.push((k, basis.len()));
                }
                basis.push(red);
            }
        }
        // Interreduce: drop covered leads, then take normal forms.
        let limits = Limits::none();
        let ctx = GbCtx::pot(ring, &[], 0, true, &limits);
        let mvecs: Vec<MVec<K>> = basis
            .iter()
            .map(|g| ctx.mvec_from_components(&ModuleVector::from_polys(vec![g.clone()])))
            .collect();
        interreduce(mvecs, &ctx)
            .unwrap()
            .iter()
            .map(|v| ctx.mvec_to_components(v, 1).components.remove(0))
            .collect()
    }

    #[test]
    fn matches_naive_buchberger() {
        let r = ring3();
        let cases: Vec<Vec<&str>> = vec![
            vec!["x^2 + y^2", "x*y"],
            vec!["x*y - z^2", "y^2 - x*z"],
            vec!["x^2 - y", "y^2 - z", "x*z - y^2"],
            vec!["x^3 - 1", "y^2 - x"],
        ];
        for case in cases {
            let gens = polys(&r, &case);
            let fast = groebner_basis(&r, &gens, &Limits::none()).unwrap();
            let slow = naive_reduced_gb(&r, &gens);
            assert_eq!(fast, slow, "case {case:?}");
        }
    }

    #[test]
    fn frozen_basis_for_circle_pair() {
        // Reduced basis of (x^2 + y^2, x*y) in grevlex, computed by the
        // no-pruning oracle and pinned here.
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["x", "y"]).unwrap();
        let gens = polys(&r, &["x^2 + y^2", "x*y"]);
        let gb = groebner_basis(&r, &gens, &Limits::none()).unwrap();
        let strings: Vec<String> = gb.iter().map(|p| p.to_string()).collect();
        assert_eq!(strings, vec!["x*y", "x^2 + y^2", "y^3"]);
    }

    #[test]
    fn cyclic3_over_rationals() {
        let r = PolyRing::standard(Rationals, &["x", "y", "z"]).unwrap();
        let gens = polys(&r, &["x + y + z", "x*y + y*z + z*x", "x*y*z - 1"]);
        let gb = groebner_basis(&r, &gens, &Limits::none()).unwrap();
        // Elimination-free sanity: x + y + z reduces to zero, 1 does not.
        let f = poly_from_str(&r, "x + y + z").unwrap();
        assert!(normal_form(&r, &f, &gb).is_zero());
        let one = Polynomial::one(&r);
        assert!(!normal_form(&r, &one, &gb).is_zero());
        assert_eq!(gb.len(), 3);
        // z^3 - 1 must be the basis element in z alone.
        let z3 = poly_from_str(&r, "z^3 - 1").unwrap();
        assert!(gb.contains(&z3));
    }

    #[test]
    fn normal_form_is_linear_on_members() {
        let r = ring3();
        let gens = polys(&r, &["x*y - z^2", "y^2 - x*z"]);
        let gb = groebner_basis(&r, &gens, &Limits::none()).unwrap();
        // A ring combination of generators reduces to zero.
        let c = polys(&r, &["x + 3*z", "y^2 - 7"]);
        let member = gens[0]
            .mul(&c[0])
            .unwrap()
            .add(&gens[1].mul(&c[1]).unwrap())
            .unwrap();
        assert!(normal_form(&r, &member, &gb).is_zero());
    }

    #[test]
    fn quotient_ring_normal_forms() {
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x", "y"]).unwrap();
        let q = QuotientRing::new(r.clone(), polys(&r, &["x^2", "y^2"])).unwrap();
        let f = poly_from_str(&r, "x^2*y + x*y + y^2").unwrap();
        assert_eq!(q.nf(&f).to_string(), "x*y");
    }

    #[test]
    fn syzygies_of_koszul_pair() {
        let r = ring3();
        let q = QuotientRing::polynomial_ring(r.clone());
        let vecs: Vec<ModuleVector<F>> = polys(&r, &["x", "y"])
            .into_iter()
            .map(|p| ModuleVector::from_polys(vec![p]))
            .collect();
        let syz = syzygies(&q, &vecs, 1, &Limits::none()).unwrap();
        assert_eq!(syz.len(), 1);
        // The Koszul syzygy (y, -x) up to sign and scale.
        let s = &syz[0];
        let prod = s.components[0]
            .mul(&poly_from_str(&r, "x").unwrap())
            .unwrap()
            .add(&s.components[1].mul(&poly_from_str(&r, "y").unwrap()).unwrap())
            .unwrap();
        assert!(prod.is_zero());
        assert!(!s.components[0].is_zero() && !s.components[1].is_zero());
    }

    #[test]
    fn syzygies_over_quotient_ring() {
        // In S = K[x]/(x^2), the annihilator of x is (x): syz(x) = (x).
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x"]).unwrap();
        let q = QuotientRing::new(r.clone(), polys(&r, &["x^2"])).unwrap();
        let vecs = vec![ModuleVector::from_polys(vec![poly_from_str(&r, "x").unwrap()])];
        let syz = syzygies(&q, &vecs, 1, &Limits::none()).unwrap();
        assert_eq!(syz.len(), 1);
        assert_eq!(syz[0].components[0].to_string(), "x");
    }

    #[test]
    fn membership_witness_recombines() {
        let r = ring3();
        let q = QuotientRing::polynomial_ring(r.clone());
        let gens = polys(&r, &["x*y - z^2", "y^2 - x*z"]);
        let f = gens[0]
            .mul(&poly_from_str(&r, "z + 1").unwrap())
            .unwrap()
            .add(&gens[1].mul(&poly_from_str(&r, "x").unwrap()).unwrap())
            .unwrap();
        let w = ideal_membership_witness(&q, &f, &gens, &Limits::none())
            .unwrap()
            .expect("member");
        let mut acc = Polynomial::zero(&r);
        for (wi, gi) in w.iter().zip(&gens) {
            acc = acc.add(&wi.mul(gi).unwrap()).unwrap();
        }
        assert_eq!(acc, f);
        let non = poly_from_str(&r, "x + 1").unwrap();
        assert!(ideal_membership_witness(&q, &non, &gens, &Limits::none())
            .unwrap()
            .is_none());
    }

    #[test]
    fn colon_and_intersection() {
        let r = ring3();
        let q = QuotientRing::polynomial_ring(r.clone());
        // ((x*y, y*z) : y) = (x, z).
        let gens = polys(&r, &["x*y", "y*z"]);
        let col = ideal_quotient(&q, &gens, &poly_from_str(&r, "y").unwrap(), &Limits::none()).unwrap();
        let expect = groebner_basis(&r, &polys(&r, &["x", "z"]), &Limits::none()).unwrap();
        assert_eq!(col, expect);
        // (x) intersect (y) = (x*y).
        let i = intersect_ideals(
            &q,
            &polys(&r, &["x"]),
            &polys(&r, &["y"]),
            &Limits::none(),
        )
        .unwrap();
        let expect = groebner_basis(&r, &polys(&r, &["x*y"]), &Limits::none()).unwrap();
        assert_eq!(i, expect);
    }

    #[test]
    fn elimination_projects() {
        // Eliminate t from (x - t^2, y - t^3): the cuspidal cubic x^3 - y^2.
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["t", "x", "y"]).unwrap();
        let gens = polys(&r, &["x - t^2", "y - t^3"]);
        let out = eliminate(&r, &gens, &[true, false, false], &Limits::none()).unwrap();
        assert_eq!(out.len(), 1);
        let expect = poly_from_str(&r, "x^3 - y^2").unwrap();
        let diff = normal_form(&r, &expect, &out);
        assert!(diff.is_zero(), "got {}", out[0]);
    }

    #[test]
    fn toric_kernel_of_veronese() {
        // K[x^2, x*y, y^2]: kernel is (T0*T2 - T1^2).
        let r = PolyRing::standard(PrimeField::new(32003).unwrap(), &["x", "y"]).unwrap();
        let monos = vec![
            r.mono_from_exps(&[2, 0]),
            r.mono_from_exps(&[1, 1]),
            r.mono_from_exps(&[0, 2]),
        ];
        let names: Vec<String> = ["a", "b", "c"].iter().map(|s| s.to_string()).collect();
        let q = kernel_of_monomial_map(&r, &monos, &names, &Limits::none()).unwrap();
        assert!(q.toric);
        assert!(q.homogeneous);
        assert_eq!(q.ambient.weights, vec![1, 1, 1]);
        assert_eq!(q.ideal_gens.len(), 1);
        let s = q.ideal_gens[0].to_string();
        assert!(s == "b^2 - a*c" || s == "a*c - b^2", "{s}");
    }

    #[test]
    fn annihilator_of_quotient_module() {
        // coker [x y] over K[x,y] has annihilator... (x, y)? No: the module
        // K[x,y]/(x, y) = K has annihilator (x, y).
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x", "y"]).unwrap();
        let q = QuotientRing::polynomial_ring(r.clone());
        let cols: Vec<ModuleVector<F>> = polys(&r, &["x", "y"])
            .into_iter()
            .map(|p| ModuleVector::from_polys(vec![p]))
            .collect();
        let ann = annihilator_of_cokernel(&q, &cols, 1, &Limits::none()).unwrap();
        let expect = groebner_basis(&r, &polys(&r, &["x", "y"]), &Limits::none()).unwrap();
        assert_eq!(ann, expect);
    }

    #[test]
    fn certified_bases() {
        let r = ring3();
        let q = QuotientRing::polynomial_ring(r.clone());
        let gens = polys(&r, &["x*y - z^2", "y^2 - x*z", "x^2 - y*z"]);
        let gb = groebner_basis(&r, &gens, &Limits::none()).unwrap();
        let vecs: Vec<ModuleVector<F>> = gb
            .iter()
            .map(|p| ModuleVector::from_polys(vec![p.clone()]))
            .collect();
        assert!(certify_groebner(&q, &vecs, 1, &Limits::none()).unwrap());
        // S(x*y - 1, y^2 - 1) leaves the irreducible remainder x - y.
        let raw: Vec<ModuleVector<F>> = polys(&r, &["x*y - 1", "y^2 - 1"])
            .iter()
            .map(|p| ModuleVector::from_polys(vec![p.clone()]))
            .collect();
        assert!(!certify_groebner(&q, &raw, 1, &Limits::none()).unwrap());
    }

    #[test]
    fn budget_aborts() {
        let r = ring3();
        let gens = polys(&r, &["x^2 - y", "y^2 - z", "x*z - y^2", "x^3 - 1"]);
        let tight = Limits {
            deadline: None,
            max_basis: Some(1),
        };
        let err = groebner_basis(&r, &gens, &tight).unwrap_err();
        assert!(err.is_resource_limit());
    }
}
