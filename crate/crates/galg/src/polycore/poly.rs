//! Multivariate polynomials over a coefficient field.
//!
//! Terms are kept strictly sorted, descending in the ring's monomial order,
//! with no zero coefficients; that invariant is what makes leading-term
//! access O(1) and equality structural.

use super::field::{Field, FieldKind};
use super::monomial::{Exp, Monomial, MonomialOrder};
use crate::{EngineError, Result};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing<K: Field> {
    pub field: K,
    pub vars: Vec<String>,
    pub weights: Vec<u32>,
    pub order: MonomialOrder,
}

pub type RingRc<K> = Arc<PolyRing<K>>;

impl<K: Field> PolyRing<K> {
    pub fn new(field: K, vars: Vec<String>, weights: Vec<u32>, order: MonomialOrder) -> Result<RingRc<K>> {
        if vars.is_empty() {
            return Err(EngineError::Input("a ring needs at least one variable".into()));
        }
        if weights.len() != vars.len() {
            return Err(EngineError::Input("weights and variables disagree in length".into()));
        }
        if weights.iter().any(|&w| w == 0) {
            return Err(EngineError::Input("variable weights must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if !seen.insert(v.clone()) {
                return Err(EngineError::Input(format!("duplicate variable name {v}")));
            }
        }
        Ok(Arc::new(PolyRing { field, vars, weights, order }))
    }

    pub fn standard(field: K, vars: &[&str]) -> Result<RingRc<K>> {
        PolyRing::new(
            field,
            vars.iter().map(|s| s.to_string()).collect(),
            vec![1; vars.len()],
            MonomialOrder::GrevLex,
        )
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field_kind(&self) -> FieldKind {
        self.field.kind()
    }

    pub fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn mono_one(&self) -> Monomial {
        Monomial::one(self.nvars())
    }

    pub fn mono_var(&self, i: usize) -> Monomial {
        Monomial::var(i, self.nvars(), &self.weights)
    }

    pub fn mono_from_exps(&self, exps: &[Exp]) -> Monomial {
        Monomial::new(exps, &self.weights)
    }

    pub fn mono_lcm(&self, a: &Monomial, b: &Monomial) -> Monomial {
        a.lcm(b, &self.weights)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

/// Same ring object, or structurally equal ring.
pub fn same_ring<K: Field>(a: &RingRc<K>, b: &RingRc<K>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct Polynomial<K: Field> {
    pub(crate) ring: RingRc<K>,
    /// Strictly descending in the ring order; no zero coefficients.
    pub(crate) terms: Vec<(Monomial, K::Elem)>,
}

impl<K: Field> PartialEq for Polynomial<K> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<K: Field> Polynomial<K> {
    pub fn zero(ring: &RingRc<K>) -> Self {
        Polynomial { ring: ring.clone(), terms: Vec::new() }
    }

    pub fn one(ring: &RingRc<K>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn constant(ring: &RingRc<K>, c: K::Elem) -> Self {
        if ring.field.is_zero(&c) {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(ring.mono_one(), c)] }
    }

    pub fn var(ring: &RingRc<K>, i: usize) -> Self {
        Polynomial { ring: ring.clone(), terms: vec![(ring.mono_var(i), ring.field.one())] }
    }

    pub fn term(ring: &RingRc<K>, m: Monomial, c: K::Elem) -> Self {
        if ring.field.is_zero(&c) {
            return Self::zero(ring);
        }
        Polynomial { ring: ring.clone(), terms: vec![(m, c)] }
    }

    /// Build from unsorted terms, combining duplicates and dropping zeros.
    pub fn from_terms(ring: &RingRc<K>, terms: Vec<(Monomial, K::Elem)>) -> Self {
        let mut map: HashMap<Monomial, K::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match map.entry(m) {
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    let s = ring.field.add(e.get(), &c);
                    if ring.field.is_zero(&s) {
                        e.remove();
                    } else {
                        *e.get_mut() = s;
                    }
                }
                std::collections::hash_map::Entry::Vacant(e) => {
                    if !ring.field.is_zero(&c) {
                        e.insert(c);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, K::Elem)> = map.into_iter().collect();
        terms.sort_unstable_by(|a, b| ring.cmp_mono(&b.0, &a.0));
        Polynomial { ring: ring.clone(), terms }
    }

    pub fn ring(&self) -> &RingRc<K> {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, K::Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading(&self) -> Option<(&Monomial, &K::Elem)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    /// Nonzero constant polynomials are the recognizable units everywhere.
    pub fn as_nonzero_constant(&self) -> Option<&K::Elem> {
        match self.terms.as_slice() {
            [(m, c)] if m.is_one() => Some(c),
            _ => None,
        }
    }

    pub fn check_same_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(EngineError::RingMismatch(format!(
                "operands live in different rings ({:?} vs {:?})",
                self.ring.vars, other.ring.vars
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        Ok(self.merged(other, false))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        Ok(self.merged(other, true))
    }

    fn merged(&self, other: &Self, negate: bool) -> Self {
        let f = &self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match self.ring.cmp_mono(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { f.neg(cb) } else { cb.clone() };
                    out.push((mb.clone(), c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { f.sub(ca, cb) } else { f.add(ca, cb) };
                    if !f.is_zero(&c) {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        for (m, c) in &self.terms[i..] {
            out.push((m.clone(), c.clone()));
        }
        for (m, c) in &other.terms[j..] {
            let c = if negate { f.neg(c) } else { c.clone() };
            out.push((m.clone(), c));
        }
        Polynomial { ring: self.ring.clone(), terms: out }
    }

    pub fn neg(&self) -> Self {
        let f = &self.ring.field;
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &K::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), f.mul(k, c))).collect(),
        }
    }

    /// Multiply by the term `c * x^m`. Order-compatible, so sortedness survives.
    pub fn mul_term(&self, m: &Monomial, c: &K::Elem) -> Result<Self> {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Ok(Self::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (mm, cc) in &self.terms {
            terms.push((mm.mul(m)?, f.mul(cc, c)));
        }
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let f = &self.ring.field;
        let mut map: HashMap<Monomial, K::Elem> = HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb)?;
                let p = f.mul(ca, cb);
                match map.entry(m) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let s = f.add(e.get(), &p);
                        if f.is_zero(&s) {
                            e.remove();
                        } else {
                            *e.get_mut() = s;
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(p);
                    }
                }
            }
        }
        let mut terms: Vec<(Monomial, K::Elem)> = map.into_iter().collect();
        terms.sort_unstable_by(|a, b| self.ring.cmp_mono(&b.0, &a.0));
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Scale so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                if self.ring.field.is_one(c) {
                    self.clone()
                } else {
                    let inv = self.ring.field.inv(c);
                    self.scale(&inv)
                }
            }
        }
    }

    /// Weighted degree when homogeneous; None for the zero polynomial;
    /// error when inhomogeneous.
    pub fn weighted_degree(&self) -> Result<Option<i64>> {
        let mut deg = None;
        for (m, _) in &self.terms {
            match deg {
                None => deg = Some(m.wdeg() as i64),
                Some(d) if d == m.wdeg() as i64 => {}
                Some(d) => {
                    return Err(EngineError::Inhomogeneous(format!(
                        "terms of weighted degrees {d} and {} in {}",
                        m.wdeg(),
                        self
                    )))
                }
            }
        }
        Ok(deg)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.weighted_degree().is_ok()
    }

    /// Largest weighted degree over all terms (0 for the zero polynomial).
    pub fn max_wdeg(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.wdeg()).max().unwrap_or(0)
    }

    /// Re-interpret in `target`, mapping variable i of the source to
    /// variable `var_map[i]` of the target. Weights must be compatible for
    /// degree caches to stay valid, which `Monomial::new` re-establishes.
    pub fn map_vars(&self, target: &RingRc<K>, var_map: &[usize]) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut exps = vec![0 as Exp; target.nvars()];
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    let t = var_map[i];
                    exps[t] = exps[t]
                        .checked_add(e)
                        .ok_or(EngineError::ExponentOverflow)?;
                }
            }
            terms.push((target.mono_from_exps(&exps), c.clone()));
        }
        Ok(Polynomial::from_terms(target, terms))
    }

    /// Canonical content-free form (primitive integer coefficients over QQ,
    /// identity over GF(p)). Lead sign/scale convention comes from the field.
    pub fn remove_content(&self) -> Self {
        let mut coeffs: Vec<K::Elem> = self.terms.iter().map(|(_, c)| c.clone()).collect();
        self.ring.field.remove_content(&mut coeffs);
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .zip(coeffs)
                .map(|((m, _), c)| (m.clone(), c))
                .collect(),
        }
    }
}

impl<K: Field> std::fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let field = &self.ring.field;
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let cs = field.display(c);
            let (neg, abs) = match cs.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, cs),
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || abs != "1" {
                factors.push(abs);
            }
            for (vi, &e) in m.exps().iter().enumerate() {
                if e == 1 {
                    factors.push(self.ring.vars[vi].clone());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.ring.vars[vi], e));
                }
            }
            let _ = write!(s, "{}", factors.join("*"));
        }
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::field::PrimeField;

    fn ring() -> RingRc<PrimeField> {
        PolyRing::standard(PrimeField::new(101).unwrap(), &["x", "y"]).unwrap()
    }

    #[test]
    fn arithmetic_and_display() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        let f = x.mul(&x).unwrap().add(&y.scale(&r.field.from_i64(-3))).unwrap();
        assert_eq!(f.to_string(), "x^2 - 3*y");
        let g = f.sub(&f).unwrap();
        assert!(g.is_zero());
        let h = x.add(&y).unwrap().pow(2).unwrap();
        assert_eq!(h.num_terms(), 3);
        assert!(h.is_homogeneous());
        assert_eq!(h.weighted_degree().unwrap(), Some(2));
        let inh = x.add(&Polynomial::one(&r)).unwrap();
        assert!(inh.weighted_degree().is_err());
    }

    #[test]
    fn leading_term_respects_order() {
        let r = ring();
        let x = Polynomial::var(&r, 0);
        let y = Polynomial::var(&r, 1);
        // x^2 y + x y^2: grevlex lead is x^2 y.
        let f = x
            .mul(&x)
            .unwrap()
            .mul(&y)
            .unwrap()
            .add(&x.mul(&y).unwrap().mul(&y).unwrap())
            .unwrap();
        let (m, _) = f.leading().unwrap();
        assert_eq!(m.exps(), &[2, 1]);
    }

    #[test]
    fn ring_mismatch_detected() {
        let r1 = ring();
        let r2 = PolyRing::standard(PrimeField::new(101).unwrap(), &["a", "b"]).unwrap();
        let x = Polynomial::var(&r1, 0);
        let a = Polynomial::var(&r2, 0);
        assert!(x.add(&a).is_err());
    }
}
