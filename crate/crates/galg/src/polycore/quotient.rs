//! Quotient rings S = P/I with a cached reduced Groebner basis.
//!
//! A polynomial ring is the quotient by the zero ideal, so the whole engine
//! works over `QuotientRing` uniformly; the empty basis makes every quotient
//! mechanism a no-op.

use super::field::Field;
use super::poly::{Polynomial, RingRc};
use crate::{EngineError, Limits, Result};
use std::sync::{Arc, OnceLock};

#[derive(Debug)]
pub struct QuotientRing<K: Field> {
    pub ambient: RingRc<K>,
    pub ideal_gens: Vec<Polynomial<K>>,
    /// True when every defining generator is weighted-homogeneous.
    pub homogeneous: bool,
    /// Set when the presentation came from the kernel of a monomial map,
    /// which certifies that the ring is a domain.
    pub toric: bool,
    gb: OnceLock<Vec<Polynomial<K>>>,
}

pub type QRingRc<K> = Arc<QuotientRing<K>>;

impl<K: Field> QuotientRing<K> {
    pub fn new(ambient: RingRc<K>, ideal_gens: Vec<Polynomial<K>>) -> Result<QRingRc<K>> {
        let mut gens = Vec::new();
        for g in ideal_gens {
            g.check_ring(&ambient)?;
            if g.as_nonzero_constant().is_some() {
                return Err(EngineError::Input(
                    "defining ideal contains a unit: the quotient is the zero ring".into(),
                ));
            }
            if !g.is_zero() {
                gens.push(g);
            }
        }
        let homogeneous = gens.iter().all(|g| g.is_homogeneous());
        Ok(Arc::new(QuotientRing {
            ambient,
            ideal_gens: gens,
            homogeneous,
            toric: false,
            gb: OnceLock::new(),
        }))
    }

    pub fn new_toric(ambient: RingRc<K>, ideal_gens: Vec<Polynomial<K>>) -> Result<QRingRc<K>> {
        let q = Self::new(ambient, ideal_gens)?;
        // Freshly created above: safe to rebuild with the flag set.
        let q = Arc::try_unwrap(q).map_err(|_| EngineError::Internal("unshared ring".into()))?;
        Ok(Arc::new(QuotientRing { toric: true, ..q }))
    }

    /// The ambient polynomial ring viewed as a quotient by (0).
    pub fn polynomial_ring(ambient: RingRc<K>) -> QRingRc<K> {
        Arc::new(QuotientRing {
            ambient,
            ideal_gens: Vec::new(),
            homogeneous: true,
            toric: true,
            gb: OnceLock::new(),
        })
    }

    pub fn is_polynomial_ring(&self) -> bool {
        self.ideal_gens.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    /// Reduced Groebner basis of the defining ideal (computed once).
    pub fn gb(&self) -> &[Polynomial<K>] {
        self.gb.get_or_init(|| {
            crate::groebner::groebner_basis(&self.ambient, &self.ideal_gens, &Limits::none())
                .expect("quotient ideal Groebner basis")
        })
    }

    /// As `gb`, but budgeted; first successful call caches.
    pub fn gb_limited(&self, limits: &Limits) -> Result<&[Polynomial<K>]> {
        if let Some(g) = self.gb.get() {
            return Ok(g);
        }
        let g = crate::groebner::groebner_basis(&self.ambient, &self.ideal_gens, limits)?;
        Ok(self.gb.get_or_init(|| g))
    }

    /// Normal form of f modulo the defining ideal: the canonical coset
    /// representative.
    pub fn nf(&self, f: &Polynomial<K>) -> Polynomial<K> {
        if self.is_polynomial_ring() {
            return f.clone();
        }
        crate::groebner::normal_form(&self.ambient, f, self.gb())
    }

    pub fn is_zero_mod(&self, f: &Polynomial<K>) -> bool {
        if self.is_polynomial_ring() {
            return f.is_zero();
        }
        self.nf(f).is_zero()
    }
}

impl<K: Field> PartialEq for QuotientRing<K> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.ideal_gens == other.ideal_gens
    }
}

pub fn same_qring<K: Field>(a: &QRingRc<K>, b: &QRingRc<K>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl<K: Field> Polynomial<K> {
    fn check_ring(&self, ring: &RingRc<K>) -> Result<()> {
        if super::poly::same_ring(self.ring(), ring) {
            Ok(())
        } else {
            Err(EngineError::RingMismatch(
                "polynomial does not live in the expected ambient ring".into(),
            ))
        }
    }
}
