//! Monomials as packed exponent vectors, and monomial orders.
//!
//! The weighted total degree is cached on the monomial; every constructor
//! goes through the owning ring so the cache always reflects that ring's
//! weights. Orders are global (1 is minimal), which the Groebner engine
//! relies on for termination.

use serde::Serialize;
use smallvec::SmallVec;
use std::cmp::Ordering;

pub type Exp = u16;

/// Inline capacity covers doubled variable sets for enveloping algebras.
const INLINE: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    exps: SmallVec<[Exp; INLINE]>,
    wdeg: u32,
}

impl Monomial {
    pub fn new(exps: &[Exp], weights: &[u32]) -> Self {
        debug_assert_eq!(exps.len(), weights.len());
        let wdeg = exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum();
        Monomial {
            exps: SmallVec::from_slice(exps),
            wdeg,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            wdeg: 0,
        }
    }

    pub fn var(i: usize, nvars: usize, weights: &[u32]) -> Self {
        let mut exps = SmallVec::from_elem(0, nvars);
        exps[i] = 1;
        Monomial {
            exps,
            wdeg: weights[i],
        }
    }

    pub fn exps(&self) -> &[Exp] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> Exp {
        self.exps[i]
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    /// Weighted total degree with respect to the owning ring's weights.
    pub fn wdeg(&self) -> u32 {
        self.wdeg
    }

    pub fn is_one(&self) -> bool {
        self.wdeg == 0 && self.exps.iter().all(|&e| e == 0)
    }

    pub fn total_deg(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Monomial) -> crate::Result<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = self.exps.clone();
        for (e, o) in exps.iter_mut().zip(&other.exps) {
            *e = e
                .checked_add(*o)
                .ok_or(crate::EngineError::ExponentOverflow)?;
        }
        Ok(Monomial {
            exps,
            wdeg: self.wdeg + other.wdeg,
        })
    }

    /// `self / other`, or None when not divisible.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        debug_assert_eq!(self.nvars(), other.nvars());
        let mut exps = self.exps.clone();
        for (e, o) in exps.iter_mut().zip(&other.exps) {
            if *e < *o {
                return None;
            }
            *e -= *o;
        }
        Some(Monomial {
            exps,
            wdeg: self.wdeg - other.wdeg,
        })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        debug_assert_eq!(self.nvars(), other.nvars());
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32]) -> Monomial {
        let exps: SmallVec<[Exp; INLINE]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.max(b))
            .collect();
        let wdeg = exps
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u32 * w)
            .sum();
        Monomial { exps, wdeg }
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Variable indices with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    /// Extend with zero exponents for `extra` new trailing variables.
    pub fn extend_vars(&self, extra: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.extend(std::iter::repeat(0).take(extra));
        Monomial {
            exps,
            wdeg: self.wdeg,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MonomialOrder {
    /// Degree (weighted) reverse lexicographic; the workhorse order.
    GrevLex,
    Lex,
    /// Elimination order: total degree in the flagged block first, then
    /// weighted grevlex on the full exponent vector. Monomials involving a
    /// flagged variable dominate all monomials in the remaining variables.
    Block { eliminate: Vec<bool> },
}

impl MonomialOrder {
    /// Compare under this order; weighted degrees are cached on the monomials.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::GrevLex => grevlex(a, b),
            MonomialOrder::Lex => lex(a, b),
            MonomialOrder::Block { eliminate } => {
                let da: u32 = a
                    .exps
                    .iter()
                    .zip(eliminate)
                    .filter(|(_, &f)| f)
                    .map(|(&e, _)| e as u32)
                    .sum();
                let db: u32 = b
                    .exps
                    .iter()
                    .zip(eliminate)
                    .filter(|(_, &f)| f)
                    .map(|(&e, _)| e as u32)
                    .sum();
                da.cmp(&db).then_with(|| grevlex(a, b))
            }
        }
    }

    /// Sort key that agrees with `cmp`: k(a) < k(b) iff a < b. Used for
    /// context-free priority queues.
    pub fn sort_key(&self, m: &Monomial) -> SortKey {
        match self {
            MonomialOrder::GrevLex => SortKey {
                deg: m.wdeg(),
                tail: m.exps.iter().rev().map(|&e| Exp::MAX - e).collect(),
            },
            MonomialOrder::Lex => SortKey {
                deg: 0,
                tail: m.exps.iter().copied().collect(),
            },
            MonomialOrder::Block { eliminate } => {
                let d: u32 = m
                    .exps
                    .iter()
                    .zip(eliminate)
                    .filter(|(_, &f)| f)
                    .map(|(&e, _)| e as u32)
                    .sum();
                let mut tail: Vec<Exp> = Vec::with_capacity(m.nvars() + 2);
                // Embed the grevlex tiebreak after the block degree.
                tail.push((m.wdeg() >> 16) as u16);
                tail.push((m.wdeg() & 0xffff) as u16);
                tail.extend(m.exps.iter().rev().map(|&e| Exp::MAX - e));
                SortKey { deg: d, tail }
            }
        }
    }
}

/// Context-free order-isomorphic key for heap storage.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SortKey {
    deg: u32,
    tail: Vec<Exp>,
}

fn grevlex(a: &Monomial, b: &Monomial) -> Ordering {
    match a.wdeg().cmp(&b.wdeg()) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.exps.iter().rev().zip(b.exps.iter().rev()) {
        match x.cmp(y) {
            Ordering::Equal => {}
            // Smaller exponent on the last differing variable wins.
            Ordering::Less => return Ordering::Greater,
            Ordering::Greater => return Ordering::Less,
        }
    }
    Ordering::Equal
}

fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    for (x, y) in a.exps.iter().zip(&b.exps) {
        match x.cmp(y) {
            Ordering::Equal => {}
            o => return o,
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[Exp]) -> Monomial {
        Monomial::new(exps, &vec![1; exps.len()])
    }

    #[test]
    fn grevlex_classic() {
        let ord = MonomialOrder::GrevLex;
        // x^2 y z > x y^3 is false in grevlex (degrees 4 vs 5).
        assert_eq!(
            ord.cmp(&m(&[2, 1, 1]), &m(&[1, 3, 0])),
            Ordering::Less
        );
        // Same degree: x^2 y z vs x y^2 z: last differing var is y.
        assert_eq!(
            ord.cmp(&m(&[2, 1, 1]), &m(&[1, 2, 1])),
            Ordering::Greater
        );
        // x z vs y^2: last differing is z, x z has bigger z-exponent -> smaller.
        assert_eq!(ord.cmp(&m(&[1, 0, 1]), &m(&[0, 2, 0])), Ordering::Less);
    }

    #[test]
    fn lex_classic() {
        let ord = MonomialOrder::Lex;
        assert_eq!(
            ord.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])),
            Ordering::Greater
        );
    }

    #[test]
    fn block_eliminates() {
        let ord = MonomialOrder::Block {
            eliminate: vec![true, false],
        };
        // Any monomial containing x dominates any power of y.
        assert_eq!(
            ord.cmp(&m(&[1, 0]), &m(&[0, 9])),
            Ordering::Greater
        );
    }

    #[test]
    fn sort_key_is_order_isomorphic() {
        let ords = [
            MonomialOrder::GrevLex,
            MonomialOrder::Lex,
            MonomialOrder::Block {
                eliminate: vec![true, false, false],
            },
        ];
        let ms: Vec<Monomial> = [
            [0, 0, 0],
            [1, 0, 0],
            [0, 1, 0],
            [0, 0, 1],
            [2, 1, 0],
            [1, 1, 1],
            [0, 3, 0],
            [2, 0, 2],
        ]
        .iter()
        .map(|e| m(e))
        .collect();
        for ord in &ords {
            for a in &ms {
                for b in &ms {
                    assert_eq!(
                        ord.cmp(a, b),
                        ord.sort_key(a).cmp(&ord.sort_key(b)),
                        "{ord:?} {a:?} {b:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn mul_div_lcm() {
        let w = [1u32, 2];
        let a = Monomial::new(&[1, 2], &w);
        let b = Monomial::new(&[0, 1], &w);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.exps(), &[1, 3]);
        assert_eq!(p.wdeg(), 7);
        assert_eq!(p.div(&a).unwrap().exps(), &[0, 1]);
        assert!(p.div(&Monomial::new(&[2, 0], &w)).is_none());
        assert_eq!(a.lcm(&b, &w).exps(), &[1, 2]);
        assert!(Monomial::new(&[1, 0], &w).coprime(&b));
    }
}
