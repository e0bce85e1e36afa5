//! Deterministic random generators for the identity suites.
//!
//! The acceptance tests draw hundreds of random cochains, polyvectors and
//! polynomials from a seeded stream; everything here is a pure function of
//! the stream state, so the suites are reproducible bit-for-bit.

use crate::hochschild::PolyDiffOp;
use crate::multivector::{increasing_tuples, PolyVectorField};
use crate::poly::{MultiIndex, Polynomial};
use crate::rat::{rat, Rat};

/// Tiny deterministic PRNG (xorshift64*); no external crate needed for the
/// library side, and test suites can seed their own streams.
#[derive(Debug, Clone)]
pub struct Stream {
    state: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream {
            state: seed.max(1),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }

    /// Small nonzero rational with numerator in -4..=4, denominator 1..=3.
    pub fn rational(&mut self) -> Rat {
        let num = loop {
            let n = self.below(9) as i64 - 4;
            if n != 0 {
                break n;
            }
        };
        let den = self.below(3) as i64 + 1;
        rat(num, den)
    }

    /// Sparse polynomial with up to `terms` monomials of degree `<= deg`.
    pub fn polynomial(&mut self, dim: usize, deg: u32, terms: usize) -> Polynomial {
        let monos = MultiIndex::all_up_to_order(dim, deg);
        let mut p = Polynomial::zero(dim);
        for _ in 0..terms {
            let m = monos[self.below(monos.len())].clone();
            p.add_term(m, self.rational());
        }
        p
    }

    /// Polyvector field of the given grade with up to `terms` components.
    pub fn polyvector(
        &mut self,
        dim: usize,
        grade: usize,
        deg: u32,
        terms: usize,
    ) -> PolyVectorField {
        let tuples = increasing_tuples(dim, grade);
        let mut v = PolyVectorField::zero(dim, grade);
        if tuples.is_empty() {
            return v;
        }
        for _ in 0..terms {
            let t = tuples[self.below(tuples.len())].clone();
            v.add_component(t, self.polynomial(dim, deg, 1));
        }
        v
    }

    /// Polydifferential operator with up to `terms` terms, per-slot order
    /// `<= dord`, coefficient degree `<= deg`.
    pub fn op(
        &mut self,
        dim: usize,
        arity: usize,
        dord: u32,
        deg: u32,
        terms: usize,
    ) -> PolyDiffOp {
        let slots = MultiIndex::all_up_to_order(dim, dord);
        let mut op = PolyDiffOp::zero(dim, arity);
        for _ in 0..terms {
            let key: Vec<MultiIndex> = (0..arity)
                .map(|_| slots[self.below(slots.len())].clone())
                .collect();
            op.add_term(key, self.polynomial(dim, deg, 1));
        }
        op
    }
}
