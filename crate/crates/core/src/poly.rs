//! Sparse multivariate polynomials over Q and derivative multi-indices.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rat::{self, Rat};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
}

/// Exponent/derivative multi-index of fixed length (the ambient dimension).
///
/// Doubles as a monomial exponent vector and as the order vector of a
/// partial-derivative operator `d^a = d1^a1 ... dn^an`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The unit index `e_axis` (0-based axis).
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total order `|a|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise subtraction, `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if b > a {
                return None;
            }
            out.push(a - b);
        }
        Some(MultiIndex(out))
    }

    /// Product of componentwise binomials `C(a_i, b_i)`.
    pub fn binomial(&self, lower: &MultiIndex) -> Rat {
        let mut acc = rat::rint(1);
        for (a, b) in self.0.iter().zip(&lower.0) {
            if b > a {
                return Rat::zero();
            }
            acc *= rat::binomial(*a, *b);
        }
        acc
    }

    /// All `b` with `b <= self` componentwise, in lexicographic order.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for e in 0..=a {
                    let mut p = prefix.clone();
                    p.push(e);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All ordered decompositions of `self` into `parts` multi-indices
    /// summing to `self`, each paired with the multinomial coefficient
    /// `prod_i a_i! / (g_1i! ... g_ki!)`.
    pub fn decompositions(&self, parts: usize) -> Vec<(Vec<MultiIndex>, Rat)> {
        assert!(parts >= 1);
        let mut acc: Vec<(Vec<MultiIndex>, MultiIndex, Rat)> =
            vec![(Vec::new(), self.clone(), rat::rint(1))];
        for _ in 0..parts - 1 {
            let mut next = Vec::new();
            for (chosen, rest, coeff) in &acc {
                for beta in rest.sub_indices() {
                    let c = rest.binomial(&beta);
                    let mut chosen2 = chosen.clone();
                    chosen2.push(beta.clone());
                    let rest2 = rest.checked_sub(&beta).unwrap();
                    next.push((chosen2, rest2, coeff.clone() * c));
                }
            }
            acc = next;
        }
        acc.into_iter()
            .map(|(mut chosen, rest, coeff)| {
                chosen.push(rest);
                (chosen, coeff)
            })
            .collect()
    }

    /// All multi-indices of the given dimension with total order exactly `k`.
    pub fn all_of_order(dim: usize, k: u32) -> Vec<MultiIndex> {
        if dim == 0 {
            return if k == 0 { vec![MultiIndex(vec![])] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 0..=k {
            for mut tail in MultiIndex::all_of_order(dim - 1, k - first) {
                let mut v = vec![first];
                v.append(&mut tail.0);
                out.push(MultiIndex(v));
            }
        }
        out
    }

    /// All multi-indices of total order `<= max`, sorted.
    pub fn all_up_to_order(dim: usize, max: u32) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0..=max)
            .flat_map(|k| MultiIndex::all_of_order(dim, k))
            .collect();
        out.sort();
        out
    }
}

impl fmt::Display for MultiIndex {
    /// Renders as a derivative: `d[1,1,2]` lists each axis (1-based) with
    /// multiplicity; the zero index renders as `d[]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut slots = Vec::new();
        for (axis, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                slots.push((axis + 1).to_string());
            }
        }
        write!(f, "d[{}]", slots.join(","))
    }
}

/// Sparse exact polynomial in `x1..xn`.
///
/// No zero coefficients are stored; all keys have length `ambient_dim`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    dim: usize,
    terms: BTreeMap<MultiIndex, Rat>,
}

impl Polynomial {
    pub fn zero(dim: usize) -> Self {
        Polynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        let mut p = Polynomial::zero(dim);
        if !c.is_zero() {
            p.terms.insert(MultiIndex::zero(dim), c);
        }
        p
    }

    pub fn one(dim: usize) -> Self {
        Polynomial::constant(dim, rat::rint(1))
    }

    /// The coordinate `x_axis` (0-based axis).
    pub fn var(dim: usize, axis: usize) -> Self {
        Polynomial::monomial(dim, MultiIndex::unit(dim, axis), rat::rint(1))
    }

    pub fn monomial(dim: usize, exp: MultiIndex, c: Rat) -> Self {
        debug_assert_eq!(exp.dim(), dim);
        let mut p = Polynomial::zero(dim);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> Rat {
        self.terms.get(exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.order()).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, exp: MultiIndex, c: Rat) {
        debug_assert_eq!(exp.dim(), self.dim);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_dim(&self, other: &Polynomial) -> Result<(), PolyError> {
        if self.dim != other.dim {
            Err(PolyError::DimMismatch(self.dim, other.dim))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        self.check_dim(other).expect("polynomial add");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&rat::rint(-1))
    }

    pub fn scale(&self, c: &Rat) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.dim);
        }
        Polynomial {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        self.check_dim(other).expect("polynomial mul");
        let mut out = Polynomial::zero(self.dim);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.add(mb), ca * cb);
            }
        }
        out
    }

    /// First partial derivative along `axis` (0-based).
    pub fn partial(&self, axis: usize) -> Polynomial {
        assert!(
            axis < self.dim,
            "{}",
            PolyError::AxisOutOfRange { axis, dim: self.dim }
        );
        let mut out = Polynomial::zero(self.dim);
        for (m, c) in &self.terms {
            let e = m.0[axis];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[axis] = e - 1;
                out.add_term(m2, c * rat::rint(e as i64));
            }
        }
        out
    }

    /// Applies the derivative operator `d^a`.
    pub fn derive(&self, alpha: &MultiIndex) -> Polynomial {
        let mut out = self.clone();
        for (axis, &e) in alpha.0.iter().enumerate() {
            for _ in 0..e {
                out = out.partial(axis);
            }
        }
        out
    }

    /// All monomials `x^m` of total degree `<= max`, as polynomials.
    pub fn monomial_basis(dim: usize, max: u32) -> Vec<Polynomial> {
        MultiIndex::all_up_to_order(dim, max)
            .into_iter()
            .map(|m| Polynomial::monomial(dim, m, rat::rint(1)))
            .collect()
    }
}

fn display_monomial(exp: &MultiIndex) -> String {
    let mut factors = Vec::new();
    for (axis, &e) in exp.0.iter().enumerate() {
        match e {
            0 => {}
            1 => factors.push(format!("x{}", axis + 1)),
            _ => factors.push(format!("x{}^{}", axis + 1, e)),
        }
    }
    factors.join("*")
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let mag = c.abs();
            let neg = rat::signum(c) < 0;
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = display_monomial(m);
            let one = mag == rat::rint(1);
            match (one, mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) => write!(f, "{}", rat::display(&mag))?,
                (false, false) => write!(f, "{}*{mono}", rat::display(&mag))?,
            }
        }
        Ok(())
    }
}
