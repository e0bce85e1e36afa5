//! Polydifferential Hochschild cochains: differential, cup product,
//! insertion compositions, Gerstenhaber bracket, HKR maps, and exact
//! truncated solves of `delta psi = phi`.
//!
//! Convention fixed here once and used everywhere downstream:
//!
//! ```text
//! phi o_k psi        -- psi substituted into slot k of phi, expanded by the
//!                       generalized Leibniz rule into a polydifferential op
//! phi o psi  = sum_k (-1)^((k-1)(q-1)) phi o_k psi
//! [phi, psi] = phi o psi - (-1)^((p-1)(q-1)) psi o phi
//! delta(phi)(f1..f_{p+1}) = f1 phi(f2..) + sum_i (-1)^i phi(.. f_i f_{i+1} ..)
//!                           + (-1)^(p+1) phi(..f_p) f_{p+1}
//! ```
//!
//! With these choices the bracket is the commutator on 1-cochains, satisfies
//! the graded Jacobi identity, and `delta(phi) = -[phi, mu]` holds on the
//! nose for every arity (`mu` the multiplication 2-cochain). The variant
//! `-[mu, phi]` equals `delta` only up to the arity sign
//! `(-1)^(p-1)`; the arity-uniform form is the one asserted in tests.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exec;
use crate::linalg::{self, InconsistencyCertificate, LinearOutcome, LinearProblem, SparseVec};
use crate::multivector::PolyVectorField;
use crate::poly::{MultiIndex, Polynomial};
use crate::rat::{self, Rat};

#[derive(Debug, Error)]
pub enum HochError {
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("arity mismatch: operator takes {arity} arguments, got {got}")]
    ArityMismatch { arity: usize, got: usize },
    #[error("insertion position {pos} out of range 1..={arity}")]
    PositionOutOfRange { pos: usize, arity: usize },
    #[error("operator is not a Hochschild cocycle; delta(phi) has {0} terms")]
    NotClosed(usize),
}

/// p-ary polydifferential operator,
/// `phi(f1..fp) = sum c(x) * d^{a1} f1 * ... * d^{ap} fp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyDiffOp {
    dim: usize,
    arity: usize,
    terms: BTreeMap<Vec<MultiIndex>, Polynomial>,
}

impl PolyDiffOp {
    pub fn zero(dim: usize, arity: usize) -> Self {
        PolyDiffOp {
            dim,
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// A function as a 0-ary cochain.
    pub fn from_polynomial(p: Polynomial) -> Self {
        let dim = p.dim();
        let mut op = PolyDiffOp::zero(dim, 0);
        op.add_term(vec![], p);
        op
    }

    /// The identity 1-cochain.
    pub fn identity(dim: usize) -> Self {
        let mut op = PolyDiffOp::zero(dim, 1);
        op.add_term(vec![MultiIndex::zero(dim)], Polynomial::one(dim));
        op
    }

    /// The multiplication 2-cochain `mu(f, g) = fg`.
    pub fn multiplication(dim: usize) -> Self {
        let mut op = PolyDiffOp::zero(dim, 2);
        op.add_term(
            vec![MultiIndex::zero(dim), MultiIndex::zero(dim)],
            Polynomial::one(dim),
        );
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<MultiIndex>, &Polynomial)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest single-slot derivative order appearing in any term.
    pub fn max_slot_order(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|k| k.iter().map(|a| a.order()))
            .max()
            .unwrap_or(0)
    }

    /// Largest total degree among coefficient polynomials.
    pub fn coeff_degree(&self) -> u32 {
        self.terms
            .values()
            .map(|c| c.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn add_term(&mut self, key: Vec<MultiIndex>, c: Polynomial) {
        debug_assert_eq!(key.len(), self.arity);
        debug_assert!(key.iter().all(|a| a.dim() == self.dim));
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &PolyDiffOp) -> PolyDiffOp {
        assert_eq!(self.dim, other.dim);
        assert_eq!(self.arity, other.arity, "arity mismatch in cochain sum");
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyDiffOp) -> PolyDiffOp {
        self.add(&other.scale(&rat::rint(-1)))
    }

    pub fn scale(&self, c: &Rat) -> PolyDiffOp {
        let mut out = PolyDiffOp::zero(self.dim, self.arity);
        for (k, p) in &self.terms {
            out.add_term(k.clone(), p.scale(c));
        }
        out
    }

    /// Evaluates the operator on polynomial arguments.
    pub fn apply(&self, args: &[Polynomial]) -> Result<Polynomial, HochError> {
        if args.len() != self.arity {
            return Err(HochError::ArityMismatch {
                arity: self.arity,
                got: args.len(),
            });
        }
        for a in args {
            if a.dim() != self.dim {
                return Err(HochError::DimMismatch(self.dim, a.dim()));
            }
        }
        let mut out = Polynomial::zero(self.dim);
        for (key, c) in &self.terms {
            let mut prod = c.clone();
            for (alpha, f) in key.iter().zip(args) {
                if prod.is_zero() {
                    break;
                }
                prod = prod.mul(&f.derive(alpha));
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    /// Inserts a fresh zero-order slot at position `pos` (0-based, `0..=p`).
    fn insert_zero_slot(&self, pos: usize) -> PolyDiffOp {
        let mut out = PolyDiffOp::zero(self.dim, self.arity + 1);
        for (key, c) in &self.terms {
            let mut k = key.clone();
            k.insert(pos, MultiIndex::zero(self.dim));
            out.add_term(k, c.clone());
        }
        out
    }

    /// Leibniz-splits slot `i` (1-based) into two adjacent slots:
    /// the term `d^a (f_i f_{i+1})` becomes `sum_b C(a,b) d^b f_i d^(a-b) f_{i+1}`.
    fn merge_slots(&self, i: usize) -> PolyDiffOp {
        debug_assert!(i >= 1 && i <= self.arity);
        let mut out = PolyDiffOp::zero(self.dim, self.arity + 1);
        for (key, c) in &self.terms {
            let alpha = &key[i - 1];
            for beta in alpha.sub_indices() {
                let gamma = alpha.checked_sub(&beta).unwrap();
                let coeff = alpha.binomial(&beta);
                let mut k = key.clone();
                k[i - 1] = beta;
                k.insert(i, gamma);
                out.add_term(k, c.scale(&coeff));
            }
        }
        out
    }

    /// Substitutes `psi` into slot `k` (1-based) and expands through the
    /// outer derivatives by the generalized Leibniz rule.
    pub fn compose_at(&self, k: usize, psi: &PolyDiffOp) -> Result<PolyDiffOp, HochError> {
        if self.dim != psi.dim {
            return Err(HochError::DimMismatch(self.dim, psi.dim));
        }
        if k < 1 || k > self.arity {
            return Err(HochError::PositionOutOfRange {
                pos: k,
                arity: self.arity,
            });
        }
        let q = psi.arity;
        let mut out = PolyDiffOp::zero(self.dim, self.arity + q - 1);
        for (akey, ac) in &self.terms {
            let alpha = &akey[k - 1];
            // alpha splits over the inner coefficient and the q inner slots
            for (split, multinom) in alpha.decompositions(q + 1) {
                for (bkey, bc) in &psi.terms {
                    let inner = bc.derive(&split[0]);
                    if inner.is_zero() {
                        continue;
                    }
                    let mut key = Vec::with_capacity(self.arity + q - 1);
                    key.extend_from_slice(&akey[..k - 1]);
                    for (b, g) in bkey.iter().zip(&split[1..]) {
                        key.push(b.add(g));
                    }
                    key.extend_from_slice(&akey[k..]);
                    out.add_term(key, ac.mul(&inner).scale(&multinom));
                }
            }
        }
        Ok(out)
    }

    /// Signed insertion sum `phi o psi = sum_k (-1)^((k-1)(q-1)) phi o_k psi`.
    pub fn insertion_sum(&self, psi: &PolyDiffOp) -> Result<PolyDiffOp, HochError> {
        if self.dim != psi.dim {
            return Err(HochError::DimMismatch(self.dim, psi.dim));
        }
        let q = psi.arity as i64;
        let out_arity = (self.arity + psi.arity).saturating_sub(1);
        let mut out = PolyDiffOp::zero(self.dim, out_arity);
        for k in 1..=self.arity {
            let exp = (k as i64 - 1) * (q - 1);
            let sign = if exp % 2 == 0 { 1 } else { -1 };
            let piece = self.compose_at(k, psi)?;
            out = out.add(&piece.scale(&rat::rint(sign)));
        }
        Ok(out)
    }
}

/// Hochschild differential, the alternating-sum formula.
pub fn hochschild_delta(phi: &PolyDiffOp) -> PolyDiffOp {
    let p = phi.arity;
    let mut out = phi.insert_zero_slot(0);
    for i in 1..=p {
        let sign = if i % 2 == 1 { -1 } else { 1 };
        out = out.add(&phi.merge_slots(i).scale(&rat::rint(sign)));
    }
    let sign = if (p + 1) % 2 == 1 { -1 } else { 1 };
    out = out.add(&phi.insert_zero_slot(p).scale(&rat::rint(sign)));
    out
}

/// Cup product `(phi u psi)(f.., g..) = phi(f..) psi(g..)`.
pub fn cup(phi: &PolyDiffOp, psi: &PolyDiffOp) -> Result<PolyDiffOp, HochError> {
    if phi.dim != psi.dim {
        return Err(HochError::DimMismatch(phi.dim, psi.dim));
    }
    let mut out = PolyDiffOp::zero(phi.dim, phi.arity + psi.arity);
    for (ka, ca) in &phi.terms {
        for (kb, cb) in &psi.terms {
            let mut key = ka.clone();
            key.extend_from_slice(kb);
            out.add_term(key, ca.mul(cb));
        }
    }
    Ok(out)
}

/// Gerstenhaber bracket; restricts to the operator commutator on 1-cochains.
pub fn gerstenhaber(phi: &PolyDiffOp, psi: &PolyDiffOp) -> Result<PolyDiffOp, HochError> {
    let ab = phi.insertion_sum(psi)?;
    let ba = psi.insertion_sum(phi)?;
    let exp = (phi.arity as i64 - 1) * (psi.arity as i64 - 1);
    let sign = if exp % 2 == 0 { -1 } else { 1 };
    Ok(ab.add(&ba.scale(&rat::rint(sign))))
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    // (permutation, sign), generated recursively; fine for the small arities
    // that occur here
    if n == 0 {
        return vec![(vec![], 1)];
    }
    let mut out = Vec::new();
    for (perm, sign) in permutations(n - 1) {
        for pos in 0..n {
            let mut p = perm.clone();
            p.insert(pos, n - 1);
            let moved = perm.len() - pos;
            let s = if moved % 2 == 0 { sign } else { -sign };
            out.push((p, s));
        }
    }
    out
}

/// HKR antisymmetrization `chi`: sends a grade-p polyvector to a totally
/// antisymmetric p-cochain. Includes the 1/p! prefactor, which cancels
/// against the determinant convention of the wedge so that
/// `chi(d1^d2)(x1,x2) = 1`.
pub fn hkr_chi(field: &PolyVectorField) -> PolyDiffOp {
    let dim = field.dim();
    let p = field.grade();
    let mut out = PolyDiffOp::zero(dim, p);
    for (axes, c) in field.components() {
        for (perm, sign) in permutations(p) {
            let key: Vec<MultiIndex> = perm
                .iter()
                .map(|&b| MultiIndex::unit(dim, axes[b] as usize))
                .collect();
            out.add_term(key, c.scale(&rat::rint(sign as i64)));
        }
    }
    out
}

/// Antisymmetric-symbol projection: keeps only terms in which every slot has
/// derivative order exactly one, antisymmetrizes over the slots, and reads
/// the result as a polyvector field. A section inverse of [`hkr_chi`]
/// (`skew_symbol(hkr_chi(F)) = F`), and zero on coboundaries.
pub fn skew_symbol(phi: &PolyDiffOp) -> PolyVectorField {
    let dim = phi.dim;
    let p = phi.arity;
    let inv_fact = rat::rint(1) / rat::factorial(p as u32);
    let mut out = PolyVectorField::zero(dim, p);
    'term: for (key, c) in &phi.terms {
        let mut axes = Vec::with_capacity(p);
        for alpha in key {
            if alpha.order() != 1 {
                continue 'term;
            }
            let axis = alpha.0.iter().position(|&e| e == 1).unwrap() as u32;
            axes.push(axis);
        }
        // sort axes, tracking the permutation sign; repeated axes die
        let mut sign = 1i64;
        let mut sorted = axes.clone();
        for i in 0..sorted.len() {
            for j in (i + 1..sorted.len()).rev() {
                if sorted[j - 1] > sorted[j] {
                    sorted.swap(j - 1, j);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        out.add_component(sorted, c.scale(&(inv_fact.clone() * rat::rint(sign))));
    }
    out
}

/// Cocycle report: the operator, its differential, and whether it is closed.
#[derive(Debug, Clone)]
pub struct HochschildDegreeReport {
    pub input: PolyDiffOp,
    pub differential: PolyDiffOp,
    pub is_cocycle: bool,
}

pub fn degree_report(phi: &PolyDiffOp) -> HochschildDegreeReport {
    let differential = hochschild_delta(phi);
    let is_cocycle = differential.is_zero();
    HochschildDegreeReport {
        input: phi.clone(),
        differential,
        is_cocycle,
    }
}

/// Truncation bounds of an ansatz: maximal single-slot derivative order and
/// maximal coefficient degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzBounds {
    pub deg: u32,
    pub dord: u32,
}

impl AnsatzBounds {
    pub fn new(deg: u32, dord: u32) -> Self {
        AnsatzBounds { deg, dord }
    }

    /// Default bounds for solving `delta psi = phi`: derivative order up to
    /// `2 + max slot order of phi`, coefficient degree up to `1 + degree of phi`.
    pub fn default_for(phi: &PolyDiffOp) -> Self {
        AnsatzBounds {
            deg: phi.coeff_degree() + 1,
            dord: phi.max_slot_order() + 2,
        }
    }
}

impl fmt::Display for AnsatzBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "deg={},dord={}", self.deg, self.dord)
    }
}

#[derive(Debug, Clone)]
pub enum CocyclePrimitive {
    /// `delta(psi) = phi` exactly.
    Primitive(PolyDiffOp),
    /// No primitive inside the stated ansatz; not a mathematical obstruction.
    NoneAtBound {
        bounds: AnsatzBounds,
        certificate: InconsistencyCertificate,
    },
}

/// Coordinates of an operator on (key, monomial) axes.
pub(crate) fn op_coords(phi: &PolyDiffOp) -> BTreeMap<(Vec<MultiIndex>, MultiIndex), Rat> {
    let mut out = BTreeMap::new();
    for (key, c) in &phi.terms {
        for (m, r) in c.terms() {
            out.insert((key.clone(), m.clone()), r.clone());
        }
    }
    out
}

pub(crate) fn op_label(key: &[MultiIndex], m: &MultiIndex) -> String {
    let slots: Vec<String> = key.iter().map(|a| a.to_string()).collect();
    format!("({}){}@x{:?}", slots.join("|"), "", m.0)
}

/// Enumerates the ansatz basis for operators of the given arity: all slot
/// keys with per-slot order `<= dord`, all coefficient monomials of total
/// degree `<= deg`.
pub(crate) fn ansatz_basis(
    dim: usize,
    arity: usize,
    bounds: AnsatzBounds,
) -> Vec<(Vec<MultiIndex>, MultiIndex)> {
    let slot_choices = MultiIndex::all_up_to_order(dim, bounds.dord);
    let mut keys: Vec<Vec<MultiIndex>> = vec![vec![]];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(keys.len() * slot_choices.len());
        for k in &keys {
            for s in &slot_choices {
                let mut k2 = k.clone();
                k2.push(s.clone());
                next.push(k2);
            }
        }
        keys = next;
    }
    let monomials = MultiIndex::all_up_to_order(dim, bounds.deg);
    let mut out = Vec::with_capacity(keys.len() * monomials.len());
    for k in keys {
        for m in &monomials {
            out.push((k.clone(), m.clone()));
        }
    }
    out
}

/// Solves `delta(psi) = phi` exactly inside the ansatz. `phi` must be a
/// cocycle.
pub fn cocycle_primitive(
    phi: &PolyDiffOp,
    bounds: AnsatzBounds,
) -> Result<CocyclePrimitive, HochError> {
    let d = hochschild_delta(phi);
    if !d.is_zero() {
        return Err(HochError::NotClosed(d.num_terms()));
    }
    if phi.arity == 0 {
        // no (-1)-cochains; phi must be zero, and then 0 works vacuously
        return if phi.is_zero() {
            Ok(CocyclePrimitive::Primitive(PolyDiffOp::zero(phi.dim, 0)))
        } else {
            Ok(CocyclePrimitive::NoneAtBound {
                bounds,
                certificate: InconsistencyCertificate {
                    row_combination: vec![],
                },
            })
        };
    }

    let dim = phi.dim;
    let basis = ansatz_basis(dim, phi.arity - 1, bounds);
    solve_operator_equation(
        dim,
        phi.arity - 1,
        basis,
        |e| hochschild_delta(e),
        phi,
        bounds,
    )
}

/// Generic exact solve of `L(psi) = phi` for a linear operator map `L` over
/// an explicit basis of candidate operators.
pub(crate) fn solve_operator_equation<L>(
    dim: usize,
    unknown_arity: usize,
    basis: Vec<(Vec<MultiIndex>, MultiIndex)>,
    lmap: L,
    target: &PolyDiffOp,
    bounds: AnsatzBounds,
) -> Result<CocyclePrimitive, HochError>
where
    L: Fn(&PolyDiffOp) -> PolyDiffOp + Sync + Send,
{
    let columns: Vec<(String, BTreeMap<(Vec<MultiIndex>, MultiIndex), Rat>)> =
        exec::par_map(basis.clone(), |(key, m)| {
            let mut e = PolyDiffOp::zero(dim, unknown_arity);
            e.add_term(key.clone(), Polynomial::monomial(dim, m.clone(), rat::rint(1)));
            (op_label(&key, &m), op_coords(&lmap(&e)))
        });

    let tcoords = op_coords(target);
    let mut row_keys: BTreeSet<(Vec<MultiIndex>, MultiIndex)> = tcoords.keys().cloned().collect();
    for (_, col) in &columns {
        row_keys.extend(col.keys().cloned());
    }
    let row_index: BTreeMap<_, usize> = row_keys
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();

    let mut rows: Vec<SparseVec> = vec![SparseVec::new(); row_keys.len()];
    for (j, (_, col)) in columns.iter().enumerate() {
        for (k, v) in col {
            rows[row_index[k]].push((j, v.clone()));
        }
    }
    let mut rhs = vec![Rat::zero(); row_keys.len()];
    for (k, v) in &tcoords {
        rhs[row_index[k]] = v.clone();
    }

    let problem = LinearProblem {
        labels: columns.iter().map(|(l, _)| l.clone()).collect(),
        rows,
        rhs,
    };
    match linalg::linear_solve(&problem) {
        LinearOutcome::Solution(s) => {
            let mut psi = PolyDiffOp::zero(dim, unknown_arity);
            for ((key, m), c) in basis.iter().zip(&s.particular) {
                if !c.is_zero() {
                    psi.add_term(key.clone(), Polynomial::monomial(dim, m.clone(), c.clone()));
                }
            }
            Ok(CocyclePrimitive::Primitive(psi))
        }
        LinearOutcome::NoSolution(certificate) => Ok(CocyclePrimitive::NoneAtBound {
            bounds,
            certificate,
        }),
    }
}

impl fmt::Display for PolyDiffOp {
    /// `1/8*(d[1,1]|d[2,2]) - 1/8*x1*(d[1,2]|d[1,2])`-style.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.arity == 0 {
            return write!(f, "{}", self.terms.values().next().unwrap());
        }
        let mut first = true;
        for (key, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let slots: Vec<String> = key.iter().map(|a| a.to_string()).collect();
            let slots = slots.join("|");
            if c == &Polynomial::one(self.dim) {
                write!(f, "({slots})")?;
            } else {
                write!(f, "({})*({slots})", c)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivector;
    use crate::rat::{rat, rint};

    fn x(dim: usize, axis: usize) -> Polynomial {
        Polynomial::var(dim, axis)
    }

    fn d(dim: usize, axes: &[usize]) -> MultiIndex {
        let mut m = MultiIndex::zero(dim);
        for &a in axes {
            m.0[a] += 1;
        }
        m
    }

    /// 1-cochain `c * d^a`.
    fn op1(dim: usize, a: MultiIndex, c: Polynomial) -> PolyDiffOp {
        let mut op = PolyDiffOp::zero(dim, 1);
        op.add_term(vec![a], c);
        op
    }

    /// 2-cochain `c * (d^a | d^b)`.
    fn op2(dim: usize, a: MultiIndex, b: MultiIndex, c: Polynomial) -> PolyDiffOp {
        let mut op = PolyDiffOp::zero(dim, 2);
        op.add_term(vec![a, b], c);
        op
    }

    #[test]
    fn apply_product_map() {
        let mu = PolyDiffOp::multiplication(2);
        let r = mu.apply(&[x(2, 0), x(2, 1)]).unwrap();
        assert_eq!(r, x(2, 0).mul(&x(2, 1)));
    }

    #[test]
    fn apply_tensor_derivatives() {
        let op = op2(2, d(2, &[0]), d(2, &[1]), Polynomial::one(2));
        let r = op.apply(&[x(2, 0), x(2, 1)]).unwrap();
        assert_eq!(r, Polynomial::one(2));
    }

    #[test]
    fn delta_of_vector_field_vanishes() {
        let xfield = op1(2, d(2, &[0]), x(2, 1));
        assert!(hochschild_delta(&xfield).is_zero());
    }

    #[test]
    fn delta_alternating_formula_displayed_shape() {
        // Function-level oracle for the displayed formula with the nonlinear
        // map D(f) = f^2:  (dD)(f,g) = f g^2 - (fg)^2 + f^2 g.
        let dsq = |f: &Polynomial| f.mul(f);
        let f = x(2, 0);
        let g = x(2, 1);
        let lhs = f
            .mul(&dsq(&g))
            .sub(&dsq(&f.mul(&g)))
            .add(&dsq(&f).mul(&g));
        let expect = f
            .mul(&g.mul(&g))
            .sub(&f.mul(&f).mul(&g).mul(&g))
            .add(&f.mul(&f).mul(&g));
        assert_eq!(lhs, expect);

        // Structural delta agrees with the same formula on a linear 1-cochain.
        let psi = op1(2, d(2, &[0, 0]), x(2, 1));
        let dpsi = hochschild_delta(&psi);
        let apply_formula = |f: &Polynomial, g: &Polynomial| {
            let pf = psi.apply(std::slice::from_ref(f)).unwrap();
            let pg = psi.apply(std::slice::from_ref(g)).unwrap();
            let pfg = psi.apply(&[f.mul(g)]).unwrap();
            f.mul(&pg).sub(&pfg).add(&pf.mul(g))
        };
        for f in Polynomial::monomial_basis(2, 2) {
            for g in Polynomial::monomial_basis(2, 2) {
                assert_eq!(dpsi.apply(&[f.clone(), g.clone()]).unwrap(), apply_formula(&f, &g));
            }
        }
    }

    #[test]
    fn delta_of_scalar_vanishes() {
        let f = PolyDiffOp::from_polynomial(x(2, 0).mul(&x(2, 1)));
        assert!(hochschild_delta(&f).is_zero());
    }

    #[test]
    fn cup_unit_and_leibniz_instance() {
        let d1 = op1(2, d(2, &[0]), Polynomial::one(2));
        let d2 = op1(2, d(2, &[1]), Polynomial::one(2));
        let c = cup(&d1, &d2).unwrap();
        assert_eq!(c.apply(&[x(2, 0), x(2, 1)]).unwrap(), Polynomial::one(2));
        // unit 0-cochain
        let unit = PolyDiffOp::from_polynomial(Polynomial::one(2));
        assert_eq!(cup(&c, &unit).unwrap(), c);
        // delta(phi u psi) = delta(phi) u psi + (-1)^p phi u delta(psi)
        let phi = op2(2, d(2, &[0]), d(2, &[0, 1]), x(2, 1));
        let psi = op1(2, d(2, &[1]), x(2, 0));
        let lhs = hochschild_delta(&cup(&phi, &psi).unwrap());
        let rhs = cup(&hochschild_delta(&phi), &psi)
            .unwrap()
            .add(&cup(&phi, &hochschild_delta(&psi)).unwrap()); // p = 2 even
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn compose_identity_and_associativity() {
        let mu = PolyDiffOp::multiplication(2);
        // mu o_1 mu applied to (f,g,h) = (fg)h
        let m1 = mu.compose_at(1, &mu).unwrap();
        let (f, g, h) = (x(2, 0), x(2, 1), x(2, 0).mul(&x(2, 1)));
        assert_eq!(
            m1.apply(&[f.clone(), g.clone(), h.clone()]).unwrap(),
            f.mul(&g).mul(&h)
        );
        // identity o_1 phi = phi
        let id = PolyDiffOp::identity(2);
        let phi = op2(2, d(2, &[0]), d(2, &[1]), x(2, 0));
        assert_eq!(id.compose_at(1, &phi).unwrap(), phi);
    }

    #[test]
    fn compose_leibniz_expansion_oracle() {
        // (d1) o_1 (d1 x d2): symbol-level composition must match pointwise
        // application of the composite on a monomial basis
        let outer = op1(2, d(2, &[0]), Polynomial::one(2));
        let inner = op2(2, d(2, &[0]), d(2, &[1]), Polynomial::one(2));
        let composed = outer.compose_at(1, &inner).unwrap();
        for f in Polynomial::monomial_basis(2, 3) {
            for g in Polynomial::monomial_basis(2, 3) {
                let via_symbol = composed.apply(&[f.clone(), g.clone()]).unwrap();
                let pointwise = inner.apply(&[f.clone(), g.clone()]).unwrap().partial(0);
                assert_eq!(via_symbol, pointwise);
            }
        }
        // nonconstant coefficients exercise the coefficient-derivative path
        let inner2 = op2(2, d(2, &[0]), d(2, &[1]), x(2, 0));
        let composed2 = outer.compose_at(1, &inner2).unwrap();
        for f in Polynomial::monomial_basis(2, 2) {
            for g in Polynomial::monomial_basis(2, 2) {
                let via_symbol = composed2.apply(&[f.clone(), g.clone()]).unwrap();
                let pointwise = inner2.apply(&[f.clone(), g.clone()]).unwrap().partial(0);
                assert_eq!(via_symbol, pointwise);
            }
        }
    }

    #[test]
    fn gerstenhaber_commutator_on_vector_fields() {
        // [d1, x1 d2] = d2 as operators
        let a = op1(2, d(2, &[0]), Polynomial::one(2));
        let b = op1(2, d(2, &[1]), x(2, 0));
        let br = gerstenhaber(&a, &b).unwrap();
        assert_eq!(br, op1(2, d(2, &[1]), Polynomial::one(2)));
    }

    #[test]
    fn gerstenhaber_mu_self_bracket_vanishes() {
        let mu = PolyDiffOp::multiplication(2);
        assert!(gerstenhaber(&mu, &mu).unwrap().is_zero());
    }

    #[test]
    fn delta_is_bracket_with_mu() {
        // delta(phi) = -[phi, mu] at every arity that occurs downstream
        let mu = PolyDiffOp::multiplication(2);
        let samples: Vec<PolyDiffOp> = vec![
            PolyDiffOp::from_polynomial(x(2, 0)),
            op1(2, d(2, &[0, 1]), x(2, 1)),
            op2(2, d(2, &[0]), d(2, &[1]), x(2, 0)),
            {
                let mut t = PolyDiffOp::zero(2, 3);
                t.add_term(vec![d(2, &[0]), d(2, &[1]), d(2, &[0])], x(2, 1));
                t
            },
        ];
        for phi in samples {
            let lhs = hochschild_delta(&phi);
            let rhs = gerstenhaber(&phi, &mu).unwrap().scale(&rint(-1));
            assert_eq!(lhs, rhs, "arity {}", phi.arity());
            // and the mu-first form carries the arity sign (-1)^(p-1)
            let mu_first = gerstenhaber(&mu, &phi).unwrap();
            let sign = if (phi.arity() + 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(lhs.scale(&rint(sign)), mu_first);
        }
    }

    #[test]
    fn hkr_chi_examples() {
        // chi(d1^d2)(x1,x2) = 1
        let pi = PolyVectorField::from_component(2, vec![0, 1], Polynomial::one(2));
        let chi = hkr_chi(&pi);
        assert_eq!(chi.apply(&[x(2, 0), x(2, 1)]).unwrap(), Polynomial::one(2));
        // chi of a vector field is the field as a 1-cochain
        let v = PolyVectorField::from_component(2, vec![1], x(2, 0));
        assert_eq!(hkr_chi(&v), op1(2, d(2, &[1]), x(2, 0)));
        // chi of a function is the 0-cochain
        let f = PolyVectorField::scalar(x(2, 0));
        assert_eq!(hkr_chi(&f), PolyDiffOp::from_polynomial(x(2, 0)));
        // delta o chi = 0
        assert!(hochschild_delta(&chi).is_zero());
        let w = PolyVectorField::from_component(3, vec![0, 1, 2], x(3, 1));
        assert!(hochschild_delta(&hkr_chi(&w)).is_zero());
    }

    #[test]
    fn skew_symbol_section_and_kills_coboundaries() {
        let mut pi = PolyVectorField::zero(3, 2);
        pi.add_component(vec![0, 1], x(3, 2));
        pi.add_component(vec![1, 2], x(3, 0));
        assert_eq!(skew_symbol(&hkr_chi(&pi)), pi);
        // skew of mu is zero
        assert!(skew_symbol(&PolyDiffOp::multiplication(2)).is_zero());
        // skew(delta(psi)) = 0 for 1- and 2-cochains
        let psi1 = op1(2, d(2, &[0, 0]), x(2, 1));
        assert!(skew_symbol(&hochschild_delta(&psi1)).is_zero());
        let psi2 = op2(2, d(2, &[0, 1]), d(2, &[1]), x(2, 0));
        assert!(skew_symbol(&hochschild_delta(&psi2)).is_zero());
    }

    #[test]
    fn hkr_intertwines_brackets_in_low_grade() {
        // skew_symbol([chi(a), chi(b)]) = schouten(a, b) for small polyvectors
        let a = PolyVectorField::from_component(2, vec![0], x(2, 0));
        let mut b = PolyVectorField::zero(2, 2);
        b.add_component(vec![0, 1], x(2, 1));
        let lhs = skew_symbol(&gerstenhaber(&hkr_chi(&a), &hkr_chi(&b)).unwrap());
        let rhs = multivector::schouten(&a, &b);
        assert_eq!(lhs, rhs);
        let c = PolyVectorField::from_component(2, vec![1], x(2, 1));
        let lhs2 = skew_symbol(&gerstenhaber(&hkr_chi(&a), &hkr_chi(&c)).unwrap());
        let rhs2 = multivector::schouten(&a, &c);
        assert_eq!(lhs2, rhs2);
    }

    #[test]
    fn cocycle_primitive_round_trip() {
        // phi = delta(psi0) has some primitive inside the default bounds
        let psi0 = op1(2, d(2, &[0, 1]), x(2, 0));
        let phi = hochschild_delta(&psi0);
        let bounds = AnsatzBounds::default_for(&phi);
        match cocycle_primitive(&phi, bounds).unwrap() {
            CocyclePrimitive::Primitive(psi) => {
                assert_eq!(hochschild_delta(&psi), phi);
            }
            _ => panic!("expected a primitive"),
        }
    }

    #[test]
    fn cocycle_primitive_respects_hkr_obstruction() {
        // chi(d1^d2) is a nontrivial class: no primitive at any small bound
        let pi = PolyVectorField::from_component(2, vec![0, 1], Polynomial::one(2));
        let phi = hkr_chi(&pi);
        for bounds in [AnsatzBounds::new(1, 2), AnsatzBounds::new(2, 3)] {
            match cocycle_primitive(&phi, bounds).unwrap() {
                CocyclePrimitive::NoneAtBound { .. } => {}
                _ => panic!("HKR class must not be exact"),
            }
        }
    }

    #[test]
    fn cocycle_primitive_zero() {
        let phi = PolyDiffOp::zero(2, 2);
        match cocycle_primitive(&phi, AnsatzBounds::new(1, 1)).unwrap() {
            CocyclePrimitive::Primitive(psi) => assert!(psi.is_zero()),
            _ => panic!("zero has the zero primitive"),
        }
    }

    #[test]
    fn cocycle_primitive_rejects_non_cocycle() {
        let phi = op1(2, d(2, &[0, 0]), x(2, 1));
        assert!(!hochschild_delta(&phi).is_zero());
        assert!(matches!(
            cocycle_primitive(&phi, AnsatzBounds::new(1, 1)),
            Err(HochError::NotClosed(_))
        ));
    }

    #[test]
    fn moyal_first_order_term() {
        // B1(x1,x2) = 1/2 for pi = d1^d2 with B1 = 1/2 chi(pi)
        let pi = PolyVectorField::from_component(2, vec![0, 1], Polynomial::one(2));
        let b1 = hkr_chi(&pi).scale(&rat(1, 2));
        assert_eq!(
            b1.apply(&[x(2, 0), x(2, 1)]).unwrap(),
            Polynomial::constant(2, rat(1, 2))
        );
    }

    #[test]
    fn display_shape() {
        let mut opn = PolyDiffOp::zero(2, 2);
        opn.add_term(vec![d(2, &[0, 0]), d(2, &[1, 1])], Polynomial::constant(2, rat(1, 8)));
        assert_eq!(opn.to_string(), "(1/8)*(d[1,1]|d[2,2])");
    }
}
