//! Finite-dimensional Lie algebras by structure constants, Kirillov-Kostant
//! bivectors, actions by polynomial vector fields, and Chevalley-Eilenberg
//! cochains valued in polynomials, polyvector fields, or polydifferential
//! operators.
//!
//! The CE differential is the standard alternating formula
//!
//! ```text
//! (dc)(x0..xp) = sum_a (-1)^a x_a . c(..^a..)
//!              + sum_{a<b} (-1)^(a+b) c([x_a,x_b], ..^a..^b..)
//! ```
//!
//! where the module action of `xi` is the Schouten bracket with `phi0(xi)`
//! on polyvector values, the Gerstenhaber bracket with `phi0(xi)` (as a
//! 1-cochain) on operator values, and the directional derivative on series
//! values. The total differential of the Poisson bicomplex places signs as
//! `D = d_CE + (-1)^p d_pi` on bidegree (p, q).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exec;
use crate::hochschild::{gerstenhaber, hkr_chi, PolyDiffOp};
use crate::linalg::{self, InconsistencyCertificate, LinearOutcome, LinearProblem, SparseVec};
use crate::multivector::{
    increasing_tuples, lichnerowicz_d, schouten, PoissonStructure, PolyVectorField,
};
use crate::poly::{MultiIndex, Polynomial};
use crate::rat::{self, Rat};
use crate::star::FormalFunction;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("structure constants not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),
    #[error("Jacobi identity fails on basis triple (e{0}, e{1}, e{2})")]
    JacobiFails(usize, usize, usize),
    #[error("action image count {got} does not match algebra dimension {dim}")]
    BadImageCount { dim: usize, got: usize },
    #[error("action image of e{0} must be a vector field (grade 1), got grade {1}")]
    NotVectorField(usize, usize),
    #[error("not a homomorphism on (e{i}, e{j}); defect {defect}")]
    NotHomomorphism {
        i: usize,
        j: usize,
        defect: Box<PolyVectorField>,
    },
    #[error("coefficient kinds or shapes differ")]
    KindMismatch,
    #[error("cochain is not closed under {0}")]
    NotClosed(&'static str),
    #[error("basis index {0} out of range")]
    IndexOutOfRange(usize),
}

/// Lie algebra given by structure constants `[e_i, e_j] = sum_k c^k_ij e_k`.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    /// brackets[(i,j)] for i < j; coefficient vector over the basis
    brackets: BTreeMap<(usize, usize), Vec<Rat>>,
}

impl LieAlgebra {
    /// Builds and validates the algebra. `pairs` lists `[e_i, e_j]` for
    /// `i < j` (0-based); omitted pairs commute. Antisymmetry is implied by
    /// the storage; the Jacobi identity is checked on every basis triple
    /// and rejected with a witness triple.
    pub fn new(dim: usize, pairs: Vec<((usize, usize), Vec<Rat>)>) -> Result<Self, LieError> {
        let mut brackets = BTreeMap::new();
        for ((i, j), coeffs) in pairs {
            if i >= dim || j >= dim {
                return Err(LieError::IndexOutOfRange(i.max(j)));
            }
            if i >= j {
                return Err(LieError::NotAntisymmetric(i, j));
            }
            if coeffs.len() != dim {
                return Err(LieError::BadImageCount {
                    dim,
                    got: coeffs.len(),
                });
            }
            if coeffs.iter().any(|c| !c.is_zero()) {
                brackets.insert((i, j), coeffs);
            }
        }
        let g = LieAlgebra { dim, brackets };
        for i in 0..dim {
            for j in i + 1..dim {
                for k in j + 1..dim {
                    let jac = add_vecs(
                        &g.bracket_vec(&g.bracket(i, j), &unit(dim, k)),
                        &add_vecs(
                            &g.bracket_vec(&g.bracket(j, k), &unit(dim, i)),
                            &g.bracket_vec(&g.bracket(k, i), &unit(dim, j)),
                        ),
                    );
                    if jac.iter().any(|c| !c.is_zero()) {
                        return Err(LieError::JacobiFails(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            brackets: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.brackets.is_empty()
    }

    /// `[e_i, e_j]` as a coefficient vector, any index order.
    pub fn bracket(&self, i: usize, j: usize) -> Vec<Rat> {
        if i == j {
            return vec![Rat::zero(); self.dim];
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        let mut v = self
            .brackets
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(|| vec![Rat::zero(); self.dim]);
        if flip {
            for c in &mut v {
                *c = -c.clone();
            }
        }
        v
    }

    /// Bilinear extension of the bracket to coefficient vectors.
    pub fn bracket_vec(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, a) in u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket(i, j).into_iter().enumerate() {
                    out[k] += a * b * c;
                }
            }
        }
        out
    }

    pub fn structure_constant(&self, k: usize, i: usize, j: usize) -> Rat {
        self.bracket(i, j)[k].clone()
    }

    /// Kirillov-Kostant bivector `pi = sum_{i<j} (sum_k c^k_ij x_k) di^dj`
    /// on the dual space; Poisson because Jacobi was validated.
    pub fn kirillov_kostant(&self) -> PoissonStructure {
        let n = self.dim;
        let mut b = PolyVectorField::zero(n, 2);
        for ((i, j), coeffs) in &self.brackets {
            let mut lin = Polynomial::zero(n);
            for (k, c) in coeffs.iter().enumerate() {
                lin.add_term(MultiIndex::unit(n, k), c.clone());
            }
            b.add_component(vec![*i as u32, *j as u32], lin);
        }
        PoissonStructure::new(b).expect("Jacobi identity was validated at construction")
    }
}

fn unit(dim: usize, k: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); dim];
    v[k] = rat::rint(1);
    v
}

fn add_vecs(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Representation of the algebra by polynomial vector fields.
#[derive(Debug, Clone)]
pub struct Action {
    algebra: LieAlgebra,
    images: Vec<PolyVectorField>,
}

/// Outcome of the Poisson-field check for every basis image.
#[derive(Debug, Clone)]
pub enum PoissonCheck {
    Poisson,
    NotPoisson {
        basis_index: usize,
        defect: PolyVectorField,
    },
}

impl Action {
    /// Validates the homomorphism property
    /// `[phi0(e_i), phi0(e_j)] = phi0([e_i, e_j])` exactly.
    pub fn new(algebra: LieAlgebra, images: Vec<PolyVectorField>) -> Result<Self, LieError> {
        if images.len() != algebra.dim {
            return Err(LieError::BadImageCount {
                dim: algebra.dim,
                got: images.len(),
            });
        }
        for (i, f) in images.iter().enumerate() {
            if f.grade() != 1 {
                return Err(LieError::NotVectorField(i + 1, f.grade()));
            }
        }
        let action = Action { algebra, images };
        for i in 0..action.algebra.dim {
            for j in i + 1..action.algebra.dim {
                let lhs = schouten(&action.images[i], &action.images[j]);
                let rhs = action.image_of(&action.algebra.bracket(i, j));
                let defect = lhs.sub(&rhs);
                if !defect.is_zero() {
                    return Err(LieError::NotHomomorphism {
                        i: i + 1,
                        j: j + 1,
                        defect: Box::new(defect),
                    });
                }
            }
        }
        Ok(action)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn image(&self, i: usize) -> &PolyVectorField {
        &self.images[i]
    }

    pub fn images(&self) -> &[PolyVectorField] {
        &self.images
    }

    pub fn dim_ambient(&self) -> usize {
        self.images.first().map(|f| f.dim()).unwrap_or(0)
    }

    /// `phi0` applied to a coefficient vector.
    pub fn image_of(&self, coeffs: &[Rat]) -> PolyVectorField {
        let dim = self.dim_ambient();
        let mut out = PolyVectorField::zero(dim, 1);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.images[i].scale(c));
            }
        }
        out
    }

    /// Checks `L_xi pi = 0` for every basis image; returns the first
    /// offending field otherwise.
    pub fn is_poisson(&self, pi: &PoissonStructure) -> PoissonCheck {
        for (i, f) in self.images.iter().enumerate() {
            let defect = schouten(f, pi.bivector());
            if !defect.is_zero() {
                return PoissonCheck::NotPoisson {
                    basis_index: i + 1,
                    defect,
                };
            }
        }
        PoissonCheck::Poisson
    }
}

/// Coefficient value of a CE cochain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CEValue {
    /// Truncated polynomial series in hbar.
    Series(FormalFunction),
    /// Polyvector field.
    Field(PolyVectorField),
    /// Polydifferential operator.
    Op(PolyDiffOp),
}

/// Shape of the coefficient values of one cochain (all values homogeneous).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CEShape {
    Series { dim: usize, order: usize },
    Field { dim: usize, grade: usize },
    Op { dim: usize, arity: usize },
}

impl CEShape {
    pub fn zero_value(&self) -> CEValue {
        match *self {
            CEShape::Series { dim, order } => CEValue::Series(FormalFunction::zero(dim, order)),
            CEShape::Field { dim, grade } => CEValue::Field(PolyVectorField::zero(dim, grade)),
            CEShape::Op { dim, arity } => CEValue::Op(PolyDiffOp::zero(dim, arity)),
        }
    }

    fn of(v: &CEValue) -> CEShape {
        match v {
            CEValue::Series(f) => CEShape::Series {
                dim: f.dim(),
                order: f.order(),
            },
            CEValue::Field(f) => CEShape::Field {
                dim: f.dim(),
                grade: f.grade(),
            },
            CEValue::Op(op) => CEShape::Op {
                dim: op.dim(),
                arity: op.arity(),
            },
        }
    }
}

impl CEValue {
    pub fn is_zero(&self) -> bool {
        match self {
            CEValue::Series(f) => f.is_zero(),
            CEValue::Field(f) => f.is_zero(),
            CEValue::Op(op) => op.is_zero(),
        }
    }

    pub fn add(&self, other: &CEValue) -> CEValue {
        match (self, other) {
            (CEValue::Series(a), CEValue::Series(b)) => CEValue::Series(a.add(b)),
            (CEValue::Field(a), CEValue::Field(b)) => CEValue::Field(a.add(b)),
            (CEValue::Op(a), CEValue::Op(b)) => CEValue::Op(a.add(b)),
            _ => panic!("{}", LieError::KindMismatch),
        }
    }

    pub fn scale(&self, c: &Rat) -> CEValue {
        match self {
            CEValue::Series(a) => CEValue::Series(a.scale(c)),
            CEValue::Field(a) => CEValue::Field(a.scale(c)),
            CEValue::Op(a) => CEValue::Op(a.scale(c)),
        }
    }
}

/// Alternating map from basis tuples into a coefficient module; only
/// strictly increasing tuples are stored, evaluation at arbitrary tuples
/// applies the permutation sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CECochain {
    algebra_dim: usize,
    degree: usize,
    shape: CEShape,
    values: BTreeMap<Vec<usize>, CEValue>,
}

impl CECochain {
    pub fn zero(algebra_dim: usize, degree: usize, shape: CEShape) -> Self {
        CECochain {
            algebra_dim,
            degree,
            shape,
            values: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn shape(&self) -> CEShape {
        self.shape
    }

    pub fn algebra_dim(&self) -> usize {
        self.algebra_dim
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = (&Vec<usize>, &CEValue)> {
        self.values.iter()
    }

    pub fn set(&mut self, tuple: Vec<usize>, v: CEValue) {
        debug_assert_eq!(tuple.len(), self.degree);
        debug_assert!(tuple.windows(2).all(|w| w[0] < w[1]));
        debug_assert_eq!(CEShape::of(&v), self.shape);
        if v.is_zero() {
            self.values.remove(&tuple);
        } else {
            self.values.insert(tuple, v);
        }
    }

    pub fn accumulate(&mut self, tuple: Vec<usize>, v: CEValue) {
        if v.is_zero() {
            return;
        }
        let cur = self
            .values
            .remove(&tuple)
            .unwrap_or_else(|| self.shape.zero_value());
        self.set(tuple, cur.add(&v));
    }

    /// Evaluates at an arbitrary tuple, applying the alternation sign;
    /// repeated indices give zero.
    pub fn eval(&self, tuple: &[usize]) -> CEValue {
        debug_assert_eq!(tuple.len(), self.degree);
        let mut sorted: Vec<usize> = tuple.to_vec();
        let mut sign = 1i64;
        for i in 0..sorted.len() {
            for j in (i + 1..sorted.len()).rev() {
                if sorted[j - 1] > sorted[j] {
                    sorted.swap(j - 1, j);
                    sign = -sign;
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return self.shape.zero_value();
        }
        match self.values.get(&sorted) {
            None => self.shape.zero_value(),
            Some(v) => v.scale(&rat::rint(sign)),
        }
    }

    pub fn add(&self, other: &CECochain) -> CECochain {
        assert_eq!(self.shape, other.shape, "{}", LieError::KindMismatch);
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (t, v) in &other.values {
            out.accumulate(t.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &CECochain) -> CECochain {
        self.add(&other.scale(&rat::rint(-1)))
    }

    pub fn scale(&self, c: &Rat) -> CECochain {
        let mut out = CECochain::zero(self.algebra_dim, self.degree, self.shape);
        for (t, v) in &self.values {
            out.set(t.clone(), v.scale(c));
        }
        out
    }
}

/// The module action of one vector field on a coefficient value.
fn act(xi: &PolyVectorField, v: &CEValue) -> CEValue {
    match v {
        CEValue::Series(f) => {
            let op = hkr_chi(xi);
            let mut out = FormalFunction::zero(f.dim(), f.order());
            for k in 0..=f.order() {
                *out.coeff_mut(k) = op.apply(&[f.coeff(k).clone()]).expect("1-ary");
            }
            CEValue::Series(out)
        }
        CEValue::Field(f) => CEValue::Field(schouten(xi, f)),
        CEValue::Op(op) => CEValue::Op(gerstenhaber(&hkr_chi(xi), op).expect("same dim")),
    }
}

/// Chevalley-Eilenberg differential with the action determined by the
/// coefficient kind.
pub fn ce_differential(action: &Action, c: &CECochain) -> CECochain {
    let m = action.algebra().dim();
    debug_assert_eq!(c.algebra_dim, m);
    let p = c.degree;
    let mut out = CECochain::zero(m, p + 1, c.shape);
    for tuple in increasing_tuples(m, p + 1) {
        let tuple: Vec<usize> = tuple.into_iter().map(|t| t as usize).collect();
        let mut acc = c.shape.zero_value();
        // action terms
        for (a, &xi_idx) in tuple.iter().enumerate() {
            let mut rest = tuple.clone();
            rest.remove(a);
            let inner = c.eval(&rest);
            if !inner.is_zero() {
                let term = act(action.image(xi_idx), &inner);
                let sign = if a % 2 == 0 { 1 } else { -1 };
                acc = acc.add(&term.scale(&rat::rint(sign)));
            }
        }
        // bracket terms
        for a in 0..tuple.len() {
            for b in a + 1..tuple.len() {
                let br = action.algebra().bracket(tuple[a], tuple[b]);
                let mut rest = tuple.clone();
                rest.remove(b);
                rest.remove(a);
                for (k, coeff) in br.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let mut arg = Vec::with_capacity(p);
                    arg.push(k);
                    arg.extend_from_slice(&rest);
                    let inner = c.eval(&arg);
                    if inner.is_zero() {
                        continue;
                    }
                    let sign = if (a + b) % 2 == 1 { -1 } else { 1 };
                    acc = acc.add(&inner.scale(&(coeff * rat::rint(sign))));
                }
            }
        }
        out.accumulate(tuple, acc);
    }
    out
}

/// Applies `d_pi` to every value of a polyvector-valued cochain.
pub fn dpi_cochain(pi: &PoissonStructure, c: &CECochain) -> CECochain {
    let CEShape::Field { dim, grade } = c.shape else {
        panic!("{}", LieError::KindMismatch);
    };
    let mut out = CECochain::zero(
        c.algebra_dim,
        c.degree,
        CEShape::Field {
            dim,
            grade: grade + 1,
        },
    );
    for (t, v) in c.values() {
        let CEValue::Field(f) = v else { unreachable!() };
        out.accumulate(t.clone(), CEValue::Field(lichnerowicz_d(pi, f)));
    }
    out
}

/// Applies the total bicomplex differential `d_CE + (-1)^p d_pi` to a
/// homogeneous piece of bidegree (p = CE degree, q = polyvector grade);
/// returns the two output pieces (bidegrees (p+1, q) and (p, q+1)).
pub fn total_differential(
    action: &Action,
    pi: &PoissonStructure,
    c: &CECochain,
) -> Vec<CECochain> {
    let p = c.degree;
    let ce_part = ce_differential(action, c);
    let sign = if p % 2 == 0 { 1 } else { -1 };
    let dpi_part = dpi_cochain(pi, c).scale(&rat::rint(sign));
    vec![ce_part, dpi_part]
}

#[derive(Debug, Clone)]
pub enum BicomplexTriviality {
    /// Primitive parts by bidegree: the total differential of their sum
    /// reproduces the element exactly.
    Trivial(Vec<CECochain>),
    NontrivialAtBound {
        degree_bound: u32,
        restricted: bool,
        certificate: InconsistencyCertificate,
    },
}

type BicplxKey = (usize, Vec<usize>, Vec<u32>, MultiIndex);

fn field_cochain_coords(c: &CECochain) -> BTreeMap<BicplxKey, Rat> {
    let mut out = BTreeMap::new();
    for (t, v) in c.values() {
        let CEValue::Field(f) = v else {
            panic!("{}", LieError::KindMismatch)
        };
        for (axes, poly) in f.components() {
            for (m, r) in poly.terms() {
                out.insert((t.len(), t.clone(), axes.clone(), m.clone()), r.clone());
            }
        }
    }
    out
}

/// Decides triviality of a closed element of the Poisson-Chevalley
/// bicomplex at the stated polynomial-degree bound. With `restricted` the
/// search space is the sub-bicomplex with CE degree >= 1 and polyvector
/// grade >= 1 only.
pub fn bicomplex_class_is_trivial(
    action: &Action,
    pi: &PoissonStructure,
    element: &CECochain,
    degree_bound: u32,
    restricted: bool,
) -> Result<BicomplexTriviality, LieError> {
    let CEShape::Field { dim, grade } = element.shape else {
        return Err(LieError::KindMismatch);
    };
    let m = action.algebra().dim();
    if !ce_differential(action, element).is_zero() {
        return Err(LieError::NotClosed("d_CE"));
    }
    if !dpi_cochain(pi, element).is_zero() {
        return Err(LieError::NotClosed("d_pi"));
    }

    let total = element.degree + grade;
    if total == 0 {
        return Ok(if element.is_zero() {
            BicomplexTriviality::Trivial(vec![])
        } else {
            BicomplexTriviality::NontrivialAtBound {
                degree_bound,
                restricted,
                certificate: InconsistencyCertificate {
                    row_combination: vec![],
                },
            }
        });
    }

    // unknown bidegrees (p, q) with p + q = total - 1
    let mut parts = Vec::new();
    for p in 0..=(total - 1).min(m) {
        let q = total - 1 - p;
        if q > dim {
            continue;
        }
        if restricted && (p < 1 || q < 1) {
            continue;
        }
        parts.push((p, q));
    }

    let monomials = MultiIndex::all_up_to_order(dim, degree_bound);
    let mut basis: Vec<BicplxKey> = Vec::new();
    for &(p, q) in &parts {
        for ce_t in increasing_tuples(m, p) {
            let ce_t: Vec<usize> = ce_t.into_iter().map(|t| t as usize).collect();
            for pv_t in increasing_tuples(dim, q) {
                for mono in &monomials {
                    basis.push((p, ce_t.clone(), pv_t.clone(), mono.clone()));
                }
            }
        }
    }

    let columns: Vec<(String, BTreeMap<BicplxKey, Rat>)> =
        exec::par_map(basis.clone(), |(p, ce_t, pv_t, mono)| {
            let label = format!("c{p}[{ce_t:?}|{pv_t:?}]{mono}");
            let mut e = CECochain::zero(
                m,
                p,
                CEShape::Field {
                    dim,
                    grade: pv_t.len(),
                },
            );
            e.set(
                ce_t.clone(),
                CEValue::Field(PolyVectorField::from_component(
                    dim,
                    pv_t.clone(),
                    Polynomial::monomial(dim, mono.clone(), rat::rint(1)),
                )),
            );
            let mut coords = BTreeMap::new();
            for piece in total_differential(action, pi, &e) {
                for (k, v) in field_cochain_coords(&piece) {
                    *coords.entry(k).or_insert_with(Rat::zero) += v;
                }
            }
            coords.retain(|_, v: &mut Rat| !v.is_zero());
            (label, coords)
        });

    let target = field_cochain_coords(element);
    let mut row_keys: BTreeSet<BicplxKey> = target.keys().cloned().collect();
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
    for (k, v) in &target {
        rhs[row_index[k]] = v.clone();
    }
    let problem = LinearProblem {
        labels: columns.iter().map(|(l, _)| l.clone()).collect(),
        rows,
        rhs,
    };
    match linalg::linear_solve(&problem) {
        LinearOutcome::Solution(s) => {
            let mut by_bidegree: BTreeMap<(usize, usize), CECochain> = BTreeMap::new();
            for ((p, ce_t, pv_t, mono), coeff) in basis.iter().zip(&s.particular) {
                if coeff.is_zero() {
                    continue;
                }
                let q = pv_t.len();
                let entry = by_bidegree
                    .entry((*p, q))
                    .or_insert_with(|| CECochain::zero(m, *p, CEShape::Field { dim, grade: q }));
                entry.accumulate(
                    ce_t.clone(),
                    CEValue::Field(PolyVectorField::from_component(
                        dim,
                        pv_t.clone(),
                        Polynomial::monomial(dim, mono.clone(), coeff.clone()),
                    )),
                );
            }
            Ok(BicomplexTriviality::Trivial(
                by_bidegree.into_values().collect(),
            ))
        }
        LinearOutcome::NoSolution(certificate) => Ok(BicomplexTriviality::NontrivialAtBound {
            degree_bound,
            restricted,
            certificate,
        }),
    }
}

/// Decides triviality of a closed element in plain Chevalley cohomology
/// with polyvector coefficients of one fixed grade: solves
/// `d_CE(c) = element` for a cochain of one degree lower.
pub fn ce_class_is_trivial(
    action: &Action,
    element: &CECochain,
    degree_bound: u32,
) -> Result<BicomplexTriviality, LieError> {
    let CEShape::Field { dim, grade } = element.shape else {
        return Err(LieError::KindMismatch);
    };
    if !ce_differential(action, element).is_zero() {
        return Err(LieError::NotClosed("d_CE"));
    }
    if element.degree == 0 {
        return Ok(if element.is_zero() {
            BicomplexTriviality::Trivial(vec![])
        } else {
            BicomplexTriviality::NontrivialAtBound {
                degree_bound,
                restricted: false,
                certificate: InconsistencyCertificate {
                    row_combination: vec![],
                },
            }
        });
    }
    let m = action.algebra().dim();
    let p = element.degree - 1;
    let monomials = MultiIndex::all_up_to_order(dim, degree_bound);
    let mut basis = Vec::new();
    for ce_t in increasing_tuples(m, p) {
        let ce_t: Vec<usize> = ce_t.into_iter().map(|t| t as usize).collect();
        for pv_t in increasing_tuples(dim, grade) {
            for mono in &monomials {
                basis.push((ce_t.clone(), pv_t.clone(), mono.clone()));
            }
        }
    }
    let columns: Vec<BTreeMap<BicplxKey, Rat>> =
        exec::par_map(basis.clone(), |(ce_t, pv_t, mono)| {
            let mut e = CECochain::zero(m, p, CEShape::Field { dim, grade });
            e.set(
                ce_t,
                CEValue::Field(PolyVectorField::from_component(
                    dim,
                    pv_t,
                    Polynomial::monomial(dim, mono, rat::rint(1)),
                )),
            );
            field_cochain_coords(&ce_differential(action, &e))
        });
    let target = field_cochain_coords(element);
    let mut row_keys: BTreeSet<BicplxKey> = target.keys().cloned().collect();
    for col in &columns {
        row_keys.extend(col.keys().cloned());
    }
    let row_index: BTreeMap<_, usize> = row_keys
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let mut rows: Vec<SparseVec> = vec![SparseVec::new(); row_keys.len()];
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            rows[row_index[k]].push((j, v.clone()));
        }
    }
    let mut rhs = vec![Rat::zero(); row_keys.len()];
    for (k, v) in &target {
        rhs[row_index[k]] = v.clone();
    }
    let problem = LinearProblem {
        labels: (0..columns.len()).map(|i| format!("c[{i}]")).collect(),
        rows,
        rhs,
    };
    match linalg::linear_solve(&problem) {
        LinearOutcome::Solution(s) => {
            let mut out = CECochain::zero(m, p, CEShape::Field { dim, grade });
            for ((ce_t, pv_t, mono), coeff) in basis.iter().zip(&s.particular) {
                if coeff.is_zero() {
                    continue;
                }
                out.accumulate(
                    ce_t.clone(),
                    CEValue::Field(PolyVectorField::from_component(
                        dim,
                        pv_t.clone(),
                        Polynomial::monomial(dim, mono.clone(), coeff.clone()),
                    )),
                );
            }
            Ok(BicomplexTriviality::Trivial(vec![out]))
        }
        LinearOutcome::NoSolution(certificate) => Ok(BicomplexTriviality::NontrivialAtBound {
            degree_bound,
            restricted: false,
            certificate,
        }),
    }
}

impl fmt::Display for CEValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CEValue::Series(v) => write!(f, "{v}"),
            CEValue::Field(v) => write!(f, "{v}"),
            CEValue::Op(v) => write!(f, "{v}"),
        }
    }
}

impl fmt::Display for CECochain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.values.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (t, v) in &self.values {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            let names: Vec<String> = t.iter().map(|i| format!("e{}", i + 1)).collect();
            write!(f, "({}) -> {}", names.join(","), v)?;
        }
        Ok(())
    }
}
