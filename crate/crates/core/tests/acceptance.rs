//! Acceptance suite: one test per criterion, exact arithmetic throughout,
//! deterministic seeded sampling. Each test prints a single PASS line on
//! success (visible with `cargo test -- --nocapture`).

use starlift_core::hochschild::{
    cocycle_primitive, cup, gerstenhaber, hkr_chi, hochschild_delta, skew_symbol, AnsatzBounds,
    CocyclePrimitive, PolyDiffOp,
};
use starlift_core::liealg::{
    ce_differential, Action, CECochain, CEShape, CEValue, LieAlgebra,
};
use starlift_core::lifting::{
    commutator_defect, derivation_identity_holds, inner_derivation_solve, lift_vector_field,
    obstruction_first, InnerSolve, LiftError, LiftOutcome, ObstructionRepresentative,
};
use starlift_core::lifting::{lift_action, ActionLiftOutcome};
use starlift_core::multivector::{
    lichnerowicz_d, schouten, wedge, PoissonStructure, PolyVectorField,
};
use starlift_core::poly::{MultiIndex, Polynomial};
use starlift_core::rat::{rat, rint};
use starlift_core::star::{
    gauge_transform, mc_extend, moyal_build, star_multiply, verify_mc, FormalFunction, StarError,
    StarProduct,
};
use starlift_core::testkit::Stream;

const CASES: usize = 200;

fn x(dim: usize, axis: usize) -> Polynomial {
    Polynomial::var(dim, axis)
}

fn vf(dim: usize, axis: u32, coeff: Polynomial) -> PolyVectorField {
    PolyVectorField::from_component(dim, vec![axis], coeff)
}

fn symplectic(dim: usize) -> PoissonStructure {
    let mut b = PolyVectorField::zero(dim, 2);
    for k in 0..dim / 2 {
        b.add_component(vec![2 * k as u32, 2 * k as u32 + 1], Polynomial::one(dim));
    }
    PoissonStructure::new(b).unwrap()
}

fn sign(exp: i64) -> starlift_core::Rat {
    if exp.rem_euclid(2) == 0 {
        rint(1)
    } else {
        rint(-1)
    }
}

fn nonabelian_action() -> (Action, PoissonStructure) {
    let g = LieAlgebra::new(2, vec![((0, 1), vec![rint(0), rint(1)])]).unwrap();
    let e1 = {
        let mut v = PolyVectorField::zero(2, 1);
        v.add_component(vec![0], x(2, 0));
        v.add_component(vec![1], x(2, 1).neg());
        v
    };
    let e2 = vf(2, 1, Polynomial::one(2));
    (Action::new(g, vec![e1, e2]).unwrap(), symplectic(2))
}

#[test]
fn criterion_1_algebraic_identity_suite() {
    let mut s = Stream::new(0xA11CE);

    // polynomial ring axioms
    for _ in 0..CASES {
        let (a, b, c) = (
            s.polynomial(2, 2, 3),
            s.polynomial(2, 2, 3),
            s.polynomial(2, 2, 3),
        );
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.partial(0).partial(1), a.partial(1).partial(0));
    }

    // delta^2 = 0
    for _ in 0..CASES {
        let arity = 1 + s.below(3);
        let phi = s.op(2, arity, 2, 2, 3);
        assert!(hochschild_delta(&hochschild_delta(&phi)).is_zero());
    }

    // delta phi = -[phi, mu] (arity-uniform form of the bracket identity;
    // -[mu, phi] carries the extra arity sign (-1)^(p-1), checked too)
    let mu = PolyDiffOp::multiplication(2);
    for _ in 0..CASES {
        let arity = s.below(4);
        let phi = s.op(2, arity, 2, 2, 3);
        let d = hochschild_delta(&phi);
        assert_eq!(d, gerstenhaber(&phi, &mu).unwrap().scale(&rint(-1)));
        let mu_first = gerstenhaber(&mu, &phi).unwrap();
        assert_eq!(mu_first, d.scale(&sign(arity as i64 + 1)));
    }

    // Gerstenhaber graded skew and the symmetric three-term Jacobi
    for _ in 0..CASES {
        let (p, q, r) = (1 + s.below(2), 1 + s.below(2), 1 + s.below(2));
        let a = s.op(2, p, 1, 1, 2);
        let b = s.op(2, q, 1, 1, 2);
        let c = s.op(2, r, 1, 1, 2);
        let ab = gerstenhaber(&a, &b).unwrap();
        let ba = gerstenhaber(&b, &a).unwrap();
        assert_eq!(
            ab,
            ba.scale(&sign((p as i64 - 1) * (q as i64 - 1) + 1)),
            "graded skew"
        );
        let t1 = gerstenhaber(&a, &gerstenhaber(&b, &c).unwrap())
            .unwrap()
            .scale(&sign((p as i64 - 1) * (r as i64 - 1)));
        let t2 = gerstenhaber(&b, &gerstenhaber(&c, &a).unwrap())
            .unwrap()
            .scale(&sign((q as i64 - 1) * (p as i64 - 1)));
        let t3 = gerstenhaber(&c, &gerstenhaber(&a, &b).unwrap())
            .unwrap()
            .scale(&sign((r as i64 - 1) * (q as i64 - 1)));
        assert!(t1.add(&t2).add(&t3).is_zero(), "graded Jacobi");
    }

    // cup-Leibniz
    for _ in 0..CASES {
        let (p, q) = (1 + s.below(2), 1 + s.below(2));
        let a = s.op(2, p, 2, 1, 2);
        let b = s.op(2, q, 2, 1, 2);
        let lhs = hochschild_delta(&cup(&a, &b).unwrap());
        let rhs = cup(&hochschild_delta(&a), &b)
            .unwrap()
            .add(&cup(&a, &hochschild_delta(&b)).unwrap().scale(&sign(p as i64)));
        assert_eq!(lhs, rhs, "cup Leibniz");
    }

    // Schouten graded Jacobi (shifted grades) and wedge-Leibniz
    for _ in 0..CASES {
        let (ga, gb, gc) = (1 + s.below(2), 1 + s.below(2), s.below(3));
        let a = s.polyvector(3, ga, 2, 2);
        let b = s.polyvector(3, gb, 2, 2);
        let c = s.polyvector(3, gc, 2, 2);
        let t1 = schouten(&a, &schouten(&b, &c)).scale(&sign((ga as i64 - 1) * (gc as i64 - 1)));
        let t2 = schouten(&b, &schouten(&c, &a)).scale(&sign((gb as i64 - 1) * (ga as i64 - 1)));
        let t3 = schouten(&c, &schouten(&a, &b)).scale(&sign((gc as i64 - 1) * (gb as i64 - 1)));
        assert!(t1.add(&t2).add(&t3).is_zero(), "Schouten graded Jacobi");
        // [a, b ^ c] = [a,b] ^ c + (-1)^((ga-1) gb) b ^ [a,c]
        let lhs = schouten(&a, &wedge(&b, &c));
        let rhs = wedge(&schouten(&a, &b), &c).add(
            &wedge(&b, &schouten(&a, &c)).scale(&sign((ga as i64 - 1) * gb as i64)),
        );
        assert_eq!(lhs, rhs, "wedge Leibniz");
        // wedge associativity and graded commutativity
        assert_eq!(wedge(&a, &wedge(&b, &c)), wedge(&wedge(&a, &b), &c));
        assert_eq!(wedge(&a, &b), wedge(&b, &a).scale(&sign((ga * gb) as i64)));
    }

    // d_pi^2 = 0 over a pool of valid Poisson structures
    let pis = vec![
        symplectic(2),
        PoissonStructure::new(PolyVectorField::from_component(2, vec![0, 1], x(2, 0))).unwrap(),
        LieAlgebra::new(2, vec![((0, 1), vec![rint(0), rint(1)])])
            .unwrap()
            .kirillov_kostant(),
    ];
    for _ in 0..CASES {
        let pi = &pis[s.below(pis.len())];
        let grade = s.below(2);
        let y = s.polyvector(2, grade, 2, 2);
        assert!(lichnerowicz_d(pi, &lichnerowicz_d(pi, &y)).is_zero());
    }

    // CE differential squares to zero for all three coefficient kinds
    let (action, _) = nonabelian_action();
    for kind in 0..3 {
        for _ in 0..CASES {
            let degree = s.below(2);
            let shape = match kind {
                0 => CEShape::Series { dim: 2, order: 1 },
                1 => CEShape::Field { dim: 2, grade: 1 },
                _ => CEShape::Op { dim: 2, arity: 1 },
            };
            let mut c = CECochain::zero(2, degree, shape);
            for tuple in starlift_core::multivector::increasing_tuples(2, degree) {
                let tuple: Vec<usize> = tuple.into_iter().map(|t| t as usize).collect();
                let v = match kind {
                    0 => CEValue::Series(FormalFunction::from_coeffs(
                        2,
                        vec![s.polynomial(2, 2, 2), s.polynomial(2, 2, 2)],
                    )),
                    1 => CEValue::Field(s.polyvector(2, 1, 2, 2)),
                    _ => CEValue::Op(s.op(2, 1, 2, 1, 2)),
                };
                c.set(tuple, v);
            }
            let dd = ce_differential(&action, &ce_differential(&action, &c));
            assert!(dd.is_zero(), "CE differential must square to zero");
        }
    }

    println!(
        "[PASS] criterion 1: algebraic identity suite ({CASES} cases per identity, exact; \
         delta = -[phi,mu] with -[mu,phi] = (-1)^(p-1) delta as documented)"
    );
}

#[test]
fn criterion_2_hkr_suite() {
    let mut s = Stream::new(0xB0B);
    for _ in 0..CASES {
        let grade = s.below(4);
        let v = s.polyvector(3, grade, 2, 2);
        // delta o chi = 0
        assert!(hochschild_delta(&hkr_chi(&v)).is_zero());
        // skew_symbol o chi = id
        assert_eq!(skew_symbol(&hkr_chi(&v)), v);
    }
    for _ in 0..CASES {
        let arity = 1 + s.below(2);
        let psi = s.op(3, arity, 2, 2, 3);
        // skew_symbol o delta = 0
        assert!(skew_symbol(&hochschild_delta(&psi)).is_zero());
    }
    println!("[PASS] criterion 2: HKR suite (delta o chi = 0, skew o chi = id, skew o delta = 0)");
}

#[test]
fn criterion_3_star_product_suite() {
    // Moyal on R^2 and R^4 through order 6
    for dim in [2usize, 4] {
        let star = moyal_build(&symplectic(dim), 6).unwrap();
        for report in verify_mc(&star, 6) {
            assert!(
                report.is_zero,
                "Moyal dim {dim} defect at order {}",
                report.order
            );
        }
        // parity pattern for all B_k, k <= 6
        assert!(star.parity_pattern_holds());
    }

    // x1 * x2 - x2 * x1 = hbar exactly
    let star2 = moyal_build(&symplectic(2), 6).unwrap();
    let f = FormalFunction::classical(x(2, 0), 6);
    let g = FormalFunction::classical(x(2, 1), 6);
    let comm = star_multiply(&star2, &f, &g)
        .unwrap()
        .sub(&star_multiply(&star2, &g, &f).unwrap());
    let mut hbar = FormalFunction::zero(2, 6);
    *hbar.coeff_mut(1) = Polynomial::one(2);
    assert_eq!(comm, hbar);

    // pointwise associativity cross-check: random formal-function triples
    // must associate exactly whenever the operator-level defects are zero
    let mut rng = Stream::new(0xA550C);
    for _ in 0..20 {
        let mk = |rng: &mut Stream| {
            FormalFunction::from_coeffs(
                2,
                (0..=4).map(|_| rng.polynomial(2, 2, 2)).collect(),
            )
        };
        let (a, b, c) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
        let lhs = star_multiply(&star2, &star_multiply(&star2, &a, &b).unwrap(), &c).unwrap();
        let rhs = star_multiply(&star2, &a, &star_multiply(&star2, &b, &c).unwrap()).unwrap();
        assert_eq!(lhs, rhs, "random triple must associate");
    }

    // ten randomized gauges preserve all-zero MC status
    let base = moyal_build(&symplectic(2), 4).unwrap();
    let mut s = Stream::new(0x6A6A);
    for round in 0..10 {
        let t: Vec<PolyDiffOp> = (0..1 + s.below(2)).map(|_| s.op(2, 1, 2, 1, 2)).collect();
        let gauged = gauge_transform(&base, &t).expect("gauge transform");
        for report in verify_mc(&gauged, 4) {
            assert!(
                report.is_zero,
                "gauge round {round} broke MC at order {}",
                report.order
            );
        }
        assert_eq!(skew_symbol(&gauged.bk(1)), skew_symbol(&base.bk(1)));
    }
    println!(
        "[PASS] criterion 3: star suite (Moyal R^2/R^4 MC zero through 6, commutator = hbar, \
         parity pattern, 10 random gauges preserve MC)"
    );
}

#[test]
fn criterion_4_mc_extension_kirillov_kostant() {
    let g = LieAlgebra::new(2, vec![((0, 1), vec![rint(0), rint(1)])]).unwrap();
    let pi = g.kirillov_kostant();
    let b1 = hkr_chi(pi.bivector()).scale(&rat(1, 2));
    let s1 = StarProduct::new(2, vec![b1]).unwrap();

    // the stated bound (dord <= 2, deg <= 1) is infeasible: delta preserves
    // coefficient degree while B1 o B1 has x2^2 terms; the solver certifies
    // this with an exact inconsistency witness
    match mc_extend(&s1, AnsatzBounds::new(1, 2)) {
        Err(StarError::AnsatzExhausted { order: 2, .. }) => {}
        other => panic!("deg<=1 must be infeasible with a certificate, got {other:?}"),
    }

    // deg <= 2 succeeds and verify_mc(2) certifies the witness
    let s2 = mc_extend(&s1, AnsatzBounds::new(2, 2)).expect("B2 exists at deg <= 2");
    for report in verify_mc(&s2, 2) {
        assert!(report.is_zero, "defect at order {}", report.order);
    }
    assert!(s2.bk(2).max_slot_order() <= 2 && s2.bk(2).coeff_degree() <= 2);

    // d2 is not Poisson for pi = x2 d1^d2: the lift rejects it with the
    // exact Schouten witness [d2, pi] = d1^d2
    match lift_vector_field(&s2, &vf(2, 1, Polynomial::one(2)), 2, AnsatzBounds::new(2, 3)) {
        Err(LiftError::NotPoissonField(w)) => {
            assert_eq!(
                *w,
                PolyVectorField::from_component(2, vec![0, 1], Polynomial::one(2))
            );
        }
        other => panic!("expected NotPoissonField with witness, got {other:?}"),
    }

    // d1 is Poisson; the lift runs through order 2 (series or closed
    // obstruction), with every integrity check passing
    match lift_vector_field(&s2, &vf(2, 0, Polynomial::one(2)), 2, AnsatzBounds::new(2, 3)) {
        Ok(LiftOutcome::Series(series)) => {
            assert!(derivation_identity_holds(&series, 3).unwrap());
        }
        Ok(LiftOutcome::Obstruction(report)) => {
            // representative closedness is engine-verified; double-check
            match &report.representative {
                ObstructionRepresentative::Field(z) => {
                    assert!(lichnerowicz_d(s2.poisson(), z).is_zero());
                }
                _ => panic!("one-field obstruction must be a polyvector class"),
            }
        }
        Err(e) => panic!("integrity failure in criterion 4 lift: {e}"),
    }
    println!(
        "[PASS] criterion 4: MC extension for x2 d1^d2 (deg<=1 infeasible with certificate, \
         B2 found and certified at dord<=2, deg<=2; d2 rejected non-Poisson with witness, \
         d1 lift integrity clean)"
    );
}

#[test]
fn criterion_5_lifting_regression() {
    let star = moyal_build(&symplectic(2), 4).unwrap();
    let bounds = AnsatzBounds::new(2, 3);
    let fields: Vec<(&str, PolyVectorField)> = vec![
        ("d1", vf(2, 0, Polynomial::one(2))),
        ("d2", vf(2, 1, Polynomial::one(2))),
        ("x1 d1 - x2 d2", {
            let mut v = PolyVectorField::zero(2, 1);
            v.add_component(vec![0], x(2, 0));
            v.add_component(vec![1], x(2, 1).neg());
            v
        }),
        ("x1 d2", vf(2, 1, x(2, 0))),
        ("x2 d1", vf(2, 0, x(2, 1))),
    ];
    for (name, x0) in &fields {
        match lift_vector_field(&star, x0, 4, bounds).unwrap() {
            LiftOutcome::Series(series) => {
                for k in 1..=4 {
                    assert!(series.term(k).is_zero(), "{name}: X_{k} must vanish");
                }
                assert!(
                    derivation_identity_holds(&series, 3).unwrap(),
                    "{name}: independent derivation oracle failed"
                );
            }
            _ => panic!("{name}: expected a series"),
        }
    }
    // Hamiltonian fields with quadratic coefficients also lift through 4
    // (corrections may be nonzero here; the oracle still certifies them)
    let pi = symplectic(2);
    for h in [
        x(2, 0).mul(&x(2, 0)).mul(&x(2, 1)),
        x(2, 0).mul(&x(2, 0)).mul(&x(2, 0)),
        x(2, 0).mul(&x(2, 1)).mul(&x(2, 1)),
    ] {
        let x0 = lichnerowicz_d(&pi, &PolyVectorField::scalar(h));
        assert_eq!(x0.grade(), 1);
        match lift_vector_field(&star, &x0, 4, AnsatzBounds::new(2, 3)).unwrap() {
            LiftOutcome::Series(series) => {
                assert!(derivation_identity_holds(&series, 3).unwrap());
            }
            _ => panic!("Hamiltonian fields on the symplectic plane lift unobstructed"),
        }
    }
    // non-Poisson input rejected with a Schouten witness
    match lift_vector_field(&star, &vf(2, 0, x(2, 0)), 4, bounds) {
        Err(LiftError::NotPoissonField(w)) => assert!(!w.is_zero()),
        other => panic!("expected rejection, got {other:?}"),
    }
    println!(
        "[PASS] criterion 5: Moyal lifting regression (5 linear Poisson fields with zero \
         corrections, 3 quadratic Hamiltonian fields, derivation oracle on monomials \
         deg <= 3, non-Poisson rejected)"
    );
}

#[test]
fn criterion_6_action_lifting() {
    let star = moyal_build(&symplectic(2), 3).unwrap();
    let bounds = AnsatzBounds::new(2, 3);

    // abelian translation action
    let abelian = Action::new(
        LieAlgebra::abelian(2),
        vec![vf(2, 0, Polynomial::one(2)), vf(2, 1, Polynomial::one(2))],
    )
    .unwrap();
    // nonabelian linear action
    let (nonabelian, _) = nonabelian_action();

    for (name, action) in [("abelian translations", &abelian), ("nonabelian linear", &nonabelian)]
    {
        match lift_action(&star, action, 3, bounds).unwrap() {
            ActionLiftOutcome::Series(series) => {
                assert_eq!(series.certified_order_derivation(), 3, "{name}");
                assert_eq!(series.certified_order_homomorphism(), 3, "{name}");
                for d in commutator_defect(&series, 0, 1) {
                    assert!(d.is_zero(), "{name}: commutator defect must vanish");
                }
            }
            _ => panic!("{name}: expected a certified series"),
        }
    }

    // deliberately corrupted phi_1: nonzero delta-closed defect, classified
    // by the inner-derivation solve
    let series = match lift_action(&star, &nonabelian, 2, bounds).unwrap() {
        ActionLiftOutcome::Series(s) => s,
        _ => panic!("expected series"),
    };
    let mut d1op = PolyDiffOp::zero(2, 1);
    d1op.add_term(vec![MultiIndex::unit(2, 0)], Polynomial::one(2));
    let corrupted = series.with_term(1, 1, d1op);
    let defects = commutator_defect(&corrupted, 0, 1);
    assert!(defects.iter().any(|d| !d.is_zero()));
    for d in &defects {
        assert!(
            hochschild_delta(d).is_zero(),
            "corruption defect must be delta-closed at every order"
        );
    }
    match inner_derivation_solve(&star, &defects, AnsatzBounds::new(2, 2)).unwrap() {
        InnerSolve::Inner(f) => assert!(!f.is_zero()),
        InnerSolve::NotInnerAtBound { .. } => {
            panic!("defect must be classified inner within bounds")
        }
    }
    println!(
        "[PASS] criterion 6: action lifting (abelian + nonabelian certified through order 3, \
         zero commutator defects; corrupted phi_1 gives delta-closed defect classified inner)"
    );
}

#[test]
fn criterion_7_inner_derivation_oracle() {
    let star = moyal_build(&symplectic(2), 2).unwrap();
    let zero1 = PolyDiffOp::zero(2, 1);

    // brute-force oracle: ad_{x1} and ad_{x2} via the star product itself
    let monomials = Polynomial::monomial_basis(2, 3);
    for (coord, expect_axis, expect_sign) in [(0usize, 1usize, 1i64), (1, 0, -1)] {
        let fc = FormalFunction::classical(x(2, coord), 2);
        for gp in &monomials {
            let gg = FormalFunction::classical(gp.clone(), 2);
            let ad = star_multiply(&star, &fc, &gg)
                .unwrap()
                .sub(&star_multiply(&star, &gg, &fc).unwrap());
            // ad_{x_c}(g) = sign hbar d_axis g exactly
            assert!(ad.coeff(0).is_zero());
            assert_eq!(ad.coeff(1), &gp.partial(expect_axis).scale(&rint(expect_sign)));
            assert!(ad.coeff(2).is_zero());
        }
    }

    // the solver recovers them from the operator series
    let mut d2op = PolyDiffOp::zero(2, 1);
    d2op.add_term(vec![MultiIndex::unit(2, 1)], Polynomial::one(2));
    match inner_derivation_solve(&star, &[zero1.clone(), d2op], AnsatzBounds::new(2, 2)).unwrap() {
        InnerSolve::Inner(f) => {
            // f = x1 up to a central (constant) ambiguity at each order
            assert!(f.coeff(0).sub(&x(2, 0)).total_degree() == 0);
        }
        _ => panic!("ad_{{x1}} = hbar d2 must be recovered"),
    }
    let mut md1op = PolyDiffOp::zero(2, 1);
    md1op.add_term(vec![MultiIndex::unit(2, 0)], Polynomial::constant(2, rint(-1)));
    match inner_derivation_solve(&star, &[zero1, md1op], AnsatzBounds::new(2, 2)).unwrap() {
        InnerSolve::Inner(f) => {
            assert!(f.coeff(0).sub(&x(2, 1)).total_degree() == 0);
        }
        _ => panic!("ad_{{x2}} = -hbar d1 must be recovered"),
    }
    println!(
        "[PASS] criterion 7: inner-derivation oracle (ad_x1 = h d2, ad_x2 = -h d1, solver \
         matches brute-force star commutators on monomials deg <= 3)"
    );
}

#[test]
fn criterion_8_obstruction_integrity_fuzz() {
    let mut s = Stream::new(0xF022);
    let mut caught = 0;
    let mut configs = 0;
    while configs < 50 {
        // constant Poisson bivector in dim 2 or 4 (any constant bivector is
        // Poisson), Moyal through order 2 or 3
        let dim = if s.below(2) == 0 { 2 } else { 4 };
        let mut b = PolyVectorField::zero(dim, 2);
        for t in starlift_core::multivector::increasing_tuples(dim, 2) {
            if s.below(2) == 0 {
                b.add_component(t, Polynomial::constant(dim, s.rational()));
            }
        }
        let pi = match PoissonStructure::new(b) {
            Ok(pi) => pi,
            Err(_) => unreachable!("constant bivectors satisfy Jacobi"),
        };
        let order = 2 + s.below(2);
        let star = moyal_build(&pi, order).unwrap();

        // tamper one correction term with junk that genuinely breaks the
        // associativity hierarchy (resample until the defect is nonzero)
        let k = 1 + s.below(order);
        let junk = s.op(dim, 2, 1, 1, 2);
        if junk.is_zero() {
            continue;
        }
        let mut bs: Vec<PolyDiffOp> = (1..=order).map(|i| star.bk(i)).collect();
        bs[k - 1] = bs[k - 1].add(&junk);
        let tampered = match StarProduct::new(dim, bs) {
            Ok(t) => t,
            Err(_) => {
                // junk changed the skew part into a non-Poisson bivector:
                // caught at construction, which is also a valid catch
                caught += 1;
                configs += 1;
                continue;
            }
        };
        let defects = verify_mc(&tampered, order);
        if defects.iter().all(|r| r.is_zero) {
            // the junk happened to be a legitimate cocycle modification at
            // the top order; that is a valid star product, not tampering
            continue;
        }
        configs += 1;
        caught += 1;
        // the lift must refuse with a star defect, never emit an
        // obstruction report
        let x0 = vf(dim, 0, Polynomial::one(dim));
        match lift_vector_field(&tampered, &x0, order, AnsatzBounds::new(1, 2)) {
            Err(LiftError::StarNotAssociative { .. }) => {}
            Err(LiftError::NotPoissonField(_)) => {}
            Ok(LiftOutcome::Obstruction(_)) => {
                panic!("tampering misreported as a mathematical obstruction")
            }
            Ok(LiftOutcome::Series(_)) => {
                panic!("tampered star product must not certify a lift")
            }
            Err(e) => panic!("unexpected error class: {e}"),
        }
    }
    assert_eq!(caught, 50);

    // obstruction reports carry closed representatives (re-verified here on
    // the criterion-4 pipeline star)
    let g = LieAlgebra::new(2, vec![((0, 1), vec![rint(0), rint(1)])]).unwrap();
    let pi = g.kirillov_kostant();
    let b1 = hkr_chi(pi.bivector()).scale(&rat(1, 2));
    let s1 = StarProduct::new(2, vec![b1]).unwrap();
    let s2 = mc_extend(&s1, AnsatzBounds::new(2, 2)).unwrap();
    let report = obstruction_first(&s2, &vf(2, 0, Polynomial::one(2)), 2).unwrap();
    match &report.representative {
        ObstructionRepresentative::Field(z) => {
            assert!(lichnerowicz_d(s2.poisson(), z).is_zero());
        }
        _ => panic!("field representative expected"),
    }
    println!(
        "[PASS] criterion 8: 50 tampered configurations all caught as MC defects or \
         construction failures, never misreported; obstruction representatives closed"
    );
}

#[test]
fn hkr_bracket_compatibility_graded_factor() {
    // Exact supplementary check backing the HKR consistency invariant:
    // skew(gerstenhaber(chi a, chi b)) = +/- (p! q! / (p+q-1)!) schouten(a, b)
    // at the grade pairs the engine relies on. The sign/factor table is
    // frozen from the exact computation: (1,1), (1,2), (2,1) carry +1;
    // (2,0) carries +2 relative to [pi, f] = -iota_{df} pi, i.e. -2 here.
    let mut s = Stream::new(0x5EED);
    for _ in 0..CASES {
        let a1 = s.polyvector(2, 1, 2, 2);
        let b1 = s.polyvector(2, 1, 2, 2);
        assert_eq!(
            skew_symbol(&gerstenhaber(&hkr_chi(&a1), &hkr_chi(&b1)).unwrap()),
            schouten(&a1, &b1)
        );
        let b2 = s.polyvector(2, 2, 2, 2);
        assert_eq!(
            skew_symbol(&gerstenhaber(&hkr_chi(&a1), &hkr_chi(&b2)).unwrap()),
            schouten(&a1, &b2)
        );
        assert_eq!(
            skew_symbol(&gerstenhaber(&hkr_chi(&b2), &hkr_chi(&a1)).unwrap()),
            schouten(&b2, &a1)
        );
        let f = s.polynomial(2, 2, 2);
        let f0 = PolyVectorField::scalar(f);
        assert_eq!(
            skew_symbol(&gerstenhaber(&hkr_chi(&b2), &hkr_chi(&f0)).unwrap()),
            schouten(&b2, &f0).scale(&rint(-2))
        );
    }
    println!("[PASS] supplementary: HKR bracket compatibility with the exact graded factors");
}

#[test]
fn cocycle_primitive_hkr_nontriviality() {
    // chi(d1^d2) is closed and has no primitive at any small bound
    let pi = PolyVectorField::from_component(2, vec![0, 1], Polynomial::one(2));
    let phi = hkr_chi(&pi);
    for bounds in [AnsatzBounds::new(1, 2), AnsatzBounds::new(2, 3)] {
        match cocycle_primitive(&phi, bounds).unwrap() {
            CocyclePrimitive::NoneAtBound { .. } => {}
            _ => panic!("HKR class must not acquire a primitive at {bounds}"),
        }
    }
    println!("[PASS] supplementary: HKR nontriviality certified at small bounds");
}
