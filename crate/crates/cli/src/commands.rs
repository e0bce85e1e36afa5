//! Command implementations over a parsed session.
//!
//! Exit-code contract: 0 = success / trivial class, 2 = obstruction found
//! (nonzero MC defect, nontrivial class at the bound, not inner, cochain
//! not closed), 1 = error (bad input, integrity failure, exhausted ansatz).

use serde_json::{json, Map, Value as Json};

use starlift_core::hochschild::{AnsatzBounds, PolyDiffOp};
use starlift_core::liealg::{ce_differential, Action, CECochain, CEShape, CEValue, LieAlgebra};
use starlift_core::lifting::{
    inner_derivation_solve, lift_action, lift_vector_field, obstruction_first, ActionLiftOutcome,
    InnerSolve, LiftOutcome, ObstructionKind, ObstructionReport, ObstructionRepresentative,
    TrivialityVerdict,
};
use starlift_core::multivector::{
    poisson_class_is_trivial, PoissonStructure, PoissonTriviality, PolyVectorField,
};
use starlift_core::poly::Polynomial;
use starlift_core::star::{
    gauge_transform, mc_extend, star_multiply, verify_mc, FormalFunction, StarProduct,
};

use crate::parser::{parse_inline, ParseError, Value};
use crate::report::Report;
use crate::session::{CeDef, Defined, SessionFile};

pub struct CliError {
    pub message: String,
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError {
            message: e.to_string(),
        }
    }
}

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError {
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Report, CliError>;

fn fail<T>(message: impl Into<String>) -> Result<T, CliError> {
    Err(CliError {
        message: message.into(),
    })
}

/// Looks a name up or parses the argument as an inline expression.
fn resolve_value(session: &SessionFile, arg: &str) -> Result<Value, CliError> {
    match session.defs.get(arg) {
        Some(Defined::Poly(p)) => Ok(Value::Poly(p.clone())),
        Some(Defined::Mvf(v)) => Ok(Value::Mvf(v.clone())),
        Some(Defined::Op(o)) => Ok(Value::Op(o.clone())),
        Some(other) => fail(format!("'{arg}' is a {}, expected a value", other.kind())),
        None => Ok(parse_inline(arg, session.dim, &session.defs)?),
    }
}

fn resolve_mvf(
    session: &SessionFile,
    arg: &str,
    grade: Option<usize>,
) -> Result<PolyVectorField, CliError> {
    let v = resolve_value(session, arg)?;
    Ok(v.into_mvf(session.dim, grade, crate::lexer::Pos { line: 0, col: 0 })
        .map_err(|e| CliError { message: e.message })?)
}

fn resolve_op(session: &SessionFile, arg: &str, arity: Option<usize>) -> Result<PolyDiffOp, CliError> {
    let v = resolve_value(session, arg)?;
    Ok(v.into_op(session.dim, arity, crate::lexer::Pos { line: 0, col: 0 })
        .map_err(|e| CliError { message: e.message })?)
}

fn resolve_poly(session: &SessionFile, arg: &str) -> Result<Polynomial, CliError> {
    let v = resolve_value(session, arg)?;
    Ok(v.into_poly(session.dim, crate::lexer::Pos { line: 0, col: 0 })
        .map_err(|e| CliError { message: e.message })?)
}

fn resolve_star<'a>(session: &'a SessionFile, name: &str) -> Result<&'a StarProduct, CliError> {
    match session.defs.get(name) {
        Some(Defined::Star(s)) => Ok(s),
        Some(other) => fail(format!("'{name}' is a {}, expected a star product", other.kind())),
        None => fail(format!("unknown star product '{name}'")),
    }
}

fn resolve_action<'a>(session: &'a SessionFile, name: &str) -> Result<&'a Action, CliError> {
    match session.defs.get(name) {
        Some(Defined::Action { action, .. }) => Ok(action),
        Some(other) => fail(format!("'{name}' is a {}, expected an action", other.kind())),
        None => fail(format!("unknown action '{name}'")),
    }
}

fn resolve_lie<'a>(session: &'a SessionFile, name: &str) -> Result<&'a LieAlgebra, CliError> {
    match session.defs.get(name) {
        Some(Defined::Lie(g)) => Ok(g),
        Some(other) => fail(format!("'{name}' is a {}, expected a Lie algebra", other.kind())),
        None => fail(format!("unknown Lie algebra '{name}'")),
    }
}

fn resolve_ce<'a>(session: &'a SessionFile, name: &str) -> Result<&'a CeDef, CliError> {
    match session.defs.get(name) {
        Some(Defined::Ce(c)) => Ok(c),
        Some(other) => fail(format!("'{name}' is a {}, expected a CE cochain", other.kind())),
        None => fail(format!("unknown CE cochain '{name}'")),
    }
}

/// Fallback ansatz bounds when the user gives none: one degree above and
/// two derivative orders above what the involved objects carry.
fn auto_bounds(star: &StarProduct, extra: &[&PolyDiffOp]) -> AnsatzBounds {
    let mut deg = 0;
    let mut dord = 0;
    for k in 1..=star.order() {
        let b = star.bk(k);
        deg = deg.max(b.coeff_degree());
        dord = dord.max(b.max_slot_order());
    }
    for op in extra {
        deg = deg.max(op.coeff_degree());
        dord = dord.max(op.max_slot_order());
    }
    AnsatzBounds::new(deg + 1, dord + 2)
}

fn defect_json(reports: &[starlift_core::star::MCDefectReport]) -> (Json, bool) {
    let mut arr = Vec::new();
    let mut all_zero = true;
    for r in reports {
        all_zero &= r.is_zero;
        arr.push(json!({
            "order": r.order,
            "zero": r.is_zero,
            "defect": r.defect.to_string(),
        }));
    }
    (Json::Array(arr), all_zero)
}

fn obstruction_json(report: &ObstructionReport) -> Json {
    let kind = match report.kind {
        ObstructionKind::PoissonClass => "poisson_class",
        ObstructionKind::BicomplexClass => "bicomplex_class",
        ObstructionKind::ChevalleyClass => "chevalley_class",
    };
    let representative = match &report.representative {
        ObstructionRepresentative::Field(f) => f.to_string(),
        ObstructionRepresentative::Cochain(c) => c.to_string(),
    };
    let verdict = match &report.verdict {
        TrivialityVerdict::TrivialPoisson(w) => json!({
            "trivial": true,
            "primitive": w.to_string(),
        }),
        TrivialityVerdict::TrivialCochain(parts) => json!({
            "trivial": true,
            "primitive_parts": parts.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }),
        TrivialityVerdict::NontrivialAtBound {
            degree_bound,
            restricted,
            ..
        } => json!({
            "trivial": false,
            "degree_bound": degree_bound,
            "restricted": restricted,
        }),
    };
    json!({
        "order": report.order,
        "kind": kind,
        "representative": representative,
        "verdict": verdict,
    })
}

pub fn verify_mc_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    order: usize,
) -> CmdResult {
    let s = resolve_star(session, star)?;
    if order > s.order() {
        return fail(format!(
            "order {order} exceeds the truncation {} of '{star}'",
            s.order()
        ));
    }
    let reports = verify_mc(s, order);
    let (arr, all_zero) = defect_json(&reports);
    let mut r = Report::new(
        argv,
        if all_zero { "ok" } else { "mc-defect" },
        if all_zero { 0 } else { 2 },
    );
    r.insert("orders", arr);
    r.insert("all_zero", json!(all_zero));
    Ok(r)
}

pub fn mc_extend_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    order: usize,
    bounds: AnsatzBounds,
) -> CmdResult {
    let mut s = resolve_star(session, star)?.clone();
    if order <= s.order() {
        return fail(format!(
            "'{star}' already has truncation {}, nothing to extend to {order}",
            s.order()
        ));
    }
    let mut new_terms = Map::new();
    while s.order() < order {
        s = mc_extend(&s, bounds)?;
        let k = s.order();
        new_terms.insert(format!("B{k}"), json!(s.bk(k).to_string()));
    }
    let reports = verify_mc(&s, order);
    let (_, all_zero) = defect_json(&reports);
    let mut r = Report::new(argv, "ok", 0);
    r.insert("extended_to", json!(order));
    r.insert("new_terms", Json::Object(new_terms));
    r.insert("verified_through", json!(order));
    r.insert("all_zero", json!(all_zero));
    Ok(r)
}

pub fn star_mul_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    f: &str,
    g: &str,
) -> CmdResult {
    let s = resolve_star(session, star)?;
    let fp = FormalFunction::classical(resolve_poly(session, f)?, s.order());
    let gp = FormalFunction::classical(resolve_poly(session, g)?, s.order());
    let prod = star_multiply(s, &fp, &gp)?;
    let mut r = Report::new(argv, "ok", 0);
    r.insert("product", json!(prod.to_string()));
    Ok(r)
}

pub fn lift_field_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    field: &str,
    order: usize,
    bounds: Option<AnsatzBounds>,
) -> CmdResult {
    let s = resolve_star(session, star)?;
    let x0 = resolve_mvf(session, field, Some(1))?;
    let bounds = bounds.unwrap_or_else(|| {
        let chi = starlift_core::hochschild::hkr_chi(&x0);
        auto_bounds(s, &[&chi])
    });
    match lift_vector_field(s, &x0, order, bounds)? {
        LiftOutcome::Series(series) => {
            let mut corr = Map::new();
            for k in 1..=order {
                corr.insert(format!("X{k}"), json!(series.term(k).to_string()));
            }
            let mut r = Report::new(argv, "ok", 0);
            r.insert("certified_order", json!(series.certified_order()));
            r.insert("corrections", Json::Object(corr));
            r.insert("bounds", json!(bounds.to_string()));
            Ok(r)
        }
        LiftOutcome::Obstruction(report) => {
            let mut r = Report::new(argv, "obstruction", 2);
            r.insert("obstruction", obstruction_json(&report));
            r.insert("bounds", json!(bounds.to_string()));
            Ok(r)
        }
    }
}

pub fn obstruction_first_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    field: &str,
    bounds: Option<AnsatzBounds>,
) -> CmdResult {
    let s = resolve_star(session, star)?;
    let x0 = resolve_mvf(session, field, Some(1))?;
    let deg = bounds.map(|b| b.deg).unwrap_or_else(|| {
        let chi = starlift_core::hochschild::hkr_chi(&x0);
        auto_bounds(s, &[&chi]).deg
    });
    let report = obstruction_first(s, &x0, deg)?;
    let trivial = report.is_trivial();
    let mut r = Report::new(
        argv,
        if trivial { "ok" } else { "obstruction" },
        if trivial { 0 } else { 2 },
    );
    r.insert("obstruction", obstruction_json(&report));
    Ok(r)
}

pub fn lift_action_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    action: &str,
    order: usize,
    bounds: Option<AnsatzBounds>,
) -> CmdResult {
    let s = resolve_star(session, star)?;
    let act = resolve_action(session, action)?;
    let bounds = bounds.unwrap_or_else(|| auto_bounds(s, &[]));
    match lift_action(s, act, order, bounds)? {
        ActionLiftOutcome::Series(series) => {
            let mut phis = Map::new();
            for k in 1..=order {
                let mut per = Map::new();
                for i in 0..act.algebra().dim() {
                    per.insert(format!("e{}", i + 1), json!(series.phi_op(k, i).to_string()));
                }
                phis.insert(format!("phi{k}"), Json::Object(per));
            }
            let mut r = Report::new(argv, "ok", 0);
            r.insert(
                "certified_order_derivation",
                json!(series.certified_order_derivation()),
            );
            r.insert(
                "certified_order_homomorphism",
                json!(series.certified_order_homomorphism()),
            );
            r.insert("phi", Json::Object(phis));
            r.insert("warnings", json!(series.warnings()));
            r.insert("bounds", json!(bounds.to_string()));
            Ok(r)
        }
        ActionLiftOutcome::Obstruction(report) => {
            let mut r = Report::new(argv, "obstruction", 2);
            r.insert("obstruction", obstruction_json(&report));
            r.insert("bounds", json!(bounds.to_string()));
            Ok(r)
        }
    }
}

pub fn inner_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    terms: &[String],
    bounds: Option<AnsatzBounds>,
) -> CmdResult {
    let s = resolve_star(session, star)?;
    if terms.is_empty() {
        return fail("provide the series terms D0 [D1 D2 ...] by hbar order");
    }
    let d: Vec<PolyDiffOp> = terms
        .iter()
        .map(|t| resolve_op(session, t, Some(1)))
        .collect::<Result<_, _>>()?;
    let bounds = bounds.unwrap_or_else(|| {
        let refs: Vec<&PolyDiffOp> = d.iter().collect();
        auto_bounds(s, &refs)
    });
    match inner_derivation_solve(s, &d, bounds)? {
        InnerSolve::Inner(f) => {
            let mut r = Report::new(argv, "ok", 0);
            r.insert("inner", json!(true));
            r.insert("f", json!(f.to_string()));
            Ok(r)
        }
        InnerSolve::NotInnerAtBound { bounds, .. } => {
            let mut r = Report::new(argv, "not-inner", 2);
            r.insert("inner", json!(false));
            r.insert("bounds", json!(bounds.to_string()));
            Ok(r)
        }
    }
}

pub fn poisson_cohomology_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    pi: &str,
    z: &str,
    deg: u32,
) -> CmdResult {
    let field = resolve_mvf(session, pi, Some(2))?;
    let pi = PoissonStructure::new(field)?;
    let zf = resolve_mvf(session, z, None)?;
    match poisson_class_is_trivial(&pi, &zf, deg)? {
        PoissonTriviality::Trivial(w) => {
            let mut r = Report::new(argv, "ok", 0);
            r.insert("trivial", json!(true));
            r.insert("primitive", json!(w.to_string()));
            r.insert("degree_bound", json!(deg));
            Ok(r)
        }
        PoissonTriviality::NontrivialAtBound { degree_bound, .. } => {
            let mut r = Report::new(argv, "nontrivial-at-bound", 2);
            r.insert("trivial", json!(false));
            r.insert("degree_bound", json!(degree_bound));
            Ok(r)
        }
    }
}

pub fn ce_check_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    algebra: &str,
    action: &str,
    cochain: &str,
) -> CmdResult {
    let g = resolve_lie(session, algebra)?;
    let act = resolve_action(session, action)?;
    // the named algebra must be the one the action is a representation of
    if act.algebra().dim() != g.dim() {
        return fail(format!(
            "action '{action}' represents a {}-dimensional algebra, '{algebra}' has dimension {}",
            act.algebra().dim(),
            g.dim()
        ));
    }
    for i in 0..g.dim() {
        for j in i + 1..g.dim() {
            if act.algebra().bracket(i, j) != g.bracket(i, j) {
                return fail(format!(
                    "action '{action}' is not a representation of '{algebra}': brackets differ at (e{}, e{})",
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    let cedef = resolve_ce(session, cochain)?;
    let c = build_cochain(session, cedef, g.dim())?;
    let d = ce_differential(act, &c);
    let is_cocycle = d.is_zero();
    // polyvector-valued cochains also report the d_pi side of the bicomplex
    let mut r = Report::new(
        argv,
        if is_cocycle { "ok" } else { "not-cocycle" },
        if is_cocycle { 0 } else { 2 },
    );
    r.insert("is_cocycle", json!(is_cocycle));
    r.insert("differential", json!(d.to_string()));
    r.insert("degree", json!(c.degree()));
    Ok(r)
}

fn build_cochain(session: &SessionFile, def: &CeDef, m: usize) -> Result<CECochain, CliError> {
    let dim = session.dim;
    // value kind from the first entry
    let shape = match def.entries.first() {
        None => CEShape::Field { dim, grade: 1 },
        Some((_, Value::Poly(_))) => CEShape::Series { dim, order: 0 },
        Some((_, Value::Mvf(v))) => CEShape::Field {
            dim,
            grade: v.grade(),
        },
        Some((_, Value::Op(o))) => CEShape::Op {
            dim,
            arity: o.arity(),
        },
    };
    let mut c = CECochain::zero(m, def.degree, shape);
    for (tuple, v) in &def.entries {
        if tuple.iter().any(|&i| i >= m) {
            return fail(format!(
                "CE key uses e{} but the algebra has dimension {m}",
                tuple.iter().max().unwrap() + 1
            ));
        }
        let value = match (shape, v) {
            (CEShape::Series { .. }, Value::Poly(p)) => {
                CEValue::Series(FormalFunction::classical(p.clone(), 0))
            }
            (CEShape::Field { grade, .. }, Value::Mvf(f)) if f.grade() == grade => {
                CEValue::Field(f.clone())
            }
            (CEShape::Op { arity, .. }, Value::Op(o)) if o.arity() == arity => {
                CEValue::Op(o.clone())
            }
            _ => return fail("CE cochain values must all have one kind and shape"),
        };
        c.set(tuple.clone(), value);
    }
    Ok(c)
}

pub fn gauge_cmd(
    session: &SessionFile,
    argv: Vec<String>,
    star: &str,
    terms: &[String],
) -> CmdResult {
    let s = resolve_star(session, star)?;
    let t: Vec<PolyDiffOp> = terms
        .iter()
        .map(|a| resolve_op(session, a, Some(1)))
        .collect::<Result<_, _>>()?;
    let gauged = gauge_transform(s, &t)?;
    let reports = verify_mc(&gauged, gauged.order());
    let (arr, all_zero) = defect_json(&reports);
    let mut out_terms = Map::new();
    for k in 1..=gauged.order() {
        out_terms.insert(format!("B{k}"), json!(gauged.bk(k).to_string()));
    }
    let mut r = Report::new(
        argv,
        if all_zero { "ok" } else { "mc-defect" },
        if all_zero { 0 } else { 2 },
    );
    r.insert("terms", Json::Object(out_terms));
    r.insert("orders", arr);
    r.insert("all_zero", json!(all_zero));
    Ok(r)
}
