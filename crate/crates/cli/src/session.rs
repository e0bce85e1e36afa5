//! Session files: named definitions over one fixed ambient dimension.
//!
//! ```text
//! dim 2
//! poly f = 3/2*x1^2*x2 - x2
//! mvf pi = x2*(d1^d2) + (d2^d3)
//! op B2 = 1/8*(d[1,1]|d[2,2]) - 1/8*(d[1,2]|d[1,2])
//! lie g = { [e1,e2] = e2 }          # or: lie g = abelian(2)
//! action phi0 = g { e1 -> x1*d1 - x2*d2, e2 -> d2 }
//! star S = moyal(pi, order=4)       # or: star S = { B1 = ..., B2 = ... }
//! ce c = { e1 -> d[1], e2 -> d[2] } # keys e1 or (e1,e2); kinds must agree
//! ```
//!
//! In `action` the algebra name before the brace may be omitted when the
//! session defines exactly one Lie algebra. Names are unique; coordinates
//! `x1..xn`, basis fields `d1..dn` and Lie basis elements `e1..em` are
//! reserved. The canonical serialization reparses to the same session.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use starlift_core::hochschild::PolyDiffOp;
use starlift_core::liealg::{Action, LieAlgebra};
use starlift_core::multivector::PolyVectorField;
use starlift_core::poly::Polynomial;
use starlift_core::rat::{self, Rat};
use starlift_core::star::StarProduct;

use crate::lexer::{tokenize, Pos, Tok};
use crate::parser::{err, ExprParser, ParseError, Value};

/// A raw CE cochain: entries are kept as parsed values and assembled
/// against a concrete algebra at command time.
#[derive(Debug, Clone)]
pub struct CeDef {
    pub degree: usize,
    pub entries: Vec<(Vec<usize>, Value)>,
}

#[derive(Debug, Clone)]
pub enum Defined {
    Poly(Polynomial),
    Mvf(PolyVectorField),
    Op(PolyDiffOp),
    Lie(LieAlgebra),
    Action { algebra_name: String, action: Action },
    Star(StarProduct),
    Ce(CeDef),
}

impl Defined {
    pub fn kind(&self) -> &'static str {
        match self {
            Defined::Poly(_) => "polynomial",
            Defined::Mvf(_) => "polyvector field",
            Defined::Op(_) => "operator",
            Defined::Lie(_) => "Lie algebra",
            Defined::Action { .. } => "action",
            Defined::Star(_) => "star product",
            Defined::Ce(_) => "CE cochain",
        }
    }
}

#[derive(Debug)]
pub struct SessionFile {
    pub dim: usize,
    pub defs: BTreeMap<String, Defined>,
    /// definition order, for canonical serialization
    pub order: Vec<String>,
}

fn reserved(name: &str) -> bool {
    if name == "d" || name == "dim" || name == "abelian" || name == "moyal" {
        return true;
    }
    for prefix in ['x', 'd', 'e'] {
        if let Some(rest) = name.strip_prefix(prefix) {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
                return true;
            }
        }
    }
    false
}

/// Parses `e<k>` (1-based) out of an identifier.
fn basis_index(name: &str, pos: Pos) -> Result<usize, ParseError> {
    if let Some(rest) = name.strip_prefix('e') {
        if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit()) {
            let k: usize = rest.parse().unwrap();
            if k >= 1 {
                return Ok(k - 1);
            }
        }
    }
    err(pos, format!("expected a basis element 'e<k>', found '{name}'"))
}

pub fn parse_session(text: &str) -> Result<SessionFile, ParseError> {
    let toks = tokenize(text).map_err(|e| ParseError {
        pos: e.pos,
        message: e.message,
    })?;
    let mut session = SessionFile {
        dim: 0,
        defs: BTreeMap::new(),
        order: Vec::new(),
    };
    let mut idx = 0;
    let mut saw_dim = false;
    while idx < toks.len() {
        // skip blank statements
        if toks[idx].0 == Tok::Newline {
            idx += 1;
            continue;
        }
        // slice out one statement (up to the next top-level newline)
        let start = idx;
        while idx < toks.len() && toks[idx].0 != Tok::Newline {
            idx += 1;
        }
        let stmt = &toks[start..idx];
        idx += 1; // consume the newline
        parse_statement(stmt, &mut session, &mut saw_dim)?;
    }
    if !saw_dim {
        return err(
            Pos { line: 1, col: 1 },
            "session must declare 'dim <n>' before any definition",
        );
    }
    Ok(session)
}

fn parse_statement(
    stmt: &[(Tok, Pos)],
    session: &mut SessionFile,
    saw_dim: &mut bool,
) -> Result<(), ParseError> {
    let (head, head_pos) = match &stmt[0] {
        (Tok::Ident(s), p) => (s.as_str(), *p),
        (t, p) => return err(*p, format!("expected a declaration keyword, found {t}")),
    };
    if head == "dim" {
        if *saw_dim {
            return err(head_pos, "duplicate 'dim' declaration");
        }
        match stmt.get(1) {
            Some((Tok::Int(n), _)) if *n >= 1 && stmt.len() == 2 => {
                session.dim = *n as usize;
                *saw_dim = true;
                Ok(())
            }
            _ => err(head_pos, "expected 'dim <positive integer>'"),
        }
    } else {
        if !*saw_dim {
            return err(head_pos, "'dim <n>' must come first");
        }
        let (name, name_pos) = match stmt.get(1) {
            Some((Tok::Ident(s), p)) => (s.clone(), *p),
            Some((t, p)) => return err(*p, format!("expected a name, found {t}")),
            None => return err(head_pos, "expected a name"),
        };
        if reserved(&name) {
            return err(name_pos, format!("'{name}' is a reserved name"));
        }
        if session.defs.contains_key(&name) {
            return err(name_pos, format!("name '{name}' is already defined"));
        }
        match stmt.get(2) {
            Some((Tok::Eq, _)) => {}
            Some((t, p)) => return err(*p, format!("expected '=', found {t}")),
            None => return err(name_pos, "expected '='"),
        }
        let body = &stmt[3..];
        let defined = match head {
            "poly" => {
                let v = parse_value(body, session)?;
                Defined::Poly(v.into_poly(session.dim, body_pos(body, name_pos))?)
            }
            "mvf" => {
                let v = parse_value(body, session)?;
                Defined::Mvf(v.into_mvf(session.dim, None, body_pos(body, name_pos))?)
            }
            "op" => {
                let v = parse_value(body, session)?;
                Defined::Op(v.into_op(session.dim, None, body_pos(body, name_pos))?)
            }
            "lie" => Defined::Lie(parse_lie(body, name_pos)?),
            "action" => parse_action(body, session, name_pos)?,
            "star" => Defined::Star(parse_star(body, session, name_pos)?),
            "ce" => Defined::Ce(parse_ce(body, session, name_pos)?),
            other => return err(head_pos, format!("unknown declaration '{other}'")),
        };
        session.defs.insert(name.clone(), defined);
        session.order.push(name);
        Ok(())
    }
}

fn body_pos(body: &[(Tok, Pos)], fallback: Pos) -> Pos {
    body.first().map(|(_, p)| *p).unwrap_or(fallback)
}

fn parse_value(body: &[(Tok, Pos)], session: &SessionFile) -> Result<Value, ParseError> {
    let mut p = ExprParser::new(body, session.dim, &session.defs);
    let v = p.expr(0)?;
    if !p.at_end() {
        return err(p.pos(), "trailing input after expression");
    }
    Ok(v)
}

/// `{ [e1,e2] = e2 - 2*e1, ... }` or `abelian(m)`.
fn parse_lie(body: &[(Tok, Pos)], pos: Pos) -> Result<LieAlgebra, ParseError> {
    match body.first() {
        Some((Tok::Ident(kw), p)) if kw == "abelian" => {
            // abelian(m)
            if let (
                Some((Tok::LParen, _)),
                Some((Tok::Int(m), _)),
                Some((Tok::RParen, _)),
                None,
            ) = (body.get(1), body.get(2), body.get(3), body.get(4))
            {
                Ok(LieAlgebra::abelian(*m as usize))
            } else {
                err(*p, "expected 'abelian(<dim>)'")
            }
        }
        Some((Tok::LBrace, _)) => {
            let inner = brace_body(body, pos)?;
            let mut raw: Vec<((usize, usize), Vec<(usize, Rat)>, Pos)> = Vec::new();
            let mut max_index = 0usize;
            for entry in split_top(inner, Tok::Comma) {
                if entry.is_empty() {
                    continue;
                }
                let epos = entry[0].1;
                // [eI, eJ] = lincomb
                let mut k = 0;
                expect_tok(entry, &mut k, Tok::LBracket)?;
                let i = expect_basis(entry, &mut k)?;
                expect_tok(entry, &mut k, Tok::Comma)?;
                let j = expect_basis(entry, &mut k)?;
                expect_tok(entry, &mut k, Tok::RBracket)?;
                expect_tok(entry, &mut k, Tok::Eq)?;
                let combo = parse_lincomb(&entry[k..])?;
                max_index = max_index.max(i).max(j);
                for (b, _) in &combo {
                    max_index = max_index.max(*b);
                }
                if i >= j {
                    return err(epos, "bracket pairs must be written with i < j");
                }
                raw.push(((i, j), combo, epos));
            }
            let dim = max_index + 1;
            let mut pairs = Vec::new();
            for ((i, j), combo, _epos) in &raw {
                let mut coeffs = vec![rat::rint(0); dim];
                for (b, c) in combo {
                    coeffs[*b] = coeffs[*b].clone() + c.clone();
                }
                pairs.push(((*i, *j), coeffs));
            }
            LieAlgebra::new(dim, pairs).map_err(|e| ParseError {
                pos,
                message: e.to_string(),
            })
        }
        _ => err(pos, "expected '{ [ei,ej] = ... }' or 'abelian(<dim>)'"),
    }
}

fn expect_tok(toks: &[(Tok, Pos)], k: &mut usize, want: Tok) -> Result<Pos, ParseError> {
    match toks.get(*k) {
        Some((t, p)) if *t == want => {
            *k += 1;
            Ok(*p)
        }
        Some((t, p)) => err(*p, format!("expected {want}, found {t}")),
        None => err(
            toks.last().map(|(_, p)| *p).unwrap_or(Pos { line: 0, col: 0 }),
            format!("expected {want}"),
        ),
    }
}

fn expect_basis(toks: &[(Tok, Pos)], k: &mut usize) -> Result<usize, ParseError> {
    match toks.get(*k) {
        Some((Tok::Ident(s), p)) => {
            let i = basis_index(s, *p)?;
            *k += 1;
            Ok(i)
        }
        Some((t, p)) => err(*p, format!("expected a basis element, found {t}")),
        None => err(Pos { line: 0, col: 0 }, "expected a basis element"),
    }
}

/// `2*e1 - 3/2*e3 + e2` or `0`.
fn parse_lincomb(toks: &[(Tok, Pos)]) -> Result<Vec<(usize, Rat)>, ParseError> {
    let mut out = Vec::new();
    let mut k = 0;
    let mut sign = rat::rint(1);
    let mut expect_term = true;
    while k < toks.len() {
        match &toks[k] {
            (Tok::Plus, _) if !expect_term => {
                sign = rat::rint(1);
                expect_term = true;
                k += 1;
            }
            (Tok::Minus, _) => {
                sign = if expect_term {
                    -sign.clone()
                } else {
                    rat::rint(-1)
                };
                expect_term = true;
                k += 1;
            }
            (Tok::Int(n), p) => {
                if !expect_term {
                    return err(*p, "expected '+' or '-'");
                }
                let mut coeff = rat::rint(*n as i64);
                k += 1;
                if let Some((Tok::Slash, _)) = toks.get(k) {
                    match toks.get(k + 1) {
                        Some((Tok::Int(q), _)) if *q != 0 => {
                            coeff = coeff / rat::rint(*q as i64);
                            k += 2;
                        }
                        _ => return err(*p, "bad rational coefficient"),
                    }
                }
                if coeff.numer() == &0.into() && toks.get(k).is_none() {
                    // bare zero
                    expect_term = false;
                    continue;
                }
                expect_tok(toks, &mut k, Tok::Star)?;
                let b = expect_basis(toks, &mut k)?;
                out.push((b, sign.clone() * coeff));
                expect_term = false;
            }
            (Tok::Ident(s), p) => {
                if !expect_term {
                    return err(*p, "expected '+' or '-'");
                }
                let b = basis_index(s, *p)?;
                out.push((b, sign.clone()));
                k += 1;
                expect_term = false;
            }
            (t, p) => return err(*p, format!("unexpected {t} in bracket value")),
        }
    }
    Ok(out)
}

/// `[g] { e1 -> expr, ... }` - the algebra name may be omitted when the
/// session defines exactly one Lie algebra.
fn parse_action(
    body: &[(Tok, Pos)],
    session: &SessionFile,
    pos: Pos,
) -> Result<Defined, ParseError> {
    let (algebra_name, rest) = match body.first() {
        Some((Tok::Ident(name), p)) => {
            match session.defs.get(name) {
                Some(Defined::Lie(_)) => (name.clone(), &body[1..]),
                Some(other) => {
                    return err(*p, format!("'{name}' is a {}, not a Lie algebra", other.kind()))
                }
                None => return err(*p, format!("unknown Lie algebra '{name}'")),
            }
        }
        Some((Tok::LBrace, p)) => {
            let lies: Vec<&String> = session
                .order
                .iter()
                .filter(|n| matches!(session.defs.get(*n), Some(Defined::Lie(_))))
                .collect();
            match lies.as_slice() {
                [only] => ((*only).clone(), body),
                [] => return err(*p, "no Lie algebra defined; declare one or name it here"),
                _ => {
                    return err(
                        *p,
                        "several Lie algebras defined; name one: action a = <g> { ... }",
                    )
                }
            }
        }
        _ => return err(pos, "expected '{' or a Lie algebra name"),
    };
    let Some(Defined::Lie(algebra)) = session.defs.get(&algebra_name) else {
        unreachable!()
    };
    let inner = brace_body(rest, pos)?;
    let mut images: BTreeMap<usize, PolyVectorField> = BTreeMap::new();
    for entry in split_top(inner, Tok::Comma) {
        if entry.is_empty() {
            continue;
        }
        let mut k = 0;
        let i = expect_basis(entry, &mut k)?;
        let epos = expect_tok(entry, &mut k, Tok::Arrow)?;
        let v = {
            let mut p = ExprParser::new(&entry[k..], session.dim, &session.defs);
            let v = p.expr(0)?;
            if !p.at_end() {
                return err(p.pos(), "trailing input in action image");
            }
            v
        };
        images.insert(i, v.into_mvf(session.dim, Some(1), epos)?);
    }
    let m = algebra.dim();
    let mut ordered = Vec::with_capacity(m);
    for i in 0..m {
        ordered.push(
            images
                .remove(&i)
                .unwrap_or_else(|| PolyVectorField::zero(session.dim, 1)),
        );
    }
    if let Some((&extra, _)) = images.iter().next() {
        return err(
            pos,
            format!("action image e{} exceeds the algebra dimension {m}", extra + 1),
        );
    }
    let action = Action::new(algebra.clone(), ordered).map_err(|e| ParseError {
        pos,
        message: e.to_string(),
    })?;
    Ok(Defined::Action {
        algebra_name,
        action,
    })
}

/// `moyal(pi, order=N)` or `{ B1 = expr, B2 = expr, ... }`.
fn parse_star(
    body: &[(Tok, Pos)],
    session: &SessionFile,
    pos: Pos,
) -> Result<StarProduct, ParseError> {
    match body.first() {
        Some((Tok::Ident(kw), p)) if kw == "moyal" => {
            let mut k = 1;
            expect_tok(body, &mut k, Tok::LParen)?;
            let (pi_name, ppos) = match body.get(k) {
                Some((Tok::Ident(s), pp)) => (s.clone(), *pp),
                _ => return err(*p, "expected a bivector name"),
            };
            k += 1;
            expect_tok(body, &mut k, Tok::Comma)?;
            match body.get(k) {
                Some((Tok::Ident(s), _)) if s == "order" => k += 1,
                _ => return err(*p, "expected 'order=<n>'"),
            }
            expect_tok(body, &mut k, Tok::Eq)?;
            let n = match body.get(k) {
                Some((Tok::Int(n), _)) => *n as usize,
                _ => return err(*p, "expected 'order=<n>'"),
            };
            k += 1;
            expect_tok(body, &mut k, Tok::RParen)?;
            let field = match session.defs.get(&pi_name) {
                Some(Defined::Mvf(v)) => v.clone(),
                Some(other) => {
                    return err(ppos, format!("'{pi_name}' is a {}, not a bivector", other.kind()))
                }
                None => return err(ppos, format!("unknown name '{pi_name}'")),
            };
            let pi = starlift_core::multivector::PoissonStructure::new(field).map_err(|e| {
                ParseError {
                    pos: ppos,
                    message: e.to_string(),
                }
            })?;
            starlift_core::star::moyal_build(&pi, n).map_err(|e| ParseError {
                pos: ppos,
                message: e.to_string(),
            })
        }
        Some((Tok::LBrace, _)) => {
            let inner = brace_body(body, pos)?;
            let mut parts: BTreeMap<usize, PolyDiffOp> = BTreeMap::new();
            for entry in split_top(inner, Tok::Comma) {
                if entry.is_empty() {
                    continue;
                }
                let (bname, bpos) = match &entry[0] {
                    (Tok::Ident(s), p) => (s.clone(), *p),
                    (t, p) => return err(*p, format!("expected 'B<k>', found {t}")),
                };
                let k_index: usize = match bname.strip_prefix('B') {
                    Some(digits) if !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit()) => {
                        digits.parse().unwrap()
                    }
                    _ => return err(bpos, format!("expected 'B<k>', found '{bname}'")),
                };
                if k_index == 0 {
                    return err(bpos, "B0 is the multiplication and cannot be overridden");
                }
                let mut k = 1;
                expect_tok(entry, &mut k, Tok::Eq)?;
                let mut p = ExprParser::new(&entry[k..], session.dim, &session.defs);
                let v = p.expr(0)?;
                if !p.at_end() {
                    return err(p.pos(), "trailing input in star term");
                }
                parts.insert(k_index, v.into_op(session.dim, Some(2), bpos)?);
            }
            let n = parts.keys().max().copied().unwrap_or(0);
            let mut b = Vec::with_capacity(n);
            for k in 1..=n {
                b.push(
                    parts
                        .remove(&k)
                        .unwrap_or_else(|| PolyDiffOp::zero(session.dim, 2)),
                );
            }
            StarProduct::new(session.dim, b).map_err(|e| ParseError {
                pos,
                message: e.to_string(),
            })
        }
        _ => err(pos, "expected 'moyal(<pi>, order=<n>)' or '{ B1 = ..., ... }'"),
    }
}

/// `{ e1 -> expr, (e1,e2) -> expr, ... }`.
fn parse_ce(body: &[(Tok, Pos)], session: &SessionFile, pos: Pos) -> Result<CeDef, ParseError> {
    let inner = brace_body(body, pos)?;
    let mut entries: Vec<(Vec<usize>, Value)> = Vec::new();
    let mut degree: Option<usize> = None;
    for entry in split_top(inner, Tok::Comma) {
        if entry.is_empty() {
            continue;
        }
        let mut k = 0;
        let tuple: Vec<usize> = match &entry[0] {
            (Tok::Ident(_), _) => {
                let i = expect_basis(entry, &mut k)?;
                vec![i]
            }
            (Tok::LParen, _) => {
                k += 1;
                let mut t = Vec::new();
                loop {
                    match entry.get(k) {
                        Some((Tok::RParen, _)) => {
                            k += 1;
                            break;
                        }
                        Some((Tok::Comma, _)) => {
                            k += 1;
                        }
                        Some((Tok::Ident(_), _)) => {
                            t.push(expect_basis(entry, &mut k)?);
                        }
                        Some((t2, p)) => return err(*p, format!("unexpected {t2} in CE key")),
                        None => return err(pos, "unterminated CE key"),
                    }
                }
                t
            }
            (t, p) => return err(*p, format!("expected a CE key, found {t}")),
        };
        let kpos = expect_tok(entry, &mut k, Tok::Arrow)?;
        if tuple.windows(2).any(|w| w[0] >= w[1]) {
            return err(kpos, "CE keys must list basis elements in increasing order");
        }
        match degree {
            None => degree = Some(tuple.len()),
            Some(d) if d == tuple.len() => {}
            Some(d) => {
                return err(
                    kpos,
                    format!("CE keys must have one degree; saw {d} and {}", tuple.len()),
                )
            }
        }
        let mut p = ExprParser::new(&entry[k..], session.dim, &session.defs);
        let v = p.expr(0)?;
        if !p.at_end() {
            return err(p.pos(), "trailing input in CE value");
        }
        entries.push((tuple, v));
    }
    Ok(CeDef {
        degree: degree.unwrap_or(1),
        entries,
    })
}

/// The tokens between the outermost braces, which must wrap the whole body.
fn brace_body<'a>(body: &'a [(Tok, Pos)], pos: Pos) -> Result<&'a [(Tok, Pos)], ParseError> {
    match (body.first(), body.last()) {
        (Some((Tok::LBrace, _)), Some((Tok::RBrace, _))) if body.len() >= 2 => {
            Ok(&body[1..body.len() - 1])
        }
        _ => err(pos, "expected a braced '{ ... }' body"),
    }
}

/// Splits at top-level occurrences of `sep` (depth computed over all
/// bracket kinds).
fn split_top(toks: &[(Tok, Pos)], sep: Tok) -> Vec<&[(Tok, Pos)]> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    for (i, (t, _)) in toks.iter().enumerate() {
        match t {
            Tok::LParen | Tok::LBrace | Tok::LBracket => depth += 1,
            Tok::RParen | Tok::RBrace | Tok::RBracket => depth = depth.saturating_sub(1),
            t2 if *t2 == sep && depth == 0 => {
                out.push(&toks[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&toks[start..]);
    out
}

fn lincomb_display(coeffs: &[Rat]) -> String {
    let mut parts = Vec::new();
    for (k, c) in coeffs.iter().enumerate() {
        if c == &rat::rint(0) {
            continue;
        }
        if c == &rat::rint(1) {
            parts.push(format!("e{}", k + 1));
        } else if c == &rat::rint(-1) {
            parts.push(format!("-e{}", k + 1));
        } else {
            parts.push(format!("{}*e{}", rat::display(c), k + 1));
        }
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl SessionFile {
    /// Canonical text form; parsing it back reproduces the session.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dim {}", self.dim);
        for name in &self.order {
            match &self.defs[name] {
                Defined::Poly(p) => {
                    let _ = writeln!(out, "poly {name} = {p}");
                }
                Defined::Mvf(v) => {
                    let _ = writeln!(out, "mvf {name} = {v}");
                }
                Defined::Op(o) => {
                    let _ = writeln!(out, "op {name} = {o}");
                }
                Defined::Lie(g) => {
                    if g.is_abelian() {
                        let _ = writeln!(out, "lie {name} = abelian({})", g.dim());
                    } else {
                        let mut pairs = Vec::new();
                        for i in 0..g.dim() {
                            for j in i + 1..g.dim() {
                                let coeffs = g.bracket(i, j);
                                if coeffs.iter().any(|c| c != &rat::rint(0)) {
                                    pairs.push(format!(
                                        "[e{},e{}] = {}",
                                        i + 1,
                                        j + 1,
                                        lincomb_display(&coeffs)
                                    ));
                                }
                            }
                        }
                        let _ = writeln!(out, "lie {name} = {{ {} }}", pairs.join(", "));
                    }
                }
                Defined::Action {
                    algebra_name,
                    action,
                } => {
                    let entries: Vec<String> = (0..action.algebra().dim())
                        .map(|i| format!("e{} -> {}", i + 1, action.image(i)))
                        .collect();
                    let _ = writeln!(
                        out,
                        "action {name} = {algebra_name} {{ {} }}",
                        entries.join(", ")
                    );
                }
                Defined::Star(s) => {
                    let entries: Vec<String> = (1..=s.order())
                        .map(|k| format!("B{k} = {}", s.bk(k)))
                        .collect();
                    let _ = writeln!(out, "star {name} = {{ {} }}", entries.join(", "));
                }
                Defined::Ce(c) => {
                    let entries: Vec<String> = c
                        .entries
                        .iter()
                        .map(|(t, v)| {
                            let names: Vec<String> =
                                t.iter().map(|i| format!("e{}", i + 1)).collect();
                            let key = if t.len() == 1 {
                                names[0].clone()
                            } else {
                                format!("({})", names.join(","))
                            };
                            let vs = match v {
                                Value::Poly(p) => p.to_string(),
                                Value::Mvf(m) => m.to_string(),
                                Value::Op(o) => o.to_string(),
                            };
                            format!("{key} -> {vs}")
                        })
                        .collect();
                    let _ = writeln!(out, "ce {name} = {{ {} }}", entries.join(", "));
                }
            }
        }
        out
    }
}
