//! The `.flag` input format.
//!
//! ```text
//! [frame]
//! theta Z1 Z2 lam
//! [coordinates]
//! a
//! [constants]
//! x y z
//! [relations]
//! x^2 + y*z + 1
//! [differentials]
//! d theta = Z1 ^ Z2
//! d a = a * lam
//! ...
//! [pseudoflag]
//! contact = theta
//! ```
//!
//! Names are collected from `[frame]`, `[coordinates]` and `[constants]`
//! before any expression is read, so sections may appear in any order.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use flagcalc_core::catalog::{CONTACT, FIBER, SCALE, Z1, Z2};
use flagcalc_core::flag::{ConjugationSpec, PseudoFlagStructure};
use flagcalc_core::matrix::BorelElement;
use flagcalc_core::{Form, FrameBuilder, FrameSpace, Scalar, Symbol};

use crate::error::{InputError, Pos};
use crate::syntax::{lex, parse_expr, Expr, Parser, Tok};
use crate::CliError;

const SECTIONS: [&str; 8] = [
    "frame",
    "coordinates",
    "constants",
    "relations",
    "differentials",
    "pseudoflag",
    "conjugation",
    "gauge",
];

const PSEUDOFLAG_KEYS: [(&str, &str); 5] = [
    ("contact", CONTACT),
    ("z1", Z1),
    ("z2", Z2),
    ("fiber", FIBER),
    ("scale", SCALE),
];

/// Gauge keys with their short aliases.
const GAUGE_KEYS: [(&str, &str); 5] = [
    ("alpha", "a"),
    ("beta", "b"),
    ("gamma", "c"),
    ("delta", "d"),
    ("epsilon", "e"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Basis,
    Coordinate,
    Constant,
}

/// A `name = expression` entry.
#[derive(Clone, Debug)]
pub struct Binding {
    pub name: String,
    pub pos: Pos,
    pub expr: Expr,
}

/// Parsed input, names resolved but nothing evaluated yet.
#[derive(Clone, Debug, Default)]
pub struct InputDocument {
    pub basis: Vec<String>,
    pub coordinates: Vec<String>,
    pub constants: Vec<String>,
    pub relations: Vec<Expr>,
    pub differentials: Vec<Binding>,
    pub pseudoflag: Option<BTreeMap<String, (String, Pos)>>,
    pub conjugation: Option<Vec<Binding>>,
    pub gauge: Option<Vec<Binding>>,
    kinds: HashMap<String, Kind>,
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn strip_comment(s: &str) -> &str {
    s.split('#').next().unwrap_or("")
}

fn name_list(line: &Line<'_>) -> Result<Vec<(String, Pos)>, InputError> {
    let toks = lex(line.text, line.no, 1)?;
    let mut out = Vec::new();
    let mut p = Parser::new(&toks);
    loop {
        match p.peek() {
            Tok::End => return Ok(out),
            Tok::Ident(_) => out.push(p.ident()?),
            _ => return Err(p.error(&["a name"])),
        }
    }
}

/// `NAME = EXPR`, or `d NAME = EXPR` when `with_d` is set.
fn binding(line: &Line<'_>, with_d: bool) -> Result<Binding, InputError> {
    let toks = lex(line.text, line.no, 1)?;
    let mut p = Parser::new(&toks);
    if with_d {
        match p.peek() {
            Tok::Ident(s) if s == "d" => {
                p.bump();
            }
            _ => return Err(p.error(&["`d`"])),
        }
    }
    let (name, pos) = p.ident()?;
    p.expect(Tok::Eq, "`=`")?;
    let expr = p.expr()?;
    p.end()?;
    Ok(Binding { name, pos, expr })
}

/// `KEY = NAME`.
fn key_name(line: &Line<'_>) -> Result<(String, Pos, String, Pos), InputError> {
    let toks = lex(line.text, line.no, 1)?;
    let mut p = Parser::new(&toks);
    let (key, kpos) = p.ident()?;
    p.expect(Tok::Eq, "`=`")?;
    let (name, npos) = p.ident()?;
    p.end()?;
    Ok((key, kpos, name, npos))
}

/// `EXPR` or `LHS = RHS`, read as `LHS - RHS = 0`.
fn relation(line: &Line<'_>) -> Result<Expr, InputError> {
    let toks = lex(line.text, line.no, 1)?;
    let mut p = Parser::new(&toks);
    let lhs = p.expr()?;
    if *p.peek() == Tok::Eq {
        p.bump();
        let rhs = p.expr()?;
        p.end()?;
        return Ok(Expr::Sub(Box::new(lhs), Box::new(rhs)));
    }
    p.end()?;
    Ok(lhs)
}

pub fn parse(text: &str) -> Result<InputDocument, InputError> {
    let mut sections: Vec<(String, Pos, Vec<Line<'_>>)> = Vec::new();
    let mut seen = HashSet::new();
    for (k, raw) in text.lines().enumerate() {
        let no = k + 1;
        let body = strip_comment(raw);
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = body.len() - body.trim_start().len() + 1;
        let pos = Pos { line: no, col };
        if let Some(rest) = trimmed.strip_prefix('[') {
            let name = rest.strip_suffix(']').map(str::trim).ok_or_else(|| {
                InputError::parse(Pos { line: no, col: col + trimmed.len() }, &["`]`"], "end of line")
            })?;
            if !SECTIONS.contains(&name) {
                let expected: Vec<String> = SECTIONS.iter().map(|s| format!("[{s}]")).collect();
                let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
                return Err(InputError::parse(pos, &expected, format!("[{name}]")));
            }
            if !seen.insert(name.to_string()) {
                return Err(InputError::DuplicateDeclaration {
                    pos,
                    name: format!("[{name}]"),
                });
            }
            sections.push((name.to_string(), pos, Vec::new()));
            continue;
        }
        match sections.last_mut() {
            Some((_, _, lines)) => lines.push(Line { no, text: raw }),
            None => return Err(InputError::parse(pos, &["a section header"], format!("`{trimmed}`"))),
        }
    }

    let mut doc = InputDocument::default();
    let get = |name: &str| sections.iter().find(|(n, _, _)| n == name);

    // Declarations first.
    for (section, kind) in [
        ("frame", Kind::Basis),
        ("coordinates", Kind::Coordinate),
        ("constants", Kind::Constant),
    ] {
        let Some((_, _, lines)) = get(section) else { continue };
        for line in lines {
            for (name, pos) in name_list(line)? {
                doc.declare(&name, pos, kind)?;
            }
        }
    }
    if doc.basis.is_empty() {
        return Err(InputError::Missing("no [frame] section with basis forms".into()));
    }

    if let Some((_, _, lines)) = get("relations") {
        for line in lines {
            let e = relation(line)?;
            doc.check_names(&e)?;
            doc.relations.push(e);
        }
    }
    if let Some((_, _, lines)) = get("differentials") {
        let mut seen = HashSet::new();
        for line in lines {
            let b = binding(line, true)?;
            match doc.kinds.get(&b.name) {
                Some(Kind::Basis | Kind::Coordinate) => {}
                Some(Kind::Constant) => {
                    return Err(InputError::invalid(b.pos, format!("`{}` is a constant; d of a constant is zero", b.name)))
                }
                None => {
                    return Err(InputError::UndeclaredName {
                        pos: b.pos,
                        name: b.name,
                    })
                }
            }
            if !seen.insert(b.name.clone()) {
                return Err(InputError::DuplicateDeclaration { pos: b.pos, name: format!("d {}", b.name) });
            }
            doc.check_names(&b.expr)?;
            doc.differentials.push(b);
        }
    }
    for name in doc.basis.iter().chain(&doc.coordinates) {
        if !doc.differentials.iter().any(|b| &b.name == name) {
            return Err(InputError::Missing(format!("no differential given for `{name}`")));
        }
    }
    if let Some((_, _, lines)) = get("pseudoflag") {
        let mut map = BTreeMap::new();
        for line in lines {
            let (key, kpos, name, npos) = key_name(line)?;
            if !PSEUDOFLAG_KEYS.iter().any(|(k, _)| *k == key) {
                let expected: Vec<String> = PSEUDOFLAG_KEYS.iter().map(|(k, _)| format!("`{k}`")).collect();
                let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
                return Err(InputError::parse(kpos, &expected, format!("`{key}`")));
            }
            let wanted = if key == "scale" { Kind::Coordinate } else { Kind::Basis };
            match doc.kinds.get(&name) {
                Some(k) if *k == wanted => {}
                Some(_) => {
                    let what = if wanted == Kind::Basis { "a basis form" } else { "a coordinate" };
                    return Err(InputError::invalid(npos, format!("`{name}` must be {what}")));
                }
                None => return Err(InputError::UndeclaredName { pos: npos, name }),
            }
            if map.insert(key.clone(), (name, npos)).is_some() {
                return Err(InputError::DuplicateDeclaration { pos: kpos, name: key });
            }
        }
        doc.pseudoflag = Some(map);
    }
    if let Some((_, _, lines)) = get("conjugation") {
        let mut out: Vec<Binding> = Vec::new();
        for line in lines {
            let b = binding(line, false)?;
            if !doc.kinds.contains_key(&b.name) {
                return Err(InputError::UndeclaredName { pos: b.pos, name: b.name });
            }
            if out.iter().any(|o| o.name == b.name) {
                return Err(InputError::DuplicateDeclaration { pos: b.pos, name: b.name });
            }
            doc.check_names(&b.expr)?;
            out.push(b);
        }
        doc.conjugation = Some(out);
    }
    if let Some((_, _, lines)) = get("gauge") {
        let mut out: Vec<Binding> = Vec::new();
        for line in lines {
            let mut b = binding(line, false)?;
            let Some((full, _)) = GAUGE_KEYS.iter().find(|(f, s)| *f == b.name || *s == b.name) else {
                let expected: Vec<String> = GAUGE_KEYS.iter().map(|(k, _)| format!("`{k}`")).collect();
                let expected: Vec<&str> = expected.iter().map(String::as_str).collect();
                return Err(InputError::parse(b.pos, &expected, format!("`{}`", b.name)));
            };
            b.name = full.to_string();
            if out.iter().any(|o| o.name == b.name) {
                return Err(InputError::DuplicateDeclaration { pos: b.pos, name: b.name });
            }
            doc.check_names(&b.expr)?;
            out.push(b);
        }
        doc.gauge = Some(out);
    }
    Ok(doc)
}

impl InputDocument {
    fn declare(&mut self, name: &str, pos: Pos, kind: Kind) -> Result<(), InputError> {
        if name == "i" {
            return Err(InputError::invalid(pos, "`i` is reserved for the imaginary unit"));
        }
        if name == "d" && kind == Kind::Basis {
            return Err(InputError::invalid(pos, "`d` is reserved for the exterior derivative"));
        }
        if self.kinds.insert(name.to_string(), kind).is_some() {
            return Err(InputError::DuplicateDeclaration {
                pos,
                name: name.to_string(),
            });
        }
        match kind {
            Kind::Basis => self.basis.push(name.to_string()),
            Kind::Coordinate => self.coordinates.push(name.to_string()),
            Kind::Constant => self.constants.push(name.to_string()),
        }
        Ok(())
    }

    fn check_names(&self, e: &Expr) -> Result<(), InputError> {
        let mut names = Vec::new();
        e.names(&mut names);
        for (name, pos) in names {
            if name != "i" && !self.kinds.contains_key(&name) {
                return Err(InputError::UndeclaredName { pos, name });
            }
        }
        Ok(())
    }

    /// Builds the frame. `checked` runs the `d² = 0` verification.
    pub fn frame(&self, checked: bool) -> Result<Arc<FrameSpace>, CliError> {
        let names: Vec<&str> = self.basis.iter().map(String::as_str).collect();
        let mut b = FrameBuilder::new(&names)?;
        let sk = b.skeleton().clone();
        for c in &self.constants {
            b.constant(c)?;
        }
        for e in &self.relations {
            let s = eval(e, &sk)?.into_scalar(e)?;
            b.relation(&s)?;
        }
        for bind in &self.differentials {
            let degree = if self.kinds[&bind.name] == Kind::Basis { 2 } else { 1 };
            let form = eval(&bind.expr, &sk)?.into_form(&sk, degree, bind.pos)?;
            if degree == 2 {
                b.d(&bind.name, form)?;
            } else {
                b.fiber(&bind.name, form)?;
            }
        }
        Ok(if checked { b.build()? } else { b.build_unchecked() })
    }

    pub fn pseudoflag(&self, frame: Arc<FrameSpace>) -> Result<PseudoFlagStructure, CliError> {
        let map = self
            .pseudoflag
            .as_ref()
            .ok_or_else(|| InputError::Missing("this command needs a [pseudoflag] section".into()))?;
        let pick = |key: &str| -> String {
            map.get(key).map(|(n, _)| n.clone()).unwrap_or_else(|| {
                let default = PSEUDOFLAG_KEYS.iter().find(|(k, _)| *k == key).expect("known key").1;
                default.to_string()
            })
        };
        Ok(PseudoFlagStructure::new(
            frame,
            &pick("contact"),
            &pick("z1"),
            &pick("z2"),
            &pick("fiber"),
            &pick("scale"),
        )?)
    }

    pub fn conjugation(&self, frame: &Arc<FrameSpace>) -> Result<ConjugationSpec, CliError> {
        let list = self
            .conjugation
            .as_ref()
            .ok_or_else(|| InputError::Missing("this command needs a [conjugation] section".into()))?;
        let mut spec = ConjugationSpec::new();
        for b in list {
            if self.kinds[&b.name] == Kind::Basis {
                spec = spec.form(&b.name, eval(&b.expr, frame)?.into_form(frame, 1, b.pos)?);
            } else {
                spec = spec.symbol(&b.name, eval(&b.expr, frame)?.into_scalar(&b.expr)?);
            }
        }
        Ok(spec)
    }

    /// The `[gauge]` element; unspecified entries default to the identity.
    /// Without a `[gauge]` section the fully symbolic element is used.
    pub fn gauge(&self, frame: &Arc<FrameSpace>) -> Result<BorelElement, CliError> {
        let Some(list) = &self.gauge else {
            return Ok(BorelElement::symbolic());
        };
        let mut h = BorelElement::identity();
        for b in list {
            let v = eval(&b.expr, frame)?.into_scalar(&b.expr)?;
            match b.name.as_str() {
                "alpha" => h.alpha = v,
                "beta" => h.beta = v,
                "gamma" => h.gamma = v,
                "delta" => h.delta = v,
                _ => h.epsilon = v,
            }
        }
        Ok(h)
    }
}

/// Result of evaluating an expression: a function or a form.
#[derive(Clone, Debug)]
pub enum Value {
    Scalar(Scalar),
    Form(Form),
}

impl Value {
    fn into_scalar(self, e: &Expr) -> Result<Scalar, CliError> {
        match self {
            Value::Scalar(s) => Ok(s),
            Value::Form(f) if f.degree() == 0 => Ok(f.as_scalar()?),
            Value::Form(f) => Err(InputError::invalid(first_pos(e), format!("expected a function, found a {}-form", f.degree())).into()),
        }
    }

    fn into_form(self, frame: &Arc<FrameSpace>, degree: usize, pos: Pos) -> Result<Form, CliError> {
        match self {
            Value::Scalar(s) if s.is_trivially_zero() => Ok(Form::zero(frame, degree)),
            Value::Form(f) if f.degree() == degree => Ok(f),
            Value::Form(f) if f.is_trivially_zero() => Ok(Form::zero(frame, degree)),
            Value::Form(f) => Err(InputError::invalid(pos, format!("expected a {degree}-form, found a {}-form", f.degree())).into()),
            Value::Scalar(_) => Err(InputError::invalid(pos, format!("expected a {degree}-form, found a function")).into()),
        }
    }

    fn as_form(&self, frame: &Arc<FrameSpace>) -> Form {
        match self {
            Value::Scalar(s) => Form::scalar(frame, s.clone()),
            Value::Form(f) => f.clone(),
        }
    }
}

fn first_pos(e: &Expr) -> Pos {
    let mut names = Vec::new();
    e.names(&mut names);
    match e {
        Expr::Mul(_, _, p) | Expr::Div(_, _, p) | Expr::Wedge(_, _, p) | Expr::Pow(_, _, p) => *p,
        _ => names.first().map(|(_, p)| *p).unwrap_or(Pos { line: 0, col: 0 }),
    }
}

/// Parses a decimal literal without going through a fixed-width integer.
fn integer(digits: &str) -> Scalar {
    let mut acc = Scalar::zero();
    let base = Scalar::from_int(1_000_000_000);
    let head = digits.len() % 9;
    let mut chunks = Vec::new();
    if head > 0 {
        chunks.push(&digits[..head]);
    }
    let mut rest = &digits[head..];
    while !rest.is_empty() {
        chunks.push(&rest[..9]);
        rest = &rest[9..];
    }
    for c in chunks {
        let v: i64 = c.parse().expect("decimal digits");
        acc = &(&acc * &base) + &Scalar::from_int(v);
    }
    acc
}

/// Evaluates `e` with basis names read as basis forms of `frame` and every
/// other name as a symbol.
pub fn eval(e: &Expr, frame: &Arc<FrameSpace>) -> Result<Value, CliError> {
    use Value::{Form as F, Scalar as S};
    Ok(match e {
        Expr::Int(d) => S(integer(d)),
        Expr::Name(n, _) if n == "i" => S(Scalar::i()),
        Expr::Name(n, _) => match frame.basis_form(n) {
            Ok(f) => F(f),
            Err(_) => S(Scalar::symbol(Symbol::new(n))),
        },
        Expr::Neg(a) => match eval(a, frame)? {
            S(s) => S(-s),
            F(f) => F(-f),
        },
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            let neg = matches!(e, Expr::Sub(..));
            match (eval(a, frame)?, eval(b, frame)?) {
                (S(x), S(y)) => S(if neg { &x - &y } else { &x + &y }),
                (x, y) => {
                    let (x, y) = (x.as_form(frame), y.as_form(frame));
                    if x.degree() != y.degree() && !x.is_trivially_zero() && !y.is_trivially_zero() {
                        return Err(InputError::invalid(
                            first_pos(b),
                            format!("cannot add a {}-form and a {}-form", x.degree(), y.degree()),
                        )
                        .into());
                    }
                    let (x, y) = align(x, y, frame);
                    F(if neg { x.try_sub(&y)? } else { x.try_add(&y)? })
                }
            }
        }
        Expr::Mul(a, b, p) => match (eval(a, frame)?, eval(b, frame)?) {
            (S(x), S(y)) => S(&x * &y),
            (S(x), F(f)) | (F(f), S(x)) => F(f.scale(&x)),
            (F(_), F(_)) => {
                return Err(InputError::invalid(*p, "`*` multiplies by functions; use `^` to wedge two forms").into())
            }
        },
        Expr::Div(a, b, p) => {
            let den = match eval(b, frame)? {
                S(s) => s,
                F(_) => return Err(InputError::invalid(*p, "cannot divide by a form").into()),
            };
            let inv = den.inv()?;
            match eval(a, frame)? {
                S(s) => S(&s * &inv),
                F(f) => F(f.scale(&inv)),
            }
        }
        Expr::Wedge(a, b, _) => {
            let (x, y) = (eval(a, frame)?, eval(b, frame)?);
            match (x, y) {
                (S(x), S(y)) => S(&x * &y),
                (x, y) => F(x.as_form(frame).try_wedge(&y.as_form(frame))?),
            }
        }
        Expr::Pow(a, k, p) => match eval(a, frame)? {
            S(s) => S(s.pow(*k)?),
            F(_) => return Err(InputError::invalid(*p, "powers apply to functions; use `^` between forms for the wedge").into()),
        },
    })
}

/// Lets a trivially zero form of the wrong degree take part in a sum.
fn align(x: Form, y: Form, frame: &Arc<FrameSpace>) -> (Form, Form) {
    if x.degree() == y.degree() {
        (x, y)
    } else if x.is_trivially_zero() {
        (Form::zero(frame, y.degree()), y)
    } else {
        let d = x.degree();
        (x, Form::zero(frame, d))
    }
}

/// Parses and evaluates a standalone scalar expression (e.g. `--volume`).
pub fn scalar_argument(text: &str, doc: &InputDocument, frame: &Arc<FrameSpace>) -> Result<Scalar, CliError> {
    let e = parse_expr(text, 1, 1)?;
    doc.check_names(&e)?;
    eval(&e, frame)?.into_scalar(&e)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SU2: &str = include_str!("../fixtures/su2.flag");

    #[test]
    fn parses_fixture() {
        let doc = parse(SU2).unwrap();
        assert_eq!(doc.basis, ["theta", "Z1", "Z2", "lam"]);
        assert_eq!(doc.coordinates, ["a"]);
        assert_eq!(doc.relations.len(), 1);
        let frame = doc.frame(true).unwrap();
        let dtheta = frame.d_of("theta").unwrap();
        assert_eq!(dtheta.to_string(), "Z1^Z2");
        doc.pseudoflag(frame).unwrap();
    }

    #[test]
    fn relation_rewrites_leading_term() {
        let doc = parse(SU2).unwrap();
        let frame = doc.frame(true).unwrap();
        let x2 = Scalar::var("x").pow(2).unwrap().reduce(frame.relations()).unwrap();
        assert_eq!(x2.to_string(), "-y*z - 1");
    }

    #[test]
    fn undeclared_and_duplicate_names() {
        let err = parse("[frame]\ne1 e2\n[differentials]\nd e1 = q*e1^e2\nd e2 = 0\n").unwrap_err();
        assert!(matches!(err, InputError::UndeclaredName { ref name, pos } if name == "q" && pos == Pos { line: 4, col: 8 }));
        let err = parse("[frame]\ne1 e1\n").unwrap_err();
        assert!(matches!(err, InputError::DuplicateDeclaration { .. }));
        let err = parse("[frame]\ne1\n[constants]\ne1\n").unwrap_err();
        assert!(matches!(err, InputError::DuplicateDeclaration { .. }));
        let err = parse("[frame]\ne1\n[frame]\ne2\n").unwrap_err();
        assert!(matches!(err, InputError::DuplicateDeclaration { .. }));
        let err = parse("[frame]\ne1\n[bogus]\n").unwrap_err();
        assert!(matches!(err, InputError::Parse { .. }));
        let err = parse("[frame]\ne1\n").unwrap_err();
        assert!(matches!(err, InputError::Missing(_)));
    }

    #[test]
    fn large_integer_literals() {
        let s = integer("123456789012345678901");
        let t = &(&Scalar::from_int(123456789012) * &Scalar::from_int(1_000_000_000)) + &Scalar::from_int(345678901);
        assert_eq!(s, t);
    }
}
