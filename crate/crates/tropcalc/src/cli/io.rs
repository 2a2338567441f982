//! JSON interchange: documents of named objects, rationals as strings.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::deltaforms::{DeltaForm, PsFunction};
use crate::linalg::lp::Constraint;
use crate::linalg::matrix::IntMat;
use crate::linalg::rat::{primitive_scale, Rat};
use crate::morphisms::AffineMap;
use crate::polyhedra::{AffineForm, PlKind, Polyhedron};
use crate::superforms::{Poly, Superform};

pub const FORMAT_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("invalid JSON: {0}")]
    Json(String),
    #[error("{path}: {msg}")]
    Field { path: String, msg: String },
}

fn err<T>(path: &str, msg: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError::Field { path: path.to_string(), msg: msg.into() })
}

/// One named object of a document.
#[derive(Clone, Debug)]
pub enum Object {
    Polyhedron(Polyhedron),
    Superform(Superform),
    DeltaForm(DeltaForm),
    PsFunction(PsFunction),
    AffineMap(AffineMap),
}

impl Object {
    pub fn kind(&self) -> &'static str {
        match self {
            Object::Polyhedron(_) => "polyhedron",
            Object::Superform(_) => "superform",
            Object::DeltaForm(_) => "deltaform",
            Object::PsFunction(_) => "psfunction",
            Object::AffineMap(_) => "affinemap",
        }
    }

    /// Semantic equality: δ-forms compare as currents.
    pub fn same_as(&self, other: &Object) -> bool {
        match (self, other) {
            (Object::DeltaForm(a), Object::DeltaForm(b)) => a.equal(b).unwrap_or(false),
            (Object::Polyhedron(a), Object::Polyhedron(b)) => a == b,
            (Object::Superform(a), Object::Superform(b)) => a == b,
            (Object::PsFunction(a), Object::PsFunction(b)) => a == b,
            (Object::AffineMap(a), Object::AffineMap(b)) => a == b,
            _ => false,
        }
    }
}

/// A named collection of objects.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub objects: BTreeMap<String, Object>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Document, FormatError> {
        let v: Value = serde_json::from_str(text).map_err(|e| FormatError::Json(e.to_string()))?;
        document_from_json(&v)
    }

    pub fn to_json(&self) -> Value {
        let objects: Map<String, Value> = self.objects.iter().map(|(k, o)| (k.clone(), object_to_json(o))).collect();
        json!({ "version": FORMAT_VERSION, "objects": objects })
    }

    /// Canonical pretty text: sorted keys, trailing newline.
    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn single(name: &str, obj: Object) -> Document {
        let mut d = Document::default();
        d.objects.insert(name.to_string(), obj);
        d
    }
}

pub fn document_from_json(v: &Value) -> Result<Document, FormatError> {
    let top = as_object(v, "document")?;
    match top.get("version") {
        Some(Value::String(s)) if s == FORMAT_VERSION => {}
        Some(other) => return err("version", format!("unsupported version {other}")),
        None => return err("version", "missing"),
    }
    let objs = as_object(top.get("objects").unwrap_or(&Value::Null), "objects")?;
    let mut out = Document::default();
    for (name, body) in objs {
        out.objects.insert(name.clone(), object_from_json(body, &format!("objects.{name}"))?);
    }
    Ok(out)
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object().map_or_else(|| err(path, "expected an object"), Ok)
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().map_or_else(|| err(path, "expected an array"), Ok)
}

fn field<'a>(m: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, FormatError> {
    m.get(key).map_or_else(|| err(path, format!("missing field `{key}`")), Ok)
}

fn usize_of(v: &Value, path: &str) -> Result<usize, FormatError> {
    v.as_u64().map(|x| x as usize).map_or_else(|| err(path, "expected a non-negative integer"), Ok)
}

fn rat_of(v: &Value, path: &str) -> Result<Rat, FormatError> {
    match v {
        Value::String(s) => s.parse().map_err(|_| FormatError::Field { path: path.into(), msg: format!("bad rational {s:?}") }),
        Value::Number(n) if n.is_i64() => Ok(Rat::from(n.as_i64().expect("checked"))),
        _ => err(path, "expected a rational string"),
    }
}

fn rat_json(r: &Rat) -> Value {
    Value::String(r.to_string())
}

fn rats_of(v: &Value, path: &str) -> Result<Vec<Rat>, FormatError> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| rat_of(x, &format!("{path}[{i}]"))).collect()
}

fn usizes_of(v: &Value, path: &str) -> Result<Vec<usize>, FormatError> {
    as_array(v, path)?.iter().enumerate().map(|(i, x)| usize_of(x, &format!("{path}[{i}]"))).collect()
}

fn rats_json(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(rat_json).collect())
}

pub fn object_to_json(o: &Object) -> Value {
    match o {
        Object::Polyhedron(p) => polyhedron_json(p),
        Object::Superform(s) => superform_json(s),
        Object::DeltaForm(d) => deltaform_json(d),
        Object::PsFunction(f) => psfunction_json(f),
        Object::AffineMap(f) => affinemap_json(f),
    }
}

/// Objects carry no type tag; the kind is read off the field names.
pub fn object_from_json(v: &Value, path: &str) -> Result<Object, FormatError> {
    let m = as_object(v, path)?;
    let has = |k: &str| m.contains_key(k);
    if has("source_rank") || has("matrix") {
        Ok(Object::AffineMap(affinemap_from(v, path)?))
    } else if has("complex") || has("kind") {
        Ok(Object::PsFunction(psfunction_from(v, path)?))
    } else if has("type") || has("cells") {
        Ok(Object::DeltaForm(deltaform_from(v, path)?))
    } else if has("p") || has("q") || has("terms") {
        Ok(Object::Superform(superform_from(v, path)?))
    } else if has("ineqs") || has("eqs") {
        Ok(Object::Polyhedron(polyhedron_from(v, path)?))
    } else {
        err(path, "not a polyhedron, superform, deltaform, psfunction or affinemap")
    }
}

/// `[a₁, …, a_r, b]` for `a·x ≤ b` (or `=`), the normal scaled to a primitive
/// integer vector.
fn constraints_json(cs: &[Constraint]) -> Value {
    Value::Array(
        cs.iter()
            .map(|(a, b)| {
                let (ints, scale) = primitive_scale(a);
                let mut row: Vec<Value> = ints.iter().map(int_json).collect();
                row.push(rat_json(&(b * &scale)));
                Value::Array(row)
            })
            .collect(),
    )
}

fn constraints_from(v: Option<&Value>, r: usize, path: &str) -> Result<Vec<Constraint>, FormatError> {
    let Some(v) = v else { return Ok(Vec::new()) };
    let mut out = Vec::new();
    for (i, c) in as_array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let mut row = rats_of(c, &p)?;
        if row.len() != r + 1 {
            return err(&p, format!("expected {} entries (normal and offset), found {}", r + 1, row.len()));
        }
        let b = row.pop().expect("nonempty");
        out.push((row, b));
    }
    Ok(out)
}

pub fn polyhedron_json(p: &Polyhedron) -> Value {
    json!({
        "rank": p.ambient_rank(),
        "ineqs": constraints_json(p.ineqs()),
        "eqs": constraints_json(p.eqs()),
    })
}

pub fn polyhedron_from(v: &Value, path: &str) -> Result<Polyhedron, FormatError> {
    let m = as_object(v, path)?;
    let r = usize_of(field(m, "rank", path)?, &format!("{path}.rank"))?;
    let ineqs = constraints_from(m.get("ineqs"), r, &format!("{path}.ineqs"))?;
    let eqs = constraints_from(m.get("eqs"), r, &format!("{path}.eqs"))?;
    Polyhedron::new(r, ineqs, eqs).map_err(|e| FormatError::Field { path: path.into(), msg: e.to_string() })
}

pub fn poly_json(f: &Poly) -> Value {
    Value::Array(f.terms().map(|(e, c)| json!({ "exp": e, "coef": rat_json(c) })).collect())
}

/// A term list `[{exp, coef}, …]`, or a bare rational for a constant.
pub fn poly_from(v: &Value, rank: usize, path: &str) -> Result<Poly, FormatError> {
    if let Ok(c) = rat_of(v, path) {
        return Ok(Poly::constant(rank, c));
    }
    let mut f = Poly::zero(rank);
    for (i, t) in as_array(v, path)?.iter().enumerate() {
        let p = format!("{path}[{i}]");
        let m = as_object(t, &p)?;
        let exp: Vec<u32> = usizes_of(field(m, "exp", &p)?, &format!("{p}.exp"))?.into_iter().map(|x| x as u32).collect();
        if exp.len() != rank {
            return err(&p, format!("exponent has length {}, rank is {rank}", exp.len()));
        }
        f.add_term(exp, rat_of(field(m, "coef", &p)?, &format!("{p}.coef"))?);
    }
    Ok(f)
}

/// Index sets are 1-based: `d′x_1` is index 1.
pub fn superform_json(s: &Superform) -> Value {
    let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    let terms: Vec<Value> =
        s.terms().map(|((i, j), f)| json!({ "I": one_based(i), "J": one_based(j), "poly": poly_json(f) })).collect();
    let (p, q) = s.bidegree();
    json!({ "rank": s.rank(), "p": p, "q": q, "terms": terms })
}

pub fn superform_from(v: &Value, path: &str) -> Result<Superform, FormatError> {
    let m = as_object(v, path)?;
    let rank = usize_of(field(m, "rank", path)?, &format!("{path}.rank"))?;
    let p = usize_of(field(m, "p", path)?, &format!("{path}.p"))?;
    let q = usize_of(field(m, "q", path)?, &format!("{path}.q"))?;
    let mut out = Superform::zero(rank, p, q);
    for (k, t) in as_array(field(m, "terms", path)?, path)?.iter().enumerate() {
        let tp = format!("{path}.terms[{k}]");
        let tm = as_object(t, &tp)?;
        let idx = |key: &str| -> Result<Vec<usize>, FormatError> {
            let v = usizes_of(field(tm, key, &tp)?, &format!("{tp}.{key}"))?;
            if v.iter().any(|&i| i == 0 || i > rank) {
                return err(&format!("{tp}.{key}"), format!("indices run from 1 to {rank}"));
            }
            Ok(v.into_iter().map(|i| i - 1).collect())
        };
        let (i, j) = (idx("I")?, idx("J")?);
        if (i.len(), j.len()) != (p, q) {
            return err(&tp, "index lengths do not match (p, q)");
        }
        let f = poly_from(field(tm, "poly", &tp)?, rank, &format!("{tp}.poly"))?;
        let term = Superform::term(f, &i, &j).map_err(|e| FormatError::Field { path: tp.clone(), msg: e.to_string() })?;
        out = out.plus(&term);
    }
    Ok(out)
}

/// Constant (0,0)-coefficients are written as `weight`.
pub fn deltaform_json(d: &DeltaForm) -> Value {
    let (p, q, l) = d.form_type();
    let cells: Vec<Value> = d
        .cells()
        .iter()
        .map(|(c, a)| match a.as_function().filter(Poly::is_constant) {
            Some(f) => json!({ "poly": polyhedron_json(c), "weight": rat_json(&f.constant_term()) }),
            None => json!({ "poly": polyhedron_json(c), "coeff": superform_json(a) }),
        })
        .collect();
    json!({ "rank": d.rank(), "type": [p, q, l], "cells": cells })
}

pub fn deltaform_from(v: &Value, path: &str) -> Result<DeltaForm, FormatError> {
    let m = as_object(v, path)?;
    let rank = usize_of(field(m, "rank", path)?, &format!("{path}.rank"))?;
    let ty = usizes_of(field(m, "type", path)?, &format!("{path}.type"))?;
    if ty.len() != 3 {
        return err(path, "type must be [p, q, l]");
    }
    let mut cells = Vec::new();
    for (k, c) in as_array(field(m, "cells", path)?, path)?.iter().enumerate() {
        let p = format!("{path}.cells[{k}]");
        let cm = as_object(c, &p)?;
        let cell = polyhedron_from(field(cm, "poly", &p)?, &format!("{p}.poly"))?;
        let coeff = match (cm.get("coeff"), cm.get("weight")) {
            (Some(s), _) => superform_from(s, &format!("{p}.coeff"))?,
            (None, Some(w)) => Superform::constant(rank, rat_of(w, &format!("{p}.weight"))?),
            (None, None) => return err(&p, "missing `coeff` or `weight`"),
        };
        cells.push((cell, coeff));
    }
    DeltaForm::new(rank, (ty[0], ty[1], ty[2]), cells).map_err(|e| FormatError::Field { path: path.into(), msg: e.to_string() })
}

/// `{ "kind": "max"|"min", "terms": [[c₁, …, c_r, c₀], …] }` or
/// `{ "rank": r, "complex": [<polyhedron>, …], "pieces": [<poly>, …] }`.
pub fn psfunction_json(f: &PsFunction) -> Value {
    let complex: Vec<Value> = f.pieces().iter().map(|(c, _)| polyhedron_json(c)).collect();
    let pieces: Vec<Value> = f.pieces().iter().map(|(_, g)| poly_json(g)).collect();
    json!({ "rank": f.rank(), "complex": complex, "pieces": pieces })
}

pub fn psfunction_from(v: &Value, path: &str) -> Result<PsFunction, FormatError> {
    let m = as_object(v, path)?;
    let wrap = |e: crate::deltaforms::DeltaError| FormatError::Field { path: path.into(), msg: e.to_string() };
    if let Some(kind) = m.get("kind") {
        let kind = match kind.as_str() {
            Some("max") => PlKind::Max,
            Some("min") => PlKind::Min,
            _ => return err(&format!("{path}.kind"), "expected \"max\" or \"min\""),
        };
        let mut forms = Vec::new();
        for (i, t) in as_array(field(m, "terms", path)?, &format!("{path}.terms"))?.iter().enumerate() {
            let tp = format!("{path}.terms[{i}]");
            let mut row = rats_of(t, &tp)?;
            if row.is_empty() {
                return err(&tp, "expected [c₁, …, c_r, c₀]");
            }
            let c0 = row.pop().expect("nonempty");
            forms.push(AffineForm::new(row, c0));
        }
        if forms.is_empty() {
            return err(path, "empty list of affine forms");
        }
        if forms.iter().any(|f| f.linear.len() != forms[0].linear.len()) {
            return err(&format!("{path}.terms"), "terms of different lengths");
        }
        return PsFunction::from_pl(&forms, kind).map_err(wrap);
    }
    let complex = as_array(field(m, "complex", path)?, &format!("{path}.complex"))?;
    let polys = as_array(field(m, "pieces", path)?, &format!("{path}.pieces"))?;
    if complex.len() != polys.len() {
        return err(path, "`complex` and `pieces` differ in length");
    }
    let mut pieces = Vec::new();
    let mut rank = m.get("rank").map(|r| usize_of(r, &format!("{path}.rank"))).transpose()?;
    for (k, (c, g)) in complex.iter().zip(polys).enumerate() {
        let region = polyhedron_from(c, &format!("{path}.complex[{k}]"))?;
        let r = *rank.get_or_insert(region.ambient_rank());
        if region.ambient_rank() != r {
            return err(&format!("{path}.complex[{k}]"), "rank mismatch");
        }
        pieces.push((region, poly_from(g, r, &format!("{path}.pieces[{k}]"))?));
    }
    let Some(rank) = rank else { return err(path, "cannot infer the rank of an empty function") };
    PsFunction::from_pieces(rank, pieces).map_err(wrap)
}

fn int_json(x: &BigInt) -> Value {
    x.to_i64().map_or_else(|| Value::String(x.to_string()), |n| json!(n))
}

fn int_of(v: &Value, path: &str) -> Result<BigInt, FormatError> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().expect("checked"))),
        Value::String(s) => s.parse().map_err(|_| FormatError::Field { path: path.into(), msg: format!("bad integer {s:?}") }),
        _ => err(path, "expected an integer"),
    }
}

pub fn affinemap_json(f: &AffineMap) -> Value {
    let m = f.linear();
    let rows: Vec<Value> = (0..m.rows).map(|i| Value::Array(m.row(i).iter().map(int_json).collect())).collect();
    json!({
        "source_rank": f.source_rank(),
        "target_rank": f.target_rank(),
        "matrix": rows,
        "translate": rats_json(f.translation()),
    })
}

pub fn affinemap_from(v: &Value, path: &str) -> Result<AffineMap, FormatError> {
    let m = as_object(v, path)?;
    let s = usize_of(field(m, "source_rank", path)?, &format!("{path}.source_rank"))?;
    let t = usize_of(field(m, "target_rank", path)?, &format!("{path}.target_rank"))?;
    let rows = as_array(field(m, "matrix", path)?, path)?;
    if rows.len() != t {
        return err(path, format!("matrix has {} rows, target rank is {t}", rows.len()));
    }
    let mut ints = Vec::with_capacity(t);
    for (i, row) in rows.iter().enumerate() {
        let p = format!("{path}.matrix[{i}]");
        let entries = as_array(row, &p)?;
        if entries.len() != s {
            return err(&p, format!("row has {} entries, source rank is {s}", entries.len()));
        }
        ints.push(entries.iter().map(|x| int_of(x, &p)).collect::<Result<Vec<_>, _>>()?);
    }
    let translate = match m.get("translate") {
        Some(tv) => rats_of(tv, &format!("{path}.translate"))?,
        None => vec![Rat::zero(); t],
    };
    AffineMap::new(IntMat::from_rows(&ints, s), translate).map_err(|e| FormatError::Field { path: path.into(), msg: e.to_string() })
}
