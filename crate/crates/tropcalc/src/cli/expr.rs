//! The expression language of `tropcalc compute`.
//!
//! ```text
//! expr := name | integer | name "(" expr ("," expr)* ")"
//! ```

use crate::deltaforms::{boundary1, boundary2, corner_locus, DeltaForm};
use crate::morphisms::{graph_cycle, AffineMap, pullback, pushforward_cells, pushforward_hat};
use crate::products::{cross, diagonal_wedge, transversal_wedge};

use super::io::{Document, Object};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown object or function `{0}`")]
    Unknown(String),
    #[error("{func}: {msg}")]
    Usage { func: String, msg: String },
    /// The engine rejected the inputs (unbalanced form, non-injective map, …).
    #[error("{func}: {msg}")]
    Engine { func: String, msg: String },
}

impl EvalError {
    /// Whether this is a usage problem rather than a failed validation.
    pub fn is_usage(&self) -> bool {
        !matches!(self, EvalError::Engine { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Name(String),
    Int(usize),
    Call(String, Vec<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn fail<T>(&self, msg: &str) -> Result<T, EvalError> {
        Err(EvalError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Expr, EvalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        if start == self.pos {
            return self.fail("expected a name");
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii").to_string();
        if word.bytes().all(|b| b.is_ascii_digit()) {
            return word.parse().map(Expr::Int).or_else(|_| self.fail("integer too large"));
        }
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'(') {
            return Ok(Expr::Name(word));
        }
        self.pos += 1;
        let mut args = vec![self.expr()?];
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b',') => {
                    self.pos += 1;
                    args.push(self.expr()?);
                }
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Expr::Call(word, args));
                }
                _ => return self.fail("expected `,` or `)`"),
            }
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, EvalError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.fail("trailing input");
    }
    Ok(e)
}

fn usage<T>(func: &str, msg: impl Into<String>) -> Result<T, EvalError> {
    Err(EvalError::Usage { func: func.to_string(), msg: msg.into() })
}

fn engine<E: std::fmt::Display>(func: &str) -> impl Fn(E) -> EvalError + '_ {
    move |e| EvalError::Engine { func: func.to_string(), msg: e.to_string() }
}

/// An evaluated argument: a document object or a `fullspace` of rank not
/// yet known.
enum Val {
    Obj(Object),
    Full,
}

fn delta(func: &str, v: &Val, rank: Option<usize>) -> Result<DeltaForm, EvalError> {
    match (v, rank) {
        (Val::Obj(Object::DeltaForm(d)), _) => Ok(d.clone()),
        (Val::Obj(Object::PsFunction(phi)), _) if matches!(func, "dP1" | "dP2") => Ok(phi.to_delta_form()),
        (Val::Obj(other), _) => usage(func, format!("expected a deltaform, found a {}", other.kind())),
        (Val::Full, Some(r)) => Ok(DeltaForm::full_space(r)),
        (Val::Full, None) => usage(func, "cannot infer the rank of `fullspace`; write fullspace(r)"),
    }
}

fn rank_of(v: &Val) -> Option<usize> {
    match v {
        Val::Obj(Object::DeltaForm(d)) => Some(d.rank()),
        _ => None,
    }
}

fn map<'a>(func: &str, v: &'a Val) -> Result<&'a AffineMap, EvalError> {
    match v {
        Val::Obj(Object::AffineMap(f)) => Ok(f),
        Val::Obj(other) => usage(func, format!("expected an affinemap, found a {}", other.kind())),
        Val::Full => usage(func, "expected an affinemap, found `fullspace`"),
    }
}

pub fn eval(e: &Expr, doc: &Document) -> Result<Object, EvalError> {
    match eval_val(e, doc)? {
        Val::Obj(o) => Ok(o),
        Val::Full => usage("fullspace", "cannot infer the rank; write fullspace(r)"),
    }
}

fn eval_val(e: &Expr, doc: &Document) -> Result<Val, EvalError> {
    match e {
        Expr::Name(n) => match doc.objects.get(n) {
            Some(o) => Ok(Val::Obj(o.clone())),
            None if n == "fullspace" => Ok(Val::Full),
            None => Err(EvalError::Unknown(n.clone())),
        },
        Expr::Int(_) => usage("expression", "a bare integer is not an object"),
        Expr::Call(f, args) => {
            let f = f.as_str();
            if f == "fullspace" {
                return match args.as_slice() {
                    [Expr::Int(r)] => Ok(Val::Obj(Object::DeltaForm(DeltaForm::full_space(*r)))),
                    _ => usage(f, "expects one integer argument"),
                };
            }
            let vals: Vec<Val> = args.iter().map(|a| eval_val(a, doc)).collect::<Result<_, _>>()?;
            let arity = |n: usize| if vals.len() == n { Ok(()) } else { usage(f, format!("expects {n} argument(s)")) };
            let pair = || -> Result<(DeltaForm, DeltaForm), EvalError> {
                arity(2)?;
                let a = delta(f, &vals[0], rank_of(&vals[1]))?;
                let b = delta(f, &vals[1], Some(a.rank()))?;
                Ok((a, b))
            };
            let out = match f {
                "wedge" => {
                    let (a, b) = pair()?;
                    diagonal_wedge(&a, &b).map_err(engine(f))?
                }
                "twedge" => {
                    let (a, b) = pair()?;
                    transversal_wedge(&a, &b).map_err(engine(f))?
                }
                "cross" => {
                    arity(2)?;
                    cross(&delta(f, &vals[0], None)?, &delta(f, &vals[1], None)?)
                }
                "add" | "sub" => {
                    let (a, b) = pair()?;
                    if f == "add" { a.add(&b) } else { a.sub(&b) }.map_err(engine(f))?
                }
                "corner" => {
                    arity(2)?;
                    let Val::Obj(Object::PsFunction(phi)) = &vals[0] else {
                        return usage(f, "first argument must be a psfunction");
                    };
                    corner_locus(phi, &delta(f, &vals[1], Some(phi.rank()))?).map_err(engine(f))?
                }
                "push" | "pushhat" | "pull" => {
                    arity(2)?;
                    let m = map(f, &vals[0])?;
                    match f {
                        "push" => pushforward_cells(m, &delta(f, &vals[1], Some(m.source_rank()))?),
                        "pushhat" => pushforward_hat(m, &delta(f, &vals[1], Some(m.source_rank()))?),
                        _ => pullback(m, &delta(f, &vals[1], Some(m.target_rank()))?),
                    }
                    .map_err(engine(f))?
                }
                "graph" => {
                    arity(1)?;
                    graph_cycle(map(f, &vals[0])?).map_err(engine(f))?
                }
                "dP1" | "dP2" | "bnd1" | "bnd2" | "J" | "neg" => {
                    arity(1)?;
                    let a = delta(f, &vals[0], None)?;
                    match f {
                        "dP1" => a.dp1(),
                        "dP2" => a.dp2(),
                        "bnd1" => boundary1(&a).map_err(engine(f))?,
                        "bnd2" => boundary2(&a).map_err(engine(f))?,
                        "J" => a.j_op(),
                        _ => a.neg(),
                    }
                }
                other => return Err(EvalError::Unknown(other.to_string())),
            };
            Ok(Val::Obj(Object::DeltaForm(out)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_calls() {
        let e = parse(" wedge( L , corner(phi, fullspace(2)) ) ").unwrap();
        assert_eq!(
            e,
            Expr::Call(
                "wedge".into(),
                vec![
                    Expr::Name("L".into()),
                    Expr::Call("corner".into(), vec![Expr::Name("phi".into()), Expr::Call("fullspace".into(), vec![Expr::Int(2)])])
                ]
            )
        );
        assert!(parse("wedge(a,").is_err());
        assert!(parse("a b").is_err());
    }
}
