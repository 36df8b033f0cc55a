//! First-order formulas over a signature and a context.
//!
//! Universal quantification has no node of its own: `forall x. φ` is stored as
//! `not exists x. not φ`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::algebra::{Context, RelId, Signature, Substitution, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Eq(Term, Term),
    Rel(RelId, Vec<Term>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn exists(var: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(var.into(), Box::new(body))
    }

    pub fn forall(var: impl Into<String>, body: Formula) -> Formula {
        Formula::exists(var, body.not()).not()
    }

    pub fn eq(l: Term, r: Term) -> Formula {
        Formula::Eq(l, r)
    }

    /// Left-nested conjunction; `true` for an empty iterator.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Checks well-sortedness against `sig` and that every variable, free or bound,
    /// belongs to `ctx`.
    pub fn check(&self, sig: &Signature, ctx: &Context) -> Result<(), String> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Not(a) => a.check(sig, ctx),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check(sig, ctx)?;
                b.check(sig, ctx)
            }
            Formula::Exists(v, body) => {
                if !ctx.contains(v) {
                    return Err(format!("bound variable `{v}` is not in the context"));
                }
                body.check(sig, ctx)
            }
            Formula::Eq(l, r) => {
                let ls = l.sort(sig, ctx)?;
                let rs = r.sort(sig, ctx)?;
                if ls != rs {
                    return Err(format!(
                        "equality between sorts {} and {}",
                        sig.sort_name(ls),
                        sig.sort_name(rs)
                    ));
                }
                Ok(())
            }
            Formula::Rel(r, args) => {
                let decl = sig
                    .rels
                    .get(*r)
                    .ok_or_else(|| format!("relation #{r} is not declared"))?;
                if decl.args.len() != args.len() {
                    return Err(format!(
                        "relation `{}` expects {} arguments, got {}",
                        decl.name,
                        decl.args.len(),
                        args.len()
                    ));
                }
                for (a, &want) in args.iter().zip(&decl.args) {
                    let got = a.sort(sig, ctx)?;
                    if got != want {
                        return Err(format!(
                            "argument of `{}` has sort {}, expected {}",
                            decl.name,
                            sig.sort_name(got),
                            sig.sort_name(want)
                        ));
                    }
                }
                Ok(())
            }
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in t.vars() {
                if !bound.iter().any(|b| b == v) {
                    out.insert(v.to_string());
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Not(a) => a.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
            Formula::Eq(l, r) => {
                term(l, bound, out);
                term(r, bound, out);
            }
            Formula::Rel(_, args) => args.iter().for_each(|t| term(t, bound, out)),
        }
    }

    /// Variables bound by some quantifier in the formula.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Exists(v, _) = f {
                out.insert(v.clone());
            }
        });
        out
    }

    pub fn relations(&self) -> BTreeSet<RelId> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Rel(r, _) = f {
                out.insert(*r);
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Not(a) | Formula::Exists(_, a) => a.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Connective nesting depth; atoms and constants have depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Not(a) | Formula::Exists(_, a) => 1 + a.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            _ => 1,
        }
    }

    /// Syntactic application of `s: W(X) -> W(Y)` to a formula over `X`.
    ///
    /// Free occurrences are replaced by their images. A bound variable `y` is kept
    /// as is, so it must also be a variable of `Y` with the same sort, and it must
    /// not occur in the image of any other domain variable. Otherwise the
    /// substitution would capture and is rejected.
    pub fn apply_substitution(&self, s: &Substitution) -> Result<Formula> {
        self.apply_inner(s, &mut Vec::new())
    }

    fn apply_inner(&self, s: &Substitution, bound: &mut Vec<String>) -> Result<Formula> {
        let term = |t: &Term, bound: &Vec<String>| -> Result<Term> {
            let missing = std::cell::RefCell::new(None);
            let out = t.substitute(&|v: &str| {
                if bound.iter().any(|b| b == v) {
                    None
                } else {
                    let img = s.image_of(v).cloned();
                    if img.is_none() {
                        *missing.borrow_mut() = Some(v.to_string());
                    }
                    img
                }
            });
            if let Some(v) = missing.into_inner() {
                return Err(Error::Contract(format!(
                    "variable `{v}` is not in the substitution domain"
                )));
            }
            Ok(out)
        };
        Ok(match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Not(a) => a.apply_inner(s, bound)?.not(),
            Formula::And(a, b) => a.apply_inner(s, bound)?.and(b.apply_inner(s, bound)?),
            Formula::Or(a, b) => a.apply_inner(s, bound)?.or(b.apply_inner(s, bound)?),
            Formula::Exists(y, body) => {
                let dom_sort = s.domain().sort_of(y);
                if dom_sort.is_none() || s.codomain().sort_of(y) != dom_sort {
                    return Err(Error::Contract(format!(
                        "bound variable `{y}` must exist with the same sort on both sides"
                    )));
                }
                for (x, _) in s.domain().iter() {
                    if x != y && s.image_of(x).is_some_and(|t| t.mentions(y)) {
                        return Err(Error::Contract(format!(
                            "substitution would capture `{y}` in the image of `{x}`"
                        )));
                    }
                }
                bound.push(y.clone());
                let b = body.apply_inner(s, bound);
                bound.pop();
                Formula::exists(y.clone(), b?)
            }
            Formula::Eq(l, r) => Formula::Eq(term(l, bound)?, term(r, bound)?),
            Formula::Rel(r, args) => Formula::Rel(
                *r,
                args.iter()
                    .map(|t| term(t, bound))
                    .collect::<Result<Vec<_>>>()?,
            ),
        })
    }

    /// Capture-avoiding substitution of free variables. Every quantifier is given
    /// a fresh variable from `fresh`, whatever its original name.
    pub fn instantiate(
        &self,
        map: &HashMap<String, Term>,
        fresh: &mut impl FnMut(&str) -> String,
    ) -> Formula {
        let mut scope: Vec<(String, String)> = Vec::new();
        self.instantiate_inner(map, fresh, &mut scope)
    }

    fn instantiate_inner(
        &self,
        map: &HashMap<String, Term>,
        fresh: &mut impl FnMut(&str) -> String,
        scope: &mut Vec<(String, String)>,
    ) -> Formula {
        let term = |t: &Term, scope: &Vec<(String, String)>| {
            t.substitute(&|v: &str| {
                if let Some((_, new)) = scope.iter().rev().find(|(old, _)| old == v) {
                    Some(Term::var(new.clone()))
                } else {
                    map.get(v).cloned()
                }
            })
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Not(a) => a.instantiate_inner(map, fresh, scope).not(),
            Formula::And(a, b) => a
                .instantiate_inner(map, fresh, scope)
                .and(b.instantiate_inner(map, fresh, scope)),
            Formula::Or(a, b) => a
                .instantiate_inner(map, fresh, scope)
                .or(b.instantiate_inner(map, fresh, scope)),
            Formula::Exists(y, body) => {
                let new = fresh(y);
                scope.push((y.clone(), new.clone()));
                let b = body.instantiate_inner(map, fresh, scope);
                scope.pop();
                Formula::exists(new, b)
            }
            Formula::Eq(l, r) => Formula::Eq(term(l, scope), term(r, scope)),
            Formula::Rel(r, args) => Formula::Rel(*r, args.iter().map(|t| term(t, scope)).collect()),
        }
    }

    /// Canonical text: `not` binds tighter than `and`, which binds tighter than `or`;
    /// both binary connectives associate to the left; quantifier bodies extend as far
    /// right as possible, so a quantifier that is an operand is parenthesized.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        FormulaDisplay { f: self, sig }
    }
}

struct FormulaDisplay<'a> {
    f: &'a Formula,
    sig: &'a Signature,
}

const PREC_QUANT: u8 = 0;
const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_ATOM: u8 = 4;

/// `not exists x. not b`, the stored form of `forall x. b`.
fn as_forall(f: &Formula) -> Option<(&str, &Formula)> {
    match f {
        Formula::Not(a) => match &**a {
            Formula::Exists(v, body) => match &**body {
                Formula::Not(b) => Some((v.as_str(), &**b)),
                _ => None,
            },
            _ => None,
        },
        _ => None,
    }
}

fn precedence(f: &Formula) -> u8 {
    if as_forall(f).is_some() {
        return PREC_QUANT;
    }
    match f {
        Formula::Exists(..) => PREC_QUANT,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        Formula::Not(..) => PREC_NOT,
        _ => PREC_ATOM,
    }
}

fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula, sig: &Signature, min: u8) -> fmt::Result {
    let paren = precedence(f) < min;
    if paren {
        out.write_str("(")?;
    }
    if let Some((v, body)) = as_forall(f) {
        write!(out, "forall {v}. ")?;
        write_formula(out, body, sig, PREC_QUANT)?;
        if paren {
            out.write_str(")")?;
        }
        return Ok(());
    }
    match f {
        Formula::True => out.write_str("true")?,
        Formula::False => out.write_str("false")?,
        Formula::Not(a) => {
            out.write_str("not ")?;
            write_formula(out, a, sig, PREC_NOT)?;
        }
        Formula::And(a, b) => {
            write_formula(out, a, sig, PREC_AND)?;
            out.write_str(" and ")?;
            write_formula(out, b, sig, PREC_NOT)?;
        }
        Formula::Or(a, b) => {
            write_formula(out, a, sig, PREC_OR)?;
            out.write_str(" or ")?;
            write_formula(out, b, sig, PREC_AND)?;
        }
        Formula::Exists(v, body) => {
            write!(out, "exists {v}. ")?;
            write_formula(out, body, sig, PREC_QUANT)?;
        }
        Formula::Eq(l, r) => write!(out, "{} == {}", l.display(sig), r.display(sig))?,
        Formula::Rel(r, args) => {
            out.write_str(&sig.rels[*r].name)?;
            out.write_str("(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.write_str(", ")?;
                }
                write!(out, "{}", a.display(sig))?;
            }
            out.write_str(")")?;
        }
    }
    if paren {
        out.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self.f, self.sig, PREC_QUANT)
    }
}

/// A finite set of formulas over a context: the description `(X, T)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Description {
    pub context: Context,
    pub formulas: Vec<Formula>,
}

impl Description {
    pub fn new(context: Context, formulas: Vec<Formula>) -> Self {
        Description { context, formulas }
    }

    pub fn check(&self, sig: &Signature) -> Result<(), String> {
        self.formulas.iter().try_for_each(|f| f.check(sig, &self.context))
    }

    /// `self` with one more formula appended.
    pub fn with(&self, f: Formula) -> Description {
        let mut d = self.clone();
        d.formulas.push(f);
        d
    }
}
