use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::signature::{OpId, Signature, SortId};
use crate::error::{Error, Result};

/// A finite ordered set of sorted variables: the `X` of `W(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Context {
    vars: Vec<(String, SortId)>,
}

impl Context {
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, SortId)>) -> Result<Self> {
        let vars: Vec<(String, SortId)> = vars.into_iter().map(|(n, s)| (n.into(), s)).collect();
        let mut seen = HashSet::new();
        for (n, _) in &vars {
            if !seen.insert(n.as_str()) {
                return Err(Error::Contract(format!("variable `{n}` declared twice")));
            }
        }
        Ok(Context { vars })
    }

    pub fn empty() -> Self {
        Context::default()
    }

    /// Context with the given sorts and generated names `x1, x2, ...`.
    pub fn numbered(prefix: &str, sorts: &[SortId]) -> Self {
        Context {
            vars: sorts
                .iter()
                .enumerate()
                .map(|(i, &s)| (format!("{prefix}{}", i + 1), s))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|(n, _)| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn sort_of(&self, name: &str) -> Option<SortId> {
        self.index_of(name).map(|i| self.vars[i].1)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].0
    }

    pub fn sort(&self, i: usize) -> SortId {
        self.vars[i].1
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, SortId)> + '_ {
        self.vars.iter().map(|(n, s)| (n.as_str(), *s))
    }

    pub fn sorts(&self) -> Vec<SortId> {
        self.vars.iter().map(|(_, s)| *s).collect()
    }

    /// Appends a variable; fails if the name is taken.
    pub fn push(&mut self, name: impl Into<String>, sort: SortId) -> Result<()> {
        let name = name.into();
        if self.contains(&name) {
            return Err(Error::Contract(format!("variable `{name}` declared twice")));
        }
        self.vars.push((name, sort));
        Ok(())
    }

    /// A variable name starting with `stem` that is not yet in the context.
    pub fn fresh_name(&self, stem: &str) -> String {
        (1..)
            .map(|i| format!("{stem}{i}"))
            .find(|n| !self.contains(n))
            .expect("unbounded supply")
    }

    /// True when every variable of `self` occurs in `other` with the same sort.
    pub fn is_subcontext_of(&self, other: &Context) -> bool {
        self.iter().all(|(n, s)| other.sort_of(n) == Some(s))
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        ContextDisplay { ctx: self, sig }
    }
}

struct ContextDisplay<'a> {
    ctx: &'a Context,
    sig: &'a Signature,
}

impl fmt::Display for ContextDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (n, s)) in self.ctx.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{n}:{}", self.sig.sort_name(s))?;
        }
        Ok(())
    }
}

/// An element of the free algebra `W(X)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(OpId, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn sort(&self, sig: &Signature, ctx: &Context) -> Result<SortId, String> {
        match self {
            Term::Var(v) => ctx
                .sort_of(v)
                .ok_or_else(|| format!("variable `{v}` is not in the context")),
            Term::App(op, args) => {
                let decl = sig
                    .ops
                    .get(*op)
                    .ok_or_else(|| format!("operation #{op} is not declared"))?;
                if decl.args.len() != args.len() {
                    return Err(format!(
                        "operation `{}` expects {} arguments, got {}",
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
                Ok(decl.result)
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Var(v) => {
                out.insert(v);
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn mentions(&self, var: &str) -> bool {
        match self {
            Term::Var(v) => v == var,
            Term::App(_, args) => args.iter().any(|a| a.mentions(var)),
        }
    }

    /// Replaces every variable through `f`; variables mapped to `None` stay put.
    pub fn substitute(&self, f: &impl Fn(&str) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::App(op, args) => Term::App(*op, args.iter().map(|a| a.substitute(f)).collect()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> impl fmt::Display + 'a {
        TermDisplay { term: self, sig }
    }
}

struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => f.write_str(v),
            Term::App(op, args) => {
                f.write_str(&self.sig.ops[*op].name)?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", a.display(self.sig))?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Values for the variables of a context, positionally aligned with it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<usize>);

impl Assignment {
    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

/// A morphism `s: W(X) -> W(Y)` of free algebras, given by the images of the variables of `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    domain: Context,
    codomain: Context,
    images: Vec<Term>,
}

impl Substitution {
    pub fn new(sig: &Signature, domain: Context, codomain: Context, images: Vec<Term>) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::Contract(format!(
                "substitution needs {} images, got {}",
                domain.len(),
                images.len()
            )));
        }
        for (i, t) in images.iter().enumerate() {
            let got = t.sort(sig, &codomain).map_err(Error::Contract)?;
            if got != domain.sort(i) {
                return Err(Error::Contract(format!(
                    "image of `{}` has sort {}, expected {}",
                    domain.name(i),
                    sig.sort_name(got),
                    sig.sort_name(domain.sort(i))
                )));
            }
        }
        Ok(Substitution {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(ctx: &Context) -> Self {
        Substitution {
            domain: ctx.clone(),
            codomain: ctx.clone(),
            images: ctx.iter().map(|(n, _)| Term::var(n)).collect(),
        }
    }

    /// Builds a substitution from `(variable, term)` pairs; unlisted domain variables
    /// map to the same-named codomain variable.
    pub fn from_pairs(
        sig: &Signature,
        domain: Context,
        codomain: Context,
        pairs: &[(&str, Term)],
    ) -> Result<Self> {
        let images = domain
            .iter()
            .map(|(n, _)| {
                pairs
                    .iter()
                    .find(|(v, _)| *v == n)
                    .map(|(_, t)| t.clone())
                    .unwrap_or_else(|| Term::var(n))
            })
            .collect();
        Substitution::new(sig, domain, codomain, images)
    }

    pub fn domain(&self) -> &Context {
        &self.domain
    }

    pub fn codomain(&self) -> &Context {
        &self.codomain
    }

    pub fn images(&self) -> &[Term] {
        &self.images
    }

    pub fn image_of(&self, var: &str) -> Option<&Term> {
        self.domain.index_of(var).map(|i| &self.images[i])
    }

    /// Applies the substitution to a term over the domain.
    pub fn apply_term(&self, t: &Term) -> Term {
        t.substitute(&|v| self.image_of(v).cloned())
    }

    /// The composite `self ∘ first`: first `first: X -> Y`, then `self: Y -> Z`.
    pub fn after(&self, first: &Substitution) -> Result<Substitution> {
        if first.codomain != self.domain {
            return Err(Error::ContextMismatch(
                "composed substitutions do not meet in a common context".into(),
            ));
        }
        Ok(Substitution {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            images: first.images.iter().map(|t| self.apply_term(t)).collect(),
        })
    }
}
