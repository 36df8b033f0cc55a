use std::sync::Arc;

use super::pointset::PointSet;
use crate::algebra::{odometer_step, CompiledTerm, Context, Model, MultiModel, PointSpace, Term};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::formula::Formula;

/// Evaluates formulas of one model over one point space.
pub struct Evaluator<'m> {
    model: &'m Model,
    space: Arc<PointSpace>,
}

impl<'m> Evaluator<'m> {
    pub fn new(model: &'m Model, ctx: &Context, limits: &Limits) -> Result<Self> {
        let space = PointSpace::new(model.algebra_arc().clone(), ctx.clone(), limits.max_points)?;
        Ok(Evaluator {
            model,
            space: Arc::new(space),
        })
    }

    /// Uses an existing space; its algebra must be the model's.
    pub fn on_space(model: &'m Model, space: Arc<PointSpace>) -> Result<Self> {
        if space.algebra() != model.algebra() {
            return Err(Error::ContextMismatch(
                "point space belongs to a different algebra".into(),
            ));
        }
        Ok(Evaluator { model, space })
    }

    pub fn space(&self) -> &Arc<PointSpace> {
        &self.space
    }

    pub fn model(&self) -> &Model {
        self.model
    }

    /// `Val_f(φ)` over this space.
    pub fn eval(&self, phi: &Formula) -> Result<PointSet> {
        phi.check(self.model.signature(), self.space.context())
            .map_err(Error::Contract)?;
        Ok(self.eval_checked(phi))
    }

    fn eval_checked(&self, phi: &Formula) -> PointSet {
        match phi {
            Formula::True => PointSet::full(&self.space),
            Formula::False => PointSet::empty(&self.space),
            Formula::Not(a) => self.eval_checked(a).complement(),
            Formula::And(a, b) => self.eval_checked(a).intersection(&self.eval_checked(b)),
            Formula::Or(a, b) => self.eval_checked(a).union(&self.eval_checked(b)),
            Formula::Exists(x, body) => {
                let var = self.space.context().index_of(x).expect("checked");
                cylindrify(&self.eval_checked(body), var)
            }
            Formula::Eq(l, r) => diagonal_unchecked(&self.space, l, r),
            Formula::Rel(r, args) => {
                let ctx = self.space.context();
                let args: Vec<CompiledTerm> = args.iter().map(|t| CompiledTerm::compile(t, ctx)).collect();
                let rel = self.model.relation(*r);
                let alg = self.space.algebra();
                let mut vals = vec![0; args.len()];
                scan(&self.space, |point| {
                    for (v, t) in vals.iter_mut().zip(&args) {
                        *v = t.eval(alg, point);
                    }
                    rel.contains(&vals)
                })
            }
        }
    }
}

/// Visits every point in index order with its decoded coordinates.
fn scan(space: &Arc<PointSpace>, mut pred: impl FnMut(&[usize]) -> bool) -> PointSet {
    let mut out = PointSet::empty(space);
    let mut digits = vec![0; space.context().len()];
    for i in 0..space.len() {
        if pred(&digits) {
            out.insert(i);
        }
        odometer_step(space.radices(), &mut digits);
    }
    out
}

fn diagonal_unchecked(space: &Arc<PointSpace>, l: &Term, r: &Term) -> PointSet {
    let ctx = space.context();
    let (l, r) = (CompiledTerm::compile(l, ctx), CompiledTerm::compile(r, ctx));
    let alg = space.algebra();
    scan(space, |p| l.eval(alg, p) == r.eval(alg, p))
}

/// The equality `w ≡ w'` of a space: all points where both terms take the same value.
pub fn diagonal(space: &Arc<PointSpace>, w: &Term, w2: &Term) -> Result<PointSet> {
    let sig = space.algebra().signature();
    let ctx = space.context();
    let ls = w.sort(sig, ctx).map_err(Error::Contract)?;
    let rs = w2.sort(sig, ctx).map_err(Error::Contract)?;
    if ls != rs {
        return Err(Error::Contract("diagonal between terms of different sorts".into()));
    }
    Ok(diagonal_unchecked(space, w, w2))
}

/// `{ μ ∈ G^X : μ satisfies φ in m }`.
pub fn val(m: &Model, ctx: &Context, phi: &Formula, limits: &Limits) -> Result<PointSet> {
    Evaluator::new(m, ctx, limits)?.eval(phi)
}

pub(crate) fn cylindrify(a: &PointSet, var: usize) -> PointSet {
    let space = a.space();
    let stride = space.strides()[var];
    let radix = space.radices()[var];
    let mut out = PointSet::empty(space);
    for i in a.indices() {
        let base = i - space.digit(i, var) * stride;
        if out.contains(base) {
            continue;
        }
        for d in 0..radix {
            out.insert(base + d * stride);
        }
    }
    out
}

/// Cylindrification `∃x A`: points that agree with some point of `A` off `x`.
pub fn exists_quant(a: &PointSet, x: &str) -> Result<PointSet> {
    let var = a
        .context()
        .index_of(x)
        .ok_or_else(|| Error::Contract(format!("variable `{x}` is not in the context")))?;
    Ok(cylindrify(a, var))
}

/// `∀x A = ¬∃x¬A`.
pub fn forall_quant(a: &PointSet, x: &str) -> Result<PointSet> {
    Ok(exists_quant(&a.complement(), x)?.complement())
}

/// True iff `u` and `v` have the same value in every instance of `mm`.
pub fn semantically_equivalent(
    u: &Formula,
    v: &Formula,
    mm: &MultiModel,
    ctx: &Context,
    limits: &Limits,
) -> Result<bool> {
    for inst in mm.instances() {
        let ev = Evaluator::new(&inst.model, ctx, limits)?;
        if ev.eval(u)? != ev.eval(v)? {
            return Ok(false);
        }
    }
    Ok(true)
}
