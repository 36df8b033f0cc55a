use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::algebra::{Context, Model, RelId, Signature, SortId, Term};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::semantics::{project, PointSet, Evaluator};

/// The defining formula of one relation symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    /// Parameter variables, one per argument of the relation.
    pub params: Vec<String>,
    /// Parameters followed by the variables the body quantifies over.
    pub context: Context,
    pub body: Formula,
}

/// A signature interpretation `β`: each relation of the source signature is defined
/// by a formula over the target signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interpretation {
    source: Arc<Signature>,
    target: Arc<Signature>,
    defs: Vec<Option<Definition>>,
}

impl Interpretation {
    pub fn new(source: Arc<Signature>, target: Arc<Signature>) -> Self {
        let defs = vec![None; source.rels.len()];
        Interpretation { source, target, defs }
    }

    pub fn source(&self) -> &Arc<Signature> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Signature> {
        &self.target
    }

    /// Defines `rel(params) := body`, where `body` may quantify over `bound`.
    pub fn define(
        &mut self,
        rel: &str,
        params: Vec<String>,
        bound: Vec<(String, SortId)>,
        body: Formula,
    ) -> Result<()> {
        let r = self
            .source
            .rel_id(rel)
            .ok_or_else(|| Error::Contract(format!("unknown relation `{rel}`")))?;
        let decl = &self.source.rels[r];
        if params.len() != decl.args.len() {
            return Err(Error::Contract(format!(
                "`{rel}` takes {} arguments, definition has {} parameters",
                decl.args.len(),
                params.len()
            )));
        }
        let vars = params
            .iter()
            .cloned()
            .zip(decl.args.iter().copied())
            .chain(bound);
        let context = Context::new(vars)?;
        body.check(&self.target, &context).map_err(Error::Contract)?;
        if let Some(v) = body.free_vars().iter().find(|v| !params.contains(v)) {
            return Err(Error::Contract(format!(
                "definition of `{rel}` has free variable `{v}` that is not a parameter"
            )));
        }
        self.defs[r] = Some(Definition { params, context, body });
        Ok(())
    }

    pub fn definition(&self, r: RelId) -> Option<&Definition> {
        self.defs[r].as_ref()
    }

    pub fn definitions(&self) -> impl Iterator<Item = (RelId, &Definition)> + '_ {
        self.defs.iter().enumerate().filter_map(|(r, d)| d.as_ref().map(|d| (r, d)))
    }

    pub fn is_total(&self) -> bool {
        self.defs.iter().all(Option::is_some)
    }

    /// Renders one definition as `P(x) := body [where y:s]`.
    pub fn format_definition(&self, r: RelId) -> Option<String> {
        let d = self.definition(r)?;
        let mut out = format!(
            "{}({}) := {}",
            self.source.rels[r].name,
            d.params.join(", "),
            d.body.display(&self.target)
        );
        let extra: Vec<String> = d
            .context
            .iter()
            .skip(d.params.len())
            .map(|(n, s)| format!("{n}:{}", self.target.sort_name(s)))
            .collect();
        if !extra.is_empty() {
            out.push_str(" where ");
            out.push_str(&extra.join(", "));
        }
        Some(out)
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.defs.len() {
            if let Some(line) = self.format_definition(r) {
                writeln!(f, "{line}")?;
            }
        }
        Ok(())
    }
}

/// A translated formula together with the context it lives in: the original
/// context extended by the fresh variables introduced for definition bodies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Translation {
    pub formula: Formula,
    pub context: Context,
}

impl Translation {
    /// The value of the translation in `m`, read back over `ctx`. The fresh variables
    /// occur only bound, so the projection loses nothing.
    pub fn value(&self, m: &Model, ctx: &Context, limits: &Limits) -> Result<PointSet> {
        let full = Evaluator::new(m, &self.context, limits)?.eval(&self.formula)?;
        project(&full, ctx)
    }
}

/// Replaces every relation atom of `phi` by its definition under `beta`, with
/// parameters bound to the atom's arguments and every quantified variable of the
/// body renamed fresh.
pub fn translate_formula(beta: &Interpretation, phi: &Formula, ctx: &Context) -> Result<Translation> {
    phi.check(&beta.source, ctx).map_err(Error::Contract)?;
    let mut context = ctx.clone();
    let formula = translate_inner(beta, phi, &mut context)?;
    Ok(Translation { formula, context })
}

fn translate_inner(beta: &Interpretation, phi: &Formula, ctx: &mut Context) -> Result<Formula> {
    Ok(match phi {
        Formula::True => Formula::True,
        Formula::False => Formula::False,
        Formula::Not(a) => translate_inner(beta, a, ctx)?.not(),
        Formula::And(a, b) => translate_inner(beta, a, ctx)?.and(translate_inner(beta, b, ctx)?),
        Formula::Or(a, b) => translate_inner(beta, a, ctx)?.or(translate_inner(beta, b, ctx)?),
        Formula::Exists(x, body) => Formula::exists(x.clone(), translate_inner(beta, body, ctx)?),
        Formula::Eq(l, r) => Formula::Eq(l.clone(), r.clone()),
        Formula::Rel(r, args) => {
            let def = beta
                .definition(*r)
                .ok_or_else(|| Error::MissingDefinition(beta.source.rels[*r].name.clone()))?;
            let map: HashMap<String, Term> = def.params.iter().cloned().zip(args.iter().cloned()).collect();
            let mut failure = None;
            let out = def.body.instantiate(&map, &mut |old: &str| {
                let sort = def.context.sort_of(old).expect("bound variables are declared");
                let name = ctx.fresh_name(old);
                if let Err(e) = ctx.push(name.clone(), sort) {
                    failure = Some(e);
                }
                name
            });
            if let Some(e) = failure {
                return Err(e);
            }
            out
        }
    })
}
