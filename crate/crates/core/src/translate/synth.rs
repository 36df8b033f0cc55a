use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use super::interp::Interpretation;
use crate::algebra::{all_tuples, Context, Model, SortedBijection, Term};
use crate::config::Limits;
use crate::error::Result;
use crate::formula::Formula;
use crate::semantics::{cylinder, cylindrify, transport_hom, val, Direction, PointSet};

/// Bounds for [`synthesize_interpretation`].
#[derive(Debug, Clone, Copy)]
pub struct SynthesisBounds {
    /// Maximum connective/quantifier nesting above the atoms.
    pub max_depth: usize,
    /// Maximum number of semantically distinct candidates kept.
    pub max_candidates: usize,
}

impl Default for SynthesisBounds {
    fn default() -> Self {
        SynthesisBounds {
            max_depth: 3,
            max_candidates: 4096,
        }
    }
}

struct Candidate {
    formula: Formula,
    value: PointSet,
    free: BTreeSet<usize>,
}

/// Searches, relation by relation, for definitions over the signature of `g` with
/// `val_g(β(R)) = δ^* val_f(R)`. Formulas are enumerated breadth-first by depth over
/// the parameters plus one extra variable per sort, and deduplicated by their value
/// in `g`. Returns `None` when some relation has no definition within the bounds.
pub fn synthesize_interpretation(
    f: &Model,
    g: &Model,
    delta: &SortedBijection,
    bounds: SynthesisBounds,
    limits: &Limits,
) -> Result<Option<Interpretation>> {
    let source = Arc::new(f.signature().clone());
    let target = Arc::new(g.signature().clone());
    let mut beta = Interpretation::new(source.clone(), target.clone());
    for (r, decl) in source.rels.iter().enumerate() {
        let params = Context::numbered("x", &decl.args);
        let atom = Formula::Rel(r, (0..params.len()).map(|i| Term::var(params.name(i))).collect());
        let goal = transport_hom(delta, &val(f, &params, &atom, limits)?, Direction::Image)?;
        let mut ctx = params.clone();
        for s in 0..target.sorts.len() {
            ctx.push(format!("y{}", s + 1), s)?;
        }
        let goal = cylinder(&goal, &ctx)?;
        let Some(found) = search(g, &ctx, params.len(), &goal, bounds, limits)? else {
            return Ok(None);
        };
        let param_names = (0..params.len()).map(|i| params.name(i).to_string()).collect();
        let used = found.bound_vars();
        let bound = ctx
            .iter()
            .skip(params.len())
            .filter(|(n, _)| used.contains(*n))
            .map(|(n, s)| (n.to_string(), s))
            .collect();
        beta.define(&decl.name, param_names, bound, found)?;
    }
    Ok(Some(beta))
}

fn search(
    g: &Model,
    ctx: &Context,
    n_params: usize,
    goal: &PointSet,
    bounds: SynthesisBounds,
    limits: &Limits,
) -> Result<Option<Formula>> {
    let sig = g.signature();
    let mut seen: HashSet<PointSet> = HashSet::new();
    let mut pool: Vec<Candidate> = Vec::new();
    let mut level: Vec<usize> = Vec::new();

    let close = |c: &Candidate| -> Formula {
        // Bind the extra variables that occur free; the value is a cylinder in them.
        let mut out = c.formula.clone();
        for &i in c.free.iter().rev() {
            if i >= n_params {
                out = Formula::exists(ctx.name(i), out);
            }
        }
        out
    };

    let mut admit = |formula: Formula,
                     value: PointSet,
                     free: BTreeSet<usize>,
                     pool: &mut Vec<Candidate>,
                     level: &mut Vec<usize>|
     -> Option<Formula> {
        if pool.len() >= bounds.max_candidates || !seen.insert(value.clone()) {
            return None;
        }
        let c = Candidate { formula, value, free };
        let hit = (c.value == *goal).then(|| close(&c));
        level.push(pool.len());
        pool.push(c);
        hit
    };

    let mut atoms: Vec<(Formula, BTreeSet<usize>)> = vec![(Formula::False, BTreeSet::new()), (Formula::True, BTreeSet::new())];
    for (r, decl) in sig.rels.iter().enumerate() {
        let choices: Vec<Vec<usize>> = decl
            .args
            .iter()
            .map(|&s| (0..ctx.len()).filter(|&i| ctx.sort(i) == s).collect())
            .collect();
        let radices: Vec<usize> = choices.iter().map(Vec::len).collect();
        for pick in all_tuples(&radices) {
            let vars: Vec<usize> = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
            let args = vars.iter().map(|&i| Term::var(ctx.name(i))).collect();
            atoms.push((Formula::Rel(r, args), vars.into_iter().collect()));
        }
    }
    for i in 0..ctx.len() {
        for j in i + 1..ctx.len() {
            if ctx.sort(i) == ctx.sort(j) {
                let eq = Formula::eq(Term::var(ctx.name(i)), Term::var(ctx.name(j)));
                atoms.push((eq, [i, j].into_iter().collect()));
            }
        }
    }
    for (a, free) in atoms {
        let v = val(g, ctx, &a, limits)?;
        if let Some(hit) = admit(a, v, free, &mut pool, &mut level) {
            return Ok(Some(hit));
        }
    }

    for _ in 0..bounds.max_depth {
        let prev = std::mem::take(&mut level);
        let known = pool.len();
        for &i in &prev {
            let c = &pool[i];
            let (f, v, free) = (c.formula.clone().not(), c.value.complement(), c.free.clone());
            if let Some(hit) = admit(f, v, free, &mut pool, &mut level) {
                return Ok(Some(hit));
            }
            for &x in pool[i].free.clone().iter().filter(|&&x| x >= n_params) {
                let c = &pool[i];
                let v = cylindrify(&c.value, x);
                let mut free = c.free.clone();
                free.remove(&x);
                let f = Formula::exists(ctx.name(x), c.formula.clone());
                if let Some(hit) = admit(f, v, free, &mut pool, &mut level) {
                    return Ok(Some(hit));
                }
            }
        }
        for &i in &prev {
            for j in 0..known {
                let (a, b) = (&pool[i], &pool[j]);
                let free: BTreeSet<usize> = a.free.union(&b.free).copied().collect();
                let and = (a.formula.clone().and(b.formula.clone()), a.value.intersection(&b.value));
                let or = (a.formula.clone().or(b.formula.clone()), a.value.union(&b.value));
                for (f, v) in [and, or] {
                    if let Some(hit) = admit(f, v, free.clone(), &mut pool, &mut level) {
                        return Ok(Some(hit));
                    }
                }
            }
        }
        if level.is_empty() {
            break;
        }
    }
    Ok(None)
}
