use std::fmt;

use rayon::prelude::*;

use super::interp::{translate_formula, Interpretation};
use crate::algebra::{all_tuples, Context, Model, MultiModel, Signature, SortedBijection, Term};
use crate::autgroup::{automorphism_group, EquivalenceWitness};
use crate::config::Limits;
use crate::error::Result;
use crate::formula::{Description, Formula};
use crate::galois::content;
use crate::parallel::with_jobs;
use crate::semantics::{transport_hom, val, Direction, PointSet};

/// Probe descriptions for each side of a witness: `left` over the signature of the
/// first knowledge base, `right` over the second.
#[derive(Debug, Clone, Default)]
pub struct Probes {
    pub left: Vec<Description>,
    pub right: Vec<Description>,
}

impl Probes {
    /// The default battery on both sides.
    pub fn defaults(left: &Signature, right: &Signature) -> Self {
        Probes {
            left: default_probes(left),
            right: default_probes(right),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.left.is_empty() && self.right.is_empty()
    }
}

/// Every single-atom description over contexts of one and two variables: relation
/// atoms on variable tuples and, for two variables of one sort, their equality.
/// Two-variable contexts only contribute atoms that mention the second variable.
pub fn default_probes(sig: &Signature) -> Vec<Description> {
    let mut out = Vec::new();
    let n = sig.sorts.len();
    let mut contexts: Vec<Vec<usize>> = (0..n).map(|s| vec![s]).collect();
    for a in 0..n {
        for b in a..n {
            contexts.push(vec![a, b]);
        }
    }
    for sorts in contexts {
        let ctx = Context::numbered("x", &sorts);
        let last = ctx.len() - 1;
        let mut atoms = Vec::new();
        for (r, decl) in sig.rels.iter().enumerate() {
            let choices: Vec<Vec<usize>> = decl
                .args
                .iter()
                .map(|&s| (0..ctx.len()).filter(|&i| ctx.sort(i) == s).collect())
                .collect();
            let radices: Vec<usize> = choices.iter().map(Vec::len).collect();
            for pick in all_tuples(&radices) {
                let vars: Vec<usize> = pick.iter().zip(&choices).map(|(&k, c)| c[k]).collect();
                if !vars.contains(&last) {
                    continue;
                }
                let args = vars.iter().map(|&i| Term::var(ctx.name(i))).collect();
                atoms.push(Formula::Rel(r, args));
            }
        }
        if sorts.len() == 2 && sorts[0] == sorts[1] {
            atoms.push(Formula::eq(Term::var("x1"), Term::var("x2")));
        }
        out.extend(atoms.into_iter().map(|a| Description::new(ctx.clone(), vec![a])));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<CheckResult>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `CHECK <name> PASS|FAIL [counterexample]`, one line per check, then warnings.
    pub fn machine(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str("CHECK ");
            out.push_str(&c.name);
            out.push_str(if c.passed { " PASS" } else { " FAIL" });
            if let Some(cx) = &c.counterexample {
                out.push(' ');
                out.push_str(cx);
            }
            out.push('\n');
        }
        for w in &self.warnings {
            out.push_str("WARN ");
            out.push_str(w);
            out.push('\n');
        }
        out
    }
}

/// Human-readable form: one line per check, warnings, and a summary line.
impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            match (&c.passed, &c.counterexample) {
                (true, _) => writeln!(f, "pass  {}", c.name)?,
                (false, Some(cx)) => writeln!(f, "FAIL  {}  counterexample: {cx}", c.name)?,
                (false, None) => writeln!(f, "FAIL  {}", c.name)?,
            }
        }
        for w in &self.warnings {
            writeln!(f, "warning: {w}")?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {} failed", self.checks.len(), failed)
    }
}

fn compare(name: String, lhs: &PointSet, rhs: &PointSet) -> CheckResult {
    let cx = lhs.first_difference(rhs);
    CheckResult {
        name,
        passed: cx.is_none(),
        counterexample: cx.map(|i| lhs.format_point(i)),
    }
}

/// `content_m({β u : u ∈ T})`, each translation read back over `T`'s context.
fn translated_content(m: &Model, beta: &Interpretation, d: &Description, limits: &Limits) -> Result<PointSet> {
    let mut acc = content(m, &Description::new(d.context.clone(), vec![]), limits)?;
    for u in &d.formulas {
        let t = translate_formula(beta, u, &d.context)?;
        acc = acc.intersection(&t.value(m, &d.context, limits)?);
    }
    Ok(acc)
}

/// `val_m(back(forth(u)))` over `ctx`.
fn round_trip(
    m: &Model,
    forth: &Interpretation,
    back: &Interpretation,
    u: &Formula,
    ctx: &Context,
    limits: &Limits,
) -> Result<PointSet> {
    let there = translate_formula(forth, u, ctx)?;
    let home = translate_formula(back, &there.formula, &there.context)?;
    home.value(m, ctx, limits)
}

struct PairJob<'a> {
    left: &'a str,
    right: &'a str,
    f: &'a Model,
    g: &'a Model,
    delta: SortedBijection,
    beta: Option<&'a Interpretation>,
    beta_prime: Option<&'a Interpretation>,
}

fn check_pair(job: &PairJob<'_>, probes: &Probes, limits: &Limits) -> Result<Vec<CheckResult>> {
    let (l, r) = (job.left, job.right);
    let mut out = Vec::new();

    let a1 = automorphism_group(job.f);
    let a2 = automorphism_group(job.g);
    let name = format!("conjugacy:{l}->{r}");
    if a1.order() != a2.order() {
        out.push(CheckResult {
            name,
            passed: false,
            counterexample: Some(format!("group orders {} vs {}", a1.order(), a2.order())),
        });
    } else {
        let bad = a1.members().iter().find(|g| !a2.contains(&job.delta.conjugate(g)));
        out.push(CheckResult {
            name,
            passed: bad.is_none(),
            counterexample: bad.map(|g| format!("[{}]", g.display())),
        });
    }

    let inverse = job.delta.inverse();
    if let Some(beta) = job.beta {
        for (i, d) in probes.left.iter().enumerate() {
            let lhs = transport_hom(&job.delta, &content(job.f, d, limits)?, Direction::Image)?;
            let rhs = translated_content(job.g, beta, d, limits)?;
            out.push(compare(format!("star:{l}->{r}:{}", i + 1), &lhs, &rhs));
        }
    }
    if let Some(beta_prime) = job.beta_prime {
        for (i, d) in probes.right.iter().enumerate() {
            let lhs = transport_hom(&inverse, &content(job.g, d, limits)?, Direction::Image)?;
            let rhs = translated_content(job.f, beta_prime, d, limits)?;
            out.push(compare(format!("costar:{r}->{l}:{}", i + 1), &lhs, &rhs));
        }
    }
    if let (Some(beta), Some(beta_prime)) = (job.beta, job.beta_prime) {
        for (i, d) in probes.left.iter().enumerate() {
            for (k, u) in d.formulas.iter().enumerate() {
                let lhs = val(job.f, &d.context, u, limits)?;
                let rhs = round_trip(job.f, beta, beta_prime, u, &d.context, limits)?;
                out.push(compare(format!("id1:{l}:{}.{}", i + 1, k + 1), &lhs, &rhs));
            }
        }
        for (i, d) in probes.right.iter().enumerate() {
            for (k, v) in d.formulas.iter().enumerate() {
                let lhs = val(job.g, &d.context, v, limits)?;
                let rhs = round_trip(job.g, beta_prime, beta, v, &d.context, limits)?;
                out.push(compare(format!("id2:{r}:{}.{}", i + 1, k + 1), &lhs, &rhs));
            }
        }
    }
    Ok(out)
}

/// Checks a witness `(α, δ, β, β')` between two knowledge bases.
///
/// For each pair `f ↦ g = α(f)`: conjugacy of the automorphism groups under `δ_f`;
/// with `β_f`, for every left probe `(X, T)`, `δ^*(content_f T) = content_g(β T)`;
/// with `β'_f`, for every right probe, `(δ⁻¹)^*(content_g T') = content_f(β' T')`;
/// with both, the round trips `val_f(u) = val_f(β'β u)` and `val_g(v) = val_g(ββ' v)`.
/// A malformed witness is an error before any check runs.
pub fn verify_witness(
    left: &MultiModel,
    right: &MultiModel,
    w: &EquivalenceWitness,
    probes: &Probes,
    limits: &Limits,
    jobs: Option<usize>,
) -> Result<Report> {
    let deltas = w.validate(left, right)?;
    let mut jobs_list = Vec::new();
    for (p, delta) in w.pairs.iter().zip(deltas) {
        jobs_list.push(PairJob {
            left: &p.left,
            right: &p.right,
            f: left.instance(&p.left)?,
            g: right.instance(&p.right)?,
            delta,
            beta: p.beta.as_ref(),
            beta_prime: p.beta_prime.as_ref(),
        });
    }
    let results: Vec<Result<Vec<CheckResult>>> = with_jobs(jobs, || {
        jobs_list
            .par_iter()
            .map(|j| check_pair(j, probes, limits))
            .collect()
    });
    let mut report = Report::default();
    for r in results {
        report.checks.extend(r?);
    }
    for p in &w.pairs {
        if p.beta.is_none() || p.beta_prime.is_none() {
            report.warnings.push(format!(
                "pair {}->{} lacks beta or beta': translation checks skipped",
                p.left, p.right
            ));
        }
    }
    if probes.is_empty() {
        report.warnings.push("no probes".to_string());
    }
    Ok(report)
}
