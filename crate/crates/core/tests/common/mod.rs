//! Shared test support: fixture loading, random models and formulas, and naive
//! oracles that share no code with the library's evaluators and searches.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use kbalg::algebra::{Context, FiniteAlgebra, Instance, Model, MultiModel, OpDecl, RelDecl, Signature, Term};
use kbalg::formula::Formula;
use kbalg::frontend::parse_model_named;
use kbalg::semantics::PointSet;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture(name: &str) -> MultiModel {
    let path = fixture_path(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_model_named(&text, name).unwrap_or_else(|e| panic!("{e}"))
}

/// Every single-instance model fixture.
pub const MODEL_FIXTURES: &[&str] = &[
    "bare1.kbm",
    "bare3.kbm",
    "mp.kbm",
    "mq.kbm",
    "m0.kbm",
    "mp_relabeled.kbm",
    "mp_complement.kbm",
    "z3.kbm",
    "v4.kbm",
    "cycle4.kbm",
    "path3.kbm",
    "two_sorted.kbm",
    "z4succ.kbm",
];

/// All instances of all model fixtures, including the multi-instance files.
pub fn all_fixture_models() -> Vec<(String, Model)> {
    let mut out = Vec::new();
    for name in MODEL_FIXTURES.iter().chain(&["mp2.kbm", "mq2.kbm"]) {
        let mm = fixture(name);
        for inst in mm.instances() {
            out.push((format!("{name}/{}", inst.name), inst.model.clone()));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Random structures
// ---------------------------------------------------------------------------

fn random_table(rng: &mut TestRng, rows: usize, bound: usize) -> Vec<usize> {
    (0..rows).map(|_| rng.gen_range(0..bound)).collect()
}

fn random_tuples(rng: &mut TestRng, radices: &[usize], density: f64) -> Vec<Vec<usize>> {
    all_tuples(radices).into_iter().filter(|_| rng.gen_bool(density)).collect()
}

/// All tuples over the radices, first coordinate most significant.
pub fn all_tuples(radices: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radices {
        let mut next = Vec::with_capacity(out.len() * r);
        for t in &out {
            for e in 0..r {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// A random signature and algebra with at most two sorts and total carrier size at
/// most `max_total`, with a few operations and relations.
pub fn random_algebra(rng: &mut TestRng, max_total: usize) -> Arc<FiniteAlgebra> {
    let two = max_total >= 3 && rng.gen_bool(0.3);
    let sizes: Vec<usize> = if two {
        let a = rng.gen_range(1..max_total);
        let b = rng.gen_range(1..=(max_total - a).min(3));
        vec![a.min(4), b]
    } else {
        vec![rng.gen_range(1..=max_total.min(4))]
    };
    let sorts: Vec<String> = ["s", "t"][..sizes.len()].iter().map(|s| s.to_string()).collect();
    let mut ops = Vec::new();
    let mut tables = Vec::new();
    if rng.gen_bool(0.5) {
        let s = rng.gen_range(0..sizes.len());
        ops.push(OpDecl {
            name: "f".into(),
            args: vec![s],
            result: s,
        });
        tables.push(random_table(rng, sizes[s], sizes[s]));
    }
    if rng.gen_bool(0.3) {
        ops.push(OpDecl {
            name: "c".into(),
            args: vec![],
            result: 0,
        });
        tables.push(random_table(rng, 1, sizes[0]));
    }
    if sizes[0] <= 3 && rng.gen_bool(0.25) {
        ops.push(OpDecl {
            name: "m".into(),
            args: vec![0, 0],
            result: 0,
        });
        tables.push(random_table(rng, sizes[0] * sizes[0], sizes[0]));
    }
    if sizes.len() == 2 && rng.gen_bool(0.3) {
        ops.push(OpDecl {
            name: "g".into(),
            args: vec![1],
            result: 0,
        });
        tables.push(random_table(rng, sizes[1], sizes[0]));
    }
    let mut rels = vec![RelDecl {
        name: "P".into(),
        args: vec![0],
    }];
    if rng.gen_bool(0.6) {
        rels.push(RelDecl {
            name: "R".into(),
            args: vec![0, 0],
        });
    }
    if sizes.len() == 2 {
        rels.push(RelDecl {
            name: "I".into(),
            args: vec![0, 1],
        });
    }
    let sig = Signature {
        sorts,
        ops,
        rels,
        identities: vec![],
    };
    let carriers = sizes
        .iter()
        .enumerate()
        .map(|(s, &n)| (1..=n).map(|i| format!("{}{i}", ["a", "b"][s])).collect())
        .collect();
    Arc::new(FiniteAlgebra::new(Arc::new(sig), carriers, tables).expect("random algebra is valid"))
}

pub fn random_relations(rng: &mut TestRng, alg: &FiniteAlgebra) -> Vec<Vec<Vec<usize>>> {
    let sig = alg.signature();
    sig.rels
        .iter()
        .map(|r| {
            let radices: Vec<usize> = r.args.iter().map(|&s| alg.carrier_size(s)).collect();
            let density = [0.2, 0.4, 0.6][rng.gen_range(0..3)];
            random_tuples(rng, &radices, density)
        })
        .collect()
}

pub fn random_model(rng: &mut TestRng, max_total: usize) -> Model {
    let alg = random_algebra(rng, max_total);
    let tuples = random_relations(rng, &alg);
    Model::new(alg, tuples).expect("random model is valid")
}

/// A multi-model with `n` random instances over one random algebra.
pub fn random_multimodel(rng: &mut TestRng, max_total: usize, n: usize) -> MultiModel {
    let alg = random_algebra(rng, max_total);
    let instances = (0..n)
        .map(|i| Instance {
            name: format!("f{}", i + 1),
            model: Model::new(alg.clone(), random_relations(rng, &alg)).expect("valid"),
        })
        .collect();
    MultiModel::new(alg, instances).expect("valid")
}

/// A context of `1..=max_vars` variables named `x1, x2, ...` with random sorts.
pub fn random_context(rng: &mut TestRng, sig: &Signature, max_vars: usize) -> Context {
    let n = rng.gen_range(1..=max_vars);
    let sorts: Vec<usize> = (0..n).map(|_| rng.gen_range(0..sig.sorts.len())).collect();
    Context::numbered("x", &sorts)
}

pub fn random_term(rng: &mut TestRng, sig: &Signature, ctx: &Context, sort: usize, depth: usize) -> Option<Term> {
    let vars: Vec<&str> = ctx.iter().filter(|&(_, s)| s == sort).map(|(n, _)| n).collect();
    let ops: Vec<usize> = (0..sig.ops.len()).filter(|&o| sig.ops[o].result == sort).collect();
    let use_op = !ops.is_empty() && (vars.is_empty() || (depth > 0 && rng.gen_bool(0.35)));
    if use_op {
        let usable: Vec<usize> = ops
            .iter()
            .copied()
            .filter(|&o| depth > 0 || sig.ops[o].args.is_empty())
            .collect();
        let &o = usable.choose(rng)?;
        let args = sig.ops[o]
            .args
            .clone()
            .into_iter()
            .map(|s| random_term(rng, sig, ctx, s, depth.saturating_sub(1)))
            .collect::<Option<Vec<_>>>()?;
        return Some(Term::App(o, args));
    }
    vars.choose(rng).map(|v| Term::var(*v))
}

pub fn random_atom(rng: &mut TestRng, sig: &Signature, ctx: &Context) -> Formula {
    for _ in 0..8 {
        if rng.gen_bool(0.6) {
            let r = rng.gen_range(0..sig.rels.len());
            let args: Option<Vec<Term>> = sig.rels[r]
                .args
                .iter()
                .map(|&s| random_term(rng, sig, ctx, s, 1))
                .collect();
            if let Some(args) = args {
                return Formula::Rel(r, args);
            }
        } else {
            let s = rng.gen_range(0..sig.sorts.len());
            if let (Some(a), Some(b)) = (random_term(rng, sig, ctx, s, 1), random_term(rng, sig, ctx, s, 1)) {
                return Formula::eq(a, b);
            }
        }
    }
    if rng.gen_bool(0.5) {
        Formula::True
    } else {
        Formula::False
    }
}

pub fn random_formula(rng: &mut TestRng, sig: &Signature, ctx: &Context, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return random_atom(rng, sig, ctx);
    }
    match rng.gen_range(0..6) {
        0 => random_formula(rng, sig, ctx, depth - 1).not(),
        1 => random_formula(rng, sig, ctx, depth - 1).and(random_formula(rng, sig, ctx, depth - 1)),
        2 => random_formula(rng, sig, ctx, depth - 1).or(random_formula(rng, sig, ctx, depth - 1)),
        3 | 4 => {
            let x = ctx.name(rng.gen_range(0..ctx.len())).to_string();
            Formula::exists(x, random_formula(rng, sig, ctx, depth - 1))
        }
        _ => {
            let x = ctx.name(rng.gen_range(0..ctx.len())).to_string();
            Formula::forall(x, random_formula(rng, sig, ctx, depth - 1))
        }
    }
}

/// A random subset of the space of `template`.
pub fn random_set(rng: &mut TestRng, template: &PointSet) -> PointSet {
    let density = [0.1, 0.3, 0.5, 0.8][rng.gen_range(0..4)];
    PointSet::from_predicate(template.space(), |_| rng.gen_bool(density))
}

// ---------------------------------------------------------------------------
// Naive oracles
// ---------------------------------------------------------------------------

/// Every point of `G^X` in lexicographic order, first variable most significant.
pub fn naive_points(m: &Model, ctx: &Context) -> Vec<Vec<usize>> {
    let radices: Vec<usize> = ctx.iter().map(|(_, s)| m.algebra().carrier_size(s)).collect();
    all_tuples(&radices)
}

pub fn naive_term(m: &Model, ctx: &Context, env: &[usize], t: &Term) -> usize {
    match t {
        Term::Var(v) => env[ctx.index_of(v).expect("variable in context")],
        Term::App(o, args) => {
            let vals: Vec<usize> = args.iter().map(|a| naive_term(m, ctx, env, a)).collect();
            let radices = m.algebra().op_radices(*o);
            let mut idx = 0;
            for (v, r) in vals.iter().zip(radices) {
                idx = idx * r + v;
            }
            m.algebra().table(*o)[idx]
        }
    }
}

/// Tarskian satisfaction by direct recursion over the formula.
pub fn naive_holds(m: &Model, ctx: &Context, env: &mut Vec<usize>, f: &Formula) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Not(a) => !naive_holds(m, ctx, env, a),
        Formula::And(a, b) => naive_holds(m, ctx, env, a) && naive_holds(m, ctx, env, b),
        Formula::Or(a, b) => naive_holds(m, ctx, env, a) || naive_holds(m, ctx, env, b),
        Formula::Exists(x, body) => {
            let i = ctx.index_of(x).expect("bound variable in context");
            let saved = env[i];
            let mut found = false;
            for e in 0..m.algebra().carrier_size(ctx.sort(i)) {
                env[i] = e;
                if naive_holds(m, ctx, env, body) {
                    found = true;
                    break;
                }
            }
            env[i] = saved;
            found
        }
        Formula::Eq(l, r) => naive_term(m, ctx, env, l) == naive_term(m, ctx, env, r),
        Formula::Rel(r, args) => {
            let vals: Vec<usize> = args.iter().map(|a| naive_term(m, ctx, env, a)).collect();
            m.relation(*r).tuples().contains(&vals)
        }
    }
}

/// The solution set of `f` as a sorted list of points.
pub fn naive_val(m: &Model, ctx: &Context, f: &Formula) -> Vec<Vec<usize>> {
    naive_points(m, ctx)
        .into_iter()
        .filter(|p| naive_holds(m, ctx, &mut p.clone(), f))
        .collect()
}

pub fn points_of(set: &PointSet) -> Vec<Vec<usize>> {
    set.points().map(|a| a.0).collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// All sort-wise permutations preserving every operation table and relation,
/// found by trying every candidate.
pub fn naive_automorphisms(m: &Model) -> BTreeSet<Vec<Vec<usize>>> {
    let alg = m.algebra();
    let sig = alg.signature();
    let per_sort: Vec<Vec<Vec<usize>>> = (0..sig.sorts.len()).map(|s| permutations(alg.carrier_size(s))).collect();
    let choice_radices: Vec<usize> = per_sort.iter().map(Vec::len).collect();
    let mut out = BTreeSet::new();
    for pick in all_tuples(&choice_radices) {
        let maps: Vec<Vec<usize>> = pick.iter().enumerate().map(|(s, &k)| per_sort[s][k].clone()).collect();
        let ops_ok = sig.ops.iter().enumerate().all(|(o, decl)| {
            let radices = alg.op_radices(o);
            all_tuples(&radices).iter().enumerate().all(|(row, args)| {
                let moved: Vec<usize> = args.iter().zip(&decl.args).map(|(&e, &s)| maps[s][e]).collect();
                let mut idx = 0;
                for (v, r) in moved.iter().zip(&radices) {
                    idx = idx * r + v;
                }
                alg.table(o)[idx] == maps[decl.result][alg.table(o)[row]]
            })
        });
        let rels_ok = sig.rels.iter().enumerate().all(|(r, decl)| {
            let tuples = m.relation(r).tuples();
            tuples.iter().all(|t| {
                let moved: Vec<usize> = t.iter().zip(&decl.args).map(|(&e, &s)| maps[s][e]).collect();
                tuples.contains(&moved)
            })
        });
        if ops_ok && rels_ok {
            out.insert(maps);
        }
    }
    out
}

/// Orbit labels of the naive automorphism group acting on `G^X`, numbered by
/// first point in lexicographic order.
pub fn naive_orbit_labels(m: &Model, ctx: &Context) -> Vec<u32> {
    let group = naive_automorphisms(m);
    let points = naive_points(m, ctx);
    let index = |p: &[usize]| points.binary_search_by(|q| q.as_slice().cmp(p)).expect("point");
    let mut label = vec![u32::MAX; points.len()];
    let mut next = 0;
    for (i, p) in points.iter().enumerate() {
        if label[i] != u32::MAX {
            continue;
        }
        for g in &group {
            let moved: Vec<usize> = p.iter().zip(ctx.iter()).map(|(&e, (_, s))| g[s][e]).collect();
            label[index(&moved)] = next;
        }
        next += 1;
    }
    label
}

/// Contexts `x1..xn` listed sort by sort, for every count vector with
/// `|G^X| <= max_points` and at most `max_vars` variables.
pub fn contexts_up_to(m: &Model, max_points: usize, max_vars: usize) -> Vec<Context> {
    let sizes = m.algebra().carrier_sizes();
    let mut out = Vec::new();
    let mut counts = vec![0usize; sizes.len()];
    loop {
        let n: usize = counts.iter().sum();
        let points: u128 = counts
            .iter()
            .zip(&sizes)
            .map(|(&c, &s)| (s as u128).pow(c as u32))
            .product();
        if n >= 1 && n <= max_vars && points <= max_points as u128 {
            let sorts: Vec<usize> = counts.iter().enumerate().flat_map(|(s, &c)| std::iter::repeat(s).take(c)).collect();
            out.push(Context::numbered("x", &sorts));
        }
        let mut k = 0;
        loop {
            if k == counts.len() {
                return out;
            }
            counts[k] += 1;
            let n: usize = counts.iter().sum();
            let points: u128 = counts
                .iter()
                .zip(&sizes)
                .map(|(&c, &s)| (s as u128).pow(c as u32))
                .product();
            if n <= max_vars && points <= max_points as u128 {
                break;
            }
            counts[k] = 0;
            k += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

/// A random `s: W(X) -> W(Y)` with images of depth at most one, if every sort of
/// `X` has some term over `Y`.
pub fn random_substitution(
    rng: &mut TestRng,
    sig: &kbalg::algebra::Signature,
    x: &Context,
    y: &Context,
) -> Option<kbalg::algebra::Substitution> {
    let images = x
        .iter()
        .map(|(_, s)| random_term(rng, sig, y, s, 1))
        .collect::<Option<Vec<_>>>()?;
    Some(kbalg::algebra::Substitution::new(sig, x.clone(), y.clone(), images).expect("well-sorted"))
}

// ---------------------------------------------------------------------------
// CLI golden cases
// ---------------------------------------------------------------------------

pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the `kb` command line in-process with paths relative to the crate root.
pub fn run_cli(args: &[&str]) -> CliOutput {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kb").chain(args.iter().copied());
    let code = kbalg::cli::run(argv, &mut out, &mut err);
    CliOutput {
        code,
        stdout: String::from_utf8(out).expect("utf-8"),
        stderr: String::from_utf8(err).expect("utf-8"),
    }
}

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "eval_mp_pp",
        args: &["eval", "--model", "fixtures/mp.kbm", "--query", "fixtures/pp.kbq"],
        code: 0,
    },
    GoldenCase {
        name: "eval_mp_pp_machine",
        args: &["--machine", "eval", "--model", "fixtures/mp.kbm", "--query", "fixtures/pp.kbq"],
        code: 0,
    },
    GoldenCase {
        name: "eval_mp2_f2",
        args: &["eval", "--model", "fixtures/mp2.kbm", "--instance", "f2", "--query", "fixtures/pp.kbq"],
        code: 0,
    },
    GoldenCase {
        name: "entails_diagonal",
        args: &["entails", "--model", "fixtures/mp.kbm", "--query", "fixtures/pp.kbq", "--formula", "x == y"],
        code: 0,
    },
    GoldenCase {
        name: "entails_false",
        args: &["entails", "--model", "fixtures/mp2.kbm", "--instance", "f2", "--query", "fixtures/pp.kbq", "--formula", "x == y"],
        code: 1,
    },
    GoldenCase {
        name: "aut_m0",
        args: &["aut", "--model", "fixtures/m0.kbm"],
        code: 0,
    },
    GoldenCase {
        name: "aut_two_sorted_machine",
        args: &["aut", "--machine", "--model", "fixtures/two_sorted.kbm"],
        code: 0,
    },
    GoldenCase {
        name: "aut_z4succ",
        args: &["aut", "--model", "fixtures/z4succ.kbm"],
        code: 0,
    },
    GoldenCase {
        name: "orbits_path3",
        args: &["orbits", "--model", "fixtures/path3.kbm", "--vars", "x:s, y:s"],
        code: 0,
    },
    GoldenCase {
        name: "rf_z3",
        args: &["rf", "--model", "fixtures/z3.kbm", "--vars", "x:s, y:s"],
        code: 0,
    },
    GoldenCase {
        name: "rf_cycle4_seed1",
        args: &["rf", "--model", "fixtures/cycle4.kbm", "--vars", "x:s", "--aux", "1", "--seed-depth", "1"],
        code: 0,
    },
    GoldenCase {
        name: "equiv_mp_mq",
        args: &["equiv", "--left", "fixtures/mp.kbm", "--right", "fixtures/mq.kbm"],
        code: 0,
    },
    GoldenCase {
        name: "equiv_mp_m0",
        args: &["equiv", "--left", "fixtures/mp.kbm", "--right", "fixtures/m0.kbm"],
        code: 1,
    },
    GoldenCase {
        name: "equiv_mp_relabeled",
        args: &["equiv", "--left", "fixtures/mp.kbm", "--right", "fixtures/mp_relabeled.kbm"],
        code: 0,
    },
    GoldenCase {
        name: "equiv_multi_synthesize",
        args: &["equiv", "--left", "fixtures/mp2.kbm", "--right", "fixtures/mq2.kbm", "--synthesize"],
        code: 0,
    },
    GoldenCase {
        name: "verify_pq",
        args: &["verify-witness", "--left", "fixtures/mp.kbm", "--right", "fixtures/mq.kbm", "--witness", "fixtures/pq.kbw"],
        code: 0,
    },
    GoldenCase {
        name: "verify_pq_corrupt_machine",
        args: &["--machine", "verify-witness", "--left", "fixtures/mp.kbm", "--right", "fixtures/mq.kbm", "--witness", "fixtures/pq_corrupt.kbw"],
        code: 1,
    },
    GoldenCase {
        name: "verify_multi_probes",
        args: &[
            "verify-witness", "--left", "fixtures/mp2.kbm", "--right", "fixtures/mq2.kbm", "--witness",
            "fixtures/pq2.kbw", "--probes", "fixtures/p_probes.kbq", "--probes-right", "fixtures/q_probes.kbq",
        ],
        code: 0,
    },
    GoldenCase {
        name: "closure_mp",
        args: &["closure", "--model", "fixtures/mp.kbm", "--query", "fixtures/pp.kbq", "--probes", "fixtures/p_probes.kbq"],
        code: 0,
    },
    GoldenCase {
        name: "error_bad_model",
        args: &["aut", "--model", "fixtures/bad_model.kbm"],
        code: 2,
    },
    GoldenCase {
        name: "error_bad_witness",
        args: &["verify-witness", "--left", "fixtures/mp.kbm", "--right", "fixtures/mq.kbm", "--witness", "fixtures/bad_delta.kbw"],
        code: 2,
    },
];

pub fn golden_path(name: &str, ext: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join("golden")
        .join(format!("{name}.{ext}"))
}

/// Expected stdout and stderr; a missing `.err` file means empty stderr.
pub fn golden_expected(name: &str) -> (String, String) {
    let out = std::fs::read_to_string(golden_path(name, "out")).unwrap_or_else(|e| panic!("{name}.out: {e}"));
    let err = std::fs::read_to_string(golden_path(name, "err")).unwrap_or_default();
    (out, err)
}
