use std::collections::HashSet;

use rustc_hash::FxHashMap;
use std::sync::Arc;

use super::partition::Partition;
use crate::algebra::{all_tuples, odometer_step, CompiledTerm, Context, Model, PointSpace, SortId, Term};
use crate::config::{Limits, DEFAULT_SEED_DEPTH};
use crate::error::{Error, Result};
use crate::semantics::PointSet;

/// Where auxiliary variables go when the extended context is mapped back down.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Retraction {
    /// Each auxiliary variable becomes the first context variable of its sort.
    #[default]
    First,
    /// Each auxiliary variable becomes the last context variable of its sort.
    Last,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationConfig {
    /// Fresh variables added per sort before closing under quantifiers.
    pub aux: usize,
    /// Maximum term depth in seed atoms; 1 means variables and constants only.
    pub seed_depth: usize,
    pub retraction: Retraction,
    pub limits: Limits,
}

impl GenerationConfig {
    pub fn new(aux: usize) -> Self {
        GenerationConfig {
            aux,
            seed_depth: DEFAULT_SEED_DEPTH,
            retraction: Retraction::First,
            limits: Limits::default(),
        }
    }
}

/// The default auxiliary budget: the total carrier size of the model.
pub fn default_aux(m: &Model) -> usize {
    m.algebra().total_size()
}

/// A finite Boolean algebra of definable subsets of `G^X`, closed under the
/// cylindrifications of `X`, represented by its atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinableAlgebra {
    atoms: Partition,
}

impl DefinableAlgebra {
    pub fn from_atoms(atoms: Partition) -> Self {
        DefinableAlgebra { atoms }
    }

    pub fn context(&self) -> &Context {
        self.atoms.space().context()
    }

    pub fn space(&self) -> &Arc<PointSpace> {
        self.atoms.space()
    }

    pub fn atoms(&self) -> &Partition {
        &self.atoms
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// `2^atoms`, or `None` if that does not fit in 128 bits.
    pub fn size(&self) -> Option<u128> {
        1u128.checked_shl(self.atoms.len() as u32)
    }

    /// Membership: a set is an element iff it is a union of atoms.
    pub fn contains(&self, set: &PointSet) -> bool {
        **set.space() == **self.space() && self.atoms.saturates(set)
    }

    /// True iff every element of `self` is an element of `other`.
    pub fn is_subalgebra_of(&self, other: &DefinableAlgebra) -> bool {
        other.atoms.refines(&self.atoms)
    }

    /// The union of the atoms selected by the bits of `mask`.
    pub fn element(&self, mask: &[bool]) -> PointSet {
        let labels = self.atoms.labels();
        PointSet::from_predicate(self.space(), |i| mask[labels[i] as usize])
    }

    /// Every element, ordered by the binary number of its atom mask (atom 0 lowest).
    pub fn elements(&self, max_elements: usize) -> Result<Vec<PointSet>> {
        let k = self.atoms.len();
        let size = self.size().unwrap_or(u128::MAX);
        if size > max_elements as u128 {
            return Err(Error::SizeLimit {
                what: "definable algebra".into(),
                size,
                cap: max_elements as u128,
            });
        }
        Ok((0..size as usize)
            .map(|bits| {
                let mask: Vec<bool> = (0..k).map(|a| bits >> a & 1 == 1).collect();
                self.element(&mask)
            })
            .collect())
    }
}

/// `R_f` at `X` with `aux` auxiliary variables per sort, under default settings.
pub fn generate_definable_algebra(m: &Model, ctx: &Context, aux: usize) -> Result<DefinableAlgebra> {
    generate_with(m, ctx, &GenerationConfig::new(aux))
}

/// Builds the algebra generated by the atomic formulas over `X⁺` (the context plus
/// `aux` fresh variables of each sort) under Boolean operations and `∃x`, `x ∈ X⁺`,
/// then maps it down to `X` along a retraction `X⁺ -> X` and closes again under
/// Boolean operations and `∃x`, `x ∈ X`.
///
/// The closure is computed on atoms: a partition of `G^{X⁺}` is refined until every
/// block has a uniform set of blocks in each of its cylinder fibers. The coarsest
/// such refinement of the atomic seed is exactly the atom set of the closure.
pub fn generate_with(m: &Model, ctx: &Context, cfg: &GenerationConfig) -> Result<DefinableAlgebra> {
    let alg = m.algebra_arc();
    let sig = alg.signature();
    let mut ext = ctx.clone();
    for s in 0..sig.sorts.len() {
        for _ in 0..cfg.aux {
            let name = ext.fresh_name(&format!("_{}", sig.sort_name(s)));
            ext.push(name, s)?;
        }
    }
    let big = Arc::new(PointSpace::new(alg.clone(), ext.clone(), cfg.limits.max_points)?);
    let small = Arc::new(PointSpace::new(alg.clone(), ctx.clone(), cfg.limits.max_points)?);
    if big.len() > u32::MAX as usize {
        return Err(Error::SizeLimit {
            what: "extended point space".into(),
            size: big.len() as u128,
            cap: u32::MAX as u128,
        });
    }
    let mut budget = cfg.limits.max_iterations;

    let seed = seed_keys(m, &big, cfg.seed_depth);
    let all_vars: Vec<usize> = (0..ext.len()).collect();
    let labels = refine(&big, seed, &all_vars, &mut budget, cfg.limits.max_iterations)?;

    // Sorts with no context variable: keep only sets that do not depend on their
    // auxiliary coordinates, by merging blocks connected along those coordinates.
    let orphan: Vec<usize> = (ctx.len()..ext.len())
        .filter(|&i| !ctx.iter().any(|(_, s)| s == ext.sort(i)))
        .collect();
    let labels = if orphan.is_empty() {
        labels
    } else {
        merge_along(&big, labels, &orphan)
    };

    let retract: Vec<Option<usize>> = (0..ext.len())
        .map(|i| {
            if i < ctx.len() {
                return Some(i);
            }
            let s = ext.sort(i);
            let mut same = (0..ctx.len()).filter(|&j| ctx.sort(j) == s);
            match cfg.retraction {
                Retraction::First => same.next(),
                Retraction::Last => same.last(),
            }
        })
        .collect();
    let mut down = Vec::with_capacity(small.len());
    let mut nu = vec![0; ctx.len()];
    let mut lifted = vec![0; ext.len()];
    for _ in 0..small.len() {
        for (k, r) in retract.iter().enumerate() {
            lifted[k] = r.map_or(0, |j| nu[j]);
        }
        down.push(labels[big.index(&lifted)]);
        odometer_step(small.radices(), &mut nu);
    }
    let ctx_vars: Vec<usize> = (0..ctx.len()).collect();
    let labels = refine(&small, down, &ctx_vars, &mut budget, cfg.limits.max_iterations)?;
    Ok(DefinableAlgebra::from_atoms(Partition::from_keys(&small, labels)))
}

/// Terms over `ctx` of depth at most `depth`, grouped by sort, without duplicates.
fn seed_terms(m: &Model, ctx: &Context, depth: usize) -> Vec<(SortId, Term)> {
    let sig = m.signature();
    let mut terms: Vec<(SortId, Term)> = ctx.iter().map(|(n, s)| (s, Term::var(n))).collect();
    if depth == 0 {
        return terms;
    }
    for (op, decl) in sig.ops.iter().enumerate() {
        if decl.is_constant() {
            terms.push((decl.result, Term::App(op, vec![])));
        }
    }
    let mut seen: HashSet<Term> = terms.iter().map(|(_, t)| t.clone()).collect();
    for _ in 1..depth {
        let prev = terms.clone();
        for (op, decl) in sig.ops.iter().enumerate() {
            if decl.is_constant() {
                continue;
            }
            let choices: Vec<Vec<&Term>> = decl
                .args
                .iter()
                .map(|&s| prev.iter().filter(|(ts, _)| *ts == s).map(|(_, t)| t).collect())
                .collect();
            let radices: Vec<usize> = choices.iter().map(Vec::len).collect();
            for pick in all_tuples(&radices) {
                let args = pick.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect();
                let t = Term::App(op, args);
                if seen.insert(t.clone()) {
                    terms.push((decl.result, t));
                }
            }
        }
    }
    terms
}

/// Per-point seed labels: points get the same label iff they satisfy the same
/// equalities between seed terms and the same relation atoms on seed terms.
///
/// Values of the seed terms are replaced by first-occurrence class numbers per sort;
/// relation atoms then only depend on which class tuples are members.
fn seed_keys(m: &Model, space: &Arc<PointSpace>, depth: usize) -> Vec<u32> {
    let alg = m.algebra();
    let sig = alg.signature();
    let terms = seed_terms(m, space.context(), depth);
    let compiled: Vec<(SortId, CompiledTerm)> = terms
        .iter()
        .map(|(s, t)| (*s, CompiledTerm::compile(t, space.context())))
        .collect();
    let sizes = alg.carrier_sizes();
    let mut class_of: Vec<Vec<u32>> = sizes.iter().map(|&n| vec![u32::MAX; n]).collect();
    let mut reps: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    let mut ids: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
    let mut out = Vec::with_capacity(space.len());
    let mut point = vec![0; space.context().len()];
    let mut key = Vec::new();
    let mut tuple = Vec::new();
    let mut radices: Vec<usize> = Vec::new();
    let mut digits: Vec<usize> = Vec::new();
    for _ in 0..space.len() {
        key.clear();
        for r in reps.iter_mut() {
            r.clear();
        }
        for c in class_of.iter_mut() {
            c.fill(u32::MAX);
        }
        for (s, t) in &compiled {
            let v = t.eval(alg, &point);
            if class_of[*s][v] == u32::MAX {
                class_of[*s][v] = reps[*s].len() as u32;
                reps[*s].push(v);
            }
            key.push(class_of[*s][v]);
        }
        for (r, decl) in sig.rels.iter().enumerate() {
            radices.clear();
            radices.extend(decl.args.iter().map(|&s| reps[s].len()));
            if radices.contains(&0) {
                continue;
            }
            let rel = m.relation(r);
            digits.clear();
            digits.resize(radices.len(), 0);
            loop {
                tuple.clear();
                tuple.extend(digits.iter().zip(&decl.args).map(|(&d, &s)| reps[s][d]));
                key.push(rel.contains(&tuple) as u32);
                if !odometer_step(&radices, &mut digits) {
                    break;
                }
            }
        }
        let id = match ids.get(&key) {
            Some(&id) => id,
            None => {
                let id = ids.len() as u32;
                ids.insert(key.clone(), id);
                id
            }
        };
        out.push(id);
        odometer_step(space.radices(), &mut point);
    }
    out
}

/// Coarsest refinement of `labels` in which every block meets, along each variable
/// in `vars`, a fixed set of blocks. Labels are renumbered by first point.
///
/// Each round buckets points by label and splits blocks by the fiber sets of their
/// points, comparing only points within one block. After the first round a block
/// is re-examined only if one of its fibers passes through a block that just split.
pub(crate) fn refine(
    space: &PointSpace,
    labels: Vec<u32>,
    vars: &[usize],
    budget: &mut usize,
    cap: usize,
) -> Result<Vec<u32>> {
    let mut labels = renumber(&labels);
    let mut count = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut dirty = vec![true; count];
    let mut sigs: Vec<u32> = Vec::new();
    let mut spans: Vec<(usize, usize, u32)> = Vec::new();
    loop {
        if *budget == 0 {
            return Err(Error::IterationCap(cap));
        }
        *budget -= 1;
        let (order, starts) = bucket(&labels, count);
        let mut next = vec![0u32; labels.len()];
        let mut fresh = 0u32;
        let mut split: Vec<u32> = Vec::new();
        for b in 0..count {
            let block = &order[starts[b]..starts[b + 1]];
            if block.len() == 1 || !dirty[b] {
                for &p in block {
                    next[p as usize] = fresh;
                }
                fresh += 1;
                continue;
            }
            sigs.clear();
            spans.clear();
            for &p in block {
                let from = sigs.len();
                signature(space, &labels, p as usize, vars, &mut sigs);
                spans.push((from, sigs.len(), p));
            }
            spans.sort_unstable_by(|a, b| sigs[a.0..a.1].cmp(&sigs[b.0..b.1]));
            let first = fresh;
            for (k, &(from, to, p)) in spans.iter().enumerate() {
                if k > 0 {
                    let (f0, t0, _) = spans[k - 1];
                    if sigs[f0..t0] != sigs[from..to] {
                        fresh += 1;
                    }
                }
                next[p as usize] = fresh;
            }
            if fresh > first {
                split.extend_from_slice(block);
            }
            fresh += 1;
        }
        labels = renumber(&next);
        if fresh as usize == count {
            return Ok(labels);
        }
        count = fresh as usize;
        dirty = vec![false; count];
        for &q in &split {
            let q = q as usize;
            for &v in vars {
                let stride = space.strides()[v];
                let base = q - space.digit(q, v) * stride;
                for d in 0..space.radices()[v] {
                    dirty[labels[base + d * stride] as usize] = true;
                }
            }
        }
    }
}

/// Points grouped by label (counting sort): block `b` is `order[starts[b]..starts[b + 1]]`.
fn bucket(labels: &[u32], count: usize) -> (Vec<u32>, Vec<usize>) {
    let mut starts = vec![0usize; count + 1];
    for &l in labels {
        starts[l as usize + 1] += 1;
    }
    for b in 0..count {
        starts[b + 1] += starts[b];
    }
    let mut fill = starts.clone();
    let mut order = vec![0u32; labels.len()];
    for (p, &l) in labels.iter().enumerate() {
        order[fill[l as usize]] = p as u32;
        fill[l as usize] += 1;
    }
    (order, starts)
}

/// Appends, for each variable, the sorted set of labels along the fiber through `p`.
fn signature(space: &PointSpace, labels: &[u32], p: usize, vars: &[usize], out: &mut Vec<u32>) {
    for &v in vars {
        let stride = space.strides()[v];
        let base = p - space.digit(p, v) * stride;
        let from = out.len();
        out.extend((0..space.radices()[v]).map(|d| labels[base + d * stride]));
        out[from..].sort_unstable();
        let mut len = from;
        for k in from..out.len() {
            if k == from || out[k] != out[len - 1] {
                out[len] = out[k];
                len += 1;
            }
        }
        out.truncate(len);
        out.push(u32::MAX);
    }
}

/// Relabels by order of first occurrence.
fn renumber(labels: &[u32]) -> Vec<u32> {
    let n = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut map = vec![u32::MAX; n];
    let mut next = 0;
    labels
        .iter()
        .map(|&l| {
            if map[l as usize] == u32::MAX {
                map[l as usize] = next;
                next += 1;
            }
            map[l as usize]
        })
        .collect()
}

/// Merges blocks that are connected by changing only the coordinates in `vars`.
fn merge_along(space: &PointSpace, labels: Vec<u32>, vars: &[usize]) -> Vec<u32> {
    let n = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for p in 0..labels.len() {
        for &v in vars {
            let base = space.with_digit(p, v, 0);
            let (a, b) = (find(&mut parent, labels[p] as usize), find(&mut parent, labels[base] as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    labels
        .iter()
        .map(|&l| find(&mut parent, l as usize) as u32)
        .collect()
}
