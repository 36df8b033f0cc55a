use std::sync::Arc;

use crate::algebra::{all_tuples, Elem, FiniteAlgebra, Model, SortedBijection};
use crate::error::{Error, Result};

/// A constraint checked once every element it mentions has been assigned.
enum Check {
    /// `δ(ω(args)) = ω(δ args)`; cells are (sort, element) pairs.
    Row { op: usize, args: Vec<(usize, Elem)>, result: (usize, Elem) },
    /// `t ∈ R1 ⇔ δt ∈ R2`.
    Tuple { rel: usize, tuple: Vec<(usize, Elem)>, member: bool },
}

/// Depth-first enumeration of the sort-wise bijections `G1 -> G2` preserving every
/// operation (and, between models, every relation), in lexicographic order of
/// the image vectors. Elements are assigned sort by sort in declaration order and
/// each table row is checked as soon as its last element is fixed.
pub struct BijectionSearch<'a> {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    target_model: Option<&'a Model>,
    cells: Vec<(usize, Elem)>,
    offsets: Vec<usize>,
    checks: Vec<Vec<Check>>,
    assign: Vec<Elem>,
    used: Vec<Vec<bool>>,
    next: Vec<Elem>,
    depth: usize,
    resume: bool,
    done: bool,
}

impl<'a> BijectionSearch<'a> {
    fn build(
        source: Arc<FiniteAlgebra>,
        target: Arc<FiniteAlgebra>,
        models: Option<(&Model, &'a Model)>,
    ) -> Result<Self> {
        if let Some(m) = source.signature().operations_mismatch(target.signature()) {
            return Err(Error::SignatureMismatch(m));
        }
        if let Some((m1, m2)) = models {
            if m1.signature().rels != m2.signature().rels {
                return Err(Error::SignatureMismatch("relation symbols differ".into()));
            }
        }
        let sizes = source.carrier_sizes();
        let done = sizes != target.carrier_sizes();
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut cells = Vec::new();
        for (s, &n) in sizes.iter().enumerate() {
            offsets.push(cells.len());
            cells.extend((0..n).map(|e| (s, e)));
        }
        let pos = |(s, e): (usize, Elem)| offsets[s] + e;
        let mut checks: Vec<Vec<Check>> = (0..cells.len()).map(|_| Vec::new()).collect();
        if !done {
            let sig = source.signature();
            for (op, decl) in sig.ops.iter().enumerate() {
                for args in all_tuples(&source.op_radices(op)) {
                    let result = (decl.result, source.apply(op, &args));
                    let args: Vec<(usize, Elem)> = decl.args.iter().copied().zip(args).collect();
                    let last = args.iter().map(|&c| pos(c)).chain([pos(result)]).max().unwrap();
                    checks[last].push(Check::Row { op, args, result });
                }
            }
            if let Some((m1, _)) = models {
                for (rel, decl) in sig.rels.iter().enumerate() {
                    for t in all_tuples(&source.rel_radices(rel)) {
                        let member = m1.relation(rel).contains(&t);
                        let tuple: Vec<(usize, Elem)> = decl.args.iter().copied().zip(t).collect();
                        let last = tuple.iter().map(|&c| pos(c)).max().unwrap();
                        checks[last].push(Check::Tuple { rel, tuple, member });
                    }
                }
            }
        }
        let used = target.carrier_sizes().iter().map(|&n| vec![false; n]).collect();
        let n = cells.len();
        Ok(BijectionSearch {
            source,
            target,
            target_model: models.map(|(_, m2)| m2),
            cells,
            offsets,
            checks,
            assign: vec![0; n],
            used,
            next: vec![0; n],
            depth: 0,
            resume: false,
            done,
        })
    }

    fn image(&self, (s, e): (usize, Elem)) -> Elem {
        self.assign[self.offsets[s] + e]
    }

    fn consistent(&self, depth: usize) -> bool {
        self.checks[depth].iter().all(|c| match c {
            Check::Row { op, args, result } => {
                let mapped: Vec<Elem> = args.iter().map(|&c| self.image(c)).collect();
                self.target.apply(*op, &mapped) == self.image(*result)
            }
            Check::Tuple { rel, tuple, member } => {
                let mapped: Vec<Elem> = tuple.iter().map(|&c| self.image(c)).collect();
                let m2 = self.target_model.expect("tuple checks only exist between models");
                m2.relation(*rel).contains(&mapped) == *member
            }
        })
    }

    fn emit(&self) -> SortedBijection {
        let maps = self
            .offsets
            .iter()
            .enumerate()
            .map(|(s, &off)| self.assign[off..off + self.source.carrier_size(s)].to_vec())
            .collect();
        SortedBijection::trusted(self.source.clone(), self.target.clone(), maps)
    }
}

impl Iterator for BijectionSearch<'_> {
    type Item = SortedBijection;

    fn next(&mut self) -> Option<SortedBijection> {
        if self.done {
            return None;
        }
        let n = self.cells.len();
        if n == 0 {
            self.done = true;
            return Some(self.emit());
        }
        if self.resume {
            self.resume = false;
            self.depth = n - 1;
            let (s, _) = self.cells[self.depth];
            self.used[s][self.assign[self.depth]] = false;
        }
        loop {
            let (s, _) = self.cells[self.depth];
            let size = self.used[s].len();
            let mut placed = false;
            while self.next[self.depth] < size {
                let c = self.next[self.depth];
                self.next[self.depth] += 1;
                if self.used[s][c] {
                    continue;
                }
                self.assign[self.depth] = c;
                if self.consistent(self.depth) {
                    self.used[s][c] = true;
                    placed = true;
                    break;
                }
            }
            if placed {
                if self.depth + 1 == n {
                    self.resume = true;
                    return Some(self.emit());
                }
                self.depth += 1;
                self.next[self.depth] = 0;
            } else {
                if self.depth == 0 {
                    self.done = true;
                    return None;
                }
                self.depth -= 1;
                let (s, _) = self.cells[self.depth];
                self.used[s][self.assign[self.depth]] = false;
            }
        }
    }
}

/// Every isomorphism of algebras `G1 -> G2` (operations only; relations are ignored),
/// in canonical order. Empty when the carrier sizes differ.
pub fn algebra_isomorphisms(g1: &Arc<FiniteAlgebra>, g2: &Arc<FiniteAlgebra>) -> Result<BijectionSearch<'static>> {
    BijectionSearch::build(g1.clone(), g2.clone(), None)
}

/// Every isomorphism of models `m1 -> m2`: algebra isomorphisms that also carry each
/// relation of `m1` exactly onto the same-named relation of `m2`.
pub fn model_isomorphisms<'a>(m1: &Model, m2: &'a Model) -> Result<BijectionSearch<'a>> {
    BijectionSearch::build(m1.algebra_arc().clone(), m2.algebra_arc().clone(), Some((m1, m2)))
}
