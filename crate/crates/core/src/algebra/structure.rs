use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::signature::{OpId, RelId, Signature, SortId};
use super::syntax::{Assignment, Context, Term};
use crate::error::{Error, Result};

/// Index of an element inside the carrier of its sort.
pub type Elem = usize;

/// Mixed-radix index of `digits`, first digit most significant.
pub(crate) fn mixed_radix(radices: &[usize], digits: &[Elem]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

/// Advances `digits` as an odometer over `radices`; returns false after the last tuple.
pub(crate) fn odometer_step(radices: &[usize], digits: &mut [Elem]) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radices[i] {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// All tuples over `radices` in lexicographic order.
pub(crate) fn all_tuples(radices: &[usize]) -> Vec<Vec<Elem>> {
    let mut out = Vec::new();
    if radices.iter().any(|&r| r == 0) {
        return out;
    }
    let mut digits = vec![0; radices.len()];
    loop {
        out.push(digits.clone());
        if !odometer_step(radices, &mut digits) {
            break;
        }
    }
    out
}

/// A finite multi-sorted algebra with total operation tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    sig: Arc<Signature>,
    carriers: Vec<Vec<String>>,
    tables: Vec<Vec<Elem>>,
}

impl FiniteAlgebra {
    /// Validates carriers and tables; tables are flat, indexed by the mixed-radix
    /// encoding of the argument tuple.
    pub fn new(sig: Arc<Signature>, carriers: Vec<Vec<String>>, tables: Vec<Vec<Elem>>) -> Result<Self> {
        sig.validate().map_err(Error::InvalidModel)?;
        if carriers.len() != sig.sorts.len() {
            return Err(Error::InvalidModel(format!(
                "{} carriers for {} sorts",
                carriers.len(),
                sig.sorts.len()
            )));
        }
        for (s, c) in carriers.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidModel(format!(
                    "carrier of sort `{}` is empty",
                    sig.sorts[s]
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for e in c {
                if !seen.insert(e) {
                    return Err(Error::InvalidModel(format!(
                        "element `{e}` appears twice in carrier `{}`",
                        sig.sorts[s]
                    )));
                }
            }
        }
        if tables.len() != sig.ops.len() {
            return Err(Error::InvalidModel(format!(
                "{} tables for {} operations",
                tables.len(),
                sig.ops.len()
            )));
        }
        let alg = FiniteAlgebra {
            sig,
            carriers,
            tables,
        };
        for (op, table) in alg.tables.iter().enumerate() {
            let decl = &alg.sig.ops[op];
            let want: usize = decl.args.iter().map(|&s| alg.carriers[s].len()).product();
            if table.len() != want {
                return Err(Error::InvalidModel(format!(
                    "operation table for `{}` is not total",
                    decl.name
                )));
            }
            let bound = alg.carriers[decl.result].len();
            if table.iter().any(|&e| e >= bound) {
                return Err(Error::InvalidModel(format!(
                    "operation `{}` leaves its result carrier",
                    decl.name
                )));
            }
        }
        if let Some(msg) = alg.identity_violation() {
            return Err(Error::InvalidModel(msg));
        }
        Ok(alg)
    }

    /// First identity of the signature that fails under some assignment, if any.
    pub fn identity_violation(&self) -> Option<String> {
        for (k, id) in self.sig.identities.iter().enumerate() {
            let radices: Vec<usize> = id.context.iter().map(|(_, s)| self.carrier_size(s)).collect();
            let lhs = CompiledTerm::compile(&id.lhs, &id.context);
            let rhs = CompiledTerm::compile(&id.rhs, &id.context);
            for tuple in all_tuples(&radices) {
                if lhs.eval(self, &tuple) != rhs.eval(self, &tuple) {
                    let point: Vec<String> = id
                        .context
                        .iter()
                        .zip(&tuple)
                        .map(|((n, s), &e)| format!("{n}={}", self.elem_name(s, e)))
                        .collect();
                    return Some(format!(
                        "identity #{} `{} == {}` fails at {}",
                        k + 1,
                        id.lhs.display(&self.sig),
                        id.rhs.display(&self.sig),
                        point.join(" ")
                    ));
                }
            }
        }
        None
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn signature_arc(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn sort_count(&self) -> usize {
        self.carriers.len()
    }

    pub fn carrier(&self, sort: SortId) -> &[String] {
        &self.carriers[sort]
    }

    pub fn carrier_size(&self, sort: SortId) -> usize {
        self.carriers[sort].len()
    }

    pub fn carrier_sizes(&self) -> Vec<usize> {
        self.carriers.iter().map(Vec::len).collect()
    }

    /// Σ|G_i| over all sorts.
    pub fn total_size(&self) -> usize {
        self.carriers.iter().map(Vec::len).sum()
    }

    pub fn elem_name(&self, sort: SortId, e: Elem) -> &str {
        &self.carriers[sort][e]
    }

    pub fn elem_index(&self, sort: SortId, name: &str) -> Option<Elem> {
        self.carriers[sort].iter().position(|n| n == name)
    }

    pub fn table(&self, op: OpId) -> &[Elem] {
        &self.tables[op]
    }

    /// The value of operation `op` on `args`.
    pub fn apply(&self, op: OpId, args: &[Elem]) -> Elem {
        let decl = &self.sig.ops[op];
        let mut idx = 0;
        for (&a, &s) in args.iter().zip(&decl.args) {
            idx = idx * self.carriers[s].len() + a;
        }
        self.tables[op][idx]
    }

    /// Radices of the argument tuple of `op`.
    pub fn op_radices(&self, op: OpId) -> Vec<usize> {
        self.sig.ops[op]
            .args
            .iter()
            .map(|&s| self.carriers[s].len())
            .collect()
    }

    /// Same algebra up to relation symbols: equal sorts, operations, carriers and tables.
    pub fn same_structure(&self, other: &FiniteAlgebra) -> bool {
        self.sig.same_operations(&other.sig) && self.carriers == other.carriers && self.tables == other.tables
    }

    /// A copy of this algebra re-labelled under another signature with the same
    /// sorts and operations (typically differing only in relation symbols).
    pub fn with_signature(&self, sig: Arc<Signature>) -> Result<Self> {
        if let Some(m) = self.sig.operations_mismatch(&sig) {
            return Err(Error::SignatureMismatch(m));
        }
        Ok(FiniteAlgebra {
            sig,
            carriers: self.carriers.clone(),
            tables: self.tables.clone(),
        })
    }
}

/// Unique homomorphic extension of `mu` to the term `t`.
pub fn eval_term(t: &Term, ctx: &Context, mu: &Assignment, alg: &FiniteAlgebra) -> Result<Elem> {
    if mu.0.len() != ctx.len() {
        return Err(Error::Contract(format!(
            "assignment has {} values for a context of {} variables",
            mu.0.len(),
            ctx.len()
        )));
    }
    t.sort(alg.signature(), ctx).map_err(Error::Contract)?;
    Ok(CompiledTerm::compile(t, ctx).eval(alg, &mu.0))
}

/// A term with variables resolved to context positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum CompiledTerm {
    Var(usize),
    App(OpId, Vec<CompiledTerm>),
}

impl CompiledTerm {
    /// Panics if a variable is missing from `ctx`; callers sort-check first.
    pub(crate) fn compile(t: &Term, ctx: &Context) -> CompiledTerm {
        match t {
            Term::Var(v) => CompiledTerm::Var(
                ctx.index_of(v)
                    .unwrap_or_else(|| panic!("variable `{v}` not in context")),
            ),
            Term::App(op, args) => {
                CompiledTerm::App(*op, args.iter().map(|a| CompiledTerm::compile(a, ctx)).collect())
            }
        }
    }

    pub(crate) fn eval(&self, alg: &FiniteAlgebra, point: &[Elem]) -> Elem {
        match self {
            CompiledTerm::Var(i) => point[*i],
            CompiledTerm::App(op, args) => {
                let mut buf = [0usize; 8];
                if args.len() <= buf.len() {
                    for (slot, a) in buf.iter_mut().zip(args) {
                        *slot = a.eval(alg, point);
                    }
                    alg.apply(*op, &buf[..args.len()])
                } else {
                    let vals: Vec<Elem> = args.iter().map(|a| a.eval(alg, point)).collect();
                    alg.apply(*op, &vals)
                }
            }
        }
    }
}

/// The interpretation of one relation symbol: a dense membership table over the
/// product of its argument carriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    radices: Vec<usize>,
    bits: FixedBitSet,
}

impl Relation {
    pub fn empty(radices: Vec<usize>) -> Self {
        let n = radices.iter().product();
        Relation {
            radices,
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn arity(&self) -> usize {
        self.radices.len()
    }

    pub fn contains(&self, tuple: &[Elem]) -> bool {
        self.bits.contains(mixed_radix(&self.radices, tuple))
    }

    pub fn insert(&mut self, tuple: &[Elem]) {
        let i = mixed_radix(&self.radices, tuple);
        self.bits.insert(i);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Member tuples in lexicographic order of element indices.
    pub fn tuples(&self) -> Vec<Vec<Elem>> {
        self.bits
            .ones()
            .map(|mut i| {
                let mut t = vec![0; self.radices.len()];
                for k in (0..t.len()).rev() {
                    t[k] = i % self.radices[k];
                    i /= self.radices[k];
                }
                t
            })
            .collect()
    }
}

/// A model `(G, Φ, f)`: an algebra with an interpretation of every relation symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    algebra: Arc<FiniteAlgebra>,
    relations: Vec<Relation>,
}

impl Model {
    pub fn new(algebra: Arc<FiniteAlgebra>, tuples: Vec<Vec<Vec<Elem>>>) -> Result<Self> {
        let sig = algebra.signature();
        if tuples.len() != sig.rels.len() {
            return Err(Error::InvalidModel(format!(
                "{} relation interpretations for {} symbols",
                tuples.len(),
                sig.rels.len()
            )));
        }
        let mut relations = Vec::with_capacity(tuples.len());
        for (r, ts) in tuples.iter().enumerate() {
            let radices = algebra.rel_radices(r);
            let mut rel = Relation::empty(radices.clone());
            for t in ts {
                if t.len() != radices.len() || t.iter().zip(&radices).any(|(&e, &n)| e >= n) {
                    return Err(Error::InvalidModel(format!(
                        "tuple does not fit the type of relation `{}`",
                        sig.rels[r].name
                    )));
                }
                rel.insert(t);
            }
            relations.push(rel);
        }
        Ok(Model { algebra, relations })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn signature(&self) -> &Signature {
        self.algebra.signature()
    }

    pub fn relation(&self, r: RelId) -> &Relation {
        &self.relations[r]
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
}

impl FiniteAlgebra {
    pub fn rel_radices(&self, r: RelId) -> Vec<usize> {
        self.sig.rels[r]
            .args
            .iter()
            .map(|&s| self.carriers[s].len())
            .collect()
    }
}

/// A named instance of a multi-model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: String,
    pub model: Model,
}

/// `(G, Φ, F)`: one algebra, one relation vocabulary, several instances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiModel {
    algebra: Arc<FiniteAlgebra>,
    instances: Vec<Instance>,
}

impl MultiModel {
    pub fn new(algebra: Arc<FiniteAlgebra>, instances: Vec<Instance>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for inst in &instances {
            if !seen.insert(inst.name.as_str()) {
                return Err(Error::InvalidModel(format!(
                    "duplicate instance name `{}`",
                    inst.name
                )));
            }
            if !Arc::ptr_eq(inst.model.algebra_arc(), &algebra) && *inst.model.algebra() != *algebra {
                return Err(Error::InvalidModel(format!(
                    "instance `{}` does not share the multi-model's algebra",
                    inst.name
                )));
            }
        }
        Ok(MultiModel { algebra, instances })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn algebra_arc(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn signature(&self) -> &Signature {
        self.algebra.signature()
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn instance(&self, name: &str) -> Result<&Model> {
        self.instances
            .iter()
            .find(|i| i.name == name)
            .map(|i| &i.model)
            .ok_or_else(|| Error::UnknownInstance(name.to_string()))
    }
}
