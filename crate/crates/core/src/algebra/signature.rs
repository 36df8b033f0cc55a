use std::collections::HashSet;

use super::syntax::{Context, Term};

pub type SortId = usize;
pub type OpId = usize;
pub type RelId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub name: String,
    pub args: Vec<SortId>,
    pub result: SortId,
}

impl OpDecl {
    pub fn is_constant(&self) -> bool {
        self.args.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelDecl {
    pub name: String,
    pub args: Vec<SortId>,
}

/// An equation `lhs == rhs` required to hold under every assignment of `context`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub context: Context,
    pub lhs: Term,
    pub rhs: Term,
}

/// Sorts, operation symbols, relation symbols and the optional identities of a variety.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature {
    pub sorts: Vec<String>,
    pub ops: Vec<OpDecl>,
    pub rels: Vec<RelDecl>,
    pub identities: Vec<Identity>,
}

impl Signature {
    pub fn sort_id(&self, name: &str) -> Option<SortId> {
        self.sorts.iter().position(|s| s == name)
    }

    pub fn op_id(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name)
    }

    pub fn rel_id(&self, name: &str) -> Option<RelId> {
        self.rels.iter().position(|r| r.name == name)
    }

    pub fn sort_name(&self, sort: SortId) -> &str {
        &self.sorts[sort]
    }

    /// Checks the structural invariants: unique names per kind, declared sorts,
    /// relation arity at least one, well-sorted identities.
    pub fn validate(&self) -> Result<(), String> {
        fn unique<'a>(kind: &str, names: impl Iterator<Item = &'a str>) -> Result<(), String> {
            let mut seen = HashSet::new();
            for n in names {
                if !seen.insert(n) {
                    return Err(format!("duplicate {kind} name `{n}`"));
                }
            }
            Ok(())
        }
        unique("sort", self.sorts.iter().map(String::as_str))?;
        unique("operation", self.ops.iter().map(|o| o.name.as_str()))?;
        unique("relation", self.rels.iter().map(|r| r.name.as_str()))?;
        let n = self.sorts.len();
        for op in &self.ops {
            if op.result >= n || op.args.iter().any(|&s| s >= n) {
                return Err(format!("operation `{}` uses an undeclared sort", op.name));
            }
        }
        for rel in &self.rels {
            if rel.args.is_empty() {
                return Err(format!("relation `{}` must have arity at least 1", rel.name));
            }
            if rel.args.iter().any(|&s| s >= n) {
                return Err(format!("relation `{}` uses an undeclared sort", rel.name));
            }
        }
        for id in &self.identities {
            let l = id.lhs.sort(self, &id.context)?;
            let r = id.rhs.sort(self, &id.context)?;
            if l != r {
                return Err("identity sides have different sorts".to_string());
            }
        }
        Ok(())
    }

    /// True when both signatures agree on sorts and operation symbols (relations may differ).
    pub fn same_operations(&self, other: &Signature) -> bool {
        self.sorts == other.sorts && self.ops == other.ops
    }

    /// Describes the first difference in sorts or operations, if any.
    pub fn operations_mismatch(&self, other: &Signature) -> Option<String> {
        if self.sorts != other.sorts {
            return Some(format!(
                "sorts [{}] vs [{}]",
                self.sorts.join(", "),
                other.sorts.join(", ")
            ));
        }
        if self.ops.len() != other.ops.len() {
            return Some(format!(
                "{} operations vs {}",
                self.ops.len(),
                other.ops.len()
            ));
        }
        for (a, b) in self.ops.iter().zip(&other.ops) {
            if a != b {
                return Some(format!("operation `{}` vs `{}`", a.name, b.name));
            }
        }
        None
    }
}
