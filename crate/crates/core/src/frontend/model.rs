//! The line-oriented `.kbm` model format.
//!
//! ```text
//! sorts: s, t
//! carrier s: e1 e2 e3
//! op add(s, s) -> s:
//!   e1 e1 = e1
//!   ...
//! identity x:s, y:s | add(x, y) == add(y, x)
//! rel P(s)
//! instance f1:
//!   P: (e1) (e2)
//! ```
//!
//! Declarations must precede their uses. Indented lines belong to the most recent
//! `op` or `instance` header.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use super::formula::{end_position, is_keyword, FormulaParser};
use super::lexer::{tokenize, Cursor, Token, TokenKind};
use crate::algebra::{
    all_tuples, Context, Elem, FiniteAlgebra, Identity, Instance, Model, MultiModel, OpDecl, RelDecl,
    Signature, SortId,
};
use crate::error::{Error, Result, SourceDiagnostic};
use crate::formula::Formula;

/// Parses model-file text; diagnostics name the file `<model>`.
pub fn parse_model(text: &str) -> Result<MultiModel> {
    parse_model_named(text, "<model>")
}

pub fn parse_model_named(text: &str, file: &str) -> Result<MultiModel> {
    ModelParser::new(file).run(text)
}

struct OpState {
    line: usize,
    column: usize,
    rows: HashMap<Vec<Elem>, Elem>,
}

struct InstanceState {
    name: String,
    rels: Vec<Option<Vec<Vec<Elem>>>>,
}

enum Block {
    None,
    Op(usize),
    Instance(usize),
}

struct ModelParser<'f> {
    file: &'f str,
    sig: Signature,
    sorts_line: Option<(usize, usize)>,
    carriers: Vec<Option<Vec<String>>>,
    ops: Vec<OpState>,
    identity_lines: Vec<usize>,
    instances: Vec<InstanceState>,
    block: Block,
}

impl<'f> ModelParser<'f> {
    fn new(file: &'f str) -> Self {
        ModelParser {
            file,
            sig: Signature::default(),
            sorts_line: None,
            carriers: Vec::new(),
            ops: Vec::new(),
            identity_lines: Vec::new(),
            instances: Vec::new(),
            block: Block::None,
        }
    }

    fn err(&self, line: usize, column: usize, msg: impl Into<String>) -> Error {
        Error::Syntax(SourceDiagnostic::error(self.file, line, column, msg))
    }

    fn run(mut self, text: &str) -> Result<MultiModel> {
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let toks = tokenize(raw, self.file, line)?;
            if toks.is_empty() {
                continue;
            }
            let indented = raw.starts_with([' ', '\t']);
            let mut cur = Cursor::new(&toks, self.file, end_position(raw, line));
            if indented {
                match self.block {
                    Block::Op(op) => self.op_row(op, &mut cur)?,
                    Block::Instance(inst) => self.instance_line(inst, &mut cur)?,
                    Block::None => {
                        return Err(self.err(line, toks[0].column, "unexpected indented line"))
                    }
                }
            } else {
                self.block = Block::None;
                self.declaration(&mut cur)?;
            }
        }
        self.finish()
    }

    fn declaration(&mut self, cur: &mut Cursor<'_>) -> Result<()> {
        let (kw, tok) = cur.expect_ident("a declaration keyword")?;
        if kw != "sorts" && self.sorts_line.is_none() {
            return Err(cur.error_at(tok, "the `sorts:` declaration must come first").into());
        }
        match kw {
            "sorts" => self.sorts(cur, tok),
            "carrier" => self.carrier(cur),
            "op" => self.op_header(cur),
            "identity" => self.identity(cur, tok),
            "rel" => self.rel(cur),
            "instance" => self.instance_header(cur),
            other => Err(cur.error_at(tok, format!("unknown declaration `{other}`")).into()),
        }
    }

    fn name(&self, cur: &mut Cursor<'_>, what: &str) -> Result<(String, Token)> {
        let (n, t) = cur.expect_ident(what)?;
        if is_keyword(n) {
            return Err(cur.error_at(t, format!("keyword `{n}` cannot be used as a name")).into());
        }
        Ok((n.to_string(), t.clone()))
    }

    fn sort_ref(&self, cur: &mut Cursor<'_>) -> Result<SortId> {
        let (n, t) = cur.expect_ident("a sort name")?;
        self.sig
            .sort_id(n)
            .ok_or_else(|| cur.error_at(t, format!("unknown sort `{n}`")).into())
    }

    fn sorts(&mut self, cur: &mut Cursor<'_>, kw: &Token) -> Result<()> {
        if self.sorts_line.is_some() {
            return Err(cur.error_at(kw, "duplicate `sorts:` declaration").into());
        }
        self.sorts_line = Some((kw.line, kw.column));
        cur.expect(&TokenKind::Colon)?;
        while !cur.at_end() {
            let (n, t) = self.name(cur, "a sort name")?;
            if self.sig.sort_id(&n).is_some() {
                return Err(cur.error_at(&t, format!("duplicate sort `{n}`")).into());
            }
            self.sig.sorts.push(n);
            self.carriers.push(None);
            if !cur.eat(&TokenKind::Comma) {
                break;
            }
        }
        cur.expect_end()?;
        Ok(())
    }

    fn carrier(&mut self, cur: &mut Cursor<'_>) -> Result<()> {
        let (n, tok) = cur.expect_ident("a sort name")?;
        let sort = self
            .sig
            .sort_id(n)
            .ok_or_else(|| cur.error_at(tok, format!("unknown sort `{n}`")))?;
        if self.carriers[sort].is_some() {
            return Err(cur.error_at(tok, format!("duplicate carrier for sort `{n}`")).into());
        }
        cur.expect(&TokenKind::Colon)?;
        let mut elems: Vec<String> = Vec::new();
        while let Some(t) = cur.next() {
            match t.ident() {
                Some(e) if !elems.iter().any(|x| x == e) => elems.push(e.to_string()),
                Some(e) => return Err(cur.error_at(t, format!("duplicate element `{e}`")).into()),
                None => return Err(cur.error_at(t, format!("expected an element, found {}", t.kind)).into()),
            }
        }
        if elems.is_empty() {
            return Err(cur.error_here("carriers must be nonempty").into());
        }
        self.carriers[sort] = Some(elems);
        Ok(())
    }

    fn sort_list(&self, cur: &mut Cursor<'_>) -> Result<Vec<SortId>> {
        cur.expect(&TokenKind::LParen)?;
        let mut out = Vec::new();
        if cur.eat(&TokenKind::RParen) {
            return Ok(out);
        }
        loop {
            out.push(self.sort_ref(cur)?);
            if cur.eat(&TokenKind::Comma) {
                continue;
            }
            cur.expect(&TokenKind::RParen)?;
            return Ok(out);
        }
    }

    fn declared_name(&self, n: &str) -> bool {
        self.sig.op_id(n).is_some() || self.sig.rel_id(n).is_some()
    }

    fn op_header(&mut self, cur: &mut Cursor<'_>) -> Result<()> {
        let (name, tok) = self.name(cur, "an operation name")?;
        if self.declared_name(&name) {
            return Err(cur.error_at(&tok, format!("duplicate name `{name}`")).into());
        }
        let args = self.sort_list(cur)?;
        cur.expect(&TokenKind::Arrow)?;
        let result = self.sort_ref(cur)?;
        cur.expect(&TokenKind::Colon)?;
        cur.expect_end()?;
        for &s in args.iter().chain(std::iter::once(&result)) {
            if self.carriers[s].is_none() {
                return Err(cur
                    .error_at(&tok, format!("sort `{}` has no carrier yet", self.sig.sorts[s]))
                    .into());
            }
        }
        self.sig.ops.push(OpDecl { name, args, result });
        self.ops.push(OpState {
            line: tok.line,
            column: tok.column,
            rows: HashMap::new(),
        });
        self.block = Block::Op(self.ops.len() - 1);
        Ok(())
    }

    fn element(&self, cur: &mut Cursor<'_>, sort: SortId) -> Result<Elem> {
        let (e, t) = cur.expect_ident("an element")?;
        let carrier = self.carriers[sort].as_ref().expect("checked at declaration");
        carrier.iter().position(|x| x == e).ok_or_else(|| {
            cur.error_at(
                t,
                format!("element `{e}` is not in the carrier of sort `{}`", self.sig.sorts[sort]),
            )
            .into()
        })
    }

    fn op_row(&mut self, op: usize, cur: &mut Cursor<'_>) -> Result<()> {
        let decl = self.sig.ops[op].clone();
        let first = cur.peek().cloned();
        let mut args = Vec::with_capacity(decl.args.len());
        for &s in &decl.args {
            if matches!(cur.peek().map(|t| &t.kind), Some(TokenKind::Eq)) {
                return Err(cur
                    .error_here(format!(
                        "row of `{}` has {} arguments, expected {}",
                        decl.name,
                        args.len(),
                        decl.args.len()
                    ))
                    .into());
            }
            args.push(self.element(cur, s)?);
        }
        if !matches!(cur.peek().map(|t| &t.kind), Some(TokenKind::Eq)) {
            return Err(cur
                .error_here(format!(
                    "row of `{}` must have {} arguments followed by `=`",
                    decl.name,
                    decl.args.len()
                ))
                .into());
        }
        cur.next();
        let value = self.element(cur, decl.result)?;
        cur.expect_end()?;
        let first = first.expect("row line has tokens");
        if self.ops[op].rows.insert(args, value).is_some() {
            return Err(cur
                .error_at(&first, format!("duplicate row for `{}`", decl.name))
                .into());
        }
        Ok(())
    }

    fn identity(&mut self, cur: &mut Cursor<'_>, kw: &Token) -> Result<()> {
        let mut ctx = Context::empty();
        if !matches!(cur.peek().map(|t| &t.kind), Some(TokenKind::Pipe)) {
            loop {
                let (v, t) = self.name(cur, "a variable")?;
                cur.expect(&TokenKind::Colon)?;
                let s = self.sort_ref(cur)?;
                ctx.push(v.clone(), s)
                    .map_err(|_| cur.error_at(&t, format!("variable `{v}` declared twice")))?;
                if !cur.eat(&TokenKind::Comma) {
                    break;
                }
            }
        }
        cur.expect(&TokenKind::Pipe)?;
        let at = cur.peek().cloned();
        let f = FormulaParser::new(&self.sig, &ctx).formula(cur)?;
        cur.expect_end()?;
        let (lhs, rhs) = match f {
            Formula::Eq(l, r) => (l, r),
            _ => {
                let t = at.unwrap_or_else(|| kw.clone());
                return Err(cur.error_at(&t, "an identity must be a single equation").into());
            }
        };
        self.sig.identities.push(Identity { context: ctx, lhs, rhs });
        self.identity_lines.push(kw.line);
        Ok(())
    }

    fn rel(&mut self, cur: &mut Cursor<'_>) -> Result<()> {
        let (name, tok) = self.name(cur, "a relation name")?;
        if self.declared_name(&name) {
            return Err(cur.error_at(&tok, format!("duplicate name `{name}`")).into());
        }
        let args = self.sort_list(cur)?;
        cur.expect_end()?;
        if args.is_empty() {
            return Err(cur.error_at(&tok, "relations must have arity at least 1").into());
        }
        for &s in &args {
            if self.carriers[s].is_none() {
                return Err(cur
                    .error_at(&tok, format!("sort `{}` has no carrier yet", self.sig.sorts[s]))
                    .into());
            }
        }
        if !self.instances.is_empty() {
            return Err(cur
                .error_at(&tok, "relations must be declared before the first instance")
                .into());
        }
        self.sig.rels.push(RelDecl { name, args });
        Ok(())
    }

    fn instance_header(&mut self, cur: &mut Cursor<'_>) -> Result<()> {
        let (name, tok) = self.name(cur, "an instance name")?;
        cur.expect(&TokenKind::Colon)?;
        cur.expect_end()?;
        if self.instances.iter().any(|i| i.name == name) {
            return Err(cur.error_at(&tok, format!("duplicate instance `{name}`")).into());
        }
        self.instances.push(InstanceState {
            name,
            rels: vec![None; self.sig.rels.len()],
        });
        self.block = Block::Instance(self.instances.len() - 1);
        Ok(())
    }

    fn instance_line(&mut self, inst: usize, cur: &mut Cursor<'_>) -> Result<()> {
        let (name, tok) = cur.expect_ident("a relation name")?;
        let r = self
            .sig
            .rel_id(name)
            .ok_or_else(|| cur.error_at(tok, format!("unknown relation `{name}`")))?;
        cur.expect(&TokenKind::Colon)?;
        let sorts = self.sig.rels[r].args.clone();
        let mut tuples: Vec<Vec<Elem>> = Vec::new();
        while let Some(open) = cur.peek() {
            cur.expect(&TokenKind::LParen)?;
            let mut tuple = Vec::new();
            loop {
                let t = match cur.peek() {
                    Some(t) => t,
                    None => return Err(cur.error_here("unterminated tuple").into()),
                };
                if tuple.len() >= sorts.len() {
                    return Err(cur
                        .error_at(
                            open,
                            format!(
                                "type-mismatched tuple: `{name}` takes {} elements",
                                sorts.len()
                            ),
                        )
                        .into());
                }
                let _ = t;
                tuple.push(self.element(cur, sorts[tuple.len()])?);
                if cur.eat(&TokenKind::Comma) {
                    continue;
                }
                cur.expect(&TokenKind::RParen)?;
                break;
            }
            if tuple.len() != sorts.len() {
                return Err(cur
                    .error_at(
                        open,
                        format!(
                            "type-mismatched tuple: `{name}` takes {} elements, got {}",
                            sorts.len(),
                            tuple.len()
                        ),
                    )
                    .into());
            }
            tuples.push(tuple);
        }
        let slot = &mut self.instances[inst].rels[r];
        if slot.is_some() {
            return Err(cur
                .error_at(tok, format!("relation `{name}` listed twice in this instance"))
                .into());
        }
        *slot = Some(tuples);
        Ok(())
    }

    fn finish(self) -> Result<MultiModel> {
        let (sl, sc) = match self.sorts_line {
            Some(p) => p,
            None => return Err(self.err(1, 1, "missing `sorts:` declaration")),
        };
        let mut carriers = Vec::with_capacity(self.carriers.len());
        for (s, c) in self.carriers.iter().enumerate() {
            match c {
                Some(c) => carriers.push(c.clone()),
                None => {
                    return Err(self.err(sl, sc, format!("sort `{}` has no carrier", self.sig.sorts[s])))
                }
            }
        }
        let mut tables = Vec::with_capacity(self.ops.len());
        for (op, state) in self.ops.iter().enumerate() {
            let decl = &self.sig.ops[op];
            let radices: Vec<usize> = decl.args.iter().map(|&s| carriers[s].len()).collect();
            let mut table = Vec::new();
            for args in all_tuples(&radices) {
                match state.rows.get(&args) {
                    Some(&v) => table.push(v),
                    None => {
                        let row: Vec<&str> = args
                            .iter()
                            .zip(&decl.args)
                            .map(|(&e, &s)| carriers[s][e].as_str())
                            .collect();
                        return Err(self.err(
                            state.line,
                            state.column,
                            format!(
                                "operation table not total: `{}` has no row for ({})",
                                decl.name,
                                row.join(", ")
                            ),
                        ));
                    }
                }
            }
            tables.push(table);
        }
        let mut bare = self.sig.clone();
        bare.identities.clear();
        let algebra = FiniteAlgebra::new(Arc::new(bare), carriers.clone(), tables.clone())?;
        for (k, id) in self.sig.identities.iter().enumerate() {
            let mut one = algebra.signature().clone();
            one.identities = vec![id.clone()];
            let probe = FiniteAlgebra::new(Arc::new(one), carriers.clone(), tables.clone());
            if let Err(Error::InvalidModel(msg)) = probe {
                return Err(self.err(self.identity_lines[k], 1, msg));
            }
        }
        let algebra = Arc::new(FiniteAlgebra::new(Arc::new(self.sig.clone()), carriers, tables)?);
        let mut instances = Vec::with_capacity(self.instances.len());
        for inst in self.instances {
            let tuples = inst.rels.into_iter().map(Option::unwrap_or_default).collect();
            let model = Model::new(algebra.clone(), tuples)?;
            instances.push(Instance {
                name: inst.name,
                model,
            });
        }
        MultiModel::new(algebra, instances)
    }
}

/// Canonical text of a multi-model: declaration order for sorts, operations,
/// relations and instances; rows and tuples in lexicographic element order.
pub fn print_model(mm: &MultiModel) -> String {
    let alg = mm.algebra();
    let sig = alg.signature();
    let mut out = String::new();
    let _ = writeln!(out, "sorts: {}", sig.sorts.join(", "));
    for (s, name) in sig.sorts.iter().enumerate() {
        let _ = writeln!(out, "carrier {name}: {}", alg.carrier(s).join(" "));
    }
    for (op, decl) in sig.ops.iter().enumerate() {
        let args: Vec<&str> = decl.args.iter().map(|&s| sig.sort_name(s)).collect();
        let _ = writeln!(
            out,
            "op {}({}) -> {}:",
            decl.name,
            args.join(", "),
            sig.sort_name(decl.result)
        );
        for (row, &value) in all_tuples(&alg.op_radices(op)).iter().zip(alg.table(op)) {
            let mut line = String::from(" ");
            for (&e, &s) in row.iter().zip(&decl.args) {
                line.push(' ');
                line.push_str(alg.elem_name(s, e));
            }
            let _ = writeln!(out, "{line} = {}", alg.elem_name(decl.result, value));
        }
    }
    for id in &sig.identities {
        let _ = writeln!(
            out,
            "identity {} | {} == {}",
            id.context.display(sig),
            id.lhs.display(sig),
            id.rhs.display(sig)
        );
    }
    for decl in &sig.rels {
        let args: Vec<&str> = decl.args.iter().map(|&s| sig.sort_name(s)).collect();
        let _ = writeln!(out, "rel {}({})", decl.name, args.join(", "));
    }
    for inst in mm.instances() {
        let _ = writeln!(out, "instance {}:", inst.name);
        for (r, decl) in sig.rels.iter().enumerate() {
            let mut line = format!("  {}:", decl.name);
            for t in inst.model.relation(r).tuples() {
                let elems: Vec<&str> = t
                    .iter()
                    .zip(&decl.args)
                    .map(|(&e, &s)| alg.elem_name(s, e))
                    .collect();
                let _ = write!(line, " ({})", elems.join(","));
            }
            let _ = writeln!(out, "{line}");
        }
    }
    out
}
