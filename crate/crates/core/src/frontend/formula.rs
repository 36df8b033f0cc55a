//! Recursive descent parser for formulas.
//!
//! ```text
//! formula := or
//! or      := and { 'or' and }
//! and     := unary { 'and' unary }
//! unary   := 'not' unary | ('exists' | 'forall') VAR '.' formula | primary
//! primary := 'true' | 'false' | '(' formula ')' | REL '(' term {',' term} ')' | term '==' term
//! term    := VAR | OP '(' term {',' term} ')' | CONST
//! ```

use super::lexer::{tokenize, Cursor, Token, TokenKind};
use crate::algebra::{Context, Signature, SortId, Term};
use crate::error::{Result, SourceDiagnostic};
use crate::formula::Formula;

pub const KEYWORDS: &[&str] = &["true", "false", "not", "and", "or", "exists", "forall"];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses a formula string against a signature and a context.
pub fn parse_formula(text: &str, sig: &Signature, ctx: &Context) -> Result<Formula> {
    parse_formula_in(text, "<formula>", 1, sig, ctx)
}

/// Like [`parse_formula`], with diagnostics attributed to `file` starting at `line`.
pub fn parse_formula_in(text: &str, file: &str, line: usize, sig: &Signature, ctx: &Context) -> Result<Formula> {
    let toks = tokenize(text, file, line)?;
    let end = end_position(text, line);
    let mut cur = Cursor::new(&toks, file, end);
    let f = FormulaParser::new(sig, ctx).formula(&mut cur)?;
    cur.expect_end()?;
    Ok(f)
}

/// Parses a single term of the given context.
pub fn parse_term(text: &str, sig: &Signature, ctx: &Context) -> Result<Term> {
    let toks = tokenize(text, "<term>", 1)?;
    let mut cur = Cursor::new(&toks, "<term>", end_position(text, 1));
    let (t, _) = FormulaParser::new(sig, ctx).term(&mut cur)?;
    cur.expect_end()?;
    Ok(t)
}

pub(crate) fn end_position(text: &str, first_line: usize) -> (usize, usize) {
    let lines: Vec<&str> = text.split('\n').collect();
    let last = lines.last().copied().unwrap_or("");
    (first_line + lines.len() - 1, last.chars().count() + 1)
}

pub(crate) struct FormulaParser<'s> {
    sig: &'s Signature,
    ctx: &'s Context,
}

impl<'s> FormulaParser<'s> {
    pub(crate) fn new(sig: &'s Signature, ctx: &'s Context) -> Self {
        FormulaParser { sig, ctx }
    }

    pub(crate) fn formula(&self, cur: &mut Cursor<'_>) -> Result<Formula, SourceDiagnostic> {
        let mut left = self.conjunction(cur)?;
        while cur.eat_keyword("or") {
            let right = self.conjunction(cur)?;
            left = left.or(right);
        }
        Ok(left)
    }

    fn conjunction(&self, cur: &mut Cursor<'_>) -> Result<Formula, SourceDiagnostic> {
        let mut left = self.unary(cur)?;
        while cur.eat_keyword("and") {
            let right = self.unary(cur)?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn unary(&self, cur: &mut Cursor<'_>) -> Result<Formula, SourceDiagnostic> {
        if cur.eat_keyword("not") {
            return Ok(self.unary(cur)?.not());
        }
        let universal = match cur.peek() {
            Some(t) if t.is_keyword("exists") => false,
            Some(t) if t.is_keyword("forall") => true,
            _ => return self.primary(cur),
        };
        cur.next();
        let (var, tok) = cur.expect_ident("a bound variable")?;
        if is_keyword(var) {
            return Err(cur.error_at(tok, format!("keyword `{var}` cannot be a variable")));
        }
        if !self.ctx.contains(var) {
            return Err(cur.error_at(
                tok,
                format!("bound variable `{var}` is not declared in the context"),
            ));
        }
        cur.expect(&TokenKind::Dot)?;
        let body = self.formula(cur)?;
        Ok(if universal {
            Formula::forall(var, body)
        } else {
            Formula::exists(var, body)
        })
    }

    fn primary(&self, cur: &mut Cursor<'_>) -> Result<Formula, SourceDiagnostic> {
        let tok = match cur.peek() {
            Some(t) => t,
            None => return Err(cur.error_here("expected a formula, found end of input")),
        };
        match &tok.kind {
            TokenKind::LParen => {
                cur.next();
                let f = self.formula(cur)?;
                cur.expect(&TokenKind::RParen)?;
                Ok(f)
            }
            TokenKind::Ident(s) if s == "true" => {
                cur.next();
                Ok(Formula::True)
            }
            TokenKind::Ident(s) if s == "false" => {
                cur.next();
                Ok(Formula::False)
            }
            TokenKind::Ident(s) if is_keyword(s) => {
                Err(cur.error_at(tok, format!("unexpected keyword `{s}`")))
            }
            TokenKind::Ident(name) => {
                let is_call = matches!(cur.peek_at(1).map(|t| &t.kind), Some(TokenKind::LParen));
                if is_call {
                    if let Some(r) = self.sig.rel_id(name) {
                        cur.next();
                        let args = self.arguments(cur, tok, name, &self.sig.rels[r].args)?;
                        return Ok(Formula::Rel(r, args));
                    }
                }
                let (l, lsort) = self.term(cur)?;
                let eq_tok = match cur.peek() {
                    Some(t) if t.kind == TokenKind::EqEq => t,
                    _ => return Err(cur.error_here("expected `==` after a term")),
                };
                cur.next();
                let (r, rsort) = self.term(cur)?;
                if lsort != rsort {
                    return Err(cur.error_at(
                        eq_tok,
                        format!(
                            "sort mismatch: `==` between {} and {}",
                            self.sig.sort_name(lsort),
                            self.sig.sort_name(rsort)
                        ),
                    ));
                }
                Ok(Formula::Eq(l, r))
            }
            k => Err(cur.error_at(tok, format!("expected a formula, found {k}"))),
        }
    }

    /// Parses `'(' term {',' term} ')'` and checks it against `sorts`.
    fn arguments(
        &self,
        cur: &mut Cursor<'_>,
        head: &Token,
        name: &str,
        sorts: &[SortId],
    ) -> Result<Vec<Term>, SourceDiagnostic> {
        cur.expect(&TokenKind::LParen)?;
        let mut args: Vec<(Term, SortId, &Token)> = Vec::new();
        if !cur.eat(&TokenKind::RParen) {
            loop {
                let start = match cur.peek() {
                    Some(t) => t,
                    None => return Err(cur.error_here("expected a term, found end of input")),
                };
                let (t, s) = self.term(cur)?;
                args.push((t, s, start));
                if cur.eat(&TokenKind::Comma) {
                    continue;
                }
                cur.expect(&TokenKind::RParen)?;
                break;
            }
        }
        if args.len() != sorts.len() {
            return Err(cur.error_at(
                head,
                format!(
                    "arity mismatch: `{name}` takes {} arguments, got {}",
                    sorts.len(),
                    args.len()
                ),
            ));
        }
        for ((_, got, tok), &want) in args.iter().zip(sorts) {
            if *got != want {
                return Err(cur.error_at(
                    tok,
                    format!(
                        "sort mismatch: argument of `{name}` has sort {}, expected {}",
                        self.sig.sort_name(*got),
                        self.sig.sort_name(want)
                    ),
                ));
            }
        }
        Ok(args.into_iter().map(|(t, _, _)| t).collect())
    }

    pub(crate) fn term(&self, cur: &mut Cursor<'_>) -> Result<(Term, SortId), SourceDiagnostic> {
        let (name, tok) = cur.expect_ident("a term")?;
        if is_keyword(name) {
            return Err(cur.error_at(tok, format!("unexpected keyword `{name}`")));
        }
        let is_call = matches!(cur.peek().map(|t| &t.kind), Some(TokenKind::LParen));
        if is_call {
            let op = match self.sig.op_id(name) {
                Some(op) => op,
                None if self.sig.rel_id(name).is_some() => {
                    return Err(cur.error_at(tok, format!("relation `{name}` used as a term")))
                }
                None => return Err(cur.error_at(tok, format!("unknown operation `{name}`"))),
            };
            let decl = &self.sig.ops[op];
            let args = self.arguments(cur, tok, name, &decl.args)?;
            return Ok((Term::App(op, args), decl.result));
        }
        if let Some(sort) = self.ctx.sort_of(name) {
            return Ok((Term::var(name), sort));
        }
        if let Some(op) = self.sig.op_id(name) {
            let decl = &self.sig.ops[op];
            if !decl.is_constant() {
                return Err(cur.error_at(
                    tok,
                    format!(
                        "arity mismatch: `{name}` takes {} arguments, got 0",
                        decl.args.len()
                    ),
                ));
            }
            return Ok((Term::App(op, Vec::new()), decl.result));
        }
        Err(cur.error_at(tok, format!("unknown symbol `{name}`")))
    }
}
