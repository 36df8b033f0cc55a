//! `.kbq` query files: a `vars` header followed by one formula per line.
//!
//! ```text
//! vars x:s, y:s;
//! P(x)
//! exists y. (P(y) and x == y)
//! ```

use super::formula::{end_position, is_keyword, parse_formula_in};
use super::lexer::{tokenize, Cursor, TokenKind};
use crate::algebra::{Context, Signature};
use crate::error::{Error, Result, SourceDiagnostic};
use crate::formula::Description;

/// Parses `x:s, y:t` (possibly empty) into a context.
pub fn parse_context(text: &str, sig: &Signature) -> Result<Context> {
    let toks = tokenize(text, "<vars>", 1)?;
    let mut cur = Cursor::new(&toks, "<vars>", end_position(text, 1));
    let ctx = context_list(&mut cur, sig)?;
    cur.expect_end()?;
    Ok(ctx)
}

pub(crate) fn context_list(cur: &mut Cursor<'_>, sig: &Signature) -> Result<Context, SourceDiagnostic> {
    let mut ctx = Context::empty();
    if cur.at_end() || matches!(cur.peek().map(|t| &t.kind), Some(TokenKind::Semicolon)) {
        return Ok(ctx);
    }
    loop {
        let (v, vt) = cur.expect_ident("a variable name")?;
        if is_keyword(v) {
            return Err(cur.error_at(vt, format!("keyword `{v}` cannot be a variable")));
        }
        cur.expect(&TokenKind::Colon)?;
        let (s, st) = cur.expect_ident("a sort name")?;
        let sort = sig
            .sort_id(s)
            .ok_or_else(|| cur.error_at(st, format!("unknown sort `{s}`")))?;
        if ctx.contains(v) {
            return Err(cur.error_at(vt, format!("variable `{v}` declared twice")));
        }
        ctx.push(v, sort).expect("name checked above");
        if !cur.eat(&TokenKind::Comma) {
            return Ok(ctx);
        }
    }
}

pub fn parse_query(text: &str, sig: &Signature) -> Result<Description> {
    parse_query_named(text, "<query>", sig)
}

pub fn parse_query_named(text: &str, file: &str, sig: &Signature) -> Result<Description> {
    let mut lines = text.lines().enumerate();
    let mut context = None;
    for (k, raw) in lines.by_ref() {
        let line = k + 1;
        let toks = tokenize(raw, file, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, file, end_position(raw, line));
        if !cur.eat_keyword("vars") {
            return Err(cur.error_here("a query file must start with `vars ...;`").into());
        }
        let ctx = context_list(&mut cur, sig)?;
        cur.expect(&TokenKind::Semicolon)?;
        cur.expect_end()?;
        context = Some(ctx);
        break;
    }
    let context = context.ok_or_else(|| {
        Error::Syntax(SourceDiagnostic::error(file, 1, 1, "missing `vars ...;` header"))
    })?;
    let mut formulas = Vec::new();
    for (k, raw) in lines {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        formulas.push(parse_formula_in(body, file, k + 1, sig, &context)?);
    }
    Ok(Description::new(context, formulas))
}

/// Canonical query-file text.
pub fn print_query(d: &Description, sig: &Signature) -> String {
    let mut out = format!("vars {};\n", d.context.display(sig));
    for f in &d.formulas {
        out.push_str(&f.display(sig).to_string());
        out.push('\n');
    }
    out
}

/// A probe file: several query blocks, each opened by its own `vars ...;` line.
pub fn parse_probes(text: &str, file: &str, sig: &Signature) -> Result<Vec<Description>> {
    let mut out: Vec<Description> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let toks = tokenize(body, file, line)?;
        let mut cur = Cursor::new(&toks, file, end_position(body, line));
        if cur.eat_keyword("vars") {
            let ctx = context_list(&mut cur, sig)?;
            cur.expect(&TokenKind::Semicolon)?;
            cur.expect_end()?;
            out.push(Description::new(ctx, Vec::new()));
            continue;
        }
        let Some(current) = out.last_mut() else {
            return Err(cur.error_here("a probe file must start with `vars ...;`").into());
        };
        let f = parse_formula_in(body, file, line, sig, &current.context)?;
        current.formulas.push(f);
    }
    Ok(out)
}

/// Canonical probe-file text: the blocks separated by blank lines.
pub fn print_probes(ds: &[Description], sig: &Signature) -> String {
    ds.iter().map(|d| print_query(d, sig)).collect::<Vec<_>>().join("\n")
}
