//! `.kbw` witness files.
//!
//! ```text
//! alpha: f1 -> g1
//! delta f1 -> g1: sort s: e1 -> e1 e2 -> e2 e3 -> e3
//! beta f1: P(x) := not Q(x)
//! beta' f1: Q(x) := exists y. (not P(y) and x == y) where y:s
//! ```
//!
//! `alpha` lines come first. Each pair then needs one `delta` line per sort;
//! `beta` (left relations over the right signature) and `beta'` (the converse)
//! lines are optional.

use super::formula::{end_position, is_keyword, FormulaParser};
use super::lexer::{tokenize, Cursor, Token, TokenKind};
use crate::algebra::{Context, Elem, MultiModel, Signature, SortId, SortedBijection};
use crate::autgroup::{EquivalenceWitness, WitnessPair};
use crate::error::{Error, Result, SourceDiagnostic};
use crate::translate::Interpretation;

struct Pending {
    left: String,
    right: String,
    line: usize,
    delta: Vec<Option<Vec<Elem>>>,
    delta_line: usize,
    beta: Option<Interpretation>,
    beta_prime: Option<Interpretation>,
}

pub fn parse_witness(text: &str, file: &str, left: &MultiModel, right: &MultiModel) -> Result<EquivalenceWitness> {
    let lsig = left.algebra().signature_arc().clone();
    let rsig = right.algebra().signature_arc().clone();
    let mut pending: Vec<Pending> = Vec::new();
    let mut seen_other = false;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = tokenize(raw, file, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(&toks, file, end_position(raw, line));
        let (kw, kt) = cur.expect_ident("`alpha`, `delta`, `beta` or `beta'`")?;
        match kw {
            "alpha" => {
                if seen_other {
                    return Err(cur.error_at(kt, "`alpha` lines must precede all other lines").into());
                }
                cur.expect(&TokenKind::Colon)?;
                let (l, lt) = cur.expect_ident("a left instance name")?;
                cur.expect(&TokenKind::Arrow)?;
                let (r, rt) = cur.expect_ident("a right instance name")?;
                cur.expect_end()?;
                if left.instance(l).is_err() {
                    return Err(cur.error_at(lt, format!("unknown left instance `{l}`")).into());
                }
                if right.instance(r).is_err() {
                    return Err(cur.error_at(rt, format!("unknown right instance `{r}`")).into());
                }
                if pending.iter().any(|p| p.left == l) {
                    return Err(cur.error_at(lt, format!("`{l}` is mapped twice")).into());
                }
                if pending.iter().any(|p| p.right == r) {
                    return Err(cur.error_at(rt, format!("`{r}` is hit twice")).into());
                }
                pending.push(Pending {
                    left: l.to_string(),
                    right: r.to_string(),
                    line,
                    delta: vec![None; lsig.sorts.len()],
                    delta_line: line,
                    beta: None,
                    beta_prime: None,
                });
            }
            "delta" => {
                seen_other = true;
                let p = pair_ref(&mut cur, &mut pending, true)?;
                cur.expect(&TokenKind::Colon)?;
                let st = cur.peek();
                if !cur.eat_keyword("sort") {
                    return Err(cur.error_here("expected `sort`").into());
                }
                let (s, st2) = cur.expect_ident("a sort name")?;
                let sort = lsig
                    .sort_id(s)
                    .ok_or_else(|| cur.error_at(st2, format!("unknown sort `{s}`")))?;
                cur.expect(&TokenKind::Colon)?;
                if p.delta[sort].is_some() {
                    let at = st.unwrap_or(st2);
                    return Err(cur.error_at(at, format!("sort `{s}` of this pair is mapped twice")).into());
                }
                p.delta[sort] = Some(sort_map(&mut cur, left, right, sort)?);
                p.delta_line = p.delta_line.max(line);
            }
            "beta" | "beta'" => {
                seen_other = true;
                let p = pair_ref(&mut cur, &mut pending, false)?;
                cur.expect(&TokenKind::Colon)?;
                let (slot, src, tgt) = if kw == "beta" {
                    (&mut p.beta, &lsig, &rsig)
                } else {
                    (&mut p.beta_prime, &rsig, &lsig)
                };
                let interp = slot.get_or_insert_with(|| Interpretation::new(src.clone(), tgt.clone()));
                definition(&mut cur, &toks, interp)?;
            }
            other => {
                return Err(cur
                    .error_at(kt, format!("expected `alpha`, `delta`, `beta` or `beta'`, found `{other}`"))
                    .into())
            }
        }
    }
    let mut pairs = Vec::with_capacity(pending.len());
    for p in pending {
        let mut maps = Vec::with_capacity(p.delta.len());
        for (s, m) in p.delta.into_iter().enumerate() {
            let m = m.ok_or_else(|| {
                located(file, p.line, format!("delta {}->{} has no line for sort `{}`", p.left, p.right, lsig.sorts[s]))
            })?;
            maps.push(m);
        }
        let delta = SortedBijection::new(left.algebra_arc().clone(), right.algebra_arc().clone(), maps)
            .map_err(|e| located(file, p.delta_line, format!("delta {}->{}: {}", p.left, p.right, e)))?;
        pairs.push(WitnessPair {
            left: p.left,
            right: p.right,
            delta,
            beta: p.beta,
            beta_prime: p.beta_prime,
        });
    }
    let order = |name: &str| left.instances().iter().position(|i| i.name == name);
    pairs.sort_by_key(|p| order(&p.left));
    Ok(EquivalenceWitness { pairs })
}

fn located(file: &str, line: usize, msg: String) -> Error {
    Error::Syntax(SourceDiagnostic::error(file, line, 1, msg))
}

/// `f1` (for beta lines) or `f1 -> g1` (for delta lines), naming an alpha pair.
fn pair_ref<'p>(
    cur: &mut Cursor<'_>,
    pending: &'p mut [Pending],
    with_right: bool,
) -> Result<&'p mut Pending, SourceDiagnostic> {
    let (l, lt) = cur.expect_ident("a left instance name")?;
    let Some(k) = pending.iter().position(|p| p.left == l) else {
        return Err(cur.error_at(lt, format!("`{l}` has no `alpha` line")));
    };
    if with_right {
        cur.expect(&TokenKind::Arrow)?;
        let (r, rt) = cur.expect_ident("a right instance name")?;
        if pending[k].right != r {
            return Err(cur.error_at(rt, format!("alpha maps `{l}` to `{}`, not `{r}`", pending[k].right)));
        }
    }
    Ok(&mut pending[k])
}

fn sort_map(
    cur: &mut Cursor<'_>,
    left: &MultiModel,
    right: &MultiModel,
    sort: SortId,
) -> Result<Vec<Elem>, SourceDiagnostic> {
    let n = left.algebra().carrier_size(sort);
    let mut map = vec![None; n];
    while !cur.at_end() {
        let (a, at) = cur.expect_ident("an element name")?;
        let a_id = left
            .algebra()
            .elem_index(sort, a)
            .ok_or_else(|| cur.error_at(at, format!("unknown element `{a}`")))?;
        cur.expect(&TokenKind::Arrow)?;
        let (b, bt) = cur.expect_ident("an element name")?;
        let b_id = right
            .algebra()
            .elem_index(sort, b)
            .ok_or_else(|| cur.error_at(bt, format!("unknown element `{b}`")))?;
        if map[a_id].replace(b_id).is_some() {
            return Err(cur.error_at(at, format!("`{a}` is mapped twice")));
        }
        cur.eat(&TokenKind::Comma);
    }
    if let Some(e) = map.iter().position(Option::is_none) {
        let name = left.algebra().elem_name(sort, e);
        return Err(cur.error_here(format!("element `{name}` is not mapped")));
    }
    Ok(map.into_iter().map(|e| e.expect("all mapped")).collect())
}

/// `R(x, y) := body [where z:s, ...]`
fn definition(cur: &mut Cursor<'_>, toks: &[Token], interp: &mut Interpretation) -> Result<(), SourceDiagnostic> {
    let src = interp.source().clone();
    let tgt = interp.target().clone();
    let (rel, rt) = cur.expect_ident("a relation name")?;
    let r = src
        .rel_id(rel)
        .ok_or_else(|| cur.error_at(rt, format!("unknown relation `{rel}`")))?;
    if interp.definition(r).is_some() {
        return Err(cur.error_at(rt, format!("`{rel}` is defined twice")));
    }
    cur.expect(&TokenKind::LParen)?;
    let mut params = Vec::new();
    if !cur.eat(&TokenKind::RParen) {
        loop {
            let (v, vt) = cur.expect_ident("a parameter name")?;
            if is_keyword(v) || params.iter().any(|p| p == v) {
                return Err(cur.error_at(vt, format!("bad parameter `{v}`")));
            }
            params.push(v.to_string());
            if !cur.eat(&TokenKind::Comma) {
                break;
            }
        }
        cur.expect(&TokenKind::RParen)?;
    }
    let arity = src.rels[r].args.len();
    if params.len() != arity {
        return Err(cur.error_at(rt, format!("`{rel}` takes {arity} arguments, found {}", params.len())));
    }
    let assign = cur.expect(&TokenKind::Assign)?;
    let start = cur.position();
    let split = toks[start..]
        .iter()
        .position(|t| t.is_keyword("where"))
        .map_or(toks.len(), |k| start + k);
    let bound = if split < toks.len() {
        let mut wcur = Cursor::new(&toks[split + 1..], cur.file(), end_of(toks, assign));
        let ctx = super::query::context_list(&mut wcur, &tgt)?;
        wcur.expect_end()?;
        ctx.iter().map(|(n, s)| (n.to_string(), s)).collect::<Vec<_>>()
    } else {
        Vec::new()
    };
    let vars = params
        .iter()
        .cloned()
        .zip(src.rels[r].args.iter().copied())
        .chain(bound.iter().cloned());
    let ctx = Context::new(vars).map_err(|e| cur.error_at(assign, e.to_string()))?;
    let end = toks.get(split).map_or(end_of(toks, assign), |t| (t.line, t.column));
    let mut bcur = Cursor::new(&toks[start..split], cur.file(), end);
    let body = FormulaParser::new(&tgt, &ctx).formula(&mut bcur)?;
    bcur.expect_end()?;
    interp
        .define(rel, params, bound, body)
        .map_err(|e| cur.error_at(assign, e.to_string()))
}

fn end_of(toks: &[Token], fallback: &Token) -> (usize, usize) {
    let t = toks.last().unwrap_or(fallback);
    (t.line, t.column + 1)
}

/// Canonical witness text; pairs in left instance order.
pub fn print_witness(w: &EquivalenceWitness, left: &MultiModel, right: &MultiModel) -> String {
    let order = |name: &str| left.instances().iter().position(|i| i.name == name);
    let mut pairs: Vec<&WitnessPair> = w.pairs.iter().collect();
    pairs.sort_by_key(|p| order(&p.left));
    let mut out = String::new();
    for p in &pairs {
        out.push_str(&format!("alpha: {} -> {}\n", p.left, p.right));
    }
    let sig: &Signature = left.signature();
    for p in &pairs {
        for (s, map) in p.delta.maps().iter().enumerate() {
            let body: Vec<String> = map
                .iter()
                .enumerate()
                .map(|(a, &b)| format!("{} -> {}", left.algebra().elem_name(s, a), right.algebra().elem_name(s, b)))
                .collect();
            out.push_str(&format!(
                "delta {} -> {}: sort {}: {}\n",
                p.left,
                p.right,
                sig.sort_name(s),
                body.join(" ")
            ));
        }
        for (kw, interp) in [("beta", &p.beta), ("beta'", &p.beta_prime)] {
            if let Some(b) = interp {
                for (r, _) in b.definitions() {
                    let line = b.format_definition(r).expect("defined");
                    out.push_str(&format!("{kw} {}: {line}\n", p.left));
                }
            }
        }
    }
    out
}

