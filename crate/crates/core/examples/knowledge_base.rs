//! Uses the knowledge-base facade: answers queries and maps one reply into another
//! along a substitution.

use kbalg::algebra::{Context, Substitution, Term};
use kbalg::frontend::{parse_model, parse_query};
use kbalg::kbase::{InducedMap, KnowledgeBase};

fn main() -> kbalg::Result<()> {
    let kb = KnowledgeBase::new(parse_model(include_str!("../fixtures/mp2.kbm"))?);
    let sig = kb.data().signature();
    let pairs = parse_query("vars x:s, y:s;\nP(x)\nP(y)\n", sig)?;
    let single = parse_query("vars z:s;\nP(z)\n", sig)?;
    let outside = parse_query("vars z:s;\nnot P(z)\n", sig)?;

    for inst in kb.data().instances() {
        println!("{}: {}", inst.name, kb.query(&inst.name, &pairs)?.format_inline());
    }

    // z := y sends every reply point (x, y) to its second coordinate
    let s = Substitution::new(sig, Context::new([("z", 0)])?, pairs.context.clone(), vec![Term::var("y")])?;
    for target in [&single, &outside] {
        match kb.induced_content_map("f2", &s, &pairs, target)? {
            InducedMap::Map(m) => print!("{m}"),
            InducedMap::Rejected { point } => println!("not admissible: {point} leaves the target"),
        }
    }
    Ok(())
}
