//! Synthesizes the translations of a witness between two knowledge bases, then
//! verifies the full witness and a deliberately broken one.

use kbalg::autgroup::automorphic_equivalent;
use kbalg::config::Limits;
use kbalg::frontend::{parse_model, parse_witness};
use kbalg::translate::{synthesize_interpretation, verify_witness, Probes, SynthesisBounds};

fn main() -> kbalg::Result<()> {
    let left = parse_model(include_str!("../fixtures/mp.kbm"))?;
    let right = parse_model(include_str!("../fixtures/mq.kbm"))?;
    let limits = Limits::default();
    let (f, g) = (left.instance("f1")?, right.instance("g1")?);

    let delta = automorphic_equivalent(f, g)?.expect("the groups are conjugate");
    let beta = synthesize_interpretation(f, g, &delta, SynthesisBounds::default(), &limits)?;
    let beta_prime = synthesize_interpretation(g, f, &delta.inverse(), SynthesisBounds::default(), &limits)?;
    if let (Some(b), Some(bp)) = (beta, beta_prime) {
        print!("beta:  {b}beta': {bp}");
    }

    let probes = Probes::defaults(left.signature(), right.signature());
    for (name, text) in [
        ("pq.kbw", include_str!("../fixtures/pq.kbw")),
        ("pq_corrupt.kbw", include_str!("../fixtures/pq_corrupt.kbw")),
    ] {
        let w = parse_witness(text, name, &left, &right)?;
        let report = verify_witness(&left, &right, &w, &probes, &limits, None)?;
        println!("== {name}: {}", if report.all_passed() { "verified" } else { "rejected" });
        print!("{}", report.machine());
    }
    Ok(())
}
