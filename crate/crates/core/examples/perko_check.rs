use knotbox::{
    canonical_form, connecting_moves, equivalent, is_prime_diagram, is_realizable, is_reduced,
    normalized_bracket, replay, representative, state_key, writhe, GaussCode, MoveKind,
    OrbitOptions, Verdict,
};
use std::time::Instant;

const A: &str = "O1+ O2+ U3+ O4+ U2+ O5+ U6+ U7+ O8+ U1+ O9+ O6+ U10+ O3+ U4+ U8+ O7+ O10+ U5+ U9+";
const B: &str = "O1+ O2+ U3+ O4+ O5- U6+ O7+ U1+ O8+ U5- U9+ O10+ U2+ O3+ U4+ U8+ O6+ O9+ U10+ U7+";

fn main() {
    let a = GaussCode::parse_tokens(A).expect("A parses");
    let b = GaussCode::parse_tokens(B).expect("B parses");
    for (name, code) in [("A", &a), ("B", &b)] {
        println!(
            "{name}: n={} realizable={} reduced={} prime={} writhe={:?}",
            code.n(),
            is_realizable(code),
            is_reduced(code),
            is_prime_diagram(code),
            writhe(code),
        );
    }
    println!(
        "brackets equal: {}",
        normalized_bracket(&a) == normalized_bracket(&b)
    );
    println!("vK(A) = {:?}", normalized_bracket(&a).unwrap());

    let opts = OrbitOptions::default();
    let t = Instant::now();
    let verdict = equivalent(&a, &b, &opts).expect("no truncation");
    let elapsed = t.elapsed();
    match &verdict {
        Verdict::Equivalent { path_a, path_b, meet } => {
            println!("verdict: Equivalent in {elapsed:.1?}");
            println!("meet: {} ({} crossings)", meet.0, representative(meet).n());
            let twist3 = |p: &Vec<knotbox::MoveRecord>| {
                p.iter()
                    .filter(|r| r.kind == MoveKind::Twist && r.fragments.len() == 3)
                    .count()
            };
            println!(
                "path_a: {} records ({} twist-3) / path_b: {} records ({} twist-3)",
                path_a.len(),
                twist3(path_a),
                path_b.len(),
                twist3(path_b)
            );
            for (tag, path, start) in [("a", path_a, &a), ("b", path_b, &b)] {
                let end = replay(start, path, &opts).expect("certificate replays");
                println!("  path_{tag} replays to meet: {}", end == *meet);
            }
        }
        Verdict::Distinct => println!("verdict: Distinct (?!) in {elapsed:.1?}"),
    }

    let t = Instant::now();
    let chains = connecting_moves(&a, &b, &opts).expect("connecting moves");
    println!("connecting chains A->B: {} in {:.1?}", chains.len(), t.elapsed());
    for (i, chain) in chains.iter().enumerate() {
        let twist3 = chain
            .iter()
            .filter(|r| r.kind == MoveKind::Twist && r.fragments.len() == 3)
            .count();
        let kinds: Vec<String> = chain
            .iter()
            .map(|r| format!("{}({})", r.kind, r.fragments.len()))
            .collect();
        let end = replay(&a, chain, &opts).expect("chain replays");
        println!(
            "  chain {i}: {} records, {} twist-3, replays to B: {} [{}]",
            chain.len(),
            twist3,
            end == state_key(&b, true),
            kinds.join(" ")
        );
    }

    let t = Instant::now();
    let key = canonical_form(&a, &opts).expect("canonical form");
    println!(
        "canonical_form(A): {} crossings in {:.1?}",
        representative(&key).n(),
        t.elapsed()
    );
}
