//! Hunt for pairs of reduced prime 10-crossing diagrams of one knot that a
//! single 3-fragment twist connects while changing the writhe — the table
//! duplication signature. Samples random 3-braid closures with a fixed
//! seed, and discards hits whose bracket already appears in the saved
//! tables for n <= 8 (those are overweight diagrams of smaller knots, not
//! minimal-diagram writhe jumps).

use knotbox::{
    is_prime_diagram, is_reduced, load_table, normalized_bracket, state_key, successors, writhe,
    DiagramKey, GaussCode, LaurentPoly, MoveKind, OrbitOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn small_knot_brackets(dir: &str) -> BTreeSet<LaurentPoly> {
    let mut out = BTreeSet::new();
    out.insert(LaurentPoly::one());
    for n in 3..=8 {
        let path = format!("{dir}/kn{n}.jsonl");
        let table = load_table(path.as_ref()).expect("saved table");
        for class in &table.classes {
            let p = normalized_bracket(&class.representative).expect("realizable rep");
            out.insert(p.mirror_min());
        }
    }
    out
}

fn main() {
    let samples: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let seed: u64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let known = small_knot_brackets("/tmp/tables");
    println!("excluding {} known brackets (n <= 8)", known.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = OrbitOptions::default();
    let mut tried: BTreeSet<DiagramKey> = BTreeSet::new();
    let mut hit_brackets: BTreeSet<LaurentPoly> = BTreeSet::new();
    let mut attempts = 0usize;
    let mut scanned = 0usize;
    while scanned < samples && attempts < samples * 200 {
        attempts += 1;
        let mut word = Vec::with_capacity(10);
        while word.len() < 10 {
            let g = [1, -1, 2, -2][rng.gen_range(0..4)];
            if word.last() == Some(&-g) {
                continue;
            }
            word.push(g);
        }
        let Ok(a) = GaussCode::from_braid_closure(3, &word) else {
            continue;
        };
        if a.n() != 10 || !is_reduced(&a) || !is_prime_diagram(&a) {
            continue;
        }
        let key_a = state_key(&a, true);
        if !tried.insert(key_a.clone()) {
            continue;
        }
        scanned += 1;
        let w_a = writhe(&a).expect("signed closure");
        let bracket_a = normalized_bracket(&a).expect("signed closure");
        if known.contains(&bracket_a.clone().mirror_min()) {
            continue;
        }
        for (res, recs) in successors(&a, &opts) {
            if res.n() != 10 || !is_reduced(&res) || !is_prime_diagram(&res) {
                continue;
            }
            if state_key(&res, true) == key_a {
                continue;
            }
            let w_b = writhe(&res).expect("move results stay signed");
            if w_a.abs() == w_b.abs() {
                continue;
            }
            let twist3 = recs
                .iter()
                .any(|r| r.kind == MoveKind::Twist && r.fragments.len() == 3);
            let fresh = hit_brackets.insert(bracket_a.clone().mirror_min());
            println!(
                "hit{}{} writhe {w_a} -> {w_b}  word {word:?}",
                if twist3 { " twist3" } else { "" },
                if fresh { " (new bracket)" } else { "" },
            );
            println!("  A: {}", a.render_tokens());
            println!("  B: {}", res.render_tokens());
            println!(
                "  same_bracket={} vK(A)={bracket_a:?}",
                normalized_bracket(&res).as_ref() == Some(&bracket_a)
            );
            if twist3 {
                let chain: Vec<String> = recs.iter().map(|r| r.to_string()).collect();
                println!("  via: {}", chain.join(" ; "));
            }
        }
    }
    println!("scanned {scanned} distinct closures ({attempts} attempts)");
    println!("distinct phenomenon brackets: {}", hit_brackets.len());
}
