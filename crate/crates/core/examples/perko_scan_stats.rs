//! Over random 3-braid closures at 10 crossings, tally which successor
//! edges stay at 10 crossings, by move kind / fragment count, and whether
//! any change the writhe magnitude.

use knotbox::{
    is_prime_diagram, is_reduced, state_key, successors, writhe, DiagramKey, GaussCode, MoveKind,
    OrbitOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

fn main() {
    let samples: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut opts = OrbitOptions::default();
    if let Some(d) = std::env::args().nth(2).and_then(|s| s.parse().ok()) {
        opts.descent_budget = d;
    }
    let mut tried: BTreeSet<DiagramKey> = BTreeSet::new();
    let mut level_edges: BTreeMap<String, usize> = BTreeMap::new();
    let mut jump_edges: BTreeMap<String, usize> = BTreeMap::new();
    let mut scanned = 0usize;
    let mut attempts = 0usize;
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
        if !tried.insert(state_key(&a, true)) {
            continue;
        }
        scanned += 1;
        let w_a = writhe(&a).expect("signed");
        let key_a = state_key(&a, true);
        for (res, recs) in successors(&a, &opts) {
            if res.n() != 10 || state_key(&res, true) == key_a {
                continue;
            }
            let first = &recs[0];
            let tag = format!(
                "{}/{}frag{}{}",
                first.kind,
                first.fragments.len(),
                if recs.len() > 1 { "+bounce" } else { "" },
                if is_reduced(&res) && is_prime_diagram(&res) { "" } else { " (leaves)" },
            );
            *level_edges.entry(tag.clone()).or_default() += 1;
            if writhe(&res).expect("signed").abs() != w_a.abs() {
                *jump_edges.entry(tag).or_default() += 1;
            }
        }
    }
    println!("scanned {scanned} closures");
    println!("level-preserving edges by origin:");
    for (tag, count) in &level_edges {
        println!("  {tag:30} {count}");
    }
    println!("writhe-magnitude-changing among them:");
    for (tag, count) in &jump_edges {
        println!("  {tag:30} {count}");
    }
}
