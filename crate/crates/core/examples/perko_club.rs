//! Map the level-10 component of the writhe-jumping knot class found by
//! perko_search: BFS over successors restricted to reduced prime 10-crossing
//! states, then list every twist-3 edge between members, with writhes.

use knotbox::{
    is_prime_diagram, is_reduced, normalized_bracket, state_key, successors, writhe, DiagramKey,
    GaussCode, MoveKind, OrbitOptions,
};
use std::collections::{BTreeMap, VecDeque};

fn main() {
    let seed_tokens = "O1+ O2+ U3+ U4+ O5+ U6- U7+ O8+ U2+ O3+ O6- U9+ O10+ U1+ O4+ U5+ O9+ O7+ U8+ U10+";
    let seed = GaussCode::parse_tokens(seed_tokens).expect("seed parses");
    let opts = OrbitOptions::default();
    let cap: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(400);

    let mut members: BTreeMap<DiagramKey, (GaussCode, i64)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let k0 = state_key(&seed, true);
    members.insert(k0.clone(), (seed.clone(), writhe(&seed).expect("signed")));
    queue.push_back(k0);
    while let Some(key) = queue.pop_front() {
        if members.len() >= cap {
            break;
        }
        let state = members[&key].0.clone();
        for (res, _) in successors(&state, &opts) {
            if res.n() != 10 || !is_reduced(&res) || !is_prime_diagram(&res) {
                continue;
            }
            let rk = state_key(&res, true);
            if members.contains_key(&rk) {
                continue;
            }
            let w = writhe(&res).expect("signed");
            members.insert(rk.clone(), (res, w));
            queue.push_back(rk);
        }
    }
    let mut by_writhe: BTreeMap<i64, usize> = BTreeMap::new();
    for (_, (_, w)) in &members {
        *by_writhe.entry(*w).or_default() += 1;
    }
    println!("component members found: {} (cap {cap})", members.len());
    println!("by writhe: {by_writhe:?}");

    println!("twist-3 edges inside the component:");
    let mut edges = 0usize;
    for (key, (state, w)) in &members {
        for (res, recs) in successors(state, &opts) {
            if res.n() != 10 || !is_reduced(&res) || !is_prime_diagram(&res) {
                continue;
            }
            let rk = state_key(&res, true);
            if rk == *key || !members.contains_key(&rk) {
                continue;
            }
            if !recs
                .iter()
                .any(|r| r.kind == MoveKind::Twist && r.fragments.len() == 3)
            {
                continue;
            }
            edges += 1;
            let wb = members[&rk].1;
            println!("edge {edges}: writhe {w} -> {wb} (chain len {})", recs.len());
            println!("  A: {}", state.render_tokens());
            println!("  B: {}", res.render_tokens());
            if edges >= 12 {
                println!("  ... (stopping edge listing)");
                return;
            }
        }
    }
    println!(
        "bracket: {:?}",
        normalized_bracket(&seed).expect("realizable")
    );
}
