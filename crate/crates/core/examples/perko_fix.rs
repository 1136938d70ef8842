//! Re-scan the level-10 component with normalized member presentations and
//! find pairs directly connected by a twist-3 chain via connecting_moves,
//! so the frozen demo pair works through the public API.

use knotbox::{
    connecting_moves, is_prime_diagram, is_reduced, normalized_bracket, replay, representative,
    state_key, successors, writhe, DiagramKey, GaussCode, MoveKind, OrbitOptions,
};
use std::collections::{BTreeMap, VecDeque};

fn main() {
    let seed_tokens = "O1+ O2+ U3+ U4+ O5+ U6- U7+ O8+ U2+ O3+ O6- U9+ O10+ U1+ O4+ U5+ O9+ O7+ U8+ U10+";
    let seed = GaussCode::parse_tokens(seed_tokens).expect("seed parses");
    let budget: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(128);
    let opts = OrbitOptions { descent_budget: budget, ..OrbitOptions::default() };

    // member keys -> (normalized presentation, writhe)
    let mut members: BTreeMap<DiagramKey, (GaussCode, i64)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let k0 = state_key(&seed, true);
    let r0 = representative(&k0);
    let w0 = writhe(&r0).expect("signed");
    members.insert(k0.clone(), (r0, w0));
    queue.push_back(k0);
    while let Some(key) = queue.pop_front() {
        let state = members[&key].0.clone();
        for (res, _) in successors(&state, &opts) {
            if res.n() != 10 || !is_reduced(&res) || !is_prime_diagram(&res) {
                continue;
            }
            let rk = state_key(&res, true);
            if members.contains_key(&rk) {
                continue;
            }
            let rep = representative(&rk);
            let w = writhe(&rep).expect("signed");
            members.insert(rk.clone(), (rep, w));
            queue.push_back(rk);
        }
    }
    let mut by_writhe: BTreeMap<i64, usize> = BTreeMap::new();
    for (_, (_, w)) in &members {
        *by_writhe.entry(*w).or_default() += 1;
    }
    println!("members: {} by writhe {:?} (budget {budget})", members.len(), by_writhe);

    let mut found = 0usize;
    for (key, (state, w)) in &members {
        for (to_key, (to_state, to_w)) in &members {
            if to_key == key || w == to_w {
                continue;
            }
            let chains = connecting_moves(state, to_state, &opts).expect("no truncation");
            let twisty: Vec<_> = chains
                .iter()
                .filter(|c| c.iter().any(|r| r.kind == MoveKind::Twist && r.fragments.len() == 3))
                .collect();
            if twisty.is_empty() {
                continue;
            }
            found += 1;
            let chain = twisty[0];
            let end = replay(state, chain, &opts).expect("replays");
            println!(
                "pair {found}: writhe {w} -> {to_w}, {} twisty chain(s), best len {}, replays: {}",
                twisty.len(),
                chain.len(),
                end == *to_key
            );
            println!("  A: {}", state.render_tokens());
            println!("  B: {}", to_state.render_tokens());
            if found >= 4 {
                println!("  ... (stopping)");
                println!("bracket: {:?}", normalized_bracket(&seed).unwrap());
                return;
            }
        }
    }
    println!("twist-3 connected cross-writhe pairs: {found}");
    println!("bracket: {:?}", normalized_bracket(&seed).unwrap());
}
