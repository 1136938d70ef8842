//! Orbit search over the monotone move set.
//!
//! States are diagrams up to symmetry: every state is re-presented as the
//! parse of its own key before expansion, so the orbit of a code and the
//! orbit of any rotation/relabeling/reversal of it are literally the same
//! search. With `mirror_quotient` a state and its mirror collapse into one.
//!
//! Edges are single R-moves plus box moves. A box move may overshoot the
//! crossing budget; its result is then walked back down with R-moves until
//! it fits (a bounded search through the oversized region). Crossing counts
//! never increase from state to state, so the reachable set is finite.
//!
//! Unsigned seeds are witness-signed once up front: a realizable code pins
//! its embedding up to reflection, so the signed diagram presents the same
//! knot as the unsigned one up to mirror — which the quotient absorbs —
//! and signed states keep every face computation search-free.

use crate::boxmoves::box_moves;
use crate::code::{DiagramKey, GaussCode};
use crate::planarity::witness_signed;
use crate::rmoves::{apply_r, r_sites, MoveKind, MoveRecord};
use rayon::prelude::*;
use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

#[derive(Clone, Debug)]
pub struct OrbitOptions {
    /// most fragments a box may have
    pub max_fragments: usize,
    /// most legs per box side a twist will braid
    pub twist_arity: usize,
    /// visited-state budget; exceeding it flags the orbit as truncated
    pub max_states: usize,
    /// expansions granted to the walk back down from results one crossing
    /// over the limit; each further crossing of overshoot halves the grant
    pub descent_budget: usize,
    /// identify every diagram with its mirror image
    pub mirror_quotient: bool,
}

impl Default for OrbitOptions {
    fn default() -> OrbitOptions {
        OrbitOptions {
            max_fragments: 3,
            twist_arity: 3,
            max_states: 1_000_000,
            descent_budget: 128,
            mirror_quotient: true,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OrbitError {
    #[error("code is not realizable")]
    Unrealizable,
    #[error("state budget exhausted before the orbit closed")]
    Truncated,
    #[error("certificate does not replay: step {0} matches no move")]
    BadCertificate(usize),
}

/// Identity of a diagram in the orbit.
pub fn state_key(code: &GaussCode, quotient: bool) -> DiagramKey {
    if quotient {
        code.key().min(code.mirror().key())
    } else {
        code.key()
    }
}

/// Canonical signed presentation of a search seed.
pub fn seed_code(code: &GaussCode) -> Result<GaussCode, OrbitError> {
    let normal = representative(&code.key());
    witness_signed(&normal).ok_or(OrbitError::Unrealizable)
}

pub fn representative(key: &DiagramKey) -> GaussCode {
    GaussCode::parse_tokens(&key.0).expect("keys round-trip")
}

/// The presentation every move record refers to: the parse of the state's
/// own (possibly mirror-folded) key.
pub fn normalize(code: &GaussCode, quotient: bool) -> GaussCode {
    representative(&state_key(code, quotient))
}

/// how many walked-down entries one state's pooled descent may emit
const POOL_ENTRIES: usize = 64;

/// R-move closure of a state in quotient space, insertion-ordered, used to
/// pre-seed searches: pure R-edges are orders of magnitude cheaper than box
/// expansion, and a word that descends to the empty diagram settles its
/// canonical form right here. Stops at `cap` states or the first empty one.
fn r_seed(
    code: &GaussCode,
    cap: usize,
    quotient: bool,
) -> Vec<(DiagramKey, usize, Option<(DiagramKey, Vec<MoveRecord>)>)> {
    let root = state_key(code, quotient);
    let mut out = vec![(root.clone(), code.n(), None)];
    let mut seen = HashSet::new();
    seen.insert(root);
    let mut at = 0;
    while at < out.len() && out.len() < cap {
        let state = representative(&out[at].0);
        for site in r_sites(&state) {
            let Ok((next, rec)) = apply_r(&state, &site) else { continue };
            let nkey = state_key(&next, quotient);
            if !seen.insert(nkey.clone()) {
                continue;
            }
            let empty = next.is_empty();
            out.push((nkey, next.n(), Some((out[at].0.clone(), vec![rec]))));
            if empty || out.len() >= cap {
                return out;
            }
        }
        at += 1;
    }
    out
}

/// Every state one move away from `code` (which must be normalized), with
/// the records that produce it. Counts never exceed `code.n()`: a box move
/// that overshoots is walked back down with R-moves before it may appear.
/// Oversized results pool into one walk per overshoot size — kin raws share
/// most of their reduction space, but a +6 twist must not be starved by the
/// swarm of +2 flypes — expanded smallest first, with `descent_budget`
/// expansions for the +1 class halving per extra crossing (floor 16), and
/// up to `POOL_ENTRIES` walked-down states out per class.
pub fn successors(code: &GaussCode, opts: &OrbitOptions) -> Vec<(GaussCode, Vec<MoveRecord>)> {
    let n = code.n();
    let quotient = opts.mirror_quotient;
    let mut out = Vec::new();
    for site in r_sites(code) {
        if let Ok((next, rec)) = apply_r(code, &site) {
            out.push((next, vec![rec]));
        }
    }
    // interior nodes hold normalized states; entry nodes keep the raw result
    let mut nodes: Vec<(GaussCode, Option<usize>, MoveRecord)> = Vec::new();
    let mut raw_seen: HashSet<DiagramKey> = HashSet::new();
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (raw, rec) in box_moves(code, opts.max_fragments, opts.twist_arity) {
        if raw.n() <= n {
            out.push((raw, vec![rec]));
        } else if raw_seen.insert(state_key(&raw, quotient)) {
            let norm = normalize(&raw, quotient);
            classes.entry(norm.n()).or_default().push(nodes.len());
            nodes.push((norm, None, rec));
        }
    }
    let mut entries: Vec<usize> = Vec::new();
    for (&size, seeds) in &classes {
        let budget = (opts.descent_budget >> (size - n - 1)).max(16);
        let mut seen: HashSet<DiagramKey> = seeds
            .iter()
            .map(|&i| state_key(&nodes[i].0, quotient))
            .collect();
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            seeds.iter().map(|&i| Reverse((size, i))).collect();
        let mut class_entries = 0usize;
        let mut expansions = 0usize;
        while let Some(Reverse((_, idx))) = heap.pop() {
            if class_entries >= POOL_ENTRIES || expansions >= budget {
                break;
            }
            expansions += 1;
            let state = nodes[idx].0.clone();
            for site in r_sites(&state) {
                let Ok((next, rec)) = apply_r(&state, &site) else { continue };
                if !seen.insert(state_key(&next, quotient)) {
                    continue;
                }
                if next.n() <= n {
                    nodes.push((next, Some(idx), rec));
                    entries.push(nodes.len() - 1);
                    class_entries += 1;
                } else {
                    let norm = normalize(&next, quotient);
                    heap.push(Reverse((norm.n(), nodes.len())));
                    nodes.push((norm, Some(idx), rec));
                }
            }
        }
    }
    for end in entries {
        let mut path = Vec::new();
        let mut cur = end;
        loop {
            let (_, parent, rec) = &nodes[cur];
            path.push(rec.clone());
            match parent {
                Some(p) => cur = *p,
                None => break,
            }
        }
        path.reverse();
        out.push((nodes[end].0.clone(), path));
    }
    out
}

#[derive(Clone, Debug)]
pub struct OrbitState {
    pub count: usize,
    /// state we first arrived from, with the records of that one edge
    pub parent: Option<(DiagramKey, Vec<MoveRecord>)>,
}

/// The explored move graph of one diagram.
#[derive(Clone, Debug)]
pub struct Orbit {
    pub seed: DiagramKey,
    pub visited: BTreeMap<DiagramKey, OrbitState>,
    pub canonical: DiagramKey,
    pub min_crossings: usize,
    pub truncated: bool,
}

impl Orbit {
    /// Move records from the seed to a visited state.
    pub fn certificate(&self, target: &DiagramKey) -> Option<Vec<MoveRecord>> {
        let mut path = Vec::new();
        let mut cur = self.visited.get(target)?;
        while let Some((pkey, records)) = &cur.parent {
            path.push(records.clone());
            cur = &self.visited[pkey];
        }
        Some(path.into_iter().rev().flatten().collect())
    }
}

/// how many states each expansion round pops, smallest crossing count first
const ROUND: usize = 64;

/// how far the R-only pre-seeding walk may run
const R_SEED_CAP: usize = 4_000;

/// Closure of the move graph from `code`. States are expanded in rounds of
/// the currently smallest ones — downhill chains finish early — and each
/// round is expanded in parallel but merged in pop order, so the result is
/// deterministic for a given configuration regardless of thread count.
pub fn explore(code: &GaussCode, opts: &OrbitOptions) -> Result<Orbit, OrbitError> {
    let signed = seed_code(code)?;
    let quotient = opts.mirror_quotient;
    let seed = state_key(&signed, quotient);
    let mut visited: BTreeMap<DiagramKey, OrbitState> = BTreeMap::new();
    let mut pending: BinaryHeap<(Reverse<(usize, usize)>, DiagramKey)> = BinaryHeap::new();
    // nothing beats zero crossings, so touching the empty diagram settles
    // the canonical form and the rest of the orbit is irrelevant
    let mut settled = false;
    let mut seq = 0;
    for (key, count, parent) in r_seed(&signed, R_SEED_CAP.min(opts.max_states), quotient) {
        settled = settled || count == 0;
        visited.insert(key.clone(), OrbitState { count, parent });
        pending.push((Reverse((count, seq)), key));
        seq += 1;
    }
    let mut truncated = false;
    while !pending.is_empty() && !truncated && !settled {
        let mut round = Vec::with_capacity(ROUND);
        while round.len() < ROUND {
            let Some((_, key)) = pending.pop() else { break };
            round.push(key);
        }
        let batches: Vec<Vec<(DiagramKey, usize, Vec<MoveRecord>)>> = round
            .par_iter()
            .map(|key| {
                let state = representative(key);
                successors(&state, opts)
                    .into_iter()
                    .map(|(res, records)| (state_key(&res, quotient), res.n(), records))
                    .collect()
            })
            .collect();
        'merge: for (pkey, edges) in round.iter().zip(batches) {
            for (rkey, count, records) in edges {
                if visited.contains_key(&rkey) {
                    continue;
                }
                if visited.len() >= opts.max_states {
                    truncated = true;
                    break 'merge;
                }
                visited.insert(
                    rkey.clone(),
                    OrbitState { count, parent: Some((pkey.clone(), records)) },
                );
                if count == 0 {
                    settled = true;
                    break 'merge;
                }
                pending.push((Reverse((count, seq)), rkey));
                seq += 1;
            }
        }
    }
    let (canonical, min_crossings) = visited
        .iter()
        .map(|(key, st)| (st.count, key))
        .min()
        .map(|(count, key)| (key.clone(), count))
        .expect("seed is always visited");
    Ok(Orbit { seed, visited, canonical, min_crossings, truncated })
}

/// Key of the minimal diagram (fewest crossings, then least key) reachable
/// from `code`. Errors if the search was cut off before closing.
pub fn canonical_form(code: &GaussCode, opts: &OrbitOptions) -> Result<DiagramKey, OrbitError> {
    let orbit = explore(code, opts)?;
    if orbit.truncated {
        return Err(OrbitError::Truncated);
    }
    Ok(orbit.canonical)
}

/// Outcome of an equivalence search.
#[derive(Clone, Debug)]
pub enum Verdict {
    /// both inputs reach `meet`; the paths prove they present the same knot
    Equivalent { meet: DiagramKey, path_a: Vec<MoveRecord>, path_b: Vec<MoveRecord> },
    /// both orbits closed without touching — no move sequence here
    /// identifies the diagrams (not a proof of inequivalence)
    Distinct,
}

struct Search {
    visited: BTreeMap<DiagramKey, OrbitState>,
    pending: BinaryHeap<(Reverse<(usize, usize)>, DiagramKey)>,
    seq: usize,
}

impl Search {
    fn new(code: &GaussCode, cap: usize, quotient: bool) -> Search {
        let mut search =
            Search { visited: BTreeMap::new(), pending: BinaryHeap::new(), seq: 0 };
        for (key, count, parent) in r_seed(code, cap, quotient) {
            search.visited.insert(key.clone(), OrbitState { count, parent });
            search.pending.push((Reverse((count, search.seq)), key));
            search.seq += 1;
        }
        search
    }

    fn done(&self) -> bool {
        self.pending.is_empty()
    }

    /// Expand one round of pending states; returns the newly visited keys.
    fn step(&mut self, opts: &OrbitOptions, budget: usize) -> (Vec<DiagramKey>, bool) {
        let quotient = opts.mirror_quotient;
        let mut round = Vec::with_capacity(ROUND);
        while round.len() < ROUND {
            let Some((_, key)) = self.pending.pop() else { break };
            round.push(key);
        }
        let batches: Vec<Vec<(DiagramKey, usize, Vec<MoveRecord>)>> = round
            .par_iter()
            .map(|key| {
                let state = representative(key);
                successors(&state, opts)
                    .into_iter()
                    .map(|(res, records)| (state_key(&res, quotient), res.n(), records))
                    .collect()
            })
            .collect();
        let mut fresh = Vec::new();
        let mut truncated = false;
        'merge: for (pkey, edges) in round.iter().zip(batches) {
            for (rkey, count, records) in edges {
                if self.visited.contains_key(&rkey) {
                    continue;
                }
                if self.visited.len() >= budget {
                    truncated = true;
                    break 'merge;
                }
                self.visited.insert(
                    rkey.clone(),
                    OrbitState { count, parent: Some((pkey.clone(), records)) },
                );
                self.pending.push((Reverse((count, self.seq)), rkey.clone()));
                self.seq += 1;
                fresh.push(rkey);
            }
        }
        (fresh, truncated)
    }

    fn path_to(&self, target: &DiagramKey) -> Vec<MoveRecord> {
        let mut path = Vec::new();
        let mut cur = &self.visited[target];
        while let Some((pkey, records)) = &cur.parent {
            path.push(records.clone());
            cur = &self.visited[pkey];
        }
        path.into_iter().rev().flatten().collect()
    }
}

/// Decide whether two diagrams present the same knot under the move system:
/// grow both orbits toward each other and certify on first contact. When
/// both orbits close without meeting the diagrams are distinct under these
/// moves (their canonical forms differ).
pub fn equivalent(
    a: &GaussCode,
    b: &GaussCode,
    opts: &OrbitOptions,
) -> Result<Verdict, OrbitError> {
    let sa_seed = seed_code(a)?;
    let sb_seed = seed_code(b)?;
    let quotient = opts.mirror_quotient;
    let cap = R_SEED_CAP.min(opts.max_states);
    let mut sa = Search::new(&sa_seed, cap, quotient);
    let mut sb = Search::new(&sb_seed, cap, quotient);
    let meet_of = |sa: &Search, sb: &Search, keys: &[DiagramKey], mine_is_a: bool| {
        keys.iter()
            .filter(|k| if mine_is_a { sb.visited.contains_key(k) } else { sa.visited.contains_key(k) })
            .min()
            .cloned()
    };
    let chain: Vec<DiagramKey> = sa.visited.keys().cloned().collect();
    if let Some(meet) = meet_of(&sa, &sb, &chain, true) {
        return Ok(Verdict::Equivalent {
            path_a: sa.path_to(&meet),
            path_b: sb.path_to(&meet),
            meet,
        });
    }
    let mut truncated = false;
    while !(sa.done() && sb.done()) {
        let step_a = match (sa.done(), sb.done()) {
            (false, true) => true,
            (true, false) => false,
            _ => sa.visited.len() <= sb.visited.len(),
        };
        let budget = opts.max_states.saturating_sub(if step_a {
            sb.visited.len()
        } else {
            sa.visited.len()
        });
        let (fresh, cut) = if step_a { sa.step(opts, budget) } else { sb.step(opts, budget) };
        if let Some(meet) = meet_of(&sa, &sb, &fresh, step_a) {
            return Ok(Verdict::Equivalent {
                path_a: sa.path_to(&meet),
                path_b: sb.path_to(&meet),
                meet,
            });
        }
        if cut {
            truncated = true;
            break;
        }
    }
    if truncated {
        return Err(OrbitError::Truncated);
    }
    Ok(Verdict::Distinct)
}

/// Re-apply a recorded move path. Each record is matched against the moves
/// available at the current state (re-presented from its key exactly as the
/// search saw it); the walk fails loudly if a record matches nothing.
pub fn replay(
    start: &GaussCode,
    path: &[MoveRecord],
    opts: &OrbitOptions,
) -> Result<DiagramKey, OrbitError> {
    let quotient = opts.mirror_quotient;
    let mut cur = normalize(&seed_code(start)?, quotient);
    for (i, rec) in path.iter().enumerate() {
        let found = match rec.kind {
            MoveKind::R1 | MoveKind::R2 | MoveKind::R3 => r_sites(&cur)
                .iter()
                .filter_map(|site| apply_r(&cur, site).ok())
                .find(|(_, r)| r == rec)
                .map(|(code, _)| code),
            MoveKind::Shift | MoveKind::Twist => {
                box_moves(&cur, opts.max_fragments, opts.twist_arity)
                    .into_iter()
                    .find(|(_, r)| r == rec)
                    .map(|(code, _)| code)
            }
        };
        let Some(next) = found else {
            return Err(OrbitError::BadCertificate(i));
        };
        cur = normalize(&next, quotient);
    }
    Ok(cur.key())
}

/// Every single-move certificate from `a` to `b`: record chains where one
/// R-move or one box move (plus any descent back under the crossing bound)
/// carries `a`'s state to `b`'s. Bidirectional search prefers short paths,
/// so call this when the *kind* of connecting move matters, not just whether
/// one exists.
pub fn connecting_moves(
    a: &GaussCode,
    b: &GaussCode,
    opts: &OrbitOptions,
) -> Result<Vec<Vec<MoveRecord>>, OrbitError> {
    let quotient = opts.mirror_quotient;
    let start = normalize(&seed_code(a)?, quotient);
    let target = state_key(&seed_code(b)?, quotient);
    Ok(successors(&start, opts)
        .into_iter()
        .filter(|(res, _)| state_key(res, quotient) == target)
        .map(|(_, recs)| recs)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::GaussCode;

    fn code(s: &str) -> GaussCode {
        GaussCode::parse(s).unwrap()
    }

    fn opts() -> OrbitOptions {
        OrbitOptions::default()
    }

    #[test]
    fn unknotted_words_reach_the_empty_form() {
        let orbit = explore(&code("ABCabc"), &opts()).unwrap();
        assert!(!orbit.truncated);
        assert_eq!(orbit.canonical, DiagramKey(String::new()));
        assert_eq!(orbit.min_crossings, 0);
        assert_eq!(canonical_form(&code("Aa"), &opts()).unwrap().0, "");
        assert_eq!(canonical_form(&code(""), &opts()).unwrap().0, "");
    }

    #[test]
    fn trefoil_is_its_own_canonical_form() {
        let t = code("O1+ U2+ O3+ U1+ O2+ U3+");
        let canon = canonical_form(&t, &opts()).unwrap();
        assert_eq!(canon, state_key(&t, true));
        // every state in the closed orbit still has 3 crossings
        let orbit = explore(&t, &opts()).unwrap();
        assert!(orbit.visited.values().all(|s| s.count == 3));
    }

    #[test]
    fn canonical_form_ignores_presentation_and_mirror() {
        let t = code("O1+ U2+ O3+ U1+ O2+ U3+");
        let rotated = code("U2+ O3+ U1+ O2+ U3+ O1+");
        assert_eq!(canonical_form(&t, &opts()).unwrap(), canonical_form(&rotated, &opts()).unwrap());
        let mirror = t.mirror();
        assert_eq!(canonical_form(&t, &opts()).unwrap(), canonical_form(&mirror, &opts()).unwrap());
        let split = OrbitOptions { mirror_quotient: false, ..opts() };
        assert_ne!(canonical_form(&t, &split).unwrap(), canonical_form(&mirror, &split).unwrap());
    }

    #[test]
    fn equivalence_meets_and_separates() {
        match equivalent(&code(""), &code("ABCabc"), &opts()).unwrap() {
            Verdict::Equivalent { meet, path_a, path_b } => {
                assert_eq!(meet.0, "");
                assert!(path_a.is_empty());
                assert_eq!(replay(&code("ABCabc"), &path_b, &opts()).unwrap().0, "");
            }
            Verdict::Distinct => panic!("descending word is an unknot"),
        }
        match equivalent(&code("AbCaBc"), &code(""), &opts()).unwrap() {
            Verdict::Distinct => {}
            Verdict::Equivalent { .. } => panic!("trefoil is knotted"),
        }
    }

    #[test]
    fn certificates_replay_to_their_state() {
        let c = code("ABCabc");
        let orbit = explore(&c, &opts()).unwrap();
        for key in orbit.visited.keys() {
            let path = orbit.certificate(key).unwrap();
            let reached = replay(&c, &path, &opts()).unwrap();
            assert_eq!(state_key(&representative(&reached), true), *key);
        }
    }

    #[test]
    fn connecting_moves_finds_single_step_links() {
        // kinked trefoil -> trefoil: one R1 away
        let kinked = code("O1+ U2+ O3+ U1+ O2+ U3+ O4+ U4+");
        let trefoil = code("O1+ U2+ O3+ U1+ O2+ U3+");
        let chains = connecting_moves(&kinked, &trefoil, &opts()).unwrap();
        assert!(!chains.is_empty());
        assert!(chains.iter().any(|c| c.iter().any(|r| r.kind == MoveKind::R1)));
        for chain in &chains {
            let end = replay(&kinked, &chain, &opts()).unwrap();
            assert_eq!(end, state_key(&trefoil, true));
        }
        // no single move separates a trefoil from the empty word
        assert!(connecting_moves(&trefoil, &code(""), &opts()).unwrap().is_empty());
    }

    #[test]
    fn truncation_is_flagged_and_fatal_for_canonical_forms() {
        let tight = OrbitOptions { max_states: 1, ..opts() };
        let orbit = explore(&code("ABCabc"), &tight).unwrap();
        assert!(orbit.truncated);
        assert_eq!(canonical_form(&code("ABCabc"), &tight), Err(OrbitError::Truncated));
    }

    #[test]
    fn exploration_is_thread_count_independent() {
        let c = code("ABCabc");
        let base = explore(&c, &opts()).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let solo = pool.install(|| explore(&c, &opts()).unwrap());
        assert_eq!(
            base.visited.keys().collect::<Vec<_>>(),
            solo.visited.keys().collect::<Vec<_>>()
        );
        assert_eq!(base.canonical, solo.canonical);
        for key in base.visited.keys() {
            assert_eq!(base.certificate(key), solo.certificate(key));
        }
    }
}
