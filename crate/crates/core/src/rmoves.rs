//! Local crossing-monotonic moves read off the faces of an embedded
//! diagram: kink removal (monogon face), parallel-clasp removal (bigon face
//! whose strands do not alternate), and the triangle slide.
//!
//! `reduce` closes a diagram under these moves and returns the state with
//! the fewest crossings, breaking ties by diagram key.

use crate::code::{DiagramKey, Fragment, GaussCode, Pass};
use crate::planarity::{dart_arc, embed, is_realizable};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum MoveKind {
    R1,
    R2,
    R3,
    Shift,
    Twist,
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::R1 => "R1",
            MoveKind::R2 => "R2",
            MoveKind::R3 => "R3",
            MoveKind::Shift => "shift",
            MoveKind::Twist => "twist",
        })
    }
}

/// One applied move: what was done where, and the key of the diagram it
/// produced. Fragment positions refer to the canonical presentation of the
/// diagram the move was applied to.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct MoveRecord {
    pub kind: MoveKind,
    pub fragments: Vec<Fragment>,
    pub top: usize,
    pub bottom: usize,
    pub result: DiagramKey,
}

impl fmt::Display for MoveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.kind)?;
        for (i, frag) in self.fragments.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}:{}", frag.start, frag.len)?;
        }
        write!(f, "] {}/{} -> {}", self.top, self.bottom, self.result)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MoveError {
    #[error("site no longer matches the code")]
    Stale,
    #[error("code is not realizable")]
    Unrealizable,
    #[error("box is not valid here: {0}")]
    InvalidBox(&'static str),
}

/// A place where an R-move applies. Positions come in pairs, one pair per
/// involved arc; `expect` pins the passes the site was found against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RSite {
    pub kind: MoveKind,
    pub positions: Vec<usize>,
    pub expect: Vec<Pass>,
}

/// All monogon, bigon, and triangle sites of the code, in deterministic
/// order. Bigon and triangle sites are read from the witness embedding;
/// a non-realizable code only reports its monogons.
pub fn r_sites(code: &GaussCode) -> Vec<RSite> {
    let total = code.len();
    let passes = code.passes();
    let mut out = Vec::new();
    for p in 0..total {
        let q = (p + 1) % total;
        if p != q && passes[p].label == passes[q].label {
            out.push(RSite {
                kind: MoveKind::R1,
                positions: vec![p, q],
                expect: vec![passes[p], passes[q]],
            });
        }
    }
    if code.n() < 2 {
        return out;
    }
    let Some((_, map)) = embed(code) else {
        return out;
    };
    for face in &map.faces {
        let mut arcs: Vec<usize> = face.iter().map(|&d| dart_arc(d)).collect();
        arcs.sort_unstable();
        let positions: Vec<usize> = arcs.iter().flat_map(|&a| [a, (a + 1) % total]).collect();
        let distinct: HashSet<usize> = positions.iter().copied().collect();
        if distinct.len() != positions.len() {
            continue;
        }
        match arcs.len() {
            2 => {
                if passes[positions[0]].label == passes[positions[1]].label {
                    continue;
                }
                if passes[positions[0]].layer != passes[positions[1]].layer {
                    continue;
                }
                out.push(RSite {
                    kind: MoveKind::R2,
                    positions: positions.clone(),
                    expect: positions.iter().map(|&p| passes[p]).collect(),
                });
            }
            3 => {
                let slidable = arcs
                    .iter()
                    .any(|&a| passes[a].layer == passes[(a + 1) % total].layer);
                if !slidable {
                    continue;
                }
                out.push(RSite {
                    kind: MoveKind::R3,
                    positions: positions.clone(),
                    expect: positions.iter().map(|&p| passes[p]).collect(),
                });
            }
            _ => {}
        }
    }
    out
}

/// Apply an R-move at a previously found site. Fails if the code changed
/// since the site was computed.
pub fn apply_r(code: &GaussCode, site: &RSite) -> Result<(GaussCode, MoveRecord), MoveError> {
    let total = code.len();
    for (i, &p) in site.positions.iter().enumerate() {
        if p >= total || code.passes()[p] != site.expect[i] {
            return Err(MoveError::Stale);
        }
    }
    let next = match site.kind {
        MoveKind::R1 | MoveKind::R2 => {
            let doomed: HashSet<u16> = site.expect.iter().map(|p| p.label).collect();
            let keep: Vec<Pass> =
                code.passes().iter().filter(|p| !doomed.contains(&p.label)).copied().collect();
            GaussCode::from_passes(keep).expect("pass removal keeps the word valid")
        }
        MoveKind::R3 => {
            let mut passes = code.passes().to_vec();
            for pair in site.positions.chunks(2) {
                passes.swap(pair[0], pair[1]);
            }
            GaussCode::from_passes(passes).expect("triangle slide keeps the word valid")
        }
        _ => panic!("not an R-move site"),
    };
    let record = MoveRecord {
        kind: site.kind,
        fragments: site.positions.chunks(2).map(|pair| Fragment::open(pair[0], 2)).collect(),
        top: 0,
        bottom: 0,
        result: next.key(),
    };
    Ok((next, record))
}

pub(crate) const R_CLOSURE_CAP: usize = 200_000;

/// Everything reachable through R-moves, keyed by diagram key. Crossing
/// counts never increase along the way.
pub(crate) struct RClosure {
    pub counts: HashMap<DiagramKey, usize>,
    pub parents: HashMap<DiagramKey, (DiagramKey, MoveRecord)>,
    pub root: DiagramKey,
    pub truncated: bool,
}

pub(crate) fn r_closure(code: &GaussCode, cap: usize) -> RClosure {
    let root = code.key();
    let mut counts = HashMap::new();
    counts.insert(root.clone(), code.n());
    let mut parents = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(root.clone());
    let mut truncated = false;
    while let Some(key) = queue.pop_front() {
        let state = GaussCode::parse_tokens(&key.0).expect("keys round-trip");
        for site in r_sites(&state) {
            let (next, record) = apply_r(&state, &site).expect("fresh site");
            let nkey = record.result.clone();
            if counts.contains_key(&nkey) {
                continue;
            }
            if counts.len() >= cap {
                truncated = true;
                continue;
            }
            counts.insert(nkey.clone(), next.n());
            parents.insert(nkey.clone(), (key.clone(), record));
            queue.push_back(nkey);
        }
    }
    RClosure { counts, parents, root, truncated }
}

impl RClosure {
    pub fn best(&self) -> (&DiagramKey, usize) {
        let (key, &count) = self
            .counts
            .iter()
            .min_by(|a, b| (a.1, a.0).cmp(&(b.1, b.0)))
            .expect("closure holds at least the root");
        (key, count)
    }

    pub fn path_to(&self, target: &DiagramKey) -> Vec<MoveRecord> {
        let mut path = Vec::new();
        let mut cur = target;
        while *cur != self.root {
            let (parent, record) = &self.parents[cur];
            path.push(record.clone());
            cur = parent;
        }
        path.reverse();
        path
    }
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub code: GaussCode,
    pub path: Vec<MoveRecord>,
    pub truncated: bool,
}

/// Fully reduce a diagram under R-moves; the result is the reachable state
/// with the fewest crossings (ties broken by key) together with one move
/// path to it.
pub fn reduce(code: &GaussCode) -> Result<Reduction, MoveError> {
    if !is_realizable(code) {
        return Err(MoveError::Unrealizable);
    }
    let closure = r_closure(code, R_CLOSURE_CAP);
    let (key, _) = closure.best();
    let key = key.clone();
    Ok(Reduction {
        code: GaussCode::parse_tokens(&key.0).expect("keys round-trip"),
        path: closure.path_to(&key),
        truncated: closure.truncated,
    })
}
