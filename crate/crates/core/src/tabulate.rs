//! Prime-knot tabulation.
//!
//! The level-n universe is every realizable, reduced, prime diagram with n
//! crossings, one state per symmetry class. Each member contributes its
//! successor diagrams — single moves plus the bounce chains that climb over
//! n crossings and walk back down, which some same-knot pairs need to meet.
//! A successor below n crossings, or one at n that is no longer reduced and
//! prime, marks the member's whole class as a smaller knot in disguise;
//! successors at n that stay in the universe weld classes together.
//! Surviving components are the prime knots with crossing number n.
//! Level-preserving moves are invertible, so a component's least member key
//! is exactly the canonical form its members agree on.
//!
//! The expensive per-member expansions run shadow-parallel and merge in
//! enumeration order, so tables are identical whatever the worker count. An
//! optional journal records each completed shadow and lets an interrupted
//! build resume where it stopped.

use crate::code::{DiagramKey, GaussCode, Layer, Pass, Sign};
use crate::oracle::normalized_bracket;
use crate::orbit::{representative, state_key, successors, OrbitOptions};
use crate::planarity::{is_realizable, witness_signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Mutex;

/// An unsigned double-occurrence word with the layers forgotten, canonical
/// under rotation, reversal, and relabeling.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Shadow(Vec<u16>);

impl Shadow {
    pub fn word(&self) -> &[u16] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len() / 2
    }

    /// The diagram over this word in which bit i-1 of `mask` puts label i's
    /// first visit on the over layer.
    pub fn layered(&self, mask: u64) -> GaussCode {
        let mut seen = vec![false; self.n() + 1];
        let passes = self
            .0
            .iter()
            .map(|&label| {
                let first = !seen[label as usize];
                seen[label as usize] = true;
                let over = (mask >> (label - 1)) & 1 == 1;
                let layer = if first == over { Layer::Over } else { Layer::Under };
                Pass { layer, label, sign: Sign::Unknown }
            })
            .collect();
        GaussCode::from_passes(passes).expect("a double-occurrence word layers into a code")
    }
}

impl fmt::Display for Shadow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, label) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{label}")?;
        }
        Ok(())
    }
}

/// Least word over all rotations, both directions, relabeled by first
/// occurrence.
fn canonical_word(word: &[u16]) -> Vec<u16> {
    let len = word.len();
    if len == 0 {
        return Vec::new();
    }
    let relabeled = |iter: Box<dyn Iterator<Item = u16>>| -> Vec<u16> {
        let mut map = vec![0u16; len + 1];
        let mut next = 0u16;
        iter.map(|l| {
            if map[l as usize] == 0 {
                next += 1;
                map[l as usize] = next;
            }
            map[l as usize]
        })
        .collect()
    };
    let mut best: Option<Vec<u16>> = None;
    for s in 0..len {
        for rev in [false, true] {
            let cand = relabeled(if rev {
                Box::new((0..len).map(move |i| word[(s + len - i) % len]))
            } else {
                Box::new((0..len).map(move |i| word[(s + i) % len]))
            });
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap()
}

/// All realizable single-curve double-occurrence words with n crossings, one
/// per symmetry class, in sorted order. Second visits are only placed an odd
/// distance after the first — the evenness every realizable chord satisfies
/// — which prunes the word tree long before the planarity check runs.
pub fn enumerate_shadows(n: usize) -> Vec<Shadow> {
    if n == 0 {
        return vec![Shadow(Vec::new())];
    }
    let len = 2 * n;
    let mut word: Vec<u16> = Vec::with_capacity(len);
    let mut first_at = vec![usize::MAX; n + 1];
    let mut out = Vec::new();
    fn place(
        word: &mut Vec<u16>,
        first_at: &mut Vec<usize>,
        next_new: u16,
        open: usize,
        n: usize,
        out: &mut Vec<Shadow>,
    ) {
        let len = 2 * n;
        let pos = word.len();
        if pos == len {
            if word[..] == canonical_word(word)[..] {
                let shadow = Shadow(word.clone());
                if is_realizable(&shadow.layered(!0)) {
                    out.push(shadow);
                }
            }
            return;
        }
        if (next_new as usize) < n {
            word.push(next_new + 1);
            first_at[(next_new + 1) as usize] = pos;
            place(word, first_at, next_new + 1, open + 1, n, out);
            first_at[(next_new + 1) as usize] = usize::MAX;
            word.pop();
        }
        for l in 1..=next_new {
            let f = first_at[l as usize];
            if f != usize::MAX && (pos - f) % 2 == 1 {
                word.push(l);
                first_at[l as usize] = usize::MAX;
                place(word, first_at, next_new, open - 1, n, out);
                first_at[l as usize] = f;
                word.pop();
            }
        }
    }
    place(&mut word, &mut first_at, 0, 0, n, &mut out);
    out.sort();
    out
}

/// An arc strictly between two positions is complete when every label it
/// touches has both passes inside.
fn arc_complete(code: &GaussCode, from: usize, to: usize) -> bool {
    let len = code.len();
    let mut count = vec![0u8; code.n() + 1];
    let mut i = (from + 1) % len;
    while i != to {
        count[code.passes()[i].label as usize] += 1;
        i = (i + 1) % len;
    }
    count.into_iter().all(|c| c != 1)
}

/// No crossing is nugatory: neither open arc between any crossing's two
/// passes is a complete collection.
pub fn is_reduced(code: &GaussCode) -> bool {
    (1..=code.n() as u16).all(|label| {
        let (p, q) = code.positions_of(label);
        !arc_complete(code, p, q) && !arc_complete(code, q, p)
    })
}

/// No pair of cyclic cut points splits the word into two complete arcs that
/// both hold a crossing — the visible connected-sum presentations.
pub fn is_prime_diagram(code: &GaussCode) -> bool {
    let len = code.len();
    let n = code.n();
    if n == 0 {
        return true;
    }
    for start in 0..len {
        let mut count = vec![0u8; n + 1];
        let mut open = 0usize;
        for d in 1..len {
            let label = code.passes()[(start + d - 1) % len].label as usize;
            if count[label] == 0 {
                count[label] = 1;
                open += 1;
            } else {
                count[label] = 2;
                open -= 1;
            }
            if open == 0 && d < len {
                return false;
            }
        }
    }
    true
}

/// One prime knot with crossing number n: the least member key names the
/// class, and `count` is how many universe states it absorbed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnotClass {
    pub key: DiagramKey,
    pub representative: GaussCode,
    pub count: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KnotTable {
    pub n: usize,
    pub mirror_quotient: bool,
    pub classes: Vec<KnotClass>,
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("unsupported {0} version `{1}`")]
    Version(&'static str, String),
    #[error("corrupt {0}: {1}")]
    Corrupt(&'static str, String),
}

const TABLE_FORMAT: &str = "knot-table";
const JOURNAL_FORMAT: &str = "knot-journal";
const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TableHeader {
    format: String,
    version: u32,
    n: usize,
    mirror_quotient: bool,
}

#[derive(Serialize, Deserialize, PartialEq, Eq, Debug)]
struct JournalHeader {
    format: String,
    version: u32,
    n: usize,
    mirror_quotient: bool,
    max_fragments: usize,
    twist_arity: usize,
}

#[derive(Serialize, Deserialize)]
struct ClassLine {
    n: usize,
    key: String,
    representative: String,
    count: usize,
}

#[derive(Serialize, Deserialize)]
struct ShadowRecord {
    shadow: String,
    members: Vec<MemberRecord>,
}

#[derive(Serialize, Deserialize, Clone)]
struct MemberRecord {
    key: String,
    drops: bool,
    unions: Vec<String>,
}

/// The distinct universe states a shadow's layerings produce. Every
/// layering admits exactly two signings — the two reflections of the
/// underlying curve — and they are different states, so both go in. With
/// the mirror quotient the first-visit-under half of the layerings are
/// global layer flips whose states the quotient already folds onto the
/// enumerated half; without it every layering is spread.
fn member_states(shadow: &Shadow, quotient: bool) -> Vec<DiagramKey> {
    let n = shadow.n();
    let mut states = BTreeSet::new();
    if n == 0 {
        states.insert(DiagramKey(String::new()));
        return states.into_iter().collect();
    }
    let masks: Vec<u64> = if quotient {
        (0..(1u64 << (n - 1))).map(|half| half << 1 | 1).collect()
    } else {
        (0..(1u64 << n)).collect()
    };
    for mask in masks {
        let code = shadow.layered(mask);
        let signed = witness_signed(&code).expect("enumerated shadows are realizable");
        let flipped: Vec<Sign> = signed.signs().iter().map(|s| s.flip()).collect();
        states.insert(state_key(&signed, quotient));
        states.insert(state_key(&signed.with_signs(&flipped), quotient));
    }
    states.into_iter().collect()
}

/// Successor consequences of one member: does anything show the knot is
/// simpler than n crossings, and which universe states must share its class.
fn member_edges(key: &DiagramKey, opts: &OrbitOptions) -> MemberRecord {
    let state = representative(key);
    let n = state.n();
    let mut drops = false;
    let mut unions = BTreeSet::new();
    for (res, _) in successors(&state, opts) {
        if res.n() < n {
            drops = true;
        } else if is_reduced(&res) && is_prime_diagram(&res) {
            unions.insert(state_key(&res, opts.mirror_quotient));
        } else {
            drops = true;
        }
    }
    MemberRecord {
        key: key.0.clone(),
        drops,
        unions: unions.into_iter().map(|k| k.0).collect(),
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(size: usize) -> UnionFind {
        UnionFind { parent: (0..size).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Build the prime-knot table for crossing number `n`, keeping a journal of
/// completed shadows at `journal` when given: a rerun over the same journal
/// skips the recorded work and still merges everything in enumeration
/// order, so an interrupted build finishes to the identical table.
pub fn build_table_journaled(
    n: usize,
    opts: &OrbitOptions,
    journal: Option<&Path>,
) -> Result<KnotTable, TableError> {
    let quotient = opts.mirror_quotient;
    let shadows: Vec<Shadow> = enumerate_shadows(n)
        .into_iter()
        .filter(|s| {
            let probe = s.layered(!0);
            is_reduced(&probe) && is_prime_diagram(&probe)
        })
        .collect();
    let members: Vec<Vec<DiagramKey>> =
        shadows.par_iter().map(|s| member_states(s, quotient)).collect();

    let mut recorded: BTreeMap<String, Vec<MemberRecord>> = BTreeMap::new();
    let writer = match journal {
        Some(path) if path.exists() => {
            recorded = load_journal(path, n, opts)?;
            Some(BufWriter::new(OpenOptions::new().append(true).open(path)?))
        }
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let header = JournalHeader {
                format: JOURNAL_FORMAT.into(),
                version: FORMAT_VERSION,
                n,
                mirror_quotient: quotient,
                max_fragments: opts.max_fragments,
                twist_arity: opts.twist_arity,
            };
            writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
            w.flush()?;
            Some(w)
        }
        None => None,
    };

    let todo: Vec<usize> = (0..shadows.len())
        .filter(|&i| !recorded.contains_key(&shadows[i].to_string()))
        .collect();
    let sink = Mutex::new((writer, Ok::<(), std::io::Error>(())));
    let fresh: Vec<(usize, Vec<MemberRecord>)> = todo
        .par_iter()
        .map(|&i| {
            let records: Vec<MemberRecord> =
                members[i].iter().map(|key| member_edges(key, opts)).collect();
            let line = ShadowRecord {
                shadow: shadows[i].to_string(),
                members: records.clone(),
            };
            let mut guard = sink.lock().expect("journal sink");
            let (writer, status) = &mut *guard;
            if let (Some(w), Ok(())) = (writer, &*status) {
                let write = serde_json::to_string(&line)
                    .map_err(std::io::Error::other)
                    .and_then(|text| writeln!(w, "{text}").and_then(|()| w.flush()));
                if let Err(e) = write {
                    *status = Err(e);
                }
            }
            (i, records)
        })
        .collect();
    let (_, journal_status) = sink.into_inner().expect("journal sink");
    journal_status?;
    let mut per_shadow: Vec<Vec<MemberRecord>> = vec![Vec::new(); shadows.len()];
    for (i, records) in fresh {
        per_shadow[i] = records;
    }
    for (i, shadow) in shadows.iter().enumerate() {
        if let Some(records) = recorded.remove(&shadow.to_string()) {
            per_shadow[i] = records;
        }
    }

    // weld in enumeration order; results are order-independent anyway
    let index: BTreeMap<&DiagramKey, usize> = members
        .iter()
        .flatten()
        .enumerate()
        .map(|(pos, key)| (key, pos))
        .collect();
    let total = index.len();
    let flat: Vec<&DiagramKey> = members.iter().flatten().collect();
    let mut uf = UnionFind::new(total);
    let mut dropped = vec![false; total];
    for (i, records) in per_shadow.iter().enumerate() {
        for (j, record) in records.iter().enumerate() {
            debug_assert_eq!(record.key, members[i][j].0);
            let me = index[&members[i][j]];
            if record.drops {
                dropped[me] = true;
            }
            for target in &record.unions {
                let target = DiagramKey(target.clone());
                let Some(&other) = index.get(&&target) else {
                    panic!("move result `{target}` is reduced and prime at level {n} but missing from the universe");
                };
                uf.union(me, other);
            }
        }
    }
    let mut best: BTreeMap<usize, (DiagramKey, usize, bool)> = BTreeMap::new();
    for pos in 0..total {
        let root = uf.find(pos);
        let entry = best
            .entry(root)
            .or_insert_with(|| (flat[pos].clone(), 0, false));
        if *flat[pos] < entry.0 {
            entry.0 = flat[pos].clone();
        }
        entry.1 += 1;
        entry.2 |= dropped[pos];
    }
    let mut classes: Vec<KnotClass> = best
        .into_values()
        .filter(|(_, _, drops)| !drops)
        .map(|(key, count, _)| KnotClass {
            representative: representative(&key),
            key,
            count,
        })
        .collect();
    classes.sort_by(|a, b| a.key.cmp(&b.key));
    Ok(KnotTable { n, mirror_quotient: quotient, classes })
}

/// `build_table_journaled` without a journal; never touches the filesystem.
pub fn build_table(n: usize, opts: &OrbitOptions) -> KnotTable {
    build_table_journaled(n, opts, None).expect("no journal, no io")
}

fn load_journal(
    path: &Path,
    n: usize,
    opts: &OrbitOptions,
) -> Result<BTreeMap<String, Vec<MemberRecord>>, TableError> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let head = lines
        .next()
        .ok_or_else(|| TableError::Corrupt("journal", "missing header".into()))??;
    let header: JournalHeader = serde_json::from_str(&head)
        .map_err(|e| TableError::Corrupt("journal", format!("bad header: {e}")))?;
    if header.format != JOURNAL_FORMAT || header.version != FORMAT_VERSION {
        return Err(TableError::Version(
            "journal",
            format!("{} v{}", header.format, header.version),
        ));
    }
    let wanted = JournalHeader {
        format: JOURNAL_FORMAT.into(),
        version: FORMAT_VERSION,
        n,
        mirror_quotient: opts.mirror_quotient,
        max_fragments: opts.max_fragments,
        twist_arity: opts.twist_arity,
    };
    if header != wanted {
        return Err(TableError::Corrupt(
            "journal",
            format!("journal was built with different parameters ({head})"),
        ));
    }
    let mut out = BTreeMap::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: ShadowRecord = serde_json::from_str(&line)
            .map_err(|e| TableError::Corrupt("journal", format!("bad record: {e}")))?;
        out.insert(record.shadow, record.members);
    }
    Ok(out)
}

pub fn save_table(table: &KnotTable, path: &Path) -> Result<(), TableError> {
    let mut w = BufWriter::new(File::create(path)?);
    let header = TableHeader {
        format: TABLE_FORMAT.into(),
        version: FORMAT_VERSION,
        n: table.n,
        mirror_quotient: table.mirror_quotient,
    };
    writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
    for class in &table.classes {
        let line = ClassLine {
            n: table.n,
            key: class.key.0.clone(),
            representative: class.representative.render_tokens(),
            count: class.count,
        };
        writeln!(w, "{}", serde_json::to_string(&line).expect("class serializes"))?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_table(path: &Path) -> Result<KnotTable, TableError> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let head = lines
        .next()
        .ok_or_else(|| TableError::Corrupt("table", "missing header".into()))??;
    let header: TableHeader = serde_json::from_str(&head)
        .map_err(|e| TableError::Corrupt("table", format!("bad header: {e}")))?;
    if header.format != TABLE_FORMAT || header.version != FORMAT_VERSION {
        return Err(TableError::Version(
            "table",
            format!("{} v{}", header.format, header.version),
        ));
    }
    let mut classes = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let class: ClassLine = serde_json::from_str(&line)
            .map_err(|e| TableError::Corrupt("table", format!("bad class: {e}")))?;
        if class.n != header.n {
            return Err(TableError::Corrupt(
                "table",
                format!("class at n={} in a table for n={}", class.n, header.n),
            ));
        }
        let representative = GaussCode::parse_tokens(&class.representative)
            .map_err(|e| TableError::Corrupt("table", format!("bad representative: {e}")))?;
        classes.push(KnotClass { key: DiagramKey(class.key), representative, count: class.count });
    }
    Ok(KnotTable { n: header.n, mirror_quotient: header.mirror_quotient, classes })
}

/// Pairs of distinct classes whose normalized brackets coincide. Distinct
/// knots can share a bracket, so hits are worth reporting but prove nothing.
pub fn bracket_coincidences(table: &KnotTable) -> Vec<(DiagramKey, DiagramKey)> {
    let brackets: Vec<_> = table
        .classes
        .iter()
        .map(|c| {
            let b = normalized_bracket(&c.representative).expect("representatives are realizable");
            if table.mirror_quotient { b.mirror_min() } else { b }
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..table.classes.len() {
        for j in i + 1..table.classes.len() {
            if brackets[i] == brackets[j] {
                out.push((table.classes[i].key.clone(), table.classes[j].key.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> GaussCode {
        GaussCode::parse(s).unwrap()
    }

    #[test]
    fn smallest_shadow_lists() {
        assert_eq!(enumerate_shadows(0), vec![Shadow(Vec::new())]);
        assert_eq!(enumerate_shadows(1), vec![Shadow(vec![1, 1])]);
        assert_eq!(enumerate_shadows(2), vec![Shadow(vec![1, 1, 2, 2])]);
        let three = enumerate_shadows(3);
        assert!(three.contains(&Shadow(vec![1, 2, 3, 1, 2, 3])));
        for s in &three {
            assert_eq!(s.word(), canonical_word(s.word()));
        }
        let mut sorted = three.clone();
        sorted.sort();
        assert_eq!(three, sorted);
    }

    #[test]
    fn nugatory_crossings_are_spotted() {
        assert!(!is_reduced(&code("Aa")));
        assert!(!is_reduced(&code("AaBb")));
        assert!(is_reduced(&code("AbCaBc")));
        // a kink wearing a whole tangle on its loop is still nugatory
        assert!(!is_reduced(&code("O1 O2 U3 U2 O3 U1")));
    }

    #[test]
    fn connected_sums_are_not_prime() {
        assert!(is_prime_diagram(&code("AbCaBc")));
        assert!(is_prime_diagram(&code("Aa")));
        assert!(!is_prime_diagram(&code("AaBb")));
        assert!(!is_prime_diagram(&code("O1 U2 O3 U1 O2 U3 O4 U5 O6 U4 O5 U6")));
    }

    #[test]
    fn layering_respects_the_mask() {
        let s = Shadow(vec![1, 2, 3, 1, 2, 3]);
        assert_eq!(s.layered(0b101).render_tokens(), "O1 U2 O3 U1 O2 U3");
        assert_eq!(s.layered(0b111).render_tokens(), "O1 O2 O3 U1 U2 U3");
    }

    #[test]
    fn trefoil_table() {
        let table = build_table(3, &OrbitOptions::default());
        assert_eq!(table.classes.len(), 1);
        let trefoil = state_key(&witness_signed(&code("AbCaBc")).unwrap(), true);
        assert_eq!(table.classes[0].key, trefoil);
    }

    #[test]
    fn split_trefoil_chiralities_without_the_quotient() {
        let opts = OrbitOptions { mirror_quotient: false, ..OrbitOptions::default() };
        let table = build_table(3, &opts);
        assert_eq!(table.classes.len(), 2);
        assert_ne!(table.classes[0].key, table.classes[1].key);
    }

    #[test]
    fn small_tables_have_no_bracket_coincidences() {
        for n in 3..=5 {
            let table = build_table(n, &OrbitOptions::default());
            assert_eq!(bracket_coincidences(&table), vec![]);
        }
    }

    #[test]
    fn table_roundtrips_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t3.jsonl");
        let table = build_table(3, &OrbitOptions::default());
        save_table(&table, &path).unwrap();
        assert_eq!(load_table(&path).unwrap(), table);
    }

    #[test]
    fn unknown_versions_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        std::fs::write(
            &path,
            "{\"format\":\"knot-table\",\"version\":9,\"n\":3,\"mirror_quotient\":true}\n",
        )
        .unwrap();
        assert!(matches!(load_table(&path), Err(TableError::Version(_, _))));
    }

    #[test]
    fn journaled_build_resumes_to_the_same_table() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t5.journal");
        let opts = OrbitOptions::default();
        let fresh = build_table_journaled(5, &opts, Some(&path)).unwrap();
        // cut the journal down to the header and one record, as if killed
        let text = std::fs::read_to_string(&path).unwrap();
        let kept: Vec<&str> = text.lines().take(2).collect();
        std::fs::write(&path, kept.join("\n") + "\n").unwrap();
        let resumed = build_table_journaled(5, &opts, Some(&path)).unwrap();
        assert_eq!(fresh, resumed);
        // and a journal for the wrong run is refused
        assert!(build_table_journaled(6, &opts, Some(&path)).is_err());
    }

    // the shadow symmetry quotient must only cut duplicates: spreading every
    // raw double-occurrence word gives the identical universe
    #[test]
    fn shadow_quotient_loses_no_universe_states() {
        fn raw_words(n: usize) -> Vec<Vec<u16>> {
            let mut out = Vec::new();
            let mut word = Vec::new();
            fn rec(word: &mut Vec<u16>, open: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u16>>) {
                if word.len() == 2 * n {
                    out.push(word.clone());
                    return;
                }
                let used = open.len();
                for l in 1..=used.min(n) as u16 {
                    if open[(l - 1) as usize] == 1 {
                        open[(l - 1) as usize] = 2;
                        word.push(l);
                        rec(word, open, n, out);
                        word.pop();
                        open[(l - 1) as usize] = 1;
                    }
                }
                if used < n {
                    open.push(1);
                    word.push(used as u16 + 1);
                    rec(word, open, n, out);
                    word.pop();
                    open.pop();
                }
            }
            rec(&mut word, &mut Vec::new(), n, &mut out);
            out
        }
        for n in 1..=5 {
            let quotiented: BTreeSet<DiagramKey> = enumerate_shadows(n)
                .iter()
                .filter(|s| {
                    let probe = s.layered(!0);
                    is_reduced(&probe) && is_prime_diagram(&probe)
                })
                .flat_map(|s| member_states(s, true))
                .collect();
            let mut brute: BTreeSet<DiagramKey> = BTreeSet::new();
            for word in raw_words(n) {
                let shadow = Shadow(word);
                let probe = shadow.layered(!0);
                if !is_realizable(&probe) || !is_reduced(&probe) || !is_prime_diagram(&probe) {
                    continue;
                }
                for mask in 0..(1u64 << n) {
                    let signed = witness_signed(&shadow.layered(mask)).unwrap();
                    let flipped: Vec<Sign> =
                        signed.signs().iter().map(|s| s.flip()).collect();
                    brute.insert(state_key(&signed, true));
                    brute.insert(state_key(&signed.with_signs(&flipped), true));
                }
            }
            assert_eq!(quotiented, brute, "universe mismatch at n={n}");
        }
    }
}
