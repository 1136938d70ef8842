//! Rectangular tangle boxes and the crossing-monotonic box rewrites.
//!
//! A box collects disjoint fragments of the curve that together cover a
//! subset of crossings completely, drawn inside a rectangle whose free ends
//! (legs) attach to the top or bottom edge. Two rewrites act on boxes:
//!
//! * `twist` rotates the rectangle a half turn about its vertical axis and
//!   repairs the legs with half-twist braids above and below;
//! * `apply_shift` slides a strand that crosses every top leg just outside
//!   the box across its face so it crosses every bottom leg instead.
//!
//! Both replace a tangle by an equivalent one, so they never change the
//! underlying knot; unlike the R-moves they can leave the crossing count
//! unchanged or trade it up and down, which is what lets searches escape
//! local minima while staying count-monotonic overall.

use crate::code::{Fragment, GaussCode, Layer, Pass, Sign};
use crate::planarity::{embed, is_realizable_signed, witness_signed, DiagramMap, System};
use crate::rmoves::{MoveError, MoveKind, MoveRecord};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet};

/// Which end of an open fragment a leg hangs off. The curve enters the box
/// at `Start` and leaves it at `Stop`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum End {
    Start,
    Stop,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Leg {
    pub fragment: usize,
    pub end: End,
}

/// A box drawing: fragments plus the attachment order of their ends along
/// the rectangle edges. `top` and `bottom` both run left to right; the
/// boundary circle reads top left-to-right then bottom right-to-left.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct TangleBox {
    pub fragments: Vec<Fragment>,
    pub top: Vec<Leg>,
    pub bottom: Vec<Leg>,
}

impl TangleBox {
    pub fn new(
        code: &GaussCode,
        fragments: Vec<Fragment>,
        top: Vec<Leg>,
        bottom: Vec<Leg>,
    ) -> Result<TangleBox, MoveError> {
        let bx = TangleBox { fragments, top, bottom };
        validate_box(code, &bx)?;
        Ok(bx)
    }

    pub fn leg_count(&self) -> usize {
        self.top.len() + self.bottom.len()
    }

    /// Legs in boundary-circle order.
    pub fn circling(&self) -> Vec<Leg> {
        self.top.iter().chain(self.bottom.iter().rev()).copied().collect()
    }

    fn mask(&self, total: usize) -> Vec<bool> {
        let mut m = vec![false; total];
        for f in &self.fragments {
            for p in f.positions(total) {
                m[p] = true;
            }
        }
        m
    }
}

fn validate_box(code: &GaussCode, bx: &TangleBox) -> Result<(), MoveError> {
    let total = code.len();
    if total == 0 {
        return if bx.fragments.is_empty() && bx.top.is_empty() && bx.bottom.is_empty() {
            Ok(())
        } else {
            Err(MoveError::InvalidBox("empty code has no boxes"))
        };
    }
    let mut mask = vec![false; total];
    for f in &bx.fragments {
        if f.closed {
            if bx.fragments.len() != 1 || !bx.top.is_empty() || !bx.bottom.is_empty() {
                return Err(MoveError::InvalidBox("closed fragment must be the whole box"));
            }
            continue;
        }
        if f.start >= total.max(1) || f.len >= total.max(1) {
            return Err(MoveError::InvalidBox("fragment out of range"));
        }
        for p in f.positions(total) {
            if mask[p] {
                return Err(MoveError::InvalidBox("fragments overlap"));
            }
            mask[p] = true;
        }
    }
    for f in &bx.fragments {
        if !f.closed && f.len == 0 {
            // a point sits on arc start -> start+1; both ends must be outside
            if mask[f.start % total.max(1)] && mask[(f.start + 1) % total.max(1)] {
                return Err(MoveError::InvalidBox("zero-length fragment on an interior arc"));
            }
        }
    }
    // complete: every touched crossing contributes both passes
    for (p, pass) in code.passes().iter().enumerate() {
        if mask[p] {
            let (a, b) = code.positions_of(pass.label);
            if !(mask[a] && mask[b]) {
                return Err(MoveError::InvalidBox("crossing only partly covered"));
            }
        }
    }
    // legs: each open fragment end exactly once across top and bottom
    let mut want = BTreeSet::new();
    for (i, f) in bx.fragments.iter().enumerate() {
        if !f.closed {
            want.insert(Leg { fragment: i, end: End::Start });
            want.insert(Leg { fragment: i, end: End::Stop });
        }
    }
    let mut got = BTreeSet::new();
    for &leg in bx.top.iter().chain(&bx.bottom) {
        if !got.insert(leg) {
            return Err(MoveError::InvalidBox("duplicate leg"));
        }
    }
    if got != want {
        return Err(MoveError::InvalidBox("legs do not match fragment ends"));
    }
    Ok(())
}

/// Maximal cyclic runs of a position set, sorted by start. A full set is the
/// single closed fragment.
fn cyclic_runs(total: usize, in_set: &[bool]) -> Vec<Fragment> {
    if in_set.iter().all(|&b| b) {
        return vec![Fragment::whole(total)];
    }
    let mut runs = Vec::new();
    for start in 0..total {
        if in_set[start] && !in_set[(start + total - 1) % total] {
            let mut len = 1;
            while in_set[(start + len) % total] {
                len += 1;
            }
            runs.push(Fragment::open(start, len));
        }
    }
    runs
}

fn dart_origin(d: u32, total: usize) -> usize {
    let a = d as usize / 2;
    if d % 2 == 0 {
        a
    } else {
        (a + 1) % total
    }
}

/// Outward leg darts of every fragment end: the dart of the cut arc that
/// originates inside the box.
fn tip_darts(fragments: &[Fragment], total: usize) -> HashMap<u32, Leg> {
    let mut tips = HashMap::new();
    for (fi, f) in fragments.iter().enumerate() {
        let in_arc = (f.start + total - 1) % total;
        let last = (f.start + f.len - 1) % total;
        tips.insert((2 * in_arc + 1) as u32, Leg { fragment: fi, end: End::Start });
        tips.insert((2 * last) as u32, Leg { fragment: fi, end: End::Stop });
    }
    tips
}

/// Walk the faces of the sub-embedding cut out by the box: arcs with one end
/// outside are severed and the walk U-turns at the stub. The box is drawable
/// in place exactly when each crossing-connected piece of it presents all of
/// its legs on a single face; the returned cycles list the legs of each
/// piece in boundary order. `None` when some piece scatters its legs over
/// several faces.
fn boundary_cycles(
    code: &GaussCode,
    map: &DiagramMap,
    in_box: &[bool],
    fragments: &[Fragment],
) -> Option<Vec<Vec<Leg>>> {
    let total = code.len();
    let tips = tip_darts(fragments, total);
    // pieces: labels joined by arcs interior to the box
    let n = code.n();
    let mut piece = (0..n).collect::<Vec<usize>>();
    fn find(piece: &mut Vec<usize>, x: usize) -> usize {
        if piece[x] != x {
            let r = find(piece, piece[x]);
            piece[x] = r;
        }
        piece[x]
    }
    for p in 0..total {
        let q = (p + 1) % total;
        if in_box[p] && in_box[q] {
            let (a, b) = (code.passes()[p].label as usize - 1, code.passes()[q].label as usize - 1);
            let (ra, rb) = (find(&mut piece, a), find(&mut piece, b));
            piece[ra] = rb;
        }
    }

    let mut visited = vec![false; 4 * n];
    let mut face_tips: Vec<(usize, Vec<Leg>)> = Vec::new(); // (piece, legs in walk order)
    let mut leg_face: HashMap<Leg, usize> = HashMap::new();
    for d0 in 0..4 * n as u32 {
        if visited[d0 as usize] || !in_box[dart_origin(d0, total)] {
            continue;
        }
        let mut legs = Vec::new();
        let root = find(&mut piece, code.passes()[dart_origin(d0, total)].label as usize - 1);
        let mut cur = d0;
        loop {
            visited[cur as usize] = true;
            cur = if in_box[dart_origin(cur ^ 1, total)] {
                map.sigma[(cur ^ 1) as usize]
            } else {
                let leg = tips[&cur];
                leg_face.insert(leg, face_tips.len());
                legs.push(leg);
                map.sigma[cur as usize]
            };
            if cur == d0 {
                break;
            }
        }
        face_tips.push((root, legs));
    }

    // one face per piece carrying all 2*(its fragments) legs
    let mut cycles = Vec::new();
    let mut claimed = HashSet::new();
    for (fi, f) in fragments.iter().enumerate() {
        let root = find(&mut piece, code.passes()[f.start].label as usize - 1);
        if !claimed.insert(root) {
            continue;
        }
        let fx = *leg_face.get(&Leg { fragment: fi, end: End::Start })?;
        let (_, legs) = &face_tips[fx];
        let expect = fragments
            .iter()
            .enumerate()
            .filter(|(_, g)| find(&mut piece, code.passes()[g.start].label as usize - 1) == root)
            .count();
        if legs.len() != 2 * expect {
            return None;
        }
        cycles.push(legs.clone());
    }
    Some(cycles)
}

/// All cyclic leg orders a disjoint union of pieces can present: each piece
/// keeps its own cycle, pieces follow one another as contiguous blocks in
/// any order and rotation. Results are rotation-normalized and deduplicated;
/// reversals are not included (the caller adds them).
fn assemble(cycles: &[Vec<Leg>]) -> Vec<Vec<Leg>> {
    let mut out = BTreeSet::new();
    let mut order: Vec<usize> = Vec::new();
    let mut used = vec![false; cycles.len()];
    fn rec(
        cycles: &[Vec<Leg>],
        order: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut BTreeSet<Vec<Leg>>,
    ) {
        if order.len() == cycles.len() {
            // all rotations of every block
            let mut rots: Vec<usize> = vec![0; order.len()];
            loop {
                let mut cand = Vec::new();
                for (k, &ci) in order.iter().enumerate() {
                    let c = &cycles[ci];
                    cand.extend((0..c.len()).map(|i| c[(i + rots[k]) % c.len()]));
                }
                out.insert({
                    let mut w = cand;
                    let best = (0..w.len().max(1))
                        .map(|r| {
                            let mut x = w.clone();
                            x.rotate_left(r);
                            x
                        })
                        .min()
                        .unwrap_or_default();
                    w = best;
                    w
                });
                // next rotation vector
                let mut k = 0;
                loop {
                    if k == order.len() {
                        return;
                    }
                    rots[k] += 1;
                    if rots[k] < cycles[order[k]].len() {
                        break;
                    }
                    rots[k] = 0;
                    k += 1;
                }
            }
        }
        for i in 0..cycles.len() {
            if !used[i] {
                used[i] = true;
                order.push(i);
                rec(cycles, order, used, out);
                order.pop();
                used[i] = false;
            }
        }
    }
    rec(cycles, &mut order, &mut used, &mut out);
    out.into_iter().collect()
}

/// Every box the diagram supports with at most `max_fragments` fragments,
/// across all crossing subsets and all top/bottom splits of each achievable
/// boundary order. Unsigned codes are drawn with their witness signs first.
/// The whole-diagram box is excluded: rotating it is a global turn of the
/// paper, not a local move.
pub fn enumerate_boxes(code: &GaussCode, max_fragments: usize) -> Vec<TangleBox> {
    let Some((signed, map)) = embed(code) else {
        return Vec::new();
    };
    enumerate_with(&signed, &map, max_fragments).into_iter().map(|(bx, _)| bx).collect()
}

/// Boxes with the frame bit: `true` when the stated left-to-right order is
/// the mirror reading of the embedding's boundary circle. Braid signs depend
/// on it.
fn enumerate_with(code: &GaussCode, map: &DiagramMap, max_fragments: usize) -> Vec<(TangleBox, bool)> {
    let n = code.n();
    let total = code.len();
    let mut out: std::collections::BTreeMap<TangleBox, bool> = std::collections::BTreeMap::new();
    if n == 0 || n > 24 {
        return Vec::new();
    }
    let pos: Vec<(usize, usize)> = (1..=n as u16).map(|l| code.positions_of(l)).collect();
    for mask in 1u32..(1u32 << n) - 1 {
        let mut in_box = vec![false; total];
        for (l, &(p, q)) in pos.iter().enumerate() {
            if mask >> l & 1 == 1 {
                in_box[p] = true;
                in_box[q] = true;
            }
        }
        let frags = cyclic_runs(total, &in_box);
        if frags.len() > max_fragments {
            continue;
        }
        let Some(cycles) = boundary_cycles(code, map, &in_box, &frags) else {
            continue;
        };
        let straight = assemble(&cycles);
        let flipped: Vec<Vec<Leg>> =
            cycles.iter().map(|c| c.iter().rev().copied().collect()).collect();
        let mirrored = assemble(&flipped);
        for (cands, mirror) in [(&straight, false), (&mirrored, true)] {
            for cand in cands {
                let m = cand.len();
                for r in 0..m {
                    for t in 0..=m {
                        let top: Vec<Leg> = (0..t).map(|i| cand[(r + i) % m]).collect();
                        let bottom: Vec<Leg> =
                            (t..m).rev().map(|i| cand[(r + i) % m]).collect();
                        out.entry(TangleBox { fragments: frags.clone(), top, bottom })
                            .or_insert(mirror);
                    }
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Recover the frame bit of a stated box against the embedding: `false`
/// when its boundary circle reads as drawn, `true` when only the mirror
/// reading is achievable. Fails when the box is not drawable in place or its
/// fragments are not the maximal runs of their union.
fn frame_of(code: &GaussCode, map: &DiagramMap, bx: &TangleBox) -> Result<bool, MoveError> {
    let total = code.len();
    let in_box = bx.mask(total);
    let runs = cyclic_runs(total, &in_box);
    if runs != bx.fragments {
        return Err(MoveError::InvalidBox("fragments must be the maximal runs of the cover"));
    }
    let cycles = boundary_cycles(code, map, &in_box, &runs)
        .ok_or(MoveError::InvalidBox("box is not drawable in place"))?;
    let norm = |mut v: Vec<Leg>| -> Vec<Leg> {
        if v.is_empty() {
            return v;
        }
        let best = (0..v.len())
            .map(|r| {
                let mut w = v.clone();
                w.rotate_left(r);
                w
            })
            .min()
            .unwrap();
        v = best;
        v
    };
    let stated = norm(bx.circling());
    if assemble(&cycles).contains(&stated) {
        return Ok(false);
    }
    let flipped: Vec<Vec<Leg>> = cycles.iter().map(|c| c.iter().rev().copied().collect()).collect();
    if assemble(&flipped).contains(&stated) {
        return Ok(true);
    }
    Err(MoveError::InvalidBox("legs are not attached in an achievable order"))
}

/// Can the box be drawn as stated? Encircle it: a fresh curve `Z` crosses
/// each leg arc once, in boundary order, and nothing else. The box drawing
/// exists exactly when the two-curve system still embeds in the sphere.
/// Signed crossings keep their handedness; everything else is free.
pub fn is_box_drawable(code: &GaussCode, bx: &TangleBox) -> bool {
    if validate_box(code, bx).is_err() {
        return false;
    }
    let total = code.len();
    if total == 0 {
        return bx.fragments.is_empty();
    }
    if bx.fragments.len() == 1 && bx.fragments[0].closed {
        return true; // the whole diagram in a box, nothing outside
    }
    // where each leg pierces: (arc, order along the arc)
    let mut on_arc: HashMap<usize, Vec<(u8, usize, End)>> = HashMap::new();
    for (fi, f) in bx.fragments.iter().enumerate() {
        if f.len == 0 {
            on_arc.entry(f.start).or_default().push((1, fi, End::Start));
            on_arc.entry(f.start).or_default().push((2, fi, End::Stop));
        } else {
            let in_arc = (f.start + total - 1) % total;
            let last = (f.start + f.len - 1) % total;
            on_arc.entry(last).or_default().push((0, fi, End::Stop));
            on_arc.entry(in_arc).or_default().push((3, fi, End::Start));
        }
    }
    let n = code.n() as u16;
    let mut z_label: HashMap<Leg, u16> = HashMap::new();
    let mut next = n + 1;
    let mut curve = Vec::with_capacity(total + 2 * bx.leg_count());
    for p in 0..total {
        curve.push(code.passes()[p]);
        if let Some(list) = on_arc.get_mut(&p) {
            list.sort();
            for &(_, fi, end) in list.iter() {
                let leg = Leg { fragment: fi, end };
                let label = *z_label.entry(leg).or_insert_with(|| {
                    let l = next;
                    next += 1;
                    l
                });
                curve.push(Pass { layer: Layer::Under, label, sign: Sign::Unknown });
            }
        }
    }
    let z: Vec<Pass> = bx
        .circling()
        .iter()
        .map(|leg| Pass { layer: Layer::Over, label: z_label[leg], sign: Sign::Unknown })
        .collect();
    System { curves: vec![curve, z] }.realizable()
}

/// Half turn of the box about its vertical axis: every covered pass changes
/// layer, handedness is intrinsic so signs stay, and each edge reads its
/// legs in the opposite order. Involutive. This is a tangle replacement, not
/// a knot move; `twist` is the knot-preserving composite.
pub fn rotate_box(code: &GaussCode, bx: &TangleBox) -> Result<(GaussCode, TangleBox), MoveError> {
    validate_box(code, bx)?;
    if bx.fragments.iter().any(|f| f.closed) {
        return Err(MoveError::InvalidBox("cannot rotate the whole diagram"));
    }
    let total = code.len();
    let mut passes = code.passes().to_vec();
    for f in &bx.fragments {
        for p in f.positions(total) {
            passes[p].layer = passes[p].layer.flip();
        }
    }
    let rotated = GaussCode::from_passes(passes).expect("relayering is structure-preserving");
    let out = TangleBox {
        fragments: bx.fragments.clone(),
        top: bx.top.iter().rev().copied().collect(),
        bottom: bx.bottom.iter().rev().copied().collect(),
    };
    Ok((rotated, out))
}

/// Crossings of a positive half twist on `k` strands, braid word
/// s1 (s2 s1) (s3 s2 s1) ..., in time order. Strands are named by their
/// starting slot; `left`/`right` say who comes in on which side.
struct BraidCrossing {
    left: usize,
    right: usize,
}

fn delta_shadow(k: usize) -> Vec<BraidCrossing> {
    let mut slot: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for band in 1..k {
        for i in (0..band).rev() {
            out.push(BraidCrossing { left: slot[i], right: slot[i + 1] });
            slot.swap(i, i + 1);
        }
    }
    debug_assert!(slot.iter().rev().copied().eq(0..k));
    out
}

fn working(code: &GaussCode) -> Result<(GaussCode, bool), MoveError> {
    if code.is_fully_signed() {
        if !is_realizable_signed(code) {
            return Err(MoveError::Unrealizable);
        }
        Ok((code.clone(), false))
    } else {
        let w = witness_signed(&code.strip_signs()).ok_or(MoveError::Unrealizable)?;
        Ok((w, true))
    }
}

/// The knot-preserving half turn: rotate the box, then mend the legs with a
/// half-twist braid above and the opposite one below. `top_plus` picks which
/// handedness goes on top; both choices are sound and generally give
/// different diagrams. Signedness of the input is preserved: unsigned codes
/// come back unsigned.
pub fn twist(
    code: &GaussCode,
    bx: &TangleBox,
    top_plus: bool,
) -> Result<(GaussCode, MoveRecord), MoveError> {
    validate_box(code, bx)?;
    if bx.fragments.iter().any(|f| f.closed) {
        return Err(MoveError::InvalidBox("cannot twist the whole diagram"));
    }
    let (work, strip) = working(code)?;
    let mirrored = if code.is_empty() || bx.fragments.iter().any(|f| f.len == 0) {
        // point fragments leave no trace in the sub-embedding, so the frame
        // cannot be read off; with at most one braid crossing per side the
        // two hands cover both geometries and the bit never matters
        if bx.top.len() > 2 || bx.bottom.len() > 2 {
            return Err(MoveError::InvalidBox("frame is ambiguous around a point fragment"));
        }
        false
    } else {
        let map = DiagramMap::build(&work).ok_or(MoveError::Unrealizable)?;
        frame_of(&work, &map, bx)?
    };
    twist_core(&work, bx, top_plus, mirrored, strip)
}

/// The twist surgery on a witness-signed code whose frame bit is known.
fn twist_core(
    work: &GaussCode,
    bx: &TangleBox,
    top_plus: bool,
    mirrored: bool,
    strip: bool,
) -> Result<(GaussCode, MoveRecord), MoveError> {
    let total = work.len();
    let mut passes = work.passes().to_vec();
    for f in &bx.fragments {
        for p in f.positions(total) {
            passes[p].layer = passes[p].layer.flip();
        }
    }

    // braid passes for every leg, in time order walking from outside in
    let mut next_label = work.n() as u16 + 1;
    let mut lists: HashMap<Leg, Vec<Pass>> = HashMap::new();
    for (is_top, legs) in [(true, &bx.top), (false, &bx.bottom)] {
        let entering: Vec<bool> = legs.iter().map(|l| l.end == End::Start).collect();
        let left_layer = if top_plus { Layer::Over } else { Layer::Under };
        // stated-left over reads as a positive half twist only when the
        // stated order is the true one; in the mirror frame the same layers
        // realize the opposite handedness, so the signs follow suit
        let delta_plus = (is_top == top_plus) ^ mirrored;
        for bc in delta_shadow(legs.len()) {
            let label = next_label;
            next_label += 1;
            let agree = entering[bc.left] == entering[bc.right];
            let sign = if delta_plus == agree { Sign::Plus } else { Sign::Minus };
            lists.entry(legs[bc.left]).or_default().push(Pass { layer: left_layer, label, sign });
            lists
                .entry(legs[bc.right])
                .or_default()
                .push(Pass { layer: left_layer.flip(), label, sign });
        }
    }

    // entering legs read their braid outside-in, exiting legs inside-out
    let mut before: HashMap<usize, Vec<Pass>> = HashMap::new();
    let mut after: HashMap<usize, Vec<Pass>> = HashMap::new();
    for (fi, f) in bx.fragments.iter().enumerate() {
        for end in [End::Start, End::Stop] {
            let mut list = lists.remove(&Leg { fragment: fi, end }).unwrap_or_default();
            if end == End::Stop {
                list.reverse();
            }
            if f.len == 0 {
                after.entry(f.start).or_default().extend(list);
            } else if end == End::Start {
                before.entry(f.start).or_default().extend(list);
            } else {
                after.entry((f.start + f.len - 1) % total).or_default().extend(list);
            }
        }
    }

    let mut result = Vec::with_capacity(total + 2 * (next_label as usize - work.n() - 1));
    for (p, pass) in passes.into_iter().enumerate() {
        if let Some(list) = before.remove(&p) {
            result.extend(list);
        }
        result.push(pass);
        if let Some(list) = after.remove(&p) {
            result.extend(list);
        }
    }
    let out = GaussCode::from_passes(result).map_err(|_| MoveError::Stale)?;
    if !is_realizable_signed(&out) {
        return Err(MoveError::Unrealizable);
    }
    let out = if strip { out.strip_signs() } else { out };
    let record = MoveRecord {
        kind: MoveKind::Twist,
        fragments: bx.fragments.clone(),
        top: bx.top.len(),
        bottom: bx.bottom.len(),
        result: out.key(),
    };
    Ok((out, record))
}

/// A twist through a two-fragment box: the classic tangle flype.
pub fn flype(
    code: &GaussCode,
    bx: &TangleBox,
    top_plus: bool,
) -> Result<(GaussCode, MoveRecord), MoveError> {
    if bx.fragments.len() != 2 {
        return Err(MoveError::InvalidBox("flype wants exactly two fragments"));
    }
    twist(code, bx, top_plus)
}

/// A strand crossing every top leg of a box, ready to slide to the bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftSite {
    /// first position of the run of strand passes, slot order or its reverse
    pub run_start: usize,
    /// run position increases with top slot index
    pub forward: bool,
    /// the strand passes over the legs
    pub over: bool,
    /// leg-side crossing positions, one per top slot, adjacent outside the box
    pub legs: Vec<usize>,
    /// crossing labels in slot order
    pub labels: Vec<u16>,
}

/// Position of the pass just outside a fragment end.
fn outside_pos(f: &Fragment, end: End, total: usize) -> usize {
    match (end, f.len) {
        (End::Start, 0) => f.start % total,
        (End::Stop, 0) => (f.start + 1) % total,
        (End::Start, _) => (f.start + total - 1) % total,
        (End::Stop, _) => (f.start + f.len) % total,
    }
}

/// Detect the slide site of a box, if any: every top leg is crossed right
/// outside the box by the same strand, whose passes form one run of
/// consecutive positions in slot order (or exactly reversed), all on one
/// layer. Multi-leg slides additionally need at least two top legs so the
/// direction of travel is pinned.
pub fn shift_sites(code: &GaussCode, bx: &TangleBox) -> Vec<ShiftSite> {
    if validate_box(code, bx).is_err() || bx.fragments.iter().any(|f| f.closed) {
        return Vec::new();
    }
    let total = code.len();
    let m = bx.top.len();
    if m == 0 || (m == 1 && bx.bottom.len() >= 2) {
        return Vec::new();
    }
    let mask = bx.mask(total);
    let mut legs = Vec::with_capacity(m);
    let mut labels = Vec::with_capacity(m);
    let mut partners = Vec::with_capacity(m);
    for leg in &bx.top {
        let f = &bx.fragments[leg.fragment];
        let l = outside_pos(f, leg.end, total);
        if mask[l] || legs.contains(&l) {
            return Vec::new();
        }
        let y = code.passes()[l].label;
        let (a, b) = code.positions_of(y);
        let p = if a == l { b } else { a };
        legs.push(l);
        labels.push(y);
        partners.push(p);
    }
    if labels.iter().collect::<HashSet<_>>().len() != m {
        return Vec::new();
    }
    // partners must tile one cyclic run, in slot order or reversed
    let run_start = *partners
        .iter()
        .find(|&&p| !partners.contains(&((p + total - 1) % total)))
        .unwrap_or(&partners[0]);
    let forward_run: Vec<usize> = (0..m).map(|i| (run_start + i) % total).collect();
    let forward = partners == forward_run;
    let reversed: Vec<usize> = forward_run.iter().rev().copied().collect();
    if !forward && partners != reversed {
        return Vec::new();
    }
    if forward_run.iter().any(|&p| mask[p] || legs.contains(&p)) {
        return Vec::new();
    }
    let layer = code.passes()[partners[0]].layer;
    if partners.iter().any(|&p| code.passes()[p].layer != layer) {
        return Vec::new();
    }
    vec![ShiftSite {
        run_start,
        forward,
        over: layer == Layer::Over,
        legs,
        labels,
    }]
}

/// Crossing sign from compass directions (0 N, 1 E, 2 S, 3 W): positive when
/// a quarter turn counterclockwise takes the under strand to the over one.
fn cross_sign(over: u8, under: u8) -> Sign {
    if (under + 3) % 4 == over {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Slide the strand across the box. The old crossings with the top legs
/// disappear, new ones with the bottom legs appear just outside the bottom
/// edge and as a fresh run where the old strand run sat; the count changes
/// by bottom minus top. Signedness of the input is preserved.
pub fn apply_shift(
    code: &GaussCode,
    bx: &TangleBox,
    site: &ShiftSite,
) -> Result<(GaussCode, MoveRecord), MoveError> {
    if shift_sites(code, bx).iter().all(|s| s != site) {
        return Err(MoveError::Stale);
    }
    let (work, strip) = working(code)?;
    if bx.fragments.iter().any(|f| f.len == 0) {
        // the frame around point fragments is unreadable; a single new
        // crossing needs no ordering, more would
        if bx.bottom.len() > 1 {
            return Err(MoveError::InvalidBox("frame is ambiguous around a point fragment"));
        }
    } else {
        let map = DiagramMap::build(&work).ok_or(MoveError::Unrealizable)?;
        frame_of(&work, &map, bx)?;
    }
    shift_core(&work, bx, site, strip)
}

/// The slide surgery on a witness-signed code with an achievable box.
fn shift_core(
    work: &GaussCode,
    bx: &TangleBox,
    site: &ShiftSite,
    strip: bool,
) -> Result<(GaussCode, MoveRecord), MoveError> {
    let total = work.len();
    let m = site.legs.len();
    let b = bx.bottom.len();

    // travel direction from any old crossing: legs run north-south, solve
    // east/west against the known sign
    let east = {
        let i = 0;
        let leg_dir = if bx.top[i].end == End::Start { 2u8 } else { 0u8 }; // entering tops head south
        let s = work.passes()[site.legs[i]].sign;
        let solves = |dir: u8| {
            if site.over { cross_sign(dir, leg_dir) == s } else { cross_sign(leg_dir, dir) == s }
        };
        if solves(1) {
            true
        } else if solves(3) {
            false
        } else {
            return Err(MoveError::Stale);
        }
    };
    for i in 1..m {
        let leg_dir = if bx.top[i].end == End::Start { 2u8 } else { 0u8 };
        let s = work.passes()[site.legs[i]].sign;
        let dir = if east { 1 } else { 3 };
        let ok = if site.over { cross_sign(dir, leg_dir) == s } else { cross_sign(leg_dir, dir) == s };
        if !ok {
            return Err(MoveError::InvalidBox("strand changes direction across the top"));
        }
    }

    let strand_layer = if site.over { Layer::Over } else { Layer::Under };
    let mut next_label = work.n() as u16 + 1;
    let mut new_run: Vec<Pass> = Vec::with_capacity(b);
    let mut leg_pass: HashMap<Leg, Pass> = HashMap::new();
    let slots: Vec<usize> = if site.forward { (0..b).collect() } else { (0..b).rev().collect() };
    for &j in &slots {
        let leg = bx.bottom[j];
        let label = next_label;
        next_label += 1;
        let leg_dir = if leg.end == End::Start { 0u8 } else { 2u8 }; // entering bottoms head north
        let dir = if east { 1 } else { 3 };
        let sign = if site.over { cross_sign(dir, leg_dir) } else { cross_sign(leg_dir, dir) };
        new_run.push(Pass { layer: strand_layer, label, sign });
        leg_pass.insert(leg, Pass { layer: strand_layer.flip(), label, sign });
    }
    let mut before: HashMap<usize, Vec<Pass>> = HashMap::new();
    let mut after: HashMap<usize, Vec<Pass>> = HashMap::new();
    for (fi, f) in bx.fragments.iter().enumerate() {
        for end in [End::Start, End::Stop] {
            let Some(pass) = leg_pass.remove(&Leg { fragment: fi, end }) else { continue };
            if f.len == 0 {
                after.entry(f.start).or_default().push(pass);
            } else if end == End::Start {
                before.entry(f.start).or_default().push(pass);
            } else {
                after.entry((f.start + f.len - 1) % total).or_default().push(pass);
            }
        }
    }

    let doomed: HashSet<usize> =
        site.legs.iter().copied().chain((0..m).map(|i| (site.run_start + i) % total)).collect();
    let mut result = Vec::with_capacity(total - 2 * m + 2 * b);
    for p in 0..total {
        if let Some(list) = before.remove(&p) {
            result.extend(list);
        }
        if p == site.run_start {
            result.append(&mut new_run);
        }
        if !doomed.contains(&p) {
            result.push(work.passes()[p]);
        }
        if let Some(list) = after.remove(&p) {
            result.extend(list);
        }
    }
    let out = GaussCode::from_passes(result).map_err(|_| MoveError::Stale)?;
    if !is_realizable_signed(&out) {
        return Err(MoveError::Unrealizable);
    }
    let out = if strip { out.strip_signs() } else { out };
    let record = MoveRecord {
        kind: MoveKind::Shift,
        fragments: bx.fragments.clone(),
        top: m,
        bottom: b,
        result: out.key(),
    };
    Ok((out, record))
}

/// Every distinct diagram one box move away: all twists within the arity cap
/// and all slides, over every box with at most `max_fragments` fragments.
/// Results are raw (not reduced) and deduplicated by key; the identity
/// result is dropped.
pub fn box_moves(
    code: &GaussCode,
    max_fragments: usize,
    twist_arity: usize,
) -> Vec<(GaussCode, MoveRecord)> {
    let Ok((work, strip)) = working(code) else {
        return Vec::new();
    };
    let Some(map) = DiagramMap::build(&work) else {
        return Vec::new();
    };
    let own = code.key();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (bx, mirrored) in enumerate_with(&work, &map, max_fragments) {
        if bx.top.len() <= twist_arity && bx.bottom.len() <= twist_arity {
            for top_plus in [true, false] {
                if let Ok((res, rec)) = twist_core(&work, &bx, top_plus, mirrored, strip) {
                    if rec.result != own && seen.insert(rec.result.clone()) {
                        out.push((res, rec));
                    }
                }
            }
        }
        for site in shift_sites(&work, &bx) {
            if let Ok((res, rec)) = shift_core(&work, &bx, &site, strip) {
                if rec.result != own && seen.insert(rec.result.clone()) {
                    out.push((res, rec));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::DiagramKey;
    use crate::oracle::normalized_bracket;
    use crate::rmoves::{apply_r, r_sites};

    fn trefoil() -> GaussCode {
        GaussCode::parse("O1+ U2+ O3+ U1+ O2+ U3+").unwrap()
    }

    #[test]
    fn single_crossing_box_has_the_rotation_order() {
        let code = trefoil();
        let boxes = enumerate_boxes(&code, 3);
        assert!(!boxes.is_empty());
        // crossing 1 alone: fragments at positions 0 and 3
        let one: Vec<&TangleBox> = boxes
            .iter()
            .filter(|b| b.fragments == vec![Fragment::open(0, 1), Fragment::open(3, 1)])
            .collect();
        assert!(!one.is_empty());
        for bx in &one {
            assert!(is_box_drawable(&code, bx), "enumerated box must be drawable: {bx:?}");
        }
        // around one crossing the legs alternate fragments; grouping the two
        // ends of one fragment on one edge and the other fragment's on the
        // other edge is not drawable
        let bad = TangleBox {
            fragments: vec![Fragment::open(0, 1), Fragment::open(3, 1)],
            top: vec![Leg { fragment: 0, end: End::Start }, Leg { fragment: 0, end: End::Stop }],
            bottom: vec![Leg { fragment: 1, end: End::Stop }, Leg { fragment: 1, end: End::Start }],
        };
        assert!(!is_box_drawable(&code, &bad));
        assert!(!one.iter().any(|b| **b == bad));
    }

    #[test]
    fn box_validation_rejects_partial_and_overlapping_covers() {
        let code = trefoil();
        assert!(matches!(
            TangleBox::new(&code, vec![Fragment::open(0, 1)], vec![], vec![]),
            Err(MoveError::InvalidBox(_))
        ));
        assert!(matches!(
            TangleBox::new(&code, vec![Fragment::open(0, 2), Fragment::open(1, 2)], vec![], vec![]),
            Err(MoveError::InvalidBox(_))
        ));
    }

    #[test]
    fn identity_box_twist_is_the_identity() {
        let code = trefoil();
        let point = Fragment::open(0, 0);
        let through = TangleBox::new(
            &code,
            vec![point],
            vec![Leg { fragment: 0, end: End::Start }],
            vec![Leg { fragment: 0, end: End::Stop }],
        )
        .unwrap();
        for hand in [true, false] {
            let (res, rec) = twist(&code, &through, hand).unwrap();
            assert_eq!(res.key(), code.key());
            assert_eq!(rec.kind, MoveKind::Twist);
        }
    }

    #[test]
    fn cap_box_twist_adds_one_kink() {
        let code = trefoil();
        let point = Fragment::open(0, 0);
        let cap = TangleBox::new(
            &code,
            vec![point],
            vec![Leg { fragment: 0, end: End::Start }, Leg { fragment: 0, end: End::Stop }],
            vec![],
        )
        .unwrap();
        let base = normalized_bracket(&code).unwrap();
        for (hand, dw) in [(true, -1), (false, 1)] {
            let (res, _) = twist(&code, &cap, hand).unwrap();
            assert_eq!(res.n(), 4);
            assert_eq!(crate::oracle::writhe(&res), Some(3 + dw));
            assert_eq!(normalized_bracket(&res).unwrap(), base);
        }
    }

    #[test]
    fn rotate_box_is_an_involution() {
        let code = trefoil();
        for bx in enumerate_boxes(&code, 3) {
            let (once, bx1) = rotate_box(&code, &bx).unwrap();
            let (twice, bx2) = rotate_box(&once, &bx1).unwrap();
            assert_eq!(twice, code);
            assert_eq!(bx2, bx);
        }
    }

    #[test]
    fn every_box_move_preserves_the_invariant() {
        for input in ["O1+ U2+ O3+ U1+ O2+ U3+", "AbCdBaDc", "ABCabc", "AbCaBc"] {
            let code = GaussCode::parse(input).unwrap();
            let base = normalized_bracket(&code).unwrap();
            let moves = box_moves(&code, 3, 4);
            assert!(!moves.is_empty(), "{input} should admit box moves");
            for (res, rec) in moves {
                assert_eq!(res.signedness(), code.signedness(), "{input}: {rec}");
                assert_eq!(
                    normalized_bracket(&res).unwrap(),
                    base,
                    "{input}: move {rec} changed the invariant"
                );
            }
        }
    }

    #[test]
    fn twist_discards_nothing_on_sound_boxes() {
        let code = trefoil();
        for bx in enumerate_boxes(&code, 3) {
            if bx.top.len() <= 4 && bx.bottom.len() <= 4 {
                for hand in [true, false] {
                    twist(&code, &bx, hand).unwrap();
                }
            }
        }
    }

    #[test]
    fn some_shift_reproduces_the_triangle_slide() {
        let code = witness_signed(&GaussCode::parse("ABCabc").unwrap()).unwrap();
        let r3_keys: Vec<DiagramKey> = r_sites(&code)
            .into_iter()
            .filter(|s| s.kind == MoveKind::R3)
            .map(|s| apply_r(&code, &s).unwrap().0.key())
            .collect();
        assert!(!r3_keys.is_empty());
        let shifts: Vec<DiagramKey> = box_moves(&code, 3, 4)
            .into_iter()
            .filter(|(_, rec)| rec.kind == MoveKind::Shift)
            .map(|(res, _)| res.key())
            .collect();
        assert!(
            r3_keys.iter().any(|k| shifts.contains(k)),
            "no slide matched an R3 result; slides: {shifts:?}"
        );
    }

    #[test]
    fn degenerate_slides_are_rejected() {
        // in O1 O2 U2 U1 every multi-leg candidate strand runs through the
        // box legs at a single crossing, which is no slide at all
        let code = witness_signed(&GaussCode::parse("ABba").unwrap()).unwrap();
        for bx in enumerate_boxes(&code, 3) {
            for site in shift_sites(&code, &bx) {
                assert_eq!(site.legs.len(), 1, "{bx:?}");
            }
        }
    }

    #[test]
    fn unsigned_inputs_come_back_unsigned() {
        let code = GaussCode::parse("AbCaBc").unwrap();
        for (res, _) in box_moves(&code, 2, 3) {
            assert!(res.passes().iter().all(|p| p.sign == Sign::Unknown));
        }
    }
}
