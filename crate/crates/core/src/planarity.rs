//! Sphere realizability of Gauss codes via combinatorial maps.
//!
//! Every crossing admits two transversal corner orders (chiralities). A
//! chirality choice per crossing yields a rotation system; tracing its faces
//! decides whether the 4-valent graph embeds in the sphere: a connected
//! diagram with n crossings is planar exactly when it has n + 2 faces.
//!
//! Darts: arc `i` runs from position `i` to position `i + 1` (cyclically);
//! dart `2i` leaves position `i` forward, dart `2i + 1` leaves position
//! `i + 1` backward, so the arc involution is `d ^ 1`.

use crate::code::{GaussCode, Layer, Pass, Sign};

/// Chirality 2 lists the counterclockwise corners at a crossing as
/// (A-in, B-in, A-out, B-out), where A is the first pass of the label;
/// chirality 1 swaps B's two ends. A positive crossing whose first pass is
/// on the over layer has chirality 2.
pub(crate) fn sign_to_chirality(first_layer: Layer, sign: Sign) -> Option<u8> {
    match sign {
        Sign::Unknown => None,
        s => Some(if (s == Sign::Plus) == (first_layer == Layer::Over) { 2 } else { 1 }),
    }
}

pub(crate) fn dart_arc(d: u32) -> usize {
    d as usize / 2
}

/// Several closed curves sharing crossings; labels are dense 1..m, each
/// occurring exactly twice across all curves.
#[derive(Clone, Debug)]
pub(crate) struct System {
    pub curves: Vec<Vec<Pass>>,
}

struct Layout {
    passes: Vec<Pass>,
    curve_of: Vec<usize>,
    start: Vec<usize>,
    len: Vec<usize>,
}

impl Layout {
    fn new(curves: &[Vec<Pass>]) -> Layout {
        let mut layout =
            Layout { passes: Vec::new(), curve_of: Vec::new(), start: Vec::new(), len: Vec::new() };
        for curve in curves.iter().filter(|c| !c.is_empty()) {
            let idx = layout.start.len();
            layout.start.push(layout.passes.len());
            layout.len.push(curve.len());
            for &p in curve {
                layout.passes.push(p);
                layout.curve_of.push(idx);
            }
        }
        layout
    }

    fn total(&self) -> usize {
        self.passes.len()
    }

    fn prev(&self, g: usize) -> usize {
        let c = self.curve_of[g];
        if g == self.start[c] {
            self.start[c] + self.len[c] - 1
        } else {
            g - 1
        }
    }
}

/// Flattened first/second position of every label, indexed by label-1.
fn label_positions(layout: &Layout, m: usize) -> Vec<(usize, usize)> {
    let mut pos = vec![(usize::MAX, usize::MAX); m];
    for (g, p) in layout.passes.iter().enumerate() {
        let slot = &mut pos[(p.label - 1) as usize];
        if slot.0 == usize::MAX {
            slot.0 = g;
        } else {
            debug_assert_eq!(slot.1, usize::MAX);
            slot.1 = g;
        }
    }
    pos
}

/// Write the corner orders of the given labels into `sigma` (chirality 0
/// leaves a label's corners untouched).
fn write_sigma(layout: &Layout, pos: &[(usize, usize)], chi: &[u8], sigma: &mut [u32]) {
    for (i, &(p, q)) in pos.iter().enumerate() {
        if chi[i] == 0 {
            continue;
        }
        let a_in = (2 * layout.prev(p) + 1) as u32;
        let a_out = 2 * p as u32;
        let b_in = (2 * layout.prev(q) + 1) as u32;
        let b_out = 2 * q as u32;
        let order = if chi[i] == 2 { [a_in, b_in, a_out, b_out] } else { [a_in, b_out, a_out, b_in] };
        for k in 0..4 {
            sigma[order[k] as usize] = order[(k + 1) % 4];
        }
    }
}

/// Count orbits of d -> sigma[d ^ 1] among `darts`.
fn count_faces(sigma: &[u32], darts: &[u32], visited: &mut [bool]) -> usize {
    for &d in darts {
        visited[d as usize] = false;
    }
    let mut faces = 0;
    for &d in darts {
        if visited[d as usize] {
            continue;
        }
        faces += 1;
        let mut cur = d;
        while !visited[cur as usize] {
            visited[cur as usize] = true;
            cur = sigma[(cur ^ 1) as usize];
        }
    }
    faces
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

impl System {
    pub fn single(code: &GaussCode) -> System {
        System { curves: vec![code.passes().to_vec()] }
    }

    pub fn label_count(&self) -> usize {
        self.curves.iter().flatten().map(|p| p.label as usize).max().unwrap_or(0)
    }

    pub fn realizable(&self) -> bool {
        self.witness_signs().is_some()
    }

    /// First sign assignment (smallest labels first, Plus before Minus)
    /// whose rotation system is planar on every crossing-connected
    /// component. Known signs are kept; a component with no known sign gets
    /// its smallest label pinned Plus, discarding the mirror duplicate.
    pub fn witness_signs(&self) -> Option<Vec<Sign>> {
        let m = self.label_count();
        let layout = Layout::new(&self.curves);
        debug_assert_eq!(layout.total(), 2 * m);
        if m == 0 {
            return Some(Vec::new());
        }
        let pos = label_positions(&layout, m);
        let first_layer: Vec<Layer> = pos.iter().map(|&(p, _)| layout.passes[p].layer).collect();
        let pinned: Vec<Sign> = pos.iter().map(|&(p, _)| layout.passes[p].sign).collect();

        let mut uf = UnionFind::new(m);
        for curve in layout.start.iter().zip(&layout.len).map(|(&s, &l)| s..s + l) {
            let mut labels = curve.map(|g| (layout.passes[g].label - 1) as usize);
            if let Some(first) = labels.next() {
                for l in labels {
                    uf.union(first, l);
                }
            }
        }
        let roots: Vec<usize> = (0..m).map(|l| uf.find(l)).collect();
        let mut comps: Vec<usize> = roots.clone();
        comps.sort_unstable();
        comps.dedup();

        let mut sigma = vec![u32::MAX; 2 * layout.total()];
        let mut visited = vec![false; 2 * layout.total()];
        let mut chi = vec![0u8; m];
        let mut result = vec![Sign::Unknown; m];

        for &root in &comps {
            let labels: Vec<usize> = (0..m).filter(|&l| roots[l] == root).collect();
            let darts: Vec<u32> = (0..layout.total())
                .filter(|&g| roots[(layout.passes[g].label - 1) as usize] == root)
                .flat_map(|g| [2 * g as u32, 2 * g as u32 + 1])
                .collect();
            let mut fixed: Vec<(usize, Sign)> =
                labels.iter().filter(|&&l| pinned[l] != Sign::Unknown).map(|&l| (l, pinned[l])).collect();
            let mut free: Vec<usize> =
                labels.iter().copied().filter(|&l| pinned[l] == Sign::Unknown).collect();
            if fixed.is_empty() && !free.is_empty() {
                fixed.push((free[0], Sign::Plus));
                free.remove(0);
            }
            let mut found = false;
            'search: for mask in 0u64..1 << free.len() {
                for &l in &labels {
                    let sign = if let Some(&(_, s)) = fixed.iter().find(|&&(f, _)| f == l) {
                        s
                    } else {
                        let bit = free.iter().position(|&f| f == l).unwrap();
                        if mask >> (free.len() - 1 - bit) & 1 == 0 { Sign::Plus } else { Sign::Minus }
                    };
                    result[l] = sign;
                    chi[l] = sign_to_chirality(first_layer[l], sign).unwrap();
                }
                write_sigma(&layout, &pos, &chi, &mut sigma);
                if count_faces(&sigma, &darts, &mut visited) == labels.len() + 2 {
                    found = true;
                    break 'search;
                }
            }
            if !found {
                return None;
            }
        }
        Some(result)
    }
}

/// A realizable closed curve interlaces every crossing with an even number
/// of other crossings; rejecting odd interlacement is a sound prefilter.
pub fn interlacement_all_even(code: &GaussCode) -> bool {
    let n = code.n();
    for label in 1..=n as u16 {
        let (p, q) = code.positions_of(label);
        let mut inside = vec![0u8; n];
        for i in p + 1..q {
            inside[(code.passes()[i].label - 1) as usize] += 1;
        }
        let odd = inside.iter().filter(|&&c| c == 1).count();
        if odd % 2 != 0 {
            return false;
        }
    }
    true
}

pub fn is_realizable(code: &GaussCode) -> bool {
    code.is_empty() || (interlacement_all_even(code) && System::single(code).witness_signs().is_some())
}

/// Planarity of the one embedding a fully signed code describes.
pub fn is_realizable_signed(code: &GaussCode) -> bool {
    assert!(code.is_fully_signed());
    if code.is_empty() {
        return true;
    }
    DiagramMap::build(code).is_some()
}

/// Fill unknown signs with the first planar assignment; deterministic in
/// the presentation of `code`.
pub fn witness_signed(code: &GaussCode) -> Option<GaussCode> {
    if code.is_empty() {
        return Some(code.clone());
    }
    if !interlacement_all_even(code) {
        return None;
    }
    System::single(code).witness_signs().map(|signs| code.with_signs(&signs))
}

/// Rotation system and faces of a fully signed, realizable code.
pub(crate) struct DiagramMap {
    pub sigma: Vec<u32>,
    pub faces: Vec<Vec<u32>>,
}

impl DiagramMap {
    pub fn build(code: &GaussCode) -> Option<DiagramMap> {
        assert!(code.is_fully_signed());
        let n = code.n();
        let layout = Layout::new(std::slice::from_ref(&code.passes().to_vec()));
        let pos = label_positions(&layout, n);
        let chirality: Vec<u8> = (0..n)
            .map(|l| sign_to_chirality(layout.passes[pos[l].0].layer, layout.passes[pos[l].0].sign).unwrap())
            .collect();
        let mut sigma = vec![u32::MAX; 4 * n];
        write_sigma(&layout, &pos, &chirality, &mut sigma);
        let mut faces = Vec::new();
        let mut visited = vec![false; 4 * n];
        for d in 0..4 * n as u32 {
            if visited[d as usize] {
                continue;
            }
            let mut face = Vec::new();
            let mut cur = d;
            while !visited[cur as usize] {
                visited[cur as usize] = true;
                face.push(cur);
                cur = sigma[(cur ^ 1) as usize];
            }
            faces.push(face);
        }
        if n > 0 && faces.len() != n + 2 {
            return None;
        }
        Some(DiagramMap { sigma, faces })
    }
}

/// Witness-sign a code and build its map in one step.
pub(crate) fn embed(code: &GaussCode) -> Option<(GaussCode, DiagramMap)> {
    let signed = witness_signed(code)?;
    let map = DiagramMap::build(&signed)?;
    Some((signed, map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::GaussCode;

    fn face_sizes(code: &str) -> Vec<usize> {
        let c = GaussCode::parse(code).unwrap();
        let map = DiagramMap::build(&c).unwrap();
        let mut sizes: Vec<usize> = map.faces.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }

    #[test]
    fn kink_has_three_faces_either_hand() {
        assert_eq!(face_sizes("O1+ U1+"), vec![1, 1, 2]);
        assert_eq!(face_sizes("O1- U1-"), vec![1, 1, 2]);
    }

    #[test]
    fn trefoil_faces_are_three_bigons_two_triangles() {
        assert_eq!(face_sizes("O1+ U2+ O3+ U1+ O2+ U3+"), vec![2, 2, 2, 3, 3]);
    }

    #[test]
    fn trefoil_admits_exactly_two_sign_vectors() {
        let word = GaussCode::parse("AbCaBc").unwrap();
        let mut realizable = Vec::new();
        for mask in 0..8u8 {
            let signs: Vec<Sign> =
                (0..3).map(|i| if mask >> (2 - i) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect();
            if is_realizable_signed(&word.with_signs(&signs)) {
                realizable.push(mask);
            }
        }
        assert_eq!(realizable, vec![0b000, 0b111]);
    }

    #[test]
    fn word_1212_is_not_realizable() {
        let c = GaussCode::parse_tokens("O1 O2 U1 U2").unwrap();
        assert!(!interlacement_all_even(&c));
        assert!(!is_realizable(&c));
        for mask in 0..4u8 {
            let signs: Vec<Sign> =
                (0..2).map(|i| if mask >> (1 - i) & 1 == 0 { Sign::Plus } else { Sign::Minus }).collect();
            assert!(!is_realizable_signed(&c.with_signs(&signs)));
        }
    }

    #[test]
    fn trefoil_witness_is_all_plus() {
        let w = witness_signed(&GaussCode::parse("AbCaBc").unwrap()).unwrap();
        assert_eq!(w.render_tokens(), "O1+ U2+ O3+ U1+ O2+ U3+");
    }

    #[test]
    fn witness_respects_pinned_signs() {
        let c = GaussCode::parse_tokens("O1- U2 O3 U1 O2 U3").unwrap();
        let w = witness_signed(&c).unwrap();
        assert_eq!(w.render_tokens(), "O1- U2- O3- U1- O2- U3-");
    }

    #[test]
    fn spiral_with_inner_kink_is_realizable() {
        assert!(is_realizable(&GaussCode::parse_tokens("O1 O2 O3 U3 U2 U1").unwrap()));
    }

    #[test]
    fn figure_eight_word_is_realizable() {
        let c = GaussCode::parse_letters("AbCdBaDc").unwrap();
        assert!(interlacement_all_even(&c));
        assert!(is_realizable(&c));
        let w = witness_signed(&c).unwrap();
        assert!(is_realizable_signed(&w));
        assert_eq!(witness_signed(&c).unwrap(), w);
    }

    #[test]
    fn empty_code_is_realizable() {
        assert!(is_realizable(&GaussCode::empty()));
        assert!(is_realizable_signed(&GaussCode::empty()));
    }

    #[test]
    fn hopf_system_is_realizable_single_crossing_is_not() {
        let o = |label| Pass { layer: Layer::Over, label, sign: Sign::Unknown };
        let u = |label| Pass { layer: Layer::Under, label, sign: Sign::Unknown };
        let hopf = System { curves: vec![vec![o(1), o(2)], vec![u(1), u(2)]] };
        assert!(hopf.realizable());
        let once = System { curves: vec![vec![o(1)], vec![u(1)]] };
        assert!(!once.realizable());
    }

    #[test]
    fn system_with_free_loop_ignores_it() {
        let o = |label| Pass { layer: Layer::Over, label, sign: Sign::Unknown };
        let u = |label| Pass { layer: Layer::Under, label, sign: Sign::Unknown };
        let sys = System { curves: vec![vec![o(1), o(2)], vec![u(1), u(2)], vec![]] };
        assert!(sys.realizable());
    }

    // Exhaustive over all layered words with up to 3 crossings: planarity of
    // a signed code does not depend on where the word starts, on traversal
    // direction, or on taking the mirror image.
    #[test]
    fn signed_realizability_is_presentation_invariant() {
        fn words(n: usize) -> Vec<Vec<u16>> {
            let mut out = Vec::new();
            let mut word = Vec::new();
            let mut used = vec![0u8; n + 1];
            fn rec(word: &mut Vec<u16>, used: &mut Vec<u8>, n: usize, out: &mut Vec<Vec<u16>>) {
                if word.len() == 2 * n {
                    out.push(word.clone());
                    return;
                }
                let mut cap = 1;
                for l in 1..=n as u16 {
                    if used[l as usize] == 2 {
                        continue;
                    }
                    if used[l as usize] == 0 {
                        if l > cap {
                            break;
                        }
                        cap = l + 1;
                    }
                    used[l as usize] += 1;
                    word.push(l);
                    rec(word, used, n, out);
                    word.pop();
                    used[l as usize] -= 1;
                }
            }
            rec(&mut word, &mut used, n, &mut out);
            out
        }
        let mut seen_true = 0;
        let mut seen_false = 0;
        for n in 1..=3usize {
            for word in words(n) {
                for layer_mask in 0..1u16 << n {
                    for sign_mask in 0..1u16 << n {
                        let mut first = vec![true; n];
                        let passes: Vec<Pass> = word
                            .iter()
                            .map(|&l| {
                                let i = (l - 1) as usize;
                                let is_first = first[i];
                                first[i] = false;
                                let over = (layer_mask >> i & 1 == 0) == is_first;
                                Pass {
                                    layer: if over { Layer::Over } else { Layer::Under },
                                    label: l,
                                    sign: if sign_mask >> i & 1 == 0 { Sign::Plus } else { Sign::Minus },
                                }
                            })
                            .collect();
                        let code = GaussCode::from_passes(passes).unwrap();
                        let planar = is_realizable_signed(&code);
                        if planar {
                            seen_true += 1;
                        } else {
                            seen_false += 1;
                        }
                        assert_eq!(is_realizable_signed(&code.mirror()), planar);
                        assert_eq!(is_realizable_signed(&code.reversed()), planar);
                        for k in 0..code.len() {
                            assert_eq!(is_realizable_signed(&code.rotated(k)), planar);
                        }
                    }
                }
            }
        }
        assert!(seen_true > 0 && seen_false > 0);
    }
}
