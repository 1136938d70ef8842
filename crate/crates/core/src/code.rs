//! Cyclic Gauss codes: parsing, rendering, relabeling, mirrors, and the
//! rotation/reversal-invariant diagram key.
//!
//! A code is a cyclic word in which every crossing label occurs exactly
//! twice, once on the over layer and once on the under layer. A crossing may
//! carry a handedness sign; a sign written at either pass applies to both.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Layer {
    Over,
    Under,
}

impl Layer {
    pub fn flip(self) -> Layer {
        match self {
            Layer::Over => Layer::Under,
            Layer::Under => Layer::Over,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
    Unknown,
}

impl Sign {
    /// Mirror image: handedness reverses, an unwritten sign stays unwritten.
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Unknown => Sign::Unknown,
        }
    }
}

/// One visit of the curve to a crossing. Field order gives the token order
/// used when comparing codes: layer, then label, then sign.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Pass {
    pub layer: Layer,
    pub label: u16,
    pub sign: Sign,
}

impl Pass {
    pub fn token(&self) -> String {
        let layer = match self.layer {
            Layer::Over => 'O',
            Layer::Under => 'U',
        };
        let sign = match self.sign {
            Sign::Plus => "+",
            Sign::Minus => "-",
            Sign::Unknown => "",
        };
        format!("{layer}{}{sign}", self.label)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("bad token `{0}`")]
    BadToken(String),
    #[error("bad character `{0}` in letters code")]
    BadLetter(char),
    #[error("label {0} occurs {1} times, expected exactly 2")]
    LabelCount(u16, usize),
    #[error("label {0} must pass once over and once under")]
    LayerPair(u16),
    #[error("label {0} carries conflicting signs")]
    SignConflict(u16),
    #[error("letters rendering supports at most 26 crossings, this code has {0}")]
    TooManyLabels(usize),
    #[error("braid word uses generator {0} outside 1..{1}")]
    BadGenerator(i32, usize),
    #[error("braid closure has more than one component")]
    MultiComponent,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Signedness {
    Full,
    Unsigned,
    Partial,
}

/// Rotation/reversal-invariant identity of a diagram, rendered in token form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct DiagramKey(pub String);

impl fmt::Display for DiagramKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A cyclic run of positions in a code. An open fragment covers `len`
/// positions starting at `start`; a closed fragment is the whole curve with
/// no endpoints. Open fragments of length zero mark a point on the arc just
/// after position `start`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Fragment {
    pub start: usize,
    pub len: usize,
    pub closed: bool,
}

impl Fragment {
    pub fn open(start: usize, len: usize) -> Fragment {
        Fragment { start, len, closed: false }
    }

    pub fn whole(total: usize) -> Fragment {
        Fragment { start: 0, len: total, closed: true }
    }

    pub fn positions(&self, total: usize) -> Vec<usize> {
        if total == 0 {
            return Vec::new();
        }
        let len = if self.closed { total } else { self.len };
        (0..len).map(|i| (self.start + i) % total).collect()
    }

    pub fn contains(&self, pos: usize, total: usize) -> bool {
        if self.closed {
            return true;
        }
        if total == 0 || self.len == 0 {
            return false;
        }
        let rel = (pos + total - self.start % total) % total;
        rel < self.len
    }
}

/// A knot diagram as a cyclic double-occurrence word. Labels are always
/// stored canonically: 1..n in order of first occurrence, both passes of a
/// label carrying the same sign.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct GaussCode {
    passes: Vec<Pass>,
}

/// Rename labels to 1..n in order of first occurrence.
fn relabel(passes: &mut [Pass]) {
    let max = passes.iter().map(|p| p.label as usize).max().unwrap_or(0);
    let mut map = vec![0u16; max + 1];
    let mut next = 0u16;
    for p in passes.iter_mut() {
        if map[p.label as usize] == 0 {
            next += 1;
            map[p.label as usize] = next;
        }
        p.label = map[p.label as usize];
    }
}

impl GaussCode {
    pub fn empty() -> GaussCode {
        GaussCode { passes: Vec::new() }
    }

    /// Validate and canonicalize an arbitrary pass list. Signs written at
    /// only one pass of a label are copied to the other; conflicting signs
    /// are an error.
    pub fn from_passes(mut passes: Vec<Pass>) -> Result<GaussCode, CodeError> {
        relabel(&mut passes);
        let n = passes.len() / 2;
        let mut count = vec![0usize; n + 1];
        for p in &passes {
            if (p.label as usize) < count.len() {
                count[p.label as usize] += 1;
            } else {
                count.resize(p.label as usize + 1, 0);
                count[p.label as usize] += 1;
            }
        }
        for (label, &c) in count.iter().enumerate().skip(1) {
            if c != 2 {
                return Err(CodeError::LabelCount(label as u16, c));
            }
        }
        if passes.len() % 2 != 0 {
            // only reachable when some label count is odd, handled above
            unreachable!();
        }
        let mut sign = vec![Sign::Unknown; n + 1];
        let mut first_layer = vec![None; n + 1];
        for p in &passes {
            let l = p.label as usize;
            match first_layer[l] {
                None => first_layer[l] = Some(p.layer),
                Some(layer) => {
                    if layer == p.layer {
                        return Err(CodeError::LayerPair(p.label));
                    }
                }
            }
            match (sign[l], p.sign) {
                (_, Sign::Unknown) => {}
                (Sign::Unknown, s) => sign[l] = s,
                (a, b) if a == b => {}
                _ => return Err(CodeError::SignConflict(p.label)),
            }
        }
        for p in &mut passes {
            p.sign = sign[p.label as usize];
        }
        Ok(GaussCode { passes })
    }

    /// Parse `O1+ U2 O3- ...`; layer letter, decimal label, optional sign.
    pub fn parse_tokens(input: &str) -> Result<GaussCode, CodeError> {
        let mut passes = Vec::new();
        for tok in input.split_whitespace() {
            let bad = || CodeError::BadToken(tok.to_string());
            let mut chars = tok.chars();
            let layer = match chars.next() {
                Some('O') | Some('o') => Layer::Over,
                Some('U') | Some('u') => Layer::Under,
                _ => return Err(bad()),
            };
            let rest = chars.as_str();
            let digits_end = rest
                .char_indices()
                .take_while(|(_, c)| c.is_ascii_digit())
                .map(|(i, c)| i + c.len_utf8())
                .last()
                .ok_or_else(bad)?;
            let label: u16 = rest[..digits_end].parse().map_err(|_| bad())?;
            let sign = match &rest[digits_end..] {
                "" => Sign::Unknown,
                "+" => Sign::Plus,
                "-" => Sign::Minus,
                _ => return Err(bad()),
            };
            passes.push(Pass { layer, label, sign });
        }
        GaussCode::from_passes(passes)
    }

    /// Parse `AbCaBc`; uppercase is an over pass, case-insensitive letter
    /// identity names the crossing, signs are left unwritten.
    pub fn parse_letters(input: &str) -> Result<GaussCode, CodeError> {
        let mut passes = Vec::new();
        for c in input.chars() {
            if c.is_whitespace() {
                continue;
            }
            if !c.is_ascii_alphabetic() {
                return Err(CodeError::BadLetter(c));
            }
            let layer = if c.is_ascii_uppercase() { Layer::Over } else { Layer::Under };
            let label = (c.to_ascii_lowercase() as u16) - (b'a' as u16) + 1;
            passes.push(Pass { layer, label, sign: Sign::Unknown });
        }
        GaussCode::from_passes(passes)
    }

    /// Auto-detect: any decimal digit means token form, otherwise letters.
    /// Everything after `#` is a comment.
    pub fn parse(input: &str) -> Result<GaussCode, CodeError> {
        let line = input.split('#').next().unwrap_or("");
        if line.chars().any(|c| c.is_ascii_digit()) {
            GaussCode::parse_tokens(line)
        } else {
            GaussCode::parse_letters(line)
        }
    }

    /// Plat-free closure of a braid word on `strands` strands. Generators are
    /// nonzero integers: `i` crosses strands at slots i,i+1 with the left
    /// strand over, `-i` with the left strand under. All strands run the same
    /// way, so the crossing sign equals the generator sign. The closure must
    /// be a single curve.
    pub fn from_braid_closure(strands: usize, word: &[i32]) -> Result<GaussCode, CodeError> {
        let mut slot: Vec<usize> = (0..strands).collect();
        let mut per_strand: Vec<Vec<Pass>> = vec![Vec::new(); strands];
        for (c, &g) in word.iter().enumerate() {
            let i = g.unsigned_abs() as usize;
            if g == 0 || i >= strands {
                return Err(CodeError::BadGenerator(g, strands.saturating_sub(1)));
            }
            let (left, right) = (slot[i - 1], slot[i]);
            let label = (c + 1) as u16;
            let sign = if g > 0 { Sign::Plus } else { Sign::Minus };
            let (top, bot) = if g > 0 { (Layer::Over, Layer::Under) } else { (Layer::Under, Layer::Over) };
            per_strand[left].push(Pass { layer: top, label, sign });
            per_strand[right].push(Pass { layer: bot, label, sign });
            slot.swap(i - 1, i);
        }
        // closure joins the bottom of each slot to the top of the same slot
        let mut passes = Vec::with_capacity(2 * word.len());
        let mut cur = 0usize;
        let mut seen = 0usize;
        loop {
            passes.append(&mut per_strand[cur].clone());
            seen += 1;
            let exit = slot.iter().position(|&s| s == cur).unwrap();
            cur = exit;
            if cur == 0 {
                break;
            }
        }
        if seen != strands {
            return Err(CodeError::MultiComponent);
        }
        GaussCode::from_passes(passes)
    }

    pub fn render_tokens(&self) -> String {
        use fmt::Write;
        let mut out = String::with_capacity(4 * self.passes.len());
        for (i, p) in self.passes.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push(match p.layer {
                Layer::Over => 'O',
                Layer::Under => 'U',
            });
            let _ = write!(out, "{}", p.label);
            match p.sign {
                Sign::Plus => out.push('+'),
                Sign::Minus => out.push('-'),
                Sign::Unknown => {}
            }
        }
        out
    }

    pub fn render_letters(&self) -> Result<String, CodeError> {
        if self.n() > 26 {
            return Err(CodeError::TooManyLabels(self.n()));
        }
        Ok(self
            .passes
            .iter()
            .map(|p| {
                let c = (b'a' + (p.label - 1) as u8) as char;
                match p.layer {
                    Layer::Over => c.to_ascii_uppercase(),
                    Layer::Under => c,
                }
            })
            .collect())
    }

    pub fn passes(&self) -> &[Pass] {
        &self.passes
    }

    /// Number of crossings.
    pub fn n(&self) -> usize {
        self.passes.len() / 2
    }

    pub fn len(&self) -> usize {
        self.passes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.passes.is_empty()
    }

    /// Positions of the two passes of `label`, in cyclic storage order.
    pub fn positions_of(&self, label: u16) -> (usize, usize) {
        let mut found = [usize::MAX; 2];
        let mut k = 0;
        for (i, p) in self.passes.iter().enumerate() {
            if p.label == label {
                found[k] = i;
                k += 1;
            }
        }
        debug_assert_eq!(k, 2);
        (found[0], found[1])
    }

    pub fn sign_of(&self, label: u16) -> Sign {
        self.passes.iter().find(|p| p.label == label).map(|p| p.sign).unwrap_or(Sign::Unknown)
    }

    /// Layer of the first pass of each label, indexed by label-1.
    pub fn first_layers(&self) -> Vec<Layer> {
        let mut seen = vec![None; self.n()];
        for p in &self.passes {
            let l = (p.label - 1) as usize;
            if seen[l].is_none() {
                seen[l] = Some(p.layer);
            }
        }
        seen.into_iter().map(Option::unwrap).collect()
    }

    /// Per-label signs, indexed by label-1.
    pub fn signs(&self) -> Vec<Sign> {
        let mut out = vec![Sign::Unknown; self.n()];
        for p in &self.passes {
            out[(p.label - 1) as usize] = p.sign;
        }
        out
    }

    /// Same word with the given per-label signs (indexed by label-1).
    pub fn with_signs(&self, signs: &[Sign]) -> GaussCode {
        let passes = self
            .passes
            .iter()
            .map(|p| Pass { sign: signs[(p.label - 1) as usize], ..*p })
            .collect();
        GaussCode { passes }
    }

    pub fn strip_signs(&self) -> GaussCode {
        self.with_signs(&vec![Sign::Unknown; self.n()])
    }

    pub fn signedness(&self) -> Signedness {
        let known = self.signs().iter().filter(|s| **s != Sign::Unknown).count();
        if known == self.n() {
            Signedness::Full
        } else if known == 0 {
            Signedness::Unsigned
        } else {
            Signedness::Partial
        }
    }

    pub fn is_fully_signed(&self) -> bool {
        self.signedness() == Signedness::Full
    }

    /// Mirror image: every layer and every written sign flips.
    pub fn mirror(&self) -> GaussCode {
        let passes = self
            .passes
            .iter()
            .map(|p| Pass { layer: p.layer.flip(), sign: p.sign.flip(), label: p.label })
            .collect();
        GaussCode { passes }
    }

    /// Start the cyclic word at position `k`.
    pub fn rotated(&self, k: usize) -> GaussCode {
        if self.passes.is_empty() {
            return self.clone();
        }
        let mut passes = self.passes.clone();
        let len = passes.len();
        passes.rotate_left(k % len);
        relabel(&mut passes);
        GaussCode { passes }
    }

    /// Traverse the curve the other way; layers and signs are unchanged.
    pub fn reversed(&self) -> GaussCode {
        let mut passes = self.passes.clone();
        passes.reverse();
        relabel(&mut passes);
        GaussCode { passes }
    }

    /// All presentations of the same oriented-or-reversed diagram: 2n
    /// rotations of the word and of its reversal.
    pub fn transforms(&self) -> Vec<GaussCode> {
        if self.passes.is_empty() {
            return vec![self.clone()];
        }
        let rev = self.reversed();
        (0..self.len())
            .map(|k| self.rotated(k))
            .chain((0..self.len()).map(|k| rev.rotated(k)))
            .collect()
    }

    /// The lexicographically least presentation among all rotations and the
    /// two traversal directions. Runs a pass-by-pass tournament over the 4n
    /// candidate presentations, relabeling each lazily, instead of
    /// materializing them all.
    pub fn canonical_presentation(&self) -> GaussCode {
        let len = self.passes.len();
        if len == 0 {
            return self.clone();
        }
        let n = self.n();
        // candidate c: start s = c % len; c >= len walks the word backwards
        let m = 2 * len;
        let mut alive: Vec<usize> = (0..m).collect();
        let mut maps = vec![0u16; m * (n + 1)];
        let mut nexts = vec![0u16; m];
        let mut out = Vec::with_capacity(len);
        let mut scratch: Vec<(usize, Pass)> = Vec::with_capacity(m);
        for i in 0..len {
            scratch.clear();
            for &c in &alive {
                let s = c % len;
                let p = if c < len {
                    self.passes[(s + i) % len]
                } else {
                    self.passes[(s + len - i % len) % len]
                };
                let slot = c * (n + 1) + p.label as usize;
                if maps[slot] == 0 {
                    nexts[c] += 1;
                    maps[slot] = nexts[c];
                }
                scratch.push((c, Pass { label: maps[slot], ..p }));
            }
            let min = scratch.iter().map(|&(_, p)| p).min().unwrap();
            out.push(min);
            alive = scratch.iter().filter(|&&(_, p)| p == min).map(|&(c, _)| c).collect();
        }
        GaussCode { passes: out }
    }

    pub fn key(&self) -> DiagramKey {
        DiagramKey(self.canonical_presentation().render_tokens())
    }
}

impl fmt::Display for GaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_tokens())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn letters_roundtrip() {
        let c = GaussCode::parse_letters("AbCaBc").unwrap();
        assert_eq!(c.render_tokens(), "O1 U2 O3 U1 O2 U3");
        assert_eq!(c.render_letters().unwrap(), "AbCaBc");
        assert_eq!(c.n(), 3);
        assert_eq!(c.signedness(), Signedness::Unsigned);
    }

    #[test]
    fn tokens_unify_signs() {
        let c = GaussCode::parse_tokens("O1+ U2 U1 O2-").unwrap();
        assert_eq!(c.render_tokens(), "O1+ U2- U1+ O2-");
        assert_eq!(c.signedness(), Signedness::Full);
    }

    #[test]
    fn tokens_partial_signs() {
        let c = GaussCode::parse_tokens("O1+ U2 U1 O3 O2 U3").unwrap();
        assert_eq!(c.signedness(), Signedness::Partial);
        assert_eq!(c.sign_of(1), Sign::Plus);
        assert_eq!(c.sign_of(2), Sign::Unknown);
    }

    #[test]
    fn relabels_to_first_occurrence_order() {
        let c = GaussCode::parse_tokens("O7 U3 U7 O3").unwrap();
        assert_eq!(c.render_tokens(), "O1 U2 U1 O2");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            GaussCode::parse_tokens("O1 U1 O1"),
            Err(CodeError::LabelCount(1, 3))
        );
        assert_eq!(GaussCode::parse_tokens("O1 O1"), Err(CodeError::LayerPair(1)));
        assert_eq!(
            GaussCode::parse_tokens("O1+ U1-"),
            Err(CodeError::SignConflict(1))
        );
        assert_eq!(
            GaussCode::parse_tokens("X1 U1"),
            Err(CodeError::BadToken("X1".into()))
        );
        assert_eq!(GaussCode::parse_letters("A1a"), Err(CodeError::BadLetter('1')));
    }

    #[test]
    fn auto_detect_and_comments() {
        let t = GaussCode::parse("O1+ U1+ # a positive kink").unwrap();
        assert_eq!(t.render_tokens(), "O1+ U1+");
        let l = GaussCode::parse("Aa # a kink in letters").unwrap();
        assert_eq!(l.render_tokens(), "O1 U1");
        assert!(GaussCode::parse("# nothing").unwrap().is_empty());
    }

    #[test]
    fn mirror_flips_layers_and_signs() {
        let c = GaussCode::parse_tokens("O1+ U2- U1+ O2-").unwrap();
        assert_eq!(c.mirror().render_tokens(), "U1- O2+ O1- U2+");
        assert_eq!(c.mirror().mirror(), c);
    }

    #[test]
    fn trefoil_key_is_presentation_invariant() {
        let c = GaussCode::parse_letters("AbCaBc").unwrap();
        let key = c.key();
        assert_eq!(key, DiagramKey("O1 U2 O3 U1 O2 U3".into()));
        for t in c.transforms() {
            assert_eq!(t.key(), key);
        }
    }

    // An unsigned alternating word cannot tell a diagram from its mirror:
    // reversing the trefoil word realigns flipped layers with the original.
    #[test]
    fn unsigned_trefoil_key_equals_layer_flip_key() {
        let c = GaussCode::parse_letters("AbCaBc").unwrap();
        let flipped = GaussCode::parse_letters("aBcAbC").unwrap();
        assert_eq!(c.key(), flipped.key());
    }

    #[test]
    fn signed_trefoil_key_differs_from_mirror_key() {
        let right = GaussCode::parse_tokens("O1+ U2+ O3+ U1+ O2+ U3+").unwrap();
        assert_eq!(right.key(), DiagramKey("O1+ U2+ O3+ U1+ O2+ U3+".into()));
        assert_eq!(right.mirror().key(), DiagramKey("O1- U2- O3- U1- O2- U3-".into()));
        assert_ne!(right.key(), right.mirror().key());
    }

    #[test]
    fn empty_code_key() {
        assert_eq!(GaussCode::empty().key(), DiagramKey(String::new()));
    }

    #[test]
    fn fragment_positions_wrap() {
        let f = Fragment::open(4, 3);
        assert_eq!(f.positions(6), vec![4, 5, 0]);
        assert!(f.contains(0, 6));
        assert!(!f.contains(1, 6));
        assert!(Fragment::whole(6).contains(3, 6));
        assert_eq!(Fragment::open(2, 0).positions(6), Vec::<usize>::new());
    }

    fn arb_code(max_n: usize) -> impl Strategy<Value = GaussCode> {
        (1..=max_n).prop_flat_map(|n| {
            let word: Vec<u16> = (1..=n as u16).flat_map(|l| [l, l]).collect();
            (
                Just(word).prop_shuffle(),
                prop::collection::vec(any::<bool>(), n),
                prop::collection::vec(
                    prop_oneof![Just(Sign::Plus), Just(Sign::Minus), Just(Sign::Unknown)],
                    n,
                ),
            )
                .prop_map(move |(word, first_over, signs)| {
                    let mut seen = vec![false; n];
                    let passes = word
                        .into_iter()
                        .map(|l| {
                            let i = (l - 1) as usize;
                            let first = !seen[i];
                            seen[i] = true;
                            let layer = if first == first_over[i] {
                                Layer::Over
                            } else {
                                Layer::Under
                            };
                            Pass { layer, label: l, sign: signs[i] }
                        })
                        .collect();
                    GaussCode::from_passes(passes).unwrap()
                })
        })
    }

    #[test]
    fn braid_closure_of_three_positive_crossings_is_the_right_trefoil() {
        let c = GaussCode::from_braid_closure(2, &[1, 1, 1]).unwrap();
        assert_eq!(c.render_tokens(), "O1+ U2+ O3+ U1+ O2+ U3+");
        assert!(GaussCode::from_braid_closure(2, &[1, 1]).is_err());
        assert!(GaussCode::from_braid_closure(3, &[3]).is_err());
        let g = GaussCode::from_braid_closure(3, &[1, -2, 1, -2]).unwrap();
        assert_eq!(g.strip_signs().key(), GaussCode::parse("AbCdBaDc").unwrap().key());
    }

    proptest! {
        #[test]
        fn token_roundtrip(c in arb_code(6)) {
            prop_assert_eq!(GaussCode::parse_tokens(&c.render_tokens()).unwrap(), c);
        }

        #[test]
        fn key_invariant_under_presentation(c in arb_code(5), k in 0usize..10, rev: bool) {
            let t = if rev { c.reversed().rotated(k) } else { c.rotated(k) };
            prop_assert_eq!(t.key(), c.key());
        }

        #[test]
        fn mirror_involution(c in arb_code(6)) {
            prop_assert_eq!(c.mirror().mirror(), c);
        }

        #[test]
        fn canonical_presentation_is_fixed_point(c in arb_code(5)) {
            let p = c.canonical_presentation();
            prop_assert_eq!(p.canonical_presentation(), p.clone());
            prop_assert_eq!(p.render_tokens(), c.key().0);
        }
    }
}
