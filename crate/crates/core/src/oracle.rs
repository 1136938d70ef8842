//! Exact Kauffman bracket over integer Laurent polynomials.
//!
//! The bracket is computed by the full 2^n state sum and normalized by the
//! writhe, giving a knot invariant that every sound rewrite must preserve.
//! It is deliberately self-contained: nothing here touches the move engine,
//! so it can sit in judgement over it.

use crate::code::{GaussCode, Layer, Sign, Signedness};
use crate::planarity::witness_signed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

/// Laurent polynomial in one variable A with integer coefficients, stored
/// as exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
pub struct LaurentPoly(BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly(BTreeMap::new())
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::monomial(0, 1)
    }

    pub fn monomial(exp: i32, coeff: i64) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if coeff != 0 {
            terms.insert(exp, coeff);
        }
        LaurentPoly(terms)
    }

    /// Value of a free loop: -A^2 - A^-2.
    pub fn delta() -> LaurentPoly {
        LaurentPoly::from_terms(&[(2, -1), (-2, -1)])
    }

    pub fn from_terms(terms: &[(i32, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self == &LaurentPoly::one()
    }

    fn add_term(&mut self, exp: i32, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let slot = self.0.entry(exp).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.0.remove(&exp);
        }
    }

    fn add_assign_shifted(&mut self, other: &LaurentPoly, shift: i32) {
        for (&e, &c) in &other.0 {
            self.add_term(e + shift, c);
        }
    }

    /// Substitute A -> 1/A.
    pub fn bar(&self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (-e, c)).collect())
    }

    /// The smaller of the polynomial and its mirror, a chirality-blind
    /// representative.
    pub fn mirror_min(self) -> LaurentPoly {
        let b = self.bar();
        if b < self {
            b
        } else {
            self
        }
    }

    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign_shifted(rhs, 0);
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, &c1) in &self.0 {
            for (&e2, &c2) in &rhs.0 {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (i, (&e, &c)) in self.0.iter().rev().enumerate() {
            let mag = c.unsigned_abs();
            if i == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else if c < 0 {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if mag != 1 || e == 0 {
                write!(f, "{mag}")?;
            }
            if e != 0 {
                write!(f, "A^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sum of crossing signs; defined only for fully signed codes.
pub fn writhe(code: &GaussCode) -> Option<i64> {
    let mut w = 0;
    for s in code.signs() {
        match s {
            Sign::Plus => w += 1,
            Sign::Minus => w -= 1,
            Sign::Unknown => return None,
        }
    }
    Some(w)
}

/// Raw Kauffman bracket of a fully signed code by the 2^n state sum. Each
/// state contributes A^(a-b) * delta^(loops-1).
pub fn bracket(code: &GaussCode) -> Option<LaurentPoly> {
    if !code.is_fully_signed() {
        return None;
    }
    let n = code.n();
    if n == 0 {
        return Some(LaurentPoly::one());
    }
    assert!(n <= 24, "state sum limited to 24 crossings");
    let total = 2 * n;
    // strand ends: position i has inbound end 2i and outbound end 2i+1;
    // arc i joins outbound end of position i to inbound end of position i+1
    let mut arc = vec![0usize; 2 * total];
    for i in 0..total {
        let j = (i + 1) % total;
        arc[2 * i + 1] = 2 * j;
        arc[2 * j] = 2 * i + 1;
    }
    struct Smoothings {
        a: [(usize, usize); 2],
        b: [(usize, usize); 2],
    }
    let mut crossings = Vec::with_capacity(n);
    for label in 1..=n as u16 {
        let (p, q) = code.positions_of(label);
        let first = code.passes()[p];
        let chi2 = (first.sign == Sign::Plus) == (first.layer == Layer::Over);
        let (inp, outp, inq, outq) = (2 * p, 2 * p + 1, 2 * q, 2 * q + 1);
        // counterclockwise corners; the A smoothing joins the inbound over
        // end to its clockwise neighbour
        let corners = if chi2 { [inp, inq, outp, outq] } else { [inp, outq, outp, inq] };
        let over_in = if first.layer == Layer::Over { inp } else { inq };
        let j = corners.iter().position(|&e| e == over_in).unwrap();
        crossings.push(Smoothings {
            a: [(corners[j], corners[(j + 3) % 4]), (corners[(j + 1) % 4], corners[(j + 2) % 4])],
            b: [(corners[j], corners[(j + 1) % 4]), (corners[(j + 2) % 4], corners[(j + 3) % 4])],
        });
    }
    let mut delta_pow = vec![LaurentPoly::one()];
    for k in 1..=n {
        delta_pow.push(&delta_pow[k - 1] * &LaurentPoly::delta());
    }
    let mut acc = LaurentPoly::zero();
    let mut pair = vec![0usize; 2 * total];
    let mut visited = vec![false; 2 * total];
    for mask in 0u32..1 << n {
        for (i, c) in crossings.iter().enumerate() {
            let pairs = if mask >> i & 1 == 0 { &c.a } else { &c.b };
            for &(x, y) in pairs {
                pair[x] = y;
                pair[y] = x;
            }
        }
        visited.fill(false);
        let mut loops = 0usize;
        for e in 0..2 * total {
            if visited[e] {
                continue;
            }
            loops += 1;
            let mut cur = e;
            while !visited[cur] {
                visited[cur] = true;
                visited[pair[cur]] = true;
                cur = arc[pair[cur]];
            }
        }
        let b = mask.count_ones() as i32;
        acc.add_assign_shifted(&delta_pow[loops - 1], n as i32 - 2 * b);
    }
    Some(acc)
}

fn normalize(raw: &LaurentPoly, w: i64) -> LaurentPoly {
    let sign = if w.rem_euclid(2) == 1 { -1 } else { 1 };
    raw * &LaurentPoly::monomial((-3 * w) as i32, sign)
}

/// Writhe-normalized bracket. Fully signed codes get the exact invariant of
/// the signed diagram; codes with unknown signs are witness-signed and the
/// result is folded to its chirality-blind representative, so it depends
/// only on the underlying word.
pub fn normalized_bracket(code: &GaussCode) -> Option<LaurentPoly> {
    if code.signedness() == Signedness::Full {
        let w = writhe(code)?;
        return Some(normalize(&bracket(code)?, w));
    }
    let signed = witness_signed(code)?;
    let w = writhe(&signed)?;
    Some(normalize(&bracket(&signed)?, w).mirror_min())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::Pass;

    fn code(s: &str) -> GaussCode {
        GaussCode::parse(s).unwrap()
    }

    #[test]
    fn kink_brackets() {
        let plus = code("O1+ U1+");
        let minus = code("O1- U1-");
        assert_eq!(bracket(&plus).unwrap(), LaurentPoly::monomial(3, -1));
        assert_eq!(bracket(&minus).unwrap(), LaurentPoly::monomial(-3, -1));
        assert_eq!(bracket(&plus).unwrap().eval_one(), -1);
        assert!(normalized_bracket(&plus).unwrap().is_one());
        assert!(normalized_bracket(&minus).unwrap().is_one());
    }

    #[test]
    fn empty_code_bracket_is_one() {
        assert!(normalized_bracket(&GaussCode::empty()).unwrap().is_one());
        assert_eq!(writhe(&GaussCode::empty()), Some(0));
    }

    #[test]
    fn right_trefoil_invariant() {
        let right = code("O1+ U2+ O3+ U1+ O2+ U3+");
        assert_eq!(writhe(&right), Some(3));
        assert_eq!(bracket(&right).unwrap(), LaurentPoly::from_terms(&[(5, -1), (-3, -1), (-7, 1)]));
        let f = normalized_bracket(&right).unwrap();
        assert_eq!(f, LaurentPoly::from_terms(&[(-4, 1), (-12, 1), (-16, -1)]));
        let left = right.mirror();
        assert_eq!(normalized_bracket(&left).unwrap(), f.bar());
        assert_ne!(normalized_bracket(&left).unwrap(), f);
    }

    #[test]
    fn unsigned_trefoil_folds_to_one_chirality() {
        let t = normalized_bracket(&code("AbCaBc")).unwrap();
        assert_eq!(t, LaurentPoly::from_terms(&[(-4, 1), (-12, 1), (-16, -1)]));
        assert_eq!(normalized_bracket(&code("aBcAbC")).unwrap(), t);
    }

    #[test]
    fn figure_eight_invariant_is_symmetric() {
        let f = normalized_bracket(&code("AbCdBaDc")).unwrap();
        let expect = LaurentPoly::from_terms(&[(8, 1), (4, -1), (0, 1), (-4, -1), (-8, 1)]);
        assert_eq!(f, expect);
        assert_eq!(f.bar(), f);
        assert_eq!(format!("{f}"), "A^8 - A^4 + 1 - A^-4 + A^-8");
    }

    #[test]
    fn descending_diagrams_are_unknots() {
        assert!(normalized_bracket(&code("ABCabc")).unwrap().is_one());
        assert!(normalized_bracket(&code("O1 O2 O3 U3 U2 U1")).unwrap().is_one());
    }

    #[test]
    fn poly_algebra() {
        let d = LaurentPoly::delta();
        assert_eq!(&d * &LaurentPoly::one(), d);
        assert_eq!(&d + &LaurentPoly::zero(), d);
        assert_eq!((&d * &d).eval_one(), 4);
        assert_eq!(format!("{}", LaurentPoly::zero()), "0");
        assert_eq!(format!("{d}"), "-A^2 - A^-2");
        assert_eq!(LaurentPoly::from_terms(&[(1, 2), (1, -2)]), LaurentPoly::zero());
    }

    // Exhaustive over realizable signed codes with up to 3 crossings: the
    // normalized bracket is invariant under re-presentation and conjugated
    // by mirroring.
    #[test]
    fn bracket_respects_symmetries() {
        let mut checked = 0;
        for n in 1..=3usize {
            fn words(n: usize) -> Vec<Vec<u16>> {
                let mut out = Vec::new();
                fn rec(word: &mut Vec<u16>, used: &mut [u8], n: usize, out: &mut Vec<Vec<u16>>) {
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
                rec(&mut Vec::new(), &mut vec![0; n + 1], n, &mut out);
                out
            }
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
                        let c = GaussCode::from_passes(passes).unwrap();
                        if !crate::planarity::is_realizable_signed(&c) {
                            continue;
                        }
                        checked += 1;
                        let f = normalized_bracket(&c).unwrap();
                        assert_eq!(normalized_bracket(&c.mirror()).unwrap(), f.bar());
                        assert_eq!(normalized_bracket(&c.reversed()).unwrap(), f);
                        for k in 0..c.len() {
                            assert_eq!(normalized_bracket(&c.rotated(k)).unwrap(), f.clone());
                        }
                    }
                }
            }
        }
        assert!(checked > 100);
    }
}
