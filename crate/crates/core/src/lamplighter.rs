//! The lamplighter group `X wr Z` as pairs (finitely supported lamp
//! configuration, shift), and its identification with the automaton group
//! of `A_X`.
//!
//! The product is `(f, s)(g, t) = (f + g(. - s), s + t)`: the right factor's
//! lamps are moved by the left factor's shift. Write `T = (0, 1)` and
//! `L_j = ({0 -> j}, 0)`. The generators map as `a_j -> T L_j`, so that
//! `a_0 -> T` and `a_0^-1 a_j -> L_j`.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::abelian::{Element, FiniteAbelianGroup, GroupError};
use crate::constructions::AbelianAutomaton;
use crate::mealy::{Generator, GroupWord};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct LamplighterElement {
    lamps: BTreeMap<i64, Element>,
    shift: i64,
}

fn is_zero(e: &Element) -> bool {
    e.residues().iter().all(|&r| r == 0)
}

impl LamplighterElement {
    /// Zero lamps are dropped.
    pub fn new(lamps: BTreeMap<i64, Element>, shift: i64) -> Self {
        let lamps = lamps.into_iter().filter(|(_, e)| !is_zero(e)).collect();
        LamplighterElement { lamps, shift }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn translation(shift: i64) -> Self {
        LamplighterElement {
            lamps: BTreeMap::new(),
            shift,
        }
    }

    pub fn lamp(position: i64, value: Element) -> Self {
        Self::new(BTreeMap::from([(position, value)]), 0)
    }

    pub fn lamps(&self) -> &BTreeMap<i64, Element> {
        &self.lamps
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn is_identity(&self) -> bool {
        self.shift == 0 && self.lamps.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        let raw: LamplighterElement = serde_json::from_str(s)?;
        Ok(Self::new(raw.lamps, raw.shift))
    }

    /// Checks every lamp against the group.
    pub fn validate(&self, g: &FiniteAbelianGroup) -> Result<(), GroupError> {
        for e in self.lamps.values() {
            g.index_of(e)?;
        }
        Ok(())
    }

    /// A random element with lamps on `[-radius, radius]` and
    /// `|shift| <= max_shift`.
    pub fn random<R: Rng + ?Sized>(
        g: &FiniteAbelianGroup,
        rng: &mut R,
        radius: i64,
        max_shift: i64,
    ) -> Self {
        let lamps = (-radius..=radius)
            .map(|p| (p, g.element_at(rng.gen_range(0..g.order()))))
            .collect();
        Self::new(lamps, rng.gen_range(-max_shift..=max_shift))
    }
}

pub fn ll_multiply(
    g: &FiniteAbelianGroup,
    p: &LamplighterElement,
    q: &LamplighterElement,
) -> Result<LamplighterElement, GroupError> {
    let mut lamps = p.lamps.clone();
    for (&pos, e) in &q.lamps {
        let at = pos + p.shift;
        let sum = match lamps.get(&at) {
            Some(cur) => g.add(cur, e)?,
            None => g.add(&g.zero(), e)?,
        };
        lamps.insert(at, sum);
    }
    Ok(LamplighterElement::new(lamps, p.shift + q.shift))
}

pub fn ll_inverse(
    g: &FiniteAbelianGroup,
    p: &LamplighterElement,
) -> Result<LamplighterElement, GroupError> {
    let lamps = p
        .lamps
        .iter()
        .map(|(&pos, e)| Ok((pos - p.shift, g.negate(e)?)))
        .collect::<Result<_, GroupError>>()?;
    Ok(LamplighterElement::new(lamps, -p.shift))
}

/// Image of a single generator `a_j` or `a_j^-1`.
pub fn generator_image(g: &FiniteAbelianGroup, gen: Generator) -> LamplighterElement {
    let ta = LamplighterElement::new(BTreeMap::from([(1, g.element_at(gen.state))]), 1);
    if gen.inverse {
        ll_inverse(g, &ta).expect("element of g")
    } else {
        ta
    }
}

/// Folds the generator images over the word.
pub fn word_to_lamplighter(
    g: &FiniteAbelianGroup,
    w: &GroupWord<'_>,
) -> Result<LamplighterElement, GroupError> {
    let n = w.automaton().alphabet_size();
    if n != g.order() {
        return Err(GroupError::DimensionMismatch {
            expected: g.order(),
            found: n,
        });
    }
    let mut acc = LamplighterElement::identity();
    for &gen in w.letters() {
        acc = ll_multiply(g, &acc, &generator_image(g, gen))?;
    }
    Ok(acc)
}

/// A word in the `a_j^{+-1}` mapping to `p`. Lamps at positions
/// `p_1 < ... < p_m` with values `j_1, ..., j_m` give
/// `a_0^{p_1 - 1} a_{j_1} a_0^{p_2 - p_1 - 1} a_{j_2} ... a_{j_m} a_0^{t - p_m}`.
pub fn lamplighter_to_word<'a>(
    ax: &'a AbelianAutomaton,
    p: &LamplighterElement,
) -> Result<GroupWord<'a>, GroupError> {
    let g = ax.group();
    let mut letters = Vec::new();
    let push_a0 = |letters: &mut Vec<Generator>, k: i64| {
        let gen = if k < 0 {
            Generator::neg(0)
        } else {
            Generator::pos(0)
        };
        letters.extend(std::iter::repeat_n(gen, k.unsigned_abs() as usize));
    };
    let mut at = 0i64;
    for (&pos, e) in &p.lamps {
        push_a0(&mut letters, pos - at - 1);
        letters.push(Generator::pos(g.index_of(e)?));
        at = pos;
    }
    push_a0(&mut letters, p.shift - at);
    Ok(ax.word(letters))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: i64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(&[n]).unwrap()
    }

    fn el(g: &FiniteAbelianGroup, r: i64) -> Element {
        g.element(&[r]).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let g3 = z(3);
        let p = LamplighterElement::new(BTreeMap::from([(0, el(&g3, 1))]), 1);
        let pp = ll_multiply(&g3, &p, &p).unwrap();
        let expect = LamplighterElement::new(BTreeMap::from([(0, el(&g3, 1)), (1, el(&g3, 1))]), 2);
        assert_eq!(pp, expect);
        assert_eq!(ll_multiply(&g3, &LamplighterElement::identity(), &p).unwrap(), p);

        let g2 = z(2);
        let l = LamplighterElement::lamp(0, el(&g2, 1));
        assert!(ll_multiply(&g2, &l, &l).unwrap().is_identity());
        assert_eq!(ll_inverse(&g2, &l).unwrap(), l);
        assert_eq!(
            ll_inverse(&g2, &LamplighterElement::translation(4)).unwrap(),
            LamplighterElement::translation(-4)
        );
    }

    #[test]
    fn zero_lamps_are_dropped() {
        let g = z(3);
        let p = LamplighterElement::new(BTreeMap::from([(5, el(&g, 0))]), 0);
        assert!(p.is_identity());
    }

    #[test]
    fn generator_images() {
        let ax = AbelianAutomaton::new(z(3));
        let g = ax.group();
        assert_eq!(
            word_to_lamplighter(g, &ax.a(0)).unwrap(),
            LamplighterElement::translation(1)
        );
        for j in 0..3 {
            assert_eq!(
                word_to_lamplighter(g, &ax.lamp_generator_c(j)).unwrap(),
                LamplighterElement::lamp(0, g.element_at(j))
            );
        }
        // a_0^-2 c_1 a_0^2 lights position -2
        let w = &(&ax.a(0).pow(-2) * &ax.lamp_generator_c(1)) * &ax.a(0).pow(2);
        assert_eq!(
            word_to_lamplighter(g, &w).unwrap(),
            LamplighterElement::lamp(-2, g.element_at(1))
        );
    }

    #[test]
    fn spelling() {
        let ax = AbelianAutomaton::new(z(3));
        let g = ax.group();
        let w = lamplighter_to_word(&ax, &LamplighterElement::translation(3)).unwrap();
        assert_eq!(w.display(), "a0 a0 a0");
        let w = lamplighter_to_word(&ax, &LamplighterElement::lamp(0, el(g, 2))).unwrap();
        assert_eq!(w.display(), "a0^-1 a2");
        let p = LamplighterElement::new(BTreeMap::from([(0, el(g, 2)), (1, el(g, 1))]), 0);
        let w = lamplighter_to_word(&ax, &p).unwrap();
        assert_eq!(w.display(), "a0^-1 a2 a1 a0^-1");
        assert_eq!(word_to_lamplighter(g, &w).unwrap(), p);
    }

    #[test]
    fn json_uses_position_keys() {
        let g = z(3);
        let p = LamplighterElement::new(BTreeMap::from([(-1, el(&g, 2))]), 2);
        let s = p.to_json();
        assert_eq!(s, r#"{"lamps":{"-1":[2]},"shift":2}"#);
        assert_eq!(LamplighterElement::from_json(&s).unwrap(), p);
    }
}
