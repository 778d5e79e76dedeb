use std::fmt;
use std::ops::Mul;

use super::{MealyAutomaton, MealyError};

/// A state or the inverse of a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub state: usize,
    pub inverse: bool,
}

impl Generator {
    pub fn pos(state: usize) -> Self {
        Generator { state, inverse: false }
    }

    pub fn neg(state: usize) -> Self {
        Generator { state, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Generator {
            state: self.state,
            inverse: !self.inverse,
        }
    }

    #[inline]
    pub(crate) fn code(self) -> u32 {
        (self.state as u32) << 1 | self.inverse as u32
    }

    #[inline]
    pub(crate) fn from_code(c: u32) -> Self {
        Generator {
            state: (c >> 1) as usize,
            inverse: c & 1 == 1,
        }
    }
}

/// A permutation of the alphabet, stored as the image of each letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.0[x]
    }

    /// `self` followed by `then` (right action).
    pub fn then(&self, then: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&y| then.0[y]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y] = x;
        }
        Permutation(inv)
    }
}

/// A formal product of states and their inverses of a permutational
/// automaton. Products act on the right: in `u * v` the factor `u` acts first.
#[derive(Clone)]
pub struct GroupWord<'a> {
    automaton: &'a MealyAutomaton,
    letters: Vec<Generator>,
}

/// `g = (g_x, x in Σ) σ_g`.
#[derive(Debug, Clone)]
pub struct WreathRecursion<'a> {
    pub root: Permutation,
    pub sections: Vec<GroupWord<'a>>,
}

impl<'a> GroupWord<'a> {
    pub fn new(automaton: &'a MealyAutomaton, letters: Vec<Generator>) -> Result<Self, MealyError> {
        automaton.require_permutational()?;
        if let Some(g) = letters.iter().find(|g| g.state >= automaton.num_states()) {
            return Err(MealyError::StateOutOfRange {
                state: g.state,
                size: automaton.num_states(),
            });
        }
        Ok(GroupWord { automaton, letters })
    }

    pub(crate) fn from_codes(automaton: &'a MealyAutomaton, codes: &[u32]) -> Self {
        GroupWord {
            automaton,
            letters: codes.iter().map(|&c| Generator::from_code(c)).collect(),
        }
    }

    pub(crate) fn codes(&self) -> Vec<u32> {
        self.letters.iter().map(|g| g.code()).collect()
    }

    pub fn identity(automaton: &'a MealyAutomaton) -> Result<Self, MealyError> {
        Self::new(automaton, Vec::new())
    }

    pub fn generator(automaton: &'a MealyAutomaton, state: usize) -> Result<Self, MealyError> {
        Self::new(automaton, vec![Generator::pos(state)])
    }

    /// Parses space separated state labels, each optionally followed by a
    /// power `^k` (negative powers allowed), e.g. `"a1 a2 a0^-1"`.
    pub fn parse(automaton: &'a MealyAutomaton, text: &str) -> Result<Self, MealyError> {
        let mut letters = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == '*' || c == '·').filter(|t| !t.is_empty()) {
            let (label, power) = match tok.rsplit_once('^') {
                Some((l, p)) => (
                    l,
                    p.parse::<i64>()
                        .map_err(|_| MealyError::Parse(format!("bad exponent in {tok:?}")))?,
                ),
                None => (tok, 1),
            };
            let q = automaton.state_index(label)?;
            let g = if power < 0 { Generator::neg(q) } else { Generator::pos(q) };
            letters.extend(std::iter::repeat_n(g, power.unsigned_abs() as usize));
        }
        Self::new(automaton, letters)
    }

    pub fn automaton(&self) -> &'a MealyAutomaton {
        self.automaton
    }

    pub fn letters(&self) -> &[Generator] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub(crate) fn same_automaton(&self, other: &GroupWord<'_>) -> Result<(), MealyError> {
        if std::ptr::eq(self.automaton, other.automaton) || self.automaton == other.automaton {
            Ok(())
        } else {
            Err(MealyError::AutomatonMismatch)
        }
    }

    pub fn try_mul(&self, other: &GroupWord<'a>) -> Result<GroupWord<'a>, MealyError> {
        self.same_automaton(other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GroupWord {
            automaton: self.automaton,
            letters,
        })
    }

    pub fn inverse(&self) -> GroupWord<'a> {
        GroupWord {
            automaton: self.automaton,
            letters: self.letters.iter().rev().map(|g| g.inverted()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> GroupWord<'a> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut letters = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            letters.extend_from_slice(&base.letters);
        }
        GroupWord {
            automaton: self.automaton,
            letters,
        }
    }

    /// Free reduction: cancels adjacent `q q^-1` and `q^-1 q`.
    pub fn reduced(&self) -> GroupWord<'a> {
        GroupWord::from_codes(self.automaton, &free_reduce(&self.codes()))
    }

    /// Image of one letter together with the section at that letter.
    fn step(&self, x: usize) -> (usize, Vec<Generator>) {
        let a = self.automaton;
        let mut x = x;
        let mut section = Vec::with_capacity(self.letters.len());
        for g in &self.letters {
            if g.inverse {
                let y = a.preimage(g.state, x);
                section.push(Generator::neg(a.next_state(g.state, y)));
                x = y;
            } else {
                section.push(Generator::pos(a.next_state(g.state, x)));
                x = a.output_letter(g.state, x);
            }
        }
        (x, section)
    }

    pub fn root_permutation(&self) -> Permutation {
        Permutation(
            (0..self.automaton.alphabet_size())
                .map(|x| self.step(x).0)
                .collect(),
        )
    }

    /// Section at a letter; has the same length as `self`.
    pub fn section(&self, x: usize) -> Result<GroupWord<'a>, MealyError> {
        self.automaton.check_word(&[x])?;
        Ok(GroupWord {
            automaton: self.automaton,
            letters: self.step(x).1,
        })
    }

    /// Section at a word, `g_{xu} = (g_x)_u`.
    pub fn section_at(&self, w: &[usize]) -> Result<GroupWord<'a>, MealyError> {
        self.automaton.check_word(w)?;
        let mut cur = self.clone();
        for &x in w {
            cur.letters = cur.step(x).1;
        }
        Ok(cur)
    }

    pub fn wreath_recursion(&self) -> WreathRecursion<'a> {
        let n = self.automaton.alphabet_size();
        let mut root = Vec::with_capacity(n);
        let mut sections = Vec::with_capacity(n);
        for x in 0..n {
            let (y, s) = self.step(x);
            root.push(y);
            sections.push(GroupWord {
                automaton: self.automaton,
                letters: s,
            });
        }
        WreathRecursion {
            root: Permutation(root),
            sections,
        }
    }

    /// Image of a word over the alphabet.
    pub fn act(&self, w: &[usize]) -> Result<Vec<usize>, MealyError> {
        self.automaton.check_word(w)?;
        let mut cur = w.to_vec();
        let a = self.automaton;
        for g in &self.letters {
            cur = if g.inverse {
                let mut s = g.state;
                cur.iter()
                    .map(|&x| {
                        let y = a.preimage(s, x);
                        s = a.next_state(s, y);
                        y
                    })
                    .collect()
            } else {
                a.act(g.state, &cur)?
            };
        }
        Ok(cur)
    }

    /// Display using the automaton's state labels, e.g. `a1 a2^-1`.
    pub fn display(&self) -> String {
        if self.letters.is_empty() {
            return "e".to_string();
        }
        self.letters
            .iter()
            .map(|g| {
                let l = &self.automaton.state_labels()[g.state];
                if g.inverse {
                    format!("{l}^-1")
                } else {
                    l.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for GroupWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupWord({})", self.display())
    }
}

impl fmt::Display for GroupWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// Literal equality of letter sequences (not of the transformations).
impl PartialEq for GroupWord<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.same_automaton(other).is_ok() && self.letters == other.letters
    }
}

impl Eq for GroupWord<'_> {}

impl<'a> Mul for &GroupWord<'a> {
    type Output = GroupWord<'a>;

    /// Panics if the words come from different automata; see [`GroupWord::try_mul`].
    fn mul(self, rhs: &GroupWord<'a>) -> GroupWord<'a> {
        self.try_mul(rhs).expect("words over the same automaton")
    }
}

impl<'a> Mul for GroupWord<'a> {
    type Output = GroupWord<'a>;

    fn mul(self, rhs: GroupWord<'a>) -> GroupWord<'a> {
        &self * &rhs
    }
}

#[inline]
pub(crate) fn free_reduce(codes: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::with_capacity(codes.len());
    for &c in codes {
        match out.last() {
            Some(&last) if last == c ^ 1 => {
                out.pop();
            }
            _ => out.push(c),
        }
    }
    out
}
