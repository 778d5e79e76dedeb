//! Finite letter-to-letter Mealy automata and the groups their states
//! generate.
//!
//! An automaton is stored as two tables indexed `[state][letter]`. States and
//! letters are plain indices; labels are kept only for display and export.
//! Group elements are formal products of states and inverse states
//! ([`GroupWord`]), and equality of the transformations they define is
//! decided by exploring their sections ([`words_equal`]).

mod equality;
mod iso;
mod minimize;
mod word;

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use equality::{
    is_constant_translation, is_constant_translation_with_cap, is_identity, is_identity_with_cap,
    words_equal, words_equal_with_cap, DEFAULT_STATE_CAP,
};
pub use iso::Isomorphism;
pub use word::{Generator, GroupWord, Permutation, WreathRecursion};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MealyError {
    #[error("table shape: {0}")]
    Shape(String),
    #[error("letter {letter} outside the alphabet of size {size}")]
    LetterOutOfRange { letter: usize, size: usize },
    #[error("state {state} outside the state set of size {size}")]
    StateOutOfRange { state: usize, size: usize },
    #[error("automaton is not permutational: output row of state {state} is not a bijection")]
    NotPermutational { state: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("words belong to different automata")]
    AutomatonMismatch,
    #[error("undecided: state cap exceeded ({cap} section words visited)")]
    CapExceeded { cap: usize },
    #[error("alphabet of size {alphabet} does not carry a group of order {order}")]
    NotGroupAlphabet { alphabet: usize, order: usize },
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error("json: {0}")]
    Json(String),
}

/// A finite Mealy automaton `(Q, Σ, λ, μ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MealyAutomaton {
    states: Vec<String>,
    alphabet: Vec<String>,
    transition: Vec<Vec<usize>>,
    output: Vec<Vec<usize>>,
    // `inverse_output[q][y] = x` iff `output[q][x] = y`; present iff permutational.
    inverse_output: Option<Vec<Vec<usize>>>,
}

/// On-disk layout: rows are states, columns are letters, entries are indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonJson {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub transition: Vec<Vec<usize>>,
    pub output: Vec<Vec<usize>>,
}

impl MealyAutomaton {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<String>,
        transition: Vec<Vec<usize>>,
        output: Vec<Vec<usize>>,
    ) -> Result<Self, MealyError> {
        let nq = states.len();
        let nx = alphabet.len();
        if nq == 0 || nx == 0 {
            return Err(MealyError::Shape("state set and alphabet must be non-empty".into()));
        }
        check_unique(&states)?;
        check_unique(&alphabet)?;
        if transition.len() != nq || output.len() != nq {
            return Err(MealyError::Shape(format!(
                "expected {nq} rows, got {} transition and {} output rows",
                transition.len(),
                output.len()
            )));
        }
        for (q, (trow, orow)) in transition.iter().zip(&output).enumerate() {
            if trow.len() != nx || orow.len() != nx {
                return Err(MealyError::Shape(format!("row {q} must have {nx} entries")));
            }
            if let Some(&s) = trow.iter().find(|&&s| s >= nq) {
                return Err(MealyError::StateOutOfRange { state: s, size: nq });
            }
            if let Some(&x) = orow.iter().find(|&&x| x >= nx) {
                return Err(MealyError::LetterOutOfRange { letter: x, size: nx });
            }
        }
        let inverse_output = invert_rows(&output, nx);
        Ok(MealyAutomaton {
            states,
            alphabet,
            transition,
            output,
            inverse_output,
        })
    }

    pub fn from_json(s: &str) -> Result<Self, MealyError> {
        let j: AutomatonJson = serde_json::from_str(s).map_err(|e| MealyError::Json(e.to_string()))?;
        Self::from_layout(j)
    }

    pub fn from_layout(j: AutomatonJson) -> Result<Self, MealyError> {
        Self::new(j.states, j.alphabet, j.transition, j.output)
    }

    pub fn to_layout(&self) -> AutomatonJson {
        AutomatonJson {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            transition: self.transition.clone(),
            output: self.output.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_layout()).expect("plain data serializes")
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn state_labels(&self) -> &[String] {
        &self.states
    }

    pub fn letter_labels(&self) -> &[String] {
        &self.alphabet
    }

    pub fn state_index(&self, label: &str) -> Result<usize, MealyError> {
        self.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| MealyError::UnknownLabel(label.to_string()))
    }

    pub fn letter_index(&self, label: &str) -> Result<usize, MealyError> {
        self.alphabet
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| MealyError::UnknownLabel(label.to_string()))
    }

    /// `λ(q, x)`.
    #[inline]
    pub fn next_state(&self, q: usize, x: usize) -> usize {
        self.transition[q][x]
    }

    /// `μ(q, x)`.
    #[inline]
    pub fn output_letter(&self, q: usize, x: usize) -> usize {
        self.output[q][x]
    }

    /// The letter `y` with `μ(q, y) = x`. Panics on non-permutational automata.
    #[inline]
    pub(crate) fn preimage(&self, q: usize, x: usize) -> usize {
        self.inverse_output.as_ref().expect("permutational automaton")[q][x]
    }

    pub fn transition_table(&self) -> &[Vec<usize>] {
        &self.transition
    }

    pub fn output_table(&self) -> &[Vec<usize>] {
        &self.output
    }

    pub fn is_permutational(&self) -> bool {
        self.inverse_output.is_some()
    }

    pub(crate) fn require_permutational(&self) -> Result<(), MealyError> {
        if self.is_permutational() {
            return Ok(());
        }
        let nx = self.alphabet.len();
        let state = (0..self.states.len())
            .find(|&q| invert_rows(&self.output[q..=q], nx).is_none())
            .unwrap_or(0);
        Err(MealyError::NotPermutational { state })
    }

    fn check_state(&self, q: usize) -> Result<(), MealyError> {
        if q >= self.states.len() {
            return Err(MealyError::StateOutOfRange {
                state: q,
                size: self.states.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_word(&self, w: &[usize]) -> Result<(), MealyError> {
        match w.iter().find(|&&x| x >= self.alphabet.len()) {
            Some(&letter) => Err(MealyError::LetterOutOfRange {
                letter,
                size: self.alphabet.len(),
            }),
            None => Ok(()),
        }
    }

    /// Extended transition function `λ(q, w)`.
    pub fn extended_transition(&self, q: usize, w: &[usize]) -> Result<usize, MealyError> {
        self.check_state(q)?;
        self.check_word(w)?;
        Ok(w.iter().fold(q, |s, &x| self.transition[s][x]))
    }

    /// Extended output function `μ(q, w)`, i.e. the image of `w` under the
    /// transformation defined at `q`.
    pub fn act(&self, q: usize, w: &[usize]) -> Result<Vec<usize>, MealyError> {
        self.check_state(q)?;
        self.check_word(w)?;
        let mut s = q;
        Ok(w.iter()
            .map(|&x| {
                let y = self.output[s][x];
                s = self.transition[s][x];
                y
            })
            .collect())
    }

    /// The dual automaton: states and letters swap, and so do λ and μ.
    pub fn dual(&self) -> MealyAutomaton {
        let nq = self.states.len();
        let nx = self.alphabet.len();
        let mut transition = vec![vec![0; nq]; nx];
        let mut output = vec![vec![0; nq]; nx];
        for q in 0..nq {
            for x in 0..nx {
                transition[x][q] = self.output[q][x];
                output[x][q] = self.transition[q][x];
            }
        }
        MealyAutomaton::new(self.alphabet.clone(), self.states.clone(), transition, output)
            .expect("dual of a valid automaton is valid")
    }

    /// The inverse automaton on the same state set. At state `q` it reads
    /// `x`, writes the letter `y` with `μ(q, y) = x` and moves to `λ(q, y)`,
    /// so that it follows the same state trajectory as the original run.
    pub fn inverse(&self) -> Result<MealyAutomaton, MealyError> {
        self.require_permutational()?;
        let inv = self.inverse_output.as_ref().expect("checked");
        let transition = inv
            .iter()
            .enumerate()
            .map(|(q, row)| row.iter().map(|&y| self.transition[q][y]).collect())
            .collect();
        MealyAutomaton::new(
            self.states.clone(),
            self.alphabet.clone(),
            transition,
            inv.clone(),
        )
    }

    /// Permutational with a permutational dual.
    pub fn is_reversible(&self) -> bool {
        self.is_permutational() && self.dual().is_permutational()
    }

    /// Reversible, and the dual of the inverse is permutational as well.
    pub fn is_bireversible(&self) -> bool {
        self.is_reversible()
            && self
                .inverse()
                .map(|inv| inv.dual().is_permutational())
                .unwrap_or(false)
    }

    /// Searches for state and letter bijections carrying `self` onto `other`.
    pub fn isomorphic(&self, other: &MealyAutomaton) -> Option<Isomorphism> {
        iso::find_isomorphism(self, other)
    }

    /// Checks a proposed isomorphism witness against both defining equations.
    pub fn is_isomorphism(&self, other: &MealyAutomaton, phi: &[usize], psi: &[usize]) -> bool {
        iso::verify(self, other, phi, psi)
    }

    /// Behavioral quotient: merges states defining the same transformation.
    /// Returns the quotient and the map from old to new state indices.
    pub fn minimize(&self) -> (MealyAutomaton, Vec<usize>) {
        minimize::minimize(self)
    }

    /// Orbit size of `start` under the transformations of all states and of
    /// their inverses (the latter only for permutational automata).
    pub fn orbit_size(&self, start: &[usize]) -> Result<usize, MealyError> {
        self.check_word(start)?;
        let inverse = self.inverse().ok();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.to_vec());
        queue.push_back(start.to_vec());
        while let Some(w) = queue.pop_front() {
            for q in 0..self.states.len() {
                let images = std::iter::once(self.act(q, &w)?)
                    .chain(inverse.as_ref().map(|inv| inv.act(q, &w)).transpose()?);
                for img in images {
                    if seen.insert(img.clone()) {
                        queue.push_back(img);
                    }
                }
            }
        }
        Ok(seen.len())
    }

    /// Graphviz rendering; each edge is labelled `x|μ(q,x)`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        writeln!(s, "digraph \"{}\" {{", escape(name)).unwrap();
        writeln!(s, "  rankdir=LR;").unwrap();
        writeln!(s, "  node [shape=circle];").unwrap();
        for q in &self.states {
            writeln!(s, "  \"{}\";", escape(q)).unwrap();
        }
        for (q, label) in self.states.iter().enumerate() {
            for x in 0..self.alphabet.len() {
                writeln!(
                    s,
                    "  \"{}\" -> \"{}\" [label=\"{}|{}\"];",
                    escape(label),
                    escape(&self.states[self.transition[q][x]]),
                    escape(&self.alphabet[x]),
                    escape(&self.alphabet[self.output[q][x]])
                )
                .unwrap();
            }
        }
        s.push_str("}\n");
        s
    }

    /// Edges `(source, input, output, target)` by label, in table order.
    pub fn labelled_edges(&self) -> Vec<(String, String, String, String)> {
        let mut edges = Vec::with_capacity(self.states.len() * self.alphabet.len());
        for q in 0..self.states.len() {
            for x in 0..self.alphabet.len() {
                edges.push((
                    self.states[q].clone(),
                    self.alphabet[x].clone(),
                    self.alphabet[self.output[q][x]].clone(),
                    self.states[self.transition[q][x]].clone(),
                ));
            }
        }
        edges
    }

    /// A Mealy automaton with a single identity state over `letters`.
    pub fn identity(letters: Vec<String>) -> Result<Self, MealyError> {
        let n = letters.len();
        MealyAutomaton::new(
            vec!["e".to_string()],
            letters,
            vec![vec![0; n]],
            vec![(0..n).collect()],
        )
    }
}

fn check_unique(labels: &[String]) -> Result<(), MealyError> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(MealyError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

fn invert_rows(rows: &[Vec<usize>], n: usize) -> Option<Vec<Vec<usize>>> {
    rows.iter()
        .map(|row| {
            let mut inv = vec![usize::MAX; n];
            for (x, &y) in row.iter().enumerate() {
                if inv[y] != usize::MAX {
                    return None;
                }
                inv[y] = x;
            }
            Some(inv)
        })
        .collect()
}

pub(crate) fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests;
