//! One-vertex oriented VH square complexes and their dictionary with
//! automata.
//!
//! A square `(v, h, v', h')` is the closed path that goes up the vertical
//! edge `v`, right along the horizontal edge `h`, down the reversed vertical
//! edge `v'` and back left along the reversed horizontal edge `h'`. Starting
//! at the south-west corner, its four corners are
//!
//! * SW: start of `v`, start of `h'`
//! * NW: end of `v`, start of `h`
//! * NE: end of `h`, end of `v'`
//! * SE: start of `v'`, end of `h'`

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mealy::{escape, MealyAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("not uniquely squared: ({vertical}, {horizontal}) starts {count} squares")]
    NotUniquelySquared {
        vertical: String,
        horizontal: String,
        count: usize,
    },
    #[error("square {index} references a missing edge")]
    MissingEdge { index: usize },
    #[error("json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[usize; 4]", into = "[usize; 4]")]
pub struct Square {
    pub v: usize,
    pub h: usize,
    pub v_end: usize,
    pub h_end: usize,
}

impl From<[usize; 4]> for Square {
    fn from([v, h, v_end, h_end]: [usize; 4]) -> Self {
        Square { v, h, v_end, h_end }
    }
}

impl From<Square> for [usize; 4] {
    fn from(s: Square) -> Self {
        [s.v, s.h, s.v_end, s.h_end]
    }
}

/// Which end of an oriented edge sits at the corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeEnd {
    Start,
    End,
}

/// A corner of the link: one vertical germ and one horizontal germ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Corner {
    pub vertical: usize,
    pub vertical_end: EdgeEnd,
    pub horizontal: usize,
    pub horizontal_end: EdgeEnd,
}

/// Number of squares through each of the `2|V| * 2|H|` possible corners.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkStatus {
    pub counts: BTreeMap<Corner, usize>,
}

impl LinkStatus {
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Corners not covered by exactly one square.
    pub fn defects(&self) -> Vec<(Corner, usize)> {
        self.counts
            .iter()
            .filter(|(_, &c)| c != 1)
            .map(|(&k, &c)| (k, c))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareComplex {
    vertical: Vec<String>,
    horizontal: Vec<String>,
    squares: Vec<Square>,
}

/// Group presentation of the fundamental group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Each relation is a list of `(generator index, exponent ±1)`.
    pub relations: Vec<Vec<(usize, i8)>>,
    pub notes: Vec<String>,
}

/// Rank data of the HNN splitting of the fundamental group of `Delta_X`
/// for `|X| = n`. Informational only; nothing here is computed in the group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HnnConstants {
    pub base_rank: usize,
    pub associated_rank: usize,
    pub index: usize,
}

impl HnnConstants {
    pub fn for_order(n: usize) -> Self {
        HnnConstants {
            base_rank: n,
            associated_rank: n * n - n + 1,
            index: n,
        }
    }
}

pub const FREE_SUBGROUPS_NOTE: &str = "subgroups generated by Q and X are free";

impl SquareComplex {
    pub fn new(
        vertical: Vec<String>,
        horizontal: Vec<String>,
        squares: Vec<Square>,
    ) -> Result<Self, ComplexError> {
        for (index, s) in squares.iter().enumerate() {
            if s.v.max(s.v_end) >= vertical.len() || s.h.max(s.h_end) >= horizontal.len() {
                return Err(ComplexError::MissingEdge { index });
            }
        }
        Ok(SquareComplex {
            vertical,
            horizontal,
            squares,
        })
    }

    pub fn from_json(s: &str) -> Result<Self, ComplexError> {
        let c: SquareComplex = serde_json::from_str(s).map_err(|e| ComplexError::Json(e.to_string()))?;
        SquareComplex::new(c.vertical, c.horizontal, c.squares)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn vertical(&self) -> &[String] {
        &self.vertical
    }

    pub fn horizontal(&self) -> &[String] {
        &self.horizontal
    }

    pub fn squares(&self) -> &[Square] {
        &self.squares
    }

    /// One vertical loop per state, one horizontal loop per letter and the
    /// square `(q, x, λ(q,x), μ(q,x))` for every pair.
    pub fn from_automaton(a: &MealyAutomaton) -> SquareComplex {
        let mut squares = Vec::with_capacity(a.num_states() * a.alphabet_size());
        for q in 0..a.num_states() {
            for x in 0..a.alphabet_size() {
                squares.push(Square {
                    v: q,
                    h: x,
                    v_end: a.next_state(q, x),
                    h_end: a.output_letter(q, x),
                });
            }
        }
        SquareComplex {
            vertical: a.state_labels().to_vec(),
            horizontal: a.letter_labels().to_vec(),
            squares,
        }
    }

    /// Reads the automaton back off a complex in which every pair `(v, h)`
    /// starts exactly one square.
    pub fn to_automaton(&self) -> Result<MealyAutomaton, ComplexError> {
        let (nv, nh) = (self.vertical.len(), self.horizontal.len());
        let mut found: Vec<Vec<Option<Square>>> = vec![vec![None; nh]; nv];
        let mut count = vec![vec![0usize; nh]; nv];
        for s in &self.squares {
            count[s.v][s.h] += 1;
            found[s.v][s.h] = Some(*s);
        }
        for v in 0..nv {
            for h in 0..nh {
                if count[v][h] != 1 {
                    return Err(ComplexError::NotUniquelySquared {
                        vertical: self.vertical[v].clone(),
                        horizontal: self.horizontal[h].clone(),
                        count: count[v][h],
                    });
                }
            }
        }
        let transition = found
            .iter()
            .map(|row| row.iter().map(|s| s.expect("counted").v_end).collect())
            .collect();
        let output = found
            .iter()
            .map(|row| row.iter().map(|s| s.expect("counted").h_end).collect())
            .collect();
        MealyAutomaton::new(self.vertical.clone(), self.horizontal.clone(), transition, output)
            .map_err(|e| ComplexError::Json(e.to_string()))
    }

    pub fn corners(s: &Square) -> [Corner; 4] {
        use EdgeEnd::*;
        let c = |v, ve, h, he| Corner {
            vertical: v,
            vertical_end: ve,
            horizontal: h,
            horizontal_end: he,
        };
        [
            c(s.v, Start, s.h_end, Start),
            c(s.v, End, s.h, Start),
            c(s.v_end, End, s.h, End),
            c(s.v_end, Start, s.h_end, End),
        ]
    }

    pub fn link_status(&self) -> LinkStatus {
        let mut counts = BTreeMap::new();
        for v in 0..self.vertical.len() {
            for ve in [EdgeEnd::Start, EdgeEnd::End] {
                for h in 0..self.horizontal.len() {
                    for he in [EdgeEnd::Start, EdgeEnd::End] {
                        counts.insert(
                            Corner {
                                vertical: v,
                                vertical_end: ve,
                                horizontal: h,
                                horizontal_end: he,
                            },
                            0,
                        );
                    }
                }
            }
        }
        for s in &self.squares {
            for c in Self::corners(s) {
                *counts.get_mut(&c).expect("all corners listed") += 1;
            }
        }
        LinkStatus { counts }
    }

    /// Complete iff the link is complete bipartite with every corner filled
    /// by exactly one square.
    pub fn is_complete(&self) -> (bool, LinkStatus) {
        let status = self.link_status();
        (status.defects().is_empty(), status)
    }

    /// `(0-cells, oriented 1-cells, 2-cells)`.
    pub fn cell_census(&self) -> (usize, usize, usize) {
        (
            1,
            2 * (self.vertical.len() + self.horizontal.len()),
            self.squares.len(),
        )
    }

    /// Generators are the vertical then the horizontal edges; each square
    /// reads off the relation `v h v'^-1 h'^-1`.
    pub fn fundamental_presentation(&self) -> Presentation {
        let nv = self.vertical.len();
        let mut generators: Vec<String> = self.vertical.iter().map(|l| generator_name(l, "")).collect();
        generators.extend(self.horizontal.iter().map(|l| generator_name(l, "x")));
        let relations = self
            .squares
            .iter()
            .map(|s| vec![(s.v, 1), (nv + s.h, 1), (s.v_end, -1), (nv + s.h_end, -1)])
            .collect();
        Presentation {
            generators,
            relations,
            notes: vec![FREE_SUBGROUPS_NOTE.to_string()],
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph squares {\n  node [shape=point];\n");
        for (k, sq) in self.squares.iter().enumerate() {
            let (v, h) = (&self.vertical[sq.v], &self.horizontal[sq.h]);
            let (v1, h1) = (&self.vertical[sq.v_end], &self.horizontal[sq.h_end]);
            writeln!(s, "  subgraph cluster_{k} {{").unwrap();
            writeln!(s, "    label=\"({}, {}, {}', {}')\";", escape(v), escape(h), escape(v1), escape(h1)).unwrap();
            writeln!(s, "    s{k}_sw -> s{k}_nw [label=\"{}\"];", escape(v)).unwrap();
            writeln!(s, "    s{k}_nw -> s{k}_ne [label=\"{}\"];", escape(h)).unwrap();
            writeln!(s, "    s{k}_se -> s{k}_ne [label=\"{}\"];", escape(v1)).unwrap();
            writeln!(s, "    s{k}_sw -> s{k}_se [label=\"{}\"];", escape(h1)).unwrap();
            writeln!(s, "  }}").unwrap();
        }
        s.push_str("}\n");
        s
    }

    /// The link of the vertex; germs are `label+` (edge start) and `label-`
    /// (edge end), one graph edge per square corner.
    pub fn link_dot(&self) -> String {
        let germ = |label: &str, end: EdgeEnd| match end {
            EdgeEnd::Start => format!("{label}+"),
            EdgeEnd::End => format!("{label}-"),
        };
        let mut s = String::from("graph link {\n");
        for sq in &self.squares {
            for c in Self::corners(sq) {
                writeln!(
                    s,
                    "  \"{}\" -- \"{}\";",
                    escape(&germ(&self.vertical[c.vertical], c.vertical_end)),
                    escape(&germ(&self.horizontal[c.horizontal], c.horizontal_end))
                )
                .unwrap();
            }
        }
        s.push_str("}\n");
        s
    }
}

impl Presentation {
    /// One relation per line, e.g. `a0 * x1 * a2^-1 * x1^-1`.
    pub fn to_text(&self) -> String {
        let mut s = format!("generators: {}\n", self.generators.join(", "));
        for rel in &self.relations {
            let parts: Vec<String> = rel
                .iter()
                .map(|&(g, e)| {
                    if e < 0 {
                        format!("{}^-1", self.generators[g])
                    } else {
                        self.generators[g].clone()
                    }
                })
                .collect();
            s.push_str(&parts.join(" * "));
            s.push('\n');
        }
        for note in &self.notes {
            writeln!(s, "# {note}").unwrap();
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

fn generator_name(label: &str, prefix: &str) -> String {
    let body: String = label
        .chars()
        .filter_map(|c| match c {
            '(' | ')' | ' ' => None,
            ',' => Some('_'),
            other => Some(other),
        })
        .collect();
    format!("{prefix}{body}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_one_letter() -> MealyAutomaton {
        MealyAutomaton::identity(vec!["0".into()]).unwrap()
    }

    #[test]
    fn single_square() {
        let c = SquareComplex::from_automaton(&identity_one_letter());
        assert_eq!(c.squares().len(), 1);
        assert_eq!(c.cell_census(), (1, 4, 1));
        let (complete, status) = c.is_complete();
        assert!(complete);
        assert_eq!(status.total(), 4);
    }

    #[test]
    fn duplicated_square_is_rejected() {
        let c = SquareComplex::from_automaton(&identity_one_letter());
        let mut squares = c.squares().to_vec();
        squares.push(squares[0]);
        let dup = SquareComplex::new(c.vertical().to_vec(), c.horizontal().to_vec(), squares).unwrap();
        match dup.to_automaton() {
            Err(ComplexError::NotUniquelySquared { count, .. }) => assert_eq!(count, 2),
            other => panic!("{other:?}"),
        }
        let (complete, status) = dup.is_complete();
        assert!(!complete);
        assert_eq!(status.total(), 8);
    }

    #[test]
    fn missing_square_is_rejected() {
        let c = SquareComplex::new(vec!["e".into()], vec!["0".into()], vec![]).unwrap();
        assert!(matches!(
            c.to_automaton(),
            Err(ComplexError::NotUniquelySquared { count: 0, .. })
        ));
        assert!(SquareComplex::new(vec!["e".into()], vec!["0".into()], vec![Square::from([0, 1, 0, 0])]).is_err());
    }

    #[test]
    fn generator_names() {
        assert_eq!(generator_name("a(1,0)", ""), "a1_0");
        assert_eq!(generator_name("2", "x"), "x2");
    }

    #[test]
    fn json_round_trip() {
        let c = SquareComplex::from_automaton(&identity_one_letter());
        let back = SquareComplex::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }
}
