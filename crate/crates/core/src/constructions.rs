//! The automata `A_X` over finite abelian groups, their complexes, the
//! distinguished elements of their groups, and the variant over an arbitrary
//! finite group given by its multiplication table.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::FiniteAbelianGroup;
use crate::complex::SquareComplex;
use crate::mealy::{Generator, GroupWord, Isomorphism, MealyAutomaton};

/// State label of `a_i`.
pub fn state_label(g: &FiniteAbelianGroup, i: usize) -> String {
    format!("a{}", g.label(i))
}

/// `λ(a_i, j) = a_{i-j}`, `μ(a_i, j) = i + j`.
pub fn build_automaton_abelian(g: &FiniteAbelianGroup) -> MealyAutomaton {
    let n = g.order();
    let states = (0..n).map(|i| state_label(g, i)).collect();
    let alphabet = (0..n).map(|i| g.label(i)).collect();
    let transition = (0..n).map(|i| (0..n).map(|j| g.sub_idx(i, j)).collect()).collect();
    let output = (0..n).map(|i| (0..n).map(|j| g.add_idx(i, j)).collect()).collect();
    MealyAutomaton::new(states, alphabet, transition, output).expect("well-formed tables")
}

/// Squares `(a_i, j, a_{i-j}, i+j)`.
pub fn build_complex_abelian(g: &FiniteAbelianGroup) -> SquareComplex {
    SquareComplex::from_automaton(&build_automaton_abelian(g))
}

/// `A_X` together with its group, with the distinguished words of its
/// automaton group.
#[derive(Debug, Clone)]
pub struct AbelianAutomaton {
    group: FiniteAbelianGroup,
    automaton: MealyAutomaton,
}

impl AbelianAutomaton {
    pub fn new(group: FiniteAbelianGroup) -> Self {
        let automaton = build_automaton_abelian(&group);
        AbelianAutomaton { group, automaton }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn automaton(&self) -> &MealyAutomaton {
        &self.automaton
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn word(&self, letters: Vec<Generator>) -> GroupWord<'_> {
        GroupWord::new(&self.automaton, letters).expect("A_X is permutational")
    }

    pub fn identity(&self) -> GroupWord<'_> {
        self.word(Vec::new())
    }

    /// The generator `a_i`.
    pub fn a(&self, i: usize) -> GroupWord<'_> {
        self.word(vec![Generator::pos(i)])
    }

    pub fn a_inv(&self, i: usize) -> GroupWord<'_> {
        self.word(vec![Generator::neg(i)])
    }

    /// `a_0 a_{-i}^{-1}`, the element with root permutation `x -> x + i`
    /// obtained from the zero state.
    pub fn rigid_translation(&self, i: usize) -> GroupWord<'_> {
        self.word(vec![Generator::pos(0), Generator::neg(self.group.neg_idx(i))])
    }

    /// `c_i = a_0^{-1} a_i`, the translation by `i` on every letter.
    pub fn lamp_generator_c(&self, i: usize) -> GroupWord<'_> {
        self.word(vec![Generator::neg(0), Generator::pos(i)])
    }

    /// `b_i = a_i (a_0 a_{-i}^{-1})^{-1} = a_i a_{-i} a_0^{-1}`; its root
    /// permutation is trivial.
    pub fn first_level_stabilizer_b(&self, i: usize) -> GroupWord<'_> {
        &self.a(i) * &self.rigid_translation(i).inverse()
    }

    /// Checks that `φ(a_i) = -i`, `ψ(i) = a_i` is an isomorphism onto the
    /// dual, straight from the dual's tables.
    pub fn check_self_duality(&self) -> Result<Isomorphism, SelfDualityFailure> {
        check_self_duality(&self.group, &self.automaton)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("self-duality fails at (i, j) = ({i}, {j})")]
pub struct SelfDualityFailure {
    pub i: String,
    pub j: String,
}

pub fn check_self_duality(
    g: &FiniteAbelianGroup,
    a: &MealyAutomaton,
) -> Result<Isomorphism, SelfDualityFailure> {
    let n = g.order();
    let dual = a.dual();
    let phi: Vec<usize> = (0..n).map(|i| g.neg_idx(i)).collect();
    let psi: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            let lambda_ok = dual.next_state(phi[i], psi[j]) == phi[a.next_state(i, j)];
            let mu_ok = dual.output_letter(phi[i], psi[j]) == psi[a.output_letter(i, j)];
            if !(lambda_ok && mu_ok) {
                return Err(SelfDualityFailure {
                    i: g.label(i),
                    j: g.label(j),
                });
            }
        }
    }
    Ok(Isomorphism { phi, psi })
}

/// `A_X` extended by the states `c_i` (self-loops translating by `i`) and
/// `t_i` (translate the first letter by `i`, then act trivially), so that
/// words in the `a_i` can be compared against these transformations.
/// States are ordered `a_*`, then `c_*`, then `t_*`.
pub fn extended_automaton(g: &FiniteAbelianGroup) -> MealyAutomaton {
    let n = g.order();
    let base = build_automaton_abelian(g);
    let mut states: Vec<String> = base.state_labels().to_vec();
    states.extend((0..n).map(|i| format!("c{}", g.label(i))));
    states.extend((0..n).map(|i| format!("t{}", g.label(i))));
    let mut transition: Vec<Vec<usize>> = base.transition_table().to_vec();
    let mut output: Vec<Vec<usize>> = base.output_table().to_vec();
    for i in 0..n {
        transition.push(vec![n + i; n]);
        output.push((0..n).map(|x| g.add_idx(x, i)).collect());
    }
    for i in 0..n {
        // t_0 is the identity and every t_i falls into it.
        transition.push(vec![2 * n; n]);
        output.push((0..n).map(|x| g.add_idx(x, i)).collect());
    }
    MealyAutomaton::new(states, base.letter_labels().to_vec(), transition, output)
        .expect("well-formed tables")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CayleyError {
    #[error("table must be a non-empty square, got {0}")]
    Shape(String),
    #[error("row or column {0} is not a permutation")]
    NotLatin(usize),
    #[error("no two-sided identity")]
    NoIdentity,
    #[error("not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("group order must be at least 2")]
    TooSmall,
    #[error("json: {0}")]
    Json(String),
}

/// A finite group given by its multiplication table over indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CayleyGroup {
    table: Vec<Vec<usize>>,
    labels: Vec<String>,
    identity: usize,
    inverse: Vec<usize>,
}

/// `{"table": [[...]], "labels": [...]}`; labels are optional.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CayleyJson {
    pub table: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl CayleyGroup {
    pub fn new(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self, CayleyError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(CayleyError::Shape(format!("{n} rows")));
        }
        if n < 2 {
            return Err(CayleyError::TooSmall);
        }
        for i in 0..n {
            let row_ok = is_perm((0..n).map(|j| table[i][j]), n);
            let col_ok = is_perm((0..n).map(|j| table[j][i]), n);
            if !row_ok || !col_ok {
                return Err(CayleyError::NotLatin(i));
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(CayleyError::NoIdentity)?;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(CayleyError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        let inverse = (0..n)
            .map(|a| (0..n).find(|&b| table[a][b] == identity).expect("Latin square"))
            .collect();
        let labels = match labels {
            Some(l) if l.len() == n => l,
            Some(l) => return Err(CayleyError::Shape(format!("{} labels for order {n}", l.len()))),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(CayleyGroup {
            table,
            labels,
            identity,
            inverse,
        })
    }

    pub fn from_json(s: &str) -> Result<Self, CayleyError> {
        let j: CayleyJson = serde_json::from_str(s).map_err(|e| CayleyError::Json(e.to_string()))?;
        Self::new(j.table, j.labels)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CayleyJson {
            table: self.table.clone(),
            labels: Some(self.labels.clone()),
        })
        .expect("plain data serializes")
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// Multiplication table of a finite abelian group, in its element order.
    pub fn from_abelian(g: &FiniteAbelianGroup) -> Self {
        let n = g.order();
        let table = (0..n).map(|i| (0..n).map(|j| g.add_idx(i, j)).collect()).collect();
        CayleyGroup::new(table, Some((0..n).map(|i| g.label(i)).collect())).expect("abelian group table")
    }

    /// The symmetric group on `k` points; elements are permutations listed
    /// lexicographically by one-line notation, composed left to right.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| index(&p.iter().map(|&x| q[x]).collect()))
                    .collect()
            })
            .collect();
        let labels = perms
            .iter()
            .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<String>())
            .collect();
        CayleyGroup::new(table, Some(labels)).expect("symmetric group table")
    }
}

fn is_perm(it: impl Iterator<Item = usize>, n: usize) -> bool {
    let mut seen = vec![false; n];
    for x in it {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return false;
        }
    }
    true
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q: Vec<usize> = p.iter().map(|&x| x + 1).collect();
            q.insert(pos, 0);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// `λ(q_i, j) = q_{j^-1 i}`, `μ(q_i, j) = i j`.
pub fn build_automaton_group(y: &CayleyGroup) -> MealyAutomaton {
    let n = y.order();
    let states = y.labels().iter().map(|l| format!("q{l}")).collect();
    let transition = (0..n)
        .map(|i| (0..n).map(|j| y.mul(y.inv(j), i)).collect())
        .collect();
    let output = (0..n).map(|i| (0..n).map(|j| y.mul(i, j)).collect()).collect();
    MealyAutomaton::new(states, y.labels().to_vec(), transition, output).expect("well-formed tables")
}

/// Reversibility data of the automaton over a table-given group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyReport {
    pub order: usize,
    pub abelian: bool,
    pub permutational: bool,
    pub reversible: bool,
    pub bireversible: bool,
    pub complete: bool,
    /// Whether `bireversible == (order is odd)`.
    pub matches_odd_order_rule: bool,
    /// Whether `bireversible == (order is even)`.
    pub matches_even_order_rule: bool,
}

pub fn cayley_report(y: &CayleyGroup) -> CayleyReport {
    let a = build_automaton_group(y);
    let bireversible = a.is_bireversible();
    let odd = y.order() % 2 == 1;
    CayleyReport {
        order: y.order(),
        abelian: y.is_abelian(),
        permutational: a.is_permutational(),
        reversible: a.is_reversible(),
        bireversible,
        complete: SquareComplex::from_automaton(&a).is_complete().0,
        matches_odd_order_rule: bireversible == odd,
        matches_even_order_rule: bireversible == !odd,
    }
}
