//! Exact equality of automaton permutations given as words.
//!
//! A word defines the identity iff its root permutation is trivial and so are
//! all of its sections. Sections of a length-`m` word are again words of
//! length at most `m`, so exploring section words up to free reduction
//! visits a finite set. Identity is preserved under conjugation, so each
//! section word is replaced by a canonical cyclic rotation of its cyclic
//! reduction before it is looked up in the visited set.
//!
//! Before the search, the word is run on a fixed family of pseudo-random
//! probe words. A moved probe is a concrete witness of non-identity; this
//! settles cases such as high powers of a generator, which act trivially on
//! many levels and would otherwise make the search wide and deep.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::word::free_reduce;
use super::{GroupWord, MealyAutomaton, MealyError};
use crate::abelian::FiniteAbelianGroup;

pub const DEFAULT_STATE_CAP: usize = 1_000_000;

pub fn is_identity(w: &GroupWord<'_>) -> Result<bool, MealyError> {
    is_identity_with_cap(w, DEFAULT_STATE_CAP)
}

pub fn is_identity_with_cap(w: &GroupWord<'_>, cap: usize) -> Result<bool, MealyError> {
    identity_search(w.automaton(), &w.codes(), cap)
}

/// Whether two words define the same transformation of words.
pub fn words_equal(u: &GroupWord<'_>, v: &GroupWord<'_>) -> Result<bool, MealyError> {
    words_equal_with_cap(u, v, DEFAULT_STATE_CAP)
}

pub fn words_equal_with_cap(
    u: &GroupWord<'_>,
    v: &GroupWord<'_>,
    cap: usize,
) -> Result<bool, MealyError> {
    u.same_automaton(v)?;
    let mut codes = u.codes();
    codes.extend(v.codes().iter().rev().map(|c| c ^ 1));
    identity_search(u.automaton(), &codes, cap)
}

fn identity_search(a: &MealyAutomaton, codes: &[u32], cap: usize) -> Result<bool, MealyError> {
    let start = conjugacy_key(free_reduce(codes));
    if start.is_empty() {
        return Ok(true);
    }
    if moves_a_probe(a, &start) {
        return Ok(false);
    }
    let n = a.alphabet_size();
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    let mut queue = VecDeque::new();
    visited.insert(start.clone());
    queue.push_back(start);
    let mut sections: Vec<Vec<u32>> = Vec::with_capacity(n);
    while let Some(u) = queue.pop_front() {
        sections.clear();
        for x in 0..n {
            let (y, s) = section_codes(a, &u, x);
            if y != x {
                return Ok(false);
            }
            sections.push(s);
        }
        for s in sections.drain(..) {
            let key = conjugacy_key(free_reduce(&s));
            if key.is_empty() || visited.contains(&key) {
                continue;
            }
            if visited.len() >= cap {
                return Err(MealyError::CapExceeded { cap });
            }
            visited.insert(key.clone());
            queue.push_back(key);
        }
    }
    Ok(true)
}

const PROBE_SEED: u64 = 0x5eed_1a3b;
const PROBE_LENGTHS: [usize; 5] = [4, 8, 16, 32, 64];
const PROBES_PER_LENGTH: usize = 8;

fn moves_a_probe(a: &MealyAutomaton, codes: &[u32]) -> bool {
    let n = a.alphabet_size();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for &len in &PROBE_LENGTHS {
        for _ in 0..PROBES_PER_LENGTH {
            let mut cur = codes.to_vec();
            for _ in 0..len {
                let x = rng.gen_range(0..n);
                let (y, s) = section_codes(a, &cur, x);
                if y != x {
                    return true;
                }
                cur = s;
            }
        }
    }
    false
}

/// Runs the letter `x` through a coded word; returns the image letter and
/// the section word.
#[inline]
pub(crate) fn section_codes(a: &MealyAutomaton, codes: &[u32], x: usize) -> (usize, Vec<u32>) {
    let mut x = x;
    let mut out = Vec::with_capacity(codes.len());
    for &c in codes {
        let q = (c >> 1) as usize;
        if c & 1 == 1 {
            let y = a.preimage(q, x);
            out.push((a.next_state(q, y) as u32) << 1 | 1);
            x = y;
        } else {
            out.push((a.next_state(q, x) as u32) << 1);
            x = a.output_letter(q, x);
        }
    }
    (x, out)
}

/// Cyclic reduction followed by the lexicographically least rotation.
fn conjugacy_key(mut w: Vec<u32>) -> Vec<u32> {
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1] ^ 1 {
        lo += 1;
        hi -= 1;
    }
    w.truncate(hi);
    w.drain(..lo);
    let m = w.len();
    if m < 2 {
        return w;
    }
    let mut best = 0;
    for r in 1..m {
        for k in 0..m {
            let a = w[(r + k) % m];
            let b = w[(best + k) % m];
            if a != b {
                if a < b {
                    best = r;
                }
                break;
            }
        }
    }
    w.rotate_left(best);
    w
}

/// If `w` lies in the group of coordinatewise translations, i.e. its wreath
/// recursion has the form `(h, ..., h) σ_k` with `h` again of that form,
/// returns `k`. `group` supplies the addition on the alphabet (letter
/// indices are element indices).
///
/// Such a `w` is determined by the roots along its sections at `0, 00, ...`.
/// That chain of section words is eventually periodic, so it spells a
/// finite automaton translating the `l`-th letter by the `l`-th root; `w`
/// is a constant translation iff it equals that automaton's initial state.
pub fn is_constant_translation(
    w: &GroupWord<'_>,
    group: &FiniteAbelianGroup,
) -> Result<Option<usize>, MealyError> {
    is_constant_translation_with_cap(w, group, DEFAULT_STATE_CAP)
}

pub fn is_constant_translation_with_cap(
    w: &GroupWord<'_>,
    group: &FiniteAbelianGroup,
    cap: usize,
) -> Result<Option<usize>, MealyError> {
    let a = w.automaton();
    let n = a.alphabet_size();
    if group.order() != n {
        return Err(MealyError::NotGroupAlphabet {
            alphabet: n,
            order: group.order(),
        });
    }
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut shifts = Vec::new();
    let mut cur = free_reduce(&w.codes());
    let back = loop {
        if let Some(&at) = seen.get(&cur) {
            break at;
        }
        if seen.len() >= cap {
            return Err(MealyError::CapExceeded { cap });
        }
        let k = section_codes(a, &cur, 0).0;
        if (1..n).any(|x| section_codes(a, &cur, x).0 != group.add_idx(x, k)) {
            return Ok(None);
        }
        seen.insert(cur.clone(), shifts.len());
        shifts.push(k);
        cur = free_reduce(&section_codes(a, &cur, 0).1);
    };
    let joined = with_translation_chain(a, group, &shifts, back);
    let lhs = GroupWord::from_codes(&joined, &w.codes());
    let rhs = GroupWord::from_codes(&joined, &[(a.num_states() as u32) << 1]);
    Ok(words_equal_with_cap(&lhs, &rhs, cap)?.then_some(shifts[0]))
}

/// `a` extended by states `t_0, ..., t_{L-1}` where `t_l` adds `shifts[l]`
/// to the letter and moves to `t_{l+1}`, and `t_{L-1}` moves to `t_back`.
fn with_translation_chain(
    a: &MealyAutomaton,
    group: &FiniteAbelianGroup,
    shifts: &[usize],
    back: usize,
) -> MealyAutomaton {
    let base = a.num_states();
    let n = a.alphabet_size();
    let mut states = a.state_labels().to_vec();
    let mut transition = a.transition_table().to_vec();
    let mut output = a.output_table().to_vec();
    for (l, &k) in shifts.iter().enumerate() {
        let mut label = format!("#t{l}");
        while states.contains(&label) {
            label.insert(0, '#');
        }
        states.push(label);
        let next = if l + 1 < shifts.len() { l + 1 } else { back };
        transition.push(vec![base + next; n]);
        output.push((0..n).map(|x| group.add_idx(x, k)).collect());
    }
    MealyAutomaton::new(states, a.letter_labels().to_vec(), transition, output)
        .expect("extension of a valid automaton")
}
