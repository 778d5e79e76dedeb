use std::collections::HashMap;

use super::MealyAutomaton;

/// Moore-style partition refinement. Two states end up in the same block iff
/// they have equal output rows and their successors on every letter lie in
/// equal blocks, i.e. iff they define the same transformation.
pub(crate) fn minimize(a: &MealyAutomaton) -> (MealyAutomaton, Vec<usize>) {
    let nq = a.num_states();
    let nx = a.alphabet_size();
    let mut block = numbering((0..nq).map(|q| a.output_table()[q].clone()));
    loop {
        let refined = numbering((0..nq).map(|q| {
            let mut sig = Vec::with_capacity(nx + 1);
            sig.push(block[q]);
            sig.extend((0..nx).map(|x| block[a.next_state(q, x)]));
            sig
        }));
        let done = refined.iter().max() == block.iter().max();
        block = refined;
        if done {
            break;
        }
    }
    let nblocks = block.iter().max().map_or(0, |m| m + 1);
    let mut reps = vec![usize::MAX; nblocks];
    for q in (0..nq).rev() {
        reps[block[q]] = q;
    }
    let states = reps.iter().map(|&q| a.state_labels()[q].clone()).collect();
    let transition = reps
        .iter()
        .map(|&q| (0..nx).map(|x| block[a.next_state(q, x)]).collect())
        .collect();
    let output = reps.iter().map(|&q| a.output_table()[q].clone()).collect();
    let quotient = MealyAutomaton::new(states, a.letter_labels().to_vec(), transition, output)
        .expect("quotient of a valid automaton is valid");
    (quotient, block)
}

// Dense block ids in order of first appearance, so results are deterministic.
fn numbering<K: std::hash::Hash + Eq>(keys: impl Iterator<Item = K>) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    keys.map(|k| {
        let next = ids.len();
        *ids.entry(k).or_insert(next)
    })
    .collect()
}
