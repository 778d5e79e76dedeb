//! Backtracking search for automaton isomorphisms.
//!
//! Once `φ(q)` and `ψ(x)` are fixed, the equations force `φ(λ(q,x))` and
//! `ψ(μ(q,x))`, so each branch choice is followed by propagation to a
//! fixpoint. Branching happens on the lowest unassigned letter first, then
//! on the lowest unassigned state, with candidates tried in ascending order.

use super::MealyAutomaton;

/// Bijections `phi: Q_A -> Q_B` and `psi: Σ_A -> Σ_B`, as index maps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

const NONE: usize = usize::MAX;

#[derive(Clone)]
struct Partial {
    phi: Vec<usize>,
    phi_inv: Vec<usize>,
    psi: Vec<usize>,
    psi_inv: Vec<usize>,
}

impl Partial {
    fn set_phi(&mut self, q: usize, t: usize) -> bool {
        match (self.phi[q], self.phi_inv[t]) {
            (NONE, NONE) => {
                self.phi[q] = t;
                self.phi_inv[t] = q;
                true
            }
            (cur, _) => cur == t,
        }
    }

    fn set_psi(&mut self, x: usize, t: usize) -> bool {
        match (self.psi[x], self.psi_inv[t]) {
            (NONE, NONE) => {
                self.psi[x] = t;
                self.psi_inv[t] = x;
                true
            }
            (cur, _) => cur == t,
        }
    }
}

pub(crate) fn find_isomorphism(a: &MealyAutomaton, b: &MealyAutomaton) -> Option<Isomorphism> {
    let (nq, nx) = (a.num_states(), a.alphabet_size());
    if nq != b.num_states() || nx != b.alphabet_size() {
        return None;
    }
    let start = Partial {
        phi: vec![NONE; nq],
        phi_inv: vec![NONE; nq],
        psi: vec![NONE; nx],
        psi_inv: vec![NONE; nx],
    };
    search(a, b, start)
}

fn search(a: &MealyAutomaton, b: &MealyAutomaton, mut p: Partial) -> Option<Isomorphism> {
    if !propagate(a, b, &mut p) {
        return None;
    }
    if let Some(x) = p.psi.iter().position(|&t| t == NONE) {
        for t in (0..b.alphabet_size()).filter(|&t| p.psi_inv[t] == NONE) {
            let mut next = p.clone();
            next.set_psi(x, t);
            if let Some(found) = search(a, b, next) {
                return Some(found);
            }
        }
        return None;
    }
    if let Some(q) = p.phi.iter().position(|&t| t == NONE) {
        for t in (0..b.num_states()).filter(|&t| p.phi_inv[t] == NONE) {
            let mut next = p.clone();
            next.set_phi(q, t);
            if let Some(found) = search(a, b, next) {
                return Some(found);
            }
        }
        return None;
    }
    Some(Isomorphism { phi: p.phi, psi: p.psi })
}

fn propagate(a: &MealyAutomaton, b: &MealyAutomaton, p: &mut Partial) -> bool {
    loop {
        let mut changed = false;
        for q in 0..a.num_states() {
            let fq = p.phi[q];
            if fq == NONE {
                continue;
            }
            for x in 0..a.alphabet_size() {
                let fx = p.psi[x];
                if fx == NONE {
                    continue;
                }
                let s = a.next_state(q, x);
                let y = a.output_letter(q, x);
                let (ts, ty) = (b.next_state(fq, fx), b.output_letter(fq, fx));
                let (was_s, was_y) = (p.phi[s], p.psi[y]);
                if !p.set_phi(s, ts) || !p.set_psi(y, ty) {
                    return false;
                }
                changed |= was_s == NONE || was_y == NONE;
            }
        }
        if !changed {
            return true;
        }
    }
}

pub(crate) fn verify(a: &MealyAutomaton, b: &MealyAutomaton, phi: &[usize], psi: &[usize]) -> bool {
    let (nq, nx) = (a.num_states(), a.alphabet_size());
    if nq != b.num_states() || nx != b.alphabet_size() || phi.len() != nq || psi.len() != nx {
        return false;
    }
    if !is_bijection(phi, nq) || !is_bijection(psi, nx) {
        return false;
    }
    (0..nq).all(|q| {
        (0..nx).all(|x| {
            b.next_state(phi[q], psi[x]) == phi[a.next_state(q, x)]
                && b.output_letter(phi[q], psi[x]) == psi[a.output_letter(q, x)]
        })
    })
}

fn is_bijection(map: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    map.iter().all(|&t| t < n && !std::mem::replace(&mut seen[t], true))
}
