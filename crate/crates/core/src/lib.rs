//! Automata over finite abelian groups whose automaton groups are lamplighter
//! groups, with the square complexes they determine.

pub mod abelian;
pub mod complex;
pub mod constructions;
pub mod lamplighter;
pub mod mealy;
pub mod verify;

pub use abelian::{Element, FiniteAbelianGroup, GroupError};
pub use complex::SquareComplex;
pub use constructions::{AbelianAutomaton, CayleyGroup};

pub use lamplighter::LamplighterElement;
pub use mealy::{GroupWord, MealyAutomaton, MealyError};
