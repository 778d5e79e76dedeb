//! Finite abelian groups given as direct sums of cyclic groups.
//!
//! A group is a list of moduli `n_1 <= ... <= n_k`; an element is the vector
//! of residues. Elements are enumerated lexicographically (first coordinate
//! most significant), so the zero element always has index 0 and, for a
//! cyclic group, the element `i` has index `i`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty group spec")]
    Empty,
    #[error("modulus must be >= 1, got {0}")]
    BadModulus(i64),
    #[error("order < 2 (group of order {0})")]
    OrderTooSmall(u64),
    #[error("element has {found} residues but the group has {expected} factors")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse group spec {0:?}: expected Z<n>[xZ<m>...]")]
    Parse(String),
    #[error("cannot parse element {0:?}")]
    ParseElement(String),
}

/// A finite abelian group `Z_{n_1} + ... + Z_{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct FiniteAbelianGroup {
    moduli: Vec<u32>,
    order: usize,
}

/// An element of a [`FiniteAbelianGroup`], stored as reduced residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(Vec<u32>);

impl Element {
    pub fn residues(&self) -> &[u32] {
        &self.0
    }
}

impl FiniteAbelianGroup {
    /// Builds the group from a list of moduli. The moduli are sorted.
    pub fn new(spec: &[i64]) -> Result<Self, GroupError> {
        if spec.is_empty() {
            return Err(GroupError::Empty);
        }
        let mut moduli = Vec::with_capacity(spec.len());
        for &m in spec {
            if m < 1 || m > u32::MAX as i64 {
                return Err(GroupError::BadModulus(m));
            }
            moduli.push(m as u32);
        }
        let order: u64 = moduli.iter().map(|&m| m as u64).product();
        if order < 2 {
            return Err(GroupError::OrderTooSmall(order));
        }
        moduli.sort_unstable();
        Ok(FiniteAbelianGroup {
            moduli,
            order: order as usize,
        })
    }

    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        Self::new(&[n as i64])
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.moduli.len()])
    }

    /// Reduces arbitrary integers into an element.
    pub fn element(&self, residues: &[i64]) -> Result<Element, GroupError> {
        self.check_len(residues.len())?;
        Ok(Element(
            residues
                .iter()
                .zip(&self.moduli)
                .map(|(&r, &m)| r.rem_euclid(m as i64) as u32)
                .collect(),
        ))
    }

    fn check_len(&self, len: usize) -> Result<(), GroupError> {
        if len != self.moduli.len() {
            return Err(GroupError::DimensionMismatch {
                expected: self.moduli.len(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.check_len(a.0.len())?;
        self.check_len(b.0.len())?;
        Ok(Element(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((&x, &y), &m)| ((x as u64 + y as u64) % m as u64) as u32)
                .collect(),
        ))
    }

    pub fn negate(&self, a: &Element) -> Result<Element, GroupError> {
        self.check_len(a.0.len())?;
        Ok(Element(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| (m - x % m) % m)
                .collect(),
        ))
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        self.add(a, &self.negate(b)?)
    }

    /// `k * a` for any integer `k`.
    pub fn scale(&self, k: i64, a: &Element) -> Result<Element, GroupError> {
        self.check_len(a.0.len())?;
        Ok(Element(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| ((k.rem_euclid(m as i64) as u64 * x as u64) % m as u64) as u32)
                .collect(),
        ))
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> u64 {
        self.moduli
            .iter()
            .fold(1u64, |acc, &m| acc / gcd(acc, m as u64) * m as u64)
    }

    /// Whether `x -> 2x` is onto. Decided by brute force over the group.
    pub fn all_elements_have_square_roots(&self) -> bool {
        let mut hit = vec![false; self.order];
        for i in 0..self.order {
            hit[self.add_idx(i, i)] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn enumerate_elements(&self) -> Vec<Element> {
        (0..self.order).map(|i| self.element_at(i)).collect()
    }

    /// Position of an element in the enumeration order.
    pub fn index_of(&self, a: &Element) -> Result<usize, GroupError> {
        self.check_len(a.0.len())?;
        Ok(a.0
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&x, &m)| acc * m as usize + (x % m) as usize))
    }

    pub fn element_at(&self, mut index: usize) -> Element {
        let mut residues = vec![0u32; self.moduli.len()];
        for (slot, &m) in residues.iter_mut().zip(&self.moduli).rev() {
            *slot = (index % m as usize) as u32;
            index /= m as usize;
        }
        Element(residues)
    }

    /// Addition on enumeration indices.
    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        self.combine_idx(a, b, |x, y, m| (x + y) % m)
    }

    pub fn sub_idx(&self, a: usize, b: usize) -> usize {
        self.combine_idx(a, b, |x, y, m| (x + m - y) % m)
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.sub_idx(0, a)
    }

    fn combine_idx(&self, mut a: usize, mut b: usize, f: impl Fn(usize, usize, usize) -> usize) -> usize {
        let mut out = 0usize;
        let mut place = 1usize;
        for &m in self.moduli.iter().rev() {
            let m = m as usize;
            out += f(a % m, b % m, m) * place;
            a /= m;
            b /= m;
            place *= m;
        }
        out
    }

    /// Display label of the element with the given index: `i` for cyclic
    /// groups, `(i,j,...)` otherwise.
    pub fn label(&self, index: usize) -> String {
        self.element_at(index).to_string()
    }

    /// Parses a label produced by [`FiniteAbelianGroup::label`].
    pub fn parse_element(&self, s: &str) -> Result<Element, GroupError> {
        let bad = || GroupError::ParseElement(s.to_string());
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()?;
        if parts.len() != self.rank() {
            return Err(bad());
        }
        for (&p, &m) in parts.iter().zip(&self.moduli) {
            if p < 0 || p >= m as i64 {
                return Err(bad());
            }
        }
        self.element(&parts)
    }

    /// CLI spec string, e.g. `Z2xZ4`.
    pub fn spec_string(&self) -> String {
        self.moduli
            .iter()
            .map(|m| format!("Z{m}"))
            .collect::<Vec<_>>()
            .join("x")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.len() == 1 {
            write!(f, "{}", self.0[0])
        } else {
            let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec_string())
    }
}

/// Parses `Z<n>[xZ<m>...]`; moduli are taken in written order and then
/// sorted by [`FiniteAbelianGroup::new`].
impl FromStr for FiniteAbelianGroup {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GroupError::Parse(s.to_string());
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        let mut moduli = Vec::new();
        for part in s.split(['x', 'X']) {
            let digits = part
                .trim()
                .strip_prefix('Z')
                .or_else(|| part.trim().strip_prefix('z'))
                .ok_or_else(bad)?;
            moduli.push(digits.parse::<i64>().map_err(|_| bad())?);
        }
        FiniteAbelianGroup::new(&moduli)
    }
}

impl TryFrom<Vec<i64>> for FiniteAbelianGroup {
    type Error = GroupError;

    fn try_from(v: Vec<i64>) -> Result<Self, Self::Error> {
        FiniteAbelianGroup::new(&v)
    }
}

impl From<FiniteAbelianGroup> for Vec<i64> {
    fn from(g: FiniteAbelianGroup) -> Self {
        g.moduli.iter().map(|&m| m as i64).collect()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Every way of writing a group of order `lo..=hi` as a direct sum of
/// nontrivial cyclic factors (multisets of moduli >= 2), ordered by order
/// and then by moduli. Distinct presentations of isomorphic groups, such as
/// `Z6` and `Z2xZ3`, are both listed.
pub fn cyclic_decompositions(lo: usize, hi: usize) -> Vec<FiniteAbelianGroup> {
    let mut acc = Vec::new();
    for n in lo.max(2)..=hi {
        let mut lists = Vec::new();
        factor_multisets(n as u64, 2, &mut Vec::new(), &mut lists);
        lists.sort();
        acc.extend(lists);
    }
    acc.into_iter()
        .map(|m| FiniteAbelianGroup::new(&m).expect("order >= 2"))
        .collect()
}

fn factor_multisets(n: u64, min: u64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if n == 1 {
        out.push(cur.clone());
        return;
    }
    for d in min..=n {
        if n.is_multiple_of(d) {
            cur.push(d as i64);
            factor_multisets(n / d, d, cur, out);
            cur.pop();
        }
    }
}
