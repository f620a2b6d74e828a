//! Multiplicity patterns of coefficient multi-indices.
//!
//! A coefficient `a_{i_1..i_L}` depends on its index tuple only through the
//! multiset of value counts: the slots are exchangeable Gaussians. A
//! [`MultiplicityPattern`] is that multiset, stored as a non-increasing list
//! of positive parts.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{factorial, falling_factorial};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityPattern {
    parts: Vec<u32>,
}

impl PartialOrd for MultiplicityPattern {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Order used for enumeration: by total order, then reverse lexicographic
/// on parts, so `(5) < (4,1) < (3,2) < (2,2,1)`.
impl Ord for MultiplicityPattern {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl MultiplicityPattern {
    /// Sorts the parts; rejects an empty list or a zero part.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::domain("a pattern needs at least one part"));
        }
        if parts.contains(&0) {
            return Err(Error::domain("pattern parts must be >= 1"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { parts })
    }

    /// Builds from parts that are known to be positive; sorts them.
    pub(crate) fn from_parts_unchecked(mut parts: Vec<u32>) -> Self {
        debug_assert!(!parts.is_empty() && !parts.contains(&0));
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn part_count(&self) -> usize {
        self.parts.len()
    }

    /// Length of the index tuples in this class.
    pub fn order(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn odd_part_count(&self) -> usize {
        self.parts.iter().filter(|&&p| p % 2 == 1).count()
    }

    /// `k` with `order = 2k + 1`, for odd orders.
    pub fn half_order(&self) -> Option<u32> {
        let l = self.order();
        (l % 2 == 1).then_some((l - 1) / 2)
    }

    /// Half-multiplicities `(d_odd, [d_even...])` of a non-vanishing pattern:
    /// the odd part is `2 d_odd + 1`, each even part is `2 d_j`.
    pub fn half_multiplicities(&self) -> Option<(u32, Vec<u32>)> {
        if is_vanishing(self) {
            return None;
        }
        let odd = *self.parts.iter().find(|&&p| p % 2 == 1)?;
        let evens = self
            .parts
            .iter()
            .filter(|&&p| p % 2 == 0)
            .map(|&p| p / 2)
            .collect();
        Some(((odd - 1) / 2, evens))
    }

    pub fn is_vanishing(&self) -> bool {
        is_vanishing(self)
    }
}

impl fmt::Display for MultiplicityPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Parses the text form `part ("," part)*`; parts must already be
/// non-increasing.
impl FromStr for MultiplicityPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let bytes = tok.as_bytes();
            if bytes.is_empty() || !bytes.iter().all(u8::is_ascii_digit) {
                return Err(Error::Parse(format!("bad pattern part {tok:?} in {s:?}")));
            }
            let part: u32 = tok
                .parse()
                .map_err(|_| Error::Parse(format!("bad pattern part {tok:?} in {s:?}")))?;
            if part == 0 {
                return Err(Error::Parse(format!("zero part in {s:?}")));
            }
            parts.push(part);
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!(
                "parts of {s:?} are not non-increasing"
            )));
        }
        Ok(Self { parts })
    }
}

/// Pattern of an index tuple with entries in `1..=n`.
pub fn canonicalize(index_tuple: &[usize], n: usize) -> Result<MultiplicityPattern> {
    if index_tuple.is_empty() {
        return Err(Error::domain("empty index tuple"));
    }
    let mut counts: BTreeMap<usize, u32> = BTreeMap::new();
    for &i in index_tuple {
        if i == 0 || i > n {
            return Err(Error::domain(format!("index {i} outside 1..={n}")));
        }
        *counts.entry(i).or_insert(0) += 1;
    }
    Ok(MultiplicityPattern::from_parts_unchecked(
        counts.into_values().collect(),
    ))
}

/// True when the coefficient of this class is identically zero: even order,
/// or a number of odd parts other than one.
pub fn is_vanishing(p: &MultiplicityPattern) -> bool {
    p.order().is_multiple_of(2) || p.odd_part_count() != 1
}

/// Every non-vanishing pattern of order `2k+1` with at most `n` parts, in
/// enumeration order.
pub fn enumerate_patterns(k: u32, n: usize) -> Vec<MultiplicityPattern> {
    let order = 2 * k + 1;
    let mut out = Vec::new();
    let mut current = Vec::new();
    partitions_desc(order, order, n, &mut current, &mut |parts| {
        let odd = parts.iter().filter(|&&p| p % 2 == 1).count();
        if odd == 1 {
            out.push(MultiplicityPattern {
                parts: parts.to_vec(),
            });
        }
    });
    out
}

/// All non-vanishing patterns of odd order up to `2*max_k + 1`.
pub fn enumerate_patterns_up_to(max_k: u32, n: usize) -> Vec<MultiplicityPattern> {
    (0..=max_k).flat_map(|k| enumerate_patterns(k, n)).collect()
}

/// Partitions of `remaining` with parts `<= max_part` and at most
/// `slots` parts, largest parts first (reverse lexicographic).
fn partitions_desc(
    remaining: u32,
    max_part: u32,
    slots: usize,
    current: &mut Vec<u32>,
    emit: &mut dyn FnMut(&[u32]),
) {
    if remaining == 0 {
        emit(current);
        return;
    }
    if slots == 0 {
        return;
    }
    let mut part = max_part.min(remaining);
    while part >= 1 {
        // The remaining slots cannot absorb what is left.
        if (part as u64) * (slots as u64) < remaining as u64 {
            break;
        }
        current.push(part);
        partitions_desc(remaining - part, part, slots - 1, current, emit);
        current.pop();
        part -= 1;
    }
}

/// Number of ordered tuples in `{1..n}^order` whose pattern is `p`:
/// `order! / ∏ parts!` ways to place the values, times
/// `n (n-1) ... (n-b+1) / ∏ (multiplicity of equal parts)!` ways to pick the
/// `b` distinct values. Zero when `p` has more than `n` parts.
pub fn tuple_count(p: &MultiplicityPattern, n: usize) -> BigUint {
    let b = p.part_count();
    if b > n {
        return BigUint::zero();
    }
    let mut placements = factorial(p.order() as u64);
    for &part in p.parts() {
        placements /= factorial(part as u64);
    }
    let mut labels = falling_factorial(n as u64, b as u64);
    let mut i = 0;
    while i < b {
        let run = p.parts()[i..]
            .iter()
            .take_while(|&&x| x == p.parts()[i])
            .count();
        labels /= factorial(run as u64);
        i += run;
    }
    placements * labels
}
