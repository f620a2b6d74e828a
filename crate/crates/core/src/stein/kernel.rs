//! Evaluation of the bracket kernels `h_{2m}` on index classes.
//!
//! An outer index tuple `i ∈ {1..n}^{2m}` is represented by its
//! restricted-growth string (first occurrence order of values), which keeps
//! the split `i_1..i_k | i_{k+1}..i_{2m}` intact. Every string with `b`
//! distinct labels stands for `n (n-1) ... (n-b+1)` tuples.
//!
//! The inner sum over `u ∈ {1..n}^{r+1}` depends on `u` only through how
//! many times it hits each of the `b` outer labels and how its remaining
//! entries group into fresh values, so it is summed over those classes with
//! exact multiplicities.

use std::collections::HashMap;

use crate::coefficients::CoefficientTable;
use crate::error::Result;
use crate::patterns::MultiplicityPattern;
use crate::summation::CompensatedSum;

/// All restricted-growth strings of the given length.
pub(crate) fn restricted_growth_strings(len: usize) -> Vec<Vec<u8>> {
    fn go(prefix: &mut Vec<u8>, next_label: u8, len: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in 0..=next_label {
            prefix.push(v);
            go(prefix, next_label.max(v + 1), len, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(len), 0, len, &mut out);
    out
}

/// Relabels values in order of first occurrence.
pub(crate) fn canonical(labels: &[u8]) -> Vec<u8> {
    let mut map = [u8::MAX; 256];
    let mut next = 0u8;
    labels
        .iter()
        .map(|&v| {
            if map[v as usize] == u8::MAX {
                map[v as usize] = next;
                next += 1;
            }
            map[v as usize]
        })
        .collect()
}

pub(crate) fn distinct_labels(labels: &[u8]) -> usize {
    labels.iter().map(|&v| v as usize + 1).max().unwrap_or(0)
}

pub(crate) fn falling(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).map(|i| (n - i) as f64).product()
}

pub(crate) fn factorial_f64(k: usize) -> f64 {
    (2..=k).map(|i| i as f64).product()
}

/// `c_r(i)` for `r = 0..=r_max`: the contribution of each `r` to the
/// kernel value at the class `labels`,
/// `Σ_k 1/(k!(2m-k)!) (1/r!) 1/(2m-k+r+1) Σ_u a_{u,i_1..i_k} a_{u,i_{k+1}..i_{2m}}`.
pub(crate) fn kernel_by_r(
    table: &CoefficientTable,
    n: usize,
    labels: &[u8],
    r_max: usize,
) -> Result<Vec<f64>> {
    let len = labels.len();
    let b = distinct_labels(labels);
    let mut out = vec![0.0; r_max + 1];
    for (r, slot) in out.iter_mut().enumerate() {
        let mut acc = CompensatedSum::new();
        for k in 0..=len {
            // a vanishes at even order: both k+r+1 and len-k+r+1 must be odd.
            if (k + r + 1) % 2 == 0 || (len - k + r + 1).is_multiple_of(2) {
                continue;
            }
            let inner = u_sum(table, n, &labels[..k], &labels[k..], b, r + 1)?;
            let weight = factorial_f64(k)
                * factorial_f64(len - k)
                * factorial_f64(r)
                * (len - k + r + 1) as f64;
            acc.add(inner / weight);
        }
        *slot = acc.value();
    }
    Ok(out)
}

/// `Σ_{u ∈ {1..n}^{u_len}} a_{u, left} a_{u, right}` where `left` and
/// `right` are label strings over `0..b`.
fn u_sum(
    table: &CoefficientTable,
    n: usize,
    left: &[u8],
    right: &[u8],
    b: usize,
    u_len: usize,
) -> Result<f64> {
    let mut left_counts = vec![0u32; b];
    let mut right_counts = vec![0u32; b];
    for &v in left {
        left_counts[v as usize] += 1;
    }
    for &v in right {
        right_counts[v as usize] += 1;
    }
    let mut acc = CompensatedSum::new();
    let mut hits = vec![0u32; b];
    let mut state = USumState {
        table,
        n,
        b,
        u_len,
        left_counts: &left_counts,
        right_counts: &right_counts,
        acc: &mut acc,
    };
    state.over_hits(0, u_len as u32, &mut hits)?;
    Ok(acc.value())
}

struct USumState<'a> {
    table: &'a CoefficientTable,
    n: usize,
    b: usize,
    u_len: usize,
    left_counts: &'a [u32],
    right_counts: &'a [u32],
    acc: &'a mut CompensatedSum,
}

impl USumState<'_> {
    /// Chooses how many entries of `u` land on each outer label.
    fn over_hits(&mut self, label: usize, remaining: u32, hits: &mut [u32]) -> Result<()> {
        if label == self.b {
            let mut fresh = Vec::new();
            return self.over_fresh(remaining, remaining, &mut fresh, hits);
        }
        for h in 0..=remaining {
            hits[label] = h;
            self.over_hits(label + 1, remaining - h, hits)?;
        }
        hits[label] = 0;
        Ok(())
    }

    /// Splits the entries of `u` off the outer labels into blocks of
    /// equal fresh values, largest block first.
    fn over_fresh(
        &mut self,
        remaining: u32,
        max_part: u32,
        fresh: &mut Vec<u32>,
        hits: &[u32],
    ) -> Result<()> {
        if remaining == 0 {
            return self.visit(hits, fresh);
        }
        if fresh.len() + self.b >= self.n {
            return Ok(());
        }
        for part in (1..=max_part.min(remaining)).rev() {
            fresh.push(part);
            self.over_fresh(remaining - part, part, fresh, hits)?;
            fresh.pop();
        }
        Ok(())
    }

    fn visit(&mut self, hits: &[u32], fresh: &[u32]) -> Result<()> {
        let pattern = |counts: &[u32]| -> Option<MultiplicityPattern> {
            let mut parts: Vec<u32> = counts
                .iter()
                .zip(hits)
                .map(|(c, h)| c + h)
                .filter(|&x| x > 0)
                .collect();
            parts.extend_from_slice(fresh);
            let p = MultiplicityPattern::from_parts_unchecked(parts);
            (!p.is_vanishing()).then_some(p)
        };
        let (Some(pl), Some(pr)) = (pattern(self.left_counts), pattern(self.right_counts)) else {
            return Ok(());
        };
        let mut weight = factorial_f64(self.u_len);
        for &h in hits.iter().chain(fresh) {
            weight /= factorial_f64(h as usize);
        }
        weight *= falling(self.n - self.b, fresh.len());
        let mut i = 0;
        while i < fresh.len() {
            let run = fresh[i..].iter().take_while(|&&x| x == fresh[i]).count();
            weight /= factorial_f64(run);
            i += run;
        }
        let a = self.table.get(self.n, &pl)?;
        let c = self.table.get(self.n, &pr)?;
        self.acc.add(weight * a * c);
        Ok(())
    }
}

/// Kernel values `c_r` for every restricted-growth string of length `len`.
pub(crate) type KernelMemo = HashMap<Vec<u8>, Vec<f64>>;

/// Averages `c` over all permutations of the `len` positions:
/// the kernel of the symmetrized `h_{2m}`.
pub(crate) fn symmetrize(memo: &KernelMemo, labels: &[u8], perms: &[Vec<usize>]) -> Vec<f64> {
    let r_len = memo.values().next().map_or(0, Vec::len);
    let mut sums = vec![CompensatedSum::new(); r_len];
    let mut permuted = vec![0u8; labels.len()];
    for perm in perms {
        for (slot, &src) in permuted.iter_mut().zip(perm) {
            *slot = labels[src];
        }
        let values = &memo[&canonical(&permuted)];
        for (s, v) in sums.iter_mut().zip(values) {
            s.add(*v);
        }
    }
    let count = perms.len() as f64;
    sums.iter().map(|s| s.value() / count).collect()
}

/// All permutations of `0..len` in lexicographic order.
pub(crate) fn permutations(len: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..len).collect();
    let mut out = vec![current.clone()];
    loop {
        let Some(i) = (1..len).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..len)
            .rev()
            .find(|&j| current[j] > current[i - 1])
            .unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}
