//! Sorted pooled view of two univariate samples, shared by the rank and
//! empirical-distribution statistics, and the exact permutation null.

use std::cmp::Ordering;

/// Largest number of sample splits `C(n + m, n)` for which p-values are taken
/// from the exact permutation distribution instead of the asymptotic law.
pub const EXACT_SPLITS_MAX: u64 = 20_000;

/// Pooled values in increasing order with tie groups and midranks.
#[derive(Debug, Clone)]
pub(crate) struct Pooled {
    n: usize,
    m: usize,
    /// `true` where the sorted position holds a value of the first sample.
    from_first: Vec<bool>,
    /// Exclusive end of the tie group each sorted position belongs to.
    group_end: Vec<usize>,
    midrank: Vec<f64>,
}

/// Signed extreme CDF differences and the rank-sum statistic of one split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SplitStats {
    /// `sup (F_P − F_Q)`, never negative.
    pub d_plus: f64,
    /// `sup (F_Q − F_P)`, never negative.
    pub d_minus: f64,
    /// Mann–Whitney `U` of the first sample (midranks).
    pub u_first: f64,
}

impl Pooled {
    pub(crate) fn new(x: &[f64], y: &[f64]) -> Self {
        let mut tagged: Vec<(f64, bool)> = x
            .iter()
            .map(|&v| (v, true))
            .chain(y.iter().map(|&v| (v, false)))
            .collect();
        tagged.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let total = tagged.len();
        let mut group_end = vec![0; total];
        let mut midrank = vec![0.0; total];
        let mut start = 0;
        while start < total {
            let mut end = start + 1;
            while end < total && tagged[end].0 == tagged[start].0 {
                end += 1;
            }
            // ranks start..end (1-based: start+1..=end) share their average
            let r = (start + 1 + end) as f64 / 2.0;
            for i in start..end {
                group_end[i] = end;
                midrank[i] = r;
            }
            start = end;
        }
        Self {
            n: x.len(),
            m: y.len(),
            from_first: tagged.iter().map(|t| t.1).collect(),
            group_end,
            midrank,
        }
    }

    pub(crate) fn total(&self) -> usize {
        self.n + self.m
    }

    /// Number of distinct values.
    pub(crate) fn groups(&self) -> usize {
        let mut count = 0;
        let mut i = 0;
        while i < self.total() {
            count += 1;
            i = self.group_end[i];
        }
        count
    }

    /// Sum over tie groups of `t³ − t`.
    pub(crate) fn tie_term(&self) -> f64 {
        let mut acc = 0.0;
        let mut i = 0;
        while i < self.total() {
            let t = (self.group_end[i] - i) as f64;
            acc += t * t * t - t;
            i = self.group_end[i];
        }
        acc
    }

    pub(crate) fn observed(&self) -> SplitStats {
        self.stats(&self.from_first)
    }

    /// Statistics when the sorted positions flagged `true` form the first sample.
    fn stats(&self, first: &[bool]) -> SplitStats {
        let (n, m) = (self.n as f64, self.m as f64);
        let (mut cp, mut cq) = (0usize, 0usize);
        let (mut d_plus, mut d_minus) = (0.0f64, 0.0f64);
        let mut rank_sum = 0.0;
        for (i, &from_first) in first.iter().enumerate() {
            if from_first {
                cp += 1;
                rank_sum += self.midrank[i];
            } else {
                cq += 1;
            }
            if self.group_end[i] == i + 1 {
                let diff = cp as f64 / n - cq as f64 / m;
                d_plus = d_plus.max(diff);
                d_minus = d_minus.max(-diff);
            }
        }
        SplitStats {
            d_plus,
            d_minus,
            u_first: rank_sum - n * (n + 1.0) / 2.0,
        }
    }

    /// Number of ways to choose the first sample out of the pool, saturating.
    pub(crate) fn splits(&self) -> u64 {
        let (total, k) = (self.total() as u64, self.n.min(self.m) as u64);
        let mut c: u64 = 1;
        for i in 0..k {
            // c · (total − i) / (i + 1) stays an integer at every step
            c = match c.checked_mul(total - i) {
                Some(v) => v / (i + 1),
                None => return u64::MAX,
            };
        }
        c
    }

    pub(crate) fn exact_feasible(&self) -> bool {
        self.splits() <= EXACT_SPLITS_MAX
    }

    /// Fraction of all `C(n + m, n)` splits whose `score` is at least the
    /// observed one (up to a small tolerance for rounding).
    pub(crate) fn permutation_pvalue(&self, score: impl Fn(&SplitStats) -> f64) -> f64 {
        let total = self.total();
        let target = score(&self.observed()) - 1e-9;
        let mut idx: Vec<usize> = (0..self.n).collect();
        let mut first = vec![false; total];
        let (mut hits, mut count) = (0u64, 0u64);
        loop {
            first.iter_mut().for_each(|f| *f = false);
            for &i in &idx {
                first[i] = true;
            }
            count += 1;
            if score(&self.stats(&first)) >= target {
                hits += 1;
            }
            if !next_combination(&mut idx, total) {
                break;
            }
        }
        hits as f64 / count as f64
    }
}

/// Advances `idx` (strictly increasing, values below `total`) to the next
/// combination in lexicographic order; `false` after the last one.
fn next_combination(idx: &mut [usize], total: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < total - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_and_ties() {
        let p = Pooled::new(&[1.0, 2.0, 2.0], &[2.0, 5.0]);
        assert_eq!(p.midrank, vec![1.0, 3.0, 3.0, 3.0, 5.0]);
        assert_eq!(p.groups(), 3);
        assert_eq!(p.tie_term(), 24.0);
    }

    #[test]
    fn combination_count() {
        let mut idx = vec![0, 1, 2];
        let mut count = 1;
        while next_combination(&mut idx, 6) {
            count += 1;
        }
        assert_eq!(count, 20);
        assert_eq!(Pooled::new(&[0.0; 6], &[1.0; 6]).splits(), 924);
        assert_eq!(Pooled::new(&[0.0; 8], &[1.0; 8]).splits(), 12_870);
        assert!(!Pooled::new(&[0.0; 9], &[1.0; 9]).exact_feasible());
    }
}
