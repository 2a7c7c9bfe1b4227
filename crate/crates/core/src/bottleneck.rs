//! Bottleneck distance between barcodes and interleaving distance between
//! grid modules.

use std::collections::BTreeMap;
use std::fmt;

use crate::barcode::Barcode;
use crate::decomposition::decompose;
use crate::distance::interval_distance;
use crate::grid::GridModule;
use crate::interval::Interval;
use crate::scalar::ExtendedRational;

/// A partial matching between two lists, by index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexMatching {
    pub pairs: Vec<(usize, usize)>,
    pub left_unmatched: Vec<usize>,
    pub right_unmatched: Vec<usize>,
}

/// Finds a partial matching of `left` (size `n`) and `right` (size `m`)
/// that uses only allowed pairs and leaves unmatched only allowed elements.
///
/// Equivalent to a perfect matching between `left ∪ right'` and
/// `right ∪ left'`, where `left'` and `right'` are the "unmatched" slots and
/// slot pairs are always allowed. Solved with augmenting paths.
pub fn find_matching(
    n: usize,
    m: usize,
    can_pair: impl Fn(usize, usize) -> bool,
    can_drop_left: impl Fn(usize) -> bool,
    can_drop_right: impl Fn(usize) -> bool,
) -> Option<IndexMatching> {
    let size = n + m;
    // Left vertices: 0..n real, n..n+m slots of the right side.
    // Right vertices: 0..m real, m..m+n slots of the left side.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); size];
    for i in 0..n {
        for j in 0..m {
            if can_pair(i, j) {
                adj[i].push(j);
            }
        }
        if can_drop_left(i) {
            adj[i].push(m + i);
        }
    }
    for j in 0..m {
        if can_drop_right(j) {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n);
    }

    fn augment(
        u: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }

    let mut owner: Vec<Option<usize>> = vec![None; size];
    for u in 0..size {
        let mut seen = vec![false; size];
        if !augment(u, &adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut out = IndexMatching::default();
    for (v, u) in owner.iter().enumerate() {
        let u = u.expect("perfect matching");
        match (u < n, v < m) {
            (true, true) => out.pairs.push((u, v)),
            (true, false) => out.left_unmatched.push(u),
            (false, true) => out.right_unmatched.push(v),
            (false, false) => {}
        }
    }
    out.pairs.sort_unstable();
    out.left_unmatched.sort_unstable();
    out.right_unmatched.sort_unstable();
    Some(out)
}

/// A partial matching between two barcodes of one degree. Unmatched bars
/// are matched to the empty interval.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PartialMatching {
    pub pairs: Vec<(Interval, Interval)>,
    pub unmatched_left: Vec<Interval>,
    pub unmatched_right: Vec<Interval>,
}

impl PartialMatching {
    /// The largest interval distance along the matching.
    pub fn cost(&self) -> ExtendedRational {
        let empty = Interval::empty();
        self.pairs
            .iter()
            .map(|(a, b)| interval_distance(a, b))
            .chain(self.unmatched_left.iter().map(|a| interval_distance(a, &empty)))
            .chain(self.unmatched_right.iter().map(|b| interval_distance(&empty, b)))
            .max()
            .unwrap_or_else(ExtendedRational::zero)
    }
}

impl fmt::Display for PartialMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let empty = Interval::empty();
        for (a, b) in &self.pairs {
            writeln!(f, "{a} <-> {b}  cost {}", interval_distance(a, b))?;
        }
        for a in &self.unmatched_left {
            writeln!(f, "{a} <-> ∅  cost {}", interval_distance(a, &empty))?;
        }
        for b in &self.unmatched_right {
            writeln!(f, "∅ <-> {b}  cost {}", interval_distance(&empty, b))?;
        }
        Ok(())
    }
}

/// Least threshold admitting a matching, and a matching attaining it.
pub fn bottleneck_bars(a: &[Interval], b: &[Interval]) -> (ExtendedRational, PartialMatching) {
    let cost: Vec<Vec<ExtendedRational>> = a
        .iter()
        .map(|x| b.iter().map(|y| interval_distance(x, y)).collect())
        .collect();
    let half_a: Vec<ExtendedRational> = a.iter().map(Interval::half_length).collect();
    let half_b: Vec<ExtendedRational> = b.iter().map(Interval::half_length).collect();

    let mut candidates: Vec<ExtendedRational> = cost
        .iter()
        .flatten()
        .chain(&half_a)
        .chain(&half_b)
        .filter(|c| c.is_finite())
        .cloned()
        .collect();
    candidates.push(ExtendedRational::zero());
    candidates.sort();
    candidates.dedup();

    let attempt = |t: &ExtendedRational| {
        find_matching(
            a.len(),
            b.len(),
            |i, j| &cost[i][j] <= t,
            |i| &half_a[i] <= t,
            |j| &half_b[j] <= t,
        )
    };

    let (value, matching) = match attempt(candidates.last().expect("zero is a candidate")) {
        None => {
            let inf = ExtendedRational::PosInfinity;
            (inf.clone(), attempt(&inf).expect("everything is allowed at inf"))
        }
        Some(_) => {
            let (mut lo, mut hi) = (0usize, candidates.len() - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if attempt(&candidates[mid]).is_some() {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            let best = attempt(&candidates[lo]).expect("feasible at the least threshold");
            (candidates[lo].clone(), best)
        }
    };
    let witness = PartialMatching {
        pairs: matching
            .pairs
            .iter()
            .map(|&(i, j)| (a[i].clone(), b[j].clone()))
            .collect(),
        unmatched_left: matching.left_unmatched.iter().map(|&i| a[i].clone()).collect(),
        unmatched_right: matching.right_unmatched.iter().map(|&j| b[j].clone()).collect(),
    };
    (value, witness)
}

/// Bottleneck distance between the bars of one degree.
pub fn bottleneck(x: &Barcode, y: &Barcode, degree: usize) -> (ExtendedRational, PartialMatching) {
    bottleneck_bars(&x.bars(degree), &y.bars(degree))
}

/// Bottleneck distance in every degree present in either barcode.
pub fn bottleneck_by_degree(x: &Barcode, y: &Barcode) -> BTreeMap<usize, ExtendedRational> {
    let mut degrees = x.degrees();
    degrees.extend(y.degrees());
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .into_iter()
        .map(|d| (d, bottleneck(x, y, d).0))
        .collect()
}

/// Interleaving distance of two finite-type modules, via their barcodes.
pub fn module_distance(f: &GridModule, g: &GridModule) -> ExtendedRational {
    bottleneck(&decompose(f, 0), &decompose(g, 0), 0).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::grid::Grid;

    fn q(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    #[test]
    fn identical_barcodes_are_at_distance_zero() {
        let bars = vec![
            Interval::closed(q("0"), q("1")),
            Interval::closed_open(q("2"), q("inf")),
        ];
        let (d, m) = bottleneck_bars(&bars, &bars);
        assert_eq!(d, q("0"));
        assert_eq!(m.pairs.len(), 2);
        assert_eq!(m.cost(), q("0"));
    }

    #[test]
    fn nested_bars_example() {
        let a = vec![Interval::closed(q("0"), q("10"))];
        let b = vec![Interval::closed(q("1"), q("9")), Interval::closed(q("4"), q("5"))];
        let (d, m) = bottleneck_bars(&a, &b);
        assert_eq!(d, q("1"));
        assert_eq!(m.pairs, vec![(a[0].clone(), b[0].clone())]);
        assert_eq!(m.unmatched_right, vec![b[1].clone()]);
        assert_eq!(m.cost(), q("1"));
    }

    #[test]
    fn unmatched_ray_is_infinitely_far() {
        let a = vec![Interval::closed_open(q("0"), q("inf"))];
        let (d, m) = bottleneck_bars(&a, &[]);
        assert_eq!(d, q("inf"));
        assert_eq!(m.unmatched_left, a);
    }

    #[test]
    fn degenerate_point_module_is_at_distance_zero_from_zero() {
        let f = PrimeField::gf2();
        let point = Interval::point(q("0"));
        let chi = GridModule::chi(f, &point, &Grid::from_critical(&[q("0")]));
        let zero = GridModule::zero(f, Grid::from_critical(&[]));
        assert_eq!(module_distance(&zero, &chi), q("0"));
        assert_ne!(chi.dims(), zero.resample(chi.grid()).dims());
    }
}
