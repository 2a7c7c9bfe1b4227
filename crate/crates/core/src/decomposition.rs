//! Interval decomposition of grid modules.
//!
//! Multiplicities come from the rank inclusion–exclusion formula
//! `mult[i, j) = r(i, j-1) - r(i-1, j-1) - r(i, j) + r(i-1, j)` where
//! `r(x, y)` is the rank of the composite `x → y` and `r(-1, ·) = 0`. A bar
//! still alive at the last index never dies.
//!
//! Index intervals are turned into real intervals by parity: a bar starting
//! at an odd index `2k - 1` is born at `a_k` (closed), one starting at an even
//! index `2k > 0` just after `a_k` (open), and one alive at index 0 has
//! always existed. A bar ending before an odd index `2k - 1` dies at `a_k`
//! (open), one ending before an even index `2k` dies just after `a_k`
//! (closed).

use std::collections::BTreeMap;
use std::fmt;

use crate::barcode::Barcode;
use crate::grid::{Grid, GridModule};
use crate::interval::Interval;
use crate::matrix::Matrix;
use crate::scalar::ExtendedRational;

/// Half-open range of grid indices `[start, end)`; `end = None` never dies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexInterval {
    pub start: usize,
    pub end: Option<usize>,
}

impl IndexInterval {
    pub fn new(start: usize, end: Option<usize>) -> Self {
        if let Some(e) = end {
            assert!(start < e, "index interval [{start}, {e}) is empty");
        }
        Self { start, end }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.start <= i && self.end.is_none_or(|e| i < e)
    }
}

impl fmt::Display for IndexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            Some(e) => write!(f, "[{}, {e})", self.start),
            None => write!(f, "[{}, inf)", self.start),
        }
    }
}

/// Multiplicity of every index interval. Panics if the rank table is not
/// that of a module (a negative multiplicity).
pub fn index_decompose(m: &GridModule) -> BTreeMap<IndexInterval, usize> {
    let table = m.rank_table();
    let last = m.grid().last();
    let r = |x: isize, y: usize| -> i64 {
        if x < 0 {
            0
        } else {
            let x = x as usize;
            table[x][y - x] as i64
        }
    };
    let mut out = BTreeMap::new();
    let mut record = |ii: IndexInterval, mult: i64| {
        assert!(mult >= 0, "negative multiplicity {mult} for {ii}: not a module");
        if mult > 0 {
            out.insert(ii, mult as usize);
        }
    };
    for i in 0..=last {
        let x = i as isize;
        for j in i + 1..=last {
            let mult = r(x, j - 1) - r(x - 1, j - 1) - r(x, j) + r(x - 1, j);
            record(IndexInterval::new(i, Some(j)), mult);
        }
        record(IndexInterval::new(i, None), r(x, last) - r(x - 1, last));
    }
    out
}

/// The real interval of reals whose grid cell lies in `ii`.
pub fn realize_endpoints(ii: IndexInterval, grid: &Grid) -> Interval {
    let (lo, lo_closed) = match ii.start {
        0 => (ExtendedRational::NegInfinity, false),
        k if k % 2 == 1 => (grid.value(k).clone(), true),
        k => (grid.value(k - 1).clone(), false),
    };
    let (hi, hi_closed) = match ii.end {
        None => (ExtendedRational::PosInfinity, false),
        Some(l) if l % 2 == 1 => (grid.value(l).clone(), false),
        Some(l) => (grid.value(l - 1).clone(), true),
    };
    let interval = Interval::new(lo, hi, lo_closed, hi_closed).expect("ordered ends");
    debug_assert!(!interval.is_empty());
    interval
}

/// The barcode of `m`, all bars tagged with `degree`.
pub fn decompose(m: &GridModule, degree: usize) -> Barcode {
    let mut b = Barcode::new();
    for (ii, mult) in index_decompose(m) {
        b.insert(degree, realize_endpoints(ii, m.grid()), mult);
    }
    b
}

/// A basis of every space of a module adapted to an interval decomposition:
/// each transition sends the vector of a bar to the vector of the same bar
/// at the next index, or to zero where the bar ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalBasis {
    bars: Vec<IndexInterval>,
    bases: Vec<Matrix>,
    alive: Vec<Vec<usize>>,
}

impl IntervalBasis {
    pub fn bars(&self) -> &[IndexInterval] {
        &self.bars
    }

    /// Invertible matrix whose columns are the vectors of the bars alive at
    /// index `i`, in the order of [`IntervalBasis::alive`].
    pub fn basis(&self, i: usize) -> &Matrix {
        &self.bases[i]
    }

    /// Bar ids alive at index `i`.
    pub fn alive(&self, i: usize) -> &[usize] {
        &self.alive[i]
    }
}

/// Builds an interval basis by sweeping the grid: images of older bars are
/// kept first, a bar whose image depends on older ones is rewritten over its
/// lifetime so that it maps to zero, and new bars complete the image to a
/// basis.
pub fn interval_basis(m: &GridModule) -> IntervalBasis {
    let field = m.field();
    let n = m.grid().len();
    let mut bars: Vec<IndexInterval> = Vec::new();
    let mut vectors: Vec<Vec<Vec<u32>>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();

    let born = |i: usize, kept: &Matrix, bars: &mut Vec<IndexInterval>, vectors: &mut Vec<Vec<Vec<u32>>>| {
        let d = m.dim(i);
        let stacked = kept.hstack(&Matrix::identity(field, d)).expect("rows agree");
        let (_, pivots) = stacked.rref();
        let mut ids = Vec::new();
        for p in pivots.into_iter().filter(|&p| p >= kept.cols()) {
            let mut e = vec![0u32; d];
            e[p - kept.cols()] = 1;
            ids.push(bars.len());
            bars.push(IndexInterval::new(i, None));
            vectors.push(vec![e]);
        }
        ids
    };

    current.extend(born(0, &Matrix::zeros(field, m.dim(0), 0), &mut bars, &mut vectors));
    for i in 0..n - 1 {
        let t = m.transition(i);
        let mut kept: Vec<usize> = Vec::new();
        let mut kept_images = Matrix::zeros(field, m.dim(i + 1), 0);
        for &b in &current {
            let v = vectors[b].last().expect("alive bar has a vector").clone();
            let image = t
                .mul(&Matrix::from_columns(field, m.dim(i), &[v]))
                .expect("shapes");
            match kept_images.solve(&image).expect("shapes") {
                Some(coeffs) => {
                    let start = bars[b].start;
                    for step in 0..vectors[b].len() {
                        let time = start + step;
                        for (slot, &older) in kept.iter().enumerate() {
                            let c = coeffs.get(slot, 0);
                            if c == 0 {
                                continue;
                            }
                            let older_start = bars[older].start;
                            let w = vectors[older][time - older_start].clone();
                            for (x, y) in vectors[b][step].iter_mut().zip(w) {
                                *x = field.sub(*x, field.mul(c, y));
                            }
                        }
                    }
                    bars[b] = IndexInterval::new(start, Some(i + 1));
                }
                None => {
                    kept.push(b);
                    kept_images = kept_images.hstack(&image).expect("rows agree");
                }
            }
        }
        for (slot, &b) in kept.iter().enumerate() {
            vectors[b].push(kept_images.column(slot));
        }
        let new = born(i + 1, &kept_images, &mut bars, &mut vectors);
        current = kept;
        current.extend(new);
    }

    let mut alive = vec![Vec::new(); n];
    let mut columns: Vec<Vec<Vec<u32>>> = vec![Vec::new(); n];
    for (b, bar) in bars.iter().enumerate() {
        for (step, v) in vectors[b].iter().enumerate() {
            alive[bar.start + step].push(b);
            columns[bar.start + step].push(v.clone());
        }
    }
    let bases = (0..n)
        .map(|i| Matrix::from_columns(field, m.dim(i), &columns[i]))
        .collect();
    IntervalBasis { bars, bases, alive }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn q(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    fn grid(vals: &[&str]) -> Grid {
        let v: Vec<ExtendedRational> = vals.iter().map(|s| q(s)).collect();
        Grid::from_critical(&v)
    }

    fn ii(start: usize, end: Option<usize>) -> IndexInterval {
        IndexInterval::new(start, end)
    }

    #[test]
    fn zero_module_has_no_bars() {
        let m = GridModule::zero(PrimeField::gf2(), grid(&["0", "1"]));
        assert!(index_decompose(&m).is_empty());
    }

    #[test]
    fn single_generator_never_dies() {
        let g = grid(&["0"]);
        let m = GridModule::chi(PrimeField::gf2(), &Interval::closed_open(q("0"), q("inf")), &g);
        assert_eq!(index_decompose(&m), BTreeMap::from([(ii(1, None), 1)]));
    }

    #[test]
    fn zero_transition_splits_into_two_bars() {
        let f = PrimeField::gf2();
        let g = grid(&["0"]);
        let m = GridModule::new(
            f,
            g.clone(),
            vec![1, 1, 1],
            vec![Matrix::zeros(f, 1, 1), Matrix::identity(f, 1)],
        )
        .unwrap();
        assert_eq!(
            index_decompose(&m),
            BTreeMap::from([(ii(0, Some(1)), 1), (ii(1, None), 1)])
        );
    }

    #[test]
    fn endpoint_parity() {
        let g1 = grid(&["0"]);
        assert_eq!(
            realize_endpoints(ii(1, None), &g1),
            Interval::closed_open(q("0"), q("inf"))
        );
        let g2 = grid(&["1", "2"]);
        assert_eq!(
            realize_endpoints(ii(1, Some(3)), &g2),
            Interval::closed_open(q("1"), q("2"))
        );
        assert_eq!(realize_endpoints(ii(2, Some(3)), &g2), Interval::open(q("1"), q("2")));
        assert_eq!(
            realize_endpoints(ii(2, Some(4)), &g2),
            Interval::open_closed(q("1"), q("2"))
        );
        assert_eq!(realize_endpoints(ii(1, Some(2)), &g2), Interval::point(q("1")));
        assert_eq!(
            realize_endpoints(ii(0, Some(1)), &g2),
            Interval::open(q("-inf"), q("1"))
        );
        assert_eq!(realize_endpoints(ii(0, None), &grid(&[])), Interval::real_line());
    }

    #[test]
    fn half_open_on_the_left_module() {
        let f = PrimeField::gf2();
        let i = Interval::open_closed(q("1"), q("2"));
        let m = GridModule::chi(f, &i, &grid(&["1", "2"]));
        assert_eq!(decompose(&m, 0), Barcode::from_bars(0, [i]));
    }

    #[test]
    fn interval_basis_matches_rank_formula() {
        let f = PrimeField::new(3).unwrap();
        let bars = [
            Interval::closed(q("0"), q("2")),
            Interval::closed_open(q("1"), q("inf")),
            Interval::open(q("1"), q("3")),
            Interval::closed(q("0"), q("2")),
        ];
        let m = GridModule::synthesize(f, &Barcode::from_bars(0, bars), 0);
        let bump = |i: usize| {
            let d = m.dim(i);
            Matrix::from_fn(f, d, d, |r, c| if r <= c { (r + 2 * c + 1) as i64 } else { 0 })
        };
        let bases: Vec<Matrix> = (0..m.grid().len())
            .map(|i| {
                let mut b = bump(i);
                for k in 0..b.rows() {
                    b.set(k, k, 1);
                }
                b
            })
            .collect();
        let m = m.conjugate(&bases);
        let basis = interval_basis(&m);
        let mut from_basis: BTreeMap<IndexInterval, usize> = BTreeMap::new();
        for bar in basis.bars() {
            *from_basis.entry(*bar).or_default() += 1;
        }
        assert_eq!(from_basis, index_decompose(&m));
        for i in 0..m.grid().len() - 1 {
            let moved = m.transition(i).mul(basis.basis(i)).unwrap();
            for (col, &b) in basis.alive(i).iter().enumerate() {
                let v = moved.column(col);
                match basis.alive(i + 1).iter().position(|&x| x == b) {
                    Some(pos) => assert_eq!(v, basis.basis(i + 1).column(pos)),
                    None => assert!(v.iter().all(|&x| x == 0)),
                }
            }
            assert!(basis.basis(i).inverse().is_some());
        }
    }
}
