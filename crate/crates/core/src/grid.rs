//! Alternating grids and persistence modules sampled on them.
//!
//! A grid over critical values `a_1 < … < a_n` is the sequence
//! `b_0 < a_1 < b_1 < … < a_n < b_n` where each `b_k` is a sample strictly
//! between its neighbours: the mean of consecutive critical values,
//! `a_1 - 1` below and `a_n + 1` above. With no critical values the grid is
//! the single sample `0`. A module on a grid is constant below index 0 and
//! above the last index, and constant on every open gap between critical
//! values.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::barcode::Barcode;
use crate::field::PrimeField;
use crate::interval::Interval;
use crate::matrix::{compose, LinalgError, Matrix};
use crate::scalar::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("expected {expected} transitions for a grid with {points} points, got {got}")]
    TransitionCount {
        expected: usize,
        points: usize,
        got: usize,
    },
    #[error("transition {index} has shape {shape:?}, expected {expected:?}")]
    TransitionShape {
        index: usize,
        shape: (usize, usize),
        expected: (usize, usize),
    },
    #[error("transition {0} is over a different field")]
    FieldMismatch(usize),
    #[error("expected {expected} dimensions, got {got}")]
    DimensionCount { expected: usize, got: usize },
    #[error("modules live on different grids")]
    GridMismatch,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Grid {
    values: Vec<ExtendedRational>,
}

impl Grid {
    /// The alternating grid around the given finite critical values (sorted
    /// and deduplicated here).
    pub fn from_critical<'a>(critical: impl IntoIterator<Item = &'a ExtendedRational>) -> Self {
        let crit: BTreeSet<&ExtendedRational> = critical.into_iter().collect();
        let crit: Vec<&ExtendedRational> = crit.into_iter().collect();
        assert!(crit.iter().all(|c| c.is_finite()), "critical values must be finite");
        let one = ExtendedRational::from_int(1);
        let Some(first) = crit.first() else {
            return Self {
                values: vec![ExtendedRational::zero()],
            };
        };
        let mut values = vec![*first - &one];
        for (k, c) in crit.iter().enumerate() {
            values.push((*c).clone());
            values.push(match crit.get(k + 1) {
                Some(next) => c.mean(next),
                None => *c + &one,
            });
        }
        Self { values }
    }

    pub fn values(&self) -> &[ExtendedRational] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The index of the last point, `2n`.
    pub fn last(&self) -> usize {
        self.values.len() - 1
    }

    pub fn value(&self, i: usize) -> &ExtendedRational {
        &self.values[i]
    }

    /// The critical values `a_1, …, a_n` (odd indices).
    pub fn critical(&self) -> Vec<ExtendedRational> {
        self.values.iter().skip(1).step_by(2).cloned().collect()
    }

    /// The grid index whose space represents the module at `x`: `2k - 1`
    /// at `a_k`, `2k` on the open gap `(a_k, a_{k+1})`, `0` below `a_1` and
    /// `2n` above `a_n`.
    pub fn locate(&self, x: &ExtendedRational) -> usize {
        let crit: Vec<&ExtendedRational> = self.values.iter().skip(1).step_by(2).collect();
        match crit.binary_search(&x) {
            Ok(k) => 2 * k + 1,
            Err(k) => 2 * k,
        }
    }
}

/// A module on an alternating grid: a space per grid point and a matrix
/// between consecutive points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridModule {
    field: PrimeField,
    grid: Grid,
    dims: Vec<usize>,
    transitions: Vec<Matrix>,
}

impl GridModule {
    pub fn new(
        field: PrimeField,
        grid: Grid,
        dims: Vec<usize>,
        transitions: Vec<Matrix>,
    ) -> Result<Self, GridError> {
        if dims.len() != grid.len() {
            return Err(GridError::DimensionCount {
                expected: grid.len(),
                got: dims.len(),
            });
        }
        if transitions.len() != grid.len() - 1 {
            return Err(GridError::TransitionCount {
                expected: grid.len() - 1,
                points: grid.len(),
                got: transitions.len(),
            });
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.field() != field {
                return Err(GridError::FieldMismatch(i));
            }
            if t.shape() != (dims[i + 1], dims[i]) {
                return Err(GridError::TransitionShape {
                    index: i,
                    shape: t.shape(),
                    expected: (dims[i + 1], dims[i]),
                });
            }
        }
        Ok(Self {
            field,
            grid,
            dims,
            transitions,
        })
    }

    /// The module built from spaces given by dimension and transitions, with
    /// dimensions read off the matrices.
    pub fn from_transitions(
        field: PrimeField,
        grid: Grid,
        first_dim: usize,
        transitions: Vec<Matrix>,
    ) -> Result<Self, GridError> {
        let mut dims = vec![first_dim];
        dims.extend(transitions.iter().map(Matrix::rows));
        Self::new(field, grid, dims, transitions)
    }

    pub fn zero(field: PrimeField, grid: Grid) -> Self {
        let n = grid.len();
        Self {
            field,
            grid,
            dims: vec![0; n],
            transitions: vec![Matrix::zeros(field, 0, 0); n - 1],
        }
    }

    /// The interval module `χ_I` sampled on `grid`.
    pub fn chi(field: PrimeField, interval: &Interval, grid: &Grid) -> Self {
        let inside: Vec<bool> = grid.values().iter().map(|v| interval.contains(v)).collect();
        let dims: Vec<usize> = inside.iter().map(|&b| b as usize).collect();
        let transitions = (0..grid.len() - 1)
            .map(|i| {
                if inside[i] && inside[i + 1] {
                    Matrix::identity(field, 1)
                } else {
                    Matrix::zeros(field, dims[i + 1], dims[i])
                }
            })
            .collect();
        Self {
            field,
            grid: grid.clone(),
            dims,
            transitions,
        }
    }

    /// `⊕ χ_I` over the bars of one degree, on the grid of their finite
    /// endpoints.
    pub fn synthesize(field: PrimeField, barcode: &Barcode, degree: usize) -> Self {
        let bars = barcode.bars(degree);
        let ends: Vec<ExtendedRational> = bars
            .iter()
            .flat_map(|i| [i.lo().cloned(), i.hi().cloned()])
            .flatten()
            .filter(ExtendedRational::is_finite)
            .collect();
        let grid = Grid::from_critical(&ends);
        let parts: Vec<GridModule> = bars.iter().map(|i| Self::chi(field, i, &grid)).collect();
        Self::direct_sum_on(field, grid, &parts)
    }

    fn direct_sum_on(field: PrimeField, grid: Grid, parts: &[GridModule]) -> Self {
        let n = grid.len();
        let dims = (0..n).map(|i| parts.iter().map(|p| p.dims[i]).sum()).collect();
        let transitions = (0..n - 1)
            .map(|i| {
                let blocks: Vec<Matrix> = parts.iter().map(|p| p.transitions[i].clone()).collect();
                Matrix::block_diagonal(field, &blocks)
            })
            .collect();
        Self {
            field,
            grid,
            dims,
            transitions,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn transitions(&self) -> &[Matrix] {
        &self.transitions
    }

    pub fn transition(&self, i: usize) -> &Matrix {
        &self.transitions[i]
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// The map from index `i` to index `j ≥ i`.
    pub fn composite(&self, i: usize, j: usize) -> Matrix {
        assert!(i <= j && j < self.grid.len(), "composite({i}, {j}) out of range");
        compose(self.field, self.dims[i], &self.transitions[i..j]).expect("transitions chain")
    }

    /// `rank composite(i, j)`.
    pub fn rank(&self, i: usize, j: usize) -> usize {
        self.composite(i, j).rank()
    }

    /// `table[i][j - i] = rank(i, j)` for all `i ≤ j`. Computed by pushing
    /// forward from each start index.
    pub fn rank_table(&self) -> Vec<Vec<usize>> {
        (0..self.grid.len())
            .map(|i| {
                let mut acc = Matrix::identity(self.field, self.dims[i]);
                let mut row = vec![acc.rank()];
                for t in &self.transitions[i..] {
                    acc = t.mul(&acc).expect("transitions chain");
                    row.push(acc.rank());
                }
                row
            })
            .collect()
    }

    /// `dim M(x)` for any real `x`.
    pub fn evaluate(&self, x: &ExtendedRational) -> usize {
        self.dims[self.grid.locate(x)]
    }

    /// The structure map `M(x) → M(y)` for `x ≤ y`.
    pub fn map_between(&self, x: &ExtendedRational, y: &ExtendedRational) -> Matrix {
        assert!(x <= y, "map_between needs x ≤ y");
        self.composite(self.grid.locate(x), self.grid.locate(y))
    }

    /// The module sampled on another grid. Lossless when the new grid's
    /// critical values include every index where a transition of `self` is
    /// not an isomorphism.
    pub fn resample(&self, grid: &Grid) -> Self {
        let idx: Vec<usize> = grid.values().iter().map(|v| self.grid.locate(v)).collect();
        let dims = idx.iter().map(|&i| self.dims[i]).collect();
        let transitions = idx.windows(2).map(|w| self.composite(w[0], w[1])).collect();
        Self {
            field: self.field,
            grid: grid.clone(),
            dims,
            transitions,
        }
    }

    /// Restriction to the alternating grid around `critical`.
    pub fn discretize<'a>(&self, critical: impl IntoIterator<Item = &'a ExtendedRational>) -> Self {
        self.resample(&Grid::from_critical(critical))
    }

    /// The indices `i` whose transition `i → i+1` is not an isomorphism,
    /// reported as the grid values where the module changes.
    pub fn change_points(&self) -> Vec<ExtendedRational> {
        let mut out = BTreeSet::new();
        for (i, t) in self.transitions.iter().enumerate() {
            let iso = self.dims[i] == self.dims[i + 1] && t.rank() == self.dims[i];
            if !iso {
                let v = if i % 2 == 0 { i + 1 } else { i };
                out.insert(self.grid.value(v).clone());
            }
        }
        out.into_iter().collect()
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, GridError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch(self.field, other.field).into());
        }
        let crit: Vec<ExtendedRational> = self
            .grid
            .critical()
            .into_iter()
            .chain(other.grid.critical())
            .collect();
        let grid = Grid::from_critical(&crit);
        Ok(Self::direct_sum_on(
            self.field,
            grid.clone(),
            &[self.resample(&grid), other.resample(&grid)],
        ))
    }

    /// The same module with every space re-coordinatized: `M(i)` is
    /// replaced through the invertible matrix `bases[i]`.
    pub fn conjugate(&self, bases: &[Matrix]) -> Self {
        assert_eq!(bases.len(), self.grid.len());
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let inv = bases[i].inverse().expect("change of basis is invertible");
                bases[i + 1]
                    .mul(t)
                    .and_then(|m| m.mul(&inv))
                    .expect("shapes agree")
            })
            .collect();
        Self {
            field: self.field,
            grid: self.grid.clone(),
            dims: self.dims.clone(),
            transitions,
        }
    }
}
