//! Finite simplicial complexes, boundary matrices, and simplicial maps.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::field::PrimeField;
use crate::matrix::Matrix;

/// A simplex as its ascending list of vertex ids.
pub type Simplex = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("a simplex must have at least one vertex")]
    EmptySimplex,
    #[error("simplex {} repeats a vertex", show(.0))]
    RepeatedVertex(Simplex),
    #[error("face {} of simplex {} is missing", show(.face), show(.simplex))]
    MissingFace { simplex: Simplex, face: Simplex },
    #[error("vertex {0} of the source has no image")]
    UnassignedVertex(usize),
    #[error("image of simplex {} is not a simplex of the target", show(.0))]
    NotSimplicial(Simplex),
}

pub(crate) fn show(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// Codimension-one faces, in the order `[v0..v̂_i..vk]` for `i = 0..=k`.
pub fn facets(s: &[usize]) -> impl Iterator<Item = Simplex> + '_ {
    let n = if s.len() > 1 { s.len() } else { 0 };
    (0..n).map(move |i| {
        let mut f = s.to_vec();
        f.remove(i);
        f
    })
}

/// Sorts a vertex list and reports the permutation parity (+1 / -1), or
/// `None` when a vertex repeats.
pub fn orient(mut vertices: Vec<usize>) -> Option<(Simplex, i64)> {
    let mut inversions = 0usize;
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            match vertices[i].cmp(&vertices[j]) {
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    vertices.sort_unstable();
    Some((vertices, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

fn normalize(s: Simplex) -> Result<Simplex, ComplexError> {
    if s.is_empty() {
        return Err(ComplexError::EmptySimplex);
    }
    let mut sorted = s;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(ComplexError::RepeatedVertex(sorted));
    }
    Ok(sorted)
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let all: Vec<String> = self.iter().map(|s| show(s)).collect();
        write!(f, "SimplicialComplex[{}]", all.join(" "))
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    fn from_sorted_set(set: BTreeSet<Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in set {
            let d = s.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Vec::new);
            }
            by_dim[d].push(s);
        }
        for layer in &mut by_dim {
            layer.sort();
        }
        let index = by_dim
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .map(|(i, s)| (s.clone(), i))
                    .collect()
            })
            .collect();
        Self { by_dim, index }
    }

    /// Builds a complex from a list that must already be closed under faces.
    pub fn new(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self, ComplexError> {
        let set: BTreeSet<Simplex> = simplices
            .into_iter()
            .map(normalize)
            .collect::<Result<_, _>>()?;
        for s in &set {
            for f in facets(s) {
                if !set.contains(&f) {
                    return Err(ComplexError::MissingFace {
                        simplex: s.clone(),
                        face: f,
                    });
                }
            }
        }
        Ok(Self::from_sorted_set(set))
    }

    /// The smallest complex containing every given simplex.
    pub fn closure(simplices: impl IntoIterator<Item = Simplex>) -> Result<Self, ComplexError> {
        let mut set = BTreeSet::new();
        let mut stack: Vec<Simplex> = simplices
            .into_iter()
            .map(normalize)
            .collect::<Result<_, _>>()?;
        while let Some(s) = stack.pop() {
            if set.contains(&s) {
                continue;
            }
            stack.extend(facets(&s));
            set.insert(s);
        }
        Ok(Self::from_sorted_set(set))
    }

    /// The subcomplex of simplices satisfying `keep`. The predicate must be
    /// closed under taking faces.
    pub fn filter(&self, mut keep: impl FnMut(&Simplex) -> bool) -> Self {
        let set: BTreeSet<Simplex> = self.iter().filter(|s| keep(s)).cloned().collect();
        debug_assert!(set.iter().all(|s| facets(s).all(|f| set.contains(&f))));
        Self::from_sorted_set(set)
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.by_dim.len().checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.by_dim.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        self.index.get(k)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// All simplices, by dimension then lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.iter().all(|s| other.contains(s))
    }

    /// `∂_k`, with rows indexed by the (k-1)-simplices and columns by the
    /// k-simplices, using `∂[v0..vk] = Σ (-1)^i [v0..v̂_i..vk]`.
    pub fn boundary_matrix(&self, k: usize, field: PrimeField) -> Matrix {
        let cols = self.simplices(k);
        if k == 0 {
            return Matrix::zeros(field, 0, cols.len());
        }
        let mut m = Matrix::zeros(field, self.count(k - 1), cols.len());
        for (j, s) in cols.iter().enumerate() {
            for (i, f) in facets(s).enumerate() {
                let row = self.index_of(&f).expect("complex is closed under faces");
                m.set(row, j, field.reduce(if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        m
    }
}

/// A vertex map that sends simplices of `source` onto simplices of `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMap {
    source: SimplicialComplex,
    target: SimplicialComplex,
    assignment: BTreeMap<usize, usize>,
}

impl SimplicialMap {
    pub fn new(
        source: SimplicialComplex,
        target: SimplicialComplex,
        assignment: BTreeMap<usize, usize>,
    ) -> Result<Self, ComplexError> {
        for v in source.vertices() {
            if !assignment.contains_key(&v) {
                return Err(ComplexError::UnassignedVertex(v));
            }
        }
        let map = Self {
            source,
            target,
            assignment,
        };
        for s in map.source.iter() {
            if !map.target.contains(&map.image(s)) {
                return Err(ComplexError::NotSimplicial(s.clone()));
            }
        }
        Ok(map)
    }

    pub fn identity(complex: SimplicialComplex) -> Self {
        let assignment = complex.vertices().into_iter().map(|v| (v, v)).collect();
        Self {
            source: complex.clone(),
            target: complex,
            assignment,
        }
    }

    pub fn source(&self) -> &SimplicialComplex {
        &self.source
    }

    pub fn target(&self) -> &SimplicialComplex {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<usize, usize> {
        &self.assignment
    }

    pub fn vertex(&self, v: usize) -> usize {
        self.assignment[&v]
    }

    /// The image simplex, with collapsed vertices merged.
    pub fn image(&self, s: &[usize]) -> Simplex {
        let set: BTreeSet<usize> = s.iter().map(|v| self.assignment[v]).collect();
        set.into_iter().collect()
    }

    /// The induced chain map in degree `k` on the full complexes.
    pub fn chain_map(&self, k: usize, field: PrimeField) -> Matrix {
        oriented_chain_map(
            self.source.simplices(k),
            |s| self.target.index_of(s),
            self.target.count(k),
            |v| self.assignment[&v],
            field,
        )
    }
}

/// Column for σ is `±h(σ)` when the image is non-degenerate, else zero.
/// `target_index` returns `None` for simplices that are zero in the target
/// chain group (for example simplices of a relative subcomplex).
pub(crate) fn oriented_chain_map(
    source_cells: &[Simplex],
    target_index: impl Fn(&Simplex) -> Option<usize>,
    target_len: usize,
    vertex_map: impl Fn(usize) -> usize,
    field: PrimeField,
) -> Matrix {
    let mut m = Matrix::zeros(field, target_len, source_cells.len());
    for (j, s) in source_cells.iter().enumerate() {
        let image: Vec<usize> = s.iter().map(|&v| vertex_map(v)).collect();
        if let Some((t, sign)) = orient(image) {
            if let Some(i) = target_index(&t) {
                m.set(i, j, field.reduce(sign));
            }
        }
    }
    m
}
