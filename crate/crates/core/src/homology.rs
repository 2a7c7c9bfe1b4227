//! Simplicial homology of pairs with prime-field coefficients, induced maps,
//! and the persistence modules of filtrations.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::complex::{facets, oriented_chain_map, Simplex, SimplicialComplex, SimplicialMap};
use crate::field::PrimeField;
use crate::filtration::{find_incompatibility, FilteredComplex, FiltrationError, PairFiltration};
use crate::grid::{Grid, GridModule};
use crate::matrix::Matrix;
use crate::morphism::GridMorphism;
use crate::scalar::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("a chain map sent a cycle in degree {0} outside the cycles of its target")]
    NotAChainMap(usize),
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

/// The relative chain groups `C_k(X, A)`: simplices of `X` not in `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelativeChains {
    cells: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl RelativeChains {
    /// Panics unless `relative` is a subcomplex of `space`.
    pub fn new(space: &SimplicialComplex, relative: &SimplicialComplex) -> Self {
        assert!(relative.is_subcomplex_of(space), "relative part must be a subcomplex");
        let top = space.dimension().map_or(0, |d| d + 1);
        let cells: Vec<Vec<Simplex>> = (0..top)
            .map(|k| {
                space
                    .simplices(k)
                    .iter()
                    .filter(|s| !relative.contains(s))
                    .cloned()
                    .collect()
            })
            .collect();
        let index = cells
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Self { cells, index }
    }

    pub fn absolute(space: &SimplicialComplex) -> Self {
        Self::new(space, &SimplicialComplex::empty())
    }

    pub fn cells(&self, k: usize) -> &[Simplex] {
        self.cells.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.cells(k).len()
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        self.index.get(k)?.get(s).copied()
    }

    /// `∂_k: C_k → C_{k-1}` with `∂[v_0..v_k] = Σ (-1)^i [v_0..v̂_i..v_k]`;
    /// faces in the relative part are dropped.
    pub fn boundary(&self, k: usize, field: PrimeField) -> Matrix {
        let rows = if k == 0 { 0 } else { self.rank(k - 1) };
        let mut m = Matrix::zeros(field, rows, self.rank(k));
        if k == 0 {
            return m;
        }
        for (j, s) in self.cells(k).iter().enumerate() {
            for (i, face) in facets(s).enumerate() {
                if let Some(r) = self.index_of(&face) {
                    m.set(r, j, field.reduce(if i % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        m
    }
}

/// A basis of `H_k`: cycle representatives and a basis of the boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyStage {
    pub degree: usize,
    pub cycles: Matrix,
    pub boundaries: Matrix,
}

impl HomologyStage {
    pub fn dimension(&self) -> usize {
        self.cycles.cols()
    }
}

/// Cycle representatives are the kernel basis vectors that are pivots of
/// `[boundaries | kernel]`.
pub fn homology_basis(chains: &RelativeChains, degree: usize, field: PrimeField) -> HomologyStage {
    let kernel = chains.boundary(degree, field).kernel_basis();
    let boundaries = chains.boundary(degree + 1, field).column_basis();
    let stacked = boundaries.hstack(&kernel).expect("same chain group");
    let (_, pivots) = stacked.rref();
    let b = boundaries.cols();
    let chosen: Vec<usize> = pivots.iter().filter(|&&p| p >= b).map(|&p| p - b).collect();
    HomologyStage {
        degree,
        cycles: kernel.select_columns(&chosen),
        boundaries,
    }
}

/// The map on homology induced by `chain_map`, in the chosen bases.
pub fn induced_map(
    src: &HomologyStage,
    dst: &HomologyStage,
    chain_map: &Matrix,
) -> Result<Matrix, HomologyError> {
    let images = chain_map.mul(&src.cycles).expect("chain map matches the source");
    let basis = dst.cycles.hstack(&dst.boundaries).expect("same chain group");
    let coords = basis
        .solve(&images)
        .expect("chain map matches the target")
        .ok_or(HomologyError::NotAChainMap(src.degree))?;
    let rows: Vec<usize> = (0..dst.dimension()).collect();
    Ok(coords.select_rows(&rows))
}

/// Chain map of the inclusion `(X, A) ⊆ (X', A')` in degree `k`.
pub fn inclusion_chain_map(src: &RelativeChains, dst: &RelativeChains, k: usize, field: PrimeField) -> Matrix {
    oriented_chain_map(src.cells(k), |s| dst.index_of(s), dst.rank(k), |v| v, field)
}

/// Chain map of a simplicial map between relative chain groups.
pub fn simplicial_chain_map(
    h: &SimplicialMap,
    src: &RelativeChains,
    dst: &RelativeChains,
    k: usize,
    field: PrimeField,
) -> Matrix {
    oriented_chain_map(src.cells(k), |s| dst.index_of(s), dst.rank(k), |v| h.vertex(v), field)
}

/// `H_k` of a sequence of nested pairs sampled on `grid`.
pub fn module_of_pairs(
    stages: &[(SimplicialComplex, SimplicialComplex)],
    grid: Grid,
    degree: usize,
    field: PrimeField,
) -> Result<GridModule, HomologyError> {
    let chains: Vec<RelativeChains> = stages.iter().map(|(x, a)| RelativeChains::new(x, a)).collect();
    let homology: Vec<HomologyStage> = chains.iter().map(|c| homology_basis(c, degree, field)).collect();
    let transitions = (0..chains.len().saturating_sub(1))
        .map(|i| {
            let chain = inclusion_chain_map(&chains[i], &chains[i + 1], degree, field);
            induced_map(&homology[i], &homology[i + 1], &chain)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dims = homology.iter().map(HomologyStage::dimension).collect();
    Ok(GridModule::new(field, grid, dims, transitions).expect("stages chain"))
}

/// `H_k` of the sublevel filtration, on the grid of its critical values.
pub fn persistence_module(
    fc: &FilteredComplex,
    degree: usize,
    field: PrimeField,
) -> Result<GridModule, HomologyError> {
    let grid = Grid::from_critical(fc.critical_values());
    persistence_module_on(fc, grid, degree, field)
}

/// `H_k` of the sublevel filtration sampled on a given grid.
pub fn persistence_module_on(
    fc: &FilteredComplex,
    grid: Grid,
    degree: usize,
    field: PrimeField,
) -> Result<GridModule, HomologyError> {
    let empty = SimplicialComplex::empty();
    let stages: Vec<_> = grid
        .values()
        .iter()
        .map(|v| (fc.sublevel_complex(v), empty.clone()))
        .collect();
    module_of_pairs(&stages, grid, degree, field)
}

/// Relative homology `H_k` of the extended filtration.
pub fn extended_module(
    pf: &PairFiltration,
    degree: usize,
    field: PrimeField,
) -> Result<GridModule, HomologyError> {
    let grid = Grid::from_critical(pf.critical_values());
    let stages: Vec<_> = grid
        .values()
        .iter()
        .map(|v| {
            let st = pf.stage(v);
            (st.space, st.relative)
        })
        .collect();
    module_of_pairs(&stages, grid, degree, field)
}

/// The morphism `H_k(G) → H_k(F)` induced by `h: Y → X`, where `source`
/// filters `Y` and `target` filters `X`, on the grid of both critical sets.
pub fn morphism_module(
    h: &SimplicialMap,
    target: &FilteredComplex,
    source: &FilteredComplex,
    degree: usize,
    field: PrimeField,
) -> Result<GridMorphism, HomologyError> {
    if let Some(s) = find_incompatibility(h, target, source) {
        return Err(FiltrationError::Incompatible(s).into());
    }
    let crit: BTreeSet<&ExtendedRational> = target
        .critical_values()
        .iter()
        .chain(source.critical_values())
        .collect();
    let grid = Grid::from_critical(crit);
    let mut src_stages = Vec::new();
    let mut dst_stages = Vec::new();
    let mut components = Vec::new();
    for v in grid.values() {
        let y = RelativeChains::absolute(&source.sublevel_complex(v));
        let x = RelativeChains::absolute(&target.sublevel_complex(v));
        let hy = homology_basis(&y, degree, field);
        let hx = homology_basis(&x, degree, field);
        let chain = simplicial_chain_map(h, &y, &x, degree, field);
        components.push(induced_map(&hy, &hx, &chain)?);
        src_stages.push((y, hy));
        dst_stages.push((x, hx));
    }
    let assemble = |stages: &[(RelativeChains, HomologyStage)]| -> Result<GridModule, HomologyError> {
        let transitions = stages
            .windows(2)
            .map(|w| {
                let chain = inclusion_chain_map(&w[0].0, &w[1].0, degree, field);
                induced_map(&w[0].1, &w[1].1, &chain)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let dims = stages.iter().map(|(_, s)| s.dimension()).collect();
        Ok(GridModule::new(field, grid.clone(), dims, transitions).expect("stages chain"))
    };
    let src = assemble(&src_stages)?;
    let dst = assemble(&dst_stages)?;
    Ok(GridMorphism::new(src, dst, components).expect("induced maps are natural"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::Barcode;
    use crate::decomposition::decompose;
    use crate::interval::Interval;
    use std::collections::BTreeMap;

    fn q(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    fn f2() -> PrimeField {
        PrimeField::gf2()
    }

    fn circle() -> SimplicialComplex {
        SimplicialComplex::closure([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    fn lower_star(k: SimplicialComplex, vals: &[&str]) -> FilteredComplex {
        let values = vals.iter().enumerate().map(|(i, v)| (i, q(v))).collect();
        FilteredComplex::lower_star(k, values).unwrap()
    }

    #[test]
    fn small_homology_groups() {
        let pt = SimplicialComplex::closure([vec![0]]).unwrap();
        assert_eq!(homology_basis(&RelativeChains::absolute(&pt), 0, f2()).dimension(), 1);
        let empty = SimplicialComplex::empty();
        for k in 0..3 {
            assert_eq!(homology_basis(&RelativeChains::absolute(&empty), k, f2()).dimension(), 0);
        }
        let c = RelativeChains::absolute(&circle());
        for p in [2, 3, 5] {
            let field = PrimeField::new(p).unwrap();
            assert_eq!(homology_basis(&c, 0, field).dimension(), 1);
            assert_eq!(homology_basis(&c, 1, field).dimension(), 1);
        }
        let disk = SimplicialComplex::closure([vec![0, 1, 2]]).unwrap();
        let rel = RelativeChains::new(&disk, &circle());
        assert_eq!(homology_basis(&rel, 2, f2()).dimension(), 1);
        assert_eq!(homology_basis(&rel, 1, f2()).dimension(), 0);
    }

    #[test]
    fn two_points_merging() {
        let two = SimplicialComplex::closure([vec![0], vec![1]]).unwrap();
        let edge = SimplicialComplex::closure([vec![0, 1]]).unwrap();
        let (a, b) = (RelativeChains::absolute(&two), RelativeChains::absolute(&edge));
        let (ha, hb) = (homology_basis(&a, 0, f2()), homology_basis(&b, 0, f2()));
        let m = induced_map(&ha, &hb, &inclusion_chain_map(&a, &b, 0, f2())).unwrap();
        assert_eq!(m.shape(), (1, 2));
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn filling_a_circle_kills_its_class() {
        let disk = SimplicialComplex::closure([vec![0, 1, 2]]).unwrap();
        let (a, b) = (RelativeChains::absolute(&circle()), RelativeChains::absolute(&disk));
        let (ha, hb) = (homology_basis(&a, 1, f2()), homology_basis(&b, 1, f2()));
        let m = induced_map(&ha, &hb, &inclusion_chain_map(&a, &b, 1, f2())).unwrap();
        assert!(m.is_zero());
        let id = induced_map(&ha, &ha, &inclusion_chain_map(&a, &a, 1, f2())).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn modules_of_small_filtrations() {
        let pt = lower_star(SimplicialComplex::closure([vec![0]]).unwrap(), &["0"]);
        let m = persistence_module(&pt, 0, f2()).unwrap();
        let ray = Barcode::from_bars(0, [Interval::closed_open(q("0"), q("inf"))]);
        assert_eq!(decompose(&m, 0), ray);

        let ring = lower_star(circle(), &["0", "0", "0"]);
        let m = persistence_module(&ring, 1, f2()).unwrap();
        assert_eq!(decompose(&m, 1), Barcode::from_bars(1, [Interval::closed_open(q("0"), q("inf"))]));

        let edge = lower_star(SimplicialComplex::closure([vec![0, 1]]).unwrap(), &["0", "1"]);
        let m = persistence_module(&edge, 0, f2()).unwrap();
        assert_eq!(decompose(&m, 0), ray);
    }

    #[test]
    fn extended_module_of_a_point() {
        let pt = lower_star(SimplicialComplex::closure([vec![0]]).unwrap(), &["0"]);
        let pf = pt.build_extended(q("1")).unwrap();
        let m = extended_module(&pf, 0, f2()).unwrap();
        assert_eq!(
            decompose(&m, 0),
            Barcode::from_bars(0, [Interval::closed_open(q("0"), q("1"))])
        );
        assert_eq!(*m.dims().last().unwrap(), 0);
    }

    #[test]
    fn extended_module_of_a_circle_kills_everything() {
        let ring = lower_star(circle(), &["0", "1", "2"]);
        let pf = ring.build_extended(q("1")).unwrap();
        for k in 0..3 {
            let m = extended_module(&pf, k, PrimeField::new(3).unwrap()).unwrap();
            assert_eq!(*m.dims().last().unwrap(), 0);
            assert!(decompose(&m, k).iter().all(|(_, i, _)| i.hi().unwrap().is_finite()));
        }
    }

    #[test]
    fn collapse_of_two_points() {
        let y = lower_star(SimplicialComplex::closure([vec![0], vec![1]]).unwrap(), &["0", "0"]);
        let x = lower_star(SimplicialComplex::closure([vec![0]]).unwrap(), &["0"]);
        let h = SimplicialMap::new(
            y.complex().clone(),
            x.complex().clone(),
            BTreeMap::from([(0, 0), (1, 0)]),
        )
        .unwrap();
        let alpha = morphism_module(&h, &x, &y, 0, f2()).unwrap();
        assert!(alpha.components().iter().all(|c| c.rank() == c.rows()));
        assert!(alpha.cokernel().is_zero());
        let ker = decompose(&alpha.kernel(), 0);
        assert_eq!(ker, Barcode::from_bars(0, [Interval::closed_open(q("0"), q("inf"))]));
    }

    #[test]
    fn incompatible_filtrations_name_the_simplex() {
        let x = lower_star(SimplicialComplex::closure([vec![0]]).unwrap(), &["1"]);
        let y = lower_star(SimplicialComplex::closure([vec![0]]).unwrap(), &["0"]);
        let h = SimplicialMap::identity(x.complex().clone());
        let err = morphism_module(&h, &x, &y, 0, f2()).unwrap_err();
        assert_eq!(err, HomologyError::Filtration(FiltrationError::Incompatible(vec![0])));
    }
}
