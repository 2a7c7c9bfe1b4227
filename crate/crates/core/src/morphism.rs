//! Morphisms of grid modules and their pointwise kernels, images and
//! cokernels.

use thiserror::Error;

use crate::grid::{GridError, GridModule};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MorphismError {
    #[error("source and target live on different grids or fields")]
    GridMismatch,
    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },
    #[error("component {index} has shape {shape:?}, expected {expected:?}")]
    ComponentShape {
        index: usize,
        shape: (usize, usize),
        expected: (usize, usize),
    },
    #[error("the naturality square leaving index {0} does not commute")]
    NotNatural(usize),
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// A natural transformation between two modules on the same grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMorphism {
    source: GridModule,
    target: GridModule,
    components: Vec<Matrix>,
}

impl GridMorphism {
    pub fn new(
        source: GridModule,
        target: GridModule,
        components: Vec<Matrix>,
    ) -> Result<Self, MorphismError> {
        if source.grid() != target.grid() || source.field() != target.field() {
            return Err(MorphismError::GridMismatch);
        }
        let n = source.grid().len();
        if components.len() != n {
            return Err(MorphismError::ComponentCount {
                expected: n,
                got: components.len(),
            });
        }
        for (i, c) in components.iter().enumerate() {
            let expected = (target.dim(i), source.dim(i));
            if c.shape() != expected {
                return Err(MorphismError::ComponentShape {
                    index: i,
                    shape: c.shape(),
                    expected,
                });
            }
        }
        for i in 0..n - 1 {
            let down = components[i + 1].mul(source.transition(i)).expect("shapes");
            let across = target.transition(i).mul(&components[i]).expect("shapes");
            if down != across {
                return Err(MorphismError::NotNatural(i));
            }
        }
        Ok(Self {
            source,
            target,
            components,
        })
    }

    pub fn identity(module: &GridModule) -> Self {
        let components = module
            .dims()
            .iter()
            .map(|&d| Matrix::identity(module.field(), d))
            .collect();
        Self {
            source: module.clone(),
            target: module.clone(),
            components,
        }
    }

    pub fn zero(source: &GridModule, target: &GridModule) -> Result<Self, MorphismError> {
        let components = (0..source.grid().len())
            .map(|i| Matrix::zeros(source.field(), target.dim(i), source.dim(i)))
            .collect();
        Self::new(source.clone(), target.clone(), components)
    }

    pub fn source(&self) -> &GridModule {
        &self.source
    }

    pub fn target(&self) -> &GridModule {
        &self.target
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Matrix {
        &self.components[i]
    }

    /// Spaces `ker α(i)` with transitions restricted from the source.
    pub fn kernel(&self) -> GridModule {
        let bases: Vec<Matrix> = self.components.iter().map(Matrix::kernel_basis).collect();
        induced(&self.source, &bases)
    }

    /// Spaces `im α(i)` with transitions restricted from the target.
    pub fn image(&self) -> GridModule {
        let bases: Vec<Matrix> = self.components.iter().map(Matrix::column_basis).collect();
        induced(&self.target, &bases)
    }

    /// Spaces `coker α(i)`, represented by the standard basis vectors that
    /// are not pivots of `[im α(i) | I]`.
    pub fn cokernel(&self) -> GridModule {
        let field = self.target.field();
        let n = self.target.grid().len();
        let images: Vec<Matrix> = self.components.iter().map(Matrix::column_basis).collect();
        let complements: Vec<Matrix> = (0..n)
            .map(|i| {
                let d = self.target.dim(i);
                let stacked = images[i].hstack(&Matrix::identity(field, d)).expect("rows agree");
                let (_, pivots) = stacked.rref();
                let r = images[i].cols();
                let chosen: Vec<usize> = pivots.iter().filter(|&&p| p >= r).map(|&p| p - r).collect();
                Matrix::identity(field, d).select_columns(&chosen)
            })
            .collect();
        let transitions = (0..n - 1)
            .map(|i| {
                let moved = self.target.transition(i).mul(&complements[i]).expect("shapes");
                let basis = images[i + 1].hstack(&complements[i + 1]).expect("rows agree");
                let coords = basis
                    .solve(&moved)
                    .expect("shapes")
                    .expect("image and complement span the target");
                let r = images[i + 1].cols();
                let rows: Vec<usize> = (r..coords.rows()).collect();
                coords.select_rows(&rows)
            })
            .collect();
        let dims = complements.iter().map(Matrix::cols).collect();
        GridModule::new(field, self.target.grid().clone(), dims, transitions)
            .expect("induced cokernel is well formed")
    }
}

/// The submodule of `ambient` spanned pointwise by the columns of `bases`,
/// which must be preserved by the transitions.
fn induced(ambient: &GridModule, bases: &[Matrix]) -> GridModule {
    let transitions = (0..bases.len() - 1)
        .map(|i| {
            let moved = ambient.transition(i).mul(&bases[i]).expect("shapes");
            bases[i + 1]
                .solve(&moved)
                .expect("shapes")
                .expect("transitions preserve the subspaces")
        })
        .collect();
    let dims = bases.iter().map(Matrix::cols).collect();
    GridModule::new(ambient.field(), ambient.grid().clone(), dims, transitions)
        .expect("induced submodule is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barcode::Barcode;
    use crate::field::PrimeField;
    use crate::interval::Interval;
    use crate::scalar::ExtendedRational;

    fn q(s: &str) -> ExtendedRational {
        s.parse().unwrap()
    }

    fn sample() -> GridModule {
        let bars = [
            Interval::closed(q("0"), q("2")),
            Interval::closed_open(q("1"), q("inf")),
            Interval::open(q("1"), q("3")),
        ];
        GridModule::synthesize(PrimeField::new(3).unwrap(), &Barcode::from_bars(0, bars), 0)
    }

    #[test]
    fn identity_has_trivial_kernel_and_cokernel() {
        let m = sample();
        let id = GridMorphism::identity(&m);
        assert!(id.kernel().is_zero());
        assert!(id.cokernel().is_zero());
        assert_eq!(id.image().dims(), m.dims());
        assert_eq!(id.image().rank_table(), m.rank_table());
    }

    #[test]
    fn zero_morphism_has_full_kernel_and_cokernel() {
        let m = sample();
        let z = GridMorphism::zero(&m, &m).unwrap();
        assert_eq!(z.kernel().rank_table(), m.rank_table());
        assert_eq!(z.cokernel().rank_table(), m.rank_table());
        assert!(z.image().is_zero());
    }

    #[test]
    fn non_natural_components_are_rejected() {
        let f = PrimeField::gf2();
        let bars = [Interval::closed(q("0"), q("1"))];
        let m = GridModule::synthesize(f, &Barcode::from_bars(0, bars), 0);
        let mut comps: Vec<Matrix> = m.dims().iter().map(|&d| Matrix::identity(f, d)).collect();
        comps[2] = Matrix::zeros(f, 1, 1);
        assert!(matches!(
            GridMorphism::new(m.clone(), m, comps),
            Err(MorphismError::NotNatural(_))
        ));
    }
}
