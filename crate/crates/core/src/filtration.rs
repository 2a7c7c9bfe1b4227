//! Filtration functions on simplicial complexes, sublevel complexes, and the
//! pair-valued filtration used for extended persistence.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::complex::{show, ComplexError, Simplex, SimplicialComplex, SimplicialMap};
use crate::scalar::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error("simplex {} has no filtration value", show(.0))]
    MissingValue(Simplex),
    #[error("simplex {} has a non-finite filtration value", show(.0))]
    NotFinite(Simplex),
    #[error("filtration is not monotone: simplex {} has a smaller value than its face {}", show(.simplex), show(.face))]
    NotMonotone { simplex: Simplex, face: Simplex },
    #[error("filtration values given for {} which is not in the complex", show(.0))]
    UnknownSimplex(Simplex),
    #[error("the spacing between the ascending and descending halves must be positive, got {0}")]
    NonPositiveSpacing(ExtendedRational),
    #[error("the bound {bound} is below the largest filtration value {max}")]
    BoundTooSmall {
        bound: ExtendedRational,
        max: ExtendedRational,
    },
    #[error("filtrations are incompatible with the map at simplex {}", show(.0))]
    Incompatible(Simplex),
    #[error("filtrations live on different complexes")]
    DifferentComplexes,
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// A real-valued function on the simplices of a complex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FiltrationFunction {
    /// Values on vertices; a simplex takes the max over its vertices.
    VertexFunction(BTreeMap<usize, ExtendedRational>),
    /// A value for every simplex; must be monotone under inclusion of faces.
    Explicit(BTreeMap<Simplex, ExtendedRational>),
}

impl FiltrationFunction {
    pub fn value_of(&self, s: &[usize]) -> Option<ExtendedRational> {
        match self {
            Self::VertexFunction(values) => s
                .iter()
                .map(|v| values.get(v).cloned())
                .collect::<Option<Vec<_>>>()?
                .into_iter()
                .max(),
            Self::Explicit(values) => values.get(s).cloned(),
        }
    }
}

/// A complex together with a monotone filtration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: SimplicialComplex,
    function: FiltrationFunction,
    values: Vec<Vec<ExtendedRational>>,
    critical: Vec<ExtendedRational>,
}

impl FilteredComplex {
    pub fn new(
        complex: SimplicialComplex,
        function: FiltrationFunction,
    ) -> Result<Self, FiltrationError> {
        if let FiltrationFunction::Explicit(values) = &function {
            if let Some(s) = values.keys().find(|s| !complex.contains(s)) {
                return Err(FiltrationError::UnknownSimplex(s.clone()));
            }
        }
        let mut values = Vec::new();
        for k in 0..=complex.dimension().map_or(0, |d| d + 1) {
            let mut layer = Vec::with_capacity(complex.count(k));
            for s in complex.simplices(k) {
                let v = function
                    .value_of(s)
                    .ok_or_else(|| FiltrationError::MissingValue(s.clone()))?;
                if !v.is_finite() {
                    return Err(FiltrationError::NotFinite(s.clone()));
                }
                layer.push(v);
            }
            if layer.is_empty() {
                break;
            }
            values.push(layer);
        }
        for k in 1..values.len() {
            for (j, s) in complex.simplices(k).iter().enumerate() {
                for face in crate::complex::facets(s) {
                    let i = complex.index_of(&face).expect("closed under faces");
                    if values[k - 1][i] > values[k][j] {
                        return Err(FiltrationError::NotMonotone {
                            simplex: s.clone(),
                            face,
                        });
                    }
                }
            }
        }
        let critical: BTreeSet<ExtendedRational> = values.iter().flatten().cloned().collect();
        Ok(Self {
            complex,
            function,
            values,
            critical: critical.into_iter().collect(),
        })
    }

    /// Lower-star filtration of a vertex function.
    pub fn lower_star(
        complex: SimplicialComplex,
        vertex_values: BTreeMap<usize, ExtendedRational>,
    ) -> Result<Self, FiltrationError> {
        Self::new(complex, FiltrationFunction::VertexFunction(vertex_values))
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn function(&self) -> &FiltrationFunction {
        &self.function
    }

    pub fn value(&self, s: &[usize]) -> Option<&ExtendedRational> {
        let k = s.len().checked_sub(1)?;
        let i = self.complex.index_of(s)?;
        Some(&self.values[k][i])
    }

    /// Sorted distinct values attained by simplices.
    pub fn critical_values(&self) -> &[ExtendedRational] {
        &self.critical
    }

    pub fn max_value(&self) -> Option<&ExtendedRational> {
        self.critical.last()
    }

    pub fn min_value(&self) -> Option<&ExtendedRational> {
        self.critical.first()
    }

    /// `{σ : value(σ) ≤ a}`.
    pub fn sublevel_complex(&self, a: &ExtendedRational) -> SimplicialComplex {
        self.complex.filter(|s| self.value(s).expect("simplex of complex") <= a)
    }

    /// The largest subcomplex on which the function is at least `t`: the
    /// simplices all of whose vertices have value `≥ t`.
    pub fn superlevel_complex(&self, t: &ExtendedRational) -> SimplicialComplex {
        self.complex.filter(|s| {
            s.iter()
                .all(|&v| self.value(&[v]).expect("vertex of complex") >= t)
        })
    }

    /// `sup |f(σ) - g(σ)|` over all simplices; zero on the empty complex.
    pub fn sup_distance(&self, other: &Self) -> Result<ExtendedRational, FiltrationError> {
        if self.complex != other.complex {
            return Err(FiltrationError::DifferentComplexes);
        }
        Ok(self
            .values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| a.abs_diff(b))
            .max()
            .unwrap_or_else(ExtendedRational::zero))
    }

    /// The extended filtration with `M` the maximum value of the function.
    pub fn build_extended(&self, spacing: ExtendedRational) -> Result<PairFiltration, FiltrationError> {
        let bound = self
            .max_value()
            .cloned()
            .unwrap_or_else(ExtendedRational::zero);
        self.build_extended_with_bound(bound, spacing)
    }

    /// The extended filtration for an explicit upper bound `M` of the
    /// function. Two functions compared for stability must share `M`.
    pub fn build_extended_with_bound(
        &self,
        bound: ExtendedRational,
        spacing: ExtendedRational,
    ) -> Result<PairFiltration, FiltrationError> {
        if !spacing.is_positive() || !spacing.is_finite() {
            return Err(FiltrationError::NonPositiveSpacing(spacing));
        }
        if let Some(max) = self.max_value() {
            if !bound.is_finite() || &bound < max {
                return Err(FiltrationError::BoundTooSmall {
                    bound,
                    max: max.clone(),
                });
            }
        }
        let turn = &bound.double() + &spacing;
        let mut critical: BTreeSet<ExtendedRational> = self.critical.iter().cloned().collect();
        for v in &self.critical {
            critical.insert(&turn - v);
        }
        Ok(PairFiltration {
            base: self.clone(),
            bound,
            spacing,
            critical: critical.into_iter().collect(),
        })
    }
}

/// `true` iff `f(h(σ)) ≤ g(σ)` for every simplex σ of the source, where `f`
/// filters the target of `h` and `g` its source.
pub fn check_map_compatibility(
    h: &SimplicialMap,
    target: &FilteredComplex,
    source: &FilteredComplex,
) -> bool {
    find_incompatibility(h, target, source).is_none()
}

/// The first source simplex violating `f(h(σ)) ≤ g(σ)`, if any.
pub fn find_incompatibility(
    h: &SimplicialMap,
    target: &FilteredComplex,
    source: &FilteredComplex,
) -> Option<Simplex> {
    h.source()
        .iter()
        .find(|s| {
            let fv = target.value(&h.image(s)).expect("image is a target simplex");
            let gv = source.value(s).expect("source simplex is filtered");
            fv > gv
        })
        .cloned()
}

/// A stage of the extended filtration: a complex and a subcomplex of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairStage {
    pub space: SimplicialComplex,
    pub relative: SimplicialComplex,
}

/// Pairs `(f⁻¹(-∞,c], ∅)` for `c < M+s` and `(X, f⁻¹[2M+s-c, ∞))` from
/// `M+s` on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairFiltration {
    base: FilteredComplex,
    bound: ExtendedRational,
    spacing: ExtendedRational,
    critical: Vec<ExtendedRational>,
}

impl PairFiltration {
    pub fn total(&self) -> &SimplicialComplex {
        self.base.complex()
    }

    pub fn base(&self) -> &FilteredComplex {
        &self.base
    }

    pub fn bound(&self) -> &ExtendedRational {
        &self.bound
    }

    pub fn spacing(&self) -> &ExtendedRational {
        &self.spacing
    }

    /// Every value at which some stage changes: the ascending values and
    /// their reflections `2M+s-v`.
    pub fn critical_values(&self) -> &[ExtendedRational] {
        &self.critical
    }

    pub fn stage(&self, c: &ExtendedRational) -> PairStage {
        let turn = &self.bound.double() + &self.spacing;
        let switch = &self.bound + &self.spacing;
        if c < &switch {
            PairStage {
                space: self.base.sublevel_complex(c),
                relative: SimplicialComplex::empty(),
            }
        } else {
            PairStage {
                space: self.base.complex().clone(),
                relative: self.base.superlevel_complex(&(&turn - c)),
            }
        }
    }
}
