//! Interleaving distance between interval modules.

use crate::interval::{Extent, Interval};
use crate::scalar::ExtendedRational;

/// `d(χ_I, χ_J)` from the endpoints alone; open and closed ends are ignored.
pub fn interval_distance(i: &Interval, j: &Interval) -> ExtendedRational {
    use Extent::*;
    match (i.extent(), j.extent()) {
        (Empty, Empty) => ExtendedRational::zero(),
        (Empty, _) => j.half_length(),
        (_, Empty) => i.half_length(),
        (Bounded, Bounded) => {
            let (a, b) = (i.lo().unwrap(), i.hi().unwrap());
            let (c, d) = (j.lo().unwrap(), j.hi().unwrap());
            let shift = a.abs_diff(c).max_of(b.abs_diff(d));
            let kill = i.half_length().max_of(j.half_length());
            shift.min_of(kill)
        }
        (LowerRay, LowerRay) => i.hi().unwrap().abs_diff(j.hi().unwrap()),
        (UpperRay, UpperRay) => i.lo().unwrap().abs_diff(j.lo().unwrap()),
        (Line, Line) => ExtendedRational::zero(),
        _ => ExtendedRational::PosInfinity,
    }
}

/// Whether a nonzero morphism `χ_from → χ_to` exists: the intervals meet,
/// `to` reaches at least as low as `from`, and `from` reaches at least as
/// high as `to`.
pub fn nonzero_morphism_exists(from: &Interval, to: &Interval) -> bool {
    match (from.lower_end(), from.upper_end(), to.lower_end(), to.upper_end()) {
        (Some(fl), Some(fu), Some(tl), Some(tu)) => {
            !from.intersect(to).is_empty() && tl <= fl && tu <= fu
        }
        _ => false,
    }
}

/// Whether `χ_I` and `χ_J` are `ε`-interleaved, decided exactly.
///
/// Write `I⁻ = {x : [x-ε, x+ε] ⊆ I}`. If both `I⁻` and `J⁻` are empty the
/// zero maps interleave. Otherwise the interleaving maps must be nonzero,
/// hence the identity on the overlap up to scalars, which works iff
/// `I⁻ ⊆ J`, `J⁻ ⊆ I` and both `χ_I → χ_{J-ε}` and `χ_J → χ_{I-ε}` admit
/// nonzero morphisms.
pub fn interval_interleaving_feasible(i: &Interval, j: &Interval, eps: &ExtendedRational) -> bool {
    assert!(!eps.is_negative(), "ε must be non-negative");
    if eps.is_infinite() {
        return true;
    }
    let i_core = i.shrink(eps);
    let j_core = j.shrink(eps);
    if i_core.is_empty() && j_core.is_empty() {
        return true;
    }
    let back = -eps;
    i_core.is_subset_of(j)
        && j_core.is_subset_of(i)
        && nonzero_morphism_exists(i, &j.translate(&back))
        && nonzero_morphism_exists(j, &i.translate(&back))
}

/// Whether an interval may go unmatched at threshold `ε`: `χ_I` is
/// `ε`-interleaved with zero.
pub fn vanishes_within(i: &Interval, eps: &ExtendedRational) -> bool {
    interval_interleaving_feasible(i, &Interval::empty(), eps)
}
