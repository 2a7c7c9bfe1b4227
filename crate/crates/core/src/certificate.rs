//! Explicit ε-interleavings between grid modules.
//!
//! A certificate stores `φ(r): F(r) → G(r+ε)` and `ψ(r): G(r) → F(r+ε)` at
//! the points `r` of a grid whose critical values contain those of `F` and
//! `G` together with their shifts by `-ε` and `-2ε`. On such a grid the
//! spaces `F(r)`, `G(r+ε)`, `F(r+2ε)` and so on are constant on every cell,
//! so checking naturality between consecutive grid points and the two
//! triangle identities at every grid point checks them for all reals.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::decomposition::{interval_basis, realize_endpoints};
use crate::distance::{interval_interleaving_feasible, vanishes_within};
use crate::bottleneck::find_matching;
use crate::grid::{Grid, GridModule};
use crate::interval::Interval;
use crate::matrix::Matrix;
use crate::scalar::ExtendedRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("ε must be finite and non-negative, got {0}")]
    BadEpsilon(ExtendedRational),
    #[error("the modules are over different fields")]
    FieldMismatch,
    #[error("expected {expected} components per map, got {phi} for φ and {psi} for ψ")]
    ComponentCount {
        expected: usize,
        phi: usize,
        psi: usize,
    },
    #[error("{map} at grid point {index} has shape {shape:?}, expected {expected:?}")]
    Shape {
        map: &'static str,
        index: usize,
        shape: (usize, usize),
        expected: (usize, usize),
    },
    #[error("the certificate grid lacks the critical value {0}")]
    CoarseGrid(ExtendedRational),
    #[error("cannot promote from ε = {from} down to {to}")]
    Shrinking {
        from: ExtendedRational,
        to: ExtendedRational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterleavingCertificate {
    epsilon: ExtendedRational,
    grid: Grid,
    phi: Vec<Matrix>,
    psi: Vec<Matrix>,
}

/// The critical values a certificate grid must contain.
fn required_critical(f: &GridModule, g: &GridModule, eps: &ExtendedRational) -> BTreeSet<ExtendedRational> {
    let base: Vec<ExtendedRational> = f.grid().critical().into_iter().chain(g.grid().critical()).collect();
    let two = eps.double();
    base.iter()
        .flat_map(|u| [u.clone(), u - eps, u - &two])
        .collect()
}

/// The grid on which certificates between `f` and `g` at `eps` live.
pub fn certificate_grid(f: &GridModule, g: &GridModule, eps: &ExtendedRational) -> Grid {
    Grid::from_critical(&required_critical(f, g, eps))
}

fn check_epsilon(eps: &ExtendedRational) -> Result<(), CertificateError> {
    if eps.is_infinite() || eps.is_negative() {
        return Err(CertificateError::BadEpsilon(eps.clone()));
    }
    Ok(())
}

impl InterleavingCertificate {
    pub fn new(epsilon: ExtendedRational, grid: Grid, phi: Vec<Matrix>, psi: Vec<Matrix>) -> Self {
        Self {
            epsilon,
            grid,
            phi,
            psi,
        }
    }

    /// All components zero; an interleaving whenever every bar of both
    /// modules vanishes within `eps`.
    pub fn zero(f: &GridModule, g: &GridModule, eps: ExtendedRational) -> Result<Self, CertificateError> {
        check_epsilon(&eps)?;
        let grid = certificate_grid(f, g, &eps);
        let field = f.field();
        let phi = grid
            .values()
            .iter()
            .map(|r| Matrix::zeros(field, g.evaluate(&(r + &eps)), f.evaluate(r)))
            .collect();
        let psi = grid
            .values()
            .iter()
            .map(|r| Matrix::zeros(field, f.evaluate(&(r + &eps)), g.evaluate(r)))
            .collect();
        Ok(Self::new(eps, grid, phi, psi))
    }

    pub fn epsilon(&self) -> &ExtendedRational {
        &self.epsilon
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn phi(&self) -> &[Matrix] {
        &self.phi
    }

    pub fn psi(&self) -> &[Matrix] {
        &self.psi
    }

    pub fn phi_mut(&mut self) -> &mut [Matrix] {
        &mut self.phi
    }

    pub fn psi_mut(&mut self) -> &mut [Matrix] {
        &mut self.psi
    }

    /// Checks everything except the commutation identities.
    pub fn check_shape(&self, f: &GridModule, g: &GridModule) -> Result<(), CertificateError> {
        check_epsilon(&self.epsilon)?;
        if f.field() != g.field()
            || self.phi.iter().chain(&self.psi).any(|m| m.field() != f.field())
        {
            return Err(CertificateError::FieldMismatch);
        }
        let n = self.grid.len();
        if self.phi.len() != n || self.psi.len() != n {
            return Err(CertificateError::ComponentCount {
                expected: n,
                phi: self.phi.len(),
                psi: self.psi.len(),
            });
        }
        let have: BTreeSet<ExtendedRational> = self.grid.critical().into_iter().collect();
        if let Some(missing) = required_critical(f, g, &self.epsilon).into_iter().find(|c| !have.contains(c)) {
            return Err(CertificateError::CoarseGrid(missing));
        }
        let eps = &self.epsilon;
        for (k, r) in self.grid.values().iter().enumerate() {
            let shifted = r + eps;
            for (map, m, expected) in [
                ("φ", &self.phi[k], (g.evaluate(&shifted), f.evaluate(r))),
                ("ψ", &self.psi[k], (f.evaluate(&shifted), g.evaluate(r))),
            ] {
                if m.shape() != expected {
                    return Err(CertificateError::Shape {
                        map,
                        index: k,
                        shape: m.shape(),
                        expected,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Whether `c` is an ε-interleaving of `f` and `g`: `φ` and `ψ` are natural
/// and `ψ(r+ε)φ(r)`, `φ(r+ε)ψ(r)` are the internal `2ε` maps.
pub fn verify_certificate(
    c: &InterleavingCertificate,
    f: &GridModule,
    g: &GridModule,
) -> Result<bool, CertificateError> {
    c.check_shape(f, g)?;
    let eps = &c.epsilon;
    let two = eps.double();
    let pts = c.grid.values();
    for (maps, src, dst) in [(&c.phi, f, g), (&c.psi, g, f)] {
        for k in 0..pts.len() - 1 {
            let (r, s) = (&pts[k], &pts[k + 1]);
            let left = dst.map_between(&(r + eps), &(s + eps)).mul(&maps[k]).expect("shapes");
            let right = maps[k + 1].mul(&src.map_between(r, s)).expect("shapes");
            if left != right {
                return Ok(false);
            }
        }
    }
    for (first, second, module) in [(&c.phi, &c.psi, f), (&c.psi, &c.phi, g)] {
        for (k, r) in pts.iter().enumerate() {
            let j = c.grid.locate(&(r + eps));
            let composite = second[j].mul(&first[k]).expect("shapes");
            if composite != module.map_between(r, &(r + &two)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Builds an ε-interleaving from interval bases of both modules and a
/// matching of their bars in which every pair is ε-interleaved and every
/// unmatched bar vanishes within ε. Returns `None` when no such matching
/// exists or `eps` is infinite.
pub fn construct_certificate(
    f: &GridModule,
    g: &GridModule,
    eps: &ExtendedRational,
) -> Option<InterleavingCertificate> {
    if eps.is_infinite() || eps.is_negative() || f.field() != g.field() {
        return None;
    }
    let fb = interval_basis(f);
    let gb = interval_basis(g);
    let fi: Vec<Interval> = fb.bars().iter().map(|&b| realize_endpoints(b, f.grid())).collect();
    let gi: Vec<Interval> = gb.bars().iter().map(|&b| realize_endpoints(b, g.grid())).collect();
    let matching = find_matching(
        fi.len(),
        gi.len(),
        |i, j| interval_interleaving_feasible(&fi[i], &gi[j], eps),
        |i| vanishes_within(&fi[i], eps),
        |j| vanishes_within(&gi[j], eps),
    )?;
    let mut f_partner = vec![None; fi.len()];
    let mut g_partner = vec![None; gi.len()];
    for &(i, j) in &matching.pairs {
        let active = !(fi[i].shrink(eps).is_empty() && gi[j].shrink(eps).is_empty());
        if active {
            f_partner[i] = Some(j);
            g_partner[j] = Some(i);
        }
    }

    let grid = certificate_grid(f, g, eps);
    let field = f.field();
    let assemble = |src: &GridModule,
                    dst: &GridModule,
                    src_basis: &crate::decomposition::IntervalBasis,
                    dst_basis: &crate::decomposition::IntervalBasis,
                    partner: &[Option<usize>]| {
        grid.values()
            .iter()
            .map(|r| {
                let i = src.grid().locate(r);
                let j = dst.grid().locate(&(r + eps));
                let src_alive = src_basis.alive(i);
                let dst_alive = dst_basis.alive(j);
                let mut s = Matrix::zeros(field, dst_alive.len(), src_alive.len());
                for (col, bar) in src_alive.iter().enumerate() {
                    if let Some(p) = partner[*bar] {
                        if let Some(row) = dst_alive.iter().position(|&x| x == p) {
                            s.set(row, col, 1);
                        }
                    }
                }
                let v_inv = src_basis.basis(i).inverse().expect("basis is invertible");
                dst_basis
                    .basis(j)
                    .mul(&s)
                    .and_then(|m| m.mul(&v_inv))
                    .expect("shapes")
            })
            .collect::<Vec<Matrix>>()
    };
    let phi = assemble(f, g, &fb, &gb, &f_partner);
    let psi = assemble(g, f, &gb, &fb, &g_partner);
    Some(InterleavingCertificate::new(eps.clone(), grid, phi, psi))
}

/// Turns an ε-interleaving into an ε′-interleaving for `ε′ ≥ ε` by
/// following each component with the target's `ε′ - ε` structure map.
pub fn promote_certificate(
    c: &InterleavingCertificate,
    f: &GridModule,
    g: &GridModule,
    eps2: &ExtendedRational,
) -> Result<InterleavingCertificate, CertificateError> {
    c.check_shape(f, g)?;
    check_epsilon(eps2)?;
    let eps = &c.epsilon;
    if eps2 < eps {
        return Err(CertificateError::Shrinking {
            from: eps.clone(),
            to: eps2.clone(),
        });
    }
    let grid = certificate_grid(f, g, eps2);
    let lift = |maps: &[Matrix], dst: &GridModule| -> Vec<Matrix> {
        grid.values()
            .iter()
            .map(|r| {
                let old = &maps[c.grid.locate(r)];
                dst.map_between(&(r + eps), &(r + eps2)).mul(old).expect("shapes")
            })
            .collect()
    };
    let phi = lift(&c.phi, g);
    let psi = lift(&c.psi, f);
    Ok(InterleavingCertificate::new(eps2.clone(), grid, phi, psi))
}

impl fmt::Display for InterleavingCertificate {
    /// Plain-text dump: ε, the grid, then every component row by row.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "epsilon {}", self.epsilon)?;
        let pts: Vec<String> = self.grid.values().iter().map(|v| v.to_string()).collect();
        writeln!(f, "grid {}", pts.join(" "))?;
        for (name, maps) in [("phi", &self.phi), ("psi", &self.psi)] {
            for (k, m) in maps.iter().enumerate() {
                writeln!(f, "{name} {k} {}x{}", m.rows(), m.cols())?;
                for r in 0..m.rows() {
                    let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
                    writeln!(f, "  {}", row.join(" "))?;
                }
            }
        }
        Ok(())
    }
}
