//! Random complexes, filtrations, maps, intervals and modules for tests and
//! experiments. Values are multiples of `1/4` to keep arithmetic small.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::barcode::Barcode;
use crate::complex::{Simplex, SimplicialComplex, SimplicialMap};
use crate::field::PrimeField;
use crate::grid::{Grid, GridModule};
use crate::interval::Interval;
use crate::matrix::Matrix;
use crate::scalar::ExtendedRational;

/// `k/4` for `k` uniform in `lo..=hi`.
pub fn quarter<R: Rng>(rng: &mut R, lo: i64, hi: i64) -> ExtendedRational {
    ExtendedRational::ratio(rng.gen_range(lo..=hi), 4)
}

/// The clique complex of a graph on `vertices` vertices truncated at `max_dim`.
pub fn flag_complex(vertices: usize, edges: &[(usize, usize)], max_dim: usize) -> SimplicialComplex {
    let mut adjacent = vec![vec![false; vertices]; vertices];
    for &(a, b) in edges {
        adjacent[a][b] = true;
        adjacent[b][a] = true;
    }
    let mut all: Vec<Simplex> = Vec::new();
    let mut layer: Vec<Simplex> = (0..vertices).map(|v| vec![v]).collect();
    for _ in 0..=max_dim {
        if layer.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for s in &layer {
            let last = *s.last().expect("non-empty");
            for v in last + 1..vertices {
                if s.iter().all(|&u| adjacent[u][v]) {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
        }
        all.append(&mut layer);
        layer = next;
    }
    SimplicialComplex::new(all).expect("flag complexes are closed")
}

/// A random flag complex on `1..=max_vertices` vertices, edges present with
/// a random density.
pub fn random_complex<R: Rng>(rng: &mut R, max_vertices: usize, max_dim: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_vertices.max(1));
    let density: f64 = rng.gen_range(0.2..0.9);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    flag_complex(n, &edges, max_dim)
}

/// Vertex values `k/4` with `k ∈ [-8, 8]`.
pub fn random_vertex_values<R: Rng>(rng: &mut R, complex: &SimplicialComplex) -> BTreeMap<usize, ExtendedRational> {
    complex.vertices().into_iter().map(|v| (v, quarter(rng, -8, 8))).collect()
}

/// Adds to each value a perturbation `k/4`, `|k| ≤ spread`, to a random
/// subset of the vertices.
pub fn perturb<R: Rng>(
    rng: &mut R,
    values: &BTreeMap<usize, ExtendedRational>,
    spread: i64,
) -> BTreeMap<usize, ExtendedRational> {
    let p: f64 = rng.gen_range(0.0..=1.0);
    values
        .iter()
        .map(|(&v, x)| {
            let y = if rng.gen_bool(p) {
                x + &quarter(rng, -spread, spread)
            } else {
                x.clone()
            };
            (v, y)
        })
        .collect()
}

/// A complex `Y` with a simplicial map `h: Y → X`. Each vertex of `Y`
/// picks an image; `y, y'` may be joined only when their images coincide
/// or span an edge of `X`, so the flag complex on `Y` maps into `X`.
pub fn random_map_into<R: Rng>(
    rng: &mut R,
    target: &SimplicialComplex,
    max_vertices: usize,
    max_dim: usize,
) -> SimplicialMap {
    let xs = target.vertices();
    assert!(!xs.is_empty(), "target must have a vertex");
    let n = rng.gen_range(1..=max_vertices.max(1));
    let image: Vec<usize> = (0..n).map(|_| *xs.choose(rng).expect("non-empty")).collect();
    let density: f64 = rng.gen_range(0.3..1.0);
    let top = target.dimension().unwrap_or(0);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let (u, v) = (image[a].min(image[b]), image[a].max(image[b]));
            let allowed = u == v || target.contains(&[u, v]);
            if allowed && rng.gen_bool(density) {
                edges.push((a, b));
            }
        }
    }
    let source = flag_complex(n, &edges, max_dim.min(top.max(1)));
    let source = source.filter(|s| {
        let mut img: Vec<usize> = s.iter().map(|&y| image[y]).collect();
        img.sort_unstable();
        img.dedup();
        target.contains(&img)
    });
    let assignment = (0..n).map(|y| (y, image[y])).collect();
    SimplicialMap::new(source, target.clone(), assignment).expect("images are simplices")
}

/// A finite endpoint `k/4` with `k ∈ [-12, 12]`.
fn endpoint<R: Rng>(rng: &mut R) -> ExtendedRational {
    quarter(rng, -12, 12)
}

/// A random interval covering every shape: empty, points, bounded with any
/// end types, rays in both directions and the whole line.
pub fn random_interval<R: Rng>(rng: &mut R) -> Interval {
    let a = endpoint(rng);
    let b = endpoint(rng);
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    match rng.gen_range(0..20) {
        0 => Interval::empty(),
        1 => Interval::point(lo),
        2 => Interval::real_line(),
        3..=4 => Interval::new(ExtendedRational::NegInfinity, hi, false, rng.gen_bool(0.5)).unwrap(),
        5..=6 => Interval::new(lo, ExtendedRational::PosInfinity, rng.gen_bool(0.5), false).unwrap(),
        _ => Interval::new(lo, hi, rng.gen_bool(0.5), rng.gen_bool(0.5)).unwrap(),
    }
}

/// A random non-empty interval.
pub fn random_bar<R: Rng>(rng: &mut R) -> Interval {
    loop {
        let i = random_interval(rng);
        if !i.is_empty() {
            return i;
        }
    }
}

/// A barcode in one degree with at most `max_bars` bars.
pub fn random_barcode<R: Rng>(rng: &mut R, max_bars: usize, degree: usize) -> Barcode {
    let n = rng.gen_range(0..=max_bars);
    Barcode::from_bars(degree, (0..n).map(|_| random_bar(rng)))
}

pub fn random_matrix<R: Rng>(rng: &mut R, field: PrimeField, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(field, rows, cols, |_, _| rng.gen_range(0..field.modulus() as i64))
}

pub fn random_invertible<R: Rng>(rng: &mut R, field: PrimeField, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, field, n, n);
        if m.rank() == n {
            return m;
        }
    }
}

/// Arbitrary matrices between spaces of random dimension on the grid
/// around `critical` random critical values.
pub fn random_grid_module<R: Rng>(
    rng: &mut R,
    field: PrimeField,
    critical: usize,
    max_dim: usize,
) -> GridModule {
    let mut crit: Vec<ExtendedRational> = (0..critical).map(|_| endpoint(rng)).collect();
    crit.sort();
    crit.dedup();
    let grid = Grid::from_critical(&crit);
    let dims: Vec<usize> = (0..grid.len()).map(|_| rng.gen_range(0..=max_dim)).collect();
    let transitions = dims
        .windows(2)
        .map(|w| {
            if rng.gen_bool(0.3) {
                random_matrix(rng, field, w[1], w[0])
            } else {
                low_rank(rng, field, w[1], w[0])
            }
        })
        .collect();
    GridModule::new(field, grid, dims, transitions).expect("shapes follow dims")
}

/// A random matrix whose rank is spread over its whole range.
fn low_rank<R: Rng>(rng: &mut R, field: PrimeField, rows: usize, cols: usize) -> Matrix {
    let r = rng.gen_range(0..=rows.min(cols));
    let a = random_matrix(rng, field, rows, r);
    let b = random_matrix(rng, field, r, cols);
    a.mul(&b).expect("inner dimensions agree")
}

/// Random invertible changes of basis for every space of `m`.
pub fn random_bases<R: Rng>(rng: &mut R, m: &GridModule) -> Vec<Matrix> {
    m.dims().iter().map(|&d| random_invertible(rng, m.field(), d)).collect()
}
