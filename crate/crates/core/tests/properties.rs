use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use persmod::barcode::Barcode;
use persmod::bottleneck::{bottleneck, module_distance};
use persmod::certificate::{construct_certificate, promote_certificate, verify_certificate};
use persmod::complex::SimplicialComplex;
use persmod::decomposition::decompose;
use persmod::distance::{interval_distance, interval_interleaving_feasible};
use persmod::field::PrimeField;
use persmod::filtration::FilteredComplex;
use persmod::format::parse_complex;
use persmod::grid::GridModule;
use persmod::homology::{homology_basis, inclusion_chain_map, induced_map, persistence_module, RelativeChains};
use persmod::matrix::{compose, Matrix};
use persmod::random;
use persmod::scalar::ExtendedRational;

fn field_of(k: u8) -> PrimeField {
    PrimeField::new([2, 3, 5, 7][k as usize % 4]).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn betti(k: &SimplicialComplex, degree: usize, field: PrimeField) -> usize {
    homology_basis(&RelativeChains::absolute(k), degree, field).dimension()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_of_boundary_vanishes(seed: u64, f in 0u8..4) {
        let field = field_of(f);
        let k = random::random_complex(&mut rng(seed), 7, 3);
        for d in 1..=k.dimension().unwrap_or(0) {
            let dd = k.boundary_matrix(d - 1, field).mul(&k.boundary_matrix(d, field)).unwrap();
            prop_assert!(dd.is_zero());
        }
    }

    #[test]
    fn simplicial_maps_commute_with_boundaries(seed: u64, f in 0u8..4) {
        let field = field_of(f);
        let mut r = rng(seed);
        let x = random::random_complex(&mut r, 6, 3);
        let h = random::random_map_into(&mut r, &x, 6, 3);
        let top = h.source().dimension().unwrap_or(0);
        for d in 1..=top {
            let left = x.boundary_matrix(d, field).mul(&h.chain_map(d, field)).unwrap();
            let right = h.chain_map(d - 1, field).mul(&h.source().boundary_matrix(d, field)).unwrap();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn euler_characteristic_matches_cell_counts(seed: u64, f in 0u8..4) {
        let field = field_of(f);
        let k = random::random_complex(&mut rng(seed), 7, 3);
        let top = k.dimension().map_or(0, |d| d + 1);
        let mut by_cells = 0i64;
        let mut by_homology = 0i64;
        for d in 0..top {
            let sign = if d % 2 == 0 { 1 } else { -1 };
            by_cells += sign * k.count(d) as i64;
            by_homology += sign * betti(&k, d, field) as i64;
        }
        prop_assert_eq!(by_cells, by_homology);
    }

    #[test]
    fn persistence_transitions_compose(seed: u64, f in 0u8..4) {
        let field = field_of(f);
        let mut r = rng(seed);
        let k = random::random_complex(&mut r, 6, 2);
        let fc = FilteredComplex::lower_star(k.clone(), random::random_vertex_values(&mut r, &k)).unwrap();
        for degree in 0..=k.dimension().unwrap_or(0) {
            let m = persistence_module(&fc, degree, field).unwrap();
            let n = m.grid().len();
            let (i, j) = (r.gen_range(0..n), r.gen_range(0..n));
            let (i, j) = (i.min(j), i.max(j));
            let (a, b) = (m.grid().value(i), m.grid().value(j));
            let ca = RelativeChains::absolute(&fc.sublevel_complex(a));
            let cb = RelativeChains::absolute(&fc.sublevel_complex(b));
            let direct = induced_map(
                &homology_basis(&ca, degree, field),
                &homology_basis(&cb, degree, field),
                &inclusion_chain_map(&ca, &cb, degree, field),
            )
            .unwrap();
            prop_assert_eq!(m.composite(i, j), direct);
        }
    }

    #[test]
    fn rank_of_a_composite_is_bounded(seed: u64, f in 0u8..4, n in 1usize..6, m in 1usize..6, p in 1usize..6) {
        let field = field_of(f);
        let mut r = rng(seed);
        let a = random::random_matrix(&mut r, field, m, n);
        let b = random::random_matrix(&mut r, field, p, m);
        let c = compose(field, n, &[a.clone(), b.clone()]).unwrap();
        prop_assert_eq!(&c, &b.mul(&a).unwrap());
        prop_assert!(c.rank() <= a.rank().min(b.rank()));
    }

    #[test]
    fn kernels_and_solutions_are_exact(seed: u64, f in 0u8..4, rows in 1usize..6, cols in 1usize..6) {
        let field = field_of(f);
        let mut r = rng(seed);
        let a = random::random_matrix(&mut r, field, rows, cols);
        let k = a.kernel_basis();
        prop_assert_eq!(k.cols(), cols - a.rank());
        prop_assert!(a.mul(&k).unwrap().is_zero());
        prop_assert_eq!(k.rank(), k.cols());
        let b = random::random_matrix(&mut r, field, rows, 2);
        match a.solve(&b).unwrap() {
            Some(x) => prop_assert_eq!(a.mul(&x).unwrap(), b),
            None => prop_assert!(a.hstack(&b).unwrap().rank() > a.rank()),
        }
        if rows == cols {
            if let Some(inv) = a.inverse() {
                prop_assert!(a.mul(&inv).unwrap().is_identity());
            } else {
                prop_assert!(a.rank() < rows);
            }
        }
    }

    #[test]
    fn barcode_csv_round_trips(seed: u64) {
        let mut r = rng(seed);
        let b = random::random_barcode(&mut r, 6, 0).union(&random::random_barcode(&mut r, 6, 2));
        prop_assert_eq!(Barcode::from_csv_str(&b.to_csv_string()).unwrap(), b);
    }

    #[test]
    fn interval_distance_is_symmetric_and_attained_above(seed: u64) {
        let mut r = rng(seed);
        let (i, j) = (random::random_interval(&mut r), random::random_interval(&mut r));
        let d = interval_distance(&i, &j);
        prop_assert_eq!(&d, &interval_distance(&j, &i));
        if let ExtendedRational::Finite(_) = d {
            let above = &d + &ExtendedRational::ratio(1, 64);
            prop_assert!(interval_interleaving_feasible(&i, &j, &above));
            if d.is_positive() {
                let below = &d - &ExtendedRational::ratio(1, 64);
                prop_assert!(!interval_interleaving_feasible(&i, &j, &below));
            }
        }
    }

    #[test]
    fn decomposition_ignores_change_of_basis(seed: u64, f in 0u8..4) {
        let field = field_of(f);
        let mut r = rng(seed);
        let critical = r.gen_range(0..5);
        let m = random::random_grid_module(&mut r, field, critical, 3);
        let bases = random::random_bases(&mut r, &m);
        prop_assert_eq!(decompose(&m.conjugate(&bases), 1), decompose(&m, 1));
    }

    #[test]
    fn promoted_certificates_verify(seed: u64, f in 0u8..2) {
        let field = field_of(f);
        let mut r = rng(seed);
        let (x, y) = (random::random_barcode(&mut r, 4, 0), random::random_barcode(&mut r, 4, 0));
        let (a, b) = (GridModule::synthesize(field, &x, 0), GridModule::synthesize(field, &y, 0));
        let d = module_distance(&a, &b);
        prop_assume!(d.is_finite());
        let eps = &d + &ExtendedRational::ratio(1, 16);
        let c = construct_certificate(&a, &b, &eps).unwrap();
        prop_assert!(verify_certificate(&c, &a, &b).unwrap());
        let p = promote_certificate(&c, &a, &b, &(&eps + &ExtendedRational::from_int(1))).unwrap();
        prop_assert!(verify_certificate(&p, &a, &b).unwrap());
    }

    #[test]
    fn sublevel_stability(seed: u64, f in 0u8..2) {
        let field = field_of(f);
        let mut r = rng(seed);
        let k = random::random_complex(&mut r, 6, 2);
        let fv = random::random_vertex_values(&mut r, &k);
        let gv = random::perturb(&mut r, &fv, 6);
        let a = FilteredComplex::lower_star(k.clone(), fv).unwrap();
        let b = FilteredComplex::lower_star(k.clone(), gv).unwrap();
        let norm = a.sup_distance(&b).unwrap();
        for degree in 0..=k.dimension().unwrap_or(0) {
            let d = module_distance(
                &persistence_module(&a, degree, field).unwrap(),
                &persistence_module(&b, degree, field).unwrap(),
            );
            prop_assert!(d <= norm, "degree {}: {} > {}", degree, d, norm);
        }
    }

    #[test]
    fn written_complexes_parse_back(seed: u64) {
        let mut r = rng(seed);
        let k = random::random_complex(&mut r, 6, 3);
        let values = random::random_vertex_values(&mut r, &k);
        let mut text = String::new();
        for (v, x) in &values {
            text.push_str(&format!("v {v} {x}\n"));
        }
        for s in k.iter().filter(|s| s.len() > 1) {
            let ids: Vec<String> = s.iter().map(usize::to_string).collect();
            text.push_str(&format!("s {}\n", ids.join(" ")));
        }
        let parsed = parse_complex(&text).unwrap();
        let expected = FilteredComplex::lower_star(k, values).unwrap();
        prop_assert_eq!(parsed.complex(), expected.complex());
        prop_assert!(parsed.sup_distance(&expected).unwrap().is_zero());
    }

    #[test]
    fn bottleneck_triangle_inequality(seed: u64) {
        let mut r = rng(seed);
        let [a, b, c] = [0; 3].map(|_| random::random_barcode(&mut r, 4, 0));
        let d = |x: &Barcode, y: &Barcode| bottleneck(x, y, 0).0;
        prop_assert!(d(&a, &c) <= &d(&a, &b) + &d(&b, &c));
    }
}

#[test]
fn identity_matrices_compose_to_identity() {
    let field = PrimeField::new(5).unwrap();
    let id = Matrix::identity(field, 3);
    assert!(compose(field, 3, &[id.clone(), id]).unwrap().is_identity());
    assert!(compose(field, 3, &[]).unwrap().is_identity());
}
