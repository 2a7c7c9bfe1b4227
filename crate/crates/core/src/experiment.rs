//! Randomized checks of the stability theorems.
//!
//! Every trial draws a random flag complex with two nearby vertex functions
//! and compares barcode distances with the sup-norm distance of the
//! functions:
//!
//! * `ordinary`: `d(H_k f, H_k g) ≤ ‖f - g‖` for sublevel persistence;
//! * `extended`: the same for extended persistence with a shared bound `M`,
//!   where additionally every bar must be finite;
//! * `kic`: for a map `h: Y → X` and pairs `(f, g)`, `(f', g')` with
//!   `f∘h ≤ g`, `f'∘h ≤ g'`, the kernels, images and cokernels of the
//!   induced morphisms are within `max(‖f - f'‖, ‖g - g'‖)`; rank–nullity
//!   must hold at every grid index.
//!
//! Trials are independent (trial `i` uses stream `i` of a ChaCha8 generator
//! seeded with the experiment seed) and run in parallel.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bottleneck::module_distance;
use crate::complex::SimplicialComplex;
use crate::decomposition::decompose;
use crate::field::PrimeField;
use crate::filtration::FilteredComplex;
use crate::homology::{extended_module, morphism_module, persistence_module};
use crate::morphism::GridMorphism;
use crate::random;
use crate::scalar::ExtendedRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ordinary,
    Extended,
    Kic,
}

impl FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ordinary" => Ok(Self::Ordinary),
            "extended" => Ok(Self::Extended),
            "kic" => Ok(Self::Kic),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ordinary => "ordinary",
            Self::Extended => "extended",
            Self::Kic => "kic",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub trials: usize,
    pub seed: u64,
    pub max_vertices: usize,
    pub max_dim: usize,
    pub field: PrimeField,
    pub spacing: ExtendedRational,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Ordinary,
            trials: 200,
            seed: 42,
            max_vertices: 8,
            max_dim: 3,
            field: PrimeField::gf2(),
            spacing: ExtendedRational::from_int(1),
        }
    }
}

/// One distance compared against the bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    pub degree: usize,
    /// `H` for ordinary, `ext` for extended, `ker`/`im`/`coker` for maps.
    pub quantity: &'static str,
    pub distance: ExtendedRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: usize,
    pub simplices: usize,
    pub norm: ExtendedRational,
    pub measurements: Vec<Measurement>,
    /// Side conditions: finite extended bars, rank–nullity.
    pub checks_passed: bool,
}

impl TrialRecord {
    pub fn bound_holds(&self) -> bool {
        self.measurements.iter().all(|m| m.distance <= self.norm)
    }

    pub fn ok(&self) -> bool {
        self.bound_holds() && self.checks_passed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
}

impl ExperimentReport {
    pub fn violations(&self) -> usize {
        self.records.iter().filter(|r| !r.ok()).count()
    }

    /// Largest `distance / norm` over trials with a positive norm.
    pub fn max_ratio(&self) -> Option<ExtendedRational> {
        self.records
            .iter()
            .filter(|r| r.norm.is_positive())
            .flat_map(|r| {
                let norm = r.norm.as_finite().expect("finite norm").clone();
                r.measurements.iter().map(move |m| match &m.distance {
                    ExtendedRational::Finite(d) => ExtendedRational::Finite(d / &norm),
                    other => other.clone(),
                })
            })
            .max()
    }

    pub fn summary(&self) -> String {
        let c = &self.config;
        let mut s = String::new();
        writeln!(
            s,
            "mode {}  trials {}  seed {}  vertices <= {}  dim <= {}  field {}",
            c.mode, c.trials, c.seed, c.max_vertices, c.max_dim, c.field
        )
        .unwrap();
        if c.mode == Mode::Extended {
            writeln!(s, "spacing {}", c.spacing).unwrap();
        }
        let measured: usize = self.records.iter().map(|r| r.measurements.len()).sum();
        writeln!(s, "distances checked {measured}").unwrap();
        match self.max_ratio() {
            Some(r) => writeln!(s, "max ratio {r}").unwrap(),
            None => writeln!(s, "max ratio n/a").unwrap(),
        }
        writeln!(s, "violations {}", self.violations()).unwrap();
        s
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["trial", "simplices", "norm", "degree", "quantity", "distance", "holds"])
            .unwrap();
        for r in &self.records {
            for m in &r.measurements {
                w.write_record([
                    r.trial.to_string(),
                    r.simplices.to_string(),
                    r.norm.to_string(),
                    m.degree.to_string(),
                    m.quantity.to_string(),
                    m.distance.to_string(),
                    (m.distance <= r.norm && r.checks_passed).to_string(),
                ])
                .unwrap();
            }
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
    }
}

pub fn run(config: &ExperimentConfig) -> ExperimentReport {
    let records = (0..config.trials)
        .into_par_iter()
        .map(|i| run_trial(config, i))
        .collect();
    ExperimentReport {
        config: config.clone(),
        records,
    }
}

pub fn run_trial(config: &ExperimentConfig, trial: usize) -> TrialRecord {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64);
    match config.mode {
        Mode::Ordinary | Mode::Extended => sublevel_trial(config, trial, &mut rng),
        Mode::Kic => kic_trial(config, trial, &mut rng),
    }
}

fn filtered(k: &SimplicialComplex, values: BTreeMap<usize, ExtendedRational>) -> FilteredComplex {
    FilteredComplex::lower_star(k.clone(), values).expect("lower-star filtrations are valid")
}

fn sublevel_trial(config: &ExperimentConfig, trial: usize, rng: &mut ChaCha8Rng) -> TrialRecord {
    let field = config.field;
    let k = random::random_complex(rng, config.max_vertices, config.max_dim);
    let fv = random::random_vertex_values(rng, &k);
    let gv = if trial == 0 {
        fv.clone()
    } else {
        random::perturb(rng, &fv, 8)
    };
    let f = filtered(&k, fv);
    let g = filtered(&k, gv);
    let norm = f.sup_distance(&g).expect("same complex");
    let top = k.dimension().unwrap_or(0);
    let mut measurements = Vec::new();
    let mut checks_passed = true;
    match config.mode {
        Mode::Ordinary => {
            for d in 0..=top {
                let a = persistence_module(&f, d, field).expect("inclusions are chain maps");
                let b = persistence_module(&g, d, field).expect("inclusions are chain maps");
                measurements.push(Measurement {
                    degree: d,
                    quantity: "H",
                    distance: module_distance(&a, &b),
                });
            }
        }
        Mode::Extended => {
            let bound = f.max_value().cloned().max(g.max_value().cloned()).expect("non-empty");
            let pf = f
                .build_extended_with_bound(bound.clone(), config.spacing.clone())
                .expect("spacing is positive");
            let pg = g
                .build_extended_with_bound(bound, config.spacing.clone())
                .expect("spacing is positive");
            for d in 0..=top {
                let a = extended_module(&pf, d, field).expect("inclusions are chain maps");
                let b = extended_module(&pg, d, field).expect("inclusions are chain maps");
                for m in [&a, &b] {
                    let finite = decompose(m, d).iter().all(|(_, i, _)| {
                        i.hi().is_some_and(ExtendedRational::is_finite)
                    });
                    checks_passed &= finite;
                }
                measurements.push(Measurement {
                    degree: d,
                    quantity: "ext",
                    distance: module_distance(&a, &b),
                });
            }
        }
        Mode::Kic => unreachable!(),
    }
    TrialRecord {
        trial,
        simplices: k.len(),
        norm,
        measurements,
        checks_passed,
    }
}

fn rank_nullity_holds(alpha: &GridMorphism) -> bool {
    let (ker, im, coker) = (alpha.kernel(), alpha.image(), alpha.cokernel());
    (0..alpha.source().grid().len()).all(|i| {
        ker.dim(i) + im.dim(i) == alpha.source().dim(i)
            && coker.dim(i) + im.dim(i) == alpha.target().dim(i)
            && im.dim(i) == alpha.component(i).rank()
    })
}

fn kic_trial(config: &ExperimentConfig, trial: usize, rng: &mut ChaCha8Rng) -> TrialRecord {
    let field = config.field;
    let x = random::random_complex(rng, config.max_vertices, config.max_dim);
    let h = random::random_map_into(rng, &x, config.max_vertices, config.max_dim);
    let y = h.source().clone();

    let fv = random::random_vertex_values(rng, &x);
    let gv: BTreeMap<usize, ExtendedRational> = y
        .vertices()
        .into_iter()
        .map(|v| (v, &fv[&h.vertex(v)] + &random::quarter(rng, 0, 6)))
        .collect();
    let (fv2, gv2) = if trial == 0 {
        (fv.clone(), gv.clone())
    } else {
        let fv2 = random::perturb(rng, &fv, 6);
        let shifted = random::perturb(rng, &gv, 6);
        let gv2 = shifted
            .into_iter()
            .map(|(v, val)| {
                let floor = fv2[&h.vertex(v)].clone();
                (v, val.max_of(floor))
            })
            .collect();
        (fv2, gv2)
    };
    let (f, f2) = (filtered(&x, fv), filtered(&x, fv2));
    let (g, g2) = (filtered(&y, gv), filtered(&y, gv2));
    let norm = f
        .sup_distance(&f2)
        .expect("same complex")
        .max_of(g.sup_distance(&g2).expect("same complex"));

    let top = x.dimension().unwrap_or(0).max(y.dimension().unwrap_or(0));
    let mut measurements = Vec::new();
    let mut checks_passed = true;
    for d in 0..=top {
        let alpha = morphism_module(&h, &f, &g, d, field).expect("compatible by construction");
        let beta = morphism_module(&h, &f2, &g2, d, field).expect("compatible by construction");
        checks_passed &= rank_nullity_holds(&alpha) && rank_nullity_holds(&beta);
        for (quantity, a, b) in [
            ("ker", alpha.kernel(), beta.kernel()),
            ("im", alpha.image(), beta.image()),
            ("coker", alpha.cokernel(), beta.cokernel()),
        ] {
            measurements.push(Measurement {
                degree: d,
                quantity,
                distance: module_distance(&a, &b),
            });
        }
    }
    TrialRecord {
        trial,
        simplices: x.len() + y.len(),
        norm,
        measurements,
        checks_passed,
    }
}
