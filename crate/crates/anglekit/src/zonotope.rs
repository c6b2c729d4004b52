//! Zonotopes from generator configurations, the covectors of the associated
//! central hyperplane arrangement, lattices of flats in both orientations,
//! Whitney numbers, and cocharacteristic polynomials.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::cone::subsets_of_size;
use crate::error::Error;
use crate::linalg::{LinearSubspace, RatMat, RatVec};
use crate::lp::strict_sign_system_witness;
use crate::polytope::Polytope;
use crate::poset::GradedPoset;
use crate::rat::{rat, Rat};

#[derive(Clone, Debug)]
pub struct GeneratorConfiguration {
    generators: Vec<RatVec>,
    dim: usize,
}

impl GeneratorConfiguration {
    pub fn new(generators: Vec<RatVec>, dim: usize) -> Result<Self, Error> {
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.dim() });
            }
            if g.is_zero() {
                return Err(Error::Degenerate("zero generator".into()));
            }
        }
        Ok(GeneratorConfiguration { generators, dim })
    }

    pub fn generators(&self) -> &[RatVec] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        RatMat::from_rows(self.generators.clone()).rank()
    }

    /// Every d-subset of generators is linearly independent (checked
    /// exhaustively; this is the genericity certificate).
    pub fn is_generic(&self) -> bool {
        if self.len() < self.dim {
            return false;
        }
        subsets_of_size(self.len(), self.dim).into_iter().all(|s| {
            let rows: Vec<RatVec> = s.iter().map(|&i| self.generators[i].clone()).collect();
            !RatMat::new(rows, self.dim).det().is_zero()
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let gens = v
            .get("generators")
            .and_then(|g| g.as_array())
            .ok_or_else(|| Error::Invalid("configuration json needs `generators`".into()))?;
        let generators: Vec<RatVec> =
            gens.iter().map(RatVec::from_json).collect::<Result<_, _>>()?;
        let dim = v
            .get("dim")
            .and_then(|d| d.as_u64())
            .map(|d| d as usize)
            .or_else(|| generators.first().map(|g| g.dim()))
            .ok_or_else(|| Error::Invalid("cannot infer dimension".into()))?;
        Self::new(generators, dim)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "generators": self.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            "dim": self.dim,
        })
    }
}

/// Sign vector of a point relative to the arrangement {z_i^perp}; only
/// realizable covectors are constructed.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Covector {
    pub signs: Vec<i8>,
}

impl Covector {
    pub fn is_region(&self) -> bool {
        self.signs.iter().all(|&s| s != 0)
    }

    pub fn zero_set(&self) -> Vec<usize> {
        (0..self.signs.len()).filter(|&i| self.signs[i] == 0).collect()
    }
}

/// All realizable covectors of the central arrangement, in lexicographic
/// order, via incremental hyperplane insertion with exact LP feasibility of
/// the strict sign systems.
pub fn covectors(cfg: &GeneratorConfiguration) -> Vec<Covector> {
    // state: (signs so far, witness point for the realized system)
    let mut state: Vec<(Vec<i8>, RatVec)> = vec![(vec![], RatVec::zeros(cfg.dim))];
    for i in 0..cfg.len() {
        let normals: Vec<RatVec> = cfg.generators[..=i].to_vec();
        let mut next: Vec<(Vec<i8>, RatVec)> = Vec::new();
        for (signs, witness) in &state {
            let here = cfg.generators[i].dot(witness);
            let observed: i8 = if here.is_positive() {
                1
            } else if here.is_negative() {
                -1
            } else {
                0
            };
            for s in [-1i8, 0, 1] {
                let mut cand = signs.clone();
                cand.push(s);
                if s == observed {
                    next.push((cand, witness.clone()));
                    continue;
                }
                if let Some(w) = strict_sign_system_witness(&normals, &cand) {
                    next.push((cand, w));
                }
            }
        }
        state = next;
    }
    let mut out: Vec<Covector> = state.into_iter().map(|(signs, _)| Covector { signs }).collect();
    out.sort();
    out
}

/// The covector of a concrete point.
pub fn covector_of_point(cfg: &GeneratorConfiguration, p: &RatVec) -> Covector {
    Covector {
        signs: cfg
            .generators
            .iter()
            .map(|z| {
                let d = z.dot(p);
                if d.is_positive() {
                    1
                } else if d.is_negative() {
                    -1
                } else {
                    0
                }
            })
            .collect(),
    }
}

/// The zonotope sum of [-z_i, z_i]: vertices are the points Σ ε_i z_i over
/// region sign vectors ε.
pub fn zonotope(cfg: &GeneratorConfiguration) -> Result<Polytope, Error> {
    if cfg.rank() != cfg.dim {
        return Err(Error::Degenerate(format!(
            "configuration has rank {} < {}; build the zonotope in its span instead",
            cfg.rank(),
            cfg.dim
        )));
    }
    let mut vertices = Vec::new();
    for cv in covectors(cfg) {
        if !cv.is_region() {
            continue;
        }
        let mut v = RatVec::zeros(cfg.dim);
        for (i, &s) in cv.signs.iter().enumerate() {
            let term = if s > 0 {
                cfg.generators[i].clone()
            } else {
                cfg.generators[i].neg()
            };
            v = v.add(&term);
        }
        vertices.push(v);
    }
    Polytope::new(vertices)
}

/// Vertex index set of the zonotope face selected by a covector: the
/// regions refining it. Pairs with `zonotope(cfg)`.
pub fn covector_face_vertices(
    cfg: &GeneratorConfiguration,
    all: &[Covector],
    sigma: &Covector,
) -> Vec<usize> {
    let regions: Vec<&Covector> = all.iter().filter(|c| c.is_region()).collect();
    let _ = cfg;
    regions
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            sigma
                .signs
                .iter()
                .zip(&r.signs)
                .all(|(&s, &t)| s == 0 || s == t)
        })
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlatOrientation {
    /// Spans of generator subsets ordered by inclusion; rank = dimension.
    ByInclusion,
    /// Intersections of the hyperplanes z_i^perp ordered by reverse
    /// inclusion; rank = codimension.
    Arrangement,
}

#[derive(Clone, Debug)]
pub struct Flat {
    pub subspace: LinearSubspace,
    /// Generators lying on the flat (closure of the defining set).
    pub generator_set: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FlatLattice {
    pub flats: Vec<Flat>,
    pub orientation: FlatOrientation,
    poset: Arc<GradedPoset>,
    ambient_dim: usize,
}

impl FlatLattice {
    pub fn poset(&self) -> &Arc<GradedPoset> {
        &self.poset
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.poset.height()
    }

    /// Index of the flat whose subspace equals the given one.
    pub fn flat_of_subspace(&self, l: &LinearSubspace) -> Option<usize> {
        let want = match self.orientation {
            FlatOrientation::ByInclusion => l.clone(),
            FlatOrientation::Arrangement => l.clone(),
        };
        self.flats.iter().position(|f| f.subspace.eq_subspace(&want))
    }
}

/// The lattice of flats of the configuration, in either orientation. The two
/// orientations are isomorphic via orthogonal complement.
pub fn flat_lattice(
    cfg: &GeneratorConfiguration,
    orientation: FlatOrientation,
) -> FlatLattice {
    // matroid closure over generator subsets
    let mut closures: BTreeMap<Vec<usize>, LinearSubspace> = BTreeMap::new();
    for mask in 0u32..(1 << cfg.len()) {
        let subset: Vec<usize> =
            (0..cfg.len()).filter(|i| mask >> i & 1 == 1).collect();
        let span = LinearSubspace::span(
            &subset.iter().map(|&i| cfg.generators[i].clone()).collect::<Vec<_>>(),
            cfg.dim,
        );
        let closure: Vec<usize> =
            (0..cfg.len()).filter(|&i| span.contains(&cfg.generators[i])).collect();
        closures.entry(closure).or_insert(span);
    }
    let mut flats: Vec<(Vec<usize>, LinearSubspace)> = closures.into_iter().collect();
    flats.sort_by_key(|(gens, span)| (span.dim(), gens.clone()));

    let labels: Vec<String> = flats
        .iter()
        .map(|(gens, _)| format!("{{{}}}", gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let ranks: Vec<usize> = flats.iter().map(|(_, span)| span.dim()).collect();
    let n = flats.len();
    let mut leq = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = flats[a].0.iter().all(|g| flats[b].0.contains(g))
                && flats[a].1.dim() <= flats[b].1.dim();
        }
    }
    // order by closure-set inclusion; {0} has the empty closure
    let poset =
        Arc::new(GradedPoset::from_leq(labels, ranks, leq).expect("lattice of flats is graded"));
    let flats: Vec<Flat> = flats
        .into_iter()
        .map(|(generator_set, subspace)| match orientation {
            FlatOrientation::ByInclusion => Flat { subspace, generator_set },
            FlatOrientation::Arrangement => Flat {
                subspace: subspace.orthogonal_complement(),
                generator_set,
            },
        })
        .collect();
    FlatLattice { flats, orientation, poset, ambient_dim: cfg.dim }
}

/// Whitney numbers of the second and first kind, indexed by rank.
pub fn whitney_numbers(lattice: &FlatLattice) -> (Vec<i64>, Vec<i64>) {
    lattice.poset().whitney_numbers()
}

/// Cocharacteristic polynomial of a lattice of flats ordered by inclusion:
/// Σ_L |μ(L, 1̂)| t^(d - dim L), returned as coefficients of t^0..t^d.
pub fn cocharacteristic(lattice: &FlatLattice) -> Result<Vec<i64>, Error> {
    if lattice.orientation != FlatOrientation::ByInclusion {
        return Err(Error::Invalid(
            "cocharacteristic polynomial wants the inclusion orientation".into(),
        ));
    }
    let p = lattice.poset();
    let mu = p.moebius_table();
    let d = lattice.ambient_dim;
    let mut coeffs = vec![0i64; d + 1];
    for i in 0..p.len() {
        let dim_l = p.rank(i);
        coeffs[d - dim_l] += mu[i][p.top()].abs();
    }
    Ok(coeffs)
}

fn binomial(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    let mut r = 1i64;
    for i in 0..k {
        r = r * (n - i) as i64 / (i + 1) as i64;
    }
    r
}

/// Cocharacteristic polynomial of d+j generic vectors in dimension d via the
/// recursion psi_{d,j} = psi_{d-1,j} + C(d-1+j, j) t (t+1)^(d-1), psi_0 = 1.
pub fn cocharacteristic_generic(d: usize, j: usize) -> Vec<i64> {
    let mut psi = vec![1i64]; // psi_{0,j}
    for dd in 1..=d {
        // t (t+1)^(dd-1)
        let mut term = vec![0i64; dd + 1];
        for i in 0..dd {
            term[i + 1] = binomial(dd - 1, i);
        }
        let c = binomial(dd - 1 + j, j);
        let mut next = vec![0i64; dd + 1];
        for (i, &v) in psi.iter().enumerate() {
            next[i] += v;
        }
        for (i, &v) in term.iter().enumerate() {
            next[i] += c * v;
        }
        psi = next;
    }
    psi
}

/// Deterministic generic configuration: small random integer vectors,
/// resampled until the exhaustive minor certificate passes.
pub fn generic_configuration(d: usize, n: usize, seed: u64) -> GeneratorConfiguration {
    assert!(n >= d && d >= 1, "need n >= d >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0000);
    loop {
        let mut gens = Vec::with_capacity(n);
        for _ in 0..n {
            let v: Vec<i64> = (0..d).map(|_| rng.random_range(-9..=9)).collect();
            gens.push(RatVec::from_ints(&v));
        }
        if gens.iter().any(|g| g.is_zero()) {
            continue;
        }
        let cfg = GeneratorConfiguration::new(gens, d).unwrap();
        if cfg.is_generic() {
            return cfg;
        }
    }
}

/// Moment-curve configuration (1, t, t^2, ...) at t = 1..n: generic by the
/// Vandermonde determinant.
pub fn moment_curve_configuration(d: usize, n: usize) -> GeneratorConfiguration {
    let gens: Vec<RatVec> = (1..=n as i64)
        .map(|t| {
            let mut c = Vec::with_capacity(d);
            let mut acc = Rat::from_integer(1.into());
            for _ in 0..d {
                c.push(acc.clone());
                acc *= rat(t);
            }
            RatVec::new(c)
        })
        .collect();
    GeneratorConfiguration::new(gens, d).unwrap()
}
