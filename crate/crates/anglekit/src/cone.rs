//! Polyhedral cones with apex at the origin.
//!
//! Generators are the primary description. The inequality description (inner
//! facet normals, so `C = {x : <n,x> >= 0 for all n}`) is computed lazily by
//! exhaustive enumeration over (d-1)-subsets of generators and cached; it is
//! only defined for full-dimensional cones, which is all the Monte Carlo
//! machinery ever samples. Lower-dimensional membership falls back to exact
//! LP feasibility.

use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::error::Error;
use crate::linalg::{LinearSubspace, RatMat, RatVec};
use crate::lp::nonneg_combination;

#[derive(Debug)]
pub struct Cone {
    generators: Vec<RatVec>,
    ambient_dim: usize,
    dim: usize,
    inequalities: OnceLock<Vec<RatVec>>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        let c = Cone {
            generators: self.generators.clone(),
            ambient_dim: self.ambient_dim,
            dim: self.dim,
            inequalities: OnceLock::new(),
        };
        if let Some(i) = self.inequalities.get() {
            let _ = c.inequalities.set(i.clone());
        }
        c
    }
}

impl Cone {
    pub fn from_generators(generators: Vec<RatVec>, ambient_dim: usize) -> Self {
        let mut gens: Vec<RatVec> = Vec::new();
        for g in generators {
            debug_assert_eq!(g.dim(), ambient_dim);
            if g.is_zero() {
                continue;
            }
            let p = g.primitive();
            // primitive() canonicalizes the ray only up to sign of the first
            // nonzero coordinate, so compare against the scaled original.
            let signed = if p.dot(&g).is_negative() { p.neg() } else { p };
            if !gens.contains(&signed) {
                gens.push(signed);
            }
        }
        let dim = if gens.is_empty() {
            0
        } else {
            RatMat::from_rows(gens.clone()).rank()
        };
        Cone { generators: gens, ambient_dim, dim, inequalities: OnceLock::new() }
    }

    /// Constructor for cones whose facet normals are already known (tangent
    /// and outer cones of polytope faces). The list must be irredundant and
    /// the cone full-dimensional.
    pub fn with_inequalities(
        generators: Vec<RatVec>,
        ambient_dim: usize,
        inequalities: Vec<RatVec>,
    ) -> Self {
        let cone = Self::from_generators(generators, ambient_dim);
        debug_assert_eq!(cone.dim, ambient_dim);
        debug_assert!(cone.generators.iter().all(|g| {
            inequalities.iter().all(|n| !n.dot(g).is_negative())
        }));
        let ineqs: Vec<RatVec> = inequalities
            .iter()
            .map(|n| {
                // primitive() fixes the sign of the first nonzero coordinate;
                // restore the original direction, which is semantic here.
                let p = n.primitive();
                if p.dot(n).is_negative() { p.neg() } else { p }
            })
            .collect();
        let _ = cone.inequalities.set(ineqs);
        cone
    }

    /// Builds the cone {x : <n,x> >= 0 for all n} from inequality normals
    /// (possibly redundant) by exhaustive dual-ray enumeration.
    pub fn from_inequalities(normals: &[RatVec], ambient_dim: usize) -> Self {
        let rays = enumerate_rays(normals, ambient_dim);
        Cone::from_generators(rays, ambient_dim)
    }

    pub fn full_space(ambient_dim: usize) -> Self {
        let mut gens = Vec::new();
        for i in 0..ambient_dim {
            gens.push(RatVec::unit(ambient_dim, i));
            gens.push(RatVec::unit(ambient_dim, i).neg());
        }
        Self::with_inequalities(gens, ambient_dim, vec![])
    }

    pub fn origin(ambient_dim: usize) -> Self {
        Self::from_generators(vec![], ambient_dim)
    }

    pub fn generators(&self) -> &[RatVec] {
        &self.generators
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dim == self.ambient_dim
    }

    pub fn span(&self) -> LinearSubspace {
        LinearSubspace::span(&self.generators, self.ambient_dim)
    }

    /// Inner facet normals for a full-dimensional cone. Empty list means the
    /// cone is all of ℝ^d.
    pub fn inequalities(&self) -> &[RatVec] {
        assert!(
            self.is_full_dimensional(),
            "inequality description requested for a lower-dimensional cone"
        );
        self.inequalities
            .get_or_init(|| enumerate_facet_normals(&self.generators, self.ambient_dim))
    }

    pub fn is_full_space(&self) -> bool {
        self.is_full_dimensional() && self.inequalities().is_empty()
    }

    /// Exact membership. Uses the cached inequality description when the cone
    /// is full-dimensional, otherwise LP feasibility over the generators.
    pub fn contains(&self, x: &RatVec) -> Result<bool, Error> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: x.dim() });
        }
        if self.is_full_dimensional() {
            Ok(self.inequalities().iter().all(|n| !n.dot(x).is_negative()))
        } else {
            Ok(nonneg_combination(&self.generators, x))
        }
    }

    /// Strict membership in the topological interior (full-dimensional cones).
    pub fn contains_interior(&self, x: &RatVec) -> Result<bool, Error> {
        if x.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: x.dim() });
        }
        if !self.is_full_dimensional() {
            return Ok(false);
        }
        Ok(self.inequalities().iter().all(|n| n.dot(x).is_positive()))
    }

    /// Does x lie on a boundary hyperplane (exactly)?
    pub fn on_boundary_hyperplane(&self, x: &RatVec) -> bool {
        if self.is_full_dimensional() {
            self.inequalities().iter().any(|n| n.dot(x).is_zero())
        } else {
            // Everything in the span is "boundary"; detect membership there.
            self.span().contains(x)
        }
    }

    /// Polar cone C^v = {u : <u,x> <= 0 for all x in C}.
    pub fn polar(&self) -> Cone {
        let normals: Vec<RatVec> = self.generators.iter().map(|g| g.neg()).collect();
        let rays = enumerate_rays(&normals, self.ambient_dim);
        Cone::from_generators(rays, self.ambient_dim)
    }

    /// Mutual containment of generators.
    pub fn eq_as_set(&self, other: &Cone) -> Result<bool, Error> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                got: other.ambient_dim,
            });
        }
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All nonempty faces, as (generator index set, dim, tight inequality
    /// indices). Includes the minimal face and the cone itself.
    pub fn faces(&self) -> Vec<ConeFace> {
        assert!(self.is_full_dimensional(), "face enumeration needs a full-dimensional cone");
        let normals = self.inequalities().to_vec();
        let gens = &self.generators;
        let tight_gens = |tight: &[usize]| -> Vec<usize> {
            (0..gens.len())
                .filter(|&j| tight.iter().all(|&i| normals[i].dot(&gens[j]).is_zero()))
                .collect()
        };
        // Closure of the facet gensets under intersection, seeded with C.
        let mut seen: Vec<(Vec<usize>, Vec<usize>)> = vec![(tight_gens(&[]), vec![])];
        let singles: Vec<(Vec<usize>, Vec<usize>)> = (0..normals.len())
            .map(|i| (tight_gens(&[i]), vec![i]))
            .collect();
        let mut frontier = singles.clone();
        while let Some((gs, tight)) = frontier.pop() {
            if seen.iter().any(|(g, _)| *g == gs) {
                continue;
            }
            seen.push((gs.clone(), tight.clone()));
            for (sg, st) in &singles {
                let inter: Vec<usize> = gs.iter().copied().filter(|j| sg.contains(j)).collect();
                let mut t = tight.clone();
                for &i in st {
                    if !t.contains(&i) {
                        t.push(i);
                    }
                }
                if !seen.iter().any(|(g, _)| *g == inter) {
                    frontier.push((inter, t));
                }
            }
        }
        seen.into_iter()
            .map(|(genset, _)| {
                // Recompute the full tight set for the face.
                let tight: Vec<usize> = (0..normals.len())
                    .filter(|&i| genset.iter().all(|&j| normals[i].dot(&gens[j]).is_zero()))
                    .collect();
                let dim = if genset.is_empty() {
                    0
                } else {
                    RatMat::from_rows(genset.iter().map(|&j| gens[j].clone()).collect()).rank()
                };
                ConeFace { generator_indices: genset, dim, tight }
            })
            .collect()
    }

    /// Tangent cone of this cone at one of its faces: drop every inequality
    /// that is not tight on the face.
    pub fn tangent_at(&self, face: &ConeFace) -> Cone {
        let mut gens = self.generators.clone();
        for &j in &face.generator_indices {
            gens.push(self.generators[j].neg());
        }
        let ineqs: Vec<RatVec> = face
            .tight
            .iter()
            .map(|&i| self.inequalities()[i].clone())
            .collect();
        Cone::with_inequalities(gens, self.ambient_dim, ineqs)
    }

    pub fn negated(&self) -> Cone {
        let gens = self.generators.iter().map(|g| g.neg()).collect();
        let c = Cone::from_generators(gens, self.ambient_dim);
        if let Some(ineqs) = self.inequalities.get() {
            let _ = c.inequalities.set(ineqs.iter().map(|n| n.neg()).collect());
        }
        c
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let gens = v
            .get("generators")
            .and_then(|g| g.as_array())
            .ok_or_else(|| Error::Invalid("cone json needs a `generators` array".into()))?;
        let generators: Vec<RatVec> =
            gens.iter().map(RatVec::from_json).collect::<Result<_, _>>()?;
        let ambient = v
            .get("dim")
            .and_then(|d| d.as_u64())
            .map(|d| d as usize)
            .or_else(|| generators.first().map(|g| g.dim()))
            .ok_or_else(|| Error::Invalid("cannot infer ambient dimension".into()))?;
        for g in &generators {
            if g.dim() != ambient {
                return Err(Error::DimensionMismatch { expected: ambient, got: g.dim() });
            }
        }
        Ok(Cone::from_generators(generators, ambient))
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "generators": self.generators.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            "dim": self.ambient_dim,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ConeFace {
    pub generator_indices: Vec<usize>,
    pub dim: usize,
    /// Indices of the inequalities vanishing on the face.
    pub tight: Vec<usize>,
}

/// Facet normals of a full-dimensional cone: every facet hyperplane is
/// spanned by d-1 linearly independent generators, so scanning all
/// (d-1)-subsets finds them all.
fn enumerate_facet_normals(gens: &[RatVec], d: usize) -> Vec<RatVec> {
    if d == 0 {
        return vec![];
    }
    let mut found: Vec<RatVec> = Vec::new();
    let mut push_unique = |n: RatVec| {
        if !found.contains(&n) {
            found.push(n);
        }
    };
    if d == 1 {
        // A full-dimensional cone in ℝ¹ is a ray or the line.
        let has_pos = gens.iter().any(|g| g.coords[0].is_positive());
        let has_neg = gens.iter().any(|g| g.coords[0].is_negative());
        if has_pos && !has_neg {
            push_unique(RatVec::from_ints(&[1]));
        } else if has_neg && !has_pos {
            push_unique(RatVec::from_ints(&[-1]));
        }
        return found;
    }
    for subset in subsets_of_size(gens.len(), d - 1) {
        let rows: Vec<RatVec> = subset.iter().map(|&i| gens[i].clone()).collect();
        let m = RatMat::new(rows, d);
        if m.rank() != d - 1 {
            continue;
        }
        let kernel = m.nullspace();
        debug_assert_eq!(kernel.len(), 1);
        let n = kernel[0].primitive();
        let mut pos = false;
        let mut neg = false;
        for g in gens {
            let s = n.dot(g);
            if s.is_positive() {
                pos = true;
            } else if s.is_negative() {
                neg = true;
            }
            if pos && neg {
                break;
            }
        }
        if pos && neg {
            continue;
        }
        if neg {
            push_unique(n.neg());
        } else {
            push_unique(n);
        }
    }
    found
}

/// Extreme rays (plus a lineality basis, as ± pairs) of
/// {x : <n,x> >= 0 for all n}.
fn enumerate_rays(normals: &[RatVec], d: usize) -> Vec<RatVec> {
    let mut out: Vec<RatVec> = Vec::new();
    let lineality = if normals.is_empty() {
        LinearSubspace::full(d)
    } else {
        let m = RatMat::new(normals.to_vec(), d);
        LinearSubspace::span(&m.nullspace(), d)
    };
    let ell = lineality.dim();
    for b in lineality.basis() {
        let p = b.primitive();
        out.push(p.neg());
        out.push(p);
    }
    if ell == d {
        return out;
    }
    let k = d - ell - 1;
    let satisfied = |v: &RatVec| normals.iter().all(|n| !n.dot(v).is_negative());
    for subset in subsets_of_size(normals.len(), k) {
        let mut rows: Vec<RatVec> = subset.iter().map(|&i| normals[i].clone()).collect();
        let rank_needed = k;
        if !rows.is_empty() && RatMat::new(rows.clone(), d).rank() != rank_needed {
            continue;
        }
        if rows.is_empty() {
            rows.push(RatVec::zeros(d));
        }
        let kernel = RatMat::new(rows, d).nullspace();
        if kernel.len() != ell + 1 {
            continue;
        }
        for cand in &kernel {
            if lineality.contains(cand) {
                continue;
            }
            let p = cand.primitive();
            for v in [p.clone(), p.neg()] {
                if satisfied(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
    }
    out
}

pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
