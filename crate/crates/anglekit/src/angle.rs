//! Cone-angle valuations: the standard (spherical) angle, body angles
//! measured against an arbitrary bounded body, and point-limit angles.
//!
//! Evaluation returns exact values where a closed form exists (lower
//! dimension, full space, halfspaces, two-facet wedges, point-limit
//! reductions) and otherwise seeded Monte Carlo with one-standard-error
//! bars. Samples are drawn in floating point; membership is decided by sign
//! tests against the exact facet normals evaluated in f64, with samples
//! within 1e-12 of any boundary hyperplane discarded and redrawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_core::Rng as _;
use rayon::prelude::*;
use serde_json::Value;

use crate::cone::Cone;
use crate::error::Error;
use crate::estimate::Estimate;
use crate::linalg::RatVec;
use crate::polytope::{FaceId, Polytope};
use crate::rat::rat_from_json;

const BOUNDARY_BAND: f64 = 1e-12;

#[derive(Clone, Debug)]
pub enum VolumeMode {
    Analytic(f64),
    CoEstimated,
}

/// A bounded measurable reference body: a union of axis-aligned boxes (not
/// necessarily convex, not necessarily containing the origin).
#[derive(Clone, Debug)]
pub struct BodyOracle {
    boxes: Vec<(Vec<f64>, Vec<f64>)>,
    bounding_box: (Vec<f64>, Vec<f64>),
    pub volume_mode: VolumeMode,
}

impl BodyOracle {
    pub fn from_boxes(boxes: Vec<(Vec<f64>, Vec<f64>)>, volume_mode: VolumeMode) -> Result<Self, Error> {
        if boxes.is_empty() {
            return Err(Error::Invalid("body needs at least one box".into()));
        }
        let dim = boxes[0].0.len();
        for (lo, hi) in &boxes {
            if lo.len() != dim || hi.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: lo.len().max(hi.len()) });
            }
            if lo.iter().zip(hi).any(|(a, b)| a >= b) {
                return Err(Error::Invalid("box with empty interior".into()));
            }
        }
        let mut blo = boxes[0].0.clone();
        let mut bhi = boxes[0].1.clone();
        for (lo, hi) in &boxes[1..] {
            for i in 0..dim {
                blo[i] = blo[i].min(lo[i]);
                bhi[i] = bhi[i].max(hi[i]);
            }
        }
        Ok(BodyOracle { boxes, bounding_box: (blo, bhi), volume_mode })
    }

    pub fn dim(&self) -> usize {
        self.bounding_box.0.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.boxes
            .iter()
            .any(|(lo, hi)| x.iter().zip(lo.iter().zip(hi)).all(|(c, (l, h))| l <= c && c <= h))
    }

    pub fn bounding_box(&self) -> (&[f64], &[f64]) {
        (&self.bounding_box.0, &self.bounding_box.1)
    }

    /// The canonical test body in dimension d: a shifted non-convex union of
    /// two boxes, neither containing the origin.
    pub fn canonical(dim: usize) -> Self {
        let box_a = (vec![0.25; dim], vec![1.75; dim]);
        let mut lo_b = vec![-2.5; dim];
        let mut hi_b = vec![-0.5; dim];
        // skew to avoid accidental symmetry
        lo_b[0] = -2.25;
        hi_b[0] = -0.25;
        Self::from_boxes(vec![box_a, (lo_b, hi_b)], VolumeMode::CoEstimated).unwrap()
    }
}

#[derive(Clone, Debug)]
pub enum AngleKind {
    Standard,
    Body(BodyOracle),
    PointLimit(RatVec),
}

/// A pluggable cone-angle valuation.
#[derive(Clone, Debug)]
pub struct ConeAngleSpec {
    pub kind: AngleKind,
    pub name: String,
}

impl ConeAngleSpec {
    pub fn standard() -> Self {
        ConeAngleSpec { kind: AngleKind::Standard, name: "standard".into() }
    }

    pub fn body(oracle: BodyOracle) -> Self {
        ConeAngleSpec { kind: AngleKind::Body(oracle), name: "body".into() }
    }

    pub fn point_limit(q: RatVec) -> Self {
        ConeAngleSpec { kind: AngleKind::PointLimit(q), name: "point_limit".into() }
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let kind = v
            .get("kind")
            .and_then(|k| k.as_str())
            .ok_or_else(|| Error::Invalid("angle spec json needs `kind`".into()))?;
        match kind {
            "standard" => Ok(Self::standard()),
            "body" => {
                let body = v
                    .get("body")
                    .ok_or_else(|| Error::Invalid("body spec needs `body`".into()))?;
                let boxes_json = body
                    .get("boxes")
                    .and_then(|b| b.as_array())
                    .ok_or_else(|| Error::Invalid("body needs `boxes`".into()))?;
                let mut boxes = Vec::new();
                for b in boxes_json {
                    let lo = b
                        .get("lo")
                        .and_then(|x| x.as_array())
                        .ok_or_else(|| Error::Invalid("box needs `lo`".into()))?
                        .iter()
                        .map(|x| x.as_f64().ok_or_else(|| Error::Invalid("bad box bound".into())))
                        .collect::<Result<Vec<_>, _>>()?;
                    let hi = b
                        .get("hi")
                        .and_then(|x| x.as_array())
                        .ok_or_else(|| Error::Invalid("box needs `hi`".into()))?
                        .iter()
                        .map(|x| x.as_f64().ok_or_else(|| Error::Invalid("bad box bound".into())))
                        .collect::<Result<Vec<_>, _>>()?;
                    boxes.push((lo, hi));
                }
                let mode = match body.get("volume") {
                    Some(vol) => VolumeMode::Analytic(
                        vol.as_f64().ok_or_else(|| Error::Invalid("bad volume".into()))?,
                    ),
                    None => VolumeMode::CoEstimated,
                };
                Ok(Self::body(BodyOracle::from_boxes(boxes, mode)?))
            }
            "point_limit" => {
                let q = v
                    .get("q")
                    .ok_or_else(|| Error::Invalid("point_limit spec needs `q`".into()))?;
                let q = q
                    .as_array()
                    .ok_or_else(|| Error::Invalid("`q` must be a vector".into()))?
                    .iter()
                    .map(rat_from_json)
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::point_limit(RatVec::new(q)))
            }
            other => Err(Error::Invalid(format!("unknown angle kind `{other}`"))),
        }
    }

    /// Evaluates the valuation on a single cone.
    pub fn evaluate(
        &self,
        cone: &Cone,
        budget: u64,
        seed: u64,
        workers: usize,
    ) -> Result<Estimate, Error> {
        Ok(self
            .evaluate_batch(std::slice::from_ref(cone), budget, seed, workers, 0)?
            .remove(0))
    }

    /// Evaluates many cones on one shared sample stream: per-sample
    /// identities between the cones then hold exactly in the estimates.
    /// Cones with closed forms are answered exactly and skip sampling.
    pub fn evaluate_batch(
        &self,
        cones: &[Cone],
        budget: u64,
        seed: u64,
        workers: usize,
        stream_tag: u64,
    ) -> Result<Vec<Estimate>, Error> {
        Ok(self
            .evaluate_batch_full(cones, &[], budget, seed, workers, stream_tag)?
            .0)
    }

    /// Like `evaluate_batch`, but also evaluates signed combinations of the
    /// same cones on the same stream. Cones with closed forms enter a
    /// combination as exact constants; the sampled remainder carries the
    /// empirical per-sample variance of the partial sum.
    pub fn evaluate_batch_full(
        &self,
        cones: &[Cone],
        compounds: &[Vec<(i64, usize)>],
        budget: u64,
        seed: u64,
        workers: usize,
        stream_tag: u64,
    ) -> Result<(Vec<Estimate>, Vec<Estimate>), Error> {
        let mut per_cone = vec![Estimate::zero(); cones.len()];
        let mut mc_members: Vec<Membership> = Vec::new();
        let mut mc_index: Vec<Option<usize>> = vec![None; cones.len()];
        for (i, cone) in cones.iter().enumerate() {
            match self.prepare(cone)? {
                Prepared::Exact(e) => per_cone[i] = e,
                Prepared::Sample(m) => {
                    mc_index[i] = Some(mc_members.len());
                    mc_members.push(m);
                }
            }
        }
        let mut targets: Vec<Vec<(i64, usize)>> =
            (0..mc_members.len()).map(|i| vec![(1, i)]).collect();
        let mut compound_consts = vec![0.0f64; compounds.len()];
        let mut compound_slots: Vec<usize> = Vec::new();
        for (ci, compound) in compounds.iter().enumerate() {
            let mut mc_terms: Vec<(i64, usize)> = Vec::new();
            for &(coef, idx) in compound {
                match mc_index[idx] {
                    Some(mi) => mc_terms.push((coef, mi)),
                    None => compound_consts[ci] += coef as f64 * per_cone[idx].value,
                }
            }
            if !mc_terms.is_empty() {
                compound_slots.push(targets.len());
                targets.push(mc_terms);
            } else {
                compound_slots.push(usize::MAX);
            }
        }
        let est = if targets.is_empty() {
            vec![]
        } else {
            if budget == 0 {
                return Err(Error::EmptyBudget);
            }
            self.run_mc(&mc_members, &targets, budget, seed, workers, stream_tag)
        };
        for (i, slot) in mc_index.iter().enumerate() {
            if let Some(mi) = slot {
                per_cone[i] = est[*mi];
            }
        }
        let compound_out: Vec<Estimate> = compound_slots
            .iter()
            .enumerate()
            .map(|(ci, &slot)| {
                if slot == usize::MAX {
                    Estimate::exact(compound_consts[ci])
                } else {
                    let mut e = est[slot];
                    e.value += compound_consts[ci];
                    e
                }
            })
            .collect();
        Ok((per_cone, compound_out))
    }

    /// Evaluates signed integer combinations of cone indicators on one
    /// shared stream, with the empirical per-sample variance of each
    /// combination. No closed forms are used, so per-sample cancellation
    /// between the cones is preserved.
    pub fn evaluate_compound(
        &self,
        cones: &[Cone],
        targets: &[Vec<(i64, usize)>],
        budget: u64,
        seed: u64,
        workers: usize,
        stream_tag: u64,
    ) -> Result<Vec<Estimate>, Error> {
        if budget == 0 {
            return Err(Error::EmptyBudget);
        }
        let members: Vec<Membership> =
            cones.iter().map(|c| self.membership(c)).collect::<Result<_, _>>()?;
        Ok(self.run_mc(&members, targets, budget, seed, workers, stream_tag))
    }

    /// Closed-form evaluation when one exists.
    fn prepare(&self, cone: &Cone) -> Result<Prepared, Error> {
        let d = cone.ambient_dim();
        if cone.dim() < d {
            return Ok(Prepared::Exact(Estimate::zero()));
        }
        match &self.kind {
            AngleKind::Standard => Ok(standard_prepare(cone)),
            AngleKind::PointLimit(q) => {
                if q.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, got: q.dim() });
                }
                match point_limit_angle(q, cone)? {
                    PointLimitReduction::Zero => Ok(Prepared::Exact(Estimate::zero())),
                    PointLimitReduction::Standard(reduced) => Ok(standard_prepare(&reduced)),
                }
            }
            AngleKind::Body(body) => {
                if body.dim() != d {
                    return Err(Error::DimensionMismatch { expected: d, got: body.dim() });
                }
                if cone.is_full_space() {
                    return Ok(Prepared::Exact(Estimate::one()));
                }
                Ok(Prepared::Sample(Membership::Normals(normalized_normals(cone))))
            }
        }
    }

    /// Membership oracle without closed forms (for compound targets).
    fn membership(&self, cone: &Cone) -> Result<Membership, Error> {
        let d = cone.ambient_dim();
        if cone.dim() < d {
            return Ok(Membership::ConstFalse);
        }
        match &self.kind {
            AngleKind::Standard | AngleKind::Body(_) => {
                Ok(Membership::Normals(normalized_normals(cone)))
            }
            AngleKind::PointLimit(q) => match point_limit_angle(q, cone)? {
                PointLimitReduction::Zero => Ok(Membership::ConstFalse),
                PointLimitReduction::Standard(reduced) => {
                    Ok(Membership::Normals(normalized_normals(&reduced)))
                }
            },
        }
    }

    fn run_mc(
        &self,
        members: &[Membership],
        targets: &[Vec<(i64, usize)>],
        budget: u64,
        seed: u64,
        workers: usize,
        stream_tag: u64,
    ) -> Vec<Estimate> {
        let workers = workers.max(1);
        let chunks: Vec<u64> = split_budget(budget, workers as u64);
        let per_worker: Vec<WorkerTallies> = chunks
            .par_iter()
            .enumerate()
            .map(|(w, &n)| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(mix_seed(seed, stream_tag, w as u64));
                match &self.kind {
                    AngleKind::Body(body) => {
                        body_worker(body, members, targets, n, &mut rng)
                    }
                    _ => sphere_worker(members, targets, n, &mut rng),
                }
            })
            .collect();

        let mut total = WorkerTallies::zeros(targets.len());
        for t in per_worker {
            total.merge(&t);
        }
        match &self.kind {
            AngleKind::Body(body) => match body.volume_mode {
                VolumeMode::CoEstimated => total.ratio_estimates(),
                VolumeMode::Analytic(vol) => {
                    let (blo, bhi) = body.bounding_box();
                    let boxvol: f64 =
                        blo.iter().zip(bhi).map(|(l, h)| h - l).product();
                    total.analytic_estimates(vol / boxvol)
                }
            },
            _ => total.mean_estimates(),
        }
    }
}

enum Prepared {
    Exact(Estimate),
    Sample(Membership),
}

#[derive(Clone, Debug)]
pub enum Membership {
    ConstFalse,
    ConstTrue,
    /// Unit inner normals; x belongs iff every dot is >= 0.
    Normals(Vec<Vec<f64>>),
}

fn normalized_normals(cone: &Cone) -> Vec<Vec<f64>> {
    cone.inequalities()
        .iter()
        .map(|n| {
            let f = n.to_f64();
            let norm = f.iter().map(|x| x * x).sum::<f64>().sqrt();
            f.into_iter().map(|x| x / norm).collect()
        })
        .collect()
}

fn standard_prepare(cone: &Cone) -> Prepared {
    let ineqs = cone.inequalities();
    match ineqs.len() {
        0 => Prepared::Exact(Estimate::one()),
        1 => Prepared::Exact(Estimate::exact(0.5)),
        2 => {
            // wedge x R^{d-2}: fraction is (pi - angle between normals)/2pi
            let a = normalized_normals(cone);
            let dot: f64 = a[0].iter().zip(&a[1]).map(|(x, y)| x * y).sum();
            let phi = dot.clamp(-1.0, 1.0).acos();
            Prepared::Exact(Estimate::exact((std::f64::consts::PI - phi)
                / (2.0 * std::f64::consts::PI)))
        }
        _ => Prepared::Sample(Membership::Normals(normalized_normals(cone))),
    }
}

pub enum PointLimitReduction {
    /// q outside the closed cone: small balls miss it entirely.
    Zero,
    /// The standard angle of the tangent cone of C at q.
    Standard(Cone),
}

/// Reduces the point-limit angle at q to a standard angle: exact 0 when q is
/// not in the cone, otherwise the tangent cone of C at q (only the
/// inequalities tight at q survive).
pub fn point_limit_angle(q: &RatVec, cone: &Cone) -> Result<PointLimitReduction, Error> {
    if !cone.contains(q)? {
        return Ok(PointLimitReduction::Zero);
    }
    if !cone.is_full_dimensional() {
        // lower-dimensional cones have angle zero anyway
        return Ok(PointLimitReduction::Standard(cone.clone()));
    }
    let tight: Vec<RatVec> = cone
        .inequalities()
        .iter()
        .filter(|n| {
            use num_traits::Zero;
            n.dot(q).is_zero()
        })
        .cloned()
        .collect();
    let mut gens: Vec<RatVec> = cone.generators().to_vec();
    if !q.is_zero() {
        gens.push(q.clone());
        gens.push(q.neg());
    }
    Ok(PointLimitReduction::Standard(Cone::with_inequalities(
        gens,
        cone.ambient_dim(),
        tight,
    )))
}

/// Interior angle of a polytope at a face: the valuation of the tangent cone.
pub fn interior_angle(
    spec: &ConeAngleSpec,
    p: &Polytope,
    face: FaceId,
    budget: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate, Error> {
    spec.evaluate(&p.tangent_cone(face)?, budget, seed, workers)
}

/// Exterior angle of a polytope at a face: the valuation of the outer cone.
pub fn exterior_angle(
    spec: &ConeAngleSpec,
    p: &Polytope,
    face: FaceId,
    budget: u64,
    seed: u64,
    workers: usize,
) -> Result<Estimate, Error> {
    spec.evaluate(&p.outer_cone(face)?, budget, seed, workers)
}

struct WorkerTallies {
    n: u64,
    sum: Vec<i64>,
    sumsq: Vec<i64>,
    /// Body kind only: per-target sum of t*k and the k tallies.
    sum_tk: Vec<i64>,
    k_count: u64,
}

impl WorkerTallies {
    fn zeros(targets: usize) -> Self {
        WorkerTallies {
            n: 0,
            sum: vec![0; targets],
            sumsq: vec![0; targets],
            sum_tk: vec![0; targets],
            k_count: 0,
        }
    }

    fn merge(&mut self, other: &WorkerTallies) {
        self.n += other.n;
        self.k_count += other.k_count;
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sumsq[i] += other.sumsq[i];
            self.sum_tk[i] += other.sum_tk[i];
        }
    }

    fn mean_estimates(&self) -> Vec<Estimate> {
        let n = self.n as f64;
        (0..self.sum.len())
            .map(|i| {
                let mean = self.sum[i] as f64 / n;
                let var = (self.sumsq[i] as f64 / n - mean * mean).max(0.0) * n
                    / (n - 1.0).max(1.0);
                Estimate::monte_carlo(mean, (var / n).sqrt(), self.n)
            })
            .collect()
    }

    /// Ratio estimator r = sum(t)/sum(k) with a delta-method standard error.
    fn ratio_estimates(&self) -> Vec<Estimate> {
        let k = self.k_count as f64;
        (0..self.sum.len())
            .map(|i| {
                if self.k_count == 0 {
                    return Estimate::monte_carlo(f64::NAN, f64::INFINITY, self.n);
                }
                let r = self.sum[i] as f64 / k;
                // residual variance of t - r k; k is 0/1 so sum k^2 = sum k
                let ss = self.sumsq[i] as f64 - 2.0 * r * self.sum_tk[i] as f64
                    + r * r * k;
                Estimate::monte_carlo(r, ss.max(0.0).sqrt() / k, self.n)
            })
            .collect()
    }

    /// vol(K) known analytically: scale box-fraction estimates by
    /// vol(box)/vol(K) = 1/known_fraction.
    fn analytic_estimates(&self, known_fraction: f64) -> Vec<Estimate> {
        self.mean_estimates()
            .into_iter()
            .map(|e| e.scale(1.0 / known_fraction))
            .collect()
    }
}

fn member_test(m: &Membership, x: &[f64]) -> Result<bool, ()> {
    match m {
        Membership::ConstFalse => Ok(false),
        Membership::ConstTrue => Ok(true),
        Membership::Normals(normals) => {
            for n in normals {
                let dot: f64 = n.iter().zip(x).map(|(a, b)| a * b).sum();
                if dot.abs() <= BOUNDARY_BAND {
                    return Err(()); // too close to a boundary: resample
                }
                if dot < 0.0 {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn sphere_worker(
    members: &[Membership],
    targets: &[Vec<(i64, usize)>],
    n: u64,
    rng: &mut ChaCha8Rng,
) -> WorkerTallies {
    let dim = members
        .iter()
        .find_map(|m| match m {
            Membership::Normals(ns) => ns.first().map(|v| v.len()),
            _ => None,
        })
        .unwrap_or(1);
    let mut t = WorkerTallies::zeros(targets.len());
    let mut bits = vec![false; members.len()];
    let mut x = vec![0.0f64; dim];
    'outer: for _ in 0..n {
        let mut guard = 0;
        loop {
            guard += 1;
            assert!(guard < 1000, "sampler cannot escape boundary band");
            unit_sphere_sample(rng, &mut x);
            let mut ok = true;
            for (i, m) in members.iter().enumerate() {
                match member_test(m, &x) {
                    Ok(b) => bits[i] = b,
                    Err(()) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                break;
            }
        }
        t.n += 1;
        for (ti, target) in targets.iter().enumerate() {
            let mut val = 0i64;
            for &(coef, ci) in target {
                if bits[ci] {
                    val += coef;
                }
            }
            t.sum[ti] += val;
            t.sumsq[ti] += val * val;
        }
        if t.n >= n {
            continue 'outer;
        }
    }
    t
}

fn body_worker(
    body: &BodyOracle,
    members: &[Membership],
    targets: &[Vec<(i64, usize)>],
    n: u64,
    rng: &mut ChaCha8Rng,
) -> WorkerTallies {
    let (lo, hi) = body.bounding_box();
    let dim = lo.len();
    let mut t = WorkerTallies::zeros(targets.len());
    let mut bits = vec![false; members.len()];
    let mut x = vec![0.0f64; dim];
    let mut xhat = vec![0.0f64; dim];
    for _ in 0..n {
        let k;
        loop {
            let mut guard_ok = true;
            for i in 0..dim {
                x[i] = lo[i] + uniform01(rng) * (hi[i] - lo[i]);
            }
            let norm = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm < BOUNDARY_BAND {
                continue;
            }
            for i in 0..dim {
                xhat[i] = x[i] / norm;
            }
            for (i, m) in members.iter().enumerate() {
                match member_test(m, &xhat) {
                    Ok(b) => bits[i] = b,
                    Err(()) => {
                        guard_ok = false;
                        break;
                    }
                }
            }
            if guard_ok {
                k = body.contains(&x);
                break;
            }
        }
        t.n += 1;
        if k {
            t.k_count += 1;
        }
        for (ti, target) in targets.iter().enumerate() {
            let mut val = 0i64;
            for &(coef, ci) in target {
                if bits[ci] {
                    val += coef;
                }
            }
            if k {
                t.sum[ti] += val;
                t.sumsq[ti] += val * val;
                t.sum_tk[ti] += val;
            }
        }
    }
    t
}

fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal pair via Box-Muller.
fn gaussian_pair(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let mut u1 = uniform01(rng);
    while u1 == 0.0 {
        u1 = uniform01(rng);
    }
    let u2 = uniform01(rng);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    (r * theta.cos(), r * theta.sin())
}

fn unit_sphere_sample(rng: &mut ChaCha8Rng, out: &mut [f64]) {
    loop {
        let mut i = 0;
        while i < out.len() {
            let (a, b) = gaussian_pair(rng);
            out[i] = a;
            if i + 1 < out.len() {
                out[i + 1] = b;
            }
            i += 2;
        }
        let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-8 {
            for x in out.iter_mut() {
                *x /= norm;
            }
            return;
        }
    }
}

fn split_budget(budget: u64, workers: u64) -> Vec<u64> {
    let base = budget / workers;
    let extra = budget % workers;
    (0..workers).map(|w| base + u64::from(w < extra)).collect()
}

fn mix_seed(seed: u64, stream: u64, worker: u64) -> u64 {
    // splitmix64 over the packed inputs
    let mut z = seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(stream.wrapping_mul(0xbf58_476d_1ce4_e5b9))
        .wrapping_add(worker.wrapping_add(1).wrapping_mul(0x94d0_49bb_1331_11eb));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::RatVec;

    fn v(c: &[i64]) -> RatVec {
        RatVec::from_ints(c)
    }

    fn quadrant() -> Cone {
        Cone::from_generators(vec![v(&[1, 0]), v(&[0, 1])], 2)
    }

    #[test]
    fn full_space_is_one_for_all_kinds() {
        for d in 1..=3 {
            let c = Cone::full_space(d);
            let specs = vec![
                ConeAngleSpec::standard(),
                ConeAngleSpec::body(BodyOracle::canonical(d)),
                ConeAngleSpec::point_limit(RatVec::from_ints(
                    &(0..d).map(|i| if i == 0 { 1 } else { 0 }).collect::<Vec<_>>(),
                )),
            ];
            for s in specs {
                let e = s.evaluate(&c, 0, 0, 1).unwrap();
                assert!(e.exact, "{} not exact", s.name);
                assert_eq!(e.value, 1.0);
            }
        }
    }

    #[test]
    fn lower_dimensional_is_zero_for_all_kinds() {
        let ray = Cone::from_generators(vec![v(&[1, 1])], 2);
        for s in [
            ConeAngleSpec::standard(),
            ConeAngleSpec::body(BodyOracle::canonical(2)),
            ConeAngleSpec::point_limit(v(&[1, 0])),
        ] {
            let e = s.evaluate(&ray, 0, 0, 1).unwrap();
            assert!(e.exact);
            assert_eq!(e.value, 0.0);
        }
    }

    #[test]
    fn standard_quadrant_exact_quarter() {
        let e = ConeAngleSpec::standard().evaluate(&quadrant(), 0, 0, 1).unwrap();
        assert!(e.exact);
        assert!((e.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn standard_halfspace_exact_half() {
        let h = Cone::from_generators(
            vec![v(&[1, 0, 0]), v(&[-1, 0, 0]), v(&[0, 1, 0]), v(&[0, -1, 0]), v(&[0, 0, 1])],
            3,
        );
        let e = ConeAngleSpec::standard().evaluate(&h, 0, 0, 1).unwrap();
        assert!(e.exact);
        assert_eq!(e.value, 0.5);
    }

    #[test]
    fn standard_wedge_arc_formula() {
        // cone(e1, (-1,1)) spans 135 degrees: fraction 3/8
        let c = Cone::from_generators(vec![v(&[1, 0]), v(&[-1, 1])], 2);
        let e = ConeAngleSpec::standard().evaluate(&c, 0, 0, 1).unwrap();
        assert!(e.exact);
        assert!((e.value - 0.375).abs() < 1e-14);
    }

    #[test]
    fn standard_octant_monte_carlo() {
        let c = Cone::from_generators(vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], 3);
        let e = ConeAngleSpec::standard().evaluate(&c, 200_000, 7, 1).unwrap();
        assert!(!e.exact);
        assert!((e.value - 0.125).abs() < 5.0 * e.stderr.max(1e-4), "value {}", e.value);
    }

    #[test]
    fn zero_budget_without_shortcut_errors() {
        let c = Cone::from_generators(vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], 3);
        match ConeAngleSpec::standard().evaluate(&c, 0, 0, 1) {
            Err(Error::EmptyBudget) => {}
            other => panic!("expected EmptyBudget, got {other:?}"),
        }
    }

    #[test]
    fn point_limit_cases() {
        let c = quadrant();
        // interior point: angle 1
        let e = ConeAngleSpec::point_limit(v(&[1, 1])).evaluate(&c, 0, 0, 1).unwrap();
        assert_eq!((e.value, e.exact), (1.0, true));
        // outside: 0
        let e = ConeAngleSpec::point_limit(v(&[-1, 0])).evaluate(&c, 0, 0, 1).unwrap();
        assert_eq!((e.value, e.exact), (0.0, true));
        // relative interior of a ray: halfplane, 1/2
        let e = ConeAngleSpec::point_limit(v(&[1, 0])).evaluate(&c, 0, 0, 1).unwrap();
        assert_eq!((e.value, e.exact), (0.5, true));
        // at the apex: the cone itself
        let e = ConeAngleSpec::point_limit(v(&[0, 0])).evaluate(&c, 0, 0, 1).unwrap();
        assert!((e.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn body_angle_of_quadrant_in_range() {
        let body = BodyOracle::canonical(2);
        let spec = ConeAngleSpec::body(body);
        let e = spec.evaluate(&quadrant(), 100_000, 3, 1).unwrap();
        assert!(!e.exact);
        assert!((0.0..=1.0).contains(&e.value));
        assert!(e.stderr > 0.0 && e.stderr < 0.02);
    }

    #[test]
    fn determinism_bit_identical() {
        let c = Cone::from_generators(vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], 3);
        let s = ConeAngleSpec::standard();
        let a = s.evaluate(&c, 50_000, 11, 2).unwrap();
        let b = s.evaluate(&c, 50_000, 11, 2).unwrap();
        assert_eq!(a, b);
        let c2 = s.evaluate(&c, 50_000, 12, 2).unwrap();
        assert_ne!(a.value, c2.value);
    }

    #[test]
    fn shared_stream_partition_is_exact() {
        // the four quadrants of the plane partition almost every sample:
        // their indicator sum is 1 per sample, so the compound estimate is
        // exactly 1 with zero variance
        let quads: Vec<Cone> = [(1, 1), (-1, 1), (1, -1), (-1, -1)]
            .iter()
            .map(|&(a, b)| {
                Cone::from_generators(vec![v(&[a, 0]), v(&[0, b])], 2)
            })
            .collect();
        let targets = vec![vec![(1, 0), (1, 1), (1, 2), (1, 3)]];
        let est = ConeAngleSpec::standard()
            .evaluate_compound(&quads, &targets, 20_000, 5, 1, 0)
            .unwrap();
        assert_eq!(est[0].value, 1.0);
        assert_eq!(est[0].stderr, 0.0);
    }

    #[test]
    fn stderr_scales_with_budget() {
        let c = Cone::from_generators(vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])], 3);
        let s = ConeAngleSpec::standard();
        let mut log_se = Vec::new();
        for (i, budget) in [10_000u64, 100_000, 1_000_000].iter().enumerate() {
            let e = s.evaluate(&c, *budget, 100 + i as u64, 1).unwrap();
            log_se.push((budget.ilog10() as f64, e.stderr.ln() / std::f64::consts::LN_10));
        }
        // regression slope over the three points should be about -1/2
        let n = log_se.len() as f64;
        let sx: f64 = log_se.iter().map(|p| p.0).sum();
        let sy: f64 = log_se.iter().map(|p| p.1).sum();
        let sxy: f64 = log_se.iter().map(|p| p.0 * p.1).sum();
        let sxx: f64 = log_se.iter().map(|p| p.0 * p.0).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!((slope + 0.5).abs() < 0.1, "slope {slope}");
    }
}
