//! Interior/exterior angle vectors, flag-angle vectors, generalized
//! spherical intrinsic volumes, and the relation checkers (Gram, flag
//! relations, zonotope/Whitney equalities, independence of the valuation).
//!
//! All angle data for one polytope is collected in an `AngleSystem`: the
//! face lattice plus interior and exterior angle incidence functions. Pairs
//! ending at the whole polytope share one "main" sample stream, so sums over
//! them (angle-vector entries, the vertex partition) inherit per-sample
//! cancellation; other pairs draw their stream from the rank of the lower
//! face, which keeps the factors of any chain product independent.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::angle::ConeAngleSpec;
use crate::cone::Cone;
use crate::error::Error;
use crate::estimate::{Estimate, TOL_FLOOR};
use crate::incidence::{IncidenceFunction, PosetMap};
use crate::polytope::Polytope;
use crate::poset::GradedPoset;
use crate::zonotope::{
    cocharacteristic, flat_lattice, whitney_numbers, FlatLattice, FlatOrientation,
    GeneratorConfiguration,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Interior,
    Exterior,
}

/// Stream tags: pairs ending at the top face share the main stream; other
/// pairs stream by the rank of the lower face; relation checkers get their
/// own tag so their per-sample cancellations stay intact.
const MAIN_STREAM: u64 = 0xa11;
const GRAM_STREAM: u64 = 0x6ea3;

fn side_salt(side: Side) -> u64 {
    match side {
        Side::Interior => 0x1000_0000,
        Side::Exterior => 0x2000_0000,
    }
}

/// All interior and exterior angles of one polytope under one valuation.
pub struct AngleSystem {
    pub polytope: Arc<Polytope>,
    pub poset: Arc<GradedPoset>,
    pub spec: ConeAngleSpec,
    pub budget: u64,
    pub seed: u64,
    pub workers: usize,
    pub interior: IncidenceFunction<Estimate>,
    pub exterior: IncidenceFunction<Estimate>,
    /// Empirical standard errors of the per-dimension sums over faces
    /// (entries of the angle vectors), from the shared main stream.
    interior_entry_sigma: Vec<f64>,
    exterior_entry_sigma: Vec<f64>,
}

impl AngleSystem {
    pub fn build(
        spec: &ConeAngleSpec,
        polytope: Arc<Polytope>,
        budget: u64,
        seed: u64,
        workers: usize,
    ) -> Result<AngleSystem, Error> {
        if !polytope.is_full_dimensional() {
            return Err(Error::Degenerate("angle vectors need a full-dimensional polytope".into()));
        }
        let poset = polytope.face_poset();
        let d = polytope.dim();
        let empty = polytope.empty_face();
        let top = polytope.top_face();

        let mut interior = IncidenceFunction::zero_fn(poset.clone());
        let mut exterior = IncidenceFunction::zero_fn(poset.clone());
        let mut interior_entry_sigma = vec![0.0; d];
        let mut exterior_entry_sigma = vec![0.0; d];

        for side in [Side::Interior, Side::Exterior] {
            // trivial rows first
            for g in 0..poset.len() {
                let table = match side {
                    Side::Interior => &mut interior,
                    Side::Exterior => &mut exterior,
                };
                table.set(g, g, Estimate::one())?;
                if g != empty {
                    let dim_g = polytope.face(g).dim;
                    let at_empty = match side {
                        Side::Interior => {
                            if dim_g <= 0 {
                                Estimate::one()
                            } else {
                                Estimate::zero()
                            }
                        }
                        Side::Exterior => Estimate::one(),
                    };
                    table.set(empty, g, at_empty)?;
                }
            }
            // group the genuine pairs by stream tag
            let mut groups: BTreeMap<u64, Vec<(usize, usize, Cone)>> = BTreeMap::new();
            for f in 0..poset.len() {
                if f == empty {
                    continue;
                }
                for g in 0..poset.len() {
                    if g == f || g == empty || !poset.leq(f, g) {
                        continue;
                    }
                    let cone = match side {
                        Side::Interior => polytope.nested_tangent_cone(f, g)?,
                        Side::Exterior => polytope.nested_outer_cone(f, g)?,
                    };
                    let tag = if g == top { MAIN_STREAM } else { poset.rank(f) as u64 };
                    groups.entry(tag).or_default().push((f, g, cone));
                }
            }
            for (tag, pairs) in groups {
                let cones: Vec<Cone> = pairs.iter().map(|(_, _, c)| c.clone()).collect();
                let compounds: Vec<Vec<(i64, usize)>> = if tag == MAIN_STREAM {
                    (0..d)
                        .map(|i| {
                            pairs
                                .iter()
                                .enumerate()
                                .filter(|(_, (f, _, _))| polytope.face(*f).dim == i as isize)
                                .map(|(idx, _)| (1i64, idx))
                                .collect()
                        })
                        .collect()
                } else {
                    vec![]
                };
                let (per_cone, compound_est) = self_eval(
                    spec,
                    &cones,
                    &compounds,
                    budget,
                    seed,
                    workers,
                    side_salt(side) + tag,
                )?;
                let table = match side {
                    Side::Interior => &mut interior,
                    Side::Exterior => &mut exterior,
                };
                for ((f, g, _), est) in pairs.iter().zip(per_cone) {
                    table.set(*f, *g, est)?;
                }
                if tag == MAIN_STREAM {
                    let sig = match side {
                        Side::Interior => &mut interior_entry_sigma,
                        Side::Exterior => &mut exterior_entry_sigma,
                    };
                    for (i, est) in compound_est.iter().enumerate() {
                        sig[i] = est.stderr;
                    }
                }
            }
        }
        Ok(AngleSystem {
            polytope,
            poset,
            spec: spec.clone(),
            budget,
            seed,
            workers,
            interior,
            exterior,
            interior_entry_sigma,
            exterior_entry_sigma,
        })
    }

    fn table(&self, side: Side) -> &IncidenceFunction<Estimate> {
        match side {
            Side::Interior => &self.interior,
            Side::Exterior => &self.exterior,
        }
    }

    /// Entry i of the angle vector: the sum of angles over the faces of
    /// dimension i, with the empirical standard error of the sum.
    pub fn angle_vector(&self, side: Side) -> AngleVector {
        let d = self.polytope.dim();
        let top = self.polytope.top_face();
        let table = self.table(side);
        let sigma = match side {
            Side::Interior => &self.interior_entry_sigma,
            Side::Exterior => &self.exterior_entry_sigma,
        };
        let entries: Vec<Estimate> = (0..d)
            .map(|i| {
                let mut acc = Estimate::zero();
                let mut all_exact = true;
                for b in self.poset.elements_of_rank(i + 1) {
                    let e = table.get(b, top);
                    all_exact &= e.exact;
                    acc = acc.add(e);
                }
                Estimate {
                    value: acc.value,
                    stderr: if all_exact { 0.0 } else { sigma[i] },
                    samples: acc.samples,
                    exact: all_exact,
                }
            })
            .collect();
        AngleVector {
            entries,
            side,
            spec_name: self.spec.name.clone(),
            budget: self.budget,
            seed: self.seed,
        }
    }

    /// Flag-angle entry for a nonempty set of face dimensions:
    /// (zeta *_{s1+1} alpha *_{s2+1} ... *_{sk+1} alpha)(empty, P).
    pub fn flag_entry(&self, side: Side, dims: &[usize]) -> Estimate {
        if dims.is_empty() {
            return Estimate::one();
        }
        let table = self.table(side);
        let top = self.polytope.top_face();
        // u over elements of rank dims[0]+1, seeded by the zeta factor
        let level0 = self.poset.elements_of_rank(dims[0] + 1);
        let mut u: Vec<(usize, Estimate)> =
            level0.into_iter().map(|b| (b, Estimate::one())).collect();
        for &s in &dims[1..] {
            let level = self.poset.elements_of_rank(s + 1);
            let mut next: Vec<(usize, Estimate)> = Vec::with_capacity(level.len());
            for c in level {
                let mut acc = Estimate::zero();
                for (b, val) in &u {
                    if self.poset.lt(*b, c) {
                        acc = acc.add(&val.mul(table.get(*b, c)));
                    }
                }
                next.push((c, acc));
            }
            u = next;
        }
        let mut out = Estimate::zero();
        for (b, val) in &u {
            out = out.add(&val.mul(table.get(*b, top)));
        }
        out
    }

    /// The full flag-angle vector over all nonempty subsets of {0..d-1}.
    pub fn flag_angle_vector(&self, side: Side) -> FlagAngleVector {
        let d = self.polytope.dim();
        let mut entries = BTreeMap::new();
        entries.insert(vec![], Estimate::one());
        for mask in 1u32..(1 << d) {
            let dims: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
            entries.insert(dims.clone(), self.flag_entry(side, &dims));
        }
        FlagAngleVector {
            rank: d,
            entries,
            side,
            spec_name: self.spec.name.clone(),
            budget: self.budget,
            seed: self.seed,
        }
    }

    /// Spherical intrinsic volumes generalized to the valuation: entry k is
    /// (zeta *_1 interior *_{k+1} exterior)(empty, P).
    pub fn spherical_intrinsic_volumes(&self) -> Vec<Estimate> {
        let d = self.polytope.dim();
        let top = self.polytope.top_face();
        (0..d)
            .map(|k| {
                let mut out = Estimate::zero();
                for f in self.poset.elements_of_rank(k + 1) {
                    let mut inner = Estimate::zero();
                    for v in self.poset.elements_of_rank(1) {
                        if self.poset.leq(v, f) {
                            inner = inner.add(self.interior.get(v, f));
                        }
                    }
                    out = out.add(&inner.mul(self.exterior.get(f, top)));
                }
                out
            })
            .collect()
    }

    /// The signed interior function alpha'(F,G) = (-1)^(dim G - dim F) alpha(F,G).
    pub fn signed_interior(&self) -> IncidenceFunction<Estimate> {
        let mut out = IncidenceFunction::zero_fn(self.poset.clone());
        for a in 0..self.poset.len() {
            for b in 0..self.poset.len() {
                if self.poset.leq(a, b) {
                    let v = self.interior.get(a, b);
                    let signed = if (self.poset.rank(b) - self.poset.rank(a)) % 2 == 1 {
                        v.neg()
                    } else {
                        *v
                    };
                    out.set(a, b, signed).unwrap();
                }
            }
        }
        out
    }
}

fn self_eval(
    spec: &ConeAngleSpec,
    cones: &[Cone],
    compounds: &[Vec<(i64, usize)>],
    budget: u64,
    seed: u64,
    workers: usize,
    tag: u64,
) -> Result<(Vec<Estimate>, Vec<Estimate>), Error> {
    spec.evaluate_batch_full(cones, compounds, budget, seed, workers, tag)
}

#[derive(Clone, Debug, Serialize)]
pub struct AngleVector {
    pub entries: Vec<Estimate>,
    pub side: Side,
    pub spec_name: String,
    pub budget: u64,
    pub seed: u64,
}

#[derive(Clone, Debug)]
pub struct FlagAngleVector {
    pub rank: usize,
    /// Keyed by the sorted set of face dimensions; the empty set maps to 1.
    pub entries: BTreeMap<Vec<usize>, Estimate>,
    pub side: Side,
    pub spec_name: String,
    pub budget: u64,
    pub seed: u64,
}

impl FlagAngleVector {
    pub fn get(&self, dims: &[usize]) -> Estimate {
        self.entries.get(dims).copied().unwrap_or_else(Estimate::zero)
    }
}

/// One line of a machine-readable verification report.
#[derive(Clone, Debug, Serialize)]
pub struct CheckItem {
    pub claim: String,
    pub computed: f64,
    pub expected: f64,
    pub sigma: f64,
    pub pass: bool,
}

impl CheckItem {
    pub fn against_constant(claim: impl Into<String>, e: &Estimate, expected: f64) -> Self {
        CheckItem {
            claim: claim.into(),
            computed: e.value,
            expected,
            sigma: e.stderr,
            pass: e.agrees_with(expected),
        }
    }

    pub fn between_estimates(claim: impl Into<String>, a: &Estimate, b: &Estimate) -> Self {
        let sigma = (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
        CheckItem {
            claim: claim.into(),
            computed: a.value,
            expected: b.value,
            sigma,
            pass: a.agrees_with_estimate(b),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub title: String,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
}

/// Gram's relation: the alternating sum of interior angle-vector entries
/// equals (-1)^(d+1). Evaluated as one compound target over the tangent
/// cones of all proper faces, on a single stream, so the identity holds
/// per sample and the empirical error is essentially zero.
pub fn check_gram(
    spec: &ConeAngleSpec,
    p: &Polytope,
    budget: u64,
    seed: u64,
    workers: usize,
) -> Result<CheckReport, Error> {
    let d = p.dim();
    let mut cones = Vec::new();
    let mut coefs = Vec::new();
    for id in 0..p.faces().len() {
        let dim = p.face(id).dim;
        if dim < 0 || id == p.top_face() {
            continue;
        }
        cones.push(p.tangent_cone(id)?);
        coefs.push(if dim % 2 == 0 { 1i64 } else { -1 });
    }
    let target: Vec<(i64, usize)> = coefs.iter().copied().zip(0..cones.len()).collect();
    let est = spec
        .evaluate_compound(&cones, &[target], budget, seed, workers, GRAM_STREAM)?
        .remove(0);
    let expected = if d % 2 == 0 { -1.0 } else { 1.0 };
    Ok(CheckReport {
        title: format!("gram relation, spec {}", spec.name),
        items: vec![CheckItem::against_constant(
            format!("alternating interior sum = {expected}"),
            &est,
            expected,
        )],
    })
}

/// The two flag-relation families: the exterior one (adding dimension zero
/// to the index set changes nothing) and the interior alternating-sum one.
pub fn check_flag_relations(system: &AngleSystem) -> CheckReport {
    let d = system.polytope.dim();
    let interior = system.flag_angle_vector(Side::Interior);
    let exterior = system.flag_angle_vector(Side::Exterior);
    let mut items = Vec::new();
    // exterior: for S ⊆ {1..d-1}: ext_S = ext_{S ∪ {0}}
    for mask in 0u32..(1 << (d.saturating_sub(1))) {
        let s: Vec<usize> = (1..d).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let mut s0 = vec![0];
        s0.extend(&s);
        let a = exterior.get(&s);
        let b = exterior.get(&s0);
        items.push(CheckItem::between_estimates(
            format!("exterior flag {s:?} = flag {s0:?}"),
            &a,
            &b,
        ));
    }
    // interior: for S ⊆ {1..d-1}, t = min(S ∪ {d}):
    //   sum_{i<t} (-1)^i int_{S ∪ {i}} = (-1)^(t+1) int_S
    for mask in 0u32..(1 << (d.saturating_sub(1))) {
        let s: Vec<usize> = (1..d).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let t = s.first().copied().unwrap_or(d);
        let mut lhs = Estimate::zero();
        for i in 0..t {
            let mut si = vec![i];
            si.extend(&s);
            let term = interior.get(&si);
            lhs = lhs.add(&if i % 2 == 0 { term } else { term.neg() });
        }
        let rhs_sign = if (t + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = interior.get(&s).scale(rhs_sign);
        items.push(CheckItem::between_estimates(
            format!("interior flag relation at S={s:?} (t={t})"),
            &lhs,
            &rhs,
        ));
    }
    CheckReport {
        title: format!("flag relations, spec {}", system.spec.name),
        items,
    }
}

/// Exact combinatorial side for a zonotope: Whitney and flag-Whitney numbers
/// of the lattice of flats.
pub struct ZonotopeCombinatorics {
    pub lattice: FlatLattice,
    pub whitney_second: Vec<i64>,
    pub whitney_first: Vec<i64>,
    pub cocharacteristic: Vec<i64>,
}

pub fn zonotope_combinatorics(cfg: &GeneratorConfiguration) -> ZonotopeCombinatorics {
    let lattice = flat_lattice(cfg, FlatOrientation::ByInclusion);
    let (second, first) = whitney_numbers(&lattice);
    let cochar = cocharacteristic(&lattice).expect("inclusion orientation");
    ZonotopeCombinatorics {
        lattice,
        whitney_second: second,
        whitney_first: first,
        cocharacteristic: cochar,
    }
}

/// Angle vectors of a zonotope against exact Whitney numbers (both kinds),
/// and flag-angle vectors against flag-Whitney numbers.
pub fn check_zonotope_whitney(
    system: &AngleSystem,
    cfg: &GeneratorConfiguration,
    include_flags: bool,
) -> CheckReport {
    let d = cfg.dim();
    let comb = zonotope_combinatorics(cfg);
    let lam = comb.lattice.poset();
    let lam_op = Arc::new(lam.opposite());
    let mut items = Vec::new();

    let ext = system.angle_vector(Side::Exterior);
    let int = system.angle_vector(Side::Interior);
    for i in 0..d {
        items.push(CheckItem::against_constant(
            format!("exterior angle entry {i} = W_{i}"),
            &ext.entries[i],
            comb.whitney_second[i] as f64,
        ));
        let expected = {
            // (-1)^(d-i) w_{d-i}(op)
            let w = lam_op.flag_whitney_first(&[d - i]);
            let sign = if (d - i) % 2 == 0 { 1.0 } else { -1.0 };
            sign * w as f64
        };
        items.push(CheckItem::against_constant(
            format!("interior angle entry {i} = (-1)^(d-i) w_(d-i)(op)"),
            &int.entries[i],
            expected,
        ));
    }

    if include_flags {
        let fe = system.flag_angle_vector(Side::Exterior);
        let fi = system.flag_angle_vector(Side::Interior);
        for mask in 1u32..(1 << d) {
            let s: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
            let w2 = lam.flag_whitney_second(&s) as f64;
            items.push(CheckItem::against_constant(
                format!("exterior flag {s:?} = W_S"),
                &fe.get(&s),
                w2,
            ));
            let r = s[0];
            let d_minus_s: Vec<usize> = s.iter().rev().map(|&x| d - x).collect();
            let w1 = lam_op.flag_whitney_first(&d_minus_s);
            let sign = if (d - r) % 2 == 0 { 1.0 } else { -1.0 };
            items.push(CheckItem::against_constant(
                format!("interior flag {s:?} = (-1)^(d-min S) w_(d-S)(op)"),
                &fi.get(&s),
                sign * w1 as f64,
            ));
        }
    }
    CheckReport {
        title: format!("zonotope whitney equalities, spec {}", system.spec.name),
        items,
    }
}

/// Pairwise agreement of (flag-)angle vectors across several valuations.
pub fn check_angle_independence(
    systems: &[&AngleSystem],
    include_flags: bool,
) -> CheckReport {
    let mut items = Vec::new();
    for i in 0..systems.len() {
        for j in i + 1..systems.len() {
            let (a, b) = (systems[i], systems[j]);
            for side in [Side::Interior, Side::Exterior] {
                let va = a.angle_vector(side);
                let vb = b.angle_vector(side);
                for (k, (ea, eb)) in va.entries.iter().zip(&vb.entries).enumerate() {
                    items.push(CheckItem::between_estimates(
                        format!(
                            "{:?} entry {k}: {} vs {}",
                            side, a.spec.name, b.spec.name
                        ),
                        ea,
                        eb,
                    ));
                }
                if include_flags {
                    let fa = a.flag_angle_vector(side);
                    let fb = b.flag_angle_vector(side);
                    for (s, ea) in &fa.entries {
                        if s.is_empty() {
                            continue;
                        }
                        items.push(CheckItem::between_estimates(
                            format!(
                                "{:?} flag {s:?}: {} vs {}",
                                side, a.spec.name, b.spec.name
                            ),
                            ea,
                            &fb.get(s),
                        ));
                    }
                }
            }
        }
    }
    CheckReport { title: "independence of the valuation".into(), items }
}

/// Spherical intrinsic volumes of a belt polytope against |w_k| of its
/// lattice of flats.
pub fn check_intrinsic_volumes(
    system: &AngleSystem,
    cfg: &GeneratorConfiguration,
) -> CheckReport {
    let comb = zonotope_combinatorics(cfg);
    let vols = system.spherical_intrinsic_volumes();
    let items = vols
        .iter()
        .enumerate()
        .map(|(k, e)| {
            CheckItem::against_constant(
                format!("intrinsic volume {k} = |w_{k}|"),
                e,
                comb.whitney_first[k].abs() as f64,
            )
        })
        .collect();
    CheckReport {
        title: format!("spherical intrinsic volumes, spec {}", system.spec.name),
        items,
    }
}

/// The map F -> L(F) from the face lattice of a belt polytope onto its
/// lattice of flats with an adjoined minimum, as a rank-preserving
/// surjection usable for pushforwards.
pub fn belt_flat_map(
    system: &AngleSystem,
    lattice: &FlatLattice,
) -> Result<(PosetMap, Arc<GradedPoset>), Error> {
    if lattice.orientation != FlatOrientation::ByInclusion {
        return Err(Error::Invalid("flat map wants the inclusion orientation".into()));
    }
    let lam0 = Arc::new(lattice.poset().adjoin_bottom("empty"));
    let p = &system.polytope;
    let mut map = Vec::with_capacity(p.faces().len());
    for id in 0..p.faces().len() {
        if id == p.empty_face() {
            map.push(lam0.bottom());
        } else {
            let span = p.face_span(id);
            let flat = lattice
                .flat_of_subspace(span)
                .ok_or_else(|| Error::Invalid("face span is not a flat".into()))?;
            map.push(flat + 1); // adjoin_bottom shifts indices by one
        }
    }
    let phi = PosetMap::new(system.poset.clone(), lam0.clone(), map)?;
    Ok((phi, lam0))
}

/// Tolerance-aware equality to a constant, mirroring `Estimate::agrees_with`
/// but exposed for report assembly.
pub fn within_tolerance(value: f64, expected: f64, sigma: f64) -> bool {
    (value - expected).abs() <= (4.0 * sigma).max(TOL_FLOOR)
}
