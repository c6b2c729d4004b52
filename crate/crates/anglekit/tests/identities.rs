//! Cross-module identity and property tests: polarity, Euler-Poincaré,
//! covector partitions, valuation additivity, pushforward adjunction,
//! reciprocity, and the ab-index round trip.

use std::sync::Arc;

use proptest::prelude::*;

use anglekit::abindex::{ab_index, flag_vector_from_ab_index, AbPolynomial, Word};
use anglekit::angle::{BodyOracle, ConeAngleSpec};
use anglekit::cone::Cone;
use anglekit::conegroup::{ae_equal, gram_combination, ConeCombination};
use anglekit::incidence::{random_unipotent, reciprocity_check, IncidenceFunction, PosetMap};
use anglekit::linalg::{RatMat, RatVec};
use anglekit::polytope::Polytope;
use anglekit::poset::GradedPoset;
use anglekit::rat::{rat, ratio, Rat};
use anglekit::vectors::{AngleSystem, Side};
use anglekit::zonotope::{
    covector_of_point, covectors, flat_lattice, generic_configuration, whitney_numbers,
    zonotope, FlatOrientation, GeneratorConfiguration,
};

fn v(c: &[i64]) -> RatVec {
    RatVec::from_ints(c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_polar_is_identity(dim in 2usize..=3, gens in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..=4)) {
        let gens: Vec<RatVec> = gens
            .into_iter()
            .map(|mut c| {
                c.truncate(dim);
                while c.len() < dim { c.push(0); }
                RatVec::from_ints(&c)
            })
            .collect();
        let cone = Cone::from_generators(gens, dim);
        let pp = cone.polar().polar();
        prop_assert!(pp.eq_as_set(&cone).unwrap());
    }

    #[test]
    fn euler_poincare_on_random_hulls(dim in 2usize..=3, pts in prop::collection::vec(prop::collection::vec(-3i64..=3, 3), 4..=7)) {
        let pts: Vec<RatVec> = pts
            .into_iter()
            .map(|mut c| {
                c.truncate(dim);
                while c.len() < dim { c.push(0); }
                RatVec::from_ints(&c)
            })
            .collect();
        if let Ok(p) = Polytope::convex_hull(pts) {
            let f = p.f_vector();
            let alternating: i64 = f
                .iter()
                .enumerate()
                .map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) })
                .sum();
            prop_assert_eq!(alternating, 1 - (-1i64).pow(p.dim() as u32));
        }
    }

    #[test]
    fn tangent_cone_independent_of_interior_point(wa in 1i64..=7, wb in 1i64..=7) {
        // two relative-interior points of an edge of the cube give one cone
        let p = anglekit::fixtures::cube(3);
        let edge = p
            .faces_of_dim(1)
            .into_iter()
            .next()
            .unwrap();
        let verts = &p.face(edge).vertex_set;
        let a = &p.vertices()[verts[0]];
        let b = &p.vertices()[verts[1]];
        let total = rat(wa + wb);
        let q1 = a.scale(&(rat(wa) / &total)).add(&b.scale(&(rat(wb) / &total)));
        let q2 = p.barycenter(edge).unwrap();
        let t1 = p.tangent_cone_at_point(edge, &q1).unwrap();
        let t2 = p.tangent_cone_at_point(edge, &q2).unwrap();
        prop_assert!(t1.eq_as_set(&t2).unwrap());
    }

    #[test]
    fn leibniz_rule_for_derivations(bits1 in 0u32..16, len1 in 1u8..=4, bits2 in 0u32..16, len2 in 1u8..=4, prime in any::<bool>()) {
        let x = AbPolynomial::monomial(Word { len: len1, bits: bits1 & ((1 << len1) - 1) }, 1);
        let y = AbPolynomial::monomial(Word { len: len2, bits: bits2 & ((1 << len2) - 1) }, 1);
        let lhs = anglekit::abindex::derivation(&x.mul(&y), prime);
        let rhs = anglekit::abindex::derivation(&x, prime)
            .mul(&y)
            .add(&x.mul(&anglekit::abindex::derivation(&y, prime)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reciprocity_for_random_unipotent(seed in 0u64..1000, gseed in 0u64..1000) {
        let poset = GradedPoset::random(seed, 4);
        let g = random_unipotent(poset, gseed);
        prop_assert!(reciprocity_check(&g).unwrap());
    }

    #[test]
    fn ab_index_round_trip_on_random_posets(seed in 0u64..500) {
        let poset = GradedPoset::random(seed, 4);
        let d = poset.height().saturating_sub(1);
        let psi = ab_index(&poset);
        let flags = flag_vector_from_ab_index(&psi, d);
        for (s, w) in flags {
            prop_assert_eq!(w, poset.flag_whitney_second(&s));
        }
    }
}

#[test]
fn covector_partition_ten_thousand_points() {
    use rand::{RngExt, SeedableRng};
    let cfg = GeneratorConfiguration::new(
        vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1]), v(&[1, 1, 1]), v(&[1, -1, 2])],
        3,
    )
    .unwrap();
    let cvs = covectors(&cfg);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for _ in 0..10_000 {
        let p = RatVec::new(
            (0..3)
                .map(|_| ratio(rng.random_range(-8 * 65536..=8 * 65536), 65536))
                .collect(),
        );
        let cv = covector_of_point(&cfg, &p);
        assert_eq!(cvs.iter().filter(|x| **x == cv).count(), 1, "point {p:?}");
    }
}

#[test]
fn zaslavsky_region_count() {
    // number of regions = |chi(-1)| with chi from the Whitney numbers
    for (d, n, seed) in [(2, 3, 1u64), (2, 4, 2), (3, 4, 3), (3, 5, 4), (4, 5, 5)] {
        let cfg = generic_configuration(d, n, seed);
        let lattice = flat_lattice(&cfg, FlatOrientation::ByInclusion);
        let (_, w) = whitney_numbers(&lattice);
        let chi_at_minus1: i64 = w
            .iter()
            .enumerate()
            .map(|(i, &wi)| wi * (-1i64).pow((d - i) as u32))
            .sum();
        let regions = covectors(&cfg).iter().filter(|c| c.is_region()).count() as i64;
        assert_eq!(regions, chi_at_minus1.abs(), "(d,n)=({d},{n})");
    }
}

#[test]
fn zonotope_faces_match_covector_ranks() {
    // #covectors whose zero set spans a rank-i flat = #faces with dim L(F) = i
    for (d, n, seed) in [(2, 3, 1u64), (2, 4, 7), (3, 4, 2)] {
        let cfg = generic_configuration(d, n, seed);
        let z = zonotope(&cfg).unwrap();
        let cvs = covectors(&cfg);
        for i in 0..=d {
            let from_covectors = cvs
                .iter()
                .filter(|c| {
                    let zero_gens: Vec<RatVec> = c
                        .zero_set()
                        .iter()
                        .map(|&j| cfg.generators()[j].clone())
                        .collect();
                    let rank = if zero_gens.is_empty() {
                        0
                    } else {
                        RatMat::from_rows(zero_gens).rank()
                    };
                    rank == i
                })
                .count();
            let from_faces = (0..z.faces().len())
                .filter(|&f| {
                    z.face(f).dim >= 0 && z.face_span(f).dim() == i && f != z.top_face()
                })
                .count()
                + usize::from(i == d); // the zonotope itself spans rank d
            assert_eq!(from_covectors, from_faces, "(d,n)=({d},{n}) flat rank {i}");
        }
    }
}

#[test]
fn valuation_additivity_under_splits() {
    // split a full-dimensional cone by a hyperplane; the valuation of the
    // whole must match the sum of the parts within combined error
    use rand::{RngExt, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let specs = [
        ConeAngleSpec::standard(),
        ConeAngleSpec::body(BodyOracle::canonical(3)),
        ConeAngleSpec::point_limit(v(&[1, 0, 0])),
    ];
    let mut done = 0;
    let mut attempts = 0;
    while done < 50 {
        attempts += 1;
        assert!(attempts < 2000, "not enough valid splits found");
        let gens: Vec<RatVec> =
            (0..4).map(|_| RatVec::from_ints(&[(rng.random_range(-3i64..=3)), rng.random_range(-3..=3), rng.random_range(-3..=3)])).collect();
        if gens.iter().any(|g| g.is_zero()) {
            continue;
        }
        let cone = Cone::from_generators(gens, 3);
        if !cone.is_full_dimensional() || cone.is_full_space() {
            continue;
        }
        let h = RatVec::from_ints(&[
            rng.random_range(-3i64..=3),
            rng.random_range(-3..=3),
            rng.random_range(-3..=3),
        ]);
        if h.is_zero() {
            continue;
        }
        let mut ineqs_a = cone.inequalities().to_vec();
        ineqs_a.push(h.clone());
        let a = Cone::from_inequalities(&ineqs_a, 3);
        let mut ineqs_b = cone.inequalities().to_vec();
        ineqs_b.push(h.neg());
        let b = Cone::from_inequalities(&ineqs_b, 3);
        // a genuine split: both parts full-dimensional
        if !a.is_full_dimensional() || !b.is_full_dimensional() {
            continue;
        }
        let spec = &specs[done % specs.len()];
        let whole = spec.evaluate(&cone, 40_000, 7 + done as u64, 1).unwrap();
        let pa = spec.evaluate(&a, 40_000, 1007 + done as u64, 1).unwrap();
        let pb = spec.evaluate(&b, 40_000, 2007 + done as u64, 1).unwrap();
        let sum = pa.add(&pb);
        assert!(
            whole.agrees_with_estimate(&sum),
            "split {done} failed for {}: {whole:?} vs {sum:?}",
            spec.name
        );
        done += 1;
    }
}

#[test]
fn valuations_respect_ae_equal_combinations() {
    // applying any valuation term-by-term to an a.e.-equal pair of
    // combinations gives the same value within combined tolerance
    let p = anglekit::fixtures::cube(2);
    let lhs = gram_combination(&p).unwrap();
    let rhs = ConeCombination::full_space(2, -1);
    assert!(ae_equal(&lhs, &rhs, 500, 3).unwrap().is_equal());
    for spec in [
        ConeAngleSpec::standard(),
        ConeAngleSpec::body(BodyOracle::canonical(2)),
        ConeAngleSpec::point_limit(v(&[1, 0])),
    ] {
        let apply = |f: &ConeCombination, salt: u64| {
            let mut acc = anglekit::estimate::Estimate::zero();
            for (i, t) in f.terms().iter().enumerate() {
                let e = spec.evaluate(&t.cone, 60_000, salt + i as u64, 1).unwrap();
                acc = acc.add(&e.scale(t.coefficient as f64));
            }
            acc
        };
        let a = apply(&lhs, 100);
        let b = apply(&rhs, 900);
        assert!(a.agrees_with_estimate(&b), "{}: {a:?} vs {b:?}", spec.name);
    }
}

/// Builds a fiber-blowup of a random poset together with a random element of
/// the pushforward subalgebra.
fn blowup_with_subalgebra_element(
    seed: u64,
) -> (PosetMap, IncidenceFunction<Rat>, IncidenceFunction<Rat>) {
    use rand::{RngExt, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let q = GradedPoset::random(seed, 3);
    // duplicate each element a random number of times; order: (x,i) <= (y,j)
    // iff x < y, or x = y and i = j
    let copies: Vec<usize> = (0..q.len()).map(|_| rng.random_range(1..=2)).collect();
    let mut labels = Vec::new();
    let mut ranks = Vec::new();
    let mut owner = Vec::new();
    for x in 0..q.len() {
        for i in 0..copies[x] {
            labels.push(format!("{}#{i}", q.label(x)));
            ranks.push(q.rank(x));
            owner.push(x);
        }
    }
    let n = labels.len();
    let mut leq = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = (a == b) || (owner[a] != owner[b] && q.leq(owner[a], owner[b]));
        }
    }
    // a blown-up top/bottom would not be unique; collapse extra copies there
    let p = match GradedPoset::from_leq(labels, ranks, leq) {
        Ok(p) => Arc::new(p),
        Err(_) => {
            // force single copies of bottom and top and retry
            return blowup_with_subalgebra_element(seed + 7919);
        }
    };
    let phi = PosetMap::new(p.clone(), q.clone(), owner).unwrap();
    // random h in the subalgebra: make fiber-column sums constant
    let mut h = IncidenceFunction::delta(p.clone());
    for qq in 0..q.len() {
        for qp in 0..q.len() {
            if !q.leq(qq, qp) || qq == qp {
                continue;
            }
            let fiber_q = phi.fiber(qq);
            let fiber_qp = phi.fiber(qp);
            let target = ratio(rng.random_range(-6i64..=6), rng.random_range(1..=3));
            for (col, &pp) in fiber_qp.iter().enumerate() {
                // distribute the target sum over the fiber column
                let mut remaining = target.clone();
                for (row, &pl) in fiber_q.iter().enumerate() {
                    let val = if row + 1 == fiber_q.len() {
                        remaining.clone()
                    } else {
                        let x = ratio(rng.random_range(-3i64..=3), 1 + (col as i64 % 2));
                        remaining = &remaining - &x;
                        x
                    };
                    h.set(pl, pp, val).unwrap();
                }
            }
        }
    }
    let g = random_unipotent(q, seed ^ 0xabc);
    (phi, h, g)
}

#[test]
fn pushforward_adjunction_on_random_pairs() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let (phi, h, g) = blowup_with_subalgebra_element(seed * 31 + 1);
        if !phi.is_rank_preserving() {
            continue;
        }
        let pushed = match phi.pushforward(&h) {
            Ok(p) => p,
            Err(e) => panic!("constructed h should satisfy the fiber condition: {e}"),
        };
        // adjunction at (bottom, p') for every p': full convolution
        let lhs = phi.pullback(&g).unwrap().convolve(&h).unwrap();
        let rhs = g.convolve(&pushed).unwrap();
        let bot = phi.from.bottom();
        for pp in 0..phi.from.len() {
            assert_eq!(
                lhs.get(bot, pp),
                rhs.get(phi.map[bot], phi.map[pp]),
                "adjunction fails at seed {seed} p'={pp}"
            );
        }
        // rank-truncated version
        for k in 0..=phi.from.height() {
            let lhs_k = phi.pullback(&g).unwrap().convolve_at_rank(&h, k).unwrap();
            let rhs_k = g.convolve_at_rank(&pushed, k).unwrap();
            for pp in 0..phi.from.len() {
                assert_eq!(
                    lhs_k.get(bot, pp),
                    rhs_k.get(phi.map[bot], phi.map[pp]),
                    "k-adjunction fails at seed {seed} k={k}"
                );
            }
        }
        // pushforward is an algebra map on the subalgebra: phi_*(h * h) = phi_*h * phi_*h
        let hh = h.convolve(&h).unwrap();
        let lhs_alg = phi.pushforward(&hh).unwrap();
        let rhs_alg = pushed.convolve(&pushed).unwrap();
        for a in 0..phi.to.len() {
            for b in 0..phi.to.len() {
                assert_eq!(lhs_alg.get(a, b), rhs_alg.get(a, b), "algebra map fails at seed {seed}");
            }
        }
        checked += 1;
        if checked >= 10 {
            break;
        }
    }
    assert!(checked >= 10, "only {checked} rank-preserving pairs generated");
}

#[test]
fn angle_incidence_functions_lie_in_pushforward_subalgebra() {
    // for a belt polytope the exterior angles satisfy the fiber condition
    // along F -> L(F), and push to the zeta function
    let cfg = generic_configuration(2, 3, 5);
    let p = Arc::new(zonotope(&cfg).unwrap());
    let sys = AngleSystem::build(&ConeAngleSpec::standard(), p, 50_000, 3, 2).unwrap();
    let lattice = flat_lattice(&cfg, FlatOrientation::ByInclusion);
    let (phi, lam0) = anglekit::vectors::belt_flat_map(&sys, &lattice).unwrap();
    let pushed = phi.pushforward(&sys.exterior).unwrap();
    for a in 0..lam0.len() {
        for b in 0..lam0.len() {
            if lam0.leq(a, b) {
                assert!(pushed.get(a, b).agrees_with(1.0));
            }
        }
    }
    let mu = lam0.moebius_table();
    let pushed_signed = phi.pushforward(&sys.signed_interior()).unwrap();
    for a in 0..lam0.len() {
        for b in 0..lam0.len() {
            if lam0.leq(a, b) {
                assert!(pushed_signed.get(a, b).agrees_with(mu[a][b] as f64));
            }
        }
    }
}

#[test]
fn tangent_and_outer_cones_are_full_dimensional() {
    for name in ["simplex 3", "cross 4", "pyramid 3"] {
        let p = anglekit::fixtures::fixture(name).unwrap().polytope;
        for id in 0..p.faces().len() {
            if p.face(id).dim < 0 {
                continue;
            }
            assert!(p.tangent_cone(id).unwrap().is_full_dimensional(), "{name} face {id}");
            assert!(p.outer_cone(id).unwrap().is_full_dimensional(), "{name} face {id}");
        }
    }
}

#[test]
fn replay_determinism_bit_identical() {
    // same (spec, polytope, budget, seed, workers) => bit-identical systems
    let p = Arc::new(anglekit::fixtures::fixture("generic 3 4 1").unwrap().polytope);
    let spec = ConeAngleSpec::standard();
    let a = AngleSystem::build(&spec, p.clone(), 30_000, 99, 2).unwrap();
    let b = AngleSystem::build(&spec, p.clone(), 30_000, 99, 2).unwrap();
    for side in [Side::Interior, Side::Exterior] {
        let va = a.angle_vector(side);
        let vb = b.angle_vector(side);
        for (x, y) in va.entries.iter().zip(&vb.entries) {
            assert_eq!(x, y);
        }
        let fa = a.flag_angle_vector(side);
        let fb = b.flag_angle_vector(side);
        assert_eq!(fa.entries.len(), fb.entries.len());
        for (s, e) in &fa.entries {
            assert_eq!(*e, fb.get(s), "set {s:?}");
        }
    }
    // a different seed draws a different stream
    let c = AngleSystem::build(&spec, p, 30_000, 100, 2).unwrap();
    assert_ne!(
        a.angle_vector(Side::Interior).entries[0].value,
        c.angle_vector(Side::Interior).entries[0].value
    );
}

#[test]
fn face_lattice_moebius_alternates_by_dimension() {
    // mu(F, G) = (-1)^(dim G - dim F) on face lattices
    for name in ["square", "simplex 3", "cube 3"] {
        let p = anglekit::fixtures::fixture(name).unwrap().polytope;
        let poset = p.face_poset();
        let mu = poset.moebius_table();
        for a in 0..poset.len() {
            for b in 0..poset.len() {
                if poset.leq(a, b) {
                    let gap = (poset.rank(b) - poset.rank(a)) as u32;
                    assert_eq!(mu[a][b], (-1i64).pow(gap), "{name} ({a},{b})");
                }
            }
        }
        // in particular mu(empty, P) = (-1)^(dim P + 1)
        assert_eq!(
            mu[poset.bottom()][poset.top()],
            (-1i64).pow(p.dim() as u32 + 1)
        );
    }
}

#[test]
fn polarity_on_random_hulls() {
    use rand::{RngExt, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31337);
    let mut done = 0;
    while done < 8 {
        let pts: Vec<RatVec> = (0..6)
            .map(|_| v(&[rng.random_range(-3i64..=3), rng.random_range(-3..=3), rng.random_range(-3..=3)]))
            .collect();
        let Ok(p) = Polytope::convex_hull(pts) else { continue };
        if !matches!(p.dim(), 3) {
            continue;
        }
        for vid in p.faces_of_dim(0) {
            let n = p.normal_cone(vid).unwrap();
            let t = p.tangent_cone(vid).unwrap();
            assert!(n.polar().eq_as_set(&t).unwrap());
        }
        done += 1;
    }
}

#[test]
fn m_operator_matches_free_extension_geometry() {
    // lattice of flats of Z + [0,u] for generic u = M applied to the lattice
    let cfg = GeneratorConfiguration::new(vec![v(&[1, 0]), v(&[0, 1])], 2).unwrap();
    let lattice = flat_lattice(&cfg, FlatOrientation::ByInclusion);
    let m = lattice.poset().m_operator().unwrap();
    // geometric side: add a generic generator
    let extended = GeneratorConfiguration::new(
        vec![v(&[1, 0]), v(&[0, 1]), v(&[2, 3])],
        2,
    )
    .unwrap();
    let ext_lattice = flat_lattice(&extended, FlatOrientation::ByInclusion);
    assert!(m.is_isomorphic(ext_lattice.poset()));
}
