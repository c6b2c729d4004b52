//! Formal integer combinations of cone indicators, evaluated pointwise, with
//! an almost-everywhere equality test over exact rational sample points.
//! Operationally this is the simple cone group: two combinations are
//! identified when they agree off a finite union of hyperplanes.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cone::Cone;
use crate::error::Error;
use crate::linalg::RatVec;
use crate::polytope::Polytope;
use crate::rat::ratio;

/// One term of a combination: an integer multiple of a cone indicator; the
/// `open` flag evaluates the interior indicator instead (used for the
/// right-hand side of the conical Brianchon-Gram identity).
#[derive(Clone, Debug)]
pub struct ConeTerm {
    pub coefficient: i64,
    pub cone: Cone,
    pub open: bool,
}

#[derive(Clone, Debug)]
pub struct ConeCombination {
    terms: Vec<ConeTerm>,
    ambient_dim: usize,
}

impl ConeCombination {
    pub fn new(ambient_dim: usize) -> Self {
        ConeCombination { terms: vec![], ambient_dim }
    }

    pub fn with_term(mut self, coefficient: i64, cone: Cone) -> Self {
        debug_assert_eq!(cone.ambient_dim(), self.ambient_dim);
        self.terms.push(ConeTerm { coefficient, cone, open: false });
        self
    }

    pub fn with_open_term(mut self, coefficient: i64, cone: Cone) -> Self {
        debug_assert_eq!(cone.ambient_dim(), self.ambient_dim);
        self.terms.push(ConeTerm { coefficient, cone, open: true });
        self
    }

    pub fn full_space(ambient_dim: usize, coefficient: i64) -> Self {
        Self::new(ambient_dim).with_term(coefficient, Cone::full_space(ambient_dim))
    }

    pub fn terms(&self) -> &[ConeTerm] {
        &self.terms
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Exact pointwise evaluation: sum of coefficients of the terms whose
    /// cone contains the point.
    pub fn evaluate_at(&self, p: &RatVec) -> Result<i64, Error> {
        if p.dim() != self.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, got: p.dim() });
        }
        let mut acc = 0i64;
        for t in &self.terms {
            let inside = if t.open {
                t.cone.contains_interior(p)?
            } else {
                t.cone.contains(p)?
            };
            if inside {
                acc += t.coefficient;
            }
        }
        Ok(acc)
    }

    /// Is the point on a boundary hyperplane of any term (exactly)?
    fn on_any_boundary(&self, p: &RatVec) -> bool {
        self.terms.iter().any(|t| t.cone.on_boundary_hyperplane(p))
    }
}

/// Outcome of an almost-everywhere equality test. Disagreement is definitive
/// (the witness point is generic); agreement is sampled evidence.
#[derive(Clone, Debug)]
pub enum AeVerdict {
    Equal { trials: u64 },
    Differs { witness: RatVec, lhs: i64, rhs: i64 },
}

impl AeVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, AeVerdict::Equal { .. })
    }
}

/// Samples generic rational points in the box [-8, 8]^d with denominators
/// 2^16, rejecting points on any boundary hyperplane of any term (detected
/// exactly), and compares the two combinations pointwise.
pub fn ae_equal(
    f: &ConeCombination,
    g: &ConeCombination,
    trials: u64,
    seed: u64,
) -> Result<AeVerdict, Error> {
    if f.ambient_dim != g.ambient_dim {
        return Err(Error::DimensionMismatch { expected: f.ambient_dim, got: g.ambient_dim });
    }
    let d = f.ambient_dim;
    const DENOM: i64 = 1 << 16;
    let points: Vec<RatVec> = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xae0_eab);
        let mut pts = Vec::with_capacity(trials as usize);
        while (pts.len() as u64) < trials {
            let p = RatVec::new(
                (0..d)
                    .map(|_| ratio(rng.random_range(-8 * DENOM..=8 * DENOM), DENOM))
                    .collect(),
            );
            if f.on_any_boundary(&p) || g.on_any_boundary(&p) {
                continue;
            }
            pts.push(p);
        }
        pts
    };
    let outcomes: Vec<Option<(usize, i64, i64)>> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let a = f.evaluate_at(p).expect("dimensions checked");
            let b = g.evaluate_at(p).expect("dimensions checked");
            if a != b {
                Some((i, a, b))
            } else {
                None
            }
        })
        .collect();
    // first witness by trial index wins, deterministically
    if let Some((i, lhs, rhs)) = outcomes.into_iter().flatten().min_by_key(|w| w.0) {
        return Ok(AeVerdict::Differs { witness: points[i].clone(), lhs, rhs });
    }
    Ok(AeVerdict::Equal { trials })
}

/// Both sides of the conical Brianchon-Gram identity for a full-dimensional
/// cone: the alternating sum of tangent-cone indicators over all nonempty
/// faces against (-1)^dim [int(-C)].
pub fn brianchon_gram(cone: &Cone) -> Result<(ConeCombination, ConeCombination), Error> {
    if !cone.is_full_dimensional() {
        return Err(Error::Degenerate("Brianchon-Gram needs a full-dimensional cone".into()));
    }
    let d = cone.ambient_dim();
    let mut lhs = ConeCombination::new(d);
    for face in cone.faces() {
        let sign = if face.dim % 2 == 0 { 1 } else { -1 };
        lhs = lhs.with_term(sign, cone.tangent_at(&face));
    }
    let sign = if d % 2 == 0 { 1 } else { -1 };
    let rhs = ConeCombination::new(d).with_open_term(sign, cone.negated());
    Ok((lhs, rhs))
}

/// The Gram combination of a full-dimensional polytope: the alternating sum
/// of tangent-cone indicators over the proper nonempty faces. It agrees
/// almost everywhere with (-1)^(d+1) [R^d].
pub fn gram_combination(p: &Polytope) -> Result<ConeCombination, Error> {
    if !p.is_full_dimensional() {
        return Err(Error::Degenerate("Gram combination needs a full-dimensional polytope".into()));
    }
    let d = p.ambient_dim();
    let mut lhs = ConeCombination::new(d);
    for id in 0..p.faces().len() {
        let dim = p.face(id).dim;
        if dim < 0 || id == p.top_face() {
            continue;
        }
        let sign = if dim % 2 == 0 { 1 } else { -1 };
        lhs = lhs.with_term(sign, p.tangent_cone(id)?);
    }
    Ok(lhs)
}

/// Sum of outer-cone indicators over the vertices; equals [R^d] a.e.
pub fn vertex_partition_combination(p: &Polytope) -> Result<ConeCombination, Error> {
    let d = p.ambient_dim();
    let mut out = ConeCombination::new(d);
    for v in p.faces_of_dim(0) {
        out = out.with_term(1, p.outer_cone(v)?);
    }
    Ok(out)
}

/// A valuation identity sanity check: Σ a_i [C_i] evaluated at many points.
pub fn evaluate_many(
    f: &ConeCombination,
    points: &[RatVec],
) -> Result<Vec<i64>, Error> {
    points.iter().map(|p| f.evaluate_at(p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::cube_fixture;
    use num_traits::Signed;

    fn v(c: &[i64]) -> RatVec {
        RatVec::from_ints(c)
    }

    #[test]
    fn evaluate_full_space() {
        let f = ConeCombination::full_space(2, 1);
        assert_eq!(f.evaluate_at(&v(&[3, -5])).unwrap(), 1);
    }

    #[test]
    fn evaluate_signed_combination() {
        let quad = Cone::from_generators(vec![v(&[1, 0]), v(&[0, 1])], 2);
        let f = ConeCombination::full_space(2, -1).with_term(1, quad);
        assert_eq!(f.evaluate_at(&v(&[-1, -1])).unwrap(), -1);
        assert_eq!(f.evaluate_at(&v(&[1, 1])).unwrap(), 0);
    }

    #[test]
    fn ae_equal_syntactic() {
        let f = ConeCombination::full_space(2, 1);
        assert!(ae_equal(&f, &f.clone(), 100, 0).unwrap().is_equal());
    }

    #[test]
    fn ae_unequal_quadrant_vs_plane() {
        let quad = Cone::from_generators(vec![v(&[1, 0]), v(&[0, 1])], 2);
        let f = ConeCombination::new(2).with_term(1, quad);
        let g = ConeCombination::full_space(2, 1);
        match ae_equal(&f, &g, 200, 0).unwrap() {
            AeVerdict::Differs { witness, lhs, rhs } => {
                assert_eq!(lhs, 0);
                assert_eq!(rhs, 1);
                // the witness lies outside the quadrant
                assert!(witness.coords[0].is_negative() || witness.coords[1].is_negative());
            }
            AeVerdict::Equal { .. } => panic!("quadrant should differ from the plane"),
        }
    }

    #[test]
    fn split_valuation_identity() {
        // [C1] + [C2] - [C1 ∪ C2] - [C1 ∩ C2] = 0 a.e. for the halfplane split
        // of the upper halfplane by the y-axis
        let c1 = Cone::from_generators(vec![v(&[1, 0]), v(&[0, 1])], 2);
        let c2 = Cone::from_generators(vec![v(&[-1, 0]), v(&[0, 1])], 2);
        let union = Cone::from_generators(vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])], 2);
        let inter = Cone::from_generators(vec![v(&[0, 1])], 2);
        let f = ConeCombination::new(2)
            .with_term(1, c1)
            .with_term(1, c2)
            .with_term(-1, union)
            .with_term(-1, inter);
        let g = ConeCombination::new(2); // zero
        assert!(ae_equal(&f, &g, 200, 1).unwrap().is_equal());
    }

    #[test]
    fn brianchon_gram_full_space() {
        let c = Cone::full_space(2);
        let (lhs, rhs) = brianchon_gram(&c).unwrap();
        assert!(ae_equal(&lhs, &rhs, 100, 2).unwrap().is_equal());
    }

    #[test]
    fn brianchon_gram_quadrant() {
        let c = Cone::from_generators(vec![v(&[1, 0]), v(&[0, 1])], 2);
        let (lhs, rhs) = brianchon_gram(&c).unwrap();
        assert!(ae_equal(&lhs, &rhs, 1000, 3).unwrap().is_equal());
    }

    #[test]
    fn brianchon_gram_hom_square() {
        let sq = cube_fixture(2);
        let hom = sq.homogenize();
        let (lhs, rhs) = brianchon_gram(&hom).unwrap();
        assert!(ae_equal(&lhs, &rhs, 1000, 4).unwrap().is_equal());
    }

    #[test]
    fn gram_combination_segment() {
        let seg = Polytope::new(vec![v(&[0]), v(&[1])]).unwrap();
        let lhs = gram_combination(&seg).unwrap();
        let rhs = ConeCombination::full_space(1, 1); // (-1)^{1+1}
        assert!(ae_equal(&lhs, &rhs, 200, 5).unwrap().is_equal());
    }

    #[test]
    fn gram_combination_square_and_simplex() {
        let sq = cube_fixture(2);
        let lhs = gram_combination(&sq).unwrap();
        let rhs = ConeCombination::full_space(2, -1); // (-1)^{2+1}
        assert!(ae_equal(&lhs, &rhs, 1000, 6).unwrap().is_equal());

        let simplex = Polytope::new(vec![
            v(&[0, 0, 0]),
            v(&[1, 0, 0]),
            v(&[0, 1, 0]),
            v(&[0, 0, 1]),
        ])
        .unwrap();
        let lhs = gram_combination(&simplex).unwrap();
        let rhs = ConeCombination::full_space(3, 1); // (-1)^{3+1}
        assert!(ae_equal(&lhs, &rhs, 1000, 7).unwrap().is_equal());
    }

    #[test]
    fn vertex_partition_of_cube() {
        let c = cube_fixture(3);
        let f = vertex_partition_combination(&c).unwrap();
        let g = ConeCombination::full_space(3, 1);
        assert!(ae_equal(&f, &g, 1000, 8).unwrap().is_equal());
    }

    #[test]
    fn ae_equal_symmetry_and_reflexivity() {
        let quad = Cone::from_generators(vec![v(&[1, 0]), v(&[0, 1])], 2);
        let f = ConeCombination::new(2).with_term(2, quad.clone());
        let g = ConeCombination::new(2).with_term(2, quad);
        assert!(ae_equal(&f, &f.clone(), 100, 9).unwrap().is_equal());
        assert!(ae_equal(&f, &g, 100, 10).unwrap().is_equal());
        assert!(ae_equal(&g, &f, 100, 11).unwrap().is_equal());
    }
}
