//! Convex polytopes from vertex descriptions, with exact facet enumeration,
//! the full face lattice, and the tangent / normal / outer cone
//! constructions at faces.
//!
//! Facets are found by brute force over all dim(P)-subsets of vertices:
//! exact, simple, and adequate for the desk scale this crate targets
//! (dimension at most five, a few dozen vertices).

use std::collections::HashMap;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde_json::Value;

use crate::cone::{subsets_of_size, Cone};
use crate::error::Error;
use crate::linalg::{LinearSubspace, RatMat, RatVec};
use crate::rat::{rat, Rat};

#[derive(Clone, Debug)]
pub struct Facet {
    /// Sorted indices of the vertices lying on the facet.
    pub vertex_set: Vec<usize>,
    /// Outer normal, inside the direction space of the polytope.
    pub normal: RatVec,
    /// `<normal, x> = offset` on the facet, `<= offset` on the polytope.
    pub offset: Rat,
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Sorted vertex indices; empty for the empty face.
    pub vertex_set: Vec<usize>,
    /// Geometric dimension; -1 for the empty face.
    pub dim: isize,
    /// Indices of facets whose vertex set contains this face (nonempty faces).
    pub facets_containing: Vec<usize>,
}

pub type FaceId = usize;

#[derive(Debug)]
pub struct Polytope {
    vertices: Vec<RatVec>,
    ambient_dim: usize,
    dim: usize,
    direction_space: LinearSubspace,
    complement_basis: Vec<RatVec>,
    facets: Vec<Facet>,
    faces: Vec<Face>,
    face_lookup: HashMap<Vec<usize>, FaceId>,
    face_spans: Vec<LinearSubspace>,
    cover_normals: OnceLock<HashMap<(FaceId, FaceId), RatVec>>,
}

impl Polytope {
    pub fn new(vertices: Vec<RatVec>) -> Result<Self, Error> {
        if vertices.is_empty() {
            return Err(Error::Degenerate("a polytope needs at least one vertex".into()));
        }
        let ambient_dim = vertices[0].dim();
        for v in &vertices {
            if v.dim() != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, got: v.dim() });
            }
        }
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if vertices[i] == vertices[j] {
                    return Err(Error::Degenerate(format!("duplicate vertices {i} and {j}")));
                }
            }
        }
        let diffs: Vec<RatVec> =
            vertices[1..].iter().map(|v| v.sub(&vertices[0])).collect();
        let direction_space = LinearSubspace::span(&diffs, ambient_dim);
        let dim = direction_space.dim();
        let complement_basis = direction_space.orthogonal_complement().basis().to_vec();

        let facets = if dim == 0 {
            vec![]
        } else {
            enumerate_facets(&vertices, dim, &complement_basis)?
        };

        let faces = build_face_lattice(&vertices, &facets);

        // Every listed vertex must be extreme, i.e. occur as a 0-face.
        for i in 0..vertices.len() {
            if !faces.iter().any(|f| f.vertex_set == vec![i]) {
                return Err(Error::Degenerate(format!(
                    "vertex {i} is not an extreme point of the hull"
                )));
            }
        }

        let face_lookup: HashMap<Vec<usize>, FaceId> = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.vertex_set.clone(), i))
            .collect();
        let face_spans: Vec<LinearSubspace> = faces
            .iter()
            .map(|f| {
                if f.vertex_set.is_empty() {
                    LinearSubspace::zero(ambient_dim)
                } else {
                    let base = &vertices[f.vertex_set[0]];
                    let d: Vec<RatVec> = f.vertex_set[1..]
                        .iter()
                        .map(|&j| vertices[j].sub(base))
                        .collect();
                    LinearSubspace::span(&d, ambient_dim)
                }
            })
            .collect();

        Ok(Polytope {
            vertices,
            ambient_dim,
            dim,
            direction_space,
            complement_basis,
            facets,
            faces,
            face_lookup,
            face_spans,
            cover_normals: OnceLock::new(),
        })
    }

    /// Builds the convex hull of a point set by discarding non-extreme
    /// points first. Intended for fixture and test generation.
    pub fn convex_hull(points: Vec<RatVec>) -> Result<Self, Error> {
        if points.is_empty() {
            return Err(Error::Degenerate("empty point set".into()));
        }
        let mut uniq: Vec<RatVec> = Vec::new();
        for p in points {
            if !uniq.contains(&p) {
                uniq.push(p);
            }
        }
        if uniq.len() == 1 {
            return Self::new(uniq);
        }
        let ambient = uniq[0].dim();
        let diffs: Vec<RatVec> = uniq[1..].iter().map(|v| v.sub(&uniq[0])).collect();
        let dir = LinearSubspace::span(&diffs, ambient);
        let dim = dir.dim();
        if dim == 0 {
            return Self::new(vec![uniq[0].clone()]);
        }
        let comp = dir.orthogonal_complement().basis().to_vec();
        let facets = enumerate_facets(&uniq, dim, &comp)?;
        let keep: Vec<RatVec> = (0..uniq.len())
            .filter(|&i| {
                let tight: Vec<RatVec> = facets
                    .iter()
                    .filter(|f| f.vertex_set.contains(&i))
                    .map(|f| f.normal.clone())
                    .collect();
                !tight.is_empty() && RatMat::from_rows(tight).rank() == dim
            })
            .map(|i| uniq[i].clone())
            .collect();
        Self::new(keep)
    }

    pub fn vertices(&self) -> &[RatVec] {
        &self.vertices
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

    pub fn direction_space(&self) -> &LinearSubspace {
        &self.direction_space
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// All faces, ordered by (dim, vertex set); index 0 is the empty face and
    /// the last index is the polytope itself.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn empty_face(&self) -> FaceId {
        0
    }

    pub fn top_face(&self) -> FaceId {
        self.faces.len() - 1
    }

    pub fn face_by_vertices(&self, vset: &[usize]) -> Option<FaceId> {
        let mut key = vset.to_vec();
        key.sort_unstable();
        self.face_lookup.get(&key).copied()
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces[id]
    }

    pub fn face_span(&self, id: FaceId) -> &LinearSubspace {
        &self.face_spans[id]
    }

    pub fn faces_of_dim(&self, d: isize) -> Vec<FaceId> {
        (0..self.faces.len()).filter(|&i| self.faces[i].dim == d).collect()
    }

    pub fn face_contains(&self, small: FaceId, large: FaceId) -> bool {
        let s = &self.faces[small].vertex_set;
        let l = &self.faces[large].vertex_set;
        s.iter().all(|v| l.binary_search(v).is_ok())
    }

    /// f-vector (f_0, ..., f_{dim-1}); proper faces only.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.dim as isize)
            .map(|d| self.faces_of_dim(d).len())
            .collect()
    }

    pub fn barycenter(&self, id: FaceId) -> Result<RatVec, Error> {
        let f = &self.faces[id];
        if f.vertex_set.is_empty() {
            return Err(Error::EmptyFace);
        }
        let mut sum = RatVec::zeros(self.ambient_dim);
        for &i in &f.vertex_set {
            sum = sum.add(&self.vertices[i]);
        }
        let n = rat(f.vertex_set.len() as i64);
        Ok(sum.scale(&n.recip()))
    }

    /// Tangent cone at a nonempty face: cone(P - q) + L(P)^perp for q in the
    /// relative interior of the face (the vertex barycenter). Inequalities
    /// come straight from the facets containing the face.
    pub fn tangent_cone(&self, id: FaceId) -> Result<Cone, Error> {
        let q = self.barycenter(id)?;
        self.tangent_cone_at_point(id, &q)
    }

    /// Same construction from an explicit relative-interior point (the result
    /// must not depend on the choice; tests exercise that).
    pub fn tangent_cone_at_point(&self, id: FaceId, q: &RatVec) -> Result<Cone, Error> {
        let f = &self.faces[id];
        if f.vertex_set.is_empty() {
            return Err(Error::EmptyFace);
        }
        let mut gens: Vec<RatVec> = self.vertices.iter().map(|v| v.sub(q)).collect();
        for b in &self.complement_basis {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        let ineqs: Vec<RatVec> = f
            .facets_containing
            .iter()
            .map(|&j| self.facets[j].normal.neg())
            .collect();
        Ok(Cone::with_inequalities(gens, self.ambient_dim, ineqs))
    }

    /// Normal cone at a nonempty face: outer normals of the facets containing
    /// it, plus L(P)^perp as lineality.
    pub fn normal_cone(&self, id: FaceId) -> Result<Cone, Error> {
        let f = &self.faces[id];
        if f.vertex_set.is_empty() {
            return Err(Error::EmptyFace);
        }
        let mut gens: Vec<RatVec> = f
            .facets_containing
            .iter()
            .map(|&j| self.facets[j].normal.clone())
            .collect();
        for b in &self.complement_basis {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        Ok(Cone::from_generators(gens, self.ambient_dim))
    }

    /// Outer cone O_F P = N_F P + L(F); always full-dimensional.
    pub fn outer_cone(&self, id: FaceId) -> Result<Cone, Error> {
        let f = &self.faces[id];
        if f.vertex_set.is_empty() {
            return Err(Error::EmptyFace);
        }
        let mut gens: Vec<RatVec> = f
            .facets_containing
            .iter()
            .map(|&j| self.facets[j].normal.clone())
            .collect();
        for b in &self.complement_basis {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        for b in self.face_spans[id].basis() {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        Ok(Cone::from_generators(gens, self.ambient_dim))
    }

    /// Facets of a face G: faces H < G with dim H = dim G - 1.
    pub fn face_children(&self, g: FaceId) -> Vec<FaceId> {
        let gd = self.faces[g].dim;
        (0..self.faces.len())
            .filter(|&h| self.faces[h].dim == gd - 1 && self.faces[h].dim >= 0 && self.face_contains(h, g))
            .collect()
    }

    /// Outer normal of the cover pair H < G (a facet H of the face G), lying
    /// in L(G) and orthogonal to L(H).
    pub fn cover_normal(&self, h: FaceId, g: FaceId) -> &RatVec {
        let map = self.cover_normals.get_or_init(|| self.compute_cover_normals());
        map.get(&(h, g)).expect("cover pair of faces")
    }

    fn compute_cover_normals(&self) -> HashMap<(FaceId, FaceId), RatVec> {
        let mut out = HashMap::new();
        for g in 0..self.faces.len() {
            if self.faces[g].dim < 1 {
                continue;
            }
            for h in self.face_children(g) {
                // n in L(G), n ⊥ L(H): 1-dimensional solution space.
                let mut rows: Vec<RatVec> = self.face_spans[h].basis().to_vec();
                for b in self.face_spans[g].orthogonal_complement().basis() {
                    rows.push(b.clone());
                }
                let kernel = RatMat::new(rows, self.ambient_dim).nullspace();
                debug_assert_eq!(kernel.len(), 1);
                let mut n = kernel[0].primitive();
                // Orient outward from G: vertices of G off H sit strictly below.
                let on_h = &self.vertices[self.faces[h].vertex_set[0]];
                let other = self.faces[g]
                    .vertex_set
                    .iter()
                    .find(|v| !self.faces[h].vertex_set.contains(v))
                    .expect("proper face");
                if self.vertices[*other].sub(on_h).dot(&n).is_positive() {
                    n = n.neg();
                }
                out.insert((h, g), n);
            }
        }
        out
    }

    /// Tangent cone of the face G at its subface F, made full-dimensional by
    /// adding L(G)^perp.
    pub fn nested_tangent_cone(&self, f: FaceId, g: FaceId) -> Result<Cone, Error> {
        if self.faces[f].vertex_set.is_empty() {
            return Err(Error::EmptyFace);
        }
        if !self.face_contains(f, g) {
            return Err(Error::NotAFace);
        }
        if g == self.top_face() {
            return self.tangent_cone(f);
        }
        let q = self.barycenter(f)?;
        let mut gens: Vec<RatVec> = self.faces[g]
            .vertex_set
            .iter()
            .map(|&v| self.vertices[v].sub(&q))
            .collect();
        for b in self.face_spans[g].orthogonal_complement().basis() {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        let mut ineqs = Vec::new();
        for h in self.face_children(g) {
            if self.face_contains(f, h) {
                ineqs.push(self.cover_normal(h, g).neg());
            }
        }
        Ok(Cone::with_inequalities(gens, self.ambient_dim, ineqs))
    }

    /// Outer cone of the face G at its subface F: N_F G + L(F), where the
    /// normal cone is taken inside L(G) and completed by L(G)^perp.
    pub fn nested_outer_cone(&self, f: FaceId, g: FaceId) -> Result<Cone, Error> {
        if self.faces[f].vertex_set.is_empty() {
            return Err(Error::EmptyFace);
        }
        if !self.face_contains(f, g) {
            return Err(Error::NotAFace);
        }
        if g == self.top_face() {
            return self.outer_cone(f);
        }
        let mut gens: Vec<RatVec> = Vec::new();
        for h in self.face_children(g) {
            if self.face_contains(f, h) {
                gens.push(self.cover_normal(h, g).clone());
            }
        }
        for b in self.face_spans[g].orthogonal_complement().basis() {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        for b in self.face_spans[f].basis() {
            gens.push(b.clone());
            gens.push(b.neg());
        }
        Ok(Cone::from_generators(gens, self.ambient_dim))
    }

    /// hom(P) = cone(P x {1}) in one dimension higher. For full-dimensional
    /// polytopes the facet description transfers directly.
    pub fn homogenize(&self) -> Cone {
        let gens: Vec<RatVec> = self
            .vertices
            .iter()
            .map(|v| {
                let mut c = v.coords.clone();
                c.push(rat(1));
                RatVec::new(c)
            })
            .collect();
        if self.is_full_dimensional() && !self.facets.is_empty() {
            let ineqs: Vec<RatVec> = self
                .facets
                .iter()
                .map(|f| {
                    let mut c = f.normal.neg().coords;
                    c.push(f.offset.clone());
                    RatVec::new(c)
                })
                .collect();
            Cone::with_inequalities(gens, self.ambient_dim + 1, ineqs)
        } else {
            Cone::from_generators(gens, self.ambient_dim + 1)
        }
    }

    /// Exact membership of a point.
    pub fn contains_point(&self, p: &RatVec) -> bool {
        if !self.direction_space.contains(&p.sub(&self.vertices[0])) {
            return false;
        }
        self.facets
            .iter()
            .all(|f| !(f.normal.dot(p) - &f.offset).is_positive())
    }

    /// Belt-polytope test: every 2-face has an even number of edges and
    /// antipodal edges are parallel.
    pub fn is_belt_polytope(&self) -> bool {
        for f2 in self.faces_of_dim(2) {
            let edges = self.face_children(f2);
            let cycle = match polygon_edge_cycle(self, &edges) {
                Some(c) => c,
                None => return false,
            };
            let n = cycle.len();
            if n % 2 != 0 {
                return false;
            }
            for i in 0..n / 2 {
                let a = self.edge_direction(cycle[i]);
                let b = self.edge_direction(cycle[i + n / 2]);
                if RatMat::from_rows(vec![a, b]).rank() != 1 {
                    return false;
                }
            }
        }
        true
    }

    fn edge_direction(&self, e: FaceId) -> RatVec {
        let vs = &self.faces[e].vertex_set;
        self.vertices[vs[1]].sub(&self.vertices[vs[0]])
    }

    /// The face lattice as a graded poset: element i is `faces()[i]`, with
    /// rank(face) = dim(face) + 1, the empty face at the bottom and the
    /// polytope on top.
    pub fn face_poset(&self) -> std::sync::Arc<crate::poset::GradedPoset> {
        let n = self.faces.len();
        let labels: Vec<String> = self
            .faces
            .iter()
            .map(|f| {
                if f.vertex_set.is_empty() {
                    "empty".to_string()
                } else {
                    format!(
                        "{{{}}}",
                        f.vertex_set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                    )
                }
            })
            .collect();
        let ranks: Vec<usize> = self.faces.iter().map(|f| (f.dim + 1) as usize).collect();
        let mut leq = vec![vec![false; n]; n];
        for (a, row) in leq.iter_mut().enumerate() {
            for (b, cell) in row.iter_mut().enumerate() {
                *cell = self.face_contains(a, b);
            }
        }
        std::sync::Arc::new(
            crate::poset::GradedPoset::from_leq(labels, ranks, leq)
                .expect("face lattices are graded"),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, Error> {
        let verts = v
            .get("vertices")
            .and_then(|g| g.as_array())
            .ok_or_else(|| Error::Invalid("polytope json needs a `vertices` array".into()))?;
        let vertices: Vec<RatVec> =
            verts.iter().map(RatVec::from_json).collect::<Result<_, _>>()?;
        Polytope::new(vertices)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "vertices": self.vertices.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// Walks the edges of a 2-face into their cyclic order.
fn polygon_edge_cycle(p: &Polytope, edges: &[FaceId]) -> Option<Vec<FaceId>> {
    if edges.len() < 3 {
        return None;
    }
    let mut at_vertex: HashMap<usize, Vec<FaceId>> = HashMap::new();
    for &e in edges {
        for &v in &p.faces()[e].vertex_set {
            at_vertex.entry(v).or_default().push(e);
        }
    }
    if at_vertex.values().any(|es| es.len() != 2) {
        return None;
    }
    let mut cycle = vec![edges[0]];
    let start = p.faces()[edges[0]].vertex_set[0];
    let mut prev_vertex = start;
    let mut cur = edges[0];
    loop {
        let vs = &p.faces()[cur].vertex_set;
        let next_vertex = if vs[0] == prev_vertex { vs[1] } else { vs[0] };
        if next_vertex == start {
            break;
        }
        let es = &at_vertex[&next_vertex];
        let next_edge = if es[0] == cur { es[1] } else { es[0] };
        cycle.push(next_edge);
        prev_vertex = next_vertex;
        cur = next_edge;
        if cycle.len() > edges.len() {
            return None;
        }
    }
    if cycle.len() == edges.len() {
        Some(cycle)
    } else {
        None
    }
}

fn enumerate_facets(
    vertices: &[RatVec],
    dim: usize,
    complement_basis: &[RatVec],
) -> Result<Vec<Facet>, Error> {
    let ambient = vertices[0].dim();
    let n = vertices.len();
    let mut found: Vec<Facet> = Vec::new();
    let mut seen: Vec<RatVec> = Vec::new(); // primitive (normal | offset) keys

    for subset in subsets_of_size(n, dim) {
        let base = &vertices[subset[0]];
        let mut rows: Vec<RatVec> = subset[1..]
            .iter()
            .map(|&i| vertices[i].sub(base))
            .collect();
        for b in complement_basis {
            rows.push(b.clone());
        }
        let m = RatMat::new(rows, ambient);
        if m.rank() != ambient - 1 {
            continue;
        }
        let kernel = m.nullspace();
        debug_assert_eq!(kernel.len(), 1);
        let normal = kernel[0].primitive();
        let offset = normal.dot(base);
        let mut pos = false;
        let mut neg = false;
        for v in vertices {
            let s = normal.dot(v) - &offset;
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
        let (normal, offset) = if pos { (normal.neg(), -offset) } else { (normal, offset) };
        let mut key = normal.coords.clone();
        key.push(offset.clone());
        let key = RatVec::new(key);
        let canonical = {
            let p = key.primitive();
            if p.dot(&key).is_negative() {
                p.neg()
            } else {
                p
            }
        };
        if seen.contains(&canonical) {
            continue;
        }
        seen.push(canonical);
        let vertex_set: Vec<usize> = (0..n)
            .filter(|&i| (normal.dot(&vertices[i]) - &offset).is_zero())
            .collect();
        found.push(Facet { vertex_set, normal, offset });
    }
    if found.is_empty() {
        return Err(Error::Degenerate("no supporting facet hyperplanes found".into()));
    }
    Ok(found)
}

fn build_face_lattice(vertices: &[RatVec], facets: &[Facet]) -> Vec<Face> {
    let full: Vec<usize> = (0..vertices.len()).collect();
    let mut sets: Vec<Vec<usize>> = vec![full.clone()];
    let mut work: Vec<Vec<usize>> = facets.iter().map(|f| f.vertex_set.clone()).collect();
    while let Some(s) = work.pop() {
        if sets.contains(&s) {
            continue;
        }
        sets.push(s.clone());
        for f in facets {
            let inter: Vec<usize> =
                s.iter().copied().filter(|v| f.vertex_set.contains(v)).collect();
            if !sets.contains(&inter) {
                work.push(inter);
            }
        }
    }
    if !sets.contains(&vec![]) {
        sets.push(vec![]);
    }
    let mut faces: Vec<Face> = sets
        .into_iter()
        .map(|vs| {
            let d = if vs.is_empty() {
                -1
            } else if vs.len() == 1 {
                0
            } else {
                let base = &vertices[vs[0]];
                let diffs: Vec<RatVec> =
                    vs[1..].iter().map(|&i| vertices[i].sub(base)).collect();
                RatMat::from_rows(diffs).rank() as isize
            };
            let fc: Vec<usize> = if vs.is_empty() {
                vec![]
            } else {
                (0..facets.len())
                    .filter(|&j| vs.iter().all(|v| facets[j].vertex_set.contains(v)))
                    .collect()
            };
            Face { vertex_set: vs, dim: d, facets_containing: fc }
        })
        .collect();
    faces.sort_by(|a, b| (a.dim, &a.vertex_set).cmp(&(b.dim, &b.vertex_set)));
    faces
}

#[cfg(test)]
pub(crate) fn cube_fixture(d: usize) -> Polytope {
    let mut verts = Vec::new();
    for mask in 0..(1u32 << d) {
        let coords: Vec<i64> =
            (0..d).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect();
        verts.push(RatVec::from_ints(&coords));
    }
    Polytope::new(verts).unwrap()
}
