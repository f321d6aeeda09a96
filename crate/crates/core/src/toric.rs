//! Delzant polytopes over exact rationals: validation, centered regions, and
//! the ball-packing lower bound read off from vertex simplices.
//!
//! A polytope is presented by facet half-spaces `<normal, x> >= offset` with
//! primitive integer inward normals. All arithmetic is exact, so equality
//! tests (vertex on facet, lattice determinant one) are honest decisions, not
//! tolerance checks. Enumeration is by facet d-subsets, sized for low
//! dimension and modest facet counts rather than asymptotic cleverness.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::rational;

/// Enumeration limits: facet subsets are scanned exhaustively, which is cheap
/// only in low dimension with few facets.
const MAX_FACETS: usize = 12;
const MAX_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("dimension must be at least 1")]
    BadDimension,
    #[error("facet {index}: {reason}")]
    BadFacet { index: usize, reason: String },
    #[error("facets {a} and {b} are identical")]
    DuplicateFacet { a: usize, b: usize },
    #[error("a bounded full-dimensional polytope needs at least {need} facets, got {got}")]
    TooFewFacets { need: usize, got: usize },
    #[error("enumeration limit exceeded: {facets} facets in dimension {dim} (limits: {MAX_FACETS} facets, dimension {MAX_DIM})")]
    TooLarge { facets: usize, dim: usize },
    #[error("unbounded along direction {}", fmt_int_point(.0))]
    Unbounded(Vec<BigInt>),
    #[error("the feasible set is empty")]
    Empty,
    #[error("polytope is not full-dimensional (affine rank {rank} < {dim})")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("point lies outside the polytope")]
    PointOutside,
    #[error("point is not a vertex of the polytope")]
    NotAVertex,
    #[error("bad edge weights: {0}")]
    BadWeights(String),
    #[error("not a Delzant polytope: {0}")]
    NotDelzant(String),
}

/// One half-space `<normal, x> >= offset` with a primitive integer inward
/// normal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    #[serde(with = "rational::bigint_vec")]
    pub normal: Vec<BigInt>,
    #[serde(with = "rational")]
    pub offset: BigRational,
}

impl Facet {
    pub fn new(normal: &[i64], offset: i64) -> Self {
        Facet {
            normal: normal.iter().map(|&x| BigInt::from(x)).collect(),
            offset: BigRational::from_integer(BigInt::from(offset)),
        }
    }

    pub fn with_offset(normal: &[i64], offset: BigRational) -> Self {
        Facet {
            normal: normal.iter().map(|&x| BigInt::from(x)).collect(),
            offset,
        }
    }
}

/// Facet presentation of a compact convex lattice polytope. Construction
/// checks only the facet data itself; boundedness, dimension, and the Delzant
/// conditions are decided by [`DelzantPolytope::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DelzantPolytope {
    dim: usize,
    facets: Vec<Facet>,
}

/// A vertex together with the primitive integer edge directions leaving it.
/// `weights[j]` is the direction paired with isotropy weight j of the torus
/// action at the corresponding fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexData {
    #[serde(with = "rational::vec")]
    pub vertex: Vec<BigRational>,
    #[serde(serialize_with = "ser_weight_list")]
    pub weights: Vec<Vec<BigInt>>,
}

/// First failure of the vertex conditions, named after the offending vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DelzantViolation {
    /// More than `dim` facets meet at the vertex.
    NotSimple {
        vertex: Vec<BigRational>,
        active_facets: Vec<usize>,
    },
    /// Edge directions exist but do not form a lattice basis.
    NotSmooth {
        vertex: Vec<BigRational>,
        edge_determinant: BigInt,
    },
}

impl fmt::Display for DelzantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DelzantViolation::NotSimple {
                vertex,
                active_facets,
            } => write!(
                f,
                "vertex {} lies on facets {:?} (not simple)",
                fmt_point(vertex),
                active_facets
            ),
            DelzantViolation::NotSmooth {
                vertex,
                edge_determinant,
            } => write!(
                f,
                "vertex {} has edge-direction determinant {} (not smooth)",
                fmt_point(vertex),
                edge_determinant
            ),
        }
    }
}

impl Serialize for DelzantViolation {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            DelzantViolation::NotSimple {
                vertex,
                active_facets,
            } => {
                let mut st = ser.serialize_struct("DelzantViolation", 3)?;
                st.serialize_field("kind", "not_simple")?;
                st.serialize_field("vertex", &point_strings(vertex))?;
                st.serialize_field("active_facets", active_facets)?;
                st.end()
            }
            DelzantViolation::NotSmooth {
                vertex,
                edge_determinant,
            } => {
                let mut st = ser.serialize_struct("DelzantViolation", 3)?;
                st.serialize_field("kind", "not_smooth")?;
                st.serialize_field("vertex", &point_strings(vertex))?;
                st.serialize_field(
                    "edge_determinant",
                    &serde_json::Number::from_string_unchecked(edge_determinant.to_string()),
                )?;
                st.end()
            }
        }
    }
}

/// Outcome of the Delzant checks on a bounded full-dimensional polytope.
/// `vertices` lists every simple vertex with its edge directions, in
/// lexicographic order; `violation` is the first failure in that order.
#[derive(Debug, Clone, Serialize)]
pub struct DelzantReport {
    pub is_delzant: bool,
    pub vertices: Vec<VertexData>,
    pub violation: Option<DelzantViolation>,
}

/// One face of the polytope through the base point, identified by the full
/// set of facets containing it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceDescription {
    pub active_facets: Vec<usize>,
    pub dim: usize,
    #[serde(serialize_with = "ser_point_list")]
    pub vertices: Vec<Vec<BigRational>>,
}

/// All faces of the polytope containing `base_point`, largest first. The
/// union of their relative interiors is the region swept out by the torus
/// orbits that stay near the fiber over the base point.
#[derive(Debug, Clone, Serialize)]
pub struct CenteredRegionDescription {
    #[serde(with = "rational::vec")]
    pub base_point: Vec<BigRational>,
    pub faces: Vec<FaceDescription>,
}

impl DelzantPolytope {
    pub fn new(dim: usize, facets: Vec<Facet>) -> Result<Self, ToricError> {
        if dim == 0 {
            return Err(ToricError::BadDimension);
        }
        if facets.len() < dim + 1 {
            return Err(ToricError::TooFewFacets {
                need: dim + 1,
                got: facets.len(),
            });
        }
        for (i, f) in facets.iter().enumerate() {
            if f.normal.len() != dim {
                return Err(ToricError::BadFacet {
                    index: i,
                    reason: format!("normal has length {}, expected {}", f.normal.len(), dim),
                });
            }
            if f.normal.iter().all(|x| x.is_zero()) {
                return Err(ToricError::BadFacet {
                    index: i,
                    reason: "normal is zero".into(),
                });
            }
            if !is_primitive(&f.normal) {
                return Err(ToricError::BadFacet {
                    index: i,
                    reason: "normal is not primitive".into(),
                });
            }
        }
        for a in 0..facets.len() {
            for b in (a + 1)..facets.len() {
                if facets[a] == facets[b] {
                    return Err(ToricError::DuplicateFacet { a, b });
                }
            }
        }
        Ok(DelzantPolytope { dim, facets })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Closed membership test.
    pub fn contains(&self, x: &[BigRational]) -> bool {
        x.len() == self.dim
            && self
                .facets
                .iter()
                .all(|f| dot_rat(&f.normal, x) >= f.offset)
    }

    /// Indices of facets on which `x` is tight. Meaningful for points of the
    /// polytope; for outside points it still reports exact equalities.
    pub fn active_facets(&self, x: &[BigRational]) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| dot_rat(&f.normal, x) == f.offset)
            .map(|(i, _)| i)
            .collect()
    }

    /// All vertices in lexicographic order. Errors on unbounded, empty, or
    /// lower-dimensional input, each with a structured witness.
    pub fn vertices(&self) -> Result<Vec<Vec<BigRational>>, ToricError> {
        let d = self.dim;
        let m = self.facets.len();
        if m > MAX_FACETS || d > MAX_DIM {
            return Err(ToricError::TooLarge { facets: m, dim: d });
        }
        let normal_rows: Vec<Vec<BigRational>> = self
            .facets
            .iter()
            .map(|f| f.normal.iter().map(int_to_rat).collect())
            .collect();

        // Recession cone check. A nonzero recession vector is either a line
        // (normals not of full rank) or spans an extreme ray, which is cut
        // out by d-1 linearly independent normals.
        if let Some(y) = any_kernel_vector(&normal_rows, d) {
            return Err(ToricError::Unbounded(primitive_direction(&y)));
        }
        for subset in subsets_of_size(m, d.saturating_sub(1)) {
            let rows: Vec<Vec<BigRational>> =
                subset.iter().map(|&i| normal_rows[i].clone()).collect();
            let Some(y) = kernel_line_generator(&rows, d) else {
                continue;
            };
            for cand in [primitive_direction(&y), primitive_direction(&neg(&y))] {
                if self
                    .facets
                    .iter()
                    .all(|f| !dot_int(&f.normal, &cand).is_negative())
                {
                    return Err(ToricError::Unbounded(cand));
                }
            }
        }

        let mut verts: Vec<Vec<BigRational>> = Vec::new();
        for subset in subsets_of_size(m, d) {
            let rows: Vec<Vec<BigRational>> =
                subset.iter().map(|&i| normal_rows[i].clone()).collect();
            let rhs: Vec<BigRational> = subset.iter().map(|&i| self.facets[i].offset.clone()).collect();
            let Some(x) = solve_square(&rows, &rhs) else {
                continue;
            };
            if self.contains(&x) && !verts.contains(&x) {
                verts.push(x);
            }
        }
        if verts.is_empty() {
            return Err(ToricError::Empty);
        }
        verts.sort();
        let rank = affine_rank(&verts);
        if rank != d {
            return Err(ToricError::NotFullDimensional { rank, dim: d });
        }
        Ok(verts)
    }

    /// Primitive integer edge directions at a simple vertex, paired with the
    /// given active facets: direction j is tight on every active facet except
    /// the j-th. Also returns their determinant.
    fn edge_directions(
        &self,
        active: &[usize],
    ) -> (Vec<Vec<BigInt>>, BigInt) {
        let d = self.dim;
        debug_assert_eq!(active.len(), d);
        // Columns of the inverse of the active-normal matrix: the unique
        // directions with <u_i, eta_j> = delta_ij up to positive scale.
        let rows: Vec<Vec<BigRational>> = active
            .iter()
            .map(|&i| self.facets[i].normal.iter().map(int_to_rat).collect())
            .collect();
        let inv = invert(&rows).expect("active normals at a vertex are linearly independent");
        let mut weights = Vec::with_capacity(d);
        for j in 0..d {
            let col: Vec<BigRational> = (0..d).map(|r| inv[r][j].clone()).collect();
            weights.push(primitive_direction(&col));
        }
        let det = int_matrix_det_of_columns(&weights);
        (weights, det)
    }

    /// Checks that the polytope is bounded, full-dimensional, simple, and
    /// smooth. The first two failures are hard errors; the latter two are
    /// reported with the first violating vertex in lexicographic order.
    pub fn validate(&self) -> Result<DelzantReport, ToricError> {
        let verts = self.vertices()?;
        let mut data = Vec::new();
        let mut violation: Option<DelzantViolation> = None;
        for v in &verts {
            let active = self.active_facets(v);
            if active.len() != self.dim {
                if violation.is_none() {
                    violation = Some(DelzantViolation::NotSimple {
                        vertex: v.clone(),
                        active_facets: active,
                    });
                }
                continue;
            }
            let (weights, det) = self.edge_directions(&active);
            if det.abs() != BigInt::one() && violation.is_none() {
                violation = Some(DelzantViolation::NotSmooth {
                    vertex: v.clone(),
                    edge_determinant: det.clone(),
                });
            }
            data.push(VertexData {
                vertex: v.clone(),
                weights,
            });
        }
        Ok(DelzantReport {
            is_delzant: violation.is_none(),
            vertices: data,
            violation,
        })
    }
}

/// See [`DelzantPolytope::validate`].
pub fn validate_delzant(p: &DelzantPolytope) -> Result<DelzantReport, ToricError> {
    p.validate()
}

/// All faces of `p` containing `alpha`, each given by its full active facet
/// set, ordered from the whole polytope down to the smallest face.
pub fn centered_region(
    p: &DelzantPolytope,
    alpha: &[BigRational],
) -> Result<CenteredRegionDescription, ToricError> {
    if alpha.len() != p.dim() || !p.contains(alpha) {
        return Err(ToricError::PointOutside);
    }
    let verts = p.vertices()?;
    let vert_active: Vec<Vec<usize>> = verts.iter().map(|v| p.active_facets(v)).collect();
    let base_active = p.active_facets(alpha);

    // Faces containing alpha are exactly the closures F(S) for S a subset of
    // the facets tight at alpha; distinct faces are told apart by the full
    // set of facets tight on all their vertices.
    let mut by_active: BTreeMap<Vec<usize>, FaceDescription> = BTreeMap::new();
    for mask in 0u32..(1 << base_active.len()) {
        let s: Vec<usize> = base_active
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &i)| i)
            .collect();
        let members: Vec<usize> = (0..verts.len())
            .filter(|&vi| s.iter().all(|i| vert_active[vi].contains(i)))
            .collect();
        debug_assert!(!members.is_empty(), "every nonempty face contains a vertex");
        let mut tight: Vec<usize> = vert_active[members[0]].clone();
        for &vi in &members[1..] {
            tight.retain(|i| vert_active[vi].contains(i));
        }
        if by_active.contains_key(&tight) {
            continue;
        }
        let pts: Vec<Vec<BigRational>> = members.iter().map(|&vi| verts[vi].clone()).collect();
        let dim = affine_rank(&pts);
        by_active.insert(
            tight.clone(),
            FaceDescription {
                active_facets: tight,
                dim,
                vertices: pts,
            },
        );
    }
    let mut faces: Vec<FaceDescription> = by_active.into_values().collect();
    faces.sort_by(|a, b| {
        a.active_facets
            .len()
            .cmp(&b.active_facets.len())
            .then_with(|| a.active_facets.cmp(&b.active_facets))
    });
    Ok(CenteredRegionDescription {
        base_point: alpha.to_vec(),
        faces,
    })
}

/// Largest `a` such that the open simplex
/// `{ v + sum x_j eta_j : x_j > 0, sum x_j < a }` stays inside the polytope.
/// Each facet not through the vertex caps `a` at its slack divided by the
/// fastest rate at which any edge direction consumes that slack; facets
/// through the vertex never bind because every edge direction points into
/// them. The result is the supremum itself, not an attained maximum.
pub fn vertex_capacity(p: &DelzantPolytope, v: &VertexData) -> Result<BigRational, ToricError> {
    let d = p.dim();
    if v.vertex.len() != d {
        return Err(ToricError::NotAVertex);
    }
    let mut active = Vec::new();
    for (i, f) in p.facets().iter().enumerate() {
        match dot_rat(&f.normal, &v.vertex).cmp(&f.offset) {
            Ordering::Less => return Err(ToricError::NotAVertex),
            Ordering::Equal => active.push(i),
            Ordering::Greater => {}
        }
    }
    let active_rows: Vec<Vec<BigRational>> = active
        .iter()
        .map(|&i| p.facets()[i].normal.iter().map(int_to_rat).collect())
        .collect();
    if active.len() < d || rank(&active_rows) != d {
        return Err(ToricError::NotAVertex);
    }

    if v.weights.len() != d {
        return Err(ToricError::BadWeights(format!(
            "expected {} edge directions, got {}",
            d,
            v.weights.len()
        )));
    }
    for (j, w) in v.weights.iter().enumerate() {
        if w.len() != d {
            return Err(ToricError::BadWeights(format!(
                "direction {j} has length {}, expected {d}",
                w.len()
            )));
        }
        if !is_primitive(w) {
            return Err(ToricError::BadWeights(format!("direction {j} is not primitive")));
        }
    }
    if int_matrix_det_of_columns(&v.weights).abs() != BigInt::one() {
        return Err(ToricError::BadWeights(
            "edge directions do not form a lattice basis".into(),
        ));
    }
    for &i in &active {
        for (j, w) in v.weights.iter().enumerate() {
            if dot_int(&p.facets()[i].normal, w).is_negative() {
                return Err(ToricError::BadWeights(format!(
                    "direction {j} immediately exits the polytope across facet {i}"
                )));
            }
        }
    }

    let mut best: Option<BigRational> = None;
    for (i, f) in p.facets().iter().enumerate() {
        if active.contains(&i) {
            continue;
        }
        let slack = dot_rat(&f.normal, &v.vertex) - &f.offset;
        let mut rate: Option<BigInt> = None;
        for w in &v.weights {
            let s = dot_int(&f.normal, w);
            if s.is_negative() {
                let r = -s;
                if rate.as_ref().map_or(true, |best| r > *best) {
                    rate = Some(r);
                }
            }
        }
        let Some(rate) = rate else { continue };
        let bound = slack / BigRational::from_integer(rate);
        if best.as_ref().map_or(true, |b| bound < *b) {
            best = Some(bound);
        }
    }
    best.ok_or_else(|| {
        ToricError::BadWeights("no facet bounds the vertex simplex; polytope unbounded?".into())
    })
}

/// Ball-packing lower bound: the best vertex capacity over all vertices of a
/// validated Delzant polytope.
pub fn toric_lower_bound(p: &DelzantPolytope) -> Result<BigRational, ToricError> {
    let report = p.validate()?;
    if !report.is_delzant {
        let why = report
            .violation
            .expect("invalid report carries a violation")
            .to_string();
        return Err(ToricError::NotDelzant(why));
    }
    let mut best: Option<BigRational> = None;
    for v in &report.vertices {
        let c = vertex_capacity(p, v)?;
        if best.as_ref().map_or(true, |b| c > *b) {
            best = Some(c);
        }
    }
    best.ok_or(ToricError::Empty)
}

impl Serialize for DelzantPolytope {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut st = ser.serialize_struct("DelzantPolytope", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("facets", &self.facets)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for DelzantPolytope {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            facets: Vec<Facet>,
        }
        let raw = Raw::deserialize(de)?;
        DelzantPolytope::new(raw.dim, raw.facets).map_err(serde::de::Error::custom)
    }
}

fn int_to_rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

fn dot_rat(n: &[BigInt], x: &[BigRational]) -> BigRational {
    n.iter()
        .zip(x)
        .map(|(a, b)| int_to_rat(a) * b)
        .fold(BigRational::zero(), |acc, t| acc + t)
}

fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn neg(v: &[BigRational]) -> Vec<BigRational> {
    v.iter().map(|x| -x.clone()).collect()
}

fn is_primitive(v: &[BigInt]) -> bool {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    g.is_one()
}

/// Scales a nonzero rational direction to a primitive integer vector,
/// preserving orientation.
fn primitive_direction(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * int_to_rat(&lcm)).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    assert!(!g.is_zero(), "direction must be nonzero");
    ints.iter().map(|x| x / &g).collect()
}

fn fmt_point(p: &[BigRational]) -> String {
    let parts: Vec<String> = p.iter().map(rational::to_string).collect();
    format!("({})", parts.join(", "))
}

fn fmt_int_point(p: &[BigInt]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn point_strings(p: &[BigRational]) -> Vec<String> {
    p.iter().map(rational::to_string).collect()
}

fn ser_weight_list<S: Serializer>(w: &[Vec<BigInt>], ser: S) -> Result<S::Ok, S::Error> {
    struct Row<'a>(&'a [BigInt]);
    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            rational::bigint_vec::serialize(self.0, ser)
        }
    }
    ser.collect_seq(w.iter().map(|row| Row(row)))
}

fn ser_point_list<S: Serializer>(pts: &[Vec<BigRational>], ser: S) -> Result<S::Ok, S::Error> {
    struct Row<'a>(&'a [BigRational]);
    impl Serialize for Row<'_> {
        fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
            rational::vec::serialize(self.0, ser)
        }
    }
    ser.collect_seq(pts.iter().map(|row| Row(row)))
}

/// Row-reduces in place; returns the pivot column of each nonzero row.
fn rref(mat: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone();
        for x in &mut mat[r] {
            *x = &*x / &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in 0..cols {
                    let delta = &f * &mat[r][j];
                    mat[i][j] = &mat[i][j] - delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

fn rank(mat: &[Vec<BigRational>]) -> usize {
    let mut m = mat.to_vec();
    rref(&mut m).len()
}

/// Any nonzero kernel vector, or None when the columns are independent.
fn any_kernel_vector(mat: &[Vec<BigRational>], dim: usize) -> Option<Vec<BigRational>> {
    let mut m = mat.to_vec();
    let pivots = rref(&mut m);
    if pivots.len() == dim {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut x = vec![BigRational::zero(); dim];
    x[free] = BigRational::one();
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = -m[row][free].clone();
    }
    Some(x)
}

/// Kernel generator when the kernel is exactly one-dimensional.
fn kernel_line_generator(mat: &[Vec<BigRational>], dim: usize) -> Option<Vec<BigRational>> {
    let mut m = mat.to_vec();
    let pivots = rref(&mut m);
    if dim - pivots.len() != 1 {
        return None;
    }
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut x = vec![BigRational::zero(); dim];
    x[free] = BigRational::one();
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = -m[row][free].clone();
    }
    Some(x)
}

/// Unique solution of a square system, or None when singular.
fn solve_square(rows: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let d = rows.len();
    let mut aug: Vec<Vec<BigRational>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.clone();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != d || pivots.iter().any(|&p| p >= d) {
        return None;
    }
    let mut x = vec![BigRational::zero(); d];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][d].clone();
    }
    Some(x)
}

/// Inverse of a square rational matrix, or None when singular.
fn invert(rows: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let d = rows.len();
    let mut aug: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            for j in 0..d {
                row.push(if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                });
            }
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != d || pivots.iter().any(|&p| p >= d) {
        return None;
    }
    Some(
        (0..d)
            .map(|i| aug[i][d..2 * d].to_vec())
            .collect(),
    )
}

fn det_rational(rows: &[Vec<BigRational>]) -> BigRational {
    let n = rows.len();
    let mut m = rows.to_vec();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(c, p);
            det = -det;
        }
        let pivot = m[c][c].clone();
        det *= pivot.clone();
        for j in c..n {
            m[c][j] = &m[c][j] / &pivot;
        }
        for i in (c + 1)..n {
            if !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..n {
                    let delta = &f * &m[c][j];
                    m[i][j] = &m[i][j] - delta;
                }
            }
        }
    }
    det
}

/// Determinant of the integer matrix whose columns are the given vectors.
fn int_matrix_det_of_columns(cols: &[Vec<BigInt>]) -> BigInt {
    let d = cols.len();
    let rows: Vec<Vec<BigRational>> = (0..d)
        .map(|r| (0..d).map(|c| int_to_rat(&cols[c][r])).collect())
        .collect();
    let det = det_rational(&rows);
    debug_assert!(det.is_integer());
    det.to_integer()
}

/// Dimension of the affine hull of a point set.
fn affine_rank(points: &[Vec<BigRational>]) -> usize {
    if points.len() <= 1 {
        return 0;
    }
    let base = &points[0];
    let rows: Vec<Vec<BigRational>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&rows)
}

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for i in start..=(m - need) {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    rec(0, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}
