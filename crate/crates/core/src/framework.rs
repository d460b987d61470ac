//! Frameworks, pinning and edge-length measurements.
//!
//! A [`Framework`] is a graph together with a point configuration in
//! `R^d`. Edges are stored 0-based, canonicalized as sorted `(i, j)` pairs
//! with `i < j`, and sorted lexicographically so that every edge-indexed
//! vector produced downstream has a reproducible order.
//!
//! Rigid motions are removed by moving the configuration into pinned
//! position ([`pin`]): vertex 1 at the origin and, for `2 <= i <= l + 1`,
//! vertex `i` in the span of the first `i - 1` coordinate axes, where `l` is
//! the dimension of the affine span. The coordinates that stay variable are
//! the *free coordinates* of the [`PinnedFramework`].

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RigidityError};
use crate::linalg;

/// Default relative singular value threshold for numerical rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// An undirected edge between two 0-based vertex indices, `0 <= i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge(pub usize, pub usize);

impl Edge {
    fn canonical(a: usize, b: usize) -> Self {
        if a < b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }
}

/// A bar-and-joint framework `(G, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Framework {
    dimension: usize,
    vertices: Vec<Vec<f64>>,
    edges: Vec<Edge>,
    labels: Option<Vec<String>>,
}

/// On-disk representation: 1-based edges, optional labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameworkFile {
    pub dimension: usize,
    pub vertices: Vec<Vec<f64>>,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl Framework {
    /// Builds a framework from 0-based edges, validating and canonicalizing.
    pub fn new(
        dimension: usize,
        vertices: Vec<Vec<f64>>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(RigidityError::ZeroDimension);
        }
        if vertices.is_empty() {
            return Err(RigidityError::Empty);
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dimension {
                return Err(RigidityError::DimensionMismatch {
                    vertex: i + 1,
                    expected: dimension,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(RigidityError::NonFiniteCoordinate { vertex: i + 1 });
            }
        }
        if let Some(l) = &labels {
            if l.len() != vertices.len() {
                return Err(RigidityError::LabelCount {
                    expected: vertices.len(),
                    found: l.len(),
                });
            }
        }
        let n = vertices.len();
        let mut canon = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(RigidityError::VertexOutOfRange(a + 1, b + 1, n));
            }
            if a == b {
                return Err(RigidityError::SelfLoop(a + 1));
            }
            canon.push(Edge::canonical(a, b));
        }
        canon.sort();
        for w in canon.windows(2) {
            if w[0] == w[1] {
                return Err(RigidityError::DuplicateEdge(w[0].0 + 1, w[0].1 + 1));
            }
        }
        for e in &canon {
            if dist2(&vertices[e.0], &vertices[e.1]) == 0.0 {
                return Err(RigidityError::CoincidentEndpoints(e.0 + 1, e.1 + 1));
            }
        }
        Ok(Self {
            dimension,
            vertices,
            edges: canon,
            labels,
        })
    }

    pub fn from_file(file: FrameworkFile) -> Result<Self> {
        let mut edges = Vec::with_capacity(file.edges.len());
        let n = file.vertices.len();
        for [a, b] in file.edges {
            if a == 0 || b == 0 || a > n || b > n {
                return Err(RigidityError::VertexOutOfRange(a, b, n));
            }
            edges.push((a - 1, b - 1));
        }
        Self::new(file.dimension, file.vertices, edges, file.labels)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: FrameworkFile =
            serde_json::from_str(s).map_err(|e| RigidityError::Parse(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> FrameworkFile {
        FrameworkFile {
            dimension: self.dimension,
            vertices: self.vertices.clone(),
            edges: self.edges.iter().map(|e| [e.0 + 1, e.1 + 1]).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("framework serializes")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.vertices[i]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Rest lengths `d_ij = |p_i - p_j|`, in edge order.
    pub fn edge_lengths(&self) -> Vec<f64> {
        measure(self, MeasureKind::Lengths).values
    }

    /// Relabels the vertices: new vertex `k` is old vertex `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_vertices();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
        {
            return Err(RigidityError::InvalidArgument(
                "permutation must list every vertex exactly once".into(),
            ));
        }
        let mut inverse = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inverse[old] = new;
        }
        let vertices = perm.iter().map(|&old| self.vertices[old].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| perm.iter().map(|&old| l[old].clone()).collect());
        let edges = self.edges.iter().map(|e| (inverse[e.0], inverse[e.1]));
        Self::new(self.dimension, vertices, edges, labels)
    }

    /// Returns a copy with one vertex moved.
    pub fn with_vertex(&self, i: usize, point: Vec<f64>) -> Result<Self> {
        let mut vertices = self.vertices.clone();
        vertices[i] = point;
        Self::new(
            self.dimension,
            vertices,
            self.edges.iter().map(|e| (e.0, e.1)),
            self.labels.clone(),
        )
    }

    /// Returns a copy without the given edge (0-based endpoints, any order).
    pub fn without_edge(&self, a: usize, b: usize) -> Result<Self> {
        let target = Edge::canonical(a, b);
        Self::new(
            self.dimension,
            self.vertices.clone(),
            self.edges
                .iter()
                .filter(|e| **e != target)
                .map(|e| (e.0, e.1)),
            self.labels.clone(),
        )
    }

    /// Applies `x -> A x + b` to every vertex.
    pub fn affine_image(&self, a: &DMatrix<f64>, b: &[f64]) -> Result<Self> {
        let d = self.dimension;
        let vertices = self
            .vertices
            .iter()
            .map(|p| {
                (0..d)
                    .map(|r| b[r] + (0..d).map(|c| a[(r, c)] * p[c]).sum::<f64>())
                    .collect()
            })
            .collect();
        Self::new(
            d,
            vertices,
            self.edges.iter().map(|e| (e.0, e.1)),
            self.labels.clone(),
        )
    }
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Numerical dimension of the affine span of a point set.
///
/// Rank of the matrix with columns `p_i - p_1`, counting singular values
/// above `tol * sigma_max`.
pub fn affine_span_dimension(points: &[Vec<f64>], tol: f64) -> usize {
    if points.len() < 2 {
        return 0;
    }
    let d = points[0].len();
    let m = DMatrix::from_fn(d, points.len() - 1, |r, c| points[c + 1][r] - points[0][r]);
    linalg::numerical_rank(&m, tol)
}

/// A free (unpinned) coordinate: `axis` of `vertex`, both 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeCoord {
    pub vertex: usize,
    pub axis: usize,
}

/// A framework in pinned position together with its free coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct PinnedFramework {
    base: Framework,
    span_dim: usize,
    free_coords: Vec<FreeCoord>,
    // free_index[vertex][axis]
    free_index: Vec<Vec<Option<usize>>>,
}

impl PinnedFramework {
    /// Accepts a framework that is already in pinned position.
    pub fn from_pinned(base: Framework, tol: f64) -> Result<Self> {
        let span_dim = affine_span_dimension(base.vertices(), tol);
        check_leading(&base, span_dim, tol)?;
        let scale = base
            .vertices()
            .iter()
            .flatten()
            .fold(0.0f64, |m, x| m.max(x.abs()))
            .max(1.0);
        for v in 0..=span_dim.min(base.n_vertices() - 1) {
            for axis in v..base.dimension() {
                if base.vertex(v)[axis].abs() > tol * scale {
                    return Err(RigidityError::InvalidArgument(format!(
                        "vertex {} is not in pinned position (axis {} = {:e})",
                        v + 1,
                        axis + 1,
                        base.vertex(v)[axis]
                    )));
                }
            }
        }
        Ok(Self::assemble(base, span_dim))
    }

    fn assemble(base: Framework, span_dim: usize) -> Self {
        let n = base.n_vertices();
        let d = base.dimension();
        let mut free_coords = Vec::new();
        let mut free_index = vec![vec![None; d]; n];
        for (v, row) in free_index.iter_mut().enumerate() {
            for (axis, slot) in row.iter_mut().enumerate() {
                // vertex v (0-based) with v <= span_dim keeps only its first v axes free
                let pinned = v <= span_dim && axis >= v;
                if !pinned {
                    *slot = Some(free_coords.len());
                    free_coords.push(FreeCoord { vertex: v, axis });
                }
            }
        }
        Self {
            base,
            span_dim,
            free_coords,
            free_index,
        }
    }

    pub fn framework(&self) -> &Framework {
        &self.base
    }

    pub fn span_dim(&self) -> usize {
        self.span_dim
    }

    pub fn free_coords(&self) -> &[FreeCoord] {
        &self.free_coords
    }

    /// Number of free coordinates `N`.
    pub fn n_free(&self) -> usize {
        self.free_coords.len()
    }

    pub fn dimension(&self) -> usize {
        self.base.dimension()
    }

    pub fn n_vertices(&self) -> usize {
        self.base.n_vertices()
    }

    pub fn edges(&self) -> &[Edge] {
        self.base.edges()
    }

    pub fn free_index(&self, vertex: usize, axis: usize) -> Option<usize> {
        self.free_index[vertex][axis]
    }

    /// Expands a free-coordinate vector into per-vertex vectors (zeros on
    /// pinned coordinates).
    pub fn expand(&self, x: &[f64]) -> Vec<Vec<f64>> {
        assert_eq!(x.len(), self.n_free(), "free-coordinate vector length");
        let mut out = vec![vec![0.0; self.dimension()]; self.n_vertices()];
        for (value, fc) in x.iter().zip(&self.free_coords) {
            out[fc.vertex][fc.axis] = *value;
        }
        out
    }

    /// Inverse of [`expand`](Self::expand); pinned entries are dropped.
    pub fn restrict(&self, per_vertex: &[Vec<f64>]) -> Vec<f64> {
        self.free_coords
            .iter()
            .map(|fc| per_vertex[fc.vertex][fc.axis])
            .collect()
    }

    /// The pinned configuration as a free-coordinate vector.
    pub fn coordinates(&self) -> Vec<f64> {
        self.restrict(self.base.vertices())
    }

    /// Per-edge difference `x_v - x_w` of a free-coordinate vector.
    pub(crate) fn edge_difference(&self, x: &[f64], e: Edge) -> Vec<f64> {
        (0..self.dimension())
            .map(|axis| {
                let a = self.free_index[e.0][axis].map_or(0.0, |i| x[i]);
                let b = self.free_index[e.1][axis].map_or(0.0, |i| x[i]);
                a - b
            })
            .collect()
    }

    /// Per-edge `p_v - p_w` of the pinned configuration.
    pub(crate) fn edge_vector(&self, e: Edge) -> Vec<f64> {
        let (a, b) = (self.base.vertex(e.0), self.base.vertex(e.1));
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
}

fn check_leading(f: &Framework, span_dim: usize, tol: f64) -> Result<()> {
    let lead = &f.vertices()[..(span_dim + 1).min(f.n_vertices())];
    if affine_span_dimension(lead, tol) < span_dim {
        return Err(RigidityError::DegenerateLeadingVertices {
            count: span_dim + 1,
        });
    }
    Ok(())
}

/// The congruence `x -> L (x - origin)` used to pin a framework.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    pub origin: Vec<f64>,
    /// Orthogonal `d x d` matrix.
    pub linear: DMatrix<f64>,
}

impl Isometry {
    pub fn identity(d: usize) -> Self {
        Self {
            origin: vec![0.0; d],
            linear: DMatrix::identity(d, d),
        }
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let d = self.origin.len();
        (0..d)
            .map(|r| {
                (0..d)
                    .map(|c| self.linear[(r, c)] * (x[c] - self.origin[c]))
                    .sum()
            })
            .collect()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        let d = self.origin.len();
        self.origin.iter().all(|x| x.abs() <= tol)
            && (&self.linear - DMatrix::<f64>::identity(d, d)).amax() <= tol
    }
}

/// Moves a framework into pinned position.
///
/// Translates vertex 1 to the origin and applies the Gram-Schmidt
/// orthogonal map for `p_2 - p_1, ..., p_{l+1} - p_1` with positive diagonal,
/// completed with standard basis vectors when `l < d`.
pub fn pin(framework: &Framework, tol: f64) -> Result<(PinnedFramework, Isometry)> {
    let d = framework.dimension();
    let n = framework.n_vertices();
    let span_dim = affine_span_dimension(framework.vertices(), tol);
    check_leading(framework, span_dim, tol)?;

    let origin = framework.vertex(0).to_vec();
    let diff = |i: usize| -> Vec<f64> {
        framework
            .vertex(i)
            .iter()
            .zip(&origin)
            .map(|(a, b)| a - b)
            .collect()
    };

    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for i in 1..=span_dim {
        let v = orthogonalize(diff(i), &basis);
        let nv = norm(&v);
        basis.push(v.iter().map(|x| x / nv).collect());
    }
    while basis.len() < d {
        // pick the standard axis with the largest component left after projection
        let best = (0..d)
            .map(|a| {
                let mut e = vec![0.0; d];
                e[a] = 1.0;
                orthogonalize(e, &basis)
            })
            .max_by(|a, b| norm(a).total_cmp(&norm(b)))
            .expect("d > 0");
        let nb = norm(&best);
        basis.push(best.iter().map(|x| x / nb).collect());
    }
    let linear = DMatrix::from_fn(d, d, |r, c| basis[r][c]);
    let iso = Isometry { origin, linear };

    let mut vertices: Vec<Vec<f64>> = framework.vertices().iter().map(|p| iso.apply(p)).collect();
    for (v, q) in vertices.iter_mut().enumerate().take((span_dim + 1).min(n)) {
        for x in q.iter_mut().skip(v) {
            *x = 0.0;
        }
    }
    let pinned = Framework::new(
        d,
        vertices,
        framework.edges().iter().map(|e| (e.0, e.1)),
        framework.labels().map(|l| l.to_vec()),
    )?;
    Ok((PinnedFramework::assemble(pinned, span_dim), iso))
}

/// Result of [`auto_pin`]: the pinned framework, the isometry, and the
/// relabeling used (`permutation[new] = old`, 0-based).
#[derive(Debug, Clone)]
pub struct AutoPinned {
    pub pinned: PinnedFramework,
    pub isometry: Isometry,
    pub permutation: Vec<usize>,
}

/// Pins a framework, relabeling vertices first when the leading ones are
/// affinely dependent.
///
/// The identity labeling is used when it works. Otherwise vertices are
/// scanned in order and a vertex is moved to the front when it raises the
/// affine dimension of the vertices chosen so far; the rest keep their order.
pub fn auto_pin(framework: &Framework, tol: f64) -> Result<AutoPinned> {
    let n = framework.n_vertices();
    match pin(framework, tol) {
        Ok((pinned, isometry)) => {
            return Ok(AutoPinned {
                pinned,
                isometry,
                permutation: (0..n).collect(),
            })
        }
        Err(RigidityError::DegenerateLeadingVertices { .. }) => {}
        Err(e) => return Err(e),
    }
    let target = affine_span_dimension(framework.vertices(), tol);
    let mut lead = vec![0usize];
    for i in 1..n {
        if lead.len() == target + 1 {
            break;
        }
        let mut trial: Vec<Vec<f64>> = lead.iter().map(|&k| framework.vertex(k).to_vec()).collect();
        trial.push(framework.vertex(i).to_vec());
        if affine_span_dimension(&trial, tol) == lead.len() {
            lead.push(i);
        }
    }
    if lead.len() != target + 1 {
        return Err(RigidityError::NoNonDegeneratePermutation);
    }
    let mut permutation = lead.clone();
    permutation.extend((0..n).filter(|i| !lead.contains(i)));
    let relabeled = framework.permuted(&permutation)?;
    let (pinned, isometry) = pin(&relabeled, tol)?;
    Ok(AutoPinned {
        pinned,
        isometry,
        permutation,
    })
}

fn orthogonalize(mut v: Vec<f64>, basis: &[Vec<f64>]) -> Vec<f64> {
    // modified Gram-Schmidt, two passes
    for _ in 0..2 {
        for b in basis {
            let c: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            for (x, y) in v.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
    }
    v
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Which edge measurement to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// `l_ij = |p_i - p_j|`
    Lengths,
    /// `m_ij = |p_i - p_j|^2`
    Squared,
}

/// Edge-indexed measurement vector `l(p)` or `m(p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementVector {
    pub kind: MeasureKind,
    pub values: Vec<f64>,
}

pub fn measure(framework: &Framework, kind: MeasureKind) -> MeasurementVector {
    let values = framework
        .edges()
        .iter()
        .map(|e| {
            let m = dist2(framework.vertex(e.0), framework.vertex(e.1));
            match kind {
                MeasureKind::Lengths => m.sqrt(),
                MeasureKind::Squared => m,
            }
        })
        .collect();
    MeasurementVector { kind, values }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Framework {
        Framework::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 1.0]],
            [(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn rejects_invalid_graphs() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
        assert_eq!(
            Framework::new(2, pts.clone(), [(0, 0)], None),
            Err(RigidityError::SelfLoop(1))
        );
        assert_eq!(
            Framework::new(2, pts.clone(), [(0, 1), (1, 0)], None),
            Err(RigidityError::DuplicateEdge(1, 2))
        );
        assert_eq!(
            Framework::new(2, pts.clone(), [(0, 2)], None),
            Err(RigidityError::VertexOutOfRange(1, 3, 2))
        );
        assert_eq!(
            Framework::new(2, vec![vec![1.0, 1.0], vec![1.0, 1.0]], [(0, 1)], None),
            Err(RigidityError::CoincidentEndpoints(1, 2))
        );
        assert!(matches!(
            Framework::new(2, vec![vec![0.0]], [], None),
            Err(RigidityError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn coincident_non_adjacent_vertices_are_allowed() {
        let f = Framework::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 0.0]],
            [(0, 1), (0, 2)],
            None,
        );
        assert!(f.is_ok());
    }

    #[test]
    fn edges_are_canonical() {
        let f = Framework::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]],
            [(2, 1), (1, 0), (2, 0)],
            None,
        )
        .unwrap();
        assert_eq!(f.edges(), &[Edge(0, 1), Edge(0, 2), Edge(1, 2)]);
    }

    #[test]
    fn span_dimension() {
        assert_eq!(affine_span_dimension(&[vec![3.0, 4.0]], DEFAULT_RANK_TOL), 0);
        assert_eq!(affine_span_dimension(triangle().vertices(), DEFAULT_RANK_TOL), 2);
        let collinear = vec![vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]];
        assert_eq!(affine_span_dimension(&collinear, DEFAULT_RANK_TOL), 1);
    }

    #[test]
    fn pin_of_pinned_triangle_is_identity() {
        let (p, iso) = pin(&triangle(), DEFAULT_RANK_TOL).unwrap();
        assert!(iso.is_identity(0.0));
        assert_eq!(p.framework().vertices(), triangle().vertices());
        assert_eq!(p.n_free(), 3);
    }

    #[test]
    fn pin_undoes_a_rotation() {
        let t = triangle();
        let (s, c) = (30f64.to_radians().sin(), 30f64.to_radians().cos());
        let rot = DMatrix::from_row_slice(2, 2, &[c, -s, s, c]);
        let rotated = t.affine_image(&rot, &[0.0, 0.0]).unwrap();
        let (p, iso) = pin(&rotated, DEFAULT_RANK_TOL).unwrap();
        for (a, b) in p.framework().vertices().iter().zip(t.vertices()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
        for (q, orig) in p.framework().vertices().iter().zip(rotated.vertices()) {
            let mapped = iso.apply(orig);
            for (x, y) in q.iter().zip(&mapped) {
                assert!((x - y).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_leading_vertices() {
        let f = Framework::new(
            2,
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0], vec![0.0, 1.0]],
            [(0, 1), (1, 2), (2, 3), (0, 3)],
            None,
        )
        .unwrap();
        assert_eq!(
            pin(&f, DEFAULT_RANK_TOL).unwrap_err(),
            RigidityError::DegenerateLeadingVertices { count: 3 }
        );
        let auto = auto_pin(&f, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(auto.permutation, vec![0, 1, 3, 2]);
        assert_eq!(auto.pinned.span_dim(), 2);
    }

    #[test]
    fn lower_dimensional_span_pins_fewer_axes() {
        // planar triangle in R^3: vertex 3 keeps x, y free, loses z
        let f = Framework::new(
            3,
            vec![vec![0.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], vec![0.0, 1.0, 1.0]],
            [(0, 1), (1, 2), (0, 2)],
            None,
        )
        .unwrap();
        let (p, _) = pin(&f, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(p.span_dim(), 2);
        assert_eq!(p.n_free(), 3);
    }

    #[test]
    fn measurements() {
        let seg = Framework::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]], [(0, 1)], None).unwrap();
        assert_eq!(measure(&seg, MeasureKind::Lengths).values, vec![1.0]);
        assert_eq!(measure(&seg, MeasureKind::Squared).values, vec![1.0]);
    }

    #[test]
    fn json_round_trip() {
        let t = triangle();
        let back = Framework::from_json_str(&t.to_json_string()).unwrap();
        assert_eq!(back, t);
    }
}
