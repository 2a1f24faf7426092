//! Abstract triangular polyhedra, rational realizations, induced edge
//! lengths, the dihedral-variation indicator, and cycle predicates on the
//! 1-skeleton.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::exact::{radical_from_square, ExactError, Radical, Rat};

pub type VertexId = u32;

/// Unordered edge, stored with the smaller id first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(pub VertexId, pub VertexId);

impl Edge {
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a <= b {
            Edge(a, b)
        } else {
            Edge(b, a)
        }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.0, self.1)
    }
}

/// Unordered face, stored sorted.
pub type Face = [VertexId; 3];

fn sorted_face(f: Face) -> Face {
    let mut f = f;
    f.sort_unstable();
    f
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedronError {
    #[error("face {0:?} has repeated vertices")]
    DegenerateFace(Face),
    #[error("duplicate face {0:?}")]
    DuplicateFace(Face),
    #[error("face {0:?} uses undeclared vertex {1}")]
    UnknownVertex(Face, VertexId),
    #[error("edge {edge:?} belongs to {count} faces, expected 2")]
    EdgeFaceCountViolation { edge: Edge, count: usize },
    #[error("the 1-skeleton is disconnected")]
    DisconnectedSkeleton,
    #[error("no vertices")]
    Empty,
    #[error("{0:?} is not an edge")]
    NotAnEdge(Edge),
    #[error("vertex sequence is not a cycle in the 1-skeleton")]
    NotACycle,
    #[error("edge {0:?} has coincident endpoints in the realization")]
    CoincidentEndpoints(Edge),
    #[error("no position for vertex {0}")]
    MissingPosition(VertexId),
    #[error("face {0:?} is collinear in the realization")]
    DegenerateTriangle(Face),
}

/// A finite two-dimensional abstract simplicial complex in which every
/// edge lies in exactly two triangular faces and the 1-skeleton is
/// connected.
#[derive(Clone, PartialEq, Eq)]
pub struct Polyhedron {
    vertices: BTreeSet<VertexId>,
    faces: BTreeSet<Face>,
    edge_faces: BTreeMap<Edge, [Face; 2]>,
    adjacency: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Polyhedron {
    pub fn validate_complex(
        vertices: impl IntoIterator<Item = VertexId>,
        faces: impl IntoIterator<Item = Face>,
    ) -> Result<Self, PolyhedronError> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().collect();
        if vertices.is_empty() {
            return Err(PolyhedronError::Empty);
        }
        let mut face_set: BTreeSet<Face> = BTreeSet::new();
        let mut edge_faces_all: BTreeMap<Edge, Vec<Face>> = BTreeMap::new();
        for raw in faces {
            let f = sorted_face(raw);
            if f[0] == f[1] || f[1] == f[2] {
                return Err(PolyhedronError::DegenerateFace(raw));
            }
            for &v in &f {
                if !vertices.contains(&v) {
                    return Err(PolyhedronError::UnknownVertex(f, v));
                }
            }
            if !face_set.insert(f) {
                return Err(PolyhedronError::DuplicateFace(f));
            }
            for (a, b) in [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])] {
                edge_faces_all.entry(Edge::new(a, b)).or_default().push(f);
            }
        }
        let mut edge_faces = BTreeMap::new();
        for (edge, mut fs) in edge_faces_all {
            if fs.len() != 2 {
                return Err(PolyhedronError::EdgeFaceCountViolation { edge, count: fs.len() });
            }
            fs.sort();
            edge_faces.insert(edge, [fs[0], fs[1]]);
        }
        let mut adjacency: BTreeMap<VertexId, BTreeSet<VertexId>> =
            vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
        for edge in edge_faces.keys() {
            adjacency.get_mut(&edge.0).unwrap().insert(edge.1);
            adjacency.get_mut(&edge.1).unwrap().insert(edge.0);
        }
        let p = Polyhedron { vertices, faces: face_set, edge_faces, adjacency };
        if !p.is_connected(&p.vertices, &BTreeSet::new()) {
            return Err(PolyhedronError::DisconnectedSkeleton);
        }
        Ok(p)
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn faces(&self) -> &BTreeSet<Face> {
        &self.faces
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edge_faces.keys().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_faces.len()
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.edge_faces.contains_key(&e)
    }

    pub fn neighbors(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adjacency.get(&v)
    }

    pub fn faces_of_edge(&self, e: Edge) -> Result<&[Face; 2], PolyhedronError> {
        self.edge_faces.get(&e).ok_or(PolyhedronError::NotAnEdge(e))
    }

    /// Apexes of the two faces containing `edge`, in ascending id order.
    pub fn opposite_vertices(&self, edge: Edge) -> Result<(VertexId, VertexId), PolyhedronError> {
        let faces = self.faces_of_edge(edge)?;
        let mut apexes: Vec<VertexId> = faces
            .iter()
            .map(|f| *f.iter().find(|&&v| !edge.contains(v)).expect("apex"))
            .collect();
        apexes.sort_unstable();
        Ok((apexes[0], apexes[1]))
    }

    fn is_connected(&self, within: &BTreeSet<VertexId>, removed: &BTreeSet<VertexId>) -> bool {
        let alive: Vec<VertexId> = within.iter().copied().filter(|v| !removed.contains(v)).collect();
        match alive.first() {
            None => true,
            Some(&start) => {
                let comp = self.component_of(start, removed);
                comp.len() == alive.len()
            }
        }
    }

    fn component_of(&self, start: VertexId, removed: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adjacency[&v] {
                if !removed.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen
    }

    /// Connected components of the 1-skeleton after deleting `removed`
    /// vertices, in ascending-min-id order.
    pub fn components_without(&self, removed: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
        let mut remaining: BTreeSet<VertexId> =
            self.vertices.iter().copied().filter(|v| !removed.contains(v)).collect();
        let mut out = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let comp = self.component_of(start, removed);
            for v in &comp {
                remaining.remove(v);
            }
            out.push(comp);
        }
        out
    }

    fn check_cycle(&self, cycle: &[VertexId]) -> Result<(), PolyhedronError> {
        if cycle.len() < 3 {
            return Err(PolyhedronError::NotACycle);
        }
        let distinct: BTreeSet<_> = cycle.iter().collect();
        if distinct.len() != cycle.len() {
            return Err(PolyhedronError::NotACycle);
        }
        for k in 0..cycle.len() {
            let next = cycle[(k + 1) % cycle.len()];
            if !self.has_edge(Edge::new(cycle[k], next)) {
                return Err(PolyhedronError::NotACycle);
            }
        }
        Ok(())
    }

    /// Whether deleting the cycle disconnects the rest, plus the
    /// resulting components.
    pub fn is_separating_cycle(
        &self,
        cycle: &[VertexId],
    ) -> Result<(bool, Vec<BTreeSet<VertexId>>), PolyhedronError> {
        self.check_cycle(cycle)?;
        let removed: BTreeSet<VertexId> = cycle.iter().copied().collect();
        let components = self.components_without(&removed);
        Ok((components.len() >= 2, components))
    }

    /// Whether the cycle has no chord in the 1-skeleton.
    pub fn is_induced_cycle(&self, cycle: &[VertexId]) -> Result<bool, PolyhedronError> {
        self.check_cycle(cycle)?;
        let n = cycle.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let consecutive = j == i + 1 || (i == 0 && j == n - 1);
                if !consecutive && self.has_edge(Edge::new(cycle[i], cycle[j])) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Polyhedron({} vertices, {} edges, {} faces)",
            self.vertices.len(),
            self.edge_faces.len(),
            self.faces.len()
        )
    }
}

pub type Point3 = [Rat; 3];

/// A rational placement of the vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realization {
    pub positions: BTreeMap<VertexId, Point3>,
}

/// The edge containing the spine `{w1, w2}` together with the two apexes
/// `s` and `n` of the faces around it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpineEdge {
    pub w1: VertexId,
    pub w2: VertexId,
    pub s: VertexId,
    pub n: VertexId,
}

impl SpineEdge {
    pub fn edge(&self) -> Edge {
        Edge::new(self.w1, self.w2)
    }

    /// Check the spine against the complex: `{w1,w2,s}` and `{w1,w2,n}`
    /// must be the two faces containing `{w1,w2}`.
    pub fn validate(&self, p: &Polyhedron) -> Result<(), PolyhedronError> {
        let (a, b) = p.opposite_vertices(self.edge())?;
        let mut got = [self.s, self.n];
        got.sort_unstable();
        if got != [a, b] || self.s == self.n {
            return Err(PolyhedronError::NotAnEdge(self.edge()));
        }
        Ok(())
    }
}

/// Exact squared lengths and their radical square roots, per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLengths {
    pub squared: BTreeMap<Edge, Rat>,
    pub length: BTreeMap<Edge, Radical>,
}

impl EdgeLengths {
    /// Build from exact squared lengths.
    pub fn from_squared(squared: BTreeMap<Edge, Rat>) -> Result<Self, ExactError> {
        let mut length = BTreeMap::new();
        for (&e, sq) in &squared {
            if !num_traits::Signed::is_positive(sq) {
                return Err(ExactError::NotPositive);
            }
            length.insert(e, radical_from_square(sq)?);
        }
        Ok(EdgeLengths { squared, length })
    }
}

fn sub3(a: &Point3, b: &Point3) -> Point3 {
    [&a[0] - &b[0], &a[1] - &b[1], &a[2] - &b[2]]
}

fn dot3(a: &Point3, b: &Point3) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

fn cross3(a: &Point3, b: &Point3) -> Point3 {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

impl Realization {
    pub fn position(&self, v: VertexId) -> Result<&Point3, PolyhedronError> {
        self.positions.get(&v).ok_or(PolyhedronError::MissingPosition(v))
    }

    pub fn squared_distance(&self, u: VertexId, v: VertexId) -> Result<Rat, PolyhedronError> {
        let d = sub3(self.position(u)?, self.position(v)?);
        Ok(dot3(&d, &d))
    }

    /// Exact induced edge lengths of the realization.
    pub fn induced_lengths(&self, p: &Polyhedron) -> Result<EdgeLengths, PolyhedronError> {
        let mut squared = BTreeMap::new();
        let mut length = BTreeMap::new();
        for e in p.edges() {
            let sq = self.squared_distance(e.0, e.1)?;
            if sq.is_zero() {
                return Err(PolyhedronError::CoincidentEndpoints(e));
            }
            let len = radical_from_square(&sq).expect("positive squared length");
            squared.insert(e, sq);
            length.insert(e, len);
        }
        Ok(EdgeLengths { squared, length })
    }

    /// The rational dihedral-variation indicator `n1 . n2` at the spine,
    /// with `n1 = (w2-w1) x (s-w1)` and `n2 = (w2-w1) x (n-w1)`. Along a
    /// length-preserving deformation the face norms are constant, so the
    /// indicator varies exactly when the dihedral cosine does.
    pub fn dihedral_indicator(&self, spine: &SpineEdge) -> Result<Rat, PolyhedronError> {
        let w1 = self.position(spine.w1)?;
        let w2 = self.position(spine.w2)?;
        let s = self.position(spine.s)?;
        let n = self.position(spine.n)?;
        let axis = sub3(w2, w1);
        let n1 = cross3(&axis, &sub3(s, w1));
        let n2 = cross3(&axis, &sub3(n, w1));
        if dot3(&n1, &n1).is_zero() {
            return Err(PolyhedronError::DegenerateTriangle(sorted_face([
                spine.w1, spine.w2, spine.s,
            ])));
        }
        if dot3(&n2, &n2).is_zero() {
            return Err(PolyhedronError::DegenerateTriangle(sorted_face([
                spine.w1, spine.w2, spine.n,
            ])));
        }
        Ok(dot3(&n1, &n2))
    }
}

/// The standard octahedron used across tests and docs: equator 1-2-3-4,
/// poles 5 and 6.
pub fn octahedron() -> Polyhedron {
    Polyhedron::validate_complex(
        1..=6,
        [
            [1, 2, 5],
            [2, 3, 5],
            [3, 4, 5],
            [4, 1, 5],
            [1, 2, 6],
            [2, 3, 6],
            [3, 4, 6],
            [4, 1, 6],
        ],
    )
    .expect("octahedron is valid")
}

/// Suspension over a hexagon: equator 1..=6, poles 7 and 8.
pub fn hexagonal_suspension() -> Polyhedron {
    let mut faces = Vec::new();
    for j in 1..=6u32 {
        let k = j % 6 + 1;
        faces.push([j, k, 7]);
        faces.push([j, k, 8]);
    }
    Polyhedron::validate_complex(1..=8, faces).expect("suspension is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    fn pt(x: i64, y: i64, z: i64) -> Point3 {
        [rat_int(x), rat_int(y), rat_int(z)]
    }

    #[test]
    fn octahedron_validates() {
        let p = octahedron();
        assert_eq!(p.edge_count(), 12);
        assert_eq!(p.faces().len(), 8);
        // 2|E| = 3|F|
        assert_eq!(2 * p.edge_count(), 3 * p.faces().len());
    }

    #[test]
    fn single_triangle_fails_edge_count() {
        let err = Polyhedron::validate_complex(1..=3, [[1, 2, 3]]).unwrap_err();
        assert!(matches!(err, PolyhedronError::EdgeFaceCountViolation { count: 1, .. }));
    }

    #[test]
    fn disjoint_octahedra_fail_connectivity() {
        let mut faces: Vec<Face> = octahedron().faces().iter().copied().collect();
        for f in octahedron().faces() {
            faces.push(f.map(|v| v + 6));
        }
        let err = Polyhedron::validate_complex(1..=12, faces).unwrap_err();
        assert_eq!(err, PolyhedronError::DisconnectedSkeleton);
    }

    #[test]
    fn degenerate_and_duplicate_faces() {
        assert!(matches!(
            Polyhedron::validate_complex(1..=3, [[1, 2, 2]]),
            Err(PolyhedronError::DegenerateFace(_))
        ));
        assert!(matches!(
            Polyhedron::validate_complex(1..=6, [[1, 2, 5], [5, 2, 1]]),
            Err(PolyhedronError::DuplicateFace(_))
        ));
    }

    #[test]
    fn opposite_vertices_examples() {
        let p = octahedron();
        assert_eq!(p.opposite_vertices(Edge::new(1, 2)).unwrap(), (5, 6));
        assert_eq!(p.opposite_vertices(Edge::new(1, 5)).unwrap(), (2, 4));
        assert_eq!(
            p.opposite_vertices(Edge::new(1, 3)),
            Err(PolyhedronError::NotAnEdge(Edge::new(1, 3)))
        );
    }

    #[test]
    fn induced_lengths_examples() {
        let p = octahedron();
        let rho = Realization {
            positions: BTreeMap::from([
                (1, pt(0, 0, 0)),
                (2, pt(1, 0, 0)),
                (3, pt(1, 1, 0)),
                (4, pt(0, 1, 0)),
                (5, pt(0, 0, 1)),
                (6, pt(1, 1, 1)),
            ]),
        };
        let lengths = rho.induced_lengths(&p).unwrap();
        assert_eq!(lengths.squared[&Edge::new(1, 2)], rat_int(1));
        assert_eq!(lengths.length[&Edge::new(1, 2)], Radical::from_int(1));
        assert_eq!(lengths.squared[&Edge::new(2, 6)], rat_int(2));
        for (e, len) in &lengths.length {
            assert_eq!(len.square().as_rat().unwrap(), lengths.squared[e]);
        }

        let mut coincident = rho.clone();
        coincident.positions.insert(2, pt(0, 0, 0));
        assert_eq!(
            coincident.induced_lengths(&p),
            Err(PolyhedronError::CoincidentEndpoints(Edge::new(1, 2)))
        );
    }

    #[test]
    fn dihedral_indicator_examples() {
        let spine = SpineEdge { w1: 1, w2: 2, s: 3, n: 4 };
        let flat = Realization {
            positions: BTreeMap::from([
                (1, pt(0, 0, 0)),
                (2, pt(1, 0, 0)),
                (3, pt(0, 1, 0)),
                (4, pt(0, -1, 0)),
            ]),
        };
        assert_eq!(flat.dihedral_indicator(&spine).unwrap(), rat_int(-1));
        let book = Realization {
            positions: BTreeMap::from([
                (1, pt(0, 0, 0)),
                (2, pt(1, 0, 0)),
                (3, pt(0, 1, 0)),
                (4, pt(0, 0, -1)),
            ]),
        };
        assert_eq!(book.dihedral_indicator(&spine).unwrap(), rat_int(0));
        let collinear = Realization {
            positions: BTreeMap::from([
                (1, pt(0, 0, 0)),
                (2, pt(1, 0, 0)),
                (3, pt(2, 0, 0)),
                (4, pt(0, 0, -1)),
            ]),
        };
        assert!(matches!(
            collinear.dihedral_indicator(&spine),
            Err(PolyhedronError::DegenerateTriangle(_))
        ));
    }

    #[test]
    fn dihedral_indicator_isometry_invariance() {
        // rational rotation from the 3-4-5 triangle, about z, plus a shift
        let spine = SpineEdge { w1: 1, w2: 2, s: 3, n: 4 };
        let base = Realization {
            positions: BTreeMap::from([
                (1, pt(0, 0, 0)),
                (2, pt(2, 0, 1)),
                (3, pt(0, 3, 0)),
                (4, pt(1, -1, -2)),
            ]),
        };
        let (c, s) = (rat(3, 5), rat(4, 5));
        let moved = Realization {
            positions: base
                .positions
                .iter()
                .map(|(&v, p)| {
                    let x = &c * &p[0] - &s * &p[1] + rat_int(7);
                    let y = &s * &p[0] + &c * &p[1] - rat_int(2);
                    let z = p[2].clone() + rat(1, 3);
                    (v, [x, y, z])
                })
                .collect(),
        };
        assert_eq!(
            base.dihedral_indicator(&spine).unwrap(),
            moved.dihedral_indicator(&spine).unwrap()
        );
    }

    #[test]
    fn cycle_predicates() {
        let p = octahedron();
        let (sep, comps) = p.is_separating_cycle(&[1, 2, 3, 4]).unwrap();
        assert!(sep);
        assert_eq!(comps, vec![BTreeSet::from([5]), BTreeSet::from([6])]);
        let (sep, comps) = p.is_separating_cycle(&[1, 2, 5]).unwrap();
        assert!(!sep);
        assert_eq!(comps, vec![BTreeSet::from([3, 4, 6])]);
        assert_eq!(p.is_separating_cycle(&[1, 3, 5]), Err(PolyhedronError::NotACycle));

        assert_eq!(p.is_induced_cycle(&[1, 2, 3, 4]), Ok(true));
        assert_eq!(p.is_induced_cycle(&[1, 2, 3, 6]), Ok(false));
        assert_eq!(p.is_induced_cycle(&[1, 2, 5]), Ok(true));
    }
}
