//! The limit-configuration pipeline: color the vertices from a limit of a
//! flex, build the mixed-triangle graph, extract the red and blue walks,
//! find the induced red cycle through the spine edge, and telescope the
//! sigma projection into a zero-sum sign assignment.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::exact::{radical_signed_sum, rat, Radical, Rat, Scalar};
use crate::mobius::{ExtendedDistance, MobiusError, PointClass, ProjectivePoint};
use crate::polyhedron::{Edge, EdgeLengths, Face, Polyhedron, PolyhedronError, SpineEdge, VertexId};

/// A map from vertices to points of the quadric, standing in for the
/// limit of a flex, together with the distinguished spine edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LimitConfiguration {
    pub points: BTreeMap<VertexId, ProjectivePoint>,
    pub spine: SpineEdge,
}

impl LimitConfiguration {
    pub fn point(&self, v: VertexId) -> Result<&ProjectivePoint, PipelineError> {
        self.points.get(&v).ok_or(PipelineError::MissingPoint(v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Color {
    Red,
    Blue,
    Gold,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexColoring {
    pub colors: BTreeMap<VertexId, Color>,
}

impl VertexColoring {
    pub fn color(&self, v: VertexId) -> Color {
        self.colors[&v]
    }
}

/// Per-edge outcome of checking a configuration against edge lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeStatus {
    /// `d = (-lambda^2/2 : 1)`, exactly.
    FiniteMatch,
    /// `d` undefined (tangency), allowed on a limit configuration.
    Tangent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigReport {
    pub edges: BTreeMap<Edge, EdgeStatus>,
}

/// Outcome of the no-three-colors check; a violation names a
/// red - gold - blue path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct No3Report {
    pub violation: Option<(VertexId, VertexId, VertexId)>,
}

impl No3Report {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// The graph `G_T` on mixed red/blue triangles; every node has degree
/// exactly two, so it is a disjoint union of cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleCycleGraph {
    pub nodes: BTreeSet<Face>,
    pub adjacency: BTreeMap<Face, Vec<Face>>,
}

/// The obstruction certificate: an induced cycle through the spine edge
/// with signs making the exact signed length sum zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedCycle {
    pub cycle: Vec<VertexId>,
    pub signs: Vec<i8>,
    pub lengths: Vec<Radical>,
}

impl SignedCycle {
    pub fn signed_sum(&self) -> Radical {
        radical_signed_sum(&self.lengths, &self.signs)
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        let k = self.cycle.len();
        (0..k).any(|j| Edge::new(self.cycle[j], self.cycle[(j + 1) % k]) == e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("{stage}: {source}")]
    Staged {
        stage: &'static str,
        #[source]
        source: Box<PipelineError>,
    },
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
    #[error(transparent)]
    Mobius(#[from] MobiusError),
    #[error("no point for vertex {0}")]
    MissingPoint(VertexId),
    #[error("point of vertex {0} is off the quadric")]
    OffQuadricPoint(VertexId),
    #[error("vertex {vertex} classifies {got:?}, expected {expected:?}")]
    SpineClassMismatch {
        vertex: VertexId,
        expected: PointClass,
        got: PointClass,
    },
    #[error("edge {0:?} has infinite limit distance; no limit of realizations with these lengths exists")]
    InfinityOnEdge(Edge),
    #[error("edge {0:?} has a finite limit distance inconsistent with its length")]
    WrongFiniteValue(Edge),
    #[error("three-colored path: red {0} - gold {1} - blue {2}")]
    ThreeColorPath(VertexId, VertexId, VertexId),
    #[error("triangle {face:?} has degree {degree} in the mixed-triangle graph, expected 2")]
    DegreeViolation { face: Face, degree: usize },
    #[error("spine face is not a mixed red/blue triangle")]
    SpineFaceNotMixed,
    #[error("walk lemma violated at vertex {0}")]
    LemmaViolation(VertexId),
    #[error("spine edge appears more than once in the red walk")]
    SpineRepeated,
    #[error("no induced cycle through the spine edge inside the red walk")]
    NoInducedCycle,
    #[error("edge {0:?} needs a rational length for the exact telescoping")]
    RationalLengthRequired(Edge),
    #[error("telescoping step at edge {0:?} is not the signed edge length")]
    NonRealTelescope(Edge),
}

fn staged(stage: &'static str) -> impl Fn(PipelineError) -> PipelineError {
    move |source| PipelineError::Staged {
        stage,
        source: Box::new(source),
    }
}

/// Check that a configuration can arise as a limit of realizations with
/// edge lengths `lambda`: on every edge, the extended distance is either
/// exactly `-lambda^2/2` or undefined.
pub fn validate_limit_configuration(
    p: &Polyhedron,
    lambda: &EdgeLengths,
    cfg: &LimitConfiguration,
) -> Result<ConfigReport, PipelineError> {
    cfg.spine.validate(p)?;
    for &v in p.vertices() {
        let pt = cfg.point(v)?;
        if pt.classify() == PointClass::OffQuadric {
            return Err(PipelineError::OffQuadricPoint(v));
        }
    }
    for (v, expected) in [
        (cfg.spine.w1, PointClass::Finite),
        (cfg.spine.w2, PointClass::Finite),
        (cfg.spine.n, PointClass::Finite),
        (cfg.spine.s, PointClass::SimpleInfinite),
    ] {
        let got = cfg.point(v)?.classify();
        if got != expected {
            return Err(PipelineError::SpineClassMismatch { vertex: v, expected, got });
        }
    }
    let mut edges = BTreeMap::new();
    for e in p.edges() {
        let sq = lambda
            .squared
            .get(&e)
            .ok_or(PolyhedronError::NotAnEdge(e))?;
        let d = cfg.point(e.0)?.distance(cfg.point(e.1)?)?;
        let status = match d {
            ExtendedDistance::Undefined => EdgeStatus::Tangent,
            ExtendedDistance::Infinity => return Err(PipelineError::InfinityOnEdge(e)),
            ExtendedDistance::Value(v) => {
                let expected = Scalar::from_rat(rat(-1, 2) * sq);
                if v == expected {
                    EdgeStatus::FiniteMatch
                } else {
                    return Err(PipelineError::WrongFiniteValue(e));
                }
            }
        };
        edges.insert(e, status);
    }
    Ok(ConfigReport { edges })
}

/// Red for finite points, blue for simple infinite points sharing the
/// direction of the spine vertex `s`, gold otherwise.
pub fn color_vertices(cfg: &LimitConfiguration) -> Result<VertexColoring, PipelineError> {
    let s_dir = cfg.point(cfg.spine.s)?.psi()?;
    let mut colors = BTreeMap::new();
    for (&v, pt) in &cfg.points {
        let color = match pt.classify() {
            PointClass::Finite => Color::Red,
            PointClass::SimpleInfinite => {
                if pt.psi()? == s_dir {
                    Color::Blue
                } else {
                    Color::Gold
                }
            }
            _ => Color::Gold,
        };
        colors.insert(v, color);
    }
    Ok(VertexColoring { colors })
}

/// No gold vertex may see both a red and a blue neighbor.
pub fn check_no3(p: &Polyhedron, coloring: &VertexColoring) -> No3Report {
    for (&g, &c) in &coloring.colors {
        if c != Color::Gold {
            continue;
        }
        let Some(neigh) = p.neighbors(g) else { continue };
        let red = neigh.iter().find(|&&v| coloring.color(v) == Color::Red);
        let blue = neigh.iter().find(|&&v| coloring.color(v) == Color::Blue);
        if let (Some(&r), Some(&b)) = (red, blue) {
            return No3Report { violation: Some((r, g, b)) };
        }
    }
    No3Report { violation: None }
}

fn face_colors(f: &Face, coloring: &VertexColoring) -> (usize, usize, usize) {
    let mut counts = (0, 0, 0);
    for &v in f {
        match coloring.color(v) {
            Color::Red => counts.0 += 1,
            Color::Blue => counts.1 += 1,
            Color::Gold => counts.2 += 1,
        }
    }
    counts
}

/// The graph on triangles whose vertices are only red and blue with both
/// colors present; adjacency is sharing a bichromatic edge.
pub fn mixed_triangle_graph(
    p: &Polyhedron,
    coloring: &VertexColoring,
) -> Result<TriangleCycleGraph, PipelineError> {
    let mut nodes = BTreeSet::new();
    for f in p.faces() {
        let (r, b, g) = face_colors(f, coloring);
        if g == 0 && r > 0 && b > 0 {
            nodes.insert(*f);
        }
    }
    let mut adjacency: BTreeMap<Face, Vec<Face>> = BTreeMap::new();
    for f in &nodes {
        let mut adj = Vec::new();
        for (a, b) in [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])] {
            if coloring.color(a) == coloring.color(b) {
                continue;
            }
            let pair = p.faces_of_edge(Edge::new(a, b))?;
            let other = if &pair[0] == f { pair[1] } else { pair[0] };
            if nodes.contains(&other) {
                adj.push(other);
            }
        }
        if adj.len() != 2 {
            return Err(PipelineError::DegreeViolation { face: *f, degree: adj.len() });
        }
        adjacency.insert(*f, adj);
    }
    Ok(TriangleCycleGraph { nodes, adjacency })
}

fn collapse_cyclic(seq: Vec<VertexId>) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::with_capacity(seq.len());
    for v in seq {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Assemble the red and blue closed walks from the `G_T` cycle through
/// the spine triangle. Walks are returned with the first vertex repeated
/// at the end; a constant walk is a single vertex.
pub fn extract_walks(
    gt: &TriangleCycleGraph,
    coloring: &VertexColoring,
    spine: &SpineEdge,
) -> Result<(Vec<VertexId>, Vec<VertexId>), PipelineError> {
    let mut spine_face: Face = [spine.w1, spine.w2, spine.s];
    spine_face.sort_unstable();
    if !gt.nodes.contains(&spine_face) {
        return Err(PipelineError::SpineFaceNotMixed);
    }
    // walk the cycle of G_T containing the spine face
    let mut cycle_faces = vec![spine_face];
    let mut prev = spine_face;
    let mut cur = *gt.adjacency[&spine_face].iter().min().expect("degree 2");
    while cur != spine_face {
        cycle_faces.push(cur);
        let next = *gt.adjacency[&cur]
            .iter()
            .find(|&&f| f != prev)
            .expect("degree 2");
        prev = cur;
        cur = next;
    }
    let m = cycle_faces.len();
    // shared (bichromatic) edge between consecutive triangles
    let mut red_seq = Vec::with_capacity(m);
    let mut blue_seq = Vec::with_capacity(m);
    for i in 0..m {
        let f = &cycle_faces[i];
        let g = &cycle_faces[(i + 1) % m];
        let shared: Vec<VertexId> = f.iter().copied().filter(|v| g.contains(v)).collect();
        debug_assert_eq!(shared.len(), 2);
        // shared edges are bichromatic: one red endpoint, one blue
        let (a, b) = (shared[0], shared[1]);
        if coloring.color(a) == Color::Blue {
            blue_seq.push(a);
            red_seq.push(b);
        } else {
            blue_seq.push(b);
            red_seq.push(a);
        }
    }
    let red = collapse_cyclic(red_seq);
    let blue = collapse_cyclic(blue_seq);
    Ok((
        canonical_red_walk(red, spine)?,
        canonical_blue_walk(blue, spine.s),
    ))
}

fn canonical_red_walk(red: Vec<VertexId>, spine: &SpineEdge) -> Result<Vec<VertexId>, PipelineError> {
    if red.len() <= 1 {
        return Err(PipelineError::SpineFaceNotMixed);
    }
    let k = red.len();
    let mut start = None;
    let mut reversed = false;
    for i in 0..k {
        let (a, b) = (red[i], red[(i + 1) % k]);
        if a == spine.w1 && b == spine.w2 {
            start = Some(i);
            break;
        }
        if a == spine.w2 && b == spine.w1 {
            start = Some(i + 1);
            reversed = true;
            break;
        }
    }
    let start = start.ok_or(PipelineError::SpineFaceNotMixed)?;
    let mut seq: Vec<VertexId> = (0..k).map(|j| red[(start + j) % k]).collect();
    if reversed {
        seq[1..].reverse();
        // after reversal the walk runs w1, w2, ...
    }
    seq.push(seq[0]);
    Ok(seq)
}

fn canonical_blue_walk(blue: Vec<VertexId>, s: VertexId) -> Vec<VertexId> {
    if blue.len() <= 1 {
        return blue;
    }
    let k = blue.len();
    let start = blue.iter().position(|&v| v == s).unwrap_or(0);
    let mut seq: Vec<VertexId> = (0..k).map(|j| blue[(start + j) % k]).collect();
    seq.push(seq[0]);
    seq
}

/// The blue walk is constant at the image of `s`; the red walk lies in
/// the tangent slice of that image.
pub fn verify_walk_lemmas(
    cfg: &LimitConfiguration,
    red_walk: &[VertexId],
    blue_walk: &[VertexId],
) -> Result<(), PipelineError> {
    let s_point = cfg.point(cfg.spine.s)?;
    for &v in blue_walk {
        if cfg.point(v)? != s_point {
            return Err(PipelineError::LemmaViolation(v));
        }
    }
    for &v in red_walk {
        if !s_point.fin_contains(cfg.point(v)?)? {
            return Err(PipelineError::LemmaViolation(v));
        }
    }
    Ok(())
}

/// The minimum induced cycle through the spine edge with vertices in the
/// red walk; ties broken by the lexicographically smallest sequence
/// starting `w1, w2`.
pub fn induced_red_cycle(
    p: &Polyhedron,
    red_walk: &[VertexId],
    spine: &SpineEdge,
) -> Result<Vec<VertexId>, PipelineError> {
    let k = red_walk.len();
    let mut spine_count = 0;
    for i in 0..k.saturating_sub(1) {
        if Edge::new(red_walk[i], red_walk[i + 1]) == spine.edge() {
            spine_count += 1;
        }
    }
    if spine_count != 1 {
        return Err(PipelineError::SpineRepeated);
    }
    let allowed: BTreeSet<VertexId> = red_walk.iter().copied().collect();
    let cycles = crate::zero_sum::enumerate_induced_cycles_within(
        p,
        spine.edge(),
        &allowed,
        allowed.len(),
        spine.w1,
    );
    cycles.into_iter().next().ok_or(PipelineError::NoInducedCycle)
}

/// Telescoping: sign each cycle edge so that `sign * lambda` equals
/// `i (sigma_j - sigma_{j+1})` exactly; the signed sum is then zero.
pub fn derive_signed_cycle(
    cfg: &LimitConfiguration,
    lambda: &EdgeLengths,
    cycle: &[VertexId],
) -> Result<SignedCycle, PipelineError> {
    let s_point = cfg.point(cfg.spine.s)?;
    let sigmas: Vec<Scalar> = cycle
        .iter()
        .map(|&v| s_point.sigma_project(cfg.point(v)?).map_err(PipelineError::from))
        .collect::<Result<_, _>>()?;
    let k = cycle.len();
    let mut signs = Vec::with_capacity(k);
    let mut lengths = Vec::with_capacity(k);
    for j in 0..k {
        let e = Edge::new(cycle[j], cycle[(j + 1) % k]);
        let len = lambda
            .length
            .get(&e)
            .ok_or(PolyhedronError::NotAnEdge(e))?;
        let value: Rat = len
            .as_rat()
            .ok_or(PipelineError::RationalLengthRequired(e))?;
        let step = Scalar::i() * (&sigmas[j] - &sigmas[(j + 1) % k]);
        let step = step.as_rat().ok_or(PipelineError::NonRealTelescope(e))?;
        let sign = if *step == value {
            1
        } else if -step == value {
            -1
        } else {
            return Err(PipelineError::NonRealTelescope(e));
        };
        signs.push(sign);
        lengths.push(len.clone());
    }
    let out = SignedCycle { cycle: cycle.to_vec(), signs, lengths };
    debug_assert!(out.signed_sum().is_zero());
    Ok(out)
}

/// Run the full pipeline; errors carry the failing stage.
pub fn run_pipeline(
    p: &Polyhedron,
    lambda: &EdgeLengths,
    cfg: &LimitConfiguration,
) -> Result<SignedCycle, PipelineError> {
    validate_limit_configuration(p, lambda, cfg).map_err(staged("validate"))?;
    let coloring = color_vertices(cfg).map_err(staged("coloring"))?;
    let no3 = check_no3(p, &coloring);
    if let Some((r, g, b)) = no3.violation {
        return Err(staged("no3")(PipelineError::ThreeColorPath(r, g, b)));
    }
    let gt = mixed_triangle_graph(p, &coloring).map_err(staged("triangle-graph"))?;
    let (red, blue) = extract_walks(&gt, &coloring, &cfg.spine).map_err(staged("walks"))?;
    verify_walk_lemmas(cfg, &red, &blue).map_err(staged("lemmas"))?;
    let cycle = induced_red_cycle(p, &red, &cfg.spine).map_err(staged("cycle"))?;
    let out = derive_signed_cycle(cfg, lambda, &cycle).map_err(staged("telescoping"))?;
    if !out.signed_sum().is_zero()
        || out.cycle.contains(&cfg.spine.s)
        || out.cycle.contains(&cfg.spine.n)
        || !out.contains_edge(cfg.spine.edge())
    {
        return Err(staged("certificate")(PipelineError::NoInducedCycle));
    }
    Ok(out)
}
