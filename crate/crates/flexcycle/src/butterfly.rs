//! Butterfly flexes: place a separating cycle on the x-axis according to
//! a sign assignment, put the remaining vertices at seeded random
//! rational points, and rotate the components of the complement
//! independently about the axis. Rational-slope rotations keep the whole
//! flex exact, and the limit of the rotation is taken analytically.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::exact::{rat_int, Rat, Scalar};
use crate::limit::LimitConfiguration;
use crate::mobius::ProjectivePoint;
use crate::polyhedron::{
    Edge, Point3, Polyhedron, PolyhedronError, Realization, SpineEdge, VertexId,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ButterflyError {
    #[error("cycle does not separate the 1-skeleton")]
    NotSeparating,
    #[error("all edge signs are equal")]
    AllSignsEqual,
    #[error("expected one sign per cycle edge")]
    SignCountMismatch,
    #[error("x positions do not respect the sign assignment at edge {0:?}")]
    XPositionsDisagree(Edge),
    #[error("could not place the off-cycle vertices after {0} attempts")]
    PlacementFailure(usize),
    #[error("missing rotation parameter for component {0}")]
    MissingComponentParameter(VertexId),
    #[error("parameter given for unknown component {0}")]
    UnknownComponent(VertexId),
    #[error("cycle vertex {0} is not on the x-axis in the base realization")]
    BaseNotOnAxis(VertexId),
    #[error("no cycle edge has its opposite vertices in different components")]
    NoUsableSpine,
    #[error("rotating vertex {0} lies on the x-axis")]
    DegenerateRotatingVertex(VertexId),
    #[error("need at least two flex samples")]
    TooFewSamples,
    #[error("edge {edge:?} changed length in sample {sample}")]
    LengthDrift { edge: Edge, sample: usize },
    #[error("dihedral indicator constant across all samples")]
    ConstantDihedral,
    #[error("no non-edge squared distance separates the samples")]
    CongruentSamples,
    #[error(transparent)]
    Polyhedron(#[from] PolyhedronError),
}

/// A separating cycle with a sign per cycle edge (edge j is
/// `{cycle[j], cycle[j+1]}`, cyclically), a placement seed, and optional
/// explicit x positions for the cycle vertices.
#[derive(Debug, Clone)]
pub struct ButterflySpec {
    pub polyhedron: Polyhedron,
    pub cycle: Vec<VertexId>,
    pub signs: Vec<i8>,
    pub seed: u64,
    pub x_positions: Option<BTreeMap<VertexId, Rat>>,
}

/// One exact point of the flex; components are identified by their
/// minimum vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexSample {
    pub parameters: BTreeMap<VertexId, Rat>,
    pub realization: Realization,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlexReport {
    pub samples: usize,
    pub dihedral_indicators: Vec<Rat>,
    pub distinct_indicators: usize,
}

const PLACEMENT_ATTEMPTS: usize = 1000;

impl ButterflySpec {
    fn check(&self) -> Result<Vec<BTreeSet<VertexId>>, ButterflyError> {
        if self.signs.len() != self.cycle.len() {
            return Err(ButterflyError::SignCountMismatch);
        }
        if self.signs.iter().all(|&s| s == 1) || self.signs.iter().all(|&s| s == -1) {
            return Err(ButterflyError::AllSignsEqual);
        }
        let (separating, components) = self.polyhedron.is_separating_cycle(&self.cycle)?;
        if !separating {
            return Err(ButterflyError::NotSeparating);
        }
        Ok(components)
    }

    /// Components of the skeleton minus the cycle, keyed by minimum id.
    pub fn components(&self) -> Result<BTreeMap<VertexId, BTreeSet<VertexId>>, ButterflyError> {
        Ok(self
            .check()?
            .into_iter()
            .map(|c| (*c.iter().next().expect("nonempty component"), c))
            .collect())
    }
}

/// Choose x positions compatible with the sign pattern: walk the signs
/// with step +(#minus) or -(#plus) (the walk closes exactly because the
/// totals cancel), then add j/(2k) to make all values distinct. The
/// offsets are too small to flip any comparison.
fn auto_x_positions(cycle: &[VertexId], signs: &[i8]) -> BTreeMap<VertexId, Rat> {
    let k = cycle.len() as i64;
    let plus = signs.iter().filter(|&&s| s == 1).count() as i64;
    let minus = k - plus;
    let mut out = BTreeMap::new();
    let mut walk = Rat::zero();
    for (j, (&v, &sign)) in cycle.iter().zip(signs).enumerate() {
        let x = walk.clone() + crate::exact::rat(j as i64 + 1, 2 * k);
        out.insert(v, x);
        walk += if sign == 1 { rat_int(minus) } else { rat_int(-plus) };
    }
    out
}

fn check_x_positions(
    cycle: &[VertexId],
    signs: &[i8],
    xs: &BTreeMap<VertexId, Rat>,
) -> Result<(), ButterflyError> {
    let k = cycle.len();
    for j in 0..k {
        let (a, b) = (cycle[j], cycle[(j + 1) % k]);
        let (xa, xb) = (&xs[&a], &xs[&b]);
        let ok = if signs[j] == 1 { xa < xb } else { xa > xb };
        if !ok {
            return Err(ButterflyError::XPositionsDisagree(Edge::new(a, b)));
        }
    }
    Ok(())
}

fn random_rat(rng: &mut ChaCha20Rng) -> Rat {
    let num = rng.gen_range(-128i64..=128);
    let den = rng.gen_range(1i64..=64);
    crate::exact::rat(num, den)
}

/// Place the cycle on the x-axis per the signs and the rest at seeded
/// random rational points off the axis.
pub fn construct_realization(spec: &ButterflySpec) -> Result<Realization, ButterflyError> {
    spec.check()?;
    let xs = match &spec.x_positions {
        Some(xs) => {
            for v in &spec.cycle {
                if !xs.contains_key(v) {
                    return Err(ButterflyError::XPositionsDisagree(Edge::new(*v, *v)));
                }
            }
            xs.clone()
        }
        None => auto_x_positions(&spec.cycle, &spec.signs),
    };
    check_x_positions(&spec.cycle, &spec.signs, &xs)?;

    let p = &spec.polyhedron;
    let cycle_set: BTreeSet<VertexId> = spec.cycle.iter().copied().collect();
    let off_cycle: Vec<VertexId> =
        p.vertices().iter().copied().filter(|v| !cycle_set.contains(v)).collect();
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);

    'attempt: for _ in 0..PLACEMENT_ATTEMPTS {
        let mut positions: BTreeMap<VertexId, Point3> = xs
            .iter()
            .map(|(&v, x)| (v, [x.clone(), Rat::zero(), Rat::zero()]))
            .collect();
        for &v in &off_cycle {
            let (x, y, z) = (random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
            if y.is_zero() && z.is_zero() {
                continue 'attempt;
            }
            positions.insert(v, [x, y, z]);
        }
        let rho = Realization { positions };
        // every edge must have distinct endpoints
        for e in p.edges() {
            if rho.squared_distance(e.0, e.1).expect("placed").is_zero() {
                continue 'attempt;
            }
        }
        // faces touching an off-cycle vertex must be non-collinear;
        // single off-cycle vertices are off the axis already, so only
        // faces with two off-cycle vertices can degenerate
        for f in p.faces() {
            if f.iter().any(|v| !cycle_set.contains(v)) && face_collinear(&rho, f) {
                continue 'attempt;
            }
        }
        return Ok(rho);
    }
    Err(ButterflyError::PlacementFailure(PLACEMENT_ATTEMPTS))
}

fn face_collinear(rho: &Realization, f: &[VertexId; 3]) -> bool {
    let a = rho.position(f[0]).expect("placed");
    let b = rho.position(f[1]).expect("placed");
    let c = rho.position(f[2]).expect("placed");
    let u: Point3 = [&b[0] - &a[0], &b[1] - &a[1], &b[2] - &a[2]];
    let v: Point3 = [&c[0] - &a[0], &c[1] - &a[1], &c[2] - &a[2]];
    let cross = [
        &u[1] * &v[2] - &u[2] * &v[1],
        &u[2] * &v[0] - &u[0] * &v[2],
        &u[0] * &v[1] - &u[1] * &v[0],
    ];
    cross.iter().all(|c| c.is_zero())
}

/// Rotate each off-cycle component about the x-axis by its rational-slope
/// parameter `t`: cos = (1-t^2)/(1+t^2), sin = 2t/(1+t^2).
pub fn sample_flex(
    spec: &ButterflySpec,
    base: &Realization,
    params: &BTreeMap<VertexId, Rat>,
) -> Result<FlexSample, ButterflyError> {
    let components = spec.components()?;
    for v in &spec.cycle {
        let pos = base.position(*v)?;
        if !pos[1].is_zero() || !pos[2].is_zero() {
            return Err(ButterflyError::BaseNotOnAxis(*v));
        }
    }
    for id in params.keys() {
        if !components.contains_key(id) {
            return Err(ButterflyError::UnknownComponent(*id));
        }
    }
    let mut positions = base.positions.clone();
    for (id, members) in &components {
        let t = params
            .get(id)
            .ok_or(ButterflyError::MissingComponentParameter(*id))?;
        if t.is_zero() {
            continue;
        }
        let denom = Rat::one() + t * t;
        let cos = (Rat::one() - t * t) / &denom;
        let sin = (rat_int(2) * t) / &denom;
        for &v in members {
            let pos = positions.get_mut(&v).expect("vertex placed");
            let (y, z) = (pos[1].clone(), pos[2].clone());
            pos[1] = &cos * &y - &sin * &z;
            pos[2] = &sin * &y + &cos * &z;
        }
    }
    let rotated = Realization { positions };
    // rational rotations are exact isometries of each component
    debug_assert_eq!(
        rotated.induced_lengths(&spec.polyhedron).ok().map(|l| l.squared),
        base.induced_lengths(&spec.polyhedron).ok().map(|l| l.squared),
    );
    Ok(FlexSample { parameters: params.clone(), realization: rotated })
}

/// The limit of the flex as the designated component's complexified
/// rotation parameter goes to infinity: every rotating point `(x, y, z)`
/// with `(y, z) != (0, 0)` tends to `(0 : 1 : -i : 0 : 0)` on the
/// quadric, and everything else embeds at its base position.
pub fn analytic_limit_configuration(
    spec: &ButterflySpec,
    base: &Realization,
    rotating_component: VertexId,
) -> Result<LimitConfiguration, ButterflyError> {
    let components = spec.components()?;
    let rotating = components
        .get(&rotating_component)
        .ok_or(ButterflyError::UnknownComponent(rotating_component))?;
    for &v in rotating {
        let pos = base.position(v)?;
        if pos[1].is_zero() && pos[2].is_zero() {
            return Err(ButterflyError::DegenerateRotatingVertex(v));
        }
    }
    let p = &spec.polyhedron;
    let k = spec.cycle.len();
    let mut spine = None;
    for j in 0..k {
        let (w1, w2) = (spec.cycle[j], spec.cycle[(j + 1) % k]);
        let (a, b) = p.opposite_vertices(Edge::new(w1, w2))?;
        if rotating.contains(&a) && !rotating.contains(&b) {
            spine = Some(SpineEdge { w1, w2, s: a, n: b });
            break;
        }
        if rotating.contains(&b) && !rotating.contains(&a) {
            spine = Some(SpineEdge { w1, w2, s: b, n: a });
            break;
        }
    }
    let spine = spine.ok_or(ButterflyError::NoUsableSpine)?;
    let limit_point = ProjectivePoint::new([
        Scalar::zero(),
        Scalar::one(),
        -Scalar::i(),
        Scalar::zero(),
        Scalar::zero(),
    ])
    .expect("nonzero");
    let mut points = BTreeMap::new();
    for &v in p.vertices() {
        let pt = if rotating.contains(&v) {
            limit_point.clone()
        } else {
            ProjectivePoint::embed(base.position(v)?)
        };
        points.insert(v, pt);
    }
    Ok(LimitConfiguration { points, spine })
}

/// Check a sampled flex: exact length preservation, a varying dihedral
/// indicator at the spine, and a necessary non-congruence witness.
pub fn verify_flex(
    p: &Polyhedron,
    samples: &[FlexSample],
    spine: &SpineEdge,
) -> Result<FlexReport, ButterflyError> {
    if samples.len() < 2 {
        return Err(ButterflyError::TooFewSamples);
    }
    let reference = samples[0].realization.induced_lengths(p)?;
    for (idx, sample) in samples.iter().enumerate().skip(1) {
        let lengths = sample.realization.induced_lengths(p)?;
        for (e, sq) in &lengths.squared {
            if reference.squared[e] != *sq {
                return Err(ButterflyError::LengthDrift { edge: *e, sample: idx });
            }
        }
    }
    let indicators: Vec<Rat> = samples
        .iter()
        .map(|s| s.realization.dihedral_indicator(spine))
        .collect::<Result<_, _>>()?;
    let distinct: BTreeSet<&Rat> = indicators.iter().collect();
    if distinct.len() < 2 {
        return Err(ButterflyError::ConstantDihedral);
    }
    let vertices: Vec<VertexId> = p.vertices().iter().copied().collect();
    let mut non_congruent = false;
    'outer: for (i, u) in vertices.iter().enumerate() {
        for v in &vertices[i + 1..] {
            if p.has_edge(Edge::new(*u, *v)) {
                continue;
            }
            let d0 = samples[0].realization.squared_distance(*u, *v)?;
            for sample in &samples[1..] {
                if sample.realization.squared_distance(*u, *v)? != d0 {
                    non_congruent = true;
                    break 'outer;
                }
            }
        }
    }
    if !non_congruent {
        return Err(ButterflyError::CongruentSamples);
    }
    Ok(FlexReport {
        samples: samples.len(),
        distinct_indicators: distinct.len(),
        dihedral_indicators: indicators,
    })
}
