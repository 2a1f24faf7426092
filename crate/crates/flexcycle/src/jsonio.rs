//! JSON (and OFF) formats for every artifact the CLI reads or writes.
//! All numbers are exact strings ("p/q", "p/q+r/s*i", [coeff, core]
//! radical pairs) so every artifact round-trips bit-exactly; the OFF
//! export is the one deliberately lossy format.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::butterfly::{ButterflySpec, FlexReport, FlexSample};
use crate::exact::{
    radical_from_square, rat_from_str, rat_to_f64, rat_to_string, Radical, Rat, Scalar,
};
use crate::limit::{LimitConfiguration, SignedCycle};
use crate::mobius::ProjectivePoint;
use crate::polyhedron::{
    Edge, EdgeLengths, Point3, Polyhedron, PolyhedronError, Realization, SpineEdge, VertexId,
};
use crate::zero_sum::ObstructionReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
    #[error("invalid polyhedron: {0}")]
    Polyhedron(#[from] PolyhedronError),
}

fn bad(context: &str, message: impl Into<String>) -> FormatError {
    FormatError::Invalid { context: context.to_string(), message: message.into() }
}

pub fn parse_json(text: &str) -> Result<Value, FormatError> {
    serde_json::from_str(text).map_err(|e| bad("json", e.to_string()))
}

fn get<'a>(v: &'a Value, key: &str, context: &str) -> Result<&'a Value, FormatError> {
    v.get(key).ok_or_else(|| bad(context, format!("missing field \"{key}\"")))
}

fn as_array<'a>(v: &'a Value, context: &str) -> Result<&'a Vec<Value>, FormatError> {
    v.as_array().ok_or_else(|| bad(context, "expected an array"))
}

fn as_object<'a>(v: &'a Value, context: &str) -> Result<&'a Map<String, Value>, FormatError> {
    v.as_object().ok_or_else(|| bad(context, "expected an object"))
}

fn as_str<'a>(v: &'a Value, context: &str) -> Result<&'a str, FormatError> {
    v.as_str().ok_or_else(|| bad(context, "expected a string"))
}

fn vertex_id(v: &Value, context: &str) -> Result<VertexId, FormatError> {
    v.as_u64()
        .and_then(|n| VertexId::try_from(n).ok())
        .ok_or_else(|| bad(context, "expected a vertex id"))
}

fn vertex_key(key: &str, context: &str) -> Result<VertexId, FormatError> {
    key.parse().map_err(|_| bad(context, format!("bad vertex key \"{key}\"")))
}

fn rat_value(v: &Value, context: &str) -> Result<Rat, FormatError> {
    rat_from_str(as_str(v, context)?).map_err(|e| bad(context, e.to_string()))
}

fn sign_value(v: &Value, context: &str) -> Result<i8, FormatError> {
    match v.as_i64() {
        Some(1) => Ok(1),
        Some(-1) => Ok(-1),
        _ => Err(bad(context, "signs must be 1 or -1")),
    }
}

// ---- scalars, radicals, points ----

pub fn scalar_from_value(v: &Value, context: &str) -> Result<Scalar, FormatError> {
    Scalar::from_str_exact(as_str(v, context)?).map_err(|e| bad(context, e.to_string()))
}

/// `[["3/2","5"], ["-1","1"]]`: coefficient and squarefree core per term.
pub fn radical_to_value(r: &Radical) -> Value {
    Value::Array(
        r.terms()
            .map(|(core, coeff)| json!([rat_to_string(coeff), core.to_string()]))
            .collect(),
    )
}

pub fn radical_from_value(v: &Value, context: &str) -> Result<Radical, FormatError> {
    let mut out = Radical::zero();
    for pair in as_array(v, context)? {
        let pair = as_array(pair, context)?;
        if pair.len() != 2 {
            return Err(bad(context, "radical terms are [coeff, core] pairs"));
        }
        let coeff = rat_value(&pair[0], context)?;
        let core: BigUint = as_str(&pair[1], context)?
            .parse()
            .map_err(|_| bad(context, "bad radical core"))?;
        out = out + Radical::term(coeff, core);
    }
    Ok(out)
}

pub fn point_to_value(p: &ProjectivePoint) -> Value {
    Value::Array(p.coords().iter().map(|s| Value::String(s.to_string_exact())).collect())
}

pub fn point_from_value(v: &Value, context: &str) -> Result<ProjectivePoint, FormatError> {
    let arr = as_array(v, context)?;
    if arr.len() != 5 {
        return Err(bad(context, "projective points have 5 coordinates"));
    }
    let mut coords = [Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero(), Scalar::zero()];
    for (c, val) in coords.iter_mut().zip(arr) {
        *c = scalar_from_value(val, context)?;
    }
    ProjectivePoint::new(coords).map_err(|e| bad(context, e.to_string()))
}

// ---- polyhedra and realizations ----

pub fn polyhedron_to_value(p: &Polyhedron) -> Value {
    json!({
        "vertices": p.vertices().iter().copied().collect::<Vec<_>>(),
        "faces": p.faces().iter().map(|f| f.to_vec()).collect::<Vec<_>>(),
    })
}

pub fn polyhedron_from_value(v: &Value) -> Result<Polyhedron, FormatError> {
    let ctx = "polyhedron";
    let vertices = as_array(get(v, "vertices", ctx)?, ctx)?
        .iter()
        .map(|x| vertex_id(x, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let mut faces = Vec::new();
    for f in as_array(get(v, "faces", ctx)?, ctx)? {
        let f = as_array(f, ctx)?;
        if f.len() != 3 {
            return Err(bad(ctx, "faces must be triangles"));
        }
        faces.push([vertex_id(&f[0], ctx)?, vertex_id(&f[1], ctx)?, vertex_id(&f[2], ctx)?]);
    }
    Ok(Polyhedron::validate_complex(vertices, faces)?)
}

fn point3_to_value(p: &Point3) -> Value {
    Value::Array(p.iter().map(|c| Value::String(rat_to_string(c))).collect())
}

fn point3_from_value(v: &Value, context: &str) -> Result<Point3, FormatError> {
    let arr = as_array(v, context)?;
    if arr.len() != 3 {
        return Err(bad(context, "positions have 3 coordinates"));
    }
    Ok([
        rat_value(&arr[0], context)?,
        rat_value(&arr[1], context)?,
        rat_value(&arr[2], context)?,
    ])
}

pub fn realization_to_value(r: &Realization) -> Value {
    let positions: Map<String, Value> = r
        .positions
        .iter()
        .map(|(v, p)| (v.to_string(), point3_to_value(p)))
        .collect();
    json!({ "positions": positions })
}

pub fn realization_from_value(v: &Value) -> Result<Realization, FormatError> {
    let ctx = "realization";
    let mut positions = BTreeMap::new();
    for (key, val) in as_object(get(v, "positions", ctx)?, ctx)? {
        positions.insert(vertex_key(key, ctx)?, point3_from_value(val, ctx)?);
    }
    Ok(Realization { positions })
}

fn edge_key(e: &Edge) -> String {
    format!("{},{}", e.0, e.1)
}

fn edge_from_key(key: &str, context: &str) -> Result<Edge, FormatError> {
    let (a, b) = key
        .split_once(',')
        .ok_or_else(|| bad(context, format!("bad edge key \"{key}\"")))?;
    Ok(Edge::new(vertex_key(a, context)?, vertex_key(b, context)?))
}

pub fn edge_lengths_to_value(l: &EdgeLengths) -> Value {
    let squared: Map<String, Value> = l
        .squared
        .iter()
        .map(|(e, q)| (edge_key(e), Value::String(rat_to_string(q))))
        .collect();
    json!({ "squared": squared })
}

pub fn edge_lengths_from_value(v: &Value) -> Result<EdgeLengths, FormatError> {
    let ctx = "edge lengths";
    let mut squared = BTreeMap::new();
    for (key, val) in as_object(get(v, "squared", ctx)?, ctx)? {
        squared.insert(edge_from_key(key, ctx)?, rat_value(val, ctx)?);
    }
    EdgeLengths::from_squared(squared).map_err(|e| bad(ctx, e.to_string()))
}

// ---- limit configurations and certificates ----

pub fn spine_to_value(s: &SpineEdge) -> Value {
    json!({ "w1": s.w1, "w2": s.w2, "s": s.s, "n": s.n })
}

pub fn spine_from_value(v: &Value) -> Result<SpineEdge, FormatError> {
    let ctx = "spine";
    Ok(SpineEdge {
        w1: vertex_id(get(v, "w1", ctx)?, ctx)?,
        w2: vertex_id(get(v, "w2", ctx)?, ctx)?,
        s: vertex_id(get(v, "s", ctx)?, ctx)?,
        n: vertex_id(get(v, "n", ctx)?, ctx)?,
    })
}

pub fn limit_configuration_to_value(cfg: &LimitConfiguration) -> Value {
    let points: Map<String, Value> = cfg
        .points
        .iter()
        .map(|(v, p)| (v.to_string(), point_to_value(p)))
        .collect();
    json!({ "spine": spine_to_value(&cfg.spine), "points": points })
}

pub fn limit_configuration_from_value(v: &Value) -> Result<LimitConfiguration, FormatError> {
    let ctx = "limit configuration";
    let spine = spine_from_value(get(v, "spine", ctx)?)?;
    let mut points = BTreeMap::new();
    for (key, val) in as_object(get(v, "points", ctx)?, ctx)? {
        points.insert(vertex_key(key, ctx)?, point_from_value(val, ctx)?);
    }
    Ok(LimitConfiguration { points, spine })
}

pub fn signed_cycle_to_value(w: &SignedCycle) -> Value {
    let squares: Vec<Value> = w
        .lengths
        .iter()
        .map(|l| {
            let sq = l.square().as_rat().expect("edge lengths have rational squares");
            Value::String(rat_to_string(&sq))
        })
        .collect();
    json!({ "cycle": w.cycle, "signs": w.signs, "lengths_squared": squares })
}

pub fn signed_cycle_from_value(v: &Value) -> Result<SignedCycle, FormatError> {
    let ctx = "signed cycle";
    let cycle = as_array(get(v, "cycle", ctx)?, ctx)?
        .iter()
        .map(|x| vertex_id(x, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let signs = as_array(get(v, "signs", ctx)?, ctx)?
        .iter()
        .map(|x| sign_value(x, ctx))
        .collect::<Result<Vec<_>, _>>()?;
    let mut lengths = Vec::new();
    for val in as_array(get(v, "lengths_squared", ctx)?, ctx)? {
        let sq = rat_value(val, ctx)?;
        lengths.push(radical_from_square(&sq).map_err(|e| bad(ctx, e.to_string()))?);
    }
    if signs.len() != cycle.len() || lengths.len() != cycle.len() {
        return Err(bad(ctx, "cycle, signs, lengths_squared must have equal length"));
    }
    Ok(SignedCycle { cycle, signs, lengths })
}

pub fn obstruction_report_to_value(r: &ObstructionReport) -> Value {
    json!({
        "spine": spine_to_value(&r.spine),
        "witness": r.witness.as_ref().map(signed_cycle_to_value).unwrap_or(Value::Null),
        "cycles_examined": r.cycles_examined,
        "exhausted": r.exhausted,
    })
}

pub fn obstruction_report_from_value(v: &Value) -> Result<ObstructionReport, FormatError> {
    let ctx = "obstruction report";
    let witness = match get(v, "witness", ctx)? {
        Value::Null => None,
        w => Some(signed_cycle_from_value(w)?),
    };
    Ok(ObstructionReport {
        spine: spine_from_value(get(v, "spine", ctx)?)?,
        witness,
        cycles_examined: get(v, "cycles_examined", ctx)?
            .as_u64()
            .ok_or_else(|| bad(ctx, "cycles_examined must be an integer"))?
            as usize,
        exhausted: get(v, "exhausted", ctx)?
            .as_bool()
            .ok_or_else(|| bad(ctx, "exhausted must be a boolean"))?,
    })
}

pub fn scan_to_value(reports: &BTreeMap<Edge, ObstructionReport>) -> Value {
    let map: Map<String, Value> = reports
        .iter()
        .map(|(e, r)| (edge_key(e), obstruction_report_to_value(r)))
        .collect();
    Value::Object(map)
}

// ---- butterfly bundles ----

pub fn flex_sample_to_value(s: &FlexSample) -> Value {
    let parameters: Map<String, Value> = s
        .parameters
        .iter()
        .map(|(c, t)| (c.to_string(), Value::String(rat_to_string(t))))
        .collect();
    json!({ "parameters": parameters, "realization": realization_to_value(&s.realization) })
}

pub fn flex_sample_from_value(v: &Value) -> Result<FlexSample, FormatError> {
    let ctx = "flex sample";
    let mut parameters = BTreeMap::new();
    for (key, val) in as_object(get(v, "parameters", ctx)?, ctx)? {
        parameters.insert(vertex_key(key, ctx)?, rat_value(val, ctx)?);
    }
    Ok(FlexSample {
        parameters,
        realization: realization_from_value(get(v, "realization", ctx)?)?,
    })
}

pub fn flex_report_to_value(r: &FlexReport) -> Value {
    json!({
        "samples": r.samples,
        "dihedral_indicators": r
            .dihedral_indicators
            .iter()
            .map(|q| Value::String(rat_to_string(q)))
            .collect::<Vec<_>>(),
        "distinct_indicators": r.distinct_indicators,
    })
}

pub fn butterfly_spec_to_value(spec: &ButterflySpec) -> Value {
    let xs = spec.x_positions.as_ref().map(|xs| {
        let map: Map<String, Value> = xs
            .iter()
            .map(|(v, x)| (v.to_string(), Value::String(rat_to_string(x))))
            .collect();
        Value::Object(map)
    });
    json!({
        "cycle": spec.cycle,
        "signs": spec.signs,
        "seed": spec.seed,
        "x_positions": xs.unwrap_or(Value::Null),
    })
}

/// Everything `flex-verify` needs in one file: the polyhedron, the spine,
/// and the samples.
pub fn sample_file_to_value(
    p: &Polyhedron,
    spine: &SpineEdge,
    samples: &[FlexSample],
) -> Value {
    json!({
        "polyhedron": polyhedron_to_value(p),
        "spine": spine_to_value(spine),
        "samples": samples.iter().map(flex_sample_to_value).collect::<Vec<_>>(),
    })
}

pub fn sample_file_from_value(
    v: &Value,
) -> Result<(Polyhedron, SpineEdge, Vec<FlexSample>), FormatError> {
    let ctx = "sample file";
    let p = polyhedron_from_value(get(v, "polyhedron", ctx)?)?;
    let spine = spine_from_value(get(v, "spine", ctx)?)?;
    let samples = as_array(get(v, "samples", ctx)?, ctx)?
        .iter()
        .map(flex_sample_from_value)
        .collect::<Result<Vec<_>, _>>()?;
    Ok((p, spine, samples))
}

// ---- OFF export (lossy, for viewers) ----

fn off_coord(q: &Rat) -> String {
    format!("{:.16e}", rat_to_f64(q))
}

pub fn realization_to_off(p: &Polyhedron, r: &Realization) -> Result<String, FormatError> {
    let index: BTreeMap<VertexId, usize> =
        p.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut out = String::from("OFF\n");
    out.push_str(&format!("{} {} {}\n", p.vertices().len(), p.faces().len(), p.edge_count()));
    for &v in p.vertices() {
        let pos = r.position(v)?;
        out.push_str(&format!(
            "{} {} {}\n",
            off_coord(&pos[0]),
            off_coord(&pos[1]),
            off_coord(&pos[2])
        ));
    }
    for f in p.faces() {
        out.push_str(&format!("3 {} {} {}\n", index[&f[0]], index[&f[1]], index[&f[2]]));
    }
    Ok(out)
}

/// One OFF model per sample, concatenated with blank-line separators.
pub fn samples_to_off(p: &Polyhedron, samples: &[FlexSample]) -> Result<String, FormatError> {
    let frames = samples
        .iter()
        .map(|s| realization_to_off(p, &s.realization))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(frames.join("\n"))
}

pub fn to_pretty_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable value");
    s.push('\n');
    s
}
