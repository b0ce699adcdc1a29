//! JSON wire formats. Scalars travel as canonical fraction strings and
//! output objects use serde_json's sorted key order, so identical inputs
//! produce byte-identical outputs.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::linprog::{LpInstance, LpOutcome, Sense};
use crate::matrix::Matrix;
use crate::polyhedron::{AffineMap, Ball, Polyhedron};
use crate::scalar::{ExtValuation, FieldDescriptor, ValuedScalar};
use crate::spectra::{Pencil, SdRepresentation};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| parse_err(format!("missing key \"{key}\"")))
}

fn as_obj(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err("expected a JSON object"))
}

fn as_usize(v: &Value) -> Result<usize> {
    v.as_u64()
        .map(|u| u as usize)
        .ok_or_else(|| parse_err("expected a nonnegative integer"))
}

pub fn descriptor_to_json(d: &FieldDescriptor) -> Value {
    match d.kind() {
        crate::scalar::FieldKind::PAdic(p) => json!({"kind": "p-adic", "p": p}),
        crate::scalar::FieldKind::Laurent(var) => {
            json!({"kind": "laurent", "var": var.as_ref()})
        }
    }
}

pub fn descriptor_from_json(v: &Value) -> Result<FieldDescriptor> {
    let obj = as_obj(v)?;
    match get(obj, "kind")?.as_str() {
        Some("p-adic") => {
            let p = get(obj, "p")?
                .as_u64()
                .ok_or_else(|| parse_err("\"p\" must be a positive integer"))?;
            FieldDescriptor::p_adic(p)
        }
        Some("laurent") => {
            let var = get(obj, "var")?
                .as_str()
                .ok_or_else(|| parse_err("\"var\" must be a string"))?;
            FieldDescriptor::laurent(var)
        }
        _ => Err(parse_err("\"kind\" must be \"p-adic\" or \"laurent\"")),
    }
}

pub fn scalar_to_json(s: &ValuedScalar) -> Value {
    Value::String(s.render())
}

pub fn scalar_from_json(d: &FieldDescriptor, v: &Value) -> Result<ValuedScalar> {
    let s = v.as_str().ok_or_else(|| parse_err("scalar must be a string"))?;
    ValuedScalar::parse(d, s)
}

pub fn vector_to_json(xs: &[ValuedScalar]) -> Value {
    Value::Array(xs.iter().map(scalar_to_json).collect())
}

pub fn vector_from_json(d: &FieldDescriptor, v: &Value) -> Result<Vec<ValuedScalar>> {
    let arr = v.as_array().ok_or_else(|| parse_err("expected an array"))?;
    arr.iter().map(|x| scalar_from_json(d, x)).collect()
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| {
            Value::Array(
                (0..m.cols())
                    .map(|j| scalar_to_json(m.get(i, j)))
                    .collect(),
            )
        })
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

pub fn matrix_from_json(d: &FieldDescriptor, v: &Value) -> Result<Matrix> {
    let obj = as_obj(v)?;
    let rows = as_usize(get(obj, "rows")?)?;
    let cols = as_usize(get(obj, "cols")?)?;
    let entries = get(obj, "entries")?
        .as_array()
        .ok_or_else(|| parse_err("\"entries\" must be an array of rows"))?;
    if entries.len() != rows {
        return Err(parse_err("row count does not match \"rows\""));
    }
    let mut grid = Vec::with_capacity(rows);
    for row in entries {
        let row = vector_from_json(d, row)?;
        if row.len() != cols {
            return Err(parse_err("row length does not match \"cols\""));
        }
        grid.push(row);
    }
    if rows == 0 {
        return Ok(Matrix::zeros(d, 0, cols));
    }
    Matrix::from_rows(d, grid)
}

pub fn ext_valuation_to_json(v: ExtValuation) -> Value {
    match v {
        ExtValuation::Finite(k) => Value::from(k),
        ExtValuation::Infinity => Value::String("inf".into()),
    }
}

pub fn polyhedron_to_json(p: &Polyhedron) -> Value {
    let (a, v) = p.inequality_block();
    let (b, w) = p.equality_block();
    json!({
        "n": p.ambient_dim(),
        "A": matrix_to_json(a),
        "v": vector_to_json(v),
        "B": matrix_to_json(b),
        "w": vector_to_json(w),
    })
}

pub fn polyhedron_from_json(d: &FieldDescriptor, v: &Value) -> Result<Polyhedron> {
    let obj = as_obj(v)?;
    let n = as_usize(get(obj, "n")?)?;
    let a = matrix_from_json(d, get(obj, "A")?)?;
    let vv = vector_from_json(d, get(obj, "v")?)?;
    let (b, w) = match (obj.get("B"), obj.get("w")) {
        (Some(bj), Some(wj)) => (matrix_from_json(d, bj)?, vector_from_json(d, wj)?),
        _ => (Matrix::zeros(d, 0, n), vec![]),
    };
    Polyhedron::new(n, a, vv, b, w)
}

pub fn affine_map_to_json(f: &AffineMap) -> Value {
    json!({"F": matrix_to_json(&f.f), "g": vector_to_json(&f.g)})
}

pub fn affine_map_from_json(d: &FieldDescriptor, v: &Value) -> Result<AffineMap> {
    let obj = as_obj(v)?;
    let f = matrix_from_json(d, get(obj, "F")?)?;
    let g = vector_from_json(d, get(obj, "g")?)?;
    AffineMap::new(f, g)
}

pub fn lp_instance_to_json(lp: &LpInstance) -> Value {
    json!({
        "field": descriptor_to_json(lp.descriptor()),
        "A": matrix_to_json(&lp.a),
        "b": vector_to_json(&lp.b),
        "c": vector_to_json(&lp.c),
        "D": matrix_to_json(&lp.d_eq),
        "e": vector_to_json(&lp.e),
        "sense": if lp.sense == Sense::Min { "min" } else { "max" },
    })
}

pub fn lp_instance_from_json(v: &Value, field_override: Option<&FieldDescriptor>) -> Result<LpInstance> {
    let obj = as_obj(v)?;
    let d = match field_override {
        Some(d) => d.clone(),
        None => descriptor_from_json(get(obj, "field")?)?,
    };
    let a = matrix_from_json(&d, get(obj, "A")?)?;
    let b = vector_from_json(&d, get(obj, "b")?)?;
    let c = vector_from_json(&d, get(obj, "c")?)?;
    let n = c.len();
    let (deq, e) = match (obj.get("D"), obj.get("e")) {
        (Some(dj), Some(ej)) => (matrix_from_json(&d, dj)?, vector_from_json(&d, ej)?),
        _ => (Matrix::zeros(&d, 0, n), vec![]),
    };
    let sense = match obj.get("sense").and_then(|s| s.as_str()) {
        None | Some("min") => Sense::Min,
        Some("max") => Sense::Max,
        Some(other) => return Err(parse_err(format!("unknown sense \"{other}\""))),
    };
    LpInstance::new(a, b, c, deq, e, sense)
}

pub fn lp_outcome_to_json(outcome: &LpOutcome) -> Value {
    match outcome {
        LpOutcome::Infeasible => json!({"type": "INFEAS"}),
        LpOutcome::Unbounded => json!({"type": "UNBOUND"}),
        LpOutcome::Feasible { point, value } => json!({
            "type": "FEAS",
            "x": vector_to_json(point),
            "value": ext_valuation_to_json(*value),
        }),
    }
}

pub fn ball_to_json(ball: &Ball) -> Value {
    match ball {
        Ball::Empty => json!({"type": "EMPTY"}),
        Ball::All => json!({"type": "ALL"}),
        Ball::Ball {
            center,
            radius_valuation,
        } => json!({
            "type": "BALL",
            "center": scalar_to_json(center),
            "radius": ext_valuation_to_json(*radius_valuation),
        }),
    }
}

pub fn pencil_to_json(p: &Pencil) -> Value {
    json!({
        "d": p.degree(),
        "n": p.ambient_dim(),
        "A": p.matrices().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

pub fn pencil_from_json(d: &FieldDescriptor, v: &Value) -> Result<Pencil> {
    let obj = as_obj(v)?;
    let mats = get(obj, "A")?
        .as_array()
        .ok_or_else(|| parse_err("\"A\" must be an array of matrices"))?
        .iter()
        .map(|m| matrix_from_json(d, m))
        .collect::<Result<Vec<_>>>()?;
    let pencil = Pencil::new(mats)?;
    if let Some(deg) = obj.get("d") {
        if as_usize(deg)? != pencil.degree() {
            return Err(parse_err("\"d\" does not match the matrix size"));
        }
    }
    if let Some(n) = obj.get("n") {
        if as_usize(n)? != pencil.ambient_dim() {
            return Err(parse_err("\"n\" does not match the matrix count"));
        }
    }
    Ok(pencil)
}

pub fn sdr_to_json(sdr: &SdRepresentation) -> Value {
    let mut v = pencil_to_json(&sdr.pencil);
    let obj = v.as_object_mut().expect("pencil serializes to an object");
    obj.insert("height".into(), Value::from(sdr.height));
    obj.insert("n".into(), Value::from(sdr.ambient));
    v
}

pub fn sdr_from_json(d: &FieldDescriptor, v: &Value) -> Result<SdRepresentation> {
    let obj = as_obj(v)?;
    let height = as_usize(get(obj, "height")?)?;
    let mats = get(obj, "A")?
        .as_array()
        .ok_or_else(|| parse_err("\"A\" must be an array of matrices"))?
        .iter()
        .map(|m| matrix_from_json(d, m))
        .collect::<Result<Vec<_>>>()?;
    let pencil = Pencil::new(mats)?;
    let total = pencil.ambient_dim();
    if height > total {
        return Err(parse_err("height exceeds the pencil variable count"));
    }
    SdRepresentation::new(pencil, total - height, height)
}
