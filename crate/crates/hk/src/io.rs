//! JSON encodings of the core types.
//!
//! Rationals are `"p/q"` strings (or bare integers on input). A leading
//! minus may be ASCII `-` or U+2212; output always uses ASCII. Scalars list
//! their nonzero coefficients keyed by the radicands of each monomial, in
//! bitmask order, so encoding is canonical and decoding is exact.

use std::str::FromStr;
use std::sync::Arc;

use hk_core::ghk::HKLine;
use hk_core::ortho::Isometry;
use hk_core::period::{validate_line, LineRep, PeriodPoint};
use hk_core::subtwistor::{AuxMetric, DtwResult, SubtwistorChain};
use hk_core::{AlgebraicScalar, AlgebraicVector, FieldSpec, QuadLattice};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use crate::catalog;

/// Failures while decoding input documents.
#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{0}")]
    Shape(String),
    #[error("bad number `{0}`")]
    Number(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] hk_core::Error),
}

pub type FormatResult<T> = Result<T, FormatError>;

fn shape<T>(msg: impl Into<String>) -> FormatResult<T> {
    Err(FormatError::Shape(msg.into()))
}

fn field<'a>(v: &'a Value, key: &str) -> FormatResult<&'a Value> {
    v.get(key).ok_or_else(|| FormatError::Shape(format!("missing field `{key}`")))
}

fn array<'a>(v: &'a Value, what: &str) -> FormatResult<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| FormatError::Shape(format!("{what} must be an array")))
}

// ---- numbers ----

pub fn rational_to_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> FormatResult<BigRational> {
    let t = s.trim().replace('\u{2212}', "-");
    let bad = || FormatError::Number(s.to_string());
    match t.split_once('/') {
        None => BigInt::from_str(&t).map(BigRational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
    }
}

fn rational_from_json(v: &Value) -> FormatResult<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string()),
        other => Err(FormatError::Number(other.to_string())),
    }
}

pub fn bigint_from_json(v: &Value) -> FormatResult<BigInt> {
    let q = rational_from_json(v)?;
    if !q.is_integer() {
        return Err(FormatError::Number(v.to_string()));
    }
    Ok(q.to_integer())
}

pub fn int_vector_from_json(v: &Value) -> FormatResult<Vec<BigInt>> {
    array(v, "integer vector")?.iter().map(bigint_from_json).collect()
}

pub fn int_matrix_from_json(v: &Value) -> FormatResult<Vec<Vec<BigInt>>> {
    array(v, "matrix")?.iter().map(int_vector_from_json).collect()
}

pub fn int_vector_to_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(bigint_to_json).collect())
}

fn bigint_to_json(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(small) => json!(small),
        Err(_) => Value::String(x.to_string()),
    }
}

// ---- scalars and vectors ----

fn mask_key(field: &FieldSpec, mask: usize) -> String {
    let parts: Vec<String> = field
        .radicands()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.to_string())
        .collect();
    parts.join(",")
}

pub fn scalar_to_json(x: &AlgebraicScalar) -> Value {
    let mut coeffs = Map::new();
    for (mask, q) in x.coeffs() {
        coeffs.insert(mask_key(x.field(), mask), Value::String(rational_to_string(&q)));
    }
    json!({ "radicands": x.field().radicands(), "coeffs": coeffs })
}

pub fn scalar_from_json(v: &Value) -> FormatResult<AlgebraicScalar> {
    match v {
        Value::Object(_) => {}
        _ => return Ok(AlgebraicScalar::from_rational(&rational_from_json(v)?)),
    }
    let radicands: Vec<u64> = array(field(v, "radicands")?, "radicands")?
        .iter()
        .map(|r| r.as_u64().ok_or_else(|| FormatError::Number(r.to_string())))
        .collect::<FormatResult<_>>()?;
    let spec = FieldSpec::new(radicands)?;
    let coeffs = field(v, "coeffs")?.as_object().ok_or_else(|| FormatError::Shape("coeffs must be an object".into()))?;
    let mut terms = Vec::with_capacity(coeffs.len());
    for (key, value) in coeffs {
        let mut mask = 0usize;
        for part in key.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let p: u64 = part.parse().map_err(|_| FormatError::Shape(format!("bad monomial key `{key}`")))?;
            let i = spec
                .radicands()
                .iter()
                .position(|&r| r == p)
                .ok_or_else(|| FormatError::Shape(format!("radicand {p} not in field")))?;
            if mask >> i & 1 == 1 {
                return shape(format!("repeated radicand in key `{key}`"));
            }
            mask |= 1 << i;
        }
        terms.push((mask, rational_from_json(value)?));
    }
    Ok(AlgebraicScalar::from_coeffs(&spec, &terms))
}

/// Rational entries are written as strings, irrational ones as scalar
/// objects over the vector's field.
pub fn vector_to_json(v: &AlgebraicVector) -> Value {
    Value::Array(
        v.entries()
            .iter()
            .map(|x| match x.to_rational() {
                Some(q) => Value::String(rational_to_string(&q)),
                None => scalar_to_json(x),
            })
            .collect(),
    )
}

pub fn vector_from_json(v: &Value) -> FormatResult<AlgebraicVector> {
    let entries = array(v, "vector")?.iter().map(scalar_from_json).collect::<FormatResult<Vec<_>>>()?;
    Ok(AlgebraicVector::new(entries))
}

fn vector_checked(v: &Value, l: &QuadLattice) -> FormatResult<AlgebraicVector> {
    let x = vector_from_json(v)?;
    if x.len() != l.rank() {
        return Err(hk_core::Error::DimensionMismatch { expected: l.rank(), found: x.len() }.into());
    }
    Ok(x)
}

// ---- lattices ----

pub fn lattice_to_json(l: &QuadLattice) -> Value {
    json!({ "name": l.name(), "gram": l.gram() })
}

pub fn lattice_from_json(v: &Value) -> FormatResult<QuadLattice> {
    if let Some(key) = v.as_str() {
        return Ok(catalog::lookup_ref(key)?);
    }
    let name = v.get("name").and_then(Value::as_str).map(str::to_string);
    let gram = array(field(v, "gram")?, "gram")?
        .iter()
        .map(|row| {
            array(row, "gram row")?
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| FormatError::Number(x.to_string())))
                .collect::<FormatResult<Vec<i64>>>()
        })
        .collect::<FormatResult<Vec<_>>>()?;
    Ok(QuadLattice::new(name, gram)?)
}

fn lattice_label(l: &QuadLattice) -> Value {
    match l.name() {
        Some(n) => Value::String(n.to_string()),
        None => json!({ "gram": l.gram() }),
    }
}

/// The lattice named inside a document, unless the caller supplies one.
fn resolve_lattice(v: &Value, given: Option<&Arc<QuadLattice>>) -> FormatResult<Arc<QuadLattice>> {
    match given {
        Some(l) => Ok(l.clone()),
        None => Ok(Arc::new(lattice_from_json(field(v, "lattice")?)?)),
    }
}

// ---- period points, lines, chains ----

pub fn period_to_json(p: &PeriodPoint) -> Value {
    json!({
        "lattice": lattice_label(p.lattice()),
        "span": [vector_to_json(&p.span()[0]), vector_to_json(&p.span()[1])],
    })
}

fn pair<'a>(v: &'a Value, what: &str) -> FormatResult<[&'a Value; 2]> {
    match array(v, what)?.as_slice() {
        [a, b] => Ok([a, b]),
        _ => shape(format!("{what} must have two entries")),
    }
}

pub fn period_from_json(v: &Value, given: Option<&Arc<QuadLattice>>) -> FormatResult<PeriodPoint> {
    let l = resolve_lattice(v, given)?;
    let [a, b] = pair(field(v, "span")?, "span")?;
    Ok(PeriodPoint::new(&l, vector_checked(a, &l)?, vector_checked(b, &l)?)?)
}

pub fn line_rep_from_json(v: &Value, given: Option<&Arc<QuadLattice>>) -> FormatResult<LineRep> {
    let l = resolve_lattice(v, given)?;
    let re = vector_checked(field(v, "re")?, &l)?;
    let im = vector_checked(field(v, "im")?, &l)?;
    Ok(validate_line(&l, re, im)?)
}

pub fn line_rep_to_json(r: &LineRep) -> Value {
    json!({ "lattice": lattice_label(r.lattice()), "re": vector_to_json(r.re()), "im": vector_to_json(r.im()) })
}

pub fn hkline_to_json(w: &HKLine) -> Value {
    json!({ "span": w.span().iter().map(vector_to_json).collect::<Vec<_>>() })
}

pub fn hkline_from_json(v: &Value, l: &Arc<QuadLattice>) -> FormatResult<HKLine> {
    let span = array(field(v, "span")?, "span")?;
    let [a, b, c] = span.as_slice() else { return shape("HK line span must have three vectors") };
    Ok(HKLine::new(l, [vector_checked(a, l)?, vector_checked(b, l)?, vector_checked(c, l)?])?)
}

fn certificate(i: usize, w: &HKLine) -> Value {
    use hk_core::ghk::Genericity;
    match w.genericity() {
        Genericity::Generic => json!({ "line": i, "generic": true, "rational_kernel": [] }),
        Genericity::NotGeneric(k) => json!({
            "line": i,
            "generic": false,
            "rational_kernel": k.iter().map(|r| r.iter().map(rational_to_string).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
    }
}

pub fn chain_to_json(c: &SubtwistorChain) -> Value {
    json!({
        "lines": c.lines().iter().map(hkline_to_json).collect::<Vec<_>>(),
        "junctions": c.junctions().iter().map(period_to_json).collect::<Vec<_>>(),
        "endpoints": c.endpoints().iter().map(period_to_json).collect::<Vec<_>>(),
        "generic_certificates": c.lines().iter().enumerate().map(|(i, w)| certificate(i, w)).collect::<Vec<_>>(),
    })
}

/// Decodes a chain without validating it; certificates are recomputed, not
/// trusted.
pub fn chain_from_json(v: &Value, given: Option<&Arc<QuadLattice>>) -> FormatResult<SubtwistorChain> {
    let [x, y] = pair(field(v, "endpoints")?, "endpoints")?;
    let vx = period_from_json(x, given)?;
    let l = vx.lattice().clone();
    let vy = period_from_json(y, Some(&l))?;
    let lines = array(field(v, "lines")?, "lines")?.iter().map(|w| hkline_from_json(w, &l)).collect::<FormatResult<_>>()?;
    let junctions = array(field(v, "junctions")?, "junctions")?
        .iter()
        .map(|p| period_from_json(p, Some(&l)))
        .collect::<FormatResult<_>>()?;
    Ok(SubtwistorChain::new(lines, junctions, [vx, vy]))
}

pub fn dtw_to_json(r: &DtwResult) -> Value {
    json!({ "upper": r.upper, "lower": r.lower, "chain": chain_to_json(&r.chain) })
}

// ---- isometries and metrics ----

pub fn isometry_to_json(a: &Isometry) -> Value {
    json!({
        "lattice": lattice_label(a.lattice()),
        "matrix": a.matrix().iter().map(|r| int_vector_to_json(r)).collect::<Vec<_>>(),
    })
}

pub fn isometry_from_json(v: &Value, given: Option<&Arc<QuadLattice>>) -> FormatResult<Isometry> {
    let l = resolve_lattice(v, given)?;
    Ok(Isometry::new(&l, int_matrix_from_json(field(v, "matrix")?)?)?)
}

pub fn metric_to_json(g: &AuxMetric) -> Value {
    json!({ "gram": g.gram() })
}

pub fn metric_from_json(v: &Value) -> FormatResult<AuxMetric> {
    let gram = array(field(v, "gram")?, "gram")?
        .iter()
        .map(|row| {
            array(row, "gram row")?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| FormatError::Number(x.to_string())))
                .collect::<FormatResult<Vec<f64>>>()
        })
        .collect::<FormatResult<Vec<_>>>()?;
    Ok(AuxMetric::new(gram)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip_is_bit_exact() {
        let text = r#"{"radicands":[2,3],"coeffs":{"":"1/2","2":"−3/4","2,3":"1"}}"#;
        let x = scalar_from_json(&serde_json::from_str(text).unwrap()).unwrap();
        let out = serde_json::to_string(&scalar_to_json(&x)).unwrap();
        assert_eq!(out, r#"{"radicands":[2,3],"coeffs":{"":"1/2","2":"-3/4","2,3":"1"}}"#);
        let y = scalar_from_json(&serde_json::from_str(&out).unwrap()).unwrap();
        assert_eq!(x, y);
        assert_eq!(serde_json::to_string(&scalar_to_json(&y)).unwrap(), out);
    }

    #[test]
    fn keys_follow_bitmask_order() {
        let x = scalar_from_json(&json!({"radicands":[2,3],"coeffs":{"2,3":"1","3":"2","":"5"}})).unwrap();
        let out = serde_json::to_string(&scalar_to_json(&x)).unwrap();
        assert_eq!(out, r#"{"radicands":[2,3],"coeffs":{"":"5","3":"2","2,3":"1"}}"#);
    }

    #[test]
    fn rejects_foreign_radicands() {
        assert!(scalar_from_json(&json!({"radicands":[2],"coeffs":{"3":"1"}})).is_err());
        assert!(scalar_from_json(&json!({"radicands":[4],"coeffs":{}})).is_err());
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn vector_and_period_round_trip() {
        let l = Arc::new(QuadLattice::diagonal(Some("d4".into()), &[1, 1, 1, -1]).unwrap());
        let v = json!([0, "1/2", {"radicands":[2],"coeffs":{"2":"1"}}, "\u{2212}1"]);
        let x = vector_from_json(&v).unwrap();
        let again = vector_from_json(&vector_to_json(&x)).unwrap();
        assert_eq!(x, again);
        let p = period_from_json(&json!({"span": [[1, 0, 0, 0], [0, 1, 0, 0]]}), Some(&l)).unwrap();
        let back = period_from_json(&period_to_json(&p), Some(&l)).unwrap();
        assert_eq!(p.span(), back.span());
    }
}
