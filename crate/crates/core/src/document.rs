//! JSON documents: frame inputs, vector and matrix inputs, and analysis reports.
//!
//! Floats are written with 17 significant digits so every value reads back to
//! the same double.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

use crate::catalog::{example_members, Example};
use crate::error::{FrameError, Result};
use crate::exec::Execution;
use crate::fusion::{
    build_fusion_frame, classify, max_robust_erasures_with, sampled_redundancy, AnalysisReport,
    CertifyingRule, ErasureSearch, FrameBounds, FusionFrame, RedundancyRange,
};
use crate::numerics::{CMatrix, CVector, Field, Tolerance};
use crate::systems::{build_system, FusionFrameSystem};

pub const SCHEMA_VERSION: &str = "ffk/1";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

// ---------------------------------------------------------------------------
// writing

/// Pretty JSON with exact floats. Arrays holding only numbers, or only arrays of
/// numbers, stay on one line so coordinate rows read naturally.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let value = serde_json::to_value(value).map_err(|e| FrameError::Io(e.to_string()))?;
    let mut out = String::new();
    write_value(&mut out, &value, 0);
    out.push('\n');
    Ok(out)
}

fn write_number(out: &mut String, n: &Number) {
    if n.is_f64() {
        let x = n.as_f64().expect("f64 number");
        write!(out, "{x:.16e}").expect("writing to a String");
    } else {
        write!(out, "{n}").expect("writing to a String");
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| match x {
            Value::Number(_) => true,
            Value::Array(inner) => inner.iter().all(Value::is_number),
            _ => false,
        }),
        _ => false,
    }
}

fn write_inline(out: &mut String, v: &Value) {
    match v {
        Value::Number(n) => write_number(out, n),
        Value::Array(items) => {
            out.push('[');
            for (i, x) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_inline(out, x);
            }
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn indent(out: &mut String, level: usize) {
    out.extend(std::iter::repeat_n("  ", level));
}

fn write_value(out: &mut String, v: &Value, level: usize) {
    match v {
        Value::Number(n) => write_number(out, n),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(_) if is_flat(v) => write_inline(out, v),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, x) in items.iter().enumerate() {
                indent(out, level + 1);
                write_value(out, x, level + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            indent(out, level);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, x)) in map.iter().enumerate() {
                indent(out, level + 1);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                write_value(out, x, level + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            indent(out, level);
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn float(x: f64) -> Value {
    Value::Number(Number::from_f64(x).expect("finite value"))
}

fn entry_value(z: Complex64, field: Field) -> Value {
    match field {
        Field::Real => float(z.re),
        Field::Complex => Value::Array(vec![float(z.re), float(z.im)]),
    }
}

fn row_value(v: &CVector, field: Field) -> Value {
    Value::Array(v.iter().map(|&z| entry_value(z, field)).collect())
}

fn rows_value(rows: &[CVector], field: Field) -> Value {
    Value::Array(rows.iter().map(|r| row_value(r, field)).collect())
}

// ---------------------------------------------------------------------------
// reading

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| FrameError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn schema(path: &str, message: impl Into<String>) -> FrameError {
    FrameError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn as_f64(v: &Value, path: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| schema(path, "expected a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(schema(path, "number is not finite"))
    }
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

/// An entry that is either a number or a `[re, im]` pair; `field` restricts
/// which form is accepted.
fn parse_entry(v: &Value, field: Option<Field>, path: &str) -> Result<Complex64> {
    match (v, field) {
        (Value::Number(_), Some(Field::Complex)) => {
            Err(schema(path, "complex entries are [re, im] pairs"))
        }
        (Value::Number(_), _) => Ok(Complex64::new(as_f64(v, path)?, 0.0)),
        (Value::Array(pair), Some(Field::Real)) if pair.len() == 2 => {
            Err(schema(path, "real entries are numbers"))
        }
        (Value::Array(pair), _) if pair.len() == 2 => Ok(Complex64::new(
            as_f64(&pair[0], &format!("{path}[0]"))?,
            as_f64(&pair[1], &format!("{path}[1]"))?,
        )),
        _ => Err(schema(path, "expected a number or a [re, im] pair")),
    }
}

fn parse_row(v: &Value, dimension: Option<usize>, field: Option<Field>, path: &str) -> Result<CVector> {
    let items = as_array(v, path)?;
    if let Some(n) = dimension {
        if items.len() != n {
            return Err(schema(
                path,
                format!("row has {} entries, dimension is {n}", items.len()),
            ));
        }
    }
    if items.is_empty() {
        return Err(schema(path, "empty row"));
    }
    let entries = items
        .iter()
        .enumerate()
        .map(|(i, x)| parse_entry(x, field, &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Ok(CVector::from_vec(entries))
}

fn parse_rows(v: &Value, dimension: usize, field: Field, path: &str) -> Result<Vec<CVector>> {
    let rows = as_array(v, path)?;
    if rows.is_empty() {
        return Err(schema(path, "expected at least one vector"));
    }
    rows.iter()
        .enumerate()
        .map(|(j, r)| parse_row(r, Some(dimension), Some(field), &format!("{path}[{j}]")))
        .collect()
}

/// Columns are the given rows.
fn span_of(rows: &[CVector], dimension: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dimension, rows.len());
    for (j, r) in rows.iter().enumerate() {
        m.set_column(j, r);
    }
    m
}

fn field_of_entries<'a>(entries: impl IntoIterator<Item = &'a Complex64>) -> Field {
    if entries.into_iter().any(|z| z.im != 0.0) {
        Field::Complex
    } else {
        Field::Real
    }
}

/// A vector file: a JSON array of entries.
pub fn parse_vector(text: &str) -> Result<CVector> {
    parse_row(&parse_json(text)?, None, None, "$")
}

/// A matrix file: a JSON array of rows.
pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let v = parse_json(text)?;
    let rows = as_array(&v, "$")?;
    if rows.is_empty() {
        return Err(FrameError::EmptyMatrix);
    }
    let first = parse_row(&rows[0], None, None, "$[0]")?;
    let cols = first.len();
    let mut m = CMatrix::zeros(rows.len(), cols);
    m.set_row(0, &first.transpose());
    for (i, r) in rows.iter().enumerate().skip(1) {
        let row = parse_row(r, Some(cols), None, &format!("$[{i}]"))?;
        m.set_row(i, &row.transpose());
    }
    Ok(m)
}

/// Field suggested by the entries of a parsed vector or matrix.
pub fn inferred_field(m: &CMatrix) -> Field {
    field_of_entries(m.iter())
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| FrameError::Io(format!("{}: {e}", path.display())))
}

pub fn load_vector(path: &Path) -> Result<CVector> {
    parse_vector(&read(path)?)
}

pub fn load_matrix(path: &Path) -> Result<CMatrix> {
    parse_matrix(&read(path)?)
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| FrameError::Io(format!("{}: {e}", path.display())))
}

// ---------------------------------------------------------------------------
// frame documents

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceEntry {
    pub weight: f64,
    /// Spanning vectors, one coordinate row each.
    pub vectors: Vec<CVector>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameDocument {
    pub field: Field,
    pub dimension: usize,
    pub subspaces: Vec<SubspaceEntry>,
    /// Local frame vectors per member, in member order.
    pub local_frames: Option<Vec<Vec<CVector>>>,
}

/// A loaded frame with its system when the document carries local frames.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedFrame {
    pub frame: FusionFrame,
    pub system: Option<FusionFrameSystem>,
}

const FRAME_KEYS: [&str; 5] = ["schema_version", "field", "dimension", "subspaces", "local_frames"];

impl FrameDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let v = parse_json(text)?;
        let obj = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
        if let Some(key) = obj.keys().find(|k| !FRAME_KEYS.contains(&k.as_str())) {
            return Err(schema(&format!("$.{key}"), "unknown field"));
        }
        check_schema_version(obj)?;
        let field = match obj.get("field").and_then(Value::as_str) {
            Some("real") => Field::Real,
            Some("complex") => Field::Complex,
            _ => return Err(schema("$.field", "expected \"real\" or \"complex\"")),
        };
        let dimension = obj
            .get("dimension")
            .and_then(Value::as_u64)
            .filter(|&n| n >= 1)
            .ok_or_else(|| schema("$.dimension", "expected a positive integer"))?
            as usize;
        let subspaces = as_array(
            obj.get("subspaces").ok_or_else(|| schema("$.subspaces", "missing"))?,
            "$.subspaces",
        )?;
        if subspaces.is_empty() {
            return Err(schema("$.subspaces", "expected at least one subspace"));
        }
        let subspaces = subspaces
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let path = format!("$.subspaces[{i}]");
                let s = s.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
                if let Some(key) = s.keys().find(|k| *k != "weight" && *k != "vectors") {
                    return Err(schema(&format!("{path}.{key}"), "unknown field"));
                }
                let weight = as_f64(
                    s.get("weight").ok_or_else(|| schema(&format!("{path}.weight"), "missing"))?,
                    &format!("{path}.weight"),
                )?;
                let vectors = parse_rows(
                    s.get("vectors").ok_or_else(|| schema(&format!("{path}.vectors"), "missing"))?,
                    dimension,
                    field,
                    &format!("{path}.vectors"),
                )?;
                Ok(SubspaceEntry { weight, vectors })
            })
            .collect::<Result<Vec<_>>>()?;
        let local_frames = match obj.get("local_frames") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                as_array(v, "$.local_frames")?
                    .iter()
                    .enumerate()
                    .map(|(i, l)| parse_rows(l, dimension, field, &format!("$.local_frames[{i}]")))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(FrameDocument {
            field,
            dimension,
            subspaces,
            local_frames,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("schema_version".into(), SCHEMA_VERSION.into());
        obj.insert("field".into(), self.field.as_str().into());
        obj.insert("dimension".into(), self.dimension.into());
        let subspaces = self
            .subspaces
            .iter()
            .map(|s| {
                let mut m = Map::new();
                m.insert("weight".into(), float(s.weight));
                m.insert("vectors".into(), rows_value(&s.vectors, self.field));
                Value::Object(m)
            })
            .collect();
        obj.insert("subspaces".into(), Value::Array(subspaces));
        if let Some(locals) = &self.local_frames {
            let locals = locals.iter().map(|l| rows_value(l, self.field)).collect();
            obj.insert("local_frames".into(), Value::Array(locals));
        }
        Value::Object(obj)
    }

    pub fn to_json(&self) -> String {
        to_json_string(&self.to_value()).expect("documents serialize")
    }

    /// Document listing each member's orthonormal basis.
    pub fn from_frame(frame: &FusionFrame) -> Self {
        FrameDocument {
            field: frame.field(),
            dimension: frame.ambient_dim(),
            subspaces: frame
                .members()
                .iter()
                .map(|m| SubspaceEntry {
                    weight: m.weight,
                    vectors: m.subspace.basis().column_iter().map(|c| c.into_owned()).collect(),
                })
                .collect(),
            local_frames: None,
        }
    }

    pub fn from_system(system: &FusionFrameSystem) -> Self {
        let mut doc = FrameDocument::from_frame(system.frame());
        doc.local_frames = Some(
            system
                .local_frames()
                .iter()
                .map(|l| l.vectors().column_iter().map(|c| c.into_owned()).collect())
                .collect(),
        );
        doc
    }

    pub fn to_frame(&self, tol: Tolerance) -> Result<FusionFrame> {
        let spans: Vec<(CMatrix, f64)> = self
            .subspaces
            .iter()
            .map(|s| (span_of(&s.vectors, self.dimension), s.weight))
            .collect();
        build_fusion_frame(&spans, self.dimension, self.field, tol)
    }

    pub fn load(&self, tol: Tolerance) -> Result<LoadedFrame> {
        let frame = self.to_frame(tol)?;
        let system = match &self.local_frames {
            None => None,
            Some(locals) => {
                let locals: Vec<CMatrix> = locals.iter().map(|l| span_of(l, self.dimension)).collect();
                Some(build_system(&frame, &locals)?)
            }
        };
        Ok(LoadedFrame { frame, system })
    }
}

fn check_schema_version(obj: &Map<String, Value>) -> Result<()> {
    match obj.get("schema_version") {
        Some(Value::String(s)) if s == SCHEMA_VERSION => Ok(()),
        Some(Value::String(s)) => Err(FrameError::SchemaVersionUnsupported(s.clone())),
        _ => Err(schema("$.schema_version", "expected a version string")),
    }
}

pub fn load_frame(path: &Path, tol: Tolerance) -> Result<LoadedFrame> {
    FrameDocument::parse(&read(path)?)?.load(tol)
}

/// Catalog family as a document, with its coordinate vectors as local frames.
pub fn emit_example(example: Example, n: usize) -> Result<FrameDocument> {
    let field = example.field();
    let subspaces: Vec<SubspaceEntry> = example_members(example, n)?
        .into_iter()
        .map(|m| SubspaceEntry {
            weight: m.weight,
            vectors: m
                .coordinates
                .iter()
                .map(|&k| {
                    let mut e = CVector::zeros(n);
                    e[k] = Complex64::new(1.0, 0.0);
                    e
                })
                .collect(),
        })
        .collect();
    let local_frames = Some(subspaces.iter().map(|s| s.vectors.clone()).collect());
    Ok(FrameDocument {
        field,
        dimension: n,
        subspaces,
        local_frames,
    })
}

/// Looks an example up by name (`"7.1"`, `"7.1-V"`, `"7.2"`, `"7.3"`).
pub fn emit_example_named(name: &str, n: Option<usize>) -> Result<FrameDocument> {
    let example: Example = name.parse()?;
    emit_example(example, n.unwrap_or(example.default_dim()))
}

// ---------------------------------------------------------------------------
// reports

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFlags {
    pub tight: bool,
    pub parseval: bool,
    pub uniform_weights: bool,
    pub orthonormal_fusion_basis: bool,
    pub minimal: bool,
    pub uniform_redundancy: bool,
    pub bessel_only: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErasureSummary {
    pub certified: usize,
    pub rule: CertifyingRule,
    /// `"exhaustive"` or `"greedy"`.
    pub mode: String,
    pub budget: usize,
    pub weight_bound_certified: usize,
    pub breaking_set: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampledSummary {
    pub samples: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub tool_version: String,
    pub seed: u64,
    pub tolerances: Tolerance,
    pub field: Field,
    pub dimension: usize,
    pub members: usize,
    pub bounds: Option<FrameBounds>,
    pub bessel_bound: f64,
    pub redundancy_range: RedundancyRange,
    pub flags: ReportFlags,
    pub excess: usize,
    /// Absent for Bessel-only families.
    pub erasure: Option<ErasureSummary>,
    pub sampled_redundancy: Option<SampledSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub seed: u64,
    /// Haar samples for the sampled redundancy cross-check; 0 skips it.
    pub samples: usize,
    /// Defaults to `N − 1`.
    pub erasure_budget: Option<usize>,
    pub erasure_search: ErasureSearch,
    pub exec: Execution,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            seed: 0,
            samples: 4096,
            erasure_budget: None,
            erasure_search: ErasureSearch::Auto,
            exec: Execution::default(),
        }
    }
}

impl ReportDocument {
    pub fn new(frame: &FusionFrame, options: &ReportOptions) -> Result<Self> {
        let a = classify(frame)?;
        let erasure = if a.bessel_only {
            None
        } else {
            let budget = options.erasure_budget.unwrap_or(frame.len() - 1);
            let c = max_robust_erasures_with(frame, budget, options.erasure_search, options.exec)?;
            Some(ErasureSummary {
                certified: c.certified,
                rule: c.rule,
                mode: if c.exhaustive { "exhaustive" } else { "greedy" }.into(),
                budget: c.budget,
                weight_bound_certified: c.weight_bound_certified,
                breaking_set: c.breaking_set,
            })
        };
        let sampled_redundancy = (options.samples > 0).then(|| {
            let r = sampled_redundancy(frame, options.samples, options.seed, options.exec);
            SampledSummary {
                samples: r.samples,
                min: r.min,
                max: r.max,
            }
        });
        Ok(ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: TOOL_VERSION.into(),
            seed: options.seed,
            tolerances: *frame.tolerance(),
            field: frame.field(),
            dimension: frame.ambient_dim(),
            members: frame.len(),
            bounds: a.bounds,
            bessel_bound: a.bessel_bound,
            redundancy_range: a.redundancy,
            flags: ReportFlags {
                tight: a.tight,
                parseval: a.parseval,
                uniform_weights: a.uniform_weights,
                orthonormal_fusion_basis: a.orthonormal_fusion_basis,
                minimal: a.minimal,
                uniform_redundancy: a.uniform_redundancy,
                bessel_only: a.bessel_only,
            },
            excess: a.excess,
            erasure,
            sampled_redundancy,
        })
    }

    /// The analysis this report was made from.
    pub fn analysis(&self) -> AnalysisReport {
        AnalysisReport {
            bounds: self.bounds,
            bessel_bound: self.bessel_bound,
            redundancy: self.redundancy_range,
            tight: self.flags.tight,
            parseval: self.flags.parseval,
            uniform_weights: self.flags.uniform_weights,
            orthonormal_fusion_basis: self.flags.orthonormal_fusion_basis,
            minimal: self.flags.minimal,
            excess: self.excess,
            uniform_redundancy: self.flags.uniform_redundancy,
            bessel_only: self.flags.bessel_only,
        }
    }

    pub fn to_json(&self) -> String {
        to_json_string(self).expect("reports serialize")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let v = parse_json(text)?;
        let obj = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
        check_schema_version(obj)?;
        serde_json::from_value(v).map_err(|e| schema("$", e.to_string()))
    }
}
