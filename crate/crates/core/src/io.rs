//! Instance files (`"schema": 1` JSON).
//!
//! ```json
//! {"schema": 1, "name": "krawtchouk_d2", "field": "rational", "d": 2,
//!  "A": [["0", "2", "0"], ["1", "0", "1"], ["0", "2", "0"]],
//!  "theta_star": ["2", "0", "-2"], "theta_order": ["2", "0", "-2"]}
//! ```
//!
//! `field` is `"rational"`, `"gfp:P"` or `{"gfp": P}`. Entries may be JSON
//! integers or strings (`"-3/4"`); files are written with strings. Exactly one
//! of `theta_star` (A given in the dual eigenbasis) or `Astar` (raw pair) is
//! required. `theta_order` optionally fixes the eigenvalue order of `A`.

use serde::{Deserialize, Serialize};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::matrix::{ExactMatrix, MAX_DIM};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn parse(&self, spec: FieldSpec) -> Result<FieldElement> {
        match self {
            Entry::Int(x) => Ok(spec.from_i64(*x)),
            Entry::Text(s) => Ok(spec.parse(s)?),
        }
    }
}

impl From<&FieldElement> for Entry {
    fn from(x: &FieldElement) -> Self {
        Entry::Text(x.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDescriptor {
    Text(String),
    Gfp { gfp: u64 },
}

impl FieldDescriptor {
    pub fn spec(&self) -> Result<FieldSpec> {
        match self {
            FieldDescriptor::Text(s) => Ok(s.parse()?),
            FieldDescriptor::Gfp { gfp } => Ok(FieldSpec::prime(*gfp)?),
        }
    }
}

impl From<FieldSpec> for FieldDescriptor {
    fn from(spec: FieldSpec) -> Self {
        FieldDescriptor::Text(spec.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub field: FieldDescriptor,
    pub d: usize,
    #[serde(rename = "A")]
    pub a: Vec<Vec<Entry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_star: Option<Vec<Entry>>,
    #[serde(rename = "Astar", default, skip_serializing_if = "Option::is_none")]
    pub astar: Option<Vec<Vec<Entry>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta_order: Option<Vec<Entry>>,
}

/// What an instance file describes once its entries are parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceData {
    /// `A` in the dual eigenbasis with the dual eigenvalues.
    Dual { a: ExactMatrix, theta_star: Vec<FieldElement> },
    /// An arbitrary pair of matrices.
    Pair { a: ExactMatrix, astar: ExactMatrix },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: Option<String>,
    pub family: Option<String>,
    pub seed: Option<u64>,
    pub spec: FieldSpec,
    pub d: usize,
    pub data: InstanceData,
    pub theta_order: Option<Vec<FieldElement>>,
}

impl Instance {
    pub fn a(&self) -> &ExactMatrix {
        match &self.data {
            InstanceData::Dual { a, .. } | InstanceData::Pair { a, .. } => a,
        }
    }

    /// `A*`: `diag(theta*)` for dual-basis instances.
    pub fn astar(&self) -> ExactMatrix {
        match &self.data {
            InstanceData::Dual { theta_star, .. } => ExactMatrix::diagonal(self.spec, theta_star),
            InstanceData::Pair { astar, .. } => astar.clone(),
        }
    }

    pub fn is_pair(&self) -> bool {
        matches!(self.data, InstanceData::Pair { .. })
    }

    /// Builds the context, rotating raw pairs into the dual eigenbasis first.
    pub fn context(&self) -> Result<Context> {
        let order = self.theta_order.as_deref();
        match &self.data {
            InstanceData::Dual { a, theta_star } => Context::build(a.clone(), theta_star.clone(), order),
            InstanceData::Pair { a, astar } => Context::from_pair(a, astar, order),
        }
    }
}

fn entry_error(what: &str, e: Error) -> Error {
    Error::Instance(format!("{what}: {e}"))
}

fn parse_matrix(rows: &[Vec<Entry>], spec: FieldSpec, n: usize, what: &str) -> Result<ExactMatrix> {
    if rows.len() != n {
        return Err(entry_error(what, Error::DimensionMismatch { expected: n, found: rows.len() }));
    }
    let mut parsed = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(entry_error(what, Error::RaggedRow { row: i, expected: n, found: row.len() }));
        }
        let r = row
            .iter()
            .enumerate()
            .map(|(j, x)| x.parse(spec).map_err(|e| entry_error(&format!("{what}[{i}][{j}]"), e)))
            .collect::<Result<Vec<_>>>()?;
        parsed.push(r);
    }
    ExactMatrix::from_rows(spec, parsed)
}

fn parse_vector(xs: &[Entry], spec: FieldSpec, n: usize, what: &str) -> Result<Vec<FieldElement>> {
    if xs.len() != n {
        return Err(entry_error(what, Error::DimensionMismatch { expected: n, found: xs.len() }));
    }
    xs.iter().enumerate().map(|(i, x)| x.parse(spec).map_err(|e| entry_error(&format!("{what}[{i}]"), e))).collect()
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Instance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("instance files serialize");
        s.push('\n');
        s
    }

    pub fn parse(&self) -> Result<Instance> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::Instance(format!("unsupported schema {} (expected {SCHEMA_VERSION})", self.schema)));
        }
        let spec = self.field.spec().map_err(|e| entry_error("field", e))?;
        let n = self.d + 1;
        if self.d == 0 {
            return Err(Error::DimensionZero);
        }
        if n > MAX_DIM {
            return Err(Error::DimensionLimit(n));
        }
        let a = parse_matrix(&self.a, spec, n, "A")?;
        let data = match (&self.theta_star, &self.astar) {
            (Some(t), None) => InstanceData::Dual { a, theta_star: parse_vector(t, spec, n, "theta_star")? },
            (None, Some(m)) => InstanceData::Pair { a, astar: parse_matrix(m, spec, n, "Astar")? },
            _ => return Err(Error::Instance("exactly one of theta_star or Astar is required".into())),
        };
        let theta_order = self.theta_order.as_ref().map(|t| parse_vector(t, spec, n, "theta_order")).transpose()?;
        Ok(Instance {
            name: self.name.clone(),
            family: self.family.clone(),
            seed: self.seed,
            spec,
            d: self.d,
            data,
            theta_order,
        })
    }

    /// A dual-basis file for `ctx`, recording its eigenvalue order.
    pub fn from_context(ctx: &Context, name: Option<String>, family: Option<String>, seed: Option<u64>) -> Self {
        InstanceFile {
            schema: SCHEMA_VERSION,
            name,
            family,
            seed,
            field: ctx.spec().into(),
            d: ctx.d(),
            a: matrix_entries(ctx.a()),
            theta_star: Some(ctx.dual_eigenvalues().iter().map(Entry::from).collect()),
            astar: None,
            theta_order: Some(ctx.eigenvalues().iter().map(Entry::from).collect()),
        }
    }

    /// A raw-pair file.
    pub fn from_pair(a: &ExactMatrix, astar: &ExactMatrix, name: Option<String>) -> Self {
        InstanceFile {
            schema: SCHEMA_VERSION,
            name,
            family: None,
            seed: None,
            field: a.spec().into(),
            d: a.n() - 1,
            a: matrix_entries(a),
            theta_star: None,
            astar: Some(matrix_entries(astar)),
            theta_order: None,
        }
    }
}

pub fn matrix_entries(m: &ExactMatrix) -> Vec<Vec<Entry>> {
    m.rows().iter().map(|r| r.iter().map(Entry::from).collect()).collect()
}

pub fn matrix_strings(m: &ExactMatrix) -> Vec<Vec<String>> {
    m.rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect()
}

pub fn vector_strings(v: &[FieldElement]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Reads and parses an instance in one step.
pub fn load_instance(text: &str) -> Result<Instance> {
    InstanceFile::from_json(text)?.parse()
}
