//! Deterministic reports shared by the command-line tool and the C API.
//!
//! A report is the machine-readable trace of one command: the inputs echoed
//! back, the computed results, and every hypothesis that was checked, listed
//! by name with the residual or value backing its verdict. JSON output is
//! canonical: struct fields appear in a fixed order, nested maps sort their
//! keys, and floats print with twelve significant digits in lowercase
//! scientific notation, so identical inputs under the same toolkit version
//! produce byte-identical documents.

use serde::Serialize;
use serde_json::{json, Map, Number, Value};

use crate::schubert::QuantumProduct;
use crate::toric::{toric_lower_bound, vertex_capacity, DelzantPolytope, ToricError};

/// One named hypothesis or measurement: whether it held, and the residual or
/// value backing the verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: Value,
}

/// The outcome of one command.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, inputs: Value) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            results: Value::Null,
            checks: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn check(&mut self, name: &str, pass: bool, value: Value) {
        self.checks.push(Check {
            name: name.to_string(),
            pass,
            value,
        });
    }

    /// Residual-style check: passes iff the residual is finite and at most
    /// the bound.
    pub fn check_residual(&mut self, name: &str, residual: f64, bound: f64) {
        self.check(name, residual.is_finite() && residual <= bound, float(residual));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Process exit status: 0 when every check passed, 1 otherwise. Usage
    /// and input errors never reach a report; the caller exits 2 for those.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// Canonical single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }

    /// Human-readable rendering, one check per line. Deterministic like the
    /// JSON, just not meant for machines.
    pub fn render_text(&self) -> String {
        use std::fmt::Write;

        let mut out = String::new();
        let _ = writeln!(out, "command: {} (gwidth {})", self.command, self.version);
        let _ = writeln!(
            out,
            "inputs: {}",
            serde_json::to_string(&self.inputs).expect("inputs serialize")
        );
        let results =
            serde_json::to_string_pretty(&self.results).expect("results serialize");
        let _ = writeln!(out, "results:");
        for line in results.lines() {
            let _ = writeln!(out, "  {line}");
        }
        if self.checks.is_empty() {
            let _ = writeln!(out, "checks: none");
        } else {
            let _ = writeln!(out, "checks:");
            for c in &self.checks {
                let verdict = if c.pass { "PASS" } else { "FAIL" };
                let value =
                    serde_json::to_string(&c.value).expect("check value serialize");
                let _ = writeln!(out, "  {verdict}  {}  value={value}", c.name);
            }
        }
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        if failed == 0 {
            let _ = writeln!(out, "verdict: PASS");
        } else {
            let _ = writeln!(
                out,
                "verdict: FAIL ({failed} of {} checks failed)",
                self.checks.len()
            );
        }
        out
    }
}

/// Term dump of a quantum product, one entry per (degree, class) pair in
/// the product's own deterministic order.
pub fn quantum_product_value(product: &QuantumProduct) -> Value {
    let terms: Vec<Value> = product
        .terms()
        .map(|(degree, partition, coefficient)| {
            json!({
                "degree": degree,
                "partition": partition,
                "coefficient": coefficient.to_string(),
            })
        })
        .collect();
    json!({
        "term_count": terms.len(),
        "max_degree": product.max_degree(),
        "terms": terms,
    })
}

/// Validation summary, per-vertex capacities, and the packing lower bound of
/// a Delzant polytope. A polytope failing the Delzant conditions is an
/// error, carrying the violation (which names the offending vertex).
pub fn toric_bounds_value(polytope: &DelzantPolytope) -> Result<Value, ToricError> {
    let validation = polytope.validate()?;
    if !validation.is_delzant {
        let why = validation
            .violation
            .as_ref()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "unspecified violation".into());
        return Err(ToricError::NotDelzant(why));
    }
    let mut vertices = Vec::new();
    for v in &validation.vertices {
        let capacity = vertex_capacity(polytope, v)?;
        let mut entry = serde_json::to_value(v)
            .expect("vertex data serializes")
            .as_object()
            .cloned()
            .unwrap_or_default();
        entry.insert(
            "capacity".into(),
            json!(crate::rational::to_string(&capacity)),
        );
        vertices.push(Value::Object(entry));
    }
    let bound = toric_lower_bound(polytope)?;
    let mut results = Map::new();
    results.insert("is_delzant".into(), json!(true));
    results.insert("vertices".into(), json!(vertices));
    results.insert(
        "lower_bound".into(),
        json!(crate::rational::to_string(&bound)),
    );
    Ok(Value::Object(results))
}

/// A float as a canonical JSON number: twelve significant digits, lowercase
/// scientific notation with an explicit exponent sign, preserved verbatim in
/// the output. Non-finite values become strings, since JSON numbers cannot
/// express them.
pub fn float(x: f64) -> Value {
    if x.is_finite() {
        let mut text = format!("{x:.11e}");
        // {:e} leaves a nonnegative exponent unsigned; the JSON writer
        // canonicalizes to an explicit sign, so match it for a stable
        // round trip.
        if let Some(pos) = text.find('e') {
            if !matches!(text.as_bytes().get(pos + 1), Some(b'+') | Some(b'-')) {
                text.insert(pos + 1, '+');
            }
        }
        let n: Number = serde_json::from_str(&text).expect("formatted float parses");
        Value::Number(n)
    } else {
        Value::String(format!("{x}"))
    }
}
