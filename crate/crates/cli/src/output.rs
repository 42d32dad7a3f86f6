//! JSON shapes for `--json`. The matching schemas live in docs/schemas/.

use gridchrome::analyzer::{LemmaFinding, PositionClassification};
use gridchrome::constructions::ConstructionKind;
use gridchrome::solver::{DecisionOutcome, Engine};
use gridchrome::{ChromaticAnswer, Coloring, GridDims, ViolationReport};
use serde_json::{json, Value};

pub fn coloring(c: &Coloring) -> Value {
    let rows: Vec<Vec<u8>> = c.rows().map(<[u8]>::to_vec).collect();
    json!({ "m": c.dims().m(), "n": c.dims().n(), "k": c.k(), "rows": rows })
}

pub fn construction(kind: ConstructionKind, r: Option<usize>, c: &Coloring) -> Value {
    json!({ "kind": kind.to_string(), "r": r, "coloring": coloring(c) })
}

pub fn verification(r: usize, c: &Coloring, report: &ViolationReport) -> Value {
    json!({
        "m": c.dims().m(),
        "n": c.dims().n(),
        "k": c.k(),
        "r": r,
        "ok": report.is_empty(),
        "violation_count": report.violation_count(),
        "report": report,
    })
}

pub fn chromatic(m: usize, n: usize, r: usize, a: &ChromaticAnswer) -> Value {
    json!({
        "m": m,
        "n": n,
        "r": r,
        "value": a.value,
        "provenance": a.provenance,
        "lower_bound_source": a.lower_bound_source,
    })
}

pub fn decision(dims: GridDims, r: usize, k: usize, engine: Engine, o: &DecisionOutcome) -> Value {
    json!({
        "m": dims.m(),
        "n": dims.n(),
        "r": r,
        "k": k,
        "engine": engine,
        "status": o.status,
        "witness": o.witness.as_ref().map(coloring),
        "stats": o.stats,
    })
}

pub fn analysis(
    findings: &[LemmaFinding],
    classification: Option<&Result<PositionClassification, ()>>,
    signature: Option<Option<(usize, usize)>>,
) -> Value {
    let mut out = json!({ "findings": findings });
    if let Some(c) = classification {
        out["classification"] = match c {
            Ok(c) => {
                let rows: Vec<String> = c.to_string().lines().map(str::to_string).collect();
                json!({ "coherent": true, "reference": c.reference.0, "rows": rows, "labels": c.labels })
            }
            Err(()) => json!({ "coherent": false }),
        };
    }
    if let Some(sig) = signature {
        out["partial"] = match sig {
            Some((r, s)) => json!({ "r": r, "s": s }),
            None => Value::Null,
        };
    }
    out
}
