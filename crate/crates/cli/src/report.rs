//! JSON renderings of library values. Exact scalars are strings.

use serde_json::{json, Map, Value};

use l2link::blocks::{self, BlockForm, ExcessReport, SplitParts};
use l2link::invariants::{InvariantReport, SignatureCounts};
use l2link::linalg::{LaurentMatrix, TorsionDecomposition};
use l2link::scalars::{Field, LaurentPoly};
use l2link::TraceSpec;

pub fn sign_str(s: i8) -> &'static str {
    if s > 0 {
        "+"
    } else {
        "-"
    }
}

pub fn matrix(m: &LaurentMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|p| Value::String(p.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn poly(p: &LaurentPoly) -> Value {
    Value::String(p.to_string())
}

/// `zeta_N^a` as a string in the input grammar.
pub fn root(field: &Field, point: i64) -> Value {
    Value::String(field.zeta(point).to_string())
}

pub fn counts(c: &SignatureCounts) -> Value {
    json!({ "n_plus": c.n_plus(), "n_minus": c.n_minus() })
}

pub fn decomposition(field: &Field, d: &TorsionDecomposition) -> Value {
    let torsion: Vec<Value> = d
        .blocks
        .iter()
        .map(|b| {
            json!({
                "point": b.point,
                "c": root(field, b.point),
                "multiplicity": b.multiplicity,
                "count": b.count,
            })
        })
        .collect();
    json!({
        "free_rank": d.free_rank,
        "torsion": torsion,
        "off_support_factor": if d.has_off_support() { poly(&d.off_support_factor) } else { Value::Null },
    })
}

fn pair(p: (usize, usize)) -> Value {
    json!([p.0, p.1])
}

pub fn invariants(r: &InvariantReport, dixmier: &BlockForm) -> Value {
    let h = &r.heights;
    let mut caps = Map::new();
    for &(t, p, m) in &r.capacities {
        caps.insert(t.name().into(), pair((p, m)));
    }
    let mut tdim = Map::new();
    for t in TraceSpec::DIXMIER {
        tdim.insert(t.name().into(), json!(blocks::tdim(dixmier, t)));
    }
    let s = &r.signatures;
    json!({
        "point": r.point,
        "counts": counts(&r.counts),
        "heights": {
            "h_odd": h.h_odd,
            "h_ev_plus": h.h_ev_plus,
            "h_ev_minus": h.h_ev_minus,
            "h_odd_plus": h.h_odd_plus,
            "h_odd_minus": h.h_odd_minus,
        },
        "capacities": caps,
        "sigma_ev": s.sigma_ev,
        "sigma_odd": s.sigma_odd,
        "tsig_plus": s.tsig_plus,
        "tsig_minus": s.tsig_minus,
        "tdim": tdim,
    })
}

/// The requested trace applied to a report.
pub fn selected(r: &InvariantReport, trace: TraceSpec) -> Value {
    if trace.is_normal() {
        let (p, m) = r.capacity(trace).unwrap_or((0, 0));
        json!({ "trace": trace.name(), "capacities": [p, m] })
    } else {
        let tsig = r.signatures.under(trace).unwrap_or(0);
        json!({ "trace": trace.name(), "tsig": tsig })
    }
}

pub fn block_list(f: &BlockForm) -> Value {
    Value::Array(
        f.triples()
            .into_iter()
            .map(|(k, s, m)| json!([k, sign_str(s), m]))
            .collect(),
    )
}

pub fn split(parts: &SplitParts) -> Value {
    let side = |sign: i8| -> Value {
        Value::Array(
            parts
                .part(sign)
                .iter()
                .map(|(&(side, k), &m)| json!({ "side": side.to_string(), "k": k, "multiplicity": m }))
                .collect(),
        )
    };
    json!({ "positive": side(1), "negative": side(-1) })
}

pub fn excess(e: &ExcessReport) -> Value {
    json!({
        "tdim_sub": e.tdim_sub,
        "tdim_quotient": e.tdim_quotient,
        "tdim_total": e.tdim_total,
        "excess": e.excess,
        "sub_dim": e.sub_dim,
        "annihilator_dim": e.annihilator_dim,
        "isotropic": e.is_isotropic,
        "metabolizer": e.is_metabolizer,
        "bounds_hold": e.bounds_hold(),
    })
}

pub fn generators(sub: &blocks::SubobjectSpec) -> Value {
    Value::Array(
        sub.generators
            .iter()
            .map(|g| json!({ "level": g.level, "coeffs": g.coeffs }))
            .collect(),
    )
}
