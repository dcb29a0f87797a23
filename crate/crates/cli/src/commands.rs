//! One function per subcommand; each returns a JSON report and warnings.

use std::time::Instant;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use l2link::blocks::{
    self, capacity, diagonal_metabolizer, hyperbolic_test, metabolizer, split, synthesize, tdim,
    tsig, BlockForm,
};
use l2link::circle::{
    circle_capacities, circle_diagram, h0_presentation, spectral_densities, split_excision, Angle,
    Cell, CircleDiagram, Profile, ProfileSide, SpectralDensityGerm, SteppedCircleModule,
};
use l2link::invariants::{signature_counts, InvariantReport};
use l2link::linalg::{homology_presentation, LaurentMatrix};
use l2link::linking::{gram_at_point, DualityPresentation};
use l2link::pairs::{verify_boundary_pair, verify_hyperbolic_pair, PairData};
use l2link::scalars::{Field, Rational};
use l2link::TraceSpec;

use crate::error::CliError;
use crate::generate;
use crate::input::{
    subobject, BlocksSpec, CircleSpec, ComplexSpec, FormSpec, MatrixRows, PairSpec, Source,
};
use crate::report;

pub const DEFAULT_CONDUCTOR: u32 = 4;

#[derive(Clone, Debug)]
pub struct Options {
    /// Conductor used when an input file does not name one.
    pub conductor: u32,
    /// Omit timings so that identical inputs give identical output.
    pub deterministic: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            conductor: DEFAULT_CONDUCTOR,
            deterministic: false,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub report: Value,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(report: Value) -> Self {
        Outcome {
            report,
            warnings: Vec::new(),
        }
    }

    /// 0 on success, 2 when there were warnings.
    pub fn exit_code(&self) -> i32 {
        if self.warnings.is_empty() {
            0
        } else {
            2
        }
    }

    fn finish(mut self, opts: &Options, start: Instant) -> Self {
        if let Value::Object(m) = &mut self.report {
            m.insert("warnings".into(), json!(self.warnings));
            if !opts.deterministic {
                m.insert(
                    "elapsed_ms".into(),
                    json!(start.elapsed().as_millis() as u64),
                );
            }
        }
        self
    }
}

fn field(conductor: Option<u32>, opts: &Options) -> Result<Field, CliError> {
    Ok(Field::new(conductor.unwrap_or(opts.conductor))?)
}

fn parity(q: u32) -> u8 {
    (q % 2) as u8
}

/// Chain groups dimensions from the boundary matrices, checking compatibility.
fn chain_dims(src: &Source, mats: &[LaurentMatrix]) -> Result<Vec<usize>, CliError> {
    let mut dims = Vec::new();
    if let Some(d1) = mats.first() {
        dims.push(d1.rows());
    }
    for (k, d) in mats.iter().enumerate() {
        if k > 0 && d.rows() != mats[k - 1].cols() {
            return Err(src.error(
                None,
                format!(
                    "boundary d_{} has {} rows but C_{} has dimension {}",
                    k + 1,
                    d.rows(),
                    k,
                    mats[k - 1].cols()
                ),
            ));
        }
        dims.push(d.cols());
    }
    Ok(dims)
}

fn boundaries(
    src: &Source,
    field: &Field,
    spec: &ComplexSpec,
) -> Result<Vec<LaurentMatrix>, CliError> {
    spec.boundaries
        .iter()
        .enumerate()
        .map(|(k, m)| src.matrix(field, m, &format!("boundary d_{}", k + 1)))
        .collect()
}

fn warn_off_support(out: &mut Vec<String>, what: &str, d: &l2link::linalg::TorsionDecomposition) {
    if d.has_off_support() {
        out.push(format!(
            "{}: factor {} has roots outside the N-th roots of unity",
            what, d.off_support_factor
        ));
    }
}

pub fn homology(src: &Source, opts: &Options) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let spec: ComplexSpec = src.parse()?;
    let field = field(spec.conductor, opts)?;
    let mut warnings = Vec::new();
    let mut degrees = Vec::new();
    if let Some(p) = &spec.presentation {
        let a = src.matrix(&field, &p.a, "presentation a")?;
        let d = l2link::linalg::torsion_decompose(&a);
        warn_off_support(&mut warnings, &format!("H_{}", spec.q), &d);
        let mut v = report::decomposition(&field, &d);
        v["degree"] = json!(spec.q);
        degrees.push(v);
    } else {
        let mats = boundaries(src, &field, &spec)?;
        let dims = chain_dims(src, &mats)?;
        for (k, &dim) in dims.iter().enumerate() {
            let d_in = mats.get(k);
            let d_out = if k > 0 { mats.get(k - 1) } else { None };
            let pres = homology_presentation(&field, dim, d_in, d_out)?;
            let d = l2link::linalg::torsion_decompose(&pres);
            warn_off_support(&mut warnings, &format!("H_{}", k), &d);
            let mut v = report::decomposition(&field, &d);
            v["degree"] = json!(k);
            if let Some(l) = spec.labels.get(k) {
                v["label"] = json!(l);
            }
            degrees.push(v);
        }
    }
    let out = Outcome {
        report: json!({ "conductor": field.conductor(), "degrees": degrees }),
        warnings,
    };
    Ok(out.finish(opts, start))
}

/// The duality presentation of the middle degree: `A = d_(q+1)` and `H`, or
/// an explicit presentation.
/// The compatibility check, located at the offending row of `h`.
fn validate(src: &Source, p: &DualityPresentation, h_rows: &MatrixRows) -> Result<(), CliError> {
    match p.validate() {
        Err(e @ l2link::Error::PresentationViolation { row, .. }) => {
            let entry = h_rows.get(row).and_then(|r| r.first()).map(String::as_str);
            Err(src.error(entry, e.to_string()))
        }
        other => Ok(other?),
    }
}

pub fn complex_presentation(
    src: &Source,
    field: &Field,
    spec: &ComplexSpec,
) -> Result<Option<DualityPresentation>, CliError> {
    let q = parity(spec.q);
    let (a, h, h_rows) = if let Some(p) = &spec.presentation {
        (
            src.matrix(field, &p.a, "presentation a")?,
            src.matrix(field, &p.h, "presentation h")?,
            &p.h,
        )
    } else {
        let mats = boundaries(src, field, spec)?;
        chain_dims(src, &mats)?;
        let Some(a) = mats.get(spec.q as usize).cloned() else {
            return Ok(None);
        };
        let Some(h) = &spec.h else {
            return Err(src.error(None, "the duality matrix \"h\" is required"));
        };
        (a, src.matrix(field, h, "h")?, h)
    };
    let p = DualityPresentation::new(a, h, q)?;
    validate(src, &p, h_rows)?;
    Ok(Some(p))
}

fn diagram_json(d: &CircleDiagram) -> Value {
    json!({
        "top": report::poly(&d.top),
        "right": report::poly(&d.right),
        "left": report::poly(&d.left),
        "bottom": report::poly(&d.bottom),
        "commutes": d.commutes(),
    })
}

pub fn invariants(
    src: &Source,
    opts: &Options,
    trace: Option<TraceSpec>,
    point: Option<i64>,
) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let spec: ComplexSpec = src.parse()?;
    let field = field(spec.conductor, opts)?;
    let mut top = Map::new();
    top.insert("conductor".into(), json!(field.conductor()));
    top.insert("q".into(), json!(spec.q));
    let Some(pres) = complex_presentation(src, &field, &spec)? else {
        top.insert("free_rank".into(), json!(0));
        top.insert("points".into(), json!([]));
        return Ok(Outcome::new(Value::Object(top)).finish(opts, start));
    };
    let mut warnings = Vec::new();
    let dec = pres.torsion_decompose();
    warn_off_support(&mut warnings, "torsion", &dec);
    let support = dec.support();
    let points = match point {
        Some(p) => {
            let p = p.rem_euclid(field.conductor() as i64);
            if !support.contains(&p) {
                return Err(CliError::Usage(format!(
                    "point {} is not in the support {:?}; use --all-points",
                    p, support
                )));
            }
            vec![p]
        }
        None => support,
    };
    let mut reports = Vec::new();
    for pt in points {
        let form = gram_at_point(&pres, pt)?;
        let inv = signature_counts(&form)?;
        if !inv.is_nondegenerate() {
            return Err(l2link::Error::NotHermitian(format!(
                "degenerate linking form at point {}",
                pt
            ))
            .into());
        }
        let blocks = BlockForm::from_counts(pt, &inv.counts);
        let r = InvariantReport::from_counts(pt, inv.counts.clone());
        let mut v = report::invariants(&r, &blocks);
        v["c"] = report::root(&field, pt);
        v["multiplicities"] = json!(dec.multiplicities_at(pt));
        v["filtration_dims"] = json!(inv.filtration_dims);
        v["blocks"] = report::block_list(&blocks);
        if let Some(t) = trace {
            v["selected"] = report::selected(&r, t);
        }
        reports.push(v);
    }
    top.insert("free_rank".into(), json!(dec.free_rank));
    top.insert("points".into(), Value::Array(reports));
    if pres.a.rows() == 1 && pres.a.cols() == 1 {
        top.insert(
            "diagram".into(),
            diagram_json(&CircleDiagram::from_presentation(&pres)?),
        );
    }
    Ok(Outcome {
        report: Value::Object(top),
        warnings,
    }
    .finish(opts, start))
}

fn form_report(
    src: &Source,
    spec: &FormSpec,
    round_trip: Option<(&Field, u8)>,
) -> Result<Value, CliError> {
    let f = spec.form(src)?;
    let counts = f.counts();
    let r = InvariantReport::from_counts(f.point(), counts.clone());
    let mut v = report::invariants(&r, &f);
    v["blocks"] = report::block_list(&f);
    v["dimension"] = json!(f.dimension());
    v["hyperbolic"] = json!(hyperbolic_test(&f));
    v["split"] = report::split(&split(&f));
    let mut block_caps = Map::new();
    for t in TraceSpec::NORMAL {
        let (p, m) = capacity(&f, t)?;
        block_caps.insert(t.name().into(), json!([p, m]));
    }
    v["block_capacities"] = Value::Object(block_caps);
    let mut block_tsig = Map::new();
    for t in TraceSpec::DIXMIER {
        block_tsig.insert(
            t.name().into(),
            json!({ "tdim": tdim(&f, t), "tsig": tsig(&f, t)? }),
        );
    }
    v["block_signatures"] = Value::Object(block_tsig);
    let sub_report = |sub: &blocks::SubobjectSpec| -> Result<Value, CliError> {
        let mut m = Map::new();
        m.insert("generators".into(), report::generators(sub));
        for t in TraceSpec::DIXMIER {
            m.insert(
                t.name().into(),
                report::excess(&blocks::excess(&f, sub, t)?),
            );
        }
        Ok(Value::Object(m))
    };
    v["metabolizer"] = sub_report(&metabolizer(&f))?;
    let diagonal = diagonal_metabolizer(&f);
    if diagonal != metabolizer(&f) {
        v["diagonal_metabolizer"] = sub_report(&diagonal)?;
    }
    if let Some(gens) = &spec.subobject {
        v["subobject"] = sub_report(&subobject(gens))?;
    }
    if let Some((field, q)) = round_trip {
        let recovered = if f.is_empty() {
            counts.clone()
        } else {
            signature_counts(&gram_at_point(&synthesize(&f, field, q)?, f.point())?)?.counts
        };
        v["round_trip"] = json!({
            "conductor": field.conductor(),
            "counts": report::counts(&recovered),
            "recovered": recovered == counts,
        });
    }
    Ok(v)
}

pub fn blocks(src: &Source, opts: &Options) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let spec: BlocksSpec = src.parse()?;
    let field = field(spec.conductor, opts)?;
    let q = parity(spec.q);
    let forms = spec
        .forms()
        .iter()
        .map(|f| form_report(src, f, Some((&field, q))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(
        Outcome::new(json!({ "conductor": field.conductor(), "q": spec.q, "forms": forms }))
            .finish(opts, start),
    )
}

fn germ_json(g: &SpectralDensityGerm) -> Value {
    json!({
        "steps": g.steps.iter().map(|(a, v)| json!({ "at": format!("sin({})", a), "value": v.to_string() })).collect::<Vec<_>>(),
        "profile_terms": g.profile_terms,
        "non_decreasing": g.is_non_decreasing(),
        "total": g.total().to_string(),
        "capacity": g.capacity(),
    })
}

pub fn parse_circle(src: &Source) -> Result<(SteppedCircleModule, Rational), CliError> {
    let spec: CircleSpec = src.parse()?;
    let epsilon = src.rational(&spec.epsilon)?;
    let mut cells = Vec::new();
    for c in &spec.cells {
        let mu = src.rational(&c.mu)?;
        let f: Angle =
            c.f.parse()
                .map_err(|e: l2link::Error| src.error(Some(&c.f), e.to_string()))?;
        cells.push(Cell { mu, f });
    }
    let mut profiles = Vec::new();
    for p in &spec.profiles {
        let sign = p
            .sign
            .value()
            .ok_or_else(|| src.error(None, "profile sign must be '+' or '-'"))?;
        let side: ProfileSide = p
            .side
            .parse()
            .map_err(|e: l2link::Error| src.error(Some(&p.side), e.to_string()))?;
        profiles.push(Profile { k: p.k, sign, side });
    }
    let m = SteppedCircleModule::new(cells, profiles)?;
    Ok((m, epsilon))
}

fn trace_for_side(side: ProfileSide) -> TraceSpec {
    match side {
        ProfileSide::Both => TraceSpec::Interior,
        ProfileSide::Left => TraceSpec::Terminal,
        ProfileSide::Right => TraceSpec::Initial,
    }
}

pub fn circle(src: &Source, opts: &Options) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let (m, epsilon) = parse_circle(src)?;
    let mut warnings = Vec::new();
    let field = Field::new(4)?;
    let cells: Vec<Value> = if m
        .cells()
        .iter()
        .all(|c| matches!(c.f, Angle::PiMultiple(_)))
    {
        h0_presentation(&m)?
            .iter()
            .map(|c| {
                json!({
                    "conductor": c.t.field().conductor(),
                    "t": c.t.to_string(),
                    "top": c.top.to_string(),
                    "left": c.left.to_string(),
                    "right": c.right.to_string(),
                    "bottom": c.bottom.to_string(),
                    "commutes": c.commutes(),
                })
            })
            .collect()
    } else {
        warnings.push("cells with angles in radians have no exact scalar maps".into());
        Vec::new()
    };
    let (small, rest) = split_excision(&m, &epsilon)?;
    let (plus, minus) = spectral_densities(&m, &epsilon)?;
    let (flip_plus, flip_minus) = spectral_densities(&m.negated(), &epsilon)?;
    let caps = circle_capacities(&m, &epsilon)?;
    let mut profiles = Vec::new();
    for p in m.profiles() {
        let single = SteppedCircleModule::new(Vec::new(), vec![*p])?;
        let own = circle_capacities(&single, &Rational::one())?;
        let trace = trace_for_side(p.side);
        let f = BlockForm::new(0, &[(p.k, p.sign, 1)])?;
        let block = capacity(&f, trace)?;
        profiles.push(json!({
            "k": p.k,
            "sign": report::sign_str(p.sign),
            "side": p.side.name(),
            "trace": trace.name(),
            "capacities": [own.0, own.1],
            "block_capacities": [block.0, block.1],
            "matches": own == block,
        }));
    }
    let report = json!({
        "diagram": diagram_json(&circle_diagram(&field)),
        "epsilon": epsilon.to_string(),
        "cells": cells,
        "excision": { "small": small.len(), "excised": rest.len() },
        "densities": { "plus": germ_json(&plus), "minus": germ_json(&minus) },
        "swap_symmetric": plus.same_steps(&flip_minus) && minus.same_steps(&flip_plus),
        "capacities": [caps.0, caps.1],
        "profiles": profiles,
    });
    Ok(Outcome { report, warnings }.finish(opts, start))
}

pub fn pair_verify(src: &Source, opts: &Options) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let spec: PairSpec = src.parse()?;
    let field = field(spec.conductor, opts)?;
    let q = parity(spec.q);
    let intersection = src.matrix(&field, &spec.intersection, "intersection")?;
    let pair = match (&spec.boundary, &spec.boundary_blocks) {
        (Some(b), None) => {
            let a = src.matrix(&field, &b.a, "boundary a")?;
            let h = src.matrix(&field, &b.h, "boundary h")?;
            let p = DualityPresentation::new(a, h, (q + 1) % 2)?;
            validate(src, &p, &b.h)?;
            let x = spec
                .x
                .iter()
                .map(|v| src.vector(&field, v))
                .collect::<Result<Vec<_>, _>>()?;
            PairData::new(p, x, intersection, q)?
        }
        (None, Some(forms)) => {
            let parts = forms
                .iter()
                .map(|f| {
                    Ok((
                        f.form(src)?,
                        subobject(f.subobject.as_deref().unwrap_or(&[])),
                    ))
                })
                .collect::<Result<Vec<_>, CliError>>()?;
            PairData::from_blocks(&field, &parts, intersection, q)?
        }
        _ => {
            return Err(src.error(
                None,
                "give exactly one of \"boundary\" and \"boundary_blocks\"",
            ));
        }
    };
    let r = verify_boundary_pair(&pair)?;
    let mut warnings = Vec::new();
    if r.off_support {
        warnings.push(
            "a boundary or intersection factor has roots outside the N-th roots of unity".into(),
        );
    }
    let points: Vec<Value> = r
        .points
        .iter()
        .map(|p| {
            json!({
                "point": p.point,
                "c": report::root(&field, p.point),
                "induced": report::counts(&p.induced),
                "discriminant": report::counts(&p.discriminant),
                "isotropic": p.isotropic,
                "metabolic": p.metabolic,
                "congruent": p.congruent(),
            })
        })
        .collect();
    let mut out = json!({
        "conductor": field.conductor(),
        "q": spec.q,
        "points": points,
        "isotropic": r.isotropic(),
        "congruent": r.congruent(),
        "metabolic": r.metabolic(),
        "discriminant_empty": r.discriminant_empty(),
        "witness": r.witness().map(|p| p.point),
    });
    if let Some(h) = &spec.hyperbolic {
        let form = FormSpec {
            point: h.point,
            blocks: h.blocks.clone(),
            subobject: None,
        }
        .form(src)?;
        let t = verify_hyperbolic_pair(&form, &subobject(&h.plus), &subobject(&h.minus))?;
        out["hyperbolic"] = json!({
            "plus_metabolizer": t.plus_metabolizer,
            "minus_metabolizer": t.minus_metabolizer,
            "trivial_intersection": t.trivial_intersection,
            "spans_whole": t.spans_whole,
            "complementary_metabolizers": t.complementary_metabolizers(),
            "hyperbolic": t.hyperbolic,
            "consistent": t.consistent(),
        });
    }
    Ok(Outcome {
        report: out,
        warnings,
    }
    .finish(opts, start))
}

#[derive(Clone, Debug)]
pub enum GenerateRequest {
    Circle,
    Blocks {
        blocks: String,
        point: i64,
        q: u32,
        seed: Option<u64>,
    },
    Pair {
        kind: generate::PairKind,
        q: u32,
        seed: Option<u64>,
    },
}

pub fn generate_file(req: &GenerateRequest, opts: &Options) -> Result<Value, CliError> {
    match req {
        GenerateRequest::Circle => Ok(generate::circle_complex(opts.conductor)?),
        GenerateRequest::Blocks {
            blocks,
            point,
            q,
            seed,
        } => {
            let field = Field::new(opts.conductor)?;
            let f = BlockForm::new(*point, &generate::parse_block_list(blocks)?)?;
            let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
            Ok(generate::blocks_file(&field, &f, *q, rng.as_mut())?)
        }
        GenerateRequest::Pair { kind, q, seed } => {
            let field = Field::new(opts.conductor)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(0));
            let inst = generate::pair_instance(
                &field,
                &mut rng,
                *kind,
                generate::Control::None,
                (q % 2) as u8,
            )?;
            Ok(generate::pair_file(&inst.pair))
        }
    }
}

/// Quick end-to-end checks on built-in instances.
pub fn selftest(opts: &Options) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let mut checks: Vec<(String, bool)> = Vec::new();
    let field = Field::new(8)?;

    let circle = Source::new("circle", generate::circle_complex(4)?.to_string());
    let inv = invariants(
        &circle,
        &Options {
            conductor: 4,
            deterministic: true,
        },
        None,
        None,
    )?;
    let p = &inv.report["points"][0];
    checks.push((
        "circle has one order-1 block at c = 1".into(),
        p["point"] == json!(0)
            && p["counts"]["n_plus"] == json!([1])
            && inv.report["diagram"]["commutes"] == json!(true),
    ));

    let mut ok = true;
    for f in generate::enumerate_block_forms(1, 4) {
        if f.is_empty() {
            continue;
        }
        let l = gram_at_point(&synthesize(&f, &field, 0)?, 1)?;
        ok &= signature_counts(&l)?.counts == f.counts();
    }
    checks.push(("block forms up to weight 4 round-trip".into(), ok));

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut ok = true;
    for _ in 0..20 {
        let a = LaurentMatrix::from_rows(
            &field,
            (0..3)
                .map(|_| {
                    (0..3)
                        .map(|_| generate::random_laurent(&field, &mut rng, 2, 2))
                        .collect()
                })
                .collect(),
        )?;
        ok &= l2link::linalg::smith_normal_form(&a).verify(&a);
    }
    checks.push(("Smith normal form on random 3x3 matrices".into(), ok));

    let mut ok = true;
    for (n, kind) in [
        generate::PairKind::Metabolic,
        generate::PairKind::Zero,
        generate::PairKind::Mixed,
    ]
    .into_iter()
    .enumerate()
    {
        let inst = generate::pair_instance(
            &field,
            &mut rng,
            kind,
            generate::Control::None,
            (n % 2) as u8,
        )?;
        ok &= verify_boundary_pair(&inst.pair)?.congruent();
    }
    checks.push(("induced and discriminant forms agree".into(), ok));

    let passed = checks.iter().all(|c| c.1);
    let report = json!({
        "checks": checks.iter().map(|(n, p)| json!({ "name": n, "passed": p })).collect::<Vec<_>>(),
        "passed": passed,
    });
    Ok(Outcome::new(report).finish(opts, start))
}
