//! Acceptance suite: one line per criterion. All comparisons are exact; the
//! only tolerances are the wall-clock limits printed next to each line.

use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use l2link::blocks::{
    self, capacity, diagonal_metabolizer, hyperbolic_test, metabolizer, perp_sum, synthesize, tdim,
    tsig, BlockForm, BlockModule, SubobjectSpec,
};
use l2link::circle::{
    circle_capacities, spectral_densities, Angle, Cell, Profile, ProfileSide, SteppedCircleModule,
};
use l2link::invariants::{
    expanded_signature_counts, signature_counts, InvariantReport, SignatureCounts,
};
use l2link::linalg::{smith_normal_form, KMatrix, LaurentMatrix};
use l2link::linking::{gram_at_point, DualityPresentation, TorsionLinkingForm};
use l2link::pairs::verify_boundary_pair;
use l2link::scalars::{parse_laurent, Field, LaurentPoly, Rational};
use l2link::TraceSpec;
use l2link_cli::generate::{self, Control, PairKind};
use l2link_cli::{commands, Options, Source};

const CONDUCTOR: u32 = 8;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: l2link::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// One instance of the round-trip set.
struct Instance {
    form: BlockForm,
    q: u8,
    pres: DualityPresentation,
    linking: TorsionLinkingForm,
    counts: SignatureCounts,
}

fn pipeline(
    pres: &DualityPresentation,
    point: i64,
) -> Result<(TorsionLinkingForm, SignatureCounts), String> {
    if pres.a.rows() == 0 {
        let l = TorsionLinkingForm::empty(pres.field(), point, pres.q_parity);
        return Ok((l, SignatureCounts::default()));
    }
    let l = lib(gram_at_point(pres, point))?;
    let inv = lib(signature_counts(&l))?;
    ensure(inv.is_nondegenerate(), || {
        format!("degenerate form at {}", point)
    })?;
    Ok((l, inv.counts))
}

fn instance(
    field: &Field,
    form: BlockForm,
    q: u8,
    scramble: Option<&mut ChaCha8Rng>,
) -> Result<Instance, String> {
    let mut pres = lib(synthesize(&form, field, q))?;
    if let Some(rng) = scramble {
        pres = lib(generate::scramble(&pres, rng))?.0;
    }
    let (linking, counts) = pipeline(&pres, form.point())?;
    Ok(Instance {
        form,
        q,
        pres,
        linking,
        counts,
    })
}

struct Suite {
    field: Field,
    exhaustive: Vec<Instance>,
    random: Vec<Instance>,
}

impl Suite {
    fn all(&self) -> impl Iterator<Item = &Instance> {
        self.exhaustive.iter().chain(self.random.iter())
    }
}

fn run_cli(args: &[&str], stdin_file: Option<&str>) -> Result<(Value, i32), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_l2link"));
    cmd.args(args).env_remove("L2LINK_CONDUCTOR");
    if let Some(f) = stdin_file {
        cmd.arg(f);
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    let code = out.status.code().unwrap_or(-1);
    let v = serde_json::from_slice(&out.stdout).map_err(|e| {
        format!(
            "{:?}: bad json ({}): {}",
            args,
            e,
            String::from_utf8_lossy(&out.stderr)
        )
    })?;
    Ok((v, code))
}

fn criterion_1() -> Check {
    let dir = std::env::temp_dir().join(format!("l2link-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let path = dir.join("circle.json");
    let start = Instant::now();
    let (file, code) = run_cli(&["generate", "circle"], None)?;
    ensure(code == 0, || format!("generate exit {}", code))?;
    std::fs::write(&path, file.to_string()).map_err(|e| e.to_string())?;
    let p = path.to_str().unwrap();
    let (rep, code) = run_cli(
        &["--deterministic", "invariants", "--trace", "dixmier+"],
        Some(p),
    )?;
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("invariants exit {}", code))?;

    let field = Field::new(4).unwrap();
    let norm = |s: &str| parse_laurent(&field, s).unwrap().to_string();
    let expected = [
        ("top", "t - 1"),
        ("right", "1/2*(1 + t^-1)"),
        ("left", "-1/2*(t + 1)"),
        ("bottom", "t^-1 - 1"),
    ];
    for (k, e) in expected {
        let got = rep["diagram"][k].as_str().unwrap_or("");
        ensure(got == norm(e), || {
            format!("diagram {}: {} != {}", k, got, norm(e))
        })?;
    }
    let points = rep["points"].as_array().cloned().unwrap_or_default();
    ensure(points.len() == 1, || {
        format!("{} support points", points.len())
    })?;
    let pt = &points[0];
    ensure(
        pt["point"] == 0 && pt["multiplicities"] == serde_json::json!([1]),
        || {
            format!(
                "expected one order-1 block at c = 1, got {} {}",
                pt["point"], pt["multiplicities"]
            )
        },
    )?;
    let tsig = pt["selected"]["tsig"].as_i64().unwrap_or(0);
    ensure(tsig.abs() == 1, || format!("|tsig| = {}", tsig.abs()))?;

    let mut flipped = file.clone();
    flipped["h"] = serde_json::json!([["-1/2 - 1/2*t^-1"]]);
    let fpath = dir.join("circle-flipped.json");
    std::fs::write(&fpath, flipped.to_string()).map_err(|e| e.to_string())?;
    let (frep, _) = run_cli(
        &["--deterministic", "invariants", "--trace", "dixmier+"],
        fpath.to_str(),
    )?;
    let ftsig = frep["points"][0]["selected"]["tsig"].as_i64().unwrap_or(0);
    ensure(ftsig == -tsig, || {
        format!("flipped tsig {} vs {}", ftsig, tsig)
    })?;
    let _ = std::fs::remove_dir_all(&dir);
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {:?}", elapsed)
    })?;
    Ok(format!(
        "four maps exact, c = 1 order 1, tsig {} -> {} on flip, {:?}",
        tsig, ftsig, elapsed
    ))
}

fn criterion_2(suite: &mut Suite) -> Check {
    let start = Instant::now();
    let field = suite.field.clone();
    let n = field.conductor() as i64;
    let forms = generate::enumerate_block_forms(0, 6);
    for (idx, f) in forms.iter().enumerate() {
        for q in 0..2u8 {
            let pt = (idx as i64 + q as i64) % n;
            let f = BlockForm::new(pt, &f.triples()).unwrap();
            let inst = instance(&field, f, q, None)?;
            ensure(inst.counts == inst.form.counts(), || {
                format!(
                    "exhaustive {:?} q={} recovered {:?}",
                    inst.form, q, inst.counts
                )
            })?;
            suite.exhaustive.push(inst);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let pt = rng.gen_range(0..n);
        let w = rng.gen_range(7..=12);
        let f = generate::random_block_form(&mut rng, pt, w, 5);
        let q = rng.gen_range(0..2u8);
        let scramble = f.total_multiplicity() <= 3 && rng.gen_bool(0.5);
        let mut srng = ChaCha8Rng::seed_from_u64(rng.gen());
        let inst = instance(&field, f, q, scramble.then_some(&mut srng))?;
        ensure(inst.counts == inst.form.counts(), || {
            format!("random {:?} q={} recovered {:?}", inst.form, q, inst.counts)
        })?;
        suite.random.push(inst);
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {:?}", elapsed)
    })?;
    Ok(format!(
        "{} exhaustive (weight <= 6, both parities) + {} random recovered exactly, {:?}",
        suite.exhaustive.len(),
        suite.random.len(),
        elapsed
    ))
}

fn criterion_3(suite: &Suite) -> Check {
    let mut n = 0;
    for inst in suite.all() {
        let r = InvariantReport::from_counts(inst.form.point(), inst.counts.clone());
        for t in TraceSpec::NORMAL {
            let heights = r.capacity(t).unwrap();
            let model = lib(capacity(&inst.form, t))?;
            ensure(heights == model, || {
                format!(
                    "{:?} under {}: heights {:?} vs blocks {:?}",
                    inst.form, t, heights, model
                )
            })?;
            n += 1;
        }
    }
    Ok(format!("{} (instance, trace) comparisons equal", n))
}

fn criterion_4(suite: &Suite) -> Check {
    for inst in suite.all() {
        let s = InvariantReport::from_counts(inst.form.point(), inst.counts.clone()).signatures;
        let plus = lib(tsig(&inst.form, TraceSpec::DixmierPlus))?;
        let minus = lib(tsig(&inst.form, TraceSpec::DixmierMinus))?;
        ensure(
            plus == s.sigma_ev + s.sigma_odd && s.tsig_plus == plus,
            || {
                format!(
                    "{:?}: tsig+ {} vs {} + {}",
                    inst.form, plus, s.sigma_ev, s.sigma_odd
                )
            },
        )?;
        ensure(
            minus == s.sigma_ev - s.sigma_odd && s.tsig_minus == minus,
            || {
                format!(
                    "{:?}: tsig- {} vs {} - {}",
                    inst.form, minus, s.sigma_ev, s.sigma_odd
                )
            },
        )?;
        ensure(
            (plus + minus) % 2 == 0 && plus + minus == 2 * s.sigma_ev,
            || format!("{:?}: tsig+ + tsig- = {}", inst.form, plus + minus),
        )?;
    }
    Ok(format!(
        "{} instances: block-model tsig equals sigma_ev +- sigma_odd",
        suite.all().count()
    ))
}

fn criterion_5(suite: &Suite) -> Check {
    for inst in suite.all() {
        let r = InvariantReport::from_counts(inst.form.point(), inst.counts.clone());
        let (p, m) = r.capacity(TraceSpec::Interior).unwrap();
        let overall = (1..=inst.counts.max_order())
            .filter(|&j| inst.counts.n(j, 1) + inst.counts.n(j, -1) > 0)
            .max()
            .unwrap_or(0);
        ensure(p.max(m) == overall, || {
            format!("{:?}: max({}, {}) != {}", inst.form, p, m, overall)
        })?;
    }
    Ok(format!("{} instances", suite.all().count()))
}

fn criterion_6(suite: &Suite) -> Check {
    let mut hyperbolic = 0;
    for inst in &suite.exhaustive {
        if hyperbolic_test(&inst.form) {
            hyperbolic += 1;
            let r = InvariantReport::from_counts(inst.form.point(), inst.counts.clone());
            for t in TraceSpec::NORMAL {
                let (p, m) = r.capacity(t).unwrap();
                ensure(p == m, || {
                    format!("hyperbolic {:?} under {}: ({}, {})", inst.form, t, p, m)
                })?;
            }
        }
    }
    let field = &suite.field;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..200 {
        let pt = rng.gen_range(0..CONDUCTOR as i64);
        let q = rng.gen_range(0..2u8);
        let w = rng.gen_range(1..=6);
        let f = generate::random_block_form(&mut rng, pt, w, 4);
        let w = rng.gen_range(1..=6);
        let g = generate::random_block_form(&mut rng, pt, w, 4);
        let pf = lib(synthesize(&f, field, q))?;
        let pg = lib(synthesize(&g, field, q))?;
        let (_, sum_counts) = pipeline(&lib(pf.direct_sum(&pg))?, pt)?;
        let sum = lib(perp_sum(&f, &g))?;
        ensure(sum_counts == sum.counts(), || {
            format!("{:?} + {:?}: sum counts differ", f, g)
        })?;
        let rs = InvariantReport::from_counts(pt, sum_counts);
        let rf = InvariantReport::from_counts(pt, f.counts());
        let rg = InvariantReport::from_counts(pt, g.counts());
        for t in TraceSpec::NORMAL {
            let (a, b, c) = (
                rs.capacity(t).unwrap(),
                rf.capacity(t).unwrap(),
                rg.capacity(t).unwrap(),
            );
            ensure(a == (b.0.max(c.0), b.1.max(c.1)), || {
                format!(
                    "{:?} + {:?} under {}: {:?} vs max of {:?}, {:?}",
                    f, g, t, a, b, c
                )
            })?;
        }
        for t in TraceSpec::DIXMIER {
            let (a, b, c) = (
                rs.signatures.under(t).unwrap(),
                rf.signatures.under(t).unwrap(),
                rg.signatures.under(t).unwrap(),
            );
            ensure(a == b + c, || {
                format!("{:?} + {:?} under {}: tsig {} != {} + {}", f, g, t, a, b, c)
            })?;
        }
    }
    Ok(format!(
        "{} hyperbolic forms with c+ = c-; 200 sums obey the max rule and tsig additivity",
        hyperbolic
    ))
}

fn random_invertible(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> KMatrix {
    loop {
        let rows: Vec<Vec<_>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        if rng.gen_bool(0.8) {
                            field.integer(rng.gen_range(-2..=2))
                        } else {
                            field.zeta(rng.gen_range(0..field.conductor() as i64))
                        }
                    })
                    .collect()
            })
            .collect();
        let m = KMatrix::from_rows(field, n, &rows);
        if m.inverse().is_some() {
            return m;
        }
    }
}

fn criterion_7(suite: &Suite) -> Check {
    let mut symmetric = 0;
    for inst in suite.all() {
        ensure(inst.linking.is_hermitian(), || {
            format!("{:?} q={}: gram not Hermitian", inst.form, inst.q)
        })?;
        symmetric += 1;
    }
    let mut inflations = 0;
    for inst in suite
        .exhaustive
        .iter()
        .filter(|i| !i.form.is_empty())
        .step_by(4)
    {
        let an = inst.pres.analyze();
        let local = lib(an.at_point(inst.form.point()))?;
        let gens = local.generators();
        for (x, _) in &gens {
            for (y, _) in &gens {
                let base = lib(local.pair(x, y))?;
                let m = lib(local.solve(y))?.m;
                for extra in [1, 3] {
                    let sol = lib(local.solve_with(y, m + extra))?;
                    let v = lib(local.pair_with_solution(x, &sol))?;
                    ensure(v == base, || {
                        format!(
                            "{:?}: inflation by {} changes the pairing",
                            inst.form, extra
                        )
                    })?;
                    inflations += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let field = &suite.field;
    for n in 0..100 {
        let pt = rng.gen_range(0..CONDUCTOR as i64);
        let q = rng.gen_range(0..2u8);
        let w = rng.gen_range(1..=5);
        let f = generate::random_block_form(&mut rng, pt, w, 3);
        let base = f.counts();
        let counts = if n % 2 == 0 && f.total_multiplicity() <= 3 {
            let (p, _) = lib(generate::scramble(
                &lib(synthesize(&f, field, q))?,
                &mut rng,
            ))?;
            pipeline(&p, pt)?.1
        } else {
            let e = lib(blocks::to_linking_form(&f, field, q))?.expand();
            let p = random_invertible(field, e.dim(), &mut rng);
            let c = e.congruent(&p).ok_or("singular congruence")?;
            ensure(c.gram().len() == e.dim(), || "dimension changed".into())?;
            lib(expanded_signature_counts(&c))?.counts
        };
        ensure(counts == base, || {
            format!("congruence {} of {:?} changed counts to {:?}", n, f, counts)
        })?;
    }
    Ok(format!(
        "{} Hermitian grams, {} inflated pairings, 100 congruences invariant",
        symmetric, inflations
    ))
}

fn metabolizers(rng: &mut ChaCha8Rng, f: &BlockForm, tries: usize) -> Vec<SubobjectSpec> {
    let m = BlockModule::new(f);
    let mut out = vec![metabolizer(f)];
    let d = diagonal_metabolizer(f);
    if d != out[0] {
        out.push(d);
    }
    for _ in 0..tries {
        let s = generate::random_subobject(rng, f);
        if let Ok(y) = m.submodule(&s) {
            if m.is_metabolizer(&y) {
                out.push(s);
            }
        }
    }
    out
}

fn criterion_8(suite: &Suite) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut bounds = 0;
    for _ in 0..300 {
        let pt = rng.gen_range(0..CONDUCTOR as i64);
        let w = rng.gen_range(1..=7);
        let f = generate::random_block_form(&mut rng, pt, w, 4);
        let sub = generate::random_subobject(&mut rng, &f);
        for t in TraceSpec::DIXMIER {
            let e = lib(blocks::excess(&f, &sub, t))?;
            ensure(e.bounds_hold(), || {
                format!("{:?} {:?} under {}: {:?}", f, sub, t, e)
            })?;
            bounds += 1;
        }
    }
    let (mut zero_excess_iff, mut definite, mut vanishing, mut zero_excess) = (0, 0, 0, 0);
    for inst in suite.exhaustive.iter().filter(|i| i.q == 0) {
        let f = &inst.form;
        for sub in metabolizers(&mut rng, f, 6) {
            for t in TraceSpec::DIXMIER {
                let e = lib(blocks::excess(f, &sub, t))?;
                ensure(e.is_metabolizer, || {
                    format!("{:?}: {:?} is not a metabolizer", f, sub)
                })?;
                ensure((e.excess == 0) == (2 * e.tdim_sub == e.tdim_total), || {
                    format!(
                        "zero excess not equivalent to half tdim for {:?} {:?} under {}: {:?}",
                        f, sub, t, e
                    )
                })?;
                zero_excess_iff += 1;
                let parts = blocks::split(f);
                let neg_visible = blocks::tdim_part(&parts.negative, t);
                let pos_visible = blocks::tdim_part(&parts.positive, t);
                if !f.is_empty() && (neg_visible == 0 || pos_visible == 0) {
                    ensure(e.excess == tdim(f, t), || {
                        format!(
                            "excess below tdim for definite {:?} {:?} under {}: {:?}",
                            f, sub, t, e
                        )
                    })?;
                    definite += 1;
                }
                if e.excess == 0 {
                    zero_excess += 1;
                    ensure(lib(tsig(f, t))? == 0, || {
                        format!(
                            "nonzero tsig with zero-excess metabolizer {:?} {:?} under {}",
                            f, sub, t
                        )
                    })?;
                }
                vanishing += 1;
            }
        }
    }
    ensure(zero_excess > 0 && definite > 0, || "vacuous checks".into())?;
    Ok(format!(
        "{} bound checks; {} metabolizer half-tdim checks; {} definite maximal-excess cases; {} tsig vanishing checks ({} zero-excess)",
        bounds, zero_excess_iff, definite, vanishing, zero_excess
    ))
}

fn criterion_9() -> Check {
    let field = Field::new(CONDUCTOR).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let kinds = [PairKind::Metabolic, PairKind::Zero, PairKind::Mixed];
    let mut positives = 0;
    for n in 0..50 {
        let kind = kinds[n % 3];
        let inst = lib(generate::pair_instance(
            &field,
            &mut rng,
            kind,
            Control::None,
            (n / 3 % 2) as u8,
        ))?;
        let r = lib(verify_boundary_pair(&inst.pair))?;
        ensure(r.congruent(), || {
            format!(
                "instance {} ({:?}) not congruent: {:?}",
                n,
                kind,
                r.witness()
            )
        })?;
        if kind == PairKind::Metabolic {
            ensure(r.metabolic() && r.discriminant_empty(), || {
                format!("instance {} not metabolic", n)
            })?;
        }
        if n < 6 {
            let src = Source::new("pair", generate::pair_file(&inst.pair).to_string());
            let opts = Options {
                conductor: CONDUCTOR,
                deterministic: true,
            };
            let out = commands::pair_verify(&src, &opts).map_err(|e| e.to_string())?;
            ensure(out.report["congruent"] == true, || {
                format!("CLI disagrees on instance {}", n)
            })?;
        }
        positives += 1;
    }
    let controls = [
        (Control::NegateBoundary, PairKind::Zero),
        (Control::NegateBoundary, PairKind::Mixed),
        (Control::DropSubobject, PairKind::Metabolic),
        (Control::DropSubobject, PairKind::Mixed),
        (Control::NonIsotropic, PairKind::Metabolic),
        (Control::NonIsotropic, PairKind::Mixed),
    ];
    let mut detected = 0;
    for n in 0..30 {
        let (control, kind) = controls[n % controls.len()];
        let inst = lib(generate::pair_instance(
            &field,
            &mut rng,
            kind,
            control,
            (n / 6 % 2) as u8,
        ))?;
        let r = lib(verify_boundary_pair(&inst.pair))?;
        ensure(!r.congruent() && r.witness().is_some(), || {
            format!(
                "negative control {} ({:?}, {:?}) not detected",
                n, control, kind
            )
        })?;
        detected += 1;
    }
    Ok(format!(
        "{} positive instances congruent; {} negative controls detected",
        positives, detected
    ))
}

fn criterion_10() -> Check {
    let one = Rational::from_integer(1.into());
    let mut matched = 0;
    for k in 1..=5 {
        for sign in [1i8, -1] {
            for side in [ProfileSide::Both, ProfileSide::Left, ProfileSide::Right] {
                let m = lib(SteppedCircleModule::new(
                    Vec::new(),
                    vec![Profile { k, sign, side }],
                ))?;
                let got = lib(circle_capacities(&m, &one))?;
                let trace = match side {
                    ProfileSide::Both => TraceSpec::Interior,
                    ProfileSide::Left => TraceSpec::Terminal,
                    ProfileSide::Right => TraceSpec::Initial,
                };
                let f = BlockForm::new(0, &[(k, sign, 1)]).unwrap();
                let want = lib(capacity(&f, trace))?;
                ensure(got == want, || {
                    format!(
                        "profile ({}, {}, {}): {:?} vs {:?}",
                        k,
                        sign,
                        side.name(),
                        got,
                        want
                    )
                })?;
                matched += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 0..100 {
        let cells: Vec<Cell> = (0..rng.gen_range(1..=8))
            .map(|_| {
                let den = rng.gen_range(2..=12i64);
                let mut num = rng.gen_range(-den..=den);
                if num == 0 {
                    num = 1;
                }
                Cell {
                    mu: Rational::new(rng.gen_range(1..=5).into(), rng.gen_range(1..=4).into()),
                    f: Angle::PiMultiple(Rational::new(num.into(), den.into())),
                }
            })
            .collect();
        let m = lib(SteppedCircleModule::new(cells, Vec::new()))?;
        let eps = Rational::new(rng.gen_range(1..=8).into(), 2.into());
        let (p, q) = lib(spectral_densities(&m, &eps))?;
        ensure(p.is_non_decreasing() && q.is_non_decreasing(), || {
            format!("instance {} not monotone", n)
        })?;
        let (fp, fq) = lib(spectral_densities(&m.negated(), &eps))?;
        ensure(p.same_steps(&fq) && q.same_steps(&fp), || {
            format!("instance {}: f -> -f does not swap", n)
        })?;
        for _ in 0..5 {
            let lam = Rational::new(rng.gen_range(0..=10).into(), 10.into());
            ensure(p.step_value(&lam) == fq.step_value(&lam), || {
                format!("instance {}: F+ != F- of -f", n)
            })?;
        }
    }
    Ok(format!(
        "{} profiles match block capacities; 100 step modules monotone and swap-symmetric",
        matched
    ))
}

fn criterion_11() -> Check {
    let field = Field::new(4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let start = Instant::now();
    for n in 0..500 {
        let rows = rng.gen_range(1..=6);
        let cols = rng.gen_range(1..=6);
        let entries: Vec<Vec<LaurentPoly>> = (0..rows)
            .map(|_| {
                (0..cols)
                    .map(|_| {
                        if rng.gen_bool(0.25) {
                            LaurentPoly::zero(&field)
                        } else {
                            let terms = rng.gen_range(1..=3);
                            generate::random_laurent(&field, &mut rng, 2, terms)
                        }
                    })
                    .collect()
            })
            .collect();
        let a = lib(LaurentMatrix::from_rows(&field, entries))?;
        let snf = smith_normal_form(&a);
        ensure(snf.verify(&a), || {
            format!("matrix {} ({}x{}) fails U A V = D checks", n, rows, cols)
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || {
        format!("took {:?}", elapsed)
    })?;
    Ok(format!("500 matrices up to 6x6 verified, {:?}", elapsed))
}

fn main() {
    let mut suite = Suite {
        field: Field::new(CONDUCTOR).unwrap(),
        exhaustive: Vec::new(),
        random: Vec::new(),
    };
    let mut failed = 0;
    let mut total = 0;
    let mut run = |n: usize, name: &str, tol: &str, f: &mut dyn FnMut() -> Check| {
        let start = Instant::now();
        let r = f();
        let t = start.elapsed();
        total += 1;
        match r {
            Ok(msg) => println!(
                "criterion {:>2} PASS [{}] {}: {} ({:.2?})",
                n, tol, name, msg, t
            ),
            Err(msg) => {
                failed += 1;
                println!(
                    "criterion {:>2} FAIL [{}] {}: {} ({:.2?})",
                    n, tol, name, msg, t
                );
            }
        }
    };
    run(1, "circle reproduction", "exact, < 1 s", &mut criterion_1);
    run(2, "round-trip fidelity", "exact, < 60 s", &mut || {
        criterion_2(&mut suite)
    });
    run(
        3,
        "capacities: heights vs block model",
        "exact",
        &mut || criterion_3(&suite),
    );
    run(4, "torsion signature identities", "exact", &mut || {
        criterion_4(&suite)
    });
    run(5, "overall capacity", "exact", &mut || criterion_5(&suite));
    run(
        6,
        "hyperbolic forms, max rule, additivity",
        "exact",
        &mut || criterion_6(&suite),
    );
    run(
        7,
        "Hermitian symmetry and well-definedness",
        "exact",
        &mut || criterion_7(&suite),
    );
    run(8, "excess bounds and metabolizers", "exact", &mut || {
        criterion_8(&suite)
    });
    run(
        9,
        "induced vs discriminant forms",
        "exact",
        &mut criterion_9,
    );
    run(10, "circle spectral densities", "exact", &mut criterion_10);
    run(11, "Smith normal form", "exact, < 120 s", &mut criterion_11);

    println!("{} of {} criteria passed", total - failed, total);
    if failed > 0 {
        std::process::exit(1);
    }
}
