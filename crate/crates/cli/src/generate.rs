//! Seeded generators for inputs and randomized instances.

use rand::Rng;
use serde_json::{json, Value};

use l2link::blocks::{diagonal_metabolizer, BlockForm, SubGenerator, SubobjectSpec};
use l2link::circle::circle_diagram;
use l2link::linalg::LaurentMatrix;
use l2link::linking::{discriminant_presentation, DualityPresentation};
use l2link::pairs::PairData;
use l2link::scalars::{Field, LaurentPoly};
use l2link::Result;

use crate::error::CliError;
use crate::report;

/// The circle complex: `d_1 = t - 1` with duality `(1 + t^-1)/2`.
pub fn circle_complex(conductor: u32) -> Result<Value> {
    let field = Field::new(conductor)?;
    let d = circle_diagram(&field);
    Ok(json!({
        "conductor": conductor,
        "q": 0,
        "boundaries": [[[d.top.to_string()]]],
        "h": [[d.right.to_string()]],
        "labels": ["C_0", "C_1"],
    }))
}

/// Parse `2+,1-,1+x3` into `(k, sign, multiplicity)` triples.
pub fn parse_block_list(src: &str) -> std::result::Result<Vec<(usize, i8, usize)>, CliError> {
    let bad =
        |item: &str| CliError::Usage(format!("bad block '{}', expected e.g. 2+ or 1-x3", item));
    let mut out = Vec::new();
    for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (body, mult) = match item.split_once('x') {
            Some((b, m)) => (b, m.parse::<usize>().map_err(|_| bad(item))?),
            None => (item, 1),
        };
        let sign = match body.chars().last() {
            Some('+') => 1,
            Some('-') => -1,
            _ => return Err(bad(item)),
        };
        let k = body[..body.len() - 1]
            .parse::<usize>()
            .map_err(|_| bad(item))?;
        out.push((k, sign, mult));
    }
    Ok(out)
}

/// A presentation file for a block form, optionally scrambled by random
/// unimodular changes of basis.
pub fn blocks_file<R: Rng>(
    field: &Field,
    f: &BlockForm,
    q: u32,
    rng: Option<&mut R>,
) -> Result<Value> {
    let mut p = l2link::blocks::synthesize(f, field, (q % 2) as u8)?;
    if let Some(rng) = rng {
        p = scramble(&p, rng)?.0;
    }
    Ok(presentation_file(field, &p, q))
}

pub fn presentation_file(field: &Field, p: &DualityPresentation, q: u32) -> Value {
    json!({
        "conductor": field.conductor(),
        "q": q,
        "presentation": { "a": report::matrix(&p.a), "h": report::matrix(&p.h) },
    })
}

fn random_unit<R: Rng>(field: &Field, rng: &mut R) -> LaurentPoly {
    let n = field.conductor() as i64;
    let c = field.zeta(rng.gen_range(0..n));
    LaurentPoly::monomial(c, rng.gen_range(-1..=1))
}

/// A small random Laurent polynomial with integer and root-of-unity coefficients.
pub fn random_laurent<R: Rng>(
    field: &Field,
    rng: &mut R,
    max_deg: i64,
    terms: usize,
) -> LaurentPoly {
    let n = field.conductor() as i64;
    let mut p = LaurentPoly::zero(field);
    for _ in 0..terms {
        let e = rng.gen_range(-max_deg..=max_deg);
        let c = if rng.gen_bool(0.7) {
            field.integer(rng.gen_range(-3..=3))
        } else {
            field.zeta(rng.gen_range(0..n))
        };
        p = &p + &LaurentPoly::monomial(c, e);
    }
    p
}

/// A random unimodular `P` and its inverse, built from elementary operations.
pub fn random_unimodular<R: Rng>(
    field: &Field,
    n: usize,
    rng: &mut R,
) -> (LaurentMatrix, LaurentMatrix) {
    let mut p = LaurentMatrix::identity(field, n);
    let mut p_inv = LaurentMatrix::identity(field, n);
    if n == 0 {
        return (p, p_inv);
    }
    for _ in 0..2 * n + 1 {
        let i = rng.gen_range(0..n);
        if n > 1 && rng.gen_bool(0.7) {
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let f = random_laurent(field, rng, 1, 1);
            // row_i += f row_j; inverse subtracts column i times f from column j
            for c in 0..n {
                let v = &f * &p[(j, c)];
                p[(i, c)] = &p[(i, c)] + &v;
                let w = &p_inv[(c, i)] * &f;
                p_inv[(c, j)] = &p_inv[(c, j)] - &w;
            }
        } else {
            let u = random_unit(field, rng);
            let ui = u.unit_inverse().expect("monomial");
            for c in 0..n {
                p[(i, c)] = &u * &p[(i, c)];
                p_inv[(c, i)] = &p_inv[(c, i)] * &ui;
            }
        }
    }
    (p, p_inv)
}

/// `(P A Q, Q^dag H P^-1)` for random unimodular `P`, `Q`; returns `P` too.
pub fn scramble<R: Rng>(
    p: &DualityPresentation,
    rng: &mut R,
) -> Result<(DualityPresentation, LaurentMatrix)> {
    let field = p.field().clone();
    let (pm, pm_inv) = random_unimodular(&field, p.a.rows(), rng);
    let (qm, _) = random_unimodular(&field, p.a.cols(), rng);
    Ok((p.change_basis(&pm, &pm_inv, &qm)?, pm))
}

/// A random block form at `point` with `sum k * multiplicity <= weight`.
pub fn random_block_form<R: Rng>(
    rng: &mut R,
    point: i64,
    weight: usize,
    max_k: usize,
) -> BlockForm {
    let mut items = Vec::new();
    let mut left = weight;
    while left > 0 {
        let k = rng.gen_range(1..=max_k.min(left));
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        items.push((k, sign, 1));
        left -= k;
        if rng.gen_bool(0.15) {
            break;
        }
    }
    BlockForm::new(point, &items).expect("valid blocks")
}

/// Every block form at `point` with `sum k * multiplicity <= max_weight`.
pub fn enumerate_block_forms(point: i64, max_weight: usize) -> Vec<BlockForm> {
    let kinds: Vec<(usize, i8)> = (1..=max_weight).flat_map(|k| [(k, 1), (k, -1)]).collect();
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(
        kinds: &[(usize, i8)],
        idx: usize,
        left: usize,
        point: i64,
        current: &mut Vec<(usize, i8, usize)>,
        out: &mut Vec<BlockForm>,
    ) {
        if idx == kinds.len() {
            out.push(BlockForm::new(point, current).expect("valid blocks"));
            return;
        }
        let (k, s) = kinds[idx];
        for m in 0..=left / k {
            if m > 0 {
                current.push((k, s, m));
            }
            rec(kinds, idx + 1, left - m * k, point, current, out);
            if m > 0 {
                current.pop();
            }
        }
    }
    rec(&kinds, 0, max_weight, point, &mut current, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// Unimodular intersection matrix and a metabolizer.
    Metabolic,
    /// `X = 0` and a boundary equal to the discriminant form.
    Zero,
    /// A discriminant part plus a metabolic part.
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    None,
    /// Negate the duality map on the discriminant part.
    NegateBoundary,
    /// Drop the subobject of the metabolic part.
    DropSubobject,
    /// Replace the subobject by a non-isotropic one.
    NonIsotropic,
}

#[derive(Clone, Debug)]
pub struct PairInstance {
    pub pair: PairData,
    pub expect_congruent: bool,
    pub kind: PairKind,
    pub control: Control,
}

fn random_point<R: Rng>(field: &Field, rng: &mut R) -> i64 {
    rng.gen_range(0..field.conductor() as i64)
}

/// A `(-1)^q`-Hermitian intersection matrix `diag(h_j (t - c_j)^k_j)`.
fn random_intersection<R: Rng>(
    field: &Field,
    rng: &mut R,
    q: u8,
    blocks: usize,
) -> Result<LaurentMatrix> {
    let link = (q + 1) % 2;
    let mut diag = Vec::new();
    for _ in 0..blocks {
        let k = rng.gen_range(1..=3);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let f = BlockForm::new(random_point(field, rng), &[(k, sign, 1)])?;
        let p = l2link::blocks::synthesize(&f, field, link)?;
        diag.push(&p.h[(0, 0)] * &p.a[(0, 0)]);
    }
    Ok(LaurentMatrix::diagonal(field, &diag))
}

fn unimodular_intersection(field: &Field, q: u8) -> LaurentMatrix {
    let u = if q == 0 { field.one() } else { field.i() };
    LaurentMatrix::diagonal(field, &[LaurentPoly::constant(u)])
}

/// Hyperbolic pairs and even singles, with a metabolizer of integral levels.
fn metabolic_part<R: Rng>(field: &Field, rng: &mut R) -> (BlockForm, SubobjectSpec) {
    let point = random_point(field, rng);
    let mut items = Vec::new();
    for _ in 0..rng.gen_range(1..=2) {
        let k = rng.gen_range(1..=3);
        if k % 2 == 0 && rng.gen_bool(0.5) {
            items.push((k, if rng.gen_bool(0.5) { 1 } else { -1 }, 1));
        } else {
            items.push((k, 1, 1));
            items.push((k, -1, 1));
        }
    }
    let f = BlockForm::new(point, &items).expect("valid blocks");
    let sub = diagonal_metabolizer(&f);
    (f, sub)
}

/// A synthesized pair instance, scrambled by unimodular changes of basis.
pub fn pair_instance<R: Rng>(
    field: &Field,
    rng: &mut R,
    kind: PairKind,
    control: Control,
    q: u8,
) -> Result<PairInstance> {
    let q = q % 2;
    let link = (q + 1) % 2;
    let intersection = match kind {
        PairKind::Metabolic => unimodular_intersection(field, q),
        PairKind::Zero | PairKind::Mixed => {
            let n = if control == Control::NegateBoundary {
                1
            } else {
                rng.gen_range(1..=2)
            };
            random_intersection(field, rng, q, n)?
        }
    };
    let mut boundary = discriminant_presentation(&intersection, q)?;
    if control == Control::NegateBoundary {
        boundary = boundary.negate_h();
    }
    let offset = boundary.a.rows();
    let mut x: Vec<Vec<LaurentPoly>> = Vec::new();
    let metabolic = match kind {
        PairKind::Zero => None,
        PairKind::Metabolic | PairKind::Mixed => Some(metabolic_part(field, rng)),
    };
    if let Some((f, sub)) = metabolic {
        let sub = match control {
            Control::DropSubobject => SubobjectSpec::default(),
            Control::NonIsotropic => {
                SubobjectSpec::new(vec![SubGenerator::graded(f.copies().len() - 1, 0)])
            }
            _ => sub,
        };
        let part = PairData::from_blocks(field, &[(f, sub)], intersection.clone(), q)?;
        for col in part.x {
            let mut v = vec![LaurentPoly::zero(field); offset];
            v.extend(col);
            x.push(v);
        }
        boundary = boundary.direct_sum(&part.boundary)?;
    }
    debug_assert_eq!(boundary.q_parity, link);
    let (boundary, p) = scramble(&boundary, rng)?;
    let x = x.iter().map(|v| p.mul_vec(v)).collect();
    let expect_congruent = control == Control::None;
    Ok(PairInstance {
        pair: PairData::new(boundary, x, intersection, q)?,
        expect_congruent,
        kind,
        control,
    })
}

pub fn pair_file(p: &PairData) -> Value {
    let field = p.boundary.field();
    json!({
        "conductor": field.conductor(),
        "q": p.q_parity,
        "intersection": report::matrix(&p.intersection),
        "boundary": { "a": report::matrix(&p.boundary.a), "h": report::matrix(&p.boundary.h) },
        "x": p.x.iter().map(|v| v.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

/// Random generators `u^level * sum ±e_copy` on one or two copies.
pub fn random_subobject<R: Rng>(rng: &mut R, f: &BlockForm) -> SubobjectSpec {
    let copies = f.copies();
    if copies.is_empty() {
        return SubobjectSpec::default();
    }
    let mut gens = Vec::new();
    for _ in 0..rng.gen_range(1..=copies.len()) {
        let a = rng.gen_range(0..copies.len());
        let mut coeffs = vec![(a, 1)];
        if copies.len() > 1 && rng.gen_bool(0.4) {
            let b = (a + rng.gen_range(1..copies.len())) % copies.len();
            coeffs.push((b, if rng.gen_bool(0.5) { 1 } else { -1 }));
        }
        let top = coeffs
            .iter()
            .map(|&(c, _)| 2 * copies[c].0)
            .min()
            .unwrap_or(0);
        gens.push(SubGenerator {
            level: rng.gen_range(0..=top),
            coeffs,
        });
    }
    SubobjectSpec::new(gens)
}
