//! Orthogonal sums of the elementary forms `L_{k,±}`, given by `±(t - c)^k` on
//! a small interval around `c`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::invariants::SignatureCounts;
use crate::linalg::kmat::{span_basis, span_dim};
use crate::linalg::{KMatrix, LaurentMatrix};
use crate::linking::{gram_at_point, DualityPresentation, TorsionLinkingForm};
use crate::scalars::{sign_of_real, Cyc, Field, LaurentPoly};
use crate::trace::TraceSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// A multiset of blocks `(k, sign)` at the point `c = zeta_N^point`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockForm {
    point: i64,
    blocks: BTreeMap<(usize, i8), usize>,
}

impl BlockForm {
    pub fn empty(point: i64) -> Self {
        BlockForm {
            point,
            blocks: BTreeMap::new(),
        }
    }

    /// From `(k, sign, multiplicity)` triples; zero multiplicities are dropped
    /// and repeated keys add up.
    pub fn new(point: i64, items: &[(usize, i8, usize)]) -> Result<Self> {
        let mut f = Self::empty(point);
        for &(k, sign, mult) in items {
            if k == 0 {
                return Err(Error::Dimension("block order must be at least 1".into()));
            }
            if sign != 1 && sign != -1 {
                return Err(Error::Dimension(format!(
                    "block sign must be +1 or -1, got {}",
                    sign
                )));
            }
            if mult > 0 {
                *f.blocks.entry((k, sign)).or_insert(0) += mult;
            }
        }
        Ok(f)
    }

    pub fn from_counts(point: i64, counts: &SignatureCounts) -> Self {
        let mut f = Self::empty(point);
        for (j, sign, n) in counts.triples() {
            f.blocks.insert((j, sign), n);
        }
        f
    }

    pub fn point(&self) -> i64 {
        self.point
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn multiplicity(&self, k: usize, sign: i8) -> usize {
        self.blocks.get(&(k, sign)).copied().unwrap_or(0)
    }

    /// `(k, sign, multiplicity)` in increasing `k`, `+` before `-`.
    pub fn triples(&self) -> Vec<(usize, i8, usize)> {
        let mut out: Vec<_> = self.blocks.iter().map(|(&(k, s), &m)| (k, s, m)).collect();
        out.sort_by_key(|&(k, s, _)| (k, -s));
        out
    }

    /// One entry `(k, sign)` per copy, in the order of [`BlockForm::triples`].
    pub fn copies(&self) -> Vec<(usize, i8)> {
        self.triples()
            .into_iter()
            .flat_map(|(k, s, m)| std::iter::repeat_n((k, s), m))
            .collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.blocks.values().sum()
    }

    /// `sum k * multiplicity`, the dimension over `K`.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(|(&(k, _), &m)| k * m).sum()
    }

    pub fn counts(&self) -> SignatureCounts {
        SignatureCounts::from_triples(self.triples())
    }

    pub fn mirror(&self) -> Self {
        BlockForm {
            point: self.point,
            blocks: self
                .blocks
                .iter()
                .map(|(&(k, s), &m)| ((k, -s), m))
                .collect(),
        }
    }
}

pub fn perp_sum(f: &BlockForm, g: &BlockForm) -> Result<BlockForm> {
    if f.point != g.point {
        return Err(Error::PointMismatch(f.point, g.point));
    }
    let mut out = f.clone();
    for (&key, &m) in &g.blocks {
        *out.blocks.entry(key).or_insert(0) += m;
    }
    Ok(out)
}

/// Half-blocks `(side, k) -> multiplicity` of the positive and negative parts.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitParts {
    pub positive: BTreeMap<(Side, usize), usize>,
    pub negative: BTreeMap<(Side, usize), usize>,
}

impl SplitParts {
    pub fn part(&self, sign: i8) -> &BTreeMap<(Side, usize), usize> {
        if sign > 0 {
            &self.positive
        } else {
            &self.negative
        }
    }

    pub fn half_block_count(&self) -> usize {
        self.positive.values().sum::<usize>() + self.negative.values().sum::<usize>()
    }
}

/// `±(t - c)^k` has sign `±` to the right of `c` and `±(-1)^k` to the left.
pub fn split(f: &BlockForm) -> SplitParts {
    let mut parts = SplitParts::default();
    for (&(k, sign), &m) in &f.blocks {
        let left = if k % 2 == 0 { sign } else { -sign };
        for (side, s) in [(Side::Right, sign), (Side::Left, left)] {
            let target = if s > 0 {
                &mut parts.positive
            } else {
                &mut parts.negative
            };
            *target.entry((side, k)).or_insert(0) += m;
        }
    }
    parts
}

fn visible(trace: TraceSpec, side: Side) -> bool {
    match trace {
        TraceSpec::Interior => true,
        TraceSpec::Terminal | TraceSpec::DixmierMinus => side == Side::Left,
        TraceSpec::Initial | TraceSpec::DixmierPlus => side == Side::Right,
    }
}

/// `(c_+, c_-)` under a normal trace.
pub fn capacity(f: &BlockForm, trace: TraceSpec) -> Result<(usize, usize)> {
    if !trace.is_normal() {
        return Err(Error::UnsupportedTrace(format!(
            "capacity needs a normal trace, got {}",
            trace
        )));
    }
    let parts = split(f);
    let top = |sign: i8| {
        parts
            .part(sign)
            .keys()
            .filter(|(side, _)| visible(trace, *side))
            .map(|&(_, k)| k)
            .max()
            .unwrap_or(0)
    };
    Ok((top(1), top(-1)))
}

/// Torsion dimension of one split part; every visible half-block counts 1.
pub fn tdim_part(part: &BTreeMap<(Side, usize), usize>, trace: TraceSpec) -> usize {
    if trace.is_normal() {
        return 0;
    }
    part.iter()
        .filter(|((side, _), _)| visible(trace, *side))
        .map(|(_, &m)| m)
        .sum()
}

pub fn tdim(f: &BlockForm, trace: TraceSpec) -> usize {
    let parts = split(f);
    tdim_part(&parts.positive, trace) + tdim_part(&parts.negative, trace)
}

pub fn tsig(f: &BlockForm, trace: TraceSpec) -> Result<i64> {
    if !trace.is_dixmier() {
        return Err(Error::UnsupportedTrace(format!(
            "torsion signature needs a Dixmier trace, got {}",
            trace
        )));
    }
    let parts = split(f);
    Ok(tdim_part(&parts.positive, trace) as i64 - tdim_part(&parts.negative, trace) as i64)
}

pub fn hyperbolic_test(f: &BlockForm) -> bool {
    let ks: Vec<usize> = f.blocks.keys().map(|&(k, _)| k).collect();
    ks.iter()
        .all(|&k| f.multiplicity(k, 1) == f.multiplicity(k, -1))
}

/// One generator `(t - c)^(level/2) * sum coeff * e_copy` of a subobject.
///
/// Copies are indexed as in [`BlockForm::copies`]. Levels are counted in
/// half powers of `t - c`, so `level = 2k` is zero on a block of order `k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubGenerator {
    pub level: usize,
    pub coeffs: Vec<(usize, i64)>,
}

impl SubGenerator {
    pub fn graded(copy: usize, level: usize) -> Self {
        SubGenerator {
            level,
            coeffs: vec![(copy, 1)],
        }
    }

    pub fn diagonal(first: usize, second: usize, twist: i64, level: usize) -> Self {
        SubGenerator {
            level,
            coeffs: vec![(first, 1), (second, twist)],
        }
    }
}

/// A subobject given by generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SubobjectSpec {
    pub generators: Vec<SubGenerator>,
}

impl SubobjectSpec {
    pub fn new(generators: Vec<SubGenerator>) -> Self {
        SubobjectSpec { generators }
    }

    /// One graded generator per copy.
    pub fn graded(levels: &[usize]) -> Self {
        SubobjectSpec {
            generators: levels
                .iter()
                .enumerate()
                .map(|(c, &l)| SubGenerator::graded(c, l))
                .collect(),
        }
    }

    /// Levels are even, so every generator is an integral power of `t - c`.
    pub fn is_integral(&self) -> bool {
        self.generators.iter().all(|g| g.level % 2 == 0)
    }
}

/// The canonical metabolizer: `(t - c)^(k/2)` times every copy.
pub fn metabolizer(f: &BlockForm) -> SubobjectSpec {
    let levels: Vec<usize> = f.copies().iter().map(|&(k, _)| k).collect();
    SubobjectSpec::graded(&levels)
}

/// Pairs each `(k,+)` copy with a `(k,-)` copy on the diagonal; unmatched
/// copies get the canonical level.
pub fn diagonal_metabolizer(f: &BlockForm) -> SubobjectSpec {
    let copies = f.copies();
    let mut gens = Vec::new();
    let mut used = vec![false; copies.len()];
    for a in 0..copies.len() {
        if used[a] || copies[a].1 < 0 {
            continue;
        }
        if let Some(b) =
            (0..copies.len()).find(|&b| !used[b] && copies[b].0 == copies[a].0 && copies[b].1 < 0)
        {
            used[a] = true;
            used[b] = true;
            gens.push(SubGenerator::diagonal(a, b, 1, 0));
        }
    }
    for (c, &(k, _)) in copies.iter().enumerate() {
        if !used[c] {
            gens.push(SubGenerator::graded(c, k));
        }
    }
    SubobjectSpec::new(gens)
}

/// The block sum as a module over `Q[u]` with `u^2 = t - c`: copy `(k, ε)`
/// is `Q[u]/(u^2k)` with `<u^a e, u^b e> = ε u^(a+b-2k)` modulo `Q[u]`.
#[derive(Clone, Debug)]
pub struct BlockModule {
    field: Field,
    copies: Vec<(usize, i8)>,
    offsets: Vec<usize>,
    dim: usize,
    u: KMatrix,
    /// Coefficient of `u^-1` in the pairing.
    b: KMatrix,
}

impl BlockModule {
    pub fn new(f: &BlockForm) -> Self {
        let field = Field::new(4).expect("conductor 4");
        let copies = f.copies();
        let mut offsets = Vec::new();
        let mut dim = 0;
        for &(k, _) in &copies {
            offsets.push(dim);
            dim += 2 * k;
        }
        let mut u = KMatrix::zeros(&field, dim, dim);
        let mut b = KMatrix::zeros(&field, dim, dim);
        for (c, &(k, sign)) in copies.iter().enumerate() {
            let o = offsets[c];
            for a in 0..2 * k {
                if a + 1 < 2 * k {
                    u[(o + a + 1, o + a)] = field.one();
                }
                b[(o + a, o + 2 * k - 1 - a)] = field.integer(sign as i64);
            }
        }
        BlockModule {
            field,
            copies,
            offsets,
            dim,
            u,
            b,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn whole(&self) -> Vec<Vec<Cyc>> {
        (0..self.dim)
            .map(|a| {
                let mut e = vec![self.field.zero(); self.dim];
                e[a] = self.field.one();
                e
            })
            .collect()
    }

    fn generator_vector(&self, g: &SubGenerator) -> Result<Vec<Cyc>> {
        if g.coeffs.is_empty() {
            return Err(Error::InvalidSubobject(
                "generator without components".into(),
            ));
        }
        let mut v = vec![self.field.zero(); self.dim];
        for &(c, x) in &g.coeffs {
            let Some(&(k, _)) = self.copies.get(c) else {
                return Err(Error::InvalidSubobject(format!("no copy with index {}", c)));
            };
            if x == 0 {
                return Err(Error::InvalidSubobject(format!(
                    "zero coefficient on copy {}",
                    c
                )));
            }
            if g.level > 2 * k {
                return Err(Error::InvalidSubobject(format!(
                    "level {} exceeds 2k = {} on copy {}",
                    g.level,
                    2 * k,
                    c
                )));
            }
            if g.level < 2 * k {
                let idx = self.offsets[c] + g.level;
                v[idx] = &v[idx] + &self.field.integer(x);
            }
        }
        Ok(v)
    }

    /// Basis of the submodule generated by `sub`.
    pub fn submodule(&self, sub: &SubobjectSpec) -> Result<Vec<Vec<Cyc>>> {
        let mut all = Vec::new();
        for g in &sub.generators {
            let mut v = self.generator_vector(g)?;
            while v.iter().any(|x| !x.is_zero()) {
                all.push(v.clone());
                v = self.u.mul_vec(&v);
            }
        }
        Ok(span_basis(&self.field, self.dim, &all))
    }

    pub fn perp(&self, y: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
        if y.is_empty() {
            return self.whole();
        }
        let rows: Vec<Vec<Cyc>> = y.iter().map(|v| self.b.mul_vec(v)).collect();
        KMatrix::from_rows(&self.field, self.dim, &rows).kernel()
    }

    pub fn span_dim(&self, vs: &[Vec<Cyc>]) -> usize {
        span_dim(&self.field, self.dim, vs)
    }

    pub fn same_span(&self, a: &[Vec<Cyc>], b: &[Vec<Cyc>]) -> bool {
        let da = self.span_dim(a);
        let mut both = a.to_vec();
        both.extend(b.iter().cloned());
        da == self.span_dim(b) && da == self.span_dim(&both)
    }

    pub fn is_metabolizer(&self, y: &[Vec<Cyc>]) -> bool {
        self.same_span(y, &self.perp(y))
    }

    /// Minimal number of generators of `y`, i.e. `dim y/uy`.
    pub fn generator_count(&self, y: &[Vec<Cyc>]) -> usize {
        let uy: Vec<Vec<Cyc>> = y.iter().map(|v| self.u.mul_vec(v)).collect();
        self.span_dim(y) - self.span_dim(&uy)
    }

    /// Minimal number of generators of `X / y`.
    pub fn quotient_generator_count(&self, y: &[Vec<Cyc>]) -> usize {
        let mut all = y.to_vec();
        all.extend(self.whole().iter().map(|v| self.u.mul_vec(v)));
        self.dim - self.span_dim(&all)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcessReport {
    pub tdim_sub: usize,
    pub tdim_quotient: usize,
    pub tdim_total: usize,
    pub excess: usize,
    pub sub_dim: usize,
    pub annihilator_dim: usize,
    pub is_isotropic: bool,
    pub is_metabolizer: bool,
}

impl ExcessReport {
    pub fn bounds_hold(&self) -> bool {
        self.tdim_sub + self.tdim_quotient >= self.tdim_total
            && self.excess <= self.tdim_sub.min(self.tdim_quotient)
    }
}

/// `tdim Y + tdim X/Y - tdim X` under a Dixmier trace.
pub fn excess(f: &BlockForm, sub: &SubobjectSpec, trace: TraceSpec) -> Result<ExcessReport> {
    if !trace.is_dixmier() {
        return Err(Error::UnsupportedTrace(format!(
            "excess needs a Dixmier trace, got {}",
            trace
        )));
    }
    let m = BlockModule::new(f);
    let y = m.submodule(sub)?;
    let perp = m.perp(&y);
    let tdim_sub = m.generator_count(&y);
    let tdim_quotient = m.quotient_generator_count(&y);
    let tdim_total = tdim(f, trace);
    let sub_dim = y.len();
    let isotropic = {
        let mut both = perp.clone();
        both.extend(y.iter().cloned());
        m.span_dim(&both) == perp.len()
    };
    Ok(ExcessReport {
        tdim_sub,
        tdim_quotient,
        tdim_total,
        excess: (tdim_sub + tdim_quotient).saturating_sub(tdim_total),
        sub_dim,
        annihilator_dim: perp.len(),
        is_isotropic: isotropic,
        is_metabolizer: m.is_metabolizer(&y),
    })
}

/// The Laurent polynomial `p` and the scalar `h(c)` of the `H` entry for a
/// block of order `k`.
fn block_h(field: &Field, point: i64, k: usize, q_parity: u8) -> Result<LaurentPoly> {
    let c = field.zeta(point);
    let half = field.rational(num_rational::BigRational::new(1.into(), 2.into()));
    let (p, mu) = if k % 2 == 0 {
        (LaurentPoly::t_pow(field, -((k / 2) as i64)), field.one())
    } else {
        let lin = LaurentPoly::from_terms(field, [(0, field.one()), (1, c.conj())]);
        let p = &LaurentPoly::t_pow(field, -(k as i64 + 1) / 2) * &lin;
        (p.scale(&half), c.clone())
    };
    // H A = eps A^dag H^dag forces lambda = nu conj(lambda)
    let eps = if q_parity % 2 == 0 {
        -field.one()
    } else {
        field.one()
    };
    let nu = &(&eps * &(-c.conj()).pow(k as u64)) * &mu;
    let lambda = if nu.is_one() {
        field.one()
    } else if (&nu + &field.one()).is_zero() {
        field.i()
    } else {
        &nu + &field.one()
    };
    // alpha_k of the generator is h(c) (ic)^k, hermitized
    let hc = p.eval(&c);
    let alpha = &(&lambda * &hc) * &(&field.i() * &c).pow(k as u64);
    let alpha = crate::invariants::hermitize(&alpha, q_parity);
    let sign = sign_of_real(&alpha)?;
    let lambda = if sign > 0 { lambda } else { -lambda };
    Ok(p.scale(&lambda))
}

/// A presentation whose linking form at `c` is the given block sum.
pub fn synthesize(f: &BlockForm, field: &Field, q_parity: u8) -> Result<DualityPresentation> {
    let c = field.zeta(f.point);
    let s = LaurentPoly::linear(&c);
    let mut a = Vec::new();
    let mut h = Vec::new();
    for (k, sign) in f.copies() {
        a.push(s.pow(k as u32));
        let entry = block_h(field, f.point, k, q_parity)?;
        h.push(if sign > 0 { entry } else { -entry });
    }
    DualityPresentation::new(
        LaurentMatrix::diagonal(field, &a),
        LaurentMatrix::diagonal(field, &h),
        q_parity,
    )
}

pub fn to_linking_form(f: &BlockForm, field: &Field, q_parity: u8) -> Result<TorsionLinkingForm> {
    if f.is_empty() {
        return Ok(TorsionLinkingForm::empty(field, f.point, q_parity));
    }
    gram_at_point(&synthesize(f, field, q_parity)?, f.point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::signature_counts;

    fn bf(items: &[(usize, i8, usize)]) -> BlockForm {
        BlockForm::new(0, items).unwrap()
    }

    #[test]
    fn split_and_capacities() {
        let p = split(&bf(&[(1, 1, 1)]));
        assert_eq!(p.positive.get(&(Side::Right, 1)), Some(&1));
        assert_eq!(p.negative.get(&(Side::Left, 1)), Some(&1));
        assert!(split(&bf(&[(2, 1, 1)])).negative.is_empty());
        assert_eq!(
            capacity(&bf(&[(3, 1, 1)]), TraceSpec::Interior).unwrap(),
            (3, 3)
        );
        assert_eq!(
            capacity(&bf(&[(2, 1, 1)]), TraceSpec::Interior).unwrap(),
            (2, 0)
        );
        assert_eq!(
            capacity(&bf(&[(2, 1, 1)]), TraceSpec::Terminal).unwrap(),
            (2, 0)
        );
        assert_eq!(
            capacity(&bf(&[(1, 1, 1)]), TraceSpec::Terminal).unwrap(),
            (0, 1)
        );
        assert!(capacity(&bf(&[(1, 1, 1)]), TraceSpec::DixmierPlus).is_err());
    }

    #[test]
    fn signatures_and_hyperbolicity() {
        let f = bf(&[(2, 1, 1), (1, -1, 1)]);
        assert_eq!(tsig(&f, TraceSpec::DixmierPlus).unwrap(), 0);
        assert_eq!(tsig(&f, TraceSpec::DixmierMinus).unwrap(), 2);
        assert!(!hyperbolic_test(&f));
        assert!(hyperbolic_test(&bf(&[(1, 1, 1), (1, -1, 1)])));
        assert!(hyperbolic_test(&bf(&[(2, 1, 1), (2, -1, 1)])));
        let g = perp_sum(&f, &f.mirror()).unwrap();
        assert_eq!(tsig(&g, TraceSpec::DixmierPlus).unwrap(), 0);
        assert_eq!(tdim(&bf(&[(3, 1, 1)]), TraceSpec::DixmierPlus), 1);
        assert_eq!(tdim(&bf(&[(3, 1, 1)]), TraceSpec::Interior), 0);
    }

    #[test]
    fn excess_examples() {
        let f = bf(&[(1, 1, 1)]);
        let r = excess(&f, &metabolizer(&f), TraceSpec::DixmierPlus).unwrap();
        assert!(r.is_metabolizer);
        assert_eq!(r.excess, 1);
        let h = bf(&[(1, 1, 1), (1, -1, 1)]);
        let r = excess(&h, &diagonal_metabolizer(&h), TraceSpec::DixmierPlus).unwrap();
        assert!(r.is_metabolizer);
        assert_eq!(r.excess, 0);
        let whole = SubobjectSpec::graded(&[0, 0]);
        let r = excess(&h, &whole, TraceSpec::DixmierMinus).unwrap();
        assert_eq!(r.tdim_quotient, 0);
        assert_eq!(r.excess, 0);
        assert!(excess(&h, &SubobjectSpec::graded(&[3]), TraceSpec::DixmierPlus).is_err());
    }

    #[test]
    fn synthesized_blocks_round_trip() {
        let field = Field::new(8).unwrap();
        for q in 0..2 {
            for point in [0, 2, 3] {
                let f = BlockForm::new(point, &[(2, 1, 1), (1, -1, 1), (3, 1, 2)]).unwrap();
                let p = synthesize(&f, &field, q).unwrap();
                p.validate().unwrap();
                let inv = signature_counts(&gram_at_point(&p, point).unwrap()).unwrap();
                assert_eq!(inv.counts, f.counts());
            }
        }
    }

    #[test]
    fn circle_is_a_positive_block() {
        let field = Field::new(4).unwrap();
        let p = synthesize(&bf(&[(1, 1, 1)]), &field, 0).unwrap();
        assert_eq!(p.h[(0, 0)].to_string(), "1/2 + 1/2*t^-1");
    }
}
