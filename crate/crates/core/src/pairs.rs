//! Boundary pairs: an isotropic subobject `X` of a boundary linking form, the
//! induced form on `X^perp / X`, and its comparison with the discriminant form
//! of an intersection matrix.

use crate::blocks::{hyperbolic_test, synthesize, BlockForm, BlockModule, SubobjectSpec};
use crate::error::{Error, Result};
use crate::invariants::{expanded_signature_counts, SignatureCounts};
use crate::linalg::kmat::span_basis;
use crate::linalg::LaurentMatrix;
use crate::linking::{
    discriminant_presentation, DualityPresentation, ExpandedForm, TorsionLinkingForm,
};
use crate::scalars::{Cyc, Field, LaurentPoly};

/// `X^perp`, for `X` given by coordinate vectors.
pub fn annihilator(l: &ExpandedForm, x: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
    l.annihilator(&l.submodule(x))
}

pub fn isotropy_check(l: &ExpandedForm, x: &[Vec<Cyc>]) -> bool {
    l.is_isotropic(&l.submodule(x))
}

/// The form on `X^perp / X`.
pub fn induced_form(l: &ExpandedForm, x: &[Vec<Cyc>]) -> Result<ExpandedForm> {
    let sub = l.submodule(x);
    if !l.is_isotropic(&sub) {
        return Err(Error::NotIsotropic);
    }
    let perp = l.annihilator(&sub);
    Ok(l.subquotient(&perp, &sub))
}

pub fn induced_linking_form(l: &TorsionLinkingForm, x: &[Vec<Cyc>]) -> Result<TorsionLinkingForm> {
    Ok(induced_form(&l.expand(), x)?.to_linking_form())
}

/// A boundary linking form with a subobject `X` and an intersection matrix.
///
/// `boundary` presents the torsion linking form of the boundary, with parity
/// `q + 1`; the columns of `x` are elements of `coker boundary.a`; the
/// intersection matrix is `(-1)^q`-Hermitian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairData {
    pub boundary: DualityPresentation,
    pub x: Vec<Vec<LaurentPoly>>,
    pub intersection: LaurentMatrix,
    pub q_parity: u8,
}

impl PairData {
    pub fn new(
        boundary: DualityPresentation,
        x: Vec<Vec<LaurentPoly>>,
        intersection: LaurentMatrix,
        q_parity: u8,
    ) -> Result<Self> {
        let q_parity = q_parity % 2;
        if boundary.q_parity != (q_parity + 1) % 2 {
            return Err(Error::Dimension(format!(
                "boundary parity must be q + 1 = {}",
                (q_parity + 1) % 2
            )));
        }
        if let Some(bad) = x.iter().find(|v| v.len() != boundary.a.rows()) {
            return Err(Error::Dimension(format!(
                "subobject generators need length {}, got {}",
                boundary.a.rows(),
                bad.len()
            )));
        }
        Ok(PairData {
            boundary,
            x,
            intersection,
            q_parity,
        })
    }

    /// Boundary given by block forms and integral subobjects.
    pub fn from_blocks(
        field: &Field,
        parts: &[(BlockForm, SubobjectSpec)],
        intersection: LaurentMatrix,
        q_parity: u8,
    ) -> Result<Self> {
        let link = (q_parity + 1) % 2;
        let mut pres = DualityPresentation::empty(field, link);
        let mut x: Vec<Vec<LaurentPoly>> = Vec::new();
        for (f, sub) in parts {
            if !sub.is_integral() {
                return Err(Error::InvalidSubobject(
                    "presentations only carry integral levels".into(),
                ));
            }
            let p = synthesize(f, field, link)?;
            let offset = pres.a.rows();
            let copies = f.copies();
            let s = LaurentPoly::linear(&field.zeta(f.point()));
            for v in x.iter_mut() {
                v.extend(std::iter::repeat_n(LaurentPoly::zero(field), copies.len()));
            }
            for g in &sub.generators {
                let mut col = vec![LaurentPoly::zero(field); offset + copies.len()];
                for &(c, coeff) in &g.coeffs {
                    let Some(&(k, _)) = copies.get(c) else {
                        return Err(Error::InvalidSubobject(format!("no copy with index {}", c)));
                    };
                    if g.level > 2 * k {
                        return Err(Error::InvalidSubobject(format!(
                            "level {} exceeds 2k",
                            g.level
                        )));
                    }
                    let term = s.pow((g.level / 2) as u32).scale(&field.integer(coeff));
                    col[offset + c] = &col[offset + c] + &term;
                }
                x.push(col);
            }
            pres = pres.direct_sum(&p)?;
        }
        PairData::new(pres, x, intersection, q_parity)
    }
}

/// Invariants of the induced form and the discriminant form at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointComparison {
    pub point: i64,
    pub induced: SignatureCounts,
    pub discriminant: SignatureCounts,
    pub isotropic: bool,
    /// `X = X^perp` at this point.
    pub metabolic: bool,
}

impl PointComparison {
    pub fn congruent(&self) -> bool {
        self.isotropic && self.induced == self.discriminant
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryPairReport {
    pub points: Vec<PointComparison>,
    pub off_support: bool,
}

impl BoundaryPairReport {
    pub fn isotropic(&self) -> bool {
        self.points.iter().all(|p| p.isotropic)
    }

    pub fn congruent(&self) -> bool {
        self.points.iter().all(PointComparison::congruent)
    }

    pub fn metabolic(&self) -> bool {
        self.points.iter().all(|p| p.metabolic)
    }

    pub fn discriminant_empty(&self) -> bool {
        self.points.iter().all(|p| p.discriminant.is_zero())
    }

    /// First point where the invariants differ.
    pub fn witness(&self) -> Option<&PointComparison> {
        self.points.iter().find(|p| !p.congruent())
    }
}

/// Compares the form induced on `X^perp / X` with the discriminant form of the
/// intersection matrix at every support point of either.
pub fn verify_boundary_pair(pair: &PairData) -> Result<BoundaryPairReport> {
    let disc = discriminant_presentation(&pair.intersection, pair.q_parity)?;
    let b_dec = pair.boundary.torsion_decompose();
    let d_dec = disc.torsion_decompose();
    let mut support = b_dec.support();
    support.extend(d_dec.support());
    support.sort_unstable();
    support.dedup();
    let b_an = pair.boundary.analyze();
    let d_an = disc.analyze();
    let mut points = Vec::new();
    for pt in support {
        let local = b_an.at_point(pt)?;
        let form = local.form()?.expand();
        let xs: Vec<Vec<Cyc>> = pair
            .x
            .iter()
            .map(|v| local.coordinates(v))
            .collect::<Result<_>>()?;
        let sub = form.submodule(&xs);
        let isotropic = form.is_isotropic(&sub);
        let perp = form.annihilator(&sub);
        let metabolic = isotropic && perp.len() == sub.len();
        let induced = if isotropic {
            expanded_signature_counts(&form.subquotient(&perp, &sub))?.counts
        } else {
            SignatureCounts::default()
        };
        let d_form = d_an.at_point(pt)?.form()?;
        let discriminant = expanded_signature_counts(&d_form.expand())?.counts;
        points.push(PointComparison {
            point: pt,
            induced,
            discriminant,
            isotropic,
            metabolic,
        });
    }
    Ok(BoundaryPairReport {
        points,
        off_support: b_dec.has_off_support() || d_dec.has_off_support(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HyperbolicPairReport {
    pub plus_metabolizer: bool,
    pub minus_metabolizer: bool,
    pub trivial_intersection: bool,
    pub spans_whole: bool,
    pub hyperbolic: bool,
}

impl HyperbolicPairReport {
    pub fn complementary_metabolizers(&self) -> bool {
        self.plus_metabolizer
            && self.minus_metabolizer
            && self.trivial_intersection
            && self.spans_whole
    }

    /// Complementary metabolizers force a hyperbolic form.
    pub fn consistent(&self) -> bool {
        !self.complementary_metabolizers() || self.hyperbolic
    }
}

pub fn verify_hyperbolic_pair(
    f: &BlockForm,
    x_plus: &SubobjectSpec,
    x_minus: &SubobjectSpec,
) -> Result<HyperbolicPairReport> {
    let m = BlockModule::new(f);
    let yp = m.submodule(x_plus)?;
    let ym = m.submodule(x_minus)?;
    let mut both = yp.clone();
    both.extend(ym.iter().cloned());
    let sum_dim = m.span_dim(&both);
    Ok(HyperbolicPairReport {
        plus_metabolizer: m.is_metabolizer(&yp),
        minus_metabolizer: m.is_metabolizer(&ym),
        trivial_intersection: sum_dim == yp.len() + ym.len(),
        spans_whole: sum_dim == m.dim(),
        hyperbolic: hyperbolic_test(f),
    })
}

/// Annihilator of a subobject of a block form, as a basis in the block module.
pub fn block_annihilator(f: &BlockForm, sub: &SubobjectSpec) -> Result<Vec<Vec<Cyc>>> {
    let m = BlockModule::new(f);
    let y = m.submodule(sub)?;
    let field = Field::new(4)?;
    Ok(span_basis(&field, m.dim(), &m.perp(&y)))
}
