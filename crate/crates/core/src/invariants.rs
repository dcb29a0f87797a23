//! Local invariants of torsion linking forms: the `g`-expansion, the counts
//! `n_j^±(c)`, height numbers, Novikov-Shubin capacities and torsion
//! signatures.

use crate::error::{Error, Result};
use crate::linalg::KMatrix;
use crate::linking::{ExpandedForm, GermValue, TorsionLinkingForm};
use crate::scalars::Cyc;
use crate::trace::TraceSpec;

/// Coefficients `alpha_1..alpha_m` of `v = sum alpha_j g^j` with
/// `g = i c (t - c)^-1`.
pub fn g_expand(v: &GermValue) -> Vec<Cyc> {
    let f = v.field();
    let ic_inv = (&f.i() * &v.c()).inv().expect("ic is a unit");
    let mut scale = f.one();
    v.beta()
        .iter()
        .map(|b| {
            scale = &scale * &ic_inv;
            b * &scale
        })
        .collect()
}

/// Turns a `(-1)^(q+1)`-Hermitian value into a Hermitian one: multiplies by
/// `-i` when `q` is even.
pub fn hermitize(x: &Cyc, q_parity: u8) -> Cyc {
    if q_parity % 2 == 0 {
        -(&x.field().i() * x)
    } else {
        x.clone()
    }
}

pub fn hermitize_matrix(m: &KMatrix, q_parity: u8) -> KMatrix {
    if q_parity % 2 == 0 {
        m.scale(&-m.field().i())
    } else {
        m.clone()
    }
}

/// Numbers `n_j^+` and `n_j^-`, stored at index `j - 1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignatureCounts {
    n_plus: Vec<usize>,
    n_minus: Vec<usize>,
}

impl SignatureCounts {
    pub fn new(mut n_plus: Vec<usize>, mut n_minus: Vec<usize>) -> Self {
        let len = n_plus.len().max(n_minus.len());
        n_plus.resize(len, 0);
        n_minus.resize(len, 0);
        while n_plus.last() == Some(&0) && n_minus.last() == Some(&0) {
            n_plus.pop();
            n_minus.pop();
        }
        SignatureCounts { n_plus, n_minus }
    }

    /// From `(j, sign, count)` triples; repeated keys add up.
    pub fn from_triples(items: impl IntoIterator<Item = (usize, i8, usize)>) -> Self {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for (j, sign, n) in items {
            assert!(j >= 1, "orders start at 1");
            let v = if sign > 0 { &mut plus } else { &mut minus };
            if v.len() < j {
                v.resize(j, 0);
            }
            v[j - 1] += n;
        }
        Self::new(plus, minus)
    }

    pub fn n(&self, j: usize, sign: i8) -> usize {
        if j == 0 {
            return 0;
        }
        let v = if sign > 0 {
            &self.n_plus
        } else {
            &self.n_minus
        };
        v.get(j - 1).copied().unwrap_or(0)
    }

    pub fn n_plus(&self) -> &[usize] {
        &self.n_plus
    }

    pub fn n_minus(&self) -> &[usize] {
        &self.n_minus
    }

    /// Largest `j` with a nonzero count.
    pub fn max_order(&self) -> usize {
        self.n_plus.len()
    }

    pub fn is_zero(&self) -> bool {
        self.n_plus.is_empty()
    }

    /// `sum_j j (n_j^+ + n_j^-)`, the dimension of a nondegenerate form.
    pub fn weighted_total(&self) -> usize {
        (1..=self.max_order())
            .map(|j| j * (self.n(j, 1) + self.n(j, -1)))
            .sum()
    }

    /// Counts with `+` and `-` exchanged.
    pub fn swapped(&self) -> Self {
        SignatureCounts {
            n_plus: self.n_minus.clone(),
            n_minus: self.n_plus.clone(),
        }
    }

    pub fn add(&self, other: &SignatureCounts) -> Self {
        let len = self.max_order().max(other.max_order());
        let plus = (1..=len).map(|j| self.n(j, 1) + other.n(j, 1)).collect();
        let minus = (1..=len).map(|j| self.n(j, -1) + other.n(j, -1)).collect();
        Self::new(plus, minus)
    }

    /// Nonzero entries as `(j, sign, count)`.
    pub fn triples(&self) -> Vec<(usize, i8, usize)> {
        let mut out = Vec::new();
        for j in 1..=self.max_order() {
            for sign in [1i8, -1] {
                let n = self.n(j, sign);
                if n > 0 {
                    out.push((j, sign, n));
                }
            }
        }
        out
    }
}

/// The adic data of a linking form at one point.
#[derive(Clone, Debug)]
pub struct AdicInvariants {
    pub point: i64,
    /// `dim T_j` for `j = 1..=height`.
    pub filtration_dims: Vec<usize>,
    /// Hermitized `alpha_j` on a basis of `T_j`.
    pub alpha_forms: Vec<KMatrix>,
    pub counts: SignatureCounts,
    pub dimension: usize,
}

impl AdicInvariants {
    pub fn is_nondegenerate(&self) -> bool {
        self.counts.weighted_total() == self.dimension
    }
}

pub fn signature_counts(l: &TorsionLinkingForm) -> Result<AdicInvariants> {
    expanded_signature_counts(&l.expand())
}

pub fn expanded_signature_counts(e: &ExpandedForm) -> Result<AdicInvariants> {
    let field = e.field();
    let dims = e.filtration_dims();
    let height = if e.dim() == 0 { 0 } else { dims.len() };
    let c = field.zeta(e.point());
    let ic_inv = (&field.i() * &c).inv().expect("unit");
    let mut alpha_forms = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for j in 1..=height {
        let basis = e.filtration_space(j);
        let scale = ic_inv.pow(j as u64);
        let rows: Vec<Vec<Cyc>> = basis
            .iter()
            .map(|a| {
                basis
                    .iter()
                    .map(|b| hermitize(&(&e.pair(a, b).coeff(j) * &scale), e.q_parity()))
                    .collect()
            })
            .collect();
        let m = KMatrix::from_rows(field, basis.len(), &rows);
        let inertia = m
            .inertia()
            .map_err(|_| Error::NotHermitian(format!("alpha_{} at point {}", j, e.point())))?;
        plus.push(inertia.positive);
        minus.push(inertia.negative);
        alpha_forms.push(m);
    }
    Ok(AdicInvariants {
        point: e.point(),
        filtration_dims: if height == 0 { Vec::new() } else { dims },
        alpha_forms,
        counts: SignatureCounts::new(plus, minus),
        dimension: e.dim(),
    })
}

/// Height numbers; maxima over empty sets are 0.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct HeightNumbers {
    pub h_odd: usize,
    pub h_ev_plus: usize,
    pub h_ev_minus: usize,
    pub h_odd_plus: usize,
    pub h_odd_minus: usize,
}

pub fn heights(counts: &SignatureCounts) -> HeightNumbers {
    let top = |even: bool, sign: i8| {
        (1..=counts.max_order())
            .filter(|j| (j % 2 == 0) == even && counts.n(*j, sign) > 0)
            .max()
            .unwrap_or(0)
    };
    let h_odd_plus = top(false, 1);
    let h_odd_minus = top(false, -1);
    HeightNumbers {
        h_odd: h_odd_plus.max(h_odd_minus),
        h_ev_plus: top(true, 1),
        h_ev_minus: top(true, -1),
        h_odd_plus,
        h_odd_minus,
    }
}

/// `(c_+, c_-)` for a normal trace.
pub fn capacities(h: &HeightNumbers, trace: TraceSpec) -> Result<(usize, usize)> {
    match trace {
        TraceSpec::Interior => Ok((h.h_odd.max(h.h_ev_plus), h.h_odd.max(h.h_ev_minus))),
        TraceSpec::Terminal => Ok((
            h.h_ev_plus.max(h.h_odd_minus),
            h.h_ev_minus.max(h.h_odd_plus),
        )),
        TraceSpec::Initial => Ok((
            h.h_ev_plus.max(h.h_odd_plus),
            h.h_ev_minus.max(h.h_odd_minus),
        )),
        other => Err(Error::UnsupportedTrace(format!(
            "capacities need a normal trace, got {}",
            other
        ))),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct TorsionSignatures {
    pub sigma_ev: i64,
    pub sigma_odd: i64,
    pub tsig_plus: i64,
    pub tsig_minus: i64,
}

impl TorsionSignatures {
    pub fn under(&self, trace: TraceSpec) -> Result<i64> {
        match trace {
            TraceSpec::DixmierPlus => Ok(self.tsig_plus),
            TraceSpec::DixmierMinus => Ok(self.tsig_minus),
            other => Err(Error::UnsupportedTrace(format!(
                "torsion signatures need a Dixmier trace, got {}",
                other
            ))),
        }
    }
}

pub fn torsion_signatures(counts: &SignatureCounts) -> TorsionSignatures {
    let mut sigma_ev = 0i64;
    let mut sigma_odd = 0i64;
    for j in 1..=counts.max_order() {
        let d = counts.n(j, 1) as i64 - counts.n(j, -1) as i64;
        if j % 2 == 0 {
            sigma_ev += d;
        } else {
            sigma_odd += d;
        }
    }
    TorsionSignatures {
        sigma_ev,
        sigma_odd,
        tsig_plus: sigma_ev + sigma_odd,
        tsig_minus: sigma_ev - sigma_odd,
    }
}

/// Everything computed at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub point: i64,
    pub counts: SignatureCounts,
    pub heights: HeightNumbers,
    /// `(trace, c_+, c_-)` for the three normal traces.
    pub capacities: Vec<(TraceSpec, usize, usize)>,
    pub signatures: TorsionSignatures,
}

impl InvariantReport {
    pub fn from_counts(point: i64, counts: SignatureCounts) -> Self {
        let h = heights(&counts);
        let capacities = TraceSpec::NORMAL
            .iter()
            .map(|&t| {
                let (p, m) = capacities(&h, t).expect("normal trace");
                (t, p, m)
            })
            .collect();
        let signatures = torsion_signatures(&counts);
        InvariantReport {
            point,
            counts,
            heights: h,
            capacities,
            signatures,
        }
    }

    pub fn capacity(&self, trace: TraceSpec) -> Option<(usize, usize)> {
        self.capacities
            .iter()
            .find(|c| c.0 == trace)
            .map(|c| (c.1, c.2))
    }
}

/// Reports for every support point of the form list, in point order.
pub fn report_forms(forms: &[TorsionLinkingForm]) -> Result<Vec<InvariantReport>> {
    let mut out = Vec::new();
    for l in forms {
        let inv = signature_counts(l)?;
        if !inv.is_nondegenerate() {
            return Err(Error::NotHermitian(format!(
                "degenerate linking form at point {}",
                l.point()
            )));
        }
        out.push(InvariantReport::from_counts(l.point(), inv.counts));
    }
    out.sort_by_key(|r| r.point);
    Ok(out)
}
