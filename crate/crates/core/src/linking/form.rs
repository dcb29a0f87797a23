use super::germ::GermValue;
use crate::error::{Error, Result};
use crate::linalg::kmat::{jordan_chains, span_basis, span_dim};
use crate::linalg::KMatrix;
use crate::scalars::{Cyc, Field};

/// A torsion linking form at one point on cyclic generators `g_i` of orders
/// `orders[i]`, with `gram[i][j] = L(g_i, g_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionLinkingForm {
    field: Field,
    point: i64,
    q_parity: u8,
    orders: Vec<usize>,
    gram: Vec<Vec<GermValue>>,
}

impl TorsionLinkingForm {
    pub fn new(
        field: &Field,
        point: i64,
        q_parity: u8,
        orders: Vec<usize>,
        gram: Vec<Vec<GermValue>>,
    ) -> Result<Self> {
        let n = orders.len();
        if gram.len() != n || gram.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(
                "gram must be square over the generators".into(),
            ));
        }
        Ok(TorsionLinkingForm {
            field: field.clone(),
            point,
            q_parity: q_parity % 2,
            orders,
            gram,
        })
    }

    pub fn empty(field: &Field, point: i64, q_parity: u8) -> Self {
        TorsionLinkingForm {
            field: field.clone(),
            point,
            q_parity: q_parity % 2,
            orders: Vec::new(),
            gram: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn point(&self) -> i64 {
        self.point
    }

    pub fn q_parity(&self) -> u8 {
        self.q_parity
    }

    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn gram(&self) -> &[Vec<GermValue>] {
        &self.gram
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// `K`-dimension of the underlying module.
    pub fn dimension(&self) -> usize {
        self.orders.iter().sum()
    }

    /// `gram[i][j] == (-1)^(q+1) conj(gram[j][i])` for all entries.
    pub fn is_hermitian(&self) -> bool {
        let n = self.orders.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let c = self.gram[j][i].conj();
                let c = if self.q_parity == 0 { c.neg() } else { c };
                self.gram[i][j] == c
            })
        })
    }

    /// Entry orders are bounded by the orders of both generators.
    pub fn orders_bounded(&self) -> bool {
        let n = self.orders.len();
        (0..n)
            .all(|i| (0..n).all(|j| self.gram[i][j].order() <= self.orders[i].min(self.orders[j])))
    }

    pub fn negate(&self) -> Self {
        let mut f = self.clone();
        for row in &mut f.gram {
            for g in row.iter_mut() {
                *g = g.neg();
            }
        }
        f
    }

    pub fn expand(&self) -> ExpandedForm {
        let dim = self.dimension();
        let mut offsets = Vec::new();
        let mut acc = 0;
        for &k in &self.orders {
            offsets.push(acc);
            acc += k;
        }
        let mut shift = KMatrix::zeros(&self.field, dim, dim);
        for (g, &k) in self.orders.iter().enumerate() {
            for l in 0..k.saturating_sub(1) {
                shift[(offsets[g] + l + 1, offsets[g] + l)] = self.field.one();
            }
        }
        let mut gram = vec![vec![GermValue::zero(&self.field, self.point); dim]; dim];
        for (gi, &ki) in self.orders.iter().enumerate() {
            for (gj, &kj) in self.orders.iter().enumerate() {
                let base = &self.gram[gi][gj];
                for l in 0..ki {
                    for lp in 0..kj {
                        gram[offsets[gi] + l][offsets[gj] + lp] = base.shift_by(l, lp);
                    }
                }
            }
        }
        ExpandedForm {
            field: self.field.clone(),
            point: self.point,
            q_parity: self.q_parity,
            shift,
            gram,
        }
    }
}

/// A linking form on a finite-dimensional `K`-vector space: the action of
/// `s = t - c` as a nilpotent matrix and the germ-valued Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedForm {
    field: Field,
    point: i64,
    q_parity: u8,
    shift: KMatrix,
    gram: Vec<Vec<GermValue>>,
}

impl ExpandedForm {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn point(&self) -> i64 {
        self.point
    }

    pub fn q_parity(&self) -> u8 {
        self.q_parity
    }

    pub fn dim(&self) -> usize {
        self.shift.rows()
    }

    pub fn shift(&self) -> &KMatrix {
        &self.shift
    }

    pub fn gram(&self) -> &[Vec<GermValue>] {
        &self.gram
    }

    /// `L(v, w) = sum v_a conj(w_b) gram[a][b]`.
    pub fn pair(&self, v: &[Cyc], w: &[Cyc]) -> GermValue {
        let mut acc = GermValue::zero(&self.field, self.point);
        for (a, va) in v.iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            for (b, wb) in w.iter().enumerate() {
                if wb.is_zero() || self.gram[a][b].is_zero() {
                    continue;
                }
                acc = acc.add(&self.gram[a][b].scale(&(va * &wb.conj())));
            }
        }
        acc
    }

    /// Basis of `T_j = ker s^j`.
    pub fn filtration_space(&self, j: usize) -> Vec<Vec<Cyc>> {
        let n = self.dim();
        let mut p = KMatrix::identity(&self.field, n);
        for _ in 0..j {
            p = &p * &self.shift;
        }
        p.kernel()
    }

    /// `dim T_j` for `j = 1, 2, ...` until it stabilizes at the full dimension.
    pub fn filtration_dims(&self) -> Vec<usize> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut p = KMatrix::identity(&self.field, n);
        while out.last() != Some(&n) {
            p = &p * &self.shift;
            out.push(n - p.rank());
        }
        out
    }

    /// Largest `j` with a nonzero `s^(j-1)`, i.e. the maximal block order.
    pub fn height(&self) -> usize {
        if self.dim() == 0 {
            0
        } else {
            self.filtration_dims().len()
        }
    }

    /// Subspace `{v : L(v, x) = 0 for all x in xs}`.
    pub fn annihilator(&self, xs: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
        let n = self.dim();
        let mut rows: Vec<Vec<Cyc>> = Vec::new();
        for x in xs {
            let cols: Vec<GermValue> = (0..n)
                .map(|a| self.pair(&unit_vector(&self.field, n, a), x))
                .collect();
            let top = cols.iter().map(GermValue::order).max().unwrap_or(0);
            for j in 1..=top {
                rows.push(cols.iter().map(|g| g.coeff(j)).collect());
            }
        }
        if rows.is_empty() {
            return (0..n).map(|a| unit_vector(&self.field, n, a)).collect();
        }
        KMatrix::from_rows(&self.field, n, &rows).kernel()
    }

    pub fn is_isotropic(&self, xs: &[Vec<Cyc>]) -> bool {
        xs.iter()
            .all(|x| xs.iter().all(|y| self.pair(x, y).is_zero()))
    }

    /// Smallest `s`-invariant subspace containing `xs`.
    pub fn submodule(&self, xs: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
        let n = self.dim();
        let mut all: Vec<Vec<Cyc>> = Vec::new();
        for x in xs {
            let mut v = x.clone();
            while v.iter().any(|c| !c.is_zero()) {
                all.push(v.clone());
                v = self.shift.mul_vec(&v);
            }
        }
        span_basis(&self.field, n, &all)
    }

    /// The induced form on `outer / inner` for `s`-invariant subspaces with
    /// `inner` contained in `outer` and orthogonal to it.
    pub fn subquotient(&self, outer: &[Vec<Cyc>], inner: &[Vec<Cyc>]) -> ExpandedForm {
        let n = self.dim();
        let inner = span_basis(&self.field, n, inner);
        let mut current = inner.clone();
        let mut comp: Vec<Vec<Cyc>> = Vec::new();
        for v in outer {
            current.push(v.clone());
            if span_dim(&self.field, n, &current) == inner.len() + comp.len() + 1 {
                comp.push(v.clone());
            } else {
                current.pop();
            }
        }
        let q = comp.len();
        let mut cols = comp.clone();
        cols.extend(inner.iter().cloned());
        let basis = KMatrix::from_cols(&self.field, n, &cols);
        let mut shift = KMatrix::zeros(&self.field, q, q);
        for (j, v) in comp.iter().enumerate() {
            let sv = self.shift.mul_vec(v);
            let coeffs = basis.solve(&sv).expect("outer is s-invariant");
            for i in 0..q {
                shift[(i, j)] = coeffs[i].clone();
            }
        }
        let gram = comp
            .iter()
            .map(|a| comp.iter().map(|b| self.pair(a, b)).collect())
            .collect();
        ExpandedForm {
            field: self.field.clone(),
            point: self.point,
            q_parity: self.q_parity,
            shift,
            gram,
        }
    }

    /// Back to cyclic generators via a Jordan basis of `s`.
    pub fn to_linking_form(&self) -> TorsionLinkingForm {
        let chains = jordan_chains(&self.shift);
        let gens: Vec<&Vec<Cyc>> = chains.iter().map(|c| &c.0).collect();
        let gram = gens
            .iter()
            .map(|a| gens.iter().map(|b| self.pair(a, b)).collect())
            .collect();
        TorsionLinkingForm {
            field: self.field.clone(),
            point: self.point,
            q_parity: self.q_parity,
            orders: chains.iter().map(|c| c.1).collect(),
            gram,
        }
    }

    /// The same form on the basis given by the columns of an invertible `p`.
    pub fn congruent(&self, p: &KMatrix) -> Option<ExpandedForm> {
        let pinv = p.inverse()?;
        let shift = &(&pinv * &self.shift) * p;
        let cols: Vec<Vec<Cyc>> = (0..p.cols()).map(|j| p.col(j)).collect();
        let gram = cols
            .iter()
            .map(|a| cols.iter().map(|b| self.pair(a, b)).collect())
            .collect();
        Some(ExpandedForm {
            field: self.field.clone(),
            point: self.point,
            q_parity: self.q_parity,
            shift,
            gram,
        })
    }
}

pub(crate) fn unit_vector(field: &Field, n: usize, a: usize) -> Vec<Cyc> {
    let mut e = vec![field.zero(); n];
    e[a] = field.one();
    e
}
