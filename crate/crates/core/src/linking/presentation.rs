use super::form::TorsionLinkingForm;
use super::germ::GermValue;
use super::series::PowerSeries;
use crate::error::{Error, Result};
use crate::linalg::{
    smith_normal_form, torsion_decompose, LaurentMatrix, SmithDecomposition, TorsionDecomposition,
};
use crate::scalars::{Cyc, Field, LaurentPoly};

/// A square `A: F1 -> F0` together with `H: F0 -> F1*` satisfying
/// `H A = (-1)^(q+1) A^dag H^dag`.
///
/// The torsion part of `coker A` carries the pairing
/// `L(x, y) = u^dag H x / conj(s)^m` where `s^m y = A u` and `s = t - c`.
/// It is linear in `x`, antilinear in `y`, and `L(y, x) = (-1)^(q+1) conj L(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityPresentation {
    pub a: LaurentMatrix,
    pub h: LaurentMatrix,
    pub q_parity: u8,
}

impl DualityPresentation {
    pub fn new(a: LaurentMatrix, h: LaurentMatrix, q_parity: u8) -> Result<Self> {
        if h.rows() != a.cols() || h.cols() != a.rows() {
            return Err(Error::Dimension(format!(
                "A is {}x{} so H must be {}x{}, got {}x{}",
                a.rows(),
                a.cols(),
                a.cols(),
                a.rows(),
                h.rows(),
                h.cols()
            )));
        }
        Ok(DualityPresentation {
            a,
            h,
            q_parity: q_parity % 2,
        })
    }

    pub fn empty(field: &Field, q_parity: u8) -> Self {
        DualityPresentation {
            a: LaurentMatrix::zeros(field, 0, 0),
            h: LaurentMatrix::zeros(field, 0, 0),
            q_parity: q_parity % 2,
        }
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    /// `(-1)^(q+1)`
    pub fn epsilon(&self) -> i64 {
        if self.q_parity == 0 {
            -1
        } else {
            1
        }
    }

    /// Exact check of the compatibility identity.
    pub fn validate(&self) -> Result<()> {
        let lhs = &self.h * &self.a;
        let rhs = &self.a.dagger() * &self.h.dagger();
        let rhs = if self.epsilon() < 0 { -rhs } else { rhs };
        for i in 0..lhs.rows() {
            for j in 0..lhs.cols() {
                if lhs[(i, j)] != rhs[(i, j)] {
                    return Err(Error::PresentationViolation { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn negate_h(&self) -> Self {
        DualityPresentation {
            a: self.a.clone(),
            h: -&self.h,
            q_parity: self.q_parity,
        }
    }

    pub fn direct_sum(&self, other: &DualityPresentation) -> Result<Self> {
        if self.q_parity != other.q_parity {
            return Err(Error::Dimension("parities differ".into()));
        }
        Ok(DualityPresentation {
            a: self.a.direct_sum(&other.a),
            h: self.h.direct_sum(&other.h),
            q_parity: self.q_parity,
        })
    }

    /// The isomorphic presentation `(P A Q, Q^dag H P^-1)` for unimodular `P`, `Q`.
    pub fn change_basis(
        &self,
        p: &LaurentMatrix,
        p_inv: &LaurentMatrix,
        q: &LaurentMatrix,
    ) -> Result<Self> {
        let a = (p.checked_mul(&self.a)?).checked_mul(q)?;
        let h = (q.dagger().checked_mul(&self.h)?).checked_mul(p_inv)?;
        Self::new(a, h, self.q_parity)
    }

    pub fn torsion_decompose(&self) -> TorsionDecomposition {
        torsion_decompose(&self.a)
    }

    pub fn analyze(&self) -> Analysis<'_> {
        Analysis {
            pres: self,
            snf: smith_normal_form(&self.a),
        }
    }
}

/// A presentation with its Smith decomposition.
pub struct Analysis<'a> {
    pres: &'a DualityPresentation,
    snf: SmithDecomposition,
}

impl<'a> Analysis<'a> {
    pub fn presentation(&self) -> &DualityPresentation {
        self.pres
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.snf
    }

    pub fn at_point(&self, point: i64) -> Result<LocalPresentation<'_>> {
        let field = self.pres.field();
        let n = field.conductor() as i64;
        if !(0..n).contains(&point) {
            return Err(Error::InvalidPoint(point));
        }
        let c = field.zeta(point);
        let lin = LaurentPoly::linear(&c);
        let rank = self.snf.rank();
        let mut ks = Vec::with_capacity(rank);
        let mut rs = Vec::with_capacity(rank);
        for d in self.snf.diagonal.iter().take(rank) {
            let mut r = d.clone();
            let mut k = 0;
            while let Some(q) = r.exact_div(&lin) {
                r = q;
                k += 1;
            }
            ks.push(k);
            rs.push(r);
        }
        Ok(LocalPresentation {
            analysis: self,
            point,
            c,
            ks,
            rs,
        })
    }
}

/// A local solution `s^m y = A u`, with `u` known modulo `s^m`.
#[derive(Clone, Debug)]
pub struct LocalSolution {
    pub m: usize,
    pub u: Vec<PowerSeries>,
}

/// The presentation localized at `c = zeta_N^point`.
pub struct LocalPresentation<'a> {
    analysis: &'a Analysis<'a>,
    point: i64,
    c: Cyc,
    ks: Vec<usize>,
    rs: Vec<LaurentPoly>,
}

impl LocalPresentation<'_> {
    pub fn point(&self) -> i64 {
        self.point
    }

    fn field(&self) -> &Field {
        self.analysis.pres.field()
    }

    /// Generators `U^-1 e_i` of the `(t - c)`-primary part with their orders.
    pub fn generators(&self) -> Vec<(Vec<LaurentPoly>, usize)> {
        let u_inv = &self.analysis.snf.u_inv;
        self.ks
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| (u_inv.col(i), k))
            .collect()
    }

    fn check_dims(&self, v: &[LaurentPoly]) -> Result<()> {
        if v.len() != self.analysis.pres.a.rows() {
            return Err(Error::Dimension(format!(
                "expected a column of length {}, got {}",
                self.analysis.pres.a.rows(),
                v.len()
            )));
        }
        Ok(())
    }

    /// Smith coordinates `U y`, checking that `y` is torsion at `c`.
    fn smith_coords(&self, y: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
        self.check_dims(y)?;
        let z = self.analysis.snf.u.mul_vec(y);
        if z.iter().skip(self.ks.len()).any(|x| !x.is_zero()) {
            return Err(Error::NotTorsion { point: self.point });
        }
        Ok(z)
    }

    /// Smallest `m` with `s^m y` in the image of `A` locally, and a solution `u`.
    pub fn solve(&self, y: &[LaurentPoly]) -> Result<LocalSolution> {
        let z = self.smith_coords(y)?;
        let mut m = 0;
        for (zi, &k) in z.iter().zip(&self.ks) {
            if zi.is_zero() || k == 0 {
                continue;
            }
            let v = zi.valuation_at(&self.c).unwrap_or(0);
            m = m.max(k.saturating_sub(v));
        }
        self.solve_with_order(&z, m)
    }

    /// As [`solve`](Self::solve) with a prescribed (possibly non-minimal) order.
    pub fn solve_with(&self, y: &[LaurentPoly], m: usize) -> Result<LocalSolution> {
        let z = self.smith_coords(y)?;
        let minimal = self.solve(y)?.m;
        if m < minimal {
            return Err(Error::NotTorsion { point: self.point });
        }
        self.solve_with_order(&z, m)
    }

    fn solve_with_order(&self, z: &[LaurentPoly], m: usize) -> Result<LocalSolution> {
        let field = self.field().clone();
        let snf = &self.analysis.snf;
        let ncols = snf.v.rows();
        let mut w = vec![PowerSeries::zero(&field, m); ncols];
        for (i, (&k, r)) in self.ks.iter().zip(&self.rs).enumerate() {
            if z[i].is_zero() {
                continue;
            }
            // w_i = s^(m-k) z_i / r_i
            let zi = PowerSeries::expand(&z[i], &self.c, k).shift(m as i64 - k as i64);
            let ri = PowerSeries::expand(r, &self.c, m).inv().expect("unit at c");
            w[i] = &zi * &ri;
        }
        let mut u = Vec::with_capacity(ncols);
        for j in 0..ncols {
            let mut acc = PowerSeries::zero(&field, m);
            for (i, wi) in w.iter().enumerate().take(self.ks.len()) {
                let vji = &snf.v[(j, i)];
                if vji.is_zero() || wi.is_zero() {
                    continue;
                }
                acc = &acc + &(&PowerSeries::expand(vji, &self.c, m) * wi);
            }
            u.push(acc);
        }
        Ok(LocalSolution { m, u })
    }

    /// `L(x, y)` for a precomputed solution of `y`.
    pub fn pair_with_solution(&self, x: &[LaurentPoly], sol: &LocalSolution) -> Result<GermValue> {
        self.check_dims(x)?;
        let field = self.field().clone();
        let m = sol.m;
        if m == 0 {
            return Ok(GermValue::zero(&field, self.point));
        }
        let hx = self.analysis.pres.h.mul_vec(x);
        let mut acc = PowerSeries::zero(&field, m);
        for (uj, hj) in sol.u.iter().zip(&hx) {
            if uj.is_zero() || hj.is_zero() {
                continue;
            }
            let term = &uj.involution(&self.c) * &PowerSeries::expand(hj, &self.c, m);
            acc = &acc + &term;
        }
        // 1 / conj(s)^m = (-c^2)^m (1 + conj(c) s)^m / s^m
        let c = &self.c;
        let mut lin = vec![field.one(), c.conj()];
        lin.resize(m.max(2), field.zero());
        lin.truncate(m);
        let factor = PowerSeries::from_coeffs(&field, lin)
            .pow(m)
            .scale(&(-(c * c)).pow(m as u64));
        let num = &acc * &factor;
        Ok(GermValue::from_numerator(self.point, &num, m))
    }

    pub fn pair(&self, x: &[LaurentPoly], y: &[LaurentPoly]) -> Result<GermValue> {
        let sol = self.solve(y)?;
        self.pair_with_solution(x, &sol)
    }

    /// Coordinates of `x` in the basis `s^l g_i` of the primary part, ordered by
    /// generator then by `l`.
    pub fn coordinates(&self, x: &[LaurentPoly]) -> Result<Vec<Cyc>> {
        let z = self.smith_coords(x)?;
        let mut out = Vec::new();
        for (zi, &k) in z.iter().zip(&self.ks) {
            if k == 0 {
                continue;
            }
            let ser = PowerSeries::expand(zi, &self.c, k);
            out.extend(ser.coeffs().iter().cloned());
        }
        Ok(out)
    }

    /// The linking form on the chosen generators.
    pub fn form(&self) -> Result<TorsionLinkingForm> {
        let gens = self.generators();
        let sols: Vec<LocalSolution> = gens
            .iter()
            .map(|(g, _)| self.solve(g))
            .collect::<Result<_>>()?;
        let gram = gens
            .iter()
            .map(|(x, _)| {
                sols.iter()
                    .map(|sol| self.pair_with_solution(x, sol))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        TorsionLinkingForm::new(
            self.field(),
            self.point,
            self.analysis.pres.q_parity,
            gens.iter().map(|g| g.1).collect(),
            gram,
        )
    }
}

/// `L(x, y)` at `c = zeta_N^point`.
pub fn linking_pairing(
    p: &DualityPresentation,
    x: &[LaurentPoly],
    y: &[LaurentPoly],
    point: i64,
) -> Result<GermValue> {
    let an = p.analyze();
    let local = an.at_point(point)?;
    local.pair(x, y)
}

/// The linking form at one point, on a block basis of the primary part.
pub fn gram_at_point(p: &DualityPresentation, point: i64) -> Result<TorsionLinkingForm> {
    let an = p.analyze();
    let local = an.at_point(point)?;
    local.form()
}

/// Discriminant forms of a weakly nondegenerate `(-1)^q`-Hermitian matrix, one
/// per support point.
pub fn discriminant_form(i: &LaurentMatrix, q_parity: u8) -> Result<Vec<TorsionLinkingForm>> {
    let pres = discriminant_presentation(i, q_parity)?;
    let dec = pres.torsion_decompose();
    let an = pres.analyze();
    dec.support()
        .into_iter()
        .map(|pt| an.at_point(pt)?.form())
        .collect()
}

/// `(A, H) = (I, 1)` with linking parity `q + 1`.
pub fn discriminant_presentation(i: &LaurentMatrix, q_parity: u8) -> Result<DualityPresentation> {
    let field = i.field();
    if !i.is_square() {
        return Err(Error::Dimension(
            "intersection matrix must be square".into(),
        ));
    }
    let dag = i.dagger();
    let expect = if q_parity % 2 == 0 { dag } else { -dag };
    if *i != expect {
        return Err(Error::NotHermitian(format!(
            "(-1)^{}-Hermitian",
            q_parity % 2
        )));
    }
    if crate::linalg::determinant(i).is_zero() {
        return Err(Error::Singular);
    }
    DualityPresentation::new(
        i.clone(),
        LaurentMatrix::identity(field, i.rows()),
        (q_parity + 1) % 2,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_laurent;

    fn m1(f: &Field, s: &str) -> LaurentMatrix {
        LaurentMatrix::from_rows(f, vec![vec![parse_laurent(f, s).unwrap()]]).unwrap()
    }

    fn circle(f: &Field) -> DualityPresentation {
        DualityPresentation::new(m1(f, "t - 1"), m1(f, "1/2 + 1/2*t^-1"), 0).unwrap()
    }

    #[test]
    fn circle_validates() {
        let f = Field::new(4).unwrap();
        assert!(circle(&f).validate().is_ok());
        let bad = DualityPresentation::new(m1(&f, "t - 1"), m1(&f, "1"), 0).unwrap();
        assert_eq!(
            bad.validate(),
            Err(Error::PresentationViolation { row: 0, col: 0 })
        );
        assert!(DualityPresentation::empty(&f, 0).validate().is_ok());
    }

    #[test]
    fn circle_pairing() {
        let f = Field::new(4).unwrap();
        let p = circle(&f);
        let one = vec![LaurentPoly::one(&f)];
        let g = linking_pairing(&p, &one, &one, 0).unwrap();
        assert_eq!(g.beta(), &[f.integer(-1)]);
        let image = vec![parse_laurent(&f, "t - 1").unwrap()];
        assert!(linking_pairing(&p, &image, &one, 0).unwrap().is_zero());
        assert!(linking_pairing(&p, &one, &image, 0).unwrap().is_zero());
    }

    #[test]
    fn inflated_order_gives_same_value() {
        let f = Field::new(12).unwrap();
        let c = "z{2}";
        let a = LaurentMatrix::diagonal(
            &f,
            &[
                parse_laurent(&f, &format!("(t - {c})^2")).unwrap(),
                parse_laurent(&f, &format!("(t - {c})")).unwrap(),
            ],
        );
        // any H works for the pairing formula itself
        let h = LaurentMatrix::from_rows(
            &f,
            vec![
                vec![
                    parse_laurent(&f, "t + 3").unwrap(),
                    parse_laurent(&f, "1").unwrap(),
                ],
                vec![
                    parse_laurent(&f, "z1").unwrap(),
                    parse_laurent(&f, "t^-1").unwrap(),
                ],
            ],
        )
        .unwrap();
        let p = DualityPresentation::new(a, h, 1).unwrap();
        let an = p.analyze();
        let local = an.at_point(2).unwrap();
        let y = vec![
            parse_laurent(&f, "2 + t").unwrap(),
            parse_laurent(&f, "t^2").unwrap(),
        ];
        let x = vec![
            parse_laurent(&f, "1").unwrap(),
            parse_laurent(&f, "z5").unwrap(),
        ];
        let base = local.pair(&x, &y).unwrap();
        for extra in 1..3 {
            let sol = local.solve_with(&y, 2 + extra).unwrap();
            assert_eq!(local.pair_with_solution(&x, &sol).unwrap(), base);
        }
    }

    #[test]
    fn not_torsion_is_rejected() {
        let f = Field::new(4).unwrap();
        let a = LaurentMatrix::zeros(&f, 1, 1);
        let p = DualityPresentation::new(a, m1(&f, "1"), 0).unwrap();
        let one = vec![LaurentPoly::one(&f)];
        assert_eq!(
            linking_pairing(&p, &one, &one, 0),
            Err(Error::NotTorsion { point: 0 })
        );
    }

    #[test]
    fn discriminant_rejects_bad_input() {
        let f = Field::new(4).unwrap();
        assert_eq!(
            discriminant_form(&m1(&f, "t"), 0),
            Err(Error::NotHermitian("(-1)^0-Hermitian".into()))
        );
        assert_eq!(discriminant_form(&m1(&f, "0"), 0), Err(Error::Singular));
        assert!(discriminant_form(&m1(&f, "1"), 0).unwrap().is_empty());
    }
}
