use std::fmt;

use super::series::PowerSeries;
use crate::scalars::{Cyc, Field};

/// A principal part `sum_j beta_j (t - c)^-j`, an element of `R / Lambda_c`
/// at `c = zeta_N^point`.
#[derive(Clone, PartialEq, Eq)]
pub struct GermValue {
    field: Field,
    point: i64,
    /// `beta[j - 1]` is the coefficient of `(t - c)^-j`; no trailing zeros.
    beta: Vec<Cyc>,
}

impl GermValue {
    pub fn zero(field: &Field, point: i64) -> Self {
        GermValue {
            field: field.clone(),
            point,
            beta: Vec::new(),
        }
    }

    pub fn new(field: &Field, point: i64, mut beta: Vec<Cyc>) -> Self {
        while beta.last().is_some_and(Cyc::is_zero) {
            beta.pop();
        }
        GermValue {
            field: field.clone(),
            point,
            beta,
        }
    }

    /// The principal part of `num / s^m` where `num` is known modulo `s^m`.
    pub fn from_numerator(point: i64, num: &PowerSeries, m: usize) -> Self {
        let beta = (1..=m).map(|j| num.coeff(m - j)).collect();
        Self::new(num.field(), point, beta)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn point(&self) -> i64 {
        self.point
    }

    pub fn c(&self) -> Cyc {
        self.field.zeta(self.point)
    }

    pub fn beta(&self) -> &[Cyc] {
        &self.beta
    }

    /// Coefficient of `(t - c)^-j`, zero beyond the order.
    pub fn coeff(&self, j: usize) -> Cyc {
        if j == 0 {
            return self.field.zero();
        }
        self.beta
            .get(j - 1)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.beta.is_empty()
    }

    /// Pole order.
    pub fn order(&self) -> usize {
        self.beta.len()
    }

    pub fn add(&self, other: &GermValue) -> GermValue {
        assert_eq!(self.point, other.point, "germs at different points");
        let n = self.order().max(other.order());
        let beta = (1..=n).map(|j| &self.coeff(j) + &other.coeff(j)).collect();
        Self::new(&self.field, self.point, beta)
    }

    pub fn neg(&self) -> GermValue {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, a: &Cyc) -> GermValue {
        let beta = self.beta.iter().map(|b| b * a).collect();
        Self::new(&self.field, self.point, beta)
    }

    /// Principal part of the product with a power series (known to at least
    /// precision `order - 1`).
    pub fn mul_series(&self, f: &PowerSeries) -> GermValue {
        let m = self.order();
        let beta = (1..=m)
            .map(|jp| {
                let mut acc = self.field.zero();
                for j in jp..=m {
                    let k = j - jp;
                    let fk = f.coeff(k);
                    if !fk.is_zero() {
                        acc = &acc + &(&self.beta[j - 1] * &fk);
                    }
                }
                acc
            })
            .collect();
        Self::new(&self.field, self.point, beta)
    }

    /// Multiply by `s^l * conj(s)^lp`.
    pub fn shift_by(&self, l: usize, lp: usize) -> GermValue {
        if self.is_zero() || l + lp == 0 {
            return self.clone();
        }
        let prec = self.order();
        let c = self.c();
        let f = &PowerSeries::variable(&self.field, prec).pow(l)
            * &PowerSeries::conj_variable(&c, prec).pow(lp);
        self.mul_series(&f)
    }

    /// The involution of `R / Lambda_c`, induced by `conj(t) = t^-1`.
    pub fn conj(&self) -> GermValue {
        let m = self.order();
        if m == 0 {
            return self.clone();
        }
        // conj(s)^-1 = -c^2 (1 + conj(c) s) s^-1
        let c = self.c();
        let cb = c.conj();
        let minus_c2 = -(&c * &c);
        let mut v = vec![self.field.zero(); m];
        v[0] = self.field.one();
        if m > 1 {
            v[1] = cb;
        }
        let one_plus = PowerSeries::from_coeffs(&self.field, v);
        let mut acc = GermValue::zero(&self.field, self.point);
        for j in 1..=m {
            let b = self.beta[j - 1].conj();
            if b.is_zero() {
                continue;
            }
            // conj(beta_j) (-c^2)^j (1 + cb s)^j s^-j
            let scal = &b * &minus_c2.pow(j as u64);
            let mut basis = vec![self.field.zero(); j];
            basis[j - 1] = scal;
            let g = GermValue::new(&self.field, self.point, basis);
            let pad = one_plus.pow(j);
            acc = acc.add(&g.mul_series(&pad));
        }
        acc
    }
}

impl fmt::Debug for GermValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Germ@{}[", self.point)?;
        for (j, b) in self.beta.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", b)?;
        }
        write!(f, "]")
    }
}
