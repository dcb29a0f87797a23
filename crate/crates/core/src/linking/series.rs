//! Truncated power series in `s = t - c`.

use crate::scalars::{Cyc, Field, LaurentPoly};

/// Power series known modulo `s^prec`, where `prec == coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    field: Field,
    coeffs: Vec<Cyc>,
}

impl PowerSeries {
    pub fn zero(field: &Field, prec: usize) -> Self {
        PowerSeries {
            field: field.clone(),
            coeffs: vec![field.zero(); prec],
        }
    }

    pub fn constant(c: &Cyc, prec: usize) -> Self {
        let mut s = Self::zero(c.field(), prec);
        if prec > 0 {
            s.coeffs[0] = c.clone();
        }
        s
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<Cyc>) -> Self {
        PowerSeries {
            field: field.clone(),
            coeffs,
        }
    }

    /// `s` itself.
    pub fn variable(field: &Field, prec: usize) -> Self {
        let mut s = Self::zero(field, prec);
        if prec > 1 {
            s.coeffs[1] = field.one();
        }
        s
    }

    /// Expansion of `p(c + s)`.
    pub fn expand(p: &LaurentPoly, c: &Cyc, prec: usize) -> Self {
        let field = p.field();
        if p.is_zero() || prec == 0 {
            return Self::zero(field, prec);
        }
        let t = &Self::constant(c, prec) + &Self::variable(field, prec);
        let mut acc = Self::zero(field, prec);
        let high = p.high_degree();
        let low = p.low_degree();
        for e in (low..=high).rev() {
            acc = &acc * &t;
            let a = p.coeff(e);
            if !a.is_zero() && prec > 0 {
                acc.coeffs[0] = &acc.coeffs[0] + &a;
            }
        }
        // acc = sum a_e t^(e - low)
        if low >= 0 {
            &acc * &t.pow(low as usize)
        } else {
            let tinv = t.inv().expect("c is a unit");
            &acc * &tinv.pow(low.unsigned_abs() as usize)
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Cyc] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Cyc {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Cyc::is_zero)
    }

    /// Order of vanishing, `None` when zero to the known precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, prec: usize) -> Self {
        assert!(prec <= self.precision(), "cannot raise precision");
        PowerSeries {
            field: self.field.clone(),
            coeffs: self.coeffs[..prec].to_vec(),
        }
    }

    /// Multiply by `s^k` (k >= 0) or divide by `s^-k` (k < 0). Precision moves
    /// by `k`; division requires the low coefficients to vanish.
    pub fn shift(&self, k: i64) -> Self {
        let mut coeffs = Vec::new();
        if k >= 0 {
            coeffs.extend(std::iter::repeat_n(self.field.zero(), k as usize));
            coeffs.extend(self.coeffs.iter().cloned());
        } else {
            let d = k.unsigned_abs() as usize;
            assert!(
                self.coeffs.iter().take(d).all(Cyc::is_zero),
                "division by s^{} of a series of lower order",
                d
            );
            coeffs.extend(self.coeffs.iter().skip(d).cloned());
        }
        PowerSeries {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        PowerSeries {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut acc = Self::constant(&self.field.one(), self.precision());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.precision();
        if n == 0 {
            return Some(self.clone());
        }
        let a0inv = self.coeffs[0].inv()?;
        let mut out = vec![self.field.zero(); n];
        out[0] = a0inv.clone();
        for k in 1..n {
            let mut acc = self.field.zero();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc = &acc + &(&self.coeffs[j] * &out[k - j]);
                }
            }
            out[k] = -(&acc * &a0inv);
        }
        Some(PowerSeries {
            field: self.field.clone(),
            coeffs: out,
        })
    }

    /// Series of `conj(s) = t^-1 - conj(c) = -conj(c)^2 s / (1 + conj(c) s)`.
    pub fn conj_variable(c: &Cyc, prec: usize) -> Self {
        let field = c.field();
        let cb = c.conj();
        let mut coeffs = vec![field.zero(); prec];
        // -cb^2 s sum (-cb s)^k
        let mut term = -(&cb * &cb);
        for x in coeffs.iter_mut().skip(1) {
            *x = term.clone();
            term = -(&term * &cb);
        }
        PowerSeries {
            field: field.clone(),
            coeffs,
        }
    }

    /// The ring involution at a point `c` of the unit circle:
    /// `sum a_k s^k -> sum conj(a_k) conj(s)^k`.
    pub fn involution(&self, c: &Cyc) -> Self {
        let n = self.precision();
        let cs = Self::conj_variable(c, n);
        let mut acc = Self::zero(&self.field, n);
        for a in self.coeffs.iter().rev() {
            acc = &acc * &cs;
            if !a.is_zero() && n > 0 {
                acc.coeffs[0] = &acc.coeffs[0] + &a.conj();
            }
        }
        acc
    }
}

impl<'a> std::ops::Add<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &'a PowerSeries) -> PowerSeries {
        let n = self.precision().min(rhs.precision());
        PowerSeries {
            field: self.field.clone(),
            coeffs: (0..n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> std::ops::Sub<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &'a PowerSeries) -> PowerSeries {
        let n = self.precision().min(rhs.precision());
        PowerSeries {
            field: self.field.clone(),
            coeffs: (0..n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect(),
        }
    }
}

impl<'a> std::ops::Mul<&'a PowerSeries> for &'a PowerSeries {
    type Output = PowerSeries;
    fn mul(self, rhs: &'a PowerSeries) -> PowerSeries {
        let n = self.precision().min(rhs.precision());
        let mut out = vec![self.field.zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        PowerSeries {
            field: self.field.clone(),
            coeffs: out,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_laurent;

    #[test]
    fn expansion_matches_taylor() {
        let f = Field::new(8).unwrap();
        let c = f.zeta(3);
        let p = parse_laurent(&f, "t^2 - 3*t + t^-1").unwrap();
        let s = PowerSeries::expand(&p, &c, 4);
        // the constant term is p(c); the series must vanish identically for t - c
        assert_eq!(s.coeff(0), p.eval(&c));
        let lin = PowerSeries::expand(&LaurentPoly::linear(&c), &c, 4);
        assert_eq!(lin, PowerSeries::variable(&f, 4));
        // t * t^-1 = 1
        let t = PowerSeries::expand(&LaurentPoly::t(&f), &c, 5);
        let ti = PowerSeries::expand(&LaurentPoly::t_pow(&f, -1), &c, 5);
        assert_eq!(&t * &ti, PowerSeries::constant(&f.one(), 5));
    }

    #[test]
    fn involution_is_ring_involution() {
        let f = Field::new(12).unwrap();
        let c = f.zeta(5);
        let p = parse_laurent(&f, "z1*t^2 - 3*t + 2*t^-1").unwrap();
        let lhs = PowerSeries::expand(&p, &c, 5).involution(&c);
        let rhs = PowerSeries::expand(&p.involution(), &c, 5);
        assert_eq!(lhs, rhs);
        let twice = PowerSeries::expand(&p, &c, 5).involution(&c).involution(&c);
        assert_eq!(twice, PowerSeries::expand(&p, &c, 5));
    }

    #[test]
    fn inverse_and_shift() {
        let f = Field::new(4).unwrap();
        let c = f.one();
        let p = parse_laurent(&f, "t + 1").unwrap();
        let s = PowerSeries::expand(&p, &c, 6);
        assert_eq!(&s * &s.inv().unwrap(), PowerSeries::constant(&f.one(), 6));
        let q = PowerSeries::expand(&parse_laurent(&f, "(t - 1)^2").unwrap(), &c, 6);
        assert_eq!(q.valuation(), Some(2));
        assert_eq!(q.shift(-2).coeff(0), f.one());
        assert_eq!(q.shift(-2).precision(), 4);
    }
}
