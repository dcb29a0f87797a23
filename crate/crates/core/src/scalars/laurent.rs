use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use super::field::{forward_owned, Cyc, Field};

/// An element of `K[t, t^-1]` for a cyclotomic field `K`.
///
/// Stored densely from the lowest exponent; the zero polynomial has no
/// coefficients and the first and last stored coefficients are nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    field: Field,
    low: i64,
    coeffs: Vec<Cyc>,
}

impl LaurentPoly {
    pub fn zero(field: &Field) -> Self {
        LaurentPoly {
            field: field.clone(),
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: Cyc) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: Cyc, e: i64) -> Self {
        let field = c.field().clone();
        Self::from_dense(&field, e, vec![c])
    }

    /// The variable `t`.
    pub fn t(field: &Field) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn t_pow(field: &Field, e: i64) -> Self {
        Self::monomial(field.one(), e)
    }

    /// `t - c`.
    pub fn linear(c: &Cyc) -> Self {
        Self::from_dense(c.field(), 0, vec![-c, c.field().one()])
    }

    pub fn from_dense(field: &Field, low: i64, coeffs: Vec<Cyc>) -> Self {
        let mut p = LaurentPoly {
            field: field.clone(),
            low,
            coeffs,
        };
        p.trim();
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Cyc)>>(field: &Field, terms: I) -> Self {
        let mut acc = Self::zero(field);
        for (e, c) in terms {
            acc = &acc + &Self::monomial(c, e);
        }
        acc
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Cyc::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Units of the Laurent ring are the nonzero monomials.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Inverse of a unit `c t^e`.
    pub fn unit_inverse(&self) -> Option<LaurentPoly> {
        if !self.is_unit() {
            return None;
        }
        Some(Self::monomial(self.coeffs[0].inv()?, -self.low))
    }

    pub fn low_degree(&self) -> i64 {
        self.low
    }

    pub fn high_degree(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    /// Difference between the extreme exponents; the Euclidean norm of the ring.
    pub fn width(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, e: i64) -> Cyc {
        let i = e - self.low;
        if i < 0 || i >= self.coeffs.len() as i64 {
            self.field.zero()
        } else {
            self.coeffs[i as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Cyc)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn leading_coeff(&self) -> Option<&Cyc> {
        self.coeffs.last()
    }

    /// The involution `sum a_e t^e -> sum conj(a_e) t^-e`.
    pub fn involution(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs = self.coeffs.iter().rev().map(Cyc::conj).collect();
        LaurentPoly {
            field: self.field.clone(),
            low: -self.high_degree(),
            coeffs,
        }
    }

    /// Multiply by `t^e`.
    pub fn shift(&self, e: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly {
            field: self.field.clone(),
            low: self.low + e,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field);
        }
        LaurentPoly {
            field: self.field.clone(),
            low: self.low,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.field);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluate at an arbitrary nonzero field element.
    pub fn eval(&self, x: &Cyc) -> Cyc {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        let xl = x.powi(self.low).expect("evaluation at zero");
        &acc * &xl
    }

    /// Evaluate at `zeta_N^a`.
    pub fn evaluate_at_root(&self, a: i64) -> Cyc {
        let mut acc = self.field.zero();
        for (e, c) in self.terms() {
            acc = &acc + &(c * &self.field.zeta(a * e));
        }
        acc
    }

    /// Euclidean division by width: `self = q * d + r` with `width(r) < width(d)`
    /// (or `r = 0`).
    pub fn div_rem(&self, d: &LaurentPoly) -> (LaurentPoly, LaurentPoly) {
        assert!(!d.is_zero(), "division by zero Laurent polynomial");
        if self.is_zero() {
            return (Self::zero(&self.field), Self::zero(&self.field));
        }
        // Work with the polynomial parts self * t^-low, d * t^-low(d).
        let dc = &d.coeffs;
        let dd = dc.len() - 1;
        let lead_inv = dc[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(&self.field), self.clone());
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in dc.iter().enumerate() {
                rem[i + j] = &rem[i + j] - &(&c * dj);
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        let q = Self::from_dense(&self.field, self.low - d.low, quot);
        let r = Self::from_dense(&self.field, self.low, rem);
        (q, r)
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &LaurentPoly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// Split off a unit: returns `(u, p)` with `self = u * p`, `p` a polynomial
    /// with nonzero constant term and leading coefficient one.
    pub fn normalize(&self) -> (LaurentPoly, LaurentPoly) {
        if self.is_zero() {
            return (Self::one(&self.field), self.clone());
        }
        let lc = self.leading_coeff().unwrap().clone();
        let inv = lc.inv().unwrap();
        let assoc = LaurentPoly {
            field: self.field.clone(),
            low: 0,
            coeffs: self.coeffs.iter().map(|c| c * &inv).collect(),
        };
        (Self::monomial(lc, self.low), assoc)
    }

    pub fn gcd(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.normalize().1
    }

    /// Multiplicity of the root `c` (order of vanishing at `t = c`), for `c != 0`.
    pub fn valuation_at(&self, c: &Cyc) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let lin = Self::linear(c);
        let mut p = self.clone();
        let mut m = 0;
        loop {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                return Some(m);
            }
            p = q;
            m += 1;
        }
    }
}

impl fmt::Display for LaurentPoly {
    /// Terms in descending exponent order, e.g. `t - 1`, `1/2 + 1/2*t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = self.low + i as i64;
            let (neg, body) = match c.as_rational() {
                Some(r) => (r.is_negative(), r.abs().to_string()),
                None => (false, format!("({})", c)),
            };
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = c.as_rational().is_some_and(|r| r.abs().is_one());
            match (e, unit) {
                (0, _) => write!(f, "{}", body)?,
                (_, true) => {}
                (_, false) => write!(f, "{}*", body)?,
            }
            match e {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{}", e)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high_degree().max(rhs.high_degree());
        let coeffs = (low..=high)
            .map(|e| &self.coeff(e) + &rhs.coeff(e))
            .collect();
        LaurentPoly::from_dense(&self.field, low, coeffs)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            field: self.field.clone(),
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'a LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(&self.field);
        }
        if self.coeffs.len() == 1 {
            return rhs.scale(&self.coeffs[0]).shift(self.low);
        }
        if rhs.coeffs.len() == 1 {
            return self.scale(&rhs.coeffs[0]).shift(rhs.low);
        }
        assert!(self.field == rhs.field, "mixed cyclotomic fields");
        let out = self.field.convolve(&self.coeffs, &rhs.coeffs);
        LaurentPoly::from_dense(&self.field, self.low + rhs.low, out)
    }
}

forward_owned!(Add, add, LaurentPoly);
forward_owned!(Sub, sub, LaurentPoly);
forward_owned!(Mul, mul, LaurentPoly);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn involution_examples() {
        let k = Field::new(4).unwrap();
        let t = LaurentPoly::t(&k);
        assert_eq!(t.involution(), LaurentPoly::t_pow(&k, -1));
        let it2 = LaurentPoly::monomial(k.i(), 2);
        assert_eq!(it2.involution(), LaurentPoly::monomial(-k.i(), -2));
        let half = k.rational(q(1, 2));
        let h = LaurentPoly::from_terms(&k, [(0, half.clone()), (-1, half.clone())]);
        let hb = LaurentPoly::from_terms(&k, [(0, half.clone()), (1, half)]);
        assert_eq!(h.involution(), hb);
    }

    #[test]
    fn evaluation_examples() {
        let k = Field::new(12).unwrap();
        let c = k.zeta(5);
        assert!(LaurentPoly::linear(&c).evaluate_at_root(5).is_zero());
        let p = &LaurentPoly::one(&k) + &LaurentPoly::t_pow(&k, -1);
        assert_eq!(p.evaluate_at_root(0), k.integer(2));
        // t^2 - t + 1 vanishes at the primitive 6th root zeta_12^2
        let p = LaurentPoly::from_terms(&k, [(2, k.one()), (1, k.integer(-1)), (0, k.one())]);
        assert!(p.evaluate_at_root(2).is_zero());
        assert_eq!(p.eval(&k.zeta(2)), p.evaluate_at_root(2));
    }

    #[test]
    fn division() {
        let k = Field::new(4).unwrap();
        let one = LaurentPoly::one(&k);
        let lin = LaurentPoly::linear(&one.coeff(0));
        let two = LaurentPoly::linear(&k.integer(2));
        let p = &(&lin * &lin) * &two;
        let (qq, r) = p.div_rem(&lin);
        assert!(r.is_zero());
        assert_eq!(qq, &lin * &two);
        assert_eq!(p.valuation_at(&k.one()), Some(2));
        let shifted = p.shift(-3);
        assert_eq!(shifted.valuation_at(&k.one()), Some(2));
        let (u, a) = shifted.normalize();
        assert!(u.is_unit());
        assert_eq!(&u * &a, shifted);
        assert_eq!(a.low_degree(), 0);
    }

    #[test]
    fn display() {
        let k = Field::new(4).unwrap();
        let t = LaurentPoly::t(&k);
        assert_eq!((&t - &LaurentPoly::one(&k)).to_string(), "t - 1");
        let half = k.rational(q(1, 2));
        let h = LaurentPoly::from_terms(&k, [(0, half.clone()), (-1, half)]);
        assert_eq!(h.to_string(), "1/2 + 1/2*t^-1");
        assert_eq!(LaurentPoly::monomial(k.i(), -2).to_string(), "(z1)*t^-2");
    }
}
