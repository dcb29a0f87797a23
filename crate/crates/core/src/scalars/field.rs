use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::interval::{self, Interval};
use super::Rational;
use crate::error::{Error, Result};

struct FieldData {
    conductor: u32,
    degree: usize,
    /// `powers[k]` is zeta^k written in the power basis, for `k` in `0..conductor`.
    powers: Vec<Vec<Rational>>,
}

/// The cyclotomic field `Q(zeta_N)` with `4 | N`, so that `i = zeta_N^(N/4)` is
/// always available.
///
/// Cloning is cheap; every scalar carries a handle to its field.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl Field {
    pub fn new(conductor: u32) -> Result<Self> {
        if conductor < 4 || conductor % 4 != 0 {
            return Err(Error::InvalidConductor(conductor));
        }
        let phi = cyclotomic_polynomial(conductor);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(conductor as usize);
        let mut cur = vec![Rational::zero(); degree];
        cur[0] = Rational::one();
        for _ in 0..conductor {
            powers.push(cur.clone());
            // multiply by zeta and reduce with the monic minimal polynomial
            let top = cur[degree - 1].clone();
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1].clone();
            }
            cur[0] = Rational::zero();
            if !top.is_zero() {
                for (i, p) in phi.iter().take(degree).enumerate() {
                    cur[i] -= &top * Rational::from_integer(p.clone());
                }
            }
        }
        Ok(Field(Arc::new(FieldData {
            conductor,
            degree,
            powers,
        })))
    }

    pub fn conductor(&self) -> u32 {
        self.0.conductor
    }

    /// Degree of the field over `Q`, i.e. Euler's phi of the conductor.
    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn zero(&self) -> Cyc {
        Cyc {
            field: self.clone(),
            coeffs: vec![Rational::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> Cyc {
        self.rational(Rational::one())
    }

    pub fn rational(&self, r: Rational) -> Cyc {
        let mut x = self.zero();
        x.coeffs[0] = r;
        x
    }

    pub fn integer(&self, n: i64) -> Cyc {
        self.rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `zeta_N^k`; negative exponents are reduced modulo `N`.
    pub fn zeta(&self, k: i64) -> Cyc {
        let n = self.conductor() as i64;
        let k = k.rem_euclid(n) as usize;
        Cyc {
            field: self.clone(),
            coeffs: self.0.powers[k].clone(),
        }
    }

    pub fn i(&self) -> Cyc {
        self.zeta(self.conductor() as i64 / 4)
    }

    pub fn from_coeffs(&self, coeffs: Vec<Rational>) -> Result<Cyc> {
        if coeffs.len() != self.degree() {
            return Err(Error::Dimension(format!(
                "expected {} power-basis coefficients, got {}",
                self.degree(),
                coeffs.len()
            )));
        }
        Ok(Cyc {
            field: self.clone(),
            coeffs,
        })
    }

    /// Coefficients of the product of two polynomials over this field, with
    /// denominators cleared once for each factor.
    pub(crate) fn convolve(&self, a: &[Cyc], b: &[Cyc]) -> Vec<Cyc> {
        let d = self.degree();
        let flat = |v: &[Cyc]| {
            let all: Vec<Rational> = v.iter().flat_map(|c| c.coeffs.iter().cloned()).collect();
            cleared(&all)
        };
        let (na, da) = flat(a);
        let (nb, db) = flat(b);
        let mut out = vec![vec![BigInt::zero(); 2 * d - 1]; a.len() + b.len() - 1];
        for (i, x) in na.chunks(d).enumerate() {
            for (j, y) in nb.chunks(d).enumerate() {
                let acc = &mut out[i + j];
                for (k, xk) in x.iter().enumerate() {
                    if xk.is_zero() {
                        continue;
                    }
                    for (l, yl) in y.iter().enumerate() {
                        if !yl.is_zero() {
                            acc[k + l] += xk * yl;
                        }
                    }
                }
            }
        }
        let den = da * db;
        out.into_iter()
            .map(|mut raw| {
                let (low, high) = raw.split_at_mut(d);
                for (k, c) in high.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (o, p) in low.iter_mut().zip(&self.0.powers[k + d]) {
                        if !p.is_zero() {
                            *o += c * p.numer();
                        }
                    }
                }
                raw.truncate(d);
                Cyc {
                    field: self.clone(),
                    coeffs: raw
                        .into_iter()
                        .map(|n| Rational::new(n, den.clone()))
                        .collect(),
                }
            })
            .collect()
    }

    fn same(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.conductor() == other.conductor()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.conductor().hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor())
    }
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub(crate) fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let den = cyclotomic_polynomial(d);
            num = exact_int_div(&num, &den);
        }
    }
    num
}

fn exact_int_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut q = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        // den is monic
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    q
}

/// An element of a cyclotomic field in its (unique) power-basis representation.
#[derive(Clone)]
pub struct Cyc {
    field: Field,
    coeffs: Vec<Rational>,
}

impl Cyc {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Complex conjugation, the automorphism `zeta -> zeta^-1`.
    pub fn conj(&self) -> Cyc {
        let n = self.field.conductor() as usize;
        let mut out = self.field.zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let p = &self.field.0.powers[(n - k) % n];
            for (o, b) in out.coeffs.iter_mut().zip(p) {
                if !b.is_zero() {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn scale(&self, r: &Rational) -> Cyc {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn inv(&self) -> Option<Cyc> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(self.field.rational(r.recip()));
        }
        // Solve (self * x = 1) as a linear system over Q.
        let d = self.field.degree();
        let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let col = self * &self.field.zeta(j as i64);
            for i in 0..d {
                rows[i][j] = col.coeffs[i].clone();
            }
        }
        rows[0][d] = Rational::one();
        let sol = solve_rational(rows)?;
        Some(Cyc {
            field: self.field.clone(),
            coeffs: sol,
        })
    }

    pub fn pow(&self, mut e: u64) -> Cyc {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Option<Cyc> {
        if e >= 0 {
            Some(self.pow(e as u64))
        } else {
            self.inv().map(|x| x.pow(e.unsigned_abs()))
        }
    }

    /// Certified enclosure of the real part under `zeta_N -> exp(2 pi i / N)`.
    pub fn real_part_enclosure(&self, prec: u32) -> Interval {
        let n = self.field.conductor() as i64;
        let mut acc = Interval::point(Rational::zero());
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let angle = Rational::new(BigInt::from(2 * k as i64), BigInt::from(n));
            let c = interval::cos_pi(&angle, prec);
            acc = acc.add(&c.scale(a)).round_out(prec);
        }
        acc
    }

    /// Floating point approximation of the complex value, for display only.
    pub fn to_f64_pair(&self) -> (f64, f64) {
        let n = self.field.conductor() as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, a) in self.coeffs.iter().enumerate() {
            let a = rational_to_f64(a);
            let th = 2.0 * std::f64::consts::PI * k as f64 / n;
            re += a * th.cos();
            im += a * th.sin();
        }
        (re, im)
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact sign of a real cyclotomic number.
///
/// The zero test is exact; otherwise the enclosure of the value is refined
/// until it excludes zero, which must eventually happen.
pub fn sign_of_real(x: &Cyc) -> Result<i8> {
    if x.is_zero() {
        return Ok(0);
    }
    if !x.is_real() {
        return Err(Error::NotReal(x.to_string()));
    }
    if let Some(r) = x.as_rational() {
        return Ok(if r.is_positive() { 1 } else { -1 });
    }
    let mut prec = 32;
    loop {
        let e = x.real_part_enclosure(prec);
        if e.lo().is_positive() {
            return Ok(1);
        }
        if e.hi().is_negative() {
            return Ok(-1);
        }
        prec *= 2;
    }
}

/// Gauss-Jordan on an augmented `d x (d+1)` system; `None` when singular.
/// Integer numerators over a common denominator.
fn cleared(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let nums = v.iter().map(|r| r.numer() * (&den / r.denom())).collect();
    (nums, den)
}

fn solve_rational(mut rows: Vec<Vec<Rational>>) -> Option<Vec<Rational>> {
    let d = rows.len();
    for col in 0..d {
        let piv = (col..d).find(|&r| !rows[r][col].is_zero())?;
        rows.swap(col, piv);
        let inv = rows[col][col].recip();
        for x in rows[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != col && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in col..=d {
                    let v = &f * &rows[col][c];
                    rows[r][c] -= v;
                }
            }
        }
    }
    Some(rows.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coeffs == other.coeffs
    }
}

impl Eq for Cyc {}

impl std::hash::Hash for Cyc {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.conductor().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Display for Cyc {
    /// Power-basis rendering in the input grammar, e.g. `1/2 + 3*z1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let abs = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{}", abs)?;
            } else if abs.is_one() {
                write!(f, "z{}", k)?;
            } else {
                write!(f, "{}*z{}", abs, k)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[{}]({})", self.field.conductor(), self)
    }
}

impl<'a> Add<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn add(self, rhs: &'a Cyc) -> Cyc {
        assert!(self.field == rhs.field, "mixed cyclotomic fields");
        Cyc {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<'a> Sub<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn sub(self, rhs: &'a Cyc) -> Cyc {
        assert!(self.field == rhs.field, "mixed cyclotomic fields");
        Cyc {
            field: self.field.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<'a> Mul<&'a Cyc> for &'a Cyc {
    type Output = Cyc;
    fn mul(self, rhs: &'a Cyc) -> Cyc {
        assert!(self.field == rhs.field, "mixed cyclotomic fields");
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let d = self.field.degree();
        let (na, da) = cleared(&self.coeffs);
        let (nb, db) = cleared(&rhs.coeffs);
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in na.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let (low, high) = prod.split_at_mut(d);
        for (k, c) in high.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in low.iter_mut().zip(&self.field.0.powers[k + d]) {
                if !p.is_zero() {
                    *o += c * p.numer();
                }
            }
        }
        let den = da * db;
        let out = prod
            .into_iter()
            .take(d)
            .map(|n| Rational::new(n, den.clone()))
            .collect();
        Cyc {
            field: self.field.clone(),
            coeffs: out,
        }
    }
}

impl Neg for &Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        Cyc {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Neg for Cyc {
    type Output = Cyc;
    fn neg(self) -> Cyc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &'a $t) -> $t {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<$t> for &'a $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                self.$m(&rhs)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, Cyc);
forward_owned!(Sub, sub, Cyc);
forward_owned!(Mul, mul, Cyc);
