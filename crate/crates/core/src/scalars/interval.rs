//! Certified rational enclosures of `pi`, `cos` and `sin`.
//!
//! Bounds are rounded outward to dyadic rationals with `prec` fractional bits
//! so that endpoint sizes stay bounded while the enclosure is refined.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn scale(&self, a: &Rational) -> Interval {
        if a.is_negative() {
            Interval::new(&self.hi * a, &self.lo * a)
        } else {
            Interval::new(&self.lo * a, &self.hi * a)
        }
    }

    pub fn round_out(&self, prec: u32) -> Interval {
        let den = BigInt::one() << prec;
        let lo = (&self.lo * &den).floor() / &den;
        let hi = (&self.hi * &den).ceil() / &den;
        Interval { lo, hi }
    }

    /// `Some(sign)` once the enclosure decides the sign of its value.
    pub fn sign(&self) -> Option<i8> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn two_pow_neg(prec: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << prec)
}

/// arctan(1/m) by its alternating series, bracketed by consecutive partial sums.
fn arctan_inv(m: i64, prec: u32) -> Interval {
    let eps = two_pow_neg(prec + 4);
    let m2 = BigInt::from(m * m);
    let mut pow = BigInt::from(m);
    let mut sum = Rational::zero();
    let mut n: i64 = 0;
    loop {
        let term = Rational::new(BigInt::one(), &pow * BigInt::from(2 * n + 1));
        let next = if n % 2 == 0 {
            &sum + &term
        } else {
            &sum - &term
        };
        if term < eps {
            let (lo, hi) = if sum <= next {
                (sum, next)
            } else {
                (next, sum)
            };
            return Interval::new(lo, hi);
        }
        sum = next;
        pow *= &m2;
        n += 1;
    }
}

/// Enclosure of pi via Machin's formula.
pub fn pi(prec: u32) -> Interval {
    let a = arctan_inv(5, prec + 6).scale(&rat(16, 1));
    let b = arctan_inv(239, prec + 6).scale(&rat(4, 1));
    a.sub(&b).round_out(prec + 2)
}

/// Taylor enclosure of `cos(y)` at a rational point with a Lagrange remainder.
fn cos_point(y: &Rational, prec: u32) -> Interval {
    let eps = two_pow_neg(prec + 4);
    let y2 = y * y;
    let mut term = Rational::one();
    let mut sum = Rational::zero();
    let mut n: i64 = 0;
    loop {
        if n % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        // next term magnitude |y|^(2n+2)/(2n+2)! bounds the remainder
        term = &term * &y2 / Rational::from_integer(BigInt::from((2 * n + 1) * (2 * n + 2)));
        n += 1;
        if term < eps {
            return Interval::new(&sum - &term, &sum + &term).round_out(prec + 2);
        }
    }
}

fn sin_point(y: &Rational, prec: u32) -> Interval {
    let eps = two_pow_neg(prec + 4);
    let y2 = y * y;
    let mut term = y.clone();
    let mut sum = Rational::zero();
    let mut n: i64 = 0;
    loop {
        if n % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        term = &term * &y2 / Rational::from_integer(BigInt::from((2 * n + 2) * (2 * n + 3)));
        n += 1;
        if term.abs() < eps {
            let r = term.abs();
            return Interval::new(&sum - &r, &sum + &r).round_out(prec + 2);
        }
    }
}

/// Exact value of `cos(pi r)` when it is rational (Niven's theorem), with
/// `r` already reduced to `[0, 1/2]`.
fn cos_pi_exact_reduced(r: &Rational) -> Option<Rational> {
    if r.is_zero() {
        Some(Rational::one())
    } else if *r == rat(1, 3) {
        Some(rat(1, 2))
    } else if *r == rat(1, 2) {
        Some(Rational::zero())
    } else {
        None
    }
}

/// Reduce `r` so that `cos(pi r) = sign * cos(pi r')` with `r'` in `[0, 1/2]`.
fn reduce_cos_argument(r: &Rational) -> (i8, Rational) {
    let two = rat(2, 1);
    let mut r = r - (r / &two).floor() * &two;
    if r > Rational::one() {
        r = &two - r;
    }
    if r > rat(1, 2) {
        (-1, Rational::one() - r)
    } else {
        (1, r)
    }
}

/// Exact `cos(pi r)` if rational.
pub fn cos_pi_exact(r: &Rational) -> Option<Rational> {
    let (s, r) = reduce_cos_argument(r);
    cos_pi_exact_reduced(&r).map(|v| if s < 0 { -v } else { v })
}

/// Exact `sin(pi r)` if rational.
pub fn sin_pi_exact(r: &Rational) -> Option<Rational> {
    cos_pi_exact(&(rat(1, 2) - r))
}

/// Enclosure of `cos(pi r)`.
pub fn cos_pi(r: &Rational, prec: u32) -> Interval {
    let (s, red) = reduce_cos_argument(r);
    let iv = match cos_pi_exact_reduced(&red) {
        Some(v) => Interval::point(v),
        None => {
            let p = pi(prec + 4);
            let x_lo = p.lo() * &red;
            let x_hi = p.hi() * &red;
            // cos is decreasing on [0, pi/2]
            let lower = cos_point(&x_hi, prec + 2);
            let upper = cos_point(&x_lo, prec + 2);
            Interval::new(lower.lo().clone(), upper.hi().clone()).round_out(prec)
        }
    };
    if s < 0 {
        iv.neg()
    } else {
        iv
    }
}

/// Enclosure of `sin(pi r)`.
pub fn sin_pi(r: &Rational, prec: u32) -> Interval {
    cos_pi(&(rat(1, 2) - r), prec)
}

/// Enclosure of `cos(x)` for a rational angle in radians.
pub fn cos_rad(x: &Rational, prec: u32) -> Interval {
    cos_point(x, prec)
}

/// Enclosure of `sin(x)` for a rational angle in radians.
pub fn sin_rad(x: &Rational, prec: u32) -> Interval {
    sin_point(x, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::rational_to_f64;

    fn mid(iv: &Interval) -> f64 {
        (rational_to_f64(iv.lo()) + rational_to_f64(iv.hi())) / 2.0
    }

    #[test]
    fn pi_enclosure() {
        let p = pi(80);
        assert!(p.lo() < p.hi());
        assert!(p.width() < two_pow_neg(70));
        assert!((mid(&p) - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn cos_values() {
        for (n, d) in [(1, 5), (2, 7), (-3, 4), (7, 6), (13, 9)] {
            let r = rat(n, d);
            let iv = cos_pi(&r, 60);
            let expect = (std::f64::consts::PI * n as f64 / d as f64).cos();
            assert!(rational_to_f64(iv.lo()) <= expect + 1e-12);
            assert!(rational_to_f64(iv.hi()) >= expect - 1e-12);
            assert!(iv.width() < two_pow_neg(50));
        }
        assert_eq!(cos_pi(&rat(2, 3), 10), Interval::point(rat(-1, 2)));
        assert_eq!(sin_pi_exact(&rat(1, 6)), Some(rat(1, 2)));
        assert_eq!(sin_pi_exact(&rat(1, 4)), None);
    }

    #[test]
    fn radian_values() {
        let x = rat(1, 3);
        let c = cos_rad(&x, 60);
        let s = sin_rad(&x, 60);
        assert!((mid(&c) - (1.0f64 / 3.0).cos()).abs() < 1e-14);
        assert!((mid(&s) - (1.0f64 / 3.0).sin()).abs() < 1e-14);
        let big = rat(3, 1);
        assert!((mid(&sin_rad(&big, 60)) - 3.0f64.sin()).abs() < 1e-14);
    }
}
