//! `H_0` of the circle with coefficients in `L^2(Z, mu)`, where the generator
//! acts as multiplication by `exp(i f)` for a step function `f`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::LaurentMatrix;
use crate::linking::DualityPresentation;
use crate::scalars::interval::{self, Interval};
use crate::scalars::{rational_to_f64, Cyc, Field, LaurentPoly, Rational};
use crate::trace::TraceSpec;

/// A real angle, either `r * pi` or `r` radians with `r` rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Angle {
    PiMultiple(Rational),
    Radians(Rational),
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Angle {
    pub fn is_zero(&self) -> bool {
        match self {
            Angle::PiMultiple(r) | Angle::Radians(r) => r.is_zero(),
        }
    }

    pub fn neg(&self) -> Angle {
        match self {
            Angle::PiMultiple(r) => Angle::PiMultiple(-r),
            Angle::Radians(r) => Angle::Radians(-r),
        }
    }

    pub fn sin_exact(&self) -> Option<Rational> {
        match self {
            Angle::PiMultiple(r) => interval::sin_pi_exact(r),
            Angle::Radians(r) if r.is_zero() => Some(Rational::zero()),
            Angle::Radians(_) => None,
        }
    }

    pub fn cos_exact(&self) -> Option<Rational> {
        match self {
            Angle::PiMultiple(r) => interval::cos_pi_exact(r),
            Angle::Radians(r) if r.is_zero() => Some(Rational::one()),
            Angle::Radians(_) => None,
        }
    }

    pub fn sin_interval(&self, prec: u32) -> Interval {
        match self {
            Angle::PiMultiple(r) => interval::sin_pi(r, prec),
            Angle::Radians(r) => interval::sin_rad(r, prec),
        }
    }

    pub fn cos_interval(&self, prec: u32) -> Interval {
        match self {
            Angle::PiMultiple(r) => interval::cos_pi(r, prec),
            Angle::Radians(r) => interval::cos_rad(r, prec),
        }
    }

    /// Whether the angle lies in `[-pi, pi]`.
    pub fn in_principal_range(&self) -> bool {
        match self {
            Angle::PiMultiple(r) => r.abs() <= Rational::one(),
            Angle::Radians(r) => {
                let mut prec = 16;
                loop {
                    let p = interval::pi(prec);
                    if r.abs() < *p.lo() {
                        return true;
                    }
                    if r.abs() > *p.hi() {
                        return false;
                    }
                    prec *= 2;
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Angle::PiMultiple(r) => std::f64::consts::PI * rational_to_f64(r),
            Angle::Radians(r) => rational_to_f64(r),
        }
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::PiMultiple(r) => {
                if r.is_zero() {
                    return write!(f, "0");
                }
                let sign = if r.is_negative() { "-" } else { "" };
                let n = r.numer().abs();
                let d = r.denom();
                match (n.is_one(), d.is_one()) {
                    (true, true) => write!(f, "{}pi", sign),
                    (true, false) => write!(f, "{}pi/{}", sign, d),
                    (false, true) => write!(f, "{}{}*pi", sign, n),
                    (false, false) => write!(f, "{}{}*pi/{}", sign, n, d),
                }
            }
            Angle::Radians(r) => write!(f, "{}", r),
        }
    }
}

impl FromStr for Angle {
    type Err = Error;

    /// `pi`, `-pi/6`, `3*pi/4`, `3pi/4`, or a rational number of radians.
    fn from_str(src: &str) -> Result<Angle> {
        let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Circle(format!("cannot parse angle '{}'", src));
        if let Some(pos) = s.find("pi") {
            let (head, tail) = (&s[..pos], &s[pos + 2..]);
            let head = head.strip_suffix('*').unwrap_or(head);
            let num = match head {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                h => h.parse::<Rational>().map_err(|_| bad())?,
            };
            let den = match tail {
                "" => Rational::one(),
                t => {
                    let d = t.strip_prefix('/').ok_or_else(bad)?;
                    d.parse::<Rational>().map_err(|_| bad())?
                }
            };
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Angle::PiMultiple(num / den))
        } else {
            s.parse::<Rational>().map(Angle::Radians).map_err(|_| bad())
        }
    }
}

/// Decides `sin a` against a rational.
pub fn cmp_sin_rational(a: &Angle, x: &Rational) -> Ordering {
    if let Some(v) = a.sin_exact() {
        return v.cmp(x);
    }
    refine(|prec| a.sin_interval(prec), x)
}

/// Decides `cos a` against a rational.
pub fn cmp_cos_rational(a: &Angle, x: &Rational) -> Ordering {
    if let Some(v) = a.cos_exact() {
        return v.cmp(x);
    }
    refine(|prec| a.cos_interval(prec), x)
}

// The value is irrational whenever no exact form exists, so refinement ends.
fn refine(enclose: impl Fn(u32) -> Interval, x: &Rational) -> Ordering {
    let mut prec = 32;
    loop {
        let iv = enclose(prec);
        if iv.lo() > x {
            return Ordering::Greater;
        }
        if iv.hi() < x {
            return Ordering::Less;
        }
        prec *= 2;
    }
}

fn reduce_pi(r: &Rational) -> Rational {
    let two = rat(2, 1);
    let mut v = r % &two;
    if v.is_negative() {
        v += &two;
    }
    v
}

/// Exact comparison of `sin a` and `sin b`.
pub fn cmp_sin(a: &Angle, b: &Angle) -> Ordering {
    match (a.sin_exact(), b.sin_exact()) {
        (Some(x), Some(y)) => return x.cmp(&y),
        (Some(x), None) => return cmp_sin_rational(b, &x).reverse(),
        (None, Some(y)) => return cmp_sin_rational(a, &y),
        _ => {}
    }
    let equal = match (a, b) {
        (Angle::PiMultiple(r), Angle::PiMultiple(s)) => {
            let (r, s) = (reduce_pi(r), reduce_pi(s));
            r == s || reduce_pi(&(Rational::one() - &r)) == s
        }
        (Angle::Radians(r), Angle::Radians(s)) => r == s,
        _ => false,
    };
    if equal {
        return Ordering::Equal;
    }
    let mut prec = 32;
    loop {
        let (ia, ib) = (a.sin_interval(prec), b.sin_interval(prec));
        if ia.lo() > ib.hi() {
            return Ordering::Greater;
        }
        if ia.hi() < ib.lo() {
            return Ordering::Less;
        }
        prec *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub mu: Rational,
    pub f: Angle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProfileSide {
    Both,
    Left,
    Right,
}

impl ProfileSide {
    pub fn name(self) -> &'static str {
        match self {
            ProfileSide::Both => "both",
            ProfileSide::Left => "left",
            ProfileSide::Right => "right",
        }
    }

    /// The side of `c` that a normal trace of the given kind sees.
    pub fn for_trace(trace: TraceSpec) -> Option<ProfileSide> {
        match trace {
            TraceSpec::Interior => Some(ProfileSide::Both),
            TraceSpec::Terminal => Some(ProfileSide::Left),
            TraceSpec::Initial => Some(ProfileSide::Right),
            _ => None,
        }
    }
}

impl FromStr for ProfileSide {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "both" => Ok(ProfileSide::Both),
            "left" => Ok(ProfileSide::Left),
            "right" => Ok(ProfileSide::Right),
            other => Err(Error::Circle(format!("unknown profile side '{}'", other))),
        }
    }
}

/// `f(s) = sign * s^k` on a unit-weight interval of `s` on the given side of 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    pub k: usize,
    pub sign: i8,
    pub side: ProfileSide,
}

impl Profile {
    /// Signs of `f` for `s > 0` and `s < 0`, when that side is present.
    pub fn side_signs(&self) -> (Option<i8>, Option<i8>) {
        let right = self.sign;
        let left = if self.k % 2 == 0 {
            self.sign
        } else {
            -self.sign
        };
        match self.side {
            ProfileSide::Both => (Some(right), Some(left)),
            ProfileSide::Right => (Some(right), None),
            ProfileSide::Left => (None, Some(left)),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SteppedCircleModule {
    cells: Vec<Cell>,
    profiles: Vec<Profile>,
}

impl SteppedCircleModule {
    pub fn new(cells: Vec<Cell>, profiles: Vec<Profile>) -> Result<Self> {
        for (n, c) in cells.iter().enumerate() {
            if !c.mu.is_positive() {
                return Err(Error::Circle(format!("cell {} has non-positive weight", n)));
            }
            if c.f.is_zero() {
                return Err(Error::Circle(format!(
                    "cell {} has f = 0, so t - 1 is not injective",
                    n
                )));
            }
            if !c.f.in_principal_range() {
                return Err(Error::Circle(format!("cell {} has f outside [-pi, pi]", n)));
            }
        }
        for (n, p) in profiles.iter().enumerate() {
            if p.k == 0 || (p.sign != 1 && p.sign != -1) {
                return Err(Error::Circle(format!(
                    "profile {} needs k >= 1 and sign +-1",
                    n
                )));
            }
        }
        Ok(SteppedCircleModule { cells, profiles })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn profiles(&self) -> &[Profile] {
        &self.profiles
    }

    pub fn negated(&self) -> Self {
        SteppedCircleModule {
            cells: self
                .cells
                .iter()
                .map(|c| Cell {
                    mu: c.mu.clone(),
                    f: c.f.neg(),
                })
                .collect(),
            profiles: self
                .profiles
                .iter()
                .map(|p| Profile {
                    sign: -p.sign,
                    ..*p
                })
                .collect(),
        }
    }
}

/// The square `top: M -> M`, `left`, `right`, `bottom` representing the
/// linking form of the circle; `right * top = bottom * left`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleDiagram {
    pub top: LaurentPoly,
    pub left: LaurentPoly,
    pub right: LaurentPoly,
    pub bottom: LaurentPoly,
}

impl CircleDiagram {
    pub fn commutes(&self) -> bool {
        &self.right * &self.top == &self.bottom * &self.left
    }

    /// The diagram of a `1 x 1` presentation: `top = A`, `right = H`,
    /// `left = (-1)^(q+1) H^dag`, `bottom = A^dag`.
    pub fn from_presentation(p: &DualityPresentation) -> Result<Self> {
        if p.a.rows() != 1 || p.a.cols() != 1 {
            return Err(Error::Dimension(
                "the circle diagram needs a 1x1 presentation".into(),
            ));
        }
        let a = p.a[(0, 0)].clone();
        let h = p.h[(0, 0)].clone();
        let hd = h.involution();
        Ok(CircleDiagram {
            bottom: a.involution(),
            top: a,
            right: h,
            left: if p.epsilon() < 0 { -hd } else { hd },
        })
    }

    pub fn presentation(&self) -> Result<DualityPresentation> {
        let f = self.top.field();
        DualityPresentation::new(
            LaurentMatrix::from_rows(f, vec![vec![self.top.clone()]])?,
            LaurentMatrix::from_rows(f, vec![vec![self.right.clone()]])?,
            0,
        )
    }
}

/// `t - 1`, `-(t + 1)/2`, `(t^-1 + 1)/2`, `t^-1 - 1`.
pub fn circle_diagram(field: &Field) -> CircleDiagram {
    let one = LaurentPoly::one(field);
    let t = LaurentPoly::t(field);
    let ti = LaurentPoly::t_pow(field, -1);
    let half = field.rational(rat(1, 2));
    CircleDiagram {
        top: &t - &one,
        left: (&t + &one).scale(&-half.clone()),
        right: (&ti + &one).scale(&half),
        bottom: &ti - &one,
    }
}

/// The diagram with `t` acting by a scalar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMaps {
    pub t: Cyc,
    pub top: Cyc,
    pub left: Cyc,
    pub right: Cyc,
    pub bottom: Cyc,
}

impl CellMaps {
    pub fn commutes(&self) -> bool {
        &self.right * &self.top == &self.bottom * &self.left
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

/// Exact scalar maps on every cell. Cells with angles in radians have no
/// exact value of `t` and are rejected.
pub fn h0_presentation(m: &SteppedCircleModule) -> Result<Vec<CellMaps>> {
    m.cells
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let Angle::PiMultiple(r) = &c.f else {
                return Err(Error::Circle(format!(
                    "cell {} has an angle in radians; exact maps need a rational multiple of pi",
                    n
                )));
            };
            let den: u64 = r
                .denom()
                .to_string()
                .parse()
                .map_err(|_| Error::Circle("angle denominator too large".into()))?;
            let conductor = lcm(4, 2 * den);
            let field = Field::new(
                u32::try_from(conductor)
                    .map_err(|_| Error::Circle("conductor too large".into()))?,
            )?;
            // exp(i pi p/q) = zeta_{2q}^p
            let step = (conductor / (2 * den)) as i64;
            let p: i64 = r
                .numer()
                .to_string()
                .parse()
                .map_err(|_| Error::Circle("angle numerator too large".into()))?;
            let t = field.zeta(step * p);
            let d = circle_diagram(&field);
            Ok(CellMaps {
                top: d.top.eval(&t),
                left: d.left.eval(&t),
                right: d.right.eval(&t),
                bottom: d.bottom.eval(&t),
                t,
            })
        })
        .collect()
}

/// `|exp(i f) - 1|^2 < epsilon`, i.e. `cos f > 1 - epsilon/2`.
pub fn in_small_part(f: &Angle, epsilon: &Rational) -> bool {
    let threshold = Rational::one() - epsilon / rat(2, 1);
    cmp_cos_rational(f, &threshold) == Ordering::Greater
}

/// Cells of `M_epsilon` and of the excised complement `Q`.
pub fn split_excision(
    m: &SteppedCircleModule,
    epsilon: &Rational,
) -> Result<(Vec<Cell>, Vec<Cell>)> {
    if !epsilon.is_positive() {
        return Err(Error::Circle("epsilon must be positive".into()));
    }
    Ok(m.cells
        .iter()
        .cloned()
        .partition(|c| in_small_part(&c.f, epsilon)))
}

/// A step function `F(lambda) = sum of weights with breakpoint <= lambda`,
/// plus a germ `sum (arcsin lambda)^(1/k)` from profiles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpectralDensityGerm {
    /// `(angle whose sine is the breakpoint, value from that point on)`,
    /// strictly increasing in both entries.
    pub steps: Vec<(Angle, Rational)>,
    /// `(k, number of profile halves)` contributing `(arcsin lambda)^(1/k)` each.
    pub profile_terms: Vec<(usize, usize)>,
}

impl SpectralDensityGerm {
    /// Value of the step part at a rational `lambda`.
    pub fn step_value(&self, lambda: &Rational) -> Rational {
        let mut v = Rational::zero();
        for (a, val) in &self.steps {
            if cmp_sin_rational(a, lambda) != Ordering::Greater {
                v = val.clone();
            } else {
                break;
            }
        }
        v
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.steps
            .windows(2)
            .all(|w| cmp_sin(&w[0].0, &w[1].0) == Ordering::Less && w[0].1 < w[1].1)
            && self.steps.first().is_none_or(|s| s.1.is_positive())
    }

    pub fn total(&self) -> Rational {
        self.steps
            .last()
            .map(|s| s.1.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Inverse of the Novikov-Shubin exponent at `lambda -> 0`; steps jump to a
    /// positive value away from 0 and contribute nothing.
    pub fn capacity(&self) -> usize {
        self.profile_terms.iter().map(|t| t.0).max().unwrap_or(0)
    }

    /// Same breakpoints and values, compared exactly.
    pub fn same_steps(&self, other: &SpectralDensityGerm) -> bool {
        self.steps.len() == other.steps.len()
            && self
                .steps
                .iter()
                .zip(&other.steps)
                .all(|(a, b)| a.1 == b.1 && cmp_sin(&a.0, &b.0) == Ordering::Equal)
    }
}

fn step_density(mut cells: Vec<(Angle, Rational)>) -> Vec<(Angle, Rational)> {
    cells.sort_by(|a, b| cmp_sin(&a.0, &b.0));
    let mut out: Vec<(Angle, Rational)> = Vec::new();
    let mut acc = Rational::zero();
    for (a, w) in cells {
        acc += w;
        match out.last_mut() {
            Some(last) if cmp_sin(&last.0, &a) == Ordering::Equal => last.1 = acc.clone(),
            _ => out.push((a, acc.clone())),
        }
    }
    out
}

/// `F_+(lambda) = mu{0 < sin f <= lambda}` and `F_-(lambda) = mu{-lambda <= sin f < 0}`
/// on `Z_epsilon`.
pub fn spectral_densities(
    m: &SteppedCircleModule,
    epsilon: &Rational,
) -> Result<(SpectralDensityGerm, SpectralDensityGerm)> {
    let (small, _) = split_excision(m, epsilon)?;
    let zero = Rational::zero();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for c in small {
        match cmp_sin_rational(&c.f, &zero) {
            Ordering::Greater => plus.push((c.f, c.mu)),
            Ordering::Less => minus.push((c.f.neg(), c.mu)),
            Ordering::Equal => {}
        }
    }
    let mut germs = (
        SpectralDensityGerm {
            steps: step_density(plus),
            profile_terms: Vec::new(),
        },
        SpectralDensityGerm {
            steps: step_density(minus),
            profile_terms: Vec::new(),
        },
    );
    for p in &m.profiles {
        let (r, l) = p.side_signs();
        for s in [r, l].into_iter().flatten() {
            let target = if s > 0 { &mut germs.0 } else { &mut germs.1 };
            match target.profile_terms.iter_mut().find(|t| t.0 == p.k) {
                Some(t) => t.1 += 1,
                None => target.profile_terms.push((p.k, 1)),
            }
        }
    }
    germs.0.profile_terms.sort();
    germs.1.profile_terms.sort();
    Ok(germs)
}

/// `(c_+, c_-)`, the inverse Novikov-Shubin exponents of `F_+` and `F_-`.
pub fn circle_capacities(m: &SteppedCircleModule, epsilon: &Rational) -> Result<(usize, usize)> {
    let (p, n) = spectral_densities(m, epsilon)?;
    Ok((p.capacity(), n.capacity()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(mu: &str, f: &str) -> Cell {
        Cell {
            mu: mu.parse().unwrap(),
            f: f.parse().unwrap(),
        }
    }

    #[test]
    fn angles_parse_and_compare() {
        assert_eq!(
            "pi/6".parse::<Angle>().unwrap(),
            Angle::PiMultiple(rat(1, 6))
        );
        assert_eq!(
            "-3*pi/4".parse::<Angle>().unwrap(),
            Angle::PiMultiple(rat(-3, 4))
        );
        assert_eq!("1/2".parse::<Angle>().unwrap(), Angle::Radians(rat(1, 2)));
        assert_eq!("-pi".parse::<Angle>().unwrap().to_string(), "-pi");
        let a: Angle = "pi/6".parse().unwrap();
        let b: Angle = "5*pi/6".parse().unwrap();
        assert_eq!(cmp_sin(&a, &b), Ordering::Equal);
        let c: Angle = "pi/7".parse().unwrap();
        let d: Angle = "6*pi/7".parse().unwrap();
        assert_eq!(cmp_sin(&c, &d), Ordering::Equal);
        assert_eq!(cmp_sin(&c, &a), Ordering::Less);
        let r: Angle = "1/2".parse().unwrap();
        assert_eq!(cmp_sin(&r, &a), Ordering::Less);
    }

    #[test]
    fn quarter_turn_maps() {
        let m = SteppedCircleModule::new(vec![cell("1", "pi/2")], vec![]).unwrap();
        let maps = h0_presentation(&m).unwrap();
        let f = maps[0].t.field().clone();
        let i = f.i();
        let half = f.rational(rat(1, 2));
        assert_eq!(maps[0].top, &i - &f.one());
        assert_eq!(maps[0].left, -(&half * &(&i + &f.one())));
        assert_eq!(maps[0].right, &half * &(&f.one() - &i));
        assert_eq!(maps[0].bottom, -(&i + &f.one()));
        assert!(maps[0].commutes());
        assert!(SteppedCircleModule::new(vec![cell("1", "0")], vec![]).is_err());
    }

    #[test]
    fn excision_and_densities() {
        let m = SteppedCircleModule::new(
            vec![cell("1", "pi"), cell("1/2", "pi/6"), cell("1/3", "-pi/6")],
            vec![],
        )
        .unwrap();
        let (small, big) = split_excision(&m, &rat(1, 1)).unwrap();
        assert_eq!((small.len(), big.len()), (2, 1));
        let (p, n) = spectral_densities(&m, &rat(1, 1)).unwrap();
        assert_eq!(p.step_value(&rat(1, 3)), Rational::zero());
        assert_eq!(p.step_value(&rat(1, 2)), rat(1, 2));
        assert_eq!(n.step_value(&rat(1, 2)), rat(1, 3));
        assert!(p.is_non_decreasing() && n.is_non_decreasing());
        assert_eq!(circle_capacities(&m, &rat(1, 1)).unwrap(), (0, 0));
    }

    #[test]
    fn monomial_profiles() {
        let prof = |k, side| Profile { k, sign: 1, side };
        let m = SteppedCircleModule::new(vec![], vec![prof(3, ProfileSide::Both)]).unwrap();
        assert_eq!(circle_capacities(&m, &rat(1, 1)).unwrap(), (3, 3));
        let m = SteppedCircleModule::new(vec![], vec![prof(2, ProfileSide::Right)]).unwrap();
        assert_eq!(circle_capacities(&m, &rat(1, 1)).unwrap(), (2, 0));
    }

    #[test]
    fn diagram_of_the_circle() {
        let f = Field::new(4).unwrap();
        let d = circle_diagram(&f);
        assert!(d.commutes());
        let p = d.presentation().unwrap();
        p.validate().unwrap();
        assert_eq!(CircleDiagram::from_presentation(&p).unwrap(), d);
    }
}
