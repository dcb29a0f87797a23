use super::LaurentMatrix;
use crate::scalars::LaurentPoly;

/// `U * A * V = D` with `D` diagonal, each nonzero diagonal entry dividing the
/// next and zeros last. Nonzero diagonal entries are normalized polynomials
/// (monic, nonzero constant term).
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: LaurentMatrix,
    pub u_inv: LaurentMatrix,
    pub v: LaurentMatrix,
    pub v_inv: LaurentMatrix,
    pub diagonal: Vec<LaurentPoly>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal as a full `rows x cols` matrix.
    pub fn d_matrix(&self) -> LaurentMatrix {
        let mut d = LaurentMatrix::zeros(self.u.field(), self.u.rows(), self.v.cols());
        for (i, x) in self.diagonal.iter().enumerate() {
            d[(i, i)] = x.clone();
        }
        d
    }

    /// Checks every defining property against `a`. Two-sided inverses make
    /// both determinants units.
    pub fn verify(&self, a: &LaurentMatrix) -> bool {
        let uav = &(&self.u * a) * &self.v;
        if uav != self.d_matrix() {
            return false;
        }
        if (&self.u * &self.u_inv) != LaurentMatrix::identity(a.field(), a.rows()) {
            return false;
        }
        if (&self.v * &self.v_inv) != LaurentMatrix::identity(a.field(), a.cols()) {
            return false;
        }
        let chain = self.diagonal.windows(2).all(|w| {
            if w[1].is_zero() {
                true
            } else {
                !w[0].is_zero() && w[0].divides(&w[1])
            }
        });
        chain
    }
}

struct Work {
    d: LaurentMatrix,
    u: LaurentMatrix,
    u_inv: LaurentMatrix,
    v: LaurentMatrix,
    v_inv: LaurentMatrix,
}

impl Work {
    fn row_add(&mut self, dst: usize, src: usize, f: &LaurentPoly) {
        self.d.add_row_multiple(dst, src, f);
        self.u.add_row_multiple(dst, src, f);
        self.u_inv.add_col_multiple(src, dst, &-f);
    }

    fn col_add(&mut self, dst: usize, src: usize, f: &LaurentPoly) {
        self.d.add_col_multiple(dst, src, f);
        self.v.add_col_multiple(dst, src, f);
        self.v_inv.add_row_multiple(src, dst, &-f);
    }

    fn row_swap(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn col_swap(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn row_scale(&mut self, i: usize, unit: &LaurentPoly) {
        let inv = unit.unit_inverse().expect("unit");
        self.d.scale_row(i, unit);
        self.u.scale_row(i, unit);
        self.u_inv.scale_col(i, &inv);
    }

    /// Scales row `i` so that `d[i][j]` is a normalized polynomial.
    fn normalize_row(&mut self, i: usize, j: usize) {
        let (unit, _) = self.d[(i, j)].normalize();
        if !unit.is_one() {
            self.row_scale(i, &unit.unit_inverse().expect("unit"));
        }
    }

    /// Row operations leaving `gcd` in `d[p][c]` and zero in `d[r][c]`.
    fn row_gcd(&mut self, p: usize, r: usize, c: usize) {
        while !self.d[(r, c)].is_zero() {
            let (q, rem) = self.d[(r, c)].div_rem(&self.d[(p, c)]);
            self.row_add(r, p, &-q);
            if rem.is_zero() {
                break;
            }
            self.row_swap(p, r);
            self.normalize_row(p, c);
        }
    }

    /// Reduces row `i` modulo the pivots to its right.
    fn reduce_row(&mut self, i: usize, pivots: &[(usize, usize)]) {
        let own = pivots.iter().find(|&&(r, _)| r == i).map(|&(_, c)| c);
        for &(r, c) in pivots {
            if r == i || own.is_some_and(|oc| c < oc) || self.d[(i, c)].is_zero() {
                continue;
            }
            let (q, _) = self.d[(i, c)].div_rem(&self.d[(r, c)]);
            if !q.is_zero() {
                self.row_add(i, r, &-q);
            }
        }
    }

    /// Row echelon form with normalized pivots and entries above each pivot
    /// reduced modulo it, built one row at a time.
    fn hermite(&mut self) {
        let (m, n) = (self.d.rows(), self.d.cols());
        // (row, column), sorted by column
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        for r in 0..m {
            for c in 0..n {
                if self.d[(r, c)].is_zero() {
                    continue;
                }
                if let Some(&(p, _)) = pivots.iter().find(|&&(_, pc)| pc == c) {
                    self.row_gcd(p, r, c);
                    continue;
                }
                self.normalize_row(r, c);
                let at = pivots.partition_point(|&(_, pc)| pc < c);
                pivots.insert(at, (r, c));
                break;
            }
            for k in 0..pivots.len() {
                let row = pivots[k].0;
                self.reduce_row(row, &pivots);
            }
        }
        for k in 0..pivots.len() {
            let r = pivots[k].0;
            if r != k {
                self.row_swap(k, r);
                for p in pivots.iter_mut().skip(k + 1) {
                    if p.0 == k {
                        p.0 = r;
                    }
                }
            }
        }
    }
}

pub fn smith_normal_form(a: &LaurentMatrix) -> SmithDecomposition {
    let field = a.field();
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        d: a.clone(),
        u: LaurentMatrix::identity(field, m),
        u_inv: LaurentMatrix::identity(field, m),
        v: LaurentMatrix::identity(field, n),
        v_inv: LaurentMatrix::identity(field, n),
    };
    w.hermite();
    let mut rank = 0;
    for k in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize, (usize, u64))> = None;
            for i in k..m {
                for j in k..n {
                    let e = &w.d[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    let key = (e.width(), height(e));
                    if best.as_ref().is_none_or(|(_, _, bk)| key < *bk) {
                        best = Some((i, j, key));
                    }
                }
            }
            let Some((pi, pj, _)) = best else { break };
            w.row_swap(k, pi);
            w.col_swap(k, pj);
            let (unit, _) = w.d[(k, k)].normalize();
            if !unit.is_one() {
                w.row_scale(k, &unit.unit_inverse().expect("unit"));
            }
            let pivot = w.d[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..m {
                if w.d[(i, k)].is_zero() {
                    continue;
                }
                let (q, r) = w.d[(i, k)].div_rem(&pivot);
                w.row_add(i, k, &-q);
                dirty |= !r.is_zero();
            }
            for j in k + 1..n {
                if w.d[(k, j)].is_zero() {
                    continue;
                }
                let (q, r) = w.d[(k, j)].div_rem(&pivot);
                w.col_add(j, k, &-q);
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            let bad = (k + 1..m).find(|&i| (k + 1..n).any(|j| !pivot.divides(&w.d[(i, j)])));
            match bad {
                Some(i) => w.row_add(k, i, &LaurentPoly::one(field)),
                None => {
                    rank = k + 1;
                    break;
                }
            }
        }
        if rank != k + 1 {
            break;
        }
    }
    let diagonal = (0..m.min(n))
        .map(|i| {
            if i < rank {
                w.d[(i, i)].clone()
            } else {
                LaurentPoly::zero(field)
            }
        })
        .collect();
    SmithDecomposition {
        u: w.u,
        u_inv: w.u_inv,
        v: w.v,
        v_inv: w.v_inv,
        diagonal,
    }
}

fn height(p: &LaurentPoly) -> u64 {
    p.terms()
        .flat_map(|(_, c)| c.coeffs())
        .map(|r| r.numer().bits() + r.denom().bits())
        .sum()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(a: &LaurentMatrix) -> LaurentPoly {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let field = a.field();
    let n = a.rows();
    if n == 0 {
        return LaurentPoly::one(field);
    }
    let mut m = a.clone();
    let mut negate = false;
    let mut prev = LaurentPoly::one(field);
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                Some(i) => {
                    m.swap_rows(k, i);
                    negate = !negate;
                }
                None => return LaurentPoly::zero(field),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[(i, j)] * &m[(k, k)]) - &(&m[(i, k)] * &m[(k, j)]);
                m[(i, j)] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[(k, k)].clone();
    }
    let d = m[(n - 1, n - 1)].clone();
    if negate {
        -d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_laurent, Field};

    fn mat(f: &Field, rows: &[&[&str]]) -> LaurentMatrix {
        LaurentMatrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|s| parse_laurent(f, s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_by_one() {
        let f = Field::new(4).unwrap();
        let a = mat(&f, &[&["t - 1"]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal[0].to_string(), "t - 1");
        let a = mat(&f, &[&["2*t^-3 - 2*t^-2"]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal[0].to_string(), "t - 1");
    }

    #[test]
    fn identity_and_zero() {
        let f = Field::new(4).unwrap();
        let a = LaurentMatrix::identity(&f, 2);
        let s = smith_normal_form(&a);
        assert!(s.diagonal.iter().all(LaurentPoly::is_one));
        let z = LaurentMatrix::zeros(&f, 2, 3);
        let s = smith_normal_form(&z);
        assert_eq!(s.rank(), 0);
        assert!(s.verify(&z));
    }

    #[test]
    fn scrambled_diagonal() {
        let f = Field::new(4).unwrap();
        let d = mat(&f, &[&["t - 1", "0"], &["0", "(t - 1)*(t - i)"]]);
        let p = mat(&f, &[&["1", "t + 2"], &["0", "1"]]);
        let q = mat(&f, &[&["t^-1", "0"], &["3*t", "1"]]);
        let a = &(&p * &d) * &q;
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal[0].to_string(), "t - 1");
        let expect = parse_laurent(&f, "(t - 1)*(t - i)").unwrap();
        assert_eq!(s.diagonal[1], expect);
    }

    #[test]
    fn coprime_entries_collapse() {
        let f = Field::new(4).unwrap();
        let a = mat(&f, &[&["t - 1", "0"], &["0", "t + 1"]]);
        let s = smith_normal_form(&a);
        assert!(s.verify(&a));
        assert!(s.diagonal[0].is_one());
        assert_eq!(s.diagonal[1], parse_laurent(&f, "t^2 - 1").unwrap());
    }

    #[test]
    fn bareiss() {
        let f = Field::new(4).unwrap();
        let a = mat(&f, &[&["t", "1"], &["1", "t^-1"]]);
        assert!(determinant(&a).is_zero());
        let a = mat(&f, &[&["0", "t"], &["2", "5"]]);
        assert_eq!(determinant(&a), parse_laurent(&f, "-2*t").unwrap());
    }
}
