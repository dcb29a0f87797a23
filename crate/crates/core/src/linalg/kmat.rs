//! Dense linear algebra over the cyclotomic field.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use crate::error::{Error, Result};
use crate::scalars::{sign_of_real, Cyc, Field};

#[derive(Clone, PartialEq, Eq)]
pub struct KMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Cyc>,
}

/// Counts of positive, negative and zero squares of a Hermitian matrix.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl KMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        KMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Cyc>]) -> Self {
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row length");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_cols(field: &Field, rows: usize, cols: &[Vec<Cyc>]) -> Self {
        Self::from_rows(field, rows, cols).transpose()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> Vec<Cyc> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<Cyc> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Cyc::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn scale(&self, c: &Cyc) -> Self {
        let mut m = self.clone();
        for x in &mut m.data {
            *x = &*x * c;
        }
        m
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.dagger()
    }

    pub fn mul_vec(&self, v: &[Cyc]) -> Vec<Cyc> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = &self[(i, j)];
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (KMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.cols {
                    if !m[(r, j)].is_zero() {
                        m[(i, j)] = &m[(i, j)] - &(&f * &m[(r, j)]);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Cyc>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -&r[(i, f)];
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`.
    pub fn solve(&self, b: &[Cyc]) -> Option<Vec<Cyc>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(&self.field, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<KMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || (n > 0 && pivots[n - 1] != n - 1) {
            return None;
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Inertia of a Hermitian matrix via congruence with exact pivot signs.
    pub fn inertia(&self) -> Result<Inertia> {
        if !self.is_hermitian() {
            return Err(Error::NotHermitian("Hermitian".into()));
        }
        let mut m = self.clone();
        let mut active: Vec<usize> = (0..self.rows).collect();
        let mut out = Inertia::default();
        while !active.is_empty() {
            let pivot = match active.iter().copied().find(|&i| !m[(i, i)].is_zero()) {
                Some(i) => i,
                None => {
                    let pair = active.iter().find_map(|&i| {
                        active
                            .iter()
                            .find(|&&j| j != i && !m[(i, j)].is_zero())
                            .map(|&j| (i, j))
                    });
                    let Some((i, j)) = pair else { break };
                    // e_i -> e_i + conj(m_ij) e_j makes the diagonal 2|m_ij|^2
                    let lam = m[(i, j)].conj();
                    for &r in &active {
                        m[(r, i)] = &m[(r, i)] + &(&lam * &m[(r, j)]);
                    }
                    let lc = lam.conj();
                    for &c in &active {
                        m[(i, c)] = &m[(i, c)] + &(&lc * &m[(j, c)]);
                    }
                    i
                }
            };
            let d = m[(pivot, pivot)].clone();
            match sign_of_real(&d)? {
                1 => out.positive += 1,
                -1 => out.negative += 1,
                _ => unreachable!("zero pivot"),
            }
            active.retain(|&i| i != pivot);
            let dinv = d.inv().expect("nonzero pivot");
            for &a in &active {
                if m[(a, pivot)].is_zero() {
                    continue;
                }
                let fa = &m[(a, pivot)] * &dinv;
                for &b in &active {
                    if !m[(pivot, b)].is_zero() {
                        m[(a, b)] = &m[(a, b)] - &(&fa * &m[(pivot, b)]);
                    }
                }
            }
        }
        out.zero = active.len();
        Ok(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl Index<(usize, usize)> for KMatrix {
    type Output = Cyc;
    fn index(&self, (i, j): (usize, usize)) -> &Cyc {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for KMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cyc {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Mul<&'a KMatrix> for &'a KMatrix {
    type Output = KMatrix;
    fn mul(self, rhs: &'a KMatrix) -> KMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix shapes");
        let mut m = KMatrix::zeros(&self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        m[(i, j)] = &m[(i, j)] + &(a * b);
                    }
                }
            }
        }
        m
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row-reduced basis of the span of `vectors`.
pub fn span_basis(field: &Field, dim: usize, vectors: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = KMatrix::from_rows(field, dim, vectors).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}

pub fn span_dim(field: &Field, dim: usize, vectors: &[Vec<Cyc>]) -> usize {
    span_basis(field, dim, vectors).len()
}

pub fn span_contains(field: &Field, dim: usize, basis: &[Vec<Cyc>], v: &[Cyc]) -> bool {
    let mut all = basis.to_vec();
    let before = span_dim(field, dim, &all);
    all.push(v.to_vec());
    span_dim(field, dim, &all) == before
}

pub fn intersect(field: &Field, dim: usize, a: &[Vec<Cyc>], b: &[Vec<Cyc>]) -> Vec<Vec<Cyc>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    // x = sum p_i a_i = sum q_j b_j  <=>  [A^T | -B^T] (p, q) = 0
    let na = a.len();
    let mut cols: Vec<Vec<Cyc>> = a.to_vec();
    cols.extend(b.iter().map(|v| v.iter().map(|x| -x).collect()));
    let m = KMatrix::from_cols(field, dim, &cols);
    let vecs: Vec<Vec<Cyc>> = m
        .kernel()
        .into_iter()
        .map(|k| combine(field, dim, &a.to_vec(), &k[..na]))
        .collect();
    span_basis(field, dim, &vecs)
}

/// `sum coeffs[i] * vectors[i]`
pub fn combine(field: &Field, dim: usize, vectors: &[Vec<Cyc>], coeffs: &[Cyc]) -> Vec<Cyc> {
    let mut out = vec![field.zero(); dim];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            if !x.is_zero() {
                *o = &*o + &(c * x);
            }
        }
    }
    out
}

/// Jordan chains of a nilpotent matrix: generators `v` with orders `k` such
/// that the vectors `S^l v` (`l < k`) form a basis.
pub fn jordan_chains(s: &KMatrix) -> Vec<(Vec<Cyc>, usize)> {
    let field = s.field().clone();
    let n = s.rows();
    let mut kernels: Vec<Vec<Vec<Cyc>>> = vec![Vec::new()];
    let mut power = KMatrix::identity(&field, n);
    loop {
        power = &power * s;
        let k = span_basis(&field, n, &power.kernel());
        let done = k.len() == n;
        kernels.push(k);
        if done || kernels.len() > n + 1 {
            break;
        }
    }
    let top = kernels.len() - 1;
    let mut chains: Vec<(Vec<Cyc>, usize)> = Vec::new();
    for j in (1..=top).rev() {
        let mut current = kernels[j - 1].clone();
        for (v, order) in &chains {
            let mut w = v.clone();
            for _ in 0..order - j {
                w = s.mul_vec(&w);
            }
            current.push(w);
        }
        let mut dim = span_dim(&field, n, &current);
        for v in &kernels[j] {
            current.push(v.clone());
            let d = span_dim(&field, n, &current);
            if d > dim {
                dim = d;
                chains.push((v.clone(), j));
            } else {
                current.pop();
            }
        }
    }
    chains
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::Rational;
    use num_bigint::BigInt;

    fn k() -> Field {
        Field::new(4).unwrap()
    }

    fn int_rows(f: &Field, rows: &[&[i64]]) -> KMatrix {
        let v: Vec<Vec<Cyc>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| f.integer(x)).collect())
            .collect();
        KMatrix::from_rows(f, rows[0].len(), &v)
    }

    #[test]
    fn kernel_and_solve() {
        let f = k();
        let m = int_rows(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            assert!(m.mul_vec(v).iter().all(Cyc::is_zero));
        }
        let b = vec![f.integer(1), f.integer(2)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
        assert!(m.solve(&[f.integer(1), f.integer(3)]).is_none());
    }

    #[test]
    fn inverse() {
        let f = k();
        let mut m = int_rows(&f, &[&[2, 1], &[1, 1]]);
        m[(0, 1)] = f.i();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, KMatrix::identity(&f, 2));
    }

    #[test]
    fn inertia_counts() {
        let f = k();
        let m = int_rows(&f, &[&[0, 1], &[1, 0]]);
        let i = m.inertia().unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 1, 0));
        let mut h = int_rows(&f, &[&[1, 0, 0], &[0, 0, 0], &[0, 0, 0]]);
        h[(1, 2)] = f.i();
        h[(2, 1)] = -f.i();
        let i = h.inertia().unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (2, 1, 0));
        let d = int_rows(&f, &[&[2, 0], &[0, 0]]);
        let i = d.inertia().unwrap();
        assert_eq!((i.positive, i.negative, i.zero), (1, 0, 1));
        let half = f.rational(Rational::new(BigInt::from(1), BigInt::from(2)));
        let mut g = int_rows(&f, &[&[1, 0], &[0, 1]]);
        g[(0, 1)] = half.clone();
        g[(1, 0)] = half;
        assert_eq!(g.inertia().unwrap().positive, 2);
    }

    #[test]
    fn jordan() {
        let f = k();
        // one chain of length 2 and one of length 1
        let s = int_rows(&f, &[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
        let mut orders: Vec<usize> = jordan_chains(&s).into_iter().map(|c| c.1).collect();
        orders.sort();
        assert_eq!(orders, vec![1, 2]);
        let z = KMatrix::zeros(&f, 2, 2);
        assert_eq!(jordan_chains(&z).len(), 2);
        assert!(jordan_chains(&KMatrix::zeros(&f, 0, 0)).is_empty());
    }

    #[test]
    fn subspaces() {
        let f = k();
        let e = |a: i64, b: i64, c: i64| vec![f.integer(a), f.integer(b), f.integer(c)];
        let a = vec![e(1, 0, 0), e(0, 1, 0)];
        let b = vec![e(0, 1, 0), e(0, 0, 1)];
        let i = intersect(&f, 3, &a, &b);
        assert_eq!(i.len(), 1);
        assert!(span_contains(&f, 3, &i, &e(0, 2, 0)));
    }
}
