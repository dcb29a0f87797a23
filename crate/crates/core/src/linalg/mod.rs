//! Matrices over the Laurent ring and over the coefficient field.

mod homology;
pub mod kmat;
mod smith;
mod torsion;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalars::{forward_owned, Field, LaurentPoly};

pub use homology::homology_presentation;
pub use kmat::KMatrix;
pub use smith::{determinant, smith_normal_form, SmithDecomposition};
pub use torsion::{adic_filtration, torsion_decompose, TorsionBlock, TorsionDecomposition};

/// Dense row-major matrix with Laurent polynomial entries.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        LaurentMatrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![LaurentPoly::zero(field); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = LaurentPoly::one(field);
        }
        m
    }

    pub fn diagonal(field: &Field, d: &[LaurentPoly]) -> Self {
        let mut m = Self::zeros(field, d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged matrix rows".into()));
        }
        Ok(LaurentMatrix {
            field: field.clone(),
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn column(field: &Field, v: Vec<LaurentPoly>) -> Self {
        let n = v.len();
        LaurentMatrix {
            field: field.clone(),
            rows: n,
            cols: 1,
            entries: v,
        }
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    /// Conjugate transpose under the involution of the Laurent ring.
    pub fn dagger(&self) -> Self {
        let mut m = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].involution();
            }
        }
        m
    }

    pub fn scale(&self, p: &LaurentPoly) -> Self {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = &*e * p;
        }
        m
    }

    /// Block diagonal sum.
    pub fn direct_sum(&self, other: &LaurentMatrix) -> Self {
        let mut m = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        m
    }

    pub fn evaluate_at_root(&self, a: i64) -> KMatrix {
        let mut k = KMatrix::zeros(&self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                k[(i, j)] = self[(i, j)].evaluate_at_root(a);
            }
        }
        k
    }

    pub fn checked_mul(&self, rhs: &LaurentMatrix) -> Result<LaurentMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut m = Self::zeros(&self.field, self.rows, rhs.cols);
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
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(LaurentPoly::zero(&self.field), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += f * row[src]`
    pub(crate) fn add_row_multiple(&mut self, dst: usize, src: usize, f: &LaurentPoly) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * f;
            if !v.is_zero() {
                self[(dst, j)] = &self[(dst, j)] + &v;
            }
        }
    }

    /// `col[dst] += col[src] * f`
    pub(crate) fn add_col_multiple(&mut self, dst: usize, src: usize, f: &LaurentPoly) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * f;
            if !v.is_zero() {
                self[(i, dst)] = &self[(i, dst)] + &v;
            }
        }
    }

    pub(crate) fn scale_row(&mut self, i: usize, f: &LaurentPoly) {
        for j in 0..self.cols {
            self[(i, j)] = &self[(i, j)] * f;
        }
    }

    pub(crate) fn scale_col(&mut self, j: usize, f: &LaurentPoly) {
        for i in 0..self.rows {
            self[(i, j)] = &self[(i, j)] * f;
        }
    }
}

impl std::ops::Index<(usize, usize)> for LaurentMatrix {
    type Output = LaurentPoly;
    fn index(&self, (i, j): (usize, usize)) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for LaurentMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|p| p.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Mul<&'a LaurentMatrix> for &'a LaurentMatrix {
    type Output = LaurentMatrix;
    fn mul(self, rhs: &'a LaurentMatrix) -> LaurentMatrix {
        self.checked_mul(rhs).expect("matrix shapes")
    }
}

impl<'a> Add<&'a LaurentMatrix> for &'a LaurentMatrix {
    type Output = LaurentMatrix;
    fn add(self, rhs: &'a LaurentMatrix) -> LaurentMatrix {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "matrix shapes"
        );
        let mut m = self.clone();
        for (a, b) in m.entries.iter_mut().zip(&rhs.entries) {
            *a = &*a + b;
        }
        m
    }
}

impl<'a> Sub<&'a LaurentMatrix> for &'a LaurentMatrix {
    type Output = LaurentMatrix;
    fn sub(self, rhs: &'a LaurentMatrix) -> LaurentMatrix {
        self + &(-rhs)
    }
}

impl Neg for &LaurentMatrix {
    type Output = LaurentMatrix;
    fn neg(self) -> LaurentMatrix {
        let mut m = self.clone();
        for e in &mut m.entries {
            *e = -&*e;
        }
        m
    }
}

impl Neg for LaurentMatrix {
    type Output = LaurentMatrix;
    fn neg(self) -> LaurentMatrix {
        -&self
    }
}

forward_owned!(Add, add, LaurentMatrix);
forward_owned!(Sub, sub, LaurentMatrix);
forward_owned!(Mul, mul, LaurentMatrix);
