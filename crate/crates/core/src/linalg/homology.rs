use super::{smith_normal_form, LaurentMatrix};
use crate::error::{Error, Result};
use crate::scalars::Field;

/// A presentation matrix of `ker d_out / im d_in` for `d_in: C_{k+1} -> C_k`
/// and `d_out: C_k -> C_{k-1}`; `None` stands for a zero map.
///
/// The result has one row per free generator of `ker d_out`.
pub fn homology_presentation(
    field: &Field,
    dim: usize,
    d_in: Option<&LaurentMatrix>,
    d_out: Option<&LaurentMatrix>,
) -> Result<LaurentMatrix> {
    if let Some(d) = d_in {
        if d.rows() != dim {
            return Err(Error::Dimension(format!(
                "incoming boundary has {} rows, expected {}",
                d.rows(),
                dim
            )));
        }
    }
    if let Some(d) = d_out {
        if d.cols() != dim {
            return Err(Error::Dimension(format!(
                "outgoing boundary has {} columns, expected {}",
                d.cols(),
                dim
            )));
        }
    }
    if let (Some(a), Some(b)) = (d_out, d_in) {
        if !a.checked_mul(b)?.is_zero() {
            return Err(Error::Dimension(
                "consecutive boundaries do not compose to zero".into(),
            ));
        }
    }
    let incoming = match d_in {
        Some(d) => d.clone(),
        None => LaurentMatrix::zeros(field, dim, 0),
    };
    let Some(d) = d_out.filter(|d| !d.is_zero()) else {
        return Ok(incoming);
    };
    // U d^T V = D, so ker d is spanned by the last rows of U and
    // coordinates in that basis are the last entries of U_inv^T w.
    let snf = smith_normal_form(&d.transpose());
    let r = snf.rank();
    let coords = snf.u_inv.transpose().checked_mul(&incoming)?;
    let rows: Vec<Vec<_>> = (r..dim).map(|i| coords.row(i).to_vec()).collect();
    if rows.is_empty() {
        return Ok(LaurentMatrix::zeros(field, 0, incoming.cols()));
    }
    if incoming.cols() == 0 {
        return Ok(LaurentMatrix::zeros(field, dim - r, 0));
    }
    LaurentMatrix::from_rows(field, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::torsion_decompose;
    use crate::scalars::parse_laurent;

    fn m(f: &Field, rows: &[&[&str]]) -> LaurentMatrix {
        LaurentMatrix::from_rows(
            f,
            rows.iter()
                .map(|r| r.iter().map(|s| parse_laurent(f, s).unwrap()).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn circle_homology() {
        let f = Field::new(4).unwrap();
        let d1 = m(&f, &[&["t - 1"]]);
        let h0 = homology_presentation(&f, 1, Some(&d1), None).unwrap();
        let dec = torsion_decompose(&h0);
        assert_eq!(dec.free_rank, 0);
        assert_eq!(dec.support(), vec![0]);
        let h1 = homology_presentation(&f, 1, None, Some(&d1)).unwrap();
        assert_eq!(h1.rows(), 0);
    }

    #[test]
    fn middle_degree_of_a_short_complex() {
        let f = Field::new(4).unwrap();
        // C2 -> C1 -> C0 with d1 = [1, -1], d2 = [(t-1)^2, (t-1)^2]^T
        let d1 = m(&f, &[&["1", "-1"]]);
        let d2 = m(&f, &[&["(t - 1)^2"], &["(t - 1)^2"]]);
        let h1 = homology_presentation(&f, 2, Some(&d2), Some(&d1)).unwrap();
        assert_eq!(h1.rows(), 1);
        let dec = torsion_decompose(&h1);
        assert_eq!(dec.multiplicities_at(0), vec![2]);
        let bad = m(&f, &[&["1"], &["0"]]);
        assert!(homology_presentation(&f, 2, Some(&bad), Some(&d1)).is_err());
    }
}
