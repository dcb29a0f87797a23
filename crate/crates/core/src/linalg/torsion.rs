use super::{smith_normal_form, LaurentMatrix};
use crate::scalars::{Field, LaurentPoly};

/// `count` copies of `K[t, t^-1] / (t - zeta_N^point)^multiplicity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct TorsionBlock {
    pub point: i64,
    pub multiplicity: usize,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionDecomposition {
    pub free_rank: usize,
    pub blocks: Vec<TorsionBlock>,
    /// Product of the parts of the invariant factors without roots among the
    /// `N`-th roots of unity, normalized.
    pub off_support_factor: LaurentPoly,
}

impl TorsionDecomposition {
    pub fn support(&self) -> Vec<i64> {
        let mut pts: Vec<i64> = self.blocks.iter().map(|b| b.point).collect();
        pts.dedup();
        pts
    }

    pub fn has_off_support(&self) -> bool {
        !self.off_support_factor.is_unit()
    }

    /// Multiplicities (with repetition) of blocks at a point.
    pub fn multiplicities_at(&self, point: i64) -> Vec<usize> {
        self.blocks
            .iter()
            .filter(|b| b.point == point)
            .flat_map(|b| std::iter::repeat_n(b.multiplicity, b.count))
            .collect()
    }
}

/// Factor one nonzero invariant factor into `(t - zeta^a)`-primary parts.
pub(crate) fn primary_parts(field: &Field, d: &LaurentPoly) -> (Vec<(i64, usize)>, LaurentPoly) {
    let n = field.conductor() as i64;
    let mut rest = d.normalize().1;
    let mut parts = Vec::new();
    for a in 0..n {
        if rest.width() == 0 {
            break;
        }
        let lin = LaurentPoly::linear(&field.zeta(a));
        let mut m = 0;
        loop {
            let (q, r) = rest.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            rest = q;
            m += 1;
        }
        if m > 0 {
            parts.push((a, m));
        }
    }
    (parts, rest.normalize().1)
}

/// Decompose the cokernel of a presentation matrix.
///
/// `free_rank` is `rows - rank`, the rank of the cokernel.
pub fn torsion_decompose(a: &LaurentMatrix) -> TorsionDecomposition {
    let field = a.field();
    let snf = smith_normal_form(a);
    let rank = snf.rank();
    let mut blocks: Vec<TorsionBlock> = Vec::new();
    let mut off = LaurentPoly::one(field);
    for d in snf.diagonal.iter().take(rank) {
        let (parts, rest) = primary_parts(field, d);
        off = off * rest;
        for (point, multiplicity) in parts {
            match blocks
                .iter_mut()
                .find(|b| b.point == point && b.multiplicity == multiplicity)
            {
                Some(b) => b.count += 1,
                None => blocks.push(TorsionBlock {
                    point,
                    multiplicity,
                    count: 1,
                }),
            }
        }
    }
    blocks.sort();
    TorsionDecomposition {
        free_rank: a.rows() - rank,
        blocks,
        off_support_factor: off.normalize().1,
    }
}

/// `dim T_j` for `j = 1, ..., max multiplicity` at the given point; empty when
/// the point is not in the support.
pub fn adic_filtration(dec: &TorsionDecomposition, point: i64) -> Vec<usize> {
    let ms = dec.multiplicities_at(point);
    let top = ms.iter().copied().max().unwrap_or(0);
    (1..=top)
        .map(|j| ms.iter().map(|&m| m.min(j)).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse_laurent;

    fn one(f: &Field, s: &str) -> LaurentMatrix {
        LaurentMatrix::from_rows(f, vec![vec![parse_laurent(f, s).unwrap()]]).unwrap()
    }

    #[test]
    fn circle_block() {
        let f = Field::new(4).unwrap();
        let dec = torsion_decompose(&one(&f, "t - 1"));
        assert_eq!(dec.free_rank, 0);
        assert_eq!(
            dec.blocks,
            vec![TorsionBlock {
                point: 0,
                multiplicity: 1,
                count: 1
            }]
        );
        assert!(!dec.has_off_support());
    }

    #[test]
    fn unit_has_nothing() {
        let f = Field::new(4).unwrap();
        let dec = torsion_decompose(&one(&f, "1"));
        assert_eq!(dec.free_rank, 0);
        assert!(dec.blocks.is_empty());
    }

    #[test]
    fn off_support_residue() {
        let f = Field::new(4).unwrap();
        let dec = torsion_decompose(&one(&f, "(t - 1)^2*(t - 2)"));
        assert_eq!(dec.blocks.len(), 1);
        assert_eq!(dec.blocks[0].multiplicity, 2);
        assert_eq!(dec.off_support_factor.to_string(), "t - 2");
        assert!(dec.has_off_support());
    }

    #[test]
    fn filtrations() {
        let f = Field::new(4).unwrap();
        let a = LaurentMatrix::diagonal(
            &f,
            &[
                parse_laurent(&f, "t - 1").unwrap(),
                parse_laurent(&f, "(t - 1)^2").unwrap(),
            ],
        );
        let dec = torsion_decompose(&a);
        assert_eq!(adic_filtration(&dec, 0), vec![2, 3]);
        assert!(adic_filtration(&dec, 1).is_empty());
        let dec = torsion_decompose(&one(&f, "(t - 1)^2"));
        assert_eq!(adic_filtration(&dec, 0), vec![1, 2]);
    }

    #[test]
    fn free_part_counts_rows() {
        let f = Field::new(4).unwrap();
        let a = LaurentMatrix::zeros(&f, 2, 1);
        assert_eq!(torsion_decompose(&a).free_rank, 2);
        let a = LaurentMatrix::zeros(&f, 1, 3);
        assert_eq!(torsion_decompose(&a).free_rank, 1);
    }
}
